// An arbitrary single-qubit U with controls spread over four nodes,
// including one control that lives on the target node.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use telegate::prelude::*;

fn main() -> telegate::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let u = random_unitary(&mut rng);
    let own = Ownership::new([
        ("a0", "A"),
        ("a1", "A"),
        ("b0", "B"),
        ("c0", "C"),
        ("d0", "D"),
        ("d1", "D"),
    ])?;
    let spec = DistributedGateSpec::new(["a0", "b0", "a1", "d0", "c0"], "d1", u);
    let plan = plan_groups(&spec, &own)?;
    for g in &plan.control_groups {
        println!("group {}: {:?} via {} / {}", g.node, g.controls, g.bell_local, g.bell_target);
    }
    println!("local controls on target node: {:?}", plan.target_group.controls);

    let program = compile(&plan, &spec.u);
    check_locality(&program).expect("compiled programs are local");
    println!("{program}");

    let inputs = vec![random_state(own.len(), &mut rng)?, random_state(own.len(), &mut rng)?];
    let report = verify_gate(&spec, &own, &inputs, 1e-12)?;
    println!("{report}");
    assert!(report.pass);
    Ok(())
}
