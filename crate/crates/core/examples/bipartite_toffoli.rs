// A Toffoli whose controls sit on two nodes, built from one shared Bell pair.

use telegate::prelude::*;

fn main() -> telegate::Result<()> {
    let own = Ownership::new([("A1", "A"), ("B1", "B"), ("B2", "B")])?;
    let spec = DistributedGateSpec::toffoli(["A1", "B1"], "B2");
    let plan = plan_groups(&spec, &own)?;
    let program = compile(&plan, &spec.u);
    println!("{program}");

    let table = truth_table(&spec, &own)?;
    for row in table.changed() {
        println!("{} -> {}", row.input, row.output);
    }

    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    let inputs: Vec<_> = (0..4).map(|_| random_state(own.len(), &mut rng)).collect::<telegate::Result<_>>()?;
    let report = verify_gate(&spec, &own, &inputs, 1e-12)?;
    println!("{report}");
    assert!(report.pass);
    Ok(())
}
