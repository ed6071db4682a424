// Controls on nodes A and B, target on node C. Every one of the 16
// measurement branches leaves the data qubits in the ideal output.

use telegate::prelude::*;

fn main() -> telegate::Result<()> {
    let r = Scenario::bundled("tripartite").expect("bundled").resolve()?;
    let program = compile(&plan_groups(&r.spec, &r.ownership)?, &r.spec.u);

    // |110>: both controls set, target flips.
    let input = StateVector::basis(3, 0b110)?;
    let ideal = apply_ideal(&r.spec, &r.ownership, &input)?;
    for branch in enumerate_branches(&program, &input)? {
        let out = branch.data_state(&program)?;
        println!(
            "branch {}  p={:.4}  fidelity={:.12}",
            branch.bits(),
            branch.probability,
            out.fidelity(&ideal)?
        );
    }
    println!("{}", account(&program).summary());
    Ok(())
}
