// Forces a chosen branch and prints the executed instructions with
// classical bits and applied corrections, then the same trace as JSON.

use telegate::prelude::*;

fn main() -> telegate::Result<()> {
    let r = Scenario::bundled("tripartite").expect("bundled").resolve()?;
    let program = compile(&plan_groups(&r.spec, &r.ownership)?, &r.spec.u);
    let input = StateVector::basis(3, 0b111)?;

    let forced = forced_from_bits(&program, "1011")?;
    let branch = execute_branch(&program, &input, &forced)?;
    println!("branch {} probability {:.6}", branch.bits(), branch.probability);
    print!("{}", branch.render_trace());
    for m in &branch.channel.messages {
        println!("message {} {} -> {} bit {}", m.tag, m.from, m.to, m.bit);
    }
    println!("{}", serde_json::to_string_pretty(&branch.trace).expect("trace serializes"));
    Ok(())
}
