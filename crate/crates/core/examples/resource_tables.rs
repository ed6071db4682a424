// Resource counts of the compiled protocol next to the teleportation baseline.

fn main() -> telegate::Result<()> {
    print!("{}", telegate::resources::render_tables(&[1, 2, 3, 4, 5, 8])?);
    let r = telegate::resources::account_scenario(&telegate::prelude::Scenario::bundled("fig2_parametric:8").unwrap())?;
    println!("\nn=8 proposed: {}", r.summary());
    println!("n=8 baseline: {}", telegate::resources::baseline_teleport(8).summary());
    Ok(())
}
