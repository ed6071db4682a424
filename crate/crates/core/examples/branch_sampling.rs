// Seeded single-shot runs. Outcome frequencies approach the enumerated
// branch probabilities.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use telegate::prelude::*;

fn main() -> telegate::Result<()> {
    let r = Scenario::bundled("bipartite_case2").expect("bundled").resolve()?;
    let program = compile(&plan_groups(&r.spec, &r.ownership)?, &r.spec.u);
    let input = random_state(r.ownership.len(), &mut ChaCha8Rng::seed_from_u64(5))?;
    let ideal = apply_ideal(&r.spec, &r.ownership, &input)?;

    let shots = 2000;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..shots {
        let run = telegate::executor::run_with_rng(&program, &input, &mut rng)?;
        assert!(run.data_state(&program)?.max_deviation(&ideal)? < 1e-12);
        *counts.entry(run.bits()).or_default() += 1;
    }
    for branch in enumerate_branches(&program, &input)? {
        let seen = counts.get(&branch.bits()).copied().unwrap_or(0);
        println!(
            "{}  expected {:.4}  observed {:.4}",
            branch.bits(),
            branch.probability,
            seen as f64 / shots as f64
        );
    }
    Ok(())
}
