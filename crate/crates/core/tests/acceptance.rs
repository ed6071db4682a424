//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use telegate::executor::enumerate_branches;
use telegate::prelude::*;
use telegate::resources::{render_table2, table1, table2, GateKind};
use telegate::verifier::DEFAULT_TOL;

use common::{bundled, compiled, fig2, random_config};

const AMP_TOL: f64 = 1e-12;
const PROB_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Input with |110> and |111> amplitudes exchanged: the published final
/// state of the three-qubit Toffoli, written out independently of the
/// library's gate code.
fn swap_d6_d7(input: &StateVector) -> Vec<num_complex::Complex64> {
    let mut a = input.amplitudes().to_vec();
    a.swap(6, 7);
    a
}

/// Random-input check of a three-data-qubit Toffoli scenario against the
/// written-out final state and against `apply_ideal`.
fn toffoli_fixture(name: &str, branches: usize, budget: Duration, seed: u64) -> Outcome {
    let start = Instant::now();
    let (spec, own) = bundled(name);
    let program = compiled(&spec, &own);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut count_ok = true;
    let mut checked = 0;
    for _ in 0..100 {
        let input = random_state(3, &mut rng).unwrap();
        let expected = swap_d6_d7(&input);
        let ideal = apply_ideal(&spec, &own, &input).unwrap();
        let rs = enumerate_branches(&program, &input).unwrap();
        count_ok &= rs.len() == branches;
        for r in &rs {
            let data = r.data_state(&program).unwrap();
            let dev = data
                .amplitudes()
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(dev).max(data.max_deviation(&ideal).unwrap());
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        count_ok && worst <= AMP_TOL && elapsed < budget,
        format!("{checked} branch comparisons, max deviation {worst:.2e}, {elapsed:.2?} (budget {budget:?})"),
    )
}

fn criterion_1() -> Outcome {
    toffoli_fixture("bipartite_case1", 4, Duration::from_secs(1), 101)
}

fn criterion_2() -> Outcome {
    toffoli_fixture("bipartite_case2", 4, Duration::from_secs(1), 102)
}

fn criterion_3() -> Outcome {
    toffoli_fixture("tripartite", 16, Duration::from_secs(2), 103)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    let mut all_pass = true;
    let mut branches = 0;
    let mut max_qubits = 0;
    for i in 0..50 {
        let nodes = rng.random_range(2..=4);
        let data = rng.random_range(2.max(nodes)..=12);
        let u = match i % 4 {
            0 => Unitary::x(),
            1 => Unitary::z(),
            2 => Unitary::h(),
            _ => random_unitary(&mut rng),
        };
        let (spec, own) = random_config(&mut rng, nodes, data, u);
        let inputs: Vec<_> = (0..2).map(|_| random_state(data, &mut rng).unwrap()).collect();
        let report = verify_gate(&spec, &own, &inputs, DEFAULT_TOL).unwrap();
        all_pass &= report.pass && report.max_probability_defect <= PROB_TOL;
        worst = worst.max(report.max_deviation);
        branches += report.branches.len();
        max_qubits = max_qubits.max(report.spec.total_qubits);
    }
    let elapsed = start.elapsed();
    outcome(
        all_pass && elapsed < Duration::from_secs(60),
        format!(
            "50 configurations, {branches} branches, up to {max_qubits} qubits, max deviation {worst:.2e}, {elapsed:.2?}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut rows = 0;
    for k in [0usize, 1, 2, 3, 5] {
        // controls spread over A, B and the target's node T
        let mut qubits: Vec<(String, &str)> = (0..k).map(|i| (format!("c{i}"), ["A", "B", "T"][i % 3])).collect();
        qubits.push(("t".into(), "T"));
        let own = Ownership::new(qubits.iter().map(|(l, n)| (l.as_str(), *n))).unwrap();
        let controls: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
        let spec = DistributedGateSpec::toffoli(controls, "t");
        let table = truth_table(&spec, &own).unwrap();
        ok &= table.rows.len() == 1 << (k + 1);
        for row in &table.rows {
            let all_ones = row.input[..k].chars().all(|c| c == '1');
            let mut want: Vec<char> = row.input.chars().collect();
            if all_ones {
                want[k] = if want[k] == '0' { '1' } else { '0' };
            }
            ok &= row.output == want.into_iter().collect::<String>();
        }
        rows += table.rows.len();
    }
    outcome(ok, format!("k in {{0,1,2,3,5}}, {rows} truth-table rows"))
}

fn criterion_6() -> Outcome {
    let rows = table1().unwrap();
    let got: Vec<_> = rows
        .iter()
        .map(|r| {
            let p = &r.proposed;
            (
                p.entangled_pairs,
                p.ops(&GateKind::Mcx, 2),
                p.ops(&GateKind::Mcx, 3),
                p.total_ops(),
                p.single_qubit_measurements,
            )
        })
        .collect();
    // (pairs, CNOT, Toffoli, total ops, SM)
    let want = [(1, 1, 1, 2, 2), (1, 1, 1, 2, 2), (2, 2, 1, 3, 4)];
    outcome(got == want, format!("{got:?}"))
}

fn criterion_7() -> Outcome {
    let ns = [1, 2, 3, 4, 5];
    let rows = table2(&ns).unwrap();
    let mut ok = rows.len() == 5;
    for row in &rows {
        let (n, p, b) = (row.n, &row.proposed, &row.baseline);
        ok &= p.entangled_pairs == 2 && p.single_qubit_measurements == 4;
        ok &= p.ops(&GateKind::Mcx, n + 1) == 2 && p.ops(&GateKind::Mcx, n + 2) == 1 && p.total_ops() == 3;
        ok &= b.entangled_pairs == 3 * n - 1 && b.single_qubit_measurements == 2 * (3 * n - 1);
    }
    let text = render_table2(&rows);
    let printed: Vec<(usize, usize)> = text
        .lines()
        .skip(2)
        .map(|l| {
            let cols: Vec<&str> = l.split('|').nth(2).unwrap().split_whitespace().collect();
            (cols[0].parse().unwrap(), cols[2].parse().unwrap())
        })
        .collect();
    ok &= printed == [(2, 4), (5, 10), (8, 16), (11, 22), (14, 28)];
    // the compiled scenario is the same gate the fig2 helper describes
    ok &= fig2(3).0.controls.len() == 8;
    outcome(ok, format!("baseline (pairs, SM) printed {printed:?}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);

    // norm drift over 10^4 random gates
    let n = 6;
    let mut state = random_state(n, &mut rng).unwrap();
    let mut drift: f64 = 0.0;
    for _ in 0..10_000 {
        let mut qs: Vec<usize> = (0..n).collect();
        let k = rng.random_range(0..n);
        let (target, rest) = {
            let t = qs.swap_remove(rng.random_range(0..qs.len()));
            (t, qs)
        };
        let controls: Vec<usize> = rest.choose_multiple(&mut rng, k.min(n - 1)).copied().collect();
        let u = random_unitary(&mut rng);
        let before = state.norm_sqr();
        state.apply_controlled_u(&controls, target, &u).unwrap();
        drift = drift.max((state.norm_sqr() - before).abs());
    }
    let norm_ok = drift <= AMP_TOL && (state.norm_sqr() - 1.0).abs() <= 1e-10;

    // probability conservation and branch agreement
    let mut prob_defect: f64 = 0.0;
    let mut disagreement: f64 = 0.0;
    let mut programs = Vec::new();
    for _ in 0..20 {
        let nodes = rng.random_range(2..=4);
        let data = rng.random_range(nodes.max(2)..=9);
        let u = random_unitary(&mut rng);
        let (spec, own) = random_config(&mut rng, nodes, data, u);
        let program = compiled(&spec, &own);
        let input = random_state(data, &mut rng).unwrap();
        let rs = enumerate_branches(&program, &input).unwrap();
        let total: f64 = rs.iter().map(|r| r.probability).sum();
        prob_defect = prob_defect.max((total - 1.0).abs());
        let first = rs[0].data_state(&program).unwrap();
        for r in &rs[1..] {
            disagreement = disagreement.max(r.data_state(&program).unwrap().max_deviation(&first).unwrap());
        }
        programs.push(program);
    }

    // injected cross-node gates
    let mut detected = 0;
    let mut mutants = 0;
    let mut pool = programs.iter().cycle();
    while mutants < 20 {
        let program = pool.next().unwrap();
        let layout = &program.layout;
        let nodes = layout.nodes();
        if nodes.len() < 2 {
            continue;
        }
        let node = nodes.choose(&mut rng).unwrap().clone();
        let own_qs: Vec<usize> = (0..layout.len()).filter(|&q| *layout.owner(q) == node).collect();
        let foreign: Vec<usize> = (0..layout.len()).filter(|&q| *layout.owner(q) != node).collect();
        let a = *own_qs.choose(&mut rng).unwrap();
        let b = *foreign.choose(&mut rng).unwrap();
        let (controls, target) = if rng.random_bool(0.5) { (vec![a], b) } else { (vec![b], a) };
        let injected = match mutants % 3 {
            0 => Instruction::LocalMcx { node, controls, target },
            1 => Instruction::LocalMcu {
                node,
                controls,
                target,
                u: Unitary::h(),
            },
            _ => Instruction::CondX {
                node,
                qubit: b,
                tag: Tag::new("forged"),
            },
        };
        let mut mutant = program.clone();
        let at = rng.random_range(0..=mutant.instructions.len());
        mutant.instructions.insert(at, injected);
        mutants += 1;
        if matches!(check_locality(&mutant), Err(v) if v.iter().any(|x| x.instruction == at)) {
            detected += 1;
        }
    }

    outcome(
        norm_ok && prob_defect <= PROB_TOL && disagreement <= AMP_TOL && detected == mutants,
        format!(
            "norm drift {drift:.2e}/op, probability defect {prob_defect:.2e}, branch disagreement {disagreement:.2e}, locality {detected}/{mutants} rejected"
        ),
    )
}

fn criterion_9() -> Outcome {
    let (spec, own) = bundled("tripartite");
    let program = compiled(&spec, &own);
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let input = random_state(3, &mut rng).unwrap();
    let enumerated: BTreeMap<String, BranchResult> = enumerate_branches(&program, &input)
        .unwrap()
        .into_iter()
        .map(|r| (r.bits(), r))
        .collect();
    let shots = 10_000;
    let mut freq: BTreeMap<String, usize> = BTreeMap::new();
    let mut exact = true;
    for seed in 0..shots {
        let r = run_sampled(&program, &input, seed).unwrap();
        exact &= enumerated.get(&r.bits()).is_some_and(|e| e.final_state == r.final_state);
        *freq.entry(r.bits()).or_default() += 1;
    }
    let worst = enumerated
        .keys()
        .map(|b| (freq.get(b).copied().unwrap_or(0) as f64 / shots as f64 - 0.0625).abs())
        .fold(0.0, f64::max);
    outcome(
        enumerated.len() == 16 && freq.len() == 16 && worst <= 0.01 && exact,
        format!("16 branches, max |freq - 0.0625| = {worst:.4}, sampled states exact: {exact}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("bipartite case 1 correctness", criterion_1),
        ("bipartite case 2 correctness", criterion_2),
        ("tripartite correctness", criterion_3),
        ("general protocol, 50 random configurations", criterion_4),
        ("truth tables", criterion_5),
        ("table 1 reproduction", criterion_6),
        ("table 2 reproduction", criterion_7),
        ("property suite", criterion_8),
        ("sampling consistency", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "criterion {} [{}] {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
