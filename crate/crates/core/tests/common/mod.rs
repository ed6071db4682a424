#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use telegate::prelude::*;

/// Random ownership over `nodes` nodes (each owning at least one qubit when
/// `data >= nodes`), a random target and a random non-empty control set.
pub fn random_config<R: Rng>(rng: &mut R, nodes: usize, data: usize, u: Unitary) -> (DistributedGateSpec, Ownership) {
    let names: Vec<String> = (0..nodes).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
    let mut owners: Vec<usize> = (0..data).map(|i| if i < nodes { i } else { rng.random_range(0..nodes) }).collect();
    owners.shuffle(rng);
    let qubits: Vec<(String, String)> = owners
        .iter()
        .enumerate()
        .map(|(i, &n)| (format!("{}{}", names[n], i), names[n].clone()))
        .collect();
    let own = Ownership::new(qubits.iter().map(|(l, n)| (l.as_str(), n.as_str()))).unwrap();

    let mut labels: Vec<String> = qubits.into_iter().map(|(l, _)| l).collect();
    labels.shuffle(rng);
    let target = labels.pop().unwrap();
    let k = rng.random_range(1..=labels.len());
    labels.truncate(k);
    (DistributedGateSpec::new(labels, target, u), own)
}

pub fn compiled(spec: &DistributedGateSpec, own: &Ownership) -> Program {
    compile(&plan_groups(spec, own).unwrap(), &spec.u)
}

/// Three nodes with `n` qubits each, all but `C<n>` controlling `C<n>`.
pub fn fig2(n: usize) -> (DistributedGateSpec, Ownership) {
    let r = Scenario::bundled(&format!("fig2_parametric:{n}")).unwrap().resolve().unwrap();
    (r.spec, r.ownership)
}

pub fn bundled(name: &str) -> (DistributedGateSpec, Ownership) {
    let r = Scenario::bundled(name).unwrap().resolve().unwrap();
    (r.spec, r.ownership)
}
