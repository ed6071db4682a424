// Bell pair preparation, controlled gates and projective measurement on the
// dense simulator.

use telegate::prelude::*;

fn ket(s: &StateVector) -> String {
    let n = s.num_qubits();
    let terms: Vec<String> = s
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(i, a)| format!("({:.4}{:+.4}i)|{:0n$b}>", a.re, a.im, i))
        .collect();
    terms.join(" + ")
}

fn main() -> telegate::Result<()> {
    let mut s = StateVector::zero(3)?;
    s.prepare_bell(0, 1)?;
    println!("Bell pair on qubits 0,1: {}", ket(&s));

    s.apply_controlled_u(&[0, 1], 2, &Unitary::x())?;
    println!("after Toffoli:           {}", ket(&s));

    let p = s.probability(0, Basis::X, 1)?;
    println!("P(qubit 0 measures |->) = {p:.6}");

    let rec = s.measure_forced(0, Basis::Z, 1)?;
    println!("forced Z outcome 1 with p = {:.6}", rec.probability);
    println!("collapsed state:         {}", ket(&s));
    assert_eq!(s, StateVector::basis(3, 0b111)?);
    Ok(())
}
