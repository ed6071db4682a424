//! Dense pure-state simulation.
//!
//! Register index 0 is the most significant bit of the amplitude index, so a
//! ket written `|q0 q1 q2>` reads left to right in descending significance.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Register cap used when `TELEGATE_MAX_QUBITS` is unset.
pub const DEFAULT_MAX_QUBITS: usize = 26;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "TELEGATE_MAX_QUBITS";

/// Branches with probability at or below this are treated as impossible.
pub const IMPOSSIBLE_BRANCH: f64 = 1e-14;

/// Norm slack accepted by [`StateVector::from_amplitudes`] before renormalizing.
pub const INPUT_NORM_TOL: f64 = 1e-9;

/// Entrywise tolerance for `U·U† = I`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Amplitude slack allowed outside the fixed assignment in
/// [`StateVector::extract_subregister`].
pub const FACTOR_TOL: f64 = 1e-12;

/// The register cap in effect, honouring `TELEGATE_MAX_QUBITS`.
pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Z => f.write_str("Z"),
            Basis::X => f.write_str("X"),
        }
    }
}

/// A 2×2 unitary acting on one qubit, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary([[Complex64; 2]; 2]);

impl Unitary {
    /// Checks unitarity to [`UNITARY_TOL`].
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let u = Unitary(m);
        if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonUnitary(f64::INFINITY));
        }
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NonUnitary(dev));
        }
        Ok(u)
    }

    /// Wraps `m` without checking it. Gate validation reports non-unitary
    /// matrices built this way.
    pub fn new_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        Unitary(m)
    }

    pub fn identity() -> Self {
        Unitary([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn x() -> Self {
        Unitary([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn z() -> Self {
        Unitary([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn h() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Unitary([[s, s], [s, -s]])
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        let m = self.0;
        Unitary([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Largest entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = self.0;
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let dot = m[i][0] * m[j][0].conj() + m[i][1] * m[j][1].conj();
                let want = if i == j { ONE } else { ZERO };
                dev = dev.max((dot - want).norm());
            }
        }
        dev
    }

    pub fn approx_eq(&self, other: &Unitary, tol: f64) -> bool {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Short name for the standard gates, `None` for anything else.
    pub fn name(&self) -> Option<&'static str> {
        const TOL: f64 = 1e-12;
        [
            ("I", Unitary::identity()),
            ("X", Unitary::x()),
            ("Z", Unitary::z()),
            ("H", Unitary::h()),
        ]
        .into_iter()
        .find(|(_, u)| self.approx_eq(u, TOL))
        .map(|(n, _)| n)
    }

    /// True when every entry is 0 or 1, i.e. `I` or `X`.
    pub fn is_permutation(&self, tol: f64) -> bool {
        self.approx_eq(&Unitary::x(), tol) || self.approx_eq(&Unitary::identity(), tol)
    }
}

impl fmt::Display for Unitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.name() {
            return f.write_str(name);
        }
        let m = self.0;
        write!(
            f,
            "[[{},{}],[{},{}]]",
            fmt_complex(m[0][0]),
            fmt_complex(m[0][1]),
            fmt_complex(m[1][0]),
            fmt_complex(m[1][1])
        )
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub basis: Basis,
    /// Z: 0 is |0>, 1 is |1>. X: 0 is |+>, 1 is |->.
    pub outcome: u8,
    pub probability: f64,
}

/// A normalized state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` under the register cap from [`max_qubits`].
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::zero_with_limit(num_qubits, max_qubits())
    }

    pub fn zero_with_limit(num_qubits: usize, max: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > max {
            return Err(Error::Capacity {
                requested: num_qubits,
                max,
            });
        }
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[0] = ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(num_qubits)?;
        if index >= s.amps.len() {
            return Err(Error::OutOfRange {
                index,
                num_qubits,
            });
        }
        s.amps[0] = ZERO;
        s.amps[index] = ONE;
        Ok(s)
    }

    /// Builds a state from raw amplitudes. The norm must already be within
    /// [`INPUT_NORM_TOL`] of one; the result is renormalized exactly.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        if let Some(i) = amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let norm_sqr: f64 = amps.iter().map(Complex64::norm_sqr).sum();
        if norm_sqr == 0.0 {
            return Err(Error::ZeroVector);
        }
        if (norm_sqr - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let num_qubits = len.trailing_zeros() as usize;
        let max = max_qubits();
        if num_qubits > max {
            return Err(Error::Capacity {
                requested: num_qubits,
                max,
            });
        }
        let scale = 1.0 / norm_sqr.sqrt();
        let amps = amps.into_iter().map(|z| z * scale).collect();
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Bit mask selecting `qubit` in an amplitude index.
    pub fn mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            Err(Error::OutOfRange {
                index,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies `u` to `target` on the subspace where every control is 1.
    /// An empty control set applies `u` unconditionally.
    pub fn apply_controlled_u(&mut self, controls: &[usize], target: usize, u: &Unitary) -> Result<()> {
        self.check_index(target)?;
        let mut cmask = 0;
        for &c in controls {
            self.check_index(c)?;
            let m = self.mask(c);
            if c == target || cmask & m != 0 {
                return Err(Error::IndexCollision(c));
            }
            cmask |= m;
        }
        let tmask = self.mask(target);
        let [[u00, u01], [u10, u11]] = u.0;
        for i in 0..self.amps.len() {
            if i & tmask != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | tmask;
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = u00 * a0 + u01 * a1;
            self.amps[j] = u10 * a0 + u11 * a1;
        }
        Ok(())
    }

    pub fn apply(&mut self, target: usize, u: &Unitary) -> Result<()> {
        self.apply_controlled_u(&[], target, u)
    }

    /// Puts `q1`, `q2` (both in |0>) into (|00> + |11>)/√2 via H then CNOT.
    pub fn prepare_bell(&mut self, q1: usize, q2: usize) -> Result<()> {
        self.check_index(q1)?;
        self.check_index(q2)?;
        if q1 == q2 {
            return Err(Error::IndexCollision(q1));
        }
        for q in [q1, q2] {
            if self.probability(q, Basis::Z, 1)? > FACTOR_TOL * FACTOR_TOL {
                return Err(Error::BellPrecondition(q));
            }
        }
        self.apply(q1, &Unitary::h())?;
        self.apply_controlled_u(&[q1], q2, &Unitary::x())
    }

    /// Probability of `outcome` when measuring `qubit` in `basis`.
    pub fn probability(&self, qubit: usize, basis: Basis, outcome: u8) -> Result<f64> {
        self.check_index(qubit)?;
        let m = self.mask(qubit);
        let want = if outcome == 0 { 0 } else { m };
        Ok(match basis {
            Basis::Z => self
                .amps
                .iter()
                .enumerate()
                .filter(|(i, _)| i & m == want)
                .map(|(_, a)| a.norm_sqr())
                .sum(),
            Basis::X => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let sign = if outcome == 0 { 1.0 } else { -1.0 };
                self.amps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i & m == 0)
                    .map(|(i, a)| ((a + self.amps[i | m] * sign) * s).norm_sqr())
                    .sum()
            }
        })
    }

    /// Projects onto `outcome`. X-basis measurement rotates with H first and
    /// leaves the qubit in the computational state equal to the outcome.
    pub fn measure_forced(&mut self, qubit: usize, basis: Basis, outcome: u8) -> Result<MeasurementRecord> {
        self.check_index(qubit)?;
        let outcome = u8::from(outcome != 0);
        if basis == Basis::X {
            self.apply(qubit, &Unitary::h())?;
        }
        let p = self.probability(qubit, Basis::Z, outcome)?;
        if p <= IMPOSSIBLE_BRANCH {
            if basis == Basis::X {
                self.apply(qubit, &Unitary::h())?;
            }
            return Err(Error::ImpossibleBranch {
                qubit,
                outcome,
                probability: p,
            });
        }
        self.collapse(qubit, outcome, p);
        Ok(MeasurementRecord {
            qubit,
            basis,
            outcome,
            probability: p,
        })
    }

    /// Draws the outcome from the Born rule using `rng`.
    pub fn measure<R: Rng + ?Sized>(&mut self, qubit: usize, basis: Basis, rng: &mut R) -> Result<MeasurementRecord> {
        let p0 = self.probability(qubit, basis, 0)?;
        let outcome = if rng.random::<f64>() < p0 { 0 } else { 1 };
        self.measure_forced(qubit, basis, outcome)
    }

    fn collapse(&mut self, qubit: usize, outcome: u8, p: f64) {
        let m = self.mask(qubit);
        let keep = if outcome == 0 { 0 } else { m };
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m == keep {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
    }

    /// Returns the state of the `keep` qubits (in the given order), given
    /// that every other qubit is fixed to a known bit.
    pub fn extract_subregister(&self, keep: &[usize], fixed: &[(usize, u8)]) -> Result<StateVector> {
        let mut seen = vec![false; self.num_qubits];
        for &q in keep.iter().chain(fixed.iter().map(|(q, _)| q)) {
            self.check_index(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::BadPartition(format!("qubit {q} listed twice")));
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::BadPartition(format!("qubit {q} neither kept nor fixed")));
        }
        if keep.is_empty() {
            return Err(Error::BadPartition("no qubits kept".into()));
        }

        let mut fixed_mask = 0;
        let mut fixed_bits = 0;
        for &(q, b) in fixed {
            fixed_mask |= self.mask(q);
            if b != 0 {
                fixed_bits |= self.mask(q);
            }
        }
        for (i, a) in self.amps.iter().enumerate() {
            if i & fixed_mask != fixed_bits && a.norm() > FACTOR_TOL {
                let q = fixed
                    .iter()
                    .find(|(q, b)| (i & self.mask(*q) != 0) != (*b != 0))
                    .map_or(0, |(q, _)| *q);
                return Err(Error::Factorization(q));
            }
        }

        let k = keep.len();
        let mut amps = vec![ZERO; 1 << k];
        for (j, amp) in amps.iter_mut().enumerate() {
            let mut idx = fixed_bits;
            for (pos, &q) in keep.iter().enumerate() {
                if j & (1 << (k - 1 - pos)) != 0 {
                    idx |= self.mask(q);
                }
            }
            *amp = self.amps[idx];
        }
        Ok(StateVector { num_qubits: k, amps })
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        self.same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|`, for diagnostics only.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm())
    }

    /// Largest amplitude-wise distance; no global-phase quotient.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        self.same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `self ⊗ |0...0>` on `extra` appended qubits.
    pub fn extend_zero(&self, extra: usize) -> Result<StateVector> {
        let n = self.num_qubits + extra;
        let max = max_qubits();
        if n > max {
            return Err(Error::Capacity { requested: n, max });
        }
        let mut amps = vec![ZERO; 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i << extra] = *a;
        }
        Ok(StateVector { num_qubits: n, amps })
    }

    fn same_size(&self, other: &StateVector) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        Ok(())
    }
}
