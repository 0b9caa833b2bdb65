//! Exact fidelity with a stabilizer state, `|G><G| = 2^-k sum_S S`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::noise::DensityOperator;
use crate::pauli::{PauliString, QubitOrder};
use crate::state::StateVector;

/// All `2^k` products of `k` independent commuting generators.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerGroup {
    generators: Vec<PauliString>,
    elements: Vec<PauliString>,
}

impl StabilizerGroup {
    /// Element `m` is the product of the generators selected by the bits of `m`.
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let n = generators.first().map(|g| g.len()).unwrap_or(0);
        for g in &generators {
            if g.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: g.len(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::NotHermitian(format!("{} in generator {g}", g.phase())));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::NonCommuting(a.to_string(), b.to_string()));
                }
            }
        }
        let k = generators.len();
        let elements: Vec<PauliString> = (0..1usize << k)
            .map(|mask| {
                generators
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask >> j & 1 == 1)
                    .try_fold(PauliString::identity(n), |acc, (_, g)| acc.multiply(g))
            })
            .collect::<Result<_>>()?;
        let distinct: HashSet<&[crate::pauli::PauliAxis]> = elements.iter().map(|e| e.axes()).collect();
        if distinct.len() != elements.len() {
            return Err(Error::DependentGenerators {
                expected: elements.len(),
                actual: distinct.len(),
            });
        }
        Ok(StabilizerGroup { generators, elements })
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn n(&self) -> usize {
        self.elements[0].len()
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.elements.contains(p)
    }

    /// Element count per weight.
    pub fn weight_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for e in &self.elements {
            *h.entry(e.weight()).or_insert(0) += 1;
        }
        h
    }

    /// Fidelity of the stabilized state after uniform depolarizing noise:
    /// `2^-k sum_S p^weight(S)`.
    pub fn fidelity_under_uniform_noise(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let total: f64 = self
            .weight_histogram()
            .iter()
            .map(|(&w, &count)| count as f64 * p.powi(w as i32))
            .sum();
        Ok(total / self.order() as f64)
    }

    /// One `token weight` line per element.
    pub fn dump(&self, order: &QubitOrder) -> Result<String> {
        let mut out = String::new();
        for e in &self.elements {
            let tok = e.format(order)?;
            let tok = if tok.starts_with('-') { tok } else { format!("+{tok}") };
            let _ = writeln!(out, "{tok} {}", e.weight());
        }
        Ok(out)
    }
}

/// Anything that yields Pauli expectations: pure states and density operators.
pub trait PauliExpectation {
    fn n_qubits(&self) -> usize;
    fn pauli_expectation(&self, p: &PauliString) -> Result<f64>;
}

impl PauliExpectation for StateVector {
    fn n_qubits(&self) -> usize {
        self.n()
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        self.expectation(p)
    }
}

impl PauliExpectation for DensityOperator {
    fn n_qubits(&self) -> usize {
        self.n()
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        self.expectation(p)
    }
}

/// `2^-k sum_S <S>`; requires a full group (`k = n`).
pub fn exact_fidelity<S: PauliExpectation + ?Sized>(state: &S, group: &StabilizerGroup) -> Result<f64> {
    if group.order() != 1 << state.n_qubits() || group.n() != state.n_qubits() {
        return Err(Error::LengthMismatch {
            expected: 1 << state.n_qubits(),
            actual: group.order(),
        });
    }
    let sum: f64 = group
        .elements()
        .iter()
        .map(|e| state.pauli_expectation(e))
        .sum::<Result<f64>>()?;
    Ok(sum / group.order() as f64)
}

/// Genuine multipartite entanglement for these states: fidelity strictly above 1/2.
pub fn gme_check(fidelity: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::InvalidProbability(fidelity));
    }
    Ok(fidelity > 0.5)
}
