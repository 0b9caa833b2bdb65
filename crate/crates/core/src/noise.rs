//! Per-qubit depolarizing noise `rho -> p rho + (1-p) tr_i(rho) (x) 1/2`.
//!
//! The channel maps each non-identity single-qubit Pauli to `p` times itself,
//! so a Pauli expectation is damped by the product of `p_i` over its support.
//! [`DensityOperator`] applies the channel to a dense matrix and is kept as an
//! independent check of that shortcut.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::bell::BellOperator;
use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliString};
use crate::state::StateVector;

/// Largest register for the dense density-operator path.
pub const MAX_DENSITY_QUBITS: usize = 6;

/// Bisection stops once the bracket is narrower than this.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DepolarizingNoise {
    p: Vec<f64>,
}

impl DepolarizingNoise {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = p.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::InvalidProbability(bad));
        }
        Ok(DepolarizingNoise { p })
    }

    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        DepolarizingNoise::new(vec![p; n])
    }

    pub fn noiseless(n: usize) -> Self {
        DepolarizingNoise { p: vec![1.0; n] }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn retention(&self) -> &[f64] {
        &self.p
    }

    /// Product of `p_i` over the non-identity sites of `term`.
    pub fn damping(&self, term: &PauliString) -> Result<f64> {
        if term.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: term.len(),
            });
        }
        Ok(term
            .axes()
            .iter()
            .zip(&self.p)
            .filter(|(a, _)| !a.is_identity())
            .map(|(_, p)| p)
            .product())
    }
}

pub fn noisy_expectation(ideal: f64, term: &PauliString, noise: &DepolarizingNoise) -> Result<f64> {
    Ok(ideal * noise.damping(term)?)
}

pub fn noisy_bell_value(op: &BellOperator, ideal_values: &[f64], noise: &DepolarizingNoise) -> Result<f64> {
    if ideal_values.len() != op.terms().len() {
        return Err(Error::InvalidParameter(format!(
            "{} ideal values for {} terms",
            ideal_values.len(),
            op.terms().len()
        )));
    }
    op.terms()
        .iter()
        .zip(ideal_values)
        .map(|(t, &v)| noisy_expectation(v, t, noise))
        .sum()
}

/// Evenly spaced grid of uniform retention probabilities, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(p_min: f64, p_max: f64, steps: usize) -> Result<Self> {
        for p in [p_min, p_max] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        if steps < 2 {
            return Err(Error::InvalidParameter(format!("grid needs at least 2 steps, got {steps}")));
        }
        if p_min >= p_max {
            return Err(Error::InvalidParameter(format!("grid bounds {p_min} >= {p_max}")));
        }
        Ok(Grid { p_min, p_max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.p_max
                } else {
                    self.p_min + (self.p_max - self.p_min) * k as f64 / last
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    /// `p_min,p_max,steps`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidParameter(format!("grid {s:?}: expected p_min,p_max,steps"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let p_min = parts[0].parse().map_err(|_| bad())?;
        let p_max = parts[1].parse().map_err(|_| bad())?;
        let steps = parts[2].parse().map_err(|_| bad())?;
        Grid::new(p_min, p_max, steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub operator: String,
    pub grid: Grid,
    /// Noiseless value, used for the normalized column.
    pub noiseless: f64,
    pub samples: Vec<(f64, f64)>,
}

impl DecayCurve {
    /// CSV with header `p,value,operator`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["p", "value", "operator"]).expect("in-memory write");
        for (p, v) in &self.samples {
            w.write_record([format_number(*p), format_number(*v), self.operator.clone()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>8}  {:>14}  {:>12}   {}", "p", "value", "normalized", self.operator);
        for (p, v) in &self.samples {
            let norm = if self.noiseless != 0.0 { v / self.noiseless } else { f64::NAN };
            let _ = writeln!(out, "{p:>8.4}  {v:>14.10}  {norm:>12.10}");
        }
        out
    }
}

/// Shortest round-tripping decimal for a float.
pub(crate) fn format_number(x: f64) -> String {
    let s = format!("{x}");
    if s.contains(['.', 'e', 'N', 'i']) {
        s
    } else {
        format!("{s}.0")
    }
}

pub fn decay_curve(op: &BellOperator, ideal_values: &[f64], grid: Grid) -> Result<DecayCurve> {
    let n = op.n();
    let samples = grid
        .points()
        .into_iter()
        .map(|p| Ok((p, noisy_bell_value(op, ideal_values, &DepolarizingNoise::uniform(n, p)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DecayCurve {
        operator: op.label().to_string(),
        grid,
        noiseless: noisy_bell_value(op, ideal_values, &DepolarizingNoise::noiseless(n))?,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub operator: String,
    pub bound: f64,
    pub p_star: f64,
    pub iterations: u32,
    /// `bound / noiseless value`: the normalized value at threshold.
    pub normalized_bound: f64,
}

impl Threshold {
    pub fn to_document(&self) -> String {
        toml::to_string(self).expect("threshold serializes")
    }
}

/// Uniform `p*` at which the damped value falls to the LHV bound.
pub fn violation_threshold(op: &BellOperator, ideal_values: &[f64]) -> Result<Threshold> {
    let bound = op.lhv_bound().ok_or_else(|| Error::MissingBound(op.label().to_string()))?;
    let n = op.n();
    let value_at = |p: f64| -> Result<f64> { noisy_bell_value(op, ideal_values, &DepolarizingNoise::uniform(n, p)?) };
    let top = value_at(1.0)?;
    if top <= bound {
        return Err(Error::NoViolation { value: top, bound });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut iterations = 0;
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if value_at(mid)? > bound {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(Threshold {
        operator: op.label().to_string(),
        bound,
        p_star: 0.5 * (lo + hi),
        iterations,
        normalized_bound: bound / top,
    })
}

/// Dense `2^n x 2^n` density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityOperator {
    pub fn pure(s: &StateVector) -> Result<Self> {
        let n = s.n();
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::TooManyQubits {
                what: "density operator",
                max: MAX_DENSITY_QUBITS,
                actual: n,
            });
        }
        let a = s.amplitudes();
        let dim = a.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(a[r] * a[c].conj());
            }
        }
        Ok(DensityOperator { n, data })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::TooManyQubits {
                what: "density operator",
                max: MAX_DENSITY_QUBITS,
                actual: n,
            });
        }
        let dim = 1usize << n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(DensityOperator { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|k| self.get(k, k)).sum()
    }

    /// `rho -> p rho + (1-p) tr_q(rho) (x) 1/2` on 1-based qubit `q`.
    fn depolarize_qubit(&mut self, q: usize, p: f64) {
        let dim = self.dim();
        let bit = 1usize << (self.n - q);
        let old = self.data.clone();
        for r in 0..dim {
            for c in 0..dim {
                let mut v = old[r * dim + c] * p;
                if (r & bit) == (c & bit) {
                    let (r0, c0) = (r & !bit, c & !bit);
                    let traced = old[r0 * dim + c0] + old[(r0 | bit) * dim + (c0 | bit)];
                    v += traced * (0.5 * (1.0 - p));
                }
                self.data[r * dim + c] = v;
            }
        }
    }

    /// `tr(rho P)` with `P` assembled as an explicit Kronecker product.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.phase().to_string()));
        }
        let m = pauli_matrix(p);
        let dim = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                acc += self.data[r * dim + c] * m[c * dim + r];
            }
        }
        Ok(acc.re)
    }

    pub fn max_hermitian_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }
}

fn pauli_matrix(p: &PauliString) -> Vec<Complex64> {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut m = vec![p.phase().to_complex()];
    let mut dim = 1;
    for &a in p.axes() {
        let s = match a {
            PauliAxis::I => [o, z, z, o],
            PauliAxis::X => [z, o, o, z],
            PauliAxis::Y => [z, -i, i, z],
            PauliAxis::Z => [o, z, z, -o],
        };
        let nd = dim * 2;
        let mut next = vec![z; nd * nd];
        for r in 0..dim {
            for c in 0..dim {
                let v = m[r * dim + c];
                if v == z {
                    continue;
                }
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        next[(2 * r + a2) * nd + 2 * c + b2] = v * s[2 * a2 + b2];
                    }
                }
            }
        }
        m = next;
        dim = nd;
    }
    m
}

/// Applies the channel qubit by qubit to `|s><s|`.
pub fn apply_depolarizing_dm(s: &StateVector, noise: &DepolarizingNoise) -> Result<DensityOperator> {
    if noise.n() != s.n() {
        return Err(Error::LengthMismatch {
            expected: s.n(),
            actual: noise.n(),
        });
    }
    let mut rho = DensityOperator::pure(s)?;
    for (k, &p) in noise.retention().iter().enumerate() {
        if p != 1.0 {
            rho.depolarize_qubit(k + 1, p);
        }
    }
    Ok(rho)
}
