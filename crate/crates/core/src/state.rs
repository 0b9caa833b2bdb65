//! Dense statevectors for small graph states and the named experimental states.
//!
//! Basis index convention: qubit 1 is the most significant bit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliString};

/// Largest register the dense backend will build.
pub const MAX_DENSE_QUBITS: usize = 8;

const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphSpec {
    /// Vertices are 1-based. Edges are stored as `(min, max)`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!("edge {u}-{v} outside 1..={n}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(GraphSpec { n, edges: set })
    }

    pub fn path(n: usize) -> Self {
        GraphSpec::new(n, (1..n).map(|i| (i, i + 1))).expect("path graph")
    }

    /// Six-vertex Y-shaped tree: a three-vertex stem 1-2-3 with arms 3-4-5 and 3-6.
    pub fn y_tree() -> Self {
        GraphSpec::new(6, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]).expect("y tree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// `g_i = X_i` times `Z_j` over every neighbor `j` of `i`.
    pub fn stabilizer_generators(&self) -> Vec<PauliString> {
        (1..=self.n)
            .map(|i| {
                let mut sites = vec![(i, PauliAxis::X)];
                sites.extend(self.neighbors(i).into_iter().map(|j| (j, PauliAxis::Z)));
                PauliString::from_sites(self.n, &sites)
            })
            .collect()
    }

    /// Parses `n` on the first content line, then one `u v` edge per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::InvalidGraph("empty graph document".into()))?;
        let n = first
            .strip_prefix("n")
            .map(|r| r.trim_start_matches(['=', ' ']))
            .unwrap_or(first)
            .parse::<usize>()
            .map_err(|_| Error::InvalidGraph(format!("bad vertex count {first:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split([' ', '\t', ',', '-']).filter(|s| !s.is_empty()).collect();
            if parts.len() != 2 {
                return Err(Error::InvalidGraph(format!("bad edge line {line:?}")));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidGraph(format!("bad vertex {s:?}")))
            };
            edges.push((parse(parts[0])?, parse(parts[1])?));
        }
        GraphSpec::new(n, edges)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalizes and fixes the global phase so the first nonzero amplitude is real positive.
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "dense statevector",
                max: MAX_DENSE_QUBITS,
                actual: n,
            });
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for {n} qubits",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < NORM_TOLERANCE {
            return Err(Error::InvalidParameter("zero vector".into()));
        }
        let mut s = StateVector { n, amplitudes };
        let first = s
            .amplitudes
            .iter()
            .copied()
            .find(|a| a.norm() > NORM_TOLERANCE)
            .expect("nonzero vector");
        let fix = first.conj() / (first.norm() * norm);
        for a in &mut s.amplitudes {
            *a *= fix;
        }
        Ok(s)
    }

    /// Sum of product states; each term lists one single-qubit vector per qubit in canonical order.
    pub fn from_product_terms(n: usize, terms: &[(f64, Vec<[f64; 2]>)]) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (coef, factors) in terms {
            assert_eq!(factors.len(), n, "one factor per qubit");
            for (idx, amp) in amps.iter_mut().enumerate() {
                let mut v = *coef;
                for (q, f) in factors.iter().enumerate() {
                    let bit = (idx >> (n - 1 - q)) & 1;
                    v *= f[bit];
                    if v == 0.0 {
                        break;
                    }
                }
                *amp += v;
            }
        }
        StateVector::from_amplitudes(n, amps)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector::from_amplitudes(n, amps)
    }

    /// The graph state: `|+>^n` followed by a controlled-Z on every edge.
    pub fn graph_state(g: &GraphSpec) -> Result<Self> {
        let n = g.n();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                what: "graph state",
                max: MAX_DENSE_QUBITS,
                actual: n,
            });
        }
        let dim = 1usize << n;
        let scale = (dim as f64).sqrt().recip();
        let amps = (0..dim)
            .map(|idx| {
                let odd = g
                    .edges()
                    .filter(|&(u, v)| (idx >> (n - u)) & 1 == 1 && (idx >> (n - v)) & 1 == 1)
                    .count()
                    % 2;
                Complex64::new(if odd == 1 { -scale } else { scale }, 0.0)
            })
            .collect();
        StateVector::from_amplitudes(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<s|P|s>` for a Hermitian Pauli string.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        let sign = p.sign().ok_or_else(|| Error::NotHermitian(p.phase().to_string()))?;
        let (x, z) = p.xz_masks();
        // P|b> = phase * i^{#Y} * (-1)^{|b & z|} |b ^ x>
        let iy = match p.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, &amp) in self.amplitudes.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let term = self.amplitudes[b ^ x].conj() * amp;
            if (b & z).count_ones() % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        Ok(sign * (iy * acc).re)
    }
}

/// The states prepared in the experiment, written in their measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedState {
    Lc4,
    Lc6,
    Y6,
    Ghz6,
}

impl NamedState {
    pub const ALL: [NamedState; 4] = [NamedState::Lc4, NamedState::Lc6, NamedState::Y6, NamedState::Ghz6];

    pub fn n(self) -> usize {
        match self {
            NamedState::Lc4 => 4,
            _ => 6,
        }
    }

    /// Independent commuting generators whose joint +1 eigenstate is [`NamedState::build`].
    pub fn stabilizer_generators(self) -> Vec<PauliString> {
        let canon = |toks: &[&str]| -> Vec<PauliString> {
            toks.iter()
                .map(|t| PauliString::parse_canonical(t).expect("literal generator"))
                .collect()
        };
        match self {
            NamedState::Lc4 => canon(&["ZIZI", "IZIZ", "ZXIX", "XZXI"]),
            NamedState::Lc6 => crate::bell::lc6_generators().into_iter().map(|(_, g)| g).collect(),
            NamedState::Y6 => crate::bell::y6_generators().into_iter().map(|(_, g)| g).collect(),
            NamedState::Ghz6 => canon(&["XXXXXX", "ZZIIII", "IZZIII", "IIZZII", "IIIZZI", "IIIIZZ"]),
        }
    }

    pub fn build(self) -> StateVector {
        match self {
            NamedState::Lc4 => lc4(),
            NamedState::Lc6 => lc6(),
            NamedState::Y6 => y6(),
            NamedState::Ghz6 => ghz6(),
        }
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lc4" => Ok(NamedState::Lc4),
            "lc6" => Ok(NamedState::Lc6),
            "y6" => Ok(NamedState::Y6),
            "ghz6" => Ok(NamedState::Ghz6),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamedState::Lc4 => "LC4",
            NamedState::Lc6 => "LC6",
            NamedState::Y6 => "Y6",
            NamedState::Ghz6 => "GHZ6",
        })
    }
}

pub fn build_named_state(name: &str) -> Result<StateVector> {
    Ok(name.parse::<NamedState>()?.build())
}

const ZERO: [f64; 2] = [1.0, 0.0];
const ONE: [f64; 2] = [0.0, 1.0];
const PLUS: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
const MINUS: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2];

fn bit(b: u8) -> [f64; 2] {
    if b == 0 {
        ZERO
    } else {
        ONE
    }
}

/// Places single-qubit factors given as `(qubit, vector)` into canonical order.
fn factors(n: usize, sites: &[(usize, [f64; 2])]) -> Vec<[f64; 2]> {
    let mut out = vec![ZERO; n];
    for &(q, v) in sites {
        out[q - 1] = v;
    }
    out
}

/// `1/2 [ |0>1|0>3 (|00>24 + |11>24) + |1>1|1>3 (|00>24 - |11>24) ]` with H=0, V=1.
fn lc4() -> StateVector {
    let mut terms = Vec::new();
    for (b13, sign) in [(0u8, 1.0), (1, -1.0)] {
        for b24 in [0u8, 1] {
            let s = if b24 == 1 { sign } else { 1.0 };
            terms.push((
                0.5 * s,
                factors(4, &[(1, bit(b13)), (3, bit(b13)), (2, bit(b24)), (4, bit(b24))]),
            ));
        }
    }
    StateVector::from_product_terms(4, &terms).expect("LC4")
}

/// Logical-basis form with `|~0> = |+>`, `|~1> = |->` on qubit 2.
fn lc6() -> StateVector {
    let mut terms = Vec::new();
    let c = 8f64.sqrt().recip();
    // (qubit-3 bit, sign of the |11>_{51} branch, qubit-2 vector when qubits 4,6 are |00>, when |11>)
    for (b3, sign51, q2_00, q2_11) in [(0u8, 1.0, PLUS, MINUS), (1, -1.0, MINUS, PLUS)] {
        for b51 in [0u8, 1] {
            let s = if b51 == 1 { sign51 } else { 1.0 };
            for (b46, q2) in [(0u8, q2_00), (1, q2_11)] {
                terms.push((
                    c * s,
                    factors(
                        6,
                        &[(5, bit(b51)), (1, bit(b51)), (3, bit(b3)), (2, q2), (4, bit(b46)), (6, bit(b46))],
                    ),
                ));
            }
        }
    }
    StateVector::from_product_terms(6, &terms).expect("LC6")
}

/// Equal superposition of four basis states, bits listed in qubit order 1-3-2-4-5-6.
fn y6() -> StateVector {
    const ORDER: [usize; 6] = [1, 3, 2, 4, 5, 6];
    const KETS: [[u8; 6]; 4] = [[0, 0, 0, 0, 0, 0], [0, 0, 1, 1, 0, 1], [1, 1, 0, 1, 1, 1], [1, 1, 1, 0, 1, 0]];
    let terms: Vec<_> = KETS
        .iter()
        .map(|k| {
            let sites: Vec<_> = ORDER.iter().zip(k).map(|(&q, &b)| (q, bit(b))).collect();
            (0.5, factors(6, &sites))
        })
        .collect();
    StateVector::from_product_terms(6, &terms).expect("Y6")
}

fn ghz6() -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 64];
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[63] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    StateVector::from_amplitudes(6, amps).expect("GHZ6")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliAxis::*, QubitOrder};
    use approx::assert_abs_diff_eq;

    /// Independent dense-matrix expectation: builds the 2^n x 2^n Kronecker product.
    fn dense_expectation(s: &StateVector, p: &PauliString) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let single = |a: PauliAxis| match a {
            I => [[one, zero], [zero, one]],
            X => [[zero, one], [one, zero]],
            Y => [[zero, -i], [i, zero]],
            Z => [[one, zero], [zero, -one]],
        };
        let mut m = vec![vec![one]];
        for &a in p.axes() {
            let s1 = single(a);
            let d = m.len();
            let mut next = vec![vec![zero; 2 * d]; 2 * d];
            for r in 0..d {
                for c in 0..d {
                    for a2 in 0..2 {
                        for b2 in 0..2 {
                            next[2 * r + a2][2 * c + b2] = m[r][c] * s1[a2][b2];
                        }
                    }
                }
            }
            m = next;
        }
        let amps = s.amplitudes();
        let mut acc = zero;
        for r in 0..amps.len() {
            for c in 0..amps.len() {
                acc += amps[r].conj() * m[r][c] * amps[c];
            }
        }
        (p.phase().to_complex() * acc).re
    }

    fn all_products(gens: &[PauliString]) -> Vec<PauliString> {
        let n = gens[0].len();
        (0..1usize << gens.len())
            .map(|mask| {
                gens.iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(PauliString::identity(n), |acc, (_, g)| acc.multiply(g).unwrap())
            })
            .collect()
    }

    #[test]
    fn generators_from_neighbourhoods() {
        let g = GraphSpec::path(3);
        let gens = g.stabilizer_generators();
        assert_eq!(gens[1], PauliString::from_sites(3, &[(1, Z), (2, X), (3, Z)]));
        let single = GraphSpec::new(1, []).unwrap();
        assert_eq!(single.stabilizer_generators(), vec![PauliString::from_sites(1, &[(1, X)])]);
        let p6 = GraphSpec::path(6).stabilizer_generators();
        for a in &p6 {
            for b in &p6 {
                assert!(a.commutes(b).unwrap());
            }
        }
    }

    #[test]
    fn graph_validation() {
        assert!(GraphSpec::new(3, [(1, 1)]).is_err());
        assert!(GraphSpec::new(3, [(1, 4)]).is_err());
        assert!(GraphSpec::new(0, []).is_err());
        let g = GraphSpec::parse("# path\n3\n1 2\n2 3\n").unwrap();
        assert_eq!(g, GraphSpec::path(3));
        assert!(GraphSpec::parse("3\n1 2 3\n").is_err());
        assert!(GraphSpec::parse("").is_err());
    }

    #[test]
    fn small_graph_states() {
        let plus = StateVector::graph_state(&GraphSpec::new(1, []).unwrap()).unwrap();
        assert_abs_diff_eq!(plus.amplitude(0).re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(plus.amplitude(1).re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);

        let edge = StateVector::graph_state(&GraphSpec::new(2, [(1, 2)]).unwrap()).unwrap();
        // (|0+> + |1->)/sqrt2 = (|00> + |01> + |10> - |11>)/2
        let expect = [0.5, 0.5, 0.5, -0.5];
        for (k, e) in expect.iter().enumerate() {
            assert_abs_diff_eq!(edge.amplitude(k).re, *e, epsilon = 1e-15);
        }
        for g in GraphSpec::new(2, [(1, 2)]).unwrap().stabilizer_generators() {
            assert_abs_diff_eq!(edge.expectation(&g).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn graph_state_stabilized_by_whole_group() {
        for g in [
            GraphSpec::path(6),
            GraphSpec::y_tree(),
            GraphSpec::new(5, [(1, 2), (2, 3), (3, 1), (4, 5), (1, 5)]).unwrap(),
            GraphSpec::new(4, []).unwrap(),
        ] {
            let s = StateVector::graph_state(&g).unwrap();
            for p in all_products(&g.stabilizer_generators()) {
                assert_abs_diff_eq!(s.expectation(&p).unwrap(), 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn dense_cap() {
        let g = GraphSpec::path(9);
        assert!(matches!(StateVector::graph_state(&g), Err(Error::TooManyQubits { .. })));
        assert!(StateVector::graph_state(&GraphSpec::path(8)).is_ok());
    }

    #[test]
    fn lc6_generators_stabilize() {
        let s = NamedState::Lc6.build();
        let o = QubitOrder::canonical(6);
        // z5Z1, x5X1Z3, Z1X3Z2, Z3X2Z4, Z2X4x6, Z4z6 written in canonical order 1..6
        for tok in ["ZIIIZI", "XIZIXI", "ZZXIII", "IXZZII", "IZIXIX", "IIIZIZ"] {
            let g = PauliString::parse(tok, &o).unwrap();
            assert_abs_diff_eq!(s.expectation(&g).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn y6_support() {
        let s = NamedState::Y6.build();
        // basis indices with qubit 1 as MSB: bits (q1..q6)
        let support: Vec<usize> = [[0, 0, 0, 0, 0, 0], [0, 1, 0, 1, 0, 1], [1, 0, 1, 1, 1, 1], [1, 1, 1, 0, 1, 0]]
            .iter()
            .map(|b: &[usize; 6]| b.iter().fold(0, |acc, &x| acc << 1 | x))
            .collect();
        for (k, a) in s.amplitudes().iter().enumerate() {
            let want = if support.contains(&k) { 0.5 } else { 0.0 };
            assert_abs_diff_eq!(a.re, want, epsilon = 1e-15);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn ghz6_correlations() {
        let s = NamedState::Ghz6.build();
        for i in 1..=6 {
            for j in (i + 1)..=6 {
                let zz = PauliString::from_sites(6, &[(i, Z), (j, Z)]);
                assert_abs_diff_eq!(s.expectation(&zz).unwrap(), 1.0, epsilon = 1e-12);
            }
        }
        let xs = PauliString::from_sites(6, &[(1, X), (2, X), (3, X), (4, X), (5, X), (6, X)]);
        assert_abs_diff_eq!(s.expectation(&xs).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn lc4_is_normalized_and_entangled() {
        let s = NamedState::Lc4.build();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        // Z1Z3 and Z2Z4 are stabilizers of the written form.
        for tok in ["ZIZI", "IZIZ"] {
            let p = PauliString::parse_canonical(tok).unwrap();
            assert_abs_diff_eq!(s.expectation(&p).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn named_states_are_stabilized() {
        for name in NamedState::ALL {
            let s = name.build();
            let gens = name.stabilizer_generators();
            assert_eq!(gens.len(), name.n());
            for p in all_products(&gens) {
                assert_abs_diff_eq!(s.expectation(&p).unwrap(), 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn named_states_normalized_with_phase_convention() {
        for name in NamedState::ALL {
            let s = name.build();
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
            let first = s.amplitudes().iter().find(|a| a.norm() > 1e-12).unwrap();
            assert!(first.re > 0.0 && first.im.abs() < 1e-15, "{name}");
        }
        assert!(build_named_state("w3").is_err());
        assert!(build_named_state("Lc6").is_ok());
    }

    #[test]
    fn table_signs_on_lc6() {
        let s = NamedState::Lc6.build();
        let o = QubitOrder::lc6_table();
        let p = PauliString::parse("xXZZXx", &o).unwrap();
        assert_abs_diff_eq!(s.expectation(&p).unwrap(), 1.0, epsilon = 1e-12);
        let q = PauliString::parse("-xXZZYy", &o).unwrap();
        assert_abs_diff_eq!(s.expectation(&q).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.expectation(&q.negated()).unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.expectation(&PauliString::identity(6)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_errors() {
        let s = NamedState::Lc6.build();
        assert!(s.expectation(&PauliString::identity(5)).is_err());
        let non_herm = PauliString::new(crate::pauli::Phase::PlusI, vec![X; 6]);
        assert!(matches!(s.expectation(&non_herm), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn expectation_matches_dense_matrices() {
        use proptest::prelude::*;
        use proptest::test_runner::{Config, TestRunner};
        let states: Vec<StateVector> = NamedState::ALL.iter().map(|s| s.build()).collect();
        let mut runner = TestRunner::new(Config::with_cases(200));
        runner
            .run(
                &(0usize..4, prop::collection::vec(0usize..4, 6), any::<bool>()),
                |(si, axes, neg)| {
                    let s = &states[si];
                    let axes: Vec<PauliAxis> = axes[..s.n()].iter().map(|&k| PauliAxis::ALL[k]).collect();
                    let phase = if neg { crate::pauli::Phase::MinusOne } else { crate::pauli::Phase::PlusOne };
                    let p = PauliString::new(phase, axes);
                    let fast = s.expectation(&p).unwrap();
                    let slow = dense_expectation(s, &p);
                    prop_assert!((fast - slow).abs() < 1e-12, "{p}: {fast} vs {slow}");
                    prop_assert!(fast.abs() <= 1.0 + 1e-12);
                    Ok(())
                },
            )
            .unwrap();
    }
}
