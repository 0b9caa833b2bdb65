//! Phase-tracked Pauli strings.
//!
//! A [`PauliString`] is stored in canonical qubit order: index 0 is qubit 1,
//! the leftmost tensor factor. Display orders such as `5-1-3-2-4-6` only
//! exist at the text boundary, through [`QubitOrder`].

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn is_identity(self) -> bool {
        self == PauliAxis::I
    }

    /// Single-qubit product `self * rhs` as (phase, axis).
    pub fn mul(self, rhs: PauliAxis) -> (Phase, PauliAxis) {
        use PauliAxis::*;
        match (self, rhs) {
            (I, a) | (a, I) => (Phase::PlusOne, a),
            (X, X) | (Y, Y) | (Z, Z) => (Phase::PlusOne, I),
            (X, Y) => (Phase::PlusI, Z),
            (Y, X) => (Phase::MinusI, Z),
            (Y, Z) => (Phase::PlusI, X),
            (Z, Y) => (Phase::MinusI, X),
            (Z, X) => (Phase::PlusI, Y),
            (X, Z) => (Phase::MinusI, Y),
        }
    }

    pub fn from_char(c: char) -> Option<PauliAxis> {
        match c.to_ascii_uppercase() {
            'I' => Some(PauliAxis::I),
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn to_char(self, lowercase: bool) -> char {
        let c = match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        };
        if lowercase && self != PauliAxis::I {
            c.to_ascii_lowercase()
        } else {
            c
        }
    }
}

/// One of the four phases {+1, +i, -1, -i}, stored as the exponent of i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    fn from_exponent(e: u8) -> Phase {
        match e % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }

    /// +1.0 or -1.0 for real phases.
    pub fn sign(self) -> Option<f64> {
        match self {
            Phase::PlusOne => Some(1.0),
            Phase::MinusOne => Some(-1.0),
            _ => None,
        }
    }

    pub fn negate(self) -> Phase {
        Phase::from_exponent(self.exponent() + 2)
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        use num_complex::Complex64;
        match self {
            Phase::PlusOne => Complex64::new(1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_exponent(self.exponent() + rhs.exponent())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::PlusOne => "+1",
            Phase::PlusI => "+i",
            Phase::MinusOne => "-1",
            Phase::MinusI => "-i",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: Phase,
    axes: Vec<PauliAxis>,
}

impl PauliString {
    pub fn new(phase: Phase, axes: Vec<PauliAxis>) -> Self {
        PauliString { phase, axes }
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(Phase::PlusOne, vec![PauliAxis::I; n])
    }

    /// Builds a +1-phase string from `(qubit, axis)` pairs with 1-based qubit labels.
    ///
    /// Panics if a qubit label is outside `1..=n`; intended for literal construction.
    pub fn from_sites(n: usize, sites: &[(usize, PauliAxis)]) -> Self {
        let mut axes = vec![PauliAxis::I; n];
        for &(q, a) in sites {
            assert!((1..=n).contains(&q), "qubit {q} outside 1..={n}");
            axes[q - 1] = a;
        }
        PauliString::new(Phase::PlusOne, axes)
    }

    /// Parses a canonical-order token such as `-XZIY` (qubit 1 first).
    pub fn parse_canonical(text: &str) -> Result<Self> {
        let (phase, letters) = split_sign(text)?;
        let axes = letters
            .chars()
            .map(|c| {
                PauliAxis::from_char(c).ok_or_else(|| Error::InvalidToken {
                    token: text.to_string(),
                    reason: format!("invalid character {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::new(phase, axes))
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn axes(&self) -> &[PauliAxis] {
        &self.axes
    }

    /// Axis acting on 1-based qubit `q`.
    pub fn axis(&self, q: usize) -> PauliAxis {
        self.axes[q - 1]
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|a| a.is_identity())
    }

    pub fn weight(&self) -> usize {
        self.axes.iter().filter(|a| !a.is_identity()).count()
    }

    /// Real sign of a Hermitian string.
    pub fn sign(&self) -> Option<f64> {
        self.phase.sign()
    }

    pub fn negated(&self) -> Self {
        PauliString::new(self.phase.negate(), self.axes.clone())
    }

    pub fn with_phase(&self, phase: Phase) -> Self {
        PauliString::new(phase, self.axes.clone())
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }

    /// Exact operator product `self * other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut phase = self.phase * other.phase;
        let axes = self
            .axes
            .iter()
            .zip(&other.axes)
            .map(|(&a, &b)| {
                let (p, c) = a.mul(b);
                phase = phase * p;
                c
            })
            .collect();
        Ok(PauliString::new(phase, axes))
    }

    /// True iff the strings anticommute on an even number of sites.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        let clashes = self
            .axes
            .iter()
            .zip(&other.axes)
            .filter(|(a, b)| !a.is_identity() && !b.is_identity() && a != b)
            .count();
        Ok(clashes % 2 == 0)
    }

    /// Bit masks `(x, z)` with qubit 1 as the most significant bit, so that
    /// the string equals `phase * i^{#Y} * X^x Z^z`.
    pub fn xz_masks(&self) -> (usize, usize) {
        let n = self.len();
        let mut x = 0usize;
        let mut z = 0usize;
        for (i, a) in self.axes.iter().enumerate() {
            let bit = 1usize << (n - 1 - i);
            match a {
                PauliAxis::I => {}
                PauliAxis::X => x |= bit,
                PauliAxis::Z => z |= bit,
                PauliAxis::Y => {
                    x |= bit;
                    z |= bit;
                }
            }
        }
        (x, z)
    }

    pub fn y_count(&self) -> usize {
        self.axes.iter().filter(|&&a| a == PauliAxis::Y).count()
    }

    /// Formats under a display order; the sign is `-` or omitted.
    ///
    /// Non-real phases are written as `+i`/`-i` prefixes; they cannot be parsed back.
    pub fn format(&self, order: &QubitOrder) -> Result<String> {
        if order.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: order.len(),
                actual: self.len(),
            });
        }
        let mut out = String::with_capacity(self.len() + 2);
        match self.phase {
            Phase::PlusOne => {}
            Phase::MinusOne => out.push('-'),
            Phase::PlusI => out.push_str("+i"),
            Phase::MinusI => out.push_str("-i"),
        }
        for &q in order.positions() {
            out.push(self.axis(q).to_char(order.is_lowercase(q)));
        }
        Ok(out)
    }

    /// Parses a signed token `[+-]?[IXYZixyz]{n}` whose letters follow `order`.
    pub fn parse(text: &str, order: &QubitOrder) -> Result<PauliString> {
        let bad = |reason: String| Error::InvalidToken {
            token: text.to_string(),
            reason,
        };
        let (phase, letters) = split_sign(text)?;
        let count = letters.chars().count();
        if count == order.len() + 1 && letters.starts_with(['i', 'j']) {
            return Err(bad("non-real phase".to_string()));
        }
        if count != order.len() {
            return Err(bad(format!("expected {} axis letters, found {count}", order.len())));
        }
        let mut axes = vec![PauliAxis::I; order.len()];
        for (c, &q) in letters.chars().zip(order.positions()) {
            axes[q - 1] = PauliAxis::from_char(c).ok_or_else(|| bad(format!("invalid character {c:?}")))?;
        }
        Ok(PauliString::new(phase, axes))
    }
}

fn split_sign(text: &str) -> Result<(Phase, &str)> {
    let text = text.trim();
    let (phase, rest) = if let Some(r) = text.strip_prefix('-') {
        (Phase::MinusOne, r)
    } else if let Some(r) = text.strip_prefix('\u{2212}') {
        (Phase::MinusOne, r)
    } else if let Some(r) = text.strip_prefix('+') {
        (Phase::PlusOne, r)
    } else {
        (Phase::PlusOne, text)
    };
    Ok((phase, rest))
}

impl fmt::Display for PauliString {
    /// Canonical order, uppercase.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            Phase::PlusOne => f.write_str("+")?,
            Phase::MinusOne => f.write_str("-")?,
            Phase::PlusI => f.write_str("+i")?,
            Phase::MinusI => f.write_str("-i")?,
        }
        for a in &self.axes {
            write!(f, "{}", a.to_char(false))?;
        }
        Ok(())
    }
}

/// Display permutation of qubits `1..=n`, plus which qubits print in lowercase.
///
/// Lowercase marks the spatial-mode qubits in the published tables; it carries
/// no algebraic meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitOrder {
    positions: Vec<usize>,
    lowercase: Vec<bool>,
}

impl QubitOrder {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        let n = positions.len();
        let mut seen = vec![false; n];
        for &q in &positions {
            if q == 0 || q > n || seen[q - 1] {
                return Err(Error::InvalidOrder(format!("{positions:?}")));
            }
            seen[q - 1] = true;
        }
        Ok(QubitOrder {
            positions,
            lowercase: vec![false; n],
        })
    }

    pub fn canonical(n: usize) -> Self {
        QubitOrder {
            positions: (1..=n).collect(),
            lowercase: vec![false; n],
        }
    }

    /// Marks the given 1-based qubits as lowercase for display.
    pub fn with_lowercase(mut self, qubits: &[usize]) -> Result<Self> {
        for &q in qubits {
            if q == 0 || q > self.len() {
                return Err(Error::InvalidOrder(format!("lowercase qubit {q} out of range")));
            }
            self.lowercase[q - 1] = true;
        }
        Ok(self)
    }

    /// Display order of the LC6 measurement table (5-1-3-2-4-6, spatial qubits 5 and 6).
    pub fn lc6_table() -> Self {
        QubitOrder::new(vec![5, 1, 3, 2, 4, 6])
            .and_then(|o| o.with_lowercase(&[5, 6]))
            .expect("static order")
    }

    /// Display order of the Y6 measurement table (1-3-2-4-5-6, spatial qubits 5 and 6).
    pub fn y6_table() -> Self {
        QubitOrder::new(vec![1, 3, 2, 4, 5, 6])
            .and_then(|o| o.with_lowercase(&[5, 6]))
            .expect("static order")
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_lowercase(&self, q: usize) -> bool {
        self.lowercase[q - 1]
    }

    pub fn lowercase_qubits(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&q| self.is_lowercase(q)).collect()
    }
}

impl FromStr for QubitOrder {
    type Err = Error;

    /// Accepts `5-1-3-2-4-6` or `5,1,3,2,4,6`.
    fn from_str(s: &str) -> Result<Self> {
        let positions = s
            .trim()
            .split(['-', ','])
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidOrder(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        QubitOrder::new(positions)
    }
}

impl fmt::Display for QubitOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions.iter().map(|q| q.to_string()).collect();
        f.write_str(&parts.join("-"))
    }
}
