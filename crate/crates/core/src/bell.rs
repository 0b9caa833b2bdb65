//! Bell operators built from stabilizer elements.
//!
//! The optimal operators have the shape `(1+ga) gb (1+gc)(1+gd) ge (1+gf)`,
//! which multiplies out to `gb*ge` times every subset product of
//! `{ga, gc, gd, gf}`: sixteen signed Pauli strings.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliString, Phase, QubitOrder};
use crate::state::StateVector;

/// Default upper limit on the number of deterministic assignments searched.
pub const DEFAULT_ASSIGNMENT_CAP: u64 = 1 << 24;

/// Environment variable that overrides [`DEFAULT_ASSIGNMENT_CAP`] in the CLI.
pub const ASSIGNMENT_CAP_ENV: &str = "GRAPHBELL_LHV_CAP";

/// Where the terms came from: the six generators and the expansion pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMetadata {
    /// Generator labels in pattern order, e.g. `["g5", "g1", "g3", "g2", "g4", "g6"]`.
    pub labels: Vec<String>,
    pub generators: Vec<PauliString>,
    pub pattern: String,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellOperator {
    label: String,
    terms: Vec<PauliString>,
    lhv_bound: Option<f64>,
    display_order: QubitOrder,
    metadata: Option<GeneratorMetadata>,
}

/// Result of an exhaustive deterministic-strategy search.
#[derive(Debug, Clone, PartialEq)]
pub struct LhvSearch {
    pub bound: f64,
    /// Number of distinct (qubit, axis) observables in the operator.
    pub observables: u32,
    pub assignments_searched: u64,
    /// One optimal assignment: (qubit, axis) -> +1 / -1.
    pub best: BTreeMap<(usize, PauliAxis), i8>,
}

impl BellOperator {
    /// Validates that terms are Hermitian, equally long, and that no axis pattern
    /// appears with both signs. Same-sign repeats are kept as a weighted sum.
    pub fn new(label: impl Into<String>, terms: Vec<PauliString>) -> Result<Self> {
        let n = terms.first().map(|t| t.len()).unwrap_or(0);
        let mut seen: HashMap<&[PauliAxis], Phase> = HashMap::new();
        for t in &terms {
            if t.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: t.len(),
                });
            }
            if !t.is_hermitian() {
                return Err(Error::NotHermitian(format!("{} in term {t}", t.phase())));
            }
            if let Some(&prev) = seen.get(t.axes()) {
                if prev != t.phase() {
                    return Err(Error::OppositeSignDuplicate(t.with_phase(Phase::PlusOne).to_string()));
                }
            } else {
                seen.insert(t.axes(), t.phase());
            }
        }
        Ok(BellOperator {
            label: label.into(),
            terms,
            lhv_bound: None,
            display_order: QubitOrder::canonical(n),
            metadata: None,
        })
    }

    pub fn with_display_order(mut self, order: QubitOrder) -> Result<Self> {
        if order.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: order.len(),
            });
        }
        self.display_order = order;
        Ok(self)
    }

    pub fn with_metadata(mut self, metadata: GeneratorMetadata) -> Self {
        self.metadata = Some(metadata);
        self
    }

    /// Records an externally known bound. Must be positive.
    pub fn with_lhv_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound > 0.0) {
            return Err(Error::InvalidParameter(format!("LHV bound must be positive, got {bound}")));
        }
        self.lhv_bound = Some(bound);
        Ok(self)
    }

    /// Runs the exhaustive search and stores the bound.
    pub fn with_computed_bound(self, cap: u64) -> Result<(Self, LhvSearch)> {
        let search = lhv_search(&self, cap)?;
        let op = self.with_lhv_bound(search.bound)?;
        Ok((op, search))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn n(&self) -> usize {
        self.terms.first().map(|t| t.len()).unwrap_or(0)
    }

    pub fn lhv_bound(&self) -> Option<f64> {
        self.lhv_bound
    }

    pub fn display_order(&self) -> &QubitOrder {
        &self.display_order
    }

    pub fn metadata(&self) -> Option<&GeneratorMetadata> {
        self.metadata.as_ref()
    }

    /// Signed tokens under the operator's display order.
    pub fn tokens(&self) -> Vec<String> {
        self.tokens_in(&self.display_order).expect("display order length checked")
    }

    pub fn tokens_in(&self, order: &QubitOrder) -> Result<Vec<String>> {
        self.terms.iter().map(|t| t.format(order)).collect()
    }

    /// `sum_terms <s|term|s>`.
    pub fn quantum_value(&self, s: &StateVector) -> Result<f64> {
        self.terms.iter().map(|t| s.expectation(t)).sum()
    }

    pub fn ideal_values(&self, s: &StateVector) -> Result<Vec<f64>> {
        self.terms.iter().map(|t| s.expectation(t)).collect()
    }

    /// Quantum value divided by the stored LHV bound.
    pub fn violation_ratio(&self, s: &StateVector) -> Result<f64> {
        let bound = self.lhv_bound.ok_or_else(|| Error::MissingBound(self.label.clone()))?;
        Ok(self.quantum_value(s)? / bound)
    }

    /// Serializes as TOML: label, qubit order, lowercase qubits, bound and one token per term.
    pub fn to_document(&self) -> String {
        let doc = OperatorDocument {
            label: self.label.clone(),
            order: self.display_order.to_string(),
            lowercase: self.display_order.lowercase_qubits(),
            lhv_bound: self.lhv_bound,
            pattern: self.metadata.as_ref().map(|m| m.pattern.clone()),
            terms: self.tokens(),
        };
        toml::to_string(&doc).expect("operator document serializes")
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let doc: OperatorDocument =
            toml::from_str(text).map_err(|e| Error::MalformedTable(format!("operator document: {e}")))?;
        let order = doc.order.parse::<QubitOrder>()?.with_lowercase(&doc.lowercase)?;
        let terms = doc
            .terms
            .iter()
            .map(|t| PauliString::parse(t, &order))
            .collect::<Result<Vec<_>>>()?;
        let mut op = BellOperator::new(doc.label, terms)?.with_display_order(order)?;
        if let Some(b) = doc.lhv_bound {
            op = op.with_lhv_bound(b)?;
        }
        Ok(op)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorDocument {
    label: String,
    order: String,
    #[serde(default)]
    lowercase: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhv_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pattern: Option<String>,
    terms: Vec<String>,
}

/// Expands `(1+ga) gb (1+gc)(1+gd) ge (1+gf)` into its sixteen terms.
///
/// Term `k` multiplies `gb*ge` by the generators selected by the bits of `k`
/// in the order `ga, gc, gd, gf`.
pub fn expand_bell(gens: [&PauliString; 6]) -> Result<Vec<PauliString>> {
    let [ga, gb, gc, gd, ge, gf] = gens;
    for g in gens {
        if !g.is_hermitian() {
            return Err(Error::NotHermitian(format!("{} in generator {g}", g.phase())));
        }
    }
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if !a.commutes(b)? {
                return Err(Error::NonCommuting(a.to_string(), b.to_string()));
            }
        }
    }
    let base = gb.multiply(ge)?;
    let optional = [ga, gc, gd, gf];
    let terms = (0..16u32)
        .map(|mask| {
            optional
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .try_fold(base.clone(), |acc, (_, g)| acc.multiply(g))
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(terms.iter().all(PauliString::is_hermitian));
    Ok(terms)
}

fn gen(sites: &[(usize, PauliAxis)]) -> PauliString {
    PauliString::from_sites(6, sites)
}

/// Generators of the LC6 inequality in pattern order `g5, g1, g3, g2, g4, g6`.
pub fn lc6_generators() -> [(&'static str, PauliString); 6] {
    use PauliAxis::*;
    [
        ("g5", gen(&[(5, Z), (1, Z)])),
        ("g1", gen(&[(5, X), (1, X), (3, Z)])),
        ("g3", gen(&[(1, Z), (3, X), (2, Z)])),
        ("g2", gen(&[(3, Z), (2, X), (4, Z)])),
        ("g4", gen(&[(2, Z), (4, X), (6, X)])),
        ("g6", gen(&[(4, Z), (6, Z)])),
    ]
}

/// Generators of the Y6 inequality in pattern order `g3, g1, g5, g2, g4, g6`.
///
/// `g4` is `X2 X4 x6`. The printed `Z2 Z4 z6` anticommutes with `g1` on qubit 2
/// and does not stabilize the Y6 state; `X2 X4 x6` reproduces the measured table.
pub fn y6_generators() -> [(&'static str, PauliString); 6] {
    use PauliAxis::*;
    [
        ("g3", gen(&[(1, Z), (3, Z)])),
        ("g1", gen(&[(1, X), (3, X), (2, X), (5, X)])),
        ("g5", gen(&[(1, Z), (5, Z)])),
        ("g2", gen(&[(1, Z), (2, Z), (4, Z)])),
        ("g4", gen(&[(2, X), (4, X), (6, X)])),
        ("g6", gen(&[(4, Z), (6, Z)])),
    ]
}

fn from_generators(
    label: &str,
    named: [(&'static str, PauliString); 6],
    order: QubitOrder,
    note: Option<String>,
) -> BellOperator {
    let gens: Vec<PauliString> = named.iter().map(|(_, g)| g.clone()).collect();
    let labels: Vec<String> = named.iter().map(|(l, _)| l.to_string()).collect();
    let terms = expand_bell([&gens[0], &gens[1], &gens[2], &gens[3], &gens[4], &gens[5]]).expect("commuting generators");
    let pattern = format!(
        "(1+{}) {} (1+{})(1+{}) {} (1+{})",
        labels[0], labels[1], labels[2], labels[3], labels[4], labels[5]
    );
    BellOperator::new(label, terms)
        .and_then(|op| op.with_display_order(order))
        .expect("valid expansion")
        .with_metadata(GeneratorMetadata {
            labels,
            generators: gens,
            pattern,
            note,
        })
}

/// `B_LC6`, displayed in qubit order 5-1-3-2-4-6.
pub fn lc6_operator() -> BellOperator {
    from_generators("B_LC6", lc6_generators(), QubitOrder::lc6_table(), None)
}

/// `B_Y6`, displayed in qubit order 1-3-2-4-5-6.
pub fn y6_operator() -> BellOperator {
    from_generators(
        "B_Y6",
        y6_generators(),
        QubitOrder::y6_table(),
        Some("g4 = X2 X4 x6 (printed as Z2 Z4 z6; corrected to match the measured term table)".into()),
    )
}

/// The 32 full-correlation X/Y stabilizer elements of GHZ6, each signed so its
/// GHZ6 expectation is +1: a string with `2m` Y factors carries sign `(-1)^m`.
pub fn mermin_ghz6() -> BellOperator {
    let terms: Vec<PauliString> = (0u32..64)
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(|mask| {
            let axes: Vec<PauliAxis> = (0..6)
                .map(|q| if mask >> (5 - q) & 1 == 1 { PauliAxis::Y } else { PauliAxis::X })
                .collect();
            let phase = if (mask.count_ones() / 2) % 2 == 1 {
                Phase::MinusOne
            } else {
                Phase::PlusOne
            };
            PauliString::new(phase, axes)
        })
        .collect();
    let op = BellOperator::new("Mermin_GHZ6", terms).expect("valid Mermin terms");
    let gens = ["XXXXXX", "ZZIIII", "IZZIII", "IIZZII", "IIIZZI", "IIIIZZ"]
        .iter()
        .map(|t| PauliString::parse_canonical(t).expect("literal"))
        .collect();
    op.with_metadata(GeneratorMetadata {
        labels: vec!["X^6".into(), "Z1Z2".into(), "Z2Z3".into(), "Z3Z4".into(), "Z4Z5".into(), "Z5Z6".into()],
        generators: gens,
        pattern: "all 32 weight-6 X/Y elements of the GHZ6 stabilizer group".into(),
        note: Some("term list chosen as the full X/Y stabilizer set; not enumerated in the source".into()),
    })
}

/// Looks up `lc6`, `y6` or `mermin` / `ghz6`.
pub fn named_operator(name: &str) -> Result<BellOperator> {
    match name.to_ascii_lowercase().as_str() {
        "lc6" | "b_lc6" => Ok(lc6_operator()),
        "y6" | "b_y6" => Ok(y6_operator()),
        "mermin" | "ghz6" | "mermin_ghz6" => Ok(mermin_ghz6()),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Maximum of the operator over deterministic local assignments of +/-1 to
/// every (qubit, axis) observable it uses.
///
/// Each term becomes a sign and a bitmask over observables; an assignment is a
/// bit vector where a set bit means -1, so the term's value is
/// `sign * (-1)^{popcount(mask & assignment)}`.
pub fn lhv_search(op: &BellOperator, cap: u64) -> Result<LhvSearch> {
    let mut keys: Vec<(usize, PauliAxis)> = op
        .terms()
        .iter()
        .flat_map(|t| {
            t.axes()
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_identity())
                .map(|(i, &a)| (i + 1, a))
        })
        .collect();
    keys.sort();
    keys.dedup();
    let bits = keys.len() as u32;
    let space = 1u128 << bits;
    if bits >= 64 || space > cap as u128 {
        return Err(Error::AssignmentSpaceTooLarge { bits, cap });
    }
    let index: HashMap<(usize, PauliAxis), usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let compiled: Vec<(i64, u64)> = op
        .terms()
        .iter()
        .map(|t| {
            let sign = if t.phase() == Phase::MinusOne { -1 } else { 1 };
            let mask = t
                .axes()
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_identity())
                .fold(0u64, |m, (i, &a)| m | 1 << index[&(i + 1, a)]);
            (sign, mask)
        })
        .collect();
    let evaluate = |assignment: u64| -> i64 {
        compiled
            .iter()
            .map(|&(sign, mask)| if (mask & assignment).count_ones() % 2 == 1 { -sign } else { sign })
            .sum()
    };
    let total = space as u64;
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let (best_value, best_assignment) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            (lo..hi)
                .map(|a| (evaluate(a), std::cmp::Reverse(a)))
                .max()
                .expect("nonempty chunk")
        })
        .max()
        .map(|(v, std::cmp::Reverse(a))| (v, a))
        .unwrap_or((0, 0));
    let best = keys
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, if best_assignment >> i & 1 == 1 { -1 } else { 1 }))
        .collect();
    Ok(LhvSearch {
        bound: best_value as f64,
        observables: bits,
        assignments_searched: total,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::NamedState;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeSet;

    const TABLE_I: [&str; 16] = [
        "xXZZXx", "-xXZZYy", "xXIYYx", "xXIYXy", "-yYZZXx", "yYZZYy", "-yYIYYx", "-yYIYXy", "xYYIXx", "-xYYIYy",
        "xYXXYx", "xYXXXy", "yXYIXx", "-yXYIYy", "yXXXYx", "yXXXXy",
    ];
    const TABLE_II: [&str; 16] = [
        "-XXIYxy", "XYIYyy", "YYIYxy", "YXIYyy", "XXIXxx", "-XYIXyx", "-YYIXxx", "-YXIXyx", "-YXZXxy", "YYZXyy",
        "-XYZXxy", "-XXZXyy", "-YXZYxx", "YYZYyx", "-XYZYxx", "-XXZYyx",
    ];

    /// Naive oracle: every qubit gets an independent +/-1 for each of X, Y, Z
    /// (2^18 strategies on six qubits), evaluated term by term.
    fn brute_force_lhv(op: &BellOperator) -> f64 {
        let n = op.n();
        let mut best = f64::NEG_INFINITY;
        for a in 0u64..1 << (3 * n) {
            let value = |q: usize, axis: PauliAxis| -> f64 {
                let k = match axis {
                    PauliAxis::X => 0,
                    PauliAxis::Y => 1,
                    PauliAxis::Z => 2,
                    PauliAxis::I => return 1.0,
                };
                if a >> (3 * q + k) & 1 == 1 {
                    -1.0
                } else {
                    1.0
                }
            };
            let total: f64 = op
                .terms()
                .iter()
                .map(|t| t.sign().unwrap() * t.axes().iter().enumerate().map(|(q, &ax)| value(q, ax)).product::<f64>())
                .sum();
            best = best.max(total);
        }
        best
    }

    fn token_set(tokens: &[&str]) -> BTreeSet<String> {
        tokens.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn lc6_expansion_reproduces_table() {
        let op = lc6_operator();
        let got: BTreeSet<String> = op.tokens().into_iter().collect();
        assert_eq!(got, token_set(&TABLE_I));
        assert_eq!(op.terms().len(), 16);
    }

    #[test]
    fn y6_expansion_reproduces_table() {
        let op = y6_operator();
        let got: BTreeSet<String> = op.tokens().into_iter().collect();
        assert_eq!(got, token_set(&TABLE_II));
        assert!(op.metadata().unwrap().note.as_ref().unwrap().contains("X2 X4 x6"));
    }

    #[test]
    fn printed_y6_g4_is_rejected() {
        use PauliAxis::*;
        let mut gens: Vec<PauliString> = y6_generators().into_iter().map(|(_, g)| g).collect();
        gens[4] = gen(&[(2, Z), (4, Z), (6, Z)]);
        let res = expand_bell([&gens[0], &gens[1], &gens[2], &gens[3], &gens[4], &gens[5]]);
        assert!(matches!(res, Err(Error::NonCommuting(_, _))));
        let y6 = NamedState::Y6.build();
        assert_abs_diff_eq!(y6.expectation(&gens[4]).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_generators_expand_to_identity() {
        let id = PauliString::identity(6);
        let terms = expand_bell([&id, &id, &id, &id, &id, &id]).unwrap();
        assert_eq!(terms.len(), 16);
        assert!(terms.iter().all(|t| *t == id));
        let op = BellOperator::new("id", terms).unwrap();
        assert_abs_diff_eq!(op.quantum_value(&NamedState::Lc6.build()).unwrap(), 16.0, epsilon = 1e-12);
    }

    #[test]
    fn expand_rejects_bad_generators() {
        let x1 = PauliString::from_sites(2, &[(1, PauliAxis::X)]);
        let z1 = PauliString::from_sites(2, &[(1, PauliAxis::Z)]);
        let id = PauliString::identity(2);
        assert!(matches!(expand_bell([&x1, &z1, &id, &id, &id, &id]), Err(Error::NonCommuting(_, _))));
        let nh = x1.with_phase(Phase::PlusI);
        assert!(matches!(expand_bell([&nh, &id, &id, &id, &id, &id]), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn opposite_sign_duplicates_rejected() {
        let p = PauliString::parse_canonical("XZ").unwrap();
        let err = BellOperator::new("bad", vec![p.clone(), p.negated()]).unwrap_err();
        assert!(matches!(err, Error::OppositeSignDuplicate(_)));
    }

    #[test]
    fn weight_profile() {
        for op in [lc6_operator(), y6_operator()] {
            let w5 = op.terms().iter().filter(|t| t.weight() == 5).count();
            let w6 = op.terms().iter().filter(|t| t.weight() == 6).count();
            assert_eq!((w5, w6), (8, 8), "{}", op.label());
        }
        assert!(mermin_ghz6().terms().iter().all(|t| t.weight() == 6));
    }

    #[test]
    fn ideal_values() {
        let lc6 = NamedState::Lc6.build();
        let y6 = NamedState::Y6.build();
        let ghz = NamedState::Ghz6.build();
        assert_abs_diff_eq!(lc6_operator().quantum_value(&lc6).unwrap(), 16.0, epsilon = 1e-9);
        assert_abs_diff_eq!(y6_operator().quantum_value(&y6).unwrap(), 16.0, epsilon = 1e-9);
        assert_abs_diff_eq!(mermin_ghz6().quantum_value(&ghz).unwrap(), 32.0, epsilon = 1e-9);
        for t in lc6_operator().terms() {
            assert_abs_diff_eq!(lc6.expectation(t).unwrap(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn value_on_all_zero_state() {
        // Only terms diagonal in Z (no X or Y factors) contribute on |000000>.
        let zero = StateVector::basis(6, 0).unwrap();
        let op = lc6_operator();
        let expected: f64 = op
            .terms()
            .iter()
            .filter(|t| t.axes().iter().all(|a| matches!(a, PauliAxis::I | PauliAxis::Z)))
            .map(|t| t.sign().unwrap())
            .sum();
        assert_abs_diff_eq!(op.quantum_value(&zero).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 0.0);
    }

    #[test]
    fn mermin_terms() {
        let m = mermin_ghz6();
        assert_eq!(m.terms().len(), 32);
        let xs = PauliString::parse_canonical("XXXXXX").unwrap();
        assert!(m.terms().contains(&xs));
        let ghz = NamedState::Ghz6.build();
        for t in m.terms() {
            assert_abs_diff_eq!(ghz.expectation(t).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn lhv_bounds_match_naive_oracle() {
        for (op, expect_bits) in [(lc6_operator(), 14), (y6_operator(), 11), (mermin_ghz6(), 12)] {
            let search = lhv_search(&op, DEFAULT_ASSIGNMENT_CAP).unwrap();
            assert_eq!(search.bound, brute_force_lhv(&op), "{}", op.label());
            assert_eq!(search.observables, expect_bits, "{}", op.label());
            // The reported optimal assignment reproduces the bound.
            let value: f64 = op
                .terms()
                .iter()
                .map(|t| {
                    t.sign().unwrap()
                        * t.axes()
                            .iter()
                            .enumerate()
                            .filter(|(_, a)| !a.is_identity())
                            .map(|(q, &a)| search.best[&(q + 1, a)] as f64)
                            .product::<f64>()
                })
                .sum();
            assert_eq!(value, search.bound);
        }
        assert_eq!(lhv_search(&lc6_operator(), DEFAULT_ASSIGNMENT_CAP).unwrap().bound, 4.0);
        assert_eq!(lhv_search(&mermin_ghz6(), DEFAULT_ASSIGNMENT_CAP).unwrap().bound, 8.0);
    }

    #[test]
    fn lhv_small_cases() {
        let single = BellOperator::new("x", vec![PauliString::parse_canonical("XIIIII").unwrap()]).unwrap();
        assert_eq!(lhv_search(&single, 16).unwrap().bound, 1.0);
        let id = BellOperator::new("id", vec![PauliString::identity(3)]).unwrap();
        let s = lhv_search(&id, 16).unwrap();
        assert_eq!((s.bound, s.assignments_searched), (1.0, 1));
    }

    #[test]
    fn lhv_cap_enforced() {
        let err = lhv_search(&lc6_operator(), 1 << 13).unwrap_err();
        assert!(matches!(err, Error::AssignmentSpaceTooLarge { bits: 14, .. }));
        assert!(err.to_string().contains("exceeds the cap"));
    }

    #[test]
    fn lhv_invariant_under_relabeling_and_sign_flips() {
        let op = lc6_operator();
        let base = lhv_search(&op, DEFAULT_ASSIGNMENT_CAP).unwrap().bound;
        // Reverse qubit order.
        let relabeled: Vec<PauliString> = op
            .terms()
            .iter()
            .map(|t| PauliString::new(t.phase(), t.axes().iter().rev().copied().collect()))
            .collect();
        let r = BellOperator::new("rev", relabeled).unwrap();
        assert_eq!(lhv_search(&r, DEFAULT_ASSIGNMENT_CAP).unwrap().bound, base);
        // Flip the sign of the Y observable on qubit 4 in every term that uses it.
        let flipped: Vec<PauliString> = op
            .terms()
            .iter()
            .map(|t| if t.axis(4) == PauliAxis::Y { t.negated() } else { t.clone() })
            .collect();
        let f = BellOperator::new("flip", flipped).unwrap();
        assert_eq!(lhv_search(&f, DEFAULT_ASSIGNMENT_CAP).unwrap().bound, base);
    }

    #[test]
    fn violation_ratios() {
        let (lc6, _) = lc6_operator().with_computed_bound(DEFAULT_ASSIGNMENT_CAP).unwrap();
        assert_abs_diff_eq!(lc6.violation_ratio(&NamedState::Lc6.build()).unwrap(), 4.0, epsilon = 1e-9);
        let (y6, _) = y6_operator().with_computed_bound(DEFAULT_ASSIGNMENT_CAP).unwrap();
        assert_abs_diff_eq!(y6.violation_ratio(&NamedState::Y6.build()).unwrap(), 4.0, epsilon = 1e-9);
        let (id, _) = BellOperator::new("id", vec![PauliString::identity(6)])
            .unwrap()
            .with_computed_bound(16)
            .unwrap();
        assert_abs_diff_eq!(id.violation_ratio(&NamedState::Ghz6.build()).unwrap(), 1.0);
        assert!(matches!(lc6_operator().violation_ratio(&NamedState::Lc6.build()), Err(Error::MissingBound(_))));
        assert!(lc6_operator().with_lhv_bound(0.0).is_err());
    }

    #[test]
    fn document_round_trip() {
        let (op, _) = y6_operator().with_computed_bound(DEFAULT_ASSIGNMENT_CAP).unwrap();
        let text = op.to_document();
        assert!(text.contains("-XXIYxy"));
        assert!(text.contains("order = \"1-3-2-4-5-6\""));
        let back = BellOperator::from_document(&text).unwrap();
        assert_eq!(back.terms(), op.terms());
        assert_eq!(back.lhv_bound(), Some(4.0));
        assert_eq!(back.tokens(), op.tokens());
        assert!(BellOperator::from_document("label = 3").is_err());
    }
}
