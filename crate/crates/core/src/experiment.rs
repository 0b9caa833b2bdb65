//! Counting statistics for Bell-term measurements.
//!
//! Simulation draws a Poisson number of events per setting and a binomial
//! split into +1/-1 outcomes. Ingestion reads `observable,value,sigma` tables;
//! aggregation sums estimates and combines errors in quadrature.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::bell::BellOperator;
use crate::error::{Error, Result};
use crate::noise::{noisy_expectation, DepolarizingNoise};
use crate::pauli::{PauliAxis, PauliString, QubitOrder};
use crate::state::StateVector;

/// Mean events per setting. Chosen so that `sqrt((1 - 0.6^2) / N)` gives the
/// typical +/-0.04 error of the measured tables; the per-setting count itself
/// is not published.
pub const DEFAULT_MEAN_EVENTS: f64 = 400.0;

/// Default master seed for simulations.
pub const DEFAULT_SEED: u64 = 20_090_415;

/// Published LC6 term table (qubit order 5-1-3-2-4-6).
pub const TABLE_LC6_CSV: &str = include_str!("../data/table1.csv");

/// Published Y6 term table (qubit order 1-3-2-4-5-6).
pub const TABLE_Y6_CSV: &str = include_str!("../data/table2.csv");

/// Aggregate values reported alongside the published tables.
pub const REPORTED_LC6_VALUE: f64 = 9.40;
pub const REPORTED_Y6_VALUE: f64 = 9.30;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub term: PauliString,
    /// Estimated expectation of the signed term.
    pub estimate: f64,
    pub sigma: f64,
    /// Event count, absent for ingested literature values.
    pub events: Option<u64>,
}

impl MeasurementRecord {
    pub fn new(term: PauliString, estimate: f64, sigma: f64, events: Option<u64>) -> Result<Self> {
        if !term.is_hermitian() {
            return Err(Error::NotHermitian(term.phase().to_string()));
        }
        if !(sigma >= 0.0) || !estimate.is_finite() {
            return Err(Error::InvalidParameter(format!("estimate {estimate}, sigma {sigma}")));
        }
        if estimate.abs() > 1.0 + 3.0 * sigma {
            return Err(Error::InvalidParameter(format!(
                "estimate {estimate} is more than 3 sigma outside [-1, 1]"
            )));
        }
        Ok(MeasurementRecord {
            term,
            estimate,
            sigma,
            events,
        })
    }
}

fn poisson_events(rng: &mut ChaCha8Rng, mean: f64) -> Result<u64> {
    let dist = Poisson::new(mean).map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))?;
    for _ in 0..2 {
        let n = dist.sample(rng) as u64;
        if n > 0 {
            return Ok(n);
        }
    }
    Err(Error::ZeroEvents(mean))
}

/// Simulates one measurement setting.
///
/// `N ~ Poisson(mean_events)` (one redraw if zero), `N+ ~ Binomial(N, (1+E)/2)`
/// with `E` the noisy expectation of the signed term, then
/// `estimate = (N+ - N-)/N` and `sigma = sqrt((1 - estimate^2)/N)`.
pub fn simulate_counts(
    s: &StateVector,
    noise: &DepolarizingNoise,
    term: &PauliString,
    mean_events: f64,
    seed: u64,
) -> Result<MeasurementRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_with_rng(s, noise, term, mean_events, &mut rng)
}

fn simulate_with_rng(
    s: &StateVector,
    noise: &DepolarizingNoise,
    term: &PauliString,
    mean_events: f64,
    rng: &mut ChaCha8Rng,
) -> Result<MeasurementRecord> {
    if !(mean_events > 0.0) || !mean_events.is_finite() {
        return Err(Error::InvalidParameter(format!("mean events {mean_events}")));
    }
    let ideal = s.expectation(term)?;
    let e_true = noisy_expectation(ideal, term, noise)?.clamp(-1.0, 1.0);
    let n = poisson_events(rng, mean_events)?;
    let p_plus = 0.5 * (1.0 + e_true);
    let plus = Binomial::new(n, p_plus)
        .map_err(|e| Error::InvalidParameter(format!("binomial p {p_plus}: {e}")))?
        .sample(rng);
    let estimate = (2.0 * plus as f64 - n as f64) / n as f64;
    let sigma = ((1.0 - estimate * estimate).max(0.0) / n as f64).sqrt();
    MeasurementRecord::new(term.clone(), estimate, sigma, Some(n))
}

/// Simulates every term of `op`; setting `k` draws from ChaCha stream `k` of the master seed.
pub fn simulate_operator(
    s: &StateVector,
    noise: &DepolarizingNoise,
    op: &BellOperator,
    mean_events: f64,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    op.terms()
        .par_iter()
        .enumerate()
        .map(|(k, term)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            simulate_with_rng(s, noise, term, mean_events, &mut rng)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestedTable {
    /// Order the tokens were read in; qubits written in lowercase are marked so.
    pub order: QubitOrder,
    pub records: Vec<MeasurementRecord>,
}

/// Reads an `observable,value,sigma` table.
///
/// The qubit order comes from `order` or, failing that, from a `# order=...`
/// comment line. Other `#` lines are ignored.
pub fn ingest_table(document: &str, order: Option<&QubitOrder>) -> Result<IngestedTable> {
    let declared = document
        .lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("order").map(|r| r.trim_start_matches([' ', '=', ':']).trim()));
    let order = match (order, declared) {
        (Some(o), _) => o.clone(),
        (None, Some(text)) => text.parse::<QubitOrder>()?,
        (None, None) => {
            if document.lines().all(|l| l.trim().is_empty() || l.trim().starts_with('#')) {
                return Ok(IngestedTable {
                    order: QubitOrder::canonical(0),
                    records: Vec::new(),
                });
            }
            return Err(Error::MalformedTable("no qubit order given and no `# order=` line".into()));
        }
    };

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(document.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedTable(e.to_string()))?
        .clone();
    if headers.is_empty() {
        return Ok(IngestedTable {
            order,
            records: Vec::new(),
        });
    }
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MalformedTable(format!("missing column {name:?}")))
    };
    let (c_obs, c_val, c_sig) = (column("observable")?, column("value")?, column("sigma")?);

    let mut lowercase = vec![false; order.len()];
    let mut records = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::MalformedTable(e.to_string()))?;
        let field = |c: usize| row.get(c).unwrap_or("");
        let token = field(c_obs);
        let term = PauliString::parse(token, &order)?;
        let number = |c: usize, what: &str| {
            field(c)
                .parse::<f64>()
                .map_err(|_| Error::MalformedTable(format!("row {}: {what} {:?} is not a number", line + 1, field(c))))
        };
        let estimate = number(c_val, "value")?;
        let sigma = number(c_sig, "sigma")?;
        let letters = token.trim().trim_start_matches(['+', '-', '\u{2212}']);
        for (ch, &q) in letters.chars().zip(order.positions()) {
            if ch.is_ascii_lowercase() && ch != 'i' {
                lowercase[q - 1] = true;
            }
        }
        records.push(MeasurementRecord::new(term, estimate, sigma, None)?);
    }
    let low: Vec<usize> = (1..=order.len()).filter(|&q| lowercase[q - 1]).collect();
    let order = order.with_lowercase(&low)?;
    Ok(IngestedTable { order, records })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellAggregate {
    pub value: f64,
    pub sigma: f64,
    pub bound: f64,
    pub sigmas_above: f64,
    #[serde(rename = "D")]
    pub ratio_d: f64,
    #[serde(rename = "sigma_D")]
    pub sigma_d: f64,
    pub terms: usize,
}

impl BellAggregate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("aggregate serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "value         {:.4} +/- {:.4}", self.value, self.sigma);
        let _ = writeln!(out, "bound         {}", self.bound);
        let _ = writeln!(out, "sigmas_above  {:.2}", self.sigmas_above);
        let _ = writeln!(out, "D             {:.4} +/- {:.4}", self.ratio_d, self.sigma_d);
        let _ = writeln!(out, "terms         {}", self.terms);
        out
    }
}

/// Sums estimates and combines sigmas in quadrature.
///
/// With a reference operator, every term must appear exactly once.
pub fn aggregate_bell(
    records: &[MeasurementRecord],
    bound: f64,
    reference: Option<&BellOperator>,
) -> Result<BellAggregate> {
    if !(bound > 0.0) {
        return Err(Error::InvalidParameter(format!("bound must be positive, got {bound}")));
    }
    if records.is_empty() {
        return Err(Error::RecordMismatch("no records".into()));
    }
    if let Some(op) = reference {
        check_coverage(records, op)?;
    }
    let mut sorted: Vec<&MeasurementRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (a.term.axes(), a.term.phase(), a.estimate.to_bits(), a.sigma.to_bits()).cmp(&(
            b.term.axes(),
            b.term.phase(),
            b.estimate.to_bits(),
            b.sigma.to_bits(),
        ))
    });
    let value: f64 = sorted.iter().map(|r| r.estimate).sum();
    let sigma = sorted.iter().map(|r| r.sigma * r.sigma).sum::<f64>().sqrt();
    let sigmas_above = if sigma > 0.0 {
        (value - bound) / sigma
    } else if value > bound {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(BellAggregate {
        value,
        sigma,
        bound,
        sigmas_above,
        ratio_d: value / bound,
        sigma_d: sigma / bound,
        terms: records.len(),
    })
}

fn check_coverage(records: &[MeasurementRecord], op: &BellOperator) -> Result<()> {
    let mut wanted: HashMap<&[PauliAxis], &PauliString> = op.terms().iter().map(|t| (t.axes(), t)).collect();
    for r in records {
        match wanted.remove(r.term.axes()) {
            Some(t) if t.phase() == r.term.phase() => {}
            Some(t) => {
                return Err(Error::RecordMismatch(format!("term {} recorded with sign of {}", t, r.term)));
            }
            None => {
                let dup = op.terms().iter().any(|t| t.axes() == r.term.axes());
                let what = if dup { "duplicate" } else { "unexpected" };
                return Err(Error::RecordMismatch(format!("{what} term {}", r.term)));
            }
        }
    }
    if let Some(missing) = wanted.values().next() {
        return Err(Error::RecordMismatch(format!(
            "{} term(s) missing, e.g. {missing}",
            wanted.len()
        )));
    }
    Ok(())
}
