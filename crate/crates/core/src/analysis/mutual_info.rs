use alloc::vec;
use alloc::vec::Vec;

use super::{binary_entropy, guess_probability};
use crate::boxmodel::Correlation;
use crate::error::{Error, Result};
use crate::protocol::RoundTranscript;

/// Below this many rounds for some index the report is flagged unreliable.
pub const MIN_SAMPLES_PER_INDEX: u64 = 100;

/// Bob's guess for the bit he was asked about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuessRecord {
    pub index: usize,
    pub target: bool,
    pub guess: bool,
}

impl From<&RoundTranscript> for GuessRecord {
    fn from(t: &RoundTranscript) -> Self {
        Self { index: t.b, target: t.data[t.b], guess: t.guess }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MutualInfoReport {
    pub data_len: usize,
    pub messages: usize,
    /// `I(a_k : β | b = k)` in bits.
    pub per_index: Vec<f64>,
    pub samples: Vec<u64>,
    /// `I = Σ_k I(a_k : β | b = k)`.
    pub total: f64,
    /// Fraction of correct guesses over all rounds.
    pub pooled_success: f64,
    /// `N − N·h(P)` at the pooled success rate.
    pub lower_bound: f64,
    pub violated: bool,
    pub reliable: bool,
}

/// Plug-in Shannon mutual information of a 2×2 contingency table
/// `counts[x][y]`, in bits.
pub fn mutual_information_bits(counts: [[u64; 2]; 2]) -> f64 {
    let total: u64 = counts.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let row = [counts[0][0] + counts[0][1], counts[1][0] + counts[1][1]];
    let col = [counts[0][0] + counts[1][0], counts[0][1] + counts[1][1]];
    let mut info = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            let c = counts[x][y];
            if c > 0 {
                let joint = c as f64 / n;
                info += joint * libm::log2(c as f64 * n / (row[x] as f64 * col[y] as f64));
            }
        }
    }
    info.max(0.0)
}

/// Per-index mutual information between the asked-for bit and Bob's guess.
/// Information causality with `m` message bits is violated when `I > m`.
pub fn mutual_info_report(
    records: impl IntoIterator<Item = GuessRecord>,
    data_len: usize,
    messages: usize,
) -> Result<MutualInfoReport> {
    if messages == 0 {
        return Err(Error::NoMessages);
    }
    let mut tables = vec![[[0u64; 2]; 2]; data_len];
    let (mut correct, mut rounds) = (0u64, 0u64);
    for r in records {
        if r.index >= data_len {
            return Err(Error::IndexOutOfRange { index: r.index, len: data_len });
        }
        tables[r.index][r.target as usize][r.guess as usize] += 1;
        correct += (r.target == r.guess) as u64;
        rounds += 1;
    }
    let per_index: Vec<f64> = tables.iter().map(|t| mutual_information_bits(*t)).collect();
    let samples: Vec<u64> = tables.iter().map(|t| t.iter().flatten().sum()).collect();
    let total = per_index.iter().sum();
    let pooled_success = if rounds > 0 { correct as f64 / rounds as f64 } else { 0.5 };
    let n = data_len as f64;
    Ok(MutualInfoReport {
        data_len,
        messages,
        per_index,
        total,
        pooled_success,
        lower_bound: n - n * binary_entropy(pooled_success)?,
        violated: total > messages as f64,
        reliable: samples.iter().all(|&s| s >= MIN_SAMPLES_PER_INDEX),
        samples,
    })
}

/// `N − N·h(½(1+Eⁿ))` with `N = 2ⁿ`.
pub fn information_lower_bound(e: Correlation, n: u32) -> f64 {
    let len = libm::exp2(n as f64);
    len - len * binary_entropy(guess_probability(e, n)).unwrap_or(1.0)
}
