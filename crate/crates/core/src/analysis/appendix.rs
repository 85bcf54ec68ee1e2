//! Numeric check that `E = 1/√2` never violates information causality.
//!
//! Three routes are evaluated for every depth `n` and must agree:
//!
//! 1. direct: `h(½(1+yⁿ)) ≥ 1 − 2⁻ⁿ` with `y = 1/√2`;
//! 2. transformed: `log₂(1−y²ⁿ) + yⁿ log₂((1+yⁿ)/(1−yⁿ)) ≤ 2^{−(n−1)}`;
//! 3. series: `S(n) = ½ + Σ_{m≥2} 2^{−((m−1)n+1)} / (m(2m−1)) ≤ ln 2`.
//!
//! Routes 1 and 2 lose everything to cancellation in double precision once
//! `n` passes ~50, so both are evaluated in binary floating point with
//! `2n + 192` bits of mantissa. Route 3 has no cancellation and runs in `f64`
//! with a geometric bound on the truncated tail.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

/// Terms kept in the partial sum of `S(n)`.
pub const SERIES_TERMS: u32 = 50;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AppendixRow {
    pub depth: u32,
    /// `h(½(1+yⁿ)) − (1 − 2⁻ⁿ)`.
    pub direct_margin: f64,
    /// Direct margin times `2ⁿ`.
    pub direct_scaled: f64,
    pub direct_holds: bool,
    /// `2^{−(n−1)} − [log₂(1−y²ⁿ) + yⁿ log₂((1+yⁿ)/(1−yⁿ))]`.
    pub transformed_margin: f64,
    pub transformed_scaled: f64,
    pub transformed_holds: bool,
    pub series_first_term: f64,
    pub series_partial_sum: f64,
    pub series_tail_bound: f64,
    /// `ln 2 − (partial sum + tail bound)`.
    pub series_margin: f64,
    pub series_holds: bool,
}

impl AppendixRow {
    pub fn all_hold(&self) -> bool {
        self.direct_holds && self.transformed_holds && self.series_holds
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AppendixReport {
    pub n_max: u32,
    pub series_terms: u32,
    pub rows: Vec<AppendixRow>,
    pub all_hold: bool,
}

pub fn verify_appendix_inequality(n_max: u32) -> Result<AppendixReport> {
    let mut cc = Consts::new().map_err(|_| Error::Precision)?;
    let rows = (1..=n_max).map(|n| row(n, &mut cc)).collect::<Result<Vec<_>>>()?;
    let all_hold = rows.iter().all(AppendixRow::all_hold);
    Ok(AppendixReport { n_max, series_terms: SERIES_TERMS, rows, all_hold })
}

fn row(n: u32, cc: &mut Consts) -> Result<AppendixRow> {
    let p = 2 * n as usize + 192;
    let one = BigFloat::from_u8(1, p);
    let half = BigFloat::from_f64(0.5, p);
    let ln2 = BigFloat::from_u8(2, p).ln(p, RM, cc);
    let y = half.sqrt(p, RM).powi(n as usize, p, RM);
    let allowance = half.powi(n as usize, p, RM);
    let scale = BigFloat::from_u8(2, p).powi(n as usize, p, RM);

    // Route 1.
    let hi = one.add(&y, p, RM).mul(&half, p, RM);
    let lo = one.sub(&y, p, RM).mul(&half, p, RM);
    let entropy = hi.mul(&hi.ln(p, RM, cc), p, RM).add(&lo.mul(&lo.ln(p, RM, cc), p, RM), p, RM).div(&ln2, p, RM).neg();
    let direct = entropy.sub(&one.sub(&allowance, p, RM), p, RM);

    // Route 2.
    let y_sq = y.mul(&y, p, RM);
    let lhs = one
        .sub(&y_sq, p, RM)
        .ln(p, RM, cc)
        .add(&y.mul(&hi.div(&lo, p, RM).ln(p, RM, cc), p, RM), p, RM)
        .div(&ln2, p, RM);
    let transformed = allowance.add(&allowance, p, RM).sub(&lhs, p, RM);

    let series = series_bound(n);
    Ok(AppendixRow {
        depth: n,
        direct_margin: to_f64(&direct, cc)?,
        direct_scaled: to_f64(&direct.mul(&scale, p, RM), cc)?,
        direct_holds: !direct.is_negative(),
        transformed_margin: to_f64(&transformed, cc)?,
        transformed_scaled: to_f64(&transformed.mul(&scale, p, RM), cc)?,
        transformed_holds: !transformed.is_negative(),
        series_first_term: 0.5,
        series_partial_sum: series.0,
        series_tail_bound: series.1,
        series_margin: LN_2 - (series.0 + series.1),
        series_holds: series.0 + series.1 <= LN_2,
    })
}

/// Partial sum through `m = SERIES_TERMS` and an upper bound on the rest.
/// Consecutive terms shrink by at least `2⁻ⁿ`, so the tail is below its first
/// term over `1 − 2⁻ⁿ`.
fn series_bound(n: u32) -> (f64, f64) {
    let n = n as f64;
    let term = |m: u32| {
        let m_f = m as f64;
        libm::exp2(-((m_f - 1.0) * n + 1.0)) / (m_f * (2.0 * m_f - 1.0))
    };
    let partial = 0.5 + (2..=SERIES_TERMS).map(term).sum::<f64>();
    let tail = term(SERIES_TERMS + 1) / (1.0 - libm::exp2(-n));
    (partial, tail)
}

fn to_f64(x: &BigFloat, cc: &mut Consts) -> Result<f64> {
    let text: String = x.format(Radix::Dec, RM, cc).map_err(|_| Error::Precision)?;
    text.parse().map_err(|_| Error::Precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_series() {
        let r = verify_appendix_inequality(1).unwrap();
        let row = r.rows[0];
        assert_eq!(row.series_first_term, 0.5);
        // 1/2 + 1/24 + 1/120 + ...
        assert!(row.series_partial_sum > 0.5 + 1.0 / 24.0 + 1.0 / 120.0);
        assert!(row.series_partial_sum + row.series_tail_bound < LN_2);
        assert!(r.all_hold);
    }

    #[test]
    fn series_tends_to_one_half() {
        let (partial, tail) = series_bound(60);
        assert!((partial - 0.5).abs() < 1e-18);
        assert!(tail < 1e-30);
    }

    #[test]
    fn tail_is_tiny_at_fifty_terms() {
        for n in 1..=64 {
            assert!(series_bound(n).1 < 1e-17, "n={n}");
        }
    }

    #[test]
    fn direct_depth_one_margin() {
        // h(½(1+1/√2)) − ½.
        let r = verify_appendix_inequality(1).unwrap();
        assert!((r.rows[0].direct_margin - (0.6008760366928562 - 0.5)).abs() < 1e-15);
    }
}
