//! Binary entropy and the information-causality test for the pyramid game.
//!
//! With depth-`n` pyramids of isotropic boxes Bob is right with probability
//! `P = ½(1+Eⁿ)`. One message bit spread over `2ⁿ` data bits may buy at most
//! `2⁻ⁿ` bits per data bit, so the game violates information causality when
//! `h(P) < 1 − 2⁻ⁿ`.

use core::f64::consts::{FRAC_1_SQRT_2, LN_2};

use crate::boxmodel::Correlation;
use crate::error::{Error, Result};

mod appendix;
mod mutual_info;

pub use appendix::{verify_appendix_inequality, AppendixReport, AppendixRow, SERIES_TERMS};
pub use mutual_info::{
    information_lower_bound, mutual_info_report, mutual_information_bits, GuessRecord, MutualInfoReport,
    MIN_SAMPLES_PER_INDEX,
};

/// `−p log₂ p − (1−p) log₂(1−p)` with `0·log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(plogp(p) + plogp(1.0 - p))
}

fn plogp(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * libm::log2(p)
    }
}

/// Three-digit hand arithmetic: `log₂ x` taken as `log₁₀ x / 0.301`.
///
/// This overstates the entropy by the factor `log₁₀ 2 / 0.301 ≈ 1.0001`,
/// which is visible in the fourth decimal near `h = 1`.
pub fn binary_entropy_log10_approx(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let term = |q: f64| if q == 0.0 { 0.0 } else { -q * libm::log10(q) / 0.301 };
    Ok(term(p) + term(1.0 - p))
}

/// `1 − h(½(1+y))`, accurate even when `y` is tiny and `h` is within an ulp
/// of one.
pub fn entropy_deficit(y: f64) -> f64 {
    let y = y.abs();
    if y >= 1.0 {
        return 1.0;
    }
    (y * (libm::log1p(y) - libm::log1p(-y)) + libm::log1p(-y * y)) / (2.0 * LN_2)
}

/// `P_k = ½(1+Eⁿ)`.
pub fn guess_probability(e: Correlation, n: u32) -> f64 {
    0.5 * (1.0 + libm::pow(e.get(), n as f64))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EntropyReport {
    pub correlation: f64,
    pub depth: u32,
    pub guess_probability: f64,
    /// `h(P_k)` in bits.
    pub entropy: f64,
    /// `1 − h(P_k)`, computed without cancellation.
    pub information_gain: f64,
    /// `1 − 2⁻ⁿ`.
    pub threshold: f64,
    pub violated: bool,
}

/// Violation test `h(½(1+Eⁿ)) < 1 − 2⁻ⁿ`.
///
/// The comparison is made on the equivalent form `ln(1 − h) > −n ln 2`, which
/// stays exact after `h` has rounded to 1 and after `Eⁿ` or `2⁻ⁿ` underflow.
pub fn ic_violated(e: Correlation, n: u32) -> EntropyReport {
    let p = guess_probability(e, n);
    let y = libm::pow(e.get(), n as f64);
    let gain = entropy_deficit(y);
    let allowance = libm::exp2(-(n as f64));
    EntropyReport {
        correlation: e.get(),
        depth: n,
        guess_probability: p,
        entropy: 1.0 - gain,
        information_gain: gain,
        threshold: 1.0 - allowance,
        violated: log_deficit(e.get(), n) > -(n as f64) * LN_2,
    }
}

/// `ln(1 − h(½(1+Eⁿ)))`. For tiny `y = |E|ⁿ` this uses
/// `1 − h = y²(1 + y²/6 + …)/(2 ln 2)` with `ln y = n ln|E|`.
fn log_deficit(e: f64, n: u32) -> f64 {
    let e = e.abs();
    if e == 0.0 {
        return f64::NEG_INFINITY;
    }
    let log_y = n as f64 * libm::log(e);
    if log_y > -18.0 {
        libm::log(entropy_deficit(libm::exp(log_y)))
    } else {
        2.0 * log_y - libm::log(2.0 * LN_2) + libm::exp(2.0 * log_y) / 6.0
    }
}

/// Smallest `n ≤ n_max` whose game violates information causality.
pub fn min_violating_n(e: Correlation, n_max: u32) -> Option<u32> {
    (1..=n_max).find(|&n| ic_violated(e, n).violated)
}

/// `2 ln 2 − 1 ≈ 0.386`.
pub const LINEAR_BOUND_NUMERATOR: f64 = 2.0 * LN_2 - 1.0;

/// Which quantity plays the role of `a` in `n > (2 ln 2 − 1)/a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BoundConvention {
    /// `a = 2E² − 1`, so `(2E²)ⁿ = (1+a)ⁿ > 1 + na`. The result is a true
    /// sufficient depth: the smallest integer strictly above the ratio.
    TwoESquared,
    /// `a = E − 1/√2`. Not a sufficient condition on its own; the depth is the
    /// ratio rounded to the nearest integer, which is how the published
    /// near-Tsirelson figure (E = .708 → 432) was obtained.
    DeltaFromTsirelson,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SufficientBound {
    pub convention: BoundConvention,
    pub correlation: f64,
    pub a: f64,
    /// `(2 ln 2 − 1)/a`.
    pub ratio: f64,
    pub depth: u32,
}

pub fn sufficient_bound_n(e: Correlation, convention: BoundConvention) -> Result<SufficientBound> {
    let e = e.get();
    if e <= FRAC_1_SQRT_2 {
        return Err(Error::BoundInapplicable(e));
    }
    let a = match convention {
        BoundConvention::TwoESquared => 2.0 * e * e - 1.0,
        BoundConvention::DeltaFromTsirelson => e - FRAC_1_SQRT_2,
    };
    let ratio = LINEAR_BOUND_NUMERATOR / a;
    let depth = match convention {
        BoundConvention::TwoESquared => libm::floor(ratio) + 1.0,
        BoundConvention::DeltaFromTsirelson => libm::round(ratio).max(1.0),
    };
    Ok(SufficientBound { convention, correlation: e, a, ratio, depth: depth as u32 })
}

/// `1 − y²/(2 ln 2)`, an upper bound on `h(½(1+y))`.
pub fn entropy_upper_bound(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::ArgumentOutOfRange(y));
    }
    Ok(1.0 - y * y / (2.0 * LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corr(e: f64) -> Correlation {
        Correlation::new(e).unwrap()
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!(binary_entropy(1.01).is_err());
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn tsirelson_depth_one_entropy() {
        let h = binary_entropy(0.5 * (1.0 + FRAC_1_SQRT_2)).unwrap();
        assert!((h - 0.600).abs() < 1e-3, "{h}");
        // Classical strength for comparison.
        assert!((binary_entropy(0.75).unwrap() - 0.811).abs() < 5e-4);
    }

    #[test]
    fn deficit_agrees_with_direct_entropy() {
        for i in 0..=100 {
            let y = i as f64 / 100.0;
            let direct = 1.0 - binary_entropy(0.5 * (1.0 + y)).unwrap();
            assert!((entropy_deficit(y) - direct).abs() < 1e-14, "y={y}");
        }
        assert_eq!(entropy_deficit(0.0), 0.0);
    }

    #[test]
    fn guess_probability_examples() {
        for n in 1..10 {
            assert_eq!(guess_probability(Correlation::PR, n), 1.0);
            assert_eq!(guess_probability(Correlation::NONE, n), 0.5);
        }
        assert!((guess_probability(Correlation::TSIRELSON, 2) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn worked_cases() {
        let r = ic_violated(corr(0.725), 7);
        assert!((r.entropy - 0.99208).abs() < 1e-4);
        assert!((r.threshold - 0.99218).abs() < 1e-5);
        assert!(r.violated);
        assert!(r.entropy < r.threshold);

        let r = ic_violated(corr(0.725), 6);
        assert!((r.entropy - 0.9848).abs() < 1e-4);
        assert!(!r.violated);

        let r = ic_violated(Correlation::TSIRELSON, 10);
        assert!((r.entropy - 0.99939).abs() < 1e-4);
        assert!((r.threshold - 0.9990).abs() < 1e-4);
        assert!(!r.violated);
    }

    #[test]
    fn minimal_violating_depth() {
        assert_eq!(min_violating_n(corr(0.725), 20), Some(7));
        assert_eq!(min_violating_n(Correlation::TSIRELSON, 64), None);
        assert_eq!(min_violating_n(Correlation::PR, 5), Some(1));
        assert_eq!(min_violating_n(Correlation::CLASSICAL, 200), None);
    }

    #[test]
    fn sufficient_bounds() {
        let b = sufficient_bound_n(corr(0.725), BoundConvention::TwoESquared).unwrap();
        assert!((b.a - 0.05125).abs() < 1e-12);
        assert_eq!(b.depth, 8);
        let b = sufficient_bound_n(corr(0.708), BoundConvention::DeltaFromTsirelson).unwrap();
        assert_eq!(b.depth, 432);
        assert_eq!(sufficient_bound_n(Correlation::PR, BoundConvention::TwoESquared).unwrap().depth, 1);
        assert_eq!(
            sufficient_bound_n(Correlation::TSIRELSON, BoundConvention::TwoESquared),
            Err(Error::BoundInapplicable(FRAC_1_SQRT_2))
        );
        assert!(sufficient_bound_n(corr(0.7), BoundConvention::DeltaFromTsirelson).is_err());
    }

    #[test]
    fn two_e_squared_bound_is_sufficient() {
        // (1+a)ⁿ ≥ 1+na > 2 ln 2 at the returned depth.
        for i in 1..=50 {
            let e = FRAC_1_SQRT_2 + i as f64 * (1.0 - FRAC_1_SQRT_2) / 50.0;
            let b = sufficient_bound_n(corr(e), BoundConvention::TwoESquared).unwrap();
            assert!(1.0 + b.depth as f64 * b.a > 2.0 * LN_2);
            assert!(libm::pow(2.0 * e * e, b.depth as f64) > 2.0 * LN_2);
            assert!(ic_violated(corr(e), b.depth).violated);
        }
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(entropy_upper_bound(0.0).unwrap(), 1.0);
        let at_one = entropy_upper_bound(1.0).unwrap();
        assert!((at_one - 0.2787).abs() < 1e-4);
        assert!(at_one >= binary_entropy(1.0).unwrap());
        let at_t = entropy_upper_bound(FRAC_1_SQRT_2).unwrap();
        assert!((at_t - 0.6394).abs() < 1e-4);
        assert!(at_t >= 0.600);
        assert!(entropy_upper_bound(1.5).is_err());
    }

    #[test]
    fn entropy_monotone_in_depth_and_strength() {
        for e in [0.3, 0.5, FRAC_1_SQRT_2, 0.725, 0.9] {
            let mut last = ic_violated(corr(e), 1);
            for n in 2..=30 {
                let r = ic_violated(corr(e), n);
                assert!(r.information_gain < last.information_gain, "e={e} n={n}");
                assert!(r.entropy >= last.entropy);
                last = r;
            }
        }
        for n in 1..=12 {
            let mut last = ic_violated(corr(0.05), n);
            for i in 2..20 {
                let r = ic_violated(corr(0.05 * i as f64), n);
                assert!(r.information_gain > last.information_gain, "n={n} i={i}");
                assert!(r.entropy <= last.entropy);
                last = r;
            }
        }
    }

    #[test]
    fn log10_hand_arithmetic() {
        let h = binary_entropy_log10_approx(0.5 * (1.0 + libm::pow(FRAC_1_SQRT_2, 10.0))).unwrap();
        assert!((h - 0.99939).abs() < 1e-5, "{h}");
        let exact = binary_entropy(0.5).unwrap();
        assert!((binary_entropy_log10_approx(0.5).unwrap() / exact - core::f64::consts::LOG10_2 / 0.301).abs() < 1e-15);
    }
}
