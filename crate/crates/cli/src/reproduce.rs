//! The published worked numbers, recomputed.
//!
//! Each row carries the computed value, the printed figure and their absolute
//! difference. Entropies are given both exactly and with the three-digit
//! `log₁₀ x / 0.301` arithmetic the printed figures were produced with.

use std::f64::consts::FRAC_1_SQRT_2;

use infocausality::analysis::{
    binary_entropy, binary_entropy_log10_approx, guess_probability, ic_violated, sufficient_bound_n, BoundConvention,
};
use infocausality::polytope::{
    classical_simulation_optimum, enumerate_deterministic, no_signaling_vertices, pr_box_variants,
};
use infocausality::Correlation;
use serde::Serialize;

use crate::emit::display;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Violation,
    NoViolation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproductionRow {
    pub case: &'static str,
    pub quantity: &'static str,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    pub n: Option<u32>,
    pub value: f64,
    pub value_log10: Option<f64>,
    pub threshold: Option<f64>,
    pub verdict: Option<Verdict>,
    pub printed: f64,
    pub printed_threshold: Option<f64>,
    pub difference: f64,
    pub difference_log10: Option<f64>,
    pub display: String,
}

impl ReproductionRow {
    fn plain(case: &'static str, quantity: &'static str, value: f64, printed: f64, decimals: usize) -> Self {
        Self {
            case,
            quantity,
            e: None,
            n: None,
            value,
            value_log10: None,
            threshold: None,
            verdict: None,
            printed,
            printed_threshold: None,
            difference: (value - printed).abs(),
            difference_log10: None,
            display: display(value, decimals),
        }
    }
}

fn entropy_row(case: &'static str, e: f64, n: u32, printed: f64, printed_threshold: f64) -> ReproductionRow {
    let correlation = Correlation::new(e).expect("worked cases are in range");
    let report = ic_violated(correlation, n);
    let p = guess_probability(correlation, n);
    let exact = binary_entropy(p).expect("probability");
    let approx = binary_entropy_log10_approx(p).expect("probability");
    ReproductionRow {
        case,
        quantity: "h(P_k)",
        e: Some(e),
        n: Some(n),
        value: exact,
        value_log10: Some(approx),
        threshold: Some(report.threshold),
        verdict: Some(if report.violated { Verdict::Violation } else { Verdict::NoViolation }),
        printed,
        printed_threshold: Some(printed_threshold),
        difference: (exact - printed).abs(),
        difference_log10: Some((approx - printed).abs()),
        display: display(exact, 5),
    }
}

fn bound_row(case: &'static str, e: f64, convention: BoundConvention, printed: f64) -> ReproductionRow {
    let bound = sufficient_bound_n(Correlation::new(e).expect("in range"), convention).expect("above Tsirelson");
    let quantity = match convention {
        BoundConvention::TwoESquared => "sufficient n, a = 2E^2 - 1",
        BoundConvention::DeltaFromTsirelson => "sufficient n, a = E - 1/sqrt2",
    };
    ReproductionRow { e: Some(e), ..ReproductionRow::plain(case, quantity, bound.depth as f64, printed, 0) }
}

pub fn reproduce_paper() -> Vec<ReproductionRow> {
    let deterministic = enumerate_deterministic();
    let local = deterministic.iter().filter(|d| d.is_no_signaling()).count() as f64;
    let tsirelson_pk = guess_probability(Correlation::TSIRELSON, 1);
    vec![
        entropy_row("tsirelson_n1", FRAC_1_SQRT_2, 1, 0.600, 0.5),
        entropy_row("tsirelson_n10", FRAC_1_SQRT_2, 10, 0.99939, 0.9990),
        entropy_row("e725_n7", 0.725, 7, 0.99208, 0.99218),
        entropy_row("e725_n6", 0.725, 6, 0.9848, 0.9844),
        entropy_row("e708_n10", 0.708, 10, 0.99938, 0.9990),
        bound_row("bound_e725", 0.725, BoundConvention::TwoESquared, 8.0),
        bound_row("bound_e708", 0.708, BoundConvention::DeltaFromTsirelson, 432.0),
        ReproductionRow::plain(
            "classical_optimum",
            "best local PR-simulation success",
            classical_simulation_optimum().optimum,
            0.75,
            4,
        ),
        ReproductionRow {
            e: Some(FRAC_1_SQRT_2),
            ..ReproductionRow::plain("quantum_simulation", "(1+E)/2 at Tsirelson", tsirelson_pk, 0.85, 4)
        },
        ReproductionRow::plain("deterministic_states", "count", deterministic.len() as f64, 256.0, 0),
        ReproductionRow::plain("no_signaling_deterministic", "count", local, 16.0, 0),
        ReproductionRow::plain("signaling_deterministic", "count", deterministic.len() as f64 - local, 240.0, 0),
        ReproductionRow::plain("pr_variants", "count", pr_box_variants().len() as f64, 8.0, 0),
        ReproductionRow::plain("polytope_vertices", "count", no_signaling_vertices().len() as f64, 24.0, 0),
    ]
}
