//! Binary-input/binary-output bipartite behaviours and single-use box instances.
//!
//! A behaviour is the table `p(A,B|a,b)`. Rows are input pairs in the order
//! `(a,b) = 00, 01, 10, 11`; columns are output pairs `(A,B) = 00, 01, 10, 11`.

use core::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::rng::KeyedStream;

/// Tolerance for normalization and no-signaling checks.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Normalized correlation strength `E = K/4`, always within `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct Correlation(f64);

impl Correlation {
    pub const PR: Self = Self(1.0);
    pub const TSIRELSON: Self = Self(FRAC_1_SQRT_2);
    pub const CLASSICAL: Self = Self(0.5);
    pub const NONE: Self = Self(0.0);

    pub fn new(e: f64) -> Result<Self> {
        if (-1.0..=1.0).contains(&e) {
            Ok(Self(e))
        } else {
            Err(Error::CorrelationOutOfRange(e))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Correlation {
    type Error = Error;

    fn try_from(e: f64) -> Result<Self> {
        Self::new(e)
    }
}

impl From<Correlation> for f64 {
    fn from(e: Correlation) -> f64 {
        e.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Side {
    Alice,
    Bob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InputPair {
    pub a: bool,
    pub b: bool,
}

impl InputPair {
    pub const ALL: [InputPair; 4] = [
        InputPair::new(false, false),
        InputPair::new(false, true),
        InputPair::new(true, false),
        InputPair::new(true, true),
    ];

    pub const fn new(a: bool, b: bool) -> Self {
        Self { a, b }
    }

    #[inline]
    pub const fn index(self) -> usize {
        ((self.a as usize) << 1) | self.b as usize
    }

    /// The PR condition's target parity `a·b`.
    #[inline]
    pub const fn product(self) -> bool {
        self.a & self.b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OutputPair {
    pub alice: bool,
    pub bob: bool,
}

impl OutputPair {
    pub const ALL: [OutputPair; 4] = [
        OutputPair::new(false, false),
        OutputPair::new(false, true),
        OutputPair::new(true, false),
        OutputPair::new(true, true),
    ];

    pub const fn new(alice: bool, bob: bool) -> Self {
        Self { alice, bob }
    }

    #[inline]
    pub const fn index(self) -> usize {
        ((self.alice as usize) << 1) | self.bob as usize
    }

    #[inline]
    pub const fn parity(self) -> bool {
        self.alice ^ self.bob
    }
}

/// A normalized table `p(A,B|a,b)` with nonnegative entries.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoxBehavior {
    probs: [[f64; 4]; 4],
}

impl BoxBehavior {
    /// Validates nonnegativity and normalization to within [`STRUCTURAL_TOL`].
    pub fn new(probs: [[f64; 4]; 4]) -> Result<Self> {
        Self::with_tolerance(probs, STRUCTURAL_TOL)
    }

    /// Like [`BoxBehavior::new`] with a caller-chosen normalization tolerance.
    pub fn with_tolerance(probs: [[f64; 4]; 4], tol: f64) -> Result<Self> {
        for (input, row) in probs.iter().enumerate() {
            for (output, &value) in row.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::InvalidEntry { input, output, value });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::NotNormalized { input, sum });
            }
        }
        Ok(Self { probs })
    }

    /// Table 1: same outputs unless both inputs are 1, uniform marginals.
    pub fn pr_box() -> Self {
        Self::isotropic(Correlation::PR)
    }

    pub fn uniform() -> Self {
        Self { probs: [[0.25; 4]; 4] }
    }

    /// For every input pair, `A⊕B = a·b` holds with probability `(1+E)/2`,
    /// split evenly between the two consistent output pairs.
    pub fn isotropic(e: Correlation) -> Self {
        let hit = 0.25 * (1.0 + e.get());
        let miss = 0.25 * (1.0 - e.get());
        let mut probs = [[0.0; 4]; 4];
        for input in InputPair::ALL {
            for output in OutputPair::ALL {
                probs[input.index()][output.index()] = if output.parity() == input.product() { hit } else { miss };
            }
        }
        Self { probs }
    }

    pub fn probs(&self) -> &[[f64; 4]; 4] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, input: InputPair, output: OutputPair) -> f64 {
        self.probs[input.index()][output.index()]
    }

    /// `p(A = alice_out | a, b)`.
    pub fn alice_marginal(&self, input: InputPair, alice_out: bool) -> f64 {
        self.prob(input, OutputPair::new(alice_out, false)) + self.prob(input, OutputPair::new(alice_out, true))
    }

    /// `p(B = bob_out | a, b)`.
    pub fn bob_marginal(&self, input: InputPair, bob_out: bool) -> f64 {
        self.prob(input, OutputPair::new(false, bob_out)) + self.prob(input, OutputPair::new(true, bob_out))
    }

    /// `⟨ab⟩ = p(same|ab) − p(different|ab)` in ±1 units.
    pub fn correlator(&self, input: InputPair) -> f64 {
        OutputPair::ALL.iter().map(|&o| if o.parity() { -self.prob(input, o) } else { self.prob(input, o) }).sum()
    }

    /// CHSH value `K = ⟨00⟩ + ⟨01⟩ + ⟨10⟩ − ⟨11⟩`.
    pub fn chsh_value(&self) -> f64 {
        InputPair::ALL.iter().map(|&i| if i.product() { -self.correlator(i) } else { self.correlator(i) }).sum()
    }

    /// Probability of meeting the PR condition with uniformly chosen inputs.
    pub fn pr_success(&self) -> f64 {
        0.5 * (1.0 + self.chsh_value() / 4.0)
    }

    /// Both marginal conditions within `tol`.
    pub fn is_no_signaling(&self, tol: f64) -> bool {
        self.signaling_gap() <= tol
    }

    /// Largest dependence of either party's marginal on the other's input.
    pub fn signaling_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for x in [false, true] {
            for out in [false, true] {
                let alice = self.alice_marginal(InputPair::new(x, false), out)
                    - self.alice_marginal(InputPair::new(x, true), out);
                let bob =
                    self.bob_marginal(InputPair::new(false, x), out) - self.bob_marginal(InputPair::new(true, x), out);
                gap = gap.max(alice.abs()).max(bob.abs());
            }
        }
        gap
    }

    /// `weight · self + (1 − weight) · other`.
    pub fn mix(&self, other: &BoxBehavior, weight: f64) -> BoxBehavior {
        let mut probs = [[0.0; 4]; 4];
        for (i, row) in probs.iter_mut().enumerate() {
            for (o, p) in row.iter_mut().enumerate() {
                *p = weight * self.probs[i][o] + (1.0 - weight) * other.probs[i][o];
            }
        }
        BoxBehavior { probs }
    }

    pub fn max_abs_diff(&self, other: &BoxBehavior) -> f64 {
        self.probs.iter().flatten().zip(other.probs.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Whether this table is a PR box (Table 1) to within [`STRUCTURAL_TOL`].
    pub fn is_pr_box(&self) -> bool {
        self.max_abs_diff(&Self::pr_box()) <= STRUCTURAL_TOL
    }

    pub(crate) fn from_probs_unchecked(probs: [[f64; 4]; 4]) -> Self {
        Self { probs }
    }
}

/// Isotropic behaviour for a raw correlation strength.
pub fn make_isotropic(e: f64) -> Result<BoxBehavior> {
    Ok(BoxBehavior::isotropic(Correlation::new(e)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Fresh,
    /// One side has submitted; the other has not.
    Half {
        side: Side,
        input: bool,
        output: bool,
    },
    Consumed(BoxRecord),
}

/// Inputs and outputs of a consumed box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoxRecord {
    pub alice_input: bool,
    pub alice_output: bool,
    pub bob_input: bool,
    pub bob_output: bool,
}

impl BoxRecord {
    /// The box missed the PR condition `A⊕B = a·b`.
    pub fn erred(&self) -> bool {
        (self.alice_output ^ self.bob_output) != (self.alice_input & self.bob_input)
    }
}

/// A single-use handle onto a no-signaling behaviour.
///
/// Each side submits one input. The first output is drawn from that side's
/// marginal, the second from the conditional given the first, using the
/// instance's two pre-assigned uniforms in arrival order.
#[derive(Clone, Debug)]
pub struct BoxInstance<'a> {
    behavior: &'a BoxBehavior,
    draws: [f64; 2],
    state: State,
}

impl<'a> BoxInstance<'a> {
    /// `draws` must be uniforms in `[0, 1)`.
    pub fn new(behavior: &'a BoxBehavior, draws: [f64; 2]) -> Result<Self> {
        if !behavior.is_no_signaling(STRUCTURAL_TOL) {
            return Err(Error::Signaling);
        }
        Ok(Self { behavior, draws, state: State::Fresh })
    }

    /// Instance `id` on a keyed stream.
    pub fn keyed(behavior: &'a BoxBehavior, stream: &KeyedStream, id: u64) -> Result<Self> {
        Self::new(behavior, stream.uniforms(id))
    }

    pub fn behavior(&self) -> &'a BoxBehavior {
        self.behavior
    }

    pub fn is_fresh(&self) -> bool {
        self.state == State::Fresh
    }

    pub fn is_consumed(&self) -> bool {
        matches!(self.state, State::Consumed(_))
    }

    pub fn has_used(&self, side: Side) -> bool {
        match self.state {
            State::Fresh => false,
            State::Half { side: s, .. } => s == side,
            State::Consumed(_) => true,
        }
    }

    pub fn record(&self) -> Option<BoxRecord> {
        match self.state {
            State::Consumed(r) => Some(r),
            _ => None,
        }
    }

    /// Submits `input` for `side` and returns that side's output.
    pub fn sample(&mut self, side: Side, input: bool) -> Result<bool> {
        match self.state {
            State::Consumed(_) => Err(Error::Consumed),
            State::Fresh => {
                let output = self.draw_first(side, input);
                self.state = State::Half { side, input, output };
                Ok(output)
            }
            State::Half { side: first, .. } if first == side => Err(Error::SideAlreadyUsed(side)),
            State::Half { input: first_in, output: first_out, .. } => {
                let pair = match side {
                    Side::Alice => InputPair::new(input, first_in),
                    Side::Bob => InputPair::new(first_in, input),
                };
                let output = self.draw_second(pair, side, first_out);
                let record = match side {
                    Side::Alice => BoxRecord {
                        alice_input: input,
                        alice_output: output,
                        bob_input: first_in,
                        bob_output: first_out,
                    },
                    Side::Bob => BoxRecord {
                        alice_input: first_in,
                        alice_output: first_out,
                        bob_input: input,
                        bob_output: output,
                    },
                };
                self.state = State::Consumed(record);
                Ok(output)
            }
        }
    }

    fn draw_first(&self, side: Side, input: bool) -> bool {
        // Any column carrying this side's input has the same marginal.
        let p_one = match side {
            Side::Alice => self.behavior.alice_marginal(InputPair::new(input, false), true),
            Side::Bob => self.behavior.bob_marginal(InputPair::new(false, input), true),
        };
        self.draws[0] < p_one
    }

    fn draw_second(&self, pair: InputPair, side: Side, first_out: bool) -> bool {
        let (joint_one, given) = match side {
            Side::Bob => (
                self.behavior.prob(pair, OutputPair::new(first_out, true)),
                self.behavior.alice_marginal(pair, first_out),
            ),
            Side::Alice => (
                self.behavior.prob(pair, OutputPair::new(true, first_out)),
                self.behavior.bob_marginal(pair, first_out),
            ),
        };
        let p_one = if given > 0.0 {
            joint_one / given
        } else {
            match side {
                Side::Bob => self.behavior.bob_marginal(pair, true),
                Side::Alice => self.behavior.alice_marginal(pair, true),
            }
        };
        self.draws[1] < p_one
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    #[test]
    fn pr_box_matches_table_one() {
        let half = 0.5;
        let expected = [[half, 0.0, 0.0, half], [half, 0.0, 0.0, half], [half, 0.0, 0.0, half], [0.0, half, half, 0.0]];
        assert_eq!(make_isotropic(1.0).unwrap().probs(), &expected);
        // Spot-check the table's own labels: p(01|10) = 0, p(10|11) = 1/2.
        let pr = BoxBehavior::pr_box();
        assert_eq!(pr.prob(InputPair::new(true, false), OutputPair::new(false, true)), 0.0);
        assert_eq!(pr.prob(InputPair::new(true, true), OutputPair::new(true, false)), 0.5);
    }

    #[test]
    fn zero_and_half_correlation() {
        assert_eq!(make_isotropic(0.0).unwrap(), BoxBehavior::uniform());
        let half = make_isotropic(0.5).unwrap();
        let i00 = InputPair::new(false, false);
        let same = half.prob(i00, OutputPair::new(false, false)) + half.prob(i00, OutputPair::new(true, true));
        assert_eq!(same, 0.75);
        assert_eq!(1.0 - same, 0.25);
    }

    #[test]
    fn out_of_range_correlation() {
        assert_eq!(make_isotropic(1.5), Err(Error::CorrelationOutOfRange(1.5)));
        assert!(make_isotropic(-1.0000001).is_err());
        assert!(make_isotropic(f64::NAN).is_err());
        assert!(make_isotropic(-1.0).is_ok());
    }

    #[test]
    fn chsh_examples() {
        assert_eq!(BoxBehavior::pr_box().chsh_value(), 4.0);
        assert_eq!(BoxBehavior::uniform().chsh_value(), 0.0);
        let t = BoxBehavior::isotropic(Correlation::TSIRELSON).chsh_value();
        assert!((t - 2.0 * core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn isotropic_grid_is_normalized_no_signaling_and_linear_in_chsh() {
        for i in 0..=200 {
            let e = -1.0 + i as f64 / 100.0;
            let b = make_isotropic(e).unwrap();
            for row in b.probs() {
                assert!((row.iter().sum::<f64>() - 1.0).abs() <= STRUCTURAL_TOL);
                assert!(row.iter().all(|&p| p >= 0.0));
            }
            assert!(b.is_no_signaling(STRUCTURAL_TOL));
            assert!((b.chsh_value() - 4.0 * e).abs() < 1e-12);
        }
    }

    #[test]
    fn signaling_detection() {
        // A = b, B = 0: Alice's marginal follows Bob's input.
        let mut probs = [[0.0; 4]; 4];
        for input in InputPair::ALL {
            probs[input.index()][OutputPair::new(input.b, false).index()] = 1.0;
        }
        let b = BoxBehavior::new(probs).unwrap();
        assert!(!b.is_no_signaling(STRUCTURAL_TOL));
        assert!(matches!(BoxInstance::new(&b, [0.0, 0.0]), Err(Error::Signaling)));

        // Table 2: everything zero.
        let mut zeros = [[0.0; 4]; 4];
        for row in zeros.iter_mut() {
            row[0] = 1.0;
        }
        assert!(BoxBehavior::new(zeros).unwrap().is_no_signaling(STRUCTURAL_TOL));
    }

    #[test]
    fn rejects_malformed_tables() {
        let mut probs = [[0.25; 4]; 4];
        probs[2][1] = -0.25;
        probs[2][0] = 0.75;
        assert!(matches!(BoxBehavior::new(probs), Err(Error::InvalidEntry { input: 2, output: 1, .. })));
        let mut probs = [[0.25; 4]; 4];
        probs[3][3] = 0.3;
        assert!(matches!(BoxBehavior::new(probs), Err(Error::NotNormalized { input: 3, .. })));
    }

    #[test]
    fn pr_instance_outputs_differ_on_eleven() {
        let pr = BoxBehavior::pr_box();
        let stream = KeyedStream::new(11, 0);
        for id in 0..1000 {
            let mut inst = BoxInstance::keyed(&pr, &stream, id).unwrap();
            let a = inst.sample(Side::Alice, true).unwrap();
            let b = inst.sample(Side::Bob, true).unwrap();
            assert!(a ^ b);
            assert!(inst.is_consumed());
            assert!(!inst.record().unwrap().erred());
        }
    }

    #[test]
    fn single_use_is_enforced() {
        let pr = BoxBehavior::pr_box();
        let mut inst = BoxInstance::new(&pr, [0.3, 0.6]).unwrap();
        inst.sample(Side::Alice, false).unwrap();
        assert_eq!(inst.sample(Side::Alice, true), Err(Error::SideAlreadyUsed(Side::Alice)));
        inst.sample(Side::Bob, false).unwrap();
        assert_eq!(inst.sample(Side::Bob, false), Err(Error::Consumed));
        assert_eq!(inst.sample(Side::Alice, false), Err(Error::Consumed));
    }

    #[test]
    fn one_sided_use_is_uniform_for_pr() {
        let pr = BoxBehavior::pr_box();
        let stream = KeyedStream::new(5, 9);
        let trials = 100_000u64;
        let ones = (0..trials)
            .filter(|&id| BoxInstance::keyed(&pr, &stream, id).unwrap().sample(Side::Alice, false).unwrap())
            .count() as f64;
        let se = (0.25 / trials as f64).sqrt();
        assert!((ones / trials as f64 - 0.5).abs() < 5.0 * se);
    }

    #[test]
    fn uncorrelated_box_gives_independent_outputs() {
        let u = BoxBehavior::uniform();
        let stream = KeyedStream::new(8, 1);
        let trials = 100_000u64;
        let mut counts = [0u64; 4];
        for id in 0..trials {
            let mut inst = BoxInstance::keyed(&u, &stream, id).unwrap();
            let a = inst.sample(Side::Alice, true).unwrap();
            let b = inst.sample(Side::Bob, true).unwrap();
            counts[OutputPair::new(a, b).index()] += 1;
        }
        let se = (0.25 * 0.75 / trials as f64).sqrt();
        for c in counts {
            assert!((c as f64 / trials as f64 - 0.25).abs() < 5.0 * se, "{counts:?}");
        }
    }

    #[test]
    fn replay_is_deterministic_per_instance_id() {
        let b = make_isotropic(0.6).unwrap();
        let stream = KeyedStream::new(99, 4);
        let run = |ids: &mut dyn Iterator<Item = u64>| -> Vec<(u64, bool, bool)> {
            let mut out: Vec<_> = ids
                .map(|id| {
                    let mut inst = BoxInstance::keyed(&b, &stream, id).unwrap();
                    let a = inst.sample(Side::Alice, id % 2 == 0).unwrap();
                    let bb = inst.sample(Side::Bob, id % 3 == 0).unwrap();
                    (id, a, bb)
                })
                .collect();
            out.sort();
            out
        };
        assert_eq!(run(&mut (0..50)), run(&mut (0..50).rev()));
    }
}
