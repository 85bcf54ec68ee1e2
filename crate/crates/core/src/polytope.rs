//! Vertices and facets of the two-input, two-output bipartite scenario.
//!
//! There are 4⁴ = 256 deterministic tables. The 16 that do not signal are
//! exactly the products of a local Alice function and a local Bob function;
//! together with the 8 relabelled PR boxes they are the 24 vertices of the
//! no-signaling polytope. Inside the no-signaling set, the local polytope is
//! cut out by the 8 CHSH inequalities `|K_{αβγ}| ≤ 2`.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::boxmodel::{BoxBehavior, InputPair, OutputPair, STRUCTURAL_TOL};

/// Slack on the classical and Tsirelson thresholds.
pub const CLASSIFY_TOL: f64 = 1e-9;

pub const CLASSICAL_CHSH_BOUND: f64 = 2.0;
pub const TSIRELSON_CHSH_BOUND: f64 = 2.0 * SQRT_2;

/// A table with one certain output pair per input pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeterministicBehavior {
    /// Indexed by [`InputPair::index`].
    pub outcomes: [OutputPair; 4],
}

impl DeterministicBehavior {
    pub fn to_behavior(&self) -> BoxBehavior {
        let mut probs = [[0.0; 4]; 4];
        for (row, outcome) in probs.iter_mut().zip(self.outcomes) {
            row[outcome.index()] = 1.0;
        }
        BoxBehavior::from_probs_unchecked(probs)
    }

    fn outcome(&self, a: bool, b: bool) -> OutputPair {
        self.outcomes[InputPair::new(a, b).index()]
    }

    pub fn is_no_signaling(&self) -> bool {
        [false, true].iter().all(|&x| {
            self.outcome(x, false).alice == self.outcome(x, true).alice
                && self.outcome(false, x).bob == self.outcome(true, x).bob
        })
    }

    /// The factorisation `A(a)`, `B(b)` when the table does not signal.
    pub fn local_strategy(&self) -> Option<LocalStrategy> {
        self.is_no_signaling().then(|| LocalStrategy {
            alice: [self.outcome(false, false).alice, self.outcome(true, false).alice],
            bob: [self.outcome(false, false).bob, self.outcome(false, true).bob],
        })
    }
}

/// Deterministic local functions `A(a) = alice[a]`, `B(b) = bob[b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LocalStrategy {
    pub alice: [bool; 2],
    pub bob: [bool; 2],
}

impl LocalStrategy {
    pub fn all() -> impl Iterator<Item = LocalStrategy> {
        (0u8..16)
            .map(|bits| LocalStrategy { alice: [bits & 1 != 0, bits & 2 != 0], bob: [bits & 4 != 0, bits & 8 != 0] })
    }

    pub fn to_deterministic(&self) -> DeterministicBehavior {
        let mut outcomes = [OutputPair::new(false, false); 4];
        for input in InputPair::ALL {
            outcomes[input.index()] = OutputPair::new(self.alice[input.a as usize], self.bob[input.b as usize]);
        }
        DeterministicBehavior { outcomes }
    }

    /// Input pairs (of 4) on which `A⊕B = a·b`.
    pub fn pr_wins(&self) -> u32 {
        InputPair::ALL.iter().filter(|i| (self.alice[i.a as usize] ^ self.bob[i.b as usize]) == i.product()).count()
            as u32
    }

    pub fn pr_success(&self) -> f64 {
        self.pr_wins() as f64 / 4.0
    }
}

/// All 256 deterministic tables.
pub fn enumerate_deterministic() -> Vec<DeterministicBehavior> {
    (0u32..256)
        .map(|code| {
            let mut outcomes = [OutputPair::new(false, false); 4];
            for (i, o) in outcomes.iter_mut().enumerate() {
                *o = OutputPair::ALL[((code >> (2 * i)) & 3) as usize];
            }
            DeterministicBehavior { outcomes }
        })
        .collect()
}

/// A relabelling of inputs and of outputs conditioned on inputs:
/// `a → a⊕flip_a`, `b → b⊕flip_b`, `A → A⊕c₀⊕c₁·a`, `B → B⊕d₀⊕d₁·b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Relabeling {
    pub flip_a: bool,
    pub flip_b: bool,
    pub alice_out: [bool; 2],
    pub bob_out: [bool; 2],
}

impl Relabeling {
    /// The 64 relabellings.
    pub fn all() -> impl Iterator<Item = Relabeling> {
        (0u8..64).map(|bits| Relabeling {
            flip_a: bits & 1 != 0,
            flip_b: bits & 2 != 0,
            alice_out: [bits & 4 != 0, bits & 8 != 0],
            bob_out: [bits & 16 != 0, bits & 32 != 0],
        })
    }

    pub fn apply(&self, behavior: &BoxBehavior) -> BoxBehavior {
        let mut probs = [[0.0; 4]; 4];
        for input in InputPair::ALL {
            let target_in = InputPair::new(input.a ^ self.flip_a, input.b ^ self.flip_b);
            for output in OutputPair::ALL {
                let target_out = OutputPair::new(
                    output.alice ^ self.alice_out[0] ^ (self.alice_out[1] & input.a),
                    output.bob ^ self.bob_out[0] ^ (self.bob_out[1] & input.b),
                );
                probs[target_in.index()][target_out.index()] = behavior.prob(input, output);
            }
        }
        BoxBehavior::from_probs_unchecked(probs)
    }
}

/// Table 1 and its distinct images under relabelling: the 8 boxes with
/// `A⊕B = a·b ⊕ αa ⊕ βb ⊕ γ`.
pub fn pr_box_variants() -> Vec<BoxBehavior> {
    let pr = BoxBehavior::pr_box();
    let mut variants: Vec<BoxBehavior> = Vec::new();
    for r in Relabeling::all() {
        let v = r.apply(&pr);
        if !variants.contains(&v) {
            variants.push(v);
        }
    }
    variants
}

/// The 16 local deterministic vertices followed by the 8 PR variants.
pub fn no_signaling_vertices() -> Vec<BoxBehavior> {
    let mut vertices: Vec<BoxBehavior> = enumerate_deterministic()
        .iter()
        .filter(|d| d.is_no_signaling())
        .map(DeterministicBehavior::to_behavior)
        .collect();
    vertices.extend(pr_box_variants());
    vertices
}

/// `K_{αβγ} = Σ_{ab} (−1)^{ab ⊕ αa ⊕ βb ⊕ γ} ⟨ab⟩` for `(α,β,γ)` in binary
/// order; index 0 is the usual CHSH value.
pub fn chsh_family(behavior: &BoxBehavior) -> [f64; 8] {
    let mut values = [0.0; 8];
    for (k, value) in values.iter_mut().enumerate() {
        let (alpha, beta, gamma) = (k & 1 != 0, k & 2 != 0, k & 4 != 0);
        *value = InputPair::ALL
            .iter()
            .map(|&i| {
                let flip = i.product() ^ (alpha & i.a) ^ (beta & i.b) ^ gamma;
                if flip {
                    -behavior.correlator(i)
                } else {
                    behavior.correlator(i)
                }
            })
            .sum();
    }
    values
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BehaviorClass {
    Signaling,
    /// Inside the local polytope.
    Classical,
    /// No-signaling, nonlocal, and within the Tsirelson bound. This is
    /// necessary for a quantum realization but does not certify one.
    WithinTsirelson,
    Superquantum,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassificationResult {
    pub no_signaling: bool,
    pub signaling_gap: f64,
    pub chsh_values: [f64; 8],
    pub max_abs_chsh: f64,
    pub class: BehaviorClass,
}

pub fn classify(behavior: &BoxBehavior) -> ClassificationResult {
    let chsh_values = chsh_family(behavior);
    let max_abs_chsh = chsh_values.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let signaling_gap = behavior.signaling_gap();
    let no_signaling = signaling_gap <= STRUCTURAL_TOL;
    let class = if !no_signaling {
        BehaviorClass::Signaling
    } else if max_abs_chsh <= CLASSICAL_CHSH_BOUND + CLASSIFY_TOL {
        BehaviorClass::Classical
    } else if max_abs_chsh <= TSIRELSON_CHSH_BOUND + CLASSIFY_TOL {
        BehaviorClass::WithinTsirelson
    } else {
        BehaviorClass::Superquantum
    };
    ClassificationResult { no_signaling, signaling_gap, chsh_values, max_abs_chsh, class }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassicalOptimum {
    pub optimum: f64,
    pub achieving: Vec<LocalStrategy>,
}

/// Best PR-simulation success over local deterministic strategies.
pub fn classical_simulation_optimum() -> ClassicalOptimum {
    let best = LocalStrategy::all().map(|s| s.pr_wins()).max().unwrap_or(0);
    ClassicalOptimum {
        optimum: best as f64 / 4.0,
        achieving: LocalStrategy::all().filter(|s| s.pr_wins() == best).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxmodel::make_isotropic;

    #[test]
    fn vertex_counts() {
        let all = enumerate_deterministic();
        assert_eq!(all.len(), 256);
        let ns: Vec<_> = all.iter().filter(|d| d.is_no_signaling()).collect();
        assert_eq!(ns.len(), 16);
        assert!(ns.iter().all(|d| d.local_strategy().unwrap().to_deterministic() == **d));
        assert_eq!(all.iter().filter(|d| !d.to_behavior().is_no_signaling(STRUCTURAL_TOL)).count(), 240);
        assert_eq!(pr_box_variants().len(), 8);
        assert_eq!(no_signaling_vertices().len(), 24);
    }

    #[test]
    fn pr_variants_saturate_some_chsh_form() {
        for (k, v) in pr_box_variants().iter().enumerate() {
            assert!(v.is_no_signaling(STRUCTURAL_TOL));
            let c = classify(v);
            assert_eq!(c.max_abs_chsh, 4.0, "variant {k}");
            assert_eq!(c.class, BehaviorClass::Superquantum);
        }
    }

    #[test]
    fn classify_examples() {
        let pr = classify(&BoxBehavior::pr_box());
        assert_eq!(pr.class, BehaviorClass::Superquantum);
        assert_eq!(pr.chsh_values[0], 4.0);

        let zeros = LocalStrategy { alice: [false; 2], bob: [false; 2] }.to_deterministic().to_behavior();
        let c = classify(&zeros);
        assert_eq!(c.class, BehaviorClass::Classical);
        assert_eq!(c.max_abs_chsh, 2.0);

        let t = classify(&make_isotropic(core::f64::consts::FRAC_1_SQRT_2).unwrap());
        assert_eq!(t.class, BehaviorClass::WithinTsirelson);
        assert!((t.max_abs_chsh - TSIRELSON_CHSH_BOUND).abs() < 1e-12);

        let signaling = enumerate_deterministic().into_iter().find(|d| !d.is_no_signaling()).unwrap();
        let s = classify(&signaling.to_behavior());
        assert_eq!(s.class, BehaviorClass::Signaling);
        assert!(!s.no_signaling);
    }

    #[test]
    fn classical_optimum_is_three_quarters() {
        let opt = classical_simulation_optimum();
        assert_eq!(opt.optimum, 0.75);
        let zero = LocalStrategy { alice: [false; 2], bob: [false; 2] };
        assert!(opt.achieving.contains(&zero));
        assert_eq!(zero.pr_success(), 0.75);
        // A = a, B = b gives A⊕B = a⊕b, which equals a·b only on input 00.
        let identity = LocalStrategy { alice: [false, true], bob: [false, true] };
        assert_eq!(identity.pr_success(), 0.25);
        assert_eq!(opt.achieving.len(), 8);
    }

    #[test]
    fn noisy_pr_is_isotropic() {
        for i in 0..=20 {
            let e = i as f64 / 20.0;
            let mixed = BoxBehavior::pr_box().mix(&BoxBehavior::uniform(), e);
            assert!(mixed.max_abs_diff(&make_isotropic(e).unwrap()) <= 1e-12);
        }
    }
}
