use infocausality::polytope::no_signaling_vertices;
use infocausality::rng::KeyedStream;
use infocausality::{make_isotropic, BoxBehavior, BoxInstance, InputPair, OutputPair, Side};

const TRIALS: u64 = 100_000;
/// Chi-square critical value at 5 sigma with 3 degrees of freedom.
const CHI2_5SIGMA_DF3: f64 = 31.81;

fn counts(behavior: &BoxBehavior, input: InputPair, bob_first: bool, key: u64) -> [u64; 4] {
    let stream = KeyedStream::new(key, input.index() as u64);
    let mut out = [0u64; 4];
    for id in 0..TRIALS {
        let mut inst = BoxInstance::keyed(behavior, &stream, id).unwrap();
        let (a, b) = if bob_first {
            let b = inst.sample(Side::Bob, input.b).unwrap();
            (inst.sample(Side::Alice, input.a).unwrap(), b)
        } else {
            let a = inst.sample(Side::Alice, input.a).unwrap();
            (a, inst.sample(Side::Bob, input.b).unwrap())
        };
        out[OutputPair::new(a, b).index()] += 1;
    }
    out
}

fn behaviors() -> Vec<BoxBehavior> {
    let mut list: Vec<BoxBehavior> = [-0.5, 0.3, 0.8, 1.0].iter().map(|&e| make_isotropic(e).unwrap()).collect();
    let vertices = no_signaling_vertices();
    // A biased local vertex mixed with a PR variant: non-uniform marginals.
    list.push(vertices[3].mix(&vertices[20], 0.4));
    list.push(vertices[9].mix(&BoxBehavior::uniform(), 0.7));
    list
}

#[test]
fn frequencies_match_table_within_five_standard_errors() {
    for (k, behavior) in behaviors().iter().enumerate() {
        for input in InputPair::ALL {
            let c = counts(behavior, input, k % 2 == 1, 10 + k as u64);
            for output in OutputPair::ALL {
                let p = behavior.prob(input, output);
                let freq = c[output.index()] as f64 / TRIALS as f64;
                let se = (p * (1.0 - p) / TRIALS as f64).sqrt();
                if se == 0.0 {
                    assert_eq!(freq, p, "behavior {k} input {input:?} output {output:?}");
                } else {
                    assert!(
                        (freq - p).abs() < 5.0 * se,
                        "behavior {k} input {input:?} output {output:?}: {freq} vs {p}"
                    );
                }
            }
        }
    }
}

#[test]
fn arrival_order_does_not_change_joint_distribution() {
    for (k, behavior) in behaviors().iter().enumerate() {
        for input in InputPair::ALL {
            let first = counts(behavior, input, false, 100 + k as u64);
            let second = counts(behavior, input, true, 200 + k as u64);
            let chi2: f64 = first
                .iter()
                .zip(&second)
                .filter(|(x, y)| **x + **y > 0)
                .map(|(&x, &y)| (x as f64 - y as f64).powi(2) / (x + y) as f64)
                .sum();
            assert!(chi2 < CHI2_5SIGMA_DF3, "behavior {k} input {input:?}: chi2 = {chi2}");
        }
    }
}

#[test]
fn one_sided_marginal_matches_two_sided() {
    for (k, behavior) in behaviors().iter().enumerate() {
        for a in [false, true] {
            let p = behavior.alice_marginal(InputPair::new(a, false), true);
            let stream = KeyedStream::new(300 + k as u64, a as u64);
            let mut lone = 0u64;
            let mut paired = [0u64; 2];
            for id in 0..TRIALS {
                let mut inst = BoxInstance::keyed(behavior, &stream, 2 * id).unwrap();
                lone += inst.sample(Side::Alice, a).unwrap() as u64;
                let b = id % 2 == 1;
                let mut inst = BoxInstance::keyed(behavior, &stream, 2 * id + 1).unwrap();
                inst.sample(Side::Bob, b).unwrap();
                paired[b as usize] += inst.sample(Side::Alice, a).unwrap() as u64;
            }
            let half = TRIALS as f64 / 2.0;
            let se_full = (p * (1.0 - p) / TRIALS as f64).sqrt();
            let se_half = (p * (1.0 - p) / half).sqrt();
            if se_full == 0.0 {
                assert_eq!(lone as f64 / TRIALS as f64, p);
                continue;
            }
            assert!((lone as f64 / TRIALS as f64 - p).abs() < 5.0 * se_full, "behavior {k} a={a}");
            for (b, &c) in paired.iter().enumerate() {
                assert!((c as f64 / half - p).abs() < 5.0 * se_half, "behavior {k} a={a} b={b}");
            }
        }
    }
}

#[test]
fn replay_is_independent_of_arrival_order() {
    // Same key and instance id: Alice's output does not depend on whether Bob
    // arrived first, whenever the joint outcome is forced by the PR relation.
    let pr = BoxBehavior::pr_box();
    let stream = KeyedStream::new(9, 9);
    for id in 0..1000 {
        for input in InputPair::ALL {
            let mut x = BoxInstance::keyed(&pr, &stream, id).unwrap();
            let a1 = x.sample(Side::Alice, input.a).unwrap();
            let b1 = x.sample(Side::Bob, input.b).unwrap();
            let mut y = BoxInstance::keyed(&pr, &stream, id).unwrap();
            let b2 = y.sample(Side::Bob, input.b).unwrap();
            let a2 = y.sample(Side::Alice, input.a).unwrap();
            assert_eq!(a1 ^ b1, input.product());
            assert_eq!(a2 ^ b2, input.product());
        }
    }
}
