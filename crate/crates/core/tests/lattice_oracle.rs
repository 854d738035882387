mod common;

use std::collections::BTreeSet;

use burstsync::lattice::{consistent_pattern_count, d1_posterior, emission_prob, evaluate};
use burstsync::{BitString, BoundaryCondition, DeletionParams, LatticeQuery, LogProb};
use common::{bits, brute_emission, brute_emission_split, delete, to_bitstring};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params_grid() -> Vec<DeletionParams> {
    [(0.5, 0.5), (0.3, 0.1), (0.8, 0.05), (0.1, 0.7)]
        .iter()
        .map(|&(a, b)| DeletionParams::new(a, b).unwrap())
        .collect()
}

#[test]
fn two_bit_keep_all_matches_enumeration() {
    for params in params_grid() {
        let x = to_bitstring(&[0, 1]);
        for b in BoundaryCondition::all() {
            let q = LatticeQuery::new(&x, &x, b, &params);
            let got = emission_prob(&q).unwrap().prob();
            let want = brute_emission(&params, &[0, 1], &[0, 1], b);
            assert!((got - want).abs() < 1e-14);
        }
    }
}

#[test]
fn random_instances_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let grid = params_grid();
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let params = grid[case % grid.len()];
        let n = rng.gen_range(1..=10);
        let x: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        // half the cases use an actual deletion outcome, half an arbitrary string
        let y: Vec<u8> = if case % 2 == 0 {
            let d: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            delete(&x, &d)
        } else {
            let m = rng.gen_range(0..=n);
            (0..m).map(|_| rng.gen_range(0..2)).collect()
        };
        let b = BoundaryCondition::all()[rng.gen_range(0..4)];
        let (xs, ys) = (to_bitstring(&x), to_bitstring(&y));
        let q = LatticeQuery::new(&xs, &ys, b, &params);
        let split = brute_emission_split(&params, &x, &y, b);
        let total = split[0] + split[1];
        let res = evaluate(&q).unwrap();
        worst = worst.max((res.log_emission.prob() - total).abs());
        if total > 0.0 {
            let post = res.d1_posterior.unwrap();
            worst = worst.max((post - split[1] / total).abs());
        } else {
            assert_eq!(res.log_emission, LogProb::Impossible);
            assert!(res.d1_posterior.is_none());
        }
    }
    assert!(worst <= 1e-12, "worst deviation {worst:e}");
}

#[test]
fn emission_is_normalized_over_subsequences() {
    for params in params_grid() {
        for n in [1usize, 4, 7, 10] {
            let xw = 0b1011001110 & ((1u64 << n) - 1);
            let x = BitString::from_word(xw, n);
            let subs: BTreeSet<BitString> = (0..1u64 << n)
                .map(|d| to_bitstring(&delete(x.as_slice(), &bits(d, n))))
                .collect();
            for b in BoundaryCondition::all() {
                let total: f64 = subs
                    .iter()
                    .map(|y| {
                        emission_prob(&LatticeQuery::new(&x, y, b, &params))
                            .unwrap()
                            .prob()
                    })
                    .sum();
                assert!((total - 1.0).abs() < 1e-12, "n={n} total={total}");
            }
        }
    }
}

#[test]
fn constrained_emissions_mix_to_unconstrained() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for params in params_grid() {
        for _ in 0..30 {
            let n = rng.gen_range(1..=9);
            let x = BitString::random(n, &mut rng);
            let d = BitString::random(n, &mut rng);
            let y = burstsync::apply_deletion(&x, &d).unwrap();
            let b = BoundaryCondition::all()[rng.gen_range(0..4)];
            let q = LatticeQuery::new(&x, &y, b, &params);
            let whole = emission_prob(&q).unwrap().prob();
            let kn = params.kernel_power(n);
            let kn1 = params.kernel_power(n + 1);
            let mixed: f64 = (0..2u8)
                .map(|c| {
                    let w = params.transition_prob(b.d0, c) * kn[c as usize][b.d_next as usize]
                        / kn1[b.d0 as usize][b.d_next as usize];
                    w * emission_prob(&q.with_d1(c)).unwrap().prob()
                })
                .sum();
            assert!(
                (mixed - whole).abs() <= 1e-12 * whole.max(1e-300),
                "{mixed} vs {whole}"
            );
        }
    }
}

#[test]
fn posterior_matches_worked_examples_in_small_beta_limit() {
    let params = DeletionParams::new(0.5, 1e-4).unwrap();
    let b = BoundaryCondition::new(0, 0).unwrap();
    for (x, y) in [("0001", "001"), ("01011", "011")] {
        let (x, y): (BitString, BitString) = (x.parse().unwrap(), y.parse().unwrap());
        let post = d1_posterior(&LatticeQuery::new(&x, &y, b, &params)).unwrap();
        assert!((post - 1.0 / 3.0).abs() <= 0.01, "{post}");
    }
}

#[test]
fn pattern_count_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(0..=10);
        let x: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let m = rng.gen_range(0..=n);
        let y: Vec<u8> = if rng.gen_bool(0.7) {
            let d: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            delete(&x, &d)
        } else {
            (0..m).map(|_| rng.gen_range(0..2)).collect()
        };
        let want = (0..1u64 << n)
            .filter(|&d| delete(&x, &bits(d, n)) == y)
            .count() as u128;
        assert_eq!(
            consistent_pattern_count(&to_bitstring(&x), &to_bitstring(&y)),
            want
        );
    }
    let x: BitString = "0001".parse().unwrap();
    assert_eq!(consistent_pattern_count(&x, &"001".parse().unwrap()), 3);
    assert_eq!(consistent_pattern_count(&x, &x), 1);
}

proptest! {
    #[test]
    fn complement_symmetry(
        xw in 0u64..1024,
        dw in 0u64..1024,
        n in 1usize..=10,
        bidx in 0usize..4,
        a in 0.05f64..0.95,
        be in 0.05f64..0.95,
    ) {
        let params = DeletionParams::new(a, be).unwrap();
        let x = BitString::from_word(xw & ((1 << n) - 1), n);
        let y = burstsync::apply_deletion(&x, &BitString::from_word(dw & ((1 << n) - 1), n)).unwrap();
        let b = BoundaryCondition::all()[bidx];
        let r = evaluate(&LatticeQuery::new(&x, &y, b, &params)).unwrap();
        let (xc, yc) = (x.complement(), y.complement());
        let rc = evaluate(&LatticeQuery::new(&xc, &yc, b, &params)).unwrap();
        prop_assert_eq!(r.log_emission, rc.log_emission);
        prop_assert_eq!(r.d1_posterior, rc.d1_posterior);
    }

    #[test]
    fn posterior_is_a_probability(
        xw in 0u64..4096,
        dw in 0u64..4096,
        n in 1usize..=12,
        a in 0.01f64..0.99,
        be in 0.01f64..0.99,
    ) {
        let params = DeletionParams::new(a, be).unwrap();
        let x = BitString::from_word(xw & ((1 << n) - 1), n);
        let y = burstsync::apply_deletion(&x, &BitString::from_word(dw & ((1 << n) - 1), n)).unwrap();
        for b in BoundaryCondition::all() {
            let p = d1_posterior(&LatticeQuery::new(&x, &y, b, &params)).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
