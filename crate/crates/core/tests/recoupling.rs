mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use spinrecouple::numerics::{SurdSum, TwiceSpin};
use spinrecouple::recoupling::{
    biedenharn_elliott_residual, coupled_range, recoupling_tensor, sixj, triangle_admissible, twist_phase,
    SixSpins, SpinTriple,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn sixj_matches_fixed_point_oracle() {
    let mut r = rng(11);
    for _ in 0..300 {
        let s = random_admissible_sixj(&mut r, 12);
        let oracle = racah_sixj_fixed(s);
        assert!(oracle.agrees_with(&sixj(s)), "{s:?}: {} vs {}", sixj(s).to_f64(), oracle.to_f64());
    }
}

#[test]
fn known_values() {
    // {1/2 1/2 1; 1/2 1/2 0} = 1/2 and {1 1 1; 1 1 1} = 1/6
    assert_eq!(sixj(SixSpins::new([1, 1, 2], [1, 1, 0])), SurdSum::from_rational(q(1, 2)));
    assert_eq!(sixj(SixSpins::new([2, 2, 2], [2, 2, 2])), SurdSum::from_rational(q(1, 6)));
    assert_eq!(sixj(SixSpins::new([1, 1, 0], [1, 1, 0])), SurdSum::from_rational(q(-1, 2)));
    assert!(sixj(SixSpins::new([1, 1, 1], [1, 1, 0])).is_zero());
}

#[test]
fn zero_argument_reduction() {
    // {a b c; b a 0} = (−1)^{a+b+c} / √((2a+1)(2b+1))
    for a in 0..6u32 {
        for b in 0..6u32 {
            for c in coupled_range(TwiceSpin(a), TwiceSpin(b)) {
                let v = sixj(SixSpins::new([a, b, c.0], [b, a, 0]));
                let expect = SurdSum::sqrt_u64(((a + 1) * (b + 1)) as u64)
                    .scale(&q(1, ((a + 1) * (b + 1)) as i64))
                    .signed(((a + b + c.0) / 2) % 2 == 1);
                assert_eq!(v, expect, "a={a} b={b} c={}", c.0);
            }
        }
    }
}

#[test]
fn orthogonality_of_sixj() {
    // Σ_x (2x+1)(2f+1){a b x; c d f}{a b x; c d f'} = δ_{ff'}
    let (a, b, c, d) = (3u32, 2, 3, 4);
    for f in 0..=8u32 {
        for g in 0..=8u32 {
            let mut sum = SurdSum::zero();
            for x in coupled_range(TwiceSpin(a), TwiceSpin(b)) {
                let t = sixj(SixSpins::new([a, b, x.0], [c, d, f])) * sixj(SixSpins::new([a, b, x.0], [c, d, g]));
                sum += t.scale(&q((x.0 as i64 + 1) * (f as i64 + 1), 1));
            }
            let admissible = triangle_admissible(SpinTriple::new(a, d, f)) && triangle_admissible(SpinTriple::new(c, b, f));
            let expect = if f == g && admissible { SurdSum::one() } else { SurdSum::zero() };
            assert_eq!(sum, expect, "f={f} g={g}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tetrahedral_symmetry(seed in any::<u64>()) {
        let s = random_admissible_sixj(&mut rng(seed), 10);
        let v = sixj(s);
        for img in s.tetrahedral_images() {
            prop_assert_eq!(sixj(img), v.clone());
        }
    }

    #[test]
    fn biedenharn_elliott_vanishes(spins in prop::array::uniform9(0u32..=6)) {
        let [a, b, c, d, e, f, g, h, j] = spins.map(TwiceSpin);
        prop_assert!(biedenharn_elliott_residual(a, b, c, d, e, f, g, h, j).is_zero());
    }
}

#[test]
fn recoupling_is_orthogonal() {
    for (a, b, c, e) in [(1u32, 1, 1, 1), (2, 3, 1, 2), (4, 2, 3, 3), (3, 3, 3, 3)] {
        let fs: Vec<u32> = coupled_range(TwiceSpin(a), TwiceSpin(b))
            .filter(|f| triangle_admissible(SpinTriple::new(f.0, c, e)))
            .map(|f| f.0)
            .collect();
        let ds: Vec<u32> = coupled_range(TwiceSpin(b), TwiceSpin(c))
            .filter(|d| triangle_admissible(SpinTriple::new(a, d.0, e)))
            .map(|d| d.0)
            .collect();
        assert_eq!(fs.len(), ds.len());
        for &f1 in &fs {
            for &f2 in &fs {
                let mut sum = SurdSum::zero();
                for &d in &ds {
                    sum += recoupling_tensor(SixSpins::new([a, b, f1], [c, e, d]))
                        * recoupling_tensor(SixSpins::new([a, b, f2], [c, e, d]));
                }
                assert_eq!(sum, if f1 == f2 { SurdSum::one() } else { SurdSum::zero() });
            }
        }
    }
}

#[test]
fn twist_values() {
    assert_eq!(twist_phase(ts(1), ts(1), ts(0)).unwrap(), SurdSum::from_integer(-1));
    assert_eq!(twist_phase(ts(1), ts(1), ts(2)).unwrap(), SurdSum::one());
    assert_eq!(twist_phase(ts(2), ts(2), ts(2)).unwrap(), SurdSum::from_integer(-1));
    assert!(twist_phase(ts(1), ts(1), ts(1)).is_err());
}
