//! Property-based invariants for the mechanical matrix layer: the GL₂
//! action on test functions and the Hermite-normal-form canonicalization
//! of lattices. Everything here is exact rational arithmetic, so the
//! properties assert equality, not closeness.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use shintani::lattice::Lattice2;
use shintani::mat2::Mat2;
use shintani::testfn::{TestFn1, TestFn2};
use shintani::Rat;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn mat_strategy() -> impl Strategy<Value = Mat2> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
        .prop_map(|(a, b, c, d)| Mat2::from_ints(a, b, c, d))
        .prop_filter("nonsingular", |m| !m.det().is_zero())
}

fn row_strategy() -> impl Strategy<Value = (Rat, Rat)> {
    ((-6i64..=6, 1i64..=3), (-6i64..=6, 1i64..=3))
        .prop_map(|((a, b), (c, d))| (rat(a, b), rat(c, d)))
}

/// A structured function with a half-integral offset and two lattice
/// scales, so the action has something nontrivial to move.
fn sample_fn() -> TestFn2 {
    let skew = TestFn2::indicator(
        (rat(1, 2), rat(1, 3)),
        Lattice2::rectangular(&rat(2, 1), &rat(3, 1)),
    )
    .scale_rat(&rat(-3, 1));
    TestFn2::standard()
        .add(&skew)
        .add(&TestFn2::product_of(&TestFn1::integers(), &TestFn1::indicator(&rat(1, 1), &rat(4, 1))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Acting by g then by h is acting by the product: the action is a
    /// genuine (right) monoid action, and it scales Haar measure by the
    /// absolute determinant, independent of offsets and lattice shapes.
    #[test]
    fn gl2_action_composes_and_scales_haar(g in mat_strategy(), h in mat_strategy()) {
        let f = sample_fn();
        let two_steps = f.act_gl2(&g).act_gl2(&h);
        let one_step = f.act_gl2(&g.mul(&h));
        prop_assert!(two_steps.sub(&one_step).is_zero());

        let mut det = g.det();
        if det < Rat::new(BigInt::from(0), BigInt::from(1)) {
            det = -det;
        }
        let scaled = f.act_gl2(&g).haar().sub(&f.haar().scale(&det));
        prop_assert!(scaled.is_zero());
    }

    /// The Hermite normal form depends only on the lattice, not on the
    /// generators presented: any unimodular recombination of the rows
    /// produces the identical canonical basis.
    #[test]
    fn hnf_is_a_lattice_invariant(
        r1 in row_strategy(),
        r2 in row_strategy(),
        ops in proptest::collection::vec((0u8..3, -3i64..=3), 1..5),
    ) {
        let det = &r1.0 * &r2.1 - &r1.1 * &r2.0;
        prop_assume!(!det.is_zero());
        let (mut s1, mut s2) = (r1.clone(), r2.clone());
        for (op, k) in ops {
            match op {
                0 => s1 = (&s1.0 + &s2.0 * rat(k, 1), &s1.1 + &s2.1 * rat(k, 1)),
                1 => s2 = (&s2.0 + &s1.0 * rat(k, 1), &s2.1 + &s1.1 * rat(k, 1)),
                _ => std::mem::swap(&mut s1, &mut s2),
            }
        }
        let a = Lattice2::hnf_basis(&[r1, r2]);
        let b = Lattice2::hnf_basis(&[s1, s2]);
        prop_assert_eq!(a, b);
    }
}
