use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tilehull_core::exact::{ExactScalar, Motion, Point};
use tilehull_core::intlin::{hermite, kernel_basis, smith, IntMatrix};
use tilehull_core::tiling::{pinwheel_triangle_system, substitute, Patch, Tile};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(m, n)| {
        proptest::collection::vec(-9i64..=9, m * n)
            .prop_map(move |v| IntMatrix::from_vec(m, n, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(a in matrix()) {
        let s = smith(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.determinant().unwrap().abs(), BigInt::from(1));
        prop_assert_eq!(s.v.determinant().unwrap().abs(), BigInt::from(1));
        let diag: Vec<BigInt> = s.diagonal().into_iter().filter(|x| !x.is_zero()).collect();
        prop_assert_eq!(diag.len(), a.rank());
        for w in diag.windows(2) {
            prop_assert!(w[0].is_positive() && (&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn hermite_form_keeps_the_row_lattice(a in matrix()) {
        let (h, u) = hermite(&a);
        prop_assert_eq!(u.mul(&a).unwrap(), h);
        prop_assert_eq!(u.determinant().unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn kernel_basis_is_annihilated(a in matrix()) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.cols(), a.cols() - a.rank());
        prop_assert!(a.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn motions_compose_and_invert(i in 0usize..4, j in 0usize..4, x in -5i64..5, y in -5i64..5) {
        let rots = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        let r = |k: usize| {
            let (c, s) = rots[k];
            Motion::new(ExactScalar::from_int(c), ExactScalar::from_int(s), Point::from_ints(x, y)).unwrap()
        };
        let (a, b) = (r(i), Motion::pinwheel_rotation().compose(&r(j)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        let p = Point::from_ratios((1, 3), (2, 7));
        prop_assert_eq!(a.compose(&b).apply(&p), a.apply(&b.apply(&p)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn substitution_scales_area(proto in 0usize..2, level in 1u32..4) {
        let s = pinwheel_triangle_system();
        let p = Patch::single(Tile::new(proto, Motion::identity()));
        let q = substitute(&p, &s, level);
        prop_assert_eq!(q.len(), 5usize.pow(level));
        let mut expect = p.area(&s);
        for _ in 0..level {
            expect = &expect * &s.inflation().square();
        }
        prop_assert_eq!(q.area(&s), expect);
    }
}
