//! Randomized structural invariants: field axioms, series identities, and
//! the group laws of the transformation types, over generated inputs.

use proptest::prelude::*;

use gfermat::aut::MonomialAut;
use gfermat::curve::ProjectivePoint;
use gfermat::field::{Field, FieldElement};
use gfermat::moebius::{MoebiusMap, P1Value};
use gfermat::series::{kth_root_series, TruncatedSeries};

fn small_prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(5u64), Just(7), Just(11), Just(13)]
}

/// A permutation of 0..m by sorting random keys.
fn permutation(m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(any::<u32>(), m).prop_map(move |keys| {
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by_key(|&i| (keys[i], i));
        idx
    })
}

proptest! {
    #[test]
    fn prime_field_axioms(p in small_prime(), a in 0i64..100, b in 0i64..100, c in 0i64..100) {
        let f = Field::prime(p).unwrap();
        let (a, b, c) = (f.from_int(a), f.from_int(b), f.from_int(c));
        let ab_c = a.add(&b).unwrap().add(&c).unwrap();
        let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        if !a.is_zero() {
            prop_assert!(a.inv().unwrap().mul(&a).unwrap().is_one());
        }
    }

    #[test]
    fn extension_field_axioms(
        p in prop_oneof![Just(2u64), Just(3), Just(5)],
        av in prop::collection::vec(0i64..5, 2),
        bv in prop::collection::vec(0i64..5, 2),
    ) {
        let f = Field::extension(p, 2).unwrap();
        let a = f.from_residues(&av).unwrap();
        let b = f.from_residues(&bv).unwrap();
        prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
        }
        // Frobenius is additive: (a + b)^p = a^p + b^p
        let lhs = a.add(&b).unwrap().pow(p).unwrap();
        let rhs = a.pow(p).unwrap().add(&b.pow(p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_field_axioms(an in -50i64..50, ad in 1i64..20, bn in -50i64..50, bd in 1i64..20) {
        let f = Field::rationals();
        let a = f.from_int(an).mul(&f.from_int(ad).inv().unwrap()).unwrap();
        let b = f.from_int(bn).mul(&f.from_int(bd).inv().unwrap()).unwrap();
        prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        if !a.is_zero() {
            prop_assert!(a.inv().unwrap().mul(&a).unwrap().is_one());
        }
    }

    #[test]
    fn kth_root_series_inverts_the_power(
        k in 2u64..=6,
        tail in prop::collection::vec(0i64..13, 1..7),
    ) {
        let f = Field::prime(13).unwrap();
        let mut coeffs = vec![f.one()];
        coeffs.extend(tail.iter().map(|&c| f.from_int(c)));
        let s = TruncatedSeries::from_coeffs(&f, coeffs).unwrap();
        let root = kth_root_series(&s, k).unwrap();
        prop_assert!(root.coeffs()[0].is_one());
        prop_assert_eq!(root.pow(k).unwrap(), s);
    }

    #[test]
    fn series_multiplication_distributes(
        sv in prop::collection::vec(0i64..13, 5),
        tv in prop::collection::vec(0i64..13, 5),
        uv in prop::collection::vec(0i64..13, 5),
    ) {
        let f = Field::prime(13).unwrap();
        let series = |v: &[i64]| {
            TruncatedSeries::from_coeffs(&f, v.iter().map(|&c| f.from_int(c)).collect()).unwrap()
        };
        let (s, t, u) = (series(&sv), series(&tv), series(&uv));
        let lhs = s.add(&t).unwrap().mul(&u).unwrap();
        let rhs = s.mul(&u).unwrap().add(&t.mul(&u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(s.mul(&t).unwrap(), t.mul(&s).unwrap());
    }

    #[test]
    fn monomial_transformations_form_a_group(
        pa in permutation(4),
        pb in permutation(4),
        pc in permutation(4),
        sa in prop::collection::vec(1i64..13, 4),
        sb in prop::collection::vec(1i64..13, 4),
        sc in prop::collection::vec(1i64..13, 4),
        pv in prop::collection::vec(1i64..13, 4),
    ) {
        let f = Field::prime(13).unwrap();
        let build = |perm: &[usize], sc: &[i64]| {
            MonomialAut::new(perm.to_vec(), sc.iter().map(|&v| f.from_int(v)).collect()).unwrap()
        };
        let (a, b, c) = (build(&pa, &sa), build(&pb, &sb), build(&pc, &sc));
        let assoc_l = a.compose(&b).unwrap().compose(&c).unwrap();
        let assoc_r = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(assoc_l, assoc_r);
        prop_assert!(a.compose(&a.inverse().unwrap()).unwrap().is_identity());
        prop_assert!(a.inverse().unwrap().compose(&a).unwrap().is_identity());
        // the composite acts by applying the right factor first
        let point = ProjectivePoint::new(pv.iter().map(|&v| f.from_int(v)).collect()).unwrap();
        let composed = a.compose(&b).unwrap().apply(&point).unwrap();
        let stepped = a.apply(&b.apply(&point).unwrap()).unwrap();
        prop_assert_eq!(composed, stepped);
    }

    #[test]
    fn moebius_inverse_round_trips(
        ea in 0i64..13, eb in 0i64..13, ec in 0i64..13, ed in 0i64..13,
        z in prop::option::of(0i64..13),
    ) {
        let f = Field::prime(13).unwrap();
        let det = (ea * ed - eb * ec).rem_euclid(13);
        prop_assume!(det != 0);
        let t = MoebiusMap::new(f.from_int(ea), f.from_int(eb), f.from_int(ec), f.from_int(ed))
            .unwrap();
        let value = match z {
            None => P1Value::Infinity,
            Some(v) => P1Value::Finite(f.from_int(v)),
        };
        let image = t.apply(&value).unwrap();
        prop_assert_eq!(t.inverse().unwrap().apply(&image).unwrap(), value.clone());
        prop_assert_eq!(t.compose(&t.inverse().unwrap()).unwrap(), MoebiusMap::identity(&f));
    }

    #[test]
    fn projective_points_ignore_scaling(
        coords in prop::collection::vec(0i64..13, 4),
        scale in 1i64..13,
    ) {
        prop_assume!(coords.iter().any(|&c| c != 0));
        let f = Field::prime(13).unwrap();
        let original: Vec<FieldElement> = coords.iter().map(|&c| f.from_int(c)).collect();
        let scaled: Vec<FieldElement> = coords.iter().map(|&c| f.from_int(c * scale)).collect();
        prop_assert_eq!(
            ProjectivePoint::new(original).unwrap(),
            ProjectivePoint::new(scaled).unwrap()
        );
    }
}
