use proptest::prelude::*;

use cwsusy::cahen_wallach::{b_form, CWParams};
use cwsusy::export::{parse_scalar, scalar};
use cwsusy::moduli::{classify, ModuliPoint};
use cwsusy::{Field, GRat, Rational, Scalar};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn small() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
}

fn point() -> impl Strategy<Value = ModuliPoint> {
    (small(), small(), small(), small())
        .prop_map(|(a, b, c, d)| ModuliPoint::new(a, b, c, d))
        .prop_filter("origin", |p| !p.is_origin())
}

fn scalar_value() -> impl Strategy<Value = Scalar> {
    (rational(), rational(), rational(), rational())
        .prop_map(|(a, b, c, d)| Scalar::new(GRat::new(a, b), GRat::new(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(inv) = a.recip() {
            prop_assert_eq!(&a * &inv, Rational::from_int(1));
        }
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn scalar_field_laws(x in scalar_value(), y in scalar_value()) {
        prop_assert_eq!(&x * &y, &y * &x);
        if let Some(inv) = x.inv() {
            prop_assert_eq!(&x * &inv, Scalar::from_int(1));
        }
        prop_assert_eq!(parse_scalar(&scalar(&x)).unwrap(), x);
    }

    #[test]
    fn zero_count_follows_the_four_linear_forms(p in point()) {
        let q = p.params();
        let z = b_form(&q).zero_count();
        let expect = usize::from(q.alpha_plus == q.alpha_plus_prime)
            + 4 * usize::from(q.alpha_plus == -&q.alpha_plus_prime)
            + 2 * usize::from(q.alpha_minus == q.alpha_plus_prime)
            + 2 * usize::from(q.alpha_minus == -&q.alpha_plus_prime);
        prop_assert_eq!(z, expect);
        prop_assert!([0, 1, 2, 3, 4, 5, 6, 9].contains(&z));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn classify_is_invariant_under_sign_and_scaling(p in point(), k in 1i64..=5, d in 1i64..=3) {
        let base = classify(&p).unwrap();
        let flipped = ModuliPoint::new(-&p.alpha_minus, p.alpha_plus_prime.clone(), p.alpha_plus.clone(), p.alpha_minus_prime.clone());
        let c = Rational::new(k, d);
        let scaled = ModuliPoint::from_params(&p.params().scaled(&c));
        for other in [classify(&flipped).unwrap(), classify(&scaled).unwrap()] {
            prop_assert_eq!(other.susy, base.susy);
            prop_assert_eq!(other.indecomposable, base.indecomposable);
            prop_assert_eq!(other.zero_count, base.zero_count);
            prop_assert_eq!(other.parallel_dim, base.parallel_dim);
            prop_assert_eq!(&other.nu, &base.nu);
        }
        let b = classify(&scaled).unwrap().b_eigenvalues;
        let c2 = &c * &c;
        prop_assert_eq!(b, base.b_eigenvalues.iter().map(|x| x * &c2).collect::<Vec<_>>());
    }

    #[test]
    fn susy_lies_on_the_locus(p in point()) {
        let rec = classify(&p).unwrap();
        let locus = p.params().on_susy_locus();
        prop_assert!(!rec.susy || locus);
        if rec.indecomposable {
            prop_assert_eq!(rec.susy, locus);
        }
    }

    #[test]
    fn locus_points_are_susy(app in small(), am in small(), amp in small()) {
        let ap = &app * &Rational::from_int(-3);
        let p = ModuliPoint::from_params(&CWParams::new(ap, am, app, amp));
        prop_assume!(!p.is_origin());
        let rec = classify(&p).unwrap();
        if rec.indecomposable {
            prop_assert!(rec.susy);
        }
    }
}
