//! Property tests for the exact algebra layer.

use num_bigint::BigInt;
use proptest::prelude::*;

use corr1::algebra::bipoly::BiPoly;
use corr1::algebra::gcd::{div_exact, divides, gcd};
use corr1::algebra::normalize;

fn small_poly() -> impl Strategy<Value = BiPoly> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, 1..=3), 1..=3).prop_map(
        |rows| {
            BiPoly::from_rows(
                rows.into_iter()
                    .map(|r| r.into_iter().map(BigInt::from).collect())
                    .collect(),
            )
        },
    )
}

fn nonzero_poly() -> impl Strategy<Value = BiPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Multiplying the factors back with multiplicities reproduces the
    /// primitive part up to sign.
    #[test]
    fn normalize_roundtrip(p in nonzero_poly(), q in nonzero_poly()) {
        let prod = &p * &q.pow(2);
        let factors = normalize(&prod).unwrap();
        let mut back = BiPoly::one();
        for (f, m) in &factors {
            prop_assert!(f.is_canonical());
            back = &back * &f.pow(*m);
        }
        let want = prod.canonicalize().0;
        prop_assert!(back == want || back == (-&want).canonicalize().0);
        // pairwise coprime
        for i in 0..factors.len() {
            for j in (i + 1)..factors.len() {
                prop_assert_eq!(gcd(&factors[i].0, &factors[j].0), BiPoly::one());
            }
        }
    }

    #[test]
    fn gcd_divides_both(p in nonzero_poly(), q in nonzero_poly()) {
        let g = gcd(&p, &q);
        prop_assert!(divides(&g, &p).unwrap());
        prop_assert!(divides(&g, &q).unwrap());
    }

    #[test]
    fn division_inverts_multiplication(p in nonzero_poly(), q in nonzero_poly()) {
        let prod = &p * &q;
        let back = div_exact(&prod, &p).expect("factor divides");
        prop_assert_eq!(back, q);
    }

    #[test]
    fn display_parse_roundtrip(p in nonzero_poly()) {
        let text = p.to_string();
        let (q, scale) = corr1::algebra::parse_bipoly(&text).unwrap();
        prop_assert!(scale == BigInt::from(1));
        prop_assert_eq!(p, q);
    }
}
