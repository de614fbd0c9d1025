mod common;

use common::{nonzero_poly, poly, small_rat};
use planar_crn::poly::{Poly2, Rat};
use proptest::prelude::*;

const N: usize = 17;

type Dense = Vec<Vec<Rat>>;

fn dense(p: &Poly2) -> Dense {
    let mut d = vec![vec![Rat::default(); N]; N];
    for (m, c) in p.terms() {
        d[m.x as usize][m.y as usize] = c.clone();
    }
    d
}

fn dense_add(a: &Dense, b: &Dense) -> Dense {
    (0..N)
        .map(|i| (0..N).map(|j| &a[i][j] + &b[i][j]).collect())
        .collect()
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = vec![vec![Rat::default(); N]; N];
    for i in 0..N {
        for j in 0..N {
            if a[i][j] == Rat::default() {
                continue;
            }
            for k in 0..N - i {
                for l in 0..N - j {
                    out[i + k][j + l] += &a[i][j] * &b[k][l];
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_operations_match_dense_oracle(p in poly(8, 8), q in poly(8, 8)) {
        prop_assert_eq!(dense(&(&p + &q)), dense_add(&dense(&p), &dense(&q)));
        prop_assert_eq!(dense(&(&p * &q)), dense_mul(&dense(&p), &dense(&q)));
    }

    #[test]
    fn ring_axioms(p in poly(5, 6), q in poly(5, 6), r in poly(5, 6)) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn leibniz_rule(p in poly(6, 6), q in poly(6, 6)) {
        let pq = &p * &q;
        prop_assert_eq!(pq.dx(), &(&p.dx() * &q) + &(&p * &q.dx()));
        prop_assert_eq!(pq.dy(), &(&p.dy() * &q) + &(&p * &q.dy()));
    }

    #[test]
    fn shift_is_invertible(p in poly(6, 6), a in small_rat(), b in small_rat()) {
        prop_assert_eq!(p.shift(&a, &b).shift(&-a.clone(), &-b.clone()), p.clone());
        prop_assert_eq!(p.shift(&a, &b).eval(&a, &b), p.eval(&Rat::default(), &Rat::default()));
    }

    #[test]
    fn exact_division_recovers_factor(s in poly(5, 6), h in nonzero_poly(4, 5)) {
        let prod = &s * &h;
        prop_assert_eq!(prod.try_div_exact(&h).unwrap(), s);
    }

    #[test]
    fn division_identity(p in poly(6, 8), d in nonzero_poly(3, 4)) {
        let (q, r) = p.div_rem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, p);
    }

    #[test]
    fn text_roundtrip(p in poly(8, 10)) {
        let back: Poly2 = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(4, 5), q in poly(4, 5), x in small_rat(), y in small_rat()) {
        prop_assert_eq!((&p * &q).eval(&x, &y), p.eval(&x, &y) * q.eval(&x, &y));
        let f = (&p * &q).eval_f64(0.5, -1.25);
        let g = p.eval_f64(0.5, -1.25) * q.eval_f64(0.5, -1.25);
        prop_assert!((f - g).abs() <= 1e-9 * (1.0 + g.abs()));
    }
}
