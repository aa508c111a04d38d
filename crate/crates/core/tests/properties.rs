use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vbl::fq::FqCtx;
use vbl::laurent::LaurentCtx;
use vbl::ledger::ClassExpr;
use vbl::padic::PadicCtx;
use vbl::parse::parse_element;
use vbl::{Prec, ValuedField};

fn same<F: ValuedField>(k: &F, a: &F::Elem, b: &F::Elem) -> bool {
    let m = k.effective_prec(a).min(k.effective_prec(b));
    k.agree(a, b, m)
}

fn vp(mut n: i64, p: i64) -> i64 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn nonzero() -> impl Strategy<Value = i64> {
    (-5000i64..5000).prop_filter("nonzero", |x| *x != 0)
}

fn class_expr() -> impl Strategy<Value = ClassExpr> {
    let gens = prop::sample::subsequence(vec!["R", "R*", "pt"], 0..=2);
    prop::collection::vec((-4i64..=4, gens), 0..4).prop_map(|terms| {
        terms.iter().fold(ClassExpr::zero(), |acc, (c, g)| &acc + &ClassExpr::term(*c, g))
    })
}

proptest! {
    #[test]
    fn rationals_embed_as_a_ring(p in prime(), a in nonzero(), b in nonzero(), c in nonzero(), d in nonzero()) {
        let k = PadicCtx::new(p, 8).unwrap();
        let x = k.from_rational(a, b).unwrap();
        let y = k.from_rational(c, d).unwrap();
        prop_assert!(same(&k, &k.mul(&x, &y), &k.from_rational(a * c, b * d).unwrap()));
        prop_assert!(same(&k, &k.add(&x, &y), &k.from_rational(a * d + b * c, b * d).unwrap()));
        prop_assert!(same(&k, &k.div(&x, &y).unwrap(), &k.from_rational(a * d, b * c).unwrap()));
    }

    #[test]
    fn valuation_and_ac_are_multiplicative(p in prime(), a in nonzero(), b in nonzero()) {
        let k = PadicCtx::new(p, 8).unwrap();
        let (x, y) = (k.from_int(a), k.from_int(b));
        let xy = k.mul(&x, &y);
        let pi = p as i64;
        prop_assert_eq!(k.valuation(&xy).unwrap(), vp(a * b, pi));
        let unit = |n: i64| (n / pi.pow(vp(n, pi) as u32)).rem_euclid(pi) as u32;
        prop_assert_eq!(k.ac(&xy).unwrap(), unit(a * b));
        prop_assert_eq!(k.ac(&xy).unwrap(), k.ac(&x).unwrap() * k.ac(&y).unwrap() % p);
    }

    #[test]
    fn padic_render_parses_back(p in prime(), v in -6i64..6, exact: bool, seed: u64) {
        let k = PadicCtx::new(p, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = k.random_with_valuation(v, 8, exact, &mut rng);
        let y = parse_element(&k, &k.render(&x)).unwrap();
        prop_assert_eq!(k.prec(&x), k.prec(&y));
        prop_assert!(same(&k, &x, &y));
    }

    #[test]
    fn laurent_render_parses_back(e in 1u32..=2, v in -4i64..6, exact: bool, seed: u64) {
        let k = LaurentCtx::new(FqCtx::new(3, e, None).unwrap(), 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = k.random_with_valuation(v, 8, exact, &mut rng);
        let y = parse_element(&k, &k.render(&x)).unwrap();
        prop_assert_eq!(k.prec(&x), k.prec(&y));
        prop_assert!(same(&k, &x, &y));
    }

    #[test]
    fn hensel_roots_invert_powers(p in prime(), n in prop::sample::select(vec![2u32, 3, 5]), v in -3i64..4, seed: u64) {
        let k = PadicCtx::new(p, 10).unwrap();
        let vn = k.int_valuation(n).unwrap();
        let kk = vn + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // y = π^v (1 + π^kk w) lies in K^(kk)
        let w = k.random_with_valuation(0, 10, false, &mut rng);
        let y = k.shift(&k.add(&k.from_int(1), &k.shift(&w, kk as i64)), v);
        let root = k.nth_root(&k.pow(&y, n), n, kk).unwrap();
        let m = v + 10 - vn as i64;
        prop_assert!(k.agree(&root, &y, m), "{} vs {}", k.render(&root), k.render(&y));
    }

    #[test]
    fn frobenius_pairing_is_invertible(e in 1u32..=2, p in prop::sample::select(vec![2u32, 3]), seed: u64) {
        let k = LaurentCtx::new(FqCtx::new(p, e, None).unwrap(), 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = k.random_with_valuation(0, 6, true, &mut rng);
        let y = k.random_with_valuation(1, 6, true, &mut rng);
        let z = k.frobenius_pair(&x, &y);
        prop_assert_eq!(k.prec(&z), Prec::Exact);
        let (a, b) = k.frobenius_unpair(&z).unwrap();
        prop_assert_eq!(a, x);
        prop_assert_eq!(b, y);
    }

    #[test]
    fn class_expressions_form_a_ring(a in class_expr(), b in class_expr(), c in class_expr()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &ClassExpr::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(-&a, a.scale(-1));
    }
}
