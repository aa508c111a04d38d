use vbl::cosets::{coset_reps, formula_membership, square_class_exponent, CosetKind, Formula};
use vbl::defset::{membership, representatives, DefSet, DEFAULT_REP_CAP};
use vbl::fq::FqCtx;
use vbl::laurent::LaurentCtx;
use vbl::padic::PadicCtx;
use vbl::parse::{parse_element, parse_set};
use vbl::{Error, Tri, ValuedField};

fn qp(p: u32) -> PadicCtx {
    PadicCtx::new(p, 8).unwrap()
}

fn vp(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[test]
fn membership_examples() {
    let k = qp(5);
    assert_eq!(membership(&k, &DefSet::Units, &[k.truncate(&k.zero(), 4)]), Tri::Unknown);
    assert_eq!(membership(&k, &DefSet::AcOne(1), &[k.from_int(7)]), Tri::Out);
    assert_eq!(membership(&k, &DefSet::NthPowers(2), &[k.from_int(11)]), Tri::In);
    // brute force: 11 is a square mod 25
    assert!((0..25u64).any(|y| y * y % 25 == 11));
}

#[test]
fn ball_counts_match_residue_filters() {
    let k = qp(3);
    let full = representatives(&k, &DefSet::FullRing, 2, DEFAULT_REP_CAP).unwrap();
    assert_eq!(full.interior.len(), 9);
    assert!(full.residual.is_empty());

    // R^(1) at depth d: nonzero residues mod 3^d whose unit part is 1 mod 3,
    // except the zero ball, which stays undecided
    for d in 2..=5u32 {
        let m = 3u64.pow(d);
        let want = (1..m).filter(|&x| (x / 3u64.pow(vp(x, 3))) % 3 == 1).count();
        let reps = representatives(&k, &DefSet::AcOne(1), d, DEFAULT_REP_CAP).unwrap();
        assert_eq!(reps.interior.len(), want, "depth {d}");
        assert_eq!(reps.residual.len(), 1, "depth {d}");
    }

    let five = qp(5);
    let s = representatives(&five, &DefSet::Singleton(five.from_int(5)), 3, DEFAULT_REP_CAP).unwrap();
    assert_eq!(s.interior.len(), 1);
}

#[test]
fn parsed_sets_agree_with_constructors() {
    let k = qp(3);
    let parsed = parse_set(&k, "R* x R | {0} x R").unwrap();
    let built = DefSet::union(vec![
        DefSet::Product(vec![DefSet::Units, DefSet::FullRing]),
        DefSet::Product(vec![DefSet::Singleton(k.zero()), DefSet::FullRing]),
    ]);
    for depth in 1..=3 {
        let a = representatives(&k, &parsed, depth, DEFAULT_REP_CAP).unwrap();
        let b = representatives(&k, &built, depth, DEFAULT_REP_CAP).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn representatives_are_disjoint_balls() {
    let k = qp(2);
    for text in ["R^(2)", "m", "R* \\ R^(1)", "aff(j:2, a:1, R^(1))"] {
        let s = parse_set(&k, text).unwrap();
        let reps = representatives(&k, &s, 5, DEFAULT_REP_CAP).unwrap();
        let mut all: Vec<_> = reps.interior.iter().chain(&reps.residual).collect();
        let n = all.len();
        all.dedup_by(|a, b| k.agree(&a[0], &b[0], 5));
        assert_eq!(all.len(), n, "{text}");
        for (i, a) in reps.interior.iter().enumerate() {
            for b in &reps.interior[i + 1..] {
                assert!(!k.agree(&a[0], &b[0], 5), "{text}");
            }
        }
    }
}

#[test]
fn unit_cosets() {
    let k = qp(5);
    let reps = coset_reps(&k, CosetKind::UnitsByAcone).unwrap();
    let got: Vec<u32> = reps.iter().map(|r| k.ac(r).unwrap()).collect();
    assert_eq!(got, vec![1, 2, 3, 4]);
}

#[test]
fn two_adic_square_cosets_partition() {
    let k = PadicCtx::new(2, 12).unwrap();
    let reps = coset_reps(&k, CosetKind::AconeBySquares(2)).unwrap();
    let ints: Vec<u64> = reps
        .iter()
        .map(|r| k.path(r, 8).unwrap().iter().rev().fold(0, |a, d| a * 2 + *d as u64))
        .collect();
    assert_eq!(ints, vec![1, 5, 2, 10]);
    assert_eq!(square_class_exponent(reps.len()), Some(2));

    // oracle: x = 2^n u with u ≡ 1 mod 4 lies in α P̄_2^(3) for exactly one α,
    // read off (n mod 2, u mod 8); checked on all such x below 2^9
    let class = |x: u64| {
        let n = vp(x, 2);
        let u = x >> n;
        (n % 2, u % 8)
    };
    let rep_classes: Vec<_> = ints.iter().map(|&a| class(a)).collect();
    for x in 1..512u64 {
        let n = vp(x, 2);
        if (x >> n) % 4 != 1 || n > 6 {
            continue;
        }
        let hits = rep_classes.iter().filter(|c| **c == class(x)).count();
        assert_eq!(hits, 1, "x = {x}");
        // the library agrees: exactly one representative α with x/α ∈ P̄_2^(3)
        let xe = k.from_int(x as i64);
        let lib_hits = reps
            .iter()
            .filter(|a| {
                let q = k.div(&xe, a).unwrap();
                membership(&k, &DefSet::RingNthPowers(2, 3), &[q]) == Tri::In
            })
            .count();
        assert_eq!(lib_hits, 1, "x = {x}");
    }
}

#[test]
fn squares_in_even_laurent_field_have_infinite_index() {
    let k = LaurentCtx::new(FqCtx::new(2, 1, None).unwrap(), 8).unwrap();
    let err = coset_reps(&k, CosetKind::AconeBySquares(1)).unwrap_err();
    assert!(matches!(err, Error::CosetIndexOverflow(_)), "{err}");
}

#[test]
fn formula_examples() {
    let k = qp(5);
    assert_eq!(formula_membership(&k, Formula::RingViaSquares, &k.from_int(1)), Tri::In);
    assert!((0..25u64).any(|y| y * y % 25 == 6));
    let fifth = k.from_rational(1, 5).unwrap();
    assert_eq!(formula_membership(&k, Formula::RingViaSquares, &fifth), Tri::Out);

    let l = LaurentCtx::new(FqCtx::new(3, 1, None).unwrap(), 8).unwrap();
    let x = parse_element(&l, "t*(1+t)").unwrap();
    assert_eq!(formula_membership(&l, Formula::AconeViaPowers, &x), Tri::In);
    let y = parse_element(&l, "2*t").unwrap();
    assert_eq!(formula_membership(&l, Formula::AconeViaPowers, &y), Tri::Out);
}
