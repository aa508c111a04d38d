//! A small combinator algebra of definable subsets of `K^d`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Prec, Tri, ValuedField};

/// A definable set. Elements of `E` inside the set (centers, translates,
/// scalars) are field jets, normally exact.
#[derive(Clone, Debug, PartialEq)]
pub enum DefSet<E> {
    /// The whole field `K`.
    Field,
    /// `R`
    FullRing,
    /// `R* = R ∖ {0}`
    Units,
    /// `m = πR`
    MaxIdeal,
    /// `R^(k)`: nonzero `x ∈ R` with unit part `≡ 1 mod π^k`.
    AcOne(u32),
    /// `K^(k)`: as `AcOne` without the condition `v(x) ≥ 0`.
    KAcOne(u32),
    /// `P_n`: nonzero `n`-th powers.
    NthPowers(u32),
    /// `P̄_n^(k) = P_n ∩ R^(k)`.
    RingNthPowers(u32, u32),
    Singleton(E),
    /// `center + π^radius R`
    Ball { center: E, radius: i64 },
    /// `a + π^j · inner`
    Affine { j: i64, a: E, inner: Box<DefSet<E>> },
    /// `alpha · inner`
    CosetScale { alpha: E, inner: Box<DefSet<E>> },
    /// `{(a, b) ∈ R*² : v(a) ≤ v(b)}`
    ValLe,
    /// `{(a, b) ∈ R*² : v(a) > v(b)}`
    ValGt,
    Product(Vec<DefSet<E>>),
    Union { parts: Vec<DefSet<E>>, disjoint: bool },
    Inter(Vec<DefSet<E>>),
    Difference(Box<DefSet<E>>, Box<DefSet<E>>),
}

impl<E> DefSet<E> {
    pub fn dim(&self) -> usize {
        match self {
            DefSet::ValLe | DefSet::ValGt => 2,
            DefSet::Product(parts) => parts.iter().map(DefSet::dim).sum(),
            DefSet::Union { parts, .. } | DefSet::Inter(parts) => parts.first().map_or(1, DefSet::dim),
            DefSet::Difference(a, _) => a.dim(),
            _ => 1,
        }
    }

    pub fn affine(j: i64, a: E, inner: DefSet<E>) -> Self {
        DefSet::Affine { j, a, inner: Box::new(inner) }
    }

    pub fn scale(alpha: E, inner: DefSet<E>) -> Self {
        DefSet::CosetScale { alpha, inner: Box::new(inner) }
    }

    pub fn union(parts: Vec<DefSet<E>>) -> Self {
        DefSet::Union { parts, disjoint: false }
    }

    pub fn disjoint_union(parts: Vec<DefSet<E>>) -> Self {
        DefSet::Union { parts, disjoint: true }
    }

    pub fn minus(a: DefSet<E>, b: DefSet<E>) -> Self {
        DefSet::Difference(Box::new(a), Box::new(b))
    }
}

impl<E> fmt::Display for DefSet<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, parts: &[DefSet<E>], sep: &str| {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{p}")?;
            }
            Ok(())
        };
        match self {
            DefSet::Field => f.write_str("K"),
            DefSet::FullRing => f.write_str("R"),
            DefSet::Units => f.write_str("R*"),
            DefSet::MaxIdeal => f.write_str("m"),
            DefSet::AcOne(k) => write!(f, "R^({k})"),
            DefSet::KAcOne(k) => write!(f, "K^({k})"),
            DefSet::NthPowers(n) => write!(f, "P_{n}"),
            DefSet::RingNthPowers(n, k) => write!(f, "P_{n}^({k})"),
            DefSet::Singleton(_) => f.write_str("{pt}"),
            DefSet::Ball { radius, .. } => write!(f, "ball(·,{radius})"),
            DefSet::Affine { j, inner, .. } => write!(f, "a+π^{j}({inner})"),
            DefSet::CosetScale { inner, .. } => write!(f, "α({inner})"),
            DefSet::ValLe => f.write_str("X1"),
            DefSet::ValGt => f.write_str("X2"),
            DefSet::Product(p) => join(f, p, " x "),
            DefSet::Union { parts, .. } => {
                f.write_str("(")?;
                join(f, parts, " | ")?;
                f.write_str(")")
            }
            DefSet::Inter(parts) => {
                f.write_str("(")?;
                join(f, parts, " & ")?;
                f.write_str(")")
            }
            DefSet::Difference(a, b) => write!(f, "({a} \\ {b})"),
        }
    }
}

/// Valuation test `v(x) ≥ m` as a tri-state.
fn val_at_least<F: ValuedField>(k: &F, x: &F::Elem, m: i64) -> Tri {
    match k.zero_bound(x) {
        Some(p) if p.reaches(m) => Tri::In,
        Some(_) => Tri::Unknown,
        None => Tri::from_bool(k.valuation(x).is_ok_and(|v| v >= m)),
    }
}

/// `x ≠ 0` as a tri-state.
fn nonzero<F: ValuedField>(k: &F, x: &F::Elem) -> Tri {
    match k.zero_bound(x) {
        Some(Prec::Exact) => Tri::Out,
        Some(_) => Tri::Unknown,
        None => Tri::In,
    }
}

fn single<F: ValuedField>(k: &F, s: &DefSet<F::Elem>, x: &F::Elem) -> Tri {
    use DefSet::*;
    match s {
        Field => Tri::In,
        FullRing => val_at_least(k, x, 0),
        MaxIdeal => val_at_least(k, x, 1),
        Units => nonzero(k, x).and(val_at_least(k, x, 0)),
        AcOne(n) => single(k, &KAcOne(*n), x).and(val_at_least(k, x, 0)),
        KAcOne(n) => nonzero(k, x).and(k.unit_congruent_one(x, *n)),
        NthPowers(n) => {
            let nz = nonzero(k, x);
            if nz != Tri::In {
                return nz;
            }
            let v = k.valuation(x).expect("nonzero");
            Tri::from_bool(v.rem_euclid(*n as i64) == 0).and(k.unit_is_nth_power(x, *n))
        }
        RingNthPowers(n, kk) => single(k, &NthPowers(*n), x).and(single(k, &AcOne(*kk), x)),
        Singleton(e) => {
            let d = k.sub(x, e);
            match k.zero_bound(&d) {
                Some(Prec::Exact) => Tri::In,
                Some(_) => Tri::Unknown,
                None => Tri::Out,
            }
        }
        Ball { center, radius } => val_at_least(k, &k.sub(x, center), *radius),
        Affine { j, a, inner } => single(k, inner, &k.shift(&k.sub(x, a), -j)),
        CosetScale { alpha, inner } => match k.div(x, alpha) {
            Ok(y) => single(k, inner, &y),
            Err(_) => Tri::Unknown,
        },
        Union { parts, .. } => parts.iter().fold(Tri::Out, |acc, p| acc.or(single(k, p, x))),
        Inter(parts) => parts.iter().fold(Tri::In, |acc, p| acc.and(single(k, p, x))),
        Difference(a, b) => single(k, a, x).and(!single(k, b, x)),
        Product(_) | ValLe | ValGt => membership(k, s, std::slice::from_ref(x)),
    }
}

/// Tri-state membership of the point `x` (one jet per coordinate).
pub fn membership<F: ValuedField>(k: &F, s: &DefSet<F::Elem>, x: &[F::Elem]) -> Tri {
    if x.len() != s.dim() {
        return Tri::Out;
    }
    match s {
        DefSet::Product(parts) => {
            let mut acc = Tri::In;
            let mut at = 0;
            for p in parts {
                let d = p.dim();
                acc = acc.and(membership(k, p, &x[at..at + d]));
                at += d;
                if acc == Tri::Out {
                    break;
                }
            }
            acc
        }
        DefSet::ValLe | DefSet::ValGt => {
            let units = single(k, &DefSet::Units, &x[0]).and(single(k, &DefSet::Units, &x[1]));
            if units != Tri::In {
                return units;
            }
            let (va, vb) = (k.valuation(&x[0]).unwrap(), k.valuation(&x[1]).unwrap());
            Tri::from_bool((va <= vb) == matches!(s, DefSet::ValLe))
        }
        DefSet::Union { parts, .. } => parts.iter().fold(Tri::Out, |acc, p| acc.or(membership(k, p, x))),
        DefSet::Inter(parts) => parts.iter().fold(Tri::In, |acc, p| acc.and(membership(k, p, x))),
        DefSet::Difference(a, b) => membership(k, a, x).and(!membership(k, b, x)),
        _ => single(k, s, &x[0]),
    }
}

/// Default bound on the number of balls scanned by [`representatives`].
pub const DEFAULT_REP_CAP: u64 = 1 << 22;

/// Ball representatives of a set at a given depth.
#[derive(Clone, Debug, PartialEq)]
pub struct Reps<E> {
    /// Balls certified inside the set.
    pub interior: Vec<Vec<E>>,
    /// Balls meeting the set whose membership the depth cannot decide
    /// (typically the ball around an excluded point).
    pub residual: Vec<Vec<E>>,
}

/// Enumerate the balls `c + π^depth R^d` of `R^d` and sort them by
/// membership. Singletons return their point.
pub fn representatives<F: ValuedField>(
    k: &F,
    s: &DefSet<F::Elem>,
    depth: u32,
    cap: u64,
) -> Result<Reps<F::Elem>> {
    if let DefSet::Singleton(e) = s {
        return Ok(Reps { interior: vec![vec![e.clone()]], residual: vec![] });
    }
    let dim = s.dim() as u32;
    let per = (k.residue_size() as u64)
        .checked_pow(depth)
        .ok_or(Error::EnumerationOverflow(u64::MAX))?;
    let total = per.checked_pow(dim).ok_or(Error::EnumerationOverflow(u64::MAX))?;
    if total > cap {
        return Err(Error::EnumerationOverflow(total));
    }
    let mut reps = Reps { interior: Vec::new(), residual: Vec::new() };
    for idx in 0..total {
        let mut rest = idx;
        let point: Vec<F::Elem> = (0..dim)
            .map(|_| {
                let c = rest % per;
                rest /= per;
                k.ball(c, depth)
            })
            .collect();
        match membership(k, s, &point) {
            Tri::In => reps.interior.push(point),
            Tri::Unknown => reps.residual.push(point),
            Tri::Out => {}
        }
    }
    Ok(reps)
}

/// Exact centers of all depth-`depth` balls of `R^dim`, in enumeration order.
pub fn grid<F: ValuedField>(k: &F, dim: usize, depth: u32, cap: u64) -> Result<Vec<Vec<F::Elem>>> {
    let per = (k.residue_size() as u64)
        .checked_pow(depth)
        .ok_or(Error::EnumerationOverflow(u64::MAX))?;
    let total = per
        .checked_pow(dim as u32)
        .ok_or(Error::EnumerationOverflow(u64::MAX))?;
    if total > cap {
        return Err(Error::EnumerationOverflow(total));
    }
    Ok((0..total)
        .map(|idx| {
            let mut rest = idx;
            (0..dim)
                .map(|_| {
                    let c = rest % per;
                    rest /= per;
                    center(k, c, depth)
                })
                .collect()
        })
        .collect())
}

/// The exact element `Σ d_i π^i` with digits of `index` in base `q`.
pub fn center<F: ValuedField>(k: &F, index: u64, depth: u32) -> F::Elem {
    let q = k.residue_size() as u64;
    let mut rest = index;
    let mut acc = k.zero();
    for i in 0..depth {
        let d = (rest % q) as u32;
        rest /= q;
        if d != 0 {
            acc = k.add(&acc, &k.shift(&k.lift_residue(d), i as i64));
        }
    }
    acc
}
