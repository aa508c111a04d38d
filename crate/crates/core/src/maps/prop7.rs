//! Power maps `K^(k) → P_n^(k')` and the doubling isomorphisms
//! `{0,1} × R^(k) ≅ R^(k)` and `{0,1} × R* ≅ R*`.

use std::sync::Arc;

use super::{set_region, Piece, PiecewiseMap, Point, Region, Space};
use crate::cosets::{coset_reps, square_class_exponent, CosetKind};
use crate::defset::{membership, DefSet};
use crate::error::{Error, Result};
use crate::field::{Tri, ValuedField};

pub fn corhensel<F: ValuedField + 'static>(k: Arc<F>, n: u32, kk: u32) -> Result<PiecewiseMap<F>> {
    if n < 2 {
        return Err(Error::NotInDomain(format!("exponent must exceed 1, got {n}")));
    }
    let vn = k.int_valuation(n).ok_or(Error::WildExponent(n))?;
    if kk <= vn {
        return Err(Error::NotInDomain(format!("need k > v({n}) = {vn}, got k = {kk}")));
    }
    let kp = kk + vn;
    let (kf, ki) = (k.clone(), k.clone());
    let dom = set_region(&k, None, DefSet::KAcOne(kk));
    let img = set_region(&k, None, DefSet::Inter(vec![DefSet::NthPowers(n), DefSet::KAcOne(kp)]));
    let piece = Piece {
        name: "pow".into(),
        domain: dom.clone(),
        image: img.clone(),
        fwd: Arc::new(move |x: &Point<F::Elem>| Ok(Point::one(kf.pow(&x.coords[0], n)))),
        inv: Arc::new(move |y: &Point<F::Elem>| Ok(Point::one(ki.nth_root(&y.coords[0], n, kk)?))),
    };
    Ok(PiecewiseMap {
        name: format!("corhensel({n},{kk})"),
        domain_space: Space { tags: 1, dim: 1, min_val: -2 },
        codomain_space: Space { tags: 1, dim: 1, min_val: -2 },
        domain: dom,
        codomain: img,
        excluded_fwd: None,
        excluded_inv: None,
        pieces: vec![piece],
        loss: vn as i64,
        field: k,
    })
}

#[derive(Clone, Debug)]
enum Route<E> {
    /// `v(2) = 0`: `(0,x) ↦ x²`, `(1,x) ↦ πx²`.
    Tame { k: u32 },
    /// `k > v(2)`: expand two copies to `2^l` through cube roots, then
    /// collapse through the square classes `α_i P̄_2^(k')`.
    Dyadic { k: u32, kp: u32, reps: Vec<E>, expansions: u32 },
    /// `k ≤ v(2)`: split `R^(k)` into classes `β R^(v(2)+1)`.
    Split { betas: Vec<E>, inner: Box<Route<E>> },
}

/// `{0,1} × R^(k) → R^(k)` with an explicit inverse.
pub(crate) struct Doubler<F: ValuedField> {
    k: Arc<F>,
    kk: u32,
    route: Route<F::Elem>,
}

fn tri_to<T>(t: Tri, ok: T) -> Result<Option<T>> {
    match t {
        Tri::In => Ok(Some(ok)),
        Tri::Out => Ok(None),
        Tri::Unknown => Err(Error::UndecidableMembership),
    }
}

impl<F: ValuedField> Doubler<F> {
    pub(crate) fn new(k: Arc<F>, kk: u32) -> Result<Self> {
        if kk == 0 {
            return Err(Error::NotInDomain("k must be positive".into()));
        }
        let route = Self::route(&*k, kk)?;
        Ok(Doubler { k, kk, route })
    }

    fn route(k: &F, kk: u32) -> Result<Route<F::Elem>> {
        match k.int_valuation(2) {
            Some(0) => Ok(Route::Tame { k: kk }),
            Some(e2) if kk <= e2 => {
                let free = e2 + 1 - kk;
                let one = k.from_int(1);
                let q = k.residue_size() as u64;
                let betas = (0..q.pow(free))
                    .map(|i| k.add(&one, &k.shift(&crate::defset::center(k, i, free), kk as i64)))
                    .collect();
                Ok(Route::Split { betas, inner: Box::new(Self::route(k, e2 + 1)?) })
            }
            e2 => {
                // characteristic 2 (e2 = None) fails inside the coset search
                let reps = coset_reps(k, CosetKind::AconeBySquares(kk))?;
                let l = square_class_exponent(reps.len())
                    .filter(|l| *l >= 1)
                    .ok_or_else(|| Error::CosetIndexOverflow(format!("{} square classes", reps.len())))?;
                Ok(Route::Dyadic { k: kk, kp: kk + e2.unwrap_or(0), reps, expansions: (1 << (l - 1)) - 1 })
            }
        }
    }

    pub(crate) fn loss(&self) -> i64 {
        self.k.int_valuation(2).unwrap_or(0) as i64
    }

    /// Piece labels, one per final branch.
    pub(crate) fn labels(&self) -> Vec<String> {
        fn go<E>(r: &Route<E>) -> Vec<String> {
            match r {
                Route::Tame { .. } => vec!["sq".into(), "pi*sq".into()],
                Route::Dyadic { reps, .. } => (0..reps.len()).map(|i| format!("alpha{i}")).collect(),
                Route::Split { betas, inner } => {
                    let inner = go(inner);
                    (0..betas.len())
                        .flat_map(|b| inner.iter().map(move |l| format!("beta{b}.{l}")))
                        .collect()
                }
            }
        }
        go(&self.route)
    }

    pub(crate) fn fwd(&self, tag: u32, x: &F::Elem) -> Result<(String, F::Elem)> {
        self.fwd_in(&self.route, tag, x)
    }

    pub(crate) fn inv(&self, w: &F::Elem) -> Result<(String, u32, F::Elem)> {
        self.inv_in(&self.route, w)
    }

    fn fwd_in(&self, r: &Route<F::Elem>, tag: u32, x: &F::Elem) -> Result<(String, F::Elem)> {
        let k = &*self.k;
        match r {
            Route::Tame { .. } => {
                let sq = k.mul(x, x);
                Ok(if tag == 0 { ("sq".into(), sq) } else { ("pi*sq".into(), k.shift(&sq, 1)) })
            }
            Route::Dyadic { k: kk, reps, expansions, .. } => {
                let mut c = tag;
                let mut x = x.clone();
                for s in 0..*expansions {
                    if c == 0 {
                        let jp = k.valuation(&x)?.rem_euclid(3);
                        x = k.nth_root(&k.shift(&x, -jp), 3, *kk)?;
                        c = [0, 2 + 2 * s, 3 + 2 * s][jp as usize];
                    }
                }
                Ok((format!("alpha{c}"), k.mul(&reps[c as usize], &k.mul(&x, &x))))
            }
            Route::Split { betas, inner } => {
                let (b, beta) = self.class_of(betas, x, self.inner_k(inner))?;
                let (l, y) = self.fwd_in(inner, tag, &k.div(x, beta)?)?;
                Ok((format!("beta{b}.{l}"), k.mul(beta, &y)))
            }
        }
    }

    fn inv_in(&self, r: &Route<F::Elem>, w: &F::Elem) -> Result<(String, u32, F::Elem)> {
        let k = &*self.k;
        match r {
            Route::Tame { k: kk } => {
                let v = k.valuation(w)?;
                if v.rem_euclid(2) == 0 {
                    Ok(("sq".into(), 0, k.nth_root(w, 2, *kk)?))
                } else {
                    Ok(("pi*sq".into(), 1, k.nth_root(&k.shift(w, -1), 2, *kk)?))
                }
            }
            Route::Dyadic { k: kk, kp, reps, expansions } => {
                let mut found = None;
                for (i, a) in reps.iter().enumerate() {
                    let u = k.div(w, a)?;
                    if let Some(u) = tri_to(membership(k, &DefSet::RingNthPowers(2, *kp), std::slice::from_ref(&u)), u)? {
                        if found.is_some() {
                            return Err(Error::PartitionViolation("square classes overlap".into()));
                        }
                        found = Some((i as u32, u));
                    }
                }
                let (ci, u) = found.ok_or_else(|| Error::NotInDomain("no square class contains the point".into()))?;
                let mut c = ci;
                let mut x = k.nth_root(&u, 2, *kk)?;
                for s in (0..*expansions).rev() {
                    let m = 2 + 2 * s;
                    let cube = k.pow(&x, 3);
                    if c == 0 {
                        x = cube;
                    } else if c == m {
                        x = k.shift(&cube, 1);
                        c = 0;
                    } else if c == m + 1 {
                        x = k.shift(&cube, 2);
                        c = 0;
                    }
                }
                Ok((format!("alpha{ci}"), c, x))
            }
            Route::Split { betas, inner } => {
                let (b, beta) = self.class_of(betas, w, self.inner_k(inner))?;
                let (l, t, y) = self.inv_in(inner, &k.div(w, beta)?)?;
                Ok((format!("beta{b}.{l}"), t, k.mul(beta, &y)))
            }
        }
    }

    fn inner_k(&self, r: &Route<F::Elem>) -> u32 {
        match r {
            Route::Tame { k } | Route::Dyadic { k, .. } => *k,
            Route::Split { inner, .. } => self.inner_k(inner),
        }
    }

    fn class_of<'a>(&self, betas: &'a [F::Elem], x: &F::Elem, level: u32) -> Result<(usize, &'a F::Elem)> {
        for (i, b) in betas.iter().enumerate() {
            let y = self.k.div(x, b)?;
            if tri_to(self.k.unit_congruent_one(&y, level), ())?.is_some() {
                return Ok((i, b));
            }
        }
        Err(Error::NotInDomain(format!("unit part not ≡ 1 mod π^{}", self.kk)))
    }
}

fn label_region<E: 'static>(
    guard: Region<E>,
    label: String,
    probe: impl Fn(&Point<E>) -> Result<String> + Send + Sync + 'static,
) -> Region<E> {
    Arc::new(move |p: &Point<E>| match guard(p) {
        Tri::In => match probe(p) {
            Ok(l) => Tri::from_bool(l == label),
            Err(Error::UndecidableMembership) | Err(Error::PrecisionExhausted) | Err(Error::ValuationUndecidable) => Tri::Unknown,
            Err(_) => Tri::Out,
        },
        t => t,
    })
}

/// `{0} × R^(k) ∪ {1} × R^(k) → R^(k)`.
pub fn prop7i<F: ValuedField + 'static>(k: Arc<F>, kk: u32) -> Result<PiecewiseMap<F>> {
    let d = Arc::new(Doubler::new(k.clone(), kk)?);
    let domain = super::region_union(vec![
        set_region(&k, Some(0), DefSet::AcOne(kk)),
        set_region(&k, Some(1), DefSet::AcOne(kk)),
    ]);
    let codomain = set_region(&k, None, DefSet::AcOne(kk));
    let pieces = d
        .labels()
        .into_iter()
        .map(|label| {
            let (d1, d2, d3, d4) = (d.clone(), d.clone(), d.clone(), d.clone());
            Piece {
                name: label.clone(),
                domain: label_region(domain.clone(), label.clone(), move |p| Ok(d1.fwd(p.tag, &p.coords[0])?.0)),
                image: label_region(codomain.clone(), label, move |p| Ok(d2.inv(&p.coords[0])?.0)),
                fwd: Arc::new(move |p: &Point<F::Elem>| Ok(Point::one(d3.fwd(p.tag, &p.coords[0])?.1))),
                inv: Arc::new(move |p: &Point<F::Elem>| {
                    let (_, t, x) = d4.inv(&p.coords[0])?;
                    Ok(Point::tagged(t, vec![x]))
                }),
            }
        })
        .collect();
    Ok(PiecewiseMap {
        name: format!("prop7i({kk})"),
        domain_space: Space::tagged(2, 1),
        codomain_space: Space::plain(1),
        domain,
        codomain,
        excluded_fwd: None,
        excluded_inv: None,
        pieces,
        loss: d.loss(),
        field: k,
    })
}

/// `{0,1} × R* → R*`, conjugating the `k = 1` doubling by `α = ac(x)`.
pub(crate) struct UnitDoubler<F: ValuedField> {
    k: Arc<F>,
    inner: Doubler<F>,
}

impl<F: ValuedField> UnitDoubler<F> {
    pub(crate) fn new(k: Arc<F>) -> Result<Self> {
        Ok(UnitDoubler { inner: Doubler::new(k.clone(), 1)?, k })
    }

    pub(crate) fn loss(&self) -> i64 {
        self.inner.loss()
    }

    fn alpha(&self, x: &F::Elem) -> Result<F::Elem> {
        Ok(self.k.lift_residue(self.k.ac(x)?))
    }

    pub(crate) fn fwd(&self, tag: u32, x: &F::Elem) -> Result<F::Elem> {
        let a = self.alpha(x)?;
        let (_, y) = self.inner.fwd(tag, &self.k.div(x, &a)?)?;
        Ok(self.k.mul(&a, &y))
    }

    pub(crate) fn inv(&self, w: &F::Elem) -> Result<(u32, F::Elem)> {
        let a = self.alpha(w)?;
        let (_, t, y) = self.inner.inv(&self.k.div(w, &a)?)?;
        Ok((t, self.k.mul(&a, &y)))
    }
}

pub fn prop7ii<F: ValuedField + 'static>(k: Arc<F>) -> Result<PiecewiseMap<F>> {
    let d = Arc::new(UnitDoubler::new(k.clone())?);
    let reps = coset_reps(&*k, CosetKind::UnitsByAcone)?;
    let domain = super::region_union(vec![
        set_region(&k, Some(0), DefSet::Units),
        set_region(&k, Some(1), DefSet::Units),
    ]);
    let pieces = reps
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            let cls = DefSet::scale(a, DefSet::KAcOne(1));
            let (d1, d2) = (d.clone(), d.clone());
            Piece {
                name: format!("ac{}", i + 1),
                domain: super::region_union(vec![
                    set_region(&k, Some(0), DefSet::Inter(vec![DefSet::Units, cls.clone()])),
                    set_region(&k, Some(1), DefSet::Inter(vec![DefSet::Units, cls.clone()])),
                ]),
                image: set_region(&k, None, DefSet::Inter(vec![DefSet::Units, cls])),
                fwd: Arc::new(move |p: &Point<F::Elem>| Ok(Point::one(d1.fwd(p.tag, &p.coords[0])?))),
                inv: Arc::new(move |p: &Point<F::Elem>| {
                    let (t, x) = d2.inv(&p.coords[0])?;
                    Ok(Point::tagged(t, vec![x]))
                }),
            }
        })
        .collect();
    Ok(PiecewiseMap {
        name: "prop7ii".into(),
        domain_space: Space::tagged(2, 1),
        codomain_space: Space::plain(1),
        domain,
        codomain: set_region(&k, None, DefSet::Units),
        excluded_fwd: None,
        excluded_inv: None,
        pieces,
        loss: d.loss(),
        field: k,
    })
}
