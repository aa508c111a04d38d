//! A bijection `R² ∖ {(0,0)} → R²`.
//!
//! With `ψ(x,y) = (π³x, π³y)` and `φ_i(x,y) = (π^i + π³x, π^i + π³y)` the
//! pieces are
//!
//! * `F1` on `φ₁(R*²)`: undo `φ₁`, split with the inverse of
//!   `{0,1}×R*² ≅ R*²`, and land in `ψ(R*²) ∪ φ₁(R*²)`;
//! * `F2` on `ψ(R×R*) ∪ φ₂(R^(1)×R*)`: `ψ(x,y) ↦ φ₂(1+πx, y)`,
//!   `φ₂(x,y) ↦ φ₂(πx, y)`;
//! * `F3` on `φ₂({0}×R^(1))`: `φ₂(0,1+πx) ↦ ψ(0,x)`, `φ₂(0,πx) ↦ φ₂(0,x)`;
//! * `ID` elsewhere.

use std::str::FromStr;
use std::sync::Arc;

use super::prop3::{prop3i_fwd, prop3i_inv, prop3ii_fwd, prop3ii_inv};
use super::{region_minus, region_union, set_region, Piece, PiecewiseMap, Point, Space};
use crate::defset::DefSet;
use crate::error::{Error, Result};
use crate::field::{Tri, ValuedField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanePiece {
    F1,
    F2,
    F3,
    Id,
}

impl FromStr for PlanePiece {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F1" => Ok(PlanePiece::F1),
            "F2" => Ok(PlanePiece::F2),
            "F3" => Ok(PlanePiece::F3),
            "ID" => Ok(PlanePiece::Id),
            _ => Err(Error::NotInDomain(format!("no plane piece `{s}`"))),
        }
    }
}

struct Charts<F: ValuedField> {
    k: Arc<F>,
}

impl<F: ValuedField> Charts<F> {
    fn offset(&self, i: i64) -> F::Elem {
        if i == 0 {
            self.k.zero()
        } else {
            self.k.pi_pow(i)
        }
    }

    /// `φ_i` (with `φ_0 = ψ`).
    fn to(&self, i: i64, x: &F::Elem, y: &F::Elem) -> Point<F::Elem> {
        let o = self.offset(i);
        let k = &*self.k;
        Point::plain(vec![k.add(&o, &k.shift(x, 3)), k.add(&o, &k.shift(y, 3))])
    }

    fn from(&self, i: i64, p: &Point<F::Elem>) -> (F::Elem, F::Elem) {
        let o = self.offset(i);
        let k = &*self.k;
        (k.shift(&k.sub(&p.coords[0], &o), -3), k.shift(&k.sub(&p.coords[1], &o), -3))
    }

    /// The set `φ_i(A × B)`.
    fn set(&self, i: i64, a: DefSet<F::Elem>, b: DefSet<F::Elem>) -> DefSet<F::Elem> {
        DefSet::Product(vec![
            DefSet::affine(3, self.offset(i), a),
            DefSet::affine(3, self.offset(i), b),
        ])
    }
}

pub fn plane<F: ValuedField + 'static>(k: Arc<F>) -> PiecewiseMap<F> {
    let c = Arc::new(Charts { k: k.clone() });
    let zero = || DefSet::Singleton(k.zero());
    let r2 = DefSet::Product(vec![DefSet::FullRing, DefSet::FullRing]);
    let origin = DefSet::Product(vec![zero(), zero()]);

    // F1
    let f1_dom = set_region(&k, None, c.set(1, DefSet::Units, DefSet::Units));
    let f1_psi = set_region(&k, None, c.set(0, DefSet::Units, DefSet::Units));
    let f1_img = region_union(vec![f1_psi.clone(), f1_dom.clone()]);
    let (cf, ci) = (c.clone(), c.clone());
    let f1 = Piece {
        name: "F1".into(),
        domain: f1_dom,
        image: f1_img,
        fwd: Arc::new(move |p: &Point<F::Elem>| {
            let (x, y) = cf.from(1, p);
            let (t, u, w) = prop3ii_inv(&*cf.k, &x, &y)?;
            Ok(cf.to(if t == 0 { 0 } else { 1 }, &u, &w))
        }),
        inv: Arc::new(move |p: &Point<F::Elem>| {
            let t = match f1_psi(p) {
                Tri::In => 0,
                Tri::Out => 1,
                Tri::Unknown => return Err(Error::UndecidableMembership),
            };
            let (u, w) = ci.from(t as i64, p);
            let (x, y) = prop3ii_fwd(&*ci.k, t, &u, &w);
            Ok(ci.to(1, &x, &y))
        }),
    };

    // F2
    let f2_psi = set_region(&k, None, c.set(0, DefSet::FullRing, DefSet::Units));
    let f2_dom = region_union(vec![
        f2_psi.clone(),
        set_region(&k, None, c.set(2, DefSet::AcOne(1), DefSet::Units)),
    ]);
    let f2_img = set_region(&k, None, c.set(2, DefSet::AcOne(1), DefSet::Units));
    let (cf, ci) = (c.clone(), c.clone());
    let f2 = Piece {
        name: "F2".into(),
        domain: f2_dom,
        image: f2_img,
        fwd: Arc::new(move |p: &Point<F::Elem>| {
            let t = match f2_psi(p) {
                Tri::In => 0,
                Tri::Out => 1,
                Tri::Unknown => return Err(Error::UndecidableMembership),
            };
            let (x, y) = cf.from(if t == 0 { 0 } else { 2 }, p);
            Ok(cf.to(2, &prop3i_fwd(&*cf.k, t, &x), &y))
        }),
        inv: Arc::new(move |p: &Point<F::Elem>| {
            let (x1, y) = ci.from(2, p);
            let (t, x) = prop3i_inv(&*ci.k, &x1)?;
            Ok(ci.to(if t == 0 { 0 } else { 2 }, &x, &y))
        }),
    };

    // F3
    let f3_dom = set_region(&k, None, c.set(2, zero(), DefSet::AcOne(1)));
    let f3_psi = set_region(&k, None, c.set(0, zero(), DefSet::FullRing));
    let f3_img = region_union(vec![f3_psi.clone(), set_region(&k, None, c.set(2, zero(), DefSet::AcOne(1)))]);
    let (cf, ci) = (c.clone(), c.clone());
    let f3 = Piece {
        name: "F3".into(),
        domain: f3_dom,
        image: f3_img,
        fwd: Arc::new(move |p: &Point<F::Elem>| {
            let (_, w) = cf.from(2, p);
            let (t, x) = prop3i_inv(&*cf.k, &w)?;
            Ok(cf.to(if t == 0 { 0 } else { 2 }, &cf.k.zero(), &x))
        }),
        inv: Arc::new(move |p: &Point<F::Elem>| {
            let t = match f3_psi(p) {
                Tri::In => 0,
                Tri::Out => 1,
                Tri::Unknown => return Err(Error::UndecidableMembership),
            };
            let (_, x) = ci.from(if t == 0 { 0 } else { 2 }, p);
            Ok(ci.to(2, &ci.k.zero(), &prop3i_fwd(&*ci.k, t, &x)))
        }),
    };

    let domain = set_region(&k, None, DefSet::minus(r2.clone(), origin.clone()));
    let codomain = set_region(&k, None, r2);
    let id = Piece {
        name: "ID".into(),
        domain: region_minus(domain.clone(), vec![f1.domain.clone(), f2.domain.clone(), f3.domain.clone()]),
        image: region_minus(codomain.clone(), vec![f1.image.clone(), f2.image.clone(), f3.image.clone()]),
        fwd: Arc::new(|p: &Point<F::Elem>| Ok(p.clone())),
        inv: Arc::new(|p: &Point<F::Elem>| Ok(p.clone())),
    };

    PiecewiseMap {
        name: "plane".into(),
        domain_space: Space::plain(2),
        codomain_space: Space::plain(2),
        domain,
        codomain,
        excluded_fwd: Some(set_region(&k, None, origin)),
        excluded_inv: None,
        pieces: vec![f1, f2, f3, id],
        loss: 6,
        field: k,
    }
}
