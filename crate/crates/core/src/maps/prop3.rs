//! `{0}×R ∪ {1}×R^(1) ≅ R^(1)` and `{0,1}×R*² ≅ R*²`.

use std::sync::Arc;

use super::{set_region, Piece, PiecewiseMap, Point, Space};
use crate::defset::{membership, DefSet};
use crate::error::{Error, Result};
use crate::field::{Tri, ValuedField};

/// `(0, x) ↦ 1 + πx`, `(1, x) ↦ πx`.
pub fn prop3i_fwd<F: ValuedField>(k: &F, tag: u32, x: &F::Elem) -> F::Elem {
    let px = k.shift(x, 1);
    if tag == 0 {
        k.add(&k.from_int(1), &px)
    } else {
        px
    }
}

/// Split `w ∈ R^(1)` by valuation: `v(w) = 0` gives tag 0, `v(w) ≥ 1` tag 1.
pub fn prop3i_inv<F: ValuedField>(k: &F, w: &F::Elem) -> Result<(u32, F::Elem)> {
    match membership(k, &DefSet::AcOne(1), std::slice::from_ref(w)) {
        Tri::In => {}
        Tri::Unknown => return Err(Error::UndecidableMembership),
        Tri::Out => return Err(Error::NotInDomain("expected an element of R^(1)".into())),
    }
    if k.valuation(w)? == 0 {
        Ok((0, k.shift(&k.sub(w, &k.from_int(1)), -1)))
    } else {
        Ok((1, k.shift(w, -1)))
    }
}

pub fn prop3i<F: ValuedField + 'static>(k: Arc<F>) -> PiecewiseMap<F> {
    let piece = |tag: u32| {
        let (kf, ki) = (k.clone(), k.clone());
        let (dom, img) = if tag == 0 {
            (DefSet::FullRing, DefSet::affine(1, k.from_int(1), DefSet::FullRing))
        } else {
            (DefSet::AcOne(1), DefSet::affine(1, k.zero(), DefSet::AcOne(1)))
        };
        Piece {
            name: format!("tag{tag}"),
            domain: set_region(&k, Some(tag), dom),
            image: set_region(&k, None, img),
            fwd: Arc::new(move |x: &Point<F::Elem>| Ok(Point::one(prop3i_fwd(&*kf, tag, &x.coords[0])))),
            inv: Arc::new(move |y: &Point<F::Elem>| {
                let (t, x) = prop3i_inv(&*ki, &y.coords[0])?;
                Ok(Point::tagged(t, vec![x]))
            }),
        }
    };
    let pieces = vec![piece(0), piece(1)];
    let domain = super::region_union(pieces.iter().map(|p| p.domain.clone()).collect());
    PiecewiseMap {
        name: "prop3i".into(),
        domain_space: Space::tagged(2, 1),
        codomain_space: Space::plain(1),
        domain,
        codomain: set_region(&k, None, DefSet::AcOne(1)),
        excluded_fwd: None,
        excluded_inv: None,
        pieces,
        loss: 1,
        field: k,
    }
}

/// `(0, x, y) ↦ (x, xy)`, `(1, x, y) ↦ (πxy, y)`.
pub fn prop3ii_fwd<F: ValuedField>(k: &F, tag: u32, x: &F::Elem, y: &F::Elem) -> (F::Elem, F::Elem) {
    let xy = k.mul(x, y);
    if tag == 0 {
        (x.clone(), xy)
    } else {
        (k.shift(&xy, 1), y.clone())
    }
}

/// `v(a) ≤ v(b)` gives `(0, a, b/a)`, otherwise `(1, a/(πb), b)`.
pub fn prop3ii_inv<F: ValuedField>(k: &F, a: &F::Elem, b: &F::Elem) -> Result<(u32, F::Elem, F::Elem)> {
    let pt = [a.clone(), b.clone()];
    match membership(k, &DefSet::Product(vec![DefSet::Units, DefSet::Units]), &pt) {
        Tri::In => {}
        Tri::Unknown => return Err(Error::UndecidableMembership),
        Tri::Out => return Err(Error::NotInDomain("expected a point of R*²".into())),
    }
    if k.valuation(a)? <= k.valuation(b)? {
        Ok((0, a.clone(), k.div(b, a)?))
    } else {
        Ok((1, k.shift(&k.div(a, b)?, -1), b.clone()))
    }
}

pub fn prop3ii<F: ValuedField + 'static>(k: Arc<F>) -> PiecewiseMap<F> {
    let units2 = || DefSet::Product(vec![DefSet::Units, DefSet::Units]);
    let piece = |tag: u32| {
        let (kf, ki) = (k.clone(), k.clone());
        Piece {
            name: format!("tag{tag}"),
            domain: set_region(&k, Some(tag), units2()),
            image: set_region(&k, None, if tag == 0 { DefSet::ValLe } else { DefSet::ValGt }),
            fwd: Arc::new(move |p: &Point<F::Elem>| {
                let (a, b) = prop3ii_fwd(&*kf, tag, &p.coords[0], &p.coords[1]);
                Ok(Point::plain(vec![a, b]))
            }),
            inv: Arc::new(move |p: &Point<F::Elem>| {
                let (t, x, y) = prop3ii_inv(&*ki, &p.coords[0], &p.coords[1])?;
                Ok(Point::tagged(t, vec![x, y]))
            }),
        }
    };
    let pieces = vec![piece(0), piece(1)];
    let domain = super::region_union(pieces.iter().map(|p| p.domain.clone()).collect());
    PiecewiseMap {
        name: "prop3ii".into(),
        domain_space: Space::tagged(2, 2),
        codomain_space: Space::plain(2),
        domain,
        codomain: set_region(&k, None, units2()),
        excluded_fwd: None,
        excluded_inv: None,
        pieces,
        loss: 1,
        field: k,
    }
}
