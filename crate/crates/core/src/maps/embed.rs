//! The injection `i: K → R` and the disjoint-union embedding built from it.

use std::sync::Arc;

use super::{set_region, Piece, PiecewiseMap, Point, Region, Space};
use crate::defset::{membership, DefSet};
use crate::error::{Error, Result};
use crate::field::{Tri, ValuedField};

fn image_neg<E>(k: &impl ValuedField<Elem = E>) -> DefSet<E> {
    DefSet::affine(1, k.from_int(1), DefSet::Units)
}

/// `i(x) = πx` for `v(x) ≥ 0`, `1 + 1/x` for `v(x) < 0`.
pub fn embed_point<F: ValuedField>(k: &F, x: &F::Elem) -> Result<F::Elem> {
    match membership(k, &DefSet::FullRing, std::slice::from_ref(x)) {
        Tri::In => Ok(k.shift(x, 1)),
        Tri::Out => Ok(k.add(&k.from_int(1), &k.div(&k.from_int(1), x)?)),
        Tri::Unknown => Err(Error::ValuationUndecidable),
    }
}

/// Inverse of [`embed_point`] on `m ∪ (1 + πR*)`.
pub fn embed_inverse<F: ValuedField>(k: &F, z: &F::Elem) -> Result<F::Elem> {
    let z1 = std::slice::from_ref(z);
    match membership(k, &DefSet::MaxIdeal, z1) {
        Tri::In => return Ok(k.shift(z, -1)),
        Tri::Unknown => return Err(Error::UndecidableMembership),
        Tri::Out => {}
    }
    match membership(k, &image_neg(k), z1) {
        Tri::In => k.div(&k.from_int(1), &k.sub(z, &k.from_int(1))),
        Tri::Unknown => Err(Error::UndecidableMembership),
        Tri::Out => Err(Error::NotInDomain("not in the image of i".into())),
    }
}

pub fn embed_i<F: ValuedField + 'static>(k: Arc<F>) -> PiecewiseMap<F> {
    let (k1, k2, k3, k4) = (k.clone(), k.clone(), k.clone(), k.clone());
    let pieces = vec![
        Piece {
            name: "v>=0".into(),
            domain: set_region(&k, None, DefSet::FullRing),
            image: set_region(&k, None, DefSet::MaxIdeal),
            fwd: Arc::new(move |x: &Point<F::Elem>| Ok(Point::one(k1.shift(&x.coords[0], 1)))),
            inv: Arc::new(move |y: &Point<F::Elem>| Ok(Point::one(k2.shift(&y.coords[0], -1)))),
        },
        Piece {
            name: "v<0".into(),
            domain: set_region(&k, None, DefSet::minus(DefSet::Field, DefSet::FullRing)),
            image: set_region(&k, None, image_neg(&*k)),
            fwd: Arc::new(move |x: &Point<F::Elem>| {
                let one = k3.from_int(1);
                Ok(Point::one(k3.add(&one, &k3.div(&one, &x.coords[0])?)))
            }),
            inv: Arc::new(move |y: &Point<F::Elem>| {
                let one = k4.from_int(1);
                Ok(Point::one(k4.div(&one, &k4.sub(&y.coords[0], &one))?))
            }),
        },
    ];
    PiecewiseMap {
        name: "embed_i".into(),
        domain_space: Space { tags: 1, dim: 1, min_val: -2 },
        codomain_space: Space::plain(1),
        domain: set_region(&k, None, DefSet::Field),
        codomain: set_region(&k, None, DefSet::union(vec![DefSet::MaxIdeal, image_neg(&*k)])),
        excluded_fwd: None,
        excluded_inv: None,
        pieces,
        loss: 2,
        field: k,
    }
}

/// Embed `{0} × X ∪ {1} × Y` (with `X, Y ⊆ K`) into `R` as
/// `X'' ∪ Y''`, `X'' = π·i(X)`, `Y'' = 1 + π·i(Y)`.
///
/// Returns the image region and the witnessing bijection.
pub fn disjoint_union_embed<F: ValuedField + 'static>(
    k: Arc<F>,
    x_set: DefSet<F::Elem>,
    y_set: DefSet<F::Elem>,
) -> (Region<F::Elem>, PiecewiseMap<F>) {
    // offset 0 for X'', 1 for Y''
    let part = |tag: u32, s: DefSet<F::Elem>| -> Piece<F::Elem> {
        let off = if tag == 0 { k.zero() } else { k.from_int(1) };
        let (kf, ki, kr) = (k.clone(), k.clone(), k.clone());
        let (of, oi, or) = (off.clone(), off.clone(), off);
        let s_img = s.clone();
        let image: Region<F::Elem> = Arc::new(move |w: &Point<F::Elem>| {
            let z = kr.shift(&kr.sub(&w.coords[0], &or), -1);
            match embed_inverse(&*kr, &z) {
                Ok(x) => membership(&*kr, &s_img, &[x]),
                Err(Error::UndecidableMembership) => Tri::Unknown,
                Err(_) => Tri::Out,
            }
        });
        Piece {
            name: if tag == 0 { "X''".into() } else { "Y''".into() },
            domain: set_region(&k, Some(tag), s),
            image,
            fwd: Arc::new(move |p: &Point<F::Elem>| {
                let i = embed_point(&*kf, &p.coords[0])?;
                Ok(Point::one(kf.add(&of, &kf.shift(&i, 1))))
            }),
            inv: Arc::new(move |w: &Point<F::Elem>| {
                let z = ki.shift(&ki.sub(&w.coords[0], &oi), -1);
                Ok(Point::tagged(tag, vec![embed_inverse(&*ki, &z)?]))
            }),
        }
    };
    let pieces = vec![part(0, x_set.clone()), part(1, y_set.clone())];
    let images: Vec<Region<F::Elem>> = pieces.iter().map(|p| p.image.clone()).collect();
    let w = super::region_union(images);
    let (kx, ky) = (k.clone(), k.clone());
    let domain: Region<F::Elem> = Arc::new(move |p: &Point<F::Elem>| match p.tag {
        0 => membership(&*kx, &x_set, &p.coords),
        1 => membership(&*ky, &y_set, &p.coords),
        _ => Tri::Out,
    });
    let map = PiecewiseMap {
        name: "disjoint_union_embed".into(),
        domain_space: Space { tags: 2, dim: 1, min_val: -2 },
        codomain_space: Space::plain(1),
        domain,
        codomain: w.clone(),
        excluded_fwd: None,
        excluded_inv: None,
        pieces,
        loss: 2,
        field: k,
    };
    (w, map)
}
