//! Bijections `R → R ∖ {0}`.
//!
//! The square route uses `W = (1+π²R*) ∪ π²R ∪ (π+π²R^(1))`:
//!
//! * `F1` on `1+π²R*` inverts `f₁: π²R* ∪ 1+π²R* → 1+π²R*`, where
//!   `f₁(π²x) = 1+π²·d(0,x)` and `f₁(1+π²x) = 1+π²·d(1,x)` for the
//!   doubling `d: {0,1}×R* ≅ R*`;
//! * `F2` on `π²R ∪ π+π²R^(1)`: `π²x ↦ π+π²(1+πx)`, `π+π²x ↦ π+π²(πx)`;
//! * `ID` outside `W`.
//!
//! The Frobenius route conjugates the inverse plane bijection by the pairing
//! `(x,y) ↦ x^p + t·y^p` on its image and is the identity elsewhere.

use std::sync::Arc;

use super::prop3::{prop3i_fwd, prop3i_inv};
use super::prop7::UnitDoubler;
use super::{plane, region_minus, region_union, set_region, Piece, PiecewiseMap, Point, Region, Space};
use crate::defset::DefSet;
use crate::error::{Error, Result};
use crate::field::{Tri, ValuedField};

pub fn line_qp<F: ValuedField + 'static>(k: Arc<F>) -> Result<PiecewiseMap<F>> {
    line_squares(k, "line_qp")
}

pub fn line_squares<F: ValuedField + 'static>(k: Arc<F>, name: &str) -> Result<PiecewiseMap<F>> {
    let d = Arc::new(UnitDoubler::new(k.clone())?);
    let one = k.from_int(1);
    let pi = k.pi_pow(1);
    let one_r = DefSet::affine(2, one.clone(), DefSet::Units);
    let pi2_r = DefSet::affine(2, k.zero(), DefSet::FullRing);
    let pi_r1 = DefSet::affine(2, pi.clone(), DefSet::AcOne(1));
    let pi2_units = DefSet::affine(2, k.zero(), DefSet::Units);

    // F1 = f₁⁻¹ on 1 + π²R*
    let pi2_units_r = set_region(&k, None, pi2_units.clone());
    let (kf, ki, df, di) = (k.clone(), k.clone(), d.clone(), d.clone());
    let (o1, o2) = (one.clone(), one.clone());
    let f1 = Piece {
        name: "F1".into(),
        domain: set_region(&k, None, one_r.clone()),
        image: set_region(&k, None, DefSet::union(vec![pi2_units, one_r.clone()])),
        fwd: Arc::new(move |p: &Point<F::Elem>| {
            let w = kf.shift(&kf.sub(&p.coords[0], &o1), -2);
            let (t, z) = df.inv(&w)?;
            let base = if t == 0 { kf.zero() } else { o1.clone() };
            Ok(Point::one(kf.add(&base, &kf.shift(&z, 2))))
        }),
        inv: Arc::new(move |p: &Point<F::Elem>| {
            let y = &p.coords[0];
            let t = match pi2_units_r(p) {
                Tri::In => 0,
                Tri::Out => 1,
                Tri::Unknown => return Err(Error::UndecidableMembership),
            };
            let z = if t == 0 { ki.shift(y, -2) } else { ki.shift(&ki.sub(y, &o2), -2) };
            Ok(Point::one(ki.add(&o2, &ki.shift(&di.fwd(t, &z)?, 2))))
        }),
    };

    // F2 on π²R ∪ π + π²R^(1)
    let pi2_r_region = set_region(&k, None, pi2_r.clone());
    let (kf, ki) = (k.clone(), k.clone());
    let (pf, pinv) = (pi.clone(), pi.clone());
    let f2 = Piece {
        name: "F2".into(),
        domain: set_region(&k, None, DefSet::union(vec![pi2_r, pi_r1.clone()])),
        image: set_region(&k, None, pi_r1),
        fwd: Arc::new(move |p: &Point<F::Elem>| {
            let x = &p.coords[0];
            let (t, z) = match pi2_r_region(p) {
                Tri::In => (0, kf.shift(x, -2)),
                Tri::Out => (1, kf.shift(&kf.sub(x, &pf), -2)),
                Tri::Unknown => return Err(Error::UndecidableMembership),
            };
            Ok(Point::one(kf.add(&pf, &kf.shift(&prop3i_fwd(&*kf, t, &z), 2))))
        }),
        inv: Arc::new(move |p: &Point<F::Elem>| {
            let w = ki.shift(&ki.sub(&p.coords[0], &pinv), -2);
            let (t, z) = prop3i_inv(&*ki, &w)?;
            let base = if t == 0 { ki.zero() } else { pinv.clone() };
            Ok(Point::one(ki.add(&base, &ki.shift(&z, 2))))
        }),
    };

    let domain = set_region(&k, None, DefSet::FullRing);
    let codomain = set_region(&k, None, DefSet::Units);
    let id = identity_piece(domain.clone(), codomain.clone(), &[&f1, &f2]);
    Ok(PiecewiseMap {
        name: name.to_string(),
        domain_space: Space::plain(1),
        codomain_space: Space::plain(1),
        domain,
        codomain,
        excluded_fwd: None,
        excluded_inv: Some(set_region(&k, None, DefSet::Singleton(k.zero()))),
        pieces: vec![f1, f2, id],
        loss: 2,
        field: k,
    })
}

fn identity_piece<E: Clone + 'static>(domain: Region<E>, codomain: Region<E>, others: &[&Piece<E>]) -> Piece<E> {
    Piece {
        name: "ID".into(),
        domain: region_minus(domain, others.iter().map(|p| p.domain.clone()).collect()),
        image: region_minus(codomain, others.iter().map(|p| p.image.clone()).collect()),
        fwd: Arc::new(|p: &Point<E>| Ok(p.clone())),
        inv: Arc::new(|p: &Point<E>| Ok(p.clone())),
    }
}

pub fn line_laurent_frob<F: ValuedField + 'static>(k: Arc<F>) -> Result<PiecewiseMap<F>> {
    if k.pair(&k.zero(), &k.zero()).is_none() {
        return Err(Error::UnsupportedField { map: "line_laurent_frob".into(), field: k.describe() });
    }
    let f = Arc::new(plane(k.clone()));
    let kr = k.clone();
    let in_image: Region<F::Elem> = Arc::new(move |p: &Point<F::Elem>| {
        kr.pair_image(&p.coords[0]).unwrap_or(Tri::Out).and(crate::defset::membership(
            &*kr,
            &DefSet::FullRing,
            &p.coords,
        ))
    });
    let nonzero = set_region(&k, None, DefSet::Units);
    let conj = |dir: super::Direction| {
        let (k, f) = (k.clone(), f.clone());
        Arc::new(move |p: &Point<F::Elem>| {
            let (x, y) = k.unpair(&p.coords[0]).expect("pairing")?;
            // the inverse plane map goes forward here and vice versa
            let q = f.run(&Point::plain(vec![x, y]), match dir {
                super::Direction::Forward => super::Direction::Inverse,
                super::Direction::Inverse => super::Direction::Forward,
            })?;
            Ok(Point::one(k.pair(&q.coords[0], &q.coords[1]).expect("pairing")))
        }) as super::PointFn<F::Elem>
    };
    let g = Piece {
        name: "G".into(),
        domain: in_image.clone(),
        image: region_minus(in_image, vec![region_union(vec![set_region(
            &k,
            None,
            DefSet::Singleton(k.zero()),
        )])]),
        fwd: conj(super::Direction::Forward),
        inv: conj(super::Direction::Inverse),
    };
    let domain = set_region(&k, None, DefSet::FullRing);
    let id = identity_piece(domain.clone(), nonzero.clone(), &[&g]);
    let p = k.prime() as i64;
    Ok(PiecewiseMap {
        name: "line_laurent_frob".into(),
        domain_space: Space::plain(1),
        codomain_space: Space::plain(1),
        domain,
        codomain: nonzero,
        excluded_fwd: None,
        excluded_inv: Some(set_region(&k, None, DefSet::Singleton(k.zero()))),
        pieces: vec![g, id],
        loss: p * (f.loss + 2),
        field: k,
    })
}
