//! Definable bijections as piecewise maps with explicit inverses.
//!
//! A map acts on points of a *space*: `tags` disjoint copies of `K^dim`.
//! Tagged copies stand in for disjoint unions (`{0} × X ∪ {1} × Y`).

use std::fmt;
use std::sync::Arc;

use crate::defset::{membership, DefSet};
use crate::error::{Error, Result};
use crate::field::{Tri, ValuedField};

mod embed;
mod line;
mod plane;
mod prop3;
mod prop7;

pub use embed::{disjoint_union_embed, embed_i};
pub use line::{line_laurent_frob, line_qp, line_squares};
pub use plane::{plane, PlanePiece};
pub use prop3::{prop3i, prop3ii};
pub use prop7::{corhensel, prop7i, prop7ii};

#[derive(Clone, Debug, PartialEq)]
pub struct Point<E> {
    pub tag: u32,
    pub coords: Vec<E>,
}

impl<E> Point<E> {
    pub fn plain(coords: Vec<E>) -> Self {
        Point { tag: 0, coords }
    }

    pub fn one(x: E) -> Self {
        Point { tag: 0, coords: vec![x] }
    }

    pub fn tagged(tag: u32, coords: Vec<E>) -> Self {
        Point { tag, coords }
    }
}

/// Shape of a map's domain or codomain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Space {
    pub tags: u32,
    pub dim: usize,
    /// Smallest valuation reached by the enumeration grid (negative for
    /// subsets of `K` that are not inside `R`).
    pub min_val: i64,
}

impl Space {
    pub const fn plain(dim: usize) -> Self {
        Space { tags: 1, dim, min_val: 0 }
    }

    pub const fn tagged(tags: u32, dim: usize) -> Self {
        Space { tags, dim, min_val: 0 }
    }
}

pub type Region<E> = Arc<dyn Fn(&Point<E>) -> Tri + Send + Sync>;
pub type PointFn<E> = Arc<dyn Fn(&Point<E>) -> Result<Point<E>> + Send + Sync>;

/// Region given by a definable set, optionally restricted to one tag.
pub fn set_region<F: ValuedField + 'static>(k: &Arc<F>, tag: Option<u32>, s: DefSet<F::Elem>) -> Region<F::Elem> {
    let k = Arc::clone(k);
    Arc::new(move |x: &Point<F::Elem>| {
        if tag.is_some_and(|t| t != x.tag) {
            return Tri::Out;
        }
        membership(&*k, &s, &x.coords)
    })
}

pub fn region_union<E: 'static>(parts: Vec<Region<E>>) -> Region<E> {
    Arc::new(move |x: &Point<E>| parts.iter().fold(Tri::Out, |acc, r| acc.or(r(x))))
}

/// `base ∖ ⋃ others`.
pub fn region_minus<E: 'static>(base: Region<E>, others: Vec<Region<E>>) -> Region<E> {
    Arc::new(move |x: &Point<E>| {
        let mut acc = base(x);
        for r in &others {
            if acc == Tri::Out {
                break;
            }
            acc = acc.and(!r(x));
        }
        acc
    })
}

#[derive(Clone)]
pub struct Piece<E> {
    pub name: String,
    pub domain: Region<E>,
    pub image: Region<E>,
    pub fwd: PointFn<E>,
    pub inv: PointFn<E>,
}

impl<E> fmt::Debug for Piece<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Piece").field("name", &self.name).finish_non_exhaustive()
    }
}

/// An invertible piecewise map. Piece domains partition `domain` and piece
/// images partition `codomain`; the harness checks both.
#[derive(Clone)]
pub struct PiecewiseMap<F: ValuedField> {
    pub name: String,
    pub field: Arc<F>,
    pub domain_space: Space,
    pub codomain_space: Space,
    pub domain: Region<F::Elem>,
    pub codomain: Region<F::Elem>,
    /// Point of the domain side (forward) or codomain side (inverse) with
    /// no partner, e.g. the origin of `R² ∖ {0}`.
    pub excluded_fwd: Option<Region<F::Elem>>,
    pub excluded_inv: Option<Region<F::Elem>>,
    pub pieces: Vec<Piece<F::Elem>>,
    /// Absolute digits a forward-then-inverse trip may cost.
    pub loss: i64,
}

impl<F: ValuedField> fmt::Debug for PiecewiseMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseMap")
            .field("name", &self.name)
            .field("pieces", &self.pieces)
            .field("loss", &self.loss)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl<F: ValuedField> PiecewiseMap<F> {
    fn locate(&self, x: &Point<F::Elem>, dir: Direction) -> Result<usize> {
        let (whole, excluded) = match dir {
            Direction::Forward => (&self.domain, &self.excluded_fwd),
            Direction::Inverse => (&self.codomain, &self.excluded_inv),
        };
        let mut hit: Option<usize> = None;
        let mut unknown = whole(x) == Tri::Unknown;
        for (i, p) in self.pieces.iter().enumerate() {
            let r = match dir {
                Direction::Forward => (p.domain)(x),
                Direction::Inverse => (p.image)(x),
            };
            match r {
                Tri::In => {
                    if let Some(j) = hit {
                        return Err(Error::PartitionViolation(format!(
                            "pieces {} and {} both claim the point",
                            self.pieces[j].name, p.name
                        )));
                    }
                    hit = Some(i);
                }
                Tri::Unknown => unknown = true,
                Tri::Out => {}
            }
        }
        if let Some(i) = hit {
            return Ok(i);
        }
        if let Some(e) = excluded {
            if e(x) != Tri::Out {
                return Err(Error::ExcludedPoint);
            }
        }
        if unknown {
            return Err(Error::UndecidableMembership);
        }
        Err(Error::NotInDomain(format!("point outside the {} of {}", match dir {
            Direction::Forward => "domain",
            Direction::Inverse => "codomain",
        }, self.name)))
    }

    /// Index of the piece whose domain (or image) contains `x`.
    pub fn piece_index(&self, x: &Point<F::Elem>, dir: Direction) -> Result<usize> {
        self.locate(x, dir)
    }

    pub fn classify(&self, x: &Point<F::Elem>) -> Result<&str> {
        Ok(&self.pieces[self.locate(x, Direction::Forward)?].name)
    }

    pub fn apply(&self, x: &Point<F::Elem>) -> Result<Point<F::Elem>> {
        let i = self.locate(x, Direction::Forward)?;
        (self.pieces[i].fwd)(x)
    }

    pub fn invert(&self, y: &Point<F::Elem>) -> Result<Point<F::Elem>> {
        let i = self.locate(y, Direction::Inverse)?;
        (self.pieces[i].inv)(y)
    }

    pub fn run(&self, x: &Point<F::Elem>, dir: Direction) -> Result<Point<F::Elem>> {
        match dir {
            Direction::Forward => self.apply(x),
            Direction::Inverse => self.invert(x),
        }
    }
}

/// Names accepted by [`build`].
pub const MAP_NAMES: &[&str] = &[
    "embed_i",
    "prop3i",
    "prop3ii",
    "plane",
    "corhensel(n,k)",
    "prop7i(k)",
    "prop7ii",
    "line_qp",
    "line_laurent_frob",
    "line_laurent_sq",
];

fn args(name: &str, head: &str) -> Option<Vec<u32>> {
    let inner = name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}

/// Construct a registered map over the field `k`.
pub fn build<F: ValuedField + 'static>(name: &str, k: Arc<F>) -> Result<PiecewiseMap<F>> {
    let name = name.trim();
    let unsupported = || Error::UnsupportedField { map: name.to_string(), field: k.describe() };
    match name {
        "embed_i" => return Ok(embed_i(k)),
        "prop3i" => return Ok(prop3i(k)),
        "prop3ii" => return Ok(prop3ii(k)),
        "plane" => return Ok(plane(k)),
        "prop7ii" => return prop7ii(k),
        "line_qp" => {
            return if k.characteristic() == 0 { line_qp(k) } else { Err(unsupported()) };
        }
        "line_laurent_sq" => {
            return if k.characteristic() != 0 { line_squares(k, name) } else { Err(unsupported()) };
        }
        "line_laurent_frob" => {
            return if k.characteristic() != 0 { line_laurent_frob(k) } else { Err(unsupported()) };
        }
        _ => {}
    }
    if let Some(a) = args(name, "corhensel") {
        if let [n, kk] = a[..] {
            return corhensel(k, n, kk);
        }
    }
    if let Some(a) = args(name, "prop7i") {
        if let [kk] = a[..] {
            return prop7i(k, kk);
        }
    }
    Err(Error::UnknownMap(name.to_string()))
}
