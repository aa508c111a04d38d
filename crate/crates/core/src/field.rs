//! The valued-field interface shared by the p-adic and Laurent backends.
//!
//! Every element is a *jet*: a ball `x + π^prec R` described by a valuation,
//! a finite digit sequence and a precision. A jet is exact when the ball has
//! radius zero, which is how finite expansions such as `π²` or `0` stay
//! distinguishable from "something very close to them".

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;

/// Guaranteed absolute precision of a jet.
///
/// `Abs(m)` means the element is known modulo `π^m`; `Exact` means it is a
/// finite expansion known completely. Variant order makes `Exact` the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Prec {
    Abs(i64),
    Exact,
}

impl Prec {
    pub fn shift(self, k: i64) -> Prec {
        match self {
            Prec::Abs(m) => Prec::Abs(m + k),
            Prec::Exact => Prec::Exact,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Prec::Abs(m) => Some(m),
            Prec::Exact => None,
        }
    }

    pub fn is_exact(self) -> bool {
        self == Prec::Exact
    }

    /// True when the precision reaches at least `m`.
    pub fn reaches(self, m: i64) -> bool {
        self >= Prec::Abs(m)
    }
}

impl fmt::Display for Prec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prec::Abs(m) => write!(f, "{m}"),
            Prec::Exact => f.write_str("exact"),
        }
    }
}

/// Tri-state membership answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Tri {
    In,
    Out,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::In
        } else {
            Tri::Out
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Out, _) | (_, Tri::Out) => Tri::Out,
            (Tri::In, Tri::In) => Tri::In,
            _ => Tri::Unknown,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::In, _) | (_, Tri::In) => Tri::In,
            (Tri::Out, Tri::Out) => Tri::Out,
            _ => Tri::Unknown,
        }
    }
}

impl std::ops::Not for Tri {
    type Output = Tri;

    fn not(self) -> Tri {
        match self {
            Tri::In => Tri::Out,
            Tri::Out => Tri::In,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

/// A discretely valued field with finite residue field, uniformizer `π` and
/// angular component `ac(x) = (π^{-v(x)} x) mod π`.
///
/// Residue field elements are encoded as integers in `[0, q)`; `1` always
/// encodes the identity.
pub trait ValuedField: Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// Residue characteristic.
    fn prime(&self) -> u32;
    /// Size `q` of the residue field.
    fn residue_size(&self) -> u32;
    /// Working precision `N`: the number of significant digits kept.
    fn precision(&self) -> u32;
    /// Characteristic of the field itself (0 for Q_p).
    fn characteristic(&self) -> u32;
    fn describe(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Exact `π^k`.
    fn pi_pow(&self, k: i64) -> Self::Elem;
    /// Exact lift of a residue: a constant of valuation 0 (or zero).
    fn lift_residue(&self, r: u32) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Multiplication by `π^k`; never loses precision.
    fn shift(&self, a: &Self::Elem, k: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        let mut acc = self.from_int(1);
        let mut base = a.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn prec(&self, a: &Self::Elem) -> Prec;
    /// `Some(prec)` when `a` is a zero ball (or exact zero).
    fn zero_bound(&self, a: &Self::Elem) -> Option<Prec>;
    fn valuation(&self, a: &Self::Elem) -> Result<i64>;
    fn ac(&self, a: &Self::Elem) -> Result<u32>;
    /// Number of known unit digits (`None` for exact jets).
    fn relative_len(&self, a: &Self::Elem) -> Option<i64>;

    /// Does the unit part of `a` satisfy `u ≡ 1 mod π^k`?
    fn unit_congruent_one(&self, a: &Self::Elem, k: u32) -> Tri;
    /// Is the unit part of `a` an `n`-th power of a unit?
    fn unit_is_nth_power(&self, a: &Self::Elem, n: u32) -> Tri;
    /// Is the unit residue `u mod π^len` (given as a unit jet) an `n`-th power
    /// modulo `π^len`? Used for coset grouping.
    fn is_power_mod(&self, u: &Self::Elem, n: u32, len: u32) -> bool;
    /// `v(n)` for the integer `n` viewed in the field; `None` when `n = 0` in
    /// the field (characteristic divides `n`).
    fn int_valuation(&self, n: u32) -> Option<u32>;
    /// The unique `y ∈ K^(k)` with `y^n = a`.
    fn nth_root(&self, a: &Self::Elem, n: u32, k: u32) -> Result<Self::Elem>;

    /// Residue class number `index` of `R / π^depth`, as a jet of absolute
    /// precision `depth`. Indices run over `[0, q^depth)`.
    fn ball(&self, index: u64, depth: u32) -> Self::Elem;
    /// Reduce to absolute precision `m` (no-op if already coarser).
    fn truncate(&self, a: &Self::Elem, m: i64) -> Self::Elem;
    /// Fill the digits of `a` between its precision and absolute precision
    /// `target` uniformly at random. Exact inputs are returned unchanged.
    fn random_lift(&self, a: &Self::Elem, target: i64, rng: &mut dyn RngCore) -> Self::Elem;
    /// Random element with the given valuation and `len` uniform unit digits.
    fn random_with_valuation(
        &self,
        v: i64,
        len: u32,
        exact: bool,
        rng: &mut dyn RngCore,
    ) -> Self::Elem;
    /// Absolute digits of `a ∈ R` at indices `0..min(prec, cap)`.
    fn path(&self, a: &Self::Elem, cap: i64) -> Option<Vec<u32>>;
    fn render(&self, a: &Self::Elem) -> String;

    /// Residue code of the generator `a` of `F_q` over `F_p`, if `q ≠ p`.
    fn residue_generator(&self) -> Option<u32> {
        None
    }

    /// `x^p + π·y^p` when the field has characteristic `p` (the pairing of
    /// the plane into the line); `None` otherwise.
    fn pair(&self, _x: &Self::Elem, _y: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Inverse of [`ValuedField::pair`] on its image.
    fn unpair(&self, _z: &Self::Elem) -> Option<Result<(Self::Elem, Self::Elem)>> {
        None
    }

    /// Membership in the image of [`ValuedField::pair`].
    fn pair_image(&self, _z: &Self::Elem) -> Option<Tri> {
        None
    }

    /// Certified congruence `a ≡ b mod π^m`.
    fn agree(&self, a: &Self::Elem, b: &Self::Elem, m: i64) -> bool {
        if !self.prec(a).reaches(m) || !self.prec(b).reaches(m) {
            return false;
        }
        let d = self.sub(a, b);
        match self.zero_bound(&d) {
            Some(p) => p.reaches(m),
            None => self.valuation(&d).map(|v| v >= m).unwrap_or(false),
        }
    }

    /// Precision used when comparing against `a`: its own precision, or
    /// `max(v, 0) + N` for exact jets.
    fn effective_prec(&self, a: &Self::Elem) -> i64 {
        match self.prec(a) {
            Prec::Abs(m) => m,
            Prec::Exact => {
                let v = self.valuation(a).unwrap_or(0).max(0);
                v + self.precision() as i64
            }
        }
    }
}

pub use rand::RngCore;

/// Draws a valuation `v ≥ min` with `P(v = min + j) = 2^{-(j+1)}`.
pub fn geometric_valuation(min: i64, rng: &mut dyn RngCore) -> i64 {
    let mut v = min;
    while rng.gen_bool(0.5) && v < min + 62 {
        v += 1;
    }
    v
}
