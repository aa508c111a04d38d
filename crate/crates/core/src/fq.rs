//! Finite fields F_q, q = p^e, in a polynomial basis.
//!
//! An element is encoded as the integer `Σ c_i p^i` of its coefficient vector
//! over the generator `a`, so `0` and `1` encode zero and one.

use crate::error::{Error, Result};
use crate::padic::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub u32);

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;
/// Largest supported field size (5^8).
pub const MAX_ORDER: u64 = 390_625;
const TABLE_LIMIT: u32 = 256;

#[derive(Clone, Debug)]
pub struct FqCtx {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    mul_table: Option<Vec<u32>>,
}

/// Modulus used when none is supplied.
pub fn default_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    let m: &[u32] = match (p, e) {
        (_, 1) => return Some(vec![0, 1]),
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (3, 2) => &[1, 0, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 2) => &[2, 0, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    // den is monic
    let mut r = num.to_vec();
    let d = den.len() - 1;
    while r.len() > d {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - d;
            for (i, c) in den[..d].iter().enumerate() {
                r[off + i] = (r[off + i] + (p - lead) * c % p) % p;
            }
        }
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len() - 1;
    // try every monic divisor of degree 1..=e/2
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                cand.push((x % p as u64) as u32);
                x /= p as u64;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).iter().all(|c| *c == 0) {
                return false;
            }
        }
    }
    true
}

impl FqCtx {
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 || e > MAX_DEGREE {
            return Err(Error::InvalidField(format!("extension degree {e} outside 1..=8")));
        }
        let order = (p as u64).pow(e);
        if order > MAX_ORDER {
            return Err(Error::InvalidField(format!("q = {order} exceeds 5^8")));
        }
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(p, e).unwrap_or_else(|| first_irreducible(p, e)),
        };
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 || modulus.iter().any(|c| *c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {e} with coefficients below {p}"
            )));
        }
        if e > 1 && !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(p));
        }
        let mut ctx = FqCtx { p, e, q: order as u32, modulus, mul_table: None };
        if ctx.q <= TABLE_LIMIT {
            let q = ctx.q;
            let table = (0..q * q).map(|i| ctx.mul_slow(i / q, i % q)).collect();
            ctx.mul_table = Some(table);
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.e)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> FqElem {
        FqElem(c.iter().rev().fold(0, |acc, d| acc * self.p + d % self.p))
    }

    /// The generator `a` (equal to `0 + 1·a`; for `e = 1` the modulus `x`
    /// makes it zero, so `a` is only meaningful for `e > 1`).
    pub fn generator(&self) -> FqElem {
        if self.e == 1 {
            FqElem(0)
        } else {
            FqElem(self.p)
        }
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.e == 1 {
            return FqElem((a.0 + b.0) % self.p);
        }
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.from_coeffs(&s)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.e == 1 {
            return FqElem((self.p - a.0) % self.p);
        }
        let s: Vec<u32> = self.coeffs(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.from_coeffs(&s)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (ca, cb) = (self.coeffs(FqElem(a)), self.coeffs(FqElem(b)));
        let mut prod = vec![0u32; 2 * self.e as usize];
        for (i, x) in ca.iter().enumerate() {
            for (j, y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r).0
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.mul_table {
            Some(t) => FqElem(t[(a.0 * self.q + b.0) as usize]),
            None if self.e == 1 => FqElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            None => FqElem(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut acc = FqElem(1);
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// `x ↦ x^(p^(e-1))`, the inverse of Frobenius.
    pub fn frobenius_inv(&self, a: FqElem) -> FqElem {
        self.pow(a, (self.p as u64).pow(self.e - 1))
    }

    /// Is `a` an `n`-th power in F_q? (`0` counts as one.)
    pub fn is_nth_power(&self, a: FqElem, n: u32) -> bool {
        if a.0 == 0 {
            return true;
        }
        let g = gcd(n as u64, self.q as u64 - 1);
        self.pow(a, (self.q as u64 - 1) / g) == FqElem(1)
    }

    /// Polynomial in `a`, highest degree first: `a+1`, `2*a^2+a`, `0`.
    pub fn render(&self, x: FqElem) -> String {
        let c = self.coeffs(x);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    (0..count)
        .map(|idx| {
            let mut m: Vec<u32> = Vec::new();
            let mut x = idx;
            for _ in 0..e {
                m.push((x % p as u64) as u32);
                x /= p as u64;
            }
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial of every degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_examples() {
        let f4 = FqCtx::new(2, 2, None).unwrap();
        let a = f4.generator();
        let a1 = f4.add(a, FqElem(1));
        assert_eq!(f4.mul(a, a), a1);
        assert_eq!(f4.frobenius(a), a1);
        assert_eq!(f4.frobenius_inv(a1), a);
        assert_eq!(f4.render(a1), "a+1");
    }

    #[test]
    fn f9_order() {
        let f9 = FqCtx::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        // a has order 4 modulo a² + 1; a + 1 is primitive
        assert_eq!(f9.pow(f9.generator(), 4), FqElem(1));
        let g = f9.add(f9.generator(), FqElem(1));
        assert_eq!(f9.pow(g, 8), FqElem(1));
        assert_ne!(f9.pow(g, 4), FqElem(1));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // a² + 1 = (a + 1)² over F_2
        assert_eq!(FqCtx::new(2, 2, Some(vec![1, 0, 1])).unwrap_err(), Error::ReducibleModulus(2));
        assert!(FqCtx::new(2, 9, None).is_err());
        assert_eq!(FqCtx::new(2, 2, None).unwrap().inv(FqElem(0)).unwrap_err(), Error::ZeroInverse);
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for (p, e) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (3, 4), (2, 8)] {
            let f = FqCtx::new(p, e, None).unwrap();
            assert!(is_irreducible(f.modulus(), p), "{p}^{e}");
        }
    }

    #[test]
    fn frobenius_inverse_is_exhaustive_identity() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (2, 4)] {
            let f = FqCtx::new(p, e, None).unwrap();
            for x in 0..f.order() {
                let x = FqElem(x);
                assert_eq!(f.frobenius_inv(f.frobenius(x)), x);
                assert_eq!(f.frobenius(f.frobenius_inv(x)), x);
            }
        }
    }

    #[test]
    fn inverses_and_field_axioms() {
        let f = FqCtx::new(2, 3, None).unwrap();
        for x in 1..8 {
            let x = FqElem(x);
            assert_eq!(f.mul(x, f.inv(x).unwrap()), FqElem(1));
            for y in 0..8 {
                let y = FqElem(y);
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.sub(f.add(x, y), y), x);
            }
        }
        let big = FqCtx::new(5, 4, None).unwrap();
        let g = big.generator();
        assert_eq!(big.mul(g, big.inv(g).unwrap()), FqElem(1));
        assert_eq!(big.pow(g, 624 * 2), big.pow(g, 624 * 3));
    }
}
