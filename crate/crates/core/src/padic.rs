//! Truncated arithmetic in Q_p.
//!
//! A resolved jet is `p^v · u` where the unit `u` is known modulo `p^len`
//! (`len ≤ N`), or exactly when the expansion is finite. Digits are never
//! stored; they are read off the unit on demand, little-endian.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Prec, RngCore, Tri, ValuedField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PadicJet {
    /// Indistinguishable from zero below absolute precision `prec`;
    /// `Prec::Exact` is zero itself.
    ZeroBall { prec: Prec },
    /// `p^v · unit`, `p ∤ unit`. `len = None` marks an exact (finite) element,
    /// whose unit may be negative; otherwise `0 < unit < p^len`.
    Resolved { v: i64, unit: i128, len: Option<u32> },
}

impl PadicJet {
    pub fn is_zero_ball(&self) -> bool {
        matches!(self, PadicJet::ZeroBall { .. })
    }

    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            PadicJet::ZeroBall { prec: Prec::Exact } | PadicJet::Resolved { len: None, .. }
        )
    }
}

/// Residue field element of Q_p: an integer in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueElem(pub u32);

/// Q_p with `π = p` and working precision `N`.
#[derive(Clone, Debug)]
pub struct PadicCtx {
    p: u32,
    n: u32,
    pows: Vec<i128>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

fn mul_mod(a: i128, b: i128, m: i128) -> i128 {
    // operands are reduced below m < 2^63, so the product fits in u128
    let a = a.rem_euclid(m) as u128;
    let b = b.rem_euclid(m) as u128;
    ((a * b) % m as u128) as i128
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    debug_assert_eq!(g, 1);
    x.rem_euclid(m)
}

impl PadicCtx {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n < 4 {
            return Err(Error::PrecisionTooSmall(n));
        }
        let mut pows = vec![1i128];
        loop {
            let next = pows.last().unwrap() * p as i128;
            if next >= 1i128 << 63 {
                break;
            }
            pows.push(next);
        }
        // headroom of two digits for Hensel lifting
        if (pows.len() as u32) < n + 3 {
            return Err(Error::PrecisionOverflow { p, n });
        }
        Ok(PadicCtx { p, n, pows })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub(crate) fn pw(&self, k: u32) -> i128 {
        self.pows[k as usize]
    }

    fn max_window(&self) -> u32 {
        self.pows.len() as u32 - 1
    }

    /// `v_p(n)` for a nonzero integer.
    pub fn vp_int(&self, mut n: i128) -> u32 {
        let p = self.p as i128;
        let mut v = 0;
        while n != 0 && n % p == 0 {
            n /= p;
            v += 1;
        }
        v
    }

    fn resolved(&self, v: i64, s: i128, len: u32) -> PadicJet {
        let s = s.rem_euclid(self.pw(len));
        if s == 0 {
            return PadicJet::ZeroBall { prec: Prec::Abs(v + len as i64) };
        }
        let t = self.vp_int(s);
        PadicJet::Resolved { v: v + t as i64, unit: s / self.pw(t), len: Some(len - t) }
    }

    fn exact(&self, v: i64, u: i128) -> PadicJet {
        if u == 0 {
            return PadicJet::ZeroBall { prec: Prec::Exact };
        }
        let t = self.vp_int(u);
        let u = u / self.pw(t);
        if u.abs() < self.pw(self.n) {
            PadicJet::Resolved { v: v + t as i64, unit: u, len: None }
        } else {
            self.resolved(v + t as i64, u, self.n)
        }
    }

    /// The jet of `num/den` with `N` significant digits.
    pub fn from_rational(&self, num: i64, den: i64) -> Result<PadicJet> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        if num == 0 {
            return Ok(PadicJet::ZeroBall { prec: Prec::Abs(self.n as i64) });
        }
        let (mut a, mut b) = (num as i128, den as i128);
        let va = self.vp_int(a);
        let vb = self.vp_int(b);
        a /= self.pw(va);
        b /= self.pw(vb);
        let m = self.pw(self.n);
        let u = mul_mod(a, inv_mod(b, m), m);
        Ok(self.resolved(va as i64 - vb as i64, u, self.n))
    }

    /// Exact integer.
    pub fn int(&self, n: i64) -> PadicJet {
        self.exact(0, n as i128)
    }

    /// Known unit digits (little-endian). Exact negative units are expanded
    /// to `N` digits.
    pub fn digits(&self, a: &PadicJet) -> Vec<u32> {
        match a {
            PadicJet::ZeroBall { .. } => Vec::new(),
            PadicJet::Resolved { unit, len, .. } => {
                let (mut u, count) = match len {
                    Some(l) => (*unit, *l),
                    None if *unit > 0 => (*unit, u32::MAX),
                    None => (unit.rem_euclid(self.pw(self.n)), self.n),
                };
                let mut out = Vec::new();
                let p = self.p as i128;
                while (out.len() as u32) < count && (u != 0 || count != u32::MAX) {
                    out.push((u % p) as u32);
                    u /= p;
                }
                out
            }
        }
    }

    /// Unit part modulo `p^len` together with `len` (`N` for exact jets).
    fn unit_window(&self, v_unit: i128, len: Option<u32>) -> (i128, u32) {
        let l = len.unwrap_or(self.n);
        (v_unit.rem_euclid(self.pw(l)), l)
    }

    pub fn angular_component(&self, a: &PadicJet) -> Result<ResidueElem> {
        self.ac(a).map(ResidueElem)
    }

    /// Inverse of `x ↦ x^n` from `K^(k)` onto `P_n^(k + v_p(n))`, by Newton
    /// iteration seeded at `π^{v/n}`.
    pub fn nth_root_hensel(&self, a: &PadicJet, n: u32, k: u32) -> Result<PadicJet> {
        if n < 2 {
            return Err(Error::NotInDomain(format!("root index {n} < 2")));
        }
        let s = self.vp_int(n as i128);
        if k <= s {
            return Err(Error::NotInDomain(format!("k = {k} must exceed v_p({n}) = {s}")));
        }
        let (v, unit, len) = match a {
            PadicJet::ZeroBall { .. } => return Err(Error::NotInDomain("zero has no root in K^(k)".into())),
            PadicJet::Resolved { v, unit, len } => (*v, *unit, *len),
        };
        if v.rem_euclid(n as i64) != 0 {
            return Err(Error::NotInDomain(format!("valuation {v} not divisible by {n}")));
        }
        match self.unit_congruent_one(a, k + s) {
            Tri::In => {}
            Tri::Out => {
                return Err(Error::NotInDomain(format!("unit part not ≡ 1 mod p^{}", k + s)))
            }
            Tri::Unknown => return Err(Error::PrecisionExhausted),
        }
        let len = len.unwrap_or(self.n);
        if len <= s {
            return Err(Error::PrecisionExhausted);
        }
        let work = (len + s).min(self.max_window());
        let out_len = (len - s).min(work - s);
        let m = self.pw(work);
        let m_out = self.pw(work - s);
        let u = unit.rem_euclid(m);
        let cofactor = n as i128 / self.pw(s);
        let mut w: i128 = 1;
        for _ in 0..200 {
            let f = (self.pow_mod(w, n, m) - u).rem_euclid(m);
            let reduced = f / self.pw(s);
            let deriv = mul_mod(cofactor, self.pow_mod(w, n - 1, m_out), m_out);
            let delta = mul_mod(reduced, inv_mod(deriv, m_out), m_out);
            if delta == 0 {
                break;
            }
            w = (w - delta).rem_euclid(m);
        }
        if out_len == 0 {
            return Err(Error::PrecisionExhausted);
        }
        Ok(self.resolved(v / n as i64, w, out_len))
    }

    fn pow_mod(&self, base: i128, mut e: u32, m: i128) -> i128 {
        let mut acc = 1i128 % m;
        let mut b = base.rem_euclid(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b, m);
            }
            b = mul_mod(b, b, m);
            e >>= 1;
        }
        acc
    }

    fn brute_power_residue(&self, u: i128, n: u32, m: u32) -> bool {
        let modulus = self.pw(m);
        let u = u.rem_euclid(modulus);
        (0..modulus)
            .filter(|y| y % self.p as i128 != 0)
            .any(|y| self.pow_mod(y, n, modulus) == u)
    }
}

impl ValuedField for PadicCtx {
    type Elem = PadicJet;

    fn prime(&self) -> u32 {
        self.p
    }

    fn residue_size(&self) -> u32 {
        self.p
    }

    fn precision(&self) -> u32 {
        self.n
    }

    fn characteristic(&self) -> u32 {
        0
    }

    fn describe(&self) -> String {
        format!("qp:{}", self.p)
    }

    fn zero(&self) -> PadicJet {
        PadicJet::ZeroBall { prec: Prec::Exact }
    }

    fn from_int(&self, n: i64) -> PadicJet {
        self.int(n)
    }

    fn pi_pow(&self, k: i64) -> PadicJet {
        PadicJet::Resolved { v: k, unit: 1, len: None }
    }

    fn lift_residue(&self, r: u32) -> PadicJet {
        self.int(r as i64)
    }

    fn add(&self, a: &PadicJet, b: &PadicJet) -> PadicJet {
        use PadicJet::*;
        match (a, b) {
            (ZeroBall { prec: pa }, ZeroBall { prec: pb }) => ZeroBall { prec: (*pa).min(*pb) },
            (ZeroBall { prec }, x) | (x, ZeroBall { prec }) => match prec {
                Prec::Exact => x.clone(),
                Prec::Abs(m) => self.truncate(x, *m),
            },
            (
                Resolved { v: va, unit: ua, len: la },
                Resolved { v: vb, unit: ub, len: lb },
            ) => {
                let v0 = (*va).min(*vb);
                if la.is_none() && lb.is_none() {
                    let ea = (va - v0) as u32;
                    let eb = (vb - v0) as u32;
                    if ea.max(eb) < self.pows.len() as u32 {
                        let sum = ua
                            .checked_mul(self.pw(ea))
                            .and_then(|x| ub.checked_mul(self.pw(eb)).and_then(|y| x.checked_add(y)));
                        if let Some(s) = sum {
                            return self.exact(v0, s);
                        }
                    }
                }
                let prec_a = la.map(|l| va + l as i64).unwrap_or(i64::MAX);
                let prec_b = lb.map(|l| vb + l as i64).unwrap_or(i64::MAX);
                // keep the full overlap so cancellation does not eat digits;
                // the result is cut back to N digits after normalizing
                let top = prec_a.min(prec_b).min(v0 + self.max_window() as i64);
                let len = (top - v0) as u32;
                let m = self.pw(len);
                let term = |v: i64, u: i128| {
                    let e = (v - v0) as u32;
                    if e >= len {
                        0
                    } else {
                        mul_mod(u, self.pw(e), m)
                    }
                };
                match self.resolved(v0, term(*va, *ua) + term(*vb, *ub), len) {
                    Resolved { v, unit, len: Some(l) } if l > self.n => {
                        Resolved { v, unit: unit.rem_euclid(self.pw(self.n)), len: Some(self.n) }
                    }
                    r => r,
                }
            }
        }
    }

    fn neg(&self, a: &PadicJet) -> PadicJet {
        match a {
            PadicJet::ZeroBall { .. } => a.clone(),
            PadicJet::Resolved { v, unit, len: None } => PadicJet::Resolved { v: *v, unit: -unit, len: None },
            PadicJet::Resolved { v, unit, len: Some(l) } => self.resolved(*v, -unit, *l),
        }
    }

    fn mul(&self, a: &PadicJet, b: &PadicJet) -> PadicJet {
        use PadicJet::*;
        match (a, b) {
            (ZeroBall { prec: Prec::Exact }, _) | (_, ZeroBall { prec: Prec::Exact }) => self.zero(),
            (ZeroBall { prec: Prec::Abs(pa) }, ZeroBall { prec: Prec::Abs(pb) }) => {
                ZeroBall { prec: Prec::Abs(pa + pb) }
            }
            (ZeroBall { prec: Prec::Abs(pz) }, Resolved { v, .. })
            | (Resolved { v, .. }, ZeroBall { prec: Prec::Abs(pz) }) => {
                ZeroBall { prec: Prec::Abs(pz + v) }
            }
            (
                Resolved { v: va, unit: ua, len: la },
                Resolved { v: vb, unit: ub, len: lb },
            ) => {
                if la.is_none() && lb.is_none() {
                    if let Some(prod) = ua.checked_mul(*ub) {
                        return self.exact(va + vb, prod);
                    }
                }
                let len = la.unwrap_or(self.n).min(lb.unwrap_or(self.n));
                let m = self.pw(len);
                self.resolved(va + vb, mul_mod(*ua, *ub, m), len)
            }
        }
    }

    fn div(&self, a: &PadicJet, b: &PadicJet) -> Result<PadicJet> {
        use PadicJet::*;
        let (vb, ub, lb) = match b {
            ZeroBall { prec: Prec::Exact } => return Err(Error::DivisionByZero),
            ZeroBall { .. } => return Err(Error::DivisionUndecidable),
            Resolved { v, unit, len } => (*v, *unit, *len),
        };
        Ok(match a {
            ZeroBall { prec } => ZeroBall { prec: prec.shift(-vb) },
            Resolved { v: va, unit: ua, len: la } => {
                if la.is_none() && lb.is_none() && ua % ub == 0 {
                    return Ok(self.exact(va - vb, ua / ub));
                }
                let len = la.unwrap_or(self.n).min(lb.unwrap_or(self.n));
                let m = self.pw(len);
                self.resolved(va - vb, mul_mod(*ua, inv_mod(ub.rem_euclid(m), m), m), len)
            }
        })
    }

    fn shift(&self, a: &PadicJet, k: i64) -> PadicJet {
        match a {
            PadicJet::ZeroBall { prec } => PadicJet::ZeroBall { prec: prec.shift(k) },
            PadicJet::Resolved { v, unit, len } => PadicJet::Resolved { v: v + k, unit: *unit, len: *len },
        }
    }

    fn prec(&self, a: &PadicJet) -> Prec {
        match a {
            PadicJet::ZeroBall { prec } => *prec,
            PadicJet::Resolved { len: None, .. } => Prec::Exact,
            PadicJet::Resolved { v, len: Some(l), .. } => Prec::Abs(v + *l as i64),
        }
    }

    fn zero_bound(&self, a: &PadicJet) -> Option<Prec> {
        match a {
            PadicJet::ZeroBall { prec } => Some(*prec),
            _ => None,
        }
    }

    fn valuation(&self, a: &PadicJet) -> Result<i64> {
        match a {
            PadicJet::ZeroBall { .. } => Err(Error::ValuationUndecidable),
            PadicJet::Resolved { v, .. } => Ok(*v),
        }
    }

    fn ac(&self, a: &PadicJet) -> Result<u32> {
        match a {
            PadicJet::ZeroBall { prec: Prec::Exact } => Ok(0),
            PadicJet::ZeroBall { .. } => Err(Error::ValuationUndecidable),
            PadicJet::Resolved { unit, .. } => Ok(unit.rem_euclid(self.p as i128) as u32),
        }
    }

    fn relative_len(&self, a: &PadicJet) -> Option<i64> {
        match a {
            PadicJet::Resolved { len: Some(l), .. } => Some(*l as i64),
            _ => None,
        }
    }

    fn unit_congruent_one(&self, a: &PadicJet, k: u32) -> Tri {
        match a {
            PadicJet::ZeroBall { prec: Prec::Exact } => Tri::Out,
            PadicJet::ZeroBall { .. } => Tri::Unknown,
            PadicJet::Resolved { unit, len, .. } => {
                let known = len.unwrap_or(u32::MAX).min(k);
                let m = self.pw(known.min(self.max_window()));
                let ok = (unit - 1).rem_euclid(m) == 0;
                if !ok {
                    Tri::Out
                } else if known >= k {
                    Tri::In
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    fn unit_is_nth_power(&self, a: &PadicJet, n: u32) -> Tri {
        let (unit, len) = match a {
            PadicJet::ZeroBall { prec: Prec::Exact } => return Tri::Out,
            PadicJet::ZeroBall { .. } => return Tri::Unknown,
            PadicJet::Resolved { unit, len, .. } => (*unit, len.unwrap_or(u32::MAX)),
        };
        let hensel = 2 * self.vp_int(n as i128) + 1;
        let m = hensel.min(len);
        let ok = self.brute_power_residue(unit, n, m);
        if !ok {
            Tri::Out
        } else if m >= hensel {
            Tri::In
        } else {
            Tri::Unknown
        }
    }

    fn is_power_mod(&self, u: &PadicJet, n: u32, len: u32) -> bool {
        let unit = match u {
            PadicJet::Resolved { unit, .. } => *unit,
            PadicJet::ZeroBall { .. } => return false,
        };
        let hensel = 2 * self.vp_int(n as i128) + 1;
        self.brute_power_residue(unit, n, len.min(hensel))
    }

    fn int_valuation(&self, n: u32) -> Option<u32> {
        Some(self.vp_int(n as i128))
    }

    fn nth_root(&self, a: &PadicJet, n: u32, k: u32) -> Result<PadicJet> {
        self.nth_root_hensel(a, n, k)
    }

    fn ball(&self, index: u64, depth: u32) -> PadicJet {
        let c = index as i128;
        if c == 0 {
            PadicJet::ZeroBall { prec: Prec::Abs(depth as i64) }
        } else {
            self.resolved(0, c, depth)
        }
    }

    fn truncate(&self, a: &PadicJet, m: i64) -> PadicJet {
        if !self.prec(a).reaches(m + 1) {
            return a.clone();
        }
        match a {
            PadicJet::ZeroBall { .. } => PadicJet::ZeroBall { prec: Prec::Abs(m) },
            PadicJet::Resolved { v, unit, .. } => {
                if m <= *v {
                    PadicJet::ZeroBall { prec: Prec::Abs(m) }
                } else {
                    let (u, _) = self.unit_window(*unit, Some((m - v) as u32));
                    self.resolved(*v, u, (m - v) as u32)
                }
            }
        }
    }

    fn random_lift(&self, a: &PadicJet, target: i64, rng: &mut dyn RngCore) -> PadicJet {
        match a {
            PadicJet::ZeroBall { prec: Prec::Abs(m) } if *m < target => {
                let len = ((target - m) as u32).min(self.n);
                let s = rng.gen_range(0..self.pw(len));
                self.resolved(*m, s, len)
            }
            PadicJet::Resolved { v, unit, len: Some(l) } if v + (*l as i64) < target => {
                let new_len = ((target - v) as u32).min(self.n).max(*l);
                let extra = rng.gen_range(0..self.pw(new_len - l));
                self.resolved(*v, unit + extra * self.pw(*l), new_len)
            }
            _ => a.clone(),
        }
    }

    fn random_with_valuation(&self, v: i64, len: u32, exact: bool, rng: &mut dyn RngCore) -> PadicJet {
        let len = len.clamp(1, self.n);
        let lead = rng.gen_range(1..self.p) as i128;
        let rest = rng.gen_range(0..self.pw(len - 1));
        let u = lead + rest * self.p as i128;
        if exact {
            self.exact(v, u)
        } else {
            self.resolved(v, u, len)
        }
    }

    fn path(&self, a: &PadicJet, cap: i64) -> Option<Vec<u32>> {
        let top = match self.prec(a) {
            Prec::Abs(m) => m.min(cap),
            Prec::Exact => cap,
        };
        match a {
            PadicJet::ZeroBall { .. } => Some(vec![0; top.max(0) as usize]),
            PadicJet::Resolved { v, unit, .. } => {
                if *v < 0 {
                    return None;
                }
                let mut out = vec![0u32; (*v).min(top).max(0) as usize];
                if top > *v {
                    let l = ((top - v) as u32).min(self.max_window());
                    let mut u = unit.rem_euclid(self.pw(l));
                    for _ in 0..(top - v) {
                        out.push((u % self.p as i128) as u32);
                        u /= self.p as i128;
                    }
                }
                Some(out)
            }
        }
    }

    fn render(&self, a: &PadicJet) -> String {
        let p = self.p;
        let tail = |m: i64| format!("O({p}^{m})");
        match a {
            PadicJet::ZeroBall { prec: Prec::Exact } => "0".to_string(),
            PadicJet::ZeroBall { prec: Prec::Abs(m) } => tail(*m),
            PadicJet::Resolved { v, unit, len } => {
                let digits = self.digits(a);
                let mut terms: Vec<String> = digits
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| **d != 0)
                    .map(|(i, d)| {
                        let k = v + i as i64;
                        if k == 0 {
                            format!("{d}")
                        } else {
                            format!("{d}*{p}^{k}")
                        }
                    })
                    .collect();
                match len {
                    Some(l) => terms.push(tail(v + *l as i64)),
                    None if *unit < 0 => terms.push(tail(v + self.n as i64)),
                    None => {}
                }
                terms.join(" + ")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u32, n: u32) -> PadicCtx {
        PadicCtx::new(p, n).unwrap()
    }

    /// Brute-force modular inverse, independent of the extended-gcd path.
    fn brute_inverse(a: i128, m: i128) -> i128 {
        (0..m).find(|x| (a * x) % m == 1).unwrap()
    }

    #[test]
    fn context_rejects_bad_parameters() {
        assert_eq!(PadicCtx::new(4, 8).unwrap_err(), Error::NotPrime(4));
        assert_eq!(PadicCtx::new(5, 3).unwrap_err(), Error::PrecisionTooSmall(3));
        assert!(matches!(PadicCtx::new(2, 70), Err(Error::PrecisionOverflow { .. })));
    }

    #[test]
    fn from_rational_examples() {
        let k = q(5, 4);
        let j = k.from_rational(50, 1).unwrap();
        assert_eq!(k.valuation(&j).unwrap(), 2);
        assert_eq!(k.digits(&j), vec![2, 0, 0, 0]);

        let k2 = q(5, 4);
        let third = k2.truncate(&k2.from_rational(1, 3).unwrap(), 2);
        assert_eq!(brute_inverse(3, 25), 17);
        assert_eq!(third, PadicJet::Resolved { v: 0, unit: 17, len: Some(2) });
        assert_eq!(k2.digits(&third), vec![2, 3]);

        let x = k.from_rational(17, 4).unwrap();
        let oracle = (17 * brute_inverse(4, 625)) % 625;
        assert_eq!(oracle, 473);
        assert_eq!(x, PadicJet::Resolved { v: 0, unit: 473, len: Some(4) });
        assert_eq!(k.from_rational(0, 7).unwrap(), PadicJet::ZeroBall { prec: Prec::Abs(4) });
        assert_eq!(k.from_rational(1, 0).unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn arithmetic_examples() {
        let k = q(5, 4);
        let one = k.from_rational(1, 1).unwrap();
        let m1 = k.from_rational(-1, 1).unwrap();
        assert_eq!(k.add(&one, &m1), PadicJet::ZeroBall { prec: Prec::Abs(4) });

        let a = PadicJet::Resolved { v: 2, unit: 2, len: Some(1) };
        let b = PadicJet::Resolved { v: -1, unit: 3, len: Some(1) };
        // 2·3 = 6 = 1 + 1·5: one certified digit at v = 1
        let prod = k.mul(&a, &b);
        assert_eq!(k.valuation(&prod).unwrap(), 1);
        assert_eq!(k.digits(&prod), vec![1]);
        let wide = k.mul(
            &PadicJet::Resolved { v: 2, unit: 2, len: Some(2) },
            &PadicJet::Resolved { v: -1, unit: 3, len: Some(2) },
        );
        assert_eq!(k.digits(&wide), vec![1, 1]);

        let three = k.from_rational(3, 1).unwrap();
        assert_eq!(k.div(&one, &three).unwrap(), k.from_rational(1, 3).unwrap());
        assert_eq!(
            k.div(&one, &PadicJet::ZeroBall { prec: Prec::Abs(3) }).unwrap_err(),
            Error::DivisionUndecidable
        );
    }

    #[test]
    fn valuation_and_ac() {
        let k = q(5, 6);
        let fifty = k.from_rational(50, 1).unwrap();
        assert_eq!(k.valuation(&fifty).unwrap(), 2);
        assert_eq!(k.valuation(&k.pi_pow(1)).unwrap(), 1);
        assert_eq!(
            k.valuation(&PadicJet::ZeroBall { prec: Prec::Abs(3) }).unwrap_err(),
            Error::ValuationUndecidable
        );
        assert_eq!(k.angular_component(&fifty).unwrap(), ResidueElem(2));
        assert_eq!(k.ac(&k.from_rational(1, 5).unwrap()).unwrap(), 1);
        assert_eq!(k.ac(&k.pi_pow(1)).unwrap(), 1);
        assert_eq!(k.ac(&k.zero()).unwrap(), 0);
        assert!(k.ac(&PadicJet::ZeroBall { prec: Prec::Abs(6) }).is_err());
    }

    #[test]
    fn hensel_roots() {
        let k7 = q(7, 6);
        let r = k7.nth_root_hensel(&k7.int(8), 2, 1).unwrap();
        // Newton oracle: 29² = 841 = 8 + 17·49
        assert_eq!(29 * 29 % 49, 8);
        assert!(k7.agree(&r, &k7.int(29), 2));

        let k3 = q(3, 6);
        let r = k3.nth_root_hensel(&k3.int(16), 2, 1).unwrap();
        assert!(k3.agree(&r, &k3.int(4), 6));

        let k2 = q(2, 8);
        let r = k2.nth_root_hensel(&k2.int(25), 2, 2).unwrap();
        assert!(k2.agree(&r, &k2.int(5), 7));
        assert_eq!(k2.prec(&r), Prec::Abs(7));

        assert!(matches!(k7.nth_root_hensel(&k7.int(7), 2, 1), Err(Error::NotInDomain(_))));
        assert!(matches!(k7.nth_root_hensel(&k7.int(3), 2, 1), Err(Error::NotInDomain(_))));
        assert!(matches!(k2.nth_root_hensel(&k2.int(9), 2, 1), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn rendering() {
        let k = q(5, 6);
        let x = k.truncate(&k.from_rational(50, 1).unwrap(), 6);
        assert_eq!(k.render(&x), "2*5^2 + O(5^6)");
        assert_eq!(k.render(&PadicJet::ZeroBall { prec: Prec::Abs(3) }), "O(5^3)");
        assert_eq!(k.render(&k.int(30)), "1*5^1 + 1*5^2");
    }

    #[test]
    fn exactness_is_tracked() {
        let k = q(5, 8);
        let pi2 = k.pi_pow(2);
        assert_eq!(k.sub(&pi2, &k.int(25)), k.zero());
        let x = k.add(&k.pi_pow(1), &k.pi_pow(3));
        assert!(x.is_exact());
        assert!(!k.div(&k.int(1), &k.int(3)).unwrap().is_exact());
        assert_eq!(k.div(&k.int(150), &k.int(6)).unwrap(), k.int(25));
    }

    #[test]
    fn balls_enumerate_residues() {
        let k = q(3, 6);
        let reps: Vec<_> = (0..9).map(|i| k.ball(i, 2)).collect();
        assert_eq!(reps[0], PadicJet::ZeroBall { prec: Prec::Abs(2) });
        assert_eq!(reps[3], PadicJet::Resolved { v: 1, unit: 1, len: Some(1) });
        assert_eq!(k.path(&reps[7], 10).unwrap(), vec![1, 2]);
    }
}
