//! Truncated formal Laurent series over F_q, with `π = t`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Prec, RngCore, Tri, ValuedField};
use crate::fq::{FqCtx, FqElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LaurentJet {
    ZeroBall { prec: Prec },
    /// `t^v · Σ coeffs[i] t^i` with `coeffs[0] ≠ 0`. Inexact jets are known to
    /// absolute precision `v + coeffs.len()`; exact jets are Laurent
    /// polynomials with no trailing zeros.
    Resolved { v: i64, coeffs: Vec<u32>, exact: bool },
}

impl LaurentJet {
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            LaurentJet::ZeroBall { prec: Prec::Exact } | LaurentJet::Resolved { exact: true, .. }
        )
    }
}

/// F_q((t)) with working precision `N` (significant coefficients).
#[derive(Clone, Debug)]
pub struct LaurentCtx {
    fq: FqCtx,
    n: u32,
}

impl LaurentCtx {
    pub fn new(fq: FqCtx, n: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::PrecisionTooSmall(n));
        }
        Ok(LaurentCtx { fq, n })
    }

    pub fn fq(&self) -> &FqCtx {
        &self.fq
    }

    /// Longest exact polynomial kept before rounding to `N` coefficients.
    fn exact_cap(&self) -> usize {
        8 * self.n as usize
    }

    /// Build from coefficients at `v, v+1, ...`; `len` is the known length
    /// (`None` = exact).
    pub fn from_coeffs(&self, v: i64, mut c: Vec<u32>, exact: bool) -> LaurentJet {
        let known = c.len();
        let lead = c.iter().position(|x| *x != 0);
        let Some(lead) = lead else {
            return if exact {
                LaurentJet::ZeroBall { prec: Prec::Exact }
            } else {
                LaurentJet::ZeroBall { prec: Prec::Abs(v + known as i64) }
            };
        };
        c.drain(..lead);
        let v = v + lead as i64;
        if exact {
            while c.last() == Some(&0) {
                c.pop();
            }
            if c.len() <= self.exact_cap() {
                return LaurentJet::Resolved { v, coeffs: c, exact: true };
            }
            c.truncate(self.n as usize);
            return self.from_coeffs(v, c, false);
        }
        c.truncate(self.n as usize);
        LaurentJet::Resolved { v, coeffs: c, exact: false }
    }

    /// Coefficient list at absolute indices `from..to` (zeros outside support).
    fn window(&self, a: &LaurentJet, from: i64, to: i64) -> Vec<u32> {
        let mut out = vec![0u32; (to - from).max(0) as usize];
        if let LaurentJet::Resolved { v, coeffs, .. } = a {
            for (i, c) in coeffs.iter().enumerate() {
                let idx = v + i as i64;
                if idx >= from && idx < to {
                    out[(idx - from) as usize] = *c;
                }
            }
        }
        out
    }

    fn end(&self, a: &LaurentJet) -> Option<i64> {
        match a {
            LaurentJet::ZeroBall { prec } => prec.finite(),
            LaurentJet::Resolved { v, coeffs, exact } => (!exact).then(|| v + coeffs.len() as i64),
        }
    }

    fn series_mul(&self, a: &[u32], b: &[u32], len: usize) -> Vec<u32> {
        let mut out = vec![FqElem(0); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = self.fq.add(out[i + j], self.fq.mul(FqElem(*x), FqElem(*y)));
            }
        }
        out.into_iter().map(|e| e.0).collect()
    }

    /// Inverse of a unit power series modulo `t^len`.
    fn series_inv(&self, b: &[u32], len: usize) -> Vec<u32> {
        let inv0 = self.fq.inv(FqElem(b[0])).expect("unit series");
        let mut out = vec![0u32; len];
        out[0] = inv0.0;
        for k in 1..len {
            let mut s = FqElem(0);
            for j in 1..=k.min(b.len() - 1) {
                s = self.fq.add(s, self.fq.mul(FqElem(b[j]), FqElem(out[k - j])));
            }
            out[k] = self.fq.mul(self.fq.neg(s), inv0).0;
        }
        out
    }

    /// Exact polynomial division; `None` when `den ∤ num`.
    fn poly_div_exact(&self, num: &[u32], den: &[u32]) -> Option<Vec<u32>> {
        if den.len() > num.len() {
            return None;
        }
        let lead_inv = self.fq.inv(FqElem(*den.last()?)).ok()?;
        let mut r: Vec<FqElem> = num.iter().map(|x| FqElem(*x)).collect();
        let mut quo = vec![0u32; num.len() - den.len() + 1];
        for i in (0..quo.len()).rev() {
            let c = self.fq.mul(r[i + den.len() - 1], lead_inv);
            quo[i] = c.0;
            if c.0 != 0 {
                for (j, d) in den.iter().enumerate() {
                    r[i + j] = self.fq.sub(r[i + j], self.fq.mul(c, FqElem(*d)));
                }
            }
        }
        r.iter().all(|x| x.0 == 0).then_some(quo)
    }

    fn unit_and_len(&self, a: &LaurentJet) -> Option<(i64, Vec<u32>, Option<usize>)> {
        match a {
            LaurentJet::ZeroBall { .. } => None,
            LaurentJet::Resolved { v, coeffs, exact } => {
                Some((*v, coeffs.clone(), (!exact).then_some(coeffs.len())))
            }
        }
    }

    /// `x^p + t·y^p`, by reindexing coefficients.
    pub fn frobenius_pair(&self, x: &LaurentJet, y: &LaurentJet) -> LaurentJet {
        let p = self.fq.p() as i64;
        let px = self.end(x).map(|e| p * e);
        let py = self.end(y).map(|e| p * e + 1);
        let top = match (px, py) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut terms: Vec<(i64, u32)> = Vec::new();
        for (jet, offset) in [(x, 0), (y, 1)] {
            if let LaurentJet::Resolved { v, coeffs, .. } = jet {
                for (i, c) in coeffs.iter().enumerate() {
                    if *c != 0 {
                        terms.push((p * (v + i as i64) + offset, self.fq.frobenius(FqElem(*c)).0));
                    }
                }
            }
        }
        let terms: Vec<(i64, u32)> = terms.into_iter().filter(|(i, _)| top.is_none_or(|t| *i < t)).collect();
        match top {
            None => {
                let Some(lo) = terms.iter().map(|t| t.0).min() else {
                    return self.zero();
                };
                let hi = terms.iter().map(|t| t.0).max().unwrap();
                let mut c = vec![0u32; (hi - lo + 1) as usize];
                for (i, x) in terms {
                    c[(i - lo) as usize] = x;
                }
                self.from_coeffs(lo, c, true)
            }
            Some(top) => {
                let lo = terms.iter().map(|t| t.0).min().unwrap_or(top).min(top);
                let mut c = vec![0u32; (top - lo) as usize];
                for (i, x) in terms {
                    c[(i - lo) as usize] = x;
                }
                // keep the full reindexed window; it may exceed N coefficients
                let lead = c.iter().position(|x| *x != 0);
                match lead {
                    None => LaurentJet::ZeroBall { prec: Prec::Abs(top) },
                    Some(l) => LaurentJet::Resolved { v: lo + l as i64, coeffs: c[l..].to_vec(), exact: false },
                }
            }
        }
    }

    /// Membership of `z` in the image of the Frobenius pairing.
    pub fn frobenius_image(&self, z: &LaurentJet) -> Tri {
        let p = self.fq.p() as i64;
        if p == 2 {
            return Tri::In;
        }
        match z {
            LaurentJet::ZeroBall { prec: Prec::Exact } => Tri::In,
            LaurentJet::ZeroBall { .. } => Tri::Unknown,
            LaurentJet::Resolved { v, coeffs, exact } => {
                let bad = coeffs
                    .iter()
                    .enumerate()
                    .any(|(i, c)| *c != 0 && (v + i as i64).rem_euclid(p) > 1);
                if bad {
                    Tri::Out
                } else if *exact {
                    Tri::In
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    /// Recover `(x, y)` from `x^p + t·y^p`.
    pub fn frobenius_unpair(&self, z: &LaurentJet) -> Result<(LaurentJet, LaurentJet)> {
        let p = self.fq.p() as i64;
        let mut xs: Vec<(i64, u32)> = Vec::new();
        let mut ys: Vec<(i64, u32)> = Vec::new();
        if let LaurentJet::Resolved { v, coeffs, .. } = z {
            for (i, c) in coeffs.iter().enumerate() {
                let idx = v + i as i64;
                if *c == 0 {
                    continue;
                }
                let root = self.fq.frobenius_inv(FqElem(*c)).0;
                match idx.rem_euclid(p) {
                    0 => xs.push((idx.div_euclid(p), root)),
                    1 => ys.push(((idx - 1).div_euclid(p), root)),
                    _ => return Err(Error::NotInImage(idx)),
                }
            }
        }
        let build = |terms: Vec<(i64, u32)>, top: Option<i64>| -> LaurentJet {
            match top {
                None => {
                    let Some(lo) = terms.iter().map(|t| t.0).min() else {
                        return self.zero();
                    };
                    let hi = terms.iter().map(|t| t.0).max().unwrap();
                    let mut c = vec![0u32; (hi - lo + 1) as usize];
                    for (i, x) in terms {
                        c[(i - lo) as usize] = x;
                    }
                    self.from_coeffs(lo, c, true)
                }
                Some(top) => {
                    let lo = terms.iter().map(|t| t.0).min().unwrap_or(top).min(top);
                    let mut c = vec![0u32; (top - lo) as usize];
                    for (i, x) in terms {
                        c[(i - lo) as usize] = x;
                    }
                    self.from_coeffs(lo, c, false)
                }
            }
        };
        let end = self.end(z);
        if let Some(e) = end {
            let tx = (e + p - 1).div_euclid(p);
            let ty = (e - 1 + p - 1).div_euclid(p);
            if tx <= 0 && ty <= 0 && !matches!(z, LaurentJet::ZeroBall { .. }) {
                return Err(Error::PrecisionExhausted);
            }
            Ok((build(xs, Some(tx)), build(ys, Some(ty))))
        } else {
            Ok((build(xs, None), build(ys, None)))
        }
    }

    /// Newton iteration for the `n`-th root in `K^(k)`; requires `p ∤ n`.
    pub fn laurent_nth_root(&self, a: &LaurentJet, n: u32, k: u32) -> Result<LaurentJet> {
        let p = self.fq.p();
        if n % p == 0 {
            return Err(Error::WildExponent(n));
        }
        if n < 2 || k == 0 {
            return Err(Error::NotInDomain(format!("need n ≥ 2 and k > 0 (n = {n}, k = {k})")));
        }
        let (v, unit, len) = self
            .unit_and_len(a)
            .ok_or_else(|| Error::NotInDomain("zero has no root in K^(k)".into()))?;
        if v.rem_euclid(n as i64) != 0 {
            return Err(Error::NotInDomain(format!("valuation {v} not divisible by {n}")));
        }
        match self.unit_congruent_one(a, k) {
            Tri::In => {}
            Tri::Out => return Err(Error::NotInDomain(format!("unit part not ≡ 1 mod t^{k}"))),
            Tri::Unknown => return Err(Error::PrecisionExhausted),
        }
        let len = len.unwrap_or(self.n as usize).min(self.n as usize);
        let nf = self.fq.from_int(n as i64);
        let mut w = vec![0u32; len];
        w[0] = 1;
        for _ in 0..64 {
            let wn1 = self.series_pow(&w, n - 1, len);
            let wn = self.series_mul(&wn1, &w, len);
            let f: Vec<u32> = (0..len)
                .map(|i| self.fq.sub(FqElem(wn[i]), FqElem(*unit.get(i).unwrap_or(&0))).0)
                .collect();
            if f.iter().all(|c| *c == 0) {
                break;
            }
            let deriv: Vec<u32> = wn1.iter().map(|c| self.fq.mul(nf, FqElem(*c)).0).collect();
            let delta = self.series_mul(&f, &self.series_inv(&deriv, len), len);
            for i in 0..len {
                w[i] = self.fq.sub(FqElem(w[i]), FqElem(delta[i])).0;
            }
        }
        Ok(self.from_coeffs(v / n as i64, w, false))
    }

    fn series_pow(&self, a: &[u32], n: u32, len: usize) -> Vec<u32> {
        let mut acc = vec![0u32; len];
        acc[0] = 1;
        for _ in 0..n {
            acc = self.series_mul(&acc, a, len);
        }
        acc
    }

    /// `(v, ac)` of a resolved jet.
    pub fn laurent_val_ac(&self, a: &LaurentJet) -> Result<(i64, FqElem)> {
        match a {
            LaurentJet::ZeroBall { .. } => Err(Error::ValuationUndecidable),
            LaurentJet::Resolved { v, coeffs, .. } => Ok((*v, FqElem(coeffs[0]))),
        }
    }
}

impl ValuedField for LaurentCtx {
    type Elem = LaurentJet;

    fn prime(&self) -> u32 {
        self.fq.p()
    }

    fn residue_size(&self) -> u32 {
        self.fq.order()
    }

    fn precision(&self) -> u32 {
        self.n
    }

    fn characteristic(&self) -> u32 {
        self.fq.p()
    }

    fn describe(&self) -> String {
        format!("laurent:{}:{}", self.fq.p(), self.fq.degree())
    }

    fn zero(&self) -> LaurentJet {
        LaurentJet::ZeroBall { prec: Prec::Exact }
    }

    fn from_int(&self, n: i64) -> LaurentJet {
        self.from_coeffs(0, vec![self.fq.from_int(n).0], true)
    }

    fn pi_pow(&self, k: i64) -> LaurentJet {
        LaurentJet::Resolved { v: k, coeffs: vec![1], exact: true }
    }

    fn lift_residue(&self, r: u32) -> LaurentJet {
        self.from_coeffs(0, vec![r], true)
    }

    fn add(&self, a: &LaurentJet, b: &LaurentJet) -> LaurentJet {
        if let (Some(pa), Some(pb)) = (self.zero_bound(a), self.zero_bound(b)) {
            return LaurentJet::ZeroBall { prec: pa.min(pb) };
        }
        let va = match a {
            LaurentJet::Resolved { v, .. } => *v,
            _ => i64::MAX,
        };
        let vb = match b {
            LaurentJet::Resolved { v, .. } => *v,
            _ => i64::MAX,
        };
        let v0 = va.min(vb);
        let exact = a.is_exact() && b.is_exact();
        let top = if exact {
            let e = |j: &LaurentJet| match j {
                LaurentJet::Resolved { v, coeffs, .. } => v + coeffs.len() as i64,
                _ => v0,
            };
            e(a).max(e(b))
        } else {
            let ea = self.end(a).unwrap_or(i64::MAX);
            let eb = self.end(b).unwrap_or(i64::MAX);
            // cap after cancellation: `from_coeffs` keeps N digits from the
            // leading term of the sum
            ea.min(eb).min(v0 + self.exact_cap() as i64)
        };
        if top <= v0 {
            return LaurentJet::ZeroBall { prec: Prec::Abs(top) };
        }
        let wa = self.window(a, v0, top);
        let wb = self.window(b, v0, top);
        let s = wa.iter().zip(&wb).map(|(x, y)| self.fq.add(FqElem(*x), FqElem(*y)).0).collect();
        self.from_coeffs(v0, s, exact)
    }

    fn neg(&self, a: &LaurentJet) -> LaurentJet {
        match a {
            LaurentJet::ZeroBall { .. } => a.clone(),
            LaurentJet::Resolved { v, coeffs, exact } => LaurentJet::Resolved {
                v: *v,
                coeffs: coeffs.iter().map(|c| self.fq.neg(FqElem(*c)).0).collect(),
                exact: *exact,
            },
        }
    }

    fn mul(&self, a: &LaurentJet, b: &LaurentJet) -> LaurentJet {
        use LaurentJet::*;
        match (a, b) {
            (ZeroBall { prec: Prec::Exact }, _) | (_, ZeroBall { prec: Prec::Exact }) => self.zero(),
            (ZeroBall { prec: Prec::Abs(pa) }, ZeroBall { prec: Prec::Abs(pb) }) => ZeroBall { prec: Prec::Abs(pa + pb) },
            (ZeroBall { prec: Prec::Abs(pz) }, Resolved { v, .. }) | (Resolved { v, .. }, ZeroBall { prec: Prec::Abs(pz) }) => {
                ZeroBall { prec: Prec::Abs(pz + v) }
            }
            (Resolved { v: va, coeffs: ca, exact: ea }, Resolved { v: vb, coeffs: cb, exact: eb }) => {
                if *ea && *eb {
                    let len = ca.len() + cb.len() - 1;
                    return self.from_coeffs(va + vb, self.series_mul(ca, cb, len), true);
                }
                let la = if *ea { self.n as usize } else { ca.len() };
                let lb = if *eb { self.n as usize } else { cb.len() };
                let len = la.min(lb).min(self.n as usize);
                self.from_coeffs(va + vb, self.series_mul(ca, cb, len), false)
            }
        }
    }

    fn div(&self, a: &LaurentJet, b: &LaurentJet) -> Result<LaurentJet> {
        use LaurentJet::*;
        let (vb, cb, eb) = match b {
            ZeroBall { prec: Prec::Exact } => return Err(Error::DivisionByZero),
            ZeroBall { .. } => return Err(Error::DivisionUndecidable),
            Resolved { v, coeffs, exact } => (*v, coeffs, *exact),
        };
        Ok(match a {
            ZeroBall { prec } => ZeroBall { prec: prec.shift(-vb) },
            Resolved { v: va, coeffs: ca, exact: ea } => {
                if *ea && eb {
                    if let Some(q) = self.poly_div_exact(ca, cb) {
                        return Ok(self.from_coeffs(va - vb, q, true));
                    }
                }
                let la = if *ea { self.n as usize } else { ca.len() };
                let lb = if eb { self.n as usize } else { cb.len() };
                let len = la.min(lb).min(self.n as usize);
                let inv = self.series_inv(cb, len);
                self.from_coeffs(va - vb, self.series_mul(ca, &inv, len), false)
            }
        })
    }

    fn shift(&self, a: &LaurentJet, k: i64) -> LaurentJet {
        match a {
            LaurentJet::ZeroBall { prec } => LaurentJet::ZeroBall { prec: prec.shift(k) },
            LaurentJet::Resolved { v, coeffs, exact } => {
                LaurentJet::Resolved { v: v + k, coeffs: coeffs.clone(), exact: *exact }
            }
        }
    }

    fn prec(&self, a: &LaurentJet) -> Prec {
        match self.end(a) {
            Some(e) => Prec::Abs(e),
            None => Prec::Exact,
        }
    }

    fn zero_bound(&self, a: &LaurentJet) -> Option<Prec> {
        match a {
            LaurentJet::ZeroBall { prec } => Some(*prec),
            _ => None,
        }
    }

    fn valuation(&self, a: &LaurentJet) -> Result<i64> {
        self.laurent_val_ac(a).map(|(v, _)| v)
    }

    fn ac(&self, a: &LaurentJet) -> Result<u32> {
        match a {
            LaurentJet::ZeroBall { prec: Prec::Exact } => Ok(0),
            _ => self.laurent_val_ac(a).map(|(_, c)| c.0),
        }
    }

    fn relative_len(&self, a: &LaurentJet) -> Option<i64> {
        match a {
            LaurentJet::Resolved { coeffs, exact: false, .. } => Some(coeffs.len() as i64),
            _ => None,
        }
    }

    fn unit_congruent_one(&self, a: &LaurentJet, k: u32) -> Tri {
        match a {
            LaurentJet::ZeroBall { prec: Prec::Exact } => Tri::Out,
            LaurentJet::ZeroBall { .. } => Tri::Unknown,
            LaurentJet::Resolved { coeffs, exact, .. } => {
                let k = k as usize;
                let visible = if *exact { k } else { coeffs.len().min(k) };
                let ok = (0..visible).all(|i| {
                    let c = coeffs.get(i).copied().unwrap_or(0);
                    c == if i == 0 { 1 } else { 0 }
                });
                if !ok {
                    Tri::Out
                } else if visible >= k {
                    Tri::In
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    fn unit_is_nth_power(&self, a: &LaurentJet, n: u32) -> Tri {
        let (coeffs, exact) = match a {
            LaurentJet::ZeroBall { prec: Prec::Exact } => return Tri::Out,
            LaurentJet::ZeroBall { .. } => return Tri::Unknown,
            LaurentJet::Resolved { coeffs, exact, .. } => (coeffs, *exact),
        };
        let (wild, tame) = split_exponent(n, self.fq.p());
        if !self.fq.is_nth_power(FqElem(coeffs[0]), tame) {
            return Tri::Out;
        }
        if wild == 1 {
            return Tri::In;
        }
        let bad = coeffs.iter().enumerate().any(|(i, c)| *c != 0 && i as u32 % wild != 0);
        if bad {
            Tri::Out
        } else if exact {
            Tri::In
        } else {
            Tri::Unknown
        }
    }

    fn is_power_mod(&self, u: &LaurentJet, n: u32, len: u32) -> bool {
        let LaurentJet::Resolved { coeffs, .. } = u else {
            return false;
        };
        let (wild, tame) = split_exponent(n, self.fq.p());
        self.fq.is_nth_power(FqElem(coeffs[0]), tame)
            && coeffs
                .iter()
                .take(len as usize)
                .enumerate()
                .all(|(i, c)| *c == 0 || i as u32 % wild == 0)
    }

    fn int_valuation(&self, n: u32) -> Option<u32> {
        (n % self.fq.p() != 0).then_some(0)
    }

    fn nth_root(&self, a: &LaurentJet, n: u32, k: u32) -> Result<LaurentJet> {
        self.laurent_nth_root(a, n, k)
    }

    fn ball(&self, index: u64, depth: u32) -> LaurentJet {
        let q = self.fq.order() as u64;
        let mut x = index;
        let c = (0..depth)
            .map(|_| {
                let d = (x % q) as u32;
                x /= q;
                d
            })
            .collect();
        self.from_coeffs(0, c, false)
    }

    fn truncate(&self, a: &LaurentJet, m: i64) -> LaurentJet {
        if !self.prec(a).reaches(m + 1) {
            return a.clone();
        }
        match a {
            LaurentJet::ZeroBall { .. } => LaurentJet::ZeroBall { prec: Prec::Abs(m) },
            LaurentJet::Resolved { v, .. } => {
                if m <= *v {
                    LaurentJet::ZeroBall { prec: Prec::Abs(m) }
                } else {
                    self.from_coeffs(*v, self.window(a, *v, m), false)
                }
            }
        }
    }

    fn random_lift(&self, a: &LaurentJet, target: i64, rng: &mut dyn RngCore) -> LaurentJet {
        let q = self.fq.order();
        match (a, self.end(a)) {
            (LaurentJet::ZeroBall { .. }, Some(m)) if m < target => {
                let len = ((target - m) as u32).min(self.n);
                let c = (0..len).map(|_| rng.gen_range(0..q)).collect();
                self.from_coeffs(m, c, false)
            }
            (LaurentJet::Resolved { v, coeffs, .. }, Some(e)) if e < target => {
                let new_len = ((target - v) as usize).min(self.n as usize).max(coeffs.len());
                let mut c = coeffs.clone();
                while c.len() < new_len {
                    c.push(rng.gen_range(0..q));
                }
                self.from_coeffs(*v, c, false)
            }
            _ => a.clone(),
        }
    }

    fn random_with_valuation(&self, v: i64, len: u32, exact: bool, rng: &mut dyn RngCore) -> LaurentJet {
        let q = self.fq.order();
        let len = len.clamp(1, self.n);
        let mut c = vec![rng.gen_range(1..q)];
        c.extend((1..len).map(|_| rng.gen_range(0..q)));
        self.from_coeffs(v, c, exact)
    }

    fn path(&self, a: &LaurentJet, cap: i64) -> Option<Vec<u32>> {
        let top = self.end(a).unwrap_or(cap).min(cap);
        if let LaurentJet::Resolved { v, .. } = a {
            if *v < 0 {
                return None;
            }
        }
        Some(self.window(a, 0, top.max(0)))
    }

    fn residue_generator(&self) -> Option<u32> {
        (self.fq.degree() > 1).then(|| self.fq.generator().0)
    }

    fn pair(&self, x: &LaurentJet, y: &LaurentJet) -> Option<LaurentJet> {
        Some(self.frobenius_pair(x, y))
    }

    fn unpair(&self, z: &LaurentJet) -> Option<Result<(LaurentJet, LaurentJet)>> {
        Some(self.frobenius_unpair(z))
    }

    fn pair_image(&self, z: &LaurentJet) -> Option<Tri> {
        Some(self.frobenius_image(z))
    }

    fn render(&self, a: &LaurentJet) -> String {
        match a {
            LaurentJet::ZeroBall { prec: Prec::Exact } => "0".into(),
            LaurentJet::ZeroBall { prec: Prec::Abs(m) } => format!("O(t^{m})"),
            LaurentJet::Resolved { v, coeffs, exact } => {
                let mut terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| {
                        let k = v + i as i64;
                        let cs = self.fq.render(FqElem(*c));
                        let mono = if k == 1 { "t".to_string() } else { format!("t^{k}") };
                        match (k, *c) {
                            (0, _) => cs,
                            (_, 1) => mono,
                            _ if cs.contains('+') => format!("({cs})*{mono}"),
                            _ => format!("{cs}*{mono}"),
                        }
                    })
                    .collect();
                if !exact {
                    terms.push(format!("O(t^{})", v + coeffs.len() as i64));
                }
                terms.join(" + ")
            }
        }
    }
}

/// Split `n = wild · tame` with `wild` a power of `p` and `p ∤ tame`.
fn split_exponent(mut n: u32, p: u32) -> (u32, u32) {
    let mut wild = 1;
    while n % p == 0 {
        n /= p;
        wild *= p;
    }
    (wild, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, e: u32, n: u32) -> LaurentCtx {
        LaurentCtx::new(FqCtx::new(p, e, None).unwrap(), n).unwrap()
    }

    fn poly(k: &LaurentCtx, terms: &[(i64, u32)]) -> LaurentJet {
        terms.iter().fold(k.zero(), |acc, (i, c)| k.add(&acc, &k.shift(&k.lift_residue(*c), *i)))
    }

    #[test]
    fn laurent_arith_examples() {
        let k = field(2, 1, 6);
        let x = k.truncate(&poly(&k, &[(0, 1), (1, 1)]), 6);
        assert_eq!(k.add(&x, &x), LaurentJet::ZeroBall { prec: Prec::Abs(6) });
        assert_eq!(k.mul(&k.pi_pow(-1), &k.pi_pow(2)), k.pi_pow(1));
        let sq = k.mul(&x, &x);
        assert_eq!(sq, k.truncate(&poly(&k, &[(0, 1), (2, 1)]), 6));
    }

    #[test]
    fn val_ac_examples() {
        let k3 = field(3, 1, 6);
        let x = poly(&k3, &[(2, 1), (3, 1)]);
        assert_eq!(k3.laurent_val_ac(&x).unwrap(), (2, FqElem(1)));
        let k4 = field(2, 2, 6);
        let a = k4.fq().generator();
        let y = k4.shift(&k4.lift_residue(a.0), -1);
        assert_eq!(k4.laurent_val_ac(&y).unwrap(), (-1, a));
        assert!(k4.laurent_val_ac(&LaurentJet::ZeroBall { prec: Prec::Abs(2) }).is_err());
    }

    #[test]
    fn frobenius_pairing_examples() {
        let k2 = field(2, 1, 8);
        let x = poly(&k2, &[(0, 1), (1, 1)]);
        let y = poly(&k2, &[(1, 1)]);
        let z = k2.frobenius_pair(&x, &y);
        assert_eq!(z, poly(&k2, &[(0, 1), (2, 1), (3, 1)]));
        assert_eq!(k2.frobenius_unpair(&z).unwrap(), (x, y));
        assert_eq!(k2.frobenius_pair(&k2.zero(), &k2.zero()), k2.zero());

        let k3 = field(3, 1, 8);
        let x = poly(&k3, &[(2, 1)]);
        let y = poly(&k3, &[(2, 1), (3, 1)]);
        // (t²+t³)³ = t⁶ + t⁹ in characteristic 3
        assert_eq!(k3.frobenius_pair(&x, &y), poly(&k3, &[(6, 1), (7, 1), (10, 1)]));
        assert_eq!(k3.frobenius_unpair(&poly(&k3, &[(2, 1)])).unwrap_err(), Error::NotInImage(2));
        let zb = LaurentJet::ZeroBall { prec: Prec::Abs(6) };
        let (a, b) = k3.frobenius_unpair(&zb).unwrap();
        assert!(!a.is_exact() && matches!(a, LaurentJet::ZeroBall { .. }));
        assert!(matches!(b, LaurentJet::ZeroBall { .. }));
    }

    #[test]
    fn pairing_matches_naive_powers() {
        let k = field(3, 2, 8);
        let x = poly(&k, &[(0, 4), (1, 7), (3, 2)]);
        let y = poly(&k, &[(-1, 5), (2, 1)]);
        let naive = k.add(&k.pow(&x, 3), &k.mul(&k.pi_pow(1), &k.pow(&y, 3)));
        assert_eq!(k.frobenius_pair(&x, &y), naive);
    }

    #[test]
    fn roots() {
        let k3 = field(3, 1, 6);
        let a = k3.truncate(&poly(&k3, &[(0, 1), (1, 1)]), 6);
        let r = k3.laurent_nth_root(&a, 2, 1).unwrap();
        // Newton oracle: (1 + 2t + t² + ...)² ≡ 1 + t
        assert!(k3.agree(&k3.truncate(&r, 3), &poly(&k3, &[(0, 1), (1, 2), (2, 1)]), 3));
        assert!(k3.agree(&k3.mul(&r, &r), &a, 6));

        let k2 = field(2, 1, 6);
        let a2 = k2.truncate(&poly(&k2, &[(0, 1), (1, 1)]), 6);
        assert_eq!(k2.laurent_nth_root(&a2, 2, 1).unwrap_err(), Error::WildExponent(2));
        let c = k2.laurent_nth_root(&a2, 3, 1).unwrap();
        assert!(k2.agree(&k2.pow(&c, 3), &a2, 6));
    }

    #[test]
    fn render_examples() {
        let k = field(2, 2, 6);
        let a = k.fq().generator().0;
        let a1 = k.fq().add(FqElem(a), FqElem(1)).0;
        let x = k.truncate(&poly(&k, &[(-1, a1), (2, a)]), 5);
        assert_eq!(k.render(&x), "(a+1)*t^-1 + a*t^2 + O(t^5)");
    }
}
