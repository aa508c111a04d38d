//! Coset representatives for power subgroups, and decision procedures for
//! the existential formulas defining `R` and `R^(1)`.

use crate::defset::{membership, DefSet};
use crate::error::{Error, Result};
use crate::field::{Tri, ValuedField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetKind {
    /// `R* = ⋃ α R^(1)`, one `α` per nonzero residue.
    UnitsByAcone,
    /// `R^(k) = ⋃ α P̄_2^(k')` with `k' = k + v(2)`.
    AconeBySquares(u32),
    /// `R^(k) = ⋃ α P̄_3^(k')` with `k' = k + v(3)`.
    AconeByCubes(u32),
}

/// Unit residues enumerated above this count make the grouping give up.
const UNIT_ENUM_CAP: u64 = 1 << 16;

/// Canonical coset representatives, in enumeration order: `π^a · u` with
/// `a` ascending and `u` the smallest unit (as a digit string) of its class.
pub fn coset_reps<F: ValuedField>(k: &F, kind: CosetKind) -> Result<Vec<F::Elem>> {
    let (n, kk) = match kind {
        CosetKind::UnitsByAcone => {
            return Ok((1..k.residue_size()).map(|r| k.lift_residue(r)).collect());
        }
        CosetKind::AconeBySquares(kk) => (2, kk),
        CosetKind::AconeByCubes(kk) => (3, kk),
    };
    if kk == 0 {
        return Err(Error::NotInDomain("coset grouping needs k ≥ 1".into()));
    }
    // v(n) = ∞ in characteristic dividing n: the subgroup has no finite
    // Hensel level, so keep k' = k and let the grouping fail to stabilize.
    let vn = k.int_valuation(n);
    let kp = kk + vn.unwrap_or(0);
    if let Some(v) = vn {
        if kk <= v {
            return Err(Error::NotInDomain(format!("need k > v({n}) = {v}, got k = {kk}")));
        }
    }
    let level = kp + 2;
    let reps = group(k, n, kk, kp, level)?;
    let wider = group(k, n, kk, kp, level + 2)?;
    if reps.len() != wider.len() {
        return Err(Error::CosetIndexOverflow(format!(
            "{} classes mod π^{level}, {} mod π^{}",
            reps.len(),
            wider.len(),
            level + 2
        )));
    }
    Ok(reps)
}

/// Number `l` with `2^l` square classes, as in the coset decomposition.
pub fn square_class_exponent(count: usize) -> Option<u32> {
    count.is_power_of_two().then(|| count.trailing_zeros())
}

fn group<F: ValuedField>(k: &F, n: u32, kk: u32, kp: u32, level: u32) -> Result<Vec<F::Elem>> {
    let q = k.residue_size() as u64;
    let free = level.saturating_sub(kk);
    let count = q.checked_pow(free).filter(|c| *c <= UNIT_ENUM_CAP);
    let Some(count) = count else {
        return Err(Error::CosetIndexOverflow(format!("more than {UNIT_ENUM_CAP} unit residues mod π^{level}")));
    };
    // units u ≡ 1 mod π^k, known mod π^level
    let one = k.from_int(1);
    let units: Vec<F::Elem> = (0..count)
        .map(|i| {
            let tail = crate::defset::center(k, i, free);
            k.add(&one, &k.shift(&tail, kk as i64))
        })
        .collect();
    let mut reps: Vec<F::Elem> = Vec::new();
    let mut classes: Vec<(u32, F::Elem)> = Vec::new();
    for a in 0..n {
        for u in &units {
            let same = classes.iter().any(|(b, w)| {
                *b == a && {
                    let ratio = k.div(u, w).expect("unit");
                    k.unit_congruent_one(&ratio, kp) == Tri::In && k.is_power_mod(&ratio, n, level)
                }
            });
            if !same {
                classes.push((a, u.clone()));
                reps.push(k.shift(u, a as i64));
            }
        }
    }
    Ok(reps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    /// `∃y: y² = 1 + πx²`
    RingViaSquares,
    /// `∃y: y³ = 1 + πx³`
    RingViaCubes,
    /// `⋁_{n=0}^{q-2} ∃y: tⁿ y^{q-1} = x`
    AconeViaPowers,
}

/// Decide an existential formula at `x` through valuation divisibility and
/// Hensel-criterion power tests on the witness equation.
pub fn formula_membership<F: ValuedField>(k: &F, formula: Formula, x: &F::Elem) -> Tri {
    let n_th_power = |w: &F::Elem, n: u32| -> Tri {
        // y = 0 is a witness for w = 0
        match k.zero_bound(w) {
            Some(crate::field::Prec::Exact) => Tri::In,
            _ => membership(k, &DefSet::NthPowers(n), std::slice::from_ref(w)),
        }
    };
    match formula {
        Formula::RingViaSquares | Formula::RingViaCubes => {
            let n = if formula == Formula::RingViaSquares { 2 } else { 3 };
            let w = k.add(&k.from_int(1), &k.shift(&k.pow(x, n), 1));
            n_th_power(&w, n)
        }
        Formula::AconeViaPowers => {
            let m = k.residue_size() - 1;
            let mut acc = Tri::Out;
            for e in 0..m.max(1) {
                let w = k.shift(x, -(e as i64));
                acc = acc.or(if m == 1 { Tri::In } else { n_th_power(&w, m) });
                if acc == Tri::In {
                    break;
                }
            }
            acc
        }
    }
}
