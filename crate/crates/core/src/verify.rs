//! Exhaustive and randomized verification of piecewise bijections.
//!
//! The exhaustive sweep runs over the exact centers of all depth-`d` balls of
//! both spaces. Piece boundaries are thin sets (a coordinate equal to 0, a
//! valuation equal to some value), so exact centers are what classification
//! needs; ball behaviour is checked separately by truncating each center to
//! its ball, mapping the ball, and comparing against random lifts.
//!
//! Random points draw each valuation geometrically with parameter 1/2 above
//! the space's minimum and fill `N` digits uniformly.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::defset::{center, DEFAULT_REP_CAP};
use crate::error::{Error, Result};
use crate::field::{geometric_valuation, Prec, Tri, ValuedField};
use crate::fieldspec::FieldSpec;
use crate::maps::{build, Direction, PiecewiseMap, Point, Space};

pub const CHECKS: [&str; 6] = ["partition", "disjointness", "injectivity", "surjectivity", "roundtrip", "ball_soundness"];

/// Failures kept verbatim in a report; the rest are only counted.
pub const FAILURE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckStat {
    pub run: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    pub point: String,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecidable,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undecidable => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub map: String,
    pub field: String,
    pub depth: u32,
    pub samples: u64,
    pub seed: u64,
    pub precision: u32,
    pub domain_count: u64,
    pub codomain_count: u64,
    pub excluded_domain: u64,
    pub excluded_codomain: u64,
    pub checks: BTreeMap<String, CheckStat>,
    pub failures: Vec<Failure>,
    pub failure_count: u64,
    pub undecidable: u64,
    /// Part of `undecidable` met in the exhaustive sweep; the rest comes
    /// from random samples whose images outran the working precision.
    pub sweep_undecidable: u64,
    /// First few points whose membership the precision could not decide.
    pub undecidable_points: Vec<String>,
    pub status: Status,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

struct Acc {
    checks: BTreeMap<String, CheckStat>,
    failures: Vec<Failure>,
    failure_count: u64,
    undecidable: u64,
    undecided: Vec<String>,
}

impl Acc {
    fn new() -> Self {
        let checks = CHECKS.iter().map(|c| (c.to_string(), CheckStat::default())).collect();
        Acc { checks, failures: Vec::new(), failure_count: 0, undecidable: 0, undecided: Vec::new() }
    }

    fn ok(&mut self, check: &str) {
        self.checks.get_mut(check).expect("known check").run += 1;
    }

    fn undecided(&mut self, point: String) {
        self.undecidable += 1;
        if self.undecided.len() < FAILURE_CAP {
            self.undecided.push(point);
        }
    }

    fn fail(&mut self, check: &str, point: String, detail: String) {
        let c = self.checks.get_mut(check).expect("known check");
        c.run += 1;
        c.failed += 1;
        self.failure_count += 1;
        if self.failures.len() < FAILURE_CAP {
            self.failures.push(Failure { check: check.into(), point, detail });
        }
    }
}

pub fn render_point<F: ValuedField>(k: &F, x: &Point<F::Elem>) -> String {
    let coords: Vec<String> = x.coords.iter().map(|c| k.render(c)).collect();
    if x.tag == 0 {
        format!("({})", coords.join(", "))
    } else {
        format!("#{} ({})", x.tag, coords.join(", "))
    }
}

/// Exact centers of the depth-`depth` balls of every tag of `space`, each
/// coordinate running over `π^min_val · R / π^(min_val+depth)`.
pub fn space_grid<F: ValuedField>(k: &F, space: Space, depth: u32) -> Result<Vec<Point<F::Elem>>> {
    let per = (k.residue_size() as u64).checked_pow(depth).ok_or(Error::EnumerationOverflow(u64::MAX))?;
    let total = per
        .checked_pow(space.dim as u32)
        .and_then(|t| t.checked_mul(space.tags as u64))
        .ok_or(Error::EnumerationOverflow(u64::MAX))?;
    if total > DEFAULT_REP_CAP {
        return Err(Error::EnumerationOverflow(total));
    }
    let centers: Vec<F::Elem> = (0..per).map(|i| k.shift(&center(k, i, depth), space.min_val)).collect();
    let mut out = Vec::with_capacity(total as usize);
    for tag in 0..space.tags {
        for idx in 0..total / space.tags as u64 {
            let mut rest = idx;
            let coords = (0..space.dim)
                .map(|_| {
                    let c = centers[(rest % per) as usize].clone();
                    rest /= per;
                    c
                })
                .collect();
            out.push(Point::tagged(tag, coords));
        }
    }
    Ok(out)
}

/// A random point of `space`: uniform tag, geometric valuations, `N` digits.
pub fn random_point<F: ValuedField>(k: &F, space: Space, rng: &mut dyn RngCore) -> Point<F::Elem> {
    let tag = rng.gen_range(0..space.tags);
    let n = k.precision();
    let coords = (0..space.dim)
        .map(|_| {
            // an occasional exact zero keeps thin pieces in play
            if rng.gen_ratio(1, 16) {
                k.zero()
            } else {
                k.random_with_valuation(geometric_valuation(space.min_val, rng), n, false, rng)
            }
        })
        .collect();
    Point::tagged(tag, coords)
}

/// Precision at which `x` is compared: the least effective precision of its
/// coordinates.
pub fn point_prec<F: ValuedField>(k: &F, x: &Point<F::Elem>) -> i64 {
    x.coords.iter().map(|c| k.effective_prec(c)).min().unwrap_or(0)
}

/// Absolute precision a roundtrip of `x` is held to before the map's loss:
/// each coordinate's effective precision, capped at `N` (or `v + N` below
/// `R`) since arithmetic keeps `N` digits.
pub fn budget<F: ValuedField>(k: &F, x: &Point<F::Elem>) -> i64 {
    let n = k.precision() as i64;
    x.coords
        .iter()
        .map(|c| {
            let v = k.valuation(c).unwrap_or(0).min(0);
            k.effective_prec(c).min(n + v)
        })
        .min()
        .unwrap_or(n)
}

/// Whether `a` and `b` agree coordinatewise modulo `π^m`.
pub fn points_agree<F: ValuedField>(k: &F, a: &Point<F::Elem>, b: &Point<F::Elem>, m: i64) -> bool {
    a.tag == b.tag
        && a.coords.len() == b.coords.len()
        && a.coords.iter().zip(&b.coords).all(|(x, y)| k.agree(x, y, m))
}

/// Certified inequality: some coordinate differs below both precisions.
fn certified_distinct<F: ValuedField>(k: &F, a: &Point<F::Elem>, b: &Point<F::Elem>) -> bool {
    if a.tag != b.tag {
        return true;
    }
    a.coords.iter().zip(&b.coords).any(|(x, y)| {
        let d = k.sub(x, y);
        if k.zero_bound(&d).is_some() {
            return false;
        }
        match (k.valuation(&d), k.prec(x).min(k.prec(y))) {
            (Ok(v), Prec::Abs(m)) => v < m,
            (Ok(_), Prec::Exact) => true,
            _ => false,
        }
    })
}

fn truncate_point<F: ValuedField>(k: &F, x: &Point<F::Elem>, m: i64) -> Point<F::Elem> {
    Point::tagged(x.tag, x.coords.iter().map(|c| k.truncate(c, m)).collect())
}

fn lift_point<F: ValuedField>(k: &F, x: &Point<F::Elem>, target: i64, rng: &mut dyn RngCore) -> Point<F::Elem> {
    Point::tagged(x.tag, x.coords.iter().map(|c| k.random_lift(c, target, rng)).collect())
}

fn is_precision_error(e: &Error) -> bool {
    matches!(
        e,
        Error::PrecisionExhausted
            | Error::DivisionUndecidable
            | Error::ValuationUndecidable
            | Error::UndecidableMembership
            | Error::PrecisionTooSmall(..)
    )
}

/// Map the ball `B` of `x` at absolute depth `d` through the piece of `x`
/// and compare with the images of `x` itself and of a random lift of `B`.
fn ball_check<F: ValuedField>(
    map: &PiecewiseMap<F>,
    piece: usize,
    x: &Point<F::Elem>,
    fx: &Point<F::Elem>,
    d: i64,
    rng: &mut dyn RngCore,
    acc: &mut Acc,
) {
    let k = &*map.field;
    let p = &map.pieces[piece];
    let ball = truncate_point(k, x, d);
    if (p.domain)(&ball) != Tri::In {
        return;
    }
    let j = match (p.fwd)(&ball) {
        Ok(j) => j,
        Err(e) if is_precision_error(&e) => return,
        Err(e) => {
            acc.fail("ball_soundness", render_point(k, &ball), format!("piece {} fails on its ball: {e}", p.name));
            return;
        }
    };
    let m = point_prec(k, &j);
    let lift = lift_point(k, &ball, point_prec(k, x).max(d + k.precision() as i64), rng);
    let fl = if (p.domain)(&lift) == Tri::In { (p.fwd)(&lift).ok() } else { None };
    let bad = |y: &Point<F::Elem>| !points_agree(k, y, &j, m.min(point_prec(k, y)));
    if bad(fx) {
        acc.fail(
            "ball_soundness",
            render_point(k, x),
            format!("image {} leaves the ball image {}", render_point(k, fx), render_point(k, &j)),
        );
    } else if let Some(fl) = fl.filter(|y| bad(y)) {
        acc.fail(
            "ball_soundness",
            render_point(k, &lift),
            format!("lift image {} leaves the ball image {}", render_point(k, &fl), render_point(k, &j)),
        );
    } else {
        acc.ok("ball_soundness");
    }
}

/// Run all six checks on `map` at ball depth `depth` with `samples` random
/// points drawn from `seed`.
pub fn verify_map<F: ValuedField>(map: &PiecewiseMap<F>, depth: u32, samples: u64, seed: u64) -> Result<VerifyReport> {
    let k = &*map.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Acc::new();
    let (mut domain_count, mut codomain_count, mut excluded_domain, mut excluded_codomain) = (0, 0, 0, 0);

    // domain sweep: partition, disjointness, roundtrip, ball soundness
    let mut images: Vec<(Point<F::Elem>, Point<F::Elem>)> = Vec::new();
    for x in space_grid(k, map.domain_space, depth)? {
        let i = match map.piece_index(&x, Direction::Forward) {
            Ok(i) => i,
            Err(Error::NotInDomain(_)) => continue,
            Err(Error::ExcludedPoint) => {
                excluded_domain += 1;
                continue;
            }
            Err(Error::UndecidableMembership) => {
                acc.undecided(render_point(k, &x));
                continue;
            }
            Err(e) => {
                acc.fail("partition", render_point(k, &x), e.to_string());
                continue;
            }
        };
        acc.ok("partition");
        domain_count += 1;
        let y = match (map.pieces[i].fwd)(&x) {
            Ok(y) => y,
            Err(e) => {
                acc.fail("roundtrip", render_point(k, &x), format!("forward map failed: {e}"));
                continue;
            }
        };
        match map.piece_index(&y, Direction::Inverse) {
            Ok(j) if j == i => acc.ok("disjointness"),
            Ok(j) => acc.fail(
                "disjointness",
                render_point(k, &x),
                format!("piece {} maps into the image of piece {}", map.pieces[i].name, map.pieces[j].name),
            ),
            Err(Error::UndecidableMembership) => acc.undecided(render_point(k, &y)),
            Err(e) => acc.fail("disjointness", render_point(k, &x), format!("image {}: {e}", render_point(k, &y))),
        }
        match (map.pieces[i].inv)(&y) {
            Ok(back) if points_agree(k, &back, &x, budget(k, &x) - map.loss) => acc.ok("roundtrip"),
            Ok(back) => acc.fail("roundtrip", render_point(k, &x), format!("came back as {}", render_point(k, &back))),
            Err(e) => acc.fail("roundtrip", render_point(k, &x), format!("inverse failed: {e}")),
        }
        ball_check(map, i, &x, &y, depth as i64 + map.domain_space.min_val, &mut rng, &mut acc);
        images.push((x, y));
    }

    // injectivity: bucket images by their truncation to the least precision
    // any image carries, then compare within buckets
    let floor = images.iter().map(|(_, y)| point_prec(k, y)).min().unwrap_or(0);
    let mut buckets: HashMap<String, Vec<usize>> = HashMap::new();
    for (n, (_, y)) in images.iter().enumerate() {
        buckets.entry(render_point(k, &truncate_point(k, y, floor))).or_default().push(n);
    }
    for (n, (x, y)) in images.iter().enumerate() {
        let key = render_point(k, &truncate_point(k, y, floor));
        let clash = buckets[&key].iter().take_while(|&&m| m < n).find(|&&m| !certified_distinct(k, &images[m].1, y));
        match clash {
            None => acc.ok("injectivity"),
            Some(&m) => acc.fail(
                "injectivity",
                render_point(k, x),
                format!("same image {} as {}", render_point(k, y), render_point(k, &images[m].0)),
            ),
        }
    }
    drop(buckets);
    drop(images);

    // codomain sweep: surjectivity
    for y in space_grid(k, map.codomain_space, depth)? {
        let i = match map.piece_index(&y, Direction::Inverse) {
            Ok(i) => i,
            Err(Error::NotInDomain(_)) => continue,
            Err(Error::ExcludedPoint) => {
                excluded_codomain += 1;
                continue;
            }
            Err(Error::UndecidableMembership) => {
                acc.undecided(render_point(k, &y));
                continue;
            }
            Err(e) => {
                acc.fail("disjointness", render_point(k, &y), e.to_string());
                continue;
            }
        };
        codomain_count += 1;
        let x = match (map.pieces[i].inv)(&y) {
            Ok(x) => x,
            Err(e) => {
                acc.fail("surjectivity", render_point(k, &y), format!("inverse failed: {e}"));
                continue;
            }
        };
        match (map.pieces[i].domain)(&x) {
            Tri::In => {}
            Tri::Unknown => {
                acc.undecided(render_point(k, &x));
                continue;
            }
            Tri::Out => {
                acc.fail(
                    "surjectivity",
                    render_point(k, &y),
                    format!("preimage {} is outside piece {}", render_point(k, &x), map.pieces[i].name),
                );
                continue;
            }
        }
        match (map.pieces[i].fwd)(&x) {
            Ok(z) if points_agree(k, &z, &y, budget(k, &y) - map.loss) => acc.ok("surjectivity"),
            Ok(z) => acc.fail("surjectivity", render_point(k, &y), format!("preimage maps to {}", render_point(k, &z))),
            Err(e) => acc.fail("surjectivity", render_point(k, &y), format!("forward map failed: {e}")),
        }
    }

    let sweep_undecidable = acc.undecidable;

    // random samples: roundtrip and ball soundness at random depths
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < samples && attempts < samples.saturating_mul(50).max(50) {
        attempts += 1;
        let x = random_point(k, map.domain_space, &mut rng);
        let i = match map.piece_index(&x, Direction::Forward) {
            Ok(i) => i,
            Err(_) => continue,
        };
        drawn += 1;
        let y = match (map.pieces[i].fwd)(&x) {
            Ok(y) => y,
            Err(e) if is_precision_error(&e) => {
                acc.undecided(render_point(k, &x));
                continue;
            }
            Err(e) => {
                acc.fail("roundtrip", render_point(k, &x), format!("forward map failed: {e}"));
                continue;
            }
        };
        match map.invert(&y) {
            Ok(back) if points_agree(k, &back, &x, budget(k, &x) - map.loss) => acc.ok("roundtrip"),
            Ok(back) => acc.fail("roundtrip", render_point(k, &x), format!("came back as {}", render_point(k, &back))),
            Err(e) if is_precision_error(&e) => acc.undecided(render_point(k, &y)),
            Err(e) => acc.fail("roundtrip", render_point(k, &x), format!("inverse failed: {e}")),
        }
        let lo = x.coords.iter().filter_map(|c| k.valuation(c).ok()).min().unwrap_or(0).max(map.domain_space.min_val);
        let hi = point_prec(k, &x);
        if hi > lo + 1 {
            let d = rng.gen_range(lo + 1..hi);
            ball_check(map, i, &x, &y, d, &mut rng, &mut acc);
        }
    }

    let status = if acc.failure_count > 0 {
        Status::Fail
    } else if acc.undecidable > 0 {
        Status::Undecidable
    } else {
        Status::Pass
    };
    Ok(VerifyReport {
        map: map.name.clone(),
        field: k.describe(),
        depth,
        samples,
        seed,
        precision: k.precision(),
        domain_count,
        codomain_count,
        excluded_domain,
        excluded_codomain,
        checks: acc.checks,
        failures: acc.failures,
        failure_count: acc.failure_count,
        undecidable: acc.undecidable,
        sweep_undecidable,
        undecidable_points: acc.undecided,
        status,
    })
}

/// Build the named map over `spec` and verify it.
pub fn verify_bijection(map: &str, spec: &FieldSpec, depth: u32, samples: u64, seed: u64) -> Result<VerifyReport> {
    let field = spec.build()?;
    let mut report = crate::with_field!(field, k => {
        let m = build(map, Arc::clone(&k))?;
        verify_map(&m, depth, samples, seed)?
    });
    report.field = spec.to_string();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop3i_passes() {
        let r = verify_bijection("prop3i", &FieldSpec::qp(3, 8), 4, 200, 1).unwrap();
        assert_eq!(r.status, Status::Pass, "{:#?}", r.failures);
        // R^(1) at depth 4: a leading digit 1 at position j, free digits after
        let acone: u64 = (0..4).map(|j| 3u64.pow(3 - j)).sum();
        assert_eq!(r.codomain_count, acone);
        assert_eq!(r.domain_count, 81 + acone);
    }

    #[test]
    fn deterministic() {
        let a = verify_bijection("plane", &FieldSpec::qp(2, 8), 2, 100, 9).unwrap();
        let b = verify_bijection("plane", &FieldSpec::qp(2, 8), 2, 100, 9).unwrap();
        assert_eq!(a, b);
    }
}
