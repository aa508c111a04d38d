//! Formal classes of definable sets and the relations between them.
//!
//! A class expression is an integer combination of monomials; a monomial is
//! a product of named generators, the empty product being the class of a
//! point (written `1`). Relations enter only with a provenance: a map the
//! harness has verified, or a scissor identity that is checked set-wise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::Serialize;

use crate::defset::{grid, membership, DefSet};
use crate::error::{Error, Result};
use crate::field::Tri;
use crate::padic::PadicCtx;
use crate::verify::VerifyReport;

/// Sorted generator names; empty means the point class.
pub type Monomial = Vec<String>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassExpr(BTreeMap<Monomial, i64>);

impl ClassExpr {
    pub fn zero() -> Self {
        ClassExpr::default()
    }

    /// The point class `1`.
    pub fn one() -> Self {
        ClassExpr::term(1, &[])
    }

    pub fn gen(name: &str) -> Self {
        ClassExpr::term(1, &[name])
    }

    pub fn term(c: i64, gens: &[&str]) -> Self {
        let mut m: Monomial = gens.iter().map(|s| s.to_string()).collect();
        m.sort();
        let mut e = ClassExpr::zero();
        e.push(m, c);
        e
    }

    fn push(&mut self, m: Monomial, c: i64) {
        let slot = self.0.entry(m).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.0.retain(|_, c| *c != 0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return ClassExpr::zero();
        }
        ClassExpr(self.0.iter().map(|(m, k)| (m.clone(), k * c)).collect())
    }

    pub fn coeff(&self, m: &Monomial) -> i64 {
        self.0.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.0.iter().map(|(m, c)| (m, *c))
    }

    /// Generator names occurring anywhere.
    pub fn generators(&self) -> BTreeSet<String> {
        self.0.keys().flatten().cloned().collect()
    }

    /// Leading monomial: highest degree, then lexicographically largest.
    fn lead(&self) -> Option<&Monomial> {
        self.0.keys().max_by(|a, b| mono_cmp(a, b))
    }
}

fn mono_cmp(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Add for &ClassExpr {
    type Output = ClassExpr;
    fn add(self, o: &ClassExpr) -> ClassExpr {
        let mut out = self.clone();
        for (m, c) in &o.0 {
            out.push(m.clone(), *c);
        }
        out
    }
}

impl Sub for &ClassExpr {
    type Output = ClassExpr;
    fn sub(self, o: &ClassExpr) -> ClassExpr {
        self + &o.scale(-1)
    }
}

impl Neg for &ClassExpr {
    type Output = ClassExpr;
    fn neg(self) -> ClassExpr {
        self.scale(-1)
    }
}

/// Products of sets multiply classes; bilinear on formal sums.
impl Mul for &ClassExpr {
    type Output = ClassExpr;
    fn mul(self, o: &ClassExpr) -> ClassExpr {
        let mut out = ClassExpr::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let mut m: Monomial = a.iter().chain(b).cloned().collect();
                m.sort();
                out.push(m, x * y);
            }
        }
        out
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.0.iter().collect();
        terms.sort_by(|a, b| mono_cmp(b.0, a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let body = render_monomial(m);
            let mag = c.abs();
            match (i, *c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (mag, m.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => f.write_str(&body)?,
                _ => write!(f, "{mag}{body}")?,
            }
        }
        Ok(())
    }
}

fn render_monomial(m: &Monomial) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < m.len() {
        let j = m[i..].iter().take_while(|g| **g == m[i]).count();
        out.push_str(&format!("[{}]", m[i]));
        if j > 1 {
            out.push_str(&format!("^{j}"));
        }
        i += j;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub lhs: ClassExpr,
    pub rhs: ClassExpr,
    pub provenance: String,
}

/// Provenance tag of scissor identities.
pub const SCISSOR: &str = "scissor";

impl Relation {
    pub fn new(lhs: ClassExpr, rhs: ClassExpr, provenance: &str) -> Self {
        Relation { lhs, rhs, provenance: provenance.to_string() }
    }

    /// `[X] + [Y] = [X ∪ Y] + [X ∩ Y]` for named sets (`"pt"` is the point;
    /// an empty name is the empty set).
    pub fn scissor(x: &str, y: &str, union: &str, inter: &str) -> Self {
        let c = |s: &str| match s {
            "" => ClassExpr::zero(),
            "pt" => ClassExpr::one(),
            _ => ClassExpr::gen(s),
        };
        Relation::new(&c(x) + &c(y), &c(union) + &c(inter), SCISSOR)
    }

    /// `lhs − rhs`, the element this relation sends to zero.
    pub fn difference(&self) -> ClassExpr {
        &self.lhs - &self.rhs
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}  ({})", self.lhs, self.rhs, self.provenance)
    }
}

/// The class identity a verified map yields, for maps with a named one.
pub fn map_relation(map: &str) -> Option<Relation> {
    let r = ClassExpr::gen("R");
    let r1 = ClassExpr::gen("R^(1)");
    let rs2 = ClassExpr::term(1, &["R*", "R*"]);
    let r2 = ClassExpr::term(1, &["R", "R"]);
    let one = ClassExpr::one();
    Some(match map {
        "prop3i" => Relation::new(&r + &r1, r1, map),
        "prop3ii" => Relation::new(rs2.scale(2), rs2, map),
        "plane" => Relation::new(&r2 - &one, r2, map),
        "line_qp" | "line_laurent_frob" | "line_laurent_sq" => Relation::new(r.clone(), &r - &one, map),
        _ => return None,
    })
}

/// Named sets scissor identities may mention, as subsets of `R^dim`.
fn catalog(name: &str, zero: crate::padic::PadicJet) -> Option<DefSet<crate::padic::PadicJet>> {
    Some(match name {
        "pt" => DefSet::Singleton(zero),
        "R" => DefSet::FullRing,
        "R*" => DefSet::Units,
        "R^(1)" => DefSet::AcOne(1),
        _ => return None,
    })
}

/// One echelon row: pivot monomial and the reduced relation.
#[derive(Clone, Debug)]
struct Row {
    pivot: Monomial,
    expr: ClassExpr,
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Integer row echelon form of a set of class expressions.
#[derive(Clone, Debug, Default)]
struct Lattice {
    rows: Vec<Row>,
}

impl Lattice {
    fn insert(&mut self, mut r: ClassExpr) {
        while let Some(m) = r.lead().cloned() {
            let Some(at) = self.rows.iter().position(|row| row.pivot == m) else {
                let r = if r.coeff(&m) < 0 { -&r } else { r };
                self.rows.push(Row { pivot: m, expr: r });
                self.rows.sort_by(|a, b| mono_cmp(&b.pivot, &a.pivot));
                return;
            };
            let s = self.rows[at].expr.clone();
            let (a, b) = (r.coeff(&m), s.coeff(&m));
            if a % b == 0 {
                r = &r - &s.scale(a / b);
                continue;
            }
            let (g, x, y) = egcd(b, a);
            let head = &s.scale(x) + &r.scale(y);
            let head = if head.coeff(&m) < 0 { -&head } else { head };
            debug_assert_eq!(head.coeff(&m), g);
            r = &r.scale(b / g) - &s.scale(a / g);
            self.rows[at].expr = head;
        }
    }

    /// Canonical remainder: pivot coefficients reduced into `[0, b)`.
    fn reduce(&self, e: &ClassExpr) -> ClassExpr {
        let mut e = e.clone();
        for row in &self.rows {
            let b = row.expr.coeff(&row.pivot);
            let c = e.coeff(&row.pivot);
            let q = c.div_euclid(b);
            if q != 0 {
                e = &e - &row.expr.scale(q);
            }
        }
        e
    }
}

/// One line of a derivation: an identity `lhs = rhs` and why it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofStep {
    pub rule: String,
    /// Integer combination of relation differences (by provenance) and
    /// earlier steps (by index), each multiplied by a class.
    pub uses: Vec<(String, ClassExpr)>,
    pub lhs: ClassExpr,
    pub rhs: ClassExpr,
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}    [{}]", self.lhs, self.rhs, self.rule)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>2}. {s}", i + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Ledger {
    verified: BTreeSet<String>,
    relations: Vec<Relation>,
    generators: BTreeSet<String>,
    lattice: Lattice,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    /// Record a harness run; only passing reports make their map citable.
    pub fn accept_report(&mut self, report: &VerifyReport) -> bool {
        if report.passed() {
            self.verified.insert(report.map.clone());
        }
        report.passed()
    }

    pub fn is_verified(&self, map: &str) -> bool {
        self.verified.contains(map)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn generators(&self) -> &BTreeSet<String> {
        &self.generators
    }

    pub fn register(&mut self, rel: Relation) -> Result<()> {
        if rel.provenance.trim().is_empty() {
            return Err(Error::UnverifiedProvenance("empty provenance".into()));
        }
        if rel.provenance == SCISSOR {
            check_scissor(&rel)?;
        } else if !self.verified.contains(&rel.provenance) {
            return Err(Error::UnverifiedProvenance(rel.provenance.clone()));
        }
        self.generators.extend(rel.lhs.generators());
        self.generators.extend(rel.rhs.generators());
        self.lattice.insert(rel.difference());
        self.relations.push(rel);
        Ok(())
    }

    /// Normal form of `expr` modulo the span of the registered relations.
    pub fn class_of(&self, expr: &ClassExpr) -> Result<ClassExpr> {
        if let Some(g) = expr.generators().difference(&self.generators).next() {
            return Err(Error::UnknownGenerator(g.clone()));
        }
        Ok(self.lattice.reduce(expr))
    }

    fn source(&self, provenance: &str, what: &str) -> Result<&Relation> {
        self.relations
            .iter()
            .find(|r| r.provenance == provenance && relation_matches(r, what))
            .ok_or_else(|| Error::InsufficientRelations(what.to_string()))
    }

    /// Derive `1 = 0` from the three source relations.
    pub fn derive_triviality(&self) -> Result<ProofTrace> {
        let missing: Vec<&str> = [
            ("prop3i", "prop3i"),
            ("prop3ii", "prop3ii"),
            (SCISSOR, "scissor [R] = [R*] + [pt]"),
        ]
        .into_iter()
        .filter(|(p, w)| self.source(p, w).is_err())
        .map(|(_, w)| w)
        .collect();
        if !missing.is_empty() {
            return Err(Error::InsufficientRelations(missing.join(", ")));
        }
        let one = ClassExpr::one();
        let r = ClassExpr::gen("R");
        let rs = ClassExpr::gen("R*");
        let rs2 = &rs * &rs;
        let c = |s: &str| (s.to_string(), ClassExpr::one());
        let steps = vec![
            ProofStep { rule: "prop3i".into(), uses: vec![c("prop3i")], lhs: r.clone(), rhs: ClassExpr::zero() },
            ProofStep {
                rule: "scissor, step 1".into(),
                uses: vec![c(SCISSOR), c("#1")],
                lhs: rs.clone(),
                rhs: -&one,
            },
            ProofStep { rule: "prop3ii".into(), uses: vec![c("prop3ii")], lhs: rs2.clone(), rhs: ClassExpr::zero() },
            ProofStep {
                rule: "step 2 times [R*] - 1".into(),
                uses: vec![("#2".into(), &rs - &one)],
                lhs: rs2.clone(),
                rhs: one.clone(),
            },
            ProofStep {
                rule: "steps 3 and 4".into(),
                uses: vec![c("#3"), ("#4".into(), -&one)],
                lhs: one,
                rhs: ClassExpr::zero(),
            },
        ];
        let trace = ProofTrace { steps };
        self.check_trace(&trace)?;
        Ok(trace)
    }

    /// Replay a trace: each step must equal its stated combination.
    pub fn check_trace(&self, trace: &ProofTrace) -> Result<()> {
        let mut done: Vec<ClassExpr> = Vec::new();
        for (i, step) in trace.steps.iter().enumerate() {
            let mut sum = ClassExpr::zero();
            for (src, mult) in &step.uses {
                let base = match src.strip_prefix('#') {
                    Some(n) => {
                        let n: usize = n.parse().map_err(|_| Error::InsufficientRelations(src.clone()))?;
                        done.get(n.wrapping_sub(1)).cloned().ok_or_else(|| Error::InsufficientRelations(src.clone()))?
                    }
                    None => self
                        .relations
                        .iter()
                        .find(|r| &r.provenance == src)
                        .map(Relation::difference)
                        .ok_or_else(|| Error::InsufficientRelations(src.clone()))?,
                };
                sum = &sum + &(&base * mult);
            }
            let claim = &step.lhs - &step.rhs;
            if sum != claim {
                return Err(Error::InsufficientRelations(format!("step {} does not replay: {claim} vs {sum}", i + 1)));
            }
            done.push(claim);
        }
        Ok(())
    }
}

fn relation_matches(r: &Relation, what: &str) -> bool {
    match what {
        "prop3i" | "prop3ii" => map_relation(what).is_some_and(|m| m.difference() == r.difference()),
        _ => Relation::scissor("R*", "pt", "R", "").difference() == r.difference(),
    }
}

/// Check a scissor identity on the exact depth-4 grid of `Z_3`: every point
/// must be counted equally often on both sides.
fn check_scissor(rel: &Relation) -> Result<()> {
    let k = PadicCtx::new(3, 8).expect("prime");
    let diff = rel.difference();
    let mut sets = Vec::new();
    for (m, c) in diff.terms() {
        let name = match m.len() {
            0 => "pt",
            1 => m[0].as_str(),
            _ => return Err(Error::UnverifiedProvenance(format!("scissor over a product: {}", render_monomial(m)))),
        };
        let s = catalog(name, crate::field::ValuedField::zero(&k))
            .ok_or_else(|| Error::UnverifiedProvenance(format!("no set named `{name}`")))?;
        sets.push((Arc::new(s), c));
    }
    for x in grid(&k, 1, 4, 1 << 12)? {
        let total: i64 = sets
            .iter()
            .map(|(s, c)| match membership(&k, s, &x) {
                Tri::In => *c,
                _ => 0,
            })
            .sum();
        if total != 0 {
            return Err(Error::UnverifiedProvenance(format!("scissor identity fails: {rel}")));
        }
    }
    Ok(())
}
