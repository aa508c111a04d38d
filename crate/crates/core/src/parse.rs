//! Element literals: rationals, sums of `c*p^k` or `c*t^k` terms with an
//! optional `O(p^M)` / `O(t^M)` tail, `F_q` coefficients as polynomials in
//! `a`, and general `+ - * / ^` expressions.

use crate::defset::DefSet;
use crate::error::{Error, Result};
use crate::field::{Prec, ValuedField};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(char),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse()
                .map_err(|_| Error::Syntax { pos: start, msg: format!("integer `{s}` too large") })?;
            out.push((start, Tok::Num(n)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else if c.is_ascii_alphabetic() {
            out.push((i, Tok::Ident(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a, F: ValuedField> {
    k: &'a F,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl<'a, F: ValuedField> Parser<'a, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    /// Top level: a signed sum whose last term may be an `O(...)` tail.
    fn top(&mut self) -> Result<F::Elem> {
        let mut terms = Vec::new();
        let mut tail = None;
        let mut neg = self.eat('-');
        loop {
            if self.peek() == Some(&Tok::Ident('O')) {
                if neg {
                    return self.err("an O-tail cannot be negated");
                }
                tail = Some(self.tail()?);
                break;
            }
            let t = self.term()?;
            terms.push(if neg { self.k.neg(&t) } else { t });
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        if self.at != self.toks.len() {
            return self.err("unexpected trailing input");
        }
        let sum = terms.iter().fold(self.k.zero(), |acc, t| self.k.add(&acc, t));
        let Some(m) = tail else {
            return Ok(sum);
        };
        for t in &terms {
            if self.k.zero_bound(t).is_none() {
                let v = self.k.valuation(t)?;
                if v >= m {
                    return Err(Error::InconsistentPrecision(v));
                }
            }
        }
        if !self.k.prec(&sum).reaches(m) {
            return Ok(sum);
        }
        Ok(self.k.truncate(&sum, m))
    }

    fn tail(&mut self) -> Result<i64> {
        self.at += 1;
        self.expect('(')?;
        let uniformizer = match self.peek().cloned() {
            Some(Tok::Num(n)) if self.k.characteristic() == 0 && n == self.k.prime() as i64 => true,
            Some(Tok::Ident('t')) if self.k.characteristic() != 0 => true,
            _ => false,
        };
        if !uniformizer {
            return self.err("O-tail must be a power of the uniformizer");
        }
        self.at += 1;
        let m = if self.eat('^') { self.exponent()? } else { 1 };
        self.expect(')')?;
        Ok(m)
    }

    fn term(&mut self) -> Result<F::Elem> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = self.k.mul(&acc, &self.factor()?);
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.factor()?;
                acc = self.k.div(&acc, &d).map_err(|e| match e {
                    Error::DivisionByZero => Error::ZeroDenominator,
                    other => Error::Syntax { pos, msg: other.to_string() },
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<F::Elem> {
        if self.eat('-') {
            return Ok(self.k.neg(&self.factor()?));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return if e >= 0 {
                Ok(self.k.pow(&base, e as u32))
            } else {
                let p = self.k.pow(&base, (-e) as u32);
                self.k.div(&self.k.from_int(1), &p).map_err(|_| Error::ZeroDenominator)
            };
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Num(n)) => *n,
            _ => return self.err("expected an integer exponent"),
        };
        self.at += 1;
        if paren {
            self.expect(')')?;
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<F::Elem> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(self.k.from_int(n))
            }
            Some(Tok::Ident('t')) if self.k.characteristic() != 0 => {
                self.at += 1;
                Ok(self.k.pi_pow(1))
            }
            Some(Tok::Ident('a')) => match self.k.residue_generator() {
                Some(g) => {
                    self.at += 1;
                    Ok(self.k.lift_residue(g))
                }
                None => self.err("`a` needs a residue field larger than F_p"),
            },
            Some(Tok::Op('(')) => {
                self.at += 1;
                let mut acc = self.term_sum()?;
                self.expect(')')?;
                acc = acc.clone();
                Ok(acc)
            }
            Some(Tok::Ident(c)) => self.err(format!("unknown symbol `{c}`")),
            _ => self.err("expected a number, symbol or `(`"),
        }
    }

    /// A parenthesized sum (no O-tail).
    fn term_sum(&mut self) -> Result<F::Elem> {
        let neg = self.eat('-');
        let first = self.term()?;
        let mut acc = if neg { self.k.neg(&first) } else { first };
        loop {
            if self.eat('+') {
                acc = self.k.add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = self.k.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Parse an element literal in the field `k`.
pub fn parse_element<F: ValuedField>(k: &F, text: &str) -> Result<F::Elem> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty input".into() });
    }
    let mut p = Parser { k, toks, at: 0, end: text.chars().count() };
    p.top()
}

/// Parse a comma-separated point, e.g. `"0, 125"`.
pub fn parse_point<F: ValuedField>(k: &F, text: &str) -> Result<Vec<F::Elem>> {
    text.split(',').map(|s| parse_element(k, s)).collect()
}

/// Exactness of a parsed literal, as shown by the CLI.
pub fn describe_prec<F: ValuedField>(k: &F, x: &F::Elem) -> String {
    match k.prec(x) {
        Prec::Exact => "exact".into(),
        Prec::Abs(m) => format!("mod π^{m}"),
    }
}

/// Parse a set expression, e.g. `R* x R^(k:1) | aff(j:3, a:1, R*)`.
///
/// Atoms: `K`, `R`, `R*`, `m`, `R^(k)`, `K^(k)`, `P(n)` / `P(n:2, k:1)`,
/// `X1`, `X2`, `{c}`, `ball(c, r)`, `aff(j:3, a:c, S)`, `scale(c, S)` and
/// parenthesized sets. `x` builds products, `|` unions, `\` differences.
pub fn parse_set<F: ValuedField>(k: &F, text: &str) -> Result<DefSet<F::Elem>> {
    let mut p = SetParser { k, s: text.chars().collect(), at: 0 };
    let set = p.union()?;
    p.ws();
    if p.at != p.s.len() {
        return p.err("unexpected trailing input");
    }
    Ok(set)
}

struct SetParser<'a, F: ValuedField> {
    k: &'a F,
    s: Vec<char>,
    at: usize,
}

impl<'a, F: ValuedField> SetParser<'a, F> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.at, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.s.get(self.at).is_some_and(|c| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        let l: Vec<char> = lit.chars().collect();
        if self.s[self.at..].starts_with(&l) {
            self.at += l.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    fn union(&mut self) -> Result<DefSet<F::Elem>> {
        let mut parts = vec![self.difference()?];
        while self.eat("|") {
            parts.push(self.difference()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { DefSet::union(parts) })
    }

    fn difference(&mut self) -> Result<DefSet<F::Elem>> {
        let mut acc = self.product()?;
        while self.eat("\\") {
            acc = DefSet::minus(acc, self.product()?);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<DefSet<F::Elem>> {
        let mut parts = vec![self.atom()?];
        while self.eat("x") {
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { DefSet::Product(parts) })
    }

    /// Raw text up to the next `,` or closing bracket at depth 0.
    fn chunk(&mut self) -> String {
        self.ws();
        let start = self.at;
        let mut depth = 0;
        while let Some(&c) = self.s.get(self.at) {
            match c {
                '(' | '{' => depth += 1,
                ')' | '}' if depth == 0 => break,
                ')' | '}' => depth -= 1,
                ',' if depth == 0 => break,
                _ => {}
            }
            self.at += 1;
        }
        self.s[start..self.at].iter().collect()
    }

    fn elem(&mut self) -> Result<F::Elem> {
        let start = self.at;
        let text = self.chunk();
        parse_element(self.k, &text).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax { pos: start + pos, msg },
            other => other,
        })
    }

    fn int(&mut self, key: &str) -> Result<i64> {
        self.ws();
        let _ = self.eat(&format!("{key}:"));
        let text = self.chunk();
        text.trim().parse().or_else(|_| self.err(format!("expected an integer for `{key}`")))
    }

    fn atom(&mut self) -> Result<DefSet<F::Elem>> {
        self.ws();
        if self.eat("(") {
            let s = self.union()?;
            self.expect(")")?;
            return Ok(s);
        }
        if self.eat("{") {
            let e = self.elem()?;
            self.expect("}")?;
            return Ok(DefSet::Singleton(e));
        }
        if self.eat("ball(") {
            let center = self.elem()?;
            self.expect(",")?;
            let radius = self.int("r")?;
            self.expect(")")?;
            return Ok(DefSet::Ball { center, radius });
        }
        if self.eat("aff(") {
            let j = self.int("j")?;
            self.expect(",")?;
            let _ = self.eat("a:");
            let a = self.elem()?;
            self.expect(",")?;
            let inner = self.union()?;
            self.expect(")")?;
            return Ok(DefSet::affine(j, a, inner));
        }
        if self.eat("scale(") {
            let alpha = self.elem()?;
            self.expect(",")?;
            let inner = self.union()?;
            self.expect(")")?;
            return Ok(DefSet::scale(alpha, inner));
        }
        if self.eat("P(") {
            let n = self.int("n")?;
            let set = if self.eat(",") {
                let kk = self.int("k")?;
                DefSet::RingNthPowers(n as u32, kk as u32)
            } else {
                DefSet::NthPowers(n as u32)
            };
            self.expect(")")?;
            return Ok(set);
        }
        for (head, ring) in [("R^(", true), ("K^(", false)] {
            if self.eat(head) {
                let kk = self.int("k")? as u32;
                self.expect(")")?;
                return Ok(if ring { DefSet::AcOne(kk) } else { DefSet::KAcOne(kk) });
            }
        }
        for (lit, set) in [
            ("R*", DefSet::Units),
            ("R", DefSet::FullRing),
            ("K", DefSet::Field),
            ("m", DefSet::MaxIdeal),
            ("X1", DefSet::ValLe),
            ("X2", DefSet::ValGt),
        ] {
            if self.eat(lit) {
                return Ok(set);
            }
        }
        self.err("expected a set")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqCtx;
    use crate::laurent::{LaurentCtx, LaurentJet};
    use crate::padic::{PadicCtx, PadicJet};

    #[test]
    fn padic_literals() {
        let k = PadicCtx::new(5, 4).unwrap();
        let x = parse_element(&k, "2*5^2 + O(5^6)").unwrap();
        assert_eq!(k.digits(&x), vec![2, 0, 0, 0]);
        assert_eq!(k.valuation(&x).unwrap(), 2);
        let y = parse_element(&k, "17/4").unwrap();
        assert!(k.agree(&y, &k.from_int(473), 4));
        assert_eq!(parse_element(&k, "O(5^3)").unwrap(), PadicJet::ZeroBall { prec: Prec::Abs(3) });
        assert_eq!(parse_element(&k, "5^3 + O(5^2)").unwrap_err(), Error::InconsistentPrecision(3));
        assert!(matches!(parse_element(&k, "2 + * 3"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_element(&k, "t"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn laurent_literals() {
        let k = LaurentCtx::new(FqCtx::new(2, 2, None).unwrap(), 6).unwrap();
        let x = parse_element(&k, "t^-1 + (a+1)*t^2 + O(t^5)").unwrap();
        assert_eq!(x, LaurentJet::Resolved { v: -1, coeffs: vec![1, 0, 0, 3, 0, 0], exact: false });
        let k3 = LaurentCtx::new(FqCtx::new(3, 1, None).unwrap(), 6).unwrap();
        let s = parse_element(&k3, "1/(1+t)").unwrap();
        assert_eq!(k3.render(&s), "1 + 2*t + t^2 + 2*t^3 + t^4 + 2*t^5 + O(t^6)");
    }

    #[test]
    fn sets() {
        let k = PadicCtx::new(3, 8).unwrap();
        assert_eq!(parse_set(&k, "R^(k:2)").unwrap(), DefSet::AcOne(2));
        assert_eq!(
            parse_set(&k, "R* x R | {0}").unwrap(),
            DefSet::union(vec![DefSet::Product(vec![DefSet::Units, DefSet::FullRing]), DefSet::Singleton(k.zero())])
        );
        let a = parse_set(&k, "aff(j:3, a:1, R*)").unwrap();
        assert_eq!(a, DefSet::affine(3, k.from_int(1), DefSet::Units));
        assert_eq!(parse_set(&k, "P(n:2, k:1)").unwrap(), DefSet::RingNthPowers(2, 1));
        assert!(matches!(parse_set(&k, "R x"), Err(Error::Syntax { pos: 3, .. })));
    }
}
