//! Field selection from text: `qp:<p>` or `laurent:<p>:<e>[:c0,c1,...]`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fq::FqCtx;
use crate::laurent::LaurentCtx;
use crate::padic::PadicCtx;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Qp { p: u32 },
    /// Modulus coefficients low degree first, monic leading term included.
    Laurent { p: u32, e: u32, modulus: Option<Vec<u32>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    #[serde(flatten)]
    pub kind: FieldKind,
    pub precision: u32,
}

impl FieldSpec {
    pub fn qp(p: u32, precision: u32) -> Self {
        FieldSpec { kind: FieldKind::Qp { p }, precision }
    }

    pub fn laurent(p: u32, e: u32, precision: u32) -> Self {
        FieldSpec { kind: FieldKind::Laurent { p, e, modulus: None }, precision }
    }

    pub fn with_precision(mut self, n: u32) -> Self {
        self.precision = n;
        self
    }

    /// Parse `qp:<p>` / `laurent:<p>:<e>[:c0,c1,...]` at precision `n`.
    pub fn parse(text: &str, n: u32) -> Result<Self> {
        let bad = |m: &str| Error::InvalidField(format!("`{text}`: {m}"));
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad("expected an integer"));
        let parts: Vec<&str> = text.trim().split(':').collect();
        match parts.as_slice() {
            ["qp", p] => Ok(FieldSpec::qp(num(p)?, n)),
            ["laurent", p, e] => Ok(FieldSpec::laurent(num(p)?, num(e)?, n)),
            ["laurent", p, e, m] => {
                let (p, e) = (num(p)?, num(e)?);
                let mut coeffs = m.split(',').map(num).collect::<Result<Vec<u32>>>()?;
                if coeffs.len() == e as usize {
                    coeffs.push(1);
                }
                Ok(FieldSpec { kind: FieldKind::Laurent { p, e, modulus: Some(coeffs) }, precision: n })
            }
            _ => Err(bad("expected qp:<p> or laurent:<p>:<e>[:c0,c1,...]")),
        }
    }

    pub fn build(&self) -> Result<AnyField> {
        match &self.kind {
            FieldKind::Qp { p } => Ok(AnyField::Qp(Arc::new(PadicCtx::new(*p, self.precision)?))),
            FieldKind::Laurent { p, e, modulus } => {
                let fq = FqCtx::new(*p, *e, modulus.clone())?;
                Ok(AnyField::Laurent(Arc::new(LaurentCtx::new(fq, self.precision)?)))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Qp { p } => write!(f, "qp:{p}"),
            FieldKind::Laurent { p, e, modulus: None } => write!(f, "laurent:{p}:{e}"),
            FieldKind::Laurent { p, e, modulus: Some(m) } => {
                let m: Vec<String> = m.iter().map(u32::to_string).collect();
                write!(f, "laurent:{p}:{e}:{}", m.join(","))
            }
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Parses at the default precision of 8.
    fn from_str(s: &str) -> Result<Self> {
        FieldSpec::parse(s, 8)
    }
}

/// A constructed field of either kind.
#[derive(Clone, Debug)]
pub enum AnyField {
    Qp(Arc<PadicCtx>),
    Laurent(Arc<LaurentCtx>),
}

/// Run `$body` with `$k` bound to the concrete `Arc` context.
#[macro_export]
macro_rules! with_field {
    ($any:expr, $k:ident => $body:expr) => {
        match $any {
            $crate::fieldspec::AnyField::Qp($k) => $body,
            $crate::fieldspec::AnyField::Laurent($k) => $body,
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!(FieldSpec::parse("qp:5", 8).unwrap(), FieldSpec::qp(5, 8));
        let l = FieldSpec::parse("laurent:2:2:1,1", 6).unwrap();
        assert_eq!(l.kind, FieldKind::Laurent { p: 2, e: 2, modulus: Some(vec![1, 1, 1]) });
        assert_eq!(l.to_string(), "laurent:2:2:1,1,1");
        assert!(FieldSpec::parse("zp:5", 8).is_err());
        assert!(FieldSpec::parse("qp:6", 8).unwrap().build().is_err());
    }
}
