//! Operator text: `psi[r] @ psi+[s]`, `M[(z-1)/(z-2)]`, `Ecycle[(a,1),(b,-1)]`.
//!
//! `@` is composition; the rightmost factor acts first.

use std::fmt;

use crate::arith::scalar::scalar_from_expr;
use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::mm::MMElement;
use crate::p1::DivisorFunction;
use crate::parse::parse_expr_at;

use super::*;

#[derive(Clone, Debug, PartialEq)]
pub enum OpTerm {
    Semi(SemigeomOp),
    Jet(JetOp),
}

impl OpTerm {
    pub fn apply(&self, f: &MMElement) -> Result<MMElement> {
        match self {
            OpTerm::Semi(o) => o.apply(f),
            OpTerm::Jet(j) => j.apply(f),
        }
    }
}

/// A composition of operator terms, leftmost applied last.
#[derive(Clone, Debug, PartialEq)]
pub struct OpChain {
    pub terms: Vec<OpTerm>,
    /// Parameters of each factor, in order.
    pub params: Vec<Vec<String>>,
}

impl OpChain {
    pub fn apply(&self, f: &MMElement) -> Result<MMElement> {
        let mut v = f.clone();
        for t in self.terms.iter().rev() {
            v = t.apply(&v)?;
        }
        Ok(v)
    }

    /// Collapse into one semigeometric operator.
    pub fn to_semigeom(&self) -> Result<SemigeomOp> {
        let mut acc = SemigeomOp::identity();
        for t in &self.terms {
            match t {
                OpTerm::Semi(o) => acc = acc.compose(o)?,
                OpTerm::Jet(_) => {
                    return Err(Error::BadConfig("B- is a derivation, not a semigeometric operator".into()))
                }
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for OpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpTerm::Semi(o) => write!(f, "{o}"),
            OpTerm::Jet(j) => write!(f, "({}) * d/dtau M[1+tau*{}]", j.factor, j.eta),
        }
    }
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { column, message: message.into() }
}

/// Split at `sep` outside brackets and parentheses, keeping byte offsets.
fn split_top(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn col(text: &str, byte: usize) -> usize {
    text[..byte].chars().count()
}

fn scalar_at(whole: &str, off: usize, s: &str) -> Result<Scalar> {
    scalar_from_expr(&parse_expr_at(s, col(whole, off))?)
}

pub fn parse_chain(text: &str) -> Result<OpChain> {
    let mut terms = Vec::new();
    let mut params = Vec::new();
    for (off, piece) in split_top(text, '@') {
        let lead = piece.len() - piece.trim_start().len();
        let piece_t = piece.trim();
        let off = off + lead;
        let open = piece_t.find('[').ok_or_else(|| syntax(col(text, off) + 1, "expected '['"))?;
        if !piece_t.ends_with(']') {
            return Err(syntax(col(text, off + piece_t.len()) + 1, "expected ']'"));
        }
        let name = piece_t[..open].trim();
        let inner = &piece_t[open + 1..piece_t.len() - 1];
        let ioff = off + open + 1;
        let args = split_top(inner, ',');
        let arg = |i: usize| -> Result<Scalar> {
            let (o, s) = args.get(i).ok_or_else(|| syntax(col(text, ioff) + 1, "missing argument"))?;
            scalar_at(text, ioff + o, s)
        };
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(col(text, ioff) + 1, format!("{name} takes {n} argument(s)")))
            }
        };
        let term = match name {
            "M" => OpTerm::Semi(make_m(DivisorFunction::parse_at(inner, col(text, ioff))?)),
            "E" => {
                want(1)?;
                OpTerm::Semi(make_e(&arg(0)?))
            }
            "Ecycle" => {
                let mut cycle = Vec::new();
                for (o, pair) in &args {
                    let lead = pair.len() - pair.trim_start().len();
                    let p = pair.trim();
                    let po = ioff + o + lead;
                    if !(p.starts_with('(') && p.ends_with(')')) {
                        return Err(syntax(col(text, po) + 1, "expected (point,multiplicity)"));
                    }
                    let body = &p[1..p.len() - 1];
                    let parts = split_top(body, ',');
                    if parts.len() != 2 {
                        return Err(syntax(col(text, po) + 1, "expected (point,multiplicity)"));
                    }
                    let a = scalar_at(text, po + 1 + parts[0].0, parts[0].1)?;
                    let k = scalar_at(text, po + 1 + parts[1].0, parts[1].1)?;
                    let k = k
                        .as_q()
                        .filter(|q| q.is_integer())
                        .and_then(|q| i64::try_from(q.to_integer()).ok())
                        .ok_or_else(|| syntax(col(text, po + 1 + parts[1].0) + 1, "multiplicity must be an integer"))?;
                    cycle.push((a, k));
                }
                OpTerm::Semi(make_ecycle(&cycle))
            }
            "F" | "G" | "Gcal" => {
                want(2)?;
                let (a, b) = (arg(0)?, arg(1)?);
                OpTerm::Semi(match name {
                    "F" => make_f(&a, &b),
                    "G" => make_g(&a, &b),
                    _ => make_gcal(&a, &b)?,
                })
            }
            "phi" | "psi" | "psi+" | "B+" | "B-" => {
                want(1)?;
                let a = arg(0)?;
                match name {
                    "phi" => OpTerm::Semi(make_phi(&a)),
                    "psi" => OpTerm::Semi(make_psi(&a)),
                    "psi+" => OpTerm::Semi(make_psi_plus(&a)),
                    "B+" => OpTerm::Semi(make_b_plus(&a)),
                    _ => OpTerm::Jet(make_b_minus(&a)),
                }
            }
            _ => return Err(syntax(col(text, off) + 1, format!("unknown operator '{name}'"))),
        };
        let ps = match &term {
            OpTerm::Semi(o) => o.params().into_iter().collect(),
            OpTerm::Jet(j) => j.eta.params().into_iter().collect(),
        };
        params.push(ps);
        terms.push(term);
    }
    Ok(OpChain { terms, params })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_catalog() {
        let c = parse_chain("psi[r] @ psi+[s]").unwrap();
        assert_eq!(c.terms.len(), 2);
        let op = c.to_semigeom().unwrap();
        assert_eq!(op, make_psi(&Scalar::param("r")).compose(&make_psi_plus(&Scalar::param("s"))).unwrap());
        let e = parse_chain("Ecycle[(a,1),(b,-1)]").unwrap().to_semigeom().unwrap();
        assert_eq!(e.prefactor, MMElement::parse("E[a;0]/E[b;0]").unwrap());
        assert!(parse_chain("B-[s] @ B+[r]").unwrap().to_semigeom().is_err());
    }

    #[test]
    fn reports_columns() {
        match parse_chain("psi[r] @ foo[s]") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 10),
            other => panic!("{other:?}"),
        }
        match parse_chain("M[(z-1]") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn applies_right_to_left() {
        let c = parse_chain("M[(z-2)/(z-3)]").unwrap();
        let v = c.apply(&MMElement::parse("E[1;0]").unwrap()).unwrap();
        assert_eq!(v.to_string(), "1/2*E[1;0]");
    }
}
