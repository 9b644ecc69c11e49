//! Shared expression grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' int)?
//! atom  := integer | ident | 'E' '[' expr ';' int ']' | '(' expr ')'
//! ```
//!
//! Columns in errors are 1-based character positions.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Ident(String, usize),
    Eval(Box<Expr>, u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str, offset: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()[];,".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(Error::Syntax { column: col, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: self.col(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn signed_int(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let v = match self.peek() {
            Some(Tok::Num(n)) => {
                let v: i64 = n.try_into().or_else(|_| self.err("integer too large"))?;
                self.pos += 1;
                v
            }
            _ => return self.err("expected integer"),
        };
        if paren {
            self.expect(')')?;
        }
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.signed_int()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(id)) if id == "E" && self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::Sym('[')) => {
                self.pos += 2;
                let point = self.expr()?;
                self.expect(';')?;
                let k = self.signed_int()?;
                if k < 0 {
                    return self.err("derivative order must be nonnegative");
                }
                self.expect(']')?;
                Ok(Expr::Eval(Box::new(point), k as u32))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                Ok(Expr::Ident(id, col))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a complete expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    parse_expr_at(text, 0)
}

/// Parse with columns shifted by `offset` characters.
pub fn parse_expr_at(text: &str, offset: usize) -> Result<Expr> {
    let toks = lex(text, offset)?;
    let mut p = Parser { toks, pos: 0, end_col: offset + text.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// True for identifiers of the form `[a-z][a-z0-9_]*`.
pub fn is_param_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unterminated_symbol_reports_column() {
        match parse_expr("E[0;0") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_exponent() {
        let e = parse_expr("(z-r)^-1").unwrap();
        assert!(matches!(e, Expr::Pow(_, -1)));
    }

    #[test]
    fn precedence_of_unary_minus() {
        let e = parse_expr("-x^2").unwrap();
        assert!(matches!(e, Expr::Neg(_)));
    }

    #[test]
    fn param_names() {
        assert!(is_param_name("r_2"));
        assert!(!is_param_name("T"));
        assert!(!is_param_name("2a"));
    }
}
