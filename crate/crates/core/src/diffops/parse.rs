//! Recursive-descent reader for operator expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)*
//! atom   := int ['/' posint] | 'i' | var | deriv | '(' expr ')'
//! var    := 'x' nat | 'x' | 'y' | 'z'
//! deriv  := 'd' nat | 'd' var | 'd'
//! ```
//!
//! `x`, `y`, `z` are `x1`, `x2`, `x3`; a bare `d` is `d1`. Products are
//! normal-ordered as they are built, so `d1*x1` reads as `x1*d1 + 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::DiffOp;
use crate::error::{Error, Result};
use crate::finsupp::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
    I,
    Var(usize, String),
    Deriv(usize, String),
    End,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax { position, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> Option<String> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (*i > start).then(|| chars[start..*i].iter().collect())
    };
    while i < chars.len() {
        let c = chars[i];
        let at = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '0'..='9' => {
                let s = digits(&mut i).expect("at a digit");
                out.push((at, Tok::Int(s.parse().expect("decimal digits"))));
                continue;
            }
            '/' => Tok::Slash,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            'i' => Tok::I,
            'x' | 'y' | 'z' => {
                i += 1;
                out.push((at, variable(c, &mut i, &digits)?));
                continue;
            }
            'd' => {
                i += 1;
                let tok = match chars.get(i) {
                    Some(d) if d.is_ascii_digit() => {
                        let s = digits(&mut i).expect("at a digit");
                        Tok::Deriv(parse_index(&s, at)?, format!("d{s}"))
                    }
                    Some(&v @ ('x' | 'y' | 'z')) => {
                        i += 1;
                        match variable(v, &mut i, &digits)? {
                            Tok::Var(k, name) => Tok::Deriv(k, format!("d{name}")),
                            _ => unreachable!(),
                        }
                    }
                    _ => Tok::Deriv(1, "d".into()),
                };
                out.push((at, tok));
                continue;
            }
            other => return Err(syntax(at, format!("unexpected character {other:?}"))),
        };
        out.push((at, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

fn parse_index(s: &str, at: usize) -> Result<usize> {
    s.parse().map_err(|_| syntax(at, format!("variable index {s} is too large")))
}

fn variable(c: char, i: &mut usize, digits: &dyn Fn(&mut usize) -> Option<String>) -> Result<Tok> {
    let at = *i - 1;
    Ok(match c {
        'x' => match digits(i) {
            Some(s) => Tok::Var(parse_index(&s, at)?, format!("x{s}")),
            None => Tok::Var(1, "x".into()),
        },
        'y' => Tok::Var(2, "y".into()),
        _ => Tok::Var(3, "z".into()),
    })
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    dims: usize,
    field: Field,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn at(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn constant(&self, c: Scalar) -> DiffOp {
        DiffOp::constant(self.dims, c)
    }

    fn expr(&mut self) -> Result<DiffOp> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.try_add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffOp> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.compose(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffOp> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let at = self.at();
            let k = match self.bump() {
                Tok::Int(n) => n.to_u32().ok_or_else(|| syntax(at, "exponent too large"))?,
                _ => return Err(syntax(at, "expected a natural-number exponent")),
            };
            base = base.pow(k)?;
        }
        Ok(base)
    }

    fn index(&self, k: usize, name: &str) -> Result<usize> {
        if k == 0 || k > self.dims {
            return Err(Error::UnknownVariable(name.to_string()));
        }
        Ok(k - 1)
    }

    fn atom(&mut self) -> Result<DiffOp> {
        let at = self.at();
        match self.bump() {
            Tok::Int(n) => {
                let mut q = BigRational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let at = self.at();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => q /= BigRational::from_integer(d),
                        _ => return Err(syntax(at, "expected a positive denominator")),
                    }
                }
                Ok(self.constant(self.field.from_rational(&q)?))
            }
            Tok::I => Ok(self.constant(self.field.imaginary_unit()?)),
            Tok::Var(k, name) => Ok(DiffOp::x(self.dims, self.index(k, &name)?, self.field)),
            Tok::Deriv(k, name) => Ok(DiffOp::d(self.dims, self.index(k, &name)?, self.field)),
            Tok::Open => {
                let inner = self.expr()?;
                let at = self.at();
                match self.bump() {
                    Tok::Close => Ok(inner),
                    _ => Err(syntax(at, "expected ')'")),
                }
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            other => Err(syntax(at, format!("unexpected {other:?}"))),
        }
    }
}

pub(super) fn parse(text: &str, dims: Option<usize>, field: Option<Field>) -> Result<DiffOp> {
    let toks = lex(text)?;
    let dims = dims.unwrap_or_else(|| {
        toks.iter()
            .filter_map(|(_, t)| match t {
                Tok::Var(k, _) | Tok::Deriv(k, _) => Some(*k),
                _ => None,
            })
            .max()
            .unwrap_or(1)
            .max(1)
    });
    let field = field.unwrap_or(if toks.iter().any(|(_, t)| *t == Tok::I) {
        Field::Gaussian
    } else {
        Field::Rational
    });
    let mut p = Parser { toks, pos: 0, dims, field };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.at(), format!("unexpected {:?}", p.peek())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::integer(n)
    }

    #[test]
    fn grammar_examples() {
        let p = DiffOp::parse("d1 + 1").unwrap();
        assert_eq!(p.terms().count(), 2);
        assert_eq!(p.coeff(&[0], &[1]), q(1));
        assert_eq!(p.coeff(&[0], &[0]), q(1));
        let rot = DiffOp::parse("x1*d2 - x2*d1").unwrap();
        assert_eq!(rot.coeff(&[1, 0], &[0, 1]), q(1));
        assert_eq!(rot.coeff(&[0, 1], &[1, 0]), q(-1));
        assert_eq!(DiffOp::parse("d1*x1").unwrap().to_string(), "1 + x1*d1");
        assert_eq!(DiffOp::parse("dx*y - dy*x").unwrap(), rot.neg());
        assert_eq!(DiffOp::parse("(x + 1)^2").unwrap().to_string(), "1 + 2*x1 + x1^2");
        assert_eq!(DiffOp::parse("-1/2*x3").unwrap().dims(), 3);
    }

    #[test]
    fn errors() {
        assert!(matches!(DiffOp::parse("x1 + "), Err(Error::Syntax { position: 5, .. })));
        assert!(matches!(DiffOp::parse("x1 $ 2"), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(DiffOp::parse("(x1"), Err(Error::Syntax { .. })));
        assert!(matches!(DiffOp::parse("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(DiffOp::parse("x1 x2"), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(DiffOp::parse_with_dims("x3", 2), Err(Error::UnknownVariable(v)) if v == "x3"));
        assert!(matches!(DiffOp::parse("x0"), Err(Error::UnknownVariable(_))));
        assert!(DiffOp::parse_in("i*d1", 1, Field::Rational).is_err());
    }

    #[test]
    fn prime_field() {
        let gf3 = Field::prime(3).unwrap();
        let p = DiffOp::parse_in("3*x1 + d1", 1, gf3).unwrap();
        assert_eq!(p.terms().count(), 1);
    }
}
