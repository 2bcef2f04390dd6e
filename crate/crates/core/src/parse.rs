//! Text grammars for trace expressions and polynomials.
//!
//! Trace expressions (whitespace is ignored everywhere):
//!
//! ```text
//! expr      := [sign] term (sign term)*
//! term      := rational ['*' factor ('*' factor)*] | factor ('*' factor)*
//! factor    := 'tr' '(' word ')'
//! word      := matrixref ('*' matrixref)*
//! matrixref := 'X' integer            (integer >= 1)
//! rational  := integer ['/' integer]  (denominator >= 1)
//! sign      := '+' | '-'
//! ```
//!
//! Polynomials use the same term structure with variables in place of
//! trace factors:
//!
//! ```text
//! pfactor   := var ['^' integer]
//! var       := 'x[' i ';' h ',' k ']'   generic entry
//!            | 'x[' i ',' j ']'         diagonal coordinate
//!            | 'x[' i ']'               abstract variable
//! ```
//!
//! Both grammars accept everything the corresponding `Display` impls emit.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Family, Monomial, Polynomial, Rational, Variable};
use crate::traceinv::{TraceExpression, TraceWord};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let found = match self.src.get(self.pos) {
            Some(&b) => format!(", found '{}'", b as char),
            None => ", found end of input".to_string(),
        };
        Error::Parse {
            pos: self.pos,
            msg: format!("{}{found}", msg.into()),
        }
    }

    fn at_digit(&mut self) -> bool {
        matches!(self.peek(), Some(b) if b.is_ascii_digit())
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit run"))
    }

    fn index(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let v = self.integer()?;
        if v.is_zero() {
            return Err(Error::Parse {
                pos: start,
                msg: format!("{what} must be a positive integer"),
            });
        }
        u32::try_from(v).map_err(|_| Error::Parse {
            pos: start,
            msg: format!("{what} too large"),
        })
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let pos = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(Error::Parse {
                    pos,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }
}

/// Shared skeleton for both grammars: signed sums of optionally-scaled
/// products of factors.
fn parse_sum<T, F>(cur: &mut Cursor<'_>, mut factor: F) -> Result<Vec<(Rational, Vec<T>)>>
where
    F: FnMut(&mut Cursor<'_>) -> Result<T>,
{
    let mut terms = Vec::new();
    let mut sign = if cur.eat(b'-') {
        -Rational::one()
    } else {
        cur.eat(b'+');
        Rational::one()
    };
    loop {
        let mut coeff = sign.clone();
        let mut factors = Vec::new();
        if cur.at_digit() {
            coeff *= cur.rational()?;
            if cur.eat(b'*') {
                factors.push(factor(cur)?);
            }
        } else {
            factors.push(factor(cur)?);
        }
        while cur.eat(b'*') {
            factors.push(factor(cur)?);
        }
        terms.push((coeff, factors));
        if cur.eat(b'+') {
            sign = Rational::one();
        } else if cur.eat(b'-') {
            sign = -Rational::one();
        } else {
            break;
        }
    }
    cur.finish()?;
    Ok(terms)
}

fn trace_factor(cur: &mut Cursor<'_>) -> Result<TraceWord> {
    if !cur.eat_keyword("tr") {
        return Err(cur.error("expected 'tr(' or a rational coefficient"));
    }
    cur.expect(b'(')?;
    let mut letters = Vec::new();
    if cur.peek() == Some(b')') {
        return Err(cur.error("empty trace word"));
    }
    loop {
        cur.expect(b'X')?;
        letters.push(cur.index("matrix index")?);
        if !cur.eat(b'*') {
            break;
        }
    }
    cur.expect(b')')?;
    TraceWord::new(letters)
}

/// Parses a trace expression; words are normalized cyclically.
pub fn parse_expression(text: &str) -> Result<TraceExpression> {
    let mut cur = Cursor::new(text);
    let terms = parse_sum(&mut cur, trace_factor)?;
    Ok(terms
        .into_iter()
        .fold(TraceExpression::zero(), |acc, (c, factors)| {
            acc.add(&TraceExpression::product(factors, c))
        }))
}

fn poly_factor(cur: &mut Cursor<'_>) -> Result<(Variable, u32)> {
    if !cur.eat_keyword("x") {
        return Err(cur.error("expected a variable 'x[...]' or a rational coefficient"));
    }
    cur.expect(b'[')?;
    let copy = cur.index("copy index")?;
    let var = if cur.eat(b';') {
        let row = cur.index("row index")?;
        cur.expect(b',')?;
        let col = cur.index("column index")?;
        Variable::Generic { copy, row, col }
    } else if cur.eat(b',') {
        let coord = cur.index("coordinate index")?;
        Variable::Diagonal { copy, coord }
    } else {
        Variable::Abstract { copy }
    };
    cur.expect(b']')?;
    let exp = if cur.eat(b'^') {
        let pos = cur.pos;
        let e = cur.integer()?;
        u32::try_from(e).map_err(|_| Error::Parse {
            pos,
            msg: "exponent too large".into(),
        })?
    } else {
        1
    };
    Ok((var, exp))
}

/// Parses a polynomial whose variables must all belong to `family`; the
/// family also types constant polynomials.
pub fn parse_polynomial(text: &str, family: Family) -> Result<Polynomial> {
    let mut cur = Cursor::new(text);
    let terms = parse_sum(&mut cur, poly_factor)?;
    Polynomial::from_terms(
        family,
        terms
            .into_iter()
            .map(|(c, powers)| (Monomial::from_powers(powers), c)),
    )
}
