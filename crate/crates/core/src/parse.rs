//! Expression parser for Laurent polynomials.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | 'y' | 'z' | '(' expr ')'
//! ```
//!
//! The right operand of `/` must expand to a single nonzero monomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::laurent::{Axis, Laurent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("divisor is not a single monomial")]
    DivisionByNonMonomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent too large")]
    ExponentTooLarge,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

const MAX_EXPONENT: u32 = 1024;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Var(Axis),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, ch) = bytes[i];
        let tok = match ch {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                let end = bytes.get(i).map_or(text.len(), |b| b.0);
                let digits = &text[bytes[start].0..end];
                out.push((Token::Int(digits.parse().expect("ascii digits")), pos));
                continue;
            }
            'x' => Token::Var(Axis::X),
            'y' => Token::Var(Axis::Y),
            'z' => Token::Var(Axis::Z),
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c => {
                return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(c), position: pos });
            }
        };
        out.push((tok, pos));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

type Poly = Laurent<BigRational>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, position: self.offset() }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let divisor = self.unary()?;
                    acc = divide(&acc, &divisor).map_err(|kind| ParseError { kind, position: at })?;
                }
                Some(Token::Int(_)) | Some(Token::Var(_)) | Some(Token::LParen) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                let n = n
                    .to_u32()
                    .filter(|&n| n <= MAX_EXPONENT)
                    .ok_or_else(|| self.err(ParseErrorKind::ExponentTooLarge))?;
                self.pos += 1;
                Ok(base.pow(n))
            }
            Some(_) => Err(self.err(ParseErrorKind::Expected("nonnegative integer exponent"))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Poly::constant(BigRational::from_integer(n)))
            }
            Some(Token::Var(a)) => {
                self.pos += 1;
                Ok(Poly::var(a))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.err(match self.peek() {
                        None => ParseErrorKind::UnexpectedEnd,
                        Some(_) => ParseErrorKind::Expected("`)`"),
                    }));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.err(ParseErrorKind::Expected("number, variable or `(`"))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }
}

fn divide(num: &Poly, den: &Poly) -> Result<Poly, ParseErrorKind> {
    if den.is_zero() {
        return Err(ParseErrorKind::DivisionByZero);
    }
    let (e, c) = den.as_monomial().ok_or(ParseErrorKind::DivisionByNonMonomial)?;
    debug_assert!(!c.is_zero());
    Ok(num.shift(-e, &c.recip()))
}

/// Parses and expands an expression such as `(x+1)^2/(x*y*z) + y/z + z`.
pub fn parse(text: &str) -> Result<Laurent<BigRational>, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, end: text.len() };
    let out = p.expr()?;
    if p.pos < p.tokens.len() {
        let tok = &p.tokens[p.pos];
        let kind = match tok.0 {
            Token::RParen => ParseErrorKind::UnexpectedChar(')'),
            _ => ParseErrorKind::Expected("operator"),
        };
        return Err(ParseError { kind, position: tok.1 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Exponent;
    use crate::scalar::{int, rational};

    #[test]
    fn simplex_model() {
        let f = parse("x+y+z+1/(x*y*z)").unwrap();
        let expected = Poly::from_terms([
            (Exponent::new(1, 0, 0), int(1)),
            (Exponent::new(0, 1, 0), int(1)),
            (Exponent::new(0, 0, 1), int(1)),
            (Exponent::new(-1, -1, -1), int(1)),
        ]);
        assert_eq!(f, expected);
    }

    #[test]
    fn square_over_monomial() {
        let f = parse("(x+1)^2/(xyz)+y/z+z").unwrap();
        let expected = Poly::from_terms([
            (Exponent::new(1, -1, -1), int(1)),
            (Exponent::new(0, -1, -1), int(2)),
            (Exponent::new(-1, -1, -1), int(1)),
            (Exponent::new(0, 1, -1), int(1)),
            (Exponent::new(0, 0, 1), int(1)),
        ]);
        assert_eq!(f, expected);
    }

    #[test]
    fn zero_and_constants() {
        assert!(parse("0").unwrap().is_zero());
        assert_eq!(parse(" -3 + 1/2 ").unwrap(), Poly::constant(rational(-5, 2)));
        assert_eq!(parse("2x").unwrap(), parse("2*x").unwrap());
        assert_eq!(parse("-x^2").unwrap(), -parse("x^2").unwrap());
        assert_eq!(parse("x^0").unwrap(), Poly::one());
    }

    #[test]
    fn division_is_left_associative() {
        assert_eq!(parse("1/x*y").unwrap(), parse("y/x").unwrap());
        assert_eq!(parse("x/2/x").unwrap(), Poly::constant(rational(1, 2)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x + 1/(x+y)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByNonMonomial);
        assert_eq!(e.position, 6);

        let e = parse("x/(y-y)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByZero);

        let e = parse("x + w").unwrap_err();
        assert_eq!(e, ParseError { kind: ParseErrorKind::UnexpectedChar('w'), position: 4 });

        assert_eq!(parse("(x+1").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse("x^y").unwrap_err().kind, ParseErrorKind::Expected("nonnegative integer exponent"));
        assert_eq!(parse("x)").unwrap_err().kind, ParseErrorKind::UnexpectedChar(')'));
        assert_eq!(parse("").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse("x^99999").unwrap_err().kind, ParseErrorKind::ExponentTooLarge);
    }
}
