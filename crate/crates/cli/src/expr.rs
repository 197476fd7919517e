//! The statistic-expression language.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' uint)?
//! atom     := rational | 'X' uint | 'C(' 'X' uint ',' uint ')' | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//!
//! `int` may carry a leading `-`; a `-` is read as a sign only where an atom
//! is expected, so `X1 - 1` is a difference and `X1 * -1` a product.

use std::fmt;

use confstat::{CharacterPolynomial, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rational(Rational),
    Var(u32),
    /// `C(X_j, k)`.
    Binomial(u32, u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn to_polynomial(&self) -> CharacterPolynomial {
        match self {
            Expr::Rational(c) => CharacterPolynomial::constant(c.clone()),
            Expr::Var(j) => CharacterPolynomial::var(*j),
            Expr::Binomial(j, k) => CharacterPolynomial::binomial(*j, *k),
            Expr::Add(a, b) => a.to_polynomial() + b.to_polynomial(),
            Expr::Sub(a, b) => a.to_polynomial() - b.to_polynomial(),
            Expr::Mul(a, b) => a.to_polynomial() * b.to_polynomial(),
            Expr::Pow(a, e) => a.to_polynomial().pow(*e),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Rational(c) if c.is_negative() => 3,
            _ => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(c) => write!(f, "{c}"),
            Expr::Var(j) => write!(f, "X{j}"),
            Expr::Binomial(j, k) => write!(f, "C(X{j},{k})"),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.fmt_child(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, "*")?;
                b.fmt_child(f, 3)
            }
            Expr::Pow(a, e) => {
                a.fmt_child(f, 4)?;
                write!(f, "^{e}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownIdentifier(String),
    MalformedRational(String),
    UnclosedParen,
    UnmatchedParen,
    UnexpectedChar(char),
    Unexpected { found: String, expected: &'static str },
    ExponentTooLarge(String),
}

/// A syntax error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier '{s}'"),
            ParseErrorKind::MalformedRational(s) => write!(f, "malformed rational '{s}'"),
            ParseErrorKind::UnclosedParen => write!(f, "mismatched parentheses: '(' is never closed"),
            ParseErrorKind::UnmatchedParen => write!(f, "mismatched parentheses: unexpected ')'"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::Unexpected { found, expected } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::ExponentTooLarge(s) => write!(f, "exponent {s} exceeds {MAX_EXPONENT}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Number(String),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(s) => format!("number '{s}'"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };
    let advance = |pos: &mut Pos, c: char| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(&mut pos, c);
        } else if c.is_ascii_digit() || c.is_alphabetic() {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_alphanumeric() && d != '_' {
                    break;
                }
                word.push(d);
                chars.next();
                advance(&mut pos, d);
            }
            if word.chars().all(|d| d.is_ascii_digit()) {
                out.push((Tok::Number(word), start));
            } else if c.is_ascii_digit() {
                return Err(ParseError { line: start.line, column: start.column, kind: ParseErrorKind::MalformedRational(word) });
            } else {
                out.push((Tok::Ident(word), start));
            }
        } else if "+-*^/(),".contains(c) {
            chars.next();
            advance(&mut pos, c);
            out.push((Tok::Sym(c), start));
        } else {
            return Err(ParseError { line: start.line, column: start.column, kind: ParseErrorKind::UnexpectedChar(c) });
        }
    }
    out.push((Tok::End, pos));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    at: usize,
    open: Vec<Pos>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error_at(pos: Pos, kind: ParseErrorKind) -> ParseError {
        ParseError { line: pos.line, column: pos.column, kind }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let found = self.peek();
        let kind = match found {
            Tok::Sym(')') if self.open.is_empty() => ParseErrorKind::UnmatchedParen,
            Tok::End if !self.open.is_empty() => {
                return Self::error_at(*self.open.last().expect("nonempty"), ParseErrorKind::UnclosedParen)
            }
            _ => ParseErrorKind::Unexpected { found: found.describe(), expected },
        };
        Self::error_at(self.pos(), kind)
    }

    fn expect(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.next();
                    left = Expr::Add(Box::new(left), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.next();
                    left = Expr::Sub(Box::new(left), Box::new(self.term()?));
                }
                _ => return Ok(left),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.factor()?;
        while *self.peek() == Tok::Sym('*') {
            self.next();
            left = Expr::Mul(Box::new(left), Box::new(self.factor()?));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.next();
        let (digits, pos) = self.uint("an exponent")?;
        let e = digits
            .parse::<u32>()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| Self::error_at(pos, ParseErrorKind::ExponentTooLarge(digits.clone())))?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn uint(&mut self, expected: &'static str) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Number(d) => {
                let pos = self.pos();
                self.next();
                Ok((d, pos))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn variable_index(name: &str, pos: Pos) -> Result<u32, ParseError> {
        name.strip_prefix('X')
            .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) && !d.starts_with('0'))
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| Self::error_at(pos, ParseErrorKind::UnknownIdentifier(name.to_string())))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = (self.peek().clone(), self.pos());
        match tok {
            Tok::Sym('-') if matches!(self.tokens[self.at + 1].0, Tok::Number(_)) => {
                self.next();
                self.rational(pos, true)
            }
            Tok::Number(_) => self.rational(pos, false),
            Tok::Sym('(') => {
                self.next();
                self.open.push(pos);
                let inner = self.expr()?;
                self.expect(')', "'+', '-', '*' or ')'")?;
                self.open.pop();
                Ok(inner)
            }
            Tok::Ident(name) if name == "C" => {
                self.next();
                self.expect('(', "'(' after C")?;
                self.open.push(pos);
                let (var, var_pos) = match self.next() {
                    (Tok::Ident(v), p) => (v, p),
                    (other, p) => {
                        return Err(Self::error_at(
                            p,
                            ParseErrorKind::Unexpected { found: other.describe(), expected: "a variable X1, X2, ..." },
                        ))
                    }
                };
                let j = Self::variable_index(&var, var_pos)?;
                self.expect(',', "','")?;
                let (digits, kpos) = self.uint("a nonnegative integer")?;
                let k = digits
                    .parse::<u32>()
                    .map_err(|_| Self::error_at(kpos, ParseErrorKind::MalformedRational(digits.clone())))?;
                self.expect(')', "')'")?;
                self.open.pop();
                Ok(Expr::Binomial(j, k))
            }
            Tok::Ident(name) => {
                let j = Self::variable_index(&name, pos)?;
                self.next();
                Ok(Expr::Var(j))
            }
            _ => Err(self.unexpected("a number, variable, C(...) or '('")),
        }
    }

    fn rational(&mut self, start: Pos, negative: bool) -> Result<Expr, ParseError> {
        let (num, _) = self.uint("a number")?;
        let mut text = format!("{}{num}", if negative { "-" } else { "" });
        let mut value = BigInt::parse_bytes(num.as_bytes(), 10).expect("digits");
        if negative {
            value = -value;
        }
        let mut den = BigInt::from(1);
        if *self.peek() == Tok::Sym('/') {
            self.next();
            text.push('/');
            match self.peek().clone() {
                Tok::Number(d) => {
                    self.next();
                    text.push_str(&d);
                    den = BigInt::parse_bytes(d.as_bytes(), 10).expect("digits");
                }
                _ => return Err(Self::error_at(start, ParseErrorKind::MalformedRational(text))),
            }
            if den.is_zero() {
                return Err(Self::error_at(start, ParseErrorKind::MalformedRational(text)));
            }
        }
        Ok(Expr::Rational(Rational::new(value, den)))
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser { tokens: tokenize(text)?, at: 0, open: Vec::new() };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("'+', '-', '*' or end of input"));
    }
    Ok(expr)
}

/// Parses and expands to a character polynomial.
pub fn parse_polynomial(text: &str) -> Result<CharacterPolynomial, ParseError> {
    parse_expression(text).map(|e| e.to_polynomial())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        parse_expression(text).unwrap_err()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse_expression("1 - 2 - 3").unwrap().to_polynomial(), CharacterPolynomial::constant(confstat::rational::int(-4)));
        assert_eq!(parse_expression("2*X1^2").unwrap().to_string(), "2*X1^2");
        assert_eq!(parse_expression("1 - (2 - 3)").unwrap().to_string(), "1 - (2 - 3)");
        assert_eq!(parse_expression("X1 * -1").unwrap().to_polynomial().to_string(), "-1*X1");
        assert_eq!(parse_expression("(X1 + 1)^2").unwrap().to_polynomial().to_string(), "X1^2 + 2*X1 + 1");
    }

    #[test]
    fn canonical_text_reparses() {
        let p = parse_polynomial("C(X1,2)+X2").unwrap();
        assert_eq!(p.to_string(), "1/2*X1^2 - 1/2*X1 + X2");
        assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
        assert_eq!(parse_polynomial("-1*X1 + 3").unwrap().to_string(), "-1*X1 + 3");
    }

    #[test]
    fn errors_carry_positions() {
        let e = err("X1 + Y2");
        assert_eq!((e.line, e.column), (1, 6));
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("Y2".into()));
        let e = err("X1 +\n  (X2 * 3");
        assert_eq!((e.line, e.column, e.kind), (2, 3, ParseErrorKind::UnclosedParen));
        let e = err("X1)");
        assert_eq!((e.line, e.column, e.kind), (1, 3, ParseErrorKind::UnmatchedParen));
        let e = err("1/0 + X1");
        assert_eq!((e.column, e.kind), (1, ParseErrorKind::MalformedRational("1/0".into())));
        assert!(matches!(err("3/ + 1").kind, ParseErrorKind::MalformedRational(_)));
        assert!(matches!(err("2x").kind, ParseErrorKind::MalformedRational(_)));
        assert!(matches!(err("X0").kind, ParseErrorKind::UnknownIdentifier(_)));
        assert!(matches!(err("C(Y1,2)").kind, ParseErrorKind::UnknownIdentifier(_)));
        assert!(matches!(err("X1^99").kind, ParseErrorKind::ExponentTooLarge(_)));
        assert!(matches!(err("X1 $").kind, ParseErrorKind::UnexpectedChar('$')));
        assert!(matches!(err("").kind, ParseErrorKind::Unexpected { .. }));
        assert_eq!(err("X1 + Y2").to_string(), "line 1, column 6: unknown identifier 'Y2'");
    }
}
