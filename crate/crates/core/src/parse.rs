//! Lexer and recursive-descent parsers for exponents, series, expressions
//! and user polynomials.
//!
//! Series grammar (canonical printed form):
//!
//! ```text
//! series   := '-'? term (('+'|'-') term)* ('+' 'O' '(' mono ')')? | 'O' '(' mono ')'
//! term     := coeff ('*' mono)? | mono
//! mono     := 't' ('^' expo)?
//! expo     := rational | '(' rational ')' | '[' rational (',' rational)* ']'
//! rational := '-'? digits ('/' digits)?
//! coeff    := rational | decimal
//! ```
//!
//! Expressions add `* / ^`, parentheses and function calls; unary minus
//! applies to a power and binds tighter than `*` and `/`:
//!
//! ```text
//! expr    := product (('+'|'-') product)*
//! product := factor (('*'|'/') factor)*
//! factor  := '-' factor | power
//! power   := atom ('^' expo)?
//! atom    := coeff | mono | 'O' '(' mono ')' | name '(' args ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::analytic::{Polynomial, MAX_POLY_ARITY};
use crate::coeff::{Coeff, CoeffMode};
use crate::error::{Error, Result};
use crate::exponent::{Bound, Exponent};
use crate::real::Real;
use crate::series::{Context, Series};

/// Deepest nesting accepted before reporting a syntax error.
const MAX_DEPTH: usize = 200;
/// Largest decimal exponent accepted in a decimal literal.
const MAX_DECIMAL_EXPONENT: i64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    /// A numeric literal; `decimal` if it has a fractional part or an
    /// exponent, `inexact` if followed by `~`.
    Num { text: String, decimal: bool, inexact: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { text, .. } => format!("number `{text}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

/// Build a located syntax error; `offset` is a byte offset into `src`.
pub(crate) fn syntax_error(src: &str, offset: usize, message: impl Into<String>) -> Error {
    let offset = offset.min(src.len());
    let before = &src.as_bytes()[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let line_start = before.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    let column = String::from_utf8_lossy(&before[line_start..]).chars().count() + 1;
    Error::Syntax {
        offset,
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let simple = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBrack),
            b']' => Some(Tok::RBrack),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, offset: start });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() || (b == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let mut decimal = false;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                decimal = true;
                i += 1;
                let frac_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac_start && start + 1 == i {
                    return Err(syntax_error(src, start, "malformed number"));
                }
                // Exponent part, only after a fractional point.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
            }
            let text = src[start..i].to_string();
            let inexact = i < bytes.len() && bytes[i] == b'~';
            if inexact {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Num { text, decimal, inexact },
                offset: start,
            });
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                offset: start,
            });
            continue;
        }
        let ch = src[start..].chars().next().expect("in bounds");
        return Err(syntax_error(src, start, format!("unexpected character {ch:?}")));
    }
    out.push(Token {
        tok: Tok::Eof,
        offset: src.len(),
    });
    Ok(out)
}

/// Expression syntax tree. Literals are already converted to the session's
/// coefficient mode and exponents checked against its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Coeff),
    /// `t^gamma`.
    Mono(Exponent),
    /// `O(t^gamma)`.
    BigO(Exponent),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, BigRational),
    /// `trunc(e, w)`: evaluate `e` with cutoff `w`.
    Trunc(Box<Expr>, Exponent),
    /// Function application. `params` holds leading rational literals
    /// (the `n` of `root(n, x)`, the `q` of `pow1p(q, x)`).
    Call {
        name: String,
        params: Vec<BigRational>,
        args: Vec<Expr>,
    },
}

/// Functions whose first argument is a rational literal.
const PARAM_FUNCTIONS: [&str; 3] = ["root", "pow1p", "pow1p_half"];

struct Parser<'s> {
    src: &'s str,
    toks: Vec<Token>,
    pos: usize,
    ctx: Context,
    depth: usize,
}

impl<'s> Parser<'s> {
    fn new(src: &'s str, ctx: Context) -> Result<Self> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
            ctx,
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        syntax_error(self.src, self.offset(), msg)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        self.err(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err(format!("nesting deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    /// Unsigned integer literal.
    fn digits(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Num { text, decimal: false, inexact: false } => {
                self.bump();
                Ok(text.parse::<BigInt>().expect("lexer yields digits"))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    /// `rational := '-'? digits ('/' digits)?`
    fn rational(&mut self) -> Result<BigRational> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = self.digits()?;
        let d = if *self.peek() == Tok::Slash {
            self.bump();
            let at = self.offset();
            let d = self.digits()?;
            if d.is_zero() {
                return Err(syntax_error(self.src, at, "zero denominator"));
            }
            d
        } else {
            BigInt::from(1)
        };
        let q = BigRational::new(n, d);
        Ok(if neg { -q } else { q })
    }

    /// `expo := rational | '(' rational ')' | '[' rational (',' rational)* ']'`
    fn expo(&mut self) -> Result<Exponent> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let q = self.rational()?;
                self.expect(Tok::RParen)?;
                self.scalar_exponent(q)
            }
            Tok::LBrack => {
                self.bump();
                let mut coords = vec![self.rational()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    coords.push(self.rational()?);
                }
                self.expect(Tok::RBrack)?;
                if coords.len() != self.ctx.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.ctx.dim,
                        found: coords.len(),
                    });
                }
                Exponent::new(coords)
            }
            Tok::Minus | Tok::Num { .. } => {
                let q = self.rational()?;
                self.scalar_exponent(q)
            }
            _ => Err(self.unexpected("an exponent")),
        }
    }

    fn scalar_exponent(&self, q: BigRational) -> Result<Exponent> {
        if self.ctx.dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: self.ctx.dim,
                found: 1,
            });
        }
        Ok(Exponent::scalar(q))
    }

    /// `mono := 't' ('^' expo)?`
    fn mono(&mut self) -> Result<Exponent> {
        if !self.is_ident("t") {
            return Err(self.unexpected("`t`"));
        }
        self.bump();
        if *self.peek() == Tok::Caret {
            self.bump();
            self.expo()
        } else {
            self.scalar_exponent(BigRational::from_integer(BigInt::from(1)))
        }
    }

    /// `'O' '(' mono ')'`, with the `O` already peeked.
    fn big_o(&mut self) -> Result<Exponent> {
        self.bump();
        self.expect(Tok::LParen)?;
        let w = self.mono()?;
        self.expect(Tok::RParen)?;
        Ok(w)
    }

    /// A coefficient literal in the session mode, with an optional sign.
    fn coeff(&mut self, negate: bool) -> Result<Coeff> {
        let at = self.offset();
        let Tok::Num { text, decimal, inexact } = self.peek().clone() else {
            return Err(self.unexpected("a coefficient"));
        };
        let c = match self.ctx.mode {
            CoeffMode::Rational => {
                if decimal || inexact {
                    return Err(syntax_error(self.src, at, "decimal literals need a real coefficient mode"));
                }
                let q = self.rational()?;
                Coeff::Rational(q)
            }
            CoeffMode::Real(p) => {
                if decimal {
                    self.bump();
                    let exp_part = text
                        .find(['e', 'E'])
                        .map_or(Some(0), |i| text[i + 1..].parse::<i64>().ok());
                    if !exp_part.is_some_and(|k| k.abs() <= MAX_DECIMAL_EXPONENT) {
                        return Err(syntax_error(self.src, at, "decimal exponent out of range"));
                    }
                    let r = Real::parse_decimal(&text, p)
                        .ok_or_else(|| syntax_error(self.src, at, "malformed decimal"))?;
                    if *self.peek() == Tok::Slash {
                        return Err(self.err("a decimal cannot have a denominator"));
                    }
                    Coeff::Real(r)
                } else {
                    let q = self.rational()?;
                    Coeff::from_rational(&q, self.ctx.mode)
                }
            }
        };
        Ok(if negate { c.neg() } else { c })
    }

    fn series(&mut self) -> Result<Series> {
        let ctx = self.ctx;
        if self.is_ident("O") {
            let w = self.big_o()?;
            self.expect_eof()?;
            return Ok(Series::big_o(ctx, w));
        }
        let mut raw = Vec::new();
        let mut negate = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate = true;
        }
        let mut cutoff = Bound::Infinity;
        loop {
            let (c, e) = if self.is_ident("t") {
                (Coeff::one(ctx.mode), self.mono()?)
            } else {
                let neg_lit = *self.peek() == Tok::Minus;
                if neg_lit {
                    self.bump();
                }
                let c = self.coeff(neg_lit)?;
                if *self.peek() == Tok::Star {
                    self.bump();
                    (c, self.mono()?)
                } else {
                    (c, Exponent::zero(ctx.dim))
                }
            };
            raw.push((e, if negate { c.neg() } else { c }));
            match self.peek() {
                Tok::Plus if matches!(self.peek_at(1), Tok::Ident(s) if s == "O") => {
                    self.bump();
                    cutoff = Bound::Finite(self.big_o()?);
                    break;
                }
                Tok::Plus => {
                    self.bump();
                    negate = false;
                }
                Tok::Minus => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        self.expect_eof()?;
        Series::normalize(ctx, raw, cutoff)
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => break,
            }
        }
        self.leave();
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.enter()?;
            let inner = self.factor()?;
            self.leave();
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            if matches!(base, Expr::Mono(_)) {
                return Err(self.err("`t^a^b` is ambiguous; use parentheses"));
            }
            self.bump();
            let at = self.offset();
            let e = self.expo()?;
            if e.dim() != 1 {
                return Err(syntax_error(self.src, at, "powers of expressions take a single rational"));
            }
            let q = e.coords()[0].clone();
            return Ok(Expr::Pow(Box::new(base), q));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num { decimal: false, inexact: false, .. } => {
                let n = self.digits()?;
                Ok(Expr::Const(Coeff::from_rational(&BigRational::from_integer(n), self.ctx.mode)))
            }
            Tok::Num { .. } => Ok(Expr::Const(self.coeff(false)?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) if name == "t" => Ok(Expr::Mono(self.mono()?)),
            Tok::Ident(name) if name == "O" && *self.peek_at(1) == Tok::LParen => Ok(Expr::BigO(self.big_o()?)),
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(syntax_error(
                        self.src,
                        self.toks[self.pos - 1].offset,
                        format!("unknown symbol `{name}`"),
                    ));
                }
                self.bump();
                self.call(name)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    /// Arguments of a call; the opening parenthesis is consumed.
    fn call(&mut self, name: String) -> Result<Expr> {
        self.enter()?;
        if name == "trunc" {
            let e = self.expr()?;
            self.expect(Tok::Comma)?;
            let w = self.expo()?;
            self.expect(Tok::RParen)?;
            self.leave();
            return Ok(Expr::Trunc(Box::new(e), w));
        }
        let mut params = Vec::new();
        if PARAM_FUNCTIONS.contains(&name.as_str()) {
            params.push(self.rational()?);
            self.expect(Tok::Comma)?;
        }
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.expr()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.expr()?);
            }
        }
        self.expect(Tok::RParen)?;
        self.leave();
        Ok(Expr::Call { name, params, args })
    }

    /// Polynomial in `X1..X3` with rational coefficients.
    fn poly_sum(&mut self) -> Result<Polynomial> {
        self.enter()?;
        let mut acc = self.poly_product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.poly_product()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.poly_product()?);
                }
                _ => break,
            }
        }
        self.leave();
        Ok(acc)
    }

    fn poly_product(&mut self) -> Result<Polynomial> {
        let mut acc = self.poly_factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.poly_factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let d = self.poly_factor()?;
                    let c = match d.terms().iter().next() {
                        Some((idx, c)) if d.terms().len() == 1 && idx.iter().all(|&k| k == 0) => c.clone(),
                        _ => return Err(syntax_error(self.src, at, "can only divide by a nonzero constant")),
                    };
                    acc = acc.mul(&Polynomial::constant(MAX_POLY_ARITY, BigRational::from_integer(1.into()) / c));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn poly_factor(&mut self) -> Result<Polynomial> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.enter()?;
            let inner = self.poly_factor()?;
            self.leave();
            return Ok(inner.neg());
        }
        let base = match self.peek().clone() {
            Tok::Num { decimal: false, inexact: false, .. } => {
                Polynomial::constant(MAX_POLY_ARITY, BigRational::from_integer(self.digits()?))
            }
            Tok::LParen => {
                self.bump();
                let p = self.poly_sum()?;
                self.expect(Tok::RParen)?;
                p
            }
            Tok::Ident(name) => {
                let idx = name
                    .strip_prefix('X')
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|k| (1..=MAX_POLY_ARITY).contains(k));
                match idx {
                    Some(k) => {
                        self.bump();
                        Polynomial::var(MAX_POLY_ARITY, k - 1)
                    }
                    None => return Err(self.err(format!("unknown variable `{name}`; use X1..X{MAX_POLY_ARITY}"))),
                }
            }
            _ => return Err(self.unexpected("a polynomial term")),
        };
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            let n = self.digits()?.to_u32().filter(|&n| n <= 64);
            let Some(n) = n else {
                return Err(syntax_error(self.src, at, "polynomial powers must be integers in 0..=64"));
            };
            return Ok(base.pow(n));
        }
        Ok(base)
    }
}

/// Parse a series in canonical text form.
pub fn parse_series(text: &str, ctx: Context) -> Result<Series> {
    Parser::new(text, ctx)?.series()
}

/// Parse an expression.
pub fn parse_expr(text: &str, ctx: Context) -> Result<Expr> {
    let mut p = Parser::new(text, ctx)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parse a single exponent (`expo` rule) of the session dimension.
pub fn parse_exponent(text: &str, dim: usize) -> Result<Exponent> {
    let mut p = Parser::new(text, Context::rational(dim))?;
    let e = p.expo()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parse a `;`-separated list of exponents (empty text gives an empty list).
pub fn parse_exponent_list(text: &str, dim: usize) -> Result<Vec<Exponent>> {
    let mut out = Vec::new();
    let mut base = 0;
    for part in text.split(';') {
        if !part.trim().is_empty() {
            out.push(parse_exponent(part, dim).map_err(|e| match e {
                Error::Syntax { offset, message, .. } => syntax_error(text, base + offset, message),
                other => other,
            })?);
        }
        base += part.len() + 1;
    }
    Ok(out)
}

/// Parse a polynomial in `X1..X3`.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let mut p = Parser::new(text, Context::rational(1))?;
    let poly = p.poly_sum()?;
    p.expect_eof()?;
    Ok(poly)
}
