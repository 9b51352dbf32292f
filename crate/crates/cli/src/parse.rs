//! Recursive-descent parser for polynomial expressions in X, Y and T.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := '(' expr ')' | integer ['/' integer] | 'X' | 'Y' | 'T'
//! ```
//!
//! Implicit multiplication is rejected; whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use specpoint::poly::{BivarPoly, FieldPoly};
use thiserror::Error;

/// Largest accepted input, in bytes.
pub const MAX_INPUT: usize = 1 << 20;
/// Largest accepted exponent.
pub const MAX_EXPONENT: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: exponent {value} exceeds {max}")]
    ExponentOverflow { line: usize, col: usize, value: String, max: u32 },
    #[error("{line}:{col}: unknown variable {name:?}; expected X, Y or T")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: division by zero in rational literal")]
    ZeroDenominator { line: usize, col: usize },
    #[error("input of {0} bytes exceeds the 1 MB limit")]
    TooLarge(usize),
    #[error("variable {0} is not allowed here")]
    VariableNotAllowed(char),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    T,
}

/// Abstract syntax tree of a polynomial expression.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyExpr {
    Num(BigRational),
    Var(Var),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l0, col: c0 });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
            continue;
        }
        if "+-*/^()".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
            col += 1;
            i += 1;
            continue;
        }
        return Err(ParseError::Syntax { line: l0, col: c0, msg: format!("unexpected character {c:?}") });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn describe(&self) -> String {
        match &self.peek().tok {
            Tok::Int(v) => format!("number {v}"),
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Sym(c) => format!("{c:?}"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = if self.is_sym('-') {
            self.bump();
            PolyExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.is_sym('+') {
                self.bump();
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.is_sym('-') {
                self.bump();
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.is_sym('*') {
            self.bump();
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PolyExpr, ParseError> {
        let base = self.base()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Int(v) => {
                let e: u32 = match u32::try_from(&v) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => {
                        return Err(ParseError::ExponentOverflow {
                            line: t.line,
                            col: t.col,
                            value: v.to_string(),
                            max: MAX_EXPONENT,
                        })
                    }
                };
                Ok(PolyExpr::Pow(Box::new(base), e))
            }
            _ => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                msg: "expected a nonnegative integer exponent".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<PolyExpr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if !self.is_sym(')') {
                    return self.err(format!("expected ')', found {}", self.describe()));
                }
                self.bump();
                Ok(e)
            }
            Tok::Int(n) => {
                self.bump();
                if self.is_sym('/') {
                    self.bump();
                    let d = self.bump();
                    match d.tok {
                        Tok::Int(den) if den.is_zero() => Err(ParseError::ZeroDenominator { line: d.line, col: d.col }),
                        Tok::Int(den) => Ok(PolyExpr::Num(BigRational::new(n, den))),
                        _ => Err(ParseError::Syntax {
                            line: d.line,
                            col: d.col,
                            msg: "expected an integer denominator".into(),
                        }),
                    }
                } else {
                    Ok(PolyExpr::Num(BigRational::from_integer(n)))
                }
            }
            Tok::Ident(name) => {
                self.bump();
                let v = match name.as_str() {
                    "X" => Var::X,
                    "Y" => Var::Y,
                    "T" => Var::T,
                    _ => return Err(ParseError::UnknownVariable { line: t.line, col: t.col, name }),
                };
                Ok(PolyExpr::Var(v))
            }
            _ => self.err(format!("expected a number, variable or '(', found {}", self.describe())),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str) -> Result<PolyExpr, ParseError> {
    if text.len() > MAX_INPUT {
        return Err(ParseError::TooLarge(text.len()));
    }
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        let msg = match p.peek().tok {
            Tok::Int(_) | Tok::Ident(_) | Tok::Sym('(') => {
                format!("unexpected {}; implicit multiplication is not allowed, use '*'", p.describe())
            }
            _ => format!("unexpected {}", p.describe()),
        };
        return p.err(msg);
    }
    Ok(e)
}

impl PolyExpr {
    /// Expands the tree over Q[X, Y, T].
    pub fn eval(&self) -> FieldPoly {
        match self {
            PolyExpr::Num(q) => FieldPoly::term(q.clone(), 0, 0, 0),
            PolyExpr::Var(Var::X) => FieldPoly::term(BigRational::one(), 1, 0, 0),
            PolyExpr::Var(Var::Y) => FieldPoly::term(BigRational::one(), 0, 1, 0),
            PolyExpr::Var(Var::T) => FieldPoly::term(BigRational::one(), 0, 0, 1),
            PolyExpr::Neg(a) => a.eval().neg(),
            PolyExpr::Add(a, b) => a.eval().add(&b.eval()),
            PolyExpr::Sub(a, b) => a.eval().sub(&b.eval()),
            PolyExpr::Mul(a, b) => a.eval().mul(&b.eval()),
            PolyExpr::Pow(a, e) => {
                let base = a.eval();
                let mut acc = FieldPoly::term(BigRational::one(), 0, 0, 0);
                let mut sq = base;
                let mut e = *e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.mul(&sq);
                    }
                    e >>= 1;
                    if e > 0 {
                        sq = sq.mul(&sq);
                    }
                }
                acc
            }
        }
    }

    fn uses(&self, v: Var) -> bool {
        match self {
            PolyExpr::Num(_) => false,
            PolyExpr::Var(w) => *w == v,
            PolyExpr::Neg(a) | PolyExpr::Pow(a, _) => a.uses(v),
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => a.uses(v) || b.uses(v),
        }
    }
}

/// Parses a polynomial in X and Y over Q.
pub fn parse_poly(text: &str) -> Result<BivarPoly, ParseError> {
    let e = parse_expr(text)?;
    if e.uses(Var::T) {
        return Err(ParseError::VariableNotAllowed('T'));
    }
    Ok(e.eval().to_bivar().expect("no T present"))
}

/// Parses a polynomial in X, Y and T (coefficients in a number field).
pub fn parse_field_poly(text: &str) -> Result<FieldPoly, ParseError> {
    Ok(parse_expr(text)?.eval())
}

/// Parses a univariate polynomial in T, returned as coefficients low to high.
pub fn parse_t_poly(text: &str) -> Result<Vec<BigRational>, ParseError> {
    let e = parse_expr(text)?;
    for (v, c) in [(Var::X, 'X'), (Var::Y, 'Y')] {
        if e.uses(v) {
            return Err(ParseError::VariableNotAllowed(c));
        }
    }
    let f = e.eval();
    let deg = f.max_t_degree() as usize;
    let mut out = vec![BigRational::zero(); deg + 1];
    for (&(_, _, k), c) in f.terms() {
        out[k as usize] = c.clone();
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}
