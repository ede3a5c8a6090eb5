//! Text syntax for fields, elements of K, polynomial maps and matrices.
//!
//! ```text
//! field    := p | p^nu:modulus            modulus is a polynomial in g
//! element  := expr | periodic:[a1,...] | liouville:c
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := atom ['^' ['-'] int]
//! atom     := int | X | g | x | x1 | x2 ... | '(' expr ')' | O(X^-N)
//! ```
//!
//! `O(X^-N)` marks every coefficient from `X^-N` on as unknown. Vectors and
//! polynomial maps separate components by `;`, matrices separate rows by `;`
//! and entries by `,`.

use crate::calculus::{MPoly, PolyMap};
use crate::cfrac_witness::{make_liouville, make_periodic};
use crate::error::{Error, Result};
use crate::field_arith::{make_field, Field, Poly};
use crate::laurent::{LaurentBall, VecK};

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Int(txt.parse().map_err(|_| err(format!("integer too large: {txt}")))?));
        } else if c.is_ascii_alphabetic() {
            // a letter, optionally followed by digits for x1, x2, ...
            let st = i;
            i += 1;
            if c == 'x' {
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Int(u64),
    BigX,
    Gen,
    /// `None` for the bare `x`, `Some(i)` for `x_i` (1-based).
    Var(Option<usize>),
    BigO(i64),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
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
            Err(err(format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(err("expected an integer")),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let n = self.int()? as i64;
        Ok(if neg { -n } else { n })
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = if self.eat('-') { Ast::Neg(Box::new(self.term()?)) } else { self.term()? };
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.signed_int()?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Ast::Int(n))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "X" => Ok(Ast::BigX),
                    "g" => Ok(Ast::Gen),
                    "x" => Ok(Ast::Var(None)),
                    "O" => {
                        self.expect('(')?;
                        match self.peek() {
                            Some(Tok::Ident(s)) if s == "X" => self.pos += 1,
                            _ => return Err(err("expected O(X^-N)")),
                        }
                        let e = if self.eat('^') { self.signed_int()? } else { 1 };
                        self.expect(')')?;
                        Ok(Ast::BigO(-e))
                    }
                    v if v.starts_with('x') => {
                        let i: usize = v[1..].parse().map_err(|_| err(format!("bad variable {v}")))?;
                        if i == 0 {
                            return Err(err("variables are numbered from x1"));
                        }
                        Ok(Ast::Var(Some(i)))
                    }
                    other => Err(err(format!("unknown symbol '{other}'"))),
                }
            }
            Some(Tok::Sym(c)) => Err(err(format!("unexpected '{c}'"))),
            None => Err(err("unexpected end of input")),
        }
    }
}

fn parse_ast(s: &str) -> Result<Ast> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let a = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input in '{s}'")));
    }
    Ok(a)
}

/// Highest variable index used, with the bare `x` counting as `x1`.
fn max_var(a: &Ast) -> (usize, bool) {
    match a {
        Ast::Var(None) => (1, true),
        Ast::Var(Some(i)) => (*i, false),
        Ast::Neg(b) | Ast::Pow(b, _) => max_var(b),
        Ast::Add(l, r) | Ast::Sub(l, r) | Ast::Mul(l, r) | Ast::Div(l, r) => {
            let (a, ba) = max_var(l);
            let (b, bb) = max_var(r);
            (a.max(b), ba || bb)
        }
        _ => (0, false),
    }
}

struct Eval<'a> {
    field: &'a Field,
    nvars: usize,
    /// Precision for inverses of non-monomials.
    prec: i64,
    /// Smallest `N - 1` over `O(X^-N)` terms.
    big_o: Option<i64>,
}

impl Eval<'_> {
    fn constant(&self, c: LaurentBall) -> MPoly {
        MPoly::constant(self.field, self.nvars, c)
    }

    fn as_constant(&self, p: &MPoly) -> Option<LaurentBall> {
        if p.is_zero() {
            return Some(LaurentBall::zero(self.field));
        }
        let mut it = p.terms();
        let (e, c) = it.next()?;
        (it.next().is_none() && e.iter().all(|&a| a == 0)).then(|| c.clone())
    }

    fn eval(&mut self, a: &Ast) -> Result<MPoly> {
        let f = self.field;
        Ok(match a {
            Ast::Int(n) => self.constant(LaurentBall::constant(f, f.from_int((*n % f.p() as u64) as i64))),
            Ast::BigX => self.constant(LaurentBall::x_pow(f, 1)),
            Ast::Gen => self.constant(LaurentBall::constant(f, f.generator())),
            Ast::Var(v) => MPoly::var(f, self.nvars, v.unwrap_or(1) - 1),
            Ast::BigO(n) => {
                self.big_o = Some(self.big_o.map_or(n - 1, |b| b.min(n - 1)));
                MPoly::zero(f, self.nvars)
            }
            Ast::Neg(b) => self.eval(b)?.neg(),
            Ast::Add(l, r) => self.eval(l)?.add(&self.eval(r)?),
            Ast::Sub(l, r) => self.eval(l)?.sub(&self.eval(r)?),
            Ast::Mul(l, r) => self.eval(l)?.mul(&self.eval(r)?),
            Ast::Div(l, r) => {
                let num = self.eval(l)?;
                let den = self.eval(r)?;
                let c = self.as_constant(&den).ok_or_else(|| err("division by a non-constant"))?;
                num.scale(&c.inv(self.prec)?)
            }
            Ast::Pow(b, e) => {
                let base = self.eval(b)?;
                if *e >= 0 {
                    base.pow(*e as u32)
                } else {
                    let c = self.as_constant(&base).ok_or_else(|| err("negative power of a non-constant"))?;
                    let inv = c.inv(self.prec)?;
                    self.constant((0..-e).fold(LaurentBall::one(f), |acc, _| acc.mul(&inv)))
                }
            }
        })
    }
}

/// Splits at `sep` outside brackets and parentheses.
pub fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut st = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[st..i].trim());
                st = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(s[st..].trim());
    out
}

/// `p` or `p^nu:modulus`.
pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    let (head, modulus) = match s.split_once(':') {
        Some((h, m)) => (h, Some(m)),
        None => (s, None),
    };
    let (p, nu) = match head.split_once('^') {
        Some((p, nu)) => {
            (p.trim(), nu.trim().parse::<u32>().map_err(|_| err(format!("bad extension degree in '{s}'")))?)
        }
        None => (head, 1),
    };
    let p: u64 = p.parse().map_err(|_| err(format!("bad characteristic in '{s}'")))?;
    match modulus {
        None => make_field(p, nu, None),
        Some(m) => {
            let prime = make_field(p, 1, None)?;
            let coeffs = parse_fp_poly(&prime, m)?;
            make_field(p, nu, Some(&coeffs))
        }
    }
}

/// Ascending coefficients of a polynomial in `g` over `F_p`.
fn parse_fp_poly(prime: &Field, s: &str) -> Result<Vec<u32>> {
    // evaluate with g read as X over F_p, then read off the coefficients
    let ast = parse_ast(&s.replace('X', "#").replace('g', "X"))?;
    let mut ev = Eval { field: prime, nvars: 0, prec: 0, big_o: None };
    let p = ev.eval(&ast)?;
    let c = ev.as_constant(&p).ok_or_else(|| err("modulus must not contain variables"))?;
    let poly = LaurentBall::polynomial_part(&c)?;
    if !c.sub(&LaurentBall::from_poly(&poly)).is_exact_zero() {
        return Err(err("modulus must be a polynomial in g"));
    }
    Ok(poly.coeffs().iter().map(|a| a.0).collect())
}

/// An element of K. `prec` bounds inverses and the constructed series.
pub fn parse_element(field: &Field, s: &str, prec: i64) -> Result<LaurentBall> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("periodic:") {
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| err("expected periodic:[a1,...]"))?;
        let qs = split_top(inner, ',').into_iter().map(|q| parse_poly(field, q)).collect::<Result<Vec<_>>>()?;
        return make_periodic(&qs, prec);
    }
    if let Some(rest) = s.strip_prefix("liouville:") {
        let c: u64 = rest.trim().parse().map_err(|_| err("expected liouville:c"))?;
        return make_liouville(field, c, prec);
    }
    let ast = parse_ast(s)?;
    if max_var(&ast).0 > 0 {
        return Err(err(format!("element '{s}' contains a variable")));
    }
    let mut ev = Eval { field, nvars: 0, prec, big_o: None };
    let p = ev.eval(&ast)?;
    let c = ev.as_constant(&p).expect("no variables");
    Ok(match ev.big_o {
        Some(n) => c.truncate(n),
        None => c,
    })
}

/// A polynomial in `X`.
pub fn parse_poly(field: &Field, s: &str) -> Result<Poly> {
    let c = parse_element(field, s, 0)?;
    if !c.is_exact() {
        return Err(err(format!("'{s}' is not an exact polynomial")));
    }
    let p = c.polynomial_part()?;
    if !c.sub(&LaurentBall::from_poly(&p)).is_exact_zero() {
        return Err(err(format!("'{s}' has negative powers of X")));
    }
    Ok(p)
}

pub fn parse_vec(field: &Field, s: &str, prec: i64) -> Result<VecK> {
    Ok(VecK(split_top(s, ';').into_iter().map(|c| parse_element(field, c, prec)).collect::<Result<_>>()?))
}

pub fn parse_poly_vec(field: &Field, s: &str) -> Result<Vec<Poly>> {
    split_top(s, ';').into_iter().map(|c| parse_poly(field, c)).collect()
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_matrix(field: &Field, s: &str, prec: i64) -> Result<Vec<Vec<LaurentBall>>> {
    split_top(s, ';')
        .into_iter()
        .map(|row| split_top(row, ',').into_iter().map(|e| parse_element(field, e, prec)).collect())
        .collect()
}

/// A polynomial in `d` variables; `d` defaults to the largest variable used.
pub fn parse_mpoly(field: &Field, s: &str, d: Option<usize>) -> Result<MPoly> {
    let ast = parse_ast(s)?;
    let (used, bare) = max_var(&ast);
    let nvars = d.unwrap_or(used.max(1));
    if used > nvars || (bare && nvars > 1) {
        return Err(err(format!("'{s}' does not fit {nvars} variables")));
    }
    let mut ev = Eval { field, nvars, prec: 0, big_o: None };
    let p = ev.eval(&ast)?;
    if ev.big_o.is_some() || p.terms().any(|(_, c)| !c.is_exact()) {
        return Err(err("polynomial maps need exact coefficients"));
    }
    Ok(p)
}

/// Components separated by `;`, all in the same number of variables.
pub fn parse_map(field: &Field, s: &str, d: Option<usize>) -> Result<PolyMap> {
    let parts = split_top(s, ';');
    let d = match d {
        Some(d) => d,
        None => {
            let mut m = 1;
            for p in &parts {
                m = m.max(max_var(&parse_ast(p)?).0);
            }
            m
        }
    };
    PolyMap::new(parts.into_iter().map(|p| parse_mpoly(field, p, Some(d))).collect::<Result<_>>()?)
}

/// Comma-separated integers.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| err(format!("bad integer '{t}'"))))
        .collect()
}

/// `a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<num_rational::Rational64> {
    let bad = || err(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(num_rational::Rational64::new(a, b))
        }
        None => Ok(num_rational::Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}
