//! Expression language for forms.
//!
//! ```text
//! expr    := product (("+" | "-") product)*
//! product := unary (("*" | "^" | "/") unary)*        "^" is the wedge, "/" divides by an integer
//! unary   := "-" unary | postfix
//! postfix := atom ("^" INT | "@d(" INT ")" | "⊗d/dv" INT)*
//! atom    := INT | "i" | "t" | tJ | t(J) | vJ | vbJ | dvJ | dvbJ | v(J) | ... | "E[" gauss,… ";" gauss,… "]"
//!          | name | "(" expr ")"
//! ```
//!
//! Canonical rendering parses back to the same form.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{Geometry, VForm};
use crate::funring::{Basis, RingKind};
use crate::kuranishi::KuranishiData;
use crate::scalars::{GaussInt, GaussRat, TMono};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    At,
    Tensor,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
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
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| Error::Parse {
                line: l0,
                col: c0,
                msg: format!("integer {s} too large"),
            })?;
            Tok::Num(n)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' => Tok::Star,
                '^' | '∧' => Tok::Caret,
                '/' => Tok::Slash,
                '@' => Tok::At,
                '⊗' => Tok::Tensor,
                other => {
                    return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character '{other}'") })
                }
            }
        };
        col += i - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

/// Named definitions visible to expressions.
pub type Env = BTreeMap<String, VForm>;

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    geom: Geometry,
    env: &'a Env,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, t: &Token, msg: impl Into<String>) -> Error {
        Error::Parse { line: t.line, col: t.col, msg: msg.into() }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let t = self.toks[self.pos].clone();
        self.err_at(&t, msg)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token> {
        if *self.peek() == want {
            Ok(self.next())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expect_num(&mut self) -> Result<(i64, Token)> {
        let t = self.next();
        match t.tok {
            Tok::Num(n) => Ok((n, t)),
            _ => Err(self.err_at(&t, "expected an integer")),
        }
    }

    fn expr(&mut self) -> Result<VForm> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.product()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<VForm> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star | Tok::Caret => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = wedge_typed(&acc, &rhs)?;
                }
                Tok::Slash => {
                    self.next();
                    let (n, t) = self.expect_num()?;
                    if n == 0 {
                        return Err(self.err_at(&t, "division by zero"));
                    }
                    acc = acc.scale(&GaussRat::ratio(1, n));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<VForm> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<VForm> {
        let mut x = self.atom()?;
        loop {
            match (self.peek(), self.peek_at(1)) {
                (Tok::Caret, Tok::Num(_)) => {
                    self.next();
                    let (k, t) = self.expect_num()?;
                    let mut p = VForm::one(self.geom);
                    for _ in 0..k {
                        p = wedge_typed(&p, &x).map_err(|e| self.err_at(&t, e.to_string()))?;
                        if p.is_zero() {
                            break;
                        }
                    }
                    x = p;
                }
                (Tok::At, _) => {
                    let at = self.next();
                    match self.next().tok {
                        Tok::Ident(s) if s == "d" => {}
                        _ => return Err(self.err_at(&at, "expected @d(a)")),
                    }
                    self.expect(Tok::LParen, "'('")?;
                    let (a, t) = self.expect_num()?;
                    self.expect(Tok::RParen, "')'")?;
                    x = self.attach(&x, a, &t)?;
                }
                (Tok::Tensor, _) => {
                    let at = self.next();
                    match self.next().tok {
                        Tok::Ident(s) if s == "d" => {}
                        _ => return Err(self.err_at(&at, "expected ⊗d/dvA")),
                    }
                    self.expect(Tok::Slash, "'/'")?;
                    let t = self.next();
                    let a = match &t.tok {
                        Tok::Ident(s) => match indexed(s, "dv") {
                            Some(a) => a,
                            None if s == "dv" => self.paren_index()?,
                            None => return Err(self.err_at(&t, "expected dvA")),
                        },
                        _ => return Err(self.err_at(&t, "expected dvA")),
                    };
                    x = self.attach(&x, a as i64, &t)?;
                }
                _ => return Ok(x),
            }
        }
    }

    fn attach(&self, x: &VForm, a: i64, t: &Token) -> Result<VForm> {
        if a < 1 || a as usize > self.geom.n {
            return Err(self.err_at(t, format!("vector index {a} out of range 1..={}", self.geom.n)));
        }
        if x.is_vector_valued() {
            return Err(Error::Type {
                expected: "scalar-valued form before a value marker".into(),
                actual: "vector-valued form".into(),
            });
        }
        x.with_value(a as usize)
    }

    fn paren_index(&mut self) -> Result<usize> {
        self.expect(Tok::LParen, "'('")?;
        let (j, t) = self.expect_num()?;
        self.expect(Tok::RParen, "')'")?;
        if j < 1 {
            return Err(self.err_at(&t, "indices start at 1"));
        }
        Ok(j as usize)
    }

    fn check_index(&self, j: usize, bound: usize, t: &Token) -> Result<()> {
        if j == 0 || j > bound {
            Err(self.err_at(t, format!("index {j} out of range 1..={bound}")))
        } else {
            Ok(())
        }
    }

    fn atom(&mut self) -> Result<VForm> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Num(n) => Ok(VForm::constant(self.geom, GaussRat::int(n))),
            Tok::LParen => {
                let x = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(x)
            }
            Tok::Ident(s) => self.ident(&s, &t),
            _ => Err(self.err_at(&t, "expected a term")),
        }
    }

    fn ident(&mut self, s: &str, t: &Token) -> Result<VForm> {
        let g = self.geom;
        if s == "i" {
            return Ok(VForm::constant(g, GaussRat::i()));
        }
        if s == "E" && *self.peek() == Tok::LBrack {
            return self.character(t);
        }
        for prefix in ["dvb", "dv", "vb", "v", "t"] {
            let j =
                if s == prefix && *self.peek() == Tok::LParen { Some(self.paren_index()?) } else { indexed(s, prefix) };
            let j = match (j, prefix) {
                (Some(j), _) => j,
                (None, "t") if s == "t" => {
                    if g.m != 1 {
                        return Err(self.err_at(t, "bare t needs m = 1; write t1, t2, …"));
                    }
                    1
                }
                _ => continue,
            };
            return match prefix {
                "t" => {
                    self.check_index(j, g.m, t)?;
                    Ok(VForm::t(g, j))
                }
                "dv" => {
                    self.check_index(j, g.n, t)?;
                    Ok(VForm::dv(g, j))
                }
                "dvb" => {
                    self.check_index(j, g.n, t)?;
                    Ok(VForm::dvb(g, j))
                }
                _ => {
                    self.check_index(j, g.n, t)?;
                    if g.kind != RingKind::Chart {
                        return Err(Error::Type {
                            expected: "chart geometry for coordinate functions".into(),
                            actual: "torus".into(),
                        });
                    }
                    Ok(if prefix == "v" { VForm::v(g, j) } else { VForm::vb(g, j) })
                }
            };
        }
        match self.env.get(s) {
            Some(x) if x.geom() == g => Ok(x.clone()),
            Some(_) => Err(Error::GeometryMismatch),
            None => Err(self.err_at(t, format!("unknown name '{s}'"))),
        }
    }

    fn gauss_part(&mut self) -> Result<GaussInt> {
        let t = self.next();
        match t.tok {
            Tok::Num(n) => {
                if matches!(self.peek(), Tok::Ident(s) if s == "i") {
                    self.next();
                    Ok(GaussInt::new(0, n))
                } else {
                    Ok(GaussInt::new(n, 0))
                }
            }
            Tok::Ident(s) if s == "i" => Ok(GaussInt::new(0, 1)),
            _ => Err(self.err_at(&t, "expected a Gaussian integer")),
        }
    }

    fn gauss(&mut self) -> Result<GaussInt> {
        let neg = if *self.peek() == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let mut z = self.gauss_part()?;
        if neg {
            z = -z;
        }
        match self.peek() {
            Tok::Plus => {
                self.next();
                Ok(z + self.gauss_part()?)
            }
            Tok::Minus => {
                self.next();
                Ok(z - self.gauss_part()?)
            }
            _ => Ok(z),
        }
    }

    fn character(&mut self, t: &Token) -> Result<VForm> {
        if self.geom.kind != RingKind::Torus {
            return Err(Error::Type { expected: "torus geometry for characters".into(), actual: "chart".into() });
        }
        self.expect(Tok::LBrack, "'['")?;
        let mut alpha = vec![self.gauss()?];
        while *self.peek() == Tok::Comma {
            self.next();
            alpha.push(self.gauss()?);
        }
        self.expect(Tok::Semi, "';'")?;
        let mut beta = vec![self.gauss()?];
        while *self.peek() == Tok::Comma {
            self.next();
            beta.push(self.gauss()?);
        }
        self.expect(Tok::RBrack, "']'")?;
        if alpha.len() != self.geom.n || beta.len() != self.geom.n {
            return Err(self.err_at(t, format!("character needs {} entries on each side", self.geom.n)));
        }
        let b = Basis::character(alpha, beta).map_err(|e| self.err_at(t, e.to_string()))?;
        Ok(VForm::function(self.geom, b, TMono::one(self.geom.m), GaussRat::one()))
    }
}

fn indexed(s: &str, prefix: &str) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

fn wedge_typed(a: &VForm, b: &VForm) -> Result<VForm> {
    a.wedge(b).map_err(|e| match e {
        Error::DegreeMismatch => Error::Type {
            expected: "at most one vector-valued factor".into(),
            actual: "two vector-valued factors".into(),
        },
        other => other,
    })
}

/// Parses `text` into a canonical form on `geom`.
pub fn parse_expression(text: &str, geom: Geometry, env: &Env) -> Result<VForm> {
    let mut p = Parser { toks: lex(text)?, pos: 0, geom, env };
    let x = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(x)
}

/// Parses and type-checks Kuranishi data.
pub fn parse_kuranishi(text: &str, geom: Geometry, env: &Env) -> Result<KuranishiData> {
    KuranishiData::new(parse_expression(text, geom, env)?)
}

/// Parses a monomial ideal such as `t^3`, `t1*t2, t2^2` or `m^2`.
pub fn parse_ideal(text: &str, m: usize) -> Result<crate::scalars::MonomialIdeal> {
    use crate::scalars::MonomialIdeal;
    let text = text.trim();
    if let Some(k) = text.strip_prefix("m^") {
        let k: u32 =
            k.trim().parse().map_err(|_| Error::Parse { line: 1, col: 3, msg: "expected an exponent".into() })?;
        return Ok(MonomialIdeal::maximal_power(m, k));
    }
    if text == "m" {
        return Ok(MonomialIdeal::maximal(m));
    }
    if text == "0" {
        return Ok(MonomialIdeal::zero(m));
    }
    let geom = Geometry::torus(1, m, u32::MAX);
    let mut gens = Vec::new();
    let mut col = 1;
    for part in text.split(',') {
        let x = parse_expression(part, geom, &Env::new()).map_err(|e| match e {
            Error::Parse { line, col: c, msg } => Error::Parse { line, col: c + col - 1, msg },
            other => other,
        })?;
        let mono = match x.t_monomials().as_slice() {
            [mono]
                if x.len() == 1
                    && x.terms().values().all(|c| c.len() == 1 && c.terms().values().all(GaussRat::is_one)) =>
            {
                mono.clone()
            }
            _ => return Err(Error::Parse { line: 1, col, msg: format!("'{}' is not a monomial", part.trim()) }),
        };
        gens.push(mono);
        col += part.chars().count() + 1;
    }
    Ok(MonomialIdeal::new(m, gens))
}
