//! Line-oriented text format for models.
//!
//! ```text
//! model cp2
//! kind cdga
//! generator x deg 2
//! generator y deg 5
//! d y = x^3
//! ```
//!
//! Lines: `model NAME`, `kind cdga|dgl|ainfty|cinfty|linfty|presentation`,
//! `grading cohomological|homological`, `algebra comm|lie` (presentations),
//! `generator NAME deg INT [weight INT]`, `d NAME = EXPR`, `op N (g1,…,gN) = EXPR`,
//! `relation EXPR`, `bound N`. `#` starts a comment. Names containing operator characters are
//! written in double quotes. Degrees are cohomological for `cdga` and homological otherwise,
//! unless a `grading` line says otherwise; storage is always homological.

use crate::dictionary::{fmt_combination, FreeLie, QuillenModel};
use crate::free::{bracket, tensor_mul, word_degree, Tensor};
use crate::infinity::{Flavor, InfinityStructure};
use crate::koszul::{fmt_lie, Relations, WeightedPresentation};
use crate::linalg::GradedSpace;
use crate::poly::{Poly, PolyRing, SullivanModel};
use crate::q::{Vector, Q};
use crate::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Cdga(SullivanModel),
    Dgl(QuillenModel),
    Structure(InfinityStructure),
    Presentation(WeightedPresentation),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub name: String,
    pub model: Model,
}

impl ModelFile {
    pub fn new(name: &str, model: Model) -> Self {
        ModelFile {
            name: name.to_string(),
            model,
        }
    }

    pub fn kind(&self) -> &'static str {
        match &self.model {
            Model::Cdga(_) => "cdga",
            Model::Dgl(_) => "dgl",
            Model::Structure(s) => match s.flavor {
                Flavor::Assoc => "ainfty",
                Flavor::Comm => "cinfty",
                Flavor::Lie => "linfty",
            },
            Model::Presentation(_) => "presentation",
        }
    }
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

const SYMS: &str = "+-*/^[](),=";

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Quoted(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !SYMS.contains(c) && c != '#' && c != '"'
}

fn lex(line: &str, ln: usize) -> Result<Vec<Token>, Error> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' {
                j += 1;
            }
            if j == chars.len() {
                return Err(perr(ln, col, "unterminated quoted name"));
            }
            let s: String = chars[start..j].iter().collect();
            if s.is_empty() {
                return Err(perr(ln, col, "empty quoted name"));
            }
            out.push(Token {
                tok: Tok::Quoted(s),
                col,
            });
            i = j + 1;
        } else if SYMS.contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
        } else {
            let mut j = i;
            let mut s = String::new();
            loop {
                if j < chars.len() && is_name_char(chars[j]) {
                    s.push(chars[j]);
                    j += 1;
                } else if j < chars.len() && chars[j] == '^' && !s.is_empty() {
                    // `^` followed by a digit is a power; otherwise it belongs to the name.
                    if j + 1 < chars.len() && chars[j + 1].is_ascii_digit() {
                        break;
                    }
                    s.push('^');
                    j += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Word(s),
                col,
            });
            i = j;
        }
    }
    Ok(out)
}

/// Whether a name prints without quotes.
fn is_plain(name: &str) -> bool {
    let chars: Vec<char> = name.chars().collect();
    if chars.is_empty() || chars.iter().all(|c| c.is_ascii_digit()) || chars[0] == '^' {
        return false;
    }
    for (k, &c) in chars.iter().enumerate() {
        if c == '^' {
            if chars.get(k + 1).is_some_and(|d| d.is_ascii_digit()) {
                return false;
            }
        } else if !is_name_char(c) {
            return false;
        }
    }
    true
}

fn quote(name: &str) -> String {
    if is_plain(name) {
        name.to_string()
    } else {
        format!("\"{}\"", name)
    }
}

fn quoted_space(g: &GradedSpace) -> GradedSpace {
    let mut out = g.clone();
    for b in &mut out.basis {
        b.name = quote(&b.name);
    }
    out
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Q),
    Name(usize),
    Pow(Box<Expr>, u32),
    Prod(Vec<Expr>, usize),
    Sum(Vec<(bool, Expr)>),
    Br(Box<Expr>, Box<Expr>, usize),
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    ln: usize,
    eol: usize,
    names: &'a GradedSpace,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.eol)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.ln, self.col(), msg)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), Error> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c)))
        }
    }

    fn word(&mut self, what: &str) -> Result<String, Error> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err(format!("expected {}", what))),
        }
    }

    fn name(&mut self) -> Result<String, Error> {
        match self.peek() {
            Some(Tok::Word(w)) | Some(Tok::Quoted(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err("expected a name")),
        }
    }

    fn generator(&mut self) -> Result<usize, Error> {
        let col = self.col();
        let n = self.name()?;
        self.names
            .index_of(&n)
            .ok_or_else(|| perr(self.ln, col, format!("unknown generator {}", n)))
    }

    fn int(&mut self) -> Result<i64, Error> {
        let neg = if self.peek() == Some(&Tok::Sym('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let col = self.col();
        let w = self.word("an integer")?;
        let v: i64 = w
            .parse()
            .map_err(|_| perr(self.ln, col, format!("expected an integer, found {}", w)))?;
        Ok(if neg { -v } else { v })
    }

    fn done(&self) -> Result<(), Error> {
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(())
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut terms = Vec::new();
        let mut neg = false;
        match self.peek() {
            Some(Tok::Sym('-')) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Sym('+')) => self.pos += 1,
            _ => {}
        }
        terms.push((neg, self.term()?));
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    terms.push((false, self.term()?));
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let col = self.col();
        let mut fs = vec![self.factor()?];
        while self.peek() == Some(&Tok::Sym('*')) {
            self.pos += 1;
            fs.push(self.factor()?);
        }
        Ok(if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Expr::Prod(fs, col)
        })
    }

    fn factor(&mut self) -> Result<Expr, Error> {
        let a = self.atom()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            self.pos += 1;
            let col = self.col();
            let w = self.word("an exponent")?;
            let e: u32 = w
                .parse()
                .map_err(|_| perr(self.ln, col, "expected an exponent"))?;
            return Ok(Expr::Pow(Box::new(a), e));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Word(w)) if w.chars().all(|c| c.is_ascii_digit()) => {
                self.pos += 1;
                let n: BigInt = w.parse().map_err(|_| perr(self.ln, col, "bad number"))?;
                if self.peek() == Some(&Tok::Sym('/')) {
                    self.pos += 1;
                    let dcol = self.col();
                    let dw = self.word("a denominator")?;
                    let d: BigInt = dw.parse().map_err(|_| {
                        perr(self.ln, dcol, format!("malformed rational {}/{}", w, dw))
                    })?;
                    if d.is_zero() {
                        return Err(perr(
                            self.ln,
                            col,
                            format!("malformed rational {}/{}", w, dw),
                        ));
                    }
                    return Ok(Expr::Num(Q::new(n, d)));
                }
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(Tok::Word(_)) | Some(Tok::Quoted(_)) => Ok(Expr::Name(self.generator()?)),
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let a = self.sum()?;
                self.expect_sym(',')?;
                let b = self.sum()?;
                self.expect_sym(']')?;
                Ok(Expr::Br(Box::new(a), Box::new(b), col))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let a = self.sum()?;
                self.expect_sym(')')?;
                Ok(a)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Target algebra for evaluating expressions.
trait Target {
    type T: Clone;
    fn scalar(&self, c: &Q) -> Option<Self::T>;
    fn gen(&self, i: usize) -> Self::T;
    fn zero(&self) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T, neg: bool) -> Self::T;
    fn scale(&self, a: &Self::T, c: &Q) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Option<Self::T>;
    fn bracket(&self, a: &Self::T, b: &Self::T) -> Option<Self::T>;
}

#[derive(Clone)]
enum Val<T> {
    Scalar(Q),
    Elem(T),
}

struct PolyTarget(PolyRing);
struct TensorTarget(GradedSpace);
struct LinTarget;

impl Target for PolyTarget {
    type T = Poly;
    fn scalar(&self, c: &Q) -> Option<Poly> {
        Some(self.0.constant(c.clone()))
    }
    fn gen(&self, i: usize) -> Poly {
        self.0.gen(i)
    }
    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn add(&self, a: &Poly, b: &Poly, neg: bool) -> Poly {
        let mut o = a.clone();
        if neg {
            o.sub(b)
        } else {
            o.add(b)
        }
        o
    }
    fn scale(&self, a: &Poly, c: &Q) -> Poly {
        a.scaled(c)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Option<Poly> {
        Some(self.0.mul(a, b))
    }
    fn bracket(&self, _: &Poly, _: &Poly) -> Option<Poly> {
        None
    }
}

impl Target for TensorTarget {
    type T = Tensor;
    fn scalar(&self, c: &Q) -> Option<Tensor> {
        Some(Tensor::single(vec![], c.clone()))
    }
    fn gen(&self, i: usize) -> Tensor {
        Tensor::basis(vec![i])
    }
    fn zero(&self) -> Tensor {
        Tensor::zero()
    }
    fn add(&self, a: &Tensor, b: &Tensor, neg: bool) -> Tensor {
        let mut o = a.clone();
        if neg {
            o.sub(b)
        } else {
            o.add(b)
        }
        o
    }
    fn scale(&self, a: &Tensor, c: &Q) -> Tensor {
        a.scaled(c)
    }
    fn mul(&self, a: &Tensor, b: &Tensor) -> Option<Tensor> {
        Some(tensor_mul(a, b))
    }
    fn bracket(&self, a: &Tensor, b: &Tensor) -> Option<Tensor> {
        let g = &self.0;
        Some(bracket(a, b, &|i| g.deg(i)))
    }
}

impl Target for LinTarget {
    type T = Vector;
    fn scalar(&self, c: &Q) -> Option<Vector> {
        if c.is_zero() {
            Some(Vector::zero())
        } else {
            None
        }
    }
    fn gen(&self, i: usize) -> Vector {
        Vector::basis(i)
    }
    fn zero(&self) -> Vector {
        Vector::zero()
    }
    fn add(&self, a: &Vector, b: &Vector, neg: bool) -> Vector {
        let mut o = a.clone();
        if neg {
            o.sub(b)
        } else {
            o.add(b)
        }
        o
    }
    fn scale(&self, a: &Vector, c: &Q) -> Vector {
        a.scaled(c)
    }
    fn mul(&self, _: &Vector, _: &Vector) -> Option<Vector> {
        None
    }
    fn bracket(&self, _: &Vector, _: &Vector) -> Option<Vector> {
        None
    }
}

fn eval<A: Target>(t: &A, e: &Expr, ln: usize, col: usize) -> Result<Val<A::T>, Error> {
    let elem = |v: Val<A::T>, col: usize| -> Result<A::T, Error> {
        match v {
            Val::Elem(x) => Ok(x),
            Val::Scalar(c) => t
                .scalar(&c)
                .ok_or_else(|| perr(ln, col, "a bare constant is not allowed here")),
        }
    };
    match e {
        Expr::Num(c) => Ok(Val::Scalar(c.clone())),
        Expr::Name(i) => Ok(Val::Elem(t.gen(*i))),
        Expr::Pow(a, k) => {
            let a = eval(t, a, ln, col)?;
            match a {
                Val::Scalar(c) => Ok(Val::Scalar(num_traits::pow(c, *k as usize))),
                Val::Elem(x) => {
                    let mut acc = match t.scalar(&Q::one()) {
                        Some(one) => one,
                        None if *k == 1 => return Ok(Val::Elem(x)),
                        None => return Err(perr(ln, col, "powers are not allowed here")),
                    };
                    for _ in 0..*k {
                        acc = t
                            .mul(&acc, &x)
                            .ok_or_else(|| perr(ln, col, "products are not allowed here"))?;
                    }
                    Ok(Val::Elem(acc))
                }
            }
        }
        Expr::Prod(fs, pcol) => {
            let mut acc: Val<A::T> = Val::Scalar(Q::one());
            for f in fs {
                let v = eval(t, f, ln, *pcol)?;
                acc = match (acc, v) {
                    (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a * b),
                    (Val::Scalar(a), Val::Elem(x)) | (Val::Elem(x), Val::Scalar(a)) => {
                        Val::Elem(t.scale(&x, &a))
                    }
                    (Val::Elem(x), Val::Elem(y)) => Val::Elem(
                        t.mul(&x, &y)
                            .ok_or_else(|| perr(ln, *pcol, "products are not allowed here"))?,
                    ),
                };
            }
            Ok(acc)
        }
        Expr::Sum(terms) => {
            if terms.len() == 1 && !terms[0].0 {
                return eval(t, &terms[0].1, ln, col);
            }
            let mut scalar = Q::zero();
            let mut acc: Option<A::T> = None;
            for (neg, x) in terms {
                match eval(t, x, ln, col)? {
                    Val::Scalar(c) => {
                        if *neg {
                            scalar -= c
                        } else {
                            scalar += c
                        }
                    }
                    Val::Elem(y) => acc = Some(t.add(&acc.unwrap_or_else(|| t.zero()), &y, *neg)),
                }
            }
            match acc {
                None => Ok(Val::Scalar(scalar)),
                Some(x) if scalar.is_zero() => Ok(Val::Elem(x)),
                Some(x) => Ok(Val::Elem(t.add(
                    &x,
                    &elem(Val::Scalar(scalar), col)?,
                    false,
                ))),
            }
        }
        Expr::Br(a, b, bcol) => {
            let a = elem(eval(t, a, ln, *bcol)?, *bcol)?;
            let b = elem(eval(t, b, ln, *bcol)?, *bcol)?;
            Ok(Val::Elem(t.bracket(&a, &b).ok_or_else(|| {
                perr(ln, *bcol, "brackets are not allowed here")
            })?))
        }
    }
}

fn eval_elem<A: Target>(t: &A, e: &Expr, ln: usize, col: usize) -> Result<A::T, Error> {
    match eval(t, e, ln, col)? {
        Val::Elem(x) => Ok(x),
        Val::Scalar(c) => t
            .scalar(&c)
            .ok_or_else(|| perr(ln, col, "a bare constant is not allowed here")),
    }
}

struct Line {
    ln: usize,
    toks: Vec<Token>,
    eol: usize,
}

pub fn parse(text: &str) -> Result<ModelFile, Error> {
    let mut name: Option<String> = None;
    let mut kind: Option<(String, usize)> = None;
    let mut grading: Option<bool> = None;
    let mut algebra: Option<(String, usize)> = None;
    let mut bound: Option<usize> = None;
    let mut gens: Vec<(String, i64, Option<u32>, usize)> = Vec::new();
    let mut body: Vec<Line> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let toks = lex(raw, ln)?;
        if toks.is_empty() {
            continue;
        }
        let eol = raw.chars().count() + 1;
        let dummy = GradedSpace::new();
        let mut c = Cursor {
            toks: &toks,
            pos: 0,
            ln,
            eol,
            names: &dummy,
        };
        let head_col = c.col();
        let head = c.word("a keyword")?;
        match head.as_str() {
            "model" => {
                if name.is_some() {
                    return Err(perr(ln, head_col, "duplicate model line"));
                }
                name = Some(c.name()?);
                c.done()?;
            }
            "kind" => {
                if kind.is_some() {
                    return Err(perr(ln, head_col, "duplicate kind line"));
                }
                let col = c.col();
                let k = c.word("a kind")?;
                if !["cdga", "dgl", "ainfty", "cinfty", "linfty", "presentation"]
                    .contains(&k.as_str())
                {
                    return Err(perr(ln, col, format!("unknown kind {}", k)));
                }
                kind = Some((k, ln));
                c.done()?;
            }
            "grading" => {
                let col = c.col();
                grading = Some(match c.word("a grading")?.as_str() {
                    "cohomological" => true,
                    "homological" => false,
                    other => return Err(perr(ln, col, format!("unknown grading {}", other))),
                });
                c.done()?;
            }
            "algebra" => {
                let col = c.col();
                let a = c.word("comm or lie")?;
                if a != "comm" && a != "lie" {
                    return Err(perr(ln, col, format!("unknown algebra {}", a)));
                }
                algebra = Some((a, ln));
                c.done()?;
            }
            "bound" => {
                let col = c.col();
                let b = c.int()?;
                if b < 1 {
                    return Err(perr(ln, col, "bound must be positive"));
                }
                bound = Some(b as usize);
                c.done()?;
            }
            "generator" => {
                let col = c.col();
                let n = c.name()?;
                if gens.iter().any(|g| g.0 == n) {
                    return Err(perr(ln, col, format!("duplicate generator {}", n)));
                }
                let kw = c.col();
                if c.word("deg")? != "deg" {
                    return Err(perr(ln, kw, "expected deg"));
                }
                let d = c.int()?;
                let mut w = None;
                if c.peek().is_some() {
                    let kw = c.col();
                    if c.word("weight")? != "weight" {
                        return Err(perr(ln, kw, "expected weight"));
                    }
                    let wc = c.col();
                    let x = c.int()?;
                    if x < 1 {
                        return Err(perr(ln, wc, "weight must be positive"));
                    }
                    w = Some(x as u32);
                }
                c.done()?;
                gens.push((n, d, w, ln));
            }
            "d" | "op" | "relation" => body.push(Line { ln, toks, eol }),
            other => return Err(perr(ln, head_col, format!("unknown keyword {}", other))),
        }
    }
    let (kind, kind_ln) = kind.ok_or_else(|| perr(1, 1, "missing kind line"))?;
    let name = name.unwrap_or_else(|| "unnamed".into());
    let coh = grading.unwrap_or(kind == "cdga");
    let mut space = GradedSpace::new();
    for (n, d, w, _) in &gens {
        space.push_weighted(n, if coh { -d } else { *d }, *w);
    }
    let gen_line = |i: usize| gens[i].3;
    let at_end = |msg: String| perr(kind_ln, 1, msg);
    let model = match kind.as_str() {
        "cdga" => {
            let ring = PolyRing::new(space.clone());
            let t = PolyTarget(ring.clone());
            let mut d = vec![Poly::zero(); space.dim()];
            let mut seen = vec![false; space.dim()];
            for line in &body {
                let (i, e, col) = parse_d(line, &space, "d")?;
                if seen[i] {
                    return Err(perr(
                        line.ln,
                        1,
                        format!("second differential for {}", space.name(i)),
                    ));
                }
                seen[i] = true;
                let p = eval_elem(&t, &e, line.ln, col)?;
                for (m, _) in p.iter() {
                    if ring.mono_degree(m) != space.deg(i) - 1 {
                        return Err(perr(
                            line.ln,
                            col,
                            format!("degree mismatch in d {}", space.name(i)),
                        ));
                    }
                }
                d[i] = p;
            }
            for (i, b) in space.basis.iter().enumerate() {
                if b.degree >= 0 {
                    return Err(perr(
                        gen_line(i),
                        1,
                        format!(
                            "generator {} must have positive cohomological degree",
                            b.name
                        ),
                    ));
                }
            }
            Model::Cdga(SullivanModel::new(space, d).map_err(|e| at_end(e.to_string()))?)
        }
        "dgl" => {
            let t = TensorTarget(space.clone());
            let mut free = FreeLie::new(&space);
            let mut d = vec![Tensor::zero(); space.dim()];
            let mut seen = vec![false; space.dim()];
            for line in &body {
                let (i, e, col) = parse_d(line, &space, "d")?;
                if seen[i] {
                    return Err(perr(
                        line.ln,
                        1,
                        format!("second differential for {}", space.name(i)),
                    ));
                }
                seen[i] = true;
                let x = eval_elem(&t, &e, line.ln, col)?;
                let deg = |g: usize| space.deg(g);
                if x.iter()
                    .any(|(u, _)| word_degree(u, &deg) != space.deg(i) - 1)
                {
                    return Err(perr(
                        line.ln,
                        col,
                        format!("degree mismatch in d {}", space.name(i)),
                    ));
                }
                if !free.is_lie(&x) {
                    return Err(perr(line.ln, col, "not a Lie element"));
                }
                d[i] = x;
            }
            for (i, b) in space.basis.iter().enumerate() {
                if b.degree < 1 {
                    return Err(perr(
                        gen_line(i),
                        1,
                        format!("generator {} must have degree at least 1", b.name),
                    ));
                }
            }
            Model::Dgl(QuillenModel::new(space, d).map_err(|e| at_end(e.to_string()))?)
        }
        "presentation" => {
            let (alg, _) =
                algebra.ok_or_else(|| at_end("presentations need an algebra line".into()))?;
            let mut rels_p = Vec::new();
            let mut rels_t = Vec::new();
            for line in &body {
                let toks = &line.toks;
                if toks[0].tok != Tok::Word("relation".into()) {
                    return Err(perr(
                        line.ln,
                        toks[0].col,
                        "presentations only take relation lines",
                    ));
                }
                let mut c = Cursor {
                    toks,
                    pos: 1,
                    ln: line.ln,
                    eol: line.eol,
                    names: &space,
                };
                let col = c.col();
                let e = c.sum()?;
                c.done()?;
                let one = |rel: Relations| {
                    let mut g = space.clone();
                    for b in &mut g.basis {
                        b.weight = b.weight.or(Some(1));
                    }
                    WeightedPresentation::new(g, rel).map_err(|e| perr(line.ln, col, e.to_string()))
                };
                if alg == "comm" {
                    let p = eval_elem(&PolyTarget(PolyRing::new(space.clone())), &e, line.ln, col)?;
                    one(Relations::Comm(vec![p.clone()]))?;
                    rels_p.push(p);
                } else {
                    let x = eval_elem(&TensorTarget(space.clone()), &e, line.ln, col)?;
                    one(Relations::Lie(vec![x.clone()]))?;
                    rels_t.push(x);
                }
            }
            let rel = if alg == "comm" {
                Relations::Comm(rels_p)
            } else {
                Relations::Lie(rels_t)
            };
            Model::Presentation(
                WeightedPresentation::new(space, rel).map_err(|e| at_end(e.to_string()))?,
            )
        }
        _ => {
            let flavor = match kind.as_str() {
                "ainfty" => Flavor::Assoc,
                "cinfty" => Flavor::Comm,
                _ => Flavor::Lie,
            };
            if !space.names_unique() {
                return Err(at_end("generator names must be unique".into()));
            }
            let mut s = InfinityStructure::new(flavor, space.clone());
            for line in &body {
                let head = &line.toks[0];
                let mut c = Cursor {
                    toks: &line.toks,
                    pos: 1,
                    ln: line.ln,
                    eol: line.eol,
                    names: &space,
                };
                let (n, word) = if head.tok == Tok::Word("d".into()) {
                    let i = c.generator()?;
                    (1, vec![i])
                } else if head.tok == Tok::Word("op".into()) {
                    let ac = c.col();
                    let n = c.int()?;
                    if n < 2 {
                        return Err(perr(
                            line.ln,
                            ac,
                            "operations have arity at least 2; use d for arity 1",
                        ));
                    }
                    c.expect_sym('(')?;
                    let mut word = vec![c.generator()?];
                    while c.peek() == Some(&Tok::Sym(',')) {
                        c.pos += 1;
                        word.push(c.generator()?);
                    }
                    c.expect_sym(')')?;
                    if word.len() != n as usize {
                        return Err(perr(
                            line.ln,
                            ac,
                            format!("arity {} with {} inputs", n, word.len()),
                        ));
                    }
                    (n as usize, word)
                } else {
                    return Err(perr(line.ln, head.col, "expected d or op"));
                };
                c.expect_sym('=')?;
                let ecol = c.col();
                let e = c.sum()?;
                c.done()?;
                let v = eval_elem(&LinTarget, &e, line.ln, ecol)?;
                let target = word.iter().map(|&i| space.deg(i)).sum::<i64>() + n as i64 - 2;
                if v.iter().any(|(i, _)| space.deg(*i) != target) {
                    return Err(perr(
                        line.ln,
                        ecol,
                        format!(
                            "degree mismatch: output must have degree {}",
                            if coh { -target } else { target }
                        ),
                    ));
                }
                if n == 1 {
                    s.set_d(word[0], v);
                } else if flavor == Flavor::Lie {
                    s.set_antisymmetric(n, word, v);
                } else {
                    s.set_raw(n, word, v);
                }
            }
            s.certify_declared(bound.unwrap_or(2));
            Model::Structure(s)
        }
    };
    Ok(ModelFile { name, model })
}

fn parse_expr<A: Target>(t: &A, space: &GradedSpace, text: &str) -> Result<A::T, Error> {
    let toks = lex(text, 1)?;
    let eol = text.chars().count() + 1;
    let mut c = Cursor {
        toks: &toks,
        pos: 0,
        ln: 1,
        eol,
        names: space,
    };
    let col = c.col();
    let e = c.sum()?;
    c.done()?;
    eval_elem(t, &e, 1, col)
}

/// A linear combination of basis elements, e.g. `2*x - 1/3*y`.
pub fn parse_vector(space: &GradedSpace, text: &str) -> Result<Vector, Error> {
    parse_expr(&LinTarget, space, text)
}

/// An element of the tensor algebra, with brackets `[a,b]` and products `a*b`.
pub fn parse_tensor(space: &GradedSpace, text: &str) -> Result<Tensor, Error> {
    parse_expr(&TensorTarget(space.clone()), space, text)
}

fn parse_d(line: &Line, space: &GradedSpace, kw: &str) -> Result<(usize, Expr, usize), Error> {
    let head = &line.toks[0];
    if head.tok != Tok::Word(kw.into()) {
        return Err(perr(line.ln, head.col, format!("expected {}", kw)));
    }
    let mut c = Cursor {
        toks: &line.toks,
        pos: 1,
        ln: line.ln,
        eol: line.eol,
        names: space,
    };
    let i = c.generator()?;
    c.expect_sym('=')?;
    let col = c.col();
    let e = c.sum()?;
    c.done()?;
    Ok((i, e, col))
}

fn gen_lines(out: &mut String, g: &GradedSpace, coh: bool, weights: bool) {
    for b in &g.basis {
        let d = if coh { -b.degree } else { b.degree };
        out.push_str(&format!("generator {} deg {}", quote(&b.name), d));
        if weights {
            if let Some(w) = b.weight {
                out.push_str(&format!(" weight {}", w));
            }
        }
        out.push('\n');
    }
}

fn fmt_vector(g: &GradedSpace, v: &Vector) -> String {
    let items: Vec<(String, Q)> = v
        .iter()
        .map(|(i, c)| (quote(g.name(*i)), c.clone()))
        .collect();
    fmt_combination(&items)
}

pub fn print(m: &ModelFile) -> String {
    let mut out = format!("model {}\nkind {}\n", quote(&m.name), m.kind());
    match &m.model {
        Model::Cdga(s) => {
            gen_lines(&mut out, &s.ring.gens, true, true);
            let ring = PolyRing::new(quoted_space(&s.ring.gens));
            for (i, p) in s.d.iter().enumerate() {
                if !p.is_zero() {
                    out.push_str(&format!(
                        "d {} = {}\n",
                        quote(s.ring.gens.name(i)),
                        ring.fmt_poly(p)
                    ));
                }
            }
        }
        Model::Dgl(q) => {
            gen_lines(&mut out, &q.gens, false, true);
            let g = quoted_space(&q.gens);
            for (i, t) in q.delta.iter().enumerate() {
                if !t.is_zero() {
                    out.push_str(&format!(
                        "d {} = {}\n",
                        quote(q.gens.name(i)),
                        fmt_lie(&g, t)
                    ));
                }
            }
        }
        Model::Presentation(p) => {
            out.push_str(&format!("algebra {}\n", p.kind().name()));
            gen_lines(&mut out, &p.gens, false, true);
            let g = quoted_space(&p.gens);
            match &p.relations {
                Relations::Comm(r) => {
                    let ring = PolyRing::new(g);
                    for x in r {
                        out.push_str(&format!("relation {}\n", ring.fmt_poly(x)));
                    }
                }
                Relations::Lie(r) => {
                    for x in r {
                        out.push_str(&format!("relation {}\n", fmt_lie(&g, x)));
                    }
                }
            }
        }
        Model::Structure(s) => {
            let top = s.top_arity().max(2);
            if s.arity_bound != top {
                out.push_str(&format!("bound {}\n", s.arity_bound));
            }
            gen_lines(&mut out, &s.space, false, true);
            for i in 0..s.dim() {
                let v = &s.d.cols[i];
                if !v.is_zero() {
                    out.push_str(&format!(
                        "d {} = {}\n",
                        quote(s.space.name(i)),
                        fmt_vector(&s.space, v)
                    ));
                }
            }
            for (n, table) in &s.ops {
                for (w, v) in table {
                    if s.flavor == Flavor::Lie && w.windows(2).any(|p| p[0] > p[1]) {
                        continue;
                    }
                    let args: Vec<String> = w.iter().map(|&i| quote(s.space.name(i))).collect();
                    out.push_str(&format!(
                        "op {} ({}) = {}\n",
                        n,
                        args.join(","),
                        fmt_vector(&s.space, v)
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    const CP2: &str = "# the complex projective plane\nmodel cp2\nkind cdga\ngenerator x deg 2\ngenerator y deg 5\nd y = x^3\n";

    #[test]
    fn cp2_sullivan() {
        let m = parse(CP2).unwrap();
        let Model::Cdga(s) = &m.model else { panic!() };
        assert_eq!(s.ring.gens.deg(0), -2);
        assert_eq!(s.d[1], s.ring.pow(&s.ring.gen(0), 3));
        assert_eq!(parse(&print(&m)).unwrap(), m);
    }

    #[test]
    fn errors_carry_positions() {
        let bad =
            "model a\nkind linfty\ngenerator x deg 1\ngenerator y deg 1\nop 2 (x,y) = 1/0*x\n";
        match parse(bad) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!((line, col), (5, 14));
                assert!(msg.contains("malformed rational"), "{}", msg);
            }
            other => panic!("{:?}", other),
        }
        match parse("kind cdga\ngenerator x deg 2\ngenerator x deg 3\n") {
            Err(Error::Parse {
                line: 3, col: 11, ..
            }) => {}
            other => panic!("{:?}", other),
        }
        match parse("kind linfty\ngenerator x deg 1\ngenerator y deg 1\nop 2 (x,x) = y\n") {
            Err(Error::Parse { line: 4, msg, .. }) => assert!(msg.contains("degree mismatch")),
            other => panic!("{:?}", other),
        }
        assert!(matches!(
            parse("kind cdga\ngenerator x deg 2\nd z = x\n"),
            Err(Error::Parse {
                line: 3,
                col: 3,
                ..
            })
        ));
    }

    #[test]
    fn strict_complex_and_quoting() {
        let text = "kind ainfty\ngenerator \"x*y\" deg 2\ngenerator b deg 1\nd \"x*y\" = -2/3*b\n";
        let m = parse(text).unwrap();
        let Model::Structure(s) = &m.model else {
            panic!()
        };
        assert!(s.ops.is_empty());
        assert_eq!(s.d.cols[0], Vector::single(1, crate::q::qf(-2, 3)));
        assert_eq!(parse(&print(&m)).unwrap(), m);
        let e = parse("kind cinfty\ngenerator a deg 0\n").unwrap();
        let Model::Structure(s) = &e.model else {
            panic!()
        };
        assert!(s.d.is_zero() && s.ops.is_empty());
    }

    #[test]
    fn lie_models() {
        let text = "model w\nkind dgl\ngenerator a deg 1\ngenerator b deg 1\ngenerator c deg 2\n\
                    generator x deg 4\nd x = [a,c] + [a,[a,b]]\n";
        let m = parse(text).unwrap();
        assert_eq!(parse(&print(&m)).unwrap(), m);
        assert!(matches!(
            parse("kind dgl\ngenerator a deg 2\ngenerator b deg 3\nd b = a*a\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        let l = "kind linfty\ngenerator α deg 1\ngenerator β deg 4\nop 3 (α,α,α) = 6*β\n";
        let m = parse(l).unwrap();
        let Model::Structure(s) = &m.model else {
            panic!()
        };
        assert_eq!(s.op(3, &[0, 0, 0]), Vector::single(1, q(6)));
        assert_eq!(parse(&print(&m)).unwrap(), m);
        let p = "kind presentation\nalgebra lie\ngenerator t12 deg 1 weight 1\ngenerator t13 deg 1\nrelation [t12,t13]\n";
        let m = parse(p).unwrap();
        assert_eq!(parse(&print(&m)).unwrap(), m);
    }
}
