//! The graded polynomial base ring `K = Q[x_1, ..., x_s]` with generators in
//! positive even degrees, and its homogeneous elements.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{q, Rational};

/// Exponent vector, one entry per ring generator.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingGenerator {
    pub name: String,
    pub degree: i32,
}

/// `Q[x_1, ..., x_s]`, each `x_i` of positive even degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedPolyRing {
    generators: Vec<RingGenerator>,
}

impl GradedPolyRing {
    pub fn new<S: Into<String>>(generators: impl IntoIterator<Item = (S, i32)>) -> Result<Self> {
        let generators: Vec<RingGenerator> = generators
            .into_iter()
            .map(|(n, d)| RingGenerator {
                name: n.into(),
                degree: d,
            })
            .collect();
        for (i, g) in generators.iter().enumerate() {
            if g.degree < 2 || g.degree % 2 != 0 {
                return Err(Error::InvalidPresentation(format!(
                    "ring generator {} has degree {}; degrees must be even and >= 2",
                    g.name, g.degree
                )));
            }
            if !is_identifier(&g.name) {
                return Err(Error::InvalidPresentation(format!("bad generator name {:?}", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidPresentation(format!("duplicate generator {}", g.name)));
            }
        }
        Ok(GradedPolyRing { generators })
    }

    /// The ground field `Q`, i.e. the ring with no generators.
    pub fn field() -> Self {
        GradedPolyRing::default()
    }

    pub fn is_field(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[RingGenerator] {
        &self.generators
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn max_generator_degree(&self) -> i32 {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn monomial_degree(&self, m: &[u32]) -> i32 {
        m.iter()
            .zip(&self.generators)
            .map(|(&e, g)| e as i32 * g.degree)
            .sum()
    }

    pub fn one_monomial(&self) -> Monomial {
        vec![0; self.num_vars()]
    }

    pub fn variable(&self, i: usize) -> Monomial {
        let mut m = self.one_monomial();
        m[i] = 1;
        m
    }

    /// All monomials of degree `d`, in descending lexicographic order.
    pub fn monomials_of_degree(&self, d: i32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        let mut current = self.one_monomial();
        self.enumerate(0, d, &mut current, &mut out);
        out
    }

    fn enumerate(&self, i: usize, remaining: i32, current: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == self.num_vars() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let deg = self.generators[i].degree;
        let mut e = remaining / deg;
        loop {
            current[i] = e as u32;
            self.enumerate(i + 1, remaining - e * deg, current, out);
            if e == 0 {
                break;
            }
            e -= 1;
        }
        current[i] = 0;
    }

    pub fn dim(&self, d: i32) -> usize {
        self.monomials_of_degree(d).len()
    }

    /// Tensor product over `Q`: generators of `self` then of `other`, renamed
    /// with suffixes `_1`/`_2` when names collide.
    pub fn tensor(&self, other: &GradedPolyRing) -> GradedPolyRing {
        let clash = self
            .generators
            .iter()
            .any(|g| other.generators.iter().any(|h| h.name == g.name));
        let rename = |g: &RingGenerator, suffix: &str| RingGenerator {
            name: if clash {
                format!("{}_{}", g.name, suffix)
            } else {
                g.name.clone()
            },
            degree: g.degree,
        };
        let mut generators: Vec<RingGenerator> = self.generators.iter().map(|g| rename(g, "1")).collect();
        generators.extend(other.generators.iter().map(|g| rename(g, "2")));
        GradedPolyRing { generators }
    }

    pub fn parse(&self, src: &str) -> Result<KPolynomial> {
        let terms = parse_polynomial(src, &self.names())?;
        Ok(KPolynomial::from_terms(terms))
    }

    pub fn format(&self, p: &KPolynomial) -> String {
        format_terms(&p.terms, &self.names())
    }
}

/// Homogeneous or inhomogeneous element of `K`; coefficients are never zero.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct KPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

/// Marker error: the terms of a polynomial have different degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inhomogeneous;

impl KPolynomial {
    pub fn zero() -> Self {
        KPolynomial::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = KPolynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        KPolynomial::from_terms([(m, c)])
    }

    pub fn constant(ring: &GradedPolyRing, c: Rational) -> Self {
        KPolynomial::monomial(ring.one_monomial(), c)
    }

    pub fn one(ring: &GradedPolyRing) -> Self {
        KPolynomial::constant(ring, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &KPolynomial) -> KPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &KPolynomial) -> KPolynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KPolynomial {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Rational) -> KPolynomial {
        if c.is_zero() {
            return KPolynomial::zero();
        }
        KPolynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &KPolynomial) -> KPolynomial {
        let mut out = KPolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, mono: &[u32]) -> KPolynomial {
        KPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(mono).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms, `None` for zero; errors if inhomogeneous.
    pub fn homogeneous_degree(&self, ring: &GradedPolyRing) -> std::result::Result<Option<i32>, Inhomogeneous> {
        let mut degs = self.terms.keys().map(|m| ring.monomial_degree(m));
        let Some(first) = degs.next() else {
            return Ok(None);
        };
        if degs.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(Inhomogeneous)
        }
    }

    /// Constant term (the image under the augmentation `K -> Q`).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.iter().all(|&e| e == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a polynomial expression in the given variables, e.g. `x^2 - 3/2*x*y`.
/// Supports `+ - * ^`, parentheses and rational literals.
pub fn parse_polynomial(src: &str, vars: &[&str]) -> Result<BTreeMap<Monomial, Rational>> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("unexpected trailing input in {src:?}")));
    }
    Ok(out.terms)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n: num_bigint::BigInt = s.parse().map_err(|_| Error::Parse(format!("bad number {s}")))?;
            out.push(Token::Num(Rational::from_integer(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<KPolynomial> {
        let mut sign = if self.eat_op('-') {
            -1
        } else {
            self.eat_op('+');
            1
        };
        let mut acc = KPolynomial::zero();
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale(&q(sign)));
            if self.eat_op('+') {
                sign = 1;
            } else if self.eat_op('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<KPolynomial> {
        let mut acc = self.factor()?;
        while self.eat_op('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<KPolynomial> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let Some(Token::Num(n)) = self.peek().cloned() else {
                return Err(Error::Parse("expected exponent after '^'".into()));
            };
            self.pos += 1;
            let e: u32 = n
                .to_integer()
                .try_into()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            let mut acc = KPolynomial::monomial(vec![0; self.vars.len()], Rational::one());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<KPolynomial> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Token::Num(a)) => {
                self.pos += 1;
                let mut value = a;
                if self.eat_op('/') {
                    let Some(Token::Num(b)) = self.peek().cloned() else {
                        return Err(Error::Parse("expected denominator".into()));
                    };
                    self.pos += 1;
                    if b.is_zero() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    value /= b;
                }
                Ok(KPolynomial::monomial(vec![0; n], value))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown symbol {name}")))?;
                let mut m = vec![0; n];
                m[i] = 1;
                Ok(KPolynomial::monomial(m, Rational::one()))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn format_terms(terms: &BTreeMap<Monomial, Rational>, names: &[&str]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in terms.iter().rev().enumerate() {
        let negative = c < &Rational::zero();
        let abs = if negative { -c.clone() } else { c.clone() };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let factors: Vec<String> = m
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if factors.is_empty() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for KPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.terms.keys().next().map_or(0, |m| m.len());
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", format_terms(&self.terms, &refs))
    }
}
