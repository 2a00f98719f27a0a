//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every variable has degree one. Monomials are compared in graded reverse
//! lexicographic order with variable 0 the largest, and a polynomial keeps
//! its terms sorted from the leading term down.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{format_rational, parse_rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u8]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars].into_boxed_slice(),
            degree: 0,
        }
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Monomial {
            exps: exps.into_boxed_slice(),
            degree: 1,
        }
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial {
            exps: exps.into_boxed_slice(),
            degree,
        }
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn exponent(&self, index: usize) -> u8 {
        self.exps[index]
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u8> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            exps: exps.into_boxed_slice(),
            degree: self.degree + other.degree,
        }
    }

    /// Bit `i % 64` set for each variable `i` with positive exponent; a
    /// necessary condition for divisibility is mask inclusion.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .fold(0, |acc, (i, _)| acc | 1 << (i % 64))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u8> = other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Monomial {
            exps: exps.into_boxed_slice(),
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u8> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::from_exponents(exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All monomials of the given degree in `nvars` variables, each exponent
    /// bounded by the matching entry of `max_exps`.
    pub fn all_of_degree(nvars: usize, degree: u32, max_exps: &[u8]) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u8; nvars];
        fn fill(
            pos: usize,
            remaining: u32,
            exps: &mut Vec<u8>,
            max_exps: &[u8],
            out: &mut Vec<Monomial>,
        ) {
            if pos + 1 == exps.len() {
                if remaining <= max_exps[pos] as u32 {
                    exps[pos] = remaining as u8;
                    out.push(Monomial::from_exponents(exps.clone()));
                    exps[pos] = 0;
                }
                return;
            }
            let top = remaining.min(max_exps[pos] as u32);
            for e in (0..=top).rev() {
                exps[pos] = e as u8;
                fill(pos + 1, remaining - e, exps, max_exps, out);
            }
            exps[pos] = 0;
        }
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        fill(0, degree, &mut exps, max_exps, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.exps.iter().zip(other.exps.iter()).rev() {
            if a != b {
                // smaller power of the last differing variable wins
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..])
    }
}

/// Names of the variables of a polynomial ring, in monomial-order position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSet {
    names: Vec<String>,
}

impl VariableSet {
    pub fn new(names: Vec<String>) -> Self {
        VariableSet { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str) -> Result<MultiPoly> {
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(MultiPoly::var(self.len(), i))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.names[i].clone()
                } else {
                    format!("{}^{}", self.names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, p: &MultiPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if m.degree() == 0 {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    /// Parse expressions such as `2*h1^2*D_123 - D_12 + 1/2*h2`.
    ///
    /// Grammar: a sum of terms, each an optional rational coefficient
    /// followed by `*`-separated factors `name` or `name^k`.
    pub fn parse(&self, text: &str) -> Result<MultiPoly> {
        PolyParser {
            vars: self,
            text,
            chars: text.char_indices().collect(),
            pos: 0,
        }
        .parse()
    }
}

struct PolyParser<'a> {
    vars: &'a VariableSet,
    text: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl PolyParser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if pred(c)) {
            self.pos += 1;
        }
        let begin = self.chars.get(start).map_or(self.text.len(), |c| c.0);
        let end = self.chars.get(self.pos).map_or(self.text.len(), |c| c.0);
        self.text[begin..end].to_string()
    }

    fn parse(mut self) -> Result<MultiPoly> {
        let nvars = self.vars.len();
        let mut total = MultiPoly::zero(nvars);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = BigRational::one();
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                None => break,
                Some(_) if first => {}
                Some(c) => return Err(self.err(format!("expected `+` or `-`, found `{c}`"))),
            }
            first = false;
            let term = self.term()?;
            total = total.add(&term.scale(&sign));
        }
        Ok(total)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let nvars = self.vars.len();
        let mut term = MultiPoly::constant(nvars, BigRational::one());
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    let tok = self.take_while(|c| c.is_ascii_digit() || c == '/');
                    let value = parse_rational(&tok).map_err(|m| {
                        self.pos = start;
                        self.err(m)
                    })?;
                    term = term.scale(&value);
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let start = self.pos;
                    let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                    let var = self.vars.var(&name).map_err(|_| {
                        self.pos = start;
                        self.err(format!("unknown variable `{name}`"))
                    })?;
                    self.skip_ws();
                    let mut power = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        self.skip_ws();
                        let tok = self.take_while(|c| c.is_ascii_digit());
                        power = tok.parse().map_err(|_| self.err("expected exponent"))?;
                    }
                    term = term.mul(&var.pow(power));
                }
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
                None => return Err(self.err("unexpected end of input")),
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(term)
    }
}

/// A polynomial as a list of nonzero terms sorted from the leading term down.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, BigRational)>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        MultiPoly {
            nvars,
            terms: vec![(Monomial::var(nvars, index), BigRational::one())],
        }
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let nvars = m.nvars();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Build from unsorted terms, combining duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, mut terms: Vec<(Monomial, BigRational)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        MultiPoly { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    /// Degree of the highest term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    /// Common degree of all terms, or `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|t| t.0.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Embed into a ring with more variables, sending variable `i` to
    /// `mapping[i]`.
    pub fn remap(&self, nvars: usize, mapping: &[usize]) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u8; nvars];
                for (i, &e) in m.exponents().iter().enumerate() {
                    exps[mapping[i]] += e;
                }
                (Monomial::from_exponents(exps), c.clone())
            })
            .collect();
        MultiPoly::from_terms(nvars, terms)
    }

    fn merge(&self, other: &MultiPoly, negate_other: bool) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Greater => {
                        out.push((*a.next().unwrap()).clone());
                    }
                    Ordering::Less => {
                        let (m, c) = b.next().unwrap();
                        out.push((m.clone(), if negate_other { -c } else { c.clone() }));
                    }
                    Ordering::Equal => {
                        let (m, c1) = a.next().unwrap();
                        let (_, c2) = b.next().unwrap();
                        let c = if negate_other { c1 - c2 } else { c1 + c2 };
                        if !c.is_zero() {
                            out.push((m.clone(), c));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    out.push((m.clone(), if negate_other { -c } else { c.clone() }));
                }
                (None, None) => break,
            }
        }
        MultiPoly {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.merge(other, true)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> MultiPoly {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// `c * m * self`; the order is preserved by monomial multiplication.
    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, a)| (x.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.nvars);
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.terms.first() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// True when all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_integer())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*x{:?}", format_rational(c), m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ring() -> VariableSet {
        VariableSet::new(vec!["D_12".into(), "h1".into(), "h2".into()])
    }

    #[test]
    fn grevlex_basics() {
        // x0 > x1 > x2 in degree 1
        let x = |i| Monomial::var(3, i);
        assert!(x(0) > x(1) && x(1) > x(2));
        // degree dominates
        assert!(Monomial::from_exponents(vec![0, 0, 2]) > x(0));
        // x0*x2 < x1^2 in grevlex (last variable penalized)
        assert!(Monomial::from_exponents(vec![1, 0, 1]) < Monomial::from_exponents(vec![0, 2, 0]));
    }

    #[test]
    fn arithmetic_and_format() {
        let r = ring();
        let p = r.parse("h1 - h2").unwrap();
        let s = r.parse("h1 + h2").unwrap();
        assert_eq!(r.format(&p.mul(&s)), "h1^2 - h2^2");
        assert_eq!(r.format(&p.sub(&p)), "0");
        let t = r.parse("2*D_12^2*h1 - 1/2*h2 + 3").unwrap();
        assert_eq!(r.format(&t), "2*D_12^2*h1 - 1/2*h2 + 3");
        assert_eq!(t.total_degree(), Some(3));
        assert!(!t.is_homogeneous());
        assert!(p.is_homogeneous());
        assert_eq!(r.parse("h1^0").unwrap(), MultiPoly::one(3));
    }

    #[test]
    fn parse_errors_carry_columns() {
        let r = ring();
        match r.parse("h1 + h9") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(r.parse("").is_err());
        assert!(r.parse("h1 *").is_err());
        assert!(r.parse("h1 h2").is_err());
    }

    #[test]
    fn enumerate_degree_slices() {
        let all = Monomial::all_of_degree(3, 2, &[2, 2, 2]);
        assert_eq!(all.len(), 6);
        let capped = Monomial::all_of_degree(3, 2, &[2, 1, 1]);
        assert_eq!(capped.len(), 4);
        assert!(all.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn coefficient_lookup() {
        let r = ring();
        let p = r.parse("3*h1*h2 - D_12*h1").unwrap();
        let m = Monomial::from_exponents(vec![0, 1, 1]);
        assert_eq!(p.coefficient(&m), q(3));
        assert_eq!(p.coefficient(&Monomial::one(3)), q(0));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u8..3, 0u8..3, 0u8..3), -5i64..5), 0..6).prop_map(|terms| {
            MultiPoly::from_terms(
                3,
                terms
                    .into_iter()
                    .map(|((a, b, c), k)| (Monomial::from_exponents(vec![a, b, c]), q(k)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            prop_assert!(a.terms().windows(2).all(|w| w[0].0 > w[1].0));
        }

        #[test]
        fn format_parse_roundtrip(a in small_poly()) {
            let r = ring();
            prop_assert_eq!(r.parse(&r.format(&a)).unwrap(), a);
        }
    }
}
