//! Sparse multivariate polynomials over the integers.
//!
//! Only what the partial-field code needs: ring operations, exact division,
//! evaluation into a finite field, and a small expression parser.
//! Monomials pack up to eight exponents into a `u64`, variable 0 in the most
//! significant byte, so integer comparison of the packed key is lex order.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

pub const MAX_VARS: usize = 8;

type Mono = u64;

#[inline]
fn mono_exp(m: Mono, var: usize) -> u32 {
    ((m >> (8 * (MAX_VARS - 1 - var))) & 0xFF) as u32
}

#[inline]
fn mono_unit(var: usize) -> Mono {
    1u64 << (8 * (MAX_VARS - 1 - var))
}

#[inline]
fn mono_divides(d: Mono, m: Mono) -> bool {
    (0..MAX_VARS).all(|v| mono_exp(d, v) <= mono_exp(m, v))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    /// Terms sorted by descending monomial, no zero coefficients.
    terms: Vec<(Mono, i128)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: i128) -> Poly {
        if c == 0 {
            Poly::zero()
        } else {
            Poly { terms: vec![(0, c)] }
        }
    }

    pub fn var(v: usize) -> Poly {
        assert!(v < MAX_VARS);
        Poly { terms: vec![(mono_unit(v), 1)] }
    }

    fn from_terms(mut terms: Vec<(Mono, i128)>) -> Poly {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, i128)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<i128> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| (0..MAX_VARS).map(|v| mono_exp(*m, v)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1 + b[j].1;
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|&(m, c)| (m, -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i128) -> Poly {
        Poly::from_terms(self.terms.iter().map(|&(m, c)| (m, c * k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(m1, c1) in &self.terms {
            for &(m2, c2) in &other.terms {
                t.push((m1 + m2, c1 * c2));
            }
        }
        Poly::from_terms(t)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self` over Z.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let &(dm, dc) = d.terms.first()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(&(rm, rc)) = rem.terms.first() {
            if !mono_divides(dm, rm) || rc % dc != 0 {
                return None;
            }
            let qm = rm - dm;
            let qc = rc / dc;
            quot.push((qm, qc));
            let sub = Poly { terms: d.terms.iter().map(|&(m, c)| (m + qm, c * qc)).collect() };
            rem = rem.sub(&sub);
        }
        Some(Poly::from_terms(quot))
    }

    /// Evaluates with coefficients reduced into the prime subfield of `field`.
    pub fn eval(&self, field: &FieldSpec, values: &[Elem]) -> Elem {
        let mut acc = 0;
        for &(m, c) in &self.terms {
            let c = field.from_int((c % field.characteristic() as i128) as i64);
            let mut t = c;
            for (v, &x) in values.iter().enumerate().take(MAX_VARS) {
                let e = mono_exp(m, v);
                if e > 0 {
                    t = field.mul(t, field.pow(x, e as u64));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Reduces modulo a monic univariate polynomial in variable 0.
    pub fn rem_monic_univariate(&self, modulus: &Poly) -> Poly {
        let deg = modulus.degree();
        let lead = mono_unit(0) * deg as u64;
        assert_eq!(modulus.terms.first().map(|t| (t.0, t.1)), Some((lead, 1)), "modulus must be monic");
        let tail = modulus.sub(&Poly { terms: vec![(lead, 1)] });
        let mut p = self.clone();
        loop {
            let Some(&(m, c)) = p.terms.iter().find(|(m, _)| mono_exp(*m, 0) >= deg) else {
                return p;
            };
            let shift = m - lead;
            let head = Poly { terms: vec![(m, c)] };
            let repl = Poly { terms: tail.terms.iter().map(|&(tm, tc)| (tm + shift, -tc * c)).collect() };
            p = p.sub(&head).add(&repl);
        }
    }

    /// Renders with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, &(m, c)) in self.terms.iter().enumerate() {
            let mut mono = String::new();
            for v in 0..MAX_VARS {
                let e = mono_exp(m, v);
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                let name = names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                mono.push_str(&name);
                if e > 1 {
                    mono.push_str(&format!("^{e}"));
                }
            }
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(sign);
            }
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag == 1 {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }

    /// Parses an expression over integers and the named variables with
    /// `+ - * ^` and parentheses.
    pub fn parse(src: &str, names: &[String]) -> Result<Poly> {
        let mut p = Parser { s: src.as_bytes(), i: 0, names };
        let e = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(Error::Parse(format!("trailing input in {src:?}")));
        }
        Ok(e)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.i, String::from_utf8_lossy(self.s)))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.i += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.i += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.i += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.i])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.i += 1;
                Ok(self.atom()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let v: i128 = std::str::from_utf8(&self.s[start..self.i])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err("bad integer"))?;
                Ok(Poly::constant(v))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                let v = self
                    .names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::Parse(format!("unknown symbol {name}")))?;
                Ok(Poly::var(v))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn parse_and_render() {
        let p = Poly::parse("(a - b)^2", &names()).unwrap();
        assert_eq!(p.render(&names()), "a^2-2*a*b+b^2");
        let q = Poly::parse("1 - a", &names()).unwrap();
        assert_eq!(q.render(&names()), "-a+1");
        assert!(Poly::parse("a + c", &names()).is_err());
        assert!(Poly::parse("a +", &names()).is_err());
    }

    #[test]
    fn exact_division() {
        let n = names();
        let p = Poly::parse("(a-b)*(1-a)*(1-a)*b", &n).unwrap();
        let d = Poly::parse("1-a", &n).unwrap();
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q, Poly::parse("(a-b)*(1-a)*b", &n).unwrap());
        assert!(Poly::parse("a+b", &n).unwrap().div_exact(&d).is_none());
        assert!(Poly::parse("2*a", &n).unwrap().div_exact(&Poly::constant(3)).is_none());
    }

    #[test]
    fn univariate_reduction() {
        let x = vec!["x".to_string()];
        let m = Poly::parse("x^2 - x + 1", &x).unwrap();
        // x^3 = -1 modulo x^2 - x + 1
        assert_eq!(Poly::parse("x^3", &x).unwrap().rem_monic_univariate(&m), Poly::constant(-1));
        assert_eq!(Poly::parse("x^6", &x).unwrap().rem_monic_univariate(&m), Poly::constant(1));
    }

    #[test]
    fn evaluation() {
        let f = FieldSpec::new(211).unwrap();
        let p = Poly::parse("a - b", &names()).unwrap();
        assert_eq!(p.eval(&f, &[4, 44]), 211 - 40);
        let f4 = FieldSpec::new(4).unwrap();
        let q = Poly::parse("a^2 + a + 1", &names()).unwrap();
        assert_eq!(q.eval(&f4, &[2, 0]), 0);
    }
}
