//! Partial-field presentations, their fundamental elements, and finite-field
//! proxies with a confinement set.

pub mod poly;
mod proxy;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use poly::Poly;

pub use proxy::{field_verdict, find_proxy, verify_proxy, FieldVerdict, Proxy, ProxyViolation};

/// Default exponent bound for enumerating fundamentals.
pub const DEFAULT_BOUND: i32 = 3;

/// Largest prime tried by a proxy search unless told otherwise.
pub const DEFAULT_PRIME_CEILING: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PfKind {
    /// Group generated by −1 and pairwise coprime integers.
    RationalConstants,
    /// Finite unit group inside Z[x]/(modulus).
    QuotientRing,
    /// Group generated by −1 and irreducible integer polynomials.
    FreeRational,
}

/// Raw form, as read from a config file.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PresentationConfig {
    pub name: String,
    pub kind: PfKind,
    pub generators: Vec<String>,
    pub group_generators: Vec<String>,
    #[serde(default = "default_true")]
    pub minus_one_distinct: bool,
    #[serde(default)]
    pub modulus: Option<String>,
}

fn default_true() -> bool {
    true
}

/// An element of the group: `sign * prod g_i^{exps_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub sign: i8,
    pub exps: Vec<i32>,
}

/// A fundamental element: 0, 1, or a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fundamental {
    Zero,
    One,
    Unit(GroupElement),
}

#[derive(Clone)]
pub struct PartialFieldPresentation {
    pub name: String,
    pub kind: PfKind,
    pub generators: Vec<String>,
    pub group_generator_src: Vec<String>,
    pub group_generators: Vec<Poly>,
    pub minus_one_distinct: bool,
    pub modulus: Option<Poly>,
    /// Quotient rings only: canonical element per reduced ring value.
    units: Option<QuotientUnits>,
}

#[derive(Clone)]
struct QuotientUnits {
    modulus: Poly,
    by_value: HashMap<Poly, GroupElement>,
    values: Vec<(GroupElement, Poly)>,
}

impl fmt::Debug for PartialFieldPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialFieldPresentation")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("generators", &self.generators)
            .field("group_generators", &self.group_generator_src)
            .finish()
    }
}

/// The fundamental elements of a presentation together with their
/// complements `1 - p`.
#[derive(Clone, Debug)]
pub struct Fundamentals {
    pub elements: Vec<Fundamental>,
    /// `complement[i]` is the index of `1 - elements[i]`.
    pub complement: Vec<usize>,
    index: HashMap<Fundamental, usize>,
}

impl Fundamentals {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, f: &Fundamental) -> Option<usize> {
        self.index.get(f).copied()
    }
}

pub fn builtin(name: &str) -> Result<PartialFieldPresentation> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let cfg = match name {
        "D" => PresentationConfig {
            name: "D".into(),
            kind: PfKind::RationalConstants,
            generators: s(&["2"]),
            group_generators: s(&["2"]),
            minus_one_distinct: true,
            modulus: None,
        },
        "S" => PresentationConfig {
            name: "S".into(),
            kind: PfKind::QuotientRing,
            generators: s(&["zeta"]),
            group_generators: s(&["zeta"]),
            minus_one_distinct: true,
            modulus: Some("zeta^2 - zeta + 1".into()),
        },
        "U1" => PresentationConfig {
            name: "U1".into(),
            kind: PfKind::FreeRational,
            generators: s(&["alpha"]),
            group_generators: s(&["alpha", "1 - alpha"]),
            minus_one_distinct: true,
            modulus: None,
        },
        "U2" => PresentationConfig {
            name: "U2".into(),
            kind: PfKind::FreeRational,
            generators: s(&["alpha", "beta"]),
            group_generators: s(&["alpha", "beta", "1 - alpha", "1 - beta", "alpha - beta"]),
            minus_one_distinct: true,
            modulus: None,
        },
        "K2" => PresentationConfig {
            name: "K2".into(),
            kind: PfKind::FreeRational,
            generators: s(&["alpha"]),
            group_generators: s(&["alpha - 1", "alpha", "alpha + 1"]),
            minus_one_distinct: true,
            modulus: None,
        },
        _ => return Err(Error::UnknownName(format!("partial field {name}"))),
    };
    PartialFieldPresentation::from_config(cfg)
}

pub const BUILTIN_NAMES: [&str; 5] = ["D", "S", "U1", "U2", "K2"];

impl PartialFieldPresentation {
    pub fn from_config(cfg: PresentationConfig) -> Result<Self> {
        if cfg.group_generators.is_empty() {
            return Err(Error::Parse("a presentation needs at least one group generator".into()));
        }
        let symbols: Vec<String> = match cfg.kind {
            PfKind::RationalConstants => Vec::new(),
            _ => cfg.generators.clone(),
        };
        if symbols.len() > poly::MAX_VARS {
            return Err(Error::Parse(format!("at most {} generators are supported", poly::MAX_VARS)));
        }
        let group_generators = cfg
            .group_generators
            .iter()
            .map(|g| Poly::parse(g, &symbols))
            .collect::<Result<Vec<_>>>()?;
        let modulus = cfg.modulus.as_deref().map(|m| Poly::parse(m, &symbols)).transpose()?;
        let mut pf = PartialFieldPresentation {
            name: cfg.name,
            kind: cfg.kind,
            generators: cfg.generators,
            group_generator_src: cfg.group_generators,
            group_generators,
            minus_one_distinct: cfg.minus_one_distinct,
            modulus,
            units: None,
        };
        match pf.kind {
            PfKind::RationalConstants => {
                if pf.generators != pf.group_generator_src {
                    return Err(Error::Parse("rational constants are their own generators".into()));
                }
                for g in &pf.group_generators {
                    match g.as_constant() {
                        Some(c) if c.abs() >= 2 => {}
                        _ => return Err(Error::Parse(format!("{g:?} is not an integer constant > 1"))),
                    }
                }
            }
            PfKind::QuotientRing => {
                if pf.generators.len() != 1 {
                    return Err(Error::Parse("quotient rings take exactly one generator".into()));
                }
                let m = pf
                    .modulus
                    .clone()
                    .ok_or_else(|| Error::Parse("quotient ring without modulus".into()))?;
                pf.units = Some(pf.enumerate_units(&m)?);
            }
            PfKind::FreeRational => {
                if pf.modulus.is_some() {
                    return Err(Error::Parse("free rational presentations take no modulus".into()));
                }
            }
        }
        Ok(pf)
    }

    pub fn from_toml_str(src: &str) -> Result<Self> {
        let cfg: PresentationConfig = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_config(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::from_toml_str(&src)
    }

    /// Built-in name, or a path to a TOML presentation.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if BUILTIN_NAMES.contains(&name_or_path) {
            builtin(name_or_path)
        } else if Path::new(name_or_path).exists() {
            Self::load(Path::new(name_or_path))
        } else {
            Err(Error::UnknownName(format!("partial field {name_or_path}")))
        }
    }

    fn enumerate_units(&self, modulus: &Poly) -> Result<QuotientUnits> {
        const LIMIT: usize = 10_000;
        let k = self.group_generators.len();
        let one = Poly::constant(1);
        let gens: Vec<Poly> = self.group_generators.iter().map(|g| g.rem_monic_univariate(modulus)).collect();
        let mut by_value = HashMap::new();
        let mut values = Vec::new();
        let start = GroupElement { sign: 1, exps: vec![0; k] };
        by_value.insert(one.clone(), start.clone());
        values.push((start.clone(), one.clone()));
        let mut queue = VecDeque::from([(start, one)]);
        while let Some((g, v)) = queue.pop_front() {
            let mut next = Vec::with_capacity(k + 1);
            for (i, gen) in gens.iter().enumerate() {
                let mut e = g.clone();
                e.exps[i] += 1;
                next.push((e, v.mul(gen).rem_monic_univariate(modulus)));
            }
            next.push((GroupElement { sign: -g.sign, exps: g.exps.clone() }, v.neg()));
            for (e, val) in next {
                if !by_value.contains_key(&val) {
                    by_value.insert(val.clone(), e.clone());
                    values.push((e.clone(), val.clone()));
                    queue.push_back((e, val));
                    if values.len() > LIMIT {
                        return Err(Error::Parse(format!(
                            "unit group of {} exceeds {LIMIT} elements",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(QuotientUnits { modulus: modulus.clone(), by_value, values })
    }

    pub fn one(&self) -> GroupElement {
        GroupElement { sign: 1, exps: vec![0; self.group_generators.len()] }
    }

    fn quotient_value(&self, g: &GroupElement) -> Poly {
        let u = self.units.as_ref().expect("quotient ring");
        let mut v = Poly::constant(g.sign as i128);
        for (i, &e) in g.exps.iter().enumerate() {
            assert!(e >= 0, "quotient ring elements are kept with nonnegative exponents");
            for _ in 0..e {
                v = v.mul(&self.group_generators[i]).rem_monic_univariate(&u.modulus);
            }
        }
        v
    }

    fn quotient_canon(&self, v: &Poly) -> Option<GroupElement> {
        self.units.as_ref().expect("quotient ring").by_value.get(v).cloned()
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        if self.kind == PfKind::QuotientRing {
            let u = self.units.as_ref().unwrap();
            let v = self.quotient_value(a).mul(&self.quotient_value(b)).rem_monic_univariate(&u.modulus);
            return self.quotient_canon(&v).expect("group closed under products");
        }
        GroupElement { sign: a.sign * b.sign, exps: a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect() }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        if self.kind == PfKind::QuotientRing {
            let one = self.one();
            let u = self.units.as_ref().unwrap();
            return u
                .values
                .iter()
                .map(|(g, _)| g)
                .find(|g| self.mul(a, g) == one)
                .cloned()
                .expect("finite groups have inverses");
        }
        GroupElement { sign: a.sign, exps: a.exps.iter().map(|x| -x).collect() }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        if self.kind == PfKind::QuotientRing {
            return self.quotient_canon(&self.quotient_value(a).neg()).expect("-1 lies in the group");
        }
        GroupElement { sign: -a.sign, exps: a.exps.clone() }
    }

    /// Exact `1 - a`: `Ok(None)` when it is zero, `Ok(Some(g))` when it is the
    /// group element `g`, and `Err` when it lies outside the partial field.
    pub fn one_minus(&self, a: &GroupElement) -> std::result::Result<Option<GroupElement>, ()> {
        self.one_minus_cached(a, &mut HashMap::new())
    }

    fn one_minus_cached(
        &self,
        a: &GroupElement,
        products: &mut HashMap<Vec<i32>, Poly>,
    ) -> std::result::Result<Option<GroupElement>, ()> {
        if self.kind == PfKind::QuotientRing {
            let v = Poly::constant(1).sub(&self.quotient_value(a));
            if v.is_zero() {
                return Ok(None);
            }
            return self.quotient_canon(&v).map(Some).ok_or(());
        }
        let pos: Vec<i32> = a.exps.iter().map(|&e| e.max(0)).collect();
        let neg: Vec<i32> = a.exps.iter().map(|&e| (-e).max(0)).collect();
        let mut product = |exps: &Vec<i32>| {
            products
                .entry(exps.clone())
                .or_insert_with(|| self.expand(&GroupElement { sign: 1, exps: exps.clone() }))
                .clone()
        };
        let num = product(&pos);
        let den = product(&neg);
        // 1 - s*N/D = (D - s*N)/D
        let p = den.sub(&num.scale(a.sign as i128));
        if p.is_zero() {
            return Ok(None);
        }
        let (unit, f) = self.factor(&p).ok_or(())?;
        Ok(Some(GroupElement { sign: unit, exps: f.iter().zip(&neg).map(|(x, d)| x - d).collect() }))
    }

    /// Writes `p = unit * prod g_i^{f_i}` with `unit = ±1`, if possible.
    fn factor(&self, p: &Poly) -> Option<(i8, Vec<i32>)> {
        let mut rest = p.clone();
        let mut f = vec![0i32; self.group_generators.len()];
        for (i, g) in self.group_generators.iter().enumerate() {
            while let Some(q) = rest.div_exact(g) {
                rest = q;
                f[i] += 1;
            }
        }
        match rest.as_constant() {
            Some(1) => Some((1, f)),
            Some(-1) => Some((-1, f)),
            _ => None,
        }
    }

    /// Exact evaluation of a group element as a polynomial, for tests and
    /// display. Only valid when every exponent is nonnegative.
    pub fn expand(&self, g: &GroupElement) -> Poly {
        if self.kind == PfKind::QuotientRing {
            return self.quotient_value(g);
        }
        let mut v = Poly::constant(g.sign as i128);
        for (i, &e) in g.exps.iter().enumerate() {
            assert!(e >= 0);
            v = v.mul(&self.group_generators[i].pow(e as u32));
        }
        v
    }

    /// Brute-force search for `p = unit * prod g_i^{f_i}` by expanding every
    /// exponent vector compatible with the total degree. Independent of the
    /// division-based factorization; meant for cross-checking.
    pub fn factor_by_expansion(&self, p: &Poly) -> Option<(i8, Vec<i32>)> {
        let degs: Vec<u32> = self.group_generators.iter().map(|g| g.degree()).collect();
        let total = p.degree();
        let k = degs.len();
        let mut f = vec![0i32; k];
        fn rec(
            pf: &PartialFieldPresentation,
            p: &Poly,
            degs: &[u32],
            left: u32,
            i: usize,
            f: &mut Vec<i32>,
        ) -> Option<(i8, Vec<i32>)> {
            if i == degs.len() {
                if left != 0 {
                    return None;
                }
                let e = pf.expand(&GroupElement { sign: 1, exps: f.clone() });
                if &e == p {
                    return Some((1, f.clone()));
                }
                if e.neg() == *p {
                    return Some((-1, f.clone()));
                }
                return None;
            }
            let max = if degs[i] == 0 { 0 } else { left / degs[i] };
            for e in 0..=max {
                f[i] = e as i32;
                if let Some(r) = rec(pf, p, degs, left - e * degs[i], i + 1, f) {
                    return Some(r);
                }
            }
            f[i] = 0;
            None
        }
        if degs.contains(&0) {
            // Constant generators: bound exponents by the magnitude of p.
            let c = p.as_constant()?;
            let mut rest = c;
            let mut f = vec![0i32; k];
            for (i, g) in self.group_generators.iter().enumerate() {
                let g = g.as_constant()?;
                while rest % g == 0 {
                    rest /= g;
                    f[i] += 1;
                }
            }
            return match rest {
                1 => Some((1, f)),
                -1 => Some((-1, f)),
                _ => None,
            };
        }
        rec(self, p, &degs, total, 0, &mut f)
    }

    /// Lists group elements whose exponents lie in `[-bound, bound]`
    /// (or the whole finite group for quotient rings).
    fn candidates(&self, bound: i32) -> Vec<GroupElement> {
        if let Some(u) = &self.units {
            return u.values.iter().map(|(g, _)| g.clone()).collect();
        }
        let k = self.group_generators.len();
        let mut out = Vec::new();
        if bound < 0 {
            return out;
        }
        let mut exps = vec![-bound; k];
        loop {
            for sign in [1i8, -1] {
                out.push(GroupElement { sign, exps: exps.clone() });
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if exps[i] < bound {
                    exps[i] += 1;
                    for e in exps.iter_mut().skip(i + 1) {
                        *e = -bound;
                    }
                    break;
                }
            }
        }
    }

    /// The fundamental elements with exponents bounded by `bound`, closed
    /// under taking associates.
    pub fn fundamentals(&self, bound: i32) -> Fundamentals {
        let mut elements = vec![Fundamental::Zero, Fundamental::One];
        let one = self.one();
        let mut products = HashMap::new();
        for g in self.candidates(bound) {
            if g == one {
                continue;
            }
            if self.one_minus_cached(&g, &mut products).is_ok() {
                elements.push(Fundamental::Unit(g));
            }
        }
        let mut index: HashMap<Fundamental, usize> =
            elements.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut i = 2;
        while i < elements.len() {
            let Fundamental::Unit(g) = elements[i].clone() else { unreachable!() };
            for a in self.associates(&g).expect("fundamental") {
                if !index.contains_key(&a) {
                    log::debug!("{}: associate {} lies outside the exponent bound", self.name, self.render(&a));
                    index.insert(a.clone(), elements.len());
                    elements.push(a);
                }
            }
            i += 1;
        }
        let complement = elements
            .iter()
            .map(|f| {
                let c = match f {
                    Fundamental::Zero => Fundamental::One,
                    Fundamental::One => Fundamental::Zero,
                    Fundamental::Unit(g) => match self.one_minus(g).expect("fundamental") {
                        None => Fundamental::Zero,
                        Some(h) if h == one => Fundamental::One,
                        Some(h) => Fundamental::Unit(h),
                    },
                };
                index[&c]
            })
            .collect();
        Fundamentals { elements, complement, index }
    }

    /// `Asc(p)` for a group element `p`.
    pub fn associates(&self, p: &GroupElement) -> Result<Vec<Fundamental>> {
        let one = self.one();
        if *p == one {
            return Ok(vec![Fundamental::Zero, Fundamental::One]);
        }
        let wrap = |g: GroupElement| if g == one { Fundamental::One } else { Fundamental::Unit(g) };
        let not_fund = || Error::NotFundamental(self.render_group(p));
        let q = self.one_minus(p).map_err(|_| not_fund())?.ok_or_else(not_fund)?;
        let pi = self.inv(p);
        let qi = self.inv(&q);
        let list = [
            p.clone(),
            q.clone(),
            pi.clone(),
            qi.clone(),
            self.neg(&self.mul(p, &qi)),
            self.neg(&self.mul(&q, &pi)),
        ];
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in list {
            let f = wrap(g);
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
        Ok(out)
    }

    /// `phi(g)` given the images of the group generators.
    pub fn eval_group(&self, field: &FieldSpec, gen_values: &[Elem], g: &GroupElement) -> Elem {
        let mut v = if g.sign < 0 { field.neg(1) } else { 1 };
        for (&x, &e) in gen_values.iter().zip(&g.exps) {
            if e > 0 {
                v = field.mul(v, field.pow(x, e as u64));
            } else if e < 0 {
                v = field.mul(v, field.pow(field.inv(x), (-e) as u64));
            }
        }
        v
    }

    pub fn eval_fundamental(&self, field: &FieldSpec, gen_values: &[Elem], f: &Fundamental) -> Elem {
        match f {
            Fundamental::Zero => 0,
            Fundamental::One => 1,
            Fundamental::Unit(g) => self.eval_group(field, gen_values, g),
        }
    }

    /// Values of the group generators under the given generator images.
    pub fn group_generator_values(&self, field: &FieldSpec, images: &[Elem]) -> Vec<Elem> {
        self.group_generators.iter().map(|g| g.eval(field, images)).collect()
    }

    pub fn render(&self, f: &Fundamental) -> String {
        match f {
            Fundamental::Zero => "0".into(),
            Fundamental::One => "1".into(),
            Fundamental::Unit(g) => self.render_group(g),
        }
    }

    pub fn render_group(&self, g: &GroupElement) -> String {
        match self.kind {
            PfKind::QuotientRing => self.quotient_value(g).render(&self.generators),
            PfKind::RationalConstants => {
                let mut num: i128 = g.sign as i128;
                let mut den: i128 = 1;
                for (gen, &e) in self.group_generators.iter().zip(&g.exps) {
                    let c = gen.as_constant().unwrap();
                    if e > 0 {
                        num *= c.pow(e as u32);
                    } else {
                        den *= c.pow((-e) as u32);
                    }
                }
                if den == 1 {
                    num.to_string()
                } else {
                    format!("{num}/{den}")
                }
            }
            PfKind::FreeRational => {
                let mut parts = Vec::new();
                for (src, &e) in self.group_generator_src.iter().zip(&g.exps) {
                    if e == 0 {
                        continue;
                    }
                    let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
                    let base = if compact.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                        compact
                    } else {
                        format!("({compact})")
                    };
                    parts.push(if e == 1 { base } else { format!("{base}^{e}") });
                }
                let body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
                if g.sign < 0 {
                    format!("-{body}")
                } else {
                    body
                }
            }
        }
    }
}

/// Field-level associates of `p`.
pub fn field_associates(field: &FieldSpec, p: Elem) -> Vec<Elem> {
    if p == 0 || p == 1 {
        return vec![0, 1];
    }
    let q = field.sub(1, p);
    let list = [
        p,
        q,
        field.inv(p),
        field.inv(q),
        field.div(p, field.sub(p, 1)),
        field.div(field.sub(p, 1), p),
    ];
    let mut out: Vec<Elem> = Vec::new();
    for x in list {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}
