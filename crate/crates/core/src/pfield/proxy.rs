//! Finite-field proxies: verification of a candidate homomorphism and the
//! search for the smallest prime that admits one.

use std::fmt;

use thiserror::Error;

use super::{Fundamental, Fundamentals, GroupElement, PartialFieldPresentation, PfKind};
use crate::error::{Error as CrateError, Result};
use crate::field::{primes_between, Elem, FieldSpec};

/// A finite field with generator images and the confinement set `F`.
#[derive(Clone)]
pub struct Proxy {
    pub pf_name: String,
    pub field: FieldSpec,
    pub image_keys: Vec<String>,
    pub images: Vec<Elem>,
    /// Images of the fundamentals other than 0 and 1, ascending.
    pub f: Vec<Elem>,
    allowed: Vec<bool>,
}

impl fmt::Debug for Proxy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.stanza())
    }
}

impl PartialEq for Proxy {
    fn eq(&self, other: &Self) -> bool {
        self.pf_name == other.pf_name
            && self.field == other.field
            && self.image_keys == other.image_keys
            && self.images == other.images
            && self.f == other.f
    }
}

impl Proxy {
    /// A proxy given directly by its confinement set.
    pub fn from_set(
        pf_name: &str,
        field: FieldSpec,
        image_keys: Vec<String>,
        images: Vec<Elem>,
        mut f: Vec<Elem>,
    ) -> Result<Proxy> {
        f.sort_unstable();
        f.dedup();
        if f.iter().any(|&x| x < 2 || x >= field.order()) {
            return Err(CrateError::Precondition(format!("confinement set {f:?} must avoid 0 and 1")));
        }
        let mut allowed = vec![false; field.order() as usize];
        allowed[0] = true;
        allowed[1] = true;
        for &x in &f {
            allowed[x as usize] = true;
        }
        Ok(Proxy { pf_name: pf_name.to_string(), field, image_keys, images, f, allowed })
    }

    /// True iff `x` lies in `F ∪ {0, 1}`.
    #[inline]
    pub fn allowed(&self, x: Elem) -> bool {
        self.allowed[x as usize]
    }

    /// The membership table of `F ∪ {0, 1}`, indexed by field element.
    pub fn allowed_table(&self) -> &[bool] {
        &self.allowed
    }

    pub fn stanza(&self) -> String {
        let images: Vec<String> =
            self.image_keys.iter().zip(&self.images).map(|(k, v)| format!("{k}={v}")).collect();
        let f: Vec<String> = self.f.iter().map(|x| x.to_string()).collect();
        format!("pf={} q={} images={} F={}", self.pf_name, self.field.order(), images.join(","), f.join(","))
    }

    pub fn parse_stanza(line: &str) -> Result<Proxy> {
        let bad = |what: &str| CrateError::Parse(format!("proxy stanza {line:?}: {what}"));
        let mut name = None;
        let mut q = None;
        let mut keys = Vec::new();
        let mut images = Vec::new();
        let mut f = Vec::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k {
                "pf" => name = Some(v.to_string()),
                "q" => q = Some(v.parse::<u32>().map_err(|_| bad("bad q"))?),
                "images" => {
                    for part in v.split(',').filter(|s| !s.is_empty()) {
                        let (g, x) = part.rsplit_once('=').ok_or_else(|| bad("bad image"))?;
                        keys.push(g.to_string());
                        images.push(x.parse::<u32>().map_err(|_| bad("bad image value"))?);
                    }
                }
                "F" => {
                    for part in v.split(',').filter(|s| !s.is_empty()) {
                        f.push(part.parse::<u32>().map_err(|_| bad("bad F entry"))?);
                    }
                }
                _ => return Err(bad("unknown key")),
            }
        }
        let field = FieldSpec::new(q.ok_or_else(|| bad("missing q"))?)?;
        Proxy::from_set(&name.ok_or_else(|| bad("missing pf"))?, field, keys, images, f)
    }
}

/// The first condition a candidate proxy violates, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProxyViolation {
    #[error("no ring homomorphism: {0}")]
    NoHomomorphism(String),
    #[error("not injective: {p} and {q} both map to {image}")]
    NotInjective { p: String, q: String, image: Elem },
    #[error("sum: phi({p}) + phi({q}) = 1 but {p} + {q} != 1 (images {images:?})")]
    Sum { p: String, q: String, images: (Elem, Elem) },
    #[error("product: phi({p}) phi({q}) phi({r}) = 1 but the product is not 1 (images {images:?})")]
    Product { p: String, q: String, r: String, images: (Elem, Elem, Elem) },
    #[error("1 = -1 in the field but not in the partial field")]
    Characteristic,
}

enum Raw {
    NoHom(&'static str),
    Injective(usize, usize, Elem),
    Sum(usize, usize),
    Product(usize, usize, usize),
    Characteristic,
}

fn as_group(pf: &PartialFieldPresentation, f: &Fundamental) -> Option<GroupElement> {
    match f {
        Fundamental::Zero => None,
        Fundamental::One => Some(pf.one()),
        Fundamental::Unit(g) => Some(g.clone()),
    }
}

fn homomorphism_ok(pf: &PartialFieldPresentation, field: &FieldSpec, images: &[Elem]) -> Option<&'static str> {
    if images.len() != pf.generators.len() {
        return Some("wrong number of images");
    }
    if images.iter().any(|&x| x >= field.order()) {
        return Some("image outside the field");
    }
    match pf.kind {
        PfKind::RationalConstants => {
            for (g, &x) in pf.group_generators.iter().zip(images) {
                let c = g.as_constant().unwrap();
                if field.from_int((c % field.characteristic() as i128) as i64) != x {
                    return Some("integer constants have forced images");
                }
            }
        }
        PfKind::QuotientRing => {
            if pf.modulus.as_ref().unwrap().eval(field, images) != 0 {
                return Some("image is not a root of the modulus");
            }
        }
        PfKind::FreeRational => {}
    }
    if pf.group_generator_values(field, images).contains(&0) {
        return Some("a group generator maps to 0");
    }
    None
}

/// Runs the checks with index witnesses; on success returns the images of
/// all fundamentals.
fn check(
    pf: &PartialFieldPresentation,
    fund: &Fundamentals,
    field: &FieldSpec,
    images: &[Elem],
    by_value: &mut Vec<u32>,
) -> std::result::Result<Vec<Elem>, Raw> {
    if let Some(why) = homomorphism_ok(pf, field, images) {
        return Err(Raw::NoHom(why));
    }
    let gv = pf.group_generator_values(field, images);
    let values: Vec<Elem> = fund.elements.iter().map(|f| pf.eval_fundamental(field, &gv, f)).collect();

    // (a) injectivity
    const NONE: u32 = u32::MAX;
    by_value.clear();
    by_value.resize(field.order() as usize, NONE);
    for (i, &v) in values.iter().enumerate() {
        let slot = &mut by_value[v as usize];
        if *slot != NONE {
            return Err(Raw::Injective(*slot as usize, i, v));
        }
        *slot = i as u32;
    }

    // (b) phi(p) + phi(q) = 1 only for q = 1 - p
    for (i, &v) in values.iter().enumerate() {
        let j = by_value[field.sub(1, v) as usize];
        if j != NONE && j as usize != fund.complement[i] {
            return Err(Raw::Sum(i, j as usize));
        }
    }

    // (c) phi(p) phi(q) phi(r) = 1 only when pqr = 1, in order of image
    let mut order: Vec<usize> = (0..values.len()).filter(|&i| values[i] != 0).collect();
    order.sort_by_key(|&i| values[i]);
    let one = pf.one();
    for &i in &order {
        let gi = as_group(pf, &fund.elements[i]).unwrap();
        for &j in &order {
            let target = field.inv(field.mul(values[i], values[j]));
            let k = by_value[target as usize];
            if k == NONE {
                continue;
            }
            let k = k as usize;
            let gj = as_group(pf, &fund.elements[j]).unwrap();
            let gk = as_group(pf, &fund.elements[k]).unwrap();
            if pf.mul(&pf.mul(&gi, &gj), &gk) != one {
                return Err(Raw::Product(i, j, k));
            }
        }
    }

    // (d)
    if field.characteristic() == 2 && pf.minus_one_distinct {
        return Err(Raw::Characteristic);
    }
    Ok(values)
}

fn build(pf: &PartialFieldPresentation, field: &FieldSpec, images: &[Elem], values: &[Elem]) -> Proxy {
    let f: Vec<Elem> = values.iter().copied().filter(|&v| v > 1).collect();
    Proxy::from_set(&pf.name, field.clone(), pf.generators.clone(), images.to_vec(), f)
        .expect("fundamental images avoid 0 and 1 after injectivity")
}

/// Checks the proxy conditions for `images` and returns the proxy or the
/// first violation found.
pub fn verify_proxy(
    pf: &PartialFieldPresentation,
    fund: &Fundamentals,
    field: &FieldSpec,
    images: &[Elem],
) -> std::result::Result<Proxy, ProxyViolation> {
    let mut scratch = Vec::new();
    match check(pf, fund, field, images, &mut scratch) {
        Ok(values) => Ok(build(pf, field, images, &values)),
        Err(raw) => {
            let gv = pf.group_generator_values(field, images);
            let r = |i: usize| pf.render(&fund.elements[i]);
            let v = |i: usize| pf.eval_fundamental(field, &gv, &fund.elements[i]);
            Err(match raw {
                Raw::NoHom(why) => ProxyViolation::NoHomomorphism(why.into()),
                Raw::Injective(i, j, image) => ProxyViolation::NotInjective { p: r(i), q: r(j), image },
                Raw::Sum(i, j) => ProxyViolation::Sum { p: r(i), q: r(j), images: (v(i), v(j)) },
                Raw::Product(i, j, k) => {
                    ProxyViolation::Product { p: r(i), q: r(j), r: r(k), images: (v(i), v(j), v(k)) }
                }
                Raw::Characteristic => ProxyViolation::Characteristic,
            })
        }
    }
}

/// Candidate image tuples for one field, in lexicographic order.
fn image_tuples(pf: &PartialFieldPresentation, field: &FieldSpec) -> Vec<Vec<Elem>> {
    match pf.kind {
        PfKind::RationalConstants => {
            let forced = pf
                .group_generators
                .iter()
                .map(|g| field.from_int((g.as_constant().unwrap() % field.characteristic() as i128) as i64))
                .collect();
            vec![forced]
        }
        _ => {
            let k = pf.generators.len();
            let q = field.order();
            let mut out = Vec::new();
            let mut t = vec![1u32; k];
            if q < 2 {
                return out;
            }
            loop {
                out.push(t.clone());
                let mut i = k;
                loop {
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                    if t[i] + 1 < q {
                        t[i] += 1;
                        for x in t.iter_mut().skip(i + 1) {
                            *x = 1;
                        }
                        break;
                    }
                }
            }
        }
    }
}

/// The proxy over the smallest prime `p <= prime_ceiling` admitting one; ties
/// within a prime are broken by the lexicographically first image tuple.
pub fn find_proxy(pf: &PartialFieldPresentation, fund: &Fundamentals, prime_ceiling: u32) -> Result<Proxy> {
    let nontrivial = fund.len() - 2;
    let mut scratch = Vec::new();
    for p in primes_between(2, prime_ceiling.min(crate::field::MAX_PRIME)) {
        if (p as usize) < nontrivial + 2 {
            continue;
        }
        let field = FieldSpec::new(p)?;
        for images in image_tuples(pf, &field) {
            if let Ok(values) = check(pf, fund, &field, &images, &mut scratch) {
                return Ok(build(pf, &field, &images, &values));
            }
        }
        log::trace!("{}: no proxy over GF({p})", pf.name);
    }
    Err(CrateError::ProxyNotFound(prime_ceiling))
}

/// Outcome of trying every image tuple over one field.
#[derive(Clone, Debug)]
pub enum FieldVerdict {
    Proxy(Proxy),
    /// No tuple verifies; `first` is the first tuple tried and its violation.
    Rejected { tuples: usize, first: Option<(Vec<Elem>, ProxyViolation)> },
}

/// The proxy over `field` with the lexicographically first image tuple, or
/// a witness that none exists.
pub fn field_verdict(pf: &PartialFieldPresentation, fund: &Fundamentals, field: &FieldSpec) -> FieldVerdict {
    let tuples = image_tuples(pf, field);
    let mut scratch = Vec::new();
    for images in &tuples {
        if let Ok(values) = check(pf, fund, field, images, &mut scratch) {
            return FieldVerdict::Proxy(build(pf, field, images, &values));
        }
    }
    let first = tuples.first().map(|t| (t.clone(), verify_proxy(pf, fund, field, t).expect_err("rejected above")));
    FieldVerdict::Rejected { tuples: tuples.len(), first }
}
