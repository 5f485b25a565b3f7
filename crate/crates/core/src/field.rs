//! Arithmetic in small finite fields.
//!
//! Elements are plain integers `0..q`. For prime `q` an element is its residue;
//! for `q = 4` the encoding is `0, 1, 2 = x, 3 = x + 1` with reduction
//! `x^2 + x + 1`, which makes addition a bitwise xor.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element under the encoding of its [`FieldSpec`].
pub type Elem = u32;

/// Largest prime order accepted by [`FieldSpec::new`].
pub const MAX_PRIME: u32 = 65521;

const GF4_MUL: [[u32; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const GF4_INV: [u32; 4] = [0, 1, 3, 2];

/// A finite field GF(q) for q prime or q = 4.
#[derive(Clone)]
pub struct FieldSpec {
    q: u32,
    p: u32,
    k: u32,
    inv: Arc<[u32]>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.q)
        } else {
            write!(f, "GF({}; x^2+x+1)", self.q)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in `lo..=hi`, ascending.
pub fn primes_between(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

impl FieldSpec {
    pub fn new(q: u32) -> Result<FieldSpec> {
        if q == 4 {
            return Ok(FieldSpec { q, p: 2, k: 2, inv: Arc::from(&GF4_INV[..]) });
        }
        if is_prime(q) {
            if q > MAX_PRIME {
                return Err(Error::UnsupportedField(format!("prime {q} exceeds {MAX_PRIME}")));
            }
            return Ok(FieldSpec { q, p: q, k: 1, inv: prime_inverses(q) });
        }
        match prime_power(q) {
            Some((p, k)) => Err(Error::UnsupportedField(format!(
                "GF({q}) = GF({p}^{k}): only prime fields and GF(4) are supported"
            ))),
            None => Err(Error::UnsupportedField(format!("{q} is not a prime power"))),
        }
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }
    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }
    /// The reduction polynomial as coefficients (low degree first), for `q = 4`.
    pub fn reduction(&self) -> Option<[u32; 3]> {
        (self.k == 2).then_some([1, 1, 1])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 2 {
            a ^ b
        } else {
            let s = a + b;
            if s >= self.q {
                s - self.q
            } else {
                s
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 2 || a == 0 {
            a
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 2 {
            GF4_MUL[a as usize][b as usize]
        } else {
            ((a as u64 * b as u64) % self.q as u64) as u32
        }
    }

    /// Multiplicative inverse; panics on zero. Use [`FieldSpec::checked_inv`] for
    /// untrusted input.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    pub fn checked_inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 || a >= self.q {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.inv(a))
        }
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn checked_div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.checked_inv(b)?))
    }

    pub fn pow(&self, mut a: Elem, mut e: u64) -> Elem {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Maps a signed integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        let p = self.p as i64;
        let r = v.rem_euclid(p) as u32;
        // In GF(4) the prime subfield is {0, 1}, which is already the encoding.
        r
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        1..self.q
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> u32 {
        assert!(a != 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Applies one of the named operations; the `op` vocabulary is
    /// `add | sub | mul | neg | inv | div`.
    pub fn arith(&self, op: &str, a: Elem, b: Option<Elem>) -> Result<Elem> {
        let check = |x: Elem| {
            if x < self.q {
                Ok(x)
            } else {
                Err(Error::Parse(format!("{x} is not an element of {self}")))
            }
        };
        let a = check(a)?;
        let need_b = || b.ok_or_else(|| Error::Parse(format!("operation {op} needs two operands")));
        match op {
            "add" => Ok(self.add(a, check(need_b()?)?)),
            "sub" => Ok(self.sub(a, check(need_b()?)?)),
            "mul" => Ok(self.mul(a, check(need_b()?)?)),
            "div" => self.checked_div(a, check(need_b()?)?),
            "neg" => Ok(self.neg(a)),
            "inv" => self.checked_inv(a),
            _ => Err(Error::Parse(format!("unknown field operation {op}"))),
        }
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut m = q;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn prime_inverses(p: u32) -> Arc<[u32]> {
    let mut inv = vec![0u32; p as usize];
    if p > 1 {
        inv[1] = 1;
    }
    for i in 2..p as u64 {
        // inv(i) = -(p / i) * inv(p mod i)
        let pm = p as u64;
        inv[i as usize] = ((pm - (pm / i) * inv[(pm % i) as usize] as u64 % pm) % pm) as u32;
    }
    Arc::from(inv)
}
