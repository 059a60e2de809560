//! Exact arithmetic in GF(p^e).
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! code, least significant first, are the coordinates in the power basis
//! `1, x, ..., x^(e-1)`. Code 0 is zero and code 1 is one in every field.
//!
//! Extension fields use the first irreducible monic polynomial with nonzero
//! constant term when polynomials are ordered by the integer formed from
//! their non-leading coefficients, so `make_field(2, 3)` always reduces
//! modulo `x^3 + x + 1`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a [`FiniteField`], stored by its integer code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field GF(p^e).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpec", into = "FieldSpec")]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    /// Ascending coefficients of the monic modulus, length `e + 1`. Only
    /// present for proper extensions.
    modulus: Option<Arc<[u32]>>,
}

/// JSON shape of a field: `{"p": 2, "e": 3, "irreducible": [1, 1, 0, 1]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<Vec<u32>>,
}

impl TryFrom<FieldSpec> for FiniteField {
    type Error = Error;

    fn try_from(spec: FieldSpec) -> Result<Self> {
        match spec.irreducible {
            Some(poly) if spec.e > 1 => FiniteField::with_modulus(spec.p, spec.e, &poly),
            Some(poly) => {
                // A degree-1 modulus carries no information; accept only the
                // trivial x + c shape so that files stay unambiguous.
                if poly.len() != 2 || poly[1] != 1 {
                    return Err(Error::InvalidModulus(
                        "prime fields take no irreducible polynomial".into(),
                    ));
                }
                make_field(spec.p, spec.e)
            }
            None => make_field(spec.p, spec.e),
        }
    }
}

impl From<FiniteField> for FieldSpec {
    fn from(f: FiniteField) -> Self {
        FieldSpec {
            p: f.p as u64,
            e: f.e,
            irreducible: f.modulus.as_ref().map(|m| m.to_vec()),
        }
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.modulus {
            None => write!(f, "GF({})", self.p),
            Some(m) => write!(f, "GF({}^{} mod {:?})", self.p, self.e, m),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds GF(p^e) with the canonical modulus.
pub fn make_field(p: u64, e: u32) -> Result<FiniteField> {
    let q = check_size(p, e)?;
    let p = p as u32;
    if e == 1 {
        return Ok(FiniteField { p, e, q, modulus: None });
    }
    let modulus = canonical_irreducible(p, e);
    Ok(FiniteField {
        p,
        e,
        q,
        modulus: Some(modulus.into()),
    })
}

fn check_size(p: u64, e: u32) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::ZeroExtensionDegree);
    }
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= u32::MAX as u64)
        .ok_or(Error::FieldTooLarge { p, e })?;
    Ok(q as u32)
}

/// Enumerates monic degree-`e` polynomials with nonzero constant term in
/// ascending order of their non-leading coefficients read as a base-`p`
/// integer and returns the first irreducible one.
fn canonical_irreducible(p: u32, e: u32) -> Vec<u32> {
    let tail: u64 = (p as u64).pow(e);
    for index in 1..tail {
        if index % p as u64 == 0 {
            continue;
        }
        let mut poly = to_digits(index, p, e as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn to_digits(mut value: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((value % p as u64) as u32);
        value /= p as u64;
    }
    out
}

/// Irreducibility over GF(p) of a monic polynomial given by ascending
/// coefficients. For degree <= 3 this is the root test; above that it is
/// trial division by every monic polynomial of degree up to half.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    if deg <= 3 {
        return (0..p).all(|x| eval_mod(poly, x, p) != 0);
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for index in 0..count {
            let mut divisor = to_digits(index, p, d);
            divisor.push(1);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn eval_mod(poly: &[u32], x: u32, p: u32) -> u32 {
    let p = p as u64;
    poly.iter()
        .rev()
        .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
}

fn poly_rem_is_zero(poly: &[u32], monic: &[u32], p: u32) -> bool {
    let p = p as u64;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    let d = monic.len() - 1;
    for top in (d..rem.len()).rev() {
        let lead = rem[top];
        if lead == 0 {
            continue;
        }
        for (i, &c) in monic.iter().enumerate() {
            let idx = top - d + i;
            rem[idx] = (rem[idx] + (p - lead) * c as u64) % p;
        }
    }
    rem[..d].iter().all(|&c| c == 0)
}

const MAX_DIGITS: usize = 32;

impl FiniteField {
    /// Builds GF(p^e) reducing modulo a caller-supplied polynomial, which
    /// must be monic of degree `e`, have a nonzero constant term and be
    /// irreducible over GF(p).
    pub fn with_modulus(p: u64, e: u32, modulus: &[u32]) -> Result<FiniteField> {
        let q = check_size(p, e)?;
        let p = p as u32;
        if e == 1 {
            return make_field(p as u64, 1);
        }
        if modulus.len() != e as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if modulus[e as usize] != 1 {
            return Err(Error::InvalidModulus("polynomial is not monic".into()));
        }
        if modulus[0] == 0 {
            return Err(Error::InvalidModulus("constant term is zero".into()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidModulus("polynomial is reducible".into()));
        }
        Ok(FiniteField {
            p,
            e,
            q,
            modulus: Some(modulus.into()),
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Ascending coefficients of the modulus for proper extensions.
    pub fn irreducible(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.modulus.is_none()
    }

    /// Validates a code and wraps it.
    pub fn element(&self, code: u64) -> Result<FieldElement> {
        if code < self.q as u64 {
            Ok(FieldElement(code as u32))
        } else {
            Err(Error::ElementOutOfRange { code, q: self.q as u64 })
        }
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.q
    }

    /// All `q` elements in ascending code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// Nonzero elements in ascending code order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    fn digits(&self, a: FieldElement) -> [u32; MAX_DIGITS] {
        let mut out = [0u32; MAX_DIGITS];
        let mut v = a.0;
        for d in out.iter_mut().take(self.e as usize) {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn digits_to_element(&self, digits: &[u32]) -> FieldElement {
        let code = digits[..self.e as usize]
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d);
        FieldElement(code)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if self.e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElement((s % self.p as u64) as u32);
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut sum = [0u32; MAX_DIGITS];
        for i in 0..self.e as usize {
            sum[i] = (da[i] + db[i]) % self.p;
        }
        self.digits_to_element(&sum)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a));
        if a.0 == 0 {
            return a;
        }
        if self.e == 1 {
            return FieldElement(self.p - a.0);
        }
        if self.p == 2 {
            return a;
        }
        let mut d = self.digits(a);
        for x in d.iter_mut().take(self.e as usize) {
            *x = (self.p - *x) % self.p;
        }
        self.digits_to_element(&d)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let Some(modulus) = &self.modulus else {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        };
        let e = self.e as usize;
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..e {
            if da[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for top in (e..2 * e - 1).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            // x^e = -(m_0 + ... + m_{e-1} x^{e-1})
            for i in 0..e {
                let idx = top - e + i;
                prod[idx] = (prod[idx] + (p - lead) * modulus[i] as u64) % p;
            }
            prod[top] = 0;
        }
        let mut out = [0u32; MAX_DIGITS];
        for i in 0..e {
            out[i] = prod[i] as u32;
        }
        self.digits_to_element(&out)
    }

    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }
}
