//! Finite fields GF(p^m) held as fully materialized lookup tables.
//!
//! An element is labelled by the integer whose base-p digits are its
//! polynomial coefficients: coefficients `(w_0, .., w_{m-1})`, with `w_i`
//! multiplying `x^i`, give the index `sum w_i p^i`. Addition is digitwise
//! mod p, so index `q-1-j` is always the complement of `j` against the
//! all-`(p-1)` element.

use std::fmt;

use thiserror::Error;

/// Largest field order this module will materialize.
pub const MAX_ORDER: usize = 512;

/// Field orders up to this bound are axiom-checked when built.
const SELF_CHECK_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge { p: u32, m: u32 },
    #[error("internal error: no monic irreducible polynomial of degree {m} over Z_{p}")]
    NoModulus { p: u32, m: u32 },
    #[error("internal error: field tables for GF({q}) violate the {axiom} axiom")]
    AxiomViolation { q: usize, axiom: &'static str },
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("element index {index} does not belong to GF({q})")]
    ForeignElement { index: usize, q: usize },
}

/// An element of some GF(q), identified by its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub const fn new(index: u16) -> Self {
        FieldElem(index)
    }

    pub const fn index(self) -> u16 {
        self.0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ξ{}", self.0)
    }
}

/// Characteristic, degree and defining polynomial of a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// `m + 1` coefficients, constant term first; the last one is always 1.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.m)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (deg, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && deg > 0 { String::new() } else { c.to_string() };
            terms.push(match deg {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{deg}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// One arithmetic request against a [`FieldTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add(FieldElem, FieldElem),
    Sub(FieldElem, FieldElem),
    Mul(FieldElem, FieldElem),
    Neg(FieldElem),
    Inv(FieldElem),
    Pow(FieldElem, u64),
}

/// GF(p^m) with precomputed addition, multiplication and inverse tables.
///
/// Immutable once built; share it behind an `Arc`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTable {
    spec: FieldSpec,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    // inv[0] is unused
    inv: Vec<u16>,
    primitive: u16,
}

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTable")
            .field("q", &self.q)
            .field("modulus", &self.spec.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl fmt::Display for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) = Z_{}[x] / ({})", self.q, self.spec.p, self.spec)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, m)` with `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Builds GF(p^m) modulo the lexicographically smallest monic irreducible
/// polynomial of degree m, comparing coefficients constant term first.
pub fn build_field(p: u32, m: u32) -> Result<FieldTable, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if m == 0 {
        return Err(GfError::ZeroDegree);
    }
    let q = (p as usize)
        .checked_pow(m)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or(GfError::TooLarge { p, m })?;
    let modulus = smallest_irreducible(p, m).ok_or(GfError::NoModulus { p, m })?;
    let spec = FieldSpec { p, m, modulus };
    let table = FieldTable::from_spec(spec, q);
    if q <= SELF_CHECK_ORDER {
        table.check_axioms()?;
    }
    Ok(table)
}

impl FieldTable {
    /// Builds GF(q) for a prime power `q`.
    pub fn for_order(q: u32) -> Result<FieldTable, GfError> {
        let (p, m) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        build_field(p, m)
    }

    fn from_spec(spec: FieldSpec, q: usize) -> FieldTable {
        let p = spec.p as usize;
        let m = spec.m as usize;
        let digits: Vec<Vec<u32>> = (0..q).map(|j| to_digits(j, p, m)).collect();

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let sum: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(x, y)| (x + y) % spec.p)
                    .collect();
                add[a * q + b] = from_digits(&sum, p) as u16;
                let prod = poly_mul_mod(&digits[a], &digits[b], &spec.modulus, spec.p);
                mul[a * q + b] = from_digits(&prod, p) as u16;
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u16;
            }
        }

        let mut table = FieldTable { spec, q, add, mul, neg, inv, primitive: 1 };
        table.primitive = (1..q)
            .find(|&a| table.multiplicative_order(FieldElem(a as u16)) == q - 1)
            .expect("the multiplicative group of a finite field is cyclic") as u16;
        table
    }

    fn check_axioms(&self) -> Result<(), GfError> {
        let q = self.q;
        let fail = |axiom| Err(GfError::AxiomViolation { q, axiom });
        let el = |i: usize| FieldElem(i as u16);
        for a in (0..q).map(el) {
            if self.add(a, FieldElem::ZERO) != a || self.mul(a, FieldElem::ONE) != a {
                return fail("identity");
            }
            if self.add(a, self.neg(a)) != FieldElem::ZERO {
                return fail("additive inverse");
            }
            if a != FieldElem::ZERO && self.mul(a, self.inv(a).unwrap()) != FieldElem::ONE {
                return fail("multiplicative inverse");
            }
            for b in (0..q).map(el) {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail("commutativity");
                }
                for c in (0..q).map(el) {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return fail("associativity");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail("distributivity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.m
    }

    /// The element with index `index`, if it belongs to this field.
    pub fn elem(&self, index: usize) -> Result<FieldElem, GfError> {
        if index < self.q {
            Ok(FieldElem(index as u16))
        } else {
            Err(GfError::ForeignElement { index, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u16).map(FieldElem)
    }

    /// `ξ_{q-1}`, the element whose digits are all `p - 1`.
    pub fn top(&self) -> FieldElem {
        FieldElem((self.q - 1) as u16)
    }

    pub fn minus_one(&self) -> FieldElem {
        self.neg(FieldElem::ONE)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.0 as usize * self.q + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[a.0 as usize * self.q + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (a.0 != 0).then(|| FieldElem(self.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: FieldElem, mut exp: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Raw index-level addition, for hot loops over `u16` cell storage.
    #[inline]
    pub(crate) fn add_raw(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    /// Checked arithmetic: operands are validated against this field.
    pub fn eval(&self, op: FieldOp) -> Result<FieldElem, GfError> {
        let own = |a: FieldElem| self.elem(a.0 as usize);
        Ok(match op {
            FieldOp::Add(a, b) => self.add(own(a)?, own(b)?),
            FieldOp::Sub(a, b) => self.sub(own(a)?, own(b)?),
            FieldOp::Mul(a, b) => self.mul(own(a)?, own(b)?),
            FieldOp::Neg(a) => self.neg(own(a)?),
            FieldOp::Inv(a) => self.inv(own(a)?).ok_or(GfError::InverseOfZero)?,
            FieldOp::Pow(a, e) => self.pow(own(a)?, e),
        })
    }

    /// Order of `a` in the multiplicative group; 0 for the zero element.
    pub fn multiplicative_order(&self, a: FieldElem) -> usize {
        if a == FieldElem::ZERO {
            return 0;
        }
        let mut x = a;
        let mut k = 1;
        while x != FieldElem::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        FieldElem(self.primitive)
    }

    /// Coefficient vector `(w_0, .., w_{m-1})` of an element.
    pub fn digits(&self, a: FieldElem) -> Vec<u32> {
        to_digits(a.0 as usize, self.spec.p as usize, self.spec.m as usize)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElem, GfError> {
        let p = self.spec.p;
        if digits.len() != self.spec.m as usize || digits.iter().any(|&d| d >= p) {
            return Err(GfError::ForeignElement {
                index: from_digits(digits, p as usize),
                q: self.q,
            });
        }
        Ok(FieldElem(from_digits(digits, p as usize) as u16))
    }
}

fn to_digits(mut j: usize, p: usize, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push((j % p) as u32);
        j /= p;
    }
    out
}

fn from_digits(digits: &[u32], p: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d as usize)
}

fn trim(mut poly: Vec<u32>) -> Vec<u32> {
    while poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// Remainder of `a` modulo the monic polynomial `modulus`, coefficients mod p.
fn poly_rem(a: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut r = trim(a.to_vec());
    while r.len() > deg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - deg;
        for (i, &c) in modulus.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(modulus.len() - 1, 0);
    r
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    // a reducible polynomial has a monic factor of degree at most m / 2
    for d in 1..=m / 2 {
        let count = (p as usize).pow(d as u32);
        for low in 0..count {
            let mut divisor = to_digits(low, p as usize, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible of degree m whose coefficient list, read constant term
/// first, is lexicographically smallest.
fn smallest_irreducible(p: u32, m: u32) -> Option<Vec<u32>> {
    let m = m as usize;
    let count = (p as usize).pow(m as u32);
    (0..count).find_map(|code| {
        // most significant base-p digit of `code` is the constant term
        let mut poly: Vec<u32> = to_digits(code, p as usize, m).into_iter().rev().collect();
        poly.push(1);
        is_irreducible(&poly, p).then_some(poly)
    })
}
