//! Exact coefficient fields: `Q`, cyclotomic fields `Q(zeta_k)`, prime fields
//! `GF(p)`, and extensions `GF(p^m)`.
//!
//! A [`Field`] is a cheap-to-clone handle; two handles are interchangeable iff
//! they compare equal structurally. Every handle is canonical: cyclotomic
//! fields are presented as `Q[x]/(Phi_k)`, extensions as `GF(p)[x]/(f)` with
//! `f` the lexicographically smallest monic irreducible of the requested
//! degree (coefficient vectors compared constant term first), so the same
//! request always produces the same field and the same element encodings.
//!
//! Elements store their owner handle plus a full-length coefficient vector
//! low-to-high (length = field degree). Operations on elements of different
//! fields error rather than coerce.

pub mod poly;
pub mod roots;

use crate::{arith, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use poly::{Ctx, FpCtx, QCtx};

/// Largest allowed characteristic. Keeps residue products inside a word and
/// exhaustive scans honest.
pub const MAX_PRIME: u64 = 1 << 26;

/// Largest allowed finite-field cardinality for a constructed handle.
pub const MAX_CARDINALITY: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Cyclotomic,
    Prime,
    Extension,
}

#[derive(Debug)]
enum Modulus {
    None,
    Rat(Vec<BigRational>),
    Mod(Vec<u64>),
}

#[derive(Debug)]
struct Repr {
    kind: FieldKind,
    /// Characteristic; 0 in characteristic zero.
    p: u64,
    /// For cyclotomic fields, the order of the distinguished root of unity.
    zeta_order: u64,
    /// Extension degree over `Q` or `GF(p)`.
    degree: usize,
    modulus: Modulus,
}

#[derive(Clone)]
pub struct Field(Arc<Repr>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind == other.0.kind
            && self.0.p == other.0.p
            && self.0.zeta_order == other.0.zeta_order
            && self.0.degree == other.0.degree
            && match (&self.0.modulus, &other.0.modulus) {
                (Modulus::None, Modulus::None) => true,
                (Modulus::Rat(a), Modulus::Rat(b)) => a == b,
                (Modulus::Mod(a), Modulus::Mod(b)) => a == b,
                _ => false,
            }
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.name())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Repr {
            kind: FieldKind::Rationals,
            p: 0,
            zeta_order: 0,
            degree: 1,
            modulus: Modulus::None,
        }))
    }

    /// `Q(zeta_k)` presented as `Q[x]/(Phi_k)`. Degenerate orders collapse:
    /// `k <= 2` already lies in `Q`, so the rationals are returned.
    pub fn cyclotomic(k: u64) -> Result<Field> {
        if k == 0 {
            return Err(Error::Invalid("cyclotomic order must be positive".into()));
        }
        if k <= 2 {
            return Ok(Field::rationals());
        }
        if k > 300 {
            return Err(Error::Invalid(format!(
                "cyclotomic order {k} beyond supported range (max 300)"
            )));
        }
        let phi = poly::cyclotomic_polynomial(k);
        let degree = phi.len() - 1;
        Ok(Field(Arc::new(Repr {
            kind: FieldKind::Cyclotomic,
            p: 0,
            zeta_order: k,
            degree,
            modulus: Modulus::Rat(phi),
        })))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_PRIME {
            return Err(Error::Invalid(format!(
                "characteristic {p} exceeds supported bound {MAX_PRIME}"
            )));
        }
        Ok(Field(Arc::new(Repr {
            kind: FieldKind::Prime,
            p,
            zeta_order: 0,
            degree: 1,
            modulus: Modulus::None,
        })))
    }

    /// `GF(p^m)` with the canonical modulus: the lexicographically smallest
    /// monic irreducible of degree `m` (coefficient vectors compared constant
    /// term first). `m = 1` collapses to the prime field.
    pub fn extension(p: u64, m: usize) -> Result<Field> {
        if m == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        if m == 1 {
            return Field::prime(p);
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut card: u64 = 1;
        for _ in 0..m {
            card = card
                .checked_mul(p)
                .filter(|&c| c <= MAX_CARDINALITY)
                .ok_or_else(|| {
                    Error::Invalid(format!("cardinality {p}^{m} exceeds supported bound"))
                })?;
        }
        let modulus = smallest_irreducible(p, m);
        Ok(Field(Arc::new(Repr {
            kind: FieldKind::Extension,
            p,
            zeta_order: 0,
            degree: m,
            modulus: Modulus::Mod(modulus),
        })))
    }

    /// `GF(p)[x]/(f)` for an explicitly supplied modulus, normalized monic.
    pub fn extension_with_modulus(p: u64, modulus: Vec<i64>) -> Result<Field> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_PRIME {
            return Err(Error::Invalid(format!(
                "characteristic {p} exceeds supported bound {MAX_PRIME}"
            )));
        }
        let ctx = FpCtx { p };
        let raw: Vec<u64> = modulus.iter().map(|&c| ctx.reduce_i64(c)).collect();
        let mut f = poly::trim(&ctx, raw);
        let deg = match poly::degree(&ctx, &f) {
            Some(0) | None => {
                return Err(Error::Invalid("modulus must have positive degree".into()))
            }
            Some(d) => d,
        };
        let li = ctx.inv(&f[deg]).expect("nonzero leading coefficient");
        for c in f.iter_mut() {
            *c = ctx.mul(c, &li);
        }
        if deg == 1 {
            return Field::prime(p);
        }
        if !poly::is_irreducible_fp(p, &f) {
            return Err(Error::ReducibleModulus(fmt_fp_poly(&f), p));
        }
        let mut card: u64 = 1;
        for _ in 0..deg {
            card = card
                .checked_mul(p)
                .filter(|&c| c <= MAX_CARDINALITY)
                .ok_or_else(|| {
                    Error::Invalid(format!("cardinality {p}^{deg} exceeds supported bound"))
                })?;
        }
        Ok(Field(Arc::new(Repr {
            kind: FieldKind::Extension,
            p,
            zeta_order: 0,
            degree: deg,
            modulus: Modulus::Mod(f),
        })))
    }

    pub fn kind(&self) -> FieldKind {
        self.0.kind
    }

    /// Characteristic, 0 for `Q` and cyclotomic fields.
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Extension degree over the prime field / over `Q`.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Order of the distinguished root of unity for cyclotomic fields.
    pub fn zeta_order(&self) -> u64 {
        self.0.zeta_order
    }

    pub fn is_finite(&self) -> bool {
        self.0.p != 0
    }

    /// Number of elements for finite fields.
    pub fn cardinality(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let mut card: u64 = 1;
        for _ in 0..self.0.degree {
            card = card.checked_mul(self.0.p)?;
        }
        Some(card)
    }

    /// Monic modulus over `GF(p)` for extension fields.
    pub fn modulus_fp(&self) -> Option<&[u64]> {
        match &self.0.modulus {
            Modulus::Mod(f) => Some(f),
            _ => None,
        }
    }

    /// Monic modulus over `Q` for cyclotomic fields (`Phi_k`).
    pub fn modulus_q(&self) -> Option<&[BigRational]> {
        match &self.0.modulus {
            Modulus::Rat(f) => Some(f),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self.0.kind {
            FieldKind::Rationals => "Q".to_string(),
            FieldKind::Cyclotomic => format!("Q(zeta_{})", self.0.zeta_order),
            FieldKind::Prime => format!("GF({})", self.0.p),
            FieldKind::Extension => format!("GF({}^{})", self.0.p, self.0.degree),
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        let d = self.0.degree;
        let data = if self.is_finite() {
            let ctx = FpCtx { p: self.0.p };
            let mut c = vec![0u64; d];
            c[0] = ctx.reduce_i64(v);
            Data::Mod(c)
        } else {
            let mut c = vec![BigRational::zero(); d];
            c[0] = BigRational::from_integer(BigInt::from(v));
            Data::Rat(c)
        };
        FieldElement {
            field: self.clone(),
            data,
        }
    }

    /// Embeds a rational constant. Over `GF(p)` the denominator must be prime
    /// to `p`.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElement> {
        if !self.is_finite() {
            let mut c = vec![BigRational::zero(); self.0.degree];
            c[0] = r.clone();
            return Ok(FieldElement {
                field: self.clone(),
                data: Data::Rat(c),
            });
        }
        let p = BigInt::from(self.0.p);
        let den = r.denom();
        if (den % &p).is_zero() {
            return Err(Error::Invalid(format!(
                "denominator of {r} not invertible mod {}",
                self.0.p
            )));
        }
        let ctx = FpCtx { p: self.0.p };
        let num_mod = r.numer().mod_floor_u64(self.0.p);
        let den_mod = den.mod_floor_u64(self.0.p);
        let v = ctx.mul(&num_mod, &ctx.inv(&den_mod).expect("coprime denominator"));
        let mut c = vec![0u64; self.0.degree];
        c[0] = v;
        Ok(FieldElement {
            field: self.clone(),
            data: Data::Mod(c),
        })
    }

    /// Element from residue coefficients low-to-high (finite fields).
    pub fn from_residues(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if !self.is_finite() {
            return Err(Error::Invalid(
                "residue coefficients only apply to finite fields".into(),
            ));
        }
        if coeffs.len() > self.0.degree {
            return Err(Error::Invalid(format!(
                "{} coefficients exceed field degree {}",
                coeffs.len(),
                self.0.degree
            )));
        }
        let ctx = FpCtx { p: self.0.p };
        let mut c = vec![0u64; self.0.degree];
        for (i, v) in coeffs.iter().enumerate() {
            c[i] = ctx.reduce_i64(*v);
        }
        Ok(FieldElement {
            field: self.clone(),
            data: Data::Mod(c),
        })
    }

    /// Element from rational coefficients low-to-high (characteristic 0).
    pub fn from_rationals(&self, coeffs: &[BigRational]) -> Result<FieldElement> {
        if self.is_finite() {
            return Err(Error::Invalid(
                "rational coefficients only apply to characteristic-0 fields".into(),
            ));
        }
        if coeffs.len() > self.0.degree {
            return Err(Error::Invalid(format!(
                "{} coefficients exceed field degree {}",
                coeffs.len(),
                self.0.degree
            )));
        }
        let mut c = vec![BigRational::zero(); self.0.degree];
        for (i, v) in coeffs.iter().enumerate() {
            c[i] = v.clone();
        }
        Ok(FieldElement {
            field: self.clone(),
            data: Data::Rat(c),
        })
    }

    /// The class of `x` in a quotient-ring presentation (degree >= 2): the
    /// distinguished root of unity for cyclotomic fields, the distinguished
    /// generator for extensions.
    pub fn generator(&self) -> Result<FieldElement> {
        if self.0.degree < 2 {
            return Err(Error::Invalid(format!(
                "{} has no quotient-ring generator",
                self.name()
            )));
        }
        match &self.0.modulus {
            Modulus::Rat(_) => {
                let mut c = vec![BigRational::zero(); self.0.degree];
                c[1] = BigRational::one();
                Ok(FieldElement {
                    field: self.clone(),
                    data: Data::Rat(c),
                })
            }
            Modulus::Mod(_) => {
                let mut c = vec![0u64; self.0.degree];
                c[1] = 1;
                Ok(FieldElement {
                    field: self.clone(),
                    data: Data::Mod(c),
                })
            }
            Modulus::None => unreachable!("degree >= 2 implies a modulus"),
        }
    }

    /// All elements of a finite field in canonical ascending order
    /// (coefficient vectors compared constant term first).
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElement> + '_> {
        let q = self
            .cardinality()
            .ok_or_else(|| Error::Invalid("element enumeration needs a finite field".into()))?;
        let p = self.0.p;
        let d = self.0.degree;
        Ok((0..q).map(move |idx| {
            // base-p digits with the constant coefficient least significant:
            // enumeration order equals the canonical element order, and the
            // base-field elements 0, 1, ..., p-1 come first
            let mut c = vec![0u64; d];
            let mut rest = idx;
            for digit in c.iter_mut() {
                *digit = rest % p;
                rest /= p;
            }
            FieldElement {
                field: self.clone(),
                data: Data::Mod(c),
            }
        }))
    }
}

/// Lexicographically smallest monic irreducible of degree `m` over `GF(p)`:
/// the candidate whose non-leading coefficients, read as a base-`p` number
/// with the constant term least significant, is minimal.
fn smallest_irreducible(p: u64, m: usize) -> Vec<u64> {
    let total = p.pow(m as u32);
    for v in 0..total {
        let mut coeffs = vec![0u64; m + 1];
        coeffs[m] = 1;
        let mut rest = v;
        for digit in coeffs.iter_mut().take(m) {
            *digit = rest % p;
            rest /= p;
        }
        if coeffs[0] == 0 {
            continue; // divisible by x
        }
        if poly::is_irreducible_fp(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible of every degree exists over GF(p)")
}

fn fmt_fp_poly(f: &[u64]) -> String {
    let terms: Vec<String> = f
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| match i {
            0 => format!("{c}"),
            1 => {
                if *c == 1 {
                    "x".into()
                } else {
                    format!("{c}*x")
                }
            }
            _ => {
                if *c == 1 {
                    format!("x^{i}")
                } else {
                    format!("{c}*x^{i}")
                }
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Data {
    Rat(Vec<BigRational>),
    Mod(Vec<u64>),
}

/// An element of one of the supported fields. Carries its owner handle;
/// mixed-field operations error.
#[derive(Debug, Clone)]
pub struct FieldElement {
    field: Field,
    data: Data,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.data == other.data
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    /// Canonical total order: owner name, then coefficient vectors compared
    /// highest basis coefficient first, so finite-field elements sort by
    /// their base-p numeric value and base-field constants come first. Used
    /// for deterministic root lists, point orderings, and designated-lift
    /// selection.
    fn cmp(&self, other: &Self) -> Ordering {
        let tag = self.field.name().cmp(&other.field.name());
        if tag != Ordering::Equal {
            return tag;
        }
        match (&self.data, &other.data) {
            (Data::Mod(a), Data::Mod(b)) => a.iter().rev().cmp(b.iter().rev()),
            (Data::Rat(a), Data::Rat(b)) => a.iter().rev().cmp(b.iter().rev()),
            (Data::Mod(_), Data::Rat(_)) => Ordering::Less,
            (Data::Rat(_), Data::Mod(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gen_symbol = match self.field.kind() {
            FieldKind::Cyclotomic => format!("zeta_{}", self.field.zeta_order()),
            _ => "a".to_string(),
        };
        let mut terms: Vec<String> = Vec::new();
        match &self.data {
            Data::Mod(c) => {
                for (i, v) in c.iter().enumerate() {
                    if *v == 0 {
                        continue;
                    }
                    terms.push(match i {
                        0 => format!("{v}"),
                        1 => format!("{v}*{gen_symbol}"),
                        _ => format!("{v}*{gen_symbol}^{i}"),
                    });
                }
            }
            Data::Rat(c) => {
                for (i, v) in c.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    terms.push(match i {
                        0 => format!("{v}"),
                        1 => format!("({v})*{gen_symbol}"),
                        _ => format!("({v})*{gen_symbol}^{i}"),
                    });
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Mod(c) => c.iter().all(|v| *v == 0),
            Data::Rat(c) => c.iter().all(|v| v.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Residue coefficients low-to-high (finite fields).
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.data {
            Data::Mod(c) => Some(c),
            _ => None,
        }
    }

    /// Rational coefficients low-to-high (characteristic 0).
    pub fn rationals(&self) -> Option<&[BigRational]> {
        match &self.data {
            Data::Rat(c) => Some(c),
            _ => None,
        }
    }

    /// For a char-0 element that is a rational constant, that constant.
    pub fn as_rational_constant(&self) -> Option<BigRational> {
        match &self.data {
            Data::Rat(c) => {
                if c.iter().skip(1).all(|v| v.is_zero()) {
                    Some(c[0].clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields(
                self.field.name(),
                other.field.name(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let data = match (&self.data, &other.data) {
            (Data::Mod(a), Data::Mod(b)) => {
                let ctx = FpCtx {
                    p: self.field.characteristic(),
                };
                Data::Mod(a.iter().zip(b).map(|(x, y)| ctx.add(x, y)).collect())
            }
            (Data::Rat(a), Data::Rat(b)) => {
                Data::Rat(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!("equal fields share a representation"),
        };
        Ok(FieldElement {
            field: self.field.clone(),
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let data = match &self.data {
            Data::Mod(a) => {
                let ctx = FpCtx {
                    p: self.field.characteristic(),
                };
                Data::Mod(a.iter().map(|x| ctx.neg(x)).collect())
            }
            Data::Rat(a) => Data::Rat(a.iter().map(|x| -x).collect()),
        };
        FieldElement {
            field: self.field.clone(),
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let d = self.field.degree();
        let data = match (&self.data, &other.data) {
            (Data::Mod(a), Data::Mod(b)) => {
                let ctx = FpCtx {
                    p: self.field.characteristic(),
                };
                let prod = poly::mul(&ctx, a, b);
                let red = match self.field.modulus_fp() {
                    Some(m) => poly::rem(&ctx, &prod, m),
                    None => prod,
                };
                Data::Mod(pad_mod(red, d))
            }
            (Data::Rat(a), Data::Rat(b)) => {
                let ctx = QCtx;
                let prod = poly::mul(&ctx, a, b);
                let red = match self.field.modulus_q() {
                    Some(m) => poly::rem(&ctx, &prod, m),
                    None => prod,
                };
                Data::Rat(pad_rat(red, d))
            }
            _ => unreachable!("equal fields share a representation"),
        };
        Ok(FieldElement {
            field: self.field.clone(),
            data,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.field.degree();
        let data = match &self.data {
            Data::Mod(a) => {
                let ctx = FpCtx {
                    p: self.field.characteristic(),
                };
                let inv = match self.field.modulus_fp() {
                    Some(m) => poly::inv_mod(&ctx, a, m).ok_or(Error::DivisionByZero)?,
                    None => vec![ctx.inv(&a[0]).ok_or(Error::DivisionByZero)?],
                };
                Data::Mod(pad_mod(inv, d))
            }
            Data::Rat(a) => {
                let ctx = QCtx;
                let inv = match self.field.modulus_q() {
                    Some(m) => poly::inv_mod(&ctx, a, m).ok_or(Error::DivisionByZero)?,
                    None => vec![ctx.inv(&a[0]).ok_or(Error::DivisionByZero)?],
                };
                Data::Rat(pad_rat(inv, d))
            }
        };
        Ok(FieldElement {
            field: self.field.clone(),
            data,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut result = self.field.one();
        let mut acc = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&acc)?;
            }
            e >>= 1;
            if e > 0 {
                acc = acc.mul(&acc)?;
            }
        }
        Ok(result)
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv()?.pow(e.unsigned_abs())
        }
    }

    /// Multiplicative order in a finite field.
    pub fn multiplicative_order(&self) -> Result<u64> {
        let q = self.field.cardinality().ok_or_else(|| {
            Error::Invalid("multiplicative order needs a finite field".into())
        })?;
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let group = q - 1;
        Ok(arith::multiplicative_order(group, |e| {
            self.pow(e).map(|x| x.is_one()).unwrap_or(false)
        }))
    }
}

fn pad_mod(mut v: Vec<u64>, d: usize) -> Vec<u64> {
    v.resize(d, 0);
    v
}

fn pad_rat(mut v: Vec<BigRational>, d: usize) -> Vec<BigRational> {
    v.resize(d, BigRational::zero());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v).unwrap()
    }

    #[test]
    fn canonical_gf4_modulus() {
        let f4 = Field::extension(2, 2).unwrap();
        assert_eq!(f4.modulus_fp().unwrap(), &[1, 1, 1]);
        assert_eq!(f4.name(), "GF(2^2)");
        assert_eq!(f4.cardinality(), Some(4));
    }

    #[test]
    fn canonical_phi3() {
        let f = Field::cyclotomic(3).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.modulus_q().unwrap(), &[q(1), q(1), q(1)]);
        // zeta_3^2 = -1 - zeta_3
        let z = f.generator().unwrap();
        let z2 = z.mul(&z).unwrap();
        assert_eq!(z2, f.from_rationals(&[q(-1), q(-1)]).unwrap());
        // zeta_3^3 = 1
        assert!(z.pow(3).unwrap().is_one());
    }

    #[test]
    fn cyclotomic_degenerate_orders_collapse() {
        assert_eq!(Field::cyclotomic(1).unwrap(), Field::rationals());
        assert_eq!(Field::cyclotomic(2).unwrap(), Field::rationals());
    }

    #[test]
    fn gf13_arithmetic() {
        let f = Field::prime(13).unwrap();
        let seven = f.from_int(7);
        let two = f.from_int(2);
        assert!(seven.mul(&two).unwrap().is_one());
        // 1/9 = 3 mod 13
        assert_eq!(f.from_int(9).inv().unwrap(), f.from_int(3));
        assert_eq!(f.from_int(-1), f.from_int(12));
    }

    #[test]
    fn gf169_uses_x2_plus_2() {
        // x^2 + 1 splits mod 13 (5^2 = -1), so the canonical degree-2 modulus
        // moves to the next constant term
        let f = Field::extension(13, 2).unwrap();
        assert_eq!(f.modulus_fp().unwrap(), &[2, 0, 1]);
        let g = f.generator().unwrap();
        assert_eq!(g.mul(&g).unwrap(), f.from_int(-2));
    }

    #[test]
    fn mixed_field_operations_error() {
        let a = Field::prime(13).unwrap().from_int(1);
        let b = Field::prime(7).unwrap().from_int(1);
        assert!(matches!(a.add(&b), Err(Error::MixedFields(_, _))));
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = Field::extension_with_modulus(13, vec![1, 0, 1]);
        assert!(matches!(err, Err(Error::ReducibleModulus(_, _))));
    }

    #[test]
    fn rational_constants_into_gf() {
        let f = Field::prime(13).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), f.from_int(7));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(13));
        assert!(f.from_rational(&bad).is_err());
    }

    #[test]
    fn element_enumeration_order() {
        let f4 = Field::extension(2, 2).unwrap();
        let elems: Vec<Vec<u64>> = f4
            .elements()
            .unwrap()
            .map(|e| e.residues().unwrap().to_vec())
            .collect();
        // ascending numeric value: 0, 1, g, g + 1
        assert_eq!(
            elems,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
        );
        // enumeration order agrees with the canonical element order
        let collected: Vec<FieldElement> = f4.elements().unwrap().collect();
        let mut sorted = collected.clone();
        sorted.sort();
        assert_eq!(collected, sorted);
    }

    #[test]
    fn multiplicative_orders() {
        let f = Field::prime(13).unwrap();
        assert_eq!(f.from_int(3).multiplicative_order().unwrap(), 3);
        assert_eq!(f.from_int(12).multiplicative_order().unwrap(), 2);
        assert_eq!(f.from_int(2).multiplicative_order().unwrap(), 12);
        let f4 = Field::extension(2, 2).unwrap();
        assert_eq!(
            f4.generator().unwrap().multiplicative_order().unwrap(),
            3
        );
    }

    #[test]
    fn pow_and_inverse_in_extension() {
        let f = Field::extension(13, 3).unwrap();
        let g = f.generator().unwrap();
        let gi = g.inv().unwrap();
        assert!(g.mul(&gi).unwrap().is_one());
        let e = g.pow(2196).unwrap(); // q - 1 = 13^3 - 1
        assert!(e.is_one());
    }
}
