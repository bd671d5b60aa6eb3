//! Truncated formal power series with exact coefficients.
//!
//! A value represents a series known modulo `z^N` where `N` is the precision
//! (the coefficient vector length, always >= 1). Arithmetic truncates to the
//! weaker precision of the operands, so a result is never claimed to more
//! accuracy than the inputs support.
//!
//! The binomial series `(1 + t)^(1/k) = sum_i C(1/k, i) t^i` is the engine
//! behind local charts of the curves: its coefficients are
//!
//! ```text
//! C(1/k, i) = (1 / (i! k^i)) prod_{v=1}^{i-1} (1 - k v),
//! ```
//!
//! which requires `i!` and `k` to be invertible. In characteristic `p` this
//! means `p > i` termwise; a whole series to precision `N` needs `p >= N`.

use crate::field::{Field, FieldElement};
use crate::{Error, Result};

/// A power series truncated at `z^N`: exactly `N` stored coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl TruncatedSeries {
    /// The zero series at precision `n`.
    pub fn zero(field: &Field, n: usize) -> Result<TruncatedSeries> {
        if n == 0 {
            return Err(Error::TruncationTooSmall {
                n,
                what: "series precision must be at least 1".into(),
            });
        }
        Ok(TruncatedSeries {
            field: field.clone(),
            coeffs: vec![field.zero(); n],
        })
    }

    /// The constant series `c` at precision `n`.
    pub fn constant(c: &FieldElement, n: usize) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::zero(c.field(), n)?;
        s.coeffs[0] = c.clone();
        Ok(s)
    }

    /// The series `z` at precision `n`; at `n = 1` this is `0 + O(z)`.
    pub fn variable(field: &Field, n: usize) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::zero(field, n)?;
        if n >= 2 {
            s.coeffs[1] = field.one();
        }
        Ok(s)
    }

    /// Builds a series from explicit coefficients (low to high).
    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElement>) -> Result<TruncatedSeries> {
        if coeffs.is_empty() {
            return Err(Error::TruncationTooSmall {
                n: 0,
                what: "series precision must be at least 1".into(),
            });
        }
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::MixedFields(c.field().name(), field.name()));
            }
        }
        Ok(TruncatedSeries {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The precision `N`: the series is known modulo `z^N`.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&FieldElement> {
        self.coeffs.get(i)
    }

    /// The order of vanishing, if any coefficient below the precision is
    /// nonzero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    /// Drops precision to `n` (never raises it).
    pub fn truncate(&self, n: usize) -> Result<TruncatedSeries> {
        if n == 0 || n > self.precision() {
            return Err(Error::TruncationTooSmall {
                n,
                what: format!("valid truncations are 1..={}", self.precision()),
            });
        }
        Ok(TruncatedSeries {
            field: self.field.clone(),
            coeffs: self.coeffs[..n].to_vec(),
        })
    }

    fn check_same(&self, other: &TruncatedSeries) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields(self.field.name(), other.field.name()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same(other)?;
        let n = self.precision().min(other.precision());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeffs[i].add(&other.coeffs[i])?);
        }
        Ok(TruncatedSeries {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same(other)?;
        let n = self.precision().min(other.precision());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeffs[i].sub(&other.coeffs[i])?);
        }
        Ok(TruncatedSeries {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Result<TruncatedSeries> {
        if c.field() != &self.field {
            return Err(Error::MixedFields(c.field().name(), self.field.name()));
        }
        let mut coeffs = Vec::with_capacity(self.precision());
        for a in &self.coeffs {
            coeffs.push(a.mul(c)?);
        }
        Ok(TruncatedSeries {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same(other)?;
        let n = self.precision().min(other.precision());
        let mut coeffs = vec![self.field.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(TruncatedSeries {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn pow(&self, e: u64) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::constant(&self.field.one(), self.precision())?;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Substitutes `z -> z^k`: coefficient `i` moves to degree `i k`, and the
    /// precision grows to `N k` (the substituted tail `O(z^{Nk})` is exact).
    pub fn substitute_power(&self, k: u64) -> Result<TruncatedSeries> {
        if k == 0 {
            return Err(Error::Invalid("substitution exponent must be positive".into()));
        }
        let k = k as usize;
        let n_out = self
            .precision()
            .checked_mul(k)
            .ok_or_else(|| Error::Internal("precision overflow in substitution".into()))?;
        let mut coeffs = vec![self.field.zero(); n_out];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Ok(TruncatedSeries {
            field: self.field.clone(),
            coeffs,
        })
    }
}

/// The binomial coefficient `C(1/k, i)` in the given field. Needs `i!` and
/// `k` invertible: characteristic 0, or `p > i` with `p` not dividing `k`.
pub fn binomial_kth_root_coeff(field: &Field, k: u64, i: usize) -> Result<FieldElement> {
    if k == 0 {
        return Err(Error::Invalid("root order must be positive".into()));
    }
    let p = field.characteristic();
    if p != 0 {
        if k % p == 0 {
            return Err(Error::Invalid(format!(
                "root order {k} divisible by the characteristic {p}"
            )));
        }
        if (i as u64) >= p {
            return Err(Error::CharTooSmall {
                p,
                what: format!("binomial coefficient C(1/k, {i}) needs p > {i}"),
            });
        }
    }
    if i == 0 {
        return Ok(field.one());
    }
    // numerator prod_{v=1}^{i-1} (1 - k v), denominator i! k^i
    let k_el = field.from_int(k as i64);
    let mut num = field.one();
    for v in 1..i as u64 {
        num = num.mul(&field.one().sub(&k_el.mul(&field.from_int(v as i64))?)?)?;
    }
    let mut den = k_el.pow(i as u64)?;
    for v in 2..=i as u64 {
        den = den.mul(&field.from_int(v as i64))?;
    }
    num.div(&den)
}

/// The `k`-th root series of a unit series with constant term 1:
/// `s = sum_i C(1/k, i) (u - 1)^i` with `s^k = u` to the precision of `u`.
/// In characteristic `p` the precision `N` must satisfy `p >= N` so every
/// needed binomial coefficient exists.
pub fn kth_root_series(u: &TruncatedSeries, k: u64) -> Result<TruncatedSeries> {
    if !u.coeffs[0].is_one() {
        return Err(Error::Invalid(
            "k-th root series needs constant term exactly 1".into(),
        ));
    }
    let n = u.precision();
    let p = u.field().characteristic();
    if p != 0 && (n as u64) > p {
        return Err(Error::CharTooSmall {
            p,
            what: format!("k-th root series at precision {n} needs p >= {n}"),
        });
    }
    let field = u.field().clone();
    let t = u.sub(&TruncatedSeries::constant(&field.one(), n)?)?;
    // Horner in t; t has positive order so i-th term only matters for i < N
    let mut acc = TruncatedSeries::constant(&binomial_kth_root_coeff(&field, k, n - 1)?, n)?;
    for i in (0..n - 1).rev() {
        let c = TruncatedSeries::constant(&binomial_kth_root_coeff(&field, k, i)?, n)?;
        acc = acc.mul(&t)?.add(&c)?;
    }
    Ok(acc)
}
