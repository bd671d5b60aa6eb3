//! Root extraction and deterministic field extension.
//!
//! Everything here is exact and canonical: root lists come back sorted in the
//! canonical element order, extensions always pick the canonical modulus, and
//! embeddings send the old generator to the smallest root of the old modulus,
//! so repeated runs agree bit for bit.
//!
//! Completeness caveat (documented, deliberate): over cyclotomic fields
//! `kth_roots` searches the subgroup `Q* . <zeta>` (rational multiples of the
//! distinguished root of unity). Complete root extraction in `Q(zeta_m)` would
//! need polynomial factorization over number fields, which is out of scope;
//! finite-field and rational root extraction are complete.

use super::{Field, FieldElement, FieldKind};
use crate::{arith, Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exhaustive-scan ceiling for finite-field root searches and embedding
/// root-finding.
pub const ROOT_SCAN_BUDGET: u64 = 1 << 23;

/// Extension-degree ceiling for [`extend_for_roots`].
pub const MAX_EXTENSION_DEGREE: usize = 48;

/// A primitive `k`-th root of unity, chosen canonically: for cyclotomic
/// fields a fixed power of the distinguished generator, for finite fields the
/// smallest element of exact order `k` in the canonical element order.
/// Errors signal the caller to extend the field.
pub fn primitive_kth_root(field: &Field, k: u64) -> Result<FieldElement> {
    if k == 0 {
        return Err(Error::Invalid("root-of-unity order must be positive".into()));
    }
    if k == 1 {
        return Ok(field.one());
    }
    if k == 2 {
        // -1 has order two in every field of characteristic != 2
        if field.characteristic() == 2 {
            return Err(Error::NoUnityRoot {
                k,
                field: field.name(),
            });
        }
        return Ok(field.from_int(-1));
    }
    match field.kind() {
        FieldKind::Rationals => Err(Error::NoUnityRoot {
            k,
            field: field.name(),
        }),
        FieldKind::Cyclotomic => {
            let big_k = field.zeta_order();
            let zeta = field.generator()?;
            if big_k % k == 0 {
                return zeta.pow(big_k / k);
            }
            // for odd K the unit group of Q(zeta_K) contains mu_{2K}
            if big_k % 2 == 1 && k % 2 == 0 && big_k % (k / 2) == 0 && (k / 2) % 2 == 1 {
                return Ok(zeta.pow(big_k / (k / 2))?.neg());
            }
            Err(Error::NoUnityRoot {
                k,
                field: field.name(),
            })
        }
        FieldKind::Prime | FieldKind::Extension => {
            let q = field.cardinality().expect("finite");
            if (q - 1) % k != 0 {
                return Err(Error::NoUnityRoot {
                    k,
                    field: field.name(),
                });
            }
            if q > ROOT_SCAN_BUDGET {
                return Err(Error::Budget(format!(
                    "root-of-unity scan over {} elements",
                    q
                )));
            }
            let lfactors = arith::prime_divisors(k);
            for e in field.elements()? {
                if e.is_zero() {
                    continue;
                }
                if !e.pow(k)?.is_one() {
                    continue;
                }
                if lfactors.iter().all(|&l| !e.pow(k / l).unwrap().is_one()) {
                    return Ok(e);
                }
            }
            unreachable!("k | q - 1 guarantees an element of order k")
        }
    }
}

/// All `k`-th roots of unity, sorted canonically.
pub fn roots_of_unity(field: &Field, k: u64) -> Result<Vec<FieldElement>> {
    let zeta = primitive_kth_root(field, k)?;
    let mut out = Vec::with_capacity(k as usize);
    let mut acc = field.one();
    for _ in 0..k {
        out.push(acc.clone());
        acc = acc.mul(&zeta)?;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All solutions of `x^k = a` in the owner field, sorted canonically.
/// Complete over finite fields (exhaustive scan) and over `Q` (exact
/// perfect-power test); over cyclotomic fields the search is restricted to
/// `Q* . <zeta>` as documented in the module header.
pub fn kth_roots(a: &FieldElement, k: u64) -> Result<Vec<FieldElement>> {
    if k == 0 {
        return Err(Error::Invalid("root order must be positive".into()));
    }
    if k == 1 {
        return Ok(vec![a.clone()]);
    }
    let field = a.field().clone();
    if a.is_zero() {
        return Ok(vec![field.zero()]);
    }
    match field.kind() {
        FieldKind::Prime | FieldKind::Extension => {
            let q = field.cardinality().expect("finite");
            if q > ROOT_SCAN_BUDGET {
                return Err(Error::Budget(format!("root scan over {q} elements")));
            }
            let mut out = Vec::new();
            for x in field.elements()? {
                if x.is_zero() {
                    continue;
                }
                if x.pow(k)? == *a {
                    out.push(x);
                }
            }
            Ok(out) // enumeration order is already canonical
        }
        FieldKind::Rationals => {
            let c = a.as_rational_constant().expect("rationals are constants");
            let mut out: Vec<FieldElement> = rational_kth_roots(&c, k)?
                .into_iter()
                .map(|r| field.from_rational(&r).expect("char 0"))
                .collect();
            out.sort();
            Ok(out)
        }
        FieldKind::Cyclotomic => {
            let big_k = field.zeta_order();
            let zeta = field.generator()?;
            let mut out: Vec<FieldElement> = Vec::new();
            for j in 0..big_k {
                // does a / zeta^{jk} land in Q?
                let shift = zeta.pow((j * k) % big_k)?;
                let b = a.div(&shift)?;
                if let Some(c) = b.as_rational_constant() {
                    for r in rational_kth_roots(&c, k)? {
                        let root = field.from_rational(&r)?.mul(&zeta.pow(j)?)?;
                        debug_assert_eq!(root.pow(k)?, *a);
                        out.push(root);
                    }
                }
            }
            out.sort();
            out.dedup();
            Ok(out)
        }
    }
}

/// Exact `k`-th roots of a rational number within `Q`.
fn rational_kth_roots(a: &BigRational, k: u64) -> Result<Vec<BigRational>> {
    if a.is_zero() {
        return Ok(vec![BigRational::zero()]);
    }
    let negative = a.is_negative();
    if negative && k % 2 == 0 {
        return Ok(Vec::new());
    }
    let k32: u32 = k
        .try_into()
        .map_err(|_| Error::Invalid(format!("root order {k} out of range")))?;
    let num_abs = a.numer().abs().to_biguint().expect("nonnegative");
    let den = a.denom().to_biguint().expect("positive denominator");
    let (rn, rd) = match (
        arith::perfect_kth_root(&num_abs, k32),
        arith::perfect_kth_root(&den, k32),
    ) {
        (Some(rn), Some(rd)) => (rn, rd),
        _ => return Ok(Vec::new()),
    };
    let root = BigRational::new(
        BigInt::from_biguint(Sign::Plus, rn),
        BigInt::from_biguint(Sign::Plus, rd),
    );
    if k % 2 == 1 {
        Ok(vec![if negative { -root } else { root }])
    } else {
        Ok(vec![-root.clone(), root])
    }
}

/// A homomorphic embedding between supported field pairs:
/// identity, `Q -> Q(zeta_K)`, `Q(zeta_k) -> Q(zeta_K)` with `k | K`,
/// `GF(p) -> GF(p^m)`, and `GF(p^d) -> GF(p^m)` with `d | m`.
#[derive(Debug, Clone)]
pub struct Embedding {
    from: Field,
    to: Field,
    /// Image of the source generator; `None` when the source has degree 1.
    gen_image: Option<FieldElement>,
}

impl Embedding {
    pub fn identity(field: &Field) -> Embedding {
        Embedding {
            from: field.clone(),
            to: field.clone(),
            gen_image: None,
        }
    }

    pub fn new(from: &Field, to: &Field) -> Result<Embedding> {
        if from == to {
            return Ok(Embedding::identity(from));
        }
        let fail = || {
            Err(Error::Invalid(format!(
                "no canonical embedding {} -> {}",
                from.name(),
                to.name()
            )))
        };
        match (from.kind(), to.kind()) {
            (FieldKind::Rationals, FieldKind::Cyclotomic) => Ok(Embedding {
                from: from.clone(),
                to: to.clone(),
                gen_image: None,
            }),
            (FieldKind::Cyclotomic, FieldKind::Cyclotomic) => {
                let k = from.zeta_order();
                let big_k = to.zeta_order();
                if big_k % k != 0 {
                    return fail();
                }
                let img = to.generator()?.pow(big_k / k)?;
                debug_assert!(eval_modulus(from, &img)?.is_zero());
                Ok(Embedding {
                    from: from.clone(),
                    to: to.clone(),
                    gen_image: Some(img),
                })
            }
            (FieldKind::Prime, FieldKind::Extension) => {
                if from.characteristic() != to.characteristic() {
                    return fail();
                }
                Ok(Embedding {
                    from: from.clone(),
                    to: to.clone(),
                    gen_image: None,
                })
            }
            (FieldKind::Extension, FieldKind::Extension) => {
                let (p, d, m) = (from.characteristic(), from.degree(), to.degree());
                if p != to.characteristic() || m % d != 0 {
                    return fail();
                }
                let q = to.cardinality().expect("finite");
                if q > ROOT_SCAN_BUDGET {
                    return Err(Error::Budget(format!(
                        "embedding root scan over {q} elements"
                    )));
                }
                // smallest root of the source modulus in the target field
                for cand in to.elements()? {
                    if eval_modulus(from, &cand)?.is_zero() {
                        return Ok(Embedding {
                            from: from.clone(),
                            to: to.clone(),
                            gen_image: Some(cand),
                        });
                    }
                }
                Err(Error::Internal(format!(
                    "{} has no root of the degree-{d} modulus although {d} | {m}",
                    to.name()
                )))
            }
            _ => fail(),
        }
    }

    pub fn from_field(&self) -> &Field {
        &self.from
    }

    pub fn to_field(&self) -> &Field {
        &self.to
    }

    pub fn map(&self, e: &FieldElement) -> Result<FieldElement> {
        if *e.field() != self.from {
            return Err(Error::MixedFields(e.field().name(), self.from.name()));
        }
        if self.from == self.to {
            return Ok(e.clone());
        }
        match (&self.gen_image, e.residues(), e.rationals()) {
            // degree-1 source: constants map to constants
            (None, Some(res), _) => self.to.from_residues(&[res[0] as i64]),
            (None, _, Some(rat)) => self.to.from_rational(&rat[0]),
            // Horner in the image of the generator
            (Some(g), Some(res), _) => {
                let mut acc = self.to.zero();
                for c in res.iter().rev() {
                    acc = acc.mul(g)?.add(&self.to.from_int(*c as i64))?;
                }
                Ok(acc)
            }
            (Some(g), _, Some(rat)) => {
                let mut acc = self.to.zero();
                for c in rat.iter().rev() {
                    acc = acc.mul(g)?.add(&self.to.from_rational(c)?)?;
                }
                Ok(acc)
            }
            _ => unreachable!("elements carry one of the two representations"),
        }
    }
}

/// Evaluates the modulus of `field` at a point of another field.
fn eval_modulus(field: &Field, x: &FieldElement) -> Result<FieldElement> {
    let target = x.field().clone();
    let mut acc = target.zero();
    if let Some(m) = field.modulus_fp() {
        for c in m.iter().rev() {
            acc = acc.mul(x)?.add(&target.from_int(*c as i64))?;
        }
    } else if let Some(m) = field.modulus_q() {
        for c in m.iter().rev() {
            acc = acc.mul(x)?.add(&target.from_rational(c)?)?;
        }
    }
    Ok(acc)
}

/// Smallest extension of a finite field containing a `k`-th root of every
/// required element together with the `k`-th roots of unity: the least
/// `m` (multiple of the current degree, so the canonical embedding exists)
/// with `k | p^m - 1` and `ord(a) | (p^m - 1) / gcd(k, p^m - 1)` for every
/// requirement `(a, k)`.
///
/// Characteristic 0 is never extended: if a requirement is not already
/// satisfied the caller gets a dedicated error steering to finite fields.
pub fn extend_for_roots(
    field: &Field,
    required: &[(FieldElement, u64)],
) -> Result<(Field, Embedding)> {
    for (a, _) in required {
        if a.field() != field {
            return Err(Error::MixedFields(a.field().name(), field.name()));
        }
    }
    if !field.is_finite() {
        let mut missing = Vec::new();
        for (a, k) in required {
            if kth_roots(a, *k)?.is_empty() {
                missing.push(format!("{a} (k={k})"));
            }
        }
        if missing.is_empty() {
            return Ok((field.clone(), Embedding::identity(field)));
        }
        return Err(Error::CharZeroExtension(format!(
            "{} lacks k-th roots of {}; use a finite prime p > k^(n-1) instead",
            field.name(),
            missing.join(", ")
        )));
    }

    let p = field.characteristic();
    let d = field.degree();
    // multiplicative orders in the base field; zero elements always have the
    // root zero and impose no condition beyond k | p^m - 1
    let mut conditions: Vec<(u64, u64)> = Vec::new(); // (ord(a), k)
    let mut ks: Vec<u64> = Vec::new();
    for (a, k) in required {
        if *k == 0 {
            return Err(Error::Invalid("root order must be positive".into()));
        }
        if *k % p == 0 {
            return Err(Error::Invalid(format!(
                "root order {k} divisible by the characteristic {p}"
            )));
        }
        ks.push(*k);
        if !a.is_zero() && *k > 1 {
            conditions.push((a.multiplicative_order()?, *k));
        }
    }

    let mut m = d;
    while m <= MAX_EXTENSION_DEGREE {
        let q_big = BigUint::from(p).pow(m as u32);
        if q_big > BigUint::from(super::MAX_CARDINALITY) {
            break;
        }
        let qm1 = &q_big - BigUint::one();
        let zeta_ok = ks.iter().all(|k| (&qm1 % k).is_zero());
        let roots_ok = conditions.iter().all(|(ord, k)| {
            let r = (&qm1 % k).to_u64().expect("small modulus");
            // gcd(k, q - 1) via gcd(k, (q - 1) mod k); solvable iff
            // ord(a) divides (q - 1) / gcd(k, q - 1)
            let g = if r == 0 { *k } else { arith::gcd(*k, r) };
            let quotient = &qm1 / g;
            (&quotient % *ord).is_zero()
        });
        if zeta_ok && roots_ok {
            if m == d {
                return Ok((field.clone(), Embedding::identity(field)));
            }
            let target = Field::extension(p, m)?;
            let emb = Embedding::new(field, &target)?;
            return Ok((target, emb));
        }
        m += d;
    }
    Err(Error::MissingRoots {
        k: ks.first().copied().unwrap_or(0),
        field: field.name(),
        missing: format!(
            "no extension of degree <= {MAX_EXTENSION_DEGREE} within cardinality bound satisfies {} root requirements",
            required.len()
        ),
    })
}
