//! Dense univariate polynomial arithmetic over the two coefficient domains the
//! crate uses: `Q` (arbitrary-precision rationals) and `GF(p)` (word-sized
//! residues). Everything is exact; polynomials are coefficient vectors
//! low-to-high with no trailing zeros after `trim`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficient domain: just enough structure for the quotient-ring arithmetic
/// built on top (field element multiplication, inversion, irreducibility).
pub(crate) trait Ctx {
    type S: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::S;
    fn one(&self) -> Self::S;
    fn is_zero(&self, a: &Self::S) -> bool;
    fn add(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn sub(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn mul(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn neg(&self, a: &Self::S) -> Self::S;
    fn inv(&self, a: &Self::S) -> Option<Self::S>;
}

pub(crate) struct QCtx;

impl Ctx for QCtx {
    type S = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// Residues modulo a prime below `2^26`, so products fit in a word.
pub(crate) struct FpCtx {
    pub p: u64,
}

impl FpCtx {
    pub fn reduce_i64(&self, v: i64) -> u64 {
        let p = self.p as i64;
        (((v % p) + p) % p) as u64
    }
}

impl Ctx for FpCtx {
    type S = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1, "inverse modulo a prime");
        let p = self.p as i128;
        Some((((s0 % p) + p) % p) as u64)
    }
}

pub(crate) fn trim<C: Ctx>(ctx: &C, mut f: Vec<C::S>) -> Vec<C::S> {
    while f.last().is_some_and(|c| ctx.is_zero(c)) {
        f.pop();
    }
    f
}

pub(crate) fn degree<C: Ctx>(ctx: &C, f: &[C::S]) -> Option<usize> {
    f.iter().rposition(|c| !ctx.is_zero(c))
}

pub(crate) fn sub<C: Ctx>(ctx: &C, a: &[C::S], b: &[C::S]) -> Vec<C::S> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| ctx.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| ctx.zero());
        out.push(ctx.sub(&x, &y));
    }
    trim(ctx, out)
}

pub(crate) fn mul<C: Ctx>(ctx: &C, a: &[C::S], b: &[C::S]) -> Vec<C::S> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ctx.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = ctx.mul(x, y);
            out[i + j] = ctx.add(&out[i + j], &t);
        }
    }
    trim(ctx, out)
}

/// Quotient and remainder; the divisor's leading coefficient must be
/// invertible (always true over a field for a nonzero divisor).
pub(crate) fn divrem<C: Ctx>(ctx: &C, a: &[C::S], b: &[C::S]) -> (Vec<C::S>, Vec<C::S>) {
    let db = degree(ctx, b).expect("division by zero polynomial");
    let lead_inv = ctx.inv(&b[db]).expect("leading coefficient invertible");
    let mut rem: Vec<C::S> = a.to_vec();
    rem = trim(ctx, rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![ctx.zero(); rem.len() - db];
    while let Some(dr) = degree(ctx, &rem) {
        if dr < db {
            break;
        }
        let c = ctx.mul(&rem[dr], &lead_inv);
        let shift = dr - db;
        quot[shift] = ctx.add(&quot[shift], &c);
        for i in 0..=db {
            let t = ctx.mul(&c, &b[i]);
            rem[shift + i] = ctx.sub(&rem[shift + i], &t);
        }
        rem = trim(ctx, rem);
    }
    (trim(ctx, quot), rem)
}

pub(crate) fn rem<C: Ctx>(ctx: &C, a: &[C::S], b: &[C::S]) -> Vec<C::S> {
    divrem(ctx, a, b).1
}

pub(crate) fn gcd<C: Ctx>(ctx: &C, a: &[C::S], b: &[C::S]) -> Vec<C::S> {
    let mut a = trim(ctx, a.to_vec());
    let mut b = trim(ctx, b.to_vec());
    while !b.is_empty() {
        let r = rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    // monic normalization, so the gcd is canonical
    if let Some(d) = degree(ctx, &a) {
        let li = ctx.inv(&a[d]).expect("field coefficient");
        for c in a.iter_mut() {
            *c = ctx.mul(c, &li);
        }
    }
    a
}

/// Inverse of `a` in the quotient ring by the monic polynomial `modulus`,
/// if `gcd(a, modulus) = 1`.
pub(crate) fn inv_mod<C: Ctx>(ctx: &C, a: &[C::S], modulus: &[C::S]) -> Option<Vec<C::S>> {
    // extended Euclid tracking only the Bezout coefficient of `a`
    let mut r0: Vec<C::S> = modulus.to_vec();
    let mut r1 = rem(ctx, a, modulus);
    let mut s0: Vec<C::S> = Vec::new();
    let mut s1: Vec<C::S> = vec![ctx.one()];
    while !r1.is_empty() {
        let (q, r) = divrem(ctx, &r0, &r1);
        let qs1 = mul(ctx, &q, &s1);
        let s = sub(ctx, &s0, &qs1);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    let d = degree(ctx, &r0)?;
    if d != 0 {
        return None;
    }
    let li = ctx.inv(&r0[0]).expect("field coefficient");
    let mut out: Vec<C::S> = s0.iter().map(|c| ctx.mul(c, &li)).collect();
    out = rem(ctx, &out, modulus);
    Some(out)
}

/// `base^exp mod modulus` with an arbitrary-precision exponent.
pub(crate) fn powmod<C: Ctx>(ctx: &C, base: &[C::S], exp: &BigUint, modulus: &[C::S]) -> Vec<C::S> {
    let mut result = vec![ctx.one()];
    let mut acc = rem(ctx, base, modulus);
    for i in 0..exp.bits() {
        if exp.bit(i) {
            result = rem(ctx, &mul(ctx, &result, &acc), modulus);
        }
        if i + 1 < exp.bits() {
            acc = rem(ctx, &mul(ctx, &acc, &acc), modulus);
        }
    }
    result
}

/// Rabin irreducibility test for a monic `f` of degree `m >= 1` over `GF(p)`:
/// `x^{p^m} == x (mod f)` and `gcd(x^{p^{m/l}} - x, f) = 1` for each prime
/// `l | m`.
pub(crate) fn is_irreducible_fp(p: u64, f: &[u64]) -> bool {
    let ctx = FpCtx { p };
    let m = match degree(&ctx, f) {
        Some(0) | None => return false,
        Some(m) => m,
    };
    if m == 1 {
        return true;
    }
    let x = vec![0u64, 1u64];
    let exp_top = BigUint::from(p).pow(m as u32);
    let xp = powmod(&ctx, &x, &exp_top, f);
    if trim(&ctx, sub(&ctx, &xp, &x)) != Vec::<u64>::new() {
        return false;
    }
    for l in crate::arith::prime_divisors(m as u64) {
        let e = BigUint::from(p).pow((m as u64 / l) as u32);
        let xq = powmod(&ctx, &x, &e, f);
        let diff = sub(&ctx, &xq, &x);
        let g = gcd(&ctx, &diff, f);
        if degree(&ctx, &g) != Some(0) {
            return false;
        }
    }
    true
}

/// The `k`-th cyclotomic polynomial over `Q`, monic with integer
/// coefficients, by exact division of `x^k - 1` by the proper-divisor
/// cyclotomics.
pub(crate) fn cyclotomic_polynomial(k: u64) -> Vec<BigRational> {
    fn build(k: u64, memo: &mut std::collections::BTreeMap<u64, Vec<BigRational>>) -> Vec<BigRational> {
        if let Some(f) = memo.get(&k) {
            return f.clone();
        }
        let ctx = QCtx;
        // x^k - 1
        let mut num = vec![BigRational::zero(); k as usize + 1];
        num[0] = -BigRational::one();
        num[k as usize] = BigRational::one();
        let mut f = num;
        for d in 1..k {
            if k % d == 0 {
                let phi_d = build(d, memo);
                let (q, r) = divrem(&ctx, &f, &phi_d);
                debug_assert!(r.is_empty(), "cyclotomic division is exact");
                f = q;
            }
        }
        memo.insert(k, f.clone());
        f
    }
    let mut memo = std::collections::BTreeMap::new();
    let f = build(k, &mut memo);
    debug_assert!(f.iter().all(|c| c.denom().is_one() || c.is_zero()));
    debug_assert!(f.last().map(|c| c.is_one()).unwrap_or(false));
    f
}
