//! Linear automorphisms of the curves.
//!
//! The deck group `H0 = Z_k^n` acts by multiplying single coordinates with
//! k-th roots of unity. Every linear automorphism is monomial (one nonzero
//! entry per row and column) away from the `k - 1 = p^h` regime, and the
//! quotient by `H0` identifies the linear group `L` with the Moebius
//! stabilizer `G0` of the branch set through the exact sequence
//! `1 -> H0 -> L -> G0 -> 1`, so `|L| = k^n |G0|`.
//!
//! Lifting a stabilizer element `T` works coordinate by coordinate: `T`'s
//! action on branch values dictates the coordinate permutation, the span
//! condition `f_i o A in <f_0, ..., f_{n-2}>` becomes a homogeneous linear
//! system in the k-th powers `u_j = s_j^k` of the scalars, and each choice of
//! k-th roots of the solved `u_j` is one of the `k^n` lifts in the coset.
//!
//! When `k - 1` is a power of the characteristic the forms are Hermitian-like
//! and the span condition has an equivalent matrix formulation
//! `A^t S_i A^(q) = sum_mu b_{i,mu} S_mu` in terms of the diagonal coefficient
//! matrices `S_i` of the forms; [`qform_check`] decides it directly.

use crate::curve::{CurveSpec, ProjectivePoint};
use crate::field::{roots, Field, FieldElement};
use crate::moebius::{moebius_stabilizer, MoebiusMap};
use crate::{arith, la, Error, Result};
use itertools::Itertools;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A projective monomial map `(Ax)_j = s_j x_{sigma(j)}`, stored 0-based and
/// normalized so `s_1 = 1`; equality and ordering act on this canonical
/// representative. Certificates against a concrete curve come from
/// [`MonomialAut::certify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialAut {
    field: Field,
    perm: Vec<usize>,
    scalars: Vec<FieldElement>,
}

impl MonomialAut {
    pub fn new(perm: Vec<usize>, scalars: Vec<FieldElement>) -> Result<MonomialAut> {
        let m = perm.len();
        if m == 0 || scalars.len() != m {
            return Err(Error::Invalid(
                "permutation and scalar list must have equal positive length".into(),
            ));
        }
        let mut seen = vec![false; m];
        for &image in &perm {
            if image >= m || seen[image] {
                return Err(Error::Invalid("not a permutation".into()));
            }
            seen[image] = true;
        }
        let field = scalars[0].field().clone();
        for s in &scalars {
            if s.field() != &field {
                return Err(Error::MixedFields(s.field().name(), field.name()));
            }
            if s.is_zero() {
                return Err(Error::Invalid("monomial scalars must be nonzero".into()));
            }
        }
        let norm = scalars[0].inv()?;
        let scalars = scalars
            .into_iter()
            .map(|s| s.mul(&norm))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonomialAut {
            field,
            perm,
            scalars,
        })
    }

    pub fn identity(field: &Field, m: usize) -> MonomialAut {
        MonomialAut {
            field: field.clone(),
            perm: (0..m).collect(),
            scalars: vec![field.one(); m],
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// 0-based permutation: row `j` reads coordinate `perm[j]`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scalars(&self) -> &[FieldElement] {
        &self.scalars
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &i)| j == i)
            && self.scalars.iter().all(|s| s.is_one())
    }

    /// Composition `self o other`: apply `other`, then `self`.
    pub fn compose(&self, other: &MonomialAut) -> Result<MonomialAut> {
        if self.dim() != other.dim() {
            return Err(Error::Invalid("dimension mismatch".into()));
        }
        let m = self.dim();
        let mut perm = vec![0usize; m];
        let mut scalars = Vec::with_capacity(m);
        for j in 0..m {
            perm[j] = other.perm[self.perm[j]];
            scalars.push(self.scalars[j].mul(&other.scalars[self.perm[j]])?);
        }
        MonomialAut::new(perm, scalars)
    }

    pub fn inverse(&self) -> Result<MonomialAut> {
        let m = self.dim();
        let mut perm = vec![0usize; m];
        let mut scalars = vec![self.field.one(); m];
        for j in 0..m {
            perm[self.perm[j]] = j;
            scalars[self.perm[j]] = self.scalars[j].inv()?;
        }
        MonomialAut::new(perm, scalars)
    }

    /// Image of a projective point.
    pub fn apply(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        if p.coords().len() != self.dim() {
            return Err(Error::Invalid("dimension mismatch".into()));
        }
        let coords = (0..self.dim())
            .map(|j| self.scalars[j].mul(&p.coords()[self.perm[j]]))
            .collect::<Result<Vec<_>>>()?;
        ProjectivePoint::new(coords)
    }

    /// Dense matrix form, row `j` carrying `s_j` in column `perm[j]`.
    pub fn matrix(&self) -> Vec<Vec<FieldElement>> {
        let m = self.dim();
        let mut rows = vec![vec![self.field.zero(); m]; m];
        for j in 0..m {
            rows[j][self.perm[j]] = self.scalars[j].clone();
        }
        rows
    }

    /// Span certificate against a curve: the matrix `g` with
    /// `f_i o A = sum_nu g[i][nu] f_nu` when every composed form stays in the
    /// span of the defining forms, `None` otherwise.
    ///
    /// A k-th power diagonal form `sum_j w_j x_j^k` lies in the span exactly
    /// when `w_1 = sum_nu lh_nu w_{3+nu}` and `w_2 = sum_nu w_{3+nu}`, with
    /// the trailing coefficients as span coordinates.
    pub fn certify(&self, c: &CurveSpec) -> Result<Option<Vec<Vec<FieldElement>>>> {
        if self.dim() != c.n() + 1 {
            return Err(Error::Invalid("automorphism dimension mismatch".into()));
        }
        if &self.field != c.field() {
            return Err(Error::MixedFields(self.field.name(), c.field().name()));
        }
        let lh = c.lambda_hats();
        let u: Vec<FieldElement> = self
            .scalars
            .iter()
            .map(|s| s.pow(c.k()))
            .collect::<Result<Vec<_>>>()?;
        let mut cert = Vec::with_capacity(c.n() - 1);
        for i in 0..c.n() - 1 {
            let mut w = vec![self.field.zero(); c.n() + 1];
            w[self.perm[0]] = lh[i].mul(&u[0])?;
            w[self.perm[1]] = u[1].clone();
            w[self.perm[2 + i]] = u[2 + i].clone();
            let g: Vec<FieldElement> = w[2..].to_vec();
            let mut s1 = self.field.zero();
            let mut s2 = self.field.zero();
            for (nu, gv) in g.iter().enumerate() {
                s1 = s1.add(&lh[nu].mul(gv)?)?;
                s2 = s2.add(gv)?;
            }
            if w[0] != s1 || w[1] != s2 {
                return Ok(None);
            }
            cert.push(g);
        }
        Ok(Some(cert))
    }
}

impl PartialOrd for MonomialAut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonomialAut {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.perm, &self.scalars).cmp(&(&other.perm, &other.scalars))
    }
}

impl fmt::Display for MonomialAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|j| format!("x{} -> ({})*x{}", j + 1, self.scalars[j], self.perm[j] + 1))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The deck transformations `phi_1, ..., phi_{n+1}`: `phi_j` scales the j-th
/// coordinate by a fixed primitive k-th root of unity. They generate
/// `H0 = Z_k^n`, and the product of all of them is the projective identity.
pub fn h0_generators(c: &CurveSpec) -> Result<Vec<MonomialAut>> {
    let zeta = roots::primitive_kth_root(c.field(), c.k())?;
    let m = c.n() + 1;
    let mut gens = Vec::with_capacity(m);
    for j in 0..m {
        let mut scalars = vec![c.field().one(); m];
        scalars[j] = zeta.clone();
        gens.push(MonomialAut::new((0..m).collect(), scalars)?);
    }
    Ok(gens)
}

/// Membership in `H0`: trivial permutation and every scalar a k-th root of
/// unity.
pub fn is_h0_member(a: &MonomialAut, k: u64) -> Result<bool> {
    if a.perm().iter().enumerate().any(|(j, &i)| j != i) {
        return Ok(false);
    }
    for s in a.scalars() {
        if !s.pow(k)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closure of a generating set under composition, with a size cap.
pub fn generate_group(gens: &[MonomialAut], cap: usize) -> Result<Vec<MonomialAut>> {
    let Some(first) = gens.first() else {
        return Err(Error::Invalid("empty generating set".into()));
    };
    let mut seen: BTreeSet<MonomialAut> = BTreeSet::new();
    seen.insert(MonomialAut::identity(first.field(), first.dim()));
    let mut frontier: Vec<MonomialAut> = seen.iter().cloned().collect();
    while let Some(a) = frontier.pop() {
        for g in gens {
            let next = g.compose(&a)?;
            if seen.len() >= cap && !seen.contains(&next) {
                return Err(Error::Budget(format!("group closure exceeds cap {cap}")));
            }
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Multivariate polynomials as exponent-vector maps, just rich enough to
/// expand `f_i o A` for a dense matrix.
type Poly = BTreeMap<Vec<u16>, FieldElement>;

fn poly_insert(p: &mut Poly, exp: Vec<u16>, coeff: FieldElement) -> Result<()> {
    if coeff.is_zero() {
        return Ok(());
    }
    match p.remove(&exp) {
        None => {
            p.insert(exp, coeff);
        }
        Some(old) => {
            let sum = old.add(&coeff)?;
            if !sum.is_zero() {
                p.insert(exp, sum);
            }
        }
    }
    Ok(())
}

fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let exp: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            poly_insert(&mut out, exp, ca.mul(cb)?)?;
        }
    }
    Ok(out)
}

fn linear_form(row: &[FieldElement]) -> Result<Poly> {
    let m = row.len();
    let mut p = Poly::new();
    for (j, c) in row.iter().enumerate() {
        let mut exp = vec![0u16; m];
        exp[j] = 1;
        poly_insert(&mut p, exp, c.clone())?;
    }
    Ok(p)
}

/// Decides whether a dense invertible matrix is a linear automorphism of the
/// curve by full multinomial expansion of every composed form, returning the
/// span certificate on success. This is the reference path; the monomial
/// machinery must agree with it.
pub fn is_linear_automorphism(
    c: &CurveSpec,
    a: &[Vec<FieldElement>],
) -> Result<Option<Vec<Vec<FieldElement>>>> {
    let m = c.n() + 1;
    if a.len() != m || a.iter().any(|r| r.len() != m) {
        return Err(Error::Invalid("matrix must be (n+1) x (n+1)".into()));
    }
    if la::rank(a.to_vec())? != m {
        return Err(Error::Invalid("matrix is singular".into()));
    }
    let field = c.field().clone();
    let lh = c.lambda_hats();
    // k-th powers of the substituted coordinate forms
    let mut powers: Vec<Poly> = Vec::with_capacity(m);
    for row in a {
        let lin = linear_form(row)?;
        let mut acc = lin.clone();
        for _ in 1..c.k() {
            acc = poly_mul(&acc, &lin)?;
        }
        powers.push(acc);
    }
    let mut cert = Vec::with_capacity(c.n() - 1);
    for i in 0..c.n() - 1 {
        // f_i o A = lh_i L_1^k + L_2^k + L_{3+i}^k
        let mut total = Poly::new();
        for (exp, co) in &powers[0] {
            poly_insert(&mut total, exp.clone(), lh[i].mul(co)?)?;
        }
        for (exp, co) in &powers[1] {
            poly_insert(&mut total, exp.clone(), co.clone())?;
        }
        for (exp, co) in &powers[2 + i] {
            poly_insert(&mut total, exp.clone(), co.clone())?;
        }
        // split into pure k-th powers and cross terms
        let mut w = vec![field.zero(); m];
        for (exp, co) in &total {
            match exp.iter().position(|&e| e > 0) {
                Some(j) if exp[j] as u64 == c.k() && exp.iter().skip(j + 1).all(|&e| e == 0) => {
                    w[j] = co.clone();
                }
                _ => return Ok(None), // cross monomial survives
            }
        }
        let g: Vec<FieldElement> = w[2..].to_vec();
        let mut s1 = field.zero();
        let mut s2 = field.zero();
        for (nu, gv) in g.iter().enumerate() {
            s1 = s1.add(&lh[nu].mul(gv)?)?;
            s2 = s2.add(gv)?;
        }
        if w[0] != s1 || w[1] != s2 {
            return Ok(None);
        }
        cert.push(g);
    }
    Ok(Some(cert))
}

/// The homogeneous linear system on `u_j = s_j^k` expressing that a monomial
/// map with coordinate permutation `sigma` sends every defining form into the
/// span of the forms: two equations per form, unknowns `u_1, ..., u_{n+1}`.
fn scalar_power_system(c: &CurveSpec, sigma: &[usize]) -> Result<Vec<Vec<FieldElement>>> {
    let field = c.field().clone();
    let m = c.n() + 1;
    let lh = c.lambda_hats();
    let mut rows = Vec::with_capacity(2 * (c.n() - 1));
    for i in 0..c.n() - 1 {
        // w[sigma(1)] = lh_i u_1, w[sigma(2)] = u_2, w[sigma(3+i)] = u_{3+i}
        let mut w_coeff: Vec<Option<(usize, FieldElement)>> = vec![None; m];
        w_coeff[sigma[0]] = Some((0, lh[i].clone()));
        w_coeff[sigma[1]] = Some((1, field.one()));
        w_coeff[sigma[2 + i]] = Some((2 + i, field.one()));
        // conditions: w_1 = sum_nu lh_nu w_{3+nu}; w_2 = sum_nu w_{3+nu}
        let mut row1 = vec![field.zero(); m];
        let mut row2 = vec![field.zero(); m];
        if let Some((j, co)) = &w_coeff[0] {
            row1[*j] = row1[*j].add(co)?;
        }
        if let Some((j, co)) = &w_coeff[1] {
            row2[*j] = row2[*j].add(co)?;
        }
        for nu in 0..c.n() - 1 {
            if let Some((j, co)) = &w_coeff[2 + nu] {
                row1[*j] = row1[*j].sub(&lh[nu].mul(co)?)?;
                row2[*j] = row2[*j].sub(co)?;
            }
        }
        rows.push(row1);
        rows.push(row2);
    }
    Ok(rows)
}

/// Solves the scalar-power system for `sigma`; `None` when only the zero
/// solution exists or a coordinate is forced to vanish, otherwise the unique
/// projective solution normalized to `u_1 = 1`.
fn solve_scalar_powers(c: &CurveSpec, sigma: &[usize]) -> Result<Option<Vec<FieldElement>>> {
    let rows = scalar_power_system(c, sigma)?;
    let basis = la::kernel_basis(c.field(), &rows, c.n() + 1)?;
    match basis.len() {
        0 => Ok(None),
        1 => {
            let v = &basis[0];
            if v.iter().any(|x| x.is_zero()) {
                return Ok(None);
            }
            let norm = v[0].inv()?;
            let u = v
                .iter()
                .map(|x| x.mul(&norm))
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(u))
        }
        d => Err(Error::Internal(format!(
            "scalar-power system has kernel dimension {d}; forms are degenerate"
        ))),
    }
}

/// The coordinate permutation a lift of `T` must use: coordinate `x_t` cuts
/// the fiber over the t-th branch value, and `A({x_m = 0}) = {x_j = 0}`
/// forces `sigma(j) = m` with `T(beta_m) = beta_j`.
fn permutation_from_moebius(c: &CurveSpec, t: &MoebiusMap) -> Result<Vec<usize>> {
    let branch = c.branch_values();
    let m = branch.len();
    let mut sigma = vec![usize::MAX; m];
    for (idx, beta) in branch.iter().enumerate() {
        let image = t.apply(beta)?;
        let Some(target) = branch.iter().position(|b| *b == image) else {
            return Err(Error::Invalid(format!(
                "Moebius map does not preserve the branch set: {beta} -> {image}"
            )));
        };
        sigma[target] = idx;
    }
    if sigma.iter().any(|&v| v == usize::MAX) {
        return Err(Error::Invalid(
            "Moebius map is not injective on the branch set".into(),
        ));
    }
    Ok(sigma)
}

/// The k-th root extractions a lift of `T` needs: the solved scalar powers.
pub fn lift_root_requirements(c: &CurveSpec, t: &MoebiusMap) -> Result<Vec<(FieldElement, u64)>> {
    let sigma = permutation_from_moebius(c, t)?;
    let Some(u) = solve_scalar_powers(c, &sigma)? else {
        return Err(Error::Property(format!(
            "branch stabilizer element {t} admits no monomial lift shape"
        )));
    };
    Ok(u.into_iter().map(|x| (x, c.k())).collect())
}

/// All lifts of a branch-set stabilizer element to linear automorphisms:
/// exactly `k^n` maps (one `H0`-coset) when every needed k-th root exists,
/// sorted canonically with the designated lift (lexicographically smallest
/// scalar vector) first. Every returned map carries a verified certificate.
pub fn lift_moebius(c: &CurveSpec, t: &MoebiusMap) -> Result<Vec<MonomialAut>> {
    let sigma = permutation_from_moebius(c, t)?;
    let Some(u) = solve_scalar_powers(c, &sigma)? else {
        return Err(Error::Property(format!(
            "branch stabilizer element {t} admits no monomial lift shape"
        )));
    };
    let mut menus: Vec<Vec<FieldElement>> = Vec::with_capacity(u.len());
    let mut missing = Vec::new();
    for (j, uj) in u.iter().enumerate() {
        if j == 0 {
            menus.push(vec![c.field().one()]); // normalization pins s_1 = 1
            continue;
        }
        let r = roots::kth_roots(uj, c.k())?;
        if r.is_empty() {
            missing.push(format!("u_{} = {uj}", j + 1));
        }
        menus.push(r);
    }
    if !missing.is_empty() {
        return Err(Error::MissingRoots {
            k: c.k(),
            field: c.field().name(),
            missing: missing.join(", "),
        });
    }
    let mut out = Vec::new();
    for choice in menus.iter().map(|m| m.iter().cloned()).multi_cartesian_product() {
        let aut = MonomialAut::new(sigma.clone(), choice)?;
        if aut.certify(c)?.is_none() {
            return Err(Error::Internal(format!(
                "solved lift of {t} fails certification"
            )));
        }
        out.push(aut);
    }
    out.sort();
    Ok(out)
}

/// The Moebius map on the base induced by a monomial automorphism, computed
/// symbolically: with `u_j = s_j^k` and the relations `x_1^k = x_1^k`,
/// `x_2^k = -X x_1^k`, `x_{3+i}^k = (X - lh_i) x_1^k` on the curve,
/// `X o A = -u_2 l_{sigma(2)}(X) / (u_1 l_{sigma(1)}(X))`.
pub fn induced_base_map(c: &CurveSpec, a: &MonomialAut) -> Result<MoebiusMap> {
    if a.dim() != c.n() + 1 {
        return Err(Error::Invalid("automorphism dimension mismatch".into()));
    }
    let field = c.field().clone();
    let lh = c.lambda_hats();
    // l_m(X) = alpha_m X + beta_m per coordinate m
    let line = |m: usize| -> (FieldElement, FieldElement) {
        match m {
            0 => (field.zero(), field.one()),
            1 => (field.from_int(-1), field.zero()),
            _ => (field.one(), lh[m - 2].neg()),
        }
    };
    let u0 = a.scalars()[0].pow(c.k())?;
    let u1 = a.scalars()[1].pow(c.k())?;
    let (a0, b0) = line(a.perm()[0]);
    let (a1, b1) = line(a.perm()[1]);
    MoebiusMap::new(
        u1.neg().mul(&a1)?,
        u1.neg().mul(&b1)?,
        u0.clone().mul(&a0)?,
        u0.mul(&b0)?,
    )
}

/// One lifted generator in a group report: the stabilizer element, its
/// permutation of the branch values, the designated lift, and the lift's
/// span certificate.
#[derive(Debug, Clone)]
pub struct LiftedAut {
    pub moebius: MoebiusMap,
    /// 0-based images: branch value `t` maps to branch value `branch_perm[t]`.
    pub branch_perm: Vec<usize>,
    pub aut: MonomialAut,
    pub certificate: Vec<Vec<FieldElement>>,
}

/// The computed linear automorphism group of a curve.
#[derive(Debug, Clone)]
pub struct AutReport {
    /// The curve as given.
    pub base_curve: CurveSpec,
    /// The same curve over the field all lifts live in.
    pub curve: CurveSpec,
    /// Branch-set stabilizer, over the working field, canonical order.
    pub g0: Vec<MoebiusMap>,
    pub g0_order: u64,
    /// Deck group generators over the working field.
    pub h0: Vec<MonomialAut>,
    /// One designated lift per stabilizer element.
    pub lifts: Vec<LiftedAut>,
    /// `k^n |G0|`.
    pub l_order: u64,
    /// Whether every conjugate of a deck generator by a lift is in `H0`.
    pub h0_normal: bool,
    /// Whether the Hermitian-form criterion applies (`k - 1 = p^h, h >= 1`).
    pub qform_applicable: bool,
    /// Whether `gcd(k, n+1) = 1` (hypothesis under which linearity of the
    /// full automorphism group is known; recorded, not enforced).
    pub k_n1_coprime: bool,
}

/// Computes the full linear automorphism group through the exact sequence:
/// the branch stabilizer `G0`, one certified lift per element over a
/// deterministic field extension, closure and normality checks, and the
/// order `|L| = k^n |G0|`.
///
/// Finite base fields are extended automatically as needed; characteristic 0
/// reaches at most the k-th cyclotomic field and reports an error when lifts
/// need roots beyond it, pointing to finite fields instead.
pub fn full_linear_group(c: &CurveSpec) -> Result<AutReport> {
    c.ensure_nondegenerate()?;
    let g0_base = moebius_stabilizer(c.field(), &c.branch_values())?;

    // root requirements over the base field
    let mut requirements: Vec<(FieldElement, u64)> = vec![(c.field().one(), c.k())];
    for t in &g0_base {
        requirements.extend(lift_root_requirements(c, t)?);
    }

    let embedding = if c.field().characteristic() > 0 {
        let (_, emb) = roots::extend_for_roots(c.field(), &requirements)?;
        emb
    } else {
        char_zero_embedding(c.field(), c.k())?
    };
    let curve = c.embed(&embedding)?;

    if curve.field().characteristic() == 0 {
        // cyclotomic ceiling: verify requirements are satisfied there
        let mut missing = Vec::new();
        for (a, k) in &requirements {
            let img = embedding.map(a)?;
            if roots::kth_roots(&img, *k)?.is_empty() {
                missing.push(format!("{a}"));
            }
        }
        if !missing.is_empty() {
            return Err(Error::CharZeroExtension(format!(
                "lift scalars need k-th roots of {} beyond {}; use a finite field instead",
                missing.join(", "),
                curve.field().name()
            )));
        }
    }

    let h0 = h0_generators(&curve)?;
    let branch = curve.branch_values();
    let mut lifts = Vec::with_capacity(g0_base.len());
    for t_base in &g0_base {
        let entries = t_base.entries();
        let t = MoebiusMap::new(
            embedding.map(&entries[0])?,
            embedding.map(&entries[1])?,
            embedding.map(&entries[2])?,
            embedding.map(&entries[3])?,
        )?;
        let branch_perm: Vec<usize> = branch
            .iter()
            .map(|beta| {
                let image = t.apply(beta)?;
                branch
                    .iter()
                    .position(|b| *b == image)
                    .ok_or_else(|| Error::Internal("stabilizer left the branch set".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let all = lift_moebius(&curve, &t)?;
        let designated = all
            .into_iter()
            .min_by(|a, b| a.scalars().cmp(b.scalars()))
            .expect("k^n lifts");
        let certificate = designated
            .certify(&curve)?
            .ok_or_else(|| Error::Internal("designated lift lost its certificate".into()))?;
        // the lift must project back onto the stabilizer element it came from
        let induced = induced_base_map(&curve, &designated)?;
        if induced != t {
            return Err(Error::Property(format!(
                "lift of {t} induces {induced} on the base"
            )));
        }
        lifts.push(LiftedAut {
            moebius: t,
            branch_perm,
            aut: designated,
            certificate,
        });
    }

    // group axioms on the generating set: products and inverses stay certified
    let mut gens: Vec<MonomialAut> = h0.clone();
    gens.extend(lifts.iter().map(|l| l.aut.clone()));
    for a in &gens {
        if a.inverse()?.certify(&curve)?.is_none() {
            return Err(Error::Property(format!("inverse of {a} is not certified")));
        }
        for b in &gens {
            if a.compose(b)?.certify(&curve)?.is_none() {
                return Err(Error::Property(format!(
                    "product of certified maps {a} and {b} is not certified"
                )));
            }
        }
    }

    // normality of the deck group inside L
    let mut h0_normal = true;
    for l in &lifts {
        let inv = l.aut.inverse()?;
        for phi in &h0 {
            let conj = l.aut.compose(phi)?.compose(&inv)?;
            if !is_h0_member(&conj, curve.k())? {
                h0_normal = false;
            }
        }
    }

    let g0_order = g0_base.len() as u64;
    let l_order = curve
        .covering_degree()?
        .checked_mul(g0_order)
        .ok_or_else(|| Error::Invalid("group order overflows".into()))?;
    let p = curve.field().characteristic();
    let qform_applicable =
        p > 0 && matches!(arith::p_power_exponent(curve.k() - 1, p), Some(h) if h >= 1);
    let k_n1_coprime = arith::gcd(curve.k(), curve.n() as u64 + 1) == 1;

    Ok(AutReport {
        base_curve: c.clone(),
        curve,
        g0: lifts.iter().map(|l| l.moebius.clone()).collect(),
        g0_order,
        h0,
        lifts,
        l_order,
        h0_normal,
        qform_applicable,
        k_n1_coprime,
    })
}

/// The deterministic characteristic-0 ceiling: the smallest cyclotomic field
/// containing the base field and the k-th roots of unity.
fn char_zero_embedding(field: &Field, k: u64) -> Result<roots::Embedding> {
    use crate::field::FieldKind;
    if k <= 2 {
        return Ok(roots::Embedding::identity(field));
    }
    let target = match field.kind() {
        FieldKind::Rationals => Field::cyclotomic(k)?,
        FieldKind::Cyclotomic => {
            let m = field.zeta_order();
            if m % k == 0 {
                field.clone()
            } else {
                Field::cyclotomic(m / arith::gcd(m, k) * k)?
            }
        }
        _ => return Err(Error::Internal("finite field in char-0 path".into())),
    };
    roots::Embedding::new(field, &target)
}

/// The diagonal coefficient matrix of the i-th defining form:
/// `lh_i` at slot 1, `1` at slots 2 and `3+i`.
pub fn sigma_matrix(c: &CurveSpec, i: usize) -> Result<Vec<Vec<FieldElement>>> {
    if i > c.n() - 2 {
        return Err(Error::Invalid("form index out of range".into()));
    }
    let field = c.field().clone();
    let m = c.n() + 1;
    let lh = c.lambda_hats();
    let mut s = vec![vec![field.zero(); m]; m];
    s[0][0] = lh[i].clone();
    s[1][1] = field.one();
    s[2 + i][2 + i] = field.one();
    Ok(s)
}

/// Outcome of the Hermitian-form membership test in the `k - 1 = p^h` regime.
#[derive(Debug, Clone)]
pub struct QFormCertificate {
    /// `q = k - 1 = p^h`.
    pub q: u64,
    pub h: u32,
    pub pass: bool,
    /// First violated condition, as `(form index i, row nu, col mu)` in
    /// 1-based matrix coordinates; diagonal entries flag the sum relations.
    pub first_violation: Option<(usize, usize, usize)>,
    /// The coefficient matrix `b[i][mu]` with
    /// `A^t S_i A^(q) = sum_mu b[i][mu] S_mu`; present on pass.
    pub b: Option<Vec<Vec<FieldElement>>>,
}

/// Decides the matrix form of the automorphism condition when
/// `k - 1 = q = p^h`: computes `B^i = A^t S_i A^(q)` entrywise as
/// `B^i[nu][mu] = lh_i a_{1,nu} a_{1,mu}^q + a_{2,nu} a_{2,mu}^q
/// + a_{3+i,nu} a_{3+i,mu}^q` and requires every off-diagonal entry to
/// vanish, `sum_{nu >= 3} B^i[nu][nu] = B^i[2][2]`, and
/// `sum_{nu >= 3} lh_{nu-3} B^i[nu][nu] = B^i[1][1]`. Equivalent to span
/// membership for invertible `A` since Frobenius makes
/// `L^k = L * L^q` expand with no mixed q-powers.
pub fn qform_check(c: &CurveSpec, a: &[Vec<FieldElement>]) -> Result<QFormCertificate> {
    let p = c.field().characteristic();
    if p == 0 {
        return Err(Error::Invalid(
            "Hermitian-form criterion needs positive characteristic".into(),
        ));
    }
    let h = match arith::p_power_exponent(c.k() - 1, p) {
        Some(h) if h >= 1 => h,
        _ => {
            return Err(Error::Invalid(format!(
                "k - 1 = {} is not a positive power of p = {p}",
                c.k() - 1
            )))
        }
    };
    let q = c.k() - 1;
    let m = c.n() + 1;
    if a.len() != m || a.iter().any(|r| r.len() != m) {
        return Err(Error::Invalid("matrix must be (n+1) x (n+1)".into()));
    }
    let field = c.field().clone();
    let lh = c.lambda_hats();
    // q-th powers of all entries, once
    let aq: Vec<Vec<FieldElement>> = a
        .iter()
        .map(|row| row.iter().map(|x| x.pow(q)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut b_rows = Vec::with_capacity(c.n() - 1);
    for i in 0..c.n() - 1 {
        let entry = |nu: usize, mu: usize| -> Result<FieldElement> {
            let t1 = lh[i].mul(&a[0][nu])?.mul(&aq[0][mu])?;
            let t2 = a[1][nu].mul(&aq[1][mu])?;
            let t3 = a[2 + i][nu].mul(&aq[2 + i][mu])?;
            t1.add(&t2)?.add(&t3)
        };
        for nu in 0..m {
            for mu in 0..m {
                if nu != mu && !entry(nu, mu)?.is_zero() {
                    return Ok(QFormCertificate {
                        q,
                        h,
                        pass: false,
                        first_violation: Some((i, nu + 1, mu + 1)),
                        b: None,
                    });
                }
            }
        }
        let diag: Vec<FieldElement> = (0..m).map(|nu| entry(nu, nu)).collect::<Result<_>>()?;
        let mut s1 = field.zero();
        let mut s2 = field.zero();
        for nu in 2..m {
            s1 = s1.add(&lh[nu - 2].mul(&diag[nu])?)?;
            s2 = s2.add(&diag[nu])?;
        }
        if diag[1] != s2 {
            return Ok(QFormCertificate {
                q,
                h,
                pass: false,
                first_violation: Some((i, 2, 2)),
                b: None,
            });
        }
        if diag[0] != s1 {
            return Ok(QFormCertificate {
                q,
                h,
                pass: false,
                first_violation: Some((i, 1, 1)),
                b: None,
            });
        }
        b_rows.push(diag[2..].to_vec());
    }
    Ok(QFormCertificate {
        q,
        h,
        pass: true,
        first_violation: None,
        b: Some(b_rows),
    })
}

/// Cross-check oracle: enumerates every coordinate permutation, solves the
/// scalar-power system, extracts all root choices, and certifies each
/// candidate through the independent multinomial expansion. Returns the full
/// monomial automorphism group present over the curve's field, sorted.
/// Budget-guarded by `k^n (n+1)! <= budget`.
pub fn blind_monomial_search(c: &CurveSpec, budget: u64) -> Result<Vec<MonomialAut>> {
    let m = c.n() + 1;
    let factorial: u64 = (1..=m as u64).product();
    let work = c
        .covering_degree()?
        .checked_mul(factorial)
        .ok_or_else(|| Error::Budget("search space overflows".into()))?;
    if work > budget {
        return Err(Error::Budget(format!(
            "blind search needs k^n (n+1)! = {work} > budget {budget}"
        )));
    }
    let mut found = Vec::new();
    for sigma in (0..m).permutations(m) {
        let Some(u) = solve_scalar_powers(c, &sigma)? else {
            continue;
        };
        let mut menus: Vec<Vec<FieldElement>> = vec![vec![c.field().one()]];
        let mut complete = true;
        for uj in u.iter().skip(1) {
            let r = roots::kth_roots(uj, c.k())?;
            if r.is_empty() {
                complete = false;
                break;
            }
            menus.push(r);
        }
        if !complete {
            continue;
        }
        for choice in menus.iter().map(|mm| mm.iter().cloned()).multi_cartesian_product() {
            let aut = MonomialAut::new(sigma.clone(), choice)?;
            if is_linear_automorphism(c, &aut.matrix())?.is_none() {
                return Err(Error::Property(format!(
                    "scalar-power solution {aut} fails the multinomial check"
                )));
            }
            found.push(aut);
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_gf13() -> CurveSpec {
        let f = Field::prime(13).unwrap();
        CurveSpec::new(3, 3, vec![f.from_int(4)], &f).unwrap()
    }

    fn harmonic_c3() -> CurveSpec {
        let f = Field::cyclotomic(3).unwrap();
        CurveSpec::new(3, 3, vec![f.from_int(-1)], &f).unwrap()
    }

    #[test]
    fn deck_generators_have_order_k_and_trivial_product() {
        let c = harmonic_c3();
        let gens = h0_generators(&c).unwrap();
        assert_eq!(gens.len(), 4);
        for g in &gens {
            let mut acc = g.clone();
            for _ in 1..3 {
                assert!(!acc.is_identity());
                acc = acc.compose(g).unwrap();
            }
            assert!(acc.is_identity());
            assert!(is_h0_member(g, 3).unwrap());
        }
        let mut prod = MonomialAut::identity(c.field(), 4);
        for g in &gens {
            prod = prod.compose(g).unwrap();
        }
        assert!(prod.is_identity());
    }

    #[test]
    fn deck_group_has_order_k_to_the_n() {
        let c = harmonic_c3();
        let gens = h0_generators(&c).unwrap();
        let group = generate_group(&gens, 100).unwrap();
        assert_eq!(group.len(), 27);
        for g in &group {
            assert!(g.certify(&c).unwrap().is_some());
        }
    }

    #[test]
    fn swap_example_certificate_frozen() {
        // x1 <-> x2, x4 -> -x4 preserves the curve with lambda = -1:
        // f0 o A = f0, f1 o A = -f1
        let c = harmonic_c3();
        let f = c.field().clone();
        let a = MonomialAut::new(
            vec![1, 0, 2, 3],
            vec![f.one(), f.one(), f.one(), f.from_int(-1)],
        )
        .unwrap();
        let cert = a.certify(&c).unwrap().unwrap();
        assert_eq!(cert[0], vec![f.one(), f.zero()]);
        assert_eq!(cert[1], vec![f.zero(), f.from_int(-1)]);
        // the same map fails on a generic parameter
        let q = Field::cyclotomic(3).unwrap();
        let c3 = CurveSpec::new(3, 3, vec![q.from_int(3)], &q).unwrap();
        let a3 = MonomialAut::new(
            vec![1, 0, 2, 3],
            vec![q.one(), q.one(), q.one(), q.from_int(-1)],
        )
        .unwrap();
        assert!(a3.certify(&c3).unwrap().is_none());
    }

    #[test]
    fn dense_path_agrees_with_monomial_path() {
        let c = harmonic_c3();
        let f = c.field().clone();
        let a = MonomialAut::new(
            vec![1, 0, 2, 3],
            vec![f.one(), f.one(), f.one(), f.from_int(-1)],
        )
        .unwrap();
        let dense = is_linear_automorphism(&c, &a.matrix()).unwrap().unwrap();
        assert_eq!(dense, a.certify(&c).unwrap().unwrap());
        // a unipotent shear is invertible but no automorphism
        let mut shear = MonomialAut::identity(&f, 4).matrix();
        shear[0][1] = f.one();
        assert!(is_linear_automorphism(&c, &shear).unwrap().is_none());
        // singular matrices are rejected
        let mut sing = MonomialAut::identity(&f, 4).matrix();
        sing[3] = sing[2].clone();
        assert!(is_linear_automorphism(&c, &sing).is_err());
    }

    #[test]
    fn composition_and_inverse_are_exact() {
        let c = golden_gf13();
        let f = c.field().clone();
        let a = MonomialAut::new(
            vec![1, 0, 3, 2],
            vec![f.one(), f.from_int(2), f.from_int(5), f.from_int(7)],
        )
        .unwrap();
        let b = MonomialAut::new(
            vec![2, 3, 0, 1],
            vec![f.one(), f.from_int(3), f.from_int(11), f.from_int(4)],
        )
        .unwrap();
        assert!(a.compose(&a.inverse().unwrap()).unwrap().is_identity());
        // composition acts like matrix substitution on points
        let p = ProjectivePoint::new(vec![f.one(), f.from_int(2), f.from_int(3), f.from_int(4)])
            .unwrap();
        let lhs = a.compose(&b).unwrap().apply(&p).unwrap();
        let rhs = a.apply(&b.apply(&p).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lifting_the_identity_yields_the_deck_group() {
        let c = harmonic_c3();
        let id = MoebiusMap::identity(c.field());
        let lifts = lift_moebius(&c, &id).unwrap();
        assert_eq!(lifts.len(), 27);
        let group = generate_group(&h0_generators(&c).unwrap(), 100).unwrap();
        assert_eq!(lifts, group);
    }

    #[test]
    fn lifting_the_involution_contains_the_swap() {
        let c = harmonic_c3();
        let f = c.field().clone();
        // T(X) = 1/X swaps inf <-> 0 and fixes 1, -1
        let t = MoebiusMap::new(f.zero(), f.one(), f.one(), f.zero()).unwrap();
        let lifts = lift_moebius(&c, &t).unwrap();
        assert_eq!(lifts.len(), 27);
        let swap = MonomialAut::new(
            vec![1, 0, 2, 3],
            vec![f.one(), f.one(), f.one(), f.from_int(-1)],
        )
        .unwrap();
        assert!(lifts.contains(&swap));
        for l in &lifts {
            assert_eq!(induced_base_map(&c, l).unwrap(), t);
        }
    }

    #[test]
    fn missing_lift_roots_are_reported() {
        // the golden curve over GF(13) needs cube roots of 4 for T(x) = 4/x
        let c = golden_gf13();
        let f = c.field().clone();
        let t = MoebiusMap::new(f.zero(), f.from_int(4), f.one(), f.zero()).unwrap();
        assert!(matches!(
            lift_moebius(&c, &t),
            Err(Error::MissingRoots { .. })
        ));
        let req = lift_root_requirements(&c, &t).unwrap();
        assert_eq!(req.len(), 4);
    }

    #[test]
    fn full_group_of_the_golden_curve() {
        let report = full_linear_group(&golden_gf13()).unwrap();
        assert_eq!(report.g0_order, 12);
        assert_eq!(report.l_order, 324);
        assert_eq!(report.curve.field().degree(), 3);
        assert!(report.h0_normal);
        assert!(!report.qform_applicable);
        assert_eq!(report.lifts.len(), 12);
    }

    #[test]
    fn full_group_of_a_generic_cousin() {
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(3, 3, vec![f.from_int(3)], &f).unwrap();
        let report = full_linear_group(&c).unwrap();
        assert_eq!(report.g0_order, 4);
        assert_eq!(report.l_order, 108);
        assert!(report.h0_normal);
    }

    #[test]
    fn full_group_with_trivial_stabilizer_is_the_deck_group() {
        let q = Field::rationals();
        let c = CurveSpec::new(2, 4, vec![q.from_int(2), q.from_int(5)], &q).unwrap();
        let report = full_linear_group(&c).unwrap();
        assert_eq!(report.g0_order, 1);
        assert_eq!(report.l_order, 16);
        assert_eq!(report.curve.field(), &q); // sqrt(1) exists already
        assert!(report.h0_normal);
        assert!(report.k_n1_coprime);
    }

    #[test]
    fn char_zero_lifts_stop_at_the_cyclotomic_ceiling() {
        // the harmonic curve's 4-cycles need cube roots of 2
        let report = full_linear_group(&harmonic_c3());
        assert!(matches!(report, Err(Error::CharZeroExtension(_))));
        // the same curve over GF(13) extends and closes
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(3, 3, vec![f.from_int(-1)], &f).unwrap();
        let report = full_linear_group(&c).unwrap();
        assert_eq!(report.g0_order, 8);
        assert_eq!(report.l_order, 216);
        assert_eq!(report.curve.field().degree(), 3);
    }

    #[test]
    fn degenerate_curves_are_refused() {
        let q = Field::rationals();
        let c = CurveSpec::new(2, 3, vec![q.from_int(3)], &q).unwrap();
        assert!(matches!(
            full_linear_group(&c),
            Err(Error::DegenerateGenus { .. })
        ));
    }

    #[test]
    fn qform_accepts_the_deck_group_and_identity() {
        let f = Field::extension(2, 2).unwrap();
        let omega = f.generator().unwrap();
        let c = CurveSpec::new(3, 3, vec![omega], &f).unwrap();
        let id = MonomialAut::identity(&f, 4);
        let cert = qform_check(&c, &id.matrix()).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.q, 2);
        let b = cert.b.unwrap();
        for (i, row) in b.iter().enumerate() {
            for (nu, v) in row.iter().enumerate() {
                assert_eq!(v.is_one(), i == nu);
                assert_eq!(v.is_zero(), i != nu);
            }
        }
        for phi in h0_generators(&c).unwrap() {
            assert!(qform_check(&c, &phi.matrix()).unwrap().pass);
        }
    }

    #[test]
    fn qform_rejects_shears_and_matches_the_span_test() {
        let f = Field::extension(2, 2).unwrap();
        let omega = f.generator().unwrap();
        let c = CurveSpec::new(3, 3, vec![omega.clone()], &f).unwrap();
        let mut shear = MonomialAut::identity(&f, 4).matrix();
        shear[0][1] = omega;
        let cert = qform_check(&c, &shear).unwrap();
        assert!(!cert.pass);
        assert!(cert.first_violation.is_some());
        assert!(is_linear_automorphism(&c, &shear).unwrap().is_none());
    }

    #[test]
    fn qform_needs_the_hermitian_regime() {
        let c = golden_gf13(); // k - 1 = 2 is not a power of 13
        let id = MonomialAut::identity(c.field(), 4).matrix();
        assert!(qform_check(&c, &id).is_err());
        let q = Field::rationals();
        let cq = CurveSpec::new(3, 3, vec![q.from_int(2)], &q).unwrap();
        let idq = MonomialAut::identity(&q, 4).matrix();
        assert!(qform_check(&cq, &idq).is_err());
    }

    #[test]
    fn blind_search_agrees_with_the_exact_sequence() {
        let q = Field::rationals();
        let c = CurveSpec::new(2, 4, vec![q.from_int(2), q.from_int(5)], &q).unwrap();
        let found = blind_monomial_search(&c, 1_000_000).unwrap();
        assert_eq!(found.len(), 16);
        for a in &found {
            assert!(is_h0_member(a, 2).unwrap());
        }
        // budget guard trips when the bound is too small
        assert!(matches!(
            blind_monomial_search(&c, 100),
            Err(Error::Budget(_))
        ));
    }
}
