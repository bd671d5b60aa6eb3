//! Curves of generalized Fermat type as complete intersections.
//!
//! A curve of type `(k, n)` with parameters `lambda_1, ..., lambda_{n-2}`
//! lives in projective `n`-space with 1-based coordinates `x1, ..., x_{n+1}`
//! and is cut out by the `n - 1` forms
//!
//! ```text
//! f_i = lh_i x1^k + x2^k + x_{3+i}^k,       i = 0, ..., n-2,
//! ```
//!
//! with `lh_0 = 1` and `lh_i = lambda_i`. Distinct parameters outside
//! `{0, 1}` make the intersection nonsingular. The map
//! `X = -x2^k / x1^k` realizes the curve as a cover of the projective line of
//! degree `k^n`, fully branched over `inf, 0, 1, lambda_1, ..., lambda_{n-2}`:
//! the fiber over the `j`-th branch value is the hyperplane section
//! `{x_j = 0}`, which carries `k^{n-1}` points.

use crate::field::{roots, Field, FieldElement};
use crate::moebius::P1Value;
use crate::{la, Error, Result};
use itertools::Itertools;
use std::cmp::Ordering;
use std::fmt;

/// A validated curve: type `(k, n)`, coefficient field, and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    k: u64,
    n: usize,
    field: Field,
    lambdas: Vec<FieldElement>,
}

impl CurveSpec {
    pub fn new(k: u64, n: usize, lambdas: Vec<FieldElement>, field: &Field) -> Result<CurveSpec> {
        if k < 2 {
            return Err(Error::Invalid("exponent k must be at least 2".into()));
        }
        if n < 2 {
            return Err(Error::Invalid("ambient dimension n must be at least 2".into()));
        }
        if lambdas.len() != n - 2 {
            return Err(Error::Invalid(format!(
                "type (k={k}, n={n}) needs exactly {} parameters, got {}",
                n - 2,
                lambdas.len()
            )));
        }
        let p = field.characteristic();
        if p != 0 && k % p == 0 {
            return Err(Error::Invalid(format!(
                "exponent k = {k} must be coprime to the characteristic {p}"
            )));
        }
        for l in &lambdas {
            if l.field() != field {
                return Err(Error::MixedFields(l.field().name(), field.name()));
            }
            if l.is_zero() || l.is_one() {
                return Err(Error::Invalid(
                    "parameters must avoid 0 and 1 (degenerate intersection)".into(),
                ));
            }
        }
        for (i, a) in lambdas.iter().enumerate() {
            for b in lambdas.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::Invalid(format!(
                        "parameters must be pairwise distinct; {a} repeats"
                    )));
                }
            }
        }
        Ok(CurveSpec {
            k,
            n,
            field: field.clone(),
            lambdas,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn lambdas(&self) -> &[FieldElement] {
        &self.lambdas
    }

    /// The coefficient list `lh_0 = 1, lh_1 = lambda_1, ...` of length `n-1`.
    pub fn lambda_hats(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.n - 1);
        out.push(self.field.one());
        out.extend(self.lambdas.iter().cloned());
        out
    }

    /// `k^e` as a u64, guarding overflow.
    fn k_pow(&self, e: u32) -> Result<u64> {
        self.k
            .checked_pow(e)
            .ok_or_else(|| Error::Invalid(format!("k^{e} overflows for k = {}", self.k)))
    }

    /// Degree of the quotient map to the line: `k^n`.
    pub fn covering_degree(&self) -> Result<u64> {
        self.k_pow(self.n as u32)
    }

    /// Points in each branch fiber: `k^{n-1}`.
    pub fn fiber_size(&self) -> Result<u64> {
        self.k_pow(self.n as u32 - 1)
    }

    /// The genus `1 + (k^{n-1}/2)((n-1)(k-1) - 2)`.
    pub fn genus(&self) -> Result<i64> {
        let kn1 = self.fiber_size()? as i128;
        let t = (self.n as i128 - 1) * (self.k as i128 - 1) - 2;
        let val = 1 + kn1 * t / 2;
        debug_assert_eq!((kn1 * t) % 2, 0);
        i64::try_from(val).map_err(|_| Error::Invalid("genus overflows i64".into()))
    }

    /// Degree of the canonical sheaf: `((n-1)(k-1) - 2) k^{n-1} = 2g - 2`.
    pub fn canonical_degree(&self) -> Result<i64> {
        let kn1 = self.fiber_size()? as i128;
        let t = (self.n as i128 - 1) * (self.k as i128 - 1) - 2;
        i64::try_from(t * kn1).map_err(|_| Error::Invalid("canonical degree overflows i64".into()))
    }

    /// True when the genus is at most 1; group and osculation theory assumes
    /// genus at least 2 and refuses such curves.
    pub fn is_degenerate(&self) -> bool {
        (self.n as i64 - 1) * (self.k as i64 - 1) <= 2
    }

    pub fn ensure_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateGenus {
                k: self.k,
                n: self.n as u64,
            })
        } else {
            Ok(())
        }
    }

    /// Value of the `i`-th defining form at homogeneous coordinates
    /// (0-based slice of length `n+1`).
    pub fn form_value(&self, i: usize, coords: &[FieldElement]) -> Result<FieldElement> {
        if i > self.n - 2 || coords.len() != self.n + 1 {
            return Err(Error::Invalid("form index or coordinate length out of range".into()));
        }
        let lh = if i == 0 {
            self.field.one()
        } else {
            self.lambdas[i - 1].clone()
        };
        let a = lh.mul(&coords[0].pow(self.k)?)?;
        let b = coords[1].pow(self.k)?;
        let c = coords[2 + i].pow(self.k)?;
        a.add(&b)?.add(&c)
    }

    /// Human-readable equations, `f0 = x1^k + x2^k + x3^k` first.
    pub fn form_strings(&self) -> Vec<String> {
        let k = self.k;
        self.lambda_hats()
            .iter()
            .enumerate()
            .map(|(i, lh)| {
                let lead = if lh.is_one() {
                    format!("x1^{k}")
                } else {
                    format!("({lh})*x1^{k}")
                };
                format!("f{i} = {lead} + x2^{k} + x{}^{k}", 3 + i)
            })
            .collect()
    }

    pub fn contains(&self, p: &ProjectivePoint) -> Result<bool> {
        if p.field() != &self.field {
            return Err(Error::MixedFields(p.field().name(), self.field.name()));
        }
        for i in 0..self.n - 1 {
            if !self.form_value(i, p.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rank of the `(n-1) x (n+1)` Jacobian matrix of the forms at a curve
    /// point; nonsingularity means this is always `n - 1`.
    pub fn jacobian_rank_at(&self, p: &ProjectivePoint) -> Result<usize> {
        if !self.contains(p)? {
            return Err(Error::Invalid("Jacobian requested off the curve".into()));
        }
        let kf = self.field.from_int(self.k as i64);
        let lh = self.lambda_hats();
        let mut rows = Vec::with_capacity(self.n - 1);
        for i in 0..self.n - 1 {
            let mut row = vec![self.field.zero(); self.n + 1];
            row[0] = lh[i].mul(&kf)?.mul(&p.coords()[0].pow(self.k - 1)?)?;
            row[1] = kf.mul(&p.coords()[1].pow(self.k - 1)?)?;
            row[2 + i] = kf.mul(&p.coords()[2 + i].pow(self.k - 1)?)?;
            rows.push(row);
        }
        la::rank(rows)
    }

    /// The k-th root extractions needed to write down `{x_j = 0} n C` over
    /// the coefficient field: pass to `extend_for_roots` when absent.
    pub fn fixed_point_root_requirements(&self, j: usize) -> Result<Vec<(FieldElement, u64)>> {
        if j < 1 || j > self.n + 1 {
            return Err(Error::Invalid(format!(
                "coordinate index {j} outside 1..={}",
                self.n + 1
            )));
        }
        let lh = self.lambda_hats();
        let minus_one = self.field.from_int(-1);
        let mut req = Vec::new();
        match j {
            1 => {
                // x2^k + x_{3+i}^k = 0
                req.push((minus_one, self.k));
            }
            2 => {
                // lh_i x1^k + x_{3+i}^k = 0
                for l in &lh {
                    req.push((l.neg(), self.k));
                }
            }
            _ => {
                let i0 = j - 3;
                // x2^k = -lh_{i0} x1^k, then x_{3+i}^k = (lh_{i0} - lh_i) x1^k
                req.push((lh[i0].neg(), self.k));
                for (i, l) in lh.iter().enumerate() {
                    if i != i0 {
                        req.push((lh[i0].sub(l)?, self.k));
                    }
                }
            }
        }
        Ok(req)
    }

    /// Root extractions for all `n + 1` hyperplane sections at once.
    pub fn all_fixed_root_requirements(&self) -> Result<Vec<(FieldElement, u64)>> {
        let mut req = Vec::new();
        for j in 1..=self.n + 1 {
            req.extend(self.fixed_point_root_requirements(j)?);
        }
        Ok(req)
    }

    /// The hyperplane section `{x_j = 0} n C`, a single fiber of the quotient
    /// map with exactly `k^{n-1}` points, sorted canonically. Errors when the
    /// field lacks the required roots.
    pub fn fixed_points(&self, j: usize) -> Result<Vec<ProjectivePoint>> {
        if j < 1 || j > self.n + 1 {
            return Err(Error::Invalid(format!(
                "coordinate index {j} outside 1..={}",
                self.n + 1
            )));
        }
        let lh = self.lambda_hats();
        let minus_one = self.field.from_int(-1);
        // per-coordinate root menus for the free coordinates
        let menus: Vec<Vec<FieldElement>> = match j {
            1 => {
                let r = self.need_roots(&minus_one)?;
                vec![r; self.n - 1]
            }
            2 => lh
                .iter()
                .map(|l| self.need_roots(&l.neg()))
                .collect::<Result<_>>()?,
            _ => {
                let i0 = j - 3;
                let mut m = vec![self.need_roots(&lh[i0].neg())?];
                for (i, l) in lh.iter().enumerate() {
                    if i != i0 {
                        m.push(self.need_roots(&lh[i0].sub(l)?)?);
                    }
                }
                m
            }
        };
        let mut out = Vec::new();
        for choice in menus.iter().map(|m| m.iter()).multi_cartesian_product() {
            let mut coords = vec![self.field.zero(); self.n + 1];
            match j {
                1 => {
                    coords[1] = self.field.one();
                    for (slot, r) in choice.iter().enumerate() {
                        coords[2 + slot] = (*r).clone();
                    }
                }
                2 => {
                    coords[0] = self.field.one();
                    for (slot, r) in choice.iter().enumerate() {
                        coords[2 + slot] = (*r).clone();
                    }
                }
                _ => {
                    let i0 = j - 3;
                    coords[0] = self.field.one();
                    coords[1] = choice[0].clone();
                    let mut slot = 1;
                    for i in 0..self.n - 1 {
                        if i != i0 {
                            coords[2 + i] = choice[slot].clone();
                            slot += 1;
                        }
                    }
                }
            }
            let p = ProjectivePoint::new(coords)?;
            debug_assert!(self.contains(&p)?);
            out.push(p);
        }
        out.sort();
        debug_assert_eq!(out.len() as u64, self.fiber_size()?);
        Ok(out)
    }

    fn need_roots(&self, a: &FieldElement) -> Result<Vec<FieldElement>> {
        let r = roots::kth_roots(a, self.k)?;
        if r.is_empty() {
            return Err(Error::MissingRoots {
                k: self.k,
                field: self.field.name(),
                missing: format!("{a}"),
            });
        }
        Ok(r)
    }

    /// The quotient map to the line, `X = -x2^k / x1^k`.
    pub fn base_map(&self, p: &ProjectivePoint) -> Result<P1Value> {
        if !self.contains(p)? {
            return Err(Error::Invalid("base map requested off the curve".into()));
        }
        let x1 = &p.coords()[0];
        if x1.is_zero() {
            return Ok(P1Value::Infinity);
        }
        let num = p.coords()[1].pow(self.k)?.neg();
        Ok(P1Value::Finite(num.div(&x1.pow(self.k)?)?))
    }

    /// The branch values `[inf, 0, 1, lambda_1, ..., lambda_{n-2}]` of the
    /// quotient map, in the fixed order matching coordinates `x1, ..., x_{n+1}`.
    pub fn branch_values(&self) -> Vec<P1Value> {
        let mut out = vec![
            P1Value::Infinity,
            P1Value::Finite(self.field.zero()),
            P1Value::Finite(self.field.one()),
        ];
        out.extend(self.lambdas.iter().cloned().map(P1Value::Finite));
        out
    }

    /// The same curve over a larger field through a canonical embedding.
    pub fn embed(&self, emb: &roots::Embedding) -> Result<CurveSpec> {
        if emb.from_field() != &self.field {
            return Err(Error::MixedFields(self.field.name(), emb.from_field().name()));
        }
        let lambdas = self
            .lambdas
            .iter()
            .map(|l| emb.map(l))
            .collect::<Result<Vec<_>>>()?;
        CurveSpec::new(self.k, self.n, lambdas, emb.to_field())
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls: Vec<String> = self.lambdas.iter().map(|l| l.to_string()).collect();
        write!(
            f,
            "F({}, {}; [{}]) over {}",
            self.k,
            self.n,
            ls.join(", "),
            self.field.name()
        )
    }
}

/// A point of projective `n`-space in canonical form: the first nonzero
/// coordinate is 1, so equality and ordering are coefficient-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<FieldElement>) -> Result<ProjectivePoint> {
        if coords.is_empty() {
            return Err(Error::Invalid("projective point needs coordinates".into()));
        }
        let field = coords[0].field().clone();
        for c in &coords {
            if c.field() != &field {
                return Err(Error::MixedFields(c.field().name(), field.name()));
            }
        }
        let Some(first) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(Error::Invalid("projective point cannot be the zero vector".into()));
        };
        let scale = coords[first].inv()?;
        let coords = coords
            .into_iter()
            .map(|c| c.mul(&scale))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// 1-based coordinate accessor matching the `x1, ..., x_{n+1}` naming.
    pub fn x(&self, j: usize) -> &FieldElement {
        &self.coords[j - 1]
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> &Field {
        self.coords[0].field()
    }

    /// Coordinates mapped through a field embedding.
    pub fn embed(&self, emb: &roots::Embedding) -> Result<ProjectivePoint> {
        let coords = self
            .coords
            .iter()
            .map(|c| emb.map(c))
            .collect::<Result<Vec<_>>>()?;
        ProjectivePoint::new(coords)
    }

    /// Indices (1-based) of vanishing coordinates.
    pub fn zero_coordinates(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl PartialOrd for ProjectivePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjectivePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}
