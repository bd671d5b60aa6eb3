//! Hyper-osculation data from local power-series expansions.
//!
//! At a point `P` of the embedded curve the coordinate functions expand in a
//! local uniformizer `z`. The strictly increasing orders `h_0 < ... < h_n`
//! realizable by linear combinations of the coordinate series are the Hermite
//! invariants at `P`; the differences `b_s = h_{s+1} - h_s - 1` are the
//! ramification indices of the osculating flag, and `P` hyper-osculates when
//! `h_n > n`. Over fields of characteristic 0 or `p > k^{n-1}` the
//! hyper-osculating points are exactly the `(n+1) k^{n-1}` points with a zero
//! coordinate, with invariants `(0, 1, k, 2k, ..., (n-1)k)`.
//!
//! Fibers of the covering carry closed-form charts: on the fiber `x_2 = 0`
//! the curve is `[1 : z : r_0 (1 + z^k/lh_0)^{1/k} : ...]` with
//! `r_i^k = -lh_i`, and the binomial series for `(1+w)^{1/k}` settles every
//! coefficient; the other fibers differ only in which coordinate plays `z`.
//! Generic points use `x_2/x_1 - const` as uniformizer and k-th root series
//! around nonzero constants.
//!
//! The global counts close the Pluecker formulas: with `d_{-1} = 0` and
//! `d_0 = k^{n-1}` the recurrence `d_{s+1} = 2d_s - d_{s-1} + (2g-2) - b_s`
//! over the summed ramification indices must return to `d_n = 0`, and the
//! weighted totals satisfy
//! `sum_l (n-l) b_l = n(n+1)(g-1) + (n+1) k^{n-1}`.

use crate::curve::{CurveSpec, ProjectivePoint};
use crate::field::{roots, Field, FieldElement};
use crate::series::{kth_root_series, TruncatedSeries};
use crate::{la, Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// How a chart sits on the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    /// Fixed point on the fiber `x_j = 0` (1-based coordinate index).
    Fixed(usize),
    /// Point with all coordinates nonzero.
    Generic,
}

/// A truncated local parametrization of the embedding at one point: the
/// `n+1` coordinate series in a uniformizer `z`, exactly satisfying the
/// defining forms modulo `z^N`.
#[derive(Debug, Clone)]
pub struct LocalChart {
    point: ProjectivePoint,
    kind: ChartKind,
    k: u64,
    truncation: usize,
    series: Vec<TruncatedSeries>,
}

impl LocalChart {
    pub fn point(&self) -> &ProjectivePoint {
        &self.point
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Coordinate series, index `j` holding `x_{j+1}` as a series in `z`.
    pub fn series(&self) -> &[TruncatedSeries] {
        &self.series
    }
}

/// `1 + c z^k` to precision `n`.
fn one_plus_czk(field: &Field, c: &FieldElement, k: u64, n: usize) -> TruncatedSeries {
    let mut coeffs = vec![field.zero(); n];
    coeffs[0] = field.one();
    if (k as usize) < n {
        coeffs[k as usize] = c.clone();
    }
    TruncatedSeries::from_coeffs(field, coeffs).expect("nonempty coefficients")
}

/// Expands all coordinates of the curve at `P` to precision `N`.
///
/// Points on a fiber `x_j = 0` get the closed-form binomial charts; points
/// with every coordinate nonzero get the generic chart with `x_2/x_1 - const`
/// as uniformizer. The residuals `f_i(v) mod z^N` are checked to vanish
/// before the chart is returned.
pub fn local_expansion(c: &CurveSpec, p: &ProjectivePoint, n: usize) -> Result<LocalChart> {
    if !c.contains(p)? {
        return Err(Error::Invalid("point does not lie on the curve".into()));
    }
    if n < 2 {
        return Err(Error::TruncationTooSmall {
            n,
            what: "charts need at least two coefficients".into(),
        });
    }
    let field = c.field().clone();
    let k = c.k();
    let lh = c.lambda_hats();
    let zeros = p.zero_coordinates();
    let kind = match zeros.len() {
        0 => ChartKind::Generic,
        1 => ChartKind::Fixed(zeros[0]),
        _ => return Err(Error::Internal("curve point with two zero coordinates".into())),
    };
    let z = TruncatedSeries::variable(&field, n)?;
    let one = TruncatedSeries::constant(&field.one(), n)?;
    let mut series: Vec<TruncatedSeries> = Vec::with_capacity(c.n() + 1);
    match kind {
        ChartKind::Fixed(1) => {
            // fiber over infinity: x_1 = z, x_2 = 1, x_{3+i}^k = -(1 + lh_i z^k)
            series.push(z);
            series.push(one);
            for i in 0..c.n() - 1 {
                let u = one_plus_czk(&field, &lh[i], k, n);
                let s = kth_root_series(&u, k)?;
                series.push(s.scale(p.x(3 + i))?);
            }
        }
        ChartKind::Fixed(2) => {
            // fiber over 0: x_1 = 1, x_2 = z, x_{3+i}^k = -lh_i (1 + z^k/lh_i)
            series.push(one);
            series.push(z);
            for i in 0..c.n() - 1 {
                let u = one_plus_czk(&field, &lh[i].inv()?, k, n);
                let s = kth_root_series(&u, k)?;
                series.push(s.scale(p.x(3 + i))?);
            }
        }
        ChartKind::Fixed(j) => {
            // fiber over lh_{i0}: x_{3+i0} = z, x_2^k = -lh_{i0} - z^k,
            // x_{3+i}^k = (lh_{i0} - lh_i) + z^k for i != i0
            let i0 = j - 3;
            let u2 = one_plus_czk(&field, &lh[i0].inv()?, k, n);
            let v2 = kth_root_series(&u2, k)?.scale(p.x(2))?;
            series.push(one);
            series.push(v2);
            for i in 0..c.n() - 1 {
                if i == i0 {
                    series.push(TruncatedSeries::variable(&field, n)?);
                } else {
                    let diff = lh[i0].sub(&lh[i])?;
                    let u = one_plus_czk(&field, &diff.inv()?, k, n);
                    let s = kth_root_series(&u, k)?;
                    series.push(s.scale(p.x(3 + i))?);
                }
            }
        }
        ChartKind::Generic => {
            // x_1 = 1, x_2 = x_2(P) + z, x_{3+i} = x_{3+i}(P) (u_i)^{1/k}
            // with u_i = (-lh_i - x_2^k) / x_{3+i}(P)^k, a unit series
            let v2 = one.scale(p.x(2))?.add(&TruncatedSeries::variable(&field, n)?)?;
            let v2k = v2.pow(k)?;
            series.push(one);
            series.push(v2);
            for i in 0..c.n() - 1 {
                let xv = p.x(3 + i);
                let scale = xv.pow(k)?.inv()?;
                let u = v2k
                    .add(&TruncatedSeries::constant(&lh[i], n)?)?
                    .neg()
                    .scale(&scale)?;
                let s = kth_root_series(&u, k)?;
                series.push(s.scale(xv)?);
            }
        }
    }
    // membership must persist formally
    for i in 0..c.n() - 1 {
        let residual = series[0]
            .pow(k)?
            .scale(&lh[i])?
            .add(&series[1].pow(k)?)?
            .add(&series[2 + i].pow(k)?)?;
        if !residual.is_zero() {
            return Err(Error::Internal(format!(
                "chart residual f_{i} does not vanish to order {n}"
            )));
        }
    }
    Ok(LocalChart {
        point: p.clone(),
        kind,
        k,
        truncation: n,
        series,
    })
}

/// Hermite invariants and the derived per-point data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteData {
    /// `h_0 < h_1 < ... < h_n`.
    pub h: Vec<usize>,
    /// `h_{j+2} / k` when all higher invariants are multiples of `k`.
    pub l: Option<Vec<u64>>,
    /// `b_s = h_{s+1} - h_s - 1` for `s = 0 ... n-1`.
    pub b: Vec<u64>,
    /// `h_n > n`.
    pub hyperosculating: bool,
}

impl HermiteData {
    fn from_pivots(h: Vec<usize>, k: u64) -> Result<HermiteData> {
        if h.is_empty() || h[0] != 0 {
            return Err(Error::Internal("chart lost its constant function".into()));
        }
        if h.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Internal("pivot orders are not increasing".into()));
        }
        let n = h.len() - 1;
        let b: Vec<u64> = (0..n).map(|s| (h[s + 1] - h[s] - 1) as u64).collect();
        let l = if h[2..].iter().all(|&hv| hv as u64 % k == 0) {
            Some(h[2..].iter().map(|&hv| hv as u64 / k).collect())
        } else {
            None
        };
        let hyperosculating = h[n] > n;
        Ok(HermiteData {
            h,
            l,
            b,
            hyperosculating,
        })
    }

    /// Classical means no gaps: `h = (0, 1, ..., n)`.
    pub fn is_classical(&self) -> bool {
        self.b.iter().all(|&b| b == 0)
    }
}

/// Ramification indices of the osculating flag: `b_s = h_{s+1} - h_s - 1`.
pub fn ramification_indices(h: &[usize]) -> Vec<u64> {
    (0..h.len() - 1)
        .map(|s| (h[s + 1] - h[s] - 1) as u64)
        .collect()
}

/// Extracts the Hermite invariants of a chart: the pivot columns of the
/// exact row echelon form of the `(n+1) x N` coefficient matrix, which are
/// the distinct orders realizable by linear combinations of the coordinate
/// series.
pub fn hermite_invariants(c: &CurveSpec, chart: &LocalChart) -> Result<HermiteData> {
    let needed = c.fiber_size()? as usize;
    if chart.truncation <= needed {
        return Err(Error::TruncationTooSmall {
            n: chart.truncation,
            what: format!("Hermite extraction needs more than k^(n-1) = {needed} coefficients"),
        });
    }
    let mut rows: Vec<Vec<FieldElement>> = chart
        .series
        .iter()
        .map(|s| s.coeffs().to_vec())
        .collect();
    let pivots = la::row_reduce(&mut rows)?;
    if pivots.len() < c.n() + 1 {
        return Err(Error::TruncationTooSmall {
            n: chart.truncation,
            what: format!(
                "only {} of {} invariants visible at this precision",
                pivots.len(),
                c.n() + 1
            ),
        });
    }
    HermiteData::from_pivots(pivots, chart.k)
}

/// Truncation that always suffices for the theorems' regime: `k^{n-1} + 1`.
pub fn default_truncation(c: &CurveSpec) -> Result<usize> {
    Ok(c.fiber_size()? as usize + 1)
}

/// Chart plus invariants at one point, retrying once at doubled precision
/// when the invariants do not resolve.
pub fn osculate_point(
    c: &CurveSpec,
    p: &ProjectivePoint,
    n: usize,
) -> Result<(LocalChart, HermiteData)> {
    let chart = local_expansion(c, p, n)?;
    match hermite_invariants(c, &chart) {
        Ok(hd) => Ok((chart, hd)),
        Err(Error::TruncationTooSmall { .. }) => {
            let p_char = c.field().characteristic();
            if p_char != 0 && (p_char as u128) < 2 * n as u128 {
                return Err(Error::TruncationTooSmall {
                    n,
                    what: format!("cannot retry at 2N = {}: characteristic {p_char} too small", 2 * n),
                });
            }
            let chart = local_expansion(c, p, 2 * n)?;
            let hd = hermite_invariants(c, &chart)?;
            Ok((chart, hd))
        }
        Err(e) => Err(e),
    }
}

/// One surveyed point.
#[derive(Debug, Clone)]
pub struct OscPoint {
    pub point: ProjectivePoint,
    pub data: HermiteData,
}

/// Hyper-osculation survey: every fixed point, plus random generic samples.
#[derive(Debug, Clone)]
pub struct SurveyReport {
    /// The curve over the field the survey ran on.
    pub curve: CurveSpec,
    pub truncation: usize,
    pub fixed: Vec<OscPoint>,
    pub samples: Vec<OscPoint>,
    pub all_fixed_hyperosculating: bool,
    pub all_samples_classical: bool,
    pub counterexamples: Vec<String>,
}

/// Checks the characteristic regime `p > k^{n-1}` and nondegeneracy.
fn ensure_osc_regime(c: &CurveSpec) -> Result<()> {
    c.ensure_nondegenerate()?;
    let p = c.field().characteristic();
    if p == 0 {
        return Err(Error::CharZeroExtension(format!(
            "osculation surveys run over finite fields; use a prime p > {}",
            c.fiber_size()?
        )));
    }
    if p <= c.fiber_size()? {
        return Err(Error::CharTooSmall {
            p,
            what: format!("hyper-osculation classification needs p > k^(n-1) = {}", c.fiber_size()?),
        });
    }
    Ok(())
}

/// A uniformly random field element.
fn random_element(field: &Field, rng: &mut ChaCha8Rng) -> Result<FieldElement> {
    let p = field.characteristic();
    if field.degree() < 2 {
        return Ok(field.from_int(rng.gen_range(0..p) as i64));
    }
    let g = field.generator()?;
    let mut acc = field.zero();
    // Horner over random base-p digits
    for _ in 0..field.degree() {
        acc = acc.mul(&g)?.add(&field.from_int(rng.gen_range(0..p) as i64))?;
    }
    Ok(acc)
}

/// One attempt at a random curve point with all coordinates nonzero:
/// `x_1 = 1`, random `x_2`, random k-th roots for the rest.
fn random_generic_point(
    c: &CurveSpec,
    rng: &mut ChaCha8Rng,
) -> Result<Option<ProjectivePoint>> {
    let field = c.field().clone();
    let t = random_element(&field, rng)?;
    if t.is_zero() {
        return Ok(None);
    }
    let tk = t.pow(c.k())?;
    let mut coords = vec![field.one(), t];
    for lh in c.lambda_hats() {
        let w = lh.add(&tk)?.neg();
        if w.is_zero() {
            return Ok(None);
        }
        let menu = roots::kth_roots(&w, c.k())?;
        if menu.is_empty() {
            return Ok(None);
        }
        coords.push(menu[rng.gen_range(0..menu.len())].clone());
    }
    Ok(Some(ProjectivePoint::new(coords)?))
}

/// Extends the base field until every fixed point is rational, then verifies
/// hyper-osculation at all of them and classicality at `samples` random
/// generic points. Runs over `p > k^{n-1}` only.
pub fn hyperosc_survey(c: &CurveSpec, samples: usize, seed: u64) -> Result<SurveyReport> {
    hyperosc_survey_at(c, samples, seed, None)
}

/// [`hyperosc_survey`] with an explicit truncation order instead of the
/// default `k^{n-1} + 1`.
pub fn hyperosc_survey_at(
    c: &CurveSpec,
    samples: usize,
    seed: u64,
    truncation: Option<usize>,
) -> Result<SurveyReport> {
    ensure_osc_regime(c)?;
    let mut requirements = c.all_fixed_root_requirements()?;
    requirements.push((c.field().one(), c.k()));
    let (_, emb) = roots::extend_for_roots(c.field(), &requirements)?;
    let curve = c.embed(&emb)?;
    let n = match truncation {
        Some(n) => n,
        None => default_truncation(&curve)?,
    };

    let mut fixed_points = Vec::new();
    for j in 1..=curve.n() + 1 {
        fixed_points.extend(curve.fixed_points(j)?);
    }
    let fixed: Vec<OscPoint> = fixed_points
        .into_par_iter()
        .map(|p| {
            let (_, data) = osculate_point(&curve, &p, n)?;
            Ok(OscPoint { point: p, data })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_points = Vec::with_capacity(samples);
    let mut attempts = 0usize;
    while sample_points.len() < samples {
        attempts += 1;
        if attempts > 200 * samples.max(1) {
            return Err(Error::Budget(format!(
                "could not sample {samples} generic points; field too small"
            )));
        }
        if let Some(p) = random_generic_point(&curve, &mut rng)? {
            sample_points.push(p);
        }
    }
    let sample_results: Vec<OscPoint> = sample_points
        .into_par_iter()
        .map(|p| {
            let (_, data) = osculate_point(&curve, &p, n)?;
            Ok(OscPoint { point: p, data })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counterexamples = Vec::new();
    let expected_fixed: Vec<usize> = std::iter::once(0)
        .chain(std::iter::once(1))
        .chain((1..curve.n()).map(|j| j * curve.k() as usize))
        .collect();
    for op in &fixed {
        if !op.data.hyperosculating {
            counterexamples.push(format!("fixed point {} is not hyper-osculating", op.point));
        }
        if op.data.h != expected_fixed {
            counterexamples.push(format!(
                "fixed point {} has invariants {:?}, expected {:?}",
                op.point, op.data.h, expected_fixed
            ));
        }
        if op.data.h[curve.n()] as u64 > curve.fiber_size()? {
            counterexamples.push(format!("h_n exceeds the curve degree at {}", op.point));
        }
    }
    for op in &sample_results {
        if op.data.hyperosculating {
            counterexamples.push(format!(
                "generic sample {} is hyper-osculating with h = {:?}",
                op.point, op.data.h
            ));
        }
    }
    let all_fixed_hyperosculating = fixed.iter().all(|op| op.data.hyperosculating);
    let all_samples_classical = sample_results.iter().all(|op| op.data.is_classical());
    Ok(SurveyReport {
        curve,
        truncation: n,
        fixed,
        samples: sample_results,
        all_fixed_hyperosculating,
        all_samples_classical,
        counterexamples,
    })
}

/// Global ramification totals against the Pluecker recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlueckerReport {
    /// Summed `b_s` over all fixed points, `s = 0 ... n-1`.
    pub b_totals: Vec<i128>,
    /// Theoretical targets `(0, (n+1)k^{n-1}(k-2), (n+1)k^{n-1}(k-1), ...)`.
    pub b_targets: Vec<i128>,
    pub targets_match: bool,
    /// `d_0 ... d_n` from `d_{s+1} = 2d_s - d_{s-1} + (2g-2) - b_s`.
    pub d: Vec<i128>,
    /// `d_n = 0`.
    pub closure: bool,
    /// `sum_l (n-l) b_l` and `n(n+1)(g-1) + (n+1)k^{n-1}`.
    pub totals_lhs: i128,
    pub totals_rhs: i128,
    pub totals_match: bool,
}

/// Sums the ramification indices over all fixed points and closes the
/// Pluecker recurrence from `d_{-1} = 0`, `d_0 = k^{n-1}`.
pub fn pluecker_solve(c: &CurveSpec) -> Result<PlueckerReport> {
    ensure_osc_regime(c)?;
    let mut requirements = c.all_fixed_root_requirements()?;
    requirements.push((c.field().one(), c.k()));
    let (_, emb) = roots::extend_for_roots(c.field(), &requirements)?;
    let curve = c.embed(&emb)?;
    let n = default_truncation(&curve)?;

    let mut fixed_points = Vec::new();
    for j in 1..=curve.n() + 1 {
        fixed_points.extend(curve.fixed_points(j)?);
    }
    let all_b: Vec<Vec<u64>> = fixed_points
        .into_par_iter()
        .map(|p| Ok(osculate_point(&curve, &p, n)?.1.b))
        .collect::<Result<Vec<_>>>()?;

    let nn = curve.n();
    let mut b_totals = vec![0i128; nn];
    for b in &all_b {
        for (s, &v) in b.iter().enumerate() {
            b_totals[s] += v as i128;
        }
    }
    let fixed_count = (nn as i128 + 1) * curve.fiber_size()? as i128;
    let k = curve.k() as i128;
    let mut b_targets = vec![0i128; nn];
    if nn >= 2 {
        b_targets[1] = fixed_count * (k - 2);
    }
    for t in b_targets.iter_mut().skip(2) {
        *t = fixed_count * (k - 1);
    }
    let targets_match = b_totals == b_targets;

    let g = curve.genus()? as i128;
    let mut d = vec![curve.fiber_size()? as i128];
    let mut prev = 0i128; // d_{-1}
    for s in 0..nn {
        let next = 2 * d[s] - prev + (2 * g - 2) - b_totals[s];
        prev = d[s];
        d.push(next);
    }
    let closure = d[nn] == 0;
    let totals_lhs: i128 = (0..nn).map(|l| (nn as i128 - l as i128) * b_totals[l]).sum();
    let totals_rhs = nn as i128 * (nn as i128 + 1) * (g - 1) + fixed_count;
    Ok(PlueckerReport {
        b_totals,
        b_targets,
        targets_match,
        d,
        closure,
        totals_lhs,
        totals_rhs,
        totals_match: totals_lhs == totals_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_gf13() -> CurveSpec {
        let f = Field::prime(13).unwrap();
        CurveSpec::new(2, 3, vec![f.from_int(4)], &f).unwrap()
    }

    fn golden_extended() -> CurveSpec {
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(3, 3, vec![f.from_int(4)], &f).unwrap();
        let reqs = c.all_fixed_root_requirements().unwrap();
        let (_, emb) = roots::extend_for_roots(&f, &reqs).unwrap();
        c.embed(&emb).unwrap()
    }

    #[test]
    fn fiber_chart_coefficients_frozen() {
        // fiber over 0 for k=2, lambda=4 over GF(13): the first point is
        // [1:0:5:3] and (1+z^2)^{1/2}, (1+z^2/4)^{1/2} give the columns
        let c = small_gf13();
        let f = c.field().clone();
        let p = c.fixed_points(2).unwrap()[0].clone();
        assert_eq!(
            p.coords().to_vec(),
            vec![f.one(), f.zero(), f.from_int(5), f.from_int(3)]
        );
        let chart = local_expansion(&c, &p, 5).unwrap();
        assert_eq!(chart.kind(), ChartKind::Fixed(2));
        let v3 = chart.series()[2].coeffs();
        assert_eq!(v3[0], f.from_int(5));
        assert!(v3[1].is_zero());
        assert_eq!(v3[2], f.from_int(9)); // 5/2
        assert!(v3[3].is_zero());
        assert_eq!(v3[4], f.from_int(1)); // -5/8
        let v4 = chart.series()[3].coeffs();
        assert_eq!(v4[0], f.from_int(3));
        assert_eq!(v4[2], f.from_int(2)); // 3/8
    }

    #[test]
    fn binomial_coefficients_appear_in_higher_fibers() {
        // coefficient of z^{ik} in coordinate 3+j is x(P) C(1/k,i) / lh_j^i
        use crate::series::binomial_kth_root_coeff;
        let c = golden_extended();
        let f = c.field().clone();
        let p = c.fixed_points(2).unwrap()[0].clone();
        let chart = local_expansion(&c, &p, 10).unwrap();
        let lh = c.lambda_hats();
        for j in 0..2 {
            let series = chart.series()[2 + j].coeffs();
            let x0 = p.x(3 + j);
            for i in 0..=2usize {
                let expect = x0
                    .mul(&binomial_kth_root_coeff(&f, 3, i).unwrap())
                    .unwrap()
                    .mul(&lh[j].inv().unwrap().pow(i as u64).unwrap())
                    .unwrap();
                assert_eq!(series[3 * i], expect);
                if 3 * i + 1 < 10 {
                    assert!(series[3 * i + 1].is_zero());
                }
            }
        }
    }

    #[test]
    fn all_fiber_types_expand_and_vanish() {
        let c = golden_extended();
        for j in 1..=4 {
            for p in c.fixed_points(j).unwrap() {
                let chart = local_expansion(&c, &p, 10).unwrap();
                assert_eq!(chart.kind(), ChartKind::Fixed(j));
                assert_eq!(chart.series().len(), 4);
            }
        }
    }

    #[test]
    fn char_zero_fixed_chart_works() {
        let f = Field::cyclotomic(4).unwrap();
        let c = CurveSpec::new(2, 3, vec![f.from_int(4)], &f).unwrap();
        let p = c.fixed_points(2).unwrap()[0].clone();
        let (_, hd) = osculate_point(&c, &p, 5).unwrap();
        assert_eq!(hd.h, vec![0, 1, 2, 4]);
        assert_eq!(hd.b, vec![0, 0, 1]);
        assert!(hd.hyperosculating);
    }

    #[test]
    fn golden_fixed_points_have_the_theorem_invariants() {
        let c = golden_extended();
        let p = c.fixed_points(1).unwrap()[0].clone();
        let (chart, hd) = osculate_point(&c, &p, 10).unwrap();
        assert_eq!(chart.truncation(), 10);
        assert_eq!(hd.h, vec![0, 1, 3, 6]);
        assert_eq!(hd.b, vec![0, 1, 2]);
        assert_eq!(hd.l, Some(vec![1, 2]));
        assert!(hd.hyperosculating);
        assert!(!hd.is_classical());
    }

    #[test]
    fn golden_generic_points_are_classical() {
        let c = golden_extended();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        let mut attempts = 0;
        while found < 3 {
            attempts += 1;
            assert!(attempts < 10_000, "sampling exhausted");
            let Some(p) = random_generic_point(&c, &mut rng).unwrap() else {
                continue;
            };
            let (_, hd) = osculate_point(&c, &p, 10).unwrap();
            assert_eq!(hd.h, vec![0, 1, 2, 3]);
            assert!(hd.is_classical());
            assert!(!hd.hyperosculating);
            found += 1;
        }
    }

    #[test]
    fn pivots_match_brute_force_minimal_valuations() {
        // oracle: distinct orders over all monic-leading linear combinations
        // (scaling preserves order, so these reach every achievable order)
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(2, 3, vec![f.from_int(3)], &f).unwrap();
        let combos = |chart: &LocalChart| -> Vec<usize> {
            let n = chart.truncation();
            let mut orders = std::collections::BTreeSet::new();
            for lead in 0..4usize {
                let free = 3 - lead;
                for idx in 0..13u64.pow(free as u32) {
                    let mut digits = idx;
                    let mut coeffs = vec![f.zero(); lead];
                    coeffs.push(f.one());
                    for _ in 0..free {
                        coeffs.push(f.from_int((digits % 13) as i64));
                        digits /= 13;
                    }
                    let mut combo = vec![f.zero(); n];
                    for (a, s) in coeffs.iter().zip(chart.series()) {
                        for (cc, sc) in combo.iter_mut().zip(s.coeffs()) {
                            *cc = cc.add(&a.mul(sc).unwrap()).unwrap();
                        }
                    }
                    if let Some(ord) = combo.iter().position(|x| !x.is_zero()) {
                        orders.insert(ord);
                    }
                }
            }
            orders.into_iter().collect()
        };
        let pfix = c.fixed_points(1).unwrap()[0].clone();
        let chart = local_expansion(&c, &pfix, 5).unwrap();
        let hd = hermite_invariants(&c, &chart).unwrap();
        assert_eq!(hd.h, combos(&chart));
        // [1 : 3 : 4 : 1] has every coordinate nonzero
        let pgen = ProjectivePoint::new(vec![
            f.one(),
            f.from_int(3),
            f.from_int(4),
            f.one(),
        ])
        .unwrap();
        let chart = local_expansion(&c, &pgen, 5).unwrap();
        let hd = hermite_invariants(&c, &chart).unwrap();
        assert_eq!(hd.h, combos(&chart));
    }

    #[test]
    fn truncation_guard_and_retry() {
        let c = small_gf13();
        let p = c.fixed_points(2).unwrap()[0].clone();
        let chart = local_expansion(&c, &p, 4).unwrap();
        assert!(matches!(
            hermite_invariants(&c, &chart),
            Err(Error::TruncationTooSmall { .. })
        ));
        // osculate_point retries at 2N and succeeds
        let (chart, hd) = osculate_point(&c, &p, 4).unwrap();
        assert_eq!(chart.truncation(), 8);
        assert_eq!(hd.h, vec![0, 1, 2, 4]);
    }

    #[test]
    fn survey_flags_exactly_the_fixed_points() {
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(3, 3, vec![f.from_int(4)], &f).unwrap();
        let report = hyperosc_survey(&c, 8, 42).unwrap();
        assert_eq!(report.fixed.len(), 36);
        assert_eq!(report.samples.len(), 8);
        assert!(report.all_fixed_hyperosculating);
        assert!(report.all_samples_classical);
        assert!(report.counterexamples.is_empty());
        // deterministic under the seed
        let again = hyperosc_survey(&c, 8, 42).unwrap();
        for (a, b) in report.samples.iter().zip(&again.samples) {
            assert_eq!(a.point, b.point);
        }
    }

    #[test]
    fn survey_rejects_bad_regimes() {
        let f7 = Field::prime(7).unwrap();
        let c7 = CurveSpec::new(3, 3, vec![f7.from_int(4)], &f7).unwrap();
        assert!(matches!(
            hyperosc_survey(&c7, 5, 0),
            Err(Error::CharTooSmall { .. })
        ));
        let q = Field::rationals();
        let cq = CurveSpec::new(3, 3, vec![q.from_int(4)], &q).unwrap();
        assert!(matches!(
            hyperosc_survey(&cq, 5, 0),
            Err(Error::CharZeroExtension(_))
        ));
        let f = Field::prime(13).unwrap();
        let deg = CurveSpec::new(2, 3, vec![f.from_int(4)], &f).unwrap();
        assert!(matches!(
            hyperosc_survey(&deg, 5, 0),
            Err(Error::DegenerateGenus { .. })
        ));
    }

    #[test]
    fn pluecker_closure_frozen_for_the_golden_curve() {
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(3, 3, vec![f.from_int(4)], &f).unwrap();
        let r = pluecker_solve(&c).unwrap();
        assert_eq!(r.b_totals, vec![0, 36, 72]);
        assert!(r.targets_match);
        assert_eq!(r.d, vec![9, 36, 45, 0]);
        assert!(r.closure);
        assert_eq!(r.totals_lhs, 144);
        assert_eq!(r.totals_rhs, 144);
        assert!(r.totals_match);
    }

    #[test]
    fn pluecker_closure_frozen_for_k2_n4() {
        let f = Field::prime(11).unwrap();
        let c = CurveSpec::new(2, 4, vec![f.from_int(2), f.from_int(5)], &f).unwrap();
        let r = pluecker_solve(&c).unwrap();
        assert_eq!(r.b_totals, vec![0, 0, 40, 40]);
        assert!(r.targets_match);
        assert_eq!(r.d, vec![8, 24, 48, 40, 0]);
        assert!(r.closure);
        assert_eq!(r.totals_lhs, 120);
        assert_eq!(r.totals_rhs, 120);
        assert!(r.totals_match);
    }
}
