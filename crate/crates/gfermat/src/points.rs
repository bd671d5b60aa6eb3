//! Exhaustive rational-point enumeration over finite fields.
//!
//! The covering structure makes enumeration cheap: a point is determined by
//! `[x_1 : x_2]` together with one k-th root per trailing coordinate of
//! `-lh_i x_1^k - x_2^k`, so the census walks the base projective line and
//! multiplies out root menus instead of scanning all of projective space.
//!
//! The deck group `H0` acts on the census: fibers of the base map are unions
//! of orbits, orbit sizes divide `k^n`, and the stabilizer of a point is
//! trivial unless the point lies on a fiber `x_j = 0`, where it is the full
//! cyclic group generated by the deck transformation scaling `x_j`. When the
//! k-th roots of unity are rational every nonempty fiber is one single orbit.
//! Every census is sanity-checked against the Weil bound
//! `|N - (q+1)| <= 2 g sqrt(q)`, kept exact as `(N-q-1)^2 <= 4 g^2 q`.

use crate::aut::{generate_group, h0_generators, MonomialAut};
use crate::curve::{CurveSpec, ProjectivePoint};
use crate::field::FieldElement;
use crate::moebius::P1Value;
use crate::{Error, Result};
use itertools::Itertools;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Default work cap for [`enumerate_points`], in `q^2 k^n` units.
pub const DEFAULT_CENSUS_BUDGET: u64 = 100_000_000;

/// Complete list of rational points with per-fiber bookkeeping.
#[derive(Debug, Clone)]
pub struct PointCensus {
    /// Field cardinality.
    pub q: u64,
    /// All points, sorted lexicographically on normalized coordinates.
    pub points: Vec<ProjectivePoint>,
    /// Fiber size per base value that carries at least one point.
    pub fiber_sizes: BTreeMap<P1Value, usize>,
    /// `(N - q - 1)^2` and `4 g^2 q`.
    pub weil_lhs: i128,
    pub weil_rhs: i128,
    pub weil_ok: bool,
}

impl PointCensus {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Enumerates every rational point of the curve over its finite base field.
///
/// One pass builds the k-th power table of the field; the fiber over each
/// `[x_1 : x_2]` is then a product of table lookups. Refuses fields where
/// `q^2 k^n` exceeds the budget.
pub fn enumerate_points(c: &CurveSpec, budget: u64) -> Result<PointCensus> {
    let field = c.field().clone();
    let Some(q) = field.cardinality() else {
        return Err(Error::Invalid("point census needs a finite field".into()));
    };
    let work = (q as u128) * (q as u128) * (c.covering_degree()? as u128);
    if work > budget as u128 {
        return Err(Error::Budget(format!(
            "census work q^2 k^n = {work} exceeds budget {budget}"
        )));
    }
    // k-th power table: value -> ascending list of its k-th roots
    let mut table: BTreeMap<FieldElement, Vec<FieldElement>> = BTreeMap::new();
    for a in field.elements()? {
        table.entry(a.pow(c.k())?).or_default().push(a);
    }
    let lh = c.lambda_hats();
    let mut points: Vec<ProjectivePoint> = Vec::new();

    // chart x_1 = 0: forms collapse to x_{3+i}^k = -x_2^k, normalize x_2 = 1
    let minus_one = field.from_int(-1);
    let menus: Vec<&Vec<FieldElement>> = match table.get(&minus_one) {
        Some(m) => vec![m; c.n() - 1],
        None => Vec::new(),
    };
    if menus.len() == c.n() - 1 {
        for combo in menus.iter().map(|m| m.iter().cloned()).multi_cartesian_product() {
            let mut coords = vec![field.zero(), field.one()];
            coords.extend(combo);
            points.push(ProjectivePoint::new(coords)?);
        }
    }

    // chart x_1 = 1: walk x_2 over the field, solve the trailing coordinates
    let base_values: Vec<FieldElement> = field.elements()?.collect();
    let per_t: Vec<Vec<ProjectivePoint>> = base_values
        .into_par_iter()
        .map(|t| {
            let tk = t.pow(c.k())?;
            let mut menus: Vec<&Vec<FieldElement>> = Vec::with_capacity(c.n() - 1);
            for lhi in &lh {
                let w = lhi.add(&tk)?.neg();
                match table.get(&w) {
                    Some(m) => menus.push(m),
                    None => return Ok(Vec::new()),
                }
            }
            let mut out = Vec::new();
            for combo in menus.iter().map(|m| m.iter().cloned()).multi_cartesian_product() {
                let mut coords = vec![field.one(), t.clone()];
                coords.extend(combo);
                out.push(ProjectivePoint::new(coords)?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    for chunk in per_t {
        points.extend(chunk);
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));

    let mut fiber_sizes: BTreeMap<P1Value, usize> = BTreeMap::new();
    for p in &points {
        debug_assert!(c.contains(p)?);
        *fiber_sizes.entry(c.base_map(p)?).or_insert(0) += 1;
    }
    let kn = c.covering_degree()? as usize;
    if fiber_sizes.values().any(|&s| s > kn) {
        return Err(Error::Internal("fiber larger than the covering degree".into()));
    }

    let g = c.genus()? as i128;
    let n_points = points.len() as i128;
    let weil_lhs = (n_points - q as i128 - 1).pow(2);
    let weil_rhs = 4 * g * g * q as i128;
    Ok(PointCensus {
        q,
        points,
        fiber_sizes,
        weil_lhs,
        weil_rhs,
        weil_ok: weil_lhs <= weil_rhs,
    })
}

/// One deck-group orbit.
#[derive(Debug, Clone)]
pub struct OrbitInfo {
    /// Smallest point of the orbit.
    pub representative: ProjectivePoint,
    pub size: usize,
    pub stabilizer_order: usize,
    /// Common base value of the orbit.
    pub base: P1Value,
}

/// Orbit decomposition of a census under the deck group.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub orbits: Vec<OrbitInfo>,
    /// size -> number of orbits with that size.
    pub orbit_sizes: BTreeMap<usize, usize>,
    /// Every orbit size divides `k^n`.
    pub sizes_divide_group: bool,
    /// `size * stabilizer = k^n` on every orbit.
    pub orbit_stabilizer_consistent: bool,
    /// Every stabilizer is trivial or the powers of one deck generator.
    pub stabilizers_single_fiber: bool,
    /// Points with a zero coordinate sit in orbits of size `k^{n-1}`.
    pub fixed_points_in_small_orbits: bool,
    /// Every nonempty base fiber is exactly one orbit.
    pub fibers_single_orbits: bool,
    /// The base map is constant on every orbit.
    pub base_constant_on_orbits: bool,
}

/// Partitions a census into deck-group orbits and verifies the action's
/// structure. Needs the k-th roots of unity rational, since they generate
/// the deck group over the base field.
pub fn orbit_decomposition(c: &CurveSpec, census: &PointCensus) -> Result<OrbitReport> {
    let gens = h0_generators(c)?;
    let kn = c.covering_degree()? as usize;
    let h0 = generate_group(&gens, kn + 1)?;
    if h0.len() != kn {
        return Err(Error::Internal(format!(
            "deck group has {} elements, expected {kn}",
            h0.len()
        )));
    }
    // powers of each generator, for the stabilizer structure test
    let mut generator_powers: Vec<BTreeSet<MonomialAut>> = Vec::new();
    for g in &gens {
        let mut powers = BTreeSet::new();
        let mut acc = MonomialAut::identity(c.field(), c.n() + 1);
        for _ in 0..c.k() {
            powers.insert(acc.clone());
            acc = acc.compose(g)?;
        }
        generator_powers.push(powers);
    }

    let point_set: BTreeSet<&ProjectivePoint> = census.points.iter().collect();
    let mut seen: BTreeSet<ProjectivePoint> = BTreeSet::new();
    let mut orbits = Vec::new();
    let mut sizes_divide_group = true;
    let mut orbit_stabilizer_consistent = true;
    let mut stabilizers_single_fiber = true;
    let mut fixed_points_in_small_orbits = true;
    let mut base_constant_on_orbits = true;

    for start in &census.points {
        if seen.contains(start) {
            continue;
        }
        let base = c.base_map(start)?;
        let mut orbit: BTreeSet<ProjectivePoint> = BTreeSet::new();
        let mut stabilizer: Vec<&MonomialAut> = Vec::new();
        for h in &h0 {
            let image = h.apply(start)?;
            if !point_set.contains(&image) {
                return Err(Error::Internal(
                    "deck image of a census point escaped the census".into(),
                ));
            }
            if &image == start {
                stabilizer.push(h);
            }
            if c.base_map(&image)? != base {
                base_constant_on_orbits = false;
            }
            orbit.insert(image);
        }
        let size = orbit.len();
        let stab = stabilizer.len();
        if kn % size != 0 {
            sizes_divide_group = false;
        }
        if size * stab != kn {
            orbit_stabilizer_consistent = false;
        }
        if stab > 1 {
            let cyclic = generator_powers
                .iter()
                .any(|powers| stabilizer.iter().all(|h| powers.contains(h)));
            if !cyclic {
                stabilizers_single_fiber = false;
            }
        }
        if !start.zero_coordinates().is_empty() && size as u64 != c.fiber_size()? {
            fixed_points_in_small_orbits = false;
        }
        seen.extend(orbit.iter().cloned());
        orbits.push(OrbitInfo {
            representative: orbit.iter().next().expect("nonempty orbit").clone(),
            size,
            stabilizer_order: stab,
            base,
        });
    }

    let mut orbit_sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for o in &orbits {
        *orbit_sizes.entry(o.size).or_insert(0) += 1;
    }
    let mut per_fiber: BTreeMap<&P1Value, usize> = BTreeMap::new();
    for o in &orbits {
        *per_fiber.entry(&o.base).or_insert(0) += 1;
    }
    let fibers_single_orbits = per_fiber.values().all(|&n| n == 1);

    Ok(OrbitReport {
        orbits,
        orbit_sizes,
        sizes_divide_group,
        orbit_stabilizer_consistent,
        stabilizers_single_fiber,
        fixed_points_in_small_orbits,
        fibers_single_orbits,
        base_constant_on_orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn conic_census_is_the_projective_line() {
        // k=2, n=2 has genus 0, so the Weil bound pins N = q + 1 exactly
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(2, 2, vec![], &f).unwrap();
        let census = enumerate_points(&c, DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(census.count(), 14);
        assert!(census.weil_ok);
        assert_eq!(census.weil_lhs, 0);
        for p in &census.points {
            assert!(c.contains(p).unwrap());
        }
        // three branch fibers of size 2, two full fibers of size 4
        let sizes: Vec<usize> = census.fiber_sizes.values().cloned().collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 2);
    }

    #[test]
    fn conic_orbits_split_by_fiber() {
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(2, 2, vec![], &f).unwrap();
        let census = enumerate_points(&c, DEFAULT_CENSUS_BUDGET).unwrap();
        let report = orbit_decomposition(&c, &census).unwrap();
        assert_eq!(report.orbit_sizes.get(&2), Some(&3));
        assert_eq!(report.orbit_sizes.get(&4), Some(&2));
        assert!(report.sizes_divide_group);
        assert!(report.orbit_stabilizer_consistent);
        assert!(report.stabilizers_single_fiber);
        assert!(report.fixed_points_in_small_orbits);
        assert!(report.fibers_single_orbits);
        assert!(report.base_constant_on_orbits);
        for o in &report.orbits {
            let fixed = !o.representative.zero_coordinates().is_empty();
            assert_eq!(o.stabilizer_order, if fixed { 2 } else { 1 });
        }
    }

    #[test]
    fn golden_census_frozen() {
        // over GF(13) only the fiber over infinity is populated: cube roots
        // of -1 exist but -4, -3 and 9 are not cubes
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(3, 3, vec![f.from_int(4)], &f).unwrap();
        let census = enumerate_points(&c, DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(census.count(), 9);
        assert!(census.weil_ok);
        assert_eq!(census.fiber_sizes.len(), 1);
        assert_eq!(census.fiber_sizes.get(&P1Value::Infinity), Some(&9));
        let report = orbit_decomposition(&c, &census).unwrap();
        assert_eq!(report.orbits.len(), 1);
        assert_eq!(report.orbits[0].size, 9);
        assert_eq!(report.orbits[0].stabilizer_order, 3);
        assert!(report.orbit_stabilizer_consistent);
        assert!(report.stabilizers_single_fiber);
    }

    #[test]
    fn k2_n4_census_frozen() {
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(2, 4, vec![f.from_int(2), f.from_int(5)], &f).unwrap();
        let census = enumerate_points(&c, DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(census.count(), 16);
        assert!(census.weil_ok);
        // fibers over infinity and over 1, eight points each
        assert_eq!(census.fiber_sizes.len(), 2);
        assert!(census.fiber_sizes.values().all(|&s| s == 8));
        let report = orbit_decomposition(&c, &census).unwrap();
        assert_eq!(report.orbit_sizes.get(&8), Some(&2));
        assert!(report.fixed_points_in_small_orbits);
        assert!(report.fibers_single_orbits);
    }

    #[test]
    fn census_is_invariant_under_deck_maps() {
        let f = Field::prime(13).unwrap();
        let c = CurveSpec::new(2, 2, vec![], &f).unwrap();
        let census = enumerate_points(&c, DEFAULT_CENSUS_BUDGET).unwrap();
        for phi in h0_generators(&c).unwrap() {
            let mut mapped: Vec<ProjectivePoint> = census
                .points
                .iter()
                .map(|p| phi.apply(p).unwrap())
                .collect();
            mapped.sort();
            assert_eq!(mapped, census.points);
        }
    }

    #[test]
    fn census_budget_guard() {
        let f = Field::extension(13, 3).unwrap();
        let c = CurveSpec::new(3, 3, vec![f.from_int(4)], &f).unwrap();
        assert!(matches!(
            enumerate_points(&c, DEFAULT_CENSUS_BUDGET),
            Err(Error::Budget(_))
        ));
        let q = Field::rationals();
        let cq = CurveSpec::new(3, 3, vec![q.from_int(4)], &q).unwrap();
        assert!(matches!(
            enumerate_points(&cq, DEFAULT_CENSUS_BUDGET),
            Err(Error::Invalid(_))
        ));
    }
}
