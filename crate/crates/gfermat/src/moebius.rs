//! The projective line and its Moebius transformations over an exact field.
//!
//! A Moebius map is a class of invertible 2x2 matrices up to scalars, acting
//! on `P^1 = F u {inf}` by `z -> (az + b)/(cz + d)`. The module computes the
//! setwise stabilizer of a finite list of points, which for a curve's branch
//! set is the group the linear automorphisms project onto.

use crate::field::{Field, FieldElement};
use crate::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A point of the projective line: infinity or a field value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P1Value {
    Infinity,
    Finite(FieldElement),
}

impl P1Value {
    pub fn finite(&self) -> Option<&FieldElement> {
        match self {
            P1Value::Infinity => None,
            P1Value::Finite(x) => Some(x),
        }
    }
}

impl PartialOrd for P1Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for P1Value {
    /// Infinity first, then finite values in the canonical element order;
    /// matches the branch-value convention `[inf, 0, 1, ...]`.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (P1Value::Infinity, P1Value::Infinity) => Ordering::Equal,
            (P1Value::Infinity, P1Value::Finite(_)) => Ordering::Less,
            (P1Value::Finite(_), P1Value::Infinity) => Ordering::Greater,
            (P1Value::Finite(a), P1Value::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for P1Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Value::Infinity => write!(f, "inf"),
            P1Value::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// An element of `PGL_2`: matrix `[[a, b], [c, d]]`, `ad - bc != 0`, stored
/// with the first nonzero entry normalized to 1 so equality and ordering are
/// well defined on the projective class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusMap {
    field: Field,
    entries: [FieldElement; 4], // a, b, c, d
}

impl MoebiusMap {
    pub fn new(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Result<MoebiusMap> {
        let field = a.field().clone();
        for e in [&b, &c, &d] {
            if e.field() != &field {
                return Err(Error::MixedFields(field.name(), e.field().name()));
            }
        }
        let det = a.mul(&d)?.sub(&b.mul(&c)?)?;
        if det.is_zero() {
            return Err(Error::Invalid("Moebius matrix must be invertible".into()));
        }
        let mut entries = [a, b, c, d];
        let scale = entries
            .iter()
            .find(|e| !e.is_zero())
            .expect("invertible matrix is nonzero")
            .inv()?;
        for e in &mut entries {
            *e = e.mul(&scale)?;
        }
        Ok(MoebiusMap { field, entries })
    }

    pub fn identity(field: &Field) -> MoebiusMap {
        MoebiusMap {
            field: field.clone(),
            entries: [field.one(), field.zero(), field.zero(), field.one()],
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Normalized entries `[a, b, c, d]`.
    pub fn entries(&self) -> &[FieldElement; 4] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == MoebiusMap::identity(&self.field)
    }

    pub fn apply(&self, z: &P1Value) -> Result<P1Value> {
        let [a, b, c, d] = &self.entries;
        match z {
            P1Value::Infinity => {
                if c.is_zero() {
                    Ok(P1Value::Infinity)
                } else {
                    Ok(P1Value::Finite(a.div(c)?))
                }
            }
            P1Value::Finite(x) => {
                let num = a.mul(x)?.add(b)?;
                let den = c.mul(x)?.add(d)?;
                if den.is_zero() {
                    Ok(P1Value::Infinity)
                } else {
                    Ok(P1Value::Finite(num.div(&den)?))
                }
            }
        }
    }

    /// Matrix product `self * other`, acting as `self` after `other`.
    pub fn compose(&self, other: &MoebiusMap) -> Result<MoebiusMap> {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        MoebiusMap::new(
            a.mul(e)?.add(&b.mul(g)?)?,
            a.mul(f)?.add(&b.mul(h)?)?,
            c.mul(e)?.add(&d.mul(g)?)?,
            c.mul(f)?.add(&d.mul(h)?)?,
        )
    }

    pub fn inverse(&self) -> Result<MoebiusMap> {
        let [a, b, c, d] = &self.entries;
        MoebiusMap::new(d.clone(), b.neg(), c.neg(), a.clone())
    }

    /// The unique map with `src[i] -> dst[i]` for three distinct sources and
    /// three distinct destinations.
    pub fn from_images(field: &Field, src: &[P1Value; 3], dst: &[P1Value; 3]) -> Result<MoebiusMap> {
        let s = to_standard_triple(field, src)?;
        let t = to_standard_triple(field, dst)?;
        t.inverse()?.compose(&s)
    }
}

impl PartialOrd for MoebiusMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MoebiusMap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries)
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// The map sending `(p1, p2, p3) -> (0, 1, inf)`.
fn to_standard_triple(field: &Field, p: &[P1Value; 3]) -> Result<MoebiusMap> {
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i] == p[j] {
                return Err(Error::Invalid("triple points must be distinct".into()));
            }
        }
    }
    let one = field.one();
    let zero = field.zero();
    match (&p[0], &p[1], &p[2]) {
        (P1Value::Infinity, P1Value::Finite(p2), P1Value::Finite(p3)) => {
            // z -> (p2 - p3) / (z - p3)
            MoebiusMap::new(zero, p2.sub(p3)?, one, p3.neg())
        }
        (P1Value::Finite(p1), P1Value::Infinity, P1Value::Finite(p3)) => {
            // z -> (z - p1) / (z - p3)
            MoebiusMap::new(one.clone(), p1.neg(), one, p3.neg())
        }
        (P1Value::Finite(p1), P1Value::Finite(p2), P1Value::Infinity) => {
            // z -> (z - p1) / (p2 - p1)
            MoebiusMap::new(one, p1.neg(), zero, p2.sub(p1)?)
        }
        (P1Value::Finite(p1), P1Value::Finite(p2), P1Value::Finite(p3)) => {
            // z -> ((z - p1)(p2 - p3)) / ((z - p3)(p2 - p1))
            let u = p2.sub(p3)?;
            let v = p2.sub(p1)?;
            MoebiusMap::new(u.clone(), p1.neg().mul(&u)?, v.clone(), p3.neg().mul(&v)?)
        }
        _ => unreachable!("at most one infinity among distinct points"),
    }
}

/// The setwise stabilizer of a list of at least three distinct points: every
/// Moebius map permuting the list, sorted canonically. The result is checked
/// to be a group (identity, inverses, closure).
pub fn moebius_stabilizer(field: &Field, values: &[P1Value]) -> Result<Vec<MoebiusMap>> {
    if values.len() < 3 {
        return Err(Error::Invalid(
            "stabilizer needs at least three points".into(),
        ));
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return Err(Error::Invalid("stabilizer points must be distinct".into()));
            }
        }
    }
    let src = [values[0].clone(), values[1].clone(), values[2].clone()];
    let mut found: Vec<MoebiusMap> = Vec::new();
    let m = values.len();
    for i in 0..m {
        for j in 0..m {
            if j == i {
                continue;
            }
            for l in 0..m {
                if l == i || l == j {
                    continue;
                }
                let dst = [values[i].clone(), values[j].clone(), values[l].clone()];
                let t = MoebiusMap::from_images(field, &src, &dst)?;
                let mut ok = true;
                for v in values {
                    let image = t.apply(v)?;
                    if !values.contains(&image) {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    found.push(t);
                }
            }
        }
    }
    found.sort();
    found.dedup();
    // a setwise stabilizer is a group; verify rather than assume
    let id = MoebiusMap::identity(field);
    if !found.contains(&id) {
        return Err(Error::Internal("stabilizer misses the identity".into()));
    }
    for a in &found {
        if !found.contains(&a.inverse()?) {
            return Err(Error::Internal("stabilizer not closed under inverse".into()));
        }
        for b in &found {
            if !found.contains(&a.compose(b)?) {
                return Err(Error::Internal("stabilizer not closed under product".into()));
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(f: &Field, v: i64) -> P1Value {
        P1Value::Finite(f.from_int(v))
    }

    #[test]
    fn apply_covers_poles_and_infinity() {
        let q = Field::rationals();
        // z -> (z + 1) / (z - 1)
        let t = MoebiusMap::new(q.one(), q.one(), q.one(), q.from_int(-1)).unwrap();
        assert_eq!(t.apply(&fin(&q, 0)).unwrap(), fin(&q, -1));
        assert_eq!(t.apply(&fin(&q, 1)).unwrap(), P1Value::Infinity);
        assert_eq!(t.apply(&P1Value::Infinity).unwrap(), fin(&q, 1));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let q = Field::rationals();
        let t = MoebiusMap::new(q.from_int(2), q.from_int(3), q.one(), q.from_int(-1)).unwrap();
        assert!(t.compose(&t.inverse().unwrap()).unwrap().is_identity());
        assert!(t.inverse().unwrap().compose(&t).unwrap().is_identity());
    }

    #[test]
    fn from_images_hits_targets() {
        let q = Field::rationals();
        let src = [P1Value::Infinity, fin(&q, 0), fin(&q, 1)];
        let dst = [fin(&q, 2), fin(&q, 5), P1Value::Infinity];
        let t = MoebiusMap::from_images(&q, &src, &dst).unwrap();
        for (s, d) in src.iter().zip(dst.iter()) {
            assert_eq!(t.apply(s).unwrap(), *d);
        }
    }

    #[test]
    fn generic_four_point_stabilizer_is_klein() {
        // {inf, 0, 1, 3} has generic cross-ratio: exactly the three
        // double transpositions plus the identity
        let q = Field::rationals();
        let vals = [P1Value::Infinity, fin(&q, 0), fin(&q, 1), fin(&q, 3)];
        let g = moebius_stabilizer(&q, &vals).unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn harmonic_four_point_stabilizer_is_dihedral() {
        let q = Field::rationals();
        let vals = [P1Value::Infinity, fin(&q, 0), fin(&q, 1), fin(&q, -1)];
        let g = moebius_stabilizer(&q, &vals).unwrap();
        assert_eq!(g.len(), 8);
    }

    #[test]
    fn golden_four_point_stabilizer_is_tetrahedral() {
        // lambda = 4 satisfies lambda^2 - lambda + 1 = 0 mod 13, the
        // equianharmonic case: full A4
        let f = Field::prime(13).unwrap();
        let vals = [P1Value::Infinity, fin(&f, 0), fin(&f, 1), fin(&f, 4)];
        let g = moebius_stabilizer(&f, &vals).unwrap();
        assert_eq!(g.len(), 12);
    }

    #[test]
    fn five_point_stabilizers_frozen() {
        let q = Field::rationals();
        // x -> 3 - x swaps {inf fixed}; preserves {0,1,2,3}
        let vals = [
            P1Value::Infinity,
            fin(&q, 0),
            fin(&q, 1),
            fin(&q, 2),
            fin(&q, 3),
        ];
        assert_eq!(moebius_stabilizer(&q, &vals).unwrap().len(), 2);
        let vals = [
            P1Value::Infinity,
            fin(&q, 0),
            fin(&q, 1),
            fin(&q, 2),
            fin(&q, 5),
        ];
        assert_eq!(moebius_stabilizer(&q, &vals).unwrap().len(), 1);
    }

    #[test]
    fn fermat_three_point_stabilizer_is_symmetric() {
        let f = Field::prime(13).unwrap();
        let vals = [P1Value::Infinity, fin(&f, 0), fin(&f, 1)];
        let g = moebius_stabilizer(&f, &vals).unwrap();
        assert_eq!(g.len(), 6);
    }
}
