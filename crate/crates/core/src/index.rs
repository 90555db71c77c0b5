//! Exact-rational arithmetic for the index semigroup S and its group S - S:
//! finitely supported elements over a finite coordinate set, positive and
//! negative parts, subset masks, and the commensurability reduction onto an
//! integer lattice.

use crate::error::{DilationError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Finitely supported map from a finite coordinate set Omega = {0..omega-1}
/// to exact rationals. Zero coordinates are never stored.
///
/// Membership in the positive cone S means all coordinates are nonnegative;
/// differences of S-elements may carry any sign.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexElement {
    omega: usize,
    coords: BTreeMap<usize, BigRational>,
}

impl IndexElement {
    pub fn zero(omega: usize) -> Self {
        IndexElement {
            omega,
            coords: BTreeMap::new(),
        }
    }

    pub fn new(omega: usize, entries: Vec<(usize, BigRational)>) -> Result<Self> {
        let mut coords = BTreeMap::new();
        for (j, v) in entries {
            if j >= omega {
                return Err(DilationError::CoordinateOutOfRange { coord: j, omega });
            }
            if !v.is_zero() {
                coords.insert(j, v);
            }
        }
        Ok(IndexElement { omega, coords })
    }

    /// Element supported at a single coordinate.
    pub fn unit(omega: usize, coord: usize, value: BigRational) -> Result<Self> {
        Self::new(omega, vec![(coord, value)])
    }

    /// Convenience constructor from integer coordinates, densely listed.
    pub fn from_ints(values: &[i64]) -> Self {
        let coords = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(j, &v)| (j, BigRational::from_integer(BigInt::from(v))))
            .collect();
        IndexElement {
            omega: values.len(),
            coords,
        }
    }

    pub fn omega_size(&self) -> usize {
        self.omega
    }

    pub fn get(&self, j: usize) -> BigRational {
        self.coords.get(&j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// True when the element lies in the positive cone S.
    pub fn is_nonnegative(&self) -> bool {
        self.coords.values().all(|v| !v.is_negative())
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        for (&j, v) in &self.coords {
            if v.is_negative() {
                return Err(DilationError::NegativeCoordinate {
                    coord: j,
                    value: v.to_string(),
                });
            }
        }
        Ok(())
    }

    fn require_same_omega(&self, other: &Self) -> Result<()> {
        if self.omega == other.omega {
            Ok(())
        } else {
            Err(DilationError::OmegaMismatch {
                got: other.omega,
                expected: self.omega,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_omega(other)?;
        let mut coords = self.coords.clone();
        for (&j, v) in &other.coords {
            let entry = coords.entry(j).or_insert_with(BigRational::zero);
            *entry += v;
            if entry.is_zero() {
                coords.remove(&j);
            }
        }
        Ok(IndexElement {
            omega: self.omega,
            coords,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IndexElement {
            omega: self.omega,
            coords: self.coords.iter().map(|(&j, v)| (j, -v.clone())).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.omega);
        }
        let factor = BigRational::from_integer(BigInt::from(k));
        IndexElement {
            omega: self.omega,
            coords: self
                .coords
                .iter()
                .map(|(&j, v)| (j, v * &factor))
                .collect(),
        }
    }
}

impl fmt::Display for IndexElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for j in 0..self.omega {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.get(j))?;
        }
        write!(f, ")")
    }
}

/// JSON wire format: `{"omega": k, "coords": {"j": "p/q", ...}}`.
#[derive(Serialize, Deserialize)]
struct IndexElementJson {
    omega: usize,
    coords: BTreeMap<String, String>,
}

impl Serialize for IndexElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IndexElementJson {
            omega: self.omega,
            coords: self
                .coords
                .iter()
                .map(|(j, v)| (j.to_string(), v.to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = IndexElementJson::deserialize(deserializer)?;
        let mut entries = Vec::new();
        for (j, v) in raw.coords {
            let coord: usize = j.parse().map_err(D::Error::custom)?;
            let value: BigRational = v.parse().map_err(|_| {
                D::Error::custom(format!("cannot parse rational \"{v}\" (expected \"p/q\")"))
            })?;
            entries.push((coord, value));
        }
        IndexElement::new(raw.omega, entries).map_err(D::Error::custom)
    }
}

/// A subset u of Omega, kept as a sorted duplicate-free coordinate list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetMask {
    omega: usize,
    members: Vec<usize>,
}

impl SubsetMask {
    pub fn new(omega: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(DilationError::DuplicateCoordinate { coord: w[0] });
            }
        }
        if let Some(&max) = members.last() {
            if max >= omega {
                return Err(DilationError::CoordinateOutOfRange { coord: max, omega });
            }
        }
        Ok(SubsetMask { omega, members })
    }

    pub fn empty(omega: usize) -> Self {
        SubsetMask {
            omega,
            members: vec![],
        }
    }

    pub fn full(omega: usize) -> Self {
        SubsetMask {
            omega,
            members: (0..omega).collect(),
        }
    }

    pub fn omega_size(&self) -> usize {
        self.omega
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.binary_search(&j).is_ok()
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            omega: self.omega,
            members: (0..self.omega).filter(|j| !self.contains(*j)).collect(),
        }
    }
}

/// Decomposition g = s_plus - s_minus with disjoint supports:
/// `s_plus(j) = max(0, g(j))` and `s_minus = s_plus - g`. Both parts lie in S.
pub fn pos_neg_parts(g: &IndexElement) -> (IndexElement, IndexElement) {
    let mut plus = BTreeMap::new();
    let mut minus = BTreeMap::new();
    for (&j, v) in &g.coords {
        if v.is_positive() {
            plus.insert(j, v.clone());
        } else if v.is_negative() {
            minus.insert(j, -v.clone());
        }
    }
    (
        IndexElement {
            omega: g.omega,
            coords: plus,
        },
        IndexElement {
            omega: g.omega,
            coords: minus,
        },
    )
}

/// Coordinate mask s[u]: keeps s on u, zeroes it elsewhere.
/// Requires `s` in the positive cone and `u` within range.
pub fn mask(s: &IndexElement, u: &SubsetMask) -> Result<IndexElement> {
    s.require_nonnegative()?;
    if u.omega_size() != s.omega_size() {
        return Err(DilationError::OmegaMismatch {
            got: u.omega_size(),
            expected: s.omega_size(),
        });
    }
    let coords = s
        .coords
        .iter()
        .filter(|(j, _)| u.contains(**j))
        .map(|(&j, v)| (j, v.clone()))
        .collect();
    Ok(IndexElement {
        omega: s.omega,
        coords,
    })
}

/// Outcome of the commensurability reduction: a per-coordinate positive
/// rational base, and exact nonnegative integer coordinates per element.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeReduction {
    omega: usize,
    base: Vec<BigRational>,
    integer_coords: Vec<BTreeMap<usize, BigInt>>,
}

impl LatticeReduction {
    pub fn omega_size(&self) -> usize {
        self.omega
    }

    /// Base s_0(j) for coordinate `j`; defaults to 1 where every input was
    /// zero at `j`.
    pub fn base(&self, j: usize) -> &BigRational {
        &self.base[j]
    }

    pub fn bases(&self) -> &[BigRational] {
        &self.base
    }

    /// Integer coordinates of the `i`-th input element.
    pub fn integer_coords(&self, i: usize) -> &BTreeMap<usize, BigInt> {
        &self.integer_coords[i]
    }

    pub fn element_count(&self) -> usize {
        self.integer_coords.len()
    }

    /// Reconstruct the `i`-th input element exactly from its integer
    /// coordinates and the base.
    pub fn reconstruct(&self, i: usize) -> IndexElement {
        let coords = self.integer_coords[i]
            .iter()
            .map(|(&j, a)| (j, BigRational::from_integer(a.clone()) * &self.base[j]))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        IndexElement {
            omega: self.omega,
            coords,
        }
    }

    /// Express an arbitrary (possibly signed) element in integer lattice
    /// coordinates, failing when a coordinate is not an exact integer
    /// multiple of the base.
    pub fn reduce_point(&self, s: &IndexElement) -> Result<BTreeMap<usize, BigInt>> {
        if s.omega_size() != self.omega {
            return Err(DilationError::OmegaMismatch {
                got: s.omega_size(),
                expected: self.omega,
            });
        }
        let mut out = BTreeMap::new();
        for (&j, v) in &s.coords {
            let q = v / &self.base[j];
            if !q.is_integer() {
                return Err(DilationError::NotInLattice {
                    coord: j,
                    value: v.to_string(),
                    base: self.base[j].to_string(),
                });
            }
            out.insert(j, q.to_integer());
        }
        Ok(out)
    }
}

/// gcd of two nonnegative rationals: gcd of numerators over a common
/// denominator.
fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let denom = a.denom().lcm(b.denom());
    let na = a.numer() * (&denom / a.denom());
    let nb = b.numer() * (&denom / b.denom());
    BigRational::new(na.gcd(&nb), denom)
}

/// Commensurability reduction of a family of positive-cone elements.
///
/// Per coordinate j, the base s_0(j) is the rational gcd of the nonzero
/// values {s_i(j)}; coordinates that vanish across every input get base 1.
/// Every input element then has exact nonnegative integer coordinates
/// against the base.
pub fn commensurable_reduce(elements: &[IndexElement]) -> Result<LatticeReduction> {
    let first = elements.first().ok_or(DilationError::EmptyInput {
        context: "commensurable_reduce needs at least one element",
    })?;
    let omega = first.omega_size();
    for e in elements {
        if e.omega_size() != omega {
            return Err(DilationError::OmegaMismatch {
                got: e.omega_size(),
                expected: omega,
            });
        }
        e.require_nonnegative()?;
    }
    let mut base = vec![BigRational::zero(); omega];
    for e in elements {
        for (&j, v) in &e.coords {
            base[j] = rational_gcd(&base[j], v);
        }
    }
    for b in base.iter_mut() {
        if b.is_zero() {
            *b = BigRational::one();
        }
    }
    let integer_coords = elements
        .iter()
        .map(|e| {
            e.coords
                .iter()
                .map(|(&j, v)| {
                    let q = v / &base[j];
                    debug_assert!(q.is_integer());
                    (j, q.to_integer())
                })
                .collect()
        })
        .collect();
    Ok(LatticeReduction {
        omega,
        base,
        integer_coords,
    })
}

/// Deterministic lexicographic enumeration of the coefficient box
/// {sum c_j * g_j} with 0 <= c_j <= depth (or -depth <= c_j <= depth when
/// `signed`), duplicates removed in first-occurrence order.
pub fn group_box(
    generators: &[IndexElement],
    depth: usize,
    signed: bool,
) -> Result<Vec<IndexElement>> {
    let first = generators.first().ok_or(DilationError::EmptyInput {
        context: "group_box needs at least one generator",
    })?;
    let omega = first.omega_size();
    for g in generators {
        if g.omega_size() != omega {
            return Err(DilationError::OmegaMismatch {
                got: g.omega_size(),
                expected: omega,
            });
        }
        g.require_nonnegative()?;
    }
    let lo: i64 = if signed { -(depth as i64) } else { 0 };
    let hi: i64 = depth as i64;
    let k = generators.len();
    let mut coeffs = vec![lo; k];
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    loop {
        let mut point = IndexElement::zero(omega);
        for (c, g) in coeffs.iter().zip(generators) {
            point = point.add(&g.scale_int(*c))?;
        }
        if seen.insert(point.clone()) {
            out.push(point);
        }
        // Odometer (rightmost coordinate fastest gives lexicographic order).
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if coeffs[pos] < hi {
                coeffs[pos] += 1;
                for c in coeffs.iter_mut().skip(pos + 1) {
                    *c = lo;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn pos_neg_parts_mixed_signs() {
        let g = IndexElement::new(2, vec![(0, rat(1, 2)), (1, rat(-1, 3))]).unwrap();
        let (p, m) = pos_neg_parts(&g);
        assert_eq!(p.get(0), rat(1, 2));
        assert!(p.get(1).is_zero());
        assert!(m.get(0).is_zero());
        assert_eq!(m.get(1), rat(1, 3));
        assert_eq!(p.sub(&m).unwrap(), g);
    }

    #[test]
    fn pos_neg_parts_zero_and_positive() {
        let z = IndexElement::zero(2);
        let (p, m) = pos_neg_parts(&z);
        assert!(p.is_zero() && m.is_zero());

        let s = IndexElement::from_ints(&[2, 3]);
        let (p, m) = pos_neg_parts(&s);
        assert_eq!(p, s);
        assert!(m.is_zero());
    }

    #[test]
    fn mask_examples() {
        let s = IndexElement::from_ints(&[3, 5, 7]);
        let u = SubsetMask::new(3, vec![0, 2]).unwrap();
        let masked = mask(&s, &u).unwrap();
        assert_eq!(masked, IndexElement::from_ints(&[3, 0, 7]));

        let empty = SubsetMask::empty(3);
        assert!(mask(&s, &empty).unwrap().is_zero());

        let full = SubsetMask::full(3);
        assert_eq!(mask(&s, &full).unwrap(), s);
    }

    #[test]
    fn mask_partition_identity() {
        let s = IndexElement::new(3, vec![(0, rat(1, 3)), (2, rat(7, 5))]).unwrap();
        let u = SubsetMask::new(3, vec![1, 2]).unwrap();
        let total = mask(&s, &u)
            .unwrap()
            .add(&mask(&s, &u.complement()).unwrap())
            .unwrap();
        assert_eq!(total, s);
    }

    #[test]
    fn mask_rejects_out_of_range() {
        assert!(SubsetMask::new(2, vec![0, 2]).is_err());
        assert!(SubsetMask::new(2, vec![1, 1]).is_err());
    }

    #[test]
    fn reduce_rational_gcd_example() {
        // {3/4, 1/2, 5/6} over denominator 12 has numerators 9, 6, 10;
        // gcd 1 gives base 1/12 and integers (9, 6, 10).
        let elems = vec![
            IndexElement::unit(1, 0, rat(3, 4)).unwrap(),
            IndexElement::unit(1, 0, rat(1, 2)).unwrap(),
            IndexElement::unit(1, 0, rat(5, 6)).unwrap(),
        ];
        let red = commensurable_reduce(&elems).unwrap();
        assert_eq!(red.base(0), &rat(1, 12));
        let ints: Vec<i64> = (0..3)
            .map(|i| {
                red.integer_coords(i)
                    .get(&0)
                    .map(|b| i64::try_from(b).unwrap())
                    .unwrap_or(0)
            })
            .collect();
        assert_eq!(ints, vec![9, 6, 10]);
    }

    #[test]
    fn reduce_integer_gcd_example() {
        let elems = vec![
            IndexElement::from_ints(&[2]),
            IndexElement::from_ints(&[4]),
            IndexElement::from_ints(&[6]),
        ];
        let red = commensurable_reduce(&elems).unwrap();
        assert_eq!(red.base(0), &rat(2, 1));
        let ints: Vec<i64> = (0..3)
            .map(|i| i64::try_from(red.integer_coords(i).get(&0).unwrap()).unwrap())
            .collect();
        assert_eq!(ints, vec![1, 2, 3]);
    }

    #[test]
    fn reduce_singleton() {
        let elems = vec![IndexElement::unit(1, 0, rat(5, 7)).unwrap()];
        let red = commensurable_reduce(&elems).unwrap();
        assert_eq!(red.base(0), &rat(5, 7));
        assert_eq!(
            red.integer_coords(0).get(&0).unwrap(),
            &BigInt::from(1)
        );
    }

    #[test]
    fn reduce_round_trip_is_exact() {
        let elems = vec![
            IndexElement::new(2, vec![(0, rat(3, 4)), (1, rat(2, 9))]).unwrap(),
            IndexElement::new(2, vec![(0, rat(5, 6))]).unwrap(),
        ];
        let red = commensurable_reduce(&elems).unwrap();
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(&red.reconstruct(i), e);
        }
    }

    #[test]
    fn reduce_zero_coordinate_defaults_base_to_one() {
        let elems = vec![IndexElement::from_ints(&[0, 3])];
        let red = commensurable_reduce(&elems).unwrap();
        assert_eq!(red.base(0), &rat(1, 1));
        assert_eq!(red.base(1), &rat(3, 1));
    }

    #[test]
    fn reduce_rejects_negative() {
        let elems = vec![IndexElement::from_ints(&[-1])];
        assert!(matches!(
            commensurable_reduce(&elems),
            Err(DilationError::NegativeCoordinate { .. })
        ));
    }

    #[test]
    fn box_single_generator() {
        let g = vec![IndexElement::from_ints(&[1])];
        let b = group_box(&g, 2, false).unwrap();
        assert_eq!(
            b,
            vec![
                IndexElement::from_ints(&[0]),
                IndexElement::from_ints(&[1]),
                IndexElement::from_ints(&[2]),
            ]
        );
    }

    #[test]
    fn box_two_generators_unit() {
        let g = vec![IndexElement::from_ints(&[1, 0]), IndexElement::from_ints(&[0, 1])];
        let b = group_box(&g, 1, false).unwrap();
        assert_eq!(
            b,
            vec![
                IndexElement::from_ints(&[0, 0]),
                IndexElement::from_ints(&[0, 1]),
                IndexElement::from_ints(&[1, 0]),
                IndexElement::from_ints(&[1, 1]),
            ]
        );
    }

    #[test]
    fn box_signed_scaled_generator() {
        let g = vec![IndexElement::unit(1, 0, rat(1, 2)).unwrap()];
        let b = group_box(&g, 2, true).unwrap();
        let values: Vec<BigRational> = b.iter().map(|e| e.get(0)).collect();
        assert_eq!(
            values,
            vec![rat(-1, 1), rat(-1, 2), rat(0, 1), rat(1, 2), rat(1, 1)]
        );
    }

    #[test]
    fn box_dedupes_dependent_generators() {
        let g = vec![IndexElement::from_ints(&[1]), IndexElement::from_ints(&[2])];
        let b = group_box(&g, 1, false).unwrap();
        // (0,0)->0, (0,1)->2, (1,0)->1, (1,1)->3: all distinct here;
        // coefficients (0,1) and (2,0) would collide at depth 2.
        assert_eq!(b.len(), 4);
        let b2 = group_box(&g, 2, false).unwrap();
        let values: std::collections::BTreeSet<String> =
            b2.iter().map(|e| e.to_string()).collect();
        assert_eq!(values.len(), b2.len());
    }

    #[test]
    fn box_rejects_empty() {
        assert!(group_box(&[], 1, false).is_err());
    }

    #[test]
    fn index_element_json_round_trip() {
        let e = IndexElement::new(3, vec![(0, rat(5, 6)), (2, rat(-7, 2))]).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"omega":3,"coords":{"0":"5/6","2":"-7/2"}}"#);
        let back: IndexElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
