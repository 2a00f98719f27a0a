//! Weight vectors, index sets and the ordered weighted building set.
//!
//! Index sets are subsets of `{1..n}` stored as bitmasks, so `n` is capped
//! at 63. The building set `G_A` of a weight vector `A` is the family of
//! subsets `S` with `|S| >= 2` and `sum_{i in S} a_i > 1`; its default order
//! lists larger sets first, breaking ties lexicographically.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest number of marked points supported by the bitmask representation.
pub const MAX_POINTS: usize = 63;

/// Default cap on `|G|` for exhaustive nest enumeration.
pub const DEFAULT_NEST_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if weights.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(weights.len()));
        }
        for (i, w) in weights.iter().enumerate() {
            if !w.is_positive() || *w > BigRational::one() {
                return Err(Error::WeightOutOfRange {
                    index: i + 1,
                    value: format_rational(w),
                });
            }
        }
        Ok(WeightVector { weights })
    }

    /// `n` copies of the same weight.
    pub fn uniform(n: usize, weight: BigRational) -> Result<Self> {
        Self::new(vec![weight; n])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::uniform(n, BigRational::one())
    }

    pub fn from_ratios(ratios: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            ratios
                .iter()
                .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Weight of the 1-based label `i`.
    pub fn weight(&self, label: usize) -> &BigRational {
        &self.weights[label - 1]
    }

    pub fn total(&self) -> BigRational {
        self.weights.iter().fold(BigRational::zero(), |acc, w| acc + w)
    }

    pub fn subset_sum(&self, set: IndexSet) -> BigRational {
        set.iter()
            .fold(BigRational::zero(), |acc, i| acc + self.weight(i))
    }

    /// Whether `Δ_S` is a blowup center: `|S| >= 2` and the weights of `S`
    /// sum to strictly more than one.
    pub fn is_heavy(&self, set: IndexSet) -> bool {
        set.len() >= 2 && self.subset_sum(set) > BigRational::one()
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &WeightVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(other.len(), self.len()));
        }
        for (i, (b, a)) in self.weights.iter().zip(&other.weights).enumerate() {
            if b > a {
                return Err(Error::NotDominated {
                    index: i + 1,
                    target: format_rational(b),
                    source_weight: format_rational(a),
                });
            }
        }
        Ok(())
    }

    /// Parse the comma-separated text form, e.g. `"1,1,1/2,2/3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        let mut column = 1;
        for token in text.split(',') {
            let lead = token.len() - token.trim_start().len();
            let value = parse_rational(token.trim()).map_err(|message| Error::Parse {
                line: 1,
                column: column + lead,
                message,
            })?;
            weights.push(value);
            column += token.chars().count() + 1;
        }
        Self::new(weights)
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.weights.iter().map(format_rational).collect();
        parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(deserializer)?;
        let weights = parts
            .iter()
            .map(|p| parse_rational(p))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        WeightVector::new(weights).map_err(serde::de::Error::custom)
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact parse of `p`, `p/q` or a finite decimal such as `0.25`.
pub fn parse_rational(token: &str) -> std::result::Result<BigRational, String> {
    if token.is_empty() {
        return Err("empty weight".into());
    }
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator in `{token}`"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator in `{token}`"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{token}`"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = token.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid decimal `{token}`"));
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| format!("invalid decimal `{token}`"))?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().map_err(|_| format!("invalid decimal `{token}`"))?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    token
        .parse::<BigInt>()
        .map(BigRational::from_integer)
        .map_err(|_| format!("invalid weight `{token}`"))
}

/// A nonempty subset of `{1..n}`, stored as a bitmask (bit `i-1` is label `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet(u64);

impl IndexSet {
    pub fn new(members: &[usize]) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidIndexSet("index set must be nonempty".into()));
        }
        let mut bits = 0u64;
        for &m in members {
            if m == 0 || m > MAX_POINTS {
                return Err(Error::InvalidIndexSet(format!("label {m} out of range")));
            }
            bits |= 1 << (m - 1);
        }
        Ok(IndexSet(bits))
    }

    /// Panicking shorthand for literals in tests and fixtures.
    pub fn of(members: &[usize]) -> Self {
        Self::new(members).expect("valid index set")
    }

    pub fn from_bits(bits: u64) -> Self {
        debug_assert!(bits != 0 && bits >> MAX_POINTS == 0);
        IndexSet(bits)
    }

    /// `{1..n}`.
    pub fn full(n: usize) -> Self {
        IndexSet(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        label >= 1 && label <= 64 && self.0 & (1 << (label - 1)) != 0
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: IndexSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection_len(self, other: IndexSet) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    pub fn max_label(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Sorted members.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i + 1)
            }
        })
    }

    pub fn members(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Consecutive pairs `(i_k, i_{k+1})` of the sorted members.
    pub fn consecutive_pairs(self) -> Vec<(usize, usize)> {
        let m = self.members();
        m.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Compact label such as `123`, or `1_10_11` once a label has two digits.
    pub fn label(self) -> String {
        let m = self.members();
        if m.iter().all(|&i| i < 10) {
            m.iter().map(|i| i.to_string()).collect()
        } else {
            m.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("_")
        }
    }

    /// All subsets of `{1..n}` with at least two members.
    pub fn all_diagonals(n: usize) -> impl Iterator<Item = IndexSet> {
        let full = IndexSet::full(n).0;
        (1..=full)
            .filter(|b| b.count_ones() >= 2)
            .map(IndexSet)
    }
}

impl Ord for IndexSet {
    /// Lexicographic on sorted members.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        IndexSet::new(&members).map_err(serde::de::Error::custom)
    }
}

/// Default order: larger sets first, ties lexicographic on sorted members.
pub fn ascending_dimension_cmp(a: &IndexSet, b: &IndexSet) -> Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

/// The weighted building set `G_A` together with an admissible total order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedBuildingSet {
    n: usize,
    weights: WeightVector,
    elements: Vec<IndexSet>,
    #[serde(skip)]
    positions: HashMap<IndexSet, usize>,
}

impl OrderedBuildingSet {
    fn from_parts(weights: WeightVector, elements: Vec<IndexSet>) -> Self {
        let positions = elements.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        OrderedBuildingSet {
            n: weights.len(),
            weights,
            elements,
            positions,
        }
    }

    /// Re-order the same building set. The order must list every element of
    /// `G_A` exactly once and put `T` before `S` whenever `S ⊊ T`.
    pub fn with_order(weights: WeightVector, elements: Vec<IndexSet>) -> Result<Self> {
        let canonical = building_set(&weights);
        if elements.len() != canonical.len() {
            return Err(Error::InadmissibleOrder(format!(
                "expected {} elements, got {}",
                canonical.len(),
                elements.len()
            )));
        }
        let candidate = Self::from_parts(weights, elements);
        if candidate.positions.len() != candidate.elements.len() {
            return Err(Error::InadmissibleOrder("duplicate element".into()));
        }
        for s in &candidate.elements {
            if !canonical.contains(*s) {
                return Err(Error::InadmissibleOrder(format!("{s} is not in the building set")));
            }
        }
        for (i, s) in candidate.elements.iter().enumerate() {
            for t in &candidate.elements[i + 1..] {
                if s.is_subset(*t) {
                    return Err(Error::InadmissibleOrder(format!(
                        "{t} must precede its subset {s}"
                    )));
                }
            }
        }
        Ok(candidate)
    }

    /// Random admissible order: cardinality levels stay in place, members of
    /// each level are shuffled.
    pub fn shuffled_ties<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let mut elements = self.elements.clone();
        elements.sort_by(ascending_dimension_cmp);
        let mut start = 0;
        while start < elements.len() {
            let size = elements[start].len();
            let end = start
                + elements[start..]
                    .iter()
                    .take_while(|s| s.len() == size)
                    .count();
            elements[start..end].shuffle(rng);
            start = end;
        }
        Self::from_parts(self.weights.clone(), elements)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn elements(&self) -> &[IndexSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, set: IndexSet) -> bool {
        self.positions.contains_key(&set)
    }

    pub fn position(&self, set: IndexSet) -> Option<usize> {
        self.positions.get(&set).copied()
    }

    pub fn get(&self, index: usize) -> Option<IndexSet> {
        self.elements.get(index).copied()
    }
}

/// `G_A`: every `S` with `|S| >= 2` and weight sum strictly above one, in
/// ascending dimension order.
pub fn building_set(weights: &WeightVector) -> OrderedBuildingSet {
    let mut elements: Vec<IndexSet> = IndexSet::all_diagonals(weights.len())
        .filter(|s| weights.is_heavy(*s))
        .collect();
    elements.sort_by(ascending_dimension_cmp);
    OrderedBuildingSet::from_parts(weights.clone(), elements)
}

/// `S` and `T` meet and neither contains the other.
pub fn overlaps(s: IndexSet, t: IndexSet) -> bool {
    s.intersects(t) && !s.is_subset(t) && !t.is_subset(s)
}

/// `S ∩ T` is a single label.
pub fn weak_overlap(s: IndexSet, t: IndexSet) -> bool {
    s.intersection_len(t) == 1
}

pub fn is_nest(sets: &[IndexSet], building: &OrderedBuildingSet) -> bool {
    sets.iter().all(|s| building.contains(*s))
        && sets
            .iter()
            .enumerate()
            .all(|(i, s)| sets[i + 1..].iter().all(|t| !overlaps(*s, *t)))
}

/// A set of building-set elements that pairwise are disjoint or nested.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Nest(pub Vec<IndexSet>);

/// Every nest of `G`, the empty nest included. Nests are listed by size and
/// then lexicographically on the order positions of their elements.
pub fn enumerate_nests(building: &OrderedBuildingSet, cap: usize) -> Result<Vec<Nest>> {
    if building.len() > cap {
        return Err(Error::EnumerationCap {
            size: building.len(),
            cap,
        });
    }
    let elems = building.elements();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn extend(elems: &[IndexSet], start: usize, current: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
        found.push(current.clone());
        for k in start..elems.len() {
            if current.iter().all(|&i| !overlaps(elems[i], elems[k])) {
                current.push(k);
                extend(elems, k + 1, current, found);
                current.pop();
            }
        }
    }
    extend(elems, 0, &mut current, &mut found);
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found
        .into_iter()
        .map(|idx| Nest(idx.into_iter().map(|i| elems[i]).collect()))
        .collect())
}

/// Connected components of the intersection graph of `sets`, each replaced
/// by its union. The result is sorted lexicographically.
pub fn factor_decomposition(sets: &[IndexSet]) -> Vec<IndexSet> {
    let mut parts: Vec<IndexSet> = Vec::new();
    for &s in sets {
        let mut merged = s;
        // parts stay pairwise disjoint, so one pass absorbs everything `s` touches
        parts.retain(|p| {
            if p.intersects(s) {
                merged = merged.union(*p);
                false
            } else {
                true
            }
        });
        parts.push(merged);
    }
    parts.sort();
    parts
}

/// Whether every prefix of `ordered` is closed under taking the factors of
/// its subcollections.
///
/// A prefix `P` has this property exactly when the union of any two
/// intersecting members of `P` is again in `P`: connected subcollections can
/// be merged one intersecting member at a time. So it is enough to check that
/// for intersecting `S`, `T` the union appears no later than the later of the
/// two.
pub fn prefix_is_building_set(ordered: &[IndexSet]) -> bool {
    let positions: HashMap<IndexSet, usize> =
        ordered.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    for (i, s) in ordered.iter().enumerate() {
        for (j, t) in ordered.iter().enumerate().skip(i + 1) {
            if s.intersects(*t) {
                match positions.get(&s.union(*t)) {
                    Some(&k) if k <= j => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

/// Fulton-MacPherson order: sets grouped by largest label, each group in
/// decreasing cardinality, ties lexicographic; `Δ12; Δ123; Δ13, Δ23; Δ1234; ...`.
pub fn fm_order(building: &OrderedBuildingSet) -> Vec<IndexSet> {
    let mut elements = building.elements().to_vec();
    elements.sort_by(|a, b| {
        a.max_label()
            .cmp(&b.max_label())
            .then_with(|| ascending_dimension_cmp(a, b))
    });
    elements
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(list: &[&[usize]]) -> Vec<IndexSet> {
        list.iter().map(|m| IndexSet::of(m)).collect()
    }

    #[test]
    fn building_set_all_ones() {
        let g = building_set(&WeightVector::ones(3).unwrap());
        assert_eq!(g.elements(), sets(&[&[1, 2, 3], &[1, 2], &[1, 3], &[2, 3]]));
    }

    #[test]
    fn building_set_halves_excludes_boundary_sum() {
        let g = building_set(&WeightVector::parse("1/2,1/2,1/2").unwrap());
        assert_eq!(g.elements(), sets(&[&[1, 2, 3]]));
    }

    #[test]
    fn building_set_light_weights_is_empty() {
        let g = building_set(&WeightVector::parse("1/8,1/8,1/8,1/8").unwrap());
        assert!(g.is_empty());
    }

    #[test]
    fn weights_reject_out_of_range() {
        assert!(matches!(
            WeightVector::parse("1.5"),
            Err(Error::WeightOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            WeightVector::parse("1,0"),
            Err(Error::WeightOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            WeightVector::parse("1,-1/2"),
            Err(Error::WeightOutOfRange { .. })
        ));
        let err = WeightVector::parse("1.5").unwrap_err().to_string();
        assert!(err.contains("(0,1]"), "{err}");
    }

    #[test]
    fn weights_parse_reports_column() {
        match WeightVector::parse("1, 1/x,1") {
            Err(Error::Parse { line: 1, column, .. }) => assert_eq!(column, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(WeightVector::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(WeightVector::parse("1/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn weights_parse_decimals_exactly() {
        let w = WeightVector::parse("0.25,1,2/3").unwrap();
        assert_eq!(w.to_string(), "1/4,1,2/3");
    }

    #[test]
    fn overlap_examples() {
        let s = IndexSet::of;
        assert!(overlaps(s(&[1, 2]), s(&[2, 3])));
        assert!(!overlaps(s(&[1, 2]), s(&[1, 2, 3])));
        assert!(!overlaps(s(&[1, 2]), s(&[3, 4])));
        assert!(weak_overlap(s(&[1, 2]), s(&[2, 3])));
        assert!(!weak_overlap(s(&[1, 2, 3]), s(&[2, 3, 4])));
        assert!(weak_overlap(s(&[1, 2, 3]), s(&[3, 4])));
    }

    #[test]
    fn nest_examples() {
        let g5 = building_set(&WeightVector::ones(5).unwrap());
        assert!(is_nest(&sets(&[&[1, 2, 3], &[1, 2], &[4, 5]]), &g5));
        let g3 = building_set(&WeightVector::ones(3).unwrap());
        assert!(!is_nest(&sets(&[&[1, 2], &[2, 3]]), &g3));
        assert!(is_nest(&[], &g3));
        let light = building_set(&WeightVector::parse("1/2,1/2,1/2").unwrap());
        assert!(!is_nest(&sets(&[&[1, 2]]), &light));
    }

    #[test]
    fn enumerate_nests_small() {
        let g3 = building_set(&WeightVector::ones(3).unwrap());
        let nests = enumerate_nests(&g3, DEFAULT_NEST_CAP).unwrap();
        let expected: Vec<Nest> = [
            vec![],
            vec![&[1, 2, 3][..]],
            vec![&[1, 2][..]],
            vec![&[1, 3][..]],
            vec![&[2, 3][..]],
            vec![&[1, 2, 3][..], &[1, 2][..]],
            vec![&[1, 2, 3][..], &[1, 3][..]],
            vec![&[1, 2, 3][..], &[2, 3][..]],
        ]
        .into_iter()
        .map(|v| Nest(sets(&v)))
        .collect();
        assert_eq!(nests, expected);

        let half = building_set(&WeightVector::parse("1/2,1/2,1/2").unwrap());
        assert_eq!(enumerate_nests(&half, DEFAULT_NEST_CAP).unwrap().len(), 2);
        let g2 = building_set(&WeightVector::ones(2).unwrap());
        assert_eq!(enumerate_nests(&g2, DEFAULT_NEST_CAP).unwrap().len(), 2);
    }

    #[test]
    fn enumerate_nests_respects_cap() {
        let g5 = building_set(&WeightVector::ones(5).unwrap());
        assert_eq!(g5.len(), 26);
        assert!(matches!(
            enumerate_nests(&g5, DEFAULT_NEST_CAP),
            Err(Error::EnumerationCap { size: 26, cap: 20 })
        ));
        assert!(enumerate_nests(&g5, 26).is_ok());
    }

    #[test]
    fn factor_decomposition_examples() {
        assert_eq!(
            factor_decomposition(&sets(&[&[1, 2], &[2, 3], &[4, 5]])),
            sets(&[&[1, 2, 3], &[4, 5]])
        );
        assert_eq!(factor_decomposition(&sets(&[&[1, 2]])), sets(&[&[1, 2]]));
        assert_eq!(
            factor_decomposition(&sets(&[&[1, 2], &[3, 4]])),
            sets(&[&[1, 2], &[3, 4]])
        );
        // a late set bridging two earlier components
        assert_eq!(
            factor_decomposition(&sets(&[&[1, 2], &[5, 6], &[3, 4], &[2, 3]])),
            sets(&[&[1, 2, 3, 4], &[5, 6]])
        );
    }

    #[test]
    fn prefix_examples() {
        let g4 = building_set(&WeightVector::ones(4).unwrap());
        assert!(prefix_is_building_set(g4.elements()));
        assert!(prefix_is_building_set(&fm_order(&g4)));
        assert!(!prefix_is_building_set(&sets(&[&[1, 2], &[1, 3], &[2, 3]])));
    }

    #[test]
    fn fm_order_examples() {
        let g3 = building_set(&WeightVector::ones(3).unwrap());
        assert_eq!(fm_order(&g3), sets(&[&[1, 2], &[1, 2, 3], &[1, 3], &[2, 3]]));
        let half = building_set(&WeightVector::parse("1/2,1/2,1/2").unwrap());
        assert_eq!(fm_order(&half), sets(&[&[1, 2, 3]]));
        let g4 = building_set(&WeightVector::ones(4).unwrap());
        assert_eq!(
            fm_order(&g4),
            sets(&[
                &[1, 2],
                &[1, 2, 3],
                &[1, 3],
                &[2, 3],
                &[1, 2, 3, 4],
                &[1, 2, 4],
                &[1, 3, 4],
                &[2, 3, 4],
                &[1, 4],
                &[2, 4],
                &[3, 4]
            ])
        );
    }

    #[test]
    fn with_order_validates() {
        let w = WeightVector::ones(3).unwrap();
        let ok = OrderedBuildingSet::with_order(w.clone(), sets(&[&[1, 2, 3], &[2, 3], &[1, 3], &[1, 2]]));
        assert!(ok.is_ok());
        let bad = OrderedBuildingSet::with_order(w.clone(), sets(&[&[1, 2], &[1, 2, 3], &[1, 3], &[2, 3]]));
        assert!(matches!(bad, Err(Error::InadmissibleOrder(_))));
        let missing = OrderedBuildingSet::with_order(w, sets(&[&[1, 2, 3], &[1, 2], &[1, 3]]));
        assert!(missing.is_err());
    }

    #[test]
    fn index_set_labels() {
        assert_eq!(IndexSet::of(&[1, 2, 3]).label(), "123");
        assert_eq!(IndexSet::of(&[1, 10]).label(), "1_10");
        assert_eq!(IndexSet::of(&[2, 5]).consecutive_pairs(), vec![(2, 5)]);
        assert!(IndexSet::new(&[]).is_err());
        assert!(IndexSet::new(&[0]).is_err());
    }
}
