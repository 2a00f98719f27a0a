//! Reduction and forgetful morphisms, described by their blowup centers.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::combinatorics::{building_set, IndexSet, OrderedBuildingSet, WeightVector};
use crate::error::{Error, Result};

/// Centers blown up by the reduction `X_A[n] -> X_B[n]` for `B <= A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionData {
    #[serde(rename = "source")]
    pub source_weights: WeightVector,
    #[serde(rename = "target")]
    pub target_weights: WeightVector,
    /// `G_A \ G_B`, in the order of `G_A`.
    pub extra_centers: Vec<IndexSet>,
}

pub fn reduction_centers(source: &WeightVector, target: &WeightVector) -> Result<ReductionData> {
    target.dominated_by(source)?;
    let g_source = building_set(source);
    let extra_centers = g_source
        .elements()
        .iter()
        .copied()
        .filter(|s| !target.is_heavy(*s))
        .collect();
    Ok(ReductionData {
        source_weights: source.clone(),
        target_weights: target.clone(),
        extra_centers,
    })
}

/// Checks that the reduction `A -> C` blows up exactly the disjoint union of
/// the centers of `A -> B` and `B -> C`.
pub fn composition_check(a: &WeightVector, b: &WeightVector, c: &WeightVector) -> Result<bool> {
    let ab = reduction_centers(a, b)?;
    let bc = reduction_centers(b, c)?;
    let ac = reduction_centers(a, c)?;
    let first: HashSet<IndexSet> = ab.extra_centers.iter().copied().collect();
    let second: HashSet<IndexSet> = bc.extra_centers.iter().copied().collect();
    let whole: HashSet<IndexSet> = ac.extra_centers.iter().copied().collect();
    let disjoint = first.is_disjoint(&second);
    let union: HashSet<IndexSet> = first.union(&second).copied().collect();
    Ok(disjoint && union == whole)
}

/// Data of the forgetful morphism keeping the labels in `kept`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForgetfulData {
    #[serde(rename = "source")]
    pub source_weights: WeightVector,
    pub kept_labels: IndexSet,
    /// Building set of the restricted weights on `{1..r}`.
    #[serde(rename = "target")]
    pub target_building_set: OrderedBuildingSet,
}

impl ForgetfulData {
    /// Label in `{1..n}` of the relabeled point `i` in `{1..r}`.
    pub fn original_label(&self, relabeled: usize) -> usize {
        self.kept_labels.members()[relabeled - 1]
    }

    /// Target elements expressed in the original labels.
    pub fn target_in_source_labels(&self) -> Vec<IndexSet> {
        let kept = self.kept_labels.members();
        self.target_building_set
            .elements()
            .iter()
            .map(|s| {
                let m: Vec<usize> = s.iter().map(|i| kept[i - 1]).collect();
                IndexSet::of(&m)
            })
            .collect()
    }
}

pub fn forgetful_data(weights: &WeightVector, kept: &[usize]) -> Result<ForgetfulData> {
    if kept.is_empty() {
        return Err(Error::EmptyKept);
    }
    let kept_set = IndexSet::new(kept)?;
    if kept_set.max_label() > weights.len() {
        return Err(Error::InvalidIndexSet(format!(
            "kept labels {kept_set} exceed n = {}",
            weights.len()
        )));
    }
    let restricted: Vec<BigRational> = kept_set.iter().map(|i| weights.weight(i).clone()).collect();
    let target_weights = WeightVector::new(restricted)?;
    Ok(ForgetfulData {
        source_weights: weights.clone(),
        kept_labels: kept_set,
        target_building_set: building_set(&target_weights),
    })
}

/// Uniform weights `1/(n-k)`, the right end of the admissible interval
/// `(1/(n-k+1), 1/(n-k)]`; the heavy sets are exactly those of size `> n-k`.
pub fn mustata_weights(n: usize, k: usize) -> Result<WeightVector> {
    if n == 0 || k >= n {
        return Err(Error::InvalidMustata { n, k });
    }
    let eps = BigRational::new(BigInt::from(1), BigInt::from(n - k));
    WeightVector::uniform(n, eps)
}
