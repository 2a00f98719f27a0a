//! Gröbner-free graded ranks by plain Gaussian elimination.
//!
//! The degree-`d` piece of a homogeneous ideal is spanned by `m * g` for
//! generators `g` and monomials `m` of complementary degree. Its rank, taken
//! away from the number of monomials of degree `d`, gives the dimension of
//! the quotient in that degree without any S-polynomial machinery.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};

type Row = BTreeMap<Monomial, BigRational>;

/// Row echelon form over Q keyed by pivot monomial.
#[derive(Default)]
struct Echelon {
    pivots: HashMap<Monomial, Row>,
}

impl Echelon {
    fn insert(&mut self, mut row: Row) {
        while let Some((lead, coeff)) = row.last_key_value().map(|(k, v)| (k.clone(), v.clone())) {
            let Some(pivot) = self.pivots.get(&lead) else {
                break;
            };
            let factor = coeff / pivot.get(&lead).unwrap();
            for (m, c) in pivot {
                let delta = c * &factor;
                let entry = row.entry(m.clone()).or_insert_with(BigRational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    row.remove(m);
                }
            }
        }
        if let Some((lead, _)) = row.last_key_value() {
            self.pivots.insert(lead.clone(), row);
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Rank of the degree-`degree` slice of the ideal generated by `generators`.
pub fn ideal_slice_rank(nvars: usize, generators: &[MultiPoly], degree: u32) -> Result<usize> {
    let mut echelon = Echelon::default();
    for g in generators {
        if g.is_zero() {
            continue;
        }
        let d = g
            .homogeneous_degree()
            .ok_or_else(|| Error::Grading("generator is not homogeneous".into()))?;
        if d > degree {
            continue;
        }
        let caps = vec![u8::try_from(degree - d).unwrap_or(u8::MAX); nvars];
        for m in Monomial::all_of_degree(nvars, degree - d, &caps) {
            let row: Row = g
                .terms()
                .iter()
                .map(|(x, c)| (x.mul(&m), c.clone()))
                .collect();
            echelon.insert(row);
        }
    }
    Ok(echelon.rank())
}

/// Number of monomials of the given degree in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> u64 {
    // C(nvars + degree - 1, degree)
    if nvars == 0 {
        return u64::from(degree == 0);
    }
    let mut acc: u128 = 1;
    for i in 0..degree as u128 {
        acc = acc * (nvars as u128 + i) / (i + 1);
    }
    acc as u64
}

/// Quotient dimensions in degrees `0..=top` by direct linear algebra.
pub fn linear_hilbert_function(nvars: usize, generators: &[MultiPoly], top: u32) -> Result<Vec<u64>> {
    (0..=top)
        .map(|d| Ok(monomial_count(nvars, d) - ideal_slice_rank(nvars, generators, d)? as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableSet;

    #[test]
    fn counts_monomials() {
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(15, 4), 3060);
        assert_eq!(monomial_count(0, 0), 1);
        assert_eq!(monomial_count(4, 0), 1);
    }

    #[test]
    fn matches_hand_count() {
        let r = VariableSet::new(vec!["x".into(), "y".into()]);
        let gens = vec![r.parse("x^2").unwrap(), r.parse("y^2").unwrap(), r.parse("x*y - y^2").unwrap()];
        // x^2, y^2, xy all vanish in degree 2
        assert_eq!(linear_hilbert_function(2, &gens, 3).unwrap(), vec![1, 2, 0, 0]);
    }
}
