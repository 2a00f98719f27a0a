//! Chow-theoretic data of a cellular base variety.
//!
//! Only projective space ships, but everything downstream reads the base
//! through [`CellularBase`]: Chern classes of the tangent bundle, the
//! Künneth class of the diagonal in `X × X`, and the truncation `h^{m+1}`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularBase {
    /// Short tag, e.g. `pm`.
    pub kind: String,
    pub m: usize,
    pub hyperplane_symbol: String,
    /// `c_i(T_X) = tangent_chern[i] * h^i` for `i = 0..=m`.
    pub tangent_chern: Vec<BigInt>,
    /// Terms `(i, j, c)` of the diagonal class `sum c * h_a^i * h_b^j`.
    pub diagonal_class_template: Vec<(u8, u8, BigInt)>,
    pub poincare: Vec<u64>,
}

/// `X = P^m`: `c(T) = (1+h)^{m+1}` and `[Δ] = sum_{i+j=m} h_a^i h_b^j`.
pub fn projective_space(m: i64) -> Result<CellularBase> {
    if m <= 0 {
        return Err(Error::InvalidBaseDimension(m));
    }
    let m = m as usize;
    let tangent_chern = (0..=m)
        .map(|i| binomial(BigInt::from(m + 1), BigInt::from(i)))
        .collect();
    let diagonal_class_template = (0..=m)
        .rev()
        .map(|i| (i as u8, (m - i) as u8, BigInt::from(1)))
        .collect();
    let base = CellularBase {
        kind: "pm".into(),
        m,
        hyperplane_symbol: "h".into(),
        tangent_chern,
        diagonal_class_template,
        poincare: vec![1; m + 1],
    };
    base.validate()?;
    Ok(base)
}

impl CellularBase {
    /// Structural checks: `c_0 = 1`, one Chern class per degree, a diagonal
    /// class homogeneous of degree `m` whose restriction to `h_a = h_b`
    /// equals the top Chern class (self-intersection of the diagonal).
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidPresentation(format!("base data: {msg}")));
        if self.tangent_chern.len() != self.m + 1 || self.tangent_chern[0] != BigInt::from(1) {
            return bad("tangent Chern classes must be c_0 = 1, ..., c_m");
        }
        if self
            .diagonal_class_template
            .iter()
            .any(|(i, j, _)| *i as usize + *j as usize != self.m)
        {
            return bad("diagonal class must be homogeneous of degree m");
        }
        let restricted: BigInt = self.diagonal_class_template.iter().map(|t| t.2.clone()).sum();
        if restricted != self.tangent_chern[self.m] {
            return bad("diagonal restricted to h_a = h_b differs from c_m");
        }
        if self.poincare.len() != self.m + 1 {
            return bad("Poincaré polynomial must have m + 1 coefficients");
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    /// `p^*(c_i(T_X))` where `h_var` is the hyperplane class of the factor.
    pub fn tangent_chern_class(&self, i: usize, nvars: usize, h_var: usize) -> MultiPoly {
        let mut exps = vec![0u8; nvars];
        exps[h_var] = i as u8;
        MultiPoly::monomial(
            Monomial::from_exponents(exps),
            BigRational::from_integer(self.tangent_chern[i].clone()),
        )
    }

    /// Class of the diagonal `Δ_{a,b}` in terms of the two hyperplane classes.
    pub fn diagonal_class(&self, nvars: usize, h_a: usize, h_b: usize) -> MultiPoly {
        let terms = self
            .diagonal_class_template
            .iter()
            .map(|(i, j, c)| {
                let mut exps = vec![0u8; nvars];
                exps[h_a] += i;
                exps[h_b] += j;
                (Monomial::from_exponents(exps), BigRational::from_integer(c.clone()))
            })
            .collect();
        MultiPoly::from_terms(nvars, terms)
    }

    /// `h^{m+1}` for the given factor.
    pub fn truncation(&self, nvars: usize, h_var: usize) -> MultiPoly {
        let mut exps = vec![0u8; nvars];
        exps[h_var] = (self.m + 1) as u8;
        MultiPoly::monomial(Monomial::from_exponents(exps), BigRational::from_integer(1.into()))
    }
}

pub fn base_poincare(base: &CellularBase) -> Vec<u64> {
    base.poincare.clone()
}

/// Coefficients of `P(t)^n`, the Poincaré polynomial of `X^n`.
pub fn product_poincare(base: &CellularBase, n: usize) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..n {
        let mut next = vec![0u64; acc.len() + base.poincare.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in base.poincare.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableSet;

    fn ring() -> VariableSet {
        VariableSet::new(vec!["ha".into(), "hb".into()])
    }

    /// Coefficients of (1+h)^{m+1}, computed by repeated multiplication.
    fn euler_sequence(m: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::from(1)];
        for _ in 0..=m {
            let mut next = vec![BigInt::from(0); c.len() + 1];
            for (i, x) in c.iter().enumerate() {
                next[i] += x;
                next[i + 1] += x;
            }
            c = next;
        }
        c.truncate(m + 1);
        c
    }

    #[test]
    fn p1_and_p2_data() {
        let r = ring();
        let p1 = projective_space(1).unwrap();
        assert_eq!(p1.tangent_chern, euler_sequence(1));
        assert_eq!(r.format(&p1.diagonal_class(2, 0, 1)), "ha + hb");
        let p2 = projective_space(2).unwrap();
        assert_eq!(p2.tangent_chern, vec![1.into(), 3.into(), 3.into()]);
        assert_eq!(r.format(&p2.diagonal_class(2, 0, 1)), "ha^2 + ha*hb + hb^2");
        assert_eq!(r.format(&p2.tangent_chern_class(1, 2, 0)), "3*ha");
    }

    #[test]
    fn euler_class_identity_and_poincare() {
        for m in 1..=6 {
            let b = projective_space(m).unwrap();
            assert_eq!(b.tangent_chern, euler_sequence(m as usize));
            b.validate().unwrap();
            assert_eq!(base_poincare(&b).iter().sum::<u64>(), m as u64 + 1);
        }
        assert_eq!(base_poincare(&projective_space(3).unwrap()), vec![1, 1, 1, 1]);
        assert!(projective_space(0).is_err());
        assert!(projective_space(-2).is_err());
    }

    #[test]
    fn validation_catches_bad_diagonal() {
        let mut b = projective_space(2).unwrap();
        b.diagonal_class_template.pop();
        assert!(b.validate().is_err());
    }

    #[test]
    fn kunneth_poincare() {
        let b = projective_space(1).unwrap();
        assert_eq!(product_poincare(&b, 3), vec![1, 3, 3, 1]);
        let b = projective_space(2).unwrap();
        assert_eq!(product_poincare(&b, 2), vec![1, 2, 3, 2, 1]);
    }
}
