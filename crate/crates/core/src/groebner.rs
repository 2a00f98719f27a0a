//! Degree-truncated Buchberger algorithm for homogeneous ideals over Q.
//!
//! Pairs are processed in increasing degree, so a basis truncated at degree
//! `d` is a Gröbner basis for every graded piece of degree `<= d`. That is
//! all that is needed for normal forms and Hilbert functions of Artinian
//! graded rings whose top degree is known.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroebnerLimits {
    /// Abort once the basis grows beyond this many elements.
    pub max_basis: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits { max_basis: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    truncation: u32,
    basis: Vec<MultiPoly>,
    index: LeadIndex,
}

struct Pair {
    first: usize,
    second: usize,
    lcm: Monomial,
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly, lcm: &Monomial) -> MultiPoly {
    let (lf, cf) = f.leading().expect("nonzero");
    let (lg, cg) = g.leading().expect("nonzero");
    let a = f.mul_term(&lf.quotient_of(lcm), &cf.recip());
    let b = g.mul_term(&lg.quotient_of(lcm), &cg.recip());
    a.sub(&b)
}

/// Leading monomials of a basis with their support masks, for fast
/// divisor lookup.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct LeadIndex {
    entries: Vec<(u64, Monomial)>,
}

impl LeadIndex {
    fn of(basis: &[MultiPoly]) -> Self {
        let mut index = LeadIndex::default();
        for g in basis {
            index.push(g);
        }
        index
    }

    fn push(&mut self, g: &MultiPoly) {
        let lm = g.leading_monomial().expect("nonzero").clone();
        self.entries.push((lm.support_mask(), lm));
    }

    fn find(&self, m: &Monomial, skip: Option<usize>) -> Option<usize> {
        let mask = m.support_mask();
        self.entries
            .iter()
            .enumerate()
            .find(|(i, (lmask, lm))| Some(*i) != skip && lmask & !mask == 0 && lm.divides(m))
            .map(|(i, _)| i)
    }
}

/// Full reduction of `p` by `basis` (every term, not only the leading one).
fn reduce_indexed(p: &MultiPoly, basis: &[MultiPoly], index: &LeadIndex, skip: Option<usize>) -> MultiPoly {
    let nvars = p.nvars();
    let mut work: BTreeMap<Monomial, BigRational> =
        p.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut remainder: Vec<(Monomial, BigRational)> = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        match index.find(&m, skip) {
            None => remainder.push((m, c)),
            Some(k) => {
                let g = &basis[k];
                let (lm, lc) = g.leading().unwrap();
                let factor = if lc.is_one() { c } else { &c / lc };
                let shift = lm.quotient_of(&m);
                for (gm, gc) in &g.terms()[1..] {
                    let mono = gm.mul(&shift);
                    let delta = gc * &factor;
                    match work.get_mut(&mono) {
                        Some(v) => {
                            *v -= delta;
                            if v.is_zero() {
                                work.remove(&mono);
                            }
                        }
                        None => {
                            work.insert(mono, -delta);
                        }
                    }
                }
            }
        }
    }
    MultiPoly::from_terms(nvars, remainder)
}

impl GroebnerBasis {
    /// Gröbner basis of the ideal generated by `generators`, valid in all
    /// degrees `<= truncation`. Generators must be homogeneous.
    pub fn compute(
        nvars: usize,
        generators: &[MultiPoly],
        truncation: u32,
        limits: GroebnerLimits,
    ) -> Result<Self> {
        let mut by_degree: BTreeMap<u32, Vec<MultiPoly>> = BTreeMap::new();
        for g in generators {
            if g.nvars() != nvars {
                return Err(Error::Grading(format!(
                    "generator over {} variables in a ring with {nvars}",
                    g.nvars()
                )));
            }
            if g.is_zero() {
                continue;
            }
            let d = g
                .homogeneous_degree()
                .ok_or_else(|| Error::Grading("generator is not homogeneous".into()))?;
            if d <= truncation {
                by_degree.entry(d).or_default().push(g.clone());
            }
        }

        let mut basis: Vec<MultiPoly> = Vec::new();
        let mut index = LeadIndex::default();
        let mut pairs: Vec<Pair> = Vec::new();
        for degree in 0..=truncation {
            let mut candidates: Vec<MultiPoly> = by_degree.remove(&degree).unwrap_or_default();
            let (now, later): (Vec<Pair>, Vec<Pair>) =
                pairs.into_iter().partition(|p| p.lcm.degree() == degree);
            pairs = later;
            for pair in &now {
                candidates.push(s_polynomial(&basis[pair.first], &basis[pair.second], &pair.lcm));
            }
            let start = basis.len();
            for cand in candidates {
                let reduced = reduce_indexed(&cand, &basis, &index, None);
                if reduced.is_zero() {
                    continue;
                }
                let h = reduced.monic();
                pairs = update_pairs(&basis, pairs, &h, basis.len());
                index.push(&h);
                basis.push(h);
                // keep same-degree tails reduced; leading terms are untouched
                let last = basis.len() - 1;
                let lead = basis[last].leading().unwrap().0.clone();
                for i in start..last {
                    if basis[i].terms()[1..].iter().any(|(m, _)| lead.divides(m)) {
                        basis[i] = reduce_indexed(&basis[i], &basis, &index, Some(i));
                    }
                }
                if basis.len() > limits.max_basis {
                    return Err(Error::ResourceCap(format!(
                        "Gröbner basis exceeded {} elements",
                        limits.max_basis
                    )));
                }
            }
        }

        let basis = interreduce(basis);
        Ok(GroebnerBasis {
            nvars,
            truncation,
            index: LeadIndex::of(&basis),
            basis,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn elements(&self) -> &[MultiPoly] {
        &self.basis
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.basis.iter().filter_map(|g| g.leading_monomial())
    }

    /// Normal form of `p`. Every term of `p` must have degree within the
    /// truncation bound.
    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if let Some(d) = p.total_degree() {
            if d > self.truncation {
                return Err(Error::Grading(format!(
                    "degree {d} exceeds the basis truncation {}",
                    self.truncation
                )));
            }
        }
        Ok(reduce_indexed(p, &self.basis, &self.index, None))
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.index.find(m, None).is_none()
    }

    /// Standard monomials of degree `d`, largest first.
    pub fn standard_monomials(&self, degree: u32) -> Result<Vec<Monomial>> {
        if degree > self.truncation {
            return Err(Error::Grading(format!(
                "degree {degree} exceeds the basis truncation {}",
                self.truncation
            )));
        }
        // pure powers x_i^k among the leading monomials bound the search
        let mut caps = vec![u8::try_from(degree).unwrap_or(u8::MAX); self.nvars];
        for lm in self.leading_monomials() {
            let support: Vec<usize> = (0..self.nvars).filter(|&i| lm.exponent(i) > 0).collect();
            if let [i] = support[..] {
                caps[i] = caps[i].min(lm.exponent(i) - 1);
            }
        }
        Ok(Monomial::all_of_degree(self.nvars, degree, &caps)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect())
    }

    /// Dimensions of the graded pieces of the quotient in degrees `0..=top`.
    pub fn hilbert_function(&self, top: u32) -> Result<Vec<u64>> {
        (0..=top)
            .map(|d| self.standard_monomials(d).map(|v| v.len() as u64))
            .collect()
    }
}

fn update_pairs(basis: &[MultiPoly], old: Vec<Pair>, h: &MultiPoly, h_index: usize) -> Vec<Pair> {
    let lh = h.leading_monomial().unwrap();
    let mut fresh: Vec<(usize, Monomial, bool)> = basis
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let lg = g.leading_monomial().unwrap();
            (i, lg.lcm(lh), lg.is_coprime(lh))
        })
        .collect();

    // chain criterion among the new pairs
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    while let Some(item) = fresh.pop() {
        let dominated = fresh
            .iter()
            .chain(kept.iter())
            .any(|other| other.1.divides(&item.1));
        if item.2 || !dominated {
            kept.push(item);
        }
    }
    // one pair per lcm, and drop coprime pairs
    kept.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    kept.dedup_by(|b, a| a.1 == b.1);
    let mut out: Vec<Pair> = old
        .into_iter()
        .filter(|p| {
            let l1 = basis[p.first].leading_monomial().unwrap().lcm(lh);
            let l2 = basis[p.second].leading_monomial().unwrap().lcm(lh);
            !(lh.divides(&p.lcm) && l1 != p.lcm && l2 != p.lcm)
        })
        .collect();
    out.extend(kept.into_iter().filter(|k| !k.2).map(|(i, lcm, _)| Pair {
        first: i,
        second: h_index,
        lcm,
    }));
    out
}

fn interreduce(basis: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, f)| {
            let lf = f.leading_monomial().unwrap();
            j != i && lf.divides(lg) && (lf != lg || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let index = LeadIndex::of(&minimal);
    let reduced: Vec<MultiPoly> = minimal
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let (lm, lc) = g.leading().unwrap();
            let tail = MultiPoly::from_terms(g.nvars(), g.terms()[1..].to_vec());
            let tail = reduce_indexed(&tail, &minimal, &index, Some(i));
            MultiPoly::monomial(lm.clone(), lc.clone()).add(&tail).monic()
        })
        .collect();
    debug_assert!(reduced.iter().all(|g| g.leading().unwrap().1.is_one()));
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableSet;

    fn ring(names: &[&str]) -> VariableSet {
        VariableSet::new(names.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn twisted_cubic_style_ideal() {
        // x*z - y^2, y*w - z^2, x*w - y*z: the twisted cubic, Hilbert function 3d+1
        let r = ring(&["x", "y", "z", "w"]);
        let gens: Vec<MultiPoly> = ["x*z - y^2", "y*w - z^2", "x*w - y*z"]
            .iter()
            .map(|s| r.parse(s).unwrap())
            .collect();
        let gb = GroebnerBasis::compute(4, &gens, 6, GroebnerLimits::default()).unwrap();
        assert_eq!(gb.hilbert_function(6).unwrap(), vec![1, 4, 7, 10, 13, 16, 19]);
        for g in &gens {
            assert!(gb.normal_form(g).unwrap().is_zero());
        }
    }

    #[test]
    fn truncated_point_ring() {
        // k[x,y]/(x^2, y^2): Hilbert function 1,2,1,0
        let r = ring(&["x", "y"]);
        let gens = vec![r.parse("x^2").unwrap(), r.parse("y^2").unwrap()];
        let gb = GroebnerBasis::compute(2, &gens, 3, GroebnerLimits::default()).unwrap();
        assert_eq!(gb.hilbert_function(3).unwrap(), vec![1, 2, 1, 0]);
        let xy = r.parse("x*y").unwrap();
        assert_eq!(gb.normal_form(&xy).unwrap(), xy);
        assert!(gb.normal_form(&r.parse("x^3*y").unwrap()).is_err());
    }

    #[test]
    fn rejects_inhomogeneous() {
        let r = ring(&["x", "y"]);
        let gens = vec![r.parse("x^2 + y").unwrap()];
        assert!(matches!(
            GroebnerBasis::compute(2, &gens, 3, GroebnerLimits::default()),
            Err(Error::Grading(_))
        ));
    }

    #[test]
    fn reduced_basis_is_canonical() {
        let r = ring(&["x", "y", "z"]);
        let a: Vec<MultiPoly> = ["x*y - z^2", "y^2 - x*z"].iter().map(|s| r.parse(s).unwrap()).collect();
        let b: Vec<MultiPoly> = ["x*y - z^2 + y^2 - x*z", "y^2 - x*z", "3*x*y - 3*z^2"]
            .iter()
            .map(|s| r.parse(s).unwrap())
            .collect();
        let ga = GroebnerBasis::compute(3, &a, 5, GroebnerLimits::default()).unwrap();
        let gb = GroebnerBasis::compute(3, &b, 5, GroebnerLimits::default()).unwrap();
        assert_eq!(ga.elements(), gb.elements());
    }
}
