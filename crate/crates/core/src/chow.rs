//! Chow rings of weighted Fulton-MacPherson compactifications of `X^n`.
//!
//! Two routes compute the graded ranks:
//!
//! * the closed presentation over `A(X^n)[D^S]` (`theorem8_ideal`), whose
//!   Hilbert function is read off a Gröbner basis;
//! * the blowup recursion (`keel_betti`), which walks the centers of `G_A`
//!   in order and adds `sum_{i=1}^{d-1} rank A^{k-i}(Z)` for each center `Z`
//!   of codimension `d`. The ranks of `Z` come from the presentation of the
//!   intermediate blowup modulo the kernel of restriction to `Z`.
//!
//! Ring variables are laid out as `D` variables in building-set order
//! followed by `h_1..h_n`; monomials use grevlex with variable 0 largest.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::base::{product_poincare, projective_space, CellularBase};
use crate::combinatorics::{
    building_set, overlaps, weak_overlap, IndexSet, OrderedBuildingSet, WeightVector,
};
use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, GroebnerLimits};
use crate::linalg::linear_hilbert_function;
use crate::poly::{Monomial, MultiPoly, VariableSet};

/// Hard limits on presentation size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_vars: usize,
    pub max_degree: u32,
    pub groebner: GroebnerLimits,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vars: 40,
            max_degree: 12,
            groebner: GroebnerLimits::default(),
        }
    }
}

/// Positions of the `D` and `h` variables of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableLayout {
    n: usize,
    divisors: Vec<IndexSet>,
    vars: VariableSet,
}

impl VariableLayout {
    pub fn new(n: usize, divisors: Vec<IndexSet>, hyperplane_symbol: &str) -> Self {
        let mut names: Vec<String> = divisors.iter().map(|s| format!("D_{}", s.label())).collect();
        names.extend((1..=n).map(|a| format!("{hyperplane_symbol}{a}")));
        VariableLayout {
            n,
            divisors,
            vars: VariableSet::new(names),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &VariableSet {
        &self.vars
    }

    pub fn divisors(&self) -> &[IndexSet] {
        &self.divisors
    }

    /// Variable index of `h_a`.
    pub fn h(&self, label: usize) -> usize {
        self.divisors.len() + label - 1
    }

    /// Variable index of `D^S`, if `S` has one.
    pub fn d(&self, set: IndexSet) -> Option<usize> {
        self.divisors.iter().position(|s| *s == set)
    }

    pub fn h_var(&self, label: usize) -> MultiPoly {
        MultiPoly::var(self.nvars(), self.h(label))
    }

    pub fn d_var(&self, set: IndexSet) -> Option<MultiPoly> {
        self.d(set).map(|i| MultiPoly::var(self.nvars(), i))
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.nvars())
    }

    /// Sum of `D^I` over the divisors accepted by `keep`.
    pub fn divisor_sum(&self, keep: impl Fn(usize, IndexSet) -> bool) -> MultiPoly {
        self.divisors
            .iter()
            .enumerate()
            .filter(|(i, s)| keep(*i, **s))
            .fold(self.zero(), |acc, (i, _)| acc.add(&MultiPoly::var(self.nvars(), i)))
    }

    /// The point class `h_1^m ... h_n^m`.
    pub fn point_monomial(&self, m: usize) -> Monomial {
        let mut exps = vec![0u8; self.nvars()];
        for a in 1..=self.n {
            exps[self.h(a)] = m as u8;
        }
        Monomial::from_exponents(exps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChernKind {
    /// `c_{a,b}(t)`, leading coefficient `(-1)^m`.
    Pair,
    /// Monic Chern polynomial of a diagonal or of a dominant transform.
    Monic,
}

/// Polynomial `sum coeffs[i] * t^i` with coefficients in a Chow ring.
#[derive(Clone, PartialEq, Eq)]
pub struct ChernPoly {
    pub kind: ChernKind,
    coeffs: Vec<MultiPoly>,
}

impl ChernPoly {
    pub fn new(kind: ChernKind, mut coeffs: Vec<MultiPoly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ChernPoly { kind, coeffs }
    }

    pub fn coefficients(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    /// Degree in `t`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> &MultiPoly {
        self.coeffs.last().expect("nonempty")
    }

    pub fn constant_term(&self) -> &MultiPoly {
        &self.coeffs[0]
    }

    fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    /// Value at `t = x`, by Horner's rule.
    pub fn evaluate(&self, x: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.nvars());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn mul(&self, other: &ChernPoly) -> ChernPoly {
        let nvars = self.nvars();
        let mut coeffs = vec![MultiPoly::zero(nvars); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        ChernPoly::new(ChernKind::Monic, coeffs)
    }

    /// `P(-t)`.
    pub fn reflect(&self, kind: ChernKind) -> ChernPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        ChernPoly::new(kind, coeffs)
    }

    pub fn is_monic(&self) -> bool {
        *self.leading_coefficient() == MultiPoly::one(self.nvars())
    }

    pub fn format(&self, vars: &VariableSet) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = vars.format(c);
            parts.push(match i {
                0 => coeff,
                1 => format!("({coeff})*t"),
                _ => format!("({coeff})*t^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for ChernPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChernPoly")
            .field("kind", &self.kind)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

/// Signature of a pair Chern polynomial builder; swapping it in lets the
/// verification suite inject faults into one route only.
pub type PairChernFn = fn(&CellularBase, &VariableLayout, usize, usize) -> ChernPoly;

/// `c_{a,b}(t) = sum_{i=1}^m (-1)^i p_a^*(c_{m-i}) t^i + [Δ_{a,b}]`.
pub fn chern_poly_pair(base: &CellularBase, layout: &VariableLayout, a: usize, b: usize) -> ChernPoly {
    assert_ne!(a, b, "pair Chern polynomial needs two distinct labels");
    let nvars = layout.nvars();
    let m = base.dimension();
    let mut coeffs = vec![base.diagonal_class(nvars, layout.h(a), layout.h(b))];
    for i in 1..=m {
        let c = base.tangent_chern_class(m - i, nvars, layout.h(a));
        coeffs.push(if i % 2 == 1 { c.neg() } else { c });
    }
    ChernPoly::new(ChernKind::Pair, coeffs)
}

/// `P_{Δ_S}(t) = prod_k c_{i_k,i_{k+1}}(-t)` over consecutive sorted members.
pub fn chern_poly_diagonal(base: &CellularBase, layout: &VariableLayout, set: IndexSet) -> ChernPoly {
    let mut acc = ChernPoly::new(ChernKind::Monic, vec![MultiPoly::one(layout.nvars())]);
    for (a, b) in set.consecutive_pairs() {
        acc = acc.mul(&chern_poly_pair(base, layout, a, b).reflect(ChernKind::Monic));
    }
    acc
}

/// `P(t - u)` for a degree-one class `u`.
pub fn poly_shift(p: &ChernPoly, u: &MultiPoly) -> Result<ChernPoly> {
    if !u.is_zero() && u.homogeneous_degree() != Some(1) {
        return Err(Error::Grading("shift must be homogeneous of degree 1".into()));
    }
    let nvars = p.nvars();
    let minus_u = u.neg();
    let mut powers = vec![MultiPoly::one(nvars)];
    for k in 1..p.coeffs.len() {
        powers.push(powers[k - 1].mul(&minus_u));
    }
    let mut coeffs = vec![MultiPoly::zero(nvars); p.coeffs.len()];
    for (i, c) in p.coeffs.iter().enumerate() {
        // c * (t - u)^i = c * sum_k C(i,k) t^k (-u)^{i-k}
        for (k, slot) in coeffs.iter_mut().enumerate().take(i + 1) {
            let binom = BigRational::from_integer(binomial(BigInt::from(i), BigInt::from(k)));
            *slot = slot.add(&c.mul(&powers[i - k]).scale(&binom));
        }
    }
    Ok(ChernPoly::new(p.kind, coeffs))
}

/// Consecutive differences `h_{i_k} - h_{i_{k+1}}` generating `J_S`.
pub fn j_ideal(layout: &VariableLayout, set: IndexSet) -> Vec<MultiPoly> {
    set.consecutive_pairs()
        .into_iter()
        .map(|(a, b)| layout.h_var(a).sub(&layout.h_var(b)))
        .collect()
}

/// Generators of a presented ideal, grouped by where they come from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdealFamilies {
    /// `D^S * D^T` for overlapping `S`, `T`.
    pub overlap: Vec<MultiPoly>,
    /// `J_S * D^S`.
    pub linear: Vec<MultiPoly>,
    /// `D^S` times the Chern product of a weak overlap.
    pub weak_overlap: Vec<MultiPoly>,
    /// Chern relation of each center.
    pub chern: Vec<MultiPoly>,
    /// `h_a^{m+1}`.
    pub base: Vec<MultiPoly>,
    /// Extra generators: kernel of restriction to a center.
    pub kernel: Vec<MultiPoly>,
}

impl IdealFamilies {
    pub fn all(&self) -> impl Iterator<Item = &MultiPoly> {
        self.overlap
            .iter()
            .chain(&self.linear)
            .chain(&self.weak_overlap)
            .chain(&self.chern)
            .chain(&self.base)
            .chain(&self.kernel)
    }

    pub fn len(&self) -> usize {
        self.all().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A graded presentation of a Chow ring over `A(X^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub n: usize,
    pub base: CellularBase,
    pub weights: WeightVector,
    pub layout: VariableLayout,
    pub ideal: IdealFamilies,
}

impl Presentation {
    pub fn m(&self) -> usize {
        self.base.dimension()
    }

    /// Top degree `nm` of the variable.
    pub fn top_degree(&self) -> u32 {
        (self.n * self.m()) as u32
    }

    pub fn generators(&self) -> Vec<MultiPoly> {
        self.ideal.all().cloned().collect()
    }

    pub fn variables(&self) -> &VariableSet {
        self.layout.variables()
    }

    pub fn check_caps(&self, caps: &Caps) -> Result<()> {
        if self.layout.nvars() > caps.max_vars {
            return Err(Error::ResourceCap(format!(
                "{} variables exceed the cap of {}",
                self.layout.nvars(),
                caps.max_vars
            )));
        }
        if self.top_degree() > caps.max_degree {
            return Err(Error::ResourceCap(format!(
                "top degree nm = {} exceeds the cap of {}",
                self.top_degree(),
                caps.max_degree
            )));
        }
        Ok(())
    }

    pub fn with_kernel(mut self, kernel: Vec<MultiPoly>) -> Self {
        self.ideal.kernel = kernel;
        self
    }
}

fn base_truncations(base: &CellularBase, layout: &VariableLayout) -> Vec<MultiPoly> {
    (1..=layout.n())
        .map(|a| base.truncation(layout.nvars(), layout.h(a)))
        .collect()
}

fn pair_product(
    base: &CellularBase,
    layout: &VariableLayout,
    set: IndexSet,
    at: &MultiPoly,
    pair: PairChernFn,
) -> MultiPoly {
    set.consecutive_pairs()
        .into_iter()
        .fold(MultiPoly::one(layout.nvars()), |acc, (a, b)| {
            acc.mul(&pair(base, layout, a, b).evaluate(at))
        })
}

/// The closed presentation of `A(X_A[n])` with the default order of `G_A`.
pub fn theorem8_ideal(base: &CellularBase, weights: &WeightVector) -> Presentation {
    theorem8_ideal_ordered(base, &building_set(weights))
}

pub fn theorem8_ideal_ordered(base: &CellularBase, building: &OrderedBuildingSet) -> Presentation {
    theorem8_ideal_with(base, building, chern_poly_pair)
}

/// Closed presentation: over `A(X^n)[D^S : S in G_A]`, generated by
///
/// 1. `D^S D^T` for overlapping `S, T`;
/// 2. `(h_a - h_b) D^S` for consecutive `a < b` in `S`;
/// 3. `D^S * prod_{T pairs} c_{a,b}(sum_{I ⊇ S∪T} D^I)` for every `T ⊆ N`
///    meeting `S` in one label (`T` need not be in `G_A`);
/// 4. `prod_{S pairs} c_{a,b}(sum_{I ⊇ S} D^I)`;
///
/// plus `h_a^{m+1}`.
pub fn theorem8_ideal_with(
    base: &CellularBase,
    building: &OrderedBuildingSet,
    pair: PairChernFn,
) -> Presentation {
    let n = building.n();
    let elems = building.elements();
    let layout = VariableLayout::new(n, elems.to_vec(), &base.hyperplane_symbol);
    let mut ideal = IdealFamilies::default();
    let d = |s: IndexSet| layout.d_var(s).expect("building-set element");

    for (i, s) in elems.iter().enumerate() {
        for t in &elems[i + 1..] {
            if overlaps(*s, *t) {
                ideal.overlap.push(d(*s).mul(&d(*t)));
            }
        }
    }
    for s in elems {
        for g in j_ideal(&layout, *s) {
            ideal.linear.push(g.mul(&d(*s)));
        }
    }
    for s in elems {
        for t in IndexSet::all_diagonals(n).filter(|t| weak_overlap(*s, *t)) {
            let union = s.union(t);
            let at = layout.divisor_sum(|_, i| union.is_subset(i));
            ideal
                .weak_overlap
                .push(d(*s).mul(&pair_product(base, &layout, t, &at, pair)));
        }
    }
    for s in elems {
        let at = layout.divisor_sum(|_, i| s.is_subset(i));
        ideal.chern.push(pair_product(base, &layout, *s, &at, pair));
    }
    ideal.base = base_truncations(base, &layout);

    Presentation {
        n,
        base: base.clone(),
        weights: building.weights().clone(),
        layout,
        ideal,
    }
}

/// Layout after blowing up the first `blown` centers.
fn stage_layout(base: &CellularBase, building: &OrderedBuildingSet, blown: usize) -> VariableLayout {
    VariableLayout::new(
        building.n(),
        building.elements()[..blown].to_vec(),
        &base.hyperplane_symbol,
    )
}

/// `P_{Δ_I}(-sum_{I_l ⊇ I, l <= bound} Δ_{I_l})` in a stage layout.
fn shifted_diagonal_relation(
    base: &CellularBase,
    layout: &VariableLayout,
    set: IndexSet,
    bound: usize,
) -> MultiPoly {
    let sum = layout.divisor_sum(|l, i| l <= bound && set.is_subset(i));
    chern_poly_diagonal(base, layout, set).evaluate(&sum.neg())
}

/// Presentation after blowing up `blown` centers; `blown = 0` is `A(X^n)`.
fn stage_ring(base: &CellularBase, building: &OrderedBuildingSet, blown: usize) -> Presentation {
    let n = building.n();
    let layout = stage_layout(base, building, blown);
    let elems = &building.elements()[..blown];
    let mut ideal = IdealFamilies::default();
    let var = |k: usize| MultiPoly::var(layout.nvars(), k);

    for (k, s) in elems.iter().enumerate() {
        for (l, t) in elems.iter().enumerate().skip(k + 1) {
            if overlaps(*s, *t) {
                ideal.overlap.push(var(k).mul(&var(l)));
            }
        }
    }
    for (k, s) in elems.iter().enumerate() {
        for g in j_ideal(&layout, *s) {
            ideal.linear.push(g.mul(&var(k)));
        }
    }
    // weak overlaps I of I_k with I_k ∪ I <= I_{j-1}, where j = blown - 1
    for (k, s) in elems.iter().enumerate() {
        for t in IndexSet::all_diagonals(n).filter(|t| weak_overlap(*s, *t)) {
            let union_pos = building
                .position(s.union(t))
                .expect("unions containing a center are centers");
            if union_pos + 2 <= blown {
                let rel = shifted_diagonal_relation(base, &layout, t, union_pos);
                ideal.weak_overlap.push(var(k).mul(&rel));
            }
        }
    }
    for (k, s) in elems.iter().enumerate() {
        let _ = k;
        ideal
            .chern
            .push(shifted_diagonal_relation(base, &layout, *s, blown.saturating_sub(1)));
    }
    ideal.base = base_truncations(base, &layout);

    Presentation {
        n,
        base: base.clone(),
        weights: building.weights().clone(),
        layout,
        ideal,
    }
}

/// Kernel of `A(X_{blown-1}) -> A(Δ_{I_k}^{(blown-1)})`, generators in the
/// layout of `stage_ring(blown)`. Requires `k >= blown`.
fn center_kernel_after(
    base: &CellularBase,
    building: &OrderedBuildingSet,
    blown: usize,
    k: usize,
) -> Vec<MultiPoly> {
    let n = building.n();
    let layout = stage_layout(base, building, blown);
    let center = building.elements()[k];
    let mut out = j_ideal(&layout, center);
    for (m, s) in building.elements()[..blown].iter().enumerate() {
        if overlaps(*s, center) {
            out.push(MultiPoly::var(layout.nvars(), m));
        }
    }
    for t in IndexSet::all_diagonals(n).filter(|t| weak_overlap(center, *t)) {
        let union_pos = building
            .position(center.union(t))
            .expect("unions containing a center are centers");
        if union_pos < blown {
            out.push(shifted_diagonal_relation(base, &layout, t, union_pos));
        }
    }
    out
}

/// Presentation of the `j`-th intermediate blowup `X_j`, with variables
/// `Δ_{I_0}, ..., Δ_{I_j}` (named like the final `D` variables).
pub fn stage_presentation(
    base: &CellularBase,
    building: &OrderedBuildingSet,
    j: usize,
) -> Result<Presentation> {
    if j >= building.len() {
        return Err(Error::StageOutOfRange {
            index: j,
            len: building.len(),
        });
    }
    Ok(stage_ring(base, building, j + 1))
}

/// Generators of the kernel of restriction from `X_j` to the dominant
/// transform of the later center `I_k`.
pub fn center_kernel(
    base: &CellularBase,
    building: &OrderedBuildingSet,
    j: usize,
    k: usize,
) -> Result<Vec<MultiPoly>> {
    if k >= building.len() {
        return Err(Error::StageOutOfRange {
            index: k,
            len: building.len(),
        });
    }
    if k <= j {
        return Err(Error::IndexOrder { stage: j, center: k });
    }
    Ok(center_kernel_after(base, building, j + 1, k))
}

/// Presentation of the center `Δ_{I_k}` as it sits in the space obtained by
/// blowing up the first `k` centers.
pub fn center_presentation(
    base: &CellularBase,
    building: &OrderedBuildingSet,
    k: usize,
) -> Result<Presentation> {
    if k >= building.len() {
        return Err(Error::StageOutOfRange {
            index: k,
            len: building.len(),
        });
    }
    let kernel = center_kernel_after(base, building, k, k);
    Ok(stage_ring(base, building, k).with_kernel(kernel))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub ranks: Vec<u64>,
}

impl BettiTable {
    pub fn is_poincare_symmetric(&self) -> bool {
        let r = &self.ranks;
        !r.is_empty()
            && r[0] == 1
            && r[r.len() - 1] == 1
            && r.iter().eq(r.iter().rev())
    }

    pub fn euler_characteristic(&self) -> u64 {
        self.ranks.iter().sum()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranks.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A presentation together with a Gröbner basis of its ideal.
pub struct QuotientRing<'a> {
    presentation: &'a Presentation,
    basis: GroebnerBasis,
}

impl<'a> QuotientRing<'a> {
    /// Basis valid up to the top degree `nm`.
    pub fn new(presentation: &'a Presentation, caps: &Caps) -> Result<Self> {
        Self::with_truncation(presentation, presentation.top_degree(), caps)
    }

    pub fn with_truncation(presentation: &'a Presentation, truncation: u32, caps: &Caps) -> Result<Self> {
        presentation.check_caps(caps)?;
        let basis = GroebnerBasis::compute(
            presentation.layout.nvars(),
            &presentation.generators(),
            truncation,
            caps.groebner,
        )?;
        Ok(QuotientRing { presentation, basis })
    }

    pub fn presentation(&self) -> &Presentation {
        self.presentation
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly> {
        self.basis.normal_form(p)
    }

    /// Ranks of the graded pieces in degrees `0..=truncation`.
    pub fn hilbert_function(&self) -> Result<BettiTable> {
        Ok(BettiTable {
            ranks: self.basis.hilbert_function(self.basis.truncation())?,
        })
    }

    /// Integral of a top-degree class against the point class
    /// `h_1^m ... h_n^m`.
    pub fn degree(&self, p: &MultiPoly) -> Result<BigRational> {
        let top = self.presentation.top_degree();
        if !p.is_zero() && p.homogeneous_degree() != Some(top) {
            return Err(Error::Grading(format!(
                "degree needs a homogeneous class of degree {top}"
            )));
        }
        let standard = self.basis.standard_monomials(top)?;
        if standard.len() != 1 {
            return Err(Error::Grading(format!(
                "top graded piece has rank {}, expected 1",
                standard.len()
            )));
        }
        let point = MultiPoly::monomial(
            self.presentation.layout.point_monomial(self.presentation.m()),
            BigRational::one(),
        );
        let basis_mono = &standard[0];
        let point_coeff = self.normal_form(&point)?.coefficient(basis_mono);
        if point_coeff.is_zero() {
            return Err(Error::Grading("point class vanishes in the quotient".into()));
        }
        Ok(self.normal_form(p)?.coefficient(basis_mono) / point_coeff)
    }
}

pub fn normal_form(p: &MultiPoly, presentation: &Presentation) -> Result<MultiPoly> {
    if !p.is_homogeneous() {
        return Err(Error::Grading("normal_form expects a homogeneous polynomial".into()));
    }
    let truncation = p.total_degree().unwrap_or(0).max(presentation.top_degree());
    QuotientRing::with_truncation(presentation, truncation, &Caps::default())?.normal_form(p)
}

pub fn hilbert_function(presentation: &Presentation, caps: &Caps) -> Result<BettiTable> {
    QuotientRing::new(presentation, caps)?.hilbert_function()
}

pub fn degree(p: &MultiPoly, presentation: &Presentation) -> Result<BigRational> {
    QuotientRing::new(presentation, &Caps::default())?.degree(p)
}

/// Ranks by direct linear algebra in degrees `0..=top`, no Gröbner basis.
pub fn linear_ranks(presentation: &Presentation, top: u32) -> Result<Vec<u64>> {
    linear_hilbert_function(presentation.layout.nvars(), &presentation.generators(), top)
}

/// Ranks of `A(X_A[n])` from the blowup recursion: each center `Z` of
/// codimension `d` contributes `rank A^{k-i}(Z)` for `i = 1..d-1`.
pub fn keel_betti(base: &CellularBase, building: &OrderedBuildingSet, caps: &Caps) -> Result<BettiTable> {
    let n = building.n();
    let m = base.dimension();
    let top = (n * m) as u32;
    if top > caps.max_degree {
        return Err(Error::ResourceCap(format!(
            "top degree nm = {top} exceeds the cap of {}",
            caps.max_degree
        )));
    }
    let mut ranks = product_poincare(base, n);
    for (k, center) in building.elements().iter().enumerate() {
        let codim = m * (center.len() - 1);
        let center_dim = top - codim as u32;
        let presentation = center_presentation(base, building, k)?;
        let ring = QuotientRing::with_truncation(&presentation, center_dim, caps)?;
        let center_ranks = ring.hilbert_function()?.ranks;
        for i in 1..codim {
            for (deg, r) in center_ranks.iter().enumerate() {
                ranks[deg + i] += r;
            }
        }
    }
    Ok(BettiTable { ranks })
}

/// Serializable form of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub n: usize,
    pub m: usize,
    pub weights: WeightVector,
    pub variables: Vec<VariableJson>,
    pub ideal: IdealJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableJson {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub overlap: Vec<Vec<TermJson>>,
    pub linear: Vec<Vec<TermJson>>,
    pub weak_overlap: Vec<Vec<TermJson>>,
    pub chern: Vec<Vec<TermJson>>,
    pub base: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kernel: Vec<Vec<TermJson>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: std::collections::BTreeMap<String, u32>,
}

pub fn poly_to_json(p: &MultiPoly, vars: &VariableSet) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|(m, c)| TermJson {
            coeff: crate::combinatorics::format_rational(c),
            monomial: m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| (vars.names()[i].clone(), *e as u32))
                .collect(),
        })
        .collect()
}

pub fn poly_from_json(terms: &[TermJson], vars: &VariableSet) -> Result<MultiPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let c = crate::combinatorics::parse_rational(&t.coeff)
            .map_err(|e| Error::InvalidPresentation(e))?;
        let mut exps = vec![0u8; vars.len()];
        for (name, e) in &t.monomial {
            let i = vars
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            exps[i] = u8::try_from(*e)
                .map_err(|_| Error::InvalidPresentation(format!("exponent {e} too large")))?;
        }
        out.push((Monomial::from_exponents(exps), c));
    }
    Ok(MultiPoly::from_terms(vars.len(), out))
}

impl Presentation {
    pub fn to_json(&self) -> PresentationJson {
        let vars = self.variables();
        let fam = |ps: &[MultiPoly]| ps.iter().map(|p| poly_to_json(p, vars)).collect();
        PresentationJson {
            n: self.n,
            m: self.m(),
            weights: self.weights.clone(),
            variables: vars
                .names()
                .iter()
                .map(|name| VariableJson {
                    name: name.clone(),
                    degree: 1,
                })
                .collect(),
            ideal: IdealJson {
                overlap: fam(&self.ideal.overlap),
                linear: fam(&self.ideal.linear),
                weak_overlap: fam(&self.ideal.weak_overlap),
                chern: fam(&self.ideal.chern),
                base: fam(&self.ideal.base),
                kernel: fam(&self.ideal.kernel),
            },
        }
    }

    /// Rebuild from JSON over `X = P^m`.
    pub fn from_json(json: &PresentationJson) -> Result<Presentation> {
        let base = projective_space(json.m as i64)?;
        if json.weights.len() != json.n {
            return Err(Error::InvalidPresentation("weights do not match n".into()));
        }
        let n = json.n;
        let names: Vec<&str> = json.variables.iter().map(|v| v.name.as_str()).collect();
        if json.variables.iter().any(|v| v.degree != 1) {
            return Err(Error::InvalidPresentation("all variables have degree 1".into()));
        }
        if names.len() < n {
            return Err(Error::InvalidPresentation("missing hyperplane variables".into()));
        }
        let split = names.len() - n;
        let mut divisors = Vec::with_capacity(split);
        for name in &names[..split] {
            let label = name
                .strip_prefix("D_")
                .ok_or_else(|| Error::InvalidPresentation(format!("bad divisor name {name}")))?;
            let members: Vec<usize> = if label.contains('_') {
                label.split('_').map(|x| x.parse().unwrap_or(0)).collect()
            } else {
                label.chars().map(|c| c.to_digit(10).unwrap_or(0) as usize).collect()
            };
            divisors.push(IndexSet::new(&members)?);
        }
        let layout = VariableLayout::new(n, divisors, &base.hyperplane_symbol);
        if layout.variables().names().iter().map(String::as_str).ne(names.iter().copied()) {
            return Err(Error::InvalidPresentation("unexpected variable names".into()));
        }
        let vars = layout.variables().clone();
        let fam = |ps: &[Vec<TermJson>]| -> Result<Vec<MultiPoly>> {
            ps.iter().map(|p| poly_from_json(p, &vars)).collect()
        };
        let ideal = IdealFamilies {
            overlap: fam(&json.ideal.overlap)?,
            linear: fam(&json.ideal.linear)?,
            weak_overlap: fam(&json.ideal.weak_overlap)?,
            chern: fam(&json.ideal.chern)?,
            base: fam(&json.ideal.base)?,
            kernel: fam(&json.ideal.kernel)?,
        };
        Ok(Presentation {
            n,
            base,
            weights: json.weights.clone(),
            layout,
            ideal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: i64) -> CellularBase {
        projective_space(m).unwrap()
    }

    fn w(text: &str) -> WeightVector {
        WeightVector::parse(text).unwrap()
    }

    fn layout(n: usize, m: i64, divisors: &[&[usize]]) -> VariableLayout {
        let _ = m;
        VariableLayout::new(n, divisors.iter().map(|s| IndexSet::of(s)).collect(), "h")
    }

    #[test]
    fn pair_polynomials() {
        let l = layout(2, 1, &[]);
        let c = chern_poly_pair(&p(1), &l, 1, 2);
        assert_eq!(c.format(l.variables()), "(-1)*t + h1 + h2");
        let c2 = chern_poly_pair(&p(2), &l, 1, 2);
        assert_eq!(c2.format(l.variables()), "(1)*t^2 + (-3*h1)*t + h1^2 + h1*h2 + h2^2");
        for m in 1..=4 {
            let b = p(m);
            let c = chern_poly_pair(&b, &l, 2, 1);
            assert_eq!(c.constant_term(), &b.diagonal_class(l.nvars(), l.h(2), l.h(1)));
            assert_eq!(c.degree(), m as usize);
        }
    }

    #[test]
    fn diagonal_polynomials() {
        let l = layout(3, 1, &[]);
        let b = p(1);
        let c = chern_poly_diagonal(&b, &l, IndexSet::of(&[1, 2]));
        assert_eq!(c.format(l.variables()), "(1)*t + h1 + h2");
        let c = chern_poly_diagonal(&b, &l, IndexSet::of(&[1, 2, 3]));
        let t1 = l.variables().parse("h1 + h2").unwrap();
        let t2 = l.variables().parse("h2 + h3").unwrap();
        assert_eq!(c.coefficients()[0], t1.mul(&t2));
        assert_eq!(c.coefficients()[1], t1.add(&t2));
        assert!(c.is_monic());
        for m in 1..=3 {
            let c = chern_poly_diagonal(&p(m), &l, IndexSet::of(&[1, 2, 3]));
            assert!(c.is_monic());
            assert_eq!(c.degree(), 2 * m as usize);
        }
    }

    #[test]
    fn shifts() {
        let l = layout(1, 1, &[&[1, 2]]);
        let e = l.d_var(IndexSet::of(&[1, 2])).unwrap();
        let one = MultiPoly::one(l.nvars());
        let zero = l.zero();
        let t = ChernPoly::new(ChernKind::Monic, vec![zero.clone(), one.clone()]);
        let s = poly_shift(&t, &e).unwrap();
        assert_eq!(s.coefficients(), &[e.neg(), one.clone()]);
        let t2 = ChernPoly::new(ChernKind::Monic, vec![zero.clone(), zero.clone(), one.clone()]);
        let s2 = poly_shift(&t2, &e).unwrap();
        assert_eq!(s2.coefficients(), &[e.mul(&e), e.scale_int(-2), one.clone()]);
        assert_eq!(poly_shift(&t2, &zero).unwrap(), t2);
        assert!(poly_shift(&t2, &e.mul(&e)).is_err());
    }

    #[test]
    fn j_ideal_generators() {
        let l = layout(3, 1, &[]);
        let v = l.variables();
        assert_eq!(j_ideal(&l, IndexSet::of(&[1, 3])), vec![v.parse("h1 - h3").unwrap()]);
        assert_eq!(
            j_ideal(&l, IndexSet::of(&[1, 2, 3])),
            vec![v.parse("h1 - h2").unwrap(), v.parse("h2 - h3").unwrap()]
        );
    }

    #[test]
    fn j_ideal_membership() {
        // h1^2 - h3^2 = (h1 - h3)(h1 + h3) lies in J_{13}
        let b = p(1);
        let weights = w("1/4,1/4,1/4");
        let mut pres = theorem8_ideal(&b, &weights);
        let extra = j_ideal(&pres.layout, IndexSet::of(&[1, 3]));
        pres = pres.with_kernel(extra);
        let f = pres.variables().parse("h1^2 - h3^2").unwrap();
        assert!(normal_form(&f, &pres).unwrap().is_zero());
    }

    #[test]
    fn smallest_closed_presentation() {
        let pres = theorem8_ideal(&p(1), &w("1,1"));
        let v = pres.variables();
        assert_eq!(v.names(), &["D_12", "h1", "h2"]);
        assert!(pres.ideal.overlap.is_empty());
        assert!(pres.ideal.weak_overlap.is_empty());
        assert_eq!(pres.ideal.chern, vec![v.parse("-D_12 + h1 + h2").unwrap()]);
        assert_eq!(pres.ideal.linear, vec![v.parse("D_12*h1 - D_12*h2").unwrap()]);
        assert_eq!(pres.ideal.base, vec![v.parse("h1^2").unwrap(), v.parse("h2^2").unwrap()]);
    }

    #[test]
    fn overlap_family_for_three_points() {
        let pres = theorem8_ideal(&p(1), &w("1,1,1"));
        let v = pres.variables();
        let expected: Vec<MultiPoly> = ["D_12*D_13", "D_12*D_23", "D_13*D_23"]
            .iter()
            .map(|s| v.parse(s).unwrap())
            .collect();
        assert_eq!(pres.ideal.overlap, expected);
    }

    #[test]
    fn light_weights_leave_only_truncations() {
        let pres = theorem8_ideal(&p(2), &w("1/3,1/3,1/3"));
        assert_eq!(pres.layout.nvars(), 3);
        assert_eq!(pres.ideal.len(), 3);
        assert_eq!(pres.ideal.base.len(), 3);
    }

    #[test]
    fn first_stage_is_single_blowup() {
        let b = p(1);
        let g = building_set(&w("1,1,1"));
        let stage = stage_presentation(&b, &g, 0).unwrap();
        let v = stage.variables();
        assert_eq!(v.names(), &["D_123", "h1", "h2", "h3"]);
        assert!(stage.ideal.overlap.is_empty());
        assert!(stage.ideal.weak_overlap.is_empty());
        assert_eq!(stage.ideal.linear.len(), 2);
        assert_eq!(
            stage.ideal.chern,
            vec![v.parse("D_123^2 - D_123*h1 - 2*D_123*h2 - D_123*h3 + h1*h2 + h1*h3 + h2^2 + h2*h3").unwrap()]
        );
        assert!(matches!(
            stage_presentation(&b, &g, 4),
            Err(Error::StageOutOfRange { index: 4, len: 4 })
        ));
    }

    #[test]
    fn two_points_stage_matches_closed_form() {
        let b = p(1);
        let g = building_set(&w("1,1"));
        let stage = stage_presentation(&b, &g, 0).unwrap();
        let closed = theorem8_ideal(&b, &w("1,1"));
        let caps = Caps::default();
        assert_eq!(hilbert_function(&stage, &caps).unwrap(), hilbert_function(&closed, &caps).unwrap());
        // P_{Δ_12}(-D) = c_{1,2}(D)
        assert_eq!(stage.ideal.chern, closed.ideal.chern);
    }

    #[test]
    fn base_case_center_kernel() {
        let b = p(1);
        let g = building_set(&w("1,1,1"));
        let kernel = center_kernel(&b, &g, 0, 1).unwrap();
        let stage = stage_presentation(&b, &g, 0).unwrap();
        let v = stage.variables();
        // I_1 = {1,2}; weak overlaps inside N with union N: {1,3}, {2,3}
        assert_eq!(kernel[0], v.parse("h1 - h2").unwrap());
        let p23 = v.parse("-D_123 + h2 + h3").unwrap();
        let p13 = v.parse("-D_123 + h1 + h3").unwrap();
        assert_eq!(kernel.len(), 3);
        assert!(kernel.contains(&p13));
        assert!(kernel.contains(&p23));
        assert!(matches!(center_kernel(&b, &g, 1, 1), Err(Error::IndexOrder { .. })));
        assert!(center_kernel(&b, &g, 0, 9).is_err());
    }

    #[test]
    fn pinned_ranks() {
        let caps = Caps::default();
        let t = hilbert_function(&theorem8_ideal(&p(1), &w("1,1,1")), &caps).unwrap();
        assert_eq!(t.ranks, vec![1, 4, 4, 1]);
        let t = hilbert_function(&theorem8_ideal(&p(2), &w("1,1")), &caps).unwrap();
        assert_eq!(t.ranks, vec![1, 3, 4, 3, 1]);
        let t = hilbert_function(&theorem8_ideal(&p(1), &w("1/2,1/2"))
            , &caps).unwrap();
        assert_eq!(t.ranks, vec![1, 2, 1]);
    }

    #[test]
    fn keel_small_cases() {
        let caps = Caps::default();
        let b = p(1);
        let g = building_set(&w("1/2,1/2,1/2"));
        assert_eq!(keel_betti(&b, &g, &caps).unwrap().ranks, vec![1, 4, 4, 1]);
        let g = building_set(&w("1/4,1/4,1/4"));
        assert_eq!(keel_betti(&b, &g, &caps).unwrap().ranks, vec![1, 3, 3, 1]);
        let g = building_set(&w("1,1,1"));
        assert_eq!(keel_betti(&b, &g, &caps).unwrap().ranks, vec![1, 4, 4, 1]);
    }

    #[test]
    fn normal_form_kills_relations() {
        let pres = theorem8_ideal(&p(1), &w("1,1,1"));
        let v = pres.variables();
        for text in ["D_12*D_13", "D_12*h1 - D_12*h2", "h1^2"] {
            let f = v.parse(text).unwrap();
            assert!(normal_form(&f, &pres).unwrap().is_zero(), "{text}");
        }
        assert!(normal_form(&v.parse("h1 + h2^2").unwrap(), &pres).is_err());
    }

    #[test]
    fn degree_of_point_and_self_intersection() {
        let pres = theorem8_ideal(&p(1), &w("1/2,1/2,1/2"));
        let v = pres.variables();
        let one = BigRational::one();
        assert_eq!(degree(&v.parse("h1*h2*h3").unwrap(), &pres).unwrap(), one);
        assert_eq!(
            degree(&v.parse("D_123^3").unwrap(), &pres).unwrap(),
            BigRational::from_integer((-4).into())
        );
        assert!(degree(&v.parse("D_123^2").unwrap(), &pres).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let pres = theorem8_ideal(&p(1), &w("1,1,1"));
        let tight = Caps {
            max_vars: 5,
            ..Caps::default()
        };
        assert!(matches!(hilbert_function(&pres, &tight), Err(Error::ResourceCap(_))));
        let shallow = Caps {
            max_degree: 2,
            ..Caps::default()
        };
        assert!(matches!(hilbert_function(&pres, &shallow), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn json_roundtrip() {
        let pres = theorem8_ideal(&p(2), &w("1,1,1/2"));
        let json = serde_json::to_string(&pres.to_json()).unwrap();
        let back: PresentationJson = serde_json::from_str(&json).unwrap();
        assert_eq!(Presentation::from_json(&back).unwrap(), pres);
        let betti = BettiTable { ranks: vec![1, 2, 1] };
        let text = serde_json::to_string(&betti).unwrap();
        assert_eq!(serde_json::from_str::<BettiTable>(&text).unwrap(), betti);
    }
}
