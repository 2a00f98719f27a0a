//! Invariant suites shared by the command-line `verify` command.
//!
//! Every check yields a [`CheckResult`]; randomized checks draw from a
//! ChaCha stream seeded by the caller, so identical inputs give identical
//! reports.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::base::{projective_space, CellularBase};
use crate::chow::{
    chern_poly_pair, keel_betti, linear_ranks, stage_presentation, theorem8_ideal_with, ChernKind,
    ChernPoly, Caps, PairChernFn, Presentation, QuotientRing, VariableLayout,
};
use crate::combinatorics::{
    building_set, fm_order, overlaps, prefix_is_building_set, IndexSet, OrderedBuildingSet,
    WeightVector,
};
use crate::error::Result;
use crate::morphisms::{composition_check, mustata_weights, reduction_centers};
use crate::poly::MultiPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Prefix,
    Morphisms,
    Mustata,
    CrossOracle,
    Symmetry,
    Order,
    Ideal,
    LowDegree,
    Degree,
    Stage,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Prefix,
        Suite::Morphisms,
        Suite::Mustata,
        Suite::CrossOracle,
        Suite::Symmetry,
        Suite::Order,
        Suite::Ideal,
        Suite::LowDegree,
        Suite::Degree,
        Suite::Stage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prefix => "prefix",
            Suite::Morphisms => "morphisms",
            Suite::Mustata => "mustata",
            Suite::CrossOracle => "cross-oracle",
            Suite::Symmetry => "symmetry",
            Suite::Order => "order",
            Suite::Ideal => "ideal",
            Suite::LowDegree => "low-degree",
            Suite::Degree => "degree",
            Suite::Stage => "stage",
        }
    }

    /// Suites evaluated once per grid instance.
    pub fn is_per_instance(self) -> bool {
        !matches!(self, Suite::Prefix | Suite::Morphisms | Suite::Mustata)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

/// Deliberate defects for checking that the suites notice them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of every `t`-term of `c_{a,b}` in the closed
    /// presentation only.
    PairSign,
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pair-sign" => Ok(Fault::PairSign),
            _ => Err(format!("unknown fault `{s}`")),
        }
    }
}

fn flipped_pair(base: &CellularBase, layout: &VariableLayout, a: usize, b: usize) -> ChernPoly {
    let c = chern_poly_pair(base, layout, a, b);
    let coeffs = c
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, x)| if i == 0 { x.clone() } else { x.neg() })
        .collect();
    ChernPoly::new(ChernKind::Pair, coeffs)
}

fn pair_fn(fault: Option<Fault>) -> PairChernFn {
    match fault {
        None => chern_poly_pair,
        Some(Fault::PairSign) => flipped_pair,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: Suite,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<12} {}: {}", self.suite.name(), self.subject, self.detail)
    }
}

fn check(suite: Suite, subject: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        suite,
        subject: subject.into(),
        passed,
        detail: detail.into(),
    }
}

/// One point `(m, A)` of the verification grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub m: usize,
    pub weights: WeightVector,
}

impl Instance {
    pub fn new(m: usize, weights: WeightVector) -> Self {
        Instance { m, weights }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={} A=({})", self.m, self.n(), self.weights)
    }
}

/// `m` in {1,2}, `n` in {2,3,4} (`n <= 3` for `m = 2`), weights all 1, all
/// 1/2, every Mustață vector and `(1,...,1,1/2,1/2)`; duplicates removed.
pub fn default_grid() -> Vec<Instance> {
    let mut out: Vec<Instance> = Vec::new();
    for m in 1..=2usize {
        let max_n = if m == 1 { 4 } else { 3 };
        for n in 2..=max_n {
            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            let mut candidates = vec![
                WeightVector::ones(n).expect("valid"),
                WeightVector::uniform(n, half.clone()).expect("valid"),
            ];
            candidates.extend((0..n).map(|k| mustata_weights(n, k).expect("valid")));
            let mut mixed = vec![BigRational::one(); n];
            mixed[n - 1] = half.clone();
            mixed[n - 2] = half;
            candidates.push(WeightVector::new(mixed).expect("valid"));
            for w in candidates {
                let inst = Instance::new(m, w);
                if !out.contains(&inst) {
                    out.push(inst);
                }
            }
        }
    }
    out
}

/// `(-1)^{nm-1} C(-(m+1)(n-1), m)`: the top self-intersection of the
/// exceptional divisor over the small diagonal of `(P^m)^n`, from the Segre
/// class of its normal bundle `T^{⊕(n-1)}`.
pub fn small_diagonal_self_intersection(n: usize, m: usize) -> BigInt {
    let top = -BigInt::from((m + 1) * (n - 1));
    // C(x, m) for negative x via the falling factorial
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..m {
        num *= &top - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    let segre = num / den;
    if (n * m - 1) % 2 == 0 {
        segre
    } else {
        -segre
    }
}

/// Everything the per-instance suites need, computed once.
pub struct InstanceContext {
    pub instance: Instance,
    pub base: CellularBase,
    pub building: OrderedBuildingSet,
    pub presentation: Presentation,
    pub caps: Caps,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl InstanceContext {
    pub fn new(instance: Instance, caps: Caps, seed: u64, fault: Option<Fault>) -> Result<Self> {
        let base = projective_space(instance.m as i64)?;
        let building = building_set(&instance.weights);
        let presentation = theorem8_ideal_with(&base, &building, pair_fn(fault));
        Ok(InstanceContext {
            instance,
            base,
            building,
            presentation,
            caps,
            seed,
            fault,
        })
    }

    fn subject(&self) -> String {
        self.instance.to_string()
    }

    fn ring(&self) -> Result<QuotientRing<'_>> {
        QuotientRing::new(&self.presentation, &self.caps)
    }

    fn closed_ranks(&self) -> Result<Vec<u64>> {
        Ok(self.ring()?.hilbert_function()?.ranks)
    }

    pub fn run(&self, suite: Suite) -> Vec<CheckResult> {
        let outcome = match suite {
            Suite::CrossOracle => self.cross_oracle(),
            Suite::Symmetry => self.symmetry(),
            Suite::Order => self.order_invariance(),
            Suite::Ideal => self.ideal_vanishing(),
            Suite::LowDegree => self.low_degree(),
            Suite::Degree => self.degree_checks(),
            Suite::Stage => self.stage_agreement(),
            Suite::Prefix | Suite::Morphisms | Suite::Mustata => Ok(Vec::new()),
        };
        outcome.unwrap_or_else(|e| vec![check(suite, self.subject(), false, format!("error: {e}"))])
    }

    fn cross_oracle(&self) -> Result<Vec<CheckResult>> {
        let closed = self.closed_ranks()?;
        let keel = keel_betti(&self.base, &self.building, &self.caps)?.ranks;
        let detail = if closed == keel {
            format!("{} AGREE", fmt_ranks(&closed))
        } else {
            format!("groebner {} != keel {}", fmt_ranks(&closed), fmt_ranks(&keel))
        };
        Ok(vec![check(Suite::CrossOracle, self.subject(), closed == keel, detail)])
    }

    fn symmetry(&self) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        let keel = keel_betti(&self.base, &self.building, &self.caps)?.ranks;
        for (method, ranks) in [("groebner", self.closed_ranks()?), ("keel", keel)] {
            let top = self.instance.n() * self.instance.m;
            let ok = ranks.len() == top + 1
                && ranks[0] == 1
                && ranks[top] == 1
                && ranks.iter().eq(ranks.iter().rev());
            out.push(check(
                Suite::Symmetry,
                format!("{} [{method}]", self.subject()),
                ok,
                fmt_ranks(&ranks),
            ));
        }
        Ok(out)
    }

    fn order_invariance(&self) -> Result<Vec<CheckResult>> {
        let reference = self.closed_ranks()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut mismatches = Vec::new();
        for trial in 0..5 {
            let shuffled = self.building.shuffled_ties(&mut rng);
            let p = theorem8_ideal_with(&self.base, &shuffled, pair_fn(self.fault));
            let ranks = QuotientRing::new(&p, &self.caps)?.hilbert_function()?.ranks;
            if ranks != reference {
                mismatches.push(format!("trial {trial}: {}", fmt_ranks(&ranks)));
            }
        }
        let detail = if mismatches.is_empty() {
            format!("5 tie-break orders give {}", fmt_ranks(&reference))
        } else {
            mismatches.join("; ")
        };
        Ok(vec![check(Suite::Order, self.subject(), mismatches.is_empty(), detail)])
    }

    fn ideal_vanishing(&self) -> Result<Vec<CheckResult>> {
        let ring = self.ring()?;
        let layout = &self.presentation.layout;
        let elems = self.building.elements();
        let mut total = 0usize;
        let mut failed = Vec::new();
        for (i, s) in elems.iter().enumerate() {
            let ds = layout.d_var(*s).expect("divisor");
            for t in &elems[i + 1..] {
                if overlaps(*s, *t) {
                    total += 1;
                    let p = ds.mul(&layout.d_var(*t).expect("divisor"));
                    if !ring.normal_form(&p)?.is_zero() {
                        failed.push(format!("D_{}*D_{}", s.label(), t.label()));
                    }
                }
            }
            for g in crate::chow::j_ideal(layout, *s) {
                total += 1;
                if !ring.normal_form(&g.mul(&ds))?.is_zero() {
                    failed.push(format!("J*D_{}", s.label()));
                }
            }
        }
        let detail = if failed.is_empty() {
            format!("{total} relations reduce to 0")
        } else {
            format!("nonzero: {}", failed.join(", "))
        };
        Ok(vec![check(Suite::Ideal, self.subject(), failed.is_empty(), detail)])
    }

    fn low_degree(&self) -> Result<Vec<CheckResult>> {
        let closed = self.closed_ranks()?;
        let top = 2.min(self.presentation.top_degree());
        let linear = linear_ranks(&self.presentation, top)?;
        let ok = linear[..] == closed[..=top as usize];
        let detail = format!("degrees 0..={top}: linear {} groebner {}", fmt_ranks(&linear), fmt_ranks(&closed[..=top as usize]));
        Ok(vec![check(Suite::LowDegree, self.subject(), ok, detail)])
    }

    fn degree_checks(&self) -> Result<Vec<CheckResult>> {
        let ring = self.ring()?;
        let layout = &self.presentation.layout;
        let n = self.instance.n();
        let m = self.instance.m;
        let mut out = Vec::new();
        let point = MultiPoly::monomial(layout.point_monomial(m), BigRational::one());
        let d = ring.degree(&point)?;
        out.push(check(
            Suite::Degree,
            format!("{} point", self.subject()),
            d.is_one(),
            format!("deg(point) = {d}"),
        ));

        let full = IndexSet::full(n);
        if self.building.elements() == [full] {
            let e = layout.d_var(full).expect("divisor").pow((n * m) as u32);
            let got = ring.degree(&e)?;
            let want = BigRational::from_integer(small_diagonal_self_intersection(n, m));
            out.push(check(
                Suite::Degree,
                format!("{} E^{}", self.subject(), n * m),
                got == want,
                format!("groebner {got}, segre oracle {want}"),
            ));
        }

        if !self.building.is_empty() {
            let last = stage_presentation(&self.base, &self.building, self.building.len() - 1)?;
            let stage_ring = QuotientRing::new(&last, &self.caps)?;
            let mut bad = Vec::new();
            for s in self.building.elements() {
                let p = layout.d_var(*s).expect("divisor").pow((n * m) as u32);
                let q = last.layout.d_var(*s).expect("divisor").pow((n * m) as u32);
                let (a, b) = (ring.degree(&p)?, stage_ring.degree(&q)?);
                if a != b {
                    bad.push(format!("D_{}: {a} vs {b}", s.label()));
                }
            }
            let detail = if bad.is_empty() {
                format!("{} top powers agree with the blowup tower", self.building.len())
            } else {
                bad.join("; ")
            };
            out.push(check(
                Suite::Degree,
                format!("{} stage", self.subject()),
                bad.is_empty(),
                detail,
            ));
        }
        Ok(out)
    }

    fn stage_agreement(&self) -> Result<Vec<CheckResult>> {
        if self.building.is_empty() {
            return Ok(vec![check(Suite::Stage, self.subject(), true, "no centers")]);
        }
        let last = stage_presentation(&self.base, &self.building, self.building.len() - 1)?;
        let staged = QuotientRing::new(&last, &self.caps)?.hilbert_function()?.ranks;
        let closed = self.closed_ranks()?;
        let detail = format!("stage {} closed {}", fmt_ranks(&staged), fmt_ranks(&closed));
        Ok(vec![check(Suite::Stage, self.subject(), staged == closed, detail)])
    }
}

pub fn fmt_ranks(ranks: &[u64]) -> String {
    let parts: Vec<String> = ranks.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn random_weight<R: Rng>(rng: &mut R, at_most: &BigRational) -> BigRational {
    // denominators up to 6 keep sums near the threshold 1 interesting
    loop {
        let q: i64 = rng.gen_range(1..=6);
        let p: i64 = rng.gen_range(1..=q);
        let w = BigRational::new(p.into(), q.into());
        if &w <= at_most {
            return w;
        }
    }
}

pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> WeightVector {
    let one = BigRational::one();
    WeightVector::new((0..n).map(|_| random_weight(rng, &one)).collect()).expect("in range")
}

fn random_dominated<R: Rng>(rng: &mut R, above: &WeightVector) -> WeightVector {
    WeightVector::new(above.weights().iter().map(|a| random_weight(rng, a)).collect())
        .expect("in range")
}

/// Composition law and `(G_A \ G_B) ⊔ G_B = G_A` on random triples.
pub fn morphism_checks(seed: u64, trials: usize) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut composition_failures = Vec::new();
    let mut partition_failures = Vec::new();
    for trial in 0..trials {
        let n = rng.gen_range(2..=8);
        let a = random_weights(&mut rng, n);
        let b = random_dominated(&mut rng, &a);
        let c = random_dominated(&mut rng, &b);
        match composition_check(&a, &b, &c) {
            Ok(true) => {}
            Ok(false) => composition_failures.push(format!("#{trial} A=({a}) B=({b}) C=({c})")),
            Err(e) => composition_failures.push(format!("#{trial}: {e}")),
        }
        let ok = reduction_centers(&a, &b).is_ok_and(|r| {
            let g_a = building_set(&a);
            let g_b = building_set(&b);
            let mut union: Vec<IndexSet> = r.extra_centers.clone();
            union.extend(g_b.elements());
            union.sort();
            let mut whole = g_a.elements().to_vec();
            whole.sort();
            let disjoint = r.extra_centers.iter().all(|s| !g_b.contains(*s));
            disjoint && union == whole
        });
        if !ok {
            partition_failures.push(format!("#{trial} A=({a}) B=({b})"));
        }
    }
    vec![
        check(
            Suite::Morphisms,
            format!("composition, {trials} triples"),
            composition_failures.is_empty(),
            summarize(&composition_failures, "A->C = (A->B) ⊔ (B->C)"),
        ),
        check(
            Suite::Morphisms,
            format!("reduction partition, {trials} pairs"),
            partition_failures.is_empty(),
            summarize(&partition_failures, "(G_A \\ G_B) ⊔ G_B = G_A"),
        ),
    ]
}

/// `G` of Mustață weights is `{S : |S| > n-k}` in the default order.
pub fn mustata_checks(max_n: usize) -> Vec<CheckResult> {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 2..=max_n {
        for k in 1..n {
            count += 1;
            let w = match mustata_weights(n, k) {
                Ok(w) => w,
                Err(e) => {
                    failures.push(format!("n={n} k={k}: {e}"));
                    continue;
                }
            };
            let got = building_set(&w);
            let mut want: Vec<IndexSet> = IndexSet::all_diagonals(n).filter(|s| s.len() > n - k).collect();
            want.sort_by(crate::combinatorics::ascending_dimension_cmp);
            if got.elements() != want.as_slice() {
                failures.push(format!("n={n} k={k}"));
            }
        }
    }
    vec![check(
        Suite::Mustata,
        format!("1 <= k < n <= {max_n}"),
        failures.is_empty(),
        summarize(&failures, &format!("{count} pairs match {{S : |S| > n-k}}")),
    )]
}

/// Prefix checks for the default and FM orders, plus the known non-example.
pub fn prefix_checks(seed: u64, random_vectors: usize) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors: Vec<WeightVector> = (2..=6).map(|n| WeightVector::ones(n).expect("valid")).collect();
    for _ in 0..random_vectors {
        let n = rng.gen_range(2..=6);
        vectors.push(random_weights(&mut rng, n));
    }
    let mut failures = Vec::new();
    for w in &vectors {
        let g = building_set(w);
        if !prefix_is_building_set(g.elements()) {
            failures.push(format!("default order, A=({w})"));
        }
        if !prefix_is_building_set(&fm_order(&g)) {
            failures.push(format!("fm order, A=({w})"));
        }
    }
    let non_example = [IndexSet::of(&[1, 2]), IndexSet::of(&[1, 3]), IndexSet::of(&[2, 3])];
    let rejected = !prefix_is_building_set(&non_example);
    vec![
        check(
            Suite::Prefix,
            format!("{} weight vectors", vectors.len()),
            failures.is_empty(),
            summarize(&failures, "every prefix of both orders is a building set"),
        ),
        check(
            Suite::Prefix,
            "{12},{13},{23}",
            rejected,
            if rejected { "rejected" } else { "wrongly accepted" },
        ),
    ]
}

fn summarize(failures: &[String], ok: &str) -> String {
    if failures.is_empty() {
        ok.to_string()
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        format!("{} failures, e.g. {}", failures.len(), shown.join("; "))
    }
}

/// Global checks that do not depend on a grid instance.
pub fn run_global(suite: Suite, seed: u64) -> Vec<CheckResult> {
    match suite {
        Suite::Prefix => prefix_checks(seed, 20),
        Suite::Morphisms => morphism_checks(seed, 100),
        Suite::Mustata => mustata_checks(7),
        _ => Vec::new(),
    }
}

/// Per-instance suites for one grid point. Resource-cap errors surface as
/// the `Err` value so callers can exit with the right status.
pub fn run_instance(
    instance: &Instance,
    suites: &[Suite],
    caps: Caps,
    seed: u64,
    fault: Option<Fault>,
) -> Result<Vec<CheckResult>> {
    let ctx = InstanceContext::new(instance.clone(), caps, seed, fault)?;
    ctx.presentation.check_caps(&caps)?;
    Ok(suites
        .iter()
        .filter(|s| s.is_per_instance())
        .flat_map(|s| ctx.run(*s))
        .collect())
}
