use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use wfm_core::base::projective_space;
use wfm_core::chow::{
    keel_betti, stage_presentation, theorem8_ideal, Caps, Presentation, QuotientRing,
};
use wfm_core::combinatorics::{
    building_set, enumerate_nests, format_rational, fm_order, prefix_is_building_set, IndexSet,
    OrderedBuildingSet, WeightVector, DEFAULT_NEST_CAP,
};
use wfm_core::morphisms::{forgetful_data, mustata_weights, reduction_centers};
use wfm_core::verify::{default_grid, fmt_ranks, run_global, run_instance, CheckResult, Fault, Instance, Suite};
use wfm_core::Error;

/// Line to stdout; a closed pipe is not an error worth a panic.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "wfm", version, about = "Weighted Fulton-MacPherson compactifications: building sets, morphisms and Chow rings")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Number of points.
    #[arg(short = 'n', global = true)]
    n: Option<usize>,
    /// Dimension of the base P^m.
    #[arg(long = "m", global = true, default_value_t = 1)]
    m: i64,
    /// Comma-separated weights in (0,1], e.g. `1,1/2,0.5`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    weights: Option<String>,
    /// Base variety; only projective space `pm` is available.
    #[arg(long, global = true, default_value = "pm")]
    base: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Method::Groebner)]
    method: Method,
    #[arg(long = "cap-vars", global = true, default_value_t = 40)]
    cap_vars: usize,
    #[arg(long = "cap-degree", global = true, default_value_t = 12)]
    cap_degree: u32,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Groebner,
    Keel,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// List G_A in its default order.
    BuildingSet,
    /// List G_A in Fulton-MacPherson order.
    FmOrder,
    /// Enumerate nests of G_A.
    Nests {
        #[arg(long, default_value_t = DEFAULT_NEST_CAP)]
        cap: usize,
    },
    /// Centers of the reduction X_A[n] -> X_B[n].
    Reduction {
        /// Target weights B, coordinatewise at most A.
        #[arg(long = "target-weights")]
        target_weights: String,
    },
    /// Building set after forgetting all points outside `--kept`.
    Forgetful {
        /// Comma-separated labels to keep.
        #[arg(long, value_delimiter = ',', required = true)]
        kept: Vec<usize>,
    },
    /// Mustață weights 1/(n-k) and their building set.
    Mustata {
        #[arg(short = 'k')]
        k: usize,
    },
    /// Closed presentation of the Chow ring, or of an intermediate blowup.
    Presentation {
        /// Show the presentation after blowing up centers 0..=STAGE.
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Graded ranks of the Chow ring.
    Betti,
    /// Degree of a top-degree class, e.g. `--poly 'D_123^3'`.
    Degree {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Run the invariant suites over the verification grid.
    Verify {
        /// Suites to run (repeatable); all by default.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long = "inject-fault", hide = true)]
        inject_fault: Option<String>,
    },
    /// Dump the base variety data.
    Base,
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_cap() { 3 } else { 2 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

impl Common {
    fn caps(&self) -> Result<Caps, Failure> {
        if self.cap_vars == 0 || self.cap_degree == 0 {
            return Err(input_error("caps must be positive"));
        }
        Ok(Caps {
            max_vars: self.cap_vars,
            max_degree: self.cap_degree,
            ..Caps::default()
        })
    }

    fn base(&self) -> Result<wfm_core::CellularBase, Failure> {
        if self.base != "pm" {
            return Err(input_error(format!("unknown base `{}`; only `pm` is available", self.base)));
        }
        Ok(projective_space(self.m)?)
    }

    fn weights(&self) -> Result<WeightVector, Failure> {
        let text = match (&self.weights, self.n) {
            (Some(t), _) => t.clone(),
            (None, _) => return Err(input_error("--weights is required")),
        };
        let w = WeightVector::parse(&text)?;
        if let Some(n) = self.n {
            if n != w.len() {
                return Err(input_error(format!("-n {n} does not match {} weights", w.len())));
            }
        }
        Ok(w)
    }

    fn json(&self) -> bool {
        self.format == Format::Json
    }
}

fn print_json(value: &Value) {
    out!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn set_list(sets: &[IndexSet]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.members()).collect()
}

fn print_ordered(title: &str, sets: &[IndexSet]) {
    out!("{title}: {} sets", sets.len());
    for (i, s) in sets.iter().enumerate() {
        out!("  {i:>3}  {s}");
    }
}

fn cmd_building_set(c: &Common) -> Outcome {
    let w = c.weights()?;
    let g = building_set(&w);
    let trivial = g.is_empty();
    if c.json() {
        print_json(&json!({
            "n": w.len(),
            "weights": w,
            "elements": set_list(g.elements()),
            "trivial": trivial,
        }));
    } else {
        print_ordered(&format!("G_A for n={} A=({w})", w.len()), g.elements());
        if trivial {
            out!("trivial: X^n (no diagonal has weight above 1)");
        }
    }
    Ok(0)
}

fn cmd_fm_order(c: &Common) -> Outcome {
    let w = c.weights()?;
    let order = fm_order(&building_set(&w));
    let prefix_ok = prefix_is_building_set(&order);
    if c.json() {
        print_json(&json!({
            "n": w.len(),
            "weights": w,
            "elements": set_list(&order),
            "prefixes_are_building_sets": prefix_ok,
        }));
    } else {
        print_ordered(&format!("FM order for n={} A=({w})", w.len()), &order);
        out!("every prefix is a building set: {}", if prefix_ok { "yes" } else { "no" });
    }
    Ok(0)
}

fn cmd_nests(c: &Common, cap: usize) -> Outcome {
    let w = c.weights()?;
    let g = building_set(&w);
    let nests = enumerate_nests(&g, cap)?;
    if c.json() {
        print_json(&json!({ "n": w.len(), "weights": w, "nests": nests }));
    } else {
        out!("{} nests of G_A for n={} A=({w})", nests.len(), w.len());
        for nest in &nests {
            let parts: Vec<String> = nest.0.iter().map(|s| s.to_string()).collect();
            out!("  [{}]", parts.join(" "));
        }
    }
    Ok(0)
}

fn cmd_reduction(c: &Common, target: &str) -> Outcome {
    let a = c.weights()?;
    let b = WeightVector::parse(target)?;
    let data = reduction_centers(&a, &b)?;
    if c.json() {
        print_json(&serde_json::to_value(&data).expect("serializable"));
    } else {
        print_ordered(&format!("centers of X_A[n] -> X_B[n], A=({a}) B=({b})"), &data.extra_centers);
    }
    Ok(0)
}

fn cmd_forgetful(c: &Common, kept: &[usize]) -> Outcome {
    let w = c.weights()?;
    let data = forgetful_data(&w, kept)?;
    if c.json() {
        print_json(&serde_json::to_value(&data).expect("serializable"));
    } else {
        let t = &data.target_building_set;
        out!(
            "forget all but {} from A=({w}); target weights ({})",
            data.kept_labels,
            t.weights()
        );
        let original = data.target_in_source_labels();
        out!("target G: {} sets", t.len());
        for (i, (s, o)) in t.elements().iter().zip(&original).enumerate() {
            out!("  {i:>3}  {s}  (original labels {o})");
        }
    }
    Ok(0)
}

fn cmd_mustata(c: &Common, k: usize) -> Outcome {
    let n = c.n.ok_or_else(|| input_error("-n is required"))?;
    let w = mustata_weights(n, k)?;
    let g = building_set(&w);
    let eps = format_rational(w.weight(1));
    if c.json() {
        print_json(&json!({
            "n": n,
            "k": k,
            "epsilon": eps,
            "weights": w,
            "elements": set_list(g.elements()),
        }));
    } else {
        out!("Mustata weights n={n} k={k}: epsilon = {eps}");
        print_ordered("G_A", g.elements());
        if g.is_empty() {
            out!("trivial: X^n (no diagonal has weight above 1)");
        }
    }
    Ok(0)
}

fn print_presentation(p: &Presentation) {
    let vars = p.variables();
    out!("n={} m={} A=({})", p.n, p.m(), p.weights);
    out!("variables ({}): {}", vars.len(), vars.names().join(" "));
    let families = [
        ("overlap", &p.ideal.overlap),
        ("linear", &p.ideal.linear),
        ("weak_overlap", &p.ideal.weak_overlap),
        ("chern", &p.ideal.chern),
        ("base", &p.ideal.base),
        ("kernel", &p.ideal.kernel),
    ];
    for (name, family) in families {
        if name == "kernel" && family.is_empty() {
            continue;
        }
        out!("{name} ({}):", family.len());
        for g in family {
            out!("  {}", vars.format(g));
        }
    }
}

fn cmd_presentation(c: &Common, stage: Option<usize>) -> Outcome {
    let base = c.base()?;
    let w = c.weights()?;
    let p = match stage {
        None => theorem8_ideal(&base, &w),
        Some(j) => stage_presentation(&base, &building_set(&w), j)?,
    };
    p.check_caps(&c.caps()?)?;
    if c.json() {
        print_json(&serde_json::to_value(p.to_json()).expect("serializable"));
    } else {
        print_presentation(&p);
    }
    Ok(0)
}

fn timed<T>(label: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    eprintln!("{label}: {:.3} s", start.elapsed().as_secs_f64());
    out
}

fn cmd_betti(c: &Common) -> Outcome {
    let base = c.base()?;
    let w = c.weights()?;
    let caps = c.caps()?;
    let g: OrderedBuildingSet = building_set(&w);
    let groebner = || -> Result<Vec<u64>, Failure> {
        let p = theorem8_ideal(&base, &w);
        Ok(QuotientRing::new(&p, &caps)?.hilbert_function()?.ranks)
    };
    let keel = || -> Result<Vec<u64>, Failure> { Ok(keel_betti(&base, &g, &caps)?.ranks) };
    let mut results: Vec<(&str, Vec<u64>)> = Vec::new();
    if matches!(c.method, Method::Groebner | Method::Both) {
        results.push(("groebner", timed("groebner", groebner)?));
    }
    if matches!(c.method, Method::Keel | Method::Both) {
        results.push(("keel", timed("keel", keel)?));
    }
    let agree = results.windows(2).all(|x| x[0].1 == x[1].1);
    if c.json() {
        let entries: Vec<Value> = results
            .iter()
            .map(|(method, ranks)| json!({ "ranks": ranks, "method": method }))
            .collect();
        if entries.len() == 1 {
            print_json(&entries[0]);
        } else {
            print_json(&json!({ "results": entries, "agree": agree }));
        }
    } else {
        out!("n={} m={} A=({w})", w.len(), c.m);
        if g.is_empty() {
            out!("trivial: X^n (no diagonal has weight above 1)");
        }
        for (method, ranks) in &results {
            out!("{method:<9} {}", fmt_ranks(ranks));
        }
        if results.len() > 1 {
            out!("{}", if agree { "AGREE" } else { "DISAGREE" });
        }
    }
    Ok(if agree { 0 } else { 1 })
}

fn cmd_degree(c: &Common, poly: &str) -> Outcome {
    let base = c.base()?;
    let w = c.weights()?;
    let p = theorem8_ideal(&base, &w);
    let ring = QuotientRing::new(&p, &c.caps()?)?;
    let f = p.variables().parse(poly)?;
    let d = ring.degree(&f)?;
    if c.json() {
        print_json(&json!({ "poly": p.variables().format(&f), "degree": format_rational(&d) }));
    } else {
        out!("deg({}) = {}", p.variables().format(&f), format_rational(&d));
    }
    Ok(0)
}

fn cmd_verify(c: &Common, suites: &[String], fault: Option<&str>) -> Outcome {
    let suites: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites
            .iter()
            .map(|s| s.parse::<Suite>().map_err(input_error))
            .collect::<Result<_, _>>()?
    };
    let fault = fault.map(|f| f.parse::<Fault>().map_err(input_error)).transpose()?;
    let caps = c.caps()?;
    let grid = match &c.weights {
        Some(_) => {
            c.base()?;
            vec![Instance::new(c.m as usize, c.weights()?)]
        }
        None => default_grid(),
    };

    let mut results: Vec<CheckResult> = suites
        .iter()
        .filter(|s| !s.is_per_instance())
        .flat_map(|s| run_global(*s, c.seed))
        .collect();
    let per_instance: Vec<Result<Vec<CheckResult>, Error>> = if suites.iter().any(|s| s.is_per_instance()) {
        timed("grid", || {
            grid.par_iter()
                .map(|inst| run_instance(inst, &suites, caps, c.seed, fault))
                .collect()
        })
    } else {
        Vec::new()
    };
    let mut cap_error = None;
    for (inst, outcome) in grid.iter().zip(per_instance) {
        match outcome {
            Ok(r) => results.extend(r),
            Err(e) => {
                out!("ERROR {inst}: {e}");
                if e.is_resource_cap() {
                    cap_error.get_or_insert(e);
                } else {
                    return Err(e.into());
                }
            }
        }
    }

    let failed = results.iter().filter(|r| !r.passed).count();
    if c.json() {
        let checks: Vec<Value> = results
            .iter()
            .map(|r| json!({ "suite": r.suite.name(), "subject": r.subject, "passed": r.passed, "detail": r.detail }))
            .collect();
        print_json(&json!({ "seed": c.seed, "checks": checks, "failed": failed }));
    } else {
        for r in &results {
            out!("{r}");
        }
        out!("verify: {} checks, {failed} failed (seed {})", results.len(), c.seed);
    }
    if let Some(e) = cap_error {
        return Err(e.into());
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_base(c: &Common) -> Outcome {
    let base = c.base()?;
    if c.json() {
        print_json(&serde_json::to_value(&base).expect("serializable"));
    } else {
        out!("P^{}: c(T) coefficients {:?}, poincare {:?}", base.m, base.tangent_chern, base.poincare);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let outcome = match &cli.command {
        Command::BuildingSet => cmd_building_set(c),
        Command::FmOrder => cmd_fm_order(c),
        Command::Nests { cap } => cmd_nests(c, *cap),
        Command::Reduction { target_weights } => cmd_reduction(c, target_weights),
        Command::Forgetful { kept } => cmd_forgetful(c, kept),
        Command::Mustata { k } => cmd_mustata(c, *k),
        Command::Presentation { stage } => cmd_presentation(c, *stage),
        Command::Betti => cmd_betti(c),
        Command::Degree { poly } => cmd_degree(c, poly),
        Command::Verify { suites, inject_fault } => cmd_verify(c, suites, inject_fault.as_deref()),
        Command::Base => cmd_base(c),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
