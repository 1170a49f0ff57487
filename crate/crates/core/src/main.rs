use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use injcat::cohomology::{cohomological_lower_bound, cohomology, induced_map, CohomologyRing};
use injcat::complex::{SimplicialComplex, SimplicialMap};
use injcat::equivariant::{facet_projection_cover, ic_quotient_sphere, quotient_map, EquivariantError};
use injcat::format::{complex_from_json, ComplexJson, FormatError, Loader, SimplicialMapJson};
use injcat::ic::oracle::{brute_force_ic, MAX_POINTS as ORACLE_POINTS};
use injcat::ic::{ic_exact, Budget, IcError};
use injcat::pl::{
    self, cover_from_multiplicity, euclidean_obstruction, finite_model, ic_by_multiplicity, pl_local_injectivity,
    self_intersections, verify_param_cover, CurveJson, PLCurve, PLSurfaceMap, PlError, SurfaceJson,
};
use injcat::report::RunReport;
use injcat::suites::{run_suite, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "injcat", version, about = "Injective category numbers of maps between finite spaces")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget_nodes: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write an SVG picture (curve command only).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Exact IC of a map, or of the orbit map of a group action, given as JSON.
    Ic {
        map: PathBuf,
        /// Cross-check against exhaustive search (maps with at most 20 domain points).
        #[arg(long)]
        oracle: bool,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Sphere dimension for the lsb suite.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Facet-projection cover of S^n and the IC of the antipodal quotient model.
    Sphere {
        #[arg(long)]
        n: usize,
        /// Radians.
        #[arg(long, default_value_t = 0.2)]
        thickening: f64,
    },
    /// Plane curve or surface map: a JSON file or `fixture:<name>`.
    Curve {
        input: String,
        /// Also solve the curve's finite model exactly.
        #[arg(long)]
        model: bool,
        /// Sides of the circle proxy for surface maps.
        #[arg(long, default_value_t = 64)]
        sides: usize,
    },
    /// Z/2 cohomology of a complex, or the nil bound of a simplicial map:
    /// a JSON file or `fixture:<name>`.
    Cohomology {
        input: String,
        /// Assert that the map's realization is onto.
        #[arg(long)]
        surjective: bool,
    },
}

enum Failure {
    BadInput(String),
    Budget(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::BadInput(e.to_string())
    }
}

impl From<PlError> for Failure {
    fn from(e: PlError) -> Self {
        Failure::BadInput(e.to_string())
    }
}

impl From<IcError> for Failure {
    fn from(e: IcError) -> Self {
        match e {
            IcError::BudgetExceeded { .. } | IcError::CandidateExplosion(_) => Failure::Budget(e.to_string()),
            other => Failure::BadInput(other.to_string()),
        }
    }
}

impl From<EquivariantError> for Failure {
    fn from(e: EquivariantError) -> Self {
        match e {
            EquivariantError::Ic(ic) => ic.into(),
            other => Failure::BadInput(other.to_string()),
        }
    }
}

struct Outcome {
    results: Value,
    nodes: u64,
    violation: bool,
    text: Vec<String>,
}

struct Ctx {
    budget: Budget,
    seed: u64,
    svg: Option<PathBuf>,
    loader: Loader,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut ctx = Ctx {
        budget: Budget::with_nodes(cli.budget_nodes),
        seed: cli.seed,
        svg: cli.svg.clone(),
        loader: Loader::new(),
    };
    let outcome = match &cli.command {
        Command::Ic { map, oracle } => cmd_ic(&mut ctx, map, *oracle),
        Command::Verify { suite, count, n } => cmd_verify(&ctx, *suite, *count, *n),
        Command::Sphere { n, thickening } => cmd_sphere(&ctx, *n, *thickening),
        Command::Curve { input, model, sides } => cmd_curve(&mut ctx, input, *model, *sides),
        Command::Cohomology { input, surjective } => cmd_cohomology(&mut ctx, input, *surjective),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(Failure::BadInput(m)) => return fail("bad_input", &m, 2),
        Err(Failure::Budget(m)) => return fail("budget_exhausted", &m, 3),
    };
    let mut report = RunReport::new(
        std::env::args().collect(),
        std::mem::take(&mut ctx.loader.inputs),
        ctx.seed,
        &ctx.budget,
        outcome.nodes,
        outcome.results,
    );
    report.timing_ms = start.elapsed().as_secs_f64() * 1000.0;
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        Format::Text => outcome.text.join("\n"),
    };
    // A closed pipe downstream is not our failure.
    let _ = writeln!(std::io::stdout().lock(), "{body}");
    if outcome.violation {
        eprintln!("{}", json!({ "error": { "kind": "violation", "message": "a checked property failed; see report" } }));
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
    ExitCode::from(code)
}

fn cmd_ic(ctx: &mut Ctx, path: &Path, oracle: bool) -> Result<Outcome, Failure> {
    let is_action = std::fs::read_to_string(path)
        .ok()
        .and_then(|t| serde_json::from_str::<Value>(&t).ok())
        .is_some_and(|v| v.get("group").is_some());
    let (f, orbits) = if is_action {
        let q = quotient_map(ctx.loader.action(path)?);
        let orbits = q.quotient.len();
        (q.map, Some(orbits))
    } else {
        (ctx.loader.map(path)?, None)
    };
    let r = ic_exact(&f, &ctx.budget)?;
    let mut results = r.to_json(ctx.seed);
    if let Some(k) = orbits {
        results["orbit_map"] = json!({ "points": f.domain().len(), "orbits": k });
    }
    let mut violation = false;
    if let Some(cover) = &r.certificate {
        let ok = cover.verify().is_ok();
        results["certificate_verified"] = json!(ok);
        violation |= !ok;
    }
    let mut text = vec![format!("IC = {}", r.value)];
    if let Some(c) = &r.certificate {
        for s in c.labels() {
            text.push(format!("  {{{}}}", s.join(", ")));
        }
    }
    if let Some(w) = &r.witness {
        text.push(format!("not locally injective at {w}"));
    }
    if oracle {
        if f.domain().len() > ORACLE_POINTS {
            return Err(Failure::BadInput(format!(
                "--oracle needs at most {ORACLE_POINTS} domain points, got {}",
                f.domain().len()
            )));
        }
        let o = brute_force_ic(&f).expect("small enough for the oracle");
        let agrees = o == r.value;
        results["oracle"] = json!({ "ic": o.to_json(), "agrees": agrees });
        text.push(format!("oracle IC = {o} ({})", if agrees { "agrees" } else { "MISMATCH" }));
        violation |= !agrees;
    }
    Ok(Outcome {
        results,
        nodes: r.nodes,
        violation,
        text,
    })
}

fn cmd_verify(ctx: &Ctx, suite: Suite, count: u64, n: usize) -> Result<Outcome, Failure> {
    let cfg = SuiteConfig {
        count,
        seed: ctx.seed,
        budget: ctx.budget,
        n,
    };
    let report = run_suite(suite, &cfg).map_err(|e| {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::BadInput(e.to_string())
        }
    })?;
    let text = vec![format!(
        "{}: {} instances, {} violations",
        suite.name(),
        report.count,
        report.violations.len()
    )];
    Ok(Outcome {
        violation: !report.passed(),
        results: serde_json::to_value(&report).expect("suite report serializes"),
        nodes: 0,
        text,
    })
}

fn cmd_sphere(ctx: &Ctx, n: usize, thickening: f64) -> Result<Outcome, Failure> {
    if n > 3 {
        return Err(EquivariantError::DimensionOutOfRange(n).into());
    }
    let mut results = json!({ "n": n, "n_plus_2": n + 2 });
    let mut text = Vec::new();
    let mut nodes = 0;
    let mut facet_sets = Value::Null;
    if n >= 1 {
        let c = facet_projection_cover(n, thickening)?;
        facet_sets = json!(c.cover.sets.len());
        text.push(format!(
            "facet cover of S^{n}: {} antipode-free sets (checked on {} lattice points, level {})",
            c.cover.sets.len(),
            c.samples,
            c.level
        ));
        results["facet_cover"] = json!(c);
    }
    let mut model_ic = Value::Null;
    if n <= 2 {
        let r = ic_quotient_sphere(n, &ctx.budget)?;
        nodes = r.result.nodes;
        model_ic = r.result.value.to_json();
        text.push(format!("{} quotient model: IC = {}", r.model, r.result.value));
        results["model"] = r.to_json();
    }
    results["comparison"] = json!({
        "n_plus_2": n + 2,
        "facet_cover_sets": facet_sets,
        "model_ic": model_ic,
    });
    Ok(Outcome {
        results,
        nodes,
        violation: false,
        text,
    })
}

enum PlInput {
    Curve(PLCurve),
    Surface(PLSurfaceMap),
}

fn curve_fixture(name: &str) -> Option<PlInput> {
    use pl::fixtures::*;
    let numbered = |prefix: &str| name.strip_prefix(prefix).and_then(|k| k.parse::<usize>().ok());
    Some(match name {
        "bowtie" => PlInput::Curve(bowtie()),
        "annulus_wrap" => PlInput::Surface(annulus_wrap(16)),
        "annulus_square" => PlInput::Surface(annulus_square(16)),
        "disk_identity" => PlInput::Surface(disk_identity(12)),
        "square_identity" => PlInput::Surface(square_identity()),
        "square_fold" => PlInput::Surface(square_fold()),
        "square_far" => PlInput::Surface(square_far()),
        "folded" => PlInput::Curve(folded(12)),
        _ => {
            if let Some(k) = numbered("rose").filter(|&k| (1..=12).contains(&k)) {
                PlInput::Curve(rose(k))
            } else if let Some(m) = numbered("convex").filter(|&m| (3..=256).contains(&m)) {
                PlInput::Curve(convex(m))
            } else {
                let m = numbered("folded").filter(|&m| m >= 4 && m.is_multiple_of(2) && m <= 256)?;
                PlInput::Curve(folded(m))
            }
        }
    })
}

fn load_pl(ctx: &mut Ctx, input: &str) -> Result<PlInput, Failure> {
    if let Some(name) = input.strip_prefix("fixture:") {
        return curve_fixture(name).ok_or_else(|| Failure::BadInput(format!("unknown curve fixture `{name}`")));
    }
    let v = ctx.loader.value(Path::new(input))?;
    let bad = |e: serde_json::Error| Failure::BadInput(format!("{input}: {e}"));
    if v.get("image").is_some() {
        let j: SurfaceJson = serde_json::from_value(v).map_err(bad)?;
        Ok(PlInput::Surface(PLSurfaceMap::from_json(&j)?))
    } else {
        let j: CurveJson = serde_json::from_value(v).map_err(bad)?;
        Ok(PlInput::Curve(PLCurve::from_json(&j)?))
    }
}

fn cmd_curve(ctx: &mut Ctx, input: &str, model: bool, sides: usize) -> Result<Outcome, Failure> {
    let curve = match load_pl(ctx, input)? {
        PlInput::Curve(c) => c,
        PlInput::Surface(f) => {
            if sides < 3 {
                return Err(Failure::BadInput("--sides must be at least 3".into()));
            }
            let r = euclidean_obstruction(&f, sides)?;
            let text = vec![format!(
                "{}: {} loops (windings {:?}), {} arcs",
                r.verdict.name(),
                r.loops,
                r.windings,
                r.arcs
            )];
            return Ok(Outcome {
                results: json!({ "kind": "surface", "obstruction": r.to_json() }),
                nodes: 0,
                violation: false,
                text,
            });
        }
    };
    let li = pl_local_injectivity(&curve);
    let mut results = json!({
        "kind": "curve",
        "vertices": curve.len(),
        "locally_injective": li.injective,
    });
    let mut text = Vec::new();
    let mut violation = false;
    let mut nodes = 0;
    if let Some(w) = &li.witness {
        results["fold_witness"] = json!({ "edge": w.edge, "t": w.t.to_string() });
        results["ic"] = json!("inf");
        text.push(format!("not locally injective: folds back at vertex {}", w.edge));
        text.push("IC = inf".into());
        if ctx.svg.is_some() {
            write_svg(ctx, &pl::svg::curve_svg(&curve, None, None))?;
        }
        return Ok(Outcome {
            results,
            nodes,
            violation,
            text,
        });
    }
    let report = self_intersections(&curve)?;
    let ic = ic_by_multiplicity(&report);
    let cover = cover_from_multiplicity(&curve, &report)?;
    let verified = verify_param_cover(&curve, &report, &cover);
    violation |= verified.is_err();
    results["intersections"] = report.to_json();
    results["ic"] = ic.to_json();
    results["cover"] = cover.to_json();
    results["cover_verified"] = json!(verified.is_ok());
    if let Err(e) = &verified {
        results["cover_error"] = json!(e);
    }
    text.push(format!("{} multiple points", report.points.len()));
    for p in &report.points {
        let (x, y) = p.location.to_f64();
        text.push(format!("  ({x:.4}, {y:.4}) multiplicity {}", p.multiplicity));
    }
    text.push(format!("IC = {ic}"));
    text.push(format!(
        "cover: {} sets, {}",
        cover.sets.len(),
        if verified.is_ok() { "verified" } else { "FAILED verification" }
    ));
    if model {
        let m = finite_model(&curve, &report)?;
        let r = ic_exact(&m, &ctx.budget)?;
        nodes = r.nodes;
        let agrees = r.value == ic;
        violation |= !agrees;
        results["model"] = json!({ "points": m.domain().len(), "ic": r.value.to_json(), "agrees": agrees });
        text.push(format!("finite model ({} points): IC = {}", m.domain().len(), r.value));
    }
    if ctx.svg.is_some() {
        write_svg(ctx, &pl::svg::curve_svg(&curve, Some(&report), Some(&cover)))?;
    }
    Ok(Outcome {
        results,
        nodes,
        violation,
        text,
    })
}

fn write_svg(ctx: &Ctx, svg: &str) -> Result<(), Failure> {
    let path = ctx.svg.as_ref().expect("checked by caller");
    std::fs::write(path, svg).map_err(|e| Failure::BadInput(format!("{}: {e}", path.display())))
}

enum CohomologyInput {
    Complex(SimplicialComplex),
    Map(SimplicialMap),
}

fn cohomology_fixture(name: &str) -> Option<CohomologyInput> {
    use injcat::fixtures::*;
    Some(match name {
        "hexagon_quotient" => CohomologyInput::Map(hexagon_quotient_simplicial()),
        "icosahedron_quotient" => CohomologyInput::Map(icosahedron_quotient()),
        "arc_inclusion" => CohomologyInput::Map(arc_inclusion()),
        "rp2" => CohomologyInput::Complex(rp2_minimal()),
        "icosahedron" => CohomologyInput::Complex(icosahedron()),
        "triangle" => CohomologyInput::Complex(triangle()),
        _ => return None,
    })
}

fn load_cohomology(ctx: &mut Ctx, input: &str) -> Result<CohomologyInput, Failure> {
    if let Some(name) = input.strip_prefix("fixture:") {
        return cohomology_fixture(name).ok_or_else(|| Failure::BadInput(format!("unknown cohomology fixture `{name}`")));
    }
    let path = Path::new(input);
    let v = ctx.loader.value(path)?;
    let bad = |e: serde_json::Error| Failure::BadInput(format!("{input}: {e}"));
    if v.get("assignment").is_some() {
        let j: SimplicialMapJson = serde_json::from_value(v).map_err(bad)?;
        Ok(CohomologyInput::Map(ctx.loader.simplicial_map_from_json(&j, path)?))
    } else {
        let j: ComplexJson = serde_json::from_value(v).map_err(bad)?;
        Ok(CohomologyInput::Complex(complex_from_json(&j)?))
    }
}

fn ring_json(ring: &CohomologyRing) -> Value {
    let generators: Vec<Vec<String>> = (0..=ring.top()).map(|d| ring.generators(d).iter().map(|c| c.name()).collect()).collect();
    let products: Vec<[String; 3]> = ring.product_table().into_iter().map(|(a, b, c)| [a, b, c]).collect();
    json!({ "dims": ring.dims(), "generators": generators, "products": products })
}

fn cmd_cohomology(ctx: &mut Ctx, input: &str, surjective: bool) -> Result<Outcome, Failure> {
    let (results, text) = match load_cohomology(ctx, input)? {
        CohomologyInput::Complex(k) => {
            let ring = cohomology(Arc::new(k));
            let mut text = vec![format!("dims {:?}", ring.dims())];
            text.extend(ring.product_table().into_iter().map(|(a, b, c)| format!("  {a} * {b} = {c}")));
            (json!({ "kind": "complex", "ring": ring_json(&ring) }), text)
        }
        CohomologyInput::Map(f) => {
            let m_ring = cohomology(Arc::clone(f.domain()));
            let n_ring = cohomology(Arc::clone(f.codomain()));
            let fstar = induced_map(&f, &n_ring, &m_ring).expect("rings of the map's own complexes");
            let matrices: Vec<Vec<Vec<u8>>> = (0..=n_ring.top().min(m_ring.top())).map(|d| fstar.matrix(d, m_ring.dim(d))).collect();
            let lb = cohomological_lower_bound(&f, surjective);
            let text = vec![
                format!("codomain dims {:?}, domain dims {:?}", n_ring.dims(), m_ring.dims()),
                format!("nil(Ker f*) = {} ({})", lb.nil.value, lb.tag()),
            ];
            let results = json!({
                "kind": "map",
                "codomain": ring_json(&n_ring),
                "domain": ring_json(&m_ring),
                "induced": matrices,
                "nil": lb.nil.to_json(),
                "lower_bound": { "value": lb.nil.value, "tag": lb.tag(), "notes": lb.notes },
            });
            (results, text)
        }
    };
    Ok(Outcome {
        results,
        nodes: 0,
        violation: false,
        text,
    })
}
