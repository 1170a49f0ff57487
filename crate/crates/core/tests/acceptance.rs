//! One line per acceptance criterion. Exact criteria have no tolerance; every
//! criterion also has a wall-clock limit.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use injcat::cohomology::{cohomological_lower_bound, cohomology};
use injcat::equivariant::{facet_projection_cover, ic_quotient_sphere};
use injcat::fixtures;
use injcat::ic::oracle::brute_force_ic;
use injcat::ic::{ic_exact, Budget, IcValue};
use injcat::pl::fixtures::{annulus_square, annulus_wrap, bowtie, disk_identity, folded, rose};
use injcat::pl::{
    cover_from_multiplicity, euclidean_obstruction, ic_by_multiplicity, pl_local_injectivity, self_intersections,
    verify_param_cover, PLCurve, PLSurfaceMap, Verdict,
};
use injcat::random::{instance_seed, random_locally_injective, rng};
use injcat::suites::{run_suite, Suite, SuiteConfig};

/// IC of the octahedron quotient model, fixed once from the exact solver.
const OCTAHEDRON_MODEL_IC: usize = 8;

/// Thickening used for the facet-projection covers, in radians.
const THICKENING: f64 = 0.2;

type Check = Result<String, String>;

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn budget() -> Budget {
    Budget::default()
}

fn curve_with_one_point(c: &PLCurve, k: usize) -> Check {
    let r = self_intersections(c).map_err(|e| e.to_string())?;
    ensure(r.points.len() == 1, format!("{} multiple points", r.points.len()))?;
    ensure(r.points[0].multiplicity == k, format!("multiplicity {}", r.points[0].multiplicity))?;
    let ic = ic_by_multiplicity(&r);
    ensure(ic == IcValue::Finite(k), format!("IC {ic}"))?;
    let cover = cover_from_multiplicity(c, &r).map_err(|e| e.to_string())?;
    ensure(cover.sets.len() == k, format!("{} cover sets", cover.sets.len()))?;
    verify_param_cover(c, &r, &cover)?;
    Ok(format!("IC {k}, {k} verified sets"))
}

fn c1() -> Check {
    curve_with_one_point(&bowtie(), 2)
}

fn c2() -> Check {
    let mut notes = Vec::new();
    for k in 2..=5 {
        let t = Instant::now();
        curve_with_one_point(&rose(k), k).map_err(|e| format!("rose({k}): {e}"))?;
        ensure(t.elapsed() < Duration::from_secs(1), format!("rose({k}) took {:?}", t.elapsed()))?;
        notes.push(format!("rose({k})={k}"));
    }
    Ok(notes.join(" "))
}

fn c3() -> Check {
    for n in 0..=1 {
        let r = ic_quotient_sphere(n, &budget()).map_err(|e| e.to_string())?;
        let q = injcat::equivariant::sphere_model(n).map_err(|e| e.to_string())?.quotient();
        let oracle = brute_force_ic(&q.map).ok_or("model too large for the oracle")?;
        ensure(r.result.value == IcValue::Finite(n + 2), format!("n={n}: solver {}", r.result.value))?;
        ensure(oracle == IcValue::Finite(n + 2), format!("n={n}: oracle {oracle}"))?;
    }
    let r = ic_quotient_sphere(2, &budget()).map_err(|e| e.to_string())?;
    ensure(
        r.result.value == IcValue::Finite(OCTAHEDRON_MODEL_IC),
        format!("octahedron model {}", r.result.value),
    )?;
    for n in 1..=3 {
        let c = facet_projection_cover(n, THICKENING).map_err(|e| format!("n={n}: {e}"))?;
        ensure(c.cover.sets.len() == n + 2, format!("n={n}: {} sets", c.cover.sets.len()))?;
    }
    Ok(format!("models 2, 3, {OCTAHEDRON_MODEL_IC}; facet covers of 3, 4, 5 sets"))
}

fn c4() -> Check {
    let ico = fixtures::icosahedron_quotient();
    let lb = cohomological_lower_bound(&ico, true);
    ensure(lb.nil.value == 3 && lb.valid, format!("icosahedron nil {} {}", lb.nil.value, lb.tag()))?;
    let ring = cohomology(Arc::clone(ico.codomain()));
    let u = &lb.nil.witness[0];
    let uu = ring.cup(u, u).map_err(|e| e.to_string())?;
    let uuu = ring.cup(&uu, u).map_err(|e| e.to_string())?;
    ensure(!u.is_zero() && !uu.is_zero() && uuu.is_zero(), "u, u^2, u^3 pattern")?;

    let hex = cohomological_lower_bound(&fixtures::hexagon_quotient_simplicial(), true);
    let hex_ic = ic_exact(&fixtures::hexagon_quotient(), &budget()).map_err(|e| e.to_string())?.value;
    ensure(hex.nil.value == 2 && hex.valid, format!("hexagon nil {}", hex.nil.value))?;
    ensure(hex_ic == IcValue::Finite(3), format!("hexagon IC {hex_ic}"))?;

    let arc = fixtures::arc_inclusion();
    let lb = cohomological_lower_bound(&arc, false);
    let arc_ic = ic_exact(&arc.face_poset_map(), &budget()).map_err(|e| e.to_string())?.value;
    ensure(lb.nil.value == 2 && !lb.valid, format!("arc nil {} {}", lb.nil.value, lb.tag()))?;
    ensure(arc_ic == IcValue::Finite(1), format!("arc IC {arc_ic}"))?;
    Ok("icosahedron nil 3; hexagon nil 2 <= 3; arc nil 2 vs IC 1 (heuristic)".into())
}

fn suite(s: Suite, count: u64, seed: u64, n: usize) -> Result<usize, String> {
    let cfg = SuiteConfig {
        count,
        seed,
        budget: budget(),
        n,
    };
    let r = run_suite(s, &cfg).map_err(|e| e.to_string())?;
    if let Some(v) = r.violations.first() {
        return Err(format!("{}: {v}", s.name()));
    }
    Ok(r.count)
}

fn c5() -> Check {
    let mut total = 0;
    for s in [Suite::Composition, Suite::Pullback, Suite::Restriction, Suite::Iteration] {
        let k = suite(s, 500, 7, 1)?;
        ensure(k == 500, format!("{}: {k} instances", s.name()))?;
        total += k;
    }
    Ok(format!("{total} instances, 0 violations"))
}

fn c6() -> Check {
    let mut checked = 0;
    for i in 0..200 {
        let f = random_locally_injective(&mut rng(instance_seed(13, i)), 10, 6, 1000).ok_or("no locally injective draw")?;
        let exact = ic_exact(&f, &budget()).map_err(|e| e.to_string())?.value;
        let oracle = brute_force_ic(&f).ok_or("oracle refused")?;
        ensure(exact == oracle, format!("instance {i}: solver {exact}, oracle {oracle}"))?;
        checked += 1;
    }
    Ok(format!("{checked} instances agree"))
}

fn c7() -> Check {
    let a = suite(Suite::Lsb, 50, 0, 1)?;
    let b = suite(Suite::Lsb, 10, 0, 2)?;
    Ok(format!("pairs found in {a} circle covers and {b} sphere covers"))
}

fn c8() -> Check {
    fn verdict(f: &PLSurfaceMap, sides: usize) -> Result<Verdict, String> {
        euclidean_obstruction(f, sides).map(|r| r.verdict).map_err(|e| e.to_string())
    }
    ensure(verdict(&annulus_wrap(16), 64)? == Verdict::NotInjectiveCertificate, "annulus wrap")?;
    ensure(verdict(&annulus_square(16), 64)? == Verdict::Inconclusive, "z^2")?;
    ensure(verdict(&disk_identity(12), 64)? == Verdict::Inconclusive, "disk identity")?;
    Ok("certificate only for the degree-0 wrap".into())
}

fn c9() -> Check {
    let li = pl_local_injectivity(&folded(12));
    ensure(!li.injective && li.witness.is_some(), "folded circle")?;
    let r = ic_exact(&fixtures::sierpinski_collapse(), &budget()).map_err(|e| e.to_string())?;
    ensure(r.value == IcValue::Infinite, format!("Sierpinski collapse IC {}", r.value))?;
    Ok(format!("fold at vertex {}; IC inf at {}", li.witness.unwrap().edge, r.witness.unwrap_or_default()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("figure-eight", c1, 1),
        ("rose", c2, 4),
        ("sphere quotients", c3, 60),
        ("cohomological lower bound", c4, 10),
        ("inequality suites", c5, 120),
        ("oracle equivalence", c6, 60),
        ("antipodal search", c7, 60),
        ("euclidean obstruction", c8, 10),
        ("local injectivity", c9, 1),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let secs = t.elapsed().as_secs_f64();
        let (status, detail) = match result {
            Ok(d) if secs < *limit as f64 => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {limit} s limit")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {} {status} {name}: {detail} [{secs:.3} s / {limit} s]", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
