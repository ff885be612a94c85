use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use nlab::geometry::{rasterize_domain, Shape};
use nlab::nodal::{
    extract_nodal_domains, nodal_count_rectangle, PleijelEntry, PleijelSequence, DEFAULT_ZERO_TOL,
    SEQUENCE_SOLVER_TOL,
};
use nlab::packing::{
    blind_bound_check, greedy_pack, hex_lattice, packing_density, read_packing_csv, region_header, square_lattice,
    verify_packing, write_packing_csv, DiscPacking, PackingSidecar, RadiiLaw, Region, Violation,
};
use nlab::pleijel::{
    analyze_mode, bound_from_counts, class_iii_packing, class_iv_vacuity_check, classify, make_params,
    optimize_gain, rectangle_cell_metrics, write_scan_csv, gain_scan, BoundReport, ClassCounts, ClassifiedDomain, DomainClass,
    DISCRETIZATION_SLACK, P_BLIND, SCAN_STEP,
};
use nlab::spectral::{
    assemble_dirichlet_laplacian, j0_first_zero, rectangle_spectrum, smallest_eigenpairs, write_eigenvalue_csv,
    write_eigenvector_grid,
};

use crate::config::{ConfigFile, Resolver};
use crate::run::RunDir;
use crate::{CliError, EigsArgs, Lattice, OptimizeArgs, Oracle, PackArgs, PleijelArgs};

const DEFAULT_H: f64 = 1.0 / 64.0;

fn bytes_of<F>(write: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut Vec<u8>) -> nlab::Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    }
}

fn finish(run: RunDir, resolver: Resolver<'_>, mut summary: Value) -> Result<Value, CliError> {
    let mut run = run;
    run.write_json("summary.json", &summary)?;
    let root = run.finish(&resolver.resolved)?;
    summary["run_dir"] = json!(root.display().to_string());
    Ok(summary)
}

pub fn eigs(args: EigsArgs, file: Option<&ConfigFile>, out: &Path) -> Result<Value, CliError> {
    let mut r = Resolver::new(file);
    let shape = r.value("shape", args.shape, Shape::square())?;
    let h = positive("h", r.value("h", args.h, DEFAULT_H)?)?;
    let k = r.value("k", args.k, 10usize)?;
    let tol = positive("tol", r.value("tol", args.tol, 1e-9)?)?;
    let no_vectors = r.switch("no_vectors", args.no_vectors)?;

    let grid = rasterize_domain(&shape, h)?;
    let op = assemble_dirichlet_laplacian(&grid);
    let pairs = smallest_eigenpairs(&op, k, tol)?;

    let mut run = RunDir::create(out, "eigs")?;
    run.write("eigenvalues.csv", &bytes_of(|b| write_eigenvalue_csv(&pairs, b))?)?;
    if !no_vectors {
        for p in &pairs {
            run.write(&format!("vectors/eigvec_{:04}.bin", p.index), &bytes_of(|b| write_eigenvector_grid(&op, p, b))?)?;
        }
    }
    let summary = json!({
        "shape": shape.to_string(),
        "h": h,
        "unknowns": op.dim(),
        "area": grid.area(),
        "k": k,
        "lambda": pairs.iter().map(|p| p.lambda).collect::<Vec<_>>(),
        "degenerate": pairs.iter().filter(|p| p.degenerate).map(|p| p.index).collect::<Vec<_>>(),
        "max_residual": pairs.iter().map(|p| p.residual).fold(0.0f64, f64::max),
    });
    finish(run, r, summary)
}

/// One line of `bounds.json`.
#[derive(Serialize)]
struct ModeRecord {
    #[serde(flatten)]
    bound: BoundReport,
    refined_holds: bool,
    vacuity_holds: bool,
    first_violation: Option<usize>,
    non_genuine: usize,
    class_iii_empty: bool,
    /// Density of the inscribed class III discs in the whole domain.
    class_iii_density: Option<f64>,
}

fn parse_pair(text: &str, sep: char, what: &str) -> Result<(String, String), CliError> {
    text.split_once(sep)
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| CliError::Usage(format!("{what} must look like a{sep}b, got '{text}'")))
}

fn parse_window(text: &str) -> Result<(usize, usize), CliError> {
    let (lo, hi) = parse_pair(text, ':', "window")?;
    let parse = |s: &str| s.parse::<usize>().map_err(|e| CliError::Usage(format!("window: {e}")));
    let (lo, hi) = (parse(&lo)?, parse(&hi)?);
    if lo == 0 || lo > hi {
        return Err(CliError::Usage(format!("window needs 1 <= lo <= hi, got {lo}:{hi}")));
    }
    Ok((lo, hi))
}

pub fn pleijel(args: PleijelArgs, file: Option<&ConfigFile>, out: &Path) -> Result<Value, CliError> {
    let mut r = Resolver::new(file);
    let j = j0_first_zero();
    let n_max = r.value("n_max", args.n_max, 50usize)?;
    if n_max == 0 {
        return Err(CliError::Usage("n_max must be at least 1".into()));
    }
    let p = r.value("p", args.p, P_BLIND)?;
    let delta = match r.optional("delta", args.delta)? {
        Some(d) => d,
        None => optimize_gain(p, j, 1e-12)?.delta_star,
    };
    r.resolved.insert("delta".into(), delta.to_string());
    let window = match r.optional::<String>("window", args.window)? {
        Some(w) => parse_window(&w)?,
        None => ((n_max / 2).max(1), n_max),
    };
    let oracle = match r.optional::<String>("oracle", args.oracle.map(|_| "rectangle".to_string()))? {
        Some(o) if o == "rectangle" => Some(Oracle::Rectangle),
        Some(o) => return Err(CliError::Usage(format!("unknown oracle '{o}'"))),
        None => None,
    };

    let (source, seq, records) = match oracle {
        Some(Oracle::Rectangle) => {
            let a = positive("a", r.value("a", args.a, 1.0)?)?;
            let b = positive("b", r.value("b", args.b, 1.0 / 2f64.sqrt())?)?;
            let (seq, records) = rectangle_oracle(a, b, n_max, delta, p, j)?;
            (format!("closed-form rectangle {a} x {b}"), seq, records)
        }
        None => {
            let shape = r.value("shape", args.shape, Shape::Rectangle { width: 1.0, height: 1.0 / 2f64.sqrt() })?;
            let h = positive("h", r.value("h", args.h, DEFAULT_H)?)?;
            let zero_tol = positive("zero_tol", r.value("zero_tol", args.zero_tol, DEFAULT_ZERO_TOL)?)?;
            let (seq, records) = grid_run(&shape, h, n_max, delta, p, j, zero_tol)?;
            (format!("grid {shape} at h = {h}"), seq, records)
        }
    };

    let mut run = RunDir::create(out, "pleijel")?;
    run.write("sequence.csv", &bytes_of(|b| seq.write_csv(b))?)?;
    run.write_json("bounds.json", &records)?;
    let empty_iii = records.iter().filter(|m| m.class_iii_empty).count();
    let mut summary = serde_json::to_value(seq.summary(window)).map_err(|e| CliError::Compute(e.to_string()))?;
    let note = (empty_iii > 0).then(|| format!("class III is empty on {empty_iii} of {} modes", records.len()));
    let extra = json!({
        "source": source,
        "delta": delta,
        "p": p,
        "skipped_degenerate": seq.skipped,
        "refined_bound_holds": records.iter().all(|m| m.refined_holds),
        "slack": DISCRETIZATION_SLACK,
        "class_iv_vacuous": records.iter().all(|m| m.vacuity_holds),
        "modes_with_empty_class_iii": empty_iii,
        "note": note,
    });
    if let (Value::Object(s), Value::Object(e)) = (&mut summary, extra) {
        s.extend(e);
    }
    finish(run, r, summary)
}

fn rectangle_oracle(
    a: f64,
    b: f64,
    n_max: usize,
    delta: f64,
    p: f64,
    j: f64,
) -> Result<(PleijelSequence, Vec<ModeRecord>), CliError> {
    let seq = nodal_count_rectangle(a, b, n_max)?;
    let modes = rectangle_spectrum(a, b, n_max)?;
    let records = modes
        .par_iter()
        .enumerate()
        .map(|(i, mode)| {
            let params = make_params(delta, mode.lambda, p, j)?;
            let cell = rectangle_cell_metrics(mode, a, b);
            let class = classify(&cell, &params);
            let count = mode.nodal_count() as usize;
            let mut counts = ClassCounts::default();
            counts.add(class, count);
            let bound = bound_from_counts(i + 1, counts, mode.lambda, a * b, delta, p, j);
            let vacuity = class_iv_vacuity_check(&[ClassifiedDomain { metrics: cell, class }], mode.lambda, j);
            let iii_area = if class == DomainClass::III { count as f64 * PI * cell.r_i * cell.r_i } else { 0.0 };
            Ok(ModeRecord {
                refined_holds: bound.refined_holds(DISCRETIZATION_SLACK),
                vacuity_holds: vacuity.holds,
                first_violation: vacuity.first_violation,
                non_genuine: if vacuity.non_genuine.is_empty() { 0 } else { count },
                class_iii_empty: counts.iii == 0,
                class_iii_density: Some(iii_area / (a * b)),
                bound,
            })
        })
        .collect::<nlab::Result<Vec<_>>>()?;
    Ok((seq, records))
}

fn grid_run(
    shape: &Shape,
    h: f64,
    n_max: usize,
    delta: f64,
    p: f64,
    j: f64,
    zero_tol: f64,
) -> Result<(PleijelSequence, Vec<ModeRecord>), CliError> {
    let grid = rasterize_domain(shape, h)?;
    let op = assemble_dirichlet_laplacian(&grid);
    if n_max > op.dim() {
        return Err(CliError::Usage(format!("n_max = {n_max} exceeds the {} grid unknowns", op.dim())));
    }
    let pairs = smallest_eigenpairs(&op, n_max, SEQUENCE_SOLVER_TOL)?;
    let mut seq = PleijelSequence::default();
    for p in pairs.iter().filter(|p| p.degenerate) {
        eprintln!("mode {}: degenerate eigenvalue {:.12e}, skipped", p.index, p.lambda);
        seq.skipped.push(p.index);
    }
    let kept: Vec<_> = pairs.iter().filter(|p| !p.degenerate).collect();
    let analysed = kept
        .par_iter()
        .map(|pair| {
            let domains = extract_nodal_domains(&grid, pair, zero_tol)?;
            let metrics: Vec<_> = domains.iter().map(|d| d.metrics).collect();
            let analysis = analyze_mode(pair.index, pair.lambda, &metrics, grid.area(), delta, p, j)?;
            let density = packing_density(&class_iii_packing(&grid, &domains, &analysis.params)).ok();
            Ok((domains.len(), analysis, density))
        })
        .collect::<nlab::Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(kept.len());
    for (pair, (count, analysis, density)) in kept.iter().zip(analysed) {
        seq.entries.push(PleijelEntry {
            n: pair.index,
            lambda: pair.lambda,
            nodal_count: count as u64,
            ratio: count as f64 / pair.index as f64,
            degenerate: false,
        });
        records.push(ModeRecord {
            refined_holds: analysis.bound.refined_holds(DISCRETIZATION_SLACK),
            vacuity_holds: analysis.vacuity.holds,
            first_violation: analysis.vacuity.first_violation,
            non_genuine: analysis.vacuity.non_genuine.len(),
            class_iii_empty: analysis.bound.n_iii == 0,
            class_iii_density: density,
            bound: analysis.bound,
        });
    }
    Ok((seq, records))
}

pub fn optimize(args: OptimizeArgs, file: Option<&ConfigFile>, out: &Path) -> Result<Value, CliError> {
    let mut r = Resolver::new(file);
    let p = r.value("p", args.p, P_BLIND)?;
    let tol = positive("tol", r.value("tol", args.tol, 1e-12)?)?;
    let scan_out = r.optional::<String>("scan_out", args.scan_out.map(|p| p.display().to_string()))?;
    let j = j0_first_zero();
    let report = optimize_gain(p, j, tol)?;

    let mut run = RunDir::create(out, "optimize")?;
    let scan = bytes_of(|b| write_scan_csv(&gain_scan(j, SCAN_STEP), b))?;
    run.write("scan.csv", &scan)?;
    if let Some(path) = scan_out {
        std::fs::write(&path, &scan)?;
        run.record(path.into());
    }
    let summary = serde_json::to_value(report).map_err(|e| CliError::Compute(e.to_string()))?;
    let summary = finish(run, r, summary)?;
    if !report.constraint_35 {
        println!("{}", serde_json::to_string_pretty(&summary).unwrap_or_default());
        return Err(CliError::Compute(format!(
            "merge constraint fails at delta* = {} for p = {p}; the refined bound does not apply",
            report.delta_star
        )));
    }
    Ok(summary)
}

fn parse_torus(text: &str) -> Result<(f64, f64), CliError> {
    let (w, h) = parse_pair(&text.to_lowercase(), 'x', "torus")?;
    let parse = |s: &str| s.parse::<f64>().map_err(|e| CliError::Usage(format!("torus: {e}")));
    Ok((positive("torus width", parse(&w)?)?, positive("torus height", parse(&h)?)?))
}

fn parse_radii(text: &str) -> Result<RadiiLaw, CliError> {
    let (lo, hi) = parse_pair(text, ':', "radii")?;
    let parse = |s: &str| s.parse::<f64>().map_err(|e| CliError::Usage(format!("radii: {e}")));
    let (lo, hi) = (parse(&lo)?, parse(&hi)?);
    Ok(if lo == hi { RadiiLaw::Constant { r: lo } } else { RadiiLaw::Uniform { lo, hi } })
}

pub fn pack(args: PackArgs, file: Option<&ConfigFile>, out: &Path) -> Result<Value, CliError> {
    let mut r = Resolver::new(file);
    let load = r.optional::<String>("load", args.load.map(|p| p.display().to_string()))?;
    let greedy = r.switch("greedy", args.greedy)?;
    let lattice_flag = args.lattice.map(|l| if l == Lattice::Hex { "hex" } else { "square" }.to_string());
    let lattice = r.optional::<String>("lattice", lattice_flag)?;

    let (packing, sidecar, requested) = if let Some(path) = &load {
        let text = std::fs::File::open(path).map_err(|e| CliError::Usage(format!("cannot open {path}: {e}")))?;
        let packing = read_packing_csv(std::io::BufReader::new(text))?;
        let sidecar = PackingSidecar {
            generator: format!("loaded from {path}"),
            region: region_header(&packing.region),
            seed: None,
            radii_law: None,
            attempts: None,
            discs: packing.discs.len(),
        };
        (packing, sidecar, None)
    } else {
        let torus = r.value("torus", args.torus, "20x20".to_string())?;
        let (lx, ly) = parse_torus(&torus)?;
        if greedy {
            let law = parse_radii(&r.value("radii", args.radii, format!("{P_BLIND}:1"))?)?;
            let seed = r.value("seed", args.seed, 0u64)?;
            let attempts = r.value("attempts", args.attempts, 100_000usize)?;
            let packing = greedy_pack(lx, ly, law, attempts, seed)?;
            let sidecar = PackingSidecar {
                generator: "greedy".into(),
                region: region_header(&packing.region),
                seed: Some(seed),
                radii_law: Some(law),
                attempts: Some(attempts),
                discs: packing.discs.len(),
            };
            (packing, sidecar, Some((lx, ly)))
        } else {
            let kind = lattice.unwrap_or_else(|| "hex".into());
            let radius = positive("radius", r.value("radius", args.radius, 1.0)?)?;
            let packing = match kind.as_str() {
                "hex" => hex_lattice(lx, ly, radius)?,
                "square" => square_lattice(lx, ly, radius)?,
                other => return Err(CliError::Usage(format!("unknown lattice '{other}'"))),
            };
            r.resolved.insert("lattice".into(), kind.clone());
            let sidecar = PackingSidecar {
                generator: format!("{kind} lattice"),
                region: region_header(&packing.region),
                seed: None,
                radii_law: Some(RadiiLaw::Constant { r: radius }),
                attempts: None,
                discs: packing.discs.len(),
            };
            (packing, sidecar, Some((lx, ly)))
        }
    };

    let mut run = RunDir::create(out, "pack")?;
    run.write("packing.csv", &bytes_of(|b| write_packing_csv(&packing, b))?)?;
    run.write_json("packing.json", &sidecar)?;
    if let Err(v) = verify_packing(&packing) {
        let detail = describe(&packing, v);
        run.write_json("verification.json", &json!({ "valid": false, "violation": v, "detail": detail }))?;
        run.finish(&r.resolved)?;
        return Err(CliError::Compute(format!("invalid packing: {detail}")));
    }
    let report = blind_bound_check(&packing)?;
    run.write_json("blind.json", &report)?;
    let mut summary = serde_json::to_value(report).map_err(|e| CliError::Compute(e.to_string()))?;
    summary["region"] = json!(region_header(&packing.region));
    summary["generator"] = json!(sidecar.generator);
    if let (Some((lx, ly)), Region::Torus { lx: sx, ly: sy }) = (requested, &packing.region) {
        if (lx, ly) != (*sx, *sy) {
            summary["requested_torus"] = json!([lx, ly]);
        }
    }
    finish(run, r, summary)
}

fn describe(packing: &DiscPacking, v: Violation) -> String {
    match v {
        Violation::Overlap(a, b) => {
            let (p, q) = (packing.discs[a], packing.discs[b]);
            format!(
                "discs {a} and {b} overlap: distance {} < {}",
                packing.region.distance(p.center, q.center),
                p.radius + q.radius
            )
        }
        Violation::Outside(i) => format!("disc {i} is not inside the region"),
        Violation::NonPositiveRadius(i) => format!("disc {i} has a non-positive radius"),
    }
}
