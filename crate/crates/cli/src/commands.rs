use std::fmt::Write as _;

use dirlap_core::assumptions::{check_asymmetry, check_kirchhoff_with, AssumptionReport, KirchhoffTolerance};
use dirlap_core::generators::{make_ladder, make_random_balanced, make_tree, LadderMeasure, LadderSpec, TreeSpec};
use dirlap_core::heat::{evolve_trace, parse_time_grid, EvolutionTrace};
use dirlap_core::spectral::numrange::{fit_semi_angle, hermitian_part_extremes, SectorCheck};
use dirlap_core::spectral::{check_sector, cheeger_summary, maccretive_certificate, numrange_boundary, CertificateOptions};
use dirlap_core::topology::eccentricity;
use dirlap_core::{assemble, ball, DirectedGraph, OperatorKind, Truncation, VertexId, WeightedVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::*;
use crate::{write_output, Failure};

pub(crate) fn dispatch(command: &Command) -> Result<bool, Failure> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Check(a) => check(command, a),
        Command::Spectrum(a) => spectrum(command, a),
        Command::Cheeger(a) => cheeger(command, a),
        Command::Evolve(a) => evolve(command, a),
        Command::Certify(a) => certify(command, a),
    }
}

fn generate(family: Family, p: &GeneratorArgs) -> Result<DirectedGraph, Failure> {
    let g = match family {
        Family::Ladder => {
            let measure = match p.measure {
                MeasureArg::SqrtN => LadderMeasure::SqrtN,
                MeasureArg::Unit => LadderMeasure::Unit,
            };
            make_ladder(&LadderSpec { depth: p.ladder_depth, k: p.k, measure })?
        }
        Family::Tree => {
            let mut spec = TreeSpec::new(p.depth);
            if let Some(b) = &p.branching {
                spec.branching = b.clone();
            }
            make_tree(&spec)?
        }
        Family::Random => make_random_balanced(p.vertices, p.seed, p.density)?,
    };
    Ok(g)
}

fn load(source: &SourceArgs) -> Result<DirectedGraph, Failure> {
    match (&source.graph, source.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
            DirectedGraph::from_json_str(&text).map_err(|e| {
                let f = Failure::from(e);
                Failure { message: format!("{}: {}", path.display(), f.message), ..f }
            })
        }
        (None, Some(family)) => generate(family, &source.params),
        _ => Err(Failure::input("give exactly one of --graph and --gen")),
    }
}

fn gen(a: &GenArgs) -> Result<bool, Failure> {
    let g = generate(a.family, &a.params)?;
    let mut text = g.to_json_string();
    text.push('\n');
    write_output(a.out.as_deref(), &text)?;
    Ok(true)
}

/// Graph, root and ball shared by every analysis subcommand.
struct Setup {
    graph: DirectedGraph,
    root: VertexId,
    trunc: Truncation,
}

fn setup(source: &SourceArgs, t: &TruncationArgs, default_full: bool) -> Result<Setup, Failure> {
    let graph = load(source)?;
    let root = match &t.root {
        Some(label) => graph.vertex(label)?,
        None => VertexId::from_index(0),
    };
    let radius = match t.radius {
        Some(r) => r,
        None => {
            let ecc = eccentricity(&graph, root)?;
            if default_full {
                ecc
            } else {
                ecc.saturating_sub(1)
            }
        }
    };
    let trunc = ball(&graph, root, radius)?;
    if t.dump_csv.is_some() || t.dump_coo.is_some() {
        let op = assemble(&graph, &trunc, OperatorKind::Delta);
        if let Some(p) = &t.dump_csv {
            write_output(Some(p), &op.to_csv()?)?;
        }
        if let Some(p) = &t.dump_coo {
            write_output(Some(p), &op.to_coo())?;
        }
    }
    Ok(Setup { graph, root, trunc })
}

#[derive(Serialize)]
struct GraphInfo {
    vertices: usize,
    edges: usize,
    unit_measure: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a Command,
    graph: GraphInfo,
    root: &'a str,
    radius: usize,
    ball_size: usize,
    interior_size: usize,
    passed: bool,
    report: T,
}

fn emit<T: Serialize>(command: &Command, s: &Setup, out: Option<&std::path::Path>, passed: bool, report: T) -> Result<bool, Failure> {
    let envelope = Envelope {
        tool: "dirlap",
        version: env!("CARGO_PKG_VERSION"),
        config: command,
        graph: GraphInfo {
            vertices: s.graph.num_vertices(),
            edges: s.graph.num_edges(),
            unit_measure: s.graph.has_unit_measure(),
        },
        root: s.graph.label(s.root),
        radius: s.trunc.radius,
        ball_size: s.trunc.len(),
        interior_size: s.trunc.interior.len(),
        passed,
        report,
    };
    let mut text = serde_json::to_string_pretty(&envelope).map_err(|e| Failure::input(e.to_string()))?;
    text.push('\n');
    write_output(out, &text)?;
    Ok(passed)
}

fn check(command: &Command, a: &CheckArgs) -> Result<bool, Failure> {
    let s = setup(&a.source, &a.trunc, true)?;
    let radii: Vec<usize> = (1..=s.trunc.radius.max(1)).collect();
    let mut report = AssumptionReport::probe(&s.graph, s.root, &radii)?;
    let tol = a.kirchhoff_tol.map_or(KirchhoffTolerance::Auto, KirchhoffTolerance::Absolute);
    let kirchhoff = check_kirchhoff_with(&s.graph, &s.trunc.interior, tol)?;
    report.kirchhoff_balanced = kirchhoff.balanced;
    report.kirchhoff_max_imbalance = kirchhoff.max_imbalance;
    report.kirchhoff_worst_vertex = kirchhoff.worst_vertex.map(|v| s.graph.label(v).to_string());
    let imbalanced: Vec<String> = s
        .trunc
        .interior
        .iter()
        .filter_map(|&v| {
            let single = check_kirchhoff_with(&s.graph, &[v], tol).ok()?;
            (!single.balanced).then(|| s.graph.label(v).to_string())
        })
        .collect();

    #[derive(Serialize)]
    struct CheckReport {
        #[serde(flatten)]
        assumptions: AssumptionReport,
        imbalanced_vertices: Vec<String>,
    }
    let passed = kirchhoff.balanced;
    emit(command, &s, a.trunc.out.as_deref(), passed, CheckReport { assumptions: report, imbalanced_vertices: imbalanced })
}

fn spectrum(command: &Command, a: &SpectrumArgs) -> Result<bool, Failure> {
    let s = setup(&a.source, &a.trunc, false)?;
    let op = assemble(&s.graph, &s.trunc, OperatorKind::Delta);
    let sample = numrange_boundary(&op, a.angles)?;
    let c = match a.asymmetry {
        Some(c) => c,
        None => check_asymmetry(&s.graph, &s.trunc.vertices)?,
    };
    let mut sector = check_sector(&sample, c)?;
    sector.holds = sample
        .points
        .iter()
        .all(|z| z.im.abs() - sector.intercept - sector.slope * z.re <= a.sector_tol * z.norm().max(1.0));
    let fitted_vertex = a.sector_vertex.unwrap_or(sector.sector.vertex);
    let fitted_semi_angle = fit_semi_angle(&sample, fitted_vertex);

    if let Some(path) = &a.csv {
        let mut csv = String::from("angle,re,im\n");
        for (phi, z) in sample.angles.iter().zip(&sample.points) {
            let _ = writeln!(csv, "{phi},{},{}", z.re, z.im);
        }
        write_output(Some(path), &csv)?;
    }

    #[derive(Serialize)]
    struct SpectrumReport {
        angles: usize,
        min_real: f64,
        max_real: f64,
        asymmetry_constant: f64,
        sector: SectorCheck,
        fitted_vertex: f64,
        fitted_semi_angle: Option<f64>,
    }
    let passed = sector.holds;
    let report = SpectrumReport {
        angles: sample.len(),
        min_real: sample.min_real,
        max_real: sample.max_real,
        asymmetry_constant: c,
        sector,
        fitted_vertex,
        fitted_semi_angle,
    };
    emit(command, &s, a.trunc.out.as_deref(), passed, report)
}

fn cheeger(command: &Command, a: &CheegerArgs) -> Result<bool, Failure> {
    let s = setup(&a.source, &a.trunc, false)?;
    if !s.graph.has_unit_measure() {
        return Err(Failure::input("the Cheeger bound is stated for m = 1; this graph has a non-constant measure"));
    }
    let op = assemble(&s.graph, &s.trunc, OperatorKind::Delta);
    let (min_real, _) = hermitian_part_extremes(&op)?;
    let mut summary = cheeger_summary(&s.graph, s.root, s.trunc.radius, min_real, a.exhaustive_limit)?
        .ok_or_else(|| Failure::input("no proper ball around the root to estimate the Cheeger constant"))?;
    summary.holds = min_real >= summary.lambda0 - a.slack;

    #[derive(Serialize)]
    struct CheegerReport {
        #[serde(flatten)]
        summary: dirlap_core::spectral::CheegerSummary,
        min_real: f64,
        verdict: bool,
    }
    let passed = summary.holds;
    emit(command, &s, a.trunc.out.as_deref(), passed, CheegerReport { summary, min_real, verdict: passed })
}

fn random_states(op: &dirlap_core::TruncatedOperator, trunc: &Truncation, count: usize, seed: u64) -> Result<Vec<WeightedVector>, Failure> {
    let mut support: Vec<usize> = trunc.interior.iter().filter_map(|&v| op.local_index(v)).collect();
    if support.is_empty() {
        support = (0..op.len()).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut values = vec![Complex64::new(0.0, 0.0); op.len()];
            for &i in &support {
                values[i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            }
            let v = op.vector(values)?;
            let n = v.norm();
            if n == 0.0 {
                return Err(dirlap_core::Error::ZeroVector.into());
            }
            Ok(v.scaled(Complex64::new(1.0 / n, 0.0)))
        })
        .collect()
}

fn evolve(command: &Command, a: &EvolveArgs) -> Result<bool, Failure> {
    let s = setup(&a.source, &a.trunc, false)?;
    let times = parse_time_grid(&a.times)?;
    let op = assemble(&s.graph, &s.trunc, OperatorKind::Delta);
    let states = random_states(&op, &s.trunc, a.states, a.source.params.seed)?;
    let mut trace: EvolutionTrace = evolve_trace(&op, &states, &times, a.lambda0)?;
    trace.flagged = trace
        .operator_norms
        .iter()
        .zip(&trace.bounds)
        .enumerate()
        .filter(|(_, (n, b))| **n > **b + a.slack)
        .map(|(i, _)| i)
        .collect();

    if let Some(path) = &a.csv {
        let mut csv = String::from("t,opnorm,bound");
        for k in 0..trace.state_norms.len() {
            let _ = write!(csv, ",state{k}");
        }
        csv.push('\n');
        for (i, t) in trace.times.iter().enumerate() {
            let _ = write!(csv, "{t},{},{}", trace.operator_norms[i], trace.bounds[i]);
            for s in &trace.state_norms {
                let _ = write!(csv, ",{}", s[i]);
            }
            csv.push('\n');
        }
        write_output(Some(path), &csv)?;
    }

    #[derive(Serialize)]
    struct EvolveReport {
        flagged_times: Vec<f64>,
        max_excess: f64,
        trace: EvolutionTrace,
    }
    let max_excess = trace
        .operator_norms
        .iter()
        .zip(&trace.bounds)
        .map(|(n, b)| n - b)
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = trace.passed();
    let report = EvolveReport { flagged_times: trace.flagged.iter().map(|&i| trace.times[i]).collect(), max_excess, trace };
    emit(command, &s, a.trunc.out.as_deref(), passed, report)
}

fn certify(command: &Command, a: &CertifyArgs) -> Result<bool, Failure> {
    let s = setup(&a.source, &a.trunc, false)?;
    let options = CertificateOptions {
        angles: a.angles,
        cheeger_bruteforce_limit: a.exhaustive_limit,
        sector_vertex: a.sector_vertex,
    };
    let certificate = maccretive_certificate(&s.graph, s.root, s.trunc.radius, &options)?;
    let passed = certificate.verdict;
    emit(command, &s, a.trunc.out.as_deref(), passed, certificate)
}
