mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use qg_core::cheeger::{cheeger_discrete, verify_cheeger, EdgeCut, EXHAUSTIVE_VERTEX_CAP};
use qg_core::checks::{verify_all, Check, VerifyOptions};
use qg_core::discrete::{index_discrete, laplacian, spectrum_discrete};
use qg_core::metric::{
    bond_secular_spectrum, equilateral_spectrum, fem_clusters, fem_spectrum, metric_index, secular_spectrum_dtn,
    BondOptions, DtnOptions, FemOptions,
};
use qg_core::space::irreducible_decomposition;
use qg_core::trace::{heat_trace_discrete, heat_trace_metric, metric_spectral_heat_trace, spectral_heat_trace};
use qg_core::{parse_graph, print_graph, Error, Method, SpectrumResult, TotalVertexSpace, WeightedGraph};

use report::{num, Report};

/// Spectra, indices, heat traces and isoperimetric constants of quantum
/// graphs.
#[derive(Parser)]
#[command(name = "qg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the metric Laplacian in [0, lmax].
    Spectrum {
        file: PathBuf,
        #[arg(long, default_value_t = 20.0)]
        lmax: f64,
        #[arg(long, value_enum, default_value_t = SpectrumMethod::Bond)]
        method: SpectrumMethod,
        /// Finite elements per unit length.
        #[arg(long, default_value_t = 200)]
        fem_n: usize,
        /// Agreement tolerance between methods.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Singular value threshold for bond multiplicities.
        #[arg(long, default_value_t = 1e-8)]
        bond_tol: f64,
    },
    /// Discrete and metric index against dim 𝒢 - |E|.
    Index { file: PathBuf },
    /// Heat trace by a trace formula, compared with the spectral sum.
    Trace {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_enum, default_value_t = TraceMode::Metric)]
        mode: TraceMode,
        /// Largest cycle length kept in the metric expansion; defaults to
        /// max(sqrt(120 t), 2 ℓ_max).
        #[arg(long)]
        cutoff: Option<f64>,
        /// Number of walk terms in the discrete expansion.
        #[arg(long, default_value_t = 40)]
        terms: usize,
        /// Top of the eigenvalue range for the spectral side; defaults to 45/t.
        #[arg(long)]
        oracle_lmax: Option<f64>,
    },
    /// Cheeger constant and the inequality λ₂ ≥ h²/4 (metric) or h²/2 (discrete).
    Cheeger {
        file: PathBuf,
        #[arg(long)]
        discrete: bool,
        /// Largest number of carved edges in the metric search.
        #[arg(long, default_value_t = 1)]
        carve_depth: usize,
    },
    /// Every invariant check applicable to the input.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 20.0)]
        lmax: f64,
        #[arg(long, default_value_t = 200)]
        fem_n: usize,
        /// Heat time used by the trace checks.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        carve_depth: usize,
    },
    /// Prints the irreducible decomposition as a graph file.
    Decompose { file: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpectrumMethod {
    Dtn,
    Bond,
    Equilateral,
    Fem,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceMode {
    Metric,
    Discrete,
    Spectral,
}

enum Failure {
    Input(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

struct Input {
    path: String,
    digest: String,
    graph: WeightedGraph,
    space: TotalVertexSpace,
}

fn load(path: &PathBuf) -> Result<Input, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))?;
    let (graph, space) = parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Input { path: path.display().to_string(), digest, graph, space })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli.command);
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok((text, failed)) => {
            print!("{text}");
            ExitCode::from(if failed { 1 } else { 0 })
        }
        Err(Failure::Input(m)) => {
            eprintln!("qg: parse error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(m)) => {
            eprintln!("qg: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(String, bool), Failure> {
    match command {
        Command::Spectrum { file, lmax, method, fem_n, tol, bond_tol } => {
            let input = load(&file)?;
            let r = spectrum(&input, lmax, method, fem_n, tol, bond_tol)?;
            Ok((r.render(), r.failed()))
        }
        Command::Index { file } => {
            let input = load(&file)?;
            let r = index(&input)?;
            Ok((r.render(), r.failed()))
        }
        Command::Trace { file, t, mode, cutoff, terms, oracle_lmax } => {
            let input = load(&file)?;
            let r = trace(&input, t, mode, cutoff, terms, oracle_lmax)?;
            Ok((r.render(), r.failed()))
        }
        Command::Cheeger { file, discrete, carve_depth } => {
            let input = load(&file)?;
            let r = cheeger(&input, discrete, carve_depth)?;
            Ok((r.render(), r.failed()))
        }
        Command::Verify { file, lmax, fem_n, t, carve_depth } => {
            let input = load(&file)?;
            let opts = VerifyOptions { lambda_max: lmax, fem_n, t, carve_depth };
            let mut r = Report::checks(
                "verify",
                &input.digest,
                &input.path,
                &[("lmax", num(lmax)), ("fem-n", fem_n.to_string()), ("t", num(t)), ("carve-depth", carve_depth.to_string())],
            );
            for c in verify_all(&input.graph, &input.space, &opts) {
                r.check(&c);
            }
            Ok((r.render(), r.failed()))
        }
        Command::Decompose { file } => {
            let input = load(&file)?;
            let d = irreducible_decomposition(&input.graph, &input.space)?;
            let text = format!(
                "# qg decompose\n# input {} sha256:{}\n{}",
                input.path,
                input.digest,
                print_graph(&d.graph, &d.space)
            );
            Ok((text, false))
        }
    }
}

fn fem_count_spectrum(input: &Input, lmax: f64, fem_n: usize) -> Result<SpectrumResult, Failure> {
    let g = &input.graph;
    let opts = FemOptions { n_per_unit: fem_n, estimate_error: true };
    // Weyl count with room to spare, doubled until an eigenvalue exceeds lmax
    let mut count = (g.total_length() * lmax.sqrt() / std::f64::consts::PI) as usize + g.edge_count() + 2;
    loop {
        let s = fem_spectrum(g, &input.space, count, opts)?;
        let top = s.eigenvalues.last().map(|e| e.value - 5.0 * e.error).unwrap_or(f64::INFINITY);
        if top > lmax || s.eigenvalues.len() < count {
            let mut kept = s;
            kept.eigenvalues.retain(|e| e.value <= lmax);
            return Ok(fem_clusters(&kept, 5.0));
        }
        count *= 2;
    }
}

struct Row {
    value: f64,
    multiplicity: String,
    method: String,
    error: f64,
    status: String,
}

fn spectrum(
    input: &Input,
    lmax: f64,
    method: SpectrumMethod,
    fem_n: usize,
    tol: f64,
    bond_tol: f64,
) -> Result<Report, Failure> {
    let g = &input.graph;
    let t = &input.space;
    let mut report = Report::new(
        "spectrum",
        &input.digest,
        &input.path,
        &[
            ("lmax", num(lmax)),
            ("method", method.to_possible_value().unwrap().get_name().to_string()),
            ("fem-n", fem_n.to_string()),
            ("tol", num(tol)),
            ("bond-tol", num(bond_tol)),
        ],
    );
    report.set_header(vec!["lambda", "multiplicity", "method", "error", "status"]);
    let bond_opts = BondOptions { tol: bond_tol, ..Default::default() };
    let mut rows = Vec::new();
    let plain = |s: &SpectrumResult, rows: &mut Vec<Row>| {
        for e in &s.eigenvalues {
            rows.push(Row {
                value: e.value,
                multiplicity: e.multiplicity.to_string(),
                method: e.method.tag().into(),
                error: e.error,
                status: String::new(),
            });
        }
    };
    let windows = |s: &SpectrumResult, rows: &mut Vec<Row>| {
        for &(a, b) in &s.unresolved {
            rows.push(Row {
                value: 0.5 * (a + b),
                multiplicity: String::new(),
                method: "dtn".into(),
                error: 0.5 * (b - a),
                status: "unresolved".into(),
            });
        }
    };
    match method {
        SpectrumMethod::Bond => plain(&bond_secular_spectrum(g, t, lmax, bond_opts)?, &mut rows),
        SpectrumMethod::Dtn => {
            let s = secular_spectrum_dtn(g, t, lmax, DtnOptions::default())?;
            plain(&s, &mut rows);
            windows(&s, &mut rows);
        }
        SpectrumMethod::Equilateral => plain(&equilateral_spectrum(g, t, lmax)?, &mut rows),
        SpectrumMethod::Fem => plain(&fem_count_spectrum(input, lmax, fem_n)?, &mut rows),
        SpectrumMethod::All => {
            let bond = bond_secular_spectrum(g, t, lmax, bond_opts)?;
            let matches = |value: f64, m: usize, slack: f64| {
                bond.eigenvalues.iter().any(|b| (b.value - value).abs() <= slack && b.multiplicity == m)
            };
            for e in &bond.eigenvalues {
                rows.push(Row {
                    value: e.value,
                    multiplicity: e.multiplicity.to_string(),
                    method: "bond".into(),
                    error: e.error,
                    status: "reference".into(),
                });
            }
            let dtn = secular_spectrum_dtn(g, t, lmax, DtnOptions::default())?;
            let inside = |x: f64| dtn.unresolved.iter().any(|&(a, b)| x >= a && x <= b);
            for e in &dtn.eigenvalues {
                let ok = matches(e.value, e.multiplicity, tol);
                rows.push(Row {
                    value: e.value,
                    multiplicity: e.multiplicity.to_string(),
                    method: "dtn".into(),
                    error: e.error,
                    status: if ok { "consistent" } else { "inconsistent" }.into(),
                });
            }
            windows(&dtn, &mut rows);
            let missed: Vec<f64> = bond
                .eigenvalues
                .iter()
                .filter(|b| !inside(b.value) && !dtn.eigenvalues.iter().any(|e| (e.value - b.value).abs() <= tol))
                .map(|b| b.value)
                .collect();
            if !missed.is_empty() {
                report.note(format!("dtn misses {}", missed.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ")));
                report.fail();
            }
            let fem = fem_count_spectrum(input, lmax, fem_n)?;
            for e in &fem.eigenvalues {
                let ok = matches(e.value, e.multiplicity, tol.max(5.0 * e.error));
                rows.push(Row {
                    value: e.value,
                    multiplicity: e.multiplicity.to_string(),
                    method: "fem".into(),
                    error: e.error,
                    status: if ok { "consistent" } else { "inconsistent" }.into(),
                });
            }
            if fem.total_multiplicity() != bond.total_multiplicity() {
                report.note(format!(
                    "fem finds {} eigenvalues, bond {}",
                    fem.total_multiplicity(),
                    bond.total_multiplicity()
                ));
                report.fail();
            }
            if g.is_equilateral() {
                let eq = equilateral_spectrum(g, t, lmax)?;
                for e in &eq.eigenvalues {
                    let status = if e.method == Method::DirichletPoint {
                        "unverified"
                    } else if matches(e.value, e.multiplicity, tol) {
                        "consistent"
                    } else {
                        "inconsistent"
                    };
                    rows.push(Row {
                        value: e.value,
                        multiplicity: e.multiplicity.to_string(),
                        method: e.method.tag().into(),
                        error: e.error,
                        status: status.into(),
                    });
                }
            }
            if rows.iter().any(|r| r.status == "inconsistent") {
                report.fail();
            }
        }
    }
    let key = |x: f64| num(x).parse::<f64>().unwrap_or(x);
    rows.sort_by(|a, b| key(a.value).total_cmp(&key(b.value)).then_with(|| a.method.cmp(&b.method)));
    for r in rows {
        report.row(vec![num(r.value), r.multiplicity, r.method, num(r.error), r.status]);
    }
    Ok(report)
}

fn index(input: &Input) -> Result<Report, Failure> {
    let g = &input.graph;
    let t = &input.space;
    let mut r = Report::checks("index", &input.digest, &input.path, &[]);
    let d = index_discrete(g, t)?;
    let m = metric_index(g, t)?;
    let formula = t.dim() as i64 - g.edge_count() as i64;
    r.value("discrete.h0", d.h0.to_string());
    r.value("discrete.h1", d.h1.to_string());
    r.value("discrete.index", d.index.to_string());
    r.value("metric.h0", m.h0.to_string());
    r.value("metric.h1", m.h1.to_string());
    r.value("metric.index", m.index.to_string());
    r.value("dim_minus_edges", formula.to_string());
    r.check(&Check::equal("discrete_index_formula", d.index as f64, formula as f64));
    r.check(&Check::equal("metric_index_formula", m.index as f64, formula as f64));
    r.check(&Check::equal("metric_equals_discrete", m.index as f64, d.index as f64));
    r.check(&Check::at_most("chain_maps", m.chain.max(), 1e-10));
    Ok(r)
}

fn trace(
    input: &Input,
    t: f64,
    mode: TraceMode,
    cutoff: Option<f64>,
    terms: usize,
    oracle_lmax: Option<f64>,
) -> Result<Report, Failure> {
    let g = &input.graph;
    let space = &input.space;
    let cutoff = cutoff.unwrap_or_else(|| (120.0 * t).sqrt().max(2.0 * g.max_length()));
    let cut = oracle_lmax.unwrap_or(45.0 / t.max(1e-300));
    let mode_name = mode.to_possible_value().unwrap().get_name().to_string();
    let mut params = vec![("t", num(t)), ("mode", mode_name)];
    match mode {
        TraceMode::Metric => params.extend([("cutoff", num(cutoff)), ("oracle-lmax", num(cut))]),
        TraceMode::Discrete => params.push(("terms", terms.to_string())),
        TraceMode::Spectral => params.push(("oracle-lmax", num(cut))),
    }
    let mut r = Report::checks("trace", &input.digest, &input.path, &params);
    match mode {
        TraceMode::Metric => {
            let m = heat_trace_metric(g, space, t, cutoff)?;
            let s = metric_spectral_heat_trace(g, space, t, cut)?;
            r.value("formula", num(m.value));
            r.value("weyl", num(m.weyl));
            r.value("constant", num(m.constant));
            r.value("cycles", num(m.cycles));
            r.value("cycle_count", m.cycle_count.to_string());
            r.value("truncation_bound", num(m.truncation));
            r.value("spectral", num(s.value));
            r.value("spectral_bound", num(s.bound));
            r.check(&Check::at_most("formula_vs_spectral", (m.value - s.value).abs(), m.truncation + s.bound + 1e-9));
        }
        TraceMode::Discrete => {
            let h = heat_trace_discrete(g, space, t, terms)?;
            let spec = spectrum_discrete(&laplacian(g, space, 0)?, None)?;
            let s = spectral_heat_trace(&spec, t);
            r.value("formula", num(h.value));
            r.value("remainder_bound", num(h.bound));
            r.value("spectral", num(s));
            r.check(&Check::at_most("formula_vs_spectral", (h.value - s).abs(), h.bound + 1e-9));
        }
        TraceMode::Spectral => {
            let s = metric_spectral_heat_trace(g, space, t, cut)?;
            r.value("spectral", num(s.value));
            r.value("spectral_bound", num(s.bound));
        }
    }
    Ok(r)
}

fn cheeger(input: &Input, discrete: bool, carve_depth: usize) -> Result<Report, Failure> {
    let g = &input.graph;
    if !input.space.is_standard() {
        return Err(Failure::Precondition(
            "precondition violated: Cheeger constants concern the standard vertex space".into(),
        ));
    }
    let mut params = vec![("discrete", discrete.to_string())];
    if !discrete {
        params.push(("carve-depth", carve_depth.to_string()));
    }
    let mut r = Report::checks("cheeger", &input.digest, &input.path, &params);
    if discrete {
        let exhaustive = g.vertex_count() <= EXHAUSTIVE_VERTEX_CAP;
        let c = cheeger_discrete(g, exhaustive)?;
        r.value("h", c.h.to_string());
        r.value("h_decimal", num(c.value));
        r.value("exhaustive", c.exhaustive.to_string());
        let names: Vec<&str> = c.witness.iter().map(|&v| g.vertex_name(v)).collect();
        r.value("witness", names.join(" "));
        match verify_cheeger(g, carve_depth)?.discrete {
            Some((check, _)) if exhaustive => {
                r.value("lambda2", num(check.lambda2));
                r.check(&Check::at_most("h_squared_over_2_le_lambda2", c.value * c.value / 2.0, check.lambda2 + 1e-9));
            }
            _ => r.check(&Check::skipped(
                "h_squared_over_2_le_lambda2",
                "needs unit lengths, a simple graph and an exact h",
            )),
        }
    } else {
        let rep = verify_cheeger(g, carve_depth)?;
        let h = &rep.metric_constant;
        r.value("h_ub", h.h_ub.to_string());
        r.value("h_ub_decimal", num(h.value));
        let labels: Vec<&str> = (0..g.vertex_count()).filter(|&v| h.witness.labels[v]).map(|v| g.vertex_name(v)).collect();
        r.value("witness_vertices", labels.join(" "));
        for (e, pts) in h.witness.cut_points(g) {
            let kind = match h.witness.cuts[e] {
                EdgeCut::Carved => "carved",
                _ => "cross",
            };
            let pts: Vec<String> = pts.iter().map(|x| num(*x)).collect();
            r.value(&format!("cut.{}", g.edge(e).name), format!("{kind} {}", pts.join(" ")));
        }
        r.value("boundary_points", h.witness.boundary_points.to_string());
        r.value("lambda2", num(rep.metric.lambda2));
        r.check(&Check::at_most("h_squared_over_4_le_lambda2", rep.metric.lower, rep.metric.lambda2 + 1e-9));
    }
    Ok(r)
}
