//! Command-line front end: resolves an input graph or family, runs one
//! command and writes a text report plus CSV tables.
//!
//! Exit status is 0 on success, 1 when a verification exceeds its tolerance
//! (the report then contains `FAIL`), and 2 on input errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use graph_spectra::analysis::{
    convergence_study, fd_derivatives, hadamard_derivatives, local_weyl_check, potential_mass,
    spectral_comparison, SeriesTarget, Stencil,
};
use graph_spectra::eigensolve::RESIDUAL_TOLERANCE;
use graph_spectra::family::TailEstimate;
use graph_spectra::{
    eigendecompose, io, ClosedForm, Graph, GraphFamily, HeatKernel, OperatorMatrix, Spectrum,
    TruncationFlavor,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Validate,
    Spectrum { dump_matrix: bool },
    Weyl,
    Heat { times: Vec<f64> },
    Compare { c: Option<String> },
    Hadamard { c: String, tau: f64, n: Option<usize>, h: f64 },
    Converge { c: String, sizes: Vec<usize>, k: usize },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Spectrum { .. } => "spectrum",
            Command::Weyl => "weyl",
            Command::Heat { .. } => "heat",
            Command::Compare { .. } => "compare",
            Command::Hadamard { .. } => "hadamard",
            Command::Converge { .. } => "converge",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative discrepancy of the spectral comparison identity.
    pub compare: f64,
    /// Local Weyl defect.
    pub weyl: f64,
    /// Relative Hadamard vs finite-difference error.
    pub hadamard: f64,
    /// Slack on the heat-kernel diagonal bound `p_t(x,x) ≤ 1/m(x)`.
    pub heat: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            compare: 1e-9,
            weyl: 1e-8,
            hadamard: 1e-5,
            heat: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: String,
    pub flavor: TruncationFlavor,
    pub tolerances: Tolerances,
    /// Reports go to `<prefix>report.txt` and `<prefix><table>.csv`; a
    /// directory prefix puts them inside it. Without one, everything is
    /// printed.
    pub output: Option<PathBuf>,
}

/// Where the graph comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSpec {
    File(PathBuf),
    /// A rule-based family, with a size when one was given.
    Family { family: GraphFamily, size: Option<usize> },
}

#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

/// Parses `paper-path[:N=..]` or `path:m=..,b=..[,c=..][,N=..]`; any other
/// string is taken as a file path.
pub fn parse_input(spec: &str) -> Result<InputSpec, InputError> {
    let (name, args) = match spec.split_once(':') {
        Some((name, args)) => (name.trim(), args),
        None => (spec.trim(), ""),
    };
    let generator = matches!(name, "paper-path" | "path");
    if !generator {
        if spec.contains(':') && !Path::new(spec).exists() && !spec.contains(['/', '\\', '.']) {
            return Err(input_err(format!("unknown generator '{name}' in input '{spec}'")));
        }
        return Ok(InputSpec::File(PathBuf::from(spec)));
    }
    let mut size = None;
    let mut rules: [Option<ClosedForm>; 3] = [None, None, None];
    for (i, part) in args.split(',').enumerate().filter(|(_, p)| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| input_err(format!("generator argument {}: expected key=value, got '{part}'", i + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let slot = match key {
            "N" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| input_err(format!("generator argument N: '{value}' is not a size")))?;
                if n == 0 {
                    return Err(input_err("generator argument N: size must be at least 1"));
                }
                size = Some(n);
                continue;
            }
            "m" if name == "path" => 0,
            "b" if name == "path" => 1,
            "c" if name == "path" => 2,
            _ => return Err(input_err(format!("generator '{name}': unknown argument '{key}'"))),
        };
        let rule = ClosedForm::parse(value)
            .map_err(|e| input_err(format!("generator argument {key}: {e}")))?;
        rules[slot] = Some(rule);
    }
    let family = if name == "paper-path" {
        GraphFamily::paper_path()
    } else {
        let [m, b, c] = rules;
        GraphFamily::custom(
            m.ok_or_else(|| input_err("generator 'path' needs m=<rule>"))?,
            b.ok_or_else(|| input_err("generator 'path' needs b=<rule>"))?,
            c.unwrap_or_else(|| ClosedForm::constant(0.0)),
        )
    };
    Ok(InputSpec::Family { family, size })
}

/// A potential on vertices `1..=size`: a per-vertex value file when `spec`
/// names an existing file, otherwise a closed form in `n`.
pub fn parse_potential_spec(spec: &str, size: usize) -> Result<Vec<f64>, InputError> {
    let path = Path::new(spec);
    if path.is_file() {
        let src = std::fs::read_to_string(path)
            .map_err(|e| input_err(format!("cannot read potential file '{spec}': {e}")))?;
        let mut values = Vec::new();
        for (line_no, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for token in line.split(|ch: char| ch.is_whitespace() || ch == ',').filter(|t| !t.is_empty()) {
                let v: f64 = token.parse().map_err(|_| {
                    input_err(format!("{spec}: line {}: '{token}' is not a number", line_no + 1))
                })?;
                values.push(v);
            }
        }
        if values.len() != size {
            return Err(input_err(format!(
                "{spec}: expected {size} potential values, found {}",
                values.len()
            )));
        }
        return Ok(values);
    }
    ClosedForm::parse(spec)
        .map(|c| c.sample(size))
        .map_err(|e| input_err(format!("potential '{spec}' {e}")))
}

fn parse_rule(spec: &str) -> Result<ClosedForm, InputError> {
    ClosedForm::parse(spec).map_err(|e| input_err(format!("potential '{spec}' {e}")))
}

fn resolve_graph(input: &InputSpec, flavor: TruncationFlavor) -> Result<Graph, InputError> {
    let graph = match input {
        InputSpec::File(path) => io::load(path)
            .map_err(|e| input_err(format!("{}: {e}", path.display())))?,
        InputSpec::Family { size: None, .. } => {
            return Err(input_err("generator input needs a size, e.g. paper-path:N=100"))
        }
        InputSpec::Family { family, size: Some(n) } => family
            .truncate(*n, flavor)
            .map_err(|e| input_err(format!("generator: {e}")))?,
    };
    let report = graph.validate();
    if !report.is_valid() {
        return Err(input_err(format!("invalid graph: {report}")));
    }
    Ok(graph)
}

/// A named CSV table.
struct Table {
    name: &'static str,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &'static str, header: &[&str]) -> Self {
        Self {
            name,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn to_csv(&self) -> std::io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Default)]
struct Report {
    text: String,
    tables: Vec<Table>,
    failed: bool,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn check(&mut self, ok: bool, what: impl AsRef<str>) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        self.line(format!("{verdict}: {}", what.as_ref()));
        self.failed |= !ok;
    }
}

enum RunError {
    Input(InputError),
    Fail(String),
}

impl From<InputError> for RunError {
    fn from(e: InputError) -> Self {
        RunError::Input(e)
    }
}

fn solve(graph: &Graph) -> Result<(OperatorMatrix, Spectrum), RunError> {
    let op = OperatorMatrix::assemble(graph).map_err(|e| RunError::Input(input_err(e.to_string())))?;
    let s = eigendecompose(&op).map_err(|e| RunError::Fail(format!("eigensolve: {e}")))?;
    Ok((op, s))
}

fn analysis_err(e: graph_spectra::Error) -> RunError {
    use graph_spectra::Error as E;
    match e {
        E::Uncertified { .. } | E::NoConvergence { .. } => RunError::Fail(e.to_string()),
        E::AtSize { ref source, .. }
            if matches!(**source, E::Uncertified { .. } | E::NoConvergence { .. }) =>
        {
            RunError::Fail(e.to_string())
        }
        other => RunError::Input(input_err(other.to_string())),
    }
}

/// Runs `config`, writing the report to `out` and errors to `err`. Returns
/// the exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let mut report = Report::default();
    let result = parse_input(&config.input)
        .map_err(RunError::from)
        .and_then(|input| execute(config, &input, &mut report));
    match result {
        Err(RunError::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
        Err(RunError::Fail(msg)) => report.check(false, msg),
        Ok(()) => {}
    }
    if let Err(e) = emit(config, &report, out) {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_INPUT;
    }
    if report.failed {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

fn output_path(prefix: &Path, name: &str) -> PathBuf {
    let as_dir = prefix.is_dir() || prefix.as_os_str().to_string_lossy().ends_with(['/', '\\']);
    if as_dir {
        prefix.join(name)
    } else {
        let mut s = prefix.as_os_str().to_owned();
        s.push(name);
        PathBuf::from(s)
    }
}

fn emit(config: &RunConfig, report: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    out.write_all(report.text.as_bytes())?;
    match &config.output {
        Some(prefix) => {
            if let Some(parent) = output_path(prefix, "x").parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(output_path(prefix, "report.txt"), &report.text)?;
            for t in &report.tables {
                let path = output_path(prefix, &format!("{}.csv", t.name));
                std::fs::write(&path, t.to_csv()?)?;
                writeln!(out, "wrote {}", path.display())?;
            }
        }
        None => {
            for t in &report.tables {
                writeln!(out, "\n# {}.csv", t.name)?;
                out.write_all(&t.to_csv()?)?;
            }
        }
    }
    Ok(())
}

fn execute(config: &RunConfig, input: &InputSpec, report: &mut Report) -> Result<(), RunError> {
    if let Command::Converge { c, sizes, k } = &config.command {
        return converge(input, c, sizes, *k, config.tolerances, report);
    }
    let graph = resolve_graph(input, config.flavor)?;
    report.line(format!(
        "graph: {} vertices, {} edges",
        graph.len(),
        graph.edge_count()
    ));
    let tol = config.tolerances;
    match &config.command {
        Command::Validate => {
            report.line("valid");
            Ok(())
        }
        Command::Spectrum { dump_matrix } => spectrum(&graph, *dump_matrix, report),
        Command::Weyl => weyl(&graph, tol, report),
        Command::Heat { times } => heat(&graph, times, tol, report),
        Command::Compare { c } => compare(&graph, c.as_deref(), tol, report),
        Command::Hadamard { c, tau, n, h } => hadamard(&graph, c, *tau, *n, *h, tol, report),
        Command::Converge { .. } => unreachable!("handled above"),
    }
}

fn spectrum(graph: &Graph, dump_matrix: bool, report: &mut Report) -> Result<(), RunError> {
    let (op, s) = solve(graph)?;
    let bound = RESIDUAL_TOLERANCE * (1.0 + op.inf_norm());
    let mut table = Table::new("spectrum", &["n", "lambda", "residual"]);
    let m = graph.measure();
    for n in 0..s.len() {
        let f = s.eigenfunction(n);
        let lf = op.apply_via_matrix(&f).map_err(analysis_err)?;
        // ‖A v − λ v‖₂ with v = M^{1/2} f
        let residual = lf
            .iter()
            .zip(&f)
            .zip(m)
            .map(|((a, b), w)| w * (a - s.eigenvalue(n) * b).powi(2))
            .sum::<f64>()
            .sqrt();
        table.push(vec![(n + 1).to_string(), num(s.eigenvalue(n)), num(residual)]);
    }
    report.line(format!(
        "max c/m: {}",
        num(op.max_potential_ratio())
    ));
    report.check(
        s.residual_bound() <= bound,
        format!(
            "residual {:e} ≤ {:e} = 1e-9·(1+‖A‖∞)",
            s.residual_bound(),
            bound
        ),
    );
    report.tables.push(table);
    if dump_matrix {
        let n = op.dim();
        let header: Vec<String> = (0..n).map(|j| format!("a{j}")).collect();
        let mut t = Table {
            name: "matrix",
            header,
            rows: Vec::new(),
        };
        for i in 0..n {
            t.push((0..n).map(|j| num(op.matrix()[(i, j)])).collect());
        }
        report.tables.push(t);
    }
    Ok(())
}

fn weyl(graph: &Graph, tol: Tolerances, report: &mut Report) -> Result<(), RunError> {
    let (_, s) = solve(graph)?;
    let defects = local_weyl_check(&s, graph.measure()).map_err(analysis_err)?;
    let mut table = Table::new("weyl", &["vertex", "defect"]);
    for (x, d) in defects.iter().enumerate() {
        table.push(vec![graph.label(x).to_string(), num(*d)]);
    }
    let worst = defects.iter().copied().fold(0.0, f64::max);
    report.check(worst <= tol.weyl, format!("max Weyl defect {worst:e} ≤ {:e}", tol.weyl));
    report.tables.push(table);
    Ok(())
}

fn heat(graph: &Graph, times: &[f64], tol: Tolerances, report: &mut Report) -> Result<(), RunError> {
    if let Some(t) = times.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(input_err(format!("--t: time must be nonnegative, got {t}")).into());
    }
    let (_, s) = solve(graph)?;
    let hk = HeatKernel::new(&s);
    let m = graph.measure();
    let mut table = Table::new("heat", &["t", "x", "y", "p"]);
    let mut excess = f64::NEG_INFINITY;
    for &t in times {
        let p = hk.kernel_matrix(t).map_err(analysis_err)?;
        for x in 0..graph.len() {
            excess = excess.max(p[(x, x)] - 1.0 / m[x]);
            for y in 0..graph.len() {
                table.push(vec![
                    num(t),
                    graph.label(x).to_string(),
                    graph.label(y).to_string(),
                    num(p[(x, y)]),
                ]);
            }
        }
    }
    if !times.is_empty() {
        report.check(
            excess <= tol.heat,
            format!("max p_t(x,x) − 1/m(x) = {excess:e} ≤ {:e}", tol.heat),
        );
    }
    report.tables.push(table);
    Ok(())
}

fn potential_or_own(graph: &Graph, c: Option<&str>) -> Result<(Graph, Vec<f64>), RunError> {
    Ok(match c {
        Some(spec) => (graph.clone(), parse_potential_spec(spec, graph.len())?),
        None => {
            let base = graph
                .clone()
                .with_potential(vec![0.0; graph.len()])
                .map_err(analysis_err)?;
            (base, graph.potential().to_vec())
        }
    })
}

fn compare(graph: &Graph, c: Option<&str>, tol: Tolerances, report: &mut Report) -> Result<(), RunError> {
    let (base, c) = potential_or_own(graph, c)?;
    let r = spectral_comparison(&base, &c).map_err(analysis_err)?;
    let mut table = Table::new("compare", &["n", "lambda0", "lambdac", "diff", "partial_sum"]);
    for n in 0..r.diffs.len() {
        table.push(vec![
            (n + 1).to_string(),
            num(r.baseline[n]),
            num(r.perturbed[n]),
            num(r.diffs[n]),
            num(r.partial_sums[n]),
        ]);
    }
    report.line(format!("max c/m: {}", num(r.max_potential_ratio)));
    report.line(format!("sum of eigenvalue shifts: {}", num(r.total())));
    report.line(format!("target sum c/m: {}", num(r.target)));
    report.line(format!("discrepancy: {:e}", r.discrepancy));
    report.check(
        r.passes(tol.compare),
        format!(
            "discrepancy ≤ {:e}·(1+|target|) = {:e}",
            tol.compare,
            tol.compare * (1.0 + r.target.abs())
        ),
    );
    report.check(
        r.min_diff() >= -tol.compare * (1.0 + r.max_abs_diff()),
        format!("eigenvalues do not decrease (min shift {:e})", r.min_diff()),
    );
    report.tables.push(table);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn hadamard(
    graph: &Graph,
    c: &str,
    tau: f64,
    only: Option<usize>,
    h: f64,
    tol: Tolerances,
    report: &mut Report,
) -> Result<(), RunError> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(input_err(format!("--tau must lie in [0, 1], got {tau}")).into());
    }
    if !(h > 0.0 && h <= 0.25) {
        return Err(input_err(format!("--h must lie in (0, 0.25], got {h}")).into());
    }
    let c = parse_potential_spec(c, graph.len())?;
    if let Some(n) = only {
        if n == 0 || n > graph.len() {
            return Err(input_err(format!("--n must lie in 1..={}, got {n}", graph.len())).into());
        }
    }
    let analytic = hadamard_derivatives(graph, &c, tau).map_err(analysis_err)?;
    let stencil = Stencil::fitting(tau, h);
    let fd = fd_derivatives(graph, &c, tau, h, stencil).map_err(analysis_err)?;
    let mut table = Table::new("hadamard", &["n", "analytic", "finite_difference", "relative_error"]);
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for n in 0..analytic.len() {
        if only.is_some_and(|k| k != n + 1) {
            continue;
        }
        match &fd[n] {
            Ok(v) => {
                let rel = (v - analytic[n]).abs() / analytic[n].abs().max(f64::MIN_POSITIVE);
                let rel = if *v == analytic[n] { 0.0 } else { rel };
                worst = worst.max(rel);
                table.push(vec![(n + 1).to_string(), num(analytic[n]), num(*v), num(rel)]);
            }
            Err(e) => {
                skipped += 1;
                report.line(format!("n={}: skipped ({e})", n + 1));
                table.push(vec![(n + 1).to_string(), num(analytic[n]), String::new(), String::new()]);
            }
        }
    }
    let mass = potential_mass(&c, graph.measure());
    let sum: f64 = analytic.iter().sum();
    report.line(format!("stencil: {stencil:?}, h = {h}"));
    report.line(format!("max c/m: {}", num(graph_spectra::operator::max_potential_ratio(&c, graph.measure()))));
    if skipped > 0 {
        report.line(format!("{skipped} non-simple or crossing eigenvalues skipped"));
    }
    report.check(
        worst <= tol.hadamard,
        format!("max relative error {worst:e} ≤ {:e}", tol.hadamard),
    );
    report.check(
        (sum - mass).abs() <= 1e-8 * (1.0 + mass),
        format!("sum of derivatives {} vs sum c/m {}", num(sum), num(mass)),
    );
    report.tables.push(table);
    Ok(())
}

fn converge(
    input: &InputSpec,
    c: &str,
    sizes: &[usize],
    k: usize,
    tol: Tolerances,
    report: &mut Report,
) -> Result<(), RunError> {
    let InputSpec::Family { family, size } = input else {
        return Err(input_err("converge needs a generator input such as 'paper-path'").into());
    };
    let sizes: Vec<usize> = if sizes.is_empty() {
        size.map(|n| vec![n]).ok_or_else(|| input_err("converge needs --sizes or N=..."))?
    } else {
        sizes.to_vec()
    };
    if sizes.contains(&0) {
        return Err(input_err("--sizes: size must be at least 1").into());
    }
    let rule = parse_rule(c)?;
    let study = convergence_study(family, &rule, &sizes, k).map_err(analysis_err)?;
    let mut header = vec!["N".to_string(), "flavor".into(), "partial_sum".into(), "target".into()];
    header.extend((1..=k).map(|i| format!("gap_{i}")));
    let mut table = Table {
        name: "converge",
        header,
        rows: Vec::new(),
    };
    let mut worst: f64 = 0.0;
    for r in &study.per_size {
        let mut row = vec![
            r.size.to_string(),
            r.flavor.name().to_string(),
            num(r.report.total()),
            num(r.report.target),
        ];
        row.extend((0..k).map(|i| r.gaps.get(i).map(|g| num(*g)).unwrap_or_default()));
        table.push(row);
        worst = worst.max(r.report.discrepancy / (1.0 + r.report.target.abs()));
        report.check(
            r.report.passes(tol.compare),
            format!(
                "N={} {}: discrepancy {:e}, max c/m {}",
                r.size,
                r.flavor,
                r.report.discrepancy,
                num(r.report.max_potential_ratio)
            ),
        );
    }
    let mut series = String::new();
    match &study.series {
        SeriesTarget::Bounded { lower, upper } => {
            let _ = write!(series, "series sum c/m lies in [{}, {}]", num(*lower), num(*upper));
        }
        SeriesTarget::Divergent { .. } => series.push_str("series sum c/m diverges"),
        SeriesTarget::Unknown => series.push_str("series sum c/m: no closed-form tail"),
    }
    report.line(series);
    for (n, t) in &study.tail_estimate {
        if let TailEstimate::Bounded { lower, upper } = t {
            report.line(format!("N={n}: tail in [{}, {}]", num(*lower), num(*upper)));
        }
    }
    report.line(format!("worst relative discrepancy {worst:e}"));
    report.tables.push(table);
    Ok(())
}
