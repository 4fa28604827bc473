//! Command-line front end.
//!
//! Every subcommand computes its tables in memory first. Files are written to
//! `--out` only after the whole computation succeeded, each through a
//! temporary file that is renamed into place, so a failed run leaves nothing
//! behind. Without `--out` the tables go to standard output.

use crate::coxeter::{CoxeterGroup, Word};
use crate::error::{Error, Result};
use crate::graphcovers::{build_cover, count_bounded_degree_graphs, cut_basepoint, default_radius, recover_sigma, tree_invariants, truncated_universal_cover};
use crate::involution::Involution;
use crate::metricgraph::{rigidity_suite, search_quasi_isometry, thresholds};
use crate::polyhedron::{builtin, c_of_p, validate_right_angled, Polyhedron};
use crate::surfaces::{census, CensusMode, SigmaFilter, SCHEMA_VERSION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Largest `n` accepted on the command line.
pub const MAX_N: usize = 6;
/// Largest Cayley-ball radius accepted on the command line.
pub const MAX_RADIUS: usize = 5;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "census", version, about = "Surface and graph-cover census tools")]
pub struct RunConfig {
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
    /// Options shared by every subcommand.
    #[command(flatten)]
    pub common: Common,
}

/// Shared options.
#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Built-in polyhedron name (`dodecahedron`, `cube`) or path to a JSON file.
    #[arg(long, global = true, default_value = "dodecahedron")]
    pub polyhedron: String,
    /// Directory for output files; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Prefix CSV outputs with a schema-version line.
    #[arg(long, global = true)]
    pub schema_version: bool,
}

/// Subcommands.
#[derive(Debug, Subcommand, Clone)]
pub enum Command {
    /// Report every violated right-angled condition of the polyhedron.
    Validate,
    /// Count inequivalent surfaces built from the pentagonal disk.
    Census {
        /// Chain length or inclusive range `a..b`.
        #[arg(long, default_value = "1..4")]
        n: String,
        /// `all`, `transpositions` or `cycles:(1,2)(3,4);(1,3)`.
        #[arg(long, default_value = "all")]
        sigma: String,
        /// Orbifolds `D_σ` or closed surfaces `S_σ`.
        #[arg(long, value_enum, default_value_t = ModeArg::Orbifold)]
        mode: ModeArg,
        /// Pentagonal face (defaults to the first pentagon).
        #[arg(long)]
        face1: Option<usize>,
        /// Face adjacent to `face1` (defaults to its first neighbor).
        #[arg(long)]
        face2: Option<usize>,
    },
    /// Round-trip every involution through its cover and truncated tree.
    Covers {
        /// Parameter `n` or inclusive range `a..b`.
        #[arg(long, default_value = "1..3")]
        n: String,
        /// `all`, `transpositions` or `cycles:...`.
        #[arg(long, default_value = "all")]
        sigma: String,
        /// Truncation radius (defaults to `2n + 2`).
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Face-disk constant, graph-count table and quasi-isometry thresholds.
    Bounds,
    /// Cayley-ball sizes and distance spot checks.
    CoxeterBall {
        /// Ball radius.
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Number of random distance checks.
        #[arg(long, default_value_t = 200)]
        checks: usize,
    },
    /// Quasi-isometry rigidity suite on random metric graphs.
    QiCheck {
        /// Pairs of each kind.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        /// Shortest edge length.
        #[arg(long, default_value_t = 30)]
        min_len: i64,
        /// Multiplicative constant.
        #[arg(long, default_value_t = 1.05)]
        k: f64,
        /// Additive constant.
        #[arg(long, default_value_t = 1.05)]
        c: f64,
        /// Sample points per unit edge length.
        #[arg(long, default_value_t = 2)]
        density: u32,
    },
}

/// Census mode flag.
#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    /// Orbifolds `D_σ`.
    Orbifold,
    /// Closed surfaces `S_σ`.
    Closed,
}

/// Result of a run: named files plus a short summary.
#[derive(Debug, Default)]
pub struct Outcome {
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
    /// Human-readable summary.
    pub summary: String,
}

/// Parses `7` or `2..5` (inclusive).
pub fn parse_range(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidInput(format!("cannot read '{text}' as an integer or range a..b"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v: usize = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

/// Parses a σ filter for involutions on `m` points.
pub fn parse_sigma(text: &str, m: usize) -> Result<SigmaFilter> {
    match text {
        "all" => Ok(SigmaFilter::All),
        "transpositions" => Ok(SigmaFilter::Transpositions),
        _ => {
            let body = text.strip_prefix("cycles:").ok_or_else(|| Error::InvalidInput(format!("unknown σ filter '{text}'")))?;
            let list = body.split(';').map(|c| Involution::parse_cycles(m, c.trim())).collect::<Result<Vec<_>>>()?;
            Ok(SigmaFilter::Explicit(list))
        }
    }
}

fn expand(filter: &SigmaFilter, m: usize) -> Result<Vec<Involution>> {
    Ok(match filter {
        SigmaFilter::All => Involution::all(m),
        SigmaFilter::Transpositions => {
            let mut v = vec![Involution::identity(m)];
            for i in 0..m {
                for j in i + 1..m {
                    v.push(Involution::from_transpositions(m, &[(i, j)])?);
                }
            }
            v
        }
        SigmaFilter::Explicit(list) => list.clone(),
    })
}

/// Loads a built-in polyhedron or a JSON file.
pub fn load_polyhedron(source: &str) -> Result<Polyhedron> {
    if let Some(p) = builtin(source) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Error::Io(format!("{source}: {e}")))?;
    Polyhedron::from_json(&text)
}

fn csv_text(header: &[&str], rows: &[Vec<String>], schema: bool) -> Result<String> {
    let mut out = Vec::new();
    if schema {
        out.extend_from_slice(format!("# schema-version {SCHEMA_VERSION}\n").as_bytes());
    }
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        let wr = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(header).map_err(wr)?;
        for r in rows {
            w.write_record(r).map_err(wr)?;
        }
        w.flush()?;
    }
    String::from_utf8(out).map_err(|e| Error::Io(e.to_string()))
}

fn run_validate(common: &Common) -> Result<Outcome> {
    let p = load_polyhedron(&common.polyhedron)?;
    let report = validate_right_angled(&p);
    let msgs = report.messages();
    if report.has_structural_failure() {
        return Err(Error::Structural(msgs.join("; ")));
    }
    if !msgs.is_empty() {
        return Err(Error::NotRightAngled(msgs.join("; ")));
    }
    let text = format!("{}: {} faces, {} edges, {} vertices; right-angled: ok\n", common.polyhedron, p.num_faces(), p.num_edges(), p.num_vertices());
    Ok(Outcome { files: vec![("validate.txt".into(), text.clone())], summary: text })
}

fn run_census(common: &Common, n: &str, sigma: &str, mode: ModeArg, face1: Option<usize>, face2: Option<usize>) -> Result<Outcome> {
    let ns = parse_range(n)?;
    if let Some(&bad) = ns.iter().find(|&&x| x == 0 || x > MAX_N) {
        return Err(Error::Resource(format!("n = {bad} is outside 1..={MAX_N}")));
    }
    let p = load_polyhedron(&common.polyhedron)?;
    let f1 = match face1 {
        Some(f) => f,
        None => (0..p.num_faces()).find(|&f| p.face(f).len() == 5).ok_or_else(|| Error::InvalidInput("no pentagonal face".into()))?,
    };
    if f1 >= p.num_faces() {
        return Err(Error::InvalidInput(format!("face {f1} out of range")));
    }
    let f2 = face2.unwrap_or_else(|| p.neighbors(f1)[0]);
    let mode = match mode {
        ModeArg::Orbifold => CensusMode::Orbifold,
        ModeArg::Closed => CensusMode::Closed,
    };
    let filter = match sigma {
        "all" => SigmaFilter::All,
        "transpositions" => SigmaFilter::Transpositions,
        other if ns.len() == 1 => {
            let d = crate::surfaces::build_disk(&crate::surfaces::DiskSpec::new(p.clone(), f1, f2, ns[0])?)?;
            let m = match mode {
                CensusMode::Orbifold => d.num_cuts(),
                CensusMode::Closed => 4 * d.num_cuts(),
            };
            parse_sigma(other, m)?
        }
        _ => return Err(Error::InvalidInput("explicit σ lists need a single n".into())),
    };
    let report = census(&p, f1, f2, &ns, mode, &filter)?;
    let csv = report.to_csv(common.schema_version)?;
    let detail = report.detail_text();
    Ok(Outcome { summary: csv.clone(), files: vec![("census.csv".into(), csv), ("census_detail.txt".into(), detail)] })
}

fn run_covers(common: &Common, n: &str, sigma: &str, radius: Option<usize>) -> Result<Outcome> {
    let ns = parse_range(n)?;
    if let Some(&bad) = ns.iter().find(|&&x| x == 0 || x > MAX_N) {
        return Err(Error::Resource(format!("n = {bad} is outside 1..={MAX_N}")));
    }
    let mut rows = Vec::new();
    let mut summary = String::new();
    for &n in &ns {
        let filter = parse_sigma(sigma, n)?;
        let sigmas = expand(&filter, n)?;
        let r = radius.unwrap_or_else(|| default_radius(n));
        let results: Vec<Vec<String>> = {
            use rayon::prelude::*;
            sigmas
                .par_iter()
                .map(|s| {
                    let cover = build_cover(n, s)?;
                    let g = cut_basepoint(&cover);
                    let tree = truncated_universal_cover(&g, r)?.erase_labels();
                    let inv = tree_invariants(&tree);
                    let e2 = inv.is_ok();
                    let rec = recover_sigma(&tree);
                    let rec_text = rec.as_ref().map(|x| x.to_string()).unwrap_or_else(|e| e.code().to_string());
                    let ok = rec.map(|x| x == *s).unwrap_or(false);
                    Ok(vec![
                        n.to_string(),
                        s.to_string(),
                        cover.vertices.to_string(),
                        r.to_string(),
                        tree.len().to_string(),
                        rec_text,
                        ok.to_string(),
                        e2.to_string(),
                    ])
                })
                .collect::<Result<_>>()?
        };
        let distinct: std::collections::BTreeSet<&String> = results.iter().map(|r| &r[5]).collect();
        let ok = results.iter().filter(|r| r[6] == "true").count();
        summary += &format!("n = {n}: {} involutions, {} round trips, {} distinct recovered\n", results.len(), ok, distinct.len());
        rows.extend(results);
    }
    let header = ["n", "sigma", "cover_vertices", "radius", "tree_nodes", "recovered", "round_trip", "e2_matches"];
    let csv = csv_text(&header, &rows, common.schema_version)?;
    Ok(Outcome { files: vec![("covers.csv".into(), csv)], summary })
}

fn run_bounds(common: &Common) -> Result<Outcome> {
    let p = load_polyhedron(&common.polyhedron)?;
    let c = c_of_p(&p)?;
    let mut summary = format!("c(P) = {c}\nc2 = 8c(P)+1 = {}\n", 8 * c + 1);
    let mut graph_rows = Vec::new();
    for v in 1..=4 {
        for n in 1..=3 {
            let g = count_bounded_degree_graphs(v, n)?;
            graph_rows.push(vec![v.to_string(), n.to_string(), g.count.to_string(), g.bound.to_string(), g.holds.to_string()]);
        }
    }
    let mut qi_rows = Vec::new();
    for (k, cc) in [(1.05, 1.05), (1.5, 1.0), (2.0, 1.0), (2.0, 2.0), (3.0, 1.0)] {
        let q = thresholds(k, cc)?;
        qi_rows.push(
            [q.k, q.c, q.k_prime(), q.c_prime(), q.s(), q.u(), q.t(), q.t_prime()]
                .iter()
                .map(|x| format!("{x:.6}"))
                .collect(),
        );
    }
    let graphs = csv_text(&["vertices", "max_degree", "count", "bound", "holds"], &graph_rows, common.schema_version)?;
    let qi = csv_text(&["k", "c", "k_prime", "c_prime", "s", "u", "t", "t_prime"], &qi_rows, common.schema_version)?;
    let consts = csv_text(&["polyhedron", "c_p", "c2"], &[vec![common.polyhedron.clone(), c.to_string(), (8 * c + 1).to_string()]], common.schema_version)?;
    summary += &graphs;
    summary += &qi;
    Ok(Outcome {
        files: vec![("bounds.csv".into(), consts), ("graph_counts.csv".into(), graphs), ("qi_thresholds.csv".into(), qi)],
        summary,
    })
}

fn run_coxeter_ball(common: &Common, radius: usize, checks: usize) -> Result<Outcome> {
    if radius > MAX_RADIUS {
        return Err(Error::Resource(format!("radius {radius} exceeds {MAX_RADIUS}")));
    }
    let p = load_polyhedron(&common.polyhedron)?;
    let w = CoxeterGroup::new(&p)?;
    let ball = w.cayley_ball(radius)?;
    let mut rows = Vec::new();
    for r in 0..=radius {
        let sphere = ball.iter().filter(|x| x.len() == r).count();
        let within = ball.iter().filter(|x| x.len() <= r).count();
        rows.push(vec![r.to_string(), sphere.to_string(), within.to_string()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut agree = 0;
    for _ in 0..checks {
        let x = &ball[rng.gen_range(0..ball.len())];
        if w.d_p(&[Word::identity()], std::slice::from_ref(x))? == x.len() {
            agree += 1;
        }
    }
    let csv = csv_text(&["radius", "sphere", "ball"], &rows, common.schema_version)?;
    let summary = format!("{csv}d_P spot checks: {agree}/{checks} agree with word length\n");
    if agree != checks {
        return Err(Error::InvariantViolation(format!("d_P disagrees with word length on {} samples", checks - agree)));
    }
    Ok(Outcome { files: vec![("coxeter_ball.csv".into(), csv)], summary })
}

fn run_qi_check(common: &Common, pairs: usize, min_len: i64, k: f64, c: f64, density: u32) -> Result<Outcome> {
    let q = thresholds(k, c)?;
    let suite = rigidity_suite(pairs, min_len, common.seed)?;
    let mut rows = Vec::new();
    let (mut ok, mut total) = (0, 0);
    for case in &suite {
        let found = search_quasi_isometry(&case.g1, &case.g2, k, c, density)?.is_some();
        let pass = found == case.isomorphic;
        ok += pass as usize;
        total += 1;
        let shortest = case.g1.min_length().into_iter().chain(case.g2.min_length()).min().map(|l| l.to_string()).unwrap_or_default();
        rows.push(vec![case.name.clone(), case.isomorphic.to_string(), shortest, found.to_string(), pass.to_string()]);
    }
    let csv = csv_text(&["case", "isomorphic", "shortest_edge", "witness", "pass"], &rows, common.schema_version)?;
    let summary = format!("u({k}, {c}) = {:.4}\n{ok}/{total} cases behave as expected\n", q.u());
    Ok(Outcome { files: vec![("qi_check.csv".into(), csv)], summary })
}

/// Runs one parsed command.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let c = &cfg.common;
    match &cfg.command {
        Command::Validate => run_validate(c),
        Command::Census { n, sigma, mode, face1, face2 } => run_census(c, n, sigma, *mode, *face1, *face2),
        Command::Covers { n, sigma, radius } => run_covers(c, n, sigma, *radius),
        Command::Bounds => run_bounds(c),
        Command::CoxeterBall { radius, checks } => run_coxeter_ball(c, *radius, *checks),
        Command::QiCheck { pairs, min_len, k, c: cc, density } => run_qi_check(c, *pairs, *min_len, *k, *cc, *density),
    }
}

/// Writes every file into `dir`, or none of them.
pub fn write_outputs(dir: &Path, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut staged = Vec::new();
    for (name, text) in files {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.flush()?;
        staged.push((tmp, dir.join(name)));
    }
    let mut done: Vec<PathBuf> = Vec::new();
    for (tmp, path) in staged {
        if let Err(e) = tmp.persist(&path) {
            for p in &done {
                let _ = std::fs::remove_file(p);
            }
            return Err(Error::Io(e.to_string()));
        }
        done.push(path);
    }
    Ok(())
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cfg.common.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = run(&cfg).and_then(|out| {
        match &cfg.common.out {
            Some(dir) => write_outputs(dir, &out.files)?,
            None => {
                for (_, text) in &out.files {
                    print!("{text}");
                }
            }
        }
        if cfg.common.out.is_some() {
            print!("{}", out.summary);
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error {}: {}", e.code(), e.to_string().replace('\n', " "));
            e.exit_status()
        }
    }
}
