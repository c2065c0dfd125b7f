//! Command-line surface: reproducible batch experiments with CSV/JSON output.
//!
//! Exit codes: 0 success, 2 usage or precondition error, 3 numerical or
//! convergence failure. Tables go to stdout with the run manifest as `#`
//! comments (or under a `manifest` key with `--json`); reruns with the same
//! parameters reproduce the numeric rows byte for byte. Set
//! `RAYON_NUM_THREADS` to override the worker-thread count.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ohmnet::approximation::{bracket_table, classify_trend, cut_network, resistance_to_infinity, short_network, StopRule};
use ohmnet::error::Error;
use ohmnet::lattice::{LatticeSpec, SwellingSequence};
use ohmnet::report::{self, fmt_f64, RunManifest};
use ohmnet::solve::{effective_resistance, foster_average, SolveConfig};
use ohmnet::spanning::spanning_tree_census;
use ohmnet::walk::{return_frequency, WalkConfig};
use ohmnet::VertexId;

#[derive(Parser)]
#[command(
    name = "ohmnet",
    version,
    about = "Effective resistance on finite networks and lattice approximations"
)]
struct Cli {
    /// Emit JSON (manifest + rows) instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Short/cut resistance brackets between two lattice vertices.
    Bracket {
        /// grid1|grid2|grid3|grid4|tri|hex|subdiv|tree3|dumbbell3
        lattice: String,
        /// Source vertex: coordinates like `0,0` / `0,0:1`, or origin|neighbor.
        #[arg(long, default_value = "origin")]
        p: String,
        /// Sink vertex.
        #[arg(long, default_value = "neighbor")]
        q: String,
        /// Radius list: `a..b` (inclusive) or comma-separated values.
        #[arg(long)]
        radii: String,
        /// Solver relative residual tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Foster average: mean edge resistance vs (n-1)/e, or the lattice
    /// cut/short squeeze against 2/average_valence.
    Foster {
        /// Lattice kind (mutually exclusive with --file).
        lattice: Option<String>,
        /// Edge-list file: `u v [conductance]` per line, `#` comments.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Ball radius for the lattice squeeze.
        #[arg(long, default_value_t = 6)]
        radius: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Random-walk return frequency with seeded, reproducible trials.
    Walk {
        lattice: String,
        #[arg(long)]
        steps: u32,
        #[arg(long)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "origin")]
        start: String,
    },
    /// Resistance from a vertex to the shorted boundary, radius by radius.
    Rinf {
        lattice: String,
        #[arg(long, default_value = "origin")]
        p: String,
        #[arg(long)]
        radii: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Spanning-tree edge probabilities vs effective resistances (<= 12 vertices).
    Treeprob { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Disconnected { .. } | Error::Convergence { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn numerical(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Bracket {
            lattice,
            p,
            q,
            radii,
            tol,
        } => cmd_bracket(cli.json, lattice, p, q, radii, *tol),
        Command::Foster {
            lattice,
            file,
            radius,
            tol,
        } => cmd_foster(cli.json, lattice.as_deref(), file.as_deref(), *radius, *tol),
        Command::Walk {
            lattice,
            steps,
            trials,
            seed,
            start,
        } => cmd_walk(cli.json, lattice, *steps, *trials, *seed, start),
        Command::Rinf {
            lattice,
            p,
            radii,
            tol,
        } => cmd_rinf(cli.json, lattice, p, radii, *tol),
        Command::Treeprob { file } => cmd_treeprob(cli.json, file),
    }
}

fn parse_lattice(name: &str) -> Result<LatticeSpec, Failure> {
    name.parse::<LatticeSpec>().map_err(Failure::from)
}

/// `a..b` inclusive, or a comma-separated list.
fn parse_radii(text: &str) -> Result<Vec<u32>, Failure> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad radius {a:?}")))?;
        let b: u32 = b
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad radius {b:?}")))?;
        if a > b {
            return Err(usage(format!("empty radius range {text:?}")));
        }
        return Ok((a..=b).collect());
    }
    let radii: Vec<u32> = text
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("bad radius {tok:?}")))
        })
        .collect::<Result<_, _>>()?;
    if radii.is_empty() {
        return Err(usage("no radii given"));
    }
    Ok(radii)
}

fn print_json(manifest: &RunManifest, body: serde_json::Value) {
    let doc = serde_json::json!({ "manifest": manifest, "data": body });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
}

fn cmd_bracket(
    json: bool,
    lattice: &str,
    p: &str,
    q: &str,
    radii: &str,
    tol: f64,
) -> Result<(), Failure> {
    let lat = parse_lattice(lattice)?;
    let pv = lat.parse_vertex(p)?;
    let qv = lat.parse_vertex(q)?;
    let radii = parse_radii(radii)?;
    let cfg = SolveConfig::with_tolerance(tol);
    cfg.validate()?;

    let table = bracket_table(&lat, &pv, &qv, &radii, &cfg)?;
    let manifest = RunManifest::new(
        "bracket",
        report::BRACKET_SCHEMA,
        vec![
            ("lattice".into(), lat.to_string()),
            ("p".into(), pv.to_string()),
            ("q".into(), qv.to_string()),
            ("radii".into(), radii.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")),
            ("tol".into(), fmt_f64(tol)),
        ],
        None,
    );

    if json {
        let rows: Vec<_> = table
            .iter()
            .map(|b| {
                serde_json::json!({
                    "radius": b.radius,
                    "vertices": b.vertices,
                    "edges": b.edges,
                    "short_R": b.short_resistance,
                    "cut_R": if b.cut_disconnected { serde_json::Value::Null } else { b.cut_resistance.into() },
                    "gap": if b.cut_disconnected { serde_json::Value::Null } else { b.gap().into() },
                    "cut_disconnected": b.cut_disconnected,
                })
            })
            .collect();
        print_json(&manifest, serde_json::json!({ "rows": rows }));
    } else {
        print!("{}", manifest.comment_block());
        println!("{}", report::BRACKET_HEADER);
        for b in &table {
            println!(
                "{},{},{},{},{},{}",
                b.radius,
                b.vertices,
                b.edges,
                fmt_f64(b.short_resistance),
                fmt_f64(b.cut_resistance),
                fmt_f64(b.gap())
            );
        }
    }

    // ordering and monotonicity checks; violations flip the exit code
    for b in &table {
        if b.short_resistance > b.cut_resistance + 1e-8 {
            return Err(numerical(format!(
                "bracket ordering violated at radius {}: short {} > cut {}",
                b.radius, b.short_resistance, b.cut_resistance
            )));
        }
    }
    for w in table.windows(2) {
        if w[1].radius > w[0].radius {
            if w[1].cut_resistance > w[0].cut_resistance + 1e-8 {
                return Err(numerical(format!(
                    "cut values must not increase: radius {} -> {}",
                    w[0].radius, w[1].radius
                )));
            }
            if w[1].short_resistance < w[0].short_resistance - 1e-8 {
                return Err(numerical(format!(
                    "short values must not decrease: radius {} -> {}",
                    w[0].radius, w[1].radius
                )));
            }
        }
    }
    Ok(())
}

fn cmd_foster(
    json: bool,
    lattice: Option<&str>,
    file: Option<&std::path::Path>,
    radius: u32,
    tol: f64,
) -> Result<(), Failure> {
    let cfg = SolveConfig::with_tolerance(tol);
    cfg.validate()?;
    match (lattice, file) {
        (Some(_), Some(_)) => Err(usage("give either a lattice kind or --file, not both")),
        (None, None) => Err(usage("give a lattice kind or --file")),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(Error::from)?;
            let net = ohmnet::edgelist::parse_edge_list(&text)?;
            let average = foster_average(&net, &cfg)?;
            let formula = (net.vertex_count() as f64 - 1.0) / net.edge_count() as f64;
            let manifest = RunManifest::new(
                "foster",
                report::FOSTER_SCHEMA,
                vec![
                    ("file".into(), path.display().to_string()),
                    ("tol".into(), fmt_f64(tol)),
                ],
                None,
            );
            let rows = vec![
                ("average_resistance", average),
                ("foster_formula", formula),
                ("abs_diff", (average - formula).abs()),
            ];
            emit_foster(json, &manifest, &rows);
            Ok(())
        }
        (Some(name), None) => {
            let lat = parse_lattice(name)?;
            let ball = lat.ball(&lat.origin(), radius)?;
            let cut = cut_network(&lat, &ball)?;
            let short = short_network(&lat, &ball, 1)?;
            let cut_average = foster_average(&cut.network, &cfg)?;
            let short_average = foster_average(&short.network, &cfg)?;
            let theory = 2.0 / lat.average_valence();
            let manifest = RunManifest::new(
                "foster",
                report::FOSTER_SCHEMA,
                vec![
                    ("lattice".into(), lat.to_string()),
                    ("radius".into(), radius.to_string()),
                    ("tol".into(), fmt_f64(tol)),
                ],
                None,
            );
            let rows = vec![
                ("cut_average", cut_average),
                ("short_average", short_average),
                ("theory_2_over_avg_valence", theory),
            ];
            emit_foster(json, &manifest, &rows);
            Ok(())
        }
    }
}

fn emit_foster(json: bool, manifest: &RunManifest, rows: &[(&str, f64)]) {
    if json {
        let body: serde_json::Map<String, serde_json::Value> = rows
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect();
        print_json(manifest, serde_json::Value::Object(body));
    } else {
        print!("{}", manifest.comment_block());
        println!("{}", report::FOSTER_HEADER);
        for (k, v) in rows {
            println!("{k},{}", fmt_f64(*v));
        }
    }
}

fn cmd_walk(
    json: bool,
    lattice: &str,
    steps: u32,
    trials: u32,
    seed: u64,
    start: &str,
) -> Result<(), Failure> {
    if steps == 0 || trials == 0 {
        return Err(usage("steps and trials must be at least 1"));
    }
    let lat = parse_lattice(lattice)?;
    let start_v = lat.parse_vertex(start)?;
    let cfg = WalkConfig {
        max_steps: steps,
        trials,
        seed,
        start: start_v.clone(),
    };
    let stats = return_frequency(&lat, &cfg)?;
    let manifest = RunManifest::new(
        "walk",
        report::WALK_SCHEMA,
        vec![
            ("lattice".into(), lat.to_string()),
            ("steps".into(), steps.to_string()),
            ("trials".into(), trials.to_string()),
            ("start".into(), start_v.to_string()),
        ],
        Some(seed),
    );
    if json {
        print_json(&manifest, serde_json::json!({ "stats": stats }));
    } else {
        print!("{}", manifest.comment_block());
        println!("{}", report::WALK_HEADER);
        println!(
            "{},{},{},{},{},{},{},{}",
            lat,
            stats.max_steps,
            stats.trials,
            stats.seed,
            stats.returns,
            fmt_f64(stats.return_frequency),
            fmt_f64(stats.standard_error),
            stats
                .mean_first_return_step
                .map(fmt_f64)
                .unwrap_or_default()
        );
    }
    Ok(())
}

fn cmd_rinf(json: bool, lattice: &str, p: &str, radii: &str, tol: f64) -> Result<(), Failure> {
    let lat = parse_lattice(lattice)?;
    let pv = lat.parse_vertex(p)?;
    let radii = parse_radii(radii)?;
    let cfg = SolveConfig::with_tolerance(tol);
    cfg.validate()?;
    let seq = SwellingSequence::around(&lat, std::slice::from_ref(&pv))?;
    let mut table = Vec::with_capacity(radii.len());
    for &r in &radii {
        let rows = resistance_to_infinity(&lat, &pv, &seq, &StopRule::radii(r, r), &cfg)?;
        table.extend(rows);
    }
    let trend = classify_trend(&table);
    let manifest = RunManifest::new(
        "rinf",
        report::RINF_SCHEMA,
        vec![
            ("lattice".into(), lat.to_string()),
            ("p".into(), pv.to_string()),
            ("radii".into(), radii.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")),
            ("tol".into(), fmt_f64(tol)),
        ],
        None,
    );
    if json {
        let rows: Vec<_> = table
            .iter()
            .map(|(r, v)| serde_json::json!({ "radius": r, "resistance": v }))
            .collect();
        print_json(
            &manifest,
            serde_json::json!({ "rows": rows, "trend": trend.label() }),
        );
    } else {
        print!("{}", manifest.comment_block());
        println!("{}", report::RINF_HEADER);
        for (r, v) in &table {
            println!("{r},{}", fmt_f64(*v));
        }
        println!("# trend={}", trend.label());
    }
    Ok(())
}

fn cmd_treeprob(json: bool, file: &std::path::Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(Error::from)?;
    let net = ohmnet::edgelist::parse_edge_list(&text)?;
    let census = spanning_tree_census(&net)?;
    let cfg = SolveConfig::with_tolerance(1e-12);
    let mut rows = Vec::with_capacity(net.edge_count());
    let mut max_diff = 0.0f64;
    let mut cache: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for e in net.edges() {
        let probability = census.probability(e.id);
        let key = (e.tail.0, e.head.0);
        let resistance = match cache.get(&key) {
            Some(&r) => r,
            None => {
                let r = effective_resistance(&net, e.tail, e.head, &cfg)?.resistance;
                cache.insert(key, r);
                r
            }
        };
        let diff = (probability - resistance).abs();
        max_diff = max_diff.max(diff);
        rows.push((e.id, e.tail, e.head, probability, resistance, diff));
    }
    let manifest = RunManifest::new(
        "treeprob",
        report::TREEPROB_SCHEMA,
        vec![("file".into(), file.display().to_string())],
        None,
    );
    if json {
        let body: Vec<_> = rows
            .iter()
            .map(|(e, u, v, p, r, d)| {
                serde_json::json!({
                    "edge": e.0, "u": u.0, "v": v.0,
                    "tree_probability": p, "effective_resistance": r, "abs_diff": d,
                })
            })
            .collect();
        print_json(
            &manifest,
            serde_json::json!({
                "rows": body,
                "spanning_trees": census.total,
                "max_abs_diff": max_diff,
            }),
        );
    } else {
        print!("{}", manifest.comment_block());
        println!("{}", report::TREEPROB_HEADER);
        for (e, u, v, p, r, d) in &rows {
            println!(
                "{},{},{},{},{},{}",
                e.0,
                u.0,
                v.0,
                fmt_f64(*p),
                fmt_f64(*r),
                fmt_f64(*d)
            );
        }
        println!("# spanning_trees={}", census.total);
        println!("# max_abs_diff={}", fmt_f64(max_diff));
    }
    Ok(())
}

// keep VertexId in scope for the treeprob row tuple type above
#[allow(dead_code)]
fn _type_anchor(_: VertexId) {}
