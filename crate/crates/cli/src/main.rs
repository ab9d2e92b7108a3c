use clap::{Args, Parser, Subcommand, ValueEnum};
use lerw_core::conformal::verify_hit_formula;
use lerw_core::experiments::{
    cauchy_trend, convergence_experiment, interpolation_sweep, puncture_demo, rho_diagnostics, rho_on_grid,
    InterpolationConfig, PunctureDomain,
};
use lerw_core::geometry::{PlanePoint, Pt, Region, Q};
use lerw_core::graph::{grid_graph, loop_erase, EmbeddedWeightedGraph};
use lerw_core::hybrid::{beta_table, format_half_units};
use lerw_core::lerw::{quasi_loop_census, sample_conditioned_lerw, wilson_ust};
use lerw_core::potential::{diagonal_closed_form, Normalization, PotentialTable};
use lerw_core::solver::square_ring;
use lerw_core::walk::{run_walk, RngStream, StopRule, WalkSampler, DEFAULT_STEP_BUDGET};
use lerw_core::{Error, Result};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lerw", about = "Loop-erased random walk experiments", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo sample count; each command has its own default.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Size of the worker pool (defaults to one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print the JSON document instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON document (or CSV for `potential --dump`) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_STEP_BUDGET)]
    step_budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Raw,
    Asymptotic,
}

#[derive(Clone, Copy, ValueEnum)]
enum RhoDomain {
    Square,
    Puncture,
}

#[derive(Subcommand)]
enum Command {
    /// β over the seams of the five standard hybrid configurations.
    BetaTable {
        #[arg(long, default_value_t = 200)]
        window: i64,
        #[arg(long, default_value_t = 5.0)]
        search: f64,
    },
    /// Potential kernel table, with a residual summary or a CSV dump.
    Potential {
        #[arg(long, default_value_t = 512)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = Norm::Raw)]
        normalization: Norm,
        #[arg(long)]
        dump: bool,
    },
    /// Loop-erased walks from the centre of [-N,N]^2 to its boundary, or
    /// conditioned chords between two boundary points.
    LerwSample {
        #[arg(long, default_value_t = 8)]
        n: i64,
        /// Start point in lattice units.
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        start: String,
        /// Boundary endpoints `x0,y0,x1,y1` of a conditioned chord.
        #[arg(long, allow_hyphen_values = true)]
        chord: Option<String>,
    },
    /// Uniform spanning trees of a rectangular grid via Wilson's algorithm.
    UstSample {
        #[arg(long, default_value_t = 4)]
        width: i64,
        #[arg(long, default_value_t = 4)]
        height: i64,
    },
    /// Mean number of quasi-loops of LERW from the centre of [-N,N]^2.
    QlCensus {
        #[arg(long, default_value_t = 16)]
        n: i64,
        #[arg(long, default_value_t = 4.0)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
    },
    /// Exact boundary hitting probabilities against the conformal predictions.
    HitVerify {
        #[arg(long, default_value_t = 32)]
        n: i64,
        #[arg(long)]
        off_center: bool,
    },
    /// ℙ(LE(R_n) ⊂ ℰ) for 𝒟 = (-1,1)^2, ℰ = (-1,1)×(-1,top), a = -i/4.
    Convergence {
        #[arg(long, value_delimiter = ',', default_values_t = [4u32, 5, 6, 7, 8])]
        levels: Vec<u32>,
        #[arg(long, default_value = "1/2")]
        top: String,
    },
    /// Hitting probability of the outer square on the punctured domain.
    PunctureDemo {
        #[arg(long, value_delimiter = ',', default_values_t = [4u32, 5, 6, 7])]
        levels: Vec<u32>,
    },
    /// Containment probabilities on hybrid graphs with k coarse cells.
    InterpSweep {
        #[arg(long, default_value_t = 4)]
        m: i64,
        #[arg(long, default_value_t = 4)]
        n: i64,
        #[arg(long, value_delimiter = ',')]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value = "1/2")]
        top: String,
    },
    /// Exact ρ_1, ρ_2, ρ_3.
    Rho {
        #[arg(long, value_enum, default_value_t = RhoDomain::Square)]
        domain: RhoDomain,
        #[arg(long, default_value_t = 0.25)]
        r: f64,
        #[arg(long, default_value_t = 5)]
        level: u32,
        #[arg(long, default_value = "1/2")]
        top: String,
    },
}

/// A finished run: the JSON document and its plain-text rendering.
struct Report {
    doc: Value,
    text: String,
}

fn int_list(s: &str, k: usize) -> Result<Vec<i64>> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidInput(format!("{s}: {e}")))?;
    if v.len() != k {
        return Err(Error::InvalidInput(format!("{s}: expected {k} comma-separated integers")));
    }
    Ok(v)
}

fn parse_q(s: &str) -> Result<Q> {
    s.parse::<Q>().map_err(|_| Error::InvalidInput(format!("not a rational: {s}")))
}

fn square() -> Region {
    Region::rect_int(-1, -1, 1, 1)
}

fn lower_part(top: Q) -> Region {
    Region::rect(Q::from_integer(-1), Q::from_integer(-1), Q::from_integer(1), top)
}

fn lattice_box(n: i64) -> Result<(EmbeddedWeightedGraph, Vec<usize>)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need N >= 2, got {n}")));
    }
    let g = grid_graph(0, 1, (-n, n), (-n, n))?;
    let ring = square_ring(&g, n);
    Ok((g, ring))
}

fn vertex(g: &EmbeddedWeightedGraph, x: i64, y: i64) -> Result<usize> {
    g.index_of(&PlanePoint::int(x, y)).ok_or_else(|| Error::InvalidInput(format!("({x}, {y}) is not a vertex")))
}

fn coords(g: &EmbeddedWeightedGraph, path: &[usize]) -> Vec<(i64, i64)> {
    path.iter().map(|&v| (g.point(v).nx, g.point(v).ny)).collect()
}

fn run(cmd: &Command, gl: &Global) -> Result<Report> {
    let seed = gl.seed;
    let budget = gl.step_budget;
    let samples = |default: u64| gl.samples.unwrap_or(default);
    let mut text = String::new();
    let doc = match cmd {
        Command::BetaTable { window, search } => {
            let radius = 2 * (*window).max(0) as usize + 20;
            let table = PotentialTable::new(radius);
            let rows = beta_table(&table, *window, *search)?;
            text += &format!("{:<20} {:>8} {:>8} {:>12} {:>10}\n", "configuration", "beta", "table", "argmax", "tail");
            for r in &rows {
                text += &format!(
                    "{:<20} {:>8.5} {:>8.2} {:>12} {:>10.1e}\n",
                    r.label,
                    r.max_beta,
                    r.expected,
                    format_half_units(r.argmax),
                    r.truncation
                );
            }
            json!({ "command": "beta-table", "seed": seed, "window": window, "search": search, "rows": rows })
        }
        Command::Potential { radius, normalization, dump } => {
            let norm = match normalization {
                Norm::Raw => Normalization::Raw,
                Norm::Asymptotic => Normalization::Asymptotic,
            };
            let t = PotentialTable::new(*radius);
            if *dump {
                let mut buf = Vec::new();
                t.write_csv(&mut buf, norm).map_err(|e| Error::InvalidInput(e.to_string()))?;
                let csv = String::from_utf8(buf).expect("csv is ascii");
                return Ok(Report { doc: Value::String(csv.clone()), text: csv });
            }
            let hi = (*radius as f64).min(200.0);
            let (res, at) = t.residual_bound_scan(10f64.min(hi), hi)?;
            let diag = (0..=*radius as u64)
                .map(|n| (t.raw(n as i64, n as i64).unwrap_or(f64::NAN) - diagonal_closed_form(n)).abs())
                .fold(0.0, f64::max);
            text += &format!("max |a(z) - log|z|/2π - c| |z|^2 over 10 ≤ |z| ≤ {hi}: {res:.6} at {at:?}\n");
            text += &format!("diagonal closed form, max error: {diag:.2e}\n");
            json!({
                "command": "potential", "seed": seed, "radius": radius, "offset": norm.offset(),
                "residual_bound": res, "residual_argmax": at, "diagonal_error": diag,
            })
        }
        Command::LerwSample { n, start, chord } => {
            let (g, ring) = lattice_box(*n)?;
            let count = samples(1);
            let start = int_list(start, 2)?;
            let chord = chord.as_deref().map(|c| int_list(c, 4)).transpose()?;
            let mut paths = Vec::new();
            for i in 0..count {
                let mut rng = RngStream::new(seed, i).rng();
                let p = match &chord {
                    Some(c) => {
                        let (b0, b1) = (vertex(&g, c[0], c[1])?, vertex(&g, c[2], c[3])?);
                        sample_conditioned_lerw(&g, &ring, b0, b1, &mut rng, budget)?.vertices().to_vec()
                    }
                    None => {
                        let a = vertex(&g, start[0], start[1])?;
                        let rule = StopRule::new(g.len(), &ring, 1)?;
                        let w = run_walk(&WalkSampler::new(&g), a, &rule, &mut rng, budget)?;
                        loop_erase(&w).vertices().to_vec()
                    }
                };
                let c = coords(&g, &p);
                text += &format!("{}\n", c.iter().map(|(x, y)| format!("{x},{y}")).collect::<Vec<_>>().join(" "));
                paths.push(c);
            }
            json!({ "command": "lerw-sample", "seed": seed, "n": n, "chord": chord, "paths": paths })
        }
        Command::UstSample { width, height } => {
            if *width < 1 || *height < 1 {
                return Err(Error::InvalidInput("grid sides must be positive".into()));
            }
            let g = grid_graph(0, 1, (0, width - 1), (0, height - 1))?;
            let order: Vec<usize> = (0..g.len()).collect();
            let mut trees = Vec::new();
            for i in 0..samples(1) {
                let t = wilson_ust(&g, &order, &mut RngStream::new(seed, i).rng(), budget)?;
                let edges: Vec<[(i64, i64); 2]> = t
                    .edges()
                    .into_iter()
                    .map(|(a, b)| [(g.point(a).nx, g.point(a).ny), (g.point(b).nx, g.point(b).ny)])
                    .collect();
                text += &format!(
                    "{}\n",
                    edges.iter().map(|[a, b]| format!("{},{}-{},{}", a.0, a.1, b.0, b.1)).collect::<Vec<_>>().join(" ")
                );
                trees.push(edges);
            }
            json!({ "command": "ust-sample", "seed": seed, "width": width, "height": height, "trees": trees })
        }
        Command::QlCensus { n, r, eps } => {
            let (g, ring) = lattice_box(*n)?;
            let a = vertex(&g, 0, 0)?;
            let est = quasi_loop_census(&g, a, &ring, *r, *eps, None, samples(2000), seed, budget)?;
            text += &format!("mean quasi-loop count {:.4} ± {:.4} ({} walks)\n", est.value, est.std_error, est.samples);
            json!({ "command": "ql-census", "seed": seed, "n": n, "r": r, "eps": eps, "estimate": est })
        }
        Command::HitVerify { n, off_center } => {
            let u = if *off_center { (n / 3, -n / 4) } else { (0, 0) };
            let rep = verify_hit_formula(*n, u, 0)?;
            text += &format!("{:>10} {:>12} {:>12} {:>12}\n", "b", "exact", "derivative", "sum");
            for row in &rep.rows {
                text += &format!(
                    "{:>10} {:>12.4e} {:>12.4e} {:>12.4e}\n",
                    format!("{},{}", row.b.0, row.b.1),
                    row.exact,
                    row.derivative_prediction,
                    row.sum_prediction
                );
            }
            text += &format!(
                "max relative error: derivative {:.4}, sum {:.4}; predicted mass {:.5}\n",
                rep.max_rel_err_derivative, rep.max_rel_err_sum, rep.predicted_mass
            );
            json!({ "command": "hit-verify", "seed": seed, "report": rep })
        }
        Command::Convergence { levels, top } => {
            let e = lower_part(parse_q(top)?);
            let a = Pt::frac(0, 1, -1, 4);
            let rows = convergence_experiment(&square(), &e, &a, levels, samples(100_000), seed, budget)?;
            let trend = cauchy_trend(&rows);
            text += &format!("{:>3} {:>10} {:>9} {:>9} {}\n", "n", "mesh", "p", "se", "degenerate");
            for r in &rows {
                text += &format!(
                    "{:>3} {:>10.6} {:>9.5} {:>9.5} {}\n",
                    r.n, r.mesh, r.estimate.value, r.estimate.std_error, r.degenerate
                );
            }
            for s in &trend {
                text += &format!("|p{0}-p{1}| = {2:.5}, next {3:.5}, 2σ = {4:.5}: {5}\n", s.n, s.n + 1, s.diff, s.next_diff, 2.0 * s.sigma, if s.ok { "ok" } else { "VIOLATED" });
            }
            json!({ "command": "convergence", "seed": seed, "top": top, "a": [0.0, -0.25], "rows": rows, "trend": trend })
        }
        Command::PunctureDemo { levels } => {
            let dom = PunctureDomain::standard();
            let rows = puncture_demo(&dom, levels, samples(0), seed, budget)?;
            text += &format!("{:>3} {:>7} {:>9} {:>10} {:>10}\n", "n", "stages", "obstacle", "exact", "mc");
            for r in &rows {
                let mc = r.estimate.map(|e| format!("{:.4}", e.value)).unwrap_or_else(|| "-".into());
                text += &format!("{:>3} {:>7} {:>9} {:>10.6} {:>10}\n", r.n, r.active_stages, r.obstacle_vertices, r.outer, mc);
            }
            json!({ "command": "puncture-demo", "seed": seed, "schedule": dom.schedule, "rows": rows })
        }
        Command::InterpSweep { m, n, ks, trials, top } => {
            let cfg = InterpolationConfig {
                m: *m,
                n: *n,
                ks: ks.clone(),
                trials: *trials,
                samples: samples(2000),
                seed,
                step_budget: budget,
            };
            let e = lower_part(parse_q(top)?);
            let rep = interpolation_sweep(&square(), &e, &Pt::frac(0, 1, -1, 4), &cfg)?;
            text += &format!("heuristic run: M = {}, N = {}, #Y = {}\n", rep.m, rep.n, rep.y_size);
            for r in &rep.rows {
                text += &format!("k = {:>4}: {:.5} ± {:.5} ({} trials)\n", r.k, r.mean, r.std_error, r.trials);
            }
            text += &format!("drift {:.5} ± {:.5}\n", rep.drift, rep.drift_std_error);
            json!({ "command": "interp-sweep", "seed": seed, "heuristic": true, "config": cfg, "report": rep })
        }
        Command::Rho { domain, r, level, top } => {
            let d = match domain {
                RhoDomain::Square => {
                    rho_diagnostics(&square(), &lower_part(parse_q(top)?), &Pt::frac(0, 1, -1, 4), *r, *level)?
                }
                RhoDomain::Puncture => {
                    let grid = PunctureDomain::standard().grid(*level)?;
                    let start = grid.vertex_at(0, 0).ok_or_else(|| Error::InvalidInput("no vertex at 0".into()))?;
                    rho_on_grid(&grid, &Region::rect_int(-2, -2, 2, 2), start, *r)?
                }
            };
            text += &format!(
                "r = {}, δ = {}: ρ1 = {:.6}, ρ2 = {:.6}, ρ3 = {:.6} (#X1 = {}, #X2 = {})\n",
                d.r, d.delta, d.rho1, d.rho2, d.rho3, d.x1, d.x2
            );
            json!({ "command": "rho", "seed": seed, "diagnostics": d })
        }
    };
    Ok(Report { doc, text })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let gl = &cli.global;
    if let Some(w) = gl.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let report = match run(&cli.command, gl) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let body = match &report.doc {
        Value::String(csv) => csv.clone(),
        doc => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
    };
    if let Some(path) = &gl.out {
        if let Err(e) = std::fs::write(path, &body) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let stdout = if gl.json { &body } else { &report.text };
    let _ = std::io::stdout().write_all(stdout.as_bytes());
    ExitCode::SUCCESS
}
