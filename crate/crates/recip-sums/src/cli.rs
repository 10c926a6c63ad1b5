//! Command-line driver: `table-compare`, `eval`, `count`, `sweep`,
//! `pigeonhole`, `discrepancy`, `verify`.
//!
//! Every command emits CSV with a header row whose column set depends only
//! on the subcommand; output bytes are a pure function of (config, seed),
//! independent of `--parallel`. Timing goes to stderr so it never perturbs
//! the output.

use crate::bounds::{self, BoundLabel};
use crate::config::{CountKind, ExperimentConfig, RegionSpec, SumKind, WeightSpec};
use crate::counting::{
    char_moment, count_j_conv, count_j_naive, count_n, count_n_tuples, discrepancy, rho_census,
    WorkCaps,
};
use crate::csvout::{complex_cells, fmt_f64, na, CsvTable};
use crate::error::{Error, Result};
use crate::field::{FieldContext, MultChar, PolySpec};
use crate::pigeonhole::{find_t, shrink_poly};
use crate::regions::{parse_vertices, ConvexRegion, WeightSeq};
use crate::rng::derive_seed;
use crate::sums::{eval_k, eval_s, eval_s_single, eval_t, SumResult};
use crate::verify::{run_all, Level};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

const AFTER_HELP: &str = "\
Conventions:
  * logarithms are natural logs everywhere (the dyadic censuses use e^j classes)
  * CSV is RFC-4180 style with a mandatory header; complex values occupy two
    columns (re, im); the column set is fixed per subcommand
  * rationals are written num/den; lists are comma-separated
  * RECIP_SUMS_WORKCAP overrides work caps: a bare integer sets the naive
    enumeration state cap, or use naive_states=N,conv_modulus=M

Exit codes: 0 success, 1 verification failure, 2 config error.";

#[derive(Parser)]
#[command(name = "recip-sums", version, about = "Exact experiments on bilinear exponential and character sums with reciprocals of polynomials mod p", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the bound-comparison table at U = p^alpha, V = p^beta.
    TableCompare {
        /// Optional config supplying `rows = a1:b1,a2:b2,...` and `kmax`.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Hoelder-parameter search cap.
        #[arg(long)]
        kmax: Option<u64>,
        /// Write the CSV form here (the rendered table goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the configured sums (S, S1, T, K) on one region.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the configured counters (J, Nf, tuples, moment, rho).
    Count {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cartesian sweep over the configured axes, one row per cell and sum.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (output is byte-identical for any value).
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficient-shrinking reduction for the configured polynomial.
    Pigeonhole {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interval discrepancy of a residue sequence (explicit or f(1..U)).
    Discrepancy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites of every module.
    Verify {
        #[arg(long, default_value = "quick")]
        level: Level,
    },
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::TableCompare { config, kmax, out } => {
            let cfg = load_optional(config)?;
            let kmax = kmax.or(cfg.kmax).unwrap_or(64);
            let (rendered, csv, matches) = cmd_table_compare(&cfg, kmax);
            print!("{rendered}");
            write_out(&out, &csv)?;
            Ok(if matches { 0 } else { 1 })
        }
        Command::Eval { config, seed, out } => {
            let mut cfg = ExperimentConfig::parse_file(&config)?;
            if let Some(seed) = seed {
                cfg.seed = Some(seed);
            }
            let started = std::time::Instant::now();
            let csv = cmd_eval(&cfg)?;
            eprintln!("eval: {} ms", started.elapsed().as_millis());
            emit(&out, cfg.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Count { config, out } => {
            let cfg = ExperimentConfig::parse_file(&config)?;
            let started = std::time::Instant::now();
            let csv = cmd_count(&cfg)?;
            eprintln!("count: {} ms", started.elapsed().as_millis());
            emit(&out, cfg.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Sweep { config, seed, parallel, out } => {
            let mut cfg = ExperimentConfig::parse_file(&config)?;
            if let Some(seed) = seed {
                cfg.seed = Some(seed);
            }
            if let Some(par) = parallel {
                cfg.parallel = Some(par);
            }
            let started = std::time::Instant::now();
            let csv = cmd_sweep(&cfg)?;
            eprintln!("sweep: {} ms", started.elapsed().as_millis());
            emit(&out, cfg.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Pigeonhole { config, out } => {
            let cfg = ExperimentConfig::parse_file(&config)?;
            let csv = cmd_pigeonhole(&cfg)?;
            emit(&out, cfg.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Discrepancy { config, out } => {
            let cfg = ExperimentConfig::parse_file(&config)?;
            let csv = cmd_discrepancy(&cfg)?;
            emit(&out, cfg.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Verify { level } => {
            let started = std::time::Instant::now();
            let reports = run_all(level);
            let mut failed = false;
            for report in &reports {
                if report.passed() {
                    println!("PASS {} ({} checks)", report.name, report.checks);
                } else {
                    failed = true;
                    println!(
                        "FAIL {} ({} checks, {} failures)",
                        report.name,
                        report.checks,
                        report.failures.len()
                    );
                    for failure in report.failures.iter().take(5) {
                        println!("     {failure}");
                    }
                }
            }
            let total: u64 = reports.iter().map(|r| r.checks).sum();
            println!(
                "{}: {} suites, {} checks in {} ms",
                if failed { "FAILED" } else { "OK" },
                reports.len(),
                total,
                started.elapsed().as_millis()
            );
            Ok(if failed { 1 } else { 0 })
        }
    }
}

fn load_optional(path: Option<PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::parse_file(&p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(path) = path {
        std::fs::write(path, text)?;
    }
    Ok(())
}

/// Flag --out wins, then the config `out` key, then stdout.
fn emit(flag: &Option<PathBuf>, cfg_out: Option<&str>, text: &str) -> Result<()> {
    if let Some(path) = flag {
        std::fs::write(path, text)?;
    } else if let Some(path) = cfg_out {
        std::fs::write(path, text)?;
    } else {
        print!("{text}");
    }
    Ok(())
}

fn fmt_k_set(set: &[u64]) -> String {
    match set.len() {
        1 => format!("k={}", set[0]),
        2 => format!("k={} or {}", set[0], set[1]),
        _ => format!(
            "k={}",
            set.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
        ),
    }
}

/// Renders the comparison table and its CSV; the boolean is the acceptance
/// gate: the reference rows reproduce at this kmax.
pub fn cmd_table_compare(cfg: &ExperimentConfig, kmax: u64) -> (String, String, bool) {
    let rows_in = cfg.rows.clone().unwrap_or_else(bounds::reference_rows);
    let rows = bounds::compare_table(&rows_in, kmax);

    let mut csv = CsvTable::new(vec![
        "alpha", "beta", "label", "exponent", "nontrivial", "winner", "k_set",
    ]);
    for row in &rows {
        for entry in &row.entries {
            csv.push(vec![
                row.alpha.to_string(),
                row.beta.to_string(),
                entry.label.name().to_string(),
                entry.exponent.to_string(),
                entry.nontrivial.to_string(),
                entry.winner.to_string(),
                entry
                    .k_set
                    .as_ref()
                    .map(|s| s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("|"))
                    .unwrap_or_default(),
            ]);
        }
    }

    let mut cells: Vec<[String; 4]> = vec![[
        "(U,V)".to_string(),
        "Thm2.3".to_string(),
        "Thm2.4".to_string(),
        "Thm2.5".to_string(),
    ]];
    for row in &rows {
        let point = format!("(p^{}, p^{})", row.alpha, row.beta);
        let fmt_entry = |label: BoundLabel| {
            let e = row.entry(label);
            if !e.nontrivial {
                return "---".to_string();
            }
            let star = if e.winner { "* " } else { "" };
            match &e.k_set {
                Some(set) => format!("{star}p^{} ({})", e.exponent, fmt_k_set(set)),
                None => format!("{star}p^{}", e.exponent),
            }
        };
        cells.push([
            point,
            fmt_entry(BoundLabel::Thm23),
            fmt_entry(BoundLabel::Thm24),
            fmt_entry(BoundLabel::Thm25),
        ]);
    }
    let widths: Vec<usize> = (0..4)
        .map(|col| cells.iter().map(|row| row[col].len()).max().unwrap_or(0))
        .collect();
    let mut rendered = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(col, cell)| format!("{cell:<width$}", width = widths[col]))
            .collect();
        rendered.push_str(line.join("  ").trim_end());
        rendered.push('\n');
    }

    // the acceptance gate always checks the reference rows, whatever was
    // printed above
    let matches = bounds::table_matches_reference(kmax);
    (rendered, csv.to_string(), matches)
}

const EVAL_HEADER: [&str; 21] = [
    "kind", "p", "d", "U", "V", "region", "weights", "seed", "chi_m", "chi_j", "a", "b", "terms",
    "excluded", "re", "im", "abs", "uv", "sqrt_duvp", "ratio_trivial", "ratio_benchmark",
];

fn build_region(cfg: &ExperimentConfig) -> Result<ConvexRegion> {
    match cfg.region.as_ref().ok_or(Error::ConfigMissing("region"))? {
        RegionSpec::Rect { u, v } => ConvexRegion::rectangle(*u, *v),
        RegionSpec::PolygonFile(path) => {
            let text = std::fs::read_to_string(path)?;
            let vertices = parse_vertices(&text)?;
            ConvexRegion::from_polygon(vertices, cfg.require_u()?, cfg.v.ok_or(Error::ConfigMissing("v"))?)
        }
    }
}

/// Per-run constants shared by every eval row.
struct EvalRowCtx {
    p: u64,
    u_max: u64,
    v_max: u64,
    region_desc: String,
    weights_desc: String,
    seed_desc: String,
}

fn push_eval_row(
    table: &mut CsvTable,
    row_ctx: &EvalRowCtx,
    kind: &str,
    d: u64,
    chi: Option<(u64, u64)>,
    ab: Option<(i64, i64)>,
    s: &SumResult,
) {
    let (re, im) = complex_cells(s.value);
    let sqrt_duvp = ((d * row_ctx.u_max * row_ctx.v_max) as f64 * row_ctx.p as f64).sqrt();
    let abs = s.value.norm();
    table.push(vec![
        kind.to_string(),
        row_ctx.p.to_string(),
        d.to_string(),
        row_ctx.u_max.to_string(),
        row_ctx.v_max.to_string(),
        row_ctx.region_desc.clone(),
        row_ctx.weights_desc.clone(),
        row_ctx.seed_desc.clone(),
        chi.map(|(m, _)| m.to_string()).unwrap_or_default(),
        chi.map(|(_, j)| j.to_string()).unwrap_or_default(),
        ab.map(|(a, _)| a.to_string()).unwrap_or_default(),
        ab.map(|(_, b)| b.to_string()).unwrap_or_default(),
        s.terms.to_string(),
        s.excluded.to_string(),
        re,
        im,
        fmt_f64(abs),
        fmt_f64(s.trivial_bound),
        fmt_f64(sqrt_duvp),
        fmt_f64(abs / s.trivial_bound),
        fmt_f64(abs / sqrt_duvp.max(f64::MIN_POSITIVE)),
    ]);
}

/// One CSV row per configured sum kind.
pub fn cmd_eval(cfg: &ExperimentConfig) -> Result<String> {
    let p = cfg.require_p()?;
    let ctx = FieldContext::new(p)?;
    let region = build_region(cfg)?;
    let (u_max, v_max) = (region.u_max(), region.v_max());
    let kinds = cfg.sums.clone().unwrap_or_else(|| vec![SumKind::S]);
    let weights_spec = cfg.weights.unwrap_or(WeightSpec::Unit);
    let (a_weights, b_weights) = match weights_spec {
        WeightSpec::Unit => (WeightSeq::unit(u_max), WeightSeq::unit(v_max)),
        WeightSpec::Seeded(s) => (
            WeightSeq::random(u_max, s),
            WeightSeq::random(v_max, s.wrapping_add(1)),
        ),
    };
    let row_ctx = EvalRowCtx {
        p,
        u_max,
        v_max,
        region_desc: cfg.region.as_ref().map(|r| r.to_string()).unwrap_or_default(),
        weights_desc: weights_spec.to_string(),
        seed_desc: match weights_spec {
            WeightSpec::Seeded(s) => s.to_string(),
            WeightSpec::Unit => String::new(),
        },
    };

    let mut table = CsvTable::new(EVAL_HEADER.to_vec());
    for kind in kinds {
        match kind {
            SumKind::S => {
                let f = PolySpec::new(&ctx, cfg.require_f()?)?;
                let s = eval_s(&ctx, &f, &a_weights, &b_weights, &region)?;
                push_eval_row(&mut table, &row_ctx, "S", f.degree(), None, None, &s);
            }
            SumKind::SSingle => {
                let f = PolySpec::new(&ctx, cfg.require_f()?)?;
                let s = eval_s_single(&ctx, &f, &a_weights, &region)?;
                push_eval_row(&mut table, &row_ctx, "S1", f.degree(), None, None, &s);
            }
            SumKind::T => {
                let f = PolySpec::new(&ctx, cfg.require_f()?)?;
                let (m, j) = cfg.chi.ok_or(Error::ConfigMissing("chi"))?;
                let chi = MultChar::new(&ctx, m, j)?;
                let s = eval_t(&ctx, &chi, &f, &a_weights, &b_weights, &region)?;
                push_eval_row(&mut table, &row_ctx, "T", f.degree(), Some((m, j)), None, &s);
            }
            SumKind::K => {
                let a_coef = cfg.a.ok_or(Error::ConfigMissing("a"))?;
                let b_coef = cfg.b.unwrap_or(0);
                let s = eval_k(&ctx, a_coef, b_coef, &a_weights, &b_weights, &region)?;
                push_eval_row(&mut table, &row_ctx, "K", 1, None, Some((a_coef, b_coef)), &s);
            }
        }
    }
    Ok(table.to_string())
}

const COUNT_HEADER: [&str; 25] = [
    "kind", "p", "d", "k", "a", "b", "T", "U", "V", "Z", "L", "nu", "count", "count_naive",
    "count_conv", "bound_rhs", "ratio", "weil_dev", "weil_ref", "rho_r", "rho_q", "rho_i",
    "rho_j", "excluded", "note",
];

fn blank_count_row() -> Vec<String> {
    vec![na(); COUNT_HEADER.len()]
}

fn set(row: &mut [String], col: &str, value: String) {
    let idx = COUNT_HEADER.iter().position(|&h| h == col).expect("known column");
    row[idx] = value;
}

/// CSV of count reports for the configured counters.
pub fn cmd_count(cfg: &ExperimentConfig) -> Result<String> {
    let p = cfg.require_p()?;
    let ctx = FieldContext::new(p)?;
    let caps = cfg
        .workcap
        .as_deref()
        .and_then(WorkCaps::parse_override)
        .unwrap_or_else(WorkCaps::from_env);
    let kinds = cfg.counts.clone().ok_or(Error::ConfigMissing("counts"))?;
    let mut table = CsvTable::new(COUNT_HEADER.to_vec());
    for kind in kinds {
        match kind {
            CountKind::J => {
                let ds = cfg.d_list.clone().unwrap_or_else(|| vec![cfg.d.unwrap_or(1)]);
                let ks = cfg.k_list.clone().unwrap_or_else(|| vec![cfg.k.unwrap_or(1)]);
                let ts = cfg.t_list.clone().unwrap_or_else(|| vec![cfg.t.unwrap_or(1)]);
                let abs = cfg
                    .ab_list
                    .clone()
                    .unwrap_or_else(|| vec![(cfg.a.unwrap_or(1), cfg.b.unwrap_or(0))]);
                for &d in &ds {
                    for &k in &ks {
                        for &t_max in &ts {
                            for &(a, b) in &abs {
                                let mut row = blank_count_row();
                                set(&mut row, "kind", "J".into());
                                set(&mut row, "p", p.to_string());
                                set(&mut row, "d", d.to_string());
                                set(&mut row, "k", k.to_string());
                                set(&mut row, "a", a.to_string());
                                set(&mut row, "b", b.to_string());
                                set(&mut row, "T", t_max.to_string());
                                let naive = count_j_naive(&ctx, d, k, a, b, t_max, &caps);
                                let conv = count_j_conv(&ctx, d, k, a, b, t_max, &caps);
                                let mut notes = Vec::new();
                                match &naive {
                                    Ok(rep) => {
                                        set(&mut row, "count_naive", rep.count.to_string())
                                    }
                                    Err(e) => notes.push(format!("naive skipped: {e}")),
                                }
                                match &conv {
                                    Ok(rep) => {
                                        set(&mut row, "count_conv", rep.count.to_string());
                                        set(&mut row, "count", rep.count.to_string());
                                        set(&mut row, "bound_rhs", fmt_f64(rep.bound_rhs));
                                        set(&mut row, "ratio", fmt_f64(rep.ratio));
                                    }
                                    Err(e) => notes.push(format!("conv skipped: {e}")),
                                }
                                if let (Ok(n), Err(_)) = (&naive, &conv) {
                                    set(&mut row, "count", n.count.to_string());
                                    set(&mut row, "bound_rhs", fmt_f64(n.bound_rhs));
                                    set(&mut row, "ratio", fmt_f64(n.ratio));
                                }
                                set(&mut row, "note", notes.join("; "));
                                table.push(row);
                            }
                        }
                    }
                }
            }
            CountKind::Nf => {
                let f = PolySpec::new(&ctx, cfg.require_f()?)?;
                let us = cfg.u_list.clone().unwrap_or_else(|| vec![cfg.u.unwrap_or(p - 1)]);
                let zs = cfg.z_list.clone().unwrap_or_else(|| vec![cfg.z.unwrap_or(p - 1)]);
                for &u_max in &us {
                    for &z_max in &zs {
                        let rep = count_n(&ctx, &f, u_max, z_max);
                        let mut row = blank_count_row();
                        set(&mut row, "kind", "Nf".into());
                        set(&mut row, "p", p.to_string());
                        set(&mut row, "d", f.degree().to_string());
                        set(&mut row, "U", u_max.to_string());
                        set(&mut row, "Z", z_max.to_string());
                        set(&mut row, "count", rep.count.to_string());
                        set(&mut row, "bound_rhs", fmt_f64(rep.bound_rhs));
                        set(&mut row, "ratio", fmt_f64(rep.ratio));
                        let dev = rep.count as f64 - (u_max as f64) * (z_max as f64) / p as f64;
                        set(&mut row, "weil_dev", fmt_f64(dev));
                        set(
                            &mut row,
                            "weil_ref",
                            fmt_f64((p as f64).sqrt() * (p as f64).ln().powi(2)),
                        );
                        table.push(row);
                    }
                }
            }
            CountKind::Tuples => {
                let r = sequence_from_config(&ctx, cfg)?;
                let ls = cfg.l_list.clone().unwrap_or_else(|| vec![cfg.l.unwrap_or(2)]);
                let v_max = cfg.v.ok_or(Error::ConfigMissing("v"))?;
                for &l in &ls {
                    let rep = count_n_tuples(&ctx, &r, l, v_max)?;
                    let mut row = blank_count_row();
                    set(&mut row, "kind", "tuples".into());
                    set(&mut row, "p", p.to_string());
                    set(&mut row, "U", r.len().to_string());
                    set(&mut row, "V", v_max.to_string());
                    set(&mut row, "L", l.to_string());
                    set(&mut row, "count", rep.count.to_string());
                    set(&mut row, "bound_rhs", fmt_f64(rep.bound_rhs));
                    set(&mut row, "ratio", fmt_f64(rep.ratio));
                    table.push(row);
                }
            }
            CountKind::Moment => {
                let (m, j) = cfg.chi.ok_or(Error::ConfigMissing("chi"))?;
                let chi = MultChar::new(&ctx, m, j)?;
                let k_len = cfg.k.ok_or(Error::ConfigMissing("k"))?;
                let nu = cfg.nu.unwrap_or(1) as u32;
                let moment = char_moment(&ctx, &chi, k_len, nu);
                let mut row = blank_count_row();
                set(&mut row, "kind", "moment".into());
                set(&mut row, "p", p.to_string());
                set(&mut row, "k", k_len.to_string());
                set(&mut row, "nu", nu.to_string());
                set(&mut row, "count", fmt_f64(moment));
                if nu == 1 {
                    let rhs = (k_len * (p - k_len)) as f64;
                    set(&mut row, "bound_rhs", fmt_f64(rhs));
                    set(&mut row, "ratio", fmt_f64(moment / rhs));
                }
                table.push(row);
            }
            CountKind::Rho => {
                let f = PolySpec::new(&ctx, cfg.require_f()?)?;
                let u_max = cfg.u.unwrap_or(p - 1);
                let v_max = cfg.v.unwrap_or(p - 1);
                let census = rho_census(&ctx, &f, u_max, v_max);
                let mut row = blank_count_row();
                set(&mut row, "kind", "rho".into());
                set(&mut row, "p", p.to_string());
                set(&mut row, "d", f.degree().to_string());
                set(&mut row, "U", u_max.to_string());
                set(&mut row, "V", v_max.to_string());
                set(&mut row, "rho_r", census.r_count.to_string());
                set(
                    &mut row,
                    "rho_q",
                    census
                        .q
                        .iter()
                        .map(|(j, c)| format!("{j}:{c}"))
                        .collect::<Vec<_>>()
                        .join("|"),
                );
                set(&mut row, "rho_i", census.i_index.to_string());
                set(&mut row, "rho_j", census.j_index.to_string());
                set(&mut row, "excluded", census.excluded.to_string());
                set(&mut row, "count", census.classified_total().to_string());
                table.push(row);
            }
        }
    }
    Ok(table.to_string())
}

/// Sequence for tuple counts and discrepancy: explicit `r_list`, else
/// `f(1..U)`.
fn sequence_from_config(ctx: &FieldContext, cfg: &ExperimentConfig) -> Result<Vec<u64>> {
    if let Some(r) = &cfg.r_list {
        return Ok(r.iter().map(|&x| ctx.reduce(x)).collect());
    }
    let f = PolySpec::new(ctx, cfg.require_f()?)?;
    let u_max = cfg.require_u()?;
    Ok((1..=u_max).map(|u| f.eval(ctx, u % ctx.p())).collect())
}

const SWEEP_HEADER: [&str; 20] = [
    "cell", "p", "d", "U", "V", "kind", "weights", "seed", "terms", "excluded", "re", "im",
    "abs", "uv", "sqrt_duvp", "ratio_trivial", "ratio_benchmark", "thm21_rhs", "ratio_thm21",
    "skipped",
];

#[derive(Debug, Clone)]
struct SweepCell {
    index: u64,
    p: u64,
    d: u64,
    u_max: u64,
    v_max: u64,
}

fn axis(list: &Option<Vec<u64>>, single: Option<u64>, fallback: u64) -> Vec<u64> {
    if let Some(list) = list {
        list.clone()
    } else if let Some(x) = single {
        vec![x]
    } else {
        vec![fallback]
    }
}

fn side_from(pow: Option<f64>, list_value: Option<u64>, p: u64) -> u64 {
    match (list_value, pow) {
        (Some(x), _) => x,
        (None, Some(pow)) => ((p as f64).powf(pow).floor() as u64).clamp(1, p - 1),
        (None, None) => p - 1,
    }
}

/// Cartesian sweep: rows in lexicographic axis order, computed cells
/// combinable across any worker count.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<String> {
    let ps = axis(&cfg.p_list, cfg.p, 0);
    if ps == vec![0] {
        return Err(Error::ConfigMissing("p or p_list"));
    }
    let ds = axis(&cfg.d_list, cfg.d, cfg.f.as_ref().map(|f| (f.len() - 1) as u64).unwrap_or(1));
    let us: Vec<Option<u64>> = match &cfg.u_list {
        Some(list) => list.iter().map(|&x| Some(x)).collect(),
        None => vec![cfg.u],
    };
    let vs: Vec<Option<u64>> = match &cfg.v_list {
        Some(list) => list.iter().map(|&x| Some(x)).collect(),
        None => vec![cfg.v],
    };
    let kinds = cfg.sums.clone().unwrap_or_else(|| vec![SumKind::S]);
    let seed = cfg.seed.unwrap_or(0);
    let weights_spec = cfg.weights.unwrap_or(WeightSpec::Unit);
    let caps = cfg
        .workcap
        .as_deref()
        .and_then(WorkCaps::parse_override)
        .unwrap_or_else(WorkCaps::from_env);

    let mut cells = Vec::new();
    let mut index = 0u64;
    for &p in &ps {
        for &d in &ds {
            for &u_sel in &us {
                for &v_sel in &vs {
                    let u_max = side_from(cfg.u_pow, u_sel, p);
                    let v_max = side_from(cfg.v_pow, v_sel, p);
                    cells.push(SweepCell { index, p, d, u_max, v_max });
                    index += 1;
                }
            }
        }
    }

    let parallel = cfg.parallel.unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .expect("thread pool");
    let rows: Vec<Vec<Vec<String>>> = pool.install(|| {
        use rayon::prelude::*;
        cells
            .par_iter()
            .map(|cell| sweep_cell_rows(cfg, cell, &kinds, weights_spec, seed, &caps))
            .collect()
    });

    let mut table = CsvTable::new(SWEEP_HEADER.to_vec());
    for cell_rows in rows {
        for row in cell_rows {
            table.push(row);
        }
    }
    Ok(table.to_string())
}

fn sweep_cell_rows(
    cfg: &ExperimentConfig,
    cell: &SweepCell,
    kinds: &[SumKind],
    weights_spec: WeightSpec,
    seed: u64,
    caps: &WorkCaps,
) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (slot, kind) in kinds.iter().enumerate() {
        let mut row = vec![na(); SWEEP_HEADER.len()];
        let setr = |row: &mut Vec<String>, col: &str, value: String| {
            let idx = SWEEP_HEADER.iter().position(|&h| h == col).unwrap();
            row[idx] = value;
        };
        setr(&mut row, "cell", cell.index.to_string());
        setr(&mut row, "p", cell.p.to_string());
        setr(&mut row, "d", cell.d.to_string());
        setr(&mut row, "U", cell.u_max.to_string());
        setr(&mut row, "V", cell.v_max.to_string());
        setr(&mut row, "kind", kind.name().to_string());
        setr(&mut row, "weights", weights_spec.to_string());

        let states = cell.u_max as u128 * cell.v_max as u128;
        if states > caps.naive_states {
            setr(&mut row, "skipped", format!("cell needs {states} terms, over cap"));
            rows.push(row);
            continue;
        }
        let outcome = (|| -> Result<(SumResult, u64, u64)> {
            let ctx = FieldContext::new(cell.p)?;
            let region = ConvexRegion::rectangle(cell.u_max, cell.v_max)?;
            let cell_seed = derive_seed(seed, cell.index * 8 + slot as u64);
            let (a, b) = match weights_spec {
                WeightSpec::Unit => (WeightSeq::unit(cell.u_max), WeightSeq::unit(cell.v_max)),
                WeightSpec::Seeded(_) => (
                    WeightSeq::random(cell.u_max, cell_seed),
                    WeightSeq::random(cell.v_max, cell_seed.wrapping_add(1)),
                ),
            };
            let s = match kind {
                SumKind::S => {
                    let f = match &cfg.f {
                        Some(coeffs) => PolySpec::new(&ctx, coeffs)?,
                        None => PolySpec::monomial(&ctx, cell.d),
                    };
                    eval_s(&ctx, &f, &a, &b, &region)?
                }
                SumKind::SSingle => {
                    let f = match &cfg.f {
                        Some(coeffs) => PolySpec::new(&ctx, coeffs)?,
                        None => PolySpec::monomial(&ctx, cell.d),
                    };
                    eval_s_single(&ctx, &f, &a, &region)?
                }
                SumKind::T => {
                    let f = match &cfg.f {
                        Some(coeffs) => PolySpec::new(&ctx, coeffs)?,
                        None => PolySpec::monomial(&ctx, cell.d),
                    };
                    let (m, j) = cfg.chi.unwrap_or((2, 1));
                    let chi = MultChar::new(&ctx, m, j)?;
                    eval_t(&ctx, &chi, &f, &a, &b, &region)?
                }
                SumKind::K => {
                    let a_coef = cfg.a.unwrap_or(1);
                    let b_coef = cfg.b.unwrap_or(0);
                    eval_k(&ctx, a_coef, b_coef, &a, &b, &region)?
                }
            };
            Ok((s, cell_seed, cell.d))
        })();
        match outcome {
            Ok((s, cell_seed, d)) => {
                let (re, im) = complex_cells(s.value);
                let abs = s.value.norm();
                let p = cell.p as f64;
                let sqrt_duvp =
                    ((d.max(1) * cell.u_max * cell.v_max) as f64 * p).sqrt();
                let thm21_rhs = p.powf(d as f64 / (d as f64 + 1.0))
                    * (cell.u_max as f64).powf(d as f64 / 2.0)
                    + cell.v_max as f64;
                if matches!(weights_spec, WeightSpec::Seeded(_)) {
                    setr(&mut row, "seed", cell_seed.to_string());
                }
                setr(&mut row, "terms", s.terms.to_string());
                setr(&mut row, "excluded", s.excluded.to_string());
                setr(&mut row, "re", re);
                setr(&mut row, "im", im);
                setr(&mut row, "abs", fmt_f64(abs));
                setr(&mut row, "uv", fmt_f64(s.trivial_bound));
                setr(&mut row, "sqrt_duvp", fmt_f64(sqrt_duvp));
                setr(&mut row, "ratio_trivial", fmt_f64(abs / s.trivial_bound));
                setr(&mut row, "ratio_benchmark", fmt_f64(abs / sqrt_duvp));
                setr(&mut row, "thm21_rhs", fmt_f64(thm21_rhs));
                setr(&mut row, "ratio_thm21", fmt_f64(abs / thm21_rhs));
            }
            Err(err) => {
                setr(&mut row, "skipped", err.to_string());
            }
        }
        rows.push(row);
    }
    rows
}

const PIGEONHOLE_HEADER: [&str; 10] =
    ["p", "d", "U", "t", "c", "guarantee", "W", "targets", "g_coeffs", "rho_values"];

/// Coefficient-shrinking report for the configured polynomial.
pub fn cmd_pigeonhole(cfg: &ExperimentConfig) -> Result<String> {
    let p = cfg.require_p()?;
    let ctx = FieldContext::new(p)?;
    let f = PolySpec::new(&ctx, cfg.require_f()?)?;
    let u_max = cfg.require_u()?;
    let shrunk = shrink_poly(&ctx, &f, u_max)?;
    let coeffs: Vec<i64> = f.coeffs().iter().map(|&a| a as i64).collect();
    let reduction = find_t(&ctx, &coeffs, &shrunk.targets);
    let mut table = CsvTable::new(PIGEONHOLE_HEADER.to_vec());
    table.push(vec![
        p.to_string(),
        f.degree().to_string(),
        u_max.to_string(),
        shrunk.t.to_string(),
        fmt_f64(shrunk.quality),
        reduction.guarantee_applies.to_string(),
        fmt_f64(shrunk.w),
        shrunk.targets.iter().map(|t| fmt_f64(*t)).collect::<Vec<_>>().join("|"),
        shrunk.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("|"),
        reduction.per.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("|"),
    ]);
    Ok(table.to_string())
}

const DISCREPANCY_HEADER: [&str; 4] = ["p", "U", "source", "value"];

/// Interval discrepancy of the configured sequence.
pub fn cmd_discrepancy(cfg: &ExperimentConfig) -> Result<String> {
    let p = cfg.require_p()?;
    let ctx = FieldContext::new(p)?;
    let r = sequence_from_config(&ctx, cfg)?;
    let source = if cfg.r_list.is_some() {
        "list".to_string()
    } else {
        format!("f={}", cfg.require_f()?.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    };
    let value = discrepancy(&ctx, &r);
    let mut table = CsvTable::new(DISCREPANCY_HEADER.to_vec());
    table.push(vec![p.to_string(), r.len().to_string(), source, fmt_f64(value)]);
    Ok(table.to_string())
}
