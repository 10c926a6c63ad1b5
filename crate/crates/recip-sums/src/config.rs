//! Experiment configuration: flat `key = value` text with `#` comments,
//! comma-separated lists, rationals as `num/den`. Emitting and re-parsing
//! a config yields an identical value, which keeps run records
//! reproducible from their inputs alone.

use crate::error::{Error, Result};
use crate::regions::parse_rational;
use num_rational::Rational64;
use std::fmt::Write as _;

/// Region selector: full rectangle or a polygon vertex file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionSpec {
    Rect { u: u64, v: u64 },
    PolygonFile(String),
}

impl std::fmt::Display for RegionSpec {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegionSpec::Rect { u, v } => write!(out, "rect:{u},{v}"),
            RegionSpec::PolygonFile(path) => write!(out, "polygon:{path}"),
        }
    }
}

/// Weight selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSpec {
    Unit,
    Seeded(u64),
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightSpec::Unit => write!(out, "unit"),
            WeightSpec::Seeded(s) => write!(out, "seed:{s}"),
        }
    }
}

/// Which sums `eval` computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    S,
    SSingle,
    T,
    K,
}

impl SumKind {
    pub fn name(&self) -> &'static str {
        match self {
            SumKind::S => "S",
            SumKind::SSingle => "S1",
            SumKind::T => "T",
            SumKind::K => "K",
        }
    }
}

/// Which counters `count` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    J,
    Nf,
    Tuples,
    Moment,
    Rho,
}

impl CountKind {
    pub fn name(&self) -> &'static str {
        match self {
            CountKind::J => "J",
            CountKind::Nf => "Nf",
            CountKind::Tuples => "tuples",
            CountKind::Moment => "moment",
            CountKind::Rho => "rho",
        }
    }
}

/// Parsed experiment configuration. Every field is optional; each
/// subcommand validates the keys it needs and reports the missing one by
/// name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub p: Option<u64>,
    pub p_list: Option<Vec<u64>>,
    pub f: Option<Vec<i64>>,
    pub region: Option<RegionSpec>,
    pub weights: Option<WeightSpec>,
    pub seed: Option<u64>,
    pub sums: Option<Vec<SumKind>>,
    pub counts: Option<Vec<CountKind>>,
    pub chi: Option<(u64, u64)>,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub d: Option<u64>,
    pub d_list: Option<Vec<u64>>,
    pub k: Option<u64>,
    pub k_list: Option<Vec<u64>>,
    pub t: Option<u64>,
    pub t_list: Option<Vec<u64>>,
    pub u: Option<u64>,
    pub u_list: Option<Vec<u64>>,
    pub u_pow: Option<f64>,
    pub v: Option<u64>,
    pub v_list: Option<Vec<u64>>,
    pub v_pow: Option<f64>,
    pub z: Option<u64>,
    pub z_list: Option<Vec<u64>>,
    pub l: Option<u64>,
    pub l_list: Option<Vec<u64>>,
    pub nu: Option<u64>,
    pub ab_list: Option<Vec<(i64, i64)>>,
    pub r_list: Option<Vec<i64>>,
    pub rows: Option<Vec<(Rational64, Rational64)>>,
    pub kmax: Option<u64>,
    pub out: Option<String>,
    pub workcap: Option<String>,
    pub parallel: Option<usize>,
}

fn parse_scalar<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config {
        line,
        msg: format!("bad value `{value}` for key `{key}`"),
    })
}

fn parse_list<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|part| parse_scalar(part, line, key))
        .collect()
}

fn parse_pair_list(value: &str, line: usize, key: &str) -> Result<Vec<(i64, i64)>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|part| {
            let (a, b) = part.split_once(':').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected `a:b` in `{key}`, got `{part}`"),
            })?;
            Ok((parse_scalar(a, line, key)?, parse_scalar(b, line, key)?))
        })
        .collect()
}

fn parse_rational_pairs(value: &str, line: usize) -> Result<Vec<(Rational64, Rational64)>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|part| {
            let (a, b) = part.split_once(':').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected `alpha:beta`, got `{part}`"),
            })?;
            Ok((parse_rational(a.trim(), line)?, parse_rational(b.trim(), line)?))
        })
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped.split_once('=').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected `key = value`, got `{raw}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::Config { line, msg: format!("duplicate key `{key}`") });
            }
            match key {
                "p" => cfg.p = Some(parse_scalar(value, line, key)?),
                "p_list" => cfg.p_list = Some(parse_list(value, line, key)?),
                "f" => cfg.f = Some(parse_list(value, line, key)?),
                "region" => {
                    cfg.region = Some(if let Some(rest) = value.strip_prefix("rect:") {
                        let parts: Vec<u64> = parse_list(rest, line, key)?;
                        if parts.len() != 2 {
                            return Err(Error::Config {
                                line,
                                msg: format!("region rect needs `rect:U,V`, got `{value}`"),
                            });
                        }
                        RegionSpec::Rect { u: parts[0], v: parts[1] }
                    } else if let Some(path) = value.strip_prefix("polygon:") {
                        RegionSpec::PolygonFile(path.trim().to_string())
                    } else {
                        return Err(Error::Config {
                            line,
                            msg: format!("region must be `rect:U,V` or `polygon:PATH`, got `{value}`"),
                        });
                    });
                }
                "weights" => {
                    cfg.weights = Some(if value == "unit" {
                        WeightSpec::Unit
                    } else if let Some(seed) = value.strip_prefix("seed:") {
                        WeightSpec::Seeded(parse_scalar(seed, line, key)?)
                    } else {
                        return Err(Error::Config {
                            line,
                            msg: format!("weights must be `unit` or `seed:N`, got `{value}`"),
                        });
                    });
                }
                "seed" => cfg.seed = Some(parse_scalar(value, line, key)?),
                "sums" => {
                    let mut kinds = Vec::new();
                    for part in value.split(',') {
                        kinds.push(match part.trim() {
                            "S" => SumKind::S,
                            "S1" => SumKind::SSingle,
                            "T" => SumKind::T,
                            "K" => SumKind::K,
                            other => {
                                return Err(Error::Config {
                                    line,
                                    msg: format!("unknown sum kind `{other}` (S, S1, T, K)"),
                                })
                            }
                        });
                    }
                    cfg.sums = Some(kinds);
                }
                "counts" => {
                    let mut kinds = Vec::new();
                    for part in value.split(',') {
                        kinds.push(match part.trim() {
                            "J" => CountKind::J,
                            "Nf" => CountKind::Nf,
                            "tuples" => CountKind::Tuples,
                            "moment" => CountKind::Moment,
                            "rho" => CountKind::Rho,
                            other => {
                                return Err(Error::Config {
                                    line,
                                    msg: format!(
                                        "unknown count kind `{other}` (J, Nf, tuples, moment, rho)"
                                    ),
                                })
                            }
                        });
                    }
                    cfg.counts = Some(kinds);
                }
                "chi" => {
                    let parts: Vec<u64> = parse_list(value, line, key)?;
                    if parts.len() != 2 {
                        return Err(Error::Config {
                            line,
                            msg: format!("chi needs `m,j`, got `{value}`"),
                        });
                    }
                    cfg.chi = Some((parts[0], parts[1]));
                }
                "a" => cfg.a = Some(parse_scalar(value, line, key)?),
                "b" => cfg.b = Some(parse_scalar(value, line, key)?),
                "d" => cfg.d = Some(parse_scalar(value, line, key)?),
                "d_list" => cfg.d_list = Some(parse_list(value, line, key)?),
                "k" => cfg.k = Some(parse_scalar(value, line, key)?),
                "k_list" => cfg.k_list = Some(parse_list(value, line, key)?),
                "t" => cfg.t = Some(parse_scalar(value, line, key)?),
                "t_list" => cfg.t_list = Some(parse_list(value, line, key)?),
                "u" => cfg.u = Some(parse_scalar(value, line, key)?),
                "u_list" => cfg.u_list = Some(parse_list(value, line, key)?),
                "u_pow" => cfg.u_pow = Some(parse_scalar(value, line, key)?),
                "v" => cfg.v = Some(parse_scalar(value, line, key)?),
                "v_list" => cfg.v_list = Some(parse_list(value, line, key)?),
                "v_pow" => cfg.v_pow = Some(parse_scalar(value, line, key)?),
                "z" => cfg.z = Some(parse_scalar(value, line, key)?),
                "z_list" => cfg.z_list = Some(parse_list(value, line, key)?),
                "l" => cfg.l = Some(parse_scalar(value, line, key)?),
                "l_list" => cfg.l_list = Some(parse_list(value, line, key)?),
                "nu" => cfg.nu = Some(parse_scalar(value, line, key)?),
                "ab_list" => cfg.ab_list = Some(parse_pair_list(value, line, key)?),
                "r_list" => cfg.r_list = Some(parse_list(value, line, key)?),
                "rows" => cfg.rows = Some(parse_rational_pairs(value, line)?),
                "kmax" => cfg.kmax = Some(parse_scalar(value, line, key)?),
                "out" => cfg.out = Some(value.to_string()),
                "workcap" => cfg.workcap = Some(value.to_string()),
                "parallel" => cfg.parallel = Some(parse_scalar(value, line, key)?),
                other => {
                    return Err(Error::Config { line, msg: format!("unknown key `{other}`") })
                }
            }
        }
        Ok(cfg)
    }

    pub fn parse_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Emits the config in the canonical key order; `parse(emit(c)) == c`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let mut kv = |key: &str, value: String| {
            let _ = writeln!(out, "{key} = {value}");
        };
        if let Some(p) = self.p {
            kv("p", p.to_string());
        }
        if let Some(list) = &self.p_list {
            kv("p_list", join(list));
        }
        if let Some(f) = &self.f {
            kv("f", join(f));
        }
        if let Some(region) = &self.region {
            kv("region", region.to_string());
        }
        if let Some(w) = &self.weights {
            kv("weights", w.to_string());
        }
        if let Some(seed) = self.seed {
            kv("seed", seed.to_string());
        }
        if let Some(sums) = &self.sums {
            kv("sums", sums.iter().map(|s| s.name()).collect::<Vec<_>>().join(","));
        }
        if let Some(counts) = &self.counts {
            kv("counts", counts.iter().map(|c| c.name()).collect::<Vec<_>>().join(","));
        }
        if let Some((m, j)) = self.chi {
            kv("chi", format!("{m},{j}"));
        }
        if let Some(a) = self.a {
            kv("a", a.to_string());
        }
        if let Some(b) = self.b {
            kv("b", b.to_string());
        }
        if let Some(d) = self.d {
            kv("d", d.to_string());
        }
        if let Some(list) = &self.d_list {
            kv("d_list", join(list));
        }
        if let Some(k) = self.k {
            kv("k", k.to_string());
        }
        if let Some(list) = &self.k_list {
            kv("k_list", join(list));
        }
        if let Some(t) = self.t {
            kv("t", t.to_string());
        }
        if let Some(list) = &self.t_list {
            kv("t_list", join(list));
        }
        if let Some(u) = self.u {
            kv("u", u.to_string());
        }
        if let Some(list) = &self.u_list {
            kv("u_list", join(list));
        }
        if let Some(pow) = self.u_pow {
            kv("u_pow", pow.to_string());
        }
        if let Some(v) = self.v {
            kv("v", v.to_string());
        }
        if let Some(list) = &self.v_list {
            kv("v_list", join(list));
        }
        if let Some(pow) = self.v_pow {
            kv("v_pow", pow.to_string());
        }
        if let Some(z) = self.z {
            kv("z", z.to_string());
        }
        if let Some(list) = &self.z_list {
            kv("z_list", join(list));
        }
        if let Some(l) = self.l {
            kv("l", l.to_string());
        }
        if let Some(list) = &self.l_list {
            kv("l_list", join(list));
        }
        if let Some(nu) = self.nu {
            kv("nu", nu.to_string());
        }
        if let Some(ab) = &self.ab_list {
            kv(
                "ab_list",
                ab.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(","),
            );
        }
        if let Some(r) = &self.r_list {
            kv("r_list", join(r));
        }
        if let Some(rows) = &self.rows {
            kv(
                "rows",
                rows.iter()
                    .map(|(a, b)| format!("{a}:{b}"))
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        if let Some(kmax) = self.kmax {
            kv("kmax", kmax.to_string());
        }
        if let Some(out_path) = &self.out {
            kv("out", out_path.clone());
        }
        if let Some(caps) = &self.workcap {
            kv("workcap", caps.clone());
        }
        if let Some(par) = self.parallel {
            kv("parallel", par.to_string());
        }
        out
    }

    pub fn require_p(&self) -> Result<u64> {
        self.p.ok_or(Error::ConfigMissing("p"))
    }

    pub fn require_f(&self) -> Result<&[i64]> {
        self.f.as_deref().ok_or(Error::ConfigMissing("f"))
    }

    pub fn require_u(&self) -> Result<u64> {
        self.u.ok_or(Error::ConfigMissing("u"))
    }
}

fn join<T: std::fmt::Display>(list: &[T]) -> String {
    list.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
