//! Invariant suites: the hard identities, oracle equivalences and
//! unconditional inequalities behind every module, runnable at two size
//! levels from the CLI (`verify --level quick|full`) and reused by the
//! acceptance tests at their mandated grid sizes.
//!
//! Every suite returns the number of checks performed plus a list of
//! failure descriptions; a correct build produces empty failure lists.

use crate::accum::pairwise_sum;
use crate::bounds;
use crate::counting::{
    char_moment, count_i_lambda, count_j_conv, count_j_naive, count_n, count_n_tuples,
    discrepancy, prime_interval, rho_census, WorkCaps,
};
use crate::field::{primes_in, FieldContext, MultChar, PolySpec};
use crate::pigeonhole::{canonical_targets, find_t};
use crate::regions::{ConvexRegion, WeightSeq};
use crate::rng::SplitMix64;
use crate::sums::{eval_k, eval_s, eval_t, incomplete_linear_sum};
use num_complex::Complex64;
use num_rational::Rational64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(format!("level must be quick or full, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, checks: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(describe());
        }
    }
}

fn ctx(p: u64) -> FieldContext {
    FieldContext::new(p).expect("verify suites use odd primes")
}

/// `|sum_{v=0}^{p-1} term(v)|`; with the true additive character this is 0.
pub fn orthogonality_residual_with(p: u64, term: impl Fn(u64) -> Complex64) -> f64 {
    pairwise_sum((0..p).map(term)).norm()
}

/// Additive and multiplicative character orthogonality.
pub fn field_orthogonality(ps: &[u64]) -> SuiteReport {
    let mut report = SuiteReport::new("field-orthogonality");
    for &p in ps {
        let c = ctx(p);
        for coef in [1i64, 2, (p - 1) as i64] {
            let residual = orthogonality_residual_with(p, |v| c.e_p(coef * v as i64));
            report.check(residual <= 1e-9 * p as f64, || {
                format!("additive orthogonality p={p} c={coef}: residual {residual}")
            });
        }
        for chi in MultChar::all_nonprincipal(&c) {
            let residual = pairwise_sum((0..p).map(|x| chi.eval(&c, x))).norm();
            report.check(residual <= 1e-9 * p as f64, || {
                format!(
                    "character orthogonality p={p} j={}: residual {residual}",
                    chi.index()
                )
            });
        }
    }
    report
}

/// Involution of modular inversion and the rho symmetries.
pub fn field_arith(ps: &[u64]) -> SuiteReport {
    let mut report = SuiteReport::new("field-arith");
    for &p in ps {
        let c = ctx(p);
        for x in 1..p {
            let y = c.inv(x).unwrap();
            report.check(c.inv(y).unwrap() == x && c.mul(x, y) == 1, || {
                format!("inv involution p={p} x={x}")
            });
        }
        for a in 0..p as i64 {
            let r = c.rho_int(a);
            let ok = r == c.rho_int(-a) && r == c.rho_int(a + p as i64) && 2 * r <= p;
            report.check(ok, || format!("rho symmetry p={p} a={a}"));
        }
    }
    report
}

/// chi(xy) = chi(x) chi(y), exhaustively.
pub fn chi_multiplicativity(ps: &[u64]) -> SuiteReport {
    let mut report = SuiteReport::new("chi-multiplicativity");
    for &p in ps {
        let c = ctx(p);
        for chi in MultChar::all_nonprincipal(&c) {
            for x in 1..p {
                for y in 1..p {
                    let gap = (chi.eval(&c, c.mul(x, y)) - chi.eval(&c, x) * chi.eval(&c, y))
                        .norm();
                    report.check(gap < 1e-9, || {
                        format!("chi mult p={p} j={} x={x} y={y}: gap {gap}", chi.index())
                    });
                }
            }
        }
    }
    report
}

/// Column, row and membership views agree; rectangle-as-polygon matches
/// the rectangle marker; nonempty columns are contiguous.
pub fn regions_consistency(max_uv: u64) -> SuiteReport {
    let mut report = SuiteReport::new("regions-views");
    let int = |n: i64| Rational64::from_integer(n);
    for (u_max, v_max) in [(max_uv, max_uv), (max_uv, max_uv / 2 + 1), (3, max_uv)] {
        let rect = ConvexRegion::rectangle(u_max, v_max).unwrap();
        let poly = ConvexRegion::from_polygon(
            vec![
                (int(0), int(0)),
                (int(u_max as i64), int(0)),
                (int(u_max as i64), int(v_max as i64)),
                (int(0), int(v_max as i64)),
            ],
            u_max,
            v_max,
        )
        .unwrap();
        report.check(rect.lattice_count() == poly.lattice_count(), || {
            format!("rect vs polygon count at ({u_max},{v_max})")
        });
        for u in 1..=u_max {
            report.check(rect.column_interval(u) == poly.column_interval(u), || {
                format!("rect vs polygon column {u} at ({u_max},{v_max})")
            });
        }
        // triangle u/u_max + v/v_max <= 1
        let tri = ConvexRegion::from_polygon(
            vec![(int(0), int(0)), (int(u_max as i64), int(0)), (int(0), int(v_max as i64))],
            u_max,
            v_max,
        )
        .unwrap();
        // general quadrilateral with fractional vertices
        let quad = ConvexRegion::from_polygon(
            vec![
                (Rational64::new(u_max as i64, 3), int(0)),
                (int(u_max as i64), Rational64::new(v_max as i64, 4)),
                (Rational64::new(2 * u_max as i64, 3), int(v_max as i64)),
                (int(0), Rational64::new(v_max as i64, 2)),
            ],
            u_max,
            v_max,
        )
        .unwrap();
        for reg in [&rect, &tri, &quad] {
            let mut col_total = 0u64;
            for u in 1..=u_max {
                let (x, y) = reg.column_interval(u);
                col_total += y - x;
                for v in 1..=v_max {
                    let by_col = x < v && v <= y;
                    let by_row = {
                        let (rx, ry) = reg.row_interval(v);
                        rx < u && u <= ry
                    };
                    let member = reg.contains(u, v);
                    report.check(by_col == member && by_row == member, || {
                        format!("view mismatch ({u_max},{v_max}) u={u} v={v}")
                    });
                }
            }
            let row_total: u64 = (1..=v_max)
                .map(|v| {
                    let (x, y) = reg.row_interval(v);
                    y - x
                })
                .sum();
            report.check(
                col_total == row_total && col_total == reg.lattice_count(),
                || format!("mass mismatch at ({u_max},{v_max})"),
            );
            let nonempty: Vec<u64> = (1..=u_max)
                .filter(|&u| {
                    let (x, y) = reg.column_interval(u);
                    y > x
                })
                .collect();
            let contiguous = nonempty.windows(2).all(|w| w[1] == w[0] + 1);
            report.check(contiguous, || format!("noncontiguous columns at ({u_max},{v_max})"));
        }
    }
    report
}

fn random_poly(gen: &mut SplitMix64, c: &FieldContext, d: u64) -> PolySpec {
    let p = c.p();
    let mut coeffs: Vec<i64> = (0..=d).map(|_| gen.next_below(p) as i64).collect();
    let lead = coeffs.last_mut().unwrap();
    *lead = 1 + gen.next_below(p - 1) as i64;
    PolySpec::new(c, &coeffs).unwrap()
}

/// Unconditional Cauchy-Schwarz bounds on full rectangles:
/// `|S| <= sqrt(d U V p)` and `|T| <= sqrt(2 d U V p)`.
pub fn hard_bilinear_bounds(instances: u64, p_cap: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("hard-bilinear-bounds");
    let primes: Vec<u64> = primes_in(5, p_cap);
    let mut gen = SplitMix64::new(seed);
    for i in 0..instances {
        let p = primes[gen.next_below(primes.len() as u64) as usize];
        let c = ctx(p);
        let d = 1 + gen.next_below(4);
        let f = random_poly(&mut gen, &c, d);
        let u_max = 1 + gen.next_below(p - 1);
        let v_max = 1 + gen.next_below(p - 1);
        let a = WeightSeq::random(u_max, gen.next_u64());
        let b = WeightSeq::random(v_max, gen.next_u64());
        let region = ConvexRegion::rectangle(u_max, v_max).unwrap();
        let duvp = (d * u_max * v_max * p) as f64;
        let s = eval_s(&c, &f, &a, &b, &region).unwrap();
        report.check(s.value.norm() <= duvp.sqrt() + 1e-6, || {
            format!(
                "S bound violated: instance {i} p={p} d={d} U={u_max} V={v_max}: |S|={} > {}",
                s.value.norm(),
                duvp.sqrt()
            )
        });
        let chi = MultChar::new(&c, p - 1, 1 + gen.next_below(p - 2)).unwrap();
        let t = eval_t(&c, &chi, &f, &a, &b, &region).unwrap();
        report.check(t.value.norm() <= (2.0 * duvp).sqrt() + 1e-6, || {
            format!(
                "T bound violated: instance {i} p={p} d={d} U={u_max} V={v_max}: |T|={} > {}",
                t.value.norm(),
                (2.0 * duvp).sqrt()
            )
        });
    }
    report
}

/// `|sum_{v=X+1}^{Y} e_p(a v)| <= min(Y-X, p / (2 rho(a)))`, exhaustively
/// over residues and windows for each prime up to the cap, plus randomized
/// spot checks at the listed larger primes.
pub fn incomplete_bound_exhaustive(p_cap: u64) -> SuiteReport {
    let mut report = SuiteReport::new("incomplete-sum-bound");
    for p in primes_in(3, p_cap) {
        let c = ctx(p);
        for a in 1..p {
            let rho = c.rho_int(a as i64) as f64;
            for x in 0..p {
                for y in (x + 1)..=p {
                    let value = incomplete_linear_sum(&c, a as i64, 1, x, y).unwrap();
                    let cap = ((y - x) as f64).min(p as f64 / (2.0 * rho));
                    report.check(value.norm() <= cap + 1e-6, || {
                        format!(
                            "incomplete bound p={p} a={a} X={x} Y={y}: |sum|={} > {cap}",
                            value.norm()
                        )
                    });
                }
            }
        }
    }
    report
}

/// Randomized form of the incomplete-sum bound for primes beyond the
/// exhaustive cap, with fractional phases `num/den`.
pub fn incomplete_bound_randomized(ps: &[u64], samples_per_p: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("incomplete-sum-bound-randomized");
    let mut gen = SplitMix64::new(seed);
    for &p in ps {
        let c = ctx(p);
        for _ in 0..samples_per_p {
            let num = (1 + gen.next_below(p - 1)) as i64;
            let den = (1 + gen.next_below(p - 1)) as i64;
            let x = gen.next_below(p);
            let y = x + 1 + gen.next_below(p - x);
            let value = incomplete_linear_sum(&c, num, den, x, y).unwrap();
            let rho = c.rho_frac(num, den).unwrap() as f64;
            let cap = ((y - x) as f64).min(p as f64 / (2.0 * rho));
            report.check(value.norm() <= cap + 1e-6, || {
                format!(
                    "incomplete bound p={p} alpha={num}/{den} X={x} Y={y}: |sum|={} > {cap}",
                    value.norm()
                )
            });
        }
    }
    report
}

/// Sum over a region equals the sum over a vertical slicing of it.
pub fn sums_additivity(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("sums-additivity");
    let mut gen = SplitMix64::new(seed);
    let int = |n: i64| Rational64::from_integer(n);
    for p in [13u64, 31, 101] {
        let c = ctx(p);
        let d = 1 + gen.next_below(3);
        let f = random_poly(&mut gen, &c, d);
        let u_max = 4 + gen.next_below(p.min(24) - 4);
        let v_max = 3 + gen.next_below(p.min(16) - 3);
        let a = WeightSeq::random(u_max, gen.next_u64());
        let b = WeightSeq::random(v_max, gen.next_u64());
        let whole = ConvexRegion::rectangle(u_max, v_max).unwrap();
        let mid = 1 + gen.next_below(u_max - 1);
        // cut at mid + 1/2 so the boundary column is not double counted
        let cut = Rational64::new(2 * mid as i64 + 1, 2);
        let slab = |lo: Rational64, hi: Rational64| {
            ConvexRegion::from_polygon(
                vec![
                    (lo, int(0)),
                    (hi, int(0)),
                    (hi, int(v_max as i64)),
                    (lo, int(v_max as i64)),
                ],
                u_max,
                v_max,
            )
            .unwrap()
        };
        let s_whole = eval_s(&c, &f, &a, &b, &whole).unwrap();
        let s_left = eval_s(&c, &f, &a, &b, &slab(int(0), cut)).unwrap();
        let s_right = eval_s(&c, &f, &a, &b, &slab(cut, int(u_max as i64))).unwrap();
        let gap = (s_left.value + s_right.value - s_whole.value).norm();
        report.check(
            s_left.terms + s_right.terms == s_whole.terms
                && gap <= 1e-9 * s_whole.terms.max(1) as f64,
            || format!("slicing p={p} U={u_max} V={v_max} mid={mid}: gap {gap}"),
        );
    }
    report
}

/// `eval_k(a, b)` is `eval_s` with `f = aX + b`, bitwise.
pub fn k_equals_s(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("k-equals-s");
    let mut gen = SplitMix64::new(seed);
    for p in [11u64, 101, 499] {
        let c = ctx(p);
        let a_coef = (1 + gen.next_below(p - 1)) as i64;
        let b_coef = gen.next_below(p) as i64;
        let u_max = 1 + gen.next_below(p.min(40) - 1);
        let v_max = 1 + gen.next_below(p.min(40) - 1);
        let a = WeightSeq::random(u_max, gen.next_u64());
        let b = WeightSeq::random(v_max, gen.next_u64());
        let region = ConvexRegion::rectangle(u_max, v_max).unwrap();
        let via_k = eval_k(&c, a_coef, b_coef, &a, &b, &region).unwrap();
        let f = PolySpec::linear(&c, a_coef, b_coef).unwrap();
        let via_s = eval_s(&c, &f, &a, &b, &region).unwrap();
        report.check(
            via_k.value.re.to_bits() == via_s.value.re.to_bits()
                && via_k.value.im.to_bits() == via_s.value.im.to_bits()
                && via_k.terms == via_s.terms
                && via_k.excluded == via_s.excluded,
            || format!("K != S bitwise at p={p} a={a_coef} b={b_coef}"),
        );
    }
    report
}

/// Convolution J counter equals the naive enumeration on a grid.
pub fn j_oracle_grid(
    ps: &[u64],
    ds: &[u64],
    ks: &[u64],
    t_cap: u64,
    abs: &[(i64, i64)],
) -> SuiteReport {
    let mut report = SuiteReport::new("j-oracle");
    let caps = WorkCaps::default();
    for &p in ps {
        let c = ctx(p);
        for &d in ds {
            for &k in ks {
                for t_max in 1..=t_cap {
                    for &(a, b) in abs {
                        let naive = count_j_naive(&c, d, k, a, b, t_max, &caps).unwrap();
                        let conv = count_j_conv(&c, d, k, a, b, t_max, &caps).unwrap();
                        report.check(naive.count == conv.count, || {
                            format!(
                                "J mismatch p={p} d={d} k={k} T={t_max} (a,b)=({a},{b}): naive {} conv {}",
                                naive.count, conv.count
                            )
                        });
                    }
                }
            }
        }
    }
    report
}

/// 6-tuple second moment equals direct enumeration, and the census mass
/// equals `#L * U * V`.
pub fn tuples_oracle_grid(p_cap: u64, uv_cap: u64, ls: &[u64], seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("tuples-oracle");
    let mut gen = SplitMix64::new(seed);
    for p in primes_in(3, p_cap) {
        let c = ctx(p);
        for &l in ls {
            let primes = match prime_interval(&c, l) {
                Ok(ps) => ps,
                Err(_) => continue, // no usable primes below this p
            };
            for u_len in 1..=uv_cap {
                for v_max in 1..=uv_cap {
                    let r: Vec<u64> = (0..u_len).map(|_| gen.next_below(p)).collect();
                    let hist = count_i_lambda(&c, &r, l, v_max).unwrap();
                    report.check(
                        hist.total() == primes.len() as u64 * u_len * v_max,
                        || format!("census mass p={p} L={l} U={u_len} V={v_max}"),
                    );
                    let fast = count_n_tuples(&c, &r, l, v_max).unwrap().count;
                    let mut brute = 0u128;
                    for &l1 in &primes {
                        for &l2 in &primes {
                            for &r1 in &r {
                                for &r2 in &r {
                                    for v1 in 1..=v_max {
                                        for v2 in 1..=v_max {
                                            let lhs =
                                                c.mul(c.add(v1 % p, r1), c.inv(l1 % p).unwrap());
                                            let rhs =
                                                c.mul(c.add(v2 % p, r2), c.inv(l2 % p).unwrap());
                                            if lhs == rhs {
                                                brute += 1;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                    report.check(fast == brute, || {
                        format!(
                            "6-tuple mismatch p={p} L={l} U={u_len} V={v_max}: fast {fast} brute {brute}"
                        )
                    });
                    let floor = (primes.len() as u128) * (u_len as u128) * (v_max as u128);
                    report.check(fast >= floor, || {
                        format!("diagonal floor p={p} L={l} U={u_len} V={v_max}")
                    });
                }
            }
        }
    }
    report
}

/// `char_moment(chi, K, 1) = K (p - K)` for every nonprincipal chi and
/// every K.
pub fn char_moment_identity(ps: &[u64]) -> SuiteReport {
    let mut report = SuiteReport::new("char-moment-identity");
    for &p in ps {
        let c = ctx(p);
        for chi in MultChar::all_nonprincipal(&c) {
            for k_len in 1..p {
                let expect = (k_len * (p - k_len)) as f64;
                let got = char_moment(&c, &chi, k_len, 1);
                report.check((got - expect).abs() <= 1e-6 * expect.max(1.0), || {
                    format!(
                        "moment p={p} j={} K={k_len}: got {got}, want {expect}",
                        chi.index()
                    )
                });
            }
        }
    }
    report
}

/// Partition identity of the dyadic rho census.
pub fn rho_partition_grid(ps: &[u64], seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("rho-census-partition");
    let mut gen = SplitMix64::new(seed);
    for &p in ps {
        let c = ctx(p);
        for d in 1..=3u64 {
            let f = random_poly(&mut gen, &c, d);
            let u_max = 1 + gen.next_below(p - 1);
            let v_max = 1 + gen.next_below(p - 1);
            let census = rho_census(&c, &f, u_max, v_max);
            report.check(census.classified_total() == u_max, || {
                format!(
                    "rho partition p={p} d={d} U={u_max} V={v_max}: {} != {u_max}",
                    census.classified_total()
                )
            });
        }
        // the census over all units sums to p - 1
        let f = PolySpec::monomial(&c, 1);
        let census = rho_census(&c, &f, p - 1, p - 1);
        report.check(census.classified_total() == p - 1 && census.excluded == 0, || {
            format!("unit census p={p}")
        });
    }
    report
}

/// O(U) box counter equals brute-force enumeration.
pub fn nf_oracle_grid(p_cap: u64, samples_per_p: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("nf-oracle");
    let mut gen = SplitMix64::new(seed);
    for p in primes_in(5, p_cap) {
        let c = ctx(p);
        for _ in 0..samples_per_p {
            let d = 1 + gen.next_below(3);
            let f = random_poly(&mut gen, &c, d);
            let u_max = 1 + gen.next_below(p - 1);
            let z_max = 1 + gen.next_below(p - 1);
            let fast = count_n(&c, &f, u_max, z_max).count;
            let mut brute = 0u128;
            for u in 1..=u_max {
                for z in 1..=z_max {
                    if c.mul(f.eval(&c, u), z) == 1 {
                        brute += 1;
                    }
                }
            }
            report.check(fast == brute, || {
                format!("N_f mismatch p={p} d={d} U={u_max} Z={z_max}: {fast} vs {brute}")
            });
        }
    }
    report
}

/// For f = X the box count stays near UZ/p, within the generous reference
/// envelope `c_ref * sqrt(p) (ln p)^2`.
pub fn weil_diagnostic(ps: &[u64], samples_per_p: u64, seed: u64, c_ref: f64) -> SuiteReport {
    let mut report = SuiteReport::new("weil-diagnostic");
    let mut gen = SplitMix64::new(seed);
    for &p in ps {
        let c = ctx(p);
        let f = PolySpec::monomial(&c, 1);
        let envelope = c_ref * (p as f64).sqrt() * (p as f64).ln().powi(2);
        for _ in 0..samples_per_p {
            let u_max = 1 + gen.next_below(p - 1);
            let z_max = 1 + gen.next_below(p - 1);
            let n = count_n(&c, &f, u_max, z_max).count as f64;
            let dev = (n - (u_max as f64) * (z_max as f64) / p as f64).abs();
            report.check(dev <= envelope, || {
                format!("Weil deviation p={p} U={u_max} Z={z_max}: {dev} > {envelope}")
            });
        }
    }
    report
}

/// Dirichlet existence: with `prod ceil(T_i) >= p^d` the minimizer found by
/// the exhaustive search has quality c <= 2 (the clean pigeonhole constant
/// is 1 up to ceiling slack). Returns the empirical maximum quality.
pub fn pigeonhole_existence(
    ps: &[u64],
    d_max: u64,
    tuples_per_cell: u64,
    seed: u64,
) -> (SuiteReport, f64) {
    let mut report = SuiteReport::new("pigeonhole-existence");
    let mut gen = SplitMix64::new(seed);
    let mut max_c = 0.0f64;
    for &p in ps {
        let c = ctx(p);
        for d in 1..=d_max {
            // equal split T_i = p^{d/(d+1)}: product exactly p^d
            let equal = (p as f64).powf(d as f64 / (d as f64 + 1.0));
            let targets = vec![equal; d as usize + 1];
            let ceil_product: f64 = targets.iter().map(|t| t.ceil()).product();
            assert!(ceil_product >= (p as f64).powi(d as i32));
            for _ in 0..tuples_per_cell {
                let coeffs: Vec<i64> = (0..=d).map(|_| gen.next_below(p) as i64).collect();
                let r = find_t(&c, &coeffs, &targets);
                max_c = max_c.max(r.c);
                report.check(r.c <= 2.0, || {
                    format!("pigeonhole p={p} d={d} coeffs={coeffs:?}: c = {}", r.c)
                });
            }
        }
        // canonical targets where the small-U precondition admits them
        for d in 1..=d_max {
            for u_max in 2..=4u64 {
                if let Ok((_, targets)) = canonical_targets(&c, d, u_max) {
                    let coeffs: Vec<i64> = (0..=d).map(|_| gen.next_below(p) as i64).collect();
                    let r = find_t(&c, &coeffs, &targets);
                    max_c = max_c.max(r.c);
                    report.check(r.c <= 2.0, || {
                        format!("canonical pigeonhole p={p} d={d} U={u_max}: c = {}", r.c)
                    });
                }
            }
        }
    }
    (report, max_c)
}

/// Canonical targets multiply to p^d within 1e-9 relative.
pub fn canonical_target_products(ps: &[u64]) -> SuiteReport {
    let mut report = SuiteReport::new("canonical-target-product");
    for &p in ps {
        let c = ctx(p);
        for d in 1..=3u64 {
            for u_max in 1..=6u64 {
                if let Ok((w, targets)) = canonical_targets(&c, d, u_max) {
                    let product: f64 = targets.iter().product();
                    let expect = (p as f64).powi(d as i32);
                    report.check(((product - expect) / expect).abs() <= 1e-9, || {
                        format!("product drift p={p} d={d} U={u_max}")
                    });
                    report.check((targets[0] - w).abs() <= 1e-9 * w, || {
                        format!("T_0 != W at p={p} d={d} U={u_max}")
                    });
                }
            }
        }
    }
    report
}

/// The comparison table reproduces the reference values exactly.
pub fn bounds_table() -> SuiteReport {
    let mut report = SuiteReport::new("bounds-table");
    report.check(bounds::table_matches_reference(64), || {
        "comparison table does not reproduce the reference rows".to_string()
    });
    let rows = bounds::compare_table(&bounds::reference_rows(), 64);
    for (i, row) in rows.iter().enumerate() {
        report.check(row.entries.iter().filter(|e| e.winner).count() == 1, || {
            format!("row {i}: winner star not unique")
        });
    }
    report
}

/// Every exponent function is nondecreasing in alpha and beta on a grid.
pub fn bounds_monotonicity(step_den: i64) -> SuiteReport {
    let mut report = SuiteReport::new("bounds-monotonicity");
    let rat = |n: i64, d: i64| Rational64::new(n, d);
    let step = rat(1, step_den);
    type ExponentFn = Box<dyn Fn(Rational64, Rational64) -> Rational64>;
    let fns: Vec<(&'static str, ExponentFn)> = vec![
        ("trivial", Box::new(bounds::trivial_bilinear)),
        ("thm21-d1", Box::new(|a, b| bounds::thm_s_pure(1, a, b).unwrap())),
        ("thm21-d2", Box::new(|a, b| bounds::thm_s_pure(2, a, b).unwrap())),
        ("cor22-d3", Box::new(|a, b| bounds::cor_slice(3, a, b).unwrap())),
        ("thm23-k7", Box::new(|a, b| bounds::thm_sabd(7, a, b).unwrap())),
        ("thm24", Box::new(bounds::thm_k_mix1)),
        ("thm25", Box::new(bounds::thm_k_mix2)),
        ("kpure", Box::new(bounds::k_pure)),
        ("kzero", Box::new(bounds::k_zero)),
    ];
    for (name, f) in &fns {
        for i in 0..step_den {
            for j in 0..step_den {
                let (a, b) = (rat(i, step_den), rat(j, step_den));
                report.check(f(a + step, b) >= f(a, b) && f(a, b + step) >= f(a, b), || {
                    format!("{name} not monotone at ({a},{b})")
                });
            }
        }
    }
    report
}

/// Complete-range identities: `S` over the full nonzero rectangle is
/// `-(p-1)` and `T` over complete residue ranges vanishes.
pub fn complete_sum_identities(ps: &[u64]) -> SuiteReport {
    let mut report = SuiteReport::new("complete-sum-identities");
    for &p in ps {
        let c = ctx(p);
        let f = PolySpec::monomial(&c, 1);
        let unit_u = WeightSeq::unit(p - 1);
        let region = ConvexRegion::rectangle(p - 1, p - 1).unwrap();
        let s = eval_s(&c, &f, &unit_u, &unit_u, &region).unwrap();
        let gap = (s.value - Complex64::new(-((p - 1) as f64), 0.0)).norm();
        report.check(gap <= 1e-6, || format!("complete S p={p}: gap {gap}"));

        let chi = MultChar::quadratic(&c);
        let unit_p = WeightSeq::unit(p);
        let full = ConvexRegion::rectangle(p, p).unwrap();
        let t = eval_t(&c, &chi, &f, &unit_p, &unit_p, &full).unwrap();
        report.check(t.value.norm() <= 1e-6 * p as f64, || {
            format!("complete T p={p}: |T| = {}", t.value.norm())
        });
    }
    report
}

/// Equidistributed inputs score below the worst case.
pub fn discrepancy_trend(p: u64) -> SuiteReport {
    let mut report = SuiteReport::new("discrepancy-trend");
    let c = ctx(p);
    let u_len = (p as f64).powf(0.4).ceil() as u64;
    let cubic: Vec<u64> = (1..=u_len).map(|u| c.mul(c.mul(u, u), u)).collect();
    let d_cubic = discrepancy(&c, &cubic);
    let constant = vec![1u64; u_len as usize];
    let d_const = discrepancy(&c, &constant);
    report.check(d_cubic < d_const, || {
        format!("cubic discrepancy {d_cubic} not below constant {d_const}")
    });
    report.check((d_const - (1.0 - 1.0 / p as f64)).abs() < 1e-9, || {
        format!("constant-sequence discrepancy {d_const}")
    });
    report
}

/// All suites at the given level, in a fixed order.
pub fn run_all(level: Level) -> Vec<SuiteReport> {
    let quick = level == Level::Quick;
    let mut reports = Vec::new();
    reports.push(field_orthogonality(if quick {
        &[5, 7, 11, 13]
    } else {
        &[5, 7, 11, 13, 101, 499]
    }));
    reports.push(field_arith(if quick { &[5, 13, 101] } else { &[5, 13, 101, 1009] }));
    reports.push(chi_multiplicativity(if quick {
        &[5, 7, 13]
    } else {
        // every prime up to 101
        &[5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
            89, 97, 101]
    }));
    reports.push(regions_consistency(if quick { 16 } else { 64 }));
    reports.push(hard_bilinear_bounds(
        if quick { 30 } else { 200 },
        if quick { 199 } else { 499 },
        2024,
    ));
    reports.push(incomplete_bound_exhaustive(if quick { 31 } else { 101 }));
    reports.push(incomplete_bound_randomized(
        if quick { &[499] } else { &[499, 1009, 10_007] },
        if quick { 50 } else { 300 },
        2026,
    ));
    reports.push(sums_additivity(11));
    reports.push(k_equals_s(12));
    reports.push(complete_sum_identities(if quick {
        &[11, 101]
    } else {
        &[11, 101, 1009]
    }));
    reports.push(j_oracle_grid(
        if quick { &[7, 11] } else { &[7, 11, 13] },
        if quick { &[1, 2] } else { &[1, 2, 3] },
        &[1, 2],
        if quick { 4 } else { 6 },
        &[(1, 0), (1, 1), (2, 3)],
    ));
    reports.push(tuples_oracle_grid(
        if quick { 13 } else { 31 },
        if quick { 3 } else { 4 },
        &[2, 3],
        2025,
    ));
    reports.push(char_moment_identity(if quick {
        &[5, 7, 11, 13]
    } else {
        // every prime up to 101
        &[5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
            89, 97, 101]
    }));
    reports.push(rho_partition_grid(if quick { &[11, 101] } else { &[11, 101, 1009] }, 41));
    reports.push(nf_oracle_grid(if quick { 31 } else { 101 }, if quick { 2 } else { 5 }, 42));
    reports.push(weil_diagnostic(
        if quick { &[101] } else { &[101, 211, 401, 1009] },
        if quick { 3 } else { 8 },
        43,
        10.0,
    ));
    let (pigeon, _max_c) = pigeonhole_existence(
        if quick { &[11, 31, 61, 97] } else { &[11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] },
        3,
        if quick { 10 } else { 50 },
        44,
    );
    reports.push(pigeon);
    reports.push(canonical_target_products(&[11, 101, 1009, 10_007]));
    reports.push(bounds_table());
    reports.push(bounds_monotonicity(if quick { 8 } else { 40 }));
    reports.push(discrepancy_trend(if quick { 1009 } else { 10_007 }));
    reports
}
