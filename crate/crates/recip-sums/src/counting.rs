//! Exact counters for congruence-solution quantities: alternating
//! reciprocal-power congruences J_{d,k}, reciprocal box counts N_f(U,Z),
//! the I(lambda) census and its 6-tuple second moment, moments of short
//! character sums, dyadic rho censuses, and the interval-discrepancy of a
//! residue sequence.
//!
//! Each counter that a cited bound covers returns a [`CountReport`] whose
//! `bound_rhs` is the bound's right side with all p^{o(1)} factors and
//! implied constants dropped; the ratio is a diagnostic for trend plots,
//! never a hard assertion.

use crate::accum::{pairwise_sum, PairwiseSum};
use crate::error::{Error, Result};
use crate::field::{primes_in, FieldContext, MultChar, PolySpec};
use num_complex::Complex64;

/// Work caps for the exhaustive counters. `RECIP_SUMS_WORKCAP` overrides
/// them: either a bare integer (the naive-enumeration state cap) or
/// comma-separated `naive_states=N,conv_modulus=M`.
#[derive(Debug, Clone, Copy)]
pub struct WorkCaps {
    /// Max number of tuples the naive J enumeration will visit.
    pub naive_states: u128,
    /// Max modulus for the O(k p^2) convolution counter.
    pub conv_modulus: u64,
}

impl Default for WorkCaps {
    fn default() -> Self {
        WorkCaps { naive_states: 1_000_000_000, conv_modulus: 100_000 }
    }
}

impl WorkCaps {
    /// Default caps with the `RECIP_SUMS_WORKCAP` environment override
    /// applied.
    pub fn from_env() -> Self {
        match std::env::var("RECIP_SUMS_WORKCAP") {
            Ok(raw) => Self::parse_override(&raw).unwrap_or_default(),
            Err(_) => Self::default(),
        }
    }

    pub fn parse_override(raw: &str) -> Option<Self> {
        let mut caps = Self::default();
        let raw = raw.trim();
        if raw.is_empty() {
            return Some(caps);
        }
        if let Ok(n) = raw.parse::<u128>() {
            caps.naive_states = n;
            return Some(caps);
        }
        for part in raw.split(',') {
            let (key, value) = part.split_once('=')?;
            match key.trim() {
                "naive_states" => caps.naive_states = value.trim().parse().ok()?,
                "conv_modulus" => caps.conv_modulus = value.trim().parse().ok()?,
                _ => return None,
            }
        }
        Some(caps)
    }
}

/// An exact count next to the cited lemma's right side (p^{o(1)} dropped).
#[derive(Debug, Clone, Copy)]
pub struct CountReport {
    pub count: u128,
    pub bound_rhs: f64,
    pub ratio: f64,
}

impl CountReport {
    fn new(count: u128, bound_rhs: f64) -> Self {
        CountReport { count, bound_rhs, ratio: count as f64 / bound_rhs }
    }
}

/// Multiplicities over F_p (index = residue).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
}

impl Histogram {
    pub fn new(p: u64) -> Self {
        Histogram { counts: vec![0; p as usize] }
    }

    pub fn incr(&mut self, x: u64) {
        self.counts[x as usize] += 1;
    }

    pub fn get(&self, x: u64) -> u64 {
        self.counts[x as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Sum of squared multiplicities (the "energy" of the layer).
    pub fn energy(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128 * c as u128).sum()
    }
}

/// Values `t` in `[1, T]` with `a t + b != 0 (mod p)`, mapped to
/// `(a t + b)^{-d}`. The t with `a t + b = 0` are excluded (their
/// reciprocal is undefined), mirroring the S_f exclusion rule.
fn reciprocal_power_values(
    ctx: &FieldContext,
    d: u64,
    a: i64,
    b: i64,
    t_max: u64,
) -> Result<Vec<u64>> {
    let a = ctx.reduce(a);
    if a == 0 {
        return Err(Error::ZeroLeadingCoeff);
    }
    let b = ctx.reduce(b);
    let mut values = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        let lin = ctx.add(ctx.mul(a, t % ctx.p()), b);
        if lin == 0 {
            continue;
        }
        values.push(ctx.pow(ctx.inv(lin)?, d));
    }
    Ok(values)
}

fn j_bound_rhs(ctx: &FieldContext, d: u64, k: u64, t_max: u64) -> f64 {
    let t = t_max as f64;
    let p = ctx.p() as f64;
    if d == 1 && k == 2 {
        // J_2(a,b;T) <= T^{7/2} p^{-1/2} + T^2
        t.powf(3.5) / p.sqrt() + t * t
    } else {
        // J_{d,k}(a,b;T) <= T^{2k}/p + T^{2k^2/(k+1)}
        t.powi(2 * k as i32) / p + t.powf(2.0 * (k * k) as f64 / (k as f64 + 1.0))
    }
}

/// Number of 2k-tuples `(t_1..t_2k)` in `[1,T]^{2k}` with
/// `sum_j (-1)^j (a t_j + b)^{-d} = 0 (mod p)`, by exhaustive enumeration.
pub fn count_j_naive(
    ctx: &FieldContext,
    d: u64,
    k: u64,
    a: i64,
    b: i64,
    t_max: u64,
    caps: &WorkCaps,
) -> Result<CountReport> {
    assert!(k >= 1 && t_max >= 1 && t_max < ctx.p());
    let states = (t_max as u128).pow(2 * k as u32);
    if states > caps.naive_states {
        return Err(Error::RangeTooLarge(format!(
            "naive J enumeration needs T^(2k) = {states} states, cap {}",
            caps.naive_states
        )));
    }
    let values = reciprocal_power_values(ctx, d, a, b, t_max)?;
    let p = ctx.p();
    // positions alternate sign: odd j subtracts, even j adds
    fn walk(values: &[u64], p: u64, remaining: u64, negate: bool, acc: u64) -> u128 {
        if remaining == 0 {
            return u128::from(acc == 0);
        }
        let mut total = 0u128;
        for &r in values {
            let step = if negate { p - r } else { r };
            let next = {
                let s = acc + step;
                if s >= p {
                    s - p
                } else {
                    s
                }
            };
            total += walk(values, p, remaining - 1, !negate, next);
        }
        total
    }
    let count = walk(&values, p, 2 * k, true, 0);
    Ok(CountReport::new(count, j_bound_rhs(ctx, d, k, t_max)))
}

/// k-fold cyclic self-convolution `R_k` of the reciprocal-power value
/// histogram: `R_k(x)` is the number of k-tuples of admissible t summing
/// to x. Its mass is `#E^k` (E the admissible t's), so exactly `T^k` when
/// no t is excluded.
pub fn reciprocal_layer(
    ctx: &FieldContext,
    d: u64,
    k: u64,
    a: i64,
    b: i64,
    t_max: u64,
    caps: &WorkCaps,
) -> Result<Vec<u128>> {
    assert!(k >= 1 && t_max >= 1 && t_max < ctx.p());
    let p = ctx.p();
    if p > caps.conv_modulus {
        return Err(Error::RangeTooLarge(format!(
            "convolution counter at p = {p} exceeds the modulus cap {}",
            caps.conv_modulus
        )));
    }
    let values = reciprocal_power_values(ctx, d, a, b, t_max)?;
    let mut base = vec![0u128; p as usize];
    for &r in &values {
        base[r as usize] += 1;
    }
    let mut layer = base.clone();
    for _ in 1..k {
        let mut next = vec![0u128; p as usize];
        for (x, &cx) in layer.iter().enumerate() {
            if cx == 0 {
                continue;
            }
            for (y, &cy) in base.iter().enumerate() {
                if cy == 0 {
                    continue;
                }
                let z = (x + y) % p as usize;
                next[z] += cx * cy;
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// Same count as [`count_j_naive`], via the convolution layer:
/// `J = sum_x R_k(x)^2`.
pub fn count_j_conv(
    ctx: &FieldContext,
    d: u64,
    k: u64,
    a: i64,
    b: i64,
    t_max: u64,
    caps: &WorkCaps,
) -> Result<CountReport> {
    let layer = reciprocal_layer(ctx, d, k, a, b, t_max, caps)?;
    let count: u128 = layer.iter().map(|&c| c * c).sum();
    Ok(CountReport::new(count, j_bound_rhs(ctx, d, k, t_max)))
}

/// `N_f(U, Z)`: solutions of `f(u) z = 1 (mod p)` in the box
/// `[1,U] x [1,Z]`, computed in O(U) via `z = f(u)^{-1}`.
pub fn count_n(ctx: &FieldContext, f: &PolySpec, u_max: u64, z_max: u64) -> CountReport {
    let mut count = 0u128;
    for u in 1..=u_max {
        let fu = f.eval(ctx, u % ctx.p());
        if fu == 0 {
            continue; // no z solves 0 * z = 1
        }
        let z = ctx.inv(fu).expect("nonzero");
        if z >= 1 && z <= z_max {
            count += 1;
        }
    }
    let d = f.degree() as f64;
    let p = ctx.p() as f64;
    let rhs = (u_max as f64).powf(d / 2.0) * z_max as f64 * p.powf(-1.0 / (d + 1.0)) + 1.0;
    CountReport::new(count, rhs)
}

/// Primes of `[L, 2L]` usable as denominators mod p.
pub fn prime_interval(ctx: &FieldContext, l: u64) -> Result<Vec<u64>> {
    let primes: Vec<u64> = primes_in(l, 2 * l).into_iter().filter(|&q| q < ctx.p()).collect();
    if primes.is_empty() {
        return Err(Error::EmptyPrimeSet { lo: l, hi: 2 * l, p: ctx.p() });
    }
    Ok(primes)
}

/// Census `I(lambda) = #{(l, u, v) : (v + r_u) / l = lambda (mod p)}` with
/// l running over the primes of `[L, 2L]`, u over the sequence indices and
/// v over `[1, V]`.
pub fn count_i_lambda(
    ctx: &FieldContext,
    r: &[u64],
    l: u64,
    v_max: u64,
) -> Result<Histogram> {
    assert!(l >= 2, "need L >= 2");
    let primes = prime_interval(ctx, l)?;
    let mut hist = Histogram::new(ctx.p());
    for &ell in &primes {
        let ell_inv = ctx.inv(ell % ctx.p())?;
        for &ru in r {
            let ru = ru % ctx.p();
            for v in 1..=v_max {
                let lambda = ctx.mul(ctx.add(v % ctx.p(), ru), ell_inv);
                hist.incr(lambda);
            }
        }
    }
    Ok(hist)
}

/// Second moment `N = sum_lambda I(lambda)^2`: the number of 6-tuples
/// `(l1, l2, u1, u2, v1, v2)` with `(v1 + r_u1)/l1 = (v2 + r_u2)/l2`.
/// `bound_rhs` is the kappa-free reference `L U^2 V`.
pub fn count_n_tuples(
    ctx: &FieldContext,
    r: &[u64],
    l: u64,
    v_max: u64,
) -> Result<CountReport> {
    let hist = count_i_lambda(ctx, r, l, v_max)?;
    let count = hist.energy();
    let rhs = l as f64 * (r.len() as f64).powi(2) * v_max as f64;
    Ok(CountReport::new(count, rhs))
}

/// Exact moment `sum_{lambda in F_p} |sum_{k=1}^{K} chi(lambda + k)|^{2 nu}`.
///
/// The inner sums are read off a doubled prefix table of the chi values, so
/// the whole moment costs O(p) after the O(p) table build.
pub fn char_moment(ctx: &FieldContext, chi: &MultChar, k_len: u64, nu: u32) -> f64 {
    assert!(k_len >= 1 && k_len < ctx.p(), "need 1 <= K < p");
    assert!(nu >= 1, "need nu >= 1");
    let p = ctx.p() as usize;
    let mut prefix = Vec::with_capacity(2 * p + 1);
    prefix.push(Complex64::new(0.0, 0.0));
    let mut run = PairwiseSum::new();
    for i in 0..2 * p {
        run.push(chi.eval(ctx, (i % p) as u64));
        prefix.push(run.clone().total());
    }
    pairwise_sum((0..p).map(|lambda| {
        let inner = prefix[lambda + 1 + k_len as usize] - prefix[lambda + 1];
        inner.norm_sqr().powi(nu as i32)
    }))
}

/// Dyadic census of `rho(1/f(u))` over `u <= U`, relative to the window
/// height V: `R` counts `rho < e^I` with `I = floor(ln(2p/V))`, and `Q_j`
/// counts `e^j <= rho < e^{j+1}`. Every u with `f(u) != 0` lands in R or in
/// exactly one class `j` in `[I, J]`, `J = floor(ln 2p)`, so
/// `R + sum_j Q_j + excluded = U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoCensus {
    pub r_count: u64,
    /// Class counts keyed by j, for `e^j <= rho < e^{j+1}`.
    pub q: std::collections::BTreeMap<i64, u64>,
    pub i_index: i64,
    pub j_index: i64,
    pub excluded: u64,
}

impl RhoCensus {
    pub fn classified_total(&self) -> u64 {
        self.r_count + self.q.values().sum::<u64>() + self.excluded
    }
}

pub fn rho_census(ctx: &FieldContext, f: &PolySpec, u_max: u64, v_max: u64) -> RhoCensus {
    assert!(u_max >= 1 && v_max >= 1);
    let p = ctx.p() as f64;
    let i_index = (2.0 * p / v_max as f64).ln().floor() as i64;
    let j_index = (2.0 * p).ln().floor() as i64;
    let threshold = (i_index as f64).exp();
    let mut census = RhoCensus {
        r_count: 0,
        q: std::collections::BTreeMap::new(),
        i_index,
        j_index,
        excluded: 0,
    };
    for u in 1..=u_max {
        let fu = f.eval(ctx, u % ctx.p());
        if fu == 0 {
            census.excluded += 1;
            continue;
        }
        let rho = ctx.rho_frac(1, fu as i64).expect("f(u) invertible");
        let rho_f = rho as f64;
        if rho_f < threshold {
            census.r_count += 1;
        } else {
            let j = (rho_f.ln().floor() as i64).clamp(i_index, j_index);
            *census.q.entry(j).or_insert(0) += 1;
        }
    }
    census
}

/// Interval discrepancy of a residue sequence: the maximum over all
/// `b in F_p` and window lengths `1 <= Z < p` of
/// `|#{(u, z) : r_u = b + z (mod p)} - U Z / p| / U`.
///
/// Computed from prefix sums of the centered residue counts: every cyclic
/// window deviation is a difference of two prefix values (the total
/// centered mass is zero), so the maximum is `max C - min C` over the
/// prefix walk.
pub fn discrepancy(ctx: &FieldContext, r: &[u64]) -> f64 {
    assert!(!r.is_empty(), "discrepancy of an empty sequence");
    let p = ctx.p() as usize;
    let u_len = r.len() as f64;
    let mut counts = vec![0u64; p];
    for &x in r {
        counts[(x % ctx.p()) as usize] += 1;
    }
    let mean = u_len / p as f64;
    let mut walk = 0.0f64;
    let mut min_c = 0.0f64;
    let mut max_c = 0.0f64;
    for &c in &counts {
        walk += c as f64 - mean;
        min_c = min_c.min(walk);
        max_c = max_c.max(walk);
    }
    (max_c - min_c) / u_len
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    fn caps() -> WorkCaps {
        WorkCaps::default()
    }

    #[test]
    fn j_diagonal_only_for_k1_d1() {
        // x -> 1/(ax+b) is injective, so only diagonal pairs survive
        let c = ctx(11);
        for t_max in 1..=6u64 {
            let rep = count_j_naive(&c, 1, 1, 1, 0, t_max, &caps()).unwrap();
            assert_eq!(rep.count, t_max as u128);
        }
    }

    #[test]
    fn j_anchor_value() {
        // values {1, 6, 4}; pair-sum energy 15
        let c = ctx(11);
        let rep = count_j_naive(&c, 1, 2, 1, 0, 3, &caps()).unwrap();
        assert_eq!(rep.count, 15);
        let conv = count_j_conv(&c, 1, 2, 1, 0, 3, &caps()).unwrap();
        assert_eq!(conv.count, 15);
    }

    #[test]
    fn j_single_tuple_telescopes() {
        for (d, k) in [(1u64, 1u64), (2, 2), (3, 1)] {
            let c = ctx(13);
            let rep = count_j_naive(&c, d, k, 1, 1, 1, &caps()).unwrap();
            assert_eq!(rep.count, 1);
        }
    }

    #[test]
    fn j_conv_matches_naive_small_grid() {
        for p in [7u64, 11] {
            let c = ctx(p);
            for d in 1..=2u64 {
                for k in 1..=2u64 {
                    for t_max in [2u64, 4] {
                        let naive = count_j_naive(&c, d, k, 2, 3, t_max, &caps()).unwrap();
                        let conv = count_j_conv(&c, d, k, 2, 3, t_max, &caps()).unwrap();
                        assert_eq!(naive.count, conv.count, "p={p} d={d} k={k} T={t_max}");
                    }
                }
            }
        }
    }

    #[test]
    fn j_square_reciprocals_pair_with_negation() {
        // 1/t1^2 = 1/t2^2 iff t2 = +-t1: enumeration gives 2(p-1)
        let c = ctx(11);
        let naive = count_j_naive(&c, 2, 1, 1, 0, 10, &caps()).unwrap();
        let conv = count_j_conv(&c, 2, 1, 1, 0, 10, &caps()).unwrap();
        assert_eq!(naive.count, conv.count);
        assert_eq!(naive.count, 20);
    }

    #[test]
    fn j_k1_is_histogram_energy() {
        let c = ctx(13);
        let conv = count_j_conv(&c, 1, 1, 1, 0, 5, &caps()).unwrap();
        let values = reciprocal_power_values(&c, 1, 1, 0, 5).unwrap();
        let mut hist = Histogram::new(13);
        for v in values {
            hist.incr(v);
        }
        assert_eq!(conv.count, hist.energy());
    }

    #[test]
    fn conv_layer_mass_is_t_to_the_k() {
        let c = ctx(13);
        for k in 1..=3u64 {
            // a=1, b=1: a t + b != 0 for t in [1, 5], so no t is excluded
            let layer = reciprocal_layer(&c, 2, k, 1, 1, 5, &caps()).unwrap();
            let mass: u128 = layer.iter().sum();
            assert_eq!(mass, 5u128.pow(k as u32));
        }
        // with the root t = 12 inside [1, 12], mass drops to (T-1)^k
        let layer = reciprocal_layer(&c, 1, 2, 1, 1, 12, &caps()).unwrap();
        let mass: u128 = layer.iter().sum();
        assert_eq!(mass, 11u128 * 11);
    }

    #[test]
    fn j_work_caps_enforced() {
        let c = ctx(11);
        let tiny = WorkCaps { naive_states: 10, conv_modulus: 7 };
        assert!(matches!(
            count_j_naive(&c, 1, 2, 1, 0, 6, &tiny),
            Err(Error::RangeTooLarge(_))
        ));
        assert!(matches!(
            count_j_conv(&c, 1, 1, 1, 0, 3, &tiny),
            Err(Error::RangeTooLarge(_))
        ));
    }

    #[test]
    fn workcap_override_parsing() {
        let c = WorkCaps::parse_override("123").unwrap();
        assert_eq!(c.naive_states, 123);
        let c = WorkCaps::parse_override("naive_states=5,conv_modulus=9").unwrap();
        assert_eq!(c.naive_states, 5);
        assert_eq!(c.conv_modulus, 9);
        assert!(WorkCaps::parse_override("nonsense=1").is_none());
    }

    #[test]
    fn n_f_examples() {
        let c = ctx(11);
        let f = PolySpec::monomial(&c, 1);
        assert_eq!(count_n(&c, &f, 10, 10).count, 10); // every u pairs with 1/u
        assert_eq!(count_n(&c, &f, 3, 3).count, 1); // inverses 1,6,4: only (1,1)

        // f(1) = 0: that column contributes nothing
        let g = PolySpec::new(&c, &[-1, 1]).unwrap(); // X - 1
        assert_eq!(count_n(&c, &g, 1, 10).count, 0);
    }

    #[test]
    fn n_f_matches_brute_force() {
        let c = ctx(31);
        let f = PolySpec::new(&c, &[3, 1, 2]).unwrap();
        for (u_max, z_max) in [(5u64, 7u64), (30, 30), (12, 4)] {
            let fast = count_n(&c, &f, u_max, z_max).count;
            let mut brute = 0u128;
            for u in 1..=u_max {
                for z in 1..=z_max {
                    if c.mul(f.eval(&c, u), z) == 1 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn n_f_additive_and_monotone() {
        let c = ctx(101);
        let f = PolySpec::new(&c, &[7, 0, 1]).unwrap();
        let whole = count_n(&c, &f, 50, 60).count;
        // z-partition [1,25] and (25,60] counted with a shifted window
        let lower = count_n(&c, &f, 50, 25).count;
        let mut upper = 0u128;
        for u in 1..=50u64 {
            let fu = f.eval(&c, u);
            if fu == 0 {
                continue;
            }
            let z = c.inv(fu).unwrap();
            if z > 25 && z <= 60 {
                upper += 1;
            }
        }
        assert_eq!(lower + upper, whole);
        assert!(count_n(&c, &f, 50, 60).count <= count_n(&c, &f, 70, 60).count);
        assert!(count_n(&c, &f, 50, 60).count <= count_n(&c, &f, 50, 80).count);
    }

    #[test]
    fn i_lambda_mass_conservation() {
        let c = ctx(11);
        let r = [1u64, 2];
        let hist = count_i_lambda(&c, &r, 2, 2).unwrap();
        let primes = prime_interval(&c, 2).unwrap();
        assert_eq!(hist.total(), primes.len() as u64 * 2 * 2);
    }

    #[test]
    fn i_lambda_single_cell() {
        let c = ctx(11);
        let hist = count_i_lambda(&c, &[0], 2, 1).unwrap();
        let primes = prime_interval(&c, 2).unwrap();
        assert_eq!(hist.total(), primes.len() as u64);
        // (1 + 0)/l: distinct inverses for distinct primes
        let support: Vec<u64> = (0..11).filter(|&x| hist.get(x) > 0).collect();
        assert_eq!(support.len(), primes.len());
    }

    #[test]
    fn n_tuples_matches_six_fold_enumeration() {
        let c = ctx(11);
        let r = [1u64, 2];
        let v_max = 2u64;
        let l = 2u64;
        let fast = count_n_tuples(&c, &r, l, v_max).unwrap().count;
        let primes = prime_interval(&c, l).unwrap();
        let mut brute = 0u128;
        for &l1 in &primes {
            for &l2 in &primes {
                for u1 in 0..r.len() {
                    for u2 in 0..r.len() {
                        for v1 in 1..=v_max {
                            for v2 in 1..=v_max {
                                let lhs = c.mul(c.add(v1, r[u1]), c.inv(l1).unwrap());
                                let rhs = c.mul(c.add(v2, r[u2]), c.inv(l2).unwrap());
                                if lhs == rhs {
                                    brute += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(fast, brute);
        // diagonal floor
        assert!(fast >= (primes.len() as u128) * (r.len() as u128) * v_max as u128);
    }

    #[test]
    fn n_tuples_single_cell_is_prime_count() {
        let c = ctx(13);
        let primes = prime_interval(&c, 3).unwrap();
        let n = count_n_tuples(&c, &[4], 3, 1).unwrap().count;
        assert_eq!(n, primes.len() as u128); // 1 + 4 != 0 mod 13
    }

    #[test]
    fn empty_prime_set_is_an_error() {
        let c = ctx(5);
        // primes in [7, 14] all exceed p = 5
        assert!(matches!(
            count_i_lambda(&c, &[1], 7, 1),
            Err(Error::EmptyPrimeSet { .. })
        ));
    }

    #[test]
    fn char_moment_closed_form_nu1() {
        // brute-force anchor p=5, K=2: the moment equals K(p-K) = 6
        let c = ctx(5);
        let chi = MultChar::quadratic(&c);
        let brute: f64 = (0..5u64)
            .map(|lambda| {
                let inner = chi.eval(&c, (lambda + 1) % 5) + chi.eval(&c, (lambda + 2) % 5);
                inner.norm_sqr()
            })
            .sum();
        assert!((brute - 6.0).abs() < 1e-9);
        assert!((char_moment(&c, &chi, 2, 1) - 6.0).abs() < 1e-9);

        for p in [7u64, 13] {
            let c = ctx(p);
            for chi in MultChar::all_nonprincipal(&c) {
                for k_len in 1..p {
                    let expect = (k_len * (p - k_len)) as f64;
                    let got = char_moment(&c, &chi, k_len, 1);
                    assert!(
                        (got - expect).abs() <= 1e-6 * expect.max(1.0),
                        "p={p} K={k_len}"
                    );
                }
            }
        }
    }

    #[test]
    fn char_moment_k_full_range() {
        let c = ctx(11);
        let chi = MultChar::quadratic(&c);
        let got = char_moment(&c, &chi, 10, 1);
        assert!((got - 10.0).abs() < 1e-6); // K = p-1 gives K(p-K) = p-1
    }

    #[test]
    fn char_moment_nu2_brute_force() {
        let c = ctx(7);
        let chi = MultChar::quadratic(&c);
        let brute: f64 = (0..7u64)
            .map(|lambda| {
                let inner = chi.eval(&c, (lambda + 1) % 7) + chi.eval(&c, (lambda + 2) % 7);
                inner.norm_sqr().powi(2)
            })
            .sum();
        let got = char_moment(&c, &chi, 2, 2);
        assert!((got - brute).abs() < 1e-9, "got {got}, brute {brute}");
    }

    #[test]
    fn rho_census_partition() {
        let c = ctx(101);
        for (coeffs, u_max, v_max) in [
            (vec![0i64, 1], 100u64, 101u64),
            (vec![3, 2, 1], 60, 10),
            (vec![-1, 1], 40, 50), // has the root u = 1
        ] {
            let f = PolySpec::new(&c, &coeffs).unwrap();
            let census = rho_census(&c, &f, u_max, v_max);
            assert_eq!(census.classified_total(), u_max, "f={coeffs:?}");
        }
    }

    #[test]
    fn rho_census_v_equals_p_empties_r() {
        // I = floor(ln 2) = 0 and rho >= 1 always, so R = 0
        let c = ctx(101);
        let f = PolySpec::monomial(&c, 1);
        let census = rho_census(&c, &f, 100, 101);
        assert_eq!(census.i_index, 0);
        assert_eq!(census.r_count, 0);
        assert_eq!(census.classified_total(), 100);
    }

    #[test]
    fn discrepancy_extremes() {
        let c = ctx(101);
        let full: Vec<u64> = (0..101).collect();
        assert!(discrepancy(&c, &full) <= 1e-12);

        let constant = vec![17u64; 50];
        let d = discrepancy(&c, &constant);
        assert!((d - (1.0 - 1.0 / 101.0)).abs() < 1e-12);
    }

    #[test]
    fn discrepancy_matches_brute_force() {
        let c = ctx(31);
        let r: Vec<u64> = (1..=12u64).map(|u| (u * u * u) % 31).collect();
        let fast = discrepancy(&c, &r);
        let mut counts = vec![0i64; 31];
        for &x in &r {
            counts[x as usize] += 1;
        }
        let mut worst = 0.0f64;
        for b in 0..31u64 {
            for z in 1..31u64 {
                let mut hits = 0i64;
                for step in 1..=z {
                    hits += counts[((b + step) % 31) as usize];
                }
                let dev = (hits as f64 - 12.0 * z as f64 / 31.0).abs() / 12.0;
                worst = worst.max(dev);
            }
        }
        assert!((fast - worst).abs() < 1e-12, "fast {fast} brute {worst}");
    }
}
