//! Dirichlet pigeonhole reduction: simultaneous shrinking of polynomial
//! coefficients by a common multiplier.
//!
//! Given coefficients `a_0..a_d` and targets `T_0..T_d`, `find_t` searches
//! exhaustively for the multiplier `t` in `[1, p-1]` minimizing the quality
//! `c = max_i rho(a_i t) / T_i`. When `prod T_i > p^d` the pigeonhole
//! principle guarantees a t with every `rho(a_i t)` of order `T_i`; the
//! search returns the exact minimizer (smallest t on ties) instead of
//! asserting any implied constant. `shrink_poly` applies this with the
//! canonical targets `T_i = W / U^i`, `W = p^{d/(d+1)} U^{d/2}`, and lifts
//! `t * f` to the integer polynomial `g` with `|b_i| < p/2`.

use crate::error::{Error, Result};
use crate::field::{FieldContext, PolySpec};

/// Outcome of the multiplier search.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    /// Minimizing multiplier, coprime to p.
    pub t: u64,
    /// Quality `max_i rho(a_i t) / T_i` at the minimizer.
    pub c: f64,
    /// The individual `rho(a_i t)`.
    pub per: Vec<u64>,
    /// True when `prod T_i > p^d`, the hypothesis under which existence of
    /// a good t is guaranteed.
    pub guarantee_applies: bool,
}

/// Exhaustive search over `t in [1, p-1]` for the multiplier minimizing
/// `max_i rho(a_i t) / T_i` (ties broken by the smallest t).
pub fn find_t(ctx: &FieldContext, coeffs: &[i64], targets: &[f64]) -> ReductionResult {
    assert_eq!(coeffs.len(), targets.len(), "one target per coefficient");
    assert!(!coeffs.is_empty() && coeffs.len() <= 8, "work cap: d + 1 <= 8");
    let p = ctx.p();
    for &t_i in targets {
        assert!(t_i >= 1.0 && t_i < p as f64, "targets must satisfy 1 <= T_i < p");
    }
    let reduced: Vec<u64> = coeffs.iter().map(|&a| ctx.reduce(a)).collect();
    let mut best_t = 1u64;
    let mut best_c = f64::INFINITY;
    let mut best_per: Vec<u64> = Vec::new();
    for t in 1..p {
        let mut c = 0.0f64;
        let mut per = Vec::with_capacity(reduced.len());
        for (i, &a) in reduced.iter().enumerate() {
            let r = ctx.mul(a, t);
            let rho = r.min(p - r);
            per.push(rho);
            c = c.max(rho as f64 / targets[i]);
        }
        if c < best_c {
            best_c = c;
            best_t = t;
            best_per = per;
        }
    }
    let d = (coeffs.len() - 1) as i32;
    let product: f64 = targets.iter().product();
    ReductionResult {
        t: best_t,
        c: best_c,
        per: best_per,
        guarantee_applies: product > (p as f64).powi(d),
    }
}

/// Canonical shrinking targets for degree d at box width U:
/// `W = p^{d/(d+1)} U^{d/2}` and `T_i = W / U^i`, which satisfy
/// `1 <= T_d <= ... <= T_0 = W < p` and `prod T_i = p^d`. Requires
/// `U^{d/2} < p^{1/(d+1)}` (otherwise the shrunken-coefficient bound is
/// weaker than the trivial one).
pub fn canonical_targets(ctx: &FieldContext, d: u64, u_max: u64) -> Result<(f64, Vec<f64>)> {
    assert!(d >= 1 && u_max >= 1 && u_max < ctx.p());
    let p = ctx.p() as f64;
    let u = u_max as f64;
    let df = d as f64;
    if u.powf(df / 2.0) >= p.powf(1.0 / (df + 1.0)) {
        return Err(Error::PreconditionFailed(format!(
            "U^(d/2) = {} must stay below p^(1/(d+1)) = {}",
            u.powf(df / 2.0),
            p.powf(1.0 / (df + 1.0))
        )));
    }
    let w = p.powf(df / (df + 1.0)) * u.powf(df / 2.0);
    let targets: Vec<f64> = (0..=d).map(|i| w / u.powi(i as i32)).collect();
    let product: f64 = targets.iter().product();
    let expect = p.powi(d as i32);
    debug_assert!(
        ((product - expect) / expect).abs() <= 1e-9,
        "target product {product} drifted from p^d = {expect}"
    );
    debug_assert!(targets[d as usize] >= 1.0 && w < p);
    Ok((w, targets))
}

/// `t * f` lifted to small signed integer coefficients.
#[derive(Debug, Clone)]
pub struct ShrunkenPoly {
    /// Integer coefficients `b_0..b_d` with `b_i = a_i t (mod p)` and
    /// `|b_i| < p/2`.
    pub coeffs: Vec<i64>,
    pub t: u64,
    pub w: f64,
    pub targets: Vec<f64>,
    /// `max_i |b_i| / T_i`.
    pub quality: f64,
}

impl ShrunkenPoly {
    pub fn eval_int(&self, u: i64) -> i64 {
        let mut acc = 0i64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }
}

/// Runs the pigeonhole reduction on the coefficients of f with the
/// canonical targets for (d, U).
pub fn shrink_poly(ctx: &FieldContext, f: &PolySpec, u_max: u64) -> Result<ShrunkenPoly> {
    let d = f.degree();
    let (w, targets) = canonical_targets(ctx, d, u_max)?;
    let coeffs: Vec<i64> = f.coeffs().iter().map(|&a| a as i64).collect();
    let reduction = find_t(ctx, &coeffs, &targets);
    let p = ctx.p();
    let half = (p - 1) / 2;
    let lifted: Vec<i64> = f
        .coeffs()
        .iter()
        .map(|&a| {
            let r = ctx.mul(a, reduction.t);
            if r <= half {
                r as i64
            } else {
                r as i64 - p as i64
            }
        })
        .collect();
    Ok(ShrunkenPoly { coeffs: lifted, t: reduction.t, w, targets, quality: reduction.c })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    /// Independent recomputation of the minimum quality.
    fn brute_min_c(ctx: &FieldContext, coeffs: &[i64], targets: &[f64]) -> (u64, f64) {
        let p = ctx.p();
        let mut best = (0u64, f64::INFINITY);
        for t in 1..p {
            let c = coeffs
                .iter()
                .zip(targets)
                .map(|(&a, &cap)| {
                    let r = ctx.mul(ctx.reduce(a), t);
                    r.min(p - r) as f64 / cap
                })
                .fold(0.0f64, f64::max);
            if c < best.1 {
                best = (t, c);
            }
        }
        best
    }

    #[test]
    fn degree_zero_unit_target() {
        let c = ctx(17);
        let r = find_t(&c, &[1], &[1.0]);
        assert_eq!(r.t, 1);
        assert!(r.c <= 1.0 + 1e-12);
    }

    #[test]
    fn linear_example_p11() {
        let c = ctx(11);
        let r = find_t(&c, &[1, 5], &[4.0, 4.0]);
        let (bt, bc) = brute_min_c(&c, &[1, 5], &[4.0, 4.0]);
        assert_eq!(r.t, bt);
        assert_eq!(r.t, 2);
        assert_eq!(r.per, vec![2, 1]);
        assert!((r.c - 0.5).abs() < 1e-12);
        assert!((r.c - bc).abs() < 1e-12);
    }

    #[test]
    fn linear_example_p7() {
        let c = ctx(7);
        let r = find_t(&c, &[1, 1], &[2.0, 2.0]);
        assert_eq!(r.t, 1);
        assert!((r.c - 0.5).abs() < 1e-12);
    }

    #[test]
    fn per_matches_rho_int() {
        let c = ctx(43);
        let coeffs = [5i64, -17, 30];
        let r = find_t(&c, &coeffs, &[6.0, 6.0, 6.0]);
        for (i, &a) in coeffs.iter().enumerate() {
            let prod = c.reduce(a.wrapping_mul(r.t as i64));
            assert_eq!(r.per[i], c.rho_int(prod as i64));
        }
    }

    #[test]
    fn guarantee_flag_tracks_product() {
        let c = ctx(11);
        let yes = find_t(&c, &[1, 5], &[4.0, 4.0]); // 16 > 11
        assert!(yes.guarantee_applies);
        let no = find_t(&c, &[1, 5], &[3.0, 3.0]); // 9 < 11
        assert!(!no.guarantee_applies);
    }

    #[test]
    fn canonical_targets_examples() {
        let c = ctx(101);
        let (w, t) = canonical_targets(&c, 1, 1).unwrap();
        assert!((w - 101.0f64.sqrt()).abs() < 1e-9);
        assert_eq!(t.len(), 2);
        assert!((t[0] - t[1]).abs() < 1e-9);
        assert!((t[0] * t[1] - 101.0).abs() < 1e-6);

        let big = ctx(10_007);
        let (w2, t2) = canonical_targets(&big, 2, 2).unwrap();
        assert!((w2 - 2.0 * 10_007.0f64.powf(2.0 / 3.0)).abs() / w2 < 1e-12);
        let product: f64 = t2.iter().product();
        let expect = 10_007.0f64 * 10_007.0;
        assert!(((product - expect) / expect).abs() < 1e-9);
        // monotone nonincreasing targets, all in [1, p)
        for pair in t2.windows(2) {
            assert!(pair[0] >= pair[1] - 1e-12);
        }
        assert!(t2[0] < 10_007.0 && *t2.last().unwrap() >= 1.0);
    }

    #[test]
    fn canonical_targets_precondition() {
        // d = 2 at U near p^{2/3} violates U^{d/2} < p^{1/(d+1)}
        let c = ctx(101);
        let u = (101.0f64.powf(2.0 / 3.0)).ceil() as u64;
        assert!(matches!(
            canonical_targets(&c, 2, u),
            Err(Error::PreconditionFailed(_))
        ));
        // d = 1 never trips the precondition for U < p
        assert!(canonical_targets(&c, 1, u).is_ok());
    }

    #[test]
    fn shrink_poly_congruence_and_size() {
        let c = ctx(1009);
        let f = PolySpec::new(&c, &[123, 456, 7]).unwrap();
        let s = shrink_poly(&c, &f, 2).unwrap();
        // g = t f coefficientwise mod p
        for (i, &b) in s.coeffs.iter().enumerate() {
            let expect = c.mul(f.coeffs()[i], s.t);
            assert_eq!(c.reduce(b), expect, "coefficient {i}");
            assert!(2 * b.unsigned_abs() < 1009);
        }
        // and therefore g(u) = t f(u) at sample points
        let mut rng = crate::rng::SplitMix64::new(5);
        for _ in 0..20 {
            let u = 1 + rng.next_below(1008);
            let lhs = c.reduce(s.eval_int(u as i64));
            let rhs = c.mul(s.t, f.eval(&c, u));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn shrink_poly_small_coeffs_accept_t1() {
        // coefficients already below every target: t = 1 already has c <= 1
        let c = ctx(10_007);
        let f = PolySpec::new(&c, &[2, 1]).unwrap();
        let s = shrink_poly(&c, &f, 2).unwrap();
        assert!(s.quality <= 1.0 + 1e-12);
    }

    #[test]
    fn shrunken_values_fit_w_window() {
        // |g(u) z| <= (d+1) W Z on the whole box when c <= 1
        let c = ctx(1009);
        let f = PolySpec::new(&c, &[11, 3, 1]).unwrap();
        let u_max = 2u64;
        let z_max = 4u64;
        let s = shrink_poly(&c, &f, u_max).unwrap();
        assert!(s.quality <= 1.0 + 1e-12, "canonical targets admit a good t here");
        let d = f.degree();
        let cap = (d as f64 + 1.0) * s.w * z_max as f64;
        for u in 1..=u_max as i64 {
            // |b_i u^i| <= T_i U^i = W termwise, so |g(u)| <= (d+1) W
            for z in 1..=z_max as i64 {
                let value = (s.eval_int(u) * z).unsigned_abs() as f64;
                assert!(value <= cap * (1.0 + 1e-12), "u={u} z={z}");
            }
        }
    }
}
