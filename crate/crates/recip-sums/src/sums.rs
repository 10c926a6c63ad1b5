//! Exact evaluation of the bilinear sums under study.
//!
//! `eval_s` computes `sum alpha_u beta_v e_p(v / f(u))` over the lattice
//! members of a convex region, skipping the u with `f(u) = 0 (mod p)`;
//! `eval_t` computes the companion character sum
//! `sum alpha_u beta_v chi(v + f(u))` with no exclusion (chi(0) = 0 makes
//! those terms vanish). `eval_k` is the Kloosterman-fraction special case
//! `f(X) = aX + b`. Terms are accumulated in lexicographic `(u, v)` order
//! through the pairwise accumulator, so every result is deterministic for
//! a fixed region and weights.

use crate::accum::PairwiseSum;
use crate::error::{Error, Result};
use crate::field::{FieldContext, MultChar, PolySpec};
use crate::regions::{ConvexRegion, WeightSeq};
use num_complex::Complex64;

/// Value and bookkeeping of one evaluated sum.
#[derive(Debug, Clone, Copy)]
pub struct SumResult {
    /// The complex sum.
    pub value: Complex64,
    /// Number of (u, v) pairs actually summed.
    pub terms: u64,
    /// Number of u in [1, U] skipped because f(u) = 0 (mod p).
    pub excluded: u64,
    /// The trivial bound U*V.
    pub trivial_bound: f64,
    /// The generic bilinear benchmark sqrt(U*V*p).
    pub benchmark: f64,
}

fn check_weights(a: &WeightSeq, b: &WeightSeq, region: &ConvexRegion) -> Result<()> {
    if a.len() < region.u_max() {
        return Err(Error::WeightTooShort { need: region.u_max(), have: a.values().len() });
    }
    if b.len() < region.v_max() {
        return Err(Error::WeightTooShort { need: region.v_max(), have: b.values().len() });
    }
    Ok(())
}

fn result(ctx: &FieldContext, region: &ConvexRegion, value: Complex64, terms: u64, excluded: u64) -> SumResult {
    let uv = region.u_max() as f64 * region.v_max() as f64;
    debug_assert!(value.norm() <= terms as f64 + 1e-6);
    SumResult {
        value,
        terms,
        excluded,
        trivial_bound: uv,
        benchmark: (uv * ctx.p() as f64).sqrt(),
    }
}

/// `S_f(A, B; C) = sum_{(u,v) in C} alpha_u beta_v e_p(v / f(u))`,
/// zeros of f in [1, U] excluded from the summation.
pub fn eval_s(
    ctx: &FieldContext,
    f: &PolySpec,
    a: &WeightSeq,
    b: &WeightSeq,
    region: &ConvexRegion,
) -> Result<SumResult> {
    assert!(f.degree() >= 1, "eval_s needs deg f >= 1");
    check_weights(a, b, region)?;
    let mut acc = PairwiseSum::new();
    let mut terms = 0u64;
    let mut excluded = 0u64;
    for u in 1..=region.u_max() {
        let fu = f.eval(ctx, u % ctx.p());
        if fu == 0 {
            excluded += 1;
            continue;
        }
        let (x, y) = region.column_interval(u);
        if y == x {
            continue;
        }
        let w = ctx.inv(fu)?;
        let alpha = a.at(u);
        for v in x + 1..=y {
            let arg = ctx.mul(v % ctx.p(), w);
            acc.push(alpha * b.at(v) * ctx.e_p(arg as i64));
            terms += 1;
        }
    }
    // f has at most d roots mod p, each hit at most ceil(U/p) times in [1, U]
    debug_assert!(excluded <= f.degree() * region.u_max().div_ceil(ctx.p()) + f.degree());
    Ok(result(ctx, region, acc.total(), terms, excluded))
}

/// Single-weight variant `S_f(A; C)`: all beta_v = 1.
pub fn eval_s_single(
    ctx: &FieldContext,
    f: &PolySpec,
    a: &WeightSeq,
    region: &ConvexRegion,
) -> Result<SumResult> {
    eval_s(ctx, f, a, &WeightSeq::unit(region.v_max()), region)
}

/// `T_f(A, B; C) = sum_{(u,v) in C} alpha_u beta_v chi(v + f(u))`.
/// No u is excluded: chi(0) = 0 annihilates the terms with v + f(u) = 0.
pub fn eval_t(
    ctx: &FieldContext,
    chi: &MultChar,
    f: &PolySpec,
    a: &WeightSeq,
    b: &WeightSeq,
    region: &ConvexRegion,
) -> Result<SumResult> {
    check_weights(a, b, region)?;
    let mut acc = PairwiseSum::new();
    let mut terms = 0u64;
    for u in 1..=region.u_max() {
        let (x, y) = region.column_interval(u);
        if y == x {
            continue;
        }
        let fu = f.eval(ctx, u % ctx.p());
        let alpha = a.at(u);
        for v in x + 1..=y {
            let arg = ctx.add(v % ctx.p(), fu);
            acc.push(alpha * b.at(v) * chi.eval(ctx, arg));
            terms += 1;
        }
    }
    Ok(result(ctx, region, acc.total(), terms, 0))
}

/// Bilinear Kloosterman sum `K_{a,b}(A, B; C)`: `eval_s` with
/// `f(X) = aX + b`. Identical term order, so the values agree bitwise.
pub fn eval_k(
    ctx: &FieldContext,
    a_coef: i64,
    b_coef: i64,
    a: &WeightSeq,
    b: &WeightSeq,
    region: &ConvexRegion,
) -> Result<SumResult> {
    let f = PolySpec::linear(ctx, a_coef, b_coef)?;
    eval_s(ctx, &f, a, b, region)
}

/// Incomplete linear exponential sum `sum_{v=X+1}^{Y} e_p(alpha v)` with
/// `alpha = num/den (mod p)`.
pub fn incomplete_linear_sum(
    ctx: &FieldContext,
    num: i64,
    den: i64,
    x: u64,
    y: u64,
) -> Result<Complex64> {
    assert!(x <= y && y <= ctx.p(), "window must satisfy 0 <= X <= Y <= p");
    let d = ctx.reduce(den);
    if d == 0 {
        return Err(Error::ZeroDenominator);
    }
    let alpha = ctx.mul(ctx.reduce(num), ctx.inv(d)?);
    let mut acc = PairwiseSum::new();
    for v in x + 1..=y {
        acc.push(ctx.e_p(ctx.mul(alpha, v % ctx.p()) as i64));
    }
    Ok(acc.total())
}

/// Weyl sum `sum_{u=1}^{U} e_p(f(u))`.
pub fn weyl_sum(ctx: &FieldContext, f: &PolySpec, u_max: u64) -> Complex64 {
    assert!(u_max >= 1 && u_max < ctx.p(), "need 1 <= U < p");
    let mut acc = PairwiseSum::new();
    for u in 1..=u_max {
        acc.push(ctx.e_p(f.eval(ctx, u) as i64));
    }
    acc.total()
}

/// Reference envelope for Weyl sums of degree d >= 3:
/// `U * (1/U + p/U^d)^sigma` with `sigma = 1/(2(d-1)(d-2))`.
pub fn wooley_bound(ctx: &FieldContext, d: u64, u_max: u64) -> Result<f64> {
    if d < 3 {
        return Err(Error::DegreeTooSmall { d, min: 3 });
    }
    assert!(u_max >= 1, "need U >= 1");
    let u = u_max as f64;
    let p = ctx.p() as f64;
    let sigma = 1.0 / (2.0 * (d as f64 - 1.0) * (d as f64 - 2.0));
    Ok(u * (u.recip() + p * u.powi(-(d as i32))).powf(sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accum::pairwise_sum;
    use num_rational::Rational64;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    fn rect(u: u64, v: u64) -> ConvexRegion {
        ConvexRegion::rectangle(u, v).unwrap()
    }

    #[test]
    fn complete_rectangle_gives_minus_u() {
        // inner sum over a full nonzero-residue range is -1 for each u
        let c = ctx(11);
        let f = PolySpec::monomial(&c, 1);
        let r = rect(10, 10);
        let s = eval_s(&c, &f, &WeightSeq::unit(10), &WeightSeq::unit(10), &r).unwrap();
        assert!((s.value - Complex64::new(-10.0, 0.0)).norm() < 1e-6);
        assert_eq!(s.terms, 100);
        assert_eq!(s.excluded, 0);
    }

    #[test]
    fn empty_region_gives_zero() {
        let c = ctx(7);
        let f = PolySpec::monomial(&c, 1);
        let sliver = ConvexRegion::from_polygon(
            vec![
                (Rational64::new(1, 3), Rational64::new(1, 3)),
                (Rational64::new(2, 3), Rational64::new(1, 3)),
                (Rational64::new(1, 3), Rational64::new(2, 3)),
            ],
            2,
            2,
        )
        .unwrap();
        let s = eval_s(&c, &f, &WeightSeq::unit(2), &WeightSeq::unit(2), &sliver).unwrap();
        assert_eq!(s.terms, 0);
        assert_eq!(s.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_point_is_single_term() {
        let c = ctx(7);
        let f = PolySpec::monomial(&c, 1);
        let s = eval_s(&c, &f, &WeightSeq::unit(1), &WeightSeq::unit(1), &rect(1, 1)).unwrap();
        assert!((s.value - c.e_p(1)).norm() < 1e-12);
    }

    #[test]
    fn weight_too_short_rejected() {
        let c = ctx(7);
        let f = PolySpec::monomial(&c, 1);
        let r = rect(3, 3);
        let short = WeightSeq::unit(2);
        assert!(matches!(
            eval_s(&c, &f, &short, &WeightSeq::unit(3), &r),
            Err(Error::WeightTooShort { .. })
        ));
    }

    #[test]
    fn t_over_complete_ranges_vanishes() {
        let c = ctx(7);
        let f = PolySpec::monomial(&c, 1);
        let chi = MultChar::quadratic(&c);
        let r = rect(7, 7);
        let t = eval_t(&c, &chi, &f, &WeightSeq::unit(7), &WeightSeq::unit(7), &r).unwrap();
        assert!(t.value.norm() < 1e-6);
        assert_eq!(t.excluded, 0);
        assert_eq!(t.terms, 49);
    }

    #[test]
    fn t_over_empty_region_is_zero() {
        let c = ctx(7);
        let f = PolySpec::monomial(&c, 1);
        let chi = MultChar::quadratic(&c);
        let sliver = ConvexRegion::from_polygon(
            vec![
                (Rational64::new(1, 3), Rational64::new(1, 3)),
                (Rational64::new(2, 3), Rational64::new(1, 3)),
                (Rational64::new(1, 3), Rational64::new(2, 3)),
            ],
            2,
            2,
        )
        .unwrap();
        let t = eval_t(&c, &chi, &f, &WeightSeq::unit(2), &WeightSeq::unit(2), &sliver).unwrap();
        assert_eq!(t.terms, 0);
        assert_eq!(t.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn t_single_point_quadratic() {
        // (u,v) = (1,1), f = X: chi(2) = 1 since 2 = 3^2 mod 7
        let c = ctx(7);
        let f = PolySpec::monomial(&c, 1);
        let chi = MultChar::quadratic(&c);
        let t = eval_t(&c, &chi, &f, &WeightSeq::unit(1), &WeightSeq::unit(1), &rect(1, 1)).unwrap();
        assert!((t.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn t_matches_reweighted_s_shape() {
        // with alpha~_u = alpha_u chi(f(u)), T equals
        // sum alpha~_u beta_v chi(v/f(u) + 1) whenever f(u) != 0 on [1,U]
        let c = ctx(13);
        let f = PolySpec::new(&c, &[1, 0, 1]).unwrap(); // X^2 + 1, no root in [1,4]
        let chi = MultChar::new(&c, 12, 5).unwrap();
        let a = WeightSeq::random(4, 3);
        let b = WeightSeq::random(6, 4);
        let r = rect(4, 6);
        let direct = eval_t(&c, &chi, &f, &a, &b, &r).unwrap().value;
        let mut rewritten = PairwiseSum::new();
        for u in 1..=4u64 {
            let fu = f.eval(&c, u);
            assert_ne!(fu, 0);
            let alpha = a.at(u) * chi.eval(&c, fu);
            let w = c.inv(fu).unwrap();
            for v in 1..=6u64 {
                let arg = c.add(c.mul(v, w), 1);
                rewritten.push(alpha * b.at(v) * chi.eval(&c, arg));
            }
        }
        assert!((direct - rewritten.total()).norm() < 1e-9);
    }

    #[test]
    fn k_is_s_with_linear_poly_bitwise() {
        let c = ctx(31);
        let a = WeightSeq::random(10, 1);
        let b = WeightSeq::random(10, 2);
        let r = rect(10, 10);
        let via_k = eval_k(&c, 3, 4, &a, &b, &r).unwrap();
        let f = PolySpec::linear(&c, 3, 4).unwrap();
        let via_s = eval_s(&c, &f, &a, &b, &r).unwrap();
        assert_eq!(via_k.value.re.to_bits(), via_s.value.re.to_bits());
        assert_eq!(via_k.value.im.to_bits(), via_s.value.im.to_bits());
        assert_eq!(via_k.terms, via_s.terms);
    }

    #[test]
    fn k_complete_and_exclusion() {
        let c = ctx(11);
        let r = rect(10, 10);
        let k = eval_k(&c, 1, 0, &WeightSeq::unit(10), &WeightSeq::unit(10), &r).unwrap();
        assert!((k.value - Complex64::new(-10.0, 0.0)).norm() < 1e-6);

        let k5 = eval_k(&c, 1, 0, &WeightSeq::unit(1), &WeightSeq::unit(1), &rect(1, 1)).unwrap();
        let c5 = ctx(5);
        let k5b = eval_k(&c5, 1, 0, &WeightSeq::unit(1), &WeightSeq::unit(1), &rect(1, 1)).unwrap();
        assert!((k5b.value - c5.e_p(1)).norm() < 1e-12);
        assert!(k5.terms == 1);

        // u = 1 with a*u + b = 0: the lone column is excluded
        let ke = eval_k(&c, 1, -1, &WeightSeq::unit(1), &WeightSeq::unit(3), &rect(1, 3)).unwrap();
        assert_eq!(ke.excluded, 1);
        assert_eq!(ke.terms, 0);
        assert_eq!(ke.value, Complex64::new(0.0, 0.0));

        assert!(matches!(
            eval_k(&c, 11, 1, &WeightSeq::unit(1), &WeightSeq::unit(1), &rect(1, 1)),
            Err(Error::ZeroLeadingCoeff)
        ));
    }

    #[test]
    fn single_weight_specializes() {
        let c = ctx(11);
        let f = PolySpec::monomial(&c, 1);
        let r = rect(10, 10);
        let single = eval_s_single(&c, &f, &WeightSeq::unit(10), &r).unwrap();
        let full = eval_s(&c, &f, &WeightSeq::unit(10), &WeightSeq::unit(10), &r).unwrap();
        assert_eq!(single.value, full.value);
    }

    #[test]
    fn incomplete_sum_examples() {
        let c = ctx(7);
        // alpha = 0: the sum is exactly the length
        let zero = incomplete_linear_sum(&c, 0, 1, 0, 5).unwrap();
        assert!((zero - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        // complete sum vanishes
        let complete = incomplete_linear_sum(&c, 1, 1, 0, 7).unwrap();
        assert!(complete.norm() < 1e-9 * 7.0);
        // direct three-term check
        let s = incomplete_linear_sum(&c, 1, 1, 0, 3).unwrap();
        let direct = c.e_p(1) + c.e_p(2) + c.e_p(3);
        assert!((s - direct).norm() < 1e-12);
        assert!(matches!(
            incomplete_linear_sum(&c, 1, 7, 0, 3),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn weyl_sum_examples() {
        let c = ctx(101);
        let constant = PolySpec::new(&c, &[5]).unwrap();
        let w = weyl_sum(&c, &constant, 10);
        assert!((w - c.e_p(5) * Complex64::new(10.0, 0.0)).norm() < 1e-9);

        let linear = PolySpec::monomial(&c, 1);
        let full = weyl_sum(&c, &linear, 100);
        assert!((full - Complex64::new(-1.0, 0.0)).norm() < 1e-9 * 101.0);

        // 10-term cubic: the direct sum is its own oracle
        let cubic = PolySpec::monomial(&c, 3);
        let got = weyl_sum(&c, &cubic, 10);
        let oracle = pairwise_sum((1..=10i64).map(|u| c.e_p(u * u * u)));
        assert!((got - oracle).norm() < 1e-12);
    }

    #[test]
    fn wooley_bound_examples() {
        let c = ctx(101);
        // U = p, d = 3: U (1/U + p/U^3)^{1/4} = p (1/p + 1/p^2)^{1/4}
        let at_p = wooley_bound(&c, 3, 101).unwrap();
        let expect = 101.0 * (1.0 / 101.0 + (101.0f64).powi(-2)).powf(0.25);
        assert!((at_p - expect).abs() < 1e-9);
        let at_1 = wooley_bound(&c, 3, 1).unwrap();
        assert!((at_1 - 102.0f64.powf(0.25)).abs() < 1e-9);
        assert!(matches!(
            wooley_bound(&c, 2, 10),
            Err(Error::DegreeTooSmall { .. })
        ));

        let c4 = FieldContext::new(10_007).unwrap();
        let b4 = wooley_bound(&c4, 4, 100).unwrap();
        let expect = 100.0 * (0.01 + 10_007.0 / 1e8f64).powf(1.0 / 12.0);
        assert!((b4 - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn vertical_slicing_is_additive() {
        let c = ctx(23);
        let f = PolySpec::new(&c, &[2, 1, 1]).unwrap();
        let a = WeightSeq::random(12, 5);
        let b = WeightSeq::random(9, 6);
        let whole = rect(12, 9);
        let int = |n: i64| Rational64::from_integer(n);
        // cut between u = 5 and u = 6 so no lattice column lands in both slabs
        let cut = Rational64::new(11, 2);
        let left = ConvexRegion::from_polygon(
            vec![(int(0), int(0)), (cut, int(0)), (cut, int(9)), (int(0), int(9))],
            12,
            9,
        )
        .unwrap();
        let right = ConvexRegion::from_polygon(
            vec![(cut, int(0)), (int(12), int(0)), (int(12), int(9)), (cut, int(9))],
            12,
            9,
        )
        .unwrap();
        let s_whole = eval_s(&c, &f, &a, &b, &whole).unwrap();
        let s_left = eval_s(&c, &f, &a, &b, &left).unwrap();
        let s_right = eval_s(&c, &f, &a, &b, &right).unwrap();
        assert_eq!(s_left.terms + s_right.terms, s_whole.terms);
        let diff = (s_left.value + s_right.value - s_whole.value).norm();
        assert!(diff <= 1e-9 * s_whole.terms as f64);
    }

    #[test]
    fn hard_cauchy_schwarz_bound_smoke() {
        let c = ctx(97);
        for seed in 0..10u64 {
            let f = PolySpec::new(&c, &[seed as i64 + 1, 3, 1]).unwrap();
            let a = WeightSeq::random(40, seed);
            let b = WeightSeq::random(50, seed + 100);
            let r = rect(40, 50);
            let s = eval_s(&c, &f, &a, &b, &r).unwrap();
            let cap = (2.0 * 40.0 * 50.0 * 97.0f64).sqrt();
            assert!(s.value.norm() <= cap + 1e-6);
            assert!(s.value.norm() <= s.terms as f64 + 1e-6);
        }
    }
}
