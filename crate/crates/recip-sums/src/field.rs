//! Prime-field arithmetic, additive and multiplicative characters, and
//! residue-magnitude functions.
//!
//! Elements of F_p are canonical residues in `[0, p)` stored as `u64`;
//! products are taken through `u128`, so any desk-scale modulus (p up to
//! about 10^6, and far beyond) is safe. The additive character is
//! `e_p(z) = exp(2*pi*i*z/p)`; multiplicative characters are parameterized
//! by `(order m, index j)` relative to the smallest primitive root g of p:
//! `chi(g^k) = exp(2*pi*i*j*k/m)` with m | p-1 and 1 <= j <= m-1, extended
//! by `chi(0) = 0`. The residue magnitude `rho(a)` is the distance from a
//! to the nearest multiple of p, extended to fractions u/v through the
//! modular inverse of v.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Default cap on the discrete-log index table (number of entries). Above
/// the cap, discrete logs fall back to baby-step giant-step on demand.
pub const INDEX_TABLE_CAP: u64 = 100_000;

/// An odd prime modulus with its smallest primitive root and (for small p)
/// a full index table `ind[g^k mod p] = k`.
#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u64,
    g: u64,
    ind: Option<Vec<u32>>,
}

impl FieldContext {
    /// Builds the context for an odd prime `p`, with the default index cap.
    pub fn new(p: u64) -> Result<Self> {
        Self::with_index_cap(p, INDEX_TABLE_CAP)
    }

    /// Same as [`FieldContext::new`] but with an explicit index-table cap
    /// (`cap = 0` forces the baby-step giant-step fallback).
    pub fn with_index_cap(p: u64, cap: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let g = primitive_root(p);
        let ind = if p <= cap {
            let mut table = vec![u32::MAX; p as usize];
            let mut x = 1u64;
            for k in 0..p - 1 {
                table[x as usize] = k as u32;
                x = mul_mod(x, g, p);
            }
            Some(table)
        } else {
            None
        };
        Ok(FieldContext { p, g, ind })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Smallest primitive root of p.
    pub fn generator(&self) -> u64 {
        self.g
    }

    pub fn has_index_table(&self) -> bool {
        self.ind.is_some()
    }

    /// Canonical residue of an arbitrary integer.
    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.p)
    }

    /// Inverse of a nonzero residue; `x * inv(x) = 1 (mod p)`.
    pub fn inv(&self, x: u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(pow_mod(x, self.p - 2, self.p))
    }

    /// Smallest-by-absolute-value residue magnitude: `min_k |a - k p|`,
    /// always in `[0, p/2]`.
    pub fn rho_int(&self, a: i64) -> u64 {
        let r = self.reduce(a);
        r.min(self.p - r)
    }

    /// rho extended to fractions: `|w|` for the unique `w = u/v (mod p)`
    /// with `|w| < p/2`.
    pub fn rho_frac(&self, u: i64, v: i64) -> Result<u64> {
        let den = self.reduce(v);
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let w = self.mul(self.reduce(u), self.inv(den)?);
        Ok(w.min(self.p - w))
    }

    /// Additive character `e_p(z) = exp(2 pi i z / p)`. The argument is
    /// reduced mod p before evaluating, so `e_p(z + p)` is bitwise equal
    /// to `e_p(z)`.
    pub fn e_p(&self, z: i64) -> Complex64 {
        let r = self.reduce(z);
        let theta = std::f64::consts::TAU * (r as f64) / (self.p as f64);
        Complex64::new(theta.cos(), theta.sin())
    }

    /// Discrete log base g of a nonzero residue (index table when present,
    /// baby-step giant-step otherwise).
    pub fn index_of(&self, x: u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        if let Some(table) = &self.ind {
            return Ok(table[x as usize] as u64);
        }
        Ok(self.bsgs(x))
    }

    fn bsgs(&self, x: u64) -> u64 {
        let p = self.p;
        let n = p - 1;
        let m = (n as f64).sqrt().ceil() as u64;
        let mut baby = std::collections::HashMap::with_capacity(m as usize);
        let mut cur = 1u64;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = mul_mod(cur, self.g, p);
        }
        // cur = g^m; step by g^{-m}
        let giant = pow_mod(pow_mod(self.g, m, p), p - 2, p);
        let mut gamma = x;
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma) {
                return (i * m + j) % n;
            }
            gamma = mul_mod(gamma, giant, p);
        }
        unreachable!("bsgs: {} has no discrete log mod {}", x, p);
    }
}

/// Polynomial over F_p with exact degree: coefficients `a_0..a_d`, leading
/// coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySpec {
    coeffs: Vec<u64>,
}

impl PolySpec {
    /// Coefficients in ascending order `a_0, ..., a_d`, reduced mod p.
    pub fn new(ctx: &FieldContext, coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ZeroLeadingCoeff);
        }
        let reduced: Vec<u64> = coeffs.iter().map(|&c| ctx.reduce(c)).collect();
        if *reduced.last().unwrap() == 0 {
            return Err(Error::ZeroLeadingCoeff);
        }
        Ok(PolySpec { coeffs: reduced })
    }

    /// `f(X) = a X + b`, the Kloosterman-fraction denominator.
    pub fn linear(ctx: &FieldContext, a: i64, b: i64) -> Result<Self> {
        Self::new(ctx, &[b, a])
    }

    /// `f(X) = X^d`.
    pub fn monomial(ctx: &FieldContext, d: u64) -> Self {
        let mut coeffs = vec![0i64; d as usize + 1];
        coeffs[d as usize] = 1;
        Self::new(ctx, &coeffs).expect("monic monomial")
    }

    pub fn degree(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation mod p.
    pub fn eval(&self, ctx: &FieldContext, x: u64) -> u64 {
        let x = x % ctx.p();
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        acc
    }
}

/// Nonprincipal multiplicative character of F_p^*, `chi(g^k) = e(jk/m)`,
/// extended by `chi(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultChar {
    p: u64,
    m: u64,
    j: u64,
}

impl MultChar {
    /// Character of order divisor `m | p-1` and index `1 <= j <= m-1`.
    pub fn new(ctx: &FieldContext, m: u64, j: u64) -> Result<Self> {
        let pm1 = ctx.p() - 1;
        if m < 2 || !pm1.is_multiple_of(m) {
            return Err(Error::BadCharOrder { m, pm1 });
        }
        if j == 0 || j >= m {
            return Err(Error::BadCharIndex { j, max: m - 1 });
        }
        Ok(MultChar { p: ctx.p(), m, j })
    }

    /// The quadratic character (Legendre symbol).
    pub fn quadratic(ctx: &FieldContext) -> Self {
        Self::new(ctx, 2, 1).expect("p odd, so 2 | p-1")
    }

    /// All p-2 nonprincipal characters, as order p-1 and index 1..p-2.
    pub fn all_nonprincipal(ctx: &FieldContext) -> impl Iterator<Item = MultChar> {
        let p = ctx.p();
        (1..p - 1).map(move |j| MultChar { p, m: p - 1, j })
    }

    pub fn order_divisor(&self) -> u64 {
        self.m
    }

    pub fn index(&self) -> u64 {
        self.j
    }

    /// `chi(x)`; zero at x = 0, a root of unity otherwise.
    pub fn eval(&self, ctx: &FieldContext, x: u64) -> Complex64 {
        debug_assert_eq!(self.p, ctx.p(), "character evaluated in a different field");
        let x = x % self.p;
        if x == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = ctx.index_of(x).expect("nonzero residue has an index");
        let t = ((self.j as u128 * k as u128) % self.m as u128) as u64;
        let theta = std::f64::consts::TAU * (t as f64) / (self.m as f64);
        Complex64::new(theta.cos(), theta.sin())
    }
}

/// Trial-division primality (desk scale).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest `g >= 2` generating F_p^*: checks `g^((p-1)/q) != 1` for every
/// prime q | p-1.
pub fn primitive_root(p: u64) -> u64 {
    let n = p - 1;
    let factors = distinct_prime_factors(n);
    'candidate: for g in 2..p {
        for &q in &factors {
            if pow_mod(g, n / q, p) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root");
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Primes in `[lo, hi]` by sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let hi = hi as usize;
    let mut composite = vec![false; hi + 1];
    let mut primes = Vec::new();
    for n in 2..=hi {
        if !composite[n] {
            if n as u64 >= lo {
                primes.push(n as u64);
            }
            let mut m = n * n;
            while m <= hi {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accum::pairwise_sum;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    #[test]
    fn rejects_non_primes_and_even() {
        assert!(matches!(FieldContext::new(9), Err(Error::NotOddPrime(9))));
        assert!(matches!(FieldContext::new(2), Err(Error::NotOddPrime(2))));
        assert!(matches!(FieldContext::new(1), Err(Error::NotOddPrime(1))));
    }

    #[test]
    fn mod_inv_examples() {
        assert_eq!(ctx(11).inv(2).unwrap(), 6);
        assert_eq!(ctx(7).inv(1).unwrap(), 1);
        assert_eq!(ctx(11).inv(3).unwrap(), 4);
        assert!(matches!(ctx(11).inv(0), Err(Error::ZeroInverse)));
    }

    #[test]
    fn mod_inv_involution_exhaustive() {
        for p in [5u64, 31, 101] {
            let c = ctx(p);
            for x in 1..p {
                let y = c.inv(x).unwrap();
                assert_eq!(c.mul(x, y), 1);
                assert_eq!(c.inv(y).unwrap(), x);
            }
        }
    }

    #[test]
    fn rho_int_examples() {
        let c = ctx(17);
        assert_eq!(c.rho_int(9), 8);
        assert_eq!(c.rho_int(0), 0);
        assert_eq!(c.rho_int(18), 1);
    }

    #[test]
    fn rho_int_symmetry_and_range() {
        let c = ctx(43);
        for a in -100i64..=100 {
            let r = c.rho_int(a);
            assert_eq!(r, c.rho_int(-a));
            assert_eq!(r, c.rho_int(a + 43));
            assert!(2 * r <= 43);
        }
    }

    #[test]
    fn rho_frac_examples() {
        assert_eq!(ctx(7).rho_frac(1, 1).unwrap(), 1);
        assert_eq!(ctx(11).rho_frac(0, 5).unwrap(), 0);
        assert!(matches!(ctx(11).rho_frac(1, 11), Err(Error::ZeroDenominator)));
        // 1/2 mod 11: enumerate w with 2w = 1 (mod 11), |w| < 11/2.
        let mut expect = None;
        for w in -5i64..=5 {
            if (2 * w).rem_euclid(11) == 1 {
                expect = Some(w.unsigned_abs());
            }
        }
        assert_eq!(ctx(11).rho_frac(1, 2).unwrap(), expect.unwrap());
        assert_eq!(ctx(11).rho_frac(1, 2).unwrap(), 5);
    }

    #[test]
    fn e_p_basics() {
        let c = ctx(13);
        assert_eq!(c.e_p(0), num_complex::Complex64::new(1.0, 0.0));
        // periodicity is bitwise because the argument is reduced first
        assert_eq!(c.e_p(13).re.to_bits(), c.e_p(0).re.to_bits());
        assert_eq!(c.e_p(5 + 13), c.e_p(5));
    }

    #[test]
    fn additive_orthogonality() {
        for p in [5u64, 7, 101] {
            let c = ctx(p);
            for coef in [1i64, 2, (p - 1) as i64] {
                let total = pairwise_sum((0..p as i64).map(|v| c.e_p(coef * v)));
                assert!(total.norm() <= 1e-9 * p as f64, "p={p} c={coef}");
            }
            let zero_sum = pairwise_sum((0..p as i64).map(|v| c.e_p(v)));
            assert!(zero_sum.norm() <= 1e-9 * p as f64);
        }
    }

    #[test]
    fn primitive_root_examples() {
        // exhaustive order check as the oracle
        let order = |g: u64, p: u64| (1..p).find(|&k| pow_mod(g, k, p) == 1).unwrap();
        assert_eq!(order(2, 7), 3);
        assert_eq!(order(3, 7), 6);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(5), 2); // powers of 2 mod 5: 2,4,3,1
        assert_eq!(primitive_root(3), 2);
    }

    #[test]
    fn index_table_inverts_powers() {
        let c = ctx(101);
        for k in 0..100u64 {
            let x = pow_mod(c.generator(), k, 101);
            assert_eq!(c.index_of(x).unwrap(), k);
        }
    }

    #[test]
    fn bsgs_matches_table() {
        let table = FieldContext::new(1009).unwrap();
        let nolookup = FieldContext::with_index_cap(1009, 0).unwrap();
        assert!(!nolookup.has_index_table());
        for x in [1u64, 2, 3, 500, 1008] {
            assert_eq!(table.index_of(x).unwrap(), nolookup.index_of(x).unwrap());
        }
    }

    #[test]
    fn chi_examples() {
        let c = ctx(7);
        let chi = MultChar::quadratic(&c);
        // squares mod 7: {1, 4, 2} so 2 is a QR
        let squares: std::collections::HashSet<u64> = (1..7).map(|x| x * x % 7).collect();
        assert!(squares.contains(&2));
        assert!((chi.eval(&c, 2) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(chi.eval(&c, 0), Complex64::new(0.0, 0.0));
        assert!((chi.eval(&c, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn chi_multiplicative_exhaustive_small() {
        for p in [5u64, 7, 13] {
            let c = ctx(p);
            for chi in MultChar::all_nonprincipal(&c) {
                for x in 1..p {
                    for y in 1..p {
                        let lhs = chi.eval(&c, c.mul(x, y));
                        let rhs = chi.eval(&c, x) * chi.eval(&c, y);
                        assert!((lhs - rhs).norm() < 1e-10, "p={p} x={x} y={y}");
                    }
                }
            }
        }
    }

    #[test]
    fn chi_orthogonality() {
        for p in [5u64, 7, 11, 13] {
            let c = ctx(p);
            for chi in MultChar::all_nonprincipal(&c) {
                let total = pairwise_sum((0..p).map(|x| chi.eval(&c, x)));
                assert!(total.norm() <= 1e-9 * p as f64);
            }
        }
    }

    #[test]
    fn poly_eval_examples() {
        let c11 = ctx(11);
        let f = PolySpec::monomial(&c11, 1);
        assert_eq!(f.eval(&c11, 5), 5);
        let c7 = ctx(7);
        let g = PolySpec::new(&c7, &[1, 0, 1]).unwrap(); // X^2 + 1
        assert_eq!(g.eval(&c7, 3), 3); // 10 mod 7
        let h = PolySpec::new(&c11, &[3, 2]).unwrap(); // 2X + 3
        assert_eq!(h.eval(&c11, 4), 0); // 11 mod 11
    }

    #[test]
    fn poly_requires_exact_degree() {
        let c = ctx(11);
        assert!(matches!(PolySpec::new(&c, &[1, 11]), Err(Error::ZeroLeadingCoeff)));
        assert!(matches!(PolySpec::new(&c, &[]), Err(Error::ZeroLeadingCoeff)));
        assert_eq!(PolySpec::new(&c, &[5]).unwrap().degree(), 0);
    }

    #[test]
    fn char_order_index_validation() {
        let c = ctx(13);
        assert!(MultChar::new(&c, 5, 1).is_err()); // 5 does not divide 12
        assert!(MultChar::new(&c, 4, 0).is_err());
        assert!(MultChar::new(&c, 4, 4).is_err());
        assert!(MultChar::new(&c, 4, 3).is_ok());
    }

    #[test]
    fn primes_in_interval() {
        assert_eq!(primes_in(2, 4), vec![2, 3]);
        assert_eq!(primes_in(3, 6), vec![3, 5]);
        assert_eq!(primes_in(14, 16), Vec::<u64>::new());
    }
}
