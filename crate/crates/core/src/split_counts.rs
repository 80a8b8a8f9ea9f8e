//! Counts of split-like graphs: `N_{n,m}(ℓ)`, the fixed point `ℓ_{n,m}`, the
//! ratio functions `a(ℓ)`, `b(ℓ)` and the close-to-split bounds.
//!
//! `ln` is the natural logarithm throughout.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{binomial, falling, ln_big, ln_binomial, Rational};

/// Default regime constant: `m <= λ n²`.
pub const DEFAULT_LAMBDA: f64 = 1.0 / 64.0;

/// Natural log of a nonnegative count; `-inf` encodes zero.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogCount(f64);

impl LogCount {
    pub const ZERO: LogCount = LogCount(f64::NEG_INFINITY);

    pub fn from_ln(ln: f64) -> Self {
        LogCount(ln)
    }

    pub fn from_count(x: &BigInt) -> Self {
        if x.is_zero() {
            Self::ZERO
        } else {
            LogCount(ln_big(x.clone()))
        }
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Log of a product.
    pub fn times(self, other: LogCount) -> LogCount {
        if self.is_zero() || other.is_zero() {
            Self::ZERO
        } else {
            LogCount(self.0 + other.0)
        }
    }
}

impl Add for LogCount {
    type Output = LogCount;

    /// Log of a sum, by log-sum-exp.
    fn add(self, other: LogCount) -> LogCount {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if lo == f64::NEG_INFINITY {
            return LogCount(hi);
        }
        LogCount(hi + (lo - hi).exp().ln_1p())
    }
}

impl std::iter::Sum for LogCount {
    fn sum<I: Iterator<Item = LogCount>>(iter: I) -> Self {
        // two passes keep the exponentials bounded by 1
        let v: Vec<f64> = iter.map(|x| x.0).collect();
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi == f64::NEG_INFINITY {
            return LogCount::ZERO;
        }
        LogCount(hi + v.iter().map(|x| (x - hi).exp()).sum::<f64>().ln())
    }
}

impl fmt::Display for LogCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn c2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Whether `C(ℓ,2) <= m <= ℓ(n-ℓ) + C(ℓ,2)`.
pub fn is_feasible(n: u64, m: u64, ell: u64) -> bool {
    ell <= n && c2(ell) <= m && m - c2(ell) <= ell * (n - ell)
}

/// `N_{n,m}(ℓ) = C(ℓ(n-ℓ), m - C(ℓ,2))`, zero when infeasible.
pub fn n_nm(n: u64, m: u64, ell: u64) -> BigInt {
    if !is_feasible(n, m, ell) {
        return BigInt::zero();
    }
    binomial(ell * (n - ell), m - c2(ell))
}

pub fn log_n_nm(n: u64, m: u64, ell: u64) -> LogCount {
    if !is_feasible(n, m, ell) {
        return LogCount::ZERO;
    }
    LogCount(ln_binomial((ell * (n - ell)) as f64, (m - c2(ell)) as f64))
}

/// Feasible `ℓ` range for `(n, m)`, empty when `m > C(n,2)`.
pub fn feasible_range(n: u64, m: u64) -> std::ops::RangeInclusive<u64> {
    let hi = (0..=n).rev().find(|&l| c2(l) <= m).unwrap_or(0);
    // m <= ℓ(n-ℓ) + C(ℓ,2) is increasing in ℓ on 0..=n
    let lo = (0..=hi).find(|&l| is_feasible(n, m, l));
    match lo {
        Some(lo) => lo..=hi,
        #[allow(clippy::reversed_empty_ranges)]
        None => 1..=0,
    }
}

/// `ℓ_{n,m}` for real arguments, via damped iteration of
/// `ℓ <- sqrt(m / ln(ℓ n / m))`.
pub fn ell_nm_real(n: f64, m: f64, lambda: f64) -> Result<f64> {
    if !(m > n) || !(n > 0.0) {
        return Err(Error::invalid(format!("ℓ_(n,m) needs m > n (n = {n}, m = {m})")));
    }
    if m > lambda * n * n {
        return Err(Error::invalid(format!("m = {m} exceeds λ n² with λ = {lambda}")));
    }
    let step = |l: f64| (m / (l * n / m).ln()).sqrt();
    let mut l = (m / (n * n / m).ln()).sqrt();
    for _ in 0..10_000 {
        let next = 0.5 * l + 0.5 * step(l);
        if !next.is_finite() || next * n <= m {
            return Err(Error::Numeric(format!("ℓ iteration left the domain at n = {n}, m = {m}")));
        }
        let done = ((next - l) / next).abs() < 1e-9;
        l = next;
        if done {
            let resid = (l * l * (l * n / m).ln() - m).abs();
            if resid > 1e-6 * m {
                return Err(Error::Numeric(format!("ℓ fixed point residual {resid} at n = {n}, m = {m}")));
            }
            return Ok(l);
        }
    }
    Err(Error::Numeric(format!("ℓ iteration did not converge at n = {n}, m = {m}")))
}

pub fn ell_nm(n: u64, m: u64, lambda: f64) -> Result<f64> {
    ell_nm_real(n as f64, m as f64, lambda)
}

/// Exact maximiser of `ℓ -> N_{n,m}(ℓ)` by a full log-space scan, ties to the
/// smallest `ℓ`.
pub fn argmax_n_nm(n: u64, m: u64) -> Result<u64> {
    let range = feasible_range(n, m);
    if range.is_empty() {
        return Err(Error::invalid(format!("no feasible ℓ for n = {n}, m = {m}")));
    }
    let best = range
        .into_par_iter()
        .map(|l| (log_n_nm(n, m, l).ln(), l))
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    Ok(best.1)
}

/// Numerators and denominators of `a(ℓ)` and `b(ℓ)` before reduction.
#[derive(Clone, Debug)]
pub struct RatioParts {
    pub a_num: BigInt,
    pub a_den: BigInt,
    pub b_num: BigInt,
    pub b_den: BigInt,
}

pub fn ratio_parts(n: u64, m: u64, ell: u64) -> Result<RatioParts> {
    if !is_feasible(n, m, ell) || !is_feasible(n, m, ell + 1) {
        return Err(Error::invalid(format!(
            "ratios need N(ℓ) and N(ℓ+1) nonzero (n = {n}, m = {m}, ℓ = {ell})"
        )));
    }
    let j1 = m - c2(ell + 1);
    let x = ell * (n - ell);
    let parts = RatioParts {
        a_num: falling((ell + 1) * (n - ell - 1), j1),
        a_den: falling(x, j1),
        b_num: falling(m - c2(ell), ell),
        b_den: falling(x + c2(ell + 1) - m, ell),
    };
    if parts.a_den.is_zero() || parts.b_den.is_zero() {
        return Err(Error::invalid("ratio denominator vanishes"));
    }
    Ok(parts)
}

/// `a(ℓ) = ((ℓ+1)(n-ℓ-1))_j / (ℓ(n-ℓ))_j` with `j = m - C(ℓ+1,2)`.
pub fn ratio_a(n: u64, m: u64, ell: u64) -> Result<Rational> {
    let p = ratio_parts(n, m, ell)?;
    Ok(Rational::new(p.a_num, p.a_den))
}

/// `b(ℓ) = (m - C(ℓ,2))_ℓ / (ℓ(n-ℓ) - m + C(ℓ+1,2))_ℓ`.
pub fn ratio_b(n: u64, m: u64, ell: u64) -> Result<Rational> {
    let p = ratio_parts(n, m, ell)?;
    Ok(Rational::new(p.b_num, p.b_den))
}

/// `N(ℓ+1) · den = N(ℓ) · num`, compared as big integers.
pub fn ratio_identity_holds(n: u64, m: u64, ell: u64) -> Result<bool> {
    let p = ratio_parts(n, m, ell)?;
    Ok(n_nm(n, m, ell + 1) * &p.a_den * &p.b_den == n_nm(n, m, ell) * &p.a_num * &p.b_num)
}

/// Log-space bracketing of `a(ℓ)` and `b(ℓ)`; the upper bound on `a` is absent
/// when `ℓ(n-ℓ) <= m`.
#[derive(Clone, Copy, Debug)]
pub struct RatioBounds {
    pub ln_a_lower: f64,
    pub ln_a_upper: Option<f64>,
    pub ln_b_lower: f64,
    pub ln_b_upper: f64,
}

pub fn ratio_bounds(n: u64, m: u64, ell: u64) -> Result<RatioBounds> {
    ratio_parts(n, m, ell)?;
    let (nf, mf, lf) = (n as f64, m as f64, ell as f64);
    let x = lf * (nf - lf);
    let j1 = (m - c2(ell + 1)) as f64;
    let gap = nf - 2.0 * lf - 1.0;
    let (c_l, c_l1) = (c2(ell) as f64, c2(ell + 1) as f64);
    Ok(RatioBounds {
        ln_a_lower: j1 * (gap / x).ln_1p(),
        ln_a_upper: (x > mf).then(|| j1 * (gap / (x - mf)).ln_1p()),
        ln_b_lower: lf * ((mf - c_l1) / (x - mf + c_l1)).ln(),
        ln_b_upper: lf * ((mf - c_l) / (x - mf + c_l)).ln(),
    })
}

/// `(max_ℓ ln N, ln Σ_ℓ C(n,ℓ) N(ℓ))`, bracketing `ln |S_{n,m}|`.
pub fn snm_bounds(n: u64, m: u64) -> Result<(LogCount, LogCount)> {
    let range = feasible_range(n, m);
    if range.is_empty() {
        return Err(Error::invalid(format!("no split graph with n = {n}, m = {m}")));
    }
    let terms: Vec<(LogCount, LogCount)> = range
        .map(|l| {
            let ln_n = log_n_nm(n, m, l);
            (ln_n, ln_n.times(LogCount(ln_binomial(n as f64, l as f64))))
        })
        .collect();
    let lower = terms.iter().map(|t| t.0).fold(LogCount::ZERO, |a, b| if b > a { b } else { a });
    let upper = terms.into_iter().map(|t| t.1).sum();
    Ok((lower, upper))
}

/// `ln |S_{n,m}| + ln C(m, ⌊εm⌋) + ln C(C(n,2), ⌊εm⌋)` using the upper bracket.
pub fn close_to_split_log_bound(n: u64, m: u64, eps: f64) -> Result<LogCount> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("ε must lie in (0, 1)"));
    }
    let (_, upper) = snm_bounds(n, m)?;
    let k = (eps * m as f64).floor();
    let extra = ln_binomial(m as f64, k) + ln_binomial(c2(n) as f64, k);
    Ok(upper.times(LogCount(extra)))
}

/// One row of the location grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub n: u64,
    pub m: u64,
    pub ell_nm: f64,
    pub ell_star: u64,
    pub log_n_star: f64,
    /// `ln N(⌊ℓ_{n,m}/2⌋)`.
    pub log_n_lower_tail: f64,
    /// `ln N(⌈2ℓ_{n,m}⌉)`.
    pub log_n_upper_tail: f64,
    /// `ln N(round(ℓ_{n,m}))`.
    pub log_n_rounded: f64,
}

impl GridRow {
    pub fn compute(n: u64, m: u64, lambda: f64) -> Result<Self> {
        let ell = ell_nm(n, m, lambda)?;
        let ell_star = argmax_n_nm(n, m)?;
        Ok(GridRow {
            n,
            m,
            ell_nm: ell,
            ell_star,
            log_n_star: log_n_nm(n, m, ell_star).ln(),
            log_n_lower_tail: log_n_nm(n, m, (ell / 2.0).floor() as u64).ln(),
            log_n_upper_tail: log_n_nm(n, m, (2.0 * ell).ceil() as u64).ln(),
            log_n_rounded: log_n_nm(n, m, ell.round() as u64).ln(),
        })
    }

    /// `ℓ* ∈ (ℓ/2, 2ℓ)`.
    pub fn location_holds(&self) -> bool {
        let l = self.ell_star as f64;
        self.ell_nm / 2.0 < l && l < 2.0 * self.ell_nm
    }

    /// `ln N(round ℓ) >= m ln 5`, with `slack` relative tolerance.
    pub fn five_power_holds(&self, slack: f64) -> bool {
        let rhs = self.m as f64 * 5f64.ln();
        self.log_n_rounded >= rhs - slack * rhs.abs()
    }

    /// Both tail points sit at least `m/15` below the maximum.
    pub fn tails_hold(&self, slack: f64) -> bool {
        let cap = self.log_n_star - self.m as f64 / 15.0;
        let tol = slack * self.log_n_star.abs();
        self.log_n_lower_tail <= cap + tol && self.log_n_upper_tail <= cap + tol
    }

    pub fn csv_header() -> &'static str {
        "n,m,ell_nm,ell_star,logN_star,logN_lower_tail,logN_upper_tail"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.9},{},{:.6},{:.6},{:.6}",
            self.n, self.m, self.ell_nm, self.ell_star, self.log_n_star, self.log_n_lower_tail, self.log_n_upper_tail
        )
    }
}

/// `points` log-spaced integers from `⌈n^{1.2}⌉` to `⌊λ n²⌋`, deduplicated.
pub fn grid_ms(n: u64, points: usize, lambda: f64) -> Vec<u64> {
    let lo = (n as f64).powf(1.2).ceil();
    let hi = (lambda * (n as f64).powi(2)).floor();
    if points == 0 || hi < lo {
        return Vec::new();
    }
    let mut ms: Vec<u64> = (0..points)
        .map(|i| {
            let t = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
            (lo.ln() + t * (hi.ln() - lo.ln())).exp().round().clamp(lo, hi) as u64
        })
        .collect();
    ms.dedup();
    ms
}

/// Rows for every `n` in `ns` over [`grid_ms`], in input order.
pub fn location_grid(ns: &[u64], points: usize, lambda: f64) -> Result<Vec<GridRow>> {
    let jobs: Vec<(u64, u64)> = ns.iter().flat_map(|&n| grid_ms(n, points, lambda).into_iter().map(move |m| (n, m))).collect();
    jobs.into_par_iter().map(|(n, m)| GridRow::compute(n, m, lambda)).collect()
}

/// CSV with a leading note on the log base.
pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut out = format!("# ln = natural log\n{}\n", GridRow::csv_header());
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn n_nm_examples() {
        assert_eq!(n_nm(5, 4, 2), BigInt::from(20));
        assert_eq!(n_nm(9, 6, 4), BigInt::one());
        assert!(n_nm(5, 8, 1).is_zero());
        assert!(log_n_nm(5, 8, 1).is_zero());
        assert!((log_n_nm(5, 4, 2).ln() - 20f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_and_exact_agree() {
        for (n, m) in [(30, 50), (120, 700), (300, 2000)] {
            for l in feasible_range(n, m).step_by(3) {
                let exact = LogCount::from_count(&n_nm(n, m, l)).ln();
                let approx = log_n_nm(n, m, l).ln();
                assert!((exact - approx).abs() <= 1e-9 * exact.abs().max(1.0), "{n} {m} {l}");
            }
        }
    }

    #[test]
    fn log_sum_exp() {
        let s: LogCount = [2.0f64, 3.0, 5.0].iter().map(|x| LogCount::from_ln(x.ln())).sum();
        assert!((s.ln() - 10f64.ln()).abs() < 1e-14);
        assert_eq!((LogCount::ZERO + LogCount::from_ln(1.0)).ln(), 1.0);
        assert!([LogCount::ZERO].into_iter().sum::<LogCount>().is_zero());
    }

    #[test]
    fn ell_fixed_point() {
        let l = ell_nm(10_000, 1_000_000, DEFAULT_LAMBDA).unwrap();
        assert!((l * l * (l * 10_000.0 / 1e6).ln() - 1e6).abs() <= 1e-6 * 1e6);
        let mut prev = 0.0;
        for m in (200_000..=1_500_000).step_by(100_000) {
            let l = ell_nm(10_000, m, DEFAULT_LAMBDA).unwrap();
            assert!(l > prev);
            prev = l;
        }
        assert!(ell_nm(100, 50, DEFAULT_LAMBDA).is_err());
        assert!(ell_nm(100, 5000, DEFAULT_LAMBDA).is_err());
    }

    #[test]
    fn ell_is_small_against_sqrt_m_deep_in_regime() {
        // ln(ℓ n / m) must exceed 1/ε² = 100; with m > n that needs n beyond e^200
        for (n, m) in [(1e100, 1e110), (1e120, 1e130), (1e150, 1e160)] {
            let l = ell_nm_real(n, m, 1e-20).unwrap();
            assert!(l <= 0.1 * m.sqrt(), "{n} {m} {l}");
        }
    }

    #[test]
    fn ratio_identity_small() {
        for n in [6u64, 11, 25] {
            for m in 1..=c2(n) {
                for l in feasible_range(n, m) {
                    if is_feasible(n, m, l + 1) {
                        assert!(ratio_identity_holds(n, m, l).unwrap());
                        let a = ratio_a(n, m, l).unwrap();
                        if 2 * l + 1 < n {
                            assert!(a >= Rational::one());
                        }
                    }
                }
            }
        }
        assert!(ratio_a(5, 8, 1).is_err());
    }

    #[test]
    fn ratio_sandwich() {
        for (n, m) in [(40u64, 100u64), (60, 300), (100, 900)] {
            for l in feasible_range(n, m) {
                if !is_feasible(n, m, l + 1) {
                    continue;
                }
                let ln = |r: Rational| crate::exact::ln_big(r.numer().clone()) - crate::exact::ln_big(r.denom().clone());
                let bnd = ratio_bounds(n, m, l).unwrap();
                let (a, b) = (ln(ratio_a(n, m, l).unwrap()), ln(ratio_b(n, m, l).unwrap()));
                let tol = 1e-9 * (1.0 + a.abs() + b.abs());
                assert!(bnd.ln_a_lower <= a + tol, "{n} {m} {l}");
                if let Some(up) = bnd.ln_a_upper {
                    if 2 * l + 1 < n {
                        assert!(a <= up + tol, "{n} {m} {l}");
                    }
                }
                assert!(bnd.ln_b_lower <= b + tol && b <= bnd.ln_b_upper + tol, "{n} {m} {l}");
            }
        }
    }

    #[test]
    fn snm_bracketing() {
        for (n, m) in [(6, 5), (10, 20), (30, 100)] {
            let (lo, hi) = snm_bounds(n, m).unwrap();
            assert!(lo <= hi);
            assert!(hi.ln() - lo.ln() <= n as f64 * 2f64.ln() + ((n + 1) as f64).ln() + 1e-12);
        }
    }

    #[test]
    fn close_to_split_monotone() {
        let base = snm_bounds(10, 20).unwrap().1.ln();
        assert!((close_to_split_log_bound(10, 20, 1e-9).unwrap().ln() - base).abs() < 1e-12);
        let mut prev = f64::NEG_INFINITY;
        for i in 1..10 {
            let v = close_to_split_log_bound(10, 20, i as f64 * 0.05).unwrap().ln();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn grid_points() {
        let ms = grid_ms(10_000, 8, DEFAULT_LAMBDA);
        assert_eq!(ms.len(), 8);
        assert_eq!(ms[0], (10_000f64).powf(1.2).ceil() as u64);
        assert_eq!(*ms.last().unwrap(), 1_562_500);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }
}
