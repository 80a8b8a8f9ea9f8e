//! Exact rationals, big binomials and accurate `ln` of factorials/binomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// The decimal a finite float prints as (its shortest round-trip form), as
/// an exact rational. `0.05` maps to `1/20` rather than the nearest binary value.
pub fn from_decimal(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let text = format!("{x:e}");
    let (mantissa, exp) = text.split_once('e')?;
    let exp: i64 = exp.parse().ok()?;
    let (int_part, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac}").parse().ok()?;
    Some(Rational::from_integer(digits) * pow(&int(10), exp - frac.len() as i64))
}

/// `base^exp` for a (possibly negative) integer exponent.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// `2^exp` for an integer exponent of either sign.
pub fn pow2(exp: i64) -> Rational {
    pow(&int(2), exp)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: go through logs
        let s = if x.is_negative() { -1.0 } else { 1.0 };
        s * (ln_big(x.numer().abs()) - ln_big(x.denom().clone())).exp()
    })
}

/// Natural log of a positive big integer.
pub fn ln_big(x: BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (&x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Exact binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    // prime-power factorisation (Legendre) keeps the intermediate sizes minimal
    if k > 64 {
        return binomial_by_primes(n, k);
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn binomial_by_primes(n: u64, k: u64) -> BigInt {
    let mut factors = Vec::new();
    for p in primes_up_to(n) {
        let e = legendre(n, p) - legendre(k, p) - legendre(n - k, p);
        if e > 0 {
            factors.push(BigInt::from(p).pow(e as u32));
        }
    }
    product(&factors)
}

fn legendre(mut n: u64, p: u64) -> u64 {
    let mut e = 0;
    while n > 0 {
        n /= p;
        e += n;
    }
    e
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Balanced product tree.
pub fn product(xs: &[BigInt]) -> BigInt {
    match xs.len() {
        0 => BigInt::one(),
        1 => xs[0].clone(),
        n => product(&xs[..n / 2]) * product(&xs[n / 2..]),
    }
}

/// Falling factorial `(x)_k = x (x-1) ... (x-k+1)`; zero when `k > x`.
pub fn falling(x: u64, k: u64) -> BigInt {
    if k > x {
        return BigInt::zero();
    }
    fn go(lo: u64, hi: u64) -> BigInt {
        // product of lo..hi (exclusive)
        match hi - lo {
            0 => BigInt::one(),
            1 => BigInt::from(lo),
            d if d <= 16 => (lo..hi).fold(BigInt::one(), |a, v| a * v),
            d => go(lo, lo + d / 2) * go(lo + d / 2, hi),
        }
    }
    go(x - k + 1, x + 1)
}

const LN_FACT_TABLE: usize = 256;

fn ln_fact_table() -> &'static [f64; LN_FACT_TABLE] {
    use std::sync::OnceLock;
    static T: OnceLock<[f64; LN_FACT_TABLE]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [0.0; LN_FACT_TABLE];
        let mut acc = 0.0f64;
        for (i, slot) in t.iter_mut().enumerate().skip(1) {
            acc += (i as f64).ln();
            *slot = acc;
        }
        t
    })
}

/// Stirling-series remainder `ln x! - (x ln x - x + ln(2πx)/2)`, for `x >= 16`.
fn stirling_tail(x: f64) -> f64 {
    let x2 = x * x;
    1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
}

/// `ln(x!)` for a real `x >= 0` that is integral or large.
pub fn ln_factorial(x: f64) -> f64 {
    if x < LN_FACT_TABLE as f64 && x.fract() == 0.0 {
        return ln_fact_table()[x as usize];
    }
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + stirling_tail(x)
}

/// `ln C(n, k)`, `-inf` outside `0 <= k <= n`.
///
/// For large arguments the leading terms are grouped so that cancellation stays
/// near machine precision (relative error around `1e-14`).
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0.0 {
        return 0.0;
    }
    if n < LN_FACT_TABLE as f64 {
        return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
    }
    if k < 16.0 {
        // short falling-factorial sum is exact enough and avoids cancellation
        let mut s = 0.0;
        let mut i = 0.0;
        while i < k {
            s += ((n - i) / (i + 1.0)).ln();
            i += 1.0;
        }
        return s;
    }
    let nk = n - k;
    let tail = |x: f64| {
        if x < LN_FACT_TABLE as f64 && x.fract() == 0.0 {
            ln_fact_table()[x as usize] - (x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln())
        } else {
            stirling_tail(x)
        }
    };
    k * (n / k).ln() - nk * (-k / n).ln_1p() + 0.5 * (n / (2.0 * std::f64::consts::PI * k * nk)).ln()
        + tail(n)
        - tail(k)
        - tail(nk)
}

/// Sum of `C(n, i)` for `i <= k`.
pub fn binomial_prefix_sum(n: u64, k: u64) -> BigInt {
    (0..=k.min(n)).map(|i| binomial(n, i)).sum()
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(6, 7), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(300, 150), binomial_by_primes(300, 150));
        let pascal = binomial(200, 90) + binomial(200, 91);
        assert_eq!(pascal, binomial(201, 91));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(5, 0), BigInt::one());
        assert_eq!(falling(3, 4), BigInt::zero());
        assert_eq!(falling(100, 100), (1..=100u32).fold(BigInt::one(), |a, v| a * v));
    }

    #[test]
    fn ln_binomial_matches_exact() {
        for &(n, k) in &[(10u64, 3u64), (255, 100), (300, 17), (1000, 500), (5000, 1234), (100_000, 99)] {
            let exact = ln_big(binomial(n, k));
            let approx = ln_binomial(n as f64, k as f64);
            assert!(((exact - approx) / exact).abs() < 1e-12, "{n} {k}: {exact} vs {approx}");
        }
        assert_eq!(ln_binomial(5.0, 6.0), f64::NEG_INFINITY);
    }

    #[test]
    fn rational_powers() {
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow(&rat(2, 3), 2), rat(4, 9));
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        assert_eq!(from_decimal(0.05), Some(rat(1, 20)));
        assert_eq!(from_decimal(-12.5), Some(rat(-25, 2)));
        assert_eq!(from_decimal(3e-7), Some(rat(3, 10_000_000)));
        assert_eq!(from_decimal(f64::NAN), None);
    }
}
