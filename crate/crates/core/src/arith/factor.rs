use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow};

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor `n ≥ 1` by trial division followed by Pollard rho.
    pub fn of(n: u64) -> Self {
        assert!(n >= 1, "factorization of 0");
        let mut primes = Vec::new();
        let mut m = n;
        for p in [2u64, 3, 5] {
            while m.is_multiple_of(p) {
                primes.push(p);
                m /= p;
            }
        }
        // Wheel mod 30 up to a small bound, then rho for what is left.
        let mut d = 7u64;
        let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
        let mut i = 0;
        while d <= 10_000 && d * d <= m {
            while m.is_multiple_of(d) {
                primes.push(d);
                m /= d;
            }
            d += steps[i];
            i = (i + 1) % 8;
        }
        if m > 1 {
            split(m, &mut primes);
        }
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { n, factors }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

fn split(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let mut c = 1;
    loop {
        if let Some(d) = pollard_brent(m, c) {
            split(d, out);
            split(m / d, out);
            return;
        }
        c += 1;
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
    let mut g = 1;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = num_integer::gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = num_integer::gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in Factorization::of(n).factors {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Divisor sum `σ_k(n) = Σ_{d|n} d^k`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    assert!(n >= 1);
    let mut acc = BigInt::one();
    for (p, e) in Factorization::of(n).factors {
        if k == 0 {
            acc *= e + 1;
            continue;
        }
        let pk: BigInt = BigInt::from(p).pow(k);
        // 1 + p^k + ... + p^{ke}
        let mut term = BigInt::one();
        let mut sum = BigInt::one();
        for _ in 0..e {
            term *= &pk;
            sum += &term;
        }
        acc *= sum;
    }
    acc
}

/// `σ_k(n)` as a double; exact for the small arguments used in q-series.
pub fn sigma_f64(k: u32, n: u64) -> f64 {
    divisors(n).iter().map(|&d| (d as f64).powi(k as i32)).sum()
}

/// `σ_s(n) = Σ_{d|n} d^s` for complex `s`.
pub fn sigma_complex(s: Complex64, n: u64) -> Complex64 {
    divisors(n)
        .iter()
        .map(|&d| (s * (d as f64).ln()).exp())
        .sum()
}

/// The Möbius function.
pub fn moebius(n: u64) -> i8 {
    let f = Factorization::of(n);
    if f.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1, 1), BigInt::from(1));
        assert_eq!(sigma(1, 2), BigInt::from(3));
        assert_eq!(sigma(3, 2), BigInt::from(9));
        assert_eq!(sigma(0, 12), BigInt::from(6));
        assert_eq!(sigma(5, 6), BigInt::from(1 + 32 + 243 + 7776));
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn moebius_sums_vanish() {
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n).iter().map(|&d| moebius(d) as i64).sum();
            assert_eq!(s, (n == 1) as i64, "n = {n}");
        }
    }

    #[test]
    fn factors_large_semiprimes() {
        let f = Factorization::of(999_983 * 1_000_003);
        assert_eq!(f.factors, vec![(999_983, 1), (1_000_003, 1)]);
        let f = Factorization::of(2u64.pow(10) * 3u64.pow(4) * 999_983);
        assert_eq!(f.factors, vec![(2, 10), (3, 4), (999_983, 1)]);
    }

    #[test]
    fn primality_against_sieve() {
        let mut sieve = vec![true; 5000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..5000 {
            if sieve[i] {
                for j in (2 * i..5000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..1_000_000_000_000) {
            let f = Factorization::of(n);
            let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            for w in f.factors.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for &(p, _) in &f.factors {
                prop_assert!(is_prime(p));
            }
        }

        #[test]
        fn sigma_is_multiplicative(m in 1u64..1_000_000, n in 1u64..1_000_000, k in 0u32..4) {
            prop_assume!(num_integer::gcd(m, n) == 1);
            prop_assert_eq!(sigma(k, m * n), sigma(k, m) * sigma(k, n));
        }

        #[test]
        fn sigma_matches_divisor_list(n in 1u64..100_000, k in 0u32..4) {
            let direct: BigInt = divisors(n).iter().map(|&d| BigInt::from(d).pow(k)).sum();
            prop_assert_eq!(sigma(k, n), direct);
        }
    }
}
