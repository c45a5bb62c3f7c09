/// Kronecker symbol `(a/n)`.
///
/// Conventions: `(a/0)` is 1 for `a = ±1` and 0 otherwise; `(a/−1)` is the
/// sign of `a` (with `(0/−1) = 1`); `(a/2)` is 0 for even `a`, 1 for
/// `a ≡ ±1 (mod 8)` and −1 for `a ≡ ±3 (mod 8)`. The symbol is completely
/// multiplicative in `n`. Genus characters depend on these choices.
pub fn kronecker(a: i64, n: i64) -> i8 {
    const TAB: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    if n == 0 {
        return (a.abs() == 1) as i8;
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut b = n as i128;
    let a = a as i128;
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    let mut a = a.rem_euclid(b);
    while a != 0 {
        let mut v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a;
        a = b % r;
        b = r;
    }
    if b == 1 {
        k
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Factorization;

    fn legendre_euler(a: i64, p: i64) -> i8 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        let mut r = 1i64;
        let mut b = a;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    // Independent oracle: Euler's criterion at odd primes, the mod-8 table
    // at 2, sign rule at −1, assembled multiplicatively.
    fn oracle(a: i64, n: i64) -> i8 {
        if n == 0 {
            return (a.abs() == 1) as i8;
        }
        let mut k = 1i8;
        if n < 0 && a < 0 {
            k = -k;
        }
        for (p, e) in Factorization::of(n.unsigned_abs()).factors {
            let p = p as i64;
            let s = if p == 2 {
                match a.rem_euclid(8) {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else {
                legendre_euler(a, p)
            };
            k *= s.pow(e);
        }
        k
    }

    #[test]
    fn examples() {
        assert_eq!(kronecker(5, 1), 1);
        assert_eq!(kronecker(12, 3), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(3, -1), 1);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(2, 0), 0);
    }

    #[test]
    fn agrees_with_oracle() {
        for a in -60..=60 {
            for n in -200..=200 {
                assert_eq!(kronecker(a, n), oracle(a, n), "({a}/{n})");
            }
        }
    }

    #[test]
    fn multiplicative_and_periodic_for_fundamental() {
        for d in [5i64, 8, 13, -3, -4, -7] {
            let m = d.abs();
            for n in 1..=1000i64 {
                assert_eq!(kronecker(d, n), kronecker(d, n + m), "period D={d} n={n}");
                for k in 1..=(1000 / n).min(40) {
                    assert_eq!(
                        kronecker(d, n * k),
                        kronecker(d, n) * kronecker(d, k),
                        "mult D={d} n={n} k={k}"
                    );
                }
            }
        }
    }
}
