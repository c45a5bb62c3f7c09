//! Positive-definite binary quadratic forms: reduction, class
//! enumeration, stabilizers and genus characters.

mod cm;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, kronecker, Discriminant};
use crate::qseries::Sl2;
use crate::{Error, Result};

pub use cm::{singular_modulus, singular_modulus_mp, HeegnerPoint};

/// The form `a x² + b xy + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    /// Checked constructor for positive-definite forms.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let q = QuadForm { a, b, c };
        if a <= 0 || q.disc() >= 0 {
            return Err(Error::InvalidDiscriminant(q.disc()));
        }
        Ok(q)
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i64 {
        gcd(gcd(self.a, self.b), self.c)
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// `(Q∘γ)(x, y) = Q(αx + βy, γx + δy)` for `γ = [α, β, γ, δ]`.
    pub fn act(&self, g: Sl2) -> Self {
        let [p, q, r, s] = g;
        let (a, b, c) = (self.a, self.b, self.c);
        QuadForm {
            a: a * p * p + b * p * r + c * r * r,
            b: 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            c: a * q * q + b * q * s + c * s * s,
        }
    }

    /// Whether `|b| ≤ a ≤ c` with `b ≥ 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Reduced representative `R` and `γ ∈ SL2(Z)` with `R = Q∘γ`.
    pub fn reduce(&self) -> (QuadForm, Sl2) {
        let mut q = *self;
        let mut g: Sl2 = [1, 0, 0, 1];
        let mul = |g: Sl2, h: Sl2| -> Sl2 {
            [
                g[0] * h[0] + g[1] * h[2],
                g[0] * h[1] + g[1] * h[3],
                g[2] * h[0] + g[3] * h[2],
                g[2] * h[1] + g[3] * h[3],
            ]
        };
        const S: Sl2 = [0, -1, 1, 0];
        loop {
            // translate b into (−a, a]
            let n = (q.a - q.b).div_euclid(2 * q.a);
            if n != 0 {
                let t = [1, n, 0, 1];
                q = q.act(t);
                g = mul(g, t);
            }
            if q.c < q.a {
                q = q.act(S);
                g = mul(g, S);
                continue;
            }
            if q.a == q.c && q.b < 0 {
                q = q.act(S);
                g = mul(g, S);
            }
            debug_assert!(q.is_reduced());
            return (q, g);
        }
    }

    /// `ω_Q`: order of the stabilizer of `Q` in `PSL2(Z)`.
    ///
    /// Read off the reduced representative, so imprimitive multiples of
    /// `x² + xy + y²` and `x² + y²` are covered as well.
    pub fn stabilizer_order(&self) -> u32 {
        let (r, _) = self.reduce();
        if r.a == r.b && r.b == r.c {
            3
        } else if r.b == 0 && r.a == r.c {
            2
        } else {
            1
        }
    }

    /// The genus character `χ_D(Q)` for a fundamental `D > 1` with
    /// `disc(Q) = dD`, `d` a discriminant.
    ///
    /// Equals `(D/r)` for any value `r` of `Q` prime to `D` when
    /// `gcd(a, b, c, D) = 1`, and 0 otherwise.
    pub fn genus_char(&self, big_d: i64) -> Result<i8> {
        let dd = Discriminant::fundamental(big_d)?;
        if dd.value <= 1 || self.disc() % big_d != 0 {
            return Err(Error::InvalidDiscriminant(self.disc()));
        }
        Discriminant::new(self.disc() / big_d)?;
        if gcd(self.content(), big_d) > 1 {
            return Ok(0);
        }
        // The reduced form represents small values, so start there.
        let (r, _) = self.reduce();
        let base = 2 * big_d + 2;
        for bound in [base, 10 * base] {
            for x in 0..=bound {
                for y in -bound..=bound {
                    if x == 0 && y <= 0 {
                        continue;
                    }
                    let v = r.eval(x, y);
                    if gcd(v, big_d) == 1 {
                        return Ok(kronecker(big_d, v));
                    }
                }
            }
        }
        Err(Error::NoRepresentation { d: big_d, form: self.to_string() })
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// All reduced forms of discriminant `disc < 0`, primitive or not, in
/// lexicographic order of `(a, b, c)`.
pub fn class_reps(disc: i64) -> Result<Vec<QuadForm>> {
    if disc >= 0 {
        return Err(Error::InvalidDiscriminant(disc));
    }
    Discriminant::new(disc)?;
    let amax = ((-disc) as f64 / 3.0).sqrt().floor() as i64 + 1;
    let forms = (1..=amax)
        .into_par_iter()
        .flat_map_iter(|a| {
            (-a + 1..=a).filter_map(move |b| {
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    return None;
                }
                let q = QuadForm { a, b, c: num / (4 * a) };
                q.is_reduced().then_some(q)
            })
        })
        .collect();
    Ok(forms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exact class-number oracle: `h(D) = −(1/|D|) Σ_{n<|D|} (D/n) n` for
    /// fundamental `D < −4`, lifted to orders by the conductor formula, and
    /// summed over `disc/g²` to count imprimitive forms too.
    fn h_fundamental(d: i64) -> i64 {
        match d {
            -3 | -4 => 1,
            _ => -(1..-d).map(|n| kronecker(d, n) as i64 * n).sum::<i64>() / -d,
        }
    }

    fn h_order(disc: i64) -> i64 {
        let (d0, f) = Discriminant::new(disc).unwrap().fundamental_part();
        let f = f as i64;
        let units = match d0 {
            -3 => 3,
            -4 => 2,
            _ => 1,
        };
        if f == 1 {
            return h_fundamental(d0);
        }
        // h(D0 f²) = h(D0) f ∏_{p|f} (1 − (D0/p)/p) / [O* : O_f*]
        let mut num = h_fundamental(d0) * f;
        for p in crate::arith::Factorization::of(f as u64).primes() {
            let p = p as i64;
            num = num / p * (p - kronecker(d0, p) as i64);
        }
        num / units
    }

    fn count_all(disc: i64) -> i64 {
        let mut total = 0;
        let mut g = 1i64;
        while g * g <= -disc {
            if disc % (g * g) == 0 && Discriminant::new(disc / (g * g)).is_ok() {
                total += h_order(disc / (g * g));
            }
            g += 1;
        }
        total
    }

    #[test]
    fn reduction_examples() {
        let q = QuadForm::new(1, 1, 4).unwrap();
        assert_eq!(q.reduce(), (q, [1, 0, 0, 1]));
        let (r, g) = QuadForm::new(4, -1, 1).unwrap().reduce();
        assert_eq!(r, QuadForm { a: 1, b: 1, c: 4 });
        assert_eq!(QuadForm::new(4, -1, 1).unwrap().act(g), r);
        let q = QuadForm::new(2, 1, 2).unwrap();
        assert_eq!(q.reduce().0, q);
    }

    #[test]
    fn class_reps_examples() {
        let f = |a, b, c| QuadForm { a, b, c };
        assert_eq!(class_reps(-15).unwrap(), vec![f(1, 1, 4), f(2, 1, 2)]);
        assert_eq!(class_reps(-3).unwrap(), vec![f(1, 1, 1)]);
        assert_eq!(class_reps(-4).unwrap(), vec![f(1, 0, 1)]);
        assert!(class_reps(-5).is_err());
    }

    #[test]
    fn class_counts_match_class_number_formula() {
        for disc in (3..=200).map(|n| -n).filter(|d| Discriminant::new(*d).is_ok()) {
            assert_eq!(class_reps(disc).unwrap().len() as i64, count_all(disc), "disc {disc}");
        }
    }

    #[test]
    fn stabilizers_by_enumeration() {
        // count γ with entries in [−2, 2] fixing Q, modulo ±1
        let brute = |q: QuadForm| {
            let mut n = 0;
            for a in -2..=2i64 {
                for b in -2..=2i64 {
                    for c in -2..=2i64 {
                        for d in -2..=2i64 {
                            if a * d - b * c == 1 && q.act([a, b, c, d]) == q {
                                n += 1;
                            }
                        }
                    }
                }
            }
            n / 2
        };
        for (q, w) in [((1, 1, 1), 3), ((1, 0, 1), 2), ((1, 1, 4), 1), ((2, 2, 2), 3), ((3, 0, 3), 2)] {
            let q = QuadForm::new(q.0, q.1, q.2).unwrap();
            assert_eq!(q.stabilizer_order(), w);
            assert_eq!(brute(q), w);
        }
    }

    #[test]
    fn genus_char_examples() {
        assert_eq!(QuadForm::new(1, 1, 4).unwrap().genus_char(5).unwrap(), 1);
        assert_eq!(QuadForm::new(2, 1, 2).unwrap().genus_char(5).unwrap(), -1);
        // content 5 shares a factor with D
        assert_eq!(QuadForm::new(5, 5, 5).unwrap().genus_char(5).unwrap(), 0);
        assert!(QuadForm::new(1, 1, 4).unwrap().genus_char(8).is_err());
    }

    fn sl2() -> impl Strategy<Value = Sl2> {
        proptest::collection::vec((0u8..2, -3i64..=3), 1..6).prop_map(|steps| {
            let mut g: Sl2 = [1, 0, 0, 1];
            for (kind, n) in steps {
                let h = if kind == 0 { [1, n, 0, 1] } else { [0, -1, 1, 0] };
                g = [
                    g[0] * h[0] + g[1] * h[2],
                    g[0] * h[1] + g[1] * h[3],
                    g[2] * h[0] + g[3] * h[2],
                    g[2] * h[1] + g[3] * h[3],
                ];
            }
            g
        })
    }

    proptest! {
        #[test]
        fn reduce_is_equivalence(a in 1i64..30, b in -30i64..30, c in 1i64..30, g in sl2()) {
            prop_assume!(b * b - 4 * a * c < 0);
            let q = QuadForm::new(a, b, c).unwrap();
            let (r, h) = q.reduce();
            prop_assert!(r.is_reduced());
            prop_assert_eq!(q.act(h), r);
            prop_assert_eq!(q.act(g).reduce().0, r);
        }

        #[test]
        fn genus_char_is_class_invariant(
            d in prop::sample::select(vec![-3i64, -4, -7, -8, -11, -12, -15, -16, -19, -20]),
            big_d in prop::sample::select(vec![5i64, 8, 12, 13, 17]),
            idx in 0usize..64,
            g in sl2(),
        ) {
            let forms = class_reps(d * big_d).unwrap();
            let q = forms[idx % forms.len()];
            prop_assert_eq!(q.genus_char(big_d).unwrap(), q.act(g).genus_char(big_d).unwrap());
        }
    }
}
