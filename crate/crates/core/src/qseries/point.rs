use std::fmt;

use num_complex::Complex64;

/// A point `τ = u + iv` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularPoint {
    pub u: f64,
    pub v: f64,
}

/// An element of `SL2(Z)` as `[a, b, c, d]`.
pub type Sl2 = [i64; 4];

impl ModularPoint {
    /// # Panics
    /// If `v ≤ 0`.
    pub fn new(u: f64, v: f64) -> Self {
        assert!(v > 0.0, "point {u} + {v}i not in the upper half-plane");
        ModularPoint { u, v }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    /// `(aτ + b)/(cτ + d)`.
    pub fn act(self, g: Sl2) -> Self {
        let z = self.to_complex();
        Self::from_complex((g[0] as f64 * z + g[1] as f64) / (g[2] as f64 * z + g[3] as f64))
    }

    /// Move into the closed standard fundamental domain
    /// `{|u| ≤ 1/2, |τ| ≥ 1}`; returns the point and `γ` with `γ·τ = τ'`.
    pub fn reduce(self) -> (Self, Sl2) {
        let mut z = self.to_complex();
        let mut g: Sl2 = [1, 0, 0, 1];
        for _ in 0..10_000 {
            let n = z.re.round();
            if n != 0.0 {
                z -= n;
                // T^{−n} g
                let n = n as i64;
                g = [g[0] - n * g[2], g[1] - n * g[3], g[2], g[3]];
            }
            if z.norm_sqr() < 1.0 - 1e-15 {
                z = -1.0 / z;
                g = [-g[2], -g[3], g[0], g[1]];
            } else {
                break;
            }
        }
        (Self::from_complex(z), g)
    }

    /// Parse `"u+vi"`, `"u-vi"` or `"vi"` (e.g. `0.13+1.21i`).
    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim().trim_end_matches('i');
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(k, c)| (c == '+' || c == '-') && !t[..k].ends_with(['e', 'E']))
            .last();
        let (u, v) = match split {
            Some((k, _)) => (t[..k].parse().ok()?, t[k..].parse().ok()?),
            None => (0.0, t.parse().ok()?),
        };
        (v > 0.0).then(|| ModularPoint::new(u, v))
    }
}

impl fmt::Display for ModularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.u, self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_lands_in_domain_and_tracks_matrix() {
        for &(u, v) in &[(0.3, 0.01), (-2.7, 0.2), (0.49, 0.9), (5.0, 3.0), (0.13, 0.05)] {
            let p = ModularPoint::new(u, v);
            let (r, g) = p.reduce();
            assert!(r.u.abs() <= 0.5 + 1e-12 && r.to_complex().norm() >= 1.0 - 1e-12, "{r}");
            assert_eq!(g[0] * g[3] - g[1] * g[2], 1);
            let q = p.act(g);
            assert!((q.to_complex() - r.to_complex()).norm() < 1e-9);
        }
    }

    #[test]
    fn parse_points() {
        assert_eq!(ModularPoint::parse("0.13+1.21i"), Some(ModularPoint::new(0.13, 1.21)));
        assert_eq!(ModularPoint::parse("-0.5+2i"), Some(ModularPoint::new(-0.5, 2.0)));
        assert_eq!(ModularPoint::parse("2i"), Some(ModularPoint::new(0.0, 2.0)));
        assert_eq!(ModularPoint::parse("1e-1+1i"), Some(ModularPoint::new(0.1, 1.0)));
        assert_eq!(ModularPoint::parse("1+1e-2i"), Some(ModularPoint::new(1.0, 0.01)));
        assert_eq!(ModularPoint::parse("0.3-1i"), None);
    }
}
