use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form Dirichlet mode `sin(mπx/a) sin(nπy/b)` of the rectangle
/// `[0, a] x [0, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleMode {
    pub m: u32,
    pub n: u32,
    pub lambda: f64,
}

impl RectangleMode {
    pub fn new(m: u32, n: u32, a: f64, b: f64) -> Self {
        let (mf, nf) = (m as f64, n as f64);
        RectangleMode { m, n, lambda: PI * PI * (mf * mf / (a * a) + nf * nf / (b * b)) }
    }

    /// Product eigenfunctions have an `m x n` checkerboard of nodal cells.
    pub fn nodal_count(&self) -> u64 {
        self.m as u64 * self.n as u64
    }

    pub fn eval(&self, a: f64, b: f64, x: f64, y: f64) -> f64 {
        (self.m as f64 * PI * x / a).sin() * (self.n as f64 * PI * y / b).sin()
    }
}

/// The `k` smallest rectangle modes, ordered by eigenvalue and then `(m, n)`.
pub fn rectangle_spectrum(a: f64, b: f64, k: usize) -> Result<Vec<RectangleMode>> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!("rectangle sides must be positive, got {a} x {b}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one mode".into()));
    }
    // Weyl guess for λ_k, then grow until at least k modes lie below it
    let mut cap = 4.0 * PI * k as f64 / (a * b) + PI * PI * (1.0 / (a * a) + 1.0 / (b * b)) * 4.0;
    loop {
        let mut modes = Vec::new();
        let m_max = (a * cap.sqrt() / PI).floor() as u32;
        for m in 1..=m_max {
            let rest = cap / (PI * PI) - (m as f64 / a).powi(2);
            if rest <= 0.0 {
                break;
            }
            let n_max = (b * rest.sqrt()).floor() as u32;
            modes.extend((1..=n_max).map(|n| RectangleMode::new(m, n, a, b)));
        }
        if modes.len() >= k {
            modes.sort_by(|x, y| x.lambda.total_cmp(&y.lambda).then(x.m.cmp(&y.m)).then(x.n.cmp(&y.n)));
            modes.truncate(k);
            return Ok(modes);
        }
        cap *= 1.5;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::weyl_ratio;

    #[test]
    fn unit_square_leading_modes() {
        let modes = rectangle_spectrum(1.0, 1.0, 3).unwrap();
        assert_eq!((modes[0].m, modes[0].n), (1, 1));
        assert_eq!(modes[0].lambda, 2.0 * PI * PI);
        assert_eq!((modes[1].m, modes[1].n), (1, 2));
        assert_eq!((modes[2].m, modes[2].n), (2, 1));
        assert_eq!(modes[1].lambda, modes[2].lambda);
        assert!((modes[1].lambda - 5.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_enumeration() {
        let (a, b) = (1.0, 0.61);
        let mut all: Vec<RectangleMode> =
            (1..80).flat_map(|m| (1..80).map(move |n| RectangleMode::new(m, n, a, b))).collect();
        all.sort_by(|x, y| x.lambda.total_cmp(&y.lambda).then(x.m.cmp(&y.m)).then(x.n.cmp(&y.n)));
        let modes = rectangle_spectrum(a, b, 500).unwrap();
        assert_eq!(modes, all[..500].to_vec());
    }

    #[test]
    fn weyl_ratio_at_two_thousand() {
        let (a, b) = (1.0, 1.0 / 2f64.sqrt());
        let lambdas: Vec<f64> = rectangle_spectrum(a, b, 2000).unwrap().iter().map(|m| m.lambda).collect();
        let r = weyl_ratio(&lambdas, a * b)[1999];
        assert!((0.94..=1.06).contains(&r), "ratio {r}");
        assert!(r > 1.0);
    }

    #[test]
    fn invalid_sides() {
        assert!(rectangle_spectrum(0.0, 1.0, 3).is_err());
        assert!(rectangle_spectrum(1.0, 1.0, 0).is_err());
    }
}
