//! Hermite functions and the Landau-level eigenspinors at both valleys.
//!
//! The dimensionless Hermite function is
//! f̃_n(ξ) = exp(-ξ²/2)·H_n(ξ)/√(2ⁿ n! √π), orthonormal on the real line.
//! Raw H_n overflow f64 near n ≈ 150, so the values are produced by the
//! three-term recurrence on the normalised functions themselves,
//!
//! f̃_n = ξ·√(2/n)·f̃_{n-1} − √((n-1)/n)·f̃_{n-2},
//!
//! with the Gaussian factor carried as a separate exponent. Far out in the
//! classically forbidden region the Gaussian alone would underflow while
//! the polynomial part is still huge; keeping the two apart until the last
//! multiplication gives correct values out to |ξ| ≈ √(2n) + 35 and beyond.

use crate::error::{domain, Result};
use crate::spectrum::Band;

/// π^{-1/4}.
const PI_POW_MINUS_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Rescale threshold for the running recurrence values.
const RESCALE: f64 = 1e150;

/// f̃_n(ξ). The physical f_n carries an extra 1/√L.
pub fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 1..=n {
        let kf = k as f64;
        let next = xi * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    if cur == 0.0 {
        return 0.0;
    }
    let exponent = log_scale - 0.5 * xi * xi + cur.abs().ln();
    cur.signum() * PI_POW_MINUS_QUARTER * exponent.exp()
}

/// f̃_0..=f̃_n at one point, from a single recurrence pass.
pub fn hermite_functions(n: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut log_scale = 0.0f64;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let finish = |v: f64, log_scale: f64| {
        if v == 0.0 {
            0.0
        } else {
            v.signum() * PI_POW_MINUS_QUARTER * (log_scale - 0.5 * xi * xi + v.abs().ln()).exp()
        }
    };
    out.push(finish(cur, log_scale));
    for k in 1..=n {
        let kf = k as f64;
        let next = xi * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out.push(finish(cur, log_scale));
    }
    out
}

/// f̃_n with a signed index; f̃_{-1} ≡ 0 and more negative indices are an error.
pub fn hermite_function_signed(n: i64, xi: f64) -> Result<f64> {
    match n {
        -1 => Ok(0.0),
        n if n < -1 => Err(domain(format!("Hermite function index {n} is negative"))),
        n => Ok(hermite_function(n as usize, xi)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valley {
    K1,
    K2,
}

/// The ξ-dependent two-component part of a Landau eigenstate. The plane
/// wave e^{ik_x x}/√(4π) is left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenspinor {
    pub upper: f64,
    pub lower: f64,
    pub valley: Valley,
    pub n: usize,
    pub band: Band,
}

/// K₁: (−s·f̃_{n−1}, f̃_n). K₂: (f̃_n, s·f̃_{n−1}).
pub fn eigenspinor(n: usize, band: Band, valley: Valley, xi: f64) -> Eigenspinor {
    let s = band.sign();
    let f_n = hermite_function(n, xi);
    let f_below = if n == 0 { 0.0 } else { hermite_function(n - 1, xi) };
    let (upper, lower) = match valley {
        Valley::K1 => (-s * f_below, f_n),
        Valley::K2 => (f_n, s * f_below),
    };
    Eigenspinor {
        upper,
        lower,
        valley,
        n,
        band,
    }
}

impl Eigenspinor {
    /// |upper|² + |lower|².
    pub fn density(&self) -> f64 {
        self.upper * self.upper + self.lower * self.lower
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_values() {
        assert!((hermite_function(0, 0.0) - std::f64::consts::PI.powf(-0.25)).abs() < 1e-16);
        assert_eq!(hermite_function(1, 0.0), 0.0);
        // f̃_1(ξ) = √2 ξ f̃_0(ξ)
        let x = 0.7;
        assert!((hermite_function(1, x) - 2f64.sqrt() * x * hermite_function(0, x)).abs() < 1e-15);
    }

    #[test]
    fn batch_matches_single() {
        let xs = [-9.0, -1.3, 0.0, 0.4, 6.0, 30.0];
        for &x in &xs {
            let all = hermite_functions(60, x);
            for (n, v) in all.iter().enumerate() {
                assert_eq!(*v, hermite_function(n, x));
            }
        }
    }

    #[test]
    fn signed_index() {
        assert_eq!(hermite_function_signed(-1, 0.3).unwrap(), 0.0);
        assert!(hermite_function_signed(-2, 0.3).is_err());
        assert_eq!(hermite_function_signed(3, 0.3).unwrap(), hermite_function(3, 0.3));
    }

    #[test]
    fn large_orders_stay_finite_and_bounded() {
        for n in [150usize, 1000, 10_000] {
            for xi in [-50.0, -40.0, -3.3, 0.0, 0.01, 17.0, 50.0] {
                let v = hermite_function(n, xi);
                assert!(v.is_finite());
                assert!(v.abs() <= 0.8);
            }
        }
    }

    #[test]
    fn forbidden_region_is_not_flushed_to_zero() {
        // Turning point of n = 10_000 is at ξ ≈ 141, so ξ = 50 is deep inside
        // the oscillatory region; the Gaussian factor alone underflows there.
        let v = hermite_function(10_000, 50.0);
        assert!(v != 0.0);
        assert!(v.abs() > 1e-3);
    }

    #[test]
    fn parity() {
        for n in 0..200 {
            for xi in [0.1, 1.7, 5.0, 12.5] {
                let a = hermite_function(n, xi);
                let b = hermite_function(n, -xi);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b - sign * a).abs() <= 1e-13 * a.abs().max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn spinor_patterns() {
        let xi = 0.37;
        let k1 = eigenspinor(0, Band::Positive, Valley::K1, xi);
        assert_eq!(k1.upper, 0.0);
        assert_eq!(k1.lower, hermite_function(0, xi));
        for band in [Band::Positive, Band::Negative] {
            let s = band.sign();
            for n in 1..6 {
                let a = eigenspinor(n, band, Valley::K1, xi);
                let b = eigenspinor(n, band, Valley::K2, xi);
                assert_eq!(a.upper, -s * hermite_function(n - 1, xi));
                assert_eq!(a.lower, hermite_function(n, xi));
                assert_eq!(b.upper, a.lower);
                assert_eq!(b.lower, -a.upper);
                assert_eq!(a.density(), b.density());
            }
        }
    }
}
