//! Landau-level spectrum E_{n,s} = s·ħΩ·√n and the time scales that follow
//! from expanding it around a central level n₀.
//!
//! With E'(n₀) and E''(n₀) the first two derivatives of ħΩ√n:
//!
//! * classical period  T_Cl = 2πħ/|E'|  = 4π√n₀/Ω
//! * revival time      T_R  = 4πħ/|E''| = 16π n₀^{3/2}/Ω
//! * zitterbewegung    T_ZB = πħ/E_{n₀} = π/(Ω√n₀)
//!
//! so that T_R/T_Cl = T_Cl/T_ZB = 4n₀.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{domain, Result};
use crate::units::{FieldParams, HBAR};

/// Conduction (`Positive`, s = +1) or valence (`Negative`, s = -1) band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Positive,
    Negative,
}

impl Band {
    pub fn sign(self) -> f64 {
        match self {
            Band::Positive => 1.0,
            Band::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Band {
        match self {
            Band::Positive => Band::Negative,
            Band::Negative => Band::Positive,
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Positive => "+1",
            Band::Negative => "-1",
        })
    }
}

/// The three characteristic times of a packet centred on n₀, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    pub n0: usize,
    pub t_classical: f64,
    pub t_revival: f64,
    pub t_zitterbewegung: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumModel {
    params: FieldParams,
    omega: f64,
}

impl SpectrumModel {
    pub fn new(params: FieldParams) -> Self {
        Self {
            params,
            omega: params.omega(),
        }
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    /// Ω in rad/s.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// ħΩ in joules.
    pub fn energy_scale(&self) -> f64 {
        HBAR * self.omega
    }

    /// E_{n,s} in joules.
    pub fn landau_energy(&self, n: usize, band: Band) -> f64 {
        band.sign() * self.energy_scale() * (n as f64).sqrt()
    }

    /// Angular frequency Ω√n of level n (positive band), rad/s.
    pub fn level_frequency(&self, n: usize) -> f64 {
        self.omega * (n as f64).sqrt()
    }

    /// Analytic (E', E'') of ħΩ√n at n₀, in J per level and J per level².
    pub fn derivatives(&self, n0: usize) -> Result<(f64, f64)> {
        if n0 == 0 {
            return Err(domain("spectrum derivatives are singular at n0 = 0"));
        }
        let n = n0 as f64;
        let e = self.energy_scale();
        Ok((e / (2.0 * n.sqrt()), -e / (4.0 * n * n.sqrt())))
    }

    pub fn timescales(&self, n0: usize) -> Result<TimeScales> {
        let (d1, d2) = self.derivatives(n0)?;
        Ok(TimeScales {
            n0,
            t_classical: 2.0 * PI * HBAR / d1.abs(),
            t_revival: 4.0 * PI * HBAR / d2.abs(),
            t_zitterbewegung: PI * HBAR / self.landau_energy(n0, Band::Positive),
        })
    }

    /// Zitterbewegung period when a gap opens: the interband energy E_{n₀}
    /// is replaced by √(E_{n₀}² + E_gap²).
    pub fn zb_period_with_gap(&self, n0: usize) -> Result<f64> {
        if n0 == 0 {
            return Err(domain("zitterbewegung period needs n0 >= 1"));
        }
        let e = self.landau_energy(n0, Band::Positive);
        Ok(PI * HBAR / e.hypot(self.params.gap_energy()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::MEV;

    fn model(b: f64) -> SpectrumModel {
        SpectrumModel::new(FieldParams::new(b).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn energies() {
        let m = model(10.0);
        assert_eq!(m.landau_energy(0, Band::Positive), 0.0);
        assert_eq!(m.landau_energy(0, Band::Negative), 0.0);
        let e1 = m.landau_energy(1, Band::Positive);
        assert!((e1 / MEV - 114.8).abs() < 0.1);
        assert!(rel(m.landau_energy(4, Band::Negative), -2.0 * e1) < 1e-15);
        for n in 0..50 {
            assert_eq!(
                m.landau_energy(n, Band::Negative),
                -m.landau_energy(n, Band::Positive)
            );
        }
    }

    #[test]
    fn derivatives_at_first_level() {
        let m = model(10.0);
        let e = m.energy_scale();
        let (d1, d2) = m.derivatives(1).unwrap();
        assert!(rel(d1, e / 2.0) < 1e-15);
        assert!(rel(d2, -e / 4.0) < 1e-15);
        assert!(m.derivatives(0).is_err());
        assert!(m.timescales(0).is_err());
        assert!(m.zb_period_with_gap(0).is_err());
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let m = model(10.0);
        let e = |n| m.landau_energy(n, Band::Positive);
        let fd = e(16) - 2.0 * e(15) + e(14);
        let (_, d2) = m.derivatives(15).unwrap();
        assert!(rel(d2, fd) < 5e-3, "{d2} vs {fd}");
    }

    #[test]
    fn first_derivative_matches_central_difference() {
        let m = model(10.0);
        let e = |n| m.landau_energy(n, Band::Positive);
        for n0 in [10, 15, 30, 100] {
            let (d1, _) = m.derivatives(n0).unwrap();
            let fd = (e(n0 + 1) - e(n0 - 1)) / 2.0;
            assert!(rel(d1, fd) < 1e-2);
        }
    }

    #[test]
    fn closed_forms_and_ratios() {
        let m = model(10.0);
        let w = m.omega();
        for n0 in [1usize, 2, 5, 11, 15, 50] {
            let ts = m.timescales(n0).unwrap();
            let n = n0 as f64;
            assert!(rel(ts.t_classical, 4.0 * PI * n.sqrt() / w) < 1e-12);
            assert!(rel(ts.t_revival, 16.0 * PI * n.powf(1.5) / w) < 1e-12);
            assert!(rel(ts.t_zitterbewegung, PI / (w * n.sqrt())) < 1e-12);
            assert!(rel(ts.t_revival / ts.t_classical, 4.0 * n) < 1e-12);
            assert!(rel(ts.t_classical / ts.t_zitterbewegung, 4.0 * n) < 1e-12);
            assert!(rel(ts.t_revival / ts.t_zitterbewegung, 16.0 * n * n) < 1e-12);
            assert!(ts.t_zitterbewegung < ts.t_classical && ts.t_classical < ts.t_revival);
        }
    }

    #[test]
    fn timescales_scale_as_inverse_sqrt_field() {
        let a = model(10.0).timescales(15).unwrap();
        let b = model(40.0).timescales(15).unwrap();
        assert!(rel(b.t_classical, a.t_classical / 2.0) < 1e-12);
        assert!(rel(b.t_revival, a.t_revival / 2.0) < 1e-12);
        assert!(rel(b.t_zitterbewegung, a.t_zitterbewegung / 2.0) < 1e-12);
    }

    #[test]
    fn gap_modified_zb_period() {
        let params = FieldParams::new(10.0).unwrap();
        let m = SpectrumModel::new(params);
        let tzb = m.timescales(15).unwrap().t_zitterbewegung;
        assert_eq!(m.zb_period_with_gap(15).unwrap(), tzb);

        let e15 = m.landau_energy(15, Band::Positive);
        let gapped = SpectrumModel::new(params.with_gap_energy(e15).unwrap());
        assert!(rel(gapped.zb_period_with_gap(15).unwrap(), tzb / 2f64.sqrt()) < 1e-14);

        let mut last = tzb;
        for gap_mev in [1.0, 10.0, 100.0, 1e3, 1e5] {
            let g = SpectrumModel::new(params.with_gap_energy(gap_mev * MEV).unwrap());
            let t = g.zb_period_with_gap(15).unwrap();
            assert!(t < last);
            last = t;
        }
        // Derivative-based scales do not see the gap.
        let g = SpectrumModel::new(params.with_gap_energy(10.0 * MEV).unwrap());
        assert_eq!(g.timescales(15).unwrap().t_revival, m.timescales(15).unwrap().t_revival);
    }
}
