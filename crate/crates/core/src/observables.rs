//! Time series of the autocorrelation A(t) and the currents j_x(t), j_y(t).
//!
//! Every series is a finite spectral sum evaluated independently at each
//! grid point, so the grid is split across worker threads and the result
//! does not depend on the split. Phases are built from Ω√n·t directly (no
//! division by ħ at each sample) and the terms are added with Neumaier
//! compensation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::spectrum::{Band, SpectrumModel};
use crate::units::HBAR;
use crate::wavepacket::{BandContent, WeightTable};

pub const DEFAULT_SAMPLES: usize = 4096;

/// Uniform grid t_k = t_start + k·(t_end - t_start)/(n_samples - 1), seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_samples: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_samples: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(domain(format!("a time grid needs >= 2 samples, got {n_samples}")));
        }
        if !(t_start >= 0.0) || !(t_end > t_start) || !t_end.is_finite() {
            return Err(domain(format!(
                "time grid needs 0 <= t_start < t_end, got [{t_start:e}, {t_end:e}]"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            n_samples,
        })
    }

    /// Grid starting at zero.
    pub fn until(t_end: f64, n_samples: usize) -> Result<Self> {
        Self::new(0.0, t_end, n_samples)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn len(&self) -> usize {
        self.n_samples
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_samples - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.n_samples {
            self.t_end
        } else {
            self.t_start + k as f64 * self.spacing()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples).map(|k| self.time(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Autocorrelation,
    Jx,
    Jy,
    /// Any derived real series (|A|², |j|, ...).
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueUnits {
    Dimensionless,
    /// Current in units of e·v_F.
    ChargeTimesFermiVelocity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries<T> {
    pub grid: TimeGrid,
    pub values: Vec<T>,
    pub kind: SeriesKind,
    pub units: ValueUnits,
}

pub type ComplexSeries = ObservableSeries<Complex64>;
pub type RealSeries = ObservableSeries<f64>;

impl<T: Copy> ObservableSeries<T> {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn map<U>(&self, kind: SeriesKind, f: impl Fn(T) -> U) -> ObservableSeries<U> {
        ObservableSeries {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            kind,
            units: self.units,
        }
    }
}

impl ComplexSeries {
    /// |A(t)|² as a real series.
    pub fn norm_sqr(&self) -> RealSeries {
        self.map(SeriesKind::Derived, |z| z.norm_sqr())
    }
}

impl RealSeries {
    /// Build a real series from explicit samples.
    pub fn from_samples(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(domain(format!(
                "{} values for a grid of {} samples",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            kind: SeriesKind::Derived,
            units: ValueUnits::Dimensionless,
        })
    }

    pub fn scaled(&self, factor: f64) -> RealSeries {
        self.map(self.kind, |v| v * factor)
    }
}

/// Current magnitude √(j_x² + j_y²); for a single band this is the smooth
/// envelope of the cyclotron oscillation.
pub fn current_magnitude(jx: &RealSeries, jy: &RealSeries) -> Result<RealSeries> {
    if jx.grid != jy.grid {
        return Err(domain("current components live on different grids"));
    }
    Ok(RealSeries {
        grid: jx.grid,
        values: jx.values.iter().zip(&jy.values).map(|(x, y)| x.hypot(*y)).collect(),
        kind: SeriesKind::Derived,
        units: jx.units,
    })
}

/// How the level broadening enters the sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnvelopeMode {
    /// Γ is level independent, so exp(-2Γt/ħ) is pulled out of the sum.
    #[default]
    Global,
    /// Multiply each n-term by exp(-(Γ_n + Γ_{n-1})t/ħ).
    PerTerm,
}

/// Constant Landau-level width Γ (J). Each level energy becomes E_n + iΓ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BroadeningModel {
    gamma: f64,
    pub mode: EnvelopeMode,
    /// Also damp A(t) with exp(-2Γt/ħ). Not part of the standard model;
    /// off by default.
    pub damp_autocorrelation: bool,
}

impl BroadeningModel {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(domain(format!("broadening must be >= 0, got {gamma} J")));
        }
        Ok(Self {
            gamma,
            ..Self::default()
        })
    }

    pub fn with_mode(mut self, mode: EnvelopeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Γ_n; level independent in this model.
    pub fn level_width(&self, _n: usize) -> f64 {
        self.gamma
    }

    /// exp(-2Γt/ħ).
    pub fn envelope(&self, t: f64) -> f64 {
        if self.gamma == 0.0 {
            1.0
        } else {
            (-2.0 * self.gamma * t / HBAR).exp()
        }
    }

    fn pair_damping(&self, n: usize, t: f64) -> f64 {
        match self.mode {
            EnvelopeMode::Global => 1.0,
            EnvelopeMode::PerTerm => {
                (-(self.level_width(n) + self.level_width(n - 1)) * t / HBAR).exp()
            }
        }
    }

    fn global_damping(&self, t: f64) -> f64 {
        match self.mode {
            EnvelopeMode::Global => self.envelope(t),
            EnvelopeMode::PerTerm => 1.0,
        }
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

fn evaluate<T: Send>(grid: &TimeGrid, f: impl Fn(f64) -> T + Sync) -> Vec<T> {
    (0..grid.len())
        .into_par_iter()
        .with_min_len(64)
        .map(|k| f(grid.time(k)))
        .collect()
}

/// A(t) at a single time.
pub fn autocorrelation_at(table: &WeightTable, model: &SpectrumModel, t: f64) -> Complex64 {
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (n, u) in table.diag_entries() {
        let (sin, cos) = (model.level_frequency(n) * t).sin_cos();
        for band in table.bands().bands() {
            re.add(u * cos);
            im.add(-band.sign() * u * sin);
        }
    }
    Complex64::new(re.value(), im.value())
}

/// A(t) = Σ_{n,s} U_{n,n}·exp(-i E_{n,s} t/ħ) over the populated bands.
pub fn autocorrelation(
    table: &WeightTable,
    model: &SpectrumModel,
    grid: &TimeGrid,
) -> ComplexSeries {
    autocorrelation_with(table, model, grid, &BroadeningModel::none())
}

/// [`autocorrelation`] with optional damping of A(t) (see
/// [`BroadeningModel::damp_autocorrelation`]).
pub fn autocorrelation_with(
    table: &WeightTable,
    model: &SpectrumModel,
    grid: &TimeGrid,
    broadening: &BroadeningModel,
) -> ComplexSeries {
    let values = evaluate(grid, |t| {
        let a = autocorrelation_at(table, model, t);
        if broadening.damp_autocorrelation {
            a * broadening.envelope(t)
        } else {
            a
        }
    });
    ObservableSeries {
        grid: *grid,
        values,
        kind: SeriesKind::Autocorrelation,
        units: ValueUnits::Dimensionless,
    }
}

fn current_series(grid: &TimeGrid, values: Vec<f64>, kind: SeriesKind) -> RealSeries {
    ObservableSeries {
        grid: *grid,
        values,
        kind,
        units: ValueUnits::ChargeTimesFermiVelocity,
    }
}

/// Currents of a packet living in one band, in units of e·v_F:
///
/// j_x = s·Σ_{n≥1} U_{n-1,n} cos[(E_n - E_{n-1})t/ħ]·exp(-2Γt/ħ)
/// j_y =   Σ_{n≥1} U_{n-1,n} sin[(E_n - E_{n-1})t/ħ]·exp(-2Γt/ħ)
pub fn current_single_band(
    table: &WeightTable,
    model: &SpectrumModel,
    grid: &TimeGrid,
    band: Band,
    broadening: &BroadeningModel,
) -> Result<(RealSeries, RealSeries)> {
    match table.bands().single() {
        Some(b) if b == band => {}
        Some(_) => {
            return Err(Error::WrongBandContent {
                expected: if band == Band::Positive { "pos" } else { "neg" },
                found: table.bands(),
            })
        }
        None => {
            return Err(Error::WrongBandContent {
                expected: "single-band",
                found: table.bands(),
            })
        }
    }
    let terms: Vec<(usize, f64, f64)> = table
        .offdiag_entries()
        .map(|(n, u)| (n, u, model.level_frequency(n) - model.level_frequency(n - 1)))
        .collect();
    let s = band.sign();
    let pairs = evaluate(grid, |t| {
        let mut jx = CompensatedSum::default();
        let mut jy = CompensatedSum::default();
        for &(n, u, w) in &terms {
            let (sin, cos) = (w * t).sin_cos();
            let a = u * broadening.pair_damping(n, t);
            jx.add(a * cos);
            jy.add(a * sin);
        }
        let env = broadening.global_damping(t);
        (s * jx.value() * env, jy.value() * env)
    });
    let (jx, jy): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok((
        current_series(grid, jx, SeriesKind::Jx),
        current_series(grid, jy, SeriesKind::Jy),
    ))
}

/// Currents of a packet populating both bands with equal coefficients:
/// j_x ≡ 0 and
///
/// j_y = Σ_{n≥1} Ū_{n-1,n} {sin[(E_n + E_{n-1})t/ħ] + sin[(E_n - E_{n-1})t/ħ]}·exp(-2Γt/ħ)
///
/// where Ū sums the per-band off-diagonal weights of both bands, so the
/// result is the expectation value in the unit-norm two-band state.
pub fn current_two_band(
    table: &WeightTable,
    model: &SpectrumModel,
    grid: &TimeGrid,
    broadening: &BroadeningModel,
) -> Result<(RealSeries, RealSeries)> {
    if table.bands() != BandContent::Both {
        return Err(Error::WrongBandContent {
            expected: "both",
            found: table.bands(),
        });
    }
    let terms: Vec<(usize, f64, f64, f64)> = table
        .offdiag_entries()
        .map(|(n, u)| {
            let a = model.level_frequency(n);
            let b = model.level_frequency(n - 1);
            (n, 2.0 * u, a + b, a - b)
        })
        .collect();
    let jy = evaluate(grid, |t| {
        let mut acc = CompensatedSum::default();
        for &(n, u, w_inter, w_intra) in &terms {
            let a = u * broadening.pair_damping(n, t);
            acc.add(a * (w_inter * t).sin());
            acc.add(a * (w_intra * t).sin());
        }
        acc.value() * broadening.global_damping(t)
    });
    Ok((
        current_series(grid, vec![0.0; grid.len()], SeriesKind::Jx),
        current_series(grid, jy, SeriesKind::Jy),
    ))
}

/// Sum of the K₁ and K₂ valley contributions, which are equal for a common
/// set of coefficients: twice the K₁ series.
pub fn total_current_both_valleys(per_valley: &RealSeries) -> RealSeries {
    per_valley.scaled(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{FieldParams, MEV};
    use crate::wavepacket::PacketSpec;

    fn model() -> SpectrumModel {
        SpectrumModel::new(FieldParams::new(10.0).unwrap())
    }

    fn table(bands: BandContent) -> WeightTable {
        PacketSpec::new(15, 3.0, bands).unwrap().build_weights().unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(-1.0, 1.0, 10).is_err());
        let g = TimeGrid::new(1.0, 3.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.times(), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
    }

    #[test]
    fn autocorrelation_starts_at_one() {
        let grid = TimeGrid::until(1e-12, 16).unwrap();
        for bands in [BandContent::Positive, BandContent::Both] {
            let a = autocorrelation(&table(bands), &model(), &grid);
            assert!((a.values[0].re - 1.0).abs() < 1e-12);
            assert_eq!(a.values[0].im, 0.0);
        }
    }

    #[test]
    fn band_content_is_checked() {
        let grid = TimeGrid::until(1e-12, 16).unwrap();
        let g0 = BroadeningModel::none();
        let both = table(BandContent::Both);
        let pos = table(BandContent::Positive);
        assert!(matches!(
            current_single_band(&both, &model(), &grid, Band::Positive, &g0),
            Err(Error::WrongBandContent { .. })
        ));
        assert!(current_single_band(&pos, &model(), &grid, Band::Negative, &g0).is_err());
        assert!(current_two_band(&pos, &model(), &grid, &g0).is_err());
    }

    #[test]
    fn currents_at_time_zero() {
        let grid = TimeGrid::until(1e-12, 32).unwrap();
        for band in [Band::Positive, Band::Negative] {
            let t = table(band.into());
            let sum = t.offdiag_sum();
            for gamma in [0.0, 3.7 * MEV] {
                let b = BroadeningModel::new(gamma).unwrap();
                let (jx, jy) = current_single_band(&t, &model(), &grid, band, &b).unwrap();
                assert_eq!(jy.values[0], 0.0);
                assert!((jx.values[0] - band.sign() * sum).abs() < 1e-15);
                assert!(jx.values.iter().all(|v| v.abs() <= sum + 1e-15));
            }
        }
        let (jx, jy) = current_two_band(
            &table(BandContent::Both),
            &model(),
            &grid,
            &BroadeningModel::none(),
        )
        .unwrap();
        assert!(jx.values.iter().all(|&v| v == 0.0));
        assert_eq!(jy.values[0], 0.0);
    }

    #[test]
    fn broadening_factorises() {
        let grid = TimeGrid::until(3e-12, 256).unwrap();
        let t = table(BandContent::Positive);
        let b = BroadeningModel::new(0.7 * MEV).unwrap();
        let (x0, y0) =
            current_single_band(&t, &model(), &grid, Band::Positive, &BroadeningModel::none())
                .unwrap();
        let (x1, y1) = current_single_band(&t, &model(), &grid, Band::Positive, &b).unwrap();
        let per = b.with_mode(EnvelopeMode::PerTerm);
        let (x2, y2) = current_single_band(&t, &model(), &grid, Band::Positive, &per).unwrap();
        for k in 0..grid.len() {
            let env = b.envelope(grid.time(k));
            for (u, d, p) in [(x0.values[k], x1.values[k], x2.values[k]), (y0.values[k], y1.values[k], y2.values[k])] {
                let expect = u * env;
                assert!((d - expect).abs() <= 1e-12 * expect.abs().max(1e-300) + 1e-300);
                assert!((p - expect).abs() <= 1e-12 * u.abs() + 1e-300);
            }
        }
    }

    #[test]
    fn valley_doubling() {
        let grid = TimeGrid::until(1e-12, 8).unwrap();
        let zero = RealSeries::from_samples(grid, vec![0.0; 8]).unwrap();
        assert!(total_current_both_valleys(&zero).values.iter().all(|&v| v == 0.0));
        let t = table(BandContent::Positive);
        let b = BroadeningModel::new(1.0 * MEV).unwrap();
        let (_, y) = current_single_band(&t, &model(), &grid, Band::Positive, &b).unwrap();
        let d = total_current_both_valleys(&y);
        for (a, b) in y.values.iter().zip(&d.values) {
            assert_eq!(*b, 2.0 * a);
        }
    }

    #[test]
    fn damped_autocorrelation_is_opt_in() {
        let grid = TimeGrid::until(2e-12, 64).unwrap();
        let t = table(BandContent::Positive);
        let mut b = BroadeningModel::new(1.0 * MEV).unwrap();
        let plain = autocorrelation_with(&t, &model(), &grid, &b);
        assert_eq!(plain, autocorrelation(&t, &model(), &grid));
        b.damp_autocorrelation = true;
        let damped = autocorrelation_with(&t, &model(), &grid, &b);
        for k in 0..grid.len() {
            let e = b.envelope(grid.time(k));
            assert!((damped.values[k] - plain.values[k] * e).norm() < 1e-14);
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
