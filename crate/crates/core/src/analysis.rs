//! Peak finding, revival classification, period measurement and the
//! broadening limit Γ_max.

use std::fmt;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::observables::{
    current_magnitude, current_single_band, BroadeningModel, RealSeries, TimeGrid,
};
use crate::spectrum::{SpectrumModel, TimeScales};
use crate::units::{FieldParams, MEV};
use crate::wavepacket::{PacketSpec, WeightTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub time: f64,
    pub value: f64,
    pub prominence: f64,
}

/// Local maxima whose prominence exceeds `min_prominence`, sorted by time.
///
/// A sample is a maximum when it is higher than its left neighbour and
/// the first differing sample to its right is lower; on a plateau the
/// leftmost sample is reported. Prominence is the height above the higher
/// of the two lowest points separating the peak from taller terrain (or
/// from the series ends).
pub fn find_peaks(series: &RealSeries, min_prominence: f64) -> Result<Vec<Peak>> {
    let v = &series.values;
    if v.len() < 3 {
        return Err(Error::TooFewSamples(v.len()));
    }
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < v.len() {
        if v[i] > v[i - 1] {
            let mut j = i;
            while j + 1 < v.len() && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < v.len() && v[j + 1] < v[i] {
                let prominence = prominence(v, i, j);
                if prominence > min_prominence {
                    peaks.push(Peak {
                        index: i,
                        time: series.grid.time(i),
                        value: v[i],
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(peaks)
}

/// Prominence of the plateau v[first..=last].
fn prominence(v: &[f64], first: usize, last: usize) -> f64 {
    let h = v[first];
    let mut left_min = h;
    for k in (0..first).rev() {
        if v[k] > h {
            break;
        }
        left_min = left_min.min(v[k]);
    }
    let mut right_min = h;
    for &x in &v[last + 1..] {
        if x > h {
            break;
        }
        right_min = right_min.min(x);
    }
    h - left_min.max(right_min)
}

/// Named revival times as fractions of T_R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Station {
    Quarter,
    Half,
    ThreeQuarter,
    Full,
}

impl Station {
    pub const ALL: [Station; 4] = [
        Station::Quarter,
        Station::Half,
        Station::ThreeQuarter,
        Station::Full,
    ];

    pub fn fraction(self) -> f64 {
        match self {
            Station::Quarter => 0.25,
            Station::Half => 0.5,
            Station::ThreeQuarter => 0.75,
            Station::Full => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Station::Quarter => "TR/4",
            Station::Half => "TR/2",
            Station::ThreeQuarter => "3TR/4",
            Station::Full => "TR",
        }
    }
}

impl fmt::Display for Station {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    Absent,
    Fractional,
    Full,
}

impl Classification {
    pub fn is_present(self) -> bool {
        self != Classification::Absent
    }

    pub fn label(self) -> &'static str {
        match self {
            Classification::Absent => "absent",
            Classification::Fractional => "fractional",
            Classification::Full => "full",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Thresholds for [`detect_revivals`]. Every level is a fraction of the
/// series' first sample, so rescaling the series changes nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalOptions {
    /// Half-width of the search window around each station, as a fraction of T_R.
    pub window: f64,
    /// A peak at or above this fraction of the initial value is a full revival.
    pub threshold: f64,
    /// Lowest peak still counted as a fractional revival. A fractional
    /// revival into two copies rebuilds at most half of the initial value;
    /// 0.42 sits between the two-copy peaks of a well-localised packet
    /// (≈0.48) and the random recurrences of a delocalised one (≈0.39).
    pub fractional_floor: f64,
    /// Minimum peak prominence.
    pub min_prominence: f64,
}

impl Default for RevivalOptions {
    fn default() -> Self {
        Self {
            window: 0.05,
            threshold: 0.5,
            fractional_floor: 0.42,
            min_prominence: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationResult {
    pub station: Station,
    pub time: f64,
    pub peak: Option<Peak>,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevivalReport {
    pub predicted_revival: f64,
    pub reference: f64,
    pub stations: Vec<StationResult>,
}

impl RevivalReport {
    pub fn station(&self, station: Station) -> &StationResult {
        self.stations
            .iter()
            .find(|s| s.station == station)
            .expect("every station is reported")
    }

    pub fn any_present(&self) -> bool {
        self.stations.iter().any(|s| s.classification.is_present())
    }
}

/// Classify the series near T_R/4, T_R/2, 3T_R/4 and T_R.
///
/// The series should be non-negative (|A|², |j|) and must reach 1.05·T_R.
/// For each station the tallest prominent peak within the window decides:
/// `full` at or above `threshold`, `fractional` at or above
/// `fractional_floor`, otherwise `absent`.
pub fn detect_revivals(
    series: &RealSeries,
    timescales: &TimeScales,
    options: &RevivalOptions,
) -> Result<RevivalReport> {
    let t_r = timescales.t_revival;
    let required = (1.0 + options.window) * t_r;
    if series.grid.t_end() < required * (1.0 - 1e-12) {
        return Err(Error::SeriesTooShort {
            end: series.grid.t_end(),
            required,
        });
    }
    let reference = series.values[0];
    if !(reference > 0.0) {
        return Err(domain("revival detection needs a positive initial value"));
    }
    let peaks = find_peaks(series, options.min_prominence * reference)?;
    let stations = Station::ALL
        .iter()
        .map(|&station| {
            let time = station.fraction() * t_r;
            let half = options.window * t_r;
            let peak = peaks
                .iter()
                .filter(|p| (p.time - time).abs() <= half)
                .copied()
                .max_by(|a, b| a.value.total_cmp(&b.value));
            let classification = match peak {
                Some(p) if p.value >= options.threshold * reference => Classification::Full,
                Some(p) if p.value >= options.fractional_floor * reference => {
                    Classification::Fractional
                }
                _ => Classification::Absent,
            };
            StationResult {
                station,
                time,
                peak,
                classification,
            }
        })
        .collect();
    Ok(RevivalReport {
        predicted_revival: t_r,
        reference,
        stations,
    })
}

/// Trend removed before counting zero crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Detrend {
    #[default]
    None,
    /// Subtract the least-squares straight line over the window. Useful
    /// when a slow oscillation rides under a fast one.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodEstimate {
    /// Twice the mean spacing of the zero crossings.
    pub crossing: f64,
    /// Inverse of the dominant frequency of the zero-padded spectrum.
    pub spectral: f64,
    pub crossings: usize,
}

impl PeriodEstimate {
    pub fn relative_disagreement(&self) -> f64 {
        ((self.crossing - self.spectral) / self.crossing).abs()
    }
}

/// Both period estimates over `window = (t0, t1)`.
pub fn period_estimates(
    series: &RealSeries,
    window: (f64, f64),
    detrend: Detrend,
) -> Result<PeriodEstimate> {
    let (t0, t1) = window;
    let times = series.times();
    let idx: Vec<usize> = (0..times.len())
        .filter(|&k| times[k] >= t0 && times[k] <= t1)
        .collect();
    if idx.len() < 3 {
        return Err(Error::TooFewSamples(idx.len()));
    }
    let ts: Vec<f64> = idx.iter().map(|&k| times[k]).collect();
    let mut ys: Vec<f64> = idx.iter().map(|&k| series.values[k]).collect();
    if detrend == Detrend::Linear {
        let (a, b) = least_squares_line(&ts, &ys);
        for (y, t) in ys.iter_mut().zip(&ts) {
            *y -= a + b * t;
        }
    }

    let mut crossings = Vec::new();
    for k in 0..ys.len() - 1 {
        let (y0, y1) = (ys[k], ys[k + 1]);
        if y0 == 0.0 {
            // Exact zeros count once; a zero at the very first sample is
            // the origin of a sine, not a crossing inside the window.
            if k > 0 && ys[k - 1] * y1 < 0.0 {
                crossings.push(ts[k]);
            }
        } else if y0 * y1 < 0.0 {
            crossings.push(ts[k] - y0 * (ts[k + 1] - ts[k]) / (y1 - y0));
        }
    }
    if crossings.len() < 3 {
        return Err(Error::InsufficientCrossings {
            found: crossings.len(),
        });
    }
    let n = crossings.len();
    let crossing = 2.0 * (crossings[n - 1] - crossings[0]) / (n - 1) as f64;
    let spectral = dominant_period(&ys, series.grid.spacing());
    Ok(PeriodEstimate {
        crossing,
        spectral,
        crossings: n,
    })
}

/// Period over `window` from zero crossings, cross-checked against the
/// dominant spectral frequency (they must agree within 5 %).
pub fn measure_period(series: &RealSeries, window: (f64, f64), detrend: Detrend) -> Result<f64> {
    let est = period_estimates(series, window, detrend)?;
    if est.relative_disagreement() > 0.05 {
        return Err(Error::InconsistentPeriod {
            crossing: est.crossing,
            spectral: est.spectral,
        });
    }
    Ok(est.crossing)
}

fn least_squares_line(ts: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (t, y) in ts.iter().zip(ys) {
        sxx += (t - tm) * (t - tm);
        sxy += (t - tm) * (y - ym);
    }
    let b = sxy / sxx;
    (ym - b * tm, b)
}

/// Period of the largest non-DC bin of the mean-removed, 8× zero-padded
/// spectrum, refined by a parabola through the neighbouring bins.
fn dominant_period(ys: &[f64], dt: f64) -> f64 {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let len = (ys.len() * 8).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = ys
        .iter()
        .map(|y| Complex::new(y - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(len)
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let mags: Vec<f64> = buf[..len / 2].iter().map(|c| c.norm()).collect();
    let k = (1..mags.len())
        .max_by(|&a, &b| mags[a].total_cmp(&mags[b]))
        .unwrap_or(1);
    let mut bin = k as f64;
    if k + 1 < mags.len() {
        let (a, b, c) = (mags[k - 1], mags[k], mags[k + 1]);
        let denom = a - 2.0 * b + c;
        if denom != 0.0 {
            bin += 0.5 * (a - c) / denom;
        }
    }
    len as f64 * dt / bin
}

/// Everything a visibility test needs about one single-band packet.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub packet: PacketSpec,
    pub model: SpectrumModel,
    pub table: WeightTable,
    pub timescales: TimeScales,
}

impl Scenario {
    pub fn new(packet: PacketSpec, field: FieldParams) -> Result<Self> {
        if packet.bands().single().is_none() {
            return Err(Error::WrongBandContent {
                expected: "single-band",
                found: packet.bands(),
            });
        }
        let model = SpectrumModel::new(field);
        Ok(Self {
            table: packet.build_weights()?,
            timescales: model.timescales(packet.n0())?,
            model,
            packet,
        })
    }

    /// Single-band j_x, j_y for broadening `gamma` (J).
    pub fn currents(&self, grid: &TimeGrid, gamma: f64) -> Result<(RealSeries, RealSeries)> {
        let band = self.packet.bands().single().expect("checked in new");
        current_single_band(
            &self.table,
            &self.model,
            grid,
            band,
            &BroadeningModel::new(gamma)?,
        )
    }
}

/// A yes/no test of whether revival structure is still observable at a
/// given broadening. Must be monotone: true at Γ implies true below Γ.
pub trait VisibilityCriterion {
    fn is_visible(&self, scenario: &Scenario, gamma: f64) -> Result<bool>;
}

/// Log-scale visibility of the early-time oscillation.
///
/// The packet returns to its starting point once per classical period and
/// each return shows up as a maximum of j_y. On a logarithmic axis the
/// returns stay readable while consecutive maxima lose no more than
/// `max_decades_per_period` decades per period, measured over the first
/// `periods` periods. Broadening adds 2Γ·T_Cl/(ħ ln 10) decades per period
/// on top of the intrinsic dephasing, so the criterion is monotone in Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyLogDecay {
    pub periods: usize,
    pub max_decades_per_period: f64,
    pub samples_per_period: usize,
}

impl Default for EarlyLogDecay {
    fn default() -> Self {
        Self {
            periods: 2,
            max_decades_per_period: 1.0,
            samples_per_period: 1024,
        }
    }
}

impl EarlyLogDecay {
    /// Decades lost per classical period between the first and the
    /// `periods`-th later positive maximum of j_y.
    pub fn decay_rate(&self, scenario: &Scenario, gamma: f64) -> Result<f64> {
        let t_cl = scenario.timescales.t_classical;
        let span = (self.periods as f64 + 0.6) * t_cl;
        let samples = ((self.periods as f64 + 0.6) * self.samples_per_period as f64) as usize;
        let grid = TimeGrid::until(span, samples.max(16))?;
        let (_, jy) = scenario.currents(&grid, gamma)?;
        let maxima: Vec<Peak> = find_peaks(&jy, 0.0)?
            .into_iter()
            .filter(|p| p.value > 0.0)
            .collect();
        if maxima.len() < self.periods + 1 {
            return Err(domain(format!(
                "found {} positive current maxima, need {}",
                maxima.len(),
                self.periods + 1
            )));
        }
        let first = maxima[0].value;
        let last = maxima[self.periods].value;
        Ok((first.log10() - last.log10()) / self.periods as f64)
    }
}

impl VisibilityCriterion for EarlyLogDecay {
    fn is_visible(&self, scenario: &Scenario, gamma: f64) -> Result<bool> {
        Ok(self.decay_rate(scenario, gamma)? <= self.max_decades_per_period)
    }
}

/// Visibility of one revival station in the current magnitude |j|(t),
/// classified by [`detect_revivals`] on a linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationVisibility {
    pub station: Station,
    pub options: RevivalOptions,
    pub samples: usize,
}

impl Default for StationVisibility {
    fn default() -> Self {
        Self {
            station: Station::Full,
            options: RevivalOptions::default(),
            samples: 8192,
        }
    }
}

impl StationVisibility {
    pub fn report(&self, scenario: &Scenario, gamma: f64) -> Result<RevivalReport> {
        let t_end = (1.0 + self.options.window) * scenario.timescales.t_revival * 1.01;
        let grid = TimeGrid::until(t_end, self.samples)?;
        let (jx, jy) = scenario.currents(&grid, gamma)?;
        let magnitude = current_magnitude(&jx, &jy)?;
        detect_revivals(&magnitude, &scenario.timescales, &self.options)
    }
}

impl VisibilityCriterion for StationVisibility {
    fn is_visible(&self, scenario: &Scenario, gamma: f64) -> Result<bool> {
        Ok(self
            .report(scenario, gamma)?
            .station(self.station)
            .classification
            .is_present())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSearch {
    /// Initial upper end of the bracket, J.
    pub gamma_hi: f64,
    /// Stop when the bracket is narrower than this, J.
    pub tolerance: f64,
    /// How many times the upper end may double if still visible there.
    pub max_expansions: usize,
}

impl Default for GammaSearch {
    fn default() -> Self {
        Self {
            gamma_hi: 20.0 * MEV,
            tolerance: 0.05 * MEV,
            max_expansions: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEstimate {
    /// Largest Γ known to pass, J. Equal to `bracket.0`.
    pub gamma_max: f64,
    /// (last passing, first failing) Γ, J.
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

/// Bisect for the largest Γ at which `criterion` still holds.
pub fn estimate_gamma_max(
    packet: &PacketSpec,
    field: &FieldParams,
    criterion: &dyn VisibilityCriterion,
    search: &GammaSearch,
) -> Result<GammaEstimate> {
    if !(search.tolerance > 0.0) || !(search.gamma_hi > 0.0) {
        return Err(domain("gamma search needs positive bracket and tolerance"));
    }
    let scenario = Scenario::new(*packet, *field)?;
    let mut evaluations = 1;
    if !criterion.is_visible(&scenario, 0.0)? {
        return Err(Error::NoRevivalAtZero);
    }
    let mut lo = 0.0;
    let mut hi = search.gamma_hi;
    let mut expansions = 0;
    loop {
        evaluations += 1;
        if !criterion.is_visible(&scenario, hi)? {
            break;
        }
        if expansions == search.max_expansions {
            return Err(Error::UnboundedCriterion(hi));
        }
        lo = hi;
        hi *= 2.0;
        expansions += 1;
    }
    while hi - lo > search.tolerance {
        let mid = 0.5 * (lo + hi);
        evaluations += 1;
        if criterion.is_visible(&scenario, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(GammaEstimate {
        gamma_max: lo,
        bracket: (lo, hi),
        evaluations,
    })
}
