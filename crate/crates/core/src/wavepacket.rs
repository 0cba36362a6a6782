//! Gaussian populations of Landau levels and the overlap table U_{m,n}.
//!
//! A packet centred on level n₀ with width σ has coefficients
//! c_n ∝ exp(-(n-n₀)²/(2σ)). Integrating out the k_x profile leaves the
//! rank-one table U_{m,n} ∝ c_m·c_n, which is all the observables need:
//! its diagonal for the autocorrelation and its first off-diagonal for the
//! currents. The table is normalised numerically over the truncated level
//! range so that the populations of all occupied (n, s) states sum to one.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::spectrum::Band;

/// Which bands the packet populates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandContent {
    Positive,
    Negative,
    Both,
}

impl BandContent {
    pub fn bands(self) -> &'static [Band] {
        match self {
            BandContent::Positive => &[Band::Positive],
            BandContent::Negative => &[Band::Negative],
            BandContent::Both => &[Band::Positive, Band::Negative],
        }
    }

    /// The single populated band, if there is exactly one.
    pub fn single(self) -> Option<Band> {
        match self {
            BandContent::Positive => Some(Band::Positive),
            BandContent::Negative => Some(Band::Negative),
            BandContent::Both => None,
        }
    }
}

impl From<Band> for BandContent {
    fn from(b: Band) -> Self {
        match b {
            Band::Positive => BandContent::Positive,
            Band::Negative => BandContent::Negative,
        }
    }
}

impl fmt::Display for BandContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BandContent::Positive => "pos",
            BandContent::Negative => "neg",
            BandContent::Both => "both",
        })
    }
}

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    n0: usize,
    sigma: f64,
    bands: BandContent,
    tail_tolerance: f64,
}

impl PacketSpec {
    pub fn new(n0: usize, sigma: f64, bands: BandContent) -> Result<Self> {
        Self::with_tolerance(n0, sigma, bands, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn with_tolerance(
        n0: usize,
        sigma: f64,
        bands: BandContent,
        tail_tolerance: f64,
    ) -> Result<Self> {
        if n0 == 0 {
            return Err(domain("packet centre n0 must be >= 1"));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(domain(format!("sigma must be positive, got {sigma}")));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(domain(format!(
                "tail tolerance must lie in (0, 1), got {tail_tolerance}"
            )));
        }
        Ok(Self {
            n0,
            sigma,
            bands,
            tail_tolerance,
        })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn bands(&self) -> BandContent {
        self.bands
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Unnormalised Gaussian coefficient of level n.
    fn amplitude(&self, n: usize) -> f64 {
        let d = n as f64 - self.n0 as f64;
        (-d * d / (2.0 * self.sigma)).exp()
    }

    /// Smallest range [max(0, n₀-k), n₀+k] whose excluded share of the
    /// coefficient mass Σ_{n≥0} c_n falls below the tail tolerance.
    pub fn truncation_range(&self) -> (usize, usize) {
        let n0 = self.n0;
        // Reference mass: sum until the terms cannot matter at f64 precision.
        let mut total = self.amplitude(n0);
        let mut reach = 0usize;
        loop {
            reach += 1;
            let hi = self.amplitude(n0 + reach);
            let lo = if reach <= n0 { self.amplitude(n0 - reach) } else { 0.0 };
            total += hi + lo;
            if hi < total * 1e-30 {
                break;
            }
        }

        let mut kept = self.amplitude(n0);
        let mut k = 0usize;
        while (total - kept) >= self.tail_tolerance * total && k < reach {
            k += 1;
            kept += self.amplitude(n0 + k);
            if k <= n0 {
                kept += self.amplitude(n0 - k);
            }
        }
        (n0.saturating_sub(k), n0 + k)
    }

    pub fn build_weights(&self) -> Result<WeightTable> {
        let (n_min, n_max) = self.truncation_range();
        if n_max < n_min {
            return Err(Error::EmptyRange);
        }
        let amps: Vec<f64> = (n_min..=n_max).map(|n| self.amplitude(n)).collect();
        let norm: f64 = amps.iter().map(|c| c * c).sum();
        if !(norm > 0.0) {
            return Err(Error::EmptyRange);
        }
        let share = 1.0 / self.bands.bands().len() as f64;
        let coeffs: Vec<f64> = amps.iter().map(|c| c / norm.sqrt()).collect();
        let diag = coeffs.iter().map(|c| share * c * c).collect();
        let offdiag = coeffs.windows(2).map(|w| share * w[0] * w[1]).collect();
        Ok(WeightTable {
            n_min,
            n_max,
            diag,
            offdiag,
            bands: self.bands,
        })
    }
}

/// Per-band overlaps U_{n,n} and U_{n-1,n} over a contiguous level range.
///
/// Entries are stored per band: with both bands populated each band holds
/// half of the total population.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    n_min: usize,
    n_max: usize,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    bands: BandContent,
}

impl WeightTable {
    /// Build a table from explicit per-band coefficients c_n on
    /// `n_min..n_min + coeffs.len()`, normalised like [`PacketSpec::build_weights`].
    pub fn from_coefficients(n_min: usize, coeffs: &[f64], bands: BandContent) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyRange);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(domain("coefficients must be finite"));
        }
        let norm: f64 = coeffs.iter().map(|c| c * c).sum();
        if !(norm > 0.0) {
            return Err(domain("coefficients must not all vanish"));
        }
        let share = 1.0 / bands.bands().len() as f64;
        let c: Vec<f64> = coeffs.iter().map(|x| x.abs() / norm.sqrt()).collect();
        Ok(Self {
            n_min,
            n_max: n_min + c.len() - 1,
            diag: c.iter().map(|x| share * x * x).collect(),
            offdiag: c.windows(2).map(|w| share * w[0] * w[1]).collect(),
            bands,
        })
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn bands(&self) -> BandContent {
        self.bands
    }

    /// U_{n,n} for n = n_min..=n_max.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// U_{n-1,n} for n = n_min+1..=n_max.
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// (n, U_{n,n}) pairs.
    pub fn diag_entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.n_min..).zip(self.diag.iter().copied())
    }

    /// (n, U_{n-1,n}) pairs with n ≥ 1.
    pub fn offdiag_entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.n_min + 1..).zip(self.offdiag.iter().copied())
    }

    /// Σ over every populated (n, s) of U_{n,n}.
    pub fn total_population(&self) -> f64 {
        self.bands.bands().len() as f64 * self.diag.iter().sum::<f64>()
    }

    /// Σ_n U_{n-1,n} within one band: the t = 0 value of a single-band |j|.
    pub fn offdiag_sum(&self) -> f64 {
        self.offdiag.iter().sum()
    }

    /// U_{m,n} for |m - n| ≤ 1; zero outside the stored range.
    pub fn weight_at(&self, m: usize, n: usize) -> Result<f64> {
        if m.abs_diff(n) > 1 {
            return Err(Error::UnsupportedOffset { m, n });
        }
        let lo = m.min(n);
        let hi = m.max(n);
        if lo < self.n_min || hi > self.n_max {
            return Ok(0.0);
        }
        Ok(if lo == hi {
            self.diag[lo - self.n_min]
        } else {
            self.offdiag[lo - self.n_min]
        })
    }
}
