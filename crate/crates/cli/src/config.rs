//! Run configuration: a flat key=value file overlaid by command-line flags.

use std::fmt;
use std::path::Path;

use graphene_revivals::analysis::{EarlyLogDecay, Station, StationVisibility};
use graphene_revivals::units::{FieldParams, MEV};
use graphene_revivals::wavepacket::{BandContent, PacketSpec, DEFAULT_TAIL_TOLERANCE};
use graphene_revivals::observables::{BroadeningModel, TimeGrid, DEFAULT_SAMPLES};
use graphene_revivals::spectrum::SpectrumModel;

use crate::CliError;

/// First line of every CSV output.
pub const OUTPUT_MAGIC: &str = "# graphene-revivals output";
/// Ends the echoed settings in a CSV header.
pub const ECHO_END: &str = "# --";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Timescales,
    Autocorr,
    Current,
    GammaScan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Timescales => "timescales",
            Command::Autocorr => "autocorr",
            Command::Current => "current",
            Command::GammaScan => "gamma-scan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valleys {
    K1,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Early-time log-scale decay of the current maxima.
    EarlyLog,
    /// Linear-scale revival of |j| at T_R.
    Station,
}

/// Every setting of one run, fully resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub field_t: f64,
    pub fermi_velocity: f64,
    pub gap_mev: f64,
    pub n0: usize,
    pub sigma: f64,
    pub bands: BandContent,
    pub tail_tolerance: f64,
    pub gamma_mev: f64,
    pub t_start_fs: f64,
    /// None until resolved; defaults to 1.1·T_R.
    pub t_end_fs: Option<f64>,
    pub samples: usize,
    pub valleys: Valleys,
    pub format: Format,
    pub si_current: bool,
    pub damp_autocorr: bool,
    pub gamma_from_mev: f64,
    pub gamma_to_mev: f64,
    pub gamma_steps: usize,
    pub criterion: Criterion,
    pub decades_per_period: f64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            field_t: 10.0,
            fermi_velocity: 1e6,
            gap_mev: 0.0,
            n0: 15,
            sigma: 3.0,
            bands: BandContent::Positive,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
            gamma_mev: 0.0,
            t_start_fs: 0.0,
            t_end_fs: None,
            samples: DEFAULT_SAMPLES,
            valleys: Valleys::K1,
            format: Format::Csv,
            si_current: false,
            damp_autocorr: false,
            gamma_from_mev: 0.0,
            gamma_to_mev: 8.0,
            gamma_steps: 9,
            criterion: Criterion::EarlyLog,
            decades_per_period: EarlyLogDecay::default().max_decades_per_period,
        }
    }

    /// Apply one key=value setting. Underscores and dashes are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "command" => {
                if value != self.command.name() {
                    return Err(CliError::Config(format!(
                        "config is for `{value}`, not `{}`",
                        self.command.name()
                    )));
                }
            }
            "B" | "b" => self.field_t = number(&key, value)?,
            "vf" => self.fermi_velocity = number(&key, value)?,
            "gap-mev" => self.gap_mev = number(&key, value)?,
            "n0" => self.n0 = integer(&key, value)?,
            "sigma" => self.sigma = number(&key, value)?,
            "bands" => {
                self.bands = match value {
                    "pos" => BandContent::Positive,
                    "neg" => BandContent::Negative,
                    "both" => BandContent::Both,
                    _ => return Err(bad(&key, value, "pos, neg or both")),
                }
            }
            "tail-tol" => self.tail_tolerance = number(&key, value)?,
            "gamma-mev" => self.gamma_mev = number(&key, value)?,
            "t-start-fs" => self.t_start_fs = number(&key, value)?,
            "t-end-fs" => self.t_end_fs = Some(number(&key, value)?),
            "samples" => self.samples = integer(&key, value)?,
            "valleys" => {
                self.valleys = match value {
                    "k1" => Valleys::K1,
                    "both" => Valleys::Both,
                    _ => return Err(bad(&key, value, "k1 or both")),
                }
            }
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(bad(&key, value, "csv or json")),
                }
            }
            "si-current" => self.si_current = boolean(&key, value)?,
            "damp-autocorr" => self.damp_autocorr = boolean(&key, value)?,
            "gamma-from-mev" => self.gamma_from_mev = number(&key, value)?,
            "gamma-to-mev" => self.gamma_to_mev = number(&key, value)?,
            "gamma-steps" => self.gamma_steps = integer(&key, value)?,
            "criterion" => {
                self.criterion = match value {
                    "early-log" => Criterion::EarlyLog,
                    "station" => Criterion::Station,
                    _ => return Err(bad(&key, value, "early-log or station")),
                }
            }
            "decades-per-period" => self.decades_per_period = number(&key, value)?,
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Read settings from a key=value file; '#' starts a comment.
    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.load_str(&text)
    }

    /// Accepts a plain key=value file, or the output of an earlier run
    /// (CSV header or JSON), whose echoed settings are replayed.
    pub fn load_str(&mut self, text: &str) -> Result<(), CliError> {
        if let Some(rest) = text.strip_prefix(OUTPUT_MAGIC) {
            let echoed: String = rest
                .lines()
                .skip(1)
                .take_while(|l| *l != ECHO_END)
                .filter_map(|l| l.strip_prefix("# "))
                .map(|l| format!("{l}\n"))
                .collect();
            return self.load_str(&echoed);
        }
        if text.trim_start().starts_with('{') {
            let doc: serde_json::Value = serde_json::from_str(text)
                .map_err(|e| CliError::Config(format!("unreadable JSON config: {e}")))?;
            let object = doc
                .get("config")
                .and_then(|c| c.as_object())
                .ok_or_else(|| CliError::Config("JSON config has no `config` object".into()))?;
            for (key, value) in object {
                let value = value
                    .as_str()
                    .ok_or_else(|| CliError::Config(format!("`{key}` must be a string")))?;
                self.set(key, value)?;
            }
            return Ok(());
        }
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key=value, got `{line}`", i + 1))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn field(&self) -> Result<FieldParams, CliError> {
        FieldParams::with_all(self.field_t, self.fermi_velocity, self.gap_mev * MEV)
            .map_err(config_error)
    }

    pub fn model(&self) -> Result<SpectrumModel, CliError> {
        Ok(SpectrumModel::new(self.field()?))
    }

    pub fn packet(&self) -> Result<PacketSpec, CliError> {
        PacketSpec::with_tolerance(self.n0, self.sigma, self.bands, self.tail_tolerance)
            .map_err(config_error)
    }

    pub fn broadening(&self) -> Result<BroadeningModel, CliError> {
        let mut b = BroadeningModel::new(self.gamma_mev * MEV).map_err(config_error)?;
        b.damp_autocorrelation = self.damp_autocorr;
        Ok(b)
    }

    /// Fill in the end time from the revival time when it was not given.
    pub fn resolve(&mut self) -> Result<(), CliError> {
        if self.t_end_fs.is_none() {
            let ts = self.model()?.timescales(self.n0).map_err(config_error)?;
            self.t_end_fs = Some(1.1 * ts.t_revival * 1e15);
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<TimeGrid, CliError> {
        let t_end = self
            .t_end_fs
            .ok_or_else(|| CliError::Config("end time not resolved".into()))?;
        TimeGrid::new(self.t_start_fs * 1e-15, t_end * 1e-15, self.samples).map_err(config_error)
    }

    pub fn gammas_mev(&self) -> Result<Vec<f64>, CliError> {
        let (a, b, n) = (self.gamma_from_mev, self.gamma_to_mev, self.gamma_steps);
        if n == 0 || !(a >= 0.0) || !(b >= a) {
            return Err(CliError::Config(format!(
                "gamma range needs 0 <= from <= to and steps >= 1, got [{a}, {b}] in {n}"
            )));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        Ok((0..n)
            .map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 })
            .collect())
    }

    pub fn early_criterion(&self) -> EarlyLogDecay {
        EarlyLogDecay {
            max_decades_per_period: self.decades_per_period,
            ..EarlyLogDecay::default()
        }
    }

    pub fn station_criterion(&self) -> StationVisibility {
        StationVisibility {
            station: Station::Full,
            samples: self.samples,
            ..StationVisibility::default()
        }
    }

    /// Every setting as key=value pairs; feeding them back through
    /// [`RunConfig::load_str`] rebuilds this configuration exactly.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("command", self.command.name().to_string()),
            ("B", self.field_t.to_string()),
            ("vf", self.fermi_velocity.to_string()),
            ("gap-mev", self.gap_mev.to_string()),
            ("n0", self.n0.to_string()),
            ("sigma", self.sigma.to_string()),
            ("bands", self.bands.to_string()),
            ("tail-tol", self.tail_tolerance.to_string()),
            ("gamma-mev", self.gamma_mev.to_string()),
            ("t-start-fs", self.t_start_fs.to_string()),
        ];
        if let Some(t) = self.t_end_fs {
            out.push(("t-end-fs", t.to_string()));
        }
        out.extend([
            ("samples", self.samples.to_string()),
            ("valleys", self.valleys.to_string()),
            ("format", self.format.to_string()),
            ("si-current", self.si_current.to_string()),
            ("damp-autocorr", self.damp_autocorr.to_string()),
            ("gamma-from-mev", self.gamma_from_mev.to_string()),
            ("gamma-to-mev", self.gamma_to_mev.to_string()),
            ("gamma-steps", self.gamma_steps.to_string()),
            ("criterion", self.criterion.to_string()),
            ("decades-per-period", self.decades_per_period.to_string()),
        ]);
        out
    }
}

impl fmt::Display for Valleys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Valleys::K1 => "k1",
            Valleys::Both => "both",
        })
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::EarlyLog => "early-log",
            Criterion::Station => "station",
        })
    }
}

pub fn config_error(e: graphene_revivals::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn bad(key: &str, value: &str, expected: &str) -> CliError {
    CliError::Config(format!("`{key}` must be {expected}, got `{value}`"))
}

fn number(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| bad(key, value, "a finite number"))
}

fn integer(key: &str, value: &str) -> Result<usize, CliError> {
    value.parse().map_err(|_| bad(key, value, "a non-negative integer"))
}

fn boolean(key: &str, value: &str) -> Result<bool, CliError> {
    value.parse().map_err(|_| bad(key, value, "true or false"))
}
