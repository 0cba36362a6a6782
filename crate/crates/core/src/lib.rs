//! Landau-level wave packets in monolayer graphene.
//!
//! A packet built from a Gaussian population of Landau levels around n₀
//! oscillates with the cyclotron period, collapses, and rebuilds itself at
//! the revival time and its simple fractions. When both bands are
//! populated, interband interference adds a femtosecond zitterbewegung on
//! top. This crate evaluates the autocorrelation function and the electric
//! currents of such packets, extracts their periods and revival structure,
//! and estimates how much Landau-level broadening the revivals survive.
//!
//! ```
//! use graphene_revivals::prelude::*;
//!
//! let field = FieldParams::new(10.0)?;
//! let model = SpectrumModel::new(field);
//! let ts = model.timescales(15)?;
//! assert!((ts.t_classical * 1e15 - 279.2).abs() < 0.1);
//! assert!((ts.t_revival / ts.t_classical - 60.0).abs() < 1e-9);
//! # Ok::<(), graphene_revivals::Error>(())
//! ```
//!
//! Modules, bottom up:
//!
//! * [`units`]: constants, [`FieldParams`](units::FieldParams), conversions
//! * [`spectrum`]: E_{n,s}, its derivatives, T_Cl / T_R / T_ZB
//! * [`wavepacket`]: Gaussian packets and the overlap table U_{m,n}
//! * [`observables`]: A(t), j_x(t), j_y(t) on time grids, with broadening
//! * [`eigenstates`]: Hermite functions and eigenspinors at K₁ and K₂
//! * [`analysis`]: peaks, revival stations, periods, Γ_max

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod eigenstates;
mod error;
pub mod observables;
pub mod spectrum;
pub mod units;
pub mod wavepacket;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analysis::{
        detect_revivals, estimate_gamma_max, find_peaks, measure_period, Classification,
        Detrend, EarlyLogDecay, GammaSearch, RevivalOptions, Station, StationVisibility,
    };
    pub use crate::eigenstates::{eigenspinor, hermite_function, Valley};
    pub use crate::observables::{
        autocorrelation, autocorrelation_at, current_single_band, current_two_band, total_current_both_valleys,
        BroadeningModel, TimeGrid,
    };
    pub use crate::spectrum::{Band, SpectrumModel, TimeScales};
    pub use crate::units::{convert, FieldParams, Unit, HBAR, MEV};
    pub use crate::wavepacket::{BandContent, PacketSpec, WeightTable};
    pub use crate::Error;
}

// The guide's code blocks are compiled and run as doc-tests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/units.md")]
    mod units {}
    #[doc = include_str!("../../../book/src/timescales.md")]
    mod timescales {}
    #[doc = include_str!("../../../book/src/packets.md")]
    mod packets {}
    #[doc = include_str!("../../../book/src/autocorrelation.md")]
    mod autocorrelation {}
    #[doc = include_str!("../../../book/src/currents.md")]
    mod currents {}
    #[doc = include_str!("../../../book/src/broadening.md")]
    mod broadening {}
    #[doc = include_str!("../../../book/src/hermite.md")]
    mod hermite {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
