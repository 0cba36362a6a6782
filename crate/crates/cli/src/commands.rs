//! The four subcommands. Each returns the full output text.

use graphene_revivals::analysis::{
    estimate_gamma_max, GammaSearch, Scenario, Station, VisibilityCriterion,
};
use graphene_revivals::observables::{
    autocorrelation_with, current_single_band, current_two_band, total_current_both_valleys,
};
use graphene_revivals::units::{E_CHARGE, MEV};
use graphene_revivals::wavepacket::BandContent;
use graphene_revivals::Error;

use crate::config::{config_error, Command, Criterion, RunConfig, Valleys};
use crate::output::{render_summary, render_table, Cell, Table};
use crate::CliError;

pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    match config.command {
        Command::Timescales => timescales(config),
        Command::Autocorr => autocorr(config),
        Command::Current => current(config),
        Command::GammaScan => gamma_scan(config),
    }
}

fn runtime(e: Error) -> CliError {
    CliError::Runtime(e.to_string())
}

fn timescales(config: &RunConfig) -> Result<String, CliError> {
    let model = config.model()?;
    let ts = model.timescales(config.n0).map_err(config_error)?;
    let zb_gap = model.zb_period_with_gap(config.n0).map_err(config_error)?;
    let n0 = config.n0 as f64;
    let records = [
        ("T_Cl", ts.t_classical * 1e15, "fs"),
        ("T_R", ts.t_revival * 1e12, "ps"),
        ("T_ZB", ts.t_zitterbewegung * 1e15, "fs"),
        ("T_ZB_gap", zb_gap * 1e15, "fs"),
        ("T_R/T_Cl", ts.t_revival / ts.t_classical, "1"),
        ("T_Cl/T_ZB", ts.t_classical / ts.t_zitterbewegung, "1"),
        ("T_R/T_ZB", ts.t_revival / ts.t_zitterbewegung, "1"),
        ("4n0", 4.0 * n0, "1"),
        ("16n0^2", 16.0 * n0 * n0, "1"),
        ("hbar_Omega", model.energy_scale() / MEV, "meV"),
        ("L", model.params().magnetic_length() * 1e9, "nm"),
    ];
    Ok(render_summary(config, &records))
}

fn autocorr(config: &RunConfig) -> Result<String, CliError> {
    let model = config.model()?;
    let table = config.packet()?.build_weights().map_err(config_error)?;
    let grid = config.grid()?;
    let a = autocorrelation_with(&table, &model, &grid, &config.broadening()?);
    let rows = grid
        .times()
        .into_iter()
        .zip(&a.values)
        .map(|(t, z)| {
            vec![
                Cell::Num(t * 1e15),
                Cell::Num(z.re),
                Cell::Num(z.im),
                Cell::Num(z.norm_sqr()),
            ]
        })
        .collect();
    let mut notes = vec![format!("levels={}..={}", table.n_min(), table.n_max())];
    if config.valleys == Valleys::Both {
        notes.push("A(t) is the same in both valleys and is not doubled".into());
    }
    Ok(render_table(
        config,
        &Table {
            columns: vec!["t_fs", "re_A", "im_A", "abs2_A"],
            rows,
            notes,
            footer: vec![],
        },
    ))
}

fn current(config: &RunConfig) -> Result<String, CliError> {
    let model = config.model()?;
    let table = config.packet()?.build_weights().map_err(config_error)?;
    let grid = config.grid()?;
    let broadening = config.broadening()?;
    let (mut jx, mut jy) = match config.bands.single() {
        Some(band) => current_single_band(&table, &model, &grid, band, &broadening),
        None => current_two_band(&table, &model, &grid, &broadening),
    }
    .map_err(runtime)?;
    if config.valleys == Valleys::Both {
        jx = total_current_both_valleys(&jx);
        jy = total_current_both_valleys(&jy);
    }
    let (columns, units) = if config.si_current {
        let scale = E_CHARGE * config.fermi_velocity;
        jx = jx.scaled(scale);
        jy = jy.scaled(scale);
        (vec!["t_fs", "jx_Am", "jy_Am"], "A*m (e*v_F times the dimensionless current)")
    } else {
        (vec!["t_fs", "jx_evf", "jy_evf"], "e*v_F")
    };
    let rows = grid
        .times()
        .into_iter()
        .zip(jx.values.iter().zip(&jy.values))
        .map(|(t, (x, y))| vec![Cell::Num(t * 1e15), Cell::Num(*x), Cell::Num(*y)])
        .collect();
    Ok(render_table(
        config,
        &Table {
            columns,
            rows,
            notes: vec![
                format!("levels={}..={}", table.n_min(), table.n_max()),
                format!("units={units}"),
            ],
            footer: vec![],
        },
    ))
}

fn relative_peak(series_ref: f64, peak: Option<f64>) -> f64 {
    peak.map_or(0.0, |v| v / series_ref)
}

fn gamma_scan(config: &RunConfig) -> Result<String, CliError> {
    if config.bands == BandContent::Both {
        return Err(CliError::Config(
            "gamma-scan needs a single-band packet (bands=pos or bands=neg)".into(),
        ));
    }
    let field = config.field()?;
    let packet = config.packet()?;
    let scenario = Scenario::new(packet, field).map_err(config_error)?;
    let station = config.station_criterion();
    let early = config.early_criterion();
    let criterion: &dyn VisibilityCriterion = match config.criterion {
        Criterion::EarlyLog => &early,
        Criterion::Station => &station,
    };

    let mut rows = Vec::new();
    for gamma_mev in config.gammas_mev()? {
        let gamma = gamma_mev * MEV;
        let report = station.report(&scenario, gamma).map_err(runtime)?;
        let mut row = vec![Cell::Num(gamma_mev)];
        for s in Station::ALL {
            row.push(Cell::Text(report.station(s).classification.label()));
        }
        for s in Station::ALL {
            let peak = report.station(s).peak.map(|p| p.value);
            row.push(Cell::Num(relative_peak(report.reference, peak)));
        }
        row.push(Cell::Num(early.decay_rate(&scenario, gamma).map_err(runtime)?));
        let visible = criterion.is_visible(&scenario, gamma).map_err(runtime)?;
        row.push(Cell::Text(if visible { "yes" } else { "no" }));
        rows.push(row);
    }

    let estimate = estimate_gamma_max(&packet, &field, criterion, &GammaSearch::default())
        .map_err(runtime)?;
    let criterion_note = match config.criterion {
        Criterion::EarlyLog => format!(
            "criterion=early-log: positive j_y maxima lose at most {} decades per classical period over the first {} periods",
            early.max_decades_per_period, early.periods
        ),
        Criterion::Station => "criterion=station: |j| revival at T_R classified present".into(),
    };
    Ok(render_table(
        config,
        &Table {
            columns: vec![
                "gamma_meV",
                "class_TR4",
                "class_TR2",
                "class_3TR4",
                "class_TR",
                "peak_TR4",
                "peak_TR2",
                "peak_3TR4",
                "peak_TR",
                "decades_per_TCl",
                "visible",
            ],
            rows,
            notes: vec![
                "classes and peaks: |j|(t) near each station, peaks relative to |j|(0)".into(),
                criterion_note,
            ],
            footer: vec![
                ("gamma_max_meV", estimate.gamma_max / MEV),
                ("gamma_fail_meV", estimate.bracket.1 / MEV),
            ],
        },
    ))
}
