use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphene-revivals"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let out: PathBuf = dir.join(name);
    let o = bin().args(args).arg("--out").arg(&out).output().unwrap();
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn summary_value(csv: &str, name: &str) -> f64 {
    data_rows(csv)
        .iter()
        .find(|r| r[0] == name)
        .map(|r| r[1].parse().unwrap())
        .unwrap()
}

#[test]
fn header_replay_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_to(
        dir.path(),
        "a.csv",
        &["current", "--n0", "11", "--sigma", "40", "--gamma-mev", "0.7", "--samples", "777", "--t-end-fs", "1234.5"],
    );
    let replay = dir.path().join("a.csv");
    let second = run_to(dir.path(), "b.csv", &["current", "--config", replay.to_str().unwrap()]);
    assert_eq!(first, second);

    let json = run_to(dir.path(), "c.json", &["autocorr", "--format", "json", "--samples", "50"]);
    let replay = dir.path().join("c.json");
    let again = run_to(dir.path(), "d.json", &["autocorr", "--config", replay.to_str().unwrap()]);
    assert_eq!(json, again);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# field\nB=40\nn0=11\n").unwrap();
    let out = run_to(dir.path(), "t.csv", &["timescales", "--config", cfg.to_str().unwrap(), "--B", "10"]);
    assert!(out.contains("# B=10\n"));
    assert!(out.contains("# n0=11\n"));
    assert!((summary_value(&out, "T_Cl") - 239.1).abs() < 0.1);
}

#[test]
fn timescales_scale_with_field() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(dir.path(), "a", &["timescales"]);
    let b = run_to(dir.path(), "b", &["timescales", "--B", "40"]);
    for name in ["T_Cl", "T_R", "T_ZB"] {
        let (x, y) = (summary_value(&a, name), summary_value(&b, name));
        assert!(((y - x / 2.0) / y).abs() < 1e-12, "{name}");
    }
    assert_eq!(summary_value(&a, "T_R/T_ZB").round(), 3600.0);
}

#[test]
fn autocorrelation_starts_at_one() {
    let out = String::from_utf8(run(&["autocorr", "--samples", "10"]).stdout).unwrap();
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 10);
    let abs2: f64 = rows[0][3].parse().unwrap();
    assert!((abs2 - 1.0).abs() < 1e-15);
    assert!(out.contains("t_fs,re_A,im_A,abs2_A\n"));
}

#[test]
fn two_band_currents_have_zero_jx_and_valleys_double() {
    let args = ["current", "--bands", "both", "--samples", "300", "--t-end-fs", "600"];
    let one = String::from_utf8(run(&args).stdout).unwrap();
    let mut with_both = args.to_vec();
    with_both.extend(["--valleys", "both"]);
    let two = String::from_utf8(run(&with_both).stdout).unwrap();
    let (r1, r2) = (data_rows(&one), data_rows(&two));
    assert_eq!(r1.len(), 300);
    for (a, b) in r1.iter().zip(&r2) {
        assert_eq!(a[1].parse::<f64>().unwrap(), 0.0);
        let (y1, y2): (f64, f64) = (a[2].parse().unwrap(), b[2].parse().unwrap());
        assert_eq!(y2, 2.0 * y1);
    }
}

#[test]
fn si_current_is_a_pure_rescaling() {
    let base = ["current", "--samples", "20", "--t-end-fs", "100"];
    let plain = String::from_utf8(run(&base).stdout).unwrap();
    let mut si = base.to_vec();
    si.push("--si-current");
    let scaled = String::from_utf8(run(&si).stdout).unwrap();
    assert!(scaled.contains("t_fs,jx_Am,jy_Am\n"));
    let factor = 1.602_176_634e-19 * 1e6;
    for (a, b) in data_rows(&plain).iter().zip(&data_rows(&scaled)) {
        let (x, y): (f64, f64) = (a[1].parse().unwrap(), b[1].parse().unwrap());
        assert!((y - factor * x).abs() <= 1e-15 * y.abs());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["timescales"]).status.code(), Some(0));
    assert_eq!(run(&["timescales", "--B", "-1"]).status.code(), Some(1));
    assert_eq!(run(&["current", "--bands", "sideways"]).status.code(), Some(1));
    assert_eq!(run(&["current", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["gamma-scan", "--bands", "both"]).status.code(), Some(1));
    assert_eq!(run(&["timescales", "--config", "/definitely/missing.cfg"]).status.code(), Some(1));
    let o = run(&["autocorr", "--samples", "5", "--out", "/definitely/missing/dir/a.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

fn scan_rows(out: &str) -> Vec<Vec<String>> {
    data_rows(out)
}

#[test]
fn gamma_scan_at_zero_matches_library_classification() {
    use graphene_revivals::analysis::{detect_revivals, RevivalOptions, Station};
    use graphene_revivals::observables::{current_magnitude, current_single_band, BroadeningModel, TimeGrid};
    use graphene_revivals::spectrum::{Band, SpectrumModel};
    use graphene_revivals::units::FieldParams;
    use graphene_revivals::wavepacket::{BandContent, PacketSpec};

    let out = String::from_utf8(
        run(&["gamma-scan", "--gamma-from-mev", "0", "--gamma-to-mev", "0", "--gamma-steps", "1", "--samples", "8192"]).stdout,
    )
    .unwrap();
    let rows = scan_rows(&out);
    assert_eq!(rows.len(), 1);

    let model = SpectrumModel::new(FieldParams::new(10.0).unwrap());
    let ts = model.timescales(15).unwrap();
    let table = PacketSpec::new(15, 3.0, BandContent::Positive).unwrap().build_weights().unwrap();
    let grid = TimeGrid::until(1.05 * 1.01 * ts.t_revival, 8192).unwrap();
    let (jx, jy) = current_single_band(&table, &model, &grid, Band::Positive, &BroadeningModel::none()).unwrap();
    let report = detect_revivals(&current_magnitude(&jx, &jy).unwrap(), &ts, &RevivalOptions::default()).unwrap();
    for (k, s) in Station::ALL.iter().enumerate() {
        assert_eq!(rows[0][1 + k], report.station(*s).classification.label());
    }
    let last = out.lines().rev().find(|l| l.starts_with("# gamma_max_meV=")).unwrap();
    let g: f64 = last.split('=').nth(1).unwrap().parse().unwrap();
    assert!((1.85..=7.4).contains(&g), "{g}");
}

#[test]
fn gamma_scan_visibility_never_improves() {
    let out = String::from_utf8(
        run(&["gamma-scan", "--gamma-from-mev", "0", "--gamma-to-mev", "1.5", "--gamma-steps", "7"]).stdout,
    )
    .unwrap();
    let rank = |s: &str| match s {
        "absent" => 0,
        "fractional" => 1,
        "full" => 2,
        other => panic!("{other}"),
    };
    let rows = scan_rows(&out);
    assert_eq!(rows.len(), 7);
    for pair in rows.windows(2) {
        for (before, after) in pair[0][1..=4].iter().zip(&pair[1][1..=4]) {
            assert!(rank(after) <= rank(before));
        }
        let (a, b): (f64, f64) = (pair[0][9].parse().unwrap(), pair[1][9].parse().unwrap());
        assert!(b >= a);
        assert!(!(pair[0][10] == "no" && pair[1][10] == "yes"));
    }
}
