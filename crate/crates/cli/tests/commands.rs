use std::f64::consts::SQRT_2;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermal-ent"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Header plus parsed rows; non-numeric cells become NaN.
fn table(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = stdout(out);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn help_for_every_command() {
    for cmd in ["xy-sweep", "xy-tc", "witness", "ed", "mf-aff"] {
        let out = run(&[cmd, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        assert!(stdout(&out).contains("Usage"));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["xy-sweep", "--h", "", "--t", "0.1"][..],
        &["xy-sweep", "--h", "0"],
        &["xy-sweep", "--h", "0", "--t", "0.5,0.2"],
        &["xy-sweep", "--h", "0", "--t", "0,0.2"],
        &["xy-tc", "--h", "0", "--j", "-1"],
        &["ed", "--n-sites", "15", "--t", "0.1"],
        &["witness", "--u", "0", "--m", "6", "--n-sites", "10"],
        &["mf-aff", "--h", "0", "--t", "0.1", "--j-f", "0.5"],
        &["xy-sweep", "--bogus"],
        &["nonsense"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn xy_sweep_grid() {
    let out = run(&["xy-sweep", "--h", "1,0,0.5", "--t", "0.1:2.0:0.1"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header.join(","), "T,h,C,Ctilde,Z,n,Xplus,Xminus,Phi");
    assert_eq!(rows.len(), 60);
    let (t, h, c) = (column(&header, "T"), column(&header, "h"), column(&header, "C"));
    for w in rows.windows(2) {
        assert!((w[0][h], w[0][t]) < (w[1][h], w[1][t]));
    }
    for r in &rows {
        if r[t] > 0.485 {
            assert_eq!(r[c], 0.0, "T={}", r[t]);
        }
        // read-back invariants
        let (z, n, xp, xm, phi) = (r[4], r[5], r[6], r[7], r[8]);
        assert!((xm - (1.0 - 2.0 * n + xp)).abs() < 1e-9);
        assert!((phi - (n - n * n + SQRT_2 * z + z * z)).abs() < 1e-9);
        assert!(r[c] >= 0.0 && r[c] == r[3].max(0.0));
    }
}

#[test]
fn xy_sweep_drops_duplicates() {
    let out = run(&["xy-sweep", "--h", "0.5,0.5", "--t", "0.2,0.2,0.3"]);
    assert!(out.status.success());
    assert_eq!(table(&out).1.len(), 2);
    assert!(stderr(&out).contains("duplicate"));
}

#[test]
fn xy_tc_reports() {
    let one = run(&["xy-tc", "--h", "0"]);
    assert!(one.status.success());
    let (_, rows) = table(&one);
    assert!((rows[0][1] - 0.4843).abs() < 5e-4);

    let doubled = run(&["xy-tc", "--h", "0", "--j", "2"]);
    assert!((table(&doubled).1[0][1] - 2.0 * rows[0][1]).abs() < 1e-10);

    // the spread check is an invariant: loose tolerance passes, tight fails
    assert!(run(&["xy-tc", "--h", "0,0.5", "--tol", "1e-2"]).status.success());
    let tight = run(&["xy-tc", "--h", "0,0.5", "--tol", "1e-9"]);
    assert_eq!(tight.status.code(), Some(3));
    assert_eq!(table(&tight).1.len(), 2);
    assert!(stderr(&tight).contains("spread"));
}

#[test]
fn witness_verdicts() {
    let out = run(&["witness", "--u", "0", "--m", "0", "--n-sites", "10"]);
    let (header, rows) = table(&out);
    assert_eq!(header.join(","), "Phi,verdict,energy_verdict");
    assert!((rows[0][0] - 0.25).abs() < 1e-15);
    assert!(stdout(&out).ends_with(",not witnessed,not witnessed\n"));

    let out = run(&["witness", "--u", "-25", "--m", "0", "--n-sites", "100"]);
    assert!(stdout(&out).ends_with(",entangled,entangled\n"));

    let field = run(&["witness", "--u", "-30", "--m", "10", "--n-sites", "100", "--h", "0.3"]);
    assert!(stdout(&field).trim_end().ends_with(",n/a"));

    // the spin energy sits N h / 2 above the fermion energy
    let spin = run(&[
        "witness",
        "--u",
        "-15",
        "--m",
        "10",
        "--n-sites",
        "100",
        "--h",
        "0.3",
        "--spin-energy",
    ]);
    assert_eq!(stdout(&spin), stdout(&field));
}

#[test]
fn ed_two_site_critical_temperature() {
    let out = run(&["ed", "--n-sites", "2", "--h", "1.5", "--critical"]);
    let (header, rows) = table(&out);
    assert_eq!(header.join(","), "bond,i,j,Tc");
    assert!((rows[0][3] - 1.0 / (2.0 * (1.0 + SQRT_2).ln())).abs() < 1e-9);
}

#[test]
fn ed_alternating_chain() {
    let zero = run(&["ed", "--model", "alternating", "--n-sites", "12", "--t", "0.05,0.2,0.5"]);
    assert!(zero.status.success());
    let (header, rows) = table(&zero);
    assert_eq!(header.join(","), "T,U,M,bond,C,Ctilde,Z,n");
    assert_eq!(rows.len(), 3 * 11);
    let (bond, c) = (column(&header, "bond"), column(&header, "C"));
    for r in &rows {
        // odd bonds are ferromagnetic
        if r[bond] as usize % 2 == 1 {
            assert_eq!(r[c], 0.0);
        }
    }
    let field = run(&[
        "ed",
        "--model",
        "alternating",
        "--n-sites",
        "12",
        "--h",
        "1.0",
        "--t",
        "0.05",
    ]);
    let (_, rows) = table(&field);
    assert!(rows.iter().any(|r| r[bond] as usize % 2 == 1 && r[c] > 0.0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.toml");
    std::fs::write(
        &path,
        r#"
[ed]
n-sites = 3
t = [0.1, 0.4]
h = 0.2
bonds = [
    { i = 0, j = 1, j-xy = 1.0, j-z = 1.0 },
    { i = 1, j = 2, j-xy = 1.0, j-z = 0.0 },
]
"#,
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let out = run(&["ed", "--config", cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(table(&out).1.len(), 4);

    let csv = dir.path().join("out.csv");
    let overridden = run(&["ed", "--config", cfg, "--t", "0.3", "--output", csv.to_str().unwrap()]);
    assert!(overridden.status.success());
    assert!(stdout(&overridden).is_empty());
    let written = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(written.lines().count(), 3);
    assert!(written.lines().skip(1).all(|l| l.starts_with("2.9999999999999999e-1,")));

    std::fs::write(&path, "[ed]\nsites = 3\n").unwrap();
    assert_eq!(run(&["ed", "--config", cfg]).status.code(), Some(1));
}

#[test]
fn mf_aff_zero_field() {
    let out = run(&["mf-aff", "--h", "0", "--t", "0.05,0.2,0.6"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(
        header.join(","),
        "T,h,da,db,pab_re,pab_im,pba_re,pba_im,Ca,Cf,converged"
    );
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    let (ca, cf) = (column(&header, "Ca"), column(&header, "Cf"));
    assert!(rows.iter().all(|r| r[cf] == 0.0));
    assert!(rows[0][ca] > 0.0);
}

#[test]
fn mf_aff_critical_temperatures() {
    let out = run(&["mf-aff", "--h", "0,0.9", "--critical"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "h,Tc_a,Tc_f,identity_a,identity_f");
    assert!(lines[1].contains(",absent,"));
    let (_, rows) = table(&out);
    assert!(rows[1][2] > 0.0 && rows[1][4].abs() < 1e-6);
}

#[test]
fn worker_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_thermal-ent"))
        .env("THERMAL_ENT_WORKERS", "zero")
        .args(["xy-tc", "--h", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
