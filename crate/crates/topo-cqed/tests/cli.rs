use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_topo-cqed"));
    c.env_remove("TOPO_CQED_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn header(p: &Path) -> String {
    read(p).lines().next().unwrap_or_default().to_string()
}

fn sidecar(p: &Path) -> serde_json::Value {
    serde_json::from_str(&read(&p.with_extension("json"))).expect("sidecar is JSON")
}

fn out_path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn spectroscopy_map_schema_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let p = out_path(&dir, "map.csv");
    let o = run(&[
        "spectroscopy-map",
        "-o",
        p.to_str().unwrap(),
        "--set",
        "grid.phi_points=5",
        "--set",
        "grid.drive_points=21",
    ]);
    ok(&o);
    assert_eq!(header(&p), "phi,omega_l_MHz,R,T");
    assert_eq!(read(&p).lines().count(), 1 + 5 * 21);
    let overlay = p.with_file_name("map_overlay.csv");
    assert_eq!(header(&overlay), "phi,omega_j_MHz");
    assert_eq!(read(&overlay).lines().count(), 1 + 5 * 8);
    let meta = sidecar(&p);
    assert_eq!(meta["experiment"], "spectroscopy-map");
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["parameters"]["array"]["n_cells"], 4);
    assert!(meta["wall_time_s"].as_f64().unwrap() >= 0.0);
    let row: Vec<f64> = read(&p).lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[2] + row[3] - 1.0).abs() < 1e-10);
}

#[test]
fn coupling_spectrum_zero_odd_bulk_couplings() {
    let dir = tempfile::tempdir().unwrap();
    let p = out_path(&dir, "xi.csv");
    ok(&run(&["coupling-spectrum", "-o", p.to_str().unwrap(), "--set", "grid.phi_points=3"]));
    assert_eq!(header(&p), "j,omega_j_MHz,xi_j,parity,class");
    let text = read(&p);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 36);
    for r in &rows {
        let j: usize = r[0].parse().unwrap();
        let xi: f64 = r[2].parse().unwrap();
        if j != 18 && j != 19 && j % 2 == 1 {
            assert!(xi.abs() < 1e-8, "xi_{j} = {xi}");
        }
    }
    let mode = p.with_file_name("xi_mode_18.csv");
    assert_eq!(header(&mode), "site_index,sublattice,amplitude");
    assert_eq!(read(&mode).lines().count(), 37);
    let edge = p.with_file_name("xi_edge.csv");
    assert_eq!(header(&edge), "n_cells,phi,xi_N,xi_N1,sqrt_cos_phi,sqrt_2cos_phi");
    assert_eq!(read(&edge).lines().count(), 1 + 3 * 3);
}

#[test]
fn rabi_dynamics_columns_and_decay_switch() {
    let dir = tempfile::tempdir().unwrap();
    let p = out_path(&dir, "dyn.csv");
    ok(&run(&[
        "rabi-dynamics",
        "--no-decay",
        "-o",
        p.to_str().unwrap(),
        "--set",
        "grid.time_points=301",
    ]));
    let expected: Vec<String> = std::iter::once("time_us".to_string())
        .chain((1..=12).map(|s| format!("site_{s}")))
        .chain(std::iter::once("total_norm".to_string()))
        .collect();
    assert_eq!(header(&p), expected.join(","));
    let meta = sidecar(&p);
    assert_eq!(meta["summary"]["propagator"], "spectral");
    assert_eq!(meta["parameters"]["dispersive"]["include_decay"], false);
    let period = meta["summary"]["period_us"].as_f64().unwrap();
    assert!((period - 1.04).abs() < 0.06, "{period}");

    let lossy = out_path(&dir, "lossy.csv");
    ok(&run(&["rabi-dynamics", "-o", lossy.to_str().unwrap(), "--set", "grid.time_points=301"]));
    assert!(sidecar(&lossy)["summary"]["final_norm"].as_f64().unwrap() < 1.0);
}

#[test]
fn scattering_schema() {
    let dir = tempfile::tempdir().unwrap();
    let p = out_path(&dir, "t.csv");
    ok(&run(&["scattering", "-o", p.to_str().unwrap(), "--set", "grid.delta_points=101"]));
    assert_eq!(header(&p), "delta_p_over_GammaL,T,Re_chi,Im_chi,Im_peak1,Im_peak2");
    assert_eq!(read(&p).lines().count(), 102);
    assert_eq!(sidecar(&p)["summary"]["regime"], "interference");
}

#[test]
fn circuit_design_schema() {
    let dir = tempfile::tempdir().unwrap();
    let p = out_path(&dir, "c.csv");
    ok(&run(&["circuit-design", "-o", p.to_str().unwrap()]));
    assert_eq!(header(&p), "phi,delta_t1,delta_t2,phi_ext_t1,phi_ext_t2,g");
    let meta = sidecar(&p);
    assert_eq!(meta["summary"]["unique_flux_inversion"], true);
    assert!(meta["summary"]["c0"].as_f64().unwrap() > 1.0);
    let lo = meta["summary"]["delta_min_over_pi"].as_f64().unwrap();
    let hi = meta["summary"]["delta_max_over_pi"].as_f64().unwrap();
    assert!(lo >= 0.5 - 1e-12 && hi <= 0.9, "{lo} {hi}");
}

#[test]
fn oracle_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let p = out_path(&dir, "o.csv");
    let o = run(&["oracle-check", "-o", p.to_str().unwrap(), "--set", "grid.drive_points=9"]);
    ok(&o);
    assert!(String::from_utf8_lossy(&o.stdout).contains("max |R_linear - R_oracle|"));
    assert_eq!(header(&p), "omega_l_MHz,R_linear,R_oracle,R_oracle_half_eta,abs_diff");
}

fn ensemble(dir: &tempfile::TempDir, name: &str, extra: &[&str], seed_env: Option<&str>) -> String {
    let p = out_path(dir, name);
    let mut c = bin();
    c.args(["disorder-ensemble", "-o", p.to_str().unwrap()])
        .args(["--set", "disorder.samples=3", "--set", "grid.drive_points=201"])
        .args(extra);
    if let Some(s) = seed_env {
        c.env("TOPO_CQED_SEED", s);
    }
    ok(&c.output().unwrap());
    read(&p)
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = ensemble(&dir, "a.csv", &["--seed", "11", "--jobs", "1"], None);
    let b = ensemble(&dir, "b.csv", &["--seed", "11", "--jobs", "4"], None);
    assert_eq!(a, b);
    assert_eq!(
        read(&dir.path().join("a_peaks.csv")),
        read(&dir.path().join("b_peaks.csv"))
    );
    let c = ensemble(&dir, "c.csv", &["--seed", "12"], None);
    assert_ne!(a, c);
    assert!(a.lines().next().unwrap().ends_with("T_seed_11,T_seed_12,T_seed_13"));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let env = ensemble(&dir, "env.csv", &[], Some("11"));
    let flag = ensemble(&dir, "flag.csv", &["--seed", "11"], None);
    assert_eq!(env, flag);
    assert_eq!(sidecar(&dir.path().join("env.csv"))["seed"], 11);
    // the flag wins over the environment
    let both = ensemble(&dir, "both.csv", &["--seed", "11"], Some("99"));
    assert_eq!(both, flag);
}

#[test]
fn config_file_overrides_defaults_and_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "experiment = \"scattering\"\n[scattering]\nj = 0.075\n[grid]\ndelta_points = 11\n",
    )
    .unwrap();
    let p = out_path(&dir, "s.csv");
    ok(&run(&["scattering", "-c", cfg.to_str().unwrap(), "-o", p.to_str().unwrap()]));
    assert_eq!(sidecar(&p)["summary"]["regime"], "splitting");
    assert_eq!(read(&p).lines().count(), 12);

    ok(&run(&[
        "scattering",
        "-c",
        cfg.to_str().unwrap(),
        "-o",
        p.to_str().unwrap(),
        "--set",
        "scattering.j=0.035",
    ]));
    assert_eq!(sidecar(&p)["summary"]["regime"], "interference");
}

#[test]
fn schema_violations_exit_nonzero_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[array]\nn_cells = 4\nt0_mhz = 100.0\nphase = 0.3\n").unwrap();
    let o = run(&["spectroscopy-map", "-c", cfg.to_str().unwrap(), "-o", out_path(&dir, "x.csv").to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("phase") && err.contains("line 4"), "{err}");

    std::fs::write(&cfg, "experiment = \"scattering\"\n").unwrap();
    let o = run(&["rabi-dynamics", "-c", cfg.to_str().unwrap()]);
    assert!(!o.status.success());

    let o = run(&["rabi-dynamics", "--set", "array.phi_over_pi=1.5", "-o", out_path(&dir, "y.csv").to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("phi"));
}

#[test]
fn accept_single_criterion() {
    let o = run(&["accept", "--criterion", "1"]);
    ok(&o);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("[PASS]  1 coupling coefficients"), "{text}");
}

#[test]
fn help_documents_csv_schema() {
    let o = run(&["scattering", "--help"]);
    ok(&o);
    assert!(String::from_utf8_lossy(&o.stdout).contains("delta_p_over_GammaL,T,Re_chi,Im_chi,Im_peak1,Im_peak2"));
}
