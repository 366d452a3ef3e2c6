//! End-to-end behaviour of the `tdsts` binary.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn tdsts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdsts"))
        .args(args)
        .env_remove("TDSTS_FOCK_CUTOFF")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Writes `config` with its output redirected into `dir`.
fn config_in(dir: &Path, base: &str, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture(base)).unwrap()).unwrap();
    edit(&mut v);
    let path = dir.join(format!("{base}.config"));
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    path
}

struct Csv {
    block: HashMap<String, String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        assert!(!text.contains('\r'));
        let mut block = HashMap::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.next_if(|l| l.starts_with('#')) {
            let (k, v) = line.trim_start_matches("# ").split_once('=').unwrap();
            block.insert(k.to_string(), v.to_string());
        }
        let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Self { block, header, rows }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let k = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].parse().unwrap()).collect()
    }
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

#[test]
fn vacuum_evaluation_has_the_ground_state_row() {
    let o = tdsts(&["evaluate", "--config", fixture("vacuum.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = Csv::parse(&stdout(&o));
    assert_eq!(
        csv.header,
        ["t", "mean_x", "var_x", "mean_p", "var_p", "uncertainty_product", "entropy_sum", "dY1_sq", "dY2_sq"]
    );
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.rows[0][2], "5.0000000000000000e-1");
    assert_eq!(csv.rows[0][4], "5.0000000000000000e-1");
    assert_eq!(format!("{:.7}", csv.column("entropy_sum")[0]), "2.1447299");
    assert_eq!(csv.block["g2"], "undefined");
}

#[test]
fn thermal_photon_block_is_bose_einstein() {
    let o = tdsts(&["evaluate", "--config", fixture("thermal.json").to_str().unwrap()]);
    assert!(o.status.success());
    let csv = Csv::parse(&stdout(&o));
    let get = |k: &str| csv.block[k].parse::<f64>().unwrap();
    assert!((get("mean_n") - 1.0).abs() <= 1e-14);
    assert!((get("var_n") - 2.0).abs() <= 1e-14);
    assert!((get("g2") - 2.0).abs() <= 1e-14);
}

#[test]
fn reruns_are_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("full.csv");
    let cfg = config_in(dir.path(), "full.json", |v| v["output"]["path"] = out.to_str().unwrap().into());
    let mut runs = Vec::new();
    for sequential in [false, false, true] {
        let mut args = vec!["evaluate", "--config", cfg.to_str().unwrap()];
        if sequential {
            args.insert(0, "--sequential");
        }
        let o = tdsts(&args);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
        runs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
    assert_eq!(Csv::parse(std::str::from_utf8(&runs[0]).unwrap()).rows.len(), 16);
}

#[test]
fn json_output_is_photon_block_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_in(dir.path(), "full.json", |v| v["output"]["format"] = "json".into());
    let o = tdsts(&["evaluate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["photon_stats"]["mean_n"].as_f64().unwrap() > 0.0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    let text = stdout(&o);
    let first = text.find("\"rows\"").unwrap();
    let order: Vec<usize> = ["\"t\"", "\"mean_x\"", "\"var_x\"", "\"dY2_sq\""]
        .iter()
        .map(|k| first + text[first..].find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));

    let csv = Csv::parse(&stdout(&tdsts(&["evaluate", "--config", fixture("full.json").to_str().unwrap()])));
    // same tokens in both formats
    let mut rest = &text[first..];
    for row in &csv.rows {
        let token = format!("\"var_x\": {}", row[2]);
        let at = rest.find(&token).unwrap_or_else(|| panic!("{token} missing"));
        rest = &rest[at + token.len()..];
    }
}

#[test]
fn invalid_configs_exit_two_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"state\": {\n    \"alpha\": {\"re\": 1, \"imag\": 2}\n  }\n}\n").unwrap();
    let o = tdsts(&["evaluate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("imag") && err.contains("line 3"), "{err}");

    let both = config_in(dir.path(), "vacuum.json", |v| v["state"]["alpha"] = serde_json::json!({"re": 1, "mod": 1}));
    assert_eq!(tdsts(&["evaluate", "--config", both.to_str().unwrap()]).status.code(), Some(2));

    let zero = config_in(dir.path(), "full.json", |v| v["time_grid"]["count"] = 0.into());
    let o = tdsts(&["density", "--config", zero.to_str().unwrap(), "--kind", "position"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("time_grid.count"));

    let negative = config_in(dir.path(), "vacuum.json", |v| v["state"]["squeeze"] = serde_json::json!({"r": -1}));
    assert_eq!(tdsts(&["evaluate", "--config", negative.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(tdsts(&["evaluate", "--config", "/nonexistent/config.json"]).status.code(), Some(2));
    assert_eq!(tdsts(&["validate", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_runs_leave_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let cfg = config_in(dir.path(), "sweep.json", |v| v["output"] = serde_json::json!({"path": out.to_str().unwrap()}));
    let o = tdsts(&["sweep", "--config", cfg.to_str().unwrap(), "--axis", "squeeze.nonsense", "--values", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown axis"));
    let o = tdsts(&["sweep", "--config", cfg.to_str().unwrap(), "--axis", "r", "--values", "0,-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn environment_overrides_the_cutoff() {
    let o = Command::new(env!("CARGO_BIN_EXE_tdsts"))
        .args(["evaluate", "--config", fixture("vacuum.json").to_str().unwrap()])
        .env("TDSTS_FOCK_CUTOFF", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("TDSTS_FOCK_CUTOFF"));
}

#[test]
fn vacuum_position_density_is_symmetric_with_the_ground_state_peak() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_in(dir.path(), "vacuum.json", |v| {
        v["grids"] = serde_json::json!({"x": {"halfwidth_sigmas": 5.0, "points": 51}})
    });
    let csv = Csv::parse(&stdout(&tdsts(&["density", "--config", cfg.to_str().unwrap(), "--kind", "position"])));
    let (x, d) = (csv.column("x"), csv.column("density"));
    assert_eq!(d.len(), 51);
    for k in 0..51 {
        assert!((d[k] - d[50 - k]).abs() <= 1e-15);
        assert!((x[k] + x[50 - k]).abs() <= 1e-14);
    }
    assert_eq!(x[25], 0.0);
    assert!((d[25] - std::f64::consts::PI.powf(-0.5)).abs() <= 1e-15);
}

#[test]
fn coherent_density_peaks_at_root_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_in(dir.path(), "vacuum.json", |v| v["state"]["alpha"] = serde_json::json!({"re": 1.0}));
    let csv = Csv::parse(&stdout(&tdsts(&["density", "--config", cfg.to_str().unwrap(), "--kind", "position"])));
    let (x, d) = (csv.column("x"), csv.column("density"));
    let peak = (0..d.len()).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
    assert!((x[peak] - 2f64.sqrt()).abs() <= 1e-12);

    let csv = Csv::parse(&stdout(&tdsts(&["density", "--config", cfg.to_str().unwrap(), "--kind", "momentum"])));
    let total: f64 = csv.column("density").iter().sum::<f64>() * (csv.column("p")[1] - csv.column("p")[0]);
    assert!((total - 1.0).abs() <= 1e-5, "{total}");
}

#[test]
fn rho_file_is_hermitian() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_in(dir.path(), "full.json", |v| {
        v["time_grid"] = serde_json::json!({"start": 1.3, "stop": 1.3, "count": 1});
        v["grids"]["x"]["points"] = 15.into();
    });
    let csv = Csv::parse(&stdout(&tdsts(&["density", "--config", cfg.to_str().unwrap(), "--kind", "rho"])));
    let (re, im) = (csv.column("re"), csv.column("im"));
    let n = 15;
    assert_eq!(re.len(), n * n);
    let mut off_diagonal = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (i * n + j, j * n + i);
            assert!((re[a] - re[b]).abs() <= 1e-13 && (im[a] + im[b]).abs() <= 1e-13);
            off_diagonal = off_diagonal.max(im[a].abs());
        }
    }
    assert!(off_diagonal > 1e-3, "the grid should exercise complex entries");
}

#[test]
fn wavefunction_grid_covers_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_in(dir.path(), "full.json", |v| v["grids"]["x"]["points"] = 7.into());
    let csv = Csv::parse(&stdout(&tdsts(&["density", "--config", cfg.to_str().unwrap(), "--kind", "wavefunction"])));
    assert_eq!(csv.header, ["t", "x", "x_tilde", "re", "im"]);
    assert_eq!(csv.rows.len(), 16 * 49);
}

#[test]
fn squeezing_sweep_widens_position() {
    let o = tdsts(&["sweep", "--config", fixture("sweep.json").to_str().unwrap(), "--axis", "r", "--values", "1.0,0,0.5"]);
    assert!(o.status.success());
    let csv = Csv::parse(&stdout(&o));
    assert_eq!(csv.header[0], "r");
    assert_eq!(csv.column("r"), vec![0.0, 0.5, 1.0]);
    let var_x = csv.column("var_x");
    assert!(var_x[0] < var_x[1] && var_x[1] < var_x[2]);
    assert!((var_x[2] / var_x[0] - 2f64.exp()).abs() <= 1e-12);
}

#[test]
fn input_temperature_sweep_leaves_the_mean() {
    let o = tdsts(&[
        "sweep",
        "--config",
        fixture("sweep.json").to_str().unwrap(),
        "--axis",
        "temps.input[0]",
        "--values",
        "0,0.5,1,2,3",
    ]);
    assert!(o.status.success());
    let csv = Csv::parse(&stdout(&o));
    let mean_x = csv.column("mean_x");
    assert!(mean_x.iter().all(|&m| m == mean_x[0]));
    let var_x = csv.column("var_x");
    assert!(var_x.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn detector_temperature_sweep_scales_the_mean() {
    let taus = [0.0, 0.25, 0.5, 1.0, 2.0];
    let list = taus.map(|t| t.to_string()).join(",");
    let o = tdsts(&["sweep", "--config", fixture("sweep.json").to_str().unwrap(), "--axis", "temps.detector[0].tau", "--values", &list]);
    assert!(o.status.success());
    let csv = Csv::parse(&stdout(&o));
    let mean_x = csv.column("mean_x");
    for (tau, m) in taus.iter().zip(&mean_x) {
        let gain = if *tau == 0.0 { 1.0 } else { coth(0.25 / tau) };
        assert!((m / mean_x[0] - gain.sqrt()).abs() <= 1e-12, "tau {tau}: {}", m / mean_x[0]);
    }
}

#[test]
fn polar_alpha_sweep_matches_cartesian_config() {
    let o = tdsts(&["sweep", "--config", fixture("sweep.json").to_str().unwrap(), "--axis", "alpha.arg", "--values", "0"]);
    let sweep = Csv::parse(&stdout(&o));
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_in(dir.path(), "sweep.json", |_| {});
    let plain = Csv::parse(&stdout(&tdsts(&["evaluate", "--config", cfg.to_str().unwrap()])));
    assert_eq!(sweep.rows[0][1..], plain.rows[0][..]);
}

#[test]
fn corrupted_formula_fails_validation_and_names_its_tag() {
    let o = tdsts(&["validate", "--draws", "4", "--seed", "11", "--corrupt", "mean-x"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let tags = text.lines().find_map(|l| l.strip_prefix("failing tags: ")).expect("failing tags listed");
    assert!(tags.split(", ").any(|t| t == "mean-x"), "{tags}");
    // the zero-detector-temperature reduction is always exercised and unaffected by the corruption
    let reduction = text.lines().find(|l| l.trim_start().starts_with("rho-reduction")).expect("reduction row");
    assert!(reduction.contains(" ok "), "{reduction}");
}

#[test]
fn unknown_corruption_tag_is_a_usage_error() {
    assert_eq!(tdsts(&["validate", "--corrupt", "no-such-tag"]).status.code(), Some(2));
}
