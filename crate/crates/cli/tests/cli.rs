use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nanoent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nanoent")).args(args).output().expect("binary runs")
}

const CONFIG: &str = r#"{
    "name": "rabi",
    "params": {"omega0": 1.0, "kappa_a": 1.0, "kappa_b": 1.0, "n_atoms": 100},
    "initial": {"kind": "basis", "atom_exc": 0, "n_a": 1, "n_b": 0},
    "space": {"kind": "manifold", "atom_cap": 1, "n": 1},
    "times": {"t_end": 2.0, "samples": 5},
    "outputs": ["populations", "negativity"]
}"#;

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("rabi.json.in");
    fs::write(&cfg, CONFIG).unwrap();
    let out = dir.path().join("out");
    let o = nanoent(&["simulate", path_str(&cfg), "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let pops = fs::read_to_string(out.join("rabi_populations.csv")).unwrap();
    assert_eq!(pops.lines().count(), 6);
    assert!(pops.starts_with("t,"));
    let neg = fs::read_to_string(out.join("rabi_negativity.csv")).unwrap();
    assert!(neg.starts_with("t,negativity\n"));

    // rerunning the sidecar reproduces the CSVs byte for byte
    let again = dir.path().join("again");
    let o = nanoent(&["simulate", path_str(&out.join("rabi.json")), "--out", path_str(&again)]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(again.join("rabi_populations.csv")).unwrap(), pops);
}

#[test]
fn bad_config_fails_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, CONFIG.replace("\"samples\": 5", "\"samples\": 1")).unwrap();
    let o = nanoent(&["simulate", path_str(&cfg), "--out", path_str(dir.path())]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("times.samples"));
}

#[test]
fn unknown_figure_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanoent(&["figure", "fig1", "--out", path_str(dir.path())]);
    assert!(!o.status.success());
}

#[test]
fn figure_writes_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let o = nanoent(&["figure", "fig7", "--out", path_str(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("fig7.py").exists());
    assert!(dir.path().join("fig7_g30_negativity.csv").exists());
}

#[test]
fn coupling_reference_and_file() {
    let o = nanoent(&["coupling", "--reference"]);
    assert!(o.status.success());
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("kappa,3.849"));

    let dir = tempfile::tempdir().unwrap();
    let dev = dir.path().join("dev.json");
    fs::write(&dev, r#"{"d": -1.0, "n_atoms": 100, "m_eff": 1e-16, "omega0": 6.3e6, "n_mag": 1e6, "b0": 1e-4}"#).unwrap();
    let o = nanoent(&["coupling", path_str(&dev)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("`d`"));
}

#[test]
fn sweep_separates_outputs() {
    let dir = tempfile::tempdir().unwrap();
    for (stem, n_a) in [("one", 1), ("two", 0)] {
        let cfg = CONFIG
            .replace("\"name\": \"rabi\"", &format!("\"name\": \"{stem}\""))
            .replace("\"n_a\": 1", &format!("\"n_a\": {n_a}"))
            .replace("\"n_b\": 0", &format!("\"n_b\": {}", 1 - n_a));
        fs::write(dir.path().join(format!("{stem}.json")), cfg).unwrap();
    }
    let out = dir.path().join("out");
    let pattern = format!("{}/*.json", dir.path().display());
    let o = nanoent(&["sweep", &pattern, "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("one/one_populations.csv").exists());
    assert!(out.join("two/two_populations.csv").exists());

    let o = nanoent(&["sweep", &format!("{}/*.nothing", dir.path().display())]);
    assert!(!o.status.success());
}
