use std::f64::consts::LN_2;
use std::process::{Command, Output};

fn colorent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colorent")).args(args).output().expect("run colorent")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

#[test]
fn levinwen_sweep_drops_from_four_to_two_bits() {
    let o = colorent(&["sweep", "--lattice", "torus:12x12", "--region", "levinwen:3,1", "--temps", "0.01:20.01:5"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert_eq!(csv.lines().next().unwrap(), "T,k_r,k_b,k_g,S_A_nats,S_A_ln2,S_topo_nats,S_topo_ln2,I_AB_nats");
    assert_eq!(csv.lines().count(), 6);
    let topo = column(&csv, "S_topo_ln2");
    assert!((topo[0] - 4.0).abs() < 1e-9);
    assert!((topo[4] - 2.0).abs() < 1e-3);
    let nats = column(&csv, "S_topo_nats");
    assert!((nats[0] - 4.0 * LN_2).abs() < 1e-9);
}

#[test]
fn mutual_fills_the_last_column() {
    let o = colorent(&["mutual", "--lattice", "torus:6x6", "--region", "hexagon:0", "--temps", "0.5:1.5:0.5"]);
    assert!(o.status.success());
    let i = column(&stdout(&o), "I_AB_nats");
    assert_eq!(i.len(), 3);
    assert!(i.iter().all(|&x| x >= 0.0));
}

#[test]
fn hard_colors_reach_the_color_plateau() {
    let o = colorent(&[
        "sweep", "--lattice", "torus:12x12", "--region", "levinwen:3,1", "--hard-x", "r,b", "--limit",
        "thermodynamic", "--temps", "50:50:1",
    ]);
    assert!(o.status.success());
    assert!((column(&stdout(&o), "S_topo_ln2")[0] - 3.0).abs() < 1e-6);
}

#[test]
fn output_is_deterministic_and_json_agrees() {
    let args = ["sweep", "--lattice", "triangular:4", "--region", "hexagon:0", "--lambda-x", "0.5,1,2", "--temps", "0.1:3:0.3"];
    let a = stdout(&colorent(&args));
    assert_eq!(a, stdout(&colorent(&args)));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&colorent(&json_args))).unwrap();
    let s = column(&a, "S_A_nats");
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), s.len());
    for (row, s) in rows.iter().zip(s) {
        assert!((row["s_a_nats"].as_f64().unwrap() - s).abs() <= 1e-10 * s.abs().max(1.0));
    }
}

#[test]
fn malformed_input_exits_two_with_position() {
    let o = colorent(&["sweep", "--lattice", "torus:12x12", "--region", "annulus:3,x", "--temps", "1:2:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 10"));
    let o = colorent(&["sweep", "--lattice", "torus:4x4", "--region", "hexagon:0", "--temps", "1:2:1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_detects_an_injected_fault() {
    let o = colorent(&["verify", "--lattice", "torus:3x3", "--grid", "6"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = colorent(&["verify", "--lattice", "torus:3x3", "--grid", "6", "--inject-fault", "cardinality"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("subgroup cardinalities")));
}

#[test]
fn dump_and_validate() {
    let o = colorent(&["dump-lattice", "--lattice", "triangular:1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["qubit_count"], 7);
    assert_eq!(v["plaquettes"].as_array().unwrap().len(), 3);
    assert_eq!(v["links"].as_array().unwrap().len(), 9);
    let o = colorent(&["validate", "--lattice", "torus:6x6"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
