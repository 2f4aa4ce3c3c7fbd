use colorent::spec::LatticeSpec;
use colorent::verify::{run_verify, VerifyConfig};

fn verify(lattice: &str, seed: u64, random_regions: usize, grid: usize) {
    let mut cfg = VerifyConfig::new(lattice.parse::<LatticeSpec>().unwrap());
    cfg.seed = seed;
    cfg.random_regions = random_regions;
    cfg.grid = grid;
    let report = run_verify(&cfg).unwrap();
    println!("{report}");
    assert!(report.all_passed(), "{report}");
}

#[test]
fn torus_3x3_random_regions() {
    verify("torus:3x3", 7, 6, 12);
}

#[test]
fn triangular_1_random_regions() {
    verify("triangular:1", 11, 4, 12);
}
