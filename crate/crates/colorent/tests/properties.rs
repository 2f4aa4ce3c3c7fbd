use proptest::prelude::*;

use colorent::bipartition::{annulus_stats, region_stats, AnnulusCounts, Bipartition, RegionStats};
use colorent::colex::{build_torus_colex, build_triangular_colex, BoundaryKind};
use colorent::oracle::{eta_weight, representations};
use colorent::spec::{parse_grid, LatticeSpec};
use colorent::thermo::{
    entanglement_entropy, mutual_information, trace_rho_n, trace_rho_n_from_f, Couplings, Limit,
};
use colorent::verify::bfs_patch;
use colorent::ByColor;

fn triple(lo: u64, hi: u64) -> impl Strategy<Value = ByColor<u64>> {
    [lo..=hi, lo..=hi, lo..=hi].prop_map(ByColor)
}

fn couplings(hi: f64) -> impl Strategy<Value = Couplings> {
    [0.01..hi, 0.01..hi, 0.01..hi].prop_map(|k| Couplings::from_k(ByColor(k)))
}

/// The four annulus regions for random plaquette counts on a torus just large enough to hold them.
fn annulus(max_inner: u64) -> impl Strategy<Value = [RegionStats; 4]> {
    (triple(1, max_inner), triple(1, 3), triple(0, 3), triple(1, 8), triple(0, 6), 0u64..20).prop_map(
        |(inner, cut_a, cut_ab, boundary, extra, pad)| {
            let annulus = ByColor([0, 1, 2].map(|i| 2 * cut_a.0[i] + 2 + extra.0[i]));
            let counts = AnnulusCounts { inner, annulus, boundary, cut_a, cut_ab };
            annulus_stats(counts.min_n() + pad, &counts).expect("consistent counts")
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn renyi_entropies_decrease_with_order(four in annulus(10), c in couplings(2.0)) {
        for st in &four {
            let s1 = entanglement_entropy(st, &c, Limit::Exact).unwrap().s_total;
            let s2 = -trace_rho_n(st, &c, 2.0, Limit::Exact).unwrap().ln();
            let s3 = -trace_rho_n(st, &c, 3.0, Limit::Exact).unwrap().ln() / 2.0;
            prop_assert!(s1 >= -1e-12);
            prop_assert!(s2 <= s1 + 1e-9, "S2 {s2} > S1 {s1}");
            prop_assert!(s3 <= s2 + 1e-9, "S3 {s3} > S2 {s2}");
        }
    }

    #[test]
    fn f_term_traces_match_direct_traces(four in annulus(4), c in couplings(1.2), n in 1.5f64..4.0) {
        for st in &four {
            let direct = trace_rho_n(st, &c, n, Limit::Exact).unwrap();
            let via_f = trace_rho_n_from_f(st, &c, n).unwrap();
            prop_assert!((direct - via_f).abs() <= 1e-8 * direct, "{direct} vs {via_f}");
        }
    }

    #[test]
    fn mutual_information_is_nonnegative(
        triangular in any::<bool>(),
        start in 0usize..1000,
        size in 1usize..60,
        c in couplings(2.0),
    ) {
        let colex = if triangular { build_triangular_colex(3) } else { build_torus_colex(6, 6) }.unwrap();
        let n = colex.qubit_count();
        let patch = bfs_patch(&colex, start % n, size.min(n - 1));
        let bp = Bipartition::new(&colex, patch).unwrap();
        let stats = (region_stats(&colex, &bp), region_stats(&colex, &bp.complement().unwrap()));
        // Regions outside the closed-form scope are rejected by region_stats.
        prop_assume!(stats.0.is_ok() && stats.1.is_ok());
        let (sa, sb) = (stats.0.unwrap(), stats.1.unwrap());
        let whole = RegionStats::whole(sa.boundary_kind, sa.n_per_color);
        let i = mutual_information(&sa, &sb, &whole, &c, Limit::Exact).unwrap();
        prop_assert!(i >= -1e-9, "I = {i}");
    }

    #[test]
    fn eta_is_a_class_function(counts in triple(0, 9), c in couplings(3.0)) {
        let eta = eta_weight(counts, &c, 9, BoundaryKind::Torus);
        prop_assert!(eta > 0.0 && eta <= 1.0 + 1e-12);
        for rep in representations(counts, 9) {
            let other = eta_weight(rep, &c, 9, BoundaryKind::Torus);
            prop_assert!((other - eta).abs() <= 1e-12 * eta);
        }
    }

    #[test]
    fn grids_are_inclusive(start in -5.0f64..5.0, steps in 0usize..40, step in 0.01f64..2.0) {
        let stop = start + steps as f64 * step;
        let g = parse_grid(&format!("{start}:{stop}:{step}")).unwrap();
        prop_assert_eq!(g.len(), steps + 1);
        prop_assert!((g[steps] - stop).abs() < 1e-9);
    }

    #[test]
    fn lattice_specs_round_trip(lu in 1usize..50, lv in 1usize..50, size in 1usize..20) {
        for spec in [LatticeSpec::Torus { lu, lv }, LatticeSpec::Triangular { size }] {
            prop_assert_eq!(spec.to_string().parse::<LatticeSpec>().unwrap(), spec);
        }
    }
}
