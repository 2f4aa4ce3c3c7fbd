//! Oracle-versus-closed-form verification over regions, couplings and temperatures.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::bipartition::{group_cardinalities, region_stats, Bipartition, RegionStats};
use crate::colex::{validate, Colex};
use crate::color::ByColor;
use crate::error::{Error, Result};
use crate::oracle::{
    brute_entropy_and_traces, enumerate_group, enumerate_local_subgroup, eta_weight, reduced_density_matrix,
    representations,
};
use crate::spec::LatticeSpec;
use crate::thermo::{entanglement_entropy, make_couplings, trace_rho_n, Limit};

pub const TOL_ENTROPY: f64 = 1e-8;
pub const TOL_RENYI_REL: f64 = 1e-10;
pub const TOL_TRACE: f64 = 1e-12;
pub const TOL_MIN_EIGENVALUE: f64 = 1e-12;

pub const CHECK_LATTICE: &str = "lattice validation";
pub const CHECK_ENTROPY: &str = "entropy";
pub const CHECK_RENYI2: &str = "renyi trace n=2";
pub const CHECK_RENYI3: &str = "renyi trace n=3";
pub const CHECK_TRACE: &str = "unit trace";
pub const CHECK_POSITIVITY: &str = "min eigenvalue";
pub const CHECK_CARDINALITY: &str = "subgroup cardinalities";
pub const CHECK_ETA: &str = "eta representation invariance";

/// Deliberate faults used to confirm the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fault {
    /// Off-by-one in the predicted log2 d_A.
    Cardinality,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub lattice: LatticeSpec,
    pub seed: u64,
    /// Temperatures per coupling set.
    pub grid: usize,
    /// Extra random regions on top of the standard ones.
    pub random_regions: usize,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn new(lattice: LatticeSpec) -> Self {
        VerifyConfig { lattice, seed: 1, grid: 50, random_regions: 2, fault: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Largest deviation seen (in the units of `tolerance`).
    pub worst: f64,
    pub tolerance: f64,
    /// Where the worst deviation occurred.
    pub detail: String,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub lattice: String,
    pub regions: Vec<String>,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lattice {}: {} regions", self.lattice, self.regions.len())?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<32} worst={:.3e} tol={:.1e} n={} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tolerance,
                c.samples,
                c.detail
            )?;
        }
        write!(f, "{}", if self.all_passed() { "verification passed" } else { "verification FAILED" })
    }
}

/// Running maximum of a deviation with the location it occurred.
#[derive(Clone, Debug)]
struct Worst {
    value: f64,
    at: String,
    samples: usize,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, at: String::new(), samples: 0 }
    }

    fn add(&mut self, v: f64, at: impl FnOnce() -> String) {
        self.samples += 1;
        if v > self.value || v.is_nan() {
            self.value = if v.is_nan() { f64::INFINITY } else { v };
            self.at = at();
        }
    }

    fn merge(mut self, o: Worst) -> Worst {
        self.samples += o.samples;
        if o.value > self.value {
            self.value = o.value;
            self.at = o.at;
        }
        self
    }

    fn outcome(self, name: &str, tolerance: f64) -> CheckOutcome {
        CheckOutcome {
            name: name.to_string(),
            passed: self.value <= tolerance,
            worst: self.value,
            tolerance,
            detail: self.at,
            samples: self.samples,
        }
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Uniform lambda in {0.5, 1, 2} and two non-uniform per-color assignments, each paired with
/// the reference scale its temperature grid is built on.
pub fn coupling_sets() -> Vec<(ByColor<f64>, f64)> {
    vec![
        (ByColor::splat(0.5), 0.5),
        (ByColor::splat(1.0), 1.0),
        (ByColor::splat(2.0), 2.0),
        (ByColor::from_rbg(0.5, 1.0, 2.0), 1.0),
        (ByColor::from_rbg(2.0, 0.5, 1.0), 1.0),
    ]
}

fn link_neighbors(colex: &Colex) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); colex.qubit_count()];
    for l in colex.links() {
        adj[l.a].push(l.b);
        adj[l.b].push(l.a);
    }
    adj
}

/// First `size` qubits reached by breadth-first search over links from `start`.
pub fn bfs_patch(colex: &Colex, start: usize, size: usize) -> Vec<usize> {
    let adj = link_neighbors(colex);
    let mut seen = vec![false; colex.qubit_count()];
    let mut out = Vec::new();
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(q) = queue.pop_front() {
        if out.len() == size {
            break;
        }
        out.push(q);
        for &n in &adj[q] {
            if !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    out
}

fn first_regular(colex: &Colex, candidates: impl Iterator<Item = Vec<usize>>) -> Option<Bipartition> {
    candidates
        .filter_map(|q| Bipartition::new(colex, q).ok())
        .find(|bp| region_stats(colex, bp).is_ok())
}

/// Named regions every verification covers: one plaquette, two adjacent plaquettes and a
/// connected qubit patch (8 qubits on the torus, 3 on open lattices).
pub fn standard_regions(colex: &Colex) -> Result<Vec<(String, Bipartition)>> {
    let p0 = &colex.plaquettes()[0];
    let mut out = vec![("hexagon".to_string(), Bipartition::new(colex, p0.support.clone())?)];
    let (u, v) = p0.coord;
    let pair = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
        .iter()
        .filter_map(|&(du, dv)| colex.plaquette_at(u + du, v + dv))
        .map(|p| {
            let mut q = p0.support.clone();
            q.extend_from_slice(&colex.plaquettes()[p].support);
            q
        });
    if let Some(bp) = first_regular(colex, pair) {
        out.push(("two adjacent hexagons".to_string(), bp));
    }
    let size = if colex.qubit_count() >= 16 { 8 } else { 3 };
    let patches = (0..colex.qubit_count()).map(|s| bfs_patch(colex, s, size));
    if let Some(bp) = first_regular(colex, patches) {
        out.push((format!("{size}-qubit patch"), bp));
    }
    Ok(out)
}

/// Seeded random connected regions inside the closed-form scope.
pub fn random_regions(colex: &Colex, seed: u64, count: usize) -> Vec<(String, Bipartition)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = colex.qubit_count();
    let mut out = Vec::new();
    for _ in 0..200 * count.max(1) {
        if out.len() >= count || n < 3 {
            break;
        }
        let size = rng.gen_range(1..n - 1);
        let start = rng.gen_range(0..n);
        let q = bfs_patch(colex, start, size);
        if let Some(bp) = first_regular(colex, std::iter::once(q.clone())) {
            out.push((format!("random patch {q:?}"), bp));
        }
    }
    out
}

struct PointResult {
    entropy: Worst,
    renyi2: Worst,
    renyi3: Worst,
    trace: Worst,
    positivity: Worst,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn compare_point(colex: &Colex, name: &str, bp: &Bipartition, stats: &RegionStats, lambda: ByColor<f64>, t: f64) -> Result<PointResult> {
    let c = make_couplings(lambda, t)?;
    let spec = brute_entropy_and_traces(&reduced_density_matrix(colex, bp, &c)?)?;
    let s = entanglement_entropy(stats, &c, Limit::Exact)?.s_total;
    let r2 = trace_rho_n(stats, &c, 2.0, Limit::Exact)?;
    let r3 = trace_rho_n(stats, &c, 3.0, Limit::Exact)?;
    let at = || format!("[{name}, lambda={:?}, T={t:.6}]", lambda.rbg());
    let mut out = PointResult {
        entropy: Worst::new(),
        renyi2: Worst::new(),
        renyi3: Worst::new(),
        trace: Worst::new(),
        positivity: Worst::new(),
    };
    out.entropy.add((s - spec.entropy).abs(), at);
    out.renyi2.add(rel(r2, spec.tr_rho2), at);
    out.renyi3.add(rel(r3, spec.tr_rho3), at);
    out.trace.add((spec.trace - 1.0).abs(), at);
    out.positivity.add((-spec.min_eigenvalue).max(0.0), at);
    Ok(out)
}

/// Compare oracle and closed forms on `regions` over the coupling sets and a temperature grid.
pub fn run_on_regions(
    colex: &Colex,
    label: &str,
    regions: &[(String, Bipartition)],
    grid: usize,
    fault: Option<Fault>,
) -> Result<VerifyReport> {
    if regions.is_empty() {
        return Err(Error::InvalidArgument("no regions to verify".into()));
    }
    let mut checks = Vec::new();
    let report = validate(colex);
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    checks.push(CheckOutcome {
        name: CHECK_LATTICE.into(),
        passed: failed.is_empty(),
        worst: failed.len() as f64,
        tolerance: 0.0,
        detail: failed.join("; "),
        samples: report.checks.len(),
    });

    let stats: Vec<RegionStats> = regions.iter().map(|(_, bp)| region_stats(colex, bp)).collect::<Result<_>>()?;

    let mut card = Worst::new();
    for ((name, bp), st) in regions.iter().zip(&stats) {
        let (g_a, g_b) = enumerate_local_subgroup(colex, bp)?;
        let mut pred = group_cardinalities(st);
        if fault == Some(Fault::Cardinality) {
            pred.log2_d_a += 1;
        }
        let dev = (g_a as f64 - 2f64.powi(pred.log2_d_a as i32)).abs()
            + (g_b as f64 - 2f64.powi(pred.log2_d_b as i32)).abs();
        card.add(dev, || format!("[{name}: |G_A|={g_a}, |G_B|={g_b}, predicted 2^{}, 2^{}]", pred.log2_d_a, pred.log2_d_b));
    }
    checks.push(card.outcome(CHECK_CARDINALITY, 0.0));

    let mut eta = Worst::new();
    let group = enumerate_group(colex)?;
    let n = colex.n_per_color();
    for (lambda, scale) in coupling_sets() {
        for t in [0.1 * scale, scale, 10.0 * scale] {
            let c = make_couplings(lambda, t)?;
            for h in &group {
                let e0 = eta_weight(h.counts, &c, n, colex.boundary_kind());
                let reps = match colex.boundary_kind() {
                    crate::colex::BoundaryKind::Torus => representations(h.counts, n).to_vec(),
                    crate::colex::BoundaryKind::PlanarTriangular => vec![h.counts],
                };
                for r in reps {
                    let e = eta_weight(r, &c, n, colex.boundary_kind());
                    eta.add(if e == e0 { 0.0 } else { (e - e0).abs().max(f64::MIN_POSITIVE) }, || {
                        format!("[counts {:?}, T={t}]", h.counts.rbg())
                    });
                }
            }
        }
    }
    checks.push(eta.outcome(CHECK_ETA, 0.0));

    let mut points = Vec::new();
    for (i, _) in regions.iter().enumerate() {
        for (lambda, scale) in coupling_sets() {
            for t in log_grid(0.02 * scale, 50.0 * scale, grid) {
                points.push((i, lambda, t));
            }
        }
    }
    let results: Vec<PointResult> = points
        .par_iter()
        .map(|&(i, lambda, t)| compare_point(colex, &regions[i].0, &regions[i].1, &stats[i], lambda, t))
        .collect::<Result<_>>()?;
    let merged = results.into_iter().fold(
        PointResult {
            entropy: Worst::new(),
            renyi2: Worst::new(),
            renyi3: Worst::new(),
            trace: Worst::new(),
            positivity: Worst::new(),
        },
        |a, b| PointResult {
            entropy: a.entropy.merge(b.entropy),
            renyi2: a.renyi2.merge(b.renyi2),
            renyi3: a.renyi3.merge(b.renyi3),
            trace: a.trace.merge(b.trace),
            positivity: a.positivity.merge(b.positivity),
        },
    );
    checks.push(merged.entropy.outcome(CHECK_ENTROPY, TOL_ENTROPY));
    checks.push(merged.renyi2.outcome(CHECK_RENYI2, TOL_RENYI_REL));
    checks.push(merged.renyi3.outcome(CHECK_RENYI3, TOL_RENYI_REL));
    checks.push(merged.trace.outcome(CHECK_TRACE, TOL_TRACE));
    checks.push(merged.positivity.outcome(CHECK_POSITIVITY, TOL_MIN_EIGENVALUE));

    Ok(VerifyReport { lattice: label.to_string(), regions: regions.iter().map(|r| r.0.clone()).collect(), checks })
}

/// Standard plus seeded random regions on the configured lattice.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.grid == 0 {
        return Err(Error::InvalidArgument("grid density must be >= 1".into()));
    }
    let colex = cfg.lattice.build()?;
    let mut regions = standard_regions(&colex)?;
    let mut names: BTreeMap<String, ()> = regions.iter().map(|r| (r.0.clone(), ())).collect();
    for r in random_regions(&colex, cfg.seed, cfg.random_regions) {
        if names.insert(r.0.clone(), ()).is_none() {
            regions.push(r);
        }
    }
    run_on_regions(&colex, &cfg.lattice.to_string(), &regions, cfg.grid, cfg.fault)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = log_grid(0.02, 50.0, 50);
        assert_eq!(g.len(), 50);
        assert!((g[0] - 0.02).abs() < 1e-15 && (g[49] - 50.0).abs() < 1e-12);
    }

    #[test]
    fn standard_regions_on_small_lattices() {
        let t = "torus:3x3".parse::<LatticeSpec>().unwrap().build().unwrap();
        let r = standard_regions(&t).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[2].1.a_len(), 8);
        let tri = "triangular:1".parse::<LatticeSpec>().unwrap().build().unwrap();
        assert!(!standard_regions(&tri).unwrap().is_empty());
    }

    #[test]
    fn fault_is_caught() {
        let mut cfg = VerifyConfig::new("triangular:1".parse().unwrap());
        cfg.grid = 3;
        cfg.fault = Some(Fault::Cardinality);
        let rep = run_verify(&cfg).unwrap();
        assert!(!rep.check(CHECK_CARDINALITY).unwrap().passed);
        assert!(!rep.all_passed());
    }
}
