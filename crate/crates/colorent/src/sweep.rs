//! Parameter sweeps over temperature or K Sigma, producing one row per grid point.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::bipartition::RegionStats;
use crate::color::{ByColor, Color};
use crate::error::{Error, Result};
use crate::numerics::format_g;
use crate::spec::{LatticeSpec, RegionSpec, ResolvedRegion};
use crate::thermo::{entanglement_entropy, make_couplings, mutual_information, topological_entropy, Couplings, Limit};

pub const CSV_HEADER: &str = "T,k_r,k_b,k_g,S_A_nats,S_A_ln2,S_topo_nats,S_topo_ln2,I_AB_nats";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Grid {
    /// Temperatures.
    Temps(Vec<f64>),
    /// Values of K Sigma for the enclosed component of an annulus; requires uniform lambda.
    KSigma(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub lattice: LatticeSpec,
    pub region: RegionSpec,
    pub lambda: ByColor<f64>,
    pub grid: Grid,
    /// Colors with k forced to zero.
    pub hard: Vec<Color>,
    pub limit: Limit,
    pub with_mutual: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub k_r: f64,
    pub k_b: f64,
    pub k_g: f64,
    pub s_a_nats: f64,
    pub s_a_ln2: f64,
    pub s_topo_nats: Option<f64>,
    pub s_topo_ln2: Option<f64>,
    pub i_ab_nats: Option<f64>,
}

/// Flag B components holding more than half of all plaquettes as extensive.
pub fn mark_extensive(stats: &RegionStats) -> RegionStats {
    let mut s = stats.clone();
    let half = 3 * s.n_per_color / 2;
    for c in s.components.iter_mut().chain(s.a_components.iter_mut()) {
        c.extensive = c.sigma.total() > half;
    }
    s
}

fn inner_sigma(region: &ResolvedRegion) -> Result<f64> {
    let stats = match region {
        ResolvedRegion::LevinWen(r) => &r[0].stats,
        ResolvedRegion::Single { stats, .. } if stats.m_b == 2 => stats,
        _ => {
            return Err(Error::InvalidArgument(
                "K Sigma sweeps need an annulus or levinwen region".into(),
            ))
        }
    };
    let inner = stats.components.iter().map(|c| c.sigma.total()).min().unwrap_or(0);
    Ok(inner as f64 / 3.0)
}

fn couplings_at(cfg: &SweepConfig, x: f64, inner: f64) -> Result<Couplings> {
    let mut lambda = cfg.lambda;
    for &c in &cfg.hard {
        lambda[c] = f64::INFINITY;
    }
    match cfg.grid {
        Grid::Temps(_) => make_couplings(lambda, x),
        Grid::KSigma(_) => {
            let l = cfg.lambda[Color::Red];
            let k = x / inner;
            let t = if k == 0.0 { 0.0 } else { l / (-k).exp().atanh() };
            let mut ks = ByColor::splat(k);
            for &c in &cfg.hard {
                ks[c] = 0.0;
            }
            Ok(Couplings { temperature: t, lambda, k: ks })
        }
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let colex = cfg.lattice.build()?;
    let mut region = cfg.region.resolve(&colex)?;
    if cfg.limit == Limit::Thermodynamic {
        region = match region {
            ResolvedRegion::Single { bipartition, stats } => {
                ResolvedRegion::Single { bipartition, stats: mark_extensive(&stats) }
            }
            ResolvedRegion::LevinWen(mut r) => {
                for t in r.iter_mut() {
                    t.stats = mark_extensive(&t.stats);
                }
                ResolvedRegion::LevinWen(r)
            }
        };
    }
    let (points, inner) = match &cfg.grid {
        Grid::Temps(t) => (t, 0.0),
        Grid::KSigma(k) => {
            if cfg.lambda.0.iter().any(|&l| l != cfg.lambda[Color::Red]) {
                return Err(Error::InvalidArgument("K Sigma sweeps need uniform lambda".into()));
            }
            (k, inner_sigma(&region)?)
        }
    };
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let (_, stats) = region.primary();
    let whole = RegionStats::whole(stats.boundary_kind, stats.n_per_color);
    let swapped = stats.swapped();
    points
        .par_iter()
        .map(|&x| {
            let c = couplings_at(cfg, x, inner)?;
            let s_a = entanglement_entropy(stats, &c, cfg.limit)?.s_total;
            let s_topo = match &region {
                ResolvedRegion::LevinWen(r) => {
                    let four = [r[0].stats.clone(), r[1].stats.clone(), r[2].stats.clone(), r[3].stats.clone()];
                    Some(topological_entropy(&four, &c, cfg.limit)?.value)
                }
                _ => None,
            };
            let i_ab = if cfg.with_mutual {
                Some(mutual_information(stats, &swapped, &whole, &c, cfg.limit)?)
            } else {
                None
            };
            Ok(SweepRow {
                t: c.temperature,
                k_r: c.k[Color::Red],
                k_b: c.k[Color::Blue],
                k_g: c.k[Color::Green],
                s_a_nats: s_a,
                s_a_ln2: s_a / LN_2,
                s_topo_nats: s_topo,
                s_topo_ln2: s_topo.map(|s| s / LN_2),
                i_ab_nats: i_ab,
            })
        })
        .collect()
}

/// CSV with the fixed header, 12 significant digits and empty absent columns.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let f = |x: f64| format_g(x, 12);
    let o = |x: Option<f64>| x.map(f).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let cols = [
            f(r.t),
            f(r.k_r),
            f(r.k_b),
            f(r.k_g),
            f(r.s_a_nats),
            f(r.s_a_ln2),
            o(r.s_topo_nats),
            o(r.s_topo_ln2),
            o(r.i_ab_nats),
        ];
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_grid;

    fn cfg(region: &str, grid: Grid) -> SweepConfig {
        SweepConfig {
            lattice: "torus:3x3".parse().unwrap(),
            region: region.parse().unwrap(),
            lambda: ByColor::splat(1.0),
            grid,
            hard: vec![],
            limit: Limit::Exact,
            with_mutual: true,
        }
    }

    #[test]
    fn hexagon_rows() {
        let rows = run_sweep(&cfg("hexagon:0", Grid::Temps(parse_grid("0:2:0.5").unwrap()))).unwrap();
        assert_eq!(rows.len(), 5);
        assert!((rows[0].s_a_nats - 4.0 * LN_2).abs() < 1e-12);
        assert!(rows[0].s_topo_nats.is_none());
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 6);
        assert!(!csv.lines().nth(1).unwrap().ends_with(','));
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 9);
    }

    #[test]
    fn ksigma_needs_annulus() {
        assert!(run_sweep(&cfg("hexagon:0", Grid::KSigma(vec![0.5]))).is_err());
    }
}
