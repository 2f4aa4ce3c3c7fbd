//! Brute-force ground truth: enumerate the stabilizer group, assemble the thermal reduced
//! density matrix and diagonalize it.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::bipartition::Bipartition;
use crate::colex::{BoundaryKind, Colex};
use crate::color::{ByColor, Color};
use crate::error::{Error, Result};
use crate::numerics::{log_sum_exp, scaled};
use crate::thermo::Couplings;

pub const MAX_GENERATORS: usize = 24;
pub const MAX_QUBITS: usize = 64;
pub const MAX_RDM_DIM: usize = 1 << 14;

/// One element of G, stored as a canonical set of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupElement {
    /// Bit i set iff canonical generator i is in the product.
    pub plaquette_set: u32,
    /// Bit q set iff qubit q is flipped.
    pub qubit_flips: u64,
    /// Number of generators of each color in the canonical product.
    pub counts: ByColor<u64>,
}

/// Generator plaquettes: all plaquettes, minus the highest-id blue and red ones on the torus.
pub fn canonical_generators(colex: &Colex) -> Vec<usize> {
    let ps = colex.plaquettes();
    let mut drop = Vec::new();
    if colex.boundary_kind() == BoundaryKind::Torus {
        for c in [Color::Blue, Color::Red] {
            drop.extend(ps.iter().rev().find(|p| p.color == c).map(|p| p.id));
        }
    }
    ps.iter().map(|p| p.id).filter(|id| !drop.contains(id)).collect()
}

fn support_mask(colex: &Colex, id: usize) -> u64 {
    colex.plaquettes()[id].support.iter().fold(0u64, |m, &q| m | (1u64 << q))
}

fn check_guards(colex: &Colex, generators: usize) -> Result<()> {
    if generators > MAX_GENERATORS {
        return Err(Error::ResourceGuard(format!(
            "{generators} generators exceed the oracle limit of {MAX_GENERATORS}"
        )));
    }
    if colex.qubit_count() > MAX_QUBITS {
        return Err(Error::ResourceGuard(format!(
            "{} qubits exceed the oracle limit of {MAX_QUBITS}",
            colex.qubit_count()
        )));
    }
    Ok(())
}

/// All elements of G, one per canonical generator subset.
pub fn enumerate_group(colex: &Colex) -> Result<Vec<GroupElement>> {
    let gens = canonical_generators(colex);
    check_guards(colex, gens.len())?;
    let masks: Vec<u64> = gens.iter().map(|&id| support_mask(colex, id)).collect();
    let colors: Vec<Color> = gens.iter().map(|&id| colex.plaquettes()[id].color).collect();
    Ok((0..1u32 << gens.len())
        .map(|set| {
            let mut flips = 0u64;
            let mut counts = ByColor::splat(0u64);
            for (i, (&m, &c)) in masks.iter().zip(&colors).enumerate() {
                if set >> i & 1 == 1 {
                    flips ^= m;
                    counts[c] += 1;
                }
            }
            GroupElement { plaquette_set: set, qubit_flips: flips, counts }
        })
        .collect())
}

/// The four plaquette-count representations of the same torus element.
pub fn representations(counts: ByColor<u64>, n: u64) -> [ByColor<u64>; 4] {
    let mut out = [counts; 4];
    for (rep, keep) in out[1..].iter_mut().zip(Color::ALL) {
        for c in keep.others() {
            rep[c] = n - counts[c];
        }
    }
    out
}

/// Thermal weight eta_T of an element with plaquette counts `counts`.
///
/// On the torus this is the ratio of the exponential sums over the four representations of
/// the element and of the identity; on open lattices it is e^{-sum k_c n_c}.
pub fn eta_weight(counts: ByColor<u64>, couplings: &Couplings, n: u64, kind: BoundaryKind) -> f64 {
    let expo = |c: ByColor<u64>| -Color::ALL.iter().map(|&x| scaled(couplings.k[x], c[x] as f64)).sum::<f64>();
    match kind {
        BoundaryKind::PlanarTriangular => expo(counts).exp(),
        BoundaryKind::Torus => {
            let sorted = |c: ByColor<u64>| {
                let mut e = representations(c, n).map(expo);
                e.sort_by(f64::total_cmp);
                log_sum_exp(&e)
            };
            (sorted(counts) - sorted(ByColor::splat(0))).exp()
        }
    }
}

/// Reduced density matrix of A on the basis of distinct restrictions h_A, h in G.
#[derive(Clone, Debug)]
pub struct ReducedDensityMatrix {
    pub matrix: DMatrix<f64>,
    /// Qubit-flip masks (restricted to A) labeling the basis states.
    pub basis: Vec<u64>,
}

fn side_masks(colex: &Colex, bp: &Bipartition) -> (u64, u64) {
    let a = bp.a_qubits().iter().fold(0u64, |m, &q| m | 1 << q);
    let all = if colex.qubit_count() == 64 { u64::MAX } else { (1u64 << colex.qubit_count()) - 1 };
    (a, all & !a)
}

pub fn reduced_density_matrix(colex: &Colex, bp: &Bipartition, couplings: &Couplings) -> Result<ReducedDensityMatrix> {
    let group = enumerate_group(colex)?;
    let (mask_a, mask_b) = side_masks(colex, bp);
    let mut basis: Vec<u64> = group.iter().map(|h| h.qubit_flips & mask_a).collect();
    basis.sort_unstable();
    basis.dedup();
    if basis.len() > MAX_RDM_DIM {
        return Err(Error::ResourceGuard(format!(
            "reduced density matrix dimension {} exceeds {MAX_RDM_DIM}",
            basis.len()
        )));
    }
    let index: HashMap<u64, usize> = basis.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = colex.n_per_color();
    let kind = colex.boundary_kind();
    let local: Vec<(u64, f64)> = group
        .iter()
        .filter(|h| h.qubit_flips & mask_b == 0)
        .map(|h| (h.qubit_flips, eta_weight(h.counts, couplings, n, kind)))
        .collect();
    let dim = basis.len();
    let norm = 1.0 / group.len() as f64;
    let matrix = group
        .par_iter()
        .fold(
            || DMatrix::<f64>::zeros(dim, dim),
            |mut m, h| {
                let x = h.qubit_flips & mask_a;
                let i = index[&x];
                for &(g, eta) in &local {
                    m[(i, index[&(x ^ g)])] += eta * norm;
                }
                m
            },
        )
        .reduce(|| DMatrix::<f64>::zeros(dim, dim), |a, b| a + b);
    Ok(ReducedDensityMatrix { matrix, basis })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSummary {
    pub entropy: f64,
    pub trace: f64,
    pub tr_rho2: f64,
    pub tr_rho3: f64,
    pub min_eigenvalue: f64,
}

/// Von Neumann entropy (eigenvalues clipped at zero) and Renyi traces by matrix products.
pub fn brute_entropy_and_traces(rdm: &ReducedDensityMatrix) -> Result<SpectralSummary> {
    let m = &rdm.matrix;
    let asym = (m - m.transpose()).amax();
    if asym > 1e-12 {
        return Err(Error::InvalidArgument(format!("density matrix is not symmetric (max deviation {asym:e})")));
    }
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    let entropy = -eig.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln()).sum::<f64>();
    let m2 = m * m;
    let tr_rho2 = m2.trace();
    let tr_rho3 = (&m2 * m).trace();
    Ok(SpectralSummary {
        entropy,
        trace: m.trace(),
        tr_rho2,
        tr_rho3,
        min_eigenvalue: eig.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// (|G_A|, |G_B|): elements acting trivially on B, respectively on A.
pub fn enumerate_local_subgroup(colex: &Colex, bp: &Bipartition) -> Result<(u64, u64)> {
    let group = enumerate_group(colex)?;
    let (mask_a, mask_b) = side_masks(colex, bp);
    let g_a = group.iter().filter(|h| h.qubit_flips & mask_b == 0).count() as u64;
    let g_b = group.iter().filter(|h| h.qubit_flips & mask_a == 0).count() as u64;
    Ok((g_a, g_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{build_torus_colex, build_triangular_colex};
    use crate::thermo::make_couplings;
    use std::collections::HashSet;

    #[test]
    fn group_orders() {
        let t = build_torus_colex(3, 3).unwrap();
        let g = enumerate_group(&t).unwrap();
        assert_eq!(g.len(), 128);
        assert_eq!(g.iter().map(|h| h.qubit_flips).collect::<HashSet<_>>().len(), 128);
        let tri = build_triangular_colex(1).unwrap();
        assert_eq!(enumerate_group(&tri).unwrap().len(), 8);
        assert!(enumerate_group(&build_torus_colex(6, 6).unwrap()).is_err());
    }

    #[test]
    fn green_product_equals_blue_product() {
        let t = build_torus_colex(3, 3).unwrap();
        let prod = |c: Color| {
            t.plaquettes().iter().filter(|p| p.color == c).fold(0u64, |m, p| m ^ support_mask(&t, p.id))
        };
        assert_eq!(prod(Color::Green), prod(Color::Blue));
        assert_eq!(prod(Color::Green), prod(Color::Red));
    }

    #[test]
    fn eta_examples() {
        let zero = make_couplings(ByColor::splat(1.0), 0.0).unwrap();
        let warm = make_couplings(ByColor::from_rbg(0.5, 1.0, 2.0), 0.9).unwrap();
        let hot = make_couplings(ByColor::splat(1.0), f64::INFINITY).unwrap();
        let c = ByColor::from_rbg(1, 2, 0);
        assert_eq!(eta_weight(c, &zero, 3, BoundaryKind::Torus), 1.0);
        assert_eq!(eta_weight(ByColor::splat(0), &warm, 3, BoundaryKind::Torus), 1.0);
        assert_eq!(eta_weight(c, &hot, 3, BoundaryKind::Torus), 0.0);
        let e = eta_weight(c, &warm, 3, BoundaryKind::Torus);
        for rep in representations(c, 3) {
            assert_eq!(eta_weight(rep, &warm, 3, BoundaryKind::Torus), e);
        }
        let planar = eta_weight(c, &warm, 3, BoundaryKind::PlanarTriangular);
        assert!((planar - (-warm.k[Color::Red] - 2.0 * warm.k[Color::Blue]).exp()).abs() < 1e-15);
    }

    #[test]
    fn hexagon_zero_temperature() {
        let t = build_torus_colex(3, 3).unwrap();
        let bp = Bipartition::new(&t, t.plaquettes()[0].support.clone()).unwrap();
        assert_eq!(enumerate_local_subgroup(&t, &bp).unwrap(), (2, 4));
        let c = make_couplings(ByColor::splat(1.0), 0.0).unwrap();
        let s = brute_entropy_and_traces(&reduced_density_matrix(&t, &bp, &c).unwrap()).unwrap();
        assert!((s.trace - 1.0).abs() < 1e-12);
        assert!((s.tr_rho2 - 1.0 / 16.0).abs() < 1e-12);
        assert!((s.entropy - 4.0 * std::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn whole_system_pure_at_zero_temperature() {
        let t = build_triangular_colex(1).unwrap();
        let c = make_couplings(ByColor::splat(1.0), 0.0).unwrap();
        let s = brute_entropy_and_traces(&reduced_density_matrix(&t, &Bipartition::whole(&t), &c).unwrap()).unwrap();
        assert!(s.entropy.abs() < 1e-10);
        assert!((s.tr_rho2 - 1.0).abs() < 1e-12);
    }
}
