//! Bipartitions, their counting statistics, collective strings and subgroup cardinalities.

use serde::Serialize;

use crate::color::{ByColor, Color};
use crate::colex::{BoundaryKind, Colex, Dims};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVec};

/// A/B split of the qubits; B is the complement of A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    in_a: Vec<bool>,
}

impl Bipartition {
    pub fn new(colex: &Colex, a_qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = colex.qubit_count();
        let mut in_a = vec![false; n];
        for q in a_qubits {
            if q >= n {
                return Err(Error::QubitOutOfRange { id: q, count: n });
            }
            in_a[q] = true;
        }
        let bp = Bipartition { in_a };
        match bp.a_len() {
            0 => Err(Error::EmptyA),
            k if k == n => Err(Error::EmptyB),
            _ => Ok(bp),
        }
    }

    /// The whole system as A with an empty B (used for the total entropy).
    pub fn whole(colex: &Colex) -> Self {
        Bipartition { in_a: vec![true; colex.qubit_count()] }
    }

    pub fn complement(&self) -> Result<Self> {
        let in_a: Vec<bool> = self.in_a.iter().map(|&x| !x).collect();
        if in_a.iter().all(|&x| !x) {
            return Err(Error::EmptyA);
        }
        Ok(Bipartition { in_a })
    }

    pub fn contains(&self, q: usize) -> bool {
        self.in_a[q]
    }

    pub fn a_len(&self) -> usize {
        self.in_a.iter().filter(|&&x| x).count()
    }

    pub fn is_whole(&self) -> bool {
        self.in_a.iter().all(|&x| x)
    }

    pub fn a_qubits(&self) -> Vec<usize> {
        (0..self.in_a.len()).filter(|&q| self.in_a[q]).collect()
    }

    pub fn b_qubits(&self) -> Vec<usize> {
        (0..self.in_a.len()).filter(|&q| !self.in_a[q]).collect()
    }

    fn mask(&self, side_a: bool) -> BitVec {
        let n = self.in_a.len();
        BitVec::from_indices(n, (0..n).filter(|&q| self.in_a[q] == side_a))
    }
}

/// Counting data of one connected component of B (or of A, for the B-side group).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentStats {
    /// Plaquettes of the component plus its boundary, per color.
    pub sigma: ByColor<u64>,
    /// Number of independent collective strings it generates (2 when enclosed).
    pub rank: u8,
    /// Which colored strings have their support on the other side.
    pub strings_valid: ByColor<bool>,
    /// Treated as infinitely large in thermodynamic-limit evaluations.
    pub extensive: bool,
}

impl ComponentStats {
    /// An enclosed component with the given per-color counts.
    pub fn enclosed(sigma: ByColor<u64>) -> Self {
        ComponentStats { sigma, rank: 2, strings_valid: ByColor::splat(true), extensive: false }
    }

    pub fn extensive(mut self) -> Self {
        self.extensive = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionStats {
    pub boundary_kind: BoundaryKind,
    /// N: plaquettes per color in the whole lattice.
    pub n_per_color: u64,
    pub sigma_a: ByColor<u64>,
    pub sigma_b: ByColor<u64>,
    pub sigma_ab: ByColor<u64>,
    pub m_a: usize,
    pub m_b: usize,
    /// Components of B.
    pub components: Vec<ComponentStats>,
    /// Components of A.
    pub a_components: Vec<ComponentStats>,
}

impl RegionStats {
    /// Whole-system pseudo-bipartition: every plaquette in A, B empty.
    pub fn whole(boundary_kind: BoundaryKind, n_per_color: u64) -> Self {
        RegionStats {
            boundary_kind,
            n_per_color,
            sigma_a: ByColor::splat(n_per_color),
            sigma_b: ByColor::splat(0),
            sigma_ab: ByColor::splat(0),
            m_a: 1,
            m_b: 0,
            components: Vec::new(),
            a_components: Vec::new(),
        }
    }

    /// Statistics of the complementary bipartition.
    pub fn swapped(&self) -> Self {
        RegionStats {
            sigma_a: self.sigma_b,
            sigma_b: self.sigma_a,
            m_a: self.m_b,
            m_b: self.m_a,
            components: self.a_components.clone(),
            a_components: self.components.clone(),
            ..self.clone()
        }
    }

    pub fn sigma_ab_total(&self) -> u64 {
        self.sigma_ab.total()
    }

    pub fn is_whole(&self) -> bool {
        self.m_b == 0
    }

    /// Per-color bookkeeping identities the closed forms rely on.
    pub fn check_consistency(&self) -> Result<()> {
        let n = self.n_per_color;
        if self.m_a == 0 {
            return Err(Error::InconsistentStats("m_A = 0".into()));
        }
        if self.m_b != self.components.len() {
            return Err(Error::InconsistentStats(format!(
                "m_B = {} but {} B components",
                self.m_b,
                self.components.len()
            )));
        }
        if !self.is_whole() && self.m_a != self.a_components.len() {
            return Err(Error::InconsistentStats(format!(
                "m_A = {} but {} A components",
                self.m_a,
                self.a_components.len()
            )));
        }
        for c in Color::ALL {
            let total = self.sigma_a[c] + self.sigma_b[c] + self.sigma_ab[c];
            if total != n {
                return Err(Error::InconsistentStats(format!(
                    "{c}: sigma_A + sigma_B + sigma_AB = {total}, expected N = {n}"
                )));
            }
            if !self.is_whole() && self.boundary_kind == BoundaryKind::Torus {
                let comp: u64 = self.components.iter().map(|k| k.sigma[c]).sum();
                if self.sigma_a[c] + comp != n {
                    return Err(Error::InconsistentStats(format!(
                        "{c}: sigma_A + sum_i sigma_i = {}, expected N = {n}",
                        self.sigma_a[c] + comp
                    )));
                }
            }
        }
        if self.boundary_kind == BoundaryKind::Torus
            && self.components.iter().chain(&self.a_components).any(|k| k.rank != 2)
        {
            return Err(Error::InconsistentStats("torus components must be enclosed".into()));
        }
        Ok(())
    }
}

/// log2 of |G|, d_A = |G_A| and d_B = |G_B|.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cardinalities {
    pub log2_g: u64,
    pub log2_d_a: u64,
    pub log2_d_b: u64,
}

impl Cardinalities {
    /// ln(d_A d_B / |G|).
    pub fn ln_ratio(&self) -> f64 {
        (self.log2_d_a as f64 + self.log2_d_b as f64 - self.log2_g as f64) * std::f64::consts::LN_2
    }
}

pub fn group_cardinalities(stats: &RegionStats) -> Cardinalities {
    let total = 3 * stats.n_per_color;
    let ranks = |v: &[ComponentStats]| v.iter().map(|k| k.rank as u64).sum::<u64>();
    let log2_g = match stats.boundary_kind {
        BoundaryKind::Torus => total - 2,
        BoundaryKind::PlanarTriangular => total,
    };
    if stats.is_whole() {
        return Cardinalities { log2_g, log2_d_a: log2_g, log2_d_b: 0 };
    }
    let (log2_d_a, log2_d_b) = match stats.boundary_kind {
        BoundaryKind::Torus => (
            stats.sigma_a.total() + 2 * stats.m_b as u64 - 2,
            stats.sigma_b.total() + 2 * stats.m_a as u64 - 2,
        ),
        BoundaryKind::PlanarTriangular => (
            stats.sigma_a.total() + ranks(&stats.components),
            stats.sigma_b.total() + ranks(&stats.a_components),
        ),
    };
    Cardinalities { log2_g, log2_d_a, log2_d_b }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A connected component of one side, with the plaquettes touching it.
#[derive(Clone, Debug)]
pub struct Component {
    pub qubits: Vec<usize>,
    pub plaquettes: Vec<usize>,
    pub strings_valid: ByColor<bool>,
}

impl Component {
    pub fn rank(&self) -> u8 {
        match self.strings_valid.0.iter().filter(|&&v| v).count() {
            3 => 2,
            1 => 1,
            _ => 0,
        }
    }
}

/// Components of the side `side_a` (true: A), connected through shared plaquettes.
pub fn side_components(colex: &Colex, bp: &Bipartition, side_a: bool) -> Vec<Component> {
    let n = colex.qubit_count();
    let mut uf = UnionFind::new(n);
    for p in colex.plaquettes() {
        let mut first = None;
        for &q in p.support.iter().filter(|&&q| bp.contains(q) == side_a) {
            match first {
                None => first = Some(q),
                Some(f) => uf.union(f, q),
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for q in (0..n).filter(|&q| bp.contains(q) == side_a) {
        groups.entry(uf.find(q)).or_default().push(q);
    }
    let other = bp.mask(!side_a);
    groups
        .into_values()
        .map(|qubits| {
            let mut plaquettes: Vec<usize> =
                qubits.iter().flat_map(|&q| colex.plaquettes_of(q).iter().copied()).collect();
            plaquettes.sort_unstable();
            plaquettes.dedup();
            let mut strings_valid = ByColor::splat(false);
            for c in Color::ALL {
                let mut acc = BitVec::zeros(n);
                for &p in plaquettes.iter().filter(|&&p| colex.plaquettes()[p].color != c) {
                    acc.xor_assign(&colex.support_bits(p));
                }
                // the string must live entirely on the other side
                strings_valid[c] = acc.and(&other) == acc;
            }
            Component { qubits, plaquettes, strings_valid }
        })
        .collect()
}

fn link_component_count(colex: &Colex, bp: &Bipartition, side_a: bool) -> usize {
    let n = colex.qubit_count();
    let mut uf = UnionFind::new(n);
    for l in colex.links() {
        if bp.contains(l.a) == side_a && bp.contains(l.b) == side_a {
            uf.union(l.a, l.b);
        }
    }
    let mut roots: Vec<usize> =
        (0..n).filter(|&q| bp.contains(q) == side_a).map(|q| uf.find(q)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// log2 of the number of stabilizer elements acting trivially on the `other` side.
fn log2_trivial_on(colex: &Colex, bp: &Bipartition, other_side_a: bool) -> u64 {
    let other = bp.mask(other_side_a);
    let full = colex.stabilizer_rank();
    let restricted = gf2::rank((0..colex.plaquettes().len()).map(|p| colex.support_bits(p).and(&other)));
    (full - restricted) as u64
}

fn to_stats(colex: &Colex, comps: &[Component]) -> Vec<ComponentStats> {
    comps
        .iter()
        .map(|k| {
            let mut sigma = ByColor::splat(0u64);
            for &p in &k.plaquettes {
                sigma[colex.plaquettes()[p].color] += 1;
            }
            ComponentStats { sigma, rank: k.rank(), strings_valid: k.strings_valid, extensive: false }
        })
        .collect()
}

/// Exact counting statistics of a bipartition.
///
/// Regions whose structure the closed forms do not cover are rejected: components
/// that are plaquette-connected but not link-connected, components without a full
/// set of strings on the torus, and any mismatch between the subgroup sizes predicted
/// by the counts and those found by GF(2) elimination.
pub fn region_stats(colex: &Colex, bp: &Bipartition) -> Result<RegionStats> {
    let kind = colex.boundary_kind();
    let n = colex.n_per_color();
    if bp.is_whole() {
        return Ok(RegionStats::whole(kind, n));
    }
    let mut sigma_a = ByColor::splat(0u64);
    let mut sigma_b = ByColor::splat(0u64);
    let mut sigma_ab = ByColor::splat(0u64);
    for p in colex.plaquettes() {
        let in_a = p.support.iter().filter(|&&q| bp.contains(q)).count();
        let slot = if in_a == p.support.len() {
            &mut sigma_a
        } else if in_a == 0 {
            &mut sigma_b
        } else {
            &mut sigma_ab
        };
        slot[p.color] += 1;
    }
    let b_comps = side_components(colex, bp, false);
    let a_comps = side_components(colex, bp, true);
    let stats = RegionStats {
        boundary_kind: kind,
        n_per_color: n,
        sigma_a,
        sigma_b,
        sigma_ab,
        m_a: a_comps.len(),
        m_b: b_comps.len(),
        components: to_stats(colex, &b_comps),
        a_components: to_stats(colex, &a_comps),
    };

    for (side_a, comps, name) in [(true, &a_comps, "A"), (false, &b_comps, "B")] {
        let links = link_component_count(colex, bp, side_a);
        if links != comps.len() {
            return Err(Error::IrregularRegion(format!(
                "{name} has {} plaquette-connected but {links} link-connected components",
                comps.len()
            )));
        }
        if kind == BoundaryKind::Torus && comps.iter().any(|k| k.rank() != 2) {
            return Err(Error::IrregularRegion(format!(
                "a component of {name} does not carry two independent strings"
            )));
        }
    }
    stats.check_consistency()?;
    let card = group_cardinalities(&stats);
    let d_a = log2_trivial_on(colex, bp, false);
    let d_b = log2_trivial_on(colex, bp, true);
    if d_a != card.log2_d_a || d_b != card.log2_d_b {
        return Err(Error::IrregularRegion(format!(
            "subgroup sizes 2^{d_a}, 2^{d_b} differ from counted 2^{}, 2^{}",
            card.log2_d_a, card.log2_d_b
        )));
    }
    Ok(stats)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollectiveString {
    pub color: Color,
    pub component: usize,
    pub plaquette_factors: Vec<usize>,
    /// Qubits on which the product acts (mod-2 support).
    pub support: Vec<usize>,
}

/// The three colored strings around every enclosed component of B.
pub fn collective_strings(colex: &Colex, bp: &Bipartition) -> Vec<CollectiveString> {
    let comps = side_components(colex, bp, false);
    let mut out = Vec::new();
    for (i, k) in comps.iter().enumerate().filter(|(_, k)| k.rank() == 2) {
        for c in Color::ALL {
            let plaquette_factors: Vec<usize> = k
                .plaquettes
                .iter()
                .copied()
                .filter(|&p| colex.plaquettes()[p].color != c)
                .collect();
            let mut acc = BitVec::zeros(colex.qubit_count());
            for &p in &plaquette_factors {
                acc.xor_assign(&colex.support_bits(p));
            }
            out.push(CollectiveString { color: c, component: i, plaquette_factors, support: acc.ones().collect() });
        }
    }
    out
}

/// One of the four regions of the topological-entropy construction.
#[derive(Clone, Debug)]
pub struct TopoRegion {
    pub bipartition: Bipartition,
    pub stats: RegionStats,
}

fn ring_offsets(d: i64) -> impl Iterator<Item = (i64, i64)> {
    (-d..=d).flat_map(move |du| (-d..=d).map(move |dv| (du, dv))).filter(move |&(du, dv)| {
        (du.abs() + dv.abs() + (du + dv).abs()) / 2 == d
    })
}

/// Largest d such that every hex within distance d of `center` is a real plaquette.
fn clearance(colex: &Colex, center: usize, cap: i64) -> i64 {
    let (u, v) = colex.plaquettes()[center].coord;
    for d in 1..=cap {
        if ring_offsets(d).any(|(du, dv)| colex.plaquette_at(u + du, v + dv).is_none()) {
            return d - 1;
        }
    }
    cap
}

/// Hex rings `r+1..=R` around a center plaquette, cut by zero, one or two radial strips.
///
/// Region 1 is the full annulus (B = inner disk + outside), regions 2 and 3 are
/// the annulus cut by one strip (B connected through it), region 4 is cut by both
/// strips (A = two arcs).
pub fn canonical_topo_bipartitions(colex: &Colex, outer: usize, inner: usize) -> Result<[TopoRegion; 4]> {
    if inner < 1 || outer <= inner {
        return Err(Error::InvalidArgument(format!("need R > r >= 1, got R={outer}, r={inner}")));
    }
    let (big_r, small_r) = (outer as i64, inner as i64);
    let center = match colex.dims() {
        Dims::Torus { lu, lv } => {
            let need = 2 * outer + 4;
            if lu.min(lv) < need {
                return Err(Error::LatticeTooSmall(format!(
                    "torus {lu}x{lv} needs both sides >= {need} for R={outer}"
                )));
            }
            0
        }
        Dims::Triangular { size } => {
            let need = big_r + 1;
            let best = (0..colex.plaquettes().len())
                .map(|p| (clearance(colex, p, need), std::cmp::Reverse(p)))
                .max()
                .map(|(c, std::cmp::Reverse(p))| (c, p))
                .unwrap();
            if best.0 < need {
                return Err(Error::LatticeTooSmall(format!(
                    "triangular size {size} has no plaquette with {need} clear rings (R={outer})"
                )));
            }
            best.1
        }
    };

    let in_strip_u = |du: i64, dv: i64| (dv == 0 || dv == -1) && du >= 1;
    let in_strip_d = |du: i64, dv: i64| (dv == 0 || dv == 1) && du <= -1;
    let annulus: Vec<(usize, i64, i64)> = (0..colex.plaquettes().len())
        .filter_map(|p| {
            let d = colex.hex_distance(center, p);
            if d > small_r && d <= big_r {
                let (du, dv) = colex.displacement(center, p);
                Some((p, du, dv))
            } else {
                None
            }
        })
        .collect();

    let build = |cut_u: bool, cut_d: bool| -> Result<TopoRegion> {
        let mut qubits = Vec::new();
        for &(p, du, dv) in &annulus {
            if (cut_u && in_strip_u(du, dv)) || (cut_d && in_strip_d(du, dv)) {
                continue;
            }
            qubits.extend_from_slice(&colex.plaquettes()[p].support);
        }
        let bipartition = Bipartition::new(colex, qubits)?;
        let stats = region_stats(colex, &bipartition)?;
        Ok(TopoRegion { bipartition, stats })
    };
    let regions = [build(false, false)?, build(true, false)?, build(false, true)?, build(true, true)?];

    let expected = [(1, 2), (1, 1), (1, 1), (2, 1)];
    for (i, (reg, &(ma, mb))) in regions.iter().zip(&expected).enumerate() {
        if reg.stats.m_a != ma || reg.stats.m_b != mb {
            return Err(Error::LatticeTooSmall(format!(
                "region {} has m_A={}, m_B={} (expected {ma}, {mb})",
                i + 1,
                reg.stats.m_a,
                reg.stats.m_b
            )));
        }
    }
    check_topo_sum_rules(&[&regions[0].stats, &regions[1].stats, &regions[2].stats, &regions[3].stats])?;
    Ok(regions)
}

/// Per-color sum rules sigma_1 + sigma_4 = sigma_2 + sigma_3 for A-only and boundary counts.
pub fn check_topo_sum_rules(s: &[&RegionStats; 4]) -> Result<()> {
    for c in Color::ALL {
        for (name, f) in [
            ("sigma_A", (|r: &RegionStats, c| r.sigma_a[c]) as fn(&RegionStats, Color) -> u64),
            ("sigma_AB", |r: &RegionStats, c| r.sigma_ab[c]),
        ] {
            let lhs = f(s[0], c) + f(s[3], c);
            let rhs = f(s[1], c) + f(s[2], c);
            if lhs != rhs {
                return Err(Error::InconsistentStats(format!(
                    "{name} sum rule fails for {c}: {lhs} != {rhs}"
                )));
            }
        }
    }
    if s.iter().any(|r| r.n_per_color != s[0].n_per_color || r.boundary_kind != s[0].boundary_kind) {
        return Err(Error::InconsistentStats("regions come from different lattices".into()));
    }
    Ok(())
}

/// Per-color counts defining the four annulus regions on a torus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnnulusCounts {
    /// Plaquettes of the enclosed disk component, including its boundary ring.
    pub inner: ByColor<u64>,
    /// A-only plaquettes of the full annulus.
    pub annulus: ByColor<u64>,
    /// Boundary plaquettes of the full annulus.
    pub boundary: ByColor<u64>,
    /// A-only plaquettes removed by one radial cut.
    pub cut_a: ByColor<u64>,
    /// Boundary plaquettes added by one radial cut.
    pub cut_ab: ByColor<u64>,
}

impl AnnulusCounts {
    /// A disk of `inner` plaquettes per color inside an annulus of `2 inner + 12` A-only and
    /// `inner + 6` boundary plaquettes; each cut removes two A-only plaquettes per color and
    /// adds one boundary plaquette.
    pub fn around(inner: ByColor<u64>) -> Self {
        AnnulusCounts {
            inner,
            annulus: inner.map(|s| 2 * s + 12),
            boundary: inner.map(|s| s + 6),
            cut_a: ByColor::splat(2),
            cut_ab: ByColor::splat(1),
        }
    }

    /// Smallest N per color that holds the construction.
    pub fn min_n(&self) -> u64 {
        Color::ALL
            .iter()
            .map(|&c| self.annulus[c] + self.boundary[c] + self.inner[c] + 2 * self.cut_ab[c] + 2)
            .max()
            .unwrap_or(0)
    }
}

/// Statistics of the four annulus regions on a large torus, built from counts alone.
///
/// Outer B components are flagged extensive.
pub fn annulus_stats(n_per_color: u64, counts: &AnnulusCounts) -> Result<[RegionStats; 4]> {
    let k = counts;
    let bad = Color::ALL.iter().any(|&c| {
        k.inner[c] == 0 || k.annulus[c] < 2 * k.cut_a[c] + 2 || k.cut_a[c] == 0 || k.boundary[c] == 0
    });
    if bad || n_per_color < k.min_n() {
        return Err(Error::InconsistentStats(format!(
            "annulus counts {k:?} do not fit N = {n_per_color} (need N >= {})",
            k.min_n()
        )));
    }
    let n = n_per_color;
    let region = |cuts: u64, m_a: usize, inner_b: bool| {
        let sigma_a = ByColor([0, 1, 2].map(|i| k.annulus.0[i] - cuts * k.cut_a.0[i]));
        let sigma_ab = ByColor([0, 1, 2].map(|i| k.boundary.0[i] + cuts * k.cut_ab.0[i]));
        let mut sigma_b = ByColor::splat(0);
        let mut outer = ByColor::splat(0);
        for c in Color::ALL {
            sigma_b[c] = n - sigma_a[c] - sigma_ab[c];
            outer[c] = n - sigma_a[c] - if inner_b { k.inner[c] } else { 0 };
        }
        let mut components = Vec::new();
        if inner_b {
            components.push(ComponentStats::enclosed(k.inner));
        }
        components.push(ComponentStats::enclosed(outer).extensive());
        // A components split the annulus and its boundary; the first takes the remainder.
        let a_components = (0..m_a as u64)
            .map(|i| {
                let mut sigma = ByColor::splat(0);
                for c in Color::ALL {
                    let total = sigma_a[c] + sigma_ab[c];
                    sigma[c] = total / m_a as u64 + if i == 0 { total % m_a as u64 } else { 0 };
                }
                ComponentStats::enclosed(sigma)
            })
            .collect();
        RegionStats {
            boundary_kind: BoundaryKind::Torus,
            n_per_color: n,
            sigma_a,
            sigma_b,
            sigma_ab,
            m_a,
            m_b: components.len(),
            components,
            a_components,
        }
    };
    let out = [region(0, 1, true), region(1, 1, false), region(1, 1, false), region(2, 2, false)];
    for r in &out {
        r.check_consistency()?;
    }
    check_topo_sum_rules(&[&out[0], &out[1], &out[2], &out[3]])?;
    Ok(out)
}

/// [`annulus_stats`] with [`AnnulusCounts::around`] an enclosed disk of `inner` plaquettes.
pub fn synthetic_annulus_stats(n_per_color: u64, inner: ByColor<u64>) -> Result<[RegionStats; 4]> {
    annulus_stats(n_per_color, &AnnulusCounts::around(inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{build_torus_colex, build_triangular_colex};

    #[test]
    fn hexagon_region_on_small_torus() {
        let c = build_torus_colex(3, 3).unwrap();
        let bp = Bipartition::new(&c, c.plaquette_support(0).unwrap().to_vec()).unwrap();
        let s = region_stats(&c, &bp).unwrap();
        assert_eq!((s.sigma_a.total(), s.sigma_b.total(), s.sigma_ab.total()), (1, 2, 6));
        assert_eq!((s.m_a, s.m_b), (1, 1));
        let card = group_cardinalities(&s);
        assert_eq!((card.log2_g, card.log2_d_a, card.log2_d_b), (7, 1, 2));

        let comp = region_stats(&c, &bp.complement().unwrap()).unwrap();
        assert_eq!((comp.sigma_a.total(), comp.sigma_b.total(), comp.sigma_ab.total()), (2, 1, 6));
        assert_eq!(comp.m_b, 1);
        assert_eq!(comp, s.swapped());
    }

    #[test]
    fn empty_sides_rejected() {
        let c = build_torus_colex(3, 3).unwrap();
        assert_eq!(Bipartition::new(&c, []).unwrap_err(), Error::EmptyA);
        assert_eq!(Bipartition::new(&c, 0..18).unwrap_err(), Error::EmptyB);
        assert!(matches!(Bipartition::new(&c, [18]), Err(Error::QubitOutOfRange { .. })));
    }

    #[test]
    fn whole_system_stats() {
        let c = build_torus_colex(3, 3).unwrap();
        let s = region_stats(&c, &Bipartition::whole(&c)).unwrap();
        assert_eq!((s.sigma_a.total(), s.sigma_ab.total(), s.m_b), (9, 0, 0));
        let card = group_cardinalities(&s);
        assert_eq!((card.log2_d_a, card.log2_d_b), (7, 0));
    }

    #[test]
    fn strings_live_in_a_and_multiply_to_identity() {
        let c = build_torus_colex(6, 6).unwrap();
        let bp = Bipartition::new(&c, (0..c.qubit_count()).filter(|&q| !c.plaquette_support(14).unwrap().contains(&q))).unwrap();
        let strings = collective_strings(&c, &bp);
        assert_eq!(strings.len(), 3);
        let mut acc = BitVec::zeros(c.qubit_count());
        for s in &strings {
            assert!(!s.support.is_empty());
            assert!(s.support.iter().all(|&q| bp.contains(q)));
            acc.xor_assign(&BitVec::from_indices(c.qubit_count(), s.support.iter().copied()));
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn planar_single_plaquette_region() {
        let c = build_triangular_colex(1).unwrap();
        let bp = Bipartition::new(&c, c.plaquette_support(0).unwrap().to_vec()).unwrap();
        let s = region_stats(&c, &bp).unwrap();
        assert_eq!(s.sigma_a.total(), 1);
        let card = group_cardinalities(&s);
        assert_eq!(card.log2_g, 3);
        assert_eq!(card.log2_d_a, 1);
    }

    #[test]
    fn topo_regions_on_torus_and_triangle() {
        let t = build_torus_colex(12, 12).unwrap();
        let regs = canonical_topo_bipartitions(&t, 3, 1).unwrap();
        assert_eq!(regs[0].stats.components.len(), 2);
        let tri = build_triangular_colex(4).unwrap();
        let regs = canonical_topo_bipartitions(&tri, 3, 1).unwrap();
        let card: Vec<_> = regs.iter().map(|r| group_cardinalities(&r.stats)).collect();
        assert_eq!(card[0].log2_d_a, regs[0].stats.sigma_a.total() + 2);
        assert_eq!(card[3].log2_d_b, regs[3].stats.sigma_b.total() + 4);
    }

    #[test]
    fn topo_rejects_small_lattices() {
        let t = build_torus_colex(6, 6).unwrap();
        assert!(matches!(canonical_topo_bipartitions(&t, 3, 1), Err(Error::LatticeTooSmall(_))));
        assert!(matches!(canonical_topo_bipartitions(&t, 1, 1), Err(Error::InvalidArgument(_))));
        let tri = build_triangular_colex(2).unwrap();
        assert!(matches!(canonical_topo_bipartitions(&tri, 3, 1), Err(Error::LatticeTooSmall(_))));
    }
}
