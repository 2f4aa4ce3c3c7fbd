//! Hexagonal 2-colexes: torus codes and triangular planar codes.
//!
//! Plaquettes are hexagons at axial coordinates `(u, v)` colored `(u - v) mod 3`.
//! Qubits sit on the triangles of the dual triangular lattice: the "up" triangle
//! anchored at `(u, v)` touches hexes `(u,v), (u+1,v), (u,v+1)`, the "down" one
//! touches `(u+1,v), (u,v+1), (u+1,v+1)`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::color::{ByColor, Color};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVec};

pub const TRIANGULAR_MIN_SIZE: usize = 1;
pub const TRIANGULAR_MAX_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Torus,
    PlanarTriangular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dims {
    Torus { lu: usize, lv: usize },
    Triangular { size: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub id: usize,
    pub color: Color,
    /// Qubits around the hexagon in cyclic order.
    pub support: Vec<usize>,
    #[serde(skip)]
    pub coord: (i64, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub color: Color,
}

#[derive(Clone, Debug)]
pub struct Colex {
    qubit_count: usize,
    plaquettes: Vec<Plaquette>,
    links: Vec<Link>,
    boundary_kind: BoundaryKind,
    dims: Dims,
    qubit_plaquettes: Vec<Vec<usize>>,
    hex_index: HashMap<(i64, i64), usize>,
}

type Hex = (i64, i64);

fn hex_color(h: Hex) -> Color {
    Color::from_index((h.0 - h.1).rem_euclid(3) as usize)
}

fn triangle(anchor: Hex, down: bool) -> [Hex; 3] {
    let (u, v) = anchor;
    if down {
        [(u + 1, v), (u, v + 1), (u + 1, v + 1)]
    } else {
        [(u, v), (u + 1, v), (u, v + 1)]
    }
}

/// The six triangles around hex `h`, in cyclic order.
fn triangles_around(h: Hex) -> [(Hex, bool); 6] {
    let (u, v) = h;
    [
        ((u, v), false),
        ((u - 1, v), true),
        ((u - 1, v), false),
        ((u - 1, v - 1), true),
        ((u, v - 1), false),
        ((u, v - 1), true),
    ]
}

#[derive(Clone, Copy, PartialEq)]
enum Cell {
    Real,
    Virtual,
    Absent,
}

struct Geometry<'a> {
    classify: &'a dyn Fn(Hex) -> Cell,
    canon: &'a dyn Fn(Hex) -> Hex,
    /// Face a hex belongs to for link purposes; virtual hexes along one side of an open
    /// lattice collapse into a single boundary face of that side's color.
    face: &'a dyn Fn(Hex) -> Hex,
}

fn assemble(
    real_hexes: Vec<Hex>,
    anchors: impl Iterator<Item = Hex>,
    geo: Geometry<'_>,
    boundary_kind: BoundaryKind,
    dims: Dims,
) -> Colex {
    let hex_index: HashMap<Hex, usize> =
        real_hexes.iter().enumerate().map(|(i, &h)| (h, i)).collect();

    let mut qubit_id: HashMap<(Hex, bool), usize> = HashMap::new();
    let mut qubit_tris: Vec<[Hex; 3]> = Vec::new();
    for a in anchors {
        for down in [false, true] {
            let tri = triangle(a, down).map(|h| (geo.canon)(h));
            let cells = tri.map(|h| (geo.classify)(h));
            if cells.iter().all(|&c| c != Cell::Absent) && cells.contains(&Cell::Real) {
                qubit_id.insert(((geo.canon)(a), down), qubit_tris.len());
                qubit_tris.push(tri);
            }
        }
    }

    let plaquettes: Vec<Plaquette> = real_hexes
        .iter()
        .enumerate()
        .map(|(id, &h)| {
            let support = triangles_around(h)
                .iter()
                .filter_map(|&(a, down)| qubit_id.get(&((geo.canon)(a), down)).copied())
                .collect();
            Plaquette { id, color: hex_color(h), support, coord: h }
        })
        .collect();

    let mut qubit_plaquettes = vec![Vec::new(); qubit_tris.len()];
    for p in &plaquettes {
        for &q in &p.support {
            qubit_plaquettes[q].push(p.id);
        }
    }

    // Two qubits are linked when their triangles share an edge (a pair of hexes);
    // the link takes the color of the hexes the two triangles do not share.
    let mut edges: BTreeMap<(Hex, Hex), Vec<(usize, Hex)>> = BTreeMap::new();
    for (q, tri) in qubit_tris.iter().enumerate() {
        let tri = tri.map(|h| (geo.face)(h));
        for skip in 0..3 {
            let mut pair = [tri[(skip + 1) % 3], tri[(skip + 2) % 3]];
            pair.sort();
            edges.entry((pair[0], pair[1])).or_default().push((q, tri[skip]));
        }
    }
    let mut links: Vec<Link> = edges
        .values()
        .filter(|ends| ends.len() == 2)
        .map(|ends| {
            let (a, b) = (ends[0].0.min(ends[1].0), ends[0].0.max(ends[1].0));
            Link { a, b, color: hex_color(ends[0].1) }
        })
        .collect();
    links.sort_by_key(|l| (l.a, l.b));

    Colex {
        qubit_count: qubit_tris.len(),
        plaquettes,
        links,
        boundary_kind,
        dims,
        qubit_plaquettes,
        hex_index,
    }
}

/// Hexagonal color code on an `lu x lv` torus.
pub fn build_torus_colex(lu: usize, lv: usize) -> Result<Colex> {
    for (name, value) in [("lu", lu), ("lv", lv)] {
        if value < 3 || value % 3 != 0 {
            return Err(Error::NotThreeColorable { name, value });
        }
    }
    let (lu_i, lv_i) = (lu as i64, lv as i64);
    let canon = move |h: Hex| (h.0.rem_euclid(lu_i), h.1.rem_euclid(lv_i));
    let classify = |_: Hex| Cell::Real;
    let hexes: Vec<Hex> = (0..lu_i).flat_map(|u| (0..lv_i).map(move |v| (u, v))).collect();
    let anchors = hexes.clone().into_iter();
    Ok(assemble(
        hexes,
        anchors,
        Geometry { classify: &classify, canon: &canon, face: &canon },
        BoundaryKind::Torus,
        Dims::Torus { lu, lv },
    ))
}

/// Triangular planar color code of the given family size (size 1 is the 7-qubit code).
pub fn build_triangular_colex(size: usize) -> Result<Colex> {
    if !(TRIANGULAR_MIN_SIZE..=TRIANGULAR_MAX_SIZE).contains(&size) {
        return Err(Error::UnsupportedSize {
            size,
            min: TRIANGULAR_MIN_SIZE,
            max: TRIANGULAR_MAX_SIZE,
        });
    }
    let t = (size - 1) as i64;
    // Real hexes satisfy three strict linear bounds; hexes on the bounds are virtual
    // and only serve to complete border triangles.
    let bound = [2 + 3 * t, 3 + 3 * t, 1 + 3 * t];
    let classify = move |(u, v): Hex| {
        let f = [u - v, u + 2 * v, -2 * u - v];
        if (0..3).all(|i| f[i] < bound[i]) {
            Cell::Real
        } else if (0..3).all(|i| f[i] <= bound[i]) {
            Cell::Virtual
        } else {
            Cell::Absent
        }
    };
    let canon = |h: Hex| h;
    let face = move |(u, v): Hex| {
        let f = [u - v, u + 2 * v, -2 * u - v];
        match (0..3).find(|&i| f[i] == bound[i]) {
            // Far-away stand-in with the side's color, (u - v) mod 3 = bound mod 3.
            Some(i) => {
                let far = 1_000_000 * (i as i64 + 1);
                (far + bound[i].rem_euclid(3), far)
            }
            None => (u, v),
        }
    };
    let m = 6 * t + 10;
    let hexes: Vec<Hex> = (-m..m)
        .flat_map(|u| (-m..m).map(move |v| (u, v)))
        .filter(|&h| classify(h) == Cell::Real)
        .collect();
    let anchors = (-m..m).flat_map(|u| (-m..m).map(move |v| (u, v)));
    Ok(assemble(
        hexes,
        anchors,
        Geometry { classify: &classify, canon: &canon, face: &face },
        BoundaryKind::PlanarTriangular,
        Dims::Triangular { size },
    ))
}

impl Colex {
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn boundary_kind(&self) -> BoundaryKind {
        self.boundary_kind
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Plaquettes containing qubit `q`.
    pub fn plaquettes_of(&self, q: usize) -> &[usize] {
        &self.qubit_plaquettes[q]
    }

    /// Plaquette count per color.
    pub fn color_counts(&self) -> ByColor<u64> {
        let mut n = ByColor::splat(0u64);
        for p in &self.plaquettes {
            n[p.color] += 1;
        }
        n
    }

    /// N, the number of plaquettes of each color (equal for every color on shipped lattices).
    pub fn n_per_color(&self) -> u64 {
        self.plaquettes.len() as u64 / 3
    }

    pub fn plaquette_support(&self, id: usize) -> Result<&[usize]> {
        self.plaquettes
            .get(id)
            .map(|p| p.support.as_slice())
            .ok_or(Error::PlaquetteOutOfRange { id, count: self.plaquettes.len() })
    }

    pub fn support_bits(&self, id: usize) -> BitVec {
        BitVec::from_indices(self.qubit_count, self.plaquettes[id].support.iter().copied())
    }

    /// Plaquette at axial coordinates, wrapping on the torus.
    pub fn plaquette_at(&self, u: i64, v: i64) -> Option<usize> {
        let h = match self.dims {
            Dims::Torus { lu, lv } => (u.rem_euclid(lu as i64), v.rem_euclid(lv as i64)),
            Dims::Triangular { .. } => (u, v),
        };
        self.hex_index.get(&h).copied()
    }

    /// Axial displacement from plaquette `from` to `to`, minimal image on the torus.
    pub fn displacement(&self, from: usize, to: usize) -> (i64, i64) {
        let (a, b) = (self.plaquettes[from].coord, self.plaquettes[to].coord);
        let (mut du, mut dv) = (b.0 - a.0, b.1 - a.1);
        if let Dims::Torus { lu, lv } = self.dims {
            let wrap = |d: i64, l: i64| {
                let d = d.rem_euclid(l);
                if d > l / 2 {
                    d - l
                } else {
                    d
                }
            };
            du = wrap(du, lu as i64);
            dv = wrap(dv, lv as i64);
        }
        (du, dv)
    }

    /// Hexagon-lattice distance between two plaquettes.
    pub fn hex_distance(&self, from: usize, to: usize) -> i64 {
        let (du, dv) = self.displacement(from, to);
        (du.abs() + dv.abs() + (du + dv).abs()) / 2
    }

    /// Copy of the lattice with one link recolored (fault injection for the validator).
    pub fn with_link_recolored(&self, link: usize, color: Color) -> Colex {
        let mut out = self.clone();
        out.links[link].color = color;
        out
    }

    /// GF(2) rank of the plaquette supports.
    pub fn stabilizer_rank(&self) -> usize {
        gf2::rank((0..self.plaquettes.len()).map(|p| self.support_bits(p)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, failures: Vec<String>, ok_detail: String) {
        let passed = failures.is_empty();
        let detail = if passed {
            ok_detail
        } else {
            let shown: Vec<_> = failures.iter().take(5).cloned().collect();
            format!("{} failure(s): {}", failures.len(), shown.join("; "))
        };
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }
}

pub const CHECK_DEGREE: &str = "vertex degree";
pub const CHECK_PROPER_COLORING: &str = "adjacent plaquettes differ in color";
pub const CHECK_LINK_COLORS: &str = "c-link connects c-plaquettes";
pub const CHECK_COMMUTATION: &str = "plaquette supports overlap evenly";
pub const CHECK_COUNTS: &str = "plaquette and qubit counts";
pub const CHECK_QUBIT_COLORS: &str = "qubit touches each color once";
pub const CHECK_GLOBAL_CONSTRAINT: &str = "green/blue/red total-product constraint";
pub const CHECK_INDEPENDENCE: &str = "plaquettes independent";
pub const CHECK_ENCODED: &str = "one encoded qubit";

/// Check the structural invariants of a 2-colex. Failures are report entries.
pub fn validate(colex: &Colex) -> ValidationReport {
    let mut report = ValidationReport { checks: Vec::new() };
    let nq = colex.qubit_count();
    let np = colex.plaquettes.len();
    let torus = colex.boundary_kind == BoundaryKind::Torus;

    let mut degree = vec![0usize; nq];
    for l in &colex.links {
        degree[l.a] += 1;
        degree[l.b] += 1;
    }
    let mut bad = Vec::new();
    for (q, &d) in degree.iter().enumerate() {
        // Corners of a planar code (qubits touching a single plaquette) keep two links.
        let ok = d == 3 || (!torus && d == 2 && colex.plaquettes_of(q).len() == 1);
        if !ok {
            bad.push(format!("qubit {q} has degree {d}"));
        }
    }
    report.push(CHECK_DEGREE, bad, format!("{nq} qubits checked"));

    let mut bad = Vec::new();
    let mut overlap_bad = Vec::new();
    for p in 0..np {
        for q in p + 1..np {
            let shared = colex.plaquettes[p]
                .support
                .iter()
                .filter(|x| colex.plaquettes[q].support.contains(x))
                .count();
            if shared > 0 && colex.plaquettes[p].color == colex.plaquettes[q].color {
                bad.push(format!("plaquettes {p} and {q} share color {}", colex.plaquettes[p].color));
            }
            if shared % 2 == 1 {
                overlap_bad.push(format!("plaquettes {p} and {q} share {shared} qubits"));
            }
        }
    }
    report.push(CHECK_PROPER_COLORING, bad, format!("{np} plaquettes checked"));

    let mut bad = Vec::new();
    for (i, l) in colex.links.iter().enumerate() {
        let pa = colex.plaquettes_of(l.a);
        let pb = colex.plaquettes_of(l.b);
        for &p in pa.iter().chain(pb) {
            let in_both = pa.contains(&p) && pb.contains(&p);
            let c = colex.plaquettes[p].color;
            if in_both == (c == l.color) {
                let role = if in_both { "shared" } else { "end" };
                bad.push(format!("link {i} ({}-{}) colored {} has {role} plaquette {p} colored {c}", l.a, l.b, l.color));
                break;
            }
        }
    }
    report.push(CHECK_LINK_COLORS, bad, format!("{} links checked", colex.links.len()));
    report.push(CHECK_COMMUTATION, overlap_bad, "all overlaps even".into());

    let counts = colex.color_counts();
    if torus {
        let n = counts[Color::Red];
        let mut bad = Vec::new();
        if counts.0.iter().any(|&c| c != n) {
            bad.push(format!("unequal color counts {:?}", counts.0));
        }
        if nq as u64 != 6 * n {
            bad.push(format!("{nq} qubits, expected {}", 6 * n));
        }
        report.push(CHECK_COUNTS, bad, format!("3N = {np} plaquettes, {nq} qubits"));

        let mut bad = Vec::new();
        for q in 0..nq {
            let mut seen = ByColor::splat(0);
            for &p in colex.plaquettes_of(q) {
                seen[colex.plaquettes[p].color] += 1;
            }
            if seen.0 != [1, 1, 1] {
                bad.push(format!("qubit {q} color multiplicities {:?}", seen.0));
            }
        }
        report.push(CHECK_QUBIT_COLORS, bad, "every qubit in one plaquette per color".into());

        let products: Vec<BitVec> = Color::ALL
            .iter()
            .map(|&c| {
                let mut acc = BitVec::zeros(nq);
                for p in colex.plaquettes.iter().filter(|p| p.color == c) {
                    acc.xor_assign(&colex.support_bits(p.id));
                }
                acc
            })
            .collect();
        let mut bad = Vec::new();
        if products[0] != products[1] || products[1] != products[2] {
            bad.push("per-color products differ".into());
        }
        report.push(CHECK_GLOBAL_CONSTRAINT, bad, "all three color products coincide".into());
    } else {
        let mut bad = Vec::new();
        if counts.0.iter().any(|&c| c != counts[Color::Red]) {
            bad.push(format!("unequal color counts {:?}", counts.0));
        }
        report.push(CHECK_COUNTS, bad, format!("{np} plaquettes, {nq} qubits"));

        let rank = colex.stabilizer_rank();
        let bad = if rank == np { vec![] } else { vec![format!("rank {rank} < {np}")] };
        report.push(CHECK_INDEPENDENCE, bad, format!("rank {rank}"));

        let bad = if nq == 2 * np + 1 {
            vec![]
        } else {
            vec![format!("{nq} - 2*{np} = {}", nq as i64 - 2 * np as i64)]
        };
        report.push(CHECK_ENCODED, bad, format!("{nq} - 2*{np} = 1"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_3x3_counts() {
        let c = build_torus_colex(3, 3).unwrap();
        assert_eq!(c.plaquettes().len(), 9);
        assert_eq!(c.qubit_count(), 18);
        assert_eq!(c.color_counts().0, [3, 3, 3]);
        assert_eq!(c.stabilizer_rank(), 7);
        assert!(c.plaquettes().iter().all(|p| p.support.len() == 6));
    }

    #[test]
    fn torus_rejects_non_multiple_of_three() {
        assert_eq!(
            build_torus_colex(4, 3).unwrap_err(),
            Error::NotThreeColorable { name: "lu", value: 4 }
        );
        assert!(build_torus_colex(3, 0).is_err());
    }

    #[test]
    fn torus_hexagon_neighbors_have_other_colors() {
        let c = build_torus_colex(3, 3).unwrap();
        for p in c.plaquettes() {
            let (u, v) = p.coord;
            let mut nbrs: Vec<usize> = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
                .iter()
                .map(|(du, dv)| c.plaquette_at(u + du, v + dv).unwrap())
                .collect();
            assert!(nbrs.iter().all(|&n| c.plaquettes()[n].color != p.color));
            nbrs.sort();
            nbrs.dedup();
            assert_eq!(nbrs.len(), 6);
        }
    }

    #[test]
    fn triangular_family_identities() {
        let expected = [(1, 7, 3), (2, 61, 30), (3, 169, 84), (4, 331, 165)];
        for (size, nq, np) in expected {
            let c = build_triangular_colex(size).unwrap();
            assert_eq!(c.qubit_count(), nq, "size {size}");
            assert_eq!(c.plaquettes().len(), np, "size {size}");
            assert!(validate(&c).all_passed(), "size {size}: {:?}", validate(&c));
        }
    }

    #[test]
    fn triangular_size_bounds() {
        assert!(matches!(build_triangular_colex(0), Err(Error::UnsupportedSize { .. })));
        assert!(matches!(build_triangular_colex(17), Err(Error::UnsupportedSize { .. })));
    }

    #[test]
    fn recolored_link_fails_link_check() {
        let c = build_torus_colex(3, 3).unwrap();
        assert!(validate(&c).all_passed());
        let l = c.links()[0];
        let bad = c.with_link_recolored(0, l.color.bar());
        let report = validate(&bad);
        assert!(!report.check(CHECK_LINK_COLORS).unwrap().passed);
        assert!(report.check(CHECK_GLOBAL_CONSTRAINT).unwrap().passed);
    }

    #[test]
    fn distances_wrap_on_torus() {
        let c = build_torus_colex(6, 6).unwrap();
        let a = c.plaquette_at(0, 0).unwrap();
        let b = c.plaquette_at(5, 0).unwrap();
        assert_eq!(c.displacement(a, b), (-1, 0));
        assert_eq!(c.hex_distance(a, b), 1);
        let d = c.plaquette_at(1, 5).unwrap();
        assert_eq!(c.hex_distance(a, d), 1);
    }
}
