//! Parsers for the lattice, region, coupling and grid specifications used by the CLI.
//!
//! Errors carry the byte offset of the offending token.

use std::str::FromStr;

use serde::Serialize;

use crate::bipartition::{canonical_topo_bipartitions, region_stats, Bipartition, RegionStats, TopoRegion};
use crate::colex::{build_torus_colex, build_triangular_colex, Colex};
use crate::color::{ByColor, Color};
use crate::error::{Error, Result};

fn parse_err(input: &str, pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { input: input.to_string(), pos, msg: msg.into() }
}

/// Split `s` at `sep`, yielding each piece with its byte offset in `s`.
fn pieces(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if ch == sep {
            out.push((start, &s[start..i]));
            start = i + ch.len_utf8();
        }
    }
    out.push((start, &s[start..]));
    out
}

fn number<T: FromStr>(input: &str, offset: usize, tok: &str, what: &str) -> Result<T> {
    tok.trim().parse().map_err(|_| parse_err(input, offset, format!("expected {what}, found {tok:?}")))
}

fn kind_and_body<'a>(input: &'a str, kinds: &[&str]) -> Result<(&'a str, &'a str, usize)> {
    let Some((kind, body)) = input.split_once(':') else {
        return Err(parse_err(input, 0, format!("expected one of {} followed by ':'", kinds.join(", "))));
    };
    if !kinds.contains(&kind) {
        return Err(parse_err(input, 0, format!("unknown kind {kind:?}; expected one of {}", kinds.join(", "))));
    }
    Ok((kind, body, kind.len() + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LatticeSpec {
    Torus { lu: usize, lv: usize },
    Triangular { size: usize },
}

impl FromStr for LatticeSpec {
    type Err = Error;

    /// `torus:LUxLV` or `triangular:SIZE`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body, off) = kind_and_body(s, &["torus", "triangular"])?;
        match kind {
            "torus" => {
                let Some((a, b)) = body.split_once('x') else {
                    return Err(parse_err(s, off, "expected LUxLV"));
                };
                Ok(LatticeSpec::Torus {
                    lu: number(s, off, a, "an integer")?,
                    lv: number(s, off + a.len() + 1, b, "an integer")?,
                })
            }
            _ => Ok(LatticeSpec::Triangular { size: number(s, off, body, "an integer size")? }),
        }
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeSpec::Torus { lu, lv } => write!(f, "torus:{lu}x{lv}"),
            LatticeSpec::Triangular { size } => write!(f, "triangular:{size}"),
        }
    }
}

impl LatticeSpec {
    pub fn build(&self) -> Result<Colex> {
        match *self {
            LatticeSpec::Torus { lu, lv } => build_torus_colex(lu, lv),
            LatticeSpec::Triangular { size } => build_triangular_colex(size),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RegionSpec {
    /// A = the six qubits of one plaquette.
    Hexagon(usize),
    /// A = hex rings r+1..=R around the central plaquette.
    Annulus { outer: usize, inner: usize },
    /// The four annulus regions of the topological-entropy construction.
    LevinWen { outer: usize, inner: usize },
    /// A = an explicit qubit list.
    Qubits(Vec<usize>),
}

impl FromStr for RegionSpec {
    type Err = Error;

    /// `hexagon:ID`, `annulus:R,r`, `levinwen:R,r` or `qubits:LIST` where LIST is
    /// comma-separated ids and `a-b` ranges.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body, off) = kind_and_body(s, &["hexagon", "annulus", "levinwen", "qubits"])?;
        let radii = || -> Result<(usize, usize)> {
            let p = pieces(body, ',');
            if p.len() != 2 {
                return Err(parse_err(s, off, "expected R,r"));
            }
            Ok((number(s, off + p[0].0, p[0].1, "an integer R")?, number(s, off + p[1].0, p[1].1, "an integer r")?))
        };
        match kind {
            "hexagon" => Ok(RegionSpec::Hexagon(number(s, off, body, "a plaquette id")?)),
            "annulus" => radii().map(|(outer, inner)| RegionSpec::Annulus { outer, inner }),
            "levinwen" => radii().map(|(outer, inner)| RegionSpec::LevinWen { outer, inner }),
            _ => {
                let mut qubits = Vec::new();
                for (p, tok) in pieces(body, ',') {
                    let at = off + p;
                    match tok.split_once('-') {
                        Some((a, b)) => {
                            let lo: usize = number(s, at, a, "a qubit id")?;
                            let hi: usize = number(s, at + a.len() + 1, b, "a qubit id")?;
                            if hi < lo {
                                return Err(parse_err(s, at, format!("empty range {tok:?}")));
                            }
                            qubits.extend(lo..=hi);
                        }
                        None => qubits.push(number(s, at, tok, "a qubit id")?),
                    }
                }
                Ok(RegionSpec::Qubits(qubits))
            }
        }
    }
}

/// A region resolved against a lattice.
#[derive(Clone, Debug)]
pub enum ResolvedRegion {
    Single { bipartition: Bipartition, stats: RegionStats },
    LevinWen(Box<[TopoRegion; 4]>),
}

impl ResolvedRegion {
    /// The region whose entropy is reported as S_A (region 1 for the Levin-Wen construction).
    pub fn primary(&self) -> (&Bipartition, &RegionStats) {
        match self {
            ResolvedRegion::Single { bipartition, stats } => (bipartition, stats),
            ResolvedRegion::LevinWen(r) => (&r[0].bipartition, &r[0].stats),
        }
    }
}

impl RegionSpec {
    pub fn resolve(&self, colex: &Colex) -> Result<ResolvedRegion> {
        let single = |bp: Bipartition| -> Result<ResolvedRegion> {
            let stats = region_stats(colex, &bp)?;
            Ok(ResolvedRegion::Single { bipartition: bp, stats })
        };
        match self {
            RegionSpec::Hexagon(id) => single(Bipartition::new(colex, colex.plaquette_support(*id)?.to_vec())?),
            RegionSpec::Qubits(q) => single(Bipartition::new(colex, q.iter().copied())?),
            RegionSpec::Annulus { outer, inner } => {
                let [r, ..] = canonical_topo_bipartitions(colex, *outer, *inner)?;
                Ok(ResolvedRegion::Single { bipartition: r.bipartition, stats: r.stats })
            }
            RegionSpec::LevinWen { outer, inner } => {
                Ok(ResolvedRegion::LevinWen(Box::new(canonical_topo_bipartitions(colex, *outer, *inner)?)))
            }
        }
    }
}

/// `R,B,G` per-color values, or a single value for all colors; `inf` is accepted.
pub fn parse_lambda(s: &str) -> Result<ByColor<f64>> {
    let p = pieces(s, ',');
    let vals: Vec<f64> = p.iter().map(|&(o, t)| number(s, o, t, "a number")).collect::<Result<_>>()?;
    for (&(o, _), &v) in p.iter().zip(&vals) {
        if v.is_nan() || v < 0.0 {
            return Err(parse_err(s, o, "lambda must be >= 0"));
        }
    }
    match vals[..] {
        [x] => Ok(ByColor::splat(x)),
        [r, b, g] => Ok(ByColor::from_rbg(r, b, g)),
        _ => Err(parse_err(s, 0, format!("expected 1 or 3 values (R,B,G), found {}", vals.len()))),
    }
}

/// Inclusive grid `start:stop:step`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let p = pieces(s, ':');
    if p.len() != 3 {
        return Err(parse_err(s, 0, "expected start:stop:step"));
    }
    let start: f64 = number(s, p[0].0, p[0].1, "a number")?;
    let stop: f64 = number(s, p[1].0, p[1].1, "a number")?;
    let step: f64 = number(s, p[2].0, p[2].1, "a number")?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(parse_err(s, p[2].0, "step must be positive and finite"));
    }
    if !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(parse_err(s, p[1].0, "need finite start <= stop"));
    }
    let count = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Comma-separated color letters, e.g. `r,b`.
pub fn parse_colors(s: &str) -> Result<Vec<Color>> {
    let mut out = Vec::new();
    for (o, t) in pieces(s, ',') {
        let t = t.trim();
        let mut chars = t.chars();
        let c = match (chars.next(), chars.next()) {
            (Some(ch), None) => Color::from_letter(ch),
            _ => None,
        }
        .ok_or_else(|| parse_err(s, o, format!("expected one of r, g, b, found {t:?}")))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattices() {
        assert_eq!("torus:3x3".parse::<LatticeSpec>().unwrap(), LatticeSpec::Torus { lu: 3, lv: 3 });
        assert_eq!("triangular:4".parse::<LatticeSpec>().unwrap(), LatticeSpec::Triangular { size: 4 });
        match "torus:3xq".parse::<LatticeSpec>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{other:?}"),
        }
        assert!("klein:3".parse::<LatticeSpec>().is_err());
        assert_eq!(LatticeSpec::Torus { lu: 6, lv: 9 }.to_string(), "torus:6x9");
    }

    #[test]
    fn regions() {
        assert_eq!("hexagon:4".parse::<RegionSpec>().unwrap(), RegionSpec::Hexagon(4));
        assert_eq!(
            "levinwen:3,1".parse::<RegionSpec>().unwrap(),
            RegionSpec::LevinWen { outer: 3, inner: 1 }
        );
        assert_eq!("qubits:0-2,7".parse::<RegionSpec>().unwrap(), RegionSpec::Qubits(vec![0, 1, 2, 7]));
        match "annulus:3,x".parse::<RegionSpec>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grids_and_values() {
        assert_eq!(parse_grid("0.1:0.5:0.1").unwrap().len(), 5);
        assert_eq!(parse_grid("1:1:1").unwrap(), vec![1.0]);
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("2:1:0.1").is_err());
        assert_eq!(parse_lambda("1").unwrap(), ByColor::splat(1.0));
        assert_eq!(parse_lambda("0.5,1,inf").unwrap(), ByColor::from_rbg(0.5, 1.0, f64::INFINITY));
        assert!(parse_lambda("1,2").is_err());
        assert_eq!(parse_colors("r,b").unwrap(), vec![Color::Red, Color::Blue]);
        match parse_colors("r,x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
    }
}
