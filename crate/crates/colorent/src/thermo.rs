//! Closed-form thermal quantities: couplings, Ising and string partition functions,
//! F terms, entanglement entropy, Renyi traces, mutual information and topological entropy.
//!
//! Internally every F term is written as `exp(n L_j) * prod_f G_f(n)^{mult_f}`, where each
//! factor `G_f(n) = sum_m sign_m |mu_m|^n` is normalized so that `G_f(1) = 1`. The sector
//! weights `w_j = F_j / (4 Z_0)` and the signed measures `mu` stay in the log domain, which
//! keeps large lattices and strong couplings free of overflow.

use std::f64::consts::LN_2;

use nalgebra::Matrix4;
use serde::Serialize;

use crate::bipartition::{
    check_topo_sum_rules, group_cardinalities, synthetic_annulus_stats, ComponentStats, RegionStats,
};
use crate::colex::BoundaryKind;
use crate::color::{ByColor, Color};
use crate::error::{Error, Result};
use crate::numerics::{
    ln_half_one_minus_exp_neg, ln_half_one_plus_exp_neg, log_sum_exp, scaled, LogSigned,
};

/// Zero-temperature topological entropy of the color code, 4 ln 2.
pub const S_CC: f64 = 4.0 * LN_2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Couplings {
    /// Temperature; NaN when the couplings were given directly as k values.
    pub temperature: f64,
    pub lambda: ByColor<f64>,
    pub k: ByColor<f64>,
}

impl Couplings {
    /// Couplings specified directly by k per color.
    pub fn from_k(k: ByColor<f64>) -> Self {
        Couplings { temperature: f64::NAN, lambda: ByColor::splat(f64::NAN), k }
    }

    pub fn x(&self, c: Color) -> f64 {
        (self.k[c] / 2.0).cosh()
    }

    pub fn y(&self, c: Color) -> f64 {
        (self.k[c] / 2.0).sinh()
    }

    pub fn has_infinite_k(&self) -> bool {
        self.k.0.iter().any(|k| k.is_infinite())
    }
}

/// k = -ln tanh(lambda / T), with k = 0 at T = 0 or lambda = inf and k = inf at T = inf.
pub fn coupling_k(lambda: f64, temperature: f64) -> f64 {
    if temperature == 0.0 || lambda == f64::INFINITY {
        return 0.0;
    }
    let x = lambda / temperature;
    if x == 0.0 {
        return f64::INFINITY;
    }
    // -ln tanh x = ln(1 + q) - ln(1 - q), q = e^{-2x}
    let q = (-2.0 * x).exp();
    let ln_one_minus_q = if q < 0.5 { (-q).ln_1p() } else { (-(-2.0 * x).exp_m1()).ln() };
    q.ln_1p() - ln_one_minus_q
}

pub fn make_couplings(lambda: ByColor<f64>, temperature: f64) -> Result<Couplings> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::InvalidCouplings(format!("temperature must be >= 0, got {temperature}")));
    }
    if lambda.0.iter().any(|l| l.is_nan() || *l < 0.0) {
        return Err(Error::InvalidCouplings(format!("lambda must be >= 0 or inf, got {:?}", lambda.0)));
    }
    Ok(Couplings { temperature, lambda, k: lambda.map(|l| coupling_k(l, temperature)) })
}

/// Length scale e^{lambda/T} of defect separation.
pub fn zeta(lambda: f64, temperature: f64) -> f64 {
    (lambda / temperature).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsingBoundary {
    Periodic,
    Antiperiodic,
}

/// 2^n [sinh^n(k/2) +/- j cosh^n(k/2)], + for periodic and - for antiperiodic.
pub fn ising_partition(k: f64, n: f64, boundary: IsingBoundary, j_product: f64) -> f64 {
    let s = (k / 2.0).sinh().powf(n);
    let c = (k / 2.0).cosh().powf(n);
    let pm = match boundary {
        IsingBoundary::Periodic => 1.0,
        IsingBoundary::Antiperiodic => -1.0,
    };
    2f64.powf(n) * (s + pm * j_product * c)
}

/// The four transfer-matrix eigenvalue functions of one component, in log form.
///
/// Index order is (xi_1, xi_2, xi_3, xi_4), tied to (blue, green, red, none): xi_1 carries
/// the blue argument as its distinguished one, and so on; xi_4 is the symmetric one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiQuad {
    /// (b, g, r) = k_c Sigma_i^c / 2.
    pub b: f64,
    pub g: f64,
    pub r: f64,
    /// ln xi_m (xi_m >= 0; -inf encodes zero).
    pub ln_xi: [f64; 4],
    /// ln(xi_m e^{-(b+g+r)}): the normalized weights, summing to one.
    pub ln_p: [f64; 4],
}

pub const XI_COLORS: [Color; 3] = [Color::Blue, Color::Green, Color::Red];

impl XiQuad {
    pub fn from_args(b: f64, g: f64, r: f64) -> Self {
        let mut a = ByColor::splat(0.0);
        a[Color::Blue] = b;
        a[Color::Green] = g;
        a[Color::Red] = r;
        let (ln_p_color, ln_p_all) = ln_p_from_halfargs(a);
        let ln_p = [
            ln_p_color[Color::Blue],
            ln_p_color[Color::Green],
            ln_p_color[Color::Red],
            ln_p_all,
        ];
        let s = b + g + r;
        XiQuad { b, g, r, ln_xi: ln_p.map(|lp| lp + s), ln_p }
    }

    pub fn xi(&self, m: usize) -> f64 {
        self.ln_xi[m].exp()
    }

    pub fn values(&self) -> [f64; 4] {
        [self.xi(0), self.xi(1), self.xi(2), self.xi(3)]
    }
}

/// ln of the normalized xi weights for half-arguments a_c (possibly infinite).
///
/// With c_x = (1 + e^{-2x})/2 and s_x = (1 - e^{-2x})/2:
/// p_c = s_c c_o c_o' + c_c s_o s_o', p_all = c c c + s s s.
fn ln_p_from_halfargs(a: ByColor<f64>) -> (ByColor<f64>, f64) {
    let lc = a.map(|x| ln_half_one_plus_exp_neg(2.0 * x));
    let ls = a.map(|x| ln_half_one_minus_exp_neg(2.0 * x));
    let mut out = ByColor::splat(0.0);
    for c in Color::ALL {
        let [o1, o2] = c.others();
        out[c] = log_sum_exp(&[ls[c] + lc[o1] + lc[o2], lc[c] + ls[o1] + ls[o2]]);
    }
    let all = log_sum_exp(&[lc.0.iter().sum(), ls.0.iter().sum()]);
    (out, all)
}

pub fn xi_values(couplings: &Couplings, component: &ComponentStats) -> XiQuad {
    let half = |c: Color| scaled(couplings.k[c], component.sigma[c] as f64) / 2.0;
    XiQuad::from_args(half(Color::Blue), half(Color::Green), half(Color::Red))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StringPattern {
    Ppp,
    Aap,
    Paa,
    Apa,
}

impl StringPattern {
    /// Signs of the J_b xi_1, J_g xi_2, J_r xi_3 terms.
    fn signs(self) -> [f64; 3] {
        match self {
            StringPattern::Ppp => [1.0, 1.0, 1.0],
            StringPattern::Aap => [-1.0, 1.0, -1.0],
            StringPattern::Paa => [-1.0, -1.0, 1.0],
            StringPattern::Apa => [1.0, -1.0, -1.0],
        }
    }
}

impl std::str::FromStr for StringPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ppp" => Ok(StringPattern::Ppp),
            "aap" => Ok(StringPattern::Aap),
            "paa" => Ok(StringPattern::Paa),
            "apa" => Ok(StringPattern::Apa),
            _ => Err(Error::InvalidArgument(format!("unknown string pattern {s:?}"))),
        }
    }
}

/// 4^n [+/- J_b xi_1^n +/- J_g xi_2^n +/- J_r xi_3^n + xi_4^n].
pub fn string_partition(xi: &XiQuad, n: f64, pattern: StringPattern, j_r: f64, j_b: f64, j_g: f64) -> f64 {
    let s = pattern.signs();
    let p = |m: usize| (xi.ln_xi[m] * n).exp();
    4f64.powf(n) * (s[0] * j_b * p(0) + s[1] * j_g * p(1) + s[2] * j_r * p(2) + p(3))
}

/// Transfer matrix of the three coupled string chains of one component.
///
/// States are labeled by Z2 x Z2 and the matrix depends only on the XOR of the row and
/// column labels, so the first row determines it. `j = (J_b, J_g, J_r)` must satisfy
/// `J_r J_b J_g = 1`.
pub fn transfer_matrix_from_args(b: f64, g: f64, r: f64, j: [f64; 3]) -> Result<Matrix4<f64>> {
    let [jb, jg, jr] = j;
    if jb * jg * jr != 1.0 || j.iter().any(|x| x.abs() != 1.0) {
        return Err(Error::InvalidArgument(format!("J signs must be +/-1 with J_r J_b J_g = 1, got {j:?}")));
    }
    let (b, g, r) = (jb * b, jg * g, jr * r);
    let f = [(b + g + r).exp(), (-b - g + r).exp(), (b - g - r).exp(), (-b + g - r).exp()];
    Ok(Matrix4::from_fn(|i, k| f[i ^ k]))
}

pub fn transfer_matrix(couplings: &Couplings, component: &ComponentStats, j: [f64; 3]) -> Result<Matrix4<f64>> {
    let xi = xi_values(couplings, component);
    transfer_matrix_from_args(xi.b, xi.g, xi.r, j)
}

/// The eigenvalues {4 J_b xi_1, 4 J_g xi_2, 4 J_r xi_3, 4 xi_4}.
pub fn transfer_eigenvalues(xi: &XiQuad, j: [f64; 3]) -> [f64; 4] {
    let v = xi.values();
    [4.0 * j[0] * v[0], 4.0 * j[1] * v[1], 4.0 * j[2] * v[2], 4.0 * v[3]]
}

/// Order of limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Limit {
    /// Finite lattice, all counts as given.
    Exact,
    /// N -> infinity taken first: sectors with a nonzero flipped coupling drop out and
    /// components flagged `extensive` are infinitely large.
    Thermodynamic,
}

#[derive(Clone, Debug)]
struct Factor {
    mult: u64,
    /// (sign, ln|mu|) pairs; sum of sign * |mu| is one.
    terms: Vec<(f64, f64)>,
}

impl Factor {
    fn ln_g(&self, n: f64) -> LogSigned {
        let t: Vec<LogSigned> = self
            .terms
            .iter()
            .filter(|t| t.1 != f64::NEG_INFINITY)
            .map(|&(s, l)| LogSigned::new(s, n * l))
            .collect();
        LogSigned::sum(&t).powi(self.mult)
    }

    /// d/dn G(n) at n = 1: sum sign |mu| ln|mu|.
    fn dg(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.1 != f64::NEG_INFINITY)
            .map(|&(s, l)| s * l.exp() * l)
            .sum::<f64>()
            * self.mult as f64
    }

    /// -w sum sign |mu| ln|mu|, evaluated as exp(ln w + ln|mu|) to stay finite.
    fn weighted_entropy(&self, ln_w: f64) -> f64 {
        -self
            .terms
            .iter()
            .filter(|t| t.1 != f64::NEG_INFINITY)
            .map(|&(s, l)| s * (ln_w + l).exp() * l)
            .sum::<f64>()
            * self.mult as f64
    }
}

#[derive(Clone, Debug)]
struct Sector {
    /// ln w_j, normalized over sectors.
    ln_w: f64,
    /// ln F_j^{(1)} (= L_j).
    ln_f: f64,
    factors: Vec<Factor>,
}

#[derive(Clone, Debug)]
struct Expansion {
    sectors: Vec<Sector>,
    ln_ratio: f64,
    ln_z: f64,
    torus: bool,
}

/// Sector j keeps color `SECTOR_KEEP[j]` unflipped (None: identity sector).
pub const SECTOR_KEEP: [Option<Color>; 4] = [None, Some(Color::Green), Some(Color::Red), Some(Color::Blue)];

fn flipped(keep: Option<Color>, c: Color) -> bool {
    keep.is_some_and(|k| k != c)
}

fn half_args(stats: &ComponentStats, k: &ByColor<f64>, limit: Limit) -> ByColor<f64> {
    let mut a = ByColor::splat(0.0);
    for c in Color::ALL {
        a[c] = if limit == Limit::Thermodynamic && stats.extensive {
            if k[c] > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            scaled(k[c], stats.sigma[c] as f64) / 2.0
        };
    }
    a
}

fn plaquette_factor(k: f64, mult: u64, flip: bool) -> Factor {
    let (lp, lm) = (ln_half_one_plus_exp_neg(k), ln_half_one_minus_exp_neg(k));
    let terms = if flip { vec![(1.0, k + lp), (-1.0, k + lm)] } else { vec![(1.0, lp), (1.0, lm)] };
    Factor { mult, terms }
}

fn component_factor(comp: &ComponentStats, k: &ByColor<f64>, limit: Limit, keep: Option<Color>) -> Option<Factor> {
    let a = half_args(comp, k, limit);
    match comp.rank {
        2 => {
            let (ln_p, ln_p_all) = ln_p_from_halfargs(a);
            let shift = match keep {
                None => 0.0,
                Some(c) => {
                    let [o1, o2] = c.others();
                    2.0 * (a[o1] + a[o2])
                }
            };
            let mut terms: Vec<(f64, f64)> = XI_COLORS
                .iter()
                .map(|&m| {
                    let sign = if keep.is_none() || keep == Some(m) { 1.0 } else { -1.0 };
                    (sign, ln_p[m] + shift)
                })
                .collect();
            terms.push((1.0, ln_p_all + shift));
            Some(Factor { mult: 1, terms })
        }
        1 => {
            debug_assert!(keep.is_none());
            let c = Color::ALL.into_iter().find(|&c| comp.strings_valid[c])?;
            let [o1, o2] = c.others();
            let e = 2.0 * (a[o1] + a[o2]);
            Some(Factor {
                mult: 1,
                terms: vec![(1.0, ln_half_one_plus_exp_neg(e)), (1.0, ln_half_one_minus_exp_neg(e))],
            })
        }
        _ => None,
    }
}

fn expand(stats: &RegionStats, couplings: &Couplings, limit: Limit) -> Result<Expansion> {
    stats.check_consistency()?;
    let k = couplings.k;
    if k.0.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err(Error::InvalidCouplings(format!("k must be >= 0, got {:?}", k.0)));
    }
    let n = stats.n_per_color as f64;
    let ln_ratio = group_cardinalities(stats).ln_ratio();
    let torus = stats.boundary_kind == BoundaryKind::Torus;
    let l0 = if limit == Limit::Thermodynamic && k.0.iter().any(|&x| x > 0.0) {
        f64::INFINITY
    } else {
        Color::ALL.iter().map(|&c| scaled(k[c], n)).sum::<f64>() / 2.0
    };
    let keeps: &[Option<Color>] = if torus { &SECTOR_KEEP } else { &SECTOR_KEEP[..1] };

    let deltas: Vec<f64> = keeps
        .iter()
        .map(|&keep| {
            let flipped_k: f64 = Color::ALL.iter().filter(|&&c| flipped(keep, c)).map(|&c| k[c]).sum();
            match limit {
                _ if flipped_k == 0.0 => 0.0,
                Limit::Thermodynamic => f64::NEG_INFINITY,
                Limit::Exact => -scaled(flipped_k, n),
            }
        })
        .collect();
    let lse = log_sum_exp(&deltas);

    let mut sectors = Vec::new();
    for (&keep, &delta) in keeps.iter().zip(&deltas) {
        let ln_w = delta - lse;
        let ln_f = if delta == f64::NEG_INFINITY { f64::NEG_INFINITY } else { l0 + delta };
        let mut factors = Vec::new();
        if ln_w > f64::NEG_INFINITY {
            for c in Color::ALL {
                if stats.sigma_a[c] > 0 {
                    factors.push(plaquette_factor(k[c], stats.sigma_a[c], flipped(keep, c)));
                }
            }
            for comp in &stats.components {
                factors.extend(component_factor(comp, &k, limit, keep));
            }
        }
        sectors.push(Sector { ln_w, ln_f, factors });
    }
    let ln_z = if torus { l0 + lse - 2.0 * LN_2 } else { l0 };
    Ok(Expansion { sectors, ln_ratio, ln_z, torus })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyBreakdown {
    pub s_total: f64,
    /// -ln(d_A d_B / |G|).
    pub term_log_group: f64,
    /// ln Z_0 (torus) or ln Z_1 (planar).
    pub term_log_z0: f64,
    /// -(1/4Z_0) sum_j dF_j (planar: -(1/Z_1) dF_1), taken as the remainder.
    pub term_df: f64,
}

/// Entanglement entropy S_A(T) of region A.
pub fn entanglement_entropy(stats: &RegionStats, couplings: &Couplings, limit: Limit) -> Result<EntropyBreakdown> {
    let ex = expand(stats, couplings, limit)?;
    let mut s = -ex.ln_ratio;
    if ex.torus {
        s += -ex.sectors.iter().filter(|x| x.ln_w > f64::NEG_INFINITY).map(|x| x.ln_w.exp() * x.ln_w).sum::<f64>();
        s -= 2.0 * LN_2;
    }
    for sec in ex.sectors.iter().filter(|x| x.ln_w > f64::NEG_INFINITY) {
        s += sec.factors.iter().map(|f| f.weighted_entropy(sec.ln_w)).sum::<f64>();
    }
    Ok(EntropyBreakdown {
        s_total: s,
        term_log_group: -ex.ln_ratio,
        term_log_z0: ex.ln_z,
        term_df: s + ex.ln_ratio - ex.ln_z,
    })
}

/// Tr rho_A^n for real n >= 1.
pub fn trace_rho_n(stats: &RegionStats, couplings: &Couplings, n: f64, limit: Limit) -> Result<f64> {
    if n.is_nan() || n < 1.0 {
        return Err(Error::InvalidArgument(format!("replica index must be >= 1, got {n}")));
    }
    let ex = expand(stats, couplings, limit)?;
    let mut ln = (n - 1.0) * ex.ln_ratio;
    if ex.torus {
        ln += (n - 1.0) * 2.0 * LN_2;
    }
    let terms: Vec<LogSigned> = ex
        .sectors
        .iter()
        .filter(|x| x.ln_w > f64::NEG_INFINITY)
        .map(|sec| {
            sec.factors
                .iter()
                .fold(LogSigned::new(1.0, n * sec.ln_w), |acc, f| acc.mul(f.ln_g(n)))
        })
        .collect();
    let sum = LogSigned::sum(&terms);
    Ok(sum.sign * (ln + sum.ln_abs).exp())
}

/// F^{(1)}_j, their replica derivatives and ln Z_0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FTerms {
    /// ln F^{(1)}_j; planar lattices only populate j = 0.
    pub ln_f: [f64; 4],
    /// dF_j/dn at n = 1.
    pub df: [LogSigned; 4],
    pub log_z0: f64,
}

pub fn f_terms(stats: &RegionStats, couplings: &Couplings) -> Result<FTerms> {
    if couplings.has_infinite_k() {
        return Err(Error::InvalidCouplings("F terms need finite k; use the entropy limit paths".into()));
    }
    let ex = expand(stats, couplings, Limit::Exact)?;
    let mut ln_f = [f64::NEG_INFINITY; 4];
    let mut df = [LogSigned::ZERO; 4];
    for (j, sec) in ex.sectors.iter().enumerate() {
        ln_f[j] = sec.ln_f;
        if sec.ln_f > f64::NEG_INFINITY {
            let l = sec.ln_f;
            let g = l + sec.factors.iter().map(Factor::dg).sum::<f64>();
            df[j] = LogSigned::new(1.0, l).mul(LogSigned::from_f64(g));
        }
    }
    Ok(FTerms { ln_f, df, log_z0: ex.ln_z })
}

/// F^{(n)}_j for real n (planar lattices only populate j = 0).
pub fn f_n(stats: &RegionStats, couplings: &Couplings, n: f64) -> Result<[LogSigned; 4]> {
    let ex = expand(stats, couplings, Limit::Exact)?;
    let mut out = [LogSigned::ZERO; 4];
    for (j, sec) in ex.sectors.iter().enumerate() {
        if sec.ln_f > f64::NEG_INFINITY {
            out[j] = sec.factors.iter().fold(LogSigned::new(1.0, n * sec.ln_f), |acc, f| acc.mul(f.ln_g(n)));
        }
    }
    Ok(out)
}

/// Tr rho_A^n assembled from the F terms as (1/4Z_0)(d_A d_B/(Z_0|G|))^{n-1} sum_j F^{(n)}_j.
pub fn trace_rho_n_from_f(stats: &RegionStats, couplings: &Couplings, n: f64) -> Result<f64> {
    let f = f_n(stats, couplings, n)?;
    let ft = f_terms(stats, couplings)?;
    let ln_ratio = group_cardinalities(stats).ln_ratio();
    let torus = stats.boundary_kind == BoundaryKind::Torus;
    let sum = LogSigned::sum(&f);
    let pre = if torus { -2.0 * LN_2 } else { 0.0 };
    Ok(sum.sign * (pre - n * ft.log_z0 + (n - 1.0) * ln_ratio + sum.ln_abs).exp())
}

/// Mutual information (S_A + S_B - S_{A u B}) / 2.
pub fn mutual_information(
    stats_a: &RegionStats,
    stats_b: &RegionStats,
    stats_union: &RegionStats,
    couplings: &Couplings,
    limit: Limit,
) -> Result<f64> {
    if !stats_union.is_whole() {
        return Err(Error::InconsistentStats("union statistics must describe the whole system".into()));
    }
    for s in [stats_a, stats_b] {
        if s.n_per_color != stats_union.n_per_color || s.boundary_kind != stats_union.boundary_kind {
            return Err(Error::InconsistentStats("statistics come from different lattices".into()));
        }
    }
    let sa = entanglement_entropy(stats_a, couplings, limit)?.s_total;
    let sb = entanglement_entropy(stats_b, couplings, limit)?.s_total;
    let su = entanglement_entropy(stats_union, couplings, limit)?.s_total;
    Ok(0.5 * (sa + sb - su))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TopoEntropy {
    /// -S_1 + S_2 + S_3 - S_4 from four entropy evaluations.
    pub value: f64,
    /// Direct transcription of the expanded sector-sum expression, when it applies (finite k, exact limit).
    pub transcription: Option<f64>,
    pub entropies: [f64; 4],
}

/// Topological entropy of the four canonical regions.
pub fn topological_entropy(four: &[RegionStats; 4], couplings: &Couplings, limit: Limit) -> Result<TopoEntropy> {
    check_topo_sum_rules(&[&four[0], &four[1], &four[2], &four[3]])?;
    let mut entropies = [0.0; 4];
    for (s, st) in entropies.iter_mut().zip(four) {
        *s = entanglement_entropy(st, couplings, limit)?.s_total;
    }
    let value = -entropies[0] + entropies[1] + entropies[2] - entropies[3];
    let transcription = if limit == Limit::Exact && !couplings.has_infinite_k() {
        sector_sum_transcription(four, couplings)?
    } else {
        None
    };
    Ok(TopoEntropy { value, transcription, entropies })
}

/// S_cc + (1/4Z_0) sum_b (+-) sum_i sum_j e^{+-k(N - Sigma_{b,i})/2 ...} sum_m (+-) xi ln xi.
fn sector_sum_transcription(four: &[RegionStats; 4], couplings: &Couplings) -> Result<Option<f64>> {
    let k = couplings.k;
    let n = four[0].n_per_color as f64;
    // The transcription is written for the torus, where every outer component has rank 2.
    if four[0].boundary_kind != BoundaryKind::Torus || four.iter().flat_map(|s| &s.components).any(|c| c.rank != 2) {
        return Ok(None);
    }
    // ln(4 Z_0)
    let ln_norm = {
        let l: Vec<f64> = SECTOR_KEEP
            .iter()
            .map(|&keep| Color::ALL.iter().map(|&c| if flipped(keep, c) { -k[c] * n } else { k[c] * n }).sum::<f64>() / 2.0)
            .collect();
        log_sum_exp(&l)
    };
    let mut total = 0.0;
    for (b, stats) in four.iter().enumerate() {
        let sign_b = if b == 0 || b == 3 { 1.0 } else { -1.0 };
        for comp in &stats.components {
            let xi = xi_values(couplings, comp);
            for keep in SECTOR_KEEP {
                let ln_pre = Color::ALL
                    .iter()
                    .map(|&c| {
                        let e = k[c] * (n - comp.sigma[c] as f64) / 2.0;
                        if flipped(keep, c) {
                            -e
                        } else {
                            e
                        }
                    })
                    .sum::<f64>()
                    - ln_norm;
                let mut sum = 0.0;
                for m in 0..4 {
                    let sign = if m == 3 || keep.is_none() || keep == Some(XI_COLORS[m]) { 1.0 } else { -1.0 };
                    let l = xi.ln_xi[m];
                    if l > f64::NEG_INFINITY {
                        sum += sign * (ln_pre + l).exp() * l;
                    }
                }
                total += sign_b * sum;
            }
        }
    }
    Ok(Some(S_CC + total))
}

/// Topological entropy with hard-constrained colors (k_c = 0) in the thermodynamic limit.
pub fn topo_color_limits(four: &[RegionStats; 4], couplings: &Couplings) -> Result<f64> {
    if !couplings.k.0.contains(&0.0) {
        return Err(Error::InvalidCouplings("at least one color must be hard-constrained (k = 0)".into()));
    }
    Ok(topological_entropy(four, couplings, Limit::Thermodynamic)?.value)
}

/// Characteristic dropping temperature lambda / ln sqrt(2 Sigma').
pub fn t_drop(lambda: f64, sigma_prime: f64) -> Result<f64> {
    if !(sigma_prime >= 2.0) {
        return Err(Error::InvalidArgument(format!("sigma' must be >= 2, got {sigma_prime}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(lambda / (2.0 * sigma_prime).sqrt().ln())
}

/// Temperature at which the thermodynamic-limit S_topo - S_cc reaches -ln 2, for uniform
/// coupling `lambda` and an enclosed component with `sigma` plaquettes of each color.
pub fn half_drop_temperature(lambda: f64, sigma: u64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be positive and finite, got {lambda}")));
    }
    let stats = synthetic_annulus_stats(4 * sigma + 100, ByColor::splat(sigma))?;
    let gap = |t: f64| -> Result<f64> {
        let c = make_couplings(ByColor::splat(lambda), t)?;
        Ok(topological_entropy(&stats, &c, Limit::Thermodynamic)?.value - S_CC + LN_2)
    };
    let (mut lo, mut hi) = ((lambda * 1e-3).ln(), (lambda * 1e3).ln());
    if gap(lo.exp())? <= 0.0 || gap(hi.exp())? >= 0.0 {
        return Err(Error::InvalidArgument(format!("no half drop bracketed for sigma = {sigma}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid.exp())? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}
