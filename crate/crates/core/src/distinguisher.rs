//! Predicted square dimensions of duals of alternant and Goppa codes, the linearized
//! system `L_p`, and the distinguishable/random verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::{random_square_dim, LinearCode};
use crate::error::{Error, Result};
use crate::families::Family;
use crate::fmatrix::FMatrix;

fn binom2(a: u64) -> u64 {
    a * a.saturating_sub(1) / 2
}

/// `C(rm + 1, 2)`.
pub fn pair_count(r: usize, m: u32) -> u64 {
    binom2(r as u64 * m as u64 + 1)
}

/// `(m/2) * x`, asserting the product is integral.
fn half_m_times(m: u32, x: i128) -> i128 {
    let t = m as i128 * x;
    assert!(t % 2 == 0, "(m/2)*{x} is not an integer for m={m}");
    t / 2
}

/// Largest `e` the bounds may use for extension degree `m`.
pub fn e_cap(m: u32) -> u32 {
    m.saturating_sub(1) / 2
}

/// `e_A = max{i : r >= q^i + 1} = floor(log_q(r - 1))`.
pub fn e_alternant(q: u32, r: usize) -> Result<u32> {
    if r < 2 {
        return Err(Error::ParamDomain(format!("e_A needs r >= 2, got r={r}")));
    }
    if q < 2 {
        return Err(Error::ParamDomain(format!("q={q}")));
    }
    let (q, r) = (q as u128, r as u128);
    let mut e = 0;
    let mut pw = q;
    while pw < r {
        pw *= q;
        e += 1;
    }
    Ok(e)
}

/// `e_G = min{i : r <= (q-1)^2 q^i} + 1`.
pub fn e_goppa(q: u32, r: usize) -> Result<u32> {
    if q < 2 {
        return Err(Error::ParamDomain(format!("q={q}")));
    }
    let base = ((q - 1) as u128).pow(2);
    let (q, r) = (q as u128, r as u128);
    let mut i = 0;
    let mut cur = base;
    while cur < r {
        cur *= q;
        i += 1;
    }
    Ok(i + 1)
}

/// Least maximizer over `0..=cap` of `T(e) = e r - q^{e+1}/(q-1)`, by exhaustive search.
pub fn argmax_t_alternant(q: u32, r: usize, cap: u32) -> u32 {
    // scaled by (q - 1)
    let t = |e: u32| e as i128 * r as i128 * (q as i128 - 1) - (q as i128).pow(e + 1);
    (0..=cap).fold(0, |best, e| if t(e) > t(best) { e } else { best })
}

/// Least maximizer over `1..=max(1, cap)` of `T(e) = e r - (q-1) q^{e-1}`.
pub fn argmax_t_goppa(q: u32, r: usize, cap: u32) -> u32 {
    let t = |e: u32| e as i128 * r as i128 - (q as i128 - 1) * (q as i128).pow(e - 1);
    (1..=cap.max(1)).fold(1, |best, e| if t(e) > t(best) { e } else { best })
}

/// Which closed form produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundBranch {
    /// Alternant bound with the optimizing `e`.
    Alternant,
    /// Goppa code with `r < q - 1`.
    GoppaSmallR,
    /// Goppa code with `r >= q - 1`.
    GoppaLargeR,
    /// Square of a GRS code, `2r - 1`.
    Grs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    /// The closed form before clamping at `n`.
    pub raw: i128,
    /// `min(n, raw)`.
    pub value: usize,
    pub e_used: u32,
    /// The optimizing `e` exceeded [`e_cap`] and was lowered.
    pub e_clamped: bool,
    /// `raw >= n`.
    pub n_clamped: bool,
    pub branch: BoundBranch,
}

impl Bound {
    fn new(raw: i128, n: usize, e_used: u32, e_clamped: bool, branch: BoundBranch) -> Bound {
        let value = raw.clamp(0, n as i128) as usize;
        Bound { raw, value, e_used, e_clamped, n_clamped: raw >= n as i128, branch }
    }
}

fn check_domain(q: u32, m: u32, n: usize, r: usize, min_r: usize) -> Result<()> {
    if crate::field::prime_power(q).is_none() {
        return Err(Error::ParamDomain(format!("q={q} is not a prime power")));
    }
    if m < 2 {
        return Err(Error::ParamDomain(format!("need m > 1, got m={m}")));
    }
    if r < min_r {
        return Err(Error::ParamDomain(format!("need r >= {min_r}, got r={r}")));
    }
    if r * m as usize >= n {
        return Err(Error::ParamDomain(format!("need rm < n, got r={r} m={m} n={n}")));
    }
    Ok(())
}

/// `C(rm+1, 2) - (m/2)(r-1)(r-2)`.
fn small_e_value(m: u32, r: usize) -> i128 {
    let r = r as i128;
    pair_count(r as usize, m) as i128 - half_m_times(m, (r - 1) * (r - 2))
}

/// `C(rm+1,2) - (m/2)(r-1)((2e+1)r - 2(q^{e+1}-1)/(q-1))` at `e = min(e_A, e_cap(m))`.
pub fn bound_alternant(q: u32, m: u32, n: usize, r: usize) -> Result<Bound> {
    check_domain(q, m, n, r, 2)?;
    let ea = e_alternant(q, r)?;
    let e = ea.min(e_cap(m));
    let (qi, ri) = (q as i128, r as i128);
    let geom = (qi.pow(e + 1) - 1) / (qi - 1);
    let x = (ri - 1) * ((2 * e as i128 + 1) * ri - 2 * geom);
    let raw = pair_count(r, m) as i128 - half_m_times(m, x);
    Ok(Bound::new(raw, n, e, e < ea, BoundBranch::Alternant))
}

/// Predicted dimension of the square of the dual of a Goppa code of degree `r`.
///
/// For `r < q - 1` this is `C(rm+1,2) - (m/2)(r-1)(r-2)`. Otherwise it is
/// `C(rm+1,2) - (m/2) r ((2e+1)r - 2(q-1)q^{e-1} - 1)` at `e = min(e_G, e_cap(m))`; when the
/// cap forces `e = 0` the first form is used.
pub fn bound_goppa(q: u32, m: u32, n: usize, r: usize) -> Result<Bound> {
    check_domain(q, m, n, r, 1)?;
    if (r as u64) < q as u64 - 1 {
        return Ok(Bound::new(small_e_value(m, r), n, 0, false, BoundBranch::GoppaSmallR));
    }
    let eg = e_goppa(q, r)?;
    let e = eg.min(e_cap(m));
    if e == 0 {
        return Ok(Bound::new(small_e_value(m, r), n, 0, true, BoundBranch::GoppaLargeR));
    }
    let (qi, ri) = (q as i128, r as i128);
    let x = ri * ((2 * e as i128 + 1) * ri - 2 * (qi - 1) * qi.pow(e - 1) - 1);
    let raw = pair_count(r, m) as i128 - half_m_times(m, x);
    Ok(Bound::new(raw, n, e, e < eg, BoundBranch::GoppaLargeR))
}

/// The bound for the public code of `family`. For `grs` the public code is
/// `GRS_r^perp` over the big field and the prediction is `2r - 1`.
pub fn bound_for(family: Family, q: u32, m: u32, n: usize, r: usize) -> Result<Bound> {
    match family {
        Family::Alternant => bound_alternant(q, m, n, r),
        Family::Goppa => bound_goppa(q, m, n, r),
        Family::Grs => {
            if r == 0 || r > n {
                return Err(Error::ParamDomain(format!("GRS needs 1 <= r <= n, got r={r} n={n}")));
            }
            Ok(Bound::new(2 * r as i128 - 1, n, 0, false, BoundBranch::Grs))
        }
    }
}

/// Expected square dimension of the dual of a random code of the same shape:
/// `min(n, C(rm+1, 2))`, with `m = 1` for GRS.
pub fn random_expected(family: Family, m: u32, n: usize, r: usize) -> usize {
    let k = if family == Family::Grs { r } else { r * m as usize };
    random_square_dim(n, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Distinguishable,
    NotDistinguishable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Distinguishable => "distinguishable",
            Verdict::NotDistinguishable => "not-distinguishable",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Verdict> {
        match s {
            "distinguishable" => Ok(Verdict::Distinguishable),
            "not-distinguishable" => Ok(Verdict::NotDistinguishable),
            _ => Err(Error::Parse(format!("unknown verdict {s:?}"))),
        }
    }
}

/// Distinguishable iff the raw prediction is below `min(n, C(rm+1, 2))`.
pub fn verdict(bound: &Bound, random_expected: usize) -> Verdict {
    if bound.raw < random_expected as i128 {
        Verdict::Distinguishable
    } else {
        Verdict::NotDistinguishable
    }
}

/// `dim (C^perp)^2`.
pub fn measure_square_dual_dim(c: &LinearCode) -> usize {
    c.dual().square().dim()
}

/// Whether the `L_p` unknowns include the diagonal `Z_jj`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Diagonal {
    Off,
    On,
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagonal::Off => "off",
            Diagonal::On => "on",
        })
    }
}

impl FromStr for Diagonal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Diagonal> {
        match s {
            "off" => Ok(Diagonal::Off),
            "on" => Ok(Diagonal::On),
            _ => Err(Error::Parse(format!("unknown diagonal convention {s:?}"))),
        }
    }
}

/// The convention under which `C(dim C^perp + 1, 2) - D = dim (C^perp)^2`.
pub const LP_CONVENTION: Diagonal = Diagonal::Off;

/// `L_p` in systematic coordinates.
#[derive(Clone, Debug)]
pub struct LpSystem {
    /// One row per generator `p_i`, one column per unknown `Z_{jj'}`.
    pub matrix: FMatrix,
    /// Column order putting the information set first; the identity when the first
    /// `k` columns are already independent.
    pub permutation: Vec<usize>,
    /// Pairs `(j, j')` in the permuted coordinates, one per column of `matrix`.
    pub unknowns: Vec<(usize, usize)>,
}

impl LpSystem {
    /// `dim ker`, the number of unknowns minus the rank.
    pub fn kernel_dim(&self) -> usize {
        self.unknowns.len() - self.matrix.rank()
    }
}

/// Builds `L_p` from the systematic generator `(I_k | P)` of `C`. Any reduced
/// generator is systematic up to moving its pivot columns to the front.
pub fn build_lp_system(c: &LinearCode, diagonal: Diagonal) -> Result<LpSystem> {
    let g = c.generator();
    let rref = g.rref();
    let (k, n) = (c.dim(), c.len());
    if rref.rank != g.rows() {
        return Err(Error::NotSystematizable { rank: rref.rank, rows: g.rows() });
    }
    let pivots = rref.pivots;
    let mut permutation = pivots.clone();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    permutation.extend(&free);

    let mut unknowns = Vec::new();
    let mut cols = Vec::new();
    for a in 0..free.len() {
        let start = if diagonal == Diagonal::On { a } else { a + 1 };
        for b in start..free.len() {
            unknowns.push((k + a, k + b));
            cols.push((free[a], free[b]));
        }
    }
    let f = c.ctx();
    let mut data = Vec::with_capacity(k * cols.len());
    for i in 0..k {
        let row = rref.matrix.row(i);
        data.extend(cols.iter().map(|&(j, jj)| f.mul(row[j], row[jj])));
    }
    let matrix = FMatrix::new(f, k, cols.len(), data)?;
    Ok(LpSystem { matrix, permutation, unknowns })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mp12Check {
    pub dual_dim: usize,
    pub d_off: usize,
    pub d_on: usize,
    /// Square dimension of the dual by direct construction.
    pub measured: usize,
    /// `D` under the reported convention.
    pub d: usize,
    /// `C(dual_dim + 1, 2) - d`.
    pub lhs: i64,
    pub consistent: bool,
    pub convention: Diagonal,
}

/// Compares `C(dim C^perp + 1, 2) - D` with the measured square dimension under both
/// conventions. `convention` is [`LP_CONVENTION`] if it matches, else the other one if
/// that matches.
pub fn mp12_check(c: &LinearCode) -> Result<Mp12Check> {
    let dual_dim = c.len() - c.dim();
    let d_off = build_lp_system(c, Diagonal::Off)?.kernel_dim();
    let d_on = build_lp_system(c, Diagonal::On)?.kernel_dim();
    let measured = measure_square_dual_dim(c);
    let total = binom2(dual_dim as u64 + 1) as i64;
    let holds = |d: usize| total - d as i64 == measured as i64;
    let (convention, d) = match (holds(d_off), holds(d_on)) {
        (true, _) => (Diagonal::Off, d_off),
        (false, true) => (Diagonal::On, d_on),
        (false, false) => (LP_CONVENTION, d_off),
    };
    Ok(Mp12Check {
        dual_dim,
        d_off,
        d_on,
        measured,
        d,
        lhs: total - d as i64,
        consistent: holds(d),
        convention,
    })
}

/// `1 - rm/n` to five decimals, rounded half up.
pub fn format_rate(n: usize, r: usize, m: u32) -> String {
    let (n, k) = (n as u128, n as u128 - r as u128 * m as u128);
    let scaled = (k * 200_000 + n) / (2 * n);
    format!("{}.{:05}", scaled / 100_000, scaled % 100_000)
}

/// Largest `r >= 2` with `rm < n` whose Goppa bound is below `n`, and its rate.
pub fn largest_distinguishable_r(n: usize, m: u32, q: u32) -> Result<Option<(usize, String)>> {
    let mut best = None;
    let mut r = 2;
    while r * (m as usize) < n {
        if bound_goppa(q, m, n, r)?.raw < n as i128 {
            best = Some(r);
        }
        r += 1;
    }
    Ok(best.map(|r| (r, format_rate(n, r, m))))
}
