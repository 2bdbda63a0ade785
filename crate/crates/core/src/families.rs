//! GRS, alternant and Goppa codes, and the dual alternant codes `B_v`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{subfield_subcode_of_parity, LinearCode};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::fmatrix::FMatrix;
use crate::poly::{check_distinct, GoppaFlavor, Poly};
use crate::subfield::SubfieldCtx;

/// Support `x` (pairwise distinct) and multiplier `y` (nonzero) over one field.
#[derive(Clone, Debug)]
pub struct SupportMultiplier {
    ctx: Arc<FieldCtx>,
    x: Vec<Elem>,
    y: Vec<Elem>,
}

impl PartialEq for SupportMultiplier {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx) && self.x == other.x && self.y == other.y
    }
}

impl Eq for SupportMultiplier {}

impl SupportMultiplier {
    pub fn new(ctx: &Arc<FieldCtx>, x: Vec<Elem>, y: Vec<Elem>) -> Result<SupportMultiplier> {
        if x.len() != y.len() {
            return Err(Error::ShapeMismatch(format!("support {} vs multiplier {}", x.len(), y.len())));
        }
        if let Some(&bad) = x.iter().chain(&y).find(|&&v| !ctx.contains(v)) {
            return Err(Error::ElementOutOfRange(bad));
        }
        check_distinct(&x)?;
        if let Some(i) = y.iter().position(|&v| v == 0) {
            return Err(Error::ZeroMultiplier(i));
        }
        Ok(SupportMultiplier { ctx: Arc::clone(ctx), x, y })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn x(&self) -> &[Elem] {
        &self.x
    }

    pub fn y(&self) -> &[Elem] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Same support, multiplier raised entrywise to `e`.
    pub fn with_power(&self, e: u64) -> SupportMultiplier {
        let y = self.y.iter().map(|&v| self.ctx.pow(v, e)).collect();
        SupportMultiplier { ctx: Arc::clone(&self.ctx), x: self.x.clone(), y }
    }

    /// `y^perp_i = 1 / (pi'_x(x_i) y_i)`.
    pub fn dual_multiplier(&self) -> Vec<Elem> {
        let d = Poly::locator_derivative_eval(&self.ctx, &self.x).expect("support already checked");
        d.iter().zip(&self.y).map(|(&a, &b)| self.ctx.inv(self.ctx.mul(a, b))).collect()
    }
}

/// A support together with a Goppa polynomial that does not vanish on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoppaInstance {
    gamma: Poly,
    sm: SupportMultiplier,
}

impl GoppaInstance {
    pub fn new(x: Vec<Elem>, gamma: Poly) -> Result<GoppaInstance> {
        let ctx = Arc::clone(gamma.ctx());
        match gamma.degree() {
            Some(d) if d >= 1 => {}
            _ => return Err(Error::BadDegree("Goppa polynomial needs degree >= 1".into())),
        }
        let vals = gamma.eval_vec(&x)?;
        if let Some(i) = vals.iter().position(|&v| v == 0) {
            return Err(Error::GammaVanishesOnSupport(i));
        }
        let y = vals.iter().map(|&v| ctx.inv(v)).collect();
        Ok(GoppaInstance { sm: SupportMultiplier::new(&ctx, x, y)?, gamma })
    }

    pub fn gamma(&self) -> &Poly {
        &self.gamma
    }

    /// Degree `r` of the Goppa polynomial.
    pub fn r(&self) -> usize {
        self.gamma.degree().expect("nonconstant")
    }

    /// `(x, 1/Gamma(x))`.
    pub fn support_multiplier(&self) -> &SupportMultiplier {
        &self.sm
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Grs,
    Alternant,
    Goppa,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Grs => "grs",
            Family::Alternant => "alternant",
            Family::Goppa => "goppa",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "grs" => Ok(Family::Grs),
            "alternant" => Ok(Family::Alternant),
            "goppa" => Ok(Family::Goppa),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Parameters of one random instance. For `grs` the code lives over `F_{q^m}` and
/// `m = 1` is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub q: u32,
    pub m: u32,
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    pub flavor: GoppaFlavor,
}

impl FamilyParams {
    pub fn validate(&self) -> Result<()> {
        let dom = |msg: String| Err(Error::ParamDomain(msg));
        if crate::field::prime_power(self.q).is_none() {
            return dom(format!("q={} is not a prime power", self.q));
        }
        if self.m == 0 {
            return dom("m must be >= 1".into());
        }
        let size = (self.q as u64).checked_pow(self.m).filter(|&s| s <= 1 << 24);
        let Some(size) = size else {
            return dom(format!("field of size {}^{} is too large", self.q, self.m));
        };
        if self.n == 0 || self.n as u64 > size {
            return dom(format!("need 1 <= n <= q^m = {size}, got n={}", self.n));
        }
        if self.r == 0 {
            return dom("r must be >= 1".into());
        }
        match self.family {
            Family::Grs => {
                if self.r > self.n {
                    return dom(format!("GRS needs r <= n, got r={} n={}", self.r, self.n));
                }
            }
            Family::Alternant | Family::Goppa => {
                if self.m < 2 {
                    return dom("alternant and Goppa codes need m > 1".into());
                }
                if self.r * self.m as usize >= self.n {
                    return dom(format!("need rm < n, got r={} m={} n={}", self.r, self.m, self.n));
                }
            }
        }
        Ok(())
    }

    /// The field the instance lives in, and the extension for alternant/Goppa.
    pub fn fields(&self) -> Result<(Arc<FieldCtx>, Option<Arc<SubfieldCtx>>)> {
        self.validate()?;
        let (p, a) = crate::field::prime_power(self.q).expect("validated");
        if self.family == Family::Grs {
            return Ok((FieldCtx::new(p, a * self.m, None)?, None));
        }
        let sub = SubfieldCtx::from_q_m(self.q, self.m)?;
        Ok((Arc::clone(sub.big()), Some(sub)))
    }
}

/// A sampled instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Grs(SupportMultiplier),
    Alternant(SupportMultiplier),
    Goppa(GoppaInstance),
}

impl Instance {
    pub fn support_multiplier(&self) -> &SupportMultiplier {
        match self {
            Instance::Grs(sm) | Instance::Alternant(sm) => sm,
            Instance::Goppa(g) => g.support_multiplier(),
        }
    }

    /// Archival form: a `family= q= m= n= r= seed=` line, then `x=`, `y=` and (for Goppa)
    /// `gamma=` listings.
    pub fn descriptor(&self, params: &FamilyParams) -> String {
        let join = |v: &[Elem]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        let sm = self.support_multiplier();
        let mut out = format!(
            "family={} q={} m={} n={} r={} seed={}\nx={}\ny={}\n",
            params.family,
            params.q,
            params.m,
            params.n,
            params.r,
            params.seed,
            join(sm.x()),
            join(sm.y())
        );
        if let Instance::Goppa(g) = self {
            out.push_str(&format!("gamma={}\n", join(g.gamma().coeffs())));
        }
        out
    }
}

fn random_support(big: &Arc<FieldCtx>, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Elem>> {
    let size = big.size() as usize;
    if n > size {
        return Err(Error::ParamDomain(format!("support of length {n} in a field of size {size}")));
    }
    Ok(sample(rng, size, n).into_iter().map(|v| v as Elem).collect())
}

/// Support of `n` distinct elements and a uniform nonzero multiplier.
pub fn random_support_multiplier(big: &Arc<FieldCtx>, n: usize, seed: u64) -> Result<SupportMultiplier> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_support(big, n, &mut rng)?;
    let y = (0..n).map(|_| rng.gen_range(1..big.size())).collect();
    SupportMultiplier::new(big, x, y)
}

/// Support of `n` distinct elements and a degree-`r` Goppa polynomial of the given
/// flavor, redrawn until it has no root on the support.
pub fn random_goppa(big: &Arc<FieldCtx>, n: usize, r: usize, flavor: GoppaFlavor, seed: u64) -> Result<GoppaInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_support(big, n, &mut rng)?;
    loop {
        let gamma = Poly::random_goppa_poly(big, r, flavor, &mut rng)?;
        match GoppaInstance::new(x.clone(), gamma) {
            Err(Error::GammaVanishesOnSupport(_)) => continue,
            res => return res,
        }
    }
}

/// Samples an instance deterministically from `params.seed`.
pub fn sample_instance(params: &FamilyParams, big: &Arc<FieldCtx>) -> Result<Instance> {
    params.validate()?;
    if big.size() as u64 != (params.q as u64).pow(params.m) {
        return Err(Error::ParamDomain(format!("field of size {} does not match q^m", big.size())));
    }
    Ok(match params.family {
        Family::Grs => Instance::Grs(random_support_multiplier(big, params.n, params.seed)?),
        Family::Alternant => Instance::Alternant(random_support_multiplier(big, params.n, params.seed)?),
        Family::Goppa => Instance::Goppa(random_goppa(big, params.n, params.r, params.flavor, params.seed)?),
    })
}

/// Generator matrix `(y_i x_i^a)` for `0 <= a < r`, not reduced.
pub fn grs_generator(r: usize, sm: &SupportMultiplier) -> FMatrix {
    let f = sm.ctx();
    let n = sm.len();
    let mut data = Vec::with_capacity(r * n);
    let mut cur: Vec<Elem> = sm.y().to_vec();
    for a in 0..r {
        if a > 0 {
            for (c, &x) in cur.iter_mut().zip(sm.x()) {
                *c = f.mul(*c, x);
            }
        }
        data.extend_from_slice(&cur);
    }
    FMatrix::from_raw(f, r, n, data)
}

/// `GRS_r(x, y)`.
pub fn grs(r: usize, sm: &SupportMultiplier) -> Result<LinearCode> {
    if r == 0 || r > sm.len() {
        return Err(Error::BadDegree(format!("GRS needs 1 <= r <= n, got r={r} n={}", sm.len())));
    }
    Ok(LinearCode::from_generator(&grs_generator(r, sm)))
}

fn check_sub(sm: &SupportMultiplier, sub: &SubfieldCtx) -> Result<()> {
    if sm.ctx().same_field(sub.big()) {
        Ok(())
    } else {
        Err(Error::CtxMismatch)
    }
}

/// `Alt_r(x, y) = GRS_r(x, y)^perp ∩ F_q^n`, requiring `rm < n`.
pub fn alternant(r: usize, sm: &SupportMultiplier, sub: &SubfieldCtx) -> Result<LinearCode> {
    check_sub(sm, sub)?;
    if sub.m() < 2 {
        return Err(Error::ParamDomain("alternant codes need m > 1".into()));
    }
    if r == 0 || r * sub.m() as usize >= sm.len() {
        return Err(Error::ParamDomain(format!("need 1 <= r and rm < n, got r={r} m={} n={}", sub.m(), sm.len())));
    }
    subfield_subcode_of_parity(&grs_generator(r, sm), sub)
}

/// `Alt_k(x, y)^perp` for any `k >= 1`. Returns the code and whether it saturated to the
/// full space because `k >= n`.
pub fn dual_alternant(k: usize, sm: &SupportMultiplier, sub: &SubfieldCtx) -> Result<(LinearCode, bool)> {
    check_sub(sm, sub)?;
    let n = sm.len();
    if k == 0 {
        return Err(Error::ParamDomain("degree argument must be >= 1".into()));
    }
    if k >= n {
        return Ok((LinearCode::full(sub.small(), n), true));
    }
    Ok((subfield_subcode_of_parity(&grs_generator(k, sm), sub)?.dual(), false))
}

/// Goppa code `Gamma(x)`, i.e. `Alt_r(x, 1/Gamma(x))`.
pub fn goppa(gi: &GoppaInstance, sub: &SubfieldCtx) -> Result<LinearCode> {
    alternant(gi.r(), gi.support_multiplier(), sub)
}

/// Degree argument of `B_v`: `2r - 1` for `v = 0`, else `r(q^v - q^{v-1} + 1)`.
pub fn b_degree(r: usize, q: u32, v: u32) -> usize {
    if v == 0 {
        2 * r - 1
    } else {
        let q = q as usize;
        r * (q.pow(v) - q.pow(v - 1) + 1)
    }
}

/// `B_v` of a Goppa instance, with the saturation flag of [`dual_alternant`].
pub fn b_code(v: u32, gi: &GoppaInstance, sub: &SubfieldCtx) -> Result<(LinearCode, bool)> {
    let q = sub.q();
    let e = if v == 0 { 2 } else { (q as u64).pow(v) + 1 };
    let sm = gi.support_multiplier().with_power(e);
    dual_alternant(b_degree(gi.r(), q, v), &sm, sub)
}

/// `Tr(C ⋆ C^{q^u})`.
pub fn trace_product_code(c: &LinearCode, u: u32, sub: &SubfieldCtx) -> Result<LinearCode> {
    let twisted = c.frobenius(sub.q(), u as u64)?;
    c.star_product(&twisted)?.trace_code(sub)
}
