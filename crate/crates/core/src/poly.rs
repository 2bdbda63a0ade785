//! Dense univariate polynomials over a [`FieldCtx`].

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{prime_factors, Elem, FieldCtx};

/// Coefficients are stored constant term first with no trailing zeros, so the zero
/// polynomial is the empty list.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

/// Comma-separated coefficient list, constant term first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoppaFlavor {
    Irreducible,
    Squarefree,
    #[serde(alias = "any")]
    Unrestricted,
}

impl std::str::FromStr for GoppaFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "irreducible" => Ok(Self::Irreducible),
            "squarefree" => Ok(Self::Squarefree),
            "any" | "unrestricted" => Ok(Self::Unrestricted),
            _ => Err(Error::Parse(format!("unknown Goppa flavor '{s}'"))),
        }
    }
}

impl Poly {
    pub fn new(ctx: &Arc<FieldCtx>, mut coeffs: Vec<Elem>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| ctx.contains(c)));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { ctx: Arc::clone(ctx), coeffs }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::new(ctx, Vec::new())
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: Elem) -> Poly {
        Poly::new(ctx, vec![c])
    }

    /// `c * z^d`.
    pub fn monomial(ctx: &Arc<FieldCtx>, c: Elem, d: usize) -> Poly {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Poly::new(ctx, coeffs)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check_ctx(&self, other: &Poly) -> Result<()> {
        if self.ctx.same_field(&other.ctx) {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    fn same(&self, other: &Poly) {
        assert!(self.ctx.same_field(&other.ctx), "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same(other);
        let f = &self.ctx;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(a, b)
            })
            .collect();
        Poly::new(f, c)
    }

    pub fn neg(&self) -> Poly {
        let c = self.coeffs.iter().map(|&a| self.ctx.neg(a)).collect();
        Poly::new(&self.ctx, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: Elem) -> Poly {
        let c = self.coeffs.iter().map(|&a| self.ctx.mul(a, k)).collect();
        Poly::new(&self.ctx, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let f = &self.ctx;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::constant(&self.ctx, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.ctx;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.scalar(i as u64, a))
            .collect();
        Poly::new(f, c)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.ctx;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Componentwise evaluation at every entry of `xs`.
    pub fn eval_vec(&self, xs: &[Elem]) -> Result<Vec<Elem>> {
        if let Some(&bad) = xs.iter().find(|&&x| !self.ctx.contains(x)) {
            return Err(Error::ElementOutOfRange(bad));
        }
        Ok(xs.iter().map(|&x| self.eval(x)).collect())
    }

    /// Euclidean division: `self = quotient * divisor + remainder`, `deg remainder < deg divisor`.
    pub fn euclid_div(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_ctx(divisor)?;
        let ds = divisor.degree().ok_or(Error::DivisionByZeroPoly)?;
        let f = &self.ctx;
        if self.coeffs.len() <= ds {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lead = f.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - ds];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + ds], inv_lead);
            quot[i] = c;
            if c != 0 {
                f.sub_scaled(&mut rem[i..=i + ds], c, &divisor.coeffs);
            }
        }
        rem.truncate(ds);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.euclid_div(divisor).expect("nonzero divisor").1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.ctx.inv(self.leading()))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut acc = Poly::constant(&self.ctx, 1).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Squarefreeness via `gcd(P, P')`. A nonconstant `P` with `P' = 0` is a `p`-th power
    /// and therefore never squarefree.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                if d.is_zero() {
                    return false;
                }
                self.gcd(&d).degree() == Some(0)
            }
        }
    }

    /// Deterministic irreducibility test over the coefficient field `F_Q`:
    /// `z^{Q^d} = z mod P` and `gcd(z^{Q^{d/l}} - z, P) = 1` for each prime `l | d`.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let f = &self.ctx;
        let z = Poly::monomial(f, 1, 1);
        let q = f.size() as u64;
        // frob[k] = z^{Q^k} mod P
        let mut frob = Vec::with_capacity(d + 1);
        frob.push(z.rem(self));
        for k in 1..=d {
            let next = frob[k - 1].pow_mod(q, self);
            frob.push(next);
        }
        if frob[d] != z.rem(self) {
            return false;
        }
        prime_factors(d as u64).into_iter().all(|l| {
            let h = frob[d / l as usize].sub(&z);
            self.gcd(&h).degree() == Some(0)
        })
    }

    /// `pi_x(z) = prod (z - x_i)`; the support must be pairwise distinct.
    pub fn locator(ctx: &Arc<FieldCtx>, xs: &[Elem]) -> Result<Poly> {
        check_distinct(xs)?;
        let mut acc = Poly::constant(ctx, 1);
        for &x in xs {
            acc = acc.mul(&Poly::new(ctx, vec![ctx.neg(x), 1]));
        }
        Ok(acc)
    }

    /// `(pi'_x(x_1), ..., pi'_x(x_n))`.
    pub fn locator_derivative_eval(ctx: &Arc<FieldCtx>, xs: &[Elem]) -> Result<Vec<Elem>> {
        let d = Poly::locator(ctx, xs)?.derivative();
        Ok(xs.iter().map(|&x| d.eval(x)).collect())
    }

    /// One reduction step on `Tr(P(x) / Gamma(x)^{q^v+1})`: divide `P` by
    /// `Gamma^{q^v - q^{v-1} + 1}` to get `(A, B)` and return `(A^q * Gamma, B)`.
    pub fn goppa_reduction_step(&self, gamma: &Poly, v: u32, q: u32) -> Result<(Poly, Poly)> {
        self.check_ctx(gamma)?;
        if gamma.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        if v == 0 {
            return Err(Error::ParamDomain("reduction step needs v >= 1".into()));
        }
        let q = q as u64;
        let e = q.pow(v) - q.pow(v - 1) + 1;
        let divisor = gamma.pow(e);
        let (a, b) = self.euclid_div(&divisor)?;
        let next = if a.is_zero() {
            a
        } else {
            a.pow(q).mul(gamma)
        };
        Ok((next, b))
    }

    /// Monic polynomial of degree `r` drawn uniformly and rejected until it has the
    /// requested flavor.
    pub fn random_goppa_poly<R: Rng + ?Sized>(
        ctx: &Arc<FieldCtx>,
        r: usize,
        flavor: GoppaFlavor,
        rng: &mut R,
    ) -> Result<Poly> {
        if r == 0 {
            return Err(Error::BadDegree("Goppa polynomial needs degree >= 1".into()));
        }
        loop {
            let mut c: Vec<Elem> = (0..r).map(|_| rng.gen_range(0..ctx.size())).collect();
            c.push(1);
            let cand = Poly::new(ctx, c);
            let ok = match flavor {
                GoppaFlavor::Irreducible => cand.is_irreducible(),
                GoppaFlavor::Squarefree => cand.is_squarefree(),
                GoppaFlavor::Unrestricted => true,
            };
            if ok {
                return Ok(cand);
            }
        }
    }
}

pub(crate) fn check_distinct(xs: &[Elem]) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        if !seen.insert(x) {
            return Err(Error::RepeatedSupport(i));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Arc<FieldCtx> {
        FieldCtx::prime(2).unwrap()
    }

    #[test]
    fn eval_vec_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        let one = Poly::constant(&f3, 1);
        assert_eq!(one.eval_vec(&[0, 1, 2]).unwrap(), vec![1, 1, 1]);
        let z = Poly::monomial(&f3, 1, 1);
        assert_eq!(z.eval_vec(&[0, 1, 2]).unwrap(), vec![0, 1, 2]);
        let p = Poly::new(&f3, vec![1, 0, 1]);
        assert_eq!(p.eval_vec(&[0, 1, 2]).unwrap(), vec![1, 2, 2]);
        assert!(matches!(p.eval_vec(&[3]), Err(Error::ElementOutOfRange(3))));
    }

    #[test]
    fn locator_examples() {
        let f = f2();
        let pi = Poly::locator(&f, &[0]).unwrap();
        assert_eq!(pi.coeffs(), &[0, 1]);
        assert_eq!(Poly::locator_derivative_eval(&f, &[0]).unwrap(), vec![1]);
        let pi = Poly::locator(&f, &[0, 1]).unwrap();
        assert_eq!(pi.coeffs(), &[0, 1, 1]);
        assert_eq!(Poly::locator_derivative_eval(&f, &[0, 1]).unwrap(), vec![1, 1]);
        assert!(matches!(
            Poly::locator(&f, &[1, 0, 1]),
            Err(Error::RepeatedSupport(2))
        ));
    }

    #[test]
    fn locator_derivative_matches_product_form() {
        let f8 = FieldCtx::new(2, 3, None).unwrap();
        let xs = [1, 3, 4, 6, 7];
        let got = Poly::locator_derivative_eval(&f8, &xs).unwrap();
        for (i, &xi) in xs.iter().enumerate() {
            let prod = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(1, |acc, (_, &xj)| f8.mul(acc, f8.sub(xi, xj)));
            assert_eq!(got[i], prod);
            assert_ne!(got[i], 0);
        }
        let pi = Poly::locator(&f8, &xs).unwrap();
        assert!(pi.eval_vec(&xs).unwrap().iter().all(|&v| v == 0));
    }

    #[test]
    fn euclid_div_examples() {
        let f = f2();
        let s = Poly::new(&f, vec![1, 1, 1]);
        let (a, b) = s.euclid_div(&s).unwrap();
        assert_eq!(a, Poly::constant(&f, 1));
        assert!(b.is_zero());
        let small = Poly::new(&f, vec![1, 1]);
        let (a, b) = small.euclid_div(&s).unwrap();
        assert!(a.is_zero());
        assert_eq!(b, small);
        let p = Poly::new(&f, vec![1, 0, 0, 0, 0, 1]);
        let (a, b) = p.euclid_div(&s).unwrap();
        assert_eq!(a.mul(&s).add(&b), p);
        assert!(b.degree().unwrap_or(0) < 2);
        assert!(matches!(
            p.euclid_div(&Poly::zero(&f)),
            Err(Error::DivisionByZeroPoly)
        ));
    }

    #[test]
    fn squarefree_and_irreducible_examples() {
        let f = f2();
        let f5 = FieldCtx::prime(5).unwrap();
        assert!(!Poly::monomial(&f, 1, 2).is_squarefree());
        assert!(!Poly::monomial(&f5, 1, 2).is_squarefree());
        assert!(Poly::new(&f, vec![1, 1, 1]).is_irreducible());
        // z^4 + z^2 has zero derivative in characteristic 2
        let p = Poly::new(&f, vec![0, 0, 1, 0, 1]);
        assert!(p.derivative().is_zero());
        assert!(!p.is_squarefree());
        // (z^2+z+1)^2 = z^4+z^2+1 is not irreducible although it has no roots
        let sq = Poly::new(&f, vec![1, 0, 1, 0, 1]);
        assert!(!sq.is_irreducible());
        assert!(Poly::new(&f, vec![1, 1, 0, 0, 1]).is_irreducible());
        assert!(Poly::new(&f5, vec![2, 0, 1]).is_irreducible()); // z^2 + 2, 2 is a non-residue mod 5
        assert!(!Poly::new(&f5, vec![1, 0, 1]).is_irreducible()); // z^2 + 1 = (z-2)(z-3)
    }

    /// Brute-force irreducibility by trial division with every monic polynomial of
    /// degree at most `deg / 2`.
    fn irreducible_by_search(p: &Poly) -> bool {
        let d = p.degree().unwrap();
        let f = p.ctx();
        let q = f.size() as usize;
        for k in 1..=d / 2 {
            for code in 0..q.pow(k as u32) {
                let mut c: Vec<Elem> = (0..k).map(|i| ((code / q.pow(i as u32)) % q) as Elem).collect();
                c.push(1);
                if p.rem(&Poly::new(f, c)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn irreducibility_agrees_with_trial_division() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let f3 = FieldCtx::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in [&f4, &f3] {
            for deg in 2..=5 {
                for _ in 0..20 {
                    let mut c: Vec<Elem> = (0..deg).map(|_| rng.gen_range(0..f.size())).collect();
                    c.push(1);
                    let p = Poly::new(f, c);
                    assert_eq!(p.is_irreducible(), irreducible_by_search(&p), "{p}");
                }
            }
        }
    }

    #[test]
    fn reduction_step_trivial_case() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        let gamma = Poly::new(&f, vec![1, 1, 0, 1]);
        let p = Poly::new(&f, vec![3, 5, 7]);
        let (next, rem) = p.goppa_reduction_step(&gamma, 1, 2).unwrap();
        assert!(next.is_zero());
        assert_eq!(rem, p);
    }

    #[test]
    fn reduction_step_degree_drops() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gamma = Poly::random_goppa_poly(&f, 3, GoppaFlavor::Irreducible, &mut rng).unwrap();
        let mut c: Vec<Elem> = (0..7).map(|_| rng.gen_range(0..16)).collect();
        c.push(1);
        let p = Poly::new(&f, c);
        let (next, _) = p.goppa_reduction_step(&gamma, 1, 2).unwrap();
        assert!(!next.is_zero());
        assert!(next.degree().unwrap() < 7);
    }

    #[test]
    fn random_goppa_poly_flavors() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        for (seed, flavor) in [(1, GoppaFlavor::Irreducible), (2, GoppaFlavor::Squarefree)] {
            let mut r1 = ChaCha8Rng::seed_from_u64(seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(seed);
            let a = Poly::random_goppa_poly(&f, 4, flavor, &mut r1).unwrap();
            let b = Poly::random_goppa_poly(&f, 4, flavor, &mut r2).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.degree(), Some(4));
            assert!(a.is_monic());
            assert!(a.is_squarefree());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(Poly::random_goppa_poly(&f, 0, GoppaFlavor::Unrestricted, &mut rng).is_err());
    }

    #[test]
    fn display_is_coefficient_list() {
        let f = FieldCtx::prime(3).unwrap();
        assert_eq!(Poly::new(&f, vec![1, 0, 2]).to_string(), "1,0,2");
        assert_eq!(Poly::zero(&f).to_string(), "");
    }

    fn arb_poly(f: Arc<FieldCtx>, max_len: usize) -> impl Strategy<Value = Poly> {
        let size = f.size();
        proptest::collection::vec(0..size, 0..max_len).prop_map(move |c| Poly::new(&f, c))
    }

    proptest! {
        #[test]
        fn euclid_recombines(
            p in arb_poly(FieldCtx::new(3, 2, None).unwrap(), 12),
            s in arb_poly(FieldCtx::new(3, 2, None).unwrap(), 6),
        ) {
            prop_assume!(!s.is_zero());
            let (a, b) = p.euclid_div(&s).unwrap();
            prop_assert_eq!(a.mul(&s).add(&b), p);
            prop_assert!(b.degree().is_none_or(|d| d < s.degree().unwrap()));
        }

        #[test]
        fn degree_is_additive(
            a in arb_poly(FieldCtx::new(2, 5, None).unwrap(), 8),
            b in arb_poly(FieldCtx::new(2, 5, None).unwrap(), 8),
        ) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(a.mul(&b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }
    }
}
