//! Exact arithmetic in finite fields `F_{p^s}`.
//!
//! An element is a `u32` index: the coefficient vector `(c_0, ..., c_{s-1})` of its
//! polynomial-basis representation read as the base-`p` integer `c_0 + c_1 p + ...`.
//! This is also the encoding used in code files. Multiplication, inversion and Frobenius
//! powers go through exp/log tables built once per context.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// A field element, as its polynomial-basis index inside a [`FieldCtx`].
pub type Elem = u32;

const MAX_FIELD_BITS: u32 = 24;
const NO_ZECH: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Prime,
    Binary,
    OddExtension,
}

pub struct FieldCtx {
    p: u32,
    s: u32,
    size: u32,
    modulus: Vec<u32>,
    kind: Kind,
    /// `exp[i] = g^i` for `i < 2 * order`, so sums of two logs never need reducing.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, odd extension fields only.
    zech: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.descriptor())
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Splits a prime power `q` into `(p, a)` with `q = p^a`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut a) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

impl FieldCtx {
    /// Builds `F_{p^s}`. Without an explicit modulus the lexicographically smallest monic
    /// irreducible polynomial is used, so contexts are reproducible.
    pub fn new(p: u32, s: u32, modulus: Option<Vec<u32>>) -> Result<Arc<FieldCtx>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let size = (p as u64)
            .checked_pow(s)
            .filter(|&v| v <= 1u64 << MAX_FIELD_BITS)
            .ok_or(Error::FieldTooLarge { p, s })? as u32;
        let modulus = match modulus {
            Some(mut m) => {
                for c in m.iter_mut() {
                    *c %= p;
                }
                while m.last() == Some(&0) {
                    m.pop();
                }
                let found = m.len().saturating_sub(1);
                if found != s as usize {
                    return Err(Error::DegreeMismatch { expected: s as usize, found });
                }
                if m[s as usize] != 1 {
                    return Err(Error::NotMonic);
                }
                if s > 1 && !Self::irreducible_over_prime(p, &m) {
                    return Err(Error::ReducibleModulus { p });
                }
                m
            }
            None if s == 1 => vec![0, 1],
            None => Self::smallest_irreducible(p, s),
        };
        Ok(Arc::new(Self::build(p, s, size, modulus)))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<FieldCtx>> {
        Self::new(p, 1, None)
    }

    fn irreducible_over_prime(p: u32, modulus: &[u32]) -> bool {
        let fp = Arc::new(Self::build(p, 1, p, vec![0, 1]));
        Poly::new(&fp, modulus.to_vec()).is_irreducible()
    }

    fn smallest_irreducible(p: u32, s: u32) -> Vec<u32> {
        let fp = Arc::new(Self::build(p, 1, p, vec![0, 1]));
        let lower = p.pow(s);
        (0..lower)
            .map(|code| {
                let mut coeffs = fp.digits_of(code, s as usize, p);
                coeffs.push(1);
                coeffs
            })
            .find(|c| Poly::new(&fp, c.clone()).is_irreducible())
            .expect("an irreducible polynomial of every degree exists")
    }

    fn build(p: u32, s: u32, size: u32, modulus: Vec<u32>) -> FieldCtx {
        let kind = match (p, s) {
            (_, 1) => Kind::Prime,
            (2, _) => Kind::Binary,
            _ => Kind::OddExtension,
        };
        let mut ctx = FieldCtx {
            p,
            s,
            size,
            modulus,
            kind,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
        };
        let order = (size - 1) as u64;
        let factors = prime_factors(order);
        let g = (1..size)
            .find(|&c| factors.iter().all(|&l| ctx.raw_pow(c, order / l) != 1))
            .expect("multiplicative group is cyclic");
        let order = order as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; size as usize];
        let mut e = 1u32;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = e;
            log[e as usize] = i as u32;
            e = ctx.raw_mul(e, g);
        }
        exp.copy_within(0..order, order);
        ctx.exp = exp;
        ctx.log = log;
        if kind == Kind::OddExtension {
            ctx.zech = (0..order)
                .map(|d| {
                    let v = ctx.raw_add(1, ctx.exp[d]);
                    if v == 0 {
                        NO_ZECH
                    } else {
                        ctx.log[v as usize]
                    }
                })
                .collect();
        }
        ctx
    }

    fn digits_of(&self, mut v: u32, len: usize, p: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(v % p);
            v /= p;
        }
        out
    }

    fn raw_add(&self, a: u32, b: u32) -> u32 {
        let da = self.digits(a);
        let db = self.digits(b);
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&sum)
    }

    /// Schoolbook multiplication modulo the modulus; only used while building tables.
    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        let s = self.s as usize;
        if self.p == 2 {
            let mut acc: u64 = 0;
            for i in 0..s {
                if (b >> i) & 1 == 1 {
                    acc ^= (a as u64) << i;
                }
            }
            let modbits: u64 = self
                .modulus
                .iter()
                .enumerate()
                .fold(0, |m, (i, &c)| m | ((c as u64) << i));
            for i in (s..2 * s).rev() {
                if (acc >> i) & 1 == 1 {
                    acc ^= modbits << (i - s);
                }
            }
            return acc as u32;
        }
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * s];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (s..2 * s).rev() {
            let c = prod[i];
            if c != 0 {
                for (j, &mc) in self.modulus.iter().enumerate().take(s) {
                    let k = i - s + j;
                    prod[k] = (prod[k] + (p - c) * mc as u64) % p;
                }
                prod[i] = 0;
            }
        }
        let d: Vec<u32> = prod[..s].iter().map(|&v| v as u32).collect();
        self.from_digits(&d)
    }

    fn raw_pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut acc, mut base) = (1u32, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Number of elements `p^s`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.size - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.kind == Kind::Prime
    }

    /// Structural equality: same characteristic, degree and modulus.
    pub fn same_field(&self, other: &FieldCtx) -> bool {
        std::ptr::eq(self, other)
            || (self.p == other.p && self.s == other.s && self.modulus == other.modulus)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x < self.size
    }

    /// The fixed primitive element used for the log tables.
    pub fn primitive(&self) -> Elem {
        self.exp[1 % self.exp.len().max(1)]
    }

    /// The class of the indeterminate, i.e. a root of the modulus.
    pub fn root_of_modulus(&self) -> Elem {
        if self.s == 1 {
            self.neg(self.modulus[0])
        } else {
            self.p
        }
    }

    /// `g^i` for the fixed primitive element `g`.
    pub fn exp_of(&self, i: u64) -> Elem {
        self.exp[(i % self.order() as u64) as usize]
    }

    /// Discrete log of a nonzero element with respect to [`FieldCtx::primitive`].
    pub fn log_of(&self, x: Elem) -> u32 {
        assert!(x != 0, "log of zero");
        self.log[x as usize]
    }

    pub fn digits(&self, x: Elem) -> Vec<u32> {
        self.digits_of(x, self.s as usize, self.p)
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.kind {
            Kind::Binary => a ^ b,
            Kind::Prime => {
                let t = a + b;
                if t >= self.p {
                    t - self.p
                } else {
                    t
                }
            }
            Kind::OddExtension => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let order = self.order();
                let la = self.log[a as usize];
                let lb = self.log[b as usize];
                let d = if lb >= la { lb - la } else { lb + order - la };
                let z = self.zech[d as usize];
                if z == NO_ZECH {
                    0
                } else {
                    self.exp[(la + z) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match self.kind {
            Kind::Binary => a,
            Kind::Prime => {
                if a == 0 {
                    0
                } else {
                    self.p - a
                }
            }
            Kind::OddExtension => {
                if a == 0 {
                    0
                } else {
                    self.exp[(self.log[a as usize] + self.order() / 2) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        match self.kind {
            Kind::Prime => ((a as u64 * b as u64) % self.p as u64) as u32,
            _ => self.exp[(self.log[a as usize] + self.log[b as usize]) as usize],
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let l = self.log[a as usize];
        self.exp[((self.order() - l) % self.order()) as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.order() as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// Prime-field multiple `k * a`.
    pub fn scalar(&self, k: u64, a: Elem) -> Elem {
        let k = (k % self.p as u64) as u32;
        (0..k).fold(0, |acc, _| self.add(acc, a))
    }

    /// Returns `a` such that `q = p^a` and `a | s`.
    pub fn subfield_degree(&self, q: u32) -> Result<u32> {
        match prime_power(q) {
            Some((p, a)) if p == self.p && self.s.is_multiple_of(a) => Ok(a),
            _ => Err(Error::InvalidSubfield(format!(
                "q={q} is not a subfield size of F_{}^{}",
                self.p, self.s
            ))),
        }
    }

    /// `x^{q^i}`, where `q` must be the size of a subfield.
    pub fn frobenius(&self, x: Elem, q: u32, i: u64) -> Result<Elem> {
        self.subfield_degree(q)?;
        Ok(self.frobenius_unchecked(x, q, i))
    }

    pub(crate) fn frobenius_unchecked(&self, x: Elem, q: u32, i: u64) -> Elem {
        if x == 0 {
            return 0;
        }
        let order = self.order() as u64;
        let e = mod_pow(q as u64, i, order);
        let l = (self.log[x as usize] as u64 * e) % order;
        self.exp[l as usize]
    }

    /// `dst[j] -= f * src[j]` for every `j`.
    #[inline]
    pub fn sub_scaled(&self, dst: &mut [Elem], f: Elem, src: &[Elem]) {
        if f == 0 {
            return;
        }
        match self.kind {
            Kind::Prime => {
                let p = self.p as u64;
                let nf = (p - f as u64) % p;
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = ((*d as u64 + nf * s as u64) % p) as u32;
                }
            }
            Kind::Binary => {
                let lf = self.log[f as usize];
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d ^= self.exp[(lf + self.log[s as usize]) as usize];
                    }
                }
            }
            Kind::OddExtension => {
                let nf = self.neg(f);
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = self.add(*d, self.mul(nf, s));
                }
            }
        }
    }

    pub fn scale(&self, row: &mut [Elem], f: Elem) {
        for v in row.iter_mut() {
            *v = self.mul(*v, f);
        }
    }

    /// Textual descriptor `p=<p> s=<s> mod=<c_0,...,c_s>`.
    pub fn descriptor(&self) -> String {
        let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!("p={} s={} mod={}", self.p, self.s, m.join(","))
    }
}

/// Parsed form of a field descriptor, before the field is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub p: u32,
    pub s: u32,
    pub modulus: Vec<u32>,
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<Arc<FieldCtx>> {
        FieldCtx::new(self.p, self.s, Some(self.modulus.clone()))
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut p = None;
        let mut s = None;
        let mut modulus = None;
        for tok in line.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad token '{tok}'")))?;
            let bad = |_| Error::Parse(format!("bad value in '{tok}'"));
            match k {
                "p" => p = Some(v.parse::<u32>().map_err(bad)?),
                "s" => s = Some(v.parse::<u32>().map_err(bad)?),
                "mod" => {
                    modulus = Some(
                        v.split(',')
                            .map(|c| c.parse::<u32>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(bad)?,
                    )
                }
                _ => return Err(Error::Parse(format!("unknown key '{k}'"))),
            }
        }
        match (p, s, modulus) {
            (Some(p), Some(s), Some(modulus)) => Ok(FieldDescriptor { p, s, modulus }),
            _ => Err(Error::Parse(format!("incomplete field descriptor '{line}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_f2() {
        let f = FieldCtx::new(2, 1, None).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.descriptor(), "p=2 s=1 mod=0,1");
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn f16_with_given_modulus() {
        // x^4 + x + 1: no roots in F_2 and not (x^2+x+1)^2 = x^4+x^2+1
        let f = FieldCtx::new(2, 4, Some(vec![1, 1, 0, 0, 1])).unwrap();
        assert_eq!(f.size(), 16);
        // x * x^3 = x^4 = x + 1
        assert_eq!(f.mul(0b0010, 0b1000), 0b0011);
        for a in 1..16 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn default_modulus_is_smallest_irreducible() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);
        let f = FieldCtx::new(3, 2, None).unwrap();
        // x^2+1 is the first monic quadratic without roots mod 3
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn f9_x2_plus_1() {
        for c in 0..3u32 {
            assert_ne!((c * c + 1) % 3, 0);
        }
        let f = FieldCtx::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let x = 3; // digits (0, 1)
        assert_eq!(f.mul(x, x), 2); // x^2 = -1
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldCtx::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(
            FieldCtx::new(2, 2, Some(vec![1, 0, 1])),
            Err(Error::ReducibleModulus { .. })
        ));
        assert!(matches!(
            FieldCtx::new(2, 3, Some(vec![1, 1, 1])),
            Err(Error::DegreeMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            FieldCtx::new(3, 2, Some(vec![1, 0, 2])),
            Err(Error::NotMonic)
        ));
        assert!(matches!(
            FieldCtx::new(2, 25, None),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn frobenius_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        for x in 0..2 {
            assert_eq!(f2.frobenius(x, 2, 5).unwrap(), x);
        }
        let f = FieldCtx::new(2, 4, None).unwrap();
        let g = f.primitive();
        assert_eq!(f.frobenius(g, 2, 0).unwrap(), g);
        assert_eq!(f.frobenius(g, 2, 1).unwrap(), f.mul(g, g));
        assert_eq!(f.frobenius(g, 2, 4).unwrap(), g);
        assert_eq!(f.frobenius(g, 4, 2).unwrap(), g);
        assert!(matches!(f.frobenius(g, 8, 1), Err(Error::InvalidSubfield(_))));
        assert!(matches!(f.frobenius(g, 3, 1), Err(Error::InvalidSubfield(_))));
    }

    #[test]
    fn descriptor_round_trip() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        let d: FieldDescriptor = f.descriptor().parse().unwrap();
        let g = d.build().unwrap();
        assert!(f.same_field(&g));
        assert!("p=3 s=4".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    fn fields() -> Vec<Arc<FieldCtx>> {
        vec![
            FieldCtx::new(2, 1, None).unwrap(),
            FieldCtx::new(5, 1, None).unwrap(),
            FieldCtx::new(2, 6, None).unwrap(),
            FieldCtx::new(3, 3, None).unwrap(),
            FieldCtx::new(5, 2, None).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn field_axioms(which in 0usize..5, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let f = &fields()[which];
            let (a, b, c) = (a % f.size(), b % f.size(), c % f.size());
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            // digit-wise addition is the reference for the table-driven path
            let da = f.digits(a);
            let db = f.digits(b);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % f.p()).collect();
            prop_assert_eq!(f.add(a, b), f.from_digits(&sum));
        }

        #[test]
        fn frobenius_is_automorphism(which in 2usize..5, a in any::<u32>(), b in any::<u32>(), i in 0u64..8) {
            let f = &fields()[which];
            let (a, b) = (a % f.size(), b % f.size());
            let q = f.p();
            let fr = |x| f.frobenius(x, q, i).unwrap();
            prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
            prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
            // repeated p-th powering oracle
            let mut direct = a;
            for _ in 0..i {
                direct = (0..q - 1).fold(direct, |acc, _| f.mul(acc, direct));
            }
            prop_assert_eq!(fr(a), direct);
        }
    }
}
