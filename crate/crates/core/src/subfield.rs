//! The extension `F_{q^m} / F_q` inside a single field context.
//!
//! `F_q` is the fixed field of `x -> x^q` in the big field. Codes over `F_q` are stored
//! over a standalone context for `F_q` (so `F_2` codes get the bit-packed backend); the
//! embedding between the two is fixed at construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::fmatrix::FMatrix;

pub struct SubfieldCtx {
    big: Arc<FieldCtx>,
    small: Arc<FieldCtx>,
    q: u32,
    a: u32,
    m: u32,
    /// `alpha_j = w^j` where `w` is the root of the big modulus.
    basis: Vec<Elem>,
    /// Small index to big index.
    embed: Vec<Elem>,
    project: HashMap<Elem, Elem>,
    /// Inverse of the `F_p`-matrix whose column `j*a + k` holds the digits of
    /// `beta^k * alpha_j`, with `beta` the image of the small generator.
    coord_inv: Vec<u32>,
}

impl fmt::Debug for SubfieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubfieldCtx(q={} m={} big={})", self.q, self.m, self.big.descriptor())
    }
}

impl SubfieldCtx {
    /// `big` viewed as a degree-`m` extension of its subfield with `p^a` elements.
    pub fn new(big: &Arc<FieldCtx>, a: u32) -> Result<Arc<SubfieldCtx>> {
        let s = big.s();
        if a == 0 || !s.is_multiple_of(a) {
            return Err(Error::InvalidSubfield(format!("degree {a} does not divide {s}")));
        }
        let m = s / a;
        if m < 2 {
            return Err(Error::InvalidSubfield("extension degree m must be > 1".into()));
        }
        let p = big.p();
        let q = p.pow(a);
        let small = FieldCtx::new(p, a, None)?;

        let beta = if a == 1 {
            // constants embed as themselves
            0
        } else {
            let step = (big.order() / (q - 1)) as u64;
            let small_mod: Vec<Elem> = small.modulus().to_vec();
            (0..(q - 1) as u64)
                .map(|j| big.exp_of(j * step))
                .find(|&cand| {
                    small_mod
                        .iter()
                        .rev()
                        .fold(0, |acc, &c| big.add(big.mul(acc, cand), c))
                        == 0
                })
                .expect("the subfield contains a root of its own modulus")
        };
        let embed: Vec<Elem> = (0..q)
            .map(|t| {
                if a == 1 {
                    t
                } else {
                    small
                        .digits(t)
                        .iter()
                        .rev()
                        .fold(0, |acc, &d| big.add(big.mul(acc, beta), d))
                }
            })
            .collect();
        let project = embed.iter().enumerate().map(|(i, &b)| (b, i as Elem)).collect();

        let w = big.root_of_modulus();
        let basis: Vec<Elem> = (0..m as u64).map(|j| big.pow(w, j)).collect();

        let fp = FieldCtx::prime(p)?;
        let sdim = s as usize;
        let mut cols = Vec::with_capacity(sdim);
        for &alpha in &basis {
            for k in 0..a {
                let bk = if a == 1 { 1 } else { big.pow(beta, k as u64) };
                cols.push(big.digits(big.mul(bk, alpha)));
            }
        }
        // [M | I] -> [I | M^{-1}]
        let mut aug = vec![0u32; sdim * 2 * sdim];
        for r in 0..sdim {
            for c in 0..sdim {
                aug[r * 2 * sdim + c] = cols[c][r];
            }
            aug[r * 2 * sdim + sdim + r] = 1;
        }
        let red = FMatrix::new(&fp, sdim, 2 * sdim, aug)?.rref();
        if red.rank != sdim || red.pivots.iter().any(|&c| c >= sdim) {
            return Err(Error::InvalidSubfield("basis is not F_q-independent".into()));
        }
        let coord_inv = red.matrix.submatrix(0..sdim, sdim..2 * sdim)?.data().to_vec();

        let sub = SubfieldCtx { big: Arc::clone(big), small, q, a, m, basis, embed, project, coord_inv };
        if sub.gram_matrix().rank() != m as usize {
            return Err(Error::InvalidSubfield("trace form is degenerate on the basis".into()));
        }
        Ok(Arc::new(sub))
    }

    /// Builds `F_{q^m}` with its default modulus and the subfield `F_q`.
    pub fn from_q_m(q: u32, m: u32) -> Result<Arc<SubfieldCtx>> {
        let (p, a) = crate::field::prime_power(q)
            .ok_or_else(|| Error::InvalidSubfield(format!("q={q} is not a prime power")))?;
        let big = FieldCtx::new(p, a * m, None)?;
        SubfieldCtx::new(&big, a)
    }

    pub fn big(&self) -> &Arc<FieldCtx> {
        &self.big
    }

    pub fn small(&self) -> &Arc<FieldCtx> {
        &self.small
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn embed(&self, x: Elem) -> Elem {
        self.embed[x as usize]
    }

    /// Small-field index of a big-field element lying in `F_q`.
    pub fn project(&self, x: Elem) -> Option<Elem> {
        self.project.get(&x).copied()
    }

    /// `x^q = x`.
    pub fn in_subfield(&self, x: Elem) -> bool {
        self.big.frobenius_unchecked(x, self.q, 1) == x
    }

    pub fn frobenius(&self, x: Elem, i: u64) -> Elem {
        self.big.frobenius_unchecked(x, self.q, i)
    }

    /// `Tr(x) = sum_{i<m} x^{q^i}`, as a big-field element.
    pub fn rel_trace(&self, x: Elem) -> Elem {
        let f = &self.big;
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.m {
            acc = f.add(acc, y);
            y = f.frobenius_unchecked(y, self.q, 1);
        }
        acc
    }

    /// The trace as an element of the small context.
    pub fn trace_small(&self, x: Elem) -> Elem {
        let t = self.rel_trace(x);
        self.project(t).expect("trace lands in the subfield")
    }

    /// `Tr(alpha_i alpha_j)` over the small field.
    pub fn gram_matrix(&self) -> FMatrix {
        let m = self.m as usize;
        let data = (0..m * m)
            .map(|k| self.trace_small(self.big.mul(self.basis[k / m], self.basis[k % m])))
            .collect();
        FMatrix::from_raw(&self.small, m, m, data)
    }

    /// Coordinates of `x` in the basis `alpha_0..alpha_{m-1}`, as small-field indices.
    /// Computed by linear algebra over `F_p`, independently of the trace.
    pub fn coordinates(&self, x: Elem) -> Vec<Elem> {
        let p = self.big.p() as u64;
        let s = self.big.s() as usize;
        let d = self.big.digits(x);
        let mut c = vec![0u32; s];
        for (r, out) in c.iter_mut().enumerate() {
            let row = &self.coord_inv[r * s..(r + 1) * s];
            *out = (row.iter().zip(&d).map(|(&u, &v)| u as u64 * v as u64).sum::<u64>() % p) as u32;
        }
        let a = self.a as usize;
        c.chunks(a).map(|ch| self.small.from_digits(ch)).collect()
    }

    /// Inverse of [`SubfieldCtx::coordinates`].
    pub fn from_coordinates(&self, coords: &[Elem]) -> Elem {
        coords.iter().zip(&self.basis).fold(0, |acc, (&c, &alpha)| {
            self.big.add(acc, self.big.mul(self.embed(c), alpha))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn towers() -> Vec<Arc<SubfieldCtx>> {
        vec![
            SubfieldCtx::from_q_m(2, 4).unwrap(),
            SubfieldCtx::from_q_m(3, 2).unwrap(),
            SubfieldCtx::from_q_m(4, 2).unwrap(),
            SubfieldCtx::from_q_m(4, 3).unwrap(),
            SubfieldCtx::from_q_m(9, 2).unwrap(),
            SubfieldCtx::from_q_m(5, 3).unwrap(),
        ]
    }

    #[test]
    fn rejects_bad_towers() {
        let big = FieldCtx::new(2, 4, None).unwrap();
        assert!(SubfieldCtx::new(&big, 3).is_err());
        assert!(SubfieldCtx::new(&big, 4).is_err()); // m = 1
        assert!(SubfieldCtx::from_q_m(6, 2).is_err());
    }

    #[test]
    fn trace_examples() {
        let sub = SubfieldCtx::from_q_m(2, 4).unwrap();
        assert_eq!(sub.rel_trace(0), 0);
        let f = sub.big();
        for x in 0..16 {
            let direct = [1u64, 2, 4, 8].iter().fold(0, |acc, &e| f.add(acc, f.pow(x, e)));
            assert_eq!(sub.rel_trace(x), direct);
        }
        // x in F_q: Tr(x) = m x
        let sub = SubfieldCtx::from_q_m(3, 2).unwrap();
        for x in 0..3 {
            assert_eq!(sub.rel_trace(x), sub.big().scalar(2, x));
        }
    }

    #[test]
    fn subfield_membership_matches_embedding() {
        for sub in towers() {
            let members: Vec<Elem> = (0..sub.big().size()).filter(|&x| sub.in_subfield(x)).collect();
            assert_eq!(members.len(), sub.q() as usize);
            for x in members {
                let y = sub.project(x).unwrap();
                assert_eq!(sub.embed(y), x);
            }
            // embedding is a ring map
            let (sm, bg) = (sub.small(), sub.big());
            for u in 0..sub.q() {
                for v in 0..sub.q() {
                    assert_eq!(sub.embed(sm.mul(u, v)), bg.mul(sub.embed(u), sub.embed(v)));
                    assert_eq!(sub.embed(sm.add(u, v)), bg.add(sub.embed(u), sub.embed(v)));
                }
            }
        }
    }

    #[test]
    fn trace_is_surjective_and_lands_in_subfield() {
        for sub in towers() {
            let mut hit = vec![false; sub.q() as usize];
            for x in 0..sub.big().size() {
                let t = sub.rel_trace(x);
                assert!(sub.in_subfield(t));
                hit[sub.project(t).unwrap() as usize] = true;
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn coordinates_round_trip_exhaustively() {
        for sub in towers() {
            for x in 0..sub.big().size() {
                let c = sub.coordinates(x);
                assert_eq!(c.len(), sub.m() as usize);
                assert_eq!(sub.from_coordinates(&c), x);
            }
        }
    }

    #[test]
    fn gram_matrix_is_invertible() {
        for sub in towers() {
            assert_eq!(sub.gram_matrix().rank(), sub.m() as usize);
        }
    }

    proptest! {
        #[test]
        fn trace_is_fq_linear_and_frobenius_invariant(which in 0usize..6, x in any::<u32>(), y in any::<u32>(), l in any::<u32>()) {
            let sub = &towers()[which];
            let f = sub.big();
            let (x, y) = (x % f.size(), y % f.size());
            let lam = sub.embed(l % sub.q());
            let lhs = sub.rel_trace(f.add(f.mul(lam, x), y));
            let rhs = f.add(f.mul(lam, sub.rel_trace(x)), sub.rel_trace(y));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(sub.rel_trace(sub.frobenius(x, 1)), sub.rel_trace(x));
        }
    }
}
