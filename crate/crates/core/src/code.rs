//! Linear codes and the algebra used by the distinguisher: duals, Schur products,
//! squares, Frobenius twists, trace codes and subfield subcodes.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::fmatrix::FMatrix;
use crate::subfield::SubfieldCtx;

/// Products are generated in chunks of this many generator pairs; the chunks are
/// reduced independently and merged, which does not change the resulting row space.
const PRODUCT_CHUNK: usize = 4096;

/// A linear code, stored as the canonical RREF of a generator matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    gen: FMatrix,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] code over {}", self.len(), self.dim(), self.gen.ctx().descriptor())
    }
}

impl LinearCode {
    /// The row space of `m`.
    pub fn from_generator(m: &FMatrix) -> LinearCode {
        LinearCode { gen: m.rref().matrix }
    }

    pub fn from_rows(ctx: &Arc<FieldCtx>, n: usize, rows: &[Vec<Elem>]) -> Result<LinearCode> {
        Ok(Self::from_generator(&FMatrix::from_rows(ctx, n, rows)?))
    }

    pub fn zero(ctx: &Arc<FieldCtx>, n: usize) -> LinearCode {
        LinearCode { gen: FMatrix::zeros(ctx, 0, n) }
    }

    pub fn full(ctx: &Arc<FieldCtx>, n: usize) -> LinearCode {
        LinearCode { gen: FMatrix::identity(ctx, n) }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.gen.ctx()
    }

    /// Length `n`.
    pub fn len(&self) -> usize {
        self.gen.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimension `k`.
    pub fn dim(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &FMatrix {
        &self.gen
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if !self.ctx().same_field(other.ctx()) {
            return Err(Error::CtxMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!("lengths {} and {}", self.len(), other.len())));
        }
        Ok(())
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode::from_generator(&self.gen.kernel_basis())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &LinearCode) -> Result<bool> {
        self.check_compatible(other)?;
        self.gen.rowspace_contains(&other.gen)
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(LinearCode::from_generator(&self.gen.stack(&other.gen)?))
    }

    /// Intersection as the dual of the sum of the duals.
    pub fn intersect(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// Span of all componentwise products `c_i ⋆ d_j` of generator rows.
    pub fn star_product(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        let pairs: Vec<(usize, usize)> = (0..self.dim())
            .flat_map(|i| (0..other.dim()).map(move |j| (i, j)))
            .collect();
        Ok(span_of_products(&self.gen, &other.gen, &pairs))
    }

    /// `C ⋆ C`, generated by the `k(k+1)/2` unordered pairs of generator rows.
    pub fn square(&self) -> LinearCode {
        let pairs: Vec<(usize, usize)> = (0..self.dim())
            .flat_map(|i| (i..self.dim()).map(move |j| (i, j)))
            .collect();
        span_of_products(&self.gen, &self.gen, &pairs)
    }

    /// `C^{q^i}`: every coordinate raised to the power `q^i`.
    pub fn frobenius(&self, q: u32, i: u64) -> Result<LinearCode> {
        let f = self.ctx();
        f.subfield_degree(q)?;
        Ok(LinearCode::from_generator(&self.gen.map(|x| f.frobenius_unchecked(x, q, i))))
    }

    /// `Tr(C)` over `F_q`, spanned by `Tr(alpha_j c_i)` for basis elements `alpha_j` and
    /// generator rows `c_i`.
    pub fn trace_code(&self, sub: &SubfieldCtx) -> Result<LinearCode> {
        if !self.ctx().same_field(sub.big()) {
            return Err(Error::CtxMismatch);
        }
        let big = sub.big();
        let n = self.len();
        let mut data = Vec::with_capacity(self.dim() * sub.m() as usize * n);
        for row in self.gen.row_iter() {
            for &alpha in sub.basis() {
                data.extend(row.iter().map(|&c| sub.trace_small(big.mul(alpha, c))));
            }
        }
        let rows = data.len() / n.max(1);
        let m = FMatrix::from_raw(sub.small(), if n == 0 { 0 } else { rows }, n, data);
        Ok(LinearCode::from_generator(&m))
    }

    /// `C ∩ F_q^n`, through the `F_q`-expansion of a parity-check matrix of `C`.
    pub fn subfield_subcode(&self, sub: &SubfieldCtx) -> Result<LinearCode> {
        if !self.ctx().same_field(sub.big()) {
            return Err(Error::CtxMismatch);
        }
        subfield_subcode_of_parity(self.dual().generator(), sub)
    }

    /// Embeds an `F_q` code into `F_{q^m}` coordinates (same row space, bigger field).
    pub fn extend_scalars(&self, sub: &SubfieldCtx) -> Result<LinearCode> {
        if !self.ctx().same_field(sub.small()) {
            return Err(Error::CtxMismatch);
        }
        let m = FMatrix::from_raw(sub.big(), self.dim(), self.len(), self.gen.data().iter().map(|&v| sub.embed(v)).collect());
        Ok(LinearCode::from_generator(&m))
    }
}

/// Header of the line-oriented code file: `q`, `m` and the ambient field, which is
/// either `F_q` or `F_{q^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub q: u32,
    pub m: u32,
    pub code: LinearCode,
}

impl CodeFile {
    pub fn new(q: u32, m: u32, code: LinearCode) -> Result<CodeFile> {
        let size = code.ctx().size() as u64;
        if size != q as u64 && size != (q as u64).pow(m) {
            return Err(Error::Parse(format!("field of size {size} is neither q={q} nor q^{m}")));
        }
        Ok(CodeFile { q, m, code })
    }

    pub fn to_text(&self) -> String {
        let c = &self.code;
        let mut out = format!("q={} m={} n={} k={}\n{}\n", self.q, self.m, c.len(), c.dim(), c.ctx().descriptor());
        for row in c.generator().row_iter() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<CodeFile> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let mut vals = [None; 4];
        for tok in header.split_whitespace() {
            let (key, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("bad header token {tok:?}")))?;
            let slot = match key {
                "q" => 0,
                "m" => 1,
                "n" => 2,
                "k" => 3,
                _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
            };
            vals[slot] = Some(v.parse::<u64>().map_err(|e| Error::Parse(format!("{tok}: {e}")))?);
        }
        let [Some(q), Some(m), Some(n), Some(k)] = vals else {
            return Err(Error::Parse("header needs q, m, n and k".into()));
        };
        let desc: crate::field::FieldDescriptor = lines
            .next()
            .ok_or_else(|| Error::Parse("missing field descriptor".into()))?
            .parse()?;
        let ctx = desc.build()?;
        let (n, k) = (n as usize, k as usize);
        let mut rows = Vec::with_capacity(k);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<Elem>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse(format!("expected {k} generator rows, found {}", rows.len())));
        }
        let code = LinearCode::from_rows(&ctx, n, &rows)?;
        if code.dim() != k {
            return Err(Error::Parse(format!("generator rows have rank {} < k={k}", code.dim())));
        }
        CodeFile::new(q as u32, m as u32, code)
    }
}

/// The `F_q`-code `{c ∈ F_q^n : H c^T = 0}` for a parity-check matrix `H` over `F_{q^m}`.
/// Each row of `H` is expanded into `m` rows over `F_q` using basis coordinates.
pub fn subfield_subcode_of_parity(h: &FMatrix, sub: &SubfieldCtx) -> Result<LinearCode> {
    if !h.ctx().same_field(sub.big()) {
        return Err(Error::CtxMismatch);
    }
    let n = h.cols();
    let m = sub.m() as usize;
    let mut expanded = vec![0; h.rows() * m * n];
    for (r, row) in h.row_iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            for (j, coord) in sub.coordinates(v).into_iter().enumerate() {
                expanded[(r * m + j) * n + c] = coord;
            }
        }
    }
    let e = FMatrix::from_raw(sub.small(), h.rows() * m, n, expanded);
    Ok(LinearCode::from_generator(&e.kernel_basis()))
}

fn span_of_products(a: &FMatrix, b: &FMatrix, pairs: &[(usize, usize)]) -> LinearCode {
    let f = a.ctx();
    let n = a.cols();
    let build = |chunk: &[(usize, usize)]| {
        let mut data = Vec::with_capacity(chunk.len() * n);
        for &(i, j) in chunk {
            data.extend(a.row(i).iter().zip(b.row(j)).map(|(&x, &y)| f.mul(x, y)));
        }
        FMatrix::from_raw(f, chunk.len(), n, data).rref().matrix
    };
    if pairs.len() <= PRODUCT_CHUNK {
        return LinearCode { gen: build(pairs) };
    }
    let parts: Vec<FMatrix> = pairs.par_chunks(PRODUCT_CHUNK).map(build).collect();
    let merged = parts
        .into_iter()
        .reduce(|acc, p| acc.stack(&p).expect("same shape").rref().matrix)
        .expect("at least one chunk");
    LinearCode { gen: merged }
}

/// `min(n, k(k+1)/2)`, the square dimension of a random `[n, k]` code.
pub fn random_square_dim(n: usize, k: usize) -> usize {
    n.min(k * (k + 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_code(ctx: &Arc<FieldCtx>, n: usize, k: usize, rng: &mut impl Rng) -> LinearCode {
        let data = (0..n * k).map(|_| rng.gen_range(0..ctx.size())).collect();
        LinearCode::from_generator(&FMatrix::new(ctx, k, n, data).unwrap())
    }

    #[test]
    fn dual_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(LinearCode::full(&f2, 4).dual().dim(), 0);
        let rep = LinearCode::from_rows(&f2, 3, &[vec![1, 1, 1]]).unwrap();
        let d = rep.dual();
        assert_eq!(d.dim(), 2);
        assert!(d.generator().row_iter().all(|r| r.iter().sum::<u32>() % 2 == 0));
        assert_eq!(d.dual(), rep);
    }

    #[test]
    fn star_examples() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_code(&f, 10, 3, &mut rng);
        let ones = LinearCode::from_rows(&f, 10, &[vec![1; 10]]).unwrap();
        assert_eq!(c.star_product(&ones).unwrap(), c);
        assert_eq!(c.star_product(&LinearCode::zero(&f, 10)).unwrap().dim(), 0);
        let other = FieldCtx::prime(3).unwrap();
        assert!(matches!(c.star_product(&LinearCode::zero(&other, 10)), Err(Error::CtxMismatch)));
        assert!(c.star_product(&LinearCode::zero(&f, 9)).is_err());
    }

    #[test]
    fn square_of_dimension_one_code() {
        let f = FieldCtx::prime(5).unwrap();
        let c = LinearCode::from_rows(&f, 4, &[vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(c.square().dim(), 1);
    }

    #[test]
    fn random_binary_square_is_generic() {
        let f2 = FieldCtx::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        let c = random_code(&f2, 100, 10, &mut rng);
        assert_eq!(c.dim(), 10);
        assert_eq!(c.square().dim(), 55);
        assert_eq!(random_square_dim(100, 10), 55);
        assert_eq!(random_square_dim(50, 10), 50);
        assert_eq!(random_square_dim(7, 1), 1);
    }

    #[test]
    fn chunked_square_matches_single_pass() {
        let f2 = FieldCtx::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // 100 generators -> 5050 pairs, more than one chunk
        let c = random_code(&f2, 400, 100, &mut rng);
        let sq = c.square();
        let pairs: Vec<(usize, usize)> = (0..100).flat_map(|i| (i..100).map(move |j| (i, j))).collect();
        let mut data = Vec::new();
        for &(i, j) in &pairs {
            data.extend(c.generator().row(i).iter().zip(c.generator().row(j)).map(|(x, y)| x * y));
        }
        let direct = LinearCode::from_generator(&FMatrix::new(&f2, pairs.len(), 400, data).unwrap());
        assert_eq!(sq, direct);
        assert_eq!(sq.dim(), 400);
    }

    #[test]
    fn frobenius_code_order() {
        let sub = SubfieldCtx::from_q_m(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = random_code(sub.big(), 9, 3, &mut rng);
        assert_eq!(c.frobenius(2, 0).unwrap(), c);
        assert_eq!(c.frobenius(2, 4).unwrap(), c);
        assert_eq!(c.frobenius(4, 2).unwrap(), c);
        assert_eq!(c.frobenius(2, 1).unwrap().dim(), 3);
        assert!(c.frobenius(3, 1).is_err());
    }

    #[test]
    fn trace_and_subfield_trivial_cases() {
        let sub = SubfieldCtx::from_q_m(3, 2).unwrap();
        let (big, small) = (sub.big(), sub.small());
        assert_eq!(LinearCode::zero(big, 6).trace_code(&sub).unwrap(), LinearCode::zero(small, 6));
        assert_eq!(LinearCode::full(big, 6).trace_code(&sub).unwrap(), LinearCode::full(small, 6));
        assert_eq!(LinearCode::full(big, 6).subfield_subcode(&sub).unwrap(), LinearCode::full(small, 6));
        assert_eq!(LinearCode::zero(big, 6).subfield_subcode(&sub).unwrap(), LinearCode::zero(small, 6));
        assert!(LinearCode::zero(small, 6).trace_code(&sub).is_err());
    }

    #[test]
    fn sum_and_intersection() {
        let f = FieldCtx::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = random_code(&f, 8, 4, &mut rng);
        assert_eq!(c.sum(&LinearCode::zero(&f, 8)).unwrap(), c);
        assert_eq!(c.intersect(&c).unwrap(), c);
    }

    /// All codewords of a small code, by enumerating coefficient vectors.
    fn codewords(c: &LinearCode) -> Vec<Vec<Elem>> {
        let f = c.ctx();
        let q = f.size() as usize;
        let k = c.dim();
        (0..q.pow(k as u32))
            .map(|code| {
                let mut w = vec![0; c.len()];
                for i in 0..k {
                    let coef = ((code / q.pow(i as u32)) % q) as Elem;
                    for (x, &g) in w.iter_mut().zip(c.generator().row(i)) {
                        *x = f.add(*x, f.mul(coef, g));
                    }
                }
                w
            })
            .collect()
    }

    #[test]
    fn generator_products_span_all_codeword_products() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            // |C| = 4^3 = 2^6
            let c = random_code(&f, 7, 3, &mut rng);
            let d = random_code(&f, 7, 2, &mut rng);
            let words_c = codewords(&c);
            let words_d = codewords(&d);
            let mut rows = Vec::new();
            for u in &words_c {
                for v in &words_d {
                    rows.push(u.iter().zip(v).map(|(&x, &y)| f.mul(x, y)).collect::<Vec<_>>());
                }
            }
            let exhaustive = LinearCode::from_rows(&f, 7, &rows).unwrap();
            assert_eq!(c.star_product(&d).unwrap(), exhaustive);
            let mut sq_rows = Vec::new();
            for u in &words_c {
                for v in &words_c {
                    sq_rows.push(u.iter().zip(v).map(|(&x, &y)| f.mul(x, y)).collect::<Vec<_>>());
                }
            }
            assert_eq!(c.square(), LinearCode::from_rows(&f, 7, &sq_rows).unwrap());
        }
    }

    #[test]
    fn code_file_round_trip() {
        let sub = SubfieldCtx::from_q_m(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (ctx, k) in [(sub.big(), 3), (sub.small(), 4), (sub.small(), 0)] {
            let c = random_code(ctx, 7, k, &mut rng);
            let file = CodeFile::new(3, 2, c).unwrap();
            let text = file.to_text();
            let back = CodeFile::parse(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_text(), text);
        }
        let f5 = FieldCtx::prime(5).unwrap();
        assert!(CodeFile::new(3, 2, LinearCode::zero(&f5, 3)).is_err());
        assert!(CodeFile::parse("q=3 m=2 n=2 k=1\np=3 s=1 mod=0,1\n1 1\n2 2\n").is_err());
        assert!(CodeFile::parse("q=3 m=2 n=2\n").is_err());
    }

    proptest! {
        #[test]
        fn code_invariants(seed in any::<u64>(), n in 1usize..14, k in 0usize..8, which in 0usize..3) {
            let f = match which {
                0 => FieldCtx::prime(2).unwrap(),
                1 => FieldCtx::prime(3).unwrap(),
                _ => FieldCtx::new(2, 3, None).unwrap(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_code(&f, n, k.min(n), &mut rng);
            let d = random_code(&f, n, rng.gen_range(0..=n), &mut rng);
            prop_assert_eq!(c.dual().dim(), n - c.dim());
            prop_assert_eq!(c.dual().dual(), c.clone());
            prop_assert!(c.square().dim() <= random_square_dim(n, c.dim()));
            prop_assert_eq!(c.star_product(&d).unwrap(), d.star_product(&c).unwrap());
            prop_assert!(c.star_product(&d).unwrap().dim() <= n.min(c.dim() * d.dim()));
            let s = c.sum(&d).unwrap();
            let i = c.intersect(&d).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), c.dim() + d.dim());
            prop_assert!(s.contains(&c).unwrap() && c.contains(&i).unwrap() && d.contains(&i).unwrap());
        }

        #[test]
        fn delsarte_duality(seed in any::<u64>(), which in 0usize..3, n in 2usize..12) {
            let sub = match which {
                0 => SubfieldCtx::from_q_m(2, 4).unwrap(),
                1 => SubfieldCtx::from_q_m(3, 2).unwrap(),
                _ => SubfieldCtx::from_q_m(4, 2).unwrap(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(0..=n);
            let c = random_code(sub.big(), n, k, &mut rng);
            let lhs = c.subfield_subcode(&sub).unwrap().dual();
            let rhs = c.dual().trace_code(&sub).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
