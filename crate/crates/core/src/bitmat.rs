//! Bit-packed row reduction over `F_2`.

/// Row-major `F_2` matrix, 64 columns per word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn from_entries(rows: usize, cols: usize, data: &[u32]) -> BitMatrix {
        let stride = cols.div_ceil(64);
        let mut words = vec![0u64; rows * stride];
        for r in 0..rows {
            let row = &data[r * cols..(r + 1) * cols];
            let out = &mut words[r * stride..(r + 1) * stride];
            for (c, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    out[c / 64] |= 1 << (c % 64);
                }
            }
        }
        BitMatrix { rows, cols, stride, words }
    }

    pub fn to_entries(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.rows * self.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            for c in 0..self.cols {
                out[r * self.cols + c] = ((row[c / 64] >> (c % 64)) & 1) as u32;
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    fn bit(&self, r: usize, c: usize) -> bool {
        (self.words[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]`, touching only words from `from_word` on.
    fn xor_row(&mut self, dst: usize, src: usize, from_word: usize) {
        let s = self.stride;
        let (d, sr) = if dst < src {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for w in from_word..s {
            d[w] ^= sr[w];
        }
    }

    /// Reduces in place. With `full` the result is the reduced row-echelon form, otherwise
    /// plain echelon form. Zero rows are dropped; returns pivot columns.
    pub fn reduce(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| self.bit(r, c)) else {
                continue;
            };
            self.swap_rows(rank, pr);
            let w = c / 64;
            let start = if full { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r != rank && self.bit(r, c) {
                    self.xor_row(r, rank, w);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        self.rows = rank;
        self.words.truncate(rank * self.stride);
        pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip_and_rank() {
        let data = [1, 1, 0, 0, 1, 1, 1, 0, 1];
        let mut m = BitMatrix::from_entries(3, 3, &data);
        assert_eq!(m.to_entries(), data);
        let pivots = m.reduce(true);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.to_entries(), vec![1, 0, 1, 0, 1, 1]);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let cols = 130;
        let mut data = vec![0u32; 2 * cols];
        data[129] = 1;
        data[cols + 64] = 1;
        data[cols + 129] = 1;
        let mut m = BitMatrix::from_entries(2, cols, &data);
        assert_eq!(m.reduce(true), vec![64, 129]);
        assert_eq!(m.rows(), 2);
    }
}
