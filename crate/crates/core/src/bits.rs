//! Column-packed 0/1 matrices. Each column holds the m observations of one
//! binary variable as a run of u64 words, so joint counts are popcounts of
//! word-wise ANDs.

use rand::RngCore;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitColumns {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitColumns {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = rows.div_ceil(64);
        BitColumns { rows, cols, words, data: vec![0; words * cols] }
    }

    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut out = BitColumns::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.as_ref().len(), cols, "ragged rows");
            for (j, &bit) in row.as_ref().iter().enumerate() {
                if bit {
                    out.set(i, j);
                }
            }
        }
        out
    }

    /// Fills an `rows x cols` matrix with fair coin flips, column by column.
    pub fn random<G: RngCore + ?Sized>(rows: usize, cols: usize, rng: &mut G) -> Self {
        let mut out = BitColumns::zeros(rows, cols);
        let tail = out.tail_mask();
        for j in 0..cols {
            let col = out.column_mut(j);
            for w in col.iter_mut() {
                *w = rng.next_u64();
            }
            if let Some(last) = col.last_mut() {
                *last &= tail;
            }
        }
        out
    }

    fn tail_mask(&self) -> u64 {
        match self.rows % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, row: usize, col: usize) {
        self.data[col * self.words + row / 64] |= 1u64 << (row % 64);
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[col * self.words + row / 64] >> (row % 64) & 1 == 1
    }

    pub fn column(&self, col: usize) -> &[u64] {
        &self.data[col * self.words..(col + 1) * self.words]
    }

    fn column_mut(&mut self, col: usize) -> &mut [u64] {
        &mut self.data[col * self.words..(col + 1) * self.words]
    }

    pub fn count(&self, col: usize) -> u64 {
        self.column(col).iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn joint_count(&self, a: usize, b: usize) -> u64 {
        self.column(a)
            .iter()
            .zip(self.column(b))
            .map(|(x, y)| u64::from((x & y).count_ones()))
            .sum()
    }

    /// Full symmetric `cols x cols` table of joint counts (diagonal = column
    /// counts), row-major.
    pub fn joint_counts(&self) -> Vec<u64> {
        let k = self.cols;
        let mut out = vec![0u64; k * k];
        for i in 0..k {
            for j in i..k {
                let c = self.joint_count(i, j);
                out[i * k + j] = c;
                out[j * k + i] = c;
            }
        }
        out
    }

    /// Same as [`joint_counts`](Self::joint_counts), rows spread over the
    /// rayon pool. Integer sums, so the result does not depend on scheduling.
    pub fn joint_counts_par(&self) -> Vec<u64> {
        let k = self.cols;
        let upper: Vec<Vec<u64>> = (0..k)
            .into_par_iter()
            .map(|i| (i..k).map(|j| self.joint_count(i, j)).collect())
            .collect();
        let mut out = vec![0u64; k * k];
        for (i, row) in upper.into_iter().enumerate() {
            for (off, c) in row.into_iter().enumerate() {
                out[i * k + i + off] = c;
                out[(i + off) * k + i] = c;
            }
        }
        out
    }
}
