//! Linear algebra over GF(2) on bit-packed rows.

use crate::bits::BitMask;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    n_cols: usize,
    rows: Vec<BitMask>,
}

impl F2Matrix {
    pub fn new(n_cols: usize, rows: Vec<BitMask>) -> Self {
        assert!(rows.iter().all(|r| r.len() == n_cols));
        F2Matrix { n_cols, rows }
    }

    pub fn from_bits(bits: &[Vec<u8>]) -> Self {
        let n_cols = bits.first().map(|r| r.len()).unwrap_or(0);
        let rows = bits
            .iter()
            .map(|r| {
                let idx: Vec<usize> = r.iter().enumerate().filter(|(_, &b)| b & 1 == 1).map(|(i, _)| i).collect();
                BitMask::from_indices(n_cols, &idx)
            })
            .collect();
        F2Matrix { n_cols, rows }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &BitMask {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.n_cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        (F2Matrix { n_cols: self.n_cols, rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Indices of rows that are independent of all earlier rows.
    pub fn greedy_independent_rows(&self) -> Vec<usize> {
        let mut basis: Vec<(usize, BitMask)> = Vec::new();
        let mut picked = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut v = row.clone();
            for (p, b) in &basis {
                if v.get(*p) {
                    v.xor_assign(b);
                }
            }
            if let Some(&p) = v.ones().first() {
                for (_, b) in basis.iter_mut() {
                    if b.get(p) {
                        b.xor_assign(&v);
                    }
                }
                basis.push((p, v));
                picked.push(i);
            }
        }
        picked
    }

    /// A subset of rows whose sum is `target`, as a mask over row indices.
    pub fn solve_row_combination(&self, target: &BitMask) -> Option<BitMask> {
        let n = self.rows.len();
        // track which original rows make up each reduced row
        let mut work: Vec<(BitMask, BitMask)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), BitMask::from_indices(n, &[i])))
            .collect();
        // each basis vector's pivot is its lowest set bit, all distinct
        let mut basis: Vec<(usize, BitMask, BitMask)> = Vec::new();
        for (v, tag) in work.drain(..) {
            let (mut v, mut tag) = (v, tag);
            for (p, b, t) in &basis {
                if v.get(*p) {
                    v.xor_assign(b);
                    tag.xor_assign(t);
                }
            }
            if let Some(&p) = v.ones().first() {
                basis.push((p, v, tag));
            }
        }
        let mut rem = target.clone();
        let mut combo = BitMask::zeros(n);
        loop {
            let Some(&c) = rem.ones().first() else { return Some(combo) };
            let (_, b, t) = basis.iter().find(|(p, _, _)| *p == c)?;
            rem.xor_assign(b);
            combo.xor_assign(t);
        }
    }

    /// Basis of {v : M v = 0} over the columns.
    pub fn nullspace(&self) -> Vec<BitMask> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.n_cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = BitMask::zeros(self.n_cols);
                v.set(f, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if r.rows[i].get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    pub fn transpose(&self) -> F2Matrix {
        let rows = (0..self.n_cols)
            .map(|c| {
                let idx: Vec<usize> = (0..self.rows.len()).filter(|&i| self.rows[i].get(c)).collect();
                BitMask::from_indices(self.rows.len(), &idx)
            })
            .collect();
        F2Matrix { n_cols: self.rows.len(), rows }
    }

    pub fn to_bits(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.n_cols).map(|c| r.get(c) as u8).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_all_ones() {
        let m = F2Matrix::from_bits(&vec![vec![1, 1, 1]; 3]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn identity_rank_and_nullspace() {
        let m = F2Matrix::from_bits(&[vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0].ones(), vec![0, 1, 2]);
    }

    #[test]
    fn row_combination() {
        let m = F2Matrix::from_bits(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]);
        let t = BitMask::from_indices(3, &[2]);
        assert_eq!(m.solve_row_combination(&t).unwrap().ones(), vec![1, 2]);
        let m = F2Matrix::from_bits(&[vec![1, 1], vec![1, 1]]);
        assert!(m.solve_row_combination(&BitMask::from_indices(2, &[0])).is_none());
    }

    #[test]
    fn greedy_rows() {
        let m = F2Matrix::from_bits(&[vec![1, 0], vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(m.greedy_independent_rows(), vec![0, 2]);
    }
}
