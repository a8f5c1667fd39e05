//! Fixed-width bit masks over `u64` words, sized at runtime.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMask {
    n_bits: usize,
    words: Vec<u64>,
}

impl BitMask {
    pub fn zeros(n_bits: usize) -> Self {
        BitMask {
            n_bits,
            words: vec![0; n_bits.div_ceil(64)],
        }
    }

    pub fn from_indices(n_bits: usize, idx: &[usize]) -> Self {
        let mut m = Self::zeros(n_bits);
        for &i in idx {
            m.set(i, true);
        }
        m
    }

    /// Low `n_bits` of `value`; `n_bits` must be at most 64.
    pub fn from_u64(n_bits: usize, value: u64) -> Self {
        assert!(n_bits <= 64);
        let mut m = Self::zeros(n_bits);
        if n_bits > 0 {
            let keep = if n_bits == 64 { u64::MAX } else { (1u64 << n_bits) - 1 };
            m.words[0] = value & keep;
        }
        m
    }

    pub fn len(&self) -> usize {
        self.n_bits
    }

    pub fn is_empty(&self) -> bool {
        self.n_bits == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.n_bits);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.n_bits, "bit {i} out of range {}", self.n_bits);
        let w = &mut self.words[i / 64];
        if v {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_bits, other.n_bits);
        BitMask {
            n_bits: self.n_bits,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n_bits, other.n_bits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn or(&self, other: &Self) -> Self {
        BitMask {
            n_bits: self.n_bits,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// Popcount of the intersection.
    pub fn and_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let t = w.trailing_zeros() as usize;
                out.push(64 * k + t);
                w &= w - 1;
            }
        }
        out
    }

    /// The mask as a single word, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.n_bits <= 64 {
            Some(self.words.first().copied().unwrap_or(0))
        } else {
            None
        }
    }
}

impl fmt::Debug for BitMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // most significant site first, like a ket label
        let s: String = (0..self.n_bits)
            .rev()
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "{s}")
    }
}
