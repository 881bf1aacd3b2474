use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Fixed-length vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { words: vec![0; len.div_ceil(WORD)], len }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    fn lowest_set_from(&self, start: usize) -> Option<usize> {
        (start..self.len).find(|&i| self.get(i))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVector({s})")
    }
}

/// Matrix over GF(2); each row is one equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    width: usize,
}

impl BitMatrix {
    pub fn new(width: usize) -> Self {
        BitMatrix { rows: Vec::new(), width }
    }

    pub fn from_rows(rows: Vec<BitVector>, width: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::domain(format!("row width {} != {width}", bad.len())));
        }
        Ok(BitMatrix { rows, width })
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows.iter().map(|r| BitVector::from_bools(r)).collect(), width)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.width {
            return Err(Error::domain(format!("row width {} != {}", row.len(), self.width)));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    /// `A x` for a column vector `x`.
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            out.set(i, row.dot(x));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Outcome {
    /// `A x = b`; free variables are zero.
    Solved { solution: BitVector, rank: usize },
    /// `witness` lists original equations whose sum reads `0 = 1`.
    Inconsistent { witness: Vec<usize>, rank: usize },
}

impl Gf2Outcome {
    pub fn rank(&self) -> usize {
        match self {
            Gf2Outcome::Solved { rank, .. } | Gf2Outcome::Inconsistent { rank, .. } => *rank,
        }
    }

    pub fn solution(&self) -> Option<&BitVector> {
        match self {
            Gf2Outcome::Solved { solution, .. } => Some(solution),
            Gf2Outcome::Inconsistent { .. } => None,
        }
    }
}

/// Gaussian elimination for `A x = b` with full reduction. Each working row
/// carries the set of original equations it was combined from, so an
/// inconsistency comes with an explicit witness.
pub fn solve_gf2(a: &BitMatrix, b: &BitVector) -> Result<Gf2Outcome> {
    let m = a.row_count();
    if b.len() != m {
        return Err(Error::domain(format!("rhs length {} != row count {m}", b.len())));
    }
    let mut rows: Vec<BitVector> = a.rows.clone();
    let mut rhs: Vec<bool> = b.to_bools();
    let mut trace: Vec<BitVector> = (0..m)
        .map(|i| {
            let mut t = BitVector::zeros(m);
            t.set(i, true);
            t
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..a.width() {
        let Some(pivot) = (rank..m).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        rhs.swap(rank, pivot);
        trace.swap(rank, pivot);
        let (pivot_row, pivot_rhs, pivot_trace) = (rows[rank].clone(), rhs[rank], trace[rank].clone());
        for r in 0..m {
            if r != rank && rows[r].get(col) {
                rows[r].xor_assign(&pivot_row);
                rhs[r] ^= pivot_rhs;
                trace[r].xor_assign(&pivot_trace);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if let Some(bad) = (rank..m).find(|&r| rhs[r]) {
        return Ok(Gf2Outcome::Inconsistent { witness: trace[bad].ones().collect(), rank });
    }
    let mut solution = BitVector::zeros(a.width());
    for (r, &col) in pivots.iter().enumerate() {
        solution.set(col, rhs[r]);
    }
    Ok(Gf2Outcome::Solved { solution, rank })
}

/// Indices of a maximal independent subset, chosen greedily in input order.
pub fn gf2_basis_selection(vectors: &[BitVector]) -> Vec<usize> {
    // reduced basis rows keyed by their leading (lowest) set bit
    let mut basis: Vec<(usize, BitVector)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (lead, row) in &basis {
            if w.get(*lead) {
                w.xor_assign(row);
            }
        }
        if let Some(lead) = w.lowest_set_from(0) {
            for (_, row) in basis.iter_mut() {
                if row.get(lead) {
                    row.xor_assign(&w);
                }
            }
            basis.push((lead, w));
            chosen.push(idx);
        }
    }
    chosen
}
