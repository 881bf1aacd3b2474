use crate::error::{Error, Result};
use crate::ntheory::{is_prime_u64, mul_mod_u64, pow_mod_u64};

/// List of vectors over GF(p), each reduced into `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    modulus: u64,
    rows: Vec<Vec<u64>>,
    width: usize,
}

impl PrimeFieldMatrix {
    pub fn new(modulus: u64, width: usize) -> Result<Self> {
        if !is_prime_u64(modulus) {
            return Err(Error::domain(format!("{modulus} is not prime")));
        }
        if modulus >= 1 << 63 {
            return Err(Error::domain(format!("modulus {modulus} exceeds 2^63")));
        }
        Ok(PrimeFieldMatrix { modulus, rows: Vec::new(), width })
    }

    pub fn from_rows(modulus: u64, rows: Vec<Vec<u64>>, width: usize) -> Result<Self> {
        let mut m = Self::new(modulus, width)?;
        for row in rows {
            m.push_row(row)?;
        }
        Ok(m)
    }

    /// Appends a row, reducing its entries mod p.
    pub fn push_row(&mut self, mut row: Vec<u64>) -> Result<()> {
        if row.len() != self.width {
            return Err(Error::domain(format!("row width {} != {}", row.len(), self.width)));
        }
        for x in row.iter_mut() {
            *x %= self.modulus;
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// `sum_j coefficients[j] * rows[j]` mod p.
    pub fn combine(&self, coefficients: &[u64]) -> Vec<u64> {
        let p = self.modulus;
        let mut out = vec![0u64; self.width];
        for (c, row) in coefficients.iter().zip(&self.rows) {
            for (o, &x) in out.iter_mut().zip(row) {
                *o = (*o + mul_mod_u64(*c % p, x, p)) % p;
            }
        }
        out
    }
}

fn inverse(a: u64, p: u64) -> u64 {
    pow_mod_u64(a, p - 2, p)
}

// Reduced row echelon form of the augmented system whose columns are the
// stored vectors. Returns (rows, pivot columns).
fn eliminate(vectors: &PrimeFieldMatrix, target: Option<&[u64]>) -> (Vec<Vec<u64>>, Vec<usize>) {
    let p = vectors.modulus;
    let k = vectors.rows.len();
    let extra = usize::from(target.is_some());
    let mut rows: Vec<Vec<u64>> = (0..vectors.width)
        .map(|t| {
            let mut row: Vec<u64> = vectors.rows.iter().map(|v| v[t]).collect();
            if let Some(target) = target {
                row.push(target[t] % p);
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..k {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = inverse(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod_u64(*x, scale, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod_u64(factor, y, p)) % p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    debug_assert!(rows.iter().all(|r| r.len() == k + extra));
    (rows, pivots)
}

/// Coefficients `c` with `sum_j c_j * vectors_j = target` (mod p), or `None`
/// when the target is outside the span. Free coefficients are zero.
pub fn in_span_modp(vectors: &PrimeFieldMatrix, target: &[u64]) -> Result<Option<Vec<u64>>> {
    if target.len() != vectors.width {
        return Err(Error::domain(format!(
            "target length {} != vector width {}",
            target.len(),
            vectors.width
        )));
    }
    let k = vectors.rows.len();
    let (rows, pivots) = eliminate(vectors, Some(target));
    if rows[pivots.len()..].iter().any(|r| r[k] != 0) {
        return Ok(None);
    }
    let mut coefficients = vec![0u64; k];
    for (r, &col) in pivots.iter().enumerate() {
        coefficients[col] = rows[r][k];
    }
    Ok(Some(coefficients))
}

/// Dimension of the span of the stored vectors.
pub fn rank_modp(vectors: &PrimeFieldMatrix) -> usize {
    eliminate(vectors, None).1.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let m = PrimeFieldMatrix::from_rows(5, vec![vec![1, 0], vec![0, 1]], 2).unwrap();
        assert_eq!(in_span_modp(&m, &[2, 3]).unwrap(), Some(vec![2, 3]));

        let m = PrimeFieldMatrix::from_rows(3, vec![vec![1, 1]], 2).unwrap();
        assert_eq!(in_span_modp(&m, &[1, 2]).unwrap(), None);

        let m = PrimeFieldMatrix::from_rows(5, vec![vec![1, 2], vec![2, 4]], 2).unwrap();
        let c = in_span_modp(&m, &[2, 4]).unwrap().unwrap();
        assert_eq!((c[0] + 2 * c[1]) % 5, 2);
        assert_eq!(m.combine(&c), vec![2, 4]);
        assert_eq!(rank_modp(&m), 1);
    }

    #[test]
    fn empty_span_contains_only_zero() {
        let m = PrimeFieldMatrix::new(7, 3).unwrap();
        assert_eq!(in_span_modp(&m, &[0, 0, 0]).unwrap(), Some(vec![]));
        assert_eq!(in_span_modp(&m, &[0, 1, 0]).unwrap(), None);
    }

    #[test]
    fn validation() {
        assert!(PrimeFieldMatrix::new(6, 2).is_err());
        let mut m = PrimeFieldMatrix::new(7, 2).unwrap();
        assert!(m.push_row(vec![1]).is_err());
        m.push_row(vec![8, 15]).unwrap();
        assert_eq!(m.rows()[0], vec![1, 1]);
        assert!(in_span_modp(&m, &[1]).is_err());
    }

    #[test]
    fn large_prime_modulus() {
        let p = 4_680_225_641_471_129u64;
        let m = PrimeFieldMatrix::from_rows(p, vec![vec![p - 1, 3], vec![5, p - 2]], 2).unwrap();
        let target = m.combine(&[123_456_789, 987_654_321]);
        let c = in_span_modp(&m, &target).unwrap().unwrap();
        assert_eq!(m.combine(&c), target);
    }

    fn system() -> impl Strategy<Value = (u64, Vec<Vec<u64>>, Vec<u64>)> {
        (prop::sample::select(vec![2u64, 3, 5, 7, 43, 139, 50207]), 0usize..=8, 1usize..=8)
            .prop_flat_map(|(p, k, r)| {
                (
                    Just(p),
                    prop::collection::vec(prop::collection::vec(0..p, r), k),
                    prop::collection::vec(0..p, r),
                    prop::collection::vec(0..p, k),
                    any::<bool>(),
                )
            })
            .prop_map(|(p, rows, target, coeffs, in_span)| {
                let r = target.len();
                let m = PrimeFieldMatrix::from_rows(p, rows.clone(), r).unwrap();
                let target = if in_span { m.combine(&coeffs) } else { target };
                (p, rows, target)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn solutions_recombine((p, rows, target) in system()) {
            let m = PrimeFieldMatrix::from_rows(p, rows, target.len()).unwrap();
            if let Some(c) = in_span_modp(&m, &target).unwrap() {
                prop_assert_eq!(m.combine(&c), target);
            }
        }

        #[test]
        fn membership_matches_enumeration_over_gf3(
            rows in prop::collection::vec(prop::collection::vec(0u64..3, 3), 0..4),
            target in prop::collection::vec(0u64..3, 3),
        ) {
            let m = PrimeFieldMatrix::from_rows(3, rows.clone(), 3).unwrap();
            let k = rows.len() as u32;
            let exists = (0..3u64.pow(k)).any(|mut code| {
                let coeffs: Vec<u64> = (0..k).map(|_| { let d = code % 3; code /= 3; d }).collect();
                m.combine(&coeffs) == target
            });
            prop_assert_eq!(in_span_modp(&m, &target).unwrap().is_some(), exists);
        }
    }
}
