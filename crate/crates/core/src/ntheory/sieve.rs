//! Prime enumeration: a plain sieve for small bounds and a segmented sieve
//! for sweeps up to `10^7` and beyond.

/// All primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        if let Some(start) = i.checked_mul(i) {
            for j in (start..=n).step_by(i) {
                composite[j] = true;
            }
        }
    }
    primes
}

/// Iterator over the primes in `[lo, hi]`, sieving one segment at a time.
pub struct SegmentedPrimes {
    base: Vec<u64>,
    next_lo: u64,
    hi: u64,
    segment: u64,
    buffer: Vec<u64>,
    pos: usize,
}

const SEGMENT: u64 = 1 << 18;

impl SegmentedPrimes {
    pub fn new(lo: u64, hi: u64) -> Self {
        let root = (hi as f64).sqrt() as u64 + 1;
        SegmentedPrimes {
            base: primes_up_to(root),
            next_lo: lo.max(2),
            hi,
            segment: SEGMENT,
            buffer: Vec::new(),
            pos: 0,
        }
    }

    /// Sieves `[lo, lo + segment)` clipped to `hi`.
    fn fill(&mut self) -> bool {
        self.buffer.clear();
        self.pos = 0;
        while self.buffer.is_empty() {
            if self.next_lo > self.hi {
                return false;
            }
            let lo = self.next_lo;
            let hi = self.hi.min(lo.saturating_add(self.segment - 1));
            let mut composite = vec![false; (hi - lo + 1) as usize];
            for &p in &self.base {
                if p * p > hi {
                    break;
                }
                let start = (p * p).max(lo.div_ceil(p) * p);
                for m in (start..=hi).step_by(p as usize) {
                    composite[(m - lo) as usize] = true;
                }
            }
            self.buffer.extend(
                composite
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| !c)
                    .map(|(i, _)| lo + i as u64),
            );
            self.next_lo = hi.saturating_add(1);
            if hi == u64::MAX {
                self.hi = 0;
                self.next_lo = 1;
            }
        }
        true
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.buffer.len() && !self.fill() {
            return None;
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}
