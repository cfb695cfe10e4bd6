//! Sparse unnormalized pure states of `n` qudits with `d` levels each.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, DensityOperator, TensorError};

/// An unnormalized pure state of `n` qudits, stored as a sparse map from
/// packed basis index to complex amplitude.
///
/// The leftmost ket factor is party 0; the index tuple `(i_0, ..., i_{n-1})`
/// packs to the row-major integer `sum_j i_j * d^(n-1-j)`. Zero amplitudes
/// are never stored. States are value types: every operation returns a new
/// state.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    n: usize,
    d: usize,
    amps: BTreeMap<u64, Complex64>,
}

/// Packed dimension `d^n`, rejecting anything beyond 62 bits.
fn packed_dimension(n: usize, d: usize) -> Result<u64, TensorError> {
    if n == 0 {
        return Err(TensorError::NoParties);
    }
    if !(2..=255).contains(&d) {
        return Err(TensorError::BadLocalDimension(d));
    }
    let mut dim: u64 = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(d as u64)
            .filter(|v| *v <= 1 << 62)
            .ok_or(TensorError::CapacityExceeded { n, d })?;
    }
    Ok(dim)
}

impl QuditState {
    /// The zero vector on `n` parties with `d` levels.
    pub fn zero(n: usize, d: usize) -> Result<Self, TensorError> {
        packed_dimension(n, d)?;
        Ok(Self {
            n,
            d,
            amps: BTreeMap::new(),
        })
    }

    /// The computational basis state `|digits>`.
    pub fn basis(n: usize, d: usize, digits: &[u8]) -> Result<Self, TensorError> {
        let mut state = Self::zero(n, d)?;
        state.add_term(digits, Complex64::new(1.0, 0.0))?;
        Ok(state)
    }

    /// Builds a state from `(index tuple, amplitude)` terms, summing repeats.
    pub fn from_terms<I>(n: usize, d: usize, terms: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<u8>, Complex64)>,
    {
        let mut state = Self::zero(n, d)?;
        for (digits, amp) in terms {
            state.add_term(&digits, amp)?;
        }
        Ok(state)
    }

    /// Number of parties.
    pub fn parties(&self) -> usize {
        self.n
    }

    /// Local dimension.
    pub fn levels(&self) -> usize {
        self.d
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    fn pack(&self, digits: &[u8]) -> Result<u64, TensorError> {
        if digits.len() != self.n {
            return Err(TensorError::IndexLength {
                expected: self.n,
                got: digits.len(),
            });
        }
        let mut idx: u64 = 0;
        for &digit in digits {
            if digit as usize >= self.d {
                return Err(TensorError::DigitOutOfRange { digit, d: self.d });
            }
            idx = idx * self.d as u64 + digit as u64;
        }
        Ok(idx)
    }

    fn unpack(&self, mut idx: u64) -> Vec<u8> {
        let mut digits = vec![0u8; self.n];
        for slot in digits.iter_mut().rev() {
            *slot = (idx % self.d as u64) as u8;
            idx /= self.d as u64;
        }
        digits
    }

    /// Adds `amp` to the amplitude at `digits`, dropping the entry if it
    /// cancels to exactly zero.
    pub fn add_term(&mut self, digits: &[u8], amp: Complex64) -> Result<(), TensorError> {
        let idx = self.pack(digits)?;
        let entry = self.amps.entry(idx).or_insert(Complex64::ZERO) ;
        *entry += amp;
        if entry.re == 0.0 && entry.im == 0.0 {
            self.amps.remove(&idx);
        }
        Ok(())
    }

    /// The amplitude at `digits` (zero when absent).
    pub fn amplitude(&self, digits: &[u8]) -> Result<Complex64, TensorError> {
        let idx = self.pack(digits)?;
        Ok(self.amps.get(&idx).copied().unwrap_or(Complex64::ZERO))
    }

    /// Stored terms in packed-index order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u8>, Complex64)> + '_ {
        self.amps.iter().map(|(&idx, &amp)| (self.unpack(idx), amp))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|z| z.norm_sqr()).sum()
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Result<Self, TensorError> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(TensorError::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let amps = self
            .amps
            .iter()
            .map(|(&idx, &amp)| (idx, amp * factor))
            .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
            .collect();
        Self { amps, ..*self }
    }

    /// The superposition `self + other`.
    pub fn superpose(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (&idx, &amp) in &other.amps {
            let entry = out.amps.entry(idx).or_insert(Complex64::ZERO);
            *entry += amp;
            if entry.re == 0.0 && entry.im == 0.0 {
                out.amps.remove(&idx);
            }
        }
        Ok(out)
    }

    fn check_same_space(&self, other: &Self) -> Result<(), TensorError> {
        if self.n != other.n || self.d != other.d {
            return Err(TensorError::DimensionMismatch(
                format!("{} parties, {} levels", self.n, self.d),
                format!("{} parties, {} levels", other.n, other.d),
            ));
        }
        Ok(())
    }

    /// `<self|other>`, conjugate linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64, TensorError> {
        self.check_same_space(other)?;
        // Drive the intersection from the smaller support.
        let keys = if self.amps.len() <= other.amps.len() {
            self.amps.keys()
        } else {
            other.amps.keys()
        };
        let mut acc = Complex64::ZERO;
        for idx in keys {
            if let (Some(a), Some(b)) = (self.amps.get(idx), other.amps.get(idx)) {
                acc += a.conj() * b;
            }
        }
        Ok(acc)
    }

    /// Kronecker product; `self`'s parties come first.
    pub fn tensor(&self, other: &Self) -> Result<Self, TensorError> {
        if self.d != other.d {
            return Err(TensorError::DimensionMismatch(
                format!("{} levels", self.d),
                format!("{} levels", other.d),
            ));
        }
        let n = self.n + other.n;
        packed_dimension(n, self.d)?;
        let shift: u64 = (0..other.n).fold(1u64, |acc, _| acc * other.d as u64);
        let mut amps = BTreeMap::new();
        for (&ia, &za) in &self.amps {
            for (&ib, &zb) in &other.amps {
                let z = za * zb;
                if z.re != 0.0 || z.im != 0.0 {
                    amps.insert(ia * shift + ib, z);
                }
            }
        }
        Ok(Self { n, d: self.d, amps })
    }

    /// Reduced density operator after tracing out `traced_out`, computed
    /// directly from the sparse amplitude map.
    pub fn partial_trace(&self, traced_out: &[usize]) -> Result<DensityOperator, TensorError> {
        let traced: BTreeSet<usize> = traced_out.iter().copied().collect();
        if traced.len() != traced_out.len() {
            let dup = traced_out
                .iter()
                .find(|p| traced_out.iter().filter(|q| q == p).count() > 1)
                .copied()
                .unwrap_or(0);
            return Err(TensorError::DuplicateParty(dup));
        }
        for &p in &traced {
            if p >= self.n {
                return Err(TensorError::PartyOutOfRange { party: p, n: self.n });
            }
        }
        let kept: Vec<usize> = (0..self.n).filter(|p| !traced.contains(p)).collect();
        if kept.is_empty() {
            return Err(TensorError::EmptyComplement);
        }
        let dim = kept.iter().fold(1usize, |acc, _| acc * self.d);

        // Group amplitudes by the traced-out sub-index; each group contributes
        // a rank-1 block. A BTreeMap keeps the accumulation order fixed so
        // results are bitwise reproducible.
        let mut groups: BTreeMap<u64, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (&idx, &amp) in &self.amps {
            let digits = self.unpack(idx);
            let mut kept_pos: usize = 0;
            for &p in &kept {
                kept_pos = kept_pos * self.d + digits[p] as usize;
            }
            let mut traced_idx: u64 = 0;
            for &p in &traced {
                traced_idx = traced_idx * self.d as u64 + digits[p] as u64;
            }
            groups.entry(traced_idx).or_default().push((kept_pos, amp));
        }

        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for group in groups.values() {
            for &(row, za) in group {
                for &(col, zb) in group {
                    let cur = matrix.get(row, col);
                    matrix.set(row, col, cur + za * zb.conj());
                }
            }
        }
        Ok(DensityOperator::new(kept, matrix))
    }

    /// Projects the listed parties onto computational-basis outcomes and
    /// drops them; the remaining parties keep their relative order.
    pub fn project_parties(
        &self,
        outcomes: &BTreeMap<usize, u8>,
    ) -> Result<Self, TensorError> {
        for (&p, &o) in outcomes {
            if p >= self.n {
                return Err(TensorError::PartyOutOfRange { party: p, n: self.n });
            }
            if o as usize >= self.d {
                return Err(TensorError::DigitOutOfRange { digit: o, d: self.d });
            }
        }
        let kept: Vec<usize> = (0..self.n).filter(|p| !outcomes.contains_key(p)).collect();
        if kept.is_empty() {
            return Err(TensorError::EmptyComplement);
        }
        let mut out = Self::zero(kept.len(), self.d)?;
        for (&idx, &amp) in &self.amps {
            let digits = self.unpack(idx);
            if outcomes.iter().all(|(&p, &o)| digits[p] == o) {
                let remaining: Vec<u8> = kept.iter().map(|&p| digits[p]).collect();
                out.add_term(&remaining, amp)?;
            }
        }
        Ok(out)
    }

    /// True when the states differ only by a global complex scale, tested
    /// through the saturation of the Cauchy-Schwarz bound (relative `tol`).
    pub fn proportional_to(&self, other: &Self, tol: f64) -> Result<bool, TensorError> {
        let bound = self.norm_sqr() * other.norm_sqr();
        if bound == 0.0 {
            return Err(TensorError::ZeroNorm);
        }
        let overlap = self.inner_product(other)?.norm_sqr();
        Ok((overlap - bound).abs() <= tol * bound)
    }

    /// Applies a single-party operator: `|b'> <- sum_b U[b',b] |b>` on `party`.
    pub fn apply_local(&self, party: usize, op: &ComplexMatrix) -> Result<Self, TensorError> {
        if party >= self.n {
            return Err(TensorError::PartyOutOfRange { party, n: self.n });
        }
        if op.rows() != self.d || op.cols() != self.d {
            return Err(TensorError::MatrixShape(op.rows(), op.cols(), self.d, self.d));
        }
        let mut out = Self::zero(self.n, self.d)?;
        for (&idx, &amp) in &self.amps {
            let mut digits = self.unpack(idx);
            let b = digits[party] as usize;
            for b_new in 0..self.d {
                let z = op.get(b_new, b) * amp;
                if z.re != 0.0 || z.im != 0.0 {
                    digits[party] = b_new as u8;
                    out.add_term(&digits, z)?;
                }
            }
        }
        Ok(out)
    }

    /// Serializable form, amplitudes sorted by packed index.
    pub fn to_json(&self) -> StateJson {
        StateJson {
            n: self.n,
            d: self.d,
            amps: self
                .terms()
                .map(|(digits, z)| AmplitudeJson {
                    i: digits,
                    re: z.re,
                    im: z.im,
                })
                .collect(),
        }
    }

    /// Parses the wire form; amplitudes may arrive in any order but duplicate
    /// index tuples are rejected.
    pub fn from_json(json: &StateJson) -> Result<Self, TensorError> {
        let mut state = Self::zero(json.n, json.d)?;
        for amp in &json.amps {
            let idx = state.pack(&amp.i)?;
            if state.amps.contains_key(&idx) {
                return Err(TensorError::DuplicateIndex(amp.i.clone()));
            }
            let z = Complex64::new(amp.re, amp.im);
            if z.re != 0.0 || z.im != 0.0 {
                state.amps.insert(idx, z);
            }
        }
        Ok(state)
    }
}

/// Wire format: `{"n": ..., "d": ..., "amps": [{"i": [...], "re": .., "im": ..}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub d: usize,
    pub amps: Vec<AmplitudeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub i: Vec<u8>,
    pub re: f64,
    pub im: f64,
}
