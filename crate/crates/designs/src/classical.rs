//! Classical orthogonal arrays and Latin squares/cubes/hypercubes, with the
//! conversions between them.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("array has no rows or no columns")]
    EmptyArray,

    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },

    #[error("digit {digit} out of range for alphabet size {d}")]
    DigitOutOfRange { digit: u8, d: usize },

    #[error("alphabet size must be in 2..=255, got {0}")]
    BadAlphabet(usize),

    #[error("strength {k} out of range for {n} columns")]
    StrengthOutOfRange { k: usize, n: usize },

    #[error("{r} rows cannot have strength {k}: not divisible by {block} = d^k")]
    IndexNotIntegral { r: usize, k: usize, block: usize },

    #[error("addressing is ambiguous: {0}")]
    AmbiguousAddressing(String),

    #[error("hypercubes disagree in size or dimension")]
    ShapeMismatch,

    #[error("cell count {got} does not match d^k = {expected}")]
    CellCount { got: usize, expected: usize },

    #[error("orthogonality needs at least two squares, got {0}")]
    NeedTwoSquares(usize),

    #[error("operation requires squares (dimension 2), got dimension {0}")]
    NotSquares(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An `r x n` digit array over `0..d-1` with a claimed strength `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    r: usize,
    n: usize,
    d: usize,
    strength: usize,
    entries: Vec<u8>,
}

/// Result of checking the strength/index and irredundancy conditions.
#[derive(Debug, Clone, Serialize)]
pub struct OaCheck {
    pub strength_ok: bool,
    pub lambda: usize,
    pub irredundant: bool,
    /// First column subset violating the balance condition.
    pub strength_witness: Option<Vec<usize>>,
    /// First complement subset containing a repeated row.
    pub redundancy_witness: Option<Vec<usize>>,
}

impl OrthogonalArray {
    pub fn new(
        d: usize,
        strength: usize,
        rows: Vec<Vec<u8>>,
    ) -> Result<Self, DesignError> {
        if !(2..=255).contains(&d) {
            return Err(DesignError::BadAlphabet(d));
        }
        let r = rows.len();
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if r == 0 || n == 0 {
            return Err(DesignError::EmptyArray);
        }
        if strength == 0 || strength > n {
            return Err(DesignError::StrengthOutOfRange { k: strength, n });
        }
        let mut entries = Vec::with_capacity(r * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(DesignError::RaggedRow {
                    row: i,
                    got: row.len(),
                    expected: n,
                });
            }
            for &digit in row {
                if digit as usize >= d {
                    return Err(DesignError::DigitOutOfRange { digit, d });
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { r, n, d, strength, entries })
    }

    pub fn rows(&self) -> usize {
        self.r
    }

    pub fn columns(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.d
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    /// The same array with a different claimed strength.
    pub fn with_strength(&self, strength: usize) -> Result<Self, DesignError> {
        if strength == 0 || strength > self.n {
            return Err(DesignError::StrengthOutOfRange {
                k: strength,
                n: self.n,
            });
        }
        Ok(Self {
            strength,
            ..self.clone()
        })
    }

    /// Checks the strength-`k` balance condition over all `C(n,k)` column
    /// subsets and, separately, irredundancy over the `C(n, n-k)`
    /// complements (vacuously true when `n = k`).
    pub fn verify(&self) -> Result<OaCheck, DesignError> {
        let k = self.strength;
        let block = self.d.checked_pow(k as u32).expect("d^k fits usize");
        if self.r % block != 0 {
            return Err(DesignError::IndexNotIntegral {
                r: self.r,
                k,
                block,
            });
        }
        let lambda = self.r / block;

        let mut strength_ok = true;
        let mut strength_witness = None;
        for subset in (0..self.n).combinations(k) {
            let mut counts = vec![0usize; block];
            for row in 0..self.r {
                let mut idx = 0usize;
                for &col in &subset {
                    idx = idx * self.d + self.entry(row, col) as usize;
                }
                counts[idx] += 1;
            }
            if counts.iter().any(|&c| c != lambda) {
                strength_ok = false;
                strength_witness = Some(subset);
                break;
            }
        }

        let mut irredundant = true;
        let mut redundancy_witness = None;
        if self.n > k {
            for subset in (0..self.n).combinations(self.n - k) {
                let mut seen: Vec<Vec<u8>> = Vec::with_capacity(self.r);
                for row in 0..self.r {
                    let projection: Vec<u8> =
                        subset.iter().map(|&col| self.entry(row, col)).collect();
                    if seen.contains(&projection) {
                        irredundant = false;
                        redundancy_witness = Some(subset.clone());
                        break;
                    }
                    seen.push(projection);
                }
                if !irredundant {
                    break;
                }
            }
        }

        Ok(OaCheck {
            strength_ok,
            lambda,
            irredundant,
            strength_witness,
            redundancy_witness,
        })
    }

    /// Row multiset comparison, ignoring row order.
    pub fn same_rows(&self, other: &Self) -> bool {
        if (self.r, self.n, self.d) != (other.r, other.n, other.d) {
            return false;
        }
        let mut a: Vec<&[u8]> = (0..self.r).map(|i| self.row(i)).collect();
        let mut b: Vec<&[u8]> = (0..other.r).map(|i| other.row(i)).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// One row per line; digits space separated for `d <= 10`, comma
    /// separated otherwise.
    pub fn to_text(&self) -> String {
        let sep = if self.d <= 10 { " " } else { "," };
        (0..self.r)
            .map(|i| self.row(i).iter().map(u8::to_string).join(sep))
            .join("\n")
    }

    /// Parses the text format. The alphabet defaults to `max digit + 1`
    /// (at least 2) unless given explicitly.
    pub fn from_text(
        text: &str,
        strength: usize,
        alphabet: Option<usize>,
    ) -> Result<Self, DesignError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = if line.contains(',') {
                line.split(',').map(str::trim).collect()
            } else {
                line.split_whitespace().collect()
            };
            let mut row = Vec::with_capacity(tokens.len());
            for token in tokens {
                let digit: u8 = token.parse().map_err(|_| DesignError::Parse {
                    line: lineno + 1,
                    message: format!("bad digit {token:?}"),
                })?;
                row.push(digit);
            }
            rows.push(row);
        }
        let max = rows
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let d = alphabet.unwrap_or((max + 1).max(2));
        Self::new(d, strength, rows)
    }
}

/// A `d^k`-cell digit hypercube; along every axis-parallel line the values
/// are a permutation of `0..d-1` when the Latin condition holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalLatinHypercube {
    d: usize,
    k: usize,
    cells: Vec<u8>,
}

/// Serializable form of a classical hypercube (cells row major).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatinJson {
    pub d: usize,
    pub k: usize,
    pub cells: Vec<u8>,
}

impl ClassicalLatinHypercube {
    pub fn new(d: usize, k: usize, cells: Vec<u8>) -> Result<Self, DesignError> {
        if !(2..=255).contains(&d) {
            return Err(DesignError::BadAlphabet(d));
        }
        if k == 0 {
            return Err(DesignError::StrengthOutOfRange { k, n: 0 });
        }
        let expected = d.pow(k as u32);
        if cells.len() != expected {
            return Err(DesignError::CellCount {
                got: cells.len(),
                expected,
            });
        }
        for &digit in &cells {
            if digit as usize >= d {
                return Err(DesignError::DigitOutOfRange { digit, d });
            }
        }
        Ok(Self { d, k, cells })
    }

    /// Square constructor from nested rows.
    pub fn square(rows: Vec<Vec<u8>>) -> Result<Self, DesignError> {
        let d = rows.len();
        let cells = rows.into_iter().flatten().collect();
        Self::new(d, 2, cells)
    }

    pub fn size(&self) -> usize {
        self.d
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    fn offset(&self, address: &[u8]) -> usize {
        debug_assert_eq!(address.len(), self.k);
        address
            .iter()
            .fold(0usize, |acc, &digit| acc * self.d + digit as usize)
    }

    pub fn value(&self, address: &[u8]) -> u8 {
        self.cells[self.offset(address)]
    }

    /// All addresses in lexicographic order.
    pub fn addresses(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let (d, k, total) = (self.d, self.k, self.cells.len());
        (0..total).map(move |mut idx| {
            let mut address = vec![0u8; k];
            for slot in address.iter_mut().rev() {
                *slot = (idx % d) as u8;
                idx /= d;
            }
            address
        })
    }

    /// True iff every axis-parallel line is a permutation of the symbols.
    pub fn is_latin(&self) -> bool {
        self.latin_witness().is_none()
    }

    /// First violated line as `(axis, fixed coordinates)`.
    pub fn latin_witness(&self) -> Option<(usize, Vec<u8>)> {
        for axis in 0..self.k {
            let others: Vec<usize> = (0..self.k).filter(|&a| a != axis).collect();
            let lines = self.d.pow(others.len() as u32);
            for mut line_idx in 0..lines {
                let mut address = vec![0u8; self.k];
                let fixed_idx = line_idx;
                for &pos in others.iter().rev() {
                    address[pos] = (line_idx % self.d) as u8;
                    line_idx /= self.d;
                }
                let mut seen = vec![false; self.d];
                for v in 0..self.d {
                    address[axis] = v as u8;
                    seen[self.value(&address) as usize] = true;
                }
                if seen.iter().any(|&s| !s) {
                    let mut fixed = Vec::with_capacity(others.len());
                    let mut rem = fixed_idx;
                    for _ in &others {
                        fixed.push((rem % self.d) as u8);
                        rem /= self.d;
                    }
                    fixed.reverse();
                    return Some((axis, fixed));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> LatinJson {
        LatinJson {
            d: self.d,
            k: self.k,
            cells: self.cells.clone(),
        }
    }

    pub fn from_json(json: &LatinJson) -> Result<Self, DesignError> {
        Self::new(json.d, json.k, json.cells.clone())
    }
}

/// Splits an index-unity orthogonal array into `n - address_cols` Latin
/// hypercubes: the first `address_cols` columns address the cells, each
/// remaining column fills one hypercube.
pub fn oa_to_latin(
    oa: &OrthogonalArray,
    address_cols: usize,
) -> Result<Vec<ClassicalLatinHypercube>, DesignError> {
    let k = address_cols;
    let n = oa.columns();
    if k == 0 || k >= n {
        return Err(DesignError::StrengthOutOfRange { k, n });
    }
    let d = oa.alphabet();
    let block = d.pow(k as u32);
    if oa.rows() != block {
        return Err(DesignError::AmbiguousAddressing(format!(
            "index must be 1: got {} rows for {} addresses",
            oa.rows(),
            block
        )));
    }
    // Each address must occur exactly once among the address columns.
    let mut row_of_address = vec![usize::MAX; block];
    for row in 0..oa.rows() {
        let mut idx = 0usize;
        for col in 0..k {
            idx = idx * d + oa.entry(row, col) as usize;
        }
        if row_of_address[idx] != usize::MAX {
            return Err(DesignError::AmbiguousAddressing(format!(
                "address {:?} repeats",
                &oa.row(row)[..k]
            )));
        }
        row_of_address[idx] = row;
    }

    let m = n - k;
    let mut cubes = Vec::with_capacity(m);
    for t in 0..m {
        let cells: Vec<u8> = row_of_address
            .iter()
            .map(|&row| oa.entry(row, k + t))
            .collect();
        cubes.push(ClassicalLatinHypercube::new(d, k, cells)?);
    }
    Ok(cubes)
}

/// Inverse of [`oa_to_latin`]: one row per address, values appended.
pub fn latin_to_oa(
    cubes: &[ClassicalLatinHypercube],
) -> Result<OrthogonalArray, DesignError> {
    let first = cubes.first().ok_or(DesignError::EmptyArray)?;
    let (d, k) = (first.size(), first.dimension());
    if cubes.iter().any(|c| c.size() != d || c.dimension() != k) {
        return Err(DesignError::ShapeMismatch);
    }
    let rows: Vec<Vec<u8>> = first
        .addresses()
        .map(|address| {
            let mut row = address.clone();
            row.extend(cubes.iter().map(|cube| cube.value(&address)));
            row
        })
        .collect();
    OrthogonalArray::new(d, k, rows)
}

/// Result of a mutual-orthogonality check over a family of Latin squares.
#[derive(Debug, Clone, Serialize)]
pub struct MolsCheck {
    pub ok: bool,
    pub all_latin: bool,
    /// First square pair whose ordered-value pairs repeat.
    pub witness: Option<(usize, usize)>,
}

/// True iff every square is Latin and every pair is orthogonal (the `d^2`
/// ordered value pairs are all distinct).
pub fn verify_mols(squares: &[ClassicalLatinHypercube]) -> Result<MolsCheck, DesignError> {
    if squares.len() < 2 {
        return Err(DesignError::NeedTwoSquares(squares.len()));
    }
    let d = squares[0].size();
    for square in squares {
        if square.dimension() != 2 {
            return Err(DesignError::NotSquares(square.dimension()));
        }
        if square.size() != d {
            return Err(DesignError::ShapeMismatch);
        }
    }
    let all_latin = squares.iter().all(ClassicalLatinHypercube::is_latin);
    let mut witness = None;
    'pairs: for (a, b) in (0..squares.len()).tuple_combinations() {
        let mut seen = vec![false; d * d];
        for address in squares[a].addresses() {
            let pair =
                squares[a].value(&address) as usize * d + squares[b].value(&address) as usize;
            if seen[pair] {
                witness = Some((a, b));
                break 'pairs;
            }
            seen[pair] = true;
        }
    }
    Ok(MolsCheck {
        ok: all_latin && witness.is_none(),
        all_latin,
        witness,
    })
}
