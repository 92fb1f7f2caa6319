use crate::gf2::{BinaryMatrix, BitVector, Field, FieldElement};

use super::poly;
use super::CodeError;

/// Largest length for which per-position syndrome columns are cached.
const COLUMN_CACHE_LIMIT: usize = 1 << 14;

/// Binary BCH code with odd-power syndrome rows.
///
/// Lengths that are a power of two use the extended form: every field element
/// (including zero) is a locator and an overall parity row is added, which
/// raises the minimum distance to `2e + 2`. Other lengths shorten the
/// primitive code of length `2^s − 1`; position `i` has locator
/// `element(i + 1)`.
#[derive(Clone, Debug)]
pub struct BchCode {
    n: usize,
    e: usize,
    field: Field,
    extended: bool,
    /// indices into the full row list that form a row basis
    basis: Vec<usize>,
    /// for each full row, its expression over the basis rows
    expand: Vec<BitVector>,
    columns: Option<Vec<BitVector>>,
}

impl BchCode {
    pub fn new(n: usize, e: usize) -> Result<BchCode, CodeError> {
        if e == 0 || n < 3 || 2 * e + 1 > n {
            return Err(CodeError::InvalidParameters(format!(
                "BCH code needs n >= 3, e >= 1 and 2e+1 <= n (n={n}, e={e})"
            )));
        }
        let extended = n.is_power_of_two();
        let s = if extended {
            n.trailing_zeros() as usize
        } else {
            (usize::BITS - n.leading_zeros()) as usize
        };
        let field = Field::new(s)?;
        let mut code = BchCode {
            n,
            e,
            field,
            extended,
            basis: Vec::new(),
            expand: Vec::new(),
            columns: None,
        };
        code.select_basis();
        if n <= COLUMN_CACHE_LIMIT {
            let cols = (0..n).map(|i| code.column(i)).collect();
            code.columns = Some(cols);
        }
        Ok(code)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn design_errors(&self) -> usize {
        self.e
    }

    /// Guaranteed minimum distance.
    pub fn designed_distance(&self) -> usize {
        if self.extended {
            2 * self.e + 2
        } else {
            2 * self.e + 1
        }
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of parity bits (rank of the syndrome map).
    pub fn redundancy(&self) -> usize {
        self.basis.len()
    }

    fn full_rows(&self) -> usize {
        self.e * self.field.degree() + usize::from(self.extended)
    }

    fn locator(&self, i: usize) -> FieldElement {
        let v = if self.extended { i } else { i + 1 } as u64;
        self.field.from_u64(v)
    }

    /// Unreduced syndrome column: parity bit (extended form) then the bits
    /// of `X, X³, …, X^(2e−1)`.
    fn full_column(&self, i: usize) -> BitVector {
        let f = &self.field;
        let s = f.degree();
        let x = self.locator(i);
        let x2 = f.square(&x);
        let mut col = BitVector::zeros(self.full_rows());
        let mut off = 0;
        if self.extended {
            col.set(0, true);
            off = 1;
        }
        let mut p = x;
        for j in 0..self.e {
            col.write_at(off + j * s, &p.to_bits());
            p = f.mul(&p, &x2);
        }
        col
    }

    fn column(&self, i: usize) -> BitVector {
        self.full_column(i).project(&self.basis)
    }

    /// Chooses independent full rows greedily. Row dependencies are the same
    /// as those among rows of any matrix whose columns span the column space,
    /// so only a column basis (at most `full_rows` columns) is examined.
    fn select_basis(&mut self) {
        let rows = self.full_rows();
        let mut span = crate::gf2::Echelon::new(rows);
        let mut col_basis = Vec::new();
        for i in 0..self.n {
            if span.rank() == rows {
                break;
            }
            let c = self.full_column(i);
            if span.insert(&c) {
                col_basis.push(c);
            }
        }
        let k = col_basis.len();
        // row j of the reduced matrix, as a k-bit vector
        let reduced: Vec<BitVector> = (0..rows)
            .map(|j| BitVector::from_bits(&col_basis.iter().map(|c| c.get(j)).collect::<Vec<_>>()))
            .collect();
        let mut tracked: Vec<(BitVector, BitVector)> = Vec::new();
        let mut basis = Vec::new();
        let mut combos: Vec<Option<BitVector>> = vec![None; rows];
        for (j, row) in reduced.iter().enumerate() {
            let mut v = row.clone();
            let mut combo = BitVector::zeros(rows);
            combo.set(j, true);
            for (bv, bc) in &tracked {
                let p = bv.first_one().expect("nonzero basis row");
                if v.get(p) {
                    v.xor_assign(bv).expect("width");
                    combo.xor_assign(bc).expect("width");
                }
            }
            if v.is_zero() {
                // combo marks rows (j and earlier basis rows) summing to zero
                combo.set(j, false);
                combos[j] = Some(combo);
            } else {
                tracked.push((v, combo));
                basis.push(j);
            }
            debug_assert!(tracked.len() <= k);
        }
        let pos_in_basis: Vec<Option<usize>> = {
            let mut p = vec![None; rows];
            for (bi, &j) in basis.iter().enumerate() {
                p[j] = Some(bi);
            }
            p
        };
        self.expand = (0..rows)
            .map(|j| match &combos[j] {
                None => BitVector::unit(basis.len(), pos_in_basis[j].expect("basis row")),
                Some(c) => {
                    let mut out = BitVector::zeros(basis.len());
                    for r in c.ones() {
                        out.set(pos_in_basis[r].expect("combination over basis rows"), true);
                    }
                    out
                }
            })
            .collect();
        self.basis = basis;
    }

    /// Explicit parity-check matrix (`redundancy × n`).
    pub fn parity_matrix(&self) -> BinaryMatrix {
        let r = self.redundancy();
        let mut h = BinaryMatrix::zeros(r, self.n);
        for i in 0..self.n {
            for j in self.syndrome_column(i).ones() {
                h.set(j, i, true);
            }
        }
        h
    }

    /// Syndrome of the unit vector at 0-based position `i`.
    pub fn syndrome_column(&self, i: usize) -> BitVector {
        match &self.columns {
            Some(c) => c[i].clone(),
            None => self.column(i),
        }
    }

    pub fn syndrome(&self, x: &BitVector) -> Result<BitVector, CodeError> {
        if x.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.syndrome_of_positions(x.ones()))
    }

    /// Syndrome of the vector with ones at the given positions (each listed
    /// position is added once, so repeats cancel).
    pub fn syndrome_of_positions(&self, positions: impl IntoIterator<Item = usize>) -> BitVector {
        let mut s = BitVector::zeros(self.redundancy());
        for i in positions {
            match &self.columns {
                Some(c) => s.xor_assign(&c[i]),
                None => s.xor_assign(&self.column(i)),
            }
            .expect("syndrome width");
        }
        s
    }

    /// Positions of the unique error pattern of weight at most `e` with the
    /// given syndrome, sorted ascending.
    pub fn decode_positions(&self, s: &BitVector) -> Result<Vec<usize>, CodeError> {
        let r = self.redundancy();
        if s.len() != r {
            return Err(CodeError::LengthMismatch { expected: r, got: s.len() });
        }
        if s.is_zero() {
            return Ok(Vec::new());
        }
        match self.decode_algebraic(s) {
            Some(p) => Ok(p),
            None if self.e <= 2 && self.n <= 1024 => self.decode_exhaustive(s, self.e),
            None => Err(CodeError::Uncorrectable),
        }
    }

    pub fn decode_syndrome(&self, s: &BitVector) -> Result<BitVector, CodeError> {
        let mut out = BitVector::zeros(self.n);
        for p in self.decode_positions(s)? {
            out.set(p, true);
        }
        Ok(out)
    }

    fn decode_algebraic(&self, s: &BitVector) -> Option<Vec<usize>> {
        let f = &self.field;
        let m = f.degree();
        let rows = self.full_rows();
        let mut full = BitVector::zeros(rows);
        for j in 0..rows {
            if self.expand[j].dot(s) {
                full.set(j, true);
            }
        }
        let off = usize::from(self.extended);
        let parity = self.extended && full.get(0);
        // S_1 .. S_2e with S_2j = S_j^2
        let mut sums: Vec<FieldElement> = vec![f.zero(); 2 * self.e];
        for j in 0..self.e {
            sums[2 * j] = f.from_bits(&full.slice(off + j * m, m)).ok()?;
        }
        for k in 1..=self.e {
            sums[2 * k - 1] = f.square(&sums[k - 1]);
        }
        let (lambda, l) = poly::berlekamp_massey(f, &sums);
        if l > self.e || poly::degree(&lambda) != Some(l) {
            return None;
        }
        let roots = poly::find_roots(f, &lambda)?;
        if roots.len() != l {
            return None;
        }
        let mut pos = Vec::with_capacity(l + 1);
        for root in roots {
            let x = f.inv(&root).ok()?;
            let v = x.to_u64() as usize;
            let p = if self.extended { v } else { v.checked_sub(1)? };
            if p >= self.n {
                return None;
            }
            pos.push(p);
        }
        if self.extended && (parity ^ (l % 2 == 1)) {
            // the zero locator sits at position 0 and only shows in the parity
            pos.push(0);
        }
        if pos.len() > self.e {
            return None;
        }
        pos.sort_unstable();
        if self.syndrome_of_positions(pos.iter().copied()) != *s {
            return None;
        }
        Some(pos)
    }

    /// Brute-force search over all patterns of weight `1..=max_weight`
    /// (`max_weight ≤ 2`).
    pub fn decode_exhaustive(&self, s: &BitVector, max_weight: usize) -> Result<Vec<usize>, CodeError> {
        if s.is_zero() {
            return Ok(Vec::new());
        }
        let cols: Vec<BitVector> = (0..self.n).map(|i| self.syndrome_column(i)).collect();
        if max_weight >= 1 {
            if let Some(i) = cols.iter().position(|c| c == s) {
                return Ok(vec![i]);
            }
        }
        if max_weight >= 2 {
            for i in 0..self.n {
                let rest = s.xor(&cols[i]).expect("width");
                if let Some(j) = cols[i + 1..].iter().position(|c| *c == rest) {
                    return Ok(vec![i, i + 1 + j]);
                }
            }
        }
        Err(CodeError::Uncorrectable)
    }
}
