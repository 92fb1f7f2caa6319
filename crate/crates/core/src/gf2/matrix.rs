use std::fmt;

use super::bits::BitVector;
use super::GfError;

/// Dense matrix over F₂ stored as row bit vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Solution(BitVector),
    Inconsistent,
    Underdetermined,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BinaryMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, GfError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(GfError::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(BinaryMatrix { cols, rows })
    }

    /// Parses rows of `0`/`1` strings. Panics on malformed input; meant for
    /// literals.
    pub fn from_strs(rows: &[&str]) -> Self {
        let rows: Vec<BitVector> = rows
            .iter()
            .map(|s| BitVector::from_bit_str(s).expect("0/1 string"))
            .collect();
        let cols = rows.first().map_or(0, BitVector::len);
        Self::from_rows(cols, rows).expect("rows of equal length")
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<(), GfError> {
        if row.len() != self.cols {
            return Err(GfError::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Rows of `self` followed by rows of `below`.
    pub fn stack(&self, below: &BinaryMatrix) -> Result<BinaryMatrix, GfError> {
        if below.cols != self.cols {
            return Err(GfError::DimensionMismatch {
                expected: self.cols,
                got: below.cols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(below.rows.iter().cloned());
        Ok(BinaryMatrix {
            cols: self.cols,
            rows,
        })
    }

    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, GfError> {
        if x.len() != self.cols {
            return Err(GfError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        self.rows.iter().filter(|r| ech.insert(r)).count()
    }

    /// Inverse of a square matrix by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<BinaryMatrix, GfError> {
        let n = self.rows.len();
        if n != self.cols {
            return Err(GfError::DimensionMismatch {
                expected: n,
                got: self.cols,
            });
        }
        let mut a = self.rows.clone();
        let mut inv: Vec<BitVector> = (0..n).map(|i| BitVector::unit(n, i)).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r].get(col)).ok_or(GfError::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r].get(col) {
                    let (src_a, src_i) = (a[col].clone(), inv[col].clone());
                    a[r].xor_assign(&src_a)?;
                    inv[r].xor_assign(&src_i)?;
                }
            }
        }
        Ok(BinaryMatrix { cols: n, rows: inv })
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Solves `A·s = y` over F₂.
pub fn mat_solve(a: &BinaryMatrix, y: &BitVector) -> Result<SolveResult, GfError> {
    if y.len() != a.nrows() {
        return Err(GfError::DimensionMismatch {
            expected: a.nrows(),
            got: y.len(),
        });
    }
    let n = a.ncols();
    // augmented rows: coefficients then the target bit in column n
    let mut rows: Vec<BitVector> = a
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut aug = BitVector::zeros(n + 1);
            aug.write_at(0, r);
            aug.set(n, y.get(i));
            aug
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..n {
        let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, p);
        let pr = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pr)?;
            }
        }
        pivots.push(col);
        next += 1;
    }
    if rows[next..].iter().any(|r| r.get(n)) {
        return Ok(SolveResult::Inconsistent);
    }
    if pivots.len() < n {
        return Ok(SolveResult::Underdetermined);
    }
    let mut s = BitVector::zeros(n);
    for (i, &col) in pivots.iter().enumerate() {
        if rows[i].get(n) {
            s.set(col, true);
        }
    }
    Ok(SolveResult::Solution(s))
}

/// Rows `H̄` such that `H` stacked over `H̄` is invertible. `H̄` consists of
/// standard basis vectors in lexicographic order (`0…01` first, i.e. from the
/// last coordinate backwards), each kept when it enlarges the row space.
pub fn full_rank_completion(h: &BinaryMatrix) -> Result<BinaryMatrix, GfError> {
    let n = h.ncols();
    let mut ech = Echelon::new(n);
    for r in h.rows() {
        if !ech.insert(r) {
            return Err(GfError::RowDeficient);
        }
    }
    let mut out = BinaryMatrix::zeros(0, n);
    for j in (0..n).rev() {
        if ech.rank() == n {
            break;
        }
        let e = BitVector::unit(n, j);
        if ech.insert(&e) {
            out.rows.push(e);
        }
    }
    Ok(out)
}

/// Incrementally maintained row echelon basis with pivot lookup.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    /// basis rows, each with a distinct pivot (lowest set bit)
    rows: Vec<BitVector>,
    pivot_of: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivot_of: vec![None; width],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Residual of `v` after elimination against the basis.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        while let Some(p) = first_reducible(&v, &self.pivot_of) {
            let row = self.pivot_of[p].expect("pivot present");
            v.xor_assign(&self.rows[row]).expect("equal widths");
        }
        v
    }

    /// Adds `v` to the basis; returns whether it was independent.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                self.pivot_of[p] = Some(self.rows.len());
                self.rows.push(r);
                true
            }
        }
    }
}

fn first_reducible(v: &BitVector, pivot_of: &[Option<usize>]) -> Option<usize> {
    v.ones().find(|&i| pivot_of[i].is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_str(s).unwrap()
    }

    #[test]
    fn solve_examples() {
        let id = BinaryMatrix::identity(2);
        assert_eq!(mat_solve(&id, &bv("10")).unwrap(), SolveResult::Solution(bv("10")));
        let dup = BinaryMatrix::from_strs(&["11", "11"]);
        assert_eq!(mat_solve(&dup, &bv("10")).unwrap(), SolveResult::Inconsistent);
        let wide = BinaryMatrix::from_strs(&["11"]);
        assert_eq!(mat_solve(&wide, &bv("1")).unwrap(), SolveResult::Underdetermined);
        assert!(matches!(
            mat_solve(&wide, &bv("10")),
            Err(GfError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn completion_examples() {
        let h = BinaryMatrix::from_strs(&["10"]);
        assert_eq!(full_rank_completion(&h).unwrap(), BinaryMatrix::from_strs(&["01"]));
        let h = BinaryMatrix::from_strs(&["101", "011"]);
        let hb = full_rank_completion(&h).unwrap();
        assert_eq!(hb, BinaryMatrix::from_strs(&["001"]));
        assert_eq!(h.stack(&hb).unwrap().rank(), 3);
        let full = full_rank_completion(&BinaryMatrix::identity(4)).unwrap();
        assert_eq!((full.nrows(), full.ncols()), (0, 4));
        let deficient = BinaryMatrix::from_strs(&["110", "110"]);
        assert_eq!(full_rank_completion(&deficient), Err(GfError::RowDeficient));
    }

    #[test]
    fn inverse_round_trip() {
        let a = BinaryMatrix::from_strs(&["101", "011", "001"]);
        let inv = a.inverse().unwrap();
        for j in 0..3 {
            let e = BitVector::unit(3, j);
            assert_eq!(a.mul_vec(&inv.mul_vec(&e).unwrap()).unwrap(), e);
        }
        assert_eq!(BinaryMatrix::from_strs(&["11", "11"]).inverse(), Err(GfError::Singular));
    }

    fn arb_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = BinaryMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
                BinaryMatrix::from_rows(c, rows.iter().map(|b| BitVector::from_bits(b)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn solutions_satisfy_system(a in arb_matrix(12, 12), seed in any::<u64>()) {
            let y = BitVector::from_u64(a.nrows(), seed);
            if let SolveResult::Solution(s) = mat_solve(&a, &y).unwrap() {
                prop_assert_eq!(a.mul_vec(&s).unwrap(), y);
            }
        }

        #[test]
        fn completion_reaches_full_rank(a in arb_matrix(10, 10)) {
            // reduce to an independent row set first
            let mut ech = Echelon::new(a.ncols());
            let rows: Vec<BitVector> = a.rows().iter().filter(|r| ech.insert(r)).cloned().collect();
            let h = BinaryMatrix::from_rows(a.ncols(), rows).unwrap();
            let hb = full_rank_completion(&h).unwrap();
            prop_assert_eq!(h.stack(&hb).unwrap().rank(), a.ncols());
        }
    }
}
