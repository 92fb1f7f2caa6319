use super::{Field, FieldElement};

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
fn eliminate(f: &Field, a: &mut [Vec<FieldElement>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(p) = (next..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(next, p);
        let inv = f.inv(&a[next][col]).expect("nonzero pivot");
        for c in a[next].iter_mut() {
            *c = f.mul(c, &inv);
        }
        let pr = a[next].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, pc) in row.iter_mut().zip(&pr) {
                *c += f.mul(&factor, pc);
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// Rank of a matrix over the field.
pub fn field_rank(f: &Field, rows: &[Vec<FieldElement>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut a = rows.to_vec();
    eliminate(f, &mut a, cols).len()
}

/// Unique solution of `A·x = y`, or `None` when the system is inconsistent
/// or underdetermined.
pub fn field_solve(f: &Field, a: &[Vec<FieldElement>], y: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let mut r = row.clone();
            r.push(yi.clone());
            r
        })
        .collect();
    let pivots = eliminate(f, &mut aug, cols);
    if pivots.len() < cols || aug[pivots.len()..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Moore matrix with rows `(σ_j^(2^k))_j` for `k = 0..rows`.
pub fn moore_matrix(f: &Field, sigmas: &[FieldElement], rows: usize) -> Vec<Vec<FieldElement>> {
    let mut cur: Vec<FieldElement> = sigmas.to_vec();
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        out.push(cur.clone());
        cur = cur.iter().map(|s| f.square(s)).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::ff_make;

    #[test]
    fn solve_small_system() {
        let f = ff_make(8).unwrap();
        let e = |v| f.from_u64(v);
        let a = vec![vec![e(1), e(2)], vec![e(3), e(7)], vec![e(0), e(5)]];
        let x = vec![e(9), e(200)];
        let y: Vec<FieldElement> = a
            .iter()
            .map(|r| &f.mul(&r[0], &x[0]) + &f.mul(&r[1], &x[1]))
            .collect();
        assert_eq!(field_solve(&f, &a, &y).unwrap(), x);
        let mut bad = y.clone();
        bad[2] += e(1);
        assert!(field_solve(&f, &a, &bad).is_none());
    }

    #[test]
    fn moore_rank_tracks_f2_independence() {
        let f = ff_make(10).unwrap();
        let e = |v| f.from_u64(v);
        assert_eq!(field_rank(&f, &moore_matrix(&f, &[e(1), e(2), e(4)], 3)), 3);
        // 1 + 2 = 3 is an F₂ dependency
        assert_eq!(field_rank(&f, &moore_matrix(&f, &[e(1), e(2), e(3)], 3)), 2);
    }
}
