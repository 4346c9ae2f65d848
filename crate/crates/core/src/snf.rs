//! Smith normal form over the integers, tracking the column transform.
//!
//! Pivot choice is deterministic: the entry of smallest nonzero absolute
//! value in the active submatrix, ties broken by row-major position.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnfError {
    #[error("integer overflow during Smith normal form reduction")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub diagonal: Vec<i64>,
    pub rows: usize,
    pub cols: usize,
    /// Unimodular `V` (cols × cols) with `U·A·V = D`. Row vectors `x` in the
    /// generator basis map to SNF coordinates as `x·V`.
    pub column_transform: Vec<Vec<i128>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

fn ck(v: Option<i128>) -> Result<i128, SnfError> {
    v.ok_or(SnfError::Overflow)
}

pub fn smith_normal_form(matrix: &[Vec<i64>], cols: usize) -> Result<SmithForm, SnfError> {
    let rows = matrix.len();
    let mut a: Vec<Vec<i128>> =
        matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut v: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();

    let add_col = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| -> Result<(), SnfError> {
        for row in a.iter_mut() {
            row[dst] = ck(row[dst].checked_sub(ck(f.checked_mul(row[src]))?))?;
        }
        for row in v.iter_mut() {
            row[dst] = ck(row[dst].checked_sub(ck(f.checked_mul(row[src]))?))?;
        }
        Ok(())
    };

    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest |entry| in active block, row-major tie-break
        let mut pivot: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && pivot.is_none_or(|(pi, pj)| x.abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }

        let mut dirty = false;
        for i in t + 1..rows {
            let q = a[i][t].div_euclid(a[t][t]);
            if q != 0 {
                let (top, below) = a.split_at_mut(i);
                for (x, p) in below[0][t..].iter_mut().zip(&top[t][t..]) {
                    *x = ck(x.checked_sub(ck(q.checked_mul(*p))?))?;
                }
            }
            dirty |= a[i][t] != 0;
        }
        for j in t + 1..cols {
            let q = a[t][j].div_euclid(a[t][t]);
            if q != 0 {
                add_col(&mut a, &mut v, j, t, q)?;
            }
            dirty |= a[t][j] != 0;
        }
        if dirty {
            // a remainder smaller than the pivot appeared; re-pivot
            continue;
        }
        // divisibility: fold an offending row into the pivot row
        let d = a[t][t];
        let offender = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|x| x % d != 0));
        if let Some(i) = offender {
            let (top, below) = a.split_at_mut(i);
            for (x, y) in top[t][t..].iter_mut().zip(&below[0][t..]) {
                *x = ck(x.checked_add(*y))?;
            }
            continue;
        }
        if d < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
        diagonal.push(i64::try_from(a[t][t]).map_err(|_| SnfError::Overflow)?);
        t += 1;
    }
    Ok(SmithForm { diagonal, rows, cols, column_transform: v })
}
