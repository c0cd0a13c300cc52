//! Small dense linear algebra used by coefficient extraction, vertex
//! enumeration and the fixed-point analysis.

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }

    /// Builds a matrix whose j-th column is `columns[j]` (padded with zeros to
    /// `rows`).
    pub fn from_columns(columns: &[Vec<f64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form with partial pivoting. Returns the reduced matrix
/// and the pivot column of each nonzero row.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let tol = 1e-12 * a.max_abs().max(1.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let (best, val) = (r..a.rows)
            .map(|i| (i, a[(i, c)].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            for i in r..a.rows {
                a[(i, c)] = 0.0;
            }
            continue;
        }
        if best != r {
            for j in 0..a.cols {
                let tmp = a[(r, j)];
                a[(r, j)] = a[(best, j)];
                a[(best, j)] = tmp;
            }
        }
        let p = a[(r, c)];
        for j in 0..a.cols {
            a[(r, j)] /= p;
        }
        for i in 0..a.rows {
            if i != r {
                let f = a[(i, c)];
                if f != 0.0 {
                    for j in 0..a.cols {
                        a[(i, j)] -= f * a[(r, j)];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Basis of the null space {x : m x = 0}.
pub fn nullspace(m: &Matrix) -> Vec<Vec<f64>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0.0; m.cols];
            x[f] = 1.0;
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -r[(row, f)];
            }
            x
        })
        .collect()
}

/// Solves `m x = b`, setting free variables to zero. Returns the solution and
/// the max-abs residual `|m x - b|`; an inconsistent system shows up as a
/// large residual.
pub fn solve(m: &Matrix, b: &[f64]) -> (Vec<f64>, f64) {
    assert_eq!(b.len(), m.rows);
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        aug.row_mut(i)[..m.cols].copy_from_slice(m.row(i));
        aug[(i, m.cols)] = b[i];
    }
    let (r, pivots) = rref(&aug);
    let mut x = vec![0.0; m.cols];
    for (row, &p) in pivots.iter().enumerate() {
        if p < m.cols {
            x[p] = r[(row, m.cols)];
        }
    }
    let residual = m
        .mul_vec(&x)
        .iter()
        .zip(b)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    (x, residual)
}

/// Solves a square nonsingular system; `None` when singular.
pub fn solve_square(m: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(m.rows, m.cols);
    if rank(m) < m.cols {
        return None;
    }
    Some(solve(m, b).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = solve_square(&m, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let m = Matrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.abs() < 1e-14));
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn inconsistent_system_has_residual() {
        let m = Matrix::from_rows(&[vec![1.0], vec![1.0]]);
        let (_, res) = solve(&m, &[1.0, 2.0]);
        assert!(res > 0.4);
        assert!(solve_square(&Matrix::zeros(2, 2), &[0.0, 0.0]).is_none());
    }
}
