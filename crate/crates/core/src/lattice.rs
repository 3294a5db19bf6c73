//! Small dense integer matrices: column echelon bases, exact triangular
//! solves, and Smith normal form with transforms.

pub type Matrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// Determinant by fraction-free elimination.
pub fn det(a: &Matrix) -> i64 {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        return 1;
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Lower-triangular basis (as columns) of the full-rank lattice spanned by the columns of `gens`.
pub fn column_basis(gens: &Matrix) -> Option<Matrix> {
    let rows = gens.len();
    let mut g = gens.clone();
    let cols = g.first().map_or(0, Vec::len);
    for i in 0..rows {
        loop {
            let pivot = (i..cols).filter(|&j| g[i][j] != 0).min_by_key(|&j| g[i][j].abs())?;
            swap_cols(&mut g, i, pivot);
            let mut clear = true;
            for j in i + 1..cols {
                let q = g[i][j].div_euclid(g[i][i]);
                if q != 0 {
                    for row in g.iter_mut() {
                        row[j] -= q * row[i];
                    }
                }
                if g[i][j] != 0 {
                    clear = false;
                }
            }
            if clear {
                break;
            }
        }
        if g[i][i] < 0 {
            for row in g.iter_mut() {
                row[i] = -row[i];
            }
        }
    }
    Some(g.iter().map(|row| row[..rows].to_vec()).collect())
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Integer solution `X` of `L X = rhs` for lower-triangular `L`, if one exists.
pub fn solve_lower(l: &Matrix, rhs: &Matrix) -> Option<Matrix> {
    let n = l.len();
    let cols = rhs.first().map_or(0, Vec::len);
    let mut x = vec![vec![0i64; cols]; n];
    for c in 0..cols {
        for i in 0..n {
            let s: i64 = rhs[i][c] - (0..i).map(|k| l[i][k] * x[k][c]).sum::<i64>();
            if l[i][i] == 0 || s % l[i][i] != 0 {
                return None;
            }
            x[i][c] = s / l[i][i];
        }
    }
    Some(x)
}

/// `u * a * v = diag(d)` with `u`, `v` unimodular and `d[k] | d[k+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub d: Vec<i64>,
    pub u: Matrix,
    pub v: Matrix,
}

pub fn smith_normal_form(a: &Matrix) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut s = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| s[i][j] != 0)
                .min_by_key(|&(i, j)| s[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return finish(s, u, v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clear = true;
            for i in t + 1..m {
                let q = s[i][t].div_euclid(s[t][t]);
                if q != 0 {
                    for j in 0..n {
                        s[i][j] -= q * s[t][j];
                    }
                    for j in 0..m {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clear &= s[i][t] == 0;
            }
            for j in t + 1..n {
                let q = s[t][j].div_euclid(s[t][t]);
                if q != 0 {
                    for i in 0..m {
                        s[i][j] -= q * s[i][t];
                    }
                    for i in 0..n {
                        v[i][j] -= q * v[i][t];
                    }
                }
                clear &= s[t][j] == 0;
            }
            if !clear {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| s[i][j] % s[t][t] != 0));
            match bad {
                Some(i) => {
                    for j in 0..n {
                        s[t][j] += s[i][j];
                    }
                    for j in 0..m {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if s[t][t] < 0 {
            for j in 0..n {
                s[t][j] = -s[t][j];
            }
            for j in 0..m {
                u[t][j] = -u[t][j];
            }
        }
    }
    finish(s, u, v)
}

fn finish(s: Matrix, u: Matrix, v: Matrix) -> Smith {
    let k = s.len().min(s.first().map_or(0, Vec::len));
    Smith { d: (0..k).map(|i| s[i][i]).collect(), u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[i64], m: usize, n: usize) -> Matrix {
        (0..m).map(|i| (0..n).map(|j| if i == j && i < d.len() { d[i] } else { 0 }).collect()).collect()
    }

    #[test]
    fn smith_small() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&a);
        assert_eq!(s.d, vec![2, 6, 12]);
        assert_eq!(mat_mul(&mat_mul(&s.u, &a), &s.v), diag(&s.d, 3, 3));
        assert_eq!(det(&s.u).abs(), 1);
        assert_eq!(det(&s.v).abs(), 1);
    }

    #[test]
    fn basis_and_solve() {
        let gens = vec![vec![2, 0, 1], vec![0, 2, 1]];
        let b = column_basis(&gens).unwrap();
        assert_eq!(det(&b).abs(), 2);
        let x = solve_lower(&b, &vec![vec![2], vec![0]]).unwrap();
        assert_eq!(mat_mul(&b, &x), vec![vec![2], vec![0]]);
        assert!(solve_lower(&b, &vec![vec![1], vec![0]]).is_none());
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&vec![vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&vec![vec![2, 0, 0], vec![0, 3, 0], vec![1, 1, 5]]), 30);
    }
}
