//! Integer lattice utilities: gcd-based column reduction, saturation,
//! unimodular completion and Smith invariants.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. All routines are exact; integer
//! overflow panics (overflow checks are enabled in every profile).

use num_integer::Integer;
use thiserror::Error;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("rows do not span a saturated sublattice (index {0})")]
    NotSaturated(i64),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Gcd of all entries (0 for the zero vector).
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    content(v) == 1
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = content(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| x * k).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(m).map(|(x, row)| x * row[j]).sum())
        .collect()
}

/// Matrix times column vector.
pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

/// Result of reducing a matrix `D` (rows in `Z^d`) by unimodular column
/// operations: `D * transform = reduced`, where only the first `rank`
/// columns of `reduced` are nonzero and `reduced` is in column echelon form.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub rank: usize,
    pub reduced: IntMatrix,
    pub transform: IntMatrix,
    pub inverse: IntMatrix,
}

impl ColumnEchelon {
    /// Z-basis of `span_Q(rows) ∩ Z^d`: the first `rank` rows of the inverse transform.
    pub fn saturated_basis(&self) -> IntMatrix {
        self.inverse[..self.rank].to_vec()
    }

    /// Basis of the integer vectors orthogonal to every row (as columns of the
    /// transform beyond the rank).
    pub fn orthogonal_basis(&self) -> IntMatrix {
        let d = self.transform.len();
        (self.rank..d)
            .map(|j| (0..d).map(|i| self.transform[i][j]).collect())
            .collect()
    }
}

/// Applies the unimodular 2x2 operation `[[s, -b/g], [t, a/g]]` to columns
/// `p` and `q` of `m` (and the inverse row operation to `inv`).
fn column_gcd_step(
    m: &mut IntMatrix,
    transform: &mut IntMatrix,
    inverse: &mut IntMatrix,
    p: usize,
    q: usize,
    a: i64,
    b: i64,
) {
    let (g, s, t) = ext_gcd(a, b);
    let (ag, bg) = (a / g, b / g);
    let apply_cols = |mat: &mut IntMatrix| {
        for row in mat.iter_mut() {
            let (x, y) = (row[p], row[q]);
            row[p] = s * x + t * y;
            row[q] = -bg * x + ag * y;
        }
    };
    apply_cols(m);
    apply_cols(transform);
    // inverse of [[s, -bg], [t, ag]] is [[ag, bg], [-t, s]]; acts on rows p, q.
    let (rp, rq) = (inverse[p].clone(), inverse[q].clone());
    for j in 0..rp.len() {
        inverse[p][j] = ag * rp[j] + bg * rq[j];
        inverse[q][j] = -t * rp[j] + s * rq[j];
    }
}

/// Column-echelon reduction of the `n x d` matrix `rows` by unimodular
/// column operations.
pub fn column_echelon(rows: &[Vec<i64>], d: usize) -> ColumnEchelon {
    let mut m: IntMatrix = rows.to_vec();
    let mut transform = identity(d);
    let mut inverse = identity(d);
    let mut pivot = 0usize;
    for i in 0..m.len() {
        if pivot == d {
            break;
        }
        for q in pivot + 1..d {
            let (a, b) = (m[i][pivot], m[i][q]);
            if b != 0 {
                column_gcd_step(&mut m, &mut transform, &mut inverse, pivot, q, a, b);
            }
        }
        if m[i][pivot] != 0 {
            pivot += 1;
        }
    }
    ColumnEchelon {
        rank: pivot,
        reduced: m,
        transform,
        inverse,
    }
}

/// Z-basis of the saturation `span_Q(rows) ∩ Z^d`.
pub fn saturated_basis(rows: &[Vec<i64>], d: usize) -> IntMatrix {
    column_echelon(rows, d).saturated_basis()
}

/// Extends the rows of `basis` to a unimodular `d x d` matrix whose first
/// rows are exactly `basis`. Fails unless `basis` is a saturated basis.
pub fn complete_to_unimodular(basis: &[Vec<i64>], d: usize) -> Result<IntMatrix, LatticeError> {
    for row in basis {
        if row.len() != d {
            return Err(LatticeError::DimensionMismatch {
                expected: d,
                found: row.len(),
            });
        }
    }
    let ech = column_echelon(basis, d);
    if ech.rank != basis.len() {
        return Err(LatticeError::NotSaturated(0));
    }
    let square: IntMatrix = ech
        .reduced
        .iter()
        .map(|row| row[..ech.rank].to_vec())
        .collect();
    let det = determinant(&square);
    if det.abs() != 1 {
        return Err(LatticeError::NotSaturated(det.abs()));
    }
    let mut out: IntMatrix = basis.to_vec();
    out.extend(ech.inverse[ech.rank..].iter().cloned());
    Ok(out)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant exceeds i64")
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Result<IntMatrix, LatticeError> {
    let d = m.len();
    let ech = column_echelon(m, d);
    if ech.rank != d {
        return Err(LatticeError::NotUnimodular);
    }
    // m * V = H lower triangular; m^{-1} = V * H^{-1}
    let h = &ech.reduced;
    if determinant(h).abs() != 1 {
        return Err(LatticeError::NotUnimodular);
    }
    // forward substitution for H^{-1} (lower triangular, unit-modulus diagonal)
    let mut hinv = vec![vec![0i64; d]; d];
    for col in 0..d {
        for i in 0..d {
            let mut acc = i64::from(i == col);
            for k in 0..i {
                acc -= h[i][k] * hinv[k][col];
            }
            hinv[i][col] = acc / h[i][i];
        }
    }
    Ok(mat_mul(&ech.transform, &hinv))
}

/// Smith invariants (elementary divisors) of an integer matrix, nonzero ones only.
pub fn elementary_divisors(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a: IntMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // choose a nonzero entry of minimal modulus in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t];
            let mut changed = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    a.swap(t, i);
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            // divisibility: the pivot must divide every entry of the trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}
