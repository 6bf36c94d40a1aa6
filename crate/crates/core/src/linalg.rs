//! Exact rational matrices: row reduction, kernels, images, solving and
//! coordinate complements of subspaces.
//!
//! Every "arbitrary choice" made here is deterministic: free variables are
//! set to zero in [`solve`], and complements are spanned by the standard
//! basis vectors at the non-pivot columns of a subspace basis.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ground field element. `BigRational` keeps values in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` as a scalar.
pub fn sign(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Renders a scalar as `p` or `p/q`.
pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Scalar::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Scalar::from_integer),
    }
}

/// Dense row-major matrix of scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Scalar::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Scalar::one())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Selects the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let (r, pivots) = rref(&self.hstack(&Matrix::identity(n)));
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, row * a.cols + j);
            }
        }
        let inv = a[(row, col)].recip();
        for j in col..a.cols {
            let x = &a[(row, j)] * &inv;
            a[(row, j)] = x;
        }
        for i in 0..a.rows {
            if i == row || a[(i, col)].is_zero() {
                continue;
            }
            let factor = a[(i, col)].clone();
            for j in col..a.cols {
                if a[(row, j)].is_zero() {
                    continue;
                }
                let x = &factor * &a[(row, j)];
                a[(i, j)] -= x;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// A subspace of `K^ambient_dim` given by a linearly independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    /// Wraps a basis; panics if the vectors are dependent.
    pub fn new(ambient_dim: usize, basis: Vec<Vec<Scalar>>) -> Self {
        let s = Subspace { ambient_dim, basis };
        assert_eq!(s.basis_matrix().rank(), s.basis.len(), "dependent basis");
        s
    }

    /// Span of arbitrary vectors, reduced to an independent subset.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Self {
        let m = Matrix::from_columns(ambient_dim, vectors);
        let (_, pivots) = rref(&m);
        Subspace {
            ambient_dim,
            basis: pivots.iter().map(|&j| vectors[j].clone()).collect(),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::from_matrix_columns(&Matrix::identity(ambient_dim))
    }

    fn from_matrix_columns(m: &Matrix) -> Self {
        Subspace {
            ambient_dim: m.rows(),
            basis: (0..m.cols()).map(|j| m.column(j)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        solve(&self.basis_matrix(), v)
    }
}

/// Basis of the null space; one vector per free column.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = rref(m);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..m.cols()).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Scalar::zero(); m.cols()];
        v[free] = Scalar::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    Subspace {
        ambient_dim: m.cols(),
        basis,
    }
}

/// Column space, spanned by the pivot columns of `m`.
pub fn image(m: &Matrix) -> Subspace {
    let (_, pivots) = rref(m);
    Subspace {
        ambient_dim: m.rows(),
        basis: pivots.iter().map(|&j| m.column(j)).collect(),
    }
}

/// Some `x` with `m x = b`, free variables set to zero; `None` when the
/// system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let aug = m.hstack(&Matrix::from_columns(m.rows(), &[b.to_vec()]));
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); m.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, m.cols())].clone();
    }
    Some(x)
}

/// Solves `m X = B` column by column.
pub fn solve_matrix(m: &Matrix, b: &Matrix) -> Option<Matrix> {
    let cols: Option<Vec<Vec<Scalar>>> = (0..b.cols()).map(|j| solve(m, &b.column(j))).collect();
    cols.map(|c| Matrix::from_columns(m.cols(), &c))
}

/// Coordinate complement of a subspace.
///
/// The complement is spanned by the standard basis vectors `e_i` for the
/// columns `i` that are not pivots of the subspace basis (taken as rows).
/// Returns `(projection, inclusion)`: `inclusion` is `ambient x c` with those
/// `e_i` as columns; `projection` is `c x ambient` and sends a vector to the
/// complement coordinates of its decomposition `v = s + inclusion * t`.
pub fn complement_section(sub: &Subspace) -> (Matrix, Matrix) {
    let n = sub.ambient_dim();
    let (_, pivots) = rref(&sub.basis_matrix().transpose());
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let inclusion = Matrix::identity(n).select_columns(&free);
    let full = sub.basis_matrix().hstack(&inclusion);
    let inv = full
        .inverse()
        .expect("subspace plus coordinate complement spans");
    let mut projection = Matrix::zeros(free.len(), n);
    for i in 0..free.len() {
        for j in 0..n {
            projection[(i, j)] = inv[(sub.dim() + i, j)].clone();
        }
    }
    (projection, inclusion)
}

/// Like [`complement_section`] but pivots are searched from the last
/// coordinate backwards, giving a different (still deterministic) complement.
pub fn complement_section_reversed(sub: &Subspace) -> (Matrix, Matrix) {
    let n = sub.ambient_dim();
    let rev: Vec<usize> = (0..n).rev().collect();
    let flipped = Subspace {
        ambient_dim: n,
        basis: sub
            .basis
            .iter()
            .map(|v| rev.iter().map(|&i| v[i].clone()).collect())
            .collect(),
    };
    let (p, i) = complement_section(&flipped);
    // undo the coordinate reversal
    let perm = Matrix::identity(n).select_columns(&rev);
    (p.mul(&perm), perm.mul(&i))
}

/// Which coordinate complement to use when an arbitrary choice is needed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ComplementRule {
    /// Non-pivot coordinates, pivots searched from the first coordinate.
    #[default]
    Pivot,
    /// Pivots searched from the last coordinate.
    ReversePivot,
}

/// Decomposition `K^n = S (+) C` of the ambient space of a subspace.
#[derive(Clone, Debug)]
pub struct Split {
    /// `dim S x n`: coordinates of the `S` component in the basis of `S`.
    pub sub_proj: Matrix,
    /// `dim C x n`: coordinates of the `C` component.
    pub comp_proj: Matrix,
    /// `n x dim C`: the complement basis.
    pub comp_incl: Matrix,
}

pub fn split(sub: &Subspace, rule: ComplementRule) -> Split {
    let (comp_proj, comp_incl) = match rule {
        ComplementRule::Pivot => complement_section(sub),
        ComplementRule::ReversePivot => complement_section_reversed(sub),
    };
    let n = sub.ambient_dim();
    let full = sub.basis_matrix().hstack(&comp_incl);
    let inv = full.inverse().expect("subspace plus complement spans");
    let mut sub_proj = Matrix::zeros(sub.dim(), n);
    for i in 0..sub.dim() {
        for j in 0..n {
            sub_proj[(i, j)] = inv[(i, j)].clone();
        }
    }
    Split {
        sub_proj,
        comp_proj,
        comp_incl,
    }
}

/// Image basis chosen as columns of `m`, scanning columns first-to-last
/// (`Pivot`) or last-to-first; returns the basis and the chosen columns.
pub fn image_with_section(m: &Matrix, rule: ComplementRule) -> (Subspace, Vec<usize>) {
    let order: Vec<usize> = match rule {
        ComplementRule::Pivot => (0..m.cols()).collect(),
        ComplementRule::ReversePivot => (0..m.cols()).rev().collect(),
    };
    let (_, pivots) = rref(&m.select_columns(&order));
    let cols: Vec<usize> = pivots.iter().map(|&p| order[p]).collect();
    let basis = cols.iter().map(|&j| m.column(j)).collect();
    (
        Subspace {
            ambient_dim: m.rows(),
            basis,
        },
        cols,
    )
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs_entry(m: &Matrix) -> Scalar {
    m.data
        .iter()
        .map(|x| x.abs())
        .fold(Scalar::zero(), |a, b| if b > a { b } else { a })
}
