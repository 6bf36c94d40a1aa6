//! Lie algebras given by structure constants, and their representations.

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{int, solve, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("structure constants have {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("{got} basis names for a {dim}-dimensional algebra")]
    Names { dim: usize, got: usize },
    #[error("antisymmetry violated: c^{k}_({i},{j}) != -c^{k}_({j},{i})")]
    AntisymmetryViolation { i: usize, j: usize, k: usize },
    #[error("matrix basis element {0} is not in the span of the basis or has the wrong shape")]
    NotClosed(usize),
    #[error("Jacobi identity violated at (i,j,k)=({i},{j},{k}), component {l}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    },
}

/// Failure of the representation law on the generator pair `(i, j)`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("representation law fails on generators ({i}, {j})")]
pub struct ActionViolation {
    pub i: usize,
    pub j: usize,
    /// `rho([x_i,x_j]) - [rho_i, rho_j]`.
    pub residual: Matrix,
}

/// `[x_i, x_j] = sum_k c^k_{ij} x_k`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    names: Vec<String>,
    c: Vec<Scalar>,
}

impl LieAlgebra {
    /// Validates a full `dim^3` tensor, indexed `c[(i*dim + j)*dim + k]`.
    pub fn new(names: Vec<String>, c: Vec<Scalar>) -> Result<Self, LieError> {
        let dim = names.len();
        if c.len() != dim * dim * dim {
            return Err(LieError::Shape {
                expected: dim * dim * dim,
                got: c.len(),
            });
        }
        let l = LieAlgebra { dim, names, c };
        l.validate()?;
        Ok(l)
    }

    /// Builds from brackets `[x_i, x_j] = value * x_k` listed for `i < j`;
    /// the antisymmetric completion is applied here.
    pub fn from_brackets(
        names: &[&str],
        brackets: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self, LieError> {
        let dim = names.len();
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, k, v) in brackets {
            c[(i * dim + j) * dim + k] += v;
            c[(j * dim + i) * dim + k] -= v;
        }
        Self::new(names.iter().map(|s| s.to_string()).collect(), c)
    }

    pub fn abelian(dim: usize) -> Self {
        let names = (0..dim).map(|i| format!("x{i}")).collect();
        Self::new(names, vec![Scalar::zero(); dim * dim * dim]).unwrap()
    }

    /// sl2 with basis (h, e, f).
    pub fn sl2() -> Self {
        Self::from_brackets(
            &["h", "e", "f"],
            &[(1, 2, 0, int(1)), (0, 1, 1, int(2)), (0, 2, 2, int(-2))],
        )
        .unwrap()
    }

    /// The 2-dimensional nonabelian algebra `[x, y] = y`.
    pub fn nonabelian2() -> Self {
        Self::from_brackets(&["x", "y"], &[(0, 1, 1, int(1))]).unwrap()
    }

    /// Heisenberg algebra `[p, q] = z`.
    pub fn heisenberg() -> Self {
        Self::from_brackets(&["p", "q", "z"], &[(0, 1, 2, int(1))]).unwrap()
    }

    /// Structure constants of a linearly independent family of square
    /// matrices closed under the commutator.
    pub fn from_matrices(names: &[&str], mats: &[Matrix]) -> Result<Self, LieError> {
        let dim = mats.len();
        if names.len() != dim {
            return Err(LieError::Names {
                dim,
                got: names.len(),
            });
        }
        let flat = |m: &Matrix| -> Vec<Scalar> {
            (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)].clone())
                .collect()
        };
        let Some(first) = mats.first() else {
            return Self::new(vec![], vec![]);
        };
        let size = first.rows() * first.cols();
        let cols: Vec<Vec<Scalar>> = mats.iter().map(flat).collect();
        if cols.iter().any(|c| c.len() != size) {
            return Err(LieError::NotClosed(0));
        }
        let basis = Matrix::from_columns(size, &cols);
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let comm = mats[a].mul(&mats[b]).sub(&mats[b].mul(&mats[a]));
                let coords = solve(&basis, &flat(&comm)).ok_or(LieError::NotClosed(a))?;
                for (k, v) in coords.into_iter().enumerate() {
                    c[(a * dim + b) * dim + k] = v;
                }
            }
        }
        Self::new(names.iter().map(|s| s.to_string()).collect(), c)
    }

    /// sl3 with basis (h1, h2, e1, e2, e3, f1, f2, f3), where
    /// e1 = E12, e2 = E23, e3 = E13 and f_i are the transposes.
    pub fn sl3() -> Self {
        let e = |i: usize, j: usize| {
            let mut m = Matrix::zeros(3, 3);
            m[(i, j)] = int(1);
            m
        };
        let mats = [
            e(0, 0).sub(&e(1, 1)),
            e(1, 1).sub(&e(2, 2)),
            e(0, 1),
            e(1, 2),
            e(0, 2),
            e(1, 0),
            e(2, 1),
            e(2, 0),
        ];
        Self::from_matrices(&["h1", "h2", "e1", "e2", "e3", "f1", "f2", "f3"], &mats).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `[x_i, x_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), LieError> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *self.c(i, j, k) != -self.c(j, i, k).clone() {
                        return Err(LieError::AntisymmetryViolation { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Scalar::zero();
                        for m in 0..n {
                            s += self.c(i, j, m) * self.c(m, k, l);
                            s += self.c(j, k, m) * self.c(m, i, l);
                            s += self.c(k, i, m) * self.c(m, j, l);
                        }
                        if !s.is_zero() {
                            return Err(LieError::JacobiViolation { i, j, k, l });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure constants in the basis given by the columns of `p`
    /// (new basis vector `y_a = sum_i p_{ia} x_i`).
    pub fn change_basis(&self, p: &Matrix) -> Self {
        let inv = p.inverse().expect("basis change must be invertible");
        let n = self.dim;
        let mut c = vec![Scalar::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let br = self.bracket(&p.column(a), &p.column(b));
                let coords = inv.apply(&br);
                for (k, v) in coords.into_iter().enumerate() {
                    c[(a * n + b) * n + k] = v;
                }
            }
        }
        Self::new(self.names.clone(), c).expect("basis change preserves the axioms")
    }

    /// Matrix of `ad_x` for a coordinate vector `x`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let mut e = vec![Scalar::zero(); self.dim];
            e[j] = Scalar::from_integer(1.into());
            for (k, v) in self.bracket(x, &e).into_iter().enumerate() {
                m[(k, j)] = v;
            }
        }
        m
    }
}

/// Action of each basis element `x_i` on a vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAction {
    dim_space: usize,
    rho: Vec<Matrix>,
}

impl GAction {
    pub fn new(dim_space: usize, rho: Vec<Matrix>) -> Self {
        for m in &rho {
            assert_eq!((m.rows(), m.cols()), (dim_space, dim_space));
        }
        GAction { dim_space, rho }
    }

    pub fn trivial(l: &LieAlgebra, dim_space: usize) -> Self {
        GAction {
            dim_space,
            rho: vec![Matrix::zeros(dim_space, dim_space); l.dim()],
        }
    }

    pub fn dim_space(&self) -> usize {
        self.dim_space
    }

    pub fn rho(&self, i: usize) -> &Matrix {
        &self.rho[i]
    }

    pub fn rhos(&self) -> &[Matrix] {
        &self.rho
    }

    /// Action of an arbitrary element `sum_i x_i e_i`.
    pub fn rho_of(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.dim_space, self.dim_space);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.rho[i].scale(xi));
            }
        }
        m
    }

    /// Transport along an isomorphism `p`: `rho' = p rho p^-1`.
    pub fn conjugate(&self, p: &Matrix) -> Self {
        let inv = p.inverse().expect("conjugation needs an invertible matrix");
        GAction {
            dim_space: self.dim_space,
            rho: self.rho.iter().map(|r| p.mul(r).mul(&inv)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &GAction) -> Self {
        let n = self.dim_space + other.dim_space;
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| block_diag(a, b))
            .collect();
        GAction { dim_space: n, rho }
    }
}

pub(crate) fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
        }
    }
    m
}

/// Checks `rho([x_i,x_j]) = rho_i rho_j - rho_j rho_i` for all `i < j`.
pub fn check_action(l: &LieAlgebra, a: &GAction) -> Result<(), ActionViolation> {
    assert_eq!(a.rho.len(), l.dim(), "one matrix per generator expected");
    for i in 0..l.dim() {
        for j in i + 1..l.dim() {
            let lhs = a.rho_of(&l.bracket_basis(i, j));
            let rhs = a.rho[i].mul(&a.rho[j]).sub(&a.rho[j].mul(&a.rho[i]));
            let residual = lhs.sub(&rhs);
            if !residual.is_zero() {
                return Err(ActionViolation { i, j, residual });
            }
        }
    }
    Ok(())
}

/// `rho[i]_{kj} = c^k_{ij}`.
pub fn adjoint_action(l: &LieAlgebra) -> GAction {
    let n = l.dim();
    let rho = (0..n)
        .map(|i| {
            let mut m = Matrix::zeros(n, n);
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] = l.c(i, j, k).clone();
                }
            }
            m
        })
        .collect();
    GAction { dim_space: n, rho }
}

/// `rho^v[i] = -rho[i]^T`.
pub fn dual_action(a: &GAction) -> GAction {
    GAction {
        dim_space: a.dim_space,
        rho: a.rho.iter().map(|r| r.transpose().neg()).collect(),
    }
}
