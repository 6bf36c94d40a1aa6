//! Dg Loday-Pirashvili modules `alpha : V ~> g`.
//!
//! `alpha_k : V^k -> ^k g^v (x) g` is stored as a matrix whose rows are
//! indexed by `(wedge index) * dim g + a` with wedges in lexicographic order,
//! so that `alpha(v) = sum_{I,a} alpha_k[(I,a), v] xi^I (x) x_a`.

use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use crate::cochain::{d_tot, Cochain, Key};
use crate::exterior::{binomial, wedge_basis};
use crate::lie::{adjoint_action, GAction, LieAlgebra};
use crate::linalg::{kernel, solve_matrix, ComplementRule, Matrix, Scalar};
use crate::module::{hom_blocks, DgGModule};
use crate::morphism::{find_homotopy, lift, Homotopy, LiftError, WeakMorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("module must be non-negative")]
    Negative,
    #[error("alpha_{0} given but alpha vanishes outside 0..=u")]
    OutOfRange(usize),
    #[error("alpha_{k} has shape {got:?}, expected {expected:?}")]
    Shape {
        k: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("weak morphism is not of the form V ~> g with components (k, k)")]
    NotLpMorphism,
    #[error("X is not equivariant for generator {0}")]
    NotEquivariant(usize),
    #[error("isomorphism G -> ker d_0 is invalid: {0}")]
    BadIsomorphism(&'static str),
    #[error("pairing is not invariant at ({0}, {1}, {2})")]
    NotInvariant(usize, usize, usize),
    #[error("pairing is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Failure of the structure equation on a generator of `V^k`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("structure equation fails for k = {k} on generator {j}")]
pub struct LpViolation {
    pub k: i32,
    pub j: usize,
    pub residual: Cochain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPModule {
    v: DgGModule,
    g: DgGModule,
    alpha: Vec<Matrix>,
}

pub fn u_of(v: &DgGModule) -> usize {
    (v.top().max(0) as usize).min(v.lie().dim())
}

fn alpha_shape(v: &DgGModule, k: usize) -> (usize, usize) {
    let n = v.lie().dim();
    (binomial(n, k) * n, v.dim(k as i32))
}

impl LPModule {
    /// Missing trailing components are zero.
    pub fn new(v: &DgGModule, alpha: Vec<Matrix>) -> Result<Self, LpError> {
        if !v.is_nonnegative() {
            return Err(LpError::Negative);
        }
        let u = u_of(v);
        let mut full = Vec::with_capacity(u + 1);
        for (k, m) in alpha.into_iter().enumerate() {
            let expected = alpha_shape(v, k);
            if k > u {
                if m.is_zero() {
                    continue;
                }
                return Err(LpError::OutOfRange(k));
            }
            if (m.rows(), m.cols()) != expected {
                return Err(LpError::Shape {
                    k,
                    expected,
                    got: (m.rows(), m.cols()),
                });
            }
            full.push(m);
        }
        while full.len() <= u {
            let (r, c) = alpha_shape(v, full.len());
            full.push(Matrix::zeros(r, c));
        }
        Ok(LPModule {
            v: v.clone(),
            g: DgGModule::adjoint(v.lie()),
            alpha: full,
        })
    }

    pub fn module(&self) -> &DgGModule {
        &self.v
    }

    pub fn lie(&self) -> &LieAlgebra {
        self.v.lie()
    }

    /// `g[0]` with the adjoint action.
    pub fn g_module(&self) -> &DgGModule {
        &self.g
    }

    pub fn u(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn alpha(&self, k: usize) -> &Matrix {
        &self.alpha[k]
    }

    pub fn alphas(&self) -> &[Matrix] {
        &self.alpha
    }

    /// `alpha(v)` for the generator `(q, j)` as a g-valued form.
    pub fn alpha_form(&self, q: i32, j: usize) -> Cochain {
        let mut out = Cochain::zero();
        if q < 0 || q as usize > self.u() {
            return out;
        }
        let n = self.lie().dim();
        let m = &self.alpha[q as usize];
        for (wi, w) in wedge_basis(n, q as usize).into_iter().enumerate() {
            for a in 0..n {
                let c = &m[(wi * n + a, j)];
                if !c.is_zero() {
                    out.add_term(Key::new(w, 0, a), c.clone());
                }
            }
        }
        out
    }

    pub fn as_weak_morphism(&self) -> WeakMorphism {
        let comps: HashMap<(i32, usize), Matrix> = self
            .alpha
            .iter()
            .enumerate()
            .map(|(k, m)| ((k as i32, k), m.clone()))
            .collect();
        WeakMorphism::from_components(&self.v, &self.g, &comps).expect("alpha has valid shapes")
    }

    pub fn from_weak_morphism(f: &WeakMorphism) -> Result<Self, LpError> {
        if f.target() != &DgGModule::adjoint(f.source().lie()) {
            return Err(LpError::NotLpMorphism);
        }
        let comps = f.components();
        if comps.keys().any(|&(k, l)| k < 0 || k as usize != l) {
            return Err(LpError::NotLpMorphism);
        }
        let top = comps.keys().map(|&(_, l)| l).max().unwrap_or(0);
        let alpha = (0..=top).map(|k| f.component(k as i32, k)).collect();
        Self::new(f.source(), alpha)
    }

    /// `alpha_{k+1} d + alpha_k d_CE = d_CE^g alpha_k` on every generator.
    pub fn verify(&self) -> Result<(), LpViolation> {
        let f = self.as_weak_morphism();
        f.check_weak().map_err(|e| LpViolation {
            k: e.k,
            j: e.j,
            residual: e.residual,
        })
    }

    /// `c(alpha)` in `Omega_g(Hom(V, g))`, with `Hom(V^k, g)` in degree `-k`.
    pub fn to_cocycle(&self) -> (DgGModule, Cochain) {
        let hom = self.v.hom(&self.g);
        let n = self.lie().dim();
        let mut c = Cochain::zero();
        for (k, m) in self.alpha.iter().enumerate() {
            let k = k as i32;
            let dv = self.v.dim(k);
            if dv == 0 {
                continue;
            }
            let block = hom_blocks(&self.v, &self.g, -k)
                .into_iter()
                .find(|b| b.q == k)
                .expect("degree k block");
            for (wi, w) in wedge_basis(n, k as usize).into_iter().enumerate() {
                for a in 0..n {
                    for j in 0..dv {
                        let x = &m[(wi * n + a, j)];
                        if !x.is_zero() {
                            c.add_term(Key::new(w, -k, block.offset + a * dv + j), x.clone());
                        }
                    }
                }
            }
        }
        (hom, c)
    }

    pub fn cocycle_closed(&self) -> bool {
        let (hom, c) = self.to_cocycle();
        d_tot(&hom, &c).is_zero()
    }

    /// Induced map `H^0(V) -> g` in the kernel basis of `d_0`.
    pub fn h0(&self) -> Matrix {
        self.as_weak_morphism().h0()
    }
}

/// Homotopy between two LP structures on the same module, if one exists.
pub fn lp_homotopic(a: &LPModule, b: &LPModule) -> Option<Homotopy> {
    assert_eq!(a.v, b.v, "LP structures must live on the same module");
    find_homotopy(&a.as_weak_morphism(), &b.as_weak_morphism())
}

/// An equivariant map `X : G -> g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinaryLP {
    lie: LieAlgebra,
    action: GAction,
    x: Matrix,
}

impl OrdinaryLP {
    pub fn new(lie: &LieAlgebra, action: GAction, x: Matrix) -> Result<Self, LpError> {
        if (x.rows(), x.cols()) != (lie.dim(), action.dim_space()) {
            return Err(LpError::Shape {
                k: 0,
                expected: (lie.dim(), action.dim_space()),
                got: (x.rows(), x.cols()),
            });
        }
        let ad = adjoint_action(lie);
        for i in 0..lie.dim() {
            if x.mul(action.rho(i)) != ad.rho(i).mul(&x) {
                return Err(LpError::NotEquivariant(i));
            }
        }
        Ok(OrdinaryLP {
            lie: lie.clone(),
            action,
            x,
        })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn action(&self) -> &GAction {
        &self.action
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    /// `G` as a module concentrated in degree 0, with `alpha_0 = X`.
    pub fn as_lp_module(&self) -> LPModule {
        let v = DgGModule::concentrated(&self.lie, self.action.clone(), 0);
        LPModule::new(&v, vec![self.x.clone()]).unwrap()
    }
}

/// Lifts an ordinary LP module along a resolution `V` of `G`; `iso` is the
/// inclusion `G -> V^0` onto `ker d_0`.
pub fn lift_lp(
    ord: &OrdinaryLP,
    v: &DgGModule,
    iso: &Matrix,
    rule: ComplementRule,
) -> Result<LPModule, LpError> {
    if (iso.rows(), iso.cols()) != (v.dim(0), ord.action.dim_space()) {
        return Err(LpError::BadIsomorphism("wrong shape"));
    }
    for i in 0..ord.lie.dim() {
        if iso.mul(ord.action.rho(i)) != v.rho(0, i).mul(iso) {
            return Err(LpError::BadIsomorphism("not equivariant"));
        }
    }
    let kv = kernel(&v.diff(0));
    let coords = solve_matrix(&kv.basis_matrix(), iso)
        .ok_or(LpError::BadIsomorphism("image not inside ker d_0"))?;
    let inv = coords
        .inverse()
        .ok_or(LpError::BadIsomorphism("not onto ker d_0"))?;
    let phi = ord.x.mul(&inv);
    let g = DgGModule::adjoint(&ord.lie);
    let f = lift(&phi, v, &g, rule)?;
    LPModule::from_weak_morphism(&f)
}

/// `V = V^1 = g (x) g` with `alpha_1(x (x) y) = <x, -> (x) y`.
pub fn from_invariant_pairing(lie: &LieAlgebra, pairing: &Matrix) -> Result<LPModule, LpError> {
    let n = lie.dim();
    for i in 0..n {
        for j in 0..n {
            if pairing[(i, j)] != pairing[(j, i)] {
                return Err(LpError::NotSymmetric(i, j));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut s = Scalar::zero();
                for m in 0..n {
                    s += lie.c(x, y, m) * &pairing[(m, z)];
                    s += lie.c(x, z, m) * &pairing[(y, m)];
                }
                if !s.is_zero() {
                    return Err(LpError::NotInvariant(x, y, z));
                }
            }
        }
    }
    let g = DgGModule::adjoint(lie);
    let gg = g.tensor(&g).shift(-1);
    let zero = DgGModule::trivial(lie, 0, 0);
    let v = zero.direct_sum(&gg);
    let mut a1 = Matrix::zeros(n * n, n * n);
    for xi in 0..n {
        for yi in 0..n {
            for a in 0..n {
                // row (wedge {a}, g index yi), column x (x) y
                a1[(a * n + yi, xi * n + yi)] = pairing[(xi, a)].clone();
            }
        }
    }
    LPModule::new(&v, vec![Matrix::zeros(n, 0), a1])
}

/// The Killing form `tr(ad_x ad_y)`.
pub fn killing_form(lie: &LieAlgebra) -> Matrix {
    let n = lie.dim();
    let ad = adjoint_action(lie);
    let mut k = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let p = ad.rho(i).mul(ad.rho(j));
            k[(i, j)] = (0..n).fold(Scalar::zero(), |acc, t| acc + &p[(t, t)]);
        }
    }
    k
}

/// For `V` concentrated in degree 2: (dg-LP condition, CE 2-cocycle
/// condition on `c_alpha in C^2(g, Hom(V^2, g))`).
pub fn abelian_extension_equiv(lie: &LieAlgebra, v2: &GAction, alpha2: &Matrix) -> (bool, bool) {
    let zero = DgGModule::trivial(lie, 0, 0);
    let v = zero
        .direct_sum(&DgGModule::trivial(lie, 0, 1))
        .direct_sum(&DgGModule::concentrated(lie, v2.clone(), 2));
    let n = lie.dim();
    let mut alpha = vec![Matrix::zeros(n, 0), Matrix::zeros(n * n, 0)];
    if u_of(&v) >= 2 {
        alpha.push(alpha2.clone());
    }
    let lp = LPModule::new(&v, alpha).expect("alpha_2 has the right shape");
    let lp_ok = lp.verify().is_ok();
    // CE cocycle on Hom(V^2, g) directly
    let hom = DgGModule::concentrated(lie, v2.clone(), 2).hom(&DgGModule::adjoint(lie));
    let (_, c) = lp.to_cocycle();
    // re-key from the full Hom module (only the degree-2 block is populated)
    let off = hom_blocks(&v, lp.g_module(), -2)
        .into_iter()
        .find(|b| b.q == 2)
        .unwrap()
        .offset;
    let c2: Cochain = c
        .iter()
        .map(|(k, x)| (Key::new(k.wedge, k.q, k.j - off), x.clone()))
        .collect();
    let cocycle_ok = crate::cochain::d_ce(&hom, &c2).is_zero();
    (lp_ok, cocycle_ok)
}
