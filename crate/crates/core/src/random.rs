//! Seeded generators for randomized fixtures: Lie algebras, dg modules,
//! ordinary LP modules with resolutions, solvable Lie pairs and degree-2 data.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cochain::{d_ce, Cochain, Key};
use crate::exterior::{wedge_basis, Wedge};
use crate::lie::{adjoint_action, dual_action, GAction, LieAlgebra};
use crate::lie_pair::LiePair;
use crate::linalg::{int, Matrix, Scalar};
use crate::lp::OrdinaryLP;
use crate::module::DgGModule;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small<R: Rng>(rng: &mut R, r: i64) -> Scalar {
    int(rng.gen_range(-r..=r))
}

fn nonzero<R: Rng>(rng: &mut R) -> Scalar {
    let x = rng.gen_range(1..=2);
    if rng.gen_bool(0.5) {
        int(x)
    } else {
        int(-x)
    }
}

/// Product of a unit lower and a unit upper triangular matrix.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut lo = Matrix::identity(n);
    let mut up = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lo[(i, j)] = small(rng, 1);
            up[(j, i)] = small(rng, 1);
        }
    }
    lo.mul(&up)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, r: i64) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = small(rng, r);
        }
    }
    m
}

/// `[x, y] = y, [x, z] = lambda z`.
pub fn r3(lambda: Scalar) -> LieAlgebra {
    LieAlgebra::from_brackets(&["x", "y", "z"], &[(0, 1, 1, int(1)), (0, 2, 2, lambda)]).unwrap()
}

/// `nonabelian2 (+) K`.
pub fn na2_plus_line() -> LieAlgebra {
    LieAlgebra::from_brackets(&["x", "y", "t"], &[(0, 1, 1, int(1))]).unwrap()
}

/// A Lie algebra of dimension `1..=max_dim` (at most 3) in a random basis.
pub fn random_lie_algebra<R: Rng>(rng: &mut R, max_dim: usize) -> LieAlgebra {
    let dim = rng.gen_range(1..=max_dim.clamp(1, 3));
    let base = match dim {
        1 => LieAlgebra::abelian(1),
        2 => {
            if rng.gen_bool(0.5) {
                LieAlgebra::abelian(2)
            } else {
                LieAlgebra::nonabelian2()
            }
        }
        _ => match rng.gen_range(0..5) {
            0 => LieAlgebra::abelian(3),
            1 => LieAlgebra::heisenberg(),
            2 => LieAlgebra::sl2(),
            3 => na2_plus_line(),
            _ => r3(small(rng, 2)),
        },
    };
    base.change_basis(&random_invertible(rng, dim))
}

fn base_module<R: Rng>(rng: &mut R, lie: &LieAlgebra) -> GAction {
    match rng.gen_range(0..4) {
        0 => GAction::trivial(lie, rng.gen_range(1..=2)),
        1 => adjoint_action(lie),
        2 => dual_action(&adjoint_action(lie)),
        _ => GAction::trivial(lie, 1),
    }
}

/// Degree-wise pieces and differentials before conjugation.
struct Assembly {
    actions: Vec<GAction>,
    diffs: Vec<Matrix>,
}

impl Assembly {
    fn new(lie: &LieAlgebra, len: usize) -> Self {
        Assembly {
            actions: (0..len).map(|_| GAction::trivial(lie, 0)).collect(),
            diffs: (0..len.saturating_sub(1))
                .map(|_| Matrix::zeros(0, 0))
                .collect(),
        }
    }

    /// Adds `m` in slot `i`, and if `cone` also in slot `i + 1` with `d = c id`.
    fn add(&mut self, i: usize, m: &GAction, cone: Option<Scalar>) {
        let old: Vec<usize> = self.actions.iter().map(GAction::dim_space).collect();
        self.actions[i] = self.actions[i].direct_sum(m);
        if cone.is_some() {
            self.actions[i + 1] = self.actions[i + 1].direct_sum(m);
        }
        let new: Vec<usize> = self.actions.iter().map(GAction::dim_space).collect();
        for (k, d) in self.diffs.iter_mut().enumerate() {
            let mut nd = Matrix::zeros(new[k + 1], new[k]);
            for r in 0..d.rows() {
                for s in 0..d.cols() {
                    nd[(r, s)] = d[(r, s)].clone();
                }
            }
            if k == i {
                if let Some(c) = &cone {
                    for t in 0..m.dim_space() {
                        nd[(old[k + 1] + t, old[k] + t)] = c.clone();
                    }
                }
            }
            *d = nd;
        }
    }

    fn build<R: Rng>(self, rng: &mut R, lie: &LieAlgebra, bot: i32) -> DgGModule {
        let ps: Vec<Matrix> = self
            .actions
            .iter()
            .map(|a| random_invertible(rng, a.dim_space()))
            .collect();
        let actions = self
            .actions
            .iter()
            .zip(&ps)
            .map(|(a, p)| a.conjugate(p))
            .collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| ps[k + 1].mul(d).mul(&ps[k].inverse().unwrap()))
            .collect();
        DgGModule::new(lie, bot, actions, diffs).expect("assembled module is valid")
    }
}

/// A dg module over `lie` with 1 to 3 degrees starting in `-1..=1`, built
/// from concentrated summands and `c id` cones, in random bases.
pub fn random_module<R: Rng>(rng: &mut R, lie: &LieAlgebra) -> DgGModule {
    let len = rng.gen_range(1..=3);
    let bot = rng.gen_range(-1..=1);
    let mut asm = Assembly::new(lie, len);
    let summands = rng.gen_range(1..=2);
    for _ in 0..summands {
        let m = base_module(rng, lie);
        let i = rng.gen_range(0..len);
        let cone = if i + 1 < len && rng.gen_bool(0.6) {
            Some(nonzero(rng))
        } else {
            None
        };
        asm.add(i, &m, cone);
    }
    asm.build(rng, lie, bot)
}

/// An ordinary LP module: `G = g (+) K^t` with `X = (c id | z)` where the
/// columns of `z` are central.
pub fn random_ordinary_lp<R: Rng>(rng: &mut R, lie: &LieAlgebra) -> OrdinaryLP {
    let n = lie.dim();
    let center = crate::linalg::kernel(&Matrix::from_rows(
        (0..n).flat_map(|i| lie_row_block(lie, i)).collect(),
    ));
    let t = rng.gen_range(0..=1);
    let action = adjoint_action(lie).direct_sum(&GAction::trivial(lie, t));
    let c = nonzero(rng);
    let mut x = Matrix::zeros(n, n + t);
    for i in 0..n {
        x[(i, i)] = c.clone();
    }
    for col in 0..t {
        let mut v = vec![int(0); n];
        for b in center.basis() {
            let k = small(rng, 2);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += &k * bi;
            }
        }
        for (i, vi) in v.into_iter().enumerate() {
            x[(i, n + col)] = vi;
        }
    }
    OrdinaryLP::new(lie, action, x).expect("central columns keep X equivariant")
}

/// Rows of `ad_{x_i}`; their common kernel is the center.
fn lie_row_block(lie: &LieAlgebra, i: usize) -> Vec<Vec<Scalar>> {
    let n = lie.dim();
    (0..n)
        .map(|k| (0..n).map(|j| lie.c(i, j, k).clone()).collect())
        .collect()
}

/// `V^0 = G (+) A_0`, `V^k = A_{k-1} (+) A_k` with identity cones, in random
/// bases; returns the module and the inclusion `G -> V^0` onto `ker d_0`.
pub fn random_resolution<R: Rng>(rng: &mut R, ord: &OrdinaryLP) -> (DgGModule, Matrix) {
    let lie = ord.lie();
    let len = rng.gen_range(1..=3);
    let mut asm = Assembly::new(lie, len);
    asm.add(0, ord.action(), None);
    for i in 0..len - 1 {
        let m = base_module(rng, lie);
        asm.add(i, &m, Some(nonzero(rng)));
    }
    let g = ord.action().dim_space();
    let p0 = random_invertible(rng, asm.actions[0].dim_space());
    let mut incl = Matrix::zeros(asm.actions[0].dim_space(), g);
    for i in 0..g {
        incl[(i, i)] = int(1);
    }
    let iso = p0.mul(&incl);
    // conjugate degree 0 by p0 and the rest randomly
    let ps: Vec<Matrix> = std::iter::once(p0)
        .chain(
            asm.actions[1..]
                .iter()
                .map(|a| random_invertible(rng, a.dim_space())),
        )
        .collect();
    let actions = asm
        .actions
        .iter()
        .zip(&ps)
        .map(|(a, p)| a.conjugate(p))
        .collect();
    let diffs = asm
        .diffs
        .iter()
        .enumerate()
        .map(|(k, d)| ps[k + 1].mul(d).mul(&ps[k].inverse().unwrap()))
        .collect();
    let v = DgGModule::new(lie, 0, actions, diffs).expect("resolution is valid");
    (v, iso)
}

/// `L = span{t} |x K^m` with `[t, e_i] = A e_i`, `A` upper triangular, and a
/// subalgebra spanned by `t`, `e_1`, or both.
pub fn random_solvable_pair<R: Rng>(rng: &mut R) -> LiePair {
    let m = rng.gen_range(1..=2);
    let mut brackets = Vec::new();
    for i in 0..m {
        for k in 0..=i {
            let a = small(rng, 2);
            if a != int(0) {
                brackets.push((0, i + 1, k + 1, a));
            }
        }
    }
    let names: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=m).map(|i| format!("e{i}")))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let l = LieAlgebra::from_brackets(&refs, &brackets).unwrap();
    let subs: Vec<Vec<usize>> = if m == 1 {
        vec![vec![0], vec![1]]
    } else {
        vec![vec![0], vec![1], vec![0, 1], vec![1, 2]]
    };
    let idx = subs.choose(rng).unwrap();
    LiePair::from_basis_indices(&l, idx).expect("chosen spans are subalgebras")
}

/// Another splitting `j' = j + i K` with random `K`.
pub fn random_splitting<R: Rng>(rng: &mut R, p: &LiePair) -> LiePair {
    let k = random_matrix(rng, p.sub().dim(), p.quotient_dim(), 2);
    let j2 = p.section().add(&p.inclusion().mul(&k));
    p.with_splitting(&j2).expect("j + i K is a section")
}

/// `alpha_2` for `V = V^2`: either random entries or the coboundary of a
/// random `beta in C^1(g, Hom(V^2, g))`.
pub fn random_alpha2<R: Rng>(
    rng: &mut R,
    lie: &LieAlgebra,
    v2: &GAction,
    coboundary: bool,
) -> Matrix {
    let n = lie.dim();
    let d = v2.dim_space();
    let rows = wedge_basis(n, 2).len() * n;
    if !coboundary {
        return random_matrix(rng, rows, d, 1);
    }
    let hom = DgGModule::concentrated(lie, v2.clone(), 2).hom(&DgGModule::adjoint(lie));
    let mut beta = Cochain::zero();
    for a in 0..n {
        for idx in 0..n * d {
            beta.add_term(Key::new(Wedge::single(a), -2, idx), small(rng, 1));
        }
    }
    let db = d_ce(&hom, &beta);
    let basis = wedge_basis(n, 2);
    let mut out = Matrix::zeros(rows, d);
    for (k, x) in db.iter() {
        let wi = basis.iter().position(|&w| w == k.wedge).unwrap();
        let (a, j) = (k.j / d, k.j % d);
        out[(wi * n + a, j)] = x.clone();
    }
    out
}

pub fn random_degree2_module<R: Rng>(rng: &mut R, lie: &LieAlgebra) -> GAction {
    let m = base_module(rng, lie);
    let p = random_invertible(rng, m.dim_space());
    m.conjugate(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::check_action;
    use crate::morphism::check_resolution;

    #[test]
    fn generators_are_deterministic_and_valid() {
        for seed in 0..20 {
            let mut a = rng(seed);
            let mut b = rng(seed);
            let la = random_lie_algebra(&mut a, 3);
            let lb = random_lie_algebra(&mut b, 3);
            assert_eq!(la, lb);
            let va = random_module(&mut a, &la);
            let vb = random_module(&mut b, &lb);
            assert_eq!(va, vb);
            for q in va.degrees() {
                assert!(check_action(&la, va.action(q).unwrap()).is_ok());
            }
            let ord = random_ordinary_lp(&mut a, &la);
            let (v, iso) = random_resolution(&mut a, &ord);
            assert!(check_resolution(&v).is_ok());
            assert_eq!(crate::linalg::kernel(&v.diff(0)).dim(), iso.cols());
            let p = random_solvable_pair(&mut a);
            let p2 = random_splitting(&mut a, &p);
            assert!(p2.check_splitting());
        }
    }
}
