//! Bounded cochain complexes of g-modules and the standard constructions on
//! them: shifts, duals, tensor products, Hom complexes and direct sums.

use thiserror::Error;

use crate::lie::{adjoint_action, block_diag, check_action, ActionViolation, GAction, LieAlgebra};
use crate::linalg::{sign, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("module has no graded pieces")]
    Empty,
    #[error("action on degree {degree} is not a representation: {violation}")]
    Action {
        degree: i32,
        violation: ActionViolation,
    },
    #[error("action on degree {degree} has {got} matrices, expected {expected}")]
    ActionCount {
        degree: i32,
        expected: usize,
        got: usize,
    },
    #[error("differential out of degree {degree} has shape {got:?}, expected {expected:?}")]
    DiffShape {
        degree: i32,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("d^2 != 0 starting in degree {degree}")]
    DiffSquare { degree: i32 },
    #[error("differential out of degree {degree} does not commute with generator {generator}")]
    NotEquivariant { degree: i32, generator: usize },
    #[error("expected {expected} names in degree {degree}, got {got}")]
    Names {
        degree: i32,
        expected: usize,
        got: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Piece {
    action: GAction,
    names: Vec<String>,
}

/// `V = (V^bot -> ... -> V^top, d)` with a g-action on each piece commuting
/// with `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgGModule {
    lie: LieAlgebra,
    bot: i32,
    pieces: Vec<Piece>,
    /// `diffs[i] : V^{bot+i} -> V^{bot+i+1}`; one fewer than pieces.
    diffs: Vec<Matrix>,
}

impl DgGModule {
    pub fn new(
        lie: &LieAlgebra,
        bot: i32,
        actions: Vec<GAction>,
        diffs: Vec<Matrix>,
    ) -> Result<Self, ModuleError> {
        if actions.is_empty() {
            return Err(ModuleError::Empty);
        }
        let pieces = actions
            .into_iter()
            .enumerate()
            .map(|(i, action)| Piece {
                names: default_names(bot + i as i32, action.dim_space()),
                action,
            })
            .collect();
        let m = DgGModule {
            lie: lie.clone(),
            bot,
            pieces,
            diffs,
        };
        m.validate()?;
        Ok(m)
    }

    /// Single g-module placed in one degree.
    pub fn concentrated(lie: &LieAlgebra, action: GAction, degree: i32) -> Self {
        Self::new(lie, degree, vec![action], vec![]).expect("single piece")
    }

    /// `g[0]` with the adjoint action.
    pub fn adjoint(lie: &LieAlgebra) -> Self {
        Self::concentrated(lie, adjoint_action(lie), 0)
            .with_names(vec![lie.names().to_vec()])
            .unwrap()
    }

    pub fn trivial(lie: &LieAlgebra, dim: usize, degree: i32) -> Self {
        Self::concentrated(lie, GAction::trivial(lie, dim), degree)
    }

    pub fn with_names(mut self, names: Vec<Vec<String>>) -> Result<Self, ModuleError> {
        for (i, n) in names.iter().enumerate() {
            let degree = self.bot + i as i32;
            if n.len() != self.dim(degree) || i >= self.pieces.len() {
                return Err(ModuleError::Names {
                    degree,
                    expected: self.dim(degree),
                    got: n.len(),
                });
            }
        }
        for (p, n) in self.pieces.iter_mut().zip(names) {
            p.names = n;
        }
        Ok(self)
    }

    fn validate(&self) -> Result<(), ModuleError> {
        let n = self.lie.dim();
        for q in self.degrees() {
            let a = self.action(q).unwrap();
            if a.rhos().len() != n {
                return Err(ModuleError::ActionCount {
                    degree: q,
                    expected: n,
                    got: a.rhos().len(),
                });
            }
            check_action(&self.lie, a).map_err(|violation| ModuleError::Action {
                degree: q,
                violation,
            })?;
        }
        if self.diffs.len() + 1 != self.pieces.len() {
            return Err(ModuleError::DiffShape {
                degree: self.top(),
                expected: (0, 0),
                got: (self.diffs.len(), 0),
            });
        }
        for (i, d) in self.diffs.iter().enumerate() {
            let q = self.bot + i as i32;
            let expected = (self.dim(q + 1), self.dim(q));
            if (d.rows(), d.cols()) != expected {
                return Err(ModuleError::DiffShape {
                    degree: q,
                    expected,
                    got: (d.rows(), d.cols()),
                });
            }
        }
        for q in self.degrees() {
            if !self.diff(q + 1).mul(&self.diff(q)).is_zero() {
                return Err(ModuleError::DiffSquare { degree: q });
            }
            for i in 0..n {
                let lhs = self.diff(q).mul(self.rho(q, i));
                let rhs = self.rho(q + 1, i).mul(&self.diff(q));
                if lhs != rhs {
                    return Err(ModuleError::NotEquivariant {
                        degree: q,
                        generator: i,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn bot(&self) -> i32 {
        self.bot
    }

    pub fn top(&self) -> i32 {
        self.bot + self.pieces.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.bot..=self.top()
    }

    fn piece(&self, q: i32) -> Option<&Piece> {
        if q < self.bot {
            return None;
        }
        self.pieces.get((q - self.bot) as usize)
    }

    pub fn dim(&self, q: i32) -> usize {
        self.piece(q).map_or(0, |p| p.action.dim_space())
    }

    pub fn action(&self, q: i32) -> Option<&GAction> {
        self.piece(q).map(|p| &p.action)
    }

    /// Action matrix of `x_i` on `V^q` (a `0x0` matrix outside the range).
    pub fn rho(&self, q: i32, i: usize) -> &Matrix {
        static EMPTY: std::sync::OnceLock<Matrix> = std::sync::OnceLock::new();
        match self.piece(q) {
            Some(p) => p.action.rho(i),
            None => EMPTY.get_or_init(|| Matrix::zeros(0, 0)),
        }
    }

    /// `d_q : V^q -> V^{q+1}`, zero-shaped outside the range.
    pub fn diff(&self, q: i32) -> Matrix {
        if q >= self.bot && q < self.top() {
            self.diffs[(q - self.bot) as usize].clone()
        } else {
            Matrix::zeros(self.dim(q + 1), self.dim(q))
        }
    }

    pub fn diff_ref(&self, q: i32) -> Option<&Matrix> {
        if q >= self.bot && q < self.top() {
            Some(&self.diffs[(q - self.bot) as usize])
        } else {
            None
        }
    }

    pub fn names(&self, q: i32) -> &[String] {
        self.piece(q).map_or(&[], |p| &p.names)
    }

    pub fn name(&self, q: i32, j: usize) -> &str {
        &self.names(q)[j]
    }

    /// Generators `(degree, index)` ordered by degree, then index.
    pub fn generators(&self) -> Vec<(i32, usize)> {
        self.degrees()
            .flat_map(|q| (0..self.dim(q)).map(move |j| (q, j)))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees().map(|q| self.dim(q)).sum()
    }

    /// `(V[s])^k = V^{k+s}`; the differential is not re-signed.
    pub fn shift(&self, s: i32) -> Self {
        DgGModule {
            lie: self.lie.clone(),
            bot: self.bot - s,
            pieces: self.pieces.clone(),
            diffs: self.diffs.clone(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.degrees().all(|q| q >= 0 || self.dim(q) == 0)
    }

    /// `Hom(self, other)`; degree `n` is `sum_q Hom(V^q, W^{q+n})` with blocks
    /// in increasing `q` and `phi` stored row-major (`w * dim V^q + v`).
    /// `d phi = d_W phi - (-1)^n phi d_V`, `x phi = rho_W phi - phi rho_V`.
    pub fn hom(&self, other: &DgGModule) -> Self {
        let lie = &self.lie;
        let lo = other.bot - self.top();
        let hi = other.top() - self.bot;
        let layout = |n: i32| hom_blocks(self, other, n);
        let mut actions = Vec::new();
        let mut names = Vec::new();
        for n in lo..=hi {
            let blocks = layout(n);
            let dim: usize = blocks.iter().map(|b| b.size).sum();
            let mut rho = vec![Matrix::zeros(dim, dim); lie.dim()];
            let mut nm = Vec::with_capacity(dim);
            for b in &blocks {
                let (dv, dw) = (self.dim(b.q), other.dim(b.q + n));
                for w in 0..dw {
                    for v in 0..dv {
                        nm.push(format!("{}->{}", self.name(b.q, v), other.name(b.q + n, w)));
                    }
                }
                for (i, r) in rho.iter_mut().enumerate() {
                    let rv = self.rho(b.q, i);
                    let rw = other.rho(b.q + n, i);
                    // column = source basis E_{w,v}
                    for w in 0..dw {
                        for v in 0..dv {
                            let col = b.offset + w * dv + v;
                            for w2 in 0..dw {
                                let x = &rw[(w2, w)];
                                if !num_traits::Zero::is_zero(x) {
                                    r[(b.offset + w2 * dv + v, col)] += x;
                                }
                            }
                            for v2 in 0..dv {
                                let x = &rv[(v, v2)];
                                if !num_traits::Zero::is_zero(x) {
                                    r[(b.offset + w * dv + v2, col)] -= x;
                                }
                            }
                        }
                    }
                }
            }
            actions.push(GAction::new(dim, rho));
            names.push(nm);
        }
        let mut diffs = Vec::new();
        for n in lo..hi {
            let src = layout(n);
            let dst = layout(n + 1);
            let rows: usize = dst.iter().map(|b| b.size).sum();
            let cols: usize = src.iter().map(|b| b.size).sum();
            let mut d = Matrix::zeros(rows, cols);
            let sgn = sign(n as i64);
            for b in &src {
                let (dv, dw) = (self.dim(b.q), other.dim(b.q + n));
                for w in 0..dw {
                    for v in 0..dv {
                        let col = b.offset + w * dv + v;
                        // d_W phi lands in Hom(V^q, W^{q+n+1})
                        if let Some(t) = dst.iter().find(|t| t.q == b.q) {
                            let dwm = other.diff(b.q + n);
                            for w2 in 0..dwm.rows() {
                                let x = &dwm[(w2, w)];
                                if !num_traits::Zero::is_zero(x) {
                                    d[(t.offset + w2 * dv + v, col)] += x;
                                }
                            }
                        }
                        // -(-1)^n phi d_V lands in Hom(V^{q-1}, W^{q+n})
                        if let Some(t) = dst.iter().find(|t| t.q == b.q - 1) {
                            let dvm = self.diff(b.q - 1);
                            let dv2 = self.dim(b.q - 1);
                            for v2 in 0..dv2 {
                                let x = &dvm[(v, v2)];
                                if !num_traits::Zero::is_zero(x) {
                                    d[(t.offset + w * dv2 + v2, col)] -= &sgn * x;
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        DgGModule::new(lie, lo, actions, diffs)
            .expect("Hom of dg modules is a dg module")
            .with_names(names)
            .unwrap()
    }

    /// `V^v = Hom(V, K)`: degree `-q`, action `-rho^T`.
    pub fn dual(&self) -> Self {
        let k = DgGModule::trivial(&self.lie, 1, 0)
            .with_names(vec![vec!["1".into()]])
            .unwrap();
        let h = self.hom(&k);
        let names = h
            .degrees()
            .map(|n| self.names(-n).iter().map(|s| format!("{s}^")).collect())
            .collect();
        h.with_names(names).unwrap()
    }

    /// `(V (x) W)^n = sum_p V^p (x) W^{n-p}` with blocks in increasing `p`,
    /// index `v * dim W^{n-p} + w`; `d(v (x) w) = dv (x) w + (-1)^p v (x) dw`.
    pub fn tensor(&self, other: &DgGModule) -> Self {
        let lie = &self.lie;
        let lo = self.bot + other.bot;
        let hi = self.top() + other.top();
        let layout = |n: i32| tensor_blocks(self, other, n);
        let mut actions = Vec::new();
        let mut names = Vec::new();
        for n in lo..=hi {
            let blocks = layout(n);
            let dim: usize = blocks.iter().map(|b| b.size).sum();
            let mut rho = vec![Matrix::zeros(dim, dim); lie.dim()];
            let mut nm = Vec::with_capacity(dim);
            for b in &blocks {
                let (da, db) = (self.dim(b.q), other.dim(n - b.q));
                for a in 0..da {
                    for w in 0..db {
                        nm.push(format!("{}*{}", self.name(b.q, a), other.name(n - b.q, w)));
                    }
                }
                for (i, r) in rho.iter_mut().enumerate() {
                    let ra = self.rho(b.q, i);
                    let rb = other.rho(n - b.q, i);
                    for a in 0..da {
                        for w in 0..db {
                            let col = b.offset + a * db + w;
                            for a2 in 0..da {
                                let x = &ra[(a2, a)];
                                if !num_traits::Zero::is_zero(x) {
                                    r[(b.offset + a2 * db + w, col)] += x;
                                }
                            }
                            for w2 in 0..db {
                                let x = &rb[(w2, w)];
                                if !num_traits::Zero::is_zero(x) {
                                    r[(b.offset + a * db + w2, col)] += x;
                                }
                            }
                        }
                    }
                }
            }
            actions.push(GAction::new(dim, rho));
            names.push(nm);
        }
        let mut diffs = Vec::new();
        for n in lo..hi {
            let src = layout(n);
            let dst = layout(n + 1);
            let rows: usize = dst.iter().map(|b| b.size).sum();
            let cols: usize = src.iter().map(|b| b.size).sum();
            let mut d = Matrix::zeros(rows, cols);
            for b in &src {
                let p = b.q;
                let (da, db) = (self.dim(p), other.dim(n - p));
                let sgn = sign(p as i64);
                for a in 0..da {
                    for w in 0..db {
                        let col = b.offset + a * db + w;
                        if let Some(t) = dst.iter().find(|t| t.q == p + 1) {
                            let dam = self.diff(p);
                            for a2 in 0..dam.rows() {
                                let x = &dam[(a2, a)];
                                if !num_traits::Zero::is_zero(x) {
                                    d[(t.offset + a2 * db + w, col)] += x;
                                }
                            }
                        }
                        if let Some(t) = dst.iter().find(|t| t.q == p) {
                            let dbm = other.diff(n - p);
                            let db2 = dbm.rows();
                            for w2 in 0..db2 {
                                let x = &dbm[(w2, w)];
                                if !num_traits::Zero::is_zero(x) {
                                    d[(t.offset + a * db2 + w2, col)] += &sgn * x;
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        DgGModule::new(lie, lo, actions, diffs)
            .expect("tensor of dg modules is a dg module")
            .with_names(names)
            .unwrap()
    }

    /// `V (+) W`, with the `V` basis first in each degree.
    pub fn direct_sum(&self, other: &DgGModule) -> Self {
        let lie = &self.lie;
        let lo = self.bot.min(other.bot);
        let hi = self.top().max(other.top());
        let mut actions = Vec::new();
        let mut names = Vec::new();
        for q in lo..=hi {
            let a = self
                .action(q)
                .cloned()
                .unwrap_or_else(|| GAction::trivial(lie, 0));
            let b = other
                .action(q)
                .cloned()
                .unwrap_or_else(|| GAction::trivial(lie, 0));
            actions.push(a.direct_sum(&b));
            let mut nm = self.names(q).to_vec();
            nm.extend(other.names(q).iter().cloned());
            names.push(nm);
        }
        let diffs = (lo..hi)
            .map(|q| block_diag(&self.diff(q), &other.diff(q)))
            .collect();
        DgGModule::new(lie, lo, actions, diffs)
            .expect("direct sum of dg modules is a dg module")
            .with_names(names)
            .unwrap()
    }
}

fn default_names(q: i32, dim: usize) -> Vec<String> {
    (0..dim).map(|j| format!("v{q}_{j}")).collect()
}

/// A block of a Hom or tensor degree: `q` is the source degree (Hom) or the
/// left factor degree (tensor).
#[derive(Clone, Copy, Debug)]
pub struct Block {
    pub q: i32,
    pub offset: usize,
    pub size: usize,
}

pub fn hom_blocks(v: &DgGModule, w: &DgGModule, n: i32) -> Vec<Block> {
    let mut out = Vec::new();
    let mut offset = 0;
    for q in v.degrees() {
        let size = v.dim(q) * w.dim(q + n);
        out.push(Block { q, offset, size });
        offset += size;
    }
    out
}

pub fn tensor_blocks(v: &DgGModule, w: &DgGModule, n: i32) -> Vec<Block> {
    let mut out = Vec::new();
    let mut offset = 0;
    for p in v.degrees() {
        let size = v.dim(p) * w.dim(n - p);
        out.push(Block { q: p, offset, size });
        offset += size;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::dual_action;
    use crate::linalg::int;

    #[test]
    fn adjoint_is_valid() {
        let l = LieAlgebra::sl2();
        let g = DgGModule::adjoint(&l);
        assert_eq!((g.bot(), g.top(), g.dim(0)), (0, 0, 3));
        assert_eq!(g.name(0, 2), "f");
    }

    #[test]
    fn dual_matches_coadjoint() {
        let l = LieAlgebra::sl2();
        let g = DgGModule::adjoint(&l);
        let gd = g.dual();
        assert_eq!(gd.action(0), Some(&dual_action(g.action(0).unwrap())));
    }

    #[test]
    fn shift_relabels() {
        let l = LieAlgebra::abelian(1);
        let v = DgGModule::new(
            &l,
            0,
            vec![GAction::trivial(&l, 1), GAction::trivial(&l, 1)],
            vec![Matrix::from_ints(&[&[1]])],
        )
        .unwrap();
        let s = v.shift(1);
        assert_eq!((s.bot(), s.top()), (-1, 0));
        assert_eq!(s.diff(-1), Matrix::from_ints(&[&[1]]));
    }

    #[test]
    fn nonsquare_zero_rejected() {
        let l = LieAlgebra::abelian(1);
        let t = || GAction::trivial(&l, 1);
        let r = DgGModule::new(
            &l,
            0,
            vec![t(), t(), t()],
            vec![Matrix::from_ints(&[&[1]]), Matrix::from_ints(&[&[1]])],
        );
        assert_eq!(r, Err(ModuleError::DiffSquare { degree: 0 }));
    }

    #[test]
    fn non_equivariant_rejected() {
        let l = LieAlgebra::abelian(1);
        let a = GAction::new(1, vec![Matrix::from_ints(&[&[1]])]);
        let r = DgGModule::new(
            &l,
            0,
            vec![a, GAction::trivial(&l, 1)],
            vec![Matrix::from_rows(vec![vec![int(1)]])],
        );
        assert!(matches!(r, Err(ModuleError::NotEquivariant { .. })));
    }

    #[test]
    fn hom_and_tensor_are_modules() {
        let l = LieAlgebra::nonabelian2();
        let g = DgGModule::adjoint(&l);
        let v = DgGModule::new(
            &l,
            0,
            vec![adjoint_action(&l), adjoint_action(&l)],
            vec![Matrix::identity(2)],
        )
        .unwrap();
        let t = v.tensor(&v.shift(1));
        assert_eq!((t.bot(), t.top()), (-1, 1));
        assert_eq!(t.dim(0), 8);
        let h = v.hom(&g);
        assert_eq!((h.bot(), h.top()), (-1, 0));
        assert_eq!(h.dim(-1), 4);
        let _ = v.dual().tensor(&g).direct_sum(&h);
    }
}
