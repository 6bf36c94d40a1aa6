//! The dg LP module `L -> L/g` of a Lie algebra pair and its brackets.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::cochain::{Cochain, Key};
use crate::exterior::Wedge;
use crate::kapranov::{tuples, Kapranov};
use crate::lie::{GAction, LieAlgebra};
use crate::linalg::{int, solve_matrix, split, ComplementRule, Matrix, Scalar, Subspace};
use crate::lp::{lp_homotopic, LPModule};
use crate::module::DgGModule;
use crate::morphism::{Homotopy, WeakViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiePairError {
    #[error("inclusion has shape {got:?}, expected {expected} rows")]
    Shape {
        expected: usize,
        got: (usize, usize),
    },
    #[error("inclusion is not injective")]
    NotInjective,
    #[error("span is not closed under the bracket: [g_{0}, g_{1}] leaves it")]
    NotSubalgebra(usize, usize),
    #[error("section does not split the quotient map")]
    BadSplitting,
    #[error("pairs have different ambient algebras or subalgebras")]
    DifferentPairs,
    #[error("homotopy relation fails on generator ({}, {})", .0.k, .0.j)]
    VerificationFailure(WeakViolation),
    #[error("no homotopy found between the two LP structures")]
    NoHomotopy,
}

/// `g -> L -> L/g` with a splitting. The quotient map `pr_q` is fixed by the
/// subalgebra; the section `j` and `pr_g = i^{-1}(1 - j pr_q)` vary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePair {
    l: LieAlgebra,
    g: LieAlgebra,
    incl: Matrix,
    j: Matrix,
    pr_g: Matrix,
    pr_q: Matrix,
    quotient_names: Vec<String>,
}

impl LiePair {
    /// Subalgebra spanned by the columns of `incl`; the default section is
    /// the coordinate complement.
    pub fn new(l: &LieAlgebra, incl: &Matrix) -> Result<Self, LiePairError> {
        let n = l.dim();
        if incl.rows() != n {
            return Err(LiePairError::Shape {
                expected: n,
                got: (incl.rows(), incl.cols()),
            });
        }
        let m = incl.cols();
        if incl.rank() != m {
            return Err(LiePairError::NotInjective);
        }
        let cols: Vec<Vec<Scalar>> = (0..m).map(|a| incl.column(a)).collect();
        let sub = Subspace::new(n, cols.clone());
        let sp = split(&sub, ComplementRule::Pivot);
        let mut c = vec![Scalar::zero(); m * m * m];
        for a in 0..m {
            for b in 0..m {
                let br = l.bracket(&cols[a], &cols[b]);
                let coords = solve_matrix(incl, &Matrix::from_columns(n, &[br]))
                    .ok_or(LiePairError::NotSubalgebra(a, b))?;
                for k in 0..m {
                    c[(a * m + b) * m + k] = coords[(k, 0)].clone();
                }
            }
        }
        let names = (0..m)
            .map(|a| match standard_index(&cols[a]) {
                Some(r) => l.names()[r].clone(),
                None => format!("g{a}"),
            })
            .collect();
        let g = LieAlgebra::new(names, c).expect("a subalgebra is a Lie algebra");
        let q = n - m;
        let quotient_names = if q == 1 {
            vec!["b".to_string()]
        } else {
            (0..q).map(|k| format!("b{k}")).collect()
        };
        let mut p = LiePair {
            l: l.clone(),
            g,
            incl: incl.clone(),
            j: sp.comp_incl.clone(),
            pr_g: Matrix::zeros(m, n),
            pr_q: sp.comp_proj,
            quotient_names,
        };
        p.pr_g = p.pr_g_for(&p.j)?;
        Ok(p)
    }

    /// Subalgebra spanned by the given basis vectors of `L`.
    pub fn from_basis_indices(l: &LieAlgebra, idx: &[usize]) -> Result<Self, LiePairError> {
        let n = l.dim();
        let cols: Vec<Vec<Scalar>> = idx
            .iter()
            .map(|&r| (0..n).map(|i| int((i == r) as i64)).collect())
            .collect();
        Self::new(l, &Matrix::from_columns(n, &cols))
    }

    fn pr_g_for(&self, j: &Matrix) -> Result<Matrix, LiePairError> {
        let n = self.l.dim();
        if j.rows() != n || j.cols() != self.quotient_dim() {
            return Err(LiePairError::BadSplitting);
        }
        if self.pr_q.mul(j) != Matrix::identity(self.quotient_dim()) {
            return Err(LiePairError::BadSplitting);
        }
        let rest = Matrix::identity(n).sub(&j.mul(&self.pr_q));
        solve_matrix(&self.incl, &rest).ok_or(LiePairError::BadSplitting)
    }

    /// Same pair with another section `j'` of the quotient map.
    pub fn with_splitting(&self, j: &Matrix) -> Result<Self, LiePairError> {
        let pr_g = self.pr_g_for(j)?;
        Ok(LiePair {
            j: j.clone(),
            pr_g,
            ..self.clone()
        })
    }

    pub fn ambient(&self) -> &LieAlgebra {
        &self.l
    }

    pub fn sub(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn inclusion(&self) -> &Matrix {
        &self.incl
    }

    pub fn section(&self) -> &Matrix {
        &self.j
    }

    pub fn pr_g(&self) -> &Matrix {
        &self.pr_g
    }

    pub fn pr_quotient(&self) -> &Matrix {
        &self.pr_q
    }

    pub fn quotient_dim(&self) -> usize {
        self.l.dim() - self.incl.cols()
    }

    pub fn quotient_names(&self) -> &[String] {
        &self.quotient_names
    }

    pub fn check_splitting(&self) -> bool {
        let n = self.l.dim();
        let m = self.g.dim();
        let q = self.quotient_dim();
        self.pr_g.mul(&self.incl) == Matrix::identity(m)
            && self.pr_q.mul(&self.j) == Matrix::identity(q)
            && self.incl.mul(&self.pr_g).add(&self.j.mul(&self.pr_q)) == Matrix::identity(n)
    }

    fn ad_of_g(&self, a: usize) -> Matrix {
        self.l.ad(&self.incl.column(a))
    }

    /// `ad` in `L` of `i(x)` for `x` in g coordinates.
    fn ad_incl(&self, x: &[Scalar]) -> Matrix {
        self.l.ad(&self.incl.apply(x))
    }

    /// Bott connection `nabla_{x_a} = pr_q ad(i x_a) j`.
    pub fn nabla(&self, a: usize) -> Matrix {
        self.pr_q.mul(&self.ad_of_g(a)).mul(&self.j)
    }

    /// `Delta_b x = pr_g [j b, i x]` as a matrix on g.
    pub fn delta(&self, k: usize) -> Matrix {
        self.pr_g.mul(&self.l.ad(&self.j.column(k))).mul(&self.incl)
    }

    /// `V^0 = L` (adjoint) `->` `V^1 = L/g` (Bott), differential `pr_q`.
    pub fn module(&self) -> DgGModule {
        let n = self.l.dim();
        let m = self.g.dim();
        let q = self.quotient_dim();
        let rho0: Vec<Matrix> = (0..m).map(|a| self.ad_of_g(a)).collect();
        let a0 = GAction::new(n, rho0);
        if q == 0 {
            return DgGModule::new(&self.g, 0, vec![a0], vec![])
                .expect("adjoint action of a subalgebra")
                .with_names(vec![self.l.names().to_vec()])
                .unwrap();
        }
        let rho1: Vec<Matrix> = (0..m).map(|a| self.nabla(a)).collect();
        DgGModule::new(
            &self.g,
            0,
            vec![a0, GAction::new(q, rho1)],
            vec![self.pr_q.clone()],
        )
        .expect("the pair complex is a dg module")
        .with_names(vec![self.l.names().to_vec(), self.quotient_names.clone()])
        .unwrap()
    }

    /// `alpha_0 = pr_g`, `alpha_1(b | x) = pr_g [j b, i x]`.
    pub fn lp_module(&self) -> LPModule {
        let m = self.g.dim();
        let q = self.quotient_dim();
        let mut alpha = vec![self.pr_g.clone()];
        if q > 0 {
            let mut a1 = Matrix::zeros(m * m, q);
            for k in 0..q {
                let d = self.delta(k);
                for a in 0..m {
                    for c in 0..m {
                        a1[(a * m + c, k)] = d[(c, a)].clone();
                    }
                }
            }
            if m > 0 {
                alpha.push(a1);
            }
        }
        LPModule::new(&self.module(), alpha).expect("pair structure maps have valid shapes")
    }
}

fn standard_index(v: &[Scalar]) -> Option<usize> {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    (nz.len() == 1 && v[nz[0]] == int(1)).then(|| nz[0])
}

pub fn build_pair_lp(p: &LiePair) -> LPModule {
    p.lp_module()
}

/// The analytic witness `h_1 = i^{-1}(j - j')`, verified against both
/// structures and cross-checked by the linear-algebra homotopy search.
pub fn splitting_homotopy(p: &LiePair, p2: &LiePair) -> Result<Homotopy, LiePairError> {
    if p.l != p2.l || p.incl != p2.incl {
        return Err(LiePairError::DifferentPairs);
    }
    let a = p.lp_module();
    let b = p2.lp_module();
    let v = a.module();
    let g = a.g_module();
    let mut comps = HashMap::new();
    if p.quotient_dim() > 0 {
        let h1 = solve_matrix(&p.incl, &p.j.sub(&p2.j)).ok_or(LiePairError::BadSplitting)?;
        comps.insert((1, 0), h1);
    }
    let h = Homotopy::from_components(v, g, &comps).expect("h_1 has the right shape");
    h.verify(&a.as_weak_morphism(), &b.as_weak_morphism())
        .map_err(LiePairError::VerificationFailure)?;
    lp_homotopic(&a, &b).ok_or(LiePairError::NoHomotopy)?;
    Ok(h)
}

/// One block of the explicit bracket formulas, e.g. `V^1 (x) V^0 -> g^v (x) V^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairComponent {
    pub label: &'static str,
    /// Only the component supported entirely on the quotient.
    pub classical: bool,
    pub entries: BTreeMap<Vec<usize>, Cochain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairComponents {
    pub r2: Vec<PairComponent>,
    pub r3: Vec<PairComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMismatch {
    pub arity: usize,
    pub tuple: Vec<usize>,
    pub formula: Cochain,
    pub machinery: Cochain,
}

impl PairComponents {
    pub fn table(&self, arity: usize) -> BTreeMap<Vec<usize>, Cochain> {
        let comps = match arity {
            2 => &self.r2,
            3 => &self.r3,
            _ => panic!("explicit formulas exist for arities 2 and 3"),
        };
        let mut out: BTreeMap<Vec<usize>, Cochain> = BTreeMap::new();
        for c in comps {
            for (t, e) in &c.entries {
                let slot = out.entry(t.clone()).or_default();
                *slot = slot.add(e);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Entrywise comparison with the generic brackets on all generator tuples.
    pub fn compare(&self, k: &Kapranov) -> Result<(), PairMismatch> {
        for arity in [2, 3] {
            let t = self.table(arity);
            for tuple in tuples(k.generators().len(), arity) {
                let formula = t.get(&tuple).cloned().unwrap_or_default();
                let machinery = k.closed_form(&tuple);
                if formula != machinery {
                    return Err(PairMismatch {
                        arity,
                        tuple,
                        formula,
                        machinery,
                    });
                }
            }
        }
        Ok(())
    }
}

/// `R_2` and `R_3` on generators of `V[1]` from the `nabla`/`Delta` formulas.
/// Generator indices: `L` basis first, then the quotient basis.
pub fn pair_bracket_components(p: &LiePair) -> PairComponents {
    let n = p.l.dim();
    let m = p.g.dim();
    let q = p.quotient_dim();
    let deltas: Vec<Matrix> = (0..q).map(|k| p.delta(k)).collect();
    let pr_g_col = |r: usize| p.pr_g.column(r);
    let unit =
        |len: usize, i: usize| -> Vec<Scalar> { (0..len).map(|t| int((t == i) as i64)).collect() };
    // y . m_s in L, as V^0[1] cochain with optional form
    let on_l = |w: Wedge, x: &[Scalar], s: usize, sgn: i64, out: &mut Cochain| {
        let v = p.ad_incl(x).apply(&unit(n, s));
        for (c, val) in v.into_iter().enumerate() {
            if !val.is_zero() {
                out.add_term(Key::new(w, -1, c), val * int(sgn));
            }
        }
    };
    let on_q = |w: Wedge, x: &[Scalar], k: usize, sgn: i64, out: &mut Cochain| {
        let v = p.pr_q.mul(&p.ad_incl(x)).mul(&p.j).apply(&unit(q, k));
        for (c, val) in v.into_iter().enumerate() {
            if !val.is_zero() {
                out.add_term(Key::new(w, 0, c), val * int(sgn));
            }
        }
    };
    let b = |k: usize| n + k;
    let mut r2 = vec![
        PairComponent {
            label: "V0[1] x V0[1] -> V0[1]",
            classical: false,
            entries: BTreeMap::new(),
        },
        PairComponent {
            label: "V0[1] x V1[1] -> V1[1]",
            classical: false,
            entries: BTreeMap::new(),
        },
        PairComponent {
            label: "V1[1] x V0[1] -> g^v x V0[1]",
            classical: false,
            entries: BTreeMap::new(),
        },
        PairComponent {
            label: "V1[1] x V1[1] -> g^v x V1[1]",
            classical: true,
            entries: BTreeMap::new(),
        },
    ];
    let mut r3 = vec![
        PairComponent {
            label: "V0[1] x V1[1] x V0[1] -> V0[1]",
            classical: false,
            entries: BTreeMap::new(),
        },
        PairComponent {
            label: "V0[1] x V1[1] x V1[1] -> V1[1]",
            classical: false,
            entries: BTreeMap::new(),
        },
        PairComponent {
            label: "V1[1] x V1[1] x V0[1] -> g^v x V0[1]",
            classical: false,
            entries: BTreeMap::new(),
        },
        PairComponent {
            label: "V1[1] x V1[1] x V1[1] -> g^v x V1[1]",
            classical: true,
            entries: BTreeMap::new(),
        },
    ];
    let put = |comp: &mut PairComponent, t: Vec<usize>, c: Cochain| {
        if !c.is_zero() {
            comp.entries.insert(t, c);
        }
    };
    for r in 0..n {
        let x = pr_g_col(r);
        for s in 0..n {
            let mut c = Cochain::zero();
            on_l(Wedge::EMPTY, &x, s, -1, &mut c);
            put(&mut r2[0], vec![r, s], c);
        }
        for k in 0..q {
            let mut c = Cochain::zero();
            on_q(Wedge::EMPTY, &x, k, -1, &mut c);
            put(&mut r2[1], vec![r, b(k)], c);
        }
    }
    for k1 in 0..q {
        for s in 0..n {
            let mut c = Cochain::zero();
            for a in 0..m {
                on_l(Wedge::single(a), &deltas[k1].column(a), s, 1, &mut c);
            }
            put(&mut r2[2], vec![b(k1), s], c);
        }
        for k2 in 0..q {
            let mut c = Cochain::zero();
            for a in 0..m {
                on_q(Wedge::single(a), &deltas[k1].column(a), k2, 1, &mut c);
            }
            put(&mut r2[3], vec![b(k1), b(k2)], c);
        }
    }
    for k1 in 0..q {
        for r in 0..n {
            let x = deltas[k1].apply(&pr_g_col(r));
            for s in 0..n {
                let mut c = Cochain::zero();
                on_l(Wedge::EMPTY, &x, s, -1, &mut c);
                put(&mut r3[0], vec![r, b(k1), s], c);
            }
            for k2 in 0..q {
                let mut c = Cochain::zero();
                on_q(Wedge::EMPTY, &x, k2, -1, &mut c);
                put(&mut r3[1], vec![r, b(k1), b(k2)], c);
            }
        }
        for k0 in 0..q {
            let dd = deltas[k1].mul(&deltas[k0]);
            for s in 0..n {
                let mut c = Cochain::zero();
                for a in 0..m {
                    on_l(Wedge::single(a), &dd.column(a), s, 1, &mut c);
                }
                put(&mut r3[2], vec![b(k0), b(k1), s], c);
            }
            for k2 in 0..q {
                let mut c = Cochain::zero();
                for a in 0..m {
                    on_q(Wedge::single(a), &dd.column(a), k2, 1, &mut c);
                }
                put(&mut r3[3], vec![b(k0), b(k1), b(k2)], c);
            }
        }
    }
    PairComponents { r2, r3 }
}

/// Expected values for the sl2 pair with `g = span{h, e}`. Cochains live in
/// `Omega_g(V[1])`; forms use `h^v = xi^0`, `e^v = xi^1`.
#[derive(Clone, Debug)]
pub struct Sl2Golden {
    /// `d` of the form generators `h^v`, `e^v` as pure forms.
    pub d_forms: Vec<(&'static str, Cochain)>,
    /// `d_tot` of `h, e, f, b`.
    pub d_generators: Vec<(&'static str, Cochain)>,
    pub r2: Vec<([&'static str; 2], Cochain)>,
    /// Generating `R_3` values as listed; the listing claims all other
    /// generating `R_3` vanish.
    pub r3: Vec<([&'static str; 3], Cochain)>,
    /// `R_n` vanishes on generators from this arity on.
    pub vanishing_from: usize,
}

pub fn builtin_sl2() -> (LiePair, Sl2Golden) {
    let pair = LiePair::from_basis_indices(&LieAlgebra::sl2(), &[0, 1]).expect("borel of sl2");
    let hv = Wedge::single(0);
    let ev = Wedge::single(1);
    let he = Wedge::from_indices(&[0, 1]).unwrap();
    // V[1] keys: h, e, f at q = -1 (indices 0, 1, 2), b at q = 0
    let t = |terms: &[(Wedge, i32, usize, i64)]| -> Cochain {
        terms
            .iter()
            .map(|&(w, q, j, c)| (Key::new(w, q, j), int(c)))
            .collect()
    };
    let e0 = Wedge::EMPTY;
    let golden = Sl2Golden {
        d_forms: vec![("h^∨", Cochain::zero()), ("e^∨", t(&[(he, 0, 0, -2)]))],
        d_generators: vec![
            ("h", t(&[(ev, -1, 1, -2)])),
            ("e", t(&[(hv, -1, 1, 2)])),
            ("f", t(&[(hv, -1, 2, -2), (ev, -1, 0, 1), (e0, 0, 0, 1)])),
            ("b", t(&[(hv, 0, 0, -2)])),
        ],
        r2: vec![
            (["h", "e"], t(&[(e0, -1, 1, -2)])),
            (["h", "f"], t(&[(e0, -1, 2, 2)])),
            (["e", "f"], t(&[(e0, -1, 0, -1)])),
            (["f", "e"], Cochain::zero()),
            (["h", "b"], t(&[(e0, 0, 0, 2)])),
            (["e", "b"], Cochain::zero()),
            (["b", "h"], Cochain::zero()),
            (["b", "e"], t(&[(ev, -1, 1, -2)])),
            (["b", "f"], t(&[(ev, -1, 2, 2)])),
            (["b", "b"], t(&[(ev, 0, 0, 2)])),
        ],
        r3: vec![
            (["e", "b", "e"], t(&[(e0, -1, 1, 2)])),
            (["e", "b", "f"], t(&[(e0, -1, 2, -2)])),
        ],
        vanishing_from: 4,
    };
    (pair, golden)
}

/// Generator index in `V[1]` of the sl2 pair for a basis name.
pub fn sl2_generator(name: &str) -> usize {
    match name {
        "h" => 0,
        "e" => 1,
        "f" => 2,
        "b" => 3,
        _ => panic!("unknown sl2 generator {name}"),
    }
}

/// Borel subalgebra of sl3 (Cartan plus positive root vectors).
pub fn sl3_borel() -> LiePair {
    LiePair::from_basis_indices(&LieAlgebra::sl3(), &[0, 1, 2, 3, 4]).expect("borel of sl3")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::d_form_basis;
    use crate::kapranov::vanishes_from;

    #[test]
    fn sl2_structure_maps() {
        let (p, _) = builtin_sl2();
        assert!(p.check_splitting());
        assert_eq!(p.section(), &Matrix::from_ints(&[&[0], &[0], &[1]]));
        let lp = p.lp_module();
        assert!(lp.verify().is_ok());
        // alpha_0(h) = h, alpha_0(e) = e, alpha_0(f) = 0
        assert_eq!(lp.alpha(0), &Matrix::from_ints(&[&[1, 0, 0], &[0, 1, 0]]));
        // alpha_1(b | h) = 0, alpha_1(b | e) = -h
        assert_eq!(lp.alpha(1), &Matrix::from_ints(&[&[0], &[0], &[-1], &[0]]));
        // Bott action: h . b = -2b, e . b = 0
        let v = lp.module();
        assert_eq!(v.rho(1, 0), &Matrix::from_ints(&[&[-2]]));
        assert_eq!(v.rho(1, 1), &Matrix::from_ints(&[&[0]]));
    }

    #[test]
    fn sl2_golden_tables() {
        let (p, gold) = builtin_sl2();
        let k = Kapranov::from_lp(&p.lp_module());
        for (i, (_, img)) in gold.d_forms.iter().enumerate() {
            let got: Cochain = d_form_basis(p.sub(), Wedge::single(i))
                .into_iter()
                .map(|(c, w)| (Key::new(w, 0, 0), c))
                .collect();
            assert_eq!(&got, img);
        }
        let d = k.differential_images();
        for (name, img) in &gold.d_generators {
            assert_eq!(&d[sl2_generator(name)], img, "d {name}");
        }
        for (names, img) in &gold.r2 {
            let t: Vec<usize> = names.iter().map(|s| sl2_generator(s)).collect();
            assert_eq!(&k.closed_form(&t), img, "R2 {names:?}");
        }
        let t3 = k.table(3);
        for (names, img) in &gold.r3 {
            let t: Vec<usize> = names.iter().map(|s| sl2_generator(s)).collect();
            assert_eq!(&t3.entry(&t), img, "R3 {names:?}");
        }
        // one further nonzero entry, forced by the explicit component formula
        // and by the n = 3 identity: R3(e, b, b) = -2b
        assert_eq!(t3.entries.len(), 3);
        assert_eq!(
            t3.entry(&[1, 3, 3]),
            Cochain::monomial(Wedge::EMPTY, 0, 0, int(-2))
        );
        assert!(vanishes_from(&k, gold.vanishing_from, 6));
        assert!(k.recursion_check(5).is_ok());
    }

    #[test]
    fn sl2_leibniz_identities() {
        let (p, _) = builtin_sl2();
        let k = Kapranov::from_lp(&p.lp_module());
        assert!(k.check_generators(4).is_ok());
        let r = k.random_tuples(7, 30, 4);
        assert!(k.check_tuples(&r).is_ok());
    }

    #[test]
    fn explicit_components_match_machinery() {
        let (p, _) = builtin_sl2();
        let comps = pair_bracket_components(&p);
        let k = Kapranov::from_lp(&p.lp_module());
        assert_eq!(comps.compare(&k), Ok(()));
        // classical component: R2(b, b) = 2 e^v (x) b
        let classical = comps.r2.iter().find(|c| c.classical).unwrap();
        let bb = classical.entries.get(&vec![3, 3]).unwrap();
        assert_eq!(bb, &Cochain::monomial(Wedge::single(1), 0, 0, int(2)));
        let s3 = sl3_borel();
        let lp = s3.lp_module();
        assert!(lp.verify().is_ok());
        let k3 = Kapranov::from_lp(&lp);
        assert_eq!(pair_bracket_components(&s3).compare(&k3), Ok(()));
    }

    #[test]
    fn whole_algebra_and_abelian_pairs() {
        let l = LieAlgebra::sl2();
        let p = LiePair::from_basis_indices(&l, &[0, 1, 2]).unwrap();
        let lp = p.lp_module();
        assert_eq!(lp.u(), 0);
        assert_eq!(lp.alpha(0), &Matrix::identity(3));
        assert!(lp.verify().is_ok());
        let a = LieAlgebra::abelian(3);
        let p = LiePair::from_basis_indices(&a, &[1]).unwrap();
        let lp = p.lp_module();
        assert!(lp.alpha(1).is_zero());
        let comps = pair_bracket_components(&p);
        assert!(comps.table(2).is_empty() && comps.table(3).is_empty());
    }

    #[test]
    fn non_subalgebra_rejected() {
        let l = LieAlgebra::sl2();
        assert!(matches!(
            LiePair::from_basis_indices(&l, &[1, 2]),
            Err(LiePairError::NotSubalgebra(..))
        ));
    }

    #[test]
    fn sl2_splitting_homotopy() {
        let (p, _) = builtin_sl2();
        let same = splitting_homotopy(&p, &p).unwrap();
        assert!(same.is_zero());
        // j'(b) = f + h
        let p2 = p
            .with_splitting(&Matrix::from_ints(&[&[1], &[0], &[1]]))
            .unwrap();
        assert!(p2.check_splitting());
        let h = splitting_homotopy(&p, &p2).unwrap();
        assert_eq!(h.component(1, 0), Matrix::from_ints(&[&[-1], &[0]]));
        assert!(p
            .with_splitting(&Matrix::from_ints(&[&[1], &[0], &[0]]))
            .is_err());
    }
}
