//! Weak morphisms `V ~> W` of dg g-modules, homotopies between them, the
//! functor `H^0`, the lifting construction and the homotopy solver.
//!
//! A weak morphism is stored by its values on the generators of `V`; the
//! value on `v in V^k` is `sum_l f_k^l(v)` with `f_k^l(v) in ^l g^v (x)
//! W^{k-l}`. It is extended by `f(w (x) v) = w ^ f(v)`. A homotopy has degree
//! `-1` and is extended by `h(w (x) v) = (-1)^p w ^ h(v)`; `h` witnesses
//! `f' - f = d h + h d`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cochain::{d_ce, d_tot, wedge_monomial, Cochain, Key};
use crate::exterior::{wedge_basis, Wedge};
use crate::linalg::{
    image_with_section, kernel, sign, solve, solve_matrix, split, ComplementRule, Matrix, Scalar,
};
use crate::module::DgGModule;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("lie algebras of source and target differ")]
    LieMismatch,
    #[error("image of generator ({q}, {j}) is not of total degree {expected}")]
    Degree { q: i32, j: usize, expected: i32 },
    #[error("expected {expected} generator images, got {got}")]
    Count { expected: usize, got: usize },
    #[error("component ({k}, {l}) has shape {got:?}, expected {expected:?}")]
    ComponentShape {
        k: i32,
        l: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("source is not acyclic in degree {0}")]
    NotAcyclic(i32),
    #[error("source must be concentrated in non-negative degrees")]
    Negative,
    #[error("map on H^0 is not equivariant for generator {0}")]
    NotEquivariant(usize),
    #[error("map on H^0 has shape {got:?}, expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("recursion is not well defined in degree {0}")]
    WellDefinednessFailure(i32),
}

/// First failure of the chain condition `f d_tot = d_tot f`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("chain condition fails on generator ({k}, {j})")]
pub struct WeakViolation {
    pub k: i32,
    pub j: usize,
    pub residual: Cochain,
}

fn check_images(
    source: &DgGModule,
    target: &DgGModule,
    images: &[Cochain],
    shift: i32,
) -> Result<(), MorphismError> {
    if source.lie() != target.lie() {
        return Err(MorphismError::LieMismatch);
    }
    let gens = source.generators();
    if gens.len() != images.len() {
        return Err(MorphismError::Count {
            expected: gens.len(),
            got: images.len(),
        });
    }
    for (&(q, j), img) in gens.iter().zip(images) {
        let ok = img.iter().all(|(k, _)| {
            k.degree() == q + shift && k.j < target.dim(k.q) && k.wedge.0 >> source.lie().dim() == 0
        });
        if !ok {
            return Err(MorphismError::Degree {
                q,
                j,
                expected: q + shift,
            });
        }
    }
    Ok(())
}

/// Component `(k, l)` as a matrix with rows `(wedge index) * dim W^{k-l-s} + j`,
/// wedges in lexicographic order.
fn component_matrix(
    source: &DgGModule,
    target: &DgGModule,
    images: &[Cochain],
    k: i32,
    l: usize,
    shift: i32,
) -> Matrix {
    let wb = wedge_basis(source.lie().dim(), l);
    let tq = k - l as i32 + shift;
    let dt = target.dim(tq);
    let widx: HashMap<Wedge, usize> = wb.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut m = Matrix::zeros(wb.len() * dt, source.dim(k));
    let offset = generator_offset(source, k);
    for j in 0..source.dim(k) {
        for (key, c) in images[offset + j].iter() {
            if key.wedge.degree() == l && key.q == tq {
                m[(widx[&key.wedge] * dt + key.j, j)] = c.clone();
            }
        }
    }
    m
}

fn images_from_components(
    source: &DgGModule,
    target: &DgGModule,
    components: &HashMap<(i32, usize), Matrix>,
    shift: i32,
) -> Result<Vec<Cochain>, MorphismError> {
    let mut images = vec![Cochain::zero(); source.total_dim()];
    let n = source.lie().dim();
    for (&(k, l), m) in components {
        let wb = wedge_basis(n, l);
        let tq = k - l as i32 + shift;
        let dt = target.dim(tq);
        let expected = (wb.len() * dt, source.dim(k));
        if (m.rows(), m.cols()) != expected {
            return Err(MorphismError::ComponentShape {
                k,
                l,
                expected,
                got: (m.rows(), m.cols()),
            });
        }
        let offset = generator_offset(source, k);
        for j in 0..source.dim(k) {
            for (wi, w) in wb.iter().enumerate() {
                for t in 0..dt {
                    let c = &m[(wi * dt + t, j)];
                    if !c.is_zero() {
                        images[offset + j].add_term(Key::new(*w, tq, t), c.clone());
                    }
                }
            }
        }
    }
    Ok(images)
}

/// Index of the first generator of `V^q` in [`DgGModule::generators`].
pub fn generator_offset(v: &DgGModule, q: i32) -> usize {
    v.degrees().take_while(|&p| p < q).map(|p| v.dim(p)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakMorphism {
    source: DgGModule,
    target: DgGModule,
    images: Vec<Cochain>,
}

impl WeakMorphism {
    pub fn from_images(
        source: &DgGModule,
        target: &DgGModule,
        images: Vec<Cochain>,
    ) -> Result<Self, MorphismError> {
        check_images(source, target, &images, 0)?;
        Ok(WeakMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn from_components(
        source: &DgGModule,
        target: &DgGModule,
        components: &HashMap<(i32, usize), Matrix>,
    ) -> Result<Self, MorphismError> {
        let images = images_from_components(source, target, components, 0)?;
        Self::from_images(source, target, images)
    }

    pub fn zero(source: &DgGModule, target: &DgGModule) -> Self {
        Self::from_images(source, target, vec![Cochain::zero(); source.total_dim()]).unwrap()
    }

    /// Identity (`f_k^0 = id`).
    pub fn identity(v: &DgGModule) -> Self {
        let images = v
            .generators()
            .into_iter()
            .map(|(q, j)| Cochain::generator(q, j))
            .collect();
        Self::from_images(v, v, images).unwrap()
    }

    /// Strict morphism given by degreewise matrices `V^q -> W^q`.
    pub fn strict(
        source: &DgGModule,
        target: &DgGModule,
        maps: &HashMap<i32, Matrix>,
    ) -> Result<Self, MorphismError> {
        let comps = maps
            .iter()
            .map(|(&k, m)| ((k, 0usize), m.clone()))
            .collect();
        Self::from_components(source, target, &comps)
    }

    pub fn source(&self) -> &DgGModule {
        &self.source
    }

    pub fn target(&self) -> &DgGModule {
        &self.target
    }

    pub fn images(&self) -> &[Cochain] {
        &self.images
    }

    pub fn image(&self, q: i32, j: usize) -> &Cochain {
        &self.images[generator_offset(&self.source, q) + j]
    }

    pub fn component(&self, k: i32, l: usize) -> Matrix {
        component_matrix(&self.source, &self.target, &self.images, k, l, 0)
    }

    /// All nonzero components.
    pub fn components(&self) -> HashMap<(i32, usize), Matrix> {
        let mut out = HashMap::new();
        for k in self.source.degrees() {
            for l in 0..=self.source.lie().dim() {
                let m = self.component(k, l);
                if !m.is_zero() {
                    out.insert((k, l), m);
                }
            }
        }
        out
    }

    /// `f(w (x) v) = w ^ f(v)`.
    pub fn apply(&self, c: &Cochain) -> Cochain {
        let mut out = Cochain::zero();
        for (k, coef) in c.iter() {
            let img = self.image(k.q, k.j);
            out.add_assign_scaled(&wedge_monomial(k.wedge, img), coef);
        }
        out
    }

    pub fn check_weak(&self) -> Result<(), WeakViolation> {
        for (q, j) in self.source.generators() {
            let g = Cochain::generator(q, j);
            let lhs = d_tot(&self.target, &self.apply(&g));
            let rhs = self.apply(&d_tot(&self.source, &g));
            let residual = lhs.sub(&rhs);
            if !residual.is_zero() {
                return Err(WeakViolation { k: q, j, residual });
            }
        }
        Ok(())
    }

    /// `g o f`.
    pub fn compose(&self, g: &WeakMorphism) -> WeakMorphism {
        assert_eq!(self.target, g.source, "composition needs matching modules");
        let images = self.images.iter().map(|c| g.apply(c)).collect();
        WeakMorphism::from_images(&self.source, &g.target, images).unwrap()
    }

    pub fn sub(&self, other: &WeakMorphism) -> Vec<Cochain> {
        self.images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.sub(b))
            .collect()
    }

    /// The induced map `ker d^V_0 -> ker d^W_0` in the kernel bases returned
    /// by [`kernel`]; only the `f_0^0` component contributes.
    pub fn h0(&self) -> Matrix {
        let kv = kernel(&self.source.diff(0));
        let kw = kernel(&self.target.diff(0));
        let f00 = self.component(0, 0);
        let img = f00.mul(&kv.basis_matrix());
        solve_matrix(&kw.basis_matrix(), &img).expect("f_0^0 maps H^0 into H^0 for weak morphisms")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    source: DgGModule,
    target: DgGModule,
    images: Vec<Cochain>,
}

impl Homotopy {
    pub fn from_images(
        source: &DgGModule,
        target: &DgGModule,
        images: Vec<Cochain>,
    ) -> Result<Self, MorphismError> {
        check_images(source, target, &images, -1)?;
        Ok(Homotopy {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn from_components(
        source: &DgGModule,
        target: &DgGModule,
        components: &HashMap<(i32, usize), Matrix>,
    ) -> Result<Self, MorphismError> {
        let images = images_from_components(source, target, components, -1)?;
        Self::from_images(source, target, images)
    }

    pub fn zero(source: &DgGModule, target: &DgGModule) -> Self {
        Self::from_images(source, target, vec![Cochain::zero(); source.total_dim()]).unwrap()
    }

    pub fn images(&self) -> &[Cochain] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Cochain::is_zero)
    }

    pub fn image(&self, q: i32, j: usize) -> &Cochain {
        &self.images[generator_offset(&self.source, q) + j]
    }

    /// `h_k^l : V^k -> ^l g^v (x) W^{k-l-1}`.
    pub fn component(&self, k: i32, l: usize) -> Matrix {
        component_matrix(&self.source, &self.target, &self.images, k, l, -1)
    }

    /// `h(w (x) v) = (-1)^p w ^ h(v)`.
    pub fn apply(&self, c: &Cochain) -> Cochain {
        let mut out = Cochain::zero();
        for (k, coef) in c.iter() {
            let img = self.image(k.q, k.j);
            let s = coef * sign(k.wedge.degree() as i64);
            out.add_assign_scaled(&wedge_monomial(k.wedge, img), &s);
        }
        out
    }

    /// Checks `f' - f = d h + h d` on all generators.
    pub fn verify(&self, f: &WeakMorphism, f2: &WeakMorphism) -> Result<(), WeakViolation> {
        for (q, j) in self.source.generators() {
            let g = Cochain::generator(q, j);
            let lhs = f2.apply(&g).sub(&f.apply(&g));
            let rhs =
                d_tot(&self.target, &self.apply(&g)).add(&self.apply(&d_tot(&self.source, &g)));
            let residual = lhs.sub(&rhs);
            if !residual.is_zero() {
                return Err(WeakViolation { k: q, j, residual });
            }
        }
        Ok(())
    }
}

/// Positive-degree acyclicity and non-negativity of a source module.
pub fn check_resolution(v: &DgGModule) -> Result<(), LiftError> {
    if !v.is_nonnegative() {
        return Err(LiftError::Negative);
    }
    for k in 1..=v.top() {
        let z = kernel(&v.diff(k)).dim();
        let b = v.diff(k - 1).rank();
        if z != b {
            return Err(LiftError::NotAcyclic(k));
        }
    }
    Ok(())
}

/// Defines images on `V^{k+1}` from prescribed values on `d(V^k)`:
/// `value(d x) = rhs(x)`, zero on the chosen complement of `d(V^k)`.
/// Fails when `rhs` does not vanish on `ker d_k`.
fn extend_along_differential(
    v: &DgGModule,
    k: i32,
    rhs: &[Cochain],
    rule: ComplementRule,
) -> Result<Vec<Cochain>, LiftError> {
    let d = v.diff(k);
    for z in kernel(&d).basis() {
        let mut acc = Cochain::zero();
        for (x, r) in z.iter().zip(rhs) {
            acc.add_assign_scaled(r, x);
        }
        if !acc.is_zero() {
            return Err(LiftError::WellDefinednessFailure(k));
        }
    }
    let (img, cols) = image_with_section(&d, rule);
    let sp = split(&img, rule);
    let n = v.dim(k + 1);
    let mut out = vec![Cochain::zero(); n];
    for (j, o) in out.iter_mut().enumerate() {
        for (r, &col) in cols.iter().enumerate() {
            let a = &sp.sub_proj[(r, j)];
            if !a.is_zero() {
                o.add_assign_scaled(&rhs[col], a);
            }
        }
    }
    Ok(out)
}

/// Lifts `phi : H^0(V) -> H^0(W)` (in kernel bases) to a weak morphism,
/// following the degree-by-degree construction with deterministic choices.
pub fn lift(
    phi: &Matrix,
    v: &DgGModule,
    w: &DgGModule,
    rule: ComplementRule,
) -> Result<WeakMorphism, LiftError> {
    check_resolution(v)?;
    let kv = kernel(&v.diff(0));
    let kw = kernel(&w.diff(0));
    if (phi.rows(), phi.cols()) != (kw.dim(), kv.dim()) {
        return Err(LiftError::Shape {
            expected: (kw.dim(), kv.dim()),
            got: (phi.rows(), phi.cols()),
        });
    }
    let kvb = kv.basis_matrix();
    let kwb = kw.basis_matrix();
    for i in 0..v.lie().dim() {
        let rv = solve_matrix(&kvb, &v.rho(0, i).mul(&kvb)).unwrap_or_else(|| Matrix::zeros(0, 0));
        let rw = solve_matrix(&kwb, &w.rho(0, i).mul(&kwb)).unwrap_or_else(|| Matrix::zeros(0, 0));
        if kv.dim() > 0 && phi.mul(&rv) != rw.mul(phi) {
            return Err(LiftError::NotEquivariant(i));
        }
    }
    let mut images = vec![Cochain::zero(); v.total_dim()];
    if v.dim(0) > 0 {
        let sp = split(&kv, rule);
        let f0 = kwb.mul(phi).mul(&sp.sub_proj);
        let off = generator_offset(v, 0);
        for j in 0..v.dim(0) {
            for t in 0..f0.rows() {
                images[off + j].add_term(Key::new(Wedge::EMPTY, 0, t), f0[(t, j)].clone());
            }
        }
    }
    for k in 0..=v.top() {
        let f = WeakMorphism {
            source: v.clone(),
            target: w.clone(),
            images: images.clone(),
        };
        let off = generator_offset(v, k);
        let rhs: Vec<Cochain> = (0..v.dim(k))
            .map(|j| {
                let g = Cochain::generator(k, j);
                d_tot(w, &images[off + j]).sub(&f.apply(&d_ce(v, &g)))
            })
            .collect();
        let next = extend_along_differential(v, k, &rhs, rule)?;
        if k < v.top() {
            let off2 = generator_offset(v, k + 1);
            for (j, c) in next.into_iter().enumerate() {
                images[off2 + j] = c;
            }
        }
    }
    Ok(WeakMorphism::from_images(v, w, images).expect("lift produces degree-0 images"))
}

/// Solves `f' - f = d h + h d` as one linear system in all entries of `h`.
pub fn find_homotopy(f: &WeakMorphism, f2: &WeakMorphism) -> Option<Homotopy> {
    let v = &f.source;
    let w = &f.target;
    assert_eq!(v, &f2.source);
    assert_eq!(w, &f2.target);
    let n = v.lie().dim();
    let gens = v.generators();
    // unknowns: (generator index, target key of degree q - 1)
    let mut unknowns: Vec<(usize, Key)> = Vec::new();
    for (gi, &(q, _)) in gens.iter().enumerate() {
        for l in 0..=n {
            let tq = q - 1 - l as i32;
            for wd in wedge_basis(n, l) {
                for t in 0..w.dim(tq) {
                    unknowns.push((gi, Key::new(wd, tq, t)));
                }
            }
        }
    }
    let mut rows: HashMap<(usize, Key), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
    let row_of = |rows: &mut HashMap<(usize, Key), usize>, key: (usize, Key)| {
        let len = rows.len();
        *rows.entry(key).or_insert(len)
    };
    let dv: Vec<Cochain> = gens
        .iter()
        .map(|&(q, j)| d_tot(v, &Cochain::generator(q, j)))
        .collect();
    // for each generator u, where does h(u) appear inside h(d v)?
    let mut uses: Vec<Vec<(usize, Wedge, Scalar)>> = vec![Vec::new(); gens.len()];
    for (gi, d) in dv.iter().enumerate() {
        for (k, c) in d.iter() {
            let ui = generator_offset(v, k.q) + k.j;
            uses[ui].push((gi, k.wedge, c * sign(k.wedge.degree() as i64)));
        }
    }
    for (col, &(gi, key)) in unknowns.iter().enumerate() {
        let mono = Cochain::monomial(key.wedge, key.q, key.j, Scalar::one());
        for (k, c) in d_tot(w, &mono).iter() {
            let r = row_of(&mut rows, (gi, *k));
            entries.push((r, col, c.clone()));
        }
        for (target_gen, wd, s) in &uses[gi] {
            for (k, c) in wedge_monomial(*wd, &mono).iter() {
                let r = row_of(&mut rows, (*target_gen, *k));
                entries.push((r, col, c * s));
            }
        }
    }
    let diff = f2.sub(f);
    for (gi, c) in diff.iter().enumerate() {
        for (k, _) in c.iter() {
            row_of(&mut rows, (gi, *k));
        }
    }
    let mut m = Matrix::zeros(rows.len(), unknowns.len());
    for (r, c, x) in entries {
        m[(r, c)] += x;
    }
    let mut b = vec![Scalar::zero(); rows.len()];
    for (gi, c) in diff.iter().enumerate() {
        for (k, x) in c.iter() {
            b[rows[&(gi, *k)]] = x.clone();
        }
    }
    let x = solve(&m, &b)?;
    let mut images = vec![Cochain::zero(); gens.len()];
    for ((gi, key), val) in unknowns.iter().zip(x) {
        images[*gi].add_term(*key, val);
    }
    Some(Homotopy::from_images(v, w, images).unwrap())
}

/// The recursive construction of a homotopy for an acyclic non-negative
/// source and a non-negative target; `None` if the recursion breaks down
/// (e.g. `h0(f) != h0(f')`).
pub fn find_homotopy_recursive(
    f: &WeakMorphism,
    f2: &WeakMorphism,
    rule: ComplementRule,
) -> Option<Homotopy> {
    let v = &f.source;
    let w = &f.target;
    check_resolution(v).ok()?;
    if !w.is_nonnegative() {
        return None;
    }
    let diff = f2.sub(f);
    let mut images = vec![Cochain::zero(); v.total_dim()];
    for k in 0..=v.top() {
        let h = Homotopy {
            source: v.clone(),
            target: w.clone(),
            images: images.clone(),
        };
        let off = generator_offset(v, k);
        let rhs: Vec<Cochain> = (0..v.dim(k))
            .map(|j| {
                let g = Cochain::generator(k, j);
                diff[off + j]
                    .sub(&d_tot(w, &images[off + j]))
                    .sub(&h.apply(&d_ce(v, &g)))
            })
            .collect();
        let next = extend_along_differential(v, k, &rhs, rule).ok()?;
        if k < v.top() {
            let off2 = generator_offset(v, k + 1);
            for (j, c) in next.into_iter().enumerate() {
                images[off2 + j] = c;
            }
        }
    }
    let h = Homotopy::from_images(v, w, images).ok()?;
    h.verify(f, f2).ok()?;
    Some(h)
}
