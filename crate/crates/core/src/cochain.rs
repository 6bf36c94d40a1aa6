//! Sparse elements of `Omega_g(V) = ^g^v (x) V` and the operators on them.
//!
//! A basis element `xi^I (x) v` is a [`Key`]: the monomial `I`, the internal
//! degree `q` of `v` and its index in `V^q`. Pure forms use the key
//! `(I, 0, 0)`; g-valued forms use `(I, 0, a)` for `xi^I (x) x_a`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::exterior::{wedge_basis, Wedge};
use crate::lie::LieAlgebra;
use crate::linalg::{format_scalar, int, sign, Matrix, Scalar};
use crate::module::DgGModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub wedge: Wedge,
    pub q: i32,
    pub j: usize,
}

impl Key {
    pub fn new(wedge: Wedge, q: i32, j: usize) -> Self {
        Key { wedge, q, j }
    }

    pub fn degree(&self) -> i32 {
        self.wedge.degree() as i32 + self.q
    }

    /// Canonical printing order: total degree, wedge tuple, `q`, index.
    pub fn print_cmp(&self, other: &Key) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.wedge.cmp_lex(other.wedge))
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.j.cmp(&other.j))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cochain {
    terms: BTreeMap<Key, Scalar>,
}

impl Cochain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 (x) v` for the generator `v = (q, j)`.
    pub fn generator(q: i32, j: usize) -> Self {
        Self::monomial(Wedge::EMPTY, q, j, Scalar::one())
    }

    pub fn monomial(wedge: Wedge, q: i32, j: usize, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(Key::new(wedge, q, j), c);
        out
    }

    /// Pure form `c xi^I`.
    pub fn form(wedge: Wedge, c: Scalar) -> Self {
        Self::monomial(wedge, 0, 0, c)
    }

    pub fn add_term(&mut self, key: Key, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &Key) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Cochain {
            terms: self.terms.iter().map(|(k, v)| (*k, v * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn add_assign_scaled(&mut self, other: &Cochain, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(*k, v * s);
        }
    }

    pub fn add(&self, other: &Cochain) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Cochain) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Scalar::one());
        out
    }

    /// Total degree if homogeneous (`None` for zero or mixed degrees).
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(Key::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Largest exterior degree appearing.
    pub fn max_form_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.wedge.degree())
            .max()
            .unwrap_or(0)
    }

    /// Terms in canonical printing order.
    pub fn sorted_terms(&self) -> Vec<(Key, Scalar)> {
        let mut v: Vec<(Key, Scalar)> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by(|a, b| a.0.print_cmp(&b.0));
        v
    }

    /// Renders e.g. `-2 h^∨⊗f + e^∨⊗h + b`; `form_names` label `g^v`.
    pub fn render(&self, form_names: &[String], gen_name: &dyn Fn(i32, usize) -> String) -> String {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (k, c)) in terms.iter().enumerate() {
            let neg = *c < Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (n, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !abs.is_one() {
                let _ = write!(out, "{} ", format_scalar(&abs));
            }
            let form: Vec<String> = k
                .wedge
                .indices()
                .iter()
                .map(|&i| format!("{}^∨", form_names[i]))
                .collect();
            out.push_str(&form.join("∧"));
            if !form.is_empty() {
                out.push('⊗');
            }
            out.push_str(&gen_name(k.q, k.j));
        }
        out
    }

    /// Renders a cochain over `v`, using the module's generator names.
    pub fn render_in(&self, v: &DgGModule) -> String {
        self.render(v.lie().names(), &|q, j| v.name(q, j).to_string())
    }

    /// Renders a pure form (keys `(I, 0, 0)`).
    pub fn render_form(&self, lie: &LieAlgebra) -> String {
        let mut s = self.render(lie.names(), &|_, _| String::new());
        s = s.replace("⊗ ", " ").replace("⊗", "");
        if s.ends_with(' ') {
            s.pop();
        }
        // a bare scalar 1 renders as an empty string
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }
}

impl FromIterator<(Key, Scalar)> for Cochain {
    fn from_iter<T: IntoIterator<Item = (Key, Scalar)>>(iter: T) -> Self {
        let mut c = Cochain::zero();
        for (k, v) in iter {
            c.add_term(k, v);
        }
        c
    }
}

/// `d xi^I` as a list of signed monomials, using
/// `d xi^k = - sum_{a<b} c^k_{ab} xi^a ^ xi^b`.
pub fn d_form_basis(lie: &LieAlgebra, w: Wedge) -> Vec<(Scalar, Wedge)> {
    let idx = w.indices();
    let n = lie.dim();
    let mut out: BTreeMap<Wedge, Scalar> = BTreeMap::new();
    for (r, &k) in idx.iter().enumerate() {
        let before = Wedge::from_indices(&idx[..r]).unwrap();
        let after = Wedge::from_indices(&idx[r + 1..]).unwrap();
        for a in 0..n {
            for b in a + 1..n {
                let c = lie.c(a, b, k);
                if c.is_zero() {
                    continue;
                }
                let ab = Wedge::from_indices(&[a, b]).unwrap();
                let Some((s1, w1)) = before.mul(ab) else {
                    continue;
                };
                let Some((s2, w2)) = w1.mul(after) else {
                    continue;
                };
                let coef = -c.clone() * sign(r as i64) * int(s1 * s2);
                *out.entry(w2).or_insert_with(Scalar::zero) += coef;
            }
        }
    }
    out.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (c, w))
        .collect()
}

/// Chevalley-Eilenberg differential:
/// `d(w (x) v) = dw (x) v + (-1)^p w ^ sum_i xi^i (x) x_i . v`.
pub fn d_ce(v: &DgGModule, c: &Cochain) -> Cochain {
    let lie = v.lie();
    let mut out = Cochain::zero();
    for (k, coef) in c.iter() {
        for (s, w2) in d_form_basis(lie, k.wedge) {
            out.add_term(Key::new(w2, k.q, k.j), coef * s);
        }
        let p = k.wedge.degree() as i64;
        for i in 0..lie.dim() {
            let Some((s, w2)) = k.wedge.mul(Wedge::single(i)) else {
                continue;
            };
            let rho = v.rho(k.q, i);
            if rho.rows() == 0 {
                continue;
            }
            let factor = coef * int(s) * sign(p);
            for j2 in 0..rho.rows() {
                let x = &rho[(j2, k.j)];
                if !x.is_zero() {
                    out.add_term(Key::new(w2, k.q, j2), &factor * x);
                }
            }
        }
    }
    out
}

/// `d(w (x) v) = (-1)^p w (x) d^V v`.
pub fn d_internal(v: &DgGModule, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    for (k, coef) in c.iter() {
        let Some(d) = v.diff_ref(k.q) else { continue };
        let factor = coef * sign(k.wedge.degree() as i64);
        for j2 in 0..d.rows() {
            let x = &d[(j2, k.j)];
            if !x.is_zero() {
                out.add_term(Key::new(k.wedge, k.q + 1, j2), &factor * x);
            }
        }
    }
    out
}

pub fn d_tot(v: &DgGModule, c: &Cochain) -> Cochain {
    d_ce(v, c).add(&d_internal(v, c))
}

/// `a ^ c` for a pure form `a`.
pub fn wedge(a: &Cochain, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    for (ka, va) in a.iter() {
        for (kc, vc) in c.iter() {
            if let Some((s, w)) = ka.wedge.mul(kc.wedge) {
                out.add_term(Key::new(w, kc.q, kc.j), va * vc * int(s));
            }
        }
    }
    out
}

/// Left multiplication by a single monomial `xi^I`.
pub fn wedge_monomial(w: Wedge, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    for (kc, vc) in c.iter() {
        if let Some((s, w2)) = w.mul(kc.wedge) {
            out.add_term(Key::new(w2, kc.q, kc.j), vc * int(s));
        }
    }
    out
}

/// Interior product with `x = sum_i x_i e_i`, acting on the form part.
pub fn contract(x: &[Scalar], c: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    for (k, v) in c.iter() {
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            if let Some((s, w)) = k.wedge.contract(i) {
                out.add_term(Key::new(w, k.q, k.j), v * xi * int(s));
            }
        }
    }
    out
}

/// Contraction by a g-valued form: `iota_{eta (x) x} = eta ^ iota_x`.
pub fn contract_by(a: &Cochain, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    for (ka, va) in a.iter() {
        for (kc, vc) in c.iter() {
            let Some((s1, w1)) = kc.wedge.contract(ka.j) else {
                continue;
            };
            let Some((s2, w2)) = ka.wedge.mul(w1) else {
                continue;
            };
            out.add_term(Key::new(w2, kc.q, kc.j), va * vc * int(s1 * s2));
        }
    }
    out
}

/// `(eta (x) x) . (w (x) v) = eta ^ w (x) (x . v)` for a g-valued form `a`.
pub fn act_by(v: &DgGModule, a: &Cochain, c: &Cochain) -> Cochain {
    let mut out = Cochain::zero();
    for (ka, va) in a.iter() {
        for (kc, vc) in c.iter() {
            let Some((s, w)) = ka.wedge.mul(kc.wedge) else {
                continue;
            };
            let rho = v.rho(kc.q, ka.j);
            if rho.rows() == 0 {
                continue;
            }
            let factor = va * vc * int(s);
            for j2 in 0..rho.rows() {
                let x = &rho[(j2, kc.j)];
                if !x.is_zero() {
                    out.add_term(Key::new(w, kc.q, j2), &factor * x);
                }
            }
        }
    }
    out
}

/// Ordered basis of the total-degree-`n` part of `Omega_g(V)`, in canonical
/// printing order.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    keys: Vec<Key>,
    index: HashMap<Key, usize>,
}

impl CochainBasis {
    pub fn new(v: &DgGModule, n: i32) -> Self {
        let dim_g = v.lie().dim();
        let mut keys = Vec::new();
        for p in 0..=dim_g {
            let q = n - p as i32;
            let dq = v.dim(q);
            if dq == 0 {
                continue;
            }
            for w in wedge_basis(dim_g, p) {
                for j in 0..dq {
                    keys.push(Key::new(w, q, j));
                }
            }
        }
        keys.sort_by(|a, b| a.print_cmp(b));
        let index = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        CochainBasis { keys, index }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn index_of(&self, k: &Key) -> Option<usize> {
        self.index.get(k).copied()
    }

    pub fn element(&self, i: usize) -> Cochain {
        let k = self.keys[i];
        Cochain::monomial(k.wedge, k.q, k.j, Scalar::one())
    }

    /// Coordinates; panics on terms outside this degree.
    pub fn to_vec(&self, c: &Cochain) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.keys.len()];
        for (k, v) in c.iter() {
            let i = self
                .index_of(k)
                .expect("cochain term outside the basis degree");
            out[i] = v.clone();
        }
        out
    }

    pub fn from_vec(&self, x: &[Scalar]) -> Cochain {
        self.keys
            .iter()
            .zip(x)
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (*k, v.clone()))
            .collect()
    }
}

/// Total degrees in which `Omega_g(V)` is nonzero.
pub fn total_degree_range(v: &DgGModule) -> std::ops::RangeInclusive<i32> {
    v.bot()..=v.top() + v.lie().dim() as i32
}

/// Matrix of an operator from degree `n` to degree `n + shift`.
pub fn operator_matrix(
    v: &DgGModule,
    n: i32,
    shift: i32,
    op: &dyn Fn(&Cochain) -> Cochain,
) -> Matrix {
    let src = CochainBasis::new(v, n);
    let dst = CochainBasis::new(v, n + shift);
    let cols: Vec<Vec<Scalar>> = (0..src.len())
        .map(|i| dst.to_vec(&op(&src.element(i))))
        .collect();
    Matrix::from_columns(dst.len(), &cols)
}

/// `d_tot : C^n -> C^{n+1}` in the bases of [`CochainBasis`].
pub fn d_tot_matrix(v: &DgGModule, n: i32) -> Matrix {
    operator_matrix(v, n, 1, &|c| d_tot(v, c))
}
