//! Kapranov Leibniz-infinity[1] brackets on `Omega_g(V[1])` and the
//! generalized Jacobi identities.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cochain::{act_by, contract_by, d_tot, wedge_monomial, Cochain, Key};
use crate::exterior::{binomial, wedge_basis, Wedge};
use crate::linalg::{int, sign, Scalar};
use crate::lp::LPModule;
use crate::module::DgGModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleSet {
    pub p: usize,
    pub q: usize,
    /// `perm[a]` is the original position placed at slot `a`, with the sign
    /// of the permutation.
    pub permutations: Vec<(Vec<usize>, i64)>,
}

/// All `(p, q)`-shuffles in lexicographic order of the first block.
pub fn shuffles(p: usize, q: usize) -> ShuffleSet {
    let n = p + q;
    let mut permutations = Vec::with_capacity(binomial(n, p));
    let mut chosen: Vec<usize> = (0..p).collect();
    loop {
        let mut perm = chosen.clone();
        perm.extend((0..n).filter(|i| !chosen.contains(i)));
        let inversions = count_inversions(&perm);
        permutations.push((perm, if inversions % 2 == 0 { 1 } else { -1 }));
        // next combination
        let mut i = p;
        loop {
            if i == 0 {
                return ShuffleSet { p, q, permutations };
            }
            i -= 1;
            if chosen[i] < n - p + i {
                chosen[i] += 1;
                for k in i + 1..p {
                    chosen[k] = chosen[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn count_inversions(perm: &[usize]) -> usize {
    let mut c = 0;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                c += 1;
            }
        }
    }
    c
}

/// Product of `(-1)^{d_i d_j}` over the inversions of `perm`.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Scalar {
    assert_eq!(perm.len(), degrees.len());
    let mut odd = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && degrees[perm[a]] % 2 != 0 && degrees[perm[b]] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    if odd {
        int(-1)
    } else {
        int(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    pub arity: usize,
    /// Nonzero entries keyed by generator indices of `V[1]`.
    pub entries: BTreeMap<Vec<usize>, Cochain>,
}

impl BracketTable {
    pub fn entry(&self, tuple: &[usize]) -> Cochain {
        self.entries.get(tuple).cloned().unwrap_or_default()
    }

    /// Multilinear extension over `Omega_g` of the table.
    pub fn evaluate(&self, m: &DgGModule, args: &[Cochain]) -> Cochain {
        assert_eq!(args.len(), self.arity);
        extend_multilinear(m, args, &mut |t| self.entry(t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KapranovError {
    #[error("alpha given for {got} generators, module has {expected}")]
    Shape { expected: usize, got: usize },
    #[error("alpha image of generator {0} is not a g-valued form")]
    NotGValued(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub tuple: Vec<usize>,
    pub closed_form: Cochain,
    pub recursion: Cochain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub n: usize,
    /// Index of the failing tuple among the checked ones.
    pub tuple_index: usize,
    pub residual: Cochain,
}

/// Brackets on `Omega_g(M)` for a complex `M` (in practice `V[1]`, possibly
/// summed with a coefficient module) and `alpha` on the generators of `M`.
#[derive(Debug)]
pub struct Kapranov {
    m: DgGModule,
    gens: Vec<(i32, usize)>,
    index: HashMap<(i32, usize), usize>,
    alpha: Vec<Cochain>,
    cache: RefCell<HashMap<Vec<usize>, Cochain>>,
}

impl Kapranov {
    pub fn new(m: &DgGModule, alpha: Vec<Cochain>) -> Result<Self, KapranovError> {
        let gens = m.generators();
        if gens.len() != alpha.len() {
            return Err(KapranovError::Shape {
                expected: gens.len(),
                got: alpha.len(),
            });
        }
        let n = m.lie().dim();
        for (i, a) in alpha.iter().enumerate() {
            if a.iter().any(|(k, _)| k.q != 0 || k.j >= n) {
                return Err(KapranovError::NotGValued(i));
            }
        }
        let index = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        Ok(Kapranov {
            m: m.clone(),
            gens,
            index,
            alpha,
            cache: RefCell::new(HashMap::new()),
        })
    }

    /// Brackets on `Omega_g(V[1])`.
    pub fn from_lp(lp: &LPModule) -> Self {
        let v = lp.module();
        let alpha = v
            .generators()
            .iter()
            .map(|&(q, j)| lp.alpha_form(q, j))
            .collect();
        Self::new(&v.shift(1), alpha).expect("alpha of an LP module is g-valued")
    }

    /// Brackets on `Omega_g(V[1] (+) W)` with `alpha` extended by zero on `W`;
    /// restricted to tuples ending in `W` these are the actions `S_k`.
    pub fn with_module(lp: &LPModule, w: &DgGModule) -> Self {
        let v1 = lp.module().shift(1);
        let z = v1.direct_sum(w);
        let alpha = z
            .generators()
            .iter()
            .map(|&(q, j)| {
                if j < v1.dim(q) {
                    lp.alpha_form(q + 1, j)
                } else {
                    Cochain::zero()
                }
            })
            .collect();
        Self::new(&z, alpha).expect("alpha of an LP module is g-valued")
    }

    pub fn module(&self) -> &DgGModule {
        &self.m
    }

    pub fn generators(&self) -> &[(i32, usize)] {
        &self.gens
    }

    pub fn generator_index(&self, q: i32, j: usize) -> Option<usize> {
        self.index.get(&(q, j)).copied()
    }

    pub fn generator(&self, i: usize) -> Cochain {
        let (q, j) = self.gens[i];
        Cochain::generator(q, j)
    }

    pub fn alpha(&self, i: usize) -> &Cochain {
        &self.alpha[i]
    }

    /// Degree of the generator in `M`.
    pub fn degree(&self, i: usize) -> i32 {
        self.gens[i].0
    }

    /// Closed form on a generator tuple of length `n + 1 >= 2`:
    /// `(-1)^{s_0 + ... + s_{n-1}} (iota_{alpha(v_0)} ... iota_{alpha(v_{n-2})} alpha(v_{n-1})) . v_n`.
    pub fn closed_form(&self, tuple: &[usize]) -> Cochain {
        assert!(tuple.len() >= 2);
        if let Some(c) = self.cache.borrow().get(tuple) {
            return c.clone();
        }
        let n = tuple.len() - 1;
        let last = self.generator(tuple[n]);
        let mut res = act_by(&self.m, &self.alpha[tuple[n - 1]], &last);
        for &i in tuple[..n - 1].iter().rev() {
            if res.is_zero() {
                break;
            }
            res = contract_by(&self.alpha[i], &res);
        }
        let s: i32 = tuple[..n].iter().map(|&i| self.degree(i)).sum();
        let res = res.scale(&sign(s as i64));
        self.cache.borrow_mut().insert(tuple.to_vec(), res.clone());
        res
    }

    /// `R_{k+1}(b_0, ...) = (-1)^{|b_0|} iota_{alpha(b_0)} R_k(b_1, ...)`,
    /// starting from `R_1 = d_tot`.
    pub fn recursive(&self, tuple: &[usize]) -> Cochain {
        assert!(!tuple.is_empty());
        let mut res = d_tot(&self.m, &self.generator(*tuple.last().unwrap()));
        for &i in tuple[..tuple.len() - 1].iter().rev() {
            res = contract_by(&self.alpha[i], &res).scale(&sign(self.degree(i) as i64));
        }
        res
    }

    pub fn table(&self, arity: usize) -> BracketTable {
        assert!(arity >= 2);
        let mut entries = BTreeMap::new();
        for t in tuples(self.gens.len(), arity) {
            let c = self.closed_form(&t);
            if !c.is_zero() {
                entries.insert(t, c);
            }
        }
        BracketTable { arity, entries }
    }

    /// `R_1 = d_tot` on each generator.
    pub fn differential_images(&self) -> Vec<Cochain> {
        (0..self.gens.len())
            .map(|i| d_tot(&self.m, &self.generator(i)))
            .collect()
    }

    pub fn recursion_check(&self, max_arity: usize) -> Result<(), Mismatch> {
        for k in 2..=max_arity {
            for t in tuples(self.gens.len(), k) {
                let a = self.closed_form(&t);
                let b = self.recursive(&t);
                if a != b {
                    return Err(Mismatch {
                        tuple: t,
                        closed_form: a,
                        recursion: b,
                    });
                }
            }
        }
        Ok(())
    }

    /// `lambda_k` on arbitrary cochains.
    pub fn bracket(&self, args: &[Cochain]) -> Cochain {
        match args.len() {
            0 => panic!("brackets have arity at least 1"),
            1 => d_tot(&self.m, &args[0]),
            _ => extend_multilinear(&self.m, args, &mut |t| {
                let idx: Vec<usize> = t.to_vec();
                self.closed_form(&idx)
            }),
        }
    }

    /// Left-hand side of the generalized Jacobi identity of arity `n`.
    pub fn jacobi(&self, args: &[Cochain]) -> Cochain {
        let n = args.len();
        let degs: Vec<i32> = args.iter().map(|a| a.degree().unwrap_or(0)).collect();
        let mut total = Cochain::zero();
        for j in 1..=n {
            for k in j..=n {
                for (sigma, _) in shuffles(k - j, j - 1).permutations {
                    let eps = koszul_sign(&sigma, &degs[..k - 1]);
                    let pre_deg: i32 = sigma[..k - j].iter().map(|&s| degs[s]).sum();
                    let mut mid: Vec<Cochain> =
                        sigma[k - j..].iter().map(|&s| args[s].clone()).collect();
                    mid.push(args[k - 1].clone());
                    let inner = self.bracket(&mid);
                    if inner.is_zero() {
                        continue;
                    }
                    let mut outer: Vec<Cochain> =
                        sigma[..k - j].iter().map(|&s| args[s].clone()).collect();
                    outer.push(inner);
                    outer.extend(args[k..].iter().cloned());
                    let val = self.bracket(&outer);
                    total.add_assign_scaled(&val, &(eps * sign(pre_deg as i64)));
                }
            }
        }
        total
    }

    /// Generalized Jacobi for every arity `1..=n_max` on all generator tuples.
    pub fn check_generators(&self, n_max: usize) -> Result<(), Counterexample> {
        for n in 1..=n_max {
            for (ti, t) in tuples(self.gens.len(), n).into_iter().enumerate() {
                let args: Vec<Cochain> = t.iter().map(|&i| self.generator(i)).collect();
                let r = self.jacobi(&args);
                if !r.is_zero() {
                    return Err(Counterexample {
                        n,
                        tuple_index: ti,
                        residual: r,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn check_tuples(&self, tuples: &[Vec<Cochain>]) -> Result<(), Counterexample> {
        for (ti, t) in tuples.iter().enumerate() {
            let r = self.jacobi(t);
            if !r.is_zero() {
                return Err(Counterexample {
                    n: t.len(),
                    tuple_index: ti,
                    residual: r,
                });
            }
        }
        Ok(())
    }

    /// Seeded random homogeneous cochains with small integer coefficients,
    /// at least one of which carries a nonempty form.
    pub fn random_tuples(&self, seed: u64, count: usize, n_max: usize) -> Vec<Vec<Cochain>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keys = all_keys(&self.m);
        let mut by_degree: BTreeMap<i32, Vec<Key>> = BTreeMap::new();
        for k in keys {
            by_degree.entry(k.degree()).or_default().push(k);
        }
        let degrees: Vec<i32> = by_degree
            .iter()
            .filter(|(_, ks)| ks.iter().any(|k| k.wedge != Wedge::EMPTY))
            .map(|(d, _)| *d)
            .collect();
        let all: Vec<i32> = by_degree.keys().copied().collect();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let n = rng.gen_range(1..=n_max);
            let mut t = Vec::with_capacity(n);
            for s in 0..n {
                let d = if s == 0 && !degrees.is_empty() {
                    degrees[rng.gen_range(0..degrees.len())]
                } else {
                    all[rng.gen_range(0..all.len())]
                };
                t.push(random_cochain(&mut rng, &by_degree[&d], s == 0));
            }
            out.push(t);
        }
        out
    }
}

fn random_cochain(rng: &mut ChaCha8Rng, keys: &[Key], need_form: bool) -> Cochain {
    loop {
        let mut c = Cochain::zero();
        for k in keys {
            if rng.gen_bool(0.6) {
                c.add_term(*k, int(rng.gen_range(-3..=3)));
            }
        }
        let has_form = c.iter().any(|(k, _)| k.wedge != Wedge::EMPTY);
        if !c.is_zero() && (has_form || !need_form) {
            return c;
        }
    }
}

fn all_keys(m: &DgGModule) -> Vec<Key> {
    let n = m.lie().dim();
    let mut out = Vec::new();
    for p in 0..=n {
        for w in wedge_basis(n, p) {
            for q in m.degrees() {
                for j in 0..m.dim(q) {
                    out.push(Key::new(w, q, j));
                }
            }
        }
    }
    out
}

/// All tuples of length `k` over `0..n`, lexicographically.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Omega_g-multilinear extension of a degree +1 bracket given on generator
/// tuples. The form of slot `i` moves to the front past the bracket and the
/// generator parts of the earlier slots, costing
/// `(-1)^{|a_i| (1 + sum_{l<i} |g_l|)}`; forms are wedged left to right.
pub fn extend_multilinear(
    m: &DgGModule,
    args: &[Cochain],
    entry: &mut dyn FnMut(&[usize]) -> Cochain,
) -> Cochain {
    let gens = m.generators();
    let index: HashMap<(i32, usize), usize> =
        gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let terms: Vec<Vec<(Key, Scalar)>> = args
        .iter()
        .map(|a| a.iter().map(|(k, v)| (*k, v.clone())).collect())
        .collect();
    let mut out = Cochain::zero();
    if terms.iter().any(|t| t.is_empty()) {
        return out;
    }
    let mut choice = vec![0usize; args.len()];
    'outer: loop {
        let mut odd = false;
        let mut forms = Wedge::EMPTY;
        let mut run = 1i32;
        let mut coef = Scalar::one();
        let mut tuple = Vec::with_capacity(args.len());
        let mut ok = true;
        for (s, &c) in choice.iter().enumerate() {
            let (k, v) = &terms[s][c];
            let p = k.wedge.degree() as i32;
            if (p * run) % 2 != 0 {
                odd = !odd;
            }
            match forms.mul(k.wedge) {
                Some((sg, w)) => {
                    if sg < 0 {
                        odd = !odd;
                    }
                    forms = w;
                }
                None => {
                    ok = false;
                    break;
                }
            }
            coef *= v;
            run += k.q;
            tuple.push(index[&(k.q, k.j)]);
        }
        if ok {
            let e = entry(&tuple);
            if !e.is_zero() {
                if odd {
                    coef = -coef;
                }
                out.add_assign_scaled(&wedge_monomial(forms, &e), &coef);
            }
        }
        // advance odometer
        let mut s = args.len();
        loop {
            if s == 0 {
                break 'outer;
            }
            s -= 1;
            choice[s] += 1;
            if choice[s] < terms[s].len() {
                break;
            }
            choice[s] = 0;
        }
    }
    out
}

/// Brackets `R_2..=R_{max_arity}` as tables.
pub fn kapranov_brackets(lp: &LPModule, max_arity: usize) -> Vec<BracketTable> {
    let k = Kapranov::from_lp(lp);
    (2..=max_arity).map(|a| k.table(a)).collect()
}

pub fn default_max_arity(lp: &LPModule) -> usize {
    (lp.u() + 2).min(6)
}

/// Actions `S_k(v_1[1], ..., v_{k-1}[1], w)` for `k = 2..=max_arity`, keyed by
/// generator indices of `V[1]` followed by a generator index of `W`.
pub fn module_actions(lp: &LPModule, w: &DgGModule, max_arity: usize) -> Vec<BracketTable> {
    let k = Kapranov::with_module(lp, w);
    let v1 = lp.module().shift(1);
    let z = k.module();
    let nv = v1.total_dim();
    // positions of V[1] and W generators inside the sum
    let mut v_pos = Vec::new();
    let mut w_pos = Vec::new();
    for (i, &(q, j)) in z.generators().iter().enumerate() {
        if j < v1.dim(q) {
            v_pos.push(i);
        } else {
            w_pos.push(i);
        }
    }
    debug_assert_eq!(v_pos.len(), nv);
    let mut out = Vec::new();
    for arity in 2..=max_arity {
        let mut entries = BTreeMap::new();
        for t in tuples(nv, arity - 1) {
            for (wi, &wp) in w_pos.iter().enumerate() {
                let mut zt: Vec<usize> = t.iter().map(|&i| v_pos[i]).collect();
                zt.push(wp);
                let c = k.closed_form(&zt);
                if !c.is_zero() {
                    let mut key = t.clone();
                    key.push(wi);
                    entries.insert(key, restrict_to_w(&c, &v1));
                }
            }
        }
        out.push(BracketTable { arity, entries });
    }
    out
}

/// Re-index a cochain of `V[1] (+) W` supported on `W` into `W` coordinates.
fn restrict_to_w(c: &Cochain, v1: &DgGModule) -> Cochain {
    c.iter()
        .map(|(k, x)| {
            let off = v1.dim(k.q);
            debug_assert!(k.j >= off);
            (Key::new(k.wedge, k.q, k.j - off), x.clone())
        })
        .collect()
}

/// Whether every generating `R_a` vanishes for `from <= a <= max_arity`.
pub fn vanishes_from(k: &Kapranov, from: usize, max_arity: usize) -> bool {
    (from..=max_arity).all(|a| {
        tuples(k.generators().len(), a)
            .iter()
            .all(|t| k.closed_form(t).is_zero())
    })
}

/// Every nonzero entry has total degree `sum |v_i| + 1`.
pub fn degree_audit(k: &Kapranov, table: &BracketTable) -> bool {
    table.entries.iter().all(|(t, c)| {
        let d: i32 = t.iter().map(|&i| k.degree(i)).sum::<i32>() + 1;
        c.degree() == Some(d)
    })
}
