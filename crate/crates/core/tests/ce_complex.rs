use std::collections::BTreeMap;

use dglp::cochain::{d_ce, d_internal, d_tot, total_degree_range, Cochain, CochainBasis, Key};
use dglp::exterior::{binomial, wedge_basis, Wedge};
use dglp::lie::LieAlgebra;
use dglp::linalg::{int, Scalar};
use dglp::module::DgGModule;
use dglp::random::{random_lie_algebra, random_module, rng};
use num_traits::Zero;
use proptest::prelude::*;

/// Value of `c` on the ordered tuple `args`, as a map `(q, j) -> coefficient`.
fn eval(c: &Cochain, args: &[usize]) -> BTreeMap<(i32, usize), Scalar> {
    let mut out = BTreeMap::new();
    let mut sorted = args.to_vec();
    let mut sgn = 1i64;
    for i in 0..sorted.len() {
        for j in 0..sorted.len() - 1 - i {
            if sorted[j] > sorted[j + 1] {
                sorted.swap(j, j + 1);
                sgn = -sgn;
            }
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return out;
    }
    let w = Wedge::from_indices(&sorted).unwrap();
    for (k, x) in c.iter() {
        if k.wedge == w {
            *out.entry((k.q, k.j)).or_insert_with(Scalar::zero) += x * int(sgn);
        }
    }
    out
}

fn add_into(
    acc: &mut BTreeMap<(i32, usize), Scalar>,
    m: BTreeMap<(i32, usize), Scalar>,
    s: &Scalar,
) {
    for (k, x) in m {
        *acc.entry(k).or_insert_with(Scalar::zero) += x * s;
    }
}

/// `(d w)(x_0..x_p) = sum (-1)^i x_i . w(..^i..) + sum_{i<j} (-1)^{i+j} w([x_i, x_j], ..^i..^j..)`.
fn d_ce_oracle(v: &DgGModule, c: &Cochain, args: &[usize]) -> BTreeMap<(i32, usize), Scalar> {
    let lie = v.lie();
    let p = args.len();
    let mut acc = BTreeMap::new();
    for i in 0..p {
        let rest: Vec<usize> = args
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != i)
            .map(|(_, &a)| a)
            .collect();
        let val = eval(c, &rest);
        let s = if i % 2 == 0 { int(1) } else { int(-1) };
        for ((q, j), x) in val {
            let rho = v.rho(q, args[i]);
            for r in 0..rho.rows() {
                let y = &rho[(r, j)];
                if !y.is_zero() {
                    *acc.entry((q, r)).or_insert_with(Scalar::zero) += &x * y * &s;
                }
            }
        }
    }
    for i in 0..p {
        for j in i + 1..p {
            let rest: Vec<usize> = args
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != i && t != j)
                .map(|(_, &a)| a)
                .collect();
            let s = if (i + j) % 2 == 0 { int(1) } else { int(-1) };
            for k in 0..lie.dim() {
                let ck = lie.c(args[i], args[j], k);
                if ck.is_zero() {
                    continue;
                }
                let mut t = vec![k];
                t.extend(&rest);
                add_into(&mut acc, eval(c, &t), &(ck * &s));
            }
        }
    }
    acc.retain(|_, x| !x.is_zero());
    acc
}

fn all_basis(v: &DgGModule) -> Vec<Cochain> {
    total_degree_range(v)
        .flat_map(|n| {
            let b = CochainBasis::new(v, n);
            (0..b.len()).map(move |i| b.element(i)).collect::<Vec<_>>()
        })
        .collect()
}

fn fixture(seed: u64) -> DgGModule {
    let mut r = rng(seed);
    let lie = random_lie_algebra(&mut r, 3);
    random_module(&mut r, &lie)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_ce_matches_evaluation_formula(seed in 0u64..10_000) {
        let v = fixture(seed);
        let n = v.lie().dim();
        for c in all_basis(&v) {
            let dc = d_ce(&v, &c);
            let p = c.iter().next().unwrap().0.wedge.degree() + 1;
            for w in wedge_basis(n, p) {
                let args = w.indices();
                let mut got = eval(&dc, &args);
                got.retain(|_, x| !x.is_zero());
                prop_assert_eq!(got, d_ce_oracle(&v, &c, &args));
            }
        }
    }

    #[test]
    fn square_zero_and_anticommutation(seed in 0u64..10_000) {
        let v = fixture(seed);
        for c in all_basis(&v) {
            prop_assert!(d_ce(&v, &d_ce(&v, &c)).is_zero());
            prop_assert!(d_internal(&v, &d_internal(&v, &c)).is_zero());
            let ac = d_ce(&v, &d_internal(&v, &c)).add(&d_internal(&v, &d_ce(&v, &c)));
            prop_assert!(ac.is_zero());
            prop_assert!(d_tot(&v, &d_tot(&v, &c)).is_zero());
        }
    }
}

#[test]
fn d_on_sl2_forms() {
    let lie = LieAlgebra::sl2();
    let v = DgGModule::trivial(&lie, 1, 0);
    // d e^v = -2 h^v ^ e^v, d f^v = 2 h^v ^ f^v, d h^v = -e^v ^ f^v
    let d = |i: usize| d_ce(&v, &Cochain::monomial(Wedge::single(i), 0, 0, int(1)));
    let m = |a: usize, b: usize, x: i64| {
        Cochain::monomial(Wedge::from_indices(&[a, b]).unwrap(), 0, 0, int(x))
    };
    assert_eq!(d(0), m(1, 2, -1));
    assert_eq!(d(1), m(0, 1, -2));
    assert_eq!(d(2), m(0, 2, 2));
}

#[test]
fn basis_sizes() {
    let lie = LieAlgebra::heisenberg();
    let v = DgGModule::trivial(&lie, 2, 1);
    for n in total_degree_range(&v) {
        let p = (n - 1) as usize;
        assert_eq!(CochainBasis::new(&v, n).len(), 2 * binomial(3, p));
    }
    let b = CochainBasis::new(&v, 2);
    for (i, k) in b.keys().iter().enumerate() {
        assert_eq!(b.index_of(k), Some(i));
        assert_eq!(
            b.to_vec(&b.element(i))
                .iter()
                .filter(|x| !x.is_zero())
                .count(),
            1
        );
    }
    assert_eq!(b.index_of(&Key::new(Wedge::EMPTY, 5, 0)), None);
}
