use dglp::cochain::{contract, wedge, Cochain, Key};
use dglp::exterior::{wedge_basis, Wedge};
use dglp::lie::{adjoint_action, check_action, dual_action, LieAlgebra, LieError};
use dglp::linalg::{image, int, kernel, rref, solve, Matrix, Scalar};
use dglp::random::{random_invertible, random_lie_algebra, rng};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix_strategy(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |xs| {
            let mut m = Matrix::zeros(r, c);
            for (i, x) in xs.into_iter().enumerate() {
                m[(i / c, i % c)] = int(x);
            }
            m
        })
    })
}

fn form_strategy(n: usize) -> impl Strategy<Value = Cochain> {
    prop::collection::vec((0u32..(1 << n), -2i64..=2), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(w, x)| (Key::new(Wedge(w), 0, 0), int(x)))
            .collect()
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix_strategy(5)) {
        let k = kernel(&m);
        prop_assert_eq!(k.dim() + m.rank(), m.cols());
        for v in k.basis() {
            prop_assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(image(&m).dim(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_recovers_consistent_systems(m in matrix_strategy(5), seed in 0u64..1000) {
        let x: Vec<Scalar> = (0..m.cols()).map(|i| int(((seed as usize + 3 * i) % 5) as i64 - 2)).collect();
        let b = m.apply(&x);
        let y = solve(&m, &b).expect("consistent");
        prop_assert_eq!(m.apply(&y), b);
    }

    #[test]
    fn rref_is_reduced(m in matrix_strategy(5)) {
        let (r, piv) = rref(&m);
        prop_assert_eq!(piv.len(), m.rank());
        for (row, &p) in piv.iter().enumerate() {
            prop_assert_eq!(&r[(row, p)], &int(1));
            for other in 0..r.rows() {
                if other != row {
                    prop_assert!(r[(other, p)].is_zero());
                }
            }
        }
    }

    #[test]
    fn random_invertible_inverts(seed in 0u64..1000, n in 1usize..6) {
        let p = random_invertible(&mut rng(seed), n);
        let inv = p.inverse().unwrap();
        prop_assert_eq!(p.mul(&inv), Matrix::identity(n));
    }

    #[test]
    fn wedge_is_associative(a in form_strategy(5), b in form_strategy(5), c in form_strategy(5)) {
        prop_assert_eq!(wedge(&wedge(&a, &b), &c), wedge(&a, &wedge(&b, &c)));
    }

    #[test]
    fn wedge_is_graded_commutative(i in 0u32..32, j in 0u32..32) {
        let (a, b) = (Wedge(i), Wedge(j));
        match (a.mul(b), b.mul(a)) {
            (Some((s, w)), Some((t, w2))) => {
                prop_assert_eq!(w, w2);
                let e = (a.degree() * b.degree()) as i64;
                prop_assert_eq!(s, t * if e % 2 == 0 { 1 } else { -1 });
            }
            (None, None) => {}
            _ => prop_assert!(false),
        }
    }

    #[test]
    fn contractions_anticommute(c in form_strategy(5), x in prop::collection::vec(-2i64..=2, 5), y in prop::collection::vec(-2i64..=2, 5)) {
        let x: Vec<Scalar> = x.into_iter().map(int).collect();
        let y: Vec<Scalar> = y.into_iter().map(int).collect();
        prop_assert!(contract(&x, &contract(&x, &c)).is_zero());
        let xy = contract(&x, &contract(&y, &c));
        let yx = contract(&y, &contract(&x, &c));
        prop_assert!(xy.add(&yx).is_zero());
    }

    #[test]
    fn contraction_is_a_derivation(a in form_strategy(4), b in form_strategy(4), i in 0usize..4) {
        // iota(a ^ b) = iota(a) ^ b + (-1)^{|a|} a ^ iota(b), on homogeneous a
        let mut x = vec![int(0); 4];
        x[i] = int(1);
        for p in 0..=4 {
            let ap: Cochain = a.iter().filter(|(k, _)| k.wedge.degree() == p).map(|(k, v)| (*k, v.clone())).collect();
            let lhs = contract(&x, &wedge(&ap, &b));
            let s = if p % 2 == 0 { int(1) } else { int(-1) };
            let rhs = wedge(&contract(&x, &ap), &b).add(&wedge(&ap, &contract(&x, &b)).scale(&s));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn random_algebras_have_valid_representations(seed in 0u64..5000) {
        let l = random_lie_algebra(&mut rng(seed), 3);
        prop_assert!(check_action(&l, &adjoint_action(&l)).is_ok());
        prop_assert!(check_action(&l, &dual_action(&adjoint_action(&l))).is_ok());
    }
}

#[test]
fn wedge_basis_is_lexicographic() {
    let b = wedge_basis(4, 2);
    let idx: Vec<Vec<usize>> = b.iter().map(|w| w.indices()).collect();
    assert_eq!(
        idx,
        vec![
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3]
        ]
    );
}

#[test]
fn broken_jacobi_is_named() {
    // [x,y] = z, [y,z] = x, [z,x] = z breaks Jacobi
    let r = LieAlgebra::from_brackets(
        &["x", "y", "z"],
        &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 2, int(1))],
    );
    assert!(matches!(r, Err(LieError::JacobiViolation { .. })));
    let sl2 = LieAlgebra::sl2();
    assert_eq!(sl2.bracket_basis(1, 2), vec![int(1), int(0), int(0)]);
}
