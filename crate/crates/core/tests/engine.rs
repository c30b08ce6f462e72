mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use spinrecouple::engine::{
    decompose_bubblesort, dense_oracle_amplitude, evaluate_amplitude, evaluate_amplitude_with, evaluate_with_plan,
    permuted_shape, plan_between, plan_moves, EvalOptions, Permutation,
};
use spinrecouple::numerics::{SurdSum, TwiceSpin};
use spinrecouple::tree::{enumerate_labelings, enumerate_shapes, LabeledTree, TreeShape};

fn worked_example() -> (LabeledTree, Permutation, LabeledTree) {
    let shape = TreeShape::right_comb(&[1, 2, 3]);
    // node 0 is the root (J = 1/2), node 1 couples particles 2 and 3
    let lambda = LabeledTree::new(shape.clone(), vec![ts(1), ts(0)]).unwrap();
    let lambda_prime = LabeledTree::new(shape, vec![ts(1), ts(2)]).unwrap();
    (lambda, Permutation::transposition(3, 1, 2), lambda_prime)
}

#[test]
fn worked_example_is_exact() {
    let (l, p, lp) = worked_example();
    let v = evaluate_amplitude(&l, &p, &lp).unwrap();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    assert_eq!(v, SurdSum::sqrt_u64(3).scale(&half));
    let dense = dense_oracle_amplitude(&l, &p, &lp).unwrap();
    assert!((dense - 0.8660254037844386).abs() < 1e-12);
    assert!((v.to_f64() - dense).abs() < 1e-12);
}

#[test]
fn random_instances_match_dense_oracle() {
    let mut r = rng(5);
    let mut checked = 0;
    while checked < 120 {
        let n = 2 + (checked % 5);
        let root = (n % 2) as u32 + 2 * (checked as u32 % 2);
        let (Some(l), Some(lp)) = (random_tree(&mut r, n, root), random_tree(&mut r, n, root)) else { continue };
        let p = Permutation::new(random_perm(&mut r, n)).unwrap();
        let exact = evaluate_amplitude(&l, &p, &lp).unwrap();
        let dense = dense_oracle_amplitude(&l, &p, &lp).unwrap();
        assert!((exact.to_f64() - dense).abs() <= 1e-10, "{l:?} {p} {lp:?}: {exact} vs {dense}");
        checked += 1;
    }
}

#[test]
fn exhaustive_three_leaves() {
    let leaves = [1, 2, 3];
    let shapes = enumerate_shapes(&leaves);
    let perms: Vec<Permutation> = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]]
        .iter()
        .map(|v| Permutation::new(v.to_vec()).unwrap())
        .collect();
    for j in [1u32, 3] {
        for s in &shapes {
            for t in &shapes {
                for l in enumerate_labelings(s, &[TwiceSpin::HALF; 3], TwiceSpin(j)) {
                    for lp in enumerate_labelings(t, &[TwiceSpin::HALF; 3], TwiceSpin(j)) {
                        for p in &perms {
                            let exact = evaluate_amplitude(&l, p, &lp).unwrap().to_f64();
                            let dense = dense_oracle_amplitude(&l, p, &lp).unwrap();
                            assert!((exact - dense).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn decomposition_multiplies_back() {
    let mut r = rng(8);
    for n in 1..8 {
        for _ in 0..20 {
            let p = Permutation::new(random_perm(&mut r, n)).unwrap();
            let word = decompose_bubblesort(&p);
            assert_eq!(word.len(), p.inversions());
            let prod = word.iter().fold(Permutation::identity(n), |acc, &i| &acc * &Permutation::adjacent(n, i));
            assert_eq!(prod, p);
        }
    }
}

#[test]
fn plans_reach_their_target() {
    let mut r = rng(21);
    for n in 1..9 {
        for _ in 0..10 {
            let a = random_any_shape(&mut r, n);
            let b = random_any_shape(&mut r, n);
            assert_eq!(plan_between(&a, &b).unwrap().end_shape().unwrap(), b);
        }
    }
}

#[test]
fn alternative_plan_agrees() {
    let mut r = rng(3);
    for _ in 0..40 {
        let n = 4 + r_usize(&mut r, 2);
        let root = (n % 2) as u32;
        let (Some(l), Some(lp)) = (random_tree(&mut r, n, root), random_tree(&mut r, n, root)) else { continue };
        let p = Permutation::new(random_perm(&mut r, n)).unwrap();
        let direct = plan_moves(&l.shape, &p, &lp.shape).unwrap();
        let via = random_any_shape(&mut r, n);
        let detour = plan_between(&permuted_shape(&l.shape, &p), &via)
            .unwrap()
            .then(plan_between(&via, &lp.shape).unwrap())
            .unwrap();
        let a = evaluate_with_plan(&l, &p, &lp, &direct, EvalOptions::default()).unwrap();
        let b = evaluate_with_plan(&l, &p, &lp, &detour, EvalOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}

fn r_usize(r: &mut rand_chacha::ChaCha8Rng, k: usize) -> usize {
    use rand::RngExt;
    r.random_range(0..k)
}

#[test]
fn matrices_are_orthogonal_representations() {
    let mut r = rng(13);
    for (n, root) in [(4usize, 0u32), (4, 2), (5, 1), (5, 3)] {
        let basis = comb_basis(n, root);
        for _ in 0..4 {
            let p = Permutation::new(random_perm(&mut r, n)).unwrap();
            let q = Permutation::new(random_perm(&mut r, n)).unwrap();
            let mp = engine_matrix(&basis, &p, &basis);
            let mq = engine_matrix(&basis, &q, &basis);
            assert_eq!(mat_mul(&transpose(&mp), &mp), identity_matrix(basis.len()));
            assert_eq!(engine_matrix(&basis, &(&p * &q), &basis), mat_mul(&mp, &mq));
        }
    }
}

#[test]
fn parallel_evaluation_is_identical() {
    let mut r = rng(17);
    for _ in 0..10 {
        let n = 7;
        let (Some(l), Some(lp)) = (random_tree(&mut r, n, 1), random_tree(&mut r, n, 1)) else { continue };
        let p = Permutation::new(random_perm(&mut r, n)).unwrap();
        let serial = evaluate_amplitude(&l, &p, &lp).unwrap();
        let parallel = evaluate_amplitude_with(&l, &p, &lp, EvalOptions { parallel: true }).unwrap();
        assert_eq!(serial, parallel);
    }
}

#[test]
fn selection_rules() {
    let (l, p, _) = worked_example();
    let other_root = LabeledTree::new(TreeShape::right_comb(&[1, 2, 3]), vec![ts(3), ts(2)]).unwrap();
    assert!(evaluate_amplitude(&l, &p, &other_root).unwrap().is_zero());
    let bigger = LabeledTree::new(TreeShape::caterpillar(&[1, 2, 3, 4]), vec![ts(0), ts(1), ts(0)]).unwrap();
    assert!(evaluate_amplitude(&l, &p, &bigger).is_err());
}

#[test]
fn general_leaf_spins() {
    // three spin-1 particles: U_p is still orthogonal within each total-spin block
    let shape = TreeShape::caterpillar(&[1, 2, 3]);
    let spins = [TwiceSpin(2); 3];
    for j in 0..=6 {
        let basis = enumerate_labelings(&shape, &spins, TwiceSpin(j));
        if basis.is_empty() {
            continue;
        }
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        let m = engine_matrix(&basis, &p, &basis);
        assert_eq!(mat_mul(&transpose(&m), &m), identity_matrix(basis.len()));
        let cube = mat_mul(&mat_mul(&m, &m), &m);
        assert_eq!(cube, identity_matrix(basis.len()));
    }
}
