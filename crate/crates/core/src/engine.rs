//! Exact evaluation of permutational amplitudes `⟨λ′|U_π|λ⟩`.
//!
//! A basis state `|λ⟩` is evolved as a sparse superposition over labelings of
//! a single tree shape. Permuting the particles only renames leaves; the
//! resulting tangled tree is brought back to the target shape with two kinds
//! of moves: rotations (weighted by recoupling tensors) and sibling swaps
//! (weighted by twist phases). The amplitude is then the coefficient of the
//! target labeling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Mul;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{SurdSum, TwiceSpin};
use crate::recoupling::{coupled_range, recoupling_tensor, triangle_admissible, twist_sign, SixSpins, SpinTriple};
use crate::tree::{
    child_label, invert_rotation_plan, rotation_plan_to_caterpillar, validate_labeling, Child, Direction,
    LabeledTree, Node, Rotation, TreeShape,
};

/// A permutation of `1..=n`, stored by images: `images[i − 1] = π(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x as usize > n || seen[x as usize - 1] {
                return Err(Error::Domain(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[x as usize - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n as u32).collect() }
    }

    /// Swap of `i` and `j` (1-based).
    pub fn transposition(n: usize, i: u32, j: u32) -> Self {
        let mut images: Vec<u32> = (1..=n as u32).collect();
        images.swap(i as usize - 1, j as usize - 1);
        Permutation { images }
    }

    /// The adjacent transposition `s_i = (i i+1)`.
    pub fn adjacent(n: usize, i: usize) -> Self {
        Permutation::transposition(n, i as u32, i as u32 + 1)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `π(i)` for 1-based `i`.
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize - 1] = i as u32 + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Product in which the left factor acts on indices first:
/// `(p·q)(i) = q(p(i))`. With this convention `U_{p·q} = U_p U_q`.
impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.n(), rhs.n(), "permutations of different degree");
        Permutation { images: self.images.iter().map(|&i| rhs.apply(i)).collect() }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Adjacent transpositions `s_{i₁}, …, s_{i_k}` (1-based `i`) with
/// `p = s_{i₁}·…·s_{i_k}`; these are exactly the swaps bubblesort performs on
/// the arrangement `p(1) … p(n)`. The length is the inversion number.
pub fn decompose_bubblesort(p: &Permutation) -> Vec<usize> {
    let mut arr = p.images.clone();
    let mut swaps = Vec::with_capacity(p.inversions());
    let n = arr.len();
    for pass in 0..n {
        let mut changed = false;
        for i in 0..n.saturating_sub(1 + pass) {
            if arr[i] > arr[i + 1] {
                arr.swap(i, i + 1);
                swaps.push(i + 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    swaps
}

/// One step of a compiled computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Rotate(Rotation),
    /// Exchange the two children of an internal node.
    SiblingSwap(usize),
}

impl Move {
    pub fn rotation(&self) -> Option<Rotation> {
        match *self {
            Move::Rotate(r) => Some(r),
            Move::SiblingSwap(_) => None,
        }
    }

    pub fn apply_to_shape(&self, shape: &TreeShape) -> Result<TreeShape> {
        match *self {
            Move::Rotate(r) => shape.rotate(r),
            Move::SiblingSwap(id) => shape.swap_children(id),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Move::Rotate(r) => json!({
                "rotate": {
                    "node": r.node,
                    "direction": match r.direction { Direction::Left => "left", Direction::Right => "right" },
                }
            }),
            Move::SiblingSwap(id) => json!({ "swap": id }),
        }
    }
}

/// A sequence of moves together with the shape it starts from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovePlan {
    pub start: TreeShape,
    pub moves: Vec<Move>,
}

impl MovePlan {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Shape reached after every move, or the first mismatch.
    pub fn end_shape(&self) -> Result<TreeShape> {
        self.moves.iter().try_fold(self.start.clone(), |s, m| m.apply_to_shape(&s))
    }

    /// Concatenates `next`, which must start where `self` ends.
    pub fn then(mut self, next: MovePlan) -> Result<MovePlan> {
        if self.end_shape()? != next.start {
            return Err(Error::PlanMismatch("plans do not chain".into()));
        }
        self.moves.extend(next.moves);
        Ok(self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": self.start.to_nested(),
            "moves": self.moves.iter().map(Move::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Renames the leaves of a shape by `f`.
fn relabel_leaves(shape: &TreeShape, f: impl Fn(u32) -> u32 + Copy) -> TreeShape {
    fn go(node: &Node, f: impl Fn(u32) -> u32 + Copy) -> Node {
        match node {
            Node::Leaf(i) => Node::Leaf(f(*i)),
            Node::Branch(l, r) => Node::join(go(l, f), go(r, f)),
        }
    }
    TreeShape::new(go(shape.root(), f)).expect("relabeling by a permutation keeps leaves distinct")
}

/// The tree `λ` with its leaves moved by `U_p`: particle `k` is renamed
/// `p⁻¹(k)`.
pub fn permuted_shape(shape: &TreeShape, p: &Permutation) -> TreeShape {
    let inv = p.inverse();
    relabel_leaves(shape, |k| inv.apply(k))
}

/// Moves taking `start` to `target`, which may differ in leaf order.
///
/// `start` is first rotated into a left comb, its leaves are sorted into
/// `target`'s order by adjacent exchanges (each a right rotation, a sibling
/// swap and a left rotation), and the comb is finally rotated into `target`.
pub fn plan_between(start: &TreeShape, target: &TreeShape) -> Result<MovePlan> {
    let n = start.n();
    if target.n() != n {
        return Err(Error::Domain(format!("shapes have {n} and {} leaves", target.n())));
    }
    let mut sorted_start = start.leaves();
    let mut sorted_target = target.leaves();
    sorted_start.sort_unstable();
    sorted_target.sort_unstable();
    if sorted_start != sorted_target {
        return Err(Error::Domain("shapes have different leaf sets".into()));
    }

    let mut moves: Vec<Move> = rotation_plan_to_caterpillar(start).into_iter().map(Move::Rotate).collect();

    let target_order = target.leaves();
    let mut position_in_target = vec![0u32; n + 1];
    for (pos, &leaf) in target_order.iter().enumerate() {
        position_in_target[leaf as usize] = pos as u32 + 1;
    }
    let arrangement: Vec<u32> = start.leaves().iter().map(|&l| position_in_target[l as usize]).collect();
    let arrangement = Permutation::new(arrangement).expect("leaf sets agree");
    for i in decompose_bubblesort(&arrangement) {
        let q = i - 1; // exchange leaf positions q and q + 1
        if q == 0 {
            moves.push(Move::SiblingSwap(0));
        } else {
            moves.push(Move::Rotate(Rotation { node: q, direction: Direction::Right }));
            moves.push(Move::SiblingSwap(q));
            moves.push(Move::Rotate(Rotation { node: q - 1, direction: Direction::Left }));
        }
    }

    let to_comb = rotation_plan_to_caterpillar(target);
    moves.extend(invert_rotation_plan(target, &to_comb)?.into_iter().map(Move::Rotate));

    let plan = MovePlan { start: start.clone(), moves };
    debug_assert_eq!(plan.end_shape().ok().as_ref(), Some(target));
    Ok(plan)
}

/// Compiles `(λ shape, p, λ′ shape)` into moves acting on the permuted tree.
pub fn plan_moves(lambda_shape: &TreeShape, p: &Permutation, lambda_prime_shape: &TreeShape) -> Result<MovePlan> {
    let n = lambda_shape.n();
    if p.n() != n || lambda_prime_shape.n() != n {
        return Err(Error::Domain(format!(
            "mismatched sizes: λ has {n} leaves, π acts on {}, λ′ has {} leaves",
            p.n(),
            lambda_prime_shape.n()
        )));
    }
    plan_between(&permuted_shape(lambda_shape, p), lambda_prime_shape)
}

/// Sparse superposition over labelings of one shape.
///
/// Label vectors are indexed by in-order node id and include the root entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superposition {
    pub shape: TreeShape,
    /// Indexed by particle index − 1.
    pub leaf_spins: Vec<TwiceSpin>,
    pub amplitudes: BTreeMap<Vec<TwiceSpin>, SurdSum>,
}

impl Superposition {
    pub fn basis(tree: &LabeledTree) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(tree.labels.clone(), SurdSum::one());
        Superposition { shape: tree.shape.clone(), leaf_spins: tree.leaf_spins.clone(), amplitudes }
    }

    pub fn root_label(&self) -> Option<TwiceSpin> {
        let id = self.shape.root_id()?;
        self.amplitudes.keys().next().map(|k| k[id])
    }

    pub fn amplitude(&self, labels: &[TwiceSpin]) -> SurdSum {
        self.amplitudes.get(labels).cloned().unwrap_or_default()
    }

    /// `Σ amp²`, exact.
    pub fn norm_squared(&self) -> SurdSum {
        self.amplitudes.values().map(|a| a.square()).sum()
    }

    pub fn support(&self) -> usize {
        self.amplitudes.len()
    }
}

type Cache = HashMap<SixSpins, SurdSum>;

fn tensor(cache: &mut Cache, s: SixSpins) -> SurdSum {
    cache.entry(s).or_insert_with(|| recoupling_tensor(s)).clone()
}

/// Image of a single labeling under a move; contributions are `(labels, weight)`.
fn move_images(
    m: &Move,
    shape: &TreeShape,
    info: &[crate::tree::NodeInfo],
    leaves: &[u32],
    leaf_spins: &[TwiceSpin],
    labels: &[TwiceSpin],
    cache: &mut Cache,
) -> Result<Vec<(Vec<TwiceSpin>, SurdSum)>> {
    let label = |c: Child| child_label(leaf_spins, leaves, labels, c);
    match *m {
        Move::Rotate(Rotation { node: y, direction: Direction::Right }) => {
            // ((A,B)_x, C)_y  →  (A,(B,C)_y)_x
            let Child::Node(x) = info[y].left else {
                return Err(Error::PlanMismatch(format!("right rotation at {y} needs an internal left child")));
            };
            let (a, b, c) = (label(info[x].left), label(info[x].right), label(info[y].right));
            let (f, e) = (labels[x], labels[y]);
            let mut out = Vec::new();
            for d in coupled_range(b, c) {
                if !triangle_admissible(SpinTriple { a, b: d, c: e }) {
                    continue;
                }
                let w = tensor(cache, SixSpins { a, b, f, c, e, d });
                if w.is_zero() {
                    continue;
                }
                let mut next = labels.to_vec();
                next[x] = e;
                next[y] = d;
                out.push((next, w));
            }
            Ok(out)
        }
        Move::Rotate(Rotation { node: x, direction: Direction::Left }) => {
            // (A,(B,C)_y)_x  →  ((A,B)_x, C)_y
            let Child::Node(y) = info[x].right else {
                return Err(Error::PlanMismatch(format!("left rotation at {x} needs an internal right child")));
            };
            let (a, b, c) = (label(info[x].left), label(info[y].left), label(info[y].right));
            let (d, e) = (labels[y], labels[x]);
            let mut out = Vec::new();
            for f in coupled_range(a, b) {
                if !triangle_admissible(SpinTriple { a: f, b: c, c: e }) {
                    continue;
                }
                let w = tensor(cache, SixSpins { a, b, f, c, e, d });
                if w.is_zero() {
                    continue;
                }
                let mut next = labels.to_vec();
                next[y] = e;
                next[x] = f;
                out.push((next, w));
            }
            Ok(out)
        }
        Move::SiblingSwap(k) => {
            let node = info
                .get(k)
                .ok_or_else(|| Error::PlanMismatch(format!("no internal node {k} in {shape}")))?;
            let sign = twist_sign(label(node.left), label(node.right), labels[k]);
            // In-order ids inside the subtree: right block, this node, left block.
            let mut next = labels.to_vec();
            let block: Vec<TwiceSpin> = labels[k + 1..node.hi]
                .iter()
                .chain(std::iter::once(&labels[k]))
                .chain(labels[node.lo..k].iter())
                .copied()
                .collect();
            next[node.lo..node.hi].copy_from_slice(&block);
            Ok(vec![(next, SurdSum::from_integer(sign))])
        }
    }
}

fn check_applicable(s: &Superposition, m: &Move) -> Result<TreeShape> {
    m.apply_to_shape(&s.shape)
}

/// Applies one move exactly; zero amplitudes are pruned.
pub fn apply_move(s: &Superposition, m: &Move) -> Result<Superposition> {
    let shape = check_applicable(s, m)?;
    let info = s.shape.layout();
    let leaves = s.shape.leaves();
    let mut cache = Cache::new();
    let mut out: BTreeMap<Vec<TwiceSpin>, SurdSum> = BTreeMap::new();
    for (labels, amp) in &s.amplitudes {
        for (next, w) in move_images(m, &s.shape, &info, &leaves, &s.leaf_spins, labels, &mut cache)? {
            *out.entry(next).or_default() += &(amp * &w);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(Superposition { shape, leaf_spins: s.leaf_spins.clone(), amplitudes: out })
}

/// Same result as [`apply_move`], with the per-labeling work spread over the
/// rayon pool. Contributions are merged in key order, so the output is
/// identical.
pub fn apply_move_parallel(s: &Superposition, m: &Move) -> Result<Superposition> {
    let shape = check_applicable(s, m)?;
    let info = s.shape.layout();
    let leaves = s.shape.leaves();
    let entries: Vec<(&Vec<TwiceSpin>, &SurdSum)> = s.amplitudes.iter().collect();
    let parts: Vec<Vec<(Vec<TwiceSpin>, SurdSum)>> = entries
        .par_chunks(64.max(entries.len() / (4 * rayon::current_num_threads().max(1)) + 1))
        .map(|chunk| {
            let mut cache = Cache::new();
            let mut local = Vec::new();
            for (labels, amp) in chunk {
                for (next, w) in move_images(m, &s.shape, &info, &leaves, &s.leaf_spins, labels, &mut cache)? {
                    local.push((next, *amp * &w));
                }
            }
            Ok(local)
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<Vec<TwiceSpin>, SurdSum> = BTreeMap::new();
    for (k, v) in parts.into_iter().flatten() {
        *out.entry(k).or_default() += v;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(Superposition { shape, leaf_spins: s.leaf_spins.clone(), amplitudes: out })
}

/// Runs every move of `plan` starting from `s`.
pub fn apply_plan(s: &Superposition, plan: &MovePlan, parallel: bool) -> Result<Superposition> {
    if s.shape != plan.start {
        return Err(Error::PlanMismatch(format!("plan starts at {} but state is on {}", plan.start, s.shape)));
    }
    let mut state = s.clone();
    for m in &plan.moves {
        state = if parallel { apply_move_parallel(&state, m)? } else { apply_move(&state, m)? };
    }
    Ok(state)
}

fn check_pair(lambda: &LabeledTree, p: &Permutation, lambda_prime: &LabeledTree) -> Result<()> {
    for (name, t) in [("λ", lambda), ("λ′", lambda_prime)] {
        if !validate_labeling(t) {
            return Err(Error::Domain(format!("{name} is not an admissible labeling")));
        }
    }
    let n = lambda.n();
    if lambda_prime.n() != n || p.n() != n {
        return Err(Error::Domain(format!(
            "mismatched sizes: λ has {n} leaves, π acts on {}, λ′ has {} leaves",
            p.n(),
            lambda_prime.n()
        )));
    }
    let mut a = lambda.leaf_spins.clone();
    let mut b = lambda_prime.leaf_spins.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err(Error::Domain("λ and λ′ have different leaf spin multisets".into()));
    }
    Ok(())
}

/// Leaf spins after `U_p`: particle `p⁻¹(k)` carries what particle `k` had.
fn permuted_spins(spins: &[TwiceSpin], p: &Permutation) -> Vec<TwiceSpin> {
    let mut out = vec![TwiceSpin::ZERO; spins.len()];
    for (k, &s) in spins.iter().enumerate() {
        let dst = p.inverse().apply(k as u32 + 1);
        out[dst as usize - 1] = s;
    }
    out
}

/// Initial superposition for `U_p|λ⟩` written on the permuted tree.
pub fn permuted_basis_state(lambda: &LabeledTree, p: &Permutation) -> Superposition {
    let tree = LabeledTree {
        shape: permuted_shape(&lambda.shape, p),
        leaf_spins: permuted_spins(&lambda.leaf_spins, p),
        labels: lambda.labels.clone(),
    };
    Superposition::basis(&tree)
}

/// Options for [`evaluate_amplitude_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    pub parallel: bool,
}

/// Exact `⟨λ′|U_p|λ⟩`.
pub fn evaluate_amplitude(lambda: &LabeledTree, p: &Permutation, lambda_prime: &LabeledTree) -> Result<SurdSum> {
    evaluate_amplitude_with(lambda, p, lambda_prime, EvalOptions::default())
}

pub fn evaluate_amplitude_with(
    lambda: &LabeledTree,
    p: &Permutation,
    lambda_prime: &LabeledTree,
    opts: EvalOptions,
) -> Result<SurdSum> {
    check_pair(lambda, p, lambda_prime)?;
    if lambda.root_label() != lambda_prime.root_label() {
        return Ok(SurdSum::zero());
    }
    let plan = plan_moves(&lambda.shape, p, &lambda_prime.shape)?;
    evaluate_with_plan(lambda, p, lambda_prime, &plan, opts)
}

/// Evaluates using a caller-supplied plan, which must start at the permuted
/// tree of `λ` and end at `λ′`'s shape.
pub fn evaluate_with_plan(
    lambda: &LabeledTree,
    p: &Permutation,
    lambda_prime: &LabeledTree,
    plan: &MovePlan,
    opts: EvalOptions,
) -> Result<SurdSum> {
    check_pair(lambda, p, lambda_prime)?;
    let start = permuted_basis_state(lambda, p);
    if start.leaf_spins != lambda_prime.leaf_spins || lambda.root_label() != lambda_prime.root_label() {
        return Ok(SurdSum::zero());
    }
    let end = apply_plan(&start, plan, opts.parallel)?;
    if end.shape != lambda_prime.shape {
        return Err(Error::PlanMismatch(format!("plan ends at {} instead of {}", end.shape, lambda_prime.shape)));
    }
    Ok(end.amplitude(&lambda_prime.labels))
}

/// Largest `n` accepted by the dense oracle.
pub const DENSE_ORACLE_MAX_N: usize = 14;

fn float_factorial(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Clebsch-Gordan coefficient `⟨j1 m1 j2 m2 | j m⟩` in floating point, all
/// arguments doubled. Condon-Shortley phase.
pub fn clebsch_gordan_f64(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> f64 {
    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    if (j1 + j2 + j) % 2 != 0 || j < (j1 - j2).abs() || j > j1 + j2 {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let pre = ((j + 1) as f64 * float_factorial(h(j + j1 - j2)) * float_factorial(h(j - j1 + j2))
        * float_factorial(h(j1 + j2 - j))
        / float_factorial(h(j1 + j2 + j) + 1))
    .sqrt();
    let norm = (float_factorial(h(j + m))
        * float_factorial(h(j - m))
        * float_factorial(h(j1 - m1))
        * float_factorial(h(j1 + m1))
        * float_factorial(h(j2 - m2))
        * float_factorial(h(j2 + m2)))
    .sqrt();
    let mut sum = 0.0;
    for k in 0..=h(j1 + j2 - j) {
        let args = [
            k,
            h(j1 + j2 - j) - k,
            h(j1 - m1) - k,
            h(j2 + m2) - k,
            h(j - j2 + m1) + k,
            h(j - j1 - m2) + k,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let den: f64 = args.iter().map(|&a| float_factorial(a)).product();
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / den;
    }
    pre * norm * sum
}

/// Dense state of a labeled tree of spin-1/2 leaves in the `m = J` sector,
/// as a `2ⁿ` vector indexed by particle (bit `n − k` is particle `k`,
/// `0 = ↑`).
pub fn dense_state(tree: &LabeledTree) -> Result<Vec<f64>> {
    let n = tree.n();
    if n > DENSE_ORACLE_MAX_N {
        return Err(Error::Resource(format!("dense oracle limited to n ≤ {DENSE_ORACLE_MAX_N}, got {n}")));
    }
    if tree.leaf_spins.iter().any(|&s| s != TwiceSpin::HALF) {
        return Err(Error::Domain("dense oracle needs spin-1/2 leaves".into()));
    }
    let leaves = tree.shape.leaves();
    let info = tree.shape.layout();

    // m-resolved vectors for each subtree, basis in subtree left-to-right order.
    fn build(
        child: Child,
        info: &[crate::tree::NodeInfo],
        labels: &[TwiceSpin],
    ) -> (i64, BTreeMap<i64, Vec<f64>>) {
        match child {
            Child::Leaf(_) => {
                let mut m = BTreeMap::new();
                m.insert(1, vec![1.0, 0.0]);
                m.insert(-1, vec![0.0, 1.0]);
                (1, m)
            }
            Child::Node(id) => {
                let (j1, left) = build(info[id].left, info, labels);
                let (j2, right) = build(info[id].right, info, labels);
                let j = labels[id].0 as i64;
                let dim = left.values().next().unwrap().len() * right.values().next().unwrap().len();
                let mut out = BTreeMap::new();
                for m in (-j..=j).step_by(2) {
                    let mut v = vec![0.0; dim];
                    for (&m1, v1) in &left {
                        let m2 = m - m1;
                        let Some(v2) = right.get(&m2) else { continue };
                        let cg = clebsch_gordan_f64(j1, m1, j2, m2, j, m);
                        if cg == 0.0 {
                            continue;
                        }
                        for (a, x) in v1.iter().enumerate() {
                            if *x == 0.0 {
                                continue;
                            }
                            for (b, y) in v2.iter().enumerate() {
                                v[a * v2.len() + b] += cg * x * y;
                            }
                        }
                    }
                    out.insert(m, v);
                }
                (j, out)
            }
        }
    }
    let (positional, j) = match tree.shape.root_id() {
        None => (vec![1.0, 0.0], 1),
        Some(root) => {
            let (j, vecs) = build(Child::Node(root), &info, &tree.labels);
            (vecs[&j].clone(), j)
        }
    };
    debug_assert_eq!(j, tree.root_label().0 as i64);
    // Reorder bits from leaf positions to particle indices.
    let mut out = vec![0.0; 1 << n];
    for (idx, &amp) in positional.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let mut target = 0usize;
        for (pos, &particle) in leaves.iter().enumerate() {
            let bit = (idx >> (n - 1 - pos)) & 1;
            target |= bit << (n - particle as usize);
        }
        out[target] = amp;
    }
    Ok(out)
}

/// `U_p` on a dense vector: `U_p|z₁…zₙ⟩ = |z_{p(1)}…z_{p(n)}⟩`.
pub fn dense_permute(v: &[f64], p: &Permutation) -> Vec<f64> {
    let n = p.n();
    let mut out = vec![0.0; v.len()];
    for (z, &amp) in v.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let bit = |k: usize| (z >> (n - k)) & 1; // particle k, 1-based
        let mut w = 0usize;
        for i in 1..=n {
            w |= bit(p.apply(i as u32) as usize) << (n - i);
        }
        out[w] += amp;
    }
    out
}

/// Independent floating-point value of `⟨λ′|U_p|λ⟩` from explicit
/// Clebsch-Gordan coupling in the full tensor-product space.
pub fn dense_oracle_amplitude(lambda: &LabeledTree, p: &Permutation, lambda_prime: &LabeledTree) -> Result<f64> {
    let n = lambda.n();
    if n > DENSE_ORACLE_MAX_N {
        return Err(Error::Resource(format!("dense oracle limited to n ≤ {DENSE_ORACLE_MAX_N}, got {n}")));
    }
    if lambda_prime.n() != n || p.n() != n {
        return Err(Error::Domain("mismatched sizes".into()));
    }
    if lambda.root_label() != lambda_prime.root_label() {
        return Ok(0.0);
    }
    let v = dense_permute(&dense_state(lambda)?, p);
    let w = dense_state(lambda_prime)?;
    Ok(v.iter().zip(&w).map(|(a, b)| a * b).sum())
}
