//! Oracles and helpers shared by the integration tests. The oracles do not
//! call into the evaluators they are used to check.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinrecouple::numerics::{SurdSum, TwiceSpin};
use spinrecouple::engine::{evaluate_amplitude, Permutation};
use spinrecouple::recoupling::SixSpins;
use spinrecouple::tree::{enumerate_labelings, LabeledTree, TreeShape};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fractional bits carried by the fixed-point oracle.
pub const ORACLE_BITS: u32 = 160;

fn fact(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn triangle(a: i64, b: i64, c: i64) -> bool {
    (a + b + c) % 2 == 0 && (a - b).abs() <= c && c <= a + b
}

/// Fixed-point value `v` with `|v − exact| ≤ bound`, both as rationals.
#[derive(Clone, Debug)]
pub struct Approx {
    pub value: BigRational,
    pub bound: BigRational,
}

impl Approx {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap()
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap()
    }

    /// True when the exact surd lies within the combined error bounds.
    pub fn agrees_with(&self, s: &SurdSum) -> bool {
        let lib = s.to_float(ORACLE_BITS);
        let gap = (&lib.value - &self.value).abs();
        gap <= &lib.error + &self.bound
    }
}

/// `{j1 j2 j3; j4 j5 j6}` by the textbook Racah formula in doubled spins,
/// with `√` of the triangle-coefficient product taken as an integer square
/// root at `ORACLE_BITS` fractional bits.
pub fn racah_sixj_fixed(s: SixSpins) -> Approx {
    let [j1, j2, j3] = s.upper().map(|x| x as i64);
    let [j4, j5, j6] = s.lower().map(|x| x as i64);
    let zero = Approx { value: BigRational::zero(), bound: BigRational::zero() };
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| triangle(a, b, c)) {
        return zero;
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for &(a, b, c) in &triads {
        num *= fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2);
        den *= fact((a + b + c) / 2 + 1);
    }
    let mut sum = BigRational::zero();
    let lo = [(j1 + j2 + j3), (j1 + j5 + j6), (j4 + j2 + j6), (j4 + j5 + j3)].map(|x| x / 2);
    let hi = [(j1 + j2 + j4 + j5), (j2 + j3 + j5 + j6), (j3 + j1 + j6 + j4)].map(|x| x / 2);
    let tmin = *lo.iter().max().unwrap();
    let tmax = *hi.iter().min().unwrap();
    for t in tmin..=tmax {
        let mut d = BigInt::one();
        for l in lo {
            d *= fact(t - l);
        }
        for h in hi {
            d *= fact(h - t);
        }
        let sign = if t % 2 == 0 { 1 } else { -1 };
        sum += BigRational::new(fact(t + 1) * sign, d);
    }
    // floor(√(num/den) · 2^k) via integer square root; error below 2 ulp
    let scaled = (num << (2 * ORACLE_BITS as usize)) / den;
    let root = scaled.sqrt();
    let ulp = BigRational::new(BigInt::one(), BigInt::one() << ORACLE_BITS as usize);
    let root_q = BigRational::new(root, BigInt::one() << ORACLE_BITS as usize);
    let bound = sum.abs() * &ulp * BigInt::from(2);
    Approx { value: root_q * sum, bound }
}

/// Random admissible `SixSpins` with every twice-spin at most `max`.
pub fn random_admissible_sixj(r: &mut ChaCha8Rng, max: u32) -> SixSpins {
    loop {
        let s = SixSpins::new(
            [r.random_range(0..=max), r.random_range(0..=max), r.random_range(0..=max)],
            [r.random_range(0..=max), r.random_range(0..=max), r.random_range(0..=max)],
        );
        if s.is_admissible() {
            return s;
        }
    }
}

// ---------------------------------------------------------------------------
// Young's orthogonal form by axial distances

/// Standard two-row tableaux as row assignments, lexicographic.
pub fn tableaux(row1: usize, row2: usize) -> Vec<Vec<u8>> {
    let n = row1 + row2;
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        // bit n−1−i set means entry i+1 is in row 2, so counting up is lexicographic
        let rows: Vec<u8> = (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { 2 } else { 1 }).collect();
        let twos = rows.iter().filter(|&&r| r == 2).count();
        if twos != row2 {
            continue;
        }
        let mut top = 0;
        let mut ok = true;
        for (i, &r) in rows.iter().enumerate() {
            if r == 1 {
                top += 1;
            } else if i + 1 - top > top {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(rows);
        }
    }
    out
}

/// Content (column − row) of entry `k` (1-based).
fn content(t: &[u8], k: usize) -> i64 {
    let row = t[k - 1];
    let col = t[..k - 1].iter().filter(|&&r| r == row).count() as i64;
    col - (row as i64 - 1)
}

pub type Matrix = Vec<Vec<SurdSum>>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Matrix of the adjacent transposition `s_k = (k k+1)`.
pub fn axial_generator(row1: usize, row2: usize, k: usize) -> Matrix {
    let ts = tableaux(row1, row2);
    let dim = ts.len();
    let mut m = vec![vec![SurdSum::zero(); dim]; dim];
    for (i, t) in ts.iter().enumerate() {
        let rho = content(t, k + 1) - content(t, k);
        if rho == 1 {
            m[i][i] = SurdSum::one();
        } else if rho == -1 {
            m[i][i] = SurdSum::from_integer(-1);
        } else {
            m[i][i] = SurdSum::from_rational(q(1, rho));
            let mut swapped = t.clone();
            swapped.swap(k - 1, k);
            let j = ts.iter().position(|u| *u == swapped).expect("swap of non-adjacent boxes is standard");
            // √(1 − 1/ρ²) = √(ρ² − 1)/|ρ|
            m[j][i] = SurdSum::sqrt_u64((rho * rho - 1) as u64).scale(&q(1, rho.abs()));
        }
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![SurdSum::zero(); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn identity_matrix(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { SurdSum::one() } else { SurdSum::zero() }).collect())
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Word `p = s_{i1}·…·s_{ik}` under `(p·q)(x) = q(p(x))`, found by peeling
/// descents off the image list.
pub fn adjacent_word(images: &[u32]) -> Vec<usize> {
    let mut p = images.to_vec();
    let mut word = Vec::new();
    'outer: loop {
        for i in 0..p.len().saturating_sub(1) {
            if p[i] > p[i + 1] {
                word.push(i + 1);
                p.swap(i, i + 1);
                continue 'outer;
            }
        }
        return word;
    }
}

/// Representation matrix of the permutation with the given images.
pub fn axial_matrix(row1: usize, row2: usize, images: &[u32]) -> Matrix {
    let dim = tableaux(row1, row2).len();
    adjacent_word(images)
        .into_iter()
        .fold(identity_matrix(dim), |acc, k| mat_mul(&acc, &axial_generator(row1, row2, k)))
}

// ---------------------------------------------------------------------------
// Closed state sum by brute force

/// Every labeling with `2j ≤ cutoff` enumerated without pruning; 6j values
/// from the fixed-point oracle.
pub fn closed_sum_direct(tets: &[[usize; 6]], num_edges: usize, glued_faces: &[[usize; 3]], cutoff: u32) -> f64 {
    const FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [3, 1, 5], [3, 4, 2]];
    let base = cutoff as usize + 1;
    let total = base.pow(num_edges as u32);
    let mut z = BigRational::zero();
    let mut labels = vec![0u32; num_edges];
    for idx in 0..total {
        let mut x = idx;
        for l in labels.iter_mut() {
            *l = (x % base) as u32;
            x /= base;
        }
        let ok = tets.iter().all(|t| {
            FACES.iter().all(|f| triangle(labels[t[f[0]]] as i64, labels[t[f[1]]] as i64, labels[t[f[2]]] as i64))
        });
        if !ok {
            continue;
        }
        let mut w = BigRational::one();
        for &l in &labels {
            w *= BigRational::from_integer(BigInt::from(l + 1));
            if l % 2 == 1 {
                w = -w;
            }
        }
        for f in glued_faces {
            if (f.iter().map(|&e| labels[e]).sum::<u32>() / 2) % 2 == 1 {
                w = -w;
            }
        }
        for t in tets {
            let s = SixSpins::new([labels[t[0]], labels[t[1]], labels[t[2]]], [labels[t[3]], labels[t[4]], labels[t[5]]]);
            w *= racah_sixj_fixed(s).value;
        }
        z += w;
    }
    z.to_f64().unwrap()
}

// ---------------------------------------------------------------------------

pub fn ts(x: u32) -> TwiceSpin {
    TwiceSpin(x)
}

/// Random permutation of `1..=n`.
pub fn random_perm(r: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

/// Random labeled tree on `n` spin-1/2 leaves: random shape, random leaf
/// order, uniformly chosen admissible labeling with the given root.
pub fn random_tree(r: &mut ChaCha8Rng, n: usize, root: u32) -> Option<LabeledTree> {
    let leaves = random_perm(r, n);
    let shape = random_shape(r, &leaves);
    let all = enumerate_labelings(&shape, &vec![TwiceSpin::HALF; n], TwiceSpin(root));
    if all.is_empty() {
        return None;
    }
    let i = r.random_range(0..all.len());
    Some(all[i].clone())
}

/// Random binary tree over the given leaf order, by random split points.
pub fn random_shape(r: &mut ChaCha8Rng, leaves: &[u32]) -> TreeShape {
    fn go(r: &mut ChaCha8Rng, leaves: &[u32]) -> spinrecouple::tree::Node {
        if leaves.len() == 1 {
            return spinrecouple::tree::Node::Leaf(leaves[0]);
        }
        let k = r.random_range(1..leaves.len());
        spinrecouple::tree::Node::join(go(r, &leaves[..k]), go(r, &leaves[k..]))
    }
    TreeShape::new(go(r, leaves)).unwrap()
}

/// `M[row][col] = ⟨rows[row]| U_p |cols[col]⟩` via the engine.
pub fn engine_matrix(rows: &[LabeledTree], p: &Permutation, cols: &[LabeledTree]) -> Matrix {
    rows.iter()
        .map(|u| cols.iter().map(|t| evaluate_amplitude(t, p, u).unwrap()).collect())
        .collect()
}

/// Caterpillar labelings over `1..n` with spin-1/2 leaves and total `root`.
pub fn comb_basis(n: usize, root: u32) -> Vec<LabeledTree> {
    let leaves: Vec<u32> = (1..=n as u32).collect();
    enumerate_labelings(&TreeShape::caterpillar(&leaves), &vec![TwiceSpin::HALF; n], TwiceSpin(root))
}

/// Random shape over a random leaf order of `1..=n`.
pub fn random_any_shape(r: &mut ChaCha8Rng, n: usize) -> TreeShape {
    let leaves = random_perm(r, n);
    random_shape(r, &leaves)
}
