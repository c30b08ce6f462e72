//! Two-row irreducible representations of the symmetric group.
//!
//! A standard tableau of a two-row diagram is recorded by which row each of
//! `1..n` lands in. Reading it as a walk of overhangs (top row length minus
//! bottom row length) gives the successive total spins of the left-comb tree,
//! so tableaux and caterpillar labelings are the same objects. Matrix
//! elements of Young's orthogonal form are then permutational amplitudes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{apply_plan, permuted_basis_state, plan_moves, Permutation};
use crate::error::{Error, Result};
use crate::numerics::{SurdSum, TwiceSpin};
use crate::tree::{LabeledTree, TreeShape};

/// Largest irrep dimension accepted by full-matrix and exact-character work.
pub const MAX_DIMENSION: usize = 20_000;

/// Young diagram with at most two rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoRowDiagram {
    pub row1: usize,
    pub row2: usize,
}

impl TwoRowDiagram {
    pub fn new(row1: usize, row2: usize) -> Result<Self> {
        if row2 > row1 {
            return Err(Error::Domain(format!("[{row1},{row2}] is not a Young diagram")));
        }
        Ok(TwoRowDiagram { row1, row2 })
    }

    pub fn n(&self) -> usize {
        self.row1 + self.row2
    }

    /// Total spin `J` with `2J = row1 − row2`.
    pub fn total_spin(&self) -> TwiceSpin {
        TwiceSpin((self.row1 - self.row2) as u32)
    }

    /// Every two-row diagram with `n` boxes, longest top row first.
    pub fn all(n: usize) -> Vec<TwoRowDiagram> {
        (0..=n / 2).map(|row2| TwoRowDiagram { row1: n - row2, row2 }).collect()
    }
}

impl fmt::Display for TwoRowDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.row2 == 0 {
            write!(f, "[{}]", self.row1)
        } else {
            write!(f, "[{},{}]", self.row1, self.row2)
        }
    }
}

impl FromStr for TwoRowDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let parse = |x: &str| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad diagram row `{x}`")));
        match parts.as_slice() {
            [a] => TwoRowDiagram::new(parse(a)?, 0),
            [a, b] => TwoRowDiagram::new(parse(a)?, parse(b)?),
            _ => Err(Error::Parse(format!("diagram must be `R1` or `R1,R2`, got `{s}`"))),
        }
    }
}

/// Standard tableau of a two-row diagram; `row_of[k − 1] ∈ {1, 2}` is the row
/// holding `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoRowTableau {
    pub diagram: TwoRowDiagram,
    pub row_of: Vec<u8>,
}

impl TwoRowTableau {
    pub fn new(diagram: TwoRowDiagram, row_of: Vec<u8>) -> Result<Self> {
        if row_of.len() != diagram.n() {
            return Err(Error::Domain(format!("tableau has {} entries, diagram {diagram} needs {}", row_of.len(), diagram.n())));
        }
        let mut top = 0usize;
        let mut bottom = 0usize;
        for (k, &r) in row_of.iter().enumerate() {
            match r {
                1 => top += 1,
                2 => bottom += 1,
                _ => return Err(Error::Domain(format!("entry {} assigned to row {r}", k + 1))),
            }
            if bottom > top {
                return Err(Error::Domain(format!("entry {} breaks the column condition", k + 1)));
            }
        }
        if top != diagram.row1 || bottom != diagram.row2 {
            return Err(Error::Domain(format!("tableau shape [{top},{bottom}] differs from {diagram}")));
        }
        Ok(TwoRowTableau { diagram, row_of })
    }

    /// Parses the `"1,1,2"` form.
    pub fn parse(diagram: TwoRowDiagram, s: &str) -> Result<Self> {
        let row_of = s
            .split(',')
            .map(|x| x.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad tableau entry `{x}`"))))
            .collect::<Result<Vec<_>>>()?;
        TwoRowTableau::new(diagram, row_of)
    }

    /// Overhangs `o₁ … oₙ` after each box is added.
    pub fn overhangs(&self) -> Vec<u32> {
        let mut o = 0i64;
        self.row_of
            .iter()
            .map(|&r| {
                o += if r == 1 { 1 } else { -1 };
                o as u32
            })
            .collect()
    }

    /// Entries of each row.
    pub fn rows(&self) -> (Vec<usize>, Vec<usize>) {
        let mut top = Vec::new();
        let mut bottom = Vec::new();
        for (k, &r) in self.row_of.iter().enumerate() {
            if r == 1 {
                top.push(k + 1);
            } else {
                bottom.push(k + 1);
            }
        }
        (top, bottom)
    }
}

impl fmt::Display for TwoRowTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.row_of.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Number of ways to finish a ballot walk: `ways[k][o]` counts completions
/// from overhang `o` after `k` boxes to the final overhang.
fn completion_counts(d: TwoRowDiagram) -> Vec<Vec<BigUint>> {
    let n = d.n();
    let target = d.row1 - d.row2;
    let mut ways = vec![vec![BigUint::zero(); n + 2]; n + 1];
    ways[n][target] = BigUint::from(1u32);
    for k in (0..n).rev() {
        for o in 0..=k {
            let mut w = ways[k + 1][o + 1].clone();
            if o > 0 {
                w += &ways[k + 1][o - 1];
            }
            ways[k][o] = w;
        }
    }
    ways
}

/// Number of standard tableaux of shape `d`, by the ballot-walk recursion.
pub fn dimension_two_row(d: TwoRowDiagram) -> BigUint {
    completion_counts(d)[0][0].clone()
}

/// All standard tableaux of shape `d`, lexicographic in `row_of`.
pub fn enumerate_tableaux(d: TwoRowDiagram) -> Vec<TwoRowTableau> {
    fn go(d: TwoRowDiagram, top: usize, bottom: usize, cur: &mut Vec<u8>, out: &mut Vec<TwoRowTableau>) {
        if top == d.row1 && bottom == d.row2 {
            out.push(TwoRowTableau { diagram: d, row_of: cur.clone() });
            return;
        }
        if top < d.row1 {
            cur.push(1);
            go(d, top + 1, bottom, cur, out);
            cur.pop();
        }
        if bottom < d.row2 && bottom < top {
            cur.push(2);
            go(d, top, bottom + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// Left-comb tree whose label after `k` particles is `o_k / 2`.
pub fn tableau_to_tree(t: &TwoRowTableau) -> LabeledTree {
    let n = t.diagram.n();
    let leaves: Vec<u32> = (1..=n as u32).collect();
    let shape = TreeShape::caterpillar(&leaves);
    // internal node k couples the first k + 2 particles
    let labels = t.overhangs().into_iter().skip(1).map(TwiceSpin).collect();
    LabeledTree::new(shape, labels).expect("overhang walk has the right length")
}

/// Inverse of [`tableau_to_tree`]; fails unless `tree` is a spin-1/2 left comb
/// over `1..n` in order.
pub fn tree_to_tableau(tree: &LabeledTree) -> Result<TwoRowTableau> {
    let n = tree.n();
    let leaves: Vec<u32> = (1..=n as u32).collect();
    if tree.shape != TreeShape::caterpillar(&leaves) || tree.leaf_spins.iter().any(|&s| s != TwiceSpin::HALF) {
        return Err(Error::Domain("only spin-1/2 left combs over 1..n correspond to tableaux".into()));
    }
    let mut path = vec![1u32];
    path.extend(tree.labels.iter().map(|l| l.0));
    let mut row_of = Vec::with_capacity(n);
    let mut prev = 0u32;
    for &o in &path {
        row_of.push(if o == prev + 1 {
            1
        } else if o + 1 == prev {
            2
        } else {
            return Err(Error::Domain("labels do not form an overhang walk".into()));
        });
        prev = o;
    }
    let row2 = row_of.iter().filter(|&&r| r == 2).count();
    TwoRowTableau::new(TwoRowDiagram::new(n - row2, row2)?, row_of)
}

fn check_shape(d: TwoRowDiagram, t: &TwoRowTableau) -> Result<()> {
    if t.diagram != d {
        return Err(Error::Domain(format!("tableau {t} has shape {} instead of {d}", t.diagram)));
    }
    Ok(())
}

fn check_perm(d: TwoRowDiagram, p: &Permutation) -> Result<()> {
    if p.n() != d.n() {
        return Err(Error::Domain(format!("permutation acts on {} points, diagram {d} has {}", p.n(), d.n())));
    }
    Ok(())
}

/// Matrix element `⟨row_t| ρ(p) |col_t⟩` of Young's orthogonal form, exact.
pub fn yof_matrix_element(
    d: TwoRowDiagram,
    p: &Permutation,
    row_t: &TwoRowTableau,
    col_t: &TwoRowTableau,
) -> Result<SurdSum> {
    check_shape(d, row_t)?;
    check_shape(d, col_t)?;
    check_perm(d, p)?;
    crate::engine::evaluate_amplitude(&tableau_to_tree(col_t), p, &tableau_to_tree(row_t))
}

fn dimension_guard(d: TwoRowDiagram) -> Result<usize> {
    let dim = dimension_two_row(d);
    match dim.to_usize() {
        Some(x) if x <= MAX_DIMENSION => Ok(x),
        _ => Err(Error::Resource(format!("dimension of {d} is {dim}, above the limit {MAX_DIMENSION}"))),
    }
}

/// Column `ρ(p)|col_t⟩` of the representation matrix, in tableau order.
fn yof_column(d: TwoRowDiagram, p: &Permutation, tableaux: &[TwoRowTableau], col: &TwoRowTableau) -> Result<Vec<SurdSum>> {
    let n = d.n();
    let leaves: Vec<u32> = (1..=n as u32).collect();
    let comb = TreeShape::caterpillar(&leaves);
    let plan = plan_moves(&comb, p, &comb)?;
    let start = permuted_basis_state(&tableau_to_tree(col), p);
    let end = apply_plan(&start, &plan, false)?;
    Ok(tableaux.iter().map(|t| end.amplitude(&tableau_to_tree(t).labels)).collect())
}

/// Full representation matrix, rows and columns in tableau order.
pub fn yof_full_matrix(d: TwoRowDiagram, p: &Permutation) -> Result<Vec<Vec<SurdSum>>> {
    check_perm(d, p)?;
    dimension_guard(d)?;
    let tableaux = enumerate_tableaux(d);
    let columns = tableaux
        .iter()
        .map(|c| yof_column(d, p, &tableaux, c))
        .collect::<Result<Vec<_>>>()?;
    let dim = tableaux.len();
    Ok((0..dim).map(|r| (0..dim).map(|c| columns[c][r].clone()).collect()).collect())
}

/// Uniformly random standard tableau drawn with a caller-owned generator.
pub fn sample_tableau_with<R: rand::Rng + ?Sized>(d: TwoRowDiagram, rng: &mut R) -> Result<TwoRowTableau> {
    let ways = completion_counts(d);
    if ways[0][0].is_zero() {
        return Err(Error::Domain(format!("no standard tableaux of shape {d}")));
    }
    let n = d.n();
    let mut row_of = Vec::with_capacity(n);
    let mut o = 0usize;
    for k in 0..n {
        let up = &ways[k + 1][o + 1];
        let total = &ways[k][o];
        // P(step up) = up / total
        let go_up = if o == 0 {
            true
        } else if up.is_zero() {
            false
        } else {
            uniform_below(total, rng) < *up
        };
        if go_up {
            row_of.push(1);
            o += 1;
        } else {
            row_of.push(2);
            o -= 1;
        }
    }
    TwoRowTableau::new(d, row_of)
}

/// Uniform integer in `[0, bound)` by rejection on random bytes.
fn uniform_below<R: rand::Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    if let Some(b) = bound.to_u64() {
        return BigUint::from(rng.random_range(0..b));
    }
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    loop {
        let mut buf = vec![0u8; bytes];
        rng.fill_bytes(&mut buf);
        let excess = bytes as u64 * 8 - bits;
        if let Some(first) = buf.last_mut() {
            *first &= 0xff >> excess;
        }
        let x = BigUint::from_bytes_le(&buf);
        if &x < bound {
            return x;
        }
    }
}

/// Uniformly random standard tableau, reproducible from `seed`.
pub fn sample_tableau_uniform(d: TwoRowDiagram, seed: u64) -> Result<TwoRowTableau> {
    sample_tableau_with(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Character `χ(p) = tr ρ(p)`; always an integer.
pub fn character_exact(d: TwoRowDiagram, p: &Permutation) -> Result<SurdSum> {
    check_perm(d, p)?;
    dimension_guard(d)?;
    let tableaux = enumerate_tableaux(d);
    let mut trace = SurdSum::zero();
    for (i, t) in tableaux.iter().enumerate() {
        trace += &yof_column(d, p, &tableaux, t)?[i];
    }
    Ok(trace)
}

/// Samples needed for `|estimate − χ/d| ≤ ε` with probability `1 − δ`
/// (Hoeffding, summands in `[−1, 1]`).
pub fn hoeffding_samples(epsilon: f64, delta: f64) -> usize {
    ((2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as usize
}

/// Outcome of [`character_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterEstimate {
    pub estimate: f64,
    pub samples: usize,
}

/// Monte Carlo estimate of `χ(p)/d`: mean of the diagonal element at
/// uniformly random tableaux, which is the expectation the mixed-state
/// Hadamard test measures.
pub fn character_estimate(
    d: TwoRowDiagram,
    p: &Permutation,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<CharacterEstimate> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain("epsilon and delta must lie in (0, 1)".into()));
    }
    check_perm(d, p)?;
    let samples = hoeffding_samples(epsilon, delta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if p.is_identity() {
        return Ok(CharacterEstimate { estimate: 1.0, samples });
    }
    let mut memo: HashMap<TwoRowTableau, f64> = HashMap::new();
    let mut total = 0.0;
    for _ in 0..samples {
        let t = sample_tableau_with(d, &mut rng)?;
        let v = match memo.get(&t) {
            Some(v) => *v,
            None => {
                let v = yof_matrix_element(d, p, &t, &t)?.to_f64();
                memo.insert(t, v);
                v
            }
        };
        total += v;
    }
    Ok(CharacterEstimate { estimate: total / samples as f64, samples })
}

/// Probability of reading `0` in the Hadamard test with control state
/// `α|0⟩ + β|1⟩` (real amplitudes) on the maximally mixed spin-`J` block.
pub fn hadamard_test_p0(alpha: f64, beta: f64, normalized_character: f64) -> f64 {
    0.5 * (1.0 + 2.0 * alpha * beta * normalized_character)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;
    use num_bigint::BigInt;

    fn diag(a: usize, b: usize) -> TwoRowDiagram {
        TwoRowDiagram::new(a, b).unwrap()
    }

    fn tab(d: TwoRowDiagram, s: &str) -> TwoRowTableau {
        TwoRowTableau::parse(d, s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn tableau_validation() {
        let d = diag(2, 1);
        assert!(TwoRowTableau::parse(d, "1,1,2").is_ok());
        assert!(TwoRowTableau::parse(d, "2,1,1").is_err());
        assert!(TwoRowTableau::parse(d, "1,1,1").is_err());
        assert!(TwoRowTableau::parse(d, "1,3,1").is_err());
        assert!(TwoRowDiagram::new(1, 2).is_err());
    }

    #[test]
    fn tree_correspondence() {
        let t = tableau_to_tree(&tab(diag(2, 0), "1,1"));
        assert_eq!(t.root_label(), TwiceSpin(2));
        let t = tableau_to_tree(&tab(diag(2, 1), "1,1,2"));
        assert_eq!(t.labels, vec![TwiceSpin(2), TwiceSpin(1)]);
        let t = tableau_to_tree(&tab(diag(2, 2), "1,2,1,2"));
        assert_eq!(t.labels, vec![TwiceSpin(0), TwiceSpin(1), TwiceSpin(0)]);
        assert_eq!(t.root_label(), TwiceSpin(0));
        for d in TwoRowDiagram::all(7) {
            for t in enumerate_tableaux(d) {
                assert_eq!(tree_to_tableau(&tableau_to_tree(&t)).unwrap(), t);
            }
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension_two_row(diag(5, 0)), BigUint::from(1u32));
        assert_eq!(dimension_two_row(diag(2, 1)), BigUint::from(2u32));
        assert_eq!(dimension_two_row(diag(2, 2)), BigUint::from(2u32));
        assert_eq!(dimension_two_row(diag(3, 2)), BigUint::from(5u32));
        assert_eq!(dimension_two_row(diag(0, 0)), BigUint::from(1u32));
    }

    #[test]
    fn small_matrices() {
        let d = diag(2, 1);
        let a = tab(d, "1,1,2");
        let b = tab(d, "1,2,1");
        let s1 = Permutation::transposition(3, 1, 2);
        assert_eq!(yof_matrix_element(d, &s1, &a, &a).unwrap(), SurdSum::one());
        assert_eq!(yof_matrix_element(d, &s1, &b, &b).unwrap(), SurdSum::from_integer(-1));
        let s2 = Permutation::transposition(3, 2, 3);
        let m = yof_full_matrix(d, &s2).unwrap();
        let h = SurdSum::sqrt_u64(3).scale(&q(1, 2));
        assert_eq!(m, vec![
            vec![SurdSum::from_rational(q(-1, 2)), h.clone()],
            vec![h, SurdSum::from_rational(q(1, 2))],
        ]);
        assert_eq!(yof_full_matrix(diag(1, 1), &Permutation::transposition(2, 1, 2)).unwrap(), vec![vec![SurdSum::from_integer(-1)]]);
        assert_eq!(yof_full_matrix(diag(2, 0), &Permutation::transposition(2, 1, 2)).unwrap(), vec![vec![SurdSum::one()]]);
    }

    #[test]
    fn shape_mismatch() {
        let t = tab(diag(2, 1), "1,1,2");
        assert!(yof_matrix_element(diag(3, 0), &Permutation::identity(3), &t, &t).is_err());
    }

    #[test]
    fn characters() {
        let d = diag(2, 1);
        assert_eq!(character_exact(d, &Permutation::identity(3)).unwrap(), SurdSum::from_integer(2));
        assert!(character_exact(d, &Permutation::transposition(3, 1, 2)).unwrap().is_zero());
        let p = Permutation::new(vec![2, 1, 4, 3]).unwrap();
        assert_eq!(character_exact(diag(2, 2), &p).unwrap(), SurdSum::from_integer(2));
        let est = character_estimate(diag(4, 2), &Permutation::identity(6), 0.1, 0.1, 1).unwrap();
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn sampler_is_deterministic_and_valid() {
        let d = diag(5, 3);
        assert_eq!(sample_tableau_uniform(d, 9).unwrap(), sample_tableau_uniform(d, 9).unwrap());
        assert_eq!(sample_tableau_uniform(diag(4, 0), 3).unwrap().row_of, vec![1, 1, 1, 1]);
        for seed in 0..50 {
            sample_tableau_uniform(d, seed).unwrap();
        }
    }

    #[test]
    fn hadamard_probability() {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        assert!((hadamard_test_p0(a, a, 1.0) - 1.0).abs() < 1e-15);
        assert!((hadamard_test_p0(a, a, 0.0) - 0.5).abs() < 1e-15);
    }
}
