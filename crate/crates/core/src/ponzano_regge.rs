//! Ponzano-Regge amplitudes.
//!
//! A triangulated surface with a tree dual is a coupling tree; gluing a
//! tetrahedron on two adjacent triangles flips their shared edge, which is a
//! rotation of the dual tree. Flip cobordisms are therefore evaluated with the
//! recoupling engine. Closed manifolds are summed directly up to a cutoff.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::engine::{apply_plan, Move, MovePlan, Superposition};
use crate::error::{Error, Result};
use crate::numerics::{Rational, SurdSum, TwiceSpin};
use crate::recoupling::{recoupling_tensor, sixj, triangle_admissible, SixSpins, SpinTriple};
use crate::tree::{enumerate_labelings, Child, Direction, LabeledTree, Rotation, TreeShape};

/// Spins on the six edges of a tetrahedron, laid out as `{a b f; c e d}`;
/// the column pairs `(a,c)`, `(b,e)`, `(f,d)` are opposite edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TetLabels {
    pub a: TwiceSpin,
    pub b: TwiceSpin,
    pub f: TwiceSpin,
    pub c: TwiceSpin,
    pub e: TwiceSpin,
    pub d: TwiceSpin,
}

impl TetLabels {
    pub fn new(upper: [u32; 3], lower: [u32; 3]) -> Self {
        let s = SixSpins::new(upper, lower);
        TetLabels { a: s.a, b: s.b, f: s.f, c: s.c, e: s.e, d: s.d }
    }

    pub fn six_spins(&self) -> SixSpins {
        SixSpins { a: self.a, b: self.b, f: self.f, c: self.c, e: self.e, d: self.d }
    }
}

/// Boundary-to-boundary matrix element of one tetrahedron, in real form.
pub fn tet_matrix_element(t: TetLabels) -> SurdSum {
    recoupling_tensor(t.six_spins())
}

/// Rotation of the dual tree that flips the triangulation edge above node
/// `child`, i.e. the tree edge from `child` to its parent.
pub fn flip_to_rotation(shape: &TreeShape, child: usize) -> Result<Rotation> {
    let info = shape.layout();
    let node = info
        .get(child)
        .ok_or_else(|| Error::MalformedCobordism(format!("no internal edge above node {child}")))?;
    let parent = node
        .parent
        .ok_or_else(|| Error::MalformedCobordism(format!("node {child} is the root; there is no edge to flip")))?;
    let direction = if info[parent].left == Child::Node(child) { Direction::Right } else { Direction::Left };
    Ok(Rotation { node: parent, direction })
}

/// Move plan for a flip sequence; each entry names the node whose parent edge
/// is flipped, using the node ids current at that step.
pub fn flips_to_plan(start: &TreeShape, flips: &[usize]) -> Result<MovePlan> {
    let mut shape = start.clone();
    let mut moves = Vec::with_capacity(flips.len());
    for (i, &k) in flips.iter().enumerate() {
        let rot = flip_to_rotation(&shape, k)
            .map_err(|e| Error::MalformedCobordism(format!("flip {i}: {e}")))?;
        shape = shape
            .rotate(rot)
            .map_err(|e| Error::MalformedCobordism(format!("flip {i}: {e}")))?;
        moves.push(Move::Rotate(rot));
    }
    Ok(MovePlan { start: start.clone(), moves })
}

/// Two boundary triangulations, given by their dual trees, and the flips
/// that carry one to the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipCobordism {
    pub start_tree: LabeledTree,
    pub flips: Vec<usize>,
    pub end_tree: LabeledTree,
}

impl FlipCobordism {
    /// `{"start": tree, "flips": [ids], "end": tree}`.
    pub fn from_json(v: &Value) -> Result<FlipCobordism> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("cobordism must be a JSON object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "start" | "flips" | "end") {
                return Err(Error::Parse(format!("unknown field `{key}`")));
            }
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| Error::Parse(format!("missing field `{k}`")));
        let start_tree = LabeledTree::from_json(field("start")?).map_err(|e| prefix("start", e))?;
        let end_tree = LabeledTree::from_json(field("end")?).map_err(|e| prefix("end", e))?;
        let flips: Vec<usize> = serde_json::from_value(field("flips")?.clone())
            .map_err(|e| Error::Parse(format!("`flips`: {e}")))?;
        Ok(FlipCobordism { start_tree, flips, end_tree })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": self.start_tree.to_json(),
            "flips": self.flips,
            "end": self.end_tree.to_json(),
        })
    }
}

fn prefix(what: &str, e: Error) -> Error {
    match e {
        Error::Parse(s) => Error::Parse(format!("{what}: {s}")),
        Error::Domain(s) => Error::Domain(format!("{what}: {s}")),
        other => other,
    }
}

/// Exact amplitude of a flip cobordism.
pub fn flip_cobordism_amplitude(c: &FlipCobordism) -> Result<SurdSum> {
    if c.start_tree.leaf_spins != c.end_tree.leaf_spins {
        return Err(Error::MalformedCobordism("start and end boundaries carry different leaf spins".into()));
    }
    let plan = flips_to_plan(&c.start_tree.shape, &c.flips)?;
    let end_shape = plan.end_shape()?;
    if end_shape != c.end_tree.shape {
        return Err(Error::MalformedCobordism(format!(
            "flips lead to {end_shape}, but the end boundary is dual to {}",
            c.end_tree.shape
        )));
    }
    if c.start_tree.root_label() != c.end_tree.root_label() {
        return Ok(SurdSum::zero());
    }
    let out = apply_plan(&Superposition::basis(&c.start_tree), &plan, false)?;
    Ok(out.amplitude(&c.end_tree.labels))
}

/// Amplitude matrix of a flip sequence on the sector with fixed leaf spins and
/// total spin. Rows index end labelings, columns start labelings, both in
/// enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct FlipMatrix {
    pub start: Vec<LabeledTree>,
    pub end: Vec<LabeledTree>,
    pub entries: Vec<Vec<SurdSum>>,
}

pub fn flip_matrix(shape: &TreeShape, leaf_spins: &[TwiceSpin], root: TwiceSpin, flips: &[usize]) -> Result<FlipMatrix> {
    let plan = flips_to_plan(shape, flips)?;
    let end_shape = plan.end_shape()?;
    let start = enumerate_labelings(shape, leaf_spins, root);
    let end = enumerate_labelings(&end_shape, leaf_spins, root);
    let mut entries = vec![vec![SurdSum::zero(); start.len()]; end.len()];
    for (col, t) in start.iter().enumerate() {
        let out = apply_plan(&Superposition::basis(t), &plan, false)?;
        for (row, u) in end.iter().enumerate() {
            entries[row][col] = out.amplitude(&u.labels);
        }
    }
    Ok(FlipMatrix { start, end, entries })
}

/// Exact matrix product `a · b`.
pub fn matmul(a: &[Vec<SurdSum>], b: &[Vec<SurdSum>]) -> Vec<Vec<SurdSum>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = SurdSum::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Edge-slot triples of the four faces of a tetrahedron, as indices into its
/// `[a, b, f, c, e, d]` record.
pub const TET_FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [3, 1, 5], [3, 4, 2]];

/// Closed 3-manifold as tetrahedra with globally numbered edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedTriangulation {
    pub tets: Vec<[usize; 6]>,
    pub num_edges: usize,
    /// Pairs `((tet, face), (tet, face))`; face indices follow [`TET_FACES`].
    pub face_gluings: Vec<[(usize, usize); 2]>,
}

impl ClosedTriangulation {
    /// Checks that every face is glued exactly once, to a face with the same
    /// edges, and that every edge occurs.
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::MalformedTriangulation(s));
        if self.tets.is_empty() {
            return bad("no tetrahedra".into());
        }
        let mut used = vec![false; self.num_edges];
        for (t, tet) in self.tets.iter().enumerate() {
            for &e in tet {
                if e >= self.num_edges {
                    return bad(format!("tetrahedron {t} uses edge {e}, but there are {} edges", self.num_edges));
                }
                used[e] = true;
            }
        }
        if let Some(e) = used.iter().position(|u| !u) {
            return bad(format!("edge {e} belongs to no tetrahedron"));
        }
        let mut seen = vec![[false; 4]; self.tets.len()];
        for (g, pair) in self.face_gluings.iter().enumerate() {
            for &(t, f) in pair {
                if t >= self.tets.len() || f >= 4 {
                    return bad(format!("gluing {g} names missing face ({t}, {f})"));
                }
                if seen[t][f] {
                    return bad(format!("face ({t}, {f}) is glued more than once"));
                }
                seen[t][f] = true;
            }
            let [x, y] = *pair;
            if self.face_edges(x) != self.face_edges(y) {
                return bad(format!("gluing {g}: faces {x:?} and {y:?} have different edges"));
            }
        }
        for (t, faces) in seen.iter().enumerate() {
            if let Some(f) = faces.iter().position(|s| !s) {
                return bad(format!("face ({t}, {f}) is not glued; the triangulation is not closed"));
            }
        }
        Ok(())
    }

    fn face_edges(&self, (t, f): (usize, usize)) -> [usize; 3] {
        let mut e = TET_FACES[f].map(|slot| self.tets[t][slot]);
        e.sort_unstable();
        e
    }

    /// `{"tets": [[e1..e6]], "num_edges": n, "face_gluings": [[[t,f],[t,f]]]}`.
    pub fn from_json(v: &Value) -> Result<ClosedTriangulation> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            tets: Vec<[usize; 6]>,
            num_edges: usize,
            face_gluings: Vec<[(usize, usize); 2]>,
        }
        let d: Doc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let m = ClosedTriangulation { tets: d.tets, num_edges: d.num_edges, face_gluings: d.face_gluings };
        m.validate()?;
        Ok(m)
    }

    /// Two tetrahedra on the same six edges, glued face to face.
    pub fn two_tetrahedra() -> ClosedTriangulation {
        ClosedTriangulation {
            tets: vec![[0, 1, 2, 3, 4, 5], [0, 1, 2, 3, 4, 5]],
            num_edges: 6,
            face_gluings: (0..4).map(|f| [(0, f), (1, f)]).collect(),
        }
    }
}

/// Result of [`closed_amplitude_truncated`].
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSum {
    pub value: SurdSum,
    /// Some admissible labeling put an edge exactly at the cutoff.
    pub touched_cutoff: bool,
    /// Number of admissible labelings summed.
    pub labelings: u64,
}

struct ClosedPlan {
    /// Faces checkable once edge `k` is assigned, as global edge triples.
    ready: Vec<Vec<[usize; 3]>>,
    faces: Vec<[usize; 3]>,
}

impl ClosedPlan {
    fn new(m: &ClosedTriangulation) -> Self {
        let faces: Vec<[usize; 3]> = m.face_gluings.iter().map(|p| m.face_edges(p[0])).collect();
        let mut ready = vec![Vec::new(); m.num_edges];
        for tet in &m.tets {
            for f in TET_FACES {
                let e = f.map(|s| tet[s]);
                ready[*e.iter().max().unwrap()].push(e);
            }
        }
        ClosedPlan { ready, faces }
    }
}

fn admissible_at(plan: &ClosedPlan, labels: &[u32], k: usize) -> bool {
    plan.ready[k].iter().all(|&[x, y, z]| {
        triangle_admissible(SpinTriple { a: TwiceSpin(labels[x]), b: TwiceSpin(labels[y]), c: TwiceSpin(labels[z]) })
    })
}

fn weight(m: &ClosedTriangulation, plan: &ClosedPlan, labels: &[u32], cache: &mut HashMap<[u32; 6], SurdSum>) -> SurdSum {
    let mut negative = false;
    let mut dims = 1u64;
    let mut scale = Rational::from_integer(1.into());
    for &l in labels {
        negative ^= l % 2 == 1;
        dims = dims.saturating_mul(l as u64 + 1);
        if dims > u32::MAX as u64 {
            scale *= Rational::from_integer(dims.into());
            dims = 1;
        }
    }
    scale *= Rational::from_integer(dims.into());
    for f in &plan.faces {
        let s: u32 = f.iter().map(|&e| labels[e]).sum();
        negative ^= (s / 2) % 2 == 1;
    }
    let mut w = SurdSum::from_rational(scale).signed(negative);
    for tet in &m.tets {
        let key = tet.map(|e| labels[e]);
        let v = cache
            .entry(key)
            .or_insert_with(|| sixj(SixSpins::new([key[0], key[1], key[2]], [key[3], key[4], key[5]])))
            .clone();
        w = w * v;
        if w.is_zero() {
            break;
        }
    }
    w
}

struct Partial {
    value: SurdSum,
    touched: bool,
    count: u64,
}

fn sum_from(
    m: &ClosedTriangulation,
    plan: &ClosedPlan,
    cutoff: u32,
    labels: &mut Vec<u32>,
    cache: &mut HashMap<[u32; 6], SurdSum>,
    out: &mut Partial,
) {
    let k = labels.len();
    if k == m.num_edges {
        out.count += 1;
        out.touched |= labels.contains(&cutoff);
        let w = weight(m, plan, labels, cache);
        out.value += w;
        return;
    }
    for l in 0..=cutoff {
        labels.push(l);
        if admissible_at(plan, labels, k) {
            sum_from(m, plan, cutoff, labels, cache, out);
        }
        labels.pop();
    }
}

/// Ponzano-Regge state sum over labelings with every `2j ≤ cutoff`:
/// `Σ Π_edges (−1)^{2j}(2j+1) · Π_faces (−1)^{j1+j2+j3} · Π_tets {6j}`.
/// The work is split over the label of edge 0 and summed in that order.
pub fn closed_amplitude_truncated(m: &ClosedTriangulation, cutoff: TwiceSpin) -> Result<TruncatedSum> {
    m.validate()?;
    let plan = ClosedPlan::new(m);
    let parts: Vec<Partial> = (0..=cutoff.0)
        .into_par_iter()
        .map(|first| {
            let mut out = Partial { value: SurdSum::zero(), touched: false, count: 0 };
            let mut labels = vec![first];
            if admissible_at(&plan, &labels, 0) {
                sum_from(m, &plan, cutoff.0, &mut labels, &mut HashMap::new(), &mut out);
            }
            out
        })
        .collect();
    let mut total = TruncatedSum { value: SurdSum::zero(), touched_cutoff: false, labelings: 0 };
    for p in parts {
        total.value += p.value;
        total.touched_cutoff |= p.touched;
        total.labelings += p.count;
    }
    Ok(total)
}

/// Both sides of a 2-3 Pachner move with boundary spins `a … j`: three
/// tetrahedra sharing an internal edge `x`, against two tetrahedra sharing a
/// face. Edge, face and sign factors are those left after the shared
/// boundary factors cancel.
#[allow(clippy::too_many_arguments)]
pub fn pachner_two_three(
    a: TwiceSpin,
    b: TwiceSpin,
    c: TwiceSpin,
    d: TwiceSpin,
    e: TwiceSpin,
    f: TwiceSpin,
    g: TwiceSpin,
    h: TwiceSpin,
    j: TwiceSpin,
) -> (SurdSum, SurdSum) {
    let six = |u: [TwiceSpin; 3], l: [TwiceSpin; 3]| {
        sixj(SixSpins { a: u[0], b: u[1], f: u[2], c: l[0], e: l[1], d: l[2] })
    };
    let two = six([g, h, j], [e, a, d]) * six([g, h, j], [f, b, c]);
    let fixed = a.0 + b.0 + c.0 + d.0 + e.0 + f.0 + g.0 + h.0 + j.0;
    let lo = a.0.abs_diff(b.0).max(c.0.abs_diff(d.0)).max(e.0.abs_diff(f.0));
    let hi = (a.0 + b.0).min(c.0 + d.0).min(e.0 + f.0);
    let mut three = SurdSum::zero();
    let mut x = lo;
    while x <= hi {
        let x_spin = TwiceSpin(x);
        let term = six([a, b, x_spin], [c, d, g]) * six([c, d, x_spin], [e, f, h]) * six([e, f, x_spin], [b, a, j]);
        if !term.is_zero() {
            let negative = ((fixed + x) / 2) % 2 == 1;
            three += term.scale(&Rational::from_integer(x_spin.dim().into())).signed(negative);
        }
        x += 1;
    }
    (two, three)
}

/// Genus of a closed orientable surface from `V − E + F = 2 − 2g`.
pub fn genus(v: i64, e: i64, f: i64) -> Result<u64> {
    let chi = v - e + f;
    if chi > 2 || chi % 2 != 0 {
        return Err(Error::Domain(format!(
            "Euler characteristic {chi} is not that of a closed orientable surface"
        )));
    }
    Ok(((2 - chi) / 2) as u64)
}

/// Faces of the seven-vertex torus: vertices `0..7`, triangles
/// `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn seven_vertex_torus() -> Vec<[u32; 3]> {
    let mut faces = Vec::new();
    for i in 0..7u32 {
        faces.push([i, (i + 1) % 7, (i + 3) % 7]);
        faces.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    faces
}

/// `(V, E, F)` of a closed triangulated surface given by its faces.
pub fn surface_counts(faces: &[[u32; 3]]) -> (i64, i64, i64) {
    let mut verts = std::collections::BTreeSet::new();
    let mut edges: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for f in faces {
        for i in 0..3 {
            verts.insert(f[i]);
            let (x, y) = (f[i], f[(i + 1) % 3]);
            *edges.entry((x.min(y), x.max(y))).or_default() += 1;
        }
    }
    (verts.len() as i64, edges.len() as i64, faces.len() as i64)
}
