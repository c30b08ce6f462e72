//! Binary coupling trees.
//!
//! Leaves carry particle indices `1..=n` and their left-to-right order is
//! meaningful. Internal nodes are identified by in-order position: the
//! internal node sitting between leaf positions `k` and `k + 1` has id `k`.
//! Rotations never reorder leaves, so they only exchange the roles of the two
//! nodes involved and every other id stays put.

use std::fmt;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::numerics::{factorial, TwiceSpin};
use crate::recoupling::{triangle_admissible, SpinTriple};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(u32),
    Branch(Box<Node>, Box<Node>),
}

impl Node {
    pub fn join(left: Node, right: Node) -> Node {
        Node::Branch(Box::new(left), Box::new(right))
    }

    fn size(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Branch(l, r) => l.size() + r.size(),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Node::Leaf(i) => out.push(*i),
            Node::Branch(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }
}

/// Child of an internal node: either a leaf (by position) or an internal node
/// (by id).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Child {
    Leaf(usize),
    Node(usize),
}

/// Structural facts about one internal node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeInfo {
    /// First leaf position covered.
    pub lo: usize,
    /// Last leaf position covered.
    pub hi: usize,
    pub left: Child,
    pub right: Child,
    pub parent: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `((A,B),C) → (A,(B,C))`
    Right,
    /// `(A,(B,C)) → ((A,B),C)`
    Left,
}

/// A re-association at one internal node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rotation {
    pub node: usize,
    pub direction: Direction,
}

/// A full binary tree over distinct particle indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeShape {
    root: Node,
}

impl TreeShape {
    pub fn new(root: Node) -> Result<Self> {
        let shape = TreeShape { root };
        let mut leaves = shape.leaves();
        leaves.sort_unstable();
        if leaves.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
            return Err(Error::Domain(format!(
                "leaf indices must be a permutation of 1..={}",
                leaves.len()
            )));
        }
        Ok(shape)
    }

    /// Left comb `((…((l₁,l₂),l₃)…),lₙ)`.
    pub fn caterpillar(leaves: &[u32]) -> Self {
        assert!(!leaves.is_empty(), "a tree needs at least one leaf");
        let mut node = Node::Leaf(leaves[0]);
        for &l in &leaves[1..] {
            node = Node::join(node, Node::Leaf(l));
        }
        TreeShape { root: node }
    }

    /// Right comb `(l₁,(l₂,(…,lₙ)))`.
    pub fn right_comb(leaves: &[u32]) -> Self {
        assert!(!leaves.is_empty(), "a tree needs at least one leaf");
        let mut node = Node::Leaf(*leaves.last().unwrap());
        for &l in leaves[..leaves.len() - 1].iter().rev() {
            node = Node::join(Node::Leaf(l), node);
        }
        TreeShape { root: node }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn n(&self) -> usize {
        self.root.size()
    }

    /// Particle indices in left-to-right order.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n());
        self.root.collect_leaves(&mut out);
        out
    }

    /// In-order id of the root node, `None` for a single leaf.
    pub fn root_id(&self) -> Option<usize> {
        match &self.root {
            Node::Leaf(_) => None,
            Node::Branch(l, _) => Some(l.size() - 1),
        }
    }

    /// Per-node structure indexed by in-order id.
    pub fn layout(&self) -> Vec<NodeInfo> {
        fn walk(node: &Node, offset: usize, parent: Option<usize>, out: &mut Vec<Option<NodeInfo>>) -> Child {
            match node {
                Node::Leaf(_) => Child::Leaf(offset),
                Node::Branch(l, r) => {
                    let ls = l.size();
                    let id = offset + ls - 1;
                    let left = walk(l, offset, Some(id), out);
                    let right = walk(r, offset + ls, Some(id), out);
                    out[id] = Some(NodeInfo { lo: offset, hi: offset + ls + r.size() - 1, left, right, parent });
                    Child::Node(id)
                }
            }
        }
        let n = self.n();
        let mut out = vec![None; n.saturating_sub(1)];
        walk(&self.root, 0, None, &mut out);
        out.into_iter().map(|x| x.expect("every in-order slot is filled")).collect()
    }

    /// Left comb: every right child is a leaf.
    pub fn is_caterpillar(&self) -> bool {
        self.layout().iter().all(|info| matches!(info.right, Child::Leaf(_)))
    }

    fn edit_at<F>(&self, id: usize, f: F) -> Result<TreeShape>
    where
        F: FnOnce(Node) -> std::result::Result<Node, Node>,
    {
        fn go<F: FnOnce(Node) -> std::result::Result<Node, Node>>(
            node: Node,
            offset: usize,
            id: usize,
            f: F,
        ) -> std::result::Result<Node, Node> {
            match node {
                Node::Leaf(_) => Err(node),
                Node::Branch(l, r) => {
                    let here = offset + l.size() - 1;
                    if id == here {
                        f(Node::Branch(l, r))
                    } else if id < here {
                        let ls = l.size();
                        match go(*l, offset, id, f) {
                            Ok(nl) => Ok(Node::Branch(Box::new(nl), r)),
                            Err(ol) => {
                                debug_assert_eq!(ol.size(), ls);
                                Err(Node::Branch(Box::new(ol), r))
                            }
                        }
                    } else {
                        let off = offset + l.size();
                        match go(*r, off, id, f) {
                            Ok(nr) => Ok(Node::Branch(l, Box::new(nr))),
                            Err(or) => Err(Node::Branch(l, Box::new(or))),
                        }
                    }
                }
            }
        }
        if id + 1 >= self.n() {
            return Err(Error::PlanMismatch(format!("no internal node {id}")));
        }
        go(self.root.clone(), 0, id, f)
            .map(|root| TreeShape { root })
            .map_err(|_| Error::PlanMismatch(format!("move not applicable at node {id}")))
    }

    /// Applies a rotation, failing when the needed child is a leaf.
    pub fn rotate(&self, rot: Rotation) -> Result<TreeShape> {
        self.edit_at(rot.node, |node| match (rot.direction, node) {
            (Direction::Right, Node::Branch(l, c)) => match *l {
                Node::Branch(a, b) => Ok(Node::Branch(a, Box::new(Node::Branch(b, c)))),
                leaf => Err(Node::Branch(Box::new(leaf), c)),
            },
            (Direction::Left, Node::Branch(a, r)) => match *r {
                Node::Branch(b, c) => Ok(Node::Branch(Box::new(Node::Branch(a, b)), c)),
                leaf => Err(Node::Branch(a, Box::new(leaf))),
            },
            (_, leaf) => Err(leaf),
        })
    }

    /// Exchanges the two children of an internal node.
    pub fn swap_children(&self, id: usize) -> Result<TreeShape> {
        self.edit_at(id, |node| match node {
            Node::Branch(l, r) => Ok(Node::Branch(r, l)),
            leaf => Err(leaf),
        })
    }

    /// Id of the node that sits on top after `rot` is applied.
    pub(crate) fn rotation_partner(&self, rot: Rotation) -> Result<usize> {
        let info = self.layout();
        let node = info
            .get(rot.node)
            .ok_or_else(|| Error::PlanMismatch(format!("no internal node {}", rot.node)))?;
        match (rot.direction, node.left, node.right) {
            (Direction::Right, Child::Node(x), _) => Ok(x),
            (Direction::Left, _, Child::Node(y)) => Ok(y),
            _ => Err(Error::PlanMismatch(format!("rotation not applicable at node {}", rot.node))),
        }
    }

    /// Nested-array form, e.g. `[[1,2],3]`.
    pub fn to_nested(&self) -> Value {
        fn go(node: &Node) -> Value {
            match node {
                Node::Leaf(i) => json!(i),
                Node::Branch(l, r) => Value::Array(vec![go(l), go(r)]),
            }
        }
        go(&self.root)
    }

    pub fn from_nested(v: &Value) -> Result<TreeShape> {
        fn go(v: &Value) -> Result<Node> {
            match v {
                Value::Number(n) => n
                    .as_u64()
                    .filter(|&i| i >= 1 && i <= u32::MAX as u64)
                    .map(|i| Node::Leaf(i as u32))
                    .ok_or_else(|| Error::Parse(format!("leaf index must be a positive integer, got {n}"))),
                Value::Array(items) if items.len() == 2 => Ok(Node::join(go(&items[0])?, go(&items[1])?)),
                other => Err(Error::Parse(format!("shape node must be a leaf index or a pair, got {other}"))),
            }
        }
        TreeShape::new(go(v)?)
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(node: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match node {
                Node::Leaf(i) => write!(f, "{i}"),
                Node::Branch(l, r) => {
                    write!(f, "(")?;
                    go(l, f)?;
                    write!(f, ",")?;
                    go(r, f)?;
                    write!(f, ")")
                }
            }
        }
        go(&self.root, f)
    }
}

/// A basis state: a tree shape with spins on leaves and internal nodes.
///
/// `labels[k]` is the total spin of the subtree under internal node `k`; the
/// root's entry is the total spin `J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    pub shape: TreeShape,
    /// Indexed by particle index − 1.
    pub leaf_spins: Vec<TwiceSpin>,
    pub labels: Vec<TwiceSpin>,
}

impl LabeledTree {
    /// Tree with spin-1/2 leaves.
    pub fn new(shape: TreeShape, labels: Vec<TwiceSpin>) -> Result<Self> {
        let n = shape.n();
        LabeledTree::with_leaf_spins(shape, vec![TwiceSpin::HALF; n], labels)
    }

    pub fn with_leaf_spins(shape: TreeShape, leaf_spins: Vec<TwiceSpin>, labels: Vec<TwiceSpin>) -> Result<Self> {
        let n = shape.n();
        if leaf_spins.len() != n {
            return Err(Error::Domain(format!("expected {n} leaf spins, got {}", leaf_spins.len())));
        }
        if labels.len() != n - 1 {
            return Err(Error::Domain(format!("expected {} internal labels, got {}", n - 1, labels.len())));
        }
        Ok(LabeledTree { shape, leaf_spins, labels })
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn root_label(&self) -> TwiceSpin {
        match self.shape.root_id() {
            Some(id) => self.labels[id],
            None => self.leaf_spins[self.shape.leaves()[0] as usize - 1],
        }
    }

    pub(crate) fn child_label(&self, leaves: &[u32], child: Child) -> TwiceSpin {
        child_label(&self.leaf_spins, leaves, &self.labels, child)
    }

    /// First inadmissible node, as `(id, info)`.
    pub fn first_violation(&self) -> Option<(usize, NodeInfo)> {
        let leaves = self.shape.leaves();
        self.shape.layout().into_iter().enumerate().find(|(id, info)| {
            let t = SpinTriple {
                a: self.child_label(&leaves, info.left),
                b: self.child_label(&leaves, info.right),
                c: self.labels[*id],
            };
            !triangle_admissible(t)
        })
    }

    pub fn to_json(&self) -> Value {
        let leaves = self.shape.leaves();
        let mut spins = Map::new();
        let mut sorted = leaves.clone();
        sorted.sort_unstable();
        for l in sorted {
            spins.insert(l.to_string(), json!(self.leaf_spins[l as usize - 1].0));
        }
        let root_id = self.shape.root_id();
        let mut labels = Map::new();
        for (id, lab) in self.labels.iter().enumerate() {
            if Some(id) != root_id {
                labels.insert(id.to_string(), json!(lab.0));
            }
        }
        json!({
            "leaves": leaves,
            "shape": self.shape.to_nested(),
            "leaf_spins": spins,
            "labels": labels,
            "root": self.root_label().0,
        })
    }

    /// Parses the tree document format and checks admissibility.
    pub fn from_json(v: &Value) -> Result<LabeledTree> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("tree must be a JSON object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "leaves" | "shape" | "leaf_spins" | "labels" | "root") {
                return Err(Error::Parse(format!("unknown field `{key}`")));
            }
        }
        let shape_v = obj.get("shape").ok_or_else(|| Error::Parse("missing field `shape`".into()))?;
        let shape = TreeShape::from_nested(shape_v)?;
        let n = shape.n();
        let order = shape.leaves();
        if let Some(lv) = obj.get("leaves") {
            let listed: Vec<u32> = serde_json::from_value(lv.clone())
                .map_err(|e| Error::Parse(format!("`leaves`: {e}")))?;
            if listed != order {
                return Err(Error::Parse(format!("`leaves` {listed:?} disagrees with shape order {order:?}")));
            }
        }
        let mut leaf_spins = vec![TwiceSpin::HALF; n];
        if let Some(sv) = obj.get("leaf_spins") {
            let m = sv.as_object().ok_or_else(|| Error::Parse("`leaf_spins` must be an object".into()))?;
            for (k, val) in m {
                let leaf: usize = k.parse().map_err(|_| Error::Parse(format!("bad leaf key `{k}`")))?;
                if leaf == 0 || leaf > n {
                    return Err(Error::Parse(format!("leaf_spins names unknown leaf {leaf}")));
                }
                leaf_spins[leaf - 1] = TwiceSpin(parse_twice(val, &format!("leaf_spins.{k}"))?);
            }
        }
        let root = TwiceSpin(parse_twice(
            obj.get("root").ok_or_else(|| Error::Parse("missing field `root`".into()))?,
            "root",
        )?);
        let root_id = shape.root_id();
        let mut labels: Vec<Option<TwiceSpin>> = vec![None; n.saturating_sub(1)];
        if let Some(id) = root_id {
            labels[id] = Some(root);
        }
        if let Some(lv) = obj.get("labels") {
            let m = lv.as_object().ok_or_else(|| Error::Parse("`labels` must be an object".into()))?;
            for (k, val) in m {
                let id: usize = k.parse().map_err(|_| Error::Parse(format!("bad edge id `{k}`")))?;
                if id >= labels.len() || Some(id) == root_id {
                    return Err(Error::Parse(format!("`labels` names unknown internal edge {id}")));
                }
                labels[id] = Some(TwiceSpin(parse_twice(val, &format!("labels.{k}"))?));
            }
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(id, l)| l.ok_or_else(|| Error::Parse(format!("missing label for internal edge {id}"))))
            .collect::<Result<Vec<_>>>()?;
        if root_id.is_none() && root != leaf_spins[order[0] as usize - 1] {
            return Err(Error::Domain("root: a single leaf tree has root equal to its leaf spin".into()));
        }
        let tree = LabeledTree { shape, leaf_spins, labels };
        if let Some((id, info)) = tree.first_violation() {
            let name = if Some(id) == root_id { "root".to_string() } else { format!("node {id}") };
            let t = (
                tree.child_label(&order, info.left),
                tree.child_label(&order, info.right),
                tree.labels[id],
            );
            return Err(Error::Domain(format!(
                "{name} (leaf positions {}..{}): ({}, {}, {}) violates angular momentum addition",
                info.lo, info.hi, t.0 .0, t.1 .0, t.2 .0
            )));
        }
        Ok(tree)
    }
}

fn parse_twice(v: &Value, path: &str) -> Result<u32> {
    v.as_u64()
        .filter(|&x| x <= u32::MAX as u64)
        .map(|x| x as u32)
        .ok_or_else(|| Error::Parse(format!("`{path}` must be a non-negative twice-spin integer")))
}

pub(crate) fn child_label(leaf_spins: &[TwiceSpin], leaves: &[u32], labels: &[TwiceSpin], child: Child) -> TwiceSpin {
    match child {
        Child::Leaf(pos) => leaf_spins[leaves[pos] as usize - 1],
        Child::Node(id) => labels[id],
    }
}

/// True iff every internal node's triple is admissible.
pub fn validate_labeling(t: &LabeledTree) -> bool {
    t.labels.len() + 1 == t.n() && t.first_violation().is_none()
}

/// Number of binary tree shapes on `n` ordered leaves, the Catalan number `C_{n−1}`.
pub fn count_tree_shapes(n: usize) -> BigUint {
    assert!(n >= 1, "n must be positive");
    let m = n - 1;
    factorial(2 * m) / (factorial(m + 1) * factorial(m))
}

/// Every shape over the given leaf order.
pub fn enumerate_shapes(leaves: &[u32]) -> Vec<TreeShape> {
    fn go(leaves: &[u32]) -> Vec<Node> {
        if leaves.len() == 1 {
            return vec![Node::Leaf(leaves[0])];
        }
        let mut out = Vec::new();
        for split in 1..leaves.len() {
            let lefts = go(&leaves[..split]);
            let rights = go(&leaves[split..]);
            for l in &lefts {
                for r in &rights {
                    out.push(Node::join(l.clone(), r.clone()));
                }
            }
        }
        out
    }
    go(leaves).into_iter().map(|root| TreeShape { root }).collect()
}

/// All admissible labelings of `shape` with total spin `root`, in
/// lexicographic order of the internal label vector.
pub fn enumerate_labelings(shape: &TreeShape, leaf_spins: &[TwiceSpin], root: TwiceSpin) -> Vec<LabeledTree> {
    let n = shape.n();
    assert_eq!(leaf_spins.len(), n, "one spin per leaf");
    let Some(root_id) = shape.root_id() else {
        let only = leaf_spins[shape.leaves()[0] as usize - 1];
        return if only == root {
            vec![LabeledTree { shape: shape.clone(), leaf_spins: leaf_spins.to_vec(), labels: vec![] }]
        } else {
            vec![]
        };
    };
    let leaves = shape.leaves();
    let info = shape.layout();
    // Largest label reachable under each node and its parity.
    let spin_sum: Vec<u32> = info
        .iter()
        .map(|i| (i.lo..=i.hi).map(|p| leaf_spins[leaves[p] as usize - 1].0).sum())
        .collect();
    // Node k can be checked once every id in {k, children} is assigned.
    let mut ready_at: Vec<Vec<usize>> = vec![Vec::new(); n - 1];
    for (k, i) in info.iter().enumerate() {
        let mut last = k;
        for c in [i.left, i.right] {
            if let Child::Node(id) = c {
                last = last.max(id);
            }
        }
        ready_at[last].push(k);
    }

    let mut labels = vec![TwiceSpin::ZERO; n - 1];
    struct Ctx<'a> {
        leaf_spins: &'a [TwiceSpin],
        leaves: &'a [u32],
        info: &'a [NodeInfo],
        spin_sum: &'a [u32],
        ready_at: &'a [Vec<usize>],
        root_id: usize,
        root: TwiceSpin,
    }
    fn backtrack(k: usize, ctx: &Ctx, labels: &mut Vec<TwiceSpin>, out: &mut Vec<Vec<TwiceSpin>>) {
        let Ctx { leaf_spins, leaves, info, spin_sum, ready_at, root_id, root } = *ctx;
        if k == labels.len() {
            out.push(labels.clone());
            return;
        }
        let candidates: Vec<u32> = if k == root_id {
            vec![root.0]
        } else {
            (spin_sum[k] % 2..=spin_sum[k]).step_by(2).collect()
        };
        for c in candidates {
            labels[k] = TwiceSpin(c);
            let ok = ready_at[k].iter().all(|&node| {
                let i = info[node];
                triangle_admissible(SpinTriple {
                    a: child_label(leaf_spins, leaves, labels, i.left),
                    b: child_label(leaf_spins, leaves, labels, i.right),
                    c: labels[node],
                })
            });
            if ok {
                backtrack(k + 1, ctx, labels, out);
            }
        }
    }
    let mut raw = Vec::new();
    let ctx = Ctx {
        leaf_spins,
        leaves: &leaves,
        info: &info,
        spin_sum: &spin_sum,
        ready_at: &ready_at,
        root_id,
        root,
    };
    backtrack(0, &ctx, &mut labels, &mut raw);
    raw.into_iter()
        .map(|labels| LabeledTree { shape: shape.clone(), leaf_spins: leaf_spins.to_vec(), labels })
        .collect()
}

/// Rotations taking `shape` to the left comb over the same leaf order.
///
/// Each step is a left rotation at the highest spine node whose right child
/// is internal; every step moves one node onto the left spine, so the plan
/// has at most `n − 2` moves.
pub fn rotation_plan_to_caterpillar(shape: &TreeShape) -> Vec<Rotation> {
    let mut plan = Vec::new();
    let mut current = shape.clone();
    loop {
        let info = current.layout();
        let Some(mut id) = current.root_id() else { break };
        let target = loop {
            let node = info[id];
            if let Child::Node(_) = node.right {
                break Some(id);
            }
            match node.left {
                Child::Node(next) => id = next,
                Child::Leaf(_) => break None,
            }
        };
        let Some(node) = target else { break };
        let rot = Rotation { node, direction: Direction::Left };
        current = current.rotate(rot).expect("right child is internal");
        plan.push(rot);
    }
    plan
}

/// Inverts a rotation plan that is valid starting from `shape`.
pub fn invert_rotation_plan(shape: &TreeShape, plan: &[Rotation]) -> Result<Vec<Rotation>> {
    let mut current = shape.clone();
    let mut inverse = Vec::with_capacity(plan.len());
    for &rot in plan {
        let partner = current.rotation_partner(rot)?;
        let back = match rot.direction {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
        };
        inverse.push(Rotation { node: partner, direction: back });
        current = current.rotate(rot)?;
    }
    inverse.reverse();
    Ok(inverse)
}
