//! Dynamic program over a nice tree decomposition computing the largest
//! minimal edge dominating set.
//!
//! Every vertex gets one of five colors describing its role in the star
//! forest induced by the solution: black vertices are untouched, purple ones
//! are endpoints of an isolated solution edge, green ones are star centers
//! and red ones are star leaves. A red leaf needs an untouched neighbour to
//! own a private edge; `R0` means none has been seen yet and `R1` means one
//! has.

use std::fmt;
use std::hash::BuildHasherDefault;

use indexmap::IndexMap;
use rustc_hash::{FxHashMap, FxHasher};
use thiserror::Error;

use crate::decomp::{validate_nice, NiceDecomposition, NiceViolation, NodeKind};
use crate::graph::{EdgeSet, Graph};

/// Largest bag a [`BagState`] can hold.
pub const MAX_BAG: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    B,
    P,
    G,
    R0,
    R1,
}

impl Color {
    pub const ALL: [Color; 5] = [Color::B, Color::P, Color::G, Color::R0, Color::R1];

    fn from_bits(bits: u8) -> Color {
        Color::ALL[bits as usize]
    }

    pub fn is_red(self) -> bool {
        matches!(self, Color::R0 | Color::R1)
    }

    /// Whether a vertex of this color with `y` incident solution edges is
    /// consistent once all its edges are known.
    pub fn satisfied(self, y: u8) -> bool {
        match self {
            Color::B => y == 0,
            Color::G => y >= 2,
            Color::P | Color::R0 | Color::R1 => y == 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Color::B => "b",
            Color::P => "p",
            Color::G => "g",
            Color::R0 => "r0",
            Color::R1 => "r1",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn allowed_pair(a: Color, b: Color) -> bool {
    matches!(
        (a, b),
        (Color::P, Color::P)
            | (Color::G, Color::R0)
            | (Color::G, Color::R1)
            | (Color::R0, Color::G)
            | (Color::R1, Color::G)
    )
}

const SLOT_BITS: u32 = 5;
const SLOT_MASK: u128 = 0b11111;

/// Colors and saturated incidence counts (0, 1 or 2 meaning two or more) of
/// the bag vertices, packed by position in the sorted bag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BagState(u128);

impl BagState {
    pub fn get(self, i: usize) -> (Color, u8) {
        let slot = (self.0 >> (SLOT_BITS * i as u32)) & SLOT_MASK;
        (Color::from_bits((slot & 0b111) as u8), (slot >> 3) as u8)
    }

    pub fn color(self, i: usize) -> Color {
        self.get(i).0
    }

    pub fn y(self, i: usize) -> u8 {
        self.get(i).1
    }

    fn encode(c: Color, y: u8) -> u128 {
        (c as u128) | ((y.min(2) as u128) << 3)
    }

    pub fn set(&mut self, i: usize, c: Color, y: u8) {
        let shift = SLOT_BITS * i as u32;
        self.0 = (self.0 & !(SLOT_MASK << shift)) | (Self::encode(c, y) << shift);
    }

    /// Opens a slot at position `i`, moving later slots up.
    pub fn insert(self, i: usize, c: Color, y: u8) -> BagState {
        let shift = SLOT_BITS * i as u32;
        let low = self.0 & ((1u128 << shift) - 1);
        let high = (self.0 >> shift) << (shift + SLOT_BITS);
        BagState(low | (Self::encode(c, y) << shift) | high)
    }

    /// Closes the slot at position `i`.
    pub fn remove(self, i: usize) -> BagState {
        let shift = SLOT_BITS * i as u32;
        let low = self.0 & ((1u128 << shift) - 1);
        let high = (self.0 >> (shift + SLOT_BITS)) << shift;
        BagState(low | high)
    }

    /// Same state with the red flags and incidence counts erased; two states
    /// can be joined only if these agree.
    fn join_key(self, len: usize) -> u128 {
        let mut key = 0u128;
        for i in 0..len {
            let c = match self.color(i) {
                Color::R1 => Color::R0,
                c => c,
            };
            key |= (c as u128) << (3 * i);
        }
        key
    }

    pub fn entries(self, len: usize) -> Vec<(Color, u8)> {
        (0..len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BagState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BagState({:#x})", self.0)
    }
}

/// One true entry of a node table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DpTuple {
    pub state: BagState,
    pub n_r: u32,
    pub n_r1: u32,
    pub n_c: u32,
    pub alpha: u32,
    pub beta: u32,
}

/// Which child tuple(s) produced a tuple, for witness recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Leaf,
    From(usize),
    /// Produced by an introduce-edge node that put its edge in the solution.
    Include(usize),
    Join(usize, usize),
}

type FxIndexMap<K, V> = IndexMap<K, V, BuildHasherDefault<FxHasher>>;

#[derive(Debug, Clone, Default)]
pub struct NodeTable {
    pub bag: Vec<usize>,
    tuples: FxIndexMap<DpTuple, Origin>,
}

impl NodeTable {
    fn new(bag: Vec<usize>) -> Self {
        NodeTable {
            bag,
            tuples: FxIndexMap::default(),
        }
    }

    fn add(&mut self, t: DpTuple, origin: Origin) {
        self.tuples.entry(t).or_insert(origin);
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &DpTuple) -> bool {
        self.tuples.contains_key(t)
    }

    pub fn tuple(&self, i: usize) -> (&DpTuple, &Origin) {
        self.tuples.get_index(i).expect("tuple index in range")
    }

    pub fn iter(&self) -> impl Iterator<Item = &DpTuple> {
        self.tuples.keys()
    }

    fn position(&self, v: usize) -> Result<usize, DpError> {
        self.bag.binary_search(&v).map_err(|_| DpError::BagMismatch(format!(
            "vertex {} is not in bag {:?}",
            v + 1,
            self.bag.iter().map(|x| x + 1).collect::<Vec<_>>()
        )))
    }
}

impl PartialEq for NodeTable {
    fn eq(&self, other: &Self) -> bool {
        self.bag == other.bag
            && self.tuples.len() == other.tuples.len()
            && self.tuples.keys().all(|t| other.tuples.contains_key(t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("invalid decomposition: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidDecomposition(Vec<NiceViolation>),
    #[error("bag mismatch: {0}")]
    BagMismatch(String),
    #[error("bag of {0} vertices exceeds the supported maximum of {MAX_BAG}")]
    BagTooLarge(usize),
    #[error("no accepting tuple at the root")]
    NoFeasibleTuple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    /// Drop tuples that can no longer be accepted as early as possible.
    pub prune: bool,
    /// Mark a red vertex as covered when an edge to a black vertex appears.
    /// Only ever turned off to check that the test suite notices.
    pub red_upgrade: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            prune: true,
            red_upgrade: true,
        }
    }
}

fn overfull(c: Color, y: u8) -> bool {
    match c {
        Color::B => y > 0,
        Color::P | Color::R0 | Color::R1 => y > 1,
        Color::G => false,
    }
}

pub fn dp_leaf() -> NodeTable {
    let mut t = NodeTable::new(Vec::new());
    t.add(
        DpTuple {
            state: BagState::default(),
            n_r: 0,
            n_r1: 0,
            n_c: 0,
            alpha: 0,
            beta: 0,
        },
        Origin::Leaf,
    );
    t
}

pub fn dp_introduce_vertex(child: &NodeTable, v: usize) -> Result<NodeTable, DpError> {
    let pos = match child.bag.binary_search(&v) {
        Ok(_) => {
            return Err(DpError::BagMismatch(format!(
                "vertex {} is already in the bag",
                v + 1
            )))
        }
        Err(p) => p,
    };
    if child.bag.len() + 1 > MAX_BAG {
        return Err(DpError::BagTooLarge(child.bag.len() + 1));
    }
    let mut bag = child.bag.clone();
    bag.insert(pos, v);
    let mut out = NodeTable::new(bag);
    for (i, t) in child.tuples.keys().enumerate() {
        for c in [Color::B, Color::P, Color::G, Color::R0] {
            out.add(
                DpTuple {
                    state: t.state.insert(pos, c, 0),
                    n_r: t.n_r + (c == Color::R0) as u32,
                    ..*t
                },
                Origin::From(i),
            );
        }
    }
    Ok(out)
}

pub fn dp_introduce_edge(
    child: &NodeTable,
    u: usize,
    v: usize,
    opts: DpOptions,
) -> Result<NodeTable, DpError> {
    let (iu, iv) = (child.position(u)?, child.position(v)?);
    let mut out = NodeTable::new(child.bag.clone());
    for (i, t) in child.tuples.keys().enumerate() {
        let (cu, yu) = t.state.get(iu);
        let (cv, yv) = t.state.get(iv);

        let mut ex = *t;
        if cu == Color::B && cv == Color::B {
            ex.beta += 1;
        }
        if opts.red_upgrade {
            if cu == Color::R0 && cv == Color::B {
                ex.state.set(iu, Color::R1, yu);
                ex.n_r1 += 1;
            } else if cv == Color::R0 && cu == Color::B {
                ex.state.set(iv, Color::R1, yv);
                ex.n_r1 += 1;
            }
        }
        if !(opts.prune && ex.beta > 0) {
            out.add(ex, Origin::From(i));
        }

        if allowed_pair(cu, cv) {
            let (nu, nv) = ((yu + 1).min(2), (yv + 1).min(2));
            if opts.prune && (overfull(cu, nu) || overfull(cv, nv)) {
                continue;
            }
            let mut inc = *t;
            inc.state.set(iu, cu, nu);
            inc.state.set(iv, cv, nv);
            inc.alpha += 1;
            out.add(inc, Origin::Include(i));
        }
    }
    Ok(out)
}

pub fn dp_forget(child: &NodeTable, v: usize, opts: DpOptions) -> Result<NodeTable, DpError> {
    let pos = child.position(v)?;
    let mut bag = child.bag.clone();
    bag.remove(pos);
    let mut out = NodeTable::new(bag);
    for (i, t) in child.tuples.keys().enumerate() {
        let (c, y) = t.state.get(pos);
        if !c.satisfied(y) || (opts.prune && c == Color::R0) {
            continue;
        }
        out.add(
            DpTuple {
                state: t.state.remove(pos),
                n_c: t.n_c + 1,
                ..*t
            },
            Origin::From(i),
        );
    }
    Ok(out)
}

pub fn dp_join(left: &NodeTable, right: &NodeTable, opts: DpOptions) -> Result<NodeTable, DpError> {
    if left.bag != right.bag {
        return Err(DpError::BagMismatch(format!(
            "join children have bags {:?} and {:?}",
            left.bag, right.bag
        )));
    }
    let len = left.bag.len();
    let mut by_key: FxHashMap<u128, Vec<usize>> = FxHashMap::default();
    for (j, t) in right.tuples.keys().enumerate() {
        by_key.entry(t.state.join_key(len)).or_default().push(j);
    }
    let mut out = NodeTable::new(left.bag.clone());
    for (i, a) in left.tuples.keys().enumerate() {
        let Some(matches) = by_key.get(&a.state.join_key(len)) else {
            continue;
        };
        'pair: for &j in matches {
            let b = right.tuple(j).0;
            let mut state = BagState::default();
            let (mut red, mut both_r1) = (0, 0);
            for p in 0..len {
                let (ca, ya) = a.state.get(p);
                let (cb, yb) = b.state.get(p);
                let c = if ca == Color::R1 || cb == Color::R1 { Color::R1 } else { ca };
                let y = (ya + yb).min(2);
                if opts.prune && overfull(c, y) {
                    continue 'pair;
                }
                red += c.is_red() as u32;
                both_r1 += (ca == Color::R1 && cb == Color::R1) as u32;
                state.set(p, c, y);
            }
            let t = DpTuple {
                state,
                n_r: a.n_r + b.n_r - red,
                n_r1: a.n_r1 + b.n_r1 - both_r1,
                n_c: a.n_c + b.n_c,
                alpha: a.alpha + b.alpha,
                beta: a.beta + b.beta,
            };
            out.add(t, Origin::Join(i, j));
        }
    }
    Ok(out)
}

/// Upper bound on the number of distinct tuples at a node of a decomposition
/// of the given width, saturating at `u128::MAX`.
pub fn table_size_bound(width: usize, n: usize, m: usize) -> u128 {
    let mut b: u128 = 1;
    for _ in 0..=width {
        b = b.saturating_mul(15);
    }
    for _ in 0..3 {
        b = b.saturating_mul(n as u128 + 1);
    }
    for _ in 0..2 {
        b = b.saturating_mul(m as u128 + 1);
    }
    b
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct NodeStat {
    /// 1-indexed, as in the nice decomposition text format.
    pub node: usize,
    pub kind: &'static str,
    pub tuples: usize,
}

#[derive(Debug, Clone)]
pub struct DpRun {
    pub gamma_prime: usize,
    pub width: usize,
    pub stats: Vec<NodeStat>,
    pub max_table: usize,
    pub tables: Vec<NodeTable>,
    /// Index of the chosen accepting tuple in the root table.
    pub best: usize,
    root: usize,
}

impl DpRun {
    pub fn diagnostics(&self) -> String {
        let mut out = String::new();
        for s in &self.stats {
            out.push_str(&format!("node={} type={} tuples={}\n", s.node, s.kind, s.tuples));
        }
        out.push_str(&format!("gamma_prime={}\n", self.gamma_prime));
        out
    }
}

/// Number of edges at each bag vertex introduced somewhere below `x`.
fn edges_seen(nd: &NiceDecomposition, x: usize, seen: &[Vec<usize>]) -> Vec<usize> {
    let node = &nd.nodes[x];
    let from = |c: usize, v: usize| {
        let child = &nd.nodes[c];
        child.bag.binary_search(&v).map_or(0, |i| seen[c][i])
    };
    node.bag
        .iter()
        .map(|&v| match node.kind {
            NodeKind::Leaf => 0,
            NodeKind::IntroduceEdge { u, v: w, .. } => from(node.children[0], v) + (v == u || v == w) as usize,
            NodeKind::Join => from(node.children[0], v) + from(node.children[1], v),
            _ => from(node.children[0], v),
        })
        .collect()
}

/// Whether a bag vertex can still meet its color condition when `remaining`
/// of its edges are yet to be introduced.
fn still_possible(c: Color, y: u8, remaining: usize) -> bool {
    let need = match c {
        Color::B => return y == 0,
        Color::P | Color::R1 => 1,
        Color::G => 2,
        // One more edge to a black neighbour, which cannot be a solution edge.
        Color::R0 => 2,
    };
    y as usize + remaining >= need
}

/// Drops tuples in which some bag vertex can no longer meet its color
/// condition, and among tuples that agree on everything the future can see
/// keeps the first one with the largest `alpha`.
fn reduce(table: &NodeTable, remaining: &[usize]) -> NodeTable {
    type Key = (BagState, u32, u32, u32);
    let mut best: FxIndexMap<Key, (DpTuple, Origin)> = FxIndexMap::default();
    'tuples: for (t, &origin) in &table.tuples {
        let mut t = *t;
        for (i, &r) in remaining.iter().enumerate() {
            let (c, y) = t.state.get(i);
            if !still_possible(c, y, r) {
                continue 'tuples;
            }
            // A finished vertex no longer influences anything above.
            if r == 0 {
                t.state.set(i, Color::B, 0);
            }
        }
        let key = (t.state, t.n_r - t.n_r1, t.n_c, t.beta);
        match best.get_mut(&key) {
            Some(slot) if slot.0.alpha >= t.alpha => {}
            Some(slot) => *slot = (t, origin),
            None => {
                best.insert(key, (t, origin));
            }
        }
    }
    let mut out = NodeTable::new(table.bag.clone());
    for (t, origin) in best.into_values() {
        out.add(t, origin);
    }
    out
}

fn evaluation_order(nd: &NiceDecomposition) -> Vec<usize> {
    let mut order = Vec::with_capacity(nd.len());
    let mut stack = vec![(nd.root, false)];
    while let Some((x, expanded)) = stack.pop() {
        if expanded {
            order.push(x);
        } else {
            stack.push((x, true));
            for &c in nd.nodes[x].children.iter().rev() {
                stack.push((c, false));
            }
        }
    }
    order
}

pub fn run_dp(g: &Graph, nd: &NiceDecomposition, opts: DpOptions) -> Result<DpRun, DpError> {
    let violations = validate_nice(g, nd);
    if !violations.is_empty() {
        return Err(DpError::InvalidDecomposition(violations));
    }
    let width = nd.width();
    if width + 1 > MAX_BAG {
        return Err(DpError::BagTooLarge(width + 1));
    }
    let mut tables: Vec<Option<NodeTable>> = vec![None; nd.len()];
    let mut seen: Vec<Vec<usize>> = vec![Vec::new(); nd.len()];
    let mut stats = Vec::with_capacity(nd.len());
    for x in evaluation_order(nd) {
        let node = &nd.nodes[x];
        let child = |i: usize| tables[node.children[i]].as_ref().expect("children evaluated first");
        let mut table = match node.kind {
            NodeKind::Leaf => dp_leaf(),
            NodeKind::IntroduceVertex(v) => dp_introduce_vertex(child(0), v)?,
            NodeKind::IntroduceEdge { u, v, .. } => dp_introduce_edge(child(0), u, v, opts)?,
            NodeKind::Forget(v) => dp_forget(child(0), v, opts)?,
            NodeKind::Join => dp_join(child(0), child(1), opts)?,
        };
        seen[x] = edges_seen(nd, x, &seen);
        if opts.prune {
            let remaining: Vec<usize> = node
                .bag
                .iter()
                .zip(&seen[x])
                .map(|(&v, &s)| g.degree(v) - s)
                .collect();
            table = reduce(&table, &remaining);
        }
        stats.push(NodeStat {
            node: x + 1,
            kind: node.kind.name(),
            tuples: table.len(),
        });
        tables[x] = Some(table);
    }
    let tables: Vec<NodeTable> = tables.into_iter().map(|t| t.unwrap_or_default()).collect();
    let n = g.n() as u32;
    let mut best: Option<(usize, u32)> = None;
    for (i, t) in tables[nd.root].iter().enumerate() {
        let accepted = t.n_r == t.n_r1 && t.n_c == n && t.beta == 0;
        if accepted && best.is_none_or(|(_, a)| t.alpha > a) {
            best = Some((i, t.alpha));
        }
    }
    let (best, alpha) = best.ok_or(DpError::NoFeasibleTuple)?;
    Ok(DpRun {
        gamma_prime: alpha as usize,
        width,
        max_table: stats.iter().map(|s| s.tuples).max().unwrap_or(0),
        stats,
        tables,
        best,
        root: nd.root,
    })
}

/// Walks the stored origins back from the chosen root tuple and collects the
/// edges that were put in the solution.
pub fn extract_witness(g: &Graph, nd: &NiceDecomposition, run: &DpRun) -> EdgeSet {
    let mut out = EdgeSet::empty(g.m());
    let mut stack = vec![(run.root, run.best)];
    while let Some((x, i)) = stack.pop() {
        let node = &nd.nodes[x];
        match *run.tables[x].tuple(i).1 {
            Origin::Leaf => {}
            Origin::From(j) => stack.push((node.children[0], j)),
            Origin::Include(j) => {
                if let NodeKind::IntroduceEdge { edge, .. } = node.kind {
                    out.insert(edge);
                }
                stack.push((node.children[0], j));
            }
            Origin::Join(a, b) => {
                stack.push((node.children[0], a));
                stack.push((node.children[1], b));
            }
        }
    }
    out
}
