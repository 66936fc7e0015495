//! Tree decompositions: construction from a vertex cover, validation,
//! conversion to nice form with introduce-edge nodes, and text formats.
//!
//! Nice decompositions are stored with every child at a smaller index than
//! its parent, so a forward scan over `nodes` is a valid bottom-up order.

use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Vertex count of the decomposed graph.
    pub n: usize,
    /// Sorted, 0-indexed vertex lists.
    pub bags: Vec<Vec<usize>>,
    /// Undirected tree edges between bag indices.
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest bag size minus one; zero when every bag is empty.
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("vertex set is not a cover: edge ({0}, {1}) is uncovered")]
    NotACover(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("invalid tree decomposition: {}", join_violations(.0))]
    InvalidInput(Vec<TdViolation>),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn join_violations<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Bags `C ∪ {v}` for each `v` outside the cover, in ascending `v`, joined
/// into a path. A single bag `C` when the cover is all of `V`.
pub fn td_from_vertex_cover(g: &Graph, cover: &[usize]) -> Result<TreeDecomposition, DecompError> {
    let (cover, outside) = split_cover(g, cover)?;
    let mut bags: Vec<Vec<usize>> = outside
        .iter()
        .map(|&v| {
            let mut b = cover.clone();
            let at = b.partition_point(|&x| x < v);
            b.insert(at, v);
            b
        })
        .collect();
    if bags.is_empty() {
        bags.push(cover);
    }
    let tree_edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
    Ok(TreeDecomposition {
        n: g.n(),
        bags,
        tree_edges,
    })
}

/// Same bags as [`td_from_vertex_cover`] but hung off a central bag `C`
/// (bag 0), so nice conversion produces join nodes.
pub fn td_star_from_vertex_cover(
    g: &Graph,
    cover: &[usize],
) -> Result<TreeDecomposition, DecompError> {
    let (cover, outside) = split_cover(g, cover)?;
    let mut bags = vec![cover.clone()];
    for &v in &outside {
        let mut b = cover.clone();
        let at = b.partition_point(|&x| x < v);
        b.insert(at, v);
        bags.push(b);
    }
    let tree_edges = (1..bags.len()).map(|i| (0, i)).collect();
    Ok(TreeDecomposition {
        n: g.n(),
        bags,
        tree_edges,
    })
}

fn split_cover(g: &Graph, cover: &[usize]) -> Result<(Vec<usize>, Vec<usize>), DecompError> {
    let mut in_cover = vec![false; g.n()];
    for &v in cover {
        if v >= g.n() {
            return Err(DecompError::VertexOutOfRange(v + 1));
        }
        in_cover[v] = true;
    }
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| !in_cover[u] && !in_cover[v]) {
        return Err(DecompError::NotACover(u + 1, v + 1));
    }
    let cover = (0..g.n()).filter(|&v| in_cover[v]).collect();
    let outside = (0..g.n()).filter(|&v| !in_cover[v]).collect();
    Ok((cover, outside))
}

/// A failed property of a tree decomposition. Vertices and bags are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    VertexOutOfRange { bag: usize, vertex: usize },
    UnsortedBag(usize),
    NotATree(String),
    VertexNotCovered(usize),
    EdgeNotCovered(usize, usize),
    Disconnected(usize),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {bag} contains out-of-range vertex {vertex}")
            }
            TdViolation::UnsortedBag(b) => write!(f, "bag {b} is not strictly increasing"),
            TdViolation::NotATree(msg) => write!(f, "not a tree: {msg}"),
            TdViolation::VertexNotCovered(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::EdgeNotCovered(u, v) => write!(f, "edge ({u},{v}) is in no bag"),
            TdViolation::Disconnected(v) => {
                write!(f, "bags containing vertex {v} are not connected")
            }
        }
    }
}

/// Checks vertex coverage, edge coverage and the connectivity of every
/// vertex's bags. An empty list means the decomposition is valid.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Vec<TdViolation> {
    let mut out = Vec::new();
    let nb = td.bags.len();
    if td.n != g.n() {
        out.push(TdViolation::NotATree(format!(
            "decomposition is for {} vertices, graph has {}",
            td.n,
            g.n()
        )));
    }
    let mut bags_ok = true;
    for (i, bag) in td.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|&&v| v >= g.n()) {
            out.push(TdViolation::VertexOutOfRange { bag: i + 1, vertex: v + 1 });
            bags_ok = false;
        }
        if bag.windows(2).any(|w| w[0] >= w[1]) {
            out.push(TdViolation::UnsortedBag(i + 1));
            bags_ok = false;
        }
    }
    if nb == 0 {
        out.push(TdViolation::NotATree("no bags".into()));
        return out;
    }
    let mut tree_adj = vec![Vec::new(); nb];
    let mut tree_ok = true;
    for &(a, b) in &td.tree_edges {
        if a >= nb || b >= nb || a == b {
            out.push(TdViolation::NotATree(format!("bad tree edge ({}, {})", a + 1, b + 1)));
            tree_ok = false;
            continue;
        }
        tree_adj[a].push(b);
        tree_adj[b].push(a);
    }
    if tree_ok {
        if td.tree_edges.len() != nb - 1 {
            out.push(TdViolation::NotATree(format!(
                "{} bags need {} tree edges, found {}",
                nb,
                nb - 1,
                td.tree_edges.len()
            )));
            tree_ok = false;
        } else if component_size(&tree_adj, 0, |_| true) != nb {
            out.push(TdViolation::NotATree("tree is disconnected".into()));
            tree_ok = false;
        }
    }
    if !bags_ok {
        return out;
    }
    let mut holders = vec![Vec::new(); g.n()];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            holders[v].push(i);
        }
    }
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            out.push(TdViolation::VertexNotCovered(v + 1));
        }
    }
    for &(u, v) in g.edges() {
        let covered = holders[u]
            .iter()
            .any(|&i| td.bags[i].binary_search(&v).is_ok());
        if !covered {
            out.push(TdViolation::EdgeNotCovered(u + 1, v + 1));
        }
    }
    if tree_ok {
        for (v, h) in holders.iter().enumerate() {
            if let Some(&start) = h.first() {
                let reach = component_size(&tree_adj, start, |i| td.bags[i].binary_search(&v).is_ok());
                if reach != h.len() {
                    out.push(TdViolation::Disconnected(v + 1));
                }
            }
        }
    }
    out
}

fn component_size(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 0;
    while let Some(x) = stack.pop() {
        count += 1;
        for &y in &adj[x] {
            if !seen[y] && allowed(y) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(usize),
    IntroduceEdge { edge: EdgeId, u: usize, v: usize },
    Forget(usize),
    Join,
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Leaf => "leaf",
            NodeKind::IntroduceVertex(_) => "introduce",
            NodeKind::IntroduceEdge { .. } => "edge",
            NodeKind::Forget(_) => "forget",
            NodeKind::Join => "join",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted, 0-indexed.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceDecomposition {
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn count(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.iter().filter(|x| pred(&x.kind)).count()
    }
}

/// Where introduce-edge nodes go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgePlacement {
    /// Right after the introduce node that first brings both endpoints into
    /// a bag.
    #[default]
    Early,
    /// Right below the forget node of whichever endpoint is forgotten first.
    Late,
}

struct NiceBuilder<'g> {
    g: &'g Graph,
    placement: EdgePlacement,
    nodes: Vec<NiceNode>,
    placed: Vec<bool>,
    forgotten: Vec<bool>,
}

impl NiceBuilder<'_> {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    /// Introduces the unplaced edges between `v` and the rest of `top`'s bag.
    fn edges_at(&mut self, v: usize, mut top: usize) -> usize {
        let bag = self.nodes[top].bag.clone();
        let mut incident: Vec<(EdgeId, usize)> = self
            .g
            .adjacency(v)
            .iter()
            .filter(|&&(u, e)| !self.placed[e] && bag.binary_search(&u).is_ok())
            .map(|&(u, e)| (e, u))
            .collect();
        incident.sort_unstable();
        for (e, _) in incident {
            self.placed[e] = true;
            let (a, b) = self.g.edge(e);
            top = self.push(NodeKind::IntroduceEdge { edge: e, u: a, v: b }, bag.clone(), vec![top]);
        }
        top
    }

    fn introduce(&mut self, v: usize, child: usize) -> usize {
        let mut bag = self.nodes[child].bag.clone();
        let at = bag.partition_point(|&x| x < v);
        bag.insert(at, v);
        let top = self.push(NodeKind::IntroduceVertex(v), bag, vec![child]);
        if self.placement == EdgePlacement::Early {
            self.edges_at(v, top)
        } else {
            top
        }
    }

    fn forget(&mut self, v: usize, child: usize) -> usize {
        let child = if self.placement == EdgePlacement::Late {
            self.edges_at(v, child)
        } else {
            child
        };
        let bag: Vec<usize> = self.nodes[child].bag.iter().copied().filter(|&x| x != v).collect();
        self.forgotten[v] = true;
        self.push(NodeKind::Forget(v), bag, vec![child])
    }

    /// Forgets and introduces until the top bag equals `target`.
    fn morph(&mut self, mut top: usize, target: &[usize]) -> usize {
        let current = self.nodes[top].bag.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            top = self.forget(v, top);
        }
        // Greedy order keeping few bag vertices with neighbours still to come.
        let mut pending: Vec<usize> = target
            .iter()
            .copied()
            .filter(|v| current.binary_search(v).is_err())
            .collect();
        while !pending.is_empty() {
            let bag = &self.nodes[top].bag;
            let score = |v: usize| {
                let open = |u: usize| {
                    self.g
                        .neighbors(u)
                        .any(|w| w != v && !self.forgotten[w] && bag.binary_search(&w).is_err())
                };
                let frontier = bag.iter().filter(|&&u| open(u)).count() + open(v) as usize;
                let links = self.g.neighbors(v).filter(|u| bag.binary_search(u).is_ok()).count();
                (frontier, usize::MAX - links)
            };
            let mut pick = 0;
            for i in 1..pending.len() {
                if score(pending[i]) < score(pending[pick]) {
                    pick = i;
                }
            }
            top = self.introduce(pending.remove(pick), top);
        }
        top
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NiceOptions {
    pub placement: EdgePlacement,
}

/// Converts a valid tree decomposition (rooted at bag 0) into a nice one of
/// the same width.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceDecomposition, DecompError> {
    make_nice_with(g, td, NiceOptions::default())
}

pub fn make_nice_with(
    g: &Graph,
    td: &TreeDecomposition,
    options: NiceOptions,
) -> Result<NiceDecomposition, DecompError> {
    let violations = validate_td(g, td);
    if !violations.is_empty() {
        return Err(DecompError::InvalidInput(violations));
    }
    let nb = td.bags.len();
    let mut tree_adj = vec![Vec::new(); nb];
    for &(a, b) in &td.tree_edges {
        tree_adj[a].push(b);
        tree_adj[b].push(a);
    }
    for list in &mut tree_adj {
        list.sort_unstable();
    }
    // Iterative post-order from bag 0.
    let mut parent = vec![usize::MAX; nb];
    let mut order = Vec::with_capacity(nb);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(t) = stack.pop() {
        order.push(t);
        for &c in tree_adj[t].iter().rev() {
            if parent[c] == usize::MAX {
                parent[c] = t;
                stack.push(c);
            }
        }
    }
    let mut builder = NiceBuilder {
        g,
        placement: options.placement,
        nodes: Vec::new(),
        placed: vec![false; g.m()],
        forgotten: vec![false; g.n()],
    };
    let mut top = vec![usize::MAX; nb];
    for &t in order.iter().rev() {
        let children: Vec<usize> = tree_adj[t]
            .iter()
            .copied()
            .filter(|&c| c != t && parent[c] == t)
            .collect();
        let mut branches = Vec::new();
        for c in children {
            branches.push(builder.morph(top[c], &td.bags[t]));
        }
        if branches.is_empty() {
            let leaf = builder.push(NodeKind::Leaf, Vec::new(), Vec::new());
            branches.push(builder.morph(leaf, &td.bags[t]));
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            let bag = td.bags[t].clone();
            acc = builder.push(NodeKind::Join, bag, vec![acc, b]);
        }
        top[t] = acc;
    }
    let root = builder.morph(top[0], &[]);
    debug_assert!(builder.placed.iter().all(|&p| p));
    Ok(NiceDecomposition {
        nodes: builder.nodes,
        root,
    })
}

/// A failed property of a nice decomposition. Vertices and nodes are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NiceViolation {
    Structure(String),
    Node { node: usize, msg: String },
    RootBagNotEmpty,
    ForgottenTimes { vertex: usize, times: usize },
    EdgeIntroducedTimes { u: usize, v: usize, times: usize },
    EdgeAboveForget { u: usize, v: usize },
}

impl fmt::Display for NiceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NiceViolation::Structure(msg) => write!(f, "structure: {msg}"),
            NiceViolation::Node { node, msg } => write!(f, "node {node}: {msg}"),
            NiceViolation::RootBagNotEmpty => write!(f, "root bag is not empty"),
            NiceViolation::ForgottenTimes { vertex, times } => {
                write!(f, "vertex {vertex} forgotten {times} times")
            }
            NiceViolation::EdgeIntroducedTimes { u, v, times: 0 } => {
                write!(f, "edge ({u},{v}) never introduced")
            }
            NiceViolation::EdgeIntroducedTimes { u, v, times: 2 } => {
                write!(f, "edge ({u},{v}) introduced twice")
            }
            NiceViolation::EdgeIntroducedTimes { u, v, times } => {
                write!(f, "edge ({u},{v}) introduced {times} times")
            }
            NiceViolation::EdgeAboveForget { u, v } => {
                write!(f, "edge ({u},{v}) introduced above the forget of an endpoint")
            }
        }
    }
}

/// Checks every structural property of a nice decomposition against `g`.
pub fn validate_nice(g: &Graph, nd: &NiceDecomposition) -> Vec<NiceViolation> {
    let mut out = Vec::new();
    let len = nd.nodes.len();
    if nd.root >= len {
        out.push(NiceViolation::Structure(format!("root {} out of range", nd.root + 1)));
        return out;
    }
    let mut parent = vec![usize::MAX; len];
    for (i, node) in nd.nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= len {
                out.push(NiceViolation::Node { node: i + 1, msg: format!("child {} out of range", c + 1) });
            } else if parent[c] != usize::MAX || c == nd.root {
                out.push(NiceViolation::Node { node: c + 1, msg: "node has several parents".into() });
            } else {
                parent[c] = i;
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    let mut seen = vec![false; len];
    let mut stack = vec![nd.root];
    while let Some(x) = stack.pop() {
        if std::mem::replace(&mut seen[x], true) {
            out.push(NiceViolation::Structure("cycle detected".into()));
            return out;
        }
        stack.extend(nd.nodes[x].children.iter().copied());
    }
    if let Some(x) = seen.iter().position(|&s| !s) {
        out.push(NiceViolation::Structure(format!("node {} unreachable from root", x + 1)));
        return out;
    }
    if !nd.nodes[nd.root].bag.is_empty() {
        out.push(NiceViolation::RootBagNotEmpty);
    }

    let mut forgotten_at = vec![Vec::new(); g.n()];
    let mut introduced_at = vec![Vec::new(); g.m()];
    for (i, node) in nd.nodes.iter().enumerate() {
        let bad = |msg: String| NiceViolation::Node { node: i + 1, msg };
        if node.bag.windows(2).any(|w| w[0] >= w[1]) || node.bag.iter().any(|&v| v >= g.n()) {
            out.push(bad("bag is not a sorted set of graph vertices".into()));
            continue;
        }
        let kids = &node.children;
        let child_bag = |j: usize| &nd.nodes[kids[j]].bag;
        let want_kids = match node.kind {
            NodeKind::Leaf => 0,
            NodeKind::Join => 2,
            _ => 1,
        };
        if kids.len() != want_kids {
            out.push(bad(format!("{} node has {} children", node.kind.name(), kids.len())));
            continue;
        }
        match node.kind {
            NodeKind::Leaf => {
                if !node.bag.is_empty() {
                    out.push(bad("leaf bag is not empty".into()));
                }
            }
            NodeKind::IntroduceVertex(v) => {
                let cb = child_bag(0);
                if cb.contains(&v) {
                    out.push(bad(format!("introduced vertex {} already in child bag", v + 1)));
                } else if !same_plus(&node.bag, cb, v) {
                    out.push(bad("bag is not child bag plus the introduced vertex".into()));
                }
            }
            NodeKind::Forget(v) => {
                let cb = child_bag(0);
                if !cb.contains(&v) {
                    out.push(bad(format!("forgotten vertex {} not in child bag", v + 1)));
                } else if !same_plus(cb, &node.bag, v) {
                    out.push(bad("bag is not child bag minus the forgotten vertex".into()));
                }
                if v < g.n() {
                    forgotten_at[v].push(i);
                }
            }
            NodeKind::IntroduceEdge { edge, u, v } => {
                if child_bag(0) != &node.bag {
                    out.push(bad("introduce-edge bag differs from child bag".into()));
                }
                if edge >= g.m() || g.edge(edge) != (u.min(v), u.max(v)) {
                    out.push(bad(format!("({}, {}) is not edge {}", u + 1, v + 1, edge)));
                    continue;
                }
                if !node.bag.contains(&u) || !node.bag.contains(&v) {
                    out.push(bad(format!("endpoints of ({},{}) not in bag", u + 1, v + 1)));
                }
                introduced_at[edge].push(i);
            }
            NodeKind::Join => {
                if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                    out.push(bad("join children bags differ".into()));
                }
            }
        }
    }
    for (v, at) in forgotten_at.iter().enumerate() {
        if at.len() != 1 {
            out.push(NiceViolation::ForgottenTimes { vertex: v + 1, times: at.len() });
        }
    }
    let is_ancestor = |anc: usize, mut x: usize| loop {
        if x == anc {
            return true;
        }
        if x == nd.root {
            return false;
        }
        x = parent[x];
    };
    for (e, at) in introduced_at.iter().enumerate() {
        let (u, v) = g.edge(e);
        if at.len() != 1 {
            out.push(NiceViolation::EdgeIntroducedTimes { u: u + 1, v: v + 1, times: at.len() });
            continue;
        }
        let below = [u, v]
            .iter()
            .all(|&w| forgotten_at[w].len() == 1 && is_ancestor(forgotten_at[w][0], at[0]));
        if !below {
            out.push(NiceViolation::EdgeAboveForget { u: u + 1, v: v + 1 });
        }
    }
    out
}

/// True when `big` equals `small` with `v` inserted.
fn same_plus(big: &[usize], small: &[usize], v: usize) -> bool {
    big.len() == small.len() + 1
        && big.iter().copied().filter(|&x| x != v).eq(small.iter().copied())
}

/// Parses the PACE `.td` format.
pub fn parse_td(text: &str) -> Result<TreeDecomposition, DecompError> {
    let err = |line: usize, msg: &str| DecompError::Parse {
        line,
        msg: msg.to_string(),
    };
    let num = |tok: &str, line: usize| -> Result<usize, DecompError> {
        tok.parse()
            .map_err(|_| err(line, &format!("expected a non-negative integer, got '{tok}'")))
    };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree_edges = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None => continue,
            Some(t) if t.starts_with('c') => continue,
            Some(&"s") => {
                if header.is_some() {
                    return Err(err(line, "second header line"));
                }
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(err(line, "expected 's td <bags> <max bag size> <n>'"));
                }
                let h = (num(toks[2], line)?, num(toks[3], line)?, num(toks[4], line)?);
                bags = vec![None; h.0];
                header = Some(h);
            }
            Some(&"b") => {
                let (nb, max_bag, n) = header.ok_or_else(|| err(line, "bag line before header"))?;
                if toks.len() < 2 {
                    return Err(err(line, "bag line needs an id"));
                }
                let id = num(toks[1], line)?;
                if id == 0 || id > nb {
                    return Err(err(line, &format!("bag id {id} out of range 1..={nb}")));
                }
                let mut bag = Vec::with_capacity(toks.len() - 2);
                for t in &toks[2..] {
                    let v = num(t, line)?;
                    if v == 0 || v > n {
                        return Err(err(line, &format!("vertex {v} out of range 1..={n}")));
                    }
                    bag.push(v - 1);
                }
                let before = bag.len();
                bag.sort_unstable();
                bag.dedup();
                if bag.len() != before {
                    return Err(err(line, "repeated vertex in bag"));
                }
                if bag.len() > max_bag {
                    return Err(err(line, &format!("bag has {} vertices, header allows {max_bag}", bag.len())));
                }
                if bags[id - 1].replace(bag).is_some() {
                    return Err(err(line, &format!("bag {id} defined twice")));
                }
            }
            Some(_) => {
                let (nb, _, _) = header.ok_or_else(|| err(line, "tree edge before header"))?;
                if toks.len() != 2 {
                    return Err(err(line, "tree edge line needs two bag ids"));
                }
                let a = num(toks[0], line)?;
                let b = num(toks[1], line)?;
                if a == 0 || a > nb || b == 0 || b > nb {
                    return Err(err(line, "tree edge references an unknown bag"));
                }
                tree_edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, _, n) = header.ok_or_else(|| err(last_line.max(1), "missing 's td' header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| err(last_line, &format!("bag {} never defined", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TreeDecomposition {
        n,
        bags,
        tree_edges,
    })
}

/// Writes the PACE `.td` format.
pub fn emit_td(td: &TreeDecomposition) -> String {
    let mut out = format!("s td {} {} {}\n", td.bags.len(), td.max_bag_size(), td.n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in &td.tree_edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

/// Writes a nice decomposition as text, one node per line:
///
/// ```text
/// s nice <nodes> <max bag size> <n> <root>
/// n <id> leaf
/// n <id> introduce <v> <child>
/// n <id> edge <u> <v> <child>
/// n <id> forget <v> <child>
/// n <id> join <left> <right>
/// ```
///
/// Ids and vertices are 1-indexed; bags are implied by the node types.
pub fn emit_nice(nd: &NiceDecomposition, n: usize) -> String {
    let max_bag = nd.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0);
    let mut out = format!("s nice {} {} {} {}\n", nd.nodes.len(), max_bag, n, nd.root + 1);
    for (i, node) in nd.nodes.iter().enumerate() {
        let c = |j: usize| node.children[j] + 1;
        let line = match node.kind {
            NodeKind::Leaf => format!("n {} leaf", i + 1),
            NodeKind::IntroduceVertex(v) => format!("n {} introduce {} {}", i + 1, v + 1, c(0)),
            NodeKind::IntroduceEdge { u, v, .. } => {
                format!("n {} edge {} {} {}", i + 1, u + 1, v + 1, c(0))
            }
            NodeKind::Forget(v) => format!("n {} forget {} {}", i + 1, v + 1, c(0)),
            NodeKind::Join => format!("n {} join {} {}", i + 1, c(0), c(1)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Reads the format written by [`emit_nice`]. Bags are rebuilt from the
/// node types, so children must appear before their parents.
pub fn parse_nice(text: &str, g: &Graph) -> Result<NiceDecomposition, DecompError> {
    let err = |line: usize, msg: String| DecompError::Parse { line, msg };
    let mut nodes: Vec<NiceNode> = Vec::new();
    let mut root = None;
    let mut expected = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let nums = |from: usize| -> Result<Vec<usize>, DecompError> {
            toks[from..]
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&x| x > 0)
                        .map(|x| x - 1)
                        .ok_or_else(|| err(line, format!("expected a positive integer, got '{t}'")))
                })
                .collect()
        };
        match toks.first() {
            None => continue,
            Some(t) if t.starts_with('c') => continue,
            Some(&"s") => {
                if toks.len() != 6 || toks[1] != "nice" {
                    return Err(err(line, "expected 's nice <nodes> <max bag> <n> <root>'".into()));
                }
                let h = nums(2)?;
                if h[2] + 1 != g.n() {
                    return Err(err(line, format!("header says {} vertices, graph has {}", h[2] + 1, g.n())));
                }
                expected = h[0] + 1;
                root = Some(h[3]);
            }
            Some(&"n") if toks.len() >= 3 => {
                let id = toks[1].parse::<usize>().unwrap_or(0);
                if id != nodes.len() + 1 {
                    return Err(err(line, format!("expected node id {}, got '{}'", nodes.len() + 1, toks[1])));
                }
                let args = nums(3)?;
                let child = |j: usize| -> Result<usize, DecompError> {
                    let c = *args.get(j).ok_or_else(|| err(line, "missing child id".into()))?;
                    if c >= nodes.len() {
                        return Err(err(line, format!("child {} not defined yet", c + 1)));
                    }
                    Ok(c)
                };
                let vertex = |x: usize| -> Result<usize, DecompError> {
                    if x >= g.n() {
                        Err(err(line, format!("vertex {} out of range", x + 1)))
                    } else {
                        Ok(x)
                    }
                };
                let (kind, bag, children) = match toks[2] {
                    "leaf" => (NodeKind::Leaf, Vec::new(), Vec::new()),
                    "introduce" if args.len() == 2 => {
                        let v = vertex(args[0])?;
                        let c = child(1)?;
                        let mut bag = nodes[c].bag.clone();
                        if bag.contains(&v) {
                            return Err(err(line, format!("vertex {} already in bag", v + 1)));
                        }
                        let at = bag.partition_point(|&x| x < v);
                        bag.insert(at, v);
                        (NodeKind::IntroduceVertex(v), bag, vec![c])
                    }
                    "edge" if args.len() == 3 => {
                        let (u, v) = (vertex(args[0])?, vertex(args[1])?);
                        let c = child(2)?;
                        let edge = g
                            .edge_between(u, v)
                            .filter(|_| u != v)
                            .ok_or_else(|| err(line, format!("({}, {}) is not an edge", u + 1, v + 1)))?;
                        let (a, b) = g.edge(edge);
                        (NodeKind::IntroduceEdge { edge, u: a, v: b }, nodes[c].bag.clone(), vec![c])
                    }
                    "forget" if args.len() == 2 => {
                        let v = vertex(args[0])?;
                        let c = child(1)?;
                        if !nodes[c].bag.contains(&v) {
                            return Err(err(line, format!("vertex {} not in child bag", v + 1)));
                        }
                        let bag = nodes[c].bag.iter().copied().filter(|&x| x != v).collect();
                        (NodeKind::Forget(v), bag, vec![c])
                    }
                    "join" if args.len() == 2 => {
                        let (a, b) = (child(0)?, child(1)?);
                        (NodeKind::Join, nodes[a].bag.clone(), vec![a, b])
                    }
                    other => return Err(err(line, format!("malformed '{other}' node"))),
                };
                nodes.push(NiceNode { kind, bag, children });
            }
            Some(_) => return Err(err(line, "unrecognized line".into())),
        }
    }
    let root = root.ok_or_else(|| err(1, "missing 's nice' header".into()))?;
    if nodes.len() != expected || root >= nodes.len() {
        return Err(err(0, format!("header declares {expected} nodes, found {}", nodes.len())));
    }
    Ok(NiceDecomposition { nodes, root })
}
