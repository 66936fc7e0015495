//! Simple undirected graphs with stable edge ids, edge sets, and the basic
//! edge-domination predicates.
//!
//! Vertices are 0-indexed internally. Everything that crosses the I/O
//! boundary (PACE files, error messages, reports) is 1-indexed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Index of an edge in input order.
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge id {id} out of range (graph has {m} edges)")]
    EdgeOutOfRange { id: EdgeId, m: usize },
    #[error("edge order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {error}")]
    Graph { line: usize, error: GraphError },
    #[error("missing 'p gr <n> <m>' header")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} were read")]
    EdgeCount { declared: usize, found: usize },
}

/// A simple undirected graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, EdgeId)>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from 0-indexed endpoint pairs. Edge ids follow slice order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds the edge `{u, v}` (0-indexed) and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<EdgeId, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: x + 1,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u + 1));
        }
        if self.edge_between(u, v).is_some() {
            return Err(GraphError::DuplicateEdge(u.min(v) + 1, u.max(v) + 1));
        }
        let id = self.edges.len();
        self.edges.push((u.min(v), u.max(v)));
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of every edge, `(min, max)`, indexed by [`EdgeId`].
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e]
    }

    /// `(neighbor, edge id)` pairs in insertion order.
    pub fn adjacency(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<EdgeId> {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].iter().find(|&&(x, _)| x == b).map(|&(_, e)| e)
    }

    fn check_edge(&self, e: EdgeId) -> Result<(), GraphError> {
        if e >= self.m() {
            Err(GraphError::EdgeOutOfRange { id: e, m: self.m() })
        } else {
            Ok(())
        }
    }

    /// The subgraph induced by the vertices with `keep[v] == true`, plus the
    /// map from new vertex index to old vertex index. Surviving edges keep
    /// their relative order.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let mut new_index = vec![usize::MAX; self.n];
        let mut old_index = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                new_index[v] = old_index.len();
                old_index.push(v);
            }
        }
        let mut g = Graph::new(old_index.len());
        for &(u, v) in &self.edges {
            if keep[u] && keep[v] {
                g.add_edge(new_index[u], new_index[v])
                    .expect("induced subgraph of a simple graph is simple");
            }
        }
        (g, old_index)
    }

    /// Serializes in the PACE `p gr` format.
    pub fn to_pace(&self) -> String {
        let mut out = format!("p gr {} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

/// Parses a PACE-style graph: `c` comment lines, one `p gr <n> <m>` header,
/// then `m` lines `<u> <v>` with 1-indexed endpoints.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else {
            continue;
        };
        if first.starts_with('c') {
            continue;
        }
        if first == "p" {
            if graph.is_some() {
                return Err(malformed(line, "second header line"));
            }
            let rest: Vec<&str> = tokens.collect();
            if rest.len() != 3 || rest[0] != "gr" {
                return Err(malformed(line, "expected 'p gr <n> <m>'"));
            }
            let n = parse_count(rest[1], line)?;
            declared = parse_count(rest[2], line)?;
            graph = Some(Graph::new(n));
            continue;
        }
        let g = graph
            .as_mut()
            .ok_or_else(|| malformed(line, "edge line before header"))?;
        let u = parse_count(first, line)?;
        let v = match tokens.next() {
            Some(t) => parse_count(t, line)?,
            None => return Err(malformed(line, "edge line needs two endpoints")),
        };
        if tokens.next().is_some() {
            return Err(malformed(line, "trailing tokens on edge line"));
        }
        let n = g.n();
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(ParseError::Graph {
                    line,
                    error: GraphError::VertexOutOfRange { vertex: x, n },
                });
            }
        }
        g.add_edge(u - 1, v - 1)
            .map_err(|error| ParseError::Graph { line, error })?;
    }
    let g = graph.ok_or(ParseError::MissingHeader)?;
    if g.m() != declared {
        return Err(ParseError::EdgeCount {
            declared,
            found: g.m(),
        });
    }
    Ok(g)
}

fn malformed(line: usize, msg: &str) -> ParseError {
    ParseError::Malformed {
        line,
        msg: msg.to_string(),
    }
}

fn parse_count(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| malformed(line, &format!("expected a non-negative integer, got '{tok}'")))
}

impl FromStr for Graph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

/// A subset of the edges of a graph, stored as a bitmask over edge ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    words: Vec<u64>,
    universe: usize,
    len: usize,
}

impl EdgeSet {
    /// The empty set over edge ids `0..universe`.
    pub fn empty(universe: usize) -> Self {
        EdgeSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
            len: 0,
        }
    }

    pub fn from_ids<I: IntoIterator<Item = EdgeId>>(universe: usize, ids: I) -> Self {
        let mut s = EdgeSet::empty(universe);
        for e in ids {
            s.insert(e);
        }
        s
    }

    /// Bit `i` of `mask` is edge `i`. Bits at or above `universe` are ignored.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        let mut s = EdgeSet::empty(universe);
        if universe > 0 {
            let keep = if universe >= 64 {
                u64::MAX
            } else {
                (1u64 << universe) - 1
            };
            s.words[0] = mask & keep;
            s.len = s.words[0].count_ones() as usize;
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        e < self.universe && self.words[e / 64] >> (e % 64) & 1 == 1
    }

    /// Returns whether `e` was newly inserted.
    ///
    /// Panics if `e` is outside the universe.
    pub fn insert(&mut self, e: EdgeId) -> bool {
        assert!(e < self.universe, "edge id {e} outside universe {}", self.universe);
        let bit = 1u64 << (e % 64);
        let w = &mut self.words[e / 64];
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        if !self.contains(e) {
            return false;
        }
        self.words[e / 64] &= !(1u64 << (e % 64));
        self.len -= 1;
        true
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    /// Endpoint pairs, 1-indexed, in ascending edge id order.
    pub fn to_pairs(&self, g: &Graph) -> Vec<(usize, usize)> {
        self.iter()
            .map(|e| {
                let (u, v) = g.edge(e);
                (u + 1, v + 1)
            })
            .collect()
    }
}

/// Orders edge sets by the integer value of their masks.
impl Ord for EdgeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let width = self.words.len().max(other.words.len());
        for i in (0..width).rev() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for EdgeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Number of edges of `m` incident to each vertex.
pub fn incidence_degrees(g: &Graph, m: &EdgeSet) -> Vec<usize> {
    let mut deg = vec![0; g.n()];
    for e in m.iter() {
        let (u, v) = g.edge(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

fn count_with(g: &Graph, m: &EdgeSet, deg: &[usize], e: EdgeId) -> usize {
    let (u, v) = g.edge(e);
    deg[u] + deg[v] - m.contains(e) as usize
}

/// True iff every edge of `g` shares an endpoint with some edge of `m`.
pub fn is_edge_dominating(g: &Graph, m: &EdgeSet) -> bool {
    let deg = incidence_degrees(g, m);
    g.edges().iter().all(|&(u, v)| deg[u] + deg[v] > 0)
}

/// Number of edges of `m` adjacent to or equal to `e`.
pub fn domination_count(g: &Graph, m: &EdgeSet, e: EdgeId) -> Result<usize, GraphError> {
    g.check_edge(e)?;
    Ok(count_with(g, m, &incidence_degrees(g, m), e))
}

/// For each member of `m`, some edge of its closed neighbourhood dominated
/// by that member alone. `None` marks a member without a private edge.
pub fn private_edges(g: &Graph, m: &EdgeSet) -> Vec<(EdgeId, Option<EdgeId>)> {
    let deg = incidence_degrees(g, m);
    m.iter()
        .map(|f| {
            let (a, b) = g.edge(f);
            let private = g.adjacency(a)
                .iter()
                .chain(g.adjacency(b))
                .map(|&(_, e)| e)
                .find(|&e| count_with(g, m, &deg, e) == 1);
            (f, private)
        })
        .collect()
}

/// True iff `m` is an edge dominating set in which every member has a private
/// edge, i.e. no proper subset of `m` dominates `g`.
pub fn is_minimal_eds(g: &Graph, m: &EdgeSet) -> bool {
    is_edge_dominating(g, m) && private_edges(g, m).iter().all(|(_, p)| p.is_some())
}

/// Greedy maximal matching scanning edges in ascending id order.
pub fn greedy_maximal_matching(g: &Graph) -> EdgeSet {
    let order: Vec<EdgeId> = (0..g.m()).collect();
    matching_in_order(g, &order)
}

/// Greedy maximal matching scanning edges in the given order, which must be a
/// permutation of all edge ids.
pub fn greedy_maximal_matching_in_order(
    g: &Graph,
    order: &[EdgeId],
) -> Result<EdgeSet, GraphError> {
    let mut seen = vec![false; g.m()];
    if order.len() != g.m() {
        return Err(GraphError::NotAPermutation(g.m()));
    }
    for &e in order {
        if e >= g.m() || std::mem::replace(&mut seen[e], true) {
            return Err(GraphError::NotAPermutation(g.m()));
        }
    }
    Ok(matching_in_order(g, order))
}

fn matching_in_order(g: &Graph, order: &[EdgeId]) -> EdgeSet {
    let mut matched = vec![false; g.n()];
    let mut m = EdgeSet::empty(g.m());
    for &e in order {
        let (u, v) = g.edge(e);
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            m.insert(e);
        }
    }
    m
}

/// One connected component of a star forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Star {
    /// `K_{1,1}`: both endpoints are symmetric.
    Single { ends: (usize, usize), edge: EdgeId },
    /// `K_{1,r}` with `r >= 2`.
    Hub { center: usize, leaves: Vec<usize> },
}

/// The subgraph `(V, M)` split into stars and untouched vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StarStructure {
    pub stars: Vec<Star>,
    pub isolated: Vec<usize>,
}

impl StarStructure {
    pub fn edge_count(&self) -> usize {
        self.stars
            .iter()
            .map(|s| match s {
                Star::Single { .. } => 1,
                Star::Hub { leaves, .. } => leaves.len(),
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    /// Edge `(u, v)` of the set joins two vertices that both have degree at
    /// least two in the set (1-indexed).
    #[error("not a star forest: edge ({0}, {1}) joins two vertices of degree >= 2")]
    NotStarForest(usize, usize),
}

/// Decomposes `(V, M)` into stars, or reports an edge whose endpoints both
/// have degree at least two (a path on three edges or a cycle).
pub fn star_decomposition(g: &Graph, m: &EdgeSet) -> Result<StarStructure, StarError> {
    let deg = incidence_degrees(g, m);
    let mut hubs: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    let mut stars = Vec::new();
    for e in m.iter() {
        let (u, v) = g.edge(e);
        match (deg[u] >= 2, deg[v] >= 2) {
            (true, true) => return Err(StarError::NotStarForest(u + 1, v + 1)),
            (false, false) => stars.push(Star::Single { ends: (u, v), edge: e }),
            (true, false) => hubs[u].push(v),
            (false, true) => hubs[v].push(u),
        }
    }
    for (center, mut leaves) in hubs.into_iter().enumerate() {
        if !leaves.is_empty() {
            leaves.sort_unstable();
            stars.push(Star::Hub { center, leaves });
        }
    }
    let isolated = (0..g.n()).filter(|&v| deg[v] == 0).collect();
    Ok(StarStructure { stars, isolated })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error(transparent)]
    Shape(#[from] StarError),
    #[error("edge ({0}, {1}) is dominated more than once")]
    SharedSingle(usize, usize),
    #[error("leaf {leaf} of the star centered at {center} has no untouched neighbour")]
    LeafWithoutWitness { center: usize, leaf: usize },
    #[error("edge ({0}, {1}) is not dominated")]
    Undominated(usize, usize),
}

/// Checks the structural certificate of a minimal edge dominating set: the
/// set is a star forest, every `K_{1,1}` edge is dominated only by itself,
/// every leaf of a larger star has a neighbour untouched by the set, and the
/// untouched vertices form an independent set.
pub fn verify_star_certificate(g: &Graph, m: &EdgeSet) -> Result<StarStructure, CertificateError> {
    let stars = star_decomposition(g, m)?;
    let deg = incidence_degrees(g, m);
    for star in &stars.stars {
        match star {
            Star::Single { ends: (u, v), edge } => {
                if count_with(g, m, &deg, *edge) != 1 {
                    return Err(CertificateError::SharedSingle(u + 1, v + 1));
                }
            }
            Star::Hub { center, leaves } => {
                for &leaf in leaves {
                    if !g.neighbors(leaf).any(|x| deg[x] == 0) {
                        return Err(CertificateError::LeafWithoutWitness {
                            center: center + 1,
                            leaf: leaf + 1,
                        });
                    }
                }
            }
        }
    }
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| deg[u] + deg[v] == 0) {
        return Err(CertificateError::Undominated(u + 1, v + 1));
    }
    Ok(stars)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("edge ({0}, {1}) has no endpoint in the cover")]
    CoverViolation(usize, usize),
}

/// Endpoints of the matching, sorted. Fails if they do not cover `g`.
pub fn vertex_cover_from_matching(g: &Graph, m: &EdgeSet) -> Result<Vec<usize>, CoverError> {
    let mut in_cover = vec![false; g.n()];
    for e in m.iter() {
        let (u, v) = g.edge(e);
        in_cover[u] = true;
        in_cover[v] = true;
    }
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| !in_cover[u] && !in_cover[v]) {
        return Err(CoverError::CoverViolation(u + 1, v + 1));
    }
    Ok((0..g.n()).filter(|&v| in_cover[v]).collect())
}

pub fn is_vertex_cover(g: &Graph, cover: &[usize]) -> bool {
    let mut in_cover = vec![false; g.n()];
    for &v in cover {
        if v < g.n() {
            in_cover[v] = true;
        }
    }
    g.edges().iter().all(|&(u, v)| in_cover[u] || in_cover[v])
}

/// Small named graphs used across tests, docs and the benchmark corpus.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn set(g: &Graph, pairs: &[(usize, usize)]) -> EdgeSet {
        EdgeSet::from_ids(
            g.m(),
            pairs
                .iter()
                .map(|&(u, v)| g.edge_between(u - 1, v - 1).expect("edge exists")),
        )
    }

    #[test]
    fn parses_small_graphs() {
        let k2 = parse_graph("p gr 2 1\n1 2\n").unwrap();
        assert_eq!((k2.n(), k2.m()), (2, 1));
        let p4 = parse_graph("c a path\np gr 4 3\n1 2\n2 3\n3 4\n").unwrap();
        assert_eq!(p4, path(4));
        let k3: Graph = "p gr 3 3\n1 2\n2 3\n1 3\n".parse().unwrap();
        assert_eq!(k3.m(), 3);
        assert_eq!(k3.edges(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_graph("p gr 3 2\n1 2\n2 2\n"),
            Err(ParseError::Graph { line: 3, error: GraphError::SelfLoop(2) })
        ));
        assert!(matches!(
            parse_graph("p gr 3 2\n1 2\n2 1\n"),
            Err(ParseError::Graph { line: 3, error: GraphError::DuplicateEdge(1, 2) })
        ));
        assert!(matches!(
            parse_graph("c\np gr 3 1\n1 4\n"),
            Err(ParseError::Graph { line: 3, error: GraphError::VertexOutOfRange { vertex: 4, n: 3 } })
        ));
        assert!(matches!(
            parse_graph("p gr 3 1\n0 1\n"),
            Err(ParseError::Graph { line: 2, .. })
        ));
        assert!(matches!(parse_graph("p td 3 1\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert!(matches!(parse_graph("1 2\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert!(matches!(parse_graph("p gr 3 x\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert_eq!(parse_graph("c only\n"), Err(ParseError::MissingHeader));
        assert_eq!(
            parse_graph("p gr 3 2\n1 2\n"),
            Err(ParseError::EdgeCount { declared: 2, found: 1 })
        );
    }

    #[test]
    fn pace_round_trip() {
        let g = cycle(5);
        assert_eq!(parse_graph(&g.to_pace()).unwrap(), g);
    }

    #[test]
    fn edge_domination() {
        let p4 = path(4);
        assert!(is_edge_dominating(&p4, &set(&p4, &[(2, 3)])));
        assert!(!is_edge_dominating(&p4, &set(&p4, &[(1, 2)])));
        let c4 = cycle(4);
        assert!(is_edge_dominating(&c4, &set(&c4, &[(1, 2), (3, 4)])));
    }

    #[test]
    fn domination_counts() {
        let p4 = path(4);
        let m = set(&p4, &[(1, 2), (2, 3)]);
        assert_eq!(domination_count(&p4, &m, 2), Ok(1));
        assert_eq!(domination_count(&p4, &m, 0), Ok(2));
        assert_eq!(domination_count(&p4, &EdgeSet::empty(3), 1), Ok(0));
        assert!(matches!(
            domination_count(&p4, &m, 3),
            Err(GraphError::EdgeOutOfRange { id: 3, m: 3 })
        ));
    }

    #[test]
    fn minimality() {
        let p4 = path(4);
        assert!(is_minimal_eds(&p4, &set(&p4, &[(1, 2), (3, 4)])));
        assert!(!is_minimal_eds(&p4, &set(&p4, &[(1, 2), (2, 3)])));
        let k3 = complete(3);
        assert!(!is_minimal_eds(&k3, &set(&k3, &[(1, 2), (2, 3)])));
        assert!(is_minimal_eds(&k3, &set(&k3, &[(1, 2)])));
        assert!(!is_minimal_eds(&k3, &EdgeSet::empty(3)));
        assert!(is_minimal_eds(&Graph::new(4), &EdgeSet::empty(0)));
    }

    #[test]
    fn greedy_matching() {
        let p4 = path(4);
        assert_eq!(greedy_maximal_matching(&p4), set(&p4, &[(1, 2), (3, 4)]));
        let k13 = star(3);
        for order in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            assert_eq!(greedy_maximal_matching_in_order(&k13, &order).unwrap().len(), 1);
        }
        assert!(greedy_maximal_matching(&Graph::new(3)).is_empty());
        assert_eq!(
            greedy_maximal_matching_in_order(&p4, &[0, 0, 1]),
            Err(GraphError::NotAPermutation(3))
        );
        let m = greedy_maximal_matching_in_order(&p4, &[1, 0, 2]).unwrap();
        assert_eq!(m, set(&p4, &[(2, 3)]));
    }

    #[test]
    fn stars() {
        let p4 = path(4);
        let s = star_decomposition(&p4, &set(&p4, &[(1, 2), (3, 4)])).unwrap();
        assert_eq!(s.stars.len(), 2);
        assert!(s.stars.iter().all(|c| matches!(c, Star::Single { .. })));
        assert!(s.isolated.is_empty());

        let k13 = star(3);
        let s = star_decomposition(&k13, &EdgeSet::from_ids(3, 0..3)).unwrap();
        assert_eq!(s.stars, vec![Star::Hub { center: 0, leaves: vec![1, 2, 3] }]);
        assert_eq!(s.edge_count(), 3);

        assert_eq!(
            star_decomposition(&p4, &EdgeSet::from_ids(3, 0..3)),
            Err(StarError::NotStarForest(2, 3))
        );
        let k3 = complete(3);
        assert!(star_decomposition(&k3, &EdgeSet::from_ids(3, 0..3)).is_err());
    }

    #[test]
    fn certificates() {
        let p4 = path(4);
        assert!(verify_star_certificate(&p4, &set(&p4, &[(1, 2), (3, 4)])).is_ok());
        // center 2 with leaves 1, 3: leaf 1 has no untouched neighbour.
        let p5 = path(5);
        assert!(matches!(
            verify_star_certificate(&p5, &set(&p5, &[(1, 2), (2, 3)])),
            Err(CertificateError::LeafWithoutWitness { center: 2, leaf: 1 })
        ));
        // center 3 with leaves 2 and 4, witnessed by 1 and 5.
        assert!(verify_star_certificate(&p5, &set(&p5, &[(2, 3), (3, 4)])).is_ok());
        assert!(matches!(
            verify_star_certificate(&p4, &set(&p4, &[(1, 2)])),
            Err(CertificateError::Undominated(3, 4))
        ));
    }

    #[test]
    fn vertex_covers() {
        let p4 = path(4);
        let m = set(&p4, &[(1, 2), (3, 4)]);
        assert_eq!(vertex_cover_from_matching(&p4, &m), Ok(vec![0, 1, 2, 3]));
        let k2 = path(2);
        assert_eq!(vertex_cover_from_matching(&k2, &EdgeSet::from_ids(1, [0])), Ok(vec![0, 1]));
        let k13 = star(3);
        let c = vertex_cover_from_matching(&k13, &EdgeSet::from_ids(3, [0])).unwrap();
        assert_eq!(c, vec![0, 1]);
        assert!(is_vertex_cover(&k13, &c));
        assert_eq!(
            vertex_cover_from_matching(&p4, &set(&p4, &[(1, 2)])),
            Err(CoverError::CoverViolation(3, 4))
        );
    }

    #[test]
    fn edge_set_basics() {
        let mut s = EdgeSet::empty(70);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(65));
        assert_eq!(s.len(), 2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 65]);
        assert!(s.remove(3));
        assert!(!s.contains(3));
        assert_eq!(s.len(), 1);
        let a = EdgeSet::from_mask(5, 0b00110);
        let b = EdgeSet::from_mask(5, 0b01001);
        assert!(a < b);
        assert!(EdgeSet::from_mask(5, 0b00100).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(EdgeSet::from_mask(3, 0xff).len(), 3);
    }
}
