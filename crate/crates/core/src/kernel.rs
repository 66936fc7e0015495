//! Kernelization by vertex colouring and seven reduction rules.
//!
//! Every vertex of a graph without isolated vertices gets one colour:
//! blue (degree one), purple (adjacent to a blue vertex), red (all
//! neighbours purple) or green (everything else). The rules either shrink the
//! instance or conclude that a minimal edge dominating set of size at least
//! `k` exists. Rules are tried in numeric order and the colouring is
//! recomputed after every change.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VertexColor {
    Blue,
    Purple,
    Red,
    Green,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexColoring {
    colors: Vec<VertexColor>,
}

impl VertexColoring {
    pub fn color(&self, v: usize) -> VertexColor {
        self.colors[v]
    }

    pub fn colors(&self) -> &[VertexColor] {
        &self.colors
    }

    pub fn vertices(&self, c: VertexColor) -> Vec<usize> {
        (0..self.colors.len()).filter(|&v| self.colors[v] == c).collect()
    }

    pub fn count(&self, c: VertexColor) -> usize {
        self.colors.iter().filter(|&&x| x == c).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    /// 1-indexed vertex of the current graph.
    #[error("vertex {0} is isolated; remove isolated vertices before colouring")]
    IsolatedVertexPresent(usize),
    #[error("rule {0} still applies")]
    PreconditionViolated(Rule),
    #[error("parameter k must be non-negative, got {0}")]
    NegativeParameter(i64),
}

/// Colours the vertices of a graph that has no isolated vertices.
pub fn color_vertices(g: &Graph) -> Result<VertexColoring, KernelError> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(KernelError::IsolatedVertexPresent(v + 1));
    }
    let blue: Vec<bool> = (0..g.n()).map(|v| g.degree(v) == 1).collect();
    let purple: Vec<bool> = (0..g.n())
        .map(|v| !blue[v] && g.neighbors(v).any(|u| blue[u]))
        .collect();
    let colors = (0..g.n())
        .map(|v| {
            if blue[v] {
                VertexColor::Blue
            } else if purple[v] {
                VertexColor::Purple
            } else if g.neighbors(v).all(|u| purple[u]) {
                VertexColor::Red
            } else {
                VertexColor::Green
            }
        })
        .collect();
    Ok(VertexColoring { colors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    /// `k <= 0`: the empty set already answers the question.
    ZeroBudget,
    IsolatedVertex,
    IsolatedEdge,
    BlueTwins,
    BigGreen,
    ManyBlue,
    RemoveRed,
    SizeBound,
}

impl Rule {
    pub fn number(self) -> u8 {
        match self {
            Rule::ZeroBudget => 0,
            Rule::IsolatedVertex => 1,
            Rule::IsolatedEdge => 2,
            Rule::BlueTwins => 3,
            Rule::BigGreen => 4,
            Rule::ManyBlue => 5,
            Rule::RemoveRed => 6,
            Rule::SizeBound => 7,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A graph together with the parameter and, for every current vertex, its
/// 0-indexed vertex in the original input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: i64,
    pub labels: Vec<usize>,
}

impl Instance {
    pub fn new(graph: Graph, k: i64) -> Self {
        let labels = (0..graph.n()).collect();
        Instance { graph, k, labels }
    }

    fn without(&self, doomed: &[usize], k: i64) -> Instance {
        let mut keep = vec![true; self.graph.n()];
        for &v in doomed {
            keep[v] = false;
        }
        let (graph, old) = self.graph.induced_subgraph(&keep);
        let labels = old.iter().map(|&v| self.labels[v]).collect();
        Instance { graph, k, labels }
    }

    /// Deletes vertices one at a time, logging each deletion.
    fn delete_vertices(&self, rule: Rule, doomed: &[usize]) -> Step {
        let mut trace = Vec::with_capacity(doomed.len());
        let mut n = self.graph.n();
        for &v in doomed {
            n -= 1;
            trace.push(TraceEntry {
                rule,
                action: TraceAction::DeleteVertex(self.labels[v] + 1),
                n,
                k: self.k,
            });
        }
        Step {
            instance: self.without(doomed, self.k),
            trace,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TraceAction {
    /// Original 1-indexed vertex.
    DeleteVertex(usize),
    /// Original 1-indexed endpoints.
    DeleteEdge(usize, usize),
    DecideYes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub rule: Rule,
    pub action: TraceAction,
    /// Vertex count after the action.
    pub n: usize,
    /// Parameter after the action.
    pub k: i64,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule={} action=", self.rule)?;
        match self.action {
            TraceAction::DeleteVertex(v) => write!(f, "delete-vertex {v}")?,
            TraceAction::DeleteEdge(u, v) => write!(f, "delete-edge ({u},{v})")?,
            TraceAction::DecideYes => write!(f, "decide-yes")?,
        }
        write!(f, " n={} k={}", self.n, self.k)
    }
}

/// The result of applying one shrinking rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub instance: Instance,
    pub trace: Vec<TraceEntry>,
}

/// A rule concluded that the answer is yes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub rule: Rule,
    pub hint: String,
}

pub fn rule1_isolated_vertex(inst: &Instance) -> Option<Step> {
    let g = &inst.graph;
    let v = (0..g.n()).find(|&v| g.degree(v) == 0)?;
    Some(inst.delete_vertices(Rule::IsolatedVertex, &[v]))
}

pub fn rule2_isolated_edge(inst: &Instance) -> Option<Step> {
    let g = &inst.graph;
    let &(u, v) = g
        .edges()
        .iter()
        .find(|&&(u, v)| g.degree(u) == 1 && g.degree(v) == 1)?;
    let k = inst.k - 1;
    let instance = inst.without(&[u, v], k);
    let trace = vec![TraceEntry {
        rule: Rule::IsolatedEdge,
        action: TraceAction::DeleteEdge(inst.labels[u] + 1, inst.labels[v] + 1),
        n: instance.graph.n(),
        k,
    }];
    Some(Step { instance, trace })
}

/// Keeps only the lowest-indexed blue neighbour of the first purple vertex
/// that has several.
pub fn rule3_prune_blue_twins(inst: &Instance, coloring: &VertexColoring) -> Option<Step> {
    let g = &inst.graph;
    let extra = (0..g.n())
        .filter(|&p| coloring.color(p) == VertexColor::Purple)
        .map(|p| {
            let mut blue: Vec<usize> = g
                .neighbors(p)
                .filter(|&b| coloring.color(b) == VertexColor::Blue)
                .collect();
            blue.sort_unstable();
            blue
        })
        .find(|blue| blue.len() >= 2)?;
    Some(inst.delete_vertices(Rule::BlueTwins, &extra[1..]))
}

pub fn rule4_big_green(inst: &Instance, coloring: &VertexColoring) -> Option<Decision> {
    let g = &inst.graph;
    let threshold = 2 * inst.k.max(0) as usize;
    let v = (0..g.n())
        .find(|&v| coloring.color(v) == VertexColor::Green && g.degree(v) >= threshold)?;
    Some(Decision {
        rule: Rule::BigGreen,
        hint: format!(
            "green vertex {} has degree {} >= 2k = {}",
            inst.labels[v] + 1,
            g.degree(v),
            threshold
        ),
    })
}

pub fn rule5_many_blue(inst: &Instance, coloring: &VertexColoring) -> Option<Decision> {
    let blue = coloring.count(VertexColor::Blue);
    (blue as i64 >= inst.k).then(|| Decision {
        rule: Rule::ManyBlue,
        hint: format!("{blue} blue vertices >= k = {}: their pendant edges extend to a maximal matching", inst.k),
    })
}

pub fn rule6_remove_red(inst: &Instance, coloring: &VertexColoring) -> Option<Step> {
    let red = coloring.vertices(VertexColor::Red);
    if red.is_empty() {
        return None;
    }
    Some(inst.delete_vertices(Rule::RemoveRed, &red))
}

/// `4k^2 - 2`, the largest vertex count of a reduced instance.
pub fn kernel_bound(k: i64) -> i64 {
    4 * k * k - 2
}

fn size_bound_unchecked(inst: &Instance) -> Option<Decision> {
    let n = inst.graph.n() as i64;
    let bound = kernel_bound(inst.k);
    (n > bound).then(|| Decision {
        rule: Rule::SizeBound,
        hint: format!("{n} vertices > 4k^2-2 = {bound}"),
    })
}

/// Applies the size bound. Only meaningful once rules 1 to 6 are exhausted,
/// which is checked.
pub fn rule7_size_bound(inst: &Instance) -> Result<Option<Decision>, KernelError> {
    if rule1_isolated_vertex(inst).is_some() {
        return Err(KernelError::PreconditionViolated(Rule::IsolatedVertex));
    }
    if rule2_isolated_edge(inst).is_some() {
        return Err(KernelError::PreconditionViolated(Rule::IsolatedEdge));
    }
    let coloring = color_vertices(&inst.graph)?;
    if rule3_prune_blue_twins(inst, &coloring).is_some() {
        return Err(KernelError::PreconditionViolated(Rule::BlueTwins));
    }
    if rule4_big_green(inst, &coloring).is_some() {
        return Err(KernelError::PreconditionViolated(Rule::BigGreen));
    }
    if rule5_many_blue(inst, &coloring).is_some() {
        return Err(KernelError::PreconditionViolated(Rule::ManyBlue));
    }
    if rule6_remove_red(inst, &coloring).is_some() {
        return Err(KernelError::PreconditionViolated(Rule::RemoveRed));
    }
    Ok(size_bound_unchecked(inst))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelOutcome {
    Reduced {
        instance: Instance,
        trace: Vec<TraceEntry>,
    },
    DecidedYes {
        decision: Decision,
        trace: Vec<TraceEntry>,
    },
}

impl KernelOutcome {
    pub fn trace(&self) -> &[TraceEntry] {
        match self {
            KernelOutcome::Reduced { trace, .. } | KernelOutcome::DecidedYes { trace, .. } => trace,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, KernelOutcome::DecidedYes { .. })
    }
}

/// Runs the rules to a fixpoint, lowest rule number first.
pub fn kernelize(g: &Graph, k: i64) -> Result<KernelOutcome, KernelError> {
    if k < 0 {
        return Err(KernelError::NegativeParameter(k));
    }
    let mut inst = Instance::new(g.clone(), k);
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut last = Rule::ZeroBudget;
    loop {
        if inst.k <= 0 {
            let decision = Decision {
                rule: last,
                hint: format!("k = {} <= 0: the empty set suffices", inst.k),
            };
            return Ok(decide(decision, &inst, trace));
        }
        let step = rule1_isolated_vertex(&inst).or_else(|| rule2_isolated_edge(&inst));
        let step = match step {
            Some(s) => Some(s),
            None => {
                let coloring = color_vertices(&inst.graph)?;
                if let Some(s) = rule3_prune_blue_twins(&inst, &coloring) {
                    Some(s)
                } else if let Some(d) = rule4_big_green(&inst, &coloring)
                    .or_else(|| rule5_many_blue(&inst, &coloring))
                {
                    return Ok(decide(d, &inst, trace));
                } else {
                    rule6_remove_red(&inst, &coloring)
                }
            }
        };
        match step {
            Some(s) => {
                last = s.trace.first().map_or(last, |t| t.rule);
                trace.extend(s.trace);
                inst = s.instance;
            }
            None => {
                if let Some(d) = size_bound_unchecked(&inst) {
                    return Ok(decide(d, &inst, trace));
                }
                return Ok(KernelOutcome::Reduced {
                    instance: inst,
                    trace,
                });
            }
        }
    }
}

fn decide(decision: Decision, inst: &Instance, mut trace: Vec<TraceEntry>) -> KernelOutcome {
    trace.push(TraceEntry {
        rule: decision.rule,
        action: TraceAction::DecideYes,
        n: inst.graph.n(),
        k: inst.k,
    });
    KernelOutcome::DecidedYes { decision, trace }
}
