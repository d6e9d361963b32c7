//! Mixed multigraph model, orientations and the cut primitives used everywhere else.
//!
//! Vertices are addressed by dense indices assigned in declaration order; every
//! "deterministic order" in this crate means ascending index. Self-loops are kept
//! in the model but never cross a cut, so they drop out of every count.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::set::{VertexSet, UNIVERSE_LIMIT};

/// An undirected edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(&self, v: usize) -> Option<usize> {
        match self.ends {
            (a, b) if a == v => Some(b),
            (a, b) if b == v => Some(a),
            _ => None,
        }
    }
}

/// A directed arc `tail -> head`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Arc {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A mixed multigraph `(V; E, A)`. Parallel edges and arcs are distinguished by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MixedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    arcs: Vec<Arc>,
    edge_ids: HashSet<String>,
    arc_ids: HashSet<String>,
}

impl MixedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateId(name));
        }
        if self.names.len() == UNIVERSE_LIMIT {
            return Err(Error::Capacity {
                bound: "vertex universe",
                limit: UNIVERSE_LIMIT,
                actual: UNIVERSE_LIMIT + 1,
            });
        }
        let v = self.names.len();
        self.index.insert(name.clone(), v);
        self.names.push(name);
        Ok(v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, id: impl Into<String>) -> Result<usize> {
        let id = id.into();
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.edge_ids.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        self.edges.push(Edge { id, ends: (u, v) });
        Ok(self.edges.len() - 1)
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, id: impl Into<String>) -> Result<usize> {
        let id = id.into();
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if !self.arc_ids.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        self.arcs.push(Arc { id, tail, head });
        Ok(self.arcs.len() - 1)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.names.len())
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn arc_by_id(&self, id: &str) -> Option<usize> {
        self.arcs.iter().position(|a| a.id == id)
    }

    pub fn set_names(&self, x: VertexSet) -> Vec<&str> {
        x.iter().map(|v| self.name(v)).collect()
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names
            .iter()
            .map(|n| self.vertex(n.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(VertexSet::from_iter)
    }

    pub(crate) fn check_subset(&self, x: VertexSet) -> Result<()> {
        if x.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!(
                "#{}",
                x.difference(self.vertices()).min().unwrap_or(0)
            )))
        }
    }

    /// Number of arcs of `A` entering `x` (tail outside, head inside).
    pub fn arc_in_degree(&self, x: VertexSet) -> usize {
        self.arcs
            .iter()
            .filter(|a| x.contains(a.head) && !x.contains(a.tail))
            .count()
    }

    /// Adjacency lists treating each edge as two opposite arcs.
    fn mixed_successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.names.len()];
        for a in &self.arcs {
            succ[a.tail].push(a.head);
        }
        for e in &self.edges {
            succ[e.ends.0].push(e.ends.1);
            succ[e.ends.1].push(e.ends.0);
        }
        succ
    }

    /// Mixed-reachable sets for several sources at once.
    pub fn mixed_reach_all(&self, sources: &[usize]) -> Vec<VertexSet> {
        let succ = self.mixed_successors();
        sources.iter().map(|&s| bfs(&succ, s)).collect()
    }
}

fn bfs(succ: &[Vec<usize>], s: usize) -> VertexSet {
    let mut seen = VertexSet::singleton(s);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &w in &succ[u] {
            if !seen.contains(w) {
                seen.insert(w);
                queue.push_back(w);
            }
        }
    }
    seen
}

/// A mixed graph together with its ordered root list `r_1, .., r_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: MixedGraph,
    pub roots: Vec<usize>,
}

/// Parses the line-based instance format:
///
/// ```text
/// vertex <id>
/// edge <id1> <id2> [<edge-id>]
/// arc <tail-id> <head-id> [<arc-id>]
/// root <id>
/// ```
///
/// `#` starts a comment. Vertices may be declared anywhere in the document.
pub fn parse_mixed_graph(text: &str) -> Result<Instance> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(n, line)| {
            let line = line.split('#').next().unwrap_or("");
            (n + 1, line.split_whitespace().collect::<Vec<_>>())
        })
        .filter(|(_, toks)| !toks.is_empty())
        .collect();

    let syntax = |line: usize, message: String| Error::Syntax { line, message };

    let mut graph = MixedGraph::new();
    for (line, toks) in &lines {
        if toks[0] == "vertex" {
            if toks.len() != 2 {
                return Err(syntax(*line, "expected `vertex <id>`".into()));
            }
            if toks[1].starts_with("t:") {
                return Err(Error::ReservedId(toks[1].to_string()));
            }
            graph.add_vertex(toks[1]).map_err(|e| match e {
                Error::Capacity { .. } => e,
                other => syntax(*line, other.to_string()),
            })?;
        }
    }

    let lookup = |graph: &MixedGraph, line: usize, name: &str| {
        graph
            .vertex(name)
            .map_err(|_| syntax(line, format!("unknown vertex `{name}`")))
    };

    let mut roots = Vec::new();
    let (mut edge_no, mut arc_no) = (0usize, 0usize);
    for (line, toks) in &lines {
        match toks[0] {
            "vertex" => {}
            "edge" | "arc" => {
                if !(3..=4).contains(&toks.len()) {
                    return Err(syntax(
                        *line,
                        format!("expected `{} <id1> <id2> [<id>]`", toks[0]),
                    ));
                }
                let u = lookup(&graph, *line, toks[1])?;
                let v = lookup(&graph, *line, toks[2])?;
                let res = if toks[0] == "edge" {
                    edge_no += 1;
                    let id = toks.get(3).map_or_else(|| format!("e{edge_no}"), |s| s.to_string());
                    graph.add_edge(u, v, id)
                } else {
                    arc_no += 1;
                    let id = toks.get(3).map_or_else(|| format!("a{arc_no}"), |s| s.to_string());
                    graph.add_arc(u, v, id)
                };
                res.map_err(|e| syntax(*line, e.to_string()))?;
            }
            "root" => {
                if toks.len() != 2 {
                    return Err(syntax(*line, "expected `root <id>`".into()));
                }
                roots.push(lookup(&graph, *line, toks[1])?);
            }
            other => return Err(syntax(*line, format!("unknown declaration `{other}`"))),
        }
    }
    Ok(Instance { graph, roots })
}

/// Vertices reachable from `s` by a mixed path: arcs tail to head, edges either way.
pub fn mixed_reachable_set(g: &MixedGraph, s: usize) -> Result<VertexSet> {
    g.check_vertex(s).map_err(|_| Error::UnknownVertex(format!("#{s}")))?;
    Ok(g.mixed_reach_all(&[s])[0])
}

/// Arcs of `A` entering `x`, ascending by arc index.
pub fn entering_arcs(g: &MixedGraph, x: VertexSet) -> Vec<usize> {
    g.arcs()
        .iter()
        .enumerate()
        .filter(|(_, a)| x.contains(a.head) && !x.contains(a.tail))
        .map(|(i, _)| i)
        .collect()
}

/// Non-loop edges and arcs with both endpoints in `x`.
pub fn induced(g: &MixedGraph, x: VertexSet) -> (Vec<usize>, Vec<usize>) {
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_loop() && x.contains(e.ends.0) && x.contains(e.ends.1))
        .map(|(i, _)| i)
        .collect();
    let arcs = g
        .arcs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_loop() && x.contains(a.tail) && x.contains(a.head))
        .map(|(i, _)| i)
        .collect();
    (edges, arcs)
}

/// Pairwise-disjoint nonempty vertex sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subpartition {
    parts: Vec<VertexSet>,
}

impl Subpartition {
    pub fn new(parts: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::EMPTY;
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::InvalidSubpartition(format!("part {} is empty", i + 1)));
            }
            if !p.is_disjoint(seen) {
                return Err(Error::InvalidSubpartition(format!(
                    "part {} overlaps an earlier part",
                    i + 1
                )));
            }
            seen = seen.union(*p);
        }
        Ok(Subpartition { parts })
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn union(&self) -> VertexSet {
        self.parts.iter().fold(VertexSet::EMPTY, |a, &p| a.union(p))
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// `e_E(P)`: edges with an endpoint in some part but not both endpoints in one part.
/// Edges between a part and the outside of all parts count.
pub fn crossing_edge_count(g: &MixedGraph, p: &Subpartition) -> usize {
    let part_of = |v: usize| p.parts().iter().position(|x| x.contains(v));
    g.edges()
        .iter()
        .filter(|e| {
            let (a, b) = (part_of(e.ends.0), part_of(e.ends.1));
            (a.is_some() || b.is_some()) && a != b
        })
        .count()
}

/// A total orientation of a graph's edges, indexed by edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    directions: Vec<(usize, usize)>,
}

impl Orientation {
    /// Build from explicit `(tail, head)` pairs; each pair must match the edge's ends.
    pub fn new(g: &MixedGraph, directions: Vec<(usize, usize)>) -> Result<Self> {
        let o = Orientation { directions };
        o.check(g)?;
        Ok(o)
    }

    /// Every edge from its smaller to its larger endpoint index.
    pub fn ascending(g: &MixedGraph) -> Self {
        let directions = g
            .edges()
            .iter()
            .map(|e| (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1)))
            .collect();
        Orientation { directions }
    }

    /// Orient edge `i` forward (`ends.0 -> ends.1`) iff bit `i` of `mask` is clear.
    pub fn from_mask(g: &MixedGraph, mask: u64) -> Self {
        let directions = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if mask >> i & 1 == 0 {
                    e.ends
                } else {
                    (e.ends.1, e.ends.0)
                }
            })
            .collect();
        Orientation { directions }
    }

    pub fn from_ids(g: &MixedGraph, map: &HashMap<String, (usize, usize)>) -> Result<Self> {
        if map.len() != g.edges().len() {
            return Err(Error::OrientationMismatch(format!(
                "{} directions for {} edges",
                map.len(),
                g.edges().len()
            )));
        }
        let directions = g
            .edges()
            .iter()
            .map(|e| {
                map.get(&e.id)
                    .copied()
                    .ok_or_else(|| Error::OrientationMismatch(format!("edge `{}` not oriented", e.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        Orientation::new(g, directions)
    }

    pub fn direction(&self, edge: usize) -> (usize, usize) {
        self.directions[edge]
    }

    pub fn directions(&self) -> &[(usize, usize)] {
        &self.directions
    }

    fn check(&self, g: &MixedGraph) -> Result<()> {
        if self.directions.len() != g.edges().len() {
            return Err(Error::OrientationMismatch(format!(
                "{} directions for {} edges",
                self.directions.len(),
                g.edges().len()
            )));
        }
        for (e, &(t, h)) in g.edges().iter().zip(&self.directions) {
            if (t, h) != e.ends && (h, t) != e.ends {
                return Err(Error::OrientationMismatch(format!(
                    "edge `{}` cannot be oriented {} -> {}",
                    e.id, t, h
                )));
            }
        }
        Ok(())
    }
}

/// Where an arc of a [`DirectedView`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    /// Native arc, by index into the source graph's arcs.
    Arc(usize),
    /// Oriented edge, by index into the source graph's edges.
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedArc {
    /// Id of the native arc or of the edge it orients.
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub origin: Origin,
}

/// A digraph: native arcs first (in index order), then oriented edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedView {
    vertex_count: usize,
    arcs: Vec<DirectedArc>,
}

impl DirectedView {
    pub fn new(vertex_count: usize, arcs: Vec<DirectedArc>) -> Self {
        DirectedView { vertex_count, arcs }
    }

    /// The arcs of `g` alone; edges are ignored.
    pub fn from_arcs(g: &MixedGraph) -> Self {
        let arcs = g
            .arcs()
            .iter()
            .enumerate()
            .map(|(i, a)| DirectedArc {
                id: a.id.clone(),
                tail: a.tail,
                head: a.head,
                origin: Origin::Arc(i),
            })
            .collect();
        DirectedView::new(g.vertex_count(), arcs)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count)
    }

    pub fn arcs(&self) -> &[DirectedArc] {
        &self.arcs
    }

    /// `rho(x)` without membership validation.
    pub fn rho(&self, x: VertexSet) -> usize {
        self.arcs
            .iter()
            .filter(|a| x.contains(a.head) && !x.contains(a.tail))
            .count()
    }

    pub fn reachable(&self, s: usize) -> VertexSet {
        self.reach_all(&[s])[0]
    }

    pub fn reach_all(&self, sources: &[usize]) -> Vec<VertexSet> {
        let mut succ = vec![Vec::new(); self.vertex_count];
        for a in &self.arcs {
            succ[a.tail].push(a.head);
        }
        sources.iter().map(|&s| bfs(&succ, s)).collect()
    }
}

/// Number of arcs of `d` entering `x`.
pub fn in_degree(d: &DirectedView, x: VertexSet) -> Result<usize> {
    if !x.is_subset(d.vertices()) {
        return Err(Error::UnknownVertex(format!(
            "#{}",
            x.difference(d.vertices()).min().unwrap_or(0)
        )));
    }
    Ok(d.rho(x))
}

/// Native arcs plus one arc per edge in the direction chosen by `o`.
pub fn apply_orientation(g: &MixedGraph, o: &Orientation) -> Result<DirectedView> {
    o.check(g)?;
    let mut view = DirectedView::from_arcs(g);
    view.arcs.extend(
        o.directions
            .iter()
            .enumerate()
            .map(|(i, &(tail, head))| DirectedArc {
                id: g.edges()[i].id.clone(),
                tail,
                head,
                origin: Origin::Edge(i),
            }),
    );
    Ok(view)
}
