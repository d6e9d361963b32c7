//! Reachability sets, atoms, bi-sets, and the per-atom auxiliary graphs.

use crate::error::{capacity, Error, Result};
use crate::graph::{entering_arcs, induced, DirectedView, MixedGraph};
use crate::set::{VertexSet, UNIVERSE_LIMIT};

/// A set of root indices (0-based), packed like a [`VertexSet`].
pub type RootSet = VertexSet;

/// A nested pair `inner ⊆ outer` of vertex sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BiSet {
    pub outer: VertexSet,
    pub inner: VertexSet,
}

impl BiSet {
    pub fn new(outer: VertexSet, inner: VertexSet) -> Result<Self> {
        if !inner.is_subset(outer) {
            return Err(Error::Invalid("bi-set inner set is not contained in its outer set".into()));
        }
        Ok(BiSet { outer, inner })
    }

    /// The bi-set `(x, x)`.
    pub fn plain(x: VertexSet) -> Self {
        BiSet { outer: x, inner: x }
    }

    pub fn join(self, other: BiSet) -> BiSet {
        BiSet {
            outer: self.outer.union(other.outer),
            inner: self.inner.union(other.inner),
        }
    }

    pub fn meet(self, other: BiSet) -> BiSet {
        BiSet {
            outer: self.outer.intersection(other.outer),
            inner: self.inner.intersection(other.inner),
        }
    }

    /// `outer \ inner`.
    pub fn rim(self) -> VertexSet {
        self.outer.difference(self.inner)
    }
}

/// Reachability sets `U_i`, the atoms, and each atom's root index set `R_j`.
///
/// Atoms are ordered lexicographically by their sorted root index lists, which
/// makes the order independent of vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomDecomposition {
    reach: Vec<VertexSet>,
    atoms: Vec<VertexSet>,
    atom_roots: Vec<RootSet>,
}

impl AtomDecomposition {
    /// Group vertices by membership vector given precomputed reachability sets.
    pub fn from_reach(vertex_count: usize, reach: Vec<VertexSet>) -> Result<Self> {
        capacity("root count", UNIVERSE_LIMIT, reach.len())?;
        let mut classes: Vec<(Vec<usize>, RootSet, VertexSet)> = Vec::new();
        for v in 0..vertex_count {
            let member: RootSet = reach
                .iter()
                .enumerate()
                .filter(|(_, u)| u.contains(v))
                .map(|(i, _)| i)
                .collect();
            if member.is_empty() {
                continue;
            }
            match classes.iter_mut().find(|(_, m, _)| *m == member) {
                Some((_, _, atom)) => atom.insert(v),
                None => classes.push((member.iter().collect(), member, VertexSet::singleton(v))),
            }
        }
        classes.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(AtomDecomposition {
            reach,
            atom_roots: classes.iter().map(|c| c.1).collect(),
            atoms: classes.iter().map(|c| c.2).collect(),
        })
    }

    pub fn reach(&self) -> &[VertexSet] {
        &self.reach
    }

    pub fn atoms(&self) -> &[VertexSet] {
        &self.atoms
    }

    pub fn atom_roots(&self) -> &[RootSet] {
        &self.atom_roots
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Union of all reachability sets.
    pub fn covered(&self) -> VertexSet {
        self.atoms.iter().fold(VertexSet::EMPTY, |a, &b| a.union(b))
    }

    pub fn atom_of(&self, v: usize) -> Option<usize> {
        self.atoms.iter().position(|a| a.contains(v))
    }

    /// `{i : v ∈ U_i}`.
    pub fn membership(&self, v: usize) -> RootSet {
        self.reach
            .iter()
            .enumerate()
            .filter(|(_, u)| u.contains(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Atom indices ordered so that every arc between distinct atoms points forward.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.atoms.len()).collect();
        order.sort_by_key(|&j| (self.atom_roots[j].len(), j));
        order
    }
}

/// Mixed reachability sets of every root, grouped into atoms.
pub fn compute_atoms(g: &MixedGraph, roots: &[usize]) -> Result<AtomDecomposition> {
    if let Some(&r) = roots.iter().find(|&&r| r >= g.vertex_count()) {
        return Err(Error::UnknownVertex(format!("#{r}")));
    }
    AtomDecomposition::from_reach(g.vertex_count(), g.mixed_reach_all(roots))
}

/// Arcs of `d` with tail outside `x.outer` and head inside `x.inner`.
pub fn biset_in_degree(d: &DirectedView, x: BiSet) -> usize {
    d.arcs()
        .iter()
        .filter(|a| x.inner.contains(a.head) && !x.outer.contains(a.tail))
        .count()
}

/// Same count over the native arcs of a mixed graph.
pub fn biset_arc_in_degree(g: &MixedGraph, x: BiSet) -> usize {
    g.arcs()
        .iter()
        .filter(|a| x.inner.contains(a.head) && !x.outer.contains(a.tail))
        .count()
}

/// Number of root indices `i` with `inner ⊆ U_i`, `r_i ∉ inner` and `rim ∩ U_i = ∅`.
///
/// Repeated root vertices are counted once per index.
pub fn p_value(dec: &AtomDecomposition, roots: &[usize], x: BiSet) -> Result<usize> {
    if x.inner.is_empty() {
        return Err(Error::EmptyInner);
    }
    Ok(p_unchecked(dec.reach(), roots, x))
}

pub(crate) fn p_unchecked(reach: &[VertexSet], roots: &[usize], x: BiSet) -> usize {
    let rim = x.rim();
    reach
        .iter()
        .zip(roots)
        .filter(|(u, &r)| x.inner.is_subset(**u) && !x.inner.contains(r) && rim.is_disjoint(**u))
        .count()
}

/// The atom `j` with `x ∈ F_j`, if any.
pub fn in_family_f(dec: &AtomDecomposition, x: BiSet) -> Option<usize> {
    if x.inner.is_empty() || !x.inner.is_subset(x.outer) {
        return None;
    }
    let j = dec.atom_of(x.inner.min()?)?;
    let atom = dec.atoms()[j];
    (x.inner.is_subset(atom) && x.rim().is_disjoint(atom)).then_some(j)
}

/// Where an arc of an auxiliary graph comes from in the source graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxArcSource {
    /// An arc with both ends inside the atom.
    Internal(usize),
    /// The arc `t_a -> head(a)` standing in for the entering arc `a`.
    Terminal(usize),
}

/// A terminal vertex `t_a` for an arc `a = uv` entering the atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terminal {
    /// Local vertex index of `t_a`.
    pub local: usize,
    /// Index of `a` in the source graph.
    pub arc: usize,
    /// Original tail `u`.
    pub tail: usize,
    /// Local index of the head `v`.
    pub head: usize,
}

/// The graph `F_j`: the atom's induced subgraph plus one terminal per entering arc.
///
/// Local vertices `0..core_len` are the atom's vertices in ascending original
/// index; terminals follow in entering-arc order and are named `t:<arc-id>`.
#[derive(Debug, Clone)]
pub struct AuxiliaryGraph {
    atom: usize,
    graph: MixedGraph,
    core_len: usize,
    to_original: Vec<usize>,
    terminals: Vec<Terminal>,
    edge_origin: Vec<usize>,
    arc_origin: Vec<AuxArcSource>,
}

impl AuxiliaryGraph {
    pub fn atom(&self) -> usize {
        self.atom
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }

    /// Local indices of the atom's vertices.
    pub fn core(&self) -> VertexSet {
        VertexSet::full(self.core_len)
    }

    pub fn core_len(&self) -> usize {
        self.core_len
    }

    pub fn terminals(&self) -> &[Terminal] {
        &self.terminals
    }

    pub fn terminal_set(&self) -> VertexSet {
        self.terminals.iter().map(|t| t.local).collect()
    }

    /// Original vertex of a core-local index.
    pub fn original(&self, local: usize) -> usize {
        self.to_original[local]
    }

    /// Map a set of core-local indices to original vertices.
    pub fn to_original_set(&self, x: VertexSet) -> VertexSet {
        x.intersection(self.core()).iter().map(|v| self.to_original[v]).collect()
    }

    pub fn edge_origin(&self, local_edge: usize) -> usize {
        self.edge_origin[local_edge]
    }

    pub fn arc_origin(&self, local_arc: usize) -> AuxArcSource {
        self.arc_origin[local_arc]
    }

    fn check_local(&self, x: VertexSet) -> Result<()> {
        self.graph.check_subset(x)
    }

    pub(crate) fn consistent_unchecked(&self, x: VertexSet) -> bool {
        self.terminals
            .iter()
            .all(|t| !x.contains(t.local) || x.contains(t.head))
    }

    pub(crate) fn in_hj_unchecked(&self, x: VertexSet) -> bool {
        !x.is_disjoint(self.core()) && self.consistent_unchecked(x)
    }

    pub(crate) fn lift_unchecked(&self, x: VertexSet) -> BiSet {
        let inner = self.to_original_set(x);
        let tails: VertexSet = self
            .terminals
            .iter()
            .filter(|t| x.contains(t.local))
            .map(|t| t.tail)
            .collect();
        BiSet {
            outer: inner.union(tails),
            inner,
        }
    }

    /// Members of `H_j` in ascending mask order.
    pub fn family_h(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.graph
            .vertices()
            .subsets()
            .filter(move |&x| self.in_hj_unchecked(x))
    }
}

/// Build `F_j` for atom `j`.
pub fn build_auxiliary(g: &MixedGraph, dec: &AtomDecomposition, j: usize) -> Result<AuxiliaryGraph> {
    let atom = *dec.atoms().get(j).ok_or(Error::AtomOutOfRange(j))?;
    let entering = entering_arcs(g, atom);
    capacity("auxiliary vertex universe", UNIVERSE_LIMIT, atom.len() + entering.len())?;

    if let Some(e) = g
        .edges()
        .iter()
        .find(|e| atom.contains(e.ends.0) != atom.contains(e.ends.1))
    {
        return Err(Error::Internal(format!("edge `{}` leaves atom {}", e.id, j + 1)));
    }

    let to_original: Vec<usize> = atom.iter().collect();
    let mut local = vec![usize::MAX; g.vertex_count()];
    let mut graph = MixedGraph::new();
    for (i, &v) in to_original.iter().enumerate() {
        local[v] = i;
        graph.add_vertex(g.name(v))?;
    }

    let (edges, arcs) = induced(g, atom);
    let mut edge_origin = Vec::with_capacity(edges.len());
    for e in edges {
        let edge = &g.edges()[e];
        graph.add_edge(local[edge.ends.0], local[edge.ends.1], edge.id.clone())?;
        edge_origin.push(e);
    }
    let mut arc_origin = Vec::new();
    for a in arcs {
        let arc = &g.arcs()[a];
        graph.add_arc(local[arc.tail], local[arc.head], arc.id.clone())?;
        arc_origin.push(AuxArcSource::Internal(a));
    }
    let mut terminals = Vec::with_capacity(entering.len());
    for a in entering {
        let arc = &g.arcs()[a];
        let name = format!("t:{}", arc.id);
        let t = graph.add_vertex(name.clone())?;
        graph.add_arc(t, local[arc.head], name)?;
        arc_origin.push(AuxArcSource::Terminal(a));
        terminals.push(Terminal {
            local: t,
            arc: a,
            tail: arc.tail,
            head: local[arc.head],
        });
    }

    Ok(AuxiliaryGraph {
        atom: j,
        graph,
        core_len: to_original.len(),
        to_original,
        terminals,
        edge_origin,
        arc_origin,
    })
}

/// Every terminal in `x` has its head in `x`.
pub fn is_consistent(aux: &AuxiliaryGraph, x: VertexSet) -> Result<bool> {
    aux.check_local(x)?;
    Ok(aux.consistent_unchecked(x))
}

/// `x ∈ H_j`: consistent and meeting the atom.
pub fn in_hj(aux: &AuxiliaryGraph, x: VertexSet) -> Result<bool> {
    aux.check_local(x)?;
    Ok(aux.in_hj_unchecked(x))
}

fn require_hj(aux: &AuxiliaryGraph, x: VertexSet) -> Result<()> {
    if in_hj(aux, x)? {
        Ok(())
    } else {
        Err(Error::NotInFamily(format!(
            "{:?} is not in H_{}",
            aux.graph.set_names(x),
            aux.atom + 1
        )))
    }
}

/// The bi-set `B(x)` over the original vertices: each terminal adds its arc's tail
/// to the outer set.
pub fn lift_biset(aux: &AuxiliaryGraph, x: VertexSet) -> Result<BiSet> {
    require_hj(aux, x)?;
    Ok(aux.lift_unchecked(x))
}

/// `p_j(x) = p(B(x))`.
pub fn p_j_value(
    aux: &AuxiliaryGraph,
    dec: &AtomDecomposition,
    roots: &[usize],
    x: VertexSet,
) -> Result<usize> {
    require_hj(aux, x)?;
    p_value(dec, roots, aux.lift_unchecked(x))
}
