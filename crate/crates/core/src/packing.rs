//! Packing reachability arborescences in a digraph.
//!
//! Atoms are handled one at a time in topological order. Inside an atom every
//! tree with a root index in `R_j` must reach every atom vertex, entering either
//! from its own root or through an arc from a vertex it already spans. The
//! per-atom search grows trees arc by arc and backtracks; after each tentative
//! arc it re-checks a Hall-type residual condition on every subset of the atom.

use std::fmt;

use crate::bounds::Bounds;
use crate::decomposition::{AtomDecomposition, RootSet};
use crate::error::{capacity, Error, Result};
use crate::graph::{DirectedArc, DirectedView};
use crate::set::VertexSet;

/// Arc indices (into a [`DirectedView`]) of one tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arborescence {
    pub root_index: usize,
    pub arcs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphPacking {
    pub trees: Vec<Arborescence>,
}

/// A failed validation check, as a human-readable message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

/// `|{i : r_i ∉ x, U_i ∩ x ≠ ∅}|`.
pub fn kkt_demand(reach: &[VertexSet], roots: &[usize], x: VertexSet) -> usize {
    reach
        .iter()
        .zip(roots)
        .filter(|(u, &r)| !x.contains(r) && !u.is_disjoint(x))
        .count()
}

/// First `x ⊆ V` (ascending mask order) with `rho(x)` below the demand, using
/// the reachability sets of `d` itself.
pub fn verify_kkt_condition(d: &DirectedView, roots: &[usize], bounds: Bounds) -> Result<Option<VertexSet>> {
    capacity("max enumerated vertices", bounds.max_enum_vertices, d.vertex_count())?;
    let reach = d.reach_all(roots);
    Ok(d
        .vertices()
        .subsets()
        .find(|&x| d.rho(x) < kkt_demand(&reach, roots, x)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackOutcome {
    Packed(DigraphPacking),
    /// A set violating the cut condition.
    Violated(VertexSet),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PackStats {
    pub backtracks: usize,
}

/// One atom's branching subproblem.
///
/// Vertices `0..core_len` of `view` must be spanned by every tree; the others
/// are terminals, which may only have outgoing arcs. `entries[i]` lists where
/// tree `i` may start: core vertices it already spans, or terminals whose arcs
/// it may use.
#[derive(Debug, Clone)]
pub struct AtomBranchingProblem<'a> {
    pub view: &'a DirectedView,
    pub core_len: usize,
    pub entries: Vec<VertexSet>,
}

struct Search<'a> {
    arcs: &'a [DirectedArc],
    core: VertexSet,
    terminals: VertexSet,
    entries: &'a [VertexSet],
    covered: Vec<VertexSet>,
    owner: Vec<Option<usize>>,
    /// `multiplicity[v][u]`: unused arcs `u -> v` between core vertices.
    multiplicity: Vec<Vec<u32>>,
    /// `levels[v][l]`: tails `u` with more than `l` unused arcs `u -> v`.
    levels: Vec<Vec<u64>>,
    /// Terminal arcs grouped by head.
    terminal_in: Vec<Vec<usize>>,
    /// Per terminal arc: the trees allowed to enter through it.
    terminal_trees: Vec<u64>,
    backtracks: usize,
}

impl Search<'_> {
    fn new<'a>(view: &'a DirectedView, core_len: usize, entries: &'a [VertexSet]) -> Search<'a> {
        let core = VertexSet::full(core_len);
        let arcs = view.arcs();
        let mut search = Search {
            arcs,
            core,
            terminals: view.vertices().difference(core),
            entries,
            covered: entries.iter().map(|e| e.intersection(core)).collect(),
            owner: vec![None; arcs.len()],
            multiplicity: vec![vec![0; core_len]; core_len],
            levels: vec![Vec::new(); core_len],
            terminal_in: vec![Vec::new(); core_len],
            terminal_trees: vec![0; arcs.len()],
            backtracks: 0,
        };
        for (a, arc) in arcs.iter().enumerate() {
            if core.contains(arc.tail) {
                search.set_internal(arc, true);
            } else {
                search.terminal_in[arc.head].push(a);
                search.terminal_trees[a] = (0..entries.len())
                    .filter(|&i| entries[i].contains(arc.tail))
                    .fold(0, |m, i| m | 1 << i);
            }
        }
        search
    }

    fn set_internal(&mut self, arc: &DirectedArc, unused: bool) {
        let (u, v) = (arc.tail, arc.head);
        let count = &mut self.multiplicity[v][u];
        let levels = &mut self.levels[v];
        if unused {
            if levels.len() <= *count as usize {
                levels.push(0);
            }
            levels[*count as usize] |= 1 << u;
            *count += 1;
        } else {
            *count -= 1;
            levels[*count as usize] &= !(1 << u);
        }
    }

    fn usable_by(&self, tree: usize, a: &DirectedArc) -> bool {
        self.core.contains(a.head)
            && !self.covered[tree].contains(a.head)
            && (self.covered[tree].contains(a.tail)
                || (self.terminals.contains(a.tail) && self.entries[tree].contains(a.tail)))
    }

    /// The trees spanning nothing in `y` can be matched to distinct unused
    /// arcs entering `y`.
    fn residual_ok_at(&self, y: VertexSet) -> bool {
        let active = (0..self.entries.len())
            .filter(|&i| self.covered[i].is_disjoint(y))
            .fold(0u64, |m, i| m | 1 << i);
        if active == 0 {
            return true;
        }
        let wanted = active.count_ones() as usize;
        let outside = !y.bits();
        let mut internal = 0usize;
        for v in y.iter() {
            for &tails in &self.levels[v] {
                internal += (tails & outside).count_ones() as usize;
            }
        }
        if internal >= wanted {
            return true;
        }
        // per unused terminal arc into y: which active trees could use it
        let usable: Vec<u64> = y
            .iter()
            .flat_map(|v| &self.terminal_in[v])
            .filter(|&&a| self.owner[a].is_none())
            .map(|&a| self.terminal_trees[a] & active)
            .filter(|&m| m != 0)
            .collect();
        if internal + usable.len() < wanted {
            return false;
        }
        // Hall: every group q of active trees needs |q| arcs usable by q.
        let mut q = active;
        while q != 0 {
            let reachable = usable.iter().filter(|&&m| m & q != 0).count();
            if internal + reachable < q.count_ones() as usize {
                return false;
            }
            q = (q - 1) & active;
        }
        true
    }

    fn residual_ok(&self) -> bool {
        self.core.subsets().skip(1).all(|y| self.residual_ok_at(y))
    }

    /// After covering `v`, only sets containing `v` can have changed.
    fn residual_ok_around(&self, v: usize) -> bool {
        self.core
            .without(v)
            .subsets()
            .all(|rest| self.residual_ok_at(rest.with(v)))
    }

    fn assign(&mut self, a: usize, tree: Option<usize>) {
        let arc = &self.arcs[a];
        if self.core.contains(arc.tail) {
            self.set_internal(arc, tree.is_none());
        }
        match tree {
            Some(i) => self.covered[i].insert(arc.head),
            None => {
                let i = self.owner[a].expect("arc was assigned");
                self.covered[i].remove(arc.head);
            }
        }
        self.owner[a] = tree;
    }

    fn run(&mut self) -> bool {
        let Some(tree) = (0..self.entries.len()).find(|&i| self.covered[i] != self.core) else {
            return true;
        };
        for a in 0..self.arcs.len() {
            if self.owner[a].is_some() || !self.usable_by(tree, &self.arcs[a]) {
                continue;
            }
            self.assign(a, Some(tree));
            if self.residual_ok_around(self.arcs[a].head) && self.run() {
                return true;
            }
            self.assign(a, None);
            self.backtracks += 1;
        }
        false
    }
}

/// Per-tree arc index lists solving one atom's subproblem, or `None`.
pub fn pack_atom_branchings(problem: &AtomBranchingProblem) -> Option<(Vec<Vec<usize>>, PackStats)> {
    let view = problem.view;
    let core = VertexSet::full(problem.core_len);
    let terminals = view.vertices().difference(core);
    if view
        .arcs()
        .iter()
        .any(|a| terminals.contains(a.head) || a.tail == a.head)
    {
        // self-loops are never usable and terminals must be sources
        let filtered: Vec<DirectedArc> = view
            .arcs()
            .iter()
            .filter(|a| !terminals.contains(a.head) && a.tail != a.head)
            .cloned()
            .collect();
        let index: Vec<usize> = view
            .arcs()
            .iter()
            .enumerate()
            .filter(|(_, a)| !terminals.contains(a.head) && a.tail != a.head)
            .map(|(i, _)| i)
            .collect();
        let sub = DirectedView::new(view.vertex_count(), filtered);
        let (trees, stats) = pack_atom_branchings(&AtomBranchingProblem {
            view: &sub,
            core_len: problem.core_len,
            entries: problem.entries.clone(),
        })?;
        let trees = trees
            .into_iter()
            .map(|t| t.into_iter().map(|a| index[a]).collect())
            .collect();
        return Some((trees, stats));
    }

    let mut search = Search::new(view, problem.core_len, &problem.entries);
    if !search.residual_ok() || !search.run() {
        return None;
    }
    let mut trees = vec![Vec::new(); problem.entries.len()];
    for (a, owner) in search.owner.iter().enumerate() {
        if let Some(i) = owner {
            trees[*i].push(a);
        }
    }
    Some((trees, PackStats { backtracks: search.backtracks }))
}

/// Arc-disjoint `r_i`-arborescences spanning the sets reachable in `d`, or a
/// violated cut.
pub fn pack_reachability(d: &DirectedView, roots: &[usize], bounds: Bounds) -> Result<PackOutcome> {
    pack_reachability_traced(d, roots, bounds).map(|(o, _)| o)
}

pub fn pack_reachability_traced(
    d: &DirectedView,
    roots: &[usize],
    bounds: Bounds,
) -> Result<(PackOutcome, PackStats)> {
    if let Some(&r) = roots.iter().find(|&&r| r >= d.vertex_count()) {
        return Err(Error::UnknownVertex(format!("#{r}")));
    }
    let dec = AtomDecomposition::from_reach(d.vertex_count(), d.reach_all(roots))?;
    let atom_of: Vec<Option<usize>> = (0..d.vertex_count()).map(|v| dec.atom_of(v)).collect();
    for a in d.arcs() {
        if let (Some(ju), Some(jv)) = (atom_of[a.tail], atom_of[a.head]) {
            if ju != jv && !dec.atom_roots()[ju].is_subset(dec.atom_roots()[jv]) {
                return Err(Error::Internal(format!(
                    "arc `{}` goes against the atom order",
                    a.id
                )));
            }
        }
    }

    let mut stats = PackStats::default();
    let mut trees: Vec<Vec<usize>> = vec![Vec::new(); roots.len()];
    for j in dec.topological_order() {
        let atom = dec.atoms()[j];
        let tree_ids: Vec<usize> = dec.atom_roots()[j].iter().collect();
        capacity("max atom vertices", bounds.max_atom_vertices, atom.len())?;
        capacity("max trees per atom", bounds.max_atom_vertices, tree_ids.len())?;

        let members: Vec<usize> = atom.iter().collect();
        let mut local = vec![usize::MAX; d.vertex_count()];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let mut arcs = Vec::new();
        let mut back = Vec::new();
        let mut terminal_tails = Vec::new();
        for (a, arc) in d.arcs().iter().enumerate() {
            if !atom.contains(arc.head) || arc.tail == arc.head {
                continue;
            }
            let tail = if atom.contains(arc.tail) {
                local[arc.tail]
            } else {
                terminal_tails.push(arc.tail);
                members.len() + terminal_tails.len() - 1
            };
            arcs.push(DirectedArc {
                id: arc.id.clone(),
                tail,
                head: local[arc.head],
                origin: arc.origin,
            });
            back.push(a);
        }
        if members.len() + terminal_tails.len() > crate::set::UNIVERSE_LIMIT {
            return Err(Error::Capacity {
                bound: "auxiliary vertex universe",
                limit: crate::set::UNIVERSE_LIMIT,
                actual: members.len() + terminal_tails.len(),
            });
        }
        let view = DirectedView::new(members.len() + terminal_tails.len(), arcs);
        let entries: Vec<VertexSet> = tree_ids
            .iter()
            .map(|&i| {
                if atom.contains(roots[i]) {
                    VertexSet::singleton(local[roots[i]])
                } else {
                    terminal_tails
                        .iter()
                        .enumerate()
                        .filter(|(_, &u)| dec.reach()[i].contains(u))
                        .map(|(t, _)| members.len() + t)
                        .collect()
                }
            })
            .collect();
        let problem = AtomBranchingProblem {
            view: &view,
            core_len: members.len(),
            entries,
        };
        match pack_atom_branchings(&problem) {
            Some((local_trees, s)) => {
                stats.backtracks += s.backtracks;
                for (k, arcs) in local_trees.into_iter().enumerate() {
                    trees[tree_ids[k]].extend(arcs.into_iter().map(|a| back[a]));
                }
            }
            None => {
                return match verify_kkt_condition(d, roots, bounds)? {
                    Some(x) => Ok((PackOutcome::Violated(x), stats)),
                    None => Err(Error::Internal(format!(
                        "branching search failed in atom {} although the cut condition holds",
                        j + 1
                    ))),
                };
            }
        }
    }
    let trees = trees
        .into_iter()
        .enumerate()
        .map(|(i, mut arcs)| {
            arcs.sort_unstable();
            Arborescence { root_index: i, arcs }
        })
        .collect();
    Ok((PackOutcome::Packed(DigraphPacking { trees }), stats))
}

/// Check that `arcs` form an arborescence rooted at `root` with vertex set exactly `span`.
/// Returns the failing message suffix, if any.
pub(crate) fn arborescence_defect(
    n: usize,
    root: usize,
    arcs: &[(usize, usize)],
    span: VertexSet,
) -> Option<String> {
    let mut vertices = VertexSet::singleton(root);
    let mut indeg = vec![0usize; n];
    for &(t, h) in arcs {
        vertices.insert(t);
        vertices.insert(h);
        indeg[h] += 1;
    }
    if vertices != span {
        return Some("span".into());
    }
    if indeg[root] != 0 {
        return Some("the root has an entering arc".into());
    }
    if let Some(v) = span.iter().find(|&v| v != root && indeg[v] != 1) {
        return Some(format!("vertex #{v} has in-degree {}", indeg[v]));
    }
    let mut succ = vec![Vec::new(); n];
    for &(t, h) in arcs {
        succ[t].push(h);
    }
    let mut seen = VertexSet::singleton(root);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &w in &succ[u] {
            if !seen.contains(w) {
                seen.insert(w);
                stack.push(w);
            }
        }
    }
    if seen != span {
        return Some("some vertices are not reached from the root".into());
    }
    None
}

/// Checks tree count, arc-disjointness, spans (`= U_i` in `d`) and arborescence shape.
pub fn validate_digraph_packing(
    d: &DirectedView,
    roots: &[usize],
    packing: &DigraphPacking,
) -> std::result::Result<(), Violation> {
    if packing.trees.len() != roots.len() {
        return Err(Violation(format!(
            "expected {} trees, found {}",
            roots.len(),
            packing.trees.len()
        )));
    }
    let mut used = vec![false; d.arcs().len()];
    for (i, tree) in packing.trees.iter().enumerate() {
        if tree.root_index != i {
            return Err(Violation(format!("tree {} has root index {}", i + 1, tree.root_index + 1)));
        }
        for &a in &tree.arcs {
            let Some(flag) = used.get_mut(a) else {
                return Err(Violation(format!("tree {} uses unknown arc #{a}", i + 1)));
            };
            if *flag {
                return Err(Violation(format!("arc {} used twice", d.arcs()[a].id)));
            }
            *flag = true;
        }
    }
    let reach = d.reach_all(roots);
    let pairs = |t: &Arborescence| -> Vec<(usize, usize)> {
        t.arcs.iter().map(|&a| (d.arcs()[a].tail, d.arcs()[a].head)).collect()
    };
    for (i, tree) in packing.trees.iter().enumerate() {
        if arborescence_defect(d.vertex_count(), roots[i], &pairs(tree), reach[i]).as_deref() == Some("span") {
            return Err(Violation(format!("tree {} does not span U_{}", i + 1, i + 1)));
        }
    }
    for (i, tree) in packing.trees.iter().enumerate() {
        if let Some(why) = arborescence_defect(d.vertex_count(), roots[i], &pairs(tree), reach[i]) {
            return Err(Violation(format!("tree {} is not an arborescence: {why}", i + 1)));
        }
    }
    Ok(())
}

/// Root-index sets of every vertex in `d`.
pub fn membership_vectors(d: &DirectedView, roots: &[usize]) -> Vec<RootSet> {
    let reach = d.reach_all(roots);
    (0..d.vertex_count())
        .map(|v| reach.iter().enumerate().filter(|(_, u)| u.contains(v)).map(|(i, _)| i).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{apply_orientation, parse_mixed_graph, Orientation};
    use proptest::prelude::*;

    /// FIG1 with every tree edge oriented away from its root and v2 -> v5.
    fn fig1_oriented() -> (crate::graph::Instance, DirectedView) {
        let inst = fig1();
        let g = &inst.graph;
        let o = Orientation::ascending(g);
        (inst.clone(), apply_orientation(g, &o).unwrap())
    }

    fn ids(d: &DirectedView, arcs: &[usize]) -> Vec<String> {
        let mut v: Vec<String> = arcs.iter().map(|&a| d.arcs()[a].id.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn kkt_on_fig1_orientation() {
        let (inst, d) = fig1_oriented();
        assert_eq!(verify_kkt_condition(&d, &inst.roots, Bounds::default()).unwrap(), None);
    }

    #[test]
    fn kkt_small_cases() {
        let ok = parse_mixed_graph("vertex r1\nvertex r2\nvertex v\narc r1 v\nroot r1\nroot r2\n").unwrap();
        let d = DirectedView::from_arcs(&ok.graph);
        assert_eq!(verify_kkt_condition(&d, &ok.roots, Bounds::default()).unwrap(), None);

        // v reachable from both roots but entered by one arc only
        let bad = parse_mixed_graph(
            "vertex r1\nvertex r2\nvertex v\nvertex w\narc r1 w\narc r2 w\narc w v\nroot r1\nroot r2\n",
        )
        .unwrap();
        let d = DirectedView::from_arcs(&bad.graph);
        let v = bad.graph.set_from_names(&["v"]).unwrap();
        assert_eq!(verify_kkt_condition(&d, &bad.roots, Bounds::default()).unwrap(), Some(v));
        assert!(matches!(
            pack_reachability(&d, &bad.roots, Bounds::default()).unwrap(),
            PackOutcome::Violated(x) if x == v
        ));
        let tight = Bounds { max_enum_vertices: 2, ..Bounds::default() };
        assert!(verify_kkt_condition(&d, &bad.roots, tight).is_err());
    }

    #[test]
    fn deleting_the_only_arc_shrinks_the_span() {
        let inst = parse_mixed_graph("vertex r1\nvertex r2\nvertex v\narc r1 v\nroot r1\nroot r2\n").unwrap();
        let full = DirectedView::from_arcs(&inst.graph);
        let reach = full.reach_all(&inst.roots);
        let empty = DirectedView::new(3, Vec::new());
        let v = inst.graph.set_from_names(&["v"]).unwrap();
        // measured against the spans of the full digraph, {v} is starved
        assert_eq!(kkt_demand(&reach, &inst.roots, v), 1);
        assert_eq!(empty.rho(v), 0);
        // measured against its own spans, the empty digraph packs trivially
        assert_eq!(verify_kkt_condition(&empty, &inst.roots, Bounds::default()).unwrap(), None);
        let PackOutcome::Packed(p) = pack_reachability(&empty, &inst.roots, Bounds::default()).unwrap() else {
            panic!()
        };
        assert!(p.trees.iter().all(|t| t.arcs.is_empty()));
    }

    #[test]
    fn pack_fig1() {
        let (inst, d) = fig1_oriented();
        let PackOutcome::Packed(p) = pack_reachability(&d, &inst.roots, Bounds::default()).unwrap() else {
            panic!()
        };
        validate_digraph_packing(&d, &inst.roots, &p).unwrap();
        assert_eq!(ids(&d, &p.trees[0].arcs), vec!["a1", "a2", "e1", "e2", "e3"]);
        assert_eq!(ids(&d, &p.trees[1].arcs), vec!["a3", "a4", "e4", "e5"]);
    }

    #[test]
    fn pack_single_arborescence() {
        let inst = parse_mixed_graph("vertex r\nvertex a\nvertex b\narc r a\narc a b\nroot r\n").unwrap();
        let d = DirectedView::from_arcs(&inst.graph);
        let PackOutcome::Packed(p) = pack_reachability(&d, &inst.roots, Bounds::default()).unwrap() else {
            panic!()
        };
        assert_eq!(p.trees[0].arcs, vec![0, 1]);
    }

    #[test]
    fn atom_branchings_of_fig1_middle_atom() {
        // local: v3 = 0, v4 = 1, terminals t(r1->v3) = 2, t(r1->v4) = 3, t(r2->v4) = 4
        let arc = |id: &str, tail, head| DirectedArc {
            id: id.into(),
            tail,
            head,
            origin: crate::graph::Origin::Arc(0),
        };
        let view = DirectedView::new(
            5,
            vec![arc("a1", 2, 0), arc("a2", 3, 1), arc("a3", 4, 1), arc("a4", 1, 0)],
        );
        let problem = AtomBranchingProblem {
            view: &view,
            core_len: 2,
            entries: vec![VertexSet::from_iter([2, 3]), VertexSet::singleton(4)],
        };
        let (trees, _) = pack_atom_branchings(&problem).unwrap();
        assert_eq!(trees, vec![vec![0, 1], vec![2, 3]]);

        let lone = DirectedView::new(1, vec![]);
        let (trees, _) = pack_atom_branchings(&AtomBranchingProblem {
            view: &lone,
            core_len: 1,
            entries: vec![VertexSet::singleton(0)],
        })
        .unwrap();
        assert_eq!(trees, vec![Vec::<usize>::new()]);

        let shared = DirectedView::new(2, vec![arc("a", 1, 0)]);
        assert!(pack_atom_branchings(&AtomBranchingProblem {
            view: &shared,
            core_len: 1,
            entries: vec![VertexSet::singleton(1), VertexSet::singleton(1)],
        })
        .is_none());
    }

    #[test]
    fn validator_reports_defects() {
        let (inst, d) = fig1_oriented();
        let PackOutcome::Packed(p) = pack_reachability(&d, &inst.roots, Bounds::default()).unwrap() else {
            panic!()
        };
        let a4 = d.arcs().iter().position(|a| a.id == "a4").unwrap();
        let mut moved = p.clone();
        moved.trees[1].arcs.retain(|&a| a != a4);
        moved.trees[0].arcs.push(a4);
        assert_eq!(
            validate_digraph_packing(&d, &inst.roots, &moved).unwrap_err().0,
            "tree 2 does not span U_2"
        );
        let mut shared = p.clone();
        shared.trees[1].arcs.push(p.trees[0].arcs[0]);
        let msg = validate_digraph_packing(&d, &inst.roots, &shared).unwrap_err().0;
        assert!(msg.starts_with("arc ") && msg.ends_with(" used twice"), "{msg}");
        let mut short = p.clone();
        short.trees.pop();
        assert!(validate_digraph_packing(&d, &inst.roots, &short).is_err());
    }

    fn arb_digraph() -> impl Strategy<Value = (DirectedView, Vec<usize>)> {
        (1usize..=7).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n), 0..=14),
                prop::collection::vec(0..n, 1..=3),
            )
                .prop_map(|(n, arcs, roots)| {
                    let arcs = arcs
                        .into_iter()
                        .enumerate()
                        .map(|(i, (t, h))| DirectedArc {
                            id: format!("a{i}"),
                            tail: t,
                            head: h,
                            origin: crate::graph::Origin::Arc(i),
                        })
                        .collect();
                    (DirectedView::new(n, arcs), roots)
                })
        })
    }

    proptest! {
        #[test]
        fn packing_iff_cut_condition((d, roots) in arb_digraph()) {
            let ok = verify_kkt_condition(&d, &roots, Bounds::default()).unwrap().is_none();
            match pack_reachability(&d, &roots, Bounds::default()).unwrap() {
                PackOutcome::Packed(p) => {
                    prop_assert!(ok);
                    prop_assert!(validate_digraph_packing(&d, &roots, &p).is_ok());
                    let reach = d.reach_all(&roots);
                    for t in &p.trees {
                        for &a in &t.arcs {
                            let arc = &d.arcs()[a];
                            prop_assert!(reach[t.root_index].contains(arc.tail));
                            prop_assert!(reach[t.root_index].contains(arc.head));
                        }
                    }
                }
                PackOutcome::Violated(x) => {
                    prop_assert!(!ok);
                    let reach = d.reach_all(&roots);
                    prop_assert!(d.rho(x) < kkt_demand(&reach, &roots, x));
                }
            }
        }
    }
}
