//! Exhaustive reference implementations used to cross-check the solver.
//! Everything here is exponential and bounded by [`Bounds`].

use crate::bounds::Bounds;
use crate::decomposition::{biset_in_degree, p_unchecked, AtomDecomposition, BiSet};
use crate::error::{capacity, Result};
use crate::graph::{apply_orientation, crossing_edge_count, DirectedView, MixedGraph, Orientation, Subpartition};
use crate::orientation::{check_cover, CoverRequirement};
use crate::packing::kkt_demand;
use crate::set::VertexSet;

/// Every subpartition of `universe` (collections of disjoint nonempty parts,
/// the empty collection included). Parts are listed by ascending minimum.
pub fn subpartitions(universe: VertexSet) -> Vec<Vec<VertexSet>> {
    fn go(rest: VertexSet, current: &mut Vec<VertexSet>, out: &mut Vec<Vec<VertexSet>>) {
        let Some(v) = rest.min() else {
            out.push(current.clone());
            return;
        };
        let others = rest.without(v);
        go(others, current, out);
        for extra in others.subsets() {
            current.push(extra.with(v));
            go(others.difference(extra), current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(universe, &mut Vec::new(), &mut out);
    out
}

/// Members of `F` as `(atom, bi-set)`: nonempty inner set inside one atom and
/// an outer set adding any vertices outside that atom.
pub fn family_f(dec: &AtomDecomposition, vertex_count: usize) -> Vec<(usize, BiSet)> {
    let all = VertexSet::full(vertex_count);
    let mut out = Vec::new();
    for (j, &atom) in dec.atoms().iter().enumerate() {
        for inner in atom.subsets().skip(1) {
            for extra in all.difference(atom).subsets() {
                out.push((j, BiSet { outer: inner.union(extra), inner }));
            }
        }
    }
    out
}

/// `rho(X) >= |{i : r_i ∉ X, U_i ∩ X ≠ ∅}|` for every `X ⊆ V`, with the given `U_i`.
pub fn set_condition(d: &DirectedView, reach: &[VertexSet], roots: &[usize]) -> bool {
    d.vertices().subsets().all(|x| d.rho(x) >= kkt_demand(reach, roots, x))
}

/// `rho(X) >= p(X)` for every bi-set of `F`.
pub fn biset_condition(d: &DirectedView, dec: &AtomDecomposition, roots: &[usize]) -> bool {
    family_f(dec, d.vertex_count())
        .into_iter()
        .all(|(_, b)| biset_in_degree(d, b) >= p_unchecked(dec.reach(), roots, b))
}

/// Some orientation of `E` keeps every `U_i` reachable and satisfies the cut
/// condition, i.e. a packing exists.
pub fn brute_force_feasible(g: &MixedGraph, roots: &[usize], bounds: Bounds) -> Result<bool> {
    capacity("max fallback edges", bounds.max_fallback_edges, g.edges().len())?;
    capacity("max enumerated vertices", bounds.max_enum_vertices, g.vertex_count())?;
    let reach = g.mixed_reach_all(roots);
    for mask in 0..1u64 << g.edges().len() {
        let d = apply_orientation(g, &Orientation::from_mask(g, mask))?;
        if d.reach_all(roots) == reach && set_condition(&d, &reach, roots) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `e_E(P) + Σ rho_A(V_i) >= k·t` for every subpartition `{V_1..V_t}` of `V - r`.
pub fn check_frank_mixed_condition(g: &MixedGraph, root: usize, k: usize, bounds: Bounds) -> Result<bool> {
    capacity("max enumerated vertices", bounds.max_enum_vertices, g.vertex_count())?;
    if k == 0 {
        return Ok(true);
    }
    let d = DirectedView::from_arcs(g);
    for parts in subpartitions(g.vertices().without(root)) {
        let t = parts.len();
        let arcs: usize = parts.iter().map(|&x| d.rho(x)).sum();
        let p = Subpartition::new(parts)?;
        if crossing_edge_count(g, &p) + arcs < k * t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Some orientation of the auxiliary graph's edges covers `p_j`.
pub fn brute_force_cover_exists(req: &CoverRequirement) -> Result<bool> {
    let g = req.aux().graph();
    capacity("max fallback edges", req.bounds().max_fallback_edges, g.edges().len())?;
    for mask in 0..1u64 << g.edges().len() {
        if check_cover(req, &Orientation::from_mask(g, mask))?.is_none() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest deficit over subpartitions of `V_j` into members of `H_j` (0 for
/// the empty subpartition). Each part is a core set plus any terminals whose
/// heads it contains, so terminal choices are maximized per part.
pub fn brute_force_max_deficit(req: &CoverRequirement) -> Result<i64> {
    let aux = req.aux();
    let mut best = 0i64;
    for parts in subpartitions(aux.core()) {
        let mut total = 0i64;
        for &s in &parts {
            let available: VertexSet = aux
                .terminals()
                .iter()
                .filter(|t| s.contains(t.head))
                .map(|t| t.local)
                .collect();
            let mut part_best = i64::MIN;
            for ts in available.subsets() {
                part_best = part_best.max(req.requirement(s.union(ts))?);
            }
            total += part_best;
        }
        let p = Subpartition::new(parts)?;
        best = best.max(total - crossing_edge_count(aux.graph(), &p) as i64);
    }
    Ok(best)
}
