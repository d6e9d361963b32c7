//! The end-to-end solver: atoms, per-atom orientation, digraph packing, and
//! the mapping back to mixed trees or to a bi-set family certificate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::Bounds;
use crate::decomposition::{
    biset_arc_in_degree, build_auxiliary, compute_atoms, in_family_f, p_unchecked, AtomDecomposition,
    AuxiliaryGraph, BiSet,
};
use crate::error::{Error, Result};
use crate::graph::{apply_orientation, crossing_edge_count, MixedGraph, Orientation, Origin, Subpartition};
use crate::orientation::{orient_covering_from, CoverOutcome, CoverRequirement, SubpartitionCertificate};
use crate::packing::{arborescence_defect, membership_vectors, pack_reachability, PackOutcome, Violation};
use crate::set::VertexSet;

/// An edge used by a tree in the direction `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: usize,
    pub tail: usize,
    pub head: usize,
}

/// One mixed tree: native arcs (indices into `g.arcs()`) and oriented edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MixedTree {
    pub root_index: usize,
    pub arcs: Vec<usize>,
    pub edges: Vec<OrientedEdge>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MixedPacking {
    pub trees: Vec<MixedTree>,
}

/// A family of bi-sets over one atom violating the packing condition:
/// `lhs = e_E(inner sets) + Σ rho_A(X)` is below `rhs = Σ p(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSetFamilyCertificate {
    pub atom: usize,
    pub bisets: Vec<BiSet>,
    pub lhs: usize,
    pub rhs: usize,
}

impl BiSetFamilyCertificate {
    pub fn deficit(&self) -> i64 {
        self.rhs as i64 - self.lhs as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Packed {
        packing: MixedPacking,
        /// The orientation of every edge used to build the packing.
        orientation: Orientation,
    },
    Infeasible(BiSetFamilyCertificate),
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Solution::Packed { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub bounds: Bounds,
    /// Worker threads for the per-atom orientation step.
    pub jobs: usize,
    /// Randomize the starting orientation of each atom's edges.
    pub seed: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            bounds: Bounds::default(),
            jobs: 1,
            seed: None,
        }
    }
}

/// The orientation of `aux`'s edges induced by an orientation of the source graph.
pub fn restrict_orientation(g: &MixedGraph, aux: &AuxiliaryGraph, o: &Orientation) -> Result<Orientation> {
    let mut local = vec![usize::MAX; g.vertex_count()];
    for v in 0..aux.core_len() {
        local[aux.original(v)] = v;
    }
    let dirs = (0..aux.graph().edges().len())
        .map(|e| {
            let (t, h) = o.direction(aux.edge_origin(e));
            (local[t], local[h])
        })
        .collect();
    Orientation::new(aux.graph(), dirs)
}

pub(crate) fn starting_orientation(aux: &AuxiliaryGraph, seed: Option<u64>) -> Orientation {
    match seed {
        None => Orientation::ascending(aux.graph()),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (aux.atom() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let m = aux.graph().edges().len();
            let mask = if m == 0 { 0 } else { rng.gen::<u64>() & (u64::MAX >> (64 - m)) };
            Orientation::from_mask(aux.graph(), mask)
        }
    }
}

fn orient_atom(
    g: &MixedGraph,
    dec: &AtomDecomposition,
    roots: &[usize],
    opts: &SolveOptions,
    j: usize,
) -> Result<std::result::Result<(AuxiliaryGraph, Orientation), BiSetFamilyCertificate>> {
    let aux = build_auxiliary(g, dec, j)?;
    let req = CoverRequirement::new(&aux, dec, roots, opts.bounds)?;
    let start = starting_orientation(&aux, opts.seed);
    match orient_covering_from(&req, Some(&start))?.0 {
        CoverOutcome::Covered(o) => Ok(Ok((aux, o))),
        CoverOutcome::Infeasible(sc) => Ok(Err(certificate_from_subpartition(g, roots, dec, &aux, &sc)?)),
    }
}

/// Decide the instance and build a packing or a certificate.
pub fn solve(g: &MixedGraph, roots: &[usize], opts: &SolveOptions) -> Result<Solution> {
    let dec = compute_atoms(g, roots)?;
    let run = |j: usize| orient_atom(g, &dec, roots, opts, j);
    let per_atom: Vec<_> = if opts.jobs <= 1 {
        (0..dec.len()).map(run).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(|| (0..dec.len()).into_par_iter().map(run).collect())
    };

    let mut dirs = Orientation::ascending(g).directions().to_vec();
    for outcome in per_atom {
        match outcome? {
            Err(cert) => return Ok(Solution::Infeasible(cert)),
            Ok((aux, o)) => {
                for (e, &(t, h)) in o.directions().iter().enumerate() {
                    dirs[aux.edge_origin(e)] = (aux.original(t), aux.original(h));
                }
            }
        }
    }
    let orientation = Orientation::new(g, dirs)?;
    let d = apply_orientation(g, &orientation)?;

    let before: Vec<VertexSet> = (0..g.vertex_count()).map(|v| dec.membership(v)).collect();
    if membership_vectors(&d, roots) != before {
        return Err(Error::Internal("orientation changed the reachability classes".into()));
    }

    let packing = match pack_reachability(&d, roots, opts.bounds)? {
        PackOutcome::Packed(p) => p,
        PackOutcome::Violated(x) => {
            return Err(Error::Internal(format!(
                "oriented graph violates the cut condition at {:?}",
                g.set_names(x)
            )))
        }
    };
    let trees = packing
        .trees
        .iter()
        .map(|t| {
            let mut tree = MixedTree {
                root_index: t.root_index,
                ..MixedTree::default()
            };
            for &a in &t.arcs {
                let arc = &d.arcs()[a];
                match arc.origin {
                    Origin::Arc(i) => tree.arcs.push(i),
                    Origin::Edge(e) => tree.edges.push(OrientedEdge {
                        edge: e,
                        tail: arc.tail,
                        head: arc.head,
                    }),
                }
            }
            tree.arcs.sort_unstable();
            tree.edges.sort_unstable();
            tree
        })
        .collect();
    let packing = MixedPacking { trees };
    validate_mixed_packing(g, roots, &packing)
        .map_err(|v| Error::Internal(format!("constructed packing rejected: {v}")))?;
    Ok(Solution::Packed { packing, orientation })
}

/// Checks tree count, id validity, edge- and arc-disjointness, spans
/// (`= U_i` from mixed reachability in `g`) and arborescence shape.
pub fn validate_mixed_packing(
    g: &MixedGraph,
    roots: &[usize],
    mp: &MixedPacking,
) -> std::result::Result<(), Violation> {
    if mp.trees.len() != roots.len() {
        return Err(Violation(format!("expected {} trees, found {}", roots.len(), mp.trees.len())));
    }
    if let Some(&r) = roots.iter().find(|&&r| r >= g.vertex_count()) {
        return Err(Violation(format!("root #{r} is not a vertex")));
    }
    let mut arc_used = vec![false; g.arcs().len()];
    let mut edge_used = vec![false; g.edges().len()];
    for (i, tree) in mp.trees.iter().enumerate() {
        if tree.root_index != i {
            return Err(Violation(format!("tree {} has root index {}", i + 1, tree.root_index + 1)));
        }
        for &a in &tree.arcs {
            let Some(flag) = arc_used.get_mut(a) else {
                return Err(Violation(format!("tree {} uses unknown arc #{a}", i + 1)));
            };
            if *flag {
                return Err(Violation(format!("arc {} used twice", g.arcs()[a].id)));
            }
            *flag = true;
        }
        for oe in &tree.edges {
            let Some(edge) = g.edges().get(oe.edge) else {
                return Err(Violation(format!("tree {} uses unknown edge #{}", i + 1, oe.edge)));
            };
            if (oe.tail, oe.head) != edge.ends && (oe.head, oe.tail) != edge.ends {
                return Err(Violation(format!("edge {} does not join its stated ends", edge.id)));
            }
            if edge_used[oe.edge] {
                return Err(Violation(format!("edge {} used twice", edge.id)));
            }
            edge_used[oe.edge] = true;
        }
    }
    let reach = g.mixed_reach_all(roots);
    let pairs = |t: &MixedTree| -> Vec<(usize, usize)> {
        t.arcs
            .iter()
            .map(|&a| (g.arcs()[a].tail, g.arcs()[a].head))
            .chain(t.edges.iter().map(|oe| (oe.tail, oe.head)))
            .collect()
    };
    for (i, tree) in mp.trees.iter().enumerate() {
        if arborescence_defect(g.vertex_count(), roots[i], &pairs(tree), reach[i]).as_deref() == Some("span") {
            return Err(Violation(format!("tree {} does not span U_{}", i + 1, i + 1)));
        }
    }
    for (i, tree) in mp.trees.iter().enumerate() {
        if let Some(why) = arborescence_defect(g.vertex_count(), roots[i], &pairs(tree), reach[i]) {
            return Err(Violation(format!("tree {} is not an arborescence: {why}", i + 1)));
        }
    }
    Ok(())
}

/// Lift each part through `B` and recompute both sides over the source graph.
pub fn certificate_from_subpartition(
    g: &MixedGraph,
    roots: &[usize],
    dec: &AtomDecomposition,
    aux: &AuxiliaryGraph,
    sc: &SubpartitionCertificate,
) -> Result<BiSetFamilyCertificate> {
    if sc.deficit <= 0 {
        return Err(Error::Invalid(format!(
            "subpartition deficit is {}, a certificate needs a positive deficit",
            sc.deficit
        )));
    }
    if sc.atom != aux.atom() {
        return Err(Error::Invalid(format!(
            "certificate is for atom {} but the auxiliary graph is for atom {}",
            sc.atom + 1,
            aux.atom() + 1
        )));
    }
    let mut bisets = Vec::with_capacity(sc.parts.len());
    for &part in sc.parts.parts() {
        bisets.push(crate::decomposition::lift_biset(aux, part)?);
    }
    let (lhs, rhs) = certificate_sides(g, roots, dec, &bisets)?;
    if lhs >= rhs {
        return Err(Error::Internal(format!(
            "lifted certificate for atom {} is not violated: {lhs} >= {rhs}",
            aux.atom() + 1
        )));
    }
    Ok(BiSetFamilyCertificate {
        atom: aux.atom(),
        bisets,
        lhs,
        rhs,
    })
}

fn certificate_sides(
    g: &MixedGraph,
    roots: &[usize],
    dec: &AtomDecomposition,
    bisets: &[BiSet],
) -> Result<(usize, usize)> {
    let inner = Subpartition::new(bisets.iter().map(|b| b.inner).collect())?;
    let lhs = crossing_edge_count(g, &inner) + bisets.iter().map(|&b| biset_arc_in_degree(g, b)).sum::<usize>();
    let rhs = bisets.iter().map(|&b| p_unchecked(dec.reach(), roots, b)).sum();
    Ok((lhs, rhs))
}

/// Outcome of [`verify_certificate`]; a rejection carries the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateVerdict {
    Accepted { lhs: usize, rhs: usize },
    Rejected(String),
}

impl CertificateVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CertificateVerdict::Accepted { .. })
    }
}

/// Recompute both sides from `g` alone and accept iff the family is well formed
/// over one atom, strictly violated, and agrees with the recorded sides.
pub fn verify_certificate(g: &MixedGraph, roots: &[usize], cert: &BiSetFamilyCertificate) -> CertificateVerdict {
    use CertificateVerdict::Rejected;
    if let Some(&r) = roots.iter().find(|&&r| r >= g.vertex_count()) {
        return Rejected(format!("root #{r} is not a vertex"));
    }
    let dec = match compute_atoms(g, roots) {
        Ok(dec) => dec,
        Err(e) => return Rejected(e.to_string()),
    };
    if cert.atom >= dec.len() {
        return Rejected(format!("atom {} does not exist", cert.atom + 1));
    }
    if cert.bisets.is_empty() {
        return Rejected("empty family".into());
    }
    let all = g.vertices();
    for b in &cert.bisets {
        if !b.outer.is_subset(all) || !b.inner.is_subset(b.outer) {
            return Rejected("malformed bi-set".into());
        }
        if b.inner.is_empty() {
            return Rejected("bi-set with an empty inner set".into());
        }
        if in_family_f(&dec, *b) != Some(cert.atom) {
            return Rejected(format!(
                "bi-set ({:?}, {:?}) does not belong to atom {}",
                g.set_names(b.outer),
                g.set_names(b.inner),
                cert.atom + 1
            ));
        }
    }
    let (lhs, rhs) = match certificate_sides(g, roots, &dec, &cert.bisets) {
        Ok(sides) => sides,
        Err(_) => return Rejected("not a subpartition".into()),
    };
    if lhs >= rhs {
        return Rejected(format!("not violated: {lhs} >= {rhs}"));
    }
    if (lhs, rhs) != (cert.lhs, cert.rhs) {
        return Rejected(format!(
            "recorded sides {} < {} differ from recomputed {lhs} < {rhs}",
            cert.lhs, cert.rhs
        ));
    }
    CertificateVerdict::Accepted { lhs, rhs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::parse_mixed_graph;

    fn packed(s: Solution) -> MixedPacking {
        match s {
            Solution::Packed { packing, .. } => packing,
            Solution::Infeasible(c) => panic!("unexpected certificate {c:?}"),
        }
    }

    #[test]
    fn fig1_is_packed() {
        let inst = fig1();
        let g = &inst.graph;
        let p = packed(solve(g, &inst.roots, &SolveOptions::default()).unwrap());
        validate_mixed_packing(g, &inst.roots, &p).unwrap();
        let span = |t: &MixedTree| -> VertexSet {
            let mut s = VertexSet::singleton(inst.roots[t.root_index]);
            for &a in &t.arcs {
                s.insert(g.arcs()[a].head);
            }
            for oe in &t.edges {
                s.insert(oe.head);
            }
            s
        };
        assert_eq!(span(&p.trees[0]), set(g, &["r1", "v1", "v2", "v3", "v4", "v5"]));
        assert_eq!(span(&p.trees[1]), set(g, &["r2", "v3", "v4", "v6", "v7"]));
    }

    #[test]
    fn seeds_and_jobs_still_pack_fig1() {
        let inst = fig1();
        for seed in 0..20 {
            let opts = SolveOptions {
                seed: Some(seed),
                jobs: 1 + (seed as usize % 3),
                ..SolveOptions::default()
            };
            let p = packed(solve(&inst.graph, &inst.roots, &opts).unwrap());
            validate_mixed_packing(&inst.graph, &inst.roots, &p).unwrap();
        }
    }

    #[test]
    fn arborescence_of_arcs_comes_back() {
        let inst = parse_mixed_graph("vertex r\nvertex a\nvertex b\nvertex c\narc r a\narc r b\narc b c\nroot r\n").unwrap();
        let p = packed(solve(&inst.graph, &inst.roots, &SolveOptions::default()).unwrap());
        assert_eq!(p.trees[0].arcs, vec![0, 1, 2]);
        assert!(p.trees[0].edges.is_empty());
    }

    #[test]
    fn no_roots_gives_empty_packing() {
        let inst = parse_mixed_graph("vertex a\nvertex b\nedge a b\n").unwrap();
        let p = packed(solve(&inst.graph, &[], &SolveOptions::default()).unwrap());
        assert!(p.trees.is_empty());
    }

    #[test]
    fn infeas3_certificate() {
        let inst = infeas3();
        let g = &inst.graph;
        let Solution::Infeasible(cert) = solve(g, &inst.roots, &SolveOptions::default()).unwrap() else {
            panic!()
        };
        assert_eq!((cert.lhs, cert.rhs, cert.deficit()), (2, 4, 2));
        let expected: Vec<BiSet> = ["r1", "r2", "x"].iter().map(|v| BiSet::plain(set(g, &[v]))).collect();
        let mut got = cert.bisets.clone();
        got.sort_by_key(|b| b.inner.bits());
        assert_eq!(got, expected);
        assert_eq!(verify_certificate(g, &inst.roots, &cert), CertificateVerdict::Accepted { lhs: 2, rhs: 4 });

        let mut dropped = cert.clone();
        dropped.bisets.retain(|b| b.inner != set(g, &["x"]));
        assert_eq!(
            verify_certificate(g, &inst.roots, &dropped),
            CertificateVerdict::Rejected("not violated: 2 >= 2".into())
        );

        let mut overlapping = cert.clone();
        overlapping.bisets.push(BiSet::plain(set(g, &["x"])));
        assert_eq!(
            verify_certificate(g, &inst.roots, &overlapping),
            CertificateVerdict::Rejected("not a subpartition".into())
        );

        let mut stale = cert;
        stale.rhs = 5;
        assert!(!verify_certificate(g, &inst.roots, &stale).is_accepted());
    }

    #[test]
    fn zero_deficit_subpartition_is_rejected() {
        let inst = fig1();
        let g = &inst.graph;
        let dec = compute_atoms(g, &inst.roots).unwrap();
        let aux = build_auxiliary(g, &dec, 1).unwrap();
        let sc = SubpartitionCertificate {
            atom: 1,
            parts: Subpartition::new(vec![VertexSet::full(2)]).unwrap(),
            deficit: 0,
        };
        assert!(matches!(
            certificate_from_subpartition(g, &inst.roots, &dec, &aux, &sc),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn terminal_part_lifts_to_biset_with_tail() {
        let inst = fig1();
        let g = &inst.graph;
        let dec = compute_atoms(g, &inst.roots).unwrap();
        let aux = build_auxiliary(g, &dec, 1).unwrap();
        let v3 = 0;
        let t = aux.graph().vertex("t:a5").unwrap();
        let b = crate::decomposition::lift_biset(&aux, VertexSet::from_iter([v3, t])).unwrap();
        assert_eq!(b, BiSet::new(set(g, &["v1", "v3"]), set(g, &["v3"])).unwrap());
        assert_eq!(p_unchecked(dec.reach(), &inst.roots, b), 1);
        assert_eq!(biset_arc_in_degree(g, b), 2);
    }

    #[test]
    fn mixed_validator_defects() {
        let inst = fig1();
        let g = &inst.graph;
        let p = packed(solve(g, &inst.roots, &SolveOptions::default()).unwrap());
        let e6 = g.edge_by_id("e6").unwrap();
        let (v2, v5) = (g.vertex("v2").unwrap(), g.vertex("v5").unwrap());

        // both trees use v2-v5, in opposite directions
        let mut twice = p.clone();
        twice.trees[0].edges.retain(|oe| oe.edge != e6);
        twice.trees[0].edges.push(OrientedEdge { edge: e6, tail: v2, head: v5 });
        twice.trees[1].edges.push(OrientedEdge { edge: e6, tail: v5, head: v2 });
        assert_eq!(validate_mixed_packing(g, &inst.roots, &twice).unwrap_err().0, "edge e6 used twice");

        let v4 = g.vertex("v4").unwrap();
        let mut omit = p.clone();
        omit.trees[0].arcs.retain(|&a| g.arcs()[a].head != v4);
        assert_eq!(
            validate_mixed_packing(g, &inst.roots, &omit).unwrap_err().0,
            "tree 1 does not span U_1"
        );

        let mut bad_ends = p;
        bad_ends.trees[0].edges[0].head = v4;
        assert!(validate_mixed_packing(g, &inst.roots, &bad_ends).is_err());
    }
}
