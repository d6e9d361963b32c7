//! Orienting the edges of an auxiliary graph so that it covers `p_j`.
//!
//! The requirement `h = p_j - rho_{A_j}` only sees the edges through the core
//! part `S = X ∩ Γ_j` of a set, so it is folded once into a table
//! `g(S) = max { h(X) : X ∈ H_j, X ∩ Γ_j = S }`. An orientation covers `p_j`
//! iff every core set `S` has at least `g(S)` oriented edges entering it.
//!
//! The search descends on the total shortfall by reversing directed paths.
//! When no single reversal helps, the maximum-deficit subpartition is computed
//! exactly; a positive deficit is returned as a certificate, otherwise every
//! orientation is tried.

use std::collections::VecDeque;

use crate::bounds::Bounds;
use crate::decomposition::{p_unchecked, AtomDecomposition, AuxiliaryGraph};
use crate::error::{capacity, Error, Result};
use crate::graph::{apply_orientation, crossing_edge_count, Orientation, Subpartition};
use crate::set::VertexSet;

/// The covering requirement of one atom, with its per-core-set table.
#[derive(Debug, Clone)]
pub struct CoverRequirement<'a> {
    aux: &'a AuxiliaryGraph,
    dec: &'a AtomDecomposition,
    roots: &'a [usize],
    bounds: Bounds,
    /// `(g(S), witness X)` indexed by the bits of `S`.
    table: Vec<(i64, VertexSet)>,
    demanding: Vec<(VertexSet, i64)>,
}

impl<'a> CoverRequirement<'a> {
    pub fn new(
        aux: &'a AuxiliaryGraph,
        dec: &'a AtomDecomposition,
        roots: &'a [usize],
        bounds: Bounds,
    ) -> Result<Self> {
        let n = aux.graph().vertex_count();
        capacity("max atom vertices", bounds.max_atom_vertices, n)?;
        let core_len = aux.core_len();
        let mut req = CoverRequirement {
            aux,
            dec,
            roots,
            bounds,
            table: vec![(i64::MIN, VertexSet::EMPTY); 1 << core_len],
            demanding: Vec::new(),
        };
        for x in aux.family_h() {
            let h = req.h_unchecked(x);
            let s = x.intersection(aux.core()).bits() as usize;
            if h > req.table[s].0 {
                req.table[s] = (h, x);
            }
        }
        let whole = req.h_unchecked(aux.graph().vertices());
        if whole != 0 {
            return Err(Error::Internal(format!(
                "requirement of the whole auxiliary graph of atom {} is {whole}, expected 0",
                aux.atom() + 1
            )));
        }
        req.demanding = (1..req.table.len())
            .filter(|&s| req.table[s].0 > 0)
            .map(|s| (VertexSet::from_bits(s as u64), req.table[s].0))
            .collect();
        Ok(req)
    }

    pub fn aux(&self) -> &AuxiliaryGraph {
        self.aux
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub(crate) fn p_j_unchecked(&self, x: VertexSet) -> usize {
        p_unchecked(self.dec.reach(), self.roots, self.aux.lift_unchecked(x))
    }

    fn h_unchecked(&self, x: VertexSet) -> i64 {
        self.p_j_unchecked(x) as i64 - self.aux.graph().arc_in_degree(x) as i64
    }

    /// `p_j(x) - rho_{A_j}(x)` for `x ∈ H_j`.
    pub fn requirement(&self, x: VertexSet) -> Result<i64> {
        if !x.is_subset(self.aux.graph().vertices()) || !self.aux.in_hj_unchecked(x) {
            return Err(Error::NotInFamily(format!("{:?}", self.aux.graph().set_names(x))));
        }
        Ok(self.h_unchecked(x))
    }

    /// Core sets with a positive requirement and their requirement `g(S)`.
    pub fn demanding_sets(&self) -> &[(VertexSet, i64)] {
        &self.demanding
    }

    fn edge_ends(&self) -> Vec<(usize, usize)> {
        self.aux.graph().edges().iter().map(|e| e.ends).collect()
    }

    fn shortfall(&self, dirs: &[(usize, usize)]) -> i64 {
        self.demanding
            .iter()
            .map(|&(s, g)| (g - entering(dirs, s)).max(0))
            .sum()
    }
}

fn entering(dirs: &[(usize, usize)], s: VertexSet) -> i64 {
    dirs.iter()
        .filter(|&&(t, h)| s.contains(h) && !s.contains(t))
        .count() as i64
}

/// A subpartition of `V_j` into members of `H_j` whose deficit is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubpartitionCertificate {
    pub atom: usize,
    pub parts: Subpartition,
    pub deficit: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOutcome {
    /// An orientation of the auxiliary graph's edges covering `p_j`.
    Covered(Orientation),
    Infeasible(SubpartitionCertificate),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoverStats {
    pub reversals: usize,
    /// The path-reversal descent stalled and the exact fallback ran.
    pub fallback: bool,
}

/// Orient `E_j` to cover `p_j`, starting from the ascending orientation.
pub fn orient_covering(req: &CoverRequirement) -> Result<CoverOutcome> {
    orient_covering_from(req, None).map(|(outcome, _)| outcome)
}

/// Same as [`orient_covering`] from a chosen starting orientation.
pub fn orient_covering_from(
    req: &CoverRequirement,
    initial: Option<&Orientation>,
) -> Result<(CoverOutcome, CoverStats)> {
    let g = req.aux.graph();
    let mut dirs = match initial {
        Some(o) => {
            // validates the domain
            apply_orientation(g, o)?;
            o.directions().to_vec()
        }
        None => Orientation::ascending(g).directions().to_vec(),
    };
    let mut stats = CoverStats::default();
    let core_len = req.aux.core_len();

    loop {
        let rho: Vec<i64> = req.demanding.iter().map(|&(s, _)| entering(&dirs, s)).collect();
        let phi: i64 = req
            .demanding
            .iter()
            .zip(&rho)
            .map(|(&(_, need), &r)| (need - r).max(0))
            .sum();
        if phi == 0 {
            return Ok((CoverOutcome::Covered(Orientation::new(g, dirs)?), stats));
        }

        let succ = successors(core_len, &dirs);
        // Reversing an s -> t path adds one entering edge to sets holding s
        // but not t, and removes one from sets holding t but not s.
        let mut deficient = vec![0u32; 1 << core_len];
        let mut at_risk = vec![0u32; 1 << core_len];
        for (&(set, need), &r) in req.demanding.iter().zip(&rho) {
            deficient[set.bits() as usize] = (need > r) as u32;
            at_risk[set.bits() as usize] = (need >= r) as u32;
        }
        superset_sums(&mut deficient, core_len);
        superset_sums(&mut at_risk, core_len);
        let pair = |s: usize, t: usize| (1usize << s) | (1usize << t);
        let mut best: Option<(i64, usize, usize)> = None;
        for s in 0..core_len {
            for t in reach(&succ, s).iter().filter(|&t| t != s) {
                let gained = deficient[1 << s] - deficient[pair(s, t)];
                let lost = at_risk[1 << t] - at_risk[pair(s, t)];
                let after = phi - gained as i64 + lost as i64;
                if best.is_none_or(|(b, _, _)| after < b) {
                    best = Some((after, s, t));
                }
            }
        }
        match best {
            Some((after, s, t)) if after < phi => {
                reverse_path(&succ, &mut dirs, s, t);
                stats.reversals += 1;
            }
            _ => break,
        }
    }

    stats.fallback = true;
    if let Some(cert) = max_deficit_subpartition(req)? {
        return Ok((CoverOutcome::Infeasible(cert), stats));
    }
    let ends = req.edge_ends();
    capacity("max fallback edges", req.bounds.max_fallback_edges, ends.len())?;
    for mask in 0u64..1 << ends.len() {
        let dirs: Vec<(usize, usize)> = ends
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 0 { (a, b) } else { (b, a) })
            .collect();
        if req.shortfall(&dirs) == 0 {
            return Ok((CoverOutcome::Covered(Orientation::new(g, dirs)?), stats));
        }
    }
    Err(Error::Internal(format!(
        "atom {}: no covering orientation although no subpartition has positive deficit",
        req.aux.atom() + 1
    )))
}

/// In place: `f[x]` becomes the sum of `f[m]` over all supersets `m ⊇ x`.
fn superset_sums(f: &mut [u32], bits: usize) {
    for i in 0..bits {
        for m in 0..f.len() {
            if m >> i & 1 == 0 {
                f[m] += f[m | 1 << i];
            }
        }
    }
}

/// Per vertex: `(edge index, head)` of each oriented edge leaving it.
fn successors(n: usize, dirs: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut succ = vec![Vec::new(); n];
    for (e, &(t, h)) in dirs.iter().enumerate() {
        succ[t].push((e, h));
    }
    succ
}

fn reach(succ: &[Vec<(usize, usize)>], s: usize) -> VertexSet {
    let mut seen = VertexSet::singleton(s);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(_, w) in &succ[u] {
            if !seen.contains(w) {
                seen.insert(w);
                queue.push_back(w);
            }
        }
    }
    seen
}

fn reverse_path(succ: &[Vec<(usize, usize)>], dirs: &mut [(usize, usize)], s: usize, t: usize) {
    let mut parent: Vec<Option<usize>> = vec![None; succ.len()];
    let mut seen = VertexSet::singleton(s);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            break;
        }
        for &(e, w) in &succ[u] {
            if !seen.contains(w) {
                seen.insert(w);
                parent[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    let mut v = t;
    while v != s {
        let e = parent[v].expect("t is reachable from s");
        let (tail, head) = dirs[e];
        dirs[e] = (head, tail);
        v = tail;
    }
}

/// `Σ (p_j(V^i) - rho_{A_j}(V^i)) - e_{E_j}(P)` for a subpartition of `V_j` into members of `H_j`.
pub fn subpartition_deficit(req: &CoverRequirement, p: &Subpartition) -> Result<i64> {
    let mut total = 0i64;
    for &part in p.parts() {
        total += req.requirement(part)?;
    }
    Ok(total - crossing_edge_count(req.aux.graph(), p) as i64)
}

/// The first set of `H_j`, in ascending mask order, that `o` leaves under-covered.
pub fn check_cover(req: &CoverRequirement, o: &Orientation) -> Result<Option<VertexSet>> {
    let d = apply_orientation(req.aux.graph(), o)?;
    Ok(req
        .aux
        .family_h()
        .find(|&x| (d.rho(x) as i64) < req.p_j_unchecked(x) as i64))
}

/// Exact maximum-deficit subpartition; `None` when the maximum is not positive.
///
/// Terminals carry no edges and each must sit with its head, so the parts
/// decouple into a subpartition of the core weighted by `g`. Ties prefer fewer
/// parts, then the smallest union mask, then the first split in submask order.
fn max_deficit_subpartition(req: &CoverRequirement) -> Result<Option<SubpartitionCertificate>> {
    let core_len = req.aux.core_len();
    let ends = req.edge_ends();
    let size = 1usize << core_len;
    let boundary_table: Vec<i64> = (0..size as u64)
        .map(|s| {
            let s = VertexSet::from_bits(s);
            ends.iter().filter(|&&(a, b)| s.contains(a) != s.contains(b)).count() as i64
        })
        .collect();
    let boundary = |s: u64| boundary_table[s as usize];
    // Dropping a part with g(S) <= 0 never lowers the deficit and saves a part,
    // so only demanding sets are used as parts.
    const NONE: i64 = i64::MIN / 4;
    let mut weight = vec![NONE; size];
    for &(set, need) in &req.demanding {
        let s = set.bits();
        weight[s as usize] = 2 * need - boundary(s);
    }
    // For a union M: best Σ (2 g(S) - d(S)) over partitions of M, the part
    // count, and the part holding M's lowest vertex.
    let mut value = vec![NONE; size];
    let mut count = vec![0u32; size];
    let mut first = vec![0u64; size];
    value[0] = 0;
    for m in 1..size as u64 {
        let low = m & m.wrapping_neg();
        let rest = m ^ low;
        let (mut top, mut top_count, mut top_first) = (NONE, u32::MAX, 0u64);
        let mut sub = rest;
        loop {
            let s = sub | low;
            let w = weight[s as usize];
            let tail = value[(m ^ s) as usize];
            if w != NONE && tail != NONE {
                let v = w + tail;
                let c = count[(m ^ s) as usize] + 1;
                if v > top || (v == top && c < top_count) {
                    (top, top_count, top_first) = (v, c, s);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        value[m as usize] = top;
        count[m as usize] = top_count;
        first[m as usize] = top_first;
    }

    let mut chosen: Option<(i64, u32, u64)> = None;
    for m in 1..size as u64 {
        if value[m as usize] == NONE {
            continue;
        }
        let total = value[m as usize] - boundary(m);
        let parts = count[m as usize];
        if chosen.is_none_or(|c| total > c.0 || (total == c.0 && parts < c.1)) {
            chosen = Some((total, parts, m));
        }
    }
    let Some((twice, _, mut m)) = chosen.filter(|c| c.0 > 0) else {
        return Ok(None);
    };
    if twice % 2 != 0 {
        return Err(Error::Internal("odd doubled deficit".into()));
    }
    let mut parts = Vec::new();
    while m != 0 {
        let s = first[m as usize];
        parts.push(req.table[s as usize].1);
        m ^= s;
    }
    let cert = SubpartitionCertificate {
        atom: req.aux.atom(),
        parts: Subpartition::new(parts)?,
        deficit: twice / 2,
    };
    let recomputed = subpartition_deficit(req, &cert.parts)?;
    if recomputed != cert.deficit {
        return Err(Error::Internal(format!(
            "certificate deficit {} does not recompute ({recomputed})",
            cert.deficit
        )));
    }
    Ok(Some(cert))
}
