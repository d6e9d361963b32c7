//! JSON documents read and written by the command-line tool.
//!
//! Every document carries `"format": 1`. Vertices, arcs and edges are named by
//! their ids from the input file; tree, root and atom indices are 1-based.

use serde::{Deserialize, Serialize};

use crate::decomposition::{AtomDecomposition, BiSet};
use crate::error::{Error, Result};
use crate::graph::{MixedGraph, Subpartition};
use crate::orientation::SubpartitionCertificate;
use crate::pipeline::{BiSetFamilyCertificate, MixedPacking, MixedTree, OrientedEdge};
use crate::set::VertexSet;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcOrigin {
    Arc,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDoc {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub origin: ArcOrigin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDoc {
    pub index: usize,
    pub root: String,
    pub arcs: Vec<ArcDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingDoc {
    pub format: u32,
    pub kind: String,
    pub trees: Vec<TreeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiSetDoc {
    pub outer: Vec<String>,
    pub inner: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub format: u32,
    pub kind: String,
    pub atom: usize,
    pub bisets: Vec<BiSetDoc>,
    pub lhs: usize,
    pub rhs: usize,
    pub deficit: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomDoc {
    pub index: usize,
    pub vertices: Vec<String>,
    pub roots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomsDoc {
    pub format: u32,
    pub kind: String,
    pub atoms: Vec<AtomDoc>,
}

/// A per-atom orientation certificate; parts may contain terminals `t:<arc-id>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubpartitionDoc {
    pub format: u32,
    pub kind: String,
    pub atom: usize,
    pub parts: Vec<Vec<String>>,
    pub deficit: i64,
}

fn names(g: &MixedGraph, x: VertexSet) -> Vec<String> {
    g.set_names(x).into_iter().map(str::to_owned).collect()
}

fn check_header(format: u32, kind: &str, expected: &str) -> Result<()> {
    if format != FORMAT_VERSION {
        return Err(Error::Invalid(format!("unsupported format version {format}")));
    }
    if kind != expected {
        return Err(Error::Invalid(format!("expected a `{expected}` document, found `{kind}`")));
    }
    Ok(())
}

pub fn packing_doc(g: &MixedGraph, roots: &[usize], mp: &MixedPacking) -> PackingDoc {
    let trees = mp
        .trees
        .iter()
        .map(|t| {
            let arcs = t
                .arcs
                .iter()
                .map(|&a| {
                    let arc = &g.arcs()[a];
                    ArcDoc {
                        id: arc.id.clone(),
                        tail: g.name(arc.tail).to_owned(),
                        head: g.name(arc.head).to_owned(),
                        origin: ArcOrigin::Arc,
                    }
                })
                .chain(t.edges.iter().map(|oe| ArcDoc {
                    id: g.edges()[oe.edge].id.clone(),
                    tail: g.name(oe.tail).to_owned(),
                    head: g.name(oe.head).to_owned(),
                    origin: ArcOrigin::Edge,
                }))
                .collect();
            TreeDoc {
                index: t.root_index + 1,
                root: g.name(roots[t.root_index]).to_owned(),
                arcs,
            }
        })
        .collect();
    PackingDoc {
        format: FORMAT_VERSION,
        kind: "packing".into(),
        trees,
    }
}

/// Resolve a packing document against `g`. Arc endpoints must match the arc;
/// edge endpoints are checked later by the validator.
pub fn packing_from_doc(g: &MixedGraph, roots: &[usize], doc: &PackingDoc) -> Result<MixedPacking> {
    check_header(doc.format, &doc.kind, "packing")?;
    let mut trees = Vec::with_capacity(doc.trees.len());
    for t in &doc.trees {
        if t.index == 0 {
            return Err(Error::Invalid("tree indices are 1-based".into()));
        }
        let root_index = t.index - 1;
        if let Some(&r) = roots.get(root_index) {
            if g.name(r) != t.root {
                return Err(Error::Invalid(format!(
                    "tree {} names root `{}` but root {} is `{}`",
                    t.index,
                    t.root,
                    t.index,
                    g.name(r)
                )));
            }
        }
        let mut tree = MixedTree {
            root_index,
            ..MixedTree::default()
        };
        for a in &t.arcs {
            let (tail, head) = (g.vertex(&a.tail)?, g.vertex(&a.head)?);
            match a.origin {
                ArcOrigin::Arc => {
                    let i = g
                        .arc_by_id(&a.id)
                        .ok_or_else(|| Error::Invalid(format!("unknown arc `{}`", a.id)))?;
                    let arc = &g.arcs()[i];
                    if (arc.tail, arc.head) != (tail, head) {
                        return Err(Error::Invalid(format!("arc `{}` does not go {} -> {}", a.id, a.tail, a.head)));
                    }
                    tree.arcs.push(i);
                }
                ArcOrigin::Edge => {
                    let edge = g
                        .edge_by_id(&a.id)
                        .ok_or_else(|| Error::Invalid(format!("unknown edge `{}`", a.id)))?;
                    tree.edges.push(OrientedEdge { edge, tail, head });
                }
            }
        }
        trees.push(tree);
    }
    Ok(MixedPacking { trees })
}

pub fn certificate_doc(g: &MixedGraph, cert: &BiSetFamilyCertificate) -> CertificateDoc {
    CertificateDoc {
        format: FORMAT_VERSION,
        kind: "certificate".into(),
        atom: cert.atom + 1,
        bisets: cert
            .bisets
            .iter()
            .map(|b| BiSetDoc {
                outer: names(g, b.outer),
                inner: names(g, b.inner),
            })
            .collect(),
        lhs: cert.lhs,
        rhs: cert.rhs,
        deficit: cert.deficit(),
    }
}

pub fn certificate_from_doc(g: &MixedGraph, doc: &CertificateDoc) -> Result<BiSetFamilyCertificate> {
    check_header(doc.format, &doc.kind, "certificate")?;
    if doc.atom == 0 {
        return Err(Error::Invalid("atom indices are 1-based".into()));
    }
    let bisets = doc
        .bisets
        .iter()
        .map(|b| BiSet::new(g.set_from_names(&b.outer)?, g.set_from_names(&b.inner)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(BiSetFamilyCertificate {
        atom: doc.atom - 1,
        bisets,
        lhs: doc.lhs,
        rhs: doc.rhs,
    })
}

pub fn atoms_doc(g: &MixedGraph, dec: &AtomDecomposition) -> AtomsDoc {
    AtomsDoc {
        format: FORMAT_VERSION,
        kind: "atoms".into(),
        atoms: dec
            .atoms()
            .iter()
            .zip(dec.atom_roots())
            .enumerate()
            .map(|(j, (&atom, roots))| AtomDoc {
                index: j + 1,
                vertices: names(g, atom),
                roots: roots.iter().map(|i| i + 1).collect(),
            })
            .collect(),
    }
}

/// `aux` is the auxiliary graph the certificate's parts index into.
pub fn subpartition_doc(aux: &MixedGraph, sc: &SubpartitionCertificate) -> SubpartitionDoc {
    SubpartitionDoc {
        format: FORMAT_VERSION,
        kind: "subpartition".into(),
        atom: sc.atom + 1,
        parts: sc.parts.parts().iter().map(|&p| names(aux, p)).collect(),
        deficit: sc.deficit,
    }
}

pub fn subpartition_from_doc(aux: &MixedGraph, doc: &SubpartitionDoc) -> Result<SubpartitionCertificate> {
    check_header(doc.format, &doc.kind, "subpartition")?;
    let parts = doc
        .parts
        .iter()
        .map(|p| aux.set_from_names(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubpartitionCertificate {
        atom: doc.atom.checked_sub(1).ok_or_else(|| Error::Invalid("atom indices are 1-based".into()))?,
        parts: Subpartition::new(parts)?,
        deficit: doc.deficit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::compute_atoms;
    use crate::graph::fixtures::*;
    use crate::pipeline::{solve, validate_mixed_packing, verify_certificate, Solution, SolveOptions};

    #[test]
    fn packing_round_trip() {
        let inst = fig1();
        let g = &inst.graph;
        let Solution::Packed { packing, .. } = solve(g, &inst.roots, &SolveOptions::default()).unwrap() else {
            panic!()
        };
        let doc = packing_doc(g, &inst.roots, &packing);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with(r#"{"format":1,"kind":"packing","trees":[{"index":1,"root":"r1""#));
        let back: PackingDoc = serde_json::from_str(&text).unwrap();
        let mp = packing_from_doc(g, &inst.roots, &back).unwrap();
        assert_eq!(mp, packing);
        validate_mixed_packing(g, &inst.roots, &mp).unwrap();
    }

    #[test]
    fn certificate_round_trip() {
        let inst = infeas3();
        let g = &inst.graph;
        let Solution::Infeasible(cert) = solve(g, &inst.roots, &SolveOptions::default()).unwrap() else {
            panic!()
        };
        let doc = certificate_doc(g, &cert);
        assert_eq!((doc.atom, doc.lhs, doc.rhs, doc.deficit), (1, 2, 4, 2));
        let value = serde_json::to_value(&doc).unwrap();
        assert_eq!(value["format"], 1);
        let back = certificate_from_doc(g, &serde_json::from_value(value).unwrap()).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(g, &inst.roots, &back).is_accepted());
    }

    #[test]
    fn atoms_of_fig1() {
        let inst = fig1();
        let dec = compute_atoms(&inst.graph, &inst.roots).unwrap();
        let doc = atoms_doc(&inst.graph, &dec);
        let roots: Vec<Vec<usize>> = doc.atoms.iter().map(|a| a.roots.clone()).collect();
        assert_eq!(roots, vec![vec![1], vec![1, 2], vec![2]]);
        assert_eq!(doc.atoms[1].vertices, vec!["v3", "v4"]);
    }

    #[test]
    fn rejects_wrong_headers() {
        let inst = fig1();
        let doc = PackingDoc {
            format: 2,
            kind: "packing".into(),
            trees: vec![],
        };
        assert!(packing_from_doc(&inst.graph, &inst.roots, &doc).is_err());
        let doc = PackingDoc {
            format: 1,
            kind: "certificate".into(),
            trees: vec![],
        };
        assert!(packing_from_doc(&inst.graph, &inst.roots, &doc).is_err());
    }
}
