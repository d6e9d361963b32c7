#![allow(dead_code)]

use mixpack::graph::{Instance, MixedGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Upper limits for random instances; the lower limits are 1 vertex, 1 root, no edges or arcs.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub vertices: usize,
    pub edges: usize,
    pub arcs: usize,
    pub roots: usize,
}

pub const ORACLE_SCALE: Shape = Shape {
    vertices: 7,
    edges: 8,
    arcs: 10,
    roots: 3,
};

pub fn build(n: usize, edges: &[(usize, usize)], arcs: &[(usize, usize)], roots: &[usize]) -> Instance {
    let mut graph = MixedGraph::new();
    for v in 0..n {
        graph.add_vertex(format!("v{v}")).unwrap();
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        graph.add_edge(a, b, format!("e{}", i + 1)).unwrap();
    }
    for (i, &(t, h)) in arcs.iter().enumerate() {
        graph.add_arc(t, h, format!("a{}", i + 1)).unwrap();
    }
    Instance {
        graph,
        roots: roots.to_vec(),
    }
}

fn pairs(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<(usize, usize)> {
    (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

pub fn random_instance(rng: &mut ChaCha8Rng, shape: Shape) -> Instance {
    let n = rng.gen_range(1..=shape.vertices);
    let m_e = rng.gen_range(0..=shape.edges);
    let m_a = rng.gen_range(0..=shape.arcs);
    let k = rng.gen_range(1..=shape.roots);
    let edges = pairs(rng, n, m_e);
    let arcs = pairs(rng, n, m_a);
    let roots: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    build(n, &edges, &arcs, &roots)
}

/// A random instance whose roots are all `v0`, with every vertex reachable
/// from it: a random spanning tree of edges and outward arcs, plus extras.
pub fn single_root_instance(rng: &mut ChaCha8Rng, max_vertices: usize, max_extra: usize, max_k: usize) -> Instance {
    let n = rng.gen_range(2..=max_vertices);
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        if rng.gen_bool(0.5) {
            edges.push(if rng.gen_bool(0.5) { (parent, v) } else { (v, parent) });
        } else {
            arcs.push((parent, v));
        }
    }
    for _ in 0..rng.gen_range(0..=max_extra) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if rng.gen_bool(0.5) {
            edges.push((a, b));
        } else {
            arcs.push((a, b));
        }
    }
    let k = rng.gen_range(1..=max_k);
    build(n, &edges, &arcs, &vec![0; k])
}
