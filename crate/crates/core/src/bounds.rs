/// Limits on the exhaustive enumerations used by the solver and the oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest auxiliary graph `|V_j|` whose family `H_j` is enumerated.
    pub max_atom_vertices: usize,
    /// Largest `|E_j|` for the exhaustive orientation fallback.
    pub max_fallback_edges: usize,
    /// Largest `|V|` for whole-graph subset enumeration.
    pub max_enum_vertices: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_atom_vertices: 20,
            max_fallback_edges: 16,
            max_enum_vertices: 20,
        }
    }
}
