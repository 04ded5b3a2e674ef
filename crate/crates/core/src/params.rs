//! Derived solver constants for `k` pairs and `c` cliques.

/// Constants steering the acceptable-set machinery and the auxiliary search
/// digraph. All of them follow from `k` and `c`; overriding any value marks
/// the whole bundle, because completeness guarantees only hold for the
/// derived values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parameters {
    pub k: usize,
    pub c: usize,
    /// Cross-clique wiggle allowance per member.
    pub z: usize,
    /// Global wiggle allowance per member along the vertex enumeration.
    pub w: usize,
    /// Cardinality bound for the sequence families of a restricted set.
    pub r: usize,
    /// Length bound for the sequences of a restricted set.
    pub s: usize,
    /// Bound on the overlap `B+ ∩ A-` a restricted-set witness may leave
    /// undetermined.
    pub t: usize,
    /// Cardinality bound for coloured edge sets in the auxiliary digraph.
    pub k_bound: usize,
    pub overridden: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParamOverrides {
    pub z: Option<usize>,
    pub w: Option<usize>,
    pub r: Option<usize>,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub k_bound: Option<usize>,
}

impl ParamOverrides {
    pub fn is_empty(&self) -> bool {
        *self == ParamOverrides::default()
    }
}

pub fn compute_parameters(k: usize, c: usize, overrides: &ParamOverrides) -> Parameters {
    assert!(k >= 1, "contract violation: k >= 1");
    assert!(c >= 1, "contract violation: c >= 1");
    let z = c * (c * (k * k + k + 1) + k + 2);
    let w = c * (c - 1) * (z + 1) + 1;
    let r = c * k * w;
    let s = k * k + k + 3;
    let t = 2 * c * s * k * w + c * (2 * w + 1) * k * k * (k * k + k + 1);
    let k_bound = k * (2 * w - 1);
    Parameters {
        k,
        c,
        z: overrides.z.unwrap_or(z),
        w: overrides.w.unwrap_or(w),
        r: overrides.r.unwrap_or(r),
        s: overrides.s.unwrap_or(s),
        t: overrides.t.unwrap_or(t),
        k_bound: overrides.k_bound.unwrap_or(k_bound),
        overridden: !overrides.is_empty(),
    }
}

impl Parameters {
    /// Exponent in the worst-case state count of the auxiliary digraph,
    /// `|V(G)|^(4rs + 8w)`; order (ck)^5 for large parameters.
    pub fn size_exponent(&self) -> usize {
        4 * self.r * self.s + 8 * self.w
    }
}
