//! Dynkin diagrams and root-system isomorphisms.
//!
//! Covers the passage between the three layers of symmetry data: diagram
//! isomorphisms (vertex bijections preserving decorations), root-system
//! isomorphisms (linear maps preserving the root set and root integers), and
//! the semidirect splitting `Aut(Δ) = W(Δ) ⋊ Aut(DD)` relative to a chamber.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{rat, LinalgError, LinearMap, Rat, Vector};
use crate::rootsys::RootSystem;
use crate::weyl::{
    generate_weyl, longest_element, to_dominant, SimpleSystem, WeylElement, WeylError,
};

#[derive(Debug, Error)]
pub enum AutosError {
    #[error("diagram map is not an isomorphism between the given diagrams")]
    NotADiagramIsomorphism,
    #[error("linear extension of a diagram isomorphism failed verification: {0}")]
    InternalConsistency(IsoRefusal),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Why a candidate linear map was refused as a root-system isomorphism.
/// Carries the first violated condition with witness roots.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoRefusal {
    #[error("root counts differ: {0} vs {1}")]
    CountMismatch(usize, usize),
    #[error("image of root {alpha} is not a root of the target system")]
    RootEscapes { alpha: usize },
    #[error("roots {alpha} and {beta} map to the same target root")]
    NotInjective { alpha: usize, beta: usize },
    #[error("root integer n({alpha},{beta}) is not preserved")]
    IntegerMismatch { alpha: usize, beta: usize },
    #[error("root {alpha} lies outside the domain span")]
    OutsideSpan { alpha: usize },
    #[error("conformal factor not constant on component {component}")]
    ConformalInconsistency { component: usize },
}

/// One vertex of a Dynkin diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramVertex {
    /// Index of the simple root in the parent system's root list.
    pub root: usize,
    /// True when twice the simple root is itself a root (drawn as two
    /// concentric circles).
    pub doubled: bool,
}

/// One edge: `bond` lines between vertex positions `a < b`, with the arrow
/// pointing at the shorter root when the lengths differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramEdge {
    pub a: usize,
    pub b: usize,
    pub bond: u8,
    /// Vertex position of the shorter endpoint, `None` for equal lengths.
    pub direction: Option<usize>,
}

/// Dynkin diagram over a chosen simple system, decorations included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinDiagram {
    pub vertices: Vec<DiagramVertex>,
    pub edges: Vec<DiagramEdge>,
    /// `pair_code[i][j]`: 0 when no edge, otherwise `4*bond + rel` where
    /// `rel` is 0 (equal lengths), 1 (`i` shorter), or 2 (`j` shorter).
    #[serde(skip)]
    pair_code: Vec<Vec<u8>>,
}

fn pair_codes(vertices: usize, edges: &[DiagramEdge]) -> Vec<Vec<u8>> {
    let mut codes = vec![vec![0u8; vertices]; vertices];
    for e in edges {
        let rel_ab = match e.direction {
            None => 0,
            Some(d) if d == e.a => 1,
            _ => 2,
        };
        let rel_ba = match rel_ab {
            1 => 2,
            2 => 1,
            _ => 0,
        };
        codes[e.a][e.b] = 4 * e.bond + rel_ab;
        codes[e.b][e.a] = 4 * e.bond + rel_ba;
    }
    codes
}

impl DynkinDiagram {
    /// Build the diagram of a simple system: one vertex per simple root,
    /// edge data from root integers, doubled flags from `2α ∈ Δ`.
    pub fn new(ss: &SimpleSystem) -> Self {
        let sys = ss.system();
        let simple = ss.simple_roots();
        let vertices: Vec<DiagramVertex> = simple
            .iter()
            .enumerate()
            .map(|(i, &root)| DiagramVertex {
                root,
                doubled: ss.simple_is_doubled(i),
            })
            .collect();
        let mut edges = Vec::new();
        for a in 0..simple.len() {
            for b in (a + 1)..simple.len() {
                let nab = sys.root_integer(simple[a], simple[b]);
                let nba = sys.root_integer(simple[b], simple[a]);
                let bond_int = nab * nba;
                if bond_int == 0.into() {
                    continue;
                }
                let bond = u8::try_from(bond_int).expect("bond count in 1..3");
                let na = sys.root(simple[a]).norm_sq();
                let nb = sys.root(simple[b]).norm_sq();
                let direction = if na < nb {
                    Some(a)
                } else if nb < na {
                    Some(b)
                } else {
                    None
                };
                edges.push(DiagramEdge {
                    a,
                    b,
                    bond,
                    direction,
                });
            }
        }
        let pair_code = pair_codes(vertices.len(), &edges);
        DynkinDiagram {
            vertices,
            edges,
            pair_code,
        }
    }

    /// Assemble a diagram directly from vertex decorations and edges
    /// (used for root data that lives outside standard coordinates).
    pub fn from_parts(vertices: Vec<DiagramVertex>, edges: Vec<DiagramEdge>) -> Self {
        let pair_code = pair_codes(vertices.len(), &edges);
        DynkinDiagram {
            vertices,
            edges,
            pair_code,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.len())
            .filter(|&u| self.pair_code[v][u] != 0)
            .count()
    }

    /// Edge code between two vertex positions (0 = no edge).
    pub fn code(&self, i: usize, j: usize) -> u8 {
        self.pair_code[i][j]
    }

    /// Invariant key used to order the backtracking search: (degree, sorted
    /// incident bond signature, doubled flag). Isomorphisms preserve it.
    fn vertex_key(&self, v: usize) -> (usize, Vec<u8>, bool) {
        let mut sig: Vec<u8> = (0..self.len())
            .map(|u| self.pair_code[v][u])
            .filter(|&c| c != 0)
            .collect();
        sig.sort_unstable();
        (self.degree(v), sig, self.vertices[v].doubled)
    }

    /// A deterministic traversal order of the vertices: each connected
    /// component comes out as a chain with any doubled or multiple-bond end
    /// last, or with the longest branch first for forked diagrams.
    pub fn canonical_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for u in 0..n {
                    if !seen[u] && self.pair_code[v][u] != 0 {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.extend(self.order_component(&comp));
        }
        out
    }

    fn order_component(&self, comp: &[usize]) -> Vec<usize> {
        if comp.len() == 1 {
            return comp.to_vec();
        }
        if let Some(fork) = comp.iter().copied().find(|&v| self.degree(v) >= 3) {
            // Branches from the fork, longest first; ties by smallest vertex.
            let mut branches: Vec<Vec<usize>> = Vec::new();
            for &nb in comp {
                if nb == fork || self.pair_code[fork][nb] == 0 {
                    continue;
                }
                let mut branch = vec![nb];
                let mut prev = fork;
                let mut cur = nb;
                while let Some(next) = comp
                    .iter()
                    .copied()
                    .find(|&u| u != prev && u != cur && self.pair_code[cur][u] != 0)
                {
                    branch.push(next);
                    prev = cur;
                    cur = next;
                }
                branches.push(branch);
            }
            branches.sort_by_key(|b| (std::cmp::Reverse(b.len()), b[0]));
            let mut out: Vec<usize> = branches[0].iter().rev().copied().collect();
            out.push(fork);
            for b in &branches[1..] {
                out.extend(b.iter().copied());
            }
            return out;
        }
        // A chain. Orient it so a doubled or multiple-bond end comes last;
        // ties broken by vertex position.
        let leaves: Vec<usize> = comp
            .iter()
            .copied()
            .filter(|&v| self.degree(v) == 1)
            .collect();
        debug_assert_eq!(leaves.len(), 2);
        let walk = |start: usize| {
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while let Some(next) = comp
                .iter()
                .copied()
                .find(|&u| u != prev && u != cur && self.pair_code[cur][u] != 0)
            {
                order.push(next);
                prev = cur;
                cur = next;
            }
            order
        };
        let end_badness = |leaf: usize| {
            let doubled = self.vertices[leaf].doubled as u8;
            let touches_multiple = (0..self.len()).any(|u| self.pair_code[leaf][u] / 4 >= 2) as u8;
            // rel code 1 marks this endpoint as the shorter one.
            let short_end = (0..self.len())
                .any(|u| self.pair_code[leaf][u] != 0 && self.pair_code[leaf][u] % 4 == 1)
                as u8;
            (doubled, touches_multiple, short_end)
        };
        let (l0, l1) = (leaves[0], leaves[1]);
        if end_badness(l0) > end_badness(l1) {
            walk(l1)
        } else {
            walk(l0)
        }
    }
}

/// A decoration-preserving vertex bijection between two diagrams. `map[i]`
/// is the target vertex position of source vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiagramIsomorphism {
    pub map: Vec<usize>,
}

impl DiagramIsomorphism {
    pub fn identity(n: usize) -> Self {
        DiagramIsomorphism {
            map: (0..n).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &DiagramIsomorphism) -> DiagramIsomorphism {
        DiagramIsomorphism {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> DiagramIsomorphism {
        let mut m = vec![0usize; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            m[j] = i;
        }
        DiagramIsomorphism { map: m }
    }
}

impl fmt::Display for DiagramIsomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, j) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}->{j}")?;
        }
        write!(f, "]")
    }
}

/// All decoration-preserving bijections between two diagrams, in a
/// deterministic order. Empty signals non-isomorphic diagrams.
pub fn diagram_isomorphisms(dd: &DynkinDiagram, dd2: &DynkinDiagram) -> Vec<DiagramIsomorphism> {
    if dd.len() != dd2.len() {
        return Vec::new();
    }
    let n = dd.len();
    if n == 0 {
        return vec![DiagramIsomorphism::identity(0)];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| dd.vertex_key(v));
    let keys2: Vec<_> = (0..n).map(|v| dd2.vertex_key(v)).collect();

    let mut results = Vec::new();
    let mut assigned = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(
        dd,
        dd2,
        &order,
        &keys2,
        0,
        &mut assigned,
        &mut used,
        &mut results,
    );
    results.sort();
    results
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    dd: &DynkinDiagram,
    dd2: &DynkinDiagram,
    order: &[usize],
    keys2: &[(usize, Vec<u8>, bool)],
    depth: usize,
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    results: &mut Vec<DiagramIsomorphism>,
) {
    if depth == order.len() {
        results.push(DiagramIsomorphism {
            map: assigned.clone(),
        });
        return;
    }
    let v = order[depth];
    let key = dd.vertex_key(v);
    for t in 0..dd2.len() {
        if used[t] || keys2[t] != key {
            continue;
        }
        // Consistency against everything already assigned, non-edges too.
        let ok = order[..depth]
            .iter()
            .all(|&u| dd.pair_code[v][u] == dd2.pair_code[t][assigned[u]]);
        if !ok {
            continue;
        }
        assigned[v] = t;
        used[t] = true;
        backtrack(dd, dd2, order, keys2, depth + 1, assigned, used, results);
        assigned[v] = usize::MAX;
        used[t] = false;
    }
}

/// The automorphism group of a diagram, via backtracking search respecting
/// all decorations.
pub fn diagram_automorphisms(dd: &DynkinDiagram) -> Vec<DiagramIsomorphism> {
    diagram_isomorphisms(dd, dd)
}

/// A root-system isomorphism: an exact linear map from the span of the
/// source roots onto the span of the target roots, the induced root
/// bijection, and the per-source-component squared conformal factors.
#[derive(Debug, Clone)]
pub struct RootIsomorphism {
    pub map: LinearMap,
    /// `root_map[i]` is the target index of the image of source root `i`.
    pub root_map: Vec<usize>,
    /// For each source component: the matched target component.
    pub component_map: Vec<usize>,
    /// For each source component: `a²` with `‖f(α)‖² = a²·‖α‖²` on it.
    /// Stored squared so the value stays rational.
    pub conformal_sq: Vec<Rat>,
}

/// Check the isomorphism conditions exactly: (i) the map sends the source
/// roots bijectively onto the target roots, (ii) all root integers are
/// preserved (every pair, not only simple ones). On success the
/// per-component conformal factors and the component matching are computed
/// and re-verified.
pub fn is_isomorphism(
    f: &LinearMap,
    source: &RootSystem,
    target: &RootSystem,
) -> Result<RootIsomorphism, IsoRefusal> {
    if source.len() != target.len() {
        return Err(IsoRefusal::CountMismatch(source.len(), target.len()));
    }
    let mut root_map = Vec::with_capacity(source.len());
    let mut hit = vec![usize::MAX; target.len()];
    for (i, alpha) in source.roots().iter().enumerate() {
        let image = f
            .apply(alpha)
            .map_err(|_| IsoRefusal::OutsideSpan { alpha: i })?;
        let Some(j) = target.index_of(&image) else {
            return Err(IsoRefusal::RootEscapes { alpha: i });
        };
        if hit[j] != usize::MAX {
            return Err(IsoRefusal::NotInjective {
                alpha: hit[j],
                beta: i,
            });
        }
        hit[j] = i;
        root_map.push(j);
    }
    for a in 0..source.len() {
        for b in 0..source.len() {
            if source.root_integer(a, b) != target.root_integer(root_map[a], root_map[b]) {
                return Err(IsoRefusal::IntegerMismatch { alpha: a, beta: b });
            }
        }
    }
    let comps = &source.decomposition().components;
    let mut component_map = Vec::with_capacity(comps.len());
    let mut conformal_sq = Vec::with_capacity(comps.len());
    for (ci, comp) in comps.iter().enumerate() {
        let first = comp.root_indices[0];
        let tcomp = target.component_of(root_map[first]);
        let factor = target.root(root_map[first]).norm_sq() / source.root(first).norm_sq();
        for &i in &comp.root_indices {
            if target.component_of(root_map[i]) != tcomp
                || target.root(root_map[i]).norm_sq() != source.root(i).norm_sq() * &factor
            {
                return Err(IsoRefusal::ConformalInconsistency { component: ci });
            }
        }
        component_map.push(tcomp);
        conformal_sq.push(factor);
    }
    Ok(RootIsomorphism {
        map: f.clone(),
        root_map,
        component_map,
        conformal_sq,
    })
}

/// Extend a diagram isomorphism linearly on the simple-root basis and verify
/// at runtime that the extension maps the roots onto the roots and preserves
/// root integers. A failure here is treated as an internal-consistency
/// error (bug trap).
pub fn extend_to_linear(
    s: &DiagramIsomorphism,
    ss: &SimpleSystem,
    ss2: &SimpleSystem,
) -> Result<RootIsomorphism, AutosError> {
    if s.map.len() != ss.rank() || ss.rank() != ss2.rank() {
        return Err(AutosError::NotADiagramIsomorphism);
    }
    let basis: Vec<Vector> = ss
        .simple_roots()
        .iter()
        .map(|&i| ss.system().root(i).clone())
        .collect();
    let images: Vec<Vector> = s
        .map
        .iter()
        .map(|&j| ss2.system().root(ss2.simple_roots()[j]).clone())
        .collect();
    let f = LinearMap::new(basis, images)?;
    is_isomorphism(&f, ss.system(), ss2.system()).map_err(AutosError::InternalConsistency)
}

/// Split an automorphism as `f = w⁻¹ ∘ s` with `s` stabilizing the chamber
/// of `ss`: returns the unique `(w, s)` with `w(f(D)) = D`.
pub fn semidirect_decompose(
    f: &RootIsomorphism,
    ss: &SimpleSystem,
) -> Result<(WeylElement, DiagramIsomorphism), AutosError> {
    // The sum of the positive roots is strictly dominant, regular, and lies
    // in the root span (unlike the defining regular vector).
    let chamber_point = ss
        .positive_roots()
        .iter()
        .fold(Vector::zero(ss.system().dim()), |acc, &i| {
            &acc + ss.system().root(i)
        });
    let image = f.map.apply(&chamber_point)?;
    let (_, w) = to_dominant(ss, &image);
    // w ∘ f fixes the chamber, hence permutes the simple roots.
    let mut map = Vec::with_capacity(ss.rank());
    for &i in ss.simple_roots() {
        let target = w.perm[f.root_map[i]] as usize;
        let pos = ss
            .simple_roots()
            .iter()
            .position(|&j| j == target)
            .ok_or(AutosError::NotADiagramIsomorphism)?;
        map.push(pos);
    }
    Ok((w, DiagramIsomorphism { map }))
}

/// The decomposition `-Id = w₀ ∘ s`: the longest element, the induced
/// diagram automorphism `s = -w₀` on the simple roots, and per-component
/// flags telling where `s` is nontrivial (the opposition involution).
pub struct MinusIdDecomposition {
    pub w0: WeylElement,
    pub s: DiagramIsomorphism,
    pub nontrivial: Vec<bool>,
}

pub fn minus_id_decomposition(ss: &SimpleSystem) -> MinusIdDecomposition {
    let sys = ss.system();
    let w0 = longest_element(ss);
    let mut map = Vec::with_capacity(ss.rank());
    for &i in ss.simple_roots() {
        let image = sys.negation(w0.perm[i] as usize);
        let pos = ss
            .simple_roots()
            .iter()
            .position(|&j| j == image)
            .expect("-w0 permutes the simple roots");
        map.push(pos);
    }
    let s = DiagramIsomorphism { map };
    let ncomps = sys.decomposition().len();
    let mut nontrivial = vec![false; ncomps];
    for (vi, &root) in ss.simple_roots().iter().enumerate() {
        if s.map[vi] != vi {
            nontrivial[sys.component_of(root)] = true;
        }
    }
    MinusIdDecomposition { w0, s, nontrivial }
}

/// `|Aut(Δ)| = |W(Δ)| · |Aut(DD)|`. Needs full Weyl enumeration, so the cap
/// applies.
pub fn aut_order(ss: &SimpleSystem, cap: usize) -> Result<u128, WeylError> {
    let w = generate_weyl(ss, cap)?;
    let dd = DynkinDiagram::new(ss);
    Ok(w.len() as u128 * diagram_automorphisms(&dd).len() as u128)
}

/// Exhaustive reference enumeration of `Aut(Δ)`: all injections of the
/// simple roots into the root set preserving pairwise root integers,
/// extended linearly and filtered through [`is_isomorphism`]. Feasible
/// through rank 3; this is the oracle the semidirect counting is tested
/// against.
pub fn brute_force_automorphisms(ss: &SimpleSystem) -> Vec<RootIsomorphism> {
    let sys = ss.system();
    let simple = ss.simple_roots();
    let r = simple.len();
    let mut results = Vec::new();
    if r == 0 {
        return results;
    }
    let mut choice: Vec<usize> = Vec::with_capacity(r);
    search_tuples(sys, simple, &mut choice, &mut results);
    results
}

fn search_tuples(
    sys: &RootSystem,
    simple: &[usize],
    choice: &mut Vec<usize>,
    results: &mut Vec<RootIsomorphism>,
) {
    let depth = choice.len();
    if depth == simple.len() {
        let basis: Vec<Vector> = simple.iter().map(|&i| sys.root(i).clone()).collect();
        let images: Vec<Vector> = choice.iter().map(|&i| sys.root(i).clone()).collect();
        if let Ok(f) = LinearMap::new(basis, images) {
            if let Ok(iso) = is_isomorphism(&f, sys, sys) {
                results.push(iso);
            }
        }
        return;
    }
    'cands: for cand in 0..sys.len() {
        if choice.contains(&cand) {
            continue;
        }
        for (k, &prev) in choice.iter().enumerate() {
            if sys.root_integer(simple[depth], simple[k]) != sys.root_integer(cand, prev)
                || sys.root_integer(simple[k], simple[depth]) != sys.root_integer(prev, cand)
            {
                continue 'cands;
            }
        }
        choice.push(cand);
        search_tuples(sys, simple, choice, results);
        choice.pop();
    }
}

/// Killing-normalized isometry check: with each component's metric rescaled
/// by its `killing_scale`, does `f` preserve norm-squares exactly?
pub fn is_killing_isometry(f: &RootIsomorphism, source: &RootSystem, target: &RootSystem) -> bool {
    let scales_src: Vec<Rat> = (0..source.decomposition().len())
        .map(|c| source.killing_scale(c).expect("component index"))
        .collect();
    let scales_tgt: Vec<Rat> = (0..target.decomposition().len())
        .map(|c| target.killing_scale(c).expect("component index"))
        .collect();
    source.roots().iter().enumerate().all(|(i, alpha)| {
        let j = f.root_map[i];
        let cs = &scales_src[source.component_of(i)];
        let ct = &scales_tgt[target.component_of(j)];
        alpha.norm_sq() * cs == target.root(j).norm_sq() * ct
    })
}

/// Scalar multiple of the identity on the span of a system's roots (handy
/// for building scaled-copy isomorphism examples).
pub fn span_scaling(sys: &RootSystem, factor: &Rat) -> Result<LinearMap, LinalgError> {
    LinearMap::scaling(span_basis(sys), factor)
}

/// `-Id` on the span of a system's roots.
pub fn span_minus_id(sys: &RootSystem) -> Result<LinearMap, LinalgError> {
    span_scaling(sys, &-rat(1))
}

fn span_basis(sys: &RootSystem) -> Vec<Vector> {
    sys.decomposition()
        .components
        .iter()
        .flat_map(|c| c.span_basis.iter().cloned())
        .collect()
}

/// Identity isomorphism of a system onto itself.
pub fn identity_isomorphism(sys: &RootSystem) -> RootIsomorphism {
    let f = LinearMap::identity(span_basis(sys)).expect("span basis is independent");
    is_isomorphism(&f, sys, sys).expect("identity is an isomorphism")
}
