//! Weighted root systems, weighted Dynkin diagrams, and the catalogue of
//! restricted root systems of real simple noncompact Lie algebras.
//!
//! A weighted root system attaches a positive integer multiplicity to every
//! root, constant on Weyl orbits. For a real semisimple Lie algebra without
//! compact ideals, the weighted restricted root system determines the
//! algebra up to isomorphism; `algebras_isomorphic` implements that decision
//! on catalogue descriptors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::autos::{
    diagram_isomorphisms, extend_to_linear, AutosError, DiagramIsomorphism, DynkinDiagram,
    RootIsomorphism,
};
use crate::linalg::Rat;
use crate::rootsys::{
    build_irreducible, ComponentType, IrreducibleType, RootSystem, RootSystemError,
};
use crate::weyl::{generate_weyl, reflection_perm, SimpleSystem, WeylError};

#[derive(Debug, Error)]
pub enum WeightedError {
    #[error("multiplicity vector length {got} does not match root count {expected}")]
    MultLength { expected: usize, got: usize },
    #[error("multiplicity must be positive (root {0})")]
    NonPositiveMult(usize),
    #[error("mult(α) != mult(-α) at root {0}")]
    NegationMismatch(usize),
    #[error("multiplicities differ on one Weyl orbit: roots {0} and {1}")]
    OrbitMismatch(usize, usize),
    #[error("weight vector length {got} does not match rank {rank}")]
    WeightLength { rank: usize, got: usize },
    #[error("vertex {0}: pair weights belong exactly to doubled vertices")]
    PairPlacement(usize),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Autos(#[from] AutosError),
    #[error(transparent)]
    Root(#[from] RootSystemError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Weight attached to one Dynkin diagram vertex: a single multiplicity, or
/// the ordered pair `(mult(α), mult(2α))` at a doubled vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum VertexWeight {
    Single(u32),
    Pair(u32, u32),
}

impl fmt::Display for VertexWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexWeight::Single(m) => write!(f, "{m}"),
            VertexWeight::Pair(m, d) => write!(f, "({m},{d})"),
        }
    }
}

/// A root system with a positive multiplicity per root.
#[derive(Debug, Clone)]
pub struct WeightedRootSystem {
    base: RootSystem,
    mult: Vec<u32>,
    orbit: Vec<usize>,
}

/// Orbit labels of the roots under the full Weyl group (union over all
/// reflections).
pub fn root_orbits(sys: &RootSystem) -> Vec<usize> {
    let n = sys.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for alpha in 0..n {
        let perm = reflection_perm(sys, alpha);
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, perm[i] as usize));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut labels = BTreeMap::new();
    (0..n)
        .map(|i| {
            let root = find(&mut parent, i);
            let next = labels.len();
            *labels.entry(root).or_insert(next)
        })
        .collect()
}

impl WeightedRootSystem {
    /// Attach multiplicities, checking `mult(α) = mult(-α)` and constancy on
    /// Weyl orbits.
    pub fn new(base: RootSystem, mult: Vec<u32>) -> Result<Self, WeightedError> {
        if mult.len() != base.len() {
            return Err(WeightedError::MultLength {
                expected: base.len(),
                got: mult.len(),
            });
        }
        if let Some(i) = mult.iter().position(|&m| m == 0) {
            return Err(WeightedError::NonPositiveMult(i));
        }
        for i in 0..base.len() {
            if mult[i] != mult[base.negation(i)] {
                return Err(WeightedError::NegationMismatch(i));
            }
        }
        let orbit = root_orbits(&base);
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                if orbit[i] == orbit[j] && mult[i] != mult[j] {
                    return Err(WeightedError::OrbitMismatch(i, j));
                }
            }
        }
        Ok(WeightedRootSystem { base, mult, orbit })
    }

    /// Expand simple-vertex weights to the whole system along Weyl orbits:
    /// each orbit contains a simple root or the double of one, and the
    /// doubled root's weight comes from the pair's second slot.
    pub fn from_simple_weights(
        ss: &SimpleSystem,
        weights: &[VertexWeight],
    ) -> Result<Self, WeightedError> {
        let sys = ss.system();
        if weights.len() != ss.rank() {
            return Err(WeightedError::WeightLength {
                rank: ss.rank(),
                got: weights.len(),
            });
        }
        let orbit = root_orbits(sys);
        let orbit_count = orbit.iter().copied().max().map_or(0, |m| m + 1);
        let mut orbit_mult: Vec<Option<u32>> = vec![None; orbit_count];
        for (v, &w) in weights.iter().enumerate() {
            let root = ss.simple_roots()[v];
            let doubled = ss.simple_is_doubled(v);
            match (w, doubled) {
                (VertexWeight::Single(m), false) => orbit_mult[orbit[root]] = Some(m),
                (VertexWeight::Pair(m, d), true) => {
                    orbit_mult[orbit[root]] = Some(m);
                    let double = sys
                        .index_of(&sys.root(root).scale(&crate::linalg::rat(2)))
                        .expect("doubled flag");
                    orbit_mult[orbit[double]] = Some(d);
                }
                _ => return Err(WeightedError::PairPlacement(v)),
            }
        }
        let mult: Vec<u32> = (0..sys.len())
            .map(|i| orbit_mult[orbit[i]].expect("every orbit meets Λ ∪ 2Λ"))
            .collect();
        if let Some(i) = mult.iter().position(|&m| m == 0) {
            return Err(WeightedError::NonPositiveMult(i));
        }
        Ok(WeightedRootSystem {
            base: sys.clone(),
            mult,
            orbit,
        })
    }

    pub fn base(&self) -> &RootSystem {
        &self.base
    }

    pub fn mult(&self, root: usize) -> u32 {
        self.mult[root]
    }

    pub fn mults(&self) -> &[u32] {
        &self.mult
    }

    pub fn orbit_of(&self, root: usize) -> usize {
        self.orbit[root]
    }

    /// Total of all multiplicities (the dimension of `⊕ g_α`).
    pub fn total_mult(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum()
    }

    /// Canonical invariant of the weighted-isomorphism class: per component
    /// the canonical type tag plus, per length class, (norm ratio, root
    /// count, multiplicity) — sorted. Two systems are weighted-isomorphic
    /// exactly when their keys agree.
    pub fn class_key(&self) -> SystemClassKey {
        let mut keys: Vec<ComponentClassKey> = self
            .base
            .decomposition()
            .components
            .iter()
            .map(|comp| {
                let min_norm = comp
                    .root_indices
                    .iter()
                    .map(|&i| self.base.root(i).norm_sq())
                    .min()
                    .expect("nonempty component");
                let mut classes: BTreeMap<Rat, (usize, u32)> = BTreeMap::new();
                for &i in &comp.root_indices {
                    let ratio = self.base.root(i).norm_sq() / &min_norm;
                    let entry = classes.entry(ratio).or_insert((0, self.mult[i]));
                    entry.0 += 1;
                    debug_assert_eq!(entry.1, self.mult[i], "weights constant per class");
                }
                ComponentClassKey {
                    ctype: comp.ctype,
                    classes: classes.into_iter().map(|(r, (c, m))| (r, c, m)).collect(),
                }
            })
            .collect();
        keys.sort();
        SystemClassKey(keys)
    }

    /// Block-diagonal direct sum of weighted systems.
    pub fn direct_sum(parts: &[WeightedRootSystem]) -> Result<Self, WeightedError> {
        let bases: Vec<RootSystem> = parts.iter().map(|p| p.base.clone()).collect();
        let sum = crate::rootsys::direct_sum(&bases)?;
        let total_dim = sum.dim();
        let mut mult = vec![0u32; sum.len()];
        let mut offset = 0;
        for part in parts {
            for (i, r) in part.base.roots().iter().enumerate() {
                let mut coords = vec![Rat::from_integer(0.into()); total_dim];
                coords[offset..offset + part.base.dim()].clone_from_slice(&r.0);
                let idx = sum
                    .index_of(&crate::linalg::Vector(coords))
                    .expect("embedded root is in the sum");
                mult[idx] = part.mult[i];
            }
            offset += part.base.dim();
        }
        WeightedRootSystem::new(sum, mult)
    }
}

/// Per-component weighted-isomorphism invariant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentClassKey {
    pub ctype: ComponentType,
    /// (norm ratio, root count, multiplicity), sorted by ratio.
    pub classes: Vec<(Rat, usize, u32)>,
}

impl fmt::Display for ComponentClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.ctype)?;
        for (i, (_, count, mult)) in self.classes.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{count}xm{mult}")?;
        }
        write!(f, "]")
    }
}

/// Sorted multiset of component keys; the full weighted-isomorphism
/// invariant of a system.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SystemClassKey(pub Vec<ComponentClassKey>);

impl fmt::Display for SystemClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

/// Dynkin diagram with vertex weights.
#[derive(Debug, Clone)]
pub struct WeightedDynkinDiagram {
    pub base: DynkinDiagram,
    pub weights: Vec<VertexWeight>,
}

impl WeightedDynkinDiagram {
    pub fn new(ws: &WeightedRootSystem, ss: &SimpleSystem) -> Self {
        let base = DynkinDiagram::new(ss);
        let weights = (0..ss.rank())
            .map(|v| {
                let root = ss.simple_roots()[v];
                if ss.simple_is_doubled(v) {
                    let double = ws
                        .base()
                        .index_of(&ws.base().root(root).scale(&crate::linalg::rat(2)))
                        .expect("doubled vertex");
                    VertexWeight::Pair(ws.mult(root), ws.mult(double))
                } else {
                    VertexWeight::Single(ws.mult(root))
                }
            })
            .collect();
        WeightedDynkinDiagram { base, weights }
    }

    /// Weights listed along the canonical vertex order (the catalogue file
    /// convention).
    pub fn canonical_weight_vector(&self) -> Vec<VertexWeight> {
        self.base
            .canonical_order()
            .iter()
            .map(|&v| self.weights[v])
            .collect()
    }
}

/// Diagram isomorphisms that additionally preserve the vertex weights.
pub fn weighted_diagram_isomorphisms(
    a: &WeightedDynkinDiagram,
    b: &WeightedDynkinDiagram,
) -> Vec<DiagramIsomorphism> {
    diagram_isomorphisms(&a.base, &b.base)
        .into_iter()
        .filter(|s| {
            s.map
                .iter()
                .enumerate()
                .all(|(i, &j)| a.weights[i] == b.weights[j])
        })
        .collect()
}

/// The subgroup of diagram automorphisms preserving the weights.
pub fn weighted_diagram_automorphisms(dd: &WeightedDynkinDiagram) -> Vec<DiagramIsomorphism> {
    weighted_diagram_isomorphisms(dd, dd)
}

/// All weighted isomorphisms between two systems: every isomorphism factors
/// uniquely as `w ∘ ŝ` with `w` in the target Weyl group and `ŝ` the linear
/// extension of a diagram isomorphism, and `w` preserves multiplicities, so
/// only weighted `ŝ` contribute. Returns the empty list (without any group
/// enumeration) when no weighted diagram isomorphism exists.
pub fn weighted_isomorphisms(
    a: &WeightedRootSystem,
    b: &WeightedRootSystem,
    cap: usize,
) -> Result<Vec<RootIsomorphism>, WeightedError> {
    let ss_a = SimpleSystem::standard(a.base());
    let ss_b = SimpleSystem::standard(b.base());
    let dd_a = WeightedDynkinDiagram::new(a, &ss_a);
    let dd_b = WeightedDynkinDiagram::new(b, &ss_b);
    let diagram_isos = weighted_diagram_isomorphisms(&dd_a, &dd_b);
    if diagram_isos.is_empty() {
        return Ok(Vec::new());
    }
    let weyl_b = generate_weyl(&ss_b, cap)?;
    let mut out = Vec::new();
    for s in &diagram_isos {
        let ext = extend_to_linear(s, &ss_a, &ss_b)?;
        for w in &weyl_b {
            let basis: Vec<crate::linalg::Vector> = ss_a
                .simple_roots()
                .iter()
                .map(|&i| a.base().root(i).clone())
                .collect();
            let images: Vec<crate::linalg::Vector> = ss_a
                .simple_roots()
                .iter()
                .map(|&i| b.base().root(w.perm[ext.root_map[i]] as usize).clone())
                .collect();
            let f = crate::linalg::LinearMap::new(basis, images)?;
            let iso = crate::autos::is_isomorphism(&f, a.base(), b.base())
                .expect("w ∘ ŝ is an isomorphism");
            debug_assert!(iso
                .root_map
                .iter()
                .enumerate()
                .all(|(i, &j)| a.mult(i) == b.mult(j)));
            out.push(iso);
        }
    }
    Ok(out)
}

/// `|Aut^w(Σ)| = |W(Σ)| · |Aut^w(DD)|`.
pub fn autw_order(
    ws: &WeightedRootSystem,
    ss: &SimpleSystem,
    cap: usize,
) -> Result<u128, WeightedError> {
    let w = generate_weyl(ss, cap)?;
    let dd = WeightedDynkinDiagram::new(ws, ss);
    Ok(w.len() as u128 * weighted_diagram_automorphisms(&dd).len() as u128)
}

// ---------------------------------------------------------------------------
// Catalogue of real simple noncompact Lie algebras.
// ---------------------------------------------------------------------------

/// Identifier of a real simple Lie algebra (family plus integer parameters).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AlgebraId {
    /// sl(n, R), the split form of A_{n-1}.
    SlR(u32),
    /// sl(n, C) viewed as a real Lie algebra.
    SlC(u32),
    /// sl(n, H), quaternionic.
    SlH(u32),
    /// su(p, q), p <= q.
    Su(u32, u32),
    /// sp(p, q), p <= q (quaternionic unitary).
    Sp(u32, u32),
    /// so(p, q), p <= q.
    So(u32, u32),
    /// The exceptional real form e6(-26).
    E6Minus26,
    /// Split real form of the given complex type.
    Split(IrreducibleType, u32),
    /// Realification of the complex simple algebra of the given type.
    Realified(IrreducibleType, u32),
    /// A compact algebra marker; never admitted into descriptors.
    Compact(String),
}

impl AlgebraId {
    /// The family this id belongs to, with the sl division rings kept
    /// separate.
    pub fn family_name(&self) -> String {
        match self {
            AlgebraId::SlR(_) => "sl(n,R)".into(),
            AlgebraId::SlC(_) => "sl(n,C)".into(),
            AlgebraId::SlH(_) => "sl(n,H)".into(),
            AlgebraId::Su(..) => "su".into(),
            AlgebraId::Sp(..) => "sp".into(),
            AlgebraId::So(..) => "so".into(),
            AlgebraId::E6Minus26 => "e6(-26)".into(),
            AlgebraId::Split(..) => "split".into(),
            AlgebraId::Realified(..) => "complex".into(),
            AlgebraId::Compact(_) => "compact".into(),
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::SlR(n) => write!(f, "sl({n},R)"),
            AlgebraId::SlC(n) => write!(f, "sl({n},C)"),
            AlgebraId::SlH(n) => write!(f, "sl({n},H)"),
            AlgebraId::Su(p, q) => write!(f, "su({p},{q})"),
            AlgebraId::Sp(p, q) => write!(f, "sp({p},{q})"),
            AlgebraId::So(p, q) => write!(f, "so({p},{q})"),
            AlgebraId::E6Minus26 => write!(f, "e6(-26)"),
            AlgebraId::Split(t, r) => write!(f, "split({t},{r})"),
            AlgebraId::Realified(t, r) => write!(f, "complex({t},{r})"),
            AlgebraId::Compact(label) => write!(f, "compact({label})"),
        }
    }
}

impl std::str::FromStr for AlgebraId {
    type Err = CatalogueError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| CatalogueError::BadId(s.to_string()))?;
        if !s.ends_with(')') {
            return Err(CatalogueError::BadId(s.to_string()));
        }
        let name = &s[..open];
        let args: Vec<&str> = s[open + 1..s.len() - 1].split(',').map(str::trim).collect();
        let int = |a: &str| {
            a.parse::<u32>()
                .map_err(|_| CatalogueError::BadId(s.to_string()))
        };
        let pair_sorted = |args: &[&str]| -> Result<(u32, u32), CatalogueError> {
            if args.len() != 2 {
                return Err(CatalogueError::BadId(s.to_string()));
            }
            let (p, q) = (int(args[0])?, int(args[1])?);
            Ok((p.min(q), p.max(q)))
        };
        match name {
            "sl" => {
                if args.len() != 2 {
                    return Err(CatalogueError::BadId(s.to_string()));
                }
                let n = int(args[0])?;
                match args[1] {
                    "R" | "r" => Ok(AlgebraId::SlR(n)),
                    "C" | "c" => Ok(AlgebraId::SlC(n)),
                    "H" | "h" => Ok(AlgebraId::SlH(n)),
                    _ => Err(CatalogueError::BadId(s.to_string())),
                }
            }
            "su" => pair_sorted(&args).map(|(p, q)| AlgebraId::Su(p, q)),
            "sp" => pair_sorted(&args).map(|(p, q)| AlgebraId::Sp(p, q)),
            "so" => pair_sorted(&args).map(|(p, q)| AlgebraId::So(p, q)),
            "e6" => {
                if args == ["-26"] {
                    Ok(AlgebraId::E6Minus26)
                } else {
                    Err(CatalogueError::BadId(s.to_string()))
                }
            }
            "split" | "complex" => {
                if args.len() != 2 {
                    return Err(CatalogueError::BadId(s.to_string()));
                }
                let t: IrreducibleType = args[0]
                    .parse()
                    .map_err(|_| CatalogueError::BadId(s.to_string()))?;
                let r = int(args[1])?;
                if name == "split" {
                    Ok(AlgebraId::Split(t, r))
                } else {
                    Ok(AlgebraId::Realified(t, r))
                }
            }
            "compact" => Ok(AlgebraId::Compact(args.join(","))),
            _ => Err(CatalogueError::BadId(s.to_string())),
        }
    }
}

/// Where a catalogue entry's data comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    PaperStated,
    ExternalReference,
    MachineVerified,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::PaperStated => "paper-stated",
            Provenance::ExternalReference => "external-reference",
            Provenance::MachineVerified => "machine-verified",
        };
        write!(f, "{s}")
    }
}

/// One catalogue row: restricted root type and the simple-root weight vector
/// (canonical diagram order, pairs at doubled vertices).
#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub id: AlgebraId,
    pub compact: bool,
    pub ctype: Option<ComponentType>,
    pub weights: Option<Vec<VertexWeight>>,
    pub provenance: Provenance,
}

#[derive(Debug, Error)]
pub enum CatalogueError {
    #[error("unresolvable algebra id: {0}")]
    BadId(String),
    #[error("id not in the catalogue: {0}")]
    UnknownId(String),
    #[error("descriptor contains the compact id {0}")]
    CompactIdeal(String),
    #[error("weights for {0} are not available (external catalogue required)")]
    WeightsUnavailable(String),
    #[error("catalogue file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("catalogue integrity: duplicate id {0}")]
    Duplicate(String),
    #[error("catalogue integrity: entry for {id} conflicts with the seed: {msg}")]
    Conflict { id: String, msg: String },
    #[error("machine-verified provenance cannot be asserted by a file ({0})")]
    FileClaimsVerified(String),
    #[error(
        "lieverify cross-check failed for {id}: catalogue says {expected}, observed {observed}"
    )]
    VerificationMismatch {
        id: String,
        expected: String,
        observed: String,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Weighted(#[from] Box<WeightedError>),
}

/// The catalogue: paper-stated generative families plus explicitly loaded
/// rows. Immutable once shared; provenance upgrades happen through
/// [`Catalogue::verify_against`] before distribution.
#[derive(Debug, Clone, Default)]
pub struct Catalogue {
    explicit: BTreeMap<AlgebraId, CatalogueEntry>,
}

fn seed_rule(id: &AlgebraId) -> Option<CatalogueEntry> {
    use AlgebraId::*;
    let entry = |ctype, weights, provenance| CatalogueEntry {
        id: id.clone(),
        compact: false,
        ctype: Some(ctype),
        weights,
        provenance,
    };
    let a = |rank: u32| ComponentType::new(IrreducibleType::A, rank);
    match id {
        SlR(n) if *n >= 2 => Some(entry(
            a(n - 1),
            Some(vec![VertexWeight::Single(1); (n - 1) as usize]),
            Provenance::PaperStated,
        )),
        SlC(n) if *n >= 2 => Some(entry(
            a(n - 1),
            Some(vec![VertexWeight::Single(2); (n - 1) as usize]),
            Provenance::PaperStated,
        )),
        // Type pinned (A_{n-1}); weights must come from an external source.
        SlH(n) if *n >= 2 => Some(entry(a(n - 1), None, Provenance::PaperStated)),
        Su(p, q) if *p >= 1 && q > p => {
            let n = q - p;
            let mut w = vec![VertexWeight::Single(2); (*p - 1) as usize];
            w.push(VertexWeight::Pair(2 * n, 1));
            Some(entry(
                ComponentType::new(IrreducibleType::BC, *p),
                Some(w),
                Provenance::PaperStated,
            ))
        }
        // Type pinned; the multiplicities differ from su and are not seeded.
        Sp(p, q) if *p >= 1 && q > p => Some(entry(
            ComponentType::new(IrreducibleType::BC, *p),
            None,
            Provenance::PaperStated,
        )),
        E6Minus26 => Some(entry(a(2), None, Provenance::PaperStated)),
        Split(t, r) if *t != IrreducibleType::BC => {
            let rank = model_rank(*t, *r)?;
            Some(entry(
                ComponentType::new(*t, *r).canonical(),
                Some(vec![VertexWeight::Single(1); rank]),
                Provenance::PaperStated,
            ))
        }
        Realified(t, r) if *t != IrreducibleType::BC => {
            let rank = model_rank(*t, *r)?;
            Some(entry(
                ComponentType::new(*t, *r).canonical(),
                Some(vec![VertexWeight::Single(2); rank]),
                Provenance::PaperStated,
            ))
        }
        Compact(_) => Some(CatalogueEntry {
            id: id.clone(),
            compact: true,
            ctype: None,
            weights: None,
            provenance: Provenance::PaperStated,
        }),
        _ => None,
    }
}

fn model_rank(t: IrreducibleType, r: u32) -> Option<usize> {
    // D_2 is reducible; refuse it as a simple-algebra type.
    let sys = build_irreducible(t, r).ok()?;
    if sys.decomposition().len() != 1 {
        return None;
    }
    Some(sys.rank())
}

impl Catalogue {
    /// Only the hardcoded paper-stated families; no external file. Entries
    /// whose weights the sources leave open (sp, sl(n,H), e6(-26)) resolve
    /// to type-only markers.
    pub fn seed() -> Self {
        Catalogue::default()
    }

    /// Seed plus a line-oriented external file
    /// (`family;params;type;rank;weights;provenance`).
    pub fn load(path: &Path) -> Result<Self, CatalogueError> {
        let text = std::fs::read_to_string(path)?;
        Self::load_from_str(&text)
    }

    pub fn load_from_str(text: &str) -> Result<Self, CatalogueError> {
        let mut cat = Catalogue::seed();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(';').map(str::trim).collect();
            let err = |msg: &str| CatalogueError::Parse {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            if fields.len() != 6 {
                return Err(err("expected 6 ';'-separated fields"));
            }
            let id: AlgebraId = format!("{}({})", fields[0], fields[1]).parse()?;
            let family: IrreducibleType = fields[2].parse().map_err(|_| err("bad type tag"))?;
            let rank: u32 = fields[3].parse().map_err(|_| err("bad rank"))?;
            let weights = parse_weights(fields[4]).ok_or_else(|| err("bad weight list"))?;
            let provenance = match fields[5] {
                "paper-stated" => Provenance::PaperStated,
                "external-reference" => Provenance::ExternalReference,
                "machine-verified" => {
                    return Err(CatalogueError::FileClaimsVerified(id.to_string()))
                }
                _ => return Err(err("bad provenance")),
            };
            let entry = CatalogueEntry {
                id: id.clone(),
                compact: false,
                ctype: Some(ComponentType::new(family, rank)),
                weights: Some(weights),
                provenance,
            };
            cat.insert_checked(entry)?;
        }
        Ok(cat)
    }

    fn insert_checked(&mut self, entry: CatalogueEntry) -> Result<(), CatalogueError> {
        let id = entry.id.clone();
        if self.explicit.contains_key(&id) {
            return Err(CatalogueError::Duplicate(id.to_string()));
        }
        // Validate the weight vector against the model eagerly.
        let checked = validate_entry(&entry)?;
        if let Some(seed) = seed_rule(&id) {
            let seed_type = seed.ctype.map(ComponentType::canonical);
            let entry_type = entry.ctype.map(ComponentType::canonical);
            if seed_type != entry_type {
                return Err(CatalogueError::Conflict {
                    id: id.to_string(),
                    msg: format!(
                        "type {} vs paper-stated {}",
                        entry.ctype.map_or("?".into(), |t| t.to_string()),
                        seed.ctype.map_or("?".into(), |t| t.to_string())
                    ),
                });
            }
            if let (Some(sw), Some(ew)) = (&seed.weights, &entry.weights) {
                if sw != ew {
                    return Err(CatalogueError::Conflict {
                        id: id.to_string(),
                        msg: "weight vector differs from the paper-stated one".into(),
                    });
                }
            }
            if entry.provenance == Provenance::PaperStated && seed.weights.is_none() {
                return Err(CatalogueError::Conflict {
                    id: id.to_string(),
                    msg: "claims paper-stated weights the seed does not carry".into(),
                });
            }
        } else if entry.provenance == Provenance::PaperStated {
            return Err(CatalogueError::Conflict {
                id: id.to_string(),
                msg: "paper-stated provenance outside the seed set".into(),
            });
        }
        self.explicit.insert(id, checked);
        Ok(())
    }

    /// Resolve an id: explicit rows first, then the generative seed.
    pub fn lookup(&self, id: &AlgebraId) -> Result<CatalogueEntry, CatalogueError> {
        if let Some(e) = self.explicit.get(id) {
            return Ok(e.clone());
        }
        seed_rule(id).ok_or_else(|| CatalogueError::UnknownId(id.to_string()))
    }

    /// Families with explicitly loaded rows.
    pub fn loaded_families(&self) -> Vec<String> {
        let mut names: Vec<String> = self.explicit.keys().map(AlgebraId::family_name).collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogueEntry> {
        self.explicit.values()
    }

    /// Cross-check an entry against machine-computed restricted root data
    /// and upgrade its provenance to machine-verified on an exact match.
    /// A mismatch is an error (hard test failure upstream).
    pub fn verify_against(
        &mut self,
        id: &AlgebraId,
        observed: &WeightedRootSystem,
    ) -> Result<(), CatalogueError> {
        let entry = self.lookup(id)?;
        let expected = expand_entry(&entry)?;
        let (exp_key, obs_key) = (expected.class_key(), observed.class_key());
        if exp_key != obs_key {
            return Err(CatalogueError::VerificationMismatch {
                id: id.to_string(),
                expected: exp_key.to_string(),
                observed: obs_key.to_string(),
            });
        }
        let mut upgraded = entry;
        upgraded.provenance = Provenance::MachineVerified;
        self.explicit.insert(id.clone(), upgraded);
        Ok(())
    }
}

fn validate_entry(entry: &CatalogueEntry) -> Result<CatalogueEntry, CatalogueError> {
    if entry.weights.is_some() {
        expand_entry(entry)?;
    }
    Ok(entry.clone())
}

/// Expand a catalogue entry into its weighted restricted root system.
pub fn expand_entry(entry: &CatalogueEntry) -> Result<WeightedRootSystem, CatalogueError> {
    if entry.compact {
        return Err(CatalogueError::CompactIdeal(entry.id.to_string()));
    }
    let ctype = entry
        .ctype
        .ok_or_else(|| CatalogueError::UnknownId(entry.id.to_string()))?;
    let weights = entry
        .weights
        .as_ref()
        .ok_or_else(|| CatalogueError::WeightsUnavailable(entry.id.to_string()))?;
    let sys = build_irreducible(ctype.family, ctype.rank)
        .map_err(|e| Box::new(WeightedError::Root(e)))?;
    let ss = SimpleSystem::standard(&sys);
    let dd = DynkinDiagram::new(&ss);
    // The file convention lists weights along the canonical diagram order.
    let order = dd.canonical_order();
    if order.len() != weights.len() {
        return Err(Box::new(WeightedError::WeightLength {
            rank: order.len(),
            got: weights.len(),
        })
        .into());
    }
    let mut by_vertex = vec![VertexWeight::Single(1); order.len()];
    for (pos, &v) in order.iter().enumerate() {
        by_vertex[v] = weights[pos];
    }
    WeightedRootSystem::from_simple_weights(&ss, &by_vertex).map_err(|e| Box::new(e).into())
}

fn parse_weights(text: &str) -> Option<Vec<VertexWeight>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(stripped) = rest.strip_prefix('(') {
            let close = stripped.find(')')?;
            let inner = &stripped[..close];
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return None;
            }
            out.push(VertexWeight::Pair(
                parts[0].parse().ok()?,
                parts[1].parse().ok()?,
            ));
            rest = stripped[close + 1..].trim_start_matches(',').trim();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            out.push(VertexWeight::Single(rest[..end].trim().parse().ok()?));
            rest = rest[end..].trim_start_matches(',').trim();
        }
    }
    Some(out)
}

/// A real semisimple Lie algebra without compact ideals, given as the
/// multiset of its simple factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDescriptor(pub Vec<AlgebraId>);

impl AlgebraDescriptor {
    pub fn parse(text: &str) -> Result<Self, CatalogueError> {
        let ids = text
            .split('+')
            .map(|part| part.trim().parse())
            .collect::<Result<Vec<AlgebraId>, _>>()?;
        if ids.is_empty() {
            return Err(CatalogueError::BadId(text.to_string()));
        }
        Ok(AlgebraDescriptor(ids))
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

/// The weighted restricted root system of a descriptor: the direct sum of
/// the factors' catalogue systems. Compact ids are refused.
pub fn restricted_system(
    desc: &AlgebraDescriptor,
    catalogue: &Catalogue,
) -> Result<WeightedRootSystem, CatalogueError> {
    if desc.0.is_empty() {
        return Err(CatalogueError::BadId("empty descriptor".into()));
    }
    let parts = desc
        .0
        .iter()
        .map(|id| expand_entry(&catalogue.lookup(id)?))
        .collect::<Result<Vec<_>, _>>()?;
    WeightedRootSystem::direct_sum(&parts).map_err(|e| Box::new(e).into())
}

/// Outcome of the isomorphism decision, with either an explicit weighted
/// isomorphism or the distinguishing invariant.
#[derive(Debug)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub witness: IsoWitness,
}

#[derive(Debug)]
pub enum IsoWitness {
    Isomorphism(Box<RootIsomorphism>),
    DistinguishingInvariant {
        left: SystemClassKey,
        right: SystemClassKey,
    },
}

/// Decide whether two descriptors name isomorphic algebras: true exactly
/// when the weighted restricted root systems are weighted-isomorphic.
pub fn algebras_isomorphic(
    a: &AlgebraDescriptor,
    b: &AlgebraDescriptor,
    catalogue: &Catalogue,
) -> Result<IsoVerdict, CatalogueError> {
    let wa = restricted_system(a, catalogue)?;
    let wb = restricted_system(b, catalogue)?;
    let (ka, kb) = (wa.class_key(), wb.class_key());
    if ka != kb {
        return Ok(IsoVerdict {
            isomorphic: false,
            witness: IsoWitness::DistinguishingInvariant {
                left: ka,
                right: kb,
            },
        });
    }
    // Equal keys: produce an explicit weighted isomorphism.
    let ss_a = SimpleSystem::standard(wa.base());
    let ss_b = SimpleSystem::standard(wb.base());
    let dd_a = WeightedDynkinDiagram::new(&wa, &ss_a);
    let dd_b = WeightedDynkinDiagram::new(&wb, &ss_b);
    let isos = weighted_diagram_isomorphisms(&dd_a, &dd_b);
    let s = isos
        .first()
        .expect("equal class keys imply a weighted diagram isomorphism");
    let iso = extend_to_linear(s, &ss_a, &ss_b).map_err(|e| Box::new(WeightedError::from(e)))?;
    Ok(IsoVerdict {
        isomorphic: true,
        witness: IsoWitness::Isomorphism(Box::new(iso)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::diagram_automorphisms;
    use crate::rootsys::IrreducibleType::*;

    fn su_system(p: u32, q: u32) -> WeightedRootSystem {
        let cat = Catalogue::seed();
        let desc = AlgebraDescriptor(vec![AlgebraId::Su(p, q)]);
        restricted_system(&desc, &cat).unwrap()
    }

    const SP_TEST_ROWS: &str = "sp;2,3;BC;2;4,(4,3);external-reference\n";

    #[test]
    fn seed_su_weights_match_the_bc_pattern() {
        let ws = su_system(2, 3);
        let ss = SimpleSystem::standard(ws.base());
        let dd = WeightedDynkinDiagram::new(&ws, &ss);
        let canon = dd.canonical_weight_vector();
        assert_eq!(
            canon,
            vec![VertexWeight::Single(2), VertexWeight::Pair(2, 1)]
        );
    }

    #[test]
    fn weighted_isomorphisms_examples() {
        let cat = Catalogue::load_from_str(SP_TEST_ROWS).unwrap();
        let su = su_system(2, 3);
        let isos = weighted_isomorphisms(&su, &su, 1000).unwrap();
        // |Aut^w(BC_2)| = |W| * 1 = 8.
        assert_eq!(isos.len(), 8);

        let sp = restricted_system(&AlgebraDescriptor(vec![AlgebraId::Sp(2, 3)]), &cat).unwrap();
        assert!(weighted_isomorphisms(&su, &sp, 1000).unwrap().is_empty());

        let a2 = build_irreducible(A, 2).unwrap();
        let ones = WeightedRootSystem::new(a2.clone(), vec![1; 6]).unwrap();
        let twos = WeightedRootSystem::new(a2, vec![2; 6]).unwrap();
        assert!(weighted_isomorphisms(&ones, &twos, 1000)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn weighted_diagram_automorphism_examples() {
        // su(r, r+n): the BC diagram is already asymmetric.
        let ws = su_system(2, 3);
        let ss = SimpleSystem::standard(ws.base());
        let dd = WeightedDynkinDiagram::new(&ws, &ss);
        assert_eq!(weighted_diagram_automorphisms(&dd).len(), 1);

        // su(2,3) ⊔ sp(2,3): the unweighted diagram has an order-2 swap,
        // the weighted one is trivial.
        let cat = Catalogue::load_from_str(SP_TEST_ROWS).unwrap();
        let both = restricted_system(
            &AlgebraDescriptor(vec![AlgebraId::Su(2, 3), AlgebraId::Sp(2, 3)]),
            &cat,
        )
        .unwrap();
        let ss = SimpleSystem::standard(both.base());
        let dd = WeightedDynkinDiagram::new(&both, &ss);
        assert_eq!(diagram_automorphisms(&dd.base).len(), 2);
        assert_eq!(weighted_diagram_automorphisms(&dd).len(), 1);

        // Equal weights keep the A_2 flip.
        let a2 = build_irreducible(A, 2).unwrap();
        let ws = WeightedRootSystem::new(a2, vec![3; 6]).unwrap();
        let ss = SimpleSystem::standard(ws.base());
        let dd = WeightedDynkinDiagram::new(&ws, &ss);
        assert_eq!(weighted_diagram_automorphisms(&dd).len(), 2);
    }

    #[test]
    fn autw_order_examples() {
        let a2 = build_irreducible(A, 2).unwrap();
        let ws = WeightedRootSystem::new(a2, vec![1; 6]).unwrap();
        let ss = SimpleSystem::standard(ws.base());
        assert_eq!(autw_order(&ws, &ss, 1000).unwrap(), 12);

        let su = su_system(2, 3);
        let ss = SimpleSystem::standard(su.base());
        assert_eq!(autw_order(&su, &ss, 1000).unwrap(), 8);
    }

    #[test]
    fn orbit_constancy_is_enforced() {
        // A_2 has a single Weyl orbit: unequal weights are rejected.
        let a2 = build_irreducible(A, 2).unwrap();
        let mut mult = vec![1u32; 6];
        mult[0] = 2;
        mult[a2.negation(0)] = 2;
        assert!(matches!(
            WeightedRootSystem::new(a2, mult),
            Err(WeightedError::OrbitMismatch(..))
        ));
    }

    #[test]
    fn restricted_system_examples() {
        let cat = Catalogue::seed();
        let slr = restricted_system(&AlgebraDescriptor(vec![AlgebraId::SlR(3)]), &cat).unwrap();
        assert_eq!(slr.base().len(), 6);
        assert!(slr.mults().iter().all(|&m| m == 1));

        let su = su_system(1, 2);
        // BC_1 with mult(α) = 2, mult(2α) = 1.
        let key = su.class_key();
        assert_eq!(key.0.len(), 1);
        assert_eq!(key.0[0].ctype, ComponentType::new(BC, 1));
        assert_eq!(
            key.0[0]
                .classes
                .iter()
                .map(|c| (c.1, c.2))
                .collect::<Vec<_>>(),
            vec![(2, 2), (2, 1)]
        );

        let slh = restricted_system(
            &AlgebraDescriptor(vec![AlgebraId::SlH(3)]),
            &Catalogue::seed(),
        );
        assert!(matches!(slh, Err(CatalogueError::WeightsUnavailable(_))));

        let compact = restricted_system(
            &AlgebraDescriptor(vec![AlgebraId::Compact("so3".into())]),
            &cat,
        );
        assert!(matches!(compact, Err(CatalogueError::CompactIdeal(_))));
    }

    #[test]
    fn algebras_isomorphic_examples() {
        let cat = Catalogue::load_from_str(SP_TEST_ROWS).unwrap();

        let su = AlgebraDescriptor(vec![AlgebraId::Su(2, 3)]);
        let sp = AlgebraDescriptor(vec![AlgebraId::Sp(2, 3)]);
        let verdict = algebras_isomorphic(&su, &sp, &cat).unwrap();
        assert!(!verdict.isomorphic);
        assert!(matches!(
            verdict.witness,
            IsoWitness::DistinguishingInvariant { .. }
        ));

        let two = AlgebraDescriptor(vec![AlgebraId::SlR(3), AlgebraId::SlR(3)]);
        let verdict = algebras_isomorphic(&two, &two, &cat).unwrap();
        assert!(verdict.isomorphic);

        let slc = AlgebraDescriptor(vec![AlgebraId::SlC(3)]);
        let slr = AlgebraDescriptor(vec![AlgebraId::SlR(3)]);
        let verdict = algebras_isomorphic(&slc, &slr, &cat).unwrap();
        assert!(!verdict.isomorphic);
    }

    #[test]
    fn reordering_invariance() {
        let cat = Catalogue::seed();
        let a = AlgebraDescriptor(vec![AlgebraId::SlR(3), AlgebraId::Su(1, 2)]);
        let b = AlgebraDescriptor(vec![AlgebraId::Su(1, 2), AlgebraId::SlR(3)]);
        let verdict = algebras_isomorphic(&a, &b, &cat).unwrap();
        assert!(verdict.isomorphic);
    }

    #[test]
    fn catalogue_integrity_errors() {
        // su(2,3) claiming type C conflicts with the paper-stated BC_2.
        let bad = "su;2,3;C;2;2,1;external-reference\n";
        assert!(matches!(
            Catalogue::load_from_str(bad),
            Err(CatalogueError::Conflict { .. })
        ));

        let dup =
            "sp;2,3;BC;2;4,(4,3);external-reference\nsp;2,3;BC;2;4,(4,3);external-reference\n";
        assert!(matches!(
            Catalogue::load_from_str(dup),
            Err(CatalogueError::Duplicate(_))
        ));

        let verified = "sp;2,3;BC;2;4,(4,3);machine-verified\n";
        assert!(matches!(
            Catalogue::load_from_str(verified),
            Err(CatalogueError::FileClaimsVerified(_))
        ));
    }

    #[test]
    fn cross_family_coincidences() {
        // so(1,2) ≅ sl(2,R) and so(1,3) ≅ sl(2,C): equal class keys.
        let rows = "so;1,2;B;1;1;external-reference\nso;1,3;B;1;2;external-reference\n";
        let cat = Catalogue::load_from_str(rows).unwrap();
        let verdict = algebras_isomorphic(
            &AlgebraDescriptor(vec![AlgebraId::So(1, 2)]),
            &AlgebraDescriptor(vec![AlgebraId::SlR(2)]),
            &cat,
        )
        .unwrap();
        assert!(verdict.isomorphic);
        let verdict = algebras_isomorphic(
            &AlgebraDescriptor(vec![AlgebraId::So(1, 3)]),
            &AlgebraDescriptor(vec![AlgebraId::SlC(2)]),
            &cat,
        )
        .unwrap();
        assert!(verdict.isomorphic);
    }

    #[test]
    fn id_parse_roundtrip() {
        for text in [
            "su(2,3)",
            "sp(1,2)",
            "sl(3,R)",
            "sl(3,C)",
            "sl(2,H)",
            "e6(-26)",
            "split(G,2)",
        ] {
            let id: AlgebraId = text.parse().unwrap();
            assert_eq!(id.to_string(), text);
        }
        // Unsorted pairs canonicalize.
        let id: AlgebraId = "su(3,2)".parse().unwrap();
        assert_eq!(id, AlgebraId::Su(2, 3));
        assert!("xy(1)".parse::<AlgebraId>().is_err());
    }

    #[test]
    fn verify_against_upgrades_provenance() {
        let mut cat = Catalogue::seed();
        let id = AlgebraId::Su(1, 2);
        let observed = su_system(1, 2);
        cat.verify_against(&id, &observed).unwrap();
        assert_eq!(
            cat.lookup(&id).unwrap().provenance,
            Provenance::MachineVerified
        );

        // A wrong observation is a hard error.
        let wrong = su_system(1, 3);
        assert!(matches!(
            cat.verify_against(&AlgebraId::Su(1, 2), &wrong),
            Err(CatalogueError::VerificationMismatch { .. })
        ));
    }
}
