//! Combinatorics of symmetric spaces of noncompact type: de Rham factors
//! with normalizing constants, the isometry/homothety permutation groups,
//! the almost-Killing predicate, the metric-restricted automorphism groups,
//! and the boundary-component congruence test.

use std::fmt;

use itertools::Itertools;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::autos::{diagram_automorphisms, DiagramIsomorphism};
use crate::linalg::Rat;
use crate::weighted::{
    expand_entry, weighted_diagram_automorphisms, AlgebraId, Catalogue, CatalogueError,
    SystemClassKey, WeightedDynkinDiagram, WeightedError, WeightedRootSystem,
};
use crate::weyl::{generate_weyl, SimpleSystem, WeylError};

#[derive(Debug, Error)]
pub enum SymspaceError {
    #[error("normalizing constant must be positive, got {0}")]
    BadLambda(Rat),
    #[error("space spec must have at least one factor")]
    Empty,
    #[error("factor {0} is not irreducible")]
    ReducibleFactor(usize),
    #[error("too many factors for permutation enumeration: {0} (max 8)")]
    TooManyFactors(usize),
    #[error("boundary subset index {0} is out of range")]
    SubsetIndex(usize),
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error(transparent)]
    Weighted(#[from] WeightedError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// One de Rham factor: a simple noncompact algebra id plus the normalizing
/// constant relating its metric to the Killing form.
#[derive(Debug, Clone)]
pub struct FactorSpec {
    pub id: AlgebraId,
    pub lambda: Rat,
}

impl FactorSpec {
    pub fn new(id: AlgebraId, lambda: Rat) -> Result<Self, SymspaceError> {
        if !lambda.is_positive() {
            return Err(SymspaceError::BadLambda(lambda));
        }
        Ok(FactorSpec { id, lambda })
    }
}

/// An ordered de Rham decomposition.
#[derive(Debug, Clone)]
pub struct SpaceSpec(pub Vec<FactorSpec>);

impl SpaceSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self, SymspaceError> {
        if factors.is_empty() {
            return Err(SymspaceError::Empty);
        }
        Ok(SpaceSpec(factors))
    }

    /// Parse `id:lambda,id:lambda,...` with lambda an integer or `a/b`.
    /// Commas inside `id(...)` parentheses do not split factors.
    pub fn parse(text: &str) -> Result<Self, SymspaceError> {
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        for (i, c) in text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    parts.push(&text[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&text[start..]);
        let mut factors = Vec::new();
        for part in parts {
            let part = part.trim();
            let colon = part
                .rfind(':')
                .ok_or_else(|| CatalogueError::BadId(part.to_string()))?;
            let id: AlgebraId = part[..colon].parse()?;
            let lam = parse_rat(part[colon + 1..].trim())
                .ok_or_else(|| CatalogueError::BadId(part.to_string()))?;
            factors.push(FactorSpec::new(id, lam)?);
        }
        SpaceSpec::new(factors)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn parse_rat(text: &str) -> Option<Rat> {
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Rat::new(n.into(), d.into()))
    } else {
        let n: i64 = text.trim().parse().ok()?;
        Some(Rat::from_integer(n.into()))
    }
}

/// A subgroup of S_k given by its element list (k stays desk-scale).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    pub k: usize,
    pub elements: Vec<Vec<usize>>,
}

impl PermGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.elements.iter().any(|e| e == perm)
    }
}

impl fmt::Display for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order {}", self.order())
    }
}

/// The per-factor weighted-isomorphism classes (homothety classes of the
/// factors) and the class keys behind them.
fn factor_classes(
    spec: &SpaceSpec,
    catalogue: &Catalogue,
) -> Result<(Vec<usize>, Vec<WeightedRootSystem>), SymspaceError> {
    let mut systems = Vec::new();
    let mut keys: Vec<SystemClassKey> = Vec::new();
    let mut classes = Vec::new();
    for (i, factor) in spec.0.iter().enumerate() {
        let ws = expand_entry(&catalogue.lookup(&factor.id)?)?;
        if ws.base().decomposition().len() != 1 {
            return Err(SymspaceError::ReducibleFactor(i));
        }
        let key = ws.class_key();
        let class = match keys.iter().position(|k| *k == key) {
            Some(c) => c,
            None => {
                keys.push(key);
                keys.len() - 1
            }
        };
        classes.push(class);
        systems.push(ws);
    }
    Ok((classes, systems))
}

/// The two permutation groups of the de Rham decomposition: `S_hom`
/// (factors permuted within homothety classes, i.e. equal weighted
/// restricted root systems) and `S_iso ⊆ S_hom` (additionally equal
/// normalizing constants).
pub fn perm_groups(
    spec: &SpaceSpec,
    catalogue: &Catalogue,
) -> Result<(PermGroup, PermGroup), SymspaceError> {
    let k = spec.len();
    if k > 8 {
        return Err(SymspaceError::TooManyFactors(k));
    }
    let (classes, _) = factor_classes(spec, catalogue)?;
    let mut iso = Vec::new();
    let mut hom = Vec::new();
    for perm in (0..k).permutations(k) {
        let homothetic = (0..k).all(|i| classes[i] == classes[perm[i]]);
        if !homothetic {
            continue;
        }
        hom.push(perm.clone());
        if (0..k).all(|i| spec.0[i].lambda == spec.0[perm[i]].lambda) {
            iso.push(perm);
        }
    }
    Ok((
        PermGroup { k, elements: iso },
        PermGroup { k, elements: hom },
    ))
}

/// Almost-Killing verdict: the two permutation groups coincide. Also
/// reports the stronger Killing condition (all normalizing constants 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillingReport {
    pub almost_killing: bool,
    pub killing: bool,
}

pub fn almost_killing(
    spec: &SpaceSpec,
    catalogue: &Catalogue,
) -> Result<KillingReport, SymspaceError> {
    let (iso, hom) = perm_groups(spec, catalogue)?;
    Ok(KillingReport {
        almost_killing: iso == hom,
        killing: spec.0.iter().all(|f| f.lambda.is_one()),
    })
}

/// `(|Aut^w(Σ)_M|, |Aut^w(DD)_M|)`: per-factor full automorphism data
/// (weighted equals unweighted on simple factors) times the isometry
/// permutations, with `Aut^w(Σ)_M = W(Σ) ⋊ Aut^w(DD)_M`.
pub fn autw_m_orders(
    spec: &SpaceSpec,
    catalogue: &Catalogue,
    cap: usize,
) -> Result<(u128, u128), SymspaceError> {
    let (s_iso, _) = perm_groups(spec, catalogue)?;
    let (_, systems) = factor_classes(spec, catalogue)?;
    let mut weyl_product: u128 = 1;
    let mut dd_product: u128 = 1;
    for ws in &systems {
        let ss = SimpleSystem::standard(ws.base());
        weyl_product *= generate_weyl(&ss, cap).map_err(WeightedError::from)?.len() as u128;
        let dd = crate::autos::DynkinDiagram::new(&ss);
        dd_product *= diagram_automorphisms(&dd).len() as u128;
    }
    let dd_m = dd_product * s_iso.order() as u128;
    Ok((weyl_product * dd_m, dd_m))
}

/// The assembled global data for a space spec: the direct-sum weighted
/// system, its simple system and weighted diagram, and the factor owning
/// each diagram vertex.
pub struct GlobalDiagram {
    pub system: WeightedRootSystem,
    pub simple: SimpleSystem,
    pub diagram: WeightedDynkinDiagram,
    /// Factor index per diagram vertex.
    pub vertex_factor: Vec<usize>,
}

pub fn global_diagram(
    spec: &SpaceSpec,
    catalogue: &Catalogue,
) -> Result<GlobalDiagram, SymspaceError> {
    let (_, systems) = factor_classes(spec, catalogue)?;
    let sum = WeightedRootSystem::direct_sum(&systems)?;
    let simple = SimpleSystem::standard(sum.base());
    let diagram = WeightedDynkinDiagram::new(&sum, &simple);
    // Factors embed block-diagonally; a root's factor is the block carrying
    // its support.
    let mut offsets = Vec::with_capacity(spec.len());
    let mut acc = 0;
    for ws in &systems {
        offsets.push((acc, acc + ws.base().dim()));
        acc += ws.base().dim();
    }
    let vertex_factor = diagram
        .base
        .vertices
        .iter()
        .map(|v| {
            let root = sum.base().root(v.root);
            let first = root
                .0
                .iter()
                .position(|c| !c.is_zero())
                .expect("nonzero root");
            offsets
                .iter()
                .position(|&(lo, hi)| lo <= first && first < hi)
                .expect("root inside a factor block")
        })
        .collect();
    Ok(GlobalDiagram {
        system: sum,
        simple,
        diagram,
        vertex_factor,
    })
}

/// Elements of `Aut^w(DD)_M`: weighted diagram automorphisms of the global
/// diagram that only permute factors with equal normalizing constants.
pub fn autw_m_elements(spec: &SpaceSpec, global: &GlobalDiagram) -> Vec<DiagramIsomorphism> {
    weighted_diagram_automorphisms(&global.diagram)
        .into_iter()
        .filter(|s| {
            s.map.iter().enumerate().all(|(v, &w)| {
                spec.0[global.vertex_factor[v]].lambda == spec.0[global.vertex_factor[w]].lambda
            })
        })
        .collect()
}

/// Outcome of the boundary congruence test. The criterion is sufficient
/// only: absence of a witness is reported as "not derivable", never as a
/// proof of non-congruence.
#[derive(Debug)]
pub struct BoundaryVerdict {
    pub congruent: bool,
    pub witness: Option<DiagramIsomorphism>,
}

impl fmt::Display for BoundaryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(s) => write!(f, "congruent via {s}"),
            None => write!(f, "no witness under Aut^w(DD)_M (congruence not derivable)"),
        }
    }
}

/// Search for `s ∈ Aut^w(DD)_M` with `s(Φ1) = Φ2`; `Φ1`, `Φ2` are sets of
/// global diagram vertex positions.
pub fn boundary_congruent(
    spec: &SpaceSpec,
    catalogue: &Catalogue,
    phi1: &[usize],
    phi2: &[usize],
) -> Result<BoundaryVerdict, SymspaceError> {
    let global = global_diagram(spec, catalogue)?;
    let n = global.diagram.base.len();
    for &v in phi1.iter().chain(phi2) {
        if v >= n {
            return Err(SymspaceError::SubsetIndex(v));
        }
    }
    let mut target: Vec<usize> = phi2.to_vec();
    target.sort_unstable();
    target.dedup();
    let witness = autw_m_elements(spec, &global).into_iter().find(|s| {
        let mut image: Vec<usize> = phi1.iter().map(|&v| s.map[v]).collect();
        image.sort_unstable();
        image.dedup();
        image == target
    });
    Ok(BoundaryVerdict {
        congruent: witness.is_some(),
        witness,
    })
}
