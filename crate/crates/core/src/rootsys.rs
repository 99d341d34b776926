//! Exact construction, validation, and decomposition of root systems.
//!
//! Root systems live in a Euclidean space with the standard dot product and
//! exact rational coordinates. Systems may be nonreduced (the `BC` family)
//! and reducible; the irreducible components and their classification tags
//! are computed eagerly at construction and cached.

use std::collections::HashMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, ratio, sign, Echelon, Rat, RatMatrix, Vector};

/// Families of irreducible root systems. `BC` is the nonreduced family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IrreducibleType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl fmt::Display for IrreducibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IrreducibleType::A => "A",
            IrreducibleType::B => "B",
            IrreducibleType::C => "C",
            IrreducibleType::D => "D",
            IrreducibleType::E => "E",
            IrreducibleType::F => "F",
            IrreducibleType::G => "G",
            IrreducibleType::BC => "BC",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for IrreducibleType {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(IrreducibleType::A),
            "B" | "b" => Ok(IrreducibleType::B),
            "C" | "c" => Ok(IrreducibleType::C),
            "D" | "d" => Ok(IrreducibleType::D),
            "E" | "e" => Ok(IrreducibleType::E),
            "F" | "f" => Ok(IrreducibleType::F),
            "G" | "g" => Ok(IrreducibleType::G),
            "BC" | "bc" | "Bc" => Ok(IrreducibleType::BC),
            _ => Err(RootSystemError::UnknownTypeName(s.to_string())),
        }
    }
}

/// Classification tag of an irreducible component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComponentType {
    pub family: IrreducibleType,
    pub rank: u32,
}

impl ComponentType {
    pub fn new(family: IrreducibleType, rank: u32) -> Self {
        ComponentType { family, rank }
    }

    /// Canonical tag under the low-rank coincidences
    /// `B1 = C1 = A1`, `C2 = B2`, `D3 = A3`.
    pub fn canonical(self) -> Self {
        use IrreducibleType::*;
        match (self.family, self.rank) {
            (B, 1) | (C, 1) => ComponentType::new(A, 1),
            (C, 2) => ComponentType::new(B, 2),
            (D, 3) => ComponentType::new(A, 3),
            _ => self,
        }
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

#[derive(Debug, Error)]
pub enum RootSystemError {
    #[error("invalid (type, rank) pair: {0}{1}")]
    InvalidTypeRank(IrreducibleType, u32),
    #[error("unknown root system type name: {0}")]
    UnknownTypeName(String),
    #[error("direct sum of an empty list")]
    EmptyDirectSum,
    #[error("root system validation failed:\n{0}")]
    Invalid(ValidationReport),
    #[error("component {0} not isomorphic to any A-G/BC model (corrupted input)")]
    UnrecognizedComponent(usize),
    #[error("component index {got} out of range ({count} components)")]
    ComponentIndex { got: usize, count: usize },
    #[error("coordinate does not fit the serialization range: {0}")]
    CoordinateRange(Rat),
    #[error("malformed root system document: {0}")]
    Malformed(String),
}

/// One failed invariant, with witness root indices into the input list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ValidationIssue {
    ZeroRoot { index: usize },
    DuplicateRoot { first: usize, second: usize },
    WrongDimension { index: usize },
    NotClosedUnderNegation { index: usize },
    ReflectionEscapes { alpha: usize, beta: usize },
    NonIntegralPairing { alpha: usize, beta: usize },
    BadProportionality { alpha: usize, beta: usize },
}

/// Outcome of checking the root system axioms on raw data.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "all checks pass");
        }
        for issue in &self.issues {
            writeln!(f, "  {issue:?}")?;
        }
        Ok(())
    }
}

/// Integer view of a root list: all coordinates scaled by the common
/// denominator, when that fits comfortably in machine integers. Dot
/// products and reflections run allocation-free on this view; everything is
/// scale-invariant, so the checks are unaffected.
struct IntView {
    coords: Vec<Vec<i128>>,
}

fn int_view(roots: &[Vector]) -> Option<IntView> {
    use num::ToPrimitive;
    let mut lcm = num::BigInt::from(1u32);
    for r in roots {
        for c in &r.0 {
            lcm = num::Integer::lcm(&lcm, c.denom());
        }
    }
    let lcm = lcm.to_i128().filter(|l| *l <= 1 << 20)?;
    let bound: i128 = 1 << 40;
    let mut coords = Vec::with_capacity(roots.len());
    for r in roots {
        let mut v = Vec::with_capacity(r.dim());
        for c in &r.0 {
            let den = c.denom().to_i128()?;
            let num = c.numer().to_i128()?;
            let scaled = num.checked_mul(lcm / den)?;
            if scaled.abs() > bound {
                return None;
            }
            v.push(scaled);
        }
        coords.push(v);
    }
    Some(IntView { coords })
}

impl IntView {
    fn dot(&self, a: usize, b: usize) -> i128 {
        self.coords[a]
            .iter()
            .zip(&self.coords[b])
            .map(|(x, y)| x * y)
            .sum()
    }
}

/// Check the root system axioms on a raw list of vectors.
///
/// Reports every failed invariant with witness indices rather than stopping
/// at the first one.
pub fn validate(dim: usize, roots: &[Vector]) -> ValidationReport {
    let mut issues = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        if r.dim() != dim {
            issues.push(ValidationIssue::WrongDimension { index: i });
        }
    }
    if !issues.is_empty() {
        return ValidationReport { issues };
    }
    for (i, r) in roots.iter().enumerate() {
        if r.is_zero() {
            issues.push(ValidationIssue::ZeroRoot { index: i });
        }
    }
    let mut index: HashMap<&Vector, usize> = HashMap::new();
    for (i, r) in roots.iter().enumerate() {
        if let Some(&first) = index.get(r) {
            issues.push(ValidationIssue::DuplicateRoot { first, second: i });
        } else {
            index.insert(r, i);
        }
    }
    if !issues.is_empty() {
        return ValidationReport { issues };
    }
    for (i, r) in roots.iter().enumerate() {
        if !index.contains_key(&-r) {
            issues.push(ValidationIssue::NotClosedUnderNegation { index: i });
        }
    }
    match int_view(roots) {
        Some(view) => validate_pairs_int(&view, &mut issues),
        None => validate_pairs_rational(roots, &index, &mut issues),
    }
    ValidationReport { issues }
}

fn validate_pairs_int(view: &IntView, issues: &mut Vec<ValidationIssue>) {
    let n = view.coords.len();
    let index: HashMap<&[i128], usize> = view
        .coords
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();
    let norms: Vec<i128> = (0..n).map(|i| view.dot(i, i)).collect();
    let mut image = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let twice = 2 * view.dot(a, b);
            if twice % norms[b] != 0 {
                issues.push(ValidationIssue::NonIntegralPairing { alpha: a, beta: b });
                continue;
            }
            let nint = twice / norms[b];
            image.clear();
            image.extend(
                view.coords[a]
                    .iter()
                    .zip(&view.coords[b])
                    .map(|(x, y)| x - nint * y),
            );
            if !index.contains_key(image.as_slice()) {
                issues.push(ValidationIssue::ReflectionEscapes { alpha: a, beta: b });
            }
            if a < b {
                check_proportionality_int(view, a, b, issues);
            }
        }
    }
}

fn check_proportionality_int(
    view: &IntView,
    a: usize,
    b: usize,
    issues: &mut Vec<ValidationIssue>,
) {
    let (va, vb) = (&view.coords[a], &view.coords[b]);
    let Some(p) = va.iter().position(|&c| c != 0) else {
        return;
    };
    // Proportional iff all cross products match.
    if !va.iter().zip(vb).all(|(&x, &y)| y * va[p] == x * vb[p]) {
        return;
    }
    // t = vb[p] / va[p] must be one of ±1, ±2, ±1/2.
    let (num, den) = (vb[p], va[p]);
    let ok = num == den
        || num == -den
        || num == 2 * den
        || num == -2 * den
        || 2 * num == den
        || 2 * num == -den;
    if !ok {
        issues.push(ValidationIssue::BadProportionality { alpha: a, beta: b });
    }
}

fn validate_pairs_rational(
    roots: &[Vector],
    index: &HashMap<&Vector, usize>,
    issues: &mut Vec<ValidationIssue>,
) {
    let two = rat(2);
    let half = ratio(1, 2);
    for (a, alpha) in roots.iter().enumerate() {
        for (b, beta) in roots.iter().enumerate() {
            if a == b {
                continue;
            }
            // n_{alpha beta} = 2 <alpha, beta> / ||beta||^2 must be an integer.
            let n = two.clone() * alpha.dot(beta) / beta.norm_sq();
            if !n.is_integer() {
                issues.push(ValidationIssue::NonIntegralPairing { alpha: a, beta: b });
                continue;
            }
            // s_beta(alpha) must stay in the system.
            let refl = alpha - &beta.scale(&n);
            if !index.contains_key(&refl) {
                issues.push(ValidationIssue::ReflectionEscapes { alpha: a, beta: b });
            }
            if let Some(t) = alpha.proportionality(beta) {
                let ok = t == Rat::one()
                    || t == -Rat::one()
                    || t == two
                    || t == -two.clone()
                    || t == half
                    || t == -half.clone();
                if !ok {
                    issues.push(ValidationIssue::BadProportionality { alpha: a, beta: b });
                }
            }
        }
    }
}

/// An irreducible component of a root system.
#[derive(Debug, Clone)]
pub struct Component {
    /// Indices into the parent root list.
    pub root_indices: Vec<usize>,
    /// Basis of the linear span of the component's roots.
    pub span_basis: Vec<Vector>,
    pub ctype: ComponentType,
    /// Length classes: (norm-squared ratio to the shortest root, count),
    /// sorted by ratio.
    pub classes: Vec<(Rat, usize)>,
    pub nonreduced: bool,
}

impl Component {
    pub fn rank(&self) -> usize {
        self.span_basis.len()
    }
}

/// The unique (up to reordering) orthogonal decomposition into irreducible
/// components.
#[derive(Debug, Clone)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Multiset of component tags, sorted.
    pub fn type_multiset(&self) -> Vec<ComponentType> {
        let mut tags: Vec<_> = self.components.iter().map(|c| c.ctype).collect();
        tags.sort();
        tags
    }
}

/// A finite root system with exact rational coordinates.
///
/// Roots are kept in a canonical sorted order (lexicographic on coordinates)
/// so permutation representations are reproducible across runs. All fields
/// are immutable after construction; the component decomposition is computed
/// eagerly.
#[derive(Clone)]
pub struct RootSystem {
    dim: usize,
    roots: Vec<Vector>,
    index: HashMap<Vector, usize>,
    neg_index: Vec<usize>,
    component_index: Vec<usize>,
    components: ComponentDecomposition,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RootSystem(dim {}, {} roots, components ",
            self.dim,
            self.roots.len()
        )?;
        let tags: Vec<String> = self
            .components
            .components
            .iter()
            .map(|c| c.ctype.to_string())
            .collect();
        write!(f, "[{}])", tags.join(", "))
    }
}

impl RootSystem {
    /// Validate and build a root system from raw data. Roots are sorted into
    /// canonical order; component decomposition and type recognition run
    /// eagerly.
    pub fn new(dim: usize, mut roots: Vec<Vector>) -> Result<Self, RootSystemError> {
        roots.sort();
        let report = validate(dim, &roots);
        if !report.is_valid() {
            return Err(RootSystemError::Invalid(report));
        }
        let index: HashMap<Vector, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let neg_index = roots.iter().map(|r| index[&-r]).collect();
        let (component_index, components) = decompose_impl(&roots)?;
        Ok(RootSystem {
            dim,
            roots,
            index,
            neg_index,
            component_index,
            components,
        })
    }

    /// The empty root system (the compact case). Legal, with 0 components.
    pub fn empty(dim: usize) -> Self {
        RootSystem {
            dim,
            roots: Vec::new(),
            index: HashMap::new(),
            neg_index: Vec::new(),
            component_index: Vec::new(),
            components: ComponentDecomposition {
                components: Vec::new(),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> &Vector {
        &self.roots[i]
    }

    pub fn index_of(&self, v: &Vector) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Index of `-roots[i]`.
    pub fn negation(&self, i: usize) -> usize {
        self.neg_index[i]
    }

    /// Component label of root `i`.
    pub fn component_of(&self, i: usize) -> usize {
        self.component_index[i]
    }

    /// The cached decomposition into irreducible components.
    pub fn decomposition(&self) -> &ComponentDecomposition {
        &self.components
    }

    /// Rank: dimension of the span of the roots.
    pub fn rank(&self) -> usize {
        self.components.components.iter().map(Component::rank).sum()
    }

    /// True if `2 * roots[i]` is also a root.
    pub fn is_divisible_double(&self, i: usize) -> bool {
        self.index_of(&self.roots[i].scale(&rat(2))).is_some()
    }

    /// The root integer n_{alpha beta} = 2 <alpha, beta> / ||beta||^2.
    pub fn root_integer(&self, alpha: usize, beta: usize) -> num::BigInt {
        let a = &self.roots[alpha];
        let b = &self.roots[beta];
        let n = rat(2) * a.dot(b) / b.norm_sq();
        debug_assert!(n.is_integer());
        n.to_integer()
    }

    /// Killing normalization factor of one component: the unique `c` such
    /// that rescaling the metric by `c` makes the component
    /// Killing-normalized. Computed as rank / sum of root norm-squares;
    /// stored as a factor on the metric, never applied to coordinates.
    pub fn killing_scale(&self, component: usize) -> Result<Rat, RootSystemError> {
        let comp =
            self.components
                .components
                .get(component)
                .ok_or(RootSystemError::ComponentIndex {
                    got: component,
                    count: self.components.len(),
                })?;
        let total: Rat = comp
            .root_indices
            .iter()
            .map(|&i| self.roots[i].norm_sq())
            .fold(Rat::zero(), |acc, t| acc + t);
        Ok(rat(comp.rank() as i64) / total)
    }

    /// Serialize to the interchange JSON document
    /// `{"dim": d, "roots": [[[num, den], ...], ...]}`.
    pub fn to_json(&self) -> Result<serde_json::Value, RootSystemError> {
        let roots: Result<Vec<Vec<(i64, i64)>>, _> = self
            .roots
            .iter()
            .map(|r| r.0.iter().map(rat_to_pair).collect::<Result<Vec<_>, _>>())
            .collect();
        Ok(serde_json::json!({ "dim": self.dim, "roots": roots? }))
    }

    /// Deserialize from the interchange document. Runs `validate` and
    /// rejects on failure.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, RootSystemError> {
        let doc: RootSystemDoc = serde_json::from_value(value.clone())
            .map_err(|e| RootSystemError::Malformed(e.to_string()))?;
        let roots = doc
            .roots
            .iter()
            .map(|coords| {
                Vector(
                    coords
                        .iter()
                        .map(|&(n, d)| Rat::new(n.into(), d.into()))
                        .collect(),
                )
            })
            .collect();
        RootSystem::new(doc.dim, roots)
    }
}

#[derive(Serialize, Deserialize)]
struct RootSystemDoc {
    dim: usize,
    roots: Vec<Vec<(i64, i64)>>,
}

fn rat_to_pair(r: &Rat) -> Result<(i64, i64), RootSystemError> {
    use num::ToPrimitive;
    let n = r
        .numer()
        .to_i64()
        .ok_or_else(|| RootSystemError::CoordinateRange(r.clone()))?;
    let d = r
        .denom()
        .to_i64()
        .ok_or_else(|| RootSystemError::CoordinateRange(r.clone()))?;
    Ok((n, d))
}

/// Standard rational-coordinate model of an irreducible root system.
///
/// A_r lives in dimension r+1 as e_i - e_j; E_6 and E_7 live in dimension 8
/// inside E_8; everything else is full-rank in dimension r.
pub fn build_irreducible(
    family: IrreducibleType,
    rank: u32,
) -> Result<RootSystem, RootSystemError> {
    use IrreducibleType::*;
    let bad = || RootSystemError::InvalidTypeRank(family, rank);
    let r = rank as usize;
    let roots = match family {
        A => {
            if rank < 1 {
                return Err(bad());
            }
            let mut v = Vec::new();
            for i in 0..=r {
                for j in 0..=r {
                    if i != j {
                        v.push(unit_diff(r + 1, i, j));
                    }
                }
            }
            (r + 1, v)
        }
        B => {
            if rank < 1 {
                return Err(bad());
            }
            let mut v = signed_units(r, 1);
            v.extend(signed_pairs(r));
            (r, v)
        }
        C => {
            if rank < 1 {
                return Err(bad());
            }
            let mut v = signed_units(r, 2);
            v.extend(signed_pairs(r));
            (r, v)
        }
        D => {
            if rank < 2 {
                return Err(bad());
            }
            (r, signed_pairs(r))
        }
        BC => {
            if rank < 1 {
                return Err(bad());
            }
            let mut v = signed_units(r, 1);
            v.extend(signed_units(r, 2));
            v.extend(signed_pairs(r));
            (r, v)
        }
        G => {
            if rank != 2 {
                return Err(bad());
            }
            let mut v = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        v.push(unit_diff(3, i, j));
                    }
                }
            }
            for i in 0..3 {
                let mut c = vec![-1i64; 3];
                c[i] = 2;
                v.push(Vector::from_ints(&c));
                v.push(-&Vector::from_ints(&c));
            }
            (3, v)
        }
        F => {
            if rank != 4 {
                return Err(bad());
            }
            let mut v = signed_units(4, 1);
            v.extend(signed_pairs(4));
            v.extend(half_vectors(4, |_| true));
            (4, v)
        }
        E => match rank {
            8 => (8, e8_roots()),
            6 | 7 => {
                let all = e8_roots();
                let simple = e8_bourbaki_simple();
                let span = &simple[..r];
                let m = RatMatrix::from_columns(span);
                let ech = Echelon::new(&m);
                let v = all
                    .into_iter()
                    .filter(|root| ech.solve(root).is_ok())
                    .collect();
                (8, v)
            }
            _ => return Err(bad()),
        },
    };
    RootSystem::new(roots.0, roots.1)
}

fn unit_diff(dim: usize, i: usize, j: usize) -> Vector {
    let mut c = vec![0i64; dim];
    c[i] = 1;
    c[j] = -1;
    Vector::from_ints(&c)
}

fn signed_units(dim: usize, scale: i64) -> Vec<Vector> {
    let mut v = Vec::new();
    for i in 0..dim {
        let mut c = vec![0i64; dim];
        c[i] = scale;
        v.push(Vector::from_ints(&c));
        c[i] = -scale;
        v.push(Vector::from_ints(&c));
    }
    v
}

fn signed_pairs(dim: usize) -> Vec<Vector> {
    let mut v = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut c = vec![0i64; dim];
                c[i] = si;
                c[j] = sj;
                v.push(Vector::from_ints(&c));
            }
        }
    }
    v
}

fn half_vectors(dim: usize, keep: impl Fn(&[i32]) -> bool) -> Vec<Vector> {
    let mut v = Vec::new();
    for mask in 0..(1u32 << dim) {
        let signs: Vec<i32> = (0..dim)
            .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
            .collect();
        if !keep(&signs) {
            continue;
        }
        v.push(Vector(signs.iter().map(|&s| ratio(s as i64, 2)).collect()));
    }
    v
}

fn e8_roots() -> Vec<Vector> {
    let mut v = signed_pairs(8);
    v.extend(half_vectors(8, |signs| {
        signs.iter().filter(|&&s| s < 0).count() % 2 == 0
    }));
    v
}

fn e8_bourbaki_simple() -> Vec<Vector> {
    let mut alpha1 = vec![ratio(-1, 2); 8];
    alpha1[0] = ratio(1, 2);
    alpha1[7] = ratio(1, 2);
    let mut simple = vec![Vector(alpha1)];
    let mut a2 = vec![0i64; 8];
    a2[0] = 1;
    a2[1] = 1;
    simple.push(Vector::from_ints(&a2));
    for k in 0..6 {
        simple.push(unit_diff(8, k + 1, k));
    }
    simple
}

/// Block-diagonal direct sum of root systems.
pub fn direct_sum(systems: &[RootSystem]) -> Result<RootSystem, RootSystemError> {
    if systems.is_empty() {
        return Err(RootSystemError::EmptyDirectSum);
    }
    let total_dim: usize = systems.iter().map(RootSystem::dim).sum();
    let mut roots = Vec::new();
    let mut offset = 0;
    for sys in systems {
        for r in sys.roots() {
            let mut coords = vec![Rat::zero(); total_dim];
            coords[offset..offset + sys.dim()].clone_from_slice(&r.0);
            roots.push(Vector(coords));
        }
        offset += sys.dim();
    }
    RootSystem::new(total_dim, roots)
}

fn decompose_impl(
    roots: &[Vector],
) -> Result<(Vec<usize>, ComponentDecomposition), RootSystemError> {
    let n = roots.len();
    let view = int_view(roots);
    let orthogonal = |i: usize, j: usize| match &view {
        Some(v) => v.dot(i, j) == 0,
        None => sign(&roots[i].dot(&roots[j])) == 0,
    };
    let mut label = vec![usize::MAX; n];
    let mut components = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        // Chain connectivity: edges where <alpha, beta> != 0.
        let id = components.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        label[start] = id;
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if label[j] == usize::MAX && !orthogonal(i, j) {
                    label[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let mut out = Vec::new();
    for (idx, members) in components.iter().enumerate() {
        let comp =
            analyze_component(roots, members).ok_or(RootSystemError::UnrecognizedComponent(idx))?;
        out.push(comp);
    }
    Ok((label, ComponentDecomposition { components: out }))
}

fn analyze_component(roots: &[Vector], members: &[usize]) -> Option<Component> {
    // Span basis by greedy rank growth.
    let mut basis: Vec<Vector> = Vec::new();
    for &i in members {
        let mut candidate = basis.clone();
        candidate.push(roots[i].clone());
        let m = RatMatrix::from_columns(&candidate);
        if Echelon::new(&m).rank == candidate.len() {
            basis = candidate;
        }
    }
    let rank = basis.len();

    // Length classes, normalized to the shortest root.
    let mut norms: Vec<Rat> = members.iter().map(|&i| roots[i].norm_sq()).collect();
    norms.sort();
    let min = norms.first()?.clone();
    let mut classes: Vec<(Rat, usize)> = Vec::new();
    for nv in norms {
        let ratio = nv / &min;
        match classes.last_mut() {
            Some((r, c)) if *r == ratio => *c += 1,
            _ => classes.push((ratio, 1)),
        }
    }

    let member_set: HashMap<&Vector, ()> = members.iter().map(|&i| (&roots[i], ())).collect();
    let nonreduced = members
        .iter()
        .any(|&i| member_set.contains_key(&roots[i].scale(&rat(2))));

    let ctype = recognize_from_stats(rank as u32, members.len(), &classes, nonreduced)?;
    Some(Component {
        root_indices: members.to_vec(),
        span_basis: basis,
        ctype,
        classes,
        nonreduced,
    })
}

/// Identify an irreducible type from (rank, root count, length-class
/// multiset, reducedness). This tuple separates all irreducible types; tags
/// are canonical under the low-rank coincidences (`C2` reports as `B2`,
/// `D3` as `A3`).
pub fn recognize_from_stats(
    rank: u32,
    n_roots: usize,
    classes: &[(Rat, usize)],
    nonreduced: bool,
) -> Option<ComponentType> {
    use IrreducibleType::*;
    let r = rank as usize;
    if r == 0 {
        return None;
    }
    if nonreduced {
        // BC_r: 2r short, 2r doubled, 2r(r-1) medium.
        let expect: Vec<(Rat, usize)> = if r == 1 {
            vec![(rat(1), 2), (rat(4), 2)]
        } else {
            vec![(rat(1), 2 * r), (rat(2), 2 * r * (r - 1)), (rat(4), 2 * r)]
        };
        return (n_roots == 2 * r * r + 2 * r && classes == expect.as_slice())
            .then_some(ComponentType::new(BC, rank));
    }
    match classes.len() {
        1 => {
            if n_roots == r * (r + 1) {
                Some(ComponentType::new(A, rank))
            } else if r >= 4 && n_roots == 2 * r * (r - 1) {
                Some(ComponentType::new(D, rank))
            } else {
                match (r, n_roots) {
                    (6, 72) | (7, 126) | (8, 240) => Some(ComponentType::new(E, rank)),
                    _ => None,
                }
            }
        }
        2 => {
            let (r1, short) = &classes[0];
            let (r2, long) = &classes[1];
            if *r1 != rat(1) {
                return None;
            }
            if *r2 == rat(3) {
                return (r == 2 && *short == 6 && *long == 6).then_some(ComponentType::new(G, 2));
            }
            if *r2 != rat(2) {
                return None;
            }
            if r == 4 && *short == 24 && *long == 24 {
                Some(ComponentType::new(F, 4))
            } else if *short == 2 * r && *long == 2 * r * (r - 1) {
                Some(ComponentType::new(B, rank))
            } else if *long == 2 * r && *short == 2 * r * (r - 1) {
                Some(ComponentType::new(C, rank))
            } else {
                None
            }
        }
        _ => None,
    }
}
