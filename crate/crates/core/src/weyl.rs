//! Weyl groups: simple systems, chambers, reflections, BFS enumeration,
//! longest element, and canonical (dominant) forms.
//!
//! Group elements are canonicalized by their permutation of the sorted root
//! list; reduced words in simple reflections are kept as certificates.

use std::collections::HashSet;

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, ratio, sign, Echelon, Rat, RatMatrix, Vector};
use crate::rootsys::RootSystem;

/// Default enumeration cap: refuse to expand Weyl groups larger than this.
pub const DEFAULT_WEYL_CAP: usize = 3_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("vector is not regular: orthogonal to root {root}")]
    NotRegular { root: usize },
    #[error("Weyl group exceeds enumeration cap {cap}")]
    CapExceeded { cap: usize },
    #[error("permutation does not define a Weyl group element")]
    NotAWeylElement,
}

/// A choice of positive roots and simple roots for a root system, together
/// with everything derived from it that the rest of the crate needs:
/// positivity flags, coordinates of every root in the simple basis, and the
/// simple reflection permutations.
#[derive(Debug, Clone)]
pub struct SimpleSystem {
    sys: RootSystem,
    regular: Vector,
    positives: Vec<usize>,
    is_positive: Vec<bool>,
    simple: Vec<usize>,
    simple_coords: Vec<Vec<Rat>>,
    simple_perms: Vec<Vec<u32>>,
}

impl SimpleSystem {
    /// Positive roots are those pairing strictly positively with `v`; simple
    /// roots are the indecomposable non-doubled positives.
    pub fn new(sys: &RootSystem, v: &Vector) -> Result<Self, WeylError> {
        for (i, alpha) in sys.roots().iter().enumerate() {
            if v.dot(alpha).is_zero() {
                return Err(WeylError::NotRegular { root: i });
            }
        }
        let positives: Vec<usize> = (0..sys.len())
            .filter(|&i| sign(&v.dot(sys.root(i))) > 0)
            .collect();
        let mut is_positive = vec![false; sys.len()];
        for &i in &positives {
            is_positive[i] = true;
        }
        // alpha is simple iff it is not beta + gamma for positives beta,
        // gamma. Doubled roots 2*alpha decompose as alpha + alpha, so they
        // are never simple.
        let simple: Vec<usize> = positives
            .iter()
            .copied()
            .filter(|&i| {
                !positives.iter().any(|&j| {
                    let rest = sys.root(i) - sys.root(j);
                    sys.index_of(&rest).is_some_and(|k| is_positive[k])
                })
            })
            .collect();
        let simple_vecs: Vec<Vector> = simple.iter().map(|&i| sys.root(i).clone()).collect();
        let ech = Echelon::new(&RatMatrix::from_columns(&simple_vecs));
        debug_assert_eq!(ech.rank, simple.len());
        let simple_coords = sys
            .roots()
            .iter()
            .map(|r| ech.solve(r).expect("root outside simple-root span"))
            .collect();
        let simple_perms = simple.iter().map(|&i| reflection_perm(sys, i)).collect();
        Ok(SimpleSystem {
            sys: sys.clone(),
            regular: v.clone(),
            positives,
            is_positive,
            simple,
            simple_coords,
            simple_perms,
        })
    }

    /// Deterministic default chamber: pairing vector (d, d-1, ..., 1),
    /// shifted by powers of 1/2 until regular.
    pub fn standard(sys: &RootSystem) -> Self {
        let d = sys.dim();
        let base = Vector((0..d).map(|i| rat((d - i) as i64)).collect());
        if let Ok(ss) = SimpleSystem::new(sys, &base) {
            return ss;
        }
        for k in 1..=64u32 {
            let shift = Vector(
                (0..d)
                    .map(|i| {
                        let denom = num::BigInt::from(2u32).pow(k * (i as u32 + 1));
                        Rat::new(num::BigInt::from(1u32), denom)
                    })
                    .collect(),
            );
            let candidate = &base + &shift;
            if let Ok(ss) = SimpleSystem::new(sys, &candidate) {
                return ss;
            }
        }
        unreachable!("no regular vector found; root hyperplane arrangement is finite")
    }

    pub fn system(&self) -> &RootSystem {
        &self.sys
    }

    pub fn regular_vector(&self) -> &Vector {
        &self.regular
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// Indices of the positive roots.
    pub fn positive_roots(&self) -> &[usize] {
        &self.positives
    }

    /// Indices of the simple roots.
    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    pub fn is_positive(&self, root: usize) -> bool {
        self.is_positive[root]
    }

    /// Coordinates of a root in the simple-root basis.
    pub fn simple_coords(&self, root: usize) -> &[Rat] {
        &self.simple_coords[root]
    }

    /// True if twice the `i`-th simple root is itself a root.
    pub fn simple_is_doubled(&self, i: usize) -> bool {
        self.sys.is_divisible_double(self.simple[i])
    }

    /// Number of positive roots that are not doubles of another root.
    pub fn indivisible_positive_count(&self) -> usize {
        self.positives
            .iter()
            .filter(|&&i| {
                let half = self.sys.root(i).scale(&ratio(1, 2));
                self.sys.index_of(&half).is_none()
            })
            .count()
    }

    /// `<v, alpha_i> >= 0` for every simple root.
    pub fn is_dominant(&self, v: &Vector) -> bool {
        self.simple
            .iter()
            .all(|&i| sign(&v.dot(self.sys.root(i))) >= 0)
    }

    fn reflect_vector(&self, i: usize, v: &Vector) -> Vector {
        let alpha = self.sys.root(self.simple[i]);
        let n = rat(2) * v.dot(alpha) / alpha.norm_sq();
        v - &alpha.scale(&n)
    }
}

/// An element of the Weyl group: a permutation of the root list plus a
/// reduced word in the simple reflections of a fixed [`SimpleSystem`].
///
/// `word = [j_1, ..., j_l]` denotes `s_{j_1} ∘ ... ∘ s_{j_l}` (rightmost
/// applied first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    pub perm: Vec<u32>,
    pub word: Vec<usize>,
}

fn compose_perm(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn invert_perm(a: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len()];
    for (i, &img) in a.iter().enumerate() {
        out[img as usize] = i as u32;
    }
    out
}

impl WeylElement {
    pub fn identity(n_roots: usize) -> Self {
        WeylElement {
            perm: (0..n_roots as u32).collect(),
            word: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm
            .iter()
            .enumerate()
            .all(|(i, &img)| i as u32 == img)
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// Rebuild a Weyl element from its root permutation, recomputing a
    /// canonical reduced word by greedy descent.
    pub fn from_perm(ss: &SimpleSystem, perm: Vec<u32>) -> Result<Self, WeylError> {
        let word = word_from_perm(ss, &perm)?;
        Ok(WeylElement { perm, word })
    }

    /// `self ∘ other` with a canonical reduced word.
    pub fn compose(&self, ss: &SimpleSystem, other: &WeylElement) -> WeylElement {
        let perm = compose_perm(&self.perm, &other.perm);
        WeylElement::from_perm(ss, perm).expect("product of Weyl elements")
    }

    pub fn inverse(&self, ss: &SimpleSystem) -> WeylElement {
        WeylElement::from_perm(ss, invert_perm(&self.perm)).expect("inverse of Weyl element")
    }

    /// Apply to an arbitrary vector via the reduced word.
    pub fn apply(&self, ss: &SimpleSystem, v: &Vector) -> Vector {
        let mut x = v.clone();
        for &j in self.word.iter().rev() {
            x = ss.reflect_vector(j, &x);
        }
        x
    }

    /// Exact orthogonal matrix of the element on the ambient space.
    pub fn matrix(&self, ss: &SimpleSystem) -> RatMatrix {
        let d = ss.system().dim();
        let mut m = RatMatrix::identity(d);
        for &j in &self.word {
            m = m.mul(&reflection_matrix(ss.system(), ss.simple_roots()[j]));
        }
        m
    }
}

/// Permutation induced on the root list by the reflection in `roots[alpha]`.
pub fn reflection_perm(sys: &RootSystem, alpha: usize) -> Vec<u32> {
    let a = sys.root(alpha).clone();
    let norm = a.norm_sq();
    sys.roots()
        .iter()
        .map(|x| {
            let n = rat(2) * x.dot(&a) / norm.clone();
            let image = x - &a.scale(&n);
            sys.index_of(&image).expect("reflection closure") as u32
        })
        .collect()
}

/// Exact matrix of the reflection in `roots[alpha]` on the ambient space.
pub fn reflection_matrix(sys: &RootSystem, alpha: usize) -> RatMatrix {
    let a = sys.root(alpha);
    let d = sys.dim();
    let norm = a.norm_sq();
    let mut m = RatMatrix::identity(d);
    for i in 0..d {
        for j in 0..d {
            let t = rat(2) * &a.0[i] * &a.0[j] / norm.clone();
            m[(i, j)] -= t;
        }
    }
    m
}

/// The reflection `s_alpha` as a group element with a canonical word.
pub fn reflection(ss: &SimpleSystem, alpha: usize) -> WeylElement {
    let perm = reflection_perm(ss.system(), alpha);
    WeylElement::from_perm(ss, perm).expect("reflections lie in the Weyl group")
}

fn word_from_perm(ss: &SimpleSystem, perm: &[u32]) -> Result<Vec<usize>, WeylError> {
    if perm.len() != ss.system().len() {
        return Err(WeylError::NotAWeylElement);
    }
    let mut w = perm.to_vec();
    let mut suffix = Vec::new();
    let bound = ss.positive_roots().len() + 1;
    while !w.iter().enumerate().all(|(i, &img)| i as u32 == img) {
        // Some simple root must be sent negative, else w fixes the chamber
        // and is the identity.
        let Some(i) = (0..ss.rank()).find(|&i| !ss.is_positive(w[ss.simple_roots()[i]] as usize))
        else {
            return Err(WeylError::NotAWeylElement);
        };
        w = compose_perm(&w, &ss.simple_perms[i]);
        suffix.push(i);
        if suffix.len() > bound {
            return Err(WeylError::NotAWeylElement);
        }
    }
    suffix.reverse();
    Ok(suffix)
}

/// Enumerate the full Weyl group by breadth-first search over words in the
/// simple reflections. Words come out reduced (BFS layers are word length).
/// Refuses loudly when the group exceeds `cap`.
pub fn generate_weyl(ss: &SimpleSystem, cap: usize) -> Result<Vec<WeylElement>, WeylError> {
    let n = ss.system().len();
    let id = WeylElement::identity(n);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(id.perm.clone());
    let mut out = vec![id];
    let mut frontier = 0;
    while frontier < out.len() {
        let current = out[frontier].clone();
        frontier += 1;
        for i in 0..ss.rank() {
            // Right multiplication keeps BFS words reduced.
            let perm = compose_perm(&current.perm, &ss.simple_perms[i]);
            if !seen.contains(&perm) {
                if out.len() >= cap {
                    return Err(WeylError::CapExceeded { cap });
                }
                seen.insert(perm.clone());
                let mut word = current.word.clone();
                word.push(i);
                out.push(WeylElement { perm, word });
            }
        }
    }
    Ok(out)
}

/// Closed-form Weyl group order for an irreducible type, used as a
/// cross-check oracle for [`generate_weyl`].
pub fn weyl_order_closed_form(ctype: crate::rootsys::ComponentType) -> Option<u128> {
    use crate::rootsys::IrreducibleType::*;
    let r = ctype.rank as u128;
    let fact = |n: u128| (1..=n).product::<u128>();
    Some(match ctype.family {
        A => fact(r + 1),
        B | C | BC => (1u128 << r) * fact(r),
        D => {
            if ctype.rank < 2 {
                return None;
            }
            (1u128 << (r - 1)) * fact(r)
        }
        G => 12,
        F => 1152,
        E => match ctype.rank {
            6 => 51_840,
            7 => 2_903_040,
            8 => 696_729_600,
            _ => return None,
        },
    })
}

/// Send `v` into the closed dominant chamber: returns `(w(v), w)` with
/// `w(v)` dominant. Greedy descent; the result vector is unique for fixed
/// `v`, and dominant inputs (including 0) return the identity.
pub fn to_dominant(ss: &SimpleSystem, v: &Vector) -> (Vector, WeylElement) {
    let mut x = v.clone();
    let mut perm: Vec<u32> = (0..ss.system().len() as u32).collect();
    loop {
        let Some(i) =
            (0..ss.rank()).find(|&i| sign(&x.dot(ss.system().root(ss.simple_roots()[i]))) < 0)
        else {
            break;
        };
        x = ss.reflect_vector(i, &x);
        perm = compose_perm(&ss.simple_perms[i], &perm);
    }
    let w = WeylElement::from_perm(ss, perm).expect("descent lands in the Weyl group");
    (x, w)
}

/// The longest element: the unique `w_0` with `w_0(D) = -D`. Found by greedy
/// descent from the negated chamber vector; no group enumeration.
pub fn longest_element(ss: &SimpleSystem) -> WeylElement {
    let minus = -ss.regular_vector();
    let (_, w) = to_dominant(ss, &minus);
    w.inverse(ss)
}
