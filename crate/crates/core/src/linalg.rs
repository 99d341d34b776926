//! Exact rational vectors, matrices, and linear maps between spans.
//!
//! Everything in the exact half of the crate runs on [`Rat`]
//! (arbitrary-precision rationals), so identities like reflection closure or
//! root-integer preservation are literal equality tests.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational. Always in lowest terms with a positive
/// denominator (guaranteed by the `num` representation).
pub type Rat = BigRational;

/// Build a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Build a rational from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("vector length {got} does not match expected dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular system: no solution")]
    Singular,
    #[error("vector lies outside the span of the basis")]
    NotInSpan,
}

/// Dense vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(pub Vec<Rat>);

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector(vec![Rat::zero(); dim])
    }

    /// Vector with integer coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Standard (Euclidean) dot product, exact.
    pub fn dot(&self, other: &Vector) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b)
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    pub fn scale(&self, factor: &Rat) -> Vector {
        Vector(self.0.iter().map(|c| c * factor).collect())
    }

    /// True if `other == t * self` for some scalar `t`; returns `t`.
    pub fn proportionality(&self, other: &Vector) -> Option<Rat> {
        debug_assert_eq!(self.dim(), other.dim());
        let pivot = self.0.iter().position(|c| !c.is_zero())?;
        let t = &other.0[pivot] / &self.0[pivot];
        for (a, b) in self.0.iter().zip(&other.0) {
            if *b != a * &t {
                return None;
            }
        }
        Some(t)
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RatMatrix {
            nrows,
            ncols,
            data: vec![Rat::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Self {
        let nrows = cols.first().map_or(0, Vector::dim);
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m[(i, j)] = c.0[i].clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.nrows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        debug_assert_eq!(self.ncols, v.dim());
        let mut out = Vector::zero(self.nrows);
        for i in 0..self.nrows {
            let mut acc = Rat::zero();
            for j in 0..self.ncols {
                acc += &self[(i, j)] * &v.0[j];
            }
            out.0[i] = acc;
        }
        out
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        debug_assert_eq!(self.ncols, rhs.nrows);
        let mut out = RatMatrix::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Rank via fraction-free row reduction on a copy.
    pub fn rank(&self) -> usize {
        Echelon::new(self).rank
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let ech = Echelon::new(self);
        if ech.rank < n {
            return Err(LinalgError::Singular);
        }
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = Vector::zero(n);
            e.0[j] = Rat::one();
            cols.push(ech.solve(&e)?);
        }
        Ok(RatMatrix::from_columns(
            &cols.iter().map(|c| Vector(c.clone())).collect::<Vec<_>>(),
        ))
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.ncols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows {
            write!(f, "[")?;
            for j in 0..self.ncols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Row-echelon factorization of a matrix, reusable for repeated solves of
/// `A x = b` (consistent overdetermined systems included).
pub struct Echelon {
    /// Reduced rows of the augmented-ready echelon form of `A`.
    rows: Vec<Vec<Rat>>,
    /// Row operations encoded as the same reduction applied to an identity.
    ops: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    pub rank: usize,
    ncols: usize,
}

impl Echelon {
    pub fn new(a: &RatMatrix) -> Self {
        let nrows = a.nrows;
        let ncols = a.ncols;
        let mut rows: Vec<Vec<Rat>> = (0..nrows)
            .map(|i| (0..ncols).map(|j| a[(i, j)].clone()).collect())
            .collect();
        let mut ops: Vec<Vec<Rat>> = (0..nrows)
            .map(|i| {
                (0..nrows)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            ops.swap(r, p);
            let inv = rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x /= &inv;
            }
            for x in ops[r].iter_mut() {
                *x /= &inv;
            }
            for i in 0..nrows {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..ncols {
                        let t = &f * &rows[r][j];
                        rows[i][j] -= t;
                    }
                    for j in 0..nrows {
                        let t = &f * &ops[r][j];
                        ops[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == nrows {
                break;
            }
        }
        Echelon {
            rows,
            ops,
            pivots,
            rank: r,
            ncols,
        }
    }

    /// Solve `A x = b`. Errors with `NotInSpan` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &Vector) -> Result<Vec<Rat>, LinalgError> {
        let nrows = self.ops.len();
        if b.dim() != nrows {
            return Err(LinalgError::DimensionMismatch {
                expected: nrows,
                got: b.dim(),
            });
        }
        // Apply the recorded row operations to b.
        let tb: Vec<Rat> = (0..nrows)
            .map(|i| {
                self.ops[i]
                    .iter()
                    .zip(&b.0)
                    .map(|(o, x)| o * x)
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect();
        // Rows beyond the rank must have zero rhs for consistency.
        for row in self.rank..nrows {
            if !tb[row].is_zero() {
                return Err(LinalgError::NotInSpan);
            }
        }
        let mut x = vec![Rat::zero(); self.ncols];
        for (row, &col) in self.pivots.iter().enumerate() {
            // Reduced echelon: the pivot row reads x_col + sum(free) = tb.
            let mut acc = tb[row].clone();
            for j in (col + 1)..self.ncols {
                if !self.rows[row][j].is_zero() && !x[j].is_zero() {
                    acc -= &self.rows[row][j] * &x[j];
                }
            }
            x[col] = acc;
        }
        Ok(x)
    }
}

/// A linear map defined on the span of `basis` by the images of the basis
/// vectors. Source and target ambient dimensions may differ; applying the
/// map to a vector outside the span is an error.
#[derive(Clone)]
pub struct LinearMap {
    basis: Vec<Vector>,
    images: Vec<Vector>,
    factor: std::sync::Arc<Echelon>,
}

impl LinearMap {
    pub fn new(basis: Vec<Vector>, images: Vec<Vector>) -> Result<Self, LinalgError> {
        assert_eq!(basis.len(), images.len());
        let m = RatMatrix::from_columns(&basis);
        let factor = Echelon::new(&m);
        if factor.rank < basis.len() {
            return Err(LinalgError::Singular);
        }
        Ok(LinearMap {
            basis,
            images,
            factor: std::sync::Arc::new(factor),
        })
    }

    /// The identity on the span of `basis`.
    pub fn identity(basis: Vec<Vector>) -> Result<Self, LinalgError> {
        let images = basis.clone();
        Self::new(basis, images)
    }

    /// Scalar multiple of the identity on the span of `basis`.
    pub fn scaling(basis: Vec<Vector>, factor: &Rat) -> Result<Self, LinalgError> {
        let images = basis.iter().map(|v| v.scale(factor)).collect();
        Self::new(basis, images)
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }

    /// Coordinates of `v` in the basis of the source span.
    pub fn coords(&self, v: &Vector) -> Result<Vec<Rat>, LinalgError> {
        self.factor.solve(v)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector, LinalgError> {
        let coords = self.coords(v)?;
        let dim = self.images.first().map_or(0, Vector::dim);
        let mut out = Vector::zero(dim);
        for (c, img) in coords.iter().zip(&self.images) {
            if c.is_zero() {
                continue;
            }
            out = &out + &img.scale(c);
        }
        Ok(out)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap, LinalgError> {
        let images = other
            .images
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        LinearMap::new(other.basis.clone(), images)
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearMap")
            .field("basis", &self.basis)
            .field("images", &self.images)
            .finish()
    }
}

/// Signum of a rational: -1, 0, or 1.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
