//! Matrix models of the supported real simple Lie algebras and the derived
//! structure: structure constants, ad-matrices, Killing form, Cartan
//! involution, Cartan decomposition, and a chosen maximal abelian `a ⊆ p`.

use nalgebra::{DMatrix, DVector};

use crate::weighted::AlgebraId;

use super::LieError;

const MAX_DIM: usize = 64;
const STRUCT_TOL: f64 = 1e-8;

/// Complex matrix as a pair of real parts.
#[derive(Clone)]
struct CMat {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl CMat {
    fn zeros(n: usize) -> Self {
        CMat {
            re: DMatrix::zeros(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.re[(i, j)] = 1.0;
        m
    }

    fn i_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.im[(i, j)] = 1.0;
        m
    }

    fn conj(&self) -> Self {
        CMat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Realification: each entry x+iy becomes the 2x2 block [[x, -y], [y, x]].
    fn realify(&self) -> DMatrix<f64> {
        let n = self.re.nrows();
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (self.re[(i, j)], self.im[(i, j)]);
                out[(2 * i, 2 * j)] = x;
                out[(2 * i, 2 * j + 1)] = -y;
                out[(2 * i + 1, 2 * j)] = y;
                out[(2 * i + 1, 2 * j + 1)] = x;
            }
        }
        out
    }
}

/// Embed a quaternionic matrix A + Bj (A, B complex) as the complex block
/// matrix [[A, B], [-conj(B), conj(A)]].
fn quaternion_embed(a: &CMat, b: &CMat) -> CMat {
    let n = a.re.nrows();
    let mut out = CMat::zeros(2 * n);
    let (bc, ac) = (b.conj(), a.conj());
    for i in 0..n {
        for j in 0..n {
            out.re[(i, j)] = a.re[(i, j)];
            out.im[(i, j)] = a.im[(i, j)];
            out.re[(i, j + n)] = b.re[(i, j)];
            out.im[(i, j + n)] = b.im[(i, j)];
            out.re[(i + n, j)] = -bc.re[(i, j)];
            out.im[(i + n, j)] = -bc.im[(i, j)];
            out.re[(i + n, j + n)] = ac.re[(i, j)];
            out.im[(i + n, j + n)] = ac.im[(i, j)];
        }
    }
    out
}

/// A real semisimple Lie algebra realized by a basis of real matrices,
/// together with the derived structural data. Immutable after construction.
pub struct MatrixAlgebra {
    pub id: AlgebraId,
    pub rep_dim: usize,
    pub basis: Vec<DMatrix<f64>>,
    /// Real dimension of the algebra.
    pub dim: usize,
    /// ad(X_k) in basis coordinates.
    pub ad: Vec<DMatrix<f64>>,
    /// Cartan involution in basis coordinates.
    pub theta: DMatrix<f64>,
    /// Killing form Gram matrix B(X_i, X_j) = tr(ad X_i ∘ ad X_j).
    pub killing: DMatrix<f64>,
    /// Inner product B_θ(X, Y) = -B(X, θY); symmetric positive definite.
    pub btheta: DMatrix<f64>,
    /// Cholesky factor L with btheta = L Lᵀ (orthonormal-frame transport).
    chol_l: DMatrix<f64>,
    chol_l_inv: DMatrix<f64>,
    /// B_θ-orthonormal basis of k (coordinates).
    pub k_basis: Vec<DVector<f64>>,
    /// B_θ-orthonormal basis of p (coordinates).
    pub p_basis: Vec<DVector<f64>>,
    /// Coordinates of the chosen maximal abelian a ⊆ p.
    pub a_basis: Vec<DVector<f64>>,
    /// Pseudo-inverse of the vectorized basis matrix, for coordinates.
    pinv: DMatrix<f64>,
    vec_basis: DMatrix<f64>,
}

impl MatrixAlgebra {
    /// Real dimension of k (the maximal compact subalgebra).
    pub fn k_dim(&self) -> usize {
        self.k_basis.len()
    }

    pub fn p_dim(&self) -> usize {
        self.p_basis.len()
    }

    /// Real rank (dimension of a).
    pub fn rank(&self) -> usize {
        self.a_basis.len()
    }

    /// Coordinates of a rep-space matrix in the algebra basis, with a
    /// closure residual guard.
    pub fn coords(&self, m: &DMatrix<f64>) -> Result<DVector<f64>, LieError> {
        let v = DVector::from_column_slice(m.as_slice());
        let c = &self.pinv * &v;
        let residual = (&self.vec_basis * &c - &v).norm();
        if residual > STRUCT_TOL * (1.0 + v.norm()) {
            return Err(LieError::NotClosed { residual });
        }
        Ok(c)
    }

    /// The matrix Σ cᵢ Xᵢ.
    pub fn matrix_of(&self, coords: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.rep_dim, self.rep_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            out += b * *c;
        }
        out
    }

    /// ad(x) for x in coordinates.
    pub fn ad_of(&self, coords: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (c, adk) in coords.iter().zip(&self.ad) {
            out += adk * *c;
        }
        out
    }

    /// Bracket in coordinates.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.ad_of(x) * y
    }

    pub fn btheta_inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.btheta * y)[(0, 0)]
    }

    /// Transport an operator on g to the B_θ-orthonormal frame.
    pub fn to_orthonormal(&self, op: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol_l.transpose() * op * self.chol_l_inv.transpose()
    }

    /// Coordinates of an orthonormal-frame vector back in the basis frame.
    pub fn from_orthonormal_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        self.chol_l_inv.transpose() * v
    }

    /// Max residual of `θ[X,Y] = [θX, θY]` over all basis pairs, plus the
    /// involution defect. Checked at construction; exposed for reports.
    pub fn theta_automorphism_residual(&self) -> f64 {
        let mut worst = (&self.theta * &self.theta - DMatrix::identity(self.dim, self.dim))
            .abs()
            .max();
        for i in 0..self.dim {
            let ti = self.theta.column(i).into_owned();
            for j in 0..self.dim {
                let tj = self.theta.column(j).into_owned();
                let lhs = &self.theta * self.ad[i].column(j).into_owned();
                let rhs = self.bracket(&ti, &tj);
                worst = worst.max((lhs - rhs).abs().max());
            }
        }
        worst
    }
}

/// Build the matrix model of a supported algebra: sl(n,R), sl(n,C) realified,
/// sl(n,H) via complex 2n-blocks realified, or su(p,q). The Cartan involution
/// is minus conjugate-transpose in the defining representation, which is
/// minus plain transpose after realification; `a` is the standard diagonal
/// (block-diagonal for su) choice.
pub fn realize(id: &AlgebraId) -> Result<MatrixAlgebra, LieError> {
    let (basis, a_defrep) = match id {
        AlgebraId::SlR(n) => sl_r_basis(*n as usize)?,
        AlgebraId::SlC(n) => sl_c_basis(*n as usize)?,
        AlgebraId::SlH(n) => sl_h_basis(*n as usize)?,
        AlgebraId::Su(p, q) => su_basis(*p as usize, *q as usize)?,
        other => return Err(LieError::Unsupported(other.to_string())),
    };
    MatrixAlgebra::build(id.clone(), basis, a_defrep)
}

fn sl_r_basis(n: usize) -> Result<(Vec<DMatrix<f64>>, Vec<DMatrix<f64>>), LieError> {
    if n < 2 {
        return Err(LieError::ParameterOutOfRange(format!("sl({n},R)")));
    }
    let e = |i: usize, j: usize| {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        m
    };
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(e(i, j));
            }
        }
    }
    let mut a = Vec::new();
    for k in 0..n - 1 {
        let h = e(k, k) - e(k + 1, k + 1);
        basis.push(h.clone());
        a.push(h);
    }
    Ok((basis, a))
}

/// Complex basis of sl(n,C): off-diagonal units and diagonal differences.
fn sl_n_complex_units(n: usize) -> (Vec<CMat>, Vec<CMat>) {
    let mut units = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                units.push(CMat::unit(n, i, j));
            }
        }
    }
    let mut cartan = Vec::new();
    for k in 0..n - 1 {
        let mut h = CMat::zeros(n);
        h.re[(k, k)] = 1.0;
        h.re[(k + 1, k + 1)] = -1.0;
        cartan.push(h);
    }
    (units, cartan)
}

fn sl_c_basis(n: usize) -> Result<(Vec<DMatrix<f64>>, Vec<DMatrix<f64>>), LieError> {
    if n < 2 {
        return Err(LieError::ParameterOutOfRange(format!("sl({n},C)")));
    }
    let (units, cartan) = sl_n_complex_units(n);
    let mut basis = Vec::new();
    for m in units.iter().chain(&cartan) {
        basis.push(m.realify());
        let im = CMat {
            re: -m.im.clone(),
            im: m.re.clone(),
        };
        basis.push(im.realify());
    }
    let a = cartan.iter().map(CMat::realify).collect();
    Ok((basis, a))
}

fn sl_h_basis(n: usize) -> Result<(Vec<DMatrix<f64>>, Vec<DMatrix<f64>>), LieError> {
    if n < 2 {
        return Err(LieError::ParameterOutOfRange(format!("sl({n},H)")));
    }
    // Quaternionic matrices A + Bj with Re tr A = 0.
    let mut parts: Vec<(CMat, CMat)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                parts.push((CMat::unit(n, i, j), CMat::zeros(n)));
                parts.push((CMat::i_unit(n, i, j), CMat::zeros(n)));
            }
            parts.push((CMat::zeros(n), CMat::unit(n, i, j)));
            parts.push((CMat::zeros(n), CMat::i_unit(n, i, j)));
        }
        // Imaginary diagonal entries carry no real-trace constraint.
        parts.push((CMat::i_unit(n, i, i), CMat::zeros(n)));
    }
    let mut a_parts: Vec<(CMat, CMat)> = Vec::new();
    for k in 0..n - 1 {
        let mut h = CMat::zeros(n);
        h.re[(k, k)] = 1.0;
        h.re[(k + 1, k + 1)] = -1.0;
        parts.push((h.clone(), CMat::zeros(n)));
        a_parts.push((h, CMat::zeros(n)));
    }
    let basis = parts
        .iter()
        .map(|(a, b)| quaternion_embed(a, b).realify())
        .collect();
    let a = a_parts
        .iter()
        .map(|(a, b)| quaternion_embed(a, b).realify())
        .collect();
    Ok((basis, a))
}

fn su_basis(p: usize, q: usize) -> Result<(Vec<DMatrix<f64>>, Vec<DMatrix<f64>>), LieError> {
    if p < 1 || q < p || p + q < 2 {
        return Err(LieError::ParameterOutOfRange(format!("su({p},{q})")));
    }
    let n = p + q;
    // Block structure [[A, B], [B*, D]] with A ∈ u(p), D ∈ u(q),
    // tr A + tr D = 0, and B an arbitrary complex p x q block.
    let mut parts: Vec<CMat> = Vec::new();
    let skew_block = |lo: usize, hi: usize, parts: &mut Vec<CMat>| {
        for i in lo..hi {
            for j in (i + 1)..hi {
                let mut m = CMat::zeros(n);
                m.re[(i, j)] = 1.0;
                m.re[(j, i)] = -1.0;
                parts.push(m);
                let mut m = CMat::zeros(n);
                m.im[(i, j)] = 1.0;
                m.im[(j, i)] = 1.0;
                parts.push(m);
            }
        }
    };
    skew_block(0, p, &mut parts);
    skew_block(p, n, &mut parts);
    for k in 0..n - 1 {
        let mut m = CMat::zeros(n);
        m.im[(k, k)] = 1.0;
        m.im[(k + 1, k + 1)] = -1.0;
        parts.push(m);
    }
    for i in 0..p {
        for j in p..n {
            let mut m = CMat::zeros(n);
            m.re[(i, j)] = 1.0;
            m.re[(j, i)] = 1.0;
            parts.push(m);
            let mut m = CMat::zeros(n);
            m.im[(i, j)] = 1.0;
            m.im[(j, i)] = -1.0;
            parts.push(m);
        }
    }
    let mut a_parts = Vec::new();
    for k in 0..p {
        let mut m = CMat::zeros(n);
        m.re[(k, p + k)] = 1.0;
        m.re[(p + k, k)] = 1.0;
        a_parts.push(m);
    }
    Ok((
        parts.iter().map(CMat::realify).collect(),
        a_parts.iter().map(CMat::realify).collect(),
    ))
}

impl MatrixAlgebra {
    fn build(
        id: AlgebraId,
        basis: Vec<DMatrix<f64>>,
        a_defrep: Vec<DMatrix<f64>>,
    ) -> Result<Self, LieError> {
        let dim = basis.len();
        if dim > MAX_DIM {
            return Err(LieError::TooLarge { dim, max: MAX_DIM });
        }
        let rep_dim = basis[0].nrows();
        let vec_basis = DMatrix::from_columns(
            &basis
                .iter()
                .map(|m| DVector::from_column_slice(m.as_slice()))
                .collect::<Vec<_>>(),
        );
        let svd = vec_basis.clone().svd(true, true);
        let pinv = svd.pseudo_inverse(1e-10).map_err(|_| LieError::Singular)?;

        let mut partial = MatrixAlgebra {
            id,
            rep_dim,
            basis,
            dim,
            ad: Vec::new(),
            theta: DMatrix::zeros(dim, dim),
            killing: DMatrix::zeros(dim, dim),
            btheta: DMatrix::zeros(dim, dim),
            chol_l: DMatrix::zeros(dim, dim),
            chol_l_inv: DMatrix::zeros(dim, dim),
            k_basis: Vec::new(),
            p_basis: Vec::new(),
            a_basis: Vec::new(),
            pinv,
            vec_basis,
        };

        // Structure constants / ad matrices.
        let mut ad = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut adi = DMatrix::zeros(dim, dim);
            for j in 0..dim {
                let br =
                    &partial.basis[i] * &partial.basis[j] - &partial.basis[j] * &partial.basis[i];
                adi.set_column(j, &partial.coords(&br)?);
            }
            ad.push(adi);
        }
        partial.ad = ad;

        // Cartan involution: θ(X) = -Xᵀ in coordinates.
        let mut theta = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            theta.set_column(j, &partial.coords(&-partial.basis[j].transpose())?);
        }
        partial.theta = theta;

        // Killing form via ad-traces.
        let mut killing = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let t = (&partial.ad[i] * &partial.ad[j]).trace();
                killing[(i, j)] = t;
                killing[(j, i)] = t;
            }
        }
        partial.killing = killing;

        let bt = -&partial.killing * &partial.theta;
        partial.btheta = (&bt + &bt.transpose()) * 0.5;

        let chol =
            nalgebra::Cholesky::new(partial.btheta.clone()).ok_or(LieError::CartanSignature)?;
        partial.chol_l = chol.l();
        partial.chol_l_inv = partial
            .chol_l
            .clone()
            .try_inverse()
            .ok_or(LieError::Singular)?;

        // θ must be an involutive automorphism.
        let residual = partial.theta_automorphism_residual();
        if residual > STRUCT_TOL {
            return Err(LieError::ThetaNotAutomorphism { residual });
        }

        // Cartan split from the ±1 projectors of θ.
        partial.k_basis = projector_basis(&partial, true)?;
        partial.p_basis = projector_basis(&partial, false)?;
        if partial.k_basis.len() + partial.p_basis.len() != dim {
            return Err(LieError::CartanSignature);
        }
        check_signature(&partial)?;

        // The designated maximal abelian subspace.
        let mut a_basis = Vec::new();
        for m in &a_defrep {
            let c = partial.coords(m)?;
            // a ⊆ p: θ negates it.
            if (&partial.theta * &c + &c).abs().max() > STRUCT_TOL {
                return Err(LieError::CartanSignature);
            }
            a_basis.push(c);
        }
        for (i, x) in a_basis.iter().enumerate() {
            for y in &a_basis[i + 1..] {
                let residual = partial.bracket(x, y).abs().max();
                if residual > STRUCT_TOL {
                    return Err(LieError::NotAbelian { residual });
                }
            }
        }
        partial.a_basis = a_basis;
        Ok(partial)
    }
}

/// B_θ-orthonormal basis of the ±1 eigenspace of θ.
fn projector_basis(alg: &MatrixAlgebra, plus: bool) -> Result<Vec<DVector<f64>>, LieError> {
    let id = DMatrix::identity(alg.dim, alg.dim);
    let proj = if plus {
        (&id + &alg.theta) * 0.5
    } else {
        (&id - &alg.theta) * 0.5
    };
    // In the orthonormal frame the projector is symmetric; its singular
    // vectors with σ ≈ 1 span the eigenspace.
    let proj_on = alg.to_orthonormal(&proj);
    let svd = proj_on.clone().svd(true, false);
    let u = svd.u.as_ref().ok_or(LieError::Singular)?;
    let mut out = Vec::new();
    for (k, sv) in svd.singular_values.iter().enumerate() {
        if *sv > 0.5 {
            // Transport back to basis coordinates.
            out.push(alg.from_orthonormal_vec(&u.column(k).into_owned()));
        }
    }
    Ok(out)
}

/// B negative definite on k, positive definite on p.
fn check_signature(alg: &MatrixAlgebra) -> Result<(), LieError> {
    let restrict = |vs: &[DVector<f64>]| {
        let m = vs.len();
        let mut g = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                g[(i, j)] = (vs[i].transpose() * &alg.killing * &vs[j])[(0, 0)];
            }
        }
        (&g + &g.transpose()) * 0.5
    };
    if !alg.k_basis.is_empty() {
        let eig = restrict(&alg.k_basis).symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l >= -STRUCT_TOL) {
            return Err(LieError::CartanSignature);
        }
    }
    if !alg.p_basis.is_empty() {
        let eig = restrict(&alg.p_basis).symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= STRUCT_TOL) {
            return Err(LieError::CartanSignature);
        }
    }
    Ok(())
}
