use nalgebra::{Cholesky, DMatrix, DVector, Dyn, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-8;

fn check_square(a: &DMatrix<f64>, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!("{what} is {}x{}, expected square", a.nrows(), a.ncols())));
    }
    Ok(())
}

fn check_symmetric(a: &DMatrix<f64>, what: &str) -> Result<()> {
    check_square(a, what)?;
    let scale = a.amax().max(f64::MIN_POSITIVE);
    for i in 0..a.nrows() {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::NotPositiveDefinite(format!("{what} is not symmetric")));
            }
        }
    }
    Ok(())
}

fn cholesky(s: &DMatrix<f64>, what: &str) -> Result<Cholesky<f64, Dyn>> {
    check_symmetric(s, what)?;
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotPositiveDefinite(format!("{what} has non-finite entries")));
    }
    Cholesky::new(s.clone()).ok_or_else(|| Error::NotPositiveDefinite(what.to_string()))
}

/// `ln det S` for symmetric positive definite `S`, via Cholesky.
pub fn log_det_psd(s: &DMatrix<f64>) -> Result<f64> {
    let chol = cholesky(s, "covariance matrix")?;
    let l = chol.l_dirty();
    let mut acc = 0.0;
    for i in 0..s.nrows() {
        let d = l[(i, i)];
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite("covariance matrix".into()));
        }
        acc += d.ln();
    }
    Ok(2.0 * acc)
}

/// Inverse of a symmetric positive definite matrix.
pub fn spd_inverse(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(cholesky(s, "matrix")?.inverse())
}

/// All eigenvalues of a real square matrix, with multiplicity. Complex
/// eigenvalues come in exact conjugate pairs.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    check_square(a, "matrix")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 1000 * n).ok_or(Error::ConvergenceFailure(n))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Solution of the symmetric-definite problem `A v = lambda B v`.
#[derive(Debug, Clone)]
pub struct GenEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `i` pairs with `values[i]` and satisfies `v' B v = 1`.
    pub vectors: DMatrix<f64>,
}

/// Generalized symmetric eigenproblem by Cholesky reduction of `B`.
pub fn gen_eig_sym(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<GenEigen> {
    check_symmetric(a, "A")?;
    if a.shape() != b.shape() {
        return Err(Error::Shape("A and B differ in shape".into()));
    }
    let chol = cholesky(b, "B")?;
    let l = chol.l();
    // C = L^-1 A L^-T
    let x = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::NotPositiveDefinite("B".into()))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::NotPositiveDefinite("B".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);

    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let lt = l.transpose();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let w: DVector<f64> = eig.eigenvectors.column(src).into_owned();
        let v = lt
            .solve_upper_triangular(&w)
            .ok_or_else(|| Error::NotPositiveDefinite("B".into()))?;
        vectors.set_column(dst, &v);
    }
    Ok(GenEigen {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors,
    })
}
