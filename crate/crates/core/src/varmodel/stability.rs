use nalgebra::DMatrix;
use serde::Serialize;

use super::VarFit;
use crate::error::{Error, Result};
use crate::numstat::eigenvalues;

/// An inverse root of the AR characteristic polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// Sorted by descending modulus; conjugates with negative imaginary part first.
    pub roots: Vec<Root>,
    pub stable: bool,
}

impl StabilityReport {
    pub fn max_modulus(&self) -> f64 {
        self.roots.first().map_or(0.0, |r| r.modulus)
    }
}

/// `(kp) x (kp)` companion matrix: `[A_1 ... A_p]` on top, identity blocks
/// below the diagonal.
pub fn companion_matrix(fit: &VarFit) -> Result<DMatrix<f64>> {
    if fit.p == 0 {
        return Err(Error::Domain("a VAR(0) has no companion form".into()));
    }
    let (k, p) = (fit.k, fit.p);
    let mut c = DMatrix::zeros(k * p, k * p);
    for (l, a) in fit.lag_matrices.iter().enumerate() {
        c.view_mut((0, l * k), (k, k)).copy_from(a);
    }
    for i in k..k * p {
        c[(i, i - k)] = 1.0;
    }
    Ok(c)
}

const STABILITY_MARGIN: f64 = 1e-9;

/// Companion eigenvalues; stable when every modulus is below one.
pub fn stability(fit: &VarFit) -> Result<StabilityReport> {
    let c = companion_matrix(fit)?;
    let mut roots: Vec<Root> = eigenvalues(&c)?
        .into_iter()
        .map(|z| Root {
            re: z.re,
            im: z.im,
            modulus: z.norm(),
        })
        .collect();
    roots.sort_by(|a, b| {
        b.modulus
            .total_cmp(&a.modulus)
            .then(b.re.total_cmp(&a.re))
            .then(a.im.total_cmp(&b.im))
    });
    let stable = roots.iter().all(|r| r.modulus < 1.0 - STABILITY_MARGIN);
    Ok(StabilityReport { roots, stable })
}
