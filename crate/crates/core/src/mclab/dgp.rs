//! Simulated processes.
//!
//! Innovations are standard normal draws (`rand_distr::StandardNormal`, a
//! ziggurat transform of uniform output) from ChaCha8 keyed by the [`DgpSpec`]
//! seed. Variable `j` reads from ChaCha stream `j`, so each variable owns an
//! independent substream and adding variables never perturbs earlier ones.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numstat::eigenvalues;
use crate::series::{Dataset, Period};

const BURN_IN: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpKind {
    /// `k` independent driftless random walks starting at zero.
    RandomWalk { k: usize },
    /// `y_t = c + sum_l A_l y_{t-l} + e_t`, started from zero after a burn-in.
    StationaryVar { lags: Vec<Vec<Vec<f64>>>, constant: Vec<f64> },
    /// `beta' y_t = u_t` with `u_t = rho u_{t-1} + e_t`; variables `2..k`
    /// are independent random walks. True rank 1.
    CointegratedSystem { vector: Vec<f64>, error_ar: f64 },
    /// `x` is a random walk; `y_t = 0.5 y_{t-1} + coefficient * x_{t-1} + e_t`.
    CausalBivariate { coefficient: f64 },
    /// Two independent random walks `x`, `y`.
    IndependentBivariate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpSpec {
    pub kind: DgpKind,
    pub t: usize,
    pub seed: u64,
}

impl DgpSpec {
    /// Validates the parameters (stationary VARs must have companion
    /// spectral radius below one).
    pub fn new(kind: DgpKind, t: usize, seed: u64) -> Result<Self> {
        let spec = DgpSpec { kind, t, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn k(&self) -> usize {
        match &self.kind {
            DgpKind::RandomWalk { k } => *k,
            DgpKind::StationaryVar { constant, .. } => constant.len(),
            DgpKind::CointegratedSystem { vector, .. } => vector.len(),
            DgpKind::CausalBivariate { .. } | DgpKind::IndependentBivariate => 2,
        }
    }

    /// Cointegration rank implied by the process.
    pub fn true_rank(&self) -> usize {
        match &self.kind {
            DgpKind::RandomWalk { .. } | DgpKind::IndependentBivariate => 0,
            DgpKind::CointegratedSystem { .. } => 1,
            DgpKind::CausalBivariate { coefficient } => usize::from(*coefficient != 0.0),
            DgpKind::StationaryVar { constant, .. } => constant.len(),
        }
    }

    /// Same process, different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        DgpSpec { seed, ..self.clone() }
    }

    /// Short label without commas, e.g. `random_walk(k=3)`.
    pub fn label(&self) -> String {
        match &self.kind {
            DgpKind::RandomWalk { k } => format!("random_walk(k={k})"),
            DgpKind::StationaryVar { lags, constant } => {
                format!("stationary_var(k={};p={})", constant.len(), lags.len())
            }
            DgpKind::CointegratedSystem { vector, error_ar } => {
                let v: Vec<String> = vector.iter().map(|b| b.to_string()).collect();
                format!("cointegrated_system(beta=[{}];rho={error_ar})", v.join(" "))
            }
            DgpKind::CausalBivariate { coefficient } => format!("causal_bivariate(c={coefficient})"),
            DgpKind::IndependentBivariate => "independent_bivariate".to_string(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.t < 2 {
            return bad(format!("sample length {} is below 2", self.t));
        }
        match &self.kind {
            DgpKind::RandomWalk { k } if *k == 0 => bad("random walk needs k >= 1".into()),
            DgpKind::StationaryVar { lags, constant } => {
                let k = constant.len();
                if k == 0 || lags.is_empty() {
                    return bad("stationary VAR needs k >= 1 and at least one lag".into());
                }
                if lags.iter().any(|a| a.len() != k || a.iter().any(|row| row.len() != k)) {
                    return bad(format!("lag matrices must be {k}x{k}"));
                }
                let radius = spectral_radius(lags)?;
                if radius >= 1.0 {
                    return bad(format!("companion spectral radius {radius:.6} is not below 1"));
                }
                Ok(())
            }
            DgpKind::CointegratedSystem { vector, error_ar } => {
                if vector.len() < 2 || vector[0] == 0.0 {
                    return bad("cointegrating vector needs length >= 2 and a nonzero first entry".into());
                }
                if error_ar.abs() >= 1.0 {
                    return bad(format!("equilibrium error AR coefficient {error_ar} is not stationary"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn spectral_radius(lags: &[Vec<Vec<f64>>]) -> Result<f64> {
    let k = lags[0].len();
    let p = lags.len();
    let mut c = DMatrix::zeros(k * p, k * p);
    for (l, a) in lags.iter().enumerate() {
        for i in 0..k {
            for j in 0..k {
                c[(i, l * k + j)] = a[i][j];
            }
        }
    }
    for i in k..k * p {
        c[(i, i - k)] = 1.0;
    }
    Ok(eigenvalues(&c)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// SplitMix64 finalizer applied to `base + index`.
pub fn replication_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `n x k` innovations; column `j` comes from stream `j`.
fn innovations(seed: u64, n: usize, k: usize) -> DMatrix<f64> {
    let mut e = DMatrix::zeros(n, k);
    for j in 0..k {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        for t in 0..n {
            e[(t, j)] = StandardNormal.sample(&mut rng);
        }
    }
    e
}

fn cumulate(e: &DMatrix<f64>, j: usize) -> Vec<f64> {
    e.column(j)
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Generates one sample. Deterministic in `dgp`, seed included.
pub fn simulate(dgp: &DgpSpec) -> Result<Dataset> {
    dgp.validate()?;
    let t = dgp.t;
    let k = dgp.k();
    let start = Period::new(2003, 1)?;
    let names: Vec<String> = match dgp.kind {
        DgpKind::CausalBivariate { .. } | DgpKind::IndependentBivariate => vec!["x".into(), "y".into()],
        _ => (1..=k).map(|j| format!("y{j}")).collect(),
    };

    let columns: Vec<Vec<f64>> = match &dgp.kind {
        DgpKind::RandomWalk { .. } | DgpKind::IndependentBivariate => {
            let e = innovations(dgp.seed, t, k);
            (0..k).map(|j| cumulate(&e, j)).collect()
        }
        DgpKind::StationaryVar { lags, constant } => {
            let e = innovations(dgp.seed, t + BURN_IN, k);
            let a: Vec<DMatrix<f64>> = lags
                .iter()
                .map(|m| DMatrix::from_fn(k, k, |i, j| m[i][j]))
                .collect();
            let c = DVector::from_column_slice(constant);
            let mut y = DMatrix::zeros(t + BURN_IN, k);
            for r in 0..t + BURN_IN {
                let mut v = c.clone() + e.row(r).transpose();
                for (l, al) in a.iter().enumerate() {
                    if r > l {
                        v += al * y.row(r - l - 1).transpose();
                    }
                }
                y.set_row(r, &v.transpose());
            }
            (0..k).map(|j| y.column(j).rows(BURN_IN, t).iter().copied().collect()).collect()
        }
        DgpKind::CointegratedSystem { vector, error_ar } => {
            let e = innovations(dgp.seed, t, k);
            let mut cols: Vec<Vec<f64>> = vec![Vec::new(); k];
            for (j, col) in cols.iter_mut().enumerate().skip(1) {
                *col = cumulate(&e, j);
            }
            let mut u = 0.0;
            cols[0] = (0..t)
                .map(|r| {
                    u = error_ar * u + e[(r, 0)];
                    let rest: f64 = (1..k).map(|j| vector[j] * cols[j][r]).sum();
                    (u - rest) / vector[0]
                })
                .collect();
            cols
        }
        DgpKind::CausalBivariate { coefficient } => {
            let e = innovations(dgp.seed, t, 2);
            let x = cumulate(&e, 0);
            let mut y = vec![0.0; t];
            y[0] = e[(0, 1)];
            for r in 1..t {
                y[r] = 0.5 * y[r - 1] + coefficient * x[r - 1] + e[(r, 1)];
            }
            vec![x, y]
        }
    };
    Dataset::from_columns(names, start, &columns)
}
