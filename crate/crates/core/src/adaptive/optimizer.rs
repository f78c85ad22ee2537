use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::simulator::Ansatz;

/// Basin-hopping settings around a quasi-Newton local minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub hops: usize,
    pub temperature: f64,
    pub step_size: f64,
    /// Gradient norm at which a local minimization stops.
    pub gtol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            hops: 10,
            temperature: 0.5,
            step_size: 1e-6,
            gtol: 1e-8,
            max_iterations: 1000,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(Error::InvalidInput(format!("temperature must be positive, got {}", self.temperature)));
        }
        if !(self.step_size >= 0.0) || !(self.gtol > 0.0) {
            return Err(Error::InvalidInput("step size must be non-negative and gtol positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a local minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS with an Armijo backtracking line search.
///
/// `f` returns the value and gradient. The returned value never exceeds
/// `f(x0)`.
pub fn bfgs<F>(mut f: F, x0: Vec<f64>, gtol: f64, max_iterations: usize) -> Result<LocalMinimum>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let n = x0.len();
    let mut x = x0;
    let (mut fx, mut g) = f(&x)?;
    let identity = |n: usize| {
        let mut m = vec![0.0; n * n];
        (0..n).for_each(|i| m[i * n + i] = 1.0);
        m
    };
    let mut hinv = identity(n);
    let mut iterations = 0;
    while iterations < max_iterations && norm(&g) > gtol {
        iterations += 1;
        let mut p: Vec<f64> = (0..n).map(|i| -dotf(&hinv[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dotf(&p, &g);
        if slope >= 0.0 {
            hinv = identity(n);
            p = g.iter().map(|v| -v).collect();
            slope = dotf(&p, &g);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + alpha * pi).collect();
            let (ft, gt) = f(&trial)?;
            if ft <= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            if hinv != identity(n) {
                hinv = identity(n);
                continue;
            }
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dotf(&s, &y);
        if sy > 1e-16 * norm(&s) * norm(&y) && sy > 0.0 {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dotf(&hinv[i * n..(i + 1) * n], &y)).collect();
            let yhy = dotf(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        let progress = fx - fn_;
        x = xn;
        fx = fn_;
        g = gn;
        if progress <= f64::EPSILON * fx.abs() && norm(&s) <= f64::EPSILON * (1.0 + norm(&x)) {
            break;
        }
    }
    Ok(LocalMinimum {
        gradient_norm: norm(&g),
        x,
        value: fx,
        iterations,
    })
}

/// Basin hopping over `f`: local descent, then `hops` perturb-and-minimize
/// rounds with Metropolis acceptance. Returns the best minimum seen.
pub fn basin_hopping<F>(mut f: F, x0: Vec<f64>, cfg: &OptimizerConfig, rng: &mut ChaCha8Rng) -> Result<LocalMinimum>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    cfg.validate()?;
    let mut current = bfgs(&mut f, x0, cfg.gtol, cfg.max_iterations)?;
    let mut best = current.clone();
    for _ in 0..cfg.hops {
        let start: Vec<f64> = current
            .x
            .iter()
            .map(|v| v + cfg.step_size * rng.random_range(-1.0..=1.0))
            .collect();
        let trial = bfgs(&mut f, start, cfg.gtol, cfg.max_iterations)?;
        let accept = trial.value < current.value || {
            let u: f64 = rng.random();
            u < (-(trial.value - current.value) / cfg.temperature).exp()
        };
        if trial.value < best.value {
            best = trial.clone();
        }
        if accept {
            current = trial;
        }
    }
    Ok(best)
}

/// Jointly optimizes every angle of `ansatz` from its current values.
///
/// Returns the best parameters and energy; the energy never exceeds that of
/// the incoming parameters.
pub fn joint_optimize(ansatz: &Ansatz, h: &PauliSum, cfg: &OptimizerConfig) -> Result<(Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut work = ansatz.clone();
    let x0 = ansatz.parameters();
    let (e0, _) = ansatz.energy_and_gradient(h)?;
    let best = basin_hopping(
        |x| {
            work.set_parameters(x);
            work.energy_and_gradient(h)
        },
        x0.clone(),
        cfg,
        &mut rng,
    )?;
    if best.value <= e0 {
        Ok((best.x, best.value))
    } else {
        Ok((x0, e0))
    }
}
