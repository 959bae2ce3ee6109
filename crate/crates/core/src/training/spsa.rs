//! Simultaneous-perturbation stochastic approximation.
//!
//! Per iteration `k`: draw `delta` uniformly from `{-1, +1}^d`, set
//! `c_k = c0 / (k + 1)^gamma`, evaluate the loss at `theta +/- c_k delta`,
//! estimate `g_j = (L+ - L-) / (2 c_k delta_j)` and step
//! `theta <- theta - alpha g`. The learning rate is constant.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::{domain, Substream};

/// Half-open iteration range `[start, end)` evaluated with `shots` shots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRange {
    pub start: usize,
    pub end: usize,
    pub shots: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpsaConfig {
    pub learning_rate: f64,
    pub perturbation: f64,
    pub decay: f64,
    pub max_iters: usize,
    pub shot_schedule: Vec<ShotRange>,
    pub seed: u64,
}

impl Default for SpsaConfig {
    /// alpha = 0.5, c0 = 0.4, gamma = 0.02, K = 120; 256 shots for
    /// iterations 0..50 and 512 for 50..120.
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            perturbation: 0.4,
            decay: 0.02,
            max_iters: 120,
            shot_schedule: vec![
                ShotRange {
                    start: 0,
                    end: 50,
                    shots: 256,
                },
                ShotRange {
                    start: 50,
                    end: 120,
                    shots: 512,
                },
            ],
            seed: 0,
        }
    }
}

impl SpsaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!(
                "learning rate must be > 0, got {}",
                self.learning_rate
            ));
        }
        if !(self.perturbation > 0.0 && self.perturbation.is_finite()) {
            return bad(format!(
                "perturbation must be > 0, got {}",
                self.perturbation
            ));
        }
        if !(self.decay >= 0.0 && self.decay.is_finite()) {
            return bad(format!("decay must be >= 0, got {}", self.decay));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        let mut ranges = self.shot_schedule.clone();
        ranges.sort_by_key(|r| r.start);
        let mut next = 0;
        for r in &ranges {
            if r.start != next || r.end <= r.start || r.shots == 0 {
                return bad(format!(
                    "shot schedule must partition [0, {}) into non-empty ranges with shots >= 1",
                    self.max_iters
                ));
            }
            next = r.end;
        }
        if next != self.max_iters {
            return bad(format!(
                "shot schedule covers [0, {next}), expected [0, {})",
                self.max_iters
            ));
        }
        Ok(())
    }

    pub fn shots_at(&self, iteration: usize) -> u32 {
        self.shot_schedule
            .iter()
            .find(|r| (r.start..r.end).contains(&iteration))
            .map_or(0, |r| r.shots)
    }

    /// `c_k = c0 / (k + 1)^gamma`
    pub fn perturbation_at(&self, iteration: usize) -> f64 {
        self.perturbation / ((iteration + 1) as f64).powf(self.decay)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn index(self) -> u64 {
        match self {
            Side::Plus => 0,
            Side::Minus => 1,
        }
    }
}

/// One loss evaluation requested by the optimizer.
#[derive(Debug, Clone, Copy)]
pub struct LossQuery<'a> {
    pub iteration: usize,
    pub side: Side,
    pub theta: &'a [f64],
    pub shots: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpsaStep {
    pub iteration: usize,
    /// Parameters before this iteration's update.
    pub theta: Vec<f64>,
    pub c_k: f64,
    pub delta: Vec<f64>,
    pub loss_plus: f64,
    pub loss_minus: f64,
    pub shots: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpsaTrace {
    pub steps: Vec<SpsaStep>,
    pub final_theta: Vec<f64>,
}

impl SpsaTrace {
    /// Parameters after `k` updates, `0 <= k <= K`.
    pub fn theta_at(&self, k: usize) -> &[f64] {
        if k == self.steps.len() {
            &self.final_theta
        } else {
            &self.steps[k].theta
        }
    }
}

/// `theta_0 ~ N(0, 0.01^2)` per component, from the `INIT` substream.
pub fn init_weights(seed: u64, dim: usize) -> Vec<f64> {
    let mut rng = Substream::root(seed).child(domain::INIT).rng();
    let normal = Normal::new(0.0, 0.01).expect("valid normal");
    (0..dim).map(|_| normal.sample(&mut rng)).collect()
}

pub fn spsa_run<F>(mut loss_fn: F, theta0: &[f64], config: &SpsaConfig) -> Result<SpsaTrace>
where
    F: FnMut(&LossQuery<'_>) -> Result<f64>,
{
    config.validate()?;
    let dim = theta0.len();
    let mut rng = Substream::root(config.seed).child(domain::PERTURB).rng();
    let mut theta = theta0.to_vec();
    let mut steps = Vec::with_capacity(config.max_iters);
    let mut plus = vec![0.0; dim];
    let mut minus = vec![0.0; dim];

    for k in 0..config.max_iters {
        let delta: Vec<f64> = (0..dim)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let c_k = config.perturbation_at(k);
        let shots = config.shots_at(k);
        for j in 0..dim {
            plus[j] = theta[j] + c_k * delta[j];
            minus[j] = theta[j] - c_k * delta[j];
        }
        let mut eval = |side, point: &[f64]| -> Result<f64> {
            let l = loss_fn(&LossQuery {
                iteration: k,
                side,
                theta: point,
                shots,
            })?;
            if !l.is_finite() {
                return Err(Error::Numerical(format!(
                    "loss is {l} at iteration {k} ({side:?} side, theta {point:?})"
                )));
            }
            Ok(l)
        };
        let loss_plus = eval(Side::Plus, &plus)?;
        let loss_minus = eval(Side::Minus, &minus)?;

        let step = SpsaStep {
            iteration: k,
            theta: theta.clone(),
            c_k,
            delta: delta.clone(),
            loss_plus,
            loss_minus,
            shots,
        };
        let diff = loss_plus - loss_minus;
        for j in 0..dim {
            let g = diff / (2.0 * c_k * delta[j]);
            theta[j] -= config.learning_rate * g;
        }
        steps.push(step);
    }
    Ok(SpsaTrace {
        steps,
        final_theta: theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_schedule() {
        let cfg = SpsaConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.perturbation_at(0), 0.4);
        assert!((cfg.perturbation_at(119) - 0.4 / 120f64.powf(0.02)).abs() < 1e-15);
        assert_eq!(cfg.shots_at(49), 256);
        assert_eq!(cfg.shots_at(50), 512);
        assert_eq!(cfg.shots_at(119), 512);
    }

    #[test]
    fn invalid_configs() {
        let base = SpsaConfig::default();
        let gap = SpsaConfig {
            shot_schedule: vec![ShotRange {
                start: 0,
                end: 60,
                shots: 256,
            }],
            ..base.clone()
        };
        assert!(gap.validate().is_err());
        assert!(SpsaConfig {
            learning_rate: 0.0,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(SpsaConfig {
            perturbation: -1.0,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(SpsaConfig {
            decay: -0.1,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(SpsaConfig {
            max_iters: 0,
            ..base
        }
        .validate()
        .is_err());
    }

    #[test]
    fn constant_loss_never_moves() {
        let theta0 = [0.3, -0.2];
        let trace = spsa_run(|_| Ok(1.25), &theta0, &SpsaConfig::default()).unwrap();
        assert_eq!(trace.final_theta, theta0);
        assert_eq!(trace.steps.len(), 120);
        assert!(trace.steps.iter().all(|s| s.theta == theta0));
    }

    #[test]
    fn shot_boundary_via_call_log() {
        let mut log = Vec::new();
        spsa_run(
            |q| {
                log.push((q.iteration, q.side, q.shots));
                Ok(q.theta.iter().sum())
            },
            &[0.0, 0.0],
            &SpsaConfig::default(),
        )
        .unwrap();
        assert_eq!(log.len(), 240);
        assert_eq!(log[98], (49, Side::Plus, 256));
        assert_eq!(log[99], (49, Side::Minus, 256));
        assert_eq!(log[100], (50, Side::Plus, 512));
    }

    #[test]
    fn gradient_estimate_is_unbiased_for_linear_loss() {
        // E_delta[(L+ - L-) / (2 c delta_j)] = a_j for L = a . theta.
        let a = [0.7, -1.3];
        let theta = [0.1, 0.4];
        let c = 0.37;
        let loss = |t: [f64; 2]| a[0] * t[0] + a[1] * t[1];
        let mut mean = [0.0; 2];
        for d0 in [-1.0, 1.0] {
            for d1 in [-1.0, 1.0] {
                let d = [d0, d1];
                let lp = loss([theta[0] + c * d0, theta[1] + c * d1]);
                let lm = loss([theta[0] - c * d0, theta[1] - c * d1]);
                for j in 0..2 {
                    mean[j] += (lp - lm) / (2.0 * c * d[j]) / 4.0;
                }
            }
        }
        assert!((mean[0] - a[0]).abs() < 1e-12 && (mean[1] - a[1]).abs() < 1e-12);
    }

    #[test]
    fn non_finite_loss_aborts() {
        let err = spsa_run(|_| Ok(f64::NAN), &[0.0, 0.0], &SpsaConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn quadratic_step_reflects_error_at_half_rate() {
        // With alpha = 1/2 and delta in {-1,+1}^2 one SPSA step on
        // |theta - t|^2 maps the error e to (I - delta delta^T) e, a reflection.
        let target = [1.0, -1.0];
        let theta0 = init_weights(5, 2);
        let trace = spsa_run(
            |q| Ok((q.theta[0] - target[0]).powi(2) + (q.theta[1] - target[1]).powi(2)),
            &theta0,
            &SpsaConfig::default(),
        )
        .unwrap();
        let dist = |t: &[f64]| ((t[0] - target[0]).powi(2) + (t[1] - target[1]).powi(2)).sqrt();
        let d0 = dist(&theta0);
        for k in 0..=120 {
            assert!((dist(trace.theta_at(k)) - d0).abs() < 1e-9);
        }
    }

    #[test]
    fn init_is_small_and_seeded() {
        let a = init_weights(1, 2);
        assert_eq!(a, init_weights(1, 2));
        assert_ne!(a, init_weights(2, 2));
        assert!(a.iter().all(|x| x.abs() < 0.1));
    }
}
