//! Synthetic Z2/Z3 datasets.
//!
//! Each sample is an idealized ordered product state (period-2 `rgrg...` or
//! period-3 `rggrgg...`) in which every site is independently flipped
//! g <-> r with probability `flip_noise` before being measured in a uniformly
//! random Pauli basis. Each (sample, shot, qubit) cell draws from its own
//! substream `[GENERATE, sample, shot, qubit]` of the config seed, in the
//! order: flip, basis, outcome.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Dataset, OutcomeSymbol, PauliBasis, Phase, Sample, ShotGrid};
use crate::error::{Error, Result};
use crate::seeding::{domain, Substream};

/// Local state of one site in the ideal ordered pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteState {
    Ground,
    Rydberg,
}

impl SiteState {
    pub fn flipped(self) -> Self {
        match self {
            SiteState::Ground => SiteState::Rydberg,
            SiteState::Rydberg => SiteState::Ground,
        }
    }

    pub fn vector(self) -> [Complex64; 2] {
        match self {
            SiteState::Ground => OutcomeSymbol::G.state(),
            SiteState::Rydberg => OutcomeSymbol::R.state(),
        }
    }
}

/// Z2 repeats `r g`, Z3 repeats `r g g`, truncated to `n_qubits` sites.
pub fn ideal_pattern(phase: Phase, n_qubits: usize) -> Result<Vec<SiteState>> {
    if n_qubits == 0 {
        return Err(Error::InvalidInput(
            "pattern needs at least one site".into(),
        ));
    }
    let period = match phase {
        Phase::Z2 => 2,
        Phase::Z3 => 3,
    };
    Ok((0..n_qubits)
        .map(|i| {
            if i % period == 0 {
                SiteState::Rydberg
            } else {
                SiteState::Ground
            }
        })
        .collect())
}

/// Projective measurement of a single-qubit state in a Pauli basis.
pub fn sample_pauli_measurement<R: Rng + ?Sized>(
    local_state: [Complex64; 2],
    basis: PauliBasis,
    rng: &mut R,
) -> Result<OutcomeSymbol> {
    let norm = local_state[0].norm_sqr() + local_state[1].norm_sqr();
    if !norm.is_finite() || (norm.sqrt() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "local state is not normalized (norm {})",
            norm.sqrt()
        )));
    }
    let [up, down] = basis.eigen_symbols();
    let e = up.state();
    let overlap = e[0].conj() * local_state[0] + e[1].conj() * local_state[1];
    let p_up = overlap.norm_sqr();
    Ok(if rng.random::<f64>() < p_up { up } else { down })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    pub n_samples_per_class: usize,
    pub n_qubits: usize,
    pub n_shots: usize,
    pub flip_noise: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    /// 10 samples per class, 51 qubits, 500 shots, 5% flip noise.
    fn default() -> Self {
        Self {
            n_samples_per_class: 10,
            n_qubits: 51,
            n_shots: 500,
            flip_noise: 0.05,
            seed: 20,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples_per_class == 0 || self.n_qubits == 0 || self.n_shots == 0 {
            return Err(Error::Config("counts must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.flip_noise) {
            return Err(Error::Config(format!(
                "flip_noise must lie in [0, 1], got {}",
                self.flip_noise
            )));
        }
        Ok(())
    }

    /// Parse a flat `key = value` file. Missing keys take their defaults.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Partial {
            n_samples_per_class: Option<usize>,
            n_qubits: Option<usize>,
            n_shots: Option<usize>,
            flip_noise: Option<f64>,
            seed: Option<u64>,
        }
        let p: Partial = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let d = Self::default();
        let cfg = Self {
            n_samples_per_class: p.n_samples_per_class.unwrap_or(d.n_samples_per_class),
            n_qubits: p.n_qubits.unwrap_or(d.n_qubits),
            n_shots: p.n_shots.unwrap_or(d.n_shots),
            flip_noise: p.flip_noise.unwrap_or(d.flip_noise),
            seed: p.seed.unwrap_or(d.seed),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// How the generator picks each cell's measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisChoice {
    #[default]
    UniformRandom,
    /// Test hook: every cell uses the same basis.
    Fixed(PauliBasis),
}

pub fn generate_synthetic(config: &GenConfig) -> Result<Dataset> {
    generate_synthetic_with(config, BasisChoice::UniformRandom)
}

pub fn generate_synthetic_with(config: &GenConfig, bases: BasisChoice) -> Result<Dataset> {
    config.validate()?;
    let per_class = config.n_samples_per_class;
    let root = Substream::root(config.seed).child(domain::GENERATE);

    let jobs: Vec<(usize, Phase, usize)> = Phase::ALL
        .iter()
        .enumerate()
        .flat_map(|(c, &phase)| (0..per_class).map(move |j| (c * per_class + j, phase, j)))
        .collect();

    let samples = jobs
        .into_par_iter()
        .map(|(index, phase, j)| {
            let pattern = ideal_pattern(phase, config.n_qubits)?;
            let stream = root.child(index as u64);
            let mut cells = Vec::with_capacity(config.n_shots * config.n_qubits);
            for shot in 0..config.n_shots {
                let shot_stream = stream.child(shot as u64);
                for (q, &site) in pattern.iter().enumerate() {
                    let mut rng = shot_stream.child(q as u64).rng();
                    let site = if rng.random::<f64>() < config.flip_noise {
                        site.flipped()
                    } else {
                        site
                    };
                    let basis = match bases {
                        BasisChoice::UniformRandom => PauliBasis::ALL[rng.random_range(0..3)],
                        BasisChoice::Fixed(b) => b,
                    };
                    cells.push(sample_pauli_measurement(site.vector(), basis, &mut rng)?);
                }
            }
            let id = format!("{}-{:03}", phase.to_string().to_lowercase(), j);
            Ok(Sample::new(
                id,
                phase,
                ShotGrid::from_cells(config.n_shots, config.n_qubits, cells),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use OutcomeSymbol::*;
    use SiteState::{Ground as Gs, Rydberg as Rs};

    #[test]
    fn patterns() {
        assert_eq!(
            ideal_pattern(Phase::Z2, 6).unwrap(),
            [Rs, Gs, Rs, Gs, Rs, Gs]
        );
        assert_eq!(
            ideal_pattern(Phase::Z3, 6).unwrap(),
            [Rs, Gs, Gs, Rs, Gs, Gs]
        );
        assert_eq!(ideal_pattern(Phase::Z2, 1).unwrap(), [Rs]);
        assert!(ideal_pattern(Phase::Z3, 0).is_err());
    }

    fn frequencies(state: [Complex64; 2], basis: PauliBasis, n: usize) -> [usize; 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let [up, _] = basis.eigen_symbols();
        let mut counts = [0; 2];
        for _ in 0..n {
            let s = sample_pauli_measurement(state, basis, &mut rng).unwrap();
            assert_eq!(s.basis(), basis);
            counts[usize::from(s != up)] += 1;
        }
        counts
    }

    #[test]
    fn eigenstate_in_own_basis_is_deterministic() {
        assert_eq!(frequencies(G.state(), PauliBasis::Z, 1000), [1000, 0]);
        assert_eq!(frequencies(MinusI.state(), PauliBasis::Y, 1000), [0, 1000]);
    }

    #[test]
    fn conjugate_bases_are_fair() {
        // |<+|0>|^2 = |<+i|+>|^2 = 1/2; 5 sigma for n = 20000 is ~354.
        let n = 20000;
        for (state, basis) in [(G.state(), PauliBasis::X), (Plus.state(), PauliBasis::Y)] {
            let [a, _] = frequencies(state, basis, n);
            assert!((a as f64 - n as f64 / 2.0).abs() < 354.0, "{a}");
        }
    }

    #[test]
    fn unnormalized_state_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bad = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(sample_pauli_measurement(bad, PauliBasis::Z, &mut rng).is_err());
    }

    #[test]
    fn shape_contract() {
        let cfg = GenConfig {
            n_samples_per_class: 1,
            n_qubits: 4,
            n_shots: 2,
            flip_noise: 0.0,
            seed: 7,
        };
        let ds = generate_synthetic(&cfg).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!((ds.n_shots(), ds.n_qubits()), (2, 4));
        assert_eq!(ds.labels(), [Phase::Z2, Phase::Z3]);
    }

    #[test]
    fn noiseless_z_basis_reads_the_pattern() {
        let cfg = GenConfig {
            n_samples_per_class: 2,
            n_qubits: 4,
            n_shots: 25,
            flip_noise: 0.0,
            seed: 3,
        };
        let ds = generate_synthetic_with(&cfg, BasisChoice::Fixed(PauliBasis::Z)).unwrap();
        for s in ds.samples().iter().filter(|s| s.label == Phase::Z2) {
            for row in s.shots.rows() {
                assert_eq!(row, [R, G, R, G]);
            }
        }
        for s in ds.samples().iter().filter(|s| s.label == Phase::Z3) {
            for row in s.shots.rows() {
                assert_eq!(row, [R, G, G, R]);
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = GenConfig {
            n_samples_per_class: 2,
            n_qubits: 5,
            n_shots: 10,
            flip_noise: 0.1,
            seed: 11,
        };
        assert_eq!(
            generate_synthetic(&cfg).unwrap(),
            generate_synthetic(&cfg).unwrap()
        );
        let other = GenConfig {
            seed: 12,
            ..cfg.clone()
        };
        assert_ne!(
            generate_synthetic(&cfg).unwrap(),
            generate_synthetic(&other).unwrap()
        );
    }

    #[test]
    fn z_basis_fraction_near_one_third() {
        let cfg = GenConfig {
            n_samples_per_class: 1,
            n_qubits: 8,
            n_shots: 600,
            flip_noise: 0.05,
            seed: 5,
        };
        let ds = generate_synthetic(&cfg).unwrap();
        let t = cfg.n_shots as f64;
        let se = (t * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for s in ds.samples() {
            for q in 0..cfg.n_qubits {
                let z = s
                    .shots
                    .column(q)
                    .filter(|o| o.basis() == PauliBasis::Z)
                    .count();
                assert!((z as f64 - t / 3.0).abs() <= 5.0 * se, "site {q}: {z}");
            }
        }
    }

    #[test]
    fn config_from_kv() {
        let cfg = GenConfig::from_kv_str("n_qubits = 6\nflip_noise = 0.2\nseed = 9\n").unwrap();
        assert_eq!(cfg.n_qubits, 6);
        assert_eq!(cfg.n_shots, 500);
        assert_eq!(cfg.seed, 9);
        assert!(GenConfig::from_kv_str("flip_noise = 1.5").is_err());
        assert!(GenConfig::from_kv_str("n_shots = 0").is_err());
        assert!(GenConfig::from_kv_str("bogus = 1").is_err());
    }
}
