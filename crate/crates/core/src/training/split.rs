use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::Phase;
use crate::error::{Error, Result};
use crate::seeding::{domain, Substream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub z2: usize,
    pub z3: usize,
}

impl ClassCounts {
    pub fn new(z2: usize, z3: usize) -> Self {
        Self { z2, z3 }
    }

    pub fn get(&self, phase: Phase) -> usize {
        match phase {
            Phase::Z2 => self.z2,
            Phase::Z3 => self.z3,
        }
    }

    pub fn total(&self) -> usize {
        self.z2 + self.z3
    }
}

/// Per-class composition of each split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: ClassCounts,
    pub val: ClassCounts,
    pub test: ClassCounts,
    pub seed: u64,
}

impl SplitSpec {
    /// 14/3/3 over 10+10 samples: train 7+7, val 1+2, test 2+1.
    ///
    /// The validation composition is whatever train and test leave over.
    pub fn baseline(seed: u64) -> Self {
        Self {
            train: ClassCounts::new(7, 7),
            val: ClassCounts::new(1, 2),
            test: ClassCounts::new(2, 1),
            seed,
        }
    }
}

/// Indices into the input, ascending within each split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn stratified_split(labels: &[Phase], spec: &SplitSpec) -> Result<Split> {
    for (name, c) in [
        ("train", spec.train),
        ("val", spec.val),
        ("test", spec.test),
    ] {
        if c.z2 == 0 || c.z3 == 0 {
            return Err(Error::Config(format!(
                "{name} split needs at least one sample of each class"
            )));
        }
    }
    let mut split = Split {
        train: Vec::new(),
        val: Vec::new(),
        test: Vec::new(),
    };
    for (ci, phase) in Phase::ALL.into_iter().enumerate() {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == phase)
            .map(|(i, _)| i)
            .collect();
        let (tr, va, te) = (
            spec.train.get(phase),
            spec.val.get(phase),
            spec.test.get(phase),
        );
        if tr + va + te != members.len() {
            return Err(Error::Config(format!(
                "split sizes for {phase} sum to {}, dataset has {}",
                tr + va + te,
                members.len()
            )));
        }
        let mut rng = Substream::root(spec.seed)
            .path(&[domain::SPLIT, ci as u64])
            .rng();
        members.shuffle(&mut rng);
        split.train.extend_from_slice(&members[..tr]);
        split.val.extend_from_slice(&members[tr..tr + va]);
        split.test.extend_from_slice(&members[tr + va..]);
    }
    split.train.sort_unstable();
    split.val.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twenty_labels() -> Vec<Phase> {
        [vec![Phase::Z2; 10], vec![Phase::Z3; 10]].concat()
    }

    #[test]
    fn default_sizes_and_composition() {
        let labels = twenty_labels();
        let s = stratified_split(&labels, &SplitSpec::baseline(1)).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (14, 3, 3));
        let count = |idx: &[usize], p| idx.iter().filter(|&&i| labels[i] == p).count();
        assert_eq!(count(&s.test, Phase::Z2), 2);
        assert_eq!(count(&s.test, Phase::Z3), 1);
        assert_eq!(count(&s.val, Phase::Z2), 1);
        assert_eq!(count(&s.train, Phase::Z3), 7);
        let mut all = [s.train.clone(), s.val.clone(), s.test.clone()].concat();
        all.sort_unstable();
        assert_eq!(all, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let labels = twenty_labels();
        let a = stratified_split(&labels, &SplitSpec::baseline(3)).unwrap();
        assert_eq!(
            a,
            stratified_split(&labels, &SplitSpec::baseline(3)).unwrap()
        );
        let differs =
            (4..20).any(|seed| stratified_split(&labels, &SplitSpec::baseline(seed)).unwrap() != a);
        assert!(differs);
    }

    #[test]
    fn infeasible_sizes() {
        let labels = [vec![Phase::Z2; 9], vec![Phase::Z3; 10]].concat();
        assert!(stratified_split(&labels, &SplitSpec::baseline(0)).is_err());
        let mut spec = SplitSpec::baseline(0);
        spec.val = ClassCounts::new(0, 3);
        spec.train = ClassCounts::new(8, 6);
        assert!(stratified_split(&twenty_labels(), &spec).is_err());
    }
}
