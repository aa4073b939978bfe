//! Seeded generators for test families.
//!
//! All generators draw from [`GENERATOR_STREAM`], so an instance seed never
//! collides with the walk or rounding randomness of the same seed.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ConstraintSet, SetSystem};
use crate::rng::{stream, StreamRng, GENERATOR_STREAM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Each element joins each set independently with probability `p`.
    Bernoulli,
    /// Each set is a uniform `k`-subset.
    KUniform,
    /// Each element joins exactly `min(t, m)` distinct uniform sets.
    LowDegree,
    /// The `n` singletons.
    Singleton,
    /// `m` unit-normalized Gaussian rows.
    MatrixGaussian,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bernoulli" => Ok(Kind::Bernoulli),
            "k-uniform" => Ok(Kind::KUniform),
            "low-degree" => Ok(Kind::LowDegree),
            "singleton" => Ok(Kind::Singleton),
            "matrix-gaussian" => Ok(Kind::MatrixGaussian),
            other => Err(Error::Validation(format!("unknown generator kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: Kind,
    pub n: usize,
    pub m: usize,
    /// `p` for bernoulli, `k` for k-uniform, `t` for low-degree; ignored otherwise.
    #[serde(default)]
    pub param: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Sets(SetSystem),
    Matrix(ConstraintSet),
}

impl Instance {
    pub fn into_sets(self) -> Result<SetSystem> {
        match self {
            Instance::Sets(s) => Ok(s),
            Instance::Matrix(_) => Err(Error::Validation("expected a set system".into())),
        }
    }
}

impl GeneratorSpec {
    pub fn new(kind: Kind, n: usize, m: usize, param: f64, seed: u64) -> Self {
        Self {
            kind,
            n,
            m,
            param,
            seed,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Validation("n must be positive".into()));
        }
        let p = self.param;
        match self.kind {
            Kind::Bernoulli if !(0.0..=1.0).contains(&p) => {
                Err(Error::Validation(format!("p = {p} must lie in [0, 1]")))
            }
            Kind::KUniform if !(p.fract() == 0.0 && p >= 1.0 && p <= self.n as f64) => {
                Err(Error::Validation(format!("k = {p} must be an integer in [1, n]")))
            }
            Kind::LowDegree if !(p.fract() == 0.0 && p >= 1.0) => {
                Err(Error::Validation(format!("t = {p} must be a positive integer")))
            }
            _ => Ok(()),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = stream(spec.seed, GENERATOR_STREAM);
    let (n, m) = (spec.n, spec.m);
    let sets = match spec.kind {
        Kind::Bernoulli => bernoulli_sets(&mut rng, n, m, spec.param),
        Kind::KUniform => (0..m)
            .map(|_| {
                let mut s = sample(&mut rng, n, spec.param as usize).into_vec();
                s.sort_unstable();
                s
            })
            .collect(),
        Kind::LowDegree => {
            let t = (spec.param as usize).min(m);
            let mut sets = vec![Vec::new(); m];
            for i in 0..n {
                for j in sample(&mut rng, m, t) {
                    sets[j].push(i);
                }
            }
            sets
        }
        Kind::Singleton => (0..n).map(|i| vec![i]).collect(),
        Kind::MatrixGaussian => {
            let rows = (0..m)
                .map(|_| {
                    let row: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                    let len = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                    row.into_iter().map(|v| v / len).collect()
                })
                .collect();
            return Ok(Instance::Matrix(ConstraintSet::new(n, rows)?));
        }
    };
    Ok(Instance::Sets(SetSystem::new(n, sets)?))
}

fn bernoulli_sets(rng: &mut StreamRng, n: usize, m: usize, p: f64) -> Vec<Vec<usize>> {
    (0..m)
        .map(|_| (0..n).filter(|_| rng.random_bool(p)).collect())
        .collect()
}

pub fn bernoulli(n: usize, m: usize, p: f64, seed: u64) -> Result<SetSystem> {
    generate(&GeneratorSpec::new(Kind::Bernoulli, n, m, p, seed))?.into_sets()
}

pub fn k_uniform(n: usize, m: usize, k: usize, seed: u64) -> Result<SetSystem> {
    generate(&GeneratorSpec::new(Kind::KUniform, n, m, k as f64, seed))?.into_sets()
}

pub fn low_degree(n: usize, m: usize, t: usize, seed: u64) -> Result<SetSystem> {
    generate(&GeneratorSpec::new(Kind::LowDegree, n, m, t as f64, seed))?.into_sets()
}

pub fn gaussian_matrix(n: usize, m: usize, seed: u64) -> Result<ConstraintSet> {
    match generate(&GeneratorSpec::new(Kind::MatrixGaussian, n, m, 0.0, seed))? {
        Instance::Matrix(c) => Ok(c),
        Instance::Sets(_) => unreachable!("matrix generator returns rows"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons() {
        let s = generate(&GeneratorSpec::new(Kind::Singleton, 5, 0, 0.0, 0))
            .unwrap()
            .into_sets()
            .unwrap();
        assert_eq!(s.sets(), &[vec![0], vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn low_degree_frequency_is_exact() {
        let s = low_degree(100, 20, 3, 9).unwrap();
        assert!(s.frequencies().iter().all(|&f| f == 3));
        let capped = low_degree(10, 2, 5, 9).unwrap();
        assert!(capped.frequencies().iter().all(|&f| f == 2));
    }

    #[test]
    fn bernoulli_mean_size_in_band() {
        let s = bernoulli(64, 64, 0.5, 1).unwrap();
        let mean = s.sets().iter().map(Vec::len).sum::<usize>() as f64 / 64.0;
        assert!((24.0..=40.0).contains(&mean), "mean = {mean}");
    }

    #[test]
    fn k_uniform_sizes() {
        let s = k_uniform(30, 12, 7, 4).unwrap();
        assert!(s.sets().iter().all(|set| set.len() == 7));
    }

    #[test]
    fn gaussian_rows_are_unit() {
        let c = gaussian_matrix(16, 8, 2).unwrap();
        assert!(c.norms().iter().all(|r| (r - 1.0).abs() < 1e-12));
    }

    #[test]
    fn deterministic_per_seed() {
        for kind in [Kind::Bernoulli, Kind::KUniform, Kind::LowDegree, Kind::MatrixGaussian] {
            let spec = GeneratorSpec::new(kind, 20, 10, if kind == Kind::Bernoulli { 0.3 } else { 3.0 }, 77);
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
            let other = GeneratorSpec { seed: 78, ..spec.clone() };
            assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(bernoulli(10, 5, 1.5, 0).is_err());
        assert!(k_uniform(10, 5, 11, 0).is_err());
        assert!(k_uniform(10, 5, 0, 0).is_err());
        assert!(low_degree(10, 5, 0, 0).is_err());
    }

    #[test]
    fn spec_from_json() {
        let spec = GeneratorSpec::from_json(
            r#"{"kind":"low-degree","n":100,"m":20,"param":3,"seed":5}"#,
        )
        .unwrap();
        assert_eq!(spec.kind, Kind::LowDegree);
        assert_eq!(spec.param, 3.0);
        assert!(GeneratorSpec::from_json(r#"{"kind":"nope","n":1,"m":1}"#).is_err());
    }
}
