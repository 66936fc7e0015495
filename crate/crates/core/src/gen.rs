//! Seeded instance generation.
//!
//! Random families draw from SplitMix64 seeded directly with the 64-bit seed.
//! A draw `x` is turned into a uniform float as `(x >> 11) * 2^-53`.
//! `gnp` uses one draw per pair `u < v` in lexicographic order and keeps the
//! edge when the float is below `p`. `tree` attaches vertex `v = 1..n-1` to
//! `floor(float * v)`, one draw per vertex.

use std::fmt;
use std::str::FromStr;

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gnp,
    Path,
    Cycle,
    Star,
    Tree,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gnp => "gnp",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Star => "star",
            Family::Tree => "tree",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gnp" => Ok(Family::Gnp),
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "star" => Ok(Family::Star),
            "tree" => Ok(Family::Tree),
            _ => Err(GenError::InvalidSpec(format!("unknown family '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    /// Only read by `gnp`.
    pub p: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn gnp(n: usize, p: f64, seed: u64) -> Self {
        GenSpec {
            family: Family::Gnp,
            n,
            p,
            seed,
        }
    }

    pub fn fixed(family: Family, n: usize) -> Self {
        GenSpec {
            family,
            n,
            p: 0.0,
            seed: 0,
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "--family {} --n {}", self.family, self.n)?;
        if self.family == Family::Gnp {
            write!(f, " --p {}", self.p)?;
        }
        if matches!(self.family, Family::Gnp | Family::Tree) {
            write!(f, " --seed {}", self.seed)?;
        }
        Ok(())
    }
}

fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    let n = spec.n;
    if n == 0 {
        return Err(GenError::InvalidSpec("n must be at least 1".into()));
    }
    let mut rng = SplitMix64::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    match spec.family {
        Family::Gnp => {
            if !(0.0..=1.0).contains(&spec.p) {
                return Err(GenError::InvalidSpec(format!("p = {} is not in [0, 1]", spec.p)));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if unit(rng.next_u64()) < spec.p {
                        edges.push((u, v));
                    }
                }
            }
        }
        Family::Path => edges.extend((1..n).map(|i| (i - 1, i))),
        Family::Cycle => {
            if n < 3 {
                return Err(GenError::InvalidSpec("a cycle needs n >= 3".into()));
            }
            edges.extend((1..n).map(|i| (i - 1, i)));
            edges.push((0, n - 1));
        }
        Family::Star => edges.extend((1..n).map(|i| (0, i))),
        Family::Tree => {
            for v in 1..n {
                let parent = ((unit(rng.next_u64()) * v as f64) as usize).min(v - 1);
                edges.push((parent, v));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("generated edges are simple"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn fixed_families() {
        assert_eq!(generate(&GenSpec::fixed(Family::Path, 4)).unwrap(), named::path(4));
        assert_eq!(
            generate(&GenSpec::fixed(Family::Cycle, 4)).unwrap().to_pace(),
            "p gr 4 4\n1 2\n2 3\n3 4\n1 4\n"
        );
        assert_eq!(generate(&GenSpec::fixed(Family::Star, 4)).unwrap(), named::star(3));
        assert_eq!(generate(&GenSpec::fixed(Family::Path, 1)).unwrap().m(), 0);
    }

    #[test]
    fn seeded_families_are_deterministic() {
        let spec = GenSpec::gnp(8, 0.3, 42);
        let a = generate(&spec).unwrap().to_pace();
        assert_eq!(a, generate(&spec).unwrap().to_pace());
        assert_ne!(a, generate(&GenSpec::gnp(8, 0.3, 43)).unwrap().to_pace());
        assert_eq!(generate(&GenSpec::gnp(6, 1.0, 7)).unwrap().m(), 15);
        assert_eq!(generate(&GenSpec::gnp(6, 0.0, 7)).unwrap().m(), 0);

        let tree = GenSpec { family: Family::Tree, n: 9, p: 0.0, seed: 5 };
        let t = generate(&tree).unwrap();
        assert_eq!(t.m(), 8);
        assert_eq!(t, generate(&tree).unwrap());
    }

    #[test]
    fn splitmix_stream() {
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&GenSpec::gnp(0, 0.5, 1)).is_err());
        assert!(generate(&GenSpec::gnp(5, 1.5, 1)).is_err());
        assert!(generate(&GenSpec::gnp(5, f64::NAN, 1)).is_err());
        assert!(generate(&GenSpec::fixed(Family::Cycle, 2)).is_err());
        assert!("grid".parse::<Family>().is_err());
        assert_eq!("tree".parse::<Family>().unwrap(), Family::Tree);
    }

    #[test]
    fn reproducer_line() {
        assert_eq!(GenSpec::gnp(8, 0.3, 42).to_string(), "--family gnp --n 8 --p 0.3 --seed 42");
        assert_eq!(GenSpec::fixed(Family::Path, 4).to_string(), "--family path --n 4");
    }
}
