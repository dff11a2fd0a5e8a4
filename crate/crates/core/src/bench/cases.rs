use std::fmt;
use std::str::FromStr;

use crate::frontend::{parse_program, StmtList, FIB_MOD_SOURCE, FIB_SOURCE, PRIME_SOURCE};
use crate::object_space::Env;
use crate::progen::{generate, initial_env, GenConfig};

pub const PRIME_V: i64 = 34_265_341;
pub const FIB_N: i64 = 400_000;
pub const FIB_MOD_N: i64 = 10_000_000;
pub const DEFAULT_SEEDS: [u64; 3] = [1, 2, 3];
/// Environment variable holding a comma-separated list of generator seeds.
pub const SEED_ENV_VAR: &str = "ACOL_SEED_DEFAULTS";

/// Multiplier applied to each case's size parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale(pub f64);

impl Scale {
    pub const TINY: Scale = Scale(1e-4);
    pub const SMALL: Scale = Scale(0.01);
    pub const FULL: Scale = Scale(1.0);

    /// Scales `full`, never going below `min`.
    pub fn apply(self, full: i64, min: i64) -> i64 {
        ((full as f64 * self.0).round() as i64).max(min)
    }
}

impl Default for Scale {
    fn default() -> Scale {
        Scale::FULL
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scale `{0}` (expected tiny, small, full or a positive number)")]
pub struct BadScale(pub String);

impl FromStr for Scale {
    type Err = BadScale;

    fn from_str(s: &str) -> Result<Scale, BadScale> {
        match s {
            "tiny" => Ok(Scale::TINY),
            "small" => Ok(Scale::SMALL),
            "full" => Ok(Scale::FULL),
            _ => match s.parse::<f64>() {
                Ok(f) if f.is_finite() && f > 0.0 => Ok(Scale(f)),
                _ => Err(BadScale(s.to_string())),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchCase {
    pub name: String,
    pub program: StmtList,
    pub env: Env,
    /// Name and value of the parameter that controls the amount of work.
    pub size: (&'static str, i64),
}

impl BenchCase {
    pub fn prime(v: i64) -> BenchCase {
        BenchCase {
            name: "prime".into(),
            program: parse_program(PRIME_SOURCE).expect("bundled program parses"),
            env: [("is_prime", 1), ("start", 2), ("V", v)].into_iter().collect(),
            size: ("V", v),
        }
    }

    pub fn fib(n: i64) -> BenchCase {
        BenchCase {
            name: "fib".into(),
            program: parse_program(FIB_SOURCE).expect("bundled program parses"),
            env: [("a", 0), ("b", 1), ("n", n)].into_iter().collect(),
            size: ("n", n),
        }
    }

    pub fn fib_mod(n: i64) -> BenchCase {
        BenchCase {
            name: "fib_mod".into(),
            program: parse_program(FIB_MOD_SOURCE).expect("bundled program parses"),
            env: [("a", 0), ("b", 1), ("n", n)].into_iter().collect(),
            size: ("n", n),
        }
    }

    /// The `index`-th generated benchmark, built from `seed`.
    pub fn generated(index: usize, seed: u64, loop_iters: i32) -> BenchCase {
        let cfg = GenConfig { loop_iters, ..GenConfig::new(seed) };
        BenchCase {
            name: format!("generated{index}"),
            program: generate(&cfg),
            env: initial_env(),
            size: ("loop_iters", loop_iters.into()),
        }
    }
}

/// The six shipped benchmarks: prime, fib, fib_mod and one generated program per seed.
pub fn builtin_cases(scale: Scale, seeds: &[u64]) -> Vec<BenchCase> {
    let mut cases = vec![
        BenchCase::prime(scale.apply(PRIME_V, 2)),
        BenchCase::fib(scale.apply(FIB_N, 1)),
        BenchCase::fib_mod(scale.apply(FIB_MOD_N, 1)),
    ];
    let iters = scale.apply(GenConfig::default().loop_iters.into(), 1) as i32;
    cases.extend(seeds.iter().enumerate().map(|(i, &seed)| BenchCase::generated(i + 1, seed, iters)));
    cases
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{SEED_ENV_VAR}: `{0}` is not a comma-separated list of seeds")]
pub struct BadSeeds(pub String);

/// Parses a comma-separated seed list such as `1,2,3`.
pub fn parse_seed_list(text: &str) -> Result<Vec<u64>, BadSeeds> {
    text.split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| BadSeeds(text.to_string()))
}

/// Seeds for the generated benchmarks, honoring `ACOL_SEED_DEFAULTS` when set.
pub fn default_seeds() -> Result<Vec<u64>, BadSeeds> {
    match std::env::var(SEED_ENV_VAR) {
        Ok(text) if !text.trim().is_empty() => parse_seed_list(&text),
        _ => Ok(DEFAULT_SEEDS.to_vec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object_space::Int;

    #[test]
    fn full_scale_environments() {
        let cases = builtin_cases(Scale::FULL, &DEFAULT_SEEDS);
        let names: Vec<_> = cases.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["prime", "fib", "fib_mod", "generated1", "generated2", "generated3"]);
        let expect = |c: &BenchCase, k: &str, v: i64| assert_eq!(c.env.get(k), Some(&Int::from(v)), "{} {k}", c.name);
        expect(&cases[0], "is_prime", 1);
        expect(&cases[0], "start", 2);
        expect(&cases[0], "V", 34_265_341);
        expect(&cases[1], "a", 0);
        expect(&cases[1], "b", 1);
        expect(&cases[1], "n", 400_000);
        expect(&cases[2], "n", 10_000_000);
        assert_eq!(cases[3].size, ("loop_iters", 20));
    }

    #[test]
    fn scale_parsing() {
        assert_eq!("tiny".parse::<Scale>().unwrap(), Scale::TINY);
        assert_eq!("0.5".parse::<Scale>().unwrap(), Scale(0.5));
        assert!("-1".parse::<Scale>().is_err());
        assert!("huge".parse::<Scale>().is_err());
        assert_eq!(Scale::TINY.apply(FIB_N, 1), 40);
        assert_eq!(Scale(1e-9).apply(PRIME_V, 2), 2);
    }

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seed_list("4, 5,6").unwrap(), vec![4, 5, 6]);
        assert!(parse_seed_list("4,x").is_err());
    }
}
