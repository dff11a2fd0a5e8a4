//! Seeded generator of random, terminating Acol programs.
//!
//! # Random number generator
//!
//! The generator state is a single `u64` advanced by xorshift64*:
//!
//! ```text
//! x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;
//! output = x * 0x2545F4914F6CDD1D   (wrapping)
//! ```
//!
//! The initial state is the seed passed through one SplitMix64 step
//! (`z = seed + 0x9E3779B97F4A7C15; z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9;
//! z = (z ^ z >> 27) * 0x94D049BB133111EB; z ^= z >> 31`), with a zero result
//! replaced by `0x9E3779B97F4A7C15`. A value in `0..n` is `(output as u128 * n) >> 64`.
//!
//! # Shape of generated programs
//!
//! Every block holds between `stmts_min` and `stmts_max` generated statements.
//! Top-level statements sit at depth 1; blocks nested in an `if` or `while` at
//! depth `d` sit at depth `d + 1`. Below `depth_cap` each statement is a
//! `while`, `if` or assignment with equal odds; at `depth_cap` and deeper only
//! assignments are produced.
//!
//! Each loop gets its own counter `_lc<N>`. The counter is reset right before
//! the loop, incremented as the first body statement, and the guard is
//! `_lc<N> < loop_iters`, so the body runs exactly `loop_iters` times per entry.
//! Counter names cannot collide with the expression identifiers.

use crate::frontend::{ArithOp, CmpOp, Expr, Stmt, StmtList};
use crate::object_space::Env;

/// Small deterministic PRNG; see the module docs for the exact recurrence.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Rng { state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform value in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform value in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo) as u64 + 1) as i64
    }
}

pub const IDENTS: [&str; 5] = ["v0", "v1", "v2", "v3", "v4"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub stmts_min: usize,
    pub stmts_max: usize,
    pub depth_cap: usize,
    pub loop_iters: i32,
    /// Maximum number of operator levels in a generated expression.
    pub expr_budget: u32,
    pub const_min: i32,
    pub const_max: i32,
}

impl GenConfig {
    pub fn new(seed: u64) -> GenConfig {
        GenConfig { seed, ..GenConfig::default() }
    }
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0,
            stmts_min: 20,
            stmts_max: 50,
            depth_cap: 3,
            loop_iters: 20,
            expr_budget: 3,
            const_min: -1,
            const_max: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprKind {
    Arith,
    Condition,
}

/// Generates a program from `cfg`. Panics if the config is inconsistent.
pub fn generate(cfg: &GenConfig) -> StmtList {
    assert!(cfg.stmts_min <= cfg.stmts_max, "stmts_min exceeds stmts_max");
    assert!(cfg.depth_cap >= 1, "depth_cap must be at least 1");
    assert!(cfg.const_min <= cfg.const_max, "empty constant range");
    let mut g = Generator { cfg, rng: Rng::new(cfg.seed), next_counter: 0 };
    g.block(1)
}

/// Initial environment for generated programs: every identifier bound to 0.
pub fn initial_env() -> Env {
    IDENTS.iter().map(|&v| (v, 0i64)).collect()
}

/// Draws one expression tree from `rng` with the constants of `cfg`.
pub fn expr_tree(rng: &mut Rng, cfg: &GenConfig, budget: u32, kind: ExprKind) -> Expr {
    match kind {
        ExprKind::Arith => arith_tree(rng, cfg, budget),
        ExprKind::Condition => {
            let op = CmpOp::ALL[rng.below(CmpOp::ALL.len() as u64) as usize];
            let sub = budget.saturating_sub(1);
            let lhs = arith_tree(rng, cfg, sub);
            let rhs = arith_tree(rng, cfg, sub);
            Expr::cmp(op, lhs, rhs)
        }
    }
}

fn leaf(rng: &mut Rng, cfg: &GenConfig, ident: bool) -> Expr {
    if ident {
        Expr::var(IDENTS[rng.below(IDENTS.len() as u64) as usize])
    } else {
        Expr::int(rng.range_inclusive(cfg.const_min.into(), cfg.const_max.into()))
    }
}

fn arith_tree(rng: &mut Rng, cfg: &GenConfig, budget: u32) -> Expr {
    if budget == 0 {
        let ident = rng.below(2) == 0;
        return leaf(rng, cfg, ident);
    }
    match rng.below(4) {
        0 => leaf(rng, cfg, true),
        1 => leaf(rng, cfg, false),
        k => {
            let op = if k == 2 { ArithOp::Add } else { ArithOp::Sub };
            let lhs = arith_tree(rng, cfg, budget - 1);
            let rhs = arith_tree(rng, cfg, budget - 1);
            Expr::arith(op, lhs, rhs)
        }
    }
}

struct Generator<'c> {
    cfg: &'c GenConfig,
    rng: Rng,
    next_counter: usize,
}

impl Generator<'_> {
    fn block(&mut self, depth: usize) -> StmtList {
        let span = (self.cfg.stmts_max - self.cfg.stmts_min) as u64 + 1;
        let n = self.cfg.stmts_min + self.rng.below(span) as usize;
        let mut out = Vec::with_capacity(n + 4);
        for _ in 0..n {
            let kind = if depth < self.cfg.depth_cap { self.rng.below(3) } else { 2 };
            match kind {
                0 => {
                    let counter = format!("_lc{}", self.next_counter);
                    self.next_counter += 1;
                    out.push(Stmt::assign(&*counter, Expr::int(0)));
                    let mut body = vec![Stmt::assign(
                        &*counter,
                        Expr::arith(ArithOp::Add, Expr::var(&*counter), Expr::int(1)),
                    )];
                    body.extend(self.block(depth + 1));
                    let guard = Expr::cmp(CmpOp::Lt, Expr::var(&*counter), Expr::int(self.cfg.loop_iters.into()));
                    out.push(Stmt::while_loop(guard, body));
                }
                1 => {
                    let cond = expr_tree(&mut self.rng, self.cfg, self.cfg.expr_budget, ExprKind::Condition);
                    let then_branch = self.block(depth + 1);
                    let else_branch = self.block(depth + 1);
                    out.push(Stmt::if_else(cond, then_branch, else_branch));
                }
                _ => {
                    let target = IDENTS[self.rng.below(IDENTS.len() as u64) as usize];
                    let expr = expr_tree(&mut self.rng, self.cfg, self.cfg.expr_budget, ExprKind::Arith);
                    out.push(Stmt::assign(target, expr));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast_interp::run_ast;
    use crate::frontend::BinOp;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

    #[test]
    fn rng_reference_values() {
        // SplitMix64 of seed 0 is the well-known 0xE220A8397B1DCDAF.
        let mut r = Rng::new(0);
        assert_eq!(r.state, 0xE220_A839_7B1D_CDAF);
        let mut x = 0xE220_A839_7B1D_CDAFu64;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        assert_eq!(r.next_u64(), x.wrapping_mul(0x2545_F491_4F6C_DD1D));
    }

    #[test]
    fn budget_zero_is_leaf() {
        let cfg = GenConfig::default();
        let mut rng = Rng::new(9);
        for _ in 0..100 {
            let e = expr_tree(&mut rng, &cfg, 0, ExprKind::Arith);
            assert!(matches!(e, Expr::Int(_) | Expr::Var(_)));
        }
    }

    #[test]
    fn condition_root_is_single_comparison() {
        let cfg = GenConfig::default();
        let mut rng = Rng::new(4);
        for _ in 0..200 {
            let e = expr_tree(&mut rng, &cfg, 3, ExprKind::Condition);
            let Expr::Binary { op: BinOp::Cmp(_), lhs, rhs } = &e else { panic!("root {e}") };
            for child in [lhs, rhs] {
                child.visit(&mut |n| assert!(!matches!(n, Expr::Binary { op: BinOp::Cmp(_), .. } | Expr::Not(_))));
            }
        }
    }

    /// Chi-square over the ten leaf outcomes (five identifiers, five
    /// constants), each with probability 1/10 under the generator's law.
    #[test]
    fn leaf_frequencies_are_uniform() {
        let cfg = GenConfig::default();
        let mut rng = Rng::new(77);
        let mut counts = [0u64; 10];
        for _ in 0..1000 {
            expr_tree(&mut rng, &cfg, 3, ExprKind::Arith).visit(&mut |n| match n {
                Expr::Var(v) => counts[IDENTS.iter().position(|i| i == v).unwrap()] += 1,
                Expr::Int(c) => counts[5 + (c + 1) as usize] += 1,
                _ => {}
            });
        }
        let total: u64 = counts.iter().sum();
        let expected = total as f64 / 10.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 9 degrees of freedom: mean 9, sd sqrt(18).
        assert!(chi2 < 9.0 + 5.0 * 18f64.sqrt(), "chi2 = {chi2}, counts {counts:?}");
        let idents: u64 = counts[..5].iter().sum();
        let p_hat = idents as f64 / total as f64;
        let sigma = (0.25 / total as f64).sqrt();
        assert!((p_hat - 0.5).abs() < 5.0 * sigma, "ident share {p_hat}");
    }

    fn count_loop_iterations(program: &[Stmt]) -> (usize, Env) {
        // Appends a tally of every counter into a fresh variable after each loop.
        fn instrument(block: &[Stmt], tallies: &mut usize) -> StmtList {
            let mut out = Vec::new();
            for s in block {
                match s {
                    Stmt::While { cond, body } => {
                        let Expr::Binary { lhs, .. } = cond else { unreachable!() };
                        let Expr::Var(counter) = &**lhs else { unreachable!() };
                        out.push(Stmt::while_loop(cond.clone(), instrument(body, tallies)));
                        let t = format!("_tally{}", *tallies);
                        *tallies += 1;
                        out.push(Stmt::assign(&*t, Expr::var(counter.as_str())));
                    }
                    Stmt::If { cond, then_branch, else_branch } => out.push(Stmt::if_else(
                        cond.clone(),
                        instrument(then_branch, tallies),
                        instrument(else_branch, tallies),
                    )),
                    other => out.push(other.clone()),
                }
            }
            out
        }
        let mut tallies = 0;
        let instrumented = instrument(program, &mut tallies);
        (tallies, run_ast(&instrumented, initial_env()).unwrap())
    }

    #[test]
    fn loops_run_exactly_loop_iters_times() {
        let cfg = GenConfig { depth_cap: 2, ..GenConfig::new(5) };
        let program = generate(&cfg);
        let (tallies, env) = count_loop_iterations(&program);
        assert!(tallies > 0);
        let mut seen = 0;
        for (name, v) in env.iter() {
            if name.starts_with("_tally") {
                assert_eq!(v.to_i64(), Some(20), "{name}");
                seen += 1;
            }
        }
        // Tallies inside untaken branches stay unbound.
        assert!(seen > 0);
    }

    #[test]
    fn top_level_block_length_in_range() {
        for seed in 0..50 {
            let p = generate(&GenConfig::new(seed));
            let generated = p.iter().filter(|s| !matches!(s, Stmt::Assign { target, .. } if target.starts_with("_lc"))).count();
            assert!((20..=50).contains(&generated), "seed {seed}: {generated}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn deterministic(seed in any::<u64>()) {
            let cfg = GenConfig { depth_cap: 2, ..GenConfig::new(seed) };
            prop_assert_eq!(generate(&cfg), generate(&cfg));
        }

        #[test]
        fn only_add_sub_and_small_literals(seed in any::<u64>()) {
            for s in generate(&GenConfig::new(seed)) {
                s.visit(&mut |st| st.expr().visit(&mut |e| match e {
                    Expr::Binary { op: BinOp::Arith(op), .. } => assert!(matches!(op, ArithOp::Add | ArithOp::Sub)),
                    Expr::Int(c) => assert!((-1..=3).contains(c) || *c == 20 || *c == 0 || *c == 1),
                    Expr::Not(_) => panic!("unexpected negation"),
                    _ => {}
                }));
            }
        }

        #[test]
        fn generated_user_literals_in_range(seed in any::<u64>()) {
            let cfg = GenConfig::new(seed);
            let mut rng = Rng::new(seed);
            for _ in 0..20 {
                expr_tree(&mut rng, &cfg, 3, ExprKind::Condition).visit(&mut |e| {
                    if let Expr::Int(c) = e { assert!((-1..=3).contains(c)); }
                });
            }
        }

        #[test]
        fn nesting_respects_depth_cap(seed in any::<u64>(), cap in 1usize..4) {
            fn depth(block: &[Stmt]) -> usize {
                block.iter().map(|s| match s {
                    Stmt::Assign { .. } => 1,
                    Stmt::If { then_branch, else_branch, .. } => 1 + depth(then_branch).max(depth(else_branch)),
                    Stmt::While { body, .. } => 1 + depth(body),
                }).max().unwrap_or(0)
            }
            let cfg = GenConfig { depth_cap: cap, stmts_min: 3, stmts_max: 6, ..GenConfig::new(seed) };
            prop_assert!(depth(&generate(&cfg)) <= cap);
        }
    }
}
