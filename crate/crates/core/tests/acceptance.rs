//! Acceptance suite: one pass/fail line per criterion.
//!
//! Criteria run one after another inside a single test so that timing-sensitive
//! ones are not disturbed by parallel test threads.

use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use acol::bench::stats::{ci_half_width, geometric_mean};
use acol::bench::{summarize, Measurement};
use acol::bytecode::{assemble, compile_blocks, compile_linear, disassemble, BytecodeImage, Instr};
use acol::diff::{check_program, diff_seeds, DiffOptions};
use acol::error::RuntimeError;
use acol::frontend::{max_expr_depth, parse_program, Stmt, FIB_MOD_SOURCE, FIB_SOURCE, POWER_SOURCE, PRIME_SOURCE};
use acol::object_space::{store_slot, ObjectSpace, Slots, Standard, Value, VarId};
use acol::progen::{generate, initial_env, GenConfig};
use acol::vm_linear::{run_linear, run_linear_probed, RunStats};
use acol::vm_threaded::run_threaded_ast;
use acol::{Backend, Boundary, Env, Int, Prepared};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn env(pairs: &[(&str, i64)]) -> Env {
    pairs.iter().map(|&(k, v)| (k, v)).collect()
}

fn power_image() -> BytecodeImage {
    compile_linear(&parse_program(POWER_SOURCE).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let image = power_image();
    let instrs = image.validate().map_err(|e| e.to_string())?;
    let offsets: Vec<usize> = instrs.iter().map(|&(pc, _)| pc).collect();
    let opcodes: Vec<u8> = instrs.iter().map(|&(_, i)| i.opcode()).collect();
    check(offsets == [0, 2, 7, 12, 14, 15, 20, 25, 30, 31, 36, 41, 43, 44, 49, 54], || format!("offsets {offsets:?}"))?;
    check(
        opcodes[..15] == [20, 45, 40, 20, 255, 11, 40, 40, 198, 45, 40, 20, 199, 45, 10],
        || format!("opcodes {opcodes:?}"),
    )?;
    check(instrs[5].1 == Instr::JumpIfFalse(54), || format!("jump-if-false {:?}", instrs[5].1))?;
    check(instrs[14].1 == Instr::Jump(7), || format!("jump {:?}", instrs[14].1))?;
    check(instrs[15] == (54, Instr::End) && image.code.len() == 55, || "end sentinel not at 54".into())?;
    let mut names = image.symbols.names().to_vec();
    names.sort();
    check(names == ["base", "exponent", "val"], || format!("symbols {names:?}"))?;
    Ok("power program: 16 instructions at the expected offsets, targets 54 and 7".into())
}

fn criterion_2() -> Outcome {
    let prog = compile_blocks(&parse_program(POWER_SOURCE).unwrap()).map_err(|e| e.to_string())?;
    let main = prog.render(&prog.main);
    check(main == "[20, 1, 45, val, 2, 0, 1]", || format!("main {main}"))?;
    check(prog.blocks.len() == 2, || format!("{} blocks", prog.blocks.len()))?;
    let b0 = prog.render(&prog.blocks[0]);
    let b1 = prog.render(&prog.blocks[1]);
    check(b0 == "[40, exponent, 20, 0, 255]", || format!("block 0 {b0}"))?;
    check(b1 == "[40, val, 40, base, 198, 45, val, 40, exponent, 20, 1, 199, 45, exponent]", || format!("block 1 {b1}"))?;
    Ok("main, block 0 and block 1 match exactly".into())
}

fn fixed_programs() -> Vec<(&'static str, Vec<Stmt>, Env)> {
    vec![
        ("power", parse_program(POWER_SOURCE).unwrap(), env(&[("base", 2), ("exponent", 5)])),
        ("prime", parse_program(PRIME_SOURCE).unwrap(), env(&[("is_prime", 1), ("start", 2), ("V", 10007)])),
        ("fib", parse_program(FIB_SOURCE).unwrap(), env(&[("a", 0), ("b", 1), ("n", 1000)])),
        ("fib_mod", parse_program(FIB_MOD_SOURCE).unwrap(), env(&[("a", 0), ("b", 1), ("n", 100_000)])),
    ]
}

fn criterion_3() -> Outcome {
    const BUDGET: Duration = Duration::from_secs(120);
    let start = Instant::now();
    let opts = DiffOptions::default();
    check(opts.backends == Backend::ALL, || "not all backends selected".into())?;
    for (name, program, env) in fixed_programs() {
        if let Some(d) = check_program(&program, &env, &opts).map_err(|e| e.to_string())? {
            return Err(format!("{name}: {d}"));
        }
    }
    let summary = diff_seeds(1..=200, &GenConfig::default(), &opts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(summary.passed() && summary.checked == 200, || summary.to_string())?;
    check(elapsed < BUDGET, || format!("{summary}, but took {:.1} s (budget {} s)", elapsed.as_secs_f64(), BUDGET.as_secs()))?;
    Ok(format!("{summary} plus power, prime, fib, fib_mod on 6 backends in {:.1} s", elapsed.as_secs_f64()))
}

fn trial_division_is_prime(v: u64) -> bool {
    v >= 2 && (2..).take_while(|d| d * d <= v).all(|d| v % d != 0)
}

/// Standard semantics, except that every store to `b` is checked against a bound.
struct BoundedB {
    bound: Int,
    stores: Cell<u64>,
    violation: Cell<bool>,
}

impl ObjectSpace for BoundedB {
    fn store_slot(&self, slots: &mut Slots<'_>, id: VarId, v: Value) -> Result<(), RuntimeError> {
        if slots.symbols().name(id) == Some("b") {
            self.stores.set(self.stores.get() + 1);
            match &v {
                Value::Int(i) if *i < self.bound && *i >= Int::zero() => {}
                _ => self.violation.set(true),
            }
        }
        store_slot(slots, id, v)
    }
}

fn criterion_4() -> Outcome {
    const V: i64 = 34_265_341;
    const FIB_N: usize = 400_000;
    const FIB_MOD_N: usize = 10_000_000;

    let prime_src = parse_program(PRIME_SOURCE).unwrap();
    let prime = Prepared::prepare(Backend::Linear, &prime_src).map_err(|e| e.to_string())?;
    let out = prime.run(env(&[("is_prime", 1), ("start", 2), ("V", V)]), Boundary::Static).map_err(|e| e.to_string())?;
    let expected = i64::from(trial_division_is_prime(V as u64));
    check(out.get("is_prime") == Some(&Int::from(expected)), || format!("is_prime {:?}, oracle {expected}", out.get("is_prime")))?;

    let fib_src = parse_program(FIB_SOURCE).unwrap();
    let fib = Prepared::prepare(Backend::Linear, &fib_src).map_err(|e| e.to_string())?;
    let out = fib.run(env(&[("a", 0), ("b", 1), ("n", FIB_N as i64)]), Boundary::Static).map_err(|e| e.to_string())?;
    let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
    for _ in 1..FIB_N {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    let got = out.get("b").map(Int::to_big);
    check(got.as_ref() == Some(&b), || "fib: b differs from the big-integer oracle".into())?;

    let fib_mod = compile_linear(&parse_program(FIB_MOD_SOURCE).unwrap()).map_err(|e| e.to_string())?;
    let space = BoundedB { bound: Int::from(1_000_000), stores: Cell::new(0), violation: Cell::new(false) };
    let start = env(&[("a", 0), ("b", 1), ("n", FIB_MOD_N as i64)]);
    let out = run_linear_probed(&fib_mod, start, &space, &mut ()).map_err(|e| e.to_string())?;
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..FIB_MOD_N {
        (a, b) = (b, (a + b) % 1_000_000);
    }
    check(!space.violation.get(), || "fib_mod: b left [0, 1000000)".into())?;
    check(space.stores.get() == (FIB_MOD_N - 1) as u64, || format!("fib_mod: {} stores to b", space.stores.get()))?;
    check(out.get("b") == Some(&Int::from(b as i64)), || format!("fib_mod: b {:?}, oracle {b}", out.get("b")))?;
    Ok(format!(
        "prime V={V}: is_prime={expected} as trial division; fib({FIB_N}) has {} bits as oracle; fib_mod b={b} < 1000000 over {} stores",
        out_bits(&got),
        space.stores.get()
    ))
}

fn out_bits(v: &Option<BigInt>) -> u64 {
    v.as_ref().map_or(0, BigInt::bits)
}

fn criterion_5() -> Outcome {
    check(geometric_mean(&[1.0, 4.0]) == Ok(2.0), || "gm([1, 4]) != 2".into())?;
    check(ci_half_width(&[0.25, 0.25, 0.25], 0.95) == Ok(0.0), || "zero variance CI != 0".into())?;

    let cells: [(&str, Backend, [f64; 5]); 6] = [
        ("a", Backend::Ast, [0.31, 0.29, 0.30, 0.33, 0.28]),
        ("a", Backend::Linear, [0.11, 0.12, 0.13, 0.10, 0.12]),
        ("a", Backend::Blocks, [0.21, 0.19, 0.20, 0.22, 0.23]),
        ("b", Backend::Ast, [1.7, 1.9, 1.8, 1.75, 1.85]),
        ("b", Backend::Linear, [0.9, 0.95, 0.85, 0.88, 0.93]),
        ("b", Backend::Blocks, [1.2, 1.1, 1.15, 1.25, 1.05]),
    ];
    let measure = |k: f64| -> Vec<Measurement> {
        cells
            .iter()
            .map(|(case, backend, s)| Measurement {
                case: case.to_string(),
                backend: *backend,
                boundary: Boundary::Static,
                samples: s.iter().map(|x| x * k).collect(),
            })
            .collect()
    };
    let base = summarize(&measure(1.0));
    for k in [0.25, 2.0, 1024.0, 1.0 / 65536.0] {
        let scaled = summarize(&measure(k));
        for (c, s) in base.cells.iter().zip(&scaled.cells) {
            check(s.mean == c.mean.map(|m| m * k), || format!("k={k}: {} mean not exactly scaled", c.backend))?;
            check(s.ratio.map(f64::to_bits) == c.ratio.map(f64::to_bits), || format!("k={k}: ratio changed"))?;
        }
        for (a, s) in base.aggregates.iter().zip(&scaled.aggregates) {
            check(a.ratio.map(f64::to_bits) == s.ratio.map(f64::to_bits), || format!("k={k}: aggregate changed"))?;
        }
    }
    for k in [3.0, 0.1, 7.77, 1e-3, 12345.678] {
        let scaled = summarize(&measure(k));
        for (c, s) in base.cells.iter().zip(&scaled.cells) {
            let (m, sm) = (c.mean.unwrap() * k, s.mean.unwrap());
            check((sm - m).abs() <= 1e-12 * m, || format!("k={k}: mean {sm} vs {m}"))?;
            let (r, sr) = (c.ratio.unwrap(), s.ratio.unwrap());
            check((sr - r).abs() <= 1e-12 * r, || format!("k={k}: ratio {sr} vs {r}"))?;
        }
    }
    Ok("gm([1,4]) = 2, zero-variance CI = 0; power-of-two k: means exact, ratios bit-identical; other k within 1e-12".into())
}

fn acbc_fixture(names: &[&str], code: &[u8]) -> Vec<u8> {
    let mut out = b"ACBC".to_vec();
    out.push(1);
    out.extend_from_slice(&(names.len() as u32).to_le_bytes());
    for n in names {
        out.extend_from_slice(&(n.len() as u16).to_le_bytes());
        out.extend_from_slice(n.as_bytes());
    }
    out.extend_from_slice(&(code.len() as u32).to_le_bytes());
    out.extend_from_slice(code);
    out
}

fn criterion_6() -> Outcome {
    let mut images = 0;
    let mut round_trip = |program: &[Stmt]| -> Result<(), String> {
        let image = compile_linear(program).map_err(|e| e.to_string())?;
        let text = disassemble(&image).map_err(|e| e.to_string())?;
        let back = assemble(&text).map_err(|e| e.to_string())?;
        check(back.code == image.code && back.symbols == image.symbols, || format!("assemble/disassemble differs on image {images}"))?;
        let read = BytecodeImage::from_acbc(&image.to_acbc()).map_err(|e| e.to_string())?;
        check(read == image, || format!(".acbc round trip differs on image {images}"))?;
        images += 1;
        Ok(())
    };
    for seed in 1..=990u64 {
        let cfg = GenConfig {
            stmts_min: 1,
            stmts_max: 12,
            depth_cap: 1 + (seed % 4) as usize,
            ..GenConfig::new(seed)
        };
        round_trip(&generate(&cfg))?;
    }
    for seed in 991..=1000u64 {
        round_trip(&generate(&GenConfig::new(seed)))?;
    }

    // Hand-written fixtures, every multi-byte field least significant byte first.
    let x_300 = parse_program("x = 300;").unwrap();
    let expected = [
        b'A', b'C', b'B', b'C', 1, // magic, version
        1, 0, 0, 0, // one symbol
        1, 0, b'x', // length 1, "x"
        11, 0, 0, 0, // eleven code bytes
        21, 0x2c, 0x01, 0, 0, // push4 300
        45, 0, 0, 0, 0, // assign x
        0,
    ];
    let bytes = compile_linear(&x_300).unwrap().to_acbc();
    check(bytes == expected, || format!("x = 300 encodes as {bytes:?}"))?;

    let power = power_image().to_acbc();
    check(power[..5] == *b"ACBC\x01" && power[5..9] == [3, 0, 0, 0], || "power header".into())?;
    let code_at = power.len() - 55;
    check(power[code_at - 4..code_at] == [55, 0, 0, 0], || "power code length".into())?;
    check(power[code_at + 15..code_at + 20] == [11, 54, 0, 0, 0], || "jump-if-false 54".into())?;
    check(power[code_at + 49..code_at + 54] == [10, 7, 0, 0, 0], || "jump 7".into())?;

    let negative = compile_linear(&parse_program("y = -1000;").unwrap()).unwrap();
    check(negative.code[..5] == [21, 0x18, 0xfc, 0xff, 0xff], || format!("push4 -1000 {:?}", &negative.code[..5]))?;

    let many: String = (0..300).map(|i| format!("v{i} = 1;")).collect();
    let wide = compile_linear(&parse_program(&many).unwrap()).unwrap();
    let last_assign = &wide.code[wide.code.len() - 6..wide.code.len() - 1];
    check(last_assign == [45, 0x2b, 0x01, 0, 0], || format!("assign id 299 {last_assign:?}"))?;

    let names: Vec<String> = (0..300).map(|i| format!("v{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let fixture = acbc_fixture(&name_refs, &wide.code);
    check(fixture == wide.to_acbc(), || "300-symbol container differs from fixture".into())?;
    let read = BytecodeImage::from_acbc(&fixture).map_err(|e| e.to_string())?;
    check(read == wide, || "300-symbol fixture reads back differently".into())?;

    Ok(format!("{images} generated images round-trip byte-identically; 4 byte fixtures verified"))
}

fn criterion_7() -> Outcome {
    const ITERS: i64 = 1_000_000;
    const STACK: usize = 256 * 1024;
    let program = parse_program(PRIME_SOURCE).unwrap();
    let run = |v: i64| {
        let program = program.clone();
        std::thread::Builder::new()
            .stack_size(STACK)
            .spawn(move || {
                let g = acol::bytecode::build_ast_graph(&program);
                run_threaded_ast(&g, env(&[("is_prime", 1), ("start", 2), ("V", v)])).map_err(|e| e.to_string())
            })
            .unwrap()
            .join()
            .map_err(|_| format!("threaded-ast overflowed a {STACK}-byte stack at V={v}"))?
    };
    let v = ITERS + 2;
    let out = run(v)?;
    let expected = i64::from(trial_division_is_prime(v as u64));
    check(out.get("start") == Some(&Int::from(v)), || "loop did not run to completion".into())?;
    check(out.get("is_prime") == Some(&Int::from(expected)), || "wrong is_prime".into())?;
    run(12)?;

    let mut worst = (0, 0);
    for seed in 1..=10u64 {
        let program = generate(&GenConfig::new(seed));
        let image = compile_linear(&program).unwrap();
        let mut stats = RunStats::default();
        run_linear_probed(&image, initial_env(), &Standard, &mut stats).map_err(|e| e.to_string())?;
        let depth = max_expr_depth(&program);
        check(stats.max_stack <= depth, || format!("seed {seed}: stack {} > depth {depth}", stats.max_stack))?;
        worst = worst.max((stats.max_stack, depth));
    }
    let power = run_linear(&power_image(), env(&[("base", 2), ("exponent", 5)])).map_err(|e| e.to_string())?;
    check(power.get("val") == Some(&Int::from(32)), || "power".into())?;
    Ok(format!(
        "threaded-ast ran {ITERS} iterations on a {} KiB stack; linear stack high-water {} <= expression depth {}",
        STACK / 1024,
        worst.0,
        worst.1
    ))
}

fn criterion_8() -> Outcome {
    Ok("out of scope: the published absolute and relative Prolog run times are properties of the \
        Prolog systems measured there and are not reproduced; the harness reproduces the method \
        (10 reps, geometric mean, 0.95 CI, AST-normalised table)"
        .into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden compiler layout", criterion_1),
        ("block layout", criterion_2),
        ("differential equivalence", criterion_3),
        ("benchmark correctness at desk scale", criterion_4),
        ("statistics", criterion_5),
        ("encoding round trips", criterion_6),
        ("resource properties", criterion_7),
        ("out of scope", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.1} s): {detail}", i + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {name} ({secs:.1} s): {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
