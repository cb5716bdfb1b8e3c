//! Acceptance gate. Every criterion runs, prints one PASS/FAIL line, and the
//! test fails at the end if any criterion did.
//!
//! Run with `cargo test -p charwalk --test acceptance -- --nocapture`.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use charwalk_core::patterns::{self, EnumerationOptions, SignPattern};
use charwalk_core::symbol::{euler_criterion, jacobi, kronecker, p_star};
use charwalk_core::{charsum, cubic, stats, BigRational, Epsilon, PrimeTable};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eps(s: &str) -> Epsilon {
    s.parse().unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn symbols_match_euler() -> Outcome {
    let table = PrimeTable::new(10_000).unwrap();
    let mut pairs = 0u64;
    for &p in table.odd_primes() {
        let p = p as i64;
        for n in 0..p {
            let (j, e) = (jacobi(n, p).unwrap(), euler_criterion(n, p).unwrap());
            ensure(j == e, || format!("({n}/{p}): jacobi {j}, euler {e}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn reciprocity() -> Outcome {
    let table = PrimeTable::new(1000).unwrap();
    let mut pairs = 0u64;
    for &p in table.odd_primes() {
        let p = p as i64;
        let ps = p_star(p).unwrap();
        for u in 1..=1000i64 {
            let (lhs, rhs) = (jacobi(u, p).unwrap(), kronecker(ps, u));
            ensure(lhs == rhs, || format!("u={u}, p={p}: {lhs} vs {rhs}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn double_counting() -> Outcome {
    let table = PrimeTable::new(100_000).unwrap();
    for e in ["1/4", "1/2", "1"] {
        for x in [1_000u64, 100_000] {
            let s = stats::average_first_passage(&table, x, eps(e)).unwrap();
            let tail_sum = s
                .tail
                .values()
                .into_iter()
                .fold(BigRational::zero(), |acc, v| acc + v);
            // Independent per-prime recount of the mean.
            let direct: u64 = table
                .odd_primes_upto(x)
                .iter()
                .map(|&p| charsum::first_passage_time(p, eps(e)))
                .sum();
            let direct = rat(direct as i64, s.pi_odd as i64);
            ensure(s.average() == tail_sum && direct == tail_sum, || {
                format!(
                    "eps={e}, x={x}: mean {} vs tail sum {tail_sum}",
                    s.average()
                )
            })?;
        }
    }
    Ok("6 cases exact".into())
}

fn closed_form_eps_one() -> Outcome {
    let start = Instant::now();
    let table = PrimeTable::new(40).unwrap();
    let mut sum = BigRational::zero();
    for m in 0..=40u64 {
        let r = patterns::enumerate_a(m, Epsilon::ONE, EnumerationOptions::default()).unwrap();
        let expected = BigRational::new(BigInt::from(1), BigInt::from(1) << table.pi(m) as usize);
        ensure(r.a_hat == expected, || {
            format!("m={m}: {} vs {expected}", r.a_hat)
        })?;
        if m <= 30 {
            sum += r.a_hat;
        }
    }
    let target = rat(3_669_921_875, 1_000_000_000);
    ensure(sum == target, || format!("sum to 30 = {sum}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("sum to 30 = {sum} in {secs:.2}s"))
}

fn biconditional() -> Outcome {
    let e = Epsilon::HALF;
    let table = PrimeTable::new(100_000).unwrap();
    let mut checks = 0u64;
    for &p in table.odd_primes() {
        let f = charsum::first_passage_time(p, e);
        for m in 0..=12u64.min(p - 1) {
            let sigma = SignPattern::of_prime(p, m).unwrap();
            let adm = patterns::admissible(&sigma, e);
            ensure((f > m) == adm, || {
                format!("p={p}, m={m}: f={f}, admissible={adm}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (p, m) pairs, zero exceptions"))
}

fn limit_convergence() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    pool.install(|| {
        let start = Instant::now();
        let x = 1_000_000;
        let table = PrimeTable::new(x).unwrap();
        let tol = rat(1, 100);
        let mut worst = BigRational::zero();
        for e in ["1/2", "1"] {
            let s = stats::average_first_passage(&table, x, eps(e)).unwrap();
            let levels =
                patterns::enumerate_levels(12, eps(e), EnumerationOptions::default()).unwrap();
            for m in 0..=12 {
                let gap = (s.tail.value(m) - levels.a_hat(m)).abs();
                ensure(gap <= tol, || format!("eps={e}, m={m}: gap {gap}"))?;
                worst = worst.max(gap);
            }
        }
        let secs = start.elapsed().as_secs_f64();
        ensure(secs < 600.0, || format!("took {secs:.1}s"))?;
        Ok(format!(
            "max gap {:.5} on one worker in {secs:.1}s",
            to_f64(&worst)
        ))
    })
}

fn moment_identity() -> Outcome {
    let table = PrimeTable::new(1000).unwrap();
    let mut cases = 0;
    for x in [3u64, 10, 100, 500, 1000] {
        for ell in 1..=10 {
            let d = stats::sixth_moment_direct(&table, x, ell).unwrap();
            let c = stats::sixth_moment_via_cubes(&table, x, ell).unwrap();
            ensure(d.sixth_moment == c.sixth_moment, || {
                format!("x={x}, l={ell}: {} vs {}", d.sixth_moment, c.sixth_moment)
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (x, l) points"))
}

fn c3_checks() -> Outcome {
    for ell in 1..=30 {
        let (a, b) = (
            cubic::c3_via_kernels(ell).unwrap(),
            cubic::c3_bruteforce(ell).unwrap(),
        );
        ensure(a.value == b.value, || {
            format!("l={ell}: {} vs {}", a.value, b.value)
        })?;
    }
    let two = cubic::c3_via_kernels(2).unwrap().value;
    ensure(two == 32, || format!("C3(2) = {two}"))?;
    let rows = cubic::c3_growth_table(200, 0.5).unwrap();
    for r in &rows {
        let k = cubic::c3_via_kernels(r.ell).unwrap().value;
        ensure(r.c3 == k, || {
            format!("growth table l={}: {} vs {k}", r.ell, r.c3)
        })?;
        ensure(r.ratio.is_finite(), || {
            format!("l={}: ratio {}", r.ell, r.ratio)
        })?;
    }
    let last = rows.last().unwrap();
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(format!(
        "routes agree to l=30, C3/l^3.5 at l=200 is {:.4}, max {max:.4}",
        last.ratio
    ))
}

fn structural_bounds() -> Outcome {
    let table = PrimeTable::new(1_000_000).unwrap();
    for e in ["1/4", "1/2", "1"] {
        for &p in table.odd_primes() {
            let f = charsum::first_passage_time(p, eps(e));
            ensure((2..=p).contains(&f), || format!("eps={e}: f({p}) = {f}"))?;
        }
    }
    let mut samples = 0;
    for e in ["1/4", "1/2", "1"] {
        for x in [1_000u64, 10_000, 100_000] {
            for m in [1u64, 2, 3, 5, 8, 12, 20] {
                let w = stats::tail_dominated_by_density(&table, x, eps(e), m).unwrap();
                ensure(w.holds(), || {
                    format!("eps={e}, x={x}, m={m}: {} > {}", w.tail, w.density)
                })?;
                samples += 1;
            }
        }
        let levels = patterns::enumerate_levels(60, eps(e), EnumerationOptions::default()).unwrap();
        for m in 1..=60 {
            ensure(levels.a_hat(m) <= levels.a_hat(m - 1), || {
                format!("eps={e}: a_hat rises at m={m}")
            })?;
        }
    }
    let pv = stats::pv_scan(&table, 100_000).unwrap();
    ensure(pv.max_ratio < 1.0, || {
        format!("pv ratio {} at p={}", pv.max_ratio, pv.argmax_p)
    })?;
    Ok(format!(
        "f <= p to 10^6, {samples} tail/density samples, a_hat nonincreasing to m=60, max pv ratio {:.4} (p={})",
        pv.max_ratio, pv.argmax_p
    ))
}

fn convergence_probe() -> Outcome {
    let table = PrimeTable::new(10_000_000).unwrap();
    let c = patterns::c_eps_partial(120, Epsilon::ONE, EnumerationOptions::default())
        .unwrap()
        .partial_sum;
    let mut prev: Option<(BigRational, BigRational)> = None;
    let mut report = Vec::new();
    for x in [100_000u64, 1_000_000, 10_000_000] {
        let avg = stats::average_first_passage(&table, x, Epsilon::ONE)
            .unwrap()
            .average();
        let gap = (&avg - &c).abs() / &c;
        if let Some((pa, pg)) = &prev {
            // Moving toward c means stepping in the direction of c by less
            // than the previous distance, which the shrinking gap captures.
            let toward = (&avg > pa) == (&c > pa);
            ensure(toward && gap < *pg, || {
                format!("x={x}: average {avg} gap {gap}")
            })?;
        }
        report.push(format!("{:.5}", to_f64(&avg)));
        prev = Some((avg, gap));
    }
    Ok(format!(
        "averages {} toward c_1 partial {:.5}, final gap {:.4}",
        report.join(" -> "),
        to_f64(&c),
        to_f64(&prev.unwrap().1)
    ))
}

fn to_f64(r: &BigRational) -> f64 {
    r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()
}

const DETERMINISM_RUNS: &[&[&str]] = &[
    &["fpt", "--x", "1e4", "--x", "1e5", "--eps", "1/2"],
    &["enum", "--m-max", "40", "--eps", "1/2"],
    &[
        "converge", "--x", "1e4", "--x", "1e5", "--eps", "1/2", "--m-max", "30",
    ],
    &["tail", "--x", "1e5", "--eps", "1/4", "--m-max", "20"],
    &["density", "--x", "1e5", "--ell", "10", "--ell", "50"],
    &["moment", "--x", "1000", "--ell", "5", "--ell", "10"],
    &["c3", "--ell", "10", "--ell", "30"],
    &[
        "equi",
        "--x",
        "1e5",
        "--constraint",
        "2:+1",
        "--constraint",
        "3:-1",
    ],
    &["pv", "--x", "1e5"],
    &["passage", "--x", "5e4", "--eps", "1/2"],
];

fn run_cli(args: &[&str], workers: &str, out: &Path) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_charwalk"))
        .args(args)
        .args(["--workers", workers, "--format", "json", "--out"])
        .arg(out)
        .env_remove("CHARWALK_CACHE")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&o.stderr))
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut files = 0;
    for args in DETERMINISM_RUNS {
        let (a, b) = (
            dir.path().join(format!("{}-1", args[0])),
            dir.path().join(format!("{}-4", args[0])),
        );
        run_cli(args, "1", &a)?;
        run_cli(args, "4", &b)?;
        for ext in ["csv", "json"] {
            let name = format!("{}.{ext}", args[0]);
            let (x, y) = (
                fs::read(a.join(&name)).unwrap(),
                fs::read(b.join(&name)).unwrap(),
            );
            ensure(x == y, || format!("{name} differs between 1 and 4 workers"))?;
            files += 1;
        }
    }
    Ok(format!(
        "{} commands, {files} files identical",
        DETERMINISM_RUNS.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: &[Criterion] = &[
        ("symbol oracle equivalence", symbols_match_euler),
        ("reciprocity identity", reciprocity),
        ("exact double counting", double_counting),
        ("closed form at eps = 1", closed_form_eps_one),
        ("prefix biconditional", biconditional),
        ("tail limit convergence", limit_convergence),
        ("sixth moment identity", moment_identity),
        ("C3 cross-check and growth", c3_checks),
        ("structural bounds", structural_bounds),
        ("convergence probe at eps = 1", convergence_probe),
        ("worker-count determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name} [{secs:.1}s]: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
