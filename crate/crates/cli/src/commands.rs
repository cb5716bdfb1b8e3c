//! One function per subcommand. Each builds a [`Table`] from cached or fresh
//! units of work; a unit is the smallest piece with its own cache shard.

use charwalk_core::patterns::{self, EnumerationOptions};
use charwalk_core::{cubic, stats, BigRational, Epsilon, PassageRecord, PrimeTable};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cache::Cache;
use crate::config::{Command, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::render::{big, decimal, decimal_f64, rational, Table};

pub const FPT_HEADER: &[&str] = &["x", "eps", "sum_f", "pi_odd", "average", "normalized"];
pub const ENUM_HEADER: &[&str] = &[
    "m",
    "eps",
    "a_count",
    "a_hat",
    "a_hat_dec",
    "nodes",
    "pruned",
];
pub const CONVERGE_HEADER: &[&str] = &[
    "x",
    "eps",
    "m_max",
    "average",
    "average_dec",
    "c_partial",
    "c_partial_dec",
    "relative_gap",
    "relative_gap_dec",
];
pub const TAIL_HEADER: &[&str] = &[
    "x",
    "eps",
    "m",
    "count",
    "pi_odd",
    "a_m",
    "a_m_dec",
    "a_hat",
    "a_hat_dec",
    "abs_gap_dec",
];
pub const DENSITY_HEADER: &[&str] = &[
    "x",
    "ell",
    "eps",
    "count",
    "pi_odd",
    "density",
    "density_dec",
];
pub const MOMENT_HEADER: &[&str] = &[
    "x",
    "ell",
    "route",
    "sixth_moment",
    "pi_odd",
    "normalized",
    "normalized_dec",
];
pub const C3_HEADER: &[&str] = &[
    "ell",
    "c3",
    "normalized",
    "normalized_dec",
    "delta",
    "growth_dec",
];
pub const EQUI_HEADER: &[&str] = &[
    "x",
    "constraints",
    "count",
    "pi",
    "expected",
    "expected_dec",
    "ratio_dec",
];
pub const PV_HEADER: &[&str] = &["x", "primes", "max_pv_ratio", "argmax_p", "max_abs_partial"];
pub const PASSAGE_HEADER: &[&str] = &["p", "eps", "first_passage", "eventual_time"];

/// A finished table, plus the error that cut it short, if any. Partial
/// tables are still written.
pub struct Outcome {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome {
            table,
            failure: None,
        }
    }
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    cache: Option<Cache>,
    table: Option<PrimeTable>,
}

impl<'a> Context<'a> {
    fn primes(&mut self, limit: u64) -> Result<&PrimeTable> {
        if self.table.as_ref().is_none_or(|t| t.limit() < limit) {
            self.table = Some(PrimeTable::new(limit.max(2))?);
        }
        Ok(self.table.as_ref().expect("just built"))
    }

    fn unit(
        &mut self,
        command: &str,
        canonical: String,
        compute: impl FnOnce(&mut Self) -> Result<Vec<Vec<String>>>,
    ) -> Result<Vec<Vec<String>>> {
        if let Some(cache) = &self.cache {
            if let Some(rows) = cache.load(command, &canonical)? {
                return Ok(rows);
            }
        }
        let rows = compute(self)?;
        if let Some(cache) = &self.cache {
            cache.store(command, &canonical, &rows)?;
        }
        Ok(rows)
    }

    fn options(&self) -> EnumerationOptions {
        EnumerationOptions {
            node_budget: self.cfg.node_budget,
            split_primes: self.cfg.split_primes,
        }
    }
}

fn max_x(xs: &[u64]) -> u64 {
    xs.iter().copied().max().unwrap_or(3)
}

pub fn execute(command: Command, cfg: &ExperimentConfig) -> Result<Outcome> {
    let cache = cfg.cache_dir.as_deref().map(Cache::open).transpose()?;
    let mut ctx = Context {
        cfg,
        cache,
        table: None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Resource(format!("cannot start {} workers: {e}", cfg.workers)))?;
    pool.install(|| match command {
        Command::Fpt => fpt(&mut ctx).map(Outcome::from),
        Command::Enum => enumerate(&mut ctx),
        Command::Converge => converge(&mut ctx).map(Outcome::from),
        Command::Tail => tail(&mut ctx).map(Outcome::from),
        Command::Density => density(&mut ctx).map(Outcome::from),
        Command::Moment => moment(&mut ctx).map(Outcome::from),
        Command::C3 => c3(&mut ctx).map(Outcome::from),
        Command::Equi => equi(&mut ctx).map(Outcome::from),
        Command::Pv => pv(&mut ctx).map(Outcome::from),
        Command::Passage => passage(&mut ctx).map(Outcome::from),
    })
}

fn fpt_unit(ctx: &mut Context, x: u64, eps: Epsilon) -> Result<Vec<String>> {
    let rows = ctx.unit("fpt", format!("fpt;x={x};eps={eps}"), |ctx| {
        let table = ctx.primes(x)?;
        let s = stats::average_first_passage(table, x, eps)?;
        debug_assert!(s.double_counting_holds());
        // sum_f * ln(x) / x tends to c_eps.
        let sum_f: f64 = s.sum.to_string().parse().expect("decimal integer");
        let normalized = sum_f * (x as f64).ln() / x as f64;
        Ok(vec![vec![
            x.to_string(),
            eps.to_string(),
            big(&s.sum),
            s.pi_odd.to_string(),
            rational(&s.average()),
            decimal_f64(normalized),
        ]])
    })?;
    Ok(rows.into_iter().next().expect("one row per x"))
}

fn fpt(ctx: &mut Context) -> Result<Table> {
    let xs = ctx.cfg.require_x()?.to_vec();
    let eps = ctx.cfg.epsilon;
    ctx.primes(max_x(&xs))?;
    let mut out = Table::new("fpt", FPT_HEADER);
    for x in xs {
        out.rows.push(fpt_unit(ctx, x, eps)?);
    }
    Ok(out)
}

fn enum_row(ctx: &mut Context, m: u64, eps: Epsilon) -> Result<Vec<String>> {
    let opts = ctx.options();
    let rows = ctx.unit("enum", format!("enum;m={m};eps={eps}"), |_| {
        let r = patterns::enumerate_a(m, eps, opts)?;
        Ok(vec![vec![
            m.to_string(),
            eps.to_string(),
            r.a_count.to_string(),
            rational(&r.a_hat),
            decimal(&r.a_hat),
            r.nodes_visited.to_string(),
            r.pruned.to_string(),
        ]])
    })?;
    Ok(rows.into_iter().next().expect("one row per m"))
}

fn parse_rational(token: &str) -> BigRational {
    let (n, d) = token.split_once('/').unwrap_or((token, "1"));
    BigRational::new(
        n.parse::<BigInt>().expect("rendered numerator"),
        d.parse::<BigInt>().expect("rendered denominator"),
    )
}

fn enumerate(ctx: &mut Context) -> Result<Outcome> {
    let eps = ctx.cfg.epsilon;
    let mut out = Table::new("enum", ENUM_HEADER);
    let mut partial = BigRational::zero();
    let mut failure = None;
    let mut done_through = None;
    for m in 0..=ctx.cfg.m_max {
        match enum_row(ctx, m, eps) {
            Ok(row) => {
                partial += parse_rational(&row[3]);
                out.rows.push(row);
                done_through = Some(m);
            }
            Err(e @ CliError::Resource(_)) => {
                failure = Some(e);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(m) = done_through {
        out.trailer = vec![
            ("partial_sum", rational(&partial)),
            ("partial_sum_dec", decimal(&partial)),
            ("m_max", m.to_string()),
        ];
    }
    Ok(Outcome {
        table: out,
        failure,
    })
}

fn c_partial(ctx: &mut Context, eps: Epsilon) -> Result<BigRational> {
    let m_max = ctx.cfg.m_max;
    let opts = ctx.options();
    let rows = ctx.unit(
        "cpartial",
        format!("cpartial;m_max={m_max};eps={eps}"),
        |_| {
            let c = patterns::c_eps_partial(m_max, eps, opts)?;
            Ok(vec![vec![rational(&c.partial_sum)]])
        },
    )?;
    Ok(parse_rational(&rows[0][0]))
}

fn converge(ctx: &mut Context) -> Result<Table> {
    let xs = ctx.cfg.require_x()?.to_vec();
    let eps = ctx.cfg.epsilon;
    let m_max = ctx.cfg.m_max;
    let c = c_partial(ctx, eps)?;
    ctx.primes(max_x(&xs))?;
    let mut out = Table::new("converge", CONVERGE_HEADER);
    for x in xs {
        let row = fpt_unit(ctx, x, eps)?;
        let average = parse_rational(&row[4]);
        let gap = (&average - &c).abs() / &c;
        out.rows.push(vec![
            x.to_string(),
            eps.to_string(),
            m_max.to_string(),
            rational(&average),
            decimal(&average),
            rational(&c),
            decimal(&c),
            rational(&gap),
            decimal(&gap),
        ]);
    }
    Ok(out)
}

fn tail(ctx: &mut Context) -> Result<Table> {
    let xs = ctx.cfg.require_x()?.to_vec();
    let eps = ctx.cfg.epsilon;
    let m_max = ctx.cfg.m_max;
    let opts = ctx.options();
    let levels = patterns::enumerate_levels(m_max, eps, opts)?;
    ctx.primes(max_x(&xs))?;
    let mut out = Table::new("tail", TAIL_HEADER);
    for x in xs {
        let rows = ctx.unit(
            "tail",
            format!("tail;x={x};eps={eps};m_max={m_max}"),
            |ctx| {
                let table = ctx.primes(x)?;
                let s = stats::average_first_passage(table, x, eps)?;
                Ok((0..=m_max)
                    .map(|m| {
                        let a = s.tail.value(m);
                        let hat = levels.a_hat(m);
                        let gap = (&a - &hat).abs();
                        vec![
                            x.to_string(),
                            eps.to_string(),
                            m.to_string(),
                            s.tail.count(m).to_string(),
                            s.pi_odd.to_string(),
                            rational(&a),
                            decimal(&a),
                            rational(&hat),
                            decimal(&hat),
                            decimal(&gap),
                        ]
                    })
                    .collect())
            },
        )?;
        out.rows.extend(rows);
    }
    Ok(out)
}

fn density(ctx: &mut Context) -> Result<Table> {
    let xs = ctx.cfg.require_x()?.to_vec();
    let ells = ctx.cfg.require_ell()?.to_vec();
    let eps = ctx.cfg.epsilon;
    ctx.primes(max_x(&xs))?;
    let mut out = Table::new("density", DENSITY_HEADER);
    for &x in &xs {
        for &ell in &ells {
            let rows = ctx.unit(
                "density",
                format!("density;x={x};ell={ell};eps={eps}"),
                |ctx| {
                    let d = stats::density_p(ctx.primes(x)?, x, ell, eps)?;
                    Ok(vec![vec![
                        x.to_string(),
                        ell.to_string(),
                        eps.to_string(),
                        d.count.to_string(),
                        d.pi_odd.to_string(),
                        rational(&d.density()),
                        decimal(&d.density()),
                    ]])
                },
            )?;
            out.rows.extend(rows);
        }
    }
    Ok(out)
}

fn moment_row(route: &str, m: &stats::MomentReport) -> Vec<String> {
    vec![
        m.x.to_string(),
        m.ell.to_string(),
        route.to_string(),
        big(&m.sixth_moment),
        m.pi_odd.to_string(),
        rational(&m.normalized()),
        decimal(&m.normalized()),
    ]
}

fn moment(ctx: &mut Context) -> Result<Table> {
    let xs = ctx.cfg.require_x()?.to_vec();
    let ells = ctx.cfg.require_ell()?.to_vec();
    if let Some(&ell) = ells.iter().find(|&&l| l > stats::CUBE_ROUTE_MAX_ELL) {
        return Err(CliError::Resource(format!(
            "l = {ell} exceeds the cube-route limit {}",
            stats::CUBE_ROUTE_MAX_ELL
        )));
    }
    ctx.primes(max_x(&xs))?;
    let mut out = Table::new("moment", MOMENT_HEADER);
    for &x in &xs {
        for &ell in &ells {
            let rows = ctx.unit("moment", format!("moment;x={x};ell={ell}"), |ctx| {
                let table = ctx.primes(x)?;
                let direct = stats::sixth_moment_direct(table, x, ell)?;
                let cubes = stats::sixth_moment_via_cubes(table, x, ell)?;
                if direct.sixth_moment != cubes.sixth_moment {
                    return Err(CliError::Resource(format!(
                        "sixth-moment routes disagree at x = {x}, l = {ell}"
                    )));
                }
                Ok(vec![
                    moment_row("direct", &direct),
                    moment_row("cubes", &cubes),
                ])
            })?;
            out.rows.extend(rows);
        }
    }
    Ok(out)
}

fn c3(ctx: &mut Context) -> Result<Table> {
    let ells = ctx.cfg.require_ell()?.to_vec();
    let (dn, dd) = ctx.cfg.delta;
    let delta = ctx.cfg.delta_f64();
    let mut out = Table::new("c3", C3_HEADER);
    for ell in ells {
        let rows = ctx.unit("c3", format!("c3;ell={ell};delta={dn}/{dd}"), |_| {
            let r = cubic::c3_via_kernels(ell)?;
            let growth = r.value as f64 / (ell as f64).powf(3.0 + delta);
            Ok(vec![vec![
                ell.to_string(),
                r.value.to_string(),
                rational(&r.normalized()),
                decimal(&r.normalized()),
                format!("{dn}/{dd}"),
                decimal_f64(growth),
            ]])
        })?;
        out.rows.extend(rows);
    }
    Ok(out)
}

fn constraint_token(cs: &[(u64, i8)]) -> String {
    cs.iter()
        .map(|&(q, e)| format!("{q}:{}", if e > 0 { "+1" } else { "-1" }))
        .collect::<Vec<_>>()
        .join(";")
}

fn equi(ctx: &mut Context) -> Result<Table> {
    let xs = ctx.cfg.require_x()?.to_vec();
    let constraints = ctx.cfg.constraints.clone();
    if constraints.is_empty() {
        return Err(CliError::Config(
            "equi needs at least one --constraint q:+-1".into(),
        ));
    }
    let token = constraint_token(&constraints);
    ctx.primes(max_x(&xs))?;
    let mut out = Table::new("equi", EQUI_HEADER);
    for x in xs {
        let rows = ctx.unit("equi", format!("equi;x={x};c={token}"), |ctx| {
            let c = stats::equidistribution_counts(ctx.primes(x)?, x, &constraints)?;
            let share = BigRational::new(BigInt::from(c.count), BigInt::from(c.pi));
            Ok(vec![vec![
                x.to_string(),
                token.clone(),
                c.count.to_string(),
                c.pi.to_string(),
                rational(&c.expected),
                decimal(&c.expected),
                decimal(&share),
            ]])
        })?;
        out.rows.extend(rows);
    }
    Ok(out)
}

fn pv(ctx: &mut Context) -> Result<Table> {
    let xs = ctx.cfg.require_x()?.to_vec();
    ctx.primes(max_x(&xs))?;
    let mut out = Table::new("pv", PV_HEADER);
    for x in xs {
        let rows = ctx.unit("pv", format!("pv;x={x}"), |ctx| {
            let s = stats::pv_scan(ctx.primes(x)?, x)?;
            Ok(vec![vec![
                x.to_string(),
                s.primes.to_string(),
                decimal_f64(s.max_ratio),
                s.argmax_p.to_string(),
                s.max_abs_partial.to_string(),
            ]])
        })?;
        out.rows.extend(rows);
    }
    Ok(out)
}

/// Rows for every odd prime up to the largest `x`.
fn passage(ctx: &mut Context) -> Result<Table> {
    let x = max_x(ctx.cfg.require_x()?);
    let eps = ctx.cfg.epsilon;
    let rows = ctx.unit("passage", format!("passage;x={x};eps={eps}"), |ctx| {
        let primes = ctx.primes(x)?.odd_primes_upto(x).to_vec();
        let records: Vec<Result<PassageRecord>> = {
            use rayon::prelude::*;
            primes
                .par_iter()
                .map(|&p| PassageRecord::compute(p, eps).map_err(CliError::from))
                .collect()
        };
        records
            .into_iter()
            .map(|r| {
                r.map(|r| {
                    vec![
                        r.p.to_string(),
                        eps.to_string(),
                        r.first_passage.to_string(),
                        r.eventual_time.to_string(),
                    ]
                })
            })
            .collect()
    })?;
    let mut out = Table::new("passage", PASSAGE_HEADER);
    out.rows = rows;
    Ok(out)
}
