//! The `ffdioph` command line.
//!
//! Every subcommand writes one record per line, as JSON objects or CSV rows.
//! Numeric fields are integers: norms as exponents of `k` (`null` for the
//! zero norm), measures as `count * k^-res_exp`, bounds as
//! `(num / (den * k^den_exp))^(1/root)`. Exit codes: 0 success, 1
//! computational failure, 2 usage error.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rand::SeedableRng;

use crate::calculus::{nondeg_order, PolyMap};
use crate::cfrac_witness::{best_witness, cf_expand, convergents, witness_for};
use crate::error::{Error, Result};
use crate::exact::{MeasureValue, PowProduct};
use crate::field_arith::Field;
use crate::flows::{link_params, scan_flows, scan_report, traj_delta, verify_link, FlowVector, ScanVariant};
use crate::goodfn::{check_good, family_size, family_sweep, good_constants, BallSpec, FamilyReport, DEFAULT_CAP};
use crate::laurent::{LaurentBall, NormExp};
use crate::nondiv::{
    bc_rows, bc_shell, check_submodule, conditions_report, impmain_report, impmain_rows, measure_e, HSpec,
};
use crate::parse::{
    parse_element, parse_field, parse_int_list, parse_map, parse_matrix, parse_mpoly, parse_poly_vec, parse_rational,
    parse_vec,
};
use crate::polylattice::{det_norm, enumerate_primitive, random_unimodular, reduce_basis, LatticeBasis};

#[derive(Parser, Debug)]
#[command(name = "ffdioph", version, about = "Diophantine approximation over F_q((1/X))")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    One,
    Multi,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// `p` or `p^nu:modulus`, e.g. `2^2:g^2+g+1`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Deepest coefficient index a measure cell may fix.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    res: i64,
    #[arg(long, global = true, env = "FFDIOPH_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value = "json")]
    out: OutFormat,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Precision of constructed elements and inverses.
    #[arg(long, global = true, default_value_t = 64)]
    prec: i64,
}

#[derive(Args, Debug, Clone)]
struct BallArgs {
    /// Ball center, components separated by `;` (default 0).
    #[arg(long)]
    center: Option<String>,
    /// Radius exponents `j` (radius `k^-j`), comma separated (default 0).
    #[arg(long, allow_hyphen_values = true)]
    radius: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate and describe a field.
    Field,
    /// Continued fraction expansion and convergents.
    Cf {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Best `|p + q.x|` over `deg q_i <= bound`.
    Witness {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Successive minima of a lattice, or of random covolume-one lattices.
    Reduce {
        /// Basis vectors as rows.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        deg: usize,
    },
    /// `delta` along a diagonal flow.
    Traj {
        #[arg(long)]
        x: String,
        #[arg(long = "T")]
        total: u64,
        #[arg(long, value_enum, default_value = "one")]
        variant: Variant,
        /// Print only the minimum.
        #[arg(long)]
        summary: bool,
    },
    /// Flow attached to a witness, and the bound `delta <= r`.
    Link {
        #[arg(long)]
        q: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        x: Option<String>,
    },
    /// Nondegeneracy order of a polynomial map at a point.
    Nondeg {
        #[arg(long)]
        f: String,
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = 6)]
        l_max: u32,
        #[arg(long)]
        include_zero: bool,
    },
    /// `(C, alpha)`-good test of a polynomial on a ball.
    Good {
        #[arg(long)]
        f: String,
        #[arg(long = "C", default_value = "1")]
        c: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Exponents of the `eps` grid, comma separated.
        #[arg(long, allow_hyphen_values = true, default_value = "-1,-2,-3")]
        eps: String,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Empirical good constant of a polynomial family on B_1.
    Family {
        #[arg(long, default_value_t = 3)]
        deg_x: usize,
        #[arg(long, default_value_t = 2)]
        deg_coef: usize,
        #[arg(long, default_value = "1/3")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,-1,-2,-3,-4,-5,-6")]
        eps: String,
    },
    /// `lambda{x in B : delta(g_t Lambda_f(x)) < k^eps}`.
    Measure {
        #[arg(long)]
        f: String,
        #[arg(long)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: i64,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Measure bound `(n+1) C (eps/rho)^alpha lambda(B)` over a flow grid.
    Impmain {
        #[arg(long)]
        f: String,
        /// All flows with `t_sum <= T`.
        #[arg(long = "T")]
        total: u64,
        #[arg(long, allow_hyphen_values = true, default_value = "-1,-2,-3")]
        eps: String,
        /// Overrides the nondegeneracy constant.
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        rho: i64,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Borel-Cantelli shell sums with `E_t = {delta <= k^-ceil(gamma t_sum)}`.
    Bc {
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long = "T")]
        total: u64,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// The nondivergence hypotheses over a scan of primitive submodules.
    Conditions {
        #[arg(long)]
        f: String,
        #[arg(long)]
        t: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        rho: i64,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0,-1,-2")]
        eps: String,
        #[arg(long, default_value_t = 1)]
        degree_bound: usize,
        #[command(flatten)]
        ball: BallArgs,
    },
}

/// One output field.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Val {
    Int(i64),
    /// A decimal integer of any size.
    Big(String),
    Str(String),
    Bool(bool),
    Ints(Vec<i64>),
    Null,
}

type Record = Vec<(&'static str, Val)>;

fn norm_val(n: NormExp) -> Val {
    n.exp().map_or(Val::Null, Val::Int)
}

fn flow_val(t: &FlowVector) -> Val {
    Val::Ints(t.t().iter().map(|&a| a as i64).collect())
}

fn measure_fields(prefix: &'static str, m: &MeasureValue) -> Record {
    let (c, e) = match prefix {
        "" => ("count", "res_exp"),
        "shell" => ("shell_count", "shell_res_exp"),
        _ => ("partial_count", "partial_res_exp"),
    };
    vec![(c, Val::Big(m.count.to_string())), (e, Val::Int(m.res_exp))]
}

fn bound_fields(prefix: &'static str, b: &PowProduct, k: u32) -> Record {
    let r = b.to_record(k);
    let names = match prefix {
        "c_emp" => ["c_emp_num", "c_emp_den", "c_emp_den_exp", "c_emp_root"],
        "c" => ["c_num", "c_den", "c_den_exp", "c_root"],
        _ => ["bound_num", "bound_den", "bound_den_exp", "bound_root"],
    };
    vec![
        (names[0], Val::Big(r.num.to_string())),
        (names[1], Val::Big(r.den.to_string())),
        (names[2], Val::Int(r.den_exp)),
        (names[3], Val::Int(r.root)),
    ]
}

struct Out<'a> {
    w: &'a mut dyn Write,
    fmt: OutFormat,
    header: Option<Vec<&'static str>>,
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn csv_str(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Out<'_> {
    fn emit(&mut self, rec: Record) -> std::io::Result<()> {
        match self.fmt {
            OutFormat::Json => {
                let parts: Vec<String> = rec
                    .iter()
                    .map(|(k, v)| {
                        let v = match v {
                            Val::Int(i) => i.to_string(),
                            Val::Big(s) => s.clone(),
                            Val::Str(s) => json_str(s),
                            Val::Bool(b) => b.to_string(),
                            Val::Ints(xs) => {
                                format!("[{}]", xs.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                            }
                            Val::Null => "null".into(),
                        };
                        format!("{}:{}", json_str(k), v)
                    })
                    .collect();
                writeln!(self.w, "{{{}}}", parts.join(","))
            }
            OutFormat::Csv => {
                let keys: Vec<&'static str> = rec.iter().map(|(k, _)| *k).collect();
                if self.header.as_ref() != Some(&keys) {
                    writeln!(self.w, "{}", keys.join(","))?;
                    self.header = Some(keys);
                }
                let vals: Vec<String> = rec
                    .iter()
                    .map(|(_, v)| match v {
                        Val::Int(i) => i.to_string(),
                        Val::Big(s) => s.clone(),
                        Val::Str(s) => csv_str(s),
                        Val::Bool(b) => b.to_string(),
                        Val::Ints(xs) => xs.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
                        Val::Null => String::new(),
                    })
                    .collect();
                writeln!(self.w, "{}", vals.join(","))
            }
        }
    }
}

/// Maps `f` over `items` on `jobs` scoped threads; results keep input order.
pub fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });
    slots.into_inner().expect("no poisoned workers").into_iter().map(|r| r.expect("every slot filled")).collect()
}

fn collect<R>(rs: Vec<Result<R>>) -> Result<Vec<R>> {
    rs.into_iter().collect()
}

/// 2 for bad input, 1 for failures of the computation itself.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPrime(_)
        | Error::ReducibleModulus(_)
        | Error::DegreeMismatch { .. }
        | Error::FieldTooLarge(_)
        | Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::FieldMismatch => 2,
        _ => 1,
    }
}

/// Runs the command line `args` (including the program name).
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut o = Out { w: out, fmt: cli.run.out, header: None };
    match execute(&cli, &mut o) {
        Ok(Ok(())) => 0,
        Ok(Err(io)) => {
            let _ = writeln!(err, "error: {io}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn field_of(cfg: &RunConfig) -> Result<Field> {
    let s = cfg.field.as_deref().ok_or(Error::InvalidArgument("missing --field".into()))?;
    parse_field(s)
}

fn ball_of(field: &Field, d: usize, a: &BallArgs, prec: i64) -> Result<BallSpec> {
    let center = match &a.center {
        Some(s) => parse_vec(field, s, prec)?.0,
        None => vec![LaurentBall::zero(field); d],
    };
    let radius = match &a.radius {
        Some(s) => parse_int_list(s)?,
        None => vec![0; d],
    };
    if center.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: center.len() });
    }
    BallSpec::new(center, radius)
}

fn eps_list(s: &str) -> Result<Vec<NormExp>> {
    Ok(parse_int_list(s)?.into_iter().map(NormExp::Finite).collect())
}

fn flow_of(s: &str) -> Result<FlowVector> {
    let t = parse_int_list(s)?;
    if t.iter().any(|&a| a < 0) {
        return Err(Error::InvalidArgument("flow entries must be non-negative".into()));
    }
    Ok(FlowVector::new(t.into_iter().map(|a| a as u64).collect()))
}

/// `C` and `alpha` from the flags, defaulting to the nondegeneracy constants
/// at the ball center.
fn constants(
    f: &PolyMap,
    b: &BallSpec,
    c: &Option<String>,
    alpha: &Option<String>,
) -> Result<(PowProduct, Rational64)> {
    let defaults = || -> Result<(PowProduct, Rational64)> {
        let l = nondeg_order(f, &b.center, 8, false)?
            .ok_or(Error::InvalidArgument("map is degenerate at the center; pass --C and --alpha".into()))?;
        Ok(good_constants(f.d, l))
    };
    let (dc, da) = match (c, alpha) {
        (Some(_), Some(_)) => (PowProduct::one(), Rational64::from_integer(1)),
        _ => defaults()?,
    };
    let c = match c {
        Some(s) => rational_pow(parse_rational(s)?)?,
        None => dc,
    };
    let a = match alpha {
        Some(s) => parse_rational(s)?,
        None => da,
    };
    Ok((c, a))
}

fn rational_pow(r: Rational64) -> Result<PowProduct> {
    if r <= Rational64::from_integer(0) {
        return Err(Error::InvalidArgument("C must be positive".into()));
    }
    Ok(PowProduct::integer(*r.numer()).div(&PowProduct::integer(*r.denom())))
}

fn execute(cli: &Cli, o: &mut Out<'_>) -> Result<std::io::Result<()>> {
    let cfg = &cli.run;
    let field = field_of(cfg)?;
    let k = field.k();
    let jobs = cfg.jobs;
    let mut recs: Vec<Record> = Vec::new();
    match &cli.cmd {
        Cmd::Field => {
            recs.push(vec![
                ("field", Val::Str(field.to_string())),
                ("p", Val::Int(field.p() as i64)),
                ("nu", Val::Int(field.nu() as i64)),
                ("k", Val::Int(k as i64)),
                ("modulus", Val::Ints(field.modulus().iter().map(|&a| a as i64).collect())),
            ]);
        }
        Cmd::Cf { x, terms } => {
            let x = parse_element(&field, x, cfg.prec)?;
            let cf = cf_expand(&x, *terms)?;
            for (i, (a, (p, q))) in cf.quotients.iter().zip(convergents(&cf)).enumerate() {
                recs.push(vec![
                    ("i", Val::Int(i as i64)),
                    ("a", Val::Str(a.to_string())),
                    ("p", Val::Str(p.to_string())),
                    ("q", Val::Str(q.to_string())),
                ]);
            }
        }
        Cmd::Witness { x, bound } => {
            let x = parse_vec(&field, x, cfg.prec)?;
            let w = best_witness(&x, *bound)?;
            recs.push(vec![
                ("p", Val::Str(w.p.to_string())),
                ("q", Val::Str(w.q.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";"))),
                ("err_exp", norm_val(w.err)),
                ("pi_plus_exp", norm_val(w.pi_plus_q)),
            ]);
        }
        Cmd::Reduce { basis, random, dim, deg } => match (basis, random) {
            (Some(s), None) => {
                let b = LatticeBasis::new(parse_matrix(&field, s, cfg.prec)?)?;
                let r = reduce_basis(&b)?;
                let reduced = LatticeBasis::new(r.rows.clone())?;
                recs.push(vec![
                    ("minima", Val::Ints(r.minima.iter().map(|m| m.exp().expect("nonzero")).collect())),
                    ("delta_exp", norm_val(r.minima[0])),
                    ("det_exp", norm_val(det_norm(&b)?)),
                    ("basis", Val::Str(reduced.to_string())),
                ]);
            }
            (None, Some(count)) => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
                let lattices: Vec<LatticeBasis> =
                    (0..*count).map(|_| random_unimodular(&field, *dim, *deg, &mut rng)).collect();
                let rows = collect(par_map(jobs, &lattices, reduce_basis))?;
                for (i, r) in rows.iter().enumerate() {
                    let ex: Vec<i64> = r.minima.iter().map(|m| m.exp().expect("nonzero")).collect();
                    recs.push(vec![
                        ("i", Val::Int(i as i64)),
                        ("minima", Val::Ints(ex.clone())),
                        ("product_exp", Val::Int(ex.iter().sum())),
                    ]);
                }
            }
            _ => return Err(Error::InvalidArgument("pass exactly one of --basis and --random".into())),
        },
        Cmd::Traj { x, total, variant, summary } => {
            let x = parse_vec(&field, x, cfg.prec)?;
            let v = match variant {
                Variant::One => ScanVariant::OneParam,
                Variant::Multi => ScanVariant::Multi,
            };
            let ts = scan_flows(x.len(), *total, v);
            let ds = collect(par_map(jobs, &ts, |t| traj_delta(&x, t)))?;
            let rows: Vec<(FlowVector, NormExp)> = ts.into_iter().zip(ds).collect();
            if *summary {
                let r = scan_report(x.len(), rows)?;
                recs.push(vec![
                    ("min_delta_exp", norm_val(r.min_delta)),
                    ("argmin_t", flow_val(&r.argmin_t)),
                    ("floor_c_exp", norm_val(r.floor_c)),
                ]);
            } else {
                for (t, d) in rows {
                    recs.push(vec![("t", flow_val(&t)), ("delta_exp", norm_val(d))]);
                }
            }
        }
        Cmd::Link { q, eps, x } => {
            let q = parse_poly_vec(&field, q)?;
            let eps = parse_rational(eps)?;
            let p = link_params(&q, eps)?;
            let mut rec = vec![
                ("m", Val::Int(p.m)),
                ("r_exp", norm_val(p.r)),
                ("t", flow_val(&p.t)),
                ("gamma", Val::Str(p.gamma.map_or("none".into(), |g| g.to_string()))),
            ];
            if let Some(x) = x {
                let x = parse_vec(&field, x, cfg.prec)?;
                let w = witness_for(&x, &q)?;
                let r = verify_link(&x, &w, eps)?;
                rec.extend([
                    ("err_exp", norm_val(w.err)),
                    ("delta_exp", norm_val(r.delta)),
                    ("witness_norm_exp", norm_val(r.witness_vector_norm)),
                    ("holds", Val::Bool(r.holds)),
                ]);
            }
            recs.push(rec);
        }
        Cmd::Nondeg { f, at, l_max, include_zero } => {
            let f = parse_map(&field, f, None)?;
            let x0 = match at {
                Some(s) => parse_vec(&field, s, cfg.prec)?.0,
                None => vec![LaurentBall::zero(&field); f.d],
            };
            let l = nondeg_order(&f, &x0, *l_max, *include_zero)?;
            recs.push(vec![("l", l.map_or(Val::Null, |l| Val::Int(l as i64)))]);
        }
        Cmd::Good { f, c, alpha, eps, ball } => {
            let f = parse_mpoly(&field, f, None)?;
            let b = ball_of(&field, f.nvars(), ball, cfg.prec)?;
            let c = rational_pow(parse_rational(c)?)?;
            let r = check_good(&f, &b, &c, parse_rational(alpha)?, &eps_list(eps)?, cfg.res)?;
            for e in &r.entries {
                let mut rec = vec![("eps_exp", norm_val(e.eps))];
                rec.extend(measure_fields("", &e.sublevel));
                rec.extend(bound_fields("bound", &e.bound, k));
                rec.push(("pass", Val::Bool(e.pass)));
                recs.push(rec);
            }
            let mut rec = vec![("sup_exp", norm_val(r.sup_norm)), ("overall", Val::Bool(r.overall))];
            if let Some(ce) = &r.c_emp {
                rec.extend(bound_fields("c_emp", ce, k));
            }
            recs.push(rec);
        }
        Cmd::Family { deg_x, deg_coef, alpha, eps } => {
            let alpha = parse_rational(alpha)?;
            let eps = eps_list(eps)?;
            let size = family_size(&field, *deg_x, *deg_coef);
            let block = 729u64;
            let blocks: Vec<std::ops::Range<u64>> =
                (0..size.div_ceil(block)).map(|i| i * block..((i + 1) * block).min(size)).collect();
            let parts = collect(par_map(jobs, &blocks, |r| {
                family_sweep(&field, *deg_x, *deg_coef, r.clone(), alpha, &eps, cfg.res)
            }))?;
            let mut rep = FamilyReport::empty();
            for p in parts {
                rep.merge(p);
            }
            let mut rec = vec![("members", Val::Int(rep.members as i64)), ("max_digit", Val::Int(rep.max_digit))];
            if let Some(ce) = &rep.c_emp {
                rec.extend(bound_fields("c_emp", ce, k));
            }
            rec.push(("worst", Val::Str(rep.worst.clone().unwrap_or_default())));
            recs.push(rec);
        }
        Cmd::Measure { f, t, eps, ball } => {
            let f = parse_map(&field, f, None)?;
            let b = ball_of(&field, f.d, ball, cfg.prec)?;
            let t = flow_of(t)?;
            let m = measure_e(&f, &b, &t, NormExp::Finite(*eps), cfg.res)?;
            let mut rec = vec![("t", flow_val(&t)), ("eps_exp", Val::Int(*eps))];
            rec.extend(measure_fields("", &m));
            recs.push(rec);
        }
        Cmd::Impmain { f, total, eps, c, alpha, rho, ball } => {
            let f = parse_map(&field, f, None)?;
            let b = ball_of(&field, f.d, ball, cfg.prec)?;
            let (c, alpha) = constants(&f, &b, c, alpha)?;
            let eps = eps_list(eps)?;
            let rho = NormExp::Finite(*rho);
            let ts = crate::flows::flow_vectors(f.n(), *total);
            let rows = collect(par_map(jobs, &ts, |t| impmain_rows(&f, &b, t, &eps, &c, alpha, rho, cfg.res)))?;
            let rep = impmain_report(rows.into_iter().flatten().collect(), c, alpha, rho);
            for r in &rep.rows {
                let mut rec = vec![("t", flow_val(&r.t)), ("eps_exp", norm_val(r.eps))];
                rec.extend(measure_fields("", &r.measure));
                rec.extend(bound_fields("bound", &r.bound, k));
                rec.push(("pass", Val::Bool(r.pass)));
                rec.push(("in_range", Val::Bool(r.in_range)));
                recs.push(rec);
            }
            let mut rec = vec![("overall", Val::Bool(rep.overall)), ("alpha", Val::Str(rep.alpha.to_string()))];
            rec.extend(bound_fields("c", &rep.c, k));
            rec.push(("rho_exp", norm_val(rep.rho)));
            recs.push(rec);
        }
        Cmd::Bc { f, gamma, total, ball } => {
            let f = parse_map(&field, f, None)?;
            let b = ball_of(&field, f.d, ball, cfg.prec)?;
            let gamma = parse_rational(gamma)?;
            let qs: Vec<u64> = (1..=*total).collect();
            let shells = collect(par_map(jobs, &qs, |&q| bc_shell(&f, &b, gamma, q, cfg.res)))?;
            for r in bc_rows(k, gamma, shells) {
                let mut rec = vec![("q", Val::Int(r.q as i64)), ("delta_exp", Val::Int(r.delta_exp))];
                rec.extend(measure_fields("shell", &r.shell));
                rec.extend(measure_fields("partial", &r.partial));
                recs.push(rec);
            }
        }
        Cmd::Conditions { f, t, rho, c, alpha, eps, degree_bound, ball } => {
            let f = parse_map(&field, f, None)?;
            let b = ball_of(&field, f.d, ball, cfg.prec)?;
            let (c, alpha) = constants(&f, &b, c, alpha)?;
            let h = HSpec::new(f, flow_of(t)?)?;
            let eps = eps_list(eps)?;
            let rho = NormExp::Finite(*rho);
            let subs = enumerate_primitive(&field, h.m(), h.m(), *degree_bound);
            let rows =
                collect(par_map(jobs, &subs, |s| check_submodule(&b, &h, s.clone(), rho, &c, alpha, &eps, cfg.res)))?;
            let rep = conditions_report(rows, rho, *degree_bound);
            for r in &rep.rows {
                recs.push(vec![
                    ("submodule", Val::Str(r.sub.to_string())),
                    ("rank", Val::Int(r.sub.rank as i64)),
                    ("sup_exp", norm_val(r.good.sup_norm)),
                    ("good", Val::Bool(r.good.overall)),
                    ("sup_ok", Val::Bool(r.sup_ok)),
                    ("below_rho", Val::Bool(r.below_rho)),
                ]);
            }
            recs.push(vec![
                ("scanned", Val::Int(rep.rows.len() as i64)),
                ("good_ok", Val::Bool(rep.good_ok)),
                ("sup_ok", Val::Bool(rep.sup_ok)),
                ("below_rho_count", Val::Int(rep.below_rho_count as i64)),
                ("truncated", Val::Bool(rep.truncated)),
            ]);
        }
    }
    for r in recs {
        if let Err(e) = o.emit(r) {
            return Ok(Err(e));
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["ffdioph".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(&argv, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn par_map_keeps_order() {
        let xs: Vec<u64> = (0..100).collect();
        assert_eq!(par_map(8, &xs, |x| x * x), xs.iter().map(|x| x * x).collect::<Vec<_>>());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["traj", "--field", "4", "--x", "0", "--T", "3"]).0, 2);
        assert_eq!(run_str(&["bogus"]).0, 2);
        assert_eq!(run_str(&["field"]).0, 2);
        assert_eq!(run_str(&["--field", "3", "traj", "--x", "x+", "--T", "3"]).0, 2);
    }

    #[test]
    fn reduce_fixture() {
        let (code, out, _) = run_str(&["reduce", "--field", "3", "--basis", "X,0;0,X^-1"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"minima\":[-1,1]"), "{out}");
    }

    #[test]
    fn good_prints_pass() {
        let (code, out, _) = run_str(&["good", "--field", "3", "--f", "x^2", "--C", "1", "--alpha", "1/2"]);
        assert_eq!(code, 0);
        assert!(out.lines().last().unwrap().contains("\"overall\":true"), "{out}");
        assert_eq!(out.lines().filter(|l| l.contains("\"pass\":true")).count(), 3);
    }

    #[test]
    fn computational_failure_exits_one() {
        let (code, _, err) = run_str(&["traj", "--field", "3", "--x", "periodic:[X]", "--T", "30", "--prec", "10"]);
        assert_eq!(code, 1, "{err}");
    }
}
