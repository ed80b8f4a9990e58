//! `essmin`: exact degrees, torsion closures, obstruction degrees and
//! Lehmer-type height bounds for translates of subtori, plus the fully
//! computable function-field counterpart. JSON in, JSON out, deterministic
//! for a fixed seed.

mod instance;

use clap::{Args, Parser, Subcommand};
use essmin_core::funfield::{ff_torsion_closure, ff_verify_bounds, hyperform_invariants, FFPoint};
use essmin_core::heights::{
    abelian_constant, classical_lower_bounds, cor15_bound, is_root_of_unity, mahler_height,
    rational_point_height, schinzel_constant, thm13_bound, BoundReport,
};
use essmin_core::interval::{ln2, Interval};
use essmin_core::torus::{
    binomial_generators, degree_bounds_eq6, obstruction_degree, torsion_closure, translate_degree,
    Obstruction, TorusTranslate,
};
use essmin_core::verify::{run_verify_suite, VerifyConfig};
use essmin_core::{rat_to_string, Int, Rat};
use instance::{parse_instance, parse_mk_spec, Instance, MkSpec};
use serde_json::{json, Value};

/// Exit code for "infinite / vacuous" results (omega = infinity, verification
/// vacuous, and the like).
const EXIT_INFINITE: i32 = 2;

#[derive(Parser)]
#[command(name = "essmin", version, about = "Exact obstruction degrees and height bounds for torus translates")]
struct Cli {
    /// Working precision in bits for certified interval arithmetic
    /// (falls back to ESSMIN_PRECISION_BITS, then 128).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Optional JSON config file ({"precision_bits": .., "seed": ..,
    /// "samples": ..}).
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Torus-translate computations.
    Torus {
        #[command(subcommand)]
        cmd: TorusCmd,
    },
    /// Lehmer-type lower bounds.
    Bound {
        #[command(subcommand)]
        cmd: BoundCmd,
    },
    /// Heights of algebraic numbers and rational points.
    Height {
        #[command(subcommand)]
        cmd: HeightCmd,
    },
    /// Function-field (Q(t)) computations.
    Ff {
        #[command(subcommand)]
        cmd: FfCmd,
    },
    /// Property verification suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum TorusCmd {
    /// Degree of the projective closure of the translate.
    Degree(FileArg),
    /// Smallest torsion variety containing the translate.
    Closure(FileArg),
    /// Obstruction degree of X inside Y (Y from `other`, default: the
    /// torsion closure of X).
    Obstruct(FileArg),
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Headline lower bound with the sharp structural constant.
    Thm13(BoundArgs),
    /// Codimension-form lower bound.
    Cor15(BoundArgs),
}

#[derive(Subcommand)]
enum HeightCmd {
    /// Certified Mahler height of the roots of an integer polynomial.
    Mahler(MahlerArgs),
    /// Exact Weil height of a rational point.
    Point(FileArg),
}

#[derive(Subcommand)]
enum FfCmd {
    /// Height of a point over Q(t).
    Height(FileArg),
    /// Closure over the constant field.
    Closure(FileArg),
    /// Verify the transplanted height inequalities on sampled points.
    Verify(FfVerifyArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every property suite.
    All(VerifyArgs),
}

#[derive(Args)]
struct FileArg {
    file: String,
}

#[derive(Args)]
struct BoundArgs {
    file: String,
    /// m(K): one of log2, schinzel, abelian, dobrowolski:<D>[:<c>], or a rational.
    #[arg(long = "m-k")]
    m_k: Option<String>,
}

#[derive(Args)]
struct MahlerArgs {
    file: String,
    /// Interval width target, e.g. 1/1000000000000.
    #[arg(long)]
    tolerance: Option<String>,
}

#[derive(Args)]
struct FfVerifyArgs {
    file: String,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    degree_bound: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long, default_value_t = 5)]
    max_ambient: usize,
}

#[derive(Clone)]
struct Ctx {
    bits: u32,
    /// True when --precision was given explicitly (beats per-file settings).
    bits_fixed: bool,
    seed: u64,
    samples: usize,
    digits: u32,
}

impl Ctx {
    /// Per-file precision applies unless the flag pinned it.
    fn with_file(&self, parsed: &instance::ParsedFile) -> Ctx {
        let mut c = self.clone();
        if !c.bits_fixed {
            if let Some(p) = parsed.precision {
                c.bits = p;
            }
        }
        c
    }
}

fn fail(msg: impl std::fmt::Display) -> ! {
    eprintln!("{}", json!({ "error": msg.to_string() }));
    std::process::exit(1);
}

fn read_file(path: &str) -> String {
    match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => fail(format!("cannot read {path}: {e}")),
    }
}

fn load(path: &str) -> instance::ParsedFile {
    match parse_instance(&read_file(path)) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.message, "path": e.path }));
            std::process::exit(1);
        }
    }
}

// ---- JSON rendering ---------------------------------------------------------

fn int_json(x: &Int) -> Value {
    Value::String(x.to_string())
}

fn rat_json(x: &Rat) -> Value {
    Value::String(rat_to_string(x))
}

fn interval_json(iv: &Interval, symbolic: Option<&str>, digits: u32) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("decimal".into(), Value::String(iv.decimal(digits)));
    m.insert("lo".into(), rat_json(iv.lo()));
    m.insert("hi".into(), rat_json(iv.hi()));
    if let Some(s) = symbolic {
        m.insert("symbolic".into(), Value::String(s.to_string()));
    }
    Value::Object(m)
}

fn matrix_json(rows: &[Vec<Int>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(int_json).collect()))
            .collect(),
    )
}

fn translate_json(x: &TorusTranslate) -> Value {
    json!({
        "ambient": x.ambient_dim(),
        "dim": x.dim(),
        "gamma_basis": matrix_json(&x.gamma().basis_rows()),
        "torsion": {
            "modulus": int_json(x.point().modulus()),
            "exponents": Value::Array(x.point().torsion_exponents().iter().map(int_json).collect()),
        },
        "generators": Value::Array(x.point().generators().iter().map(|g| json!({
            "label": g.label,
            "value": g.value.as_ref().map(rat_to_string),
        })).collect()),
        "exponent_matrix": matrix_json(&(0..x.ambient_dim()).map(|i| x.point().exponent_matrix().row_vec(i)).collect::<Vec<_>>()),
    })
}

fn bound_report_json(r: &BoundReport, ctx: &Ctx) -> Value {
    json!({
        "ambient": r.ambient,
        "dim_x": r.dim_x,
        "dim_u": r.dim_u,
        "deg_x": int_json(&r.deg_x),
        "deg_u": int_json(&r.deg_u),
        "omega": r.omega.as_ref().map(int_json),
        "omega_infinite": r.omega.is_none() && r.torsion_variety,
        "lambda": r.lambda.as_ref().map(|l| Value::Array(l.iter().map(int_json).collect())),
        "m_k": interval_json(&r.m_k, Some(&r.m_k_symbolic), ctx.digits),
        "torsion_variety": r.torsion_variety,
        "conditional_on_independence": r.conditional_on_independence,
        "point_height": r.point_height.as_ref().map(|h| json!({
            "exact": h.symbolic(),
            "value": interval_json(&h.interval(ctx.bits), Some(&h.symbolic()), ctx.digits),
        })),
        "bounds": Value::Array(r.bounds.iter().map(|b| json!({
            "name": b.name,
            "symbolic": b.symbolic,
            "value": interval_json(&b.value, None, ctx.digits),
            "holds_for_point": b.holds_for_point,
        })).collect()),
    })
}

fn resolve_mk(spec: &MkSpec, ctx: &Ctx) -> (Interval, String) {
    match spec {
        MkSpec::Log2 => (ln2(ctx.bits), "log(2)".to_string()),
        MkSpec::Schinzel => (schinzel_constant(ctx.bits), "1/2 log((1+sqrt(5))/2)".to_string()),
        MkSpec::Abelian => (abelian_constant(ctx.bits), "log(5)/12".to_string()),
        MkSpec::Value(v) => (Interval::exact(v.clone()), rat_to_string(v)),
        MkSpec::Dobrowolski { degree, c } => {
            let b = classical_lower_bounds(*degree, c, ctx.bits)
                .unwrap_or_else(|e| fail(e));
            (
                b.dobrowolski,
                format!("dobrowolski(D={degree}, c={})", rat_to_string(c)),
            )
        }
    }
}

fn as_torus(inst: &Instance) -> TorusTranslate {
    match inst {
        Instance::Torus { x, .. } => x.clone(),
        Instance::BoundQuery { x, .. } => x.clone(),
        Instance::Point { coordinates } => TorusTranslate::from_rational_point(coordinates)
            .unwrap_or_else(|e| fail(e)),
        _ => fail("this command needs a torus or point instance"),
    }
}

fn main() {
    let cli = Cli::parse();
    let mut ctx = Ctx {
        bits: std::env::var("ESSMIN_PRECISION_BITS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(essmin_core::interval::DEFAULT_BITS),
        bits_fixed: false,
        seed: 1729,
        samples: 100,
        digits: 12,
    };
    if let Some(cfg_path) = &cli.config {
        let v: Value = serde_json::from_str(&read_file(cfg_path))
            .unwrap_or_else(|e| fail(format!("invalid config: {e}")));
        if let Some(b) = v.get("precision_bits").and_then(Value::as_u64) {
            ctx.bits = b as u32;
        }
        if let Some(s) = v.get("seed").and_then(Value::as_u64) {
            ctx.seed = s;
        }
        if let Some(s) = v.get("samples").and_then(Value::as_u64) {
            ctx.samples = s as usize;
        }
    }
    if let Some(b) = cli.precision {
        ctx.bits = b;
        ctx.bits_fixed = true;
    }

    let (result, code) = match &cli.command {
        Command::Torus { cmd } => run_torus(cmd, &ctx),
        Command::Bound { cmd } => run_bound(cmd, &ctx),
        Command::Height { cmd } => run_height(cmd, &ctx),
        Command::Ff { cmd } => run_ff(cmd, &ctx),
        Command::Verify { cmd } => run_verify(cmd, &ctx),
    };
    println!("{}", serde_json::to_string_pretty(&result).expect("serializable"));
    std::process::exit(code);
}

fn run_torus(cmd: &TorusCmd, _ctx: &Ctx) -> (Value, i32) {
    match cmd {
        TorusCmd::Degree(f) => {
            let parsed = load(&f.file);
            let x = as_torus(&parsed.instance);
            let deg = translate_degree(&x).unwrap_or_else(|e| fail(e));
            let (lo, _, hi) = degree_bounds_eq6(&x).unwrap_or_else(|e| fail(e));
            (
                json!({
                    "command": "torus degree",
                    "degree": int_json(&deg),
                    "covolume_sandwich_sq": { "lower": rat_json(&lo), "upper": rat_json(&hi) },
                    "translate": translate_json(&x),
                }),
                0,
            )
        }
        TorusCmd::Closure(f) => {
            let parsed = load(&f.file);
            let x = as_torus(&parsed.instance);
            let u = torsion_closure(&x).unwrap_or_else(|e| fail(e));
            let deg = translate_degree(&u.translate).unwrap_or_else(|e| fail(e));
            let gens: Vec<Value> = binomial_generators(&u.translate)
                .iter()
                .map(|(l, v)| {
                    json!({
                        "lambda": Value::Array(l.iter().map(int_json).collect()),
                        "value": v.symbolic(),
                        "rational": v.rational.as_ref().map(rat_to_string),
                    })
                })
                .collect();
            (
                json!({
                    "command": "torus closure",
                    "gamma_u_basis": matrix_json(&u.translate.gamma().basis_rows()),
                    "dim_u": u.translate.dim(),
                    "degree": int_json(&deg),
                    "subtorus": u.is_subtorus,
                    "binomial_generators": gens,
                }),
                0,
            )
        }
        TorusCmd::Obstruct(f) => {
            let parsed = load(&f.file);
            let Instance::Torus { x, other } = &parsed.instance else {
                fail("torus obstruct needs a torus instance");
            };
            let y = match other {
                Some(y) => y.clone(),
                None => torsion_closure(x).unwrap_or_else(|e| fail(e)).translate,
            };
            match obstruction_degree(x, &y).unwrap_or_else(|e| fail(e)) {
                Obstruction::Infinite => (
                    json!({
                        "command": "torus obstruct",
                        "omega": Value::Null,
                        "infinite": true,
                    }),
                    EXIT_INFINITE,
                ),
                Obstruction::Finite { omega, lambda } => (
                    json!({
                        "command": "torus obstruct",
                        "omega": int_json(&omega),
                        "infinite": false,
                        "lambda": Value::Array(lambda.iter().map(int_json).collect()),
                        "deg_y": int_json(&translate_degree(&y).unwrap_or_else(|e| fail(e))),
                    }),
                    0,
                ),
            }
        }
    }
}

fn run_bound(cmd: &BoundCmd, ctx: &Ctx) -> (Value, i32) {
    let (file, flag_mk, name) = match cmd {
        BoundCmd::Thm13(a) => (&a.file, &a.m_k, "thm13"),
        BoundCmd::Cor15(a) => (&a.file, &a.m_k, "cor15"),
    };
    let parsed = load(file);
    let ctx = &ctx.with_file(&parsed);
    let x = as_torus(&parsed.instance);
    let spec = match flag_mk {
        Some(s) => parse_mk_spec(s).unwrap_or_else(|e| fail(e)),
        None => match &parsed.instance {
            Instance::BoundQuery { m_k: Some(m), .. } => m.clone(),
            _ => MkSpec::Log2,
        },
    };
    let (m_k, sym) = resolve_mk(&spec, ctx);
    let report = match name {
        "thm13" => thm13_bound(&x, &m_k, &sym, ctx.bits),
        _ => cor15_bound(&x, &m_k, &sym, ctx.bits),
    }
    .unwrap_or_else(|e| fail(e));
    let code = if report.torsion_variety { EXIT_INFINITE } else { 0 };
    (
        json!({
            "command": format!("bound {name}"),
            "report": bound_report_json(&report, ctx),
        }),
        code,
    )
}

fn run_height(cmd: &HeightCmd, ctx: &Ctx) -> (Value, i32) {
    match cmd {
        HeightCmd::Mahler(a) => {
            let parsed = load(&a.file);
            let Instance::Algebraic(p) = &parsed.instance else {
                fail("height mahler needs an algebraic instance ({\"kind\": \"algebraic\", ...})");
            };
            let tol = match &a.tolerance {
                None => Rat::new(Int::from(1), Int::from(10u64.pow(12))),
                Some(t) => instance::parse_rat_str(t, "--tolerance").unwrap_or_else(|e| fail(e)),
            };
            let h = mahler_height(p, &tol, 1 << 15).unwrap_or_else(|e| fail(e));
            (
                json!({
                    "command": "height mahler",
                    "degree": p.degree(),
                    "height": interval_json(&h, None, ctx.digits),
                    "is_root_of_unity": is_root_of_unity(p),
                }),
                0,
            )
        }
        HeightCmd::Point(f) => {
            let parsed = load(&f.file);
            let ctx = &ctx.with_file(&parsed);
            let Instance::Point { coordinates } = &parsed.instance else {
                fail("height point needs a point instance");
            };
            let h = rational_point_height(coordinates).unwrap_or_else(|e| fail(e));
            (
                json!({
                    "command": "height point",
                    "exact": h.symbolic(),
                    "height": interval_json(&h.interval(ctx.bits), Some(&h.symbolic()), ctx.digits),
                    "zero": h.is_zero(),
                }),
                0,
            )
        }
    }
}

fn run_ff(cmd: &FfCmd, ctx: &Ctx) -> (Value, i32) {
    match cmd {
        FfCmd::Height(f) => {
            let parsed = load(&f.file);
            match &parsed.instance {
                Instance::FfPoint { projective, .. } => {
                    let point = FFPoint::from_affine(projective).unwrap_or_else(|e| fail(e));
                    (
                        json!({
                            "command": "ff height",
                            "height": point.height(),
                            "coordinates": Value::Array(
                                point.coords().iter().map(|c| Value::String(c.to_string_var("t"))).collect()
                            ),
                        }),
                        0,
                    )
                }
                Instance::HyperForm(form) => {
                    // height and degree of the hypersurface divisor
                    let (h, deg, note) = hyperform_invariants(form);
                    (
                        json!({
                            "command": "ff height",
                            "hyperform": true,
                            "height": h,
                            "degree": deg,
                            "note": note,
                        }),
                        0,
                    )
                }
                _ => fail("ff height needs an ff-point or hyperform instance"),
            }
        }
        FfCmd::Closure(f) => {
            let parsed = load(&f.file);
            let Instance::FfPoint { translate, .. } = &parsed.instance else {
                fail("ff closure needs an ff-point instance");
            };
            let u = ff_torsion_closure(translate).unwrap_or_else(|e| fail(e));
            let deg = essmin_core::torus::degree_from_gamma(u.translate.gamma())
                .unwrap_or_else(|e| fail(e));
            (
                json!({
                    "command": "ff closure",
                    "gamma_u_basis": matrix_json(&u.translate.gamma().basis_rows()),
                    "dim_u": u.translate.dim(),
                    "degree": int_json(&deg),
                    "constants": Value::Array(u.constants.iter().map(rat_json).collect()),
                    "defined_over_k": u.defined_over_k,
                }),
                0,
            )
        }
        FfCmd::Verify(a) => {
            let parsed = load(&a.file);
            let Instance::FfPoint { translate, .. } = &parsed.instance else {
                fail("ff verify needs an ff-point instance");
            };
            let samples = a.samples.unwrap_or(ctx.samples);
            let seed = a.seed.or(parsed.seed).unwrap_or(ctx.seed);
            let report = ff_verify_bounds(translate, samples, seed, a.degree_bound)
                .unwrap_or_else(|e| fail(e));
            let code = if report.vacuous { EXIT_INFINITE } else { 0 };
            let holds = report.violations == 0;
            let holds_main = report.samples.iter().all(|s| s.main_bound_holds);
            let holds_monomial = report.samples.iter().all(|s| s.monomial_bound_holds);
            (
                json!({
                    "command": "ff verify",
                    "vacuous": report.vacuous,
                    "holds": holds,
                    "holds_main_bound": holds_main,
                    "holds_monomial_bound": holds_monomial,
                    "violations": report.violations,
                    "samples": report.samples.len(),
                    "deg_u": report.deg_u.as_ref().map(int_json),
                    "omega": report.omega.as_ref().map(int_json),
                    "lambda": report.lambda.as_ref().map(|l| Value::Array(l.iter().map(int_json).collect())),
                    "bound_sq": report.bound_sq.as_ref().map(rat_json),
                    "lambda_norm_sq": report.lambda_norm_sq.as_ref().map(rat_json),
                    "monomial_height": report.monomial_height.as_ref().map(int_json),
                    "heights": Value::Array(report.samples.iter().map(|s| int_json(&s.height)).collect()),
                    "seed": seed,
                }),
                code,
            )
        }
    }
}

fn run_verify(cmd: &VerifyCmd, ctx: &Ctx) -> (Value, i32) {
    match cmd {
        VerifyCmd::All(a) => {
            let cfg = VerifyConfig {
                seed: a.seed.unwrap_or(ctx.seed),
                instances: a.instances.unwrap_or(ctx.samples),
                max_ambient: a.max_ambient,
                bits: ctx.bits,
            };
            let report = run_verify_suite(&cfg);
            let props: Vec<Value> = report
                .properties
                .iter()
                .map(|p| {
                    json!({
                        "name": p.name,
                        "cases": p.cases,
                        "failures": p.failures,
                        "counterexamples": p.counterexamples,
                    })
                })
                .collect();
            let ok = report.all_pass();
            let v = json!({
                "command": "verify all",
                "seed": report.seed,
                "instances": cfg.instances,
                "all_pass": ok,
                "total_failures": report.total_failures(),
                "properties": props,
            });
            (v, if ok { 0 } else { 1 })
        }
    }
}
