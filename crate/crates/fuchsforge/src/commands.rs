//! Command-line surface and dispatch.

use std::fmt::Write as _;
use std::io::Read as _;

use clap::{Parser, Subcommand, ValueEnum};
use fuchsforge_core::euclid::{conjugate_by, div_rem, gcd_bezout, invert_conjugacy, lcm};
use fuchsforge_core::fuchs::{natural_order, pre_fuchsian_shift, resonance_orders, resonance_structure};
use fuchsforge_core::normal_form::{
    eulerize_nonresonant, formal_factorize, minimal_affine_nf, minimal_reducible_nf, truncate_equiv, verify_conjugacy,
    ConjugacyReport, Flavor, NormalFormResult,
};
use fuchsforge_core::solutions::{classify_apparent, frobenius_solution};
use fuchsforge_core::{Error, Field, LaurentSeries, OperatorSeries, Poly, Scalar};
use serde_json::{json, Value};

use crate::dsl::{self, Ast};
use crate::json::{self as js, BundleJson};
use crate::{exit, CliError};

pub const TRUNC_ENV: &str = "FUCHSFORGE_TRUNC";

#[derive(Debug, Parser)]
#[command(name = "fuchsforge", version, about = "Exact normal forms of Fuchsian differential operators")]
pub struct Cli {
    /// Truncation order T (default max(16, 2N+2), or $FUCHSFORGE_TRUNC).
    #[arg(short = 'N', long, global = true, allow_negative_numbers = true)]
    pub trunc: Option<i64>,
    /// Coefficient field.
    #[arg(long, global = true, default_value = "Q")]
    pub field: Field,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Comma-separated roots of the Euler part, e.g. "0,1" or "1/2+1 i,1/2-1 i".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub roots: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NfKind {
    Euler,
    Poly,
    Minimal,
    Reducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Weyl,
    Fuchsian,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print an expression in canonical form.
    Normalize { expr: String },
    /// Product A·B.
    Mul { a: String, b: String },
    /// Right division L = Q·M + R.
    Divrem { l: String, m: String },
    /// Right gcd with Bézout cofactors U·L + V·M = G.
    Gcd { l: String, m: String },
    /// Least common left multiple.
    Lcm { l: String, m: String },
    /// M and K with M·H = K·L.
    Conjugate { l: String, h: String },
    /// Inverse intertwiner V with L·V = W·M.
    InvertConjugacy { l: String, m: String, h: String },
    /// Fuchsian shape, order and Euler part.
    FuchsianCheck { l: String },
    /// Resonance orders of the Euler part.
    Resonances { l: String },
    /// Normal form with conjugacy certificate.
    Nf {
        #[arg(value_enum)]
        kind: NfKind,
        l: String,
    },
    /// Formal factorization into first-order factors.
    Factor { l: String },
    /// Frobenius series solutions.
    Solve {
        l: String,
        /// Only this exponent (default: every root of the Euler part).
        #[arg(long, allow_hyphen_values = true)]
        exponent: Option<String>,
    },
    /// Apparent-singularity classification.
    Classify { l: String },
    /// Check a normal-form bundle (file path or `-` for stdin).
    Verify {
        bundle: String,
        #[arg(long, value_enum, default_value_t = FlavorArg::Fuchsian)]
        flavor: FlavorArg,
    },
}

/// Rendered result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Rendered {
    json: Value,
    text: String,
    code: i32,
}

impl Rendered {
    fn ok(json: Value, text: String) -> Self {
        Rendered { json, text, code: exit::SUCCESS }
    }
}

struct Ctx {
    field: Field,
    trunc: Option<i64>,
    roots: Option<Vec<Scalar>>,
}

pub fn run(cli: &Cli) -> Outcome {
    let result = dispatch(cli);
    match (result, cli.format) {
        (Ok(r), Format::Json) => Outcome {
            stdout: serde_json::to_string_pretty(&r.json).expect("serializable") + "\n",
            stderr: String::new(),
            code: r.code,
        },
        (Ok(r), Format::Text) => Outcome { stdout: r.text, stderr: String::new(), code: r.code },
        (Err(e), Format::Json) => {
            let v = json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() } });
            Outcome {
                stdout: serde_json::to_string_pretty(&v).expect("serializable") + "\n",
                stderr: String::new(),
                code: e.exit_code(),
            }
        }
        (Err(e), Format::Text) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn env_trunc() -> Result<Option<i64>, CliError> {
    match std::env::var(TRUNC_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Input(format!("{TRUNC_ENV}={v} is not an integer"))),
        Err(_) => Ok(None),
    }
}

fn parse_roots(src: &str, field: Field) -> Result<Vec<Scalar>, CliError> {
    src.split(',')
        .map(|item| {
            let item = item.trim();
            if let Ok(s) = item.parse::<Scalar>() {
                return Ok(s);
            }
            let op = dsl::evaluate_exact(&dsl::parse(item)?, field)?;
            match op.terms().filter(|(_, p)| !p.is_zero()).collect::<Vec<_>>().as_slice() {
                [] => Ok(Scalar::zero()),
                [(0, p)] if p.is_constant() => Ok(p.coeff(0)),
                _ => Err(CliError::Input(format!("root `{item}` is not a constant"))),
            }
        })
        .map(|r| {
            let r = r?;
            if field.contains(&r) {
                Ok(r)
            } else {
                Err(CliError::Input(format!("root `{r}` is not in {}", field.name())))
            }
        })
        .collect()
}

/// Resonance bound of an exactly known input, 0 when it has no Euler shape.
fn bound_of(op: &OperatorSeries) -> i64 {
    if op.kmin() < 0 || !op.is_fuchsian() {
        return 0;
    }
    op.eulerization().ok().and_then(|p0| resonance_orders(&p0).ok()).map_or(0, |r| r.bound)
}

impl Ctx {
    /// Parses the inputs and brings them to the common truncation order.
    fn operators(&self, srcs: &[&str]) -> Result<(Vec<OperatorSeries>, i64), CliError> {
        let asts: Vec<Ast> = srcs.iter().map(|s| dsl::parse(s)).collect::<Result<_, _>>()?;
        let exact: Vec<OperatorSeries> =
            asts.iter().map(|a| dsl::evaluate_exact(a, self.field)).collect::<Result<_, _>>()?;
        let trunc = match self.trunc {
            Some(t) => t,
            None => {
                let n = exact.iter().map(bound_of).max().unwrap_or(0);
                16.max(2 * n + 2)
            }
        };
        let ops = exact
            .into_iter()
            .map(|v| if v.trunc() >= trunc { v.truncate(trunc) } else { v.extend_exact(trunc) })
            .collect();
        Ok((ops, trunc))
    }

    fn one(&self, src: &str) -> Result<(OperatorSeries, i64), CliError> {
        let (mut v, t) = self.operators(&[src])?;
        Ok((v.pop().unwrap(), t))
    }

    /// User roots, checked against the Euler part by exact multiplication.
    fn checked_roots(&self, l: &OperatorSeries) -> Result<Option<Vec<Scalar>>, CliError> {
        let Some(roots) = &self.roots else {
            return Ok(None);
        };
        let p0 = l.eulerization()?;
        let lc = p0.leading().ok_or(Error::ZeroLeadingCoefficient)?;
        if Poly::from_roots(roots).scale(lc) != p0 {
            return Err(Error::RootsMismatch.into());
        }
        Ok(Some(roots.clone()))
    }

    fn op_json(&self, l: &OperatorSeries) -> Value {
        serde_json::to_value(js::operator_to_json(l, self.field)).unwrap()
    }
}

fn op_line(name: &str, l: &OperatorSeries) -> String {
    format!("{name}: {}  [trunc {}]\n", dsl::print_text(l), l.trunc())
}

fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    let trunc = match cli.trunc {
        Some(t) => Some(t),
        None => env_trunc()?,
    };
    let roots = cli.roots.as_deref().map(|r| parse_roots(r, cli.field)).transpose()?;
    let ctx = Ctx { field: cli.field, trunc, roots };
    match &cli.command {
        Command::Normalize { expr } => {
            let (l, _) = ctx.one(expr)?;
            Ok(Rendered::ok(ctx.op_json(&l), format!("{}\n", dsl::print_text(&l))))
        }
        Command::Mul { a, b } => {
            let (v, _) = ctx.operators(&[a, b])?;
            let p = &v[0] * &v[1];
            Ok(Rendered::ok(json!({ "product": ctx.op_json(&p) }), op_line("product", &p)))
        }
        Command::Divrem { l, m } => {
            let (v, _) = ctx.operators(&[l, m])?;
            let d = div_rem(&v[0], &v[1])?;
            Ok(Rendered::ok(
                json!({ "quotient": ctx.op_json(&d.quotient), "remainder": ctx.op_json(&d.remainder) }),
                op_line("quotient", &d.quotient) + &op_line("remainder", &d.remainder),
            ))
        }
        Command::Gcd { l, m } => {
            let (v, _) = ctx.operators(&[l, m])?;
            let g = gcd_bezout(&v[0], &v[1])?;
            Ok(Rendered::ok(
                json!({ "gcd": ctx.op_json(&g.gcd), "u": ctx.op_json(&g.u), "v": ctx.op_json(&g.v) }),
                op_line("gcd", &g.gcd) + &op_line("U", &g.u) + &op_line("V", &g.v),
            ))
        }
        Command::Lcm { l, m } => {
            let (v, _) = ctx.operators(&[l, m])?;
            let r = lcm(&v[0], &v[1])?;
            Ok(Rendered::ok(json!({ "lcm": ctx.op_json(&r) }), op_line("lcm", &r)))
        }
        Command::Conjugate { l, h } => {
            let (v, _) = ctx.operators(&[l, h])?;
            let c = conjugate_by(&v[0], &v[1])?;
            Ok(Rendered::ok(
                json!({ "target": ctx.op_json(&c.target), "h": ctx.op_json(&c.h), "k": ctx.op_json(&c.k) }),
                op_line("M", &c.target) + &op_line("H", &c.h) + &op_line("K", &c.k),
            ))
        }
        Command::InvertConjugacy { l, m, h } => {
            let (v, _) = ctx.operators(&[l, m, h])?;
            let r = invert_conjugacy(&v[0], &v[1], &v[2])?;
            Ok(Rendered::ok(
                json!({
                    "u": ctx.op_json(&r.u),
                    "v": ctx.op_json(&r.v),
                    "w": ctx.op_json(&r.w),
                    "coprime": r.coprime,
                }),
                op_line("U", &r.u) + &op_line("V", &r.v) + &op_line("W", &r.w) + &format!("coprime: {}\n", r.coprime),
            ))
        }
        Command::FuchsianCheck { l } => {
            let (l, _) = ctx.one(l)?;
            let fuchsian = l.is_fuchsian();
            let shift = pre_fuchsian_shift(&l);
            let p0 = l.eulerization().ok().filter(|_| fuchsian);
            let mut text = format!("fuchsian: {fuchsian}\n");
            if let Some(n) = l.order() {
                let _ = writeln!(text, "order: {n}");
            }
            match shift {
                Some(s) => {
                    let _ = writeln!(text, "pre_fuchsian_shift: {s}");
                }
                None => text.push_str("pre_fuchsian_shift: none\n"),
            }
            if let Some(p) = &p0 {
                let _ = writeln!(text, "eulerization: {p}");
            }
            Ok(Rendered::ok(
                json!({
                    "fuchsian": fuchsian,
                    "order": l.order(),
                    "kmin": l.kmin(),
                    "pre_fuchsian_shift": shift,
                    "eulerization": p0.map(|p| p.to_string()),
                }),
                text,
            ))
        }
        Command::Resonances { l } => {
            let (l, _) = ctx.one(l)?;
            let p0 = l.eulerization()?;
            let res = match ctx.checked_roots(&l)? {
                Some(r) => resonance_structure(&p0, &natural_order(&r))?,
                None => resonance_orders(&p0)?,
            };
            let j = js::resonances_to_json(&res);
            let mut text = format!("orders: {:?}\nN: {}\n", res.orders, res.bound);
            for (k, w) in &res.w {
                let _ = writeln!(text, "w_{k}: {w}  (nu = {})", res.nu(*k));
            }
            if let Some(roots) = &res.roots {
                let names: Vec<String> = roots.iter().map(Scalar::to_string).collect();
                let _ = writeln!(text, "roots: [{}]", names.join(", "));
                for (i, jumps) in res.jumps.iter().enumerate() {
                    let _ = writeln!(text, "J({}): {:?}", names[i], jumps);
                }
            }
            Ok(Rendered::ok(serde_json::to_value(j).unwrap(), text))
        }
        Command::Nf { kind, l } => {
            let (l, _) = ctx.one(l)?;
            let nf = match kind {
                NfKind::Euler => eulerize_nonresonant(&l)?,
                NfKind::Poly => truncate_equiv(&l)?,
                NfKind::Minimal => minimal_affine_nf(&l)?,
                NfKind::Reducible => {
                    let roots = ctx.checked_roots(&l)?;
                    minimal_reducible_nf(&l, roots.as_deref(), ctx.field)?
                }
            };
            let report = nf.verify(&l);
            if !report.passed() {
                return Err(CliError::Internal(format!("{} output failed self-verification", nf.kind.name())));
            }
            let bundle = js::bundle_to_json(&l, &nf, &report, ctx.field);
            Ok(Rendered::ok(serde_json::to_value(bundle).unwrap(), nf_text(&l, &nf, &report)))
        }
        Command::Factor { l } => {
            let (l, _) = ctx.one(l)?;
            let roots = ctx.checked_roots(&l)?;
            let f = formal_factorize(&l, roots.as_deref(), ctx.field)?;
            if f.product() != l.truncate(f.trunc) {
                return Err(CliError::Internal("factorization does not re-multiply to the input".into()));
            }
            let mut text = format!("unit: {}\n", f.unit);
            for (lam, r) in &f.factors {
                let _ = writeln!(text, "factor: {}", factor_text(lam, r));
            }
            Ok(Rendered::ok(
                json!({
                    "unit": serde_json::to_value(js::series_to_json(&f.unit)).unwrap(),
                    "factors": serde_json::to_value(js::factors_to_json(&f.factors)).unwrap(),
                    "trunc": f.trunc,
                }),
                text,
            ))
        }
        Command::Solve { l, exponent } => {
            let (l, trunc) = ctx.one(l)?;
            let exps = match exponent {
                Some(e) => parse_roots(e, ctx.field)?,
                None => {
                    let roots = match ctx.checked_roots(&l)? {
                        Some(r) => r,
                        None => l.eulerization()?.roots_in(ctx.field).ok_or(Error::NotSplit)?,
                    };
                    let mut v = natural_order(&roots);
                    v.dedup();
                    v
                }
            };
            solve(&l, &exps, trunc)
        }
        Command::Classify { l } => {
            let (l, trunc) = ctx.one(l)?;
            let c = classify_apparent(&l, trunc)?;
            Ok(Rendered::ok(json!({ "class": c.name(), "trunc": trunc }), format!("{}\n", c.name())))
        }
        Command::Verify { bundle, flavor } => verify(bundle, *flavor),
    }
}

fn factor_text(lam: &Scalar, r: &LaurentSeries) -> String {
    let lin = dsl::print_text(&OperatorSeries::euler(Poly::linear(lam), 0));
    if r.is_zero() {
        lin
    } else {
        format!("{lin} + ({r})")
    }
}

fn nf_text(l: &OperatorSeries, nf: &NormalFormResult, report: &ConjugacyReport) -> String {
    let mut text = format!("kind: {}\n", nf.kind.name());
    text += &op_line("source", l);
    text += &op_line("normal_form", &nf.normal_form);
    text += &op_line("H", &nf.conj.h);
    text += &op_line("K", &nf.conj.k);
    if let Some(factors) = &nf.factors {
        for (lam, r) in factors {
            let _ = writeln!(text, "factor: {}", factor_text(lam, r));
        }
    }
    let _ = writeln!(text, "resonance_orders: {:?}", nf.resonances.orders);
    let _ = writeln!(text, "achieved_trunc: {}", nf.achieved_trunc);
    let _ = writeln!(
        text,
        "verify: {} (checked through t^{})",
        if report.passed() { "pass" } else { "fail" },
        report.checked_trunc
    );
    text
}

fn solve(l: &OperatorSeries, exps: &[Scalar], trunc: i64) -> Result<Rendered, CliError> {
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut code = exit::SUCCESS;
    for lam in exps {
        match frobenius_solution(l, lam, trunc) {
            Ok(s) => {
                let _ = writeln!(text, "lambda = {lam}: t^({lam}) * ({})", s.series);
                entries.push(json!({
                    "exponent": lam.to_string(),
                    "status": "ok",
                    "series": serde_json::to_value(js::series_to_json(&s.series)).unwrap(),
                }));
            }
            Err(Error::LogObstruction { exponent, order }) => {
                code = exit::OBSTRUCTION;
                let _ = writeln!(text, "lambda = {lam}: log obstruction at order {order}");
                entries.push(json!({
                    "exponent": exponent.to_string(),
                    "status": "log_obstruction",
                    "order": order,
                }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Rendered { json: json!({ "trunc": trunc, "solutions": entries }), text, code })
}

fn verify(path: &str, flavor: FlavorArg) -> Result<Rendered, CliError> {
    let raw = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?
    };
    let bundle: BundleJson = serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("bundle: {e}")))?;
    let (l, field) = js::operator_from_json(&bundle.source)?;
    let parts = [&bundle.normal_form, &bundle.h, &bundle.k].map(js::operator_from_json);
    let mut ops = Vec::with_capacity(3);
    for p in parts {
        let (op, f) = p?;
        if f != field {
            return Err(CliError::Input("bundle mixes coefficient fields".into()));
        }
        ops.push(op);
    }
    let flavor = match flavor {
        FlavorArg::Weyl => Flavor::Weyl,
        FlavorArg::Fuchsian => Flavor::Fuchsian,
    };
    let report = verify_conjugacy(&l, &ops[0], &ops[1], &ops[2], flavor);
    let j = js::report_to_json(&report);
    let mut text = format!("{}\n", if report.passed() { "pass" } else { "fail" });
    let _ = writeln!(text, "flavor: {}", j.flavor);
    let _ = writeln!(text, "identity_holds: {} (checked through t^{})", report.identity_holds, report.checked_trunc);
    if let Some(k) = report.first_failure {
        let _ = writeln!(text, "first_failure: t^{k}");
    }
    let _ = writeln!(text, "gcd_ok: {}", report.gcd_ok);
    let _ = writeln!(text, "fuchsian_ok: {}", report.fuchsian_ok);
    let code = if report.passed() { exit::SUCCESS } else { exit::PRECONDITION };
    Ok(Rendered { json: serde_json::to_value(j).unwrap(), text, code })
}
