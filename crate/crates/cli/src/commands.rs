use std::sync::Arc;

use anyhow::Context;
use cring::batch::Strategy;
use cring::idempotent::Idempotent;
use cring::{alpha2, AlgebraContext, MonoidElement, Truncated, Valuation, WittRing, WittVector};
use serde_json::{json, Map, Value};

use crate::{read_arg, Cli, Command, UsageError};

pub struct Output {
    pub text: String,
    pub structured: Value,
    pub success: bool,
}

pub fn exit_code_for(e: &cring::Error) -> u8 {
    use cring::Error::*;
    match e {
        NonPrime(_)
        | ReducibleModulus(_)
        | DegreeMismatch { .. }
        | InvalidModulus(_)
        | InvalidRingSpec(_)
        | InvalidPrecision(_)
        | Parse { .. }
        | UnknownGenerator(_)
        | LengthMismatch { .. } => 2,
        _ => 1,
    }
}

struct Session {
    ctx: Arc<AlgebraContext>,
    spec: String,
}

impl Session {
    fn open(cli: &Cli) -> anyhow::Result<Self> {
        let spec = cli
            .ring
            .as_deref()
            .ok_or_else(|| UsageError("--ring is required".into()))?;
        let ctx = Arc::new(AlgebraContext::parse_spec(spec)?);
        Ok(Self {
            spec: ctx.spec_string(),
            ctx,
        })
    }

    fn element(&self, src: &str) -> anyhow::Result<MonoidElement> {
        let src = read_arg(src)?;
        MonoidElement::parse(&self.ctx, &src).with_context(|| format!("cannot parse `{src}`"))
    }

    fn doc(&self, precision: u32) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("ring".into(), json!(self.spec));
        m.insert("precision".into(), json!(precision));
        m
    }

    fn coeffs(&self, x: &Truncated) -> Value {
        Value::Array(
            x.coefficients()
                .map(|(b, c)| json!({ "basis": self.ctx.format_basis(b), "coeff": c.to_string() }))
                .collect(),
        )
    }

    fn digits(&self, ds: &[cring::PerfectElement]) -> Vec<String> {
        ds.iter().map(|d| self.ctx.format_element(d)).collect()
    }

    fn truncated(&self, x: &Truncated) -> Output {
        let mut doc = self.doc(x.precision());
        doc.insert("element".into(), json!(x.to_string()));
        doc.insert("coeffs".into(), self.coeffs(x));
        finish(format!("{x}\n"), doc, true)
    }
}

fn finish(text: String, mut doc: Map<String, Value>, success: bool) -> Output {
    doc.insert(
        "status".into(),
        json!(if success { "ok" } else { "failed" }),
    );
    Output {
        text,
        structured: Value::Object(doc),
        success,
    }
}

fn precision(cli: &Cli) -> anyhow::Result<u32> {
    cli.prec
        .ok_or_else(|| UsageError("--prec is required".into()).into())
}

pub fn run(cli: &Cli) -> anyhow::Result<Output> {
    if let Command::Selftest { sequential } = &cli.command {
        return Ok(selftest(*sequential));
    }
    let s = Session::open(cli)?;
    match &cli.command {
        Command::Reduce { element } => {
            Ok(s.truncated(&Truncated::reduce(&s.element(element)?, precision(cli)?)))
        }
        Command::Add { left, right } => {
            let n = precision(cli)?;
            let (x, y) = (
                Truncated::reduce(&s.element(left)?, n),
                Truncated::reduce(&s.element(right)?, n),
            );
            Ok(s.truncated(&x.try_add(&y)?))
        }
        Command::Mul { left, right } => {
            let n = precision(cli)?;
            let (x, y) = (
                Truncated::reduce(&s.element(left)?, n),
                Truncated::reduce(&s.element(right)?, n),
            );
            Ok(s.truncated(&x.try_mul(&y)?))
        }
        Command::Invert { element } => {
            let x = Truncated::reduce(&s.element(element)?, precision(cli)?);
            Ok(s.truncated(&x.invert()?))
        }
        Command::DivideP { element } => Ok(s.truncated(&Truncated::divide_by_p(
            &s.element(element)?,
            precision(cli)?,
        )?)),
        Command::TeichExpand { element } => {
            let n = precision(cli)?;
            let digits = s.digits(&Truncated::reduce(&s.element(element)?, n).teichmuller_expand());
            let mut doc = s.doc(n);
            doc.insert("digits".into(), json!(digits));
            Ok(finish(format!("({})\n", digits.join(", ")), doc, true))
        }
        Command::FromDigits { digits } => {
            let src = read_arg(digits)?;
            let parsed = src
                .split(',')
                .map(str::trim)
                .filter(|d| !d.is_empty())
                .map(|d| s.ctx.parse_element(d))
                .collect::<cring::Result<Vec<_>>>()?;
            if let Some(n) = cli.prec {
                if n as usize != parsed.len() {
                    return Err(UsageError(format!(
                        "--prec {n} but {} digits given",
                        parsed.len()
                    ))
                    .into());
                }
            }
            Ok(s.truncated(&Truncated::from_digits(&s.ctx, &parsed)))
        }
        Command::Valuation { element } => {
            let n = precision(cli)?;
            let v = Truncated::reduce(&s.element(element)?, n).valuation()?;
            let mut doc = s.doc(n);
            let value = match v {
                Valuation::Finite(k) => json!(k),
                Valuation::AtLeast(k) => json!({ "at_least": k }),
            };
            doc.insert("valuation".into(), value);
            Ok(finish(format!("{v}\n"), doc, true))
        }
        Command::WittCompare { left, right } => {
            witt_compare(&s, precision(cli)?, left, right.as_deref())
        }
        Command::Idempotent => idempotent(&s, precision(cli)?),
        Command::Selftest { .. } => unreachable!("handled above"),
    }
}

fn witt_compare(s: &Session, n: u32, left: &str, right: Option<&str>) -> anyhow::Result<Output> {
    let ring = WittRing::new(&s.ctx, n)?;
    let x = Truncated::reduce(&s.element(left)?, n);
    let y = match right {
        Some(r) => Truncated::reduce(&s.element(r)?, n),
        None => x.clone(),
    };
    let (ax, ay) = (ring.alpha(&x)?, ring.alpha(&y)?);
    let sum = (ring.alpha(&x.try_add(&y)?)?, ring.add(&ax, &ay)?);
    let prod = (ring.alpha(&x.try_mul(&y)?)?, ring.mul(&ax, &ay)?);
    let round_trip = ring.alpha_inverse(&ax)? == x && ring.alpha_inverse(&ay)? == y;
    let explicit = if n == 2 {
        Some(alpha2(&x)? == ax && alpha2(&y)? == ay)
    } else {
        None
    };
    let agree = sum.0 == sum.1 && prod.0 == prod.1 && round_trip && explicit.unwrap_or(true);

    let verdict = |ok: bool| if ok { "agree" } else { "DIFFER" };
    let mut text = format!("alpha(x) = {ax}\nalpha(y) = {ay}\n");
    text += &format!(
        "alpha(x+y) = {}, alpha(x)+alpha(y) = {}: {}\n",
        sum.0,
        sum.1,
        verdict(sum.0 == sum.1)
    );
    text += &format!(
        "alpha(x*y) = {}, alpha(x)*alpha(y) = {}: {}\n",
        prod.0,
        prod.1,
        verdict(prod.0 == prod.1)
    );
    text += &format!("inverse round trip: {}\n", verdict(round_trip));
    if let Some(ok) = explicit {
        text += &format!("(pi, delta) at precision 2: {}\n", verdict(ok));
    }
    text += if agree { "all agree\n" } else { "MISMATCH\n" };

    let vec = |u: &WittVector| json!(u.formatted_coords());
    let mut witt = Map::new();
    witt.insert("x".into(), vec(&ax));
    witt.insert("y".into(), vec(&ay));
    witt.insert(
        "sum".into(),
        json!({ "image": vec(&sum.0), "witt": vec(&sum.1), "agree": sum.0 == sum.1 }),
    );
    witt.insert(
        "product".into(),
        json!({ "image": vec(&prod.0), "witt": vec(&prod.1), "agree": prod.0 == prod.1 }),
    );
    witt.insert("round_trip".into(), json!(round_trip));
    if let Some(ok) = explicit {
        witt.insert("alpha2_agrees".into(), json!(ok));
    }
    witt.insert("agree".into(), json!(agree));
    let mut doc = s.doc(n);
    doc.insert("witt".into(), Value::Object(witt));
    Ok(finish(text, doc, agree))
}

fn idempotent(s: &Session, n: u32) -> anyhow::Result<Output> {
    let idem = Idempotent::compute(&s.ctx, n)?;
    let alg = &idem.algebra;
    let report = idem.splitting_check();
    let terms: Vec<Value> = alg
        .elements()
        .iter()
        .zip(&idem.e)
        .filter(|(_, c)| **c != 0)
        .map(|(r, c)| json!({ "element": s.ctx.format_element(r), "coeff": c }))
        .collect();
    let mut doc = s.doc(n);
    doc.insert(
        "idempotent".into(),
        json!({
            "modulus": alg.modulus(),
            "element": idem.formatted(),
            "terms": terms,
            "mod_p": idem.formatted_mod_p(),
            "image_of_power": { "modulus": alg.modulus(), "rows": idem.power_ideal.rows() },
            "splitting": {
                "holds": report.holds(),
                "covers_kernel": report.covers_kernel,
                "bijective": report.bijective(),
                "modulus": report.modulus,
                "matrix": report.matrix,
            },
        }),
    );
    let mut text = format!("{}\n", idem.formatted());
    if !report.holds() {
        text += "splitting check failed\n";
    }
    Ok(finish(text, doc, report.holds()))
}

fn selftest(sequential: bool) -> Output {
    let strategy = if sequential {
        Strategy::Sequential
    } else {
        Strategy::Parallel
    };
    let results = cring::selftest::run(strategy);
    let mut text = String::new();
    let mut suites = Vec::new();
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        text += &format!("{mark} {} ({} cases)\n", r.name, r.cases);
        if let Some(f) = &r.failure {
            text += &format!("  failure: {f}\n");
        }
        for finding in &r.findings {
            text += &format!("  finding: {finding}\n");
        }
        suites.push(json!({
            "name": r.name,
            "passed": r.passed,
            "cases": r.cases,
            "failure": r.failure,
            "findings": r.findings,
        }));
    }
    let ok = results.iter().all(|r| r.passed);
    let mut doc = Map::new();
    doc.insert("suites".into(), Value::Array(suites));
    finish(text, doc, ok)
}
