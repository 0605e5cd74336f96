use std::collections::BTreeMap;

use cotzeta::bernoulli::{bern_number, bern_poly_eval};
use cotzeta::closedform::ba_value;
use cotzeta::modular::{minimal_polynomial, pell4, stabilizer, validate_pair};
use cotzeta::series::{convergence_table, xi_partial_par};
use cotzeta::{HighPrecReal, QuadElem, UniMat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::input::{parse_alpha, parse_grid, parse_matrix, parse_rational};
use crate::report::{int_json, ratio_string, CheckOut, Exact, Report};
use crate::{Cli, CliError};

pub type Input = BTreeMap<String, Value>;

pub fn digits(prec: u32) -> usize {
    HighPrecReal::decimal_digits(prec)
}

pub fn alpha_input(cli: &Cli) -> Result<(QuadElem, Input), CliError> {
    let alpha = parse_alpha(&cli.alpha)?;
    let mut input = Input::new();
    input.insert("alpha".into(), Value::from(cli.alpha.clone()));
    input.insert("alpha_value".into(), Value::from(alpha.to_string()));
    Ok((alpha, input))
}

pub fn matrix_opt(cli: &Cli, input: &mut Input) -> Result<Option<UniMat>, CliError> {
    match &cli.matrix {
        Some(text) => {
            let v = parse_matrix(text)?;
            input.insert("matrix".into(), Value::from(v.to_string()));
            Ok(Some(v))
        }
        None => Ok(None),
    }
}

pub fn grid_or(cli: &Cli, default: &[u64], input: &mut Input) -> Result<Vec<u64>, CliError> {
    let grid = match &cli.grid {
        Some(text) => parse_grid(text)?,
        None => default.to_vec(),
    };
    input.insert("grid".into(), json!(grid));
    Ok(grid)
}

pub fn unit(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, input) = alpha_input(cli)?;
    let poly = minimal_polynomial(&alpha)?;
    let (t, u) = pell4(&poly.disc)?;
    let (v, eta) = stabilizer(&alpha)?;
    let pair = validate_pair(&alpha, &v, &eta);

    let mut r = Report::new("unit", input, cli.prec);
    r.envelope.details = json!({
        "matrix": [int_json(v.a()), int_json(v.b()), int_json(v.c()), int_json(v.d())],
        "eta": {
            "d": int_json(eta.d()),
            "a": ratio_string(eta.a()),
            "b": ratio_string(eta.b()),
        },
        "eta_display": eta.to_string(),
        "min_poly": [int_json(&poly.a), int_json(&poly.b), int_json(&poly.c)],
        "disc": int_json(&poly.disc),
        "pell": {"t": int_json(&t), "u": int_json(&u)},
    });
    r.envelope.decimal = Some(eta.to_real(cli.prec).to_decimal(digits(cli.prec)));
    r.line(format!("alpha     {alpha}"));
    r.line(format!("min poly  {}", quadratic(&poly.a, &poly.b, &poly.c)));
    r.line(format!("disc      {}", poly.disc));
    r.line(format!("pell      t = {t}, u = {u}"));
    r.line(format!("V         {v}"));
    r.line(format!("eta       {eta}"));
    r.line(format!("          ~ {}", eta.to_real(cli.prec).to_decimal(digits(cli.prec))));
    for c in pair.checks {
        r.check(CheckOut::new(c.name, c.pass, c.detail));
    }
    Ok(r)
}

fn quadratic(a: &BigInt, b: &BigInt, c: &BigInt) -> String {
    let mut out = String::new();
    for (coef, var) in [(a, "x^2"), (b, "x"), (c, "")] {
        if coef.is_zero() {
            continue;
        }
        let mag = coef.abs();
        let sign = match (out.is_empty(), coef.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sign);
        if !mag.is_one() || var.is_empty() {
            out.push_str(&mag.to_string());
        }
        out.push_str(var);
    }
    out
}

pub fn value(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, mut input) = alpha_input(cli)?;
    input.insert("m".into(), Value::from(cli.m));
    let v = matrix_opt(cli, &mut input)?;
    let val = ba_value(&alpha, cli.m, v.as_ref())?;
    let decimal = val.to_real(cli.prec).to_decimal(digits(cli.prec));

    let mut r = Report::new("value", input, cli.prec);
    r.line(format!("xi({}, {alpha}) = {val}", 2 * cli.m - 1));
    r.line(format!("  ~ {decimal}"));
    r.envelope.exact = Some(Exact::from_pi_value(&val));
    r.envelope.decimal = Some(decimal.clone());

    // CSV only; the JSON record already carries these in `exact`
    r.set_header(&["field", "value"]);
    r.table = vec![
        vec!["d".into(), val.coeff.d().to_string()],
        vec!["pi_power".into(), val.pi_power.to_string()],
        vec!["a".into(), ratio_string(val.coeff.a())],
        vec!["b".into(), ratio_string(val.coeff.b())],
        vec!["decimal".into(), decimal],
    ];
    Ok(r)
}

pub fn series(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, mut input) = alpha_input(cli)?;
    let k = cli
        .k
        .ok_or_else(|| CliError::Input("series needs --k".into()))?;
    input.insert("m".into(), Value::from(cli.m));
    input.insert("k".into(), Value::from(k));
    let res = xi_partial_par(k, cli.m, &alpha, cli.prec)?;
    let decimal = res.value.to_decimal(digits(cli.prec));

    let mut r = Report::new("series", input, cli.prec);
    r.envelope.decimal = Some(decimal.clone());
    r.line(format!("xi_{k}({}, {alpha}) ~ {decimal}", 2 * cli.m - 1));
    r.set_header(&["k", "xi_k"]);
    r.table.push(vec![k.to_string(), decimal]);
    Ok(r)
}

pub fn table(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, mut input) = alpha_input(cli)?;
    input.insert("m".into(), Value::from(cli.m));
    let grid = grid_or(cli, &[100, 1_000, 10_000], &mut input)?;
    let exact = ba_value(&alpha, cli.m, None)?;
    let rows = convergence_table(&alpha, cli.m, &grid, cli.prec)?;
    let d = digits(cli.prec);

    let mut r = Report::new("table", input, cli.prec);
    r.envelope.exact = Some(Exact::from_pi_value(&exact));
    r.envelope.decimal = Some(exact.to_real(cli.prec).to_decimal(d));
    r.line(format!("xi({}, {alpha}) = {exact}", 2 * cli.m - 1));
    r.set_header(&["k", "xi_k", "abs_err"]);
    for row in rows {
        r.row(vec![row.k.to_string(), row.xi_k.to_decimal(d), row.abs_err.to_decimal(6)]);
    }
    Ok(r)
}

pub fn bernoulli(cli: &Cli) -> Result<Report, CliError> {
    let n = cli.n.unwrap_or(12);
    let mut input = Input::new();
    input.insert("n".into(), Value::from(n));
    let x = match &cli.x {
        Some(text) => {
            let x = parse_rational(text)?;
            input.insert("x".into(), Value::from(ratio_string(&x)));
            Some(x)
        }
        None => None,
    };
    let mut r = Report::new("bernoulli", input, cli.prec);
    if x.is_some() {
        r.set_header(&["n", "b_n", "b_n_x"]);
    } else {
        r.set_header(&["n", "b_n"]);
    }
    for i in 0..=n {
        let mut row = vec![i.to_string(), ratio_string(&bern_number(i))];
        if let Some(x) = &x {
            row.push(ratio_string(&bern_poly_eval(i, x)));
        }
        r.row(row);
    }
    Ok(r)
}
