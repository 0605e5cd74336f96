use cotzeta::bernoulli::{bern_number, bern_poly_eval, default_table, BernoulliTable};
use cotzeta::closedform::{ba_value, lerch_eval, lerch_rhs};
use cotzeta::modular::stabilizer;
use cotzeta::oracle::{
    check_first_deformation, check_second_deformation, dyadic_sample, theorem1_residual, EXACT_K_MAX,
};
use cotzeta::series::{a_limit, a_nq, lemma1_scaled_deviation, xi_partial_par};
use cotzeta::{QuadElem, Rational, UniMat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::commands::{alpha_input, digits, grid_or, matrix_opt, Input};
use crate::input::parse_rational;
use crate::report::{ratio_string, CheckOut, Exact, Report};
use crate::{Cli, CliError, Suite};

/// Distance allowed between a partial sum at large k and its limit.
const SERIES_TOL: f64 = 1e-3;

/// Bound on `n |A_{n,q}(x) - lim|`.
const LEMMA_BOUND: f64 = 10.0;

pub fn run(cli: &Cli, suite: Suite) -> Result<Report, CliError> {
    match suite {
        Suite::Deform2 => deform2(cli),
        Suite::Deform1 => deform1(cli),
        Suite::Thm1 => thm1(cli),
        Suite::Ba => ba(cli),
        Suite::Lerch => lerch(cli),
        Suite::Lemma1 => lemma1(cli),
        Suite::Bernoulli => bernoulli(cli),
    }
}

fn pair(cli: &Cli) -> Result<(QuadElem, UniMat, Input), CliError> {
    let (alpha, mut input) = alpha_input(cli)?;
    input.insert("m".into(), Value::from(cli.m));
    let v = match matrix_opt(cli, &mut input)? {
        Some(v) => v,
        None => {
            let v = stabilizer(&alpha)?.0;
            input.insert("matrix".into(), Value::from(v.to_string()));
            v
        }
    };
    if !v.eta_of(&alpha).is_positive() {
        return Err(CliError::Input(format!("c*alpha + d is not positive for {v}")));
    }
    Ok((alpha, v, input))
}

fn exact_grid(cli: &Cli, default: &[u64], input: &mut Input) -> Result<Vec<u64>, CliError> {
    let grid = grid_or(cli, default, input)?;
    if let Some(k) = grid.iter().find(|&&k| k == 0 || k > EXACT_K_MAX) {
        return Err(CliError::Input(format!(
            "k = {k} is outside 1..={EXACT_K_MAX} for exact checks"
        )));
    }
    Ok(grid)
}

fn deform2(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, v, mut input) = pair(cli)?;
    let grid = exact_grid(cli, &[1, 6, 12, 24, 48], &mut input)?;
    let reports = grid
        .par_iter()
        .map(|&k| check_second_deformation(k, &alpha, &v, cli.m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new("verify deform2", input, cli.prec);
    r.line(format!("S = 2 T1 - 2 eta^{} T2 + U for alpha = {alpha}, V = {v}", 2 * cli.m - 2));
    for rep in reports {
        let s = rep.s.to_real(64).to_decimal(12);
        r.check(CheckOut::new(format!("k={}", rep.k), rep.second_deformation_holds, format!("S ~ {s}")));
    }
    Ok(r)
}

fn deform1(cli: &Cli) -> Result<Report, CliError> {
    if cli.prec < 64 {
        return Err(CliError::Input("deform1 needs --prec >= 64".into()));
    }
    let (alpha, v, mut input) = pair(cli)?;
    let grid = exact_grid(cli, &[6, 12], &mut input)?;
    let bits = cli.prec as i32 - 20;
    let mut r = Report::new("verify deform1", input, cli.prec);
    r.line(format!("exponential-sum form of S to 2^-{bits} relative, alpha = {alpha}, V = {v}"));
    for k in grid {
        let f = check_first_deformation(k, &alpha, &v, cli.m, cli.prec)?;
        r.check(CheckOut::new(
            format!("k={k}"),
            f.within(bits),
            format!(
                "residual {} vs scale {}",
                f.residual.to_decimal(4),
                f.scale.to_decimal(8)
            ),
        ));
    }
    Ok(r)
}

fn thm1(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, v, mut input) = pair(cli)?;
    let sample: Vec<(u32, Vec<u64>)> = match &cli.grid {
        Some(_) => grid_or(cli, &[], &mut input)?.into_iter().map(|k| (0, vec![k])).collect(),
        None => {
            input.insert("seed".into(), Value::from(cli.seed));
            dyadic_sample(cli.seed, 7..=12, 4)
        }
    };
    if sample.iter().any(|(_, ks)| ks.contains(&0)) {
        return Err(CliError::Input("k must be at least 1".into()));
    }
    let mut r = Report::new("verify thm1", input, cli.prec);
    r.line(format!("k |R(k)| for alpha = {alpha}, V = {v}, m = {}", cli.m));
    r.set_header(&["block", "k", "k_abs_residual"]);
    let mut maxima = Vec::new();
    for (block, ks) in &sample {
        let mut best = 0.0f64;
        for &k in ks {
            let res = theorem1_residual(k, &alpha, &v, cli.m, cli.prec)?;
            let scaled = res.abs().to_f64() * k as f64;
            best = best.max(scaled);
            r.row(vec![block.to_string(), k.to_string(), format!("{scaled:.6e}")]);
        }
        maxima.push(best);
    }
    if let Some(&first) = maxima.first() {
        let top = maxima.iter().copied().fold(0.0, f64::max);
        let bound = 5.0 * first + 1.0;
        r.check(CheckOut::new(
            "bounded",
            top.is_finite() && top <= bound,
            format!("max k|R(k)| = {top:.6e}, bound 5*C_first + 1 = {bound:.6e}"),
        ));
    }
    Ok(r)
}

fn ba(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, mut input) = alpha_input(cli)?;
    input.insert("m".into(), Value::from(cli.m));
    let k = cli.k.unwrap_or(100_000);
    input.insert("k".into(), Value::from(k));
    let val = ba_value(&alpha, cli.m, None)?;
    let exact = val.to_real(cli.prec);
    let xi = xi_partial_par(k, cli.m, &alpha, cli.prec)?.value;
    let err = (&xi - &exact).abs();

    let mut r = Report::new("verify ba", input, cli.prec);
    r.envelope.exact = Some(Exact::from_pi_value(&val));
    r.envelope.decimal = Some(exact.to_decimal(digits(cli.prec)));
    r.line(format!("xi({}, {alpha}) = {val}", 2 * cli.m - 1));
    r.check(CheckOut::new(
        format!("k={k}"),
        err <= SERIES_TOL,
        format!("|xi_k - closed form| = {}", err.to_decimal(4)),
    ));
    Ok(r)
}

fn lerch(cli: &Cli) -> Result<Report, CliError> {
    let (alpha, mut input) = alpha_input(cli)?;
    if !alpha.is_positive() {
        return Err(CliError::Input("the reciprocity check needs alpha > 0".into()));
    }
    input.insert("m".into(), Value::from(cli.m));
    let k = cli.k.unwrap_or(100_000);
    input.insert("k".into(), Value::from(k));
    let prec = cli.prec;
    let image = UniMat::inversion().moebius(&alpha)?;
    let xi_a = xi_partial_par(k, cli.m, &alpha, prec)?.value;
    let xi_b = xi_partial_par(k, cli.m, &image, prec)?.value;
    let weight = alpha.pow(2 * cli.m as i64 - 2)?.to_real(prec);
    let lhs = &xi_a - &(&weight * &xi_b);
    let poly = lerch_rhs(cli.m)?;
    let rhs = lerch_eval(&poly, &alpha.to_real(prec), prec)?;
    let gap = (&lhs - &rhs).abs();

    let mut r = Report::new("verify lerch", input, prec);
    let exact = poly.exact_at(&alpha)?;
    r.envelope.exact = Some(Exact::from_pi_value(&exact));
    r.envelope.decimal = Some(rhs.to_decimal(digits(prec)));
    let s = 2 * cli.m - 1;
    r.line(format!(
        "xi_k({s}, alpha) - alpha^{} xi_k({s}, -1/alpha) against the Bernoulli-number polynomial",
        2 * cli.m - 2
    ));
    r.line(format!("  lhs ~ {}", lhs.to_decimal(20)));
    r.line(format!("  rhs ~ {}", rhs.to_decimal(20)));
    r.check(CheckOut::new(
        format!("k={k}"),
        gap <= SERIES_TOL,
        format!("|lhs - rhs| = {}", gap.to_decimal(4)),
    ));
    Ok(r)
}

fn lemma1(cli: &Cli) -> Result<Report, CliError> {
    let q = cli.q.unwrap_or(2);
    if q == 0 {
        return Err(CliError::Input("--q must be at least 1".into()));
    }
    let x = parse_rational(cli.x.as_deref().unwrap_or("1/3"))?;
    let mut input = Input::new();
    input.insert("q".into(), Value::from(q));
    input.insert("x".into(), Value::from(ratio_string(&x)));
    let grid = grid_or(cli, &[10, 100, 1_000, 10_000], &mut input)?;
    if grid.contains(&0) {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    let mut r = Report::new("verify lemma1", input, cli.prec);
    if q == 1 && x.is_integer() {
        r.line("q = 1 at an integer: every finite sum vanishes");
        for n in grid {
            let (re, im) = a_nq(n, q, &x, cli.prec)?;
            r.check(CheckOut::new(format!("n={n}"), re.is_zero() && im.is_zero(), "exact zero"));
        }
        return Ok(r);
    }
    let lim = a_limit(q, &x)?;
    r.envelope.details = json!({
        "limit": {"re": ratio_string(&lim.re), "im": ratio_string(&lim.im), "pi_power": lim.pi_power},
    });
    r.line(format!(
        "lim A_n,{q}({x}) = ({} + {} i) pi^{}",
        lim.re, lim.im, lim.pi_power
    ));
    for n in grid {
        let dev = lemma1_scaled_deviation(n, q, &x, cli.prec)?;
        r.check(CheckOut::new(
            format!("n={n}"),
            dev.is_finite() && dev <= LEMMA_BOUND,
            format!("n |A - lim| = {dev:.6}"),
        ));
    }
    Ok(r)
}

fn bernoulli(cli: &Cli) -> Result<Report, CliError> {
    let n_max = cli.n.unwrap_or(30);
    let mut input = Input::new();
    input.insert("n".into(), Value::from(n_max));
    let q = |a: i64, b: i64| Rational::new(BigInt::from(a), BigInt::from(b));
    let points = [q(0, 1), q(1, 2), q(2, 1), q(-1, 3), q(3, 7)];

    let mut difference = true;
    let mut reflection = true;
    let mut odd = true;
    for n in 0..=n_max {
        for x in &points {
            let diff = bern_poly_eval(n, &(x + Rational::one())) - bern_poly_eval(n, x);
            let want = if n == 0 {
                Rational::zero()
            } else {
                Rational::from_integer(BigInt::from(n)) * num_traits::pow(x.clone(), n - 1)
            };
            difference &= diff == want;
            let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
            reflection &= bern_poly_eval(n, &(Rational::one() - x)) == sign * bern_poly_eval(n, x);
        }
        if n % 2 == 1 && n >= 3 {
            odd &= bern_number(n).is_zero();
        }
    }
    let table = default_table();
    let fresh = BernoulliTable::<Rational>::new(table.max_n());
    let cache = (0..=table.max_n()).all(|n| {
        bern_poly_eval(n, &Rational::zero()) == bern_number(n) && fresh.number(n) == table.number(n)
    });

    let mut r = Report::new("verify bernoulli", input, cli.prec);
    r.check(CheckOut::new("difference", difference, "B_n(x+1) - B_n(x) = n x^(n-1)"));
    r.check(CheckOut::new("reflection", reflection, "B_n(1-x) = (-1)^n B_n(x)"));
    r.check(CheckOut::new("odd_vanishing", odd, "B_n = 0 for odd n >= 3"));
    r.check(CheckOut::new("cache", cache, format!("n <= {}", table.max_n())));
    Ok(r)
}
