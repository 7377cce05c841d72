use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};
use skewflow::ellis::{centre_membership, EllisContext, EllisElement};
use skewflow::ergodic::{
    birkhoff_average, distality_probe, ergodicity_scan, oxtoby_uniformity, random_starts, weyl_sum,
};
use skewflow::factor::{gamma_window, homomorphism_check_with_map, kernel_witness_check, salehi_average};
use skewflow::{BigInt, Complex64, Frac, SkewSystem, SymbolicPoint, TorusPoint};

use crate::config::{base_phase, character, parse_fracs, parse_phase, point, required, ExperimentConfig, Start};
use crate::error::{CliError, CliResult};
use crate::output::{num, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Iterate,
    PowerCheck,
    Equidist,
    Oxtoby,
    Weyl,
    Distal,
    Scan,
    Gamma,
    Salehi,
    Ellis,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Iterate => "iterate",
            Experiment::PowerCheck => "power-check",
            Experiment::Equidist => "equidist",
            Experiment::Oxtoby => "oxtoby",
            Experiment::Weyl => "weyl",
            Experiment::Distal => "distal",
            Experiment::Scan => "scan",
            Experiment::Gamma => "gamma",
            Experiment::Salehi => "salehi",
            Experiment::Ellis => "ellis",
        }
    }

    /// Base name of the CSV and JSON files written to the output directory.
    pub fn file_stem(self) -> String {
        self.name().replace('-', "_")
    }
}

/// What an experiment produces: its table, a JSON body, a one-line summary,
/// and the failed assertion, if any.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub details: Value,
    pub summary: String,
    pub failure: Option<String>,
}

fn check(ok: bool, summary: String) -> (String, Option<String>) {
    if ok {
        (format!("ok: {summary}"), None)
    } else {
        (format!("FAIL: {summary}"), Some(summary))
    }
}

fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im, "abs": z.norm()})
}

fn complex_cells(z: Complex64) -> [String; 3] {
    [num(z.re), num(z.im), num(z.norm())]
}

fn coord_cells(p: &TorusPoint) -> Vec<String> {
    match p {
        TorusPoint::Exact(v) => v.iter().map(Frac::to_string).collect(),
        TorusPoint::Float(v) => v.iter().map(|c| num(c.to_f64())).collect(),
    }
}

fn symbolic_cells(p: &SymbolicPoint) -> Vec<String> {
    p.0.iter()
        .map(|c| {
            if c.gamma == BigInt::from(0) {
                c.rational.to_string()
            } else {
                format!("{}+{}*gamma0", c.rational, c.gamma)
            }
        })
        .collect()
}

fn indexed_header(first: &str, prefix: &str, count: usize) -> Table {
    Table::new(std::iter::once(first.to_string()).chain((0..count).map(|i| format!("{prefix}{i}"))))
}

pub fn run(experiment: Experiment, config: &ExperimentConfig, system: &SkewSystem) -> CliResult<Outcome> {
    if let Some(name) = &config.experiment {
        if name != experiment.name() {
            return Err(CliError::Parse(format!(
                "config is for experiment {name:?}, not {:?}",
                experiment.name()
            )));
        }
    }
    match experiment {
        Experiment::Iterate => iterate(config, system),
        Experiment::PowerCheck => power_check(config, system),
        Experiment::Equidist => equidist(config, system),
        Experiment::Oxtoby => oxtoby(config, system),
        Experiment::Weyl => weyl(config),
        Experiment::Distal => distal(config, system),
        Experiment::Scan => scan(config, system),
        Experiment::Gamma => gamma(config, system),
        Experiment::Salehi => salehi(config, system),
        Experiment::Ellis => ellis(config, system),
    }
}

fn iterate(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let n = config.params.n.unwrap_or(16);
    let mut table = indexed_header("n", "x", s.dim());
    let last = BigInt::from(n - 1);
    let agrees = match point(s, config.params.start.as_deref())? {
        Start::Torus(x) => {
            let mut end = x.clone();
            for (t, p) in s.orbit(&x, n)?.enumerate() {
                table.push(std::iter::once(t.to_string()).chain(coord_cells(&p)).collect());
                end = p;
            }
            end == s.power_apply(&last, &x)?
        }
        Start::Symbolic(x) => {
            let mut p = x.clone();
            for t in 0..n {
                table.push(std::iter::once(t.to_string()).chain(symbolic_cells(&p)).collect());
                if t + 1 < n {
                    p = s.apply_symbolic(&p)?;
                }
            }
            p == s.power_apply_symbolic(&last, &x)?
        }
    };
    let (summary, failure) = check(agrees, format!("{n} orbit points, last equals T^{last} x"));
    Ok(Outcome { table, details: json!({"n": n, "closed_form_agrees": agrees}), summary, failure })
}

fn power_check(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let range = config.params.range.unwrap_or(64) as i64;
    let fracs = match &config.params.start {
        Some(c) => parse_fracs(c)?,
        None => (0..s.dim()).map(|i| Frac::from_ratio(i as i64 + 1, s.dim() as i64 + 2)).collect(),
    };
    if fracs.len() != s.dim() {
        return Err(CliError::Parse(format!("start has {} coordinates, system dimension is {}", fracs.len(), s.dim())));
    }
    let x = SymbolicPoint::from_rationals(&fracs);
    let mut exact = vec![false; 2 * range as usize + 1];
    let (mut fwd, mut bwd) = (x.clone(), x.clone());
    for n in 0..=range {
        exact[(range + n) as usize] = s.power_apply_symbolic(&BigInt::from(n), &x)? == fwd;
        exact[(range - n) as usize] = s.power_apply_symbolic(&BigInt::from(-n), &x)? == bwd;
        fwd = s.apply_symbolic(&fwd)?;
        bwd = s.apply_inverse_symbolic(&bwd)?;
    }
    let mut table = Table::new(["n", "exact"]);
    for (i, ok) in exact.iter().enumerate() {
        table.push(vec![(i as i64 - range).to_string(), ok.to_string()]);
    }
    let total = exact.len();
    let good = exact.iter().filter(|&&ok| ok).count();
    let (summary, failure) = if good == total {
        (format!("ok: {total} powers exact"), None)
    } else {
        let msg = format!("{} of {total} powers differ from iteration", total - good);
        (format!("FAIL: {msg}"), Some(msg))
    };
    Ok(Outcome { table, details: json!({"range": range, "checked": total, "exact": good}), summary, failure })
}

fn equidist(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let p = &config.params;
    let n = required(&p.n, "n", "equidist")?;
    let eta = character(&required(&p.character, "character", "equidist")?, s)?;
    let x = match point(s, p.start.as_deref())? {
        Start::Torus(x) => x,
        Start::Symbolic(_) => return Err(skewflow::Error::SymbolicGenerator.into()),
    };
    let report = birkhoff_average(s, &x, &eta, n, p.checkpoints.as_deref())?;
    let mut table = Table::new(["n_checkpoint", "re_avg", "im_avg", "abs_avg"]);
    for c in &report.checkpoints {
        let [re, im, abs] = complex_cells(c.average);
        table.push(vec![c.n.to_string(), re, im, abs]);
    }
    let a = report.final_average();
    let (summary, failure) = match p.bound {
        Some(b) => check(a.norm() < b, format!("|A_N| = {:.6} at N = {n} (bound {b})", a.norm())),
        None => (format!("|A_N| = {:.6} at N = {n} (no bound set)", a.norm()), None),
    };
    let details = json!({
        "n": n,
        "character": p.character,
        "start": coord_cells(&x),
        "target": complex(report.target),
        "final": complex(a),
        "bound": p.bound,
    });
    Ok(Outcome { table, details, summary, failure })
}

fn oxtoby(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let p = &config.params;
    let n = required(&p.n, "n", "oxtoby")?;
    let seed = required(&p.seed, "seed", "oxtoby")?;
    let grid = p.grid.unwrap_or(100);
    let eta = character(&required(&p.character, "character", "oxtoby")?, s)?;
    let starts = random_starts(seed, grid, s.dim());
    let report = oxtoby_uniformity(s, &eta, &starts, n)?;
    let mut table = Table::new(["start", "re_avg", "im_avg", "abs_avg"]);
    for (i, a) in report.averages.iter().enumerate() {
        let [re, im, abs] = complex_cells(*a);
        table.push(vec![i.to_string(), re, im, abs]);
    }
    let text = format!("spread {:.6} over {grid} starts", report.spread);
    let (summary, failure) = match p.bound {
        Some(b) => check(report.spread < b, format!("{text} (bound {b})")),
        None => (format!("{text} (no bound set)"), None),
    };
    let details = json!({
        "n": n,
        "seed": seed,
        "grid": grid,
        "character": p.character,
        "spread": report.spread,
        "modulus_spread": report.modulus_spread,
        "max_abs": report.max_abs,
        "bound": p.bound,
    });
    Ok(Outcome { table, details, summary, failure })
}

fn weyl(config: &ExperimentConfig) -> CliResult<Outcome> {
    let p = &config.params;
    let poly = required(&p.poly, "poly", "weyl")?;
    let checkpoints = required(&p.checkpoints, "checkpoints", "weyl")?;
    let coeffs = poly.iter().map(|c| parse_phase(c)).collect::<CliResult<Vec<_>>>()?;
    let values = weyl_sum(&coeffs, &checkpoints)?;
    let mut table = Table::new(["n_checkpoint", "abs_norm"]);
    for (n, v) in &values {
        table.push(vec![n.to_string(), num(*v)]);
    }
    let decreasing = values.windows(2).all(|w| w[1].1 < w[0].1);
    let last = values.last().map(|v| v.1).unwrap_or(0.0);
    let mut problems = Vec::new();
    if p.require_decreasing.unwrap_or(false) && !decreasing {
        problems.push("values do not decrease".to_string());
    }
    if let Some(b) = p.bound {
        if last >= b {
            problems.push(format!("final value {last:.6} not below {b}"));
        }
    }
    let shown: Vec<String> = values.iter().map(|(n, v)| format!("{n}: {v:.6}")).collect();
    let (summary, failure) = if problems.is_empty() {
        (format!("ok: |S_N|/N {}", shown.join(", ")), None)
    } else {
        let msg = problems.join("; ");
        (format!("FAIL: {msg}"), Some(msg))
    };
    let details = json!({"poly": poly, "decreasing": decreasing, "values": values});
    Ok(Outcome { table, details, summary, failure })
}

fn distal(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let p = &config.params;
    let n = p.n.unwrap_or(1000);
    let pairs: Vec<(TorusPoint, TorusPoint)> = match (&p.x, &p.y) {
        (Some(x), Some(y)) => match (point(s, Some(x))?, point(s, Some(y))?) {
            (Start::Torus(x), Start::Torus(y)) => vec![(x, y)],
            _ => return Err(skewflow::Error::SymbolicGenerator.into()),
        },
        (None, None) => {
            let seed = required(&p.seed, "seed", "distal")?;
            let count = p.grid.unwrap_or(10);
            let points = random_starts(seed, 2 * count, s.dim());
            points
                .chunks(2)
                .enumerate()
                .map(|(i, pair)| {
                    // Agree on the blocks before block i % k + 1.
                    let split = (i % s.k()) * s.m();
                    let (TorusPoint::Float(x), TorusPoint::Float(z)) = (&pair[0], &pair[1]) else {
                        unreachable!("random starts are fixed-point")
                    };
                    let y: Vec<_> = x[..split].iter().chain(&z[split..]).copied().collect();
                    (pair[0].clone(), TorusPoint::Float(y))
                })
                .collect()
        }
        _ => return Err(CliError::Parse("distal needs both params.x and params.y, or neither".into())),
    };
    let reports = pairs
        .par_iter()
        .map(|(x, y)| distality_probe(s, x, y, n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(["pair", "first_diff", "min_distance", "argmin", "gap_constant"]);
    for (i, r) in reports.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            r.certificate.block.to_string(),
            num(r.min_distance),
            r.argmin.to_string(),
            r.certificate.constant.to_string(),
        ]);
    }
    let broken = reports.iter().filter(|r| !r.certificate.constant || r.min_distance <= 0.0).count();
    let min = reports.iter().map(|r| r.min_distance).fold(f64::INFINITY, f64::min);
    let (summary, failure) = check(
        broken == 0,
        format!("{} pairs, {broken} without a constant gap; min distance {min:.6} over N = {n}", reports.len()),
    );
    Ok(Outcome { table, details: json!({"n": n, "pairs": reports.len(), "min_distance": min}), summary, failure })
}

fn scan(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let bound = config.params.box_bound.unwrap_or(5);
    let n_max = config.params.n_max.unwrap_or(6);
    let found = ergodicity_scan(s, bound, n_max)?;
    let mut table = indexed_header("n", "e", s.dim());
    for f in &found {
        let exps = f.character.exponents.iter().map(BigInt::to_string);
        table.push(std::iter::once(f.n.to_string()).chain(exps).collect());
    }
    let (summary, failure) = check(
        found.is_empty(),
        format!("{} fixed nontrivial characters (box {bound}, n <= {n_max})", found.len()),
    );
    Ok(Outcome { table, details: json!({"box": bound, "n_max": n_max, "fixed": found.len()}), summary, failure })
}

fn gamma(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let p = &config.params;
    let lambda = base_phase(s, "gamma")?;
    let x = parse_fracs(&required(&p.x, "x", "gamma")?)?;
    if x.len() != s.k() {
        return Err(CliError::Parse(format!("x has {} coordinates, k is {}", x.len(), s.k())));
    }
    let n0 = p.n0.unwrap_or(0);
    let width = p.width.unwrap_or(16);
    let phases: Vec<_> = x.iter().map(Frac::to_phase).collect();
    let window = gamma_window(&phases, s.k(), &lambda, &BigInt::from(n0), width)?;
    let mut table = Table::new(["n", "re", "im"]);
    for (t, z) in window.to_complex().into_iter().enumerate() {
        table.push(vec![(n0 + t as i64).to_string(), num(z.re), num(z.im)]);
    }
    let report = homomorphism_check_with_map(s.one_step());
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| json!({"degree": r.degree, "shifted": r.shifted.to_string(), "image": r.image.to_string(), "matches": r.matches()}))
        .collect();
    let kernel = match &p.y {
        Some(y) => Some(kernel_witness_check(&x, &parse_fracs(y)?)?),
        None => None,
    };
    let mismatched: Vec<usize> = report.mismatches().map(|r| r.degree).collect();
    let (summary, failure) = check(
        report.holds(),
        format!("Gamma(x)(n+1) = Gamma(Tx)(n) for k = {}: {}", s.k(), if report.holds() { "holds".to_string() } else { format!("differs in degrees {mismatched:?}") }),
    );
    let details = json!({"k": s.k(), "intertwines": report.holds(), "coefficients": rows, "kernel": kernel});
    Ok(Outcome { table, details, summary, failure })
}

fn salehi(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let p = &config.params;
    let n = required(&p.n, "n", "salehi")?;
    let lambda = base_phase(s, "salehi")?;
    let shifts = match &p.shifts {
        Some(v) => v.clone(),
        None => (0..p.grid.unwrap_or(50) as i64).collect(),
    };
    let mult = p.multiplier.unwrap_or(1);
    let averages = salehi_average(&BigInt::from(mult), s.k() as u32, lambda, &shifts, n)?;
    let mut table = Table::new(["shift", "re_avg", "im_avg", "abs_avg"]);
    for (a, z) in &averages {
        let [re, im, abs] = complex_cells(*z);
        table.push(vec![a.to_string(), re, im, abs]);
    }
    let max = averages.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max);
    let text = format!("max |A_a| = {max:.6} over {} shifts", shifts.len());
    let (summary, failure) = match p.bound {
        Some(b) => check(max < b, format!("{text} (bound {b})")),
        None => (format!("{text} (no bound set)"), None),
    };
    let details = json!({"n": n, "k": s.k(), "multiplier": mult, "max_abs": max, "bound": p.bound});
    Ok(Outcome { table, details, summary, failure })
}

fn sweep(range: Option<[i64; 2]>, name: &str) -> CliResult<std::ops::RangeInclusive<i64>> {
    let [lo, hi] = range.unwrap_or([-5, 5]);
    if lo > hi {
        return Err(CliError::Parse(format!("params.{name} is empty: {lo} > {hi}")));
    }
    Ok(lo..=hi)
}

fn ellis(config: &ExperimentConfig, s: &SkewSystem) -> CliResult<Outcome> {
    let ctx = EllisContext::from_system(s);
    let pairs: Vec<(i64, i64)> = sweep(config.params.a, "a")?
        .flat_map(|a| sweep(config.params.b, "b").into_iter().flatten().map(move |b| (a, b)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(a, b)| -> CliResult<(EllisElement, bool, Option<BigInt>)> {
            let product = EllisElement::embed_power(&ctx, &BigInt::from(a))?
                .multiply(&EllisElement::embed_power(&ctx, &BigInt::from(b))?)?;
            let equal = product == EllisElement::embed_power(&ctx, &BigInt::from(a + b))?;
            let witness = centre_membership(&product).witness;
            Ok((product, equal, witness))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new(["a", "b", "product_equal", "witness"]);
    let mut products = Vec::with_capacity(pairs.len());
    for (&(a, b), (product, equal, witness)) in pairs.iter().zip(&results) {
        let w = witness.as_ref().map(BigInt::to_string);
        table.push(vec![a.to_string(), b.to_string(), equal.to_string(), w.clone().unwrap_or_default()]);
        products.push(json!({"a": a, "b": b, "product": product.to_json(), "product_equal": equal, "witness": w}));
    }
    let failed = results.iter().filter(|(_, eq, w)| !eq || w.is_none()).count();
    let (summary, failure) = check(
        failed == 0,
        format!("{} products, {failed} failing the homomorphism or centre check", pairs.len()),
    );
    Ok(Outcome { table, details: json!({"k": s.k(), "products": products}), summary, failure })
}
