use crate::args::*;
use crate::output::{emit, render, Cell, Header, Table};
use powertail::diversity::{
    mrc_outage_generic, mrc_outage_powerlaw, mrc_phi_at, sc_outage, BranchSet, DiversityConfig, DiversityScheme,
};
use powertail::models::{ChannelModel, LogNormal};
use powertail::montecarlo::{estimate_tail, simulate_diversity, SampleSpec, StreamSpec};
use powertail::Error as CoreError;
use serde::Serialize;
use std::fmt;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Numeric(anyhow::Error),
    Validation(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Validation(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "configuration error: {e:#}"),
            Failure::Numeric(e) => write!(f, "numerical failure: {e:#}"),
            Failure::Validation(check) => write!(f, "validation failed: {check}"),
        }
    }
}

type Res<T> = Result<T, Failure>;

fn config_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Config(e.into())
}

fn numeric(model: &ChannelModel, what: &str, e: CoreError) -> Failure {
    Failure::Numeric(anyhow::anyhow!("{} at {what}: {e}", model.name()))
}

/// Values that are undefined at this level rather than failed.
fn optional(r: powertail::Result<f64>) -> powertail::Result<Option<f64>> {
    match r {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(_) => Ok(None),
        Err(CoreError::Unsupported { .. } | CoreError::Domain { .. } | CoreError::InvalidParameter { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn read_json(spec: &str) -> Res<String> {
    if spec.trim_start().starts_with('{') {
        Ok(spec.to_string())
    } else {
        std::fs::read_to_string(spec).map_err(|e| config_err(anyhow::anyhow!("cannot read model file {spec:?}: {e}")))
    }
}

fn load_model(spec: &str) -> Res<ChannelModel> {
    ChannelModel::from_json(&read_json(spec)?).map_err(config_err)
}

fn db_label(absolute: bool) -> &'static str {
    if absolute {
        "P_R_dB"
    } else {
        "p_dB"
    }
}

fn level(db: f64, reference: f64, absolute: bool) -> f64 {
    let lin = 10f64.powf(db / 10.0);
    if absolute {
        lin
    } else {
        reference * lin
    }
}

fn finish<C: Serialize>(
    command: &'static str,
    config: &C,
    seed: Option<u64>,
    notes: &[String],
    table: &Table,
    output: &Output,
) -> Res<()> {
    let header = Header::new(command, config, seed);
    let text = render(&header, notes, table, output.format);
    emit(&text, output.out.as_deref()).map_err(|e| config_err(anyhow::anyhow!("cannot write output: {e}")))
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Res<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(config_err(anyhow::anyhow!("--workers must be >= 1"))),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().map_err(config_err)?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Serialize)]
struct GridConfig<'a> {
    model: &'a ChannelModel,
    grid: Grid,
    absolute: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

pub fn tail(args: &TailArgs) -> Res<()> {
    let model = load_model(&args.model.model)?;
    if !(args.eta > 0.0) {
        return Err(config_err(anyhow::anyhow!("--eta must be > 0, got {}", args.eta)));
    }
    let a = model.mean_power();
    let mut table = Table::new(&[
        db_label(args.model.absolute),
        "P_R",
        "eps_exact",
        "eps_tail",
        "phi",
        "rel_error",
        "within_tolerance",
    ]);
    for db in args.model.grid.points() {
        let p = level(db, a, args.model.absolute);
        let at = format!("p = {db} dB");
        let exact = model.cdf_detailed(p).map_err(|e| numeric(&model, &at, e))?;
        let eps_exact = (!exact.at_precision_floor).then_some(exact.value);
        let eps_tail = optional(model.tail_approx(p)).map_err(|e| numeric(&model, &at, e))?;
        let phi = optional(model.approx_error_phi(p)).map_err(|e| numeric(&model, &at, e))?;
        let rel = match (eps_exact, eps_tail) {
            (Some(e), Some(t)) if e > 0.0 => Some(t / e - 1.0),
            _ => None,
        };
        let ok = match (phi, rel) {
            (Some(phi), _) => phi <= args.eta / (1.0 + args.eta),
            (None, Some(r)) => r.abs() <= args.eta,
            _ => false,
        };
        table.push(vec![db.into(), p.into(), eps_exact.into(), eps_tail.into(), phi.into(), rel.into(), ok.into()]);
    }
    let config = GridConfig {
        model: &model,
        grid: args.model.grid,
        absolute: args.model.absolute,
        eta: Some(args.eta),
    };
    finish("tail", &config, None, &[], &table, &args.output)
}

pub fn curve(args: &CurveArgs) -> Res<()> {
    let model = load_model(&args.model.model)?;
    let a = model.mean_power();
    let heuristic = matches!(model, ChannelModel::KappaMuAlpha(_));
    let mut cols = vec![db_label(args.model.absolute), "eps_exact", "eps_tail", "phi", "local_slope"];
    if heuristic {
        cols.push("eps_heuristic");
    }
    let mut table = Table::new(&cols);
    for db in args.model.grid.points() {
        let p = level(db, a, args.model.absolute);
        let at = format!("p = {db} dB");
        let exact = model.cdf_detailed(p).map_err(|e| numeric(&model, &at, e))?;
        let eps_exact = (!exact.at_precision_floor).then_some(exact.value);
        let eps_tail = optional(model.tail_approx(p)).map_err(|e| numeric(&model, &at, e))?;
        let phi = optional(model.approx_error_phi(p)).map_err(|e| numeric(&model, &at, e))?;
        let slope = optional(model.local_slope(p).map(|s| s.value)).map_err(|e| numeric(&model, &at, e))?;
        let mut row = vec![db.into(), eps_exact.into(), eps_tail.into(), phi.into(), slope.into()];
        if let ChannelModel::KappaMuAlpha(m) = &model {
            row.push(optional(m.tail_approx_heuristic(p)).map_err(|e| numeric(&model, &at, e))?.into());
        }
        table.push(row);
    }
    let config = GridConfig {
        model: &model,
        grid: args.model.grid,
        absolute: args.model.absolute,
        eta: None,
    };
    finish("curve", &config, None, &[], &table, &args.output)
}

pub fn invert(args: &InvertArgs) -> Res<()> {
    let model = load_model(&args.model)?;
    let a = model.mean_power();
    let mut table = Table::new(&["eps", "P_R", "p_dB", "eps_tail_at_P_R", "eps_exact_at_P_R"]);
    for &eps in &args.eps {
        let at = format!("eps = {eps:e}");
        let p = model.invert_tail(eps).map_err(|e| numeric(&model, &at, e))?;
        let back = model.tail_approx(p).map_err(|e| numeric(&model, &at, e))?;
        let exact = model.cdf(p).map_err(|e| numeric(&model, &at, e))?;
        table.push(vec![eps.into(), p.into(), (10.0 * (p / a).log10()).into(), back.into(), exact.into()]);
    }
    #[derive(Serialize)]
    struct Config<'a> {
        model: &'a ChannelModel,
        eps: &'a [f64],
    }
    let config = Config {
        model: &model,
        eps: &args.eps,
    };
    finish("invert", &config, None, &[], &table, &args.output)
}

fn log_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (k - 1) as f64).exp())
        .collect()
}

struct Check {
    name: &'static str,
    status: &'static str,
    value: Option<f64>,
    detail: String,
}

impl Check {
    fn verdict(name: &'static str, ok: bool, value: Option<f64>, detail: String) -> Self {
        Self {
            name,
            status: if ok { "pass" } else { "fail" },
            value,
            detail,
        }
    }

    fn skipped(name: &'static str, detail: &str) -> Self {
        Self {
            name,
            status: "skipped",
            value: None,
            detail: detail.to_string(),
        }
    }
}

const SANDWICH_SLACK: f64 = 1e-12;

fn phi_checks(model: &ChannelModel, eta: f64, checks: &mut Vec<Check>) -> powertail::Result<()> {
    let a = model.mean_power();
    let vb = model.validity_bound(eta)?;
    checks.push(Check {
        name: "validity_bound",
        status: "info",
        value: Some(vb / a),
        detail: format!("largest P_R/A with phi <= eta/(1+eta) at eta = {eta}"),
    });

    let vb1 = model.validity_bound(1.0)?;
    let mut worst: Option<(f64, f64)> = None;
    for p in log_grid(1e-10 * a, vb1, 20) {
        let e = model.cdf(p)?;
        let t = model.tail_approx(p)?;
        let phi = model.approx_error_phi(p)?;
        let excess = (t * (1.0 - phi) - e).max(e - t * (1.0 + phi));
        if excess > SANDWICH_SLACK && worst.is_none_or(|w| excess > w.1) {
            worst = Some((p, excess));
        }
    }
    checks.push(match worst {
        None => Check::verdict("sandwich", true, None, "20 levels in [1e-10 A, validity_bound(1)]".into()),
        Some((p, x)) => Check::verdict("sandwich", false, Some(p / a), format!("outside the bound by {x:e}")),
    });

    let mut worst_ratio = 0.0f64;
    let mut at = 0.0;
    for p in log_grid(1e-10 * a, vb, 20) {
        let exact = model.cdf_detailed(p)?;
        if exact.at_precision_floor {
            continue;
        }
        let r = (exact.value / model.tail_approx(p)? - 1.0).abs();
        if r > worst_ratio {
            worst_ratio = r;
            at = p / a;
        }
    }
    checks.push(Check::verdict(
        "ratio_convergence",
        worst_ratio <= eta,
        Some(worst_ratio),
        format!("max |eps/eps_tail - 1| below the validity bound, at P_R/A = {at:e}"),
    ));

    let target = eta / (1.0 + eta);
    let phi_vb = model.approx_error_phi(vb)?;
    let err = (phi_vb / target - 1.0).abs();
    checks.push(Check::verdict(
        "validity_bound_round_trip",
        err <= 1e-9,
        Some(err),
        "relative error of phi(validity_bound) against eta/(1+eta)".into(),
    ));
    Ok(())
}

/// `P_R` with `F(P_R) = ε` by bisection in `ln P_R`.
fn exact_quantile(model: &ChannelModel, eps: f64) -> powertail::Result<f64> {
    let (mut lo, mut hi) = (-200.0f64, 50.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if model.cdf(mid.exp())? < eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

fn lognormal_checks(m: &LogNormal, model: &ChannelModel, checks: &mut Vec<Check>) -> powertail::Result<()> {
    checks.push(Check::skipped("sandwich", "phi unavailable; LN accuracy claim checked instead"));
    if !(3.0..=24.0).contains(&m.sigma_db) {
        checks.push(Check::skipped(
            "lognormal_accuracy",
            "the accuracy claim covers 3 <= sigma_dB <= 24 only",
        ));
        return Ok(());
    }
    let mut worst = 0.0f64;
    for eps in log_grid(1e-12, 1e-2, 41) {
        let p = exact_quantile(model, eps)?;
        let r = (model.tail_approx(p)? / model.cdf(p)? - 1.0).abs();
        worst = worst.max(r);
    }
    checks.push(Check::verdict(
        "lognormal_accuracy",
        worst <= 0.15,
        Some(worst),
        "max |eps_tail/eps - 1| for 1e-12 <= eps <= 1e-2, limit 0.15".into(),
    ));
    Ok(())
}

fn deep_ratio_check(model: &ChannelModel, eta: f64, checks: &mut Vec<Check>) -> powertail::Result<()> {
    let a = model.mean_power();
    let mut worst = 0.0f64;
    for p in [1e-10 * a, 1e-9 * a, 1e-8 * a] {
        let exact = model.cdf_detailed(p)?;
        if exact.at_precision_floor || exact.value == 0.0 {
            continue;
        }
        worst = worst.max((exact.value / model.tail_approx(p)? - 1.0).abs());
    }
    checks.push(Check::verdict(
        "ratio_convergence",
        worst <= eta,
        Some(worst),
        "max |eps/eps_tail - 1| at P_R/A in {1e-10, 1e-9, 1e-8}; phi unavailable".into(),
    ));
    Ok(())
}

pub fn validate(args: &ValidateArgs) -> Res<()> {
    let model = load_model(&args.model)?;
    if !(args.eta > 0.0) {
        return Err(config_err(anyhow::anyhow!("--eta must be > 0, got {}", args.eta)));
    }
    let mut checks = Vec::new();
    let run = |checks: &mut Vec<Check>| -> powertail::Result<()> {
        if model.has_phi() {
            phi_checks(&model, args.eta, checks)
        } else if let ChannelModel::LogNormal(m) = &model {
            lognormal_checks(m, &model, checks)
        } else if model.tail_approx(1e-10 * model.mean_power()).is_ok() {
            checks.push(Check::skipped("sandwich", "phi unavailable"));
            deep_ratio_check(&model, args.eta, checks)
        } else {
            checks.push(Check::skipped("sandwich", "tail approximation unavailable"));
            checks.push(Check::skipped("ratio_convergence", "tail approximation unavailable"));
            Ok(())
        }
    };
    run(&mut checks).map_err(|e| numeric(&model, "validation", e))?;

    let mut table = Table::new(&["check", "status", "value", "detail"]);
    for c in &checks {
        table.push(vec![c.name.into(), c.status.into(), c.value.into(), c.detail.clone().into()]);
    }
    #[derive(Serialize)]
    struct Config<'a> {
        model: &'a ChannelModel,
        eta: f64,
    }
    finish(
        "validate",
        &Config { model: &model, eta: args.eta },
        None,
        &[],
        &table,
        &args.output,
    )?;
    match checks.iter().find(|c| c.status == "fail") {
        Some(c) => Err(Failure::Validation(c.name.to_string())),
        None => Ok(()),
    }
}

fn stream(n: u64, seed: u64, chunk: u64) -> Res<StreamSpec> {
    let s = StreamSpec { n, seed, chunk };
    s.validate().map_err(config_err)?;
    Ok(s)
}

pub fn mc(args: &McArgs) -> Res<()> {
    let model = load_model(&args.model.model)?;
    let run = &args.run;
    let spec = SampleSpec {
        model,
        stream: stream(run.n, run.seed, run.chunk)?,
    };
    let a = model.mean_power();
    let points = args.model.grid.points();
    let thresholds: Vec<f64> = points.iter().map(|&db| level(db, a, args.model.absolute)).collect();
    let tail = with_workers(run.workers, || estimate_tail(&spec, &thresholds))?.map_err(|e| numeric(&model, "sampling", e))?;

    let mut table = Table::new(&[
        if args.model.absolute { "threshold_dB_abs" } else { "threshold_dB" },
        "count",
        "n",
        "eps_hat",
        "ci95",
        "eps_exact",
        "eps_tail",
    ]);
    for (i, (&db, &p)) in points.iter().zip(&thresholds).enumerate() {
        let at = format!("p = {db} dB");
        let exact = model.cdf(p).map_err(|e| numeric(&model, &at, e))?;
        let approx = optional(model.tail_approx(p)).map_err(|e| numeric(&model, &at, e))?;
        table.push(vec![
            db.into(),
            tail.counts[i].into(),
            tail.n.into(),
            tail.eps_hat[i].into(),
            tail.ci95[i].into(),
            exact.into(),
            approx.into(),
        ]);
    }
    #[derive(Serialize)]
    struct Config<'a> {
        model: &'a ChannelModel,
        grid: Grid,
        absolute: bool,
        n: u64,
        seed: u64,
        chunk: u64,
    }
    let config = Config {
        model: &model,
        grid: args.model.grid,
        absolute: args.model.absolute,
        n: run.n,
        seed: run.seed,
        chunk: run.chunk,
    };
    finish("mc", &config, Some(run.seed), &[], &table, &args.output)
}

fn load_diversity(args: &DiversityArgs) -> Res<(BranchSet, DiversityScheme)> {
    let text = read_json(&args.model)?;
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(config_err)?;
    if let Some(s) = args.scheme {
        let label = match s {
            Scheme::Sc => "SC",
            Scheme::Mrc => "MRC",
        };
        if let Some(obj) = value.as_object_mut() {
            obj.insert("scheme".into(), label.into());
        }
    }
    if value.get("scheme").is_none() {
        return Err(config_err(anyhow::anyhow!("no combining scheme: pass --scheme or set \"scheme\" in the model file")));
    }
    let cfg: DiversityConfig = serde_json::from_value(value).map_err(config_err)?;
    let set = cfg.branch_set().map_err(config_err)?;
    Ok((set, cfg.scheme))
}

pub fn diversity(args: &DiversityArgs) -> Res<()> {
    let (set, scheme) = load_diversity(args)?;
    let reference = set.branches()[0].mean_power();
    let points = args.grid.points();
    let thresholds: Vec<f64> = points.iter().map(|&db| level(db, reference, args.absolute)).collect();
    let stream = args.n.map(|n| stream(n, args.seed, args.chunk)).transpose()?;
    let first = set.branches()[0];

    let empirical = match &stream {
        Some(s) => Some(
            with_workers(args.workers, || simulate_diversity(&set, scheme, s, &thresholds))?
                .map_err(|e| numeric(&first, "sampling", e))?,
        ),
        None => None,
    };

    let mut cols = vec![if args.absolute { "threshold_dB_abs" } else { "threshold_dB" }];
    if empirical.is_some() {
        cols.extend(["count", "n", "eps_hat", "ci95"]);
    }
    match scheme {
        DiversityScheme::SelectionCombining => cols.push("sc_exact"),
        DiversityScheme::MaximumRatioCombining => {
            cols.extend(["mrc_powerlaw", "mrc_generic", "phi_mrc", "phi_mrc_bernoulli"])
        }
    }
    let laws = set.power_laws().ok();
    let mut table = Table::new(&cols);
    for (i, (&db, &p)) in points.iter().zip(&thresholds).enumerate() {
        let at = format!("p = {db} dB");
        let fail = |e| {
            let names: Vec<&str> = set.branches().iter().map(|b| b.name()).collect();
            Failure::Numeric(anyhow::anyhow!("{} branches [{}] at {at}: {e}", scheme.label(), names.join(", ")))
        };
        let mut row: Vec<Cell> = vec![db.into()];
        if let Some(t) = &empirical {
            row.extend([t.counts[i].into(), t.n.into(), t.eps_hat[i].into(), t.ci95[i].into()]);
        }
        match scheme {
            DiversityScheme::SelectionCombining => {
                row.push(sc_outage(&set, p).map_err(fail)?.prob().into());
            }
            DiversityScheme::MaximumRatioCombining => {
                let law = match &laws {
                    Some(l) => optional(mrc_outage_powerlaw(l, p).map(|v| v.prob())).map_err(fail)?,
                    None => None,
                };
                let generic = optional(mrc_outage_generic(&set, p).map(|v| v.prob())).map_err(fail)?;
                let phi = match mrc_phi_at(&set, p) {
                    Ok(v) => Some(v),
                    Err(CoreError::MissingBranchBound { .. }) => None,
                    Err(e) => return Err(fail(e)),
                };
                row.extend([
                    law.into(),
                    generic.into(),
                    phi.map(|v| v.exact).into(),
                    phi.map(|v| v.bernoulli).into(),
                ]);
            }
        }
        table.push(row);
    }

    let mut notes = Vec::new();
    if scheme == DiversityScheme::MaximumRatioCombining {
        if let Err(CoreError::MissingBranchBound { branch, model }) = mrc_phi_at(&set, thresholds[0]) {
            notes.push(format!("phi_mrc unavailable: branch {branch} ({model}) has no error bound"));
        }
    }
    #[derive(Serialize)]
    struct Config<'a> {
        branches: &'a [ChannelModel],
        scheme: DiversityScheme,
        grid: Grid,
        absolute: bool,
        n: Option<u64>,
        seed: Option<u64>,
        chunk: Option<u64>,
    }
    let seed = stream.map(|s| s.seed);
    let config = Config {
        branches: set.branches(),
        scheme,
        grid: args.grid,
        absolute: args.absolute,
        n: args.n,
        seed,
        chunk: stream.map(|s| s.chunk),
    };
    finish("diversity", &config, seed, &notes, &table, &args.output)
}
