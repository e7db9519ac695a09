//! Subcommand implementations. Each returns the full output document.

use std::f64::consts::TAU;

use serde::Serialize;
use serde_json::json;

use gmac::gaussian::{trace_boundary, BvnCov, RegionShape};
use gmac::quantities::{dispersion_matrix, mi_vector, sequence_moments};
use gmac::regions::{
    angle_sweep, capacity_boundary, global_region, local_region_case, single_user_expansion, BoundaryPoint, LocalRegion, RatePoint, SecondOrderPair,
};
use gmac::simulator::{
    achievability_bound, berry_esseen_report, converse_bound, default_gamma, representative_pair,
    sample_infodensity_sums, type_class_index, write_an_stream, BoundReport,
};
use gmac::{ChannelParams, CorrelationPoint, Error};

use crate::config::{Command, Format, McKind, RunConfig};
use crate::output::{fmt9, json_doc, Csv};

/// A failed run with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

/// Exit code for a library error: precondition failures are validation
/// errors, everything else is numerical.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter { .. }
        | Error::LengthMismatch { .. }
        | Error::InconsistentBoundaryPoint { .. }
        | Error::DegenerateRho { .. } => EXIT_VALIDATION,
        Error::NotPsd { .. }
        | Error::BisectionFailed { .. }
        | Error::SandwichViolation(_)
        | Error::ParallelApproach { .. }
        | Error::BerryEsseenViolation { .. }
        | Error::Stream(_) => EXIT_NUMERICAL,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<String, CliError>;

fn params(cfg: &RunConfig) -> Result<ChannelParams, CliError> {
    Ok(ChannelParams::new(cfg.s1, cfg.s2)?)
}

fn rho(cfg: &RunConfig) -> Result<CorrelationPoint, CliError> {
    Ok(CorrelationPoint::new(cfg.rho)?)
}

fn blocklength(cfg: &RunConfig) -> Result<usize, CliError> {
    if cfg.n == 0 {
        return Err(CliError::validation("invalid parameter `n`: blocklength must be >= 1"));
    }
    usize::try_from(cfg.n).map_err(|_| CliError::validation("invalid parameter `n`: too large"))
}

pub fn run(command: &Command, cfg: &RunConfig) -> CmdResult {
    match command {
        Command::Capacity => capacity(cfg),
        Command::Global => global(cfg),
        Command::PsiInv => psi_inv(cfg),
        Command::Local => local(cfg),
        Command::Sweep => sweep(cfg),
        Command::Mc { kind } => mc(cfg, *kind),
        Command::SingleUser => single_user(cfg),
    }
}

fn capacity(cfg: &RunConfig) -> CmdResult {
    let p = params(cfg)?;
    let cb = capacity_boundary(&p, cfg.grid)?;
    if cfg.format == Format::Json {
        return Ok(json_doc(cfg, &cb));
    }
    let mut csv = Csv::new(cfg);
    let [top, bottom] = cb.vertical_segment;
    csv.comment_nums("vertical_segment", &[top[0], top[1], bottom[0], bottom[1]]);
    csv.columns(&["rho", "R1", "R2"]);
    for (r, pt) in cb.rho.iter().zip(&cb.curve.points) {
        csv.row(&[*r, pt[0], pt[1]]);
    }
    Ok(csv.finish())
}

fn global(cfg: &RunConfig) -> CmdResult {
    let p = params(cfg)?;
    let rhos = cfg.rho_grid.clone().unwrap_or_else(|| vec![cfg.rho]);
    if rhos.is_empty() {
        return Err(CliError::validation("invalid parameter `rho_grid`: must not be empty"));
    }
    let regions = rhos
        .iter()
        .map(|&r| global_region(&p, CorrelationPoint::new(r)?, cfg.n, cfg.eps, cfg.offset, cfg.resolution))
        .collect::<gmac::Result<Vec<_>>>()?;
    if cfg.format == Format::Json {
        #[derive(Serialize)]
        struct Doc<'a> {
            regions: &'a [gmac::regions::GlobalRegion],
        }
        return Ok(json_doc(cfg, &Doc { regions: &regions }));
    }
    let mut csv = Csv::new(cfg);
    csv.columns(&["rho", "n", "eps", "z1", "z2", "R1", "R2"]);
    for g in &regions {
        let rate = g.rate_plane();
        for (z, r) in g.psi_inverse.vertices.iter().zip(&rate.points) {
            csv.row(&[g.rho, g.n as f64, g.eps, z[0], z[1], r[0], r[1]]);
        }
    }
    Ok(csv.finish())
}

fn psi_inv(cfg: &RunConfig) -> CmdResult {
    let p = params(cfg)?;
    let cov = BvnCov::from(dispersion_matrix(&p, rho(cfg)?));
    let region = trace_boundary(&cov, cfg.eps, cfg.resolution)?;
    let scale = if cfg.scale_by_sqrt_n {
        1.0 / (blocklength(cfg)? as f64).sqrt()
    } else {
        1.0
    };
    let vertices = region.scaled_vertices(scale);
    let asymptotes = [region.asymptotes[0] * scale, region.asymptotes[1] * scale];
    let shape = match region.shape {
        RegionShape::Curved => "curved",
        RegionShape::Rectangle { .. } => "rectangle",
    };
    if cfg.format == Format::Json {
        let verts: Vec<_> = vertices
            .iter()
            .zip(&region.residuals)
            .map(|(z, res)| json!({ "frame": "vector", "z": z, "psi_residual": res }))
            .collect();
        let doc = json!({
            "cov": region.cov,
            "eps": region.eps,
            "scale": scale,
            "shape": shape,
            "asymptotes": { "frame": "vector", "z": asymptotes },
            "vertices": verts,
        });
        return Ok(json_doc(cfg, &doc));
    }
    let mut csv = Csv::new(cfg);
    csv.comment_nums("cov", &[cov.v11, cov.v22, cov.v12]);
    csv.comment("shape", shape);
    csv.comment("scale", fmt9(scale));
    csv.comment_nums("asymptotes", &asymptotes);
    csv.columns(&["z1", "z2", "psi_residual"]);
    for (z, res) in vertices.iter().zip(&region.residuals) {
        csv.row(&[z[0], z[1], *res]);
    }
    Ok(csv.finish())
}

fn boundary_point(cfg: &RunConfig, p: &ChannelParams) -> Result<BoundaryPoint, CliError> {
    match (cfg.r1, cfg.r2) {
        (Some(r1), Some(r2)) => Ok(BoundaryPoint::classify(p, RatePoint::new(r1, r2))?),
        (None, None) if cfg.rho == 0.0 => Ok(BoundaryPoint::vertical(p, 0.0)?),
        (None, None) => Ok(BoundaryPoint::on_curve(p, rho(cfg)?)?),
        _ => Err(CliError::validation("--r1 and --r2 must be given together")),
    }
}

fn local(cfg: &RunConfig) -> CmdResult {
    let p = params(cfg)?;
    let bp = boundary_point(cfg, &p)?;
    let region = local_region_case(&bp, &p, cfg.eps, cfg.resolution)?;
    if cfg.format == Format::Json {
        return Ok(json_doc(cfg, &json!({ "boundary_point": bp, "region": region })));
    }
    let mut csv = Csv::new(cfg);
    csv.comment("rho_star", fmt9(bp.rho_star));
    csv.comment_nums("rates", &bp.rates.as_array());
    csv.comment("corner", bp.corner.to_string());
    match &region {
        LocalRegion::VerticalI { threshold } => {
            csv.comment("case", "vertical_i");
            csv.columns(&["threshold"]);
            csv.row(&[*threshold]);
        }
        LocalRegion::CurvedII {
            derivative,
            half_plane,
            psi_inverse,
            ..
        } => {
            csv.comment("case", "curved_ii");
            csv.comment_nums("derivative", &[derivative.d1, derivative.d12, derivative.d2()]);
            csv.comment("a_rho", fmt9(half_plane.a));
            csv.comment("b", fmt9(half_plane.b));
            csv.comment("theta_star", fmt9(half_plane.theta_star));
            csv.comment_nums("tangency", &half_plane.tangency.as_array());
            csv.comment("tie", half_plane.tie.to_string());
            csv.columns(&["L1", "L2"]);
            for v in &psi_inverse.vertices {
                csv.row(&SecondOrderPair::from_vector(*v).as_array());
            }
        }
        LocalRegion::TopIII { top, derivative } => {
            csv.comment("case", "top_iii");
            csv.comment_nums("rectangle_corner_vector", &[0.0, *top]);
            csv.comment_nums("cone_direction_vector", &[-derivative.d1, -derivative.d12]);
            csv.columns(&["beta", "L1", "L2"]);
            for k in 0..=16 {
                let beta = -(k as f64) / 8.0;
                let v = [beta * derivative.d1, top + beta * derivative.d12];
                let l = SecondOrderPair::from_vector(v);
                csv.row(&[beta, l.l1, l.l2]);
            }
        }
    }
    Ok(csv.finish())
}

fn sweep(cfg: &RunConfig) -> CmdResult {
    let p = params(cfg)?;
    let s = angle_sweep(&p, rho(cfg)?, cfg.eps, cfg.grid, cfg.resolution)?;
    if cfg.format == Format::Json {
        return Ok(json_doc(cfg, &s));
    }
    let mut csv = Csv::new(cfg);
    csv.comment_nums("critical_angles_rad", &s.critical);
    csv.comment_nums("critical_angles_frac_2pi", &[s.critical[0] / TAU, s.critical[1] / TAU]);
    csv.comment("a_rho", fmt9(s.half_plane.a));
    csv.comment("b", fmt9(s.half_plane.b));
    csv.comment("theta_star", fmt9(s.half_plane.theta_star));
    csv.comment_nums("tangency", &s.half_plane.tangency.as_array());
    csv.columns(&["theta_rad", "theta_frac_2pi", "L1", "L2", "norm"]);
    for r in &s.rows {
        csv.row(&[r.theta, r.theta_frac, r.l1, r.l2, r.norm]);
    }
    Ok(csv.finish())
}

fn single_user(cfg: &RunConfig) -> CmdResult {
    let v = single_user_expansion(cfg.s1, cfg.n, cfg.eps, cfg.offset)?;
    if cfg.format == Format::Json {
        return Ok(json_doc(cfg, &json!({ "s": cfg.s1, "n": cfg.n, "eps": cfg.eps, "offset": cfg.offset, "log_m": v })));
    }
    let mut csv = Csv::new(cfg);
    csv.columns(&["S", "n", "eps", "offset", "log_M"]);
    csv.row(&[cfg.s1, cfg.n as f64, cfg.eps, cfg.offset, v]);
    Ok(csv.finish())
}

fn mc(cfg: &RunConfig, kind: McKind) -> CmdResult {
    let p = params(cfg)?;
    let r = rho(cfg)?;
    let n = blocklength(cfg)?;
    let params_json = json!({ "s1": cfg.s1, "s2": cfg.s2, "rho": cfg.rho, "n": n, "eps": cfg.eps });
    let gamma = cfg.gamma.unwrap_or_else(|| default_gamma(n));
    let rates = || -> Result<[f64; 2], CliError> {
        match (cfg.r1, cfg.r2) {
            (Some(a), Some(b)) => Ok([a, b]),
            (None, None) => {
                let m = mi_vector(&p, r);
                Ok([m.i1, m.i12 - m.i1])
            }
            _ => Err(CliError::validation("--r1 and --r2 must be given together")),
        }
    };
    let doc = match kind {
        McKind::Moments => {
            let pair = representative_pair(&p, n, cfg.rho)?;
            let samples = sample_infodensity_sums(&p, r, &pair, cfg.trials, cfg.seed)?;
            if let Some(path) = &cfg.stream {
                let file = std::fs::File::create(path)
                    .map_err(|e| CliError::validation(format!("cannot create stream file {path}: {e}")))?;
                write_an_stream(&samples, std::io::BufWriter::new(file))?;
            }
            let sample = samples.moments();
            let exact = sequence_moments(&p, r, pair.x1(), pair.x2())?;
            let m = cfg.trials as f64;
            let z: Vec<f64> = (0..2)
                .map(|i| (sample.mean[i] - exact.mean[i]) / (exact.cov[i][i] / m).sqrt())
                .collect();
            json!({
                "params": params_json,
                "seed": cfg.seed,
                "trials": cfg.trials,
                "type_class": type_class_index(&pair, n)?,
                "sample": { "mean": sample.mean, "cov": sample.cov },
                "closed_form": { "mean": exact.mean, "cov": exact.cov },
                "mean_z_scores": z,
            })
        }
        McKind::Converse => {
            let [r1, r2] = rates()?;
            let pair = representative_pair(&p, n, cfg.rho)?;
            let rep = converse_bound(&p, r, &pair, r1, r2, gamma, cfg.trials, cfg.seed)?;
            bound_record(params_json, &rep, Some(type_class_index(&pair, n)?))
        }
        McKind::Achievability => {
            let [r1, r2] = rates()?;
            let rep = achievability_bound(&p, r, r1, r2, n, gamma, cfg.trials, cfg.seed)?;
            bound_record(params_json, &rep, None)
        }
        McKind::BerryEsseen => {
            let pair = representative_pair(&p, n, cfg.rho)?;
            let m = sequence_moments(&p, r, pair.x1(), pair.x2())?;
            let rep = berry_esseen_report(&p, r, &pair, m.mean, cfg.trials, cfg.seed)?;
            let doc = json!({
                "params": params_json,
                "seed": cfg.seed,
                "trials": cfg.trials,
                "p_hat": rep.empirical,
                "std_err": rep.std_err,
                "bound": rep.bound,
                "slack": rep.envelope - rep.bound,
                "gaussian": rep.gaussian,
                "deviation": rep.deviation(),
                "envelope": rep.envelope,
                "thresholds": rep.thresholds,
                "third_moment": rep.third,
                "lambda_min": rep.lambda_min,
                "within": rep.within,
            });
            let text = json_doc(cfg, &doc);
            if !rep.within {
                let err = Error::BerryEsseenViolation {
                    empirical: rep.empirical,
                    gaussian: rep.gaussian,
                    envelope: rep.envelope,
                };
                return Err(CliError {
                    code: EXIT_NUMERICAL,
                    message: format!("{err}\n{text}"),
                });
            }
            return Ok(text);
        }
    };
    Ok(json_doc(cfg, &doc))
}

fn bound_record(params: serde_json::Value, rep: &BoundReport, type_class: Option<i64>) -> serde_json::Value {
    json!({
        "params": params,
        "seed": rep.union.seed,
        "trials": rep.union.trials,
        "p_hat": rep.union.p_hat,
        "std_err": rep.union.std_err,
        "bound": rep.bound,
        "slack": rep.slack,
        "kind": rep.kind,
        "r1": rep.r1,
        "r2": rep.r2,
        "gamma": rep.gamma,
        "event_probs": rep.event_probs,
        "power_violation_fraction": rep.power_violation_fraction,
        "type_class": type_class,
    })
}
