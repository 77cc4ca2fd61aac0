//! One runner per subcommand. Sweep points run in parallel and come back in
//! sweep order.

use std::f64::consts::PI;

use rayon::prelude::*;
use relent::diffraction::{negativity_sweep, opposite_pair};
use relent::lorentz::SphericalDirection;
use relent::photon::{boost_photon, Linear, PhotonState, PolarizationLabel};
use relent::purification::{
    attenuation, diffracted_input, photon_cost, photons_required, LinkParams, Outcome, PurificationTrace,
};
use relent::quantum::{negativity, trace_distance, DensityMatrix};
use relent::states::{
    boost_type1, boost_type2, boost_type3, make_type1, make_type2, make_type3, reduced_polarization,
    type1_trace_distance, FockState,
};

use crate::config::{full_phi, full_theta, param_or, Param, Protocol, Scale, Scenario, SweepSpec};
use crate::error::CliError;
use crate::table::{Cell, Table};

/// Attenuation used by `purify` when the scenario has no link.
pub const DEFAULT_ATTENUATION: f64 = 100.0;
pub const DEFAULT_TARGET_PURITY: f64 = 0.99;
/// Trace distance below which a state counts as unchanged.
pub const INVARIANCE_TOL: f64 = 1e-12;
pub const NEGATIVITY_TOL: f64 = 1e-10;

fn direction(theta: f64, phi: f64) -> Result<SphericalDirection, CliError> {
    SphericalDirection::new(theta, phi).map_err(|e| CliError::config("theta", e.to_string()))
}

fn grid3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<(f64, f64, f64)> {
    a.iter().flat_map(|&x| b.iter().flat_map(move |&y| c.iter().map(move |&z| (x, y, z)))).collect()
}

fn collect(table: &mut Table, rows: Vec<Result<Vec<Cell>, CliError>>) -> Result<(), CliError> {
    for row in rows {
        table.push(row?);
    }
    Ok(())
}

/// Trace distance of an h-polarized photon from its boosted self against β sinθ cosφ.
pub fn single_photon(s: &Scenario) -> Result<Table, CliError> {
    let betas = s.beta_values()?;
    let thetas = param_or(s.theta, full_theta(), "theta")?;
    let phis = param_or(s.phi, full_phi(), "phi")?;
    let mut table = Table::new(vec!["beta", "theta", "phi", "eps_numeric", "eps_approx", "residual"]);
    let rows = grid3(&betas, &thetas, &phis)
        .into_par_iter()
        .map(|(beta, theta, phi)| {
            let photon = PhotonState::new(direction(theta, phi)?, 1.0, PolarizationLabel::Linear(Linear::H))?;
            let eps = photon.polarization.trace_distance(&boost_photon(&photon, beta)?.polarization);
            let approx = beta * theta.sin() * phi.cos();
            Ok(vec![beta.into(), theta.into(), phi.into(), eps.into(), approx.into(), (eps - approx.abs()).into()])
        })
        .collect();
    collect(&mut table, rows)?;
    Ok(table)
}

/// Type I pair travelling in opposite directions, θ_B = π − θ_A.
pub fn pair(s: &Scenario) -> Result<Table, CliError> {
    let betas = s.beta_values()?;
    let thetas = param_or(s.theta, full_theta(), "theta")?;
    let phis = param_or(s.phi, Param::Value(0.0), "phi")?;
    let mut table = Table::new(vec!["beta", "theta", "phi", "eps_numeric", "eps_approx", "residual"]);
    let rows = grid3(&betas, &thetas, &phis)
        .into_par_iter()
        .map(|(beta, theta, phi)| {
            let a = direction(theta, phi)?;
            let eps = type1_trace_distance(a, a.antipode(), beta)?;
            let approx = beta * theta.sin();
            Ok(vec![beta.into(), theta.into(), phi.into(), eps.into(), approx.into(), (eps - approx.abs()).into()])
        })
        .collect();
    collect(&mut table, rows)?;
    Ok(table)
}

/// Negativity of the diffracted pair over beam axis α and β, with the β = 0 baseline.
pub fn negativity_table(s: &Scenario) -> Result<Table, CliError> {
    let sigma = s.sigma_or(1.0)?;
    let grid = s.grid()?;
    let alphas = param_or(
        s.alpha,
        Param::Sweep(SweepSpec { start: 0.0, stop: PI / 2.0, count: 3, scale: Scale::Linear }),
        "alpha",
    )?;
    let betas =
        param_or(s.beta, Param::Sweep(SweepSpec { start: 0.0, stop: 0.9, count: 10, scale: Scale::Linear }), "beta")?;
    let mut table = Table::new(vec!["alpha", "beta", "negativity", "baseline", "change"]);
    for alpha in alphas {
        let baseline = negativity(&opposite_pair(sigma, alpha, 0.0, grid.n_theta, grid.n_phi)?, 1)?;
        for (beta, n) in negativity_sweep(alpha, sigma, &betas, grid.n_theta, grid.n_phi)? {
            table.push(vec![alpha.into(), beta.into(), n.into(), baseline.into(), (n - baseline).into()]);
        }
    }
    Ok(table)
}

fn purification_input(s: &Scenario, default_sigma: f64) -> Result<(DensityMatrix, f64), CliError> {
    let sigma = s.sigma_or(default_sigma)?;
    let alpha = s.alpha.unwrap_or(Param::Value(0.0)).single("alpha")?;
    let beta = s.beta.unwrap_or(Param::Value(0.0)).single("beta")?;
    let grid = s.grid()?;
    Ok((diffracted_input(sigma, alpha, beta, grid.n_theta, grid.n_phi)?, sigma))
}

fn target_purity(s: &Scenario) -> Result<f64, CliError> {
    match s.target_purity.unwrap_or(DEFAULT_TARGET_PURITY) {
        t if t > 0.0 && t <= 1.0 => Ok(t),
        t => Err(CliError::config("target_purity", format!("must lie in (0, 1], got {t}"))),
    }
}

pub fn outcome_name(o: Outcome) -> String {
    match o {
        Outcome::Reached => "reached".into(),
        Outcome::FidelityDecreased(k) => format!("fidelity_decreased_at_{k}"),
        Outcome::RoundLimit => "round_limit".into(),
    }
}

/// Round-by-round purification trace. Rows after the first failing round are
/// not produced; the failing round itself has `counted = false`.
pub fn purify(s: &Scenario) -> Result<(Table, PurificationTrace), CliError> {
    let (rho, _) = purification_input(s, 0.5)?;
    let att = match &s.link {
        Some(link) => attenuation(&link.params()?)?,
        None => DEFAULT_ATTENUATION,
    };
    let trace = photons_required(&rho, target_purity(s)?, att, &relent::purification::Protocol::standard())?;
    let mut table = Table::new(vec!["k", "fidelity", "purity", "success", "photons", "counted"]);
    let successes: Vec<f64> = trace.rounds[1..].iter().map(|r| r.success).collect();
    let failed_round = match trace.outcome {
        Outcome::FidelityDecreased(k) => Some(k),
        _ => None,
    };
    for row in &trace.rounds {
        let photons = photon_cost(att, &successes[..row.k]);
        table.push(vec![
            row.k.into(),
            row.fidelity.into(),
            row.purity.into(),
            row.success.into(),
            photons.into(),
            (Some(row.k) != failed_round).into(),
        ]);
    }
    Ok((table, trace))
}

/// Link attenuation and the photons needed to reach the target purity.
pub fn budget(s: &Scenario) -> Result<(Table, PurificationTrace), CliError> {
    let link = match &s.link {
        Some(link) => link.params()?,
        None => LinkParams::reference(),
    };
    let att = attenuation(&link)?;
    let (rho, sigma) = purification_input(s, 0.5)?;
    let target = target_purity(s)?;
    let trace = photons_required(&rho, target, att, &relent::purification::Protocol::standard())?;
    let mut table = Table::new(vec![
        "length",
        "wavelength",
        "d_s",
        "d_a",
        "attenuation",
        "sigma",
        "target_purity",
        "rounds",
        "photons_required",
        "outcome",
    ]);
    let rounds = trace.steps() - usize::from(matches!(trace.outcome, Outcome::FidelityDecreased(_)));
    table.push(vec![
        link.length.into(),
        link.wavelength.into(),
        link.d_s.into(),
        link.d_a.into(),
        att.into(),
        sigma.into(),
        target.into(),
        rounds.into(),
        trace.photons_required.into(),
        outcome_name(trace.outcome).as_str().into(),
    ]);
    Ok((table, trace))
}

struct LiRow {
    raw: f64,
    compensated: f64,
    neg_source: f64,
    neg_boosted: f64,
    phase: f64,
}

fn li_row(protocol: Protocol, a: SphericalDirection, beta: f64) -> Result<LiRow, CliError> {
    let b = a.antipode();
    match protocol {
        Protocol::Type1 => {
            let src = make_type1(a, b);
            let r0 = reduced_polarization(&src);
            let r1 = reduced_polarization(&boost_type1(&src, beta)?);
            let td = trace_distance(&r0, &r1)?;
            Ok(LiRow {
                raw: td,
                compensated: td,
                neg_source: negativity(&r0, 0)?,
                neg_boosted: negativity(&r1, 0)?,
                phase: 0.0,
            })
        }
        Protocol::Type2 => {
            let src = make_type2(a, b, 1, [0.0, 0.0])?;
            let out = boost_type2(&src, beta)?;
            let phase = out.wigner_phases[0].abs().max(out.wigner_phases[1].abs());
            fock_row(&src, &out, phase)
        }
        Protocol::Type3 => {
            let src = make_type3(a, b, 1)?;
            let out = boost_type3(&src, beta)?;
            fock_row(&src, &out, out.wigner_phase.abs())
        }
    }
}

fn fock_row<S: FockState>(src: &S, out: &S, phase: f64) -> Result<LiRow, CliError> {
    let r0 = src.number_basis_reduced(false);
    let raw = trace_distance(&r0, &out.number_basis_reduced(false))?;
    let compensated = trace_distance(&src.number_basis_reduced(true), &out.number_basis_reduced(true))?;
    Ok(LiRow {
        raw,
        compensated,
        neg_source: negativity(&r0, 0)?,
        neg_boosted: negativity(&out.number_basis_reduced(false), 0)?,
        phase,
    })
}

/// Frame comparison for each entangled-state type at the scenario geometry.
/// Type III, and type II after phase compensation, must come out unchanged;
/// anything else is reported as an invariant breach.
pub fn li_check(s: &Scenario) -> Result<Table, CliError> {
    let beta = s.beta.unwrap_or(Param::Value(crate::config::DEFAULT_BETA)).single("beta")?;
    let theta = s.theta.unwrap_or(Param::Value(PI / 2.0)).single("theta")?;
    let phi = s.phi.unwrap_or(Param::Value(0.0)).single("phi")?;
    let a = direction(theta, phi)?;
    let protocols = match s.protocol {
        Some(p) => vec![p],
        None => Protocol::ALL.to_vec(),
    };
    let mut table = Table::new(vec![
        "protocol",
        "beta",
        "theta",
        "phi",
        "trace_distance_raw",
        "trace_distance_compensated",
        "negativity_source",
        "negativity_boosted",
        "wigner_phase",
        "verdict",
    ]);
    for p in protocols {
        let r = li_row(p, a, beta)?;
        let td = if s.compensate_phases { r.compensated } else { r.raw };
        let same_entanglement = (r.neg_source - r.neg_boosted).abs() <= NEGATIVITY_TOL;
        let verdict = if td <= INVARIANCE_TOL && same_entanglement {
            "invariant"
        } else if same_entanglement {
            "entanglement_preserved"
        } else {
            "entanglement_changed"
        };
        let must_hold = match p {
            Protocol::Type1 => true,
            Protocol::Type2 => r.compensated <= INVARIANCE_TOL,
            Protocol::Type3 => r.raw <= INVARIANCE_TOL,
        };
        if !(must_hold && same_entanglement) {
            return Err(CliError::Numerical(format!(
                "{} breaks frame invariance: trace distance {:e}, negativity {} -> {}",
                p.name(),
                r.raw,
                r.neg_source,
                r.neg_boosted
            )));
        }
        table.push(vec![
            p.name().into(),
            beta.into(),
            theta.into(),
            phi.into(),
            r.raw.into(),
            r.compensated.into(),
            r.neg_source.into(),
            r.neg_boosted.into(),
            r.phase.into(),
            verdict.into(),
        ]);
    }
    Ok(table)
}
