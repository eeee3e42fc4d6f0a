//! Experiment drivers: pure computation, no I/O. Grid points and depth
//! values are dispatched to the rayon pool and re-assembled in
//! deterministic order.

use gaussrev::fisher::bkm_displacement_metric;
use gaussrev::gaussian::{squeezed_thermal_cov, SqueezedThermalParams};
use gaussrev::generator::{
    bayes_cp_spectrum, bayes_reverse_generator, tmsv_schur_witness, GaussianChannel,
    GaussianGenerator,
};
use gaussrev::linalg::{hermitize, symplectic_matrix, to_complex, CMatrix};
use gaussrev::repair::{isotropic_repair, minimal_repair, RepairProblem};
use gaussrev::trajectory::{noise_floor_report, NoiseFloorConfig, NoiseFloorReport, WeightSource};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Core(#[from] gaussrev::Error),
    /// A cross-check inside a run failed; this is a science regression, not
    /// an I/O problem, and maps to its own exit code.
    #[error("analysis violation: {0}")]
    Analysis(String),
}

// ---------------------------------------------------------------------------
// phase diagram

#[derive(Debug, Clone)]
pub struct PhaseDiagramParams {
    pub gamma: f64,
    pub nu_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseRow {
    pub nu: f64,
    pub r: f64,
    pub lambda_min: f64,
    pub repair_trace: f64,
}

#[derive(Debug, Clone)]
pub struct PhaseDiagramData {
    /// Row-major over the grid: outer loop r ascending, inner loop nu.
    pub rows: Vec<PhaseRow>,
    /// Analytic boundary polyline cosh(2r) = nu, clipped to the nu range.
    pub boundary: Vec<(f64, f64)>,
}

pub fn run_phase_diagram(p: &PhaseDiagramParams) -> Result<PhaseDiagramData, RunError> {
    if p.nu_grid.is_empty() || p.r_grid.is_empty() {
        return Err(RunError::Params("grids must be nonempty".into()));
    }
    if p.nu_grid[0] < 1.0 {
        return Err(RunError::Params(format!(
            "nu grid must start at or above 1, got {}",
            p.nu_grid[0]
        )));
    }
    let rows: Vec<PhaseRow> = p
        .r_grid
        .par_iter()
        .map(|&r| -> Result<Vec<PhaseRow>, RunError> {
            let fwd = GaussianGenerator::attenuator(p.gamma)?;
            p.nu_grid
                .iter()
                .map(|&nu| {
                    let params = SqueezedThermalParams::new(nu, r)?;
                    let spectrum = bayes_cp_spectrum(p.gamma, &params)?;
                    let lambda_min = spectrum.lambda_minus.min(spectrum.lambda_plus);
                    // Cross-check the closed form against the eigensolver on
                    // the assembled CP matrix.
                    let m = bayes_reverse_generator(&fwd, &squeezed_thermal_cov(&params))?
                        .cp_matrix();
                    if (m.min_eigenvalue() - lambda_min).abs() > 1e-9 {
                        return Err(RunError::Analysis(format!(
                            "closed-form lambda_min {lambda_min} disagrees with eigensolver \
                             {} at nu={nu}, r={r}",
                            m.min_eigenvalue()
                        )));
                    }
                    let repair = isotropic_repair(&m, 1.0)?;
                    Ok(PhaseRow {
                        nu,
                        r,
                        lambda_min,
                        repair_trace: repair.repair_trace(),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let (nu_lo, nu_hi) = (p.nu_grid[0], *p.nu_grid.last().unwrap());
    let boundary = p
        .r_grid
        .iter()
        .filter_map(|&r| {
            let nu = (2.0 * r).cosh();
            (nu >= nu_lo && nu <= nu_hi).then_some((r, nu))
        })
        .collect();
    Ok(PhaseDiagramData { rows, boundary })
}

// ---------------------------------------------------------------------------
// TMSV witness

#[derive(Debug, Clone)]
pub struct WitnessParams {
    pub gamma: f64,
    pub t: f64,
    pub nu: f64,
    pub r: f64,
    pub dt: f64,
    pub mu_list: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BayesBlock {
    pub rescaled_min_eigenvalue: f64,
    pub threshold_eigenvalue: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessChannelReport {
    pub channel: String,
    pub mu: Vec<f64>,
    /// Witness matrices, one per mu, rows of (re, im) pairs.
    pub witnesses: Vec<Vec<Vec<(f64, f64)>>>,
    pub max_pairwise_deviation: f64,
    pub closed_form_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bayes: Option<BayesBlock>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub channels: Vec<WitnessChannelReport>,
}

fn complex_rows(m: &CMatrix) -> Vec<Vec<(f64, f64)>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
        .collect()
}

fn witness_for_channel(
    name: &str,
    channel: &GaussianChannel,
    mu_list: &[f64],
) -> Result<(WitnessChannelReport, CMatrix), RunError> {
    let witnesses: Vec<CMatrix> = mu_list
        .iter()
        .map(|&mu| tmsv_schur_witness(channel, mu))
        .collect::<Result<_, _>>()?;
    let mut max_pairwise = 0.0f64;
    for a in &witnesses {
        for b in &witnesses {
            max_pairwise = max_pairwise.max((a - b).norm());
        }
    }
    let sigma = symplectic_matrix(1);
    let defect = &sigma - channel.x() * &sigma * channel.x().transpose();
    let closed = to_complex(channel.y()) + to_complex(&defect) * Complex64::new(0.0, 1.0);
    let closed_dev = witnesses
        .iter()
        .map(|w| (w - &closed).norm())
        .fold(0.0f64, f64::max);
    let first = witnesses[0].clone();
    Ok((
        WitnessChannelReport {
            channel: name.to_string(),
            mu: mu_list.to_vec(),
            witnesses: witnesses.iter().map(complex_rows).collect(),
            max_pairwise_deviation: max_pairwise,
            closed_form_deviation: closed_dev,
            bayes: None,
        },
        first,
    ))
}

pub fn run_witness(p: &WitnessParams) -> Result<WitnessReport, RunError> {
    if p.mu_list.is_empty() {
        return Err(RunError::Params("mu list must be nonempty".into()));
    }
    if !(p.dt > 0.0) {
        return Err(RunError::Params(format!("dt must be positive, got {}", p.dt)));
    }
    let mut channels = Vec::new();

    let (identity_report, _) =
        witness_for_channel("identity", &GaussianChannel::identity(1), &p.mu_list)?;
    channels.push(identity_report);

    let attenuator = GaussianChannel::attenuator_step(p.gamma, p.t)?;
    let (attenuator_report, _) = witness_for_channel("attenuator-step", &attenuator, &p.mu_list)?;
    channels.push(attenuator_report);

    let params = SqueezedThermalParams::new(p.nu, p.r)?;
    let fwd = GaussianGenerator::attenuator(p.gamma)?;
    let rev = bayes_reverse_generator(&fwd, &squeezed_thermal_cov(&params))?;
    let step = GaussianChannel::from_generator_step(&rev, p.dt);
    let (mut bayes_report, first) = witness_for_channel("bayes-step", &step, &p.mu_list)?;
    let rescaled =
        gaussrev::linalg::hermitian_eigenvalues(&hermitize(&first))[0] / p.dt;
    let threshold = bayes_cp_spectrum(p.gamma, &params)?.lambda_minus;
    bayes_report.bayes = Some(BayesBlock {
        rescaled_min_eigenvalue: rescaled,
        threshold_eigenvalue: threshold,
        difference: rescaled - threshold,
    });
    channels.push(bayes_report);

    Ok(WitnessReport { channels })
}

// ---------------------------------------------------------------------------
// pointwise repair

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepairWeight {
    /// Identity weight; the repair minimizes the plain trace.
    Identity,
    /// BKM displacement metric of the squeezed-thermal reference.
    Bkm,
}

#[derive(Debug, Clone)]
pub struct RepairParams {
    pub gamma: f64,
    pub nu: f64,
    pub r: f64,
    pub weight: RepairWeight,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepairReport {
    pub gamma: f64,
    pub nu: f64,
    pub r: f64,
    pub weight: RepairWeight,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub delta_d: Vec<Vec<f64>>,
    pub cost: f64,
    pub repair_trace: f64,
    pub feasibility_margin: f64,
    pub optimality_gap: f64,
    /// Phase-covariant closed form under the identity weight, as a
    /// cross-check column.
    pub isotropic_trace: f64,
}

pub fn run_repair(p: &RepairParams) -> Result<RepairReport, RunError> {
    let params = SqueezedThermalParams::new(p.nu, p.r)?;
    let spectrum = bayes_cp_spectrum(p.gamma, &params)?;
    let reference = squeezed_thermal_cov(&params);
    let fwd = GaussianGenerator::attenuator(p.gamma)?;
    let m = bayes_reverse_generator(&fwd, &reference)?.cp_matrix();
    let weight = match p.weight {
        RepairWeight::Identity => gaussrev::linalg::RMatrix::identity(2, 2),
        RepairWeight::Bkm => bkm_displacement_metric(&reference)?.matrix().clone(),
    };
    let solved = minimal_repair(&RepairProblem::new(m.clone(), weight)?)?;
    let iso = isotropic_repair(&m, 1.0)?;
    Ok(RepairReport {
        gamma: p.gamma,
        nu: p.nu,
        r: p.r,
        weight: p.weight,
        lambda_minus: spectrum.lambda_minus,
        lambda_plus: spectrum.lambda_plus,
        delta_d: (0..2)
            .map(|i| (0..2).map(|j| solved.delta_d[(i, j)]).collect())
            .collect(),
        cost: solved.cost,
        repair_trace: solved.delta_d.trace(),
        feasibility_margin: solved.feasibility_margin,
        optimality_gap: solved.optimality_gap,
        isotropic_trace: iso.repair_trace(),
    })
}

// ---------------------------------------------------------------------------
// noise floor

#[derive(Debug, Clone)]
pub struct NoiseFloorParams {
    pub gamma: f64,
    pub class: Vec<SqueezedThermalParams>,
    pub s_grid: Vec<f64>,
    pub steps: usize,
    pub weight_source: WeightSource,
}

/// Tolerance for the per-row inequality check; a row fails the run when
/// `bound - neg2lnf_wc` exceeds it.
pub const INEQUALITY_SLACK: f64 = 1e-9;

pub fn run_noise_floor(p: &NoiseFloorParams) -> Result<NoiseFloorReport, RunError> {
    let mut cfg = NoiseFloorConfig::new(p.gamma, p.steps);
    cfg.weight_source = p.weight_source;
    // Depth values are independent; farm them out and reassemble in order.
    let parts: Vec<NoiseFloorReport> = p
        .s_grid
        .par_iter()
        .map(|&s| noise_floor_report(&p.class, &[s], &cfg))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(parts.len());
    let mut members = Vec::with_capacity(parts.len());
    for part in parts {
        rows.extend(part.rows);
        members.extend(part.members);
    }
    Ok(NoiseFloorReport { rows, members })
}

/// Rows violating the noise-floor inequality. With `flip` the check is
/// inverted (rows that satisfy the bound are reported instead), which
/// exists so the exit-code path can be exercised end to end.
pub fn violating_rows(report: &NoiseFloorReport, flip: bool) -> Vec<f64> {
    report
        .rows
        .iter()
        .filter(|row| {
            let violation = row.bound - row.neg2lnf_wc;
            if flip {
                violation < INEQUALITY_SLACK
            } else {
                violation > INEQUALITY_SLACK
            }
        })
        .map(|row| row.s)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_diagram_rows_are_row_major_and_cross_checked() {
        let data = run_phase_diagram(&PhaseDiagramParams {
            gamma: 1.0,
            nu_grid: vec![1.0, 2.0],
            r_grid: vec![0.0, 0.5],
        })
        .unwrap();
        assert_eq!(data.rows.len(), 4);
        // Outer r, inner nu.
        assert_eq!((data.rows[0].nu, data.rows[0].r), (1.0, 0.0));
        assert_eq!((data.rows[1].nu, data.rows[1].r), (2.0, 0.0));
        assert_eq!((data.rows[2].nu, data.rows[2].r), (1.0, 0.5));
        // Boundary point at (nu=1, r=0): lambda_min 0, no repair.
        assert!(data.rows[0].lambda_min.abs() < 1e-14);
        assert_eq!(data.rows[0].repair_trace, 0.0);
        // Defective point (nu=1, r=0.5): cosh(1) > 1.
        let defective = &data.rows[2];
        assert!(defective.lambda_min < 0.0);
        assert!((defective.repair_trace - 2.0 * defective.lambda_min.abs()) < 1e-10);
        // Boundary polyline stays inside the nu range.
        assert!(data.boundary.iter().all(|&(_, nu)| (1.0..=2.0).contains(&nu)));
    }

    #[test]
    fn defect_row_has_trace_twice_lambda() {
        let data = run_phase_diagram(&PhaseDiagramParams {
            gamma: 1.0,
            nu_grid: vec![1.2],
            r_grid: vec![0.6],
        })
        .unwrap();
        let row = &data.rows[0];
        assert!((row.lambda_min - (-2.035518557747916)).abs() < 1e-10);
        assert!((row.repair_trace - 2.0 * 2.035518557747916).abs() < 1e-9);
    }

    #[test]
    fn witness_identity_channel_is_all_zero() {
        let report = run_witness(&WitnessParams {
            gamma: 1.0,
            t: 0.3,
            nu: 1.2,
            r: 0.6,
            dt: 1e-6,
            mu_list: vec![1.1, 1.5, 2.0, 5.0, 20.0],
        })
        .unwrap();
        let identity = &report.channels[0];
        assert_eq!(identity.channel, "identity");
        assert!(identity.max_pairwise_deviation < 1e-14);
        assert!(identity.closed_form_deviation < 1e-14);
        assert_eq!(identity.witnesses.len(), 5);
        assert!(identity
            .witnesses
            .iter()
            .flatten()
            .flatten()
            .all(|&(re, im)| re.abs() < 1e-14 && im.abs() < 1e-14));

        let attenuator = &report.channels[1];
        assert!(attenuator.max_pairwise_deviation < 1e-12);
        assert!(attenuator.closed_form_deviation < 1e-12);

        let bayes = report.channels[2].bayes.as_ref().unwrap();
        assert!(bayes.difference.abs() < 1e-3, "got {}", bayes.difference);
        assert!((bayes.threshold_eigenvalue - (-2.035518557747916)).abs() < 1e-12);
    }

    #[test]
    fn repair_report_cross_checks() {
        let report = run_repair(&RepairParams {
            gamma: 1.0,
            nu: 1.2,
            r: 0.6,
            weight: RepairWeight::Identity,
        })
        .unwrap();
        assert!((report.cost - 2.0 * 2.035518557747916).abs() < 1e-6);
        assert!((report.repair_trace - report.isotropic_trace).abs() < 1e-5);
        assert!(report.feasibility_margin >= -1e-10);

        let weighted = run_repair(&RepairParams {
            gamma: 1.0,
            nu: 1.2,
            r: 0.6,
            weight: RepairWeight::Bkm,
        })
        .unwrap();
        // The Fisher-weighted repair dumps noise into the anti-squeezed
        // quadrature, so its trace exceeds the isotropic one.
        assert!(weighted.repair_trace > weighted.isotropic_trace);
    }

    #[test]
    fn noise_floor_run_defect_free() {
        let p = NoiseFloorParams {
            gamma: 1.0,
            class: vec![
                SqueezedThermalParams::new(2.0, 0.0).unwrap(),
                SqueezedThermalParams::new(3.0, 0.2).unwrap(),
            ],
            s_grid: vec![0.25, 0.5],
            steps: 32,
            weight_source: WeightSource::Actual,
        };
        let report = run_noise_floor(&p).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows.iter().all(|r| r.bound == 0.0 && !r.defect_flag));
        assert!(violating_rows(&report, false).is_empty());
        // The flipped check reports the healthy rows.
        assert_eq!(violating_rows(&report, true).len(), 2);
    }
}
