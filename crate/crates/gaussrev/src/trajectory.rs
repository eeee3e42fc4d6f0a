//! Forward attenuation and repaired reverse decoding of one-mode covariances.
//!
//! The forward channel relaxes every state to vacuum along
//! `d Gamma/ds = -2 gamma Gamma + 2 gamma 1` (closed form available). The
//! reverse decoder integrates, in the reversed clock `u = S - s`,
//!
//! `d Gamma/du = K_rev Gamma + Gamma K_rev^T + D_rev`,
//!
//! with `K_rev = -(K_fwd + D_fwd tau_s^{-1})` and
//! `D_rev = D_fwd + DeltaD*(s)`, where `DeltaD*(s)` is the minimal
//! Fisher-weighted repair of the Bayes CP matrix at depth `s` (weighted by
//! the BKM metric of the reference `tau_s`). Where the Bayes generator is
//! already admissible the repair is exactly zero and the decoder retraces
//! the forward path.
//!
//! Accumulated de Bruijn increments `(1/2) tr(DeltaD J)` integrate into the
//! decoder irreversibility `I_dec`. The repair term has a kink where the
//! threshold eigenvalue crosses zero, so the integration grid is aligned to
//! the bisected crossing depths and the quadrature is composite Simpson on
//! the half-step nodes, keeping step-doubling self-consistency at the 1e-6
//! relative level.

use crate::error::{Error, Result};
use crate::fisher::{bkm_displacement_metric, c_geom, BkmFisherMatrix};
use crate::gaussian::{
    gaussian_fidelity, squeezed_thermal_cov, CovarianceMatrix, FidelityValue,
    SqueezedThermalParams, PSD_TOL,
};
use crate::generator::{bayes_reverse_generator, GaussianGenerator};
use crate::linalg::{hermitian_eigenvalues, symmetrize, to_complex, trace_product, RMatrix};
use crate::repair::{minimal_repair, RepairProblem};

/// Default uniform purity-gap floor; runs whose repaired path dips to or
/// below this symplectic eigenvalue abort rather than weaken the bound.
pub const DEFAULT_NU_MIN_POLICY: f64 = 1.01;

/// Which state weighs the de Bruijn increment: the reference path `tau_s`
/// or the actually decoded state. The repair SDP itself is always weighted
/// by the reference (that is what a trained score model knows).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSource {
    Reference,
    Actual,
}

#[derive(Debug, Clone)]
pub struct TrajectoryConfig {
    pub gamma: f64,
    pub total_depth: f64,
    pub steps: usize,
    pub initial: SqueezedThermalParams,
    pub weight_source: WeightSource,
    pub nu_min_policy: f64,
}

impl TrajectoryConfig {
    pub fn new(gamma: f64, total_depth: f64, steps: usize, initial: SqueezedThermalParams) -> Self {
        Self {
            gamma,
            total_depth,
            steps,
            initial,
            weight_source: WeightSource::Actual,
            nu_min_policy: DEFAULT_NU_MIN_POLICY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidParam(format!(
                "attenuation rate must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.total_depth > 0.0) {
            return Err(Error::InvalidParam(format!(
                "total depth must be positive, got {}",
                self.total_depth
            )));
        }
        if self.steps < 16 {
            return Err(Error::InvalidParam(format!(
                "need at least 16 steps, got {}",
                self.steps
            )));
        }
        if !(self.nu_min_policy > 1.0) {
            return Err(Error::InvalidParam(format!(
                "purity-gap floor must exceed 1, got {}",
                self.nu_min_policy
            )));
        }
        Ok(())
    }
}

/// Forward attenuation in closed form:
/// `e^{-2 gamma s} Gamma_0 + (1 - e^{-2 gamma s}) 1`.
pub fn forward_evolve(g0: &CovarianceMatrix, gamma: f64, s: f64) -> CovarianceMatrix {
    let decay = (-2.0 * gamma * s).exp();
    let dim = g0.matrix().nrows();
    let m = g0.matrix() * decay + RMatrix::identity(dim, dim) * (1.0 - decay);
    CovarianceMatrix::new(m).expect("forward flow preserves symmetry")
}

/// De Bruijn entropy-rate increment `(1/2) tr(DeltaD J)` of an added
/// diffusion against a BKM Fisher weight.
pub fn debruijn_increment(delta_d: &RMatrix, j: &BkmFisherMatrix) -> Result<f64> {
    let min_eig = hermitian_eigenvalues(&to_complex(delta_d))[0];
    if min_eig < -1e-10 {
        return Err(Error::InvalidParam(format!(
            "added diffusion must be PSD, min eigenvalue {min_eig:.3e}"
        )));
    }
    Ok((0.5 * trace_product(delta_d, j.matrix())).max(0.0))
}

/// One sampled point of a decoded trajectory.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    /// Depth `s` (forward time).
    pub s: f64,
    /// Decoded state at this depth.
    pub reverse_state: CovarianceMatrix,
    /// Reference path `tau_s`.
    pub reference: CovarianceMatrix,
    /// Threshold eigenvalue of the Bayes CP matrix at this depth.
    pub lambda_minus: f64,
    /// Minimal repair applied at this depth.
    pub delta_d: RMatrix,
    /// De Bruijn integrand value at this depth.
    pub increment: f64,
}

impl TrajectorySample {
    pub fn defect(&self) -> bool {
        self.lambda_minus < 0.0
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    /// Samples at the coarse integration nodes, ascending in depth.
    pub samples: Vec<TrajectorySample>,
    /// Accumulated decoder irreversibility.
    pub i_dec: f64,
    /// Fidelity between the target state and the decoded endpoint.
    pub endpoint_fidelity: FidelityValue,
    /// `c_geom(nu_min_observed) * i_dec`.
    pub bound: f64,
    /// Minimum symplectic eigenvalue seen along the repaired path.
    pub nu_min_observed: f64,
}

impl TrajectoryRecord {
    pub fn has_defect(&self) -> bool {
        self.samples.iter().any(|s| s.defect())
    }
}

/// Diagonal reference path for a squeezed-thermal initial state.
struct ReferencePath {
    gamma: f64,
    a0: f64,
    b0: f64,
}

impl ReferencePath {
    fn new(gamma: f64, initial: &SqueezedThermalParams) -> Self {
        let g0 = squeezed_thermal_cov(initial);
        Self {
            gamma,
            a0: g0.matrix()[(0, 0)],
            b0: g0.matrix()[(1, 1)],
        }
    }

    fn tau_diag(&self, s: f64) -> (f64, f64) {
        let decay = (-2.0 * self.gamma * s).exp();
        (
            1.0 + decay * (self.a0 - 1.0),
            1.0 + decay * (self.b0 - 1.0),
        )
    }

    fn tau_cov(&self, s: f64) -> CovarianceMatrix {
        let (a, b) = self.tau_diag(s);
        CovarianceMatrix::new(nalgebra::dmatrix![a, 0.0; 0.0, b]).expect("diagonal")
    }

    /// Threshold eigenvalue `4 gamma - 2 gamma tr(tau_s^{-1})` of the Bayes
    /// CP matrix along the reference path.
    fn lambda_minus(&self, s: f64) -> f64 {
        let (a, b) = self.tau_diag(s);
        2.0 * self.gamma * (2.0 - 1.0 / a - 1.0 / b)
    }

    /// Bayes drift `-gamma 1 + 2 gamma tau_s^{-1}` (diagonal).
    fn bayes_drift(&self, s: f64) -> RMatrix {
        let (a, b) = self.tau_diag(s);
        nalgebra::dmatrix![
            -self.gamma + 2.0 * self.gamma / a, 0.0;
            0.0, -self.gamma + 2.0 * self.gamma / b
        ]
    }
}

/// Depths in `(lo, hi)` where the threshold eigenvalue changes sign,
/// located by a scan plus bisection.
fn defect_boundaries(path: &ReferencePath, lo: f64, hi: f64, scan: usize) -> Vec<f64> {
    let scan = scan.max(512);
    let h = (hi - lo) / scan as f64;
    let mut roots = Vec::new();
    let mut prev_s = lo;
    let mut prev_v = path.lambda_minus(lo);
    for i in 1..=scan {
        let s = lo + i as f64 * h;
        let v = path.lambda_minus(s);
        if prev_v == 0.0 {
            if prev_s > lo + 1e-12 && prev_s < hi - 1e-12 {
                roots.push(prev_s);
            }
        } else if prev_v * v < 0.0 {
            let (mut x0, mut x1) = (prev_s, s);
            let mut f0 = prev_v;
            for _ in 0..100 {
                let mid = 0.5 * (x0 + x1);
                let fm = path.lambda_minus(mid);
                if f0.signum() == fm.signum() {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            let root = 0.5 * (x0 + x1);
            if root > lo + 1e-12 && root < hi - 1e-12 {
                roots.push(root);
            }
        }
        prev_s = s;
        prev_v = v;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    roots
}

struct Node {
    s: f64,
    state: RMatrix,
    lambda_minus: f64,
    delta_d: RMatrix,
    increment: f64,
    /// Node lies on the coarse grid (odd indices are Simpson midpoints).
    coarse: bool,
}

struct Engine<'a> {
    cfg: &'a TrajectoryConfig,
    path: ReferencePath,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a TrajectoryConfig) -> Self {
        let path = ReferencePath::new(cfg.gamma, &cfg.initial);
        Self { cfg, path }
    }

    /// Threshold eigenvalue and minimal repair at depth `s`. Admissible
    /// depths short-circuit to an exactly zero repair without touching the
    /// Fisher weight.
    fn repair_at(&self, s: f64) -> Result<(f64, RMatrix)> {
        let lam = self.path.lambda_minus(s);
        if lam >= -PSD_TOL {
            return Ok((lam, RMatrix::zeros(2, 2)));
        }
        let tau = self.path.tau_cov(s);
        let weight = bkm_displacement_metric(&tau).map_err(|e| match e {
            Error::NearPurity { nu, .. } => Error::NearPurity {
                nu,
                at_depth: Some(s),
            },
            other => other,
        })?;
        let fwd = GaussianGenerator::attenuator(self.cfg.gamma)?;
        let rev = bayes_reverse_generator(&fwd, &tau)?;
        let problem = RepairProblem::new(rev.cp_matrix(), weight.matrix().clone())?;
        let repaired = minimal_repair(&problem)?;
        Ok((lam, repaired.delta_d))
    }

    fn increment_at(&self, s: f64, state: &RMatrix, delta_d: &RMatrix) -> Result<f64> {
        if delta_d.trace() <= 0.0 {
            return Ok(0.0);
        }
        let weight_state = match self.cfg.weight_source {
            WeightSource::Reference => self.path.tau_cov(s),
            WeightSource::Actual => CovarianceMatrix::new(state.clone())?,
        };
        let j = bkm_displacement_metric(&weight_state).map_err(|e| match e {
            Error::NearPurity { nu, .. } => Error::NearPurity {
                nu,
                at_depth: Some(s),
            },
            other => other,
        })?;
        debruijn_increment(delta_d, &j)
    }

    fn rhs(&self, s: f64, state: &RMatrix, delta_d: &RMatrix) -> RMatrix {
        let k_rev = -self.path.bayes_drift(s);
        let d_rev = RMatrix::identity(2, 2) * (2.0 * self.cfg.gamma) + delta_d;
        &k_rev * state + state * k_rev.transpose() + d_rev
    }

    fn check_policy(&self, s: f64, state: &RMatrix) -> Result<f64> {
        let det = state[(0, 0)] * state[(1, 1)] - state[(0, 1)] * state[(1, 0)];
        let nu = det.max(0.0).sqrt();
        if nu <= self.cfg.nu_min_policy {
            return Err(Error::NearPurity {
                nu,
                at_depth: Some(s),
            });
        }
        Ok(nu)
    }

    /// Integrates the repaired reverse ODE from depth `s_hi` down to `s_lo`
    /// starting from `start`, returning the visited nodes and the Simpson
    /// accumulation of the de Bruijn integrand.
    fn run(&self, s_hi: f64, s_lo: f64, start: &RMatrix) -> Result<(Vec<Node>, f64, f64)> {
        let span = s_hi - s_lo;
        let mut boundaries = vec![s_lo];
        boundaries.extend(defect_boundaries(
            &self.path,
            s_lo,
            s_hi,
            4 * self.cfg.steps,
        ));
        boundaries.push(s_hi);

        let mut nodes: Vec<Node> = Vec::new();
        let mut state = start.clone();
        let mut i_dec = 0.0;
        let mut nu_min = f64::INFINITY;

        let push_node = |s: f64,
                         state: &RMatrix,
                         coarse: bool,
                         lam: f64,
                         delta_d: &RMatrix,
                         nodes: &mut Vec<Node>,
                         nu_min: &mut f64|
         -> Result<()> {
            let nu = self.check_policy(s, state)?;
            *nu_min = nu.min(*nu_min);
            let increment = self.increment_at(s, state, delta_d)?;
            nodes.push(Node {
                s,
                state: state.clone(),
                lambda_minus: lam,
                delta_d: delta_d.clone(),
                increment,
                coarse,
            });
            Ok(())
        };

        // Repair at the current step start, carried from node to node.
        let mut current = self.repair_at(s_hi)?;
        push_node(s_hi, &state, true, current.0, &current.1, &mut nodes, &mut nu_min)?;

        // Segments processed from deep to shallow.
        for seg in (0..boundaries.len() - 1).rev() {
            let (seg_lo, seg_hi) = (boundaries[seg], boundaries[seg + 1]);
            let len = seg_hi - seg_lo;
            if len <= 1e-14 {
                continue;
            }
            let coarse_steps =
                ((self.cfg.steps as f64 * len / span).ceil() as usize).max(2);
            let h2 = len / (2 * coarse_steps) as f64;
            for j in 0..2 * coarse_steps {
                let s_from = seg_hi - j as f64 * h2;
                let s_to = if j + 1 == 2 * coarse_steps {
                    seg_lo
                } else {
                    s_from - h2
                };
                let s_mid = 0.5 * (s_from + s_to);
                let dd_from = current.1.clone();
                let (_, dd_mid) = self.repair_at(s_mid)?;
                let to = self.repair_at(s_to)?;
                // Reverse clock runs toward smaller s: du > 0, s = s_from - u.
                let h = s_from - s_to;
                let k1 = self.rhs(s_from, &state, &dd_from);
                let k2 = self.rhs(s_mid, &(&state + &k1 * (0.5 * h)), &dd_mid);
                let k3 = self.rhs(s_mid, &(&state + &k2 * (0.5 * h)), &dd_mid);
                let k4 = self.rhs(s_to, &(&state + &k3 * h), &to.1);
                state = symmetrize(&(&state + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)));
                let coarse = (j + 1) % 2 == 0;
                push_node(s_to, &state, coarse, to.0, &to.1, &mut nodes, &mut nu_min)?;
                current = to;
            }
            // Composite Simpson over the just-added 2*coarse_steps intervals.
            let base = nodes.len() - (2 * coarse_steps + 1);
            for k in 0..coarse_steps {
                let g0 = nodes[base + 2 * k].increment;
                let g1 = nodes[base + 2 * k + 1].increment;
                let g2 = nodes[base + 2 * k + 2].increment;
                let width = nodes[base + 2 * k].s - nodes[base + 2 * k + 2].s;
                i_dec += width / 6.0 * (g0 + 4.0 * g1 + g2);
            }
        }
        Ok((nodes, i_dec, nu_min))
    }
}

/// Result of decoding a partial depth interval; used to check additivity of
/// the irreversibility functional and to resume runs.
#[derive(Debug, Clone)]
pub struct ReverseLeg {
    pub final_state: CovarianceMatrix,
    pub i_dec: f64,
    pub nu_min_observed: f64,
}

/// Integrates the repaired reverse decoder from depth `from_depth` down to
/// `to_depth`, starting at `start`.
pub fn reverse_decode_between(
    cfg: &TrajectoryConfig,
    from_depth: f64,
    to_depth: f64,
    start: &CovarianceMatrix,
) -> Result<ReverseLeg> {
    cfg.validate()?;
    if !(from_depth > to_depth) || to_depth < 0.0 || from_depth > cfg.total_depth + 1e-12 {
        return Err(Error::InvalidParam(format!(
            "need total_depth >= from_depth > to_depth >= 0, got {from_depth} > {to_depth}"
        )));
    }
    let engine = Engine::new(cfg);
    let (nodes, i_dec, nu_min) = engine.run(from_depth, to_depth, start.matrix())?;
    let final_state = CovarianceMatrix::new(nodes.last().unwrap().state.clone())?;
    Ok(ReverseLeg {
        final_state,
        i_dec,
        nu_min_observed: nu_min,
    })
}

/// Full pipeline: forward reference path, repaired reverse decode from the
/// forward endpoint, de Bruijn accumulation, endpoint fidelity and the
/// geometric bound.
pub fn reverse_decode(cfg: &TrajectoryConfig) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let engine = Engine::new(cfg);
    let g0 = squeezed_thermal_cov(&cfg.initial);
    let start = forward_evolve(&g0, cfg.gamma, cfg.total_depth);
    let (nodes, i_dec, nu_min) = engine.run(cfg.total_depth, 0.0, start.matrix())?;

    let decoded = CovarianceMatrix::new(nodes.last().unwrap().state.clone())?;
    let endpoint_fidelity = gaussian_fidelity(&g0, &decoded)?;
    let bound = c_geom(nu_min)? * i_dec;

    let mut samples: Vec<TrajectorySample> = nodes
        .into_iter()
        .filter(|n| n.coarse)
        .map(|n| {
            Ok(TrajectorySample {
                s: n.s,
                reverse_state: CovarianceMatrix::new(n.state)?,
                reference: engine.path.tau_cov(n.s),
                lambda_minus: n.lambda_minus,
                delta_d: n.delta_d,
                increment: n.increment,
            })
        })
        .collect::<Result<_>>()?;
    samples.reverse();

    Ok(TrajectoryRecord {
        samples,
        i_dec,
        endpoint_fidelity,
        bound,
        nu_min_observed: nu_min,
    })
}

/// Worst case over a finite class of initial states.
#[derive(Debug, Clone)]
pub struct WorstCase {
    pub i_dec_wc: f64,
    pub argmax: usize,
    pub records: Vec<TrajectoryRecord>,
}

pub fn worst_case_irreversibility(
    class: &[SqueezedThermalParams],
    gamma: f64,
    total_depth: f64,
    steps: usize,
) -> Result<WorstCase> {
    worst_case_with(class, gamma, total_depth, steps, WeightSource::Actual, DEFAULT_NU_MIN_POLICY)
}

pub fn worst_case_with(
    class: &[SqueezedThermalParams],
    gamma: f64,
    total_depth: f64,
    steps: usize,
    weight_source: WeightSource,
    nu_min_policy: f64,
) -> Result<WorstCase> {
    if class.is_empty() {
        return Err(Error::InvalidParam("class of initial states is empty".into()));
    }
    let mut records = Vec::with_capacity(class.len());
    for (index, member) in class.iter().enumerate() {
        let mut cfg = TrajectoryConfig::new(gamma, total_depth, steps, *member);
        cfg.weight_source = weight_source;
        cfg.nu_min_policy = nu_min_policy;
        let record = reverse_decode(&cfg).map_err(|e| Error::MemberFailed {
            index,
            nu: member.nu(),
            r: member.r(),
            source: Box::new(e),
        })?;
        records.push(record);
    }
    let argmax = (0..records.len())
        .max_by(|&a, &b| records[a].i_dec.partial_cmp(&records[b].i_dec).unwrap())
        .unwrap();
    Ok(WorstCase {
        i_dec_wc: records[argmax].i_dec,
        argmax,
        records,
    })
}

/// One row of the noise-floor table.
#[derive(Debug, Clone)]
pub struct NoiseFloorRow {
    pub s: f64,
    pub neg2lnf_wc: f64,
    pub bound: f64,
    pub defect_flag: bool,
    /// Class member maximizing the irreversibility.
    pub argmax_i_dec: usize,
    /// Class member maximizing the infidelity.
    pub argmax_infidelity: usize,
}

/// Per-member outcome backing a noise-floor row.
#[derive(Debug, Clone)]
pub struct MemberOutcome {
    pub index: usize,
    pub nu: f64,
    pub r: f64,
    pub i_dec: f64,
    pub neg2lnf: f64,
    pub nu_min_observed: f64,
    pub defect: bool,
}

#[derive(Debug, Clone)]
pub struct NoiseFloorReport {
    pub rows: Vec<NoiseFloorRow>,
    /// Member details, parallel to `rows`.
    pub members: Vec<Vec<MemberOutcome>>,
}

impl NoiseFloorReport {
    /// Largest amount by which a row's bound exceeds its worst-case
    /// infidelity; at most ~0 when the noise-floor inequality holds.
    pub fn max_violation(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.bound - r.neg2lnf_wc)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct NoiseFloorConfig {
    pub gamma: f64,
    pub steps: usize,
    pub weight_source: WeightSource,
    pub nu_min_policy: f64,
}

impl NoiseFloorConfig {
    pub fn new(gamma: f64, steps: usize) -> Self {
        Self {
            gamma,
            steps,
            weight_source: WeightSource::Actual,
            nu_min_policy: DEFAULT_NU_MIN_POLICY,
        }
    }
}

/// Worst-case infidelity versus the geometric lower bound across a depth
/// grid. Depth zero rows are closed-form: nothing evolves, so both the
/// infidelity and the bound vanish and the defect flag reflects the initial
/// condition alone.
pub fn noise_floor_report(
    class: &[SqueezedThermalParams],
    s_grid: &[f64],
    cfg: &NoiseFloorConfig,
) -> Result<NoiseFloorReport> {
    if class.is_empty() {
        return Err(Error::InvalidParam("class of initial states is empty".into()));
    }
    if s_grid.is_empty() || s_grid.windows(2).any(|w| w[1] <= w[0]) || s_grid[0] < 0.0 {
        return Err(Error::InvalidParam(
            "depth grid must be nonempty, nonnegative and increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(s_grid.len());
    let mut members = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        if s == 0.0 {
            let outcomes: Vec<MemberOutcome> = class
                .iter()
                .enumerate()
                .map(|(index, p)| {
                    let path = ReferencePath::new(cfg.gamma, p);
                    MemberOutcome {
                        index,
                        nu: p.nu(),
                        r: p.r(),
                        i_dec: 0.0,
                        neg2lnf: 0.0,
                        nu_min_observed: p.nu(),
                        defect: path.lambda_minus(0.0) < 0.0,
                    }
                })
                .collect();
            rows.push(NoiseFloorRow {
                s: 0.0,
                neg2lnf_wc: 0.0,
                bound: 0.0,
                defect_flag: outcomes.iter().any(|o| o.defect),
                argmax_i_dec: 0,
                argmax_infidelity: 0,
            });
            members.push(outcomes);
            continue;
        }
        let wc = worst_case_with(
            class,
            cfg.gamma,
            s,
            cfg.steps,
            cfg.weight_source,
            cfg.nu_min_policy,
        )?;
        let outcomes: Vec<MemberOutcome> = wc
            .records
            .iter()
            .enumerate()
            .map(|(index, rec)| MemberOutcome {
                index,
                nu: class[index].nu(),
                r: class[index].r(),
                i_dec: rec.i_dec,
                neg2lnf: -2.0 * rec.endpoint_fidelity.fidelity().ln(),
                nu_min_observed: rec.nu_min_observed,
                defect: rec.has_defect(),
            })
            .collect();
        let argmax_infidelity = (0..outcomes.len())
            .max_by(|&a, &b| outcomes[a].neg2lnf.partial_cmp(&outcomes[b].neg2lnf).unwrap())
            .unwrap();
        let nu_min_class = outcomes
            .iter()
            .map(|o| o.nu_min_observed)
            .fold(f64::INFINITY, f64::min);
        rows.push(NoiseFloorRow {
            s,
            neg2lnf_wc: outcomes[argmax_infidelity].neg2lnf,
            bound: c_geom(nu_min_class)? * wc.i_dec_wc,
            defect_flag: outcomes.iter().any(|o| o.defect),
            argmax_i_dec: wc.argmax,
            argmax_infidelity,
        });
        members.push(outcomes);
    }
    Ok(NoiseFloorReport { rows, members })
}
