//! Subcommand implementations. Each returns the tables of one run.

use std::fmt;

use rayon::prelude::*;
use serde_json::json;

use lmglab::foil::{
    classical_p_error, integrate_bloch, mfpt_estimate, simulate_langevin, zero_crossing_frequency,
    BlochState, ClassicalSweep, LangevinConfig, MAX_BLOCH_DT,
};
use lmglab::lmg::{
    build_hamiltonian, diagonalize, eigenbasis_element, jz2_expectation, m0_weight,
    sign_observable, susceptibility, Spectrum, SusceptibilityMode,
};
use lmglab::open_system::{
    k3_sequential, k3_stationary_record, t2_phys, threshold_gamma_in, truncate, LevelSystem,
};
use lmglab::semiclassics::{
    barrier, free_energy, gap_derivative, gap_scan, goldilocks_band, instanton_action,
    k3_two_level, kramers_time, lz_crossover_schematic, lz_error, order_parameter,
    sweep_window_with_gap, table_c0, two_level_decay_coefficient, KramersMode, C0_UNCERTAINTY,
    TABLE_C0,
};
use lmglab::{Error, ModelParams};

use crate::output::{Cell, Output, Table};
use crate::{FoilMode, ModelArgs, Protocol};

/// Dephasing rates (1/s) of the reference K3 scan.
pub const FIG1_GAMMAS: [f64; 10] = [0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0];

/// Nominal gap used for the second two-level coefficient, in rad/s.
const NOMINAL_GAP_RAD_S: f64 = 1310.0;

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Io(anyhow::Error),
    ChecksFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(
                Error::InvalidParameter { .. }
                | Error::IndexOutOfRange { .. }
                | Error::DimensionMismatch { .. }
                | Error::DisorderedPhase(_)
                | Error::BarrierTooHigh { .. },
            ) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "{e:#}"),
            CliError::ChecksFailed => write!(f, "one or more checks failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CmdResult = Result<Outcome, CliError>;

/// Command result: the rendered tables and whether a check failed.
pub struct Outcome {
    pub output: Output,
    pub failed: bool,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Self {
            output,
            failed: false,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn params_of(m: &ModelArgs) -> Result<ModelParams<f64>, CliError> {
    Ok(ModelParams::new(m.n, m.gamma_ratio)?
        .with_j_phys(m.j_phys)?
        .with_temp_nk(m.temp_nk)?
        .with_bias(m.bias_h)?)
}

fn model_json(m: &ModelArgs) -> serde_json::Value {
    json!({
        "n": m.n,
        "gamma_ratio": m.gamma_ratio,
        "j_phys": m.j_phys,
        "temp_nk": m.temp_nk,
        "bias_h": m.bias_h,
    })
}

fn with_model(m: &ModelArgs, extra: serde_json::Value) -> serde_json::Value {
    let mut v = model_json(m);
    if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

fn spectrum_of(p: &ModelParams<f64>) -> Result<Spectrum<f64>, CliError> {
    Ok(diagonalize(&build_hamiltonian(p)?)?)
}

fn level_system(
    spec: &Spectrum<f64>,
    n_spins: usize,
    levels: usize,
) -> Result<LevelSystem<f64>, CliError> {
    Ok(truncate(spec, &sign_observable(n_spins), levels)?)
}

fn linspace(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    if samples < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(usage(format!(
            "need samples >= 2 and a finite range lo < hi, got {samples} on [{lo}, {hi}]"
        )));
    }
    Ok((0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect())
}

fn size_grid(n_min: usize, n_max: usize, step: usize) -> Result<Vec<usize>, CliError> {
    if step == 0 || n_min > n_max {
        return Err(usage(format!(
            "need step > 0 and n-min <= n-max, got {n_min}..{n_max} step {step}"
        )));
    }
    Ok((n_min..=n_max).step_by(step).collect())
}

pub fn spectrum(m: &ModelArgs, levels: usize, per_level: bool, chi_step: f64) -> CmdResult {
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    if spec.dim() < 2 {
        return Err(usage("spectrum needs N >= 1"));
    }
    let q = sign_observable::<f64>(p.n_spins);
    let levels = levels.clamp(2, spec.dim());
    let q01 = eigenbasis_element(&spec, &q, 0, 1)?;
    let chi_exact = susceptibility(&p, SusceptibilityMode::Exact, chi_step)?;
    let chi_two = susceptibility(&p, SusceptibilityMode::TwoLevel, 0.0)?;

    let mut summary = Table::new(
        "summary",
        &[
            "n_spins",
            "gamma_ratio",
            "dim",
            "e0",
            "e1",
            "delta_e",
            "delta_e_rad_s",
            "q01_sq",
            "m0_weight_pct",
            "gap_ratio_21",
            "gap_ratio_20",
            "jz2_0",
            "jz2_1",
            "chi_exact",
            "chi_two_level",
        ],
    );
    // (E2 - E1)/(E1 - E0) and (E2 - E0)/(E1 - E0); undefined for a two-level space.
    let (r21, r20) = match spec.gap_ratio(2) {
        Ok(r) => (r - 1.0, r),
        Err(_) => (f64::NAN, f64::NAN),
    };
    summary.push(vec![
        p.n_spins.into(),
        p.gamma_ratio.into(),
        spec.dim().into(),
        spec.energy(0)?.into(),
        spec.energy(1)?.into(),
        spec.delta_e().into(),
        spec.delta_e_rad_s().into(),
        (q01 * q01).into(),
        (100.0 * m0_weight(&spec)).into(),
        r21.into(),
        r20.into(),
        jz2_expectation(&spec, 0)?.into(),
        jz2_expectation(&spec, 1)?.into(),
        chi_exact.into(),
        chi_two.into(),
    ]);

    let mut table = Table::new(
        "levels",
        &[
            "level",
            "energy",
            "excitation",
            "excitation_rad_s",
            "gap_ratio",
            "jz2",
            "q_0k_sq",
        ],
    );
    for k in 0..levels {
        let q0k = eigenbasis_element(&spec, &q, 0, k)?;
        table.push(vec![
            k.into(),
            spec.energy(k)?.into(),
            spec.excitation(k)?.into(),
            (spec.excitation(k)? * p.j_phys).into(),
            spec.gap_ratio(k)?.into(),
            jz2_expectation(&spec, k)?.into(),
            (q0k * q0k).into(),
        ]);
    }
    let params = with_model(
        m,
        json!({ "levels": levels, "per_level": per_level, "chi_step": chi_step }),
    );
    Ok(Output {
        tables: vec![summary, table],
        csv_table: usize::from(per_level),
        parameters: params,
        seed: None,
    }
    .into())
}

const K3_COLUMNS: [&str; 7] = [
    "gamma_phi_s",
    "levels",
    "protocol",
    "c12",
    "c23",
    "c13",
    "k3",
];

fn k3_row(sys: &LevelSystem<f64>, gamma: f64, protocol: Protocol) -> Result<Vec<Cell>, CliError> {
    let r = match protocol {
        Protocol::Stationary => k3_stationary_record(sys, gamma, None)?,
        Protocol::Sequential => k3_sequential(sys, gamma, None)?,
    };
    Ok(vec![
        gamma.into(),
        sys.n_levels.into(),
        protocol.name().into(),
        r.c12.into(),
        r.c23.into(),
        r.c13.into(),
        r.k3.into(),
    ])
}

pub fn k3(m: &ModelArgs, gamma_phi: f64, levels: usize, protocol: Protocol) -> CmdResult {
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    let sys = level_system(&spec, p.n_spins, levels)?;
    let mut t = Table::new("k3", &K3_COLUMNS);
    t.push(k3_row(&sys, gamma_phi, protocol)?);
    let params = with_model(
        m,
        json!({ "gamma_phi": gamma_phi, "levels": levels, "protocol": protocol.name() }),
    );
    Ok(Output::single(t, params).into())
}

pub fn k3_scan(m: &ModelArgs, gammas: &[f64], levels: &[usize], protocol: Protocol) -> CmdResult {
    if gammas.is_empty() || levels.is_empty() {
        return Err(usage("k3-scan needs at least one rate and one truncation"));
    }
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    let systems = levels
        .iter()
        .map(|&n| level_system(&spec, p.n_spins, n))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, f64)> = (0..systems.len())
        .flat_map(|i| gammas.iter().map(move |&g| (i, g)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, g)| k3_row(&systems[i], g, protocol))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new("k3_scan", &K3_COLUMNS);
    rows.into_iter().for_each(|r| t.push(r));
    let params = with_model(
        m,
        json!({ "gammas": gammas, "levels": levels, "protocol": protocol.name() }),
    );
    Ok(Output::single(t, params).into())
}

pub fn threshold(m: &ModelArgs, levels: &[usize], lo: f64, hi: f64) -> CmdResult {
    if levels.is_empty() {
        return Err(usage("threshold needs at least one truncation"));
    }
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    let rows = levels
        .par_iter()
        .map(|&n| -> Result<Vec<Cell>, CliError> {
            let sys = level_system(&spec, p.n_spins, n)?;
            let g = threshold_gamma_in(&sys, (lo, hi))?;
            Ok(vec![n.into(), g.into(), t2_phys(&spec, g)?.into()])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new("threshold", &["levels", "gamma_thresh_s", "t2_phys_ms"]);
    rows.into_iter().for_each(|r| t.push(r));
    let params = with_model(m, json!({ "levels": levels, "bracket": [lo, hi] }));
    Ok(Output::single(t, params).into())
}

pub fn hierarchy(m: &ModelArgs, reference_gamma: f64) -> CmdResult {
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    let r = lmglab::semiclassics::hierarchy(&p, &spec, reference_gamma)?;
    let mut t = Table::new(
        "hierarchy",
        &[
            "gamma_a",
            "gamma_b",
            "gamma_c",
            "ratio_ab",
            "ratio_bc",
            "xi_root",
            "t2_threshold_ms",
            "reference_gamma",
            "t2_coll_ms",
            "t2_local_ms",
            "t2_phys_ms",
        ],
    );
    t.push(vec![
        r.gamma_a.into(),
        r.gamma_b.into(),
        r.gamma_c.into(),
        r.ratio_ab.into(),
        r.ratio_bc.into(),
        r.xi_root.into(),
        r.t2_threshold_ms.into(),
        r.reference_gamma.into(),
        r.t2_coll_ms.into(),
        r.t2_local_ms.into(),
        r.t2_phys_ms.into(),
    ]);
    let params = with_model(m, json!({ "reference_gamma": reference_gamma }));
    Ok(Output::single(t, params).into())
}

pub fn goldilocks(
    gamma_ratio: f64,
    j_phys: f64,
    temp_nk: f64,
    (n_min, n_max, step): (usize, usize, usize),
    include: &[usize],
    derivative: bool,
) -> CmdResult {
    let mut sizes = size_grid(n_min, n_max, step)?;
    for &n in include {
        if !sizes.contains(&n) {
            sizes.push(n);
        }
    }
    let p = ModelParams::new(sizes[0], gamma_ratio)?
        .with_j_phys(j_phys)?
        .with_temp_nk(temp_nk)?;
    let rows = gap_scan(&p, &sizes)?;
    let mut columns = vec!["n_spins", "delta_e_rad_s", "kbt_rad_s", "gap_over_kbt"];
    if derivative {
        columns.push("d_delta_e_dn");
    }
    let mut t = Table::new("goldilocks", &columns);
    let derivs = if derivative {
        rows.par_iter()
            .map(|r| Ok(gap_derivative(&p.with_n_spins(r.n_spins)?)?))
            .collect::<Result<Vec<f64>, CliError>>()?
    } else {
        Vec::new()
    };
    for (i, r) in rows.iter().enumerate() {
        let mut row: Vec<Cell> = vec![
            r.n_spins.into(),
            r.delta_e_rad_s.into(),
            r.kbt_rad_s.into(),
            r.gap_over_kbt.into(),
        ];
        if derivative {
            row.push(derivs[i].into());
        }
        t.push(row);
    }
    let params = json!({
        "gamma_ratio": gamma_ratio,
        "j_phys": j_phys,
        "temp_nk": temp_nk,
        "sizes": sizes,
        "derivative": derivative,
    });
    Ok(Output::single(t, params).into())
}

pub fn table1() -> CmdResult {
    let mut t = Table::new(
        "table1",
        &[
            "gamma_ratio",
            "s_inst",
            "s_inst_quadrature",
            "c0_over_kbt",
            "nc_analytic",
            "nc_root",
            "nc_root_low",
            "nc_root_high",
            "root_over_analytic",
        ],
    );
    for &(g, c0) in &TABLE_C0 {
        let s = instanton_action(g)?;
        let band = goldilocks_band(g, c0)?;
        let r = band.central;
        t.push(vec![
            g.into(),
            s.closed_form.into(),
            s.numeric.into(),
            c0.into(),
            r.nc_analytic.into(),
            r.nc_root.into(),
            band.low.nc_root.into(),
            band.high.nc_root.into(),
            (r.nc_root / r.nc_analytic).into(),
        ]);
    }
    Ok(Output::single(t, json!({ "c0_uncertainty": C0_UNCERTAINTY })).into())
}

pub fn instanton_curve(
    gamma_ratio: f64,
    c0: Option<f64>,
    (n_min, n_max, step): (usize, usize, usize),
) -> CmdResult {
    let c0 = match c0.or_else(|| table_c0(gamma_ratio)) {
        Some(c) if c > 0.0 && c.is_finite() => c,
        Some(c) => return Err(usage(format!("--c0 must be finite and > 0, got {c}"))),
        None => {
            return Err(usage(format!(
                "no tabulated prefactor for Gamma/J = {gamma_ratio}; pass --c0"
            )))
        }
    };
    let s = instanton_action(gamma_ratio)?.closed_form;
    let mut t = Table::new(
        "instanton_curve",
        &[
            "n_spins",
            "gap_over_kbt",
            "gap_over_kbt_low",
            "gap_over_kbt_high",
        ],
    );
    for n in size_grid(n_min, n_max, step)? {
        let base = (n as f64).sqrt() * (-(n as f64) * s).exp();
        t.push(vec![
            n.into(),
            (c0 * base).into(),
            (c0 * (1.0 - C0_UNCERTAINTY) * base).into(),
            (c0 * (1.0 + C0_UNCERTAINTY) * base).into(),
        ]);
    }
    let params = json!({ "gamma_ratio": gamma_ratio, "c0_over_kbt": c0, "s_inst": s, "sizes": [n_min, n_max, step] });
    Ok(Output::single(t, params).into())
}

pub fn lz(m: &ModelArgs, tau_q: &[f64], delta_h: f64, samples: usize, x_max: f64) -> CmdResult {
    if tau_q.is_empty() {
        let mut t = Table::new(
            "lz_curve",
            &["x", "p_quantum", "p_classical", "p_schematic"],
        );
        for x in linspace(0.0, x_max, samples)? {
            t.push(vec![
                x.into(),
                (-std::f64::consts::PI * x).exp().into(),
                1.0.into(),
                lz_crossover_schematic(x).into(),
            ]);
        }
        let params = json!({ "samples": samples, "x_max": x_max });
        return Ok(Output::single(t, params).into());
    }
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    let de = spec.delta_e_rad_s();
    let (lo, hi) = sweep_window_with_gap(&p, de)?;
    if !(lo..=hi).contains(&delta_h) {
        log::warn!(
            "delta_h = {delta_h} rad/s lies outside the sweep window [{lo:.4}, {hi:.4}] rad/s"
        );
    }
    let m_star = order_parameter(p.gamma_ratio).m_star;
    let mut q = p;
    q.bias_h = 0.0;
    let tau_k = kramers_time(&q, lmglab::foil::DEFAULT_GAMMA_EFF, KramersMode::Full)?.seconds;
    let alpha = p.n() * m_star * delta_h;
    let mut t = Table::new(
        "lz",
        &["tau_q_s", "x", "p_quantum", "p_classical", "in_window"],
    );
    for &tq in tau_q {
        let pq = lz_error(de, p.n_spins, m_star, delta_h, tq)?;
        // Classical sweeps shorter than a percent of the escape time leave the ensemble frozen.
        let pc = if tq < lmglab::foil::FROZEN_FRACTION * tau_k {
            1.0
        } else {
            f64::NAN
        };
        t.push(vec![
            tq.into(),
            (tq * de * de / (4.0 * alpha)).into(),
            pq.into(),
            pc.into(),
            (lo..=hi).contains(&delta_h).into(),
        ]);
    }
    let params = with_model(
        m,
        json!({ "tau_q": tau_q, "delta_h": delta_h, "window_rad_s": [lo, hi], "kramers_s": tau_k }),
    );
    Ok(Output::single(t, params).into())
}

pub fn k3_max_curve(m: &ModelArgs, y_min: f64, y_max: f64, samples: usize) -> CmdResult {
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    let q01 = eigenbasis_element(&spec, &sign_observable(p.n_spins), 0, 1)?;
    let q2 = q01 * q01;
    let de = spec.delta_e_rad_s();
    let mut t = Table::new("k3_max_curve", &["y", "t2_ms", "k3_max", "k3_max_ideal"]);
    for y in linspace(y_min, y_max, samples)? {
        if !(y > 0.0) {
            return Err(usage("y-min must be > 0"));
        }
        let t2_ms = 1000.0 * y * std::f64::consts::PI / de;
        t.push(vec![
            y.into(),
            t2_ms.into(),
            k3_two_level(t2_ms, de, q2)?.into(),
            k3_two_level(t2_ms, de, 1.0)?.into(),
        ]);
    }
    let params = with_model(
        m,
        json!({ "y_range": [y_min, y_max], "samples": samples, "q01_sq": q2 }),
    );
    Ok(Output::single(t, params).into())
}

pub fn two_level_curve(m: &ModelArgs, gammas: &[f64]) -> CmdResult {
    let p = params_of(m)?;
    let spec = spectrum_of(&p)?;
    let q01 = eigenbasis_element(&spec, &sign_observable(p.n_spins), 0, 1)?;
    let q2 = q01 * q01;
    let de = spec.delta_e_rad_s();
    let c_re = two_level_decay_coefficient(&spec, de)?;
    let c_nom = two_level_decay_coefficient(&spec, NOMINAL_GAP_RAD_S)?;
    let curve = |c: f64, g: f64| q2 * ((-c * g).exp() + 0.5 * (-2.0 * c * g).exp());
    let mut t = Table::new(
        "two_level_curve",
        &["gamma_phi_s", "k3_recomputed_gap", "k3_nominal_gap"],
    );
    for &g in gammas {
        t.push(vec![
            g.into(),
            curve(c_re, g).into(),
            curve(c_nom, g).into(),
        ]);
    }
    let mut coeffs = Table::new("coefficients", &["gap", "delta_e_rad_s", "coefficient_s"]);
    coeffs.push(vec!["recomputed".into(), de.into(), c_re.into()]);
    coeffs.push(vec![
        "nominal".into(),
        NOMINAL_GAP_RAD_S.into(),
        c_nom.into(),
    ]);
    let params = with_model(m, json!({ "gammas": gammas, "q01_sq": q2 }));
    Ok(Output {
        tables: vec![t, coeffs],
        csv_table: 0,
        parameters: params,
        seed: None,
    }
    .into())
}

pub fn n2_exact(x_min: f64, x_max: f64, samples: usize) -> CmdResult {
    if !(x_min > 0.0) {
        return Err(usage("x-min must be > 0"));
    }
    let mut t = Table::new(
        "n2_exact",
        &["x", "p_macro", "gap_over_4gamma", "m_mean_field"],
    );
    for x in linspace(x_min, x_max, samples)? {
        let r = (x * x + 16.0).sqrt();
        t.push(vec![
            x.into(),
            (0.5 * (1.0 + x / r)).into(),
            ((r - x) / 8.0).into(),
            order_parameter(1.0 / x).m_star.into(),
        ]);
    }
    Ok(Output::single(t, json!({ "x_range": [x_min, x_max], "samples": samples })).into())
}

/// Options of the classical foil.
pub struct FoilArgs {
    pub mode: FoilMode,
    pub gamma_eff: f64,
    pub dt: f64,
    pub paths: usize,
    pub seed: u64,
    pub t_max: Option<f64>,
    pub bins: usize,
    pub tau_q: Vec<f64>,
    pub delta_h: f64,
}

pub fn foil(m: &ModelArgs, a: &FoilArgs) -> CmdResult {
    let p = params_of(m)?;
    let base = with_model(
        m,
        json!({ "gamma_eff": a.gamma_eff, "dt": a.dt, "paths": a.paths, "seed": a.seed }),
    );
    let mut out = match a.mode {
        FoilMode::Mfpt => foil_mfpt(&p, a)?,
        FoilMode::Histogram => foil_histogram(&p, a)?,
        FoilMode::PError => foil_p_error(&p, a)?,
        FoilMode::Bloch => foil_bloch(&p, a)?,
    };
    if let (Some(obj), serde_json::Value::Object(extra)) = (out.parameters.as_object_mut(), base) {
        obj.extend(extra);
    }
    if a.mode != FoilMode::Bloch {
        out.seed = Some(a.seed);
    }
    Ok(out.into())
}

fn config(p: &ModelParams<f64>, a: &FoilArgs) -> Result<LangevinConfig, CliError> {
    Ok(LangevinConfig::new(*p, a.gamma_eff, a.dt, a.paths, a.seed)?)
}

fn foil_mfpt(p: &ModelParams<f64>, a: &FoilArgs) -> Result<Output, CliError> {
    let t_max = a.t_max.unwrap_or(2e5);
    let e = mfpt_estimate(&config(p, a)?, t_max)?;
    let mut t = Table::new(
        "mfpt",
        &[
            "n_spins",
            "temp_nk",
            "exponent",
            "mean_s",
            "stderr_s",
            "passages",
            "censored",
            "kramers_s",
            "mean_over_kramers",
        ],
    );
    t.push(vec![
        p.n_spins.into(),
        p.temp_nk.into(),
        e.exponent.into(),
        e.mean_s.into(),
        e.stderr_s.into(),
        e.passages.into(),
        e.censored.into(),
        e.kramers_s.into(),
        (e.mean_s / e.kramers_s).into(),
    ]);
    Ok(Output::single(t, json!({ "mode": "mfpt", "t_max": t_max })))
}

fn foil_histogram(p: &ModelParams<f64>, a: &FoilArgs) -> Result<Output, CliError> {
    if a.bins == 0 {
        return Err(usage("--bins must be > 0"));
    }
    let t_max = a.t_max.unwrap_or(2e4);
    let m0 = -barrier(p).map(|b| b.m_min).unwrap_or(0.0);
    let ens = simulate_langevin(&config(p, a)?, m0, t_max, usize::MAX)?;
    let finals = ens.final_positions();
    let width = 2.0 / a.bins as f64;
    let mut counts = vec![0usize; a.bins];
    for x in &finals {
        let k = (((x + 1.0) / width) as usize).min(a.bins - 1);
        counts[k] += 1;
    }
    // Boltzmann weight exp(-N f(m) / k_B T) integrated by the midpoint rule on each bin.
    let sub = 64;
    let scale = p.n() / p.kbt();
    let f_ref = free_energy(0.0, p);
    let mut weights = vec![0.0; a.bins];
    for (k, w) in weights.iter_mut().enumerate() {
        for s in 0..sub {
            let x = -1.0 + width * (k as f64 + (s as f64 + 0.5) / sub as f64);
            *w += (-(free_energy(x, p) - f_ref) * scale).exp();
        }
    }
    let total: f64 = weights.iter().sum();
    let mut t = Table::new(
        "histogram",
        &["bin_lo", "bin_hi", "count", "fraction", "boltzmann"],
    );
    for k in 0..a.bins {
        let lo = -1.0 + width * k as f64;
        t.push(vec![
            lo.into(),
            (lo + width).into(),
            counts[k].into(),
            (counts[k] as f64 / finals.len().max(1) as f64).into(),
            (weights[k] / total).into(),
        ]);
    }
    Ok(Output::single(
        t,
        json!({ "mode": "histogram", "t_max": t_max, "m0": m0, "bins": a.bins }),
    ))
}

fn foil_p_error(p: &ModelParams<f64>, a: &FoilArgs) -> Result<Output, CliError> {
    let mut q = *p;
    q.bias_h = 0.0;
    let tau_k = kramers_time(&q, a.gamma_eff, KramersMode::Full)?.seconds;
    let taus: Vec<f64> = if a.tau_q.is_empty() {
        [0.001, 0.01, 0.1, 1.0, 3.0]
            .iter()
            .map(|f| f * tau_k)
            .collect()
    } else {
        a.tau_q.clone()
    };
    let sweep = ClassicalSweep {
        delta_h: a.delta_h,
        dt: a.dt,
        n_paths: a.paths,
        seed: a.seed,
    };
    let mut t = Table::new("p_error", &["tau_q_s", "tau_q_over_kramers", "p_error"]);
    for &tq in &taus {
        let pe = classical_p_error(tq, p, a.gamma_eff, &sweep)?;
        t.push(vec![tq.into(), (tq / tau_k).into(), pe.into()]);
    }
    Ok(Output::single(
        t,
        json!({ "mode": "p-error", "tau_q": taus, "delta_h": a.delta_h, "kramers_s": tau_k }),
    ))
}

fn foil_bloch(p: &ModelParams<f64>, a: &FoilArgs) -> Result<Output, CliError> {
    let t_max = a.t_max.unwrap_or(50.0);
    let dt = a.dt.min(MAX_BLOCH_DT);
    let fp = BlochState::ordered_fixed_point(p.gamma_ratio);
    // Small tilt of the ordered fixed point, renormalized to the unit sphere.
    let tilt = BlochState::new(fp.mx, 0.0, fp.mz + 0.01);
    let norm = tilt.norm();
    let start = BlochState::new(tilt.mx / norm, tilt.my / norm, tilt.mz / norm);
    let traj = integrate_bloch(start, p, t_max, dt)?;
    let mz: Vec<f64> = traj.states.iter().map(|s| s.mz).collect();
    let omega = zero_crossing_frequency(&traj.times, &mz).map_or(f64::NAN, |w| w * p.j_phys);
    let expected = 2.0 * order_parameter(p.gamma_ratio).m_star * p.j_phys;
    let mut summary = Table::new(
        "bloch",
        &["omega_rad_s", "expected_rad_s", "max_norm_drift"],
    );
    let drift = traj
        .states
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    summary.push(vec![omega.into(), expected.into(), drift.into()]);
    let mut path = Table::new("trajectory", &["t", "mx", "my", "mz"]);
    let every = (traj.times.len() / 500).max(1);
    for (t, s) in traj.times.iter().zip(&traj.states).step_by(every) {
        path.push(vec![(*t).into(), s.mx.into(), s.my.into(), s.mz.into()]);
    }
    Ok(Output {
        tables: vec![summary, path],
        csv_table: 0,
        parameters: json!({ "mode": "bloch", "t_max": t_max, "bloch_dt": dt }),
        seed: None,
    })
}

pub fn selftest() -> CmdResult {
    let checks = lmglab::selftest::run_selftests();
    let mut t = Table::new("selftest", &["check", "passed", "detail"]);
    let mut failed = false;
    for c in &checks {
        failed |= !c.passed;
        t.push(vec![
            c.name.into(),
            c.passed.into(),
            c.detail.clone().into(),
        ]);
    }
    Ok(Outcome {
        output: Output::single(t, json!({})),
        failed,
    })
}
