//! Verification suites. Each trial is a pure function of the suite
//! configuration and its index, so trials run in any order and in parallel.

use std::f64::consts::PI;
use std::fmt::Display;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use hardy_lab::generators::{
    model_space, random_defect_instance, random_inner_multiplier, random_series, random_subspace,
    random_symmetric_zeros, random_toeplitz_symbol, random_zeros, toeplitz_kernel, Instance,
    NEAR_INVARIANCE_TOL,
};
use hardy_lab::inner::{blaschke_series, is_inner, BlaschkeSpec};
use hardy_lab::invariance::{
    almost_defect, beurling_extract, check_almost_characterization, defect, extract_g,
    is_nearly_invariant, theta_psi_crosscheck, Certificate,
};
use hardy_lab::rng::substream;
use hardy_lab::subspace::{containment_residual, orthonormalize, projector_distance, Subspace};
use hardy_lab::{Field, Result, TruncatedSeries};

use crate::config::{Suite, SuiteConfig};
use crate::report::{sort_records, Record};

/// Relative tolerance of the inner-product identity.
pub const LEMMA1_TOL: f64 = 1e-12;
pub const LEMMA2_TOL: f64 = 1e-6;
pub const LEMMA3_TOL: f64 = 1e-8;
pub const BEURLING_COEFF_TOL: f64 = 1e-6;
pub const BEURLING_INNER_TOL: f64 = 1e-8;
/// Tolerance of the exact defect checks.
pub const EXACT_TOL: f64 = 1e-12;

/// Number of fixed checks the defect suite appends after its random trials.
pub const DEFECT_FIXED_CHECKS: usize = 3;

/// Seed of instance `t` for suites that share generated instances (hitt,
/// almost, theta-psi): the same `(seed, t)` gives the same instance.
pub fn instance_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t as u64)
}

/// Number of trials of `suite`, including fixed checks.
pub fn trial_count(suite: Suite, cfg: &SuiteConfig) -> usize {
    let n = cfg.trials_for(suite);
    match suite {
        Suite::Defect => n + DEFECT_FIXED_CHECKS,
        Suite::Almost => n + 1,
        _ => n,
    }
}

/// Runs every trial of the given suites in parallel and returns the records
/// sorted by suite, then trial.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Vec<Record> {
    let jobs: Vec<(Suite, usize)> = Suite::expand(suites)
        .into_iter()
        .flat_map(|s| (0..trial_count(s, cfg)).map(move |t| (s, t)))
        .collect();
    let mut records: Vec<Record> = jobs
        .into_par_iter()
        .map(|(suite, trial)| Record {
            suite,
            trial,
            certificate: run_trial(suite, trial, cfg),
        })
        .collect();
    sort_records(&mut records);
    records
}

/// One trial. Errors from the engine become failing certificates that carry
/// the message in their instance.
pub fn run_trial(suite: Suite, t: usize, cfg: &SuiteConfig) -> Certificate {
    let n = cfg.trials_for(suite);
    let result = match suite {
        Suite::Lemma1 => lemma1(cfg, t),
        Suite::Lemma2 => lemma2(cfg, t, n),
        Suite::Lemma3 => lemma3(cfg, t, n),
        Suite::Beurling => beurling(cfg, t),
        Suite::Hitt => hitt(cfg, t, n),
        Suite::Defect => defect_trial(cfg, t, n),
        Suite::Almost => almost(cfg, t, n),
        Suite::ThetaPsi => theta_psi(cfg, t),
        Suite::All => Ok(Certificate::new("suite selector").fail()),
    };
    result.unwrap_or_else(|e| failed(suite, e, cfg, t))
}

fn failed(suite: Suite, err: impl Display, cfg: &SuiteConfig, t: usize) -> Certificate {
    Certificate::new(format!("{} trial completed", suite.name()))
        .fail()
        .with_instance(json!({
            "error": err.to_string(),
            "order": cfg.order,
            "seed": cfg.seed,
            "trial": t,
        }))
}

/// Copies every residual of `other` into `base` under `prefix`, keeping
/// tolerances, and fails `base` when `other` fails.
fn absorb(mut base: Certificate, other: &Certificate, prefix: &str) -> Certificate {
    for (name, &value) in &other.residuals {
        let key = format!("{prefix}{name}");
        base = match other.tolerances.get(name) {
            Some(&tol) => base.bound(&key, value, tol),
            None => base.metric(&key, value),
        };
    }
    if other.pass {
        base
    } else {
        base.fail()
    }
}

/// Folds all instance certificates into the first one; the instance field
/// gets the generator provenance.
fn merge_instance(inst: &Instance) -> Certificate {
    let mut certs = inst.certificates.iter();
    let first = certs.next().cloned().unwrap_or_else(|| Certificate::new("instance").fail());
    let mut merged = certs.enumerate().fold(first, |acc, (i, c)| absorb(acc, c, &format!("c{}.", i + 1)));
    merged.statement = inst
        .certificates
        .iter()
        .map(|c| c.statement.as_str())
        .collect::<Vec<_>>()
        .join("; ");
    merged.with_instance(json!({
        "generator": inst.generator,
        "params": inst.params,
        "seed": inst.seed,
        "dim": inst.subspace.dim(),
    }))
}

fn lemma1(cfg: &SuiteConfig, t: usize) -> Result<Certificate> {
    let mut rng = substream(cfg.seed, "lemma1", t as u64);
    let f = random_series(&mut rng, cfg.order, Field::Complex);
    let h = random_series(&mut rng, cfg.order, Field::Complex);
    let lhs = f.inner_product(&h)?;
    let rhs = h.hat().inner_product(&f.hat())?;
    let scale = f.norm() * h.norm();
    Ok(Certificate::new("⟨f, h⟩ = ⟨ĥ, f̂⟩")
        .bound("relative_error", (lhs - rhs).norm() / scale, LEMMA1_TOL)
        .with_instance(json!({"order": cfg.order, "seed": cfg.seed, "trial": t})))
}

fn lemma2(cfg: &SuiteConfig, t: usize, count: usize) -> Result<Certificate> {
    let symmetric = t < count / 2;
    let mut rng = substream(cfg.seed, "lemma2", t as u64);
    let spec = if symmetric {
        BlaschkeSpec::real_positive(random_symmetric_zeros(&mut rng, 4, 0.05, 0.7), 0)?
    } else {
        let degree = rng.random_range(1..=4);
        let zeros = random_zeros(&mut rng, degree, 0.05, 0.7);
        BlaschkeSpec::new(zeros, Complex64::from_polar(1.0, rng.random_range(-PI..PI)), 0)?
    };
    let theta = blaschke_series(&spec, cfg.order)?;
    let theta_hat = theta.hat();
    let k = model_space(&theta, cfg.order)?;
    let k_hat = model_space(&theta_hat, cfg.order)?;
    let distance = projector_distance(&k.hat(), &k_hat)?;
    let degree = spec.degree();
    Ok(Certificate::new("hat(K_θ) = K_θ̂")
        .bound("projector_distance", distance, LEMMA2_TOL)
        .require("dimensions_match_degree", k.dim() == degree && k_hat.dim() == degree)
        .metric("degree", degree as f64)
        .with_instance(json!({
            "order": cfg.order,
            "theta": spec,
            "symmetric": symmetric,
        })))
}

fn lemma3(cfg: &SuiteConfig, t: usize, count: usize) -> Result<Certificate> {
    let hat_closed = t >= count / 2;
    let mut rng = substream(cfg.seed, "lemma3", t as u64);
    let dim = rng.random_range(1..=8usize.min(cfg.order - 1));
    let sub_seed = rng.random::<u64>();
    let n = if hat_closed {
        random_subspace(sub_seed, cfg.order, dim, Field::Real)?.complexify()?
    } else {
        random_subspace(sub_seed, cfg.order, dim, Field::Complex)?
    };
    let lhs = n.symmetrize().orthocomplement();
    let rhs = n.orthocomplement().symmetrize();
    let mut cert = Certificate::new("H²_ℝ ⊖ φ(N) ⊂ φ(H² ⊖ N), with equality when N is hat-closed")
        .bound("containment_residual", containment_residual(&lhs, &rhs)?, LEMMA3_TOL)
        .metric("lhs_dim", lhs.dim() as f64)
        .metric("rhs_dim", rhs.dim() as f64);
    if hat_closed {
        cert = cert
            .bound("projector_distance", projector_distance(&lhs, &rhs)?, LEMMA3_TOL)
            .metric("hat_distance", projector_distance(&n.hat(), &n)?);
    }
    Ok(cert.with_instance(json!({
        "order": cfg.order,
        "dim": dim,
        "hat_closed": hat_closed,
        "subspace_seed": sub_seed,
    })))
}

fn beurling(cfg: &SuiteConfig, t: usize) -> Result<Certificate> {
    let mut rng = substream(cfg.seed, "beurling", t as u64);
    let spec = BlaschkeSpec::real_positive(random_symmetric_zeros(&mut rng, 3, 0.1, 0.6), 0)?;
    let theta = blaschke_series(&spec, cfg.order)?;
    let m = model_space(&theta, cfg.order)?.orthocomplement();
    let b = beurling_extract(&m, Field::Real, cfg.tol)?;
    let plus = b.theta.sub(&theta)?.norm();
    let minus = b.theta.add(&theta)?.norm();
    let inner = is_inner(
        &b.theta.clone().with_spill(b.inner.tail_bound),
        4 * cfg.order,
        BEURLING_INNER_TOL,
    );
    Ok(Certificate::new("M = θH² recovers θ up to sign, and θ is inner")
        .bound("coefficient_error", plus.min(minus), BEURLING_COEFF_TOL)
        .require("extracted_is_inner", inner.pass)
        .metric("boundary_deviation", inner.max_deviation)
        .metric("tail_bound", inner.tail_bound)
        .bound("span_distance", b.span_distance, cfg.tol)
        .metric("shift_residual", b.shift_residual)
        .with_instance(json!({"order": cfg.order, "theta": spec})))
}

/// Trials below three quarters of `count` use inner multipliers, the rest
/// Toeplitz kernels.
fn hitt(cfg: &SuiteConfig, t: usize, count: usize) -> Result<Certificate> {
    if t < hitt_multiplier_trials(count) {
        let inst = random_inner_multiplier(instance_seed(cfg.seed, t), cfg.order, cfg.rank_tol)?;
        return Ok(merge_instance(&inst));
    }
    let mut rng = substream(cfg.seed, "toeplitz", t as u64);
    let symbol = random_toeplitz_symbol(&mut rng, 3);
    let inst = toeplitz_kernel(&symbol, cfg.order, cfg.rank_tol)?;
    let nontrivial = !inst.subspace.is_zero();
    let nearly = nontrivial && is_nearly_invariant(&inst.subspace, NEAR_INVARIANCE_TOL)?;
    Ok(merge_instance(&inst)
        .require("kernel_nontrivial", nontrivial)
        .require("nearly_invariant", nearly))
}

pub fn hitt_multiplier_trials(count: usize) -> usize {
    count * 3 / 4
}

fn defect_trial(cfg: &SuiteConfig, t: usize, count: usize) -> Result<Certificate> {
    if t < count {
        let n = 1 + t % 2;
        let inst = random_defect_instance(instance_seed(cfg.seed, t), n, cfg.order, cfg.rank_tol)?;
        return Ok(merge_instance(&inst));
    }
    match t - count {
        0 => exact_model_spaces(cfg),
        1 => exact_span_z(cfg),
        _ => exact_tilted_line(cfg),
    }
}

fn span(order: usize, vectors: &[&[f64]]) -> Result<Subspace> {
    let series: Vec<_> = vectors
        .iter()
        .map(|v| TruncatedSeries::real(v).resize(order))
        .collect();
    orthonormalize(order, Field::Real, &series, hardy_lab::subspace::DEFAULT_RANK_TOL)
}

fn exact_model_spaces(cfg: &SuiteConfig) -> Result<Certificate> {
    let order = cfg.order;
    let z3 = model_space(&TruncatedSeries::monomial(3, order), order)?;
    let spec = BlaschkeSpec::real_positive(vec![Complex64::new(0.5, 0.0), Complex64::new(-0.3, 0.0)], 0)?;
    let kb = model_space(&blaschke_series(&spec, order)?, order)?;
    let d1 = defect(&z3, cfg.rank_tol)?.defect;
    let d2 = defect(&kb, cfg.rank_tol)?.defect;
    Ok(Certificate::new("model spaces have defect 0")
        .require("z3_defect_zero", d1 == 0)
        .require("blaschke_defect_zero", d2 == 0)
        .metric("z3_dim", z3.dim() as f64)
        .metric("blaschke_dim", kb.dim() as f64)
        .with_instance(json!({"order": order, "theta": ["z3", spec]})))
}

fn exact_span_z(cfg: &SuiteConfig) -> Result<Certificate> {
    let m = span(cfg.order, &[&[0.0, 1.0]])?;
    let r = defect(&m, cfg.rank_tol)?;
    let one = span(cfg.order, &[&[1.0]])?;
    Ok(Certificate::new("span{z} has defect 1 with defect space span{1}")
        .require("defect_one", r.defect == 1)
        .bound("basis_distance", projector_distance(&r.defect_basis, &one)?, EXACT_TOL)
        .with_instance(json!({"order": cfg.order, "subspace": "span{z}"})))
}

/// `T*` of `(z + z²)/√2` projected off the line by explicit dense
/// arithmetic, independent of the engine's SVD route.
pub fn tilted_line_direction() -> [f64; 3] {
    let s = 0.5f64.sqrt();
    let m = [0.0, s, s];
    let v = [s, s, 0.0];
    let mv: f64 = m.iter().zip(&v).map(|(a, b)| a * b).sum();
    [v[0] - mv * m[0], v[1] - mv * m[1], v[2] - mv * m[2]]
}

fn exact_tilted_line(cfg: &SuiteConfig) -> Result<Certificate> {
    let s = 0.5f64.sqrt();
    let m = span(cfg.order, &[&[0.0, s, s]])?;
    let r = defect(&m, cfg.rank_tol)?;
    let expected = span(cfg.order, &[&tilted_line_direction()])?;
    Ok(Certificate::new("span{(z + z²)/√2} has defect 1 along 1 + z/2 − z²/2")
        .require("defect_one", r.defect == 1)
        .bound("basis_distance", projector_distance(&r.defect_basis, &expected)?, EXACT_TOL)
        .with_instance(json!({"order": cfg.order, "subspace": "span{(z+z^2)/sqrt2}"})))
}

/// First half: inner multipliers, second half: defect instances (the same
/// seeds as the hitt and defect suites), then span{1 + z}.
fn almost(cfg: &SuiteConfig, t: usize, count: usize) -> Result<Certificate> {
    let half = count / 2;
    let (m, provenance) = if t < half {
        let inst = random_inner_multiplier(instance_seed(cfg.seed, t), cfg.order, cfg.rank_tol)?;
        (inst.subspace, json!({"generator": inst.generator, "seed": inst.seed}))
    } else if t < count {
        let k = t - half;
        let inst = random_defect_instance(instance_seed(cfg.seed, k), 1 + k % 2, cfg.order, cfg.rank_tol)?;
        (inst.subspace, json!({"generator": inst.generator, "seed": inst.seed}))
    } else {
        return one_plus_z(cfg);
    };
    let cert = check_almost_characterization(&m, cfg.rank_tol, cfg.tol)?;
    let mut instance = cert.instance.clone();
    if let (Value::Object(obj), Value::Object(p)) = (&mut instance, provenance) {
        obj.extend(p);
    }
    Ok(cert.with_instance(instance))
}

fn one_plus_z(cfg: &SuiteConfig) -> Result<Certificate> {
    let m = span(cfg.order, &[&[1.0, 1.0]])?;
    let base = check_almost_characterization(&m, cfg.rank_tol, cfg.tol)?;
    let nearly = is_nearly_invariant(&m, cfg.tol)?;
    let d = defect(&m, cfg.rank_tol)?.defect;
    let a = almost_defect(&m, cfg.rank_tol)?.defect;
    let g = extract_g(&m)?;
    let tg = g.backshift();
    let g_escape = (tg.sub(&m.project(&tg)?)?).norm();
    Ok(base
        .require("nearly_invariant", nearly)
        .require("defect_zero", d == 0)
        .require("backshift_g_outside", g_escape > cfg.tol)
        .require("almost_defect_one", a == 1)
        .metric("backshift_g_escape", g_escape))
}

fn theta_psi(cfg: &SuiteConfig, t: usize) -> Result<Certificate> {
    let seed = instance_seed(cfg.seed, t);
    let inst = random_inner_multiplier(seed, cfg.order, cfg.rank_tol)?;
    let cert = theta_psi_crosscheck(&inst.subspace, cfg.rank_tol, cfg.tol)?;
    let proper = cert.instance.get("no_inner_factor") == Some(&Value::Bool(false));
    let mut instance = cert.instance.clone();
    if let Value::Object(obj) = &mut instance {
        obj.insert("seed".into(), json!(seed));
        obj.insert("params".into(), inst.params.clone());
    }
    Ok(cert.require("n_proper", proper).with_instance(instance))
}
