//! The `verify`, `decompose` and `gen` commands, independent of argument
//! parsing and process exit.

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use hardy_lab::generators::{
    inner_multiplier_instance, model_space_instance, random_defect_instance, random_inner_multiplier,
    random_subspace, toeplitz_kernel, Instance, LaurentSymbol,
};
use hardy_lab::inner::BlaschkeSpec;
use hardy_lab::invariance::{
    decompose_with_defect, defect, hitt_decompose, Certificate, DefectCase,
};
use hardy_lab::subspace::Subspace;
use hardy_lab::{Field, TruncatedSeries};

use crate::config::{RunConfig, DEFAULT_ORDER, DEFAULT_RANK_TOL};
use crate::error::CliError;
use crate::report::Record;
use crate::suites::run_suites;

/// Records of a verification run and whether every certificate passed.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub records: Vec<Record>,
    pub all_pass: bool,
}

pub fn verify(cfg: &RunConfig) -> Result<VerifyOutcome, CliError> {
    cfg.validate()?;
    let records = run_suites(&cfg.suites, &cfg.suite);
    let all_pass = records.iter().all(|r| r.certificate.pass);
    Ok(VerifyOutcome { records, all_pass })
}

/// Which decomposition `decompose` applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    /// Defect 0 and some element nonzero at the origin: `M = g N`.
    Hitt,
    /// Defect at least 1, either case.
    Defect,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeReport {
    pub kind: DecompositionKind,
    pub case: DefectCase,
    pub defect: usize,
    pub g: Option<TruncatedSeries>,
    pub defect_basis: Subspace,
    /// In the stacked space with blocks of `block_order` coefficients.
    pub n: Subspace,
    pub block_order: usize,
    pub certificate: Certificate,
}

/// Reads a subspace from either a bare `Subspace` document or an instance
/// document with a `subspace` field.
pub fn parse_subspace(text: &str) -> Result<Subspace, CliError> {
    let mut value: Value = serde_json::from_str(text)?;
    if let Some(inner) = value.get_mut("subspace") {
        value = inner.take();
    }
    Ok(serde_json::from_value(value)?)
}

/// Chooses the decomposition from the defect and the behavior at the
/// origin. The zero subspace is a usage error.
pub fn decompose(m: &Subspace, rank_tol: f64) -> Result<DecomposeReport, CliError> {
    if m.is_zero() {
        return Err(CliError::Usage("cannot decompose the zero subspace".into()));
    }
    let report = defect(m, rank_tol)?;
    if report.defect == 0 {
        let h = hitt_decompose(m, rank_tol)?;
        let certificate = h.certificate();
        return Ok(DecomposeReport {
            kind: DecompositionKind::Hitt,
            case: DefectCase::NonVanishing,
            defect: 0,
            g: Some(h.g),
            defect_basis: report.defect_basis,
            block_order: m.order(),
            n: h.n,
            certificate: with_input(certificate, m, rank_tol),
        });
    }
    let d = decompose_with_defect(m, rank_tol)?;
    let certificate = d.certificate();
    Ok(DecomposeReport {
        kind: DecompositionKind::Defect,
        case: d.case,
        defect: d.defect_basis.dim(),
        g: d.g,
        defect_basis: d.defect_basis,
        n: d.n,
        block_order: d.block_order,
        certificate: with_input(certificate, m, rank_tol),
    })
}

fn with_input(c: Certificate, m: &Subspace, rank_tol: f64) -> Certificate {
    c.with_instance(serde_json::json!({
        "order": m.order(),
        "dim": m.dim(),
        "field": m.field(),
        "rank_tol": rank_tol,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    #[value(name = "model_space")]
    ModelSpace,
    #[value(name = "toeplitz")]
    Toeplitz,
    #[value(name = "inner_multiplier")]
    InnerMultiplier,
    #[value(name = "defect_instance")]
    DefectInstance,
    #[value(name = "random_subspace")]
    RandomSubspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FieldArg {
    Real,
    #[default]
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

/// Parameters of `gen`; which ones matter depends on the generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GenRequest {
    pub generator: Generator,
    pub order: usize,
    pub rank_tol: f64,
    pub seed: Option<u64>,
    pub theta: Option<String>,
    pub symbol: Option<String>,
    pub g: Option<String>,
    pub n: usize,
    pub dim: usize,
    pub field: FieldArg,
}

impl GenRequest {
    pub fn new(generator: Generator) -> Self {
        Self {
            generator,
            order: DEFAULT_ORDER,
            rank_tol: DEFAULT_RANK_TOL,
            seed: None,
            theta: None,
            symbol: None,
            g: None,
            n: 1,
            dim: 3,
            field: FieldArg::Complex,
        }
    }
}

/// `1`, `z`, `z<k>`, or a Blaschke JSON document.
pub fn parse_inner(s: &str) -> Result<BlaschkeSpec, CliError> {
    let s = s.trim();
    if s == "1" {
        return Ok(BlaschkeSpec::monomial(0));
    }
    if let Some(rest) = s.strip_prefix('z') {
        if rest.is_empty() {
            return Ok(BlaschkeSpec::monomial(1));
        }
        if let Ok(k) = rest.parse::<usize>() {
            return Ok(BlaschkeSpec::monomial(k));
        }
    }
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("cannot parse inner function {s:?}: {e}")))
}

/// `zbar<k>`, `z<k>` (exponent optional), `1`, or a symbol JSON document.
pub fn parse_symbol(s: &str) -> Result<LaurentSymbol, CliError> {
    let s = s.trim();
    let one = Complex64::new(1.0, 0.0);
    if s == "1" {
        return Ok(LaurentSymbol::from_terms(&[(0, one)]));
    }
    let (sign, rest) = if let Some(rest) = s.strip_prefix("zbar") {
        (-1, rest)
    } else if let Some(rest) = s.strip_prefix('z') {
        (1, rest)
    } else {
        (0, s)
    };
    if sign != 0 {
        let k = if rest.is_empty() { Some(1) } else { rest.parse::<i64>().ok() };
        if let Some(k) = k {
            return Ok(LaurentSymbol::from_terms(&[(sign * k, one)]));
        }
    }
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("cannot parse symbol {s:?}: {e}")))
}

fn required<'a>(value: &'a Option<String>, flag: &str, generator: &str) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required for {generator}")))
}

/// Runs a generator. Explicit `--g`/`--theta` select the explicit inner
/// multiplier; otherwise seeded generators default to seed 0.
pub fn generate(req: &GenRequest) -> Result<Instance, CliError> {
    let seed = req.seed.unwrap_or(0);
    let inst = match req.generator {
        Generator::ModelSpace => {
            let theta = parse_inner(required(&req.theta, "theta", "model_space")?)?;
            model_space_instance(&theta, req.order, req.rank_tol)?
        }
        Generator::Toeplitz => {
            let symbol = parse_symbol(required(&req.symbol, "symbol", "toeplitz")?)?;
            toeplitz_kernel(&symbol, req.order, req.rank_tol)?
        }
        Generator::InnerMultiplier if req.g.is_some() || req.theta.is_some() => {
            let g = match &req.g {
                Some(g) => parse_inner(g)?,
                None => BlaschkeSpec::monomial(0),
            };
            let theta = parse_inner(required(&req.theta, "theta", "an explicit inner_multiplier")?)?;
            inner_multiplier_instance(&g, &theta, req.order, req.rank_tol)?
        }
        Generator::InnerMultiplier => random_inner_multiplier(seed, req.order, req.rank_tol)?,
        Generator::DefectInstance => random_defect_instance(seed, req.n, req.order, req.rank_tol)?,
        Generator::RandomSubspace => {
            let subspace = random_subspace(seed, req.order, req.dim, req.field.into())?;
            Instance {
                generator: "random_subspace".into(),
                params: serde_json::json!({
                    "order": req.order,
                    "dim": req.dim,
                    "field": Field::from(req.field),
                }),
                seed: Some(seed),
                subspace,
                certificates: Vec::new(),
            }
        }
    };
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_lab::subspace::projector_distance;

    fn poly_span(order: usize, vs: &[&[f64]]) -> Subspace {
        let series: Vec<_> = vs.iter().map(|v| TruncatedSeries::real(v).resize(order)).collect();
        hardy_lab::subspace::orthonormalize(order, Field::Real, &series, 1e-10).unwrap()
    }

    #[test]
    fn inner_literals() {
        assert_eq!(parse_inner("z").unwrap(), BlaschkeSpec::monomial(1));
        assert_eq!(parse_inner("z3").unwrap(), BlaschkeSpec::monomial(3));
        assert_eq!(parse_inner("1").unwrap(), BlaschkeSpec::monomial(0));
        let json = serde_json::to_string(&BlaschkeSpec::real_positive(vec![Complex64::new(0.5, 0.0)], 0).unwrap()).unwrap();
        assert_eq!(parse_inner(&json).unwrap().degree(), 1);
        assert!(parse_inner("zz").is_err());
        assert!(parse_inner("{\"zeros\": [[2.0, 0.0]]}").is_err());
    }

    #[test]
    fn symbol_literals() {
        assert_eq!(parse_symbol("zbar").unwrap().coeff(-1), Complex64::new(1.0, 0.0));
        assert_eq!(parse_symbol("zbar2").unwrap().coeff(-2), Complex64::new(1.0, 0.0));
        assert_eq!(parse_symbol("z3").unwrap().coeff(3), Complex64::new(1.0, 0.0));
        let s = LaurentSymbol::from_terms(&[(-2, Complex64::new(1.0, 0.0)), (0, Complex64::new(-0.25, 0.0))]);
        assert_eq!(parse_symbol(&serde_json::to_string(&s).unwrap()).unwrap(), s);
        assert!(parse_symbol("w").is_err());
    }

    #[test]
    fn gen_model_space_z2() {
        let req = GenRequest {
            theta: Some("z2".into()),
            order: 64,
            ..GenRequest::new(Generator::ModelSpace)
        };
        let inst = generate(&req).unwrap();
        assert!(inst.pass());
        assert!(projector_distance(&inst.subspace, &poly_span(64, &[&[1.0], &[0.0, 1.0]])).unwrap() <= 1e-15);
    }

    #[test]
    fn gen_toeplitz_zbar() {
        let req = GenRequest {
            symbol: Some("zbar".into()),
            order: 64,
            ..GenRequest::new(Generator::Toeplitz)
        };
        let inst = generate(&req).unwrap();
        assert!(inst.pass());
        assert!(projector_distance(&inst.subspace, &poly_span(64, &[&[1.0]])).unwrap() <= 1e-15);
    }

    #[test]
    fn gen_requires_parameters() {
        assert!(matches!(generate(&GenRequest::new(Generator::ModelSpace)), Err(CliError::Usage(_))));
        assert!(matches!(generate(&GenRequest::new(Generator::Toeplitz)), Err(CliError::Usage(_))));
        let req = GenRequest {
            g: Some("1".into()),
            ..GenRequest::new(Generator::InnerMultiplier)
        };
        assert!(matches!(generate(&req), Err(CliError::Usage(_))));
    }

    #[test]
    fn decompose_span_z_is_case_ii() {
        let r = decompose(&poly_span(16, &[&[0.0, 1.0]]), 1e-8).unwrap();
        assert_eq!(r.kind, DecompositionKind::Defect);
        assert_eq!(r.case, DefectCase::Vanishing);
        assert_eq!(r.defect, 1);
        assert!(projector_distance(&r.defect_basis, &poly_span(16, &[&[1.0]])).unwrap() <= 1e-12);
        assert!(r.certificate.pass);
    }

    #[test]
    fn decompose_model_space_is_hitt_with_unit_g() {
        let m = poly_span(32, &[&[1.0], &[0.0, 1.0], &[0.0, 0.0, 1.0]]);
        let r = decompose(&m, 1e-8).unwrap();
        assert_eq!(r.kind, DecompositionKind::Hitt);
        let g = r.g.unwrap();
        assert!(g.sub(&TruncatedSeries::monomial(0, 32)).unwrap().norm() <= 1e-12);
        assert!(projector_distance(&r.n, &m).unwrap() <= 1e-12);
        assert!(r.certificate.pass);
    }

    #[test]
    fn decompose_rejects_zero() {
        let z = Subspace::zero(8, Field::Real);
        assert!(matches!(decompose(&z, 1e-8), Err(CliError::Usage(_))));
    }

    #[test]
    fn parse_subspace_accepts_both_documents() {
        let inst = generate(&GenRequest {
            dim: 2,
            order: 16,
            ..GenRequest::new(Generator::RandomSubspace)
        })
        .unwrap();
        let bare = serde_json::to_string(&inst.subspace).unwrap();
        let wrapped = serde_json::to_string(&inst).unwrap();
        assert_eq!(parse_subspace(&bare).unwrap(), inst.subspace);
        assert_eq!(parse_subspace(&wrapped).unwrap(), inst.subspace);
        assert!(parse_subspace("{}").is_err());
    }
}
