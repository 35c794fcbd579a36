//! Certified test instances.
//!
//! [`model_space`] and [`random_subspace`] return bare [`Subspace`]s. The
//! other constructors return an [`Instance`]: the subspace, the parameters
//! and seed that rebuild it, and the certificates the engine produced on it.
//!
//! Products are formed at the working order with their discarded mass
//! recorded; the random families keep all finite-support parts inside the
//! lower half of the coefficient range and use zeros of modulus at most
//! 0.6, so the truncation tails stay far below every tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{LabError, Result};
use crate::inner::{blaschke_series, is_inner, BlaschkeSpec, MIN_GRID};
use crate::invariance::{
    certify_decomposition, certify_hitt, defect, extract_g, near_invariance_residual, Certificate,
};
use crate::json::pair_vec;
use crate::linalg::{self, CMatrix};
use crate::rng::substream;
use crate::series::{Field, SeriesTuple, TruncatedSeries};
use crate::subspace::{orthonormalize, Subspace};

/// Boundary tolerance for the inner-function precondition of [`model_space`].
pub const INNER_TOL: f64 = 1e-8;
/// Singular values of the finite section of `T_θ` below this are treated as
/// zero; for inner `θ` the others are close to one.
pub const MODEL_SPACE_CUTOFF: f64 = 1e-8;
/// Largest mass a kept kernel direction may carry in the top quarter of the
/// coefficient range.
pub const GUARD_BAND_TOL: f64 = 1e-8;
pub const NEAR_INVARIANCE_TOL: f64 = 1e-6;
pub const STACKED_INVARIANCE_TOL: f64 = 1e-8;
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
const ORTHONORMAL_TOL: f64 = 1e-10;

/// A generated subspace with its provenance and certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub generator: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub subspace: Subspace,
    pub certificates: Vec<Certificate>,
}

impl Instance {
    pub fn pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }
}

/// `H² ⊖ θH²` at order `N`: left singular vectors of the square finite
/// section of `T_θ` whose singular value is below [`MODEL_SPACE_CUTOFF`].
///
/// For `θ = z^k` this is exactly the polynomials of degree `< k`; for a
/// Blaschke product the error is of the order of the tail `r^N`.
pub fn model_space(theta: &TruncatedSeries, order: usize) -> Result<Subspace> {
    if order == 0 {
        return Err(LabError::Degenerate("series order must be positive"));
    }
    let cert = is_inner(theta, (4 * theta.order()).max(MIN_GRID), INNER_TOL);
    if !cert.pass {
        return Err(LabError::NotInner {
            deviation: cert.max_deviation,
            tail: cert.tail_bound,
        });
    }
    let field = theta.field();
    let theta = theta.resize(order);
    let t = linalg::multiplication_matrix(theta.coeffs(), order, order);
    let k = linalg::null_space(&t.adjoint(), field, MODEL_SPACE_CUTOFF);
    Ok(Subspace::from_basis_unchecked(field, clean(k, field)))
}

/// [`model_space`] of a Blaschke product as an instance, certifying near
/// invariance, a zero defect and a dimension equal to the degree.
pub fn model_space_instance(theta_spec: &BlaschkeSpec, order: usize, rank_tol: f64) -> Result<Instance> {
    let theta = blaschke_series(theta_spec, order)?;
    let subspace = model_space(&theta, order)?;
    let mut certificates = vec![near_invariance_certificate(&subspace)?];
    if !subspace.is_zero() {
        let report = defect(&subspace, rank_tol)?;
        certificates.push(
            Certificate::new("K_θ is backward-shift invariant with dimension deg θ")
                .bound("defect", report.defect as f64, 0.0)
                .require("dimension_is_degree", subspace.dim() == theta_spec.degree()),
        );
    }
    Ok(Instance {
        generator: "model_space".into(),
        params: json!({ "order": order, "rank_tol": rank_tol, "theta": theta_spec }),
        seed: None,
        subspace,
        certificates,
    })
}

fn clean(mut basis: CMatrix, field: Field) -> CMatrix {
    linalg::canonical_phase(&mut basis, 1e-8);
    if field == Field::Real {
        basis.apply(|c| c.im = 0.0);
    }
    basis
}

/// Finitely supported symbol `Σ_{|k| ≤ K} c_k z^k` on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolLiteral", into = "SymbolLiteral")]
pub struct LaurentSymbol {
    half_width: usize,
    /// `coeffs[k + K] = c_k`.
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SymbolLiteral {
    half_width: usize,
    #[serde(with = "pair_vec")]
    coeffs: Vec<Complex64>,
}

impl TryFrom<SymbolLiteral> for LaurentSymbol {
    type Error = LabError;

    fn try_from(lit: SymbolLiteral) -> Result<Self> {
        LaurentSymbol::new(lit.half_width, lit.coeffs)
    }
}

impl From<LaurentSymbol> for SymbolLiteral {
    fn from(s: LaurentSymbol) -> Self {
        SymbolLiteral {
            half_width: s.half_width,
            coeffs: s.coeffs,
        }
    }
}

impl LaurentSymbol {
    /// `coeffs` lists `c_{−K}, …, c_K`.
    pub fn new(half_width: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * half_width + 1 {
            return Err(LabError::DimensionMismatch(coeffs.len(), 2 * half_width + 1));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(LabError::Domain("symbol coefficients must be finite".into()));
        }
        Ok(Self { half_width, coeffs })
    }

    /// Builds a symbol from `(k, c_k)` terms; repeated indices add up.
    pub fn from_terms(terms: &[(i64, Complex64)]) -> Self {
        let half_width = terms.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * half_width + 1];
        for &(k, c) in terms {
            coeffs[(k + half_width as i64) as usize] += c;
        }
        Self { half_width, coeffs }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_k`, zero outside the support.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k + self.half_width as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// All coefficients real, so the Toeplitz matrix maps real sequences to
    /// real sequences.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// `T[i, j] = c_{i − j}`.
    pub fn toeplitz_matrix(&self, order: usize) -> CMatrix {
        CMatrix::from_fn(order, order, |i, j| self.coeff(i as i64 - j as i64))
    }
}

/// Restricts the span of `basis` to combinations with top-quarter mass at
/// most [`GUARD_BAND_TOL`].
fn mask_guard_band(basis: &CMatrix, field: Field) -> CMatrix {
    let order = basis.nrows();
    if basis.ncols() == 0 {
        return basis.clone();
    }
    let start = order - order / 4;
    let top = basis.rows(start, order - start).into_owned();
    let keep = linalg::null_space(&top, field, GUARD_BAND_TOL);
    basis * keep
}

fn near_invariance_certificate(m: &Subspace) -> Result<Certificate> {
    if m.is_zero() {
        return Ok(Certificate::new("T* maps M ∩ zH² into M").metric("dim", 0.0));
    }
    Ok(Certificate::new("T* maps M ∩ zH² into M")
        .bound("near_invariance_residual", near_invariance_residual(m)?, NEAR_INVARIANCE_TOL)
        .metric("dim", m.dim() as f64))
}

/// Kernel of the `N × N` Toeplitz section `T[i, j] = c_{i−j}`.
///
/// The kernel uses the cutoff `rank_tol · σ_max(T)`. Directions that reach
/// into the top quarter of the coefficient range are truncation artifacts of
/// the boundary rows and are masked out before the near-invariance
/// certificate is computed.
pub fn toeplitz_kernel(symbol: &LaurentSymbol, order: usize, rank_tol: f64) -> Result<Instance> {
    if symbol.is_zero() {
        return Err(LabError::Degenerate("symbol must be nonzero"));
    }
    if order == 0 {
        return Err(LabError::Degenerate("series order must be positive"));
    }
    let field = if symbol.is_real() {
        Field::Real
    } else {
        Field::Complex
    };
    let t = symbol.toeplitz_matrix(order);
    let thr = rank_tol * linalg::spectral_norm(&t, field);
    let raw = linalg::null_space(&t, field, thr);
    let masked = mask_guard_band(&raw, field);
    let subspace = Subspace::from_basis_unchecked(field, clean(masked, field));
    let cert = near_invariance_certificate(&subspace)?
        .metric("raw_kernel_dim", raw.ncols() as f64)
        .metric("masked_dim", (raw.ncols() - subspace.dim()) as f64);
    Ok(Instance {
        generator: "toeplitz".into(),
        params: json!({ "order": order, "rank_tol": rank_tol, "symbol": symbol }),
        seed: None,
        subspace,
        certificates: vec![cert],
    })
}

/// `M = g · K_θ` for an inner `g` with real coefficients and `g(0) > 0`.
///
/// Certifies near invariance and the Hitt triple. The engine's extremal
/// function is in general `g` times the normalized reproducing kernel of
/// `K_θ` at the origin, not `g` itself.
pub fn inner_multiplier_instance(
    g_spec: &BlaschkeSpec,
    theta_spec: &BlaschkeSpec,
    order: usize,
    rank_tol: f64,
) -> Result<Instance> {
    if !g_spec.is_real_symmetric() {
        return Err(LabError::Domain(
            "multiplier zeros must be closed under conjugation".into(),
        ));
    }
    let g0 = g_spec.value_at_origin().re;
    if !(g0 > 0.0) {
        return Err(LabError::Sign(g0));
    }
    let theta = blaschke_series(theta_spec, order)?;
    let k = model_space(&theta, order)?;
    if k.is_zero() {
        return Err(LabError::Degenerate("model space is trivial"));
    }
    let field = k.field();
    let mut g = blaschke_series(g_spec, order)?;
    if field == Field::Complex {
        g = g.to_complex();
    }
    let products = k
        .vectors()
        .iter()
        .map(|b| g.multiply(b, order))
        .collect::<Result<Vec<_>>>()?;
    let spill = products.iter().map(|p| p.spill()).fold(0.0, f64::max);
    let m = orthonormalize(order, field, &products, rank_tol)?;
    let certificates = vec![
        near_invariance_certificate(&m)?.metric("product_spill", spill),
        certify_hitt(&m, rank_tol)?,
    ];
    Ok(Instance {
        generator: "inner_multiplier".into(),
        params: json!({
            "order": order,
            "rank_tol": rank_tol,
            "g": g_spec,
            "theta": theta_spec,
        }),
        seed: None,
        subspace: m,
        certificates,
    })
}

/// `degree ∈ [1, max_degree]` zeros closed under conjugation, with moduli in
/// `[min_modulus, max_modulus)` and conjugate pairs kept away from the real
/// axis.
pub fn random_symmetric_zeros<R: Rng>(
    rng: &mut R,
    max_degree: usize,
    min_modulus: f64,
    max_modulus: f64,
) -> Vec<Complex64> {
    let degree = rng.random_range(1..=max_degree);
    let mut zeros = Vec::with_capacity(degree);
    while zeros.len() < degree {
        let r = rng.random_range(min_modulus..max_modulus);
        if degree - zeros.len() >= 2 && rng.random_bool(0.5) {
            let a = Complex64::from_polar(r, rng.random_range(0.3..PI - 0.3));
            zeros.push(a);
            zeros.push(a.conj());
        } else {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            zeros.push(Complex64::new(sign * r, 0.0));
        }
    }
    zeros
}

/// `degree` zeros with uniformly distributed arguments and moduli in
/// `[min_modulus, max_modulus)`.
pub fn random_zeros<R: Rng>(
    rng: &mut R,
    degree: usize,
    min_modulus: f64,
    max_modulus: f64,
) -> Vec<Complex64> {
    (0..degree)
        .map(|_| {
            let r = rng.random_range(min_modulus..max_modulus);
            Complex64::from_polar(r, rng.random_range(-PI..PI))
        })
        .collect()
}

/// Gaussian coefficients over `field`.
pub fn random_series<R: Rng>(rng: &mut R, order: usize, field: Field) -> TruncatedSeries {
    let coeffs = (0..order)
        .map(|_| {
            let re = gaussian(rng);
            let im = match field {
                Field::Real => 0.0,
                Field::Complex => gaussian(rng),
            };
            Complex64::new(re, im)
        })
        .collect();
    TruncatedSeries::new(field, coeffs).expect("imaginary parts match the field")
}

/// `z̄^k (1 + p)` with `k ∈ [1, max_shift]` and `p` a real polynomial of
/// degree at most `k + 1`, zero constant term and coefficients below
/// `0.8 / (k + 1)` in modulus. The coefficient sum of `p` stays below one,
/// so `1 + p` has no zeros in the closed disk and the Toeplitz kernel has
/// dimension `k`.
pub fn random_toeplitz_symbol<R: Rng>(rng: &mut R, max_shift: usize) -> LaurentSymbol {
    let k = rng.random_range(1..=max_shift.max(1)) as i64;
    let bound = 0.8 / (k as f64 + 1.0);
    let mut terms = vec![(-k, Complex64::new(1.0, 0.0))];
    for j in 1..=k + 1 {
        terms.push((j - k, Complex64::new(rng.random_range(-bound..bound), 0.0)));
    }
    LaurentSymbol::from_terms(&terms)
}

/// Seeded [`inner_multiplier_instance`]: `g` of degree ≤ 2 with zeros of
/// modulus ≤ 0.5, `θ` of degree ≤ 3 with zeros of modulus ≤ 0.6, possibly
/// times `z`.
pub fn random_inner_multiplier(seed: u64, order: usize, rank_tol: f64) -> Result<Instance> {
    let mut rng = substream(seed, "inner_multiplier", 0);
    let g_spec = BlaschkeSpec::real_positive(random_symmetric_zeros(&mut rng, 2, 0.1, 0.5), 0)?;
    let theta_zeros = random_symmetric_zeros(&mut rng, 3, 0.1, 0.6);
    let theta_spec = BlaschkeSpec::real_positive(theta_zeros, rng.random_range(0..=1))?;
    let mut inst = inner_multiplier_instance(&g_spec, &theta_spec, order, rank_tol)?;
    inst.seed = Some(seed);
    Ok(inst)
}

fn gram_residual(vs: &[TruncatedSeries]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner_product(b)? - target).norm());
        }
    }
    Ok(worst)
}

fn in_field(f: &TruncatedSeries, field: Field) -> TruncatedSeries {
    match field {
        Field::Real => f.clone(),
        Field::Complex => f.to_complex(),
    }
}

/// Synthesizes `M = {g h + z Σ h_i e_i : (h, h_1, …, h_n) ∈ N}`.
///
/// `n_stacked` lives in the stacked space with blocks of `order`
/// coefficients: `(h, h_1, …, h_n)` when `g` is given and `(h_1, …, h_n)`
/// otherwise. It must be invariant under the stacked backward shift and the
/// `e_i` orthonormal; the synthesized `M` must come out orthogonal to every
/// `e_i`. Certifies `defect(M) ≤ n` and the matching decomposition round
/// trip.
pub fn defect_instance(
    g: Option<&TruncatedSeries>,
    e_list: &[TruncatedSeries],
    n_stacked: &Subspace,
    order: usize,
    rank_tol: f64,
) -> Result<Instance> {
    let blocks = e_list.len() + usize::from(g.is_some());
    if blocks == 0 {
        return Err(LabError::Degenerate("need a multiplier or at least one defect vector"));
    }
    if n_stacked.order() != blocks * order {
        return Err(LabError::DimensionMismatch(n_stacked.order(), blocks * order));
    }
    for f in g.into_iter().chain(e_list) {
        if f.order() != order {
            return Err(LabError::DimensionMismatch(f.order(), order));
        }
    }
    let gram = gram_residual(e_list)?;
    if gram > ORTHONORMAL_TOL {
        return Err(LabError::Rejected(format!(
            "defect vectors are not orthonormal (residual {gram:.3e})"
        )));
    }
    let basis = n_stacked.basis();
    let escape = linalg::project_out(basis, &linalg::block_backshift_rows(basis, order));
    let stacked_residual = linalg::spectral_norm(&escape, n_stacked.field());
    if stacked_residual > STACKED_INVARIANCE_TOL {
        return Err(LabError::Rejected(format!(
            "stacked subspace is not backward-shift invariant (residual {stacked_residual:.3e})"
        )));
    }

    let field = g
        .into_iter()
        .chain(e_list)
        .fold(n_stacked.field(), |f, s| f.join(s.field()));
    let g = g.map(|g| in_field(g, field));
    let e: Vec<_> = e_list.iter().map(|x| in_field(x, field)).collect();
    let mut spill: f64 = 0.0;
    let mut synthesized = Vec::with_capacity(n_stacked.dim());
    for j in 0..n_stacked.dim() {
        let col: Vec<Complex64> = basis.column(j).iter().copied().collect();
        let x = SeriesTuple::from_stacked(field, &col, order)?;
        let mut parts = x.entries().iter();
        let mut f = TruncatedSeries::zero(order, field);
        if let Some(g) = &g {
            let h = parts.next().expect("block count checked above");
            f = f.add(&g.multiply(h, order)?)?;
        }
        for (hi, ei) in parts.zip(&e) {
            f = f.add(&hi.multiply(ei, order)?.shift())?;
        }
        spill = spill.max(f.spill());
        synthesized.push(f);
    }
    let m = orthonormalize(order, field, &synthesized, rank_tol)?;
    if m.is_zero() {
        return Err(LabError::Degenerate("synthesized subspace is zero"));
    }
    let mut overlap: f64 = 0.0;
    for ei in &e {
        for mj in m.vectors() {
            overlap = overlap.max(ei.inner_product(&mj)?.norm());
        }
    }
    if overlap > ORTHOGONALITY_TOL {
        return Err(LabError::Rejected(format!(
            "synthesized subspace is not orthogonal to the defect vectors (overlap {overlap:.3e})"
        )));
    }

    let n = e.len();
    let report = defect(&m, rank_tol)?;
    let mut certificates = vec![Certificate::new("defect(M) is at most the number of defect vectors")
        .require("defect_at_most_n", report.defect <= n)
        .metric("defect", report.defect as f64)
        .metric("n", n as f64)
        .metric("stacked_invariance_residual", stacked_residual)
        .metric("orthogonality_overlap", overlap)
        .metric("synthesis_spill", spill)];
    if report.defect > 0 {
        certificates.push(certify_decomposition(&m, rank_tol)?);
    } else if extract_g(&m).is_ok() {
        certificates.push(certify_hitt(&m, rank_tol)?);
    }
    Ok(Instance {
        generator: "defect_instance".into(),
        params: json!({
            "order": order,
            "rank_tol": rank_tol,
            "n": n,
            "case": if g.is_some() { "i" } else { "ii" },
            "stacked_dim": n_stacked.dim(),
        }),
        seed: None,
        subspace: m,
        certificates,
    })
}

/// Orthonormal coordinates (inside an invariant space with compressed
/// operator `op`) of the smallest `op`-invariant subspace containing the
/// columns of `y`, by block Arnoldi iteration. Falls back to the whole space
/// when the iteration leaves a residual above `1e-10`: every candidate lies
/// inside the invariant space, so that fallback is always valid.
fn invariant_hull(op: &CMatrix, y: &CMatrix, field: Field) -> CMatrix {
    let dim = op.nrows();
    let (mut q, _) = linalg::range(y, field, 1e-8 * linalg::spectral_norm(y, field));
    let mut frontier = q.clone();
    while frontier.ncols() > 0 && q.ncols() < dim {
        let w = linalg::project_out(&q, &(op * &frontier));
        let w = linalg::project_out(&q, &w);
        let (fresh, _) = linalg::range(&w, field, 1e-9);
        let old = q.ncols();
        q = q.insert_columns(old, fresh.ncols(), Complex64::new(0.0, 0.0));
        q.columns_mut(old, fresh.ncols()).copy_from(&fresh);
        frontier = fresh;
    }
    let residual = linalg::spectral_norm(&linalg::project_out(&q, &(op * &q)), field);
    if residual > 1e-10 {
        CMatrix::identity(dim, dim)
    } else {
        q
    }
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Seeded [`defect_instance`] with `n` defect vectors.
///
/// Draws inner `v` (and, in case i, inner `g` with `g(0) > 0`) with zeros of
/// modulus below 0.5, sets `u = g v` (or `u = v`) and `e_i = z^{4(i−1)} u`.
/// The stacked generators pair `h ∈ K_v` with polynomials `h_i` of degree
/// at most 2; `N` is their backward-shift hull. These choices make `M`
/// orthogonal to every `e_i` exactly. About one seed in three produces the
/// vanishing case.
pub fn random_defect_instance(seed: u64, n: usize, order: usize, rank_tol: f64) -> Result<Instance> {
    if n == 0 {
        return Err(LabError::Domain("n must be positive".into()));
    }
    if 4 * n + 4 > order / 2 {
        return Err(LabError::Domain(format!(
            "order {order} is too small for {n} defect vectors"
        )));
    }
    let mut rng = substream(seed, "defect_instance", n as u64);
    let vanishing = rng.random_bool(1.0 / 3.0);
    let v_spec = BlaschkeSpec::real_positive(random_symmetric_zeros(&mut rng, 2, 0.1, 0.5), 0)?;
    let g_spec = if vanishing {
        None
    } else {
        Some(BlaschkeSpec::real_positive(
            random_symmetric_zeros(&mut rng, 2, 0.1, 0.5),
            0,
        )?)
    };
    let u_spec = match &g_spec {
        Some(g) => g.concat(&v_spec),
        None => v_spec.clone(),
    };
    let u = blaschke_series(&u_spec, order)?;
    let e_list = (0..n)
        .map(|i| TruncatedSeries::monomial(4 * i, order).multiply(&u, order))
        .collect::<Result<Vec<_>>>()?;
    let g = g_spec.as_ref().map(|s| blaschke_series(s, order)).transpose()?;
    let k_v = model_space(&blaschke_series(&v_spec, order)?, order)?;

    // W = K_v ⊕ P_2 ⊕ … ⊕ P_2 (P_2: polynomials of degree ≤ 2) is exactly
    // invariant under the stacked backward shift; N is a hull inside it
    let blocks = n + usize::from(g.is_some());
    let kv_dim = if g.is_some() { k_v.dim() } else { 0 };
    let w_dim = kv_dim + 3 * n;
    let mut w = CMatrix::zeros(blocks * order, w_dim);
    if g.is_some() {
        w.view_mut((0, 0), (order, kv_dim)).copy_from(k_v.basis());
    }
    let poly_start = if g.is_some() { order } else { 0 };
    for b in 0..n {
        for d in 0..3 {
            w[(poly_start + b * order + d, kv_dim + 3 * b + d)] = Complex64::new(1.0, 0.0);
        }
    }
    let op = w.adjoint() * linalg::block_backshift_rows(&w, order);
    let generators = rng.random_range(1..=2);
    let y = CMatrix::from_fn(w_dim, generators, |_, _| Complex64::new(gaussian(&mut rng), 0.0));
    let hull = &w * invariant_hull(&op, &y, Field::Real);
    let n_stacked = Subspace::from_matrix_abs(Field::Real, &hull, 0.5);

    let mut inst = defect_instance(g.as_ref(), &e_list, &n_stacked, order, rank_tol)?;
    if let Value::Object(params) = &mut inst.params {
        params.insert("g".into(), json!(g_spec));
        params.insert("v".into(), json!(v_spec));
        params.insert("generators".into(), json!(generators));
    }
    inst.seed = Some(seed);
    Ok(inst)
}

/// Orthonormalized Gaussian columns from the seeded stream; the same seed
/// gives a bit-identical basis.
pub fn random_subspace(seed: u64, order: usize, dim: usize, field: Field) -> Result<Subspace> {
    if dim > order {
        return Err(LabError::DimensionMismatch(dim, order));
    }
    let mut rng = substream(seed, "random_subspace", 0);
    let mut a = CMatrix::zeros(order, dim);
    for j in 0..dim {
        for i in 0..order {
            let re = gaussian(&mut rng);
            let im = match field {
                Field::Real => 0.0,
                Field::Complex => gaussian(&mut rng),
            };
            a[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(Subspace::from_matrix(field, &a, 1e-12))
}
