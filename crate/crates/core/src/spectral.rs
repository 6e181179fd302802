//! Spectral bounds, the spectral resolution `p_λ = 1 - ((g - λ)+)°`, the
//! eigenprojections `d_λ = 1 - (g - λ)°`, and the step-function
//! approximation `g ≈ Σ γ_i (p_{λ_i} - p_{λ_{i-1}})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{self, IterationReport};
use crate::config::{Method, ToleranceConfig};
use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::hermitian::{is_projection, HermitianMatrix, Projection};
use crate::lattice;
use crate::oracle;

/// `L = sup{λ : λ1 <= g}` and `U = inf{λ : g <= λ1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralBounds {
    #[serde(rename = "L")]
    pub lower: f64,
    #[serde(rename = "U")]
    pub upper: f64,
}

impl SpectralBounds {
    /// `max(|L|, |U|)`, the order-unit norm.
    pub fn norm(&self) -> f64 {
        self.lower.abs().max(self.upper.abs())
    }
}

/// Strict positive definiteness by an unpivoted Cholesky factorization of
/// `a + shift * 1`. Any nonpositive pivot means `a + shift` is not `> 0`.
fn positive_definite(a: &CMatrix, shift: f64) -> bool {
    let n = a.dim();
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = a.get(j, j).re + shift;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let ljj = d.sqrt();
        l[j * n + j] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    true
}

fn gershgorin(g: &HermitianMatrix) -> (f64, f64) {
    let n = g.dim();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| g.get(i, j).norm()).sum();
        let c = g.get(i, i).re;
        lo = lo.min(c - radius);
        hi = hi.max(c + radius);
    }
    (lo, hi)
}

/// Spectral bounds by bisection on the order, starting from the Gershgorin
/// bracket. Each step decides `λ1 < g` (resp. `g < λ1`) by a Cholesky test.
pub fn spectral_bounds(g: &HermitianMatrix, tol: &ToleranceConfig) -> SpectralBounds {
    let (lo, hi) = gershgorin(g);
    let m = g.as_cmatrix();
    let neg = (-g).as_cmatrix().clone();

    let (mut a, mut b) = (lo, hi);
    for _ in 0..tol.bisect_steps {
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        if positive_definite(m, -mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    let lower = a;

    let (mut a, mut b) = (lo, hi);
    for _ in 0..tol.bisect_steps {
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        if positive_definite(&neg, mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    let upper = b;

    if lower > upper {
        let mid = 0.5 * (lower + upper);
        return SpectralBounds { lower: mid, upper: mid };
    }
    SpectralBounds { lower, upper }
}

/// `max(|L|, |U|)` computed from [`spectral_bounds`].
pub fn order_norm(g: &HermitianMatrix, tol: &ToleranceConfig) -> f64 {
    spectral_bounds(g, tol).norm()
}

/// `p_λ = 1 - ((g - λ)+)°`, the projection onto the spectrum `<= λ`.
pub fn spectral_projection(
    g: &HermitianMatrix,
    lambda: f64,
    tol: &ToleranceConfig,
) -> Result<(Projection, IterationReport)> {
    let n = g.dim();
    if tol.method == Method::Oracle {
        return Ok((oracle::spectral_projection(g, lambda, tol)?, IterationReport::oracle(0.0)));
    }
    // Bisected bounds can sit a few ulps inside the spectrum; values that
    // close to an end take the iterative route.
    let bounds = spectral_bounds(g, tol);
    let slack = tol.psd * (1.0 + bounds.norm());
    if lambda >= bounds.upper + slack {
        return Ok((Projection::identity(n), IterationReport::exact(Method::Iterative)));
    }
    if lambda < bounds.lower - slack {
        return Ok((Projection::zero(n), IterationReport::exact(Method::Iterative)));
    }
    let h = g.shift(-lambda);
    let scale = order_norm(&h, tol);
    let (pos, report) = calculus::pos_part(&h, tol)?;
    let (support, r2) = calculus::carrier_relative(&pos, scale, tol)?;
    Ok((support.complement(), report.merge(r2)))
}

/// `d_λ = 1 - (g - λ)°`, nonzero exactly when `λ` is an eigenvalue.
pub fn eigenprojection(
    g: &HermitianMatrix,
    lambda: f64,
    tol: &ToleranceConfig,
) -> Result<(Projection, IterationReport)> {
    if tol.method == Method::Oracle {
        return Ok((oracle::eigenprojection(g, lambda, tol)?, IterationReport::oracle(0.0)));
    }
    let h = g.shift(-lambda);
    let scale = order_norm(&h, tol);
    let (support, report) = calculus::carrier_relative(&h, scale, tol)?;
    Ok((support.complement(), report))
}

/// One jump of the resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub lambda: f64,
    /// `p_λ`.
    pub p: Projection,
    /// `d_λ = p_λ - sup_{μ<λ} p_μ`.
    pub d: Projection,
}

/// The spectral resolution as a finite list of jumps; `p_λ` is constant
/// between consecutive breakpoints, 0 below the first and 1 from the last on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResolution {
    pub element: HermitianMatrix,
    pub bounds: SpectralBounds,
    pub breakpoints: Vec<Breakpoint>,
}

impl SpectralResolution {
    pub fn dim(&self) -> usize {
        self.element.dim()
    }

    /// `p_λ` read off the breakpoints.
    pub fn projection_at(&self, lambda: f64) -> Projection {
        match self.breakpoints.iter().rev().find(|b| b.lambda <= lambda) {
            Some(b) => b.p.clone(),
            None => Projection::zero(self.dim()),
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.breakpoints.iter().map(|b| b.lambda).collect()
    }

    /// Every projection in the resolution, ascending.
    pub fn projections(&self) -> impl Iterator<Item = &Projection> {
        self.breakpoints.iter().map(|b| &b.p)
    }
}

/// Iteration cap for individual probes of the resolution; a probe that
/// lands close to an eigenvalue converges slowly and is moved instead.
const PROBE_MAX_ITER: usize = 50_000;

/// Positions inside a cell tried in turn when a probe fails.
const PROBE_OFFSETS: [f64; 7] = [0.5, 0.3, 0.7, 0.15, 0.85, 0.05, 0.95];

/// `p_μ` for some μ in `(a, b)`, preferring the midpoint.
fn probe(g: &HermitianMatrix, a: f64, b: f64, tol: &ToleranceConfig) -> Result<(f64, Projection)> {
    let quick = ToleranceConfig { max_iter: tol.max_iter.min(PROBE_MAX_ITER), ..*tol };
    let mut last_err = None;
    for t in PROBE_OFFSETS {
        let mu = a + t * (b - a);
        match spectral_projection(g, mu, &quick) {
            Ok((p, rep)) if rep.converged => return Ok((mu, p)),
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    let mu = a + 0.5 * (b - a);
    match spectral_projection(g, mu, tol) {
        Ok((p, _)) => Ok((mu, p)),
        Err(e) => Err(last_err.unwrap_or(e)),
    }
}

/// Relative size of `||(g - λ)u||` below which `u` is taken as a single
/// eigenspace.
const CLUSTER_TOL: f64 = 1e-7;

fn rayleigh_trace(g: &HermitianMatrix, u: &HermitianMatrix) -> f64 {
    let gu = g.product(u);
    gu.trace().re / u.trace()
}

/// Splits the jump between `(a, pa)` and `(b, pb)` into single eigenvalues.
#[allow(clippy::too_many_arguments)]
fn isolate(
    g: &HermitianMatrix,
    scale: f64,
    a: f64,
    pa: &Projection,
    b: f64,
    pb: &Projection,
    tol: &ToleranceConfig,
    out: &mut Vec<(f64, Projection, HermitianMatrix)>,
) -> Result<()> {
    let u = pb.matrix() - pa.matrix();
    let lambda = rayleigh_trace(g, &u);
    let spread = (&g.product(&u) - u.scale(lambda).as_cmatrix()).frobenius_norm();
    if spread <= CLUSTER_TOL * (1.0 + scale) || b - a <= tol.conv * (1.0 + scale) {
        out.push((lambda, pb.clone(), u));
        return Ok(());
    }
    let (mid, pm) = probe(g, a, b, tol)?;
    let (ra, rm, rb) = (pa.rank(), pm.rank(), pb.rank());
    if rm < ra || rm > rb {
        return Err(Error::Inconsistent { what: "monotone spectral resolution", residual: mid });
    }
    if rm > ra {
        isolate(g, scale, a, pa, mid, &pm, tol, out)?;
    }
    if rb > rm {
        isolate(g, scale, mid, &pm, b, pb, tol, out)?;
    }
    Ok(())
}

/// Samples `p_λ` on a uniform grid over `[L - δ, U + δ]`, locates the rank
/// jumps, splits each jump down to one eigenvalue and attaches `d_λ`.
pub fn full_resolution(g: &HermitianMatrix, grid_size: usize, tol: &ToleranceConfig) -> Result<SpectralResolution> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!("grid_size must be at least 2, got {grid_size}")));
    }
    let n = g.dim();
    let bounds = spectral_bounds(g, tol);
    let scale = bounds.norm();
    let width = bounds.upper - bounds.lower;

    if width <= CLUSTER_TOL * (1.0 + scale) {
        let lambda = g.trace() / n as f64;
        let d = match eigenprojection(g, lambda, tol) {
            Ok((d, _)) if d.rank() == n => d,
            _ => Projection::identity(n),
        };
        let breakpoints = vec![Breakpoint { lambda, p: Projection::identity(n), d }];
        return Ok(SpectralResolution { element: g.clone(), bounds, breakpoints });
    }

    let delta = (width / (4.0 * grid_size as f64)).max(tol.conv);
    let lo = bounds.lower - delta;
    let hi = bounds.upper + delta;
    let step = (hi - lo) / (grid_size - 1) as f64;
    let mut grid: Vec<(f64, Projection)> = Vec::with_capacity(grid_size);
    grid.push((lo, Projection::zero(n)));
    for i in 1..grid_size - 1 {
        let (a, b) = (lo + (i as f64 - 0.5) * step, lo + (i as f64 + 0.5) * step);
        grid.push(probe(g, a, b, tol)?);
    }
    grid.push((hi, Projection::identity(n)));

    let mut jumps = Vec::new();
    for w in grid.windows(2) {
        let ((a, pa), (b, pb)) = (&w[0], &w[1]);
        let (ra, rb) = (pa.rank(), pb.rank());
        if rb < ra {
            return Err(Error::Inconsistent { what: "monotone spectral resolution", residual: *b });
        }
        if rb > ra {
            isolate(g, scale, *a, pa, *b, pb, tol, &mut jumps)?;
        }
    }

    let mut breakpoints = Vec::with_capacity(jumps.len());
    for (lambda, p, u) in jumps {
        let jump_rank = u.trace().round() as usize;
        let d = match eigenprojection(g, lambda, tol) {
            Ok((d, _)) if d.rank() == jump_rank => d,
            _ => Projection::snap(&u, tol)?,
        };
        breakpoints.push(Breakpoint { lambda, p, d });
    }
    Ok(SpectralResolution { element: g.clone(), bounds, breakpoints })
}

/// Uniform partition `λ_0 < λ_1 < ... < λ_n` with mesh `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub points: Vec<f64>,
    pub mesh: f64,
}

impl Partition {
    /// `λ_0 = L - δ`, `λ_n = U + δ` with `δ = max(tol.conv, (U - L)/(4n))`.
    pub fn uniform(bounds: &SpectralBounds, n: usize, tol: &ToleranceConfig) -> Self {
        let delta = ((bounds.upper - bounds.lower) / (4.0 * n as f64)).max(tol.conv);
        let lo = bounds.lower - delta;
        let hi = bounds.upper + delta;
        let mesh = (hi - lo) / n as f64;
        let mut points: Vec<f64> = (0..n).map(|i| lo + i as f64 * mesh).collect();
        points.push(hi);
        Self { points, mesh }
    }

    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Value taken on each cell of the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaRule {
    /// `γ_i = λ_{i-1}`.
    #[default]
    Left,
    /// `γ_i = (λ_{i-1} + λ_i)/2`.
    Midpoint,
}

impl std::str::FromStr for GammaRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(GammaRule::Left),
            "midpoint" => Ok(GammaRule::Midpoint),
            other => Err(Error::InvalidArgument(format!("unknown gamma rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepApproximation {
    pub approximation: HermitianMatrix,
    pub partition: Partition,
    /// `||g - Σ γ_i u_i||`.
    pub error: f64,
    /// `||Σ u_i - 1||`.
    pub sum_residual: f64,
    pub gamma: GammaRule,
}

/// Grid size used for the resolution behind a step approximation.
const STEP_GRID: usize = 16;

/// `Σ γ_i u_i` with `u_i = p_{λ_i} - p_{λ_{i-1}}` on the uniform partition.
pub fn step_approximation(
    g: &HermitianMatrix,
    n: usize,
    gamma: GammaRule,
    tol: &ToleranceConfig,
) -> Result<StepApproximation> {
    let resolution = full_resolution(g, STEP_GRID, tol)?;
    step_approximation_from(&resolution, n, gamma, tol)
}

/// Step approximation built on a precomputed resolution.
pub fn step_approximation_from(
    resolution: &SpectralResolution,
    n: usize,
    gamma: GammaRule,
    tol: &ToleranceConfig,
) -> Result<StepApproximation> {
    if n == 0 {
        return Err(Error::InvalidArgument("step count must be at least 1".into()));
    }
    let g = &resolution.element;
    let dim = g.dim();
    let partition = Partition::uniform(&resolution.bounds, n, tol);
    let pts = &partition.points;

    let mut approximation = HermitianMatrix::zeros(dim);
    let mut total = HermitianMatrix::zeros(dim);
    let mut prev = Projection::zero(dim);
    for i in 1..=n {
        let cur = if i == n { Projection::identity(dim) } else { resolution.projection_at(pts[i]) };
        let u = cur.matrix() - prev.matrix();
        if !u.is_zero() {
            if !is_projection(&u, tol) {
                return Err(Error::Inconsistent { what: "u_i is a projection", residual: (&u.square() - &u).frobenius_norm() });
            }
            let value = match gamma {
                GammaRule::Left => pts[i - 1],
                GammaRule::Midpoint => 0.5 * (pts[i - 1] + pts[i]),
            };
            approximation = &approximation + &u.scale(value);
            total = &total + &u;
        }
        prev = cur;
    }
    let sum_residual = (&total - &HermitianMatrix::identity(dim)).frobenius_norm();
    let error = order_norm(&(g - &approximation), tol);
    Ok(StepApproximation { approximation, partition, error, sum_residual, gamma })
}

/// `q_λ = p_{-g,λ}`, checked against `(1 - p_{g,-λ}) + d_{g,-λ}`.
pub fn resolution_of_negation(g: &HermitianMatrix, lambda: f64, tol: &ToleranceConfig) -> Result<Projection> {
    let (q, _) = spectral_projection(&-g, lambda, tol)?;
    let (p, _) = spectral_projection(g, -lambda, tol)?;
    let (d, _) = eigenprojection(g, -lambda, tol)?;
    let rhs = &p.complement().into_matrix() + d.matrix();
    let residual = q.max_abs_diff(&rhs);
    if residual > 10.0 * tol.proj {
        return Err(Error::Inconsistent { what: "resolution of -g", residual });
    }
    Ok(q)
}

/// Number of probes `α - w 2^{-j}` used by the jump and right-continuity checks.
pub const JUMP_PROBES: usize = 6;

/// `α ∓ w 2^{-j}` for `j = 0..JUMP_PROBES`.
pub fn probe_points(alpha: f64, width: f64, below: bool) -> Vec<f64> {
    (0..JUMP_PROBES)
        .map(|j| {
            let off = width * 0.5f64.powi(j as i32);
            if below {
                alpha - off
            } else {
                alpha + off
            }
        })
        .collect()
}

/// Checks `p_α - d_α = sup{p_μ : μ < α}` over explicit probes `μ < α`.
pub fn jump_supremum_with_probes(
    g: &HermitianMatrix,
    alpha: f64,
    probes: &[f64],
    tol: &ToleranceConfig,
) -> Result<(bool, f64)> {
    let n = g.dim();
    if probes.iter().any(|&mu| mu >= alpha) {
        return Err(Error::InvalidArgument("jump probes must lie below alpha".into()));
    }
    let (p, _) = spectral_projection(g, alpha, tol)?;
    let (d, _) = eigenprojection(g, alpha, tol)?;
    let mut sup = Projection::zero(n);
    for &mu in probes {
        let (pm, _) = spectral_projection(g, mu, tol)?;
        sup = lattice::join(&sup, &pm, tol)?;
    }
    let jump = p.matrix() - d.matrix();
    let residual = jump.max_abs_diff(sup.matrix());
    Ok((residual <= 10.0 * tol.proj, residual))
}

/// Checks `p_α = inf{p_μ : μ > α}` over explicit probes `μ > α`.
pub fn right_continuity_with_probes(
    g: &HermitianMatrix,
    alpha: f64,
    probes: &[f64],
    tol: &ToleranceConfig,
) -> Result<(bool, f64)> {
    let n = g.dim();
    if probes.iter().any(|&mu| mu <= alpha) {
        return Err(Error::InvalidArgument("right-continuity probes must lie above alpha".into()));
    }
    let (p, _) = spectral_projection(g, alpha, tol)?;
    let mut inf = Projection::identity(n);
    for &mu in probes {
        let (pm, _) = spectral_projection(g, mu, tol)?;
        inf = lattice::meet(&inf, &pm, tol)?;
    }
    let residual = p.max_abs_diff(inf.matrix());
    Ok((residual <= 10.0 * tol.proj, residual))
}

/// `p_α - d_α` equals the supremum of `p_μ` over probes below `α`. The
/// probes approach `α` from the nearest breakpoint below it.
pub fn jump_supremum_check(g: &HermitianMatrix, alpha: f64, tol: &ToleranceConfig) -> Result<bool> {
    let resolution = full_resolution(g, STEP_GRID, tol)?;
    let bounds = resolution.bounds;
    let below = resolution
        .breakpoints
        .iter()
        .map(|b| b.lambda)
        .filter(|&l| l < alpha - CLUSTER_TOL * (1.0 + bounds.norm()))
        .fold(f64::NEG_INFINITY, f64::max);
    let width = if below.is_finite() { alpha - below } else { (alpha - bounds.lower).max(0.0) + 1.0 };
    let probes = probe_points(alpha, width, true);
    Ok(jump_supremum_with_probes(g, alpha, &probes, tol)?.0)
}
