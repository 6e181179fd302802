//! Constructive functional calculus.
//!
//! Every operation has two routes selected by [`ToleranceConfig::method`]:
//! the iterative route builds the result from order-theoretic limits only,
//! the oracle route reads it off the Jacobi eigendecomposition.
//!
//! * square roots: for an effect `e`, `d = 1 - e`, `d_1 = d/2`,
//!   `d_{k+1} = (d + d_k^2)/2` ascends to `s` and `(1 - s)^2 = e`;
//!   a positive `g` is rescaled into the effects by its upper spectral bound.
//! * carriers: with `e = g^2 / U(g^2)` the powers `(1 - e)^n` descend to a
//!   projection `q` and `g° = 1 - q`. A fixed power `n = 2^10` separates the
//!   large part of the spectrum; what is left is rescaled and peeled again.
//! * small parts of the spectrum split off the same way are rooted at their
//!   own scale, so the square-root iteration never crawls towards 0.
//! * parts: `|g| = (g^2)^{1/2}`, `g+ = (|g| + g)/2`, `g- = (|g| - g)/2`.
//! * signum `s = (g+)° - (g-)°` with `g = s|g| = |g|s`.
//! * inverses of positive elements by the Newton-Schulz iteration.

use serde::{Deserialize, Serialize};

use crate::config::{Method, ToleranceConfig};
use crate::error::{Error, Result};
use crate::hermitian::{is_positive, loewner_leq, Effect, HermitianMatrix, Projection};
use crate::oracle;
use crate::spectral::{order_norm, spectral_bounds};

/// Squarings in one splitting step: `(1 - x/U)^(2^SPLIT_SQUARINGS)` keeps
/// the part of the spectrum of `x` below about `U ln 2 / 2^SPLIT_SQUARINGS`.
pub const SPLIT_SQUARINGS: usize = 10;

/// Steps of `q <- 3q^2 - 2q^3` allowed after the squarings.
pub const MAX_POLISH: usize = 64;

/// Nesting limit for splitting off small parts of the spectrum.
pub const MAX_SPLIT_DEPTH: usize = 16;

/// How a result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub method: Method,
}

impl IterationReport {
    pub fn oracle(residual: f64) -> Self {
        Self { iterations: 0, residual, converged: true, method: Method::Oracle }
    }

    pub fn exact(method: Method) -> Self {
        Self { iterations: 0, residual: 0.0, converged: true, method }
    }

    /// Combined report of a composite operation.
    pub fn merge(self, other: IterationReport) -> Self {
        Self {
            iterations: self.iterations + other.iterations,
            residual: self.residual.max(other.residual),
            converged: self.converged && other.converged,
            method: self.method,
        }
    }
}

/// `|g|`, `g+`, `g-`, the signum and the carrier of one element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarParts {
    pub abs: HermitianMatrix,
    pub pos: HermitianMatrix,
    pub neg: HermitianMatrix,
    pub signum: HermitianMatrix,
    pub carrier: Projection,
}

fn zero_floor(tol: &ToleranceConfig, scale: f64) -> f64 {
    oracle::zero_threshold(tol, scale)
}

/// Square root of an effect by the monotone iteration
/// `d_1 = (1 - e)/2`, `d_{k+1} = ((1 - e) + d_k^2)/2`, returning `1 - lim d_k`.
///
/// Stops when the Cauchy increment and the residual `||r^2 - e||` are both
/// below `tol.conv` (Frobenius norm). When 0 is in the spectrum of `e` the
/// increments decay like `1/k^2` and the iteration typically runs to
/// `tol.max_iter`; the best iterate is returned with `converged = false`.
pub fn sqrt_effect_iteration(e: &Effect, tol: &ToleranceConfig) -> (HermitianMatrix, IterationReport) {
    let d = e.one_minus();
    let mut dk = d.scale(0.5);
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    while iterations < tol.max_iter {
        iterations += 1;
        let next = (&d + &dk.square()).scale(0.5);
        let increment = (&next - &dk).frobenius_norm();
        dk = next;
        if increment <= tol.conv {
            let r = dk.one_minus();
            residual = (&r.square() - e).frobenius_norm();
            if residual <= tol.conv {
                converged = true;
                break;
            }
        }
    }
    let root = dk.one_minus();
    if !converged {
        residual = (&root.square() - e).frobenius_norm();
    }
    (root, IterationReport { iterations, residual, converged, method: Method::Iterative })
}

/// Unique positive square root of `g >= 0`.
///
/// The iterative route deflates an exact kernel first: with `k = 1 - g°`,
/// `(g + U k)^{1/2} = g^{1/2} + U^{1/2} k` because `g k = 0`, and `g + U k`
/// has no zero eigenvalue for the effect iteration to crawl towards. A
/// cluster that is small but not zero is split off along `k` and rooted at
/// its own scale.
pub fn sqrt(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    let norm = check_positive(g, tol)?;
    sqrt_with_floor(g, zero_floor(tol, norm), tol)
}

fn check_positive(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let eig = oracle::eigenvalues(g);
    let norm = eig[0].abs().max(eig[eig.len() - 1].abs());
    if eig[0] < -tol.psd * (1.0 + norm) {
        return Err(Error::NotPositive { min_eigenvalue: eig[0] });
    }
    Ok(norm)
}

fn sqrt_with_floor(g: &HermitianMatrix, floor: f64, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    if tol.method == Method::Oracle {
        let r = oracle::sqrt(g, tol)?;
        let residual = (&r.square() - g).frobenius_norm();
        return Ok((r, IterationReport::oracle(residual)));
    }
    let upper = spectral_bounds(g, tol).upper;
    let floor = floor.max(rounding_floor(g.dim(), upper));
    let (root, mut report) = sqrt_split(g, floor, tol, 0)?;
    let residual = (&root.square() - g).frobenius_norm();
    report.residual = residual;
    report.converged = report.converged && residual <= tol.conv * (1.0 + upper.max(0.0));
    Ok((root, report))
}

fn sqrt_split(
    g: &HermitianMatrix,
    floor: f64,
    tol: &ToleranceConfig,
    depth: usize,
) -> Result<(HermitianMatrix, IterationReport)> {
    let n = g.dim();
    let upper = spectral_bounds(g, tol).upper;
    if upper <= floor {
        return Ok((HermitianMatrix::zeros(n), IterationReport::exact(Method::Iterative)));
    }

    let mut pre = IterationReport::exact(Method::Iterative);
    let mut kernel = None;
    if let Ok((k, rep)) = small_part(g, tol) {
        pre = rep;
        if k.rank() > 0 {
            let keep = k.complement();
            let cross = keep.product(g).matmul(k.as_cmatrix()).frobenius_norm();
            if cross <= tol.conv * (1.0 + upper) {
                let small = k.sandwich(g);
                let large = keep.sandwich(g);
                if spectral_bounds(&small, tol).upper <= floor {
                    kernel = Some((k, large));
                } else if depth < MAX_SPLIT_DEPTH {
                    let (ra, rep_a) = sqrt_split(&large, floor, tol, depth + 1)?;
                    let (rb, rep_b) = sqrt_split(&small, floor, tol, depth + 1)?;
                    return Ok((&ra + &rb, pre.merge(rep_a).merge(rep_b)));
                }
            }
        }
    }
    // With k the kernel, (g + U k)^{1/2} = g^{1/2} + U^{1/2} k.
    let shifted = match &kernel {
        Some((k, large)) => large + &k.scale(upper),
        None => g.clone(),
    };
    let e = Effect::new_unchecked(shifted.scale(1.0 / upper));
    let (root_e, report) = sqrt_effect_iteration(&e, tol);
    let root_e = match &kernel {
        Some((k, _)) => &root_e - k.matrix(),
        None => root_e,
    };
    Ok((root_e.scale(upper.sqrt()), report.merge(pre)))
}

/// Level below which a block split off an element of norm `upper` is
/// indistinguishable from rounding noise. The margin keeps such noise well
/// under the `2^-SPLIT_SQUARINGS` splitting threshold.
fn rounding_floor(n: usize, upper: f64) -> f64 {
    2048.0 * n as f64 * f64::EPSILON * upper.max(0.0)
}

/// Projection onto the part of the spectrum of `x >= 0` below about
/// `U ln 2 / 2^SPLIT_SQUARINGS`: a power of `1 - x/U` polished to an
/// idempotent. It is a polynomial in `x` and so commutes with it.
fn small_part(x: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(Projection, IterationReport)> {
    // A rounding-level negative lower bound would push 1 - x/U above 1.
    let bounds = spectral_bounds(x, tol);
    let lower = bounds.lower.min(0.0);
    let mut q = x.shift(-lower).scale(1.0 / (bounds.upper - lower)).one_minus();
    for _ in 0..SPLIT_SQUARINGS {
        q = q.square();
    }
    let target = 16.0 * x.dim() as f64 * f64::EPSILON;
    let mut iterations = SPLIT_SQUARINGS;
    let mut residual = (&q.square() - &q).frobenius_norm();
    let mut polish = 0;
    while residual > target && polish < MAX_POLISH {
        polish += 1;
        iterations += 1;
        let q2 = q.square();
        let next = &q2.scale(3.0) - &q2.product_sym(&q).scale(2.0);
        let r = (&next.square() - &next).frobenius_norm();
        q = next;
        // Rounding floor reached.
        let stalled = r > 0.5 * residual && r <= tol.proj;
        residual = r;
        if stalled {
            break;
        }
    }
    if !(residual <= tol.proj) {
        return Err(Error::MaxIterExceeded { iterations, residual });
    }
    let k = Projection::snap(&q, tol)?;
    Ok((k, IterationReport { iterations, residual, converged: true, method: Method::Iterative }))
}

/// `|g| = (g^2)^{1/2}`.
pub fn abs(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    if tol.method == Method::Oracle {
        let a = oracle::abs(g)?;
        let residual = (&a.square() - &g.square()).frobenius_norm();
        return Ok((a, IterationReport::oracle(residual)));
    }
    // Zero is decided on the scale of g, not of g^2.
    let floor = zero_floor(tol, order_norm(g, tol));
    sqrt_with_floor(&g.square(), floor * floor, tol)
}

/// `(|g|, g+, g-)`.
pub fn parts(
    g: &HermitianMatrix,
    tol: &ToleranceConfig,
) -> Result<(HermitianMatrix, HermitianMatrix, HermitianMatrix, IterationReport)> {
    let (a, report) = abs(g, tol)?;
    let pos = (&a + g).scale(0.5);
    let neg = (&a - g).scale(0.5);
    Ok((a, pos, neg, report))
}

/// `g+ = (|g| + g)/2`.
pub fn pos_part(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    let (_, pos, _, report) = parts(g, tol)?;
    Ok((pos, report))
}

/// `g- = (|g| - g)/2`.
pub fn neg_part(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    let (_, _, neg, report) = parts(g, tol)?;
    Ok((neg, report))
}

/// Carrier projection `g°`: the smallest projection with `g g° = g`.
pub fn carrier(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(Projection, IterationReport)> {
    let scale = order_norm(g, tol);
    carrier_with_floor(g, zero_floor(tol, scale), scale, tol)
}

/// Carrier of an element computed from a larger one (a part, a difference);
/// `scale` is the norm of the ambient element and sets the level below which
/// `g` is treated as zero.
pub fn carrier_relative(
    g: &HermitianMatrix,
    scale: f64,
    tol: &ToleranceConfig,
) -> Result<(Projection, IterationReport)> {
    carrier_with_floor(g, zero_floor(tol, scale), scale, tol)
}

fn carrier_with_floor(
    g: &HermitianMatrix,
    floor: f64,
    scale: f64,
    tol: &ToleranceConfig,
) -> Result<(Projection, IterationReport)> {
    let n = g.dim();
    if tol.method == Method::Oracle {
        let p = oracle::carrier(g, tol, scale)?;
        let residual = (&g.product_sym(&p) - g).frobenius_norm();
        return Ok((p, IterationReport::oracle(residual)));
    }
    // Peel the spectrum of g^2 from the top: each level keeps what the power
    // (1 - x/U)^(2^K) sends to 0 and recurses into the rest at its own scale.
    let mut x = g.square();
    let floor_x = (floor * floor).max(rounding_floor(n, spectral_bounds(&x, tol).upper));
    let mut support = HermitianMatrix::zeros(n);
    let mut report = IterationReport::exact(Method::Iterative);
    let mut exhausted = false;
    for level in 0..=MAX_SPLIT_DEPTH {
        let upper = spectral_bounds(&x, tol).upper;
        if upper <= floor_x {
            exhausted = true;
            break;
        }
        if level == MAX_SPLIT_DEPTH {
            break;
        }
        let (k, rep) = small_part(&x, tol)?;
        report = report.merge(rep);
        support = &support + k.complement().matrix();
        if k.rank() == 0 {
            exhausted = true;
            break;
        }
        x = k.sandwich(&x);
    }
    let p = Projection::snap(&support, tol)?;
    report.residual = (&g.product_sym(&p) - g).frobenius_norm();
    report.converged = report.converged && exhausted;
    Ok((p, report))
}

/// Signum `s = (g+)° - (g-)°`.
pub fn signum(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    let scale = order_norm(g, tol);
    if tol.method == Method::Oracle {
        return Ok((oracle::signum(g, tol, scale)?, IterationReport::oracle(0.0)));
    }
    let (_, pos, neg, report) = parts(g, tol)?;
    let (pc, r1) = carrier_relative(&pos, scale, tol)?;
    let (nc, r2) = carrier_relative(&neg, scale, tol)?;
    Ok((pc.matrix() - nc.matrix(), report.merge(r1).merge(r2)))
}

/// Polar decomposition `g = s|g| = |g|s` together with the parts and carrier.
pub fn polar_decompose(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(PolarParts, IterationReport)> {
    let scale = order_norm(g, tol);
    let (abs, pos, neg, mut report) = parts(g, tol)?;
    let signum = if tol.method == Method::Oracle {
        oracle::signum(g, tol, scale)?
    } else {
        let (pc, r1) = carrier_relative(&pos, scale, tol)?;
        let (nc, r2) = carrier_relative(&neg, scale, tol)?;
        report = report.merge(r1).merge(r2);
        pc.matrix() - nc.matrix()
    };
    let (carrier, r3) = carrier_relative(g, scale, tol)?;
    report = report.merge(r3);
    Ok((PolarParts { abs, pos, neg, signum, carrier }, report))
}

/// Inverse of a positive element with `L_g > tol.psd`, by
/// `X_0 = 1/U_g`, `X_{k+1} = X_k (2 - g X_k)` until `||g X - 1|| <= tol.conv`.
pub fn inverse_positive(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    if !is_positive(g, tol) {
        return Err(Error::NotPositive { min_eigenvalue: oracle::eigenvalues(g)[0] });
    }
    let bounds = spectral_bounds(g, tol);
    if bounds.lower <= tol.psd {
        return Err(Error::NotInvertible { lower: bounds.lower });
    }
    let n = g.dim();
    let one = HermitianMatrix::identity(n);
    if tol.method == Method::Oracle {
        let x = oracle::inverse(g)?;
        let residual = (&g.product_sym(&x) - &one).frobenius_norm();
        return Ok((x, IterationReport::oracle(residual)));
    }
    let mut x = HermitianMatrix::scalar(n, 1.0 / bounds.upper);
    let mut iterations = 0;
    let mut residual = (&g.product_sym(&x) - &one).frobenius_norm();
    let mut best = residual;
    let mut stalled = 0;
    let mut converged = residual <= tol.conv;
    while !converged && iterations < tol.max_iter {
        iterations += 1;
        let gx = g.product_sym(&x);
        let two_minus = (-&gx).shift(2.0);
        x = x.product_sym(&two_minus);
        residual = (&g.product_sym(&x) - &one).frobenius_norm();
        if residual <= tol.conv {
            converged = true;
        } else if residual < best {
            best = residual;
            stalled = 0;
        } else if best < 0.5 {
            // Quadratic phase reached its rounding floor.
            stalled += 1;
            if stalled >= 5 {
                break;
            }
        }
    }
    Ok((x, IterationReport { iterations, residual, converged, method: Method::Iterative }))
}

/// `g^{-1} = s (|g|)^{-1}` for `g` with `L_{|g|} > tol.psd`.
pub fn invert(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(HermitianMatrix, IterationReport)> {
    let (a, mut report) = abs(g, tol)?;
    let lower = spectral_bounds(&a, tol).lower;
    if lower <= tol.psd {
        return Err(Error::NotInvertible { lower });
    }
    let (s, r1) = signum(g, tol)?;
    let (inv_abs, r2) = inverse_positive(&a, tol)?;
    report = report.merge(r1).merge(r2);
    Ok((s.product_sym(&inv_abs), report))
}

/// The comparability projection `p = (g+)°`, satisfying
/// `(1 - p) g <= 0 <= p g`, `p g = g+` and `-(1 - p) g = g-`.
pub fn comparability_projection(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<(Projection, IterationReport)> {
    let scale = order_norm(g, tol);
    let (_, pos, neg, report) = parts(g, tol)?;
    let (p, r1) = carrier_relative(&pos, scale, tol)?;
    let report = report.merge(r1);

    let pg = p.product_sym(g);
    let qg = p.complement().product_sym(g);
    let slack = 1e-7 * (1.0 + scale);
    let zero = HermitianMatrix::zeros(g.dim());
    if !loewner_leq(&qg, &zero, tol)? || !loewner_leq(&zero, &pg, tol)? {
        return Err(Error::Inconsistent { what: "(1-p)g <= 0 <= pg", residual: f64::NAN });
    }
    let commutator = p.commutator_norm(g);
    if commutator > slack {
        return Err(Error::Inconsistent { what: "p commutes with g", residual: commutator });
    }
    let d_pos = pg.dist(&pos);
    let d_neg = (-&qg).dist(&neg);
    if d_pos > slack || d_neg > slack {
        return Err(Error::Inconsistent { what: "pg = g+ and -(1-p)g = g-", residual: d_pos.max(d_neg) });
    }
    Ok((p, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn close(a: &HermitianMatrix, b: &HermitianMatrix, eps: f64) -> bool {
        a.max_abs_diff(b) <= eps
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn pauli_z() -> HermitianMatrix {
        HermitianMatrix::diag(&[1.0, -1.0])
    }

    #[test]
    fn effect_iteration_on_identity_is_exact() {
        let e = Effect::new(HermitianMatrix::identity(3), &tol()).unwrap();
        let (r, rep) = sqrt_effect_iteration(&e, &tol());
        assert_eq!(r, HermitianMatrix::identity(3));
        assert!(rep.converged);
    }

    #[test]
    fn effect_iteration_diagonal() {
        let e = Effect::new(HermitianMatrix::diag(&[0.25, 1.0]), &tol()).unwrap();
        let (r, rep) = sqrt_effect_iteration(&e, &tol());
        assert!(rep.converged, "{rep:?}");
        assert!(close(&r, &HermitianMatrix::diag(&[0.5, 1.0]), 1e-10));
    }

    #[test]
    fn effect_iteration_against_oracle() {
        let g = HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap().shift(0.1);
        // Spectrum {0.1, 1.1}: not an effect until rescaled.
        assert!(Effect::new(g.clone(), &tol()).is_err());
        let (r, rep) = sqrt(&g, &tol()).unwrap();
        assert!(rep.converged);
        assert!(close(&r, &oracle::sqrt(&g, &tol()).unwrap(), 1e-9));
        let scaled = g.scale(1.0 / 1.1);
        let e = Effect::new(scaled.clone(), &tol()).unwrap();
        let (r, rep) = sqrt_effect_iteration(&e, &tol());
        assert!(rep.converged);
        assert!(close(&r, &oracle::sqrt(&scaled, &tol()).unwrap(), 1e-9));
    }

    #[test]
    fn effect_iteration_with_zero_eigenvalue_reports_slow_convergence() {
        let cfg = ToleranceConfig { max_iter: 2_000, ..tol() };
        let e = Effect::new(HermitianMatrix::diag(&[0.0, 0.49]), &cfg).unwrap();
        let (r, rep) = sqrt_effect_iteration(&e, &cfg);
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 2_000);
        // 1 - d_k behaves like 2/k at the zero eigenvalue.
        let at_zero = r.get(0, 0).re;
        assert!(at_zero > 0.0 && at_zero < 4.0 / 2_000.0, "{at_zero}");
        assert!((r.get(1, 1).re - 0.7).abs() < 1e-10);
    }

    #[test]
    fn sqrt_examples() {
        let (r, _) = sqrt(&HermitianMatrix::zeros(2), &tol()).unwrap();
        assert!(r.is_zero());
        let (r, rep) = sqrt(&HermitianMatrix::diag(&[4.0, 9.0]), &tol()).unwrap();
        assert!(rep.converged);
        assert!(close(&r, &HermitianMatrix::diag(&[2.0, 3.0]), 1e-9));
        // [[2,1],[1,2]] has eigenvalues 1, 3: root = (a+b)/2 * I + (b-a)/2 * X
        // with a = 1, b = sqrt(3).
        let g = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let (r, rep) = sqrt(&g, &tol()).unwrap();
        assert!(rep.converged);
        let s3 = 3f64.sqrt();
        let want = HermitianMatrix::from_real_rows(&[&[(1.0 + s3) / 2.0, (s3 - 1.0) / 2.0], &[(s3 - 1.0) / 2.0, (1.0 + s3) / 2.0]])
            .unwrap();
        assert!(close(&r, &want, 1e-7));
        assert!(close(&r, &oracle::sqrt(&g, &tol()).unwrap(), 1e-7));
    }

    #[test]
    fn sqrt_rejects_negative() {
        assert!(matches!(sqrt(&pauli_z(), &tol()), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn sqrt_of_singular_matrix_is_exact_after_deflation() {
        let g = HermitianMatrix::diag(&[0.0, 4.0, 0.0]);
        let (r, rep) = sqrt(&g, &tol()).unwrap();
        assert!(rep.converged, "{rep:?}");
        assert!(close(&r, &HermitianMatrix::diag(&[0.0, 2.0, 0.0]), 1e-10));
    }

    #[test]
    fn parts_examples() {
        let (a, p, n, _) = parts(&HermitianMatrix::diag(&[1.0, -2.0]), &tol()).unwrap();
        assert!(close(&a, &HermitianMatrix::diag(&[1.0, 2.0]), 1e-9));
        assert!(close(&p, &HermitianMatrix::diag(&[1.0, 0.0]), 1e-9));
        assert!(close(&n, &HermitianMatrix::diag(&[0.0, 2.0]), 1e-9));

        let (a, p, n, _) = parts(&pauli_z(), &tol()).unwrap();
        assert!(close(&a, &HermitianMatrix::identity(2), 1e-9));
        assert!(close(&p, &HermitianMatrix::diag(&[1.0, 0.0]), 1e-9));
        assert!(close(&n, &HermitianMatrix::diag(&[0.0, 1.0]), 1e-9));

        let proj = HermitianMatrix::rank_one(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]);
        let (a, p, n, _) = parts(&proj, &tol()).unwrap();
        assert!(close(&a, &proj, 1e-9));
        assert!(close(&p, &proj, 1e-9));
        assert!(n.frobenius_norm() < 1e-9);
    }

    #[test]
    fn carrier_examples() {
        let (p, _) = carrier(&HermitianMatrix::diag(&[0.0, 3.0, -5.0]), &tol()).unwrap();
        assert!(close(p.matrix(), &HermitianMatrix::diag(&[0.0, 1.0, 1.0]), 1e-12));
        let (p, _) = carrier(&HermitianMatrix::zeros(3), &tol()).unwrap();
        assert_eq!(p, Projection::zero(3));
        let s = 0.5f64.sqrt();
        let v = [Complex64::new(s, 0.0), Complex64::new(s, 0.0)];
        let (p, _) = carrier(&HermitianMatrix::rank_one(&v), &tol()).unwrap();
        let want = HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(close(p.matrix(), &want, 1e-12));
    }

    #[test]
    fn signum_and_polar_examples() {
        let g = HermitianMatrix::diag(&[-2.0, 0.0, 5.0]);
        let (s, _) = signum(&g, &tol()).unwrap();
        assert!(close(&s, &HermitianMatrix::diag(&[-1.0, 0.0, 1.0]), 1e-9));

        let psd = HermitianMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 0.0]]).unwrap();
        let (s, _) = signum(&psd, &tol()).unwrap();
        let (c, _) = carrier(&psd, &tol()).unwrap();
        assert!(close(&s, c.matrix(), 1e-9));

        let (pp, _) = polar_decompose(&pauli_x(), &tol()).unwrap();
        assert!(close(&pp.signum, &pauli_x(), 1e-9));
        assert!(close(&pp.abs, &HermitianMatrix::identity(2), 1e-9));
        let back = HermitianMatrix::from_cmatrix(&pp.signum.product(&pp.abs));
        assert!(close(&back, &pauli_x(), 1e-9));
    }

    #[test]
    fn inverse_examples() {
        let (x, rep) = inverse_positive(&HermitianMatrix::identity(3), &tol()).unwrap();
        assert!(rep.converged);
        assert!(close(&x, &HermitianMatrix::identity(3), 1e-12));
        let (x, _) = inverse_positive(&HermitianMatrix::diag(&[2.0, 4.0]), &tol()).unwrap();
        assert!(close(&x, &HermitianMatrix::diag(&[0.5, 0.25]), 1e-11));
        let g = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let (x, _) = inverse_positive(&g, &tol()).unwrap();
        // inverse = [[2, -1], [-1, 2]] / 3
        let want = HermitianMatrix::from_real_rows(&[&[2.0 / 3.0, -1.0 / 3.0], &[-1.0 / 3.0, 2.0 / 3.0]]).unwrap();
        assert!(close(&x, &want, 1e-11));
        assert!(close(&x, &oracle::inverse(&g).unwrap(), 1e-11));
    }

    #[test]
    fn inverse_errors() {
        assert!(matches!(
            inverse_positive(&HermitianMatrix::diag(&[1.0, 0.0]), &tol()),
            Err(Error::NotInvertible { .. })
        ));
        assert!(matches!(inverse_positive(&pauli_z(), &tol()), Err(Error::NotPositive { .. })));
        assert!(matches!(invert(&HermitianMatrix::diag(&[1.0, 0.0]), &tol()), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn invert_examples() {
        let (x, _) = invert(&pauli_z(), &tol()).unwrap();
        assert!(close(&x, &pauli_z(), 1e-9));
        let (x, _) = invert(&HermitianMatrix::diag(&[-2.0, 4.0]), &tol()).unwrap();
        assert!(close(&x, &HermitianMatrix::diag(&[-0.5, 0.25]), 1e-9));
        let (x, _) = invert(&pauli_x(), &tol()).unwrap();
        assert!(close(&x, &pauli_x(), 1e-9));
    }

    #[test]
    fn comparability_examples() {
        let (p, _) = comparability_projection(&HermitianMatrix::diag(&[3.0, -1.0]), &tol()).unwrap();
        assert!(close(p.matrix(), &HermitianMatrix::diag(&[1.0, 0.0]), 1e-12));
        let g = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let (p, _) = comparability_projection(&g, &tol()).unwrap();
        assert_eq!(p, Projection::identity(2));
        let (p, _) = comparability_projection(&pauli_z(), &tol()).unwrap();
        assert!(close(p.matrix(), &HermitianMatrix::diag(&[1.0, 0.0]), 1e-12));
    }

    #[test]
    fn oracle_route_matches_iterative_route() {
        let g = HermitianMatrix::from_entries(
            3,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.3, 0.2),
                Complex64::new(0.0, -0.4),
                Complex64::new(0.3, -0.2),
                Complex64::new(-0.7, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.4),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.2, 0.0),
            ],
        )
        .unwrap();
        let (a, _) = polar_decompose(&g, &tol()).unwrap();
        let (b, rep) = polar_decompose(&g, &ToleranceConfig::oracle()).unwrap();
        assert_eq!(rep.method, Method::Oracle);
        assert!(close(&a.abs, &b.abs, 1e-8));
        assert!(close(&a.signum, &b.signum, 1e-8));
        assert!(close(a.carrier.matrix(), b.carrier.matrix(), 1e-8));
    }
}
