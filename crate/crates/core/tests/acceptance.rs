//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p hermitia --test acceptance`. Set
//! `ACCEPTANCE_ONLY=3,7` to run a subset.

use std::time::Instant;

use rand::Rng;

use hermitia::axioms;
use hermitia::blocks::{cblock_join, cblock_meet};
use hermitia::calculus;
use hermitia::hermitian::is_positive;
use hermitia::lattice::{join, meet};
use hermitia::oracle;
use hermitia::random::{self, SeededRng};
use hermitia::spectral::{self, full_resolution, probe_points, step_approximation_from, GammaRule};
use hermitia::states::one_norm;
use hermitia::{commutes, is_projection, loewner_leq, HermitianMatrix, Projection, ToleranceConfig};

const SEED: u64 = 0x5EED_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: usize, checked: usize, worst: f64, what: &str) -> Outcome {
    Outcome { pass: failures == 0, detail: format!("{checked} {what}, {failures} failures, worst residual {worst:.3e}") }
}

fn rng_for(criterion: u64, n: usize, i: usize) -> SeededRng {
    random::rng(SEED ^ (criterion << 56) ^ ((n as u64) << 40) ^ i as u64)
}

/// Spectrum with magnitudes in `[0.05, 1]` and random signs.
fn signed_spectrum(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let m = rng.random_range(0.05..=1.0);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect()
}

/// Eigenvalues on the grid `k/32` inside `[-1, 1]`: ties are exact, and
/// distinct values are at least `1/32` apart.
fn grid_spectrum(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-32..=32) as f64 / 32.0).collect()
}

fn c1_oracle_equivalence() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for n in 2..=8 {
        for i in 0..1000 {
            let mut rng = rng_for(1, n, i);
            let sp = random::uniform_spectrum(&mut rng, n, 0.05, 1.0);
            let pos = random::with_spectrum(&mut rng, &sp);
            let ss = signed_spectrum(&mut rng, n);
            let signed = random::with_spectrum(&mut rng, &ss);
            let mut rel = Vec::new();
            let scale = 1.0 + pos.norm();
            rel.push(calculus::sqrt(&pos, &tol).unwrap().0.dist(&oracle::sqrt(&pos, &tol).unwrap()) / scale);
            for g in [&pos, &signed] {
                let scale = 1.0 + g.norm();
                rel.push(calculus::abs(g, &tol).unwrap().0.dist(&oracle::abs(g).unwrap()) / scale);
                let s = calculus::signum(g, &tol).unwrap().0;
                rel.push(s.dist(&oracle::signum(g, &tol, g.norm()).unwrap()) / scale);
                let c = calculus::carrier(g, &tol).unwrap().0;
                rel.push(c.dist(oracle::carrier(g, &tol, g.norm()).unwrap().matrix()) / scale);
            }
            for r in rel {
                checked += 1;
                worst = worst.max(r);
                if !(r <= 1e-7) {
                    fails += 1;
                }
            }
        }
    }
    outcome(fails, checked, worst, "oracle comparisons")
}

fn c2_sqrt_contract() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for n in 2..=8 {
        for i in 0..100 {
            let mut rng = rng_for(2, n, i);
            let spectrum: Vec<f64> = if i % 4 == 0 {
                // Exact kernel.
                (0..n).map(|k| if k % 2 == 0 { 0.0 } else { rng.random_range(0.05..=2.0) }).collect()
            } else {
                random::uniform_spectrum(&mut rng, n, 0.05, 2.0)
            };
            let g = random::with_spectrum(&mut rng, &spectrum);
            let (r, _) = calculus::sqrt(&g, &tol).unwrap();
            let scale = 1.0 + g.norm();
            let residual = r.square().dist(&g) / scale;
            let mut ok = is_positive(&r, &tol) && residual <= 1e-7;
            for _ in 0..20 {
                let h = random::random_polynomial_in(&mut rng, &g);
                ok &= commutes(&r, &h, &tol).unwrap();
            }
            checked += 1;
            worst = worst.max(residual);
            if !ok {
                fails += 1;
            }
        }
    }
    outcome(fails, checked, worst, "square roots")
}

fn c3_polar() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for n in 2..=8 {
        for i in 0..1000 {
            let mut rng = rng_for(3, n, i);
            let g = random::random_hermitian(&mut rng, n);
            let (pp, _) = calculus::polar_decompose(&g, &tol).unwrap();
            let scale = 1.0 + g.norm();
            let s_abs = pp.signum.product(&pp.abs);
            let abs_s = pp.abs.product(&pp.signum);
            let residuals = [
                cdist(&s_abs, &g),
                cdist(&abs_s, &g),
                pp.signum.square().dist(pp.carrier.matrix()),
                pp.pos.product(&pp.neg).frobenius_norm(),
                (&pp.pos - &pp.neg).dist(&g),
                (&pp.pos + &pp.neg).dist(&pp.abs),
            ];
            let r = residuals.iter().fold(0.0f64, |m, &x| m.max(x)) / scale;
            checked += 1;
            worst = worst.max(r);
            if !(r <= 1e-7) {
                fails += 1;
            }
        }
    }
    outcome(fails, checked, worst, "polar decompositions")
}

/// Frobenius distance between a general matrix and a Hermitian one.
fn cdist(a: &hermitia::CMatrix, b: &HermitianMatrix) -> f64 {
    (a - b.as_cmatrix()).frobenius_norm()
}

fn c4_step_approximation() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for n in 2..=8 {
        for i in 0..10 {
            let mut rng = rng_for(4, n, i);
            let g = random::random_hermitian(&mut rng, n);
            let res = full_resolution(&g, 16, &tol).unwrap();
            let mut k = 2;
            while k <= 256 {
                let s = step_approximation_from(&res, k, GammaRule::Left, &tol).unwrap();
                checked += 1;
                worst = worst.max(s.error / s.partition.mesh);
                if !(s.error <= s.partition.mesh && s.sum_residual <= 1e-9) {
                    fails += 1;
                }
                k *= 2;
            }
        }
    }
    outcome(fails, checked, worst, "step approximations (worst is error/mesh)")
}

fn all_commute(a: &[Projection], b: &[Projection], tol: &ToleranceConfig) -> bool {
    a.iter().all(|p| b.iter().all(|q| commutes(p.matrix(), q.matrix(), tol).unwrap()))
}

fn c5_commutation_via_projections() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked) = (0, 0);
    for i in 0..500 {
        let n = 2 + i % 5;
        let mut rng = rng_for(5, n, i);
        let (g, h) = if i % 2 == 0 {
            let v = random::random_unitary(&mut rng, n);
            let a = random::separated_spectrum(&mut rng, n, -1.0, 1.0, 0.05);
            let b = grid_spectrum(&mut rng, n);
            (random::with_spectrum_in(&v, &a), random::with_spectrum_in(&v, &b))
        } else {
            let a = random::separated_spectrum(&mut rng, n, -1.0, 1.0, 0.05);
            let b = random::separated_spectrum(&mut rng, n, -1.0, 1.0, 0.05);
            (random::with_spectrum(&mut rng, &a), random::with_spectrum(&mut rng, &b))
        };
        let rg = full_resolution(&g, 16, &tol).unwrap();
        let rh = full_resolution(&h, 16, &tol).unwrap();
        let pg: Vec<Projection> = rg.projections().cloned().collect();
        let ph: Vec<Projection> = rh.projections().cloned().collect();
        let lhs = commutes(&g, &h, &tol).unwrap();
        let rhs = all_commute(&pg, &ph, &tol);
        checked += 1;
        if lhs != rhs || lhs != (i % 2 == 0) {
            fails += 1;
        }
    }
    outcome(fails, checked, 0.0, "pairs")
}

fn c6_right_continuity_and_jump() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for n in 2..=6 {
        for i in 0..10 {
            let mut rng = rng_for(6, n, i);
            let spectrum = random::separated_spectrum(&mut rng, n, -1.0, 1.0, 0.1);
            let g = random::with_spectrum(&mut rng, &spectrum);
            let eig = oracle::eigenvalues(&g);
            for (k, &alpha) in eig.iter().enumerate() {
                let above = if k + 1 < eig.len() { eig[k + 1] - alpha } else { 1.0 };
                let below = if k > 0 { alpha - eig[k - 1] } else { 1.0 };
                let (ok1, r1) =
                    spectral::right_continuity_with_probes(&g, alpha, &probe_points(alpha, above, false), &tol).unwrap();
                let (ok2, r2) =
                    spectral::jump_supremum_with_probes(&g, alpha, &probe_points(alpha, below, true), &tol).unwrap();
                checked += 1;
                worst = worst.max(r1).max(r2);
                if !(ok1 && ok2 && r1 <= tol.proj && r2 <= tol.proj) {
                    fails += 1;
                }
            }
        }
    }
    outcome(fails, checked, worst, "eigenvalues")
}

fn c7_norm_identities() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for i in 0..1000 {
        let n = 2 + i % 7;
        let mut rng = rng_for(7, n, i);
        let g = random::random_hermitian(&mut rng, n).scale(rng.random_range(0.1..10.0));
        let h = random::random_polynomial_in(&mut rng, &g);
        let (ng, nh) = (one_norm(&g, &tol), one_norm(&h, &tol));
        let scale = (1.0 + ng) * (1.0 + ng);
        let r1 = (one_norm(&g.square(), &tol) - ng * ng).abs() / scale;
        let r2 = (ng - g.norm()).abs() / (1.0 + ng);
        let r3 = (one_norm(&g.product_sym(&h), &tol) - ng * nh).max(0.0) / ((1.0 + ng) * (1.0 + nh));
        let r = r1.max(r2).max(r3);
        checked += 1;
        worst = worst.max(r);
        if !(r <= 1e-9) {
            fails += 1;
        }
    }
    outcome(fails, checked, worst, "samples")
}

fn c8_axiom_suite() -> Outcome {
    let tol = ToleranceConfig::default();
    let reports = axioms::run_default_suite(&tol).unwrap();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.axiom.as_str()).collect();
    let samples: usize = reports.iter().map(|r| r.samples).sum();
    Outcome {
        pass: failed.is_empty(),
        detail: format!("{} reports, {samples} samples, failing: {failed:?}", reports.len()),
    }
}

fn diag_projection(v: &hermitia::CMatrix, mask: &[bool]) -> Projection {
    let s: Vec<f64> = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    Projection::new(random::with_spectrum_in(v, &s), &ToleranceConfig::default()).unwrap()
}

fn c9_lattice_laws() -> Outcome {
    let tol = ToleranceConfig::default();
    let eps = tol.proj;
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for n in 2..=8 {
        for i in 0..1000 {
            let mut rng = rng_for(9, n, i);
            let mut r = 0.0f64;
            let mut ok = true;

            // Generic pair: De Morgan holds bit for bit.
            let p = random::random_projection_any_rank(&mut rng, n);
            let q = random::random_projection_any_rank(&mut rng, n);
            let j = join(&p, &q, &tol).unwrap();
            ok &= j.complement() == meet(&p.complement(), &q.complement(), &tol).unwrap();
            ok &= is_projection(j.matrix(), &tol);
            ok &= loewner_leq(p.matrix(), j.matrix(), &tol).unwrap() && loewner_leq(q.matrix(), j.matrix(), &tol).unwrap();
            let sum = p.matrix() + q.matrix();
            if is_projection(&sum, &tol) {
                r = r.max(p.product(&q).max_abs()).max(sum.dist(j.matrix()));
            }

            // Comparable pair p <= q in a random basis: orthomodular law.
            let v = random::random_unitary(&mut rng, n);
            let rq = rng.random_range(0..=n);
            let rp = rng.random_range(0..=rq);
            let big: Vec<bool> = (0..n).map(|k| k < rq).collect();
            let small: Vec<bool> = (0..n).map(|k| k < rp).collect();
            let (ps, qb) = (diag_projection(&v, &small), diag_projection(&v, &big));
            let inner = meet(&qb, &ps.complement(), &tol).unwrap();
            let om = join(&ps, &inner, &tol).unwrap();
            r = r.max(om.dist(qb.matrix()));
            let diff = qb.matrix() - ps.matrix();
            ok &= is_projection(&diff, &tol);
            r = r.max(diff.dist(inner.matrix()));

            // Commuting pair: p∨q = p+q-pq, p∧q = pq, p+q = p∨q + p∧q.
            let ma: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let mb: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let (a, b) = (diag_projection(&v, &ma), diag_projection(&v, &mb));
            let ab = a.product_sym(b.matrix());
            let ja = join(&a, &b, &tol).unwrap();
            let mt = meet(&a, &b, &tol).unwrap();
            r = r.max(ja.dist(&(&(a.matrix() + b.matrix()) - &ab)));
            r = r.max(mt.dist(&ab));
            r = r.max((a.matrix() + b.matrix()).dist(&(ja.matrix() + mt.matrix())));

            // Orthogonal pair: p+q ∈ P forces pq = 0 and p+q = p∨q.
            let mc: Vec<bool> = ma.iter().map(|&x| !x && rng.random_bool(0.5)).collect();
            let c = diag_projection(&v, &mc);
            let s = a.matrix() + c.matrix();
            ok &= is_projection(&s, &tol);
            r = r.max(a.product(&c).max_abs()).max(s.dist(join(&a, &c, &tol).unwrap().matrix()));

            checked += 1;
            worst = worst.max(r);
            if !(ok && r <= eps) {
                fails += 1;
            }
        }
    }
    outcome(fails, checked, worst, "projection samples")
}

fn c10_cblock_lattice() -> Outcome {
    let tol = ToleranceConfig::default();
    let (mut fails, mut checked, mut worst) = (0, 0, 0.0f64);
    for i in 0..500 {
        let n = 2 + i % 7;
        let mut rng = rng_for(10, n, i);
        let (g, h) = if i % 2 == 0 {
            let v = random::random_unitary(&mut rng, n);
            let a = random::uniform_spectrum(&mut rng, n, -1.0, 1.0);
            let b = random::uniform_spectrum(&mut rng, n, -1.0, 1.0);
            (random::with_spectrum_in(&v, &a), random::with_spectrum_in(&v, &b))
        } else {
            let g = random::random_hermitian(&mut rng, n);
            let h = random::random_polynomial_in(&mut rng, &g);
            (g, h)
        };
        let m = cblock_meet(&g, &h, &tol).unwrap();
        let j = cblock_join(&g, &h, &tol).unwrap();
        let scale = 1.0 + g.norm() + h.norm();
        let r1 = (&m + &j).dist(&(&g + &h)) / scale;

        // Oracle common diagonalization: eigenvectors of a generic combination.
        let dec = oracle::eig(&(&g + &h.scale(std::f64::consts::PI))).unwrap();
        let coeff = |x: &HermitianMatrix| -> Vec<f64> {
            (0..n)
                .map(|k| {
                    let c = dec.eigenvector(k);
                    let xc = x.as_cmatrix().mul_vec(&c);
                    c.iter().zip(&xc).map(|(a, b)| (a.conj() * b).re).sum()
                })
                .collect()
        };
        let (cg, ch) = (coeff(&g), coeff(&h));
        let lo: Vec<f64> = cg.iter().zip(&ch).map(|(a, b)| a.min(*b)).collect();
        let hi: Vec<f64> = cg.iter().zip(&ch).map(|(a, b)| a.max(*b)).collect();
        let r2 = m.dist(&random::with_spectrum_in(&dec.eigenvectors, &lo)) / scale;
        let r3 = j.dist(&random::with_spectrum_in(&dec.eigenvectors, &hi)) / scale;
        let r = r1.max(r2).max(r3);
        checked += 1;
        worst = worst.max(r);
        if !(r <= 1e-7) {
            fails += 1;
        }
    }
    outcome(fails, checked, worst, "commuting pairs")
}

fn main() {
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(usize, &str, fn() -> Outcome); 10] = [
        (1, "oracle equivalence of sqrt, abs, signum, carrier", c1_oracle_equivalence),
        (2, "square-root contract", c2_sqrt_contract),
        (3, "polar decomposition identities", c3_polar),
        (4, "step approximation error within mesh", c4_step_approximation),
        (5, "commutation via spectral projections", c5_commutation_via_projections),
        (6, "right-continuity and jump of the resolution", c6_right_continuity_and_jump),
        (7, "norm identities", c7_norm_identities),
        (8, "axiom suite at default configuration", c8_axiom_suite),
        (9, "projection lattice laws", c9_lattice_laws),
        (10, "C-block lattice operations", c10_cblock_lattice),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id:>2}: {name} ({}; {:.1}s)", out.detail, start.elapsed().as_secs_f64());
        if !out.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
