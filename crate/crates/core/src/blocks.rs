//! Commutants of finite families, blocks of pairwise orthogonal atoms, and
//! the lattice operations `g ∧ h = g - (g - h)+`, `g ∨ h = g + (h - g)+`
//! inside a commuting family.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus;
use crate::config::ToleranceConfig;
use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::hermitian::{commutes, is_positive, jordan_product, HermitianMatrix, Projection};
use crate::oracle;
use crate::spectral::{self, order_norm};

/// Relative gap below which joint eigenvalues are merged.
pub const CLUSTER_TOL: f64 = 1e-7;

/// `h` commutes with every member of `family`.
pub fn in_commutant(h: &HermitianMatrix, family: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<bool> {
    for m in family {
        if !commutes(h, m, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_pairwise(family: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<()> {
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if !commutes(a, b, tol)? {
                return Err(Error::NotCommuting { residual: a.commutator_norm(b) });
            }
        }
    }
    Ok(())
}

/// A pairwise commuting family and a unitary that diagonalizes all members.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingFamily {
    pub members: Vec<HermitianMatrix>,
    pub common_basis: CMatrix,
}

/// Pairwise orthogonal projections summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub atoms: Vec<Projection>,
}

/// Family JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub members: Vec<HermitianMatrix>,
}

type Basis = Vec<Vec<Complex64>>;

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `Q^H m Q` for the orthonormal columns `Q`.
fn restrict(m: &HermitianMatrix, q: &Basis) -> HermitianMatrix {
    let k = q.len();
    let mq: Vec<Vec<Complex64>> = q.iter().map(|c| m.as_cmatrix().mul_vec(c)).collect();
    let mut r = CMatrix::zeros(k);
    for a in 0..k {
        for b in 0..k {
            r.set(a, b, inner(&q[a], &mq[b]));
        }
    }
    HermitianMatrix::from_cmatrix(&r)
}

fn projector(n: usize, q: &Basis) -> HermitianMatrix {
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let acc: Complex64 = q.iter().map(|c| c[i] * c[j].conj()).sum();
            out.set(i, j, acc);
            out.set(j, i, acc.conj());
        }
    }
    HermitianMatrix::from_cmatrix(&out)
}

/// Splits every joint eigenspace by the eigenvalues of the next member.
fn refine(spaces: Vec<Basis>, m: &HermitianMatrix, scale: f64) -> Result<Vec<Basis>> {
    let gap = CLUSTER_TOL * (1.0 + scale);
    let mut out = Vec::new();
    for q in spaces {
        if q.len() == 1 {
            out.push(q);
            continue;
        }
        let dec = oracle::eig(&restrict(m, &q))?;
        let mut start = 0;
        for end in 1..=dec.dim() {
            if end == dec.dim() || dec.eigenvalues[end] - dec.eigenvalues[end - 1] > gap {
                let cluster: Basis = (start..end)
                    .map(|k| {
                        let w = dec.eigenvector(k);
                        let n = q[0].len();
                        (0..n).map(|i| q.iter().zip(&w).map(|(c, x)| c[i] * x).sum()).collect()
                    })
                    .collect();
                out.push(cluster);
                start = end;
            }
        }
    }
    Ok(out)
}

/// Simultaneous diagonalization of a commuting family.
pub fn diagonalize(family: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<(CommutingFamily, Vec<Basis>)> {
    let Some(first) = family.first() else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    let n = first.dim();
    for m in family {
        first.ensure_same_dim(m)?;
    }
    check_pairwise(family, tol)?;
    let identity: Basis =
        (0..n).map(|j| (0..n).map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    let mut spaces = vec![identity];
    for m in family {
        spaces = refine(spaces, m, m.norm())?;
    }
    let columns: Vec<Vec<Complex64>> = spaces.iter().flatten().cloned().collect();
    let common_basis = CMatrix::from_columns(n, &columns);
    Ok((CommutingFamily { members: family.to_vec(), common_basis }, spaces))
}

/// Block generated by a commuting family: the projections onto its maximal
/// joint eigenspaces. Every member is checked to be a real combination of
/// the atoms.
pub fn generate_block(family: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<Block> {
    let (_, spaces) = diagonalize(family, tol)?;
    let n = family[0].dim();
    let atoms: Vec<Projection> =
        spaces.iter().map(|q| Projection::from_matrix_unchecked(projector(n, q))).collect();
    let block = Block { atoms };
    for m in family {
        let residual = block.reconstruct(m).dist(m);
        if residual > 1e-8 * (1.0 + m.norm()) {
            return Err(Error::Inconsistent { what: "member is a combination of atoms", residual });
        }
    }
    Ok(block)
}

impl Block {
    pub fn dim(&self) -> usize {
        self.atoms.first().map_or(0, |a| a.dim())
    }

    /// `tr(m a_i) / tr(a_i)` for each atom.
    pub fn coefficients(&self, m: &HermitianMatrix) -> Vec<f64> {
        self.atoms.iter().map(|a| m.product(a).trace().re / a.trace()).collect()
    }

    /// `Σ c_i a_i` with the coefficients of `m`.
    pub fn reconstruct(&self, m: &HermitianMatrix) -> HermitianMatrix {
        let mut out = HermitianMatrix::zeros(self.dim());
        for (a, c) in self.atoms.iter().zip(self.coefficients(m)) {
            out = &out + &a.matrix().scale(c);
        }
        out
    }

    /// All atoms have rank one, so the block is maximal among the projections.
    pub fn is_maximal(&self) -> bool {
        self.atoms.iter().all(|a| a.rank() == 1)
    }

    /// `max ||a_i a_j||` over `i != j` and `||Σ a_i - 1||`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut sum = HermitianMatrix::zeros(n);
        for (i, a) in self.atoms.iter().enumerate() {
            sum = &sum + a.matrix();
            for b in &self.atoms[i + 1..] {
                worst = worst.max(a.product(b).frobenius_norm());
            }
        }
        worst.max((&sum - &HermitianMatrix::identity(n)).frobenius_norm())
    }

    pub fn members(&self) -> Vec<HermitianMatrix> {
        self.atoms.iter().map(|a| a.matrix().clone()).collect()
    }
}

fn ensure_commuting(g: &HermitianMatrix, h: &HermitianMatrix, tol: &ToleranceConfig) -> Result<()> {
    if commutes(g, h, tol)? {
        Ok(())
    } else {
        Err(Error::NotCommuting { residual: g.commutator_norm(h) })
    }
}

/// `g ∧ h = g - (g - h)+` for commuting `g`, `h`.
pub fn cblock_meet(g: &HermitianMatrix, h: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    ensure_commuting(g, h, tol)?;
    let (pos, _) = calculus::pos_part(&(g - h), tol)?;
    Ok(g - &pos)
}

/// `g ∨ h = g + (h - g)+` for commuting `g`, `h`.
pub fn cblock_join(g: &HermitianMatrix, h: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    ensure_commuting(g, h, tol)?;
    let (pos, _) = calculus::pos_part(&(h - g), tol)?;
    Ok(g + &pos)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub closed: bool,
    pub checked: usize,
    pub violations: Vec<String>,
    pub atoms: usize,
    /// False when the joint spectrum is degenerate; the block is then only
    /// maximal within the algebra the family generates.
    pub maximal: bool,
}

/// Checks that products, Jordan products, square roots, absolute values,
/// carriers and spectral projections built from the family stay in the
/// commutant of its block.
pub fn verify_cblock_closure(family: &[HermitianMatrix], tol: &ToleranceConfig) -> Result<ClosureReport> {
    let block = generate_block(family, tol)?;
    let atoms = block.members();
    let mut built: Vec<(String, HermitianMatrix)> = Vec::new();
    for (i, g) in family.iter().enumerate() {
        for (j, h) in family.iter().enumerate().skip(i) {
            built.push((format!("product {i}*{j}"), g.product_sym(h)));
            built.push((format!("jordan {i}o{j}"), jordan_product(g, h)?));
        }
        if is_positive(g, tol) {
            built.push((format!("sqrt {i}"), calculus::sqrt(g, tol)?.0));
        }
        built.push((format!("abs {i}"), calculus::abs(g, tol)?.0));
        built.push((format!("carrier {i}"), calculus::carrier(g, tol)?.0.into_matrix()));
        let mut levels = block.coefficients(g);
        levels.sort_by(f64::total_cmp);
        levels.dedup_by(|a, b| (*a - *b).abs() <= CLUSTER_TOL * (1.0 + order_norm(g, tol)));
        for w in levels.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let (p, _) = spectral::spectral_projection(g, mid, tol)?;
            built.push((format!("p_{mid:.6} of {i}"), p.into_matrix()));
        }
    }
    let mut violations = Vec::new();
    for (name, x) in &built {
        if !in_commutant(x, &atoms, tol)? {
            violations.push(name.clone());
        }
    }
    Ok(ClosureReport {
        closed: violations.is_empty(),
        checked: built.len(),
        violations,
        atoms: block.atoms.len(),
        maximal: block.is_maximal(),
    })
}
