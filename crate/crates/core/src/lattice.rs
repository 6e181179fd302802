//! The orthomodular lattice of projections.
//!
//! `p ∨ q = (p + q)°` and `p ∧ q = 1 - ((1 - p) ∨ (1 - q))`. Since
//! [`Projection::complement`] is an exact involution, De Morgan's laws hold
//! bit for bit.

use serde::{Deserialize, Serialize};

use crate::calculus;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::hermitian::{commutes, loewner_leq, HermitianMatrix, Projection};

/// `1 - p`.
pub fn ortho(p: &Projection) -> Projection {
    p.complement()
}

fn same_dim(p: &Projection, q: &Projection) -> Result<()> {
    p.matrix().ensure_same_dim(q.matrix())
}

/// `p ∨ q`: the carrier of `p + q`.
pub fn join(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<Projection> {
    same_dim(p, q)?;
    if p == q {
        return Ok(p.clone());
    }
    let n = p.dim();
    if p.rank() == 0 {
        return Ok(q.clone());
    }
    if q.rank() == 0 {
        return Ok(p.clone());
    }
    if p.rank() == n || q.rank() == n {
        return Ok(Projection::identity(n));
    }
    let sum = p.matrix() + q.matrix();
    let (c, _) = calculus::carrier_relative(&sum, 2.0, tol)?;
    Ok(c)
}

/// `p ∧ q = 1 - ((1 - p) ∨ (1 - q))`.
pub fn meet(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<Projection> {
    Ok(join(&p.complement(), &q.complement(), tol)?.complement())
}

/// Join of a finite set, folded left to right.
pub fn join_all<'a>(items: impl IntoIterator<Item = &'a Projection>, n: usize, tol: &ToleranceConfig) -> Result<Projection> {
    let mut acc = Projection::zero(n);
    for p in items {
        acc = join(&acc, p, tol)?;
    }
    Ok(acc)
}

/// Meet of a finite set, folded left to right.
pub fn meet_all<'a>(items: impl IntoIterator<Item = &'a Projection>, n: usize, tol: &ToleranceConfig) -> Result<Projection> {
    let mut acc = Projection::identity(n);
    for p in items {
        acc = meet(&acc, p, tol)?;
    }
    Ok(acc)
}

/// Mackey decomposition of a compatible pair: `p = p1 + r`, `q = q1 + r`
/// with `p1`, `q1`, `r` pairwise orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MackeyDecomposition {
    pub p1: HermitianMatrix,
    pub q1: HermitianMatrix,
    pub r: HermitianMatrix,
}

/// Compatibility of projections, which on this model is commutation. A
/// compatible pair also comes with its Mackey decomposition, `r = pq`.
pub fn is_compatible(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<bool> {
    Ok(mackey_decomposition(p, q, tol)?.is_some())
}

pub fn mackey_decomposition(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<Option<MackeyDecomposition>> {
    same_dim(p, q)?;
    if !commutes(p.matrix(), q.matrix(), tol)? {
        return Ok(None);
    }
    let r = p.product_sym(q.matrix());
    let p1 = p.matrix() - &r;
    let q1 = q.matrix() - &r;
    let slack = 10.0 * tol.proj;
    for x in [&p1, &q1, &r] {
        let defect = (&x.square() - x).frobenius_norm();
        if defect > slack {
            return Err(Error::Inconsistent { what: "Mackey parts are projections", residual: defect });
        }
    }
    for (x, y) in [(&p1, &q1), (&p1, &r), (&q1, &r)] {
        let overlap = x.product(y).frobenius_norm();
        if overlap > slack {
            return Err(Error::Inconsistent { what: "Mackey parts are orthogonal", residual: overlap });
        }
    }
    Ok(Some(MackeyDecomposition { p1, q1, r }))
}

/// `p <= q` in the Loewner order.
pub fn projection_leq(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<bool> {
    loewner_leq(p.matrix(), q.matrix(), tol)
}

/// Supremum of an ascending chain `p_1 <= p_2 <= ...`.
///
/// In finite dimension the chain stabilizes, so the supremum is its last
/// member; it is cross-checked against the carrier of `Σ 2^{-k} p_k`.
pub fn monotone_projection_supremum(chain: &[Projection], tol: &ToleranceConfig) -> Result<Projection> {
    let Some(first) = chain.first() else {
        return Err(Error::InvalidArgument("empty projection chain".into()));
    };
    let n = first.dim();
    for (i, w) in chain.windows(2).enumerate() {
        same_dim(&w[0], &w[1])?;
        if !projection_leq(&w[0], &w[1], tol)? {
            return Err(Error::NotAscending { index: i + 1 });
        }
    }
    let last = chain[chain.len() - 1].clone();
    let mut weighted = HermitianMatrix::zeros(n);
    let mut w = 1.0;
    for p in chain {
        w *= 0.5;
        weighted = &weighted + &p.matrix().scale(w);
    }
    let (c, _) = calculus::carrier_relative(&weighted, 1.0, tol)?;
    let residual = c.max_abs_diff(last.matrix());
    if residual > 10.0 * tol.proj {
        return Err(Error::Inconsistent { what: "chain supremum", residual });
    }
    Ok(last)
}
