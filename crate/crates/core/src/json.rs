//! JSON document shapes shared by the library and the CLI.
//!
//! Floats are written by `serde_json` in shortest round-trip form, so a
//! write-then-read cycle reproduces every entry bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::hermitian::{make_hermitian, Construction, HermitianMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub re: f64,
    pub im: f64,
}

/// `{"n": <int>, "entries": [{"re": f, "im": f}, ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub entries: Vec<EntryDoc>,
}

impl MatrixDoc {
    pub fn to_cmatrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.n * self.n {
            return Err(Error::NonSquare { n: self.n, len: self.entries.len() });
        }
        let data = self.entries.iter().map(|e| Complex64::new(e.re, e.im)).collect();
        Ok(CMatrix::from_vec(self.n, data))
    }

    pub fn to_hermitian(&self, mode: Construction, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
        make_hermitian(&self.to_cmatrix()?, mode, tol)
    }
}

impl From<&HermitianMatrix> for MatrixDoc {
    fn from(g: &HermitianMatrix) -> Self {
        Self {
            n: g.dim(),
            entries: g.entries().iter().map(|z| EntryDoc { re: z.re, im: z.im }).collect(),
        }
    }
}

impl From<HermitianMatrix> for MatrixDoc {
    fn from(g: HermitianMatrix) -> Self {
        Self::from(&g)
    }
}

impl TryFrom<MatrixDoc> for HermitianMatrix {
    type Error = Error;
    fn try_from(doc: MatrixDoc) -> Result<Self> {
        doc.to_hermitian(Construction::Strict, &ToleranceConfig::default())
    }
}
