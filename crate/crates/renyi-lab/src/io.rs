//! JSON schemas for operators, hypothesis instances and channels, plus the
//! CSV number format shared by every front end.
//!
//! Operators travel as `{"dim": d, "re": [[...]], "im": [[...]]}` with
//! row-major `d × d` real and imaginary parts; the loader validates
//! Hermiticity (and positivity / unit trace where the target type demands
//! it). Hypothesis instances are `{"sigma": <op>?, "null": [<op>...],
//! "weights": [...]?}`: a missing `sigma` means the identity, which is the
//! compression convention. Channels are
//! `{"alphabet": [...], "outputs": {"sym": <op>, ...}}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::linalg::{c, CMatrix};
use crate::operator::{DensityOp, HermitianOp, PSDOp};
use crate::{Error, Result};

/// Wire form of a dense complex operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl OperatorJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let d = m.nrows();
        let re = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
            .collect();
        OperatorJson { dim: d, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidInput("dim must be at least 1".into()));
        }
        let check = |name: &str, rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::InvalidInput(format!(
                    "field {name:?} must be a {d}x{d} matrix"
                )));
            }
            Ok(())
        };
        check("re", &self.re)?;
        check("im", &self.im)?;
        Ok(CMatrix::from_fn(d, d, |i, j| c(self.re[i][j], self.im[i][j])))
    }

    pub fn to_hermitian(&self) -> Result<HermitianOp> {
        HermitianOp::new(self.to_matrix()?)
    }

    pub fn to_psd(&self) -> Result<PSDOp> {
        PSDOp::new(self.to_hermitian()?)
    }

    pub fn to_density(&self) -> Result<DensityOp> {
        DensityOp::new(self.to_psd()?)
    }
}

/// Wire form of a hypothesis-testing / compression instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisJson {
    /// Alternative operator; `None` means the identity (compression).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<OperatorJson>,
    pub null: Vec<OperatorJson>,
    /// Optional mixture weights over the null states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl HypothesisJson {
    pub fn null_states(&self) -> Result<Vec<DensityOp>> {
        if self.null.is_empty() {
            return Err(Error::EmptyInput("null-state list"));
        }
        self.null.iter().map(|op| op.to_density()).collect()
    }

    /// The alternative operator, defaulting to the identity on the null
    /// states' space.
    pub fn sigma_or_identity(&self) -> Result<PSDOp> {
        match &self.sigma {
            Some(op) => op.to_psd(),
            None => {
                let dim = self
                    .null
                    .first()
                    .ok_or(Error::EmptyInput("null-state list"))?
                    .dim;
                Ok(PSDOp::identity(dim))
            }
        }
    }
}

/// Wire form of a classical-quantum channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub alphabet: Vec<String>,
    pub outputs: BTreeMap<String, OperatorJson>,
}

impl ChannelJson {
    pub fn to_channel(&self) -> Result<Channel> {
        let mut outputs = Vec::with_capacity(self.alphabet.len());
        for sym in &self.alphabet {
            let op = self
                .outputs
                .get(sym)
                .ok_or_else(|| Error::UnknownSymbol(sym.clone()))?;
            outputs.push(op.to_density()?);
        }
        Channel::new(self.alphabet.clone(), outputs)
    }

    pub fn from_channel(channel: &Channel) -> Self {
        ChannelJson {
            alphabet: channel.alphabet().to_vec(),
            outputs: channel
                .alphabet()
                .iter()
                .zip(channel.outputs())
                .map(|(s, w)| (s.clone(), OperatorJson::from_matrix(w.matrix())))
                .collect(),
        }
    }
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

/// CSV number format: 17 significant digits with `.` as the decimal mark,
/// round-trip exact for `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

/// CSV cell for an extended real.
pub fn fmt_ext(x: crate::ExtReal) -> String {
    match x {
        crate::ExtReal::Finite(v) => fmt_f64(v),
        crate::ExtReal::Infinity => "inf".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_roundtrip() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.5, 0.0)]);
        let json = OperatorJson::from_matrix(&m);
        let back = json.to_matrix().unwrap();
        assert!((back - m).norm() < 1e-15);
    }

    #[test]
    fn loader_validates_target_type() {
        let bad_herm = OperatorJson {
            dim: 2,
            re: vec![vec![1.0, 0.5], vec![0.0, 1.0]],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(matches!(bad_herm.to_hermitian(), Err(Error::NotHermitian(_))));

        let not_psd = OperatorJson {
            dim: 2,
            re: vec![vec![1.0, 0.0], vec![0.0, -0.5]],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(matches!(not_psd.to_psd(), Err(Error::NotPsd(_))));

        let not_density = OperatorJson {
            dim: 2,
            re: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(matches!(not_density.to_density(), Err(Error::NotUnitTrace(_))));
    }

    #[test]
    fn loader_rejects_shape_mismatch() {
        let bad = OperatorJson {
            dim: 2,
            re: vec![vec![1.0, 0.0]],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(bad.to_matrix().is_err());
    }

    #[test]
    fn hypothesis_sigma_defaults_to_identity() {
        let hyp = HypothesisJson {
            sigma: None,
            null: vec![OperatorJson {
                dim: 2,
                re: vec![vec![0.7, 0.0], vec![0.0, 0.3]],
                im: vec![vec![0.0; 2]; 2],
            }],
            weights: None,
        };
        let sigma = hyp.sigma_or_identity().unwrap();
        assert!((sigma.trace() - 2.0).abs() < 1e-12);
        assert_eq!(hyp.null_states().unwrap().len(), 1);
    }

    #[test]
    fn channel_json_roundtrip() {
        let mut outputs = BTreeMap::new();
        for (sym, diag) in [("a", [1.0, 0.0]), ("b", [0.0, 1.0])] {
            outputs.insert(
                sym.to_string(),
                OperatorJson {
                    dim: 2,
                    re: vec![vec![diag[0], 0.0], vec![0.0, diag[1]]],
                    im: vec![vec![0.0; 2]; 2],
                },
            );
        }
        let json = ChannelJson { alphabet: vec!["a".into(), "b".into()], outputs };
        let channel = json.to_channel().unwrap();
        assert_eq!(channel.alphabet_size(), 2);
        let back = ChannelJson::from_channel(&channel);
        assert_eq!(back.alphabet, json.alphabet);
    }

    #[test]
    fn csv_numbers_roundtrip_exactly() {
        for &x in &[0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, -7.25e17] {
            let s = fmt_f64(x);
            assert!(!s.contains(','));
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
        assert_eq!(fmt_ext(crate::ExtReal::Infinity), "inf");
    }
}
