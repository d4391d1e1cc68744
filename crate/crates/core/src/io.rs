//! JSON formats for states, channels, and optimizer reports (f64).
//!
//! States serialize as `{dims, re, im}` with row-major entries and `dims`
//! the tensor-factor list; density matrices carry (Π dims)² entries, pure
//! state vectors carry Π dims. Kraus matrices reuse the same shape with
//! `dims = [rows, cols]`. Floats round-trip bit-exactly.

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::DimList;
use crate::opt::{BestParams, OptConfig, OptReport};
use crate::states::{DensityOperator, PureState};
use crate::{Channel, Complex64, Density, Matrix, Pure};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    fn check_lengths(&self) -> Result<()> {
        if self.re.len() != self.im.len() {
            return Err(Error::malformed(
                "im",
                format!("length {} does not match re length {}", self.im.len(), self.re.len()),
            ));
        }
        if self.re.iter().chain(&self.im).any(|v| !v.is_finite()) {
            return Err(Error::malformed("re/im", "entries must be finite"));
        }
        Ok(())
    }
}

pub fn density_to_json(rho: &Density) -> MatrixJson {
    let data = rho.mat().data();
    MatrixJson {
        dims: rho.dims().as_slice().to_vec(),
        re: data.iter().map(|z| z.re).collect(),
        im: data.iter().map(|z| z.im).collect(),
    }
}

pub fn pure_to_json(psi: &Pure) -> MatrixJson {
    MatrixJson {
        dims: psi.dims().as_slice().to_vec(),
        re: psi.vec().iter().map(|z| z.re).collect(),
        im: psi.vec().iter().map(|z| z.im).collect(),
    }
}

/// Either kind of state file, distinguished by entry count: Π dims for a
/// vector, (Π dims)² for a matrix.
#[derive(Debug)]
pub enum LoadedState {
    Density(Density),
    Pure(Pure),
}

impl LoadedState {
    pub fn into_density(self) -> Density {
        match self {
            LoadedState::Density(rho) => rho,
            LoadedState::Pure(psi) => psi.to_density(),
        }
    }
}

pub fn state_from_json(json: &MatrixJson) -> Result<LoadedState> {
    json.check_lengths()?;
    let dims = DimList::new(json.dims.clone())
        .map_err(|e| Error::malformed("dims", e.to_string()))?;
    let total = dims.total();
    let entries: Vec<Complex64> = json
        .re
        .iter()
        .zip(&json.im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    if entries.len() == total {
        let psi = PureState::new(entries, dims, None)
            .map_err(|e| Error::malformed("re", e.to_string()))?;
        Ok(LoadedState::Pure(psi))
    } else if entries.len() == total * total {
        let mat = Matrix::new(total, total, entries);
        let rho = DensityOperator::new(mat, dims)
            .map_err(|e| Error::malformed("re", e.to_string()))?;
        Ok(LoadedState::Density(rho))
    } else {
        Err(Error::malformed(
            "re",
            format!(
                "length {} matches neither a vector ({total}) nor a matrix ({}) over dims {:?}",
                entries.len(),
                total * total,
                json.dims
            ),
        ))
    }
}

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    MatrixJson {
        dims: vec![m.rows(), m.cols()],
        re: m.data().iter().map(|z| z.re).collect(),
        im: m.data().iter().map(|z| z.im).collect(),
    }
}

pub fn matrix_from_json(json: &MatrixJson) -> Result<Matrix> {
    json.check_lengths()?;
    if json.dims.len() != 2 {
        return Err(Error::malformed(
            "dims",
            format!("matrix shape needs [rows, cols], got {:?}", json.dims),
        ));
    }
    let (rows, cols) = (json.dims[0], json.dims[1]);
    if json.re.len() != rows * cols {
        return Err(Error::malformed(
            "re",
            format!("length {} does not match {rows}x{cols}", json.re.len()),
        ));
    }
    let entries: Vec<Complex64> = json
        .re
        .iter()
        .zip(&json.im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    Ok(Matrix::new(rows, cols, entries))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<MatrixJson>,
}

pub fn channel_to_json(ch: &Channel) -> ChannelJson {
    ChannelJson {
        d_in: ch.d_in(),
        d_out: ch.d_out(),
        kraus: ch.kraus().iter().map(matrix_to_json).collect(),
    }
}

pub fn channel_from_json(json: &ChannelJson) -> Result<Channel> {
    let kraus: Result<Vec<Matrix>> = json.kraus.iter().map(matrix_from_json).collect();
    let ch = KrausChannel::new(kraus?)?;
    if ch.d_in() != json.d_in || ch.d_out() != json.d_out {
        return Err(Error::malformed(
            "d_in/d_out",
            format!(
                "declared {}→{} but Kraus operators are {}→{}",
                json.d_in,
                json.d_out,
                ch.d_in(),
                ch.d_out()
            ),
        ));
    }
    Ok(ch)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BestParamsJson {
    Isometry { matrix: MatrixJson },
    Povm { effects: Vec<MatrixJson> },
    Exact,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptReportJson {
    pub value_bits: f64,
    pub best_params: BestParamsJson,
    pub restarts: usize,
    pub iterations: Vec<usize>,
    pub converged: bool,
    pub history_bits: Vec<f64>,
    pub seed: u64,
    pub config: OptConfig,
}

pub fn opt_report_to_json(report: &OptReport<f64>) -> OptReportJson {
    let best_params = match &report.best_params {
        BestParams::Isometry(v) => BestParamsJson::Isometry {
            matrix: matrix_to_json(v),
        },
        BestParams::Povm(effects) => BestParamsJson::Povm {
            effects: effects.iter().map(matrix_to_json).collect(),
        },
        BestParams::Exact => BestParamsJson::Exact,
    };
    OptReportJson {
        value_bits: report.value.0,
        best_params,
        restarts: report.restarts,
        iterations: report.iterations.clone(),
        converged: report.converged,
        history_bits: report.history.clone(),
        seed: report.config.seed,
        config: report.config.clone(),
    }
}

/// Pretty JSON with a trailing newline; deterministic for a fixed value.
pub fn to_json_string<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
