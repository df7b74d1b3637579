use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::to_json_string;
use crate::numkernel::DenseMatrix;

use super::{Grid, InteriorOrder, SbpSecondDerivative};

/// Serialized form of a second-derivative operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub order: usize,
    pub n: usize,
    pub alpha: Option<f64>,
    #[serde(rename = "H_diag")]
    pub h_diag: Vec<f64>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "dL")]
    pub d_left: Vec<f64>,
    #[serde(rename = "dR")]
    pub d_right: Vec<f64>,
}

impl From<&SbpSecondDerivative> for OperatorJson {
    fn from(op: &SbpSecondDerivative) -> Self {
        OperatorJson {
            order: op.order().as_usize(),
            n: op.grid().n(),
            alpha: op.alpha(),
            h_diag: op.h_diag().to_vec(),
            a: op.a().to_rows(),
            d_left: op.d_left().to_vec(),
            d_right: op.d_right().to_vec(),
        }
    }
}

impl TryFrom<OperatorJson> for SbpSecondDerivative {
    type Error = Error;

    fn try_from(j: OperatorJson) -> Result<Self> {
        let order = InteriorOrder::try_from(j.order)?;
        let grid = Grid::new(j.n)?;
        order.check_grid(j.n)?;
        if order == InteriorOrder::Sixth && j.alpha.is_none() {
            return Err(Error::MissingAlpha);
        }
        let a = DenseMatrix::from_rows(&j.a)?;
        SbpSecondDerivative::from_parts(grid, order, j.alpha, j.h_diag, a, j.d_left, j.d_right)
    }
}

/// `{order, n, alpha, H_diag, A, dL, dR}` with 17-significant-digit floats.
pub fn operator_to_json(op: &SbpSecondDerivative) -> Result<String> {
    to_json_string(&OperatorJson::from(op))
}

pub fn operator_from_json(s: &str) -> Result<SbpSecondDerivative> {
    let j: OperatorJson = serde_json::from_str(s)?;
    SbpSecondDerivative::try_from(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_d2;

    #[test]
    fn round_trip_is_exact() {
        let g = Grid::new(13).unwrap();
        let op = build_d2(&g, InteriorOrder::Sixth, Some(484.3)).unwrap();
        let s = operator_to_json(&op).unwrap();
        let back = operator_from_json(&s).unwrap();
        assert_eq!(back.a(), op.a());
        assert_eq!(back.h_diag(), op.h_diag());
        assert_eq!(back.d_left(), op.d_left());
        assert_eq!(back.d2(), op.d2());
        assert_eq!(back.alpha(), Some(484.3));
    }

    #[test]
    fn rejects_inconsistent_sizes() {
        let g = Grid::new(5).unwrap();
        let op = build_d2(&g, InteriorOrder::Second, None).unwrap();
        let mut j = OperatorJson::from(&op);
        j.h_diag.pop();
        assert!(SbpSecondDerivative::try_from(j).is_err());
    }
}
