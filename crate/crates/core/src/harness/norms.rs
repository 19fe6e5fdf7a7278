use crate::error::{Result, WenoError};

/// Discrete error norms: `L1 = h sum|e|`, `L2 = sqrt(h sum e^2)`, `Linf = max|e|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl ErrorNorms {
    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.linf]
    }
}

/// `h` is the cell size (cell area in two dimensions).
pub fn error_norms(numeric: &[f64], exact: &[f64], h: f64) -> Result<ErrorNorms> {
    if numeric.len() != exact.len() {
        return Err(WenoError::MeshMismatch(format!("{} vs {} cells", numeric.len(), exact.len())));
    }
    if !(h > 0.0) {
        return Err(WenoError::InvalidInput(format!("cell size {h}")));
    }
    let (mut s1, mut s2, mut inf) = (0.0, 0.0, 0.0f64);
    for (a, b) in numeric.iter().zip(exact) {
        let e = (a - b).abs();
        s1 += e;
        s2 += e * e;
        inf = inf.max(e);
    }
    Ok(ErrorNorms { l1: h * s1, l2: (h * s2).sqrt(), linf: inf })
}

/// Observed order between two mesh levels, `ln(e0/e1) / ln(h0/h1)`.
pub fn observed_order(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln()
}
