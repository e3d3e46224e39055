//! Least-squares line fits in log–log coordinates.

use crate::error::{LabError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    /// `log y − (slope·log x + intercept)` per point.
    pub residuals: Vec<f64>,
}

impl LogFit {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Fit `ln y = slope·ln x + intercept`. Needs two or more strictly positive points.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<LogFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(LabError::InvalidParameter(format!(
            "log-log fit needs matching lists of at least 2 points (got {} and {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(LabError::InvalidParameter("log-log fit needs finite positive data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LabError::Degenerate("log-log fit with identical abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = lx.iter().zip(&ly).map(|(x, y)| y - (slope * x + intercept)).collect();
    Ok(LogFit { slope, intercept, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.25)).collect();
        let f = loglog_fit(&xs, &ys).unwrap();
        assert!((f.slope + 0.25).abs() < 1e-14);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-14);
        assert!(f.max_abs_residual() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(loglog_fit(&[1.0], &[1.0]).is_err());
        assert!(loglog_fit(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(loglog_fit(&[2.0, 2.0], &[1.0, 3.0]).is_err());
    }
}
