//! Small-sample summary statistics for timing runs.

/// Two-sided 95% critical values of Student's t by degrees of freedom
/// (1-based index). Beyond the table the normal value is close enough.
const T_95: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160,
    2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056,
    2.052, 2.048, 2.045, 2.042,
];

pub fn mean(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Half-width of the 95% confidence interval of the mean, using Student's t
/// with `n - 1` degrees of freedom. `None` for fewer than two samples,
/// where the variance is undefined.
pub fn ci95_half_width(samples: &[f64]) -> Option<f64> {
    let n = samples.len();
    if n < 2 {
        return None;
    }
    let m = mean(samples);
    let var = samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    let df = n - 1;
    let t = if df <= T_95.len() {
        T_95[df - 1]
    } else {
        1.960
    };
    Some(t * (var / n as f64).sqrt())
}
