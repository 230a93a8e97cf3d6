use super::BaselineError;

/// `d`-fold first differences.
pub fn difference(series: &[f64], d: usize) -> Result<Vec<f64>, BaselineError> {
    Ok(difference_with_anchors(series, d)?.0)
}

/// Differences plus the first value of each intermediate level, which is what
/// [`undifference`] needs to rebuild the series.
pub fn difference_with_anchors(series: &[f64], d: usize) -> Result<(Vec<f64>, Vec<f64>), BaselineError> {
    if series.len() <= d {
        return Err(BaselineError::InsufficientData(format!(
            "cannot difference {} values {d} times",
            series.len()
        )));
    }
    let mut level = series.to_vec();
    let mut anchors = Vec::with_capacity(d);
    for _ in 0..d {
        anchors.push(level[0]);
        level = level.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok((level, anchors))
}

/// Inverse of [`difference_with_anchors`].
pub fn undifference(diffed: &[f64], anchors: &[f64]) -> Vec<f64> {
    let mut level = diffed.to_vec();
    for &a in anchors.iter().rev() {
        let mut out = Vec::with_capacity(level.len() + 1);
        out.push(a);
        let mut acc = a;
        for &v in &level {
            acc += v;
            out.push(acc);
        }
        level = out;
    }
    level
}
