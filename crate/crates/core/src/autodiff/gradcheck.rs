use super::AutodiffError;

/// Compares `analytic` gradients of `f` at `params` against central differences.
///
/// Returns the largest per-coordinate relative error
/// `|analytic - numeric| / max(1e-8, |analytic| + |numeric|)`.
pub fn finite_difference_check<F>(
    mut f: F,
    params: &[f64],
    analytic: &[f64],
    epsilon: f64,
) -> Result<f64, AutodiffError>
where
    F: FnMut(&[f64]) -> f64,
{
    if analytic.len() != params.len() {
        return Err(AutodiffError::Dimension {
            op: "finite_difference_check",
            left: alloc::vec![params.len()],
            right: alloc::vec![analytic.len()],
        });
    }
    let mut probe = params.to_vec();
    let mut worst = 0.0f64;
    for i in 0..params.len() {
        probe[i] = params[i] + epsilon;
        let plus = f(&probe);
        probe[i] = params[i] - epsilon;
        let minus = f(&probe);
        probe[i] = params[i];
        if !plus.is_finite() || !minus.is_finite() {
            return Err(AutodiffError::NonFinite("objective"));
        }
        let numeric = (plus - minus) / (2.0 * epsilon);
        let err = (analytic[i] - numeric).abs() / (analytic[i].abs() + numeric.abs()).max(1e-8);
        worst = worst.max(err);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_squares() {
        let p = [1.0, 2.0];
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let err = finite_difference_check(f, &p, &[2.0, 4.0], 1e-5).unwrap();
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn constant_function_has_zero_error() {
        let err = finite_difference_check(|_| 3.0, &[0.5, -1.0, 4.0], &[0.0; 3], 1e-5).unwrap();
        assert!(err < 1e-12);
    }

    #[test]
    fn wrong_gradient_is_detected() {
        let f = |x: &[f64]| x[0] * x[0];
        let err = finite_difference_check(f, &[1.0], &[3.0], 1e-5).unwrap();
        assert!(err > 0.1);
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        let f = |x: &[f64]| if x[0] > 0.0 { f64::NAN } else { 0.0 };
        assert_eq!(
            finite_difference_check(f, &[0.0], &[0.0], 1e-5),
            Err(AutodiffError::NonFinite("objective"))
        );
    }
}
