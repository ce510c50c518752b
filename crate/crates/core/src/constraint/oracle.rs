/// Decides whether `a3 x^3 + a2 x^2 + a1 x + a0 >= 0` for every `x >= 0`.
///
/// Uses the coefficient regions `R1 = {all >= 0}` and
/// `R2 = {a3 >= 0, a0 >= 0, 4 a3 a1^3 + 4 a0 a2^3 + 27 a3^2 a0^2 - 18 a3 a2 a1 a0 - a2^2 a1^2 >= 0}`.
/// The regions characterize non-negativity only when both `a3` and `a0` are
/// non-zero; a vanishing end coefficient lowers the degree (or factors out an
/// `x`) and is decided on the reduced polynomial.
pub fn cubic_nonneg_oracle(a3: f64, a2: f64, a1: f64, a0: f64) -> bool {
    if a3 == 0.0 {
        return quadratic_nonneg(a2, a1, a0);
    }
    if a0 == 0.0 {
        return quadratic_nonneg(a3, a2, a1);
    }
    let r1 = a3 >= 0.0 && a2 >= 0.0 && a1 >= 0.0 && a0 >= 0.0;
    let r2 = a3 >= 0.0
        && a0 >= 0.0
        && 4.0 * a3 * a1 * a1 * a1 + 4.0 * a0 * a2 * a2 * a2 + 27.0 * a3 * a3 * a0 * a0
            - 18.0 * a3 * a2 * a1 * a0
            - a2 * a2 * a1 * a1
            >= 0.0;
    r1 || r2
}

/// `a x^2 + b x + c >= 0` on `x >= 0`.
fn quadratic_nonneg(a: f64, b: f64, c: f64) -> bool {
    if a == 0.0 {
        return b >= 0.0 && c >= 0.0;
    }
    if c == 0.0 {
        return a >= 0.0 && b >= 0.0;
    }
    a >= 0.0 && c >= 0.0 && (b >= 0.0 || b * b <= 4.0 * a * c)
}
