//! CSV formatting shared by every exported table.

/// Full double precision in fixed scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}
