//! Central finite differences and Richardson extrapolation shared by the residual checks.

use num_complex::Complex64;

use crate::error::Result;

fn stencil(order: u32) -> &'static [(i32, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        _ => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
    }
}

/// Tensor-product central difference for `d^a/dt^a d^b/dx^b f`, orders at most 2.
pub fn mixed_partial<F>(f: &F, t: f64, x: f64, a: u32, b: u32, h: f64) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Result<Complex64> + ?Sized,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for &(i, wi) in stencil(a) {
        for &(j, wj) in stencil(b) {
            acc += wi * wj * f(t + i as f64 * h, x + j as f64 * h)?;
        }
    }
    Ok(acc / h.powi((a + b) as i32))
}

/// One-dimensional central first derivative.
pub fn d1<F>(f: &F, x: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// One-dimensional central second derivative.
pub fn d2<F>(f: &F, x: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    Ok((f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h))
}

/// Eliminates the leading h^2 error term from estimates at steps h and h/2.
pub fn richardson(at_h: Complex64, at_half: Complex64) -> Complex64 {
    (4.0 * at_half - at_h) / 3.0
}
