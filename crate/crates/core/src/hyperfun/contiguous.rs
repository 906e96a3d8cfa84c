use serde::{Deserialize, Serialize};

use super::kummer::{kummer_m, kummer_m_deriv};
use crate::error::Result;

/// Contiguous relations between neighbouring Kummer functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// b M(a,b) - b M(a-1,b) - z M(a,b+1) = 0
    U1,
    /// b(1-b+z) M(a,b) + b(b-1) M(a-1,b-1) - a z M(a+1,b+1) = 0
    U2,
    /// (a-1+z) M(a,b) + (b-a) M(a-1,b) + (1-b) M(a,b-1) = 0
    U3,
    /// (a-b+1) M(a,b) - a M(a+1,b) + (b-1) M(a,b-1) = 0
    U4,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::U1, Relation::U2, Relation::U3, Relation::U4];
}

/// Absolute residual of sum c_i M_i with the normwise scale max|c_i| * max|M_i|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.abs
        } else {
            self.abs / self.scale
        }
    }

    fn from_pairs(pairs: &[(f64, f64)]) -> Residual {
        let abs = pairs.iter().map(|(c, v)| c * v).sum::<f64>().abs();
        let cmax = pairs.iter().fold(0.0f64, |m, (c, _)| m.max(c.abs()));
        let vmax = pairs.iter().fold(0.0f64, |m, (_, v)| m.max(v.abs()));
        Residual { abs, scale: cmax * vmax }
    }
}

fn m(a: f64, b: f64, z: f64) -> Result<f64> {
    Ok(kummer_m(a, b, z)?.value.re)
}

pub fn contiguous_residual(rel: Relation, a: f64, b: f64, z: f64) -> Result<Residual> {
    let pairs = match rel {
        Relation::U1 => vec![(b, m(a, b, z)?), (-b, m(a - 1.0, b, z)?), (-z, m(a, b + 1.0, z)?)],
        Relation::U2 => vec![
            (b * (1.0 - b + z), m(a, b, z)?),
            (b * (b - 1.0), m(a - 1.0, b - 1.0, z)?),
            (-a * z, m(a + 1.0, b + 1.0, z)?),
        ],
        Relation::U3 => vec![(a - 1.0 + z, m(a, b, z)?), (b - a, m(a - 1.0, b, z)?), (1.0 - b, m(a, b - 1.0, z)?)],
        Relation::U4 => vec![(a - b + 1.0, m(a, b, z)?), (-a, m(a + 1.0, b, z)?), (b - 1.0, m(a, b - 1.0, z)?)],
    };
    Ok(Residual::from_pairs(&pairs))
}

/// Residual of z F'' + (b - z) F' - a F with derivatives from the shifted series.
pub fn kummer_ode_residual(a: f64, b: f64, z: f64) -> Result<Residual> {
    let f0 = kummer_m_deriv(a, b, z, 0)?.value.re;
    let f1 = kummer_m_deriv(a, b, z, 1)?.value.re;
    let f2 = kummer_m_deriv(a, b, z, 2)?.value.re;
    Ok(Residual::from_pairs(&[(z, f2), (b - z, f1), (-a, f0)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u1_sample() {
        let r = contiguous_residual(Relation::U1, 0.75, 2.5, 1.2).unwrap();
        assert!(r.relative() <= 1e-12, "{r:?}");
    }

    #[test]
    fn u2_at_origin() {
        let r = contiguous_residual(Relation::U2, 0.75, 2.5, 0.0).unwrap();
        assert!(r.abs <= 1e-15);
    }

    #[test]
    fn u4_sample() {
        let r = contiguous_residual(Relation::U4, 1.0, 2.0, 1.0).unwrap();
        assert!(r.relative() <= 1e-12);
    }

    #[test]
    fn u3_needs_its_middle_term() {
        // dropping the (b-a) term leaves an O(1) residual
        let (a, b, z) = (0.75, 2.5, 1.2);
        let full = contiguous_residual(Relation::U3, a, b, z).unwrap();
        assert!(full.relative() <= 1e-12);
        let broken = (a - 1.0 + z) * m(a, b, z).unwrap() + (1.0 - b) * m(a, b - 1.0, z).unwrap();
        assert!(broken.abs() > 1e-2);
    }

    #[test]
    fn degenerate_point_uses_normwise_scale() {
        // a = b = z = 1/2: every U3 term vanishes, only rounding is left
        let r = contiguous_residual(Relation::U3, 0.5, 0.5, 0.5).unwrap();
        assert!(r.scale >= 0.5 && r.relative() <= 1e-15, "{r:?}");
    }

    #[test]
    fn ode_sample() {
        let r = kummer_ode_residual(-2.25, 3.5, 11.0).unwrap();
        assert!(r.relative() <= 1e-12);
    }
}
