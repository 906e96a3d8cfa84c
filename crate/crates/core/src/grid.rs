//! Rectangular (t, x) sample grids.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `t0:t1:nt,x0:x1:nx` with nt, nx >= 1 samples per axis, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t0: f64,
    pub t1: f64,
    pub nt: usize,
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
}

fn axis(lo: f64, hi: f64, n: usize) -> (f64, Vec<f64>) {
    if n <= 1 {
        return (0.0, vec![lo]);
    }
    let h = (hi - lo) / (n - 1) as f64;
    (h, (0..n).map(|k| if k + 1 == n { hi } else { lo + k as f64 * h }).collect())
}

impl GridSpec {
    pub fn ts(&self) -> Vec<f64> {
        axis(self.t0, self.t1, self.nt).1
    }

    pub fn xs(&self) -> Vec<f64> {
        axis(self.x0, self.x1, self.nx).1
    }

    pub fn spacing(&self) -> (f64, f64) {
        (axis(self.t0, self.t1, self.nt).0, axis(self.x0, self.x1, self.nx).0)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("grid spec '{s}' is not of the form t0:t1:nt,x0:x1:nx"));
        let (tp, xp) = s.split_once(',').ok_or_else(bad)?;
        let parse_axis = |p: &str| -> Result<(f64, f64, usize)> {
            let f: Vec<&str> = p.split(':').map(str::trim).collect();
            if f.len() != 3 {
                return Err(bad());
            }
            let lo = f[0].parse::<f64>().map_err(|_| bad())?;
            let hi = f[1].parse::<f64>().map_err(|_| bad())?;
            let n = f[2].parse::<usize>().map_err(|_| bad())?;
            if n == 0 || !(hi >= lo) {
                return Err(bad());
            }
            Ok((lo, hi, n))
        };
        let (t0, t1, nt) = parse_axis(tp)?;
        let (x0, x1, nx) = parse_axis(xp)?;
        Ok(GridSpec { t0, t1, nt, x0, x1, nx })
    }
}

/// Complex samples on a grid, stored row-major in t.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn sample<F>(spec: GridSpec, f: F) -> Result<GridFunction>
    where
        F: Fn(f64, f64) -> Result<Complex64>,
    {
        let mut samples = Vec::with_capacity(spec.nt * spec.nx);
        for t in spec.ts() {
            for x in spec.xs() {
                let v = f(t, x)?;
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Domain(format!("non-finite sample at t={t}, x={x}")));
                }
                samples.push(v);
            }
        }
        Ok(GridFunction { spec, samples })
    }

    pub fn spacing(&self) -> (f64, f64) {
        self.spec.spacing()
    }

    pub fn at(&self, it: usize, ix: usize) -> Complex64 {
        self.samples[it * self.spec.nx + ix]
    }

    /// Sample at a grid node; off-node points are rejected.
    pub fn eval(&self, t: f64, x: f64) -> Result<Complex64> {
        let (ht, hx) = self.spacing();
        let locate = |v: f64, lo: f64, h: f64, n: usize| -> Option<usize> {
            if n == 1 {
                return ((v - lo).abs() <= 1e-12 * lo.abs().max(1.0)).then_some(0);
            }
            let k = ((v - lo) / h).round();
            if k < 0.0 || k as usize >= n || (lo + k * h - v).abs() > 1e-9 * h {
                return None;
            }
            Some(k as usize)
        };
        match (locate(t, self.spec.t0, ht, self.spec.nt), locate(x, self.spec.x0, hx, self.spec.nx)) {
            (Some(it), Some(ix)) => Ok(self.at(it, ix)),
            _ => Err(Error::Domain(format!("({t}, {x}) is not a grid node"))),
        }
    }

    /// CSV with columns t,x,re,im, floats at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,re,im\n");
        let xs = self.spec.xs();
        for (it, t) in self.spec.ts().into_iter().enumerate() {
            for (ix, x) in xs.iter().enumerate() {
                let v = self.at(it, ix);
                let _ = writeln!(out, "{},{},{},{}", fmt17(t), fmt17(*x), fmt17(v.re), fmt17(v.im));
            }
        }
        out
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_samples() {
        let spec: GridSpec = "0:1:3,-1:1:5".parse().unwrap();
        assert_eq!(spec.ts(), vec![0.0, 0.5, 1.0]);
        assert_eq!(spec.spacing(), (0.5, 0.5));
        let g = GridFunction::sample(spec, |t, x| Ok(Complex64::new(t + x, 0.0))).unwrap();
        assert_eq!(g.eval(0.5, 0.5).unwrap().re, 1.0);
        assert!(g.eval(0.25, 0.0).is_err());
        assert!(g.to_csv().starts_with("t,x,re,im\n0.0000000000000000e0,-1.0000000000000000e0,"));
    }

    #[test]
    fn rejects_malformed() {
        assert!("0:1,0:1:3".parse::<GridSpec>().is_err());
        assert!("1:0:3,0:1:3".parse::<GridSpec>().is_err());
    }
}
