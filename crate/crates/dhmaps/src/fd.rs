//! Central finite differences.
//!
//! Everything here is second order: the truncation error of a central
//! difference with step h is O(h²), which at the default h = 1e−4 sits
//! near 1e−8 for the fields this crate handles.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Default step for central differences.
pub const DEFAULT_STEP: f64 = 1e-4;

/// A validated finite-difference step in the open interval (1e−8, 1e−1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FdStep(f64);

impl FdStep {
    pub fn new(h: f64) -> Result<Self> {
        if h.is_finite() && h > 1e-8 && h < 1e-1 {
            Ok(FdStep(h))
        } else {
            Err(Error::InvalidStep(h))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for FdStep {
    fn default() -> Self {
        FdStep(DEFAULT_STEP)
    }
}

pub(crate) fn shifted(x: &[f64], dir: usize, delta: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[dir] += delta;
    y
}

/// (f(x + h e_dir) − f(x − h e_dir)) / 2h
pub fn central<T, F>(f: F, x: &[f64], dir: usize, h: f64) -> T
where
    F: Fn(&[f64]) -> T,
    T: Sub<Output = T> + Mul<f64, Output = T>,
{
    let plus = f(&shifted(x, dir, h));
    let minus = f(&shifted(x, dir, -h));
    (plus - minus) * (0.5 / h)
}

/// (f(x + h e_dir) − 2f(x) + f(x − h e_dir)) / h²
pub fn second<T, F>(f: F, x: &[f64], dir: usize, h: f64) -> T
where
    F: Fn(&[f64]) -> T,
    T: Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let plus = f(&shifted(x, dir, h));
    let minus = f(&shifted(x, dir, -h));
    let mid = f(x);
    (plus + minus - mid * 2.0) * (1.0 / (h * h))
}

/// Fallible variant of [`central`].
pub fn try_central<T, F>(f: F, x: &[f64], dir: usize, h: f64) -> Result<T>
where
    F: Fn(&[f64]) -> Result<T>,
    T: Sub<Output = T> + Mul<f64, Output = T>,
{
    let plus = f(&shifted(x, dir, h))?;
    let minus = f(&shifted(x, dir, -h))?;
    Ok((plus - minus) * (0.5 / h))
}
