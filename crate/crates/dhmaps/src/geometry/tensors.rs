use nalgebra::{DMatrix, DVector};

/// Christoffel symbols Γ^k_{ij} of a chart metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffels {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffels {
    pub fn zeros(dim: usize) -> Self {
        Christoffels {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Γ^k_{ij}
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    pub(crate) fn set(&mut self, k: usize, i: usize, j: usize, v: f64) {
        let d = self.dim;
        self.data[(k * d + i) * d + j] = v;
    }

    /// Contraction Γ^k_{ij} a^i b^j.
    pub fn contract(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        DVector::from_fn(d, |k, _| {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    s += self.get(k, i, j) * a[i] * b[j];
                }
            }
            s
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn axpy(&mut self, a: f64, other: &Christoffels) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }
}

/// Curvature coefficients R^i_{jkl}, with
/// R(∂_k, ∂_l)∂_j = R^i_{jkl} ∂_i.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannTensor {
    dim: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    pub fn zeros(dim: usize) -> Self {
        RiemannTensor {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    /// R^i_{jkl}
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.index(i, j, k, l)]
    }

    /// Sets R^i_{jkl} and R^i_{jlk} = −R^i_{jkl} together.
    pub(crate) fn set_pair(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let a = self.index(i, j, k, l);
        let b = self.index(i, j, l, k);
        self.data[a] = v;
        self.data[b] = -v;
    }

    /// R(X, Y)Z
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        DVector::from_fn(d, |i, _| {
            let mut s = 0.0;
            for j in 0..d {
                if z[j] == 0.0 {
                    continue;
                }
                for k in 0..d {
                    for l in 0..d {
                        s += self.get(i, j, k, l) * z[j] * x[k] * y[l];
                    }
                }
            }
            s
        })
    }

    /// R(ε_c, ε_d)ε_b for all frame columns ε, indexed (b·m + c)·m + d.
    /// Contracts one slot at a time instead of calling [`Self::apply`] m³ times.
    pub fn frame_components(&self, frame: &DMatrix<f64>) -> Vec<DVector<f64>> {
        let (d, m) = (self.dim, frame.ncols());
        // t1[((i·d + j)·d + k)·m + dd] = Σ_l R^i_{jkl} ε_dd^l
        let mut t1 = vec![0.0; d * d * d * m];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let r = self.get(i, j, k, l);
                        if r == 0.0 {
                            continue;
                        }
                        let base = ((i * d + j) * d + k) * m;
                        for dd in 0..m {
                            t1[base + dd] += r * frame[(l, dd)];
                        }
                    }
                }
            }
        }
        // t2[((i·d + j)·m + c)·m + dd] = Σ_k t1[i,j,k,dd] ε_c^k
        let mut t2 = vec![0.0; d * d * m * m];
        for ij in 0..d * d {
            for k in 0..d {
                for c in 0..m {
                    let f = frame[(k, c)];
                    if f == 0.0 {
                        continue;
                    }
                    for dd in 0..m {
                        t2[(ij * m + c) * m + dd] += f * t1[(ij * d + k) * m + dd];
                    }
                }
            }
        }
        let mut out = vec![DVector::zeros(d); m * m * m];
        for i in 0..d {
            for j in 0..d {
                for b in 0..m {
                    let f = frame[(j, b)];
                    if f == 0.0 {
                        continue;
                    }
                    for c in 0..m {
                        for dd in 0..m {
                            out[(b * m + c) * m + dd][i] += f * t2[((i * d + j) * m + c) * m + dd];
                        }
                    }
                }
            }
        }
        out
    }

    /// ⟨R(X,Y)Y, X⟩ / (|X|²|Y|² − ⟨X,Y⟩²) for the metric `g`.
    pub fn sectional(&self, g: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let r = self.apply(x, y, y);
        let num = (g * r).dot(x);
        let den = (g * x).dot(x) * (g * y).dot(y) - (g * x).dot(y).powi(2);
        num / den
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// R^i_{jkl} = c(δ^i_k g_{jl} − δ^i_l g_{jk}) for a metric `g`.
pub(crate) fn constant_curvature_with_metric(c: f64, g: &DMatrix<f64>) -> RiemannTensor {
    let d = g.nrows();
    let mut r = RiemannTensor::zeros(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in (k + 1)..d {
                    let dik = if i == k { 1.0 } else { 0.0 };
                    let dil = if i == l { 1.0 } else { 0.0 };
                    let v = c * (dik * g[(j, l)] - dil * g[(j, k)]);
                    r.set_pair(i, j, k, l, v);
                }
            }
        }
    }
    r
}

/// R^i_{jkl} = c(δ^i_k δ_{jl} − δ^i_l δ_{jk}) in an orthonormal frame.
pub fn constant_curvature_riemann(c: f64, dim: usize) -> RiemannTensor {
    constant_curvature_with_metric(c, &DMatrix::identity(dim, dim))
}
