use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, o.rows);
        let mut r = CMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..o.cols {
                    r.data[i * o.cols + j] += a * o[(k, j)];
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Complex64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> CMatrix {
        CMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `A = U diag(σ) V^H`, σ descending. `U` is rows×cols (columns with σ = 0 are zero),
/// `V` is cols×cols unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd_small(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = cols[p].iter().map(|x| x.norm_sqr()).sum::<f64>();
                let beta = cols[q].iter().map(|x| x.norm_sqr()).sum::<f64>();
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let ph = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for v in [&mut cols, &mut vcols] {
                    let len = v[p].len();
                    for i in 0..len {
                        let x = v[p][i];
                        let y = v[q][i] * ph.conj();
                        v[p][i] = c * x - s * y;
                        v[q][i] = (s * x + c * y) * ph;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols.iter().map(|c| norm(c)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let mut u = CMatrix::zeros(m, n);
    let mut v = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        for i in 0..m {
            u[(i, k)] = if s > 0.0 { cols[j][i] / s } else { Complex64::new(0.0, 0.0) };
        }
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }
    Svd { u, sigma, v }
}

/// Orthonormal basis (as columns) of the numerical null space `{x : Ax ≈ 0}`,
/// i.e. right singular vectors with `σ ≤ rel_tol · σ_max`.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> Vec<Vec<Complex64>> {
    let svd = svd_small(a);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    (0..a.cols)
        .filter(|&k| svd.sigma[k] <= rel_tol * smax)
        .map(|k| svd.v.column(k))
        .collect()
}

/// Right singular vector of the smallest singular value, with `σ_min/σ_max`.
pub fn null_vector(a: &CMatrix) -> (Vec<Complex64>, f64) {
    let svd = svd_small(a);
    let k = a.cols - 1;
    let smax = svd.sigma[0].max(f64::MIN_POSITIVE);
    (svd.v.column(k), svd.sigma[k] / smax)
}

/// Angle between `v` and the span of the orthonormal vectors `basis`.
pub fn subspace_angle(v: &[Complex64], basis: &[Vec<Complex64>]) -> f64 {
    let nv = norm(v);
    let mut r: Vec<Complex64> = v.to_vec();
    // two passes of Gram–Schmidt for stability
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &r) / dot(b, b);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
    }
    (norm(&r) / nv).min(1.0).asin()
}

/// Angle between the complex lines through `u` and `v`.
pub fn vector_angle(u: &[Complex64], v: &[Complex64]) -> f64 {
    subspace_angle(u, &[v.to_vec()])
}

/// Least-squares solution of `A x ≈ b` by the pseudoinverse with column scaling.
pub fn lstsq(a: &CMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let scale: Vec<f64> = (0..a.cols).map(|j| norm(&a.column(j)).max(f64::MIN_POSITIVE)).collect();
    let scaled = CMatrix::from_fn(a.rows, a.cols, |i, j| a[(i, j)] / scale[j]);
    let svd = svd_small(&scaled);
    let smax = svd.sigma[0];
    let mut x = vec![Complex64::new(0.0, 0.0); a.cols];
    for k in 0..a.cols {
        let s = svd.sigma[k];
        if s <= 1e-14 * smax {
            continue;
        }
        let uk = svd.u.column(k);
        let c = dot(&uk, b) / s;
        for j in 0..a.cols {
            x[j] += c * svd.v[(j, k)];
        }
    }
    x.iter().zip(&scale).map(|(xi, s)| xi / s).collect()
}
