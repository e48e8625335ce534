//! Dense matrices over either backend, with rank by pivoted elimination.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeff::{Cf, Cq, Field, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Matrix<F> {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix<F> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Matrix<F>> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[F]>::to_vec).collect()
    }

    fn zip(&self, o: &Matrix<F>, f: impl Fn(&F, &F) -> F) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Matrix<F>) -> Matrix<F> {
        self.zip(o, F::add)
    }

    pub fn sub(&self, o: &Matrix<F>) -> Matrix<F> {
        self.zip(o, F::sub)
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut m = Matrix::<F>::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m.get(i, j).add(&a.mul(o.get(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// [A B] side by side.
    pub fn hcat(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, o.rows);
        let mut m = Matrix::<F>::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    /// [A; B] stacked.
    pub fn vcat(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Row echelon form by elimination with largest-magnitude pivots.
    /// Returns the rank and the pivot magnitudes in the order chosen.
    fn eliminate(&self) -> (usize, Vec<f64>, f64) {
        let mut a = self.clone();
        let mut rank = 0;
        let mut pivots = vec![];
        // largest entry left below the tolerance, for conditioning reports
        let mut residual: f64 = 0.0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for r in rank..a.rows {
                let v = a.get(r, col);
                if v.is_zero() {
                    residual = residual.max(v.magnitude());
                    continue;
                }
                let m = v.magnitude();
                if best.is_none_or(|(_, bm)| m > bm) {
                    best = Some((r, m));
                }
            }
            let Some((p, pm)) = best else { continue };
            for j in 0..a.cols {
                a.data.swap(rank * a.cols + j, p * a.cols + j);
            }
            pivots.push(pm);
            let piv = a.get(rank, col).clone();
            for r in rank + 1..a.rows {
                let f = a.get(r, col).div(&piv);
                if f.is_zero() && a.get(r, col).is_zero() {
                    continue;
                }
                for j in col..a.cols {
                    let v = a.get(r, j).sub(&f.mul(a.get(rank, j)));
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        (rank, pivots, residual)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.hcat(&Matrix::identity(n));
        for col in 0..n {
            let p = (col..n).filter(|&r| !a.get(r, col).is_zero()).max_by(|&x, &y| {
                a.get(x, col).magnitude().partial_cmp(&a.get(y, col).magnitude()).unwrap()
            })?;
            for j in 0..2 * n {
                a.data.swap(col * 2 * n + j, p * 2 * n + j);
            }
            let piv = a.get(col, col).clone();
            for j in 0..2 * n {
                let v = a.get(col, j).div(&piv);
                a.set(col, j, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let v = a.get(r, j).sub(&f.mul(a.get(col, j)));
                    a.set(r, j, v);
                }
            }
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, a.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Rank together with a conditioning flag: for the float backend, set when
/// a pivot or a discarded entry lies within three decades of the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    pub ill_conditioned: bool,
}

pub fn rank_exact(m: &Matrix<Cq>) -> RankInfo {
    RankInfo { rank: m.rank(), ill_conditioned: false }
}

pub fn rank_float(m: &Matrix<Cf>, tol: f64) -> RankInfo {
    let m = m.map(|c| c.with_tol(tol));
    let (rank, pivots, residual) = m.eliminate();
    let near = |x: f64| x > tol * 1e-3 && x < tol * 1e3;
    RankInfo { rank, ill_conditioned: pivots.iter().any(|&p| near(p)) || near(residual) }
}

impl Matrix<Cq> {
    pub fn to_float(&self) -> Matrix<Cf> {
        self.map(Cq::to_cf)
    }

    /// Coefficients c₀..c_n of det(t·I − A), lowest first, by the
    /// Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Cq> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![Cq::zero(); n + 1];
        c[n] = Cq::one();
        let mut m = Matrix::<Cq>::zeros(n, n);
        let id = Matrix::<Cq>::identity(n);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale(&c[n + 1 - k]));
            let am = self.mul(&m);
            let tr = (0..n).fold(Cq::zero(), |s, i| &s + am.get(i, i));
            c[n - k] = (-&tr).scale(&Q::new(1, k as i64));
        }
        c
    }

    /// Eigenvalues that are Gaussian rationals, found by rounding numerical
    /// roots to nearby fractions and confirming exactly, plus numerical
    /// approximations of the rest.
    pub fn eigenvalues(&self) -> (Vec<Cq>, Vec<Cf>) {
        let p = self.char_poly();
        let approx = poly_roots(&p.iter().map(Cq::to_cf).collect::<Vec<_>>());
        let mut exact: Vec<Cq> = vec![];
        let mut rest = vec![];
        for r in approx {
            let guess = Cq::new(rationalize(r.re), rationalize(r.im));
            if poly_eval(&p, &guess).is_zero() {
                if !exact.contains(&guess) {
                    exact.push(guess);
                }
            } else {
                rest.push(r);
            }
        }
        (exact, rest)
    }
}

pub fn poly_eval(p: &[Cq], z: &Cq) -> Cq {
    p.iter().rev().fold(Cq::zero(), |acc, c| &(&acc * z) + c)
}

/// Roots of a monic-able polynomial (lowest coefficient first) by the
/// Weierstrass iteration.
pub fn poly_roots(p: &[Cf]) -> Vec<Cf> {
    let deg = p.iter().rposition(|c| c.abs() > 0.0).unwrap_or(0);
    if deg == 0 {
        return vec![];
    }
    let lead = p[deg];
    let a: Vec<Cf> = p[..=deg].iter().map(|c| Field::div(c, &lead)).collect();
    let eval = |z: &Cf| a.iter().rev().fold(Cf::new(0.0, 0.0), |acc, c| Field::add(&Field::mul(&acc, z), c));
    let seed = Cf::new(0.4, 0.9);
    let mut z: Vec<Cf> = (0..deg).map(|k| pow_cf(&seed, k)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut den = Cf::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den = Field::mul(&den, &Cf::new(z[i].re - z[j].re, z[i].im - z[j].im));
                }
            }
            let step = Field::div(&eval(&z[i]), &den);
            z[i] = Cf::new(z[i].re - step.re, z[i].im - step.im);
            delta = delta.max(step.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

fn pow_cf(z: &Cf, k: usize) -> Cf {
    (0..k).fold(Cf::new(1.0, 0.0), |acc, _| Field::mul(&acc, z))
}

/// Nearest fraction with denominator ≤ 10⁶ by continued fractions.
pub fn rationalize(x: f64) -> Q {
    if !x.is_finite() {
        return Q::zero();
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.saturating_mul(h1).saturating_add(h0), a.saturating_mul(k1).saturating_add(k0));
        if k2 > 1_000_000 || k2 <= 0 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = r - a as f64;
        if f.abs() < 1e-12 || ((h1 as f64) / (k1 as f64) - x).abs() < 1e-13 {
            break;
        }
        r = 1.0 / f;
    }
    if k1 == 0 {
        Q::zero()
    } else {
        Q::new(h1, k1)
    }
}

impl Serialize for Matrix<Cq> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix<Cq> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Cq>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
