//! The algebra ℂ_q[[x,y]] of ordered series Σ a_{ik} x^i y^k with the
//! relation y·x = q·x·y, truncated in total degree.
//!
//! Three independent product routines are kept on purpose: the direct
//! coefficient formula, the y-graded form Σ_n (Σ_{i+j=n} f_i(x) g_j(q^i x)) y^n
//! and the x-graded form Σ_n x^n Σ_{i+j=n} f_i(q^j y) g_j(y).

use serde::{Deserialize, Serialize};

use crate::coeff::{Cq, QParam};
use crate::error::{Error, Result};
use crate::series::{Series1, Series2};

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    q: QParam,
    trunc: usize,
    // coefficient of x^i y^k sits at (i, k)
    c: Series2,
}

impl QSeries {
    pub fn zero(q: &QParam, trunc: usize) -> QSeries {
        QSeries { q: q.clone(), trunc, c: Series2::zero(trunc as i64) }
    }

    pub fn from_terms(q: &QParam, trunc: usize, terms: &[(usize, usize, Cq)]) -> QSeries {
        let kept: Vec<_> = terms.iter().filter(|t| t.0 + t.1 <= trunc).cloned().collect();
        QSeries { q: q.clone(), trunc, c: Series2::from_terms(&kept, trunc as i64) }
    }

    pub fn from_fn(q: &QParam, trunc: usize, f: impl FnMut(usize, usize) -> Cq) -> QSeries {
        QSeries { q: q.clone(), trunc, c: Series2::from_fn(trunc as i64, trunc, f) }
    }

    pub fn one(q: &QParam, trunc: usize) -> QSeries {
        QSeries::monomial(q, trunc, 0, 0, Cq::one())
    }

    pub fn monomial(q: &QParam, trunc: usize, i: usize, k: usize, a: Cq) -> QSeries {
        QSeries::from_terms(q, trunc, &[(i, k, a)])
    }

    pub fn x(q: &QParam, trunc: usize) -> QSeries {
        QSeries::monomial(q, trunc, 1, 0, Cq::one())
    }

    pub fn y(q: &QParam, trunc: usize) -> QSeries {
        QSeries::monomial(q, trunc, 0, 1, Cq::one())
    }

    /// g(x) for a one-variable series g.
    pub fn in_x(q: &QParam, trunc: usize, g: &Series1) -> QSeries {
        QSeries::from_fn(q, trunc, |i, k| if k == 0 && i < g.len() { g.coeffs()[i].clone() } else { Cq::zero() })
    }

    /// g(y) for a one-variable series g.
    pub fn in_y(q: &QParam, trunc: usize, g: &Series1) -> QSeries {
        QSeries::from_fn(q, trunc, |i, k| if i == 0 && k < g.len() { g.coeffs()[k].clone() } else { Cq::zero() })
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, i: usize, k: usize) -> Cq {
        if i + k > self.trunc {
            return Cq::zero();
        }
        self.c.coeff(i, k)
    }

    pub fn terms(&self) -> Vec<(usize, usize, Cq)> {
        self.c.terms()
    }

    fn check_pair(&self, o: &QSeries) -> Result<()> {
        if self.q != o.q {
            return Err(Error::Usage(format!("mismatched q: {} vs {}", self.q, o.q)));
        }
        if self.trunc != o.trunc {
            return Err(Error::Usage(format!("mismatched trunc: {} vs {}", self.trunc, o.trunc)));
        }
        Ok(())
    }

    pub fn add(&self, o: &QSeries) -> Result<QSeries> {
        self.check_pair(o)?;
        Ok(QSeries { q: self.q.clone(), trunc: self.trunc, c: self.c.add(&o.c) })
    }

    pub fn sub(&self, o: &QSeries) -> Result<QSeries> {
        self.check_pair(o)?;
        Ok(QSeries { q: self.q.clone(), trunc: self.trunc, c: self.c.sub(&o.c) })
    }

    pub fn scale(&self, a: &Cq) -> QSeries {
        QSeries { q: self.q.clone(), trunc: self.trunc, c: self.c.scale(a) }
    }

    /// Coefficient of x^m y^n is Σ_{s+t=m, i+j=n} a_{si} q^{it} b_{tj}.
    pub fn qmul(&self, o: &QSeries) -> Result<QSeries> {
        self.check_pair(o)?;
        let n = self.trunc;
        // i + t ≤ m + k ≤ n bounds the exponent i·t by n²/4
        let qp = self.q.powers(n * n / 4 + 1);
        let a = self.terms();
        let b = o.terms();
        let mut acc = vec![Cq::zero(); (n + 1) * (n + 1)];
        for (s, i, x) in &a {
            for (t, j, y) in &b {
                let (m, k) = (s + t, i + j);
                if m + k > n {
                    continue;
                }
                let term = &(x * y) * &qp[i * t];
                acc[m * (n + 1) + k] += &term;
            }
        }
        Ok(QSeries::from_fn(&self.q, n, |m, k| acc[m * (n + 1) + k].clone()))
    }

    /// y-graded layers: f = Σ_k f_k(x) y^k, each f_k with precision N − k.
    fn y_layers(&self) -> Vec<Series1> {
        (0..=self.trunc)
            .map(|k| {
                let top = self.trunc - k;
                Series1::new((0..=top).map(|i| self.coeff(i, k)).collect(), top as i64)
            })
            .collect()
    }

    /// x-graded layers: f = Σ_i x^i f_i(y).
    fn x_layers(&self) -> Vec<Series1> {
        (0..=self.trunc)
            .map(|i| {
                let top = self.trunc - i;
                Series1::new((0..=top).map(|k| self.coeff(i, k)).collect(), top as i64)
            })
            .collect()
    }

    /// f·g = Σ_n (Σ_{i+j=n} f_i(x) g_j(q^i x)) y^n.
    pub fn qmul_left_form(&self, o: &QSeries) -> Result<QSeries> {
        self.check_pair(o)?;
        let n = self.trunc;
        let f = self.y_layers();
        let g = o.y_layers();
        let mut layers = vec![];
        for k in 0..=n {
            let mut acc = Series1::zero((n - k) as i64);
            for i in 0..=k {
                let j = k - i;
                let shifted = g[j].dilate(&self.q.pow(i as i64));
                acc = acc.add(&f[i].mul(&shifted));
            }
            layers.push(acc);
        }
        Ok(QSeries::from_fn(&self.q, n, |i, k| layers[k].coeff(i)))
    }

    /// f·g = Σ_n x^n Σ_{i+j=n} f_i(q^j y) g_j(y).
    pub fn qmul_right_form(&self, o: &QSeries) -> Result<QSeries> {
        self.check_pair(o)?;
        let n = self.trunc;
        let f = self.x_layers();
        let g = o.x_layers();
        let mut layers = vec![];
        for m in 0..=n {
            let mut acc = Series1::zero((n - m) as i64);
            for i in 0..=m {
                let j = m - i;
                let shifted = f[i].dilate(&self.q.pow(j as i64));
                acc = acc.add(&shifted.mul(&g[j]));
            }
            layers.push(acc);
        }
        Ok(QSeries::from_fn(&self.q, n, |i, k| layers[i].coeff(k)))
    }

    /// The character at the origin: the constant term.
    pub fn trivial_character(&self) -> Cq {
        self.coeff(0, 0)
    }

    /// Membership in the radical, the kernel of the trivial character.
    pub fn radical_test(&self) -> bool {
        self.trivial_character().is_zero()
    }

    /// Number of coefficients compared by an equality test.
    pub fn window(&self) -> usize {
        (self.trunc + 1) * (self.trunc + 2) / 2
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    q: QParam,
    trunc: usize,
    coeffs: Vec<(usize, usize, Cq)>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { q: self.q.clone(), trunc: self.trunc, coeffs: self.terms() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<QSeries, D::Error> {
        let w = Wire::deserialize(d)?;
        Ok(QSeries::from_terms(&w.q, w.trunc, &w.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_q;

    fn q() -> QParam {
        make_q(Cq::rat(2, 3)).unwrap()
    }

    #[test]
    fn generators_satisfy_the_plane_relation() {
        let q = q();
        let x = QSeries::x(&q, 6);
        let y = QSeries::y(&q, 6);
        let xy = QSeries::monomial(&q, 6, 1, 1, Cq::one());
        assert_eq!(x.qmul(&y).unwrap(), xy);
        assert_eq!(y.qmul(&x).unwrap(), xy.scale(q.value()));
        assert_eq!(y.qmul_left_form(&x).unwrap(), xy.scale(q.value()));
        assert_eq!(y.qmul_right_form(&x).unwrap(), xy.scale(q.value()));
    }

    #[test]
    fn no_crossing_in_ordered_products() {
        let q = q();
        let f = QSeries::monomial(&q, 6, 2, 0, Cq::one());
        let g = QSeries::monomial(&q, 6, 0, 3, Cq::one());
        assert_eq!(f.qmul_right_form(&g).unwrap(), QSeries::monomial(&q, 6, 2, 3, Cq::one()));
    }

    #[test]
    fn brute_force_associativity_on_monomials() {
        // (x y) y vs x (y y): both are x y² with no q-factor.
        let q = q();
        let x = QSeries::x(&q, 5);
        let y = QSeries::y(&q, 5);
        let l = x.qmul(&y).unwrap().qmul(&y).unwrap();
        let r = x.qmul(&y.qmul(&y).unwrap()).unwrap();
        assert_eq!(l, r);
        assert_eq!(l, QSeries::monomial(&q, 5, 1, 2, Cq::one()));
        // y x x = q² x² y by repeated use of y x = q x y
        let yxx = y.qmul(&x).unwrap().qmul(&x).unwrap();
        assert_eq!(yxx, QSeries::monomial(&q, 5, 2, 1, q.pow(2)));
    }

    #[test]
    fn unit_and_character() {
        let q = q();
        let f = QSeries::from_terms(&q, 4, &[(0, 0, Cq::int(3)), (1, 0, Cq::one()), (1, 1, Cq::one())]);
        assert_eq!(QSeries::one(&q, 4).qmul(&f).unwrap(), f);
        assert_eq!(f.trivial_character(), Cq::int(3));
        assert!(!f.radical_test());
        assert!(QSeries::x(&q, 4).radical_test());
        let g = QSeries::from_terms(&q, 4, &[(0, 0, Cq::int(-2)), (0, 2, Cq::one())]);
        assert_eq!(f.qmul(&g).unwrap().trivial_character(), Cq::int(-6));
        assert!(QSeries::x(&q, 4).qmul(&f).unwrap().radical_test());
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let a = QSeries::x(&q(), 4);
        let b = QSeries::x(&make_q(Cq::rat(1, 2)).unwrap(), 4);
        assert!(matches!(a.qmul(&b), Err(Error::Usage(_))));
        assert!(a.qmul(&QSeries::x(&q(), 5)).is_err());
    }

    #[test]
    fn json_is_a_sparse_triplet_list() {
        let q = q();
        let f = QSeries::from_terms(&q, 3, &[(1, 2, Cq::rat(1, 2))]);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["coeffs"][0][0], 1);
        assert_eq!(v["coeffs"][0][1], 2);
        let back: QSeries = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
