use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{add_prec, sub_prec, Agreement, EXACT};
use crate::coeff::{Cq, QParam};
use crate::error::{Error, Result};

/// f(z) = Σ c_k z^k, exact for k ≤ trunc.
#[derive(Clone, Debug, PartialEq)]
pub struct Series1 {
    c: Vec<Cq>,
    trunc: i64,
}

impl Series1 {
    /// Coefficients beyond `trunc` are dropped, missing ones are zero.
    pub fn new(mut c: Vec<Cq>, trunc: i64) -> Series1 {
        if trunc == EXACT {
            while c.last().is_some_and(|x| x.is_zero()) {
                c.pop();
            }
        } else {
            c.resize((trunc + 1).max(0) as usize, Cq::zero());
        }
        Series1 { c, trunc }
    }

    pub fn poly(c: Vec<Cq>) -> Series1 {
        Series1::new(c, EXACT)
    }

    pub fn zero(trunc: i64) -> Series1 {
        Series1::new(vec![], trunc)
    }

    pub fn constant(a: Cq, trunc: i64) -> Series1 {
        Series1::new(vec![a], trunc)
    }

    pub fn monomial(k: usize, a: Cq, trunc: i64) -> Series1 {
        let mut c = vec![Cq::zero(); k + 1];
        c[k] = a;
        Series1::new(c, trunc)
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT
    }

    /// Stored coefficients (all known ones for a truncated series).
    pub fn coeffs(&self) -> &[Cq] {
        &self.c
    }

    /// Coefficient of z^k. Panics if k lies above the precision.
    pub fn coeff(&self, k: usize) -> Cq {
        assert!((k as i64) <= self.trunc, "coefficient {} above precision {}", k, self.trunc);
        self.c.get(k).cloned().unwrap_or_else(Cq::zero)
    }

    pub(crate) fn get(&self, k: usize) -> Option<&Cq> {
        self.c.get(k)
    }

    /// Index one past the last stored coefficient.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Lowest degree with a nonzero coefficient; trunc+1 if none is known
    /// to be nonzero, EXACT for the zero polynomial.
    pub fn ord(&self) -> i64 {
        match self.c.iter().position(|x| !x.is_zero()) {
            Some(k) => k as i64,
            None if self.trunc == EXACT => EXACT,
            None => self.trunc + 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Lower the precision to `n` (no-op if already lower).
    pub fn truncate(&self, n: i64) -> Series1 {
        if n >= self.trunc {
            return self.clone();
        }
        Series1::new(self.c.clone(), n)
    }

    pub fn add(&self, o: &Series1) -> Series1 {
        let t = self.trunc.min(o.trunc);
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|k| match (self.c.get(k), o.c.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Cq::zero(),
            })
            .collect();
        Series1::new(c, t)
    }

    pub fn neg(&self) -> Series1 {
        Series1 { c: self.c.iter().map(|x| -x).collect(), trunc: self.trunc }
    }

    pub fn sub(&self, o: &Series1) -> Series1 {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &Cq) -> Series1 {
        Series1::new(self.c.iter().map(|x| x * a).collect(), self.trunc)
    }

    /// Precision min(N₁ + ord g, N₂ + ord f).
    pub fn mul(&self, o: &Series1) -> Series1 {
        let t = add_prec(self.trunc, o.ord()).min(add_prec(o.trunc, self.ord()));
        let top = if t == EXACT {
            (self.c.len() + o.c.len()).saturating_sub(1)
        } else {
            (t + 1).max(0) as usize
        };
        let mut c = vec![Cq::zero(); top];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() || i >= top {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= top {
                    break;
                }
                if !b.is_zero() {
                    c[i + j] += &(a * b);
                }
            }
        }
        Series1::new(c, t)
    }

    /// z^k · f, precision N + k.
    pub fn shift_up(&self, k: usize) -> Series1 {
        let mut c = vec![Cq::zero(); k];
        c.extend(self.c.iter().cloned());
        Series1::new(c, add_prec(self.trunc, k as i64))
    }

    pub fn eval0(&self) -> Cq {
        self.coeff(0)
    }

    /// f′(0).
    pub fn deriv0(&self) -> Cq {
        self.coeff(1)
    }

    /// (f(z) − f(0))/z, precision N − 1.
    pub fn diff_quot(&self) -> Series1 {
        let c = self.c.iter().skip(1).cloned().collect();
        Series1::new(c, sub_prec(self.trunc, 1))
    }

    /// f(a·z).
    pub fn dilate(&self, a: &Cq) -> Series1 {
        let mut p = Cq::one();
        let mut c = Vec::with_capacity(self.c.len());
        for x in &self.c {
            c.push(x * &p);
            p = &p * a;
        }
        Series1::new(c, self.trunc)
    }

    /// The translation Δ_q: f(z) ↦ f(qz).
    pub fn translate_q(&self, q: &QParam) -> Series1 {
        self.dilate(q.value())
    }

    /// P_d: drop the terms of degree < d.
    pub fn project(&self, d: usize) -> Series1 {
        let mut c = self.c.clone();
        for x in c.iter_mut().take(d) {
            *x = Cq::zero();
        }
        Series1::new(c, self.trunc)
    }

    /// z^{-d} f for f vanishing to order d; precision N − d.
    pub fn divide_by_var(&self, d: usize) -> Result<Series1> {
        if let Some(k) = self.c.iter().take(d).position(|x| !x.is_zero()) {
            return Err(Error::Precondition(format!(
                "not in O({}): coefficient of z^{} is {}",
                d, k, self.c[k]
            )));
        }
        if self.trunc != EXACT && (d as i64) > self.trunc + 1 {
            return Err(Error::Precondition(format!(
                "cannot divide by z^{} at precision {}",
                d, self.trunc
            )));
        }
        let c = self.c.iter().skip(d).cloned().collect();
        Ok(Series1::new(c, sub_prec(self.trunc, d as i64)))
    }

    /// Compare on the common window.
    pub fn agree(&self, o: &Series1) -> Agreement {
        let w = self.trunc.min(o.trunc);
        let mut a = Agreement { window: w, mismatch: None, defect: 0.0 };
        let n = self.c.len().max(o.c.len());
        for k in 0..n {
            if (k as i64) > w {
                break;
            }
            let x = self.c.get(k).cloned().unwrap_or_else(Cq::zero);
            let y = o.c.get(k).cloned().unwrap_or_else(Cq::zero);
            a.record((k, 0), &(&x - &y));
        }
        a
    }

    /// Zero on its own window.
    pub fn vanishes(&self) -> Agreement {
        self.agree(&Series1::zero(EXACT))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    trunc: Option<i64>,
    coeffs: Vec<Cq>,
}

impl Serialize for Series1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            trunc: if self.is_exact() { None } else { Some(self.trunc) },
            coeffs: self.c.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series1 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Series1, D::Error> {
        let w = Wire::deserialize(d)?;
        Ok(Series1::new(w.coeffs, w.trunc.unwrap_or(EXACT)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_q;

    fn s(c: &[i64], t: i64) -> Series1 {
        Series1::new(c.iter().map(|&x| Cq::int(x)).collect(), t)
    }

    #[test]
    fn projection_examples() {
        // z³ + z → z³
        assert_eq!(s(&[0, 1, 0, 1], 5).project(2), s(&[0, 0, 0, 1], 5));
        let f = s(&[3, -1, 4, 1, 5], 6);
        assert_eq!(f.project(0), f);
        assert!(s(&[1, 1, 1], 6).project(3).is_zero());
        // idempotent, kernel spanned by low monomials
        assert_eq!(f.project(2).project(2), f.project(2));
        assert_eq!(f.sub(&f.project(2)), s(&[3, -1], 6));
    }

    #[test]
    fn translation_commutes_with_projection() {
        let q = make_q(Cq::rat(1, 3)).unwrap();
        assert_eq!(s(&[0, 0, 1], 4).translate_q(&q), Series1::monomial(2, Cq::rat(1, 9), 4));
        assert_eq!(s(&[1], 4).translate_q(&q), s(&[1], 4));
        let f = s(&[1, 1], 4);
        assert_eq!(f.project(1).translate_q(&q), f.translate_q(&q).project(1));
        assert_eq!(f.project(1).translate_q(&q), Series1::monomial(1, Cq::rat(1, 3), 4));
        let r = make_q(Cq::rat(2, 5)).unwrap();
        let g = s(&[2, -3, 7, 1], 5);
        let qr = make_q(Cq::rat(2, 15)).unwrap();
        assert_eq!(g.translate_q(&q).translate_q(&r), g.translate_q(&qr));
    }

    #[test]
    fn division_by_powers() {
        let f = s(&[0, 0, 1, 1], 6);
        let r = f.divide_by_var(1).unwrap();
        assert_eq!(r, s(&[0, 1, 1], 5));
        assert_eq!(f.divide_by_var(0).unwrap(), f);
        let e = s(&[0, 1], 6).divide_by_var(2).unwrap_err();
        assert!(e.to_string().contains("not in O(2)"));
        let g = s(&[4, -2, 9], 7);
        for d in 0..4 {
            assert_eq!(g.shift_up(d).divide_by_var(d).unwrap(), g);
        }
    }

    #[test]
    fn product_precision() {
        let f = s(&[1, 2, 3], 4);
        let z2 = Series1::poly(vec![Cq::zero(), Cq::zero(), Cq::one()]);
        let p = f.mul(&z2);
        assert_eq!(p.trunc(), 6);
        assert_eq!(p, f.shift_up(2));
        let g = s(&[0, 1], 3);
        assert_eq!(f.mul(&g).trunc(), 3);
        let prod = s(&[1, 1], EXACT).mul(&s(&[1, -1], EXACT));
        assert_eq!(prod, s(&[1, 0, -1], EXACT));
    }

    #[test]
    fn difference_quotient() {
        let f = s(&[5, 1, 2], 4);
        let dq = f.diff_quot();
        assert_eq!(dq.trunc(), 3);
        assert_eq!(dq.shift_up(1).add(&Series1::constant(f.eval0(), EXACT)), f);
    }

    #[test]
    fn agreement_window() {
        let a = s(&[1, 2, 3], 2);
        let b = s(&[1, 2, 3, 4], 5);
        let g = a.agree(&b);
        assert!(g.holds());
        assert_eq!(g.window, 2);
        let c = s(&[1, 0, 3], 5);
        assert_eq!(a.agree(&c).mismatch, Some((1, 0)));
    }

    #[test]
    fn json_round_trip() {
        let f = s(&[1, 2], 3);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["trunc"], 3);
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
        let back: Series1 = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
