use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{add_prec, sub_prec, Agreement, Series1, EXACT};
use crate::coeff::Cq;
use crate::error::{Error, Result};

/// h(u,v) = Σ c_{ij} u^i v^j with total-degree precision: c_{ij} is exact
/// whenever i + j ≤ trunc.
///
/// Storage is a dense (D+1)×(D+1) block, D the precision (or the total
/// degree of a polynomial); entries with i + j > D are always zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Series2 {
    side: usize,
    c: Vec<Cq>,
    trunc: i64,
}

impl Series2 {
    /// Build from a coefficient function evaluated for i + j ≤ `bound`.
    pub fn from_fn(trunc: i64, bound: usize, mut f: impl FnMut(usize, usize) -> Cq) -> Series2 {
        let bound = if trunc == EXACT { bound } else { (trunc.max(-1) + 1) as usize };
        let bound = if trunc == EXACT { bound + 1 } else { bound };
        let mut c = vec![Cq::zero(); bound * bound];
        for i in 0..bound {
            for j in 0..bound - i {
                c[i * bound + j] = f(i, j);
            }
        }
        Series2 { side: bound, c, trunc }.normalized()
    }

    fn normalized(self) -> Series2 {
        if self.trunc != EXACT {
            return self;
        }
        let mut deg: Option<usize> = None;
        for i in 0..self.side {
            for j in 0..self.side - i {
                if !self.c[i * self.side + j].is_zero() {
                    deg = Some(deg.map_or(i + j, |d| d.max(i + j)));
                }
            }
        }
        let side = deg.map_or(0, |d| d + 1);
        if side == self.side {
            return self;
        }
        let mut c = vec![Cq::zero(); side * side];
        for i in 0..side {
            for j in 0..side - i {
                c[i * side + j] = self.c[i * self.side + j].clone();
            }
        }
        Series2 { side, c, trunc: EXACT }
    }

    /// From a list of (i, j, coefficient) terms.
    pub fn from_terms(terms: &[(usize, usize, Cq)], trunc: i64) -> Series2 {
        let bound = terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0);
        Series2::from_fn(trunc, bound, |i, j| {
            let mut acc = Cq::zero();
            for (a, b, x) in terms {
                if *a == i && *b == j {
                    acc += x;
                }
            }
            acc
        })
    }

    pub fn zero(trunc: i64) -> Series2 {
        Series2::from_fn(trunc, 0, |_, _| Cq::zero())
    }

    pub fn constant(a: Cq, trunc: i64) -> Series2 {
        Series2::from_fn(trunc, 0, |i, j| if i == 0 && j == 0 { a.clone() } else { Cq::zero() })
    }

    /// f(u) viewed as a function of both variables; precision that of f.
    pub fn from_u(f: &Series1) -> Series2 {
        let bound = f.len().saturating_sub(1);
        Series2::from_fn(f.trunc(), bound, |i, j| {
            if j == 0 {
                f.get(i).cloned().unwrap_or_else(Cq::zero)
            } else {
                Cq::zero()
            }
        })
    }

    /// g(v) viewed as a function of both variables.
    pub fn from_v(g: &Series1) -> Series2 {
        Series2::from_u(g).swap()
    }

    /// f(u)·g(v), precision min(N_f + ord g, N_g + ord f).
    pub fn outer(f: &Series1, g: &Series1) -> Series2 {
        let t = add_prec(f.trunc(), g.ord()).min(add_prec(g.trunc(), f.ord()));
        let bound = f.len() + g.len();
        Series2::from_fn(t, bound, |i, j| match (f.get(i), g.get(j)) {
            (Some(a), Some(b)) => a * b,
            _ => Cq::zero(),
        })
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT
    }

    /// Largest total degree stored.
    pub fn bound(&self) -> usize {
        self.side.saturating_sub(1)
    }

    fn at(&self, i: usize, j: usize) -> Option<&Cq> {
        if i + j < self.side {
            Some(&self.c[i * self.side + j])
        } else {
            None
        }
    }

    /// Coefficient of u^i v^j; zero past a polynomial's degree. Panics above
    /// the precision.
    pub fn coeff(&self, i: usize, j: usize) -> Cq {
        assert!(((i + j) as i64) <= self.trunc, "coefficient ({},{}) above precision {}", i, j, self.trunc);
        self.at(i, j).cloned().unwrap_or_else(Cq::zero)
    }

    /// Nonzero terms (i, j, c).
    pub fn terms(&self) -> Vec<(usize, usize, Cq)> {
        let mut out = vec![];
        for i in 0..self.side {
            for j in 0..self.side - i {
                let x = &self.c[i * self.side + j];
                if !x.is_zero() {
                    out.push((i, j, x.clone()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn ord(&self) -> i64 {
        let mut best: Option<usize> = None;
        for i in 0..self.side {
            for j in 0..self.side - i {
                if !self.c[i * self.side + j].is_zero() {
                    best = Some(best.map_or(i + j, |b| b.min(i + j)));
                }
            }
        }
        match best {
            Some(b) => b as i64,
            None if self.trunc == EXACT => EXACT,
            None => self.trunc + 1,
        }
    }

    pub fn truncate(&self, n: i64) -> Series2 {
        if n >= self.trunc {
            return self.clone();
        }
        Series2::from_fn(n, 0, |i, j| self.at(i, j).cloned().unwrap_or_else(Cq::zero))
    }

    fn zip(&self, o: &Series2, f: impl Fn(Option<&Cq>, Option<&Cq>) -> Cq) -> Series2 {
        let t = self.trunc.min(o.trunc);
        let bound = self.side.max(o.side);
        Series2::from_fn(t, bound, |i, j| f(self.at(i, j), o.at(i, j)))
    }

    pub fn add(&self, o: &Series2) -> Series2 {
        self.zip(o, |a, b| match (a, b) {
            (Some(a), Some(b)) => a + b,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => Cq::zero(),
        })
    }

    pub fn sub(&self, o: &Series2) -> Series2 {
        self.zip(o, |a, b| match (a, b) {
            (Some(a), Some(b)) => a - b,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => -b,
            (None, None) => Cq::zero(),
        })
    }

    pub fn neg(&self) -> Series2 {
        Series2 { side: self.side, c: self.c.iter().map(|x| -x).collect(), trunc: self.trunc }
    }

    pub fn scale(&self, a: &Cq) -> Series2 {
        if a.is_zero() {
            return Series2::zero(self.trunc);
        }
        Series2 { side: self.side, c: self.c.iter().map(|x| x * a).collect(), trunc: self.trunc }
    }

    /// Precision min(N₁ + ord g, N₂ + ord f) in total degree.
    pub fn mul(&self, o: &Series2) -> Series2 {
        let t = add_prec(self.trunc, o.ord()).min(add_prec(o.trunc, self.ord()));
        let top = if t == EXACT { self.side + o.side } else { (t + 1).max(0) as usize };
        let mut acc = vec![Cq::zero(); top * top];
        let a = self.terms();
        let b = o.terms();
        for (i, j, x) in &a {
            for (k, l, y) in &b {
                let (r, s) = (i + k, j + l);
                if r + s < top {
                    acc[r * top + s] += &(x * y);
                }
            }
        }
        Series2::from_fn(t, top.saturating_sub(1), |i, j| acc[i * top + j].clone())
    }

    /// Exchange the roles of the two variables.
    pub fn swap(&self) -> Series2 {
        Series2::from_fn(self.trunc, self.bound(), |i, j| self.at(j, i).cloned().unwrap_or_else(Cq::zero))
    }

    /// u^a v^b · h, precision N + a + b.
    pub fn shift(&self, a: usize, b: usize) -> Series2 {
        let t = add_prec(self.trunc, (a + b) as i64);
        Series2::from_fn(t, self.side + a + b, |i, j| {
            if i >= a && j >= b {
                self.at(i - a, j - b).cloned().unwrap_or_else(Cq::zero)
            } else {
                Cq::zero()
            }
        })
    }

    pub fn mul_u(&self) -> Series2 {
        self.shift(1, 0)
    }

    pub fn mul_v(&self) -> Series2 {
        self.shift(0, 1)
    }

    /// h(0, v) as a series in v.
    pub fn eval_u0(&self) -> Series1 {
        Series1::new((0..self.side).map(|j| self.c[j].clone()).collect(), self.trunc)
    }

    /// h(u, 0) as a series in u.
    pub fn eval_v0(&self) -> Series1 {
        Series1::new((0..self.side).map(|i| self.c[i * self.side].clone()).collect(), self.trunc)
    }

    pub fn eval00(&self) -> Cq {
        self.coeff(0, 0)
    }

    /// ∂h/∂u at u = 0, as a series in v; precision N − 1.
    pub fn du_at_u0(&self) -> Series1 {
        let n = self.side.saturating_sub(1);
        Series1::new((0..n).map(|j| self.c[self.side + j].clone()).collect(), sub_prec(self.trunc, 1))
    }

    /// ∂h/∂v at v = 0, as a series in u; precision N − 1.
    pub fn dv_at_v0(&self) -> Series1 {
        let n = self.side.saturating_sub(1);
        Series1::new((0..n).map(|i| self.c[i * self.side + 1].clone()).collect(), sub_prec(self.trunc, 1))
    }

    /// h_u = (h(u,v) − h(0,v))/u, precision N − 1.
    pub fn diff_quot_u(&self) -> Series2 {
        Series2::from_fn(sub_prec(self.trunc, 1), self.bound(), |i, j| {
            self.at(i + 1, j).cloned().unwrap_or_else(Cq::zero)
        })
    }

    /// h_v = (h(u,v) − h(u,0))/v, precision N − 1.
    pub fn diff_quot_v(&self) -> Series2 {
        Series2::from_fn(sub_prec(self.trunc, 1), self.bound(), |i, j| {
            self.at(i, j + 1).cloned().unwrap_or_else(Cq::zero)
        })
    }

    /// h(a·u, b·v).
    pub fn dilate(&self, a: &Cq, b: &Cq) -> Series2 {
        let pa = powers(a, self.side);
        let pb = powers(b, self.side);
        Series2::from_fn(self.trunc, self.bound(), |i, j| {
            match self.at(i, j) {
                Some(x) if !x.is_zero() => &(x * &pa[i]) * &pb[j],
                _ => Cq::zero(),
            }
        })
    }

    /// h(u, c·u) as a series in u; precision N.
    pub fn on_line_v(&self, c: &Cq) -> Series1 {
        let pc = powers(c, self.side);
        let mut out = vec![Cq::zero(); self.side];
        for i in 0..self.side {
            for j in 0..self.side - i {
                let x = &self.c[i * self.side + j];
                if !x.is_zero() {
                    out[i + j] += &(x * &pc[j]);
                }
            }
        }
        Series1::new(out, self.trunc)
    }

    /// h(c·v, v) as a series in v; precision N.
    pub fn on_line_u(&self, c: &Cq) -> Series1 {
        self.swap().on_line_v(c)
    }

    /// Exact division by the linear form a·u + b·v, precision N − 1.
    ///
    /// Works degree by degree: each homogeneous part h_k is divided by the
    /// form with synthetic division, and the remainder must vanish.
    pub fn divide_linear(&self, a: &Cq, b: &Cq) -> Result<Series2> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::Precondition("division by the zero form".into()));
            }
            return Ok(self.swap().divide_linear(&Cq::zero(), a)?.swap());
        }
        // h = (a u + b v) r, r_k homogeneous; solve from the top power of v down.
        let t = sub_prec(self.trunc, 1);
        let top = self.side; // degrees 0..side-1
        let binv = b.inv();
        let mut r = vec![Cq::zero(); top * top];
        for k in 0..top {
            // coefficient of u^{k-j} v^j in h: sum over contributions
            //   b · r_{k-j, j-1} + a · r_{k-j-1, j}
            // so r_{k-j, j-1} = (h_{k-j,j} − a r_{k-j-1,j}) / b for j = k..1.
            if k == 0 {
                let h00 = &self.c[0];
                if !h00.is_zero() {
                    return Err(Error::Precondition(format!(
                        "not divisible by the linear form: constant term {}",
                        h00
                    )));
                }
                continue;
            }
            for j in (1..=k).rev() {
                let i = k - j;
                let mut x = self.c[i * top + j].clone();
                if j <= k - 1 && i >= 1 {
                    // r_{i-1, j} already solved (higher j in the same degree)
                    let prev = &r[(i - 1) * top + j];
                    x = &x - &(a * prev);
                }
                r[i * top + (j - 1)] = &x * &binv;
            }
            // remaining equation at j = 0: h_{k,0} = a · r_{k-1,0}
            let lhs = &self.c[k * top];
            let rhs = a * &r[(k - 1) * top];
            if *lhs != rhs {
                return Err(Error::Precondition(format!(
                    "not divisible by the linear form in degree {}",
                    k
                )));
            }
        }
        let side = top.saturating_sub(1).max(1);
        Ok(Series2::from_fn(t, side, |i, j| {
            if i < top && j < top {
                r[i * top + j].clone()
            } else {
                Cq::zero()
            }
        }))
    }

    /// h / (v − u) for h vanishing on the diagonal.
    pub fn divide_diagonal(&self) -> Result<Series2> {
        self.divide_linear(&Cq::int(-1), &Cq::one()).map_err(|_| {
            Error::Precondition("not diagonal-divisible: h(t,t) does not vanish".into())
        })
    }

    /// (h(u,0), h(0,v), h_uv) with h = h(u,0) + h(0,v) + uv·h_uv; needs h(0,0) = 0.
    pub fn split(&self) -> Result<(Series1, Series1, Series2)> {
        let c0 = self.eval00();
        if !c0.is_zero() {
            return Err(Error::Precondition(format!("split needs h(0,0) = 0, found {}", c0)));
        }
        Ok((self.eval_v0(), self.eval_u0(), self.diff_quot_u().diff_quot_v()))
    }

    pub fn agree(&self, o: &Series2) -> Agreement {
        let w = self.trunc.min(o.trunc);
        let mut ag = Agreement { window: w, mismatch: None, defect: 0.0 };
        let side = self.side.max(o.side);
        for i in 0..side {
            for j in 0..side - i {
                if ((i + j) as i64) > w {
                    continue;
                }
                let x = self.at(i, j).cloned().unwrap_or_else(Cq::zero);
                let y = o.at(i, j).cloned().unwrap_or_else(Cq::zero);
                ag.record((i, j), &(&x - &y));
            }
        }
        ag
    }

    pub fn vanishes(&self) -> Agreement {
        self.agree(&Series2::zero(EXACT))
    }
}

fn powers(a: &Cq, n: usize) -> Vec<Cq> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = Cq::one();
    for _ in 0..=n {
        out.push(p.clone());
        p = &p * a;
    }
    out
}

#[derive(Serialize, Deserialize)]
struct Wire {
    trunc: Option<i64>,
    coeffs: Vec<Vec<Cq>>,
}

/// Serialized as {"trunc": N, "coeffs": [[...]]}, row i holding the
/// coefficients of u^i v^0, u^i v^1, ... up to total degree N.
impl Serialize for Series2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.side)
            .map(|i| (0..self.side - i).map(|j| self.c[i * self.side + j].clone()).collect())
            .collect();
        Wire { trunc: if self.is_exact() { None } else { Some(self.trunc) }, coeffs: rows }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Series2, D::Error> {
        let w = Wire::deserialize(d)?;
        let bound = w.coeffs.iter().enumerate().map(|(i, r)| i + r.len()).max().unwrap_or(0);
        Ok(Series2::from_fn(w.trunc.unwrap_or(EXACT), bound, |i, j| {
            w.coeffs.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Cq::zero)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(terms: &[(usize, usize, i64)], n: i64) -> Series2 {
        let v: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, Cq::int(c))).collect();
        Series2::from_terms(&v, n)
    }

    #[test]
    fn difference_quotients() {
        // θ = zw + z² → θ_z = w + z
        let th = t(&[(1, 1, 1), (2, 0, 1)], 6);
        assert!(th.diff_quot_u().agree(&t(&[(0, 1, 1), (1, 0, 1)], 5)).holds());
        assert!(t(&[(0, 2, 1)], 6).diff_quot_u().vanishes().holds());
        let h = t(&[(2, 1, 1)], 6);
        assert!(h.diff_quot_u().agree(&t(&[(1, 1, 1)], 5)).holds());
        assert!(h.diff_quot_u().diff_quot_v().agree(&t(&[(1, 0, 1)], 4)).holds());
        // u·h_u + h(0,v) = h
        let g = t(&[(0, 0, 3), (0, 2, -1), (1, 3, 2), (4, 0, 5)], 7);
        let back = g.diff_quot_u().mul_u().add(&Series2::from_v(&g.eval_u0()));
        let ag = back.agree(&g);
        assert!(ag.holds());
        assert_eq!(ag.window, 7);
    }

    #[test]
    fn split_examples() {
        let (a, b, c) = t(&[(1, 0, 1), (0, 1, 1), (1, 1, 1)], 5).split().unwrap();
        assert_eq!(a.coeffs()[1], Cq::one());
        assert_eq!(b.coeffs()[1], Cq::one());
        assert!(c.agree(&Series2::constant(Cq::one(), EXACT)).holds());
        let (a, b, c) = t(&[(2, 2, 1)], 6).split().unwrap();
        assert!(a.is_zero() && b.is_zero());
        assert!(c.agree(&t(&[(1, 1, 1)], EXACT)).holds());
        assert!(t(&[(1, 0, 1), (0, 0, 1)], 5).split().is_err());
    }

    #[test]
    fn split_reassembles() {
        let z = t(&[(1, 0, 2), (0, 3, -1), (2, 2, 7), (1, 4, 1)], 8);
        let (a, b, c) = z.split().unwrap();
        let back = Series2::from_u(&a).add(&Series2::from_v(&b)).add(&c.shift(1, 1));
        assert!(back.agree(&z).holds());
        assert_eq!(back.trunc(), 8);
    }

    #[test]
    fn diagonal_division() {
        let h = t(&[(0, 1, 1), (1, 0, -1)], 6);
        assert!(h.divide_diagonal().unwrap().agree(&Series2::constant(Cq::one(), EXACT)).holds());
        let h = t(&[(0, 2, 1), (2, 0, -1)], 6);
        assert!(h.divide_diagonal().unwrap().agree(&t(&[(0, 1, 1), (1, 0, 1)], EXACT)).holds());
        assert!(t(&[(1, 1, 1)], 6).divide_diagonal().is_err());
    }

    #[test]
    fn linear_division_inverts_multiplication() {
        let f = t(&[(0, 0, 2), (1, 2, -3), (3, 1, 1), (0, 4, 5)], 6);
        for (a, b) in [(Cq::int(-1), Cq::one()), (Cq::rat(-1, 4), Cq::one()), (Cq::one(), Cq::zero()), (Cq::one(), Cq::rat(-3, 2))] {
            let form = Series2::from_terms(&[(1, 0, a.clone()), (0, 1, b.clone())], EXACT);
            let h = form.mul(&f);
            assert_eq!(h.trunc(), 7);
            let r = h.divide_linear(&a, &b).unwrap();
            let ag = r.agree(&f);
            assert!(ag.holds());
            assert_eq!(ag.window, 6);
        }
    }

    #[test]
    fn on_line_substitution() {
        // h = u² + uv at v = c u → (1 + c) u²
        let h = t(&[(2, 0, 1), (1, 1, 1)], 5);
        let c = Cq::rat(1, 2);
        let s = h.on_line_v(&c);
        assert_eq!(s.coeffs()[2], Cq::rat(3, 2));
        assert_eq!(h.on_line_u(&c).coeffs()[2], Cq::rat(3, 4));
    }

    #[test]
    fn outer_precision_and_exact_product() {
        let f = Series1::new(vec![Cq::one(), Cq::int(2)], 4);
        let g = Series1::poly(vec![Cq::zero(), Cq::one()]);
        let o = Series2::outer(&f, &g);
        assert_eq!(o.trunc(), 5);
        assert_eq!(o.coeff(1, 1), Cq::int(2));
        let p = t(&[(1, 0, 1)], EXACT).mul(&t(&[(0, 1, 1)], EXACT));
        assert!(p.is_exact());
        assert_eq!(p.terms(), vec![(1, 1, Cq::one())]);
    }

    #[test]
    fn json_round_trip() {
        let h = t(&[(0, 0, 1), (2, 1, -2)], 4);
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v["trunc"], 4);
        let back: Series2 = serde_json::from_value(v).unwrap();
        assert_eq!(back, h);
    }
}
