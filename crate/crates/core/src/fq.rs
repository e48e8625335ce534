//! Elements of the fibered product F_q: a y-graded side Σ F_n(z) y^n and an
//! x-graded side Σ x^n G_n(w), glued along the coefficient grid
//! [z^i]F_k = [w^k]G_i, i, k ≤ N.
//!
//! Layers are kept up to index N; each layer is a one-variable series with
//! its own precision, never below N. The grid ties the two sides together
//! only on the N×N window.

use serde::{Deserialize, Serialize};

use crate::coeff::{Cq, QParam};
use crate::error::{Error, Result};
use crate::graded::{GermPair, GradedElement, Generator};
use crate::series::{Agreement, Series1, EXACT};

#[derive(Clone, Debug, PartialEq)]
pub struct FqElement {
    q: QParam,
    trunc: usize,
    f: Vec<Series1>,
    g: Vec<Series1>,
}

impl FqElement {
    /// Validates layer counts, layer precision and the grid.
    pub fn new(q: &QParam, trunc: usize, f: Vec<Series1>, g: Vec<Series1>) -> Result<FqElement> {
        if f.len() != trunc + 1 || g.len() != trunc + 1 {
            return Err(Error::Validation(format!(
                "expected {} layers per side, found {} and {}",
                trunc + 1,
                f.len(),
                g.len()
            )));
        }
        for (side, layers) in [("F", &f), ("G", &g)] {
            if let Some((n, s)) = layers.iter().enumerate().find(|(_, s)| s.trunc() < trunc as i64) {
                return Err(Error::Validation(format!(
                    "layer {}_{} has precision {} below {}",
                    side,
                    n,
                    s.trunc(),
                    trunc
                )));
            }
        }
        let e = FqElement { q: q.clone(), trunc, f, g };
        if let Some((i, k)) = e.grid_defect() {
            return Err(Error::Validation(format!(
                "grid violated at (i,k) = ({},{}): [z^{}]F_{} = {} but [w^{}]G_{} = {}",
                i,
                k,
                i,
                k,
                e.f[k].coeff(i),
                k,
                i,
                e.g[i].coeff(k)
            )));
        }
        Ok(e)
    }

    fn unchecked(q: &QParam, trunc: usize, f: Vec<Series1>, g: Vec<Series1>) -> FqElement {
        FqElement { q: q.clone(), trunc, f, g }
    }

    /// First (i, k) with [z^i]F_k ≠ [w^k]G_i.
    pub fn grid_defect(&self) -> Option<(usize, usize)> {
        for k in 0..=self.trunc {
            for i in 0..=self.trunc {
                if self.f[k].coeff(i) != self.g[i].coeff(k) {
                    return Some((i, k));
                }
            }
        }
        None
    }

    pub fn zero(q: &QParam, trunc: usize) -> FqElement {
        let z = vec![Series1::zero(EXACT); trunc + 1];
        FqElement::unchecked(q, trunc, z.clone(), z)
    }

    /// c·x^a y^b: F_b = c z^a, G_a = c w^b.
    pub fn monomial(q: &QParam, trunc: usize, a: usize, b: usize, c: Cq) -> FqElement {
        let mut e = FqElement::zero(q, trunc);
        if a <= trunc && b <= trunc {
            e.f[b] = Series1::monomial(a, c.clone(), EXACT);
            e.g[a] = Series1::monomial(b, c, EXACT);
        }
        e
    }

    pub fn unit(q: &QParam, trunc: usize) -> FqElement {
        FqElement::monomial(q, trunc, 0, 0, Cq::one())
    }

    pub fn x(q: &QParam, trunc: usize) -> FqElement {
        FqElement::monomial(q, trunc, 1, 0, Cq::one())
    }

    pub fn y(q: &QParam, trunc: usize) -> FqElement {
        FqElement::monomial(q, trunc, 0, 1, Cq::one())
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn f_layers(&self) -> &[Series1] {
        &self.f
    }

    pub fn g_layers(&self) -> &[Series1] {
        &self.g
    }

    fn check_pair(&self, o: &FqElement) -> Result<()> {
        if self.q != o.q || self.trunc != o.trunc {
            return Err(Error::Usage(format!(
                "mismatched operands: (q, N) = ({}, {}) vs ({}, {})",
                self.q, self.trunc, o.q, o.trunc
            )));
        }
        Ok(())
    }

    fn zip(&self, o: &FqElement, op: impl Fn(&Series1, &Series1) -> Series1) -> FqElement {
        let f = self.f.iter().zip(&o.f).map(|(a, b)| op(a, b)).collect();
        let g = self.g.iter().zip(&o.g).map(|(a, b)| op(a, b)).collect();
        FqElement::unchecked(&self.q, self.trunc, f, g)
    }

    pub fn add(&self, o: &FqElement) -> Result<FqElement> {
        self.check_pair(o)?;
        Ok(self.zip(o, Series1::add))
    }

    pub fn sub(&self, o: &FqElement) -> Result<FqElement> {
        self.check_pair(o)?;
        Ok(self.zip(o, Series1::sub))
    }

    pub fn scale(&self, a: &Cq) -> FqElement {
        let f = self.f.iter().map(|s| s.scale(a)).collect();
        let g = self.g.iter().map(|s| s.scale(a)).collect();
        FqElement::unchecked(&self.q, self.trunc, f, g)
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().chain(&self.g).all(Series1::is_zero)
    }

    /// Layerwise comparison on the common windows.
    pub fn agree(&self, o: &FqElement) -> Agreement {
        let mut ag = Agreement::trivial();
        for (a, b) in self.f.iter().zip(&o.f).chain(self.g.iter().zip(&o.g)) {
            ag = ag.and(a.agree(b));
        }
        ag
    }

    /// F-side by Σ_{i+j=n} F_i(z) F'_j(q^i z), G-side by
    /// Σ_{i+j=n} G_i(q^j w) G'_j(w).
    pub fn mul(&self, o: &FqElement) -> Result<FqElement> {
        self.check_pair(o)?;
        let n = self.trunc;
        let qp = self.q.powers(n);
        let mut f = Vec::with_capacity(n + 1);
        let mut g = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut a = Series1::zero(EXACT);
            let mut b = Series1::zero(EXACT);
            for i in 0..=m {
                let j = m - i;
                if !self.f[i].is_zero() && !o.f[j].is_zero() {
                    a = a.add(&self.f[i].mul(&o.f[j].dilate(&qp[i])));
                } else {
                    a = a.add(&Series1::zero(self.f[i].trunc().min(o.f[j].trunc())));
                }
                if !self.g[i].is_zero() && !o.g[j].is_zero() {
                    b = b.add(&self.g[i].dilate(&qp[j]).mul(&o.g[j]));
                } else {
                    b = b.add(&Series1::zero(self.g[i].trunc().min(o.g[j].trunc())));
                }
            }
            f.push(a);
            g.push(b);
        }
        let out = FqElement::unchecked(&self.q, n, f, g);
        assert!(
            out.grid_defect().is_none(),
            "internal error: product left the fibered product at {:?}",
            out.grid_defect()
        );
        Ok(out)
    }

    /// Λ(ξ) = (F_0, G_0).
    pub fn lambda(&self) -> GermPair {
        GermPair::raw(self.f[0].clone(), self.g[0].clone())
    }

    /// The reduced degree-d component (z^{-d} P_d F_d, w^{-d} P_d G_d);
    /// zero beyond the cutoff.
    pub fn component(&self, d: usize) -> GradedElement {
        if d > self.trunc {
            return GradedElement::new(GermPair::zero(EXACT), d);
        }
        let f = self.f[d].project(d).divide_by_var(d).expect("projected layer vanishes to order d");
        let g = self.g[d].project(d).divide_by_var(d).expect("projected layer vanishes to order d");
        GradedElement::new(GermPair::raw(f, g), d)
    }

    pub fn components(&self) -> Vec<GradedElement> {
        (0..=self.trunc).map(|d| self.component(d)).collect()
    }

    /// The projection p_d = α_d ∘ (degree-d component).
    pub fn project(&self, d: usize) -> FqElement {
        if d > self.trunc {
            return FqElement::zero(&self.q, self.trunc);
        }
        FqElement::alpha(&self.q, self.trunc, &self.component(d)).expect("component has enough precision")
    }

    /// α_d(f, g): F_d = z^d f, F_k = [w^{k-d}]g · z^d for k > d, and the
    /// mirror image on the G-side. Needs f, g known to degree N − d.
    pub fn alpha(q: &QParam, trunc: usize, h: &GradedElement) -> Result<FqElement> {
        let d = h.degree;
        if d > trunc {
            return Ok(FqElement::zero(q, trunc));
        }
        let need = (trunc - d) as i64;
        if h.pair.trunc() < need {
            return Err(Error::Precondition(format!(
                "α_{} at cutoff {} needs precision {}, found {}",
                d,
                trunc,
                need,
                h.pair.trunc()
            )));
        }
        let (rf, rg) = h.raw();
        let mut f = vec![Series1::zero(EXACT); trunc + 1];
        let mut g = vec![Series1::zero(EXACT); trunc + 1];
        f[d] = rf;
        g[d] = rg;
        for k in d + 1..=trunc {
            f[k] = Series1::monomial(d, h.pair.g.coeff(k - d), EXACT);
            g[k] = Series1::monomial(d, h.pair.f.coeff(k - d), EXACT);
        }
        Ok(FqElement::unchecked(q, trunc, f, g))
    }

    /// Σ_{d ≤ N} α_d(component d).
    pub fn reassemble(q: &QParam, trunc: usize, parts: &[GradedElement]) -> Result<FqElement> {
        let mut acc = FqElement::zero(q, trunc);
        for p in parts {
            acc = acc.add(&FqElement::alpha(q, trunc, p)?)?;
        }
        Ok(acc)
    }

    /// The grid coefficients c_{ik} = [z^i]F_k.
    pub fn grid(&self) -> Vec<(usize, usize, Cq)> {
        let mut out = vec![];
        for k in 0..=self.trunc {
            for i in 0..=self.trunc {
                let c = self.f[k].coeff(i);
                if !c.is_zero() {
                    out.push((i, k, c));
                }
            }
        }
        out
    }

    /// Σ c_{ik} x^i y^k over the grid: the polynomial part of the quantum
    /// plane that ξ restricts to on the cutoff window.
    pub fn monomial_reconstruction(&self) -> FqElement {
        let mut acc = FqElement::zero(&self.q, self.trunc);
        for (i, k, c) in self.grid() {
            acc = acc.add(&FqElement::monomial(&self.q, self.trunc, i, k, c)).expect("same shape");
        }
        acc
    }

    /// Lower every layer to precision n ≥ N.
    pub fn truncate_layers(&self, n: i64) -> FqElement {
        let f = self.f.iter().map(|s| s.truncate(n)).collect();
        let g = self.g.iter().map(|s| s.truncate(n)).collect();
        FqElement::unchecked(&self.q, self.trunc, f, g)
    }

    /// Multiply α_d(h) by a generator inside F_q (left for L, right for R).
    pub fn generator_product(q: &QParam, trunc: usize, gen: Generator, h: &GradedElement) -> Result<FqElement> {
        let a = FqElement::alpha(q, trunc, h)?;
        match gen {
            Generator::Lx => FqElement::x(q, trunc).mul(&a),
            Generator::Ly => FqElement::y(q, trunc).mul(&a),
            Generator::Rx => a.mul(&FqElement::x(q, trunc)),
            Generator::Ry => a.mul(&FqElement::y(q, trunc)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    q: QParam,
    trunc: usize,
    #[serde(rename = "F")]
    f: Vec<Series1>,
    #[serde(rename = "G")]
    g: Vec<Series1>,
}

impl Serialize for FqElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { q: self.q.clone(), trunc: self.trunc, f: self.f.clone(), g: self.g.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FqElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<FqElement, D::Error> {
        let w = Wire::deserialize(d)?;
        FqElement::new(&w.q, w.trunc, w.f, w.g).map_err(serde::de::Error::custom)
    }
}
