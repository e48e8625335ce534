//! Quadruples (ζ₁, ζ₂, ζ₃, ζ₄) of two-variable series: the finite model of
//! a tensor product of two germ-pair algebras.
//!
//! Component k lives on one of the four charts (z₁,z₂), (z₁,w₂), (w₁,z₂),
//! (w₁,w₂); inside a [`Series2`] the first variable is always the chart
//! coordinate coming from the first factor. A compatible quadruple matches
//! along the four edges
//!   ζ₁(z₁,0) = ζ₂(z₁,0), ζ₃(w₁,0) = ζ₄(w₁,0),
//!   ζ₁(0,z₂) = ζ₃(0,z₂), ζ₂(0,w₂) = ζ₄(0,w₂);
//! a free quadruple carries no conditions.

use serde::{Deserialize, Serialize};

use crate::coeff::{Cq, QParam};
use crate::error::{Error, Result};
use crate::graded::{GermPair, GradedElement};
use crate::series::{Agreement, Series1, Series2, EXACT};

#[derive(Clone, Debug, PartialEq)]
pub struct Quadruple {
    pub z1z2: Series2,
    pub z1w2: Series2,
    pub w1z2: Series2,
    pub w1w2: Series2,
    pub compat: bool,
}

/// The four coordinate multiplications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Var {
    Z1,
    Z2,
    W1,
    W2,
}

/// The difference operators lifted to the first (x₁, y₁) or second
/// (x₂, y₂) factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lifted {
    NX1,
    NY1,
    MX2,
    MY2,
}

impl Quadruple {
    /// A compatible quadruple; fails naming the first violated edge.
    pub fn compatible(z1z2: Series2, z1w2: Series2, w1z2: Series2, w1w2: Series2) -> Result<Quadruple> {
        let q = Quadruple { z1z2, z1w2, w1z2, w1w2, compat: true };
        if let Some(msg) = q.edge_defect() {
            return Err(Error::Validation(msg));
        }
        Ok(q)
    }

    pub fn free(z1z2: Series2, z1w2: Series2, w1z2: Series2, w1w2: Series2) -> Quadruple {
        Quadruple { z1z2, z1w2, w1z2, w1w2, compat: false }
    }

    /// Builder for results that are compatible by construction.
    pub(crate) fn known(z1z2: Series2, z1w2: Series2, w1z2: Series2, w1w2: Series2) -> Quadruple {
        let q = Quadruple { z1z2, z1w2, w1z2, w1w2, compat: true };
        debug_assert!(q.edge_defect().is_none(), "{:?}", q.edge_defect());
        q
    }

    pub fn zero(compat: bool) -> Quadruple {
        let z = Series2::zero(EXACT);
        Quadruple { z1z2: z.clone(), z1w2: z.clone(), w1z2: z.clone(), w1w2: z, compat }
    }

    pub fn constant(c: Cq) -> Quadruple {
        let k = Series2::constant(c, EXACT);
        Quadruple::known(k.clone(), k.clone(), k.clone(), k)
    }

    pub fn parts(&self) -> [&Series2; 4] {
        [&self.z1z2, &self.z1w2, &self.w1z2, &self.w1w2]
    }

    fn map(&self, f: impl Fn(&Series2) -> Series2) -> Quadruple {
        Quadruple {
            z1z2: f(&self.z1z2),
            z1w2: f(&self.z1w2),
            w1z2: f(&self.w1z2),
            w1w2: f(&self.w1w2),
            compat: self.compat,
        }
    }

    fn zip(&self, o: &Quadruple, f: impl Fn(&Series2, &Series2) -> Series2) -> Quadruple {
        Quadruple {
            z1z2: f(&self.z1z2, &o.z1z2),
            z1w2: f(&self.z1w2, &o.z1w2),
            w1z2: f(&self.w1z2, &o.w1z2),
            w1w2: f(&self.w1w2, &o.w1w2),
            compat: self.compat && o.compat,
        }
    }

    /// First failing edge condition, if any (checked on the common window).
    pub fn edge_defect(&self) -> Option<String> {
        let edges = [
            ("ζ1(z1,0) = ζ2(z1,0)", self.z1z2.eval_v0().agree(&self.z1w2.eval_v0())),
            ("ζ3(w1,0) = ζ4(w1,0)", self.w1z2.eval_v0().agree(&self.w1w2.eval_v0())),
            ("ζ1(0,z2) = ζ3(0,z2)", self.z1z2.eval_u0().agree(&self.w1z2.eval_u0())),
            ("ζ2(0,w2) = ζ4(0,w2)", self.z1w2.eval_u0().agree(&self.w1w2.eval_u0())),
        ];
        edges
            .into_iter()
            .find(|(_, a)| !a.holds())
            .map(|(name, a)| format!("edge condition {} fails at degree {:?}", name, a.mismatch.map(|m| m.0)))
    }

    pub(crate) fn require_compat(&self, what: &str) -> Result<()> {
        if self.compat {
            Ok(())
        } else {
            Err(Error::Usage(format!("{} needs a compatible quadruple, got a free one", what)))
        }
    }

    pub fn trunc(&self) -> i64 {
        self.parts().iter().map(|s| s.trunc()).min().unwrap()
    }

    pub fn truncate(&self, n: i64) -> Quadruple {
        self.map(|s| s.truncate(n))
    }

    pub fn add(&self, o: &Quadruple) -> Quadruple {
        self.zip(o, Series2::add)
    }

    pub fn sub(&self, o: &Quadruple) -> Quadruple {
        self.zip(o, Series2::sub)
    }

    pub fn neg(&self) -> Quadruple {
        self.map(Series2::neg)
    }

    pub fn scale(&self, a: &Cq) -> Quadruple {
        self.map(|s| s.scale(a))
    }

    pub fn is_zero(&self) -> bool {
        self.parts().iter().all(|s| s.is_zero())
    }

    pub fn as_free(&self) -> Quadruple {
        Quadruple { compat: false, ..self.clone() }
    }

    pub fn agree(&self, o: &Quadruple) -> Agreement {
        let [a1, a2, a3, a4] = self.parts();
        let [b1, b2, b3, b4] = o.parts();
        a1.agree(b1).and(a2.agree(b2)).and(a3.agree(b3)).and(a4.agree(b4))
    }

    pub fn vanishes(&self) -> Agreement {
        self.agree(&Quadruple::zero(false))
    }

    /// (f,g) ⊗ (u,v) = (f u, f v, g u, g v) on reduced pairs.
    pub fn tensor_embed(a: &GradedElement, b: &GradedElement) -> Quadruple {
        Quadruple::tensor_pairs(&a.pair, &b.pair)
    }

    pub fn tensor_pairs(a: &GermPair, b: &GermPair) -> Quadruple {
        Quadruple::known(
            Series2::outer(&a.f, &b.f),
            Series2::outer(&a.f, &b.g),
            Series2::outer(&a.g, &b.f),
            Series2::outer(&a.g, &b.g),
        )
    }

    /// Multiplication by one coordinate; the other chart's components die.
    pub fn mult_var(&self, v: Var) -> Result<Quadruple> {
        self.require_compat("variable multiplication")?;
        let z = || Series2::zero(EXACT);
        Ok(match v {
            Var::Z1 => Quadruple::known(self.z1z2.mul_u(), self.z1w2.mul_u(), z(), z()),
            Var::Z2 => Quadruple::known(self.z1z2.mul_v(), z(), self.w1z2.mul_v(), z()),
            Var::W1 => Quadruple::known(z(), z(), self.w1z2.mul_u(), self.w1w2.mul_u()),
            Var::W2 => Quadruple::known(z(), self.z1w2.mul_v(), z(), self.w1w2.mul_v()),
        })
    }

    /// Lifted N/M operators; `k` is d for the first factor and l for the
    /// second.
    pub fn lifted(&self, op: Lifted, k: usize, q: &QParam) -> Result<Quadruple> {
        self.require_compat("lifted difference operator")?;
        let one = Cq::one();
        Ok(match op {
            Lifted::NX1 => Quadruple::known(
                self.z1z2.diff_quot_u(),
                self.z1w2.diff_quot_u(),
                Series2::from_v(&self.z1z2.du_at_u0()),
                Series2::from_v(&self.z1w2.du_at_u0()),
            ),
            Lifted::NY1 => Quadruple::known(
                Series2::from_v(&self.w1z2.du_at_u0()),
                Series2::from_v(&self.w1w2.du_at_u0()),
                self.w1z2.diff_quot_u().dilate(q.value(), &one),
                self.w1w2.diff_quot_u().dilate(q.value(), &one),
            )
            .scale(&q.pow(k as i64 + 1)),
            Lifted::MX2 => Quadruple::known(
                Series2::from_u(&self.z1w2.dv_at_v0()),
                self.z1w2.diff_quot_v(),
                Series2::from_u(&self.w1w2.dv_at_v0()),
                self.w1w2.diff_quot_v(),
            ),
            Lifted::MY2 => Quadruple::known(
                self.z1z2.diff_quot_v().dilate(&one, q.value()),
                Series2::from_u(&self.z1z2.dv_at_v0()),
                self.w1z2.diff_quot_v().dilate(&one, q.value()),
                Series2::from_u(&self.w1z2.dv_at_v0()),
            )
            .scale(&q.pow(k as i64 + 1)),
        })
    }

    /// π_{d,l}(ζ) = (ζ₁(z, q^d z), ζ₄(q^l w, w)), normalized (the factor
    /// q^{dl} is dropped).
    pub fn pi(&self, d: usize, l: usize, q: &QParam) -> Result<GradedElement> {
        self.require_compat("diagonal multiplication")?;
        let f = self.z1z2.on_line_v(&q.pow(d as i64));
        let g = self.w1w2.on_line_u(&q.pow(l as i64));
        Ok(GradedElement::new(GermPair::new(f, g)?, d + l))
    }

    /// Expansion in elementary tensors of the monomial basis
    /// {(1,1), (z^i,0), (0,w^i) : i ≥ 1} of germ pairs, as
    /// (first factor, second factor, coefficient).
    pub fn monomial_tensors(&self) -> Result<Vec<(GermPair, GermPair, Cq)>> {
        self.require_compat("tensor decomposition")?;
        let t = self.trunc();
        if t == EXACT {
            return Err(Error::Precondition("tensor decomposition needs a finite cutoff".into()));
        }
        let n = t as usize;
        let unit = || GermPair::constant(Cq::one(), EXACT);
        let zp = |i: usize| GermPair::raw(Series1::monomial(i, Cq::one(), EXACT), Series1::zero(EXACT));
        let wp = |i: usize| GermPair::raw(Series1::zero(EXACT), Series1::monomial(i, Cq::one(), EXACT));
        let mut out = vec![];
        let mut push = |a: GermPair, b: GermPair, c: Cq| {
            if !c.is_zero() {
                out.push((a, b, c));
            }
        };
        push(unit(), unit(), self.z1z2.coeff(0, 0));
        for i in 1..=n {
            push(zp(i), unit(), self.z1z2.coeff(i, 0));
            push(wp(i), unit(), self.w1z2.coeff(i, 0));
            push(unit(), zp(i), self.z1z2.coeff(0, i));
            push(unit(), wp(i), self.z1w2.coeff(0, i));
        }
        for i in 1..n {
            for j in 1..=n - i {
                push(zp(i), zp(j), self.z1z2.coeff(i, j));
                push(zp(i), wp(j), self.z1w2.coeff(i, j));
                push(wp(i), zp(j), self.w1z2.coeff(i, j));
                push(wp(i), wp(j), self.w1w2.coeff(i, j));
            }
        }
        Ok(out)
    }

    pub fn from_tensors(terms: &[(GermPair, GermPair, Cq)]) -> Quadruple {
        terms.iter().fold(Quadruple::zero(true), |acc, (a, b, c)| {
            acc.add(&Quadruple::tensor_pairs(a, b).scale(c))
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    compat: bool,
    z1z2: Series2,
    z1w2: Series2,
    w1z2: Series2,
    w1w2: Series2,
}

impl Serialize for Quadruple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            compat: self.compat,
            z1z2: self.z1z2.clone(),
            z1w2: self.z1w2.clone(),
            w1z2: self.w1z2.clone(),
            w1w2: self.w1w2.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quadruple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Quadruple, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.compat {
            Quadruple::compatible(w.z1z2, w.z1w2, w.w1z2, w.w1w2).map_err(serde::de::Error::custom)
        } else {
            Ok(Quadruple::free(w.z1z2, w.z1w2, w.w1z2, w.w1w2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_q;
    use crate::random;

    fn q() -> QParam {
        make_q(Cq::rat(1, 2)).unwrap()
    }

    fn zw() -> GradedElement {
        let z = Series1::poly(vec![Cq::zero(), Cq::one()]);
        GradedElement::new(GermPair::new(z.clone(), z).unwrap(), 0)
    }

    fn one() -> GradedElement {
        GradedElement::new(GermPair::constant(Cq::one(), EXACT), 0)
    }

    fn mono(i: usize, j: usize) -> Series2 {
        Series2::from_terms(&[(i, j, Cq::one())], EXACT)
    }

    #[test]
    fn tensor_examples() {
        let u = Quadruple::tensor_embed(&one(), &one());
        assert_eq!(u, Quadruple::constant(Cq::one()));
        let t = Quadruple::tensor_embed(&zw(), &zw());
        for s in t.parts() {
            assert_eq!(*s, mono(1, 1));
        }
        let t = Quadruple::tensor_embed(&zw(), &one());
        for s in t.parts() {
            assert_eq!(*s, mono(1, 0));
        }
    }

    #[test]
    fn variable_actions() {
        let u = Quadruple::constant(Cq::one());
        let z1 = u.mult_var(Var::Z1).unwrap();
        assert_eq!(z1.z1z2, mono(1, 0));
        assert_eq!(z1.z1w2, mono(1, 0));
        assert!(z1.w1z2.is_zero() && z1.w1w2.is_zero());
        let w2 = u.mult_var(Var::W2).unwrap();
        assert!(w2.z1z2.is_zero() && w2.w1z2.is_zero());
        assert_eq!(w2.w1w2, mono(0, 1));
        let mut r = random::stream(3, 0);
        for _ in 0..10 {
            let x = random::compatible_quadruple(&mut r, 5);
            assert!(x.mult_var(Var::W2).unwrap().mult_var(Var::Z2).unwrap().is_zero());
            assert!(x.mult_var(Var::Z1).unwrap().mult_var(Var::W1).unwrap().is_zero());
        }
        assert!(Quadruple::zero(false).mult_var(Var::Z1).is_err());
    }

    #[test]
    fn lifted_ops_match_single_factor_ops_on_tensors() {
        let q = q();
        let mut r = random::stream(5, 0);
        for k in 0..3 {
            let a = random::graded(&mut r, 6, k);
            let b = random::graded(&mut r, 6, 2);
            let t = Quadruple::tensor_embed(&a, &b);
            let cases = [
                (Lifted::NX1, Quadruple::tensor_embed(&a.op_n_x(), &b)),
                (Lifted::NY1, Quadruple::tensor_embed(&a.op_n_y(&q), &b)),
                (Lifted::MX2, Quadruple::tensor_embed(&a, &b.op_m_x())),
                (Lifted::MY2, Quadruple::tensor_embed(&a, &b.op_m_y(&q))),
            ];
            for (op, want) in cases {
                let idx = if matches!(op, Lifted::NX1 | Lifted::NY1) { a.degree } else { b.degree };
                let got = t.lifted(op, idx, &q).unwrap();
                assert!(got.agree(&want).holds(), "{:?} {:?}", op, got.agree(&want));
                assert!(got.edge_defect().is_none());
            }
        }
        let eta = random::graded(&mut r, 5, 1);
        let t = Quadruple::tensor_embed(&one(), &eta);
        assert!(t.lifted(Lifted::NX1, 0, &q).unwrap().is_zero());
        // the prefactor q^{d+1}
        let t = Quadruple::tensor_embed(&zw(), &one());
        let a = t.lifted(Lifted::NY1, 0, &q).unwrap();
        let b = t.lifted(Lifted::NY1, 2, &q).unwrap();
        assert!(b.agree(&a.scale(&q.pow(2))).holds());
        assert!(!a.is_zero());
    }

    #[test]
    fn pi_examples() {
        let q = q();
        let t = Quadruple::tensor_embed(&zw(), &zw());
        let p = t.pi(2, 3, &q).unwrap();
        assert_eq!(p.degree, 5);
        assert_eq!(p.pair.f, Series1::monomial(2, q.pow(2), EXACT));
        assert_eq!(p.pair.g, Series1::monomial(2, q.pow(3), EXACT));
        let mut r = random::stream(9, 0);
        let fg = random::germ_pair(&mut r, 6);
        let t = Quadruple::tensor_pairs(&GermPair::constant(Cq::one(), EXACT), &fg);
        assert!(t.pi(0, 0, &q).unwrap().pair.agree(&fg).holds());
        // z2 − q^d z1 is killed by π_{d,l}
        for _ in 0..5 {
            let x = random::compatible_quadruple(&mut r, 6);
            let d = 2;
            let y = x.mult_var(Var::Z2).unwrap().sub(&x.mult_var(Var::Z1).unwrap().scale(&q.pow(d)));
            assert!(y.pi(d as usize, 1, &q).unwrap().pair.vanishes().holds());
        }
    }

    #[test]
    fn monomial_tensor_reconstruction_is_exact() {
        let mut r = random::stream(11, 0);
        for _ in 0..10 {
            let x = random::compatible_quadruple(&mut r, 6);
            let back = Quadruple::from_tensors(&x.monomial_tensors().unwrap());
            assert!(back.agree(&x).holds());
        }
    }

    #[test]
    fn edge_conditions_are_checked() {
        let bad = Quadruple::compatible(mono(1, 0), mono(0, 0), mono(0, 0), mono(0, 0));
        assert!(bad.unwrap_err().to_string().contains("ζ1(z1,0) = ζ2(z1,0)"));
        let x = random::compatible_quadruple(&mut random::stream(2, 2), 4);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v["compat"], true);
        let back: Quadruple = serde_json::from_value(v.clone()).unwrap();
        assert!(back.agree(&x).holds());
        let mut broken = v;
        broken["z1w2"] = serde_json::to_value(mono(3, 0)).unwrap();
        assert!(serde_json::from_value::<Quadruple>(broken).is_err());
    }
}
