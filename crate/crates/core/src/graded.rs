//! Germ pairs (f(z), g(w)) with f(0) = g(0), their graded copies and the
//! shift/difference operators between neighbouring degrees.
//!
//! A graded element of degree d is stored in reduced form: the pair (f, g)
//! stands for the raw pair (z^d f, w^d g), whose members vanish to order d
//! and share the coefficient of degree d.

use serde::{Deserialize, Serialize};

use crate::coeff::{Cq, QParam};
use crate::error::{Error, Result};
use crate::series::{Agreement, Series1, EXACT};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GermPair {
    pub f: Series1,
    pub g: Series1,
}

impl GermPair {
    /// Checks f(0) = g(0).
    pub fn new(f: Series1, g: Series1) -> Result<GermPair> {
        if f.trunc() >= 0 && g.trunc() >= 0 && f.eval0() != g.eval0() {
            return Err(Error::Validation(format!(
                "germ pair needs f(0) = g(0), found {} and {}",
                f.eval0(),
                g.eval0()
            )));
        }
        Ok(GermPair { f, g })
    }

    pub(crate) fn raw(f: Series1, g: Series1) -> GermPair {
        debug_assert!(f.trunc() < 0 || g.trunc() < 0 || f.eval0() == g.eval0());
        GermPair { f, g }
    }

    pub fn zero(trunc: i64) -> GermPair {
        GermPair::raw(Series1::zero(trunc), Series1::zero(trunc))
    }

    pub fn constant(a: Cq, trunc: i64) -> GermPair {
        GermPair::raw(Series1::constant(a.clone(), trunc), Series1::constant(a, trunc))
    }

    pub fn trunc(&self) -> i64 {
        self.f.trunc().min(self.g.trunc())
    }

    pub fn truncate(&self, n: i64) -> GermPair {
        GermPair::raw(self.f.truncate(n), self.g.truncate(n))
    }

    /// The common value f(0) = g(0).
    pub fn at_origin(&self) -> Cq {
        self.f.eval0()
    }

    pub fn add(&self, o: &GermPair) -> GermPair {
        GermPair::raw(self.f.add(&o.f), self.g.add(&o.g))
    }

    pub fn sub(&self, o: &GermPair) -> GermPair {
        GermPair::raw(self.f.sub(&o.f), self.g.sub(&o.g))
    }

    pub fn scale(&self, a: &Cq) -> GermPair {
        GermPair::raw(self.f.scale(a), self.g.scale(a))
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    /// z·(f, g) = (z f, 0).
    pub fn mult_z(&self) -> GermPair {
        GermPair::raw(self.f.shift_up(1), Series1::zero(self.g.trunc() + 1))
    }

    /// w·(f, g) = (0, w g).
    pub fn mult_w(&self) -> GermPair {
        GermPair::raw(Series1::zero(self.f.trunc() + 1), self.g.shift_up(1))
    }

    /// ((f(z) − f(0))/z, f′(0)).
    pub fn op_n_x(&self) -> GermPair {
        let c = self.f.deriv0();
        GermPair::raw(self.f.diff_quot(), Series1::constant(c, self.g.trunc() - 1))
    }

    /// q^{d+1}(g′(0), (g(qw) − g(0))/(qw)).
    pub fn op_n_y(&self, d: usize, q: &QParam) -> GermPair {
        let s = q.pow(d as i64 + 1);
        let c = self.g.deriv0();
        GermPair::raw(
            Series1::constant(&c * &s, self.f.trunc() - 1),
            self.g.diff_quot().translate_q(q).scale(&s),
        )
    }

    /// (g′(0), (g(w) − g(0))/w).
    pub fn op_m_x(&self) -> GermPair {
        let c = self.g.deriv0();
        GermPair::raw(Series1::constant(c, self.f.trunc() - 1), self.g.diff_quot())
    }

    /// q^{l+1}((f(qz) − f(0))/(qz), f′(0)).
    pub fn op_m_y(&self, l: usize, q: &QParam) -> GermPair {
        let s = q.pow(l as i64 + 1);
        let c = self.f.deriv0();
        GermPair::raw(
            self.f.diff_quot().translate_q(q).scale(&s),
            Series1::constant(&c * &s, self.g.trunc() - 1),
        )
    }

    pub fn agree(&self, o: &GermPair) -> Agreement {
        self.f.agree(&o.f).and(self.g.agree(&o.g))
    }

    pub fn vanishes(&self) -> Agreement {
        self.agree(&GermPair::zero(EXACT))
    }
}

/// A reduced element of the degree-d copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedElement {
    pub pair: GermPair,
    pub degree: usize,
}

/// The four generator actions on graded elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    /// left multiplication by x
    Lx,
    /// left multiplication by y
    Ly,
    /// right multiplication by x
    Rx,
    /// right multiplication by y
    Ry,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::Lx, Generator::Ly, Generator::Rx, Generator::Ry];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Lx => "L_x",
            Generator::Ly => "L_y",
            Generator::Rx => "R_x",
            Generator::Ry => "R_y",
        }
    }
}

impl GradedElement {
    pub fn new(pair: GermPair, degree: usize) -> GradedElement {
        GradedElement { pair, degree }
    }

    /// From a raw pair (F, G) vanishing to order d.
    pub fn from_raw(f: &Series1, g: &Series1, d: usize) -> Result<GradedElement> {
        let pair = GermPair::new(f.divide_by_var(d)?, g.divide_by_var(d)?)?;
        Ok(GradedElement { pair, degree: d })
    }

    /// The raw pair (z^d f, w^d g).
    pub fn raw(&self) -> (Series1, Series1) {
        (self.pair.f.shift_up(self.degree), self.pair.g.shift_up(self.degree))
    }

    fn at(&self, pair: GermPair, degree: usize) -> GradedElement {
        GradedElement { pair, degree }
    }

    pub fn mult_z(&self) -> GradedElement {
        self.at(self.pair.mult_z(), self.degree)
    }

    pub fn mult_w(&self) -> GradedElement {
        self.at(self.pair.mult_w(), self.degree)
    }

    pub fn op_n_x(&self) -> GradedElement {
        self.at(self.pair.op_n_x(), self.degree + 1)
    }

    pub fn op_n_y(&self, q: &QParam) -> GradedElement {
        self.at(self.pair.op_n_y(self.degree, q), self.degree + 1)
    }

    pub fn op_m_x(&self) -> GradedElement {
        self.at(self.pair.op_m_x(), self.degree + 1)
    }

    pub fn op_m_y(&self, q: &QParam) -> GradedElement {
        self.at(self.pair.op_m_y(self.degree, q), self.degree + 1)
    }

    /// The degree-d and degree-(d+1) components of a generator acting on
    /// α_d(self):
    /// L_x = z + M_x, L_y = q^d w + M_y, R_x = q^d z + N_y, R_y = w + N_x.
    pub fn generator_action(&self, gen: Generator, q: &QParam) -> (GradedElement, GradedElement) {
        let qd = q.pow(self.degree as i64);
        match gen {
            Generator::Lx => (self.mult_z(), self.op_m_x()),
            Generator::Ly => (self.at(self.pair.mult_w().scale(&qd), self.degree), self.op_m_y(q)),
            Generator::Rx => (self.at(self.pair.mult_z().scale(&qd), self.degree), self.op_n_y(q)),
            Generator::Ry => (self.mult_w(), self.op_n_x()),
        }
    }
}

/// The shift operators written on raw pairs, used to cross-check the
/// reduced formulas:
///   N_x(F, G) = (P_{d+1} F, [z^{d+1}]F · w^{d+1}),
///   N_y(F, G) = (q^{d+1}[w^{d+1}]G · z^{d+1}, P_{d+1} Δ_q G),
///   M_x(F, G) = ([w^{d+1}]G · z^{d+1}, P_{d+1} G),
///   M_y(F, G) = (P_{d+1} Δ_q F, q^{d+1}[z^{d+1}]F · w^{d+1}).
pub mod raw_ops {
    use super::*;

    pub fn n_x(f: &Series1, g: &Series1, d: usize) -> (Series1, Series1) {
        let c = f.coeff(d + 1);
        (f.project(d + 1), Series1::monomial(d + 1, c, g.trunc()))
    }

    pub fn n_y(f: &Series1, g: &Series1, d: usize, q: &QParam) -> (Series1, Series1) {
        let c = &g.coeff(d + 1) * &q.pow(d as i64 + 1);
        (Series1::monomial(d + 1, c, f.trunc()), g.translate_q(q).project(d + 1))
    }

    pub fn m_x(f: &Series1, g: &Series1, d: usize) -> (Series1, Series1) {
        let c = g.coeff(d + 1);
        (Series1::monomial(d + 1, c, f.trunc()), g.project(d + 1))
    }

    pub fn m_y(f: &Series1, g: &Series1, d: usize, q: &QParam) -> (Series1, Series1) {
        let c = &f.coeff(d + 1) * &q.pow(d as i64 + 1);
        (f.translate_q(q).project(d + 1), Series1::monomial(d + 1, c, g.trunc()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_q;

    fn s(c: &[i64], t: i64) -> Series1 {
        Series1::new(c.iter().map(|&x| Cq::int(x)).collect(), t)
    }

    fn pair(f: &[i64], g: &[i64]) -> GermPair {
        GermPair::new(s(f, 8), s(g, 8)).unwrap()
    }

    #[test]
    fn variable_actions() {
        let one = pair(&[1], &[1]);
        assert_eq!(one.mult_z(), GermPair::raw(s(&[0, 1], 9), s(&[], 9)));
        let zw = pair(&[0, 1], &[0, 1]);
        assert!(zw.mult_w().agree(&GermPair::raw(s(&[], 9), s(&[0, 0, 1], 9))).holds());
        let p = pair(&[2, -1, 3], &[2, 5]);
        assert!(p.mult_z().mult_w().is_zero());
        assert!(p.mult_w().mult_z().is_zero());
    }

    #[test]
    fn reduced_operator_examples() {
        let q = make_q(Cq::rat(1, 2)).unwrap();
        let p = pair(&[0, 0, 1], &[0, 0, 1]);
        assert!(p.op_n_x().agree(&GermPair::raw(s(&[0, 1], 7), s(&[0], 7))).holds());
        assert!(p.op_m_x().agree(&GermPair::raw(s(&[0], 7), s(&[0, 1], 7))).holds());
        let d = 2;
        let e = pair(&[0], &[0, 1]).op_n_y(d, &q);
        let c = q.pow(3);
        assert!(e.agree(&GermPair::raw(Series1::constant(c.clone(), 7), Series1::constant(c, 7))).holds());
        assert!(GermPair::new(s(&[1], 3), s(&[2], 3)).is_err());
    }

    #[test]
    fn reduced_operators_match_raw_forms() {
        let q = make_q("(1+i)/3".parse().unwrap()).unwrap();
        let base = pair(&[3, -1, 4, 1, -5, 9], &[3, 2, -6, 5, 3]);
        for d in 0..4 {
            let h = GradedElement::new(base.clone(), d);
            let (f, g) = h.raw();
            let cases: Vec<(GradedElement, (Series1, Series1))> = vec![
                (h.op_n_x(), raw_ops::n_x(&f, &g, d)),
                (h.op_n_y(&q), raw_ops::n_y(&f, &g, d, &q)),
                (h.op_m_x(), raw_ops::m_x(&f, &g, d)),
                (h.op_m_y(&q), raw_ops::m_y(&f, &g, d, &q)),
            ];
            for (reduced, (rf, rg)) in cases {
                assert_eq!(reduced.degree, d + 1);
                let (a, b) = reduced.raw();
                let ag = a.agree(&rf).and(b.agree(&rg));
                assert!(ag.holds(), "d = {}: {:?}", d, ag);
                assert!(ag.window >= 7);
            }
        }
    }

    #[test]
    fn degree_shift_round_trip() {
        let p = pair(&[1, 2, 3], &[1, -4]);
        for d in 0..5 {
            let h = GradedElement::new(p.clone(), d);
            let (f, g) = h.raw();
            let back = GradedElement::from_raw(&f, &g, d).unwrap();
            assert!(back.pair.agree(&p).holds());
            // the shift intertwines multiplication by z and w
            let (zf, zg) = h.mult_z().raw();
            assert!(zf.agree(&f.shift_up(1)).holds());
            assert!(zg.is_zero());
        }
    }

    #[test]
    fn generator_action_examples() {
        let q = make_q(Cq::rat(1, 3)).unwrap();
        let one = GradedElement::new(pair(&[1], &[1]), 0);
        let (a, b) = one.generator_action(Generator::Lx, &q);
        assert!(a.pair.agree(&GermPair::raw(s(&[0, 1], 9), s(&[], 9))).holds());
        assert!(b.pair.is_zero() && b.degree == 1);
        let (a, b) = one.generator_action(Generator::Ry, &q);
        assert!(a.pair.agree(&GermPair::raw(s(&[], 9), s(&[0, 1], 9))).holds());
        assert!(b.pair.is_zero());
    }
}
