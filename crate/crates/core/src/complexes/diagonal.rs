//! The diagonal complex at bidegree (d, l):
//!
//!   0 → O_{d,l} --∂⁰--> O_{d,l}² --∂¹--> O_{d,l} --π--> O_{d+l} → 0
//!
//! with ∂⁰ = [w₁ − q^{l+1}w₂ ; z₂ − q^{d+1}z₁] and
//! ∂¹ = [z₂ − q^d z₁, q^l w₂ − w₁]. Everything here is an explicit formula:
//! the operator T identifying free quadruples with ker ∂¹, the splitting
//! Φ/Ψ of the first cohomology, and the contracting homotopies τ⁰, τ¹.

use serde::{Deserialize, Serialize};

use crate::coeff::{Cq, QParam};
use crate::error::{Error, Result};
use crate::graded::{GermPair, GradedElement};
use crate::quadruple::{Lifted, Quadruple, Var};
use crate::series::{Agreement, Series1, Series2, EXACT};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagParams {
    pub d: usize,
    pub l: usize,
    pub q: QParam,
    pub trunc: usize,
}

/// A 1-cochain: the pair (α, β) ∈ O_{d,l}².
pub type Pair = (Quadruple, Quadruple);

/// Outcome of splitting a 1-cocycle β = ∂⁰α + TΨ(rep).
#[derive(Clone, Debug)]
pub struct H1Split {
    pub representative: GermPair,
    pub coboundary_part: Quadruple,
}

/// Outcome of the coboundary criterion on a 1-cocycle: vanishing projections imply a preimage.
#[derive(Clone, Debug)]
pub struct KeyCheck {
    /// π_{d,l+1}(M β) = 0
    pub m_hypothesis: bool,
    /// π_{d+1,l}(N β) = 0
    pub n_hypothesis: bool,
    /// A preimage under ∂⁰ when β is a coboundary.
    pub preimage: Option<Quadruple>,
    /// hypothesis ⇒ (preimage exists and reproduces β)
    pub implication_holds: bool,
}

fn u_of(f: &Series1) -> Series2 {
    Series2::from_u(f)
}

fn v_of(f: &Series1) -> Series2 {
    Series2::from_v(f)
}

pub fn pair_agree(a: &Pair, b: &Pair) -> Agreement {
    a.0.agree(&b.0).and(a.1.agree(&b.1))
}

impl DiagParams {
    pub fn new(d: usize, l: usize, q: &QParam, trunc: usize) -> DiagParams {
        DiagParams { d, l, q: q.clone(), trunc }
    }

    fn qp(&self, k: i64) -> Cq {
        self.q.pow(k)
    }

    /// ∂⁰ζ = ((w₁ − q^{l+1}w₂)ζ, (z₂ − q^{d+1}z₁)ζ).
    pub fn d0(&self, z: &Quadruple) -> Result<Pair> {
        z.require_compat("∂⁰")?;
        let a = z.mult_var(Var::W1)?.sub(&z.mult_var(Var::W2)?.scale(&self.qp(self.l as i64 + 1)));
        let b = z.mult_var(Var::Z2)?.sub(&z.mult_var(Var::Z1)?.scale(&self.qp(self.d as i64 + 1)));
        Ok((a, b))
    }

    /// ∂¹(α, β) = (z₂ − q^d z₁)α + (q^l w₂ − w₁)β.
    pub fn d1(&self, p: &Pair) -> Result<Quadruple> {
        let (a, b) = p;
        a.require_compat("∂¹")?;
        b.require_compat("∂¹")?;
        let x = a.mult_var(Var::Z2)?.sub(&a.mult_var(Var::Z1)?.scale(&self.qp(self.d as i64)));
        let y = b.mult_var(Var::W2)?.scale(&self.qp(self.l as i64)).sub(&b.mult_var(Var::W1)?);
        Ok(x.add(&y))
    }

    pub fn pi(&self, z: &Quadruple) -> Result<GradedElement> {
        z.pi(self.d, self.l, &self.q)
    }

    fn require_cocycle(&self, p: &Pair) -> Result<()> {
        let ag = self.d1(p)?.vanishes();
        if !ag.holds() {
            return Err(Error::NotCocycle(format!(
                "∂¹ of the pair is nonzero at {:?} (bidegree ({}, {}))",
                ag.mismatch, self.d, self.l
            )));
        }
        Ok(())
    }

    /// T(θ) = (ζ, η) for a free θ:
    ///   ζ = (0, −q^{l+1}w₂θ₂, w₁θ₃, w₁θ₃(w₁,0) − q^{l+1}w₂θ₂(0,w₂) + w₁w₂θ₄),
    ///   η = (−q^{d+1}z₁θ₂(z₁,0) + z₂θ₃(0,z₂) + z₁z₂θ₁, −q^{d+1}z₁θ₂, z₂θ₃, 0).
    pub fn t(&self, th: &Quadruple) -> Pair {
        let ql = self.qp(self.l as i64 + 1);
        let qd = self.qp(self.d as i64 + 1);
        let (t1, t2, t3, t4) = (&th.z1z2, &th.z1w2, &th.w1z2, &th.w1w2);
        let zero = || Series2::zero(EXACT);
        let z4 = u_of(&t3.eval_v0())
            .mul_u()
            .sub(&v_of(&t2.eval_u0()).mul_v().scale(&ql))
            .add(&t4.shift(1, 1));
        let zeta = Quadruple::known(zero(), t2.mul_v().scale(&ql).neg(), t3.mul_u(), z4);
        let e1 = v_of(&t3.eval_u0())
            .mul_v()
            .sub(&u_of(&t2.eval_v0()).mul_u().scale(&qd))
            .add(&t1.shift(1, 1));
        let eta = Quadruple::known(e1, t2.mul_u().scale(&qd).neg(), t3.mul_v(), zero());
        (zeta, eta)
    }

    /// T⁻¹ on ker ∂¹, read off by difference quotients:
    /// θ₂ = −q^{−(l+1)}(ζ₂)_{w₂}, θ₃ = (ζ₃)_{w₁}, θ₄ = (ζ₄)_{w₁w₂}, θ₁ = (η₁)_{z₁z₂}.
    pub fn t_inv(&self, p: &Pair) -> Result<Quadruple> {
        self.require_cocycle(p)?;
        let (z, e) = p;
        let t2 = z.z1w2.diff_quot_v().scale(&self.qp(-(self.l as i64) - 1).neg());
        let t3 = z.w1z2.diff_quot_u();
        let t4 = z.w1w2.diff_quot_u().diff_quot_v();
        let t1 = e.z1z2.diff_quot_u().diff_quot_v();
        Ok(Quadruple::free(t1, t2, t3, t4))
    }

    /// T⁻¹∂⁰α = ((α₁)_{z₁} − q^{d+1}(α₁)_{z₂}, α₂, α₃, (α₄)_{w₂} − q^{l+1}(α₄)_{w₁}).
    pub fn t_inv_d0(&self, a: &Quadruple) -> Result<Quadruple> {
        a.require_compat("T⁻¹∂⁰")?;
        let qd = self.qp(self.d as i64 + 1);
        let ql = self.qp(self.l as i64 + 1);
        let t1 = a.z1z2.diff_quot_u().sub(&a.z1z2.diff_quot_v().scale(&qd));
        let t4 = a.w1w2.diff_quot_v().sub(&a.w1w2.diff_quot_u().scale(&ql));
        Ok(Quadruple::free(t1, a.z1w2.clone(), a.w1z2.clone(), t4))
    }

    /// Membership of θ in the image of T⁻¹∂⁰:
    ///   θ₂(0,0) = θ₃(0,0),
    ///   z θ₁(z, q^{d+1}z) = θ₂(z,0) − θ₃(0, q^{d+1}z),
    ///   w θ₄(q^{l+1}w, w) = θ₂(0,w) − θ₃(q^{l+1}w, 0).
    pub fn theta_conditions(&self, th: &Quadruple) -> Agreement {
        let qd = self.qp(self.d as i64 + 1);
        let ql = self.qp(self.l as i64 + 1);
        let c0 = Series1::constant(th.z1w2.eval00(), EXACT).agree(&Series1::constant(th.w1z2.eval00(), EXACT));
        let lhs1 = th.z1z2.on_line_v(&qd).shift_up(1);
        let rhs1 = th.z1w2.eval_v0().sub(&th.w1z2.eval_u0().dilate(&qd));
        let lhs2 = th.w1w2.on_line_u(&ql).shift_up(1);
        let rhs2 = th.z1w2.eval_u0().sub(&th.w1z2.eval_v0().dilate(&ql));
        c0.and(lhs1.agree(&rhs1)).and(lhs2.agree(&rhs2))
    }

    /// Φ(θ) = (zθ₁(z,q^{d+1}z) − θ₂(z,0) + θ₃(0,q^{d+1}z),
    ///         wθ₄(q^{l+1}w,w) − θ₂(0,w) + θ₃(q^{l+1}w,0)).
    pub fn phi(&self, th: &Quadruple) -> Result<GermPair> {
        let qd = self.qp(self.d as i64 + 1);
        let ql = self.qp(self.l as i64 + 1);
        let f = th.z1z2.on_line_v(&qd).shift_up(1).sub(&th.z1w2.eval_v0()).add(&th.w1z2.eval_u0().dilate(&qd));
        let g = th.w1w2.on_line_u(&ql).shift_up(1).sub(&th.z1w2.eval_u0()).add(&th.w1z2.eval_v0().dilate(&ql));
        GermPair::new(f, g)
    }

    /// Ψ(f, g) = (f_z(z₁), 0, f(0), g_w(w₂)), a right inverse of Φ.
    pub fn psi(&self, p: &GermPair) -> Quadruple {
        let t = p.trunc();
        Quadruple::free(
            u_of(&p.f.diff_quot()),
            Series2::zero(EXACT),
            Series2::constant(p.f.eval0(), t),
            v_of(&p.g.diff_quot()),
        )
    }

    /// The preimage α with T⁻¹∂⁰α = θ for θ satisfying the membership
    /// conditions: α₂ = θ₂, α₃ = θ₃, and α₁, α₄ by exact division of the
    /// η₁, ζ₄ entries of T(θ) by z₂ − q^{d+1}z₁ and w₁ − q^{l+1}w₂.
    pub fn from_theta(&self, th: &Quadruple) -> Result<Quadruple> {
        let ag = self.theta_conditions(th);
        if !ag.holds() {
            return Err(Error::Precondition(format!(
                "θ violates the membership conditions at {:?}",
                ag.mismatch
            )));
        }
        let (z, e) = self.t(th);
        let qd = self.qp(self.d as i64 + 1);
        let ql = self.qp(self.l as i64 + 1);
        let a1 = e.z1z2.divide_linear(&qd.neg(), &Cq::one())?;
        let a4 = z.w1w2.divide_linear(&Cq::one(), &ql.neg())?;
        let t = th.trunc();
        Quadruple::compatible(a1.truncate(t), th.z1w2.clone(), th.w1z2.clone(), a4.truncate(t))
    }

    /// Split a 1-cocycle as ∂⁰α + TΨ(rep), rep = Φ(T⁻¹β).
    pub fn h1_split(&self, b: &Pair) -> Result<H1Split> {
        let th = self.t_inv(b)?;
        let rep = self.phi(&th)?;
        let rest = th.sub(&self.psi(&rep));
        let alpha = self.from_theta(&rest)?;
        Ok(H1Split { representative: rep, coboundary_part: alpha })
    }

    /// τ⁰(f, g) = (f(z₁), f(z₁) + g(w₂) − f(0), g(0), g(w₂)).
    pub fn tau0(&self, p: &GermPair) -> Quadruple {
        let f0 = Series2::constant(p.f.eval0(), EXACT);
        Quadruple::known(
            u_of(&p.f),
            u_of(&p.f).add(&v_of(&p.g)).sub(&f0),
            Series2::constant(p.g.eval0(), p.trunc()),
            v_of(&p.g),
        )
    }

    /// τ¹ζ = (α, β) with, for f = ζ₁(z, q^d z) and g = ζ₄(q^l w, w),
    ///   α₁ = (ζ₁ − f(z₁))/(z₂ − q^d z₁), α₃ = α₁(0,z₂),
    ///   α₂ = α₁(z₁,0) − q^{−d}w₂(ζ₂)_{z₁w₂}, α₄ = α₁(0,0) − q^{−d}w₂(ζ₂)_{z₁w₂}(0,w₂),
    ///   β₄ = (ζ₄ − g(w₂))/(q^l w₂ − w₁), β₂ = β₄(0,w₂),
    ///   β₃ = β₄(w₁,0) − z₂(ζ₃)_{w₁z₂}, β₁ = β₄(0,0) − z₂(ζ₃)_{w₁z₂}(0,z₂).
    pub fn tau1(&self, z: &Quadruple) -> Result<Pair> {
        z.require_compat("τ¹")?;
        let qd = self.qp(self.d as i64);
        let qdi = self.qp(-(self.d as i64));
        let ql = self.qp(self.l as i64);
        let f = z.z1z2.on_line_v(&qd);
        let g = z.w1w2.on_line_u(&ql);
        let a1 = z.z1z2.sub(&u_of(&f)).divide_linear(&qd.neg(), &Cq::one())?;
        let z2uv = z.z1w2.diff_quot_u().diff_quot_v();
        let a2 = u_of(&a1.eval_v0()).sub(&z2uv.mul_v().scale(&qdi));
        let a3 = v_of(&a1.eval_u0());
        let a4 = Series2::constant(a1.eval00(), a1.trunc()).sub(&v_of(&z2uv.eval_u0()).mul_v().scale(&qdi));
        let b4 = z.w1w2.sub(&v_of(&g)).divide_linear(&Cq::int(-1), &ql)?;
        let z3uv = z.w1z2.diff_quot_u().diff_quot_v();
        let b1 = Series2::constant(b4.eval00(), b4.trunc()).sub(&v_of(&z3uv.eval_u0()).mul_v());
        let b2 = v_of(&b4.eval_u0());
        let b3 = u_of(&b4.eval_v0()).sub(&z3uv.mul_v());
        Ok((Quadruple::compatible(a1, a2, a3, a4)?, Quadruple::compatible(b1, b2, b3, b4)?))
    }

    /// M(α, β) = M_{x₂,l}α + M_{y₂,l}β ∈ O_{d,l+1}.
    pub fn m_op(&self, p: &Pair) -> Result<Quadruple> {
        Ok(p.0.lifted(Lifted::MX2, self.l, &self.q)?.add(&p.1.lifted(Lifted::MY2, self.l, &self.q)?))
    }

    /// N(α, β) = N_{y₁,d}α + N_{x₁,d}β ∈ O_{d+1,l}.
    pub fn n_op(&self, p: &Pair) -> Result<Quadruple> {
        Ok(p.0.lifted(Lifted::NY1, self.d, &self.q)?.add(&p.1.lifted(Lifted::NX1, self.d, &self.q)?))
    }

    /// If π_{d,l+1}(Mβ) = 0 or π_{d+1,l}(Nβ) = 0, then β = ∂⁰α; α is built
    /// through T⁻¹ and [`DiagParams::from_theta`].
    pub fn key_check(&self, b: &Pair) -> Result<KeyCheck> {
        let th = self.t_inv(b)?;
        let m = self.m_op(b)?.pi(self.d, self.l + 1, &self.q)?;
        let n = self.n_op(b)?.pi(self.d + 1, self.l, &self.q)?;
        let m_hyp = m.pair.vanishes().holds();
        let n_hyp = n.pair.vanishes().holds();
        let preimage = self.from_theta(&th).ok().filter(|a| match self.d0(a) {
            Ok(img) => pair_agree(&img, b).holds(),
            Err(_) => false,
        });
        let implication_holds = !(m_hyp || n_hyp) || preimage.is_some();
        Ok(KeyCheck { m_hypothesis: m_hyp, n_hypothesis: n_hyp, preimage, implication_holds })
    }
}
