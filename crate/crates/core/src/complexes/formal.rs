//! The one-sided diagonal complexes over two commuting variables.
//!
//! Left side: chains Σ h_n(x₁,x₂) yⁿ with
//!   d⁰h = (y·h, Σ (x₂ − q^{n+1}x₁) h_n yⁿ),
//!   d¹(f, g) = Σ ((x₂ − qⁿx₁) f_n − g_{n−1}) yⁿ,
//!   π(h) = h₀(x, x).
//! Right side: chains Σ xⁿ h_n(y₁,y₂) with
//!   d⁰h = (Σ xⁿ (y₁ − q^{n+1}y₂) h_n, x·h),
//!   d¹(f, g) = x·f + Σ xⁿ (qⁿy₂ − y₁) g_n,
//!   π(h) = h₀(y, y).
//! In a [`Series2`] layer (u, v) stands for (x₁, x₂) or (y₁, y₂).
//!
//! The formal model stores truncated layers; the holomorphic model stores
//! exact polynomial layers. The operators are the same.

use serde::{Deserialize, Serialize};

use crate::coeff::{Cq, QParam};
use crate::error::{Error, Result};
use crate::random::Stream;
use crate::series::{Agreement, Series1, Series2, EXACT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// truncated power series layers
    Formal,
    /// exact polynomial layers
    Holomorphic,
}

/// Layers 0..=n of a chain; layers past the end are unknown.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub layers: Vec<Series2>,
}

impl Chain {
    pub fn new(layers: Vec<Series2>) -> Chain {
        Chain { layers }
    }

    pub fn zero(n: usize) -> Chain {
        Chain { layers: vec![Series2::zero(EXACT); n] }
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(Series2::is_zero)
    }

    fn zip(&self, o: &Chain, f: impl Fn(&Series2, &Series2) -> Series2) -> Chain {
        Chain { layers: self.layers.iter().zip(&o.layers).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Chain) -> Chain {
        self.zip(o, Series2::add)
    }

    pub fn sub(&self, o: &Chain) -> Chain {
        self.zip(o, Series2::sub)
    }

    /// Compare on the common layers and windows.
    pub fn agree(&self, o: &Chain) -> Agreement {
        let mut ag = Agreement::trivial();
        for (n, (a, b)) in self.layers.iter().zip(&o.layers).enumerate() {
            let mut x = a.agree(b);
            x.mismatch = x.mismatch.map(|_| (n, 0));
            ag = ag.and(x);
        }
        ag
    }

    pub fn vanishes(&self) -> Agreement {
        self.agree(&Chain::zero(self.len()))
    }

    /// Multiply by the grading variable: layer n moves to n + 1.
    fn shift_up(&self) -> Chain {
        let mut layers = vec![Series2::zero(EXACT)];
        layers.extend(self.layers.iter().take(self.len().saturating_sub(1)).cloned());
        Chain { layers }
    }

    fn shift_down(&self) -> Chain {
        Chain { layers: self.layers.iter().skip(1).cloned().collect() }
    }
}

pub type ChainPair = (Chain, Chain);

pub fn pair_agree(a: &ChainPair, b: &ChainPair) -> Agreement {
    a.0.agree(&b.0).and(a.1.agree(&b.1))
}

#[derive(Clone, Debug)]
pub struct OneSided {
    pub side: Side,
    pub q: QParam,
}

impl OneSided {
    pub fn new(side: Side, q: &QParam) -> OneSided {
        OneSided { side, q: q.clone() }
    }

    /// (a·u + b·v)·h
    fn mult_form(h: &Series2, a: &Cq, b: &Cq) -> Series2 {
        h.mul_u().scale(a).add(&h.mul_v().scale(b))
    }

    pub fn d0(&self, h: &Chain) -> ChainPair {
        let mut other = vec![];
        for (n, hn) in h.layers.iter().enumerate() {
            let c = self.q.pow(n as i64 + 1).neg();
            other.push(match self.side {
                Side::Left => OneSided::mult_form(hn, &c, &Cq::one()),
                Side::Right => OneSided::mult_form(hn, &Cq::one(), &c),
            });
        }
        let other = Chain::new(other);
        match self.side {
            Side::Left => (h.shift_up(), other),
            Side::Right => (other, h.shift_up()),
        }
    }

    pub fn d1(&self, p: &ChainPair) -> Chain {
        let (f, g) = p;
        let n = f.len().min(g.len());
        let mut out = vec![];
        for k in 0..n {
            let c = self.q.pow(k as i64);
            let layer = match self.side {
                Side::Left => {
                    let a = OneSided::mult_form(&f.layers[k], &c.neg(), &Cq::one());
                    if k > 0 {
                        a.sub(&g.layers[k - 1])
                    } else {
                        a
                    }
                }
                Side::Right => {
                    let a = OneSided::mult_form(&g.layers[k], &Cq::int(-1), &c);
                    if k > 0 {
                        a.add(&f.layers[k - 1])
                    } else {
                        a
                    }
                }
            };
            out.push(layer);
        }
        Chain::new(out)
    }

    /// π(h) = h₀(t, t).
    pub fn pi(&self, h: &Chain) -> Series1 {
        h.layers.first().map_or(Series1::zero(EXACT), |h0| h0.on_line_v(&Cq::one()))
    }

    /// For (f, g) ∈ ker d¹: h = Σ f_{n+1}·(grading)ⁿ on the left,
    /// h = Σ (grading)ⁿ g_{n+1} on the right, with d⁰h = (f, g).
    pub fn cocycle_witness(&self, p: &ChainPair) -> Result<Chain> {
        let ag = self.d1(p).vanishes();
        if !ag.holds() {
            return Err(Error::NotCocycle(format!("d¹ is nonzero at layer {:?}", ag.mismatch.map(|m| m.0))));
        }
        Ok(match self.side {
            Side::Left => p.0.shift_down(),
            Side::Right => p.1.shift_down(),
        })
    }

    /// For h ∈ ker π: a pair with d¹(f, g) = h. On the left f = f₀ with
    /// h₀ = (x₂ − x₁)f₀ and g = −Σ h_{n+1} yⁿ; on the right
    /// f = Σ xⁿ h_{n+1} and g = g₀ with h₀ = (y₂ − y₁)g₀.
    pub fn kernel_witness(&self, h: &Chain) -> Result<ChainPair> {
        let ag = self.pi(h).vanishes();
        if !ag.holds() {
            return Err(Error::Precondition(format!(
                "π does not vanish: h₀(t,t) has a nonzero coefficient at degree {:?}",
                ag.mismatch.map(|m| m.0)
            )));
        }
        let n = h.len();
        let head = h.layers[0].divide_diagonal()?;
        let mut first = Chain::zero(n);
        first.layers[0] = head;
        let rest = h.shift_down();
        Ok(match self.side {
            Side::Left => (first, Chain::new(rest.layers.iter().map(Series2::neg).collect())),
            Side::Right => (rest, first),
        })
    }
}

/// A random chain with `n` layers: truncated at `trunc` for the formal
/// model, polynomials of total degree ≤ `trunc` for the holomorphic one.
pub fn random_chain(r: &mut Stream, model: Model, n: usize, trunc: usize) -> Chain {
    Chain::new(
        (0..n)
            .map(|_| {
                let s = crate::random::series2(r, trunc);
                match model {
                    Model::Formal => s,
                    Model::Holomorphic => Series2::from_terms(&s.terms(), EXACT),
                }
            })
            .collect(),
    )
}

/// A random chain in ker π: layer 0 is (v − u)·(random).
pub fn random_pi_kernel(r: &mut Stream, model: Model, n: usize, trunc: usize) -> Chain {
    let mut c = random_chain(r, model, n, trunc);
    let h0 = random_chain(r, model, 1, trunc.saturating_sub(1)).layers.remove(0);
    c.layers[0] = h0.mul_v().sub(&h0.mul_u());
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_q;
    use crate::random;

    #[test]
    fn both_sides_are_complexes_with_witnesses() {
        let q = make_q(Cq::rat(2, 3)).unwrap();
        let mut r = random::stream(31, 0);
        for side in [Side::Left, Side::Right] {
            let cx = OneSided::new(side, &q);
            for model in [Model::Formal, Model::Holomorphic] {
                for _ in 0..3 {
                    let h = random_chain(&mut r, model, 6, 5);
                    let dh = cx.d0(&h);
                    assert!(cx.d1(&dh).vanishes().holds());
                    let back = cx.cocycle_witness(&dh).unwrap();
                    assert!(pair_agree(&cx.d0(&back), &dh).holds());
                    let k = random_pi_kernel(&mut r, model, 6, 5);
                    let w = cx.kernel_witness(&k).unwrap();
                    assert!(cx.d1(&w).agree(&k).holds());
                    let p = (random_chain(&mut r, model, 6, 5), random_chain(&mut r, model, 6, 5));
                    assert!(cx.pi(&cx.d1(&p)).vanishes().holds());
                }
            }
        }
    }

    #[test]
    fn witnesses_reject_and_zero_maps_to_zero() {
        let q = make_q(Cq::rat(1, 2)).unwrap();
        let cx = OneSided::new(Side::Left, &q);
        let one = Chain::new(vec![Series2::constant(Cq::one(), EXACT)]);
        assert!(cx.kernel_witness(&one).is_err());
        let p = (one.clone(), Chain::zero(1));
        assert!(matches!(cx.cocycle_witness(&p), Err(Error::NotCocycle(_))));
        let z = Chain::zero(4);
        assert!(cx.cocycle_witness(&(z.clone(), z.clone())).unwrap().is_zero());
        let (a, b) = cx.kernel_witness(&z).unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn d0_is_injective() {
        let q = make_q(Cq::rat(1, 3)).unwrap();
        let mut r = random::stream(32, 0);
        for side in [Side::Left, Side::Right] {
            let cx = OneSided::new(side, &q);
            for _ in 0..5 {
                let h = random_chain(&mut r, Model::Formal, 5, 4);
                if h.is_zero() {
                    continue;
                }
                let (a, b) = cx.d0(&h);
                assert!(!(a.is_zero() && b.is_zero()));
            }
        }
    }
}
