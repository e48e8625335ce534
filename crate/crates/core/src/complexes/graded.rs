//! The complex assembled over all bidegrees d + l ≤ D:
//!
//!   d⁰ = ∂⁰ + M⁰ + N⁰,  d¹ = ∂¹ + M − N,
//!
//! where M⁰_{d,l} = [−qM_{y₂,l} ; M_{x₂,l}] and N⁰_{d,l} = [N_{x₁,d} ; −qN_{y₁,d}]
//! raise the bidegree to (d, l+1) and (d+1, l), and M, N on pairs are the
//! ones of [`DiagParams::m_op`], [`DiagParams::n_op`]. Both differentials
//! are lower triangular for the order on bidegrees, so d¹d⁰ = 0 splits into
//! five operator identities, one per way of moving up by at most two steps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::QParam;
use crate::complexes::diagonal::{pair_agree, DiagParams, Pair};
use crate::error::Result;
use crate::quadruple::{Lifted, Quadruple};
use crate::series::Agreement;

pub type Idx = (usize, usize);
pub type C0 = BTreeMap<Idx, Quadruple>;
pub type C1 = BTreeMap<Idx, Pair>;
pub type C2 = BTreeMap<Idx, Quadruple>;

/// Order on bidegrees: by total degree, ties broken by the first index
/// (left-increasing) or the second (right-increasing).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    LeftIncreasing,
    RightIncreasing,
}

impl Order {
    pub fn key(self, (i, j): Idx) -> (usize, usize) {
        match self {
            Order::LeftIncreasing => (i + j, i),
            Order::RightIncreasing => (i + j, j),
        }
    }

    pub fn less(self, a: Idx, b: Idx) -> bool {
        self.key(a) < self.key(b)
    }
}

/// All (d, l) with d + l ≤ D, sorted by `order`.
pub fn indices(max_degree: usize, order: Order) -> Vec<Idx> {
    let mut v: Vec<Idx> = (0..=max_degree).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect();
    v.sort_by_key(|&ix| order.key(ix));
    v
}

/// The five identities hidden in d¹d⁰ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedIdentity {
    /// ∂¹_{i,j}M⁰_{i,j−1} = −M_{i,j−1}∂⁰_{i,j−1}
    BoundaryM,
    /// ∂¹_{i,j}N⁰_{i−1,j} = N_{i−1,j}∂⁰_{i−1,j}
    BoundaryN,
    /// M_{i,j−1}M⁰_{i,j−2} = 0
    MM,
    /// M_{i,j−1}N⁰_{i−1,j−1} = N_{i−1,j}M⁰_{i−1,j−1}
    MN,
    /// N_{i−1,j}N⁰_{i−2,j} = 0
    NN,
}

impl MixedIdentity {
    pub const ALL: [MixedIdentity; 5] =
        [MixedIdentity::BoundaryM, MixedIdentity::BoundaryN, MixedIdentity::MM, MixedIdentity::MN, MixedIdentity::NN];

    pub fn name(self) -> &'static str {
        match self {
            MixedIdentity::BoundaryM => "d1 M0 = -M d0",
            MixedIdentity::BoundaryN => "d1 N0 = N d0",
            MixedIdentity::MM => "M M0 = 0",
            MixedIdentity::MN => "M N0 = N M0",
            MixedIdentity::NN => "N N0 = 0",
        }
    }

    /// Bidegree of the input for the target (i, j), if it exists.
    pub fn source(self, (i, j): Idx) -> Option<Idx> {
        match self {
            MixedIdentity::BoundaryM if j >= 1 => Some((i, j - 1)),
            MixedIdentity::BoundaryN if i >= 1 => Some((i - 1, j)),
            MixedIdentity::MM if j >= 2 => Some((i, j - 2)),
            MixedIdentity::MN if i >= 1 && j >= 1 => Some((i - 1, j - 1)),
            MixedIdentity::NN if i >= 2 => Some((i - 2, j)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub q: QParam,
    pub max_degree: usize,
    pub order: Order,
}

impl GradedComplex {
    pub fn new(q: &QParam, max_degree: usize, order: Order) -> GradedComplex {
        GradedComplex { q: q.clone(), max_degree, order }
    }

    fn cell(&self, (d, l): Idx) -> DiagParams {
        DiagParams::new(d, l, &self.q, 0)
    }

    /// M⁰_{d,l}ζ = (−qM_{y₂,l}ζ, M_{x₂,l}ζ) at (d, l+1).
    pub fn m0(&self, (_, l): Idx, z: &Quadruple) -> Result<Pair> {
        let a = z.lifted(Lifted::MY2, l, &self.q)?.scale(self.q.value()).neg();
        let b = z.lifted(Lifted::MX2, l, &self.q)?;
        Ok((a, b))
    }

    /// N⁰_{d,l}ζ = (N_{x₁,d}ζ, −qN_{y₁,d}ζ) at (d+1, l).
    pub fn n0(&self, (d, _): Idx, z: &Quadruple) -> Result<Pair> {
        let a = z.lifted(Lifted::NX1, d, &self.q)?;
        let b = z.lifted(Lifted::NY1, d, &self.q)?.scale(self.q.value()).neg();
        Ok((a, b))
    }

    pub fn m(&self, ix: Idx, p: &Pair) -> Result<Quadruple> {
        self.cell(ix).m_op(p)
    }

    pub fn n(&self, ix: Idx, p: &Pair) -> Result<Quadruple> {
        self.cell(ix).n_op(p)
    }

    fn in_range(&self, (d, l): Idx) -> bool {
        d + l <= self.max_degree
    }

    pub fn d0(&self, x: &C0) -> Result<C1> {
        let mut out: C1 = BTreeMap::new();
        let mut put = |ix: Idx, p: Pair| {
            let e = out.entry(ix).or_insert_with(|| (Quadruple::zero(true), Quadruple::zero(true)));
            *e = (e.0.add(&p.0), e.1.add(&p.1));
        };
        for (&(d, l), z) in x {
            put((d, l), self.cell((d, l)).d0(z)?);
            if self.in_range((d, l + 1)) {
                put((d, l + 1), self.m0((d, l), z)?);
            }
            if self.in_range((d + 1, l)) {
                put((d + 1, l), self.n0((d, l), z)?);
            }
        }
        Ok(out)
    }

    pub fn d1(&self, x: &C1) -> Result<C2> {
        let mut out: C2 = BTreeMap::new();
        let mut put = |ix: Idx, z: Quadruple| {
            let e = out.entry(ix).or_insert_with(|| Quadruple::zero(true));
            *e = e.add(&z);
        };
        for (&(d, l), p) in x {
            put((d, l), self.cell((d, l)).d1(p)?);
            if self.in_range((d, l + 1)) {
                put((d, l + 1), self.m((d, l), p)?);
            }
            if self.in_range((d + 1, l)) {
                put((d + 1, l), self.n((d, l), p)?.neg());
            }
        }
        Ok(out)
    }

    /// Left minus right side of one identity at target (i, j), applied to ζ
    /// in the source bidegree. `None` when the source does not exist.
    pub fn mixed_defect(&self, id: MixedIdentity, target: Idx, z: &Quadruple) -> Result<Option<Quadruple>> {
        let Some(src) = id.source(target) else { return Ok(None) };
        let (i, j) = target;
        let c = |ix: Idx| self.cell(ix);
        let v = match id {
            MixedIdentity::BoundaryM => {
                let lhs = c(target).d1(&self.m0(src, z)?)?;
                lhs.add(&self.m(src, &c(src).d0(z)?)?)
            }
            MixedIdentity::BoundaryN => {
                let lhs = c(target).d1(&self.n0(src, z)?)?;
                lhs.sub(&self.n(src, &c(src).d0(z)?)?)
            }
            MixedIdentity::MM => self.m((i, j - 1), &self.m0(src, z)?)?,
            MixedIdentity::MN => {
                let lhs = self.m((i, j - 1), &self.n0(src, z)?)?;
                lhs.sub(&self.n((i - 1, j), &self.m0(src, z)?)?)
            }
            MixedIdentity::NN => self.n((i - 1, j), &self.n0(src, z)?)?,
        };
        Ok(Some(v))
    }

    /// Every output cell of d⁰ or d¹ applied to an element supported at
    /// `ix` sits at or after `ix`.
    pub fn is_lower_triangular_at(&self, ix: Idx, z: &Quadruple) -> Result<bool> {
        let x: C0 = [(ix, z.clone())].into_iter().collect();
        let y = self.d0(&x)?;
        let ok0 = y.keys().all(|&k| !self.order.less(k, ix));
        let p: C1 = [(ix, (z.clone(), z.clone()))].into_iter().collect();
        let w = self.d1(&p)?;
        Ok(ok0 && w.keys().all(|&k| !self.order.less(k, ix)))
    }
}

pub fn c1_agree(a: &C1, b: &C1) -> Agreement {
    let mut ag = Agreement::trivial();
    for (k, p) in a {
        if let Some(o) = b.get(k) {
            ag = ag.and(pair_agree(p, o));
        } else {
            ag = ag.and(p.0.vanishes()).and(p.1.vanishes());
        }
    }
    ag
}

pub fn c2_vanishes(a: &C2) -> Agreement {
    a.values().fold(Agreement::trivial(), |ag, z| ag.and(z.vanishes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{make_q, Cq};
    use crate::random;

    #[test]
    fn index_orders() {
        let l = indices(2, Order::LeftIncreasing);
        assert_eq!(l, vec![(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
        let r = indices(2, Order::RightIncreasing);
        assert_eq!(r, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn five_identities_hold() {
        let q = make_q(Cq::rat(1, 2)).unwrap();
        let g = GradedComplex::new(&q, 4, Order::LeftIncreasing);
        let mut r = random::stream(41, 0);
        for &t in &indices(4, Order::LeftIncreasing) {
            for id in MixedIdentity::ALL {
                let z = random::compatible_quadruple(&mut r, 6);
                if let Some(v) = g.mixed_defect(id, t, &z).unwrap() {
                    assert!(v.vanishes().holds(), "{} at {:?}", id.name(), t);
                }
            }
        }
    }

    #[test]
    fn full_composite_vanishes_and_is_triangular() {
        let q = make_q(Cq::new(crate::coeff::Q::new(1, 3), crate::coeff::Q::new(1, 3))).unwrap();
        let g = GradedComplex::new(&q, 3, Order::LeftIncreasing);
        let mut r = random::stream(42, 0);
        let x: C0 = indices(3, g.order).into_iter().map(|ix| (ix, random::compatible_quadruple(&mut r, 6))).collect();
        assert!(c2_vanishes(&g.d1(&g.d0(&x).unwrap()).unwrap()).holds());
        for ix in indices(3, g.order) {
            assert!(g.is_lower_triangular_at(ix, &x[&ix]).unwrap());
        }
    }
}
