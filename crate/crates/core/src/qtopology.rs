//! Regions of ℂ_xy = ℂ_x ∪ ℂ_y in the q-topology, for contractive q.
//!
//! A closed set of the q-topology is either everything or a closed set not
//! containing 0 that is stable under z ↦ q⁻¹z; the q-closure of a set
//! avoiding 0 is therefore the closure of its backward orbit ∪_{k≥0} q^{-k}S.
//! Regions are finite unions of the primitives in [`Prim`]; all radii are
//! kept squared so every test is exact rational arithmetic. The origin is
//! the common point of both axes and is tracked once, by a flag.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::coeff::{Cq, QParam, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// A point of ℂ_xy: (λ, 0) on the x-axis or (0, μ) on the y-axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPoint {
    pub axis: Axis,
    pub value: Cq,
}

impl QPoint {
    /// The origin is always stored on the x-axis so that equality is plain
    /// structural equality.
    pub fn new(axis: Axis, value: Cq) -> QPoint {
        let axis = if value.is_zero() { Axis::X } else { axis };
        QPoint { axis, value }
    }

    pub fn origin() -> QPoint {
        QPoint::new(Axis::X, Cq::zero())
    }

    /// From coordinates (λ, μ); fails off the two axes.
    pub fn from_coords(l: Cq, m: Cq) -> Result<QPoint> {
        match (l.is_zero(), m.is_zero()) {
            (_, true) => Ok(QPoint::new(Axis::X, l)),
            (true, false) => Ok(QPoint::new(Axis::Y, m)),
            _ => Err(Error::Domain(format!("({}, {}) is off ℂ_xy: λμ ≠ 0", l, m))),
        }
    }

    pub fn coords(&self) -> (Cq, Cq) {
        match self.axis {
            Axis::X => (self.value.clone(), Cq::zero()),
            Axis::Y => (Cq::zero(), self.value.clone()),
        }
    }

    pub fn is_origin(&self) -> bool {
        self.value.is_zero()
    }
}

/// Building blocks of a region on one axis; radii are squared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prim {
    FullAxis,
    /// |z|² < r2 (≤ when closed)
    OriginDisk { r2: Q, closed: bool },
    /// inner2 ≤ |z|² ≤ outer2 with the given boundary behaviour; no outer
    /// radius means unbounded
    Annulus { inner2: Q, outer2: Option<Q>, inner_closed: bool, outer_closed: bool },
    /// ∪_{k≥0} |q|^{-2k}·(annulus), i.e. all z with q^k z in the annulus
    /// for some k ≥ 0
    AnnulusOrbit { inner2: Q, outer2: Q, inner_closed: bool, outer_closed: bool },
    /// |z − center|² < r2 (≤ when closed)
    Disk { center: Cq, r2: Q, closed: bool },
    /// {q^{-k}·base : k ≥ 0}
    BackwardOrbit { base: Cq },
    /// {q^k·base : k ≥ 0} ∪ {0}
    ForwardOrbitWithLimit { base: Cq },
    FinitePointSet { points: Vec<Cq> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRegion {
    pub q: QParam,
    pub origin: bool,
    pub x: Vec<Prim>,
    pub y: Vec<Prim>,
}

/// An interval of squared moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Iv {
    lo: Q,
    lo_c: bool,
    hi: Option<Q>,
    hi_c: bool,
}

impl Iv {
    fn has(&self, t: &Q) -> bool {
        let above = *t > self.lo || (self.lo_c && *t == self.lo);
        let below = match &self.hi {
            None => true,
            Some(h) => t < h || (self.hi_c && t == h),
        };
        above && below
    }

    fn within(&self, o: &Iv) -> bool {
        let lo_ok = o.lo < self.lo || (o.lo == self.lo && (o.lo_c || !self.lo_c));
        let hi_ok = match (&self.hi, &o.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a < b || (a == b && (o.hi_c || !self.hi_c)),
        };
        lo_ok && hi_ok
    }

    fn scaled(&self, s: &Q) -> Iv {
        Iv { lo: self.lo.mul(s), lo_c: self.lo_c, hi: self.hi.as_ref().map(|h| h.mul(s)), hi_c: self.hi_c }
    }

    fn has_origin(&self) -> bool {
        self.lo.is_zero() && self.lo_c
    }

    fn closed(&self) -> Iv {
        Iv { lo_c: true, hi_c: self.hi.is_some(), ..self.clone() }
    }

    fn to_prim(&self) -> Prim {
        if self.has_origin() {
            match &self.hi {
                None => Prim::FullAxis,
                Some(h) => Prim::OriginDisk { r2: h.clone(), closed: self.hi_c },
            }
        } else {
            Prim::Annulus {
                inner2: self.lo.clone(),
                outer2: self.hi.clone(),
                inner_closed: self.lo_c,
                outer_closed: self.hi_c && self.hi.is_some(),
            }
        }
    }

    fn to_orbit(&self) -> Prim {
        Prim::AnnulusOrbit {
            inner2: self.lo.clone(),
            outer2: self.hi.clone().expect("bounded"),
            inner_closed: self.lo_c,
            outer_closed: self.hi_c,
        }
    }
}

fn merge(mut v: Vec<Iv>) -> Vec<Iv> {
    v.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_c.cmp(&a.lo_c)));
    let mut out: Vec<Iv> = vec![];
    for iv in v {
        if let Some(cur) = out.last_mut() {
            let joins = match &cur.hi {
                None => true,
                Some(h) => iv.lo < *h || (iv.lo == *h && (cur.hi_c || iv.lo_c)),
            };
            if joins {
                cur.hi = match (&cur.hi, &iv.hi) {
                    (None, _) | (_, None) => None,
                    (Some(a), Some(b)) => {
                        if a == b {
                            cur.hi_c = cur.hi_c || iv.hi_c;
                            Some(a.clone())
                        } else if a > b {
                            Some(a.clone())
                        } else {
                            cur.hi_c = iv.hi_c;
                            Some(b.clone())
                        }
                    }
                };
                if cur.hi.is_none() {
                    cur.hi_c = false;
                }
                continue;
            }
        }
        out.push(iv);
    }
    out
}

/// Sign of x + 2√p (p ≥ 0).
fn cmp_plus(x: &Q, p: &Q) -> Ordering {
    if x.signum() >= 0 {
        if x.is_zero() && p.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    } else {
        Q::int(4).mul(p).cmp(&x.mul(x))
    }
}

/// Sign of x − 2√p (p ≥ 0).
fn cmp_minus(x: &Q, p: &Q) -> Ordering {
    if x.signum() <= 0 {
        if x.is_zero() && p.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Less
        }
    } else {
        x.mul(x).cmp(&Q::int(4).mul(p))
    }
}

fn point_key(z: &Cq) -> (Q, Q, Q) {
    (z.norm_sqr(), z.re.clone(), z.im.clone())
}

#[derive(Clone, Debug)]
struct Disk {
    c: Cq,
    r2: Q,
    closed: bool,
}

impl Disk {
    fn has(&self, z: &Cq) -> bool {
        let d = (z - &self.c).norm_sqr();
        d < self.r2 || (self.closed && d == self.r2)
    }

    /// self ⊆ o: √D + r₁ ≤ r₂, strict when a closed disk sits in an open one.
    fn within(&self, o: &Disk) -> bool {
        let d = (&self.c - &o.c).norm_sqr();
        let x = d.add(&self.r2).sub(&o.r2);
        let s = cmp_plus(&x, &d.mul(&self.r2));
        if self.closed && !o.closed {
            s == Ordering::Less
        } else {
            s != Ordering::Greater
        }
    }

    /// Range of |z|² is inside the interval.
    fn within_iv(&self, iv: &Iv) -> bool {
        let c2 = self.c.norm_sqr();
        let p = c2.mul(&self.r2);
        let strict_hi = !(iv.hi_c || !self.closed);
        let hi_ok = match &iv.hi {
            None => true,
            Some(h) => {
                // (|c| + r)² vs h
                let s = cmp_plus(&c2.add(&self.r2).sub(h), &p);
                if strict_hi {
                    s == Ordering::Less
                } else {
                    s != Ordering::Greater
                }
            }
        };
        let lo_ok = if iv.has_origin() {
            true
        } else {
            // |c| > r and (|c| − r)² vs lo
            let strict_lo = !(iv.lo_c || !self.closed);
            c2 > self.r2 && {
                let s = cmp_minus(&c2.add(&self.r2).sub(&iv.lo), &p);
                if strict_lo {
                    s == Ordering::Greater
                } else {
                    s != Ordering::Less
                }
            }
        };
        hi_ok && lo_ok
    }
}

/// The primitives of one axis, sorted into kinds.
#[derive(Clone, Debug, Default)]
struct View {
    ivs: Vec<Iv>,
    orbits: Vec<Iv>,
    disks: Vec<Disk>,
    backs: Vec<Cq>,
    fwds: Vec<Cq>,
    points: Vec<Cq>,
}

const ORBIT_STEPS: usize = 100_000;

impl View {
    fn from_prims(ps: &[Prim]) -> View {
        let mut v = View::default();
        for p in ps {
            match p {
                Prim::FullAxis => v.ivs.push(Iv { lo: Q::zero(), lo_c: true, hi: None, hi_c: false }),
                Prim::OriginDisk { r2, closed } => {
                    v.ivs.push(Iv { lo: Q::zero(), lo_c: true, hi: Some(r2.clone()), hi_c: *closed })
                }
                Prim::Annulus { inner2, outer2, inner_closed, outer_closed } => v.ivs.push(Iv {
                    lo: inner2.clone(),
                    lo_c: *inner_closed,
                    hi: outer2.clone(),
                    hi_c: *outer_closed && outer2.is_some(),
                }),
                Prim::AnnulusOrbit { inner2, outer2, inner_closed, outer_closed } => v.orbits.push(Iv {
                    lo: inner2.clone(),
                    lo_c: *inner_closed,
                    hi: Some(outer2.clone()),
                    hi_c: *outer_closed,
                }),
                Prim::Disk { center, r2, closed } => v.disks.push(Disk { c: center.clone(), r2: r2.clone(), closed: *closed }),
                Prim::BackwardOrbit { base } => v.backs.push(base.clone()),
                Prim::ForwardOrbitWithLimit { base } => v.fwds.push(base.clone()),
                Prim::FinitePointSet { points } => v.points.extend(points.iter().cloned()),
            }
        }
        v
    }

    fn in_orbit_iv(o: &Iv, t: &Q, rho: &Q) -> bool {
        let mut s = t.clone();
        for _ in 0..ORBIT_STEPS {
            if s < o.lo || s.is_zero() {
                return false;
            }
            if o.has(&s) {
                return true;
            }
            s = s.mul(rho);
        }
        false
    }

    fn contains(&self, z: &Cq, q: &QParam) -> bool {
        let t = z.norm_sqr();
        let rho = q.modulus_sqr();
        self.ivs.iter().any(|iv| iv.has(&t))
            || self.orbits.iter().any(|o| View::in_orbit_iv(o, &t, &rho))
            || self.disks.iter().any(|d| d.has(z))
            || self.backs.iter().any(|b| in_backward(z, b, q))
            || self.fwds.iter().any(|b| in_forward(z, b, q))
            || self.points.iter().any(|p| p == z)
    }

    fn has_origin(&self) -> bool {
        let z = Cq::zero();
        self.ivs.iter().any(Iv::has_origin)
            || self.disks.iter().any(|d| d.has(&z))
            || !self.fwds.is_empty()
            || self.points.iter().any(Cq::is_zero)
    }

    fn iv_covered(&self, iv: &Iv, rho: &Q) -> bool {
        if self.ivs.iter().any(|j| iv.within(j)) {
            return true;
        }
        // inside a single copy of an annulus orbit
        let Some(hi) = &iv.hi else { return false };
        let _ = hi;
        for o in &self.orbits {
            let mut c = o.clone();
            for _ in 0..ORBIT_STEPS {
                if iv.within(&c) {
                    return true;
                }
                if c.lo > iv.lo {
                    break;
                }
                c = c.scaled(&rho.inv());
            }
        }
        false
    }

    fn orbit_covered(&self, o: &Iv, rho: &Q) -> bool {
        let tail = Iv { hi: None, hi_c: false, ..o.clone() };
        if self.ivs.iter().any(|j| tail.within(j)) {
            return true;
        }
        self.orbits.iter().any(|p| {
            let mut c = p.clone();
            for _ in 0..ORBIT_STEPS {
                if o.within(&c) {
                    return true;
                }
                if c.lo > o.lo {
                    break;
                }
                c = c.scaled(&rho.inv());
            }
            false
        })
    }

    fn disk_covered(&self, d: &Disk, skip: Option<usize>) -> bool {
        self.ivs.iter().any(|iv| d.within_iv(iv))
            || self.disks.iter().enumerate().any(|(i, o)| Some(i) != skip && d.within(o))
    }

    /// Every point of the backward orbit of b lies in the view.
    fn backward_covered(&self, b: &Cq, q: &QParam) -> bool {
        let rho = q.modulus_sqr();
        let qi = q.value().inv();
        let mut z = b.clone();
        for _ in 0..ORBIT_STEPS {
            let t = z.norm_sqr();
            // tails that are automatically inside
            if self.ivs.iter().any(|iv| iv.hi.is_none() && iv.has(&t))
                || self.orbits.iter().any(|o| View::in_orbit_iv(o, &t, &rho))
                || self.backs.iter().any(|c| in_backward(&z, c, q))
            {
                return true;
            }
            if !self.contains(&z, q) {
                return false;
            }
            z = &z * &qi;
        }
        false
    }

    fn forward_covered(&self, b: &Cq, q: &QParam) -> bool {
        if !self.has_origin() {
            return false;
        }
        let mut z = b.clone();
        for _ in 0..ORBIT_STEPS {
            let t = z.norm_sqr();
            if self.ivs.iter().any(|iv| iv.has_origin() && iv.has(&t))
                || self.fwds.iter().any(|c| in_forward(&z, c, q))
            {
                return true;
            }
            if !self.contains(&z, q) {
                return false;
            }
            z = &z * q.value();
        }
        false
    }

    fn covers(&self, p: &Prim, q: &QParam) -> bool {
        let rho = q.modulus_sqr();
        let v = View::from_prims(std::slice::from_ref(p));
        v.ivs.iter().all(|iv| self.iv_covered(iv, &rho))
            && v.orbits.iter().all(|o| self.orbit_covered(o, &rho))
            && v.disks.iter().all(|d| self.disk_covered(d, None))
            && v.backs.iter().all(|b| self.backward_covered(b, q))
            && v.fwds.iter().all(|b| self.forward_covered(b, q))
            && v.points.iter().all(|z| self.contains(z, q))
    }

    /// Sorted, non-redundant form; returns the primitives and whether the
    /// origin is included.
    fn canonical(mut self, q: &QParam) -> (Vec<Prim>, bool) {
        let rho = q.modulus_sqr();
        // annulus orbits whose copies overlap fill out a half-line
        let mut orbits = vec![];
        for o in std::mem::take(&mut self.orbits) {
            let hi = o.hi.clone().expect("bounded");
            let next_lo = o.lo.div(&rho);
            if hi > next_lo || (hi == next_lo && o.hi_c && o.lo_c) {
                self.ivs.push(Iv { hi: None, hi_c: false, ..o });
            } else {
                orbits.push(o);
            }
        }
        self.ivs = merge(std::mem::take(&mut self.ivs));
        orbits.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)).then(b.lo_c.cmp(&a.lo_c)));
        orbits.dedup();
        let mut kept = vec![];
        for (i, o) in orbits.iter().enumerate() {
            let others = View { ivs: self.ivs.clone(), orbits: orbits.iter().enumerate().filter(|(j, _)| *j != i).map(|x| x.1.clone()).collect(), ..View::default() };
            if !others.orbit_covered(o, &rho) {
                kept.push(o.clone());
            }
        }
        // an orbit covered only by another orbit that is itself covered by
        // this one means they are equal; dedup above handled identical copies
        self.orbits = kept;

        let mut disks: Vec<Disk> = vec![];
        for d in std::mem::take(&mut self.disks) {
            disks.push(d);
        }
        let mut kept = vec![];
        for i in 0..disks.len() {
            let v = View { ivs: self.ivs.clone(), disks: disks.clone(), ..View::default() };
            let dup_earlier = (0..i).any(|j| disks[j].within(&disks[i]) && disks[i].within(&disks[j]));
            let covered_by_other = (0..disks.len()).any(|j| {
                j != i && disks[i].within(&disks[j]) && !(disks[j].within(&disks[i]))
            });
            if !(dup_earlier || covered_by_other || self.ivs.iter().any(|iv| disks[i].within_iv(iv))) {
                let _ = v;
                kept.push(disks[i].clone());
            }
        }
        self.disks = kept;

        let mut origin = self.has_origin();

        // forward orbits contain 0
        self.points.retain(|z| !z.is_zero());
        self.points.sort_by_key(point_key);
        self.points.dedup();

        // extend orbits by adjacent points, then drop contained ones
        let qv = q.value().clone();
        let qi = qv.inv();
        let mut backs = std::mem::take(&mut self.backs);
        loop {
            let mut changed = false;
            for b in backs.iter_mut() {
                let prev = &*b * &qv;
                if let Some(k) = self.points.iter().position(|p| *p == prev) {
                    self.points.remove(k);
                    *b = prev;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut fwds = std::mem::take(&mut self.fwds);
        loop {
            let mut changed = false;
            for b in fwds.iter_mut() {
                let prev = &*b * &qi;
                if let Some(k) = self.points.iter().position(|p| *p == prev) {
                    self.points.remove(k);
                    *b = prev;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        backs.sort_by_key(point_key);
        backs.dedup();
        fwds.sort_by_key(point_key);
        fwds.dedup();
        origin = origin || !fwds.is_empty();

        let base = View { ivs: self.ivs.clone(), orbits: self.orbits.clone(), disks: self.disks.clone(), ..View::default() };
        let mut kb = vec![];
        for (i, b) in backs.iter().enumerate() {
            let others: Vec<Cq> = backs.iter().enumerate().filter(|(j, _)| *j != i).map(|x| x.1.clone()).collect();
            let v = View { backs: others, ..base.clone() };
            if !v.backward_covered(b, q) {
                kb.push(b.clone());
            }
        }
        let mut kf = vec![];
        for (i, b) in fwds.iter().enumerate() {
            let others: Vec<Cq> = fwds.iter().enumerate().filter(|(j, _)| *j != i).map(|x| x.1.clone()).collect();
            let mut v0 = View { fwds: others, ..base.clone() };
            v0.points.push(Cq::zero());
            if !v0.forward_covered(b, q) {
                kf.push(b.clone());
            }
        }
        let full = View { backs: kb.clone(), fwds: kf.clone(), ..base };
        let pts: Vec<Cq> = self.points.iter().filter(|z| !full.contains(z, q)).cloned().collect();

        let mut out: Vec<Prim> = self.ivs.iter().map(Iv::to_prim).collect();
        out.extend(self.orbits.iter().map(Iv::to_orbit));
        out.extend(self.disks.iter().map(|d| Prim::Disk { center: d.c.clone(), r2: d.r2.clone(), closed: d.closed }));
        out.extend(kb.into_iter().map(|base| Prim::BackwardOrbit { base }));
        out.extend(kf.into_iter().map(|base| Prim::ForwardOrbitWithLimit { base }));
        if !pts.is_empty() {
            out.push(Prim::FinitePointSet { points: pts });
        }
        (out, origin)
    }
}

/// z = q^{-k}b for some k ≥ 0, i.e. b = q^k z.
pub fn in_backward(z: &Cq, b: &Cq, q: &QParam) -> bool {
    power_relation(b, z, q)
}

/// z = q^k b for some k ≥ 0, or z = 0.
pub fn in_forward(z: &Cq, b: &Cq, q: &QParam) -> bool {
    z.is_zero() || power_relation(z, b, q)
}

/// a = q^k b for some k ≥ 0 (a, b ≠ 0), decided through |a|²/|b|² = |q|^{2k}.
fn power_relation(a: &Cq, b: &Cq, q: &QParam) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let s = a.norm_sqr().div(&b.norm_sqr());
    let rho = q.modulus_sqr();
    let mut p = Q::one();
    let mut k = 0i64;
    while p > s && k < ORBIT_STEPS as i64 {
        p = p.mul(&rho);
        k += 1;
    }
    p == s && &q.pow(k) * b == *a
}

fn check_radius(r2: &Q, what: &str) -> Result<()> {
    if r2.signum() <= 0 {
        return Err(Error::Domain(format!("{} must be positive, got squared radius {}", what, r2)));
    }
    Ok(())
}

impl QRegion {
    pub fn empty(q: &QParam) -> Result<QRegion> {
        q.require_contractive()?;
        Ok(QRegion { q: q.clone(), origin: false, x: vec![], y: vec![] })
    }

    pub fn full(q: &QParam) -> Result<QRegion> {
        q.require_contractive()?;
        Ok(QRegion { q: q.clone(), origin: true, x: vec![Prim::FullAxis], y: vec![Prim::FullAxis] })
    }

    /// Canonical region from primitives on each axis.
    pub fn from_parts(q: &QParam, origin: bool, x: Vec<Prim>, y: Vec<Prim>) -> Result<QRegion> {
        q.require_contractive()?;
        for p in x.iter().chain(&y) {
            match p {
                Prim::OriginDisk { r2, .. } | Prim::Disk { r2, .. } => check_radius(r2, "radius")?,
                Prim::Annulus { inner2, outer2, .. } => {
                    if inner2.signum() < 0 || outer2.as_ref().is_some_and(|o| o < inner2) {
                        return Err(Error::Domain(format!("bad annulus radii {} / {:?}", inner2, outer2)));
                    }
                }
                Prim::AnnulusOrbit { inner2, outer2, .. } => {
                    check_radius(inner2, "inner radius of an annulus orbit")?;
                    if outer2 < inner2 {
                        return Err(Error::Domain("annulus orbit with outer < inner".into()));
                    }
                }
                Prim::BackwardOrbit { base } | Prim::ForwardOrbitWithLimit { base } if base.is_zero() => {
                    return Err(Error::Domain("orbit of the origin: use the origin flag".into()));
                }
                _ => {}
            }
        }
        let (cx, ox) = View::from_prims(&x).canonical(q);
        let (cy, oy) = View::from_prims(&y).canonical(q);
        Ok(QRegion { q: q.clone(), origin: origin || ox || oy, x: cx, y: cy })
    }

    pub fn on_axis(q: &QParam, axis: Axis, prims: Vec<Prim>) -> Result<QRegion> {
        match axis {
            Axis::X => QRegion::from_parts(q, false, prims, vec![]),
            Axis::Y => QRegion::from_parts(q, false, vec![], prims),
        }
    }

    pub fn points(q: &QParam, pts: &[QPoint]) -> Result<QRegion> {
        let mut x = vec![];
        let mut y = vec![];
        let mut origin = false;
        for p in pts {
            if p.is_origin() {
                origin = true;
            } else if p.axis == Axis::X {
                x.push(p.value.clone());
            } else {
                y.push(p.value.clone());
            }
        }
        let wrap = |v: Vec<Cq>| if v.is_empty() { vec![] } else { vec![Prim::FinitePointSet { points: v }] };
        QRegion::from_parts(q, origin, wrap(x), wrap(y))
    }

    pub fn axis(&self, a: Axis) -> &[Prim] {
        match a {
            Axis::X => &self.x,
            Axis::Y => &self.y,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.origin && self.x.is_empty() && self.y.is_empty()
    }

    fn check_q(&self, o: &QRegion) -> Result<()> {
        if self.q != o.q {
            return Err(Error::Usage(format!("regions over different q: {} vs {}", self.q, o.q)));
        }
        Ok(())
    }

    pub fn union(&self, o: &QRegion) -> Result<QRegion> {
        self.check_q(o)?;
        let cat = |a: &[Prim], b: &[Prim]| a.iter().chain(b).cloned().collect::<Vec<_>>();
        QRegion::from_parts(&self.q, self.origin || o.origin, cat(&self.x, &o.x), cat(&self.y, &o.y))
    }

    pub fn contains(&self, p: &QPoint) -> bool {
        if p.is_origin() {
            return self.origin;
        }
        View::from_prims(self.axis(p.axis)).contains(&p.value, &self.q)
    }

    /// self ⊆ o, decided primitive by primitive.
    pub fn is_subset(&self, o: &QRegion) -> bool {
        if self.q != o.q || (self.origin && !o.origin) {
            return false;
        }
        [Axis::X, Axis::Y].into_iter().all(|a| {
            let mut v = View::from_prims(o.axis(a));
            if o.origin {
                v.points.push(Cq::zero());
            }
            self.axis(a).iter().all(|p| v.covers(p, &self.q))
        })
    }

    /// Whether the region is q-open as a subset of ℂ_xy: each axis part is
    /// open, contains a neighbourhood of 0 and satisfies q·S ⊆ S.
    pub fn is_q_open(&self) -> bool {
        self.origin && [Axis::X, Axis::Y].into_iter().all(|a| self.is_q_open_on(a))
    }

    /// The same test for the part on one axis, as a subset of ℂ.
    pub fn is_q_open_on(&self, a: Axis) -> bool {
        if !self.origin {
            return false;
        }
        let v = View::from_prims(self.axis(a));
        if !v.orbits.is_empty() || !v.backs.is_empty() || !v.fwds.is_empty() || !v.points.is_empty() {
            return false;
        }
        let rho = self.q.modulus_sqr();
        let zero = Cq::zero();
        let nbhd = v.ivs.iter().any(|iv| iv.has_origin() && iv.hi.as_ref().is_none_or(|h| h.signum() > 0))
            || v.disks.iter().any(|d| !d.closed && d.has(&zero));
        let ivs_open = v.ivs.iter().all(|iv| (iv.has_origin() || !iv.lo_c) && (iv.hi.is_none() || !iv.hi_c));
        let disks_open = v.disks.iter().all(|d| !d.closed);
        let ivs_spiral = v.ivs.iter().all(|iv| {
            let s = iv.scaled(&rho);
            v.ivs.iter().any(|j| s.within(j))
        });
        let disks_spiral = v.disks.iter().all(|d| {
            let s = Disk { c: &d.c * self.q.value(), r2: d.r2.mul(&rho), closed: d.closed };
            v.disk_covered(&s, None)
        });
        nbhd && ivs_open && disks_open && ivs_spiral && disks_spiral
    }

    /// q-closure: everything if the origin is present, otherwise the closure
    /// of the backward orbit of each primitive.
    pub fn q_closure(&self) -> Result<QRegion> {
        if self.origin {
            return QRegion::full(&self.q);
        }
        let rho = self.q.modulus_sqr();
        let mut parts = [vec![], vec![]];
        for (k, a) in [Axis::X, Axis::Y].into_iter().enumerate() {
            for p in self.axis(a) {
                let v = View::from_prims(std::slice::from_ref(p));
                for iv in &v.ivs {
                    let c = iv.closed();
                    if c.lo.is_zero() {
                        // 0 is in the ordinary closure
                        return QRegion::full(&self.q);
                    }
                    match &c.hi {
                        Some(h) if h.mul(&rho) < c.lo => parts[k].push(c.to_orbit()),
                        _ => parts[k].push(Iv { hi: None, hi_c: false, ..c }.to_prim()),
                    }
                }
                for o in &v.orbits {
                    parts[k].push(o.closed().to_orbit());
                }
                if !v.disks.is_empty() {
                    return Err(Error::Precondition(
                        "q-closure of an off-centre disk avoiding 0 is outside the region algebra".into(),
                    ));
                }
                for b in v.backs.iter().chain(&v.points) {
                    parts[k].push(Prim::BackwardOrbit { base: b.clone() });
                }
            }
        }
        let [x, y] = parts;
        QRegion::from_parts(&self.q, false, x, y)
    }
}

/// {p}⁻ = {q^{-k}p : k ≥ 0}; the whole of ℂ_xy for p = 0.
pub fn q_closure_point(p: &QPoint, q: &QParam) -> Result<QRegion> {
    q.require_contractive()?;
    if p.is_origin() {
        return QRegion::full(q);
    }
    QRegion::on_axis(q, p.axis, vec![Prim::BackwardOrbit { base: p.value.clone() }])
}

/// {p}_q = {q^k p : k ≥ 0} ∪ {0}.
pub fn q_hull_point(p: &QPoint, q: &QParam) -> Result<QRegion> {
    q.require_contractive()?;
    if p.is_origin() {
        return QRegion::from_parts(q, true, vec![], vec![]);
    }
    QRegion::on_axis(q, p.axis, vec![Prim::ForwardOrbitWithLimit { base: p.value.clone() }])
}

pub fn q_closure_region(r: &QRegion) -> Result<QRegion> {
    r.q.require_contractive()?;
    r.q_closure()
}

/// U = B(0,ε) ∪ ⋃_{m=0}^{n} B(q^m λ, |q|^m δ) on the axis of λ, with n the
/// least integer such that |q|^{2(n+1)}·2(|λ|² + δ²) ≤ ε²; this makes the
/// last disk's image under q fall inside B(0,ε). Radii are given squared.
pub fn runge_neighborhood(lambda: &QPoint, eps2: &Q, delta2: &Q, q: &QParam) -> Result<QRegion> {
    q.require_contractive()?;
    check_radius(eps2, "ε")?;
    check_radius(delta2, "δ")?;
    let mut prims = vec![Prim::OriginDisk { r2: eps2.clone(), closed: false }];
    if !lambda.is_origin() {
        let rho = q.modulus_sqr();
        let l2 = lambda.value.norm_sqr();
        let bound = Q::int(2).mul(&l2.add(delta2));
        let mut n = 0usize;
        let mut p = rho.clone();
        while p.mul(&bound) > *eps2 {
            p = p.mul(&rho);
            n += 1;
        }
        let mut rm = Q::one();
        for m in 0..=n {
            prims.push(Prim::Disk { center: &q.pow(m as i64) * &lambda.value, r2: rm.mul(delta2), closed: false });
            rm = rm.mul(&rho);
        }
    }
    QRegion::on_axis(q, lambda.axis, prims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_q;

    fn q() -> QParam {
        make_q(Cq::rat(1, 2)).unwrap()
    }

    fn x(v: Cq) -> QPoint {
        QPoint::new(Axis::X, v)
    }

    #[test]
    fn origin_is_shared() {
        assert_eq!(QPoint::new(Axis::Y, Cq::zero()), QPoint::new(Axis::X, Cq::zero()));
        assert!(QPoint::from_coords(Cq::one(), Cq::one()).is_err());
    }

    #[test]
    fn point_closures_and_hulls() {
        let q = q();
        let c = q_closure_point(&x(Cq::one()), &q).unwrap();
        for k in 0..5 {
            assert!(c.contains(&x(q.pow(-k))));
        }
        assert!(!c.contains(&x(q.pow(1))));
        assert_eq!(q_closure_point(&QPoint::origin(), &q).unwrap(), QRegion::full(&q).unwrap());
        let c3 = q_closure_point(&x(q.pow(3)), &q).unwrap();
        for k in 0..8 {
            assert!(c3.contains(&x(q.pow(3 - k))));
        }
        assert!(!c3.contains(&x(q.pow(4))));
        let h = q_hull_point(&x(Cq::one()), &q).unwrap();
        assert!(h.contains(&QPoint::origin()) && h.contains(&x(q.pow(5))) && !h.contains(&x(q.pow(-1))));
        let h0 = q_hull_point(&QPoint::origin(), &q).unwrap();
        assert!(h0.origin && h0.x.is_empty() && h0.y.is_empty());
        assert!(h.is_subset(&h.q_closure().unwrap()));
        let neg = make_q(Cq::rat(-1, 2)).unwrap();
        assert!(q_closure_point(&x(Cq::one()), &make_q(Cq::int(2)).unwrap()).is_err());
        assert!(!q_closure_point(&x(Cq::one()), &neg).unwrap().contains(&x(Cq::int(2))));
    }

    #[test]
    fn annulus_closure() {
        let q = q();
        let a = QRegion::on_axis(
            &q,
            Axis::X,
            vec![Prim::Annulus { inner2: Q::one(), outer2: Some(Q::int(4)), inner_closed: true, outer_closed: true }],
        )
        .unwrap();
        let want = QRegion::on_axis(
            &q,
            Axis::X,
            vec![Prim::Annulus { inner2: Q::one(), outer2: None, inner_closed: true, outer_closed: false }],
        )
        .unwrap();
        let c = a.q_closure().unwrap();
        assert_eq!(c, want);
        assert_eq!(c.q_closure().unwrap(), c);
        assert!(a.is_subset(&c));
        // thin annulus: copies do not overlap
        let thin = QRegion::on_axis(
            &q,
            Axis::X,
            vec![Prim::Annulus { inner2: Q::one(), outer2: Some(Q::int(2)), inner_closed: true, outer_closed: true }],
        )
        .unwrap();
        let c = thin.q_closure().unwrap();
        assert!(matches!(c.x[0], Prim::AnnulusOrbit { .. }));
        assert!(c.contains(&x(Cq::int(2))) && c.contains(&x(Cq::int(5))) && !c.contains(&x(Cq::rat(3, 2))) && !c.contains(&x(Cq::int(3))));
        assert_eq!(c.q_closure().unwrap(), c);
        assert_eq!(QRegion::empty(&q).unwrap().q_closure().unwrap(), QRegion::empty(&q).unwrap());
    }

    #[test]
    fn finite_sets_close_pointwise() {
        let q = q();
        let pts = [x(Cq::one()), x(Cq::rat(1, 2)), QPoint::new(Axis::Y, Cq::int(3)), x(Cq::int(5))];
        let r = QRegion::points(&q, &pts).unwrap();
        let c = r.q_closure().unwrap();
        let mut u = QRegion::empty(&q).unwrap();
        for p in &pts {
            u = u.union(&q_closure_point(p, &q).unwrap()).unwrap();
        }
        assert_eq!(c, u);
        // 1 ∈ {1/2}⁻, so only two x-orbits survive
        assert_eq!(c.x.len(), 2);
        let mono = QRegion::points(&q, &pts[..2]).unwrap();
        assert!(mono.q_closure().unwrap().is_subset(&c));
    }

    #[test]
    fn openness() {
        let q = q();
        let b = QRegion::on_axis(&q, Axis::X, vec![Prim::OriginDisk { r2: Q::int(3), closed: false }]).unwrap();
        assert!(b.is_q_open_on(Axis::X));
        assert!(!b.is_q_open());
        let bb = QRegion::from_parts(
            &q,
            false,
            vec![Prim::OriginDisk { r2: Q::int(3), closed: false }],
            vec![Prim::FullAxis],
        )
        .unwrap();
        assert!(bb.is_q_open());
        let closed = QRegion::on_axis(&q, Axis::X, vec![Prim::OriginDisk { r2: Q::int(3), closed: true }]).unwrap();
        assert!(!closed.is_q_open_on(Axis::X));
        let ann = QRegion::from_parts(
            &q,
            true,
            vec![Prim::Annulus { inner2: Q::one(), outer2: Some(Q::int(9)), inner_closed: false, outer_closed: false }],
            vec![],
        )
        .unwrap();
        assert!(!ann.is_q_open_on(Axis::X));
    }

    #[test]
    fn runge_neighbourhoods() {
        for qv in [Cq::rat(1, 2), Cq::new(Q::new(1, 4), Q::new(1, 4)), Cq::rat(-2, 3)] {
            let q = make_q(qv).unwrap();
            let l = x(Cq::new(Q::int(2), Q::int(1)));
            let u = runge_neighborhood(&l, &Q::new(1, 4), &Q::new(1, 9), &q).unwrap();
            assert!(u.is_q_open_on(Axis::X), "{:?}", u);
            assert!(q_hull_point(&l, &q).unwrap().is_subset(&u));
        }
        let q = q();
        assert!(runge_neighborhood(&x(Cq::one()), &Q::zero(), &Q::one(), &q).is_err());
    }

    #[test]
    fn json_round_trip() {
        let q = q();
        let r = QRegion::from_parts(
            &q,
            false,
            vec![Prim::Annulus { inner2: Q::one(), outer2: None, inner_closed: true, outer_closed: false }],
            vec![Prim::BackwardOrbit { base: Cq::one() }],
        )
        .unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"kind\":\"backward_orbit\""));
        let back: QRegion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
