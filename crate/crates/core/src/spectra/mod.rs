//! Joint spectra of finite-dimensional q-modules.
//!
//! A pair (T, S) with TS = q⁻¹ST makes ℂⁿ a left module over the quantum
//! plane. At a point γ = (λ, μ) of ℂ_xy the free bimodule resolution of the
//! algebra, tensored with ℂ(γ) and the module, gives the three-term complex
//!
//!   0 → ℂⁿ --d₁--> ℂⁿ ⊕ ℂⁿ --d₀--> ℂⁿ → 0,
//!   d₁v = ((μ − qS)v, (T − qλ)v),  d₀(v₁, v₂) = (T − λ)v₁ + (S − μ)v₂.
//!
//! γ is in the Taylor spectrum when this complex has homology; the Putinar
//! spectrum is the q-closure of the Taylor spectrum. Scans only report on the
//! points they examine.

pub mod symbolic;

use serde::{Deserialize, Serialize};

use crate::coeff::{Cf, Cq, QParam, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{rank_exact, rank_float, rationalize, Matrix, RankInfo};
use crate::qtopology::{q_closure_region, Axis, Prim, QPoint, QRegion};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Backend {
    Exact,
    Float { tol: f64 },
}

impl Backend {
    pub fn float() -> Backend {
        Backend::Float { tol: DEFAULT_TOL }
    }

    fn rank(&self, m: &Matrix<Cq>) -> RankInfo {
        match self {
            Backend::Exact => rank_exact(m),
            Backend::Float { tol } => rank_float(&m.to_float(), *tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixQModule {
    q: QParam,
    #[serde(rename = "T")]
    t: Matrix<Cq>,
    #[serde(rename = "S")]
    s: Matrix<Cq>,
}

#[derive(Deserialize)]
struct RawModule {
    q: QParam,
    #[serde(rename = "T")]
    t: Matrix<Cq>,
    #[serde(rename = "S")]
    s: Matrix<Cq>,
}

impl<'de> Deserialize<'de> for MatrixQModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RawModule::deserialize(d)?;
        MatrixQModule::new(&r.q, r.t, r.s).map_err(serde::de::Error::custom)
    }
}

impl MatrixQModule {
    /// Checks shapes and the relation TS = q⁻¹ST exactly.
    pub fn new(q: &QParam, t: Matrix<Cq>, s: Matrix<Cq>) -> Result<MatrixQModule> {
        if !t.is_square() || !s.is_square() || t.rows() != s.rows() {
            return Err(Error::Validation(format!(
                "T and S must be square of the same size, got {}×{} and {}×{}",
                t.rows(),
                t.cols(),
                s.rows(),
                s.cols()
            )));
        }
        let lhs = t.mul(&s).scale(q.value());
        let rhs = s.mul(&t);
        if lhs != rhs {
            return Err(Error::Validation("module relation TS = q⁻¹ST fails".into()));
        }
        Ok(MatrixQModule { q: q.clone(), t, s })
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    pub fn t(&self) -> &Matrix<Cq> {
        &self.t
    }

    pub fn s(&self) -> &Matrix<Cq> {
        &self.s
    }

    /// (PTP⁻¹, PSP⁻¹)
    pub fn conjugate(&self, p: &Matrix<Cq>) -> Result<MatrixQModule> {
        let pi = p.inverse().ok_or_else(|| Error::Domain("conjugating matrix is singular".into()))?;
        MatrixQModule::new(&self.q, p.mul(&self.t).mul(&pi), p.mul(&self.s).mul(&pi))
    }

    /// (cT, S)
    pub fn scale_t(&self, c: &Cq) -> Result<MatrixQModule> {
        MatrixQModule::new(&self.q, self.t.scale(c), self.s.clone())
    }

    /// Direct sum of two modules over the same q.
    pub fn direct_sum(&self, o: &MatrixQModule) -> Result<MatrixQModule> {
        if self.q != o.q {
            return Err(Error::Usage("direct sum over different q".into()));
        }
        let block = |a: &Matrix<Cq>, b: &Matrix<Cq>| {
            let (n, m) = (a.rows(), b.rows());
            a.hcat(&Matrix::zeros(n, m)).vcat(&Matrix::zeros(m, n).hcat(b))
        };
        MatrixQModule::new(&self.q, block(&self.t, &o.t), block(&self.s, &o.s))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Koszul {
    /// 2n × n
    pub d1: Matrix<Cq>,
    /// n × 2n
    pub d0: Matrix<Cq>,
}

pub fn koszul_at(m: &MatrixQModule, g: &QPoint) -> Koszul {
    let (l, mu) = g.coords();
    let n = m.dim();
    let id = Matrix::<Cq>::identity(n);
    let q = m.q.value();
    let d1 = id.scale(&mu).sub(&m.s.scale(q)).vcat(&m.t.sub(&id.scale(&(q * &l))));
    let d0 = m.t.sub(&id.scale(&l)).hcat(&m.s.sub(&id.scale(&mu)));
    Koszul { d1, d0 }
}

/// From raw coordinates; fails off ℂ_xy.
pub fn koszul_at_coords(m: &MatrixQModule, l: &Cq, mu: &Cq) -> Result<Koszul> {
    Ok(koszul_at(m, &QPoint::from_coords(l.clone(), mu.clone())?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub point: QPoint,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ill_conditioned: bool,
}

impl HomologyProfile {
    pub fn is_resolvent(&self) -> bool {
        self.h0 == 0 && self.h1 == 0 && self.h2 == 0
    }
}

pub fn homology_at(m: &MatrixQModule, g: &QPoint, backend: Backend) -> HomologyProfile {
    let k = koszul_at(m, g);
    let n = m.dim();
    let r1 = backend.rank(&k.d1);
    let r0 = backend.rank(&k.d0);
    HomologyProfile {
        point: g.clone(),
        h0: n - r0.rank,
        h1: (2 * n - r0.rank).saturating_sub(r1.rank),
        h2: n - r1.rank,
        ill_conditioned: r0.ill_conditioned || r1.ill_conditioned,
    }
}

/// Eigenvalue points (λ, 0), (0, μ) and the origin. Eigenvalues that are
/// not Gaussian rationals are returned separately as approximations.
pub fn default_candidates(m: &MatrixQModule) -> (Vec<QPoint>, Vec<(Axis, Cf)>) {
    let mut pts = vec![QPoint::origin()];
    let mut approx = vec![];
    for (axis, mat) in [(Axis::X, &m.t), (Axis::Y, &m.s)] {
        let (ex, rest) = mat.eigenvalues();
        for e in ex {
            let p = QPoint::new(axis, e);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        approx.extend(rest.into_iter().map(|c| (axis, c)));
    }
    (pts, approx)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub q: QParam,
    pub backend: Backend,
    /// scanned points with nonvanishing homology
    pub taylor: Vec<QPoint>,
    /// q-closure of `taylor`
    pub putinar: QRegion,
    pub samples: Vec<HomologyProfile>,
    /// irrational eigenvalues the exact backend could not examine
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unexamined: Vec<(Axis, Cf)>,
}

/// Profiles at the default candidates plus `extra`. The float backend also
/// examines rounded irrational eigenvalues.
pub fn taylor_spectrum_scan(m: &MatrixQModule, extra: &[QPoint], backend: Backend) -> Result<SpectrumReport> {
    let (mut pts, approx) = default_candidates(m);
    let mut unexamined = vec![];
    for (axis, c) in approx {
        match backend {
            Backend::Exact => unexamined.push((axis, c)),
            Backend::Float { .. } => pts.push(QPoint::new(axis, Cq::new(rationalize(c.re), rationalize(c.im)))),
        }
    }
    for p in extra {
        if !pts.contains(p) {
            pts.push(p.clone());
        }
    }
    scan_points(m, &pts, backend, unexamined)
}

/// Profiles at exactly the given points.
pub fn scan_points(
    m: &MatrixQModule,
    pts: &[QPoint],
    backend: Backend,
    unexamined: Vec<(Axis, Cf)>,
) -> Result<SpectrumReport> {
    let samples: Vec<HomologyProfile> = pts.iter().map(|p| homology_at(m, p, backend)).collect();
    let taylor: Vec<QPoint> = samples.iter().filter(|s| !s.is_resolvent()).map(|s| s.point.clone()).collect();
    let putinar = putinar_from_taylor(&QRegion::points(&m.q, &taylor)?)?;
    Ok(SpectrumReport { q: m.q.clone(), backend, taylor, putinar, samples, unexamined })
}

pub fn putinar_from_taylor(taylor: &QRegion) -> Result<QRegion> {
    q_closure_region(taylor)
}

/// The bounded-annulus-plus-point region of the shift example and the
/// region its q-closure should be.
pub fn example8_regions(q: &QParam) -> Result<(QRegion, QRegion)> {
    let rho = q.modulus_sqr();
    let input = QRegion::from_parts(
        q,
        false,
        vec![Prim::Annulus { inner2: crate::coeff::Q::one(), outer2: Some(rho.inv()), inner_closed: true, outer_closed: true }],
        vec![Prim::FinitePointSet { points: vec![Cq::one()] }],
    )?;
    let expected = QRegion::from_parts(
        q,
        false,
        vec![Prim::Annulus { inner2: crate::coeff::Q::one(), outer2: None, inner_closed: true, outer_closed: false }],
        vec![Prim::BackwardOrbit { base: Cq::one() }],
    )?;
    Ok((input, expected))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example8Report {
    pub q: QParam,
    pub taylor: QRegion,
    pub putinar: QRegion,
    pub expected: QRegion,
    pub region_equality: bool,
    /// false: the Taylor region is strictly smaller than its closure
    pub taylor_is_q_closed: bool,
}

pub fn example8_report(q: &QParam) -> Result<Example8Report> {
    let (taylor, expected) = example8_regions(q)?;
    let putinar = putinar_from_taylor(&taylor)?;
    Ok(Example8Report {
        q: q.clone(),
        region_equality: putinar == expected,
        taylor_is_q_closed: putinar == taylor,
        taylor,
        putinar,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_q;
    use crate::random;

    fn mat(rows: Vec<Vec<Cq>>) -> Matrix<Cq> {
        Matrix::from_rows(rows).unwrap()
    }

    fn scalar_module(q: &QParam, t: Cq, s: Cq) -> MatrixQModule {
        MatrixQModule::new(q, mat(vec![vec![t]]), mat(vec![vec![s]])).unwrap()
    }

    fn xp(v: Cq) -> QPoint {
        QPoint::new(Axis::X, v)
    }

    fn yp(v: Cq) -> QPoint {
        QPoint::new(Axis::Y, v)
    }

    #[test]
    fn matrices_agree_with_symbolic_expansion() {
        assert!(symbolic::koszul_oracle().holds());
        let q = make_q(Cq::rat(1, 3)).unwrap();
        let mut r = random::stream(61, 0);
        let comp = symbolic::expected_composite();
        for _ in 0..5 {
            // arbitrary T, S and off-axis points: the raw composite must
            // still match the closed form
            let t = random::matrix(&mut r, 3);
            let s = random::matrix(&mut r, 3);
            let (l, m) = (random::scalar(&mut r), random::scalar(&mut r));
            let id = Matrix::<Cq>::identity(3);
            let qv = q.value();
            let d1 = id.scale(&m).sub(&s.scale(qv)).vcat(&t.sub(&id.scale(&(qv * &l))));
            let d0 = t.sub(&id.scale(&l)).hcat(&s.sub(&id.scale(&m)));
            assert_eq!(d0.mul(&d1), comp.evaluate(&t, &s, &q, &l, &m));
        }
    }

    #[test]
    fn block_examples() {
        let q = make_q(Cq::rat(1, 2)).unwrap();
        let z = scalar_module(&q, Cq::zero(), Cq::zero());
        let k = koszul_at(&z, &QPoint::origin());
        assert!(k.d0.is_zero() && k.d1.is_zero());
        let k = koszul_at(&z, &xp(Cq::one()));
        assert_eq!(k.d0, mat(vec![vec![Cq::int(-1), Cq::zero()]]));
        assert_eq!(k.d1, mat(vec![vec![Cq::zero()], vec![Cq::rat(-1, 2)]]));
        assert!(koszul_at_coords(&z, &Cq::one(), &Cq::one()).is_err());
    }

    #[test]
    fn homology_examples() {
        let q = make_q(Cq::rat(1, 2)).unwrap();
        let z = scalar_module(&q, Cq::zero(), Cq::zero());
        for b in [Backend::Exact, Backend::float()] {
            let h = homology_at(&z, &QPoint::origin(), b);
            assert_eq!((h.h0, h.h1, h.h2), (1, 2, 1));
            assert!(homology_at(&z, &xp(Cq::one()), b).is_resolvent());
        }
        // nilpotent shift with S = diag(1, q)
        let t = mat(vec![vec![Cq::zero(), Cq::zero()], vec![Cq::one(), Cq::zero()]]);
        let s = mat(vec![vec![Cq::one(), Cq::zero()], vec![Cq::zero(), Cq::rat(1, 2)]]);
        let m = MatrixQModule::new(&q, t, s).unwrap();
        assert!(homology_at(&m, &yp(Cq::one()), Backend::Exact).h0 >= 1);
        let bad = MatrixQModule::new(&q, mat(vec![vec![Cq::one(), Cq::zero()], vec![Cq::zero(), Cq::zero()]]), Matrix::identity(2));
        assert!(matches!(bad, Err(Error::Validation(_))));
    }

    #[test]
    fn scans() {
        let q = make_q(Cq::rat(1, 2)).unwrap();
        let z = scalar_module(&q, Cq::zero(), Cq::zero());
        let rep = taylor_spectrum_scan(&z, &[], Backend::Exact).unwrap();
        assert_eq!(rep.taylor, vec![QPoint::origin()]);
        assert_eq!(rep.putinar, QRegion::full(&q).unwrap());
        let l0 = Cq::rat(3, 2);
        let one = scalar_module(&q, l0.clone(), Cq::zero());
        let rep = taylor_spectrum_scan(&one, &[], Backend::Exact).unwrap();
        assert!(rep.taylor.contains(&xp(l0)));
        let rep = scan_points(&z, &[xp(Cq::one()), yp(Cq::int(2))], Backend::Exact, vec![]).unwrap();
        assert!(rep.taylor.is_empty() && rep.samples.iter().all(HomologyProfile::is_resolvent));
        assert!(rep.putinar.is_empty());
        // irrational eigenvalues: skipped exactly, examined in floating point
        let t = mat(vec![vec![Cq::int(2), Cq::one()], vec![Cq::one(), Cq::one()]]);
        let m = MatrixQModule::new(&q, t, Matrix::zeros(2, 2)).unwrap();
        let ex = taylor_spectrum_scan(&m, &[], Backend::Exact).unwrap();
        assert_eq!(ex.unexamined.len(), 2);
        let fl = taylor_spectrum_scan(&m, &[], Backend::float()).unwrap();
        assert_eq!(fl.taylor.iter().filter(|p| p.axis == Axis::X && !p.is_origin()).count(), 2);
    }

    #[test]
    fn invariances() {
        let q = make_q(Cq::new(crate::coeff::Q::new(1, 3), crate::coeff::Q::new(1, 4))).unwrap();
        let mut r = random::stream(62, 0);
        for _ in 0..5 {
            let m = random::q_module(&mut r, &q, 4);
            let p = random::invertible_matrix(&mut r, 4);
            let c = random::nonzero_scalar(&mut r);
            let pm = m.conjugate(&p).unwrap();
            let cm = m.scale_t(&c).unwrap();
            let (pts, _) = default_candidates(&m);
            for g in pts.iter().chain([xp(Cq::one()), yp(Cq::rat(1, 2))].iter()) {
                let h = homology_at(&m, g, Backend::Exact);
                let hp = homology_at(&pm, g, Backend::Exact);
                assert_eq!((h.h0, h.h1, h.h2), (hp.h0, hp.h1, hp.h2));
                let (l, mu) = g.coords();
                let hc = homology_at(&cm, &QPoint::from_coords(&c * &l, mu).unwrap(), Backend::Exact);
                assert_eq!((h.h0, h.h1, h.h2), (hc.h0, hc.h1, hc.h2));
                let k = koszul_at(&m, g);
                assert!(k.d0.mul(&k.d1).is_zero());
            }
        }
    }

    #[test]
    fn example_regions() {
        for qv in [Cq::rat(1, 2), Cq::rat(1, 3), Cq::new(crate::coeff::Q::new(1, 4), crate::coeff::Q::new(1, 4))] {
            let q = make_q(qv).unwrap();
            let rep = example8_report(&q).unwrap();
            assert!(rep.region_equality, "{:?}", rep.putinar);
            assert!(!rep.taylor_is_q_closed);
            assert_eq!(putinar_from_taylor(&rep.putinar).unwrap(), rep.putinar);
            let pt = putinar_from_taylor(&QRegion::points(&q, &[yp(Cq::one())]).unwrap()).unwrap();
            assert_eq!(pt.y, vec![Prim::BackwardOrbit { base: Cq::one() }]);
        }
        let q = make_q(Cq::rat(1, 2)).unwrap();
        assert!(putinar_from_taylor(&QRegion::empty(&q).unwrap()).unwrap().is_empty());
    }
}
