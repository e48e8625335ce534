//! Identity suites: every checkable identity of the library, run on seeded
//! random inputs over a grid of cells.
//!
//! A cell is a pair of indices; for the complex suites it is the bidegree
//! (d, l), elsewhere `d` numbers the cell and `l` is 0. Inputs for a cell
//! come from its own random stream, so cells can run in any order or in
//! parallel and the report is the same.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::{Cq, QParam, Q};
use crate::complexes::diagonal::{pair_agree, DiagParams, Pair};
use crate::complexes::formal::{self, random_chain, random_pi_kernel, Model, OneSided, Side};
use crate::complexes::gamma::gamma_closed_form;
use crate::complexes::graded::{indices, GradedComplex, MixedIdentity, Order};
use crate::error::{Error, Result};
use crate::fq::FqElement;
use crate::graded::{GermPair, GradedElement, Generator};
use crate::linalg::Matrix;
use crate::qalgebra::QSeries;
use crate::qtopology::{q_closure_point, q_hull_point, runge_neighborhood, Axis, Prim, QPoint, QRegion};
use crate::quadruple::Quadruple;
use crate::random::{self, Stream};
use crate::series::Agreement;
use crate::spectra::{self, default_candidates, koszul_at, symbolic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Qmul,
    Diagonal,
    Theta,
    Homotopy,
    Cohomology,
    Formal,
    Mixed,
    Decomposition,
    Gamma,
    Koszul,
    Topology,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Qmul,
        Suite::Diagonal,
        Suite::Theta,
        Suite::Homotopy,
        Suite::Cohomology,
        Suite::Formal,
        Suite::Mixed,
        Suite::Decomposition,
        Suite::Gamma,
        Suite::Koszul,
        Suite::Topology,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qmul => "qmul",
            Suite::Diagonal => "diagonal",
            Suite::Theta => "theta",
            Suite::Homotopy => "homotopy",
            Suite::Cohomology => "cohomology",
            Suite::Formal => "formal",
            Suite::Mixed => "mixed",
            Suite::Decomposition => "decomposition",
            Suite::Gamma => "gamma",
            Suite::Koszul => "koszul",
            Suite::Topology => "topology",
        }
    }

    /// A suite name, or "all".
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.split(',')
            .map(|n| {
                Suite::ALL.into_iter().find(|x| x.name() == n.trim()).ok_or_else(|| {
                    let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                    Error::Usage(format!("unknown suite '{}'; expected all or one of {}", n, names.join(", ")))
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub q: QParam,
    pub trunc: usize,
    pub max_degree: usize,
    pub seed: u64,
    pub suites: Vec<Suite>,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trunc < 2 {
            return Err(Error::Usage(format!("truncation must be at least 2, got {}", self.trunc)));
        }
        if self.suites.is_empty() {
            return Err(Error::Usage("no suites selected".into()));
        }
        if self.suites.contains(&Suite::Topology) && !self.q.is_contractive() {
            return Err(Error::Usage(format!("the topology suite needs 0 < |q| < 1, got q = {}", self.q)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub suite: Suite,
    pub d: usize,
    pub l: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub suite: Suite,
    pub d: usize,
    pub l: usize,
    pub identity: String,
    pub status: Status,
    pub samples: usize,
    pub max_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub q: QParam,
    pub trunc: usize,
    pub max_degree: usize,
    pub seed: u64,
    pub passed: bool,
    pub cells: Vec<CellResult>,
}

/// Sample counts per cell.
mod counts {
    pub const QMUL_RELATION: usize = 50;
    pub const QMUL_AGREEMENT: usize = 100;
    pub const QMUL_ASSOC: usize = 10;
    pub const DIAGONAL: usize = 50;
    pub const THETA: usize = 50;
    pub const HOMOTOPY: usize = 20;
    pub const COHOMOLOGY: usize = 10;
    pub const FORMAL: usize = 50;
    pub const FORMAL_LAYERS: usize = 6;
    pub const MIXED: usize = 3;
    pub const DECOMPOSITION: usize = 50;
    pub const GENERATOR: usize = 20;
    pub const GAMMA: usize = 20;
    pub const KOSZUL_MODULES: usize = 20;
    pub const KOSZUL_POINTS: usize = 20;
    pub const KOSZUL_MAX_DIM: usize = 5;
    pub const TOPOLOGY: usize = 10;
}

/// All cells of the selected suites, in report order.
pub fn plan(cfg: &SuiteConfig) -> Vec<Cell> {
    let mut cells = vec![];
    let grid = |suite: Suite, max: usize| -> Vec<Cell> {
        indices(max, Order::LeftIncreasing).into_iter().map(|(d, l)| Cell { suite, d, l }).collect()
    };
    let line = |suite: Suite, n: usize| -> Vec<Cell> { (0..n).map(|d| Cell { suite, d, l: 0 }).collect() };
    for &s in &cfg.suites {
        cells.extend(match s {
            // cells 0..=8: y^n g(x) with n = d; cell 9: the three products
            Suite::Qmul => line(s, 10),
            Suite::Diagonal | Suite::Theta | Suite::Homotopy | Suite::Cohomology | Suite::Mixed | Suite::Gamma => {
                grid(s, cfg.max_degree)
            }
            // one cell per side and model
            Suite::Formal => line(s, 4),
            // generator degrees 0..=D; cell 0 also runs the projection identities
            Suite::Decomposition => line(s, cfg.max_degree + 1),
            Suite::Koszul => line(s, counts::KOSZUL_MODULES),
            Suite::Topology => line(s, 1),
        });
    }
    cells
}

fn stream_id(c: &Cell) -> u64 {
    let s = Suite::ALL.iter().position(|x| *x == c.suite).unwrap() as u64;
    (s << 32) | ((c.d as u64) << 16) | c.l as u64
}

/// Inputs that can be cut down to a lower truncation, for shrinking
/// counterexamples.
pub trait Shrink: Sized + Serialize {
    fn shrunk(&self, _n: usize) -> Option<Self> {
        None
    }
}

impl Shrink for Quadruple {
    fn shrunk(&self, n: usize) -> Option<Quadruple> {
        Some(self.truncate(n as i64))
    }
}

impl Shrink for (Quadruple, Quadruple) {
    fn shrunk(&self, n: usize) -> Option<Self> {
        Some((self.0.truncate(n as i64), self.1.truncate(n as i64)))
    }
}

impl Shrink for GermPair {
    fn shrunk(&self, n: usize) -> Option<GermPair> {
        Some(self.truncate(n as i64))
    }
}

impl Shrink for GradedElement {
    fn shrunk(&self, n: usize) -> Option<GradedElement> {
        Some(GradedElement::new(self.pair.truncate(n as i64), self.degree))
    }
}

impl Shrink for (GradedElement, GradedElement) {
    fn shrunk(&self, n: usize) -> Option<Self> {
        Some((self.0.shrunk(n)?, self.1.shrunk(n)?))
    }
}

impl Shrink for (Quadruple, GermPair) {
    fn shrunk(&self, n: usize) -> Option<Self> {
        Some((self.0.truncate(n as i64), self.1.truncate(n as i64)))
    }
}

impl Shrink for QSeries {}
impl Shrink for (QSeries, QSeries) {}
impl Shrink for (QSeries, QSeries, QSeries) {}
impl Shrink for FqElement {}
impl Shrink for formal::Chain {}
impl Shrink for spectra::MatrixQModule {}
impl Shrink for (spectra::MatrixQModule, QPoint) {}
impl Shrink for QRegion {}
impl Shrink for (QRegion, QRegion) {}
impl Shrink for (QPoint, Q, Q) {}
impl Shrink for () {}

/// Collects checks of one cell, one entry per identity name.
struct Cx {
    cell: Cell,
    trunc: usize,
    out: Vec<CellResult>,
    index: BTreeMap<String, usize>,
}

impl Cx {
    fn new(cell: Cell, trunc: usize) -> Cx {
        Cx { cell, trunc, out: vec![], index: BTreeMap::new() }
    }

    fn slot(&mut self, name: &str) -> &mut CellResult {
        let k = match self.index.get(name) {
            Some(&k) => k,
            None => {
                self.out.push(CellResult {
                    suite: self.cell.suite,
                    d: self.cell.d,
                    l: self.cell.l,
                    identity: name.to_string(),
                    status: Status::Pass,
                    samples: 0,
                    max_defect: 0.0,
                    message: None,
                    counterexample: None,
                });
                self.index.insert(name.to_string(), self.out.len() - 1);
                self.out.len() - 1
            }
        };
        &mut self.out[k]
    }

    /// Run one check; on the first failure of an identity keep the input,
    /// cut to the lowest truncation at which it still fails.
    fn check<I: Shrink>(&mut self, name: &str, input: &I, f: impl Fn(&I) -> Result<Agreement>) {
        let outcome = f(input);
        let failed = !matches!(&outcome, Ok(a) if a.holds());
        let trunc = self.trunc;
        let slot = self.slot(name);
        slot.samples += 1;
        if let Ok(a) = &outcome {
            if a.defect.is_finite() {
                slot.max_defect = slot.max_defect.max(a.defect);
            }
        }
        if !failed || slot.status == Status::Fail {
            return;
        }
        slot.status = Status::Fail;
        if slot.max_defect == 0.0 {
            slot.max_defect = f64::INFINITY;
        }
        slot.message = Some(match &outcome {
            Ok(a) => format!("first difference at {:?}", a.mismatch),
            Err(e) => e.to_string(),
        });
        let still_fails = |x: &I| !matches!(f(x), Ok(a) if a.holds());
        let minimal = (0..=trunc).filter_map(|n| input.shrunk(n)).find(|s| still_fails(s));
        let shown = match &minimal {
            Some(s) => serde_json::to_value(s),
            None => serde_json::to_value(input),
        };
        self.slot(name).counterexample = shown.ok();
    }

    fn finish(self) -> Vec<CellResult> {
        self.out
    }
}

fn flag(ok: bool) -> Agreement {
    let mut a = Agreement::trivial();
    if !ok {
        a.mismatch = Some((0, 0));
        a.defect = 1.0;
    }
    a
}

fn qseries_agree(a: &QSeries, b: &QSeries) -> Result<Agreement> {
    let diff = a.sub(b)?;
    let mut ag = Agreement::trivial();
    for (i, k, c) in diff.terms() {
        if !c.is_zero() {
            if ag.mismatch.is_none() {
                ag.mismatch = Some((i, k));
            }
            ag.defect = ag.defect.max(c.magnitude());
        }
    }
    Ok(ag)
}

fn matrix_vanishes(m: &Matrix<Cq>) -> Agreement {
    let mut ag = Agreement::trivial();
    for (i, row) in m.to_rows().iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                ag.mismatch.get_or_insert((i, j));
                ag.defect = ag.defect.max(c.magnitude());
            }
        }
    }
    ag
}

pub fn run_cell(cfg: &SuiteConfig, cell: &Cell) -> Vec<CellResult> {
    let mut r = random::stream(cfg.seed, stream_id(cell));
    let mut cx = Cx::new(*cell, cfg.trunc);
    let q = &cfg.q;
    let n = cfg.trunc;
    match cell.suite {
        Suite::Qmul => qmul_cell(&mut cx, &mut r, q, n, cell.d),
        Suite::Diagonal => diagonal_cell(&mut cx, &mut r, &DiagParams::new(cell.d, cell.l, q, n)),
        Suite::Theta => theta_cell(&mut cx, &mut r, &DiagParams::new(cell.d, cell.l, q, n)),
        Suite::Homotopy => homotopy_cell(&mut cx, &mut r, &DiagParams::new(cell.d, cell.l, q, n)),
        Suite::Cohomology => cohomology_cell(&mut cx, &mut r, &DiagParams::new(cell.d, cell.l, q, n)),
        Suite::Formal => formal_cell(&mut cx, &mut r, q, n, cell.d),
        Suite::Mixed => mixed_cell(&mut cx, &mut r, q, n, cfg.max_degree, (cell.d, cell.l)),
        Suite::Decomposition => decomposition_cell(&mut cx, &mut r, q, n, cell.d),
        Suite::Gamma => gamma_cell(&mut cx, &mut r, q, n, cell.d, cell.l),
        Suite::Koszul => koszul_cell(&mut cx, &mut r, q, cell.d),
        Suite::Topology => topology_cell(&mut cx, &mut r, q),
    }
    cx.finish()
}

/// Run cells sequentially.
pub fn run(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let results = plan(cfg).iter().map(|c| run_cell(cfg, c)).collect();
    Ok(assemble(cfg, results))
}

/// Report from per-cell results given in plan order.
pub fn assemble(cfg: &SuiteConfig, results: Vec<Vec<CellResult>>) -> Report {
    let cells: Vec<CellResult> = results.into_iter().flatten().collect();
    Report {
        suite: cfg.suites.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
        q: cfg.q.clone(),
        trunc: cfg.trunc,
        max_degree: cfg.max_degree,
        seed: cfg.seed,
        passed: cells.iter().all(|c| c.status == Status::Pass),
        cells,
    }
}

fn qmul_cell(cx: &mut Cx, r: &mut Stream, q: &QParam, n: usize, k: usize) {
    if k <= 8 {
        let yn = QSeries::monomial(q, n, 0, k, Cq::one());
        for _ in 0..counts::QMUL_RELATION {
            let g = QSeries::in_x(q, n, &random::series1(r, n));
            cx.check("y^n g(x) = g(q^n x) y^n", &g, |g| {
                let gx = QSeries::from_terms(q, n, &g.terms().iter().filter(|t| t.1 == 0).map(|(i, _, c)| (*i, 0, c * &q.pow((k * i) as i64))).collect::<Vec<_>>());
                qseries_agree(&yn.qmul(g)?, &gx.qmul(&yn)?)
            });
        }
        if k == 1 {
            let (x, y) = (QSeries::x(q, n), QSeries::y(q, n));
            cx.check("y x = q x y", &(), |_| qseries_agree(&y.qmul(&x)?, &x.qmul(&y)?.scale(q.value())));
        }
        return;
    }
    for _ in 0..counts::QMUL_AGREEMENT {
        let ab = (random::qseries(r, q, n), random::qseries(r, q, n));
        cx.check("product = left ordered form", &ab, |(a, b)| qseries_agree(&a.qmul(b)?, &a.qmul_left_form(b)?));
        cx.check("product = right ordered form", &ab, |(a, b)| qseries_agree(&a.qmul(b)?, &a.qmul_right_form(b)?));
    }
    for _ in 0..counts::QMUL_ASSOC {
        let abc = (random::qseries(r, q, n), random::qseries(r, q, n), random::qseries(r, q, n));
        cx.check("associativity", &abc, |(a, b, c)| qseries_agree(&a.qmul(b)?.qmul(c)?, &a.qmul(&b.qmul(c)?)?));
    }
}

fn diagonal_cell(cx: &mut Cx, r: &mut Stream, p: &DiagParams) {
    for _ in 0..counts::DIAGONAL {
        let z = random::compatible_quadruple(r, p.trunc);
        cx.check("d1 d0 = 0", &z, |z| Ok(p.d1(&p.d0(z)?)?.vanishes()));
        let pr = (random::compatible_quadruple(r, p.trunc), random::compatible_quadruple(r, p.trunc));
        cx.check("pi d1 = 0", &pr, |pr| Ok(p.pi(&p.d1(pr)?)?.pair.vanishes()));
    }
}

fn theta_cell(cx: &mut Cx, r: &mut Stream, p: &DiagParams) {
    for _ in 0..counts::THETA {
        let th = random::free_quadruple(r, p.trunc);
        cx.check("d1 T = 0", &th, |th| Ok(p.d1(&p.t(th))?.vanishes()));
        cx.check("T^-1 T = id", &th, |th| Ok(p.t_inv(&p.t(th))?.agree(th)));
        let a = random::compatible_quadruple(r, p.trunc);
        cx.check("T T^-1 = id on coboundaries", &a, |a| {
            let b = p.d0(a)?;
            Ok(pair_agree(&p.t(&p.t_inv(&b)?), &b))
        });
        cx.check("membership conditions of T^-1 d0", &a, |a| Ok(p.theta_conditions(&p.t_inv_d0(a)?)));
        let (fg, a2) = (random::germ_pair(r, p.trunc), random::compatible_quadruple(r, p.trunc));
        cx.check("T T^-1 = id on cocycles", &(a2, fg), |(a, fg)| {
            let b = p.d0(a)?;
            let tp = p.t(&p.psi(fg));
            let c: Pair = (b.0.add(&tp.0), b.1.add(&tp.1));
            Ok(pair_agree(&p.t(&p.t_inv(&c)?), &c))
        });
    }
}

fn homotopy_cell(cx: &mut Cx, r: &mut Stream, p: &DiagParams) {
    for _ in 0..counts::HOMOTOPY {
        let fg = random::germ_pair(r, p.trunc);
        cx.check("pi tau0 = id", &fg, |fg| Ok(p.pi(&p.tau0(fg))?.pair.agree(fg)));
        let z = random::compatible_quadruple(r, p.trunc);
        cx.check("tau0 pi + d1 tau1 = id", &z, |z| {
            let back = p.tau0(&p.pi(z)?.pair).add(&p.d1(&p.tau1(z)?)?);
            Ok(back.agree(z))
        });
    }
}

fn cohomology_cell(cx: &mut Cx, r: &mut Stream, p: &DiagParams) {
    for _ in 0..counts::COHOMOLOGY {
        let a = random::compatible_quadruple(r, p.trunc);
        cx.check("d0 injective: coboundary recovered", &a, |a| {
            let s = p.h1_split(&p.d0(a)?)?;
            Ok(s.coboundary_part.agree(a).and(s.representative.vanishes()))
        });
        let fg = random::germ_pair(r, p.trunc);
        cx.check("phi psi = id", &fg, |fg| Ok(p.phi(&p.psi(fg))?.agree(fg)));
        let a2 = random::compatible_quadruple(r, p.trunc);
        cx.check("first cohomology splitting", &(a2, fg.clone()), |(a, fg)| {
            let b = p.d0(a)?;
            let tp = p.t(&p.psi(fg));
            let s = p.h1_split(&(b.0.add(&tp.0), b.1.add(&tp.1)))?;
            Ok(s.representative.agree(fg).and(pair_agree(&p.d0(&s.coboundary_part)?, &b)))
        });
        cx.check("pi surjective via tau0", &fg, |fg| Ok(p.pi(&p.tau0(fg))?.pair.agree(fg)));
        let pr = (random::compatible_quadruple(r, p.trunc), random::compatible_quadruple(r, p.trunc));
        cx.check("kernel of pi is exact", &pr, |pr| {
            let z = p.d1(pr)?;
            Ok(p.d1(&p.tau1(&z)?)?.agree(&z))
        });
    }
}

fn formal_cell(cx: &mut Cx, r: &mut Stream, q: &QParam, n: usize, k: usize) {
    let side = if k % 2 == 0 { Side::Left } else { Side::Right };
    let model = if k < 2 { Model::Formal } else { Model::Holomorphic };
    let c = OneSided::new(side, q);
    let layers = counts::FORMAL_LAYERS;
    for _ in 0..counts::FORMAL {
        let h = random_chain(r, model, layers, n);
        cx.check("d1 d0 = 0", &h, |h| Ok(c.d1(&c.d0(h)).vanishes()));
        cx.check("d0 preimage of a cocycle", &h, |h| {
            let p = c.d0(h);
            Ok(formal::pair_agree(&c.d0(&c.cocycle_witness(&p)?), &p))
        });
        let k = random_pi_kernel(r, model, layers, n);
        cx.check("d1 preimage on the kernel of pi", &k, |k| Ok(c.d1(&c.kernel_witness(k)?).agree(k)));
    }
}

fn mixed_cell(cx: &mut Cx, r: &mut Stream, q: &QParam, n: usize, max: usize, target: (usize, usize)) {
    let g = GradedComplex::new(q, max, Order::LeftIncreasing);
    for id in MixedIdentity::ALL {
        if id.source(target).is_none() {
            continue;
        }
        for _ in 0..counts::MIXED {
            let z = random::compatible_quadruple(r, n);
            cx.check(id.name(), &z, |z| Ok(g.mixed_defect(id, target, z)?.map_or(Agreement::trivial(), |v| v.vanishes())));
        }
    }
    let z = random::compatible_quadruple(r, n);
    cx.check("triangular", &z, |z| Ok(flag(g.is_lower_triangular_at(target, z)?)));
}

fn decomposition_cell(cx: &mut Cx, r: &mut Stream, q: &QParam, n: usize, d: usize) {
    if d == 0 {
        for _ in 0..counts::DECOMPOSITION {
            let e = random::fq_element(r, q, n, 2);
            cx.check("sum of projections = id", &e, |e| Ok(FqElement::reassemble(q, n, &e.components())?.agree(e)));
            cx.check("projections are orthogonal idempotents", &e, |e| {
                let mut ag = Agreement::trivial();
                for a in 0..=n {
                    let pa = e.project(a);
                    for b in 0..=n {
                        let pb = pa.project(b);
                        ag = ag.and(if a == b { pb.agree(&pa) } else { pb.agree(&FqElement::zero(q, n)) });
                    }
                }
                Ok(ag)
            });
            let lam = e.lambda();
            cx.check("Lambda alpha_0 = id", &lam, |lam| {
                let a0 = FqElement::alpha(q, n, &GradedElement::new(lam.clone(), 0))?;
                Ok(a0.lambda().agree(lam))
            });
        }
    }
    for gen in Generator::ALL {
        for _ in 0..counts::GENERATOR {
            let h = random::graded(r, n, d);
            cx.check(&format!("generator action {}", gen.name()), &h, |h| {
                let (a, b) = h.generator_action(gen, q);
                let want = FqElement::reassemble(q, n, &[a, b])?;
                Ok(FqElement::generator_product(q, n, gen, h)?.agree(&want))
            });
        }
    }
}

fn gamma_cell(cx: &mut Cx, r: &mut Stream, q: &QParam, n: usize, d: usize, l: usize) {
    for _ in 0..counts::GAMMA {
        let ze = (random::graded(r, n, d), random::graded(r, n, l));
        cx.check("product expands as q^{dl} pi + sum of corrections", &ze, |(z, e)| {
            let prod = FqElement::alpha(q, n, z)?.mul(&FqElement::alpha(q, n, e)?)?;
            let pi = Quadruple::tensor_embed(z, e).pi(d, l, q)?;
            let mut ag = Agreement::trivial();
            for m in 0..=n {
                let got = prod.component(m).pair;
                let want = match m.cmp(&(d + l)) {
                    std::cmp::Ordering::Less => GermPair::zero(crate::series::EXACT),
                    std::cmp::Ordering::Equal => pi.pair.scale(&q.pow((d * l) as i64)),
                    std::cmp::Ordering::Greater => gamma_closed_form(q, z, e, m).pair,
                };
                ag = ag.and(got.agree(&want));
            }
            Ok(ag)
        });
        cx.check("corrections vanish up to total degree", &ze, |(z, e)| {
            let mut ag = Agreement::trivial();
            for m in 0..=(d + l).min(n) {
                ag = ag.and(crate::complexes::gamma_correction(q, n, z, e, m)?.pair.vanishes());
            }
            Ok(ag)
        });
    }
}

/// On-axis points for module `m`: its eigenvalue candidates, their images
/// under powers of q, then random points, alternating axes.
fn koszul_points(r: &mut Stream, m: &spectra::MatrixQModule, count: usize) -> Vec<QPoint> {
    let (mut pts, _) = default_candidates(m);
    let base = pts.clone();
    for p in base.iter().filter(|p| !p.is_origin()) {
        for k in [-1, 1] {
            pts.push(QPoint::new(p.axis, &p.value * &m.q().pow(k)));
        }
    }
    pts.truncate(count);
    while pts.len() < count {
        let axis = if pts.len() % 2 == 0 { Axis::X } else { Axis::Y };
        pts.push(QPoint::new(axis, random::scalar(r)));
    }
    pts
}

fn koszul_cell(cx: &mut Cx, r: &mut Stream, q: &QParam, k: usize) {
    if k == 0 {
        cx.check("symbolic composite of the blocks", &(), |_| Ok(flag(symbolic::koszul_oracle().holds())));
    }
    let dim = 1 + k % counts::KOSZUL_MAX_DIM;
    let m = random::q_module(r, q, dim);
    let comp = symbolic::expected_composite();
    for p in koszul_points(r, &m, counts::KOSZUL_POINTS) {
        let input = (m.clone(), p);
        cx.check("d0 d1 = 0", &input, |(m, p)| {
            let k = koszul_at(m, p);
            Ok(matrix_vanishes(&k.d0.mul(&k.d1)))
        });
        cx.check("blocks match the symbolic composite", &input, |(m, p)| {
            let k = koszul_at(m, p);
            let (l, mu) = p.coords();
            let want = comp.evaluate(m.t(), m.s(), q, &l, &mu);
            Ok(matrix_vanishes(&k.d0.mul(&k.d1).sub(&want)))
        });
    }
}

fn random_region(r: &mut Stream, q: &QParam) -> Result<QRegion> {
    let mut x = vec![];
    let mut y = vec![];
    for _ in 0..2 {
        let axis_x = rand::Rng::gen_range(r, 0..2) == 0;
        let lo = Q::new(rand::Rng::gen_range(r, 1..=6), rand::Rng::gen_range(r, 1..=3));
        let w = Q::new(rand::Rng::gen_range(r, 0..=8), rand::Rng::gen_range(r, 1..=4));
        let prim = match rand::Rng::gen_range(r, 0..3) {
            0 => Prim::Annulus { inner2: lo.clone(), outer2: Some(lo.add(&w)), inner_closed: true, outer_closed: true },
            1 => Prim::Annulus { inner2: lo.clone(), outer2: Some(lo.add(&w)), inner_closed: false, outer_closed: false },
            _ => Prim::FinitePointSet { points: vec![random::nonzero_scalar(r), random::nonzero_scalar(r)] },
        };
        if axis_x {
            x.push(prim);
        } else {
            y.push(prim);
        }
    }
    QRegion::from_parts(q, false, x, y)
}

fn topology_cell(cx: &mut Cx, r: &mut Stream, q: &QParam) {
    cx.check("shift example closure", &(), |_| {
        let rep = spectra::example8_report(q)?;
        Ok(flag(rep.region_equality && !rep.taylor_is_q_closed))
    });
    for _ in 0..counts::TOPOLOGY {
        let (a, b) = match (random_region(r, q), random_region(r, q)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                cx.check("random region", &(), |_| Err(e.clone()));
                continue;
            }
        };
        cx.check("closure is extensive and idempotent", &a, |a| {
            let c = a.q_closure()?;
            Ok(flag(a.is_subset(&c) && c.q_closure()? == c))
        });
        cx.check("closure is monotone", &(a.clone(), b.clone()), |(a, b)| {
            let u = a.union(b)?;
            Ok(flag(a.q_closure()?.is_subset(&u.q_closure()?)))
        });
        let p = QPoint::new(if rand::Rng::gen_range(r, 0..2) == 0 { Axis::X } else { Axis::Y }, random::nonzero_scalar(r));
        let input = (p, Q::new(1, rand::Rng::gen_range(r, 2..=9)), Q::new(1, rand::Rng::gen_range(r, 2..=9)));
        cx.check("Runge neighbourhood is q-open and contains the hull", &input, |(p, e, dl)| {
            let u = runge_neighborhood(p, e, dl, q)?;
            Ok(flag(u.is_q_open_on(p.axis) && q_hull_point(p, q)?.is_subset(&u)))
        });
        cx.check("point closure is closed", &input, |(p, _, _)| {
            let c = q_closure_point(p, q)?;
            Ok(flag(c.q_closure()? == c && c.contains(p)))
        });
    }
}
