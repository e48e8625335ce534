use qplane::coeff::{make_q, parse_q, Cq, Q};
use qplane::complexes::DiagParams;
use qplane::fq::FqElement;
use qplane::linalg::Matrix;
use qplane::qtopology::{q_closure_point, Axis, Prim, QPoint, QRegion};
use qplane::random;
use qplane::spectra::{homology_at, taylor_spectrum_scan, Backend, MatrixQModule};
use qplane::suites::{self, Status, Suite, SuiteConfig};

#[test]
fn json_round_trips() {
    let q = parse_q("(1+i)/4").unwrap();
    let mut r = random::stream(5, 0);

    let z = random::compatible_quadruple(&mut r, 5);
    let back: qplane::quadruple::Quadruple = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
    assert_eq!(back, z);

    let e = random::fq_element(&mut r, &q, 4, 1);
    let back: FqElement = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
    assert_eq!(back, e);

    let m = random::q_module(&mut r, &q, 3);
    let back: MatrixQModule = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back, m);

    let reg = q_closure_point(&QPoint::new(Axis::Y, Cq::int(2)), &q).unwrap();
    let back: QRegion = serde_json::from_str(&serde_json::to_string(&reg).unwrap()).unwrap();
    assert_eq!(back, reg);
}

#[test]
fn module_json_is_validated() {
    let ok = r#"{"q": "1/2", "T": [["0", "0"], ["1", "0"]], "S": [["1", "0"], ["0", "1/2"]]}"#;
    assert!(serde_json::from_str::<MatrixQModule>(ok).is_ok());
    let bad = r#"{"q": "1/2", "T": [["0", "0"], ["1", "0"]], "S": [["1", "0"], ["0", "1"]]}"#;
    let err = serde_json::from_str::<MatrixQModule>(bad).unwrap_err().to_string();
    assert!(err.contains("TS = q⁻¹ST"), "{}", err);
    let ragged = r#"{"q": "1/2", "T": [["0"], ["1", "0"]], "S": [["1", "0"], ["0", "1"]]}"#;
    assert!(serde_json::from_str::<MatrixQModule>(ragged).is_err());
}

#[test]
fn weighted_shift_spectrum() {
    // T e_k = e_{k+1}, S e_k = q^k e_k on ℂ³. At (0, 1) the image of d₀
    // misses e₀; at the origin and at (0, q), (0, q²) the complex is exact.
    let q = make_q(Cq::rat(1, 2)).unwrap();
    let n = 3;
    let mut t = Matrix::<Cq>::zeros(n, n);
    let mut s = Matrix::<Cq>::zeros(n, n);
    for k in 0..n {
        s.set(k, k, q.pow(k as i64));
        if k + 1 < n {
            t.set(k + 1, k, Cq::one());
        }
    }
    let m = MatrixQModule::new(&q, t, s).unwrap();
    let rep = taylor_spectrum_scan(&m, &[QPoint::new(Axis::X, Cq::int(5))], Backend::Exact).unwrap();
    let y = |v: Cq| QPoint::new(Axis::Y, v);
    assert_eq!(rep.taylor, vec![y(Cq::one())]);
    assert_eq!(rep.samples.len(), 5);
    assert!(!rep.putinar.origin && rep.putinar.x.is_empty());
    assert_eq!(rep.putinar.y, vec![Prim::BackwardOrbit { base: Cq::one() }]);
    let fl = taylor_spectrum_scan(&m, &[], Backend::float()).unwrap();
    let exact: Vec<_> = rep.samples.iter().filter(|s| s.point != QPoint::new(Axis::X, Cq::int(5))).map(|s| (s.h0, s.h1, s.h2)).collect();
    let float: Vec<_> = fl.samples.iter().map(|s| (s.h0, s.h1, s.h2)).collect();
    assert_eq!(exact, float);
    let h = homology_at(&m, &y(Cq::one()), Backend::Exact);
    assert_eq!((h.h0, h.h1, h.h2), (1, 1, 0));
}

#[test]
fn closure_of_mixed_region_is_canonical() {
    let q = make_q(Cq::rat(1, 3)).unwrap();
    let a = QRegion::from_parts(
        &q,
        false,
        vec![
            Prim::Annulus { inner2: Q::int(4), outer2: Some(Q::int(5)), inner_closed: true, outer_closed: true },
            Prim::FinitePointSet { points: vec![Cq::int(3), Cq::int(9)] },
        ],
        vec![],
    )
    .unwrap();
    let c = a.q_closure().unwrap();
    // 27 = q⁻²·3; 1 lies below every copy of the annulus and off both orbits
    assert!(c.contains(&QPoint::new(Axis::X, Cq::int(27))));
    assert!(!c.contains(&QPoint::new(Axis::X, Cq::int(1))));
    assert_eq!(c.q_closure().unwrap(), c);
    assert!(a.is_subset(&c));
}

#[test]
fn diagonal_operators_reject_mismatched_inputs() {
    let q = make_q(Cq::rat(1, 2)).unwrap();
    let p = DiagParams::new(1, 1, &q, 4);
    let mut r = random::stream(9, 0);
    let free = random::free_quadruple(&mut r, 4);
    assert!(!free.compat);
    assert!(matches!(p.d0(&free), Err(qplane::error::Error::Usage(_))));
    let z = random::compatible_quadruple(&mut r, 4);
    assert!(p.t_inv(&(z.clone(), z)).is_err());
}

#[test]
fn seeds_change_inputs_but_not_verdicts() {
    let mk = |seed| SuiteConfig { q: make_q(Cq::rat(2, 3)).unwrap(), trunc: 5, max_degree: 2, seed, suites: vec![Suite::Homotopy, Suite::Gamma] };
    let a = suites::run(&mk(1)).unwrap();
    let b = suites::run(&mk(2)).unwrap();
    assert!(a.passed && b.passed);
    assert_eq!(a.cells.len(), b.cells.len());
    assert!(a.cells.iter().all(|c| c.status == Status::Pass && c.samples > 0));
}
