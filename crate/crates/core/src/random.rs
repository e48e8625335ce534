//! Seeded generators for test inputs.
//!
//! Every stream is ChaCha8 keyed by `seed_from_u64(seed)` with the stream
//! number set to the cell index, so a cell's inputs do not depend on which
//! worker runs it or in what order. Scalars are small Gaussian rationals
//! (numerators in [-4, 4], denominators in {1, 2, 3}, imaginary part nonzero
//! one time in three) to keep exact arithmetic cheap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Cq, QParam, Q};
use crate::fq::FqElement;
use crate::graded::{GermPair, GradedElement};
use crate::linalg::Matrix;
use crate::qalgebra::QSeries;
use crate::quadruple::Quadruple;
use crate::spectra::MatrixQModule;
use crate::series::{Series1, Series2};

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64, cell: u64) -> Stream {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(cell);
    r
}

fn rat(r: &mut Stream) -> Q {
    Q::new(r.gen_range(-4..=4), r.gen_range(1..=3))
}

pub fn scalar(r: &mut Stream) -> Cq {
    let re = rat(r);
    let im = if r.gen_range(0..3) == 0 { rat(r) } else { Q::zero() };
    Cq::new(re, im)
}

pub fn nonzero_scalar(r: &mut Stream) -> Cq {
    loop {
        let c = scalar(r);
        if !c.is_zero() {
            return c;
        }
    }
}

/// About a quarter of the coefficients are zero.
fn sparse(r: &mut Stream) -> Cq {
    if r.gen_range(0..4) == 0 {
        Cq::zero()
    } else {
        scalar(r)
    }
}

pub fn series1(r: &mut Stream, trunc: usize) -> Series1 {
    Series1::new((0..=trunc).map(|_| sparse(r)).collect(), trunc as i64)
}

pub fn series2(r: &mut Stream, trunc: usize) -> Series2 {
    let mut terms = vec![];
    for i in 0..=trunc {
        for j in 0..=trunc - i {
            terms.push((i, j, sparse(r)));
        }
    }
    Series2::from_terms(&terms, trunc as i64)
}

pub fn germ_pair(r: &mut Stream, trunc: usize) -> GermPair {
    let f = series1(r, trunc);
    let mut c = series1(r, trunc).coeffs().to_vec();
    c[0] = f.coeff(0);
    GermPair::new(f, Series1::new(c, trunc as i64)).expect("constant terms match")
}

pub fn graded(r: &mut Stream, trunc: usize, d: usize) -> GradedElement {
    GradedElement::new(germ_pair(r, trunc), d)
}

pub fn qseries(r: &mut Stream, q: &QParam, trunc: usize) -> QSeries {
    QSeries::from_fn(q, trunc, |_, _| sparse(r))
}

/// Edge functions drawn first (sharing one constant term), then an
/// independent uv-interior for each component.
pub fn compatible_quadruple(r: &mut Stream, trunc: usize) -> Quadruple {
    let lam = sparse(r);
    let edge = |r: &mut Stream| {
        let mut c = series1(r, trunc).coeffs().to_vec();
        c[0] = lam.clone();
        Series1::new(c, trunc as i64)
    };
    let (a, b, c, e) = (edge(r), edge(r), edge(r), edge(r));
    let konst = Series2::constant(lam.clone(), trunc as i64);
    let part = |r: &mut Stream, x: &Series1, y: &Series1| {
        let inner = if trunc >= 2 { series2(r, trunc - 2).shift(1, 1) } else { Series2::zero(trunc as i64) };
        Series2::from_u(x).add(&Series2::from_v(y)).sub(&konst).add(&inner)
    };
    let z1z2 = part(r, &a, &c);
    let z1w2 = part(r, &a, &e);
    let w1z2 = part(r, &b, &c);
    let w1w2 = part(r, &b, &e);
    Quadruple::compatible(z1z2, z1w2, w1z2, w1w2).expect("edges drawn consistently")
}

pub fn free_quadruple(r: &mut Stream, trunc: usize) -> Quadruple {
    Quadruple::free(series2(r, trunc), series2(r, trunc), series2(r, trunc), series2(r, trunc))
}

/// A random element of F_q at cutoff N whose layers are known to degree
/// N + extra: the grid is drawn first, then independent tails.
pub fn fq_element(r: &mut Stream, q: &QParam, trunc: usize, extra: usize) -> FqElement {
    let n = trunc;
    let grid: Vec<Vec<Cq>> = (0..=n).map(|_| (0..=n).map(|_| sparse(r)).collect()).collect();
    let top = n + extra;
    let mut f = vec![];
    let mut g = vec![];
    for k in 0..=n {
        let mut c: Vec<Cq> = (0..=n).map(|i| grid[i][k].clone()).collect();
        c.extend((n + 1..=top).map(|_| sparse(r)));
        f.push(Series1::new(c, top as i64));
    }
    for i in 0..=n {
        let mut c: Vec<Cq> = grid[i].clone();
        c.extend((n + 1..=top).map(|_| sparse(r)));
        g.push(Series1::new(c, top as i64));
    }
    FqElement::new(q, n, f, g).expect("grid drawn consistently")
}


pub fn matrix(r: &mut Stream, n: usize) -> Matrix<Cq> {
    Matrix::from_rows((0..n).map(|_| (0..n).map(|_| sparse(r)).collect()).collect()).expect("square")
}

/// Unit lower times unit upper triangular, so always invertible.
pub fn invertible_matrix(r: &mut Stream, n: usize) -> Matrix<Cq> {
    let mut lo = Matrix::<Cq>::identity(n);
    let mut up = Matrix::<Cq>::identity(n);
    for i in 0..n {
        for j in 0..i {
            lo.set(i, j, sparse(r));
            up.set(j, i, sparse(r));
        }
    }
    lo.mul(&up)
}

/// A module of dimension n: a direct sum of blocks of size ≤ 3, each a
/// weighted shift T against S = diag(s, sq, sq², …), an arbitrary T with
/// S = 0, or an arbitrary S with T = 0, conjugated by a random invertible
/// matrix.
pub fn q_module(r: &mut Stream, q: &QParam, n: usize) -> MatrixQModule {
    let mut blocks: Vec<MatrixQModule> = vec![];
    let mut left = n;
    while left > 0 {
        let k = r.gen_range(1..=left.min(3));
        left -= k;
        let (t, s) = match r.gen_range(0..3) {
            0 => {
                let s0 = sparse(r);
                let mut t = Matrix::<Cq>::zeros(k, k);
                let mut s = Matrix::<Cq>::zeros(k, k);
                for j in 0..k {
                    s.set(j, j, &s0 * &q.pow(j as i64));
                    if j + 1 < k {
                        t.set(j + 1, j, sparse(r));
                    }
                }
                (t, s)
            }
            1 => (matrix(r, k), Matrix::zeros(k, k)),
            _ => (Matrix::zeros(k, k), matrix(r, k)),
        };
        blocks.push(MatrixQModule::new(q, t, s).expect("block satisfies the relation"));
    }
    let sum = blocks.iter().skip(1).fold(blocks[0].clone(), |a, b| a.direct_sum(b).expect("same q"));
    sum.conjugate(&invertible_matrix(r, n)).expect("invertible")
}
