//! Correction terms of the multiplication map on F_q.
//!
//! For ζ of degree d and η of degree l, the product α_d(ζ)·α_l(η) in F_q
//! agrees with q^{dl}α_{d+l}(π_{d,l}(ζ⊗η)) up to components of degree
//! m > d + l; those components are Γ_m(ζ⊗η).

use crate::coeff::QParam;
use crate::error::Result;
use crate::fq::FqElement;
use crate::graded::{GermPair, GradedElement};
use crate::quadruple::Quadruple;
use crate::series::{Series1, EXACT};

/// ξ = α_d(ζ)·α_l(η) − q^{dl}α_{d+l}(π_{d,l}(ζ⊗η)) at cutoff N.
pub fn product_defect(q: &QParam, trunc: usize, z: &GradedElement, e: &GradedElement) -> Result<FqElement> {
    let prod = FqElement::alpha(q, trunc, z)?.mul(&FqElement::alpha(q, trunc, e)?)?;
    let pi = Quadruple::tensor_embed(z, e).pi(z.degree, e.degree, q)?;
    let main = FqElement::alpha(q, trunc, &pi)?.scale(&q.pow((z.degree * e.degree) as i64));
    prod.sub(&main)
}

/// Γ_m(ζ⊗η): the degree-m component of the product defect.
pub fn gamma_correction(q: &QParam, trunc: usize, z: &GradedElement, e: &GradedElement, m: usize) -> Result<GradedElement> {
    Ok(product_defect(q, trunc, z, e)?.component(m))
}

/// Γ_m written out directly. With raw forms F = z^d f, G = w^d g,
/// U = z^l u, V = w^l v and m = d + l + k, k ≥ 1:
///   φ = q^{ld}[w^{l+k}]V · F(z) z^l + [w^{d+k}]G · U(q^{d+k}z) z^d,
///   ψ = [z^{l+k}]U · G(q^{l+k}w) w^l + q^{ld}[z^{d+k}]F · V(w) w^d,
/// and Γ_m = (z^{−m}P_m φ, w^{−m}P_m ψ). Zero for m ≤ d + l.
pub fn gamma_closed_form(q: &QParam, z: &GradedElement, e: &GradedElement, m: usize) -> GradedElement {
    let (d, l) = (z.degree, e.degree);
    if m <= d + l {
        return GradedElement::new(GermPair::zero(EXACT), m);
    }
    let k = m - d - l;
    let (f, g) = z.raw();
    let (u, v) = e.raw();
    let qld = q.pow((l * d) as i64);
    let phi = f
        .shift_up(l)
        .scale(&v.coeff(l + k))
        .scale(&qld)
        .add(&u.dilate(&q.pow((d + k) as i64)).shift_up(d).scale(&g.coeff(d + k)));
    let psi = g
        .dilate(&q.pow((l + k) as i64))
        .shift_up(l)
        .scale(&u.coeff(l + k))
        .add(&v.shift_up(d).scale(&f.coeff(d + k)).scale(&qld));
    let lower = |s: &Series1| s.project(m).divide_by_var(m).expect("projected to order m");
    GradedElement::new(GermPair::raw(lower(&phi), lower(&psi)), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{make_q, Cq};
    use crate::random;

    #[test]
    fn vanishes_up_to_total_degree() {
        let q = make_q(Cq::rat(1, 2)).unwrap();
        let mut r = random::stream(51, 0);
        let z = random::graded(&mut r, 8, 1);
        let e = random::graded(&mut r, 8, 2);
        for m in 0..=3 {
            assert!(gamma_correction(&q, 7, &z, &e, m).unwrap().pair.vanishes().holds());
        }
        let one = GradedElement::new(GermPair::constant(Cq::int(3), EXACT), 0);
        for m in 1..=5 {
            assert!(gamma_correction(&q, 5, &one, &one, m).unwrap().pair.vanishes().holds());
        }
    }

    #[test]
    fn z_w_example() {
        let q = make_q(Cq::rat(1, 3)).unwrap();
        let x = Series1::poly(vec![Cq::zero(), Cq::one()]);
        let zw = GradedElement::new(GermPair::new(x.clone(), x).unwrap(), 0);
        let g = gamma_correction(&q, 4, &zw, &zw, 1).unwrap();
        // φ₁ = z + qz, ψ₁ = qw + w
        let c = &Cq::one() + q.value();
        assert!(g.pair.agree(&GermPair::constant(c, EXACT)).holds());
    }

    #[test]
    fn closed_form_matches_product() {
        let q = make_q(Cq::rat(2, 3)).unwrap();
        let mut r = random::stream(52, 0);
        for (d, l) in [(0, 0), (1, 0), (1, 2), (2, 2)] {
            let n = 7;
            let z = random::graded(&mut r, n, d);
            let e = random::graded(&mut r, n, l);
            for m in 0..=n {
                let a = gamma_correction(&q, n, &z, &e, m).unwrap();
                let b = gamma_closed_form(&q, &z, &e, m);
                assert!(a.pair.agree(&b.pair).holds(), "(d,l,m)=({},{},{})", d, l, m);
            }
        }
    }
}
