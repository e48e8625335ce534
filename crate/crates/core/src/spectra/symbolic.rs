//! Independent check of the Koszul block formulas: expand d₀·d₁ as a
//! noncommutative polynomial in T, S with commuting scalars q, λ, μ.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Cq, QParam};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    T,
    S,
}

/// Exponents of q, λ, μ.
type Scalars = (u32, u32, u32);

/// Σ c · q^a λ^b μ^c · (word in T, S), integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NcPoly {
    terms: BTreeMap<(Vec<Letter>, Scalars), i64>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    fn term(word: &[Letter], s: Scalars, c: i64) -> NcPoly {
        let mut p = NcPoly::zero();
        p.push(word.to_vec(), s, c);
        p
    }

    fn push(&mut self, w: Vec<Letter>, s: Scalars, c: i64) {
        let e = self.terms.entry((w, s)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn one() -> NcPoly {
        NcPoly::term(&[], (0, 0, 0), 1)
    }

    pub fn t() -> NcPoly {
        NcPoly::term(&[Letter::T], (0, 0, 0), 1)
    }

    pub fn s() -> NcPoly {
        NcPoly::term(&[Letter::S], (0, 0, 0), 1)
    }

    pub fn q() -> NcPoly {
        NcPoly::term(&[], (1, 0, 0), 1)
    }

    pub fn lambda() -> NcPoly {
        NcPoly::term(&[], (0, 1, 0), 1)
    }

    pub fn mu() -> NcPoly {
        NcPoly::term(&[], (0, 0, 1), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &NcPoly) -> NcPoly {
        let mut p = self.clone();
        for ((w, s), c) in &o.terms {
            p.push(w.clone(), *s, *c);
        }
        p
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &NcPoly) -> NcPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &NcPoly) -> NcPoly {
        let mut p = NcPoly::zero();
        for ((w1, s1), c1) in &self.terms {
            for ((w2, s2), c2) in &o.terms {
                let mut w = w1.clone();
                w.extend(w2);
                p.push(w, (s1.0 + s2.0, s1.1 + s2.1, s1.2 + s2.2), c1 * c2);
            }
        }
        p
    }

    /// Normal form modulo ST = q·TS (the module relation TS = q⁻¹ST):
    /// every word becomes T^a S^b.
    pub fn reduce_relation(&self) -> NcPoly {
        let mut p = NcPoly::zero();
        for ((w, s), c) in &self.terms {
            // each S passing a T to its right contributes one factor of q
            let mut inversions = 0;
            let mut seen_s = 0;
            for l in w {
                match l {
                    Letter::S => seen_s += 1,
                    Letter::T => inversions += seen_s,
                }
            }
            let mut sorted = w.clone();
            sorted.sort();
            p.push(sorted, (s.0 + inversions, s.1, s.2), *c);
        }
        p
    }

    /// Drop every term containing λμ (points of ℂ_xy).
    pub fn on_axes(&self) -> NcPoly {
        let mut p = NcPoly::zero();
        for ((w, s), c) in &self.terms {
            if s.1 == 0 || s.2 == 0 {
                p.push(w.clone(), *s, *c);
            }
        }
        p
    }

    /// Substitute matrices and scalars.
    pub fn evaluate(&self, t: &Matrix<Cq>, s: &Matrix<Cq>, q: &QParam, l: &Cq, m: &Cq) -> Matrix<Cq> {
        let n = t.rows();
        let mut acc = Matrix::<Cq>::zeros(n, n);
        for ((w, e), c) in &self.terms {
            let mut op = Matrix::<Cq>::identity(n);
            for x in w {
                op = op.mul(match x {
                    Letter::T => t,
                    Letter::S => s,
                });
            }
            let k = &(&q.pow(e.0 as i64) * &l.pow(e.1 as i64)) * &m.pow(e.2 as i64);
            acc = acc.add(&op.scale(&(&k * &Cq::int(*c))));
        }
        acc
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((w, s), c)) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = vec![];
            for (name, e) in [("q", s.0), ("λ", s.1), ("μ", s.2)] {
                match e {
                    0 => {}
                    1 => factors.push(name.into()),
                    _ => factors.push(format!("{}^{}", name, e)),
                }
            }
            factors.extend(w.iter().map(|l| format!("{:?}", l)));
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let body = if factors.is_empty() {
                c.abs().to_string()
            } else if c.abs() == 1 {
                factors.join("·")
            } else {
                format!("{}·{}", c.abs(), factors.join("·"))
            };
            if i > 0 {
                write!(f, " {} {}", sign, body)?;
            } else {
                write!(f, "{}{}", sign, body)?;
            }
        }
        Ok(())
    }
}

/// The Koszul blocks as symbolic expressions:
/// d₁ = [μ − qS ; T − qλ], d₀ = [T − λ, S − μ].
pub fn koszul_blocks() -> ([NcPoly; 2], [NcPoly; 2]) {
    let (q, l, m) = (NcPoly::q(), NcPoly::lambda(), NcPoly::mu());
    let d1 = [m.sub(&q.mul(&NcPoly::s())), NcPoly::t().sub(&q.mul(&l))];
    let d0 = [NcPoly::t().sub(&l), NcPoly::s().sub(&m)];
    (d1, d0)
}

/// −qTS + ST + (q − 1)λμ
pub fn expected_composite() -> NcPoly {
    let (q, t, s) = (NcPoly::q(), NcPoly::t(), NcPoly::s());
    let lm = NcPoly::lambda().mul(&NcPoly::mu());
    q.mul(&t).mul(&s).neg().add(&s.mul(&t)).add(&q.sub(&NcPoly::one()).mul(&lm))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub composite: String,
    pub matches_expected: bool,
    pub vanishes_on_relation: bool,
}

impl OracleResult {
    pub fn holds(&self) -> bool {
        self.matches_expected && self.vanishes_on_relation
    }
}

/// Expand d₀·d₁, compare with the closed form, and reduce modulo the module
/// relation and λμ = 0.
pub fn koszul_oracle() -> OracleResult {
    let (d1, d0) = koszul_blocks();
    let comp = d0[0].mul(&d1[0]).add(&d0[1].mul(&d1[1]));
    OracleResult {
        composite: comp.to_string(),
        matches_expected: comp == expected_composite(),
        vanishes_on_relation: comp.reduce_relation().on_axes().is_zero(),
    }
}
