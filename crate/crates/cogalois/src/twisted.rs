//! Twisted (Ore) polynomials over R_T with the commutation rule
//! `tau * c = c^q * tau`, where `tau` is the q-power Frobenius.

use crate::field::Fq;
use crate::poly::{PolyRing, RtPoly};

/// `sum_i c_i tau^i` with c_i in R_T; canonical: leading coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedPoly {
    coeffs: Vec<RtPoly>,
}

impl TwistedPoly {
    pub fn coeffs(&self) -> &[RtPoly] {
        &self.coeffs
    }

    /// Degree in tau, `None` for zero.
    pub fn deg_tau(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The ring R_T<tau>.
#[derive(Debug, Clone)]
pub struct TwistedRing {
    ring: PolyRing<Fq>,
}

impl TwistedRing {
    pub fn new(ring: PolyRing<Fq>) -> Self {
        TwistedRing { ring }
    }

    pub fn poly_ring(&self) -> &PolyRing<Fq> {
        &self.ring
    }

    pub fn from_coeffs(&self, coeffs: Vec<RtPoly>) -> TwistedPoly {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TwistedPoly { coeffs }
    }

    pub fn zero(&self) -> TwistedPoly {
        TwistedPoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> TwistedPoly {
        self.from_coeffs(vec![self.ring.one()])
    }

    pub fn scalar(&self, c: RtPoly) -> TwistedPoly {
        self.from_coeffs(vec![c])
    }

    pub fn tau(&self) -> TwistedPoly {
        self.from_coeffs(vec![self.ring.zero(), self.ring.one()])
    }

    pub fn coeff(&self, f: &TwistedPoly, i: usize) -> RtPoly {
        f.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn add(&self, a: &TwistedPoly, b: &TwistedPoly) -> TwistedPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.add(&self.coeff(a, i), &self.coeff(b, i)))
            .collect();
        self.from_coeffs(coeffs)
    }

    /// `c^(q^i)` for c in R_T: substitute T -> T^(q^i).
    pub fn frobenius_iter(&self, c: &RtPoly, i: usize) -> RtPoly {
        if i == 0 || c.is_zero() {
            return c.clone();
        }
        let q = self.ring.base().q();
        let step = q
            .checked_pow(i as u32)
            .and_then(|v| usize::try_from(v).ok())
            .expect("Frobenius power within desk scale");
        let mut out = vec![self.ring.base().zero(); c.coeffs().len().saturating_sub(1) * step + 1];
        for (e, a) in c.coeffs().iter().enumerate() {
            out[e * step] = a.clone();
        }
        self.ring.from_coeffs(out)
    }

    /// Product under `tau * c = c^q * tau`; tau-degrees add.
    pub fn mul(&self, a: &TwistedPoly, b: &TwistedPoly) -> TwistedPoly {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.ring.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let term = self.ring.mul(ai, &self.frobenius_iter(bj, i));
                out[i + j] = self.ring.add(&out[i + j], &term);
            }
        }
        self.from_coeffs(out)
    }

    pub fn format(&self, f: &TwistedPoly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = self.ring.format_rt(c, "T");
            let cs = if c.degree() == Some(0) || i == 0 {
                cs
            } else {
                format!("({cs})")
            };
            let term = match i {
                0 => cs,
                1 if cs == "1" => "tau".to_string(),
                1 => format!("{cs}tau"),
                _ if cs == "1" => format!("tau^{i}"),
                _ => format!("{cs}tau^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }
}
