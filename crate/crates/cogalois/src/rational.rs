//! The rational function field k = F_q(T).
//!
//! Canonical form: denominator monic and coprime to the numerator, so
//! structural equality and hashing are exact.

use crate::error::{Error, Result};
use crate::field::{FieldOps, Fq};
use crate::poly::{PolyRing, RtPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: RtPoly,
    den: RtPoly,
}

impl RationalFunction {
    pub fn num(&self) -> &RtPoly {
        &self.num
    }

    pub fn den(&self) -> &RtPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

/// k = F_q(T) as a context object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatField {
    ring: PolyRing<Fq>,
}

impl RatField {
    pub fn new(fq: Fq) -> Self {
        RatField {
            ring: PolyRing::new(fq),
        }
    }

    pub fn poly_ring(&self) -> &PolyRing<Fq> {
        &self.ring
    }

    pub fn fq(&self) -> &Fq {
        self.ring.base()
    }

    /// Builds `num/den` in canonical form.
    pub fn fraction(&self, num: RtPoly, den: RtPoly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: self.ring.zero(),
                den: self.ring.one(),
            });
        }
        let g = self.ring.gcd(&num, &den)?;
        let num = self.ring.divmod(&num, &g)?.0;
        let den = self.ring.divmod(&den, &g)?.0;
        let lead_inv = self.fq().inv(den.leading().unwrap())?;
        Ok(RationalFunction {
            num: self.ring.scale(&lead_inv, &num),
            den: self.ring.scale(&lead_inv, &den),
        })
    }

    pub fn from_poly(&self, p: RtPoly) -> RationalFunction {
        RationalFunction {
            num: p,
            den: self.ring.one(),
        }
    }

    pub fn format(&self, r: &RationalFunction, var: &str) -> String {
        let n = self.ring.format_rt(&r.num, var);
        if r.is_polynomial() {
            n
        } else {
            let d = self.ring.format_rt(&r.den, var);
            format!("({n})/({d})")
        }
    }
}

impl FieldOps for RatField {
    type Elem = RationalFunction;

    fn zero(&self) -> RationalFunction {
        self.from_poly(self.ring.zero())
    }

    fn one(&self) -> RationalFunction {
        self.from_poly(self.ring.one())
    }

    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        let num = self.ring.add(
            &self.ring.mul(&a.num, &b.den),
            &self.ring.mul(&b.num, &a.den),
        );
        let den = self.ring.mul(&a.den, &b.den);
        self.fraction(num, den).expect("nonzero denominator")
    }

    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: self.ring.neg(&a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        let num = self.ring.mul(&a.num, &b.num);
        let den = self.ring.mul(&a.den, &b.den);
        self.fraction(num, den).expect("nonzero denominator")
    }

    fn inv(&self, a: &RationalFunction) -> Result<RationalFunction> {
        if a.num.is_zero() {
            return Err(Error::InversionOfZero);
        }
        self.fraction(a.den.clone(), a.num.clone())
    }
}
