//! Residue classes in R_T/(M) and the quotient-ring context.
//!
//! These carry the exponents `D` of torsion points and the units `B`
//! representing Galois elements, always reduced to degree < deg M.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::{cmp_graded, PolyRing, RtPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    rep: RtPoly,
    modulus: RtPoly,
}

impl ResidueClass {
    pub fn rep(&self) -> &RtPoly {
        &self.rep
    }

    pub fn modulus(&self) -> &RtPoly {
        &self.modulus
    }
}

/// R_T/(M) as a context object; M monic and nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRing {
    ring: PolyRing<Fq>,
    modulus: RtPoly,
}

impl ResidueRing {
    pub fn new(ring: PolyRing<Fq>, modulus: RtPoly) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !ring.is_monic(&modulus) {
            return Err(Error::NotMonic(ring.format_rt(&modulus, "T")));
        }
        Ok(ResidueRing { ring, modulus })
    }

    pub fn poly_ring(&self) -> &PolyRing<Fq> {
        &self.ring
    }

    pub fn modulus(&self) -> &RtPoly {
        &self.modulus
    }

    pub fn reduce(&self, p: &RtPoly) -> ResidueClass {
        let rep = self.ring.rem(p, &self.modulus).expect("monic modulus");
        ResidueClass {
            rep,
            modulus: self.modulus.clone(),
        }
    }

    pub fn zero(&self) -> ResidueClass {
        self.reduce(&self.ring.zero())
    }

    pub fn one(&self) -> ResidueClass {
        self.reduce(&self.ring.one())
    }

    fn check(&self, a: &ResidueClass) -> Result<()> {
        if a.modulus != self.modulus {
            return Err(Error::LevelMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &ResidueClass, b: &ResidueClass) -> Result<ResidueClass> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.reduce(&self.ring.add(&a.rep, &b.rep)))
    }

    pub fn sub(&self, a: &ResidueClass, b: &ResidueClass) -> Result<ResidueClass> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.reduce(&self.ring.sub(&a.rep, &b.rep)))
    }

    pub fn mul(&self, a: &ResidueClass, b: &ResidueClass) -> Result<ResidueClass> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.reduce(&self.ring.mul(&a.rep, &b.rep)))
    }

    pub fn is_unit(&self, a: &ResidueClass) -> bool {
        !a.rep.is_zero()
            && self
                .ring
                .gcd(&a.rep, &self.modulus)
                .map(|g| g == self.ring.one())
                .unwrap_or(false)
    }

    pub fn inv(&self, a: &ResidueClass) -> Result<ResidueClass> {
        let (g, s, _) = self.ring.xgcd(&a.rep, &self.modulus)?;
        if g != self.ring.one() {
            return Err(Error::InversionOfZero);
        }
        Ok(self.reduce(&s))
    }

    /// All residues in canonical graded-lexicographic order.
    pub fn all_residues(&self) -> Vec<ResidueClass> {
        let d = self.modulus.degree().expect("nonzero modulus");
        let elems = self.ring.base().all_elements();
        let mut reps: Vec<RtPoly> = vec![self.ring.zero()];
        for _ in 0..d {
            let mut next = Vec::with_capacity(reps.len() * elems.len());
            for r in &reps {
                let shifted = self.ring.mul(r, &self.ring.gen());
                for e in &elems {
                    next.push(self.ring.add(&shifted, &self.ring.constant(e.clone())));
                }
            }
            reps = next;
        }
        reps.sort_by(cmp_graded);
        reps.dedup();
        reps.into_iter()
            .map(|rep| ResidueClass {
                rep,
                modulus: self.modulus.clone(),
            })
            .collect()
    }

    /// All units, canonical order.
    pub fn units(&self) -> Vec<ResidueClass> {
        self.all_residues()
            .into_iter()
            .filter(|r| self.is_unit(r))
            .collect()
    }
}
