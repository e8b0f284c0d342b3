//! Dense univariate polynomials over an exact field.
//!
//! `Poly<F>` stores coefficients lowest degree first. The representation is
//! canonical: the vector is empty for the zero polynomial and the last entry
//! is nonzero otherwise, so `deg 0` is the distinguished sentinel
//! `degree() == None` rather than an integer.

use crate::error::{Error, Result};
use crate::field::{FieldOps, Fq, FqElem};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<F: FieldOps> {
    coeffs: Vec<F::Elem>,
}

impl<F: FieldOps> std::hash::Hash for Poly<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<F: FieldOps> Poly<F> {
    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }
}

/// The polynomial ring F[x] as a context object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing<F: FieldOps> {
    base: F,
}

impl<F: FieldOps> PolyRing<F> {
    pub fn new(base: F) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn from_coeffs(&self, coeffs: Vec<F::Elem>) -> Poly<F> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero(&self) -> Poly<F> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F> {
        self.constant(self.base.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        self.from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn gen(&self) -> Poly<F> {
        self.from_coeffs(vec![self.base.zero(), self.base.one()])
    }

    pub fn monomial(&self, c: F::Elem, k: usize) -> Poly<F> {
        let mut coeffs = vec![self.base.zero(); k + 1];
        coeffs[k] = c;
        self.from_coeffs(coeffs)
    }

    pub fn coeff(&self, f: &Poly<F>, i: usize) -> F::Elem {
        f.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn add(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.base.add(&self.coeff(a, i), &self.coeff(b, i)));
        }
        self.from_coeffs(out)
    }

    pub fn neg(&self, a: &Poly<F>) -> Poly<F> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(out)
    }

    pub fn scale(&self, c: &F::Elem, a: &Poly<F>) -> Poly<F> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.base.mul(c, x)).collect())
    }

    pub fn pow(&self, a: &Poly<F>, e: usize) -> Poly<F> {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Euclidean division: a = q*b + r with deg r < deg b.
    pub fn divmod(&self, a: &Poly<F>, b: &Poly<F>) -> Result<(Poly<F>, Poly<F>)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if a.coeffs.len() < b.coeffs.len() {
            return Ok((self.zero(), a.clone()));
        }
        let lead_inv = self.base.inv(b.leading().unwrap())?;
        let mut rem = a.coeffs.clone();
        let mut quot = vec![self.base.zero(); a.coeffs.len() - b.coeffs.len() + 1];
        while rem.len() >= b.coeffs.len() {
            if self.base.is_zero(rem.last().unwrap()) {
                rem.pop();
                continue;
            }
            let c = self.base.mul(rem.last().unwrap(), &lead_inv);
            let shift = rem.len() - b.coeffs.len();
            quot[shift] = c.clone();
            for (i, y) in b.coeffs.iter().enumerate() {
                rem[shift + i] = self.base.sub(&rem[shift + i], &self.base.mul(&c, y));
            }
            rem.pop();
        }
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::BothInputsZero);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let r = self.rem(&r0, &r1)?;
            r0 = r1;
            r1 = r;
        }
        self.make_monic(&r0)
    }

    /// Extended gcd: returns monic g plus s, t with s*a + t*b = g.
    pub fn xgcd(&self, a: &Poly<F>, b: &Poly<F>) -> Result<(Poly<F>, Poly<F>, Poly<F>)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::BothInputsZero);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divmod(&r0, &r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let ns = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, ns);
            let nt = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, nt);
        }
        let lead_inv = self.base.inv(r0.leading().unwrap())?;
        Ok((
            self.scale(&lead_inv, &r0),
            self.scale(&lead_inv, &s0),
            self.scale(&lead_inv, &t0),
        ))
    }

    pub fn is_monic(&self, a: &Poly<F>) -> bool {
        a.leading().is_some_and(|c| *c == self.base.one())
    }

    pub fn make_monic(&self, a: &Poly<F>) -> Result<Poly<F>> {
        let lead = a.leading().ok_or(Error::ZeroPolynomial)?;
        let inv = self.base.inv(lead)?;
        Ok(self.scale(&inv, a))
    }

    pub fn eval(&self, f: &Poly<F>, at: &F::Elem) -> F::Elem {
        let mut acc = self.base.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, at), c);
        }
        acc
    }

    /// Substitute one polynomial into another.
    pub fn compose(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        let mut acc = self.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, g), &self.constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self, f: &Poly<F>) -> Poly<F> {
        if f.coeffs.len() <= 1 {
            return self.zero();
        }
        let mut out = Vec::with_capacity(f.coeffs.len() - 1);
        for (i, c) in f.coeffs.iter().enumerate().skip(1) {
            // i * c computed by repeated addition; exact in any characteristic
            let mut acc = self.base.zero();
            for _ in 0..i {
                acc = self.base.add(&acc, c);
            }
            out.push(acc);
        }
        self.from_coeffs(out)
    }

    pub fn pow_mod(&self, f: &Poly<F>, mut e: u128, modulus: &Poly<F>) -> Result<Poly<F>> {
        let mut base = self.rem(f, modulus)?;
        let mut r = self.rem(&self.one(), modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                r = self.rem(&self.mul(&r, &base), modulus)?;
            }
            base = self.rem(&self.mul(&base, &base), modulus)?;
            e >>= 1;
        }
        Ok(r)
    }

    /// Renders with descending powers, explicit coefficients and `^` exponents,
    /// e.g. `2T^2+T+1`.
    pub fn format(&self, f: &Poly<F>, var: &str, fmt_coeff: impl Fn(&F::Elem) -> String) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate().rev() {
            if self.base.is_zero(c) {
                continue;
            }
            let cs = fmt_coeff(c);
            let term = if i == 0 {
                cs
            } else {
                let head = if *c == self.base.one() { String::new() } else { cs };
                if i == 1 {
                    format!("{head}{var}")
                } else {
                    format!("{head}{var}^{i}")
                }
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

/// Graded-lexicographic comparison: by degree (zero least), then by the
/// coefficient sequence read from the constant term up. This is the canonical
/// ordering used wherever tables and enumerations are emitted.
pub fn cmp_graded<F: FieldOps>(a: &Poly<F>, b: &Poly<F>) -> Ordering
where
    F::Elem: Ord,
{
    match a.coeffs.len().cmp(&b.coeffs.len()) {
        Ordering::Equal => a.coeffs.cmp(&b.coeffs),
        ord => ord,
    }
}

/// R_T = F_q[T], the ring the Carlitz module is defined over.
pub type RtRing = PolyRing<Fq>;
/// An element of R_T.
pub type RtPoly = Poly<Fq>;

impl RtRing {
    pub fn format_rt(&self, f: &RtPoly, var: &str) -> String {
        let fq = self.base().clone();
        self.format(f, var, move |c: &FqElem| fq.format_elem(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn f3_ring() -> RtRing {
        PolyRing::new(Fq::prime(3).unwrap())
    }

    fn poly(ring: &RtRing, cs: &[u64]) -> RtPoly {
        let coeffs = cs.iter().map(|&c| ring.base().from_u64(c)).collect();
        ring.from_coeffs(coeffs)
    }

    #[test]
    fn zero_degree_is_sentinel() {
        let r = f3_ring();
        assert_eq!(r.zero().degree(), None);
        assert_eq!(r.one().degree(), Some(0));
        assert_eq!(r.gen().degree(), Some(1));
    }

    #[test]
    fn divmod_zero_dividend() {
        let r = f3_ring();
        let (q, rem) = r.divmod(&r.zero(), &r.gen()).unwrap();
        assert!(q.is_zero() && rem.is_zero());
    }

    #[test]
    fn divmod_long_division_oracle() {
        // (T^2 + 1) / T over F_3 -> (T, 1)
        let r = f3_ring();
        let a = poly(&r, &[1, 0, 1]);
        let (q, rem) = r.divmod(&a, &r.gen()).unwrap();
        assert_eq!(q, r.gen());
        assert_eq!(rem, r.one());
    }

    #[test]
    fn divmod_rejects_zero_divisor() {
        let r = f3_ring();
        assert_eq!(r.divmod(&r.one(), &r.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn xgcd_unit() {
        let r = f3_ring();
        let (g, s, t) = r.xgcd(&r.gen(), &r.one()).unwrap();
        assert_eq!(g, r.one());
        // s*T + t*1 = 1 verified by substitution
        let check = r.add(&r.mul(&s, &r.gen()), &t);
        assert_eq!(check, r.one());
    }

    #[test]
    fn xgcd_coprime_linear() {
        // gcd(T, T+1) = 1 over F_3, identity checked by re-evaluation
        let r = f3_ring();
        let a = r.gen();
        let b = poly(&r, &[1, 1]);
        let (g, s, t) = r.xgcd(&a, &b).unwrap();
        assert_eq!(g, r.one());
        let check = r.add(&r.mul(&s, &a), &r.mul(&t, &b));
        assert_eq!(check, r.one());
    }

    #[test]
    fn xgcd_equal_inputs() {
        // (T^2, T^2) -> (T^2, s, t) with s + t = 1
        let r = f3_ring();
        let t2 = poly(&r, &[0, 0, 1]);
        let (g, s, t) = r.xgcd(&t2, &t2).unwrap();
        assert_eq!(g, t2);
        assert_eq!(r.add(&s, &t), r.one());
    }

    #[test]
    fn xgcd_rejects_both_zero() {
        let r = f3_ring();
        assert_eq!(
            r.xgcd(&r.zero(), &r.zero()),
            Err(Error::BothInputsZero)
        );
    }

    #[test]
    fn divmod_round_trip_random() {
        use rand::{Rng, SeedableRng};
        let r = f3_ring();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let da = rng.gen_range(0..8);
            let db = rng.gen_range(0..5);
            let a = r.from_coeffs((0..=da).map(|_| r.base().random(&mut rng)).collect());
            let b = r.from_coeffs((0..=db).map(|_| r.base().random(&mut rng)).collect());
            if b.is_zero() {
                continue;
            }
            let (q, rem) = r.divmod(&a, &b).unwrap();
            assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
            assert!(rem.degree() < b.degree() || rem.is_zero());
        }
    }

    #[test]
    fn canonical_ordering() {
        let r = f3_ring();
        let mut v = [
            poly(&r, &[1, 1]), // T+1
            r.zero(),
            poly(&r, &[2]), // 2
            r.gen(),        // T
            poly(&r, &[1, 2]), // 2T+1
            r.one(),
        ];
        v.sort_by(cmp_graded);
        let shown: Vec<String> = v.iter().map(|f| r.format_rt(f, "T")).collect();
        assert_eq!(shown, vec!["0", "1", "2", "T", "T+1", "2T+1"]);
    }

    #[test]
    fn format_descending_powers() {
        let r = f3_ring();
        let f = poly(&r, &[1, 1, 2]);
        assert_eq!(r.format_rt(&f, "T"), "2T^2+T+1");
    }
}
