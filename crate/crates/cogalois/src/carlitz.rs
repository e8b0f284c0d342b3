//! The Carlitz module C: R_T -> R_T<tau> with C_T = T + tau, its action on
//! ambient F_q-algebras, Carlitz cyclotomic polynomials, and the exponent-side
//! model of the torsion module.

use crate::error::{Error, Result};
use crate::factor;
use crate::field::Fq;
use crate::poly::{PolyRing, RtPoly};
use crate::residue::{ResidueClass, ResidueRing};
use crate::twisted::{TwistedPoly, TwistedRing};

/// The ring homomorphism M -> C_M, built from C_T = T + tau by F_q-linearity
/// and multiplicativity.
pub fn carlitz_operator(ring: &PolyRing<Fq>, m: &RtPoly) -> TwistedPoly {
    let tw = TwistedRing::new(ring.clone());
    let c_t = tw.from_coeffs(vec![ring.gen(), ring.one()]);
    let mut acc = tw.zero();
    let mut t_power = tw.one();
    for (i, a) in m.coeffs().iter().enumerate() {
        if i > 0 {
            t_power = tw.mul(&t_power, &c_t);
        }
        if !ring.base().is_zero(a) {
            let scaled = tw.from_coeffs(
                t_power
                    .coeffs()
                    .iter()
                    .map(|c| ring.scale(a, c))
                    .collect(),
            );
            acc = tw.add(&acc, &scaled);
        }
    }
    acc
}

/// C_M(U) as a dense U-polynomial with R_T coefficients (an additive
/// polynomial: only U^(q^i) terms are nonzero).
pub fn carlitz_u_polynomial(ring: &PolyRing<Fq>, m: &RtPoly) -> Vec<RtPoly> {
    let op = carlitz_operator(ring, m);
    if op.is_zero() {
        return Vec::new();
    }
    let q = ring.base().q() as usize;
    let deg = q.pow(op.deg_tau().unwrap() as u32);
    let mut out = vec![ring.zero(); deg + 1];
    let mut pow = 1usize;
    for c in op.coeffs() {
        out[pow] = c.clone();
        pow *= q;
    }
    out
}

/// An ambient F_q-algebra the Carlitz module can act on: addition, scalar
/// multiplication by (the image of) R_T, and the q-power Frobenius.
pub trait CarlitzAmbient {
    type Point: Clone + PartialEq;

    fn zero_point(&self) -> Self::Point;
    fn add_points(&self, a: &Self::Point, b: &Self::Point) -> Self::Point;
    fn scalar_mul(&self, c: &RtPoly, a: &Self::Point) -> Self::Point;
    fn q_power(&self, a: &Self::Point) -> Self::Point;
}

/// `C_M(u) = sum c_i u^(q^i)` with c_i from [`carlitz_operator`].
pub fn carlitz_act<A: CarlitzAmbient>(
    ring: &PolyRing<Fq>,
    ambient: &A,
    m: &RtPoly,
    u: &A::Point,
) -> A::Point {
    let op = carlitz_operator(ring, m);
    let mut acc = ambient.zero_point();
    let mut frob = u.clone();
    for (i, c) in op.coeffs().iter().enumerate() {
        if i > 0 {
            frob = ambient.q_power(&frob);
        }
        if !c.is_zero() {
            acc = ambient.add_points(&acc, &ambient.scalar_mul(c, &frob));
        }
    }
    acc
}

/// k itself as a Carlitz ambient (used for rational checks).
pub struct RationalAmbient {
    pub field: crate::rational::RatField,
}

impl CarlitzAmbient for RationalAmbient {
    type Point = crate::rational::RationalFunction;

    fn zero_point(&self) -> Self::Point {
        use crate::field::FieldOps;
        self.field.zero()
    }

    fn add_points(&self, a: &Self::Point, b: &Self::Point) -> Self::Point {
        use crate::field::FieldOps;
        self.field.add(a, b)
    }

    fn scalar_mul(&self, c: &RtPoly, a: &Self::Point) -> Self::Point {
        use crate::field::FieldOps;
        self.field.mul(&self.field.from_poly(c.clone()), a)
    }

    fn q_power(&self, a: &Self::Point) -> Self::Point {
        use crate::field::FieldOps;
        let q = self.field.poly_ring().base().q();
        let mut acc = self.field.one();
        let mut base = a.clone();
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.field.mul(&acc, &base);
            }
            base = self.field.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The Carlitz cyclotomic polynomial Psi_{P^n}(U) = C_{P^n}(U) / C_{P^(n-1)}(U),
/// computed by exact division of additive polynomials. Monic of degree
/// Phi(P^n) with R_T coefficients; its roots are the exact-level-n torsion.
pub fn cyclotomic_poly(ring: &PolyRing<Fq>, p_poly: &RtPoly, n: usize) -> Result<Vec<RtPoly>> {
    if n == 0 {
        return Err(Error::Invalid("level must be >= 1".into()));
    }
    if !ring.is_monic(p_poly) {
        return Err(Error::NotMonic(ring.format_rt(p_poly, "T")));
    }
    if !factor::is_irreducible(ring, p_poly)? {
        return Err(Error::NotIrreducible(ring.format_rt(p_poly, "T")));
    }
    let num = carlitz_u_polynomial(ring, &ring.pow(p_poly, n));
    let den = if n == 1 {
        vec![ring.zero(), ring.one()]
    } else {
        carlitz_u_polynomial(ring, &ring.pow(p_poly, n - 1))
    };
    u_div_exact(ring, &num, &den)
}

/// Psi_M(U) for arbitrary monic M: product over monic divisors D of
/// C_D(U)^(mu(M/D)), assembled as one exact division.
pub fn cyclotomic_poly_general(ring: &PolyRing<Fq>, m: &RtPoly) -> Result<Vec<RtPoly>> {
    if m.degree().is_none() || m.degree() == Some(0) {
        return Err(Error::ConstantPolynomial);
    }
    if !ring.is_monic(m) {
        return Err(Error::NotMonic(ring.format_rt(m, "T")));
    }
    let fac = factor::factor(ring, m)?;
    // divisors with their Moebius value mu(M/D): nonzero only when M/D is squarefree
    let mut num = vec![ring.one()]; // U-polynomial 1
    let mut den = vec![ring.one()];
    let k = fac.factors.len();
    for mask in 0u32..(1 << k) {
        // D = M / prod_{i in mask} P_i  (each P_i taken out once)
        let mut d = ring.one();
        for (i, (p, e)) in fac.factors.iter().enumerate() {
            let take = if mask & (1 << i) != 0 { e - 1 } else { *e };
            d = ring.mul(&d, &ring.pow(p, take));
        }
        let mu_negative = (mask.count_ones() % 2) == 1;
        let cd = carlitz_u_polynomial(ring, &d);
        if mu_negative {
            den = u_mul(ring, &den, &cd);
        } else {
            num = u_mul(ring, &num, &cd);
        }
    }
    u_div_exact(ring, &num, &den)
}

fn u_mul(ring: &PolyRing<Fq>, a: &[RtPoly], b: &[RtPoly]) -> Vec<RtPoly> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Exact division of U-polynomials with R_T coefficients; the divisor must be
/// monic and divide exactly.
fn u_div_exact(ring: &PolyRing<Fq>, a: &[RtPoly], b: &[RtPoly]) -> Result<Vec<RtPoly>> {
    let mut rem: Vec<RtPoly> = a.to_vec();
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    let mut b = b.to_vec();
    while b.last().is_some_and(|c| c.is_zero()) {
        b.pop();
    }
    if b.is_empty() {
        return Err(Error::DivisionByZero);
    }
    if b.last().unwrap() != &ring.one() {
        return Err(Error::NotMonic("U-polynomial divisor".into()));
    }
    if rem.len() < b.len() {
        if rem.is_empty() {
            return Ok(Vec::new());
        }
        return Err(Error::Invalid("inexact additive-polynomial division".into()));
    }
    let mut quot = vec![ring.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let c = rem.last().unwrap().clone();
        let shift = rem.len() - b.len();
        if !c.is_zero() {
            quot[shift] = c.clone();
            for (i, y) in b.iter().enumerate() {
                rem[shift + i] = ring.sub(&rem[shift + i], &ring.mul(&c, y));
            }
        }
        rem.pop();
        while rem.last().is_some_and(|x| x.is_zero()) {
            rem.pop();
        }
    }
    if !rem.is_empty() {
        return Err(Error::Invalid("inexact additive-polynomial division".into()));
    }
    Ok(quot)
}

/// A torsion level (P, n) with P monic irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Level {
    pub p_poly: RtPoly,
    pub n: usize,
}

/// Exponent-side torsion point C_D(lambda_{P^n}), represented by D mod P^n.
/// The exponent form is authoritative for group and cohomology work;
/// conversion to a concrete field element is explicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionExponent {
    pub d: ResidueClass,
    pub level: Level,
}

impl TorsionExponent {
    pub fn new(d: ResidueClass, level: Level) -> Self {
        TorsionExponent { d, level }
    }
}

/// Modular context for a torsion level, modelling Lambda_{P^n} = R_T/(P^n):
/// point addition is addition of exponents and the Carlitz action of B is
/// multiplication by B.
#[derive(Debug, Clone)]
pub struct ExponentModule {
    ring: PolyRing<Fq>,
    residue_ring: ResidueRing,
    level: Level,
}

impl ExponentModule {
    pub fn new(ring: PolyRing<Fq>, p_poly: RtPoly, n: usize) -> Result<Self> {
        if !factor::is_irreducible(&ring, &p_poly)? {
            return Err(Error::NotIrreducible(ring.format_rt(&p_poly, "T")));
        }
        if !ring.is_monic(&p_poly) {
            return Err(Error::NotMonic(ring.format_rt(&p_poly, "T")));
        }
        let modulus = ring.pow(&p_poly, n);
        let residue_ring = ResidueRing::new(ring.clone(), modulus)?;
        Ok(ExponentModule {
            ring,
            residue_ring,
            level: Level { p_poly, n },
        })
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn residue_ring(&self) -> &ResidueRing {
        &self.residue_ring
    }

    pub fn exponent(&self, d: &RtPoly) -> TorsionExponent {
        TorsionExponent::new(self.residue_ring.reduce(d), self.level.clone())
    }

    pub fn zero(&self) -> TorsionExponent {
        self.exponent(&self.ring.zero())
    }

    fn check(&self, e: &TorsionExponent) -> Result<()> {
        if e.level != self.level {
            return Err(Error::LevelMismatch);
        }
        Ok(())
    }

    /// Point addition: addition of exponents.
    pub fn exponent_add(&self, a: &TorsionExponent, b: &TorsionExponent) -> Result<TorsionExponent> {
        self.check(a)?;
        self.check(b)?;
        Ok(TorsionExponent::new(
            self.residue_ring.add(&a.d, &b.d)?,
            self.level.clone(),
        ))
    }

    /// Applying C_B to the point: D -> B*D mod P^n.
    pub fn exponent_scale(&self, e: &TorsionExponent, b: &ResidueClass) -> Result<TorsionExponent> {
        self.check(e)?;
        Ok(TorsionExponent::new(
            self.residue_ring.mul(&e.d, b)?,
            self.level.clone(),
        ))
    }

    /// The minimal P^k annihilating the exponent: k = n - v_P(D).
    pub fn exponent_annihilator(&self, e: &TorsionExponent) -> Result<RtPoly> {
        self.check(e)?;
        let mut v = 0usize;
        let mut rep = e.d.rep().clone();
        while v < self.level.n && !rep.is_zero() {
            let (q, r) = self.ring.divmod(&rep, &self.level.p_poly)?;
            if !r.is_zero() {
                break;
            }
            rep = q;
            v += 1;
        }
        if e.d.rep().is_zero() {
            v = self.level.n;
        }
        Ok(self.ring.pow(&self.level.p_poly, self.level.n - v))
    }
}

/// Monic lcm of the annihilators of the listed points: the generated
/// submodule equals Lambda_b for the returned b (constructive form of the
/// torsion-classification argument).
pub fn torsion_lcm(module: &ExponentModule, points: &[TorsionExponent]) -> Result<RtPoly> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ring = module.ring.clone();
    let mut acc = ring.one();
    for pt in points {
        let ann = module.exponent_annihilator(pt)?;
        // lcm(acc, ann) = acc * ann / gcd
        let g = ring.gcd(&acc, &ann)?;
        acc = ring.divmod(&ring.mul(&acc, &ann), &g)?.0;
    }
    ring.make_monic(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted::TwistedRing;

    fn f3_ring() -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(3).unwrap())
    }

    fn poly(ring: &PolyRing<Fq>, cs: &[u64]) -> RtPoly {
        ring.from_coeffs(cs.iter().map(|&c| ring.base().from_u64(c)).collect())
    }

    #[test]
    fn operator_of_one_is_identity() {
        let r = f3_ring();
        let op = carlitz_operator(&r, &r.one());
        assert_eq!(op.coeffs(), &[r.one()]);
    }

    #[test]
    fn operator_of_t_is_generator() {
        let r = f3_ring();
        let op = carlitz_operator(&r, &r.gen());
        assert_eq!(op.coeffs(), &[r.gen(), r.one()]);
    }

    #[test]
    fn operator_of_t_squared_matches_twisted_square() {
        let r = f3_ring();
        let tw = TwistedRing::new(r.clone());
        let ct = carlitz_operator(&r, &r.gen());
        let expected = tw.mul(&ct, &ct);
        let got = carlitz_operator(&r, &r.monomial(r.base().one(), 2));
        assert_eq!(got, expected);
    }

    #[test]
    fn operator_properties() {
        let r = f3_ring();
        let m = poly(&r, &[1, 2, 1]);
        let op = carlitz_operator(&r, &m);
        // deg_tau = deg M, constant coefficient = M
        assert_eq!(op.deg_tau(), Some(2));
        assert_eq!(&op.coeffs()[0], &m);
    }

    #[test]
    fn homomorphism_law_random_pairs() {
        use rand::{Rng, SeedableRng};
        let r = f3_ring();
        let tw = TwistedRing::new(r.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let dm = rng.gen_range(0..=4);
            let dn = rng.gen_range(0..=4);
            let m = r.from_coeffs((0..=dm).map(|_| r.base().random(&mut rng)).collect());
            let n = r.from_coeffs((0..=dn).map(|_| r.base().random(&mut rng)).collect());
            let lhs = carlitz_operator(&r, &r.mul(&m, &n));
            let rhs = tw.mul(&carlitz_operator(&r, &m), &carlitz_operator(&r, &n));
            assert_eq!(lhs, rhs, "C_(MN) = C_M C_N");
            let add_l = carlitz_operator(&r, &r.add(&m, &n));
            let add_r = tw.add(&carlitz_operator(&r, &m), &carlitz_operator(&r, &n));
            assert_eq!(add_l, add_r, "C_(M+N) = C_M + C_N");
        }
    }

    #[test]
    fn cyclotomic_level_one() {
        // Psi_{T,1}(U) = U^(q-1) + T = U^2 + T at q = 3
        let r = f3_ring();
        let psi = cyclotomic_poly(&r, &r.gen(), 1).unwrap();
        assert_eq!(psi.len(), 3);
        assert_eq!(psi[0], r.gen());
        assert!(psi[1].is_zero());
        assert_eq!(psi[2], r.one());
    }

    #[test]
    fn cyclotomic_level_two_by_division_oracle() {
        // C_{T^2}(U) / C_T(U): monic degree 6, remainder 0
        let r = f3_ring();
        let psi = cyclotomic_poly(&r, &r.gen(), 2).unwrap();
        assert_eq!(psi.len(), 7);
        assert_eq!(psi.last().unwrap(), &r.one());
        // reconstruct: psi * C_T(U) = C_{T^2}(U)
        let ct = carlitz_u_polynomial(&r, &r.gen());
        let ct2 = carlitz_u_polynomial(&r, &r.monomial(r.base().one(), 2));
        assert_eq!(u_mul(&r, &psi, &ct), ct2);
        // frozen coefficients: U^6 + 2T U^4 + T^2 U^2 + T
        assert_eq!(psi[0], r.gen());
        assert_eq!(psi[2], r.monomial(r.base().one(), 2));
        assert_eq!(psi[4], r.monomial(r.base().from_u64(2), 1));
    }

    #[test]
    fn cyclotomic_degree_is_euler_phi() {
        let r = f3_ring();
        let psi = cyclotomic_poly(&r, &r.gen(), 3).unwrap();
        assert_eq!(psi.len() - 1, 18);
        let phi = factor::euler_phi(&r, &r.monomial(r.base().one(), 3)).unwrap();
        assert_eq!(phi, 18);
    }

    #[test]
    fn cyclotomic_rejects_reducible() {
        let r = f3_ring();
        let sq = poly(&r, &[1, 2, 1]);
        assert!(matches!(
            cyclotomic_poly(&r, &sq, 1),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn cyclotomic_general_squarefree_product() {
        // Psi_{T(T+1)} has degree Phi(T(T+1)) = 4
        let r = f3_ring();
        let m = r.mul(&r.gen(), &poly(&r, &[1, 1]));
        let psi = cyclotomic_poly_general(&r, &m).unwrap();
        assert_eq!(psi.len() - 1, 4);
        assert_eq!(psi.last().unwrap(), &r.one());
        // consistency with the prime-power route on M = T^2
        let t2 = r.monomial(r.base().one(), 2);
        assert_eq!(
            cyclotomic_poly_general(&r, &t2).unwrap(),
            cyclotomic_poly(&r, &r.gen(), 2).unwrap()
        );
    }

    #[test]
    fn exponent_model_scale_and_annihilator() {
        let r = f3_ring();
        let em = ExponentModule::new(r.clone(), r.gen(), 2).unwrap();
        let one = em.exponent(&r.one());
        // scale by B = 1 is the identity
        let b1 = em.residue_ring().one();
        assert_eq!(em.exponent_scale(&one, &b1).unwrap(), one);
        // scale by B = T: D = 1 -> D = T (the point C_T(lambda_{T^2}) = lambda_T)
        let bt = em.residue_ring().reduce(&r.gen());
        let scaled = em.exponent_scale(&one, &bt).unwrap();
        assert_eq!(scaled.d.rep(), &r.gen());
        // scale by B = P^n kills the point
        let bpn = em.residue_ring().reduce(&r.monomial(r.base().one(), 2));
        assert_eq!(em.exponent_scale(&one, &bpn).unwrap(), em.zero());
        // mixing levels is rejected
        let em3 = ExponentModule::new(r.clone(), r.gen(), 3).unwrap();
        assert_eq!(
            em.exponent_add(&one, &em3.exponent(&r.one())),
            Err(Error::LevelMismatch)
        );
        // annihilators
        assert_eq!(em.exponent_annihilator(&em.zero()).unwrap(), r.one());
        assert_eq!(
            em.exponent_annihilator(&one).unwrap(),
            r.monomial(r.base().one(), 2)
        );
        assert_eq!(em.exponent_annihilator(&scaled).unwrap(), r.gen());
    }

    #[test]
    fn torsion_lcm_cases() {
        let r = f3_ring();
        let em = ExponentModule::new(r.clone(), r.gen(), 2).unwrap();
        assert_eq!(torsion_lcm(&em, &[em.zero()]).unwrap(), r.one());
        let one = em.exponent(&r.one());
        assert_eq!(
            torsion_lcm(&em, &[one]).unwrap(),
            r.monomial(r.base().one(), 2)
        );
        let t = em.exponent(&r.gen());
        assert_eq!(torsion_lcm(&em, &[t.clone(), t]).unwrap(), r.gen());
        assert!(matches!(torsion_lcm(&em, &[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn torsion_lcm_matches_bruteforce_submodule_closure() {
        use rand::{Rng, SeedableRng};
        use std::collections::HashSet;
        let r = f3_ring();
        let em = ExponentModule::new(r.clone(), r.gen(), 2).unwrap();
        let residues = em.residue_ring().all_residues();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let count = rng.gen_range(1..=3);
            let pts: Vec<TorsionExponent> = (0..count)
                .map(|_| {
                    let i = rng.gen_range(0..residues.len());
                    TorsionExponent::new(residues[i].clone(), em.level().clone())
                })
                .collect();
            let b = torsion_lcm(&em, &pts).unwrap();
            // closure of the generated submodule under addition and T-scaling
            let mut set: HashSet<ResidueClass> = HashSet::new();
            set.insert(em.residue_ring().zero().clone());
            let mut frontier: Vec<ResidueClass> = pts.iter().map(|p| p.d.clone()).collect();
            let t_res = em.residue_ring().reduce(&r.gen());
            while let Some(x) = frontier.pop() {
                if set.contains(&x) {
                    continue;
                }
                set.insert(x.clone());
                for y in set.clone() {
                    frontier.push(em.residue_ring().add(&x, &y).unwrap());
                }
                frontier.push(em.residue_ring().mul(&x, &t_res).unwrap());
            }
            let expected = (r.base().q() as usize).pow(b.degree().unwrap_or(0) as u32);
            assert_eq!(set.len(), expected, "|Lambda_b| = q^deg b");
            // every listed point is killed by b
            for p in &pts {
                let killed = em
                    .residue_ring()
                    .mul(&p.d, &em.residue_ring().reduce(&b))
                    .unwrap();
                assert!(killed.rep().is_zero());
            }
        }
    }
}
