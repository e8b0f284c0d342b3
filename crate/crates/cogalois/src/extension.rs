//! Decision procedures for radical / pure / cyclotomic-coradical extensions
//! inside a Carlitz tower, the Galois criterion via torsion membership, the
//! explicit primitive-element construction and Drinfeld-Kummer verification.
//!
//! An extension K <= L inside the ambient tower is described by the pair of
//! subgroups of the absolute Galois group fixing K and L.

use crate::carlitz::carlitz_act;
use crate::error::{Error, Result};
use crate::factor;
use crate::poly::RtPoly;
use crate::residue::ResidueClass;
use crate::tower::{CycElem, CyclotomicField, GroupElement};

/// Which side of the extension a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Bottom,
    Top,
}

/// A tower-describable extension L/K: `bottom` fixes K, `top` fixes L,
/// with optional radical generator witnesses (alpha, a), C_a(alpha) in K.
#[derive(Debug, Clone)]
pub struct ExtensionSpec {
    bottom: Vec<ResidueClass>,
    top: Vec<ResidueClass>,
    generators: Vec<(CycElem, RtPoly)>,
}

impl ExtensionSpec {
    pub fn new(
        tower: &CyclotomicField,
        bottom: Vec<ResidueClass>,
        top: Vec<ResidueClass>,
        generators: Vec<(CycElem, RtPoly)>,
    ) -> Result<Self> {
        verify_subgroup(tower, &bottom)?;
        verify_subgroup(tower, &top)?;
        for t in &top {
            if !bottom.contains(t) {
                return Err(Error::Invalid("top subgroup must lie inside bottom".into()));
            }
        }
        // annihilation claims: C_a(alpha) is fixed by the bottom subgroup
        for (alpha, a) in &generators {
            if a.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            let image = carlitz_act(tower.ring(), tower, a, alpha);
            if !fixed_by(tower, &bottom, &image) {
                return Err(Error::Invalid(
                    "generator annihilation claim fails: C_a(alpha) is not in the base".into(),
                ));
            }
        }
        Ok(ExtensionSpec {
            bottom,
            top,
            generators,
        })
    }

    /// The standard tower extension L_n / L_1.
    pub fn full_tower(tower: &CyclotomicField) -> Result<Self> {
        let bottom = tower.relative_units().to_vec();
        let top = vec![tower.residue_ring()?.one()];
        let level = tower.level().ok_or(Error::LevelMismatch)?;
        let gen = (
            tower.lambda(),
            tower.ring().pow(&level.p_poly, level.n),
        );
        ExtensionSpec::new(tower, bottom, top, vec![gen])
    }

    /// The tower over the rational base: L_n / k.
    pub fn over_k(tower: &CyclotomicField) -> Result<Self> {
        let bottom = tower.absolute_units()?;
        let top = vec![tower.residue_ring()?.one()];
        let level = tower.level().ok_or(Error::LevelMismatch)?;
        let gen = (
            tower.lambda(),
            tower.ring().pow(&level.p_poly, level.n),
        );
        ExtensionSpec::new(tower, bottom, top, vec![gen])
    }

    pub fn bottom(&self) -> &[ResidueClass] {
        &self.bottom
    }

    pub fn top(&self) -> &[ResidueClass] {
        &self.top
    }

    pub fn generators(&self) -> &[(CycElem, RtPoly)] {
        &self.generators
    }

    pub fn side(&self, side: Side) -> &[ResidueClass] {
        match side {
            Side::Bottom => &self.bottom,
            Side::Top => &self.top,
        }
    }

    /// [L : K] = |bottom| / |top|.
    pub fn degree(&self) -> u128 {
        (self.bottom.len() / self.top.len()) as u128
    }
}

fn verify_subgroup(tower: &CyclotomicField, set: &[ResidueClass]) -> Result<()> {
    if set.is_empty() {
        return Err(Error::NotASubgroup);
    }
    let rr = tower.residue_ring()?;
    for a in set {
        if !rr.is_unit(a) {
            return Err(Error::NotASubgroup);
        }
        for b in set {
            if !set.contains(&rr.mul(a, b)?) {
                return Err(Error::NotASubgroup);
            }
        }
    }
    Ok(())
}

fn fixed_by(tower: &CyclotomicField, subgroup: &[ResidueClass], x: &CycElem) -> bool {
    subgroup.iter().all(|b| {
        let g = GroupElement {
            b: b.clone(),
            relative: false,
        };
        tower.galois_apply(&g, x) == *x
    })
}

/// The exact P^k with mu(field) = Lambda_{P^k}, computed as the fixed
/// exponents of the subgroup.
pub fn torsion_of(tower: &CyclotomicField, spec: &ExtensionSpec, side: Side) -> Result<RtPoly> {
    Ok(subgroup_fixed_torsion(tower, spec.side(side))?.0)
}

fn subgroup_fixed_torsion(
    tower: &CyclotomicField,
    subgroup: &[ResidueClass],
) -> Result<(RtPoly, usize)> {
    let level = tower.level().ok_or(Error::LevelMismatch)?;
    let rr = tower.residue_ring()?;
    let fixed: Vec<ResidueClass> = rr
        .all_residues()
        .into_iter()
        .filter(|d| {
            subgroup
                .iter()
                .all(|b| rr.mul(b, d).map(|p| p == *d).unwrap_or(false))
        })
        .collect();
    let q = tower.fq().q();
    let d = level.p_poly.degree().unwrap();
    let mut k = 0usize;
    while q.pow((k * d) as u32) < fixed.len() as u128 {
        k += 1;
    }
    if q.pow((k * d) as u32) != fixed.len() as u128 {
        return Err(Error::Invalid(
            "fixed exponent set is not a full torsion level".into(),
        ));
    }
    Ok((tower.ring().pow(&level.p_poly, k), k))
}

/// Purity verdict with the violating irreducible, when any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurityVerdict {
    pub pure: bool,
    pub witness: Option<RtPoly>,
    pub scanned_degree_bound: usize,
}

/// Default scan bound for the irreducible-level search.
pub fn default_purity_bound(tower: &CyclotomicField) -> usize {
    let level = tower.level().expect("tower");
    2 * level.n * level.p_poly.degree().unwrap_or(1)
}

/// Scans monic irreducibles m up to the bound: the extension is pure when
/// every m with lambda_m in L already has lambda_m in K. Inside a tower,
/// lambda_m in L is equivalent to m dividing the torsion level of L.
pub fn is_pure(
    tower: &CyclotomicField,
    spec: &ExtensionSpec,
    bound: usize,
) -> Result<PurityVerdict> {
    let (top_tors, _) = subgroup_fixed_torsion(tower, &spec.top)?;
    let (bot_tors, _) = subgroup_fixed_torsion(tower, &spec.bottom)?;
    let ring = tower.ring();
    for m in factor::monic_irreducibles_up_to(ring, bound)? {
        let in_l = ring.rem(&top_tors, &m)?.is_zero();
        if in_l {
            let in_k = ring.rem(&bot_tors, &m)?.is_zero();
            if !in_k {
                return Ok(PurityVerdict {
                    pure: false,
                    witness: Some(m),
                    scanned_degree_bound: bound,
                });
            }
        }
    }
    Ok(PurityVerdict {
        pure: true,
        witness: None,
        scanned_degree_bound: bound,
    })
}

/// Certificate for the cyclotomic-coradical decision.
#[derive(Debug, Clone)]
pub struct CoradicalCertificate {
    pub radical: bool,
    pub separable: bool,
    pub purity: PurityVerdict,
    pub verdict: bool,
    pub failed_clause: Option<&'static str>,
}

/// Radical (generator witnesses generate L over K), separable (structural for
/// Carlitz radicals: the linear coefficient of C_a(U) is a != 0), and pure.
pub fn is_cyclotomic_coradical(
    tower: &CyclotomicField,
    spec: &ExtensionSpec,
    bound: usize,
) -> Result<CoradicalCertificate> {
    let radical = if spec.degree() == 1 {
        // trivial extension is radical with X empty
        true
    } else if spec.generators.is_empty() {
        false
    } else {
        // the subgroup of bottom fixing every generator must be exactly top
        let stab: Vec<ResidueClass> = spec
            .bottom
            .iter()
            .filter(|b| {
                spec.generators.iter().all(|(alpha, _)| {
                    let g = GroupElement {
                        b: (*b).clone(),
                        relative: false,
                    };
                    tower.galois_apply(&g, alpha) == *alpha
                })
            })
            .cloned()
            .collect();
        stab.len() == spec.top.len() && spec.top.iter().all(|t| stab.contains(t))
    };
    // separability is structural: recorded, not recomputed
    let separable = spec.generators.iter().all(|(_, a)| !a.is_zero());
    let purity = is_pure(tower, spec, bound)?;
    let verdict = radical && separable && purity.pure;
    let failed_clause = if !radical {
        Some("radical")
    } else if !separable {
        Some("separable")
    } else if !purity.pure {
        Some("pure")
    } else {
        None
    };
    Ok(CoradicalCertificate {
        radical,
        separable,
        purity,
        verdict,
        failed_clause,
    })
}

/// Tests whether [L : K] is a power of p; returns the exponent when it is.
pub fn degree_is_p_power(tower: &CyclotomicField, spec: &ExtensionSpec) -> (bool, u32) {
    let p = tower.fq().p() as u128;
    let mut deg = spec.degree();
    let mut s = 0;
    while deg.is_multiple_of(p) {
        deg /= p;
        s += 1;
    }
    (deg == 1, s)
}

/// Per-generator data for the Galois criterion.
#[derive(Debug, Clone)]
pub struct GaloisCriterionReport {
    pub generators: Vec<GeneratorOrder>,
    pub galois: bool,
}

#[derive(Debug, Clone)]
pub struct GeneratorOrder {
    pub order: RtPoly,
    pub lambda_in_top: bool,
}

/// L/K is Galois iff for each generator of order a, lambda_a lies in L.
/// The order is the minimal monic generator of {b : C_b(alpha) in K},
/// a power of P inside the tower.
pub fn galois_criterion(
    tower: &CyclotomicField,
    spec: &ExtensionSpec,
) -> Result<GaloisCriterionReport> {
    let level = tower.level().ok_or(Error::LevelMismatch)?;
    let (_, k_top) = subgroup_fixed_torsion(tower, &spec.top)?;
    let mut gens = Vec::new();
    let mut galois = true;
    for (alpha, _) in &spec.generators {
        let mut order = None;
        for e in 0..=level.n {
            let pe = tower.ring().pow(&level.p_poly, e);
            let image = carlitz_act(tower.ring(), tower, &pe, alpha);
            if fixed_by(tower, &spec.bottom, &image) {
                order = Some((pe, e));
                break;
            }
        }
        let (order, e) = order.ok_or(Error::Invalid(
            "generator is not radical over the base".into(),
        ))?;
        let lambda_in_top = e <= k_top;
        galois &= lambda_in_top;
        gens.push(GeneratorOrder {
            order,
            lambda_in_top,
        });
    }
    Ok(GaloisCriterionReport {
        generators: gens,
        galois,
    })
}

/// Certificate produced by the explicit primitive-element construction.
#[derive(Debug, Clone)]
pub struct PrimitiveCertificate {
    pub s1: RtPoly,
    pub s2: RtPoly,
    pub alpha_reconstructed: bool,
    pub beta_reconstructed: bool,
    pub mn_image_in_base: bool,
}

/// For C_m(alpha), C_n(beta) in k with gcd(m, n) = 1, gamma = alpha + beta is
/// primitive; the certificate reconstructs alpha and beta from gamma through
/// the Bezout identity 1 = m s1 + n s2 and checks C_(mn)(gamma) in k.
pub fn primitive_element(
    ambient: &CyclotomicField,
    alpha: &CycElem,
    beta: &CycElem,
    m: &RtPoly,
    n: &RtPoly,
) -> Result<(CycElem, PrimitiveCertificate)> {
    let ring = ambient.ring();
    let (g, s1, s2) = ring.xgcd(m, n)?;
    if g != ring.one() {
        return Err(Error::NotCoprime(
            ring.format_rt(m, "T"),
            ring.format_rt(n, "T"),
        ));
    }
    let xi1 = carlitz_act(ring, ambient, m, alpha);
    let xi2 = carlitz_act(ring, ambient, n, beta);
    if !ambient.is_in_k(&xi1) || !ambient.is_in_k(&xi2) {
        return Err(Error::Invalid(
            "C_m(alpha) and C_n(beta) must lie in the base field".into(),
        ));
    }
    let gamma = ambient.add(alpha, beta);
    // alpha = C_s1(xi1) + C_s2(C_n(gamma) - xi2)
    let cn_gamma = carlitz_act(ring, ambient, n, &gamma);
    let rec_alpha = ambient.add(
        &carlitz_act(ring, ambient, &s1, &xi1),
        &carlitz_act(ring, ambient, &s2, &ambient.sub(&cn_gamma, &xi2)),
    );
    // beta = C_s1(C_m(gamma) - xi1) + C_s2(xi2)
    let cm_gamma = carlitz_act(ring, ambient, m, &gamma);
    let rec_beta = ambient.add(
        &carlitz_act(ring, ambient, &s1, &ambient.sub(&cm_gamma, &xi1)),
        &carlitz_act(ring, ambient, &s2, &xi2),
    );
    let mn_image = carlitz_act(ring, ambient, &ring.mul(m, n), &gamma);
    let cert = PrimitiveCertificate {
        s1,
        s2,
        alpha_reconstructed: rec_alpha == *alpha,
        beta_reconstructed: rec_beta == *beta,
        mn_image_in_base: ambient.is_in_k(&mn_image),
    };
    Ok((gamma, cert))
}

/// Report of the Drinfeld-Kummer verification for C_a(U) - z over k(Lambda_a).
#[derive(Debug, Clone)]
pub struct KummerReport {
    pub degree: usize,
    pub p_power_exponent: Option<u32>,
    pub roots_checked: usize,
    pub theta_in_torsion: bool,
    pub theta_injective: bool,
    pub theta_homomorphism: bool,
    pub degenerate: bool,
}

/// Verifies, inside the ambient tower: the root set {alpha + lambda} of
/// C_a(U) - z, the orbit degree [K(alpha) : K] over K = k(Lambda_a) (a
/// p-power), and the monomorphism Theta(sigma) = sigma(alpha) - alpha into
/// Lambda_a.
pub fn kummer_verify(
    tower: &CyclotomicField,
    a: &RtPoly,
    alpha: &CycElem,
) -> Result<KummerReport> {
    let level = tower.level().ok_or(Error::LevelMismatch)?;
    let ring = tower.ring().clone();
    let pn = ring.pow(&level.p_poly, level.n);
    let (cofactor, rem) = ring.divmod(&pn, a)?;
    if !rem.is_zero() || !ring.is_monic(a) {
        return Err(Error::Invalid(
            "a must be a monic divisor of P^n so Lambda_a lies in the ambient".into(),
        ));
    }
    // the subgroup fixing k(Lambda_a): units = 1 mod a
    let rr = tower.residue_ring()?.clone();
    let h_a: Vec<ResidueClass> = tower
        .absolute_units()?
        .into_iter()
        .filter(|b| {
            ring.rem(&ring.sub(b.rep(), &ring.one()), a)
                .map(|r| r.is_zero())
                .unwrap_or(false)
        })
        .collect();
    let z = carlitz_act(&ring, tower, a, alpha);
    if !fixed_by(tower, &h_a, &z) {
        return Err(Error::Invalid("z = C_a(alpha) is not in k(Lambda_a)".into()));
    }
    // Lambda_a inside the ambient: exponents divisible by P^n / a
    let lambda_a_points: Vec<CycElem> = rr
        .all_residues()
        .iter()
        .enumerate()
        .filter(|(_, d)| {
            ring.rem(d.rep(), &cofactor)
                .map(|r| r.is_zero())
                .unwrap_or(false)
        })
        .map(|(i, _)| tower.torsion_point_of_residue_index(i).clone())
        .collect();
    // root set W = { alpha + lambda }
    let mut roots_checked = 0;
    for lam in &lambda_a_points {
        let w = tower.add(alpha, lam);
        let value = tower.sub(&carlitz_act(&ring, tower, a, &w), &z);
        if !value.is_zero() {
            return Err(Error::Invalid("root-set check failed".into()));
        }
        roots_checked += 1;
    }
    // orbit of alpha over k(Lambda_a), and Theta
    let mut orbit: Vec<CycElem> = Vec::new();
    let mut theta: Vec<CycElem> = Vec::new();
    let mut theta_in_torsion = true;
    for b in &h_a {
        let g = GroupElement {
            b: b.clone(),
            relative: false,
        };
        let image = tower.galois_apply(&g, alpha);
        let diff = tower.sub(&image, alpha);
        if !lambda_a_points.contains(&diff) {
            theta_in_torsion = false;
        }
        if !orbit.contains(&image) {
            orbit.push(image);
        }
        if !theta.contains(&diff) {
            theta.push(diff);
        }
    }
    let degree = orbit.len();
    let theta_injective = theta.len() == degree;
    // homomorphism: Theta(st) = Theta(s) + Theta(t)
    let mut theta_homomorphism = true;
    for b1 in &h_a {
        for b2 in &h_a {
            let g1 = GroupElement {
                b: b1.clone(),
                relative: false,
            };
            let g2 = GroupElement {
                b: b2.clone(),
                relative: false,
            };
            let prod = GroupElement {
                b: rr.mul(b1, b2)?,
                relative: false,
            };
            let lhs = tower.sub(&tower.galois_apply(&prod, alpha), alpha);
            let rhs = tower.add(
                &tower.sub(&tower.galois_apply(&g1, alpha), alpha),
                &tower.sub(&tower.galois_apply(&g2, alpha), alpha),
            );
            if lhs != rhs {
                theta_homomorphism = false;
            }
        }
    }
    // p-power degree
    let p = tower.fq().p() as usize;
    let mut d = degree;
    let mut s = 0u32;
    while d.is_multiple_of(p) {
        d /= p;
        s += 1;
    }
    let p_power_exponent = if d == 1 { Some(s) } else { None };
    Ok(KummerReport {
        degree,
        p_power_exponent,
        roots_checked,
        theta_in_torsion,
        theta_injective,
        theta_homomorphism,
        degenerate: degree == 1,
    })
}
