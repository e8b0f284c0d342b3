//! Irreducibility testing, desk-scale factorization and the Euler function
//! for R_T = F_q[T].
//!
//! Factorization runs squarefree decomposition, then distinct-degree, then
//! equal-degree splitting. The splitting randomness is seeded deterministically
//! so repeated runs produce identical output.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::{cmp_graded, PolyRing, RtPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default cap on factorization input degree.
pub const FACTOR_DEGREE_CAP: usize = 12;

const EDF_SEED: u64 = 0x0c0_9a1_015;

/// Rabin irreducibility test. Errors on constant input.
pub fn is_irreducible(ring: &PolyRing<Fq>, f: &RtPoly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let q = ring.base().q();
    let x = ring.gen();
    let frob = |g: &RtPoly| ring.pow_mod(g, q, f);
    let mut xq = x.clone();
    for _ in 0..n {
        xq = frob(&xq)?;
    }
    if xq != ring.rem(&x, f)? {
        return Ok(false);
    }
    for l in prime_divisors(n) {
        let mut g = x.clone();
        for _ in 0..n / l {
            g = frob(&g)?;
        }
        let diff = ring.sub(&g, &x);
        if diff.is_zero() {
            return Ok(false);
        }
        let gcd = ring.gcd(&diff, f)?;
        if gcd != ring.one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut l = 2;
    while l * l <= n {
        if n.is_multiple_of(l) {
            out.push(l);
            while n.is_multiple_of(l) {
                n /= l;
            }
        }
        l += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A desk-scale factorization: `lead * prod f_i^(e_i)` with monic irreducible f_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub lead: crate::field::FqElem,
    pub factors: Vec<(RtPoly, usize)>,
}

pub fn factor(ring: &PolyRing<Fq>, f: &RtPoly) -> Result<Factorization> {
    factor_with_cap(ring, f, FACTOR_DEGREE_CAP)
}

pub fn factor_with_cap(ring: &PolyRing<Fq>, f: &RtPoly, cap: usize) -> Result<Factorization> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > cap {
        return Err(Error::DeskScaleExceeded {
            what: "factorization degree",
            limit: cap as u128,
            actual: deg as u128,
        });
    }
    let lead = f.leading().unwrap().clone();
    let monic = ring.make_monic(f)?;
    let mut factors: Vec<(RtPoly, usize)> = Vec::new();
    for (g, mult) in squarefree_parts(ring, &monic)? {
        for (h, d) in distinct_degree(ring, &g)? {
            for irr in equal_degree(ring, &h, d)? {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|a, b| cmp_graded(&a.0, &b.0));
    // merge repeats (can arise when multiplicities coincide across parts)
    let mut merged: Vec<(RtPoly, usize)> = Vec::new();
    for (p, e) in factors {
        match merged.last_mut() {
            Some((lp, le)) if *lp == p => *le += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization {
        lead,
        factors: merged,
    })
}

/// Squarefree decomposition in characteristic p: returns (g_i, i) with
/// f = prod g_i^i, each g_i squarefree (or 1, omitted).
fn squarefree_parts(ring: &PolyRing<Fq>, f: &RtPoly) -> Result<Vec<(RtPoly, usize)>> {
    let mut out = Vec::new();
    squarefree_rec(ring, f, 1, &mut out)?;
    Ok(out)
}

fn squarefree_rec(
    ring: &PolyRing<Fq>,
    f: &RtPoly,
    stride: usize,
    out: &mut Vec<(RtPoly, usize)>,
) -> Result<()> {
    if f.degree() == Some(0) {
        return Ok(());
    }
    let df = ring.derivative(f);
    if df.is_zero() {
        // f = g(T^p); take p-th roots of the coefficients
        let root = pth_root(ring, f);
        return squarefree_rec(ring, &root, stride * ring.base().p() as usize, out);
    }
    let mut c = ring.gcd(f, &df)?;
    let mut w = ring.divmod(f, &c)?.0;
    let mut i = 1usize;
    while w.degree() != Some(0) {
        let y = ring.gcd(&w, &c)?;
        let part = ring.divmod(&w, &y)?.0;
        if part.degree() != Some(0) {
            out.push((part, i * stride));
        }
        w = y.clone();
        c = ring.divmod(&c, &y)?.0;
        i += 1;
    }
    if c.degree() != Some(0) {
        // remaining part is a p-th power
        let root = pth_root(ring, &c);
        squarefree_rec(ring, &root, stride * ring.base().p() as usize, out)?;
    }
    Ok(())
}

/// For f with f' = 0, f(T) = g(T)^p; returns g.
fn pth_root(ring: &PolyRing<Fq>, f: &RtPoly) -> RtPoly {
    let p = ring.base().p() as usize;
    let q = ring.base().q();
    // coefficient roots: a^(q/p) since a^q = a in F_q
    let root_exp = q / ring.base().p() as u128;
    let mut coeffs = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            coeffs.push(ring.base().pow(c, root_exp));
        }
    }
    ring.from_coeffs(coeffs)
}

/// Distinct-degree: (product of irreducible factors of degree d, d).
fn distinct_degree(ring: &PolyRing<Fq>, f: &RtPoly) -> Result<Vec<(RtPoly, usize)>> {
    let q = ring.base().q();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = ring.rem(&ring.gen(), &rest)?;
    let mut d = 0usize;
    while rest.degree().is_some_and(|deg| deg >= 1) {
        d += 1;
        if rest.degree() == Some(d) {
            out.push((rest.clone(), d));
            break;
        }
        h = ring.pow_mod(&h, q, &rest)?;
        let g = ring.gcd(&ring.sub(&h, &ring.gen()), &rest)?;
        if g != ring.one() {
            out.push((g.clone(), d));
            rest = ring.divmod(&rest, &g)?.0;
            h = ring.rem(&h, &rest)?;
        }
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting of a product of degree-d
/// irreducibles, deterministic seeding.
fn equal_degree(ring: &PolyRing<Fq>, f: &RtPoly, d: usize) -> Result<Vec<RtPoly>> {
    let deg = f.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg == d {
        return Ok(vec![f.clone()]);
    }
    let q = ring.base().q();
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    let mut stack = vec![f.clone()];
    let mut done = Vec::new();
    while let Some(g) = stack.pop() {
        let gd = g.degree().unwrap();
        if gd == d {
            done.push(g);
            continue;
        }
        loop {
            let r = random_poly(ring, &mut rng, gd - 1);
            if r.is_zero() {
                continue;
            }
            let split = if q % 2 == 1 {
                // r^((q^d - 1)/2) mod g is +-1 on each factor
                let e = (q.pow(d as u32) - 1) / 2;
                let s = ring.pow_mod(&r, e, &g)?;
                ring.gcd(&ring.sub(&s, &ring.one()), &g)?
            } else {
                // characteristic 2: trace map r + r^2 + ... + r^(2^(d*m - 1))
                let mut tr = r.clone();
                let mut term = r.clone();
                let steps = d as u32 * (q.trailing_zeros());
                for _ in 1..steps {
                    term = ring.pow_mod(&term, 2, &g)?;
                    tr = ring.rem(&ring.add(&tr, &term), &g)?;
                }
                ring.gcd(&tr, &g)?
            };
            let sd = split.degree().unwrap_or(0);
            if sd > 0 && sd < gd {
                let other = ring.divmod(&g, &split)?.0;
                stack.push(split);
                stack.push(other);
                break;
            }
        }
    }
    Ok(done)
}

fn random_poly(ring: &PolyRing<Fq>, rng: &mut ChaCha8Rng, max_deg: usize) -> RtPoly {
    let deg = rng.gen_range(0..=max_deg);
    ring.from_coeffs((0..=deg).map(|_| ring.base().random(rng)).collect())
}

/// Euler function: number of units of R_T/(M).
pub fn euler_phi(ring: &PolyRing<Fq>, m: &RtPoly) -> Result<u128> {
    let deg = m.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(1);
    }
    let q = ring.base().q();
    let fac = factor(ring, m)?;
    let mut phi: u128 = 1;
    for (p, e) in &fac.factors {
        let d = p.degree().unwrap() as u32;
        let qd = q
            .checked_pow(d)
            .ok_or(Error::Invalid("Euler function overflow".into()))?;
        let layer = qd
            .checked_pow((*e as u32) - 1)
            .and_then(|x| x.checked_mul(qd - 1))
            .ok_or(Error::Invalid("Euler function overflow".into()))?;
        phi = phi
            .checked_mul(layer)
            .ok_or(Error::Invalid("Euler function overflow".into()))?;
    }
    Ok(phi)
}

/// All monic polynomials of the given exact degree, canonical order.
pub fn monic_polys_of_degree(ring: &PolyRing<Fq>, d: usize) -> Vec<RtPoly> {
    let elems = ring.base().all_elements();
    let mut reps: Vec<RtPoly> = vec![ring.monomial(ring.base().one(), d)];
    for i in 0..d {
        let mut next = Vec::with_capacity(reps.len() * elems.len());
        for r in &reps {
            for e in &elems {
                next.push(ring.add(r, &ring.monomial(e.clone(), i)));
            }
        }
        reps = next;
    }
    reps.sort_by(cmp_graded);
    reps.dedup();
    reps
}

/// Monic irreducibles of degree 1..=max_deg, canonical order.
pub fn monic_irreducibles_up_to(ring: &PolyRing<Fq>, max_deg: usize) -> Result<Vec<RtPoly>> {
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for p in monic_polys_of_degree(ring, d) {
            if is_irreducible(ring, &p)? {
                out.push(p);
            }
        }
    }
    Ok(out)
}
