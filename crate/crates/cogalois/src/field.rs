//! Exact arithmetic in the coefficient field F_q, q = p^m.
//!
//! Elements are stored as length-`m` residue vectors over the prime field,
//! always reduced mod `p`. Extension fields (m > 1) require a user-supplied
//! monic irreducible modulus over F_p; no Conway-polynomial table is bundled.

use crate::error::{Error, Result};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

/// Field operations abstracted over the coefficient domain, so polynomial
/// routines work both over F_q and over k = F_q(T).
pub trait FieldOps: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

impl FieldOps for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        Fq::zero(self)
    }
    fn one(&self) -> FqElem {
        Fq::one(self)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        Fq::is_zero(self, a)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::add(self, a, b)
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::sub(self, a, b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        Fq::neg(self, a)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::mul(self, a, b)
    }
    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        Fq::inv(self, a)
    }
}

/// Describes F_q with q = p^m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    /// Prime characteristic.
    pub p: u64,
    /// Extension degree over the prime field.
    pub m: usize,
    /// Monic irreducible modulus of degree `m` over F_p, absent when m = 1.
    /// Coefficients ascending, length m + 1, leading coefficient 1.
    pub modulus: Option<Vec<u64>>,
}

/// An element of F_q: residue vector of length `m`, each entry in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    residues: Vec<u64>,
}

impl FqElem {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

/// The field F_q as a context object; cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fq {
    desc: Arc<FieldDescriptor>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---- F_p[x] helpers used for extension-field arithmetic ----

fn fp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let lead_inv = mod_inv(p, *m.last().expect("nonzero modulus"));
    while fp_trim(r.clone()).len() >= m.len() {
        r = fp_trim(r);
        if r.len() < m.len() {
            break;
        }
        let c = (r[r.len() - 1] * lead_inv) % p;
        let shift = r.len() - m.len();
        for (i, &y) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (c * y) % p) % p;
        }
    }
    fp_trim(r)
}

fn fp_xgcd(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    // returns (gcd, s) with s*a = gcd mod b
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    while !fp_trim(r1.clone()).is_empty() {
        r1 = fp_trim(r1);
        // division step
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let lead_inv = mod_inv(p, *r1.last().unwrap());
        let mut rem = fp_trim(r0.clone());
        while rem.len() >= r1.len() && !rem.is_empty() {
            let c = (rem[rem.len() - 1] * lead_inv) % p;
            let shift = rem.len() - r1.len();
            q[shift] = c;
            for (i, &y) in r1.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + p - (c * y) % p) % p;
            }
            rem = fp_trim(rem);
        }
        let qs1 = fp_mul(p, &fp_trim(q), &s1);
        let news = fp_sub(p, &s0, &qs1);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = news;
    }
    (fp_trim(r0), fp_trim(s0))
}

fn fp_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(out)
}

fn mod_inv(p: u64, a: u64) -> u64 {
    // Fermat; p prime and a != 0 mod p.
    mod_pow(p, a % p, p - 2)
}

fn mod_pow(p: u64, mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Irreducibility over F_p by the Rabin test, used to validate extension moduli.
fn fp_is_irreducible(p: u64, f: &[u64]) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^k) mod f, iteratively
    let frob = |g: &[u64]| -> Vec<u64> {
        // g^p mod f
        let mut r = vec![1u64];
        let mut base = g.to_vec();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                r = fp_rem(p, &fp_mul(p, &r, &base), f);
            }
            base = fp_rem(p, &fp_mul(p, &base, &base), f);
            e >>= 1;
        }
        r
    };
    let mut xq = x.clone();
    for _ in 0..n {
        xq = frob(&xq);
    }
    if fp_trim(fp_sub(p, &xq, &x)) != Vec::<u64>::new() {
        return false;
    }
    // for each prime divisor l of n, gcd(x^(p^(n/l)) - x, f) must be 1
    let mut divisors = Vec::new();
    let mut n_rem = n;
    let mut l = 2;
    while l * l <= n_rem {
        if n_rem.is_multiple_of(l) {
            divisors.push(l);
            while n_rem.is_multiple_of(l) {
                n_rem /= l;
            }
        }
        l += 1;
    }
    if n_rem > 1 {
        divisors.push(n_rem);
    }
    for l in divisors {
        let mut g = x.clone();
        for _ in 0..n / l {
            g = frob(&g);
        }
        let diff = fp_sub(p, &g, &x);
        let (gcd, _) = fp_xgcd(p, &diff, f);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

impl Fq {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(Fq {
            desc: Arc::new(FieldDescriptor {
                p,
                m: 1,
                modulus: None,
            }),
        })
    }

    /// F_{p^m} defined by a monic irreducible modulus over F_p
    /// (coefficients ascending, degree m >= 2).
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let modulus = fp_trim(modulus);
        let m = modulus.len().saturating_sub(1);
        if m < 2 {
            return Err(Error::Invalid(
                "extension modulus must have degree >= 2".into(),
            ));
        }
        if modulus.last() != Some(&1) {
            return Err(Error::NotMonic("extension modulus".into()));
        }
        if !fp_is_irreducible(p, &modulus) {
            return Err(Error::NotIrreducible("extension modulus".into()));
        }
        Ok(Fq {
            desc: Arc::new(FieldDescriptor {
                p,
                m,
                modulus: Some(modulus),
            }),
        })
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn p(&self) -> u64 {
        self.desc.p
    }

    pub fn m(&self) -> usize {
        self.desc.m
    }

    /// q = p^m.
    pub fn q(&self) -> u128 {
        (self.desc.p as u128).pow(self.desc.m as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            residues: vec![0; self.desc.m],
        }
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    /// Embeds a prime-field residue.
    pub fn from_u64(&self, c: u64) -> FqElem {
        let mut residues = vec![0; self.desc.m];
        residues[0] = c % self.desc.p;
        FqElem { residues }
    }

    /// Builds an element from residues (ascending powers of the generator);
    /// entries are reduced mod p, missing entries are zero.
    pub fn from_residues(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.desc.m {
            return Err(Error::FieldMismatch);
        }
        let mut residues = vec![0; self.desc.m];
        for (i, &c) in coeffs.iter().enumerate() {
            residues[i] = c % self.desc.p;
        }
        Ok(FqElem { residues })
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.residues.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.desc.p;
        FqElem {
            residues: a
                .residues
                .iter()
                .zip(&b.residues)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.desc.p;
        FqElem {
            residues: a.residues.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.desc.p;
        if self.desc.m == 1 {
            return FqElem {
                residues: vec![a.residues[0] * b.residues[0] % p],
            };
        }
        let prod = fp_mul(p, &a.residues, &b.residues);
        let modulus = self.desc.modulus.as_ref().expect("extension modulus");
        let red = fp_rem(p, &prod, modulus);
        let mut residues = vec![0; self.desc.m];
        residues[..red.len()].copy_from_slice(&red);
        FqElem { residues }
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::InversionOfZero);
        }
        let p = self.desc.p;
        if self.desc.m == 1 {
            return Ok(FqElem {
                residues: vec![mod_inv(p, a.residues[0])],
            });
        }
        let modulus = self.desc.modulus.as_ref().expect("extension modulus");
        let (g, s) = fp_xgcd(p, &fp_trim(a.residues.clone()), modulus);
        debug_assert_eq!(g.len(), 1);
        let ginv = mod_inv(p, g[0]);
        let s: Vec<u64> = s.iter().map(|&c| c * ginv % p).collect();
        let red = fp_rem(p, &s, modulus);
        let mut residues = vec![0; self.desc.m];
        residues[..red.len()].copy_from_slice(&red);
        Ok(FqElem { residues })
    }

    pub fn pow(&self, a: &FqElem, mut e: u128) -> FqElem {
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    /// All q elements in canonical (residue-lexicographic, constant first) order.
    pub fn all_elements(&self) -> Vec<FqElem> {
        let mut out = Vec::with_capacity(self.q() as usize);
        let mut cur = vec![0u64; self.desc.m];
        loop {
            out.push(FqElem {
                residues: cur.clone(),
            });
            // increment with most-significant digit last so the order is
            // lexicographic on the residue vector read from the constant up
            let mut i = self.desc.m;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.desc.p {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> FqElem {
        FqElem {
            residues: (0..self.desc.m)
                .map(|_| rng.gen_range(0..self.desc.p))
                .collect(),
        }
    }

    pub fn format_elem(&self, a: &FqElem) -> String {
        if self.desc.m == 1 {
            a.residues[0].to_string()
        } else {
            let inner: Vec<String> = a.residues.iter().map(|c| c.to_string()).collect();
            format!("({})", inner.join(","))
        }
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            write!(f, "{}", self.residues[0])
        } else {
            let inner: Vec<String> = self.residues.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", inner.join(","))
        }
    }
}
