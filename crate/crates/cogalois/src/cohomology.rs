//! Crossed homomorphisms Z^1(G, Lambda_{P^n}), coboundaries, the isomorphism
//! with the Drinfeld cogalois module, and size bounds.
//!
//! All enumeration happens in the exponent model: cocycle values are residues
//! D mod P^n and the Galois action is multiplication by the unit B. The
//! relation checked everywhere is D_{st} = D_s + B_s * D_t.

use crate::carlitz::Level;
use crate::error::{Error, Result};
use crate::par;
use crate::poly::RtPoly;
use crate::residue::{ResidueClass, ResidueRing};
use crate::tower::{CycElem, CyclotomicField, GroupElement};
use std::collections::HashMap;

/// Brute-force candidate cap: (q^(n d))^(|G| - 1) scans at most this many.
pub const BRUTEFORCE_CAP: u128 = 10_000_000;
/// Generator-relation enumeration cap on the group order.
pub const GROUP_ORDER_CAP: usize = 81;

/// A crossed homomorphism in exponent form: D_sigma over the relative group
/// in canonical order, with D_1 = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub level: Level,
    pub values: Vec<ResidueClass>,
}

/// Z^1/B^1/H^1 sizes plus the full cocycle list (deterministic order) and,
/// optionally, a preimage witness in L for every cocycle.
#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub z1_size: usize,
    pub b1_size: usize,
    pub h1_size: usize,
    pub cocycles: Vec<Cocycle>,
    pub witness_preimages: Option<Vec<CycElem>>,
}

/// Outcome of the size bound |Drincog| <= q^(m deg P^n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeBound {
    pub drincog_size: usize,
    pub bound: u128,
    pub rank: usize,
    pub holds: bool,
}

/// A finite abelian group of unit residues acting on a residue module by
/// multiplication, precomputed as index tables. Instantiated from a tower's
/// relative group, and directly for subgroup/quotient systems.
#[derive(Debug, Clone)]
pub struct ActionSystem {
    pub group: Vec<ResidueClass>,
    pub gmul: Vec<Vec<usize>>,
    pub identity: usize,
    pub module: Vec<ResidueClass>,
    pub madd: Vec<Vec<usize>>,
    /// act[g][m] = index of B_g * D_m in the module.
    pub act: Vec<Vec<usize>>,
    pub zero: usize,
}

impl ActionSystem {
    /// `group`: unit residues (mod some A); `module_ring`: R_T/(B) with the
    /// action B_g * D computed mod B. Requires the action to be well defined
    /// on representatives, which holds whenever B divides A.
    pub fn new(
        group_ring: &ResidueRing,
        group: Vec<ResidueClass>,
        module_ring: &ResidueRing,
    ) -> Result<Self> {
        let module = module_ring.all_residues();
        let mut gindex = HashMap::new();
        for (i, g) in group.iter().enumerate() {
            gindex.insert(g.clone(), i);
        }
        let mut mindex = HashMap::new();
        for (i, m) in module.iter().enumerate() {
            mindex.insert(m.clone(), i);
        }
        let mut gmul = Vec::with_capacity(group.len());
        for a in &group {
            let mut row = Vec::with_capacity(group.len());
            for b in &group {
                let prod = group_ring.mul(a, b)?;
                row.push(*gindex.get(&prod).ok_or(Error::NotASubgroup)?);
            }
            gmul.push(row);
        }
        let identity = *gindex
            .get(&group_ring.one())
            .ok_or(Error::MissingGroupElement)?;
        let mut madd = Vec::with_capacity(module.len());
        for a in &module {
            let mut row = Vec::with_capacity(module.len());
            for b in &module {
                let sum = module_ring.add(a, b)?;
                row.push(mindex[&sum]);
            }
            madd.push(row);
        }
        let mut act = Vec::with_capacity(group.len());
        for g in &group {
            let mut row = Vec::with_capacity(module.len());
            for m in &module {
                let image = module_ring.reduce(&module_ring.poly_ring().mul(g.rep(), m.rep()));
                row.push(mindex[&image]);
            }
            act.push(row);
        }
        let zero = mindex[&module_ring.zero()];
        Ok(ActionSystem {
            group,
            gmul,
            identity,
            module,
            madd,
            act,
            zero,
        })
    }

    /// The cocycle relation on an index vector: f(st) = f(s) + s. f(t) for
    /// every ordered pair, and f(1) = 0.
    pub fn is_cocycle_indices(&self, f: &[usize]) -> bool {
        if f.len() != self.group.len() || f[self.identity] != self.zero {
            return false;
        }
        for s in 0..self.group.len() {
            for t in 0..self.group.len() {
                if self.madd[f[s]][self.act[s][f[t]]] != f[self.gmul[s][t]] {
                    return false;
                }
            }
        }
        true
    }

    /// Exhaustive scan over all exponent vectors; the independent oracle for
    /// the generator-relation method. Parallel over the candidate range with
    /// an index-ordered merge.
    pub fn cocycles_bruteforce(&self, cap: u128) -> Result<Vec<Vec<usize>>> {
        let total = self.bruteforce_total(cap)?;
        Ok(self.scan_range(total, par::Strategy::Auto))
    }

    /// Sequential variant used as the benchmark baseline.
    pub fn cocycles_bruteforce_seq(&self, cap: u128) -> Result<Vec<Vec<usize>>> {
        let total = self.bruteforce_total(cap)?;
        Ok(self.scan_range(total, par::Strategy::Sequential))
    }

    fn bruteforce_total(&self, cap: u128) -> Result<usize> {
        let free = self.group.len() - 1;
        let msize = self.module.len() as u128;
        let total = msize.checked_pow(free as u32).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::DeskScaleExceeded {
                what: "brute-force cocycle scan",
                limit: cap,
                actual: total,
            });
        }
        Ok(total as usize)
    }

    fn scan_range(&self, total: usize, strategy: par::Strategy) -> Vec<Vec<usize>> {
        let msize = self.module.len();
        // chunked scan with one scratch assignment per chunk; survivors carry
        // their flat index so the merge order is canonical
        let chunk = (total / 256).max(1);
        let chunks = total.div_ceil(chunk);
        let scan_chunk = |c: usize| -> Option<Vec<(usize, Vec<usize>)>> {
            let mut found = Vec::new();
            let mut full = vec![0usize; self.group.len()];
            for flat in (c * chunk)..((c + 1) * chunk).min(total) {
                let mut rest = flat;
                full[self.identity] = self.zero;
                for (i, slot) in full.iter_mut().enumerate() {
                    if i != self.identity {
                        *slot = rest % msize;
                        rest /= msize;
                    }
                }
                if self.is_cocycle_indices(&full) {
                    found.push((flat, full.clone()));
                }
            }
            if found.is_empty() {
                None
            } else {
                Some(found)
            }
        };
        let mut out: Vec<(usize, Vec<usize>)> = par::filter_map_indexed_with(chunks, strategy, scan_chunk)
            .into_iter()
            .flat_map(|(_, v)| v)
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, f)| f).collect()
    }

    /// Greedy minimal generating set in list order, pruned by closure testing.
    pub fn find_generators(&self, candidates: &[usize]) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut closed = self.closure(&gens);
        for &c in candidates {
            if closed.contains(&c) {
                continue;
            }
            gens.push(c);
            closed = self.closure(&gens);
            if closed.len() == self.group.len() {
                break;
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.group.len()];
        seen[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.gmul[g][x];
                if !seen[y] {
                    seen[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.group.len()).filter(|&i| seen[i]).collect()
    }

    fn order_of(&self, g: usize) -> usize {
        let mut o = 1;
        let mut x = g;
        while x != self.identity {
            x = self.gmul[x][g];
            o += 1;
        }
        o
    }

    /// Generator-relation enumeration: candidate exponents on each generator
    /// are filtered by the order relation (1 + B + ... + B^(ord-1)) D = 0 and
    /// by pairwise compatibility (1 - B_h) D_g = (1 - B_g) D_h, then extended
    /// multiplicatively over the group and verified in full.
    pub fn cocycles_from_generators(&self, gens: &[usize]) -> Result<Vec<Vec<usize>>> {
        if self.group.len() > GROUP_ORDER_CAP {
            return Err(Error::DeskScaleExceeded {
                what: "generator-relation enumeration",
                limit: GROUP_ORDER_CAP as u128,
                actual: self.group.len() as u128,
            });
        }
        if self.group.len() == 1 {
            return Ok(vec![vec![self.zero]]);
        }
        // per-generator admissible exponents from the order relation
        let mut admissible: Vec<Vec<usize>> = Vec::with_capacity(gens.len());
        for &g in gens {
            let ord = self.order_of(g);
            // norm element 1 + B + ... + B^(ord-1) acting on D
            let mut pow = self.identity;
            let mut norm_of: Vec<usize> = (0..self.module.len()).map(|_| self.zero).collect();
            for _ in 0..ord {
                for (d, slot) in norm_of.iter_mut().enumerate() {
                    *slot = self.madd[*slot][self.act[pow][d]];
                }
                pow = self.gmul[pow][g];
            }
            admissible.push(
                (0..self.module.len())
                    .filter(|&d| norm_of[d] == self.zero)
                    .collect(),
            );
        }
        let total: usize = admissible.iter().map(|a| a.len()).product();
        let results = par::filter_map_indexed_with(total, par::Strategy::Auto, |flat| {
            let mut rest = flat;
            let mut assign = Vec::with_capacity(gens.len());
            for adm in &admissible {
                assign.push(adm[rest % adm.len()]);
                rest /= adm.len();
            }
            self.try_extend(gens, &assign)
        });
        Ok(results.into_iter().map(|(_, f)| f).collect())
    }

    /// Checks pairwise compatibility, extends a generator assignment over the
    /// whole group, and verifies the full cocycle relation.
    fn try_extend(&self, gens: &[usize], assign: &[usize]) -> Option<Vec<usize>> {
        let one_minus = |g: usize, d: usize| -> usize {
            // (1 - B_g) * D = D - B_g D
            let bd = self.act[g][d];
            let neg = self.neg_of(bd);
            self.madd[d][neg]
        };
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                if one_minus(gens[j], assign[i]) != one_minus(gens[i], assign[j]) {
                    return None;
                }
            }
        }
        let mut f: Vec<Option<usize>> = vec![None; self.group.len()];
        f[self.identity] = Some(self.zero);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            let fx = f[x].unwrap();
            for (&g, &dg) in gens.iter().zip(assign) {
                let y = self.gmul[g][x];
                // f(g x) = f(g) + g . f(x)
                let val = self.madd[dg][self.act[g][fx]];
                match f[y] {
                    Some(existing) if existing != val => return None,
                    Some(_) => {}
                    None => {
                        f[y] = Some(val);
                        frontier.push(y);
                    }
                }
            }
        }
        let full: Vec<usize> = f.into_iter().collect::<Option<_>>()?;
        if self.is_cocycle_indices(&full) {
            Some(full)
        } else {
            None
        }
    }

    fn neg_of(&self, d: usize) -> usize {
        // the additive inverse in the module table
        (0..self.module.len())
            .find(|&e| self.madd[d][e] == self.zero)
            .expect("additive group")
    }

    /// Coboundaries f_u(s) = (B_s - 1) u as index vectors, deduplicated,
    /// canonical order.
    pub fn coboundaries_indices(&self) -> Vec<Vec<usize>> {
        let mut set: Vec<Vec<usize>> = Vec::new();
        for u in 0..self.module.len() {
            let f: Vec<usize> = (0..self.group.len())
                .map(|s| {
                    let bu = self.act[s][u];
                    self.madd[bu][self.neg_of(u)]
                })
                .collect();
            if !set.contains(&f) {
                set.push(f);
            }
        }
        set.sort();
        set
    }

    /// Pointwise sum of two cocycles.
    pub fn add_cocycles(&self, f: &[usize], g: &[usize]) -> Vec<usize> {
        f.iter().zip(g).map(|(&a, &b)| self.madd[a][b]).collect()
    }
}

/// Builds the action system of the relative group on Lambda_{P^n} exponents.
pub fn tower_action_system(tower: &CyclotomicField) -> Result<ActionSystem> {
    let rr = tower.residue_ring()?.clone();
    ActionSystem::new(&rr, tower.relative_units().to_vec(), &rr)
}

fn indices_to_cocycle(tower: &CyclotomicField, sys: &ActionSystem, f: &[usize]) -> Cocycle {
    Cocycle {
        level: tower.level().expect("tower").clone(),
        values: f.iter().map(|&i| sys.module[i].clone()).collect(),
    }
}

fn cocycle_to_indices(
    tower: &CyclotomicField,
    sys: &ActionSystem,
    f: &Cocycle,
) -> Result<Vec<usize>> {
    if f.level != *tower.level().ok_or(Error::LevelMismatch)? {
        return Err(Error::LevelMismatch);
    }
    if f.values.len() != sys.group.len() {
        return Err(Error::MissingGroupElement);
    }
    f.values
        .iter()
        .map(|d| {
            sys.module
                .iter()
                .position(|m| m == d)
                .ok_or(Error::LevelMismatch)
        })
        .collect()
}

/// True iff the exponent map satisfies the crossed-homomorphism relation
/// (including the inverse-pair specialization) on every ordered pair.
pub fn is_cocycle(tower: &CyclotomicField, f: &Cocycle) -> Result<bool> {
    let sys = tower_action_system(tower)?;
    let idx = cocycle_to_indices(tower, &sys, f)?;
    Ok(sys.is_cocycle_indices(&idx))
}

fn report_from_indices(
    tower: &CyclotomicField,
    sys: &ActionSystem,
    mut found: Vec<Vec<usize>>,
) -> CohomologyReport {
    found.sort();
    let b1 = sys.coboundaries_indices();
    let z1_size = found.len();
    let b1_size = b1.len();
    debug_assert_eq!(z1_size % b1_size, 0);
    CohomologyReport {
        z1_size,
        b1_size,
        h1_size: z1_size / b1_size,
        cocycles: found
            .iter()
            .map(|f| indices_to_cocycle(tower, sys, f))
            .collect(),
        witness_preimages: None,
    }
}

/// Complete list of Z^1 by the generator-relation method (canonical order).
pub fn enumerate_cocycles(tower: &CyclotomicField) -> Result<CohomologyReport> {
    let sys = tower_action_system(tower)?;
    let gens = tower_generators(tower, &sys)?;
    let found = sys.cocycles_from_generators(&gens)?;
    Ok(report_from_indices(tower, &sys, found))
}

/// Exhaustive-scan oracle for [`enumerate_cocycles`].
pub fn enumerate_cocycles_bruteforce(tower: &CyclotomicField) -> Result<CohomologyReport> {
    let sys = tower_action_system(tower)?;
    let found = sys.cocycles_bruteforce(BRUTEFORCE_CAP)?;
    Ok(report_from_indices(tower, &sys, found))
}

/// Generator candidates 1 + c P^j for c over the monomial basis of R_T/(P)
/// (tensored with an F_p-basis of F_q), pruned greedily by closure testing.
fn tower_generators(tower: &CyclotomicField, sys: &ActionSystem) -> Result<Vec<usize>> {
    let level = tower.level().ok_or(Error::LevelMismatch)?;
    let ring = tower.ring().clone();
    let rr = tower.residue_ring()?.clone();
    let d = level.p_poly.degree().unwrap();
    let fq = tower.fq().clone();
    let mut candidates = Vec::new();
    for j in 1..level.n.max(1) {
        let pj = ring.pow(&level.p_poly, j);
        for e in 0..d {
            for s in 0..fq.m() {
                let mut residues = vec![0u64; fq.m()];
                residues[s] = 1;
                let c = ring.monomial(fq.from_residues(&residues)?, e);
                let b = rr.reduce(&ring.add(&ring.one(), &ring.mul(&c, &pj)));
                if let Some(idx) = sys.group.iter().position(|g| *g == b) {
                    candidates.push(idx);
                }
            }
        }
    }
    Ok(sys.find_generators(&candidates))
}

/// The coboundaries {f_u : u in Lambda_{P^n}} in exponent form.
pub fn coboundaries(tower: &CyclotomicField) -> Result<Vec<Cocycle>> {
    let sys = tower_action_system(tower)?;
    Ok(sys
        .coboundaries_indices()
        .into_iter()
        .map(|f| indices_to_cocycle(tower, &sys, &f))
        .collect())
}

/// phi: alpha -> (sigma -> sigma(alpha) - alpha), in exponent form.
/// Requires alpha in DrinT(L/K), i.e. C_{P^n}(alpha) in K.
pub fn phi_map(tower: &CyclotomicField, alpha: &CycElem) -> Result<Cocycle> {
    let level = tower.level().ok_or(Error::LevelMismatch)?.clone();
    let pn = tower.ring().pow(&level.p_poly, level.n);
    let image = crate::carlitz::carlitz_act(tower.ring(), tower, &pn, alpha);
    if !tower.is_in_first_level(&image) {
        return Err(Error::NotInDrinT);
    }
    let mut values = Vec::new();
    for g in tower.relative_group() {
        let diff = tower.sub(&tower.galois_apply(&g, alpha), alpha);
        let idx = tower
            .torsion_index_of(&diff)
            .ok_or(Error::DifferenceNotTorsion)?;
        values.push(tower.residue_ring()?.all_residues()[idx].clone());
    }
    Ok(Cocycle { level, values })
}

/// phi^(-1): solves sigma(alpha) - alpha = C_{D_sigma}(lambda) for the
/// normalized representative alpha, certifying alpha in DrinT(L/K).
pub fn phi_inverse(tower: &CyclotomicField, f: &Cocycle) -> Result<CycElem> {
    if !is_cocycle(tower, f)? {
        return Err(Error::NotACocycle(
            "input".into(),
            "cocycle relation".into(),
        ));
    }
    let residues = tower.residue_ring()?.all_residues();
    let equations: Vec<(GroupElement, CycElem)> = tower
        .relative_group()
        .into_iter()
        .zip(&f.values)
        .map(|(g, d)| {
            let idx = residues.iter().position(|m| m == d).expect("reduced");
            let pt = tower.torsion_point_of_residue_index(idx).clone();
            (g, pt)
        })
        .collect();
    let alpha = tower.solve_over_subfield(&equations)?;
    // certificate: C_{P^n}(alpha) lies in K
    let level = tower.level().unwrap();
    let pn = tower.ring().pow(&level.p_poly, level.n);
    let image = crate::carlitz::carlitz_act(tower.ring(), tower, &pn, &alpha);
    if !tower.is_in_first_level(&image) {
        return Err(Error::NotInDrinT);
    }
    Ok(alpha)
}

/// |Z^1| against the bound q^(m deg P^n), with m the minimal generator count
/// (the rank) of the relative group.
pub fn size_bound_check(tower: &CyclotomicField, report: &CohomologyReport) -> Result<SizeBound> {
    let sys = tower_action_system(tower)?;
    let rank = group_rank(&sys, tower.fq().p());
    let level = tower.level().ok_or(Error::LevelMismatch)?;
    let deg_mu = level.p_poly.degree().unwrap() * level.n;
    let bound = tower
        .fq()
        .q()
        .checked_pow((rank * deg_mu) as u32)
        .ok_or(Error::Invalid("size bound overflow".into()))?;
    Ok(SizeBound {
        drincog_size: report.z1_size,
        bound,
        rank,
        holds: (report.z1_size as u128) <= bound,
    })
}

/// Rank of the abelian p-group: log_p |G / G^p|.
fn group_rank(sys: &ActionSystem, p: u64) -> usize {
    let mut gp: Vec<usize> = Vec::new();
    for g in 0..sys.group.len() {
        let mut x = sys.identity;
        for _ in 0..p {
            x = sys.gmul[x][g];
        }
        if !gp.contains(&x) {
            gp.push(x);
        }
    }
    let quotient = sys.group.len() / gp.len();
    let mut rank = 0;
    let mut q = quotient;
    while q > 1 {
        assert_eq!(q % p as usize, 0, "relative group must be a p-group");
        q /= p as usize;
        rank += 1;
    }
    rank
}

/// Fills `witness_preimages` by inverting every enumerated cocycle.
pub fn attach_preimages(tower: &CyclotomicField, report: &mut CohomologyReport) -> Result<()> {
    let mut out = Vec::with_capacity(report.cocycles.len());
    for f in &report.cocycles {
        out.push(phi_inverse(tower, f)?);
    }
    report.witness_preimages = Some(out);
    Ok(())
}

/// Formats a cocycle as its exponent vector aligned with the canonical
/// relative group order.
pub fn format_cocycle(tower: &CyclotomicField, f: &Cocycle) -> String {
    let parts: Vec<String> = f
        .values
        .iter()
        .map(|d| tower.ring().format_rt(d.rep(), "T"))
        .collect();
    format!("({})", parts.join(", "))
}

/// The exponent-form annihilator P^e of a cocycle: the order of the class of
/// its preimage in the cogalois module.
pub fn cocycle_order(tower: &CyclotomicField, f: &Cocycle) -> Result<RtPoly> {
    let level = tower.level().ok_or(Error::LevelMismatch)?;
    let ring = tower.ring();
    let mut max_e = 0usize;
    for d in &f.values {
        let mut v = 0usize;
        let mut rep = d.rep().clone();
        while v < level.n && !rep.is_zero() {
            let (q, r) = ring.divmod(&rep, &level.p_poly)?;
            if !r.is_zero() {
                break;
            }
            rep = q;
            v += 1;
        }
        if d.rep().is_zero() {
            v = level.n;
        }
        max_e = max_e.max(level.n - v);
    }
    Ok(ring.pow(&level.p_poly, max_e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::poly::PolyRing;

    fn tower(n: usize) -> CyclotomicField {
        let fq = Fq::prime(3).unwrap();
        let ring = PolyRing::new(fq.clone());
        CyclotomicField::build_tower(fq, ring.gen(), n).unwrap()
    }

    fn tower_p(p_coeffs: &[u64], n: usize) -> CyclotomicField {
        let fq = Fq::prime(3).unwrap();
        let ring = PolyRing::new(fq.clone());
        let p = ring.from_coeffs(p_coeffs.iter().map(|&c| fq.from_u64(c)).collect());
        CyclotomicField::build_tower(fq, p, n).unwrap()
    }

    #[test]
    fn trivial_group_has_one_cocycle() {
        let l1 = tower(1);
        let rep = enumerate_cocycles(&l1).unwrap();
        assert_eq!(rep.z1_size, 1);
        assert_eq!(rep.b1_size, 1);
        assert_eq!(rep.h1_size, 1);
        let bf = enumerate_cocycles_bruteforce(&l1).unwrap();
        assert_eq!(bf.z1_size, 1);
    }

    #[test]
    fn level_two_counts() {
        let l2 = tower(2);
        let rep = enumerate_cocycles(&l2).unwrap();
        assert_eq!(rep.z1_size, 9);
        assert_eq!(rep.b1_size, 3);
        assert_eq!(rep.h1_size, 3);
    }

    #[test]
    fn level_three_count_via_generators() {
        let l3 = tower(3);
        let rep = enumerate_cocycles(&l3).unwrap();
        assert_eq!(rep.z1_size, 27);
        assert_eq!(rep.b1_size, 9);
        assert_eq!(rep.h1_size, 3);
    }

    #[test]
    fn bruteforce_agrees_with_generators() {
        for t in [tower(1), tower(2), tower_p(&[1, 1], 2)] {
            let a = enumerate_cocycles(&t).unwrap();
            let b = enumerate_cocycles_bruteforce(&t).unwrap();
            assert_eq!(a.cocycles, b.cocycles, "oracle equivalence");
        }
    }

    #[test]
    fn bruteforce_scan_counts_candidates() {
        // (T,2): 9^2 = 81 candidates, 9 survivors
        let l2 = tower(2);
        let sys = tower_action_system(&l2).unwrap();
        assert_eq!(sys.module.len(), 9);
        assert_eq!(sys.group.len(), 3);
        let found = sys.cocycles_bruteforce(BRUTEFORCE_CAP).unwrap();
        assert_eq!(found.len(), 9);
    }

    #[test]
    fn bruteforce_respects_cap() {
        let l3 = tower(3);
        let sys = tower_action_system(&l3).unwrap();
        // 27^8 far exceeds the cap
        assert!(matches!(
            sys.cocycles_bruteforce(BRUTEFORCE_CAP),
            Err(Error::DeskScaleExceeded { .. })
        ));
    }

    #[test]
    fn worked_solution_set_level_two() {
        // solutions are exactly (0, (2T+2) D, D) for D mod T^2
        let l2 = tower(2);
        let ring = l2.ring().clone();
        let rr = l2.residue_ring().unwrap().clone();
        let rep = enumerate_cocycles(&l2).unwrap();
        let factor = ring.from_coeffs(vec![ring.base().from_u64(2), ring.base().from_u64(2)]);
        let expected: std::collections::HashSet<Vec<ResidueClass>> = rr
            .all_residues()
            .into_iter()
            .map(|d| vec![rr.zero(), rr.mul(&rr.reduce(&factor), &d).unwrap(), d])
            .collect();
        let got: std::collections::HashSet<Vec<ResidueClass>> =
            rep.cocycles.iter().map(|c| c.values.clone()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn worked_cocycle_vectors_level_two() {
        // (D_s2, D_s3) = ((2T+2), 1) scaled: (2T+2)*1 with D_s3 = 1 passes;
        // (1, 1) violates the relation
        let l2 = tower(2);
        let ring = l2.ring().clone();
        let rr = l2.residue_ring().unwrap().clone();
        let level = l2.level().unwrap().clone();
        let good = Cocycle {
            level: level.clone(),
            values: vec![
                rr.zero(),
                rr.reduce(&ring.from_coeffs(vec![
                    ring.base().from_u64(2),
                    ring.base().from_u64(2),
                ])),
                rr.one(),
            ],
        };
        assert!(is_cocycle(&l2, &good).unwrap());
        let bad = Cocycle {
            level,
            values: vec![rr.zero(), rr.one(), rr.one()],
        };
        assert!(!is_cocycle(&l2, &bad).unwrap());
    }

    #[test]
    fn zero_map_is_cocycle() {
        let l2 = tower(2);
        let rr = l2.residue_ring().unwrap().clone();
        let f = Cocycle {
            level: l2.level().unwrap().clone(),
            values: vec![rr.zero(); 3],
        };
        assert!(is_cocycle(&l2, &f).unwrap());
    }

    #[test]
    fn missing_group_element_is_error() {
        let l2 = tower(2);
        let rr = l2.residue_ring().unwrap().clone();
        let f = Cocycle {
            level: l2.level().unwrap().clone(),
            values: vec![rr.zero(); 2],
        };
        assert!(matches!(
            is_cocycle(&l2, &f),
            Err(Error::MissingGroupElement)
        ));
    }

    #[test]
    fn coboundary_counts_and_membership() {
        let l2 = tower(2);
        let bs = coboundaries(&l2).unwrap();
        assert_eq!(bs.len(), 3, "q^((n-1)d) = 3");
        for b in &bs {
            assert!(is_cocycle(&l2, b).unwrap());
        }
        let l3 = tower(3);
        assert_eq!(coboundaries(&l3).unwrap().len(), 9);
    }

    #[test]
    fn z1_is_a_group_and_p_torsion() {
        let l2 = tower(2);
        let sys = tower_action_system(&l2).unwrap();
        let all = sys.cocycles_bruteforce(BRUTEFORCE_CAP).unwrap();
        for f in &all {
            for g in &all {
                let sum = sys.add_cocycles(f, g);
                assert!(all.contains(&sum), "Z^1 closed under addition");
            }
            // p f = 0
            let mut acc = vec![sys.zero; sys.group.len()];
            for _ in 0..3 {
                acc = sys.add_cocycles(&acc, f);
            }
            assert!(acc.iter().all(|&i| i == sys.zero));
        }
    }

    #[test]
    fn phi_map_basics() {
        let l2 = tower(2);
        // alpha in K -> zero cocycle
        let k_elem = l2.lambda_first_level().unwrap();
        let zero_cocycle = phi_map(&l2, &k_elem).unwrap();
        assert!(zero_cocycle.values.iter().all(|d| d.rep().is_zero()));
        // alpha = lambda -> D_sigma = B_sigma - 1
        let f = phi_map(&l2, &l2.lambda()).unwrap();
        let ring = l2.ring().clone();
        for (g, d) in l2.relative_group().iter().zip(&f.values) {
            let expect = l2
                .residue_ring()
                .unwrap()
                .reduce(&ring.sub(g.b.rep(), &ring.one()));
            assert_eq!(*d, expect);
        }
        // alpha = C_2(lambda) -> doubled exponents
        let two = ring.constant(ring.base().from_u64(2));
        let alpha2 = crate::carlitz::carlitz_act(&ring, &l2, &two, &l2.lambda());
        let f2 = phi_map(&l2, &alpha2).unwrap();
        for (g, d) in l2.relative_group().iter().zip(&f2.values) {
            let expect = l2.residue_ring().unwrap().reduce(&ring.scale(
                &ring.base().from_u64(2),
                &ring.sub(g.b.rep(), &ring.one()),
            ));
            assert_eq!(*d, expect);
        }
        // non-DrinT input is rejected: C_{T^2}(1/(1+lambda)) is not invariant
        let bad = l2
            .inv(&l2.add(&l2.one(), &l2.lambda()))
            .unwrap();
        assert!(matches!(phi_map(&l2, &bad), Err(Error::NotInDrinT)));
    }

    #[test]
    fn inverse_of_lambda_is_a_nontrivial_drint_class() {
        // 1/lambda lies in DrinT(L_2/L_1) and its cocycle is not a coboundary:
        // exponents (0, T+2, T+1) along the canonical group order
        let l2 = tower(2);
        let inv_lam = l2.inv(&l2.lambda()).unwrap();
        let f = phi_map(&l2, &inv_lam).unwrap();
        let shown: Vec<String> = f
            .values
            .iter()
            .map(|d| l2.ring().format_rt(d.rep(), "T"))
            .collect();
        assert_eq!(shown, vec!["0", "T+2", "T+1"]);
        assert!(!coboundaries(&l2).unwrap().contains(&f));
        // round trip: the normalized representative has the same cocycle
        let alpha = phi_inverse(&l2, &f).unwrap();
        assert!(l2.is_in_first_level(&l2.sub(&alpha, &inv_lam)));
    }

    #[test]
    fn phi_round_trip_level_two() {
        let l2 = tower(2);
        let rep = enumerate_cocycles(&l2).unwrap();
        let mut classes = std::collections::HashSet::new();
        for f in &rep.cocycles {
            let alpha = phi_inverse(&l2, f).unwrap();
            let back = phi_map(&l2, &alpha).unwrap();
            assert_eq!(&back, f, "phi(phi^-1(f)) = f");
            assert!(classes.insert(alpha), "classes mod K must be distinct");
        }
        assert_eq!(classes.len(), 9);
    }

    #[test]
    fn attach_preimages_fills_report() {
        let l2 = tower(2);
        let mut rep = enumerate_cocycles(&l2).unwrap();
        attach_preimages(&l2, &mut rep).unwrap();
        let pre = rep.witness_preimages.as_ref().unwrap();
        assert_eq!(pre.len(), rep.z1_size);
        for (alpha, f) in pre.iter().zip(&rep.cocycles) {
            assert_eq!(&phi_map(&l2, alpha).unwrap(), f);
        }
    }

    #[test]
    fn phi_inverse_rejects_non_cocycle() {
        let l2 = tower(2);
        let rr = l2.residue_ring().unwrap().clone();
        let f = Cocycle {
            level: l2.level().unwrap().clone(),
            values: vec![rr.zero(), rr.one(), rr.one()],
        };
        assert!(matches!(phi_inverse(&l2, &f), Err(Error::NotACocycle(..))));
    }

    #[test]
    fn size_bounds() {
        let l2 = tower(2);
        let rep2 = enumerate_cocycles(&l2).unwrap();
        let sb2 = size_bound_check(&l2, &rep2).unwrap();
        assert_eq!(sb2.rank, 1);
        assert_eq!(sb2.bound, 9);
        assert!(sb2.holds, "9 <= 9 (tight)");
        let l3 = tower(3);
        let rep3 = enumerate_cocycles(&l3).unwrap();
        let sb3 = size_bound_check(&l3, &rep3).unwrap();
        assert_eq!(sb3.rank, 2);
        assert_eq!(sb3.bound, 729);
        assert!(sb3.holds, "27 <= 729");
        let l1 = tower(1);
        let rep1 = enumerate_cocycles(&l1).unwrap();
        let sb1 = size_bound_check(&l1, &rep1).unwrap();
        assert_eq!(sb1.rank, 0);
        assert_eq!(sb1.bound, 1);
        assert!(sb1.holds);
    }

    #[test]
    fn factorization_identity_on_enumerated_instances() {
        for t in [tower(1), tower(2), tower_p(&[1, 1], 2)] {
            let rep = enumerate_cocycles(&t).unwrap();
            assert_eq!(rep.z1_size, rep.b1_size * rep.h1_size);
        }
    }

    #[test]
    fn coboundary_preimages_differ_from_torsion_by_first_level() {
        let l2 = tower(2);
        for f in coboundaries(&l2).unwrap() {
            let alpha = phi_inverse(&l2, &f).unwrap();
            let found = (0..9).any(|i| {
                let pt = l2.torsion_point_of_residue_index(i);
                l2.is_in_first_level(&l2.sub(&alpha, pt))
            });
            assert!(found, "coboundary preimage must be a torsion point mod K");
        }
    }
}
