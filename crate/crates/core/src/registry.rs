//! Named test modules per algebra.
//!
//! The registry holds simples, indecomposable projectives and injectives,
//! the regular module `A` and its dual `DA`, indecomposable cyclic
//! submodules and quotients of `A` and `DA` found by search, first
//! syzygies of simples, and a few direct sums. Entries are pairwise
//! non-isomorphic.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::module::{
    direct_sum, fits_budget, for_each_vector, is_indecomposable, is_isomorphic,
    projective_summands, quotient, submodule_generated, syzygy, IsoVerdict, Module,
};

/// Enumeration budget for endomorphism rings and isomorphism searches.
pub const ISO_BUDGET: u64 = 1 << 16;

/// Candidate generators are enumerated exhaustively up to this many.
const SEARCH_BUDGET: u64 = 4096;

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub module: Module,
}

#[derive(Clone, Debug)]
pub struct Registry {
    algebra: Arc<Algebra>,
    entries: Vec<Entry>,
}

impl Registry {
    pub fn build(alg: &Arc<Algebra>) -> Result<Registry> {
        let mut reg = Registry {
            algebra: alg.clone(),
            entries: Vec::new(),
        };
        let regular = Module::regular(alg);
        let dual_regular = Module::regular(&alg.opposite()).dual();
        let tests = [regular.clone(), dual_regular.clone()];
        let summands = projective_summands(alg);
        let many = summands.len() > 1;

        let simples = simple_tops(alg).unwrap_or_default();
        let local = simples.len() == 1 && !many;
        for (t, s) in simples.iter().enumerate() {
            let name = if local { "k".to_string() } else { format!("S{}", t + 1) };
            reg.offer(&name, s, &tests)?;
        }
        if many {
            for (t, s) in summands.iter().enumerate() {
                reg.offer(&format!("P{}", t + 1), &s.module, &tests)?;
            }
            let op_summands = projective_summands(&alg.opposite());
            for (t, s) in op_summands.iter().enumerate() {
                reg.offer(&format!("I{}", t + 1), &s.module.dual(), &tests)?;
            }
        }
        reg.offer("A", &regular, &tests)?;
        reg.offer("DA", &dual_regular, &tests)?;

        let mut seen: HashSet<Vec<u32>> = reg.entries.iter().map(|e| e.module.key()).collect();
        let mut found = 0;
        for ambient in [&regular, &dual_regular] {
            for v in candidate_vectors(ambient) {
                let sub = submodule_generated(ambient, &[v]);
                let quot = quotient(ambient, sub.inclusion.matrix())?.module;
                for cand in [sub.module, quot] {
                    if cand.is_zero() || !seen.insert(cand.key()) {
                        continue;
                    }
                    if is_indecomposable(&cand, ISO_BUDGET)? != Some(true) {
                        continue;
                    }
                    let name = format!("M{}_{}", cand.dim(), found + 1);
                    if reg.offer(&name, &cand, &tests)? {
                        found += 1;
                    }
                }
            }
        }

        for (t, s) in simples.iter().enumerate() {
            let syz = syzygy(s);
            if syz.is_zero() {
                continue;
            }
            let name = if local {
                "syz1(k)".to_string()
            } else {
                format!("syz1(S{})", t + 1)
            };
            reg.offer(&name, &syz, &tests)?;
        }

        // a few direct sums of the first indecomposables
        let base: Vec<Entry> = reg.entries.iter().take(3).cloned().collect();
        if let Some(first) = base.first() {
            let name = format!("{0}+{0}", first.name);
            reg.offer(&name, &first.module.direct_sum(&first.module), &tests)?;
        }
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let name = format!("{}+{}", base[i].name, base[j].name);
                let sum = direct_sum(&[base[i].module.clone(), base[j].module.clone()]).module;
                reg.offer(&name, &sum, &tests)?;
            }
        }
        Ok(reg)
    }

    /// Adds `m` unless it is isomorphic to an existing entry.
    fn offer(&mut self, name: &str, m: &Module, tests: &[Module]) -> Result<bool> {
        if m.is_zero() {
            return Ok(false);
        }
        for e in &self.entries {
            if e.module.dim() != m.dim() {
                continue;
            }
            match is_isomorphic(&e.module, m, tests, ISO_BUDGET)? {
                IsoVerdict::Isomorphic(_) => return Ok(false),
                IsoVerdict::NotIsomorphic => {}
                // keep it: a duplicate only costs time
                IsoVerdict::Unknown => {}
            }
        }
        self.entries.push(Entry {
            name: name.to_string(),
            module: m.clone(),
        });
        Ok(true)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }
    pub fn modules(&self) -> Vec<Module> {
        self.entries.iter().map(|e| e.module.clone()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&Module> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| &e.module)
            .ok_or_else(|| Error::UnknownModuleName(name.to_string()))
    }

    /// Name of a registered module that is structurally equal to `m`.
    pub fn name_of(&self, m: &Module) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| &e.module == m)
            .map(|e| e.name.as_str())
    }
}

/// Vectors whose cyclic submodules are searched: everything when small,
/// otherwise basis vectors, homogeneous components and pairwise sums.
fn candidate_vectors(m: &Module) -> Vec<Vec<u32>> {
    let p = m.p();
    let d = m.dim();
    if fits_budget(p, d, SEARCH_BUDGET) {
        let mut out = Vec::new();
        for_each_vector(p, d, |v| {
            if v.iter().any(|&x| x != 0) {
                out.push(v.to_vec());
            }
            false
        });
        return out;
    }
    let mut out: Vec<Vec<u32>> = Vec::new();
    let basis: Vec<Vec<u32>> = (0..d)
        .map(|i| (0..d).map(|r| u32::from(r == i)).collect())
        .collect();
    for e in m.algebra().summand_idempotents() {
        let proj = m.act(&e);
        out.extend(basis.iter().map(|b| proj.mul_vec(b)));
    }
    for i in 0..d {
        for j in i + 1..d {
            out.push(basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect());
        }
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

/// The simple tops `A·e_t / rad(A·e_t)`, available when the declared
/// idempotents are primitive with split local corners `e_t A e_t`.
pub fn simple_tops(alg: &Arc<Algebra>) -> Option<Vec<Module>> {
    let p = alg.p();
    let n = alg.dim();
    let idem = alg.summand_idempotents();
    let summands = projective_summands(alg);
    // a^(p^m) kills the nilpotent part of a once p^m ≥ dim A
    let mut exp: u64 = p as u64;
    while exp < n as u64 {
        exp *= p as u64;
    }
    let mut out = Vec::new();
    for (t, s) in summands.iter().enumerate() {
        let e = &idem[t];
        let corner = alg.left_mul_by(e).mul(&alg.right_mul_by(e)).column_space();
        let mut rad_cols: Vec<Vec<u32>> = Vec::new();
        for b in corner.columns() {
            let c = power(alg, &b, exp);
            let lambda = scalar_multiple(&c, e, p)?;
            rad_cols.push(
                b.iter()
                    .zip(e)
                    .map(|(&x, &y)| (x + p - (lambda as u64 * y as u64 % p as u64) as u32) % p)
                    .collect(),
            );
        }
        for (u, f) in idem.iter().enumerate() {
            if u != t {
                let block = alg.left_mul_by(f).mul(&alg.right_mul_by(e));
                rad_cols.extend(block.columns());
            }
        }
        let rad = Matrix::from_columns(p, n, &rad_cols).column_space();
        if s.module.dim() != rad.cols() + 1 {
            return None;
        }
        // coordinates of the radical inside the summand's basis
        let coords = s.basis.solve_many(&rad).ok()??;
        out.push(quotient(&s.module, &coords).ok()?.module);
    }
    Some(out)
}

fn power(alg: &Algebra, a: &[u32], mut e: u64) -> Vec<u32> {
    let mut base = a.to_vec();
    let mut acc = alg.unit().to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = alg.multiply(&acc, &base);
        }
        base = alg.multiply(&base, &base);
        e >>= 1;
    }
    acc
}

/// `λ` with `c = λ·e`, if any.
fn scalar_multiple(c: &[u32], e: &[u32], p: u32) -> Option<u32> {
    let pivot = e.iter().position(|&x| x != 0)?;
    let lambda = (c[pivot] as u64 * crate::linalg::inv_mod(e[pivot], p) as u64 % p as u64) as u32;
    c.iter()
        .zip(e)
        .all(|(&x, &y)| x as u64 == lambda as u64 * y as u64 % p as u64)
        .then_some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    #[test]
    fn a1_registry() {
        let reg = Registry::build(&builtin("A1", 2).unwrap()).unwrap();
        assert_eq!(reg.names(), vec!["k", "A", "k+k", "k+A"]);
    }

    #[test]
    fn a2_registry() {
        let reg = Registry::build(&builtin("A2", 3).unwrap()).unwrap();
        let names = reg.names();
        for n in ["S1", "S2", "P1", "A", "DA"] {
            assert!(names.contains(&n), "{names:?}");
        }
        // P2 ≅ S2, I1 ≅ S1 and I2 ≅ P1 are deduplicated
        assert!(!names.contains(&"P2") && !names.contains(&"I1") && !names.contains(&"I2"));
        assert_eq!(reg.get("S1").unwrap().dim(), 1);
        assert!(matches!(reg.get("nope"), Err(Error::UnknownModuleName(_))));
    }

    #[test]
    fn a3_registry_has_simples_and_injectives() {
        let reg = Registry::build(&builtin("A3", 2).unwrap()).unwrap();
        let names = reg.names();
        for n in ["S1", "S2", "P1", "P2", "I2", "A", "DA"] {
            assert!(names.contains(&n), "{names:?}");
        }
        // the injective hull of S1 is projective, so it was deduplicated
        let i1 = projective_summands(&builtin("A3", 2).unwrap().opposite())[0]
            .module
            .dual();
        let p2 = reg.get("P2").unwrap();
        assert!(is_isomorphic(&i1, p2, &[], ISO_BUDGET).unwrap().is_yes());
        for (i, a) in reg.entries().iter().enumerate() {
            for b in &reg.entries()[i + 1..] {
                let v = is_isomorphic(&a.module, &b.module, &[], ISO_BUDGET).unwrap();
                assert!(!v.is_yes(), "{} ≅ {}", a.name, b.name);
            }
        }
    }
}
