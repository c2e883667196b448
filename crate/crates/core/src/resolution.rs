//! Free resolutions, injective coresolutions (by duality), absolute Ext and
//! projective/injective dimensions.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Matrix;
use crate::module::{
    free_cover, hom_dim, hom_space, presentation, syzygy, Module, ModuleMap, ShortExactSeq,
};

/// Default search bound for dimension computations.
pub const DEFAULT_BOUND: usize = 10;

/// A dimension found within a search bound, or the bound was exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bounded {
    Finite(usize),
    ExceedsBound,
}

impl Bounded {
    pub fn finite(self) -> Option<usize> {
        match self {
            Bounded::Finite(n) => Some(n),
            Bounded::ExceedsBound => None,
        }
    }
    pub fn is_finite(self) -> bool {
        matches!(self, Bounded::Finite(_))
    }
    pub fn at_most(self, n: usize) -> bool {
        matches!(self, Bounded::Finite(m) if m <= n)
    }
}

impl std::fmt::Display for Bounded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bounded::Finite(n) => write!(f, "{n}"),
            Bounded::ExceedsBound => write!(f, "exceeds bound"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Free,
    InjectiveCo,
    ProperX,
    ProperY,
}

/// A resolution recorded as short exact pieces.
///
/// For `Free` and `ProperX`, step `i` is `0 → K_{i+1} → F_i → K_i → 0` with
/// `K_0 = target`. For `InjectiveCo` and `ProperY`, step `i` is
/// `0 → L^i → I^i → L^{i+1} → 0` with `L^0 = target`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: Module,
    pub steps: Vec<ShortExactSeq>,
    pub flavor: Flavor,
}

impl Resolution {
    pub fn is_coresolution(&self) -> bool {
        matches!(self.flavor, Flavor::InjectiveCo | Flavor::ProperY)
    }

    /// Checks that consecutive steps are glued along their outer terms.
    pub fn verify(&self) -> Result<()> {
        for (i, s) in self.steps.iter().enumerate() {
            s.verify()?;
            let glued = if self.is_coresolution() {
                if i == 0 {
                    s.sub() == &self.target
                } else {
                    s.sub() == self.steps[i - 1].quot()
                }
            } else if i == 0 {
                s.quot() == &self.target
            } else {
                s.quot() == self.steps[i - 1].sub()
            };
            if !glued {
                return Err(crate::Error::PropertyViolation(format!(
                    "resolution step {i} is not glued to its predecessor"
                )));
            }
        }
        Ok(())
    }

    /// The `i`-th middle term (`F_i` or `I^i`).
    pub fn term(&self, i: usize) -> &Module {
        self.steps[i].mid()
    }

    /// Differential `F_{i+1} → F_i` (resolutions) or `I^i → I^{i+1}`
    /// (coresolutions).
    pub fn differential(&self, i: usize) -> ModuleMap {
        let (a, b) = (&self.steps[i], &self.steps[i + 1]);
        if self.is_coresolution() {
            b.left.compose(&a.right)
        } else {
            a.left.compose(&b.right)
        }
    }
}

/// Free resolution with `len` steps.
pub fn free_resolution(m: &Module, len: usize) -> Resolution {
    let mut steps = Vec::with_capacity(len);
    let mut cur = m.clone();
    for _ in 0..len {
        let s = free_cover(&cur);
        cur = s.sub().clone();
        steps.push(s);
    }
    Resolution {
        target: m.clone(),
        steps,
        flavor: Flavor::Free,
    }
}

/// `Ω^i M`; `syzygy_n(M, 0) = M`.
pub fn syzygy_n(m: &Module, i: usize) -> Module {
    (0..i).fold(m.clone(), |k, _| syzygy(&k))
}

/// `0 → M → I → C → 0` with `I` injective: the dual of a free cover of
/// `D M` over the opposite algebra.
pub fn injective_embedding(m: &Module) -> ShortExactSeq {
    free_cover(&m.dual()).dual()
}

/// `Σ M`, the cokernel of [`injective_embedding`].
pub fn cosyzygy(m: &Module) -> Module {
    injective_embedding(m).quot().clone()
}

pub fn cosyzygy_n(m: &Module, i: usize) -> Module {
    (0..i).fold(m.clone(), |k, _| cosyzygy(&k))
}

pub fn injective_coresolution(m: &Module, len: usize) -> Resolution {
    let mut steps = Vec::with_capacity(len);
    let mut cur = m.clone();
    for _ in 0..len {
        let s = injective_embedding(&cur);
        cur = s.quot().clone();
        steps.push(s);
    }
    Resolution {
        target: m.clone(),
        steps,
        flavor: Flavor::InjectiveCo,
    }
}

/// Rank of the k-linear span of the flattened maps.
pub(crate) fn span_rank(p: u32, rows: usize, maps: &[Matrix]) -> usize {
    if maps.is_empty() || rows == 0 {
        return 0;
    }
    let cols: Vec<Vec<u32>> = maps.iter().map(Matrix::flatten).collect();
    Matrix::from_columns(p, rows, &cols).rank()
}

/// `dim Ext^1(C, N)` from `0 → K → F → C → 0` with `F` projective:
/// the cokernel of restriction `Hom(F, N) → Hom(K, N)`.
pub(crate) fn ext1_from_cover(cover: &ShortExactSeq, n: &Module) -> Result<usize> {
    let k = cover.sub();
    let hk = hom_dim(k, n)?;
    if hk == 0 {
        return Ok(0);
    }
    let hf = hom_space(cover.mid(), n)?;
    let restricted: Vec<Matrix> = (0..hf.dim())
        .map(|s| hf.basis_matrix(s).mul(cover.left.matrix()))
        .collect();
    Ok(hk - span_rank(n.p(), n.dim() * k.dim(), &restricted))
}

/// `dim Ext^1(M, L)` from `0 → L → I → C → 0` with `I` injective: the
/// cokernel of `Hom(M, I) → Hom(M, C)`.
pub(crate) fn ext1_from_embedding(m: &Module, emb: &ShortExactSeq) -> Result<usize> {
    let c = emb.quot();
    let hc = hom_dim(m, c)?;
    if hc == 0 {
        return Ok(0);
    }
    let hi = hom_space(m, emb.mid())?;
    let pushed: Vec<Matrix> = (0..hi.dim())
        .map(|s| emb.right.matrix().mul(hi.basis_matrix(s)))
        .collect();
    Ok(hc - span_rank(m.p(), c.dim() * m.dim(), &pushed))
}

/// `dim Ext^i_A(M, N)` by dimension shifting along the free resolution of M.
pub fn ext_dim(m: &Module, n: &Module, i: usize) -> Result<usize> {
    if i == 0 {
        return hom_dim(m, n);
    }
    let k = syzygy_n(m, i - 1);
    ext1_from_cover(&presentation(&k).seq, n)
}

/// `dim Ext^i_A(M, N)` computed from the injective coresolution of `N`.
pub fn ext_dim_coresolution(m: &Module, n: &Module, i: usize) -> Result<usize> {
    if i == 0 {
        return hom_dim(m, n);
    }
    let l = cosyzygy_n(n, i - 1);
    ext1_from_embedding(m, &injective_embedding(&l))
}

const PROJECTIVE_FLAG: u8 = 0;

/// A section of an epimorphism, when it splits.
pub fn split_section(epi: &ModuleMap) -> Result<Option<ModuleMap>> {
    let (src, tgt) = (epi.source(), epi.target());
    if tgt.is_zero() {
        return Ok(Some(ModuleMap::zero(tgt, src)));
    }
    let h = hom_space(tgt, src)?;
    let composites: Vec<Matrix> =
        (0..h.dim()).map(|s| epi.matrix().mul(h.basis_matrix(s))).collect();
    let id = Matrix::identity(tgt.p(), tgt.dim()).flatten();
    Ok(solve_combination(tgt.p(), &composites, &id)?.map(|c| h.combine(&c)))
}

/// A retraction of a monomorphism, when it splits.
pub fn split_retraction(mono: &ModuleMap) -> Result<Option<ModuleMap>> {
    let (src, tgt) = (mono.source(), mono.target());
    if src.is_zero() {
        return Ok(Some(ModuleMap::zero(tgt, src)));
    }
    let h = hom_space(tgt, src)?;
    let composites: Vec<Matrix> =
        (0..h.dim()).map(|s| h.basis_matrix(s).mul(mono.matrix())).collect();
    let id = Matrix::identity(src.p(), src.dim()).flatten();
    Ok(solve_combination(src.p(), &composites, &id)?.map(|c| h.combine(&c)))
}

/// Coefficients `c` with `Σ c_s maps[s] = target` (all flattened), if any.
pub(crate) fn solve_combination(p: u32, maps: &[Matrix], target: &[u32]) -> Result<Option<Vec<u32>>> {
    if maps.is_empty() {
        return Ok(target.iter().all(|&x| x == 0).then(Vec::new));
    }
    let cols: Vec<Vec<u32>> = maps.iter().map(Matrix::flatten).collect();
    Matrix::from_columns(p, target.len(), &cols).solve(target)
}

/// Whether the free cover of `M` splits.
pub fn is_projective(m: &Module) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    let key = (PROJECTIVE_FLAG, m.key());
    if let Some(&b) = m.algebra().flags.lock().expect("cache lock").get(&key) {
        return Ok(b);
    }
    let pres = presentation(m);
    let b = pres.kernel.module.is_zero() || split_section(&pres.seq.right)?.is_some();
    m.algebra().flags.lock().expect("cache lock").insert(key, b);
    Ok(b)
}

/// `M` is injective iff `D M` is projective over the opposite algebra.
pub fn is_injective(m: &Module) -> Result<bool> {
    is_projective(&m.dual())
}

/// Smallest `n ≤ bound` with `Ω^n M` projective.
pub fn proj_dim(m: &Module, bound: usize) -> Result<Bounded> {
    let mut k = m.clone();
    for n in 0..=bound {
        if is_projective(&k)? {
            return Ok(Bounded::Finite(n));
        }
        k = syzygy(&k);
    }
    Ok(Bounded::ExceedsBound)
}

pub fn inj_dim(m: &Module, bound: usize) -> Result<Bounded> {
    proj_dim(&m.dual(), bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::linalg::Matrix;
    use crate::module::{is_isomorphic, Module};
    use std::sync::Arc;

    fn k_a1(p: u32) -> Module {
        let a1 = builtin("A1", p).unwrap();
        Module::new(&a1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    /// Simples of A2: `S1` at the source vertex, `S2` at the sink.
    fn simples_a2(p: u32) -> (Module, Module) {
        let a2 = builtin("A2", p).unwrap();
        let one = Matrix::identity(p, 1);
        let zero = Matrix::zeros(p, 1, 1);
        let s1 = Module::new(&a2, vec![one.clone(), zero.clone(), zero.clone()]).unwrap();
        let s2 = Module::new(&a2, vec![zero.clone(), one, zero]).unwrap();
        (s1, s2)
    }

    #[test]
    fn free_cover_examples() {
        let a1 = builtin("A1", 2).unwrap();
        let a = Module::regular(&a1);
        let s = free_cover(&a);
        assert!(s.sub().is_zero());
        assert_eq!(s.mid().dim(), 2);
        let z = Module::zero(&a1);
        assert!(free_cover(&z).mid().is_zero());
        let k = k_a1(2);
        let s = free_cover(&k);
        assert_eq!(s.mid(), &a);
        assert!(is_isomorphic(s.sub(), &k, &[], 1 << 16).unwrap().is_yes());
    }

    #[test]
    fn periodic_syzygies_over_a1() {
        let k = k_a1(3);
        for i in 1..5 {
            assert!(is_isomorphic(&syzygy_n(&k, i), &k, &[], 1 << 16).unwrap().is_yes());
        }
        assert!(syzygy_n(&Module::regular(k.algebra()), 1).is_zero());
    }

    #[test]
    fn ext_examples() {
        let k = k_a1(2);
        for i in 0..5 {
            assert_eq!(ext_dim(&k, &k, i).unwrap(), 1, "degree {i}");
        }
        let a = Module::regular(k.algebra());
        for i in 1..4 {
            assert_eq!(ext_dim(&a, &k, i).unwrap(), 0);
        }
        let (s1, s2) = simples_a2(2);
        assert_eq!(ext_dim(&s1, &s2, 1).unwrap(), 1);
        assert_eq!(ext_dim(&s2, &s1, 1).unwrap(), 0);
    }

    #[test]
    fn projectivity_and_dimensions() {
        let k = k_a1(2);
        let a1 = k.algebra().clone();
        assert!(is_projective(&Module::regular(&a1)).unwrap());
        assert!(!is_projective(&k).unwrap());
        assert!(is_injective(&Module::regular(&a1)).unwrap());
        assert_eq!(proj_dim(&Module::regular(&a1), 10).unwrap(), Bounded::Finite(0));
        assert_eq!(proj_dim(&k, 10).unwrap(), Bounded::ExceedsBound);
        let (s1, s2) = simples_a2(5);
        assert_eq!(proj_dim(&s1, 10).unwrap(), Bounded::Finite(1));
        assert_eq!(proj_dim(&s2, 10).unwrap(), Bounded::Finite(0));
        assert!(is_injective(&s1).unwrap());
        assert_eq!(inj_dim(&s2, 10).unwrap(), Bounded::Finite(1));
    }

    #[test]
    fn projectivity_matches_split_ext() {
        let (s1, s2) = simples_a2(3);
        for m in [s1.clone(), s2, s1.direct_sum(&Module::regular(s1.algebra()))] {
            let pres = presentation(&m);
            let split = ext_dim(&m, pres.seq.sub(), 1).unwrap() == 0;
            assert_eq!(is_projective(&m).unwrap(), split);
        }
    }

    #[test]
    fn balance_of_absolute_ext() {
        for name in ["A1", "A2", "A3"] {
            let alg = builtin(name, 2).unwrap();
            let a = Module::regular(&alg);
            let da = a.dual().dual();
            assert!(Arc::ptr_eq(da.algebra(), &alg));
            let mods = [a.clone(), cosyzygy(&a), syzygy(&a.dual().dual()), cosyzygy(&cosyzygy(&a))];
            for m in &mods {
                for n in &mods {
                    for i in 0..4 {
                        assert_eq!(
                            ext_dim(m, n, i).unwrap(),
                            ext_dim_coresolution(m, n, i).unwrap(),
                            "{name} degree {i}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn resolutions_glue() {
        let k = k_a1(2);
        let r = free_resolution(&k, 4);
        r.verify().unwrap();
        assert!(r.differential(0).compose(&r.differential(1)).is_zero());
        let c = injective_coresolution(&k, 3);
        c.verify().unwrap();
        assert!(c.differential(1).compose(&c.differential(0)).is_zero());
    }
}
