//! Independent oracles for the integration tests.
//!
//! Everything here is decided by dimension counting against the simple
//! modules, never by the library's own projectivity, Ext or dimension
//! routines.
#![allow(dead_code)]

use std::sync::Arc;

use cotorsion::algebra::Algebra;
use cotorsion::module::{hom_dim, presentation, projective_summands, syzygy, Module};
use cotorsion::registry::simple_tops;

pub struct Oracle {
    pub simples: Vec<Module>,
    /// `P_t`, the projective cover of `simples[t]`.
    pub covers: Vec<Module>,
    /// `I_t`, the injective hull of `simples[t]`.
    pub hulls: Vec<Module>,
    opposite: Option<Box<Oracle>>,
}

impl Oracle {
    pub fn new(alg: &Arc<Algebra>) -> Oracle {
        let mut o = Oracle::one_sided(alg);
        o.opposite = Some(Box::new(Oracle::one_sided(&alg.opposite())));
        o
    }

    fn one_sided(alg: &Arc<Algebra>) -> Oracle {
        let simples = simple_tops(alg).expect("split basic algebra");
        let covers: Vec<Module> = projective_summands(alg).into_iter().map(|s| s.module).collect();
        let duals: Vec<Module> = projective_summands(&alg.opposite())
            .into_iter()
            .map(|s| s.module.dual())
            .collect();
        // the hull of S_t is the indecomposable injective with socle S_t
        let hulls = simples
            .iter()
            .map(|s| {
                duals
                    .iter()
                    .find(|i| hom_dim(s, i).unwrap() > 0)
                    .expect("every simple embeds in an injective")
                    .clone()
            })
            .collect();
        Oracle {
            simples,
            covers,
            hulls,
            opposite: None,
        }
    }

    /// Projective iff `M` has the dimension of its projective cover.
    pub fn is_projective(&self, m: &Module) -> bool {
        let cover: usize = self
            .simples
            .iter()
            .zip(&self.covers)
            .map(|(s, p)| hom_dim(m, s).unwrap() * p.dim())
            .sum();
        cover == m.dim()
    }

    /// Injective iff `M` has the dimension of its injective hull.
    pub fn is_injective(&self, m: &Module) -> bool {
        let hull: usize = self
            .simples
            .iter()
            .zip(&self.hulls)
            .map(|(s, i)| hom_dim(s, m).unwrap() * i.dim())
            .sum();
        hull == m.dim()
    }

    /// `Some(pd M)` when it is at most `bound`.
    pub fn pd(&self, m: &Module, bound: usize) -> Option<usize> {
        let mut k = m.clone();
        for n in 0..=bound {
            if self.is_projective(&k) {
                return Some(n);
            }
            k = syzygy(&k);
        }
        None
    }

    /// `id M = pd DM` over the opposite algebra.
    pub fn id(&self, m: &Module, bound: usize) -> Option<usize> {
        self.opposite.as_ref().expect("two-sided oracle").pd(&m.dual(), bound)
    }

    /// `dim Ext^i(M, N)` by dimension shifting along any projective
    /// presentation: `Ext^i(M,N) = Ext^1(Ω^{i-1}M, N)` and
    /// `0 → Hom(Ω^{i-1},N) → Hom(P,N) → Hom(Ω^i,N) → Ext^1(Ω^{i-1},N) → 0`.
    pub fn ext(&self, m: &Module, n: &Module, i: usize) -> usize {
        if i == 0 {
            return hom_dim(m, n).unwrap();
        }
        let mut k = m.clone();
        for _ in 1..i {
            k = syzygy(&k);
        }
        let pres = presentation(&k);
        let cover = pres.seq.mid().clone();
        let omega = pres.kernel.module.clone();
        hom_dim(&omega, n).unwrap() + hom_dim(&k, n).unwrap() - hom_dim(&cover, n).unwrap()
    }
}

pub fn sup(values: impl IntoIterator<Item = Option<usize>>) -> Option<usize> {
    values
        .into_iter()
        .try_fold(0, |acc, v| v.map(|v| acc.max(v)))
}
