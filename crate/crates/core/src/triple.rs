//! Cotorsion triples `(X, Z, Y)`: membership oracles, special
//! approximations and the lifting/extension tests against them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::module::{
    cokernel, direct_sum, free_cover, hom_space, projective_summands, pullback, pushout, Module,
    ModuleMap, ShortExactSeq,
};
use crate::resolution::{
    ext_dim, inj_dim, injective_embedding, is_injective, is_projective, proj_dim,
    solve_combination, Bounded, DEFAULT_BOUND,
};

/// Membership oracles for the three classes.
pub trait Classes: Send + Sync {
    fn in_x(&self, m: &Module) -> Result<bool>;
    fn in_z(&self, m: &Module) -> Result<bool>;
    fn in_y(&self, m: &Module) -> Result<bool>;
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Class {
    X,
    Z,
    Y,
}

/// Memoizes another oracle bundle; answers are identical with or without it.
struct Memo {
    inner: Box<dyn Classes>,
    cache: Mutex<HashMap<(Class, Vec<u32>), bool>>,
}

impl Memo {
    fn ask(&self, class: Class, m: &Module) -> Result<bool> {
        let key = (class, m.key());
        if let Some(&b) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(b);
        }
        let b = match class {
            Class::X => self.inner.in_x(m)?,
            Class::Z => self.inner.in_z(m)?,
            Class::Y => self.inner.in_y(m)?,
        };
        self.cache.lock().expect("cache lock").insert(key, b);
        Ok(b)
    }
}

impl Classes for Memo {
    fn in_x(&self, m: &Module) -> Result<bool> {
        self.ask(Class::X, m)
    }
    fn in_z(&self, m: &Module) -> Result<bool> {
        self.ask(Class::Z, m)
    }
    fn in_y(&self, m: &Module) -> Result<bool> {
        self.ask(Class::Y, m)
    }
}

/// The triple `(D Y, D Z, D X)` over the opposite algebra.
struct Opposite(Arc<Memo>);

impl Classes for Opposite {
    fn in_x(&self, m: &Module) -> Result<bool> {
        self.0.in_y(&m.dual())
    }
    fn in_z(&self, m: &Module) -> Result<bool> {
        self.0.in_z(&m.dual())
    }
    fn in_y(&self, m: &Module) -> Result<bool> {
        self.0.in_x(&m.dual())
    }
}

struct Trivial;

impl Classes for Trivial {
    fn in_x(&self, m: &Module) -> Result<bool> {
        is_projective(m)
    }
    fn in_z(&self, _: &Module) -> Result<bool> {
        Ok(true)
    }
    fn in_y(&self, m: &Module) -> Result<bool> {
        is_injective(m)
    }
}

/// `(GP, W, GI)` over a Gorenstein algebra of self-injective dimension `d`.
struct Gorenstein {
    d: usize,
    margin: usize,
    regular: Module,
    regular_op: Module,
}

fn ext_window_vanishes(m: &Module, t: &Module, top: usize) -> Result<bool> {
    for i in 1..=top {
        if ext_dim(m, t, i)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Classes for Gorenstein {
    fn in_x(&self, m: &Module) -> Result<bool> {
        ext_window_vanishes(m, &self.regular, self.d + self.margin)
    }
    fn in_z(&self, m: &Module) -> Result<bool> {
        Ok(proj_dim(m, self.d)?.is_finite())
    }
    fn in_y(&self, m: &Module) -> Result<bool> {
        ext_window_vanishes(&m.dual(), &self.regular_op, self.d + self.margin)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleMeta {
    pub name: String,
    pub hereditary: bool,
    pub complete: bool,
    pub gorenstein_dim: Option<usize>,
    /// Depth limit for approximation ladders and dimension searches.
    pub membership_bound: usize,
    /// Extra Ext degrees checked beyond `d` in Gorenstein-projective tests.
    pub margin: usize,
}

struct TripleInner {
    algebra: Arc<Algebra>,
    classes: Arc<Memo>,
    meta: TripleMeta,
    opposite: OnceLock<CotorsionTriple>,
    approximations: Mutex<HashMap<(ApproxKind, Vec<u32>), ApproxSeq>>,
}

/// A cotorsion triple over a fixed algebra. Cloning is cheap.
#[derive(Clone)]
pub struct CotorsionTriple(Arc<TripleInner>);

impl fmt::Debug for CotorsionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CotorsionTriple").field("meta", &self.0.meta).finish()
    }
}

pub const DEFAULT_MARGIN: usize = 2;

impl CotorsionTriple {
    pub fn new(algebra: &Arc<Algebra>, classes: Box<dyn Classes>, meta: TripleMeta) -> Self {
        CotorsionTriple(Arc::new(TripleInner {
            algebra: algebra.clone(),
            classes: Arc::new(Memo {
                inner: classes,
                cache: Mutex::new(HashMap::new()),
            }),
            meta,
            opposite: OnceLock::new(),
            approximations: Mutex::new(HashMap::new()),
        }))
    }

    /// `(P, A-mod, I)`.
    pub fn trivial(algebra: &Arc<Algebra>) -> Self {
        Self::new(
            algebra,
            Box::new(Trivial),
            TripleMeta {
                name: "trivial".into(),
                hereditary: true,
                complete: true,
                gorenstein_dim: None,
                membership_bound: DEFAULT_BOUND,
                margin: 0,
            },
        )
    }

    /// `(GP, W, GI)`; fails unless both self-injective dimensions are at
    /// most `bound`.
    pub fn gorenstein(algebra: &Arc<Algebra>, bound: usize) -> Result<Self> {
        Self::gorenstein_with_margin(algebra, bound, DEFAULT_MARGIN)
    }

    pub fn gorenstein_with_margin(
        algebra: &Arc<Algebra>,
        bound: usize,
        margin: usize,
    ) -> Result<Self> {
        let regular = Module::regular(algebra);
        let regular_op = Module::regular(&algebra.opposite());
        let left = inj_dim(&regular, bound)?;
        let right = inj_dim(&regular_op, bound)?;
        let (Bounded::Finite(l), Bounded::Finite(r)) = (left, right) else {
            return Err(Error::NotGorensteinWithinBound {
                bound,
                left: left.to_string(),
                right: right.to_string(),
            });
        };
        let d = l.max(r);
        Ok(Self::new(
            algebra,
            Box::new(Gorenstein {
                d,
                margin,
                regular,
                regular_op,
            }),
            TripleMeta {
                name: "gorenstein".into(),
                hereditary: true,
                complete: true,
                gorenstein_dim: Some(d),
                membership_bound: bound,
                margin,
            },
        ))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.0.algebra
    }
    pub fn meta(&self) -> &TripleMeta {
        &self.0.meta
    }
    pub fn name(&self) -> &str {
        &self.0.meta.name
    }

    pub fn in_x(&self, m: &Module) -> Result<bool> {
        self.0.classes.in_x(m)
    }
    pub fn in_z(&self, m: &Module) -> Result<bool> {
        self.0.classes.in_z(m)
    }
    pub fn in_y(&self, m: &Module) -> Result<bool> {
        self.0.classes.in_y(m)
    }

    /// The dual triple over the opposite algebra.
    pub fn opposite(&self) -> CotorsionTriple {
        self.0
            .opposite
            .get_or_init(|| {
                let mut meta = self.0.meta.clone();
                meta.name = format!("{}^op", meta.name);
                Self::new(
                    &self.0.algebra.opposite(),
                    Box::new(Opposite(self.0.classes.clone())),
                    meta,
                )
            })
            .clone()
    }

    fn require_complete(&self) -> Result<()> {
        if self.0.meta.complete {
            Ok(())
        } else {
            Err(Error::PreconditionViolation(format!(
                "triple {} is not declared complete",
                self.name()
            )))
        }
    }

    /// Runtime certificate for an approximation sequence.
    pub fn certify(&self, kind: ApproxKind, seq: ShortExactSeq) -> Result<ApproxSeq> {
        seq.verify()
            .map_err(|e| Error::ApproximationFailed(format!("{kind:?}: {e}")))?;
        let (outer, outer_name, inner, inner_name) = match kind {
            ApproxKind::SpecialRightX => (self.in_x(seq.mid())?, "X", self.in_z(seq.sub())?, "Z"),
            ApproxKind::SpecialLeftY => (self.in_y(seq.mid())?, "Y", self.in_z(seq.quot())?, "Z"),
            ApproxKind::SpecialLeftZ => (self.in_z(seq.mid())?, "Z", self.in_x(seq.quot())?, "X"),
            ApproxKind::SpecialRightZ => (self.in_z(seq.mid())?, "Z", self.in_y(seq.sub())?, "Y"),
        };
        if !(outer && inner) {
            return Err(Error::ApproximationFailed(format!(
                "{kind:?} over {}: middle in {outer_name} = {outer}, end term in {inner_name} = {inner}",
                self.name()
            )));
        }
        Ok(ApproxSeq {
            kind,
            seq,
            certified: (outer, inner),
        })
    }

    /// `0 → K → X → M → 0` with `X ∈ X`, `K ∈ Z`.
    pub fn right_x_approx(&self, m: &Module) -> Result<ApproxSeq> {
        self.require_complete()?;
        self.remember(ApproxKind::SpecialRightX, m, || {
            let seq = self.right_x_seq(m, 0)?;
            self.certify(ApproxKind::SpecialRightX, seq)
        })
    }

    fn remember(
        &self,
        kind: ApproxKind,
        m: &Module,
        build: impl FnOnce() -> Result<ApproxSeq>,
    ) -> Result<ApproxSeq> {
        let key = (kind, m.key());
        if let Some(a) = self.0.approximations.lock().expect("cache lock").get(&key) {
            return Ok(a.clone());
        }
        let a = build()?;
        self.0
            .approximations
            .lock()
            .expect("cache lock")
            .insert(key, a.clone());
        Ok(a)
    }

    fn right_x_seq(&self, m: &Module, depth: usize) -> Result<ShortExactSeq> {
        let cover = free_cover(m);
        if self.in_z(cover.sub())? {
            return Ok(cover);
        }
        if self.in_x(m)? {
            return Ok(ShortExactSeq::trivial_right(m));
        }
        if depth >= self.0.meta.membership_bound {
            return Err(Error::ApproximationFailed(format!(
                "no X-syzygy within depth {depth}"
            )));
        }
        // 0 → Y' → G → K → 0 for K = ΩM, then G ↪ P with cokernel in X
        let inner = self.right_x_seq(cover.sub(), depth + 1)?;
        let j = left_projective_approx(inner.mid())?;
        if !j.is_mono() || !self.in_x(&cokernel(&j).module)? {
            return Err(Error::ApproximationFailed(
                "left projective approximation is not a mono with X cokernel".into(),
            ));
        }
        let q = pushout(&inner.right, &j)?;
        let e = pushout(&q.from_first, &cover.left)?;
        let to_m = e.induce(&ModuleMap::zero(&q.module, m), &cover.right)?;
        ShortExactSeq::new(e.from_first.clone(), to_m)
            .map_err(|err| Error::ApproximationFailed(err.to_string()))
    }

    /// `0 → M → Y → Z → 0` with `Y ∈ Y`, `Z ∈ Z`, by duality.
    pub fn left_y_approx(&self, m: &Module) -> Result<ApproxSeq> {
        self.require_complete()?;
        self.remember(ApproxKind::SpecialLeftY, m, || {
            let op = self.opposite();
            let seq = op.right_x_seq(&m.dual(), 0)?.dual();
            self.certify(ApproxKind::SpecialLeftY, seq)
        })
    }

    /// `0 → M → E → X → 0` with `E ∈ Z`, `X ∈ X`.
    pub fn salce_left_z_approx(&self, m: &Module) -> Result<ApproxSeq> {
        self.require_complete()?;
        self.remember(ApproxKind::SpecialLeftZ, m, || self.salce_left_z_uncached(m))
    }

    fn salce_left_z_uncached(&self, m: &Module) -> Result<ApproxSeq> {
        if self.in_z(m)? {
            return self.certify(ApproxKind::SpecialLeftZ, ShortExactSeq::trivial_left(m));
        }
        let emb = injective_embedding(m);
        let approx = self.right_x_approx(emb.quot())?;
        let pb = pullback(&emb.right, &approx.seq.right)?;
        let into = pb.induce(&emb.left, &ModuleMap::zero(m, approx.seq.mid()))?;
        let seq = ShortExactSeq::new(into, pb.to_second.clone())
            .map_err(|err| Error::ApproximationFailed(err.to_string()))?;
        self.certify(ApproxKind::SpecialLeftZ, seq)
    }

    /// `0 → Y → E → M → 0` with `E ∈ Z`, `Y ∈ Y`.
    pub fn salce_right_z_approx(&self, m: &Module) -> Result<ApproxSeq> {
        self.require_complete()?;
        self.remember(ApproxKind::SpecialRightZ, m, || self.salce_right_z_uncached(m))
    }

    fn salce_right_z_uncached(&self, m: &Module) -> Result<ApproxSeq> {
        if self.in_z(m)? {
            return self.certify(ApproxKind::SpecialRightZ, ShortExactSeq::trivial_right(m));
        }
        let cover = free_cover(m);
        let approx = self.left_y_approx(cover.sub())?;
        let po = pushout(&cover.left, &approx.seq.left)?;
        let onto = po.induce(&cover.right, &ModuleMap::zero(approx.seq.mid(), m))?;
        let seq = ShortExactSeq::new(po.from_second.clone(), onto)
            .map_err(|err| Error::ApproximationFailed(err.to_string()))?;
        self.certify(ApproxKind::SpecialRightZ, seq)
    }
}

/// `j : G → ⊕ A·e_{t_j}` built from homogeneous right-module generators
/// `φ·e_t` of `Hom(G, A)`; every map from `G` to a projective factors
/// through it.
pub fn left_projective_approx(g: &Module) -> Result<ModuleMap> {
    let alg = g.algebra();
    let p = g.p();
    let a = Module::regular(alg);
    let h = hom_space(g, &a)?;
    let summands = projective_summands(alg);
    let rows = alg.dim() * g.dim();
    let mut chosen: Vec<(usize, Matrix)> = Vec::new();
    let mut span = Matrix::zeros(p, rows, 0);
    for (t, s) in summands.iter().enumerate() {
        let right_e = alg.right_mul_by(&s.idempotent);
        for b in 0..h.dim() {
            let f = right_e.mul(h.basis_matrix(b));
            let probe = span.hstack(&Matrix::column_vector(p, &f.flatten()));
            if probe.rank() == span.cols() {
                continue;
            }
            let mut cols: Vec<Vec<u32>> = span.columns();
            for i in 0..alg.dim() {
                cols.push(alg.right_mul(i).mul(&f).flatten());
            }
            span = Matrix::from_columns(p, rows, &cols).column_space();
            chosen.push((t, f));
        }
    }
    if chosen.is_empty() {
        return Ok(ModuleMap::zero(g, &Module::zero(alg)));
    }
    let parts: Vec<Module> = chosen.iter().map(|(t, _)| summands[*t].module.clone()).collect();
    let target = direct_sum(&parts).module;
    let mut m = Matrix::zeros(p, 0, g.dim());
    for (t, f) in &chosen {
        // f lands in A·e_t; rewrite it in the summand's basis
        let basis = &summands[*t].basis;
        let coords = basis.left_inverse().expect("independent basis").mul(f);
        m = m.vstack(&coords);
    }
    Ok(ModuleMap::raw(g, &target, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxKind {
    SpecialRightX,
    SpecialLeftY,
    SpecialLeftZ,
    SpecialRightZ,
}

/// A short exact sequence certified as a special approximation.
#[derive(Clone, Debug)]
pub struct ApproxSeq {
    pub kind: ApproxKind,
    pub seq: ShortExactSeq,
    /// Membership of (middle term, end term) in the kind's classes.
    pub certified: (bool, bool),
}

/// `β : M → Y` with `g∘β = α` for `approx = 0 → N → Y → L → 0`.
pub fn lift_through_left_approx(approx: &ApproxSeq, alpha: &ModuleMap) -> Result<Option<ModuleMap>> {
    let g = &approx.seq.right;
    if alpha.target() != g.target() {
        return Err(Error::DimensionMismatch(
            "α must land in the cokernel of the approximation".into(),
        ));
    }
    let m = alpha.source();
    let h = hom_space(m, g.source())?;
    let composites: Vec<Matrix> = (0..h.dim()).map(|s| g.matrix().mul(h.basis_matrix(s))).collect();
    Ok(solve_combination(m.p(), &composites, &alpha.matrix().flatten())?.map(|c| h.combine(&c)))
}

/// `β : X → M` with `β∘g = α` for `approx = 0 → K → X → N → 0`.
pub fn extend_through_right_approx(
    approx: &ApproxSeq,
    alpha: &ModuleMap,
) -> Result<Option<ModuleMap>> {
    let g = &approx.seq.left;
    if alpha.source() != g.source() {
        return Err(Error::DimensionMismatch(
            "α must start at the kernel of the approximation".into(),
        ));
    }
    let m = alpha.target();
    let h = hom_space(g.target(), m)?;
    let composites: Vec<Matrix> = (0..h.dim()).map(|s| h.basis_matrix(s).mul(g.matrix())).collect();
    Ok(solve_combination(m.p(), &composites, &alpha.matrix().flatten())?.map(|c| h.combine(&c)))
}

/// A failing lifting problem: `alpha` does not lift through `approx`.
#[derive(Clone, Debug)]
pub struct LiftFailure {
    pub approx: ApproxSeq,
    pub alpha: ModuleMap,
}

/// Searches Z-candidates `C` for an injective embedding `0 → C → I → L → 0`
/// (a special left Y-approximation) and a map `M → L` that does not lift.
/// Such a witness certifies `M ∉ X`.
pub fn find_lift_failure(
    t: &CotorsionTriple,
    m: &Module,
    candidates: &[Module],
) -> Result<Option<LiftFailure>> {
    for c in candidates {
        if !t.in_z(c)? || ext_dim(m, c, 1)? == 0 {
            continue;
        }
        let Ok(approx) = t.certify(ApproxKind::SpecialLeftY, injective_embedding(c)) else {
            continue;
        };
        for alpha in hom_space(m, approx.seq.quot())?.basis() {
            if lift_through_left_approx(&approx, &alpha)?.is_none() {
                return Ok(Some(LiftFailure { approx, alpha }));
            }
        }
    }
    Ok(None)
}

/// Dual of [`find_lift_failure`]: a free cover `0 → K → F → C → 0` and a
/// map `K → M` that does not extend, certifying `M ∉ Y`.
pub fn find_extension_failure(
    t: &CotorsionTriple,
    m: &Module,
    candidates: &[Module],
) -> Result<Option<LiftFailure>> {
    for c in candidates {
        if !t.in_z(c)? || ext_dim(c, m, 1)? == 0 {
            continue;
        }
        let cover = free_cover(c);
        if !t.in_z(cover.sub())? {
            continue;
        }
        let Ok(approx) = t.certify(ApproxKind::SpecialRightX, cover) else {
            continue;
        };
        for alpha in hom_space(approx.seq.sub(), m)?.basis() {
            if extend_through_right_approx(&approx, &alpha)?.is_none() {
                return Ok(Some(LiftFailure { approx, alpha }));
            }
        }
    }
    Ok(None)
}

/// Declarative class condition for user-supplied triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Condition {
    All,
    Projective,
    Injective,
    PdAtMost { n: usize },
    IdAtMost { n: usize },
    /// `Ext^i(M, T) = 0` (position `first`) or `Ext^i(T, M) = 0`
    /// (position `second`) for `from ≤ i ≤ to`.
    ExtVanishing {
        against: String,
        position: Position,
        from: usize,
        to: usize,
    },
    AllOf { conditions: Vec<Condition> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    First,
    Second,
}

/// A user triple: three conditions plus claimed flags (which the harness
/// tests rather than trusts).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSpec {
    pub name: String,
    #[serde(default = "yes")]
    pub hereditary: bool,
    #[serde(default = "yes")]
    pub complete: bool,
    pub x: Condition,
    pub z: Condition,
    pub y: Condition,
}

fn yes() -> bool {
    true
}

enum Resolved {
    All,
    Projective,
    Injective,
    PdAtMost(usize),
    IdAtMost(usize),
    Ext(Module, Position, usize, usize),
    AllOf(Vec<Resolved>),
}

impl Resolved {
    fn new(c: &Condition, lookup: &dyn Fn(&str) -> Result<Module>) -> Result<Resolved> {
        Ok(match c {
            Condition::All => Resolved::All,
            Condition::Projective => Resolved::Projective,
            Condition::Injective => Resolved::Injective,
            Condition::PdAtMost { n } => Resolved::PdAtMost(*n),
            Condition::IdAtMost { n } => Resolved::IdAtMost(*n),
            Condition::ExtVanishing {
                against,
                position,
                from,
                to,
            } => Resolved::Ext(lookup(against)?, *position, *from, *to),
            Condition::AllOf { conditions } => Resolved::AllOf(
                conditions
                    .iter()
                    .map(|c| Resolved::new(c, lookup))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    fn holds(&self, m: &Module) -> Result<bool> {
        Ok(match self {
            Resolved::All => true,
            Resolved::Projective => is_projective(m)?,
            Resolved::Injective => is_injective(m)?,
            Resolved::PdAtMost(n) => proj_dim(m, *n)?.is_finite(),
            Resolved::IdAtMost(n) => inj_dim(m, *n)?.is_finite(),
            Resolved::Ext(t, pos, from, to) => {
                for i in *from..=*to {
                    let e = match pos {
                        Position::First => ext_dim(m, t, i)?,
                        Position::Second => ext_dim(t, m, i)?,
                    };
                    if e != 0 {
                        return Ok(false);
                    }
                }
                true
            }
            Resolved::AllOf(cs) => {
                for c in cs {
                    if !c.holds(m)? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }
}

struct Declarative {
    x: Resolved,
    z: Resolved,
    y: Resolved,
}

impl Classes for Declarative {
    fn in_x(&self, m: &Module) -> Result<bool> {
        self.x.holds(m)
    }
    fn in_z(&self, m: &Module) -> Result<bool> {
        self.z.holds(m)
    }
    fn in_y(&self, m: &Module) -> Result<bool> {
        self.y.holds(m)
    }
}

impl CotorsionTriple {
    /// Builds a user triple; `lookup` resolves module names used in
    /// Ext-vanishing conditions.
    pub fn from_spec(
        algebra: &Arc<Algebra>,
        spec: &TripleSpec,
        lookup: &dyn Fn(&str) -> Result<Module>,
        bound: usize,
    ) -> Result<Self> {
        let classes = Declarative {
            x: Resolved::new(&spec.x, lookup)?,
            z: Resolved::new(&spec.z, lookup)?,
            y: Resolved::new(&spec.y, lookup)?,
        };
        Ok(Self::new(
            algebra,
            Box::new(classes),
            TripleMeta {
                name: spec.name.clone(),
                hereditary: spec.hereditary,
                complete: spec.complete,
                gorenstein_dim: None,
                membership_bound: bound,
                margin: 0,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    fn k_a1(p: u32) -> Module {
        let a1 = builtin("A1", p).unwrap();
        Module::new(&a1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    #[test]
    fn trivial_memberships_over_a1() {
        let k = k_a1(2);
        let t = CotorsionTriple::trivial(k.algebra());
        assert!(!t.in_x(&k).unwrap());
        assert!(t.in_z(&k).unwrap());
        let a = Module::regular(k.algebra());
        assert!(t.in_x(&a).unwrap());
        assert!(t.in_y(&a.dual().dual()).unwrap());
        let approx = t.right_x_approx(&k).unwrap();
        assert_eq!(approx.seq, free_cover(&k));
    }

    #[test]
    fn gorenstein_dims() {
        let a1 = builtin("A1", 2).unwrap();
        let t1 = CotorsionTriple::gorenstein(&a1, 10).unwrap();
        assert_eq!(t1.meta().gorenstein_dim, Some(0));
        assert!(t1.in_x(&k_a1(2)).unwrap());
        assert!(!t1.in_z(&k_a1(2)).unwrap());
        let a2 = builtin("A2", 2).unwrap();
        let t2 = CotorsionTriple::gorenstein(&a2, 10).unwrap();
        assert_eq!(t2.meta().gorenstein_dim, Some(1));
        let a3 = builtin("A3", 2).unwrap();
        let t3 = CotorsionTriple::gorenstein(&a3, 10).unwrap();
        assert_eq!(t3.meta().gorenstein_dim, Some(1));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn not_gorenstein_rejected() {
        // k[x,y]/(x,y)^2 has infinite self-injective dimension
        let mut mul = vec![vec![vec![0u32; 3]; 3]; 3];
        for i in 0..3 {
            mul[0][i][i] = 1;
            mul[i][0][i] = 1;
        }
        let alg = Algebra::check(2, vec!["1".into(), "x".into(), "y".into()], mul, vec![1, 0, 0])
            .unwrap();
        let err = CotorsionTriple::gorenstein(&alg, 4).unwrap_err();
        assert!(matches!(err, Error::NotGorensteinWithinBound { bound: 4, .. }), "{err:?}");
    }

    #[test]
    fn gorenstein_a1_approx_is_identity() {
        let k = k_a1(3);
        let t = CotorsionTriple::gorenstein(k.algebra(), 10).unwrap();
        let approx = t.right_x_approx(&k).unwrap();
        assert!(approx.seq.sub().is_zero());
        let left = t.left_y_approx(&k).unwrap();
        assert!(left.seq.quot().is_zero());
    }

    #[test]
    fn a3_simple_approximations_certify() {
        let a3 = builtin("A3", 2).unwrap();
        let t = CotorsionTriple::gorenstein(&a3, 10).unwrap();
        let a = Module::regular(&a3);
        // simples: kill every basis vector except E11⊗1, resp. E22⊗1
        let simple = |keep: usize| {
            let cols: Vec<Vec<u32>> = (0..6)
                .filter(|&i| i != keep)
                .map(|i| (0..6).map(|r| u32::from(r == i)).collect())
                .collect();
            crate::module::quotient(&a, &Matrix::from_columns(2, 6, &cols)).unwrap().module
        };
        let mut mods = vec![simple(0), simple(4)];
        mods.push(a.dual().dual());
        mods.push(free_cover(&simple(0)).sub().clone());
        for m in &mods {
            let r = t.right_x_approx(m).unwrap();
            assert!(proj_dim(r.seq.sub(), 1).unwrap().is_finite());
            t.left_y_approx(m).unwrap();
            let lz = t.salce_left_z_approx(m).unwrap();
            assert!(proj_dim(lz.seq.mid(), 1).unwrap().is_finite());
            t.salce_right_z_approx(m).unwrap();
        }
    }

    #[test]
    fn socle_lift_witness_over_a1() {
        let k = k_a1(2);
        let t = CotorsionTriple::trivial(k.algebra());
        let w = find_lift_failure(&t, &k, std::slice::from_ref(&k)).unwrap().unwrap();
        assert_eq!(w.approx.seq.mid().dim(), 2);
        let w = find_extension_failure(&t, &k, std::slice::from_ref(&k)).unwrap().unwrap();
        assert_eq!(w.approx.seq.mid().dim(), 2);
    }

    #[test]
    fn projective_always_lifts() {
        let k = k_a1(3);
        let t = CotorsionTriple::trivial(k.algebra());
        let a = Module::regular(k.algebra());
        let approx = t.left_y_approx(&k).unwrap();
        for alpha in hom_space(&a, approx.seq.quot()).unwrap().basis() {
            assert!(lift_through_left_approx(&approx, &alpha).unwrap().is_some());
        }
        let zero = ModuleMap::zero(&k, approx.seq.quot());
        assert!(lift_through_left_approx(&approx, &zero).unwrap().unwrap().is_zero());
    }

    #[test]
    fn opposite_triple_dualizes_classes() {
        let a3 = builtin("A3", 2).unwrap();
        let t = CotorsionTriple::gorenstein(&a3, 10).unwrap();
        let op = t.opposite();
        let a = Module::regular(&a3);
        let s = direct_sum(&[a.clone(), free_cover(&a.dual().dual()).sub().clone()]).module;
        for m in [a, s] {
            assert_eq!(op.in_y(&m.dual()).unwrap(), t.in_x(&m).unwrap());
            assert_eq!(op.in_z(&m.dual()).unwrap(), t.in_z(&m).unwrap());
        }
    }

    #[test]
    fn declarative_triple_matches_trivial() {
        let a2 = builtin("A2", 2).unwrap();
        let spec: TripleSpec = serde_json::from_str(
            r#"{"name":"proj","x":{"kind":"projective"},"z":{"kind":"all"},
                "y":{"kind":"ext_vanishing","against":"A","position":"second","from":1,"to":0}}"#,
        )
        .unwrap();
        let reg = Module::regular(&a2);
        let lookup = |name: &str| {
            if name == "A" {
                Ok(reg.clone())
            } else {
                Err(Error::UnknownModuleName(name.into()))
            }
        };
        let t = CotorsionTriple::from_spec(&a2, &spec, &lookup, 10).unwrap();
        assert!(t.in_x(&reg).unwrap());
        assert!(t.right_x_approx(&reg.dual().dual()).is_ok());
    }
}
