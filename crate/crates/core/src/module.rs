//! Finite-dimensional left modules, module maps and the basic
//! constructions on them (kernels, cokernels, sums, pushouts, pullbacks,
//! duals, free covers, Hom spaces).

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{complement_indices, Matrix};

struct ModuleData {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

/// A left module given by the matrices `ρ(e_i)` of the basis elements.
///
/// Cloning is cheap. Equality is structural: same algebra, same dimension
/// and identical action matrices.
#[derive(Clone)]
pub struct Module(Arc<ModuleData>);

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dim {})", self.dim())
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.dim() == other.dim()
                && *self.0.algebra == *other.0.algebra
                && self.0.action == other.0.action)
    }
}
impl Eq for Module {}

impl Module {
    /// Builds a module after checking the unit and multiplication laws.
    pub fn new(algebra: &Arc<Algebra>, action: Vec<Matrix>) -> Result<Module> {
        let dim = action.first().map_or(0, |m| m.rows());
        let m = Module(Arc::new(ModuleData {
            algebra: algebra.clone(),
            dim,
            action,
        }));
        m.validate()?;
        Ok(m)
    }

    /// The caller guarantees the module axioms; checked in debug builds.
    pub(crate) fn from_action(algebra: &Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Module {
        let m = Module(Arc::new(ModuleData {
            algebra: algebra.clone(),
            dim,
            action,
        }));
        debug_assert!(m.validate().is_ok(), "{:?}", m.validate());
        m
    }

    fn validate(&self) -> Result<()> {
        let a = &self.0.algebra;
        let (n, d, p) = (a.dim(), self.dim(), a.p());
        if self.0.action.len() != n {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {n}",
                self.0.action.len()
            )));
        }
        if self.0.action.iter().any(|m| m.rows() != d || m.cols() != d || m.p() != p) {
            return Err(Error::InvalidModule("action matrices must be square of one size".into()));
        }
        if self.act(a.unit()) != Matrix::identity(p, d) {
            return Err(Error::InvalidModule("unit does not act as the identity".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.0.action[i].mul(&self.0.action[j]);
                let prod: Vec<u32> = (0..n).map(|k| a.c(i, j, k)).collect();
                if lhs != self.act(&prod) {
                    return Err(Error::InvalidModule(format!(
                        "ρ(e{i})ρ(e{j}) differs from ρ(e{i}·e{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Module {
        let p = algebra.p();
        Module::from_action(algebra, 0, vec![Matrix::zeros(p, 0, 0); algebra.dim()])
    }

    /// The algebra as a left module over itself.
    pub fn regular(algebra: &Arc<Algebra>) -> Module {
        Self::free(algebra, 1)
    }

    /// `A^g`; the basis of copy `j` occupies indices `j·dim A ..`.
    pub fn free(algebra: &Arc<Algebra>, g: usize) -> Module {
        let n = algebra.dim();
        let action = (0..n)
            .map(|i| {
                let l = algebra.left_mul(i);
                let mut m = Matrix::zeros(algebra.p(), g * n, g * n);
                for j in 0..g {
                    m.paste(j * n, j * n, l);
                }
                m
            })
            .collect();
        Module::from_action(algebra, g * n, action)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.0.algebra
    }
    pub fn dim(&self) -> usize {
        self.0.dim
    }
    pub fn p(&self) -> u32 {
        self.0.algebra.p()
    }
    pub fn is_zero(&self) -> bool {
        self.0.dim == 0
    }
    pub fn action(&self, i: usize) -> &Matrix {
        &self.0.action[i]
    }
    pub fn actions(&self) -> &[Matrix] {
        &self.0.action
    }

    /// `ρ(a)` for an algebra element in coordinates.
    pub fn act(&self, a: &[u32]) -> Matrix {
        let p = self.p();
        let d = self.dim();
        let mut acc = vec![0u64; d * d];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &e) in acc.iter_mut().zip(self.0.action[i].data()) {
                *o = (*o + c as u64 * e as u64) % p as u64;
            }
        }
        Matrix::from_vec(p, d, d, acc.into_iter().map(|x| x as u32).collect())
            .expect("sizes agree")
    }

    /// Cache key: dimension followed by the action data.
    pub(crate) fn key(&self) -> Vec<u32> {
        let mut k = vec![self.dim() as u32];
        for m in &self.0.action {
            k.extend_from_slice(m.data());
        }
        k
    }

    /// `Hom_k(M, k)` as a left module over the opposite algebra.
    pub fn dual(&self) -> Module {
        let op = self.algebra().opposite();
        let action = self.0.action.iter().map(Matrix::transpose).collect();
        Module::from_action(&op, self.dim(), action)
    }

    /// The submodule `A·v_1 + … + A·v_r` as a column basis.
    pub fn span_of(&self, vectors: &[Vec<u32>]) -> Matrix {
        let mut cols = Vec::new();
        for v in vectors {
            for m in &self.0.action {
                cols.push(m.mul_vec(v));
            }
        }
        Matrix::from_columns(self.p(), self.dim(), &cols).column_space()
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        direct_sum(&[self.clone(), other.clone()]).module
    }

    /// Whether the column span of `basis` is stable under the action.
    pub fn is_submodule(&self, basis: &Matrix) -> bool {
        let r = basis.rank();
        self.0
            .action
            .iter()
            .all(|m| basis.hstack(&m.mul(basis)).rank() == r)
    }
}

fn same_algebra(a: &Module, b: &Module) -> Result<()> {
    if Arc::ptr_eq(a.algebra(), b.algebra()) || **a.algebra() == **b.algebra() {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

/// An `A`-linear map; `matrix` is `dim target × dim source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: Module,
    target: Module,
    matrix: Matrix,
}

impl ModuleMap {
    /// Checks shapes and `f·ρ_M(e_i) = ρ_N(e_i)·f` for every basis element.
    pub fn new(source: &Module, target: &Module, matrix: Matrix) -> Result<ModuleMap> {
        same_algebra(source, target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} matrix for a map from dimension {} to {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        let f = ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
        };
        if !f.is_linear() {
            return Err(Error::InvalidModule("matrix does not commute with the action".into()));
        }
        Ok(f)
    }

    /// The caller guarantees linearity; checked in debug builds.
    pub(crate) fn raw(source: &Module, target: &Module, matrix: Matrix) -> ModuleMap {
        debug_assert_eq!(matrix.rows(), target.dim());
        debug_assert_eq!(matrix.cols(), source.dim());
        let f = ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
        };
        debug_assert!(f.is_linear(), "non-linear map constructed internally");
        f
    }

    fn is_linear(&self) -> bool {
        self.source
            .actions()
            .iter()
            .zip(self.target.actions())
            .all(|(a, b)| self.matrix.mul(a) == b.mul(&self.matrix))
    }

    pub fn identity(m: &Module) -> ModuleMap {
        Self::raw(m, m, Matrix::identity(m.p(), m.dim()))
    }
    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        Self::raw(source, target, Matrix::zeros(source.p(), target.dim(), source.dim()))
    }

    pub fn source(&self) -> &Module {
        &self.source
    }
    pub fn target(&self) -> &Module {
        &self.target
    }
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        assert_eq!(first.target.dim(), self.source.dim(), "maps are not composable");
        Self::raw(&first.source, &self.target, self.matrix.mul(&first.matrix))
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        Self::raw(&self.source, &self.target, self.matrix.add(&other.matrix))
    }
    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        Self::raw(&self.source, &self.target, self.matrix.sub(&other.matrix))
    }
    pub fn neg(&self) -> ModuleMap {
        Self::raw(&self.source, &self.target, self.matrix.neg())
    }
    pub fn scale(&self, s: u32) -> ModuleMap {
        Self::raw(&self.source, &self.target, self.matrix.scale(s))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
    pub fn is_mono(&self) -> bool {
        self.rank() == self.source.dim()
    }
    pub fn is_epi(&self) -> bool {
        self.rank() == self.target.dim()
    }
    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim() && self.is_mono()
    }
    pub fn inverse(&self) -> Option<ModuleMap> {
        let inv = self.matrix.inverse()?;
        Some(Self::raw(&self.target, &self.source, inv))
    }

    /// `D(f) : D(N) → D(M)` over the opposite algebra.
    pub fn dual(&self) -> ModuleMap {
        Self::raw(&self.target.dual(), &self.source.dual(), self.matrix.transpose())
    }
}

/// A subobject `S ⊆ M` (kernel, image, generated submodule).
#[derive(Clone, Debug)]
pub struct Subobject {
    pub module: Module,
    pub inclusion: ModuleMap,
    left_inverse: Matrix,
}

pub type Kernel = Subobject;

impl Subobject {
    /// `basis` must have independent columns spanning a submodule.
    fn from_basis(ambient: &Module, basis: Matrix) -> Subobject {
        let p = ambient.p();
        let left_inverse = if basis.cols() == 0 {
            Matrix::zeros(p, 0, ambient.dim())
        } else {
            basis.left_inverse().expect("independent columns")
        };
        let action = ambient
            .actions()
            .iter()
            .map(|m| left_inverse.mul(&m.mul(&basis)))
            .collect();
        let module = Module::from_action(ambient.algebra(), basis.cols(), action);
        let inclusion = ModuleMap::raw(&module, ambient, basis);
        Subobject {
            module,
            inclusion,
            left_inverse,
        }
    }

    /// Factors `h : T → M` through the subobject.
    pub fn lift(&self, h: &ModuleMap) -> Result<ModuleMap> {
        let m = self.left_inverse.mul(h.matrix());
        if self.inclusion.matrix().mul(&m) != *h.matrix() {
            return Err(Error::PreconditionViolation(
                "map does not land in the subobject".into(),
            ));
        }
        Ok(ModuleMap::raw(h.source(), &self.module, m))
    }

    /// Coordinates of an ambient vector known to lie in the subobject.
    pub fn coordinates(&self, v: &[u32]) -> Vec<u32> {
        self.left_inverse.mul_vec(v)
    }
}

/// A quotient `M → M/S` (cokernel, coimage).
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: Module,
    pub projection: ModuleMap,
    section: Matrix,
    killed: Matrix,
}

pub type Cokernel = Quotient;

impl Quotient {
    /// `killed` must have independent columns spanning a submodule.
    fn from_basis(ambient: &Module, killed: Matrix) -> Quotient {
        let p = ambient.p();
        let n = ambient.dim();
        let comp = complement_indices(&killed);
        let section = Matrix::identity(p, n).select_columns(&comp);
        let full = killed.hstack(&section);
        let inv = full.inverse().expect("basis plus complement is invertible");
        let proj = inv.submatrix(killed.cols(), 0, comp.len(), n);
        let action = ambient
            .actions()
            .iter()
            .map(|m| proj.mul(&m.mul(&section)))
            .collect();
        let module = Module::from_action(ambient.algebra(), comp.len(), action);
        let projection = ModuleMap::raw(ambient, &module, proj);
        Quotient {
            module,
            projection,
            section,
            killed,
        }
    }

    /// Factors `h : M → T` vanishing on the killed submodule.
    pub fn factor(&self, h: &ModuleMap) -> Result<ModuleMap> {
        if !h.matrix().mul(&self.killed).is_zero() {
            return Err(Error::PreconditionViolation(
                "map does not vanish on the kernel of the projection".into(),
            ));
        }
        Ok(ModuleMap::raw(&self.module, h.target(), h.matrix().mul(&self.section)))
    }

    /// A k-linear right inverse of the projection.
    pub fn section(&self) -> &Matrix {
        &self.section
    }
}

/// The submodule spanned by the columns of `basis`.
pub fn submodule(m: &Module, basis: &Matrix) -> Result<Subobject> {
    let b = basis.column_space();
    if !m.is_submodule(&b) {
        return Err(Error::InvalidModule("span is not closed under the action".into()));
    }
    Ok(Subobject::from_basis(m, b))
}

pub fn submodule_generated(m: &Module, vectors: &[Vec<u32>]) -> Subobject {
    Subobject::from_basis(m, m.span_of(vectors))
}

/// `M / S` for the submodule spanned by the columns of `basis`.
pub fn quotient(m: &Module, basis: &Matrix) -> Result<Quotient> {
    let b = basis.column_space();
    if !m.is_submodule(&b) {
        return Err(Error::InvalidModule("span is not closed under the action".into()));
    }
    Ok(Quotient::from_basis(m, b))
}

pub fn kernel(f: &ModuleMap) -> Kernel {
    Subobject::from_basis(f.source(), f.matrix().kernel_matrix())
}

pub fn image(f: &ModuleMap) -> Subobject {
    Subobject::from_basis(f.target(), f.matrix().column_space())
}

pub fn cokernel(f: &ModuleMap) -> Cokernel {
    Quotient::from_basis(f.target(), f.matrix().column_space())
}

/// `M_1 ⊕ … ⊕ M_r` with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

impl DirectSum {
    /// The map `⊕ M_j → T` with components `maps[j]`.
    pub fn copair(&self, maps: &[ModuleMap]) -> ModuleMap {
        let target = maps[0].target().clone();
        let mut m = Matrix::zeros(self.module.p(), target.dim(), 0);
        for f in maps {
            m = m.hstack(f.matrix());
        }
        ModuleMap::raw(&self.module, &target, m)
    }

    /// The map `T → ⊕ M_j` with components `maps[j]`.
    pub fn pair(&self, maps: &[ModuleMap]) -> ModuleMap {
        let source = maps[0].source().clone();
        let mut m = Matrix::zeros(self.module.p(), 0, source.dim());
        for f in maps {
            m = m.vstack(f.matrix());
        }
        ModuleMap::raw(&source, &self.module, m)
    }
}

pub fn direct_sum(parts: &[Module]) -> DirectSum {
    assert!(!parts.is_empty(), "direct sum of no modules");
    let alg = parts[0].algebra();
    let p = alg.p();
    let total: usize = parts.iter().map(Module::dim).sum();
    let action = (0..alg.dim())
        .map(|i| {
            let mut m = Matrix::zeros(p, total, total);
            let mut off = 0;
            for part in parts {
                m.paste(off, off, part.action(i));
                off += part.dim();
            }
            m
        })
        .collect();
    let module = Module::from_action(alg, total, action);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut off = 0;
    for part in parts {
        let mut inj = Matrix::zeros(p, total, part.dim());
        inj.paste(off, 0, &Matrix::identity(p, part.dim()));
        projections.push(ModuleMap::raw(&module, part, inj.transpose()));
        injections.push(ModuleMap::raw(part, &module, inj));
        off += part.dim();
    }
    DirectSum {
        module,
        injections,
        projections,
    }
}

/// `f ⊕ g : M ⊕ M' → N ⊕ N'`.
pub fn map_sum(f: &ModuleMap, g: &ModuleMap) -> ModuleMap {
    let s = direct_sum(&[f.source().clone(), g.source().clone()]);
    let t = direct_sum(&[f.target().clone(), g.target().clone()]);
    ModuleMap::raw(&s.module, &t.module, f.matrix().block_diag(g.matrix()))
}

/// Pushout of `f : K → B` and `g : K → C`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: Module,
    pub from_first: ModuleMap,
    pub from_second: ModuleMap,
    sum: DirectSum,
    quotient: Quotient,
}

impl Pushout {
    /// The map out of the pushout induced by `u : B → T`, `v : C → T`.
    pub fn induce(&self, u: &ModuleMap, v: &ModuleMap) -> Result<ModuleMap> {
        self.quotient.factor(&self.sum.copair(&[u.clone(), v.clone()]))
    }
}

pub fn pushout(f: &ModuleMap, g: &ModuleMap) -> Result<Pushout> {
    if f.source() != g.source() {
        return Err(Error::PreconditionViolation("pushout legs need a common source".into()));
    }
    let sum = direct_sum(&[f.target().clone(), g.target().clone()]);
    let diff = sum.pair(&[f.clone(), g.neg()]);
    let quotient = cokernel(&diff);
    let from_first = quotient.projection.compose(&sum.injections[0]);
    let from_second = quotient.projection.compose(&sum.injections[1]);
    Ok(Pushout {
        module: quotient.module.clone(),
        from_first,
        from_second,
        sum,
        quotient,
    })
}

/// Pullback of `f : B → L` and `g : C → L`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub module: Module,
    pub to_first: ModuleMap,
    pub to_second: ModuleMap,
    sum: DirectSum,
    sub: Subobject,
}

impl Pullback {
    /// The map into the pullback induced by `u : T → B`, `v : T → C`.
    pub fn induce(&self, u: &ModuleMap, v: &ModuleMap) -> Result<ModuleMap> {
        self.sub.lift(&self.sum.pair(&[u.clone(), v.clone()]))
    }
}

pub fn pullback(f: &ModuleMap, g: &ModuleMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::PreconditionViolation("pullback legs need a common target".into()));
    }
    let sum = direct_sum(&[f.source().clone(), g.source().clone()]);
    let diff = sum.copair(&[f.clone(), g.neg()]);
    let sub = kernel(&diff);
    let to_first = sum.projections[0].compose(&sub.inclusion);
    let to_second = sum.projections[1].compose(&sub.inclusion);
    Ok(Pullback {
        module: sub.module.clone(),
        to_first,
        to_second,
        sum,
        sub,
    })
}

/// `0 → K → E → M → 0`, stored as its two maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSeq {
    pub left: ModuleMap,
    pub right: ModuleMap,
}

impl ShortExactSeq {
    /// Checks injectivity, surjectivity and exactness in the middle.
    pub fn new(left: ModuleMap, right: ModuleMap) -> Result<ShortExactSeq> {
        let s = ShortExactSeq { left, right };
        s.verify()?;
        Ok(s)
    }

    pub(crate) fn raw(left: ModuleMap, right: ModuleMap) -> ShortExactSeq {
        let s = ShortExactSeq { left, right };
        debug_assert!(s.verify().is_ok(), "{:?}", s.verify());
        s
    }

    pub fn verify(&self) -> Result<()> {
        if self.left.target() != self.right.source() {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        if !self.left.is_mono() {
            return Err(Error::PropertyViolation("left map is not injective".into()));
        }
        if !self.right.is_epi() {
            return Err(Error::PropertyViolation("right map is not surjective".into()));
        }
        if !self.right.compose(&self.left).is_zero()
            || self.sub().dim() + self.quot().dim() != self.mid().dim()
        {
            return Err(Error::PropertyViolation("not exact in the middle".into()));
        }
        Ok(())
    }

    pub fn sub(&self) -> &Module {
        self.left.source()
    }
    pub fn mid(&self) -> &Module {
        self.left.target()
    }
    pub fn quot(&self) -> &Module {
        self.right.target()
    }

    /// `0 → D M → D E → D K → 0` over the opposite algebra.
    pub fn dual(&self) -> ShortExactSeq {
        ShortExactSeq::raw(self.right.dual(), self.left.dual())
    }

    /// `0 → K → K ⊕ M → M → 0`.
    pub fn split(k: &Module, m: &Module) -> ShortExactSeq {
        let s = direct_sum(&[k.clone(), m.clone()]);
        ShortExactSeq::raw(s.injections[0].clone(), s.projections[1].clone())
    }

    /// `0 → 0 → M → M → 0`.
    pub fn trivial_right(m: &Module) -> ShortExactSeq {
        let z = Module::zero(m.algebra());
        ShortExactSeq::raw(ModuleMap::zero(&z, m), ModuleMap::identity(m))
    }

    /// `0 → M → M → 0 → 0`.
    pub fn trivial_left(m: &Module) -> ShortExactSeq {
        let z = Module::zero(m.algebra());
        ShortExactSeq::raw(ModuleMap::identity(m), ModuleMap::zero(m, &z))
    }
}

/// The summand `A·e` of the regular module for an idempotent `e`.
#[derive(Clone, Debug)]
pub struct ProjectiveSummand {
    pub idempotent: Vec<u32>,
    /// Basis of `A·e` as vectors of `A` (columns).
    pub basis: Matrix,
    pub module: Module,
    /// Coordinates of `e` in `basis`.
    pub top: Vec<u32>,
}

/// `A·e_t` for the algebra's idempotents (just `A` when none are declared).
pub fn projective_summands(alg: &Arc<Algebra>) -> Vec<ProjectiveSummand> {
    let regular = Module::regular(alg);
    alg.summand_idempotents()
        .into_iter()
        .map(|e| {
            let sub = submodule_generated(&regular, std::slice::from_ref(&e));
            let top = sub.coordinates(&e);
            ProjectiveSummand {
                idempotent: e,
                basis: sub.inclusion.matrix().clone(),
                module: sub.module,
                top,
            }
        })
        .collect()
}

/// A projective cover `0 → K → ⊕ A·e_{t_j} → M → 0` with its generators.
#[derive(Debug)]
pub struct Presentation {
    /// `(t_j, v_j)`: summand index and `v_j = π(e_{t_j}) ∈ e_{t_j} M`.
    pub generators: Vec<(usize, Vec<u32>)>,
    pub summands: Vec<ProjectiveSummand>,
    pub seq: ShortExactSeq,
    pub kernel: Kernel,
    /// k-linear right inverse of the cover map.
    pub section: Matrix,
}

impl Presentation {
    /// Offsets of the generator blocks inside the cover.
    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.generators.len());
        let mut acc = 0;
        for (t, _) in &self.generators {
            off.push(acc);
            acc += self.summands[*t].module.dim();
        }
        off
    }
}

fn generates(m: &Module, vs: &[(usize, Vec<u32>)]) -> bool {
    let plain: Vec<Vec<u32>> = vs.iter().map(|(_, v)| v.clone()).collect();
    m.span_of(&plain).cols() == m.dim()
}

/// An irredundant generating set of homogeneous elements `v ∈ e_t M`. By
/// Nakayama this is minimal when the idempotents are primitive and the
/// algebra is basic. With a single idempotent, pairs are also merged
/// greedily.
fn choose_generators(m: &Module, summands: &[ProjectiveSummand]) -> Vec<(usize, Vec<u32>)> {
    let d = m.dim();
    let p = m.p();
    let mut gens: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut span = Matrix::zeros(p, d, 0);
    'search: for (t, s) in summands.iter().enumerate() {
        let part = m.act(&s.idempotent).column_space();
        for v in part.columns() {
            if span.hstack(&Matrix::column_vector(p, &v)).rank() > span.cols() {
                gens.push((t, v));
                let plain: Vec<Vec<u32>> = gens.iter().map(|(_, v)| v.clone()).collect();
                span = m.span_of(&plain);
                if span.cols() == d {
                    break 'search;
                }
            }
        }
    }
    let mut i = 0;
    while i < gens.len() {
        let mut rest = gens.clone();
        rest.remove(i);
        if generates(m, &rest) {
            gens = rest;
        } else {
            i += 1;
        }
    }
    if summands.len() > 1 {
        return gens;
    }
    let mut merged = true;
    while merged && gens.len() > 1 {
        merged = false;
        'outer: for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let sum: Vec<u32> = gens[i]
                    .1
                    .iter()
                    .zip(&gens[j].1)
                    .map(|(a, b)| (a + b) % p)
                    .collect();
                let mut cand: Vec<(usize, Vec<u32>)> = gens
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != i && t != j)
                    .map(|(_, g)| g.clone())
                    .collect();
                cand.insert(0, (0, sum));
                if generates(m, &cand) {
                    gens = cand;
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    gens
}

fn build_presentation(m: &Module) -> Presentation {
    let alg = m.algebra();
    let summands = projective_summands(alg);
    let gens = choose_generators(m, &summands);
    let parts: Vec<Module> = gens.iter().map(|(t, _)| summands[*t].module.clone()).collect();
    let cover_module = if parts.is_empty() {
        Module::zero(alg)
    } else {
        direct_sum(&parts).module
    };
    let mut cols = Vec::with_capacity(cover_module.dim());
    for (t, v) in &gens {
        for b in summands[*t].basis.columns() {
            cols.push(m.act(&b).mul_vec(v));
        }
    }
    let pi = Matrix::from_columns(m.p(), m.dim(), &cols);
    let section = if m.dim() == 0 {
        Matrix::zeros(m.p(), cover_module.dim(), 0)
    } else {
        pi.right_inverse().expect("cover map is onto")
    };
    let cover = ModuleMap::raw(&cover_module, m, pi);
    let kernel = self::kernel(&cover);
    let seq = ShortExactSeq::raw(kernel.inclusion.clone(), cover);
    Presentation {
        generators: gens,
        summands,
        seq,
        kernel,
        section,
    }
}

/// The (cached) projective cover `0 → K → P → M → 0` of `M`.
pub fn presentation(m: &Module) -> Arc<Presentation> {
    let alg = m.algebra();
    let key = m.key();
    if let Some(p) = alg.presentations.lock().expect("cache lock").get(&key) {
        return p.clone();
    }
    let pres = Arc::new(build_presentation(m));
    alg.presentations
        .lock()
        .expect("cache lock")
        .entry(key)
        .or_insert(pres)
        .clone()
}

/// `0 → ΩM → P → M → 0` with `P` a sum of the summands `A·e_t`.
pub fn free_cover(m: &Module) -> ShortExactSeq {
    presentation(m).seq.clone()
}

/// The first syzygy `ΩM`, kernel of the free cover.
pub fn syzygy(m: &Module) -> Module {
    presentation(m).kernel.module.clone()
}

/// A basis of `Hom_A(M, N)` with coordinate extraction.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    basis: Vec<Matrix>,
    // images of the generators of the source, stacked, one column per basis map
    values: Matrix,
    values_inv: Matrix,
    generators: Vec<Vec<u32>>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn source(&self) -> &Module {
        &self.source
    }
    pub fn target(&self) -> &Module {
        &self.target
    }
    pub fn basis(&self) -> Vec<ModuleMap> {
        self.basis
            .iter()
            .map(|m| ModuleMap::raw(&self.source, &self.target, m.clone()))
            .collect()
    }
    pub fn basis_matrix(&self, s: usize) -> &Matrix {
        &self.basis[s]
    }

    pub fn combine(&self, coeffs: &[u32]) -> ModuleMap {
        let p = self.source.p();
        let mut m = Matrix::zeros(p, self.target.dim(), self.source.dim());
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                m = m.add(&b.scale(c));
            }
        }
        ModuleMap::raw(&self.source, &self.target, m)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ModuleMap {
        let p = self.source.p();
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| rng.gen_range(0..p)).collect();
        self.combine(&coeffs)
    }

    /// Coordinates of a module map in this basis.
    pub fn coords(&self, f: &Matrix) -> Vec<u32> {
        let mut stacked = Vec::new();
        for v in &self.generators {
            stacked.extend(f.mul_vec(v));
        }
        self.values_inv.mul_vec(&stacked)
    }

    /// Flattened basis maps as the columns of one matrix.
    pub fn flat(&self) -> Matrix {
        let rows = self.source.dim() * self.target.dim();
        let cols: Vec<Vec<u32>> = self.basis.iter().map(Matrix::flatten).collect();
        Matrix::from_columns(self.source.p(), rows, &cols)
    }

    /// Coordinates map of `post ∘ (−)` from this space into `into`.
    pub fn postcompose_matrix(&self, post: &Matrix, into: &HomSpace) -> Matrix {
        let cols: Vec<Vec<u32>> = self.basis.iter().map(|b| into.coords(&post.mul(b))).collect();
        Matrix::from_columns(self.source.p(), into.dim(), &cols)
    }

    /// Coordinates map of `(−) ∘ pre` from this space into `into`.
    pub fn precompose_matrix(&self, pre: &Matrix, into: &HomSpace) -> Matrix {
        let cols: Vec<Vec<u32>> = self.basis.iter().map(|b| into.coords(&b.mul(pre))).collect();
        Matrix::from_columns(self.source.p(), into.dim(), &cols)
    }

    pub fn values_matrix(&self) -> &Matrix {
        &self.values
    }
}

/// `Hom_A(M, N)` computed from the presentation of `M`: a map is a choice
/// of images `w_j ∈ e_{t_j} N` of the generators killed by every relation.
pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace> {
    same_algebra(m, n)?;
    let p = m.p();
    let pres = presentation(m);
    let g = pres.generators.len();
    let dn = n.dim();
    let offsets = pres.offsets();
    // ρ_N of every basis vector of every summand in use
    let mut rho: Vec<Option<Vec<Matrix>>> = vec![None; pres.summands.len()];
    for (t, _) in &pres.generators {
        if rho[*t].is_none() {
            let b = &pres.summands[*t].basis;
            rho[*t] = Some(b.columns().iter().map(|c| n.act(c)).collect());
        }
    }
    let rho_of = |t: usize| rho[t].as_ref().expect("filled above");
    let relations = pres.kernel.inclusion.matrix();
    let mut blocks: Vec<Matrix> = Vec::new();
    for (j, (t, _)) in pres.generators.iter().enumerate() {
        let e = &pres.summands[*t].idempotent;
        if e != m.algebra().unit() {
            let mut c = Matrix::zeros(p, dn, g * dn);
            let proj = n.act(e);
            c.paste(0, j * dn, &Matrix::identity(p, dn).sub(&proj));
            blocks.push(c);
        }
    }
    for r in 0..relations.cols() {
        let x = relations.column(r);
        let mut c = Matrix::zeros(p, dn, g * dn);
        for (j, (t, _)) in pres.generators.iter().enumerate() {
            let mut acc = Matrix::zeros(p, dn, dn);
            for (k, rk) in rho_of(*t).iter().enumerate() {
                let coef = x[offsets[j] + k];
                if coef != 0 {
                    acc = acc.add(&rk.scale(coef));
                }
            }
            c.paste(0, j * dn, &acc);
        }
        blocks.push(c);
    }
    let mut constraints = Matrix::zeros(p, 0, g * dn);
    for b in &blocks {
        constraints = constraints.vstack(b);
    }
    let sols = constraints.kernel_basis();
    let width = pres.seq.mid().dim();
    let mut basis = Vec::with_capacity(sols.len());
    for w in &sols {
        let mut psi = Matrix::zeros(p, dn, width);
        for (j, (t, _)) in pres.generators.iter().enumerate() {
            let wj = &w[j * dn..(j + 1) * dn];
            for (k, rk) in rho_of(*t).iter().enumerate() {
                let col = rk.mul_vec(wj);
                for (row, &v) in col.iter().enumerate() {
                    psi.set(row, offsets[j] + k, v);
                }
            }
        }
        basis.push(psi.mul(&pres.section));
    }
    let values = Matrix::from_columns(p, g * dn, &sols);
    let values_inv = if sols.is_empty() {
        Matrix::zeros(p, 0, g * dn)
    } else {
        values.left_inverse().expect("kernel basis is independent")
    };
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        basis,
        values,
        values_inv,
        generators: pres.generators.iter().map(|(_, v)| v.clone()).collect(),
    })
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    Ok(hom_space(m, n)?.dim())
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Isomorphic(ModuleMap),
    NotIsomorphic,
    Unknown,
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, IsoVerdict::NotIsomorphic)
    }
}

/// Calls `visit` on every coefficient vector of `F_p^h`; stops early when
/// `visit` returns `true`.
pub(crate) fn for_each_vector(p: u32, h: usize, mut visit: impl FnMut(&[u32]) -> bool) -> bool {
    let mut v = vec![0u32; h];
    loop {
        if visit(&v) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == h {
                return false;
            }
            v[i] += 1;
            if v[i] == p {
                v[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

pub(crate) fn fits_budget(p: u32, h: usize, budget: u64) -> bool {
    (p as f64).powi(h as i32) <= budget as f64
}

/// Decides `M ≅ N`. Hom dimensions against `tests` give fast negatives;
/// otherwise `Hom(M, N)` is searched exhaustively when it has at most
/// `budget` elements and sampled when larger.
pub fn is_isomorphic(m: &Module, n: &Module, tests: &[Module], budget: u64) -> Result<IsoVerdict> {
    same_algebra(m, n)?;
    if m.dim() != n.dim() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    if m == n {
        return Ok(IsoVerdict::Isomorphic(ModuleMap::identity(m)));
    }
    for t in tests {
        if hom_dim(t, m)? != hom_dim(t, n)? || hom_dim(m, t)? != hom_dim(n, t)? {
            return Ok(IsoVerdict::NotIsomorphic);
        }
    }
    let h = hom_space(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..64 {
        let f = h.random(&mut rng);
        if f.is_iso() {
            return Ok(IsoVerdict::Isomorphic(f));
        }
    }
    if fits_budget(m.p(), h.dim(), budget) {
        let mut found = None;
        for_each_vector(m.p(), h.dim(), |c| {
            let f = h.combine(c);
            if f.is_iso() {
                found = Some(f);
                true
            } else {
                false
            }
        });
        return Ok(found.map_or(IsoVerdict::NotIsomorphic, IsoVerdict::Isomorphic));
    }
    Ok(IsoVerdict::Unknown)
}

/// Whether `End(M)` is local (every endomorphism nilpotent or invertible).
/// `None` when the endomorphism ring is too large to enumerate and sampling
/// found no decomposition.
pub fn is_indecomposable(m: &Module, budget: u64) -> Result<Option<bool>> {
    if m.is_zero() {
        return Ok(Some(false));
    }
    let e = hom_space(m, m)?;
    let split = |c: &[u32]| {
        let f = e.combine(c);
        !f.is_iso() && !f.matrix().is_nilpotent()
    };
    if fits_budget(m.p(), e.dim(), budget) {
        return Ok(Some(!for_each_vector(m.p(), e.dim(), split)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1dec);
    for _ in 0..budget.min(4096) {
        let c: Vec<u32> = (0..e.dim()).map(|_| rng.gen_range(0..m.p())).collect();
        if split(&c) {
            return Ok(Some(false));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    fn simple_a1(p: u32) -> Module {
        let a1 = builtin("A1", p).unwrap();
        Module::new(
            &a1,
            vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)],
        )
        .unwrap()
    }

    /// Independent oracle: solve `fρ_M(e_i) = ρ_N(e_i)f` for all `i`.
    fn naive_hom_dim(m: &Module, n: &Module) -> usize {
        let (dm, dn) = (m.dim(), n.dim());
        let p = m.p();
        let mut rows = Vec::new();
        for i in 0..m.algebra().dim() {
            let (a, b) = (m.action(i), n.action(i));
            for r in 0..dn {
                for c in 0..dm {
                    // (f a)[r][c] - (b f)[r][c] in the unknowns f[x][y] (index x*dm + y)
                    let mut row = vec![0u32; dn * dm];
                    for y in 0..dm {
                        row[r * dm + y] = (row[r * dm + y] + a.get(y, c)) % p;
                    }
                    for x in 0..dn {
                        row[x * dm + c] = (row[x * dm + c] + p - b.get(r, x)) % p;
                    }
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return dn * dm;
        }
        dn * dm - Matrix::from_rows(p, &rows).unwrap().rank()
    }

    #[test]
    fn module_axioms_checked() {
        let a1 = builtin("A1", 2).unwrap();
        let bad = Module::new(&a1, vec![Matrix::identity(2, 1), Matrix::identity(2, 1)]);
        assert!(matches!(bad, Err(Error::InvalidModule(_))));
    }

    #[test]
    fn hom_dims_over_a1() {
        let k = simple_a1(2);
        let a = Module::regular(k.algebra());
        assert_eq!(hom_dim(&k, &a).unwrap(), 1);
        assert_eq!(hom_dim(&a, &k).unwrap(), 1);
        assert_eq!(hom_dim(&a, &a).unwrap(), 2);
        assert_eq!(hom_dim(&k, &k).unwrap(), 1);
    }

    #[test]
    fn hom_agrees_with_naive_oracle() {
        for name in ["A1", "A2", "A3"] {
            let alg = builtin(name, 3).unwrap();
            let a = Module::regular(&alg);
            let da = a.dual();
            let mods = vec![a.clone(), syzygy(&a.direct_sum(&a)), cokernel(&a_rad(&a)).module];
            for m in &mods {
                for n in &mods {
                    assert_eq!(hom_dim(m, n).unwrap(), naive_hom_dim(m, n), "{name}");
                }
            }
            let dda = da.dual();
            assert_eq!(dda, a);
        }
    }

    // radical-ish submodule: image of right multiplication by a nilpotent element
    fn a_rad(a: &Module) -> ModuleMap {
        let alg = a.algebra();
        let last = alg.dim() - 1;
        ModuleMap::new(a, a, alg.right_mul(last).clone()).unwrap()
    }

    #[test]
    fn cover_of_regular_has_no_kernel() {
        for name in ["A1", "A2", "A3"] {
            let alg = builtin(name, 2).unwrap();
            let pres = presentation(&Module::regular(&alg));
            assert_eq!(pres.generators.len(), alg.summand_idempotents().len(), "{name}");
            assert!(pres.kernel.module.is_zero());
        }
    }

    #[test]
    fn syzygy_of_simple_over_a1() {
        let k = simple_a1(5);
        let s = free_cover(&k);
        assert_eq!(s.mid().dim(), 2);
        assert_eq!(s.sub().dim(), 1);
        assert!(s.verify().is_ok());
    }

    #[test]
    fn dual_is_involutive_on_maps() {
        let alg = builtin("A2", 3).unwrap();
        let a = Module::regular(&alg);
        let h = hom_space(&a, &a).unwrap();
        for f in h.basis() {
            let ddf = f.dual().dual();
            assert_eq!(ddf.matrix(), f.matrix());
            assert_eq!(ddf.source(), f.source());
        }
    }

    #[test]
    fn pushout_and_pullback_universal() {
        let alg = builtin("A1", 3).unwrap();
        let k = simple_a1(3);
        let a = Module::regular(&alg);
        let inc = hom_space(&k, &a).unwrap().basis()[0].clone();
        let po = pushout(&inc, &inc).unwrap();
        assert_eq!(po.module.dim(), 3);
        let id = ModuleMap::identity(&a);
        let u = po.induce(&id, &id).unwrap();
        assert_eq!(u.compose(&po.from_first), id);
        let proj = hom_space(&a, &k).unwrap().basis()[0].clone();
        let pb = pullback(&proj, &proj).unwrap();
        assert_eq!(pb.module.dim(), 3);
        let v = pb.induce(&id, &id).unwrap();
        assert_eq!(pb.to_second.compose(&v), id);
    }

    #[test]
    fn kernel_lift_and_cokernel_factor() {
        let alg = builtin("A1", 2).unwrap();
        let a = Module::regular(&alg);
        let x = a_rad(&a);
        let ker = kernel(&x);
        let coker = cokernel(&x);
        assert_eq!(ker.module.dim(), 1);
        assert_eq!(coker.module.dim(), 1);
        assert!(ker.lift(&ModuleMap::identity(&a)).is_err());
        let f = coker.factor(&x.compose(&x)).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn iso_and_indecomposable() {
        let alg = builtin("A2", 2).unwrap();
        let a = Module::regular(&alg);
        let s = a.direct_sum(&Module::zero(&alg));
        assert!(is_isomorphic(&a, &s, &[], 1 << 16).unwrap().is_yes());
        assert_eq!(is_indecomposable(&a, 1 << 16).unwrap(), Some(false));
        let k = simple_a1(2);
        assert_eq!(is_indecomposable(&k, 1 << 16).unwrap(), Some(true));
        assert!(is_isomorphic(&a, &a.dual().dual(), &[], 16).unwrap().is_yes());
    }
}
