//! Relative homological algebra over a cotorsion triple: proper
//! resolutions, `Ext_XY`, relative dimensions and long exact sequences.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::module::{
    cokernel, hom_dim, hom_space, is_isomorphic, presentation, syzygy, HomSpace, Module,
    ShortExactSeq,
};
use crate::resolution::{
    ext1_from_cover, inj_dim, proj_dim, Bounded, Flavor, Resolution,
};
use crate::triple::{left_projective_approx, CotorsionTriple};

/// Degrees `n + 1 ..= n + CROSS_WINDOW` are tested by the registry-bounded
/// vanishing criterion.
pub const CROSS_WINDOW: usize = 3;

/// `len` steps `0 → K_{i+1} → X_i → K_i → 0`, each a special right
/// X-approximation.
pub fn proper_x_resolution(t: &CotorsionTriple, m: &Module, len: usize) -> Result<Resolution> {
    let mut steps = Vec::with_capacity(len);
    let mut cur = m.clone();
    for _ in 0..len {
        let s = t.right_x_approx(&cur)?.seq;
        cur = s.sub().clone();
        steps.push(s);
    }
    Ok(Resolution {
        target: m.clone(),
        steps,
        flavor: Flavor::ProperX,
    })
}

/// `len` steps `0 → L^i → Y^i → L^{i+1} → 0`, each a special left
/// Y-approximation.
pub fn proper_y_coresolution(t: &CotorsionTriple, n: &Module, len: usize) -> Result<Resolution> {
    let mut steps = Vec::with_capacity(len);
    let mut cur = n.clone();
    for _ in 0..len {
        let s = t.left_y_approx(&cur)?.seq;
        cur = s.quot().clone();
        steps.push(s);
    }
    Ok(Resolution {
        target: n.clone(),
        steps,
        flavor: Flavor::ProperY,
    })
}

/// Cochain complex of finite-dimensional spaces; `d[j] : C^j → C^{j+1}`.
#[derive(Clone, Debug)]
pub struct Cochain {
    pub p: u32,
    pub dims: Vec<usize>,
    pub d: Vec<Matrix>,
}

impl Cochain {
    /// `dim H^j` for every `j` with an outgoing differential.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.iter().map(Matrix::rank).collect();
        (0..self.d.len())
            .map(|j| self.dims[j] - ranks[j] - if j == 0 { 0 } else { ranks[j - 1] })
            .collect()
    }

    fn cocycles(&self, j: usize) -> Matrix {
        self.d[j].kernel_matrix()
    }

    fn coboundaries(&self, j: usize) -> Matrix {
        if j == 0 {
            Matrix::zeros(self.p, self.dims[0], 0)
        } else {
            self.d[j - 1].column_space()
        }
    }
}

/// `Hom(X_•, N)` for a resolution `X_•`, with the hom spaces used.
fn hom_from_resolution(res: &Resolution, n: &Module, top: usize) -> Result<(Cochain, Vec<HomSpace>)> {
    let spaces: Vec<HomSpace> = (0..=top)
        .map(|j| hom_space(res.term(j), n))
        .collect::<Result<_>>()?;
    let d = (0..top)
        .map(|j| spaces[j].precompose_matrix(res.differential(j).matrix(), &spaces[j + 1]))
        .collect();
    let dims = spaces.iter().map(HomSpace::dim).collect();
    Ok((Cochain { p: n.p(), dims, d }, spaces))
}

/// `Hom(M, Y^•)` for a coresolution `Y^•`.
fn hom_into_coresolution(m: &Module, res: &Resolution, top: usize) -> Result<(Cochain, Vec<HomSpace>)> {
    let spaces: Vec<HomSpace> = (0..=top)
        .map(|j| hom_space(m, res.term(j)))
        .collect::<Result<_>>()?;
    let d = (0..top)
        .map(|j| spaces[j].postcompose_matrix(res.differential(j).matrix(), &spaces[j + 1]))
        .collect();
    let dims = spaces.iter().map(HomSpace::dim).collect();
    Ok((Cochain { p: m.p(), dims, d }, spaces))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtRow {
    pub degree: usize,
    pub via_x: usize,
    pub via_y: usize,
    pub absolute: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub rows: Vec<ExtRow>,
}

impl ExtTable {
    /// First degree where the two relative columns differ.
    pub fn imbalance(&self) -> Option<usize> {
        self.rows.iter().find(|r| r.via_x != r.via_y).map(|r| r.degree)
    }
}

/// Horn of the `0 or ∞` dichotomy for `X-id` / `Y-pd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Horn {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "∞ within bound")]
    InfiniteWithinBound,
}

impl std::fmt::Display for Horn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Horn::Zero => "0",
            Horn::InfiniteWithinBound => "∞ within bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerateDims {
    pub x_id: Horn,
    pub y_pd: Horn,
    pub x_tests: usize,
    pub y_tests: usize,
}

/// Which argument of `Ext` runs through the short exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `0 → M → M' → M'' → 0` in the first argument, `N` fixed.
    First,
    /// `0 → N → N' → N'' → 0` in the second argument, `M` fixed.
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub side: Side,
    /// `dim H^j` of the three complexes in sequence order, `j = 0..=imax+1`.
    pub dims: Vec<[usize; 3]>,
    /// Ranks of the connecting maps `H^j → H^{j+1}`, `j = 0..=imax`.
    pub connecting_ranks: Vec<usize>,
    /// Nodes checked for exactness.
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalDims {
    pub z_pd_sup: Bounded,
    pub z_id_sup: Bounded,
    /// Largest finite `proj_dim` among the Z-members, or `ExceedsBound`.
    pub pd_sup: Bounded,
    pub id_sup: Bounded,
}

/// Relative computations over one triple, caching proper resolutions.
pub struct Relative {
    triple: CotorsionTriple,
    xres: Mutex<HashMap<Vec<u32>, Arc<Resolution>>>,
    yres: Mutex<HashMap<Vec<u32>, Arc<Resolution>>>,
}

impl Relative {
    pub fn new(triple: &CotorsionTriple) -> Relative {
        Relative {
            triple: triple.clone(),
            xres: Mutex::new(HashMap::new()),
            yres: Mutex::new(HashMap::new()),
        }
    }

    pub fn triple(&self) -> &CotorsionTriple {
        &self.triple
    }

    pub fn x_resolution(&self, m: &Module, len: usize) -> Result<Arc<Resolution>> {
        cached(&self.xres, m, len, || proper_x_resolution(&self.triple, m, len))
    }

    pub fn y_coresolution(&self, n: &Module, len: usize) -> Result<Arc<Resolution>> {
        cached(&self.yres, n, len, || proper_y_coresolution(&self.triple, n, len))
    }

    /// `Ext^i_XY(M, N)` for `0 ≤ i ≤ imax` from both sides, with absolute
    /// `Ext` alongside.
    pub fn ext_table(&self, m: &Module, n: &Module, imax: usize) -> Result<ExtTable> {
        let xr = self.x_resolution(m, imax + 2)?;
        let yr = self.y_coresolution(n, imax + 2)?;
        let via_x = hom_from_resolution(&xr, n, imax + 1)?.0.cohomology_dims();
        let via_y = hom_into_coresolution(m, &yr, imax + 1)?.0.cohomology_dims();
        let absolute = absolute_ext(m, n, imax)?;
        let rows = (0..=imax)
            .map(|i| ExtRow {
                degree: i,
                via_x: via_x[i],
                via_y: via_y[i],
                absolute: absolute[i],
            })
            .collect();
        Ok(ExtTable { rows })
    }

    /// As [`Relative::ext_table`], failing on the first unbalanced degree.
    pub fn ext_xy(&self, m: &Module, n: &Module, imax: usize) -> Result<ExtTable> {
        let table = self.ext_table(m, n, imax)?;
        match table.imbalance() {
            Some(i) => Err(Error::BalanceViolation(i)),
            None => Ok(table),
        }
    }

    /// Smallest `n ≤ bound` whose proper-X syzygy `K_n` lies in X.
    pub fn z_pd(&self, m: &Module, bound: usize) -> Result<Bounded> {
        let mut k = m.clone();
        for n in 0..=bound {
            if self.triple.in_x(&k)? {
                return Ok(Bounded::Finite(n));
            }
            k = self.triple.right_x_approx(&k)?.seq.sub().clone();
        }
        Ok(Bounded::ExceedsBound)
    }

    /// Smallest `n ≤ bound` whose proper-Y cosyzygy `L^n` lies in Y.
    pub fn z_id(&self, m: &Module, bound: usize) -> Result<Bounded> {
        let mut l = m.clone();
        for n in 0..=bound {
            if self.triple.in_y(&l)? {
                return Ok(Bounded::Finite(n));
            }
            l = self.triple.left_y_approx(&l)?.seq.quot().clone();
        }
        Ok(Bounded::ExceedsBound)
    }

    /// [`Relative::z_pd`] cross-checked against vanishing of
    /// `Ext^{n+i}(M, Z)` for the given Z-members and `1 ≤ i ≤ 3`.
    pub fn z_pd_checked(&self, m: &Module, z_members: &[Module], bound: usize) -> Result<Bounded> {
        let by_approx = self.z_pd(m, bound)?;
        let profile = ext_profile_first(m, z_members, bound + CROSS_WINDOW)?;
        let by_ext = first_vanishing_window(&profile, bound);
        if by_approx != by_ext {
            return Err(Error::CrossCheckViolation(format!(
                "z_pd: proper resolution gives {by_approx}, Ext vanishing on the registry gives {by_ext}"
            )));
        }
        Ok(by_approx)
    }

    pub fn z_id_checked(&self, n: &Module, z_members: &[Module], bound: usize) -> Result<Bounded> {
        let by_approx = self.z_id(n, bound)?;
        let profile = ext_profile_second(n, z_members, bound + CROSS_WINDOW)?;
        let by_ext = first_vanishing_window(&profile, bound);
        if by_approx != by_ext {
            return Err(Error::CrossCheckViolation(format!(
                "z_id: proper coresolution gives {by_approx}, Ext vanishing on the registry gives {by_ext}"
            )));
        }
        Ok(by_approx)
    }

    /// Test sets for the `X-id` / `Y-pd` dichotomy: the given X-members
    /// closed under syzygies and X-cosyzygies, and the given Y-members
    /// closed under cosyzygies and Y-syzygies, up to `depth` rounds.
    pub fn degenerate_test_sets(
        &self,
        x_members: &[Module],
        y_members: &[Module],
        depth: usize,
    ) -> Result<(Vec<Module>, Vec<Module>)> {
        let t = &self.triple;
        let xs = close(x_members, depth, |x| {
            let mut out = vec![syzygy(x)];
            let j = left_projective_approx(x)?;
            if j.is_mono() {
                let c = cokernel(&j).module;
                if t.in_x(&c)? {
                    out.push(c);
                }
            }
            Ok(out)
        })?;
        let op = t.opposite();
        let ys = close(y_members, depth, |y| {
            let mut out = vec![crate::resolution::cosyzygy(y)];
            let dy = y.dual();
            let j = left_projective_approx(&dy)?;
            if j.is_mono() {
                let c = cokernel(&j).module;
                if op.in_x(&c)? {
                    // 0 → D C → D P → Y → 0 with D C ∈ Y
                    out.push(y_syzygy_from_dual_approx(&j));
                }
            }
            Ok(out)
        })?;
        Ok((
            xs.into_iter().filter(|m| !m.is_zero()).collect(),
            ys.into_iter().filter(|m| !m.is_zero()).collect(),
        ))
    }

    /// The `0 or ∞` dichotomy for `X-id(M)` and `Y-pd(M)`, tested on the
    /// given X- and Y-members in degrees `1 ..= bound + 1`.
    pub fn degenerate_dims(
        &self,
        m: &Module,
        x_tests: &[Module],
        y_tests: &[Module],
        bound: usize,
    ) -> Result<DegenerateDims> {
        let top = bound + 1;
        let x_profile = ext_profile_into(x_tests, m, top)?;
        let y_profile = ext_profile_first(m, y_tests, top)?;
        let x_id = horn(&x_profile, x_tests, "X-id")?;
        let y_pd = horn(&y_profile, y_tests, "Y-pd")?;
        Ok(DegenerateDims {
            x_id,
            y_pd,
            x_tests: x_tests.len(),
            y_tests: y_tests.len(),
        })
    }

    /// Long exact `Ext_XY` sequence of a proper short exact sequence,
    /// checked for exactness at every node through degree `imax`. The
    /// sequence must stay exact under `Hom(X, −)` for the given X-members
    /// and under `Hom(−, Y)` for the given Y-members.
    pub fn les_check(
        &self,
        ses: &ShortExactSeq,
        fixed: &Module,
        side: Side,
        imax: usize,
        x_members: &[Module],
        y_members: &[Module],
    ) -> Result<LesReport> {
        ses.verify()?;
        for x in x_members {
            corestriction_onto(ses, x)?;
        }
        for y in y_members {
            restriction_onto(ses, y)?;
        }
        let len = imax + 3;
        let top = imax + 2;
        let (a, b, c, i_maps, p_maps) = match side {
            Side::First => {
                let yr = self.y_coresolution(fixed, len)?;
                let (ca, sa) = hom_into_coresolution(ses.quot(), &yr, top)?;
                let (cb, sb) = hom_into_coresolution(ses.mid(), &yr, top)?;
                let (cc, sc) = hom_into_coresolution(ses.sub(), &yr, top)?;
                let i: Vec<Matrix> = (0..=top)
                    .map(|j| sa[j].precompose_matrix(ses.right.matrix(), &sb[j]))
                    .collect();
                let pm: Vec<Matrix> = (0..=top)
                    .map(|j| sb[j].precompose_matrix(ses.left.matrix(), &sc[j]))
                    .collect();
                (ca, cb, cc, i, pm)
            }
            Side::Second => {
                let xr = self.x_resolution(fixed, len)?;
                let (ca, sa) = hom_from_resolution(&xr, ses.sub(), top)?;
                let (cb, sb) = hom_from_resolution(&xr, ses.mid(), top)?;
                let (cc, sc) = hom_from_resolution(&xr, ses.quot(), top)?;
                let i: Vec<Matrix> = (0..=top)
                    .map(|j| sa[j].postcompose_matrix(ses.left.matrix(), &sb[j]))
                    .collect();
                let pm: Vec<Matrix> = (0..=top)
                    .map(|j| sb[j].postcompose_matrix(ses.right.matrix(), &sc[j]))
                    .collect();
                (ca, cb, cc, i, pm)
            }
        };
        let les = CochainSes {
            a,
            b,
            c,
            i: i_maps,
            p: p_maps,
        };
        let mut report = les.long_exact(imax)?;
        report.side = side;
        Ok(report)
    }

    /// Suprema of `z_pd` and `z_id` over the given modules, and of the
    /// absolute dimensions over those in Z.
    pub fn global_dims(&self, modules: &[Module], bound: usize) -> Result<GlobalDims> {
        let mut g = GlobalDims {
            z_pd_sup: Bounded::Finite(0),
            z_id_sup: Bounded::Finite(0),
            pd_sup: Bounded::Finite(0),
            id_sup: Bounded::Finite(0),
        };
        for m in modules {
            g.z_pd_sup = g.z_pd_sup.max(self.z_pd(m, bound)?);
            g.z_id_sup = g.z_id_sup.max(self.z_id(m, bound)?);
            if self.triple.in_z(m)? {
                g.pd_sup = g.pd_sup.max(proj_dim(m, bound)?);
                g.id_sup = g.id_sup.max(inj_dim(m, bound)?);
            }
        }
        Ok(g)
    }
}

fn cached(
    cache: &Mutex<HashMap<Vec<u32>, Arc<Resolution>>>,
    m: &Module,
    len: usize,
    build: impl FnOnce() -> Result<Resolution>,
) -> Result<Arc<Resolution>> {
    let key = m.key();
    if let Some(r) = cache.lock().expect("cache lock").get(&key) {
        if r.steps.len() >= len {
            return Ok(r.clone());
        }
    }
    let r = Arc::new(build()?);
    cache.lock().expect("cache lock").insert(key, r.clone());
    Ok(r)
}

/// `dim Ext^i_A(M, N)` for `0 ≤ i ≤ imax`.
pub fn absolute_ext(m: &Module, n: &Module, imax: usize) -> Result<Vec<usize>> {
    let mut out = vec![hom_dim(m, n)?];
    let mut k = m.clone();
    for _ in 1..=imax {
        out.push(ext1_from_cover(&presentation(&k).seq, n)?);
        k = syzygy(&k);
    }
    Ok(out)
}

/// `v[j]` for `1 ≤ j ≤ top` (index 0 unused): `Ext^j(M, T) = 0` for all `T`.
fn ext_profile_first(m: &Module, targets: &[Module], top: usize) -> Result<Vec<bool>> {
    let mut out = vec![true; top + 1];
    let mut k = m.clone();
    for slot in out.iter_mut().skip(1) {
        let cover = presentation(&k).seq.clone();
        for t in targets {
            if ext1_from_cover(&cover, t)? != 0 {
                *slot = false;
                break;
            }
        }
        k = syzygy(&k);
    }
    Ok(out)
}

/// `v[j]`: `Ext^j(T, N) = 0` for all `T`.
fn ext_profile_second(n: &Module, sources: &[Module], top: usize) -> Result<Vec<bool>> {
    ext_profile_into(sources, n, top)
}

fn ext_profile_into(sources: &[Module], n: &Module, top: usize) -> Result<Vec<bool>> {
    let mut out = vec![true; top + 1];
    for s in sources {
        let mut k = s.clone();
        for slot in out.iter_mut().skip(1) {
            if *slot && ext1_from_cover(&presentation(&k).seq, n)? != 0 {
                *slot = false;
            }
            k = syzygy(&k);
        }
    }
    Ok(out)
}

/// Smallest `n ≤ bound` with `v[n+1..=n+CROSS_WINDOW]` all true.
fn first_vanishing_window(v: &[bool], bound: usize) -> Bounded {
    (0..=bound)
        .find(|&n| (1..=CROSS_WINDOW).all(|i| v[n + i]))
        .map_or(Bounded::ExceedsBound, Bounded::Finite)
}

fn horn(profile: &[bool], tests: &[Module], what: &str) -> Result<Horn> {
    let vanish: Vec<usize> = (1..profile.len()).filter(|&j| profile[j]).collect();
    if vanish.is_empty() {
        return Ok(Horn::InfiniteWithinBound);
    }
    if vanish.len() == profile.len() - 1 {
        return Ok(Horn::Zero);
    }
    let n = vanish[0] - 1;
    Err(Error::PropertyViolation(format!(
        "{what}: Ext vanishes against all {} test modules in degree {} but not in every positive degree",
        tests.len(),
        n + 1
    )))
}

fn close(
    seeds: &[Module],
    depth: usize,
    step: impl Fn(&Module) -> Result<Vec<Module>>,
) -> Result<Vec<Module>> {
    let mut all: Vec<Module> = Vec::new();
    let mut frontier: Vec<Module> = Vec::new();
    for s in seeds {
        if push_new(&mut all, s)? {
            frontier.push(s.clone());
        }
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for m in &frontier {
            for c in step(m)? {
                if !c.is_zero() && push_new(&mut all, &c)? {
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(all)
}

fn push_new(all: &mut Vec<Module>, m: &Module) -> Result<bool> {
    for e in all.iter() {
        if e.dim() == m.dim()
            && is_isomorphic(e, m, &[], crate::registry::ISO_BUDGET)?.is_yes()
        {
            return Ok(false);
        }
    }
    all.push(m.clone());
    Ok(true)
}

/// For `j : D Y → P` mono, the kernel of the dual `D P → Y`.
fn y_syzygy_from_dual_approx(j: &crate::module::ModuleMap) -> Module {
    cokernel(j).module.dual()
}

/// `Hom(M', Y) → Hom(M, Y)` is onto.
pub fn restriction_onto(ses: &ShortExactSeq, y: &Module) -> Result<()> {
    let hm = hom_space(ses.mid(), y)?;
    let hs = hom_space(ses.sub(), y)?;
    if hm.precompose_matrix(ses.left.matrix(), &hs).rank() != hs.dim() {
        return Err(Error::ProperNessViolation(
            "Hom(−, Y) does not keep the sequence exact for a registered Y".into(),
        ));
    }
    Ok(())
}

/// `Hom(X, N') → Hom(X, N'')` is onto.
pub fn corestriction_onto(ses: &ShortExactSeq, x: &Module) -> Result<()> {
    let hm = hom_space(x, ses.mid())?;
    let hq = hom_space(x, ses.quot())?;
    if hm.postcompose_matrix(ses.right.matrix(), &hq).rank() != hq.dim() {
        return Err(Error::ProperNessViolation(
            "Hom(X, −) does not keep the sequence exact for a registered X".into(),
        ));
    }
    Ok(())
}

/// `0 → A → B → C → 0` of cochain complexes.
pub struct CochainSes {
    pub a: Cochain,
    pub b: Cochain,
    pub c: Cochain,
    pub i: Vec<Matrix>,
    pub p: Vec<Matrix>,
}

/// A subquotient `Z / B` with the rank of maps into it.
struct Cohomology {
    z: Matrix,
    b: Matrix,
    b_rank: usize,
}

impl Cohomology {
    fn of(c: &Cochain, j: usize) -> Cohomology {
        let b = c.coboundaries(j);
        let b_rank = b.rank();
        Cohomology { z: c.cocycles(j), b, b_rank }
    }
    fn dim(&self) -> usize {
        self.z.cols() - self.b_rank
    }
    /// Rank of the induced map whose images of cocycles are the columns.
    fn image_rank(&self, images: &Matrix) -> usize {
        self.b.hstack(images).rank() - self.b_rank
    }
}

impl CochainSes {
    fn check_chain_level(&self, top: usize) -> Result<()> {
        for j in 0..=top {
            let (i, p) = (&self.i[j], &self.p[j]);
            let exact = i.rank() == self.a.dims[j]
                && p.rank() == self.c.dims[j]
                && p.mul(i).is_zero()
                && self.a.dims[j] + self.c.dims[j] == self.b.dims[j];
            if !exact {
                return Err(Error::ProperNessViolation(format!(
                    "Hom complexes are not short exact in degree {j}"
                )));
            }
            if j < top {
                let ci = self.b.d[j].mul(i).sub(&self.i[j + 1].mul(&self.a.d[j]));
                let cp = self.c.d[j].mul(p).sub(&self.p[j + 1].mul(&self.b.d[j]));
                if !ci.is_zero() || !cp.is_zero() {
                    return Err(Error::ExactnessViolation(format!(
                        "chain maps do not commute with differentials in degree {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Snake-lemma connecting map applied to each cocycle column of `z`.
    fn connecting(&self, j: usize, z: &Matrix) -> Result<Matrix> {
        let p = self.a.p;
        let mut cols = Vec::with_capacity(z.cols());
        for v in z.columns() {
            let lift = self.p[j].solve(&v)?.ok_or_else(|| {
                Error::ExactnessViolation(format!("cocycle in degree {j} does not lift"))
            })?;
            let pushed = self.b.d[j].mul_vec(&lift);
            let back = self.i[j + 1].solve(&pushed)?.ok_or_else(|| {
                Error::ExactnessViolation(format!("connecting map undefined in degree {j}"))
            })?;
            cols.push(back);
        }
        Ok(Matrix::from_columns(p, self.a.dims[j + 1], &cols))
    }

    /// Assembles `… → H^j(A) → H^j(B) → H^j(C) → H^{j+1}(A) → …` and
    /// checks exactness at every node with `j ≤ imax`.
    pub fn long_exact(&self, imax: usize) -> Result<LesReport> {
        let top = imax + 2;
        self.check_chain_level(top)?;
        let ha: Vec<Cohomology> = (0..=imax + 1).map(|j| Cohomology::of(&self.a, j)).collect();
        let hb: Vec<Cohomology> = (0..=imax + 1).map(|j| Cohomology::of(&self.b, j)).collect();
        let hc: Vec<Cohomology> = (0..=imax + 1).map(|j| Cohomology::of(&self.c, j)).collect();

        let mut dims = Vec::new();
        let mut connecting_ranks = Vec::new();
        let mut nodes = 0;
        let mut incoming_a = 0;
        for j in 0..=imax {
            let i_img = self.i[j].mul(&ha[j].z);
            let p_img = self.p[j].mul(&hb[j].z);
            let delta = self.connecting(j, &hc[j].z)?;
            let r_i = hb[j].image_rank(&i_img);
            let r_p = hc[j].image_rank(&p_img);
            let r_d = ha[j + 1].image_rank(&delta);

            // composites vanish in cohomology
            let pi = self.p[j].mul(&i_img);
            let dp = self.connecting(j, &p_img)?;
            let id = self.i[j + 1].mul(&delta);
            if hc[j].image_rank(&pi) != 0 || ha[j + 1].image_rank(&dp) != 0 || hb[j + 1].image_rank(&id) != 0 {
                return Err(Error::ExactnessViolation(format!(
                    "consecutive maps do not compose to zero in degree {j}"
                )));
            }
            let checks = [
                (format!("H^{j}(A)"), incoming_a, r_i, ha[j].dim()),
                (format!("H^{j}(B)"), r_i, r_p, hb[j].dim()),
                (format!("H^{j}(C)"), r_p, r_d, hc[j].dim()),
            ];
            for (node, r_in, r_out, h) in checks {
                if r_in + r_out != h {
                    return Err(Error::ExactnessViolation(node));
                }
                nodes += 1;
            }
            incoming_a = r_d;
            dims.push([ha[j].dim(), hb[j].dim(), hc[j].dim()]);
            connecting_ranks.push(r_d);
        }
        dims.push([ha[imax + 1].dim(), hb[imax + 1].dim(), hc[imax + 1].dim()]);
        Ok(LesReport {
            side: Side::First,
            dims,
            connecting_ranks,
            nodes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::registry::Registry;
    use crate::resolution::{ext_dim, DEFAULT_BOUND};

    fn simple_a1() -> (Arc<crate::algebra::Algebra>, Module) {
        let alg = builtin("A1", 3).unwrap();
        let reg = Registry::build(&alg).unwrap();
        let k = reg.get("k").unwrap().clone();
        (alg, k)
    }

    #[test]
    fn gorenstein_a1_kills_positive_ext() {
        let (alg, k) = simple_a1();
        let rel = Relative::new(&CotorsionTriple::gorenstein(&alg, DEFAULT_BOUND).unwrap());
        let t = rel.ext_xy(&k, &k, 4).unwrap();
        assert_eq!(t.rows[0].via_x, 1);
        for r in &t.rows[1..] {
            assert_eq!((r.via_x, r.via_y, r.absolute), (0, 0, 1));
        }
    }

    #[test]
    fn trivial_triple_recovers_absolute_ext() {
        for name in ["A1", "A2", "A3"] {
            let alg = builtin(name, 2).unwrap();
            let reg = Registry::build(&alg).unwrap();
            let rel = Relative::new(&CotorsionTriple::trivial(&alg));
            for m in reg.modules().iter().take(4) {
                for n in reg.modules().iter().take(4) {
                    let t = rel.ext_xy(m, n, 3).unwrap();
                    for r in &t.rows {
                        assert_eq!(r.via_x, ext_dim(m, n, r.degree).unwrap());
                        assert_eq!(r.via_x, r.absolute);
                    }
                }
            }
        }
    }

    #[test]
    fn relative_dimensions() {
        let (alg, k) = simple_a1();
        let trivial = Relative::new(&CotorsionTriple::trivial(&alg));
        assert_eq!(trivial.z_pd(&k, DEFAULT_BOUND).unwrap(), Bounded::ExceedsBound);
        let g = Relative::new(&CotorsionTriple::gorenstein(&alg, DEFAULT_BOUND).unwrap());
        assert_eq!(g.z_pd(&k, DEFAULT_BOUND).unwrap(), Bounded::Finite(0));

        let a2 = builtin("A2", 3).unwrap();
        let reg = Registry::build(&a2).unwrap();
        let rel = Relative::new(&CotorsionTriple::trivial(&a2));
        let zs = reg.modules();
        let s1 = reg.get("S1").unwrap();
        assert_eq!(rel.z_pd_checked(s1, &zs, DEFAULT_BOUND).unwrap(), Bounded::Finite(1));
        let gd = rel.global_dims(&zs, DEFAULT_BOUND).unwrap();
        assert_eq!((gd.z_pd_sup, gd.z_id_sup), (Bounded::Finite(1), Bounded::Finite(1)));
    }

    #[test]
    fn a3_gorenstein_dims_at_most_one() {
        let alg = builtin("A3", 2).unwrap();
        let reg = Registry::build(&alg).unwrap();
        let t = CotorsionTriple::gorenstein(&alg, DEFAULT_BOUND).unwrap();
        let rel = Relative::new(&t);
        let zs: Vec<Module> = reg
            .modules()
            .into_iter()
            .filter(|m| t.in_z(m).unwrap())
            .collect();
        for m in reg.modules() {
            assert!(rel.z_pd_checked(&m, &zs, DEFAULT_BOUND).unwrap().at_most(1));
            assert!(rel.z_id_checked(&m, &zs, DEFAULT_BOUND).unwrap().at_most(1));
        }
        let gd = rel.global_dims(&reg.modules(), DEFAULT_BOUND).unwrap();
        assert_eq!(gd.z_pd_sup, Bounded::Finite(1));
        assert_eq!(gd.z_id_sup, Bounded::Finite(1));
        assert_eq!(gd.pd_sup, Bounded::Finite(1));
        assert_eq!(gd.id_sup, Bounded::Finite(1));
    }

    #[test]
    fn dichotomy_horns() {
        let (alg, k) = simple_a1();
        let reg = Registry::build(&alg).unwrap();
        let t = CotorsionTriple::gorenstein(&alg, DEFAULT_BOUND).unwrap();
        let rel = Relative::new(&t);
        let (xs, ys) = rel
            .degenerate_test_sets(&reg.modules(), &reg.modules(), 4)
            .unwrap();
        let d = rel.degenerate_dims(&k, &xs, &ys, 6).unwrap();
        assert_eq!(d.y_pd, Horn::InfiniteWithinBound);
        let a = reg.get("A").unwrap();
        let d = rel.degenerate_dims(a, &xs, &ys, 6).unwrap();
        assert_eq!((d.x_id, d.y_pd), (Horn::Zero, Horn::Zero));
    }

    #[test]
    fn split_sequence_has_zero_connecting_maps() {
        let alg = builtin("A2", 3).unwrap();
        let reg = Registry::build(&alg).unwrap();
        let rel = Relative::new(&CotorsionTriple::trivial(&alg));
        let (s1, s2) = (reg.get("S1").unwrap(), reg.get("S2").unwrap());
        let ses = ShortExactSeq::split(s2, s1);
        for side in [Side::First, Side::Second] {
            let r = rel.les_check(&ses, s1, side, 4, &[], &[]).unwrap();
            assert!(r.connecting_ranks.iter().all(|&x| x == 0));
            assert_eq!(r.nodes, 15);
        }
    }

    #[test]
    fn projective_cover_sequence_les() {
        // 0 → S2 → P1 → S1 → 0 over A2 with N = S2: Hom(S1,S2) = 0,
        // Hom(P1,S2) = 0, Hom(S2,S2) = k, Ext^1(S1,S2) = k
        let alg = builtin("A2", 3).unwrap();
        let reg = Registry::build(&alg).unwrap();
        let rel = Relative::new(&CotorsionTriple::trivial(&alg));
        let s1 = reg.get("S1").unwrap();
        let s2 = reg.get("S2").unwrap();
        let ses = presentation(s1).seq.clone();
        let r = rel.les_check(&ses, s2, Side::First, 4, &[], &[]).unwrap();
        assert_eq!(r.dims[0], [0, 0, 1]);
        assert_eq!(r.dims[1], [1, 0, 0]);
        assert_eq!(r.connecting_ranks[0], 1);
    }

    #[test]
    fn improper_sequence_is_rejected() {
        // over the Gorenstein A1 triple, 0 → k → A → k → 0 is not
        // Hom(−, Y)-exact against Y = k
        let (alg, k) = simple_a1();
        let rel = Relative::new(&CotorsionTriple::gorenstein(&alg, DEFAULT_BOUND).unwrap());
        let ses = presentation(&k).seq.clone();
        let err = rel.les_check(&ses, &k, Side::First, 2, &[], std::slice::from_ref(&k));
        assert!(matches!(err, Err(Error::ProperNessViolation(_))));
    }
}
