//! Finite-dimensional associative unital algebras given by structure
//! constants, plus the built-in testbed constructors.
//!
//! A basis `e_0..e_{n-1}` is fixed and `e_i·e_j = Σ_k c[i][j][k] e_k`.
//! Modules over an algebra are left modules (see [`crate::module`]); right
//! modules are left modules over [`Algebra::opposite`].

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock, Weak};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_char, Matrix};
use crate::module::Presentation;

/// On-disk algebra description.
///
/// `mul[i][j]` is the coordinate vector of `e_i·e_j`. `idempotents` is an
/// optional complete list of orthogonal idempotents; when they are
/// primitive, free covers become projective covers `⊕ A·e_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    #[serde(rename = "char")]
    pub characteristic: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<u32>,
    pub mul: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub idempotents: Vec<Vec<u32>>,
}

pub struct Algebra {
    p: u32,
    dim: usize,
    basis: Vec<String>,
    mul: Vec<u32>,
    unit: Vec<u32>,
    idempotents: Vec<Vec<u32>>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    generators: Vec<usize>,
    fingerprint: u64,
    opposite: OnceLock<Arc<Algebra>>,
    // set on an opposite algebra, pointing back at the algebra it came from
    origin: OnceLock<Weak<Algebra>>,
    pub(crate) presentations: Mutex<HashMap<Vec<u32>, Arc<Presentation>>>,
    pub(crate) flags: Mutex<HashMap<(u8, Vec<u32>), bool>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra")
            .field("p", &self.p)
            .field("dim", &self.dim)
            .field("basis", &self.basis)
            .finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.fingerprint == other.fingerprint
                && self.p == other.p
                && self.dim == other.dim
                && self.mul == other.mul
                && self.unit == other.unit)
    }
}
impl Eq for Algebra {}

impl Algebra {
    /// Validates a structure-constant table and builds the algebra.
    ///
    /// Associativity and both unit laws are checked exhaustively; the first
    /// failing index tuple is reported.
    pub fn check(
        p: u32,
        basis: Vec<String>,
        mul: Vec<Vec<Vec<u32>>>,
        unit: Vec<u32>,
    ) -> Result<Arc<Algebra>> {
        Self::check_with_idempotents(p, basis, mul, unit, Vec::new())
    }

    pub fn check_with_idempotents(
        p: u32,
        basis: Vec<String>,
        mul: Vec<Vec<Vec<u32>>>,
        unit: Vec<u32>,
        idempotents: Vec<Vec<u32>>,
    ) -> Result<Arc<Algebra>> {
        check_char(p)?;
        let n = mul.len();
        if basis.len() != n || unit.len() != n {
            return Err(Error::InvalidAlgebra(format!(
                "{} basis names and unit of length {} for a table of size {n}",
                basis.len(),
                unit.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAlgebra(format!("mul[{i}] has {} entries", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != n {
                    return Err(Error::InvalidAlgebra(format!(
                        "mul[{i}][{j}] has {} coefficients",
                        v.len()
                    )));
                }
                flat.extend(v.iter().map(|&c| c % p));
            }
        }
        let unit: Vec<u32> = unit.into_iter().map(|c| c % p).collect();
        for e in &idempotents {
            if e.len() != n {
                return Err(Error::InvalidAlgebra("idempotent of wrong length".into()));
            }
        }
        let alg = Self::assemble(p, basis, flat, unit, idempotents);
        alg.verify_laws()?;
        alg.verify_idempotents()?;
        Ok(Arc::new(alg))
    }

    fn assemble(
        p: u32,
        basis: Vec<String>,
        mul: Vec<u32>,
        unit: Vec<u32>,
        idempotents: Vec<Vec<u32>>,
    ) -> Algebra {
        let n = basis.len();
        let c = |i: usize, j: usize, k: usize| mul[(i * n + j) * n + k];
        let left = (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(p, n, n);
                for j in 0..n {
                    for k in 0..n {
                        m.set(k, j, c(i, j, k));
                    }
                }
                m
            })
            .collect();
        let right = (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(p, n, n);
                for j in 0..n {
                    for k in 0..n {
                        m.set(k, j, c(j, i, k));
                    }
                }
                m
            })
            .collect();
        let mut h = DefaultHasher::new();
        (p, n, &mul, &unit).hash(&mut h);
        let mut alg = Algebra {
            p,
            dim: n,
            basis,
            mul,
            unit,
            idempotents,
            left,
            right,
            generators: Vec::new(),
            fingerprint: h.finish(),
            opposite: OnceLock::new(),
            origin: OnceLock::new(),
            presentations: Mutex::new(HashMap::new()),
            flags: Mutex::new(HashMap::new()),
        };
        alg.generators = alg.find_generators();
        alg
    }

    fn verify_laws(&self) -> Result<()> {
        let n = self.dim;
        let p = self.p as u64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let (mut lhs, mut rhs) = (0u64, 0u64);
                        for m in 0..n {
                            lhs += self.c(i, j, m) as u64 * self.c(m, k, l) as u64;
                            rhs += self.c(j, k, m) as u64 * self.c(i, m, l) as u64;
                        }
                        if lhs % p != rhs % p {
                            return Err(Error::AssociativityViolation { i, j, k, l });
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                let (mut ul, mut ur) = (0u64, 0u64);
                for j in 0..n {
                    ul += self.unit[j] as u64 * self.c(j, i, k) as u64;
                    ur += self.unit[j] as u64 * self.c(i, j, k) as u64;
                }
                let want = u64::from(i == k);
                if ul % p != want || ur % p != want {
                    return Err(Error::UnitViolation(i));
                }
            }
        }
        Ok(())
    }

    fn verify_idempotents(&self) -> Result<()> {
        if self.idempotents.is_empty() {
            return Ok(());
        }
        let mut sum = vec![0u32; self.dim];
        for (s, e) in self.idempotents.iter().enumerate() {
            for (t, f) in self.idempotents.iter().enumerate() {
                let prod = self.multiply(e, f);
                let want: &[u32] = if s == t { e } else { &vec![0; self.dim] };
                if prod != want {
                    return Err(Error::InvalidAlgebra(format!(
                        "idempotents {s} and {t} are not orthogonal idempotents"
                    )));
                }
            }
            for (a, b) in sum.iter_mut().zip(e) {
                *a = (*a + b) % self.p;
            }
        }
        if sum != self.unit {
            return Err(Error::InvalidAlgebra("idempotents do not sum to the unit".into()));
        }
        Ok(())
    }

    /// Basis indices generating the algebra together with the unit.
    fn find_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.subalgebra(&gens);
        for i in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[i] = 1;
            let probe = span.hstack(&Matrix::column_vector(self.p, &e));
            if probe.rank() > span.cols() {
                gens.push(i);
                span = self.subalgebra(&gens);
            }
        }
        gens
    }

    /// Basis (as columns) of the subalgebra generated by some basis elements.
    fn subalgebra(&self, gens: &[usize]) -> Matrix {
        let mut cols = vec![self.unit.clone()];
        for &g in gens {
            let mut e = vec![0; self.dim];
            e[g] = 1;
            cols.push(e);
        }
        let mut span = Matrix::from_columns(self.p, self.dim, &cols).column_space();
        loop {
            let mut grown = span.clone();
            for &g in gens {
                grown = grown.hstack(&self.right[g].mul(&span));
            }
            let next = grown.column_space();
            if next.cols() == span.cols() {
                return span;
            }
            span = next;
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    pub fn idempotents(&self) -> &[Vec<u32>] {
        &self.idempotents
    }
    /// The declared idempotents, or just the unit when none were given.
    pub fn summand_idempotents(&self) -> Vec<Vec<u32>> {
        if self.idempotents.is_empty() {
            vec![self.unit.clone()]
        } else {
            self.idempotents.clone()
        }
    }
    /// Left multiplication by an arbitrary element on the regular module.
    pub fn left_mul_by(&self, a: &[u32]) -> Matrix {
        self.combine(&self.left, a)
    }
    /// Right multiplication by an arbitrary element on the regular module.
    pub fn right_mul_by(&self, a: &[u32]) -> Matrix {
        self.combine(&self.right, a)
    }
    fn combine(&self, ms: &[Matrix], a: &[u32]) -> Matrix {
        let mut acc = Matrix::zeros(self.p, self.dim, self.dim);
        for (m, &c) in ms.iter().zip(a) {
            if c != 0 {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }
    /// Structure constant `c[i][j][k]`.
    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> u32 {
        self.mul[(i * self.dim + j) * self.dim + k]
    }
    /// Left multiplication by `e_i` on the regular module.
    pub fn left_mul(&self, i: usize) -> &Matrix {
        &self.left[i]
    }
    /// Right multiplication by `e_i` on the regular module.
    pub fn right_mul(&self, i: usize) -> &Matrix {
        &self.right[i]
    }
    /// Basis indices that generate the algebra (with the unit).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn multiply(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.dim;
        let p = self.p as u64;
        let mut out = vec![0u64; n];
        for (i, &ai) in a.iter().enumerate().take(n) {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(n) {
                if bj == 0 {
                    continue;
                }
                let s = ai as u64 * bj as u64 % p;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += s * self.c(i, j, k) as u64;
                }
            }
        }
        out.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// The opposite algebra (`e_i ∗ e_j = e_j·e_i`). The opposite of the
    /// opposite is the original `Arc` while that is alive.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        if let Some(orig) = self.origin.get().and_then(Weak::upgrade) {
            return orig;
        }
        self.opposite
            .get_or_init(|| {
                let n = self.dim;
                let mut mul = vec![0; n * n * n];
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            mul[(i * n + j) * n + k] = self.c(j, i, k);
                        }
                    }
                }
                let op = Self::assemble(
                    self.p,
                    self.basis.clone(),
                    mul,
                    self.unit.clone(),
                    self.idempotents.clone(),
                );
                op.origin.set(Arc::downgrade(self)).expect("fresh cell");
                Arc::new(op)
            })
            .clone()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.c(i, j, k) == self.c(j, i, k))))
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        let n = self.dim;
        AlgebraSpec {
            characteristic: self.p,
            dim: n,
            basis: self.basis.clone(),
            unit: self.unit.clone(),
            mul: (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| self.c(i, j, k)).collect()).collect())
                .collect(),
            idempotents: self.idempotents.clone(),
        }
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Arc<Algebra>> {
        if spec.dim != spec.mul.len() {
            return Err(Error::InvalidAlgebra(format!(
                "declared dim {} but mul has {} rows",
                spec.dim,
                spec.mul.len()
            )));
        }
        Self::check_with_idempotents(
            spec.characteristic,
            spec.basis.clone(),
            spec.mul.clone(),
            spec.unit.clone(),
            spec.idempotents.clone(),
        )
    }
}

fn table(n: usize) -> Vec<Vec<Vec<u32>>> {
    vec![vec![vec![0; n]; n]; n]
}

/// `k[x]/(x^n)` with basis `1, x, …, x^{n-1}`.
pub fn truncated_poly(p: u32, n: usize) -> Result<Arc<Algebra>> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("truncated_poly needs n >= 1".into()));
    }
    let mut mul = table(n);
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                mul[i][j][i + j] = 1;
            }
        }
    }
    let basis = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    let mut unit = vec![0; n];
    unit[0] = 1;
    Algebra::check_with_idempotents(p, basis, mul, unit.clone(), vec![unit])
}

#[derive(Clone, Debug)]
struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>, // in travel order
}

/// Path algebra of a finite acyclic quiver without relations.
///
/// Vertices are `0..vertices`; `arrows[a] = (source, target)`. The basis is
/// every path, trivial ones first. Paths compose like functions: `u·v` is
/// "`v` then `u`", nonzero only when `v` ends where `u` starts. Under this
/// convention a left module is a quiver representation.
pub fn path_algebra_acyclic(
    vertices: usize,
    arrows: &[(usize, usize)],
    p: u32,
) -> Result<Arc<Algebra>> {
    if arrows.iter().any(|&(s, t)| s >= vertices || t >= vertices) {
        return Err(Error::InvalidAlgebra("arrow endpoint out of range".into()));
    }
    // Kahn's algorithm detects oriented cycles
    let mut indeg = vec![0usize; vertices];
    arrows.iter().for_each(|&(_, t)| indeg[t] += 1);
    let mut queue: Vec<usize> = (0..vertices).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &(s, t) in arrows {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push(t);
                }
            }
        }
    }
    if seen != vertices {
        return Err(Error::UnsupportedQuiver);
    }

    let mut paths: Vec<Path> = (0..vertices)
        .map(|v| Path {
            source: v,
            target: v,
            arrows: vec![],
        })
        .collect();
    let mut frontier: Vec<Path> = arrows
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| Path {
            source: s,
            target: t,
            arrows: vec![a],
        })
        .collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for path in &frontier {
            for (a, &(s, t)) in arrows.iter().enumerate() {
                if s == path.target {
                    let mut ext = path.clone();
                    ext.arrows.push(a);
                    ext.target = t;
                    next.push(ext);
                }
            }
        }
        paths.append(&mut frontier);
        frontier = next;
    }

    let n = paths.len();
    let index: HashMap<(usize, usize, Vec<usize>), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, q)| ((q.source, q.target, q.arrows.clone()), i))
        .collect();
    let mut mul = table(n);
    for (i, u) in paths.iter().enumerate() {
        for (j, v) in paths.iter().enumerate() {
            if v.target != u.source {
                continue;
            }
            let mut arr = v.arrows.clone();
            arr.extend_from_slice(&u.arrows);
            let k = index[&(v.source, u.target, arr)];
            mul[i][j][k] = 1;
        }
    }
    let arrow_name = |a: usize| {
        if arrows.len() == 1 {
            "a".to_string()
        } else {
            format!("a{}", a + 1)
        }
    };
    let basis = paths
        .iter()
        .map(|q| {
            if q.arrows.is_empty() {
                format!("e{}", q.source + 1)
            } else {
                q.arrows.iter().rev().map(|&a| arrow_name(a)).collect()
            }
        })
        .collect();
    let mut unit = vec![0; n];
    unit[..vertices].iter_mut().for_each(|u| *u = 1);
    let idempotents = (0..vertices)
        .map(|v| {
            let mut e = vec![0; n];
            e[v] = 1;
            e
        })
        .collect();
    Algebra::check_with_idempotents(p, basis, mul, unit, idempotents)
}

/// Upper-triangular 2×2 matrices over `r`; basis `E11⊗b, E12⊗b, E22⊗b`.
pub fn triangular2(r: &Algebra) -> Result<Arc<Algebra>> {
    let m = r.dim();
    let n = 3 * m;
    // block index: 0 = E11, 1 = E12, 2 = E22; (row, col) of each block
    let shape = [(0usize, 0usize), (0, 1), (1, 1)];
    let block_of = |row: usize, col: usize| shape.iter().position(|&s| s == (row, col));
    let mut mul = table(n);
    for (bi, &(a, b)) in shape.iter().enumerate() {
        for (bj, &(c, d)) in shape.iter().enumerate() {
            if b != c {
                continue;
            }
            let bk = block_of(a, d).expect("upper triangular blocks close under product");
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        mul[bi * m + i][bj * m + j][bk * m + k] = r.c(i, j, k);
                    }
                }
            }
        }
    }
    let names = ["E11", "E12", "E22"];
    let basis = names
        .iter()
        .flat_map(|blk| r.basis_names().iter().map(move |b| format!("{blk}*{b}")))
        .collect();
    let mut unit = vec![0; n];
    for k in 0..m {
        unit[k] = r.unit()[k];
        unit[2 * m + k] = r.unit()[k];
    }
    let base_idem: Vec<Vec<u32>> = if r.idempotents().is_empty() {
        vec![r.unit().to_vec()]
    } else {
        r.idempotents().to_vec()
    };
    let mut idempotents = Vec::new();
    for blk in [0, 2] {
        for e in &base_idem {
            let mut v = vec![0; n];
            v[blk * m..(blk + 1) * m].copy_from_slice(e);
            idempotents.push(v);
        }
    }
    Algebra::check_with_idempotents(r.p(), basis, mul, unit, idempotents)
}

/// Names accepted by [`builtin`].
pub const BUILTINS: [&str; 3] = ["A1", "A2", "A3"];

/// The testbed algebras: `A1 = k[x]/(x²)`, `A2` = path algebra of `1 → 2`,
/// `A3` = upper-triangular 2×2 matrices over `A1`.
pub fn builtin(name: &str, p: u32) -> Result<Arc<Algebra>> {
    match name {
        "A1" => truncated_poly(p, 2),
        "A2" => path_algebra_acyclic(2, &[(0, 1)], p),
        "A3" => triangular2(&*truncated_poly(p, 2)?),
        other => Err(Error::Config(format!(
            "unknown builtin algebra {other:?} (expected one of {BUILTINS:?})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_poly_dual_numbers() {
        let a1 = truncated_poly(2, 2).unwrap();
        assert_eq!(a1.dim(), 2);
        assert_eq!(a1.multiply(&[0, 1], &[0, 1]), vec![0, 0]);
        assert!(a1.is_commutative());
        assert_eq!(a1.generators(), &[1]);
    }

    #[test]
    fn field_is_an_algebra() {
        let k = Algebra::check(3, vec!["1".into()], vec![vec![vec![1]]], vec![1]).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.generators().is_empty());
    }

    #[test]
    fn broken_associativity_is_pinpointed() {
        // x·x = y, x·y = 0, y·x = x: (x·x)·x = x but x·(x·x) = 0
        let mul = vec![
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 0, 0]],
        ];
        let err = Algebra::check(2, vec!["1".into(), "x".into(), "y".into()], mul, vec![1, 0, 0])
            .unwrap_err();
        assert!(matches!(err, Error::AssociativityViolation { .. }), "{err:?}");
    }

    #[test]
    fn unit_violation() {
        let mul = vec![vec![vec![0]]];
        let err = Algebra::check(2, vec!["z".into()], mul, vec![1]).unwrap_err();
        assert_eq!(err, Error::UnitViolation(0));
    }

    #[test]
    fn path_algebra_of_a2() {
        let a2 = path_algebra_acyclic(2, &[(0, 1)], 2).unwrap();
        assert_eq!(a2.dim(), 3);
        assert_eq!(a2.basis_names(), &["e1", "e2", "a"]);
        // a = e2·a·e1
        assert_eq!(a2.multiply(&[0, 1, 0], &[0, 0, 1]), vec![0, 0, 1]);
        assert_eq!(a2.multiply(&[0, 0, 1], &[1, 0, 0]), vec![0, 0, 1]);
        assert_eq!(a2.multiply(&[1, 0, 0], &[0, 0, 1]), vec![0, 0, 0]);
    }

    #[test]
    fn cyclic_quiver_rejected() {
        assert_eq!(
            path_algebra_acyclic(2, &[(0, 1), (1, 0)], 2).unwrap_err(),
            Error::UnsupportedQuiver
        );
        assert_eq!(
            path_algebra_acyclic(1, &[(0, 0)], 2).unwrap_err(),
            Error::UnsupportedQuiver
        );
    }

    #[test]
    fn longer_quiver_counts_paths() {
        // 1 → 2 → 3 and 1 → 3: paths e1,e2,e3, three arrows, one length-2 path
        let a = path_algebra_acyclic(3, &[(0, 1), (1, 2), (0, 2)], 5).unwrap();
        assert_eq!(a.dim(), 7);
    }

    #[test]
    fn triangular_over_a1() {
        let a3 = triangular2(&truncated_poly(2, 2).unwrap()).unwrap();
        assert_eq!(a3.dim(), 6);
        assert_eq!(a3.idempotents().len(), 2);
        assert!(!a3.is_commutative());
    }

    #[test]
    fn opposite_twice_is_structurally_equal() {
        let a3 = builtin("A3", 3).unwrap();
        let op = a3.opposite();
        assert_ne!(*op, *a3);
        assert!(Arc::ptr_eq(&op.opposite(), &a3));
    }

    #[test]
    fn bad_idempotents_rejected() {
        let spec = AlgebraSpec {
            idempotents: vec![vec![1, 0, 0]],
            ..builtin("A2", 2).unwrap().to_spec()
        };
        assert!(matches!(Algebra::from_spec(&spec), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn spec_roundtrip() {
        let a2 = builtin("A2", 2).unwrap();
        let json = serde_json::to_string(&a2.to_spec()).unwrap();
        let back: AlgebraSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(*Algebra::from_spec(&back).unwrap(), *a2);
    }
}
