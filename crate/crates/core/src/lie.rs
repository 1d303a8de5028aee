//! Real Lie algebras given by structure constants, reductive block
//! decompositions and left-invariant metrics built from the Killing form.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for structural residuals on `−B`-orthonormal bases.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Relative threshold below which a symmetric matrix counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// A finite-dimensional real Lie algebra: `[e_i, e_j] = Σ_k C[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    labels: Vec<String>,
    structure: Vec<f64>,
}

impl LieAlgebraData {
    /// Builds an algebra from a flat `dim³` array in `[i][j][k]` order.
    ///
    /// Antisymmetry is checked; the Jacobi identity is not (see
    /// [`LieAlgebraData::jacobi_residual`]).
    pub fn new(labels: Vec<String>, structure: Vec<f64>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidStructure("dimension must be positive".into()));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: structure.len(),
            });
        }
        let alg = LieAlgebraData {
            dim,
            labels,
            structure,
        };
        let scale = 1.0 + alg.max_abs_constant();
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let s = alg.c(i, j, k) + alg.c(j, i, k);
                    if s.abs() > 1e-12 * scale {
                        return Err(Error::InvalidStructure(format!(
                            "C[{i}][{j}][{k}] + C[{j}][{i}][{k}] = {s:e}"
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize, usize) -> f64) -> Result<Self> {
        let n = labels.len();
        let mut structure = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    structure[(i * n + j) * n + k] = f(i, j, k);
                }
            }
        }
        Self::new(labels, structure)
    }

    pub fn abelian(dim: usize) -> Self {
        let labels = (0..dim).map(|i| format!("e{i}")).collect();
        LieAlgebraData {
            dim,
            labels,
            structure: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure(&self) -> &[f64] {
        &self.structure
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn max_abs_constant(&self) -> f64 {
        self.structure.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `[x, y] = Σ_ij x_i y_j C[i][j][·]`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                let w = xi * yj;
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.c(i, j, k);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad e_i`: column `j` holds the coordinates of `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |k, j| self.c(i, j, k))
    }

    /// Matrix of `ad x` in the working basis.
    pub fn ad(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(x)?;
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += xi * self.c(i, j, k);
                }
            }
        }
        Ok(m)
    }

    /// `B(e_i, e_j) = tr(ad e_i ∘ ad e_j)`.
    pub fn killing_form(&self) -> DMatrix<f64> {
        let n = self.dim;
        let mut b = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        s += self.c(i, k, l) * self.c(j, l, k);
                    }
                }
                b[(i, j)] = s;
                b[(j, i)] = s;
            }
        }
        b
    }

    /// Max-norm of the cyclic sum `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        let mut acc = vec![0.0; n];
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    acc.iter_mut().for_each(|v| *v = 0.0);
                    for l in 0..n {
                        let cij = self.c(i, j, l);
                        let cjk = self.c(j, k, l);
                        let cki = self.c(k, i, l);
                        if cij == 0.0 && cjk == 0.0 && cki == 0.0 {
                            continue;
                        }
                        for (m, a) in acc.iter_mut().enumerate() {
                            *a += cij * self.c(l, k, m)
                                + cjk * self.c(l, i, m)
                                + cki * self.c(l, j, m);
                        }
                    }
                    worst = acc.iter().fold(worst, |w, v| w.max(v.abs()));
                }
            }
        }
        worst
    }

    /// Whether the Jacobi residual is within `1e−10 · (1 + max|C|)²`.
    pub fn satisfies_jacobi(&self) -> bool {
        let scale = 1.0 + self.max_abs_constant();
        self.jacobi_residual() <= STRUCTURE_TOL * scale * scale
    }

    /// Re-expresses the algebra in the basis `f_a = Σ_i T[i][a] e_i`.
    pub fn change_basis(&self, t: &DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let n = self.dim;
        if t.nrows() != n || t.ncols() != n || labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.nrows(),
            });
        }
        let t_inv = t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidStructure("singular change of basis".into()))?;
        // first contract i, then j, then map k through T⁻¹
        let mut s1 = vec![0.0; n * n * n];
        for a in 0..n {
            for i in 0..n {
                let w = t[(i, a)];
                if w == 0.0 {
                    continue;
                }
                for j in 0..n {
                    for k in 0..n {
                        s1[(a * n + j) * n + k] += w * self.c(i, j, k);
                    }
                }
            }
        }
        let mut s2 = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for j in 0..n {
                    let w = t[(j, b)];
                    if w == 0.0 {
                        continue;
                    }
                    for k in 0..n {
                        s2[(a * n + b) * n + k] += w * s1[(a * n + j) * n + k];
                    }
                }
            }
        }
        let mut out = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let base = (a * n + b) * n;
                for c in 0..n {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += t_inv[(c, k)] * s2[base + k];
                    }
                    out[base + c] = s;
                }
            }
        }
        // restore exact antisymmetry lost to rounding
        for a in 0..n {
            for b in (a + 1)..n {
                for c in 0..n {
                    let x = 0.5 * (out[(a * n + b) * n + c] - out[(b * n + a) * n + c]);
                    out[(a * n + b) * n + c] = x;
                    out[(b * n + a) * n + c] = -x;
                }
            }
            for c in 0..n {
                out[(a * n + a) * n + c] = 0.0;
            }
        }
        Self::new(labels, out)
    }

    /// The same algebra with basis vectors reordered: new `e_a` = old `e_{perm[a]}`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim;
        check_permutation(perm, n)?;
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        Self::from_fn(labels, |a, b, c| self.c(perm[a], perm[b], perm[c]))
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidStructure("not a permutation".into()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Which block of a decomposition a basis index belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockId {
    /// `k_i`; `K(0)` is the center `k₀`.
    K(usize),
    /// `p_j`.
    P(usize),
}

/// Partition of the basis into `k₀, k₁, …, k_r` followed by `p₁, …, p_l`.
///
/// `k₀` (the center of `k`) is always present but may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductiveDecomposition {
    pub k: Vec<Vec<usize>>,
    pub p: Vec<Vec<usize>>,
}

impl ReductiveDecomposition {
    pub fn new(k: Vec<Vec<usize>>, p: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidDecomposition(
                "the center slot k0 must be present (possibly empty)".into(),
            ));
        }
        if k[0].len() > 1 {
            return Err(Error::InvalidDecomposition(
                "the center k0 has dimension at most one".into(),
            ));
        }
        let dec = ReductiveDecomposition { k, p };
        let mut seen = vec![false; dim];
        for idx in dec.k.iter().chain(dec.p.iter()).flatten() {
            if *idx >= dim || seen[*idx] {
                return Err(Error::InvalidDecomposition(format!(
                    "index {idx} out of range or repeated"
                )));
            }
            seen[*idx] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidDecomposition(
                "blocks do not cover the basis".into(),
            ));
        }
        Ok(dec)
    }

    pub fn dim(&self) -> usize {
        self.k.iter().chain(self.p.iter()).map(Vec::len).sum()
    }

    /// Number of simple ideals `k₁ … k_r`.
    pub fn r(&self) -> usize {
        self.k.len() - 1
    }

    pub fn center_dim(&self) -> usize {
        self.k[0].len()
    }

    pub fn k0(&self) -> &[usize] {
        &self.k[0]
    }

    pub fn k_indices(&self) -> Vec<usize> {
        self.k.iter().flatten().copied().collect()
    }

    pub fn p_indices(&self) -> Vec<usize> {
        self.p.iter().flatten().copied().collect()
    }

    /// Block membership for every basis index.
    pub fn block_map(&self) -> Vec<BlockId> {
        let mut map = vec![BlockId::K(0); self.dim()];
        for (i, block) in self.k.iter().enumerate() {
            for &idx in block {
                map[idx] = BlockId::K(i);
            }
        }
        for (j, block) in self.p.iter().enumerate() {
            for &idx in block {
                map[idx] = BlockId::P(j);
            }
        }
        map
    }

    pub fn is_p_mask(&self) -> Vec<bool> {
        self.block_map()
            .into_iter()
            .map(|b| matches!(b, BlockId::P(_)))
            .collect()
    }

    /// Residuals of the structural invariants: bracket relations between
    /// blocks and Killing orthogonality. Each entry is a max-norm.
    pub fn residuals(&self, alg: &LieAlgebraData) -> DecompositionResiduals {
        let map = self.block_map();
        let n = alg.dim();
        let mut r = DecompositionResiduals::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = alg.c(i, j, k).abs();
                    if v == 0.0 {
                        continue;
                    }
                    match (map[i], map[j], map[k]) {
                        (BlockId::K(a), BlockId::K(b), _) if a != b => {
                            r.ideals_commute = r.ideals_commute.max(v)
                        }
                        (BlockId::K(a), BlockId::K(_), BlockId::K(c)) if a != c => {
                            r.ideals_closed = r.ideals_closed.max(v)
                        }
                        (BlockId::K(_), BlockId::K(_), BlockId::P(_)) => {
                            r.ideals_closed = r.ideals_closed.max(v)
                        }
                        (BlockId::K(_), BlockId::P(_), BlockId::K(_))
                        | (BlockId::P(_), BlockId::K(_), BlockId::K(_)) => {
                            r.k_preserves_p = r.k_preserves_p.max(v)
                        }
                        _ => {}
                    }
                }
            }
        }
        let b = alg.killing_form();
        for i in 0..n {
            for j in 0..n {
                if map[i] != map[j] {
                    r.killing_orthogonality = r.killing_orthogonality.max(b[(i, j)].abs());
                }
            }
        }
        r
    }

    pub fn validate(&self, alg: &LieAlgebraData) -> Result<()> {
        if self.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: self.dim(),
            });
        }
        let r = self.residuals(alg);
        if r.max() > STRUCTURE_TOL {
            return Err(Error::InvalidDecomposition(format!("{r:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecompositionResiduals {
    /// `[k_i, k_j]` for `i ≠ j`.
    pub ideals_commute: f64,
    /// Components of `[k_i, k_i]` outside `k_i`.
    pub ideals_closed: f64,
    /// Components of `[k, p]` outside `p`.
    pub k_preserves_p: f64,
    /// Killing form between distinct blocks.
    pub killing_orthogonality: f64,
}

impl DecompositionResiduals {
    pub fn max(&self) -> f64 {
        self.ideals_commute
            .max(self.ideals_closed)
            .max(self.k_preserves_p)
            .max(self.killing_orthogonality)
    }
}

/// Metric signature `(n₊, n₋)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn is_riemannian(&self) -> bool {
        self.negative == 0
    }

    pub fn is_lorentzian(&self) -> bool {
        self.positive + self.negative > 1 && (self.negative == 1 || self.positive == 1)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.positive, self.negative)
    }
}

/// Eigenvalue-based signature of a symmetric matrix, or an error when its
/// smallest absolute eigenvalue is below `DEGENERACY_TOL` times the largest.
pub fn signature_of(m: &DMatrix<f64>) -> Result<Signature> {
    let eig = m.clone().symmetric_eigenvalues();
    let largest = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let smallest = eig.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    if largest == 0.0 || smallest < DEGENERACY_TOL * largest {
        return Err(Error::DegenerateMetric(format!(
            "eigenvalue magnitudes range over [{smallest:e}, {largest:e}]"
        )));
    }
    let positive = eig.iter().filter(|v| **v > 0.0).count();
    Ok(Signature {
        positive,
        negative: eig.len() - positive,
    })
}

/// A nondegenerate symmetric bilinear form on the algebra, with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Gram {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    signature: Signature,
}

impl Gram {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DegenerateMetric("gram matrix is not square".into()));
        }
        let n = matrix.nrows();
        let scale = matrix.amax();
        for i in 0..n {
            for j in (i + 1)..n {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::DegenerateMetric(
                        "gram matrix is not symmetric".into(),
                    ));
                }
            }
        }
        let signature = signature_of(&matrix)?;
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateMetric("gram matrix is singular".into()))?;
        Ok(Gram {
            matrix,
            inverse,
            signature,
        })
    }

    pub fn identity(n: usize) -> Self {
        Gram {
            matrix: DMatrix::identity(n, n),
            inverse: DMatrix::identity(n, n),
            signature: Signature {
                positive: n,
                negative: 0,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        let y = DVector::from_column_slice(y);
        (x.transpose() * &self.matrix * y)[(0, 0)]
    }

    /// Simultaneous reordering of rows and columns, matching [`LieAlgebraData::permuted`].
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.dim())?;
        let n = self.dim();
        Gram::new(DMatrix::from_fn(n, n, |a, b| {
            self.matrix[(perm[a], perm[b])]
        }))
    }
}

/// A metric of the form `a·(−B)|_p + a₀·(−B)|_{k₀} + … + a_r·(−B)|_{k_r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub a: f64,
    /// `a₀ … a_r`; the `a₀` slot is ignored when `k₀` is empty.
    pub a_k: Vec<f64>,
    pub gram: Gram,
}

impl MetricSpec {
    pub fn signature(&self) -> Signature {
        self.gram.signature()
    }
}

/// Block-scales `−B` according to the decomposition.
pub fn build_metric(
    alg: &LieAlgebraData,
    dec: &ReductiveDecomposition,
    a: f64,
    a_k: &[f64],
) -> Result<MetricSpec> {
    if dec.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: dec.dim(),
        });
    }
    if a_k.len() != dec.k.len() {
        return Err(Error::DimensionMismatch {
            expected: dec.k.len(),
            got: a_k.len(),
        });
    }
    if a == 0.0 {
        return Err(Error::ZeroScalar { block: "p".into() });
    }
    for (i, &ai) in a_k.iter().enumerate() {
        if ai == 0.0 && !dec.k[i].is_empty() {
            return Err(Error::ZeroScalar {
                block: format!("k{i}"),
            });
        }
    }
    let neg_b = -alg.killing_form();
    let map = dec.block_map();
    let n = alg.dim();
    for (name, block) in dec
        .k
        .iter()
        .enumerate()
        .map(|(i, b)| (format!("k{i}"), b))
        .chain(
            dec.p
                .iter()
                .enumerate()
                .map(|(j, b)| (format!("p{}", j + 1), b)),
        )
    {
        if block.is_empty() {
            continue;
        }
        let sub = DMatrix::from_fn(block.len(), block.len(), |x, y| neg_b[(block[x], block[y])]);
        signature_of(&sub).map_err(|_| {
            Error::DegenerateMetric(format!("Killing form vanishes on block {name}"))
        })?;
    }
    let scale = |id: BlockId| match id {
        BlockId::K(i) => a_k[i],
        BlockId::P(_) => a,
    };
    let gram = DMatrix::from_fn(n, n, |i, j| {
        if map[i] == map[j] {
            scale(map[i]) * neg_b[(i, j)]
        } else {
            0.0
        }
    });
    Ok(MetricSpec {
        a,
        a_k: a_k.to_vec(),
        gram: Gram::new(gram)?,
    })
}

/// Gram–Schmidt with respect to `−B` inside every block, so that `−B` is the
/// identity on the returned basis. Requires `−B` positive definite on blocks.
pub fn orthonormalize(
    alg: &LieAlgebraData,
    dec: &ReductiveDecomposition,
) -> Result<LieAlgebraData> {
    let n = alg.dim();
    let neg_b = -alg.killing_form();
    let mut t = DMatrix::zeros(n, n);
    for block in dec.k.iter().chain(dec.p.iter()) {
        if block.is_empty() {
            continue;
        }
        let m = block.len();
        let sub = DMatrix::from_fn(m, m, |x, y| neg_b[(block[x], block[y])]);
        let chol = sub.cholesky().ok_or_else(|| {
            Error::DegenerateMetric("−B is not positive definite on a block".into())
        })?;
        // columns of L⁻ᵀ give the Gram–Schmidt basis
        let l_inv_t = chol
            .l()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateMetric("singular block".into()))?
            .transpose();
        for x in 0..m {
            for y in 0..m {
                t[(block[x], block[y])] = l_inv_t[(x, y)];
            }
        }
    }
    alg.change_basis(&t, alg.labels().to_vec())
}

/// Block-diagonal sum of two metric Lie algebras; brackets across factors vanish.
pub fn direct_sum(
    alg1: &LieAlgebraData,
    gram1: &Gram,
    alg2: &LieAlgebraData,
    gram2: &Gram,
) -> Result<(LieAlgebraData, Gram)> {
    let (n1, n2) = (alg1.dim(), alg2.dim());
    let n = n1 + n2;
    let labels = alg1
        .labels()
        .iter()
        .cloned()
        .chain(alg2.labels().iter().cloned())
        .collect();
    let alg = LieAlgebraData::from_fn(labels, |i, j, k| {
        if i < n1 && j < n1 && k < n1 {
            alg1.c(i, j, k)
        } else if i >= n1 && j >= n1 && k >= n1 {
            alg2.c(i - n1, j - n1, k - n1)
        } else {
            0.0
        }
    })?;
    let gram = DMatrix::from_fn(n, n, |i, j| {
        if i < n1 && j < n1 {
            gram1.matrix()[(i, j)]
        } else if i >= n1 && j >= n1 {
            gram2.matrix()[(i - n1, j - n1)]
        } else {
            0.0
        }
    });
    Ok((alg, Gram::new(gram)?))
}

/// Passes from `g = k ⊕ p` to `g^R = k ⊕ ip`: `[p,p]` brackets flip sign and
/// the metric flips sign on `p`, with `k`–`p` cross terms dropped.
pub fn dualize(
    alg: &LieAlgebraData,
    dec: &ReductiveDecomposition,
    gram: &Gram,
) -> Result<(LieAlgebraData, Gram)> {
    if dec.dim() != alg.dim() || gram.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: dec.dim(),
        });
    }
    let in_p = dec.is_p_mask();
    let structure = {
        let n = alg.dim();
        let mut s = alg.structure().to_vec();
        for i in 0..n {
            for j in 0..n {
                if in_p[i] && in_p[j] {
                    for k in 0..n {
                        let idx = (i * n + j) * n + k;
                        s[idx] = -s[idx];
                    }
                }
            }
        }
        s
    };
    let dual = LieAlgebraData::new(alg.labels().to_vec(), structure)?;
    let source = alg.jacobi_residual();
    let residual = dual.jacobi_residual();
    let scale = 1.0 + dual.max_abs_constant();
    if residual > (10.0 * source).max(STRUCTURE_TOL * scale * scale) {
        return Err(Error::JacobiViolation { residual });
    }
    let n = alg.dim();
    let g = gram.matrix();
    let matrix = DMatrix::from_fn(n, n, |i, j| match (in_p[i], in_p[j]) {
        (false, false) => g[(i, j)],
        (true, true) => -g[(i, j)],
        _ => 0.0,
    });
    Ok((dual, Gram::new(matrix)?))
}

/// Serializable form of an algebra: `{dim, labels, structure, blocks}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub labels: Vec<String>,
    pub structure: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<ReductiveDecomposition>,
}

impl AlgebraDocument {
    pub fn from_algebra(alg: &LieAlgebraData, blocks: Option<&ReductiveDecomposition>) -> Self {
        let n = alg.dim();
        let structure = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| alg.c(i, j, k)).collect())
                    .collect()
            })
            .collect();
        AlgebraDocument {
            dim: n,
            labels: alg.labels().to_vec(),
            structure,
            blocks: blocks.cloned(),
        }
    }

    pub fn into_parts(self) -> Result<(LieAlgebraData, Option<ReductiveDecomposition>)> {
        let n = self.dim;
        if self.labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.labels.len(),
            });
        }
        let mut flat = Vec::with_capacity(n * n * n);
        if self.structure.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.structure.len(),
            });
        }
        for plane in &self.structure {
            if plane.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: plane.len(),
                });
            }
            for row in plane {
                if row.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: row.len(),
                    });
                }
                flat.extend_from_slice(row);
            }
        }
        let alg = LieAlgebraData::new(self.labels, flat)?;
        let dec = match self.blocks {
            Some(b) => Some(ReductiveDecomposition::new(b.k, b.p, n)?),
            None => None,
        };
        Ok((alg, dec))
    }
}

/// The 2-dimensional non-unimodular algebra `[e₀, e₁] = e₁` (the Lie algebra
/// of the hyperbolic plane's solvable isometry group).
pub fn hyperbolic_plane() -> LieAlgebraData {
    LieAlgebraData::from_fn(vec!["h0".into(), "h1".into()], |i, j, k| match (i, j, k) {
        (0, 1, 1) => 1.0,
        (1, 0, 1) => -1.0,
        _ => 0.0,
    })
    .expect("antisymmetric by construction")
}

/// `su(2)` on the basis `E_a = (i/2)σ_a`, for which `[E₁, E₂] = −E₃` cyclically.
pub fn su2_pauli() -> LieAlgebraData {
    LieAlgebraData::from_fn(vec!["E1".into(), "E2".into(), "E3".into()], |i, j, k| {
        levi_civita(i, j, k) * -1.0
    })
    .expect("antisymmetric by construction")
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}
