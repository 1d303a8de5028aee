//! Matrix models of the classical cases.
//!
//! `su(n)` is realized as traceless anti-Hermitian matrices, `so(n)` as real
//! antisymmetric matrices and `sp(k)` as the quaternionic anti-Hermitian
//! matrices `[[A, B], [−B̄, Ā]]` inside `u(2k)`. Complex matrices are realified
//! (`A + iB ↦ [[A, −B], [B, A]]`), so all brackets are real commutators and the
//! Frobenius product is an ad-invariant inner product.

use nalgebra::DMatrix;

use super::{EmbeddingCase, Family};
use crate::error::{Error, Result};
use crate::lie::{orthonormalize, LieAlgebraData, ReductiveDecomposition};

type Mat = DMatrix<f64>;

const SPAN_TOL: f64 = 1e-10;

/// An explicit algebra with a basis adapted to `k₀, k₁, …, k_r, p` on which
/// `−B` is the identity.
#[derive(Clone, Debug)]
pub struct Realization {
    pub alg: LieAlgebraData,
    pub dec: ReductiveDecomposition,
}

impl Realization {
    /// Coordinates of the unit center generator `e₀`.
    pub fn e0(&self) -> Option<Vec<f64>> {
        let idx = *self.dec.k0().first()?;
        let mut v = vec![0.0; self.alg.dim()];
        v[idx] = 1.0;
        Some(v)
    }
}

pub fn realize(case: &EmbeddingCase) -> Result<Realization> {
    if !case.realizable {
        return Err(Error::NotRealizable(case.id.clone()));
    }
    let k = case.params.k.unwrap_or(0) as usize;
    match case.family {
        Family::SU2_R0 => {
            let center = diag_i(&[1.0, -1.0]);
            assemble(
                su_basis(2).into_iter().map(realify).collect(),
                vec![vec![realify(center)]],
            )
        }
        Family::SUK1_S => {
            let mut d = vec![-1.0; k + 1];
            d[0] = k as f64;
            let ideal = su_basis(k)
                .into_iter()
                .map(|m| realify(embed(&m, k + 1, 1)))
                .collect();
            assemble(
                su_basis(k + 1).into_iter().map(realify).collect(),
                vec![vec![realify(diag_i(&d))], ideal],
            )
        }
        Family::SU_L1L2 => {
            let l1 = case.params.l1.unwrap() as usize;
            let l2 = case.params.l2.unwrap() as usize;
            let n = l1 + l2;
            let d: Vec<f64> = (0..n)
                .map(|i| if i < l1 { l2 as f64 } else { -(l1 as f64) })
                .collect();
            let k1 = su_basis(l1)
                .into_iter()
                .map(|m| realify(embed(&m, n, 0)))
                .collect();
            let k2 = su_basis(l2)
                .into_iter()
                .map(|m| realify(embed(&m, n, l1)))
                .collect();
            assemble(
                su_basis(n).into_iter().map(realify).collect(),
                vec![vec![realify(diag_i(&d))], k1, k2],
            )
        }
        Family::SO2K_UK => {
            let center = diag_i(&vec![1.0; k]);
            let ideal = su_basis(k).into_iter().map(realify).collect();
            assemble(so_basis(2 * k), vec![vec![realify(center)], ideal])
        }
        Family::SOK2_SO2SOK => {
            let n = k + 2;
            let center = elementary_rotation(n, 0, 1);
            let ideal = (2..n)
                .flat_map(|a| ((a + 1)..n).map(move |b| elementary_rotation(n, a, b)))
                .collect();
            assemble(so_basis(n), vec![vec![center], ideal])
        }
        Family::SPK_UK => {
            let (ambient, center, ideal) = sp_model(k);
            assemble(ambient, vec![vec![center], ideal])
        }
        _ => Err(Error::NotRealizable(case.id.clone())),
    }
}

/// A complex matrix as `(real part, imaginary part)`.
#[derive(Clone, Debug)]
struct CMat {
    re: Mat,
    im: Mat,
}

impl CMat {
    fn zeros(n: usize) -> Self {
        CMat {
            re: Mat::zeros(n, n),
            im: Mat::zeros(n, n),
        }
    }
}

fn realify(m: CMat) -> Mat {
    let n = m.re.nrows();
    let mut out = Mat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(&m.re);
    out.view_mut((n, n), (n, n)).copy_from(&m.re);
    out.view_mut((0, n), (n, n)).copy_from(&(-&m.im));
    out.view_mut((n, 0), (n, n)).copy_from(&m.im);
    out
}

fn diag_i(d: &[f64]) -> CMat {
    let mut m = CMat::zeros(d.len());
    for (i, v) in d.iter().enumerate() {
        m.im[(i, i)] = *v;
    }
    m
}

fn embed(m: &CMat, n: usize, offset: usize) -> CMat {
    let s = m.re.nrows();
    let mut out = CMat::zeros(n);
    out.re.view_mut((offset, offset), (s, s)).copy_from(&m.re);
    out.im.view_mut((offset, offset), (s, s)).copy_from(&m.im);
    out
}

/// Spanning set of `su(n)`: `E_ab − E_ba`, `i(E_ab + E_ba)`, `i(E_aa − E_{a+1,a+1})`.
fn su_basis(n: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut m = CMat::zeros(n);
            m.re[(a, b)] = 1.0;
            m.re[(b, a)] = -1.0;
            out.push(m);
            let mut m = CMat::zeros(n);
            m.im[(a, b)] = 1.0;
            m.im[(b, a)] = 1.0;
            out.push(m);
        }
    }
    for a in 0..n.saturating_sub(1) {
        let mut m = CMat::zeros(n);
        m.im[(a, a)] = 1.0;
        m.im[(a + 1, a + 1)] = -1.0;
        out.push(m);
    }
    out
}

fn elementary_rotation(n: usize, a: usize, b: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(a, b)] = 1.0;
    m[(b, a)] = -1.0;
    m
}

fn so_basis(n: usize) -> Vec<Mat> {
    (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| elementary_rotation(n, a, b)))
        .collect()
}

/// `sp(k) ⊂ u(2k)` with its `u(k)` subalgebra `[[A, 0], [0, Ā]]`.
/// Returns (ambient spanning set, center generator, `su(k)` spanning set).
fn sp_model(k: usize) -> (Vec<Mat>, Mat, Vec<Mat>) {
    let n = 2 * k;
    let diag_block = |a: &CMat| {
        let mut m = CMat::zeros(n);
        m.re.view_mut((0, 0), (k, k)).copy_from(&a.re);
        m.im.view_mut((0, 0), (k, k)).copy_from(&a.im);
        m.re.view_mut((k, k), (k, k)).copy_from(&a.re);
        m.im.view_mut((k, k), (k, k)).copy_from(&(-&a.im));
        realify(m)
    };
    // [[0, B], [−B̄, 0]] with B complex symmetric
    let off_block = |b: &CMat| {
        let mut m = CMat::zeros(n);
        m.re.view_mut((0, k), (k, k)).copy_from(&b.re);
        m.im.view_mut((0, k), (k, k)).copy_from(&b.im);
        m.re.view_mut((k, 0), (k, k)).copy_from(&(-&b.re));
        m.im.view_mut((k, 0), (k, k)).copy_from(&b.im);
        realify(m)
    };
    let center = diag_block(&diag_i(&vec![1.0; k]));
    let ideal: Vec<Mat> = su_basis(k).iter().map(diag_block).collect();
    let mut ambient = vec![center.clone()];
    ambient.extend(ideal.iter().cloned());
    for a in 0..k {
        for b in a..k {
            let mut re = CMat::zeros(k);
            re.re[(a, b)] = 1.0;
            re.re[(b, a)] = 1.0;
            ambient.push(off_block(&re));
            let mut im = CMat::zeros(k);
            im.im[(a, b)] = 1.0;
            im.im[(b, a)] = 1.0;
            ambient.push(off_block(&im));
        }
    }
    (ambient, center, ideal)
}

fn frob(a: &Mat, b: &Mat) -> f64 {
    a.component_mul(b).sum()
}

/// Frobenius Gram–Schmidt of `candidates` against `fixed` and each other.
fn orthonormal_extend(fixed: &[Mat], candidates: impl IntoIterator<Item = Mat>) -> Vec<Mat> {
    let mut out: Vec<Mat> = Vec::new();
    for mut v in candidates {
        for _ in 0..2 {
            for u in fixed.iter().chain(out.iter()) {
                let c = frob(u, &v);
                v -= u * c;
            }
        }
        let norm = frob(&v, &v).sqrt();
        if norm > SPAN_TOL {
            out.push(v / norm);
        }
    }
    out
}

/// Sign rule for the center generator: first nonzero entry (row-major) positive.
fn fix_sign(m: Mat) -> Mat {
    let first = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)])
        .find(|v| v.abs() > 1e-12);
    match first {
        Some(v) if v < 0.0 => -m,
        _ => m,
    }
}

fn assemble(ambient: Vec<Mat>, k_blocks: Vec<Vec<Mat>>) -> Result<Realization> {
    let mut basis: Vec<Mat> = Vec::new();
    let mut k_idx = Vec::new();
    let mut labels = Vec::new();
    for (i, block) in k_blocks.into_iter().enumerate() {
        let mut ortho = orthonormal_extend(&basis, block);
        if i == 0 {
            ortho = ortho.into_iter().map(fix_sign).collect();
        }
        let start = basis.len();
        for (j, _) in ortho.iter().enumerate() {
            labels.push(if i == 0 {
                "k0".to_string()
            } else {
                format!("k{i}_{j}")
            });
        }
        basis.extend(ortho);
        k_idx.push((start..basis.len()).collect::<Vec<_>>());
    }
    let p = orthonormal_extend(&basis, ambient.iter().cloned());
    let start = basis.len();
    labels.extend((0..p.len()).map(|j| format!("p_{j}")));
    basis.extend(p);
    let p_idx: Vec<usize> = (start..basis.len()).collect();

    let n = basis.len();
    let mut structure = vec![0.0; n * n * n];
    let mut leak = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            let mut rest = comm.clone();
            for (c, e) in basis.iter().enumerate() {
                let v = frob(&comm, e);
                structure[(i * n + j) * n + c] = v;
                structure[(j * n + i) * n + c] = -v;
                rest -= e * v;
            }
            leak = leak.max(rest.amax());
        }
    }
    if leak > SPAN_TOL {
        return Err(Error::InvalidStructure(format!(
            "matrix model is not closed under brackets (leak {leak:e})"
        )));
    }
    let alg = LieAlgebraData::new(labels, structure)?;
    let dec = ReductiveDecomposition::new(k_idx, vec![p_idx], n)?;
    let alg = orthonormalize(&alg, &dec)?;
    dec.validate(&alg)?;
    Ok(Realization { alg, dec })
}
