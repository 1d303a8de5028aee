//! Levi-Civita connections and Ricci tensors of left-invariant metrics.
//!
//! All tensors are expressed in the basis of the given algebra. The metric is
//! any nondegenerate symmetric matrix; nothing here assumes a definite
//! signature. The closed forms for naturally reductive metrics are provided
//! alongside the general formulas so the two can be compared.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lie::{BlockId, Gram, LieAlgebraData, ReductiveDecomposition};

/// `∇_{eᵢ} eⱼ = Σₖ Γ[i][j][k] eₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoefficients {
    dim: usize,
    gamma: Vec<f64>,
}

impl ConnectionCoefficients {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.dim + j) * self.dim + k]
    }

    /// Matrix of `∇_{eᵢ}`: column `j` holds the coordinates of `∇_{eᵢ}eⱼ`.
    pub fn operator(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |k, j| self.get(i, j, k))
    }

    /// Largest entry of `⟨∇ᵢeⱼ, eₖ⟩ + ⟨eⱼ, ∇ᵢeₖ⟩`.
    pub fn compatibility_defect(&self, gram: &Gram) -> f64 {
        let g = gram.matrix();
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            let m = self.operator(i);
            let gm = g * &m;
            let sym = &gm + gm.transpose();
            worst = worst.max(sym.amax());
        }
        worst
    }

    /// Largest entry of `∇ᵢeⱼ − ∇ⱼeᵢ − [eᵢ, eⱼ]`.
    pub fn torsion_defect(&self, alg: &LieAlgebraData) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = self.get(i, j, k) - self.get(j, i, k) - alg.c(i, j, k);
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }

    /// Largest coefficient difference.
    pub fn max_difference(&self, other: &ConnectionCoefficients) -> f64 {
        self.gamma
            .iter()
            .zip(&other.gamma)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_dims(alg: &LieAlgebraData, gram: &Gram) -> Result<()> {
    if alg.dim() != gram.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: gram.dim(),
        });
    }
    Ok(())
}

/// Lowered structure constants `⟨[eᵢ, eⱼ], eₖ⟩`.
fn lowered(alg: &LieAlgebraData, gram: &Gram) -> Vec<f64> {
    let n = alg.dim();
    let g = gram.matrix();
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let c = alg.c(i, j, l);
                if c == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[(i * n + j) * n + k] += c * g[(l, k)];
                }
            }
        }
    }
    out
}

/// Koszul formula `2⟨∇ₓY, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩`.
pub fn koszul_connection(alg: &LieAlgebraData, gram: &Gram) -> Result<ConnectionCoefficients> {
    check_dims(alg, gram)?;
    let n = alg.dim();
    let cl = lowered(alg, gram);
    let at = |i: usize, j: usize, k: usize| cl[(i * n + j) * n + k];
    let ginv = gram.inverse();
    let mut gamma = vec![0.0; n * n * n];
    let mut low = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            for (k, slot) in low.iter_mut().enumerate() {
                *slot = 0.5 * (at(i, j, k) - at(j, k, i) + at(k, i, j));
            }
            for l in 0..n {
                gamma[(i * n + j) * n + l] = (0..n).map(|k| ginv[(l, k)] * low[k]).sum();
            }
        }
    }
    Ok(ConnectionCoefficients { dim: n, gamma })
}

/// Closed-form connection of the metric `a·g|_p + Σ aᵢ·g|_{kᵢ}`:
/// `∇ₓY = ½[X,Y]` inside `k` or inside `p`, `(aᵢ/2a)[X,Y]` for `X ∈ p, Y ∈ kᵢ`
/// and `(1 − aᵢ/2a)[X,Y]` for `X ∈ kᵢ, Y ∈ p`.
pub fn nat_reductive_connection(
    alg: &LieAlgebraData,
    dec: &ReductiveDecomposition,
    a: f64,
    a_k: &[f64],
) -> Result<ConnectionCoefficients> {
    let n = alg.dim();
    if dec.dim() != n || a_k.len() != dec.k.len() {
        return Err(Error::DimensionMismatch {
            expected: dec.k.len(),
            got: a_k.len(),
        });
    }
    let map = dec.block_map();
    let factor = |i: usize, j: usize| match (map[i], map[j]) {
        (BlockId::P(_), BlockId::K(l)) => a_k[l] / (2.0 * a),
        (BlockId::K(l), BlockId::P(_)) => 1.0 - a_k[l] / (2.0 * a),
        _ => 0.5,
    };
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let f = factor(i, j);
            for k in 0..n {
                gamma[(i * n + j) * n + k] = f * alg.c(i, j, k);
            }
        }
    }
    Ok(ConnectionCoefficients { dim: n, gamma })
}

/// Ricci tensor `Ric(Y,Z) = tr(X ↦ R(X,Y)Z)` with
/// `R(X,Y) = ∇ₓ∇_Y − ∇_Y∇ₓ − ∇_{[X,Y]}`.
pub fn ricci(alg: &LieAlgebraData, gram: &Gram) -> Result<DMatrix<f64>> {
    let conn = koszul_connection(alg, gram)?;
    Ok(ricci_from_connection(alg, &conn))
}

/// Contracts the curvature of an arbitrary connection.
pub fn ricci_from_connection(alg: &LieAlgebraData, conn: &ConnectionCoefficients) -> DMatrix<f64> {
    let n = alg.dim();
    let ops: Vec<DMatrix<f64>> = (0..n).map(|i| conn.operator(i)).collect();
    let mut ric = DMatrix::zeros(n, n);
    // Ric[j][k] = Σᵢ (row i of R(eᵢ, eⱼ))[k]
    for i in 0..n {
        let mi = &ops[i];
        for j in 0..n {
            let mj = &ops[j];
            for k in 0..n {
                let mut v = 0.0;
                for q in 0..n {
                    v += mi[(i, q)] * mj[(q, k)] - mj[(i, q)] * mi[(q, k)];
                }
                for l in 0..n {
                    let c = alg.c(i, j, l);
                    if c != 0.0 {
                        v -= c * ops[l][(i, k)];
                    }
                }
                ric[(j, k)] += v;
            }
        }
    }
    symmetrize(ric)
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// The forms `A₀ … A_r` and `T` on `p`, returned as `N×N` matrices supported
/// on `p × p`: `Aᵢ(X,Y) = Tr_p(ad X ∘ πᵢ ∘ ad Y)`, `T(X,Y) = Tr_p(π ad X ∘ π ad Y)`.
pub fn forms_a_t(
    alg: &LieAlgebraData,
    dec: &ReductiveDecomposition,
) -> (Vec<DMatrix<f64>>, DMatrix<f64>) {
    let n = alg.dim();
    let p = dec.p_indices();
    let ads: Vec<DMatrix<f64>> = (0..n).map(|i| alg.ad_basis(i)).collect();
    let form = |targets: &[usize]| {
        let mut m = DMatrix::zeros(n, n);
        for &x in &p {
            for &y in &p {
                let mut v = 0.0;
                for &z in &p {
                    for &w in targets {
                        v += ads[x][(z, w)] * ads[y][(w, z)];
                    }
                }
                m[(x, y)] = v;
            }
        }
        symmetrize(m)
    };
    let a_forms = dec.k.iter().map(|block| form(block)).collect();
    let t = form(&p);
    (a_forms, t)
}

/// Closed-form Ricci tensor of `a·g|_p + Σ aᵢ·g|_{kᵢ}` with `g = −B`:
/// `Ric|_{kⱼ} = −(a²cⱼ − aⱼ²cⱼ + aⱼ²)/(4a²)·B`, `Ric|_p = ½Σ(aᵢ/a − 1)Aᵢ − ¼B|_p`,
/// and zero across blocks. `c` lists `c₁ … c_r`; `c₀ = 0`.
pub fn ricci_nat_reductive(
    alg: &LieAlgebraData,
    dec: &ReductiveDecomposition,
    c: &[f64],
    a: f64,
    a_k: &[f64],
) -> Result<DMatrix<f64>> {
    let n = alg.dim();
    if a_k.len() != dec.k.len() || c.len() + 1 != dec.k.len() {
        return Err(Error::DimensionMismatch {
            expected: dec.k.len(),
            got: a_k.len(),
        });
    }
    let b = alg.killing_form();
    let (a_forms, _) = forms_a_t(alg, dec);
    let map = dec.block_map();
    let mut ric = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            ric[(i, j)] = match (map[i], map[j]) {
                (BlockId::K(l), BlockId::K(m)) if l == m => {
                    let cl = if l == 0 { 0.0 } else { c[l - 1] };
                    let al = a_k[l];
                    -(a * a * cl - al * al * cl + al * al) / (4.0 * a * a) * b[(i, j)]
                }
                (BlockId::P(_), BlockId::P(_)) => {
                    let mut v = -0.25 * b[(i, j)];
                    for (l, form) in a_forms.iter().enumerate() {
                        v += 0.5 * (a_k[l] / a - 1.0) * form[(i, j)];
                    }
                    v
                }
                _ => 0.0,
            };
        }
    }
    Ok(ric)
}

/// `Ric(Y,Z) = −Tr(A_Z ∘ A_Y)` with `A_X Y = −∇_Y X`. Only meaningful for
/// naturally reductive metrics.
pub fn ricci_via_a(alg: &LieAlgebraData, gram: &Gram) -> Result<DMatrix<f64>> {
    let conn = koszul_connection(alg, gram)?;
    let n = alg.dim();
    // A_x[(k, j)] = −Γ[j][x][k]
    let a_ops: Vec<DMatrix<f64>> = (0..n)
        .map(|x| DMatrix::from_fn(n, n, |k, j| -conn.get(j, x, k)))
        .collect();
    let mut ric = DMatrix::zeros(n, n);
    for y in 0..n {
        for z in y..n {
            let v = -a_ops[z].component_mul(&a_ops[y].transpose()).sum();
            ric[(y, z)] = v;
            ric[(z, y)] = v;
        }
    }
    Ok(ric)
}

/// `sc = tr(G⁻¹ Ric)`.
pub fn scalar_curvature(alg: &LieAlgebraData, gram: &Gram) -> Result<f64> {
    let ric = ricci(alg, gram)?;
    Ok((gram.inverse() * ric).trace())
}

/// `½(𝔏ₓg)` for left-invariant `X`: `−½(⟨[X,Y],Z⟩ + ⟨Y,[X,Z]⟩)`.
pub fn half_lie_derivative(alg: &LieAlgebraData, gram: &Gram, x: &[f64]) -> Result<DMatrix<f64>> {
    check_dims(alg, gram)?;
    let ad = alg.ad(x)?;
    let g = gram.matrix();
    let gad = g * ad;
    Ok((&gad + gad.transpose()) * -0.5)
}

/// `Ric_X^m = Ric + ½𝔏ₓg − (1/m) X* ⊗ X*`.
pub fn ric_x_m(alg: &LieAlgebraData, gram: &Gram, x: &[f64], m: f64) -> Result<DMatrix<f64>> {
    if !(m > 0.0) {
        return Err(Error::NonPositiveM(m.to_string()));
    }
    let ric = ricci(alg, gram)?;
    if x.iter().all(|v| *v == 0.0) {
        if x.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: x.len(),
            });
        }
        return Ok(ric);
    }
    let lie = half_lie_derivative(alg, gram, x)?;
    let xs = gram.matrix() * DMatrix::from_column_slice(x.len(), 1, x);
    let outer = &xs * xs.transpose();
    Ok(ric + lie - outer / m)
}

/// Operator norm of `ad X + (ad X)ᵗ`, where `ᵗ` is the metric adjoint
/// `G⁻¹ (ad X)ᵀ G`. Vanishes iff `X` is a Killing field.
pub fn killing_defect(alg: &LieAlgebraData, gram: &Gram, x: &[f64]) -> Result<f64> {
    check_dims(alg, gram)?;
    let ad = alg.ad(x)?;
    let adj = gram.inverse() * ad.transpose() * gram.matrix();
    let s = ad + adj;
    Ok(s.singular_values().max())
}

/// `(v, w)_Q = tr(G⁻¹ v G⁻¹ w)`.
pub fn trace_pairing(gram: &Gram, v: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    let gi = gram.inverse();
    (gi * v * gi * w).trace()
}

/// Finite-difference test of `grad sc = −ric`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientCheck {
    /// Centered difference of `t ↦ sc(G + t·v)` at `0`.
    pub derivative: f64,
    /// `(ric, v)_Q`.
    pub pairing: f64,
    /// `|derivative + pairing|`.
    pub residual: f64,
    pub relative: f64,
}

pub fn scalar_gradient_check(
    alg: &LieAlgebraData,
    gram: &Gram,
    direction: &DMatrix<f64>,
    h: f64,
) -> Result<GradientCheck> {
    check_dims(alg, gram)?;
    if !(h > 0.0) {
        return Err(Error::InvalidParams(format!(
            "step must be positive, got {h}"
        )));
    }
    let n = alg.dim();
    if direction.nrows() != n || direction.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: direction.nrows(),
        });
    }
    let v = symmetrize(direction.clone());
    let g = gram.matrix();
    let plus = Gram::new(g + &v * h)?;
    let minus = Gram::new(g - &v * h)?;
    let derivative = (scalar_curvature(alg, &plus)? - scalar_curvature(alg, &minus)?) / (2.0 * h);
    let ric = ricci(alg, gram)?;
    let pairing = trace_pairing(gram, &ric, &v);
    let residual = (derivative + pairing).abs();
    let scale = derivative.abs().max(pairing.abs());
    let relative = if residual == 0.0 {
        0.0
    } else {
        residual / scale
    };
    Ok(GradientCheck {
        derivative,
        pairing,
        residual,
        relative,
    })
}
