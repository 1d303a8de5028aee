//! Exact solutions of the quasi-Einstein systems.
//!
//! Metrics are normalized to `a = 1`. With `X = n₀e₀`, the parameter `p`
//! encodes the size of `X` through `4n₀² = (1 − p)m` (Riemannian convention) or
//! `4n₀² = pm` (timelike center); `m` never affects admissibility.
//!
//! `λ` is always the Einstein-type constant of the full tensor equation,
//! `λ = ¼ − Σ(aᵢ − 1)sᵢ(1 − cᵢ)/(2n)` over `i = 0 … r` with `s₀ = dim k₀`, `c₀ = 0`.

mod tables;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::{EmbeddingCase, Family};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, quadratic_roots, rat, Rational, Surd};

pub use tables::{
    solve_affine_system, solve_f4_table1, solve_table_ii, table_equations, AffineEquation,
    TableSystem,
};

/// How `n₀` is tied to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `4n₀² = (1 − p)m`, `p ≤ 1`; trivial iff `p = 1`.
    Riemannian,
    /// `4n₀² = pm`, `p ≥ 0`; trivial iff `p = 0`.
    LorentzTimelikeCenter,
    /// `4n₀² = pm` with a spacelike center, as in the non-irreducible
    /// Riemannian table; trivial iff `p = 0`.
    SpacelikeCenterPm,
}

impl Branch {
    pub fn n0_formula(self) -> &'static str {
        match self {
            Branch::Riemannian => "n0 = sqrt((1 - p) * m) / 2",
            Branch::LorentzTimelikeCenter | Branch::SpacelikeCenterPm => "n0 = sqrt(p * m) / 2",
        }
    }

    /// The value of `p` at which `X = 0`.
    pub fn trivial_p(self) -> Rational {
        match self {
            Branch::Riemannian => Rational::one(),
            _ => Rational::zero(),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Riemannian => "riemannian",
            Branch::LorentzTimelikeCenter => "lorentz_timelike_center",
            Branch::SpacelikeCenterPm => "spacelike_center_pm",
        })
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "riemannian" => Ok(Branch::Riemannian),
            "lorentz" | "lorentz_timelike_center" => Ok(Branch::LorentzTimelikeCenter),
            "spacelike_center_pm" => Ok(Branch::SpacelikeCenterPm),
            other => Err(Error::InvalidParams(format!("unknown branch {other:?}"))),
        }
    }
}

/// A candidate metric `a·g|_p + Σ aᵢ·g|_{kᵢ}` with `X = n₀e₀`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QEMParams {
    pub case: String,
    pub branch: Branch,
    pub a: Surd,
    /// `a₀ … a_r`.
    pub a_k: Vec<Surd>,
    pub p: Surd,
    pub lambda: Surd,
    pub trivial: bool,
    pub n0_formula: String,
}

impl QEMParams {
    fn new(case: &str, branch: Branch, a_k: Vec<Surd>, p: Surd, lambda: Surd) -> Self {
        let trivial = p == Surd::from_rational(branch.trivial_p());
        QEMParams {
            case: case.to_string(),
            branch,
            a: Surd::one(),
            a_k,
            p,
            lambda,
            trivial,
            n0_formula: branch.n0_formula().to_string(),
        }
    }

    pub fn n0(&self, m: f64) -> Result<f64> {
        n0_from_p(self.p.to_f64(), m, self.branch)
    }

    pub fn a_k_f64(&self) -> Vec<f64> {
        self.a_k.iter().map(Surd::to_f64).collect()
    }

    /// Expanding, steady or shrinking according to the sign of `λ`.
    pub fn kind(&self) -> &'static str {
        match self.lambda.signum() {
            -1 => "expanding",
            0 => "steady",
            _ => "shrinking",
        }
    }
}

/// A printed value that disagrees with an independent recomputation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub id: String,
    pub subject: String,
    pub printed: String,
    pub recomputed: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionReport {
    pub case: String,
    /// Solutions of the system as printed.
    pub solutions: Vec<QEMParams>,
    /// Solutions of the system re-derived from the component equations.
    pub rederived: Vec<QEMParams>,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
}

fn surd(q: Rational) -> Surd {
    Surd::from_rational(q)
}

fn require_irreducible(case: &EmbeddingCase) -> Result<()> {
    if !case.isotropy_irreducible() {
        return Err(Error::InvalidParams(format!(
            "{case} is not isotropy irreducible"
        )));
    }
    Ok(())
}

/// `λ = ¼ − Σ(aᵢ − 1)sᵢ(1 − cᵢ)/(2n)`; `a_k` lists `a₀ … a_r`.
pub fn lambda_from_params(case: &EmbeddingCase, a_k: &[Surd]) -> Result<Surd> {
    require_irreducible(case)?;
    if a_k.len() != case.r + 1 {
        return Err(Error::DimensionMismatch {
            expected: case.r + 1,
            got: a_k.len(),
        });
    }
    let n = int(case.n as i64);
    let mut sum = Surd::zero();
    for (i, ai) in a_k.iter().enumerate() {
        let (s, c) = if i == 0 {
            (int(case.center_dim as i64), Rational::zero())
        } else {
            (int(case.s[i - 1] as i64), case.c[i - 1].clone())
        };
        let w = surd(s * (Rational::one() - c));
        sum = sum + &(ai - &Surd::one()) * &w;
    }
    Ok(surd(rat(1, 4)) - sum / surd(int(2) * n))
}

/// `n₀ = ½√((1 − p)m)` or `½√(pm)`.
pub fn n0_from_p(p: f64, m: f64, branch: Branch) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::NonPositiveM(m.to_string()));
    }
    let radicand = match branch {
        Branch::Riemannian => (1.0 - p) * m,
        _ => p * m,
    };
    if radicand < 0.0 {
        return Err(Error::Inadmissible(format!(
            "p = {p} gives a negative radicand for the {branch} branch"
        )));
    }
    Ok(0.5 * radicand.sqrt())
}

/// `(p + 1)a₀ = 2` on `su(2) ⊃ u(1)`.
pub fn solve_r0(p: &Rational) -> Result<QEMParams> {
    let one = Rational::one();
    if *p == -one.clone() {
        return Err(Error::NoSolution(
            "(p + 1)a0 = 2 has no solution at p = -1".into(),
        ));
    }
    if *p > one {
        return Err(Error::Inadmissible(format!(
            "p = {} exceeds 1 on the riemannian branch",
            fmt_rational(p)
        )));
    }
    let a0 = int(2) / (p + &one);
    let lambda = (int(2) - &a0) / int(4);
    Ok(QEMParams::new(
        Family::SU2_R0.name(),
        Branch::Riemannian,
        vec![surd(a0)],
        surd(p.clone()),
        surd(lambda),
    ))
}

/// Constants `(n, s₁, c₁)` of an `r = 1` case.
fn r1_constants(case: &EmbeddingCase) -> Result<(Rational, Rational, Rational)> {
    require_irreducible(case)?;
    if case.r != 1 {
        return Err(Error::InvalidParams(format!("{case} does not have r = 1")));
    }
    Ok((int(case.n as i64), int(case.s[0] as i64), case.c[0].clone()))
}

/// The quadratic `(2s+n)(1−c)a² − (n+2+2s(1−c))a + nc` whose negative is the
/// common denominator of `p` and numerator of `a₀`.
fn r1_quadratic(case: &EmbeddingCase) -> Result<[Rational; 3]> {
    let (n, s, c) = r1_constants(case)?;
    let one_c = Rational::one() - &c;
    let two = int(2);
    Ok([
        (&two * &s + &n) * &one_c,
        -(&n + &two + &two * &s * &one_c),
        &n * &c,
    ])
}

pub fn solve_r1(case: &EmbeddingCase, a1: &Rational) -> Result<QEMParams> {
    solve_r1_surd(case, &surd(a1.clone()))
}

/// `p = (2(1−c)a₁² + 2c)/D`, `a₀ = D/(2a₁)` with
/// `D = −(2s+n)(1−c)a₁² + (n+2+2s(1−c))a₁ − nc`; `λ` from the ideal equation.
pub fn solve_r1_surd(case: &EmbeddingCase, a1: &Surd) -> Result<QEMParams> {
    let (_, _, c) = r1_constants(case)?;
    if a1.is_zero() {
        return Err(Error::InvalidParams("a1 must be nonzero".into()));
    }
    let [qa, qb, qc] = r1_quadratic(case)?;
    let d = -(&(&(&surd(qa) * a1) + &surd(qb)) * a1 + surd(qc));
    if d.is_zero() {
        return Err(Error::ZeroDenominator(format!("a1 = {a1}")));
    }
    let one_c = surd(Rational::one() - &c);
    let c = surd(c);
    let a1sq = a1.square();
    let p = (&(&surd(int(2)) * &one_c) * &a1sq + &surd(int(2)) * &c) / d.clone();
    let a0 = &d / &(&surd(int(2)) * a1);
    let lambda = (&(&(&Surd::one() - &a1sq) * &c) + &a1sq) / (&surd(int(4)) * a1);
    let params = QEMParams::new(
        &case.id,
        Branch::Riemannian,
        vec![a0, a1.clone()],
        p,
        lambda,
    );
    debug_assert_eq!(
        lambda_from_params(case, &params.a_k).as_ref().ok(),
        Some(&params.lambda)
    );
    Ok(params)
}

/// Residuals of `a₀p = 1 − (2/n)Σ(aᵢ−1)sᵢ(1−cᵢ)` and, for each `i ≥ 1`,
/// `a₀aᵢp = (1 − aᵢ²)cᵢ + aᵢ²`. All vanish for genuine solutions.
pub fn system_residuals(case: &EmbeddingCase, params: &QEMParams) -> Result<Vec<Surd>> {
    require_irreducible(case)?;
    let lambda = lambda_from_params(case, &params.a_k)?;
    let a0 = &params.a_k[0];
    let a0p = a0 * &params.p;
    // 1 − (2/n)Σ… = 4λ
    let mut out = vec![&a0p - &(&surd(int(4)) * &lambda)];
    for (i, ai) in params.a_k.iter().enumerate().skip(1) {
        let c = surd(case.c[i - 1].clone());
        let asq = ai.square();
        let rhs = &(&(&Surd::one() - &asq) * &c) + &asq;
        out.push(&(&a0p * ai) - &rhs);
    }
    Ok(out)
}

/// `((n+2)c/((2s+n+2)(1−c)), 1)`, or `None` when the lower end is at least 1.
pub fn interval_r1(case: &EmbeddingCase) -> Result<Option<(Rational, Rational)>> {
    let (n, s, c) = r1_constants(case)?;
    let two = int(2);
    let lo = (&n + &two) * &c / ((&two * &s + &n + &two) * (Rational::one() - &c));
    if lo >= Rational::one() {
        Ok(None)
    } else {
        Ok(Some((lo, Rational::one())))
    }
}

/// The lower end `(n+2)c/((2s+n+2)(1−c))` regardless of emptiness.
pub fn interval_r1_lower(case: &EmbeddingCase) -> Result<Rational> {
    let (n, s, c) = r1_constants(case)?;
    let two = int(2);
    Ok((&n + &two) * &c / ((&two * &s + &n + &two) * (Rational::one() - &c)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchDescriptor {
    pub name: String,
    pub condition: String,
    /// Sign of `λ` on the branch.
    pub lambda_sign: i32,
    pub signature: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LorentzBranches {
    pub case: String,
    pub x1: Surd,
    pub x2: Surd,
    pub interval: Option<(String, String)>,
    pub branches: Vec<BranchDescriptor>,
    /// `x₁ < lo ≤ 1 < x₂`, compared exactly.
    pub ordering_holds: bool,
}

pub fn lorentz_branches_r1(case: &EmbeddingCase) -> Result<LorentzBranches> {
    let [qa, qb, qc] = r1_quadratic(case)?;
    let roots = quadratic_roots(&qa, &qb, &qc);
    if roots.len() != 2 {
        return Err(Error::NoSolution(format!(
            "{case}: expected two distinct roots"
        )));
    }
    let (x1, x2) = (roots[0].clone(), roots[1].clone());
    let lo = surd(interval_r1_lower(case)?);
    let one = Surd::one();
    let ordering_holds = x1 < lo && lo <= one && one < x2;
    let (n, s) = (case.n as usize, case.s[0] as usize);
    let center = case.center_dim;
    let interval = interval_r1(case)?.map(|(l, h)| (fmt_rational(&l), fmt_rational(&h)));
    let mut branches = vec![
        BranchDescriptor {
            name: "negative_ideal".into(),
            condition: "a1 < 0".into(),
            lambda_sign: -1,
            signature: (center + n, s),
        },
        BranchDescriptor {
            name: "negative_center".into(),
            condition: format!("0 < a1 < {x1} or a1 > {x2}"),
            lambda_sign: 1,
            signature: (n + s, center),
        },
    ];
    if let Some((l, h)) = &interval {
        branches.push(BranchDescriptor {
            name: "riemannian".into(),
            condition: format!("{l} < a1 < {h}"),
            lambda_sign: 1,
            signature: (center + n + s, 0),
        });
    }
    Ok(LorentzBranches {
        case: case.id.clone(),
        x1,
        x2,
        interval,
        branches,
        ordering_holds,
    })
}

fn su_l_params(case: &EmbeddingCase) -> Result<(i64, i64)> {
    if case.family != Family::SU_L1L2 {
        return Err(Error::InvalidParams(format!(
            "{case} is not an SU_L1L2 case"
        )));
    }
    Ok((
        i64::from(case.params.l1.unwrap()),
        i64::from(case.params.l2.unwrap()),
    ))
}

/// Coefficients of `(l₁³ + l₁²l₂ + l₁l₂² − l₁)a² − 2l₁l₂(l₁+l₂)a + (l₁l₂ + 1)l₂`.
pub fn r2_quadratic(l1: i64, l2: i64) -> [Rational; 3] {
    [
        int(l1 * l1 * l1 + l1 * l1 * l2 + l1 * l2 * l2 - l1),
        int(-2 * l1 * l2 * (l1 + l2)),
        int((l1 * l2 + 1) * l2),
    ]
}

/// `4l₁l₂(l₁² − 1)(l₂² − 1)`, the discriminant of [`r2_quadratic`].
pub fn r2_discriminant(l1: i64, l2: i64) -> Rational {
    int(4 * l1 * l2 * (l1 * l1 - 1) * (l2 * l2 - 1))
}

fn check_l(l1: i64, l2: i64) -> Result<()> {
    if l1 < 2 || l2 < 2 {
        return Err(Error::InvalidParams("l1 and l2 must be at least 2".into()));
    }
    Ok(())
}

/// The two positive roots `x₁ < x₂` bounding the nontrivial Riemannian range.
pub fn roots_r2(l1: i64, l2: i64) -> Result<(Surd, Surd)> {
    check_l(l1, l2)?;
    let [a, b, c] = r2_quadratic(l1, l2);
    let roots = quadratic_roots(&a, &b, &c);
    match roots.as_slice() {
        [x1, x2] => Ok((x1.clone(), x2.clone())),
        _ => Err(Error::NoSolution(format!(
            "({l1}, {l2}): repeated or complex roots"
        ))),
    }
}

pub fn solve_r2_su(l1: i64, l2: i64, a2: &Rational) -> Result<QEMParams> {
    solve_r2_su_surd(l1, l2, &surd(a2.clone()))
}

/// The `a₁l₂ = a₂l₁` branch: `a₁ = (l₁/l₂)a₂`,
/// `D = −(l₁³+l₁²l₂+l₁l₂²−2l₁)a₂² + 2l₁l₂(l₁+l₂)a₂ − l₁l₂²`,
/// `p = (l₂ + l₁a₂²)/D`, `a₀ = D/((l₁+l₂)a₂)`.
pub fn solve_r2_su_surd(l1: i64, l2: i64, a2: &Surd) -> Result<QEMParams> {
    check_l(l1, l2)?;
    if a2.is_zero() {
        return Err(Error::InvalidParams("a2 must be nonzero".into()));
    }
    let case = EmbeddingCase::new(
        Family::SU_L1L2,
        crate::catalog::CaseParams::l(l1 as u32, l2 as u32),
    )?;
    let q = |v: i64| surd(int(v));
    let a2sq = a2.square();
    let d = &(&(&q(-(l1 * l1 * l1 + l1 * l1 * l2 + l1 * l2 * l2 - 2 * l1)) * &a2sq)
        + &(&q(2 * l1 * l2 * (l1 + l2)) * a2))
        - &q(l1 * l2 * l2);
    if d.is_zero() {
        return Err(Error::ZeroDenominator(format!("a2 = {a2}")));
    }
    let a1 = &surd(rat(l1, l2)) * a2;
    let p = (&q(l2) + &(&q(l1) * &a2sq)) / d.clone();
    let a0 = &d / &(&q(l1 + l2) * a2);
    let a_k = vec![a0, a1, a2.clone()];
    let lambda = lambda_from_params(&case, &a_k)?;
    Ok(QEMParams::new(&case.id, Branch::Riemannian, a_k, p, lambda))
}

/// Dispatches on the case's `r`. `value` is `p` for `r = 0`, `a₁` for `r = 1`
/// and `a₂` for `r = 2`.
pub fn solve_case(case: &EmbeddingCase, value: &Rational) -> Result<QEMParams> {
    match case.family {
        Family::SU2_R0 => solve_r0(value),
        Family::SU_L1L2 => {
            let (l1, l2) = su_l_params(case)?;
            solve_r2_su(l1, l2, value)
        }
        f if f.is_table() => Err(Error::InvalidParams(format!(
            "{case} is solved as a fixed system, not pointwise"
        ))),
        _ => solve_r1(case, value),
    }
}

/// Branch factors of the second `r = 2` equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct R2BranchFlag {
    pub constraint: &'static str,
    pub explored: bool,
    pub note: &'static str,
}

/// `(a₁l₂ − a₂l₁)(1 − a₁a₂) = 0`: only the first factor is solved.
pub fn r2_branch_flags() -> [R2BranchFlag; 2] {
    [
        R2BranchFlag {
            constraint: "a1*l2 - a2*l1 = 0",
            explored: true,
            note: "solved by solve_r2_su",
        },
        R2BranchFlag {
            constraint: "1 - a1*a2 = 0",
            explored: false,
            note: "constraint reported only; no solutions are computed on this branch",
        },
    ]
}

/// `(positive, negative)` counts for the metric defined by `params`.
pub fn predicted_signature(case: &EmbeddingCase, params: &QEMParams) -> (usize, usize) {
    let mut dims = vec![case.center_dim];
    dims.extend(case.s.iter().map(|&s| s as usize));
    let (mut pos, mut neg) = (0usize, 0usize);
    let mut add = |sign: bool, d: usize| if sign { pos += d } else { neg += d };
    add(params.a.is_positive(), case.n as usize);
    for (ai, d) in params.a_k.iter().zip(dims) {
        add(ai.is_positive(), d);
    }
    (pos, neg)
}

/// Nontrivial Riemannian metrics exist for `a₁` strictly inside the interval.
pub fn is_nontrivial_riemannian(params: &QEMParams) -> bool {
    params.a_k.iter().all(Surd::is_positive) && params.p < Surd::one()
}
