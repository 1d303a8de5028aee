//! Embedding cases `k ⊂ g` with their exact constants `n`, `sᵢ`, `cᵢ`, `dⱼ`.
//!
//! The classical families come with explicit matrix realizations
//! (see [`realize`]); the exceptional cases are handled parametrically only.

mod realize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{fmt_ratio, rat, Rational};

pub use realize::{realize, Realization};

/// The embedding families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum Family {
    /// `su(1) ⊂ su(2)`: `k = k₀` is one-dimensional.
    SU2_R0,
    /// `u(k) ⊂ so(2k)`, `k ≥ 3`.
    SO2K_UK,
    /// `u(k) ⊂ sp(k)`, `k ≥ 2`.
    SPK_UK,
    /// `s(u(1) ⊕ u(k)) ⊂ su(k+1)`, `k ≥ 2`.
    SUK1_S,
    /// `so(2) ⊕ so(k) ⊂ so(k+2)`, `k ≥ 3`.
    SOK2_SO2SOK,
    /// `so(10) ⊕ so(2) ⊂ e₆`.
    E6_SO10SO2,
    /// `e₆ ⊕ so(2) ⊂ e₇`.
    E7_E6SO2,
    /// `s(u(l₁) ⊕ u(l₂)) ⊂ su(l₁+l₂)`, `l₁, l₂ ≥ 2`.
    SU_L1L2,
    /// The non-isotropy-irreducible `f₄` case with `d = (21, 16, 14)`.
    F4_TABLE1,
    E8_TABLE2,
    F4_TABLE2,
    G2_TABLE2,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::SU2_R0,
        Family::SO2K_UK,
        Family::SPK_UK,
        Family::SUK1_S,
        Family::SOK2_SO2SOK,
        Family::E6_SO10SO2,
        Family::E7_E6SO2,
        Family::SU_L1L2,
        Family::F4_TABLE1,
        Family::E8_TABLE2,
        Family::F4_TABLE2,
        Family::G2_TABLE2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SU2_R0 => "SU2_R0",
            Family::SO2K_UK => "SO2K_UK",
            Family::SPK_UK => "SPK_UK",
            Family::SUK1_S => "SUK1_S",
            Family::SOK2_SO2SOK => "SOK2_SO2SOK",
            Family::E6_SO10SO2 => "E6_SO10SO2",
            Family::E7_E6SO2 => "E7_E6SO2",
            Family::SU_L1L2 => "SU_L1L2",
            Family::F4_TABLE1 => "F4_TABLE1",
            Family::E8_TABLE2 => "E8_TABLE2",
            Family::F4_TABLE2 => "F4_TABLE2",
            Family::G2_TABLE2 => "G2_TABLE2",
        }
    }

    fn takes_k(self) -> bool {
        matches!(
            self,
            Family::SO2K_UK | Family::SPK_UK | Family::SUK1_S | Family::SOK2_SO2SOK
        )
    }

    fn min_k(self) -> u32 {
        match self {
            Family::SO2K_UK | Family::SOK2_SO2SOK => 3,
            _ => 2,
        }
    }

    pub fn is_table(self) -> bool {
        matches!(
            self,
            Family::F4_TABLE1 | Family::E8_TABLE2 | Family::F4_TABLE2 | Family::G2_TABLE2
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// Integer parameters of a parametric family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<u32>,
}

impl CaseParams {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn k(k: u32) -> Self {
        CaseParams {
            k: Some(k),
            ..Self::default()
        }
    }

    pub fn l(l1: u32, l2: u32) -> Self {
        CaseParams {
            l1: Some(l1),
            l2: Some(l2),
            ..Self::default()
        }
    }
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_ratio))
}

/// A catalog entry: an embedding `k ⊂ g` with its exact constants.
///
/// `s` and `c` list `dim kᵢ` and `cᵢ` for `i ≥ 1`; `c₀ = 0` is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCase {
    pub id: String,
    pub family: Family,
    pub params: CaseParams,
    /// Ambient algebra, e.g. `"sp(2)"`.
    pub algebra: String,
    pub r: usize,
    pub n: u64,
    pub s: Vec<u64>,
    #[serde(serialize_with = "ser_rationals")]
    pub c: Vec<Rational>,
    pub d: Option<[u64; 3]>,
    pub center_dim: usize,
    pub realizable: bool,
}

impl EmbeddingCase {
    /// Instantiates a family. Parametric families need `k` or `(l₁, l₂)`.
    pub fn new(family: Family, params: CaseParams) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParams(format!("{family}: {msg}")));
        let k = params.k;
        let (l1, l2) = (params.l1, params.l2);
        if family.takes_k() {
            match k {
                None => return bad("requires --k".into()),
                Some(k) if k < family.min_k() => {
                    return bad(format!("k must be at least {}", family.min_k()))
                }
                _ => {}
            }
            if l1.is_some() || l2.is_some() {
                return bad("does not take l1/l2".into());
            }
        } else if family == Family::SU_L1L2 {
            match (l1, l2) {
                (Some(a), Some(b)) if a >= 2 && b >= 2 => {}
                (Some(_), Some(_)) => return bad("l1 and l2 must be at least 2".into()),
                _ => return bad("requires --l1 and --l2".into()),
            }
            if k.is_some() {
                return bad("does not take k".into());
            }
        } else if params != CaseParams::none() {
            return bad("takes no parameters".into());
        }

        let ku = k.map(u64::from).unwrap_or(0);
        let ki = ku as i64;
        let mut case = EmbeddingCase {
            id: String::new(),
            family,
            params,
            algebra: String::new(),
            r: 1,
            n: 0,
            s: Vec::new(),
            c: Vec::new(),
            d: None,
            center_dim: 1,
            realizable: true,
        };
        match family {
            Family::SU2_R0 => {
                case.r = 0;
                case.n = 2;
                case.algebra = "su(2)".into();
            }
            Family::SO2K_UK => {
                case.c = vec![rat(ki, 2 * (ki - 1))];
                case.s = vec![ku * ku - 1];
                case.n = ku * (ku - 1);
                case.algebra = format!("so({})", 2 * ku);
            }
            Family::SPK_UK => {
                case.c = vec![rat(ki, 2 * (ki + 1))];
                case.s = vec![ku * ku - 1];
                case.n = ku * (ku + 1);
                case.algebra = format!("sp({ku})");
            }
            Family::SUK1_S => {
                case.c = vec![rat(ki, ki + 1)];
                case.s = vec![ku * ku - 1];
                case.n = 2 * ku;
                case.algebra = format!("su({})", ku + 1);
            }
            Family::SOK2_SO2SOK => {
                case.c = vec![rat(ki - 2, ki)];
                case.s = vec![ku * (ku - 1) / 2];
                case.n = 2 * ku;
                case.algebra = format!("so({})", ku + 2);
            }
            Family::E6_SO10SO2 => {
                case.c = vec![rat(2, 3)];
                case.s = vec![45];
                case.n = 32;
                case.algebra = "e6".into();
                case.realizable = false;
            }
            Family::E7_E6SO2 => {
                case.c = vec![rat(2, 3)];
                case.s = vec![78];
                case.n = 54;
                case.algebra = "e7".into();
                case.realizable = false;
            }
            Family::SU_L1L2 => {
                let (a, b) = (u64::from(l1.unwrap()), u64::from(l2.unwrap()));
                let (ai, bi) = (a as i64, b as i64);
                case.r = 2;
                case.c = vec![rat(ai, ai + bi), rat(bi, ai + bi)];
                case.s = vec![a * a - 1, b * b - 1];
                case.n = 2 * a * b;
                case.algebra = format!("su({})", a + b);
            }
            Family::F4_TABLE1 => case.set_table([21, 16, 14], "f4"),
            Family::E8_TABLE2 => case.set_table([133, 112, 2], "e8"),
            Family::F4_TABLE2 => case.set_table([21, 28, 2], "f4"),
            Family::G2_TABLE2 => case.set_table([3, 8, 2], "g2"),
        }
        case.id = match (k, l1, l2) {
            (Some(k), _, _) => format!("{family}(k={k})"),
            (_, Some(a), Some(b)) => format!("{family}(l1={a},l2={b})"),
            _ => family.name().to_string(),
        };
        Ok(case)
    }

    fn set_table(&mut self, d: [u64; 3], algebra: &str) {
        self.d = Some(d);
        self.s = vec![d[0]];
        self.n = d[1] + d[2];
        self.algebra = algebra.into();
        self.realizable = false;
    }

    /// Parses ids of the form `SPK_UK(k=2)`, `SU_L1L2(l1=2,l2=3)` or `E6_SO10SO2`.
    pub fn from_id(id: &str) -> Result<Self> {
        let id = id.trim();
        let (name, rest) = match id.split_once('(') {
            Some((n, r)) => (
                n,
                Some(
                    r.strip_suffix(')')
                        .ok_or_else(|| Error::UnknownCase(id.into()))?,
                ),
            ),
            None => (id, None),
        };
        let family: Family = name.parse()?;
        let mut params = CaseParams::none();
        if let Some(rest) = rest {
            for kv in rest.split(',') {
                let (key, val) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::UnknownCase(id.into()))?;
                let v: u32 = val
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad value in {id}")))?;
                match key.trim() {
                    "k" => params.k = Some(v),
                    "l1" => params.l1 = Some(v),
                    "l2" => params.l2 = Some(v),
                    _ => return Err(Error::UnknownCase(id.into())),
                }
            }
        }
        EmbeddingCase::new(family, params)
    }

    /// Real dimension of the ambient algebra `g`.
    pub fn ambient_dim(&self) -> u64 {
        self.center_dim as u64 + self.s.iter().sum::<u64>() + self.n
    }

    /// Rank of the ambient algebra `g`.
    pub fn ambient_rank(&self) -> u32 {
        let k = self.params.k.unwrap_or(0);
        match self.family {
            Family::SU2_R0 => 1,
            Family::SO2K_UK | Family::SPK_UK | Family::SUK1_S => k,
            Family::SOK2_SO2SOK => (k + 2) / 2,
            Family::SU_L1L2 => self.params.l1.unwrap() + self.params.l2.unwrap() - 1,
            Family::E6_SO10SO2 => 6,
            Family::E7_E6SO2 => 7,
            Family::E8_TABLE2 => 8,
            Family::F4_TABLE1 | Family::F4_TABLE2 => 4,
            Family::G2_TABLE2 => 2,
        }
    }

    /// Exact constants `(n, s, c, d)`.
    pub fn constants(&self) -> CaseConstants {
        CaseConstants {
            n: self.n,
            s: self.s.clone(),
            c: self.c.clone(),
            d: self.d,
        }
    }

    /// Whether `k` acts irreducibly on `p`, so that the closed systems in
    /// terms of `n, sᵢ, cᵢ` apply.
    pub fn isotropy_irreducible(&self) -> bool {
        !self.family.is_table()
    }
}

impl fmt::Display for EmbeddingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseConstants {
    pub n: u64,
    pub s: Vec<u64>,
    pub c: Vec<Rational>,
    pub d: Option<[u64; 3]>,
}

/// All cases whose ambient algebra has rank at most `max_rank`, followed by
/// the exceptional cases (always included).
pub fn list_cases(max_rank: u32) -> Vec<EmbeddingCase> {
    let max_rank = max_rank.max(2);
    let mut out = vec![EmbeddingCase::new(Family::SU2_R0, CaseParams::none()).unwrap()];
    for family in [
        Family::SO2K_UK,
        Family::SPK_UK,
        Family::SUK1_S,
        Family::SOK2_SO2SOK,
    ] {
        let mut k = family.min_k();
        loop {
            let case = EmbeddingCase::new(family, CaseParams::k(k)).unwrap();
            if case.ambient_rank() > max_rank {
                break;
            }
            out.push(case);
            k += 1;
        }
    }
    for total in 4..=(max_rank + 1) {
        for l1 in 2..=total / 2 {
            out.push(EmbeddingCase::new(Family::SU_L1L2, CaseParams::l(l1, total - l1)).unwrap());
        }
    }
    for family in [
        Family::E6_SO10SO2,
        Family::E7_E6SO2,
        Family::F4_TABLE1,
        Family::E8_TABLE2,
        Family::F4_TABLE2,
        Family::G2_TABLE2,
    ] {
        out.push(EmbeddingCase::new(family, CaseParams::none()).unwrap());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(f: Family, p: CaseParams) -> EmbeddingCase {
        EmbeddingCase::new(f, p).unwrap()
    }

    #[test]
    fn spk_k2_constants() {
        let c = case(Family::SPK_UK, CaseParams::k(2));
        assert_eq!(
            (c.n, c.s.clone(), c.c.clone()),
            (6, vec![3], vec![rat(1, 3)])
        );
        assert_eq!(c.ambient_dim(), 10);
    }

    #[test]
    fn e6_constants() {
        let c = case(Family::E6_SO10SO2, CaseParams::none());
        assert_eq!(
            (c.n, c.s.clone(), c.c.clone()),
            (32, vec![45], vec![rat(2, 3)])
        );
        assert!(!c.realizable);
        assert_eq!(c.ambient_dim(), 78);
        assert_eq!(
            case(Family::E7_E6SO2, CaseParams::none()).ambient_dim(),
            133
        );
    }

    #[test]
    fn su2_has_no_ideals() {
        let c = case(Family::SU2_R0, CaseParams::none());
        assert_eq!((c.r, c.n, c.center_dim), (0, 2, 1));
    }

    #[test]
    fn so2k_k4_and_su_l1l2() {
        let c = case(Family::SO2K_UK, CaseParams::k(4));
        assert_eq!((c.n, c.s[0], c.c[0].clone()), (12, 15, rat(2, 3)));
        let c = case(Family::SU_L1L2, CaseParams::l(2, 2));
        assert_eq!(c.c, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!((c.s.clone(), c.n), (vec![3, 3], 8));
        assert_eq!(c.ambient_dim(), 15);
    }

    #[test]
    fn table_dimensions() {
        let g2 = case(Family::G2_TABLE2, CaseParams::none());
        assert_eq!(g2.d, Some([3, 8, 2]));
        assert_eq!(g2.ambient_dim(), 14);
        assert_eq!(
            case(Family::E8_TABLE2, CaseParams::none()).ambient_dim(),
            248
        );
        assert_eq!(
            case(Family::F4_TABLE1, CaseParams::none()).ambient_dim(),
            52
        );
        assert_eq!(
            case(Family::F4_TABLE2, CaseParams::none()).ambient_dim(),
            52
        );
    }

    #[test]
    fn ambient_dimension_identities() {
        for c in list_cases(6) {
            let expected = match c.family {
                Family::SUK1_S => {
                    let k = u64::from(c.params.k.unwrap());
                    (k + 1) * (k + 1) - 1
                }
                Family::SU_L1L2 => {
                    let l = u64::from(c.params.l1.unwrap() + c.params.l2.unwrap());
                    l * l - 1
                }
                Family::SO2K_UK => {
                    let m = 2 * u64::from(c.params.k.unwrap());
                    m * (m - 1) / 2
                }
                Family::SOK2_SO2SOK => {
                    let m = u64::from(c.params.k.unwrap()) + 2;
                    m * (m - 1) / 2
                }
                Family::SPK_UK => {
                    let k = u64::from(c.params.k.unwrap());
                    k * (2 * k + 1)
                }
                _ => continue,
            };
            assert_eq!(c.ambient_dim(), expected, "{c}");
        }
    }

    #[test]
    fn c_values_in_unit_interval() {
        for c in list_cases(6) {
            for ci in &c.c {
                assert!(*ci > rat(0, 1) && *ci < rat(1, 1), "{c}");
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(EmbeddingCase::new(Family::SO2K_UK, CaseParams::k(2)).is_err());
        assert!(EmbeddingCase::new(Family::SPK_UK, CaseParams::none()).is_err());
        assert!(EmbeddingCase::new(Family::SU_L1L2, CaseParams::l(1, 3)).is_err());
        assert!(EmbeddingCase::new(Family::E6_SO10SO2, CaseParams::k(2)).is_err());
        assert!("NOPE".parse::<Family>().is_err());
    }

    #[test]
    fn id_round_trip() {
        for c in list_cases(5) {
            assert_eq!(EmbeddingCase::from_id(&c.id).unwrap(), c);
        }
    }

    #[test]
    fn list_at_rank_four() {
        let ids: Vec<_> = list_cases(4).into_iter().map(|c| c.id).collect();
        for want in [
            "SU2_R0",
            "SO2K_UK(k=3)",
            "SO2K_UK(k=4)",
            "SPK_UK(k=2)",
            "SOK2_SO2SOK(k=3)",
            "SOK2_SO2SOK(k=4)",
            "SUK1_S(k=3)",
            "SU_L1L2(l1=2,l2=2)",
            "SU_L1L2(l1=2,l2=3)",
            "E6_SO10SO2",
            "E7_E6SO2",
            "F4_TABLE1",
            "E8_TABLE2",
            "F4_TABLE2",
            "G2_TABLE2",
        ] {
            assert!(ids.iter().any(|i| i == want), "{want} missing");
        }
        assert!(!ids.iter().any(|i| i == "SO2K_UK(k=5)"));
    }
}
