//! `F_q`-points of the variety `S` of Lagrangians `U ⊆ V ⊗ F_q` with
//! `dim(U ∩ ΦU) ≥ m − 1`, its strata `S_i`, and their components.

mod dictionary;
mod resolution;
pub mod weyl;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::{FqField, FqSubspace, SubspaceRecord, SymplecticSpace};

pub use dictionary::minimal_vertex_of_point;
pub use resolution::{complete_isotropic_flags, resolution_endpoint, xbar_flags, ClosureRule, IsotropicFlag};
pub use weyl::{dim_dl, weyl_length, SignedPermutation};

/// Default cap on enumerated candidates.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

pub fn in_s(space: &SymplecticSpace, u: &FqSubspace) -> Result<bool> {
    if !space.is_lagrangian(u) {
        return Err(Error::NotLagrangian);
    }
    Ok(u.intersection(&u.frobenius()).dim() + 1 >= space.m())
}

/// The chain `U_j = U ∩ ΦU ∩ … ∩ Φ^j U` up to the first `Φ`-stable member.
pub fn intersection_chain(u: &FqSubspace) -> Result<Vec<FqSubspace>> {
    let mut chain = vec![u.clone()];
    loop {
        let last = chain.last().expect("chain starts with U");
        let phi = last.frobenius();
        if phi == *last {
            return Ok(chain);
        }
        let next = last.intersection(&phi);
        if next.dim() + 1 != last.dim() {
            return Err(Error::ChainViolation { step: chain.len() });
        }
        chain.push(next);
    }
}

/// Stratum index `i` and the dimensions `m, m − 1, …, m − i` of the chain.
pub fn stratum_of(space: &SymplecticSpace, u: &FqSubspace) -> Result<(usize, Vec<usize>)> {
    if !space.is_lagrangian(u) {
        return Err(Error::NotLagrangian);
    }
    let chain = intersection_chain(u)?;
    Ok((chain.len() - 1, chain.iter().map(FqSubspace::dim).collect()))
}

/// The rational isotropic `W = U_i` whose component contains `U`.
pub fn component_of(space: &SymplecticSpace, u: &FqSubspace) -> Result<FqSubspace> {
    if !space.is_lagrangian(u) {
        return Err(Error::NotLagrangian);
    }
    Ok(intersection_chain(u)?.pop().expect("nonempty chain"))
}

/// `T_j = U + ΦU + … + Φ^j U` up to stabilization at `T_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TChain {
    pub d: usize,
    pub dims: Vec<usize>,
    pub members: Vec<FqSubspace>,
}

impl TChain {
    pub fn top(&self) -> &FqSubspace {
        self.members.last().expect("chain starts with U")
    }
}

pub fn t_chain(space: &SymplecticSpace, u: &FqSubspace) -> Result<TChain> {
    if !space.is_lagrangian(u) {
        return Err(Error::NotLagrangian);
    }
    let mut members = vec![u.clone()];
    loop {
        let last = members.last().expect("chain starts with U");
        let phi = last.frobenius();
        if phi == *last {
            break;
        }
        let next = last.sum(&phi);
        if next.dim() != last.dim() + 1 {
            return Err(Error::ChainViolation { step: members.len() });
        }
        members.push(next);
    }
    Ok(TChain { d: members.len() - 1, dims: members.iter().map(FqSubspace::dim).collect(), members })
}

/// One point of `S(F_q)` with its stratum and component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointInfo {
    pub point: FqSubspace,
    pub stratum: usize,
    pub component: FqSubspace,
}

/// All points of `S(F_q)`, in subspace order.
#[derive(Debug, Clone)]
pub struct Census {
    pub space: SymplecticSpace,
    pub field: Arc<FqField>,
    pub points: Vec<PointInfo>,
}

pub fn census(space: &SymplecticSpace, k: u32, budget: u64) -> Result<Census> {
    let field = space.field(k)?;
    let mut points = Vec::new();
    for u in space.enumerate_isotropic_in(&field, space.m(), budget)? {
        if !in_s(space, &u)? {
            continue;
        }
        let chain = intersection_chain(&u)?;
        let stratum = chain.len() - 1;
        let component = chain.into_iter().last().expect("nonempty chain");
        points.push(PointInfo { point: u, stratum, component });
    }
    Ok(Census { space: space.clone(), field, points })
}

/// Point counts per stratum and per component `X_W`, listing every rational
/// isotropic `W` of the right dimension (count `0` where empty).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub p: u32,
    pub m: usize,
    pub k: u32,
    pub total: usize,
    pub strata: Vec<StratumCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumCount {
    pub i: usize,
    pub count: usize,
    pub components: Vec<ComponentCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCount {
    #[serde(rename = "W")]
    pub w: SubspaceRecord,
    pub count: usize,
}

impl StratumReport {
    pub fn counts(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.count).collect()
    }
}

impl Census {
    pub fn report(&self, budget: u64) -> Result<StratumReport> {
        let m = self.space.m();
        let prime = self.space.field(1)?;
        let mut per_component: BTreeMap<FqSubspace, usize> = BTreeMap::new();
        for pt in &self.points {
            *per_component.entry(pt.component.base_change(&prime)?).or_default() += 1;
        }
        let mut strata = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let components: Vec<ComponentCount> = self
                .space
                .rational_isotropic(m - i, budget)?
                .into_iter()
                .map(|w| ComponentCount { count: per_component.get(&w).copied().unwrap_or(0), w: w.to_record() })
                .collect();
            let count = self.points.iter().filter(|pt| pt.stratum == i).count();
            strata.push(StratumCount { i, count, components });
        }
        Ok(StratumReport { p: self.space.p(), m, k: self.field.k(), total: self.points.len(), strata })
    }

    /// Points `U` with `W ⊆ U`.
    pub fn closure_points(&self, w: &FqSubspace) -> Result<Vec<&PointInfo>> {
        let w = w.base_change(&self.field)?;
        Ok(self.points.iter().filter(|pt| pt.point.contains(&w)).collect())
    }
}

pub fn count_points(space: &SymplecticSpace, k: u32, budget: u64) -> Result<StratumReport> {
    census(space, k, budget)?.report(budget)
}

/// All `U ∈ S(F_q)` containing the rational isotropic `W`.
pub fn closure_points(space: &SymplecticSpace, w: &FqSubspace, k: u32, budget: u64) -> Result<Vec<FqSubspace>> {
    if !w.is_rational() {
        return Err(Error::NotRational);
    }
    if !space.is_isotropic(w) {
        return Err(Error::NotIsotropic);
    }
    let c = census(space, k, budget)?;
    Ok(c.closure_points(w)?.into_iter().map(|pt| pt.point.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u64 = DEFAULT_BUDGET;

    #[test]
    fn projective_line_counts() {
        for (p, k) in [(3, 1), (3, 2), (5, 2), (2, 3)] {
            let r = count_points(&SymplecticSpace::standard(p, 1).unwrap(), k, B).unwrap();
            assert_eq!(r.total as u64, (p as u64).pow(k) + 1);
        }
        let r = count_points(&SymplecticSpace::standard(3, 1).unwrap(), 2, B).unwrap();
        assert_eq!(r.counts(), vec![4, 6]);
    }

    #[test]
    fn rational_census_is_all_stratum_zero() {
        let r = count_points(&SymplecticSpace::standard(2, 2).unwrap(), 1, B).unwrap();
        assert_eq!(r.counts(), vec![15, 0, 0]);
        assert!(r.strata[0].components.iter().all(|c| c.count == 1));
    }

    #[test]
    fn some_lagrangian_over_f4_is_outside_s() {
        let s = SymplecticSpace::standard(2, 2).unwrap();
        let lags = s.lagrangians(2, B).unwrap();
        assert_eq!(lags.len(), 85);
        assert!(lags.iter().any(|u| !in_s(&s, u).unwrap()));
        let outside = lags.iter().find(|u| !in_s(&s, u).unwrap()).unwrap();
        assert!(matches!(stratum_of(&s, outside), Err(Error::ChainViolation { step: 1 })));
    }

    #[test]
    fn non_rational_line() {
        let s = SymplecticSpace::standard(3, 1).unwrap();
        let f = s.field(2).unwrap();
        let u = FqSubspace::span(&f, 2, &[vec![1, f.x()]]);
        assert_eq!(stratum_of(&s, &u).unwrap(), (1, vec![1, 0]));
        assert_eq!(component_of(&s, &u).unwrap().dim(), 0);
        let t = t_chain(&s, &u).unwrap();
        assert_eq!((t.d, t.dims.clone()), (1, vec![1, 2]));
        assert_eq!(t.top(), &FqSubspace::whole(&f, 2));
    }

    #[test]
    fn closure_through_rational_line_over_f4() {
        let s = SymplecticSpace::standard(2, 2).unwrap();
        let f = s.field(1).unwrap();
        let w = FqSubspace::span(&f, 4, &[vec![1, 0, 0, 0]]);
        assert_eq!(closure_points(&s, &w, 2, B).unwrap().len(), 5);
        let lag = FqSubspace::span(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(closure_points(&s, &lag, 2, B).unwrap().len(), 1);
    }
}
