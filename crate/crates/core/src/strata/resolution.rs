use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fq::{projective_points, FqField, FqSubspace, SymplecticSpace};

/// `F_1 ⊂ F_2 ⊂ … ⊂ F_m`, isotropic with `dim F_j = j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicFlag {
    members: Vec<FqSubspace>,
}

impl IsotropicFlag {
    pub fn new(space: &SymplecticSpace, members: Vec<FqSubspace>) -> Result<Self> {
        if members.len() != space.m() {
            return Err(Error::InvalidParams("a complete flag has m members".into()));
        }
        for (j, f) in members.iter().enumerate() {
            if f.dim() != j + 1 || (j > 0 && !f.contains(&members[j - 1])) {
                return Err(Error::InvalidParams("flag members must be nested of dimensions 1..m".into()));
            }
        }
        if let Some(top) = members.last() {
            if !space.is_isotropic(top) {
                return Err(Error::NotIsotropic);
            }
        }
        Ok(IsotropicFlag { members })
    }

    /// `F_1, …, F_m`.
    pub fn members(&self) -> &[FqSubspace] {
        &self.members
    }
}

/// Which flags count as points of the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureRule {
    /// `F_{j−1} ⊆ F_j ∩ Φ(F_j)` for every `j`.
    Containment,
    /// Only `dim(F_j ∩ Φ(F_j)) ≥ j − 1` for every `j`.
    DimensionOnly,
}

impl ClosureRule {
    fn accepts(self, prev: Option<&FqSubspace>, f: &FqSubspace) -> bool {
        match self {
            ClosureRule::Containment => prev.is_none_or(|g| f.frobenius().contains(g)),
            ClosureRule::DimensionOnly => f.intersection(&f.frobenius()).dim() + 1 >= f.dim(),
        }
    }
}

fn extend_flags(
    space: &SymplecticSpace,
    field: &Arc<FqField>,
    rule: Option<ClosureRule>,
    flag: &mut Vec<FqSubspace>,
    out: &mut Vec<IsotropicFlag>,
    work: &mut u64,
    budget: u64,
) -> Result<()> {
    *work += 1;
    if *work > budget {
        return Err(Error::SearchTooLarge { budget });
    }
    let n = space.dim();
    if flag.len() == space.m() {
        out.push(IsotropicFlag { members: flag.clone() });
        return Ok(());
    }
    let current = flag.last().cloned().unwrap_or_else(|| FqSubspace::zero(field, n));
    // A complement of F_j inside F_j^⊥; distinct lines in it give distinct
    // isotropic F_{j+1} ⊃ F_j, and every such F_{j+1} arises once.
    let mut complement: Vec<Vec<u32>> = Vec::new();
    let mut acc = current.clone();
    for v in space.perp(&current).basis() {
        if !acc.contains_vector(v) {
            acc = acc.sum(&FqSubspace::span(field, n, std::slice::from_ref(v)));
            complement.push(v.clone());
        }
    }
    for coeffs in projective_points(field, complement.len()) {
        let mut v = vec![0u32; n];
        for (&c, w) in coeffs.iter().zip(&complement) {
            for (x, &y) in v.iter_mut().zip(w) {
                *x = field.add(*x, field.mul(c, y));
            }
        }
        let next = current.sum(&FqSubspace::span(field, n, &[v]));
        if rule.is_none_or(|r| r.accepts(flag.last(), &next)) {
            flag.push(next);
            extend_flags(space, field, rule, flag, out, work, budget)?;
            flag.pop();
        }
    }
    Ok(())
}

/// Complete isotropic flags over `F_q`, optionally filtered by a closure rule,
/// ordered by their members (innermost first).
pub fn complete_isotropic_flags(
    space: &SymplecticSpace,
    k: u32,
    rule: Option<ClosureRule>,
    budget: u64,
) -> Result<Vec<IsotropicFlag>> {
    let field = space.field(k)?;
    let mut out = Vec::new();
    let mut work = 0;
    extend_flags(space, &field, rule, &mut Vec::new(), &mut out, &mut work, budget)?;
    out.sort();
    Ok(out)
}

/// Flags in the closure of the open cell, under the containment rule.
pub fn xbar_flags(space: &SymplecticSpace, k: u32, budget: u64) -> Result<Vec<IsotropicFlag>> {
    complete_isotropic_flags(space, k, Some(ClosureRule::Containment), budget)
}

/// `F_m`.
pub fn resolution_endpoint(flag: &IsotropicFlag) -> &FqSubspace {
    flag.members.last().expect("m ≥ 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::{census, in_s};
    use std::collections::BTreeMap;

    #[test]
    fn rank_one_flags_are_lagrangians() {
        let s = SymplecticSpace::standard(3, 1).unwrap();
        let flags = xbar_flags(&s, 2, 1 << 20).unwrap();
        let ends: Vec<_> = flags.iter().map(|f| resolution_endpoint(f).clone()).collect();
        assert_eq!(ends, s.lagrangians(2, 1 << 20).unwrap());
    }

    #[test]
    fn complete_flag_count() {
        // (q^4 − 1)/(q − 1) isotropic lines, each in q + 1 Lagrangians.
        let s = SymplecticSpace::standard(2, 2).unwrap();
        assert_eq!(complete_isotropic_flags(&s, 2, None, 1 << 20).unwrap().len(), 85 * 5);
    }

    #[test]
    fn endpoint_map_over_f4() {
        let s = SymplecticSpace::standard(2, 2).unwrap();
        let flags = xbar_flags(&s, 2, 1 << 20).unwrap();
        let mut fibres: BTreeMap<FqSubspace, usize> = BTreeMap::new();
        for f in &flags {
            let u = resolution_endpoint(f);
            assert!(in_s(&s, u).unwrap());
            *fibres.entry(u.clone()).or_default() += 1;
        }
        let c = census(&s, 2, 1 << 20).unwrap();
        assert_eq!(fibres.len(), c.points.len());
        for pt in c.points.iter().filter(|pt| pt.stratum == 2) {
            assert_eq!(fibres[&pt.point], 1);
        }
    }

    #[test]
    fn dimension_only_rule_has_larger_fibres() {
        let s = SymplecticSpace::standard(2, 2).unwrap();
        let strict = xbar_flags(&s, 2, 1 << 20).unwrap();
        let loose = complete_isotropic_flags(&s, 2, Some(ClosureRule::DimensionOnly), 1 << 20).unwrap();
        assert!(strict.iter().all(|f| loose.contains(f)));
        assert!(loose.len() > strict.len());
    }
}
