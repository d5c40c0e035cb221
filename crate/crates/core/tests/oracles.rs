//! Cross-checks against counts obtained independently of the main code
//! paths: closed formulas, naive filters over all subspaces, and direct
//! lattice computations.

use std::collections::BTreeSet;
use std::sync::Arc;

use ssloc_core::complex::{build_ball, sub_vertex_lattices, super_vertex_lattices, ComplexKind, DEFAULT_BUDGET};
use ssloc_core::fq::{enumerate_subspaces, FqSubspace, SymplecticSpace};
use ssloc_core::hermitian::{
    induced_symplectic_space, standard_space, standard_vertex_lattice, HermitianLattice, HermitianSpace, Variant,
};
use ssloc_core::oe::FieldParams;
use ssloc_core::strata::{census, closure_points, count_points, minimal_vertex_of_point, stratum_of};

const BUDGET: u64 = 10_000_000;

fn space(p: u64, n: usize, v: Variant) -> Arc<HermitianSpace> {
    standard_space(n, v, &FieldParams::with_prime(p).unwrap()).unwrap().into_arc()
}

/// `∏_{i<j} (q^{2m−2i} − 1)/(q^{i+1} − 1)`.
fn isotropic_count(q: u64, m: u32, j: u32) -> u64 {
    let mut num = 1;
    let mut den = 1;
    for i in 0..j {
        num *= q.pow(2 * m - 2 * i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

#[test]
fn isotropic_counts_match_formula_and_naive_filter() {
    for (p, k, m) in [(2, 1, 1), (2, 1, 2), (2, 2, 2), (3, 1, 2), (3, 2, 1), (3, 2, 2)] {
        let v = SymplecticSpace::standard(p, m).unwrap();
        let f = v.field(k).unwrap();
        let q = f.order() as u64;
        for j in 0..=m {
            let fast = v.enumerate_isotropic_in(&f, j, BUDGET).unwrap();
            assert_eq!(fast.len() as u64, isotropic_count(q, m as u32, j as u32), "p={p} k={k} m={m} j={j}");
            if q.pow((2 * m * j) as u32) <= 1 << 20 {
                let naive: Vec<_> =
                    enumerate_subspaces(&f, 2 * m, j, BUDGET).unwrap().into_iter().filter(|u| v.is_isotropic(u)).collect();
                assert_eq!(fast, naive);
            }
        }
    }
}

#[test]
fn lagrangian_census_for_m2_p2() {
    assert_eq!(SymplecticSpace::standard(2, 2).unwrap().lagrangians(1, BUDGET).unwrap().len(), 15);
}

/// `S_1` points through a rational line `W` are the non-rational points of
/// the quotient line, `q − p` of them.
#[test]
fn middle_stratum_counts() {
    for (p, k) in [(2, 2), (2, 3), (3, 2)] {
        let r = count_points(&SymplecticSpace::standard(p, 2).unwrap(), k, BUDGET).unwrap();
        let lines = isotropic_count(p as u64, 2, 1) as usize;
        let q = (p as usize).pow(k);
        assert_eq!(r.strata[1].count, lines * (q - p as usize));
        assert_eq!(r.strata[0].count, isotropic_count(p as u64, 2, 2) as usize);
        assert_eq!(r.total, r.counts().iter().sum::<usize>());
    }
}

#[test]
fn all_three_strata_over_f81() {
    let r = count_points(&SymplecticSpace::standard(3, 2).unwrap(), 4, BUDGET).unwrap();
    assert!(r.counts().iter().all(|&c| c > 0), "{:?}", r.counts());
    assert_eq!(r.strata[1].count, 40 * (81 - 3));
}

/// The full intersection-chain condition checked on every `m`-dimensional
/// subspace, without the isotropic enumeration.
#[test]
fn naive_census_over_f4() {
    let v = SymplecticSpace::standard(2, 2).unwrap();
    let f = v.field(2).unwrap();
    let mut counts = [0usize; 3];
    for u in enumerate_subspaces(&f, 4, 2, BUDGET).unwrap() {
        if !v.is_isotropic(&u) {
            continue;
        }
        let u1 = u.intersection(&u.frobenius());
        match u1.dim() {
            2 => counts[0] += 1,
            1 if u1.frobenius() == u1 => counts[1] += 1,
            1 => counts[2] += 1,
            _ => {}
        }
    }
    let r = count_points(&v, 2, BUDGET).unwrap();
    assert_eq!(r.counts(), counts.to_vec());
}

#[test]
fn closure_of_rational_line_over_f4_has_five_points() {
    let v = SymplecticSpace::standard(2, 2).unwrap();
    let f = v.field(1).unwrap();
    for w in v.rational_isotropic(1, BUDGET).unwrap() {
        assert_eq!(closure_points(&v, &w, 2, BUDGET).unwrap().len(), 5);
    }
    let zero = FqSubspace::zero(&f, 4);
    assert_eq!(closure_points(&v, &zero, 2, BUDGET).unwrap().len(), count_points(&v, 2, BUDGET).unwrap().total);
}

#[test]
fn type_four_sublattices_follow_isotropic_counts() {
    let l = standard_vertex_lattice(&space(3, 4, Variant::SplitEven), 4).unwrap();
    let subs = sub_vertex_lattices(&l, BUDGET).unwrap();
    let count = |t| subs.iter().filter(|(_, s)| *s == t).count();
    assert_eq!((count(4), count(2), count(0)), (1, 40, 40));
    let distinct: BTreeSet<_> = subs.iter().map(|(m, _)| m.clone()).collect();
    assert_eq!(distinct.len(), subs.len());
    for (m, t) in &subs {
        assert_eq!(m.vertex_type().unwrap(), *t);
        assert!(l.contains(m).unwrap());
    }
}

fn balls() -> Vec<Vec<HermitianLattice>> {
    let mut out = Vec::new();
    for (n, v, t) in [
        (2, Variant::SplitEven, 2),
        (3, Variant::Odd, 2),
        (4, Variant::SplitEven, 2),
        (4, Variant::NonSplitEven, 2),
    ] {
        let s = space(3, n, v);
        let g = build_ball(&standard_vertex_lattice(&s, t).unwrap(), 2, ComplexKind::T, DEFAULT_BUDGET).unwrap();
        assert!(g.is_connected());
        out.push(g.nodes.into_iter().map(|n| n.lattice).collect());
    }
    out
}

#[test]
fn enumerations_are_dual_and_types_monotone() {
    for nodes in balls() {
        for l in &nodes {
            let supers: BTreeSet<_> = super_vertex_lattices(l, BUDGET).unwrap().into_iter().map(|(m, _)| m).collect();
            let tl = l.vertex_type().unwrap();
            for m in &nodes {
                let is_sub_of_m = sub_vertex_lattices(m, BUDGET).unwrap().iter().any(|(x, _)| x == l);
                assert_eq!(supers.contains(m), is_sub_of_m && m != l);
                if m.contains(l).unwrap() {
                    let tm = m.vertex_type().unwrap();
                    assert!(tl <= tm);
                    assert_eq!(tl == tm, l == m);
                }
            }
        }
    }
}

#[test]
fn intersection_criterion_against_direct_test() {
    for nodes in balls() {
        for a in &nodes {
            for b in &nodes {
                let meet_is_vertex = a.intersection(b).unwrap().is_vertex().unwrap();
                assert_eq!(a.is_vertex_intersection(b).unwrap(), meet_is_vertex);
            }
        }
    }
}

#[test]
fn induced_forms_are_nondegenerate_and_types_even() {
    for nodes in balls() {
        for l in &nodes {
            let t = l.vertex_type().unwrap();
            assert_eq!(t % 2, 0);
            assert_eq!(induced_symplectic_space(l).unwrap().space().dim(), t);
        }
    }
}

#[test]
fn maximal_type_is_never_exceeded() {
    for (n, v) in [(2, Variant::NonSplitEven), (3, Variant::Odd), (4, Variant::NonSplitEven)] {
        let s = space(3, n, v);
        let top = standard_vertex_lattice(&s, v.max_type(n)).unwrap();
        assert!(super_vertex_lattices(&top, BUDGET).unwrap().is_empty(), "n={n} {v}");
    }
}

#[test]
fn minimal_vertex_lattices_on_the_plane() {
    let l = standard_vertex_lattice(&space(3, 2, Variant::SplitEven), 2).unwrap();
    let q = induced_symplectic_space(&l).unwrap();
    let type_zero: BTreeSet<_> =
        sub_vertex_lattices(&l, BUDGET).unwrap().into_iter().filter(|(_, t)| *t == 0).map(|(m, _)| m).collect();
    let c = census(q.space(), 2, BUDGET).unwrap();
    assert_eq!(c.points.len(), 10);
    for pt in &c.points {
        let lam = minimal_vertex_of_point(&q, &pt.point).unwrap();
        if pt.point.is_rational() {
            assert!(type_zero.contains(&lam));
            assert_eq!(q.image(&lam).unwrap(), pt.point.base_change(&q.space().field(1).unwrap()).unwrap());
        } else {
            assert_eq!(lam, l);
        }
    }
}

/// Top-stratum points give the ambient lattice back.
#[test]
fn minimal_vertex_of_top_stratum_is_ambient() {
    let l = standard_vertex_lattice(&space(3, 4, Variant::SplitEven), 4).unwrap();
    let q = induced_symplectic_space(&l).unwrap();
    let c = census(q.space(), 4, BUDGET).unwrap();
    let mut seen = 0;
    for pt in c.points.iter().filter(|pt| pt.stratum == 2).take(200) {
        assert_eq!(minimal_vertex_of_point(&q, &pt.point).unwrap(), l);
        assert_eq!(stratum_of(q.space(), &pt.point).unwrap().0, 2);
        seen += 1;
    }
    assert!(seen > 0);
}

/// Point counts per component never exceed `q^i`, a counting shadow of
/// `dim S_i = i`.
#[test]
fn component_counts_are_bounded_by_dimension() {
    for (p, m, k) in [(3, 1, 1), (3, 1, 2), (3, 1, 3), (2, 2, 2), (2, 2, 3), (2, 2, 4), (3, 2, 2)] {
        let r = count_points(&SymplecticSpace::standard(p, m).unwrap(), k, BUDGET).unwrap();
        let q = (p as usize).pow(k);
        for s in &r.strata {
            for c in &s.components {
                assert!(c.count <= q.pow(s.i as u32), "p={p} m={m} k={k} i={}", s.i);
            }
        }
    }
}
