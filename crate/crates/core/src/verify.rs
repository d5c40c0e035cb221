//! The acceptance criteria as runnable checks, shared by the command-line
//! `verify` subcommand and the acceptance test target.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{build_ball, sub_vertex_lattices, super_vertex_lattices, ComplexKind};
use crate::error::{Error, Result};
use crate::fq::{FqField, FqSubspace, SymplecticSpace};
use crate::hermitian::{
    classify_space, induced_symplectic_space, standard_space, standard_vertex_lattice, HermitianLattice,
    HermitianSpace, SpaceLabel, Variant,
};
use crate::oe::{FieldParams, OEElement, OEMatrix};
use crate::strata::weyl::{coxeter_element, dl_dimension, stratum_element, stratum_parabolic};
use crate::strata::{census, intersection_chain, minimal_vertex_of_point, resolution_endpoint, t_chain, xbar_flags, Census};

pub const DEFAULT_SEED: u64 = 20_240_611;
const BUDGET: u64 = 1_000_000;
const RANDOM_INSTANCES: usize = 500;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<28} {}  ({:.2?}) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "standard-form classification"),
    (2, "maximal vertex type"),
    (3, "incidence counts"),
    (4, "tree ball"),
    (5, "projective line law"),
    (6, "stratification census"),
    (7, "chain theorem"),
    (8, "dimension formula"),
    (9, "weak resolution"),
    (10, "property suites"),
];

/// Run one criterion. Errors from the library become failures with the error
/// text as detail.
pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionResult> {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .ok_or_else(|| Error::InvalidParams(format!("no criterion {id}; expected 1..=10")))?;
    let start = Instant::now();
    let outcome = match id {
        1 => classification(),
        2 => maximal_types(),
        3 => incidence(),
        4 => tree_ball(),
        5 => projective_line(),
        6 => stratification(),
        7 => chain_theorem(),
        8 => dimension_formula(),
        9 => weak_resolution(),
        10 => property_suites(seed),
        _ => unreachable!(),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    let limit = match id {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(300)),
        6 => Some(Duration::from_secs(600)),
        8 => Some(Duration::from_secs(60)),
        _ => None,
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; exceeded time limit {limit:?}");
        }
    }
    Ok(CriterionResult { id, name, passed, detail, elapsed })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, seed).expect("known criterion")).collect()
}

/// `Ok(Ok(detail))` on success, `Ok(Err(reason))` on a failed check.
type Check = Result<std::result::Result<String, String>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(Err(format!($($msg)+)));
        }
    };
}

fn params(p: u64) -> Result<FieldParams> {
    FieldParams::with_prime(p)
}

fn space(p: u64, n: usize, v: Variant) -> Result<Arc<HermitianSpace>> {
    Ok(standard_space(n, v, &params(p)?)?.into_arc())
}

fn classification() -> Check {
    let mut cases = 0;
    for p in [3, 5] {
        for n in [2, 4] {
            for (v, want) in [(Variant::SplitEven, SpaceLabel::Split), (Variant::NonSplitEven, SpaceLabel::NonSplit)] {
                let got = classify_space(&standard_space(n, v, &params(p)?)?)?.label;
                ensure!(got == want, "p={p} n={n} {v}: got {got:?}");
                cases += 1;
            }
        }
    }
    Ok(Ok(format!("{cases} spaces classified")))
}

/// All vertex lattices reachable from `start` through super-lattices.
fn upward_closure(start: &HermitianLattice) -> Result<BTreeMap<HermitianLattice, usize>> {
    let mut seen = BTreeMap::new();
    seen.insert(start.clone(), start.vertex_type()?);
    let mut todo = vec![start.clone()];
    while let Some(l) = todo.pop() {
        for (m, t) in super_vertex_lattices(&l, BUDGET)? {
            if !seen.contains_key(&m) {
                seen.insert(m.clone(), t);
                todo.push(m);
            }
        }
    }
    Ok(seen)
}

fn maximal_types() -> Check {
    let mut summary = Vec::new();
    for (n, v, want) in [
        (2, Variant::SplitEven, 2),
        (4, Variant::SplitEven, 4),
        (2, Variant::NonSplitEven, 0),
        (4, Variant::NonSplitEven, 2),
        (3, Variant::Odd, 2),
    ] {
        let s = space(3, n, v)?;
        let reached = upward_closure(&standard_vertex_lattice(&s, 0)?)?;
        for (l, &t) in &reached {
            ensure!(t % 2 == 0, "n={n} {v}: odd type {t}");
            ensure!(l.vertex_type()? == t, "n={n} {v}: inconsistent type");
        }
        let max = reached.values().copied().max().unwrap_or(0);
        ensure!(max == want, "n={n} {v}: maximum type {max}, expected {want}");
        summary.push(format!("n={n} {v}: {max} ({} lattices)", reached.len()));
    }
    Ok(Ok(summary.join(", ")))
}

fn incidence() -> Check {
    let mut summary = Vec::new();
    for (n, v, subs_want, supers_want) in [(2, Variant::SplitEven, 4, 2), (3, Variant::Odd, 4, 4)] {
        let s = space(3, n, v)?;
        let ball = build_ball(&standard_vertex_lattice(&s, 2)?, 2, ComplexKind::T, BUDGET)?;
        let (mut twos, mut zeros) = (0, 0);
        for node in &ball.nodes {
            match node.vertex_type {
                2 => {
                    let c = sub_vertex_lattices(&node.lattice, BUDGET)?.iter().filter(|(_, t)| *t == 0).count();
                    ensure!(c == subs_want, "n={n}: type-2 lattice with {c} type-0 sublattices");
                    twos += 1;
                }
                0 => {
                    let c = super_vertex_lattices(&node.lattice, BUDGET)?.iter().filter(|(_, t)| *t == 2).count();
                    ensure!(c == supers_want, "n={n}: type-0 lattice with {c} type-2 superlattices");
                    zeros += 1;
                }
                t => ensure!(false, "n={n}: unexpected type {t}"),
            }
        }
        summary.push(format!("n={n}: {twos} type-2 and {zeros} type-0 lattices checked"));
    }
    Ok(Ok(summary.join(", ")))
}

fn tree_ball() -> Check {
    let s = space(3, 2, Variant::SplitEven)?;
    let g = build_ball(&standard_vertex_lattice(&s, 2)?, 2, ComplexKind::L, BUDGET)?;
    ensure!(g.nodes.len() == 17, "{} nodes", g.nodes.len());
    ensure!(g.edges.len() == 16, "{} edges", g.edges.len());
    ensure!(g.is_tree(), "ball is not a tree");
    for id in 0..5 {
        ensure!(g.degree(id) == 4, "inner node {id} has degree {}", g.degree(id));
    }
    Ok(Ok("17 nodes, 16 edges, acyclic, inner degree 4".into()))
}

fn projective_line() -> Check {
    let mut summary = Vec::new();
    for p in [3u32, 5] {
        let v = SymplecticSpace::standard(p, 1)?;
        for k in 1..=3 {
            let c = census(&v, k, BUDGET)?;
            let want = (p as usize).pow(k) + 1;
            ensure!(c.points.len() == want, "p={p} k={k}: {} points", c.points.len());
            summary.push(format!("{}", c.points.len()));
        }
    }
    Ok(Ok(format!("|S| = {}", summary.join(", "))))
}

const CENSUS_CASES: [(usize, u32, u32); 5] = [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 3, 1), (2, 3, 2)];

/// Strata partition, component census and closure heredity for one census.
fn check_census(c: &Census) -> Result<std::result::Result<String, String>> {
    let v = &c.space;
    let m = v.m();
    let k = c.field.k();
    let lags = v.enumerate_isotropic_in(&c.field, m, BUDGET)?;
    let in_s: Vec<&FqSubspace> = lags.iter().filter(|u| u.intersection(&u.frobenius()).dim() + 1 >= m).collect();
    ensure!(in_s.len() == c.points.len(), "census has {} points, filter finds {}", c.points.len(), in_s.len());
    let distinct: BTreeSet<&FqSubspace> = c.points.iter().map(|pt| &pt.point).collect();
    ensure!(distinct.len() == c.points.len(), "repeated points");

    let prime = v.field(1)?;
    let mut counts = vec![0usize; m + 1];
    for i in 0..=m {
        let ws = v.rational_isotropic(m - i, BUDGET)?;
        let mut per_w: BTreeMap<FqSubspace, usize> = ws.iter().map(|w| (w.clone(), 0)).collect();
        for pt in c.points.iter().filter(|pt| pt.stratum == i) {
            let w = pt.component.base_change(&prime)?;
            match per_w.get_mut(&w) {
                Some(n) => *n += 1,
                None => return Ok(Err(format!("k={k}: component {w:?} is not a rational isotropic subspace"))),
            }
            counts[i] += 1;
        }
        if counts[i] > 0 {
            let sizes: BTreeSet<usize> = per_w.values().copied().collect();
            ensure!(
                sizes.len() == 1 && !sizes.contains(&0),
                "k={k}: stratum {i} components are unevenly hit: {sizes:?}"
            );
        }
    }
    ensure!(counts.iter().sum::<usize>() == c.points.len(), "strata do not cover the census");

    for dim_w in 0..=m {
        for w in v.rational_isotropic(dim_w, BUDGET)? {
            let quotient = v.quotient(&w)?;
            let qc = census(quotient.space(), k, BUDGET)?;
            let expected: BTreeMap<FqSubspace, usize> =
                qc.points.iter().map(|pt| (pt.point.clone(), pt.stratum)).collect();
            let mut images = BTreeMap::new();
            for pt in c.closure_points(&w)? {
                let image = quotient.project(&pt.point)?;
                ensure!(quotient.lift(&image)? == pt.point, "lift of projection differs");
                images.insert(image, pt.stratum);
            }
            ensure!(images == expected, "k={k}: closure of {w:?} does not match the quotient census");
        }
    }
    Ok(Ok(format!("[{}]", counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))))
}

fn stratification() -> Check {
    let mut summary = Vec::new();
    for (m, p, k) in CENSUS_CASES {
        let v = SymplecticSpace::standard(p, m)?;
        let c = census(&v, k, BUDGET)?;
        match check_census(&c)? {
            Ok(d) => summary.push(format!("(m={m},p={p},k={k}) {d}")),
            Err(e) => return Ok(Err(format!("(m={m},p={p},k={k}) {e}"))),
        }
    }
    Ok(Ok(summary.join("; ")))
}

fn chain_theorem() -> Check {
    let mut checked = 0;
    for (m, p, k) in CENSUS_CASES {
        // For odd p the census runs on the space induced by a type-2m lattice,
        // so that the minimal vertex lattice of each point can be formed.
        let lattice_side = if p % 2 == 1 {
            let s = space(p as u64, 2 * m, Variant::SplitEven)?;
            let l = standard_vertex_lattice(&s, 2 * m)?;
            Some((induced_symplectic_space(&l)?, l))
        } else {
            None
        };
        let v = match &lattice_side {
            Some((q, _)) => q.space().clone(),
            None => SymplecticSpace::standard(p, m)?,
        };
        let c = census(&v, k, BUDGET)?;
        for pt in &c.points {
            let chain = t_chain(&v, &pt.point)?;
            let d = chain.d;
            ensure!(d <= m, "d = {d} exceeds m");
            ensure!(d == pt.stratum, "d = {d} differs from the stratum {}", pt.stratum);
            for w in chain.dims.windows(2) {
                ensure!(w[1] == w[0] + 1, "T-chain dims {:?}", chain.dims);
            }
            let inter = intersection_chain(&pt.point)?;
            for (j, t) in chain.members.iter().enumerate() {
                ensure!(*t == v.perp(&inter[j]), "T_{j} is not the perpendicular of U_{j}");
            }
            if let Some((q, l)) = &lattice_side {
                let lam = minimal_vertex_of_point(q, &pt.point)?;
                let t = lam.vertex_type()?;
                ensure!(t == 2 * d, "minimal vertex lattice of type {t}, expected {}", 2 * d);
                ensure!(l.contains(&lam)?, "minimal vertex lattice not inside the ambient lattice");
            }
            checked += 1;
        }
    }
    Ok(Ok(format!("{checked} points")))
}

fn dimension_formula() -> Check {
    for m in 1..=4 {
        for i in 0..=m {
            let w = stratum_element(m, i);
            let d = dl_dimension(&stratum_parabolic(m, i), &w)?;
            ensure!(d.dim == i, "m={m} i={i}: dimension {}", d.dim);
            let wx = w.compose(&d.parabolic_longest);
            ensure!(wx == d.coset_longest, "m={m} i={i}: w_i x_i is not longest in its double coset");
            ensure!(wx.length() == i + d.parabolic_longest.length(), "m={m} i={i}: length identity fails");
        }
        ensure!(coxeter_element(m).length() == m, "m={m}: Coxeter length");
    }
    Ok(Ok("m ≤ 4".into()))
}

/// Surjectivity onto `S(F_q)` and injectivity over the top stratum. The
/// top stratum is empty over `F_4`, so `F_16` is checked as well.
fn weak_resolution() -> Check {
    let v = SymplecticSpace::standard(2, 2)?;
    let mut summary = Vec::new();
    for k in [2, 4] {
        let c = census(&v, k, BUDGET)?;
        let flags = xbar_flags(&v, k, BUDGET)?;
        let mut fibres: BTreeMap<FqSubspace, usize> = BTreeMap::new();
        for f in &flags {
            *fibres.entry(resolution_endpoint(f).clone()).or_default() += 1;
        }
        let image: BTreeSet<&FqSubspace> = fibres.keys().collect();
        let points: BTreeSet<&FqSubspace> = c.points.iter().map(|pt| &pt.point).collect();
        ensure!(image == points, "k={k}: endpoint image has {} points, S has {}", image.len(), points.len());
        let top: Vec<_> = c.points.iter().filter(|pt| pt.stratum == 2).collect();
        for pt in &top {
            ensure!(fibres[&pt.point] == 1, "k={k}: fibre of size {} over a top-stratum point", fibres[&pt.point]);
        }
        summary.push(format!("k={k}: {} flags onto {} points, {} top-stratum fibres of size 1", flags.len(), points.len(), top.len()));
    }
    Ok(Ok(summary.join("; ")))
}

/// A random lattice: columns with entries `a + bπ`, `a, b < p²`, kept only if
/// the determinant has valuation at most 6, at a random scale in `-2..=2`.
pub fn random_lattice(space: &Arc<HermitianSpace>, rng: &mut impl Rng) -> Result<HermitianLattice> {
    let params = *space.params();
    let n = space.dim();
    let bound = (params.p() * params.p()) as i64;
    loop {
        let m = OEMatrix::from_fn(&params, n, n, |_, _| {
            OEElement::new(&params, rng.gen_range(0..bound), rng.gen_range(0..bound))
        });
        if m.determinant().valuation().is_some_and(|v| v <= 6) {
            return HermitianLattice::from_generators(space, &m, rng.gen_range(-2..=2));
        }
    }
}

pub fn random_subspace(field: &Arc<FqField>, n: usize, rng: &mut impl Rng) -> FqSubspace {
    let rows = rng.gen_range(0..=n);
    let vecs: Vec<Vec<u32>> = (0..rows).map(|_| (0..n).map(|_| rng.gen_range(0..field.order())).collect()).collect();
    FqSubspace::span(field, n, &vecs)
}

fn property_suites(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = Vec::new();

    let spaces = [
        space(3, 2, Variant::SplitEven)?,
        space(3, 3, Variant::Odd)?,
        space(3, 4, Variant::SplitEven)?,
    ];
    for s in &spaces {
        for _ in 0..RANDOM_INSTANCES {
            let l = random_lattice(s, &mut rng)?;
            ensure!(l.dual()?.dual()? == l, "double duality fails for {l:?}");
        }
    }
    summary.push(format!("double duality {}", 3 * RANDOM_INSTANCES));

    for i in 0..RANDOM_INSTANCES {
        let s = &spaces[i % 3];
        let (a, b, c) = (random_lattice(s, &mut rng)?, random_lattice(s, &mut rng)?, random_lattice(s, &mut rng)?);
        ensure!(a.index(&b)? + b.index(&c)? == a.index(&c)?, "index additivity fails");
        ensure!(a.index(&b)? == b.dual()?.index(&a.dual()?)?, "index duality fails");
    }
    summary.push(format!("index additivity {RANDOM_INSTANCES}"));

    for i in 0..RANDOM_INSTANCES {
        let s = &spaces[i % 3];
        let l = random_lattice(s, &mut rng)?;
        let params = *s.params();
        let n = s.dim();
        // A random unimodular change of basis: unit upper-triangular times a
        // permutation, times unit scalars.
        let mut g = l.basis().clone();
        for j in 0..n {
            for i2 in 0..j {
                let c = OEElement::new(&params, rng.gen_range(0..9), rng.gen_range(0..9));
                g.add_col_multiple(j, i2, c);
            }
        }
        g.swap_cols(0, rng.gen_range(0..n));
        g.scale_col(0, OEElement::new(&params, 1 + 3 * rng.gen_range(0..3), rng.gen_range(0..3)));
        ensure!(HermitianLattice::from_generators(s, &g, l.scale())? == l, "Hermite form depends on the basis");
    }
    for i in 0..RANDOM_INSTANCES {
        let (p, k) = [(2, 2), (3, 2), (5, 1)][i % 3];
        let field = Arc::new(FqField::new(p, k)?);
        let n = 4;
        let u = random_subspace(&field, n, &mut rng);
        let mut vecs = Vec::new();
        for _ in 0..u.dim() + 2 {
            let mut v = vec![0u32; n];
            for row in u.basis() {
                let c = rng.gen_range(0..field.order());
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = field.add(*x, field.mul(c, y));
                }
            }
            vecs.push(v);
        }
        vecs.extend(u.basis().iter().cloned());
        vecs.reverse();
        ensure!(FqSubspace::span(&field, n, &vecs) == u, "echelon form depends on the spanning set");
    }
    summary.push(format!("echelon canonicality {}", 2 * RANDOM_INSTANCES));

    for i in 0..RANDOM_INSTANCES {
        let (p, k) = [(2, 3), (3, 2), (3, 4), (5, 2)][i % 4];
        let field = Arc::new(FqField::new(p, k)?);
        let u = random_subspace(&field, 4, &mut rng);
        ensure!(u.frobenius_pow(k) == u, "Φ^k differs from the identity");
        let mut x = u.clone();
        for _ in 0..k {
            x = x.frobenius();
        }
        ensure!(x == u, "iterated Φ differs from the identity");
        ensure!((u.frobenius() == u) == u.is_rational(), "Φ-stability differs from rationality");
    }
    summary.push(format!("Φ-order {RANDOM_INSTANCES}"));

    for i in 0..RANDOM_INSTANCES {
        let (p, k, m) = [(2, 2, 2), (3, 1, 3), (3, 2, 2), (5, 1, 2)][i % 4];
        let v = SymplecticSpace::standard(p, m)?;
        let field = v.field(k)?;
        let u = random_subspace(&field, 2 * m, &mut rng);
        let perp = v.perp(&u);
        ensure!(perp.dim() + u.dim() == 2 * m, "dim U^⊥ wrong");
        ensure!(v.perp(&perp) == u, "perp is not an involution");
    }
    summary.push(format!("perp biduality {RANDOM_INSTANCES}"));
    Ok(Ok(summary.join(", ")))
}
