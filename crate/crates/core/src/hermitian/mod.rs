//! Hermitian spaces `(C, ( , ))` over `E` and their split/non-split invariant.
//!
//! The form is linear in the first argument and conjugate-linear in the
//! second: `(x, y) = xᵀ · G · ȳ`, so `(x, a·y) = ā·(x, y)`.

mod induced;
mod lattice;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oe::{is_norm, legendre, FieldParams, OEElement, OEMatrix};

pub use induced::{induced_symplectic_space, LatticeQuotient};
pub use lattice::{standard_vertex_lattice, HermitianLattice, LatticeRecord};

/// Shape of the standard Gram matrices built by [`standard_space`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    SplitEven,
    NonSplitEven,
    Odd,
}

impl Variant {
    /// Largest type of a vertex lattice in a space of this shape.
    pub fn max_type(self, n: usize) -> usize {
        match self {
            Variant::SplitEven => n,
            Variant::NonSplitEven => n - 2,
            Variant::Odd => n - 1,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::SplitEven => "split-even",
            Variant::NonSplitEven => "non-split-even",
            Variant::Odd => "odd",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split-even" => Ok(Variant::SplitEven),
            "non-split-even" => Ok(Variant::NonSplitEven),
            "odd" => Ok(Variant::Odd),
            other => Err(Error::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceLabel {
    Split,
    NonSplit,
}

/// Discriminant class of a hermitian space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceClass {
    pub label: SpaceLabel,
    /// Residue mod `p` of the unit left after removing norms of `π`.
    pub disc_unit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HermitianSpace {
    params: FieldParams,
    gram: OEMatrix,
    variant: Option<Variant>,
}

impl HermitianSpace {
    pub fn new(gram: OEMatrix) -> Result<Self> {
        if !gram.is_hermitian() {
            return Err(Error::InvalidParams("Gram matrix is not hermitian".into()));
        }
        if gram.determinant().is_zero() {
            return Err(Error::Singular);
        }
        Ok(HermitianSpace { params: *gram.params(), gram, variant: None })
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &OEMatrix {
        &self.gram
    }

    pub fn variant(&self) -> Option<Variant> {
        self.variant
    }

    /// `(x, y) = xᵀ G ȳ` for coordinate vectors.
    pub fn form(&self, x: &[OEElement], y: &[OEElement]) -> OEElement {
        let n = self.dim();
        let mut acc = OEElement::zero(&self.params);
        for i in 0..n {
            for j in 0..n {
                acc = acc + x[i] * self.gram[(i, j)] * y[j].conj();
            }
        }
        acc
    }

    pub fn to_record(&self) -> SpaceRecord {
        SpaceRecord {
            p: self.params.p(),
            epsilon: self.params.epsilon(),
            n: self.dim(),
            gram: (0..self.dim())
                .map(|i| self.gram.row(i).iter().map(|x| x.to_string()).collect())
                .collect(),
            variant: self.variant,
        }
    }

    pub fn from_record(rec: &SpaceRecord) -> Result<Self> {
        let eps = rec.epsilon as i64;
        let rows: Vec<Vec<OEElement>> = rec
            .gram
            .iter()
            .map(|r| r.iter().map(|s| OEElement::parse(s, eps)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        if rows.len() != rec.n || rows.iter().any(|r| r.len() != rec.n) {
            return Err(Error::Parse("Gram matrix shape does not match n".into()));
        }
        let params = rows
            .first()
            .and_then(|r| r.first())
            .map(|x| *x.params())
            .ok_or_else(|| Error::Parse("empty Gram matrix".into()))?;
        if params.p() != rec.p {
            return Err(Error::Parse("prime in Gram entries does not match p".into()));
        }
        let gram = OEMatrix::from_fn(&params, rec.n, rec.n, |i, j| rows[i][j]);
        let mut space = HermitianSpace::new(gram)?;
        space.variant = rec.variant;
        Ok(space)
    }
}

/// JSON form `{p, epsilon, n, gram}` of a hermitian space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub p: u64,
    pub epsilon: u64,
    pub n: usize,
    pub gram: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
}

/// The lexicographically smallest unit pair `(u₁, u₂)` with `−u₁u₂` not a norm.
pub fn nonsplit_units(p: u64) -> (u64, u64) {
    for u1 in 1..p {
        for u2 in 1..p {
            if legendre(-((u1 * u2) as i64), p) == -1 {
                return (u1, u2);
            }
        }
    }
    unreachable!("F_p^× has non-squares for odd p")
}

/// Standard Gram matrices: hyperbolic blocks `H`, optionally followed by
/// `J = diag(u₁, u₂)` (non-split) or a trailing `1` (odd `n`).
pub fn standard_space(n: usize, variant: Variant, params: &FieldParams) -> Result<HermitianSpace> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let parity_ok = match variant {
        Variant::SplitEven | Variant::NonSplitEven => n.is_multiple_of(2),
        Variant::Odd => n % 2 == 1,
    };
    if !parity_ok {
        return Err(Error::ParityMismatch(n));
    }
    let h = OEMatrix::from_ints(params, &[vec![0, 1], vec![1, 0]]);
    let mut blocks = vec![h; n / 2];
    match variant {
        Variant::SplitEven => {}
        Variant::NonSplitEven => {
            let (u1, u2) = nonsplit_units(params.p());
            blocks.pop();
            blocks.push(OEMatrix::from_ints(params, &[vec![u1 as i64, 0], vec![0, u2 as i64]]));
        }
        Variant::Odd => blocks.push(OEMatrix::identity(params, 1)),
    }
    let gram = OEMatrix::block_diagonal(params, &blocks);
    let mut space = HermitianSpace::new(gram)?;
    space.variant = Some(variant);
    Ok(space)
}

/// Discriminant `(−1)^{n(n−1)/2} det G` modulo `Nm(E^×)`.
///
/// The `p`-part is removed by dividing out `Nm(π)^k = (−εp)^k`; the remaining
/// unit is a norm iff it is a square mod `p`.
pub fn classify_space(space: &HermitianSpace) -> Result<SpaceClass> {
    let params = space.params();
    let n = space.dim();
    let mut det = space.gram().determinant();
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        det = -det;
    }
    if det.b() != 0 {
        return Err(Error::InvalidParams("determinant of a hermitian matrix must lie in Q_p".into()));
    }
    let v = det.valuation().ok_or_else(|| {
        if det.is_full_precision() {
            Error::Singular
        } else {
            Error::PrecisionExhausted("determinant vanishes to known precision".into())
        }
    })?;
    let k = v / 2;
    let p = params.p();
    let unit = (det.a() / p.pow(k)) % p;
    // u · (−ε)^{−k}; only its class mod squares matters, so (−ε)^k will do.
    let minus_eps = (p - params.epsilon() % p) % p;
    let disc_unit = (unit * crate::oe::pow_mod(minus_eps, k as u64, p)) % p;
    let label = if is_norm(params, disc_unit as i64)? { SpaceLabel::Split } else { SpaceLabel::NonSplit };
    Ok(SpaceClass { label, disc_unit })
}

impl HermitianSpace {
    pub fn into_arc(self) -> Arc<HermitianSpace> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldParams {
        FieldParams::with_prime(p).unwrap()
    }

    #[test]
    fn split_plane_is_hyperbolic() {
        let s = standard_space(2, Variant::SplitEven, &f(3)).unwrap();
        assert_eq!(s.gram(), &OEMatrix::from_ints(&f(3), &[vec![0, 1], vec![1, 0]]));
        assert_eq!(classify_space(&s).unwrap().label, SpaceLabel::Split);
    }

    #[test]
    fn nonsplit_plane_mod_three_is_identity() {
        let s = standard_space(2, Variant::NonSplitEven, &f(3)).unwrap();
        assert_eq!(s.gram(), &OEMatrix::identity(&f(3), 2));
        assert_eq!(classify_space(&s).unwrap().label, SpaceLabel::NonSplit);
        assert_eq!(nonsplit_units(5), (1, 2));
    }

    #[test]
    fn odd_space_reports_split() {
        let s = standard_space(3, Variant::Odd, &f(3)).unwrap();
        let h = OEMatrix::from_ints(&f(3), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.gram(), &OEMatrix::block_diagonal(&f(3), &[h, OEMatrix::identity(&f(3), 1)]));
        assert_eq!(classify_space(&s).unwrap(), SpaceClass { label: SpaceLabel::Split, disc_unit: 1 });
    }

    #[test]
    fn parity_is_checked() {
        assert_eq!(standard_space(3, Variant::SplitEven, &f(3)).unwrap_err(), Error::ParityMismatch(3));
        assert_eq!(standard_space(2, Variant::Odd, &f(3)).unwrap_err(), Error::ParityMismatch(2));
    }

    #[test]
    fn scaling_by_pi_norm_keeps_class() {
        // diag(p, −p·u) has discriminant class of u after removing Nm(π)² .
        let p = f(5);
        let gram = OEMatrix::from_ints(&p, &[vec![5, 0], vec![0, 10]]);
        let s = HermitianSpace::new(gram).unwrap();
        // −det = −50 = (−5)²·(−2); −2 ≡ 3 is a non-square mod 5.
        assert_eq!(classify_space(&s).unwrap().label, SpaceLabel::NonSplit);
    }

    #[test]
    fn space_record_round_trips() {
        for (n, v) in [(2, Variant::SplitEven), (4, Variant::NonSplitEven), (3, Variant::Odd)] {
            let s = standard_space(n, v, &FieldParams::new(5, 2, 6).unwrap()).unwrap();
            let json = serde_json::to_string(&s.to_record()).unwrap();
            let back: SpaceRecord = serde_json::from_str(&json).unwrap();
            assert_eq!(HermitianSpace::from_record(&back).unwrap(), s);
        }
    }
}
