//! Point sets of the lattice model and the maps between them.
//!
//! Everything is computed over `W(F_{p^{m·j}})`: a [`Model`] fixes the prime,
//! the base residue degree `m`, the precision, the rank `n` and the field
//! degree `j`, and carries the coefficient ring, the hermitian space and the
//! residue pairing on `Λ₀/pΛ₀`.
//!
//! Enumerators return canonically sorted, duplicate-free vectors. The sort key
//! is the compact JSON serialization of each point.

mod dl;
mod heart;
mod label;
mod rz;
mod y;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::{make_ring, CoeffRing, RingElem, RingParams, MAX_DEG};
use crate::error::{Error, Result};
use crate::field::{Fe, Fq};
use crate::hermitian::{HermitianSpace, ResiduePairing};
use crate::lattice::{normalize, CoordinateMap, Lattice, Mat};
use crate::subspace::{gaussian_binomial, Subspace};

pub use dl::{enumerate_dl, enumerate_dl_naive, is_dl_point, DlFlag};
pub use heart::{
    dl_heart_flag, enumerate_dl_heart, enumerate_dl_heart_naive, heart_of, heart_pairing, hearts, hearts_naive,
    is_heart_point, HeartFlag, HeartLattice,
};
pub use label::{xmu_label, xmu_membership, Flavor, StratumLabel};
pub use rz::{enumerate_rz, enumerate_rz_naive, is_rz_point, stratum_of};
pub use y::{
    beta_properties, check_y_chain, complement_from_triple, dl_flag_from_y, enumerate_y, enumerate_y_naive,
    fiber_data, fiber_data_scaled, isotropic_complements, isotropic_complements_naive, lattice_from_complement,
    mn_from_l, BetaProperties, FiberData, TriplePoint, YPoint,
};

/// Default bound on the number of candidates an enumerator may visit.
pub const DEFAULT_CEILING: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelParams {
    pub p: u32,
    pub m: usize,
    #[serde(rename = "N")]
    pub prec: u32,
    pub n: usize,
    pub j: usize,
}

impl ModelParams {
    pub fn new(p: u32, n: usize, j: usize) -> Self {
        ModelParams { p, m: 2, prec: 6, n, j }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    params: ModelParams,
    ceiling: u64,
    space: HermitianSpace,
    pairing: ResiduePairing,
    lambda0: Lattice,
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        let ModelParams { p, m, prec, n, j } = params;
        if !(2..=1000).contains(&p) || (2..p).any(|d| d * d <= p && p % d == 0) {
            return Err(Error::InvalidParams(format!("p = {p} is not a supported prime")));
        }
        if m == 0 || m % 2 != 0 {
            return Err(Error::InvalidParams(format!("m must be even and positive, got {m}")));
        }
        if j == 0 || m * j > MAX_DEG {
            return Err(Error::InvalidParams(format!("residue degree m·j = {} must lie in 1..={MAX_DEG}", m * j)));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        let ring = make_ring(RingParams::new(p, m * j, prec), 0)?;
        let space = HermitianSpace::new(ring.clone(), n)?;
        let pairing = space.residue_pairing();
        let lambda0 = space.standard();
        Ok(Model { params, ceiling: DEFAULT_CEILING, space, pairing, lambda0 })
    }

    pub fn with_ceiling(mut self, ceiling: u64) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn ring(&self) -> &CoeffRing {
        self.space.ring()
    }

    pub fn field(&self) -> &Fq {
        self.space.field()
    }

    /// Size of the residue field `F_{p^{m·j}}`.
    pub fn q(&self) -> f64 {
        self.field().size() as f64
    }

    pub fn space(&self) -> &HermitianSpace {
        &self.space
    }

    /// `b̄` on `Λ₀/pΛ₀`.
    pub fn pairing(&self) -> &ResiduePairing {
        &self.pairing
    }

    pub fn lambda0(&self) -> &Lattice {
        &self.lambda0
    }

    pub fn dual(&self, l: &Lattice) -> Result<Lattice> {
        self.space.dual_lattice(l)
    }

    /// Ring presentation and model parameters, as written in stream headers.
    pub fn header(&self) -> Value {
        let p = self.params;
        json!({
            "p": p.p, "m": p.m, "N": p.prec, "n": p.n, "j": p.j,
            "F": self.ring().f_coeffs(),
        })
    }

    pub fn lattice_json(&self, l: &Lattice) -> Value {
        l.to_json(self.ring())
    }

    pub fn subspace_json(&self, s: &Subspace) -> Value {
        s.to_json(self.field())
    }

    /// Fails with [`Error::Ceiling`] if `estimate` exceeds the ceiling.
    pub fn check_ceiling(&self, estimate: f64) -> Result<()> {
        if estimate > self.ceiling as f64 {
            Err(Error::Ceiling { estimate, ceiling: self.ceiling })
        } else {
            Ok(())
        }
    }

    /// Image of `pΛ₀ ⊆ L ⊆ Λ₀` in `Λ₀/pΛ₀`.
    pub fn reduce(&self, l: &Lattice) -> Result<Subspace> {
        if l.shift() > 0 {
            return Err(Error::NotContained);
        }
        let r = self.ring();
        let n = self.n();
        let gens = l.generators_at(r, 0);
        let cols: Vec<Vec<Fe>> = (0..n).map(|c| (0..n).map(|i| r.residue(gens[i][c])).collect()).collect();
        Ok(Subspace::from_vectors(self.field(), n, &cols))
    }

    /// `pΛ₀ + lift(S)`.
    pub fn lift(&self, s: &Subspace) -> Result<Lattice> {
        let r = self.ring();
        let n = self.n();
        let mut gens: Mat = vec![Vec::with_capacity(n + s.dim()); n];
        for row in s.rows() {
            for (i, g) in gens.iter_mut().enumerate() {
                g.push(r.lift(row[i]));
            }
        }
        for (i, g) in gens.iter_mut().enumerate() {
            for c in 0..n {
                g.push(if i == c { r.from_int(r.p() as i64) } else { r.zero() });
            }
        }
        normalize(r, 0, &gens)
    }

    /// Estimated candidate count of an enumeration.
    pub fn estimate(&self, kind: Kind, k: usize, naive: bool) -> f64 {
        let q = self.q();
        let n = self.n();
        let g = |a: usize, b: usize| gaussian_binomial(q, a, b);
        match (kind, naive) {
            (Kind::Rz, false) => (1..=n)
                .filter(|&b| b + 1 >= n + 1 - b)
                .map(|b| {
                    let a = n + 1 - b;
                    g(n, b) * g(b, a) * q.powi((a * (n - b)) as i32)
                })
                .sum(),
            (Kind::Rz, true) => q.powi(2 * (n * n) as i32),
            (Kind::Y, false) => g(n, n + 1 - k) * g(n + 1 - k, 1),
            (Kind::Y, true) => g(n, n + 1 - k) * g(n, k),
            (Kind::Dl, false) => g(n, n - k) * (1.0 + g(k, k - 1)),
            (Kind::Dl, true) => g(n, k - 1) * g(n, n - k),
            (Kind::Hearts, _) => gaussian_binomial((self.params.p as f64).powi(2), n, n / 2),
            (Kind::DlHeart, _) => g(n, (n / 2).saturating_sub(1)),
            (Kind::Complements, false) => q.powi((k * (k - 1)) as i32),
            (Kind::Complements, true) => g(2 * k - 1, k - 1),
        }
    }

    fn require_k(&self, k: usize) -> Result<()> {
        if k == 0 || 2 * k > self.n() {
            return Err(Error::InvalidParams(format!("k = {k} must lie in 1..={}", self.n() / 2)));
        }
        Ok(())
    }

    fn require_even(&self) -> Result<()> {
        if self.n() % 2 != 0 {
            return Err(Error::InvalidParams(format!("hearts need even n, got {}", self.n())));
        }
        Ok(())
    }
}

/// Point sets with an enumerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Rz,
    Y,
    Dl,
    Hearts,
    DlHeart,
    Complements,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Rz => "rz",
            Kind::Y => "y",
            Kind::Dl => "dl",
            Kind::Hearts => "hearts",
            Kind::DlHeart => "dl-heart",
            Kind::Complements => "complements",
        }
    }
}

/// Sorts by serialized form and rejects duplicates.
pub(crate) fn canonical_sort<T>(items: Vec<T>, key: impl Fn(&T) -> Value) -> Result<Vec<T>> {
    let mut keyed: Vec<(String, T)> = items.into_iter().map(|t| (key(&t).to_string(), t)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
        let dup: Value = serde_json::from_str(&w[0].0).unwrap_or(Value::Null);
        return Err(Error::consistency("enumerator produced a duplicate point", dup));
    }
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

/// `Big/Small` for `p·Big ⊆ Small ⊆ Big`, as an `F_q`-vector space.
///
/// Coordinates are taken in the canonical basis of `Big`, reduced mod `p`,
/// and then reduced modulo the echelon image of `Small`; the remaining free
/// positions index the quotient basis.
#[derive(Debug, Clone)]
pub struct Quotient {
    big: Lattice,
    coords: CoordinateMap,
    small: Subspace,
    free: Vec<usize>,
}

impl Quotient {
    pub fn new(model: &Model, big: &Lattice, small: &Lattice) -> Result<Self> {
        let r = model.ring();
        let coords = big.coordinate_map(r)?;
        let cols = small.columns();
        let mut rows = Vec::with_capacity(cols.len());
        for c in &cols {
            rows.push(residues(r, &coords.apply(r, small.shift(), c)?));
        }
        let small_img = Subspace::from_vectors(model.field(), model.n(), &rows);
        let free = small_img.free_positions();
        Ok(Quotient { big: big.clone(), coords, small: small_img, free })
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of `p^{-vshift} x` in the quotient.
    pub fn coords(&self, model: &Model, vshift: i32, x: &[RingElem]) -> Result<Vec<Fe>> {
        let r = model.ring();
        let c = residues(r, &self.coords.apply(r, vshift, x)?);
        let red = self.small.reduce(model.field(), &c);
        Ok(self.free.iter().map(|&i| red[i]).collect())
    }

    /// Basis representatives at shift `big.shift()`: the columns of `Big` at
    /// the free positions.
    pub fn representatives(&self) -> Vec<Vec<RingElem>> {
        let cols = self.big.columns();
        self.free.iter().map(|&i| cols[i].clone()).collect()
    }

    pub fn big(&self) -> &Lattice {
        &self.big
    }

    /// The image of `Small ⊆ L ⊆ Big`.
    pub fn image(&self, model: &Model, l: &Lattice) -> Result<Subspace> {
        let mut rows = Vec::with_capacity(l.n());
        for c in l.columns() {
            rows.push(self.coords(model, l.shift(), &c)?);
        }
        Ok(Subspace::from_vectors(model.field(), self.dim(), &rows))
    }

    /// Lift of quotient coordinates to a vector at shift `big.shift()`.
    pub fn lift_vec(&self, model: &Model, c: &[Fe]) -> Vec<RingElem> {
        let r = model.ring();
        let reps = self.representatives();
        let n = model.n();
        let mut v = vec![r.zero(); n];
        for (rep, &ci) in reps.iter().zip(c) {
            if ci == 0 {
                continue;
            }
            let a = r.lift(ci);
            for i in 0..n {
                v[i] = r.add(v[i], r.mul(a, rep[i]));
            }
        }
        v
    }
}

fn residues(r: &CoeffRing, v: &[RingElem]) -> Vec<Fe> {
    v.iter().map(|&e| r.residue(e)).collect()
}
