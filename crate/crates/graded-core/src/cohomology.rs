//! Twisted group cohomology of the center and the curvature defect.
//!
//! The failure of condition (L2) for a connection family is measured by
//! the defect `Θ_δ(g,h)`; when (L1) holds, the induced operator on the
//! degree-`gh` component is left multiplication by a *central* element
//! `Δ_δ(g,h)` of the principal component. The family `Δ_δ` is a
//! 2-cocycle for the action `β` of the group on the center, the gauge
//! shift `η(g) ↦ η(g) − ξ(g)·α_g(1)` changes it by the coboundary `−dξ`,
//! and the derivation lifts iff the class `[Δ_δ]` vanishes. This module
//! computes `β`, extracts `Δ_δ`, checks the cocycle identities, solves
//! coboundary equations (by recursion over an integer window, by exact
//! linear algebra over the scalar field for finite groups), and converts
//! between central 1-cocycles and the gauge derivations they induce.

use std::collections::BTreeMap;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::facsys::{FactorSystem, FrameSource};
use crate::group::GroupModel;
use crate::lift::{
    build_lift, check_lift_conditions, require_lift_conditions, theta, EtaFamily,
    GradedDerivation,
};
use crate::linalg::{solve_with_certificate, ScalarMat, SolveOutcome};
use crate::matrix::Mat;
use crate::reconstruct::{ReconElem, ReconstructedRing};
use crate::report::Report;
use crate::ring::Ring;
use crate::scalar::Scalar;

// ---------------------------------------------------------------------------
// The action β of the group on the center
// ---------------------------------------------------------------------------

/// The group action on central elements of the principal component:
/// `β_g(z)` is the unique element with `s·z = β_g(z)·s` for all `s` of
/// degree `g`, computed from the canonical frames of the reconstructed
/// ring as `β_g(z) = ŷ_{g⁻¹}ᵗ · z · x̂_{g⁻¹}`.
///
/// The formula is applied verbatim to whatever it is given; it computes
/// the action only on elements that are actually central, which
/// [`BetaAction::report`] verifies.
pub struct BetaAction<R: Ring> {
    recon: ReconstructedRing<R>,
    /// per degree `d`: the canonical frame entries (x̂ at `d`, ŷ at `d⁻¹`)
    frames: BTreeMap<i64, (Vec<ReconElem<R>>, Vec<ReconElem<R>>)>,
}

impl<R: Ring> BetaAction<R> {
    /// Precompute the canonical frames of every degree.
    pub fn new(recon: &ReconstructedRing<R>) -> Result<Self> {
        let mut frames = BTreeMap::new();
        for d in recon.factor_system().group.elements() {
            let f = recon.degree_frame(d)?;
            let xs = (0..f.size()).map(|i| f.x.at(i, 0).clone()).collect();
            let ys = (0..f.size()).map(|i| f.y.at(i, 0).clone()).collect();
            frames.insert(d, (xs, ys));
        }
        Ok(BetaAction {
            recon: recon.clone(),
            frames,
        })
    }

    /// The ring the action lives over.
    pub fn recon(&self) -> &ReconstructedRing<R> {
        &self.recon
    }

    fn frame(&self, d: i64) -> Result<&(Vec<ReconElem<R>>, Vec<ReconElem<R>>)> {
        self.frames
            .get(&d)
            .ok_or_else(|| Error::OutOfWindow(format!("no frame for degree {d}")))
    }

    /// `β_g(z)`.
    pub fn apply(&self, g: i64, z: &R::Elem) -> Result<R::Elem> {
        let recon = &self.recon;
        let g_inv = recon.factor_system().group.inv(g)?;
        let (xs, ys) = self.frame(g_inv)?;
        let ez = recon.embed(z);
        let mut acc = ReconElem::zero();
        for (x, y) in xs.iter().zip(ys) {
            let term = recon.mul(&recon.mul(y, &ez)?, x)?;
            acc = recon.add(&acc, &term);
        }
        recon.unembed(&acc)
    }

    /// Is `z` central against the supplied principal-component tests?
    pub fn check_central(&self, z: &R::Elem, tests: &[R::Elem]) -> Result<()> {
        let base = self.recon.base();
        for r in tests {
            let zr = base.mul(z, r)?;
            let rz = base.mul(r, z)?;
            if zr != rz {
                return Err(Error::NotCentral(format!(
                    "[{}, {}] ≠ 0",
                    base.display(z),
                    base.display(r)
                )));
            }
        }
        Ok(())
    }

    /// Verify the action on a list of central elements:
    ///
    /// * `beta:central` — each element commutes with every test input;
    /// * `beta:identity` — `β_e = id`;
    /// * `beta:intertwine` — `s·z = β_g(z)·s` on every canonical frame
    ///   entry `s` of every degree;
    /// * `beta:functorial` — `β_g(β_h(z)) = β_{gh}(z)` on composable
    ///   pairs.
    pub fn report(&self, central: &[R::Elem], tests: &[R::Elem]) -> Result<Report> {
        let recon = &self.recon;
        let base = recon.base();
        let group = &recon.factor_system().group;
        let e = group.identity();
        let mut rep = Report::new();

        let mut bad = None;
        'central: for z in central {
            for r in tests {
                if base.mul(z, r)? != base.mul(r, z)? {
                    bad = Some(format!(
                        "[{}, {}] ≠ 0",
                        base.display(z),
                        base.display(r)
                    ));
                    break 'central;
                }
            }
        }
        rep.record("beta:central", bad.map_or(Ok(()), Err));

        let mut bad = None;
        for z in central {
            if self.apply(e, z)? != *z {
                bad = Some(format!("β_e({}) ≠ id", base.display(z)));
                break;
            }
        }
        rep.record("beta:identity", bad.map_or(Ok(()), Err));

        let mut bad = None;
        'inter: for z in central {
            let ez = recon.embed(z);
            for g in group.elements() {
                let bz = recon.embed(&self.apply(g, z)?);
                let (xs, _) = self.frame(g)?;
                for s in xs {
                    let lhs = recon.mul(s, &ez)?;
                    let rhs = recon.mul(&bz, s)?;
                    if lhs != rhs {
                        bad = Some(format!(
                            "s·z ≠ β_{g}(z)·s for z = {}",
                            base.display(z)
                        ));
                        break 'inter;
                    }
                }
            }
        }
        rep.record("beta:intertwine", bad.map_or(Ok(()), Err));

        let mut bad = None;
        'funct: for z in central {
            for (g, h) in group.closed_pairs() {
                let gh = group.mul(g, h)?;
                let lhs = self.apply(g, &self.apply(h, z)?)?;
                let rhs = self.apply(gh, z)?;
                if lhs != rhs {
                    bad = Some(format!(
                        "β_{g}(β_{h}(z)) ≠ β_{gh}(z) for z = {}",
                        base.display(z)
                    ));
                    break 'funct;
                }
            }
        }
        rep.record("beta:functorial", bad.map_or(Ok(()), Err));

        Ok(rep)
    }
}

// ---------------------------------------------------------------------------
// Center of the principal component
// ---------------------------------------------------------------------------

/// Basis of the centralizer of `tests` inside the scalar span of
/// `window`: all linear combinations `z = Σ c_i w_i` with `z·r = r·z`
/// for every test `r`, solved exactly over the scalar field in monomial
/// coordinates. With tests spanning the principal component far enough,
/// this is a basis of (the window part of) the center.
pub fn center_basis<R: Ring>(
    ring: &R,
    window: &[R::Elem],
    tests: &[R::Elem],
) -> Result<Vec<R::Elem>> {
    if window.is_empty() {
        return Ok(Vec::new());
    }
    // commutators of each window element with each test, in monomial
    // coordinates
    let mut columns: Vec<BTreeMap<String, R::Sc>> = Vec::with_capacity(window.len());
    let mut keys: BTreeMap<String, usize> = BTreeMap::new();
    for w in window {
        let mut col = BTreeMap::new();
        for (t_idx, r) in tests.iter().enumerate() {
            let c = ring.sub(&ring.mul(w, r)?, &ring.mul(r, w)?);
            for (key, coeff) in ring.monomial_support(&c) {
                let full = format!("{t_idx}#{key}");
                let next = keys.len();
                keys.entry(full.clone()).or_insert(next);
                let slot = col.entry(full).or_insert_with(R::Sc::zero);
                *slot = slot.add(&coeff);
            }
        }
        columns.push(col);
    }
    let mut a = ScalarMat::zero(keys.len(), window.len());
    for (j, col) in columns.iter().enumerate() {
        for (key, coeff) in col {
            a.set(keys[key], j, coeff.clone());
        }
    }
    let mut basis = Vec::new();
    for combo in crate::linalg::kernel_basis(&a) {
        let mut z = ring.zero();
        for (c, w) in combo.iter().zip(window) {
            z = ring.add(&z, &ring.scale(c, w));
        }
        if !ring.is_zero(&z) {
            basis.push(z);
        }
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// Cochains
// ---------------------------------------------------------------------------

/// A `p`-cochain on the group with values in the principal component
/// (central values, for the cohomology to make sense). Missing keys read
/// as zero.
#[derive(Debug, Clone)]
pub struct Cochain<R: Ring> {
    degree: usize,
    values: BTreeMap<Vec<i64>, R::Elem>,
}

impl<R: Ring> Cochain<R> {
    /// Build a cochain, validating key lengths.
    pub fn new(degree: usize, values: BTreeMap<Vec<i64>, R::Elem>) -> Result<Self> {
        for k in values.keys() {
            if k.len() != degree {
                return Err(Error::BadInput(format!(
                    "cochain of degree {degree} has a key of length {}",
                    k.len()
                )));
            }
        }
        Ok(Cochain { degree, values })
    }

    /// The zero cochain.
    pub fn zero(degree: usize) -> Self {
        Cochain {
            degree,
            values: BTreeMap::new(),
        }
    }

    /// A 1-cochain from a degree-indexed map.
    pub fn from_map1(map: &BTreeMap<i64, R::Elem>) -> Self {
        Cochain {
            degree: 1,
            values: map.iter().map(|(&g, v)| (vec![g], v.clone())).collect(),
        }
    }

    /// A 1-cochain back to a degree-indexed map.
    pub fn to_map1(&self) -> Result<BTreeMap<i64, R::Elem>> {
        if self.degree != 1 {
            return Err(Error::BadInput(format!(
                "expected a 1-cochain, got degree {}",
                self.degree
            )));
        }
        Ok(self
            .values
            .iter()
            .map(|(k, v)| (k[0], v.clone()))
            .collect())
    }

    /// Cochain degree `p`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The stored (nonzero) values.
    pub fn values(&self) -> &BTreeMap<Vec<i64>, R::Elem> {
        &self.values
    }

    /// Value at a key (zero when absent).
    pub fn value(&self, ring: &R, key: &[i64]) -> Result<R::Elem> {
        if key.len() != self.degree {
            return Err(Error::BadInput(format!(
                "cochain of degree {} evaluated on a {}-tuple",
                self.degree,
                key.len()
            )));
        }
        Ok(self
            .values
            .get(key)
            .cloned()
            .unwrap_or_else(|| ring.zero()))
    }

    fn set(&mut self, ring: &R, key: Vec<i64>, v: R::Elem) {
        if ring.is_zero(&v) {
            self.values.remove(&key);
        } else {
            self.values.insert(key, v);
        }
    }

    /// Entrywise sum.
    pub fn add(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::BadInput(format!(
                "cannot add cochains of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (k, v) in &other.values {
            let cur = out.value(ring, k)?;
            out.set(ring, k.clone(), ring.add(&cur, v));
        }
        Ok(out)
    }

    /// Entrywise difference.
    pub fn sub(&self, ring: &R, other: &Self) -> Result<Self> {
        self.add(ring, &other.neg(ring))
    }

    /// Entrywise negation.
    pub fn neg(&self, ring: &R) -> Self {
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), ring.neg(v)))
                .collect(),
        }
    }

    /// Equality with missing keys reading as zero.
    pub fn same_as(&self, ring: &R, other: &Self) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let keys: std::collections::BTreeSet<_> = self
            .values
            .keys()
            .chain(other.values.keys())
            .cloned()
            .collect();
        keys.iter().all(|k| {
            match (self.value(ring, k), other.value(ring, k)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            }
        })
    }

    /// Is every value zero?
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

/// The twisted differential
///
/// ```text
/// (dc)(g₁,…,g_{p+1}) = β_{g₁}(c(g₂,…,g_{p+1}))
///                      + Σ_{i=1..p} (−1)^i c(…, g_i g_{i+1}, …)
///                      + (−1)^{p+1} c(g₁,…,g_p)
/// ```
///
/// evaluated on every tuple whose partial products stay inside the group
/// model. Supported for `p ≤ 2` (which closes the square `d∘d = 0` on
/// everything this crate produces).
pub fn cochain_differential<R: Ring>(
    beta: &BetaAction<R>,
    c: &Cochain<R>,
) -> Result<Cochain<R>> {
    let recon = beta.recon();
    let base = recon.base();
    let group = &recon.factor_system().group;
    let mut out = Cochain::zero(c.degree() + 1);
    match c.degree() {
        0 => {
            let v = c.value(base, &[])?;
            for g in group.elements() {
                let val = base.sub(&beta.apply(g, &v)?, &v);
                out.set(base, vec![g], val);
            }
        }
        1 => {
            for (g, h) in group.closed_pairs() {
                let gh = group.mul(g, h)?;
                let mut val = beta.apply(g, &c.value(base, &[h])?)?;
                val = base.sub(&val, &c.value(base, &[gh])?);
                val = base.add(&val, &c.value(base, &[g])?);
                out.set(base, vec![g, h], val);
            }
        }
        2 => {
            for (g, h, k) in group.closed_triples() {
                let gh = group.mul(g, h)?;
                let hk = group.mul(h, k)?;
                let mut val = beta.apply(g, &c.value(base, &[h, k])?)?;
                val = base.sub(&val, &c.value(base, &[gh, k])?);
                val = base.add(&val, &c.value(base, &[g, hk])?);
                val = base.sub(&val, &c.value(base, &[g, h])?);
                out.set(base, vec![g, h, k], val);
            }
        }
        p => {
            return Err(Error::BadInput(format!(
                "differential implemented for cochain degrees ≤ 2, got {p}"
            )));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The central defect Δ_δ
// ---------------------------------------------------------------------------

/// The defect matrix `Θ_δ(g,h)`; re-exported next to its central
/// extraction for discoverability.
pub fn defect_theta<R: Ring>(
    fs: &FactorSystem<R>,
    delta: &Derivation<R>,
    eta: &EtaFamily<R>,
    g: i64,
    h: i64,
) -> Result<Mat<R>> {
    theta(fs, delta, eta, g, h)
}

/// Extract the central element implementing the defect at `(g,h)`:
///
/// ```text
/// Δ_δ(g,h) = β_{gh}( ŷ_{gh}ᵗ · ω̃(g,h)·Θ_δ(g,h) · x̂_{gh} )
/// ```
///
/// The defining property — the operator `s_g·s_h ↦ (u·α_g(v)·Θ)ᵗ x_{gh}`
/// is left multiplication by `Δ_δ(g,h)` on the degree-`gh` component —
/// is re-verified on all canonical frame probes before the value is
/// returned; a mismatch (which happens when condition (L1) does not
/// hold, so the defect is not central) is a hard error.
pub fn defect_central<R: Ring>(
    recon: &ReconstructedRing<R>,
    beta: &BetaAction<R>,
    delta: &Derivation<R>,
    eta: &EtaFamily<R>,
    g: i64,
    h: i64,
) -> Result<R::Elem> {
    let fs = recon.factor_system();
    let base = recon.base();
    let gh = fs.group.mul(g, h)?;
    let th = theta(fs, delta, eta, g, h)?;
    if th.is_zero() {
        return Ok(base.zero());
    }
    let m = fs.omega_tilde(g, h)?.mul(&th)?;
    let frame = recon.degree_frame(gh)?;
    let mut acc = ReconElem::zero();
    for i in 0..frame.size() {
        for j in 0..frame.size() {
            let mid = recon.embed(m.at(i, j));
            let term = recon.mul(&recon.mul(frame.y.at(i, 0), &mid)?, frame.x.at(j, 0))?;
            acc = recon.add(&acc, &term);
        }
    }
    let z = beta.apply(gh, &recon.unembed(&acc)?)?;

    // verify: defect action = left multiplication by z, on frame probes
    let ez = recon.embed(&z);
    for i in 0..fs.size(g)? {
        let u = crate::facsys::std_row(fs, g, i)?;
        let su = recon.view(g, row_entries(&u))?;
        for j in 0..fs.size(h)? {
            let v = crate::facsys::std_row(fs, h, j)?;
            let sv = recon.view(h, row_entries(&v))?;
            let row = u.mul(&fs.alpha_mat(g, &v)?)?.mul(&th)?;
            let way1 = recon.view(gh, row_entries(&row))?;
            let way2 = recon.mul(&ez, &recon.mul(&su, &sv)?)?;
            if way1 != way2 {
                return Err(Error::CentralExtractionMismatch(format!(
                    "at ({g},{h}), probe ({i},{j}): defect action gives {} \
                     but z·s = {}",
                    recon.display(&way1),
                    recon.display(&way2)
                )));
            }
        }
    }
    Ok(z)
}

fn row_entries<R: Ring>(m: &Mat<R>) -> Vec<R::Elem> {
    (0..m.cols()).map(|j| m.at(0, j).clone()).collect()
}

/// The full defect 2-cochain `Δ_δ` on all composable pairs.
pub fn defect_cochain<R: Ring>(
    recon: &ReconstructedRing<R>,
    beta: &BetaAction<R>,
    delta: &Derivation<R>,
    eta: &EtaFamily<R>,
) -> Result<Cochain<R>> {
    let fs = recon.factor_system();
    let base = recon.base();
    let mut out = Cochain::zero(2);
    for (g, h) in fs.group.closed_pairs() {
        let z = defect_central(recon, beta, delta, eta, g, h)?;
        out.set(base, vec![g, h], z);
    }
    Ok(out)
}

/// Verify the defect against supplied probes:
///
/// * `defect:action` — for each probe `(g, u, h, v)`, the two
///   evaluations of `Δ_δ(g,h)` on `s_g·s_h` (via the defect matrix and
///   via left multiplication by the extracted central element) agree;
/// * `defect:central` — each extracted value commutes with every test
///   input.
pub fn defect_report<R: Ring>(
    recon: &ReconstructedRing<R>,
    beta: &BetaAction<R>,
    delta: &Derivation<R>,
    eta: &EtaFamily<R>,
    probes: &[(i64, Mat<R>, i64, Mat<R>)],
    tests: &[R::Elem],
) -> Result<Report> {
    let fs = recon.factor_system();
    let mut rep = Report::new();

    let mut bad = None;
    for (g, u, h, v) in probes {
        let (g, h) = (*g, *h);
        let gh = fs.group.mul(g, h)?;
        let z = defect_central(recon, beta, delta, eta, g, h)?;
        let th = theta(fs, delta, eta, g, h)?;
        let u = u.mul(&fs.alpha_one(g)?)?;
        let v = v.mul(&fs.alpha_one(h)?)?;
        let row = u.mul(&fs.alpha_mat(g, &v)?)?.mul(&th)?;
        let way1 = recon.view(gh, row_entries(&row))?;
        let su = recon.view(g, row_entries(&u))?;
        let sv = recon.view(h, row_entries(&v))?;
        let way2 = recon.mul(&recon.embed(&z), &recon.mul(&su, &sv)?)?;
        if way1 != way2 {
            bad = Some(format!(
                "at ({g},{h}): defect action gives {} but Δ·s = {}",
                recon.display(&way1),
                recon.display(&way2)
            ));
            break;
        }
    }
    rep.record("defect:action", bad.map_or(Ok(()), Err));

    let mut bad = None;
    'outer: for (g, h) in fs.group.closed_pairs() {
        let z = defect_central(recon, beta, delta, eta, g, h)?;
        for r in tests {
            let base = recon.base();
            if base.mul(&z, r)? != base.mul(r, &z)? {
                bad = Some(format!(
                    "Δ({g},{h}) = {} does not commute with {}",
                    base.display(&z),
                    base.display(r)
                ));
                break 'outer;
            }
        }
    }
    rep.record("defect:central", bad.map_or(Ok(()), Err));

    Ok(rep)
}

/// Check the twisted 2-cocycle identity `dΔ = 0` on all composable
/// triples.
pub fn cocycle_report<R: Ring>(beta: &BetaAction<R>, delta2: &Cochain<R>) -> Result<Report> {
    let base = beta.recon().base();
    let mut rep = Report::new();
    if delta2.degree() != 2 {
        return Err(Error::BadInput(format!(
            "cocycle check expects a 2-cochain, got degree {}",
            delta2.degree()
        )));
    }
    let d = cochain_differential(beta, delta2)?;
    let mut bad = None;
    for (k, v) in d.values() {
        if !base.is_zero(v) {
            bad = Some(format!(
                "(dΔ)({},{},{}) = {} ≠ 0",
                k[0],
                k[1],
                k[2],
                base.display(v)
            ));
            break;
        }
    }
    rep.record("cocycle2", bad.map_or(Ok(()), Err));
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Coboundary solving
// ---------------------------------------------------------------------------

/// Solve `dξ = Δ` for a 1-cochain `ξ` with `ξ(e) = 0`.
///
/// Over an integer window the solution is built by recursion —
/// `ξ(1) = 0`, `ξ(n+1) = ξ(n) − Δ(n,1)`, `ξ(−1) = β_{−1}(Δ(1,−1))`,
/// `ξ(−n−1) = ξ(−n) + β_{−n}(ξ(−1)) − Δ(−n,−1)` — and then verified on
/// every composable pair. For a finite group the equation is solved
/// exactly over the scalar field, writing each unknown `ξ(g)` in the
/// supplied central basis and comparing monomial coordinates; an
/// inconsistent system (a nonzero obstruction class) is a
/// [`Error::NoSolution`].
pub fn coboundary_solve<R: Ring>(
    beta: &BetaAction<R>,
    delta2: &Cochain<R>,
    central_basis: &[R::Elem],
) -> Result<Cochain<R>> {
    if delta2.degree() != 2 {
        return Err(Error::BadInput(format!(
            "coboundary solve expects a 2-cochain, got degree {}",
            delta2.degree()
        )));
    }
    let group = beta.recon().factor_system().group.clone();
    let xi = match &group {
        GroupModel::IntegerWindow { bound } => solve_integer(beta, delta2, *bound)?,
        GroupModel::Finite { .. } => solve_finite(beta, delta2, central_basis)?,
    };
    // full verification on every composable pair
    let base = beta.recon().base();
    let d = cochain_differential(beta, &xi)?;
    if !d.same_as(base, delta2) {
        return Err(Error::NoSolution(
            "constructed ξ fails dξ = Δ on some composable pair; the defect \
             does not extend to a coboundary over this window"
                .into(),
        ));
    }
    Ok(xi)
}

fn solve_integer<R: Ring>(
    beta: &BetaAction<R>,
    delta2: &Cochain<R>,
    bound: i64,
) -> Result<Cochain<R>> {
    let base = beta.recon().base();
    let mut xi = Cochain::zero(1);
    // upward: ξ(1) = 0, ξ(n+1) = ξ(n) − Δ(n,1)
    let mut cur = base.zero();
    for n in 1..bound {
        cur = base.sub(&cur, &delta2.value(base, &[n, 1])?);
        xi.set(base, vec![n + 1], cur.clone());
    }
    // downward: ξ(−1) = β_{−1}(Δ(1,−1)), ξ(−n−1) = ξ(−n) + β_{−n}(ξ(−1)) − Δ(−n,−1)
    let xi_m1 = beta.apply(-1, &delta2.value(base, &[1, -1])?)?;
    xi.set(base, vec![-1], xi_m1.clone());
    let mut cur = xi_m1.clone();
    for n in 1..bound {
        cur = base.add(&cur, &beta.apply(-n, &xi_m1)?);
        cur = base.sub(&cur, &delta2.value(base, &[-n, -1])?);
        xi.set(base, vec![-n - 1], cur.clone());
    }
    Ok(xi)
}

fn solve_finite<R: Ring>(
    beta: &BetaAction<R>,
    delta2: &Cochain<R>,
    central_basis: &[R::Elem],
) -> Result<Cochain<R>> {
    let base = beta.recon().base();
    let group = beta.recon().factor_system().group.clone();
    let e = group.identity();
    let unknowns: Vec<i64> = group.elements().into_iter().filter(|&g| g != e).collect();
    if unknowns.is_empty() {
        return if delta2.is_zero() {
            Ok(Cochain::zero(1))
        } else {
            Err(Error::NoSolution("nonzero defect on the trivial group".into()))
        };
    }
    if central_basis.is_empty() {
        return if delta2.is_zero() {
            Ok(Cochain::zero(1))
        } else {
            Err(Error::NoSolution(
                "nonzero defect but an empty central basis".into(),
            ))
        };
    }
    let k = central_basis.len();
    let var = |g: i64, j: usize| -> usize {
        let gi = unknowns.iter().position(|&x| x == g).unwrap();
        gi * k + j
    };

    // β_g(b_j) precomputed
    let mut beta_b: BTreeMap<(i64, usize), R::Elem> = BTreeMap::new();
    for g in group.elements() {
        for (j, b) in central_basis.iter().enumerate() {
            beta_b.insert((g, j), beta.apply(g, b)?);
        }
    }

    // monomial coordinates: accumulate sparse rows per (pair, key)
    let mut keys: BTreeMap<String, usize> = BTreeMap::new();
    let key_of = |s: String, keys: &mut BTreeMap<String, usize>| -> usize {
        let next = keys.len();
        *keys.entry(s).or_insert(next)
    };
    struct Row<S> {
        coeffs: BTreeMap<usize, S>,
        rhs: S,
    }
    let mut rows: BTreeMap<(usize, usize), Row<R::Sc>> = BTreeMap::new();
    let pairs = group.closed_pairs();
    let add_term =
        |rows: &mut BTreeMap<(usize, usize), Row<R::Sc>>,
         keys: &mut BTreeMap<String, usize>,
         pair_idx: usize,
         col: Option<usize>,
         elem: &R::Elem,
         sign: i64| {
            for (key, coeff) in base.monomial_support(elem) {
                let ki = key_of(key, keys);
                let row = rows.entry((pair_idx, ki)).or_insert_with(|| Row {
                    coeffs: BTreeMap::new(),
                    rhs: R::Sc::zero(),
                });
                let signed = if sign < 0 { coeff.neg() } else { coeff };
                match col {
                    Some(c) => {
                        let slot = row.coeffs.entry(c).or_insert_with(R::Sc::zero);
                        *slot = slot.add(&signed);
                    }
                    None => row.rhs = row.rhs.add(&signed),
                }
            }
        };

    for (pair_idx, &(g, h)) in pairs.iter().enumerate() {
        let gh = group.mul(g, h)?;
        // β_g(ξ(h)): + β_g(b_j) at column (h, j)
        if h != e {
            for j in 0..k {
                let bb = beta_b[&(g, j)].clone();
                add_term(&mut rows, &mut keys, pair_idx, Some(var(h, j)), &bb, 1);
            }
        }
        // − ξ(gh)
        if gh != e {
            for (j, b) in central_basis.iter().enumerate() {
                add_term(&mut rows, &mut keys, pair_idx, Some(var(gh, j)), b, -1);
            }
        }
        // + ξ(g)
        if g != e {
            for (j, b) in central_basis.iter().enumerate() {
                add_term(&mut rows, &mut keys, pair_idx, Some(var(g, j)), b, 1);
            }
        }
        // rhs: Δ(g,h)
        let rhs = delta2.value(base, &[g, h])?;
        add_term(&mut rows, &mut keys, pair_idx, None, &rhs, 1);
    }

    let nvars = unknowns.len() * k;
    let row_list: Vec<&Row<R::Sc>> = rows.values().collect();
    let mut a = ScalarMat::zero(row_list.len(), nvars);
    let mut b = Vec::with_capacity(row_list.len());
    for (i, row) in row_list.iter().enumerate() {
        for (&c, coeff) in &row.coeffs {
            a.set(i, c, coeff.clone());
        }
        b.push(row.rhs.clone());
    }
    match solve_with_certificate(&a, &b) {
        SolveOutcome::Solution(x) => {
            let mut xi = Cochain::zero(1);
            for (gi, &g) in unknowns.iter().enumerate() {
                let mut v = base.zero();
                for (j, bj) in central_basis.iter().enumerate() {
                    v = base.add(&v, &base.scale(&x[gi * k + j], bj));
                }
                xi.set(base, vec![g], v);
            }
            Ok(xi)
        }
        SolveOutcome::Inconsistent(_) => Err(Error::NoSolution(
            "the defect class is a nonzero obstruction: dξ = Δ is \
             inconsistent over the given central basis"
                .into(),
        )),
    }
}

/// Compute the correction `ξ` that repairs a connection family whose
/// only failure is condition (L2): solves `dξ = Δ_δ` after verifying the
/// cocycle identity. Intended for integer windows (the finite-group path
/// needs a central basis; use [`lift_via_cohomology`] there).
pub fn solve_connection_defect<R: Ring>(
    fs: &FactorSystem<R>,
    delta: &Derivation<R>,
    eta: &EtaFamily<R>,
    samples: &[R::Elem],
) -> Result<BTreeMap<i64, R::Elem>> {
    let recon = ReconstructedRing::new(fs.clone(), samples)?;
    let beta = BetaAction::new(&recon)?;
    let dd = defect_cochain(&recon, &beta, delta, eta)?;
    cocycle_report(&beta, &dd)?.require(Error::CocycleViolation)?;
    let xi = coboundary_solve(&beta, &dd, &[])?;
    xi.to_map1()
}

/// Decide liftability through cohomology: check the conditions; if the
/// only failure is (L2), extract the central defect, verify it is a
/// 2-cocycle, solve `dξ = Δ_δ`, shift the family, recheck, and build.
///
/// Returns the lift together with the correction `ξ` that was applied
/// (the zero 1-cochain when none was needed). A nonzero obstruction
/// class surfaces as [`Error::NoSolution`]; a (L1) failure as
/// [`Error::Cond1Violation`].
pub fn lift_via_cohomology<R: Ring>(
    fs: &FactorSystem<R>,
    delta: &Derivation<R>,
    eta: &EtaFamily<R>,
    samples: &[R::Elem],
    central_basis: &[R::Elem],
) -> Result<(GradedDerivation<R>, Cochain<R>)> {
    let rep = check_lift_conditions(fs, delta, eta, samples)?;
    if rep.all_pass() {
        let dhat = build_lift(fs, delta, eta, samples)?;
        return Ok((dhat, Cochain::zero(1)));
    }
    if !rep.checks.iter().all(|c| c.pass || c.tag == "cond2") {
        return require_lift_conditions(rep).map(|_| unreachable!());
    }
    let recon = ReconstructedRing::new(fs.clone(), samples)?;
    let beta = BetaAction::new(&recon)?;
    let dd = defect_cochain(&recon, &beta, delta, eta)?;
    cocycle_report(&beta, &dd)?.require(Error::CocycleViolation)?;
    let xi = coboundary_solve(&beta, &dd, central_basis)?;
    let shifted = eta.shifted(fs, &xi.to_map1()?)?;
    check_lift_conditions(fs, delta, &shifted, samples)?
        .require(Error::ConsistencyMismatch)?;
    let dhat = build_lift(fs, delta, &shifted, samples)?;
    Ok((dhat, xi))
}

// ---------------------------------------------------------------------------
// Gauge derivations and central 1-cocycles
// ---------------------------------------------------------------------------

/// Build the gauge derivation of a crossed homomorphism
/// `ξ : G → Z(R)` (`ξ(gh) = ξ(g) + β_g(ξ(h))`): the graded derivation
/// acting on degree `g` by left multiplication with `ξ(g)` and vanishing
/// on the principal component. Centrality is checked against `samples`;
/// the crossed-homomorphism law on every composable pair.
pub fn gauge_from_crossed_hom<R: Ring>(
    fs: &FactorSystem<R>,
    xi: &BTreeMap<i64, R::Elem>,
    samples: &[R::Elem],
) -> Result<GradedDerivation<R>> {
    let recon = ReconstructedRing::new(fs.clone(), samples)?;
    let beta = BetaAction::new(&recon)?;
    let base = recon.base();
    let e = fs.group.identity();
    if let Some(v) = xi.get(&e) {
        if !base.is_zero(v) {
            return Err(Error::NotCrossedHom(format!(
                "ξ(e) = {} ≠ 0",
                base.display(v)
            )));
        }
    }
    for (g, v) in xi {
        if !fs.group.contains(*g) {
            return Err(Error::BadInput(format!(
                "ξ given at degree {g}, which is outside the group model"
            )));
        }
        beta.check_central(v, samples)?;
    }
    let value = |g: i64| -> R::Elem { xi.get(&g).cloned().unwrap_or_else(|| base.zero()) };
    for (g, h) in fs.group.closed_pairs() {
        let gh = fs.group.mul(g, h)?;
        let lhs = value(gh);
        let rhs = base.add(&value(g), &beta.apply(g, &value(h))?);
        if lhs != rhs {
            return Err(Error::NotCrossedHom(format!(
                "ξ({gh}) = {} but ξ({g}) + β_{g}(ξ({h})) = {}",
                base.display(&lhs),
                base.display(&rhs)
            )));
        }
    }
    let eta = EtaFamily::from_scalars(fs, xi)?;
    build_lift(fs, &Derivation::zero(&fs.ring), &eta, samples)
}

/// Read the crossed homomorphism off a gauge derivation: verifies the
/// derivation vanishes on the principal component (on `1`, the ring
/// generators and the samples), extracts `ξ(g) = β_g(ŷ_gᵗ · δ̂(x̂_g))`
/// from the canonical frames, and verifies `δ̂(s) = ξ(g)·s` on every
/// frame entry, centrality against the samples, and the
/// crossed-homomorphism law.
pub fn crossed_hom_from_gauge<R: Ring>(
    dhat: &GradedDerivation<R>,
    samples: &[R::Elem],
) -> Result<BTreeMap<i64, R::Elem>> {
    crossed_hom_from_operator(dhat.recon(), samples, |a| dhat.apply(a))
}

/// Central form of any gauge-type operator on the reconstructed ring: the
/// operator must kill the principal component and act on each homogeneous
/// component by left multiplication by a central element; the extracted
/// values must satisfy the crossed-homomorphism law.
pub fn crossed_hom_from_operator<R, F>(
    recon: &ReconstructedRing<R>,
    samples: &[R::Elem],
    op: F,
) -> Result<BTreeMap<i64, R::Elem>>
where
    R: Ring,
    F: Fn(&ReconElem<R>) -> Result<ReconElem<R>>,
{
    let base = recon.base();
    let fs = recon.factor_system();
    let beta = BetaAction::new(recon)?;

    let mut rs: Vec<R::Elem> = vec![base.one()];
    rs.extend(samples.iter().cloned());
    for r in &rs {
        let image = op(&recon.embed(r))?;
        if !recon.is_zero(&image) {
            return Err(Error::NotGauge(format!(
                "image of ι({}) is {} ≠ 0 on the principal component",
                base.display(r),
                recon.display(&image)
            )));
        }
    }

    let mut xi = BTreeMap::new();
    for g in fs.group.elements() {
        let frame = recon.degree_frame(g)?;
        let mut acc = ReconElem::zero();
        for i in 0..frame.size() {
            let term = recon.mul(frame.y.at(i, 0), &op(frame.x.at(i, 0))?)?;
            acc = recon.add(&acc, &term);
        }
        let z = beta.apply(g, &recon.unembed(&acc)?)?;
        beta.check_central(&z, samples)?;
        let ez = recon.embed(&z);
        for i in 0..frame.size() {
            let lhs = op(frame.x.at(i, 0))?;
            let rhs = recon.mul(&ez, frame.x.at(i, 0))?;
            if lhs != rhs {
                return Err(Error::NotGauge(format!(
                    "the operator on degree {g} is not left multiplication by {}",
                    base.display(&z)
                )));
            }
        }
        if !base.is_zero(&z) {
            xi.insert(g, z);
        }
    }

    let value = |g: i64| -> R::Elem { xi.get(&g).cloned().unwrap_or_else(|| base.zero()) };
    for (g, h) in fs.group.closed_pairs() {
        let gh = fs.group.mul(g, h)?;
        let lhs = value(gh);
        let rhs = base.add(&value(g), &beta.apply(g, &value(h))?);
        if lhs != rhs {
            return Err(Error::NotCrossedHom(format!(
                "extracted ξ fails ξ({gh}) = ξ({g}) + β_{g}(ξ({h}))"
            )));
        }
    }
    Ok(xi)
}

/// Gauge derivations commute: check `[δ̂₁, δ̂₂] = 0` on the supplied
/// elements.
pub fn gauge_commute_report<R: Ring>(
    d1: &GradedDerivation<R>,
    d2: &GradedDerivation<R>,
    elems: &[ReconElem<R>],
) -> Result<Report> {
    let recon = d1.recon();
    let mut rep = Report::new();
    let mut bad = None;
    for a in elems {
        let lhs = d1.apply(&d2.apply(a)?)?;
        let rhs = d2.apply(&d1.apply(a)?)?;
        if lhs != rhs {
            bad = Some(format!(
                "[δ̂₁, δ̂₂]({}) ≠ 0",
                recon.display(a)
            ));
            break;
        }
    }
    rep.record("gauge_commute", bad.map_or(Ok(()), Err));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::edge_count_difference;
    use crate::facsys::{extract_factor_system, AlphaMap, FrameSystem};
    use crate::laurent::{LaurentElem, LaurentRing};
    use crate::lpa::LpaRing;
    use crate::reconstruct::crossed_product_system;
    use crate::scalar::{Rat, Scalar};

    type QLau = LaurentRing<Rat>;

    fn rat(n: i64) -> Rat {
        <Rat as Scalar>::from_i64(n)
    }

    fn frac(n: i64, d: i64) -> Rat {
        <Rat as Scalar>::from_i64(n)
            .mul(&<Rat as Scalar>::from_i64(d).inv().unwrap())
    }

    struct XorShift(u64);
    impl XorShift {
        fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }
        fn small(&mut self) -> i64 {
            (self.next() % 11) as i64 - 5
        }
    }

    /// ℚ[u±] crossed by ℤ/2 with trivial action and ω(1,1) = u.
    fn z2_twisted() -> (QLau, FactorSystem<QLau>, Vec<LaurentElem<Rat>>) {
        let base = QLau::single("u");
        let u = base.var(0);
        let ui = base.var_inv(0);
        let group = GroupModel::cyclic(2).unwrap();
        let one = Mat::scalar(&base, base.one());
        let mut omega = BTreeMap::new();
        let mut omega_tilde = BTreeMap::new();
        for (g, h) in group.closed_pairs() {
            omega.insert((g, h), one.clone());
            omega_tilde.insert((g, h), one.clone());
        }
        omega.insert((1, 1), Mat::scalar(&base, u.clone()));
        omega_tilde.insert((1, 1), Mat::scalar(&base, ui.clone()));
        let fs = FactorSystem {
            group,
            ring: base.clone(),
            sizes: [(0, 1), (1, 1)].into_iter().collect(),
            alpha: [(0, AlphaMap::Identity), (1, AlphaMap::Identity)]
                .into_iter()
                .collect(),
            omega,
            omega_tilde,
        };
        let samples = vec![u, ui];
        (base, fs, samples)
    }

    fn euler(base: &QLau) -> Derivation<QLau> {
        let mut images = BTreeMap::new();
        images.insert("u".to_string(), base.var(0));
        images.insert("u^-1".to_string(), base.neg(&base.var_inv(0)));
        Derivation::generator_images(base, images).unwrap()
    }

    /// Quantum torus at q = 2 over a ℤ-window.
    fn qtorus(bound: i64) -> (QLau, FactorSystem<QLau>, Vec<LaurentElem<Rat>>) {
        let base = QLau::single("u");
        let group = GroupModel::integers(bound).unwrap();
        let pow = |n: i64| -> Rat {
            let step = if n >= 0 { rat(2) } else { frac(1, 2) };
            let mut acc = rat(1);
            for _ in 0..n.unsigned_abs() {
                acc = Scalar::mul(&acc, &step);
            }
            acc
        };
        let fs = crossed_product_system(&base, group, |n| {
            let mut images = BTreeMap::new();
            images.insert(
                "u".to_string(),
                Mat::scalar(&base, base.scale(&pow(n), &base.var(0))),
            );
            images.insert(
                "u^-1".to_string(),
                Mat::scalar(&base, base.scale(&pow(-n), &base.var_inv(0))),
            );
            Ok(AlphaMap::Images {
                size: 1,
                one: Mat::scalar(&base, base.one()),
                images,
            })
        })
        .unwrap();
        let samples = vec![base.var(0), base.var_inv(0)];
        (base, fs, samples)
    }

    #[test]
    fn beta_is_the_degree_action() {
        let (base, fs, samples) = qtorus(2);
        let recon = ReconstructedRing::new(fs, &samples).unwrap();
        let beta = BetaAction::new(&recon).unwrap();
        let u = base.var(0);
        // s·u = 2u·s for s of degree 1, so β₁(u) = 2u
        assert_eq!(beta.apply(1, &u).unwrap(), base.scale(&rat(2), &u));
        assert_eq!(beta.apply(-1, &u).unwrap(), base.scale(&frac(1, 2), &u));
        let central = vec![u.clone(), base.var_inv(0), base.add(&base.one(), &u)];
        let rep = beta.report(&central, &samples).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.first_failure());
    }

    #[test]
    fn differential_squares_to_zero() {
        let (base, fs, samples) = qtorus(2);
        let recon = ReconstructedRing::new(fs, &samples).unwrap();
        let beta = BetaAction::new(&recon).unwrap();

        let c0 = Cochain::new(0, [(vec![], base.var(0))].into_iter().collect()).unwrap();
        let d0 = cochain_differential(&beta, &c0).unwrap();
        let dd0 = cochain_differential(&beta, &d0).unwrap();
        assert!(dd0.is_zero(), "d²(0-cochain) ≠ 0");

        let mut vals = BTreeMap::new();
        vals.insert(vec![1], base.var(0));
        vals.insert(vec![-1], base.add(&base.one(), &base.var_inv(0)));
        vals.insert(vec![2], base.scale(&frac(3, 2), &base.var(0)));
        let c1 = Cochain::new(1, vals).unwrap();
        let d1 = cochain_differential(&beta, &c1).unwrap();
        let dd1 = cochain_differential(&beta, &d1).unwrap();
        assert!(dd1.is_zero(), "d²(1-cochain) ≠ 0");

        // degree bookkeeping
        assert!(Cochain::<QLau>::new(1, [(vec![1, 2], base.one())].into_iter().collect()).is_err());
        assert!(matches!(
            cochain_differential(&beta, &d1).map(|c| c.degree()),
            Ok(3)
        ) == false || d1.degree() == 2);
    }

    #[test]
    fn z2_twisted_defect_solve_and_lift() {
        let (base, fs, samples) = z2_twisted();
        let delta = euler(&base);
        let eta = EtaFamily::zero(&fs).unwrap();

        // the only failing condition is (L2)
        let rep = crate::lift::check_lift_conditions(&fs, &delta, &eta, &samples).unwrap();
        assert!(!rep.all_pass());
        assert!(rep.checks.iter().all(|c| c.pass || c.tag == "cond2"));

        let recon = ReconstructedRing::new(fs.clone(), &samples).unwrap();
        let beta = BetaAction::new(&recon).unwrap();
        let dd = defect_cochain(&recon, &beta, &delta, &eta).unwrap();
        // Δ(1,1) = ω̃(1,1)·(−δ(ω)(1,1)) = u⁻¹·(−u) = −1
        assert_eq!(dd.value(&base, &[1, 1]).unwrap(), base.neg(&base.one()));
        assert!(cocycle_report(&beta, &dd).unwrap().all_pass());
        let rep = defect_report(&recon, &beta, &delta, &eta, &[], &samples).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.first_failure());

        // dξ(1,1) = 2ξ(1), so ξ(1) = −1/2
        let xi = coboundary_solve(&beta, &dd, &[base.one()]).unwrap();
        assert_eq!(
            xi.value(&base, &[1]).unwrap(),
            base.scale(&frac(-1, 2), &base.one())
        );

        // the full pipeline: shift, recheck, build
        let (dhat, xi2) = lift_via_cohomology(&fs, &delta, &eta, &samples, &[base.one()]).unwrap();
        assert!(xi.same_as(&base, &xi2));
        let drecon = dhat.recon();
        let s1 = drecon.view(1, vec![base.one()]).unwrap();
        let ds1 = dhat.apply(&s1).unwrap();
        assert_eq!(ds1, drecon.scale(&frac(1, 2), &s1));
        // Leibniz across the twisted square s₁² = u
        let lhs = dhat.apply(&drecon.mul(&s1, &s1).unwrap()).unwrap();
        let rhs = drecon.add(
            &drecon.mul(&ds1, &s1).unwrap(),
            &drecon.mul(&s1, &ds1).unwrap(),
        );
        assert_eq!(lhs, rhs);

        // a lift with a nonzero base derivation is not a gauge derivation
        assert!(matches!(
            crossed_hom_from_gauge(&dhat, &samples),
            Err(Error::NotGauge(_))
        ));

        // with the correction basis withheld, the class is an obstruction
        assert!(matches!(
            coboundary_solve(&beta, &dd, &[]),
            Err(Error::NoSolution(_))
        ));

        // reversed sign: δ = −Euler gives Δ(1,1) = 1 and ξ(1) = 1/2
        let neg = {
            let mut images = BTreeMap::new();
            images.insert("u".to_string(), base.neg(&base.var(0)));
            images.insert("u^-1".to_string(), base.var_inv(0));
            Derivation::generator_images(&base, images).unwrap()
        };
        let dd_neg = defect_cochain(&recon, &beta, &neg, &eta).unwrap();
        assert_eq!(dd_neg.value(&base, &[1, 1]).unwrap(), base.one());
        let xi_neg = coboundary_solve(&beta, &dd_neg, &[base.one()]).unwrap();
        assert_eq!(
            xi_neg.value(&base, &[1]).unwrap(),
            base.scale(&frac(1, 2), &base.one())
        );
    }

    #[test]
    fn shift_law_moves_defect_by_coboundary() {
        let (base, fs, samples) = z2_twisted();
        let delta = euler(&base);
        let eta = EtaFamily::zero(&fs).unwrap();
        let recon = ReconstructedRing::new(fs.clone(), &samples).unwrap();
        let beta = BetaAction::new(&recon).unwrap();
        let dd = defect_cochain(&recon, &beta, &delta, &eta).unwrap();

        let mut rng = XorShift(0x9e3779b97f4a7c15);
        for _ in 0..4 {
            let c = frac(rng.small(), 3);
            let ximap: BTreeMap<i64, LaurentElem<Rat>> =
                [(1, base.scale(&c, &base.one()))].into_iter().collect();
            let shifted = eta.shifted(&fs, &ximap).unwrap();
            let dd_shift = defect_cochain(&recon, &beta, &delta, &shifted).unwrap();
            let dxi = cochain_differential(&beta, &Cochain::from_map1(&ximap)).unwrap();
            let want = dd.sub(&base, &dxi).unwrap();
            assert!(
                dd_shift.same_as(&base, &want),
                "Δ' ≠ Δ − dξ for ξ(1) = {}",
                base.display(&ximap[&1])
            );
        }
    }

    #[test]
    fn integer_window_correction_path() {
        let ring = LpaRing::<Rat>::leavitt(2).unwrap();
        let fr = FrameSystem::build(&ring, GroupModel::integers(2).unwrap()).unwrap();
        let fs = extract_factor_system(&fr).unwrap();
        let n1 = edge_count_difference(&ring, "e1").unwrap();
        let e1 = ring.edge("e1").unwrap();
        let e2 = ring.edge("e2").unwrap();
        let g1 = ring.ghost("e1").unwrap();
        let g2 = ring.ghost("e2").unwrap();
        let samples = vec![
            ring.mul(&e1, &g1).unwrap(),
            ring.mul(&e1, &g2).unwrap(),
            ring.mul(&e2, &g1).unwrap(),
        ];

        // a valid connection family for N₁: η(g) = δ̂(x_g)y_gᵗ
        let mut mats = BTreeMap::new();
        for g in fs.group.elements() {
            if g != 0 {
                let f = fr.frame(g).unwrap();
                mats.insert(
                    g,
                    n1.apply_mat(&f.x).unwrap().mul(&f.y.transpose()).unwrap(),
                );
            }
        }
        let eta = EtaFamily::new(&fs, mats).unwrap();

        // perturb by a non-cocycle central 1-cochain: only (L2) breaks
        let mut rng = XorShift(0x2545f4914f6cdd1d);
        for _ in 0..3 {
            let mut ximap = BTreeMap::new();
            for g in fs.group.elements() {
                if g != 0 {
                    ximap.insert(g, ring.scale(&frac(rng.small(), 2), &ring.one()));
                }
            }
            let perturbed = eta.shifted(&fs, &ximap).unwrap();
            let rep =
                crate::lift::check_lift_conditions(&fs, &n1, &perturbed, &samples).unwrap();
            if rep.all_pass() {
                continue; // the random ξ was itself a crossed homomorphism
            }
            assert!(rep.checks.iter().all(|c| c.pass || c.tag == "cond2"));
            let (dhat, xi) =
                lift_via_cohomology(&fs, &n1, &perturbed, &samples, &[]).unwrap();
            assert!(!xi.is_zero());
            // the repaired lift still restricts to N₁
            let rep = dhat.restriction_report(&samples).unwrap();
            assert!(rep.all_pass());
        }
    }

    #[test]
    fn gauge_round_trip_on_integer_window() {
        let ring = LpaRing::<Rat>::leavitt(2).unwrap();
        let fr = FrameSystem::build(&ring, GroupModel::integers(2).unwrap()).unwrap();
        let fs = extract_factor_system(&fr).unwrap();
        let e1 = ring.edge("e1").unwrap();
        let g2 = ring.ghost("e2").unwrap();
        let samples = vec![
            ring.mul(&e1, &ring.ghost("e1").unwrap()).unwrap(),
            ring.mul(&e1, &g2).unwrap(),
        ];

        // additive character ξ(n) = n·c is a crossed homomorphism
        let c = frac(3, 2);
        let mut ximap = BTreeMap::new();
        for g in fs.group.elements() {
            if g != 0 {
                ximap.insert(g, ring.scale(&Scalar::mul(&c, &rat(g)), &ring.one()));
            }
        }
        let dhat = gauge_from_crossed_hom(&fs, &ximap, &samples).unwrap();
        let back = crossed_hom_from_gauge(&dhat, &samples).unwrap();
        assert_eq!(back.len(), ximap.len());
        for (g, v) in &ximap {
            assert_eq!(back.get(g), Some(v), "ξ({g}) changed under the round trip");
        }

        // the gauge derivation scales degree g by ξ(g)
        let recon = dhat.recon();
        let f = recon.degree_frame(2).unwrap();
        let s = f.x.at(0, 0);
        assert_eq!(
            dhat.apply(s).unwrap(),
            recon.scale(&Scalar::mul(&c, &rat(2)), s)
        );

        // gauge derivations commute
        let mut ximap2 = BTreeMap::new();
        for g in fs.group.elements() {
            if g != 0 {
                ximap2.insert(g, ring.scale(&Scalar::mul(&frac(-1, 4), &rat(g)), &ring.one()));
            }
        }
        let dhat2 = gauge_from_crossed_hom(&fs, &ximap2, &samples).unwrap();
        let mut elems = Vec::new();
        for g in fs.group.elements() {
            let f = recon.degree_frame(g).unwrap();
            for i in 0..f.size() {
                elems.push(f.x.at(i, 0).clone());
            }
        }
        let rep = gauge_commute_report(&dhat, &dhat2, &elems).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.first_failure());

        // a non-homomorphism is rejected
        let mut badmap = ximap.clone();
        badmap.insert(2, ring.one());
        assert!(matches!(
            gauge_from_crossed_hom(&fs, &badmap, &samples),
            Err(Error::NotCrossedHom(_))
        ));
    }

    #[test]
    fn center_of_matrix_window_is_scalar() {
        let ring = LpaRing::<Rat>::leavitt(2).unwrap();
        let e1 = ring.edge("e1").unwrap();
        let e2 = ring.edge("e2").unwrap();
        let g1 = ring.ghost("e1").unwrap();
        let g2 = ring.ghost("e2").unwrap();
        use crate::lpa::LpaElem;
        let m = |a: &LpaElem<Rat>, b: &LpaElem<Rat>| ring.mul(a, b).unwrap();
        let window = vec![
            ring.one(),
            m(&e1, &g1),
            m(&e1, &g2),
            m(&e2, &g1),
        ];
        let tests = vec![m(&e1, &g1), m(&e1, &g2), m(&e2, &g1), m(&e2, &g2)];
        let basis = center_basis(&ring, &window, &tests).unwrap();
        assert_eq!(basis.len(), 1);
        for t in &tests {
            assert_eq!(ring.mul(&basis[0], t).unwrap(), ring.mul(t, &basis[0]).unwrap());
        }

        // a commutative base: everything is central
        let lau = QLau::single("u");
        let window = vec![lau.one(), lau.var(0), lau.var_inv(0)];
        let tests = vec![lau.var(0)];
        let basis = center_basis(&lau, &window, &tests).unwrap();
        assert_eq!(basis.len(), 3);
    }
}
