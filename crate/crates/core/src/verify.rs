//! Executable theorem suites over enumerated solution sets.
//!
//! Each suite compares two or three independently enumerated point sets, or
//! checks an identity on random samples, and produces a [`SuiteReport`]. A
//! failing report carries a counterexample that [`replay`] re-checks from the
//! serialized record alone.
//!
//! Statements about schemes are checked through their point-level shadows:
//! bijections of finite solution sets and point-count growth.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{colength, contains, intersect, random_window_lattice, Lattice};
use crate::moduli::{self, HeartLattice, Kind, Model, ModelParams, TriplePoint};

/// Deliberate defects used to check that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutant {
    /// The dual is returned with the sign of its shift flipped.
    SignBug,
    /// `β` is the reduction of `b` instead of `p·b`.
    UnscaledBeta,
    /// Pruned counts are reported one too high.
    CountOffByOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: Value,
    pub scope: String,
    pub status: Status,
    pub counts: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub seconds: Option<f64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Drops the wall time so that reports compare byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.seconds = None;
        self
    }
}

/// Inputs shared by all suites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    pub k: Option<usize>,
    pub j_range: Vec<usize>,
    pub mutant: Option<Mutant>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { samples: 200, seed: 0, k: None, j_range: vec![1, 2], mutant: None }
    }
}

pub const SUITES: [&str; 7] = ["duality", "pairing", "stratification", "theorem-A", "theorem-B", "beta", "counts"];

/// One census line: pruned and reference counts of `DL_Λ^k` over `F_{p^{m·j}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub count: u64,
    pub oracle_count: Option<u64>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

/// A model plus lazily shared enumerations.
pub struct Session {
    model: Model,
    opts: SuiteOptions,
    rz: OnceLock<Result<Vec<Lattice>>>,
    hearts: OnceLock<Result<Vec<HeartLattice>>>,
}

impl Session {
    pub fn new(model: Model, opts: SuiteOptions) -> Self {
        Session { model, opts, rz: OnceLock::new(), hearts: OnceLock::new() }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    fn rz(&self) -> Result<&Vec<Lattice>> {
        self.rz.get_or_init(|| moduli::enumerate_rz(&self.model)).as_ref().map_err(Clone::clone)
    }

    fn hearts(&self) -> Result<&Vec<HeartLattice>> {
        self.hearts.get_or_init(|| moduli::hearts(&self.model)).as_ref().map_err(Clone::clone)
    }

    fn levels(&self) -> Vec<usize> {
        match self.opts.k {
            Some(k) => vec![k],
            None => (1..=self.model.n() / 2).collect(),
        }
    }

    /// Runs a suite by name. `theorem-A` and `beta` run once per level.
    pub fn run(&self, name: &str) -> Result<Vec<SuiteReport>> {
        match name {
            "duality" => Ok(vec![self.timed("duality", |s| s.duality())?]),
            "pairing" => Ok(vec![self.timed("pairing", |s| s.pairing())?]),
            "stratification" => Ok(vec![self.timed("stratification", |s| s.stratification())?]),
            "theorem-A" => self.levels().into_iter().map(|k| self.timed("theorem-A", |s| s.theorem_a(k))).collect(),
            "theorem-B" => Ok(vec![self.timed("theorem-B", |s| s.theorem_b())?]),
            "beta" => self.levels().into_iter().map(|k| self.timed("beta", |s| s.beta(k))).collect(),
            "counts" => Ok(vec![self.timed("counts", |s| s.counts().map(|(r, _)| r))?]),
            "all" => {
                let mut out = Vec::new();
                for s in SUITES {
                    if s == "theorem-B" && self.model.n() % 2 != 0 {
                        continue;
                    }
                    out.extend(self.run(s)?);
                }
                Ok(out)
            }
            other => Err(Error::InvalidParams(format!("unknown suite {other:?}"))),
        }
    }

    fn timed(&self, name: &str, f: impl FnOnce(&Self) -> Result<Partial>) -> Result<SuiteReport> {
        let start = Instant::now();
        let part = f(self)?;
        let mut params = serde_json::to_value(self.model.params()).expect("params serialize");
        if let Some(obj) = params.as_object_mut() {
            obj.extend(part.extra_params);
            obj.insert("F".into(), json!(self.model.ring().f_coeffs()));
            if let Some(mt) = self.opts.mutant {
                obj.insert("mutant".into(), json!(mt));
            }
        }
        let status = if part.counterexample.is_none() { Status::Pass } else { Status::Fail };
        Ok(SuiteReport {
            suite: name.to_string(),
            params,
            scope: part.scope.to_string(),
            status,
            counts: part.counts,
            counterexample: part.counterexample,
            seconds: Some(start.elapsed().as_secs_f64()),
        })
    }

    fn dual(&self, l: &Lattice) -> Result<Lattice> {
        let d = self.model.dual(l)?;
        Ok(if self.opts.mutant == Some(Mutant::SignBug) { d.scale(2 * d.shift()) } else { d })
    }

    fn duality(&self) -> Result<Partial> {
        let mut part = Partial::new("identities on random window lattices");
        let m = &self.model;
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let l0 = m.lambda0();
        if self.dual(l0)? != *l0 {
            part.fail(json!({ "check": "self-dual-standard", "L": m.lattice_json(l0) }));
        }
        let mut checked = 0u64;
        for _ in 0..self.opts.samples {
            if part.counterexample.is_some() {
                break;
            }
            let l = random_window_lattice(m.ring(), m.n(), &mut rng)?;
            let other = random_window_lattice(m.ring(), m.n(), &mut rng)?;
            if let Some(check) = self.duality_failure(&l, &other)? {
                part.fail(json!({ "check": check, "L": m.lattice_json(&l), "M": m.lattice_json(&other) }));
            }
            checked += 1;
        }
        part.count("samples", checked);
        Ok(part)
    }

    fn duality_failure(&self, l: &Lattice, other: &Lattice) -> Result<Option<&'static str>> {
        let m = &self.model;
        let r = m.ring();
        let sp = m.space();
        let d = self.dual(l)?;
        if self.dual(&d)? != sp.phi2(l, -1)? {
            return Ok(Some("double-dual"));
        }
        if sp.phi2(&d, 1)? != self.dual(&sp.phi2(l, 1)?)? {
            return Ok(Some("phi2-commutes"));
        }
        let meet = intersect(r, l, other)?;
        let dmeet = self.dual(&meet)?;
        if !contains(r, &dmeet, &d)? {
            return Ok(Some("inclusion-reversal"));
        }
        if colength(r, &d, &dmeet)? != colength(r, &meet, l)? {
            return Ok(Some("colength-duality"));
        }
        Ok(None)
    }

    fn pairing(&self) -> Result<Partial> {
        let mut part = Partial::new("pairing axioms on random vectors");
        let m = &self.model;
        let r = m.ring();
        let sp = m.space();
        let n = m.n();
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        for i in 0..n {
            for c in 0..n {
                let (x, y) = (unit(m, i), unit(m, c));
                let want = if i + c == n - 1 { r.one() } else { r.zero() };
                if sp.pair_b(&x, &y) != want {
                    part.fail(json!({ "check": "gram", "i": i, "j": c }));
                }
            }
        }
        let pairs = 5 * self.opts.samples;
        for _ in 0..pairs {
            let x: Vec<_> = (0..n).map(|_| r.random(&mut rng)).collect();
            let y: Vec<_> = (0..n).map(|_| r.random(&mut rng)).collect();
            let a = r.random(&mut rng);
            let ax: Vec<_> = x.iter().map(|&e| r.mul(a, e)).collect();
            let ay: Vec<_> = y.iter().map(|&e| r.mul(a, e)).collect();
            let bxy = sp.pair_b(&x, &y);
            let ok = sp.pair_b(&ax, &y) == r.mul(a, bxy)
                && sp.pair_b(&x, &ay) == r.mul(r.frobenius(a, 1), bxy)
                && sp.pair_b(&sp.phi2_vec(&x, 1), &y) == r.frobenius(sp.pair_b(&y, &x), 1);
            if !ok && part.counterexample.is_none() {
                let js = |v: &[crate::coeff::RingElem]| v.iter().map(|&e| r.elem_json(e)).collect::<Vec<_>>();
                part.fail(json!({ "check": "semilinearity", "x": js(&x), "y": js(&y), "a": r.elem_json(a) }));
            }
        }
        part.count("pairs", pairs as u64);
        Ok(part)
    }

    fn stratification(&self) -> Result<Partial> {
        let mut part = Partial::new("point-level: unique stratum per solution, heart cover of the middle stratum");
        let m = &self.model;
        let n = m.n();
        let pts = self.rz()?;
        let mut per = BTreeMap::new();
        let mut covered = 0u64;
        let heart_set: BTreeSet<&Lattice> = if n % 2 == 0 {
            self.hearts()?.iter().map(|h| &h.lattice).collect()
        } else {
            BTreeSet::new()
        };
        for l in pts {
            let k = match moduli::stratum_of(m, l) {
                Ok(k) => k,
                Err(Error::Consistency { .. }) => {
                    part.fail_once(json!({ "check": "stratum", "L0": m.lattice_json(l) }));
                    continue;
                }
                Err(e) => return Err(e),
            };
            *per.entry(format!("stratum_{k}")).or_insert(0u64) += 1;
            if 2 * k == n {
                match moduli::heart_of(m, l) {
                    Ok(h) if heart_set.contains(&h.lattice) => covered += 1,
                    Ok(_) | Err(Error::Consistency { .. }) => {
                        part.fail_once(json!({ "check": "heart-cover", "L0": m.lattice_json(l) }))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        part.count("rz", pts.len() as u64);
        for (key, v) in per {
            part.count(&key, v);
        }
        if n % 2 == 0 {
            part.count("hearts", heart_set.len() as u64);
            part.count("covered", covered);
        }
        Ok(part)
    }

    fn theorem_a(&self, k: usize) -> Result<Partial> {
        let mut part = Partial::new("point-level: bijections RZ^k <-> (Y, complement) and Y <-> DL");
        part.param("k", json!(k));
        let m = &self.model;
        let pts: Vec<&Lattice> = {
            let mut v = Vec::new();
            for l in self.rz()? {
                if moduli::stratum_of(m, l)? == k {
                    v.push(l);
                }
            }
            v
        };
        let ys = moduli::enumerate_y(m, k)?;
        let mut fibers = HashMap::new();
        let mut pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for y in &ys {
            let f = moduli::fiber_data(m, y)?;
            for c in moduli::isotropic_complements(m, &f)? {
                pairs.insert((y.to_json(m).to_string(), m.subspace_json(&c).to_string()));
            }
            fibers.insert(y.to_json(m).to_string(), f);
        }
        let mut hit: BTreeSet<(String, String)> = BTreeSet::new();
        for l in &pts {
            let res = (|| -> Result<(String, String)> {
                let t = TriplePoint::from_rz(m, l)?;
                let key = t.y.to_json(m).to_string();
                let f = fibers.get(&key).ok_or_else(|| {
                    Error::consistency("Y point of a solution was not enumerated", t.y.to_json(m))
                })?;
                let c = moduli::complement_from_triple(m, &t, f)?;
                if moduli::lattice_from_complement(m, &t.y, f, &c)? != **l {
                    return Err(Error::consistency("reconstruction differs", json!(null)));
                }
                Ok((key, m.subspace_json(&c).to_string()))
            })();
            match res {
                Ok(pair) => {
                    if !pairs.contains(&pair) || !hit.insert(pair) {
                        part.fail_once(json!({ "check": "triple-map", "L0": m.lattice_json(l) }));
                    }
                }
                Err(Error::Consistency { message, .. }) => {
                    part.fail_once(json!({ "check": "triple-map", "reason": message, "L0": m.lattice_json(l) }))
                }
                Err(e) => return Err(e),
            }
        }
        if hit.len() != pairs.len() && part.counterexample.is_none() {
            if let Some((y, c)) = pairs.difference(&hit).next() {
                part.fail(json!({ "check": "unhit-pair", "y": parse(y), "F": parse(c) }));
            }
        }
        let mut dl = moduli::enumerate_dl(m, k)?;
        if self.opts.mutant == Some(Mutant::CountOffByOne) {
            dl.pop();
        }
        let dl_keys: BTreeSet<String> = dl.iter().map(|f| f.to_json(m).to_string()).collect();
        let mut flag_keys = BTreeSet::new();
        for y in &ys {
            let fk = moduli::dl_flag_from_y(m, y)?.to_json(m).to_string();
            if !dl_keys.contains(&fk) || !flag_keys.insert(fk) {
                part.fail_once(json!({ "check": "flag-map", "y": y.to_json(m) }));
            }
        }
        if flag_keys.len() != dl_keys.len() && part.counterexample.is_none() {
            let missing = dl_keys.difference(&flag_keys).next().map(|s| parse(s));
            part.fail(json!({ "check": "unhit-flag", "flag": missing }));
        }
        part.count("rz", pts.len() as u64);
        part.count("y", ys.len() as u64);
        part.count("y_complement_pairs", pairs.len() as u64);
        part.count("dl", dl.len() as u64);
        Ok(part)
    }

    fn theorem_b(&self) -> Result<Partial> {
        let mut part = Partial::new("point-level: per-heart bijection with DL-heart flags, cover of the middle stratum");
        let m = &self.model;
        let n = m.n();
        if n % 2 != 0 {
            return Err(Error::InvalidParams("theorem-B needs even n".into()));
        }
        let hs = self.hearts()?;
        let pts = self.rz()?;
        let duals: Vec<Lattice> = pts.iter().map(|l| m.dual(l)).collect::<Result<_>>()?;
        let mut per_heart = BTreeSet::new();
        let mut covered = BTreeSet::new();
        let mut total = 0u64;
        for h in hs {
            let flags = moduli::enumerate_dl_heart(m, h)?;
            let flag_keys: BTreeSet<String> = flags.iter().map(|f| f.to_json(m).to_string()).collect();
            let mut hit = BTreeSet::new();
            for (i, l) in pts.iter().enumerate() {
                if !heart_chain(m, l, &duals[i], h)? {
                    continue;
                }
                total += 1;
                covered.insert(i);
                let key = moduli::dl_heart_flag(m, l, h)?.to_json(m).to_string();
                if !flag_keys.contains(&key) || !hit.insert(key) {
                    part.fail_once(json!({ "check": "heart-flag-map", "L0": m.lattice_json(l), "heart": h.to_json(m) }));
                }
            }
            if hit.len() != flag_keys.len() {
                part.fail_once(json!({ "check": "unhit-heart-flag", "heart": h.to_json(m) }));
            }
            per_heart.insert(flags.len() as u64);
        }
        for (i, l) in pts.iter().enumerate() {
            if moduli::stratum_of(m, l)? * 2 == n && !covered.contains(&i) {
                part.fail_once(json!({ "check": "uncovered", "L0": m.lattice_json(l) }));
            }
        }
        if per_heart.len() > 1 {
            part.fail_once(json!({ "check": "unequal-heart-counts", "counts": per_heart }));
        }
        part.count("hearts", hs.len() as u64);
        part.count("heart_points", total);
        part.count("dl_heart_per_heart", per_heart.iter().next().copied().unwrap_or(0));
        Ok(part)
    }

    fn beta(&self, k: usize) -> Result<Partial> {
        let mut part = Partial::new("beta: isotropy of V^(k), radical V^(1), nondegenerate induced pairing");
        part.param("k", json!(k));
        let m = &self.model;
        let scale = if self.opts.mutant == Some(Mutant::UnscaledBeta) { 0 } else { 1 };
        let ys = moduli::enumerate_y(m, k)?;
        let mut good = 0u64;
        for y in &ys {
            let ok = match moduli::fiber_data_scaled(m, y, scale) {
                Ok(f) => moduli::beta_properties(m, &f).all(),
                Err(Error::Consistency { .. }) => false,
                Err(e) => return Err(e),
            };
            if ok {
                good += 1;
            } else {
                part.fail_once(json!({ "check": "beta", "scale": scale, "y": y.to_json(m) }));
            }
        }
        part.count("y", ys.len() as u64);
        part.count("passing", good);
        Ok(part)
    }

    /// Rows of the point-count census.
    pub fn census(&self) -> Result<Vec<CensusRow>> {
        Ok(self.counts()?.1)
    }

    /// Oracle agreement and monotonicity are hard checks. The growth band is
    /// soft: outliers are listed in the report without failing it.
    fn counts(&self) -> Result<(Partial, Vec<CensusRow>)> {
        let mut part = Partial::new("point counts of DL^k against a naive scan; growth band in j");
        let base = self.model.params();
        let mut rows = Vec::new();
        let mut table = Vec::new();
        let mut soft = Vec::new();
        for &k in &self.levels() {
            let mut prev: Option<(u64, f64)> = None;
            for &j in &self.opts.j_range {
                let mj = Model::new(ModelParams { j, ..base })?.with_ceiling(self.model.ceiling());
                let mut count = moduli::enumerate_dl(&mj, k)?.len() as u64;
                if self.opts.mutant == Some(Mutant::CountOffByOne) {
                    count += 1;
                }
                let naive_fits = mj.estimate(Kind::Dl, k, true) <= mj.ceiling() as f64;
                let oracle = if naive_fits { Some(moduli::enumerate_dl_naive(&mj, k)?.len() as u64) } else { None };
                let matches = oracle.map(|o| o == count);
                if matches == Some(false) {
                    part.fail_once(json!({ "check": "oracle", "k": k, "j": j, "count": count, "oracle": oracle }));
                }
                let rz_fits = mj.estimate(Kind::Rz, 0, false) <= mj.ceiling() as f64;
                let rz_k = if rz_fits {
                    let pts = moduli::enumerate_rz(&mj)?;
                    let mut c = 0u64;
                    for l in &pts {
                        if moduli::stratum_of(&mj, l)? == k {
                            c += 1;
                        }
                    }
                    Some(c)
                } else {
                    None
                };
                let q = mj.q();
                let mut band = Value::Null;
                if let Some((pc, pq)) = prev {
                    if count < pc {
                        part.fail_once(json!({ "check": "monotone", "k": k, "j": j }));
                    }
                    let dim = (base.n - k - 1) as f64;
                    let growth = ((count as f64) / (pc as f64)).ln() / (q / pq).ln();
                    band = json!(growth);
                    if !(dim - 0.5..=dim + 0.5).contains(&growth) {
                        soft.push(json!({ "k": k, "j": j, "growth": growth, "dim": dim }));
                    }
                }
                prev = Some((count, q));
                table.push(json!({ "k": k, "j": j, "dl": count, "dl_oracle": oracle, "rz": rz_k, "growth": band }));
                rows.push(CensusRow { p: base.p, m: base.m, n: base.n, k, j, count, oracle_count: oracle, matches });
            }
        }
        part.counts.insert("table".into(), Value::Array(table));
        part.counts.insert("growth_band_outliers".into(), Value::Array(soft));
        Ok((part, rows))
    }
}

/// A suite's findings before they are stamped into a report.
struct Partial {
    scope: &'static str,
    counts: Map<String, Value>,
    counterexample: Option<Value>,
    extra_params: Map<String, Value>,
}

impl Partial {
    fn new(scope: &'static str) -> Self {
        Partial { scope, counts: Map::new(), counterexample: None, extra_params: Map::new() }
    }

    fn count(&mut self, key: &str, v: u64) {
        self.counts.insert(key.into(), json!(v));
    }

    fn param(&mut self, key: &str, v: Value) {
        self.extra_params.insert(key.into(), v);
    }

    fn fail(&mut self, ce: Value) {
        self.counterexample = Some(ce);
    }

    fn fail_once(&mut self, ce: Value) {
        if self.counterexample.is_none() {
            self.counterexample = Some(ce);
        }
    }
}

fn heart_chain(m: &Model, l: &Lattice, d: &Lattice, h: &HeartLattice) -> Result<bool> {
    use crate::lattice::colength_if_contained as cl;
    let r = m.ring();
    let half = (m.n() / 2) as u32;
    Ok(cl(r, &h.lattice, d)? == Some(half - 1)
        && cl(r, d, l)? == Some(2)
        && cl(r, l, &h.lattice.scale(-1))? == Some(half - 1))
}

fn unit(m: &Model, i: usize) -> Vec<crate::coeff::RingElem> {
    let r = m.ring();
    (0..m.n()).map(|c| if c == i { r.one() } else { r.zero() }).collect()
}

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or(Value::Null)
}

/// Runs one or all suites on a fresh session.
pub fn run_suite(model: Model, name: &str, opts: SuiteOptions) -> Result<Vec<SuiteReport>> {
    Session::new(model, opts).run(name)
}

/// Re-checks a counterexample record against the unmutated library.
///
/// Returns `true` when the recorded check passes, i.e. the counterexample
/// does not reproduce.
pub fn replay(model: &Model, counterexample: &Value) -> Result<bool> {
    let r = model.ring();
    let bad = || Error::InvalidParams("unrecognized counterexample record".into());
    let lat = |key: &str| -> Result<Lattice> { Lattice::from_json(r, counterexample.get(key).ok_or_else(bad)?) };
    let check = counterexample.get("check").and_then(Value::as_str).ok_or_else(bad)?;
    let session = Session::new(model.clone(), SuiteOptions::default());
    match check {
        "self-dual-standard" => Ok(model.dual(model.lambda0())? == *model.lambda0()),
        "double-dual" | "phi2-commutes" | "inclusion-reversal" | "colength-duality" => {
            Ok(session.duality_failure(&lat("L")?, &lat("M")?)?.is_none())
        }
        "stratum" | "triple-map" | "heart-cover" | "uncovered" => {
            let l = lat("L0")?;
            let pass = (|| -> Result<()> {
                let k = moduli::stratum_of(model, &l)?;
                let t = TriplePoint::from_rz(model, &l)?;
                let f = moduli::fiber_data(model, &t.y)?;
                let c = moduli::complement_from_triple(model, &t, &f)?;
                if moduli::lattice_from_complement(model, &t.y, &f, &c)? != l {
                    return Err(Error::consistency("reconstruction differs", json!(null)));
                }
                if 2 * k == model.n() {
                    moduli::heart_of(model, &l)?;
                }
                moduli::xmu_label(model, &l)?;
                Ok(())
            })();
            match pass {
                Ok(()) => Ok(true),
                Err(Error::Consistency { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        "beta" => {
            let y = counterexample.get("y").ok_or_else(bad)?;
            let k = y.get("k").and_then(Value::as_u64).ok_or_else(bad)? as usize;
            let yp = moduli::YPoint {
                k,
                m0: Lattice::from_json(r, y.get("M0").ok_or_else(bad)?)?,
                n0: Lattice::from_json(r, y.get("N0").ok_or_else(bad)?)?,
            };
            let scale = counterexample.get("scale").and_then(Value::as_i64).unwrap_or(1) as i32;
            match moduli::fiber_data_scaled(model, &yp, scale) {
                Ok(f) => Ok(moduli::beta_properties(model, &f).all()),
                Err(Error::Consistency { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        _ => Err(bad()),
    }
}
