//! Reduction chains: a DAG of surface-code systems linked by verified
//! reduction steps, grounded in base systems whose non-locality is shown by
//! exhaustive orbit enumeration or by relabeling an already certified system.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{verify_reduction_step, LeafSpec, StepReport};
use crate::error::{Error, Result};
use crate::lc::{find_local_representative, LocalitySearch, OrbitOptions};
use crate::surface::{adjacency_relation, default_phi, state_tableau, Embedding, SetupFile};
use crate::pauli::span_equal;

/// A non-locality certificate, addressed by the digest of its system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Certificate {
    /// The whole LC orbit was enumerated and no member respects Λ.
    Exhaustive {
        system: String,
        qubits: usize,
        orbit_size: usize,
        orbit_digest: String,
    },
    /// The system is a qubit relabeling of a certified `source` that maps
    /// the state and Λ onto those of `system`.
    Relabeled {
        system: String,
        source: String,
        qubit_map: Vec<[u32; 2]>,
    },
    /// A verified reduction step onto two certified systems.
    Reduction {
        system: String,
        a: u32,
        b: u32,
        reduced_a: String,
        reduced_b: String,
        leaf: LeafSpec,
    },
}

impl Certificate {
    /// Digest of the certified system.
    pub fn system(&self) -> &str {
        match self {
            Certificate::Exhaustive { system, .. }
            | Certificate::Relabeled { system, .. }
            | Certificate::Reduction { system, .. } => system,
        }
    }

    /// SHA-256 of the serialized certificate.
    pub fn id(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("certificate serializes")))
    }
}

/// Certificates keyed by system digest, persisted as one `<digest>.json`
/// file each.
#[derive(Clone, Debug, Default)]
pub struct CertificateStore {
    by_system: BTreeMap<String, Certificate>,
}

impl CertificateStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.by_system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_system.is_empty()
    }

    pub fn get(&self, system_digest: &str) -> Option<&Certificate> {
        self.by_system.get(system_digest)
    }

    pub fn insert(&mut self, c: Certificate) {
        self.by_system.insert(c.system().to_string(), c);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Certificate> {
        self.by_system.values()
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let mut store = Self::new();
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.sort();
        for p in paths {
            if p.extension().is_some_and(|x| x == "json") {
                let c: Certificate = serde_json::from_str(&std::fs::read_to_string(&p)?)?;
                if p.file_stem().and_then(|s| s.to_str()) != Some(c.system()) {
                    return Err(Error::Malformed(format!(
                        "{} does not match the digest of its system",
                        p.display()
                    )));
                }
                store.insert(c);
            }
        }
        Ok(store)
    }

    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        for c in self.by_system.values() {
            let body = serde_json::to_string_pretty(c)?;
            std::fs::write(dir.join(format!("{}.json", c.system())), body + "\n")?;
        }
        Ok(())
    }
}

/// Runs the locality search to completion. `Some` iff the system is
/// non-local.
pub fn certify_exhaustive(e: &Embedding, opts: &OrbitOptions) -> Result<Option<Certificate>> {
    let (_, g) = default_phi(e)?;
    let lam = adjacency_relation(e);
    Ok(match find_local_representative(&g, lam.graph(), opts)? {
        LocalitySearch::Local { .. } => None,
        LocalitySearch::Nonlocal(orbit) => Some(Certificate::Exhaustive {
            system: e.digest(),
            qubits: e.n_qubits(),
            orbit_size: orbit.len(),
            orbit_digest: orbit.digest(),
        }),
    })
}

/// True iff `qubit_map` (source id → target id) is a bijection carrying the
/// surface-code state and the adjacency relation of `source` onto those of
/// `target`.
pub fn check_relabeling(source: &Embedding, target: &Embedding, qubit_map: &[[u32; 2]]) -> Result<bool> {
    let n = source.n_qubits();
    if target.n_qubits() != n || qubit_map.len() != n {
        return Ok(false);
    }
    let mut perm = vec![usize::MAX; n];
    let mut map = HashMap::with_capacity(n);
    for &[s, t] in qubit_map {
        let (i, j) = match (source.qubit_index(s), target.qubit_index(t)) {
            (Ok(i), Ok(j)) => (i, j),
            _ => return Ok(false),
        };
        if perm[i] != usize::MAX {
            return Ok(false);
        }
        perm[i] = j;
        map.insert(s, t);
    }
    let st_s = state_tableau(source, &default_phi(source)?.0)?;
    let st_t = state_tableau(target, &default_phi(target)?.0)?;
    let moved = match st_s.permuted(&perm) {
        Ok(t) => t,
        Err(_) => return Ok(false),
    };
    if !span_equal(&moved, &st_t) {
        return Ok(false);
    }
    let lam_s = adjacency_relation(source).graph().relabeled(&map)?;
    Ok(lam_s.labeled_eq(adjacency_relation(target).graph()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub id: String,
    /// Key into [`ChainSpec::setups`].
    pub setup: String,
    /// Qubits contracted in order.
    #[serde(default)]
    pub contract: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseCertificateSpec {
    Exhaustive {
        system: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orbit_size: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orbit_digest: Option<String>,
    },
    Relabeled {
        system: String,
        source: String,
        qubit_map: Vec<[u32; 2]>,
    },
}

impl BaseCertificateSpec {
    fn system(&self) -> &str {
        match self {
            BaseCertificateSpec::Exhaustive { system, .. }
            | BaseCertificateSpec::Relabeled { system, .. } => system,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub system: String,
    pub a: u32,
    pub b: u32,
    pub reduced_a: String,
    pub reduced_b: String,
    pub leaf: LeafSpec,
}

/// A chain file: named setups, systems derived from them by contraction,
/// base certificates, and reduction steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub target: String,
    pub setups: BTreeMap<String, SetupFile>,
    pub systems: Vec<SystemSpec>,
    pub base: Vec<BaseCertificateSpec>,
    pub steps: Vec<StepSpec>,
}

impl ChainSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Builds every declared system.
    pub fn systems(&self) -> Result<BTreeMap<String, Embedding>> {
        let mut setups = BTreeMap::new();
        for (k, s) in &self.setups {
            setups.insert(k.as_str(), Embedding::from_setup(s)?);
        }
        let mut out = BTreeMap::new();
        for s in &self.systems {
            let base = setups
                .get(s.setup.as_str())
                .ok_or_else(|| Error::Malformed(format!("system {} uses unknown setup {}", s.id, s.setup)))?;
            let e = base.contract_all(&s.contract)?.with_name(s.id.clone());
            if out.insert(s.id.clone(), e).is_some() {
                return Err(Error::Malformed(format!("duplicate system id {}", s.id)));
            }
        }
        Ok(out)
    }
}

/// How a system in a chain was shown to be non-local.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exhaustive,
    Relabeled,
    Reduction,
    Store,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemVerdict {
    pub id: String,
    pub digest: String,
    pub qubits: usize,
    pub via: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedSystem {
    pub id: String,
    pub qubits: usize,
    pub orbit_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub target: String,
    pub target_digest: String,
    pub target_qubits: usize,
    /// Always `"nonlocal"`: a chain either certifies its target or fails.
    pub verdict: String,
    pub steps_verified: usize,
    /// Systems whose orbits were enumerated, with sizes.
    pub enumerated: Vec<EnumeratedSystem>,
    pub systems: Vec<SystemVerdict>,
}

impl ChainReport {
    /// Largest qubit count of any enumerated orbit.
    pub fn max_enumerated_qubits(&self) -> usize {
        self.enumerated.iter().map(|e| e.qubits).max().unwrap_or(0)
    }
}

struct ChainRun<'a> {
    spec: &'a ChainSpec,
    systems: BTreeMap<String, Embedding>,
    by_digest: HashMap<String, String>,
    base: HashMap<&'a str, &'a BaseCertificateSpec>,
    steps: HashMap<&'a str, &'a StepSpec>,
    store: &'a mut CertificateStore,
    opts: &'a OrbitOptions,
    certified: BTreeMap<String, Provenance>,
    in_progress: Vec<String>,
    enumerated: Vec<EnumeratedSystem>,
    steps_verified: usize,
}

impl ChainRun<'_> {
    fn system(&self, id: &str) -> Result<&Embedding> {
        self.systems
            .get(id)
            .ok_or_else(|| Error::Malformed(format!("unknown system id {id}")))
    }

    fn fail(system: &str, reason: impl Into<String>) -> Error {
        Error::ReductionHypothesis {
            system: system.to_string(),
            reason: reason.into(),
        }
    }

    fn ensure(&mut self, id: &str) -> Result<()> {
        if self.certified.contains_key(id) {
            return Ok(());
        }
        if self.in_progress.iter().any(|x| x == id) {
            return Err(Self::fail(id, "reduction steps form a cycle"));
        }
        self.in_progress.push(id.to_string());
        let r = self.certify(id);
        self.in_progress.pop();
        let via = r?;
        self.certified.insert(id.to_string(), via);
        Ok(())
    }

    fn certify(&mut self, id: &str) -> Result<Provenance> {
        let e = self.system(id)?.clone();
        if let Some(&b) = self.base.get(id) {
            return self.certify_base(id, &e, b);
        }
        if let Some(&s) = self.steps.get(id) {
            return self.certify_step(&e, s);
        }
        if let Some(c) = self.store.get(&e.digest()).cloned() {
            return self.certify_stored(id, &e, &c);
        }
        Err(Error::MissingCertificate(id.to_string()))
    }

    fn certify_base(&mut self, id: &str, e: &Embedding, b: &BaseCertificateSpec) -> Result<Provenance> {
        match b {
            BaseCertificateSpec::Exhaustive {
                orbit_size,
                orbit_digest,
                ..
            } => {
                let c = certify_exhaustive(e, self.opts)?
                    .ok_or_else(|| Self::fail(id, "base system has a local representative"))?;
                let Certificate::Exhaustive {
                    orbit_size: size,
                    orbit_digest: digest,
                    ..
                } = &c
                else {
                    unreachable!("certify_exhaustive returns exhaustive certificates")
                };
                if orbit_size.is_some_and(|s| s != *size) || orbit_digest.as_ref().is_some_and(|d| d != digest) {
                    return Err(Self::fail(id, "recorded orbit does not match the enumeration"));
                }
                self.enumerated.push(EnumeratedSystem {
                    id: id.to_string(),
                    qubits: e.n_qubits(),
                    orbit_size: *size,
                });
                self.store.insert(c);
                Ok(Provenance::Exhaustive)
            }
            BaseCertificateSpec::Relabeled { source, qubit_map, .. } => {
                self.ensure(source)?;
                let src = self.system(source)?;
                if !check_relabeling(src, e, qubit_map)? {
                    return Err(Self::fail(id, format!("qubit map from {source} is not a symmetry")));
                }
                self.store.insert(Certificate::Relabeled {
                    system: e.digest(),
                    source: src.digest(),
                    qubit_map: qubit_map.clone(),
                });
                Ok(Provenance::Relabeled)
            }
        }
    }

    fn certify_step(&mut self, e: &Embedding, s: &StepSpec) -> Result<Provenance> {
        if (s.leaf.outer, s.leaf.inner) != (s.a, s.b) {
            return Err(Self::fail(&s.system, "leaf declaration disagrees with (a, b)"));
        }
        self.ensure(&s.reduced_a)?;
        self.ensure(&s.reduced_b)?;
        let ra = self.system(&s.reduced_a)?.clone();
        let rb = self.system(&s.reduced_b)?.clone();
        let leaf = s.leaf.resolve(e)?;
        let report: StepReport = verify_reduction_step(e, &ra, &rb, &leaf, true, true)?;
        if !report.holds() {
            return Err(Self::fail(&s.system, report.failures().join("; ")));
        }
        self.steps_verified += 1;
        self.store.insert(Certificate::Reduction {
            system: e.digest(),
            a: s.a,
            b: s.b,
            reduced_a: ra.digest(),
            reduced_b: rb.digest(),
            leaf: s.leaf.clone(),
        });
        Ok(Provenance::Reduction)
    }

    /// A stored certificate is trusted only after re-verification.
    fn certify_stored(&mut self, id: &str, e: &Embedding, c: &Certificate) -> Result<Provenance> {
        let resolve = |run: &Self, digest: &str| {
            run.by_digest
                .get(digest)
                .cloned()
                .ok_or_else(|| Error::MissingCertificate(format!("{id} (stored certificate refers to {digest})")))
        };
        match c {
            Certificate::Exhaustive { orbit_digest, orbit_size, .. } => {
                let fresh = certify_exhaustive(e, self.opts)?;
                let matches = matches!(&fresh, Some(Certificate::Exhaustive { orbit_digest: d, orbit_size: s, .. }) if d == orbit_digest && s == orbit_size);
                if !matches {
                    return Err(Self::fail(id, "stored exhaustive certificate does not re-verify"));
                }
                self.enumerated.push(EnumeratedSystem {
                    id: id.to_string(),
                    qubits: e.n_qubits(),
                    orbit_size: *orbit_size,
                });
            }
            Certificate::Relabeled { source, qubit_map, .. } => {
                let src = resolve(self, source)?;
                self.ensure(&src)?;
                if !check_relabeling(self.system(&src)?, e, qubit_map)? {
                    return Err(Self::fail(id, "stored relabeling does not re-verify"));
                }
            }
            Certificate::Reduction {
                reduced_a,
                reduced_b,
                leaf,
                ..
            } => {
                let ra = resolve(self, reduced_a)?;
                let rb = resolve(self, reduced_b)?;
                self.ensure(&ra)?;
                self.ensure(&rb)?;
                let report = verify_reduction_step(e, self.system(&ra)?, self.system(&rb)?, &leaf.resolve(e)?, true, true)?;
                if !report.holds() {
                    return Err(Self::fail(id, report.failures().join("; ")));
                }
                self.steps_verified += 1;
            }
        }
        Ok(Provenance::Store)
    }
}

/// Verifies every step and base certificate of `spec` and certifies its
/// target. New certificates are added to `store`; certificates already in
/// `store` are used only for systems the chain does not cover, and only
/// after re-verification. Any failed hypothesis aborts the run.
pub fn reduction_chain(
    spec: &ChainSpec,
    store: &mut CertificateStore,
    opts: &OrbitOptions,
) -> Result<ChainReport> {
    let systems = spec.systems()?;
    let by_digest = systems.iter().map(|(id, e)| (e.digest(), id.clone())).collect();
    let mut base = HashMap::new();
    for b in &spec.base {
        if base.insert(b.system(), b).is_some() {
            return Err(Error::Malformed(format!("two base certificates for {}", b.system())));
        }
    }
    let mut steps = HashMap::new();
    for s in &spec.steps {
        if base.contains_key(s.system.as_str()) || steps.insert(s.system.as_str(), s).is_some() {
            return Err(Error::Malformed(format!("system {} is certified twice", s.system)));
        }
    }
    let mut run = ChainRun {
        spec,
        systems,
        by_digest,
        base,
        steps,
        store,
        opts,
        certified: BTreeMap::new(),
        in_progress: Vec::new(),
        enumerated: Vec::new(),
        steps_verified: 0,
    };
    for b in &run.spec.base {
        run.ensure(b.system())?;
    }
    for s in &run.spec.steps {
        run.ensure(&s.system)?;
    }
    run.ensure(&spec.target)?;
    let target = run.system(&spec.target)?;
    let (target_digest, target_qubits) = (target.digest(), target.n_qubits());
    let systems = run
        .certified
        .iter()
        .map(|(id, &via)| {
            let e = &run.systems[id];
            SystemVerdict {
                id: id.clone(),
                digest: e.digest(),
                qubits: e.n_qubits(),
                via,
            }
        })
        .collect();
    Ok(ChainReport {
        target: spec.target.clone(),
        target_digest,
        target_qubits,
        verdict: "nonlocal".into(),
        steps_verified: run.steps_verified,
        enumerated: run.enumerated,
        systems,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn run(spec: &ChainSpec) -> Result<ChainReport> {
        reduction_chain(spec, &mut CertificateStore::new(), &OrbitOptions::default())
    }

    #[test]
    fn pentomino_chain_certifies_target() {
        let spec = fixtures::pentomino_chain().unwrap();
        let r = run(&spec).unwrap();
        assert_eq!(r.target_qubits, 16);
        assert_eq!(r.verdict, "nonlocal");
        assert_eq!(r.steps_verified, 120);
        assert_eq!(r.max_enumerated_qubits(), 8);
        assert_eq!(r.enumerated.len(), 1);
        assert_eq!(r.systems.len(), spec.systems.len());
    }

    #[test]
    fn missing_base_certificate() {
        let mut spec = fixtures::pentomino_chain().unwrap();
        spec.base.retain(|b| b.system() != "doubled_square");
        assert!(matches!(run(&spec), Err(Error::MissingCertificate(id)) if id == "doubled_square"));
    }

    #[test]
    fn tampered_orbit_digest() {
        let mut spec = fixtures::pentomino_chain().unwrap();
        for b in &mut spec.base {
            if let BaseCertificateSpec::Exhaustive { orbit_digest, .. } = b {
                *orbit_digest = Some("00".repeat(32));
            }
        }
        assert!(matches!(run(&spec), Err(Error::ReductionHypothesis { .. })));
    }

    #[test]
    fn wrong_relabeling_is_rejected() {
        let mut spec = fixtures::pentomino_chain().unwrap();
        for b in &mut spec.base {
            if let BaseCertificateSpec::Relabeled { qubit_map, .. } = b {
                let (x, y) = (qubit_map[0][1], qubit_map[1][1]);
                qubit_map[0][1] = y;
                qubit_map[1][1] = x;
                break;
            }
        }
        assert!(matches!(run(&spec), Err(Error::ReductionHypothesis { .. })));
    }

    #[test]
    fn single_step_onto_certified_systems() {
        let full = fixtures::pentomino_chain().unwrap();
        let mut store = CertificateStore::new();
        reduction_chain(&full, &mut store, &OrbitOptions::default()).unwrap();
        let last = full.steps.last().unwrap().clone();
        let keep = [&last.system, &last.reduced_a, &last.reduced_b];
        let spec = ChainSpec {
            name: None,
            target: last.system.clone(),
            setups: full.setups.clone(),
            systems: full.systems.iter().filter(|s| keep.contains(&&s.id)).cloned().collect(),
            base: Vec::new(),
            steps: vec![last],
        };
        assert!(matches!(run(&spec), Err(Error::MissingCertificate(_))));
        // Relabeled certificates point at doubled_square, which this spec lacks.
        let mut with_doubled_square = spec.clone();
        with_doubled_square.systems.extend(full.systems.iter().filter(|s| s.id == "doubled_square").cloned());
        let r = reduction_chain(&with_doubled_square, &mut store.clone(), &OrbitOptions::default()).unwrap();
        assert_eq!(r.steps_verified, 1);
        assert!(r.systems.iter().any(|s| s.via == Provenance::Store));
    }

    #[test]
    fn store_round_trip_and_reverification() {
        let full = fixtures::pentomino_chain().unwrap();
        let mut store = CertificateStore::new();
        reduction_chain(&full, &mut store, &OrbitOptions::default()).unwrap();
        assert_eq!(store.len(), full.systems.len());
        let dir = std::env::temp_dir().join(format!("toric-lc-certs-{}", std::process::id()));
        store.save_dir(&dir).unwrap();
        let mut loaded = CertificateStore::load_dir(&dir).unwrap();
        std::fs::remove_dir_all(&dir).unwrap();
        assert_eq!(loaded.len(), store.len());

        let mut spec = full.clone();
        spec.base.retain(|b| b.system() != "doubled_square");
        let r = reduction_chain(&spec, &mut loaded, &OrbitOptions::default()).unwrap();
        let base = r.systems.iter().find(|s| s.id == "doubled_square").unwrap();
        assert_eq!(base.via, Provenance::Store);
        assert_eq!(r.enumerated.len(), 1);
    }

    #[test]
    fn certificate_ids_are_content_addressed() {
        let e = fixtures::setup(fixtures::DOUBLED_SQUARE).unwrap();
        let a = certify_exhaustive(&e, &OrbitOptions::default()).unwrap().unwrap();
        let b = certify_exhaustive(&e, &OrbitOptions::default()).unwrap().unwrap();
        assert_eq!(a.id(), b.id());
        assert_eq!(a.system(), e.digest());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<Certificate>(&json).unwrap(), a);
    }

    #[test]
    fn local_system_has_no_exhaustive_certificate() {
        let e = fixtures::setup(fixtures::PLAQUETTE4).unwrap();
        assert!(certify_exhaustive(&e, &OrbitOptions::default()).unwrap().is_none());
    }
}
