//! Enumeration pipelines: brute force over involutions, constructive
//! classification, and the verification sweep comparing both against the
//! closed-form count.
//!
//! Everything here is deterministic and single-threaded. The brute-force
//! candidate space is pre-sharded (`brute_force_mnon_shard`) so a driver can
//! fan shards out to worker threads and merge; `merge_member_shards` re-sorts,
//! making the result independent of shard count and completion order.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::flagmap::{projective_k22_map, FlagMap, MapInvariants};
use crate::knn::{canonical_triple, derived_map, enumerate_nnon, nx_parameter, DeltaBar};
use crate::numthy::predicted_count;
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    Domain(&'static str),
    /// Brute force refused: `n` exceeds the configured ceiling.
    BudgetExceeded {
        n: usize,
        ceiling: usize,
    },
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::Domain(msg) => write!(f, "domain error: {msg}"),
            ClassifyError::BudgetExceeded { n, ceiling } => {
                write!(f, "brute force at n = {n} exceeds the ceiling {ceiling}")
            }
        }
    }
}

impl core::error::Error for ClassifyError {}

/// Tuning knobs consumed by the pipeline.
#[derive(Debug, Clone)]
pub struct ClassifyConfig {
    /// Verification runs brute force for every `n ≤ brute_max`.
    pub brute_max: usize,
    /// Hard refusal bound for brute force (candidate counts explode).
    pub brute_ceiling: usize,
    /// Structural isomorphism cross-checks run for `n ≤ iso_budget`.
    pub iso_budget: usize,
    /// Closure element cap per brute-force candidate; `None` means `4n²+1`.
    pub closure_cap: Option<usize>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            brute_max: 13,
            brute_ceiling: 14,
            iso_budget: 34,
            closure_cap: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Constructive,
    BruteForce,
    Both,
}

/// One classified embedding.
#[derive(Debug, Clone)]
pub struct EmbeddingRecord {
    pub n: usize,
    /// Shift parameter of the constructive family; `None` for the `n = 2`
    /// projective-plane map and hypothetical brute-force-only finds.
    pub x: Option<usize>,
    pub delta_bar: DeltaBar,
    pub map: FlagMap,
    pub group_order: u64,
    pub invariants: MapInvariants,
    pub class_id: usize,
    pub source: Source,
}

/// Outcome of checking one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub n: usize,
    pub predicted: u64,
    pub constructive_count: u64,
    pub brute_count: Option<u64>,
    pub agreement: bool,
    /// Filled by drivers that can read a clock; 0 here.
    pub wall_time_ms: u64,
    pub notes: Vec<String>,
}

/// Calls `f` with every involution of `[n]` fixing 0, in a fixed order:
/// the smallest unmatched point is left fixed first, then paired with each
/// larger point in ascending order.
pub fn for_each_involution_fixing_zero(n: usize, mut f: impl FnMut(&[u32])) {
    assert!(n >= 1);
    let mut image: Vec<u32> = (0..n as u32).collect();
    let mut avail: Vec<usize> = (1..n).collect();
    recurse_involutions(&mut image, &mut avail, &mut f);
}

fn recurse_involutions(image: &mut [u32], avail: &mut Vec<usize>, f: &mut impl FnMut(&[u32])) {
    if avail.is_empty() {
        f(image);
        return;
    }
    let p = avail.remove(0);
    recurse_involutions(image, avail, f);
    for qi in 0..avail.len() {
        let q = avail.remove(qi);
        image[p] = q as u32;
        image[q] = p as u32;
        recurse_involutions(image, avail, f);
        image[p] = p as u32;
        image[q] = q as u32;
        avail.insert(qi, q);
    }
    avail.insert(0, p);
}

/// The shard `shard` (of `num_shards`) of the brute-force member search:
/// candidate involutions are enumerated in the fixed order and taken round
/// robin. Members are returned in candidate order; merge re-sorts.
///
/// `n = 2` is the degenerate normal form: the single projective-plane
/// embedding is represented by the identity marker.
pub fn brute_force_mnon_shard(
    n: usize,
    closure_cap: Option<usize>,
    shard: usize,
    num_shards: usize,
) -> Vec<DeltaBar> {
    assert!(n >= 2, "brute force needs n >= 2");
    assert!(num_shards >= 1 && shard < num_shards);
    if n == 2 {
        return if shard == 0 {
            vec![DeltaBar::identity(2)]
        } else {
            Vec::new()
        };
    }
    let cap = closure_cap.unwrap_or(4 * n * n + 1);
    let negation = crate::knn::negation(n);
    let mut members = Vec::new();
    let mut counter = 0usize;
    for_each_involution_fixing_zero(n, |delta_image| {
        let take = counter % num_shards == shard;
        counter += 1;
        if !take {
            return;
        }
        // delta_bar = delta ∘ negation; for an involution delta the skew
        // condition holds automatically, so the constructor's pre-filter
        // never rejects a candidate here.
        let db_image: Vec<u32> = (0..n).map(|k| delta_image[negation.apply(k)]).collect();
        let perm = Perm::from_image(db_image).expect("bijection");
        let Ok(db) = DeltaBar::new(perm) else {
            return;
        };
        if db.in_mnon_by_group_with_cap(cap) {
            members.push(db);
        }
    });
    members
}

/// Deterministic merge of shard outputs: sort by the image array.
pub fn merge_member_shards(shards: Vec<Vec<DeltaBar>>) -> Vec<DeltaBar> {
    let mut all: Vec<DeltaBar> = shards.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    all
}

/// Exhaustive member search over all involutions `delta` fixing 0,
/// single-threaded. Results are sorted by the image array of `delta_bar`.
pub fn brute_force_mnon(n: usize, cfg: &ClassifyConfig) -> Result<Vec<DeltaBar>, ClassifyError> {
    if n < 2 {
        return Err(ClassifyError::Domain("brute force needs n >= 2"));
    }
    if n > cfg.brute_ceiling {
        return Err(ClassifyError::BudgetExceeded {
            n,
            ceiling: cfg.brute_ceiling,
        });
    }
    Ok(merge_member_shards(vec![brute_force_mnon_shard(
        n,
        cfg.closure_cap,
        0,
        1,
    )]))
}

/// Constructive classification: every member of the constructive family
/// (plus the hardwired projective-plane map at `n = 2`), with derived maps,
/// invariants and isomorphism-class ids.
///
/// Distinct `x` give distinct classes; for `n ≤ iso_budget` that is
/// cross-checked structurally and isomorphic duplicates (none are expected)
/// would share a class id.
pub fn classify_constructive(n: usize, cfg: &ClassifyConfig) -> Vec<EmbeddingRecord> {
    assert!(n >= 2, "classification needs n >= 2");
    if n == 2 {
        let map = projective_k22_map();
        let invariants = map.invariants();
        return vec![EmbeddingRecord {
            n,
            x: None,
            delta_bar: DeltaBar::identity(2),
            group_order: map.flag_count() as u64,
            invariants,
            class_id: 0,
            source: Source::Constructive,
            map,
        }];
    }
    let mut records: Vec<EmbeddingRecord> = Vec::new();
    for db in enumerate_nnon(n) {
        let x = nx_parameter(&db);
        let map = db
            .derive_map()
            .expect("constructive members derive regular maps");
        let invariants = map.invariants();
        debug_assert!(!invariants.orientable);
        let class_id = if n <= cfg.iso_budget {
            records
                .iter()
                .find(|r| r.map.isomorphic(&map))
                .map(|r| r.class_id)
                .unwrap_or_else(|| next_class_id(&records))
        } else {
            next_class_id(&records)
        };
        records.push(EmbeddingRecord {
            n,
            x,
            delta_bar: db,
            group_order: map.flag_count() as u64,
            invariants,
            class_id,
            source: Source::Constructive,
            map,
        });
    }
    records
}

fn next_class_id(records: &[EmbeddingRecord]) -> usize {
    records.iter().map(|r| r.class_id + 1).max().unwrap_or(0)
}

/// Number of distinct isomorphism classes among the records.
pub fn class_count(records: &[EmbeddingRecord]) -> u64 {
    let mut ids: Vec<usize> = records.iter().map(|r| r.class_id).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len() as u64
}

/// Verification sweep with the built-in single-threaded brute force.
pub fn verify_theorem(
    n_low: usize,
    n_high: usize,
    cfg: &ClassifyConfig,
) -> Vec<VerificationReport> {
    verify_theorem_with(n_low, n_high, cfg, |n| {
        merge_member_shards(vec![brute_force_mnon_shard(n, cfg.closure_cap, 0, 1)])
    })
}

/// Verification sweep with an injected brute-force runner (drivers use this
/// to fan candidate shards out to threads; the runner must return the merged
/// member list for the given `n`).
pub fn verify_theorem_with(
    n_low: usize,
    n_high: usize,
    cfg: &ClassifyConfig,
    mut brute: impl FnMut(usize) -> Vec<DeltaBar>,
) -> Vec<VerificationReport> {
    assert!(2 <= n_low && n_low <= n_high, "need 2 <= n_low <= n_high");
    let brute_limit = cfg.brute_max.min(cfg.brute_ceiling);
    (n_low..=n_high)
        .map(|n| {
            let mut notes = Vec::new();
            if cfg.brute_max > cfg.brute_ceiling && n == n_low {
                notes.push(format!(
                    "brute_max {} clamped to ceiling {}",
                    cfg.brute_max, cfg.brute_ceiling
                ));
            }
            let predicted = predicted_count(n as u64).expect("n >= 2");
            let mut records = classify_constructive(n, cfg);
            let constructive_count = class_count(&records);
            let brute_members = (n <= brute_limit).then(|| brute(n));
            let mut sets_ok = true;
            if let Some(members) = &brute_members {
                let before = notes.len();
                reconcile(n, &mut records, members, &mut notes);
                sets_ok = notes.len() == before;
            }
            let brute_count = brute_members.as_ref().map(|m| m.len() as u64);
            let agreement = predicted == constructive_count
                && brute_count.is_none_or(|b| b == constructive_count)
                && sets_ok;
            VerificationReport {
                n,
                predicted,
                constructive_count,
                brute_count,
                agreement,
                wall_time_ms: 0,
                notes,
            }
        })
        .collect()
}

/// Matches brute-force members against the constructive records: matched
/// records become `Both`; unmatched members (a theorem violation) are
/// appended as `BruteForce` records with diagnostic notes, and missing
/// members are noted.
fn reconcile(
    n: usize,
    records: &mut Vec<EmbeddingRecord>,
    brute_members: &[DeltaBar],
    notes: &mut Vec<String>,
) {
    for record in records.iter_mut() {
        if brute_members.contains(&record.delta_bar) {
            record.source = Source::Both;
        } else {
            notes.push(format!(
                "constructive member missing from brute force at n = {n}: {:?}",
                record.delta_bar.perm()
            ));
        }
    }
    for member in brute_members {
        if records.iter().any(|r| &r.delta_bar == member) {
            continue;
        }
        notes.push(format!(
            "brute-force member outside the constructive family at n = {n}: {:?}",
            member.perm()
        ));
        diagnose_unexpected_member(member, notes);
        let class_id = next_class_id(records);
        match canonical_triple(n, &member.to_delta()).and_then(|t| derived_map(&t)) {
            Ok(map) => {
                let invariants = map.invariants();
                records.push(EmbeddingRecord {
                    n,
                    x: nx_parameter(member),
                    delta_bar: member.clone(),
                    group_order: map.flag_count() as u64,
                    invariants,
                    class_id,
                    source: Source::BruteForce,
                    map,
                });
            }
            Err(e) => notes.push(format!("unexpected member fails to derive a map: {e}")),
        }
    }
}

/// Order/orbit/reduction diagnostics for a member outside the constructive
/// family (none are expected; the checks keep the reduction machinery
/// honest if one ever appears).
fn diagnose_unexpected_member(member: &DeltaBar, notes: &mut Vec<String>) {
    let n = member.n();
    let d = member.order_d();
    let orbit_len = member.perm().orbit(1).len() as u64;
    if d != orbit_len {
        notes.push(format!(
            "order {d} differs from orbit-of-1 length {orbit_len}"
        ));
    }
    if !(n as u64).is_multiple_of(d) || d == n as u64 {
        notes.push(format!("order {d} is not a proper divisor of n = {n}"));
    }
    if d == 2 {
        notes.push(String::from("member of order 2 (excluded for n >= 3)"));
    }
    if d >= 2 && d < n as u64 && (n as u64).is_multiple_of(d) {
        match member.reduction(d as usize) {
            Ok(reduced) => {
                if !reduced.in_mnon_by_group() {
                    notes.push(format!("reduction mod {d} is not itself a member"));
                }
            }
            Err(e) => notes.push(format!("reduction mod {d} failed: {e}")),
        }
    }
}
