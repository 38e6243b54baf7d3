//! Serialized forms. Field names and orders are part of the output
//! contract (golden files depend on them), so everything is a struct with
//! explicit fields, no maps.

use serde::{Deserialize, Serialize};

use crosscap_core::classify::{EmbeddingRecord, Source, VerificationReport};
use crosscap_core::numthy::factorize;
use crosscap_core::MapInvariants;

/// Flag-map file: image arrays under the crate's 0-based convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagMapFile {
    pub flag_count: usize,
    pub lambda: Vec<u32>,
    pub rho: Vec<u32>,
    pub tau: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantsJson {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosscaps: Option<u64>,
    pub valency: usize,
    pub covalency: usize,
}

impl From<&MapInvariants> for InvariantsJson {
    fn from(inv: &MapInvariants) -> Self {
        InvariantsJson {
            vertices: inv.vertices,
            edges: inv.edges,
            faces: inv.faces,
            euler_characteristic: inv.euler_characteristic,
            orientable: inv.orientable,
            genus: inv.orientable.then_some(inv.genus_or_crosscaps),
            crosscaps: (!inv.orientable).then_some(inv.genus_or_crosscaps),
            valency: inv.valency,
            covalency: inv.covalency,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub n: usize,
    pub x: Option<usize>,
    pub group_order: u64,
    pub class_id: usize,
    pub source: String,
    pub invariants: InvariantsJson,
}

impl From<&EmbeddingRecord> for RecordJson {
    fn from(r: &EmbeddingRecord) -> Self {
        RecordJson {
            n: r.n,
            x: r.x,
            group_order: r.group_order,
            class_id: r.class_id,
            source: match r.source {
                Source::Constructive => "constructive",
                Source::BruteForce => "brute_force",
                Source::Both => "both",
            }
            .to_owned(),
            invariants: (&r.invariants).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub n: usize,
    pub predicted: u64,
    pub constructive_count: u64,
    pub brute_count: Option<u64>,
    pub agreement: bool,
    pub notes: Vec<String>,
    pub wall_time_ms: u64,
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        ReportJson {
            n: r.n,
            predicted: r.predicted,
            constructive_count: r.constructive_count,
            brute_count: r.brute_count,
            agreement: r.agreement,
            notes: r.notes.clone(),
            wall_time_ms: r.wall_time_ms,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeResidueJson {
    pub prime: u64,
    pub exponent: u32,
    pub residue_mod_8: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountJson {
    pub n: u64,
    pub count: u64,
    pub n_mod_4: u64,
    /// Factorization of `n/2` with residues mod 8; present only when
    /// `n ≡ 2 (mod 4)` (the only case with embeddings beyond n = 2).
    pub half_factorization: Option<Vec<PrimeResidueJson>>,
}

impl CountJson {
    pub fn build(n: u64, count: u64) -> CountJson {
        let half_factorization = (n % 4 == 2).then(|| {
            factorize(n / 2)
                .factors
                .iter()
                .map(|&(prime, exponent)| PrimeResidueJson {
                    prime,
                    exponent,
                    residue_mod_8: prime % 8,
                })
                .collect()
        });
        CountJson {
            n,
            count,
            n_mod_4: n % 4,
            half_factorization,
        }
    }
}
