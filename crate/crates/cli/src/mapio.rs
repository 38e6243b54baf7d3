//! Reading and writing flag-map files. Written bytes are deterministic:
//! compact JSON with fixed field order, one trailing newline.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use crosscap_core::{FlagMap, Perm};

use crate::json::FlagMapFile;

pub fn to_file_repr(map: &FlagMap) -> FlagMapFile {
    FlagMapFile {
        flag_count: map.flag_count(),
        lambda: map.lambda().image().to_vec(),
        rho: map.rho().image().to_vec(),
        tau: map.tau().image().to_vec(),
    }
}

pub fn to_json_bytes(map: &FlagMap) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(&to_file_repr(map)).expect("serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

pub fn write_flagmap(path: &Path, map: &FlagMap) -> Result<()> {
    fs::write(path, to_json_bytes(map)).with_context(|| format!("writing {}", path.display()))
}

/// Parses and fully revalidates a flag-map file.
pub fn read_flagmap(path: &Path) -> Result<FlagMap> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let file: FlagMapFile =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    from_file_repr(&file)
}

pub fn from_file_repr(file: &FlagMapFile) -> Result<FlagMap> {
    anyhow::ensure!(
        file.lambda.len() == file.flag_count
            && file.rho.len() == file.flag_count
            && file.tau.len() == file.flag_count,
        "array lengths disagree with flag_count"
    );
    let lambda = Perm::from_image(file.lambda.clone()).map_err(|e| anyhow::anyhow!("{e}"))?;
    let rho = Perm::from_image(file.rho.clone()).map_err(|e| anyhow::anyhow!("{e}"))?;
    let tau = Perm::from_image(file.tau.clone()).map_err(|e| anyhow::anyhow!("{e}"))?;
    FlagMap::new(lambda, rho, tau).map_err(|e| anyhow::anyhow!("{e}"))
}

/// File name for an exported record: `knn_n{n}_x{x}.json`, or
/// `knn_n2_projective.json` for the parameterless map.
pub fn export_file_name(n: usize, x: Option<usize>) -> String {
    match x {
        Some(x) => format!("knn_n{n}_x{x}.json"),
        None => format!("knn_n{n}_projective.json"),
    }
}
