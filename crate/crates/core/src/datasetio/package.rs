//! Zip packaging of per-example container files.

use std::fs::{self, File};
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipArchive, ZipWriter};

use super::container::{decode_example, FORMAT_VERSION};
use super::naming::DatasetConfig;
use super::record::ExampleRecord;
use crate::error::{Error, Result};

pub const MANIFEST_ENTRY: &str = "manifest.json";

pub fn example_entry_name(index: usize) -> String {
    format!("ex_{index:05}.qex")
}

/// Dataset-level manifest stored next to the examples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format: String,
    pub version: u32,
    pub dataset: String,
    pub config: DatasetConfig,
    pub master_seed: u64,
    pub example_seeds: Vec<u64>,
}

impl DatasetManifest {
    pub fn new(config: DatasetConfig, master_seed: u64, example_seeds: Vec<u64>) -> Self {
        Self {
            format: "QDS1".into(),
            version: FORMAT_VERSION,
            dataset: config.name(),
            config,
            master_seed,
            example_seeds,
        }
    }
}

fn entry_options() -> SimpleFileOptions {
    SimpleFileOptions::default()
        .compression_method(CompressionMethod::Deflated)
        .last_modified_time(DateTime::default())
        .unix_permissions(0o644)
}

/// Zips `manifest.json` plus `ex_<i>.qex` for every example into
/// `<out_dir>/<dataset name>.zip`. Entries carry a fixed timestamp.
pub fn package_dataset(
    manifest: &DatasetManifest,
    examples_dir: &Path,
    out_dir: &Path,
) -> Result<PathBuf> {
    let n = manifest.config.params.num_ex;
    let missing: Vec<usize> =
        (0..n).filter(|&i| !examples_dir.join(example_entry_name(i)).is_file()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingExamples(missing));
    }

    let path = out_dir.join(format!("{}.zip", manifest.dataset));
    let tmp = out_dir.join(format!("{}.zip.partial", manifest.dataset));
    {
        let mut zip = ZipWriter::new(File::create(&tmp)?);
        zip.start_file(MANIFEST_ENTRY, entry_options())?;
        zip.write_all(&serde_json::to_vec_pretty(manifest)?)?;
        for i in 0..n {
            let name = example_entry_name(i);
            zip.start_file(name.as_str(), entry_options())?;
            zip.write_all(&fs::read(examples_dir.join(&name))?)?;
        }
        zip.finish()?.sync_all()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Read access to a packaged dataset.
pub struct DatasetArchive {
    zip: ZipArchive<BufReader<File>>,
    pub manifest: DatasetManifest,
}

impl DatasetArchive {
    pub fn open(path: &Path) -> Result<Self> {
        let mut zip = ZipArchive::new(BufReader::new(File::open(path)?))?;
        let manifest: DatasetManifest = {
            let mut entry = zip.by_name(MANIFEST_ENTRY)?;
            let mut text = Vec::new();
            entry.read_to_end(&mut text)?;
            serde_json::from_slice(&text)?
        };
        Ok(Self { zip, manifest })
    }

    pub fn len(&self) -> usize {
        self.manifest.config.params.num_ex
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn example_bytes(&mut self, index: usize) -> Result<Vec<u8>> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange { index, len: self.len() });
        }
        let mut entry = self.zip.by_name(&example_entry_name(index))?;
        let mut bytes = Vec::with_capacity(entry.size() as usize);
        entry.read_to_end(&mut bytes)?;
        Ok(bytes)
    }

    pub fn read_example(&mut self, index: usize) -> Result<ExampleRecord> {
        let bytes = self.example_bytes(index)?;
        Ok(decode_example(&bytes)?)
    }

    pub fn entry_names(&self) -> Vec<String> {
        self.zip.file_names().map(str::to_owned).collect()
    }
}
