mod common;

use common::*;
use qsf::cli::{dump_example, run_inspect, validate_archive, CheckStatus};
use qsf::datasetio::{
    decode_example, encode_example, example_entry_name, package_dataset, parse_name,
    ContainerError, DatasetArchive, DatasetManifest, FIELD_NAMES, MANIFEST_ENTRY, SCHEMA_FIELDS,
};
use qsf::generate::generate_example;
use qsf::Error;

fn record(name: &str) -> (qsf::datasetio::DatasetConfig, qsf::datasetio::ExampleRecord) {
    let mut cfg = parse_name(name).unwrap();
    cfg.params.n_steps = 32;
    cfg.params.n_realizations = 3;
    cfg.params.num_ex = 2;
    let rec = generate_example(&cfg, 42, false).unwrap();
    (cfg, rec)
}

fn archive(dir: &std::path::Path, name: &str) -> std::path::PathBuf {
    let (cfg, _) = record(name);
    let work = dir.join("work");
    std::fs::create_dir_all(&work).unwrap();
    let mut seeds = Vec::new();
    for i in 0..cfg.params.num_ex {
        let seed = 100 + i as u64;
        seeds.push(seed);
        let rec = generate_example(&cfg, seed, false).unwrap();
        std::fs::write(work.join(example_entry_name(i)), encode_example(&rec)).unwrap();
    }
    package_dataset(&DatasetManifest::new(cfg, 0, seeds), &work, dir).unwrap()
}

#[test]
fn round_trip_is_bit_exact() {
    for name in ["G_1q_X_Z_N4_D", "S_2q_IX-XI_IZ-ZI_N1-N6"] {
        let (_, rec) = record(name);
        let bytes = encode_example(&rec);
        let back = decode_example(&bytes).unwrap();
        assert_eq!(back, rec);
        assert_eq!(encode_example(&back), bytes);
    }
}

#[test]
fn header_and_layout() {
    let (_, rec) = record("G_1q_X");
    let bytes = encode_example(&rec);
    assert_eq!(&bytes[..4], b"QDS1");
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
    let (manifest, start) = qsf::datasetio::decode_manifest(&bytes).unwrap();
    let names: Vec<&str> = manifest.fields.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(names, FIELD_NAMES);
    // first complex value of U0 is interleaved (re, im)
    let u0 = manifest.fields.iter().find(|f| f.name == "U0").unwrap();
    let at = start + u0.offset;
    let re = f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let im = f64::from_le_bytes(bytes[at + 8..at + 16].try_into().unwrap());
    let z = rec.get("U0").unwrap().as_complex().unwrap()[0];
    assert_eq!((re, im), (z.re, z.im));
}

#[test]
fn corruption_is_reported_distinctly() {
    let (_, rec) = record("G_1q_X_Z_N1");
    let bytes = encode_example(&rec);

    let short = &bytes[..bytes.len() - 5];
    assert!(matches!(decode_example(short), Err(ContainerError::TruncatedPayload { .. })));

    let mut v2 = bytes.clone();
    v2[4] = 2;
    assert!(matches!(decode_example(&v2), Err(ContainerError::UnknownVersion(2))));

    let mut garbled = bytes.clone();
    garbled[20] = b'#';
    assert!(matches!(decode_example(&garbled), Err(ContainerError::CorruptManifest(_))));

    let mut magic = bytes.clone();
    magic[0] = b'X';
    assert!(matches!(decode_example(&magic), Err(ContainerError::CorruptManifest(_))));

    let mut trailing = bytes.clone();
    trailing.push(0);
    assert!(decode_example(&trailing).is_err());
}

#[test]
fn packaging_requires_every_example() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, rec) = record("G_1q_X");
    let work = dir.path().join("w");
    std::fs::create_dir_all(&work).unwrap();
    std::fs::write(work.join(example_entry_name(1)), encode_example(&rec)).unwrap();
    let err = package_dataset(&DatasetManifest::new(cfg, 0, vec![1, 2]), &work, dir.path()).unwrap_err();
    assert!(matches!(err, Error::MissingExamples(ref v) if v == &[0]));
    assert!(!dir.path().join("G_1q_X.zip").exists());
}

#[test]
fn archive_lists_manifest_and_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = archive(dir.path(), "G_1q_XY_XZ_N1N5");
    let mut a = DatasetArchive::open(&path).unwrap();
    assert_eq!(a.entry_names(), vec![MANIFEST_ENTRY.to_string(), "ex_00000.qex".into(), "ex_00001.qex".into()]);
    assert_eq!(a.len(), 2);
    assert!(a.read_example(1).is_ok());
    assert!(matches!(a.read_example(2), Err(Error::IndexOutOfRange { index: 2, len: 2 })));
}

#[test]
fn clean_archive_validates() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["G_1q_X", "S_2q_IX-XI-XX_IZ-ZI_N1-N6_D"] {
        let path = archive(dir.path(), name);
        let report = validate_archive(&path);
        assert!(report.passed(), "{:?}", report.failures());
        let noiseless = report.check("vo_identity").unwrap().status;
        assert_eq!(noiseless == CheckStatus::Pass, name == "G_1q_X");
    }
}

#[test]
fn flipped_unitary_byte_fails_physics_checks() {
    let dir = tempfile::tempdir().unwrap();
    let path = archive(dir.path(), "G_1q_X_Z_N2");
    rewrite_zip_entry(&path, "ex_00001.qex", |b| {
        let at = field_offset(b, "U0");
        b[at + 6] ^= 0x40;
    });
    let report = validate_archive(&path);
    assert!(!report.passed());
    assert_eq!(report.check("unitarity").unwrap().status, CheckStatus::Fail);
    assert_eq!(report.exit_code(), 2);
}

#[test]
fn nan_counts_as_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = archive(dir.path(), "G_1q_X_Z_N2");
    rewrite_zip_entry(&path, "ex_00000.qex", |b| {
        let at = field_offset(b, "Eo");
        b[at..at + 8].copy_from_slice(&f64::NAN.to_le_bytes());
    });
    let report = validate_archive(&path);
    assert_eq!(report.check("expectation_bounds").unwrap().status, CheckStatus::Fail);
}

#[test]
fn truncated_entry_is_a_format_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = archive(dir.path(), "G_1q_X");
    rewrite_zip_entry(&path, "ex_00000.qex", |b| b.truncate(b.len() - 16));
    let report = validate_archive(&path);
    assert_eq!(report.check("container").unwrap().status, CheckStatus::Fail);
    assert_eq!(report.exit_code(), 3);
}

#[test]
fn renamed_archive_fails_naming() {
    let dir = tempfile::tempdir().unwrap();
    let path = archive(dir.path(), "G_1q_X");
    let moved = dir.path().join("S_1q_X.zip");
    std::fs::rename(&path, &moved).unwrap();
    assert_eq!(validate_archive(&moved).check("naming").unwrap().status, CheckStatus::Fail);
}

#[test]
fn dump_has_every_schema_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = archive(dir.path(), "S_1q_XY_XZ_N1N6_D");
    let mut out = Vec::new();
    dump_example(&path, 1, &mut out).unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(doc["dataset"], "S_1q_XY_XZ_N1N6_D");
    assert_eq!(doc["index"], 1);
    assert!(doc["simulation_parameters"].is_object());
    let fields = doc["fields"].as_object().unwrap();
    assert_eq!(fields.len() + 1, SCHEMA_FIELDS.len());

    let mut a = DatasetArchive::open(&path).unwrap();
    let rec = a.read_example(1).unwrap();
    let u0 = &fields["U0"];
    assert_eq!(u0["dtype"], "c128");
    let data = u0["data"].as_array().unwrap();
    let z = rec.get("U0").unwrap().as_complex().unwrap()[1];
    assert_eq!((data[2].as_f64().unwrap(), data[3].as_f64().unwrap()), (z.re, z.im));
    assert_eq!(fields["Eo"]["shape"], serde_json::json!([18]));
}

#[test]
fn inspect_summarizes_an_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = archive(dir.path(), "G_1q_X");
    let r = run_inspect(&path, 0).unwrap();
    assert_eq!(r.field_names.len(), 14);
    assert_eq!(r.eo_len, 18);
    assert!(r.max_vo_deviation() < 1e-9);
    assert!(r.text.contains("G_1q_X"));
    assert!(matches!(run_inspect(&path, 9), Err(Error::IndexOutOfRange { .. })));
}
