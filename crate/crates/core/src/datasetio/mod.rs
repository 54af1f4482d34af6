//! Dataset naming, the example schema and the on-disk format.

mod container;
mod naming;
mod package;
mod record;

pub use container::{
    decode_example, decode_manifest, encode_example, read_example, write_example, ContainerError,
    ExampleManifest, FieldEntry, FORMAT_VERSION, MAGIC,
};
pub use naming::{
    dataset_name, enumerate_standard, parse_name, DatasetConfig, SimulationParameters,
};
pub use package::{
    example_entry_name, package_dataset, DatasetArchive, DatasetManifest, MANIFEST_ENTRY,
};
pub use record::{
    shape_table, Array, ArrayData, DType, ExampleRecord, FieldSpec, FIELD_NAMES, SCHEMA_FIELDS,
};
