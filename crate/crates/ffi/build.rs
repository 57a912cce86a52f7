//! Generates `include/spdcone.h` from the exported C surface.

use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("cargo sets the manifest dir");
    let out = PathBuf::from(&crate_dir).join("include").join("spdcone.h");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("SPDCONE_H".into()),
        cpp_compat: true,
        documentation: true,
        header: Some("/* C interface to the spdcone library. */".into()),
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            rename_variants: cbindgen::RenameRule::ScreamingSnakeCase,
            ..Default::default()
        },
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen generates the C header")
        .write_to_file(&out);
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
