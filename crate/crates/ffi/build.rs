use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("triorbit.h");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("TRIORBIT_H".into()),
        cpp_compat: true,
        documentation: true,
        header: Some("/* C interface to the triorbit 3-orbit group library. */".into()),
        enumeration: cbindgen::EnumConfig {
            // Bare variant names like `Ok` would pollute the C namespace.
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };

    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        // Header generation failing (e.g. while rustc is mid-edit) should
        // not block the library build; the stale header stays in place.
        Err(err) => println!("cargo:warning=cbindgen skipped: {err}"),
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
}
