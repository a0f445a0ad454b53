//! Writing and reading observation matrices in the CSV and FDC1 binary formats.
//!
//! cargo run --example file_io

use deconwave::io::{read_matrix, write_matrix};
use deconwave::signals::{make_test_function, TestSignal};
use serde_json::json;

fn main() -> deconwave::Result<()> {
    let dir = std::env::temp_dir().join("deconwave-file-io");
    std::fs::create_dir_all(&dir)?;
    let f = make_test_function(TestSignal::Bumps, TestSignal::Blip, 16, 64)?;
    let meta = json!({ "f_t": "bumps", "f_u": "blip" });
    for name in ["f.csv", "f.bin"] {
        let path = dir.join(name);
        write_matrix(&path, f.values(), "f_t = bumps\nf_u = blip", &meta)?;
        let back = read_matrix(&path)?;
        let bytes = std::fs::metadata(&path)?.len();
        println!(
            "{}: {bytes} bytes, exact roundtrip: {}",
            path.display(),
            back == f.values()
        );
    }
    Ok(())
}
