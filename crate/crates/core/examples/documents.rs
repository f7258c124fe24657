//! Writing and reading input documents, then running a command on them.

use std::path::Path;

use uncertainty::commands::{cmd_entropy, EntropyOptions};
use uncertainty::document::InputDocument;
use uncertainty::haar::{sample_density, RngSeed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rho = sample_density(3, &mut RngSeed(3).rng())?;
    let doc = InputDocument::from_density(&rho);
    let path = std::env::temp_dir().join("uncertainty-example-density.json");
    std::fs::write(&path, doc.to_json())?;

    let (read, bytes) = InputDocument::read(&path)?;
    println!("read a {} document, {} bytes", read.kind(), bytes.len());

    let report = cmd_entropy(Path::new(&path), &EntropyOptions::default())?;
    print!("{}", report.to_text());
    std::fs::remove_file(&path)?;
    Ok(())
}
