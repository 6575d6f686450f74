//! File formats: corpus TSV, checkpoints, representation JSON lines, PCA TSV.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use mtae_core::clusterlab::PcaProjection;
use mtae_core::corpus::{parse_parallel_corpus, ExampleTuple};
use mtae_core::seqmodel::MultiTaskModel;
use mtae_core::training::ModelCheckpoint;
use serde::{Deserialize, Serialize};

pub fn read_corpus(path: &Path) -> Result<Vec<ExampleTuple>> {
    let bytes = fs::read(path).with_context(|| format!("reading corpus {}", path.display()))?;
    parse_parallel_corpus(&bytes).with_context(|| format!("parsing corpus {}", path.display()))
}

/// Writes via a sibling temporary file so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("partial");
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming {} to {}", tmp.display(), path.display()))
}

pub fn save_checkpoint(model: &MultiTaskModel, path: &Path) -> Result<()> {
    write_atomic(path, &ModelCheckpoint::from_model(model).to_bytes())
}

pub fn load_checkpoint(path: &Path) -> Result<MultiTaskModel> {
    let bytes = fs::read(path).with_context(|| format!("reading checkpoint {}", path.display()))?;
    let ckpt = ModelCheckpoint::from_bytes(&bytes).with_context(|| format!("loading {}", path.display()))?;
    Ok(ckpt.to_model()?)
}

/// One line of a representation file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationRecord {
    pub sentence: String,
    pub category: usize,
    pub vector: Vec<f64>,
}

pub fn write_representations(path: &Path, records: &[RepresentationRecord]) -> Result<()> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    write_atomic(path, &out)
}

pub fn read_representations(path: &Path) -> Result<Vec<RepresentationRecord>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RepresentationRecord = serde_json::from_str(&line)
            .with_context(|| format!("{} line {}", path.display(), i + 1))?;
        if rec.category == 0 {
            bail!("{} line {}: categories are numbered from 1", path.display(), i + 1);
        }
        out.push(rec);
    }
    if out.is_empty() {
        bail!("{} holds no representations", path.display());
    }
    Ok(out)
}

/// `category\tx\ty` rows under a header.
pub fn pca_tsv(categories: &[usize], projection: &PcaProjection) -> String {
    let mut out = String::from("category\tx\ty\n");
    for (c, [x, y]) in categories.iter().zip(&projection.coordinates) {
        out.push_str(&format!("{c}\t{x}\t{y}\n"));
    }
    out
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Pretty JSON on stdout.
pub fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    serde_json::to_writer_pretty(&mut lock, value)?;
    writeln!(lock)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mtae_core::clusterlab::pca_project_2d;

    #[test]
    fn representation_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reps.jsonl");
        let recs = vec![
            RepresentationRecord { sentence: "The dog barks.".into(), category: 2, vector: vec![0.25, -1.0 / 3.0] },
            RepresentationRecord { sentence: " ".into(), category: 14, vector: vec![0.0, 1e-300] },
        ];
        write_representations(&path, &recs).unwrap();
        assert_eq!(read_representations(&path).unwrap(), recs);
        fs::write(&path, "{\"sentence\":\"x\",\"category\":0,\"vector\":[1]}\n").unwrap();
        assert!(read_representations(&path).is_err());
        fs::write(&path, "\n").unwrap();
        assert!(read_representations(&path).is_err());
    }

    #[test]
    fn pca_rows() {
        let p = pca_project_2d(&[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(pca_tsv(&[3, 4], &p), "category\tx\ty\n3\t1\t0\n4\t-1\t0\n");
    }

    #[test]
    fn missing_checkpoint_is_an_io_error() {
        let err = load_checkpoint(Path::new("/nonexistent/model.ckpt")).unwrap_err();
        assert!(format!("{err:#}").contains("reading checkpoint"));
    }
}
