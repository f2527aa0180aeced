use std::fs;
use std::path::{Path, PathBuf};

use ucca_core::interchange::from_interchange_many;
use ucca_core::notation::{parse_document, ParseOptions};
use ucca_core::Passage;

use crate::InputFormat;

pub const JSON_SUFFIX: &str = ".ucca.json";

pub struct Loaded {
    pub passages: Vec<Passage>,
    pub warnings: Vec<String>,
}

/// File name without `.ucca.json` or its last extension.
pub fn stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    if let Some(s) = name.strip_suffix(JSON_SUFFIX) {
        return s.to_string();
    }
    match name.rfind('.') {
        Some(i) if i > 0 => name[..i].to_string(),
        _ => name,
    }
}

pub fn detect(path: &Path, from: Option<InputFormat>) -> InputFormat {
    from.unwrap_or_else(|| {
        if path.to_string_lossy().ends_with(JSON_SUFFIX) {
            InputFormat::Json
        } else {
            InputFormat::Text
        }
    })
}

pub fn load(path: &Path, format: InputFormat, options: &ParseOptions) -> Result<Loaded, String> {
    let shown = path.display();
    let source = fs::read_to_string(path).map_err(|e| format!("{shown}: {e}"))?;
    let loaded = match format {
        InputFormat::Text => {
            let parsed = parse_document(&source, &stem(path), options)
                .map_err(|e| format!("{shown}: {e}"))?;
            let warnings = parsed
                .iter()
                .flat_map(|p| p.warnings.iter().map(|w| format!("{shown}: warning: {w}")))
                .collect();
            Loaded {
                passages: parsed.into_iter().map(|p| p.passage).collect(),
                warnings,
            }
        }
        InputFormat::Json => Loaded {
            passages: from_interchange_many(&source).map_err(|e| format!("{shown}: {e}"))?,
            warnings: Vec::new(),
        },
    };
    if loaded.passages.is_empty() {
        return Err(format!("{shown}: no passage found"));
    }
    Ok(loaded)
}

/// Paths sorted and deduplicated, so reports come out in path order.
pub fn sorted(paths: &[PathBuf]) -> Vec<PathBuf> {
    let mut paths = paths.to_vec();
    paths.sort();
    paths.dedup();
    paths
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems() {
        assert_eq!(stem(Path::new("a/b/x.ucca.json")), "x");
        assert_eq!(stem(Path::new("x.txt")), "x");
        assert_eq!(stem(Path::new("x.y.txt")), "x.y");
        assert_eq!(stem(Path::new(".hidden")), ".hidden");
        assert_eq!(stem(Path::new("plain")), "plain");
    }
}
