//! Spec documents as read and written by the command line.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::compose::{high_entropy_extractor, pipeline_extractor, HighEntropySpec, PipelineSpec};
use crate::condenser::{CondenserSpec, GuvCondenser};
use crate::designs::Design;
use crate::error::{Error, Result};
use crate::extractor::SeededFunction;
use crate::hashing::ToeplitzSpec;
use crate::trevisan::{ExtractorSpec, TrevisanExtractor};

/// Any buildable object, tagged by kind:
/// `{"kind": "trevisan", "spec": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "spec", rename_all = "kebab-case")]
pub enum SpecDocument {
    Trevisan(ExtractorSpec),
    Toeplitz(ToeplitzSpec),
    Condenser(CondenserSpec),
    HighEntropy(HighEntropySpec),
    Pipeline(PipelineSpec),
    Design(Design),
}

impl SpecDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Trevisan(_) => "trevisan",
            Self::Toeplitz(_) => "toeplitz",
            Self::Condenser(_) => "condenser",
            Self::HighEntropy(_) => "high-entropy",
            Self::Pipeline(_) => "pipeline",
            Self::Design(_) => "design",
        }
    }

    /// Canonical serialization; the spec hash is taken over these bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// The map the spec describes; condensers run in their plain form.
    pub fn seeded(&self) -> Result<Box<dyn SeededFunction + Sync>> {
        Ok(match self {
            Self::Trevisan(s) => Box::new(TrevisanExtractor::new(s.clone())?),
            Self::Toeplitz(s) => Box::new(ToeplitzSpec::new(s.n, s.m)?),
            Self::Condenser(s) => Box::new(GuvCondenser::new(s.clone())?),
            Self::HighEntropy(s) => Box::new(high_entropy_extractor(s)?),
            Self::Pipeline(s) => Box::new(pipeline_extractor(s)?),
            Self::Design(_) => {
                return Err(Error::InvalidParameters("a design is not a seeded function".into()))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trevisan::{build_trevisan, Preset};

    #[test]
    fn tagged_roundtrip_and_stable_hash() {
        let doc = SpecDocument::Trevisan(build_trevisan(Preset::Thm42, 12, 2, 0.25).unwrap());
        let json = doc.to_json();
        assert!(json.starts_with(r#"{"kind":"trevisan","spec":{"#));
        let back = SpecDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.hash(), doc.hash());
        assert_eq!(doc.hash().len(), 64);
        let t = SpecDocument::Toeplitz(ToeplitzSpec::new(4, 2).unwrap());
        assert_eq!(t.to_json(), r#"{"kind":"toeplitz","spec":{"n":4,"m":2}}"#);
    }
}
