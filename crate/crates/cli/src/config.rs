//! Pipeline configuration: TOML file, CLI overrides, digests.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use paintspace::ExtractionConfig;

/// Which 2-D space the trajectory measures are computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    BestPair,
    Lda,
}

impl Space {
    pub fn tag(self) -> &'static str {
        match self {
            Space::BestPair => "best-pair",
            Space::Lda => "lda",
        }
    }
}

impl std::str::FromStr for Space {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "best-pair" => Ok(Space::BestPair),
            "lda" => Ok(Space::Lda),
            other => Err(format!("unknown space {other:?} (best-pair|lda)")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlicConfig {
    pub k: usize,
    pub compactness: f64,
    pub iterations: usize,
}

impl Default for SlicConfig {
    fn default() -> Self {
        Self {
            k: 128,
            compactness: 10.0,
            iterations: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurvatureConfig {
    pub gamma: f64,
    pub sigma_factor: f64,
    pub min_contour_points: usize,
}

impl Default for CurvatureConfig {
    fn default() -> Self {
        Self {
            gamma: paintspace::curvature::DEFAULT_GAMMA,
            sigma_factor: paintspace::curvature::DEFAULT_SIGMA_FACTOR,
            min_contour_points: paintspace::curvature::MIN_CONTOUR_POINTS,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Manifest CSV path.
    pub manifest: PathBuf,
    /// Output directory for every artifact.
    pub out_dir: PathBuf,
    /// Seed of the split-validation generator; recorded in every report.
    pub seed: u64,
    /// Worker threads for extraction; 0 picks the rayon default.
    pub jobs: usize,
    /// Active space for the trajectory measures.
    pub space: Space,
    /// Random split repetitions for the confusion matrix.
    pub repetitions: usize,
    pub slic: SlicConfig,
    pub curvature: CurvatureConfig,
    pub glcm_levels: u16,
    pub entropy_windows: (usize, usize),
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            manifest: PathBuf::from("manifest.csv"),
            out_dir: PathBuf::from("out"),
            seed: 42,
            jobs: 0,
            space: Space::BestPair,
            repetitions: 100,
            slic: SlicConfig::default(),
            curvature: CurvatureConfig::default(),
            glcm_levels: 64,
            entropy_windows: (5, 50),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("config {}: {e}", path.display()))?;
        let config: PipelineConfig = toml::from_str(&text)
            .map_err(|e| anyhow::anyhow!("config {}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(self.slic.k >= 1, "slic.k must be >= 1");
        anyhow::ensure!(self.slic.compactness > 0.0, "slic.compactness must be > 0");
        anyhow::ensure!(self.slic.iterations >= 1, "slic.iterations must be >= 1");
        anyhow::ensure!(self.curvature.gamma > 0.0, "curvature.gamma must be > 0");
        anyhow::ensure!(
            self.curvature.sigma_factor > 0.0,
            "curvature.sigma_factor must be > 0"
        );
        anyhow::ensure!(
            (2..=256).contains(&self.glcm_levels),
            "glcm_levels must be in 2..=256"
        );
        anyhow::ensure!(self.repetitions >= 1, "repetitions must be >= 1");
        anyhow::ensure!(
            self.entropy_windows.0 >= 1 && self.entropy_windows.1 >= 1,
            "entropy windows must be >= 1"
        );
        Ok(())
    }

    pub fn extraction(&self) -> ExtractionConfig {
        ExtractionConfig {
            slic_k: self.slic.k,
            slic_compactness: self.slic.compactness,
            slic_iterations: self.slic.iterations,
            glcm_levels: self.glcm_levels,
            curvature_gamma: self.curvature.gamma,
            curvature_sigma_factor: self.curvature.sigma_factor,
            min_contour_points: self.curvature.min_contour_points,
            entropy_windows: self.entropy_windows,
        }
    }

    /// Digest of the feature-affecting parameters only. Cached feature
    /// vectors key on this, so seed or output changes never invalidate them.
    pub fn feature_digest(&self) -> String {
        let canon = format!(
            "slic:{}:{}:{}|glcm:{}|curv:{}:{}:{}|entropy:{}:{}",
            self.slic.k,
            self.slic.compactness,
            self.slic.iterations,
            self.glcm_levels,
            self.curvature.gamma,
            self.curvature.sigma_factor,
            self.curvature.min_contour_points,
            self.entropy_windows.0,
            self.entropy_windows.1,
        );
        let hash = Sha256::digest(canon.as_bytes());
        hex::encode(&hash[..8])
    }
}

/// sha256 of a byte slice, hex.
pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
