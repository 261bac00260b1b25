use stereohedra::bounds::BoundsError;
use stereohedra::expr::ExprError;
use stereohedra::geometry::GeometryError;
use stereohedra::groups3d::GroupError;
use stereohedra::planar::PlanarError;
use stereohedra::presets::PresetError;
use stereohedra::screw::ScrewError;
use stereohedra::stereohedron::StereoError;

/// Command failure, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Failure(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("preset {id}: expected {expected} facets, got {found}")]
    PresetMismatch {
        id: String,
        expected: usize,
        found: usize,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Failure(_) => 1,
            Self::Degenerate(_) => 2,
            Self::PresetMismatch { .. } => 3,
        }
    }

    pub fn failure(msg: impl std::fmt::Display) -> Self {
        Self::Failure(msg.to_string())
    }
}

fn geometry(e: GeometryError) -> CliError {
    match e {
        GeometryError::CoincidentPoints | GeometryError::DuplicateSite(_) => {
            CliError::Degenerate(e.to_string())
        }
        _ => CliError::failure(e),
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::NontrivialStabilizer { .. } => Self::Degenerate(e.to_string()),
            GroupError::Geometry(g) => geometry(g),
            _ => Self::failure(e),
        }
    }
}

impl From<StereoError> for CliError {
    fn from(e: StereoError) -> Self {
        match e {
            StereoError::Degenerate { .. } => Self::Degenerate(e.to_string()),
            StereoError::Group(g) => g.into(),
            StereoError::Geometry(g) => geometry(g),
            _ => Self::failure(e),
        }
    }
}

impl From<PlanarError> for CliError {
    fn from(e: PlanarError) -> Self {
        match e {
            PlanarError::Stabilizer { .. } | PlanarError::OnBoundary(_) => {
                Self::Degenerate(e.to_string())
            }
            PlanarError::Geometry(g) => geometry(g),
            _ => Self::failure(e),
        }
    }
}

impl From<PresetError> for CliError {
    fn from(e: PresetError) -> Self {
        match e {
            PresetError::Stereo(s) => s.into(),
            PresetError::Group(g) => g.into(),
            _ => Self::failure(e),
        }
    }
}

impl From<ScrewError> for CliError {
    fn from(e: ScrewError) -> Self {
        match e {
            ScrewError::Stereo(s) => s.into(),
            ScrewError::Group(g) => g.into(),
            _ => Self::failure(e),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        Self::failure(e)
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        Self::failure(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::failure(e)
    }
}
