use forcing_core::Failure;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeError {
    /// A fusion input breaks the freezing/splitting contract at (stage, node).
    #[error("fusion precondition fails at stage {stage}, node '{node}': {detail}")]
    FusionPrecondition { stage: usize, node: String, detail: String },
    /// The family cannot yield a sunflower of the requested size.
    #[error("family too small: {0}")]
    FamilyTooSmall(String),
    /// A leaf-set covers a full cone at the working depth.
    #[error("not nowhere dense: {0}")]
    NotNowhereDense(String),
    /// The instance exceeds the exhaustively-verifiable caps.
    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),
    /// A node walk ran out of splitting descendants inside the truncation.
    #[error("no split above: {0}")]
    NoSplitAbove(String),
    #[error("node '{0}' is not in the tree")]
    NodeNotInTree(String),
    #[error("{0}")]
    Config(String),
}

impl TreeError {
    pub fn code(&self) -> &'static str {
        match self {
            TreeError::FusionPrecondition { .. } => "FUSION_PRECONDITION",
            TreeError::FamilyTooSmall(_) => "FAMILY_TOO_SMALL",
            TreeError::NotNowhereDense(_) => "NOT_NOWHERE_DENSE",
            TreeError::ScaleExceeded(_) => "SCALE_EXCEEDED",
            TreeError::NoSplitAbove(_) => "NO_SPLIT_ABOVE",
            TreeError::NodeNotInTree(_) => "NODE_NOT_IN_TREE",
            TreeError::Config(_) => "CONFIG_PARSE",
        }
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Failure {
        Failure::new(e.code(), e.to_string())
    }
}
