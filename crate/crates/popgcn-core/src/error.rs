//! Error type shared by every module in the crate.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Edge connects a node to itself.
    SelfLoop { node: usize },
    /// Edge weight is zero, negative, or not finite.
    NonPositiveWeight { i: usize, j: usize, weight: f64 },
    /// Node index outside `0..num_nodes`.
    NodeOutOfRange { index: usize, num_nodes: usize },
    /// The same unordered pair appears twice.
    DuplicateEdge { i: usize, j: usize },
    /// Permutation is not a bijection on the node indices.
    InvalidPermutation,
    /// Scaling requires a strictly positive spectral bound.
    NonPositiveLambdaMax { value: f64 },
    /// Two shapes that must agree do not.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// A configuration value violates its documented range.
    InvalidConfig { what: String },
    /// Input contains NaN or infinity.
    NonFiniteInput { what: &'static str },
    /// An ROI row has no variance, so correlations are undefined.
    ZeroVarianceRoi { roi: usize },
    /// Feature selection needs at least two classes among the labeled rows.
    DegenerateLabels,
    /// A class has too few labeled rows for the requested operation.
    TooFewPerClass {
        class: usize,
        have: usize,
        need: usize,
    },
    /// The ranking fit did not converge within its iteration budget.
    NonConvergentFit { round: usize },
    /// Feature elimination exceeded the configured round limit.
    RoundLimit { max_rounds: usize },
    /// Loss requires at least one masked node.
    EmptyMask,
    /// The training mask holds no node of this class.
    MissingClassInMask { class: usize },
    /// A label is outside `0..num_classes`.
    InvalidLabel {
        node: usize,
        label: usize,
        num_classes: usize,
    },
    /// A forward pass produced NaN or infinity.
    NonFiniteActivation { layer: usize },
    /// Training aborted on a non-finite loss.
    NonFiniteLoss { epoch: usize },
    /// Consensus over an empty member list.
    EmptyEnsemble,
    /// Failure inside one ensemble member, with the member index attached.
    Member { index: usize, source: Box<Error> },
    /// Failure inside one cross-validation fold, with the fold attached.
    Fold { fold: usize, source: Box<Error> },
    /// A class is smaller than the number of folds.
    ClassSmallerThanFolds {
        class: usize,
        size: usize,
        k: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            Error::NonPositiveWeight { i, j, weight } => {
                write!(f, "edge ({i}, {j}) has non-positive weight {weight}")
            }
            Error::NodeOutOfRange { index, num_nodes } => {
                write!(f, "node index {index} out of range for {num_nodes} nodes")
            }
            Error::DuplicateEdge { i, j } => write!(f, "duplicate edge ({i}, {j})"),
            Error::InvalidPermutation => write!(f, "permutation is not a bijection"),
            Error::NonPositiveLambdaMax { value } => {
                write!(f, "lambda_max must be positive, got {value}")
            }
            Error::DimensionMismatch {
                what,
                expected,
                got,
            } => write!(f, "{what}: expected {expected}, got {got}"),
            Error::InvalidConfig { what } => write!(f, "invalid config: {what}"),
            Error::NonFiniteInput { what } => write!(f, "{what} contains a non-finite value"),
            Error::ZeroVarianceRoi { roi } => {
                write!(f, "ROI {roi} has zero variance; correlation undefined")
            }
            Error::DegenerateLabels => write!(f, "labeled rows contain a single class"),
            Error::TooFewPerClass { class, have, need } => {
                write!(f, "class {class} has {have} labeled rows, need {need}")
            }
            Error::NonConvergentFit { round } => {
                write!(f, "ranking fit did not converge in elimination round {round}")
            }
            Error::RoundLimit { max_rounds } => {
                write!(f, "feature elimination exceeded {max_rounds} rounds")
            }
            Error::EmptyMask => write!(f, "training mask selects no nodes"),
            Error::MissingClassInMask { class } => {
                write!(f, "training mask holds no node of class {class}")
            }
            Error::InvalidLabel {
                node,
                label,
                num_classes,
            } => write!(
                f,
                "node {node} has label {label}, outside 0..{num_classes}"
            ),
            Error::NonFiniteActivation { layer } => {
                write!(f, "non-finite activation in layer {layer}")
            }
            Error::NonFiniteLoss { epoch } => write!(f, "non-finite loss at epoch {epoch}"),
            Error::EmptyEnsemble => write!(f, "consensus requires at least one member"),
            Error::Member { index, source } => write!(f, "ensemble member {index}: {source}"),
            Error::Fold { fold, source } => write!(f, "fold {fold}: {source}"),
            Error::ClassSmallerThanFolds { class, size, k } => {
                write!(f, "class {class} has {size} members, fewer than k = {k}")
            }
        }
    }
}

impl core::error::Error for Error {}
