use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operand q{index} out of range for width {width}")]
    OperandOutOfRange { index: usize, width: usize },
    #[error("gate {kind} expects {expected} operands, got {got}")]
    Arity {
        kind: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate operand q{0}")]
    DuplicateOperand(usize),
    #[error("layer {layer} already acts on q{qubit}")]
    LayerConflict { layer: usize, qubit: usize },
    #[error("layer index {0} does not exist")]
    NoSuchLayer(usize),
    #[error("circuit widths differ: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("register role of q{qubit} differs between circuits")]
    RegisterMismatch { qubit: usize },
    #[error("T metrics requested on a circuit with unlowered macro gates ({0})")]
    MacroPresent(String),
    #[error("width {width} exceeds the cap of {cap} qubits")]
    WidthCapExceeded { width: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("AQFT cutoff beta={beta} outside 2..={l}")]
    BetaOutOfRange { l: usize, beta: usize },
    #[error("memory column has {got} bits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("memory table dimensions inconsistent: {0}")]
    DimensionMismatch(String),
    #[error("ancilla q{qubit} left in |1> with probability {probability:e}")]
    AncillaNotRestored { qubit: usize, probability: f64 },
    #[error("at most {cap} qubits may be marginalised, {requested} requested")]
    TooManyQubits { requested: usize, cap: usize },
    #[error("q={q} must satisfy 0 <= q <= n={n}")]
    QOutOfRange { n: usize, q: usize },
    #[error("only {got} successful episodes, {needed} required")]
    InsufficientSuccesses { needed: usize, got: usize },
    #[error("n={n} exceeds brute-force limit {cap}")]
    NTooLarge { n: usize, cap: usize },
    #[error("phi must be nonzero")]
    PhiZero,
    #[error("delta={0} outside (0, 1]")]
    DeltaOutOfRange(f64),
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
