use crate::boxmodel::Side;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("correlation strength {0} is outside [-1, 1]")]
    CorrelationOutOfRange(f64),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("argument {0} is outside [0, 1]")]
    ArgumentOutOfRange(f64),
    #[error("entry p({output}|{input}) = {value} is negative or not finite")]
    InvalidEntry { input: usize, output: usize, value: f64 },
    #[error("outcomes for input pair {input} sum to {sum}, not 1")]
    NotNormalized { input: usize, sum: f64 },
    #[error("behaviour allows signaling; it cannot back a box instance")]
    Signaling,
    #[error("{0:?} already submitted an input to this box")]
    SideAlreadyUsed(Side),
    #[error("box instance is consumed")]
    Consumed,
    #[error("strategy has already been used")]
    StrategyReused,
    #[error("expected {expected} data bits, got {got}")]
    DataLength { expected: usize, got: usize },
    #[error("index {index} is out of range for {len} data bits")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index {0} appears more than once in the guess set")]
    DuplicateIndex(usize),
    #[error("{messages} messages requested but only {len} data bits exist")]
    TooManyMessages { messages: usize, len: usize },
    #[error("guess set has {got} indices but the game sends {expected} messages")]
    GuessSetSize { expected: usize, got: usize },
    #[error("at least one message bit is required")]
    NoMessages,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("pyramid depth {0} exceeds the supported maximum")]
    DepthTooLarge(u32),
    #[error("sufficient bound needs E > 1/sqrt(2), got {0}")]
    BoundInapplicable(f64),
    #[error("extended-precision evaluation failed")]
    Precision,
}
