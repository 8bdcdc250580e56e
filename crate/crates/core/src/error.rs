use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid ambient context: {0}")]
    InvalidContext(String),
    #[error("label x{label} out of range 1..{n}")]
    LabelOutOfRange { label: u32, n: u32 },
    #[error("multilinearity violation: {0}")]
    Multilinear(String),
    #[error("overlap capacity {capacity} exceeds k-1 = {limit}")]
    Capacity { capacity: u32, limit: u32 },
    #[error("ambient context mismatch: {0}")]
    ContextMismatch(String),
    #[error("slot {slot} out of range 1..{n}")]
    SlotOutOfRange { slot: u32, n: u32 },
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("monomials of different type classes: {0}")]
    MixedClass(String),
    #[error("the zero element has no type class")]
    ZeroElement,
    #[error("marker multisets differ")]
    MarkerMismatch,
    #[error("inadmissible forest: {0}")]
    InvalidForest(String),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("new order is not a permutation of the orientation set")]
    NotAPermutation,
    #[error("label slot {l} out of range 1..{k}")]
    PsiSlot { l: u32, k: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
