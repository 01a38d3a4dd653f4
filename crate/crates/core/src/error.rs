use thiserror::Error;

/// Failures raised by constructions and validations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cover relation contains a cycle through element {0}")]
    CycleDetected(usize),
    #[error("element index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("not a lattice: elements {a} and {b} have no {missing}")]
    NotALattice {
        a: usize,
        b: usize,
        missing: &'static str,
    },
    #[error("not distributive: {x} ∧ ({y} ∨ {z}) ≠ ({x} ∧ {y}) ∨ ({x} ∧ {z})")]
    NotDistributive { x: usize, y: usize, z: usize },
    #[error("not a frame homomorphism: {op} fails at ({a}, {b})")]
    NotAHom {
        op: &'static str,
        a: usize,
        b: usize,
    },
    #[error("not a nucleus: {law} fails at element {witness}")]
    NotANucleus { law: &'static str, witness: usize },
    #[error("size budget exceeded: predicted {predicted} > budget {budget}")]
    SizeBudgetExceeded { predicted: u64, budget: u64 },
    #[error("congruences live on different frames")]
    FrameMismatch,
    #[error("homomorphism does not match the given assemblies")]
    HomMismatch,
    #[error("frame is not the frame of opens of the given space")]
    SpaceMismatch,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("not a biframe: {0}")]
    NotABiframe(String),
    #[error("space is not T0")]
    NotT0,
    #[error("homomorphism is not injective: {0} and {1} have the same image")]
    NotInjective(usize, usize),
    #[error("no least witness above element {0}")]
    NoLeastWitness(usize),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
