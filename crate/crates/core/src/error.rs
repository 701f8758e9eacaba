use alloc::string::String;

/// Errors raised by the counting, engine and sampling operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A link id that does not belong to the network.
    #[error("link id {id} is not in 1..={links}")]
    InvalidLink { id: usize, links: usize },
    /// A failure order that does not cover exactly the network's links.
    #[error("failure order covers {order} links but the network has {network}")]
    OrderMismatch { order: usize, network: usize },
    /// Precondition violated by the caller, not by user input.
    #[error("contract violated: {0}")]
    Contract(&'static str),
    /// The requested mode cannot handle this network.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Full enumeration refused because the network is above the cap.
    #[error("{links} links exceeds the enumeration cap of {cap}; raise the cap or use sampling")]
    CapExceeded { links: usize, cap: usize },
    /// A count does not fit the fixed-width integers used by the hot loops.
    #[error("{0} does not fit in 128 bits")]
    Overflow(&'static str),
}
