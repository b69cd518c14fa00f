use std::fmt;

/// Crate-wide error type. Variants are named after the contract they enforce
/// so callers can match on the exact failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A group descriptor or Cayley-table file could not be parsed.
    MalformedSpec(String),
    /// A user-supplied multiplication table violates the group axioms.
    NonAssociativeTable(String),
    /// Requested object is outside the built-in catalog bounds.
    CatalogBoundExceeded(String),

    /// Connection set contains the identity element.
    ContainsIdentity,
    /// Connection set is not closed under inversion.
    NotSymmetric { element: usize },
    /// Connection set is not stable under conjugation.
    NotConjugationStable { element: usize, conjugator: usize },
    /// Connection set does not generate the group.
    DoesNotGenerate { reached: usize, order: usize },

    /// `galois_twist` exponent not coprime to the conductor.
    NotCoprime { k: i64, m: u64 },
    /// The prime divides the normalized conductor; the completion is ramified.
    RamifiedUnsupported { ell: u64, m_norm: u64 },
    /// Element conductor incompatible with the requested completion.
    ConductorMismatch { element_m: u64, context_m: u64 },

    /// Principal series with equal characters is not irreducible.
    EqualCharactersNotIrreducible,

    /// Operation requires a connected base graph.
    BaseDisconnected,
    /// Operation requires a connected graph.
    Disconnected,
    /// Operation requires a connected cover.
    CoverDisconnected { level: u32 },
    /// The graph is a cycle graph; sigma-series verifiers require chi != 0.
    EulerCharacteristicZero,
    /// The graph has a vertex of degree one.
    DegreeOneVertex { vertex: usize },

    /// Voltage data is not a class function on the connection set.
    Condition1 { class_rep: usize },
    /// No voltage value is a unit mod ell, so the image cannot generate.
    Condition2 { ambivalence_trap: bool },
    /// Voltage data is not antisymmetric under inversion.
    Condition3 { class_rep: usize },
    /// Voltage values must be rational integers.
    Condition4,
    /// No incongruent product tuple was found within the search bound.
    Condition5NotFound { m_max: usize },

    /// The Laurent determinant vanished identically.
    DeterminantDegenerate,
    /// The two sides of the character factorization disagree.
    FactorizationMismatch { exponent: i64, detail: String },
    /// A character polynomial is identically zero; invariants undefined.
    ZeroSeries,
    /// ell divides the character degree; invariants refuse to guess.
    DegreeDivisible { degree: u64, ell: u64 },
    /// Congruence comparison requires equal character degrees.
    DegreeMismatch { left: u64, right: u64 },
    /// Neither substitution convention reproduces the twisted determinant.
    NeitherConventionMatches,
    /// The growth formula did not stabilize below the last computed level.
    FormulaNeverStabilizes { valuations: Vec<u64> },

    /// Job configuration is invalid (line/position diagnostic included).
    Config { line: usize, message: String },
    /// Internal invariant breach; indicates a bug, not bad input.
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code contract: 2 for configuration errors, 3 for
    /// unsupported-domain refusals, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::MalformedSpec(_) => 2,
            Error::RamifiedUnsupported { .. }
            | Error::CatalogBoundExceeded(_)
            | Error::DegreeDivisible { .. } => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedSpec(m) => write!(f, "malformed group spec: {m}"),
            Error::NonAssociativeTable(m) => write!(f, "not a group table: {m}"),
            Error::CatalogBoundExceeded(m) => write!(f, "catalog bound exceeded: {m}"),
            Error::ContainsIdentity => write!(f, "connection set contains the identity"),
            Error::NotSymmetric { element } => {
                write!(f, "connection set not symmetric: inverse of element {element} missing")
            }
            Error::NotConjugationStable { element, conjugator } => write!(
                f,
                "connection set not conjugation-stable: element {element} conjugated by {conjugator} leaves the set"
            ),
            Error::DoesNotGenerate { reached, order } => {
                write!(f, "connection set generates only {reached} of {order} elements")
            }
            Error::NotCoprime { k, m } => write!(f, "{k} is not coprime to the conductor {m}"),
            Error::RamifiedUnsupported { ell, m_norm } => write!(
                f,
                "ell = {ell} divides the normalized conductor {m_norm}; ramified completions are unsupported (try an ell prime to {m_norm})"
            ),
            Error::ConductorMismatch { element_m, context_m } => {
                write!(f, "conductor {element_m} incompatible with context conductor {context_m}")
            }
            Error::EqualCharactersNotIrreducible => {
                write!(f, "principal series with equal characters is reducible")
            }
            Error::BaseDisconnected => write!(f, "base graph is disconnected"),
            Error::Disconnected => write!(f, "graph is disconnected"),
            Error::CoverDisconnected { level } => write!(f, "cover at level {level} is disconnected"),
            Error::EulerCharacteristicZero => {
                write!(f, "Euler characteristic is zero (cycle graph); verifier refuses")
            }
            Error::DegreeOneVertex { vertex } => {
                write!(f, "vertex {vertex} has degree one; verifier refuses")
            }
            Error::Condition1 { class_rep } => {
                write!(f, "condition 1 violated: value on class of {class_rep} is not class-consistent")
            }
            Error::Condition2 { ambivalence_trap } => {
                if *ambivalence_trap {
                    write!(
                        f,
                        "condition 2 violated: all values are 0 mod ell (ambivalence trap: every class in S is conjugate to its inverse, forcing beta = 0)"
                    )
                } else {
                    write!(f, "condition 2 violated: no value is a unit mod ell")
                }
            }
            Error::Condition3 { class_rep } => {
                write!(f, "condition 3 violated: value on inverse class of {class_rep} is not negated")
            }
            Error::Condition4 => write!(f, "condition 4 violated: values must be integers"),
            Error::Condition5NotFound { m_max } => {
                write!(f, "condition 5: no incongruent tuple found for lengths up to {m_max}")
            }
            Error::DeterminantDegenerate => write!(f, "determinant vanishes identically"),
            Error::FactorizationMismatch { exponent, detail } => {
                write!(f, "factorization mismatch at exponent {exponent}: {detail}")
            }
            Error::ZeroSeries => write!(f, "polynomial is identically zero; invariants undefined"),
            Error::DegreeDivisible { degree, ell } => {
                write!(f, "ell = {ell} divides the character degree {degree}; refusing")
            }
            Error::DegreeMismatch { left, right } => {
                write!(f, "character degrees differ: {left} vs {right}")
            }
            Error::NeitherConventionMatches => {
                write!(f, "neither substitution convention matches the twisted determinant")
            }
            Error::FormulaNeverStabilizes { valuations } => {
                write!(f, "growth formula never stabilizes; valuations {valuations:?}")
            }
            Error::Config { line, message } => write!(f, "config error at line {line}: {message}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for Error {}
