//! Block coherence, POVM-based coherence, and their conversion into
//! bipartite entanglement.
//!
//! The crate is organized bottom-up:
//!
//! * [`qmat`]: dense complex matrices, Hermitian eigendecomposition, entropies,
//!   partial trace and transpose.
//! * [`measure`]: validated states, POVMs and projective measurements, block dephasing.
//! * [`naimark`]: Naimark extensions (canonical, rank-one, Fourier) and their verification.
//! * [`coherence`]: relative-entropy block coherence and POVM-based coherence.
//! * [`convert`]: the block-incoherent entangling unitary and entanglement quantifiers.
//! * [`io`] and [`repro`]: the matrix file format and the reproduction tables
//!   driven by the `cohent` CLI.
//!
//! All logarithms are base 2.

pub mod catalog;
pub mod coherence;
pub mod convert;
pub mod error;
pub mod io;
pub mod measure;
pub mod naimark;
pub mod qmat;
pub mod random;
pub mod repro;

pub use coherence::{block_coherence, is_povm_incoherent, povm_coherence, povm_coherence_via_naimark, CoherenceReport};
pub use convert::{
    build_entangling_unitary, convert, negativity, rel_ent_entanglement_converted, theorem1_check, ConversionResult,
    Sandwich, Theorem1Report,
};
pub use error::{Error, Result};
pub use measure::{validate_povm, validate_projective, DensityMatrix, Povm, ProjectiveMeasurement};
pub use naimark::{
    canonical_extension, embed_state, extract_povm_family, fourier_extension_for, fourier_family_extension,
    minimal_rank_one_extension,
    verify_extension, Embedding, KrausBlock, NaimarkExtension, VerificationReport,
};
pub use qmat::{ComplexMatrix, Spectrum};
