//! Multidimensional convolutional codes over finite fields.
//!
//! Exact arithmetic in GF(p^e) ([`galois`]), sparse multivariate polynomial
//! matrices ([`multipoly`]), superregular constant matrices ([`superreg`]),
//! MDS constructions with hypothesis-checking certificates ([`codes`]) and a
//! bounded brute-force free-distance oracle ([`distance`]).
//!
//! ```
//! use mdconv::{construct_mds_rate_1n, make_field, SuperregularSource};
//!
//! let f = make_field(7, 1).unwrap();
//! let (code, cert) = construct_mds_rate_1n(&f, 2, 3, 1, &SuperregularSource::Cauchy).unwrap();
//! assert!(cert.is_certified());
//! assert_eq!(cert.certified_distance, Some(9));
//! assert_eq!(code.generator.weight(), 9);
//! ```

pub mod codes;
pub mod distance;
pub mod error;
pub mod galois;
pub mod multipoly;
pub mod selftest;
mod subsets;
pub mod superreg;

pub use codes::{
    certify, certify_with, construct_mds_rate_1n, construct_mds_staircase, construct_mds_staircase_with,
    phi_flatten, phi_lift, singleton_bound, singleton_witness, staircase_distance_bound, support_count,
    support_count_identity_check, CodeDescriptor, FlattenedMatrix, Hypothesis, MdsCertificate,
    SingletonWitness, SuperregularSource, TheoremTag, Verdict,
};
pub use distance::{
    codeword_weight_profile, default_cap, encode, free_distance_estimate, free_distance_estimate_par,
    DistanceReport,
};
pub use error::{Error, Result};
pub use galois::{make_field, FieldElement, FieldSpec, FiniteField};
pub use multipoly::{Degree, Exponents, PolyMatrix, Polynomial, RawPolynomial};
pub use subsets::binomial;
pub use superreg::{
    cauchy_matrix, canonical_cauchy, is_superregular, is_superregular_par, random_superregular, total_minors,
    ConstMatrix, FailingMinor, SuperregularityReport,
};
