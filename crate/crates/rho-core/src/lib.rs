//! Exact counting of the solutions of x_1^2 + ... + x_k^2 = lambda (mod n).
//!
//! The count rho_{k,lambda}(n) is multiplicative in n, reduces to prime
//! powers, and at a prime power admits closed forms needing only a constant
//! number of big-integer operations, however large k, s and lambda are.
//! This crate implements that fast engine together with deliberately
//! independent slower engines used to verify it:
//!
//! - [`closed_form`]: O(1)-operation closed forms (the production engine);
//! - [`recursive_form`]: the Theta(s) recursion sums the closed forms were
//!   derived from;
//! - [`reference`]: brute-force enumeration, cyclic-convolution counting,
//!   circulant powering, and two exponential-sum identities in floats;
//! - [`base_cases`]: exact Lebesgue and mod-8 tables everything rests on;
//! - [`composer`]: factorization and the multiplicative product over prime
//!   powers, plus the structured-integer input grammar;
//! - [`numbers`]: bignum primitives and the symbolic value type.

pub mod base_cases;
pub mod closed_form;
pub mod composer;
pub mod error;
pub mod numbers;
pub mod recursive_form;
pub mod reference;

pub use error::{Error, Result};
pub use numbers::{GeomTerm, Int, Natural, OpCount, PowerTerm, RhoValue, Term};

pub use closed_form::{rho_prime_power, rho_prime_power_lambda, LambdaClass, PrimePowerQuery};
pub use composer::{
    factorize, parse_modulus, parse_structured, rho_general, Engine, Factorization, GeneralResult,
    StructuredInt,
};
pub use recursive_form::{rho_rec, rho_rec_mod, rho_rec_query};
