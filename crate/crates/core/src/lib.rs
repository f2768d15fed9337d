//! Decides whether the valuation ring of a near one-dimensional elementary
//! abelian extension in characteristic p is free over its associated order.
//!
//! Everything is generic over a signed integer scalar ([`Int`]); the aliases
//! below fix it to `i64`, which covers every modulus up to `2^32`.

pub mod assoc_order;
pub mod cli;
pub mod criteria;
pub mod digits;
pub mod error;
pub mod extension;
pub mod report;
pub mod scalar;

pub use assoc_order::{free_generator_check, membership_oracle, order_data};
pub use criteria::{
    converse_search, divisibility_test, equivalence_report, freeness, in_s_q, miyata_condition,
    Divisibility, Method,
};
pub use digits::{binomial_nonzero_mod_p, digit_leq, digits, residue};
pub use error::{Error, Result};
pub use extension::{
    d_value, epsilon_threshold, psi_action_on_rho, psi_mult, ramification_breaks, rho_valuation,
    validate_params,
};
pub use scalar::Int;

pub type PrimePower = digits::PrimePower<i64>;
pub type DigitVector = digits::DigitVector<i64>;
pub type ExtensionParams = extension::ExtensionParams<i64>;
pub type RamificationData = extension::RamificationData<i64>;
pub type RhoAction = extension::RhoAction<i64>;
pub type OrderData = assoc_order::OrderData<i64>;
pub type CoeffValuation = assoc_order::CoeffValuation<i64>;
pub type FreeGenerator = assoc_order::FreeGenerator<i64>;
pub type CriterionReport = criteria::CriterionReport<i64>;
pub type EquivalenceReport = criteria::EquivalenceReport<i64>;
pub type ConverseWitness = criteria::ConverseWitness<i64>;
/// Exact thresholds on error-term valuations.
pub type Rational = num_rational::Ratio<i64>;

/// The same computations over `i128`.
pub mod wide {
    pub type PrimePower = crate::digits::PrimePower<i128>;
    pub type ExtensionParams = crate::extension::ExtensionParams<i128>;
    pub type OrderData = crate::assoc_order::OrderData<i128>;
    pub type Rational = num_rational::Ratio<i128>;
}
