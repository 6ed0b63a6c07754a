//! Primality, prime generation, budgeted factorization, multiplicative
//! orders and certified totient-ratio bounds.

mod factorize;
mod order;
mod primality;
mod ratio;
mod sieve;

pub use factorize::{factor, factor_power_minus_one, factor_u64, FactorBudget, FactoredInteger};
pub use order::{build_order_table, mult_order, order_divides, OrderTable};
pub use primality::{is_prime, is_prime_u64, mod_mul, mod_pow};
pub use ratio::{totient_ratio_exact, totient_ratio_interval, RatioInterval};
pub use sieve::{count_primes, sieve_primes, sieve_primes_with, simple_sieve, SieveConfig};
