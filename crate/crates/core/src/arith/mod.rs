//! Multiplicative number theory over F_q[T]: irreducibility, factorization,
//! divisor counts, exact prime counting, and quadratic residue symbols.

mod count;
mod factor;
mod irreducible;
pub mod suite;
mod symbol;

pub use count::{count_primes, count_primes_u64, mobius, prime_count_envelope_holds};
pub use factor::{
    divisor_count, divisor_square_sum, factorize, is_perfect_square, Factorization, Factorizer,
};
pub use irreducible::{
    enumerate_primes, first_irreducible, is_irreducible, IrreducibilityTester, PrimeTable,
};
pub use symbol::{
    char_sum_over_primes, char_sum_square_case, residue_symbol, residue_symbol_euler, CharSum,
    Symbol, SymbolCtx,
};

pub(crate) use symbol::{symbol_raw, SymbolScratch};
