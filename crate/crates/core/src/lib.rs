//! Gaussian-integer arithmetic and exact algorithms for Cantor-type sets
//! generated by iterated function systems `z ↦ (z + t)/β` over `ℚ(i)`.
//!
//! The arithmetic core ([`GaussInt`], [`GaussRat`], [`height()`]) is generic
//! over the scalar type; everything built on factorization uses the
//! arbitrary-precision aliases [`GaussInteger`] and [`GaussRational`].

pub mod arith;
pub mod error;
pub mod family;
pub mod graph;
pub mod height;
pub mod ifs;
pub mod order;
pub mod primes;
pub mod scalar;
pub mod search;
pub mod zi;

use num_bigint::BigInt;

pub use error::{Error, Result};
pub use family::{Slot, SmoothFamily};
pub use graph::{
    build_ball_graph, build_state_graph, coding_of, cylinder_graph, is_member, live_graph, prune_to_live,
    reachable_graph, StateGraph,
};
pub use height::{height, height_conjugate_pair, height_of_prime, height_prime_power};
pub use ifs::{BoxCover, Coding, DimensionReport, IfsSpec, DEFAULT_NODE_CAP};
pub use order::{
    crt_order, euler_phi_zi, mod_pow, ord, order_lower_bound, LowerBoundCertificate,
    OrderLiftData, Residue, RootTwoRational,
};
pub use primes::{classify, factor, is_prime, two_squares, valuation, Factorization, PrimeClass};
pub use scalar::Scalar;
pub use search::{
    count_lattice, counting_fit, enumerate_denominators, finiteness_search,
    members_with_denominator, period_height_report, CountRow, CountingFit, Denominator,
    FoundRational, Member, PeriodHeightReport, PeriodHeightRow, SearchReport,
};
pub use zi::{GaussInt, GaussRat, Unit};

pub type GaussInteger = GaussInt<BigInt>;
pub type GaussRational = GaussRat<BigInt>;
