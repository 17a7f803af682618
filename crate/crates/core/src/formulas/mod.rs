//! Exact closed forms for the Schlömilch-type and hypergeometric series families.

mod bessel_form;
mod chain;
mod closed;
mod family;
mod tables;

pub use bessel_form::{bessel_conversion, state_identity, Identity};
pub use chain::{chain_node, chain_nodes, ChainNode};
pub use closed::{
    closed_form, equal_state_bessel_value, n4_sum_closed, n6_sum_closed, nis1_closed,
    nis2_closed, parseval_sum_closed, pfq_reduce,
};
pub use family::{Parity, SeriesFamily};
pub(crate) use family::parse_rational;
pub use tables::{
    table_entries, table_entry, table_row_count, NormalizationCheck, TableEntry, TABLE_IDS,
};
