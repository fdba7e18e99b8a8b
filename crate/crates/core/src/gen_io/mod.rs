//! Seeded instance generation, JSON formats and DOT export.

mod dot;
mod generate;
mod json;

pub use dot::to_dot;
pub use generate::{
    random_cpo, random_dataflow, random_inflationary_map, random_override_selector, random_poset,
    random_table_expander, GenConfig,
};
pub use json::{
    parse_dataflow, parse_h_table, parse_poset, parse_selector, write_dataflow, write_h_table, write_poset,
    write_selector,
};
