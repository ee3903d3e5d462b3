//! Benchmark instance families: G-Set Max-Cut graphs, random NAE-3SAT at
//! the critical clause ratio, and SK spin glasses, plus file I/O.

pub mod gset;
pub mod io;
pub mod nae3sat;
pub mod sk;

pub use gset::{cut_value, maxcut_to_ising, parse_gset, GsetGraph};
pub use io::{load_instance, save_instance, Family, Instance};
pub use nae3sat::{nae3sat_generate, nae3sat_to_ising, unsat_count, NaeFormula};
pub use sk::{sk_generate, SkInstance};
