//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use miqcc_core::fermion::{build_qubit_problem, parse_fcidump, EncodingSpec, Grouping, Mapping, QubitProblem};

/// Path of a file under the workspace `fixtures/` directory.
pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// The unreduced 8-qubit Jordan-Wigner H2 problem at the given bond length.
pub fn h2_problem(bond: &str) -> QubitProblem {
    let path = fixture(&format!("h2/h2_{bond}.fcidump"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let ints = parse_fcidump(&text).expect("fixture parses");
    let spec = EncodingSpec {
        mapping: Mapping::JordanWigner,
        grouping: Grouping::Abab,
        reduce_stationary: false,
    };
    build_qubit_problem(&ints, &spec, None).expect("fixture encodes")
}
