//! Networks shipped with the crate, as graph-file text.

pub const SINGLE: &str = include_str!("../fixtures/single.graph");
pub const SERIES2: &str = include_str!("../fixtures/series2.graph");
pub const SERIES3: &str = include_str!("../fixtures/series3.graph");
pub const PARALLEL2: &str = include_str!("../fixtures/parallel2.graph");
pub const TRIANGLE: &str = include_str!("../fixtures/triangle.graph");
pub const BRIDGE: &str = include_str!("../fixtures/bridge.graph");
pub const COUNTEREXAMPLE: &str = include_str!("../fixtures/counterexample.graph");
pub const GREEDY_GAP: &str = include_str!("../fixtures/greedy_gap.graph");
pub const FIGURE1: &str = include_str!("../fixtures/figure1.graph");
pub const FIGURE2: &str = include_str!("../fixtures/figure2.graph");
pub const EON_PAR_COP: &str = include_str!("../fixtures/eon_par_cop.graph");
pub const EON_LON_BER_MIL: &str = include_str!("../fixtures/eon_lon_ber_mil.graph");

/// Every fixture by file stem.
pub const ALL: &[(&str, &str)] = &[
    ("single", SINGLE),
    ("series2", SERIES2),
    ("series3", SERIES3),
    ("parallel2", PARALLEL2),
    ("triangle", TRIANGLE),
    ("bridge", BRIDGE),
    ("counterexample", COUNTEREXAMPLE),
    ("greedy_gap", GREEDY_GAP),
    ("figure1", FIGURE1),
    ("figure2", FIGURE2),
    ("eon_par_cop", EON_PAR_COP),
    ("eon_lon_ber_mil", EON_LON_BER_MIL),
];
