"""qdicla: a workbench for QDI dual-rail carry-lookahead adders.

Generates gate-level dual-rail adder netlists (ripple-carry, section-carry
lookahead with optional alias carry gates, recursive lookahead, hybrids),
simulates them with an event-driven 4-phase return-to-zero handshake
engine, checks delay-insensitivity properties, and reproduces the bundled
reference area/latency comparisons.
"""

from .cells import (
    ArityError,
    CatalogError,
    CellKind,
    CellSpec,
    DualRailValue,
    cell_spec,
    classify_pair,
    encode_bit,
    evaluate_cell,
)
from .generators import (
    AdderConfig,
    gen_completion_detector,
    gen_full_adder_eo,
    gen_rca,
    gen_rcla,
    gen_rcla_rca_hybrid,
    gen_scbcla,
    gen_scbcla_rca_hybrid,
    gen_scbclg,
    gen_sol_eo,
    generate,
)
from .metrics import (
    COMPONENT_AREAS,
    area_identities,
    design_summary,
    function_block_area,
    group4_overhead,
    load_reference_table,
    percentage_claims,
    section_area,
)
from .netlist import (
    GateInstance,
    Netlist,
    NetlistError,
    ParseError,
    PortPair,
    emit_netlist,
    gate_census,
    hop_census,
    parse_netlist,
    static_longest_path,
    validate,
)
from .sim import (
    CompiledDesign,
    PhaseResult,
    PhaseStatus,
    SimState,
    SweepFail,
    SweepResult,
    active_kernel,
    build_delays,
    decode_outputs,
    run_handshake_cycles,
    simulate_phase,
    sweep_vectors,
)
from .verify import (
    alias_equivalence_check,
    early_output_witness,
    latency_agreement,
    oracle_exhaustive,
    oracle_random,
    qdi_fuzz,
)

__version__ = "0.1.0"

__all__ = [
    "AdderConfig",
    "ArityError",
    "COMPONENT_AREAS",
    "CatalogError",
    "CellKind",
    "CellSpec",
    "CompiledDesign",
    "DualRailValue",
    "GateInstance",
    "Netlist",
    "NetlistError",
    "ParseError",
    "PhaseResult",
    "PhaseStatus",
    "PortPair",
    "SimState",
    "SweepFail",
    "SweepResult",
    "active_kernel",
    "alias_equivalence_check",
    "area_identities",
    "build_delays",
    "cell_spec",
    "classify_pair",
    "decode_outputs",
    "design_summary",
    "early_output_witness",
    "emit_netlist",
    "encode_bit",
    "evaluate_cell",
    "function_block_area",
    "gate_census",
    "gen_completion_detector",
    "gen_full_adder_eo",
    "gen_rca",
    "gen_rcla",
    "gen_rcla_rca_hybrid",
    "gen_scbcla",
    "gen_scbcla_rca_hybrid",
    "gen_scbclg",
    "gen_sol_eo",
    "generate",
    "group4_overhead",
    "hop_census",
    "latency_agreement",
    "load_reference_table",
    "oracle_exhaustive",
    "oracle_random",
    "parse_netlist",
    "percentage_claims",
    "qdi_fuzz",
    "run_handshake_cycles",
    "section_area",
    "simulate_phase",
    "static_longest_path",
    "sweep_vectors",
    "validate",
    "__version__",
]
