"""Netlist text format, validation, and static analysis."""

import pytest

from qdicla.cells import CellKind
from qdicla.netlist import (
    GateInstance,
    Netlist,
    NetlistError,
    ParseError,
    PortPair,
    emit_netlist,
    enumerate_paths,
    gate_census,
    hop_census,
    parse_netlist,
    static_longest_path,
    validate,
)

GOOD = """\
module half
input a a.1 a.0
input b b.1 b.0
probe watch s.1
gate g0 AO22 s.1 a.1 b.0 a.0 b.1
gate g1 AO22 s.0 a.1 b.1 a.0 b.0
output s s.1 s.0
end
"""


def small() -> Netlist:
    return parse_netlist(GOOD)


def test_parse_good_text():
    n = small()
    assert n.name == "half"
    assert [p.label for p in n.input_pairs] == ["a", "b"]
    assert n.input_pairs[0].rails == ("a.1", "a.0")
    assert n.output_pairs == (PortPair("s", "s.1", "s.0"),)
    assert n.probes == {"watch": "s.1"}
    assert len(n.gates) == 2
    g = n.gates[0]
    assert (g.gid, g.kind, g.output) == ("g0", CellKind.AO22, "s.1")
    assert g.inputs == ("a.1", "b.0", "a.0", "b.1")


def test_comments_and_blank_lines_ignored():
    text = "# header\n\nmodule m\ninput a a.1 a.0\n  # indented comment\n" \
           "gate g0 BUF x a.1\noutput o x a.0\nend\n"
    n = parse_netlist(text)
    assert n.name == "m"
    assert len(n.gates) == 1


def test_round_trip_is_stable():
    n = small()
    text = emit_netlist(n)
    again = parse_netlist(text)
    assert n.structurally_equal(again)
    assert emit_netlist(again) == text


def test_emit_orders_gates_topologically():
    # g1 listed before its driver g0; emitter must flip them
    n = Netlist(
        name="m",
        input_pairs=(PortPair("a", "a.1", "a.0"),),
        output_pairs=(PortPair("o", "y", "a.0"),),
        gates=(
            GateInstance("g1", CellKind.BUF, "y", ("x",)),
            GateInstance("g0", CellKind.INV, "x", ("a.1",)),
        ),
        probes={},
    )
    lines = emit_netlist(n).splitlines()
    gate_lines = [l for l in lines if l.startswith("gate")]
    assert gate_lines[0].startswith("gate g0")
    assert gate_lines[1].startswith("gate g1")


def test_emit_sorts_probes_by_label():
    n = small()
    n.probes.clear()
    n.probes.update({"z": "s.1", "a": "s.0", "m": "a.1"})
    lines = [l for l in emit_netlist(n).splitlines() if l.startswith("probe")]
    assert lines == ["probe a s.0", "probe m a.1", "probe z s.1"]


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("gate g1 AO22 y a b c\nend\n", "line 1: expected 'module"),
        ("module m\ngate g1 AO22 y a.1 a.0 b.1\nend\n",
         "line 2: AO22 expects 4 inputs, got 3"),
        ("module m\nwire x\nend\n", "line 2: unknown directive 'wire'"),
        ("module m\ngate g1 NAND9 y a b\nend\n",
         "line 2: unknown cell kind 'NAND9'"),
        ("module m\nmodule n\nend\n", "line 2: duplicate module"),
        ("module m\ninput a a.1\nend\n", "line 2: input takes a label"),
        ("module m\nend\nwhat\n", "line 3: content after 'end'"),
        ("module m\nprobe p x\nprobe p y\nend\n",
         "line 3: duplicate probe label"),
        ("module m\ninput a a.1 a.0\n", "missing 'end'"),
        ("module m\ninput a a,1 a.0\nend\n", "illegal net id 'a,1'"),
    ],
)
def test_parse_errors_carry_line_numbers(text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_netlist(text)
    assert fragment in str(exc.value)


def test_parse_rejects_undeclared_references():
    with pytest.raises(ParseError) as exc:
        parse_netlist("module m\ninput a a.1 a.0\ngate g0 BUF x ghost\n"
                      "output o x a.0\nend\n")
    assert "undeclared net 'ghost'" in str(exc.value)


def test_validate_clean():
    report = validate(small())
    assert report.ok
    assert report.infos == []


def test_validate_multiple_drivers():
    n = small()
    gates = n.gates + (GateInstance("g9", CellKind.BUF, "s.1", ("a.1",)),)
    bad = Netlist(n.name, n.input_pairs, n.output_pairs, gates, dict(n.probes))
    report = validate(bad)
    assert any(i.code == "duplicate-driver" for i in report.errors)


def test_validate_gate_driving_input_rail():
    n = small()
    gates = n.gates + (GateInstance("g9", CellKind.BUF, "a.1", ("s.1",)),)
    bad = Netlist(n.name, n.input_pairs, n.output_pairs, gates, dict(n.probes))
    report = validate(bad)
    assert any("input rail" in i.message for i in report.errors)


def test_validate_undriven_reference():
    n = parse_netlist(GOOD.replace("output s s.1 s.0", "output s s.1 s.0\n"
                                   "output t s.1 a.0"))
    assert validate(n).ok
    bad = Netlist(n.name, n.input_pairs,
                  n.output_pairs + (PortPair("u", "nowhere", "a.0"),),
                  n.gates, dict(n.probes))
    report = validate(bad)
    assert any(i.code == "undriven" for i in report.errors)


def test_validate_cycle():
    n = Netlist(
        name="loop",
        input_pairs=(PortPair("a", "a.1", "a.0"),),
        output_pairs=(PortPair("o", "x", "a.0"),),
        gates=(
            GateInstance("g0", CellKind.AND2, "x", ("a.1", "y")),
            GateInstance("g1", CellKind.BUF, "y", ("x",)),
        ),
        probes={},
    )
    report = validate(n)
    assert any(i.code == "cycle" for i in report.errors)
    with pytest.raises(NetlistError):
        static_longest_path(n)


def test_validate_duplicate_labels_and_gids():
    n = small()
    bad = Netlist(n.name,
                  n.input_pairs + (PortPair("a", "x.1", "x.0"),),
                  n.output_pairs,
                  n.gates + (GateInstance("g0", CellKind.BUF, "z", ("a.1",)),),
                  dict(n.probes))
    report = validate(bad)
    codes = {i.code for i in report.errors}
    assert "duplicate-label" in codes
    assert "duplicate-gate" in codes


def test_validate_unreachable_island():
    n = small()
    gates = n.gates + (
        GateInstance("h0", CellKind.INV, "i.1", ("i.0",)),
        GateInstance("h1", CellKind.INV, "i.0", ("i.1",)),
    )
    bad = Netlist(n.name, n.input_pairs, n.output_pairs, gates, dict(n.probes))
    # the island is also a cycle; break it by driving i.0 from a third gate
    gates2 = n.gates + (
        GateInstance("h0", CellKind.INV, "i.1", ("i.0",)),
        GateInstance("h1", CellKind.INV, "i.0", ("i.2",)),
        GateInstance("h2", CellKind.INV, "i.2", ("i.1",)),
    )
    bad2 = Netlist(n.name, n.input_pairs, n.output_pairs, gates2,
                   dict(n.probes))
    assert any(i.code == "cycle" for i in validate(bad).errors)
    assert any(i.code == "cycle" for i in validate(bad2).errors)


def test_validate_unreachable_from_inputs():
    n = small()
    const = GateInstance("h0", CellKind.AND2, "island", ("island2", "island2"))
    feeder = GateInstance("h1", CellKind.BUF, "island2", ("a.1",))
    ok = Netlist(n.name, n.input_pairs, n.output_pairs,
                 n.gates + (feeder, const), dict(n.probes))
    report = validate(ok)
    assert report.ok
    assert any(i.code == "dangling" and "island" in i.message
               for i in report.infos)


def test_longest_path_chain():
    n = Netlist(
        name="chain",
        input_pairs=(PortPair("a", "a.1", "a.0"),),
        output_pairs=(PortPair("o", "w", "a.0"),),
        gates=(
            GateInstance("g0", CellKind.AND2, "x", ("a.1", "a.0")),
            GateInstance("g1", CellKind.C2, "y", ("x", "a.1")),
            GateInstance("g2", CellKind.OR2, "w", ("y", "a.0")),
        ),
        probes={},
    )
    report = static_longest_path(n)
    assert report.depth == 3.0
    assert report.gates == (CellKind.AND2, CellKind.C2, CellKind.OR2)
    assert report.end_net == "w"
    assert report.census == {CellKind.AND2: 1, CellKind.C2: 1, CellKind.OR2: 1}


def test_longest_path_custom_delays():
    n = small()
    report = static_longest_path(n, delays={CellKind.AO22: 2.5})
    assert report.depth == 2.5
    assert report.gates == (CellKind.AO22,)


def test_gate_census_counts_transistors():
    census, transistors = gate_census(small())
    assert census == {CellKind.AO22: 2}
    assert transistors == 20


def test_enumerate_and_hop_census():
    n = Netlist(
        name="diamond",
        input_pairs=(PortPair("a", "a.1", "a.0"),),
        output_pairs=(PortPair("o", "m", "a.0"),),
        gates=(
            GateInstance("g0", CellKind.INV, "u", ("a.1",)),
            GateInstance("g1", CellKind.BUF, "v", ("a.1",)),
            GateInstance("g2", CellKind.AND2, "m", ("u", "v")),
        ),
        probes={},
    )
    paths = enumerate_paths(n, "a.1", "m")
    assert len(paths) == 2
    with pytest.raises(NetlistError):
        hop_census(n, "a.1", "m")
    assert hop_census(n, "u", "m") == {CellKind.AND2: 1}


def test_hop_census_single_path():
    n = small()
    assert hop_census(n, "a.1", "s.0") == {CellKind.AO22: 1}


def test_duplicated_pin_counts_one_path():
    n = Netlist(
        name="twice",
        input_pairs=(PortPair("a", "a.1", "a.0"),),
        output_pairs=(PortPair("o", "x", "a.0"),),
        gates=(GateInstance("g0", CellKind.AND2, "x", ("a.1", "a.1")),),
        probes={},
    )
    assert len(enumerate_paths(n, "a.1", "x")) == 1
