"""End-to-end acceptance gate.

One test per claim the workbench stands behind, each printing as a
single pass/fail line under ``pytest -v``: arithmetic correctness of
every architecture, alias carry equivalence, the structural latency
and transistor facts about the adder family, area and percentage
reproduction from the bundled reference table, delay insensitivity
under randomized delays, and the early-output witnesses with their
mutation kill checks.  All tolerances are pinned in the assertions."""

from collections import Counter

import pytest

from qdicla.cells import CellKind, cell_spec
from qdicla.generators import (
    gen_full_adder_eo,
    gen_rca,
    gen_rcla,
    gen_scbcla,
    gen_scbclg,
    gen_sol_eo,
)
from qdicla.metrics import (
    GROUP4_LATENCY_ORDER,
    area_identities,
    group4_reference_ordering,
    percentage_claims,
    plain_alias_latency_ratio,
)
from qdicla.netlist import gate_census, hop_census, static_longest_path
from qdicla.sim import SweepFail
from qdicla.verify import (
    alias_equivalence_check,
    celement_to_and2,
    drop_generate_term,
    early_output_witness,
    latency_agreement,
    oracle_exhaustive,
    oracle_random,
    qdi_fuzz,
    swap_output_rails,
)

K = CellKind
SEED = 2026


def _width4():
    # section carry generators are four bits wide by construction, so
    # they join the matrix here and only here
    return [gen_rca(4), gen_scbcla(4), gen_scbcla(4, alias=True),
            gen_rcla(4), gen_scbclg(), gen_scbclg(alias=True)]


def _width8():
    return [gen_rca(8), gen_scbcla(8), gen_scbcla(8, alias=True),
            gen_scbcla(8, hybrid_rca=True),
            gen_scbcla(8, alias=True, hybrid_rca=True),
            gen_rcla(8), gen_rcla(8, hybrid_rca=True)]


def _width32():
    return [gen_rca(32), gen_scbcla(32), gen_scbcla(32, alias=True),
            gen_scbcla(32, hybrid_rca=True),
            gen_scbcla(32, alias=True, hybrid_rca=True),
            gen_rcla(32), gen_rcla(32, hybrid_rca=True)]


def _group4():
    return [gen_scbcla(32), gen_scbcla(32, hybrid_rca=True),
            gen_scbcla(32, alias=True),
            gen_scbcla(32, alias=True, hybrid_rca=True)]


def _carry_chain(prefix: str) -> list[tuple[str, str]]:
    rails = [("cin.1", "cin.0")]
    rails += [(f"s{i}.{prefix}1", f"s{i}.{prefix}0") for i in range(7)]
    return rails


def test_criterion_01_arithmetic_oracles():
    for nl in _width4():
        res = oracle_exhaustive(nl)
        assert res.ok and res.n_ok == 512, \
            f"{nl.name}: {res.first_fail.name} at {res.first_fail_index}"
    for nl in _width8():
        res = oracle_exhaustive(nl)
        assert res.ok and res.n_ok == 131_072, \
            f"{nl.name}: {res.first_fail.name} at {res.first_fail_index}"
    for nl in _width32():
        res = oracle_random(nl, 10_000, seed=SEED)
        assert res.ok and res.n_ok == 10_000, \
            f"{nl.name}: {res.first_fail.name} at {res.first_fail_index}"


def test_criterion_02_alias_equivalence():
    eq = alias_equivalence_check(gen_scbclg(alias=True))
    assert eq.n_cases == 512
    assert eq.n_equal == 512, eq.mismatches[:3]
    assert eq.mismatches == []


def test_criterion_03_ripple_critical_path():
    nl = gen_rca(4)
    path = static_longest_path(nl)
    assert path.depth == 5.0
    assert path.census == {K.AO22: 5}
    la = latency_agreement(nl, seed=SEED, n_random=1000)
    assert la.simulated_worst == 5.0


def test_criterion_04_section_hop_structure():
    plain = gen_scbcla(32)
    alias = gen_scbcla(32, alias=True)
    for i, (in1, in0) in enumerate(_carry_chain("carry")):
        assert hop_census(plain, in1, f"s{i}.carry1") == {K.C2: 1, K.OR2: 1}
        assert hop_census(plain, in0, f"s{i}.carry0") == {K.C2: 1, K.OR2: 1}
    for i, (in1, in0) in enumerate(_carry_chain("alias")):
        assert hop_census(alias, in1, f"s{i}.alias1") == {K.ALIAS: 1}
        assert hop_census(alias, in0, f"s{i}.alias0") == {K.ALIAS: 1}
    worst_plain = latency_agreement(plain, seed=SEED,
                                    n_random=500).simulated_worst
    worst_alias = latency_agreement(alias, seed=SEED,
                                    n_random=500).simulated_worst
    assert worst_plain - worst_alias >= 6.0


def test_criterion_05_hop_transistor_economics():
    plain = gen_scbcla(32)
    alias = gen_scbcla(32, alias=True)

    def hop_transistors(nl, src, dst):
        hop = hop_census(nl, src, dst)
        return sum(cell_spec(k).transistors * n for k, n in hop.items())

    for i, (in1, in0) in enumerate(_carry_chain("carry")):
        assert hop_transistors(plain, in1, f"s{i}.carry1") == 18
        assert hop_transistors(plain, in0, f"s{i}.carry0") == 18
    for i, (in1, in0) in enumerate(_carry_chain("alias")):
        assert hop_transistors(alias, in1, f"s{i}.alias1") == 10
        assert hop_transistors(alias, in0, f"s{i}.alias0") == 10

    census_p, total_p = gate_census(plain)
    census_a, total_a = gate_census(alias)
    assert census_a - census_p == {K.ALIAS: 16}
    assert census_p - census_a == Counter()
    assert total_a - total_p == 16 * cell_spec(K.ALIAS).transistors == 160


def test_criterion_06_area_identities():
    idents = {i.name: i for i in area_identities()}
    a = idents["alias minus plain"]
    assert (a.table_delta, a.composed_delta, a.tolerance) == \
        (40.66, 40.64, 0.05)
    assert a.ok
    b = idents["regular minus hybrid, plain"]
    assert (b.table_delta, b.tolerance) == (108.26, 0.01)
    assert b.ok
    c = idents["regular minus hybrid, alias"]
    assert (c.table_delta, c.tolerance) == (113.34, 0.01)
    assert c.ok


def test_criterion_07_percentage_reproduction():
    expected = {
        "alias latency reduction": (24.6, 0.1),
        "alias area increase": (1.4, 0.1),
        "alias power increase": (0.1, 0.05),
        "hybrid latency reduction, plain": (7.0, 1.0),
        "hybrid area reduction, plain": (4.0, 1.0),
        "hybrid latency reduction, alias": (3.0, 1.0),
        "hybrid area reduction, alias": (4.0, 1.0),
        "alias area increase on hybrid": (1.5, 0.2),
        "alias power increase on hybrid": (0.1, 0.05),
        "area reduction against weak-indication": (13.0, 0.5),
        "latency reduction against recursive CLA": (16.0, 0.5),
    }
    claims = percentage_claims()
    assert {c.name: (c.claimed, c.tolerance) for c in claims} == expected
    for c in claims:
        assert c.ok, f"{c.name}: computed {c.computed} vs {c.claimed} " \
                     f"(tol {c.tolerance})"


def test_criterion_08_latency_ordering():
    worst = {}
    designs = {
        "plain": gen_scbcla(32),
        "hybrid": gen_scbcla(32, hybrid_rca=True),
        "alias": gen_scbcla(32, alias=True),
        "alias_hybrid": gen_scbcla(32, alias=True, hybrid_rca=True),
        "rcla": gen_rcla(32),
    }
    for tag, nl in designs.items():
        worst[tag] = latency_agreement(nl, seed=SEED,
                                       n_random=500).simulated_worst
    assert worst["alias_hybrid"] < worst["alias"] < worst["hybrid"] \
        < worst["plain"], worst
    assert worst["rcla"] > worst["alias"], worst
    assert group4_reference_ordering() == GROUP4_LATENCY_ORDER
    ratio = plain_alias_latency_ratio()
    assert 1.15 <= ratio <= 1.60, ratio


def test_criterion_09_randomized_delay_robustness():
    matrix = ([gen_full_adder_eo(), gen_sol_eo(), gen_rca(4),
               gen_scbclg(), gen_scbclg(alias=True)]
              + _group4() + [gen_rcla(32), gen_rcla(32, hybrid_rca=True)])
    for nl in matrix:
        rep = qdi_fuzz(nl, trials=1000, seed=SEED)
        assert rep.failures == [], f"{nl.name}: {rep.failures[:3]}"
        assert rep.indication_violations == 0, nl.name
        if nl.name == "scbclg4_alias":
            assert rep.benign_alias_fires >= 1


def test_criterion_10_early_output_witnesses():
    for nl in _group4():
        w = early_output_witness(nl)
        assert w.data_ok, f"{nl.name}: {w.withheld_status} {w.withheld_stuck}"
        assert w.completed_ok, nl.name
        assert w.rtz_ok, f"{nl.name}: {w.held_rtz_status}"

    swapped = swap_output_rails(gen_scbcla(4), "sum2")
    res = oracle_exhaustive(swapped)
    assert not res.ok and res.first_fail is SweepFail.MISMATCH

    dropped = drop_generate_term(gen_scbclg())
    res = oracle_exhaustive(dropped)
    assert not res.ok and res.first_fail is SweepFail.DEADLOCK_DATA

    ackless = celement_to_and2(gen_scbclg())
    rep = qdi_fuzz(ackless, trials=300, seed=7)
    assert not rep.failures
    assert rep.indication_violations > 0
