import numpy as np
import pytest

from qdicla.generators import (
    AdderConfig,
    gen_rca,
    gen_scbcla,
    gen_scbclg,
    generate,
)
from qdicla.netlist import require_valid
from qdicla.sim import SweepFail
from qdicla.verify import (
    alias_equivalence_check,
    celement_to_and2,
    directed_vectors,
    drop_generate_term,
    early_output_witness,
    exhaustive_vectors,
    latency_agreement,
    oracle_exhaustive,
    oracle_random,
    qdi_fuzz,
    random_vectors,
    swap_output_rails,
)


class TestVectorFamilies:
    def test_exhaustive_covers_everything(self):
        a, b, cin = exhaustive_vectors(4)
        assert len(a) == len(b) == len(cin) == 512
        triples = set(zip(a.tolist(), b.tolist(), cin.tolist()))
        assert len(triples) == 512

    def test_exhaustive_width_bound(self):
        with pytest.raises(ValueError):
            exhaustive_vectors(16)

    def test_random_is_seeded(self):
        v1 = random_vectors(32, 50, seed=9)
        v2 = random_vectors(32, 50, seed=9)
        for x, y in zip(v1, v2):
            assert np.array_equal(x, y)

    def test_directed_family(self):
        vecs = directed_vectors(32)
        mask = (1 << 32) - 1
        assert (mask, 0, 0) in vecs and (mask, 0, 1) in vecs
        assert (mask, 1, 0) in vecs          # generate decided at bit 0
        assert (mask ^ 1, 0, 1) in vecs      # kill decided at bit 0


class TestOracles:
    @pytest.mark.parametrize("netlist", [
        gen_rca(4),
        gen_scbcla(4),
        gen_scbcla(4, alias=True),
        generate(AdderConfig(arch="rcla", width=4)),
    ], ids=lambda nl: nl.name)
    def test_exhaustive_width4(self, netlist):
        res = oracle_exhaustive(netlist)
        assert res.ok and res.n_ok == 512

    def test_random_width32(self):
        res = oracle_random(gen_scbcla(32, alias=True), count=300, seed=11)
        assert res.ok and res.n_ok == 300

    def test_latency_agreement_rca4(self):
        rep = latency_agreement(gen_rca(4), n_random=64)
        assert rep.ok and rep.static_depth == 5.0

    def test_latency_agreement_needs_directed(self):
        # random vectors land at 20 or less on this shape; only the
        # directed bit-0 decision reaches the static depth of 22
        rep = latency_agreement(gen_scbcla(32), seed=3, n_random=200)
        assert rep.static_depth == 22.0
        assert rep.simulated_worst == 22.0


class TestAliasEquivalence:
    def test_all_512_cases(self):
        rep = alias_equivalence_check(gen_scbclg(alias=True))
        assert rep.ok
        assert rep.n_cases == 512 and rep.n_equal == 512
        assert rep.mismatches == []

    def test_sectioned_sample(self):
        vecs = [(0x00FF00FF, 0x0F0F0F0F, 1), (0, 0, 0),
                (0xFFFFFFFF, 1, 0), (0xFFFFFFFF, 0, 1)]
        rep = alias_equivalence_check(gen_scbcla(32, alias=True),
                                      vectors=vecs)
        assert rep.ok and rep.n_cases == len(vecs)

    def test_plain_design_rejected(self):
        with pytest.raises(ValueError):
            alias_equivalence_check(gen_scbclg())


WITNESS_DESIGNS = [
    gen_rca(4),
    gen_scbcla(32),
    gen_scbcla(32, alias=True),
    gen_scbcla(32, hybrid_rca=True),
    gen_scbcla(32, alias=True, hybrid_rca=True),
    gen_scbclg(alias=True),
]


class TestWitnesses:
    @pytest.mark.parametrize("netlist", WITNESS_DESIGNS,
                             ids=lambda nl: nl.name)
    def test_early_output_and_held_return(self, netlist):
        rep = early_output_witness(netlist)
        assert rep.data_ok, (rep.withheld_status, rep.withheld_stuck)
        assert rep.completed_ok
        assert rep.rtz_ok, rep.held_rtz_status
        assert rep.ok

    def test_adders_stall_only_on_sum0(self):
        rep = early_output_witness(gen_scbcla(32, alias=True))
        assert rep.withheld_stuck == ("sum0",)

    def test_carry_generator_completes_outright(self):
        rep = early_output_witness(gen_scbclg(alias=True))
        assert rep.expected_stuck == ()
        assert rep.withheld_stuck == ()


class TestFuzz:
    def test_clean_design_stays_clean(self):
        rep = qdi_fuzz(gen_scbcla(8, alias=True), trials=40, seed=5)
        assert rep.ok
        assert rep.cycles == 80
        assert rep.indication_violations == 0

    def test_observer_fires_benignly(self):
        rep = qdi_fuzz(gen_scbclg(alias=True), trials=100, seed=2)
        assert rep.ok
        assert rep.benign_alias_fires >= 1

    def test_fuzz_is_seeded(self):
        r1 = qdi_fuzz(gen_scbclg(), trials=25, seed=13)
        r2 = qdi_fuzz(gen_scbclg(), trials=25, seed=13)
        assert r1.benign_alias_fires == r2.benign_alias_fires
        assert r1.failures == r2.failures


class TestMutations:
    def test_swapped_rails_caught_by_oracle(self):
        bad = swap_output_rails(gen_rca(4), "sum2")
        require_valid(bad)
        res = oracle_exhaustive(bad)
        assert not res.ok
        assert res.first_fail is SweepFail.MISMATCH

    def test_swapped_rails_caught_at_width32(self):
        bad = swap_output_rails(gen_scbcla(32, alias=True), "sum17")
        res = oracle_random(bad, count=200, seed=21)
        assert not res.ok
        assert res.first_fail is SweepFail.MISMATCH

    def test_dropped_or_term_deadlocks(self):
        bad = drop_generate_term(gen_scbclg())
        require_valid(bad)
        res = oracle_exhaustive(bad)
        assert not res.ok
        assert res.first_fail is SweepFail.DEADLOCK_DATA
        # a=8, b=8: generate at the top bit is the dropped term
        a, b, cin = exhaustive_vectors(4)
        idx = res.first_fail_index
        assert (a[idx], b[idx]) == (8, 8)

    def test_weakened_acknowledgment_races(self):
        bad = celement_to_and2(gen_scbclg())
        require_valid(bad)
        rep = qdi_fuzz(bad, trials=300, seed=7)
        # the sums still decode; only the race monitor sees the fault
        assert not rep.failures
        assert rep.indication_violations > 0

    def test_intact_design_never_races(self):
        rep = qdi_fuzz(gen_scbclg(), trials=300, seed=7)
        assert rep.indication_violations == 0

    @pytest.mark.parametrize("mutate", [
        celement_to_and2, drop_generate_term,
    ], ids=["and2", "drop"])
    def test_mutations_need_matching_gates(self, mutate):
        with pytest.raises(ValueError):
            mutate(gen_rca(4))

    def test_swap_needs_existing_label(self):
        with pytest.raises(ValueError):
            swap_output_rails(gen_rca(4), "sum9")
