"""Netlist generators for the dual-rail adder family.

Every generator returns a validated `Netlist` built from the cell
catalog.  The family covers:

* early-output full adder (`gen_full_adder_eo`) and its sum-only version
  (`gen_sol_eo`),
* ripple-carry adders (`gen_rca`),
* four-bit section carry generators (`gen_scbclg`), plain or with the
  alias carry gate,
* sectioned carry-lookahead adders (`gen_scbcla`) built from one carry
  generator, three full adders and one sum-only block per section, with
  optional alias carry hops and an optional ripple-carry least
  significant section,
* fully decoded carry-lookahead adders (`gen_rcla`) where every carry
  inside a section comes from its own lookahead tree,
* dual-rail completion detectors (`gen_completion_detector`).

Net naming is positional and stable: input pairs are `a0..a{n-1}`,
`b0..`, `cin`, each label owning rails `<label>.1` and `<label>.0`;
outputs are `sum0..sum{n-1}` and `cout`.  Section-local nets carry an
`s{i}.` prefix, ripple positions inside a section a `b{j}.` prefix.
Gate ids are `g0, g1, ...` in construction order, which is already
topological.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cells import CellKind
from .netlist import GateInstance, Netlist, PortPair, require_valid

Pair = tuple[str, str]


class _Builder:
    def __init__(self, name: str) -> None:
        self.name = name
        self.inputs: list[PortPair] = []
        self.outputs: list[PortPair] = []
        self.gates: list[GateInstance] = []
        self.probes: dict[str, str] = {}

    def input_pair(self, label: str) -> Pair:
        pair = PortPair(label, f"{label}.1", f"{label}.0")
        self.inputs.append(pair)
        return pair.rails

    def gate(self, kind: CellKind, out: str, *ins: str) -> str:
        self.gates.append(GateInstance(f"g{len(self.gates)}", kind, out, ins))
        return out

    def output_pair(self, label: str, rails: Pair) -> None:
        self.outputs.append(PortPair(label, rails[0], rails[1]))

    def probe(self, label: str, net: str) -> None:
        self.probes[label] = net

    def netlist(self) -> Netlist:
        n = Netlist(
            name=self.name,
            input_pairs=tuple(self.inputs),
            output_pairs=tuple(self.outputs),
            gates=tuple(self.gates),
            probes=self.probes,
        )
        require_valid(n)
        return n


# ---------------------------------------------------------------------------
# leaf blocks

def _fa(nb: _Builder, pfx: str, a: Pair, b: Pair, c: Pair,
        s: Pair, cout: Pair) -> None:
    """Early-output full adder, six AO22 gates.

    The carry gates fire from (a, b) alone in the generate and kill
    cases, one gate after the inputs; the carry-in only matters when the
    bit propagates, and then it crosses exactly one gate per rail.
    """
    a1, a0 = a
    b1, b0 = b
    c1, c0 = c
    p1 = nb.gate(CellKind.AO22, f"{pfx}P1", a1, b0, a0, b1)
    p0 = nb.gate(CellKind.AO22, f"{pfx}P0", a1, b1, a0, b0)
    nb.gate(CellKind.AO22, s[0], p1, c0, p0, c1)
    nb.gate(CellKind.AO22, s[1], p0, c0, p1, c1)
    nb.gate(CellKind.AO22, cout[0], a1, b1, p1, c1)
    nb.gate(CellKind.AO22, cout[1], a0, b0, p1, c0)


def _sol(nb: _Builder, pfx: str, a: Pair, b: Pair, c: Pair, s: Pair) -> None:
    """Sum-only logic: the full adder without its two carry gates."""
    a1, a0 = a
    b1, b0 = b
    c1, c0 = c
    p1 = nb.gate(CellKind.AO22, f"{pfx}P1", a1, b0, a0, b1)
    p0 = nb.gate(CellKind.AO22, f"{pfx}P0", a1, b1, a0, b0)
    nb.gate(CellKind.AO22, s[0], p1, c0, p0, c1)
    nb.gate(CellKind.AO22, s[1], p0, c0, p1, c1)


def _chain(nb: _Builder, pfx: str, tag: str, props: list[str],
           base: str) -> str:
    """C-element ladder C2(props[-1], ... C2(props[0], base) ...).

    From the all-low state each element behaves as an AND while the
    phase rises, and it keeps the term from releasing until every level
    has returned to zero.
    """
    net = base
    for depth, p in enumerate(props):
        net = nb.gate(CellKind.C2, f"{pfx}{tag}_{depth}", p, net)
    return net


def _pgk(nb: _Builder, pfx: str, a: list[Pair], b: list[Pair],
         m: int) -> tuple[list[str], list[str], list[str], str]:
    """Per-bit generate/kill/propagate terms plus the all-propagate probe."""
    g = [nb.gate(CellKind.AND2, f"{pfx}g{i}", a[i][0], b[i][0])
         for i in range(m)]
    k = [nb.gate(CellKind.AND2, f"{pfx}k{i}", a[i][1], b[i][1])
         for i in range(m)]
    p = [nb.gate(CellKind.AO22, f"{pfx}p{i}",
                 a[i][0], b[i][1], a[i][1], b[i][0]) for i in range(m)]
    n = nb.gate(CellKind.AND4, f"{pfx}N", p[3], p[2], p[1], p[0])
    return g, k, p, n


def _scbclg(nb: _Builder, pfx: str, a: list[Pair], b: list[Pair],
            cin: Pair, carry: Pair, alias: bool,
            alias_out: Pair | None) -> None:
    """Four-bit section carry generator.

    Both carry rails take the shape OR(block-term, C2(N, cin-rail)): the
    block-generate side collects g3 and three C-element ladders folding
    the propagate prefix onto the lower generates, the block-kill side
    mirrors it with the kill terms.  With `alias` set, an extra AO22-class
    gate computes the same function as the carry rail without the
    C-element, giving an unindicated but single-gate carry hop.
    """
    g, k, p, n = _pgk(nb, pfx, a, b, 4)

    def block(tag: str, terms: list[str]) -> str:
        t2 = _chain(nb, pfx, f"{tag}2", [p[3]], terms[2])
        t1 = _chain(nb, pfx, f"{tag}1", [p[2], p[3]], terms[1])
        t0 = _chain(nb, pfx, f"{tag}0", [p[1], p[2], p[3]], terms[0])
        out = "G" if tag == "tg" else "K"
        return nb.gate(CellKind.OR4, f"{pfx}{out}", terms[3], t2, t1, t0)

    big_g = block("tg", g)
    big_k = block("tk", k)
    cg = nb.gate(CellKind.C2, f"{pfx}cg", n, cin[0])
    ck = nb.gate(CellKind.C2, f"{pfx}ck", n, cin[1])
    nb.gate(CellKind.OR2, carry[0], big_g, cg)
    nb.gate(CellKind.OR2, carry[1], big_k, ck)
    if alias:
        assert alias_out is not None
        nb.gate(CellKind.ALIAS, alias_out[0], n, cin[0], big_g, big_g)
        nb.gate(CellKind.ALIAS, alias_out[1], n, cin[1], big_k, big_k)


def _rclag(nb: _Builder, pfx: str, a: list[Pair], b: list[Pair],
           cin: Pair, carry: Pair) -> list[Pair]:
    """Four-bit lookahead block decoding every internal carry.

    Returns the carry pairs feeding bits 1..3; the block carry-out goes
    to `carry`.  Each lookahead term gets its own C-element ladder, so
    the four trees stay independent.
    """
    g, k, p, n = _pgk(nb, pfx, a, b, 4)

    def rail(tag: str, terms: list[str], cin_rail: str,
             out: list[str]) -> None:
        nb.gate(CellKind.OR2, out[0], terms[0],
                _chain(nb, pfx, f"{tag}c1", [p[0]], cin_rail))
        nb.gate(CellKind.OR3, out[1], terms[1],
                _chain(nb, pfx, f"{tag}c2g", [p[1]], terms[0]),
                _chain(nb, pfx, f"{tag}c2c", [p[0], p[1]], cin_rail))
        nb.gate(CellKind.OR4, out[2], terms[2],
                _chain(nb, pfx, f"{tag}c3g", [p[2]], terms[1]),
                _chain(nb, pfx, f"{tag}c3h", [p[1], p[2]], terms[0]),
                _chain(nb, pfx, f"{tag}c3c", [p[0], p[1], p[2]], cin_rail))
        blk = nb.gate(
            CellKind.OR4, f"{pfx}{'G' if tag == 'tg' else 'K'}", terms[3],
            _chain(nb, pfx, f"{tag}c4g", [p[3]], terms[2]),
            _chain(nb, pfx, f"{tag}c4h", [p[2], p[3]], terms[1]),
            _chain(nb, pfx, f"{tag}c4i", [p[1], p[2], p[3]], terms[0]))
        hop = nb.gate(CellKind.C2, f"{pfx}{tag}hop", n, cin_rail)
        nb.gate(CellKind.OR2, out[3], blk, hop)

    ones = [f"{pfx}c{j}.1" for j in range(1, 4)] + [carry[0]]
    zeros = [f"{pfx}c{j}.0" for j in range(1, 4)] + [carry[1]]
    rail("tg", g, cin[0], ones)
    rail("tk", k, cin[1], zeros)
    return [(ones[j], zeros[j]) for j in range(3)]


# ---------------------------------------------------------------------------
# standalone leaf generators

def gen_full_adder_eo() -> Netlist:
    nb = _Builder("fa")
    a = nb.input_pair("a")
    b = nb.input_pair("b")
    c = nb.input_pair("cin")
    _fa(nb, "", a, b, c, ("sum.1", "sum.0"), ("cout.1", "cout.0"))
    nb.output_pair("sum", ("sum.1", "sum.0"))
    nb.output_pair("cout", ("cout.1", "cout.0"))
    return nb.netlist()


def gen_sol_eo() -> Netlist:
    nb = _Builder("sol")
    a = nb.input_pair("a")
    b = nb.input_pair("b")
    c = nb.input_pair("cin")
    _sol(nb, "", a, b, c, ("sum.1", "sum.0"))
    nb.output_pair("sum", ("sum.1", "sum.0"))
    return nb.netlist()


def gen_rca(width: int) -> Netlist:
    """Plain ripple-carry adder from early-output full adders."""
    if width < 1:
        raise ValueError(f"width must be positive, got {width}")
    nb = _Builder(f"rca{width}")
    a = [nb.input_pair(f"a{i}") for i in range(width)]
    b = [nb.input_pair(f"b{i}") for i in range(width)]
    carry = nb.input_pair("cin")
    for i in range(width):
        nxt = ("cout.1", "cout.0") if i == width - 1 else \
            (f"b{i}.c1", f"b{i}.c0")
        _fa(nb, f"b{i}.", a[i], b[i], carry,
            (f"sum{i}.1", f"sum{i}.0"), nxt)
        carry = nxt
    for i in range(width):
        nb.output_pair(f"sum{i}", (f"sum{i}.1", f"sum{i}.0"))
    nb.output_pair("cout", ("cout.1", "cout.0"))
    return nb.netlist()


def gen_scbclg(section: int = 4, alias: bool = False) -> Netlist:
    """Standalone section carry generator (four-bit sections only)."""
    if section != 4:
        raise ValueError(f"section carry generators are four bits wide, "
                         f"got {section}")
    name = f"scbclg{section}" + ("_alias" if alias else "")
    nb = _Builder(name)
    a = [nb.input_pair(f"a{i}") for i in range(4)]
    b = [nb.input_pair(f"b{i}") for i in range(4)]
    cin = nb.input_pair("cin")
    alias_rails = ("cout_alias.1", "cout_alias.0") if alias else None
    _scbclg(nb, "", a, b, cin, ("cout.1", "cout.0"), alias, alias_rails)
    nb.probe("N", "N")
    nb.output_pair("cout", ("cout.1", "cout.0"))
    if alias:
        nb.output_pair("cout_alias", alias_rails)
    return nb.netlist()


# ---------------------------------------------------------------------------
# sectioned adders

def _check_sectioned(width: int, section: int) -> int:
    if section != 4:
        raise ValueError(f"sections are four bits wide, got {section}")
    if width < section or width % section:
        raise ValueError(
            f"width must be a positive multiple of {section}, got {width}")
    return width // section


def _rca_section(nb: _Builder, pfx: str, a: list[Pair], b: list[Pair],
                 cin: Pair, lo: int, carry_out: Pair) -> None:
    carry = cin
    for j in range(4):
        nxt = carry_out if j == 3 else (f"{pfx}b{j}.c1", f"{pfx}b{j}.c0")
        _fa(nb, f"{pfx}b{j}.", a[j], b[j], carry,
            (f"sum{lo + j}.1", f"sum{lo + j}.0"), nxt)
        carry = nxt


def _cla_section(nb: _Builder, pfx: str, a: list[Pair], b: list[Pair],
                 cin: Pair, lo: int, carry_out: Pair, alias: bool,
                 alias_out: Pair | None) -> None:
    """One lookahead section: carry generator, three ripple positions,
    one sum-only position under the generator's own carry."""
    _scbclg(nb, pfx, a, b, cin, carry_out, alias, alias_out)
    carry = cin
    for j in range(3):
        nxt = (f"{pfx}b{j}.c1", f"{pfx}b{j}.c0")
        _fa(nb, f"{pfx}b{j}.", a[j], b[j], carry,
            (f"sum{lo + j}.1", f"sum{lo + j}.0"), nxt)
        carry = nxt
    _sol(nb, f"{pfx}b3.", a[3], b[3], carry,
         (f"sum{lo + 3}.1", f"sum{lo + 3}.0"))


def gen_scbcla(width: int = 32, section: int = 4, alias: bool = False,
               hybrid_rca: bool = False) -> Netlist:
    """Sectioned carry-lookahead adder.

    With `alias`, every section also computes its carry through the
    single-gate alias path, and each section (except the last, whose
    primary carry is the adder's carry-out) hands the alias pair to its
    neighbour.  The last section's alias pair is still built, so all
    sections stay identical; it ends in the probe points only.  With
    `hybrid_rca`, the least significant section is replaced by a plain
    ripple section, which drops the section's carry generator.
    """
    k = _check_sectioned(width, section)
    if hybrid_rca and k < 2:
        raise ValueError("a hybrid needs at least two sections")
    name = f"scbcla{width}" + ("_alias" if alias else "") + \
        (f"_hybrid{section}" if hybrid_rca else "")
    nb = _Builder(name)
    a = [nb.input_pair(f"a{i}") for i in range(width)]
    b = [nb.input_pair(f"b{i}") for i in range(width)]
    cin = nb.input_pair("cin")

    carry = cin
    for i in range(k):
        pfx = f"s{i}."
        lo = i * section
        sa, sb = a[lo:lo + 4], b[lo:lo + 4]
        carry_out = (f"{pfx}carry1", f"{pfx}carry0")
        if hybrid_rca and i == 0:
            _rca_section(nb, pfx, sa, sb, carry, lo, carry_out)
            nb.probe(f"{pfx}carry1", carry_out[0])
            nb.probe(f"{pfx}carry0", carry_out[1])
            carry = carry_out
            continue
        alias_out = (f"{pfx}alias1", f"{pfx}alias0") if alias else None
        _cla_section(nb, pfx, sa, sb, carry, lo, carry_out, alias, alias_out)
        nb.probe(f"{pfx}N", f"{pfx}N")
        nb.probe(f"{pfx}carry1", carry_out[0])
        nb.probe(f"{pfx}carry0", carry_out[1])
        if alias:
            nb.probe(f"{pfx}alias1", alias_out[0])
            nb.probe(f"{pfx}alias0", alias_out[1])
        # the adder's carry-out is always the indicated primary carry
        carry = alias_out if alias and i < k - 1 else carry_out

    for i in range(width):
        nb.output_pair(f"sum{i}", (f"sum{i}.1", f"sum{i}.0"))
    nb.output_pair("cout", (f"s{k - 1}.carry1", f"s{k - 1}.carry0"))
    return nb.netlist()


def gen_scbcla_rca_hybrid(width: int = 32, section: int = 4,
                          alias: bool = False) -> Netlist:
    return gen_scbcla(width, section, alias=alias, hybrid_rca=True)


def gen_rcla(width: int = 32, section: int = 4,
             hybrid_rca: bool = False) -> Netlist:
    """Sectioned adder whose sections decode every carry by lookahead.

    All four sum positions are sum-only blocks; bits 1..3 consume the
    section's internally decoded carries.  There is no alias variant:
    the structure exists as the reference point the sectioned design is
    measured against.
    """
    k = _check_sectioned(width, section)
    if hybrid_rca and k < 2:
        raise ValueError("a hybrid needs at least two sections")
    name = f"rcla{width}" + (f"_hybrid{section}" if hybrid_rca else "")
    nb = _Builder(name)
    a = [nb.input_pair(f"a{i}") for i in range(width)]
    b = [nb.input_pair(f"b{i}") for i in range(width)]
    cin = nb.input_pair("cin")

    carry = cin
    for i in range(k):
        pfx = f"s{i}."
        lo = i * section
        sa, sb = a[lo:lo + 4], b[lo:lo + 4]
        carry_out = (f"{pfx}carry1", f"{pfx}carry0")
        if hybrid_rca and i == 0:
            _rca_section(nb, pfx, sa, sb, carry, lo, carry_out)
        else:
            inner = _rclag(nb, pfx, sa, sb, carry, carry_out)
            cins = [carry] + inner
            for j in range(4):
                _sol(nb, f"{pfx}b{j}.", sa[j], sb[j], cins[j],
                     (f"sum{lo + j}.1", f"sum{lo + j}.0"))
            nb.probe(f"{pfx}N", f"{pfx}N")
        nb.probe(f"{pfx}carry1", carry_out[0])
        nb.probe(f"{pfx}carry0", carry_out[1])
        carry = carry_out

    for i in range(width):
        nb.output_pair(f"sum{i}", (f"sum{i}.1", f"sum{i}.0"))
    nb.output_pair("cout", (f"s{k - 1}.carry1", f"s{k - 1}.carry0"))
    return nb.netlist()


def gen_rcla_rca_hybrid(width: int = 32, section: int = 4) -> Netlist:
    return gen_rcla(width, section, hybrid_rca=True)


def gen_completion_detector(width: int) -> Netlist:
    """Completion detector over `width` dual-rail pairs.

    ORs each pair into a validity wire, then folds the wires through a
    C-element tree (three-input elements, two-input for leftovers); the
    root is probed as `done`.  High means all pairs valid, low means all
    pairs empty, anything in between holds.
    """
    if width < 1:
        raise ValueError(f"width must be positive, got {width}")
    nb = _Builder(f"cd{width}")
    wires = []
    for i in range(width):
        x = nb.input_pair(f"x{i}")
        wires.append(nb.gate(CellKind.OR2, f"v{i}", x[0], x[1]))
    level = 0
    while len(wires) > 1:
        nxt = []
        i = 0
        while i < len(wires):
            rem = len(wires) - i
            take = 2 if rem in (2, 4) else min(3, rem)
            chunk = wires[i:i + take]
            i += take
            if take == 1:
                nxt.append(chunk[0])
                continue
            kind = CellKind.C3 if take == 3 else CellKind.C2
            nxt.append(nb.gate(kind, f"t{level}_{len(nxt)}", *chunk))
        wires = nxt
        level += 1
    nb.probe("done", wires[0])
    return nb.netlist()


# ---------------------------------------------------------------------------
# config-driven entry point

_ARCHS = ("rca", "scbcla", "rcla", "scbclg", "fa", "sol", "cd")


@dataclass(frozen=True)
class AdderConfig:
    """Design selector used by the command line and the sweep drivers."""

    arch: str = "scbcla"
    width: int = 32
    section: int = 4
    alias: bool = False
    hybrid_rca: bool = False

    def name(self) -> str:
        return generate(self).name


def generate(cfg: AdderConfig) -> Netlist:
    if cfg.arch not in _ARCHS:
        raise ValueError(f"unknown arch {cfg.arch!r}; pick one of {_ARCHS}")
    if cfg.alias and cfg.arch not in ("scbcla", "scbclg"):
        raise ValueError(f"arch {cfg.arch!r} has no alias variant")
    if cfg.hybrid_rca and cfg.arch not in ("scbcla", "rcla"):
        raise ValueError(f"arch {cfg.arch!r} has no hybrid variant")
    if cfg.arch == "rca":
        return gen_rca(cfg.width)
    if cfg.arch == "scbcla":
        return gen_scbcla(cfg.width, cfg.section, cfg.alias, cfg.hybrid_rca)
    if cfg.arch == "rcla":
        return gen_rcla(cfg.width, cfg.section, cfg.hybrid_rca)
    if cfg.arch == "scbclg":
        return gen_scbclg(cfg.section, cfg.alias)
    if cfg.arch == "fa":
        return gen_full_adder_eo()
    if cfg.arch == "sol":
        return gen_sol_eo()
    return gen_completion_detector(cfg.width)
