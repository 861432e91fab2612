"""Behavioral cell library for dual-rail QDI logic.

The catalog covers the gates used by the adder generators: inverters and
buffers, AND/OR gates up to four inputs, the 2-2 AND-OR compound gate
(``AO22``), its alias-carry twin (``ALIAS``), and Muller C-elements with
two or three inputs.  Each entry records the pin count, a static CMOS
transistor count, and the default propagation delay of one time unit.

Combinational kinds are pure functions of their inputs.  C-elements are
state-holding: the output goes high only when every input is high, goes
low only when every input is low, and otherwise keeps its previous value.

Dual-rail signals travel as (rail1, rail0) wire pairs; `classify_pair`
maps a pair of wire values onto the four codeword states.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence


class CatalogError(KeyError):
    """Raised when a cell kind is missing from the catalog."""


class ArityError(ValueError):
    """Raised when an input vector does not match the cell's pin count."""


class CellKind(enum.Enum):
    INV = "INV"
    BUF = "BUF"
    AND2 = "AND2"
    AND3 = "AND3"
    AND4 = "AND4"
    OR2 = "OR2"
    OR3 = "OR3"
    OR4 = "OR4"
    AO22 = "AO22"
    ALIAS = "ALIAS"
    C2 = "C2"
    C3 = "C3"

    def __str__(self) -> str:  # keeps netlist text free of "CellKind."
        return self.value


# Stable numeric codes shared with the event kernels.
KIND_CODES: dict[CellKind, int] = {k: i for i, k in enumerate(CellKind)}


class DualRailValue(enum.Enum):
    NULL = "NULL"        # spacer: both rails low
    ZERO = "ZERO"        # rail0 high
    ONE = "ONE"          # rail1 high
    INVALID = "INVALID"  # both rails high; illegal codeword

    @property
    def bit(self) -> Optional[int]:
        """Data bit carried by the pair, or None when not a valid codeword."""
        if self is DualRailValue.ONE:
            return 1
        if self is DualRailValue.ZERO:
            return 0
        return None


def classify_pair(rail1: int, rail0: int) -> DualRailValue:
    """Classify a (rail1, rail0) wire pair as a dual-rail codeword state."""
    if rail1 not in (0, 1) or rail0 not in (0, 1):
        raise ValueError(f"rail values must be 0 or 1, got ({rail1}, {rail0})")
    if rail1 and rail0:
        return DualRailValue.INVALID
    if rail1:
        return DualRailValue.ONE
    if rail0:
        return DualRailValue.ZERO
    return DualRailValue.NULL


def encode_bit(bit: int) -> tuple[int, int]:
    """Return the (rail1, rail0) encoding of a data bit."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    return (1, 0) if bit else (0, 1)


@dataclass(frozen=True)
class CellSpec:
    """Catalog entry: pin arity, transistor count, optional layout area.

    `area` stays None for every kind; the reference dataset prices whole
    function blocks, not individual gates, so no per-gate figure exists
    that would not be invented.
    """

    kind: CellKind
    arity: int
    transistors: int
    stateful: bool = False
    delay: float = 1.0
    area: Optional[float] = None


_CATALOG: dict[CellKind, CellSpec] = {
    spec.kind: spec
    for spec in (
        CellSpec(CellKind.INV, 1, 2),
        CellSpec(CellKind.BUF, 1, 4),
        CellSpec(CellKind.AND2, 2, 6),
        CellSpec(CellKind.AND3, 3, 8),
        CellSpec(CellKind.AND4, 4, 10),
        CellSpec(CellKind.OR2, 2, 6),
        CellSpec(CellKind.OR3, 3, 8),
        CellSpec(CellKind.OR4, 4, 10),
        # 2-2 AND-OR: Y = (A AND B) OR (C AND D), AOI22 core plus inverter.
        CellSpec(CellKind.AO22, 4, 10),
        # Same function and cost as AO22; kept as a distinct kind so alias
        # carry gates stay recognizable in censuses and path reports.
        CellSpec(CellKind.ALIAS, 4, 10),
        # C-elements follow the symmetric realization (4n + 4 transistors);
        # the two-input element is the 12-transistor custom cell.
        CellSpec(CellKind.C2, 2, 12, stateful=True),
        CellSpec(CellKind.C3, 3, 16, stateful=True),
    )
}


def cell_spec(kind: CellKind) -> CellSpec:
    """Look up the catalog entry for `kind`."""
    try:
        return _CATALOG[kind]
    except KeyError:
        raise CatalogError(f"unknown cell kind: {kind!r}") from None


def all_kinds() -> tuple[CellKind, ...]:
    return tuple(_CATALOG)


def evaluate_cell(kind: CellKind, inputs: Sequence[int], previous_output: int = 0) -> int:
    """Evaluate one cell.

    `previous_output` is only consulted by the stateful kinds (C2, C3);
    combinational kinds ignore it.  Inputs and outputs are wire values,
    0 or 1.
    """
    spec = cell_spec(kind)
    if len(inputs) != spec.arity:
        raise ArityError(
            f"{kind} expects {spec.arity} inputs, got {len(inputs)}"
        )
    for v in inputs:
        if v not in (0, 1):
            raise ValueError(f"wire values must be 0 or 1, got {v!r}")
    if previous_output not in (0, 1):
        raise ValueError(f"previous_output must be 0 or 1, got {previous_output!r}")

    if kind is CellKind.INV:
        return 1 - inputs[0]
    if kind is CellKind.BUF:
        return inputs[0]
    if kind in (CellKind.AND2, CellKind.AND3, CellKind.AND4):
        return int(all(inputs))
    if kind in (CellKind.OR2, CellKind.OR3, CellKind.OR4):
        return int(any(inputs))
    if kind in (CellKind.AO22, CellKind.ALIAS):
        a, b, c, d = inputs
        return (a & b) | (c & d)
    # C-elements: unanimous inputs drive the output, anything else holds.
    if all(inputs):
        return 1
    if not any(inputs):
        return 0
    return previous_output
