"""
Built-in Code Catalog.

Reference codes with their published brackets:

* ``eacq-9-1-3``    -- the Shor code with three of its stabilizer
  dimensions moved into a classical [8,3] code: ``[[9,1:3,3;0]]``.
* ``eacq-8-1-3-1``  -- an eight-qubit code using one ebit:
  ``[[8,1:3,3;1]]``.
* ``eacq-63-21-12`` -- every ebit pair of the BCH-derived EA-CSS code
  moved into the classical stabilizer: ``[[63,21:12,7;6]]``.
* ``shor-9-1-3``, ``ea-css-63-21-6`` -- the EAQECC ancestors.
* ``classical-8-3-z`` -- ``Ĥ = (I|0)`` with the [8,3] code, which acts as
  the classical code on Z-basis states.

The registry reports published brackets.  Computed over the matrices as
printed, both small EACQ codes have distance 2: a Y error and an X error
on another qubit share a syndrome and their product flips a classical
codeword (``IIIIIYIIY`` and ``IYIIIIYI`` are minimum-weight witnesses).
Single X and Z errors stay correctable.

**BCH construction.**  GF(2^6) is built with the primitive polynomial
``x^6 + x + 1`` (galois).  The generator polynomial is the lcm of the
minimal polynomials of ``alpha^1 .. alpha^8``; the cyclotomic cosets of
1, 3, 5 and 7 mod 63 each have six elements, so ``deg g = 24`` and
``k = 39``.  Row ``i`` of the parity-check matrix holds the coefficients
of ``h(x) = (x^63 - 1) / g(x)``, highest degree first, starting at
column ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, Optional

import galois
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from eacq.code import CodeConstructionError, EacqCode, build, enhance
from eacq.gf2core import DependentRowsError, as_bitmat, identity, rank
from eacq.journal import JournalEventType, RunJournal
from eacq.models import CodeParams


# ---------------------------------------------------------------------------
# Printed matrices
# ---------------------------------------------------------------------------

def shor_hq() -> np.ndarray:
    """Check matrix of the nine-qubit Shor code (six Z rows, two X rows)."""
    zeros = "0" * 9
    z_rows = ["110000000", "011000000", "000110000", "000011000", "000000110", "000000011"]
    x_rows = ["111111000", "000111111"]
    return as_bitmat([z + zeros for z in z_rows] + [zeros + x for x in x_rows])


def classical_8_3_a() -> np.ndarray:
    """[8,3] parity checks paired with the Shor code."""
    return as_bitmat(["10101000", "00010100", "11100000", "10010010", "11111101"])


def classical_8_3_b() -> np.ndarray:
    """[8,3] parity checks paired with the eight-qubit, one-ebit code."""
    return as_bitmat(["10101000", "01100000", "10110100", "00110010", "01101101"])


def eight_qubit_hq() -> np.ndarray:
    """Check matrix of the eight-qubit code; rows 7 and 8 form its ebit pair."""
    zeros = "0" * 8
    return as_bitmat([
        "11000000" + zeros,
        "10100000" + zeros,
        "00011000" + zeros,
        "00010100" + zeros,
        "00000011" + zeros,
        zeros + "11111100",
        "00000001" + zeros,
        zeros + "11100011",
    ])


# ---------------------------------------------------------------------------
# BCH construction
# ---------------------------------------------------------------------------

BCH_LENGTH = 63
BCH_DESIGNED_DISTANCE = 9


def bch_field():
    return galois.GF(2**6, irreducible_poly=galois.Poly.Degrees([6, 1, 0]))


def cyclotomic_cosets(n: int) -> list[list[int]]:
    """2-cyclotomic cosets mod ``n`` (``n`` odd), ordered by least member."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"Cyclotomic cosets need an odd positive modulus, got {n}")
    seen: set[int] = set()
    cosets = []
    for start in range(n):
        if start in seen:
            continue
        coset = []
        member = start
        while member not in coset:
            coset.append(member)
            member = (member * 2) % n
        seen.update(coset)
        cosets.append(sorted(coset))
    return cosets


def bch_generator_polynomial() -> galois.Poly:
    """Narrow-sense generator of the length-63, designed-distance-9 BCH code."""
    field = bch_field()
    alpha = field.primitive_element
    minimal = [(alpha ** i).minimal_poly() for i in range(1, BCH_DESIGNED_DISTANCE)]
    return reduce(lambda a, b: galois.lcm(a, b), minimal)


def bch_63_39_9() -> np.ndarray:
    """24 x 63 parity-check matrix of the [63,39,9] BCH code."""
    g = bch_generator_polynomial()
    full = galois.Poly.Degrees([BCH_LENGTH, 0])
    if full % g != galois.Poly.Zero():
        raise CodeConstructionError("BCH generator does not divide x^63 - 1")
    h = full // g
    coefficients = h.coeffs.view(np.ndarray).astype(np.uint8)
    checks = BCH_LENGTH - h.degree
    matrix = np.zeros((checks, BCH_LENGTH), dtype=np.uint8)
    for i in range(checks):
        matrix[i, i:i + h.degree + 1] = coefficients
    return matrix


def ea_css(h: np.ndarray) -> EacqCode:
    """EAQECC with Z checks ``(h|0)`` and X checks ``(0|h)``.

    The number of ebits is half the rank of the symplectic Gram matrix.

    Raises:
        DependentRowsError: If ``h`` has dependent rows.
    """
    h = as_bitmat(h)
    if rank(h) < h.shape[0]:
        raise DependentRowsError(f"h has dependent rows (rank {rank(h)} < {h.shape[0]})")
    zeros = np.zeros_like(h)
    hq = np.vstack([np.hstack([h, zeros]), np.hstack([zeros, h])])
    return build(hq, identity(hq.shape[0]))


# ---------------------------------------------------------------------------
# Named codes
# ---------------------------------------------------------------------------

class NamedCode(BaseModel):
    """A catalog code with its published bracket and provenance."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = Field(..., min_length=1)
    params: CodeParams
    code: EacqCode
    provenance: str = ""


def eacq_9_1_3() -> EacqCode:
    return build(shor_hq(), classical_8_3_a())


def eacq_8_1_3_1() -> EacqCode:
    return build(eight_qubit_hq(), classical_8_3_b())


def eacq_63_21_12() -> EacqCode:
    return enhance(ea_css(bch_63_39_9()), 0, 6)


def shor_9_1_3() -> EacqCode:
    return build(shor_hq(), identity(8))


def ea_css_63_21_6() -> EacqCode:
    return ea_css(bch_63_39_9())


def classical_8_3_z() -> EacqCode:
    zeros = np.zeros((8, 8), dtype=np.uint8)
    return build(np.hstack([identity(8), zeros]), classical_8_3_a())


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: CodeParams
    factory: Callable[[], EacqCode]
    provenance: str = ""


class CodeRegistry:
    """Named code factories, built on first use.

    ``get`` checks the built code against the declared bracket, so a
    catalog entry can never silently drift from its published parameters.
    """

    def __init__(self) -> None:
        self._entries: dict[str, CatalogEntry] = {}
        self._built: dict[str, NamedCode] = {}

    def register(self, entry: CatalogEntry) -> None:
        """Register a code factory.

        Raises:
            ValueError: If ``entry.name`` is already registered.
        """
        if entry.name in self._entries:
            raise ValueError(f"Code '{entry.name}' already registered.")
        self._entries[entry.name] = entry

    def get(self, name: str) -> NamedCode:
        """Build (once) and return the named code.

        Raises:
            KeyError: If no code is registered under ``name``.
            CodeConstructionError: If the built code contradicts the
                declared bracket.
        """
        if name not in self._entries:
            raise KeyError(
                f"No catalog code named '{name}'; available: {', '.join(self.list_names())}"
            )
        if name not in self._built:
            entry = self._entries[name]
            code = entry.factory()
            declared = entry.params
            built = (code.n, code.q, code.c, code.e)
            if built != (declared.n, declared.q, declared.c, declared.e):
                raise CodeConstructionError(
                    f"Catalog code '{name}' built as {code.bracket()} but is declared "
                    f"{declared.bracket()}"
                )
            self._built[name] = NamedCode(
                name=name, params=declared, code=code, provenance=entry.provenance
            )
        return self._built[name]

    def list_names(self) -> list[str]:
        return sorted(self._entries)

    def list_entries(self, journal: Optional[RunJournal] = None) -> list[CatalogEntry]:
        entries = [self._entries[name] for name in self.list_names()]
        if journal is not None:
            journal.record(
                JournalEventType.CATALOG_LISTED,
                metadata={"codes": [e.name for e in entries]},
            )
        return entries

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries


def default_registry() -> CodeRegistry:
    """Registry preloaded with every built-in code."""
    registry = CodeRegistry()
    for entry in (
        CatalogEntry(
            name="eacq-9-1-3",
            params=CodeParams(n=9, q=1, c=3, e=0, d_claimed=3),
            factory=eacq_9_1_3,
            provenance="Shor code with [8,3] classical checks (variant a)",
        ),
        CatalogEntry(
            name="eacq-8-1-3-1",
            params=CodeParams(n=8, q=1, c=3, e=1, d_claimed=3),
            factory=eacq_8_1_3_1,
            provenance="eight-qubit one-ebit code with [8,3] classical checks (variant b)",
        ),
        CatalogEntry(
            name="eacq-63-21-12",
            params=CodeParams(n=63, q=21, c=12, e=6, d_claimed=7),
            factory=eacq_63_21_12,
            provenance="ea-css-63-21-6 with all six ebit pairs moved to the classical stabilizer",
        ),
        CatalogEntry(
            name="shor-9-1-3",
            params=CodeParams(n=9, q=1, c=0, e=0, d_claimed=3),
            factory=shor_9_1_3,
            provenance="nine-qubit Shor code",
        ),
        CatalogEntry(
            name="ea-css-63-21-6",
            params=CodeParams(n=63, q=21, c=0, e=6, d_claimed=9),
            factory=ea_css_63_21_6,
            provenance="EA-CSS from BCH [63,39,9], GF(2^6) mod x^6+x+1, cosets of 1,3,5,7",
        ),
        CatalogEntry(
            name="classical-8-3-z",
            params=CodeParams(n=8, q=0, c=3, e=0),
            factory=classical_8_3_z,
            provenance="Z-only checks (I|0) with [8,3] classical checks (variant a)",
        ),
    ):
        registry.register(entry)
    return registry
