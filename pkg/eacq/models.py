"""
Core data models for the EACQ toolkit.

Enums and validated records shared by the analysis, decoding and
simulation modules.  Numeric value types that carry bit matrices
(``PauliOp``, ``EacqCode``, ``StabState``) live next to their operations;
the models here are the ones that get printed, serialized or journaled.
"""

from __future__ import annotations

import enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from eacq.pauli import PauliOp


# ---------------------------------------------------------------------------
# Enums
# ---------------------------------------------------------------------------

class ErrorClass(str, enum.Enum):
    """How a pair of errors ``(e1, e2)`` relates under a code.

    * ``DISTINGUISHABLE``       -- different syndromes; a recovery keyed on
      the syndrome tells them apart.
    * ``DEGENERATE_QUANTUM``    -- same syndrome, difference lies in the
      isotropic part of the quantum stabilizer.
    * ``DEGENERATE_CLASSICAL``  -- same syndrome, difference lies in the
      isotropic part of the classical stabilizer; the quantum payload and
      the classical bits both survive a shared recovery.
    * ``UNCORRECTABLE``         -- same syndrome, difference acts
      nontrivially on the payload.
    """

    DISTINGUISHABLE = "Distinguishable"
    DEGENERATE_QUANTUM = "DegenerateQuantum"
    DEGENERATE_CLASSICAL = "DegenerateClassical"
    UNCORRECTABLE = "Uncorrectable"


class ChannelModel(str, enum.Enum):
    """Supported noise channels."""

    DEPOLARIZING = "depolarizing"


class SearchStrategy(str, enum.Enum):
    """How a distance search enumerated its candidates."""

    DIRECT = "direct"
    COLLISION = "collision"


# ---------------------------------------------------------------------------
# Code parameters
# ---------------------------------------------------------------------------

class CodeParams(BaseModel):
    """The bracket ``[[n, q:c, d; e]]`` of an EACQ code."""

    n: int = Field(..., ge=1, description="Physical qubits held by the sender.")
    q: int = Field(..., ge=0, description="Logical qubits.")
    c: int = Field(default=0, ge=0, description="Classical bits.")
    e: int = Field(default=0, ge=0, description="Pre-shared ebits.")
    d_claimed: Optional[int] = Field(
        default=None,
        ge=1,
        description="Published distance, carried for comparison only.",
    )

    def bracket(self, distance: Optional[int] = None) -> str:
        """Render ``[[n,q:c,d;e]]``; ``?`` marks an unknown distance.

        The ``:c`` part is omitted for ``c = 0``.
        """
        d = distance if distance is not None else self.d_claimed
        d_text = "?" if d is None else str(d)
        payload = f"{self.q}:{self.c}" if self.c else f"{self.q}"
        return f"[[{self.n},{payload},{d_text};{self.e}]]"


# ---------------------------------------------------------------------------
# Distance search output
# ---------------------------------------------------------------------------

class DistanceReport(BaseModel):
    """Result of a distance search.

    ``verified_floor`` is a weight ``w`` such that no violating vector of
    weight below ``w`` exists.  When ``witness`` is present it is a
    violating vector of weight exactly ``verified_floor`` and the distance
    is known exactly.
    """

    verified_floor: int = Field(..., ge=1)
    witness: Optional[str] = Field(
        default=None,
        description="Pauli string of a minimum-weight violating vector.",
    )
    exhaustive: bool = Field(
        default=True,
        description="True when every candidate the strategy covers was examined.",
    )
    max_weight: int = Field(..., ge=0)
    strategy: SearchStrategy = SearchStrategy.DIRECT
    candidates: int = Field(default=0, ge=0, description="Errors enumerated.")
    seconds: float = Field(default=0.0, ge=0)

    @property
    def exact(self) -> bool:
        return self.witness is not None

    @property
    def distance(self) -> Optional[int]:
        return self.verified_floor if self.exact else None

    def summary(self) -> str:
        scope = "exhaustive" if self.exhaustive else "partial"
        if self.exact:
            return f"d = {self.verified_floor} ({scope})"
        return (
            f"d >= {self.verified_floor} ({scope}, no violation below weight "
            f"{self.verified_floor})"
        )

    def __str__(self) -> str:
        return self.summary()


# ---------------------------------------------------------------------------
# Simulation records
# ---------------------------------------------------------------------------

class ChannelSpec(BaseModel):
    """A seeded i.i.d. Pauli channel on the sender's qubits."""

    model: ChannelModel = ChannelModel.DEPOLARIZING
    p: float = Field(..., ge=0.0, le=1.0, description="Error probability per qubit.")
    seed: int = Field(default=0, ge=0, lt=2**64)

    @field_validator("model", mode="before")
    @classmethod
    def normalise_model(cls, v):
        if isinstance(v, str):
            return v.lower()
        return v


class TrialResult(BaseModel):
    """One encode, error, recover, readout cycle."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    trial_index: int = Field(..., ge=0)
    injected_error: PauliOp
    syndrome: str = Field(..., description="Syndrome bits as a 0/1 string.")
    recovery: Optional[PauliOp] = Field(
        default=None,
        description="Decoder output; None when the syndrome is not in the table.",
    )
    classical_ok: bool
    quantum_ok: bool

    @property
    def ok(self) -> bool:
        return self.classical_ok and self.quantum_ok


class TrialSummary(BaseModel):
    """Aggregate failure counts for one channel setting."""

    p: float = Field(..., ge=0.0, le=1.0)
    trials: int = Field(..., ge=0)
    classical_failures: int = Field(default=0, ge=0)
    quantum_failures: int = Field(default=0, ge=0)
    total_failures: int = Field(
        default=0,
        ge=0,
        description="Trials where either payload failed.",
    )
    seed: int = Field(..., ge=0)
    rng_id: str

    @property
    def failure_rate(self) -> float:
        return self.total_failures / self.trials if self.trials else 0.0

    def csv_row(self) -> list:
        return [
            repr(self.p),
            self.trials,
            self.classical_failures,
            self.quantum_failures,
            self.seed,
            self.rng_id,
        ]
