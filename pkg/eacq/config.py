"""
Run Settings -- Configuration for the EACQ toolkit.

Distance searches, decoder builds and Monte Carlo batches have knobs that
are worth pinning per machine or per experiment: how far the direct
enumeration may go before switching to the syndrome-collision search, how
many threads to use, default trial counts and seeds.  This module holds
those knobs as validated settings objects and loads them from YAML.

Precedence in the CLI is: explicit command-line flag, then the
``--config`` file, then ``DEFAULT_SETTINGS``.

Example YAML structure::

    eacq:
      distance:
        direct_enumeration_limit: 2000000
        threads: 4
      simulation:
        trials: 100000
        seed: 2024
        threads: 4
        channel: depolarizing
      decoder:
        t: 1
"""

from __future__ import annotations

from pathlib import Path

import yaml
from pydantic import BaseModel, Field, field_validator

from eacq.models import ChannelModel


# ---------------------------------------------------------------------------
# Section models
# ---------------------------------------------------------------------------

class DistanceSettings(BaseModel):
    """Settings for ``correction.distance``."""

    direct_enumeration_limit: int = Field(
        default=2_000_000,
        description=(
            "Largest number of candidate errors enumerated directly.  Larger "
            "searches use the syndrome-collision strategy, which only "
            "enumerates errors up to half the requested weight."
        ),
    )
    threads: int = Field(
        default=1,
        description="Worker threads for the collision search.",
    )

    @field_validator("direct_enumeration_limit")
    @classmethod
    def limit_nonnegative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"direct_enumeration_limit must be >= 0, got {v}")
        return v

    @field_validator("threads")
    @classmethod
    def threads_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"threads must be >= 1, got {v}")
        return v


class SimulationSettings(BaseModel):
    """Defaults for ``simulator.run_trials``."""

    trials: int = Field(default=10_000, ge=0, description="Trials per error rate.")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Seed of the Philox streams.")
    threads: int = Field(default=1, description="Worker threads; counts do not depend on it.")
    channel: ChannelModel = Field(
        default=ChannelModel.DEPOLARIZING,
        description="Noise channel on the sender's qubits.",
    )

    @field_validator("threads")
    @classmethod
    def threads_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"threads must be >= 1, got {v}")
        return v

    @field_validator("channel", mode="before")
    @classmethod
    def known_channel(cls, v):
        if isinstance(v, str):
            allowed = {m.value for m in ChannelModel}
            if v.lower() not in allowed:
                raise ValueError(f"Unknown channel model '{v}'; expected one of {sorted(allowed)}")
            return v.lower()
        return v


class DecoderSettings(BaseModel):
    """Defaults for ``correction.build_decoder``."""

    t: int = Field(default=1, ge=0, description="Largest error weight the table covers.")


class EacqSettings(BaseModel):
    """All settings, grouped by the command that uses them."""

    distance: DistanceSettings = Field(default_factory=DistanceSettings)
    simulation: SimulationSettings = Field(default_factory=SimulationSettings)
    decoder: DecoderSettings = Field(default_factory=DecoderSettings)


DEFAULT_SETTINGS = EacqSettings()


# ---------------------------------------------------------------------------
# YAML loader
# ---------------------------------------------------------------------------

def load_settings_from_yaml(path: str | Path) -> EacqSettings:
    """Load settings from a YAML file with a top-level ``eacq`` key.

    Sections left out of the file keep their defaults.

    Args:
        path: Path to the YAML file.

    Returns:
        A validated ``EacqSettings`` instance.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the YAML structure is invalid.
        pydantic.ValidationError: If a setting fails validation.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Settings file not found: {path}")

    with open(path, "r") as f:
        raw = yaml.safe_load(f)

    if not isinstance(raw, dict) or "eacq" not in raw:
        raise ValueError("YAML file must contain a top-level 'eacq' key with a settings mapping.")

    data = raw["eacq"]
    if data is None:
        return EacqSettings()
    if not isinstance(data, dict):
        raise ValueError("'eacq' must be a mapping of settings sections.")
    return EacqSettings.model_validate(data)
