"""
Append-Only Run Journal (Hash-Chained).

Every substantial action of the toolkit -- building or transforming a
code, a distance search, a decoder-table build, a batch of Monte Carlo
trials -- can be recorded as a structured journal entry.  Entries carry
the inputs and results of the action as metadata (parameters, counts,
seeds, timings) and are linked through a SHA-256 hash chain, so a saved
journal documents exactly which computation produced a published number
and detects later edits.

Library functions accept an optional ``journal`` argument and append one
entry per call when it is given.  The CLI exposes the journal through
``--journal FILE``.
"""

from __future__ import annotations

import enum
import hashlib
import json
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field


# ---------------------------------------------------------------------------
# Journal event types
# ---------------------------------------------------------------------------

class JournalEventType(str, enum.Enum):
    """Enumeration of all journaled actions."""

    # Code lifecycle
    CODE_BUILT = "CODE_BUILT"
    CODE_TRANSFORMED = "CODE_TRANSFORMED"

    # Analysis
    DISTANCE_SEARCHED = "DISTANCE_SEARCHED"

    # Decoding
    DECODER_BUILT = "DECODER_BUILT"
    TABLE_LOADED = "TABLE_LOADED"

    # Simulation
    TRIALS_RUN = "TRIALS_RUN"

    # Catalog
    CATALOG_LISTED = "CATALOG_LISTED"


# ---------------------------------------------------------------------------
# Journal entry model
# ---------------------------------------------------------------------------

class JournalEntry(BaseModel):
    """A single journal entry.

    Records what was computed, on which code, when, and with which
    results, plus the hash link to the previous entry.
    """

    entry_id: str = Field(
        default_factory=lambda: str(uuid.uuid4()),
        description="Unique identifier for this entry (UUID).",
    )
    timestamp: datetime = Field(
        default_factory=lambda: datetime.now(timezone.utc),
        description="UTC timestamp of the event.",
    )
    run_id: str = Field(
        ...,
        description="Identifier shared by all entries of one journal.",
    )
    event_type: JournalEventType = Field(
        ...,
        description="The type of action being recorded.",
    )
    subject: str = Field(
        default="",
        description="What the action ran on: a bracket, catalog name or file.",
    )
    metadata: dict[str, Any] = Field(
        default_factory=dict,
        description="Inputs and results of the action (JSON-serializable).",
    )
    previous_hash: str = Field(
        default="",
        description=(
            "SHA-256 hash of the previous entry's canonical representation. "
            "Empty string for the first entry in the chain."
        ),
    )

    def canonical_bytes(self) -> bytes:
        """Deterministic byte representation for hashing (sorted JSON)."""
        data = {
            "entry_id": self.entry_id,
            "timestamp": self.timestamp.isoformat(),
            "run_id": self.run_id,
            "event_type": self.event_type.value,
            "subject": self.subject,
            "metadata": self.metadata,
            "previous_hash": self.previous_hash,
        }
        return json.dumps(data, sort_keys=True, default=str).encode("utf-8")

    def compute_hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# Run journal
# ---------------------------------------------------------------------------

class RunJournal:
    """Append-only, hash-chained journal of toolkit actions.

    * **Append-only** -- there is no update or delete.
    * **Hash chain** -- each entry stores the hash of its predecessor and
      ``verify_chain()`` detects any later modification.
    * **Export** -- ``export()`` returns a JSON-ready bundle with the chain
      status; ``write_json()`` saves it.
    """

    def __init__(self, run_id: Optional[str] = None) -> None:
        self.run_id = run_id or str(uuid.uuid4())
        self._entries: list[JournalEntry] = []
        self._hashes: list[str] = []

    def append(self, entry: JournalEntry) -> JournalEntry:
        """Append an entry, filling in its ``previous_hash`` link."""
        entry.previous_hash = self._hashes[-1] if self._hashes else ""
        self._entries.append(entry)
        self._hashes.append(entry.compute_hash())
        return entry

    def record(
        self,
        event_type: JournalEventType,
        subject: str = "",
        metadata: Optional[dict[str, Any]] = None,
    ) -> JournalEntry:
        """Build and append an entry for this journal's run."""
        return self.append(JournalEntry(
            run_id=self.run_id,
            event_type=event_type,
            subject=subject,
            metadata=metadata or {},
        ))

    def verify_chain(self) -> tuple[bool, Optional[int]]:
        """Walk the journal and validate every hash link.

        Returns:
            ``(valid, broken_at)`` where ``broken_at`` is the index of the
            first broken link, or None when the chain is intact.
        """
        for i, entry in enumerate(self._entries):
            if i == 0:
                if entry.previous_hash != "":
                    return (False, 0)
            elif entry.previous_hash != self._entries[i - 1].compute_hash():
                return (False, i)
            if self._hashes[i] != entry.compute_hash():
                return (False, i)
        return (True, None)

    def query(
        self,
        event_type: Optional[JournalEventType] = None,
        subject: Optional[str] = None,
    ) -> list[JournalEntry]:
        """Entries matching the filters (copies)."""
        results = []
        for entry in self._entries:
            if event_type is not None and entry.event_type != event_type:
                continue
            if subject is not None and entry.subject != subject:
                continue
            results.append(entry.model_copy(deep=True))
        return results

    def export(self) -> dict[str, Any]:
        """JSON-serializable bundle of all entries and the chain status."""
        chain_valid, broken_at = self.verify_chain()
        entries = []
        for entry in self._entries:
            data = entry.model_dump(mode="json")
            entries.append(data)
        return {
            "export_metadata": {
                "run_id": self.run_id,
                "exported_at": datetime.now(timezone.utc).isoformat(),
                "entry_count": len(entries),
                "chain_integrity": "VALID" if chain_valid else f"BROKEN_AT_INDEX_{broken_at}",
            },
            "entries": entries,
        }

    def write_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.export(), indent=2, sort_keys=True) + "\n")
        return path

    def __len__(self) -> int:
        return len(self._entries)
