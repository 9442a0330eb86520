"""
The ``eacq v1`` code file format.

A line-oriented text format that stores ``(Ĥ, H)`` plus the declared
classical split::

    eacq v1
    n 9  c1 3  c2 0
    hq 110000000|000000000
    ...                       (s + 2e lines)
    hc 10101000
    ...                       (s + 2e - c lines)

Blank lines and ``#`` comments are ignored.  Every parse error reports
the 1-based line number and the offending line.  The canonical text
written by ``dump_code`` is also what ``code_hash`` digests, so decoder
tables can be bound to the exact code they were built for.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Optional

import numpy as np

from eacq.code import EacqCode, build
from eacq.gf2core import to_bitstring
from eacq.journal import RunJournal

HEADER = "eacq v1"


class CodeFileError(ValueError):
    """Raised on a malformed ``eacq v1`` file; carries the line number."""

    def __init__(self, message: str, line_number: Optional[int] = None, line: str = "") -> None:
        self.line_number = line_number
        self.line = line
        where = f"line {line_number}: " if line_number is not None else ""
        detail = f" [{line.strip()}]" if line.strip() else ""
        super().__init__(f"{where}{message}{detail}")


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------

def dump_code(code: EacqCode) -> str:
    """Canonical ``eacq v1`` text for a code."""
    lines = [HEADER, f"n {code.n}  c1 {code.c1}  c2 {code.c2}"]
    lines += [f"hq {to_bitstring(row, separator_at=code.n)}" for row in code.h_quantum]
    lines += [f"hc {to_bitstring(row)}" for row in code.h_classical]
    return "\n".join(lines) + "\n"


def write_code_file(code: EacqCode, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dump_code(code))
    return path


def code_hash(code: EacqCode) -> str:
    """SHA-256 of the canonical file text."""
    return hashlib.sha256(dump_code(code).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------

def _bits(text: str, width: int, what: str, number: int, line: str) -> list[int]:
    if len(text) != width or any(ch not in "01" for ch in text):
        raise CodeFileError(
            f"{what} must be {width} characters over {{0,1}}", number, line
        )
    return [int(ch) for ch in text]


def _int_field(tokens: list[str], key: str, number: int, line: str) -> int:
    try:
        position = tokens.index(key)
        value = int(tokens[position + 1])
    except (ValueError, IndexError):
        raise CodeFileError(f"expected '{key} <int>'", number, line)
    if value < 0:
        raise CodeFileError(f"'{key}' must be nonnegative", number, line)
    return value


def parse_code_text(text: str, *, journal: Optional[RunJournal] = None, subject: str = "") -> EacqCode:
    """Parse ``eacq v1`` text and build the code.

    Raises:
        CodeFileError: On any format violation, or when the built code's
            classical split disagrees with the declared ``c1``/``c2``.
        CodeConstructionError: When the matrices do not form a valid code.
    """
    content = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            content.append((number, raw, stripped))
    if not content:
        raise CodeFileError("empty code file")

    number, raw, stripped = content[0]
    if stripped != HEADER:
        raise CodeFileError(f"first line must be '{HEADER}'", number, raw)
    if len(content) < 2:
        raise CodeFileError("missing 'n <int>  c1 <int>  c2 <int>' line", number, raw)

    dims_number, dims_raw, dims = content[1]
    tokens = dims.split()
    if len(tokens) != 6 or tokens[0::2] != ["n", "c1", "c2"]:
        raise CodeFileError("expected 'n <int>  c1 <int>  c2 <int>'", dims_number, dims_raw)
    n = _int_field(tokens, "n", dims_number, dims_raw)
    c1 = _int_field(tokens, "c1", dims_number, dims_raw)
    c2 = _int_field(tokens, "c2", dims_number, dims_raw)
    if n == 0:
        raise CodeFileError("'n' must be positive", dims_number, dims_raw)

    hq_rows: list[list[int]] = []
    hc_lines: list[tuple[int, str, str]] = []
    for number, raw, stripped in content[2:]:
        kind, _, payload = stripped.partition(" ")
        payload = payload.strip()
        if kind == "hq":
            if hc_lines:
                raise CodeFileError("'hq' rows must precede all 'hc' rows", number, raw)
            z, sep, x = payload.partition("|")
            if not sep:
                raise CodeFileError("'hq' row needs a '|' between z and x halves", number, raw)
            hq_rows.append(
                _bits(z, n, "z half", number, raw) + _bits(x, n, "x half", number, raw)
            )
        elif kind == "hc":
            hc_lines.append((number, raw, payload))
        else:
            raise CodeFileError(f"unknown row tag '{kind}'", number, raw)

    r = len(hq_rows)
    c = c1 + 2 * c2
    if c > r:
        raise CodeFileError(f"c1 + 2 c2 = {c} exceeds the {r} 'hq' rows", dims_number, dims_raw)
    expected_hc = r - c
    if len(hc_lines) != expected_hc:
        if len(hc_lines) > expected_hc:
            number, raw, _ = hc_lines[expected_hc]
            raise CodeFileError(
                f"too many 'hc' rows: expected {expected_hc} for {r} 'hq' rows and c = {c}",
                number, raw,
            )
        number, raw = (hc_lines[-1][0], hc_lines[-1][1]) if hc_lines else (content[-1][0], content[-1][1])
        raise CodeFileError(
            f"too few 'hc' rows: expected {expected_hc}, found {len(hc_lines)}",
            number, raw,
        )
    hc_rows = [_bits(payload, r, "'hc' row", number, raw) for number, raw, payload in hc_lines]

    hq = np.array(hq_rows, dtype=np.uint8).reshape(r, 2 * n)
    hc = np.array(hc_rows, dtype=np.uint8).reshape(expected_hc, r)
    code = build(hq, hc, journal=journal, subject=subject)
    if (code.c1, code.c2) != (c1, c2):
        raise CodeFileError(
            f"declared c1={c1}, c2={c2} but the matrices give c1={code.c1}, c2={code.c2}",
            dims_number, dims_raw,
        )
    return code


def read_code_file(path: str | Path, *, journal: Optional[RunJournal] = None) -> EacqCode:
    """Read and build a code from an ``eacq v1`` file.

    Raises:
        FileNotFoundError: If the file does not exist.
        CodeFileError: On a format violation.
        CodeConstructionError: On an invalid code.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Code file not found: {path}")
    return parse_code_text(path.read_text(), journal=journal, subject=str(path))

