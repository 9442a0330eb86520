"""
EACQ -- Entanglement-Assisted, Classically Enhanced Quantum Codes
=================================================================

Build, analyse, decode and simulate ``[[n, q:c, d; e]]`` codes that send
``q`` qubits and ``c`` classical bits over ``n`` noisy qubits with the
help of ``e`` pre-shared ebits.  A code is a pair ``(Ĥ, H)``: ``Ĥ`` spans
the full stabilizer and ``H`` selects the part of it that is measured as
a syndrome; the rest carries the classical message in its signs.

Pauli noise on stabilizer states is simulated exactly by sign
bookkeeping, so every result is reproducible from a seed.
"""

__version__ = "0.1.0"
