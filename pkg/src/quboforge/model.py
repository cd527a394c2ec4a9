"""QUBO problem representation, instance generation, and energy evaluation.

The problem is: minimize ``x^T Q x`` over binary vectors ``x`` in {0,1}^n,
with ``Q`` a dense real symmetric matrix.  This module owns the canonical
energy definitions, the exhaustive brute-force oracle used to validate the
heuristic solvers at small ``n``, the independent solution verifier, and
the on-disk formats (QBIN matrices, solution JSON).
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._rng import INSTANCE_STREAM, stream

BRUTE_FORCE_MAX_N = 20

QBIN_MAGIC = b"QUB1"


class NonBinaryError(ValueError):
    """A vector that must be binary contains entries other than 0/1."""


@dataclass(frozen=True)
class QuboMatrix:
    """Dense symmetric QUBO coefficient matrix.

    Parameters
    ----------
    entries : np.ndarray
        Square float64 array.  Must be exactly symmetric (bit-for-bit)
        and free of NaN/Inf.  The array is frozen on construction.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.ascontiguousarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"QUBO matrix must be square and non-empty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("QUBO matrix contains non-finite entries")
        if not np.array_equal(a, a.T):
            raise ValueError("QUBO matrix must be exactly symmetric")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def as_bits(x, n: int | None = None) -> np.ndarray:
    """Validate and normalize a binary vector to an int8 array.

    Raises :class:`NonBinaryError` if any entry is not exactly 0 or 1,
    and ``ValueError`` on a length mismatch when ``n`` is given.
    """
    b = np.asarray(x)
    if b.ndim != 1:
        raise ValueError(f"binary vector must be 1-d, got shape {b.shape}")
    if not np.all((b == 0) | (b == 1)):
        raise NonBinaryError("vector contains entries other than 0 and 1")
    if n is not None and b.shape[0] != n:
        raise ValueError(f"dimension mismatch: vector has length {b.shape[0]}, matrix is {n}x{n}")
    return b.astype(np.int8)


def generate_qubo(n: int, seed: int, lo: float = -5.0, hi: float = 5.0) -> QuboMatrix:
    """Generate a random symmetric QUBO instance.

    A raw matrix with i.i.d. uniform entries in ``[lo, hi)`` is drawn from
    the instance stream of ``seed`` and averaged with its transpose.  The
    same ``(n, seed, lo, hi)`` reproduces the matrix bitwise.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    # lo == hi is allowed as a degenerate range producing a constant matrix.
    if lo > hi:
        raise ValueError(f"lo must be <= hi, got lo={lo}, hi={hi}")
    rng = stream(seed, INSTANCE_STREAM)
    raw = rng.uniform(lo, hi, size=(n, n))
    return QuboMatrix((raw + raw.T) / 2.0)


def energy_binary(q: QuboMatrix, x) -> float:
    """Energy of a binary vector, evaluated from the upper triangle only.

    Computes ``sum_i Q_ii x_i + sum_{i<j} (Q_ij + Q_ji) x_i x_j``, which
    equals ``x^T Q x`` for symmetric ``Q`` at binary points (``x_i^2 = x_i``).
    """
    b = as_bits(x, q.n)
    xf = b.astype(np.float64)
    # Q_ij + Q_ji == 2 Q_ij exactly for a bitwise-symmetric matrix.
    upper = 2.0 * np.triu(q.entries, 1)
    return float(np.diag(q.entries) @ xf + xf @ upper @ xf)


def energy_relaxed(q: QuboMatrix, xp) -> float:
    """Full quadratic form ``xp^T Q xp`` for a real-valued vector."""
    v = np.asarray(xp, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != q.n:
        raise ValueError(f"dimension mismatch: vector has shape {v.shape}, matrix is {q.n}x{q.n}")
    return float(v @ (q.entries @ v))


def local_fields(q: QuboMatrix, x) -> np.ndarray:
    """Per-bit flip fields ``L_i = Q_ii + 2 sum_{j != i} Q_ij x_j``.

    Flipping bit ``i`` changes the energy by ``(1 - 2 x_i) L_i``.
    """
    b = as_bits(x, q.n)
    xf = b.astype(np.float64)
    d = np.diag(q.entries)
    return d + 2.0 * (q.entries @ xf - d * xf)


def brute_force_min(q: QuboMatrix) -> tuple[np.ndarray, float]:
    """Exhaustive global minimum over all 2^n binary vectors.

    Enumerates states in Gray-code order with incremental energy updates;
    candidate records are re-evaluated from scratch so the returned energy
    is exact.  Ties are broken toward the lowest unsigned integer encoding
    of the bit vector (bit 0 = least significant).  Capped at n <= 20.
    """
    n = q.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force capped at n <= {BRUTE_FORCE_MAX_N}, got n = {n}")
    x = np.zeros(n, dtype=np.int8)
    fields = np.diag(q.entries).copy()
    energy = 0.0
    best_energy = 0.0
    best_code = 0
    # Incremental energies can drift by rounding; any state within this
    # margin of the best is re-evaluated exactly before comparison.
    margin = 1e-6
    prev_gray = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        i = (gray ^ prev_gray).bit_length() - 1
        prev_gray = gray
        energy += (1.0 - 2.0 * x[i]) * fields[i]
        delta = 1 - 2 * x[i]
        x[i] = 1 - x[i]
        fields += (2.0 * delta) * q.entries[i]
        fields[i] -= (2.0 * delta) * q.entries[i, i]
        if energy <= best_energy + margin:
            exact = energy_binary(q, x)
            if exact < best_energy or (exact == best_energy and gray < best_code):
                best_energy = exact
                best_code = gray
    bits = np.array([(best_code >> j) & 1 for j in range(n)], dtype=np.int8)
    return bits, best_energy


def verify_solution(q: QuboMatrix, x, claimed: float, rel_tol: float = 1e-9) -> bool:
    """Independently recompute the energy of ``x`` and check ``claimed``.

    Returns True iff ``|recomputed - claimed| <= rel_tol * max(1, |recomputed|)``.
    A non-binary ``x`` raises :class:`NonBinaryError` (structural failure),
    which is distinct from an energy mismatch (returns False).
    """
    if rel_tol <= 0:
        raise ValueError(f"rel_tol must be > 0, got {rel_tol}")
    recomputed = energy_binary(q, x)
    return abs(recomputed - claimed) <= rel_tol * max(1.0, abs(recomputed))


def write_qbin(path, q: QuboMatrix) -> None:
    """Write a matrix in the QBIN format.

    Layout: magic ``QUB1`` (4 bytes), little-endian u64 ``n``, then ``n*n``
    IEEE-754 binary64 values row-major.
    """
    data = np.ascontiguousarray(q.entries, dtype="<f8")
    with open(path, "wb") as f:
        f.write(QBIN_MAGIC)
        f.write(struct.pack("<Q", q.n))
        f.write(data.tobytes(order="C"))


def read_qbin(path) -> QuboMatrix:
    """Read a QBIN matrix file (see :func:`write_qbin` for the layout)."""
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != QBIN_MAGIC:
        raise ValueError(f"not a QBIN file (bad magic): {path}")
    (n,) = struct.unpack("<Q", raw[4:12])
    expected = 12 + 8 * n * n
    if len(raw) != expected:
        raise ValueError(f"QBIN file truncated or oversized: {path} ({len(raw)} bytes, expected {expected})")
    entries = np.frombuffer(raw[12:], dtype="<f8").reshape(n, n)
    return QuboMatrix(entries.astype(np.float64))


def write_solution_json(path, bits, energy: float) -> None:
    """Write a solution as ``{"n": int, "bits": [0|1,...], "energy": float}``."""
    b = as_bits(bits)
    payload = {"n": int(b.shape[0]), "bits": [int(v) for v in b], "energy": float(energy)}
    with open(path, "w") as f:
        json.dump(payload, f)
        f.write("\n")


def read_solution_json(path) -> tuple[np.ndarray, float]:
    """Read a solution file, returning ``(bits, energy)``."""
    with open(path) as f:
        payload = json.load(f)
    try:
        bits = as_bits(payload["bits"], int(payload["n"]))
        energy = float(payload["energy"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed solution file: {path}") from exc
    return bits, energy
