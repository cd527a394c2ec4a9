"""Simulated annealing for QUBO instances.

Single-bit Metropolis flips under a geometric inverse-temperature schedule.
Each read is an independent restart with its own random sub-stream; the
best state seen across all reads and sweeps is returned with its energy
recomputed from scratch.  Local fields are updated incrementally on every
accepted flip, so a proposal costs O(1) and an acceptance costs O(n).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numba
import numpy as np

from ._rng import ANNEAL_READ_STREAM, stream
from .model import QuboMatrix, as_bits, energy_binary, local_fields


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric inverse-temperature schedule.

    ``beta_k = beta_min * (beta_max / beta_min) ** (k / (sweeps - 1))``
    for ``k = 0 .. sweeps-1``; one sweep proposes ``n`` single-bit flips.
    """

    beta_min: float = 0.1
    beta_max: float = 4.0
    sweeps: int = 1000

    def __post_init__(self) -> None:
        if self.beta_min <= 0 or self.beta_max <= 0:
            raise ValueError("beta values must be positive")
        if self.beta_min > self.beta_max:
            raise ValueError(f"beta_min must be <= beta_max, got {self.beta_min} > {self.beta_max}")
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")


@dataclass(frozen=True)
class AnnealConfig:
    schedule: AnnealSchedule = AnnealSchedule()
    reads: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.reads < 1:
            raise ValueError(f"reads must be >= 1, got {self.reads}")


@dataclass(frozen=True)
class AnnealResult:
    """Best state across all reads, with the energy recomputed exactly."""

    bits: np.ndarray
    energy: float
    steps: int  # reads * sweeps
    wall_time_s: float


def beta_schedule(schedule: AnnealSchedule) -> np.ndarray:
    """Materialize the geometric beta sequence with exact endpoints."""
    m = schedule.sweeps
    if m == 1:
        return np.array([schedule.beta_min])
    ratio = schedule.beta_max / schedule.beta_min
    k = np.arange(m, dtype=np.float64)
    betas = schedule.beta_min * ratio ** (k / (m - 1))
    betas[0] = schedule.beta_min
    betas[-1] = schedule.beta_max
    return betas


def flip_delta(q: QuboMatrix, x, fields, i: int) -> float:
    """Energy change from flipping bit ``i``: ``(1 - 2 x_i) * L_i``.

    ``fields`` must hold the local fields consistent with ``x`` (see
    :func:`quboforge.model.local_fields`).
    """
    b = as_bits(x, q.n)
    if not 0 <= i < q.n:
        raise IndexError(f"bit index {i} out of range for n = {q.n}")
    return float((1.0 - 2.0 * b[i]) * fields[i])


@numba.njit(cache=True, nogil=True)
def _metropolis_kernel(qmat, betas, idx, unif, x, fields, e0, best_x, ck_every, ck_energies, ck_states):
    """One annealing read: sequential Metropolis flips over all sweeps.

    Mutates ``x``/``fields`` in place, writes the best state into
    ``best_x``, and (when ``ck_every > 0``) records the incremental energy
    and state every ``ck_every`` proposals.  Returns (best_e, final_e).
    """
    n = x.shape[0]
    sweeps = betas.shape[0]
    e = e0
    best_e = e0
    for j in range(n):
        best_x[j] = x[j]
    t = 0
    n_ck = 0
    for sw in range(sweeps):
        b = betas[sw]
        for _ in range(n):
            i = idx[t]
            de = (1.0 - 2.0 * x[i]) * fields[i]
            accept = de <= 0.0
            if not accept:
                arg = b * de
                if arg > 700.0:  # exp underflow guard
                    arg = 700.0
                accept = unif[t] < math.exp(-arg)
            if accept:
                delta = 1 - 2 * x[i]
                x[i] = 1 - x[i]
                e += de
                two_delta = 2.0 * delta
                for j in range(n):
                    fields[j] += two_delta * qmat[i, j]
                fields[i] -= two_delta * qmat[i, i]
                if e < best_e:
                    best_e = e
                    for j in range(n):
                        best_x[j] = x[j]
            t += 1
            if ck_every > 0 and t % ck_every == 0 and n_ck < ck_energies.shape[0]:
                ck_energies[n_ck] = e
                for j in range(n):
                    ck_states[n_ck, j] = x[j]
                n_ck += 1
    return best_e, e


_NO_CK_E = np.empty(0, dtype=np.float64)
_NO_CK_X = np.empty((0, 0), dtype=np.int8)


def _run_read(q, betas, seed, read, ck_every=0, max_checkpoints=0):
    """Execute one read on its own sub-stream; returns (best_bits, best_e, ...).

    The sub-stream draws, in order: the initial state, all proposal
    indices, all acceptance uniforms.  With ``ck_every > 0`` the trajectory
    is checkpointed for bookkeeping audits.
    """
    n = q.n
    sweeps = betas.shape[0]
    rng = stream(seed, ANNEAL_READ_STREAM, read)
    x = rng.integers(0, 2, size=n).astype(np.int8)
    idx = rng.integers(0, n, size=sweeps * n)
    unif = rng.random(sweeps * n)
    fields = local_fields(q, x)
    e0 = energy_binary(q, x)
    best_x = np.empty(n, dtype=np.int8)
    if ck_every > 0:
        ck_energies = np.empty(max_checkpoints, dtype=np.float64)
        ck_states = np.empty((max_checkpoints, n), dtype=np.int8)
    else:
        ck_energies, ck_states = _NO_CK_E, _NO_CK_X
    best_e, final_e = _metropolis_kernel(
        q.entries, betas, idx, unif, x, fields, e0, best_x,
        ck_every, ck_energies, ck_states,
    )
    return best_x, best_e, e0, final_e, ck_energies, ck_states


def anneal(q: QuboMatrix, cfg: AnnealConfig) -> AnnealResult:
    """Run all reads and return the lowest-energy state found anywhere.

    Reads are merged by exact recomputed energy with ties broken toward
    the lower read index, so any parallel execution order agrees with the
    serial one bitwise.
    """
    t0 = time.perf_counter()
    betas = beta_schedule(cfg.schedule)
    best_bits = None
    best_energy = math.inf
    for read in range(cfg.reads):
        bits, _, _, _, _, _ = _run_read(q, betas, cfg.seed, read)
        exact = energy_binary(q, bits)
        if exact < best_energy:
            best_energy = exact
            best_bits = bits
    return AnnealResult(
        bits=best_bits,
        energy=best_energy,
        steps=cfg.reads * cfg.schedule.sweeps,
        wall_time_s=time.perf_counter() - t0,
    )
