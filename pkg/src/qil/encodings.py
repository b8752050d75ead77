"""Classical-image to quantum-register encodings and their decoders.

Three schemes with very different measurement behaviour:

* FRQI stores each gray value in the amplitude angle of one color qubit
  entangled with a position register (2n+1 qubits). Finite measurements can
  only estimate the angle, so retrieval is inherently noisy.
* NEQR stores each gray value as a q-bit basis state entangled with the
  position register (q+2n qubits). Codes are orthogonal, so any observation
  of a position yields its exact value.
* QuBo keeps one computational-basis qubit per pixel of a chosen bit plane.
  Measurement does not disturb basis states, so retrieval is exact at any
  shot budget.

Register basis layout: index = code * 4^n + position, position = Y * 2^n + X
row-major with Y in the high bits. The color/gray register therefore
occupies the top qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import StateVector, born_probabilities
from .images import BinaryImage, GrayImage
from .tolerances import TOL

#: Hard ceiling on simulated register width (2^20 amplitudes is desk scale).
REGISTER_CAP = 20

HALF_PI = math.pi / 2.0


class RegisterTooLargeError(ValueError):
    """Encoding would exceed the configured register qubit cap."""


class NotNeqrStateError(ValueError):
    """Register does not carry exactly one gray code per position."""


class CbsViolationError(ValueError):
    """A qubit that must be a computational basis state is not one."""


@dataclass(frozen=True, eq=False)
class FrqiState:
    """Angle-encoded image register over 2n+1 qubits."""

    n: int
    q: int
    state: StateVector

    def __post_init__(self):
        if self.state.num_qubits != 2 * self.n + 1:
            raise ValueError(
                f"FRQI register needs {2 * self.n + 1} qubits, got {self.state.num_qubits}"
            )


@dataclass(frozen=True, eq=False)
class NeqrState:
    """Basis-encoded image register over q+2n qubits.

    Every nonzero amplitude must equal 1/2^n: one gray code per position,
    uniformly weighted.
    """

    n: int
    q: int
    state: StateVector

    def __post_init__(self):
        if self.state.num_qubits != self.q + 2 * self.n:
            raise ValueError(
                f"NEQR register needs {self.q + 2 * self.n} qubits, got {self.state.num_qubits}"
            )
        amps = self.state.amplitudes
        weight = 1.0 / 2**self.n
        nonzero = amps[np.abs(amps) > TOL.encoder_norm]
        if len(nonzero) != 4**self.n or np.abs(nonzero - weight).max() > 1e-9:
            raise NotNeqrStateError(
                "register amplitudes do not form one uniformly weighted code per position"
            )


@dataclass(frozen=True, eq=False)
class QuboState:
    """One CBS qubit per pixel; shape (side, side, 2) with exact |0> or |1> entries."""

    n: int
    qubits: np.ndarray

    def __post_init__(self):
        arr = np.array(self.qubits, dtype=complex)
        side = 2**self.n
        if arr.shape != (side, side, 2):
            raise ValueError(f"expected qubit grid of shape {(side, side, 2)}, got {arr.shape}")
        is_zero = (arr[..., 0] == 1.0) & (arr[..., 1] == 0.0)
        is_one = (arr[..., 0] == 0.0) & (arr[..., 1] == 1.0)
        if not (is_zero | is_one).all():
            raise CbsViolationError("every qubit must be exactly |0> or |1>")
        arr.setflags(write=False)
        object.__setattr__(self, "qubits", arr)


@dataclass(frozen=True, eq=False)
class ShotHistogram:
    """Tally of basis outcomes over ``total`` destructive register measurements."""

    counts: dict[int, int]
    total: int

    def __post_init__(self):
        object.__setattr__(self, "counts", dict(self.counts))
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("counts must be nonnegative")
        if sum(self.counts.values()) != self.total:
            raise ValueError("counts must sum to the total shot number")


@dataclass(frozen=True)
class CoverageReport:
    """Positions never observed during shot-based decoding (filled with 0)."""

    total_positions: int
    observed_positions: int
    missing: tuple[tuple[int, int], ...]

    @property
    def complete(self) -> bool:
        return not self.missing


def sample_histogram(s: StateVector, shots: int, seed: int) -> ShotHistogram:
    """Histogram of ``shots`` independent full-register measurements.

    Each shot is one preparation followed by one destructive measurement;
    the joint tally is a single multinomial draw over the Born distribution.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    p = born_probabilities(s)
    p = p / p.sum()
    support = np.flatnonzero(p > 0)
    rng = np.random.default_rng(seed)
    drawn = rng.multinomial(shots, p[support])
    counts = {int(idx): int(c) for idx, c in zip(support, drawn) if c > 0}
    return ShotHistogram(counts=counts, total=shots)


def merge_histograms(*hists: ShotHistogram) -> ShotHistogram:
    """Order-independent merge of per-worker histograms."""
    counts: dict[int, int] = {}
    for h in hists:
        for idx, c in h.counts.items():
            counts[idx] = counts.get(idx, 0) + c
    return ShotHistogram(counts=counts, total=sum(h.total for h in hists))


# ---------------------------------------------------------------------------
# gray <-> angle


def gray_to_theta(g: int, q: int) -> float:
    """Monotone map of a q-bit gray value onto [0, pi/2]; black is 0."""
    if q < 1:
        raise ValueError("bit depth q must be at least 1")
    if not 0 <= g <= 2**q - 1:
        raise ValueError(f"gray value {g} outside [0, {2**q - 1}]")
    return g * HALF_PI / (2**q - 1)


def theta_to_gray(theta: float, q: int) -> int:
    """Rounding inverse of :func:`gray_to_theta`."""
    g = int(round(theta * (2**q - 1) / HALF_PI))
    return min(max(g, 0), 2**q - 1)


def _check_cap(qubits_needed: int, max_qubits: int) -> None:
    if qubits_needed > max_qubits:
        raise RegisterTooLargeError(
            f"encoding needs {qubits_needed} qubits, cap is {max_qubits}"
        )


# ---------------------------------------------------------------------------
# FRQI


def frqi_encode(img: GrayImage, max_qubits: int = REGISTER_CAP) -> FrqiState:
    """Angle-encode an image: (1/2^n) sum (cos t|0> + sin t|1>) |YX>."""
    n = img.n
    _check_cap(2 * n + 1, max_qubits)
    npos = 4**n
    theta = img.pixels.reshape(-1) * (HALF_PI / (2**img.q - 1))
    amps = np.empty(2 * npos, dtype=complex)
    scale = 1.0 / 2**n
    amps[:npos] = np.cos(theta) * scale
    amps[npos:] = np.sin(theta) * scale
    return FrqiState(n=n, q=img.q, state=StateVector(num_qubits=2 * n + 1, amplitudes=amps))


def frqi_decode_register(
    state: StateVector, n: int, q: int, shots: int = 0, seed: int = 0
) -> tuple[GrayImage, CoverageReport]:
    """Decode any 2n+1 qubit register with FRQI semantics.

    shots = 0 reads amplitudes directly (the infinite-shot limit) and inverts
    the encoding exactly. With shots > 0, S full-register measurements are
    drawn; each position's angle is estimated from its color-0 frequency via
    theta = arccos(clamp(sqrt(p0))), and positions never observed decode to 0
    and are listed in the coverage report.
    """
    if state.num_qubits != 2 * n + 1:
        raise ValueError("register size does not match an FRQI layout")
    side = 2**n
    npos = side * side
    levels = 2**q - 1
    if shots == 0:
        a0 = np.abs(state.amplitudes[:npos])
        a1 = np.abs(state.amplitudes[npos:])
        theta = np.arctan2(a1, a0)
        grays = np.clip(np.rint(theta * levels / HALF_PI), 0, levels).astype(np.int64)
        report = CoverageReport(total_positions=npos, observed_positions=npos, missing=())
        return GrayImage(pixels=grays.reshape(side, side), q=q), report
    hist = sample_histogram(state, shots, seed)
    n0 = np.zeros(npos, dtype=np.int64)
    n1 = np.zeros(npos, dtype=np.int64)
    for idx, c in hist.counts.items():
        if idx // npos == 0:
            n0[idx] += c
        else:
            n1[idx - npos] += c
    totals = n0 + n1
    observed = totals > 0
    p0 = np.divide(n0, totals, out=np.zeros(npos, dtype=float), where=observed)
    theta = np.arccos(np.clip(np.sqrt(p0), 0.0, 1.0))
    grays = np.clip(np.rint(theta * levels / HALF_PI), 0, levels).astype(np.int64)
    grays[~observed] = 0
    missing = tuple((int(i // side), int(i % side)) for i in np.flatnonzero(~observed))
    report = CoverageReport(
        total_positions=npos, observed_positions=int(observed.sum()), missing=missing
    )
    return GrayImage(pixels=grays.reshape(side, side), q=q), report


def frqi_decode(fs: FrqiState, shots: int = 0, seed: int = 0):
    return frqi_decode_register(fs.state, fs.n, fs.q, shots=shots, seed=seed)


# ---------------------------------------------------------------------------
# NEQR


def neqr_encode(img: GrayImage, max_qubits: int = REGISTER_CAP) -> NeqrState:
    """Basis-encode an image: (1/2^n) sum |f(Y,X)> |YX>."""
    n, q = img.n, img.q
    _check_cap(q + 2 * n, max_qubits)
    npos = 4**n
    amps = np.zeros(2**(q + 2 * n), dtype=complex)
    flat = img.pixels.reshape(-1)
    amps[flat * npos + np.arange(npos)] = 1.0 / 2**n
    return NeqrState(n=n, q=q, state=StateVector(num_qubits=q + 2 * n, amplitudes=amps))


def neqr_decode_register(
    state: StateVector, n: int, q: int, shots: int = 0, seed: int = 0
) -> tuple[GrayImage, CoverageReport]:
    """Decode any q+2n qubit register with NEQR semantics.

    Exact mode requires a single nonzero code per position and raises
    NotNeqrStateError otherwise. Shot mode records, per observed position,
    the most frequent code (ties break toward the smaller value, which never
    triggers on a true NEQR register since codes are deterministic).
    """
    if state.num_qubits != q + 2 * n:
        raise ValueError("register size does not match an NEQR layout")
    side = 2**n
    npos = side * side
    if shots == 0:
        table = np.abs(state.amplitudes.reshape(2**q, npos))
        hits = table > 1e-9
        if not (hits.sum(axis=0) == 1).all():
            raise NotNeqrStateError("some position has zero or several gray codes")
        grays = np.argmax(hits, axis=0).astype(np.int64)
        report = CoverageReport(total_positions=npos, observed_positions=npos, missing=())
        return GrayImage(pixels=grays.reshape(side, side), q=q), report
    hist = sample_histogram(state, shots, seed)
    best_count = np.zeros(npos, dtype=np.int64)
    grays = np.zeros(npos, dtype=np.int64)
    seen = np.zeros(npos, dtype=bool)
    for idx, c in sorted(hist.counts.items()):
        code, pos = idx // npos, idx % npos
        seen[pos] = True
        if c > best_count[pos]:
            best_count[pos] = c
            grays[pos] = code
    missing = tuple((int(i // side), int(i % side)) for i in np.flatnonzero(~seen))
    report = CoverageReport(
        total_positions=npos, observed_positions=int(seen.sum()), missing=missing
    )
    return GrayImage(pixels=grays.reshape(side, side), q=q), report


def neqr_decode(ns: NeqrState, shots: int = 0, seed: int = 0):
    return neqr_decode_register(ns.state, ns.n, ns.q, shots=shots, seed=seed)


# ---------------------------------------------------------------------------
# QuBo


def qubo_encode(img: GrayImage, plane: int | None = None) -> QuboState:
    """One CBS qubit per pixel of one bit plane (most significant by default)."""
    if plane is None:
        plane = img.q - 1
    if not 0 <= plane <= img.q - 1:
        raise ValueError(f"plane must lie in [0, {img.q - 1}], got {plane}")
    bits = (img.pixels >> plane) & 1
    grid = np.zeros((*bits.shape, 2), dtype=complex)
    grid[..., 0] = 1 - bits
    grid[..., 1] = bits
    return QuboState(n=img.n, qubits=grid)


def qubo_encode_all_planes(img: GrayImage) -> tuple[QuboState, ...]:
    """Every bit plane of the image, least significant first."""
    return tuple(qubo_encode(img, plane) for plane in range(img.q))


def qubo_decode(qs: QuboState) -> BinaryImage:
    """Measure every qubit; deterministic and exact since all are CBS."""
    zero = qs.qubits[..., 0] == 1.0
    one = qs.qubits[..., 1] == 1.0
    if not np.logical_xor(zero, one).all():
        raise CbsViolationError("grid contains a non-CBS qubit")
    return BinaryImage(bits=one.astype(np.int64))


# ---------------------------------------------------------------------------
# budgets


def qubit_budget(representation: str, n: int, q: int) -> int:
    """Qubits required by a representation for a 2^n x 2^n, q-bit image."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if q < 1:
        raise ValueError("q must be at least 1")
    rep = representation.lower()
    if rep == "frqi":
        return 2 * n + 1
    if rep == "neqr":
        return q + 2 * n
    if rep == "qubo":
        return 4**n
    raise ValueError(f"unknown representation {representation!r}")
