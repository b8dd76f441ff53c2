"""Multi-barrier, multi-slit interference amplitudes, two ways.

amplitude_bruteforce enumerates every slit-choice path (cost prod N_k, the
exponential route); amplitude_imbedded embeds the detector amplitude in the
family of slit-arrival amplitudes and recurses forward across barriers (cost
sum N_k N_{k+1} + N_b multiply-adds, linear in the barrier count at fixed
width). Both are exact; equivalence of the two routes is the oracle check.

Legs are free complex transition amplitudes: no unitarity is imposed and
intensities may exceed 1. The lattice is feed-forward only (no reflections),
which is what licenses the forward recursion.
"""

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import CapacityError, DomainError

BRUTE_FORCE_PATH_GUARD = 10**8


def _as_complex_vector(values, length: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, order="C")
    if arr.shape != (length,):
        raise DomainError(f"{name} must have shape ({length},), got {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise DomainError(f"{name} contains NaN or Inf")
    return arr


@dataclass(frozen=True)
class SlitLattice:
    """Layered feed-forward interference graph.

    slits[k] is the slit count of barrier k+1; transfers[k][i, j] is the leg
    from slit i of barrier k+1 to slit j of barrier k+2; source couples into
    barrier 1 and detector collects from barrier b.
    """

    slits: tuple
    source: np.ndarray
    transfers: tuple
    detector: np.ndarray
    legs_flat: np.ndarray = field(init=False, repr=False, compare=False)
    leg_offsets: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        slits = tuple(int(n) for n in self.slits)
        if len(slits) < 1 or any(n < 1 for n in slits):
            raise DomainError(f"slit counts must be positive, got {slits}")
        source = _as_complex_vector(self.source, slits[0], "source")
        detector = _as_complex_vector(self.detector, slits[-1], "detector")
        transfers = tuple(np.array(t, dtype=np.complex128, order="C") for t in self.transfers)
        if len(transfers) != len(slits) - 1:
            raise DomainError(
                f"{len(slits)} barriers need {len(slits) - 1} transfer stages, got {len(transfers)}"
            )
        for k, t in enumerate(transfers):
            if t.shape != (slits[k], slits[k + 1]):
                raise DomainError(
                    f"transfer stage {k + 1} must be {slits[k]}x{slits[k + 1]}, got {t.shape}"
                )
            if not np.all(np.isfinite(t.view(np.float64))):
                raise DomainError(f"transfer stage {k + 1} contains NaN or Inf")
        source.setflags(write=False)
        detector.setflags(write=False)
        for t in transfers:
            t.setflags(write=False)
        object.__setattr__(self, "slits", slits)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "transfers", transfers)
        object.__setattr__(self, "detector", detector)
        # flat stage-major leg layout, precomputed once for the jitted kernels
        legs_flat, leg_offsets = kernels.flatten_transfers(transfers)
        legs_flat.setflags(write=False)
        leg_offsets.setflags(write=False)
        object.__setattr__(self, "legs_flat", legs_flat)
        object.__setattr__(self, "leg_offsets", leg_offsets)

    @property
    def barriers(self) -> int:
        return len(self.slits)

    def path_count(self) -> int:
        return math.prod(self.slits)


@dataclass(frozen=True)
class PathSumResult:
    amplitude: complex
    paths_enumerated: int
    multiply_add_count: int

    def as_dict(self) -> dict:
        return {
            "amp": [self.amplitude.real, self.amplitude.imag],
            "intensity": abs(self.amplitude) ** 2,
            "paths": self.paths_enumerated,
            "multiply_adds": self.multiply_add_count,
        }


def amplitude_bruteforce(l: SlitLattice) -> PathSumResult:
    """Sum the leg products of all prod N_k paths.

    multiply_add_count is the nominal per-path cost: b multiplies fold the
    b+1 legs of each path into the accumulator.
    """
    paths = l.path_count()
    if paths > BRUTE_FORCE_PATH_GUARD:
        raise CapacityError(
            f"{paths} paths exceed the brute-force guard of {BRUTE_FORCE_PATH_GUARD}"
        )
    amp = kernels.path_sum_brute(
        l.slits, l.source, l.transfers, l.detector, l.legs_flat, l.leg_offsets
    )
    return PathSumResult(amp, paths, paths * l.barriers)


def imbedded_multiply_adds(slits) -> int:
    return sum(slits[k] * slits[k + 1] for k in range(len(slits) - 1)) + slits[-1]


def amplitude_imbedded(l: SlitLattice) -> PathSumResult:
    """Forward recursion over slit-arrival amplitudes; linear in the barrier count."""
    v = kernels.imbedded_forward(
        l.slits, l.source, l.transfers, l.barriers, l.legs_flat, l.leg_offsets
    )
    amp = complex(np.dot(v, l.detector))
    return PathSumResult(amp, 0, imbedded_multiply_adds(l.slits))


def slit_amplitudes(l: SlitLattice, k: int) -> np.ndarray:
    """The imbedded family member at barrier k: amplitudes to reach each slit."""
    if not 1 <= k <= l.barriers:
        raise DomainError(f"barrier index {k} outside 1..{l.barriers}")
    return kernels.imbedded_forward(l.slits, l.source, l.transfers, k, l.legs_flat, l.leg_offsets)


def intensity(l: SlitLattice) -> float:
    """Detector intensity |amplitude|^2."""
    return abs(amplitude_imbedded(l).amplitude) ** 2


class ParameterCount(NamedTuple):
    family_size: int  # imbedded amplitudes: sum of slit counts (Nb for uniform N)
    leg_count: int  # raw legs: N_1 + sum N_k N_{k+1} + N_b


def parameter_count(l: SlitLattice) -> ParameterCount:
    family = sum(l.slits)
    legs = l.slits[0] + sum(
        l.slits[k] * l.slits[k + 1] for k in range(l.barriers - 1)
    ) + l.slits[-1]
    return ParameterCount(family, legs)


def random_lattice(slits, rng: np.random.Generator) -> SlitLattice:
    """Lattice with independent complex Gaussian legs.

    Transfer legs carry a 1/sqrt(N) scale so the forward recursion stays in
    floating range at any barrier depth; without it the slit amplitudes of a
    deep lattice overflow exponentially.
    """
    slits = tuple(int(n) for n in slits)

    def cgauss(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)

    return SlitLattice(
        slits=slits,
        source=cgauss(slits[0]),
        transfers=tuple(
            cgauss(slits[k], slits[k + 1]) / math.sqrt(slits[k + 1])
            for k in range(len(slits) - 1)
        ),
        detector=cgauss(slits[-1]),
    )


# -- lattice file format ------------------------------------------------------


def _pairs(arr: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in arr]


def lattice_to_dict(l: SlitLattice) -> dict:
    return {
        "slits": list(l.slits),
        "source": _pairs(l.source),
        "transfers": [[_pairs(row) for row in t] for t in l.transfers],
        "detector": _pairs(l.detector),
    }


def lattice_from_dict(doc: dict) -> SlitLattice:
    def vec(pairs):
        return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)

    return SlitLattice(
        slits=tuple(int(n) for n in doc["slits"]),
        source=vec(doc["source"]),
        transfers=tuple(
            np.array([[complex(re, im) for re, im in row] for row in t], dtype=np.complex128)
            for t in doc["transfers"]
        ),
        detector=vec(doc["detector"]),
    )


def save_lattice(l: SlitLattice, path) -> None:
    with open(path, "w") as fh:
        json.dump(lattice_to_dict(l), fh)


def load_lattice(path) -> SlitLattice:
    with open(path) as fh:
        return lattice_from_dict(json.load(fh))
