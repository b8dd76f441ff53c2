"""Product-state detection and bipartite structure of pure states.

A d-qubit pure state factorizes into single-qubit states iff every prefix cut
{1..k} | {k+1..d} has Schmidt rank 1, so d-1 SVDs settle the verdict. The
module also carries the 2^d-vs-2d parameter-count arithmetic for entangled
versus product descriptions.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, DomainError
from .statevec import PureState, fidelity

DEFAULT_TOL = 1e-8

# description_length returns plain ints but is capped so results fit in
# int64 for serialization.
_MAX_EXPONENT = 62


def _cut_matrix(s: PureState, left) -> np.ndarray:
    """Amplitude matrix with rows indexed by the left-side labels of the cut."""
    d = s.num_qubits
    left = tuple(left)
    if not left:
        raise DomainError("cut must have a non-empty left side")
    for q in left:
        if not 1 <= q <= d:
            raise DomainError(f"cut qubit {q} outside 1..{d}")
    if len(set(left)) != len(left):
        raise DomainError(f"duplicate qubits in cut {left}")
    if len(left) >= d:
        raise DomainError("cut must be a proper subset of the qubits")
    left_axes = [q - 1 for q in left]
    right_axes = [ax for ax in range(d) if ax not in left_axes]
    t = s.amps.reshape([2] * d)
    return t.transpose(left_axes + right_axes).reshape(1 << len(left), -1)


def schmidt_rank(s: PureState, left, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above tol * sigma_max across the cut left | rest."""
    if not 0.0 < tol < 1.0:
        raise DomainError(f"tol must be in (0, 1), got {tol}")
    sv = np.linalg.svd(_cut_matrix(s, left), compute_uv=False)
    return int(np.count_nonzero(sv > tol * sv[0]))


def two_qubit_tangle(s: PureState) -> float:
    """|a00 a11 - a01 a10| for a 2-qubit state; 0 iff the state is a product."""
    if s.num_qubits != 2:
        raise DomainError(f"two_qubit_tangle needs d=2, got d={s.num_qubits}")
    a = s.amps
    return abs(a[0] * a[3] - a[1] * a[2])


@dataclass(frozen=True)
class FactorizationReport:
    """Verdict plus evidence from the left-to-right peeling of single-qubit factors."""

    is_product: bool
    factors: Optional[tuple]  # d arrays of shape (2,), only when is_product
    prefix_schmidt_ranks: tuple  # rank at cut {1..k} | {k+1..d}, k = 1..d-1
    residual: float  # 1 - fidelity of the reconstructed product with the input

    def as_dict(self) -> dict:
        factors = None
        if self.factors is not None:
            factors = [
                [float(f[0].real), float(f[0].imag), float(f[1].real), float(f[1].imag)]
                for f in self.factors
            ]
        return {
            "is_product": self.is_product,
            "ranks": list(self.prefix_schmidt_ranks),
            "residual": self.residual,
            "factors": factors,
        }


def _phase_fixed(vec: np.ndarray) -> np.ndarray:
    """Unit vector scaled so its first non-negligible component is real positive."""
    v = vec / np.linalg.norm(vec)
    for comp in v:
        if abs(comp) > 1e-12:
            return v * (comp.conjugate() / abs(comp))
    return v


def factor_product(s: PureState, tol: float = DEFAULT_TOL) -> FactorizationReport:
    """Decide product structure and recover per-qubit factors when it exists.

    Qubits are peeled left to right; at each step the leading singular vector
    of the (2 x 2^remaining) amplitude matrix gives the qubit factor and the
    residual state. Factors follow the first-component-real-positive phase
    convention.
    """
    if not 0.0 < tol < 1.0:
        raise DomainError(f"tol must be in (0, 1), got {tol}")
    d = s.num_qubits
    ranks = []
    for k in range(1, d):
        sv = np.linalg.svd(s.amps.reshape(1 << k, -1), compute_uv=False)
        ranks.append(int(np.count_nonzero(sv > tol * sv[0])))

    factors = []
    working = s.amps
    for _ in range(d - 1):
        u, sv, vh = np.linalg.svd(working.reshape(2, -1), full_matrices=False)
        factors.append(_phase_fixed(u[:, 0]))
        working = vh[0]
    factors.append(_phase_fixed(working))

    recon = factors[0]
    for f in factors[1:]:
        recon = np.kron(recon, f)
    residual = 1.0 - fidelity(s, PureState(recon, check=False))

    is_product = all(r == 1 for r in ranks)
    return FactorizationReport(
        is_product=is_product,
        factors=tuple(factors) if is_product else None,
        prefix_schmidt_ranks=tuple(ranks),
        residual=float(residual),
    )


def description_length(d: int, product: bool) -> int:
    """Complex-parameter count before normalization: 2d if product, else 2^d."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if product:
        return 2 * d
    if d > _MAX_EXPONENT:
        raise CapacityError(f"2^{d} exceeds the representable parameter count")
    return 1 << d
