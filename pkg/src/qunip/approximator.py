"""Trainable interference neuron.

The model output is the detector intensity of K interfering paths whose
phases depend linearly on the input:

    f(u) = | sum_k c_k exp(i (w_k . u + phi_k)) |^2

With m = 0 (no input dependence) this is exactly the intensity of a
one-barrier slit lattice with source legs c_k e^{i phi_k} and unit detector
couplings. Fitting uses full-batch fixed-step gradient descent on the mean
squared error over P examples - training replaces exact realization.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError


@dataclass(frozen=True)
class InterferenceNeuron:
    """K complex path weights, K real phase-weight vectors, K phase biases."""

    c: np.ndarray  # complex128, shape (K,)
    w: np.ndarray  # float64, shape (K, m)
    phi: np.ndarray  # float64, shape (K,)

    def __post_init__(self):
        c = np.array(self.c, dtype=np.complex128, order="C")
        w = np.atleast_2d(np.array(self.w, dtype=np.float64, order="C"))
        phi = np.array(self.phi, dtype=np.float64, order="C")
        if c.ndim != 1 or c.size < 1:
            raise DomainError(f"c must be a non-empty vector, got shape {c.shape}")
        k = c.size
        if w.shape[0] != k or phi.shape != (k,):
            raise DomainError(
                f"parameter shapes disagree: c {c.shape}, w {w.shape}, phi {phi.shape}"
            )
        for arr, name in ((c.view(np.float64), "c"), (w, "w"), (phi, "phi")):
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} contains NaN or Inf")
        for arr in (c, w, phi):
            arr.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "phi", phi)

    @property
    def num_paths(self) -> int:
        return self.c.size

    @property
    def input_dim(self) -> int:
        return self.w.shape[1]


@dataclass(frozen=True)
class TrainingSet:
    """P input vectors of dimension m with real targets."""

    inputs: np.ndarray  # float64, shape (P, m)
    targets: np.ndarray  # float64, shape (P,)

    def __post_init__(self):
        u = np.atleast_2d(np.array(self.inputs, dtype=np.float64, order="C"))
        y = np.array(self.targets, dtype=np.float64, order="C")
        if u.shape[0] < 1:
            raise DomainError("training set must contain at least one sample")
        if y.shape != (u.shape[0],):
            raise DomainError(f"{u.shape[0]} inputs but target shape {y.shape}")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(y))):
            raise DomainError("training data contains NaN or Inf")
        u.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "inputs", u)
        object.__setattr__(self, "targets", y)

    @property
    def size(self) -> int:
        return self.inputs.shape[0]


def init_neuron(k: int, m: int, seed: int) -> InterferenceNeuron:
    """Seeded start: c_k uniform on the disk of radius 1/K, w and phi uniform in [-1, 1]."""
    if k < 1 or m < 0:
        raise DomainError(f"need k >= 1 and m >= 0, got k={k}, m={m}")
    rng = np.random.default_rng(seed)
    radius = np.sqrt(rng.uniform(0.0, 1.0, k)) / k
    angle = rng.uniform(0.0, 2.0 * math.pi, k)
    c = radius * np.exp(1j * angle)
    w = rng.uniform(-1.0, 1.0, (k, m))
    phi = rng.uniform(-1.0, 1.0, k)
    return InterferenceNeuron(c, w, phi)


def _phase_factors(n: InterferenceNeuron, inputs: np.ndarray) -> np.ndarray:
    """exp(i theta_pk) with theta_pk = w_k . u_p + phi_k, shape (P, K)."""
    theta = inputs @ n.w.T + n.phi[None, :]
    return np.exp(1j * theta)


def predict_batch(n: InterferenceNeuron, inputs: np.ndarray) -> np.ndarray:
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    if inputs.shape[1] != n.input_dim:
        raise DomainError(f"input dimension {inputs.shape[1]} != model dimension {n.input_dim}")
    z = _phase_factors(n, inputs) @ n.c
    return np.abs(z) ** 2


def predict(n: InterferenceNeuron, u) -> float:
    """Detector intensity of the K interfering paths for one input."""
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    if u.shape != (n.input_dim,):
        raise DomainError(f"input shape {u.shape} != ({n.input_dim},)")
    return float(predict_batch(n, u[None, :])[0])


def loss(n: InterferenceNeuron, t: TrainingSet) -> float:
    """Mean squared error over the training set."""
    if t.inputs.shape[1] != n.input_dim:
        raise DomainError(
            f"training dimension {t.inputs.shape[1]} != model dimension {n.input_dim}"
        )
    r = predict_batch(n, t.inputs) - t.targets
    return float(np.mean(r * r))


@dataclass(frozen=True)
class NeuronGradient:
    """Loss partials shaped like the parameters (real/imag parts of c split out)."""

    c_re: np.ndarray
    c_im: np.ndarray
    w: np.ndarray
    phi: np.ndarray

    def norm(self) -> float:
        return math.sqrt(
            float(
                (self.c_re**2).sum()
                + (self.c_im**2).sum()
                + (self.w**2).sum()
                + (self.phi**2).sum()
            )
        )


def gradient(n: InterferenceNeuron, t: TrainingSet) -> NeuronGradient:
    """Exact analytic partials of the mean squared error.

    With z_p = sum_k c_k e^{i theta_pk} and f_p = |z_p|^2:
      df/dRe c_k = 2 Re(conj(z_p) e^{i theta_pk})
      df/dIm c_k = -2 Im(conj(z_p) e^{i theta_pk})
      df/dtheta_pk = -2 Im(conj(z_p) c_k e^{i theta_pk})
    chained through theta_pk = w_k . u_p + phi_k.
    """
    if t.inputs.shape[1] != n.input_dim:
        raise DomainError(
            f"training dimension {t.inputs.shape[1]} != model dimension {n.input_dim}"
        )
    e = _phase_factors(n, t.inputs)  # (P, K)
    z = e @ n.c  # (P,)
    f = np.abs(z) ** 2
    g = (2.0 / t.size) * (f - t.targets)  # dL/df_p
    zbar_e = z.conj()[:, None] * e  # (P, K)
    c_re = g @ (2.0 * zbar_e.real)
    c_im = g @ (-2.0 * zbar_e.imag)
    dtheta = -2.0 * (zbar_e * n.c[None, :]).imag * g[:, None]  # (P, K)
    w_grad = dtheta.T @ t.inputs
    phi_grad = dtheta.sum(axis=0)
    return NeuronGradient(c_re, c_im, w_grad, phi_grad)


def train(
    n: InterferenceNeuron, t: TrainingSet, lr: float, epochs: int
) -> tuple[InterferenceNeuron, list]:
    """Full-batch fixed-step gradient descent from the given starting point.

    Deterministic: the only randomness in the fitting pipeline lives in
    init_neuron's seed. loss_history has epochs+1 entries (initial loss
    first). Raises DivergenceError naming the epoch if the loss goes
    non-finite.
    """
    if lr <= 0:
        raise DomainError(f"learning rate must be positive, got {lr}")
    if epochs < 1:
        raise DomainError(f"epochs must be >= 1, got {epochs}")
    c = n.c.copy()
    w = n.w.copy()
    phi = n.phi.copy()
    history = [loss(n, t)]
    current = n
    # overflow inside a diverging run is the detection signal, not a warning
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, epochs + 1):
            grad = gradient(current, t)
            c = c - lr * (grad.c_re + 1j * grad.c_im)
            w = w - lr * grad.w
            phi = phi - lr * grad.phi
            if not (
                np.all(np.isfinite(c.view(np.float64)))
                and np.all(np.isfinite(w))
                and np.all(np.isfinite(phi))
            ):
                raise DivergenceError(f"parameters became non-finite at epoch {epoch}")
            current = InterferenceNeuron(c, w, phi)
            value = loss(current, t)
            if not math.isfinite(value):
                raise DivergenceError(f"loss became non-finite at epoch {epoch}")
            history.append(value)
    return current, history


def resource_report(k: int, p: int, d_equiv: int) -> dict:
    """Resource comparison as data: trained path count, ceil(sqrt(P)), and 2^d."""
    if k < 1 or p < 1 or d_equiv < 1:
        raise DomainError(f"all arguments must be positive, got ({k}, {p}, {d_equiv})")
    if d_equiv > 62:
        raise DomainError(f"2^{d_equiv} exceeds the representable unit count")
    return {
        "trained_paths": k,
        "sqrtP_reference": math.isqrt(p - 1) + 1,
        "exact_realization_units": 1 << d_equiv,
    }


# -- file formats -------------------------------------------------------------
# training CSV: m feature columns then one target column, header required
# model JSON: {"K": int, "m": int, "c": [[re, im], ...], "w": [[...], ...], "phi": [...]}


def load_training_csv(path) -> TrainingSet:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 2:
        raise DomainError(f"training CSV {path} needs a header and at least one sample")
    rows = []
    width = len(lines[0].split(","))
    if width < 2:
        raise DomainError(f"training CSV {path} needs at least one feature column and a target")
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != width:
            raise DomainError(f"{path}:{lineno}: expected {width} columns, got {len(parts)}")
        try:
            rows.append([float(v) for v in parts])
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: non-numeric value") from exc
    data = np.array(rows, dtype=np.float64)
    return TrainingSet(data[:, :-1], data[:, -1])


def save_training_csv(t: TrainingSet, path) -> None:
    m = t.inputs.shape[1]
    with open(path, "w") as fh:
        fh.write(",".join([f"u{i + 1}" for i in range(m)] + ["y"]) + "\n")
        for u, y in zip(t.inputs, t.targets):
            fh.write(",".join(repr(float(v)) for v in u) + f",{float(y)!r}\n")


def model_to_dict(n: InterferenceNeuron) -> dict:
    return {
        "K": n.num_paths,
        "m": n.input_dim,
        "c": [[float(z.real), float(z.imag)] for z in n.c],
        "w": [[float(v) for v in row] for row in n.w],
        "phi": [float(v) for v in n.phi],
    }


def model_from_dict(doc: dict) -> InterferenceNeuron:
    k = int(doc["K"])
    m = int(doc["m"])
    c = np.array([complex(re, im) for re, im in doc["c"]], dtype=np.complex128)
    w = np.array(doc["w"], dtype=np.float64).reshape(k, m)
    phi = np.array(doc["phi"], dtype=np.float64)
    return InterferenceNeuron(c, w, phi)


def save_model(n: InterferenceNeuron, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(n), fh)


def load_model(path) -> InterferenceNeuron:
    with open(path) as fh:
        return model_from_dict(json.load(fh))
