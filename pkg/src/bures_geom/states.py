"""Density matrices, qubit coordinates and Kraus channels."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .matcore import ValidationError, check_hermitian, field_of, haar_random, hermitize

TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10
COMPLETENESS_ATOL = 1e-10

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class StateError(ValidationError):
    """Raised by :func:`new_density`; ``violations`` lists every failed check."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid density matrix: " + "; ".join(violations))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated trace-one PSD matrix. Build with :func:`new_density`."""

    mat: np.ndarray
    beta: int

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.mat, self.mat)))

    def to_json(self) -> dict:
        out = {"n": self.n, "beta": self.beta, "re": np.real(self.mat).tolist()}
        if self.beta == 2:
            out["im"] = np.imag(self.mat).tolist()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DensityMatrix":
        beta = int(obj["beta"])
        re = np.asarray(obj["re"], dtype=float)
        if beta == 2:
            m = re + 1j * np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        elif "im" in obj and np.any(np.asarray(obj["im"], dtype=float) != 0):
            raise StateError(["beta=1 state file carries imaginary parts"])
        else:
            m = re
        if m.shape != (int(obj["n"]), int(obj["n"])):
            raise StateError([f"declared n={obj['n']} but matrix shape is {m.shape}"])
        return new_density(m, beta)

    def __repr__(self) -> str:
        return f"DensityMatrix(n={self.n}, beta={self.beta}, mat={self.mat!r})"


def new_density(m, beta: int | None = None, tol: float = PSD_ATOL) -> DensityMatrix:
    """Validate ``m`` as a density matrix.

    All violated invariants are collected into a single :class:`StateError`.
    """
    try:
        m = check_hermitian(m, beta)
    except ValidationError as exc:
        raise StateError([str(exc)]) from exc
    beta = field_of(m) if beta is None else beta
    violations = []
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_ATOL:
        violations.append(f"trace is {tr!r}, not 1")
    lo = float(np.linalg.eigvalsh(hermitize(m))[0])
    if lo < -tol:
        violations.append(f"negative eigenvalue {lo:.3e}")
    if violations:
        raise StateError(violations)
    return DensityMatrix(m, beta)


def load_state(path) -> DensityMatrix:
    with open(path) as fh:
        return DensityMatrix.from_json(json.load(fh))


def dump_state(rho: DensityMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(rho.to_json(), fh)


def as_matrix(x) -> np.ndarray:
    return x.mat if isinstance(x, DensityMatrix) else np.asarray(x)


def maximally_mixed(n: int, beta: int = 2) -> DensityMatrix:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    dtype = complex if beta == 2 else float
    return DensityMatrix(np.eye(n, dtype=dtype) / n, beta)


def pure_state(psi) -> DensityMatrix:
    psi = np.asarray(psi)
    psi = psi / np.linalg.norm(psi)
    beta = field_of(psi)
    return new_density(np.outer(psi, psi.conj()), beta)


def random_pure(n: int, beta: int, rng: np.random.Generator) -> DensityMatrix:
    return pure_state(haar_random(n, beta, rng)[:, 0])


def random_hs_state(n: int, beta: int, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt distributed mixed state, G G^dagger / Tr."""
    if beta == 2:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    else:
        g = rng.standard_normal((n, n))
    m = g @ g.conj().T
    return new_density(hermitize(m / np.trace(m).real), beta)


def random_interior_state(n: int, beta: int, rng: np.random.Generator, mix: float = 0.5) -> DensityMatrix:
    """Random state whose spectrum is bounded below by ``mix / n``.

    Eigenvalues are ``(1 - mix) * Dirichlet(1) + mix / n``, eigenvectors Haar.
    """
    lam = (1 - mix) * rng.dirichlet(np.ones(n)) + mix / n
    w = haar_random(n, beta, rng)
    return new_density(hermitize((w * lam) @ w.conj().T), beta)


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)


class UhlmannPoint(NamedTuple):
    """Point on the radius-1/2 Uhlmann hemisphere in R^4 (u >= 0)."""

    x: float
    y: float
    z: float
    u: float


def qubit_from_bloch(v, beta: int = 2) -> DensityMatrix:
    x, y, z = (float(c) for c in v)
    if x * x + y * y + z * z > 1 + 1e-12:
        raise ValidationError(f"Bloch vector outside the unit ball: |v|^2 = {x*x + y*y + z*z}")
    if beta == 1 and y != 0:
        raise ValidationError("real (beta=1) qubits need y = 0")
    m = 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])
    if beta == 1:
        m = m.real
    return DensityMatrix(m, beta)


def bloch_from_qubit(rho) -> BlochVector:
    m = as_matrix(rho)
    if m.shape != (2, 2):
        raise ValidationError(f"Bloch coordinates need a 2x2 state, got {m.shape}")
    return BlochVector(2 * m[1, 0].real, 2 * m[1, 0].imag, (m[0, 0] - m[1, 1]).real)


def uhlmann_embed(rho) -> UhlmannPoint:
    x, y, z = bloch_from_qubit(rho)
    u = math.sqrt(max(0.0, 1.0 - x * x - y * y - z * z))
    return UhlmannPoint(x / 2, y / 2, z / 2, u / 2)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k) for k in self.kraus_ops)
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        n = ops[0].shape[0]
        if any(k.shape != (n, n) for k in ops):
            raise ValidationError("Kraus operators must all be square and of equal size")
        resid = np.max(np.abs(sum(k.conj().T @ k for k in ops) - np.eye(n)))
        if resid > COMPLETENESS_ATOL:
            raise ValidationError(f"Kraus completeness violated (residual {resid:.3e})")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def n(self) -> int:
        return self.kraus_ops[0].shape[0]

    @property
    def beta(self) -> int:
        return 2 if any(np.iscomplexobj(k) for k in self.kraus_ops) else 1


def apply_channel(rho: DensityMatrix, channel: KrausChannel) -> DensityMatrix:
    if rho.n != channel.n:
        raise ValidationError(f"state has n={rho.n} but channel acts on n={channel.n}")
    out = sum(k @ rho.mat @ k.conj().T for k in channel.kraus_ops)
    beta = 1 if rho.beta == 1 and channel.beta == 1 else 2
    return new_density(hermitize(out), beta)


def random_channel(n: int, k: int, rng: np.random.Generator, beta: int = 2) -> KrausChannel:
    """Random CPTP map from the first ``n`` columns of a Haar matrix of size ``n*k``."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    v = haar_random(n * k, beta, rng)[:, :n]
    return KrausChannel(tuple(v[i * n:(i + 1) * n] for i in range(k)))


def depolarizing_channel(n: int = 2) -> KrausChannel:
    """Completely depolarizing map rho -> I/n, via the n^2 operators |i><j|/sqrt(n)."""
    ops = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1 / math.sqrt(n)
            ops.append(e)
    return KrausChannel(tuple(ops))


def identity_channel(n: int) -> KrausChannel:
    return KrausChannel((np.eye(n),))
