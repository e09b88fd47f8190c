"""Distances between states and the monotone Riemannian metric family."""

from __future__ import annotations

import enum
import math

import numpy as np

from .matcore import ValidationError, check_hermitian, hermitize, sqrt_psd
from .states import as_matrix

FIDELITY_BAND = 1e-10
PURITY_ATOL = 1e-10


def _pair(rho, sigma) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_matrix(rho), as_matrix(sigma)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def trace_distance(rho, sigma) -> float:
    a, b = _pair(rho, sigma)
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(a - b)))))


def hs_distance(rho, sigma) -> float:
    a, b = _pair(rho, sigma)
    return float(np.linalg.norm(a - b))


def _rank_revealing_sqrt(m: np.ndarray) -> np.ndarray:
    """sqrt_psd with eigenvalues below the eigensolver noise floor set to zero.

    Without the cut, roundoff eigenvalues ~1e-16 of a rank-deficient state
    leak ~1e-8 into the fidelity.
    """
    sqrt_psd(m)  # validates PSD
    w, v = np.linalg.eigh(hermitize(m))
    cut = m.shape[0] * np.finfo(float).eps * max(w[-1], 0.0)
    w = np.where(w > cut, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity [Tr (sqrt(rho) sigma sqrt(rho))^(1/2)]^2.

    Evaluated as the squared nuclear norm of sqrt(rho) sqrt(sigma).
    """
    a, b = _pair(rho, sigma)
    if np.array_equal(a, b):
        return 1.0
    s = _rank_revealing_sqrt(a) @ _rank_revealing_sqrt(b)
    f = float(np.sum(np.linalg.svd(s, compute_uv=False))) ** 2
    if f < -FIDELITY_BAND or f > 1 + FIDELITY_BAND:
        raise ValidationError(f"fidelity {f} outside [0, 1]; are the inputs states?")
    return min(max(f, 0.0), 1.0)


def bures_distance(rho, sigma) -> float:
    return math.sqrt(max(0.0, 2.0 - 2.0 * math.sqrt(fidelity(rho, sigma))))


def bures_angle(rho, sigma) -> float:
    return math.acos(math.sqrt(fidelity(rho, sigma)))


def fubini_study(psi_a, psi_b) -> float:
    """2 arccos sqrt(kappa) with kappa = Tr(rho_a rho_b); both inputs pure."""
    a, b = _pair(psi_a, psi_b)
    for m in (a, b):
        p = float(np.real(np.vdot(m, m)))
        if abs(p - 1.0) > PURITY_ATOL:
            raise ValidationError(f"Fubini-Study distance needs pure states (purity {p})")
    kappa = float(np.real(np.vdot(a, b)))
    return 2.0 * math.acos(math.sqrt(min(max(kappa, 0.0), 1.0)))


def _probability_vector(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValidationError("probability vector has a negative entry")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValidationError(f"probability vector sums to {p.sum()!r}")
    return p


def bhattacharyya(a, b) -> float:
    a, b = _probability_vector(a), _probability_vector(b)
    if a.shape != b.shape:
        raise ValidationError("length mismatch")
    return min(float(np.sum(np.sqrt(a * b))), 1.0)


def hellinger(a, b) -> float:
    return math.sqrt(max(0.0, 2.0 - 2.0 * bhattacharyya(a, b)))


def hubner_line_element(rho, drho, tol: float | None = None) -> float:
    """Squared Bures length of a tangent vector ``drho`` at ``rho``.

    Evaluated in the eigenbasis of ``rho`` as
    1/2 * sum |drho_ij|^2 / (p_i + p_j); pairs with p_i + p_j < tol are
    dropped (default tol is 1e-12 * Tr rho).
    """
    a = as_matrix(rho)
    d = check_hermitian(drho)
    if d.shape != a.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {d.shape}")
    if abs(np.trace(d)) > 1e-12:
        raise ValidationError("tangent vector must be traceless")
    if tol is None:
        tol = 1e-12 * np.trace(a).real
    p, v = np.linalg.eigh(hermitize(a))
    dd = v.conj().T @ d @ v
    denom = p[:, None] + p[None, :]
    keep = denom >= tol
    return float(0.5 * np.sum(np.abs(dd[keep]) ** 2 / denom[keep]))


class MCFunctionKind(enum.Enum):
    """Morozova-Chentsov functions. MAX generates the Bures metric."""

    MIN = "min"
    KUBO_MORI = "km"
    MAX = "max"


def mc_function(kind: MCFunctionKind, t: float) -> float:
    if t < 0:
        raise ValueError(f"Morozova-Chentsov functions need t >= 0, got {t}")
    if kind is MCFunctionKind.MAX:
        return (1.0 + t) / 2.0
    if kind is MCFunctionKind.MIN:
        return 2.0 * t / (t + 1.0)
    if t == 0:
        return 0.0
    if t == 1:
        return 1.0
    return (t - 1.0) / math.log1p(t - 1.0)


def mc_c(kind: MCFunctionKind, x: float, y: float) -> float:
    """c(x, y) = 1 / (y f(x/y)); the reciprocal of a mean of x and y."""
    if x <= 0 or y <= 0:
        raise ValueError("c(x, y) needs x, y > 0")
    return 1.0 / (y * mc_function(kind, x / y))


def monotone_squared_length(a, b, kind: MCFunctionKind) -> float:
    """||B||^2 at the diagonal point diag(a) for the metric selected by ``kind``."""
    a = np.asarray(a, dtype=float)
    b = check_hermitian(b)
    if np.any(a <= 0):
        raise ValueError("eigenvalues must be strictly positive")
    if b.shape != (a.size, a.size):
        raise ValidationError("dimension mismatch")
    total = float(np.sum(np.abs(np.diag(b)) ** 2 / a))
    n = a.size
    for j in range(n):
        for k in range(j + 1, n):
            total += 2.0 * mc_c(kind, a[j], a[k]) * abs(b[j, k]) ** 2
    return total


def qubit_radial_split(r: float, kind: MCFunctionKind) -> tuple[float, float]:
    """(radial, tangential) coefficients of the qubit metric at Bloch radius r.

    At r = 1 the radial part is infinite; the tangential part is finite
    only when f(0) > 0 (the Bures case), otherwise ``inf`` is returned.
    """
    if not 0 <= r <= 1:
        raise ValueError(f"Bloch radius must lie in [0, 1], got {r}")
    if r == 1:
        f0 = mc_function(kind, 0.0)
        return math.inf, (1.0 / (2.0 * f0) if f0 > 0 else math.inf)
    radial = 1.0 / (1.0 - r * r)
    f = mc_function(kind, (1.0 - r) / (1.0 + r))
    tangential = math.inf if f == 0 else 1.0 / (f * (1.0 + r))
    return radial, tangential


def qubit_line_element(tau, dtau) -> float:
    """Squared Bures length of a Bloch-ball displacement ``dtau`` at ``tau``.

    One quarter of the round metric on the unit 3-sphere, written in the
    ball coordinates (x, y, z).
    """
    tau, dtau = np.asarray(tau, dtype=float), np.asarray(dtau, dtype=float)
    radial = float(tau @ dtau)
    return 0.25 * (float(dtau @ dtau) + radial * radial / (1.0 - float(tau @ tau)))


def bloch_path_length(path, velocity, nodes: int = 64) -> float:
    """Bures length of the Bloch path ``t -> path(t)``, ``t`` in [0, 1].

    Gauss-Legendre quadrature of sqrt(ds^2) with ``velocity(t) = d path/dt``.
    """
    t, w = np.polynomial.legendre.leggauss(nodes)
    t, w = 0.5 * (t + 1.0), 0.5 * w
    return float(sum(wi * math.sqrt(qubit_line_element(path(ti), velocity(ti))) for ti, wi in zip(t, w)))


def straight_bloch_path(a, b):
    """Straight segment from Bloch vector ``a`` to ``b`` with its velocity."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return (lambda t: a + t * (b - a)), (lambda t: b - a)


def uhlmann_arc_path(a, b):
    """Great-circle arc between the Uhlmann lifts of ``a`` and ``b``, read back
    in Bloch coordinates, with its velocity."""
    def lift(v):
        v = np.asarray(v, dtype=float)
        return np.append(v, math.sqrt(max(0.0, 1.0 - v @ v)))

    p, q = lift(a), lift(b)
    theta = math.acos(min(1.0, max(-1.0, float(p @ q))))
    if theta == 0:
        return (lambda t: p[:3]), (lambda t: np.zeros(3))
    s = math.sin(theta)

    def path(t):
        return (math.sin((1 - t) * theta) * p + math.sin(t * theta) * q)[:3] / s

    def velocity(t):
        return theta * (-math.cos((1 - t) * theta) * p + math.cos(t * theta) * q)[:3] / s

    return path, velocity
