"""Dense complex linear algebra helpers shared by every synthesis scheme.

Basis convention: qubit ``i`` is the bit of significance ``i``, so the basis
state ``|b_{n-1} ... b_0>`` sits at row ``sum(b_i * 2**i)``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

ZERO_TOL = 1e-10
ACCEPT_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class IsometryError(ValueError):
    """Raised when a matrix fails the isometry check."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class Isometry:
    """A ``2**n x 2**m`` matrix with orthonormal columns."""

    __slots__ = ("m", "n", "matrix")

    def __init__(self, matrix, m: int | None = None, n: int | None = None, tol: float = ZERO_TOL):
        mat = np.array(matrix, dtype=complex)
        if mat.ndim == 1:
            mat = mat.reshape(-1, 1)
        if mat.ndim != 2:
            raise IsometryError("isometry must be a 2-d array")
        rows, cols = mat.shape
        n_inf = _log2_exact(rows)
        m_inf = _log2_exact(cols)
        if n_inf is None or m_inf is None:
            raise IsometryError(f"shape {mat.shape} is not a power-of-two pair")
        if m is not None and m != m_inf:
            raise IsometryError(f"declared m={m} but matrix has {cols} columns")
        if n is not None and n != n_inf:
            raise IsometryError(f"declared n={n} but matrix has {rows} rows")
        if m_inf > n_inf:
            raise IsometryError(f"m={m_inf} exceeds n={n_inf}")
        if not np.all(np.isfinite(mat)):
            raise IsometryError("matrix has non-finite entries")
        res = isometry_residual(mat)
        if res > tol:
            raise IsometryError(f"V^dag V deviates from identity by {res:.3e}", res)
        mat.setflags(write=False)
        self.m = m_inf
        self.n = n_inf
        self.matrix = mat

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __repr__(self) -> str:
        return f"Isometry(m={self.m}, n={self.n})"


def _log2_exact(x: int) -> int | None:
    if x < 1 or x & (x - 1):
        return None
    return x.bit_length() - 1


def isometry_residual(mat: np.ndarray) -> float:
    cols = mat.shape[1]
    return float(np.linalg.norm(mat.conj().T @ mat - np.eye(cols)))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from QR of a complex Gaussian with R's phases absorbed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_isometry(m: int, n: int, seed: int | None = None) -> Isometry:
    """First ``2**m`` columns of a seeded Haar unitary on ``n`` qubits."""
    if m < 0 or n < 0 or m > n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    u = haar_unitary(2**n, rng)
    return Isometry(u[:, : 2**m], m, n)


def random_state(n: int, seed: int | None = None) -> np.ndarray:
    return random_isometry(0, n, seed).matrix[:, 0].copy()


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over phi of ||a - e^{i phi} b||_F."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    ip = np.vdot(b, a)
    if abs(ip) == 0:
        return float(np.linalg.norm(a - b))
    phase = ip / abs(ip)
    return float(np.linalg.norm(a - phase * b))


def complete_to_unitary(v: np.ndarray) -> np.ndarray:
    """Extend orthonormal columns to a square unitary (Gram-Schmidt via QR)."""
    rows, cols = v.shape
    if cols == rows:
        return np.array(v, dtype=complex)
    # the orthogonal complement comes from a full QR of V
    q, _ = np.linalg.qr(np.asarray(v, dtype=complex), mode="complete")
    out = np.empty((rows, rows), dtype=complex)
    out[:, :cols] = v
    out[:, cols:] = q[:, cols:]
    return out


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def rot(axis: str, theta: float) -> np.ndarray:
    if axis == "y":
        return ry(theta)
    if axis == "z":
        return rz(theta)
    if axis == "x":
        return rx(theta)
    raise ValueError(f"unknown axis {axis!r}")


def dagger(u: np.ndarray) -> np.ndarray:
    return u.conj().T


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))) <= tol


def to_su2(u: np.ndarray) -> np.ndarray:
    """Rescale a 2x2 unitary to determinant one."""
    return u / np.sqrt(np.linalg.det(u))


def apply_1q(state: np.ndarray, u: np.ndarray, target: int, n: int) -> np.ndarray:
    """Apply a 2x2 gate to the rows of a (2**n, cols) array."""
    cols = state.shape[1]
    t = state.reshape((2 ** (n - 1 - target), 2, 2**target * cols))
    return np.matmul(u, t).reshape(2**n, cols)


@lru_cache(maxsize=1024)
def _cnot_perm(control: int, target: int, n: int) -> np.ndarray:
    idx = np.arange(2**n)
    sel = (idx >> control) & 1 == 1
    perm = idx.copy()
    perm[sel] = idx[sel] ^ (1 << target)
    return perm


def apply_cnot(state: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    return state[_cnot_perm(control, target, n)]


def apply_diagonal(state: np.ndarray, phases: np.ndarray, qubits: list[int], n: int) -> np.ndarray:
    """Multiply rows by ``exp(i*phases[j])`` where ``j`` indexes the listed qubits."""
    idx = np.arange(2**n)
    j = np.zeros(2**n, dtype=np.int64)
    for pos, q in enumerate(qubits):
        j |= ((idx >> q) & 1) << pos
    return state * np.exp(1j * np.asarray(phases))[j][:, None]


def apply_matrix(state: np.ndarray, mat: np.ndarray, qubits: list[int], n: int) -> np.ndarray:
    """Apply a ``2**q`` matrix on ``qubits`` (qubits[0] least significant in ``mat``)."""
    q = len(qubits)
    cols = state.shape[1]
    t = state.reshape((2,) * n + (cols,))
    axes = [n - 1 - qq for qq in reversed(qubits)]
    t = np.moveaxis(t, axes, list(range(q)))
    shp = t.shape
    t = (mat @ t.reshape(2**q, -1)).reshape(shp)
    t = np.moveaxis(t, list(range(q)), axes)
    return t.reshape(2**n, cols)


def embed(mat: np.ndarray, qubits: list[int], n: int) -> np.ndarray:
    return apply_matrix(np.eye(2**n, dtype=complex), mat, qubits, n)


def zyz_decompose(u: np.ndarray) -> tuple[float, float, float, float]:
    """Angles with ``u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)`` and gamma in [0, pi]."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u, 1e-8):
        raise ValueError("zyz_decompose expects a 2x2 unitary")
    alpha = float(np.angle(np.linalg.det(u))) / 2
    v = u * np.exp(-1j * alpha)
    a00, a10 = abs(v[0, 0]), abs(v[1, 0])
    gamma = 2 * float(np.arctan2(a10, a00))
    if a10 < 1e-14:
        beta, delta = 2 * float(np.angle(v[1, 1])), 0.0
    elif a00 < 1e-14:
        beta, delta = 2 * float(np.angle(v[1, 0])), 0.0
    else:
        p11, p10 = float(np.angle(v[1, 1])), float(np.angle(v[1, 0]))
        beta, delta = p11 + p10, p11 - p10
    return alpha, beta, gamma, delta


def zyz_matrix(alpha: float, beta: float, gamma: float, delta: float) -> np.ndarray:
    return np.exp(1j * alpha) * rz(beta) @ ry(gamma) @ rz(delta)


def rotate_to_basis(psi, b: int) -> tuple[np.ndarray, float]:
    """SU(2) matrix ``u`` and ``r = |psi|`` with ``u @ psi = r |b>``."""
    psi = np.asarray(psi, dtype=complex).reshape(2)
    r = float(np.linalg.norm(psi))
    if r < 1e-300:
        return np.eye(2, dtype=complex), 0.0
    p0, p1 = psi / r
    if b == 0:
        u = np.array([[np.conj(p0), np.conj(p1)], [-p1, p0]], dtype=complex)
    else:
        u = np.array([[p1, -p0], [np.conj(p0), np.conj(p1)]], dtype=complex)
    return u, r
