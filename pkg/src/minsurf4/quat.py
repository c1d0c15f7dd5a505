"""Quaternions, complexified quaternions, and the quadric forms on H⊗C.

Two layers live here.  The scalar classes (:class:`Quaternion`,
:class:`ComplexQuaternion`, :class:`Matrix4C`) are what callers use for
single values.  The ``q*`` array functions operate on ``(..., 4)`` float
arrays with components ordered ``(1, I, J, K)`` and are what the surface
pipeline uses on whole grids at once.

A complex number ``x + iy`` is identified with the quaternion ``x + yI``,
so ``u + vJ`` with ``u, v`` complex has components
``(Re u, Im u, Re v, Im v)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import probe_seed
from .errors import NotOrthonormalFrame, ZeroQuaternion

# ---------------------------------------------------------------------------
# array layer


def qmul(x, y):
    """Quaternion product of ``(..., 4)`` arrays.

    Written as aa' - <P,P'> + aP' + a'P + P x P' (real part a, pure part P).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, p = x[..., 0], x[..., 1:]
    b, r = y[..., 0], y[..., 1:]
    out = np.empty(np.broadcast_shapes(x.shape, y.shape))
    out[..., 0] = a * b - np.einsum("...i,...i->...", p, r)
    out[..., 1:] = a[..., None] * r + b[..., None] * p + np.cross(p, r)
    return out


def qconj(x):
    x = np.asarray(x, dtype=float)
    out = -x
    out[..., 0] = x[..., 0]
    return out


def qdot(x, y):
    """Euclidean inner product Re(x·conj(y))."""
    return np.einsum("...i,...i->...", np.asarray(x, float), np.asarray(y, float))


def qnorm2(x):
    return qdot(x, x)


def qnorm(x):
    return np.sqrt(qnorm2(x))


def qinv(x, eps: float = 1e-300):
    """Inverse conj(x)/|x|^2; raises ZeroQuaternion if any |x|^2 <= eps."""
    n2 = qnorm2(x)
    if np.any(n2 <= eps):
        raise ZeroQuaternion("cannot invert a zero quaternion")
    return qconj(x) / n2[..., None]


def from_complex_pair(u, v):
    """Array form of ``u + v·J`` for complex arrays u, v."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return np.stack([u.real, u.imag, v.real, v.imag], axis=-1)


# ---------------------------------------------------------------------------
# scalar layer


@dataclass(frozen=True)
class Quaternion:
    """``a + bI + cJ + dK``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        a, b, c, d = (float(v) for v in np.asarray(arr, dtype=float).reshape(4))
        return cls(a, b, c, d)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    @property
    def real(self) -> float:
        return self.a

    @property
    def pure(self) -> "Quaternion":
        return Quaternion(0.0, self.b, self.c, self.d)

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> float:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def dot(self, other: "Quaternion") -> float:
        return self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)
        if isinstance(other, (int, float)):
            return Quaternion(self.a + other, self.b, self.c, self.d)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        if isinstance(other, (Quaternion, int, float)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.a * other, self.b * other, self.c * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.a / other, self.b / other, self.c / other, self.d / other)
        if isinstance(other, Quaternion):
            return self * quat_inv(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol * max(1.0, self.norm(), other.norm())


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


class PureUnitQuaternion(Quaternion):
    """A point of the 2-sphere of pure unit quaternions (a complex structure)."""

    def __init__(self, a=0.0, b=0.0, c=0.0, d=0.0, tol: float = 1e-10):
        super().__init__(a, b, c, d)
        if abs(a) > tol or abs(self.norm() - 1.0) > tol:
            raise ValueError(f"not a pure unit quaternion: {(a, b, c, d)}")

    @classmethod
    def of(cls, q: Quaternion, tol: float = 1e-10) -> "PureUnitQuaternion":
        return cls(q.a, q.b, q.c, q.d, tol=tol)


def quat_mul(x: Quaternion, y: Quaternion) -> Quaternion:
    return Quaternion.from_array(qmul(x.as_array(), y.as_array()))


def quat_inv(x: Quaternion, eps: float = 1e-300) -> Quaternion:
    n2 = x.norm2()
    if n2 <= eps:
        raise ZeroQuaternion(f"|x|^2 = {n2:g} below epsilon {eps:g}")
    return x.conj() / n2


def plane_structures(t1: Quaternion, t2: Quaternion, tol: float = 1e-8):
    """Left and right complex structures ``(t2·t1^-1, t1^-1·t2)`` of span(t1, t2).

    ``t1, t2`` must be a positive orthogonal basis with equal lengths.
    """
    n1, n2 = t1.norm2(), t2.norm2()
    if n1 == 0.0 or n2 == 0.0:
        raise NotOrthonormalFrame("zero basis vector")
    scale = max(n1, n2)
    if abs(n1 - n2) > tol * scale or abs(t1.dot(t2)) > tol * scale:
        raise NotOrthonormalFrame(
            f"|t1|^2={n1:g}, |t2|^2={n2:g}, <t1,t2>={t1.dot(t2):g}"
        )
    inv1 = quat_inv(t1)
    gl = quat_mul(t2, inv1)
    gr = quat_mul(inv1, t2)
    return PureUnitQuaternion.of(gl, tol=1e-10), PureUnitQuaternion.of(gr, tol=1e-10)


# ---------------------------------------------------------------------------
# H ⊗ C


@dataclass(frozen=True)
class ComplexQuaternion:
    """Coordinates ``(z1, z2, z3, z4)`` of ``z1 + z2 I + z3 J + z4 K`` in H⊗C."""

    z1: complex = 0j
    z2: complex = 0j
    z3: complex = 0j
    z4: complex = 0j

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.z3, self.z4], dtype=complex)

    @classmethod
    def from_array(cls, arr) -> "ComplexQuaternion":
        v = np.asarray(arr, dtype=complex).reshape(4)
        return cls(*(complex(x) for x in v))


def q2(v):
    """``z1 z2 + z3 z4``; accepts a ComplexQuaternion or ``(..., 4)`` array."""
    v = v.as_array() if isinstance(v, ComplexQuaternion) else np.asarray(v, dtype=complex)
    return v[..., 0] * v[..., 1] + v[..., 2] * v[..., 3]


def q2prime(v):
    """``z1^2 + z2^2 + z3^2 + z4^2``."""
    v = v.as_array() if isinstance(v, ComplexQuaternion) else np.asarray(v, dtype=complex)
    return np.sum(v * v, axis=-1)


def q2_eval(v: ComplexQuaternion) -> complex:
    return complex(q2(v))


def q2prime_eval(v: ComplexQuaternion) -> complex:
    return complex(q2prime(v))


def probe_vectors(n: int = 10, seed: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(probe_seed() if seed is None else seed)
    return rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))


def q2_multiplier(m, tol: float = 1e-9, seed: int | None = None):
    """Complex ``c`` with ``q2(M v) = c q2(v)`` on 10 probe vectors, else None."""
    mat = m.m if isinstance(m, Matrix4C) else np.asarray(m, dtype=complex)
    vs = probe_vectors(10, seed)
    before = q2(vs)
    after = q2(vs @ mat.T)
    ratios = after / before
    c = ratios.mean()
    scale = max(1.0, abs(c))
    if np.max(np.abs(after - c * before)) > tol * scale * np.max(np.abs(before)):
        return None
    return complex(c)


class Matrix4C:
    """A 4x4 complex matrix acting on coordinate vectors of H⊗C."""

    def __init__(self, m, unitary_tol: float = 1e-10):
        self.m = np.array(m, dtype=complex).reshape(4, 4)
        self.m.setflags(write=False)
        self._unitary_tol = unitary_tol

    def __matmul__(self, other):
        if isinstance(other, Matrix4C):
            return Matrix4C(self.m @ other.m)
        return self.m @ np.asarray(other, dtype=complex)

    def apply(self, vectors) -> np.ndarray:
        """Apply to ``(..., 4)`` coordinate vectors."""
        return np.asarray(vectors, dtype=complex) @ self.m.T

    def inverse(self) -> "Matrix4C":
        return Matrix4C(np.linalg.inv(self.m))

    @cached_property
    def unitary_residual(self) -> float:
        return float(np.max(np.abs(self.m.conj().T @ self.m - np.eye(4))))

    @property
    def is_unitary(self) -> bool:
        return self.unitary_residual < self._unitary_tol

    @cached_property
    def q2_multiplier(self):
        return q2_multiplier(self)

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.m))

    def __repr__(self):
        return f"Matrix4C({np.array2string(self.m, precision=4)})"


def matrix_A() -> Matrix4C:
    """Block-diagonal unitary taking the quadric z1^2+..+z4^2=0 to z1z2+z3z4=0.

    On every vector ``q2(A v) = q2prime(v) / 2``; the zero sets correspond.
    """
    a1 = np.array([[1.0, 1j], [1.0, -1j]]) / math.sqrt(2.0)
    m = np.zeros((4, 4), dtype=complex)
    m[:2, :2] = a1
    m[2:, 2:] = a1
    return Matrix4C(m)


def matrix_S() -> Matrix4C:
    """Swap element: (e, f, g, h) -> (h, -g, -e, f)."""
    s1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    s2 = np.array([[-1.0, 0.0], [0.0, 1.0]])
    m = np.zeros((4, 4), dtype=complex)
    m[:2, 2:] = s1
    m[2:, :2] = s2
    return Matrix4C(m)


def s_diagnostics() -> dict:
    """Numerical facts about S that the associate machinery depends on."""
    a, s = matrix_A(), matrix_S()
    conj = np.linalg.inv(a.m) @ s.m @ a.m
    return {
        "det_S": float(np.real(np.linalg.det(s.m))),
        "q2_multiplier_S": s.q2_multiplier,
        "S_unitary_residual": s.unitary_residual,
        "det_AinvSA": complex(np.linalg.det(conj)),
        "realness_AinvSA": float(np.max(np.abs(conj.imag))),
    }
