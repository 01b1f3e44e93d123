"""SU(2,1) null frames, curve adaptation and scalar curve invariants.

Frames are stored as ``(..., 3, 3)`` complex arrays whose columns are
``(e0, e1, e2)``; group elements act on the left and Frenet matrices on the
right (``F_x = F U``).  The Gram matrix of a null frame is
``F^T J conj(F) = S`` with ``S = [[0, 0, -i], [0, 1, 0], [i, 0, 0]]``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .spectral import Grid1D, spectral_derivative, trig_interpolate

J_DIAG = np.array([-1.0, 1.0, 1.0])
J = np.diag(J_DIAG).astype(complex)
S_GRAM = np.array([[0, 0, -1j], [0, 1, 0], [1j, 0, 0]])
OMEGA = np.exp(1j * np.pi / 6)


class FrameError(ValueError):
    """Base class for geometric input errors."""


class NotNull(FrameError):
    pass


class ZeroLeadingComponent(FrameError):
    pass


class NotLegendrian(FrameError):
    pass


class NotTransverse(FrameError):
    pass


class OrientationError(NotTransverse):
    pass


class DegenerateRegularity(FrameError):
    pass


class NonPeriodicScale(FrameError):
    pass


class DegenerateOsculation(FrameError):
    pass


class CriticalPoint(FrameError):
    pass


class ZeroCurvature(FrameError):
    pass


class NotSextacticTransverse(FrameError):
    pass


class InvalidFrame(FrameError):
    pass


# -- Hermitian form and null frames ---------------------------------------

def herm(z, w) -> np.ndarray | complex:
    """``-z0 conj(w0) + z1 conj(w1) + z2 conj(w2)`` over the last axis."""
    z = np.asarray(z)
    w = np.asarray(w)
    out = np.sum(z * J_DIAG * np.conj(w), axis=-1)
    return out[()] if np.ndim(out) == 0 else out


def det3(a, b, c) -> np.ndarray:
    """Determinant of the matrix with columns ``a, b, c`` (batched)."""
    return np.linalg.det(np.stack([a, b, c], axis=-1))


def gram(F: np.ndarray) -> np.ndarray:
    return np.swapaxes(F, -1, -2) @ J @ np.conj(F)


def frame_defect(F: np.ndarray) -> float:
    """Max deviation from the null-frame conditions over a batch of frames."""
    F = np.asarray(F, dtype=complex)
    g = np.abs(gram(F) - S_GRAM).max()
    d = np.abs(np.linalg.det(F) - 1).max()
    return float(max(g, d))


@dataclass(frozen=True)
class NullFrame:
    e0: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    @classmethod
    def from_matrix(cls, F: np.ndarray) -> "NullFrame":
        F = np.asarray(F, dtype=complex)
        return cls(F[:, 0].copy(), F[:, 1].copy(), F[:, 2].copy())

    @property
    def matrix(self) -> np.ndarray:
        return np.stack([self.e0, self.e1, self.e2], axis=-1).astype(complex)


@dataclass(frozen=True)
class FrameCheck:
    passed: bool
    defect: float

    def __bool__(self) -> bool:
        return self.passed


def is_null_frame(frame: NullFrame | np.ndarray, tol: float = 1e-10) -> FrameCheck:
    F = frame.matrix if isinstance(frame, NullFrame) else np.asarray(frame, dtype=complex)
    d = frame_defect(F)
    return FrameCheck(d < tol, d)


def standard_frame() -> NullFrame:
    """A fixed null frame with ``e1 = omega (0, 0, 1)``.

    ``e0 = omega (1, 1, 0)``, ``e2 = omega (i/2)(-1, 1, 0)`` with
    ``omega = exp(i pi/6)`` so that the determinant is one.
    """
    e0 = OMEGA * np.array([1, 1, 0], dtype=complex)
    e1 = OMEGA * np.array([0, 0, 1], dtype=complex)
    e2 = OMEGA * 0.5j * np.array([-1, 1, 0], dtype=complex)
    return NullFrame(e0, e1, e2)


def random_su21(seed: int, scale: float = 0.5) -> np.ndarray:
    """Deterministic pseudo-random element of SU(2,1) (preserving ``J``)."""
    rng = np.random.default_rng(seed)
    f, z, g = (complex(*rng.normal(scale=scale, size=2)) for _ in range(3))
    h, j = rng.normal(scale=scale, size=2)
    V = np.array([[f, z, j],
                  [g, np.conj(f) - f, -1j * np.conj(z)],
                  [h, 1j * np.conj(g), -np.conj(f)]])
    F0 = standard_frame().matrix
    return F0 @ expm(V) @ np.linalg.inv(F0)


def su21_defect(G: np.ndarray) -> float:
    G = np.asarray(G)
    return float(max(np.abs(G.T @ J @ np.conj(G) - J).max(), abs(np.linalg.det(G) - 1)))


def projectivize(gamma, tol: float = 1e-8) -> tuple[complex, complex] | np.ndarray:
    """Affine coordinates ``(Z1, Z2) = (g1/g0, g2/g0)`` of null vectors."""
    g = np.asarray(gamma, dtype=complex)
    norm = np.sum(np.abs(g) ** 2, axis=-1)
    if np.any(np.abs(herm(g, g)) > tol * norm):
        raise NotNull("vector is not on the null cone")
    if np.any(np.abs(g[..., 0]) <= tol * np.sqrt(norm)):
        raise ZeroLeadingComponent("leading component vanishes")
    z = g[..., 1:] / g[..., :1]
    if g.ndim == 1:
        return complex(z[0]), complex(z[1])
    return z


# -- sampled frame fields -------------------------------------------------

@dataclass
class NullFrameField:
    frames: np.ndarray          # (N, 3, 3)
    geometry: str               # "legendrian" | "transverse"
    grid: Grid1D

    def defect(self) -> float:
        return frame_defect(self.frames)

    @property
    def gamma(self) -> np.ndarray:
        return self.frames[:, :, 0]

    def to_json(self) -> dict:
        F = self.frames
        return {"grid": self.grid.to_json(), "geometry": self.geometry,
                "re": F.real.tolist(), "im": F.imag.tolist()}


@dataclass
class InvariantProfile:
    k: np.ndarray
    l: np.ndarray
    m: np.ndarray | None = None
    nu: np.ndarray | None = None
    flags: dict = field(default_factory=dict)

    def arrays(self) -> dict[str, np.ndarray]:
        out = {"k": self.k, "l": self.l}
        if self.m is not None:
            out["m"] = self.m
        return out

    def to_json(self, grid: Grid1D | None = None) -> dict:
        out = {name: np.asarray(a).tolist() for name, a in self.arrays().items()}
        if self.nu is not None:
            out["nu_defect"] = float(np.abs(self.nu - 1).max())
        out["flags"] = self.flags
        if grid is not None:
            out["grid"] = grid.to_json()
        return out


def legendrian_U(k, l) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    l = np.broadcast_to(np.asarray(l, dtype=float), k.shape)
    U = np.zeros(k.shape + (3, 3), dtype=complex)
    U[..., 0, 1] = k
    U[..., 0, 2] = l
    U[..., 1, 0] = 1
    U[..., 1, 2] = -1j * k
    U[..., 2, 1] = 1j
    return U


def transverse_U(k, l, m) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    l = np.broadcast_to(np.asarray(l, dtype=float), k.shape)
    m = np.broadcast_to(np.asarray(m, dtype=float), k.shape)
    U = np.zeros(k.shape + (3, 3), dtype=complex)
    U[..., 0, 0] = 1j * k
    U[..., 0, 1] = l
    U[..., 0, 2] = m
    U[..., 1, 1] = -2j * k
    U[..., 1, 2] = -1j * l
    U[..., 2, 0] = 1
    U[..., 2, 2] = 1j * k
    return U


def frenet_matrix(profile: InvariantProfile, geometry: str):
    if geometry == "legendrian":
        return lambda *a: legendrian_U(*a[:2]), [profile.k, profile.l]
    if geometry == "transverse":
        if profile.m is None:
            raise ValueError("transverse integration needs m")
        return lambda *a: transverse_U(*a), [profile.k, profile.l, profile.m]
    raise ValueError(f"unknown geometry {geometry!r}")


_GAUSS = 0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6


def frenet_integrate(profile: InvariantProfile, geometry: str, F0, grid: Grid1D,
                     substeps: int = 8, tol: float = 1e-10) -> NullFrameField:
    """Integrate ``F_x = F U`` over one period with a fourth-order Magnus scheme.

    Invariants are evaluated between grid points by trigonometric
    interpolation, so band-limited profiles are integrated without
    interpolation error.  The returned field samples the grid points.
    """
    F0 = F0.matrix if isinstance(F0, NullFrame) else np.asarray(F0, dtype=complex)
    if not is_null_frame(F0, tol):
        raise InvalidFrame(f"initial frame defect {frame_defect(F0):.3e}")
    build, arrays = frenet_matrix(profile, geometry)
    n = grid.N * substeps
    h = grid.L / n
    starts = np.arange(n) * h
    nodes = [starts + c * h for c in _GAUSS]
    U1, U2 = (build(*[trig_interpolate(a, grid.L, xs) for a in arrays]) for xs in nodes)
    omega = 0.5 * h * (U1 + U2) + (np.sqrt(3) / 12) * h * h * (U1 @ U2 - U2 @ U1)
    steps = expm(omega)
    out = np.empty((grid.N, 3, 3), dtype=complex)
    F = F0.copy()
    for i in range(n):
        if i % substeps == 0:
            out[i // substeps] = F
        F = F @ steps[i]
    field_ = NullFrameField(out, geometry, grid)
    field_.monodromy = np.linalg.solve(F0, F)  # type: ignore[attr-defined]
    return field_


def frame_jets(field_: NullFrameField, profile: InvariantProfile, order: int) -> list[np.ndarray]:
    """Exact x-derivatives of the frame, ``F^(n) = F W_n`` with ``W_{n+1} = W_n' + U W_n``.

    Useful for lifts that are not closed (where sampled derivatives would
    suffer from the seam): the invariants are periodic even if the frame is
    not.
    """
    build, arrays = frenet_matrix(profile, field_.geometry)
    L = field_.grid.L
    U = build(*arrays)
    W = np.broadcast_to(np.eye(3, dtype=complex), U.shape).copy()
    jets = [field_.frames]
    for _ in range(order):
        W = spectral_derivative(W, L, 1, axis=0) + U @ W
        jets.append(field_.frames @ W)
    return jets


def lift_jets(gamma: np.ndarray, L: float, order: int) -> list[np.ndarray]:
    return [gamma] + [spectral_derivative(gamma, L, n, axis=0) for n in range(1, order + 1)]


def verify_contact(gamma: np.ndarray, L: float, jets=None) -> np.ndarray:
    """``<Gamma_x, Gamma>`` along a sampled closed lift."""
    d1 = jets[1] if jets is not None else spectral_derivative(gamma, L, 1, axis=0)
    return herm(d1, gamma)


def _d(f: np.ndarray, L: float, n: int = 1) -> np.ndarray:
    return spectral_derivative(f, L, n, axis=0)


def _canonical_cube_root(first: complex) -> complex:
    """Cube root of unity ``c`` putting ``arg(c * first)`` in ``[0, 2pi/3)``."""
    arg = np.angle(first) % (2 * np.pi)
    return np.exp(-2j * np.pi * np.floor(arg / (2 * np.pi / 3)) / 3)


def adapt_legendrian(gamma: np.ndarray, grid: Grid1D, jets: Sequence[np.ndarray] | None = None,
                     tol: float = 1e-6, strict_period: bool = False):
    """Normalized framing ``(Gamma, T, N)`` and invariants ``k, l`` of a Legendrian lift.

    The normalized lift is ``lam * Gamma`` with ``lam^3 = i / det(G, G', G'')``
    (this forces the speed to one); the frame is then read off from
    derivatives of the normalized lift.  ``jets`` optionally supplies exact
    derivatives ``[G, G', G'', G''']``.
    """
    L = grid.L
    gamma = np.asarray(gamma, dtype=complex)
    G = list(jets[:4]) if jets is not None else lift_jets(gamma, L, 3)
    size = np.linalg.norm(G[0], axis=-1) * np.linalg.norm(G[1], axis=-1)
    contact = herm(G[1], G[0])
    if np.any(np.abs(contact) > tol * np.maximum(size, 1e-300) + tol):
        raise NotLegendrian(f"max |<G_x, G>| = {np.abs(contact).max():.3e}")
    Dt = det3(G[0], G[1], G[2])
    scale = np.linalg.norm(G[0], axis=-1) * np.linalg.norm(G[1], axis=-1) * np.linalg.norm(G[2], axis=-1)
    if np.any(np.abs(Dt) <= 1e-10 * scale):
        raise DegenerateRegularity("det(G, G', G'') vanishes: curve is not regular")
    rho = -det3(G[0], G[1], G[3]) / (3 * Dt)
    r1 = _d(rho, L)
    r2 = _d(rho, L, 2)
    P0 = G[0]
    P1 = G[1] + rho[:, None] * G[0]
    P2 = G[2] + 2 * rho[:, None] * G[1] + (r1 + rho ** 2)[:, None] * G[0]
    P3 = (G[3] + 3 * rho[:, None] * G[2] + 3 * (r1 + rho ** 2)[:, None] * G[1]
          + (r2 + 3 * rho * r1 + rho ** 3)[:, None] * G[0])
    mod2 = np.abs(Dt) ** (-2.0 / 3.0)
    k = -0.5 * mod2 * herm(P2, P2)
    k_real = k.real
    k1 = _d(k_real, L)
    Nt = -1j * (P2 - k_real[:, None] * P0)
    Nt1 = -1j * (P3 - k1[:, None] * P0 - k_real[:, None] * P1)
    ell = 1j * mod2 * herm(Nt1, Nt)
    # branch of lam = (i / D)^(1/3) continuous along the grid
    arg = np.unwrap(np.angle(Dt))
    winding = round((arg[-1] + (arg[-1] - arg[-2]) - arg[0]) / (2 * np.pi))
    lam = np.abs(Dt) ** (-1.0 / 3.0) * np.exp(1j * (np.pi / 2 - arg) / 3)
    lam = lam * _canonical_cube_root(_first_nonzero(lam[0] * G[0][0]))
    holonomy = np.exp(-2j * np.pi * winding / 3)
    closes = winding % 3 == 0
    if strict_period and not closes:
        raise NonPeriodicScale(f"scale holonomy {holonomy:.6f}")
    frames = np.stack([lam[:, None] * P0, lam[:, None] * P1, lam[:, None] * Nt], axis=-1)
    flags = {
        "imag_k_max": float(np.abs(k.imag).max()),
        "imag_l_max": float(np.abs(ell.imag).max()),
        "scale_holonomy": [float(holonomy.real), float(holonomy.imag)],
        "scale_closes": bool(closes),
        "sextactic_points": int(np.sum(np.abs(ell.real) < 1e-6)),
    }
    profile = InvariantProfile(k_real, ell.real, nu=np.ones_like(k_real), flags=flags)
    return NullFrameField(frames, "legendrian", grid), profile


def _first_nonzero(v: np.ndarray) -> complex:
    for c in v:
        if abs(c) > 1e-12 * np.abs(v).max():
            return complex(c)
    return complex(v[0])


def adapt_transverse(gamma: np.ndarray, grid: Grid1D, jets: Sequence[np.ndarray] | None = None,
                     tol: float = 1e-6, inflection_tol: float = 1e-6):
    """Normalized framing ``(Gamma, B, V)`` and invariants ``k, l, m`` of a transverse lift.

    ``jets`` optionally supplies exact derivatives ``[G, G', G'']``.
    """
    L = grid.L
    gamma = np.asarray(gamma, dtype=complex)
    G = list(jets[:3]) if jets is not None else lift_jets(gamma, L, 2)
    contact = herm(G[1], G[0])
    c = contact.imag
    size = np.linalg.norm(G[0], axis=-1) * np.linalg.norm(G[1], axis=-1)
    if np.any(np.abs(contact.real) > tol * size + tol):
        raise NotTransverse("lift is not null (real part of <G_x, G> nonzero)")
    if np.all(c < 0):
        raise OrientationError("velocity is negatively oriented; reverse x")
    if np.any(c <= tol * size):
        raise NotTransverse("tangent lies in the contact plane somewhere")
    r = c ** -0.5
    r1, r2 = _d(r, L), _d(r, L, 2)
    g0 = r[:, None] * G[0]
    g1 = r1[:, None] * G[0] + r[:, None] * G[1]
    g2 = r2[:, None] * G[0] + 2 * r1[:, None] * G[1] + r[:, None] * G[2]
    k0 = 0.5 * herm(g1, g1).real
    k01 = _d(k0, L)
    V0 = g1 - 1j * k0[:, None] * g0
    V01 = g2 - 1j * k01[:, None] * g0 - 1j * k0[:, None] * g1
    Jc = lambda w: J_DIAG * np.conj(w)  # noqa: E731
    Bt = np.cross(Jc(g0), Jc(V0))
    Bt1 = np.cross(Jc(g1), Jc(V0)) + np.cross(Jc(g0), Jc(V01))
    delta = det3(g0, Bt, V0)
    B0 = Bt / delta[:, None]
    ell0 = 1j * herm(Bt1, V0) / delta
    m = (1j * herm(V01, V0)).real
    amp = np.abs(ell0)
    flags: dict = {"imag_m_max": float(np.abs((1j * herm(V01, V0)).imag).max())}
    if np.all(amp > inflection_tol):
        phase = np.unwrap(np.angle(ell0))
        alpha = phase / 3
        alpha = alpha - (2 * np.pi / 3) * np.floor(alpha[0] / (2 * np.pi / 3))
        alpha1 = (_d(ell0, L) / ell0).imag / 3
        winding = round((phase[-1] + (phase[-1] - phase[-2]) - phase[0]) / (2 * np.pi))
        flags["phase_winding"] = int(winding)
        flags["frame_closes"] = winding % 3 == 0
    elif np.all(amp <= inflection_tol):
        alpha = np.zeros_like(c)
        alpha1 = np.zeros_like(c)
        flags["hopf_fiber"] = True
    else:
        alpha = np.zeros_like(c)
        alpha1 = np.zeros_like(c)
        flags["inflection_points"] = int(np.sum(amp <= inflection_tol))
    ph = np.exp(1j * alpha)
    k = k0 + alpha1
    if "phase_winding" in flags:
        ell = (ell0 * np.exp(-3j * alpha)).real
    elif "hopf_fiber" in flags:
        ell = amp
    else:
        # sign convention left untouched around inflection points
        ell = ell0.real
        flags["imag_l_max"] = float(np.abs(ell0.imag).max())
    frames = np.stack([ph[:, None] * g0, (np.conj(ph) ** 2)[:, None] * B0, ph[:, None] * V0], axis=-1)
    profile = InvariantProfile(k, ell, m, nu=np.ones_like(k), flags=flags)
    return NullFrameField(frames, "transverse", grid), profile


# -- determinant ratio and scalar invariants -------------------------------

@dataclass
class ArclengthIntegrand:
    ratio: np.ndarray
    cube_root: np.ndarray
    negative: int
    sextactic_points: int


def arclength_integrand(gamma: np.ndarray, grid: Grid1D, jets=None, tol: float = 1e-10) -> ArclengthIntegrand:
    """``det(G', G'', G''') / det(G, G', G'')`` and the real cube root of its imaginary part."""
    G = list(jets[:4]) if jets is not None else lift_jets(np.asarray(gamma, dtype=complex), grid.L, 3)
    den = det3(G[0], G[1], G[2])
    scale = np.prod([np.linalg.norm(g, axis=-1) for g in G[:3]], axis=0)
    if np.any(np.abs(den) < tol * scale):
        raise DegenerateOsculation("det(G, G', G'') too small")
    ratio = det3(G[1], G[2], G[3]) / den
    im = ratio.imag
    return ArclengthIntegrand(ratio, np.cbrt(im), int(np.sum(im < 0)), int(np.sum(np.abs(im) < 1e-6)))


def phase_derivatives(phi: np.ndarray, L: float, orders: int = 3,
                      increment: float | None = None) -> list[np.ndarray]:
    """Derivatives of ``phi = s x + periodic`` where ``phi(L) - phi(0) = increment``.

    With ``increment=None`` it is inferred as the nearest multiple of ``2 pi``.
    """
    phi = np.asarray(phi, dtype=float)
    n = phi.size
    if increment is None:
        est = phi[-1] + (phi[-1] - phi[-2]) - phi[0]
        increment = 2 * np.pi * round(est / (2 * np.pi))
    slope = increment / L
    x = np.arange(n) * (L / n)
    per = phi - slope * x
    out = []
    for o in range(1, orders + 1):
        d = spectral_derivative(per, L, o)
        out.append(d + slope if o == 1 else d)
    return out


def schwarzian_from_derivs(d1, d2, d3) -> np.ndarray:
    if np.any(np.abs(d1) < 1e-10):
        raise CriticalPoint("phi_x vanishes")
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def schwarzian(phi: np.ndarray, L: float, increment: float | None = None) -> np.ndarray:
    return schwarzian_from_derivs(*phase_derivatives(phi, L, 3, increment))


def sextactic_curvature(phi: np.ndarray, L: float, increment: float | None = None) -> np.ndarray:
    d1, d2, d3 = phase_derivatives(phi, L, 3, increment)
    return -(schwarzian_from_derivs(d1, d2, d3) + 0.5 * d1 ** 2)


def normal_indicatrix_curvature(k: np.ndarray, L: float) -> np.ndarray:
    """``k - k_xx/k + (3/2)(k_x/k)^2``."""
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) < 1e-12):
        raise ZeroCurvature("k vanishes")
    k1, k2 = _d(k, L), _d(k, L, 2)
    return k - k2 / k + 1.5 * (k1 / k) ** 2


def normal_indicatrix_curvature_schwarzian(k: np.ndarray, L: float) -> np.ndarray:
    """``k - S(theta)`` with ``theta_x = k``."""
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) < 1e-12):
        raise ZeroCurvature("k vanishes")
    return k - schwarzian_from_derivs(k, _d(k, L), _d(k, L, 2))


def sextactic_framing(phi: np.ndarray, grid: Grid1D, increment: float | None = None) -> NullFrameField:
    """Normalized framing of the great-circle curve ``(cos phi, sin phi)``.

    Uses the null frame ``e0 = w(-1, cos, sin)``, ``e1 = w(0, -sin, cos)``,
    ``e2 = (i/2) w (1, cos, sin)`` with ``w = exp(-i pi/6)``.
    """
    phi = np.asarray(phi, dtype=float)
    d1, d2, _ = phase_derivatives(phi, grid.L, 3, increment)
    w = np.conj(OMEGA)
    c, s = np.cos(phi), np.sin(phi)
    one = np.ones_like(phi)
    e0 = w * np.stack([-one, c, s], axis=-1)
    e1 = w * np.stack([0 * one, -s, c], axis=-1)
    e2 = 0.5j * w * np.stack([one, c, s], axis=-1)
    G = e0 / d1[:, None]
    T = e1 - (d2 / d1 ** 2)[:, None] * e0
    N = d1[:, None] * e2 + 1j * (d2 / d1)[:, None] * e1 - 0.5j * (d2 ** 2 / d1 ** 3)[:, None] * e0
    return NullFrameField(np.stack([G, T, N], axis=-1), "legendrian", grid)


@dataclass
class IndicatrixFraming:
    frames: NullFrameField
    k_N: np.ndarray
    l_N: np.ndarray


def indicatrix_framing(field_: NullFrameField, k: np.ndarray) -> IndicatrixFraming:
    """Normalized framing of the normal indicatrix of a sextactic Legendrian curve.

    Built explicitly from ``(Gamma, T, N)`` and ``k``; ``k_N`` and ``l_N``
    are then measured from x-derivatives of that framing.
    """
    L = field_.grid.L
    F = field_.frames
    G, T, N = F[:, :, 0], F[:, :, 1], F[:, :, 2]
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) < 1e-12):
        raise ZeroCurvature("k vanishes")
    k1 = _d(k, L)
    e0 = (1 / k)[:, None] * N
    e1 = -(k1 / k ** 2)[:, None] * N - 1j * T
    e2 = (k1 / k)[:, None] * T - 0.5j * (k1 ** 2 / k ** 3)[:, None] * N - k[:, None] * G
    frames = OMEGA * np.stack([e0, e1, e2], axis=-1)
    e1x = _d(frames[:, :, 1], L)
    e2x = _d(frames[:, :, 2], L)
    k_N = -0.5 * herm(e1x, e1x)
    l_N = 1j * herm(e2x, frames[:, :, 2])
    return IndicatrixFraming(NullFrameField(frames, "legendrian", field_.grid), k_N.real, l_N.real)


# -- centroaffine reduction of Hopf-fiber curves ----------------------------

@dataclass
class CentroaffineReduction:
    gamma_tilde: np.ndarray   # (N, 2) complex, in the plane z2 = 0
    theta: np.ndarray
    m_tilde: np.ndarray
    m_schwarzian: np.ndarray
    det: np.ndarray
    phase_periodic: bool


def centroaffine_reduction(gamma: np.ndarray, grid: Grid1D, l_tol: float = 1e-6) -> CentroaffineReduction:
    """Reduce a transverse lift with ``l = 0`` to a centroaffine plane curve."""
    L = grid.L
    frames, prof = adapt_transverse(gamma, grid, inflection_tol=l_tol)
    if np.abs(prof.l).max() > l_tol:
        raise NotSextacticTransverse(f"max |l| = {np.abs(prof.l).max():.3e}")
    F = frames.frames
    # move B(0) to a multiple of (0, 0, 1) so the curve lies in z2 = 0
    Gm = standard_frame().matrix @ np.linalg.inv(F[0])
    g = (Gm @ F[:, :, 0][..., None])[..., 0]
    total = float(np.sum(prof.k) * grid.dx)
    periodic = abs(total / (2 * np.pi) - round(total / (2 * np.pi))) < 1e-8
    x = grid.x
    kint = _antiderivative(prof.k, L) + (total / L) * x
    mu = np.exp(-1j * kint)
    gt = mu[:, None] * g
    # constant unit phase so that the plane is spanned by (1, 1) and (-i, i)
    c = np.angle(gt[0, 0] * gt[0, 1])
    gt = gt * np.exp(-0.5j * c)
    X = (gt[:, 0] + gt[:, 1]) / np.sqrt(2)
    Y = (gt[:, 1] - gt[:, 0]) / (np.sqrt(2) * 1j)
    P = np.stack([X, Y], axis=-1)
    slope = total / L
    P1 = _d_ramp_phase(P, L, -slope) if not periodic else _d(P, L)
    P2 = _d(P1, L) if periodic else _d_ramp_phase(P1, L, -slope)
    det = (P[:, 0] * P1[:, 1] - P[:, 1] * P1[:, 0]).real
    # the real plane: P should be real up to round-off
    m_tilde = (np.sum(P2 * np.conj(P), axis=-1) / np.sum(np.abs(P) ** 2, axis=-1)).real
    # theta = arg of the second component: winding of g minus the integral of k
    ga = np.unwrap(np.angle(g[:, 1]))
    wind = round((ga[-1] + (ga[-1] - ga[-2]) - ga[0]) / (2 * np.pi))
    theta = np.unwrap(np.angle(gt[:, 1]))
    d1, d2, d3 = phase_derivatives(theta, L, 3, increment=2 * np.pi * wind - total)
    m_s = -0.5 * schwarzian_from_derivs(d1, d2, d3) - d1 ** 2
    return CentroaffineReduction(gt[:, :2], theta, m_tilde, m_s, det, periodic)


def _antiderivative(f: np.ndarray, L: float) -> np.ndarray:
    """Periodic antiderivative of ``f - mean(f)`` vanishing at x = 0."""
    n = f.size
    fh = np.fft.rfft(f - f.mean())
    kappa = 2 * np.pi * np.fft.rfftfreq(n, d=L / n)
    kappa[0] = 1.0
    gh = fh / (1j * kappa)
    gh[0] = 0
    if n % 2 == 0:
        gh[-1] = 0
    g = np.fft.irfft(gh, n=n)
    return g - g[0]


def _d_ramp_phase(P: np.ndarray, L: float, rate: float) -> np.ndarray:
    """Derivative of ``exp(i rate x) * periodic`` samples."""
    n = P.shape[0]
    x = np.arange(n) * (L / n)
    ph = np.exp(1j * rate * x)[:, None]
    per = P / ph
    return ph * (_d(per, L) + 1j * rate * per)


# -- lift CSV I/O -----------------------------------------------------------

LIFT_COLUMNS = ["x", "re_z0", "im_z0", "re_z1", "im_z1", "re_z2", "im_z2"]


def write_lift_csv(path, x: np.ndarray, gamma: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(LIFT_COLUMNS)
        for xi, g in zip(x, gamma):
            w.writerow([repr(float(xi))] + [repr(float(v)) for c in g for v in (c.real, c.imag)])


def read_lift_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip().lower() for h in rows[0]] != LIFT_COLUMNS:
        raise ValueError(f"expected header {','.join(LIFT_COLUMNS)}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ValueError(f"non-numeric entry: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 7:
        raise ValueError("each row needs 7 columns")
    gamma = data[:, 1::2] + 1j * data[:, 2::2]
    return data[:, 0], gamma


def grid_from_samples(x: np.ndarray) -> Grid1D:
    n = x.size
    if n < 2:
        raise ValueError("need at least two samples")
    dx = x[1] - x[0]
    if not np.allclose(np.diff(x), dx, rtol=1e-9, atol=1e-12):
        raise ValueError("samples must be uniformly spaced")
    return Grid1D(n, float(dx * n))


def profile_json(profile: InvariantProfile, grid: Grid1D) -> str:
    return json.dumps(profile.to_json(grid), sort_keys=True)
