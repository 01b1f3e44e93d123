"""Closed test curves in S^3 with known properties.

All curves are band-limited in practice (their Fourier coefficients decay
exponentially), so spectral derivatives on moderate grids are accurate to
round-off.
"""

from __future__ import annotations

import numpy as np

from .spectral import Grid1D, periodic_integral


def _antiderivative(f: np.ndarray, L: float) -> np.ndarray:
    from .frames import _antiderivative as anti

    return anti(f, L) + (np.mean(f)) * (np.arange(f.size) * (L / f.size))


def sphere_lift(z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Null-cone lift ``(1, z1, z2)`` of a curve on the unit sphere."""
    return np.stack([np.ones_like(z1), z1, z2], axis=-1)


def closed_legendrian_lift(grid: Grid1D, amp: float = 0.4, windings=(2, -2)) -> np.ndarray:
    """Closed Legendrian curve ``(cos f e^{ip}, sin f e^{iq})``.

    With ``f = pi/4 + amp sin x`` the contact condition reads
    ``cos^2 f p' + sin^2 f q' = 0``; it is solved by ``p' = sin^2 f s``,
    ``q' = -cos^2 f s`` with ``s = c + d sin x`` chosen so that ``p`` and ``q``
    close up with the requested winding numbers.
    """
    x, L = grid.x, grid.L
    f = np.pi / 4 + amp * np.sin(x)
    w1, w2 = np.cos(f) ** 2, np.sin(f) ** 2
    r = np.sin(x)
    A = np.array([[periodic_integral(w2, L), periodic_integral(w2 * r, L)],
                  [periodic_integral(w1, L), periodic_integral(w1 * r, L)]])
    c, d = np.linalg.solve(A, 2 * np.pi * np.array([windings[0], -windings[1]], dtype=float))
    s = c + d * r
    p = _antiderivative(w2 * s, L)
    q = _antiderivative(-w1 * s, L)
    return sphere_lift(np.cos(f) * np.exp(1j * p), np.sin(f) * np.exp(1j * q))


def closed_transverse_lift(grid: Grid1D, amp: float = 0.4, windings=(1, 2), wobble: float = 0.3) -> np.ndarray:
    """Closed positively oriented transverse curve ``(cos f e^{ip}, sin f e^{iq})``.

    ``f = pi/4 + amp sin x``, ``p = n1 x``, ``q = n2 x + wobble cos x``.  The
    defaults keep ``l`` in roughly ``[0.44, 0.69]`` (no inflection points) and
    give a normalized frame that closes up.
    """
    x = grid.x
    f = np.pi / 4 + amp * np.sin(x)
    p = windings[0] * x
    q = windings[1] * x + wobble * np.cos(x)
    return sphere_lift(np.cos(f) * np.exp(1j * p), np.sin(f) * np.exp(1j * q))


def hopf_fiber_lift(grid: Grid1D, amp: float = 0.3, winding: int = 1) -> np.ndarray:
    """Lift ``(1, e^{i theta}, 0)`` with ``theta`` increasing."""
    x = grid.x
    theta = winding * x + amp * np.sin(x)
    return sphere_lift(np.exp(1j * theta), np.zeros_like(x, dtype=complex))


def sextactic_phase(grid: Grid1D, amp: float = 0.2, winding: int = 1) -> np.ndarray:
    """``phi = winding x + amp sin x`` (increasing for ``amp < winding``)."""
    return winding * grid.x * (2 * np.pi / grid.L) + amp * np.sin(grid.x * 2 * np.pi / grid.L)


def sextactic_lift(grid: Grid1D, amp: float = 0.2) -> np.ndarray:
    from .frames import sextactic_framing

    return sextactic_framing(sextactic_phase(grid, amp), grid).gamma
