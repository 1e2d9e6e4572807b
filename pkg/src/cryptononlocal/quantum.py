"""Exact quantum predictions for the chained d-outcome scenario.

Two parties each choose one of N Fourier-type measurement bases and obtain
outcomes in {0, .., d-1}.  On the maximally entangled state the joint
distribution depends on the setting pair only through the phase gap
``f = alpha_A - beta_B``, for which a closed form exists:

    P((Y - X) mod d = m | A, B) = sin^2(pi (m+f)) / (d^2 sin^2(pi (m+f)/d)),

with the limit 1/d when ``m + f`` is a multiple of d.  The chained quantity

    I_N = sum_i ( <[X_i - Y_i]> + <[Y_i - X_{i+1}]> ),   X_{N+1} := X_1 + 1,

([.] is mod d, <.> the mean) collapses to ``2 N t`` on this distribution,
where ``t`` is the mean of m under the closed form at ``f = 1/(2N)``.  That
identity is what `cglmp_chained_value` evaluates; the Born-rule tensor path
is kept as the reference implementation and the two are cross-checked in
the test suite.

Setting indices A, B are 1-based (phases alpha_A = (A - 1/2)/N and
beta_B = B/N are defined for A, B = 1 .. N); probability tensors are
indexed ``probs[A-1, B-1, X, Y]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChainedSettings",
    "chained_settings",
    "cglmp_bases",
    "maximally_entangled",
    "JointDistribution",
    "joint_distribution",
    "joint_from_bases",
    "closed_form_probs",
    "expected_mod",
    "chained_value",
    "cglmp_chained_value",
    "gamma_factor",
    "asymptotic_chained_value",
]

PROB_TOL = 1e-12


@dataclass(frozen=True)
class ChainedSettings:
    """Measurement phases for the chained scenario.

    ``alpha[A-1] = (A - 1/2)/N`` for Alice, ``beta[B-1] = B/N`` for Bob.
    """

    d: int
    n: int
    alpha: np.ndarray
    beta: np.ndarray


def chained_settings(d: int, n: int) -> ChainedSettings:
    """Standard chained phases for n settings per side in dimension d."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = np.arange(1, n + 1, dtype=float)
    return ChainedSettings(d=d, n=n, alpha=(idx - 0.5) / n, beta=idx / n)


def cglmp_bases(settings: ChainedSettings) -> tuple[np.ndarray, np.ndarray]:
    """Fourier-type measurement bases for both sides.

    Returns (alice, bob), each of shape (N, d, d), where
    ``alice[A-1, X, j] = exp(2 pi i j (X - alpha_A) / d) / sqrt(d)`` and
    Bob's phases carry the opposite sign.  Every basis is orthonormal.
    """
    d, n = settings.d, settings.n
    j = np.arange(d)
    x = np.arange(d)
    ph_a = np.einsum("j,ax->axj", j, x[None, :] - settings.alpha[:, None])
    ph_b = np.einsum("j,by->byj", j, x[None, :] - settings.beta[:, None])
    alice = np.exp(2j * np.pi / d * ph_a) / math.sqrt(d)
    bob = np.exp(-2j * np.pi / d * ph_b) / math.sqrt(d)
    return alice, bob


def maximally_entangled(d: int) -> np.ndarray:
    """The state sum_j |jj> / sqrt(d) as a flat d**2 vector."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return np.eye(d, dtype=complex).reshape(-1) / math.sqrt(d)


def _clip_probs(probs: np.ndarray) -> np.ndarray:
    """Clip entries in [-1e-12, 0) to zero; reject anything more negative."""
    lowest = float(probs.min())
    if lowest < -PROB_TOL:
        raise ValueError(f"probability entry {lowest} below -{PROB_TOL}")
    return np.clip(probs, 0.0, None)


@dataclass(frozen=True)
class JointDistribution:
    """Quantum joint outcome distribution, ``probs[A-1, B-1, X, Y]``."""

    d: int
    n: int
    probs: np.ndarray

    def validate(self, tol: float = PROB_TOL) -> None:
        """Check normalization and the no-signaling property of marginals."""
        p = self.probs
        if p.shape != (self.n, self.n, self.d, self.d):
            raise ValueError(f"probs shape {p.shape} does not match (n, n, d, d)")
        if p.min() < 0:
            raise ValueError("negative probability entry")
        totals = p.sum(axis=(2, 3))
        if np.abs(totals - 1.0).max() > tol:
            raise ValueError("setting pair not normalized")
        alice = p.sum(axis=3)
        bob = p.sum(axis=2)
        res_a = np.ptp(alice, axis=1).max()
        res_b = np.ptp(bob, axis=0).max()
        if max(res_a, res_b) > tol:
            raise ValueError(f"signaling residual {max(res_a, res_b)} above {tol}")


def joint_from_bases(
    state: np.ndarray, alice: np.ndarray, bob: np.ndarray
) -> JointDistribution:
    """Born-rule joint distribution of a bipartite state under given bases.

    ``alice``/``bob`` have shape (N, d, d) with rows ``[setting, outcome, :]``.
    """
    alice = np.asarray(alice, dtype=complex)
    bob = np.asarray(bob, dtype=complex)
    n, d = alice.shape[0], alice.shape[1]
    if bob.shape != alice.shape:
        raise ValueError("Alice and Bob basis arrays must share a shape")
    s = np.asarray(state, dtype=complex).reshape(-1)
    if s.shape[0] != d * d:
        raise ValueError(f"state length {s.shape[0]} does not match d={d}")
    smat = s.reshape(d, d)
    # amp[A,B,X,Y] = <X_A (x) Y_B | psi>
    half = np.einsum("axj,jk->axk", alice.conj(), smat)
    amp = np.einsum("axk,byk->abxy", half, bob.conj(), optimize=True)
    probs = _clip_probs(np.abs(amp) ** 2)
    dist = JointDistribution(d=d, n=n, probs=probs)
    dist.validate()
    return dist


def joint_distribution(state: np.ndarray, settings: ChainedSettings) -> JointDistribution:
    """Joint distribution of ``state`` under the chained measurement bases."""
    alice, bob = cglmp_bases(settings)
    return joint_from_bases(state, alice, bob)


def _difference_probs(d: int, f: np.ndarray) -> np.ndarray:
    """Closed-form P((Y-X) mod d = m) for phase gaps ``f``; shape f.shape + (d,)."""
    f = np.asarray(f, dtype=float)
    theta = f[..., None] + np.arange(d)
    small = theta / d - np.round(theta / d)
    den = np.sin(np.pi * theta / d) ** 2
    num = np.sin(np.pi * theta) ** 2
    safe = np.abs(small) > 1e-12
    out = np.empty_like(den)
    out[safe] = num[safe] / (d * d * den[safe])
    out[~safe] = 1.0  # theta = 0 (mod d): the class soaks up all the weight
    return out


def closed_form_probs(settings: ChainedSettings) -> np.ndarray:
    """Analytic joint tensor, equal to the Born-rule path entrywise.

    Entry (A, B, X, Y) is ``sin^2(pi theta) / (d^3 sin^2(pi theta / d))``
    with ``theta = Y - X + alpha_A - beta_B``, taking the limit 1/d at
    theta = 0 (mod d).
    """
    d, n = settings.d, settings.n
    f = settings.alpha[:, None] - settings.beta[None, :]
    pm = _difference_probs(d, f)  # (A, B, m)
    m = (np.arange(d)[None, :] - np.arange(d)[:, None]) % d  # m[X, Y] = (Y-X) mod d
    return pm[:, :, m] / d


def expected_mod(
    dist: JointDistribution, a: int, b: int, sign: int = 1, offset: int = 0
) -> float:
    """Mean of ``[sign*(X - Y) + offset] mod d`` at setting pair (a, b).

    ``a`` and ``b`` are 1-based setting indices.
    """
    probs = dist.probs
    n, d = dist.n, dist.d
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"setting indices ({a}, {b}) out of range 1..{n}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    x = np.arange(d)[:, None]
    y = np.arange(d)[None, :]
    weights = (sign * (x - y) + offset) % d
    return float(np.sum(weights * probs[a - 1, b - 1]))


def _probs_of(dist) -> tuple[np.ndarray, int, int]:
    probs = getattr(dist, "probs", None)
    if probs is None:
        probs = np.asarray(dist, dtype=float)
        n, d = probs.shape[0], probs.shape[2]
    else:
        n, d = dist.n, dist.d
    if probs.shape != (n, n, d, d):
        raise ValueError(f"expected shape (n, n, d, d), got {probs.shape}")
    return probs, n, d


def chained_value(dist) -> float:
    """The chained quantity I_N of a joint distribution tensor.

    Accepts a JointDistribution, any object with fields ``probs``/``n``/``d``,
    or a bare (N, N, d, d) array.  The wrap pairs setting A=1 with B=N and
    shifts Alice's outcome by one.
    """
    probs, n, d = _probs_of(dist)
    x = np.arange(d)[:, None]
    y = np.arange(d)[None, :]
    w_xy = (x - y) % d
    w_yx = (y - x) % d
    w_wrap = (y - x - 1) % d
    diag = np.einsum("iixy->xy", probs)
    total = float(np.sum(w_xy * diag))
    if n > 1:
        above = np.einsum("iixy->xy", probs[1:, :-1])
        total += float(np.sum(w_yx * above))
    total += float(np.sum(w_wrap * probs[0, n - 1]))
    return total


def cglmp_chained_value(d: int, n: int) -> float:
    """Exact I_N on the maximally entangled state, fast closed form.

    All 2N terms of the chain are equal by phase symmetry, so
    ``I_N = 2 N sum_m m P_m(1/(2N))``.  Agrees with
    ``chained_value(joint_distribution(...))`` to 1e-10.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    pm = _difference_probs(d, np.array(1.0 / (2 * n)))
    return float(2 * n * np.sum(np.arange(d) * pm))


def gamma_factor(d: int) -> float:
    """Leading coefficient of the large-N decay of I_N.

    ``gamma = pi^2/(4 d^2) * sum_{j=1}^{d-1} j / sin^2(pi j / d)``; the
    quantum value obeys I_N = 2 gamma / N + O(1/N^2).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    j = np.arange(1, d)
    return float(np.pi**2 / (4 * d * d) * np.sum(j / np.sin(np.pi * j / d) ** 2))


def asymptotic_chained_value(d: int, n: int) -> float:
    """Leading-order approximation ``2 gamma(d) / N`` of the exact I_N."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2.0 * gamma_factor(d) / n
