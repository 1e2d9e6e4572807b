"""No-signaling distribution tooling.

Distance measures, generators and verifiers for conditional distributions
P(X, Y | A, B) that leave each party's marginals independent of the remote
setting.  The central property checked here: for any no-signaling
distribution, every setting's outcome marginal changes by at most I_N under
a cyclic relabeling of outcomes,

    Delta(P_X, P_{X+1}) <= I_N ,

where ``Delta(P, Q) = sum_x |P(x) - Q(x)| / d``.  The proof chains two
facts, both verifiable here on their own: the agreement bound
``P(X_A = Y_B) <= 1 - Delta(P_{X_A}, P_{Y_B})`` and the triangle
inequality of Delta.  Everything is checked in the stronger per-setting
form, which implies the averaged statement for any hidden-state
distribution.

Also provided: the exact minimum of I_N over local deterministic
strategies (the local-causality floor d-1) and the certificate that two
distinct measurement directions can never both be perfectly predicted by
one hidden unit vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .bloch import substream
from .leggett import basis_to_bloch
from .quantum import chained_value

__all__ = [
    "statistical_distance",
    "shift_distance",
    "ConditionalDistribution",
    "NoSignalingReport",
    "check_no_signaling",
    "random_no_signaling",
    "ShiftBoundReport",
    "verify_shift_bound",
    "AgreementReport",
    "check_agreement_bound",
    "DeterministicStrategy",
    "strategy_chained_value",
    "lhv_min_chained",
    "ContradictionReport",
    "deterministic_contradiction",
]

_NORM_TOL = 1e-9
_BRUTE_FORCE_LIMIT = 10**8


def _check_distribution(p: np.ndarray, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.min() < -1e-12:
        raise ValueError(f"{name} has a negative entry")
    if abs(p.sum() - 1.0) > _NORM_TOL:
        raise ValueError(f"{name} is not normalized")
    return p


def statistical_distance(p: np.ndarray, q: np.ndarray) -> float:
    """1/d-normalized L1 distance ``sum_x |P(x) - Q(x)| / d``.

    Symmetric, zero iff P = Q, bounded by 2/d, and satisfies the triangle
    inequality.
    """
    p = _check_distribution(p, "P")
    q = _check_distribution(q, "Q")
    if p.shape != q.shape:
        raise ValueError("distributions have different outcome counts")
    return float(np.abs(p - q).sum() / p.shape[0])


def shift_distance(p: np.ndarray) -> float:
    """Distance of a distribution from its cyclic outcome shift,
    ``sum_x |P(x) - P(x+1 mod d)| / d``."""
    p = _check_distribution(p, "P")
    return float(np.abs(p - np.roll(p, -1)).sum() / p.shape[0])


@dataclass(frozen=True)
class ConditionalDistribution:
    """Conditional outcome distribution, ``probs[A-1, B-1, X, Y]``."""

    d: int
    n: int
    probs: np.ndarray

    def validate(self, tol: float = 1e-12) -> None:
        p = self.probs
        if p.shape != (self.n, self.n, self.d, self.d):
            raise ValueError(f"probs shape {p.shape} does not match (n, n, d, d)")
        if p.min() < -tol:
            raise ValueError("negative probability entry")
        if np.abs(p.sum(axis=(2, 3)) - 1.0).max() > tol:
            raise ValueError("setting pair not normalized")


@dataclass(frozen=True)
class NoSignalingReport:
    alice_residual: float
    bob_residual: float
    residual: float
    tol: float
    passed: bool


def check_no_signaling(dist, tol: float = 1e-12) -> NoSignalingReport:
    """Largest variation of either party's marginals across remote settings."""
    probs = np.asarray(getattr(dist, "probs", dist), dtype=float)
    alice = probs.sum(axis=3)  # (A, B, X)
    bob = probs.sum(axis=2)  # (A, B, Y)
    res_a = float(np.ptp(alice, axis=1).max())  # spread across Bob's settings
    res_b = float(np.ptp(bob, axis=0).max())
    residual = max(res_a, res_b)
    return NoSignalingReport(
        alice_residual=res_a,
        bob_residual=res_b,
        residual=residual,
        tol=tol,
        passed=residual <= tol,
    )


def random_no_signaling(
    d: int, n: int, mix: float, rng: np.random.Generator | int
) -> ConditionalDistribution:
    """Random no-signaling distribution built from provably safe blocks.

    A convex mixture of (i) local deterministic strategies and (ii)
    modulo-correlated boxes Y = X + f(A, B) with X uniform, weighted
    (1 - mix) : mix.  Both blocks are no-signaling by construction, so no
    projection or clipping is ever needed.
    """
    if not 0.0 <= mix <= 1.0:
        raise ValueError("mix must lie in [0, 1]")
    gen = substream(int(rng), 0) if isinstance(rng, (int, np.integer)) else rng
    probs = np.zeros((n, n, d, d))

    n_local = int(gen.integers(1, 6))
    w = gen.dirichlet(np.ones(n_local))
    for i in range(n_local):
        a = gen.integers(0, d, size=n)
        b = gen.integers(0, d, size=n)
        one_a = np.zeros((n, d))
        one_a[np.arange(n), a] = 1.0
        one_b = np.zeros((n, d))
        one_b[np.arange(n), b] = 1.0
        probs += (1.0 - mix) * w[i] * np.einsum("ax,by->abxy", one_a, one_b)

    n_box = int(gen.integers(1, 6))
    v = gen.dirichlet(np.ones(n_box))
    x = np.arange(d)
    a_idx = np.arange(n)[:, None, None]
    b_idx = np.arange(n)[None, :, None]
    for i in range(n_box):
        f = gen.integers(0, d, size=(n, n))
        y = (x[None, None, :] + f[:, :, None]) % d
        probs[a_idx, b_idx, x[None, None, :], y] += mix * v[i] / d

    dist = ConditionalDistribution(d=d, n=n, probs=probs)
    dist.validate()
    return dist


@dataclass(frozen=True)
class ShiftBoundReport:
    chained: float
    shifts: np.ndarray  # per-setting Alice shift distances
    max_shift: float
    slack: float
    passed: bool


def verify_shift_bound(dist, tol: float = 1e-9) -> ShiftBoundReport:
    """Check ``Delta(P_X|a, P_X+1|a) <= I_N`` for every Alice setting.

    Rejects signaling input (the bound presumes no-signaling).  ``slack``
    is I_N minus the largest per-setting shift distance and must stay above
    -tol.
    """
    ns = check_no_signaling(dist, tol)
    if not ns.passed:
        raise ValueError(
            f"input distribution signals (residual {ns.residual:.3g} > {tol:.3g})"
        )
    probs = np.asarray(getattr(dist, "probs", dist), dtype=float)
    i_n = chained_value(probs)
    marg = probs.sum(axis=3).mean(axis=1)  # (A, X), B-averaged
    shifts = np.abs(marg - np.roll(marg, -1, axis=1)).sum(axis=1) / probs.shape[2]
    max_shift = float(shifts.max())
    slack = i_n - max_shift
    return ShiftBoundReport(
        chained=i_n,
        shifts=shifts,
        max_shift=max_shift,
        slack=slack,
        passed=slack >= -tol,
    )


@dataclass(frozen=True)
class AgreementReport:
    p_equal: float
    distance: float
    slack: float
    passed: bool


def check_agreement_bound(dist, a: int, b: int, tol: float = 1e-9) -> AgreementReport:
    """Check ``P(X_A = Y_B) <= 1 - Delta(P_{X_A}, P_{Y_B})`` at one pair.

    ``a`` and ``b`` are 1-based setting indices.
    """
    probs = np.asarray(getattr(dist, "probs", dist), dtype=float)
    n, d = probs.shape[0], probs.shape[2]
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"setting indices ({a}, {b}) out of range 1..{n}")
    block = probs[a - 1, b - 1]
    p_equal = float(np.trace(block))
    delta = statistical_distance(block.sum(axis=1), block.sum(axis=0))
    slack = 1.0 - delta - p_equal
    return AgreementReport(
        p_equal=p_equal, distance=delta, slack=slack, passed=slack >= -tol
    )


@dataclass(frozen=True)
class DeterministicStrategy:
    """Fixed outcome per setting for each side."""

    alice: tuple[int, ...]
    bob: tuple[int, ...]


def strategy_chained_value(d: int, alice, bob) -> int:
    """I_N of a deterministic strategy; always an integer."""
    a = np.asarray(alice, dtype=int)
    b = np.asarray(bob, dtype=int)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("alice and bob must be equal-length outcome sequences")
    a_next = np.roll(a, -1)
    a_next[-1] = a[0] + 1
    return int(np.sum((a - b) % d) + np.sum((b - a_next) % d))


def lhv_min_chained(d: int, n: int) -> tuple[int, DeterministicStrategy]:
    """Exact minimum of I_N over all deterministic strategies plus a witness.

    I_N is linear in the distribution, so the minimum over all local models
    (deterministic or mixed) is attained at a deterministic vertex; the
    enumeration is therefore the full local bound.  Guarded at d**(2n) <=
    1e8 strategies.
    """
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    if d ** (2 * n) > _BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"d**(2n) = {d ** (2 * n)} strategies exceeds the {_BRUTE_FORCE_LIMIT} guard"
        )
    bob_space = np.stack(
        np.meshgrid(*([np.arange(d)] * n), indexing="ij"), axis=-1
    ).reshape(-1, n)
    best = None
    best_pair = None
    for alice in itertools.product(range(d), repeat=n):
        a = np.asarray(alice, dtype=int)
        a_next = np.roll(a, -1)
        a_next[-1] = a[0] + 1
        totals = ((a[None, :] - bob_space) % d + (bob_space - a_next[None, :]) % d).sum(
            axis=1
        )
        idx = int(np.argmin(totals))
        if best is None or totals[idx] < best:
            best = int(totals[idx])
            best_pair = (alice, tuple(int(v) for v in bob_space[idx]))
    return best, DeterministicStrategy(alice=best_pair[0], bob=best_pair[1])


@dataclass(frozen=True)
class ContradictionReport:
    """Infeasibility certificate for perfect predictions at two settings.

    ``max_min_overlap`` is the maximum over unit u of min(a1.u, a2.u); a
    positive ``gap`` = 1 - max certifies that no hidden unit vector aligns
    perfectly with both measurement directions at once.
    """

    vector_a: np.ndarray
    vector_b: np.ndarray
    best_direction: np.ndarray
    max_min_overlap: float
    gap: float
    certified: bool


def deterministic_contradiction(
    basis1: np.ndarray, basis2: np.ndarray, x1: int, x2: int
) -> ContradictionReport:
    """Certificate that outcomes x1, x2 of two distinct bases cannot both
    be certain.

    Perfect prediction of outcome x requires ``a^x . u = 1``, i.e. u equal
    to the measurement Bloch vector.  For distinct vectors the best any
    unit u can do is ``max_u min(a1.u, a2.u) = (1 + a1.a2)/|a1 + a2| < 1``,
    attained at the normalized bisector.  Equal vectors yield no
    certificate; antipodal vectors give max 0 (gap 1).
    """
    a = basis_to_bloch(np.asarray(basis1)).vectors[x1]
    b = basis_to_bloch(np.asarray(basis2)).vectors[x2]
    if np.linalg.norm(a - b) <= 1e-10:
        return ContradictionReport(
            vector_a=a,
            vector_b=b,
            best_direction=a,
            max_min_overlap=1.0,
            gap=0.0,
            certified=False,
        )
    s = a + b
    norm_s = float(np.linalg.norm(s))
    if norm_s <= 1e-12:
        # antipodal: min(a.u, -a.u) <= 0 with equality on the equator
        perp = np.zeros_like(a)
        perp[int(np.argmin(np.abs(a)))] = 1.0
        perp -= (perp @ a) * a
        perp /= np.linalg.norm(perp)
        return ContradictionReport(
            vector_a=a,
            vector_b=b,
            best_direction=perp,
            max_min_overlap=0.0,
            gap=1.0,
            certified=True,
        )
    u_best = s / norm_s
    max_min = float((1.0 + a @ b) / norm_s)
    return ContradictionReport(
        vector_a=a,
        vector_b=b,
        best_direction=u_best,
        max_min_overlap=max_min,
        gap=1.0 - max_min,
        certified=True,
    )
