"""Leggett-type crypto-nonlocal model in arbitrary dimension.

The model assigns each particle a hidden pure state, a unit Bloch vector
``u``, and forces the single-party marginal to follow the projection rule

    P(X = x | basis, u) = [1 + eta (d-1) a^x . u] / d ,

where ``a^x`` is the Bloch vector of the basis state for outcome x and
``eta`` in (0, 1] is the purity of the hidden state.  Averaging over the
hidden-state distribution constrains the chained quantity:

    L = eta (d-1)/d^2 * sum_x < |(a^x - a^{x-1}) . u| >_u  <=  I_N ,

with x - 1 cyclic.  For u uniform on the Bloch sphere L has the explicit
floor ``eta 2(d-1)/d^3`` and the exact isotropic average is available in
closed form because every step ``|a^x - a^{x-1}|`` equals sqrt(2d/(d-1)).
Quantum mechanics drives I_N below the floor once N is large enough; the
smallest such N is the critical settings count found by `find_critical_n`.

A hidden vector orthogonal to the span of all difference vectors makes L
vanish ("escape direction").  `multi_plane_families` counters this by
conjugating the measurement set with unitaries (compensated on the other
side, so I_N is unchanged) until the accumulated spans exhaust the Bloch
space; `escape_report` measures the projection of a fixed u onto each
family's span.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import (
    expected_abs_projection,
    haar_unitary,
    sample_haar_pure,
    sample_sphere,
    state_to_bloch,
    substream,
)
from .quantum import ChainedSettings, cglmp_bases, cglmp_chained_value

__all__ = [
    "MeasurementBasisBloch",
    "basis_to_bloch",
    "LocalModel",
    "BoundEstimate",
    "marginal",
    "marginal_distribution",
    "leggett_bound_mc",
    "leggett_bound_analytic",
    "leggett_bound_floor",
    "find_critical_n",
    "CriticalNotFoundError",
    "MeasurementFamily",
    "multi_plane_families",
    "ConstructionError",
    "FamilyProjection",
    "escape_report",
]

U_MODES = ("sphere-uniform", "haar-pure", "fixed")

_MC_CHUNK = 1 << 16
_SPAN_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementBasisBloch:
    """Bloch vectors of one projective measurement, one row per outcome."""

    d: int
    vectors: np.ndarray  # shape (d, d**2 - 1)

    def validate(self, tol: float = 1e-10) -> None:
        """Completeness, pairwise overlap and cyclic step-length checks."""
        d, v = self.d, self.vectors
        if v.shape != (d, d * d - 1):
            raise ValueError(f"vectors shape {v.shape} does not match d={d}")
        if np.abs(v.sum(axis=0)).max() > tol:
            raise ValueError("outcome vectors do not sum to zero")
        gram = v @ v.T
        target = -1.0 / (d - 1)
        mask = ~np.eye(d, dtype=bool)
        if np.abs(gram[mask] - target).max() > tol:
            raise ValueError("pairwise overlaps deviate from -1/(d-1)")
        if np.abs(np.diag(gram) - 1.0).max() > tol:
            raise ValueError("outcome vectors are not unit norm")
        steps = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1)
        if np.abs(steps - math.sqrt(2.0 * d / (d - 1))).max() > tol:
            raise ValueError("cyclic step lengths deviate from sqrt(2d/(d-1))")


def basis_to_bloch(basis: np.ndarray) -> MeasurementBasisBloch:
    """Bloch vectors of an orthonormal basis, ``basis[x]`` the outcome-x state."""
    basis = np.asarray(basis, dtype=complex)
    d = basis.shape[0]
    if basis.shape != (d, d):
        raise ValueError(f"expected a (d, d) array of basis rows, got {basis.shape}")
    gram = basis @ basis.conj().T
    if np.abs(gram - np.eye(d)).max() > 1e-10:
        raise ValueError("input vectors are not an orthonormal basis")
    out = MeasurementBasisBloch(
        d=d, vectors=np.stack([state_to_bloch(v) for v in basis])
    )
    out.validate()
    return out


@dataclass(frozen=True)
class LocalModel:
    """Crypto-nonlocal model parameters.

    ``u_mode`` selects the hidden-state distribution on Alice's side:
    "sphere-uniform" (all of S^{d^2-2}, including non-physical points),
    "haar-pure" (Bloch vectors of Haar-random pure states) or "fixed"
    (a single direction, supplied in ``fixed_u``).  Bob's hidden state is
    recorded for completeness but never enters the bound.
    """

    d: int
    eta: float = 1.0
    u_mode: str = "sphere-uniform"
    fixed_u: np.ndarray | None = None
    v_mode: str = "sphere-uniform"
    fixed_v: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")
        for mode, vec, name in (
            (self.u_mode, self.fixed_u, "u"),
            (self.v_mode, self.fixed_v, "v"),
        ):
            if mode not in U_MODES:
                raise ValueError(f"unknown {name}_mode {mode!r}")
            if mode == "fixed":
                if vec is None:
                    raise ValueError(f"fixed {name}_mode requires fixed_{name}")
                vec = np.asarray(vec, dtype=float)
                if vec.shape != (self.d * self.d - 1,):
                    raise ValueError(f"fixed_{name} has wrong length")
                if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
                    raise ValueError(f"fixed_{name} must be unit norm")


@dataclass(frozen=True)
class BoundEstimate:
    """A bound value with Monte Carlo uncertainty (0 when analytic/exact)."""

    value: float
    std_error: float
    samples: int


def marginal(
    x: int, basis: MeasurementBasisBloch, u: np.ndarray, eta: float = 1.0
) -> tuple[float, bool]:
    """Model marginal for outcome ``x`` plus a validity flag.

    The flag is False when any outcome of the basis would receive a
    negative value at this ``u`` (possible for non-physical sphere points);
    values are reported unclamped either way.
    """
    values, valid = marginal_distribution(basis, u, eta)
    return float(values[x]), valid


def marginal_distribution(
    basis: MeasurementBasisBloch, u: np.ndarray, eta: float = 1.0
) -> tuple[np.ndarray, bool]:
    """All d outcome marginals ``[1 + eta (d-1) a^x . u] / d`` and validity."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    u = np.asarray(u, dtype=float).reshape(-1)
    d = basis.d
    values = (1.0 + eta * (d - 1) * (basis.vectors @ u)) / d
    return values, bool(values.min() >= -1e-12)


def _difference_matrix(basis: MeasurementBasisBloch) -> np.ndarray:
    # row x is a^x - a^{x-1}, index cyclic
    return basis.vectors - np.roll(basis.vectors, 1, axis=0)


def leggett_bound_mc(
    basis: MeasurementBasisBloch,
    model: LocalModel,
    n_samples: int,
    rng: np.random.Generator | int,
) -> BoundEstimate:
    """Monte Carlo estimate of the model bound L for one measurement basis.

    ``rng`` may be a Generator (drawn sequentially) or an integer seed, in
    which case sample chunk i reads the counter-based stream (seed, i) and
    the result is independent of how chunks are scheduled.  Chunk partial
    sums are combined with `math.fsum`, so the reduction order cannot move
    the estimate.  A fixed-u model returns the exact value with zero error.
    """
    if model.d != basis.d:
        raise ValueError("model and basis dimensions differ")
    d = basis.d
    coef = model.eta * (d - 1) / d**2
    diffs = _difference_matrix(basis)

    if model.u_mode == "fixed":
        value = coef * float(np.abs(diffs @ model.fixed_u).sum())
        return BoundEstimate(value=value, std_error=0.0, samples=0)

    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    n_dim = d * d - 1
    seeded = isinstance(rng, (int, np.integer))
    partial_sums: list[float] = []
    partial_sqs: list[float] = []
    done = 0
    chunk_index = 0
    while done < n_samples:
        m = min(_MC_CHUNK, n_samples - done)
        gen = substream(int(rng), chunk_index) if seeded else rng
        if model.u_mode == "sphere-uniform":
            u = sample_sphere(n_dim, gen, size=m)
        else:
            states = sample_haar_pure(d, gen, size=m)
            u = np.stack([state_to_bloch(s) for s in states])
        vals = coef * np.abs(u @ diffs.T).sum(axis=1)
        partial_sums.append(float(vals.sum()))
        partial_sqs.append(float(np.dot(vals, vals)))
        done += m
        chunk_index += 1

    total = math.fsum(partial_sums)
    total_sq = math.fsum(partial_sqs)
    mean = total / n_samples
    if n_samples > 1:
        var = max(total_sq - n_samples * mean * mean, 0.0) / (n_samples - 1)
        stderr = math.sqrt(var / n_samples)
    else:
        stderr = 0.0
    return BoundEstimate(value=mean, std_error=stderr, samples=n_samples)


def leggett_bound_analytic(d: int, eta: float = 1.0) -> BoundEstimate:
    """Exact isotropic average of L for sphere-uniform hidden states.

    Every cyclic step has length sqrt(2d/(d-1)) and the isotropic mean of
    ``|w . u|`` is ``|w| kappa_{d^2-1}``, so
    ``L = eta (d-1)/d^2 * d sqrt(2d/(d-1)) * kappa_{d^2-1}``.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    value = (
        eta
        * (d - 1)
        / d**2
        * d
        * math.sqrt(2.0 * d / (d - 1))
        * expected_abs_projection(d * d - 1)
    )
    return BoundEstimate(value=value, std_error=0.0, samples=0)


def leggett_bound_floor(d: int, eta: float = 1.0) -> float:
    """Explicit lower bound ``eta 2(d-1)/d^3`` of L under uniform hidden states."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    return eta * 2.0 * (d - 1) / d**3


class CriticalNotFoundError(ValueError):
    """No violation found below n_max; ``gap`` is I_{n_max} minus the bound."""

    def __init__(self, message: str, gap: float):
        super().__init__(message)
        self.gap = gap


def find_critical_n(d: int, eta: float = 1.0, n_max: int = 1000) -> int:
    """Smallest N with exact I_N strictly below the uniform-sphere floor.

    Uses the exact quantum value, not its large-N approximation: near the
    threshold the two disagree about the crossing point.  Equality counts
    as no violation.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    bound = leggett_bound_floor(d, eta)
    value = math.inf
    for n in range(1, n_max + 1):
        value = cglmp_chained_value(d, n)
        if value < bound:
            return n
    raise CriticalNotFoundError(
        f"no violation for d={d}, eta={eta} up to N={n_max}; "
        f"gap I_N - bound = {value - bound:.6g}",
        gap=value - bound,
    )


class ConstructionError(RuntimeError):
    """Orthogonal measurement-family construction failed."""


@dataclass(frozen=True)
class MeasurementFamily:
    """One chained measurement set plus its Bloch-space footprint.

    ``span`` holds an orthonormal basis (rows) of the family's difference
    vectors {a^x - a^{x-1}}; ``new_directions`` the subspace this family
    adds beyond the families before it.  The ``new_directions`` blocks of a
    family list are mutually orthogonal and jointly span the union of the
    spans, so a hidden vector orthogonal to all of them is orthogonal to
    every family.
    """

    index: int
    unitary: np.ndarray
    alice: np.ndarray  # (N, d, d) basis rows per setting
    bob: np.ndarray
    span: np.ndarray
    new_directions: np.ndarray


def _orthonormal_rows(vectors: np.ndarray, tol: float = _SPAN_TOL) -> np.ndarray:
    if vectors.size == 0:
        return np.zeros((0, vectors.shape[1]))
    _, sv, vt = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(sv > tol))
    return vt[:rank]


def _family_difference_vectors(alice: np.ndarray) -> np.ndarray:
    blochs = [basis_to_bloch(alice[a]).vectors for a in range(alice.shape[0])]
    diffs = [b - np.roll(b, 1, axis=0) for b in blochs]
    return np.concatenate(diffs, axis=0)


def multi_plane_families(
    settings: ChainedSettings, k: int, seed: int = 2025
) -> list[MeasurementFamily]:
    """k copies of the chained measurement set with orthogonal new content.

    Family 1 is the input.  Each further family conjugates Alice's bases by
    a unitary and Bob's by its complex conjugate, which leaves the joint
    distribution on the maximally entangled state (hence I_N) unchanged.
    Unitaries are drawn from seeded counter-based streams and accepted only
    if the family's difference span adds at least one direction orthogonal
    to everything accumulated so far, until the Bloch space is exhausted;
    after exhaustion further families carry an empty ``new_directions``
    block (no escape direction survives anyway).
    """
    d = settings.d
    if not 1 <= k <= d * d - 2:
        raise ValueError(f"k must lie in 1..{d * d - 2} for d={d}")
    base_alice, base_bob = cglmp_bases(settings)
    full_dim = d * d - 1

    span1 = _orthonormal_rows(_family_difference_vectors(base_alice))
    families = [
        MeasurementFamily(
            index=1,
            unitary=np.eye(d, dtype=complex),
            alice=base_alice,
            bob=base_bob,
            span=span1,
            new_directions=span1,
        )
    ]
    accumulated = span1

    for t in range(2, k + 1):
        chosen = None
        for attempt in range(64):
            gen = substream(seed, t * 1000 + attempt)
            u_t = haar_unitary(d, gen)
            alice = np.einsum("ij,axj->axi", u_t, base_alice)
            bob = np.einsum("ij,axj->axi", u_t.conj(), base_bob)
            diffs = _family_difference_vectors(alice)
            span = _orthonormal_rows(diffs)
            residual = diffs - (diffs @ accumulated.T) @ accumulated
            new_dirs = _orthonormal_rows(residual)
            if new_dirs.shape[0] > 0 or accumulated.shape[0] >= full_dim:
                chosen = (u_t, alice, bob, span, new_dirs)
                break
        if chosen is None:
            raise ConstructionError(
                f"no conjugation with orthogonal new content found for family {t}"
            )
        u_t, alice, bob, span, new_dirs = chosen
        accumulated = np.concatenate([accumulated, new_dirs], axis=0)
        families.append(
            MeasurementFamily(
                index=t,
                unitary=u_t,
                alice=alice,
                bob=bob,
                span=span,
                new_directions=new_dirs,
            )
        )

    for i, fam_i in enumerate(families):
        for fam_j in families[i + 1 :]:
            if fam_i.new_directions.size and fam_j.new_directions.size:
                res = np.abs(fam_i.new_directions @ fam_j.new_directions.T).max()
                if res > _SPAN_TOL:
                    raise ConstructionError(
                        f"descriptor orthogonality residual {res} above {_SPAN_TOL}"
                    )
    return families


@dataclass(frozen=True)
class FamilyProjection:
    index: int
    projection: float
    escape_possible: bool


def escape_report(
    u: np.ndarray, families: list[MeasurementFamily]
) -> list[FamilyProjection]:
    """Projection of a fixed hidden vector onto each family's difference span.

    A family is flagged when the projection falls below 1e-9: for that
    family alone, ``u`` is an escape direction and L vanishes.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("u must be unit norm")
    out = []
    for fam in families:
        proj = float(np.linalg.norm(fam.span @ u)) if fam.span.size else 0.0
        out.append(
            FamilyProjection(
                index=fam.index, projection=proj, escape_possible=proj < _SPAN_TOL
            )
        )
    return out
