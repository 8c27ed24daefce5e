"""The three controller constructions and their structural checks.

All controllers here share the realization shape x_K(k+1) = A_K x_K + B_K x,
u = C_K x_K + D_K x with x_K(0) = 0, one controller state per subsystem, and
diagonal A_K and C_K so that subcontrollers share no state.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidPerturbationError,
    InvalidSpecError,
    NotNilpotentError,
    SingularResolventError,
    ZeroGainError,
)
from .graphs import sinks
from .plant import Plant, is_nilpotent_deg2, validate
from .riccati import augment, solve_singular_dare


@dataclass(frozen=True, eq=False)
class Controller:
    A_K: np.ndarray
    B_K: np.ndarray
    C_K: np.ndarray
    D_K: np.ndarray

    def __post_init__(self):
        mats = {}
        for name in ("A_K", "B_K", "C_K", "D_K"):
            m = np.array(getattr(self, name), dtype=float)
            m.setflags(write=False)
            mats[name] = m
            object.__setattr__(self, name, m)
        n = mats["D_K"].shape[0]
        for name, m in mats.items():
            if m.shape != (n, n):
                raise DimensionMismatchError(
                    f"{name} has shape {m.shape}, expected ({n},{n})")
        for name in ("A_K", "C_K"):
            m = mats[name]
            if np.any(m[~np.eye(n, dtype=bool)] != 0):
                raise InvalidSpecError(
                    f"{name} must be diagonal; subcontrollers may not share state")

    @property
    def n(self):
        return self.D_K.shape[0]


def controller_to_dict(k):
    return {"A_K": k.A_K.tolist(), "B_K": k.B_K.tolist(),
            "C_K": k.C_K.tolist(), "D_K": k.D_K.tolist()}


def controller_from_dict(d):
    return Controller(A_K=np.array(d["A_K"], dtype=float),
                      B_K=np.array(d["B_K"], dtype=float),
                      C_K=np.array(d["C_K"], dtype=float),
                      D_K=np.array(d["D_K"], dtype=float))


def controller_from_gains(p, sol):
    """Assemble the optimal controller from a solved Riccati fixed point.

    D_K is the very array G2 B^-1, so the defining constraint
    G2 B^-1 - D_K = 0 holds bit for bit, not merely within tolerance.
    """
    d_k = sol.G2 / p.b_diag[None, :]
    b_k = sol.G1 + p.d_diag[:, None] * d_k - d_k @ p.A
    return Controller(A_K=p.D, B_K=b_k, C_K=np.eye(p.n), D_K=d_k)


def centralized_optimal(p, sol=None, tol=1e-12, max_iter=100000):
    """Optimal disturbance-accommodating controller with full model access."""
    if sol is None:
        sol = solve_singular_dare(augment(p), tol=tol, max_iter=max_iter)
    return controller_from_gains(p, sol)


def nilpotent_centralized(p):
    """Closed-form optimal controller for plants whose coupling matrix
    squares to zero; agrees with centralized_optimal without solving."""
    if not is_nilpotent_deg2(p.A):
        raise NotNilpotentError("plant coupling matrix A must satisfy A @ A = 0")
    b = p.b_diag
    d = p.d_diag
    shrink = 1.0 / (1.0 + b * b)
    d_k = -(shrink * b)[:, None] * p.A - np.diag(d / b)
    b_k = (d * shrink / b)[:, None] * p.A - np.diag(d * d / b)
    return Controller(A_K=p.D, B_K=b_k, C_K=np.eye(p.n), D_K=d_k)


def deadbeat(p):
    """Two-step deadbeat design: cancel couplings and disturbance estimate,
    then hold u + w at zero. Row i uses only (row i of A, b_ii, d_ii)."""
    b = p.b_diag
    d = p.d_diag
    d_k = -(p.A + p.D) / b[:, None]
    b_k = np.diag(-(d * d) / b)
    return Controller(A_K=p.D, B_K=b_k, C_K=np.eye(p.n), D_K=d_k)


def sink_gain(a_ii, b_ii):
    """Optimal scalar state-feedback factor for a decoupled subsystem.

    Solves the scalar cheap-control Riccati problem for dynamics a_ii and
    gain b_ii; the returned f in (0, 1] scales how much of the local
    coupling row survives in the feedback.
    """
    if b_ii == 0:
        raise ZeroGainError("input gain b_ii must be nonzero")
    a2 = a_ii * a_ii
    b2 = b_ii * b_ii
    disc = (a2 + b2) ** 2 + 2.0 * (b2 - a2) + 1.0
    return 2.0 / (b2 + a2 + 1.0 + math.sqrt(disc))


def sink_aware(p, g_p):
    """Deadbeat on every subsystem that feeds another, scalar-optimal gain on
    every sink of the plant graph.

    Sinks are read off the graph, not off numeric zeros in A: a sampled
    coupling that happens to be 0.0 does not make a subsystem a sink. With
    no sinks at all the result is deadbeat(p), bit for bit.
    """
    if p.n != g_p.n:
        raise DimensionMismatchError(
            f"plant has {p.n} subsystems but graph has {g_p.n} vertices")
    sink_set = sinks(g_p)
    if not sink_set:
        return deadbeat(p)
    b = p.b_diag
    d = p.d_diag
    f = np.zeros(p.n)
    for v in sink_set:
        f[v - 1] = sink_gain(p.A[v - 1, v - 1], b[v - 1])
    # row-scaled division keeps the non-sink cancellation rows bitwise equal
    # to the deadbeat rows: (f-1)*a/b, not ((f-1)/b)*a
    d_k = ((f - 1.0)[:, None] * p.A) / b[:, None] - np.diag(d / b)
    b_k = ((d * f)[:, None] * p.A) / b[:, None] - np.diag(d * d / b)
    return Controller(A_K=p.D, B_K=b_k, C_K=np.eye(p.n), D_K=d_k)


def transfer_eval(k, z):
    """Evaluate C_K (z I - A_K)^-1 B_K + D_K at one complex point."""
    z = complex(z)
    modes = np.diag(k.A_K)
    if np.any(z == modes):
        raise SingularResolventError(f"z = {z} is a controller mode")
    resolvent = np.linalg.solve(z * np.eye(k.n) - k.A_K.astype(complex), k.B_K)
    return k.C_K @ resolvent + k.D_K


_PROBE_ANGLES = 2.0 * np.pi * np.arange(8) / 8.0


def sparsity_pattern(k, tol=1e-9):
    """Binary mask of transfer-function entries that are nonzero anywhere.

    Probes eight fixed points on the circle |z| = 3; if a probe lands on a
    controller mode the whole ring is retried at |z| = 17. An entry whose
    modulus stays below tol at every probe is reported as structurally zero.
    """
    for radius in (3.0, 17.0):
        points = radius * np.exp(1j * _PROBE_ANGLES)
        try:
            stacked = np.stack([np.abs(transfer_eval(k, z)) for z in points])
        except SingularResolventError:
            continue
        return (stacked.max(axis=0) >= tol).astype(np.int8)
    raise SingularResolventError(
        "probe rings at |z| = 3 and |z| = 17 both intersect the controller modes")


def coupling_cancellation_defect(p, k, rows=None):
    """Largest residue of a_ij + b_ii * (D_K)_ij over off-diagonal entries.

    Evaluated in the divided form a_ij / b_ii + (D_K)_ij: multiplying the
    feedback entry back by b_ii costs an ulp in floating point, while the
    divided form is exactly zero for controllers built by division, which
    is what the constructions here do. rows restricts the check to the
    given 1-based rows.
    """
    scaled = p.A / p.b_diag[:, None] + k.D_K
    np.fill_diagonal(scaled, 0.0)
    if rows is not None:
        keep = np.zeros(p.n, dtype=bool)
        for r in rows:
            keep[r - 1] = True
        scaled = scaled[keep]
    return float(np.max(np.abs(scaled))) if scaled.size else 0.0


@dataclass(frozen=True)
class RowPerturbation:
    """Replacement data for one subsystem row; None fields keep the original."""
    a_row: tuple | None = None
    b: float | None = None
    d: float | None = None


def _strategy_map(strategy, g_p):
    if strategy == "deadbeat":
        return lambda p: deadbeat(p)
    if strategy == "theta":
        return lambda p: sink_aware(p, g_p)
    if strategy == "centralized":
        return lambda p: centralized_optimal(p)
    raise InvalidSpecError(f"unknown strategy {strategy!r}")


def apply_row_perturbation(p, g_p, row, pert, eps_b=None):
    """Rebuild p with row `row` (1-based) of (A, b, d) replaced.

    The perturbed plant must stay admissible; anything that would leave the
    structured set (an off-mask coupling, a gain at zero or under an
    explicit floor) is rejected.
    """
    if not (1 <= row <= p.n):
        raise InvalidPerturbationError(f"row {row} outside 1..{p.n}")
    i = row - 1
    a = p.A.copy()
    b = p.b_diag.copy()
    d = p.d_diag.copy()
    if pert.a_row is not None:
        new_row = np.asarray(pert.a_row, dtype=float)
        if new_row.shape != (p.n,):
            raise InvalidPerturbationError(
                f"replacement row has shape {new_row.shape}, expected ({p.n},)")
        a[i, :] = new_row
    if pert.b is not None:
        b[i] = float(pert.b)
    if pert.d is not None:
        d[i] = float(pert.d)
    q = Plant(A=a, b_diag=b, d_diag=d, x0=p.x0, w0=p.w0)
    if eps_b is not None:
        if validate(q, g_p, eps_b):
            raise InvalidPerturbationError("perturbed plant violates its structured set")
    else:
        if np.any((q.A != 0) & (g_p.adj == 0)):
            raise InvalidPerturbationError("perturbed coupling leaves the graph mask")
        if b[i] == 0:
            raise InvalidPerturbationError("perturbed input gain is zero")
    return q


def limited_info_check(strategy, p, g_p, row, pert, eps_b=None):
    """True iff perturbing one subsystem row leaves every other subcontroller
    bit-identical.

    Holds for the deadbeat and sink-aware constructions, whose row i reads
    only row i of the model (plus the public graph); fails generically for
    the centralized strategy, whose Riccati gains mix all rows.
    """
    build = _strategy_map(strategy, g_p)
    base = build(p)
    perturbed = build(apply_row_perturbation(p, g_p, row, pert, eps_b))
    for j in range(p.n):
        if j == row - 1:
            continue
        if not (np.array_equal(base.B_K[j], perturbed.B_K[j])
                and np.array_equal(base.D_K[j], perturbed.D_K[j])
                and base.A_K[j, j] == perturbed.A_K[j, j]
                and base.C_K[j, j] == perturbed.C_K[j, j]):
            return False
    return True
