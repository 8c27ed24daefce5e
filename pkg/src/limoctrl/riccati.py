"""Cheap-control Riccati fixed point for the augmented plant.

The plant is augmented with the combined input xi = u + w, whose one-step
update becomes the new control. With identity state weight and zero weight
on that new control the Riccati recursion is singular, but the inner matrix
inverted each step equals the lower-right block of X and stays at or above
the identity, so plain value iteration from X = I is well posed.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (
    NoConvergenceError,
    SingularInnerMatrixError,
    UncontrollablePairError,
)
from .plant import worst_case_family

_MACH_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True, eq=False)
class AugmentedSystem:
    a_tilde: np.ndarray
    b_tilde: np.ndarray
    n: int


def augment(p):
    """Build the augmented pair ([[A, B], [0, D]], [[0], [I]]) and assert it
    is controllable (rank test at every eigenvalue)."""
    n = p.n
    a_tilde = np.zeros((2 * n, 2 * n))
    a_tilde[:n, :n] = p.A
    a_tilde[:n, n:] = np.diag(p.b_diag)
    a_tilde[n:, n:] = np.diag(p.d_diag)
    b_tilde = np.zeros((2 * n, n))
    b_tilde[n:, :] = np.eye(n)
    pencil = np.empty((2 * n, 3 * n), dtype=complex)
    pencil[:, 2 * n:] = b_tilde
    for lam in np.linalg.eigvals(a_tilde):
        pencil[:, :2 * n] = lam * np.eye(2 * n) - a_tilde
        if np.linalg.matrix_rank(pencil) < 2 * n:
            raise UncontrollablePairError(
                f"augmented pair loses rank at eigenvalue {lam}")
    return AugmentedSystem(a_tilde=a_tilde, b_tilde=b_tilde, n=n)


@dataclass(frozen=True, eq=False)
class DareSolution:
    X: np.ndarray
    X11: np.ndarray
    X12: np.ndarray
    X22: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    iterations: int
    residual: float


def _gain_rhs(x, sys):
    # the inner matrix equals X22, positive definite whenever X >= I
    inner = sys.b_tilde.T @ x @ sys.b_tilde
    rhs = sys.b_tilde.T @ x @ sys.a_tilde
    try:
        return np.linalg.solve(inner, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularInnerMatrixError(
            "inner matrix of the Riccati step is singular; the iterate lost "
            "positive definiteness, which signals an internal bug") from exc


def solve_singular_dare(sys, tol=1e-12, max_iter=100000):
    """Value-iterate X <- A~' X A~ - A~' X B~ (B~' X B~)^-1 B~' X A~ + I from
    X = I until the step change drops below tol.

    The absolute tolerance is unreachable once entries of X exceed about
    1e4 (one ulp is then larger than tol), so an iterate that is stationary
    to a few ulps of its own scale is also accepted. The reported residual
    is the max-abs Riccati defect of the returned X.
    """
    dim = 2 * sys.n
    eye = np.eye(dim)
    x = eye.copy()
    delta = np.inf
    for iterations in range(1, max_iter + 1):
        x_next = sys.a_tilde.T @ x @ sys.a_tilde \
            - (sys.a_tilde.T @ x @ sys.b_tilde) @ _gain_rhs(x, sys) + eye
        x_next = 0.5 * (x_next + x_next.T)
        delta = float(np.max(np.abs(x_next - x)))
        x = x_next
        if delta < tol or delta <= 64.0 * _MACH_EPS * (1.0 + float(np.max(np.abs(x)))):
            break
    else:
        raise NoConvergenceError(
            f"no fixed point within {max_iter} iterations, last step change {delta:.3e}",
            iterations=max_iter, residual=delta)
    n = sys.n
    g = -_gain_rhs(x, sys)
    return DareSolution(
        X=x, X11=x[:n, :n], X12=x[:n, n:], X22=x[n:, n:],
        G1=g[:, :n], G2=g[:, n:],
        iterations=iterations, residual=dare_residual(x, sys))


def dare_residual(x, sys):
    """Max-abs entry of the fixed-point defect of x."""
    dim = 2 * sys.n
    defect = (sys.a_tilde.T @ x @ sys.b_tilde) @ _gain_rhs(x, sys) \
        - sys.a_tilde.T @ x @ sys.a_tilde + x - np.eye(dim)
    return float(np.max(np.abs(defect)))


def worst_case_family_solution(i, j, r, eps_b, n=None):
    """Closed-form fixed point for the single-coupling family, used as an
    oracle against the iterative solver.

    With A the family coupling matrix and e = eps_b, the solution is
    X = [[A'A, e A'], [e A, e^2/(1+e^2) A'A + e^2 I]] + I.
    """
    p = worst_case_family(i, j, r, eps_b, n)
    n = p.n
    e2 = eps_b * eps_b
    ata = p.A.T @ p.A
    x = np.eye(2 * n)
    x[:n, :n] += ata
    x[:n, n:] = eps_b * p.A.T
    x[n:, :n] = eps_b * p.A
    x[n:, n:] += e2 / (1.0 + e2) * ata + e2 * np.eye(n)
    return x
