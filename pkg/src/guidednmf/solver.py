"""Multiplicative-update solvers for NMF and Guided NMF.

Guided NMF factorizes a term-document matrix ``X`` (m x n) while pulling
the learned topics towards user seed topics stacked as the columns of
``Y`` (m x c)::

    min_{A, S, B >= 0}  ||X - A S||_F^2 + lam * ||Y - A B||_F^2

``A`` (m x k) holds the topics, ``S`` (k x n) the document weights and
``B`` (k x c) links learned topics to seed topics. With ``lam = 0`` (or
no ``Y``) this is plain Frobenius NMF. Semi-supervised NMF, where labels
are attached to documents instead of terms, is the same problem on the
transposed data and is provided by :func:`ssnmf`.
"""
from dataclasses import dataclass, field
from typing import List, Optional
import warnings

import numpy as np

from .errors import ConfigError, ShapeError
from .matrix import DEFAULT_EPS, as_nonneg, frobenius_norm_sq, transpose

INIT_LOW = 0.01
INIT_HIGH = 1.01


@dataclass(frozen=True)
class SolverConfig:
    """Controls for a solver run.

    Parameters
    ----------
    rank : int
        Number of topics ``k``.
    lam : float
        Weight of the seed-supervision term. ``0`` reduces to plain NMF.
    max_iters : int
        Maximum number of full update sweeps.
    rel_tol : float
        Stop once the relative change of the objective between two sweeps
        drops below this value. ``0`` disables early stopping.
    rng_seed : int
        Seed for the uniform initialization.
    eps : float
        Guard added to every multiplicative-update denominator.
    """
    rank: int = 4
    lam: float = 1.0
    max_iters: int = 1000
    rel_tol: float = 1e-6
    rng_seed: int = 0
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if int(self.rank) != self.rank or self.rank < 1:
            raise ConfigError(f"rank must be a positive integer, got {self.rank!r}")
        if not self.lam >= 0:
            raise ConfigError(f"lam must be nonnegative, got {self.lam!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ConfigError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not self.rel_tol >= 0:
            raise ConfigError(f"rel_tol must be nonnegative, got {self.rel_tol!r}")
        if not self.eps > 0:
            raise ConfigError(f"eps must be positive, got {self.eps!r}")


@dataclass
class FactorizationResult:
    A: np.ndarray
    S: np.ndarray
    B: Optional[np.ndarray] = None
    objective_history: List[float] = field(default_factory=list)
    iterations_run: int = 0

    @property
    def final_objective(self):
        return self.objective_history[-1] if self.objective_history else float("nan")


def initialize(m, n, c, config):
    """Draw starting factors i.i.d. uniform on (0.01, 1.01).

    ``A`` is drawn first, then ``S``, then ``B`` (only when `c` is not
    None), all from one generator seeded with ``config.rng_seed``. The
    draw order means a run with seeds and a run without share the same
    ``A`` and ``S``.
    """
    if m < 1 or n < 1 or (c is not None and c < 1):
        raise ShapeError(f"dimensions must be positive, got m={m}, n={n}, c={c}")
    k = config.rank
    rng = np.random.default_rng(config.rng_seed)
    A = rng.uniform(INIT_LOW, INIT_HIGH, size=(m, k))
    S = rng.uniform(INIT_LOW, INIT_HIGH, size=(k, n))
    B = rng.uniform(INIT_LOW, INIT_HIGH, size=(k, c)) if c is not None else None
    return A, S, B


def objective(X, A, S, Y=None, B=None, lam=0.0):
    """``||X - AS||_F^2 + lam ||Y - AB||_F^2`` (second term only if `Y` given)."""
    value = frobenius_norm_sq(X - A @ S)
    if Y is not None and lam > 0:
        value += lam * frobenius_norm_sq(Y - A @ B)
    return value


def _sweep(X, Y, A, S, B, lam, eps, AtX):
    AtA = A.T @ A
    S = S * AtX / (AtA @ S + eps)

    if Y is not None:
        B = B * (A.T @ Y) / (AtA @ B + eps)

    num = X @ S.T
    gram = S @ S.T
    if Y is not None and lam > 0:
        num = num + lam * (Y @ B.T)
        gram = gram + lam * (B @ B.T)
    A = A * num / (A @ gram + eps)
    return A, S, B


def update_sweep(X, Y, A, S, B, lam, eps=DEFAULT_EPS):
    """One multiplicative-update sweep: ``S``, then ``B``, then ``A``.

    ``S <- S * (A'X) / (A'AS + eps)``, ``B <- B * (A'Y) / (A'AB + eps)``
    and ``A <- A * (XS' + lam YB') / (ASS' + lam ABB' + eps)``, where
    ``A`` is updated with the fresh ``S`` and ``B``. When `Y` is None or
    `lam` is zero the supervision terms drop out of the ``A`` update;
    ``B`` is still refit to ``Y`` whenever `Y` is given.

    Returns
    -------
    (A, S, B) : tuple of ndarray
        New factors; `B` is None when `Y` is None.
    """
    return _sweep(X, Y, A, S, B, lam, eps, A.T @ X)


def _solve(X, Y, config):
    m, n = X.shape
    c = Y.shape[1] if Y is not None else None
    if config.rank >= min(m, n):
        warnings.warn(
            f"rank {config.rank} is not below min(m, n) = {min(m, n)}; "
            "the factorization may be trivial",
            stacklevel=3,
        )
    A, S, B = initialize(m, n, c, config)

    lam = config.lam
    supervised = Y is not None and lam > 0
    x_sq = frobenius_norm_sq(X)
    AtX = A.T @ X
    history = []
    it = 0
    for it in range(1, config.max_iters + 1):
        A, S, B = _sweep(X, Y, A, S, B, lam, config.eps, AtX)
        # ||X - AS||^2 expanded through k x n and k x k products; A'X is
        # reused by the next sweep
        AtX = A.T @ X
        fit = x_sq - 2.0 * np.vdot(AtX, S) + np.vdot(A.T @ A, S @ S.T)
        obj = max(fit, 0.0)
        if supervised:
            obj += lam * frobenius_norm_sq(Y - A @ B)
        history.append(obj)
        if it > 1 and config.rel_tol > 0:
            prev = history[-2]
            if abs(obj - prev) / max(prev, 1e-30) < config.rel_tol:
                break
    return FactorizationResult(A=A, S=S, B=B, objective_history=history, iterations_run=it)


def nmf(X, config):
    """Unsupervised Frobenius NMF, ``X ~ A S``.

    Parameters
    ----------
    X : array_like, shape (m, n)
        Nonnegative data matrix.
    config : SolverConfig

    Returns
    -------
    FactorizationResult
        ``B`` is None.
    """
    X = as_nonneg(X, "X")
    return _solve(X, None, config)


def guided_nmf(X, Y, config):
    """Guided NMF with seed matrix `Y`.

    Parameters
    ----------
    X : array_like, shape (m, n)
        Nonnegative term-document matrix.
    Y : array_like, shape (m, c)
        Nonnegative seed matrix, one seed topic per column. ``c`` may not
        exceed ``config.rank``.
    config : SolverConfig

    Returns
    -------
    FactorizationResult
        With ``A`` (m x k), ``S`` (k x n) and ``B`` (k x c).
    """
    X = as_nonneg(X, "X")
    Y = as_nonneg(Y, "Y")
    if Y.shape[0] != X.shape[0]:
        raise ShapeError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}; both must index the same features")
    if Y.shape[1] > config.rank:
        raise ConfigError(
            f"{Y.shape[1]} seed topics but rank {config.rank}: each seed topic "
            "needs its own learned topic, so rank must be at least the number of seed topics"
        )
    return _solve(X, Y, config)


def ssnmf(X, Y_labels, config):
    """Semi-supervised NMF, ``X ~ A S`` and ``Y_labels ~ B S``.

    Solved as :func:`guided_nmf` on the transposed inputs. The factors are
    exchanged back so that ``A`` is m x k, ``S`` is k x n and ``B`` is
    c x k, matching the label-over-documents orientation.
    """
    X = as_nonneg(X, "X")
    Y_labels = as_nonneg(Y_labels, "Y_labels")
    if Y_labels.shape[1] != X.shape[1]:
        raise ShapeError(
            f"X has {X.shape[1]} columns but Y_labels has {Y_labels.shape[1]}; both must index the same data points"
        )
    res = guided_nmf(transpose(X), transpose(Y_labels), config)
    return FactorizationResult(
        A=transpose(res.S),
        S=transpose(res.A),
        B=transpose(res.B),
        objective_history=res.objective_history,
        iterations_run=res.iterations_run,
    )
