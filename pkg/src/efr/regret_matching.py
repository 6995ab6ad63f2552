"""Time-selection regret matching with the ReLU link.

State is kept as flat arrays of cumulative values, one entry per
(transformation, time-selection key) pair; ``pair_phi`` maps each pair to its
transformation.  The same helpers serve a single information set and the
vectorized EFR learner.
"""
from __future__ import annotations

import numpy as np

from .deviations import ActionTransformation, omega

VARIANTS = ("rm", "rm_plus", "rm_optimistic", "rm_pp")

FIXED_POINT_TOL = 1e-10
POWER_STEPS = 10**5


class FixedPointError(ArithmeticError):
    pass


def check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f"unknown regret-matching variant {variant!r}; expected one of {VARIANTS}")
    return variant


def link_outputs(x, weights, pair_phi=None, num_phi=None, predictions=None):
    """``y_phi = sum_w w * (x_{phi,w} + m_{phi,w})^+`` and ``z = sum y``.

    With ``pair_phi`` None, ``x`` is indexed by transformation directly.
    """
    x = np.asarray(x, dtype=float)
    v = x if predictions is None else x + predictions
    contrib = np.asarray(weights, dtype=float) * np.maximum(v, 0.0)
    if pair_phi is None:
        y = contrib
    else:
        y = np.bincount(pair_phi, weights=contrib, minlength=num_phi)
    return y, float(y.sum())


def update(x, rho, weights, variant: str = "rm", pair_phi=None):
    """Add ``w * rho`` to the cumulative values; ``rho`` is per transformation
    (or per pair when ``pair_phi`` is None)."""
    r = np.asarray(rho, dtype=float)
    if pair_phi is not None:
        r = r[pair_phi]
    inc = np.asarray(weights, dtype=float) * r
    if variant == "rm_plus":
        return np.maximum(x + inc, 0.0)
    if variant == "rm_pp":
        return x + np.maximum(inc, 0.0)
    return x + inc


def transition_matrix(transformations, y, z: float) -> np.ndarray:
    """``A[a', a] = (1/z) sum_phi y_phi 1{phi(a) = a'}`` (column-stochastic)."""
    n = transformations[0].n if transformations else 1
    A = np.zeros((n, n))
    for phi, yy in zip(transformations, y):
        A += yy * phi.matrix()
    return A / z


def stationary_batch(A: np.ndarray) -> np.ndarray:
    """Fixed points ``A s = s`` on the simplex for a stack of column-stochastic
    matrices.

    The returned point is the long-run average of the chain started from the
    uniform distribution: the projection of the uniform vector onto ker(A - I)
    along range(A - I).  It is the unique fixed point when there is one and a
    deterministic choice otherwise.
    """
    A = np.asarray(A, dtype=float)
    single = A.ndim == 2
    if single:
        A = A[None]
    B, n, _ = A.shape
    if n == 1:
        out = np.ones((B, 1))
        return out[0] if single else out
    Q = A - np.eye(n)
    h = np.full((B, n, 1), 1.0 / n)
    Qh = Q @ h
    x = np.linalg.pinv(Q @ Q, rcond=1e-12) @ Qh
    s = (h - Q @ x)[..., 0]
    s = np.where(s < 0, 0.0, s)
    s /= s.sum(axis=1, keepdims=True)
    res = np.abs((A @ s[..., None])[..., 0] - s).max(axis=1)
    bad = np.flatnonzero(~(res <= FIXED_POINT_TOL))
    for b in bad:
        s[b] = _class_fixed_point(A[b])
    return s[0] if single else s


def _gth(P: np.ndarray) -> np.ndarray:
    """Stationary distribution of an irreducible row-stochastic matrix by
    subtraction-free elimination; stable when some rates are tiny."""
    P = P.astype(float).copy()
    n = len(P)
    for k in range(n - 1, 0, -1):
        tot = P[k, :k].sum()
        P[:k, k] /= tot
        P[:k, :k] += np.outer(P[:k, k], P[k, :k])
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ P[:k, k]
    return pi / pi.sum()


def _class_fixed_point(A: np.ndarray) -> np.ndarray:
    """Cesaro limit from the uniform start, built class by class: each closed
    communicating class gets its own stationary distribution, weighted by the
    probability of being absorbed there."""
    from scipy.sparse.csgraph import connected_components

    n = A.shape[0]
    P = A.T                                     # row-stochastic: P[i, j] = Pr(i -> j)
    adj = (P > 0) & ~np.eye(n, dtype=bool)
    nc, lab = connected_components(adj, directed=True, connection="strong")
    closed = [c for c in range(nc)
              if not adj[np.ix_(lab == c, lab != c)].any()]
    transient = np.flatnonzero(~np.isin(lab, closed))
    start = np.full(n, 1.0 / n)
    # absorption mass: uniform start plus flow out of the transient states
    mass = {c: start[lab == c].sum() for c in closed}
    if len(transient):
        Ptt = P[np.ix_(transient, transient)]
        visits = np.linalg.solve((np.eye(len(transient)) - Ptt).T, start[transient])
        for c in closed:
            mass[c] += visits @ P[np.ix_(transient, np.flatnonzero(lab == c))].sum(axis=1)
    s = np.zeros(n)
    for c in closed:
        idx = np.flatnonzero(lab == c)
        s[idx] = mass[c] * (_gth(P[np.ix_(idx, idx)]) if len(idx) > 1 else 1.0)
    s = np.maximum(s, 0.0)
    s /= s.sum()
    if np.abs(A @ s - s).max() > FIXED_POINT_TOL:
        return _power_fallback(A)
    return s


def _power_fallback(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    lazy = 0.5 * (A + np.eye(n))
    s = np.full(n, 1.0 / n)
    for _ in range(POWER_STEPS):
        s2 = lazy @ s
        if np.abs(s2 - s).max() < 1e-15:
            s = s2
            break
        s = s2
    s = np.maximum(s, 0.0)
    s /= s.sum()
    res = np.abs(A @ s - s).max()
    if res > FIXED_POINT_TOL:
        raise FixedPointError(f"fixed point not found; residual {res:.3e}")
    return s


def fixed_point(transformations, y, z: float | None = None) -> np.ndarray:
    """Distribution ``s`` with ``(1/z) sum_phi y_phi phi(s) = s``; uniform when z = 0."""
    y = np.asarray(y, dtype=float)
    if z is None:
        z = float(y.sum())
    n = transformations[0].n if transformations else 1
    if z <= 0:
        return np.full(n, 1.0 / n)
    if all(phi.kind == "external" for phi in transformations):
        s = np.zeros(n)
        for phi, yy in zip(transformations, y):
            s[phi.dst] += yy
        return s / z
    return stationary_batch(transition_matrix(transformations, y, z))


def regret_bound(U: float, M: float, om: float, T: float) -> float:
    """``2 U sqrt(M omega T)``."""
    return 2.0 * U * np.sqrt(M * om * T)


def immediate_regrets(transformations, sigma, values) -> np.ndarray:
    """``E_{a ~ phi(sigma)} v(a) - E_{a ~ sigma} v(a)`` for each transformation."""
    sigma = np.asarray(sigma, dtype=float)
    values = np.asarray(values, dtype=float)
    base = sigma @ values
    return np.array([phi.apply_dist(sigma) @ values - base for phi in transformations])


class TimeSelectionRM:
    """Regret matching over transformations with time-selection keys on one
    action set (rewards arrive as action-value vectors)."""

    def __init__(self, transformations, num_keys: int, variant: str = "rm"):
        self.phis = list(transformations)
        self.n = self.phis[0].n
        self.num_keys = num_keys
        self.variant = check_variant(variant)
        self.x = np.zeros((len(self.phis), num_keys))
        self.m = np.zeros_like(self.x)

    def policy(self, weights) -> np.ndarray:
        w = np.broadcast_to(np.asarray(weights, dtype=float), self.x.shape)
        pred = self.m if self.variant == "rm_optimistic" else None
        y, z = link_outputs(self.x.ravel(), w.ravel(),
                            np.repeat(np.arange(len(self.phis)), self.num_keys), len(self.phis),
                            None if pred is None else pred.ravel())
        return fixed_point(self.phis, y, z), y, z

    def observe(self, sigma, values, weights):
        rho = immediate_regrets(self.phis, sigma, values)
        w = np.broadcast_to(np.asarray(weights, dtype=float), self.x.shape)
        inc = w * rho[:, None]
        self.x = update(self.x, rho[:, None], w, self.variant)
        if self.variant == "rm_optimistic":
            self.m = inc
        return rho


class RegretMatcher:
    """Plain external regret matching on ``n`` actions (RM, RM+ or RM++)."""

    def __init__(self, n: int, variant: str = "rm"):
        self.n = n
        self.variant = check_variant(variant)
        self.x = np.zeros(n)

    def policy(self) -> np.ndarray:
        pos = np.maximum(self.x, 0.0)
        z = pos.sum()
        return pos / z if z > 0 else np.full(self.n, 1.0 / self.n)

    def observe(self, rewards, sigma=None):
        if sigma is None:
            sigma = self.policy()
        rho = np.asarray(rewards, dtype=float) - sigma @ rewards
        self.x = update(self.x, rho, 1.0, self.variant)
        return rho


def rmpp_update(Q, rho):
    """Accumulate positive parts of instantaneous regrets."""
    return np.asarray(Q, dtype=float) + np.maximum(rho, 0.0)


def rmpp_policy(Q) -> np.ndarray:
    Q = np.asarray(Q, dtype=float)
    z = Q.sum()
    return Q / z if z > 0 else np.full(len(Q), 1.0 / len(Q))


def rmpp_adversary(T: int, learner=None) -> dict:
    """Run the two-action adversary that rewards whichever action the learner
    plays with probability below one half.

    Returns rewards, policies, ``Q`` (max over actions of cumulative positive
    instantaneous regret, per round) and ``regret`` (max cumulative regret, per
    round).
    """
    if learner is None:
        learner = RegretMatcher(2, "rm_pp")
    rewards = np.zeros((T, 2))
    policies = np.zeros((T, 2))
    pos = np.zeros(2)
    cum = np.zeros(2)
    Q = np.zeros(T)
    reg = np.zeros(T)
    for t in range(T):
        pi = learner.policy()
        a = 0 if pi[0] >= 0.5 else 1
        r = np.zeros(2)
        r[1 - a] = 1.0
        rho = learner.observe(r, pi)
        rewards[t], policies[t] = r, pi
        pos += np.maximum(rho, 0.0)
        cum += rho
        Q[t], reg[t] = pos.max(), cum.max()
    return {"rewards": rewards, "policies": policies, "Q": Q, "regret": reg,
            "Q_T": float(Q[-1]) if T else 0.0}


__all__ = ["VARIANTS", "link_outputs", "update", "fixed_point", "stationary_batch",
           "transition_matrix", "regret_bound", "immediate_regrets", "TimeSelectionRM",
           "RegretMatcher", "rmpp_update", "rmpp_policy", "rmpp_adversary", "omega",
           "ActionTransformation", "FixedPointError"]
