"""Exact distributional oracles for graph semantics.

The Gaussian oracle builds a linear model faithful to a regression
graph and computes its implied covariance by recursive substitution,
block by block, with no sampling: response blocks get residual
covariances whose off-diagonals sit exactly on the dashed edges,
the context block gets a concentration matrix whose off-diagonals sit
exactly on the full edges.  Implied independences then show up as
partial correlations that vanish to machine precision, and everything
else stays bounded away from zero at generic parameters.

The discrete side holds exact probability tables for testing the
tracing properties (composition, intersection, singleton transitivity)
by full enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import EdgeKind, RegressionGraph


class OracleError(RuntimeError):
    pass


class PDRepairFailed(OracleError):
    """Residual matrix could not be made positive definite."""


class SingularSubmatrix(OracleError):
    pass


@dataclass(frozen=True)
class GaussianModel:
    """Linear-Gaussian parameterization faithful to a regression graph.

    ``block_matrices`` follow the block order of the graph: response
    blocks carry residual covariances (dashed pattern), the context
    block carries a concentration matrix (full-line pattern).
    """

    graph: RegressionGraph
    arrow_coeffs: dict
    block_matrices: tuple


_MIN_EIG = 0.05


def _repair_pd(mat: np.ndarray) -> np.ndarray:
    """Boost the diagonal until the smallest eigenvalue clears _MIN_EIG."""
    out = mat.copy()
    delta = 0.1
    for _ in range(9):
        if np.linalg.eigvalsh(out).min() > _MIN_EIG:
            return out
        out = out + delta * np.eye(out.shape[0])
        delta *= 2.0
    raise PDRepairFailed("diagonal boosting did not reach positive definiteness")


def random_faithful_model(g: RegressionGraph, seed: int) -> GaussianModel:
    """Random faithful parameterization, deterministic given the seed.

    Arrow coefficients are uniform on +-[0.3, 0.9]; the magnitude floor
    keeps the completeness checks away from near-unfaithful parameters.
    """
    rng = np.random.default_rng(seed)

    def draw() -> float:
        return float(rng.uniform(0.3, 0.9) * rng.choice((-1.0, 1.0)))

    coeffs = {}
    for e in g.edges():
        if e.kind is EdgeKind.ARROW:
            coeffs[(e.a, e.b)] = draw()

    mats = []
    ctx = frozenset(g.context)
    for blk in g.blocks:
        m = np.eye(len(blk))
        idx = {n: i for i, n in enumerate(blk)}
        for e in g.edges():
            if e.kind is EdgeKind.ARROW or e.a not in idx or e.b not in idx:
                continue
            want = EdgeKind.FULL if e.a in ctx else EdgeKind.DASHED
            if e.kind is not want:
                continue
            val = draw()
            m[idx[e.a], idx[e.b]] = val
            m[idx[e.b], idx[e.a]] = val
        mats.append(_repair_pd(m))
    return GaussianModel(g, coeffs, tuple(mats))


def implied_covariance(model: GaussianModel) -> np.ndarray:
    """Exact covariance over the graph's nodes, in node order."""
    g = model.graph
    blocks = g.blocks
    n_resp = len(g.response_blocks)

    cov: np.ndarray | None = None
    done: list[str] = []
    for j in range(len(blocks) - 1, -1, -1):
        blk = list(blocks[j])
        mat = model.block_matrices[j]
        blk_cov = np.linalg.inv(mat) if j >= n_resp else mat
        if cov is None:
            cov = blk_cov
            done = blk
            continue
        b = np.zeros((len(blk), len(done)))
        pos = {n: i for i, n in enumerate(done)}
        blk_pos = {n: i for i, n in enumerate(blk)}
        for (tail, head), beta in model.arrow_coeffs.items():
            if head in blk_pos and tail in pos:
                b[blk_pos[head], pos[tail]] = beta
        cross = b @ cov
        top = cross @ b.T + blk_cov
        cov = np.block([[top, cross], [cross.T, cov]])
        cov = (cov + cov.T) / 2.0  # rounding symmetrization
        done = blk + done

    assert done == list(g.nodes)
    return cov if cov is not None else np.zeros((0, 0))


def partial_correlation(cov: np.ndarray, i: int, k: int, c=()) -> float:
    """Partial correlation of variables i, k given index set c, from the
    inverse of the submatrix on {i, k} | c."""
    idx = [i, k] + [int(x) for x in c]
    sub = cov[np.ix_(idx, idx)]
    try:
        prec = np.linalg.inv(sub)
    except np.linalg.LinAlgError as exc:
        raise SingularSubmatrix(str(exc)) from None
    if not np.all(np.isfinite(prec)):
        raise SingularSubmatrix("non-finite inverse")
    return float(-prec[0, 1] / np.sqrt(prec[0, 0] * prec[1, 1]))


def partial_correlation_named(
    cov: np.ndarray, g: RegressionGraph, i: str, k: str, c=()
) -> float:
    pos = {n: ix for ix, n in enumerate(g.nodes)}
    return partial_correlation(cov, pos[i], pos[k], [pos[x] for x in c])


# -- discrete tables ---------------------------------------------------------


class Property(str, Enum):
    COMPOSITION = "composition"
    INTERSECTION = "intersection"
    SINGLETON_TRANSITIVITY = "singleton_transitivity"


@dataclass(frozen=True)
class DiscretePMF:
    """Exact joint probability table; axis order is variable order."""

    cards: tuple
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.shape != tuple(self.cards):
            raise ValueError(f"table shape {t.shape} does not match cards {self.cards}")
        if (t < 0).any():
            raise ValueError("negative probability")
        if abs(t.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {t.sum()}, not 1")
        object.__setattr__(self, "table", t)

    @property
    def n_vars(self) -> int:
        return len(self.cards)


def random_pmf(cards, seed) -> DiscretePMF:
    rng = np.random.default_rng(seed)
    flat = rng.dirichlet(np.ones(int(np.prod(cards))))
    return DiscretePMF(tuple(cards), flat.reshape(tuple(cards)))


def _marginal(table: np.ndarray, keep) -> np.ndarray:
    drop = tuple(ax for ax in range(table.ndim) if ax not in keep)
    return table.sum(axis=drop, keepdims=True) if drop else table


def is_independent(pmf: DiscretePMF, a, b, c=(), tol: float = 1e-12) -> bool:
    """Exact check of a _||_ b | c on the table: p(a,b,c) p(c) = p(a,c) p(b,c)
    cell by cell, so no division by small conditionals is needed."""
    a, b, c = tuple(a), tuple(b), tuple(c)
    t = pmf.table
    p_abc = _marginal(t, a + b + c)
    p_c = _marginal(t, c)
    p_ac = _marginal(t, a + c)
    p_bc = _marginal(t, b + c)
    return bool(np.max(np.abs(p_abc * p_c - p_ac * p_bc)) <= tol)


def check_property(pmf: DiscretePMF, prop: Property, tol: float = 1e-12) -> list:
    """Enumerate all variable triples and conditioning sets and return the
    tuples violating the property's defining implication.

    Composition:    (b_|_i|d and b_|_k|d)     => b _||_ {i,k} | d
    Intersection:   (b_|_i|kd and b_|_k|id)   => b _||_ {i,k} | d
    Singleton trans.: (i_|_k|d and i_|_k|od)  => o_|_i|d or o_|_k|d
    """
    if pmf.n_vars > 5 or max(pmf.cards) > 4:
        raise ValueError("property checks are exhaustive; limited to <=5 variables of cardinality <=4")
    variables = range(pmf.n_vars)
    violations = []
    if prop is Property.SINGLETON_TRANSITIVITY:
        for i, k in itertools.combinations(variables, 2):
            for o in variables:
                if o in (i, k):
                    continue
                rest = [v for v in variables if v not in (i, k, o)]
                for r in range(len(rest) + 1):
                    for d in itertools.combinations(rest, r):
                        if not is_independent(pmf, (i,), (k,), d, tol):
                            continue
                        if not is_independent(pmf, (i,), (k,), (o,) + d, tol):
                            continue
                        if is_independent(pmf, (o,), (i,), d, tol):
                            continue
                        if is_independent(pmf, (o,), (k,), d, tol):
                            continue
                        violations.append((i, k, o, d))
        return violations

    for b in variables:
        for i, k in itertools.combinations(variables, 2):
            if b in (i, k):
                continue
            rest = [v for v in variables if v not in (b, i, k)]
            for r in range(len(rest) + 1):
                for d in itertools.combinations(rest, r):
                    if prop is Property.COMPOSITION:
                        premise = is_independent(pmf, (b,), (i,), d, tol) and is_independent(
                            pmf, (b,), (k,), d, tol
                        )
                    else:
                        premise = is_independent(pmf, (b,), (i,), (k,) + d, tol) and is_independent(
                            pmf, (b,), (k,), (i,) + d, tol
                        )
                    if premise and not is_independent(pmf, (b,), (i, k), d, tol):
                        violations.append((b, (i, k), d))
    return violations


def find_singleton_transitivity_violation(
    seed: int = 0, max_tries: int = 10_000, margin: float = 1e-8
):
    """Randomized search for a trivariate pmf violating singleton transitivity.

    Variables (i, k, o) have cards (2, 2, 3).  Candidates are sampled with
    i _||_ k | o by construction and the mixing weights of o solved so that
    i _||_ k marginally; a candidate counts only when both i -/- o and
    k -/- o hold with a clear margin, verified by the exact checks.
    Such tables need a component with >=3 levels; binary tables cannot
    violate the property.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        p_o = rng.dirichlet(np.ones(3))
        f = rng.uniform(0.1, 0.9, size=3)  # P(i=1 | o)
        g2 = rng.uniform(0.1, 0.9, size=2)  # P(k=1 | o) for the first two levels
        f_bar = float(p_o @ f)
        denom = p_o[2] * (f[2] - f_bar)
        if abs(denom) < 1e-3:
            continue
        s_g = p_o[0] * g2[0] + p_o[1] * g2[1]
        s_fg = p_o[0] * f[0] * g2[0] + p_o[1] * f[1] * g2[1]
        g3 = (f_bar * s_g - s_fg) / denom
        if not 0.02 < g3 < 0.98:
            continue
        g = np.array([g2[0], g2[1], g3])

        table = np.zeros((2, 2, 3))
        for v in range(3):
            pi = np.array([1 - f[v], f[v]])
            pk = np.array([1 - g[v], g[v]])
            table[:, :, v] = p_o[v] * np.outer(pi, pk)
        pmf = DiscretePMF((2, 2, 3), table / table.sum())

        if not is_independent(pmf, (0,), (1,), ()):
            continue
        if not is_independent(pmf, (0,), (1,), (2,)):
            continue
        if is_independent(pmf, (2,), (0,), (), tol=margin):
            continue
        if is_independent(pmf, (2,), (1,), (), tol=margin):
            continue
        return pmf, (0, 1, 2, ())
    return None
