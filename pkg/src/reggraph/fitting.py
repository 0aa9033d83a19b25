"""Sequences-of-regressions model selection.

Each response is regressed on all variables in its past (plus screened
or pre-declared quadratic/interaction terms), then backward elimination
deletes the weakest term one at a time until every remaining studentized
value clears the threshold.  Edge tests for within-block (dashed) and
context (full-line) dependences complete the machinery needed to
assemble a fitted regression graph, and a parameterized synthetic
generator stands in for the original child-development study data,
which is not published.
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graph import RegressionGraph


class FittingError(ValueError):
    pass


class RankDeficient(FittingError):
    pass


class TooFewRows(FittingError):
    pass


class MissingValues(FittingError):
    pass


# -- terms and datasets -------------------------------------------------------


class TermKind(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    INTERACTION = "interaction"


@dataclass(frozen=True)
class Term:
    bases: tuple
    kind: TermKind

    @property
    def name(self) -> str:
        if self.kind is TermKind.LINEAR:
            return self.bases[0]
        if self.kind is TermKind.QUADRATIC:
            return f"{self.bases[0]}^2"
        return "*".join(self.bases)

    @property
    def implied_mains(self) -> tuple:
        """Main effects forced into any model containing this term."""
        if self.kind is TermKind.LINEAR:
            return ()
        return tuple(linear(b) for b in self.bases)

    def column(self, ds: "Dataset") -> np.ndarray:
        if self.kind is TermKind.LINEAR:
            return ds.column(self.bases[0])
        if self.kind is TermKind.QUADRATIC:
            col = ds.column(self.bases[0])
            return col * col
        return ds.column(self.bases[0]) * ds.column(self.bases[1])

    def __str__(self) -> str:
        return self.name


def linear(name: str) -> Term:
    return Term((name,), TermKind.LINEAR)


def quadratic(name: str) -> Term:
    return Term((name,), TermKind.QUADRATIC)


def interaction(a: str, b: str) -> Term:
    return Term(tuple(sorted((a, b))), TermKind.INTERACTION)


def parse_term(text: str) -> Term:
    text = text.strip()
    if "^2" in text:
        return quadratic(text[: text.index("^2")].strip())
    if "*" in text:
        a, _, b = text.partition("*")
        return interaction(a.strip(), b.strip())
    return linear(text)


@dataclass(frozen=True)
class Dataset:
    """Named numeric columns; immutable during fitting."""

    names: tuple
    data: np.ndarray
    norm_mean: np.ndarray | None = None
    norm_sd: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise FittingError(f"unknown column {name!r}") from None

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.index(name)]

    def standardized(self, norm_rows=None) -> "Dataset":
        """Columns scaled to the mean/sd of the norm group (all rows when
        no group is given); the scaling constants travel with the data."""
        rows = self.data if norm_rows is None else self.data[norm_rows]
        mean = rows.mean(axis=0)
        sd = rows.std(axis=0, ddof=1)
        if (sd == 0).any():
            raise FittingError("constant column cannot be standardized")
        return Dataset(self.names, (self.data - mean) / sd, mean, sd)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(self.names)
            for row in self.data:
                w.writerow([format(x, ".10g") for x in row])

    @classmethod
    def from_csv(cls, path: str) -> "Dataset":
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise FittingError("empty csv file") from None
            rows = []
            bad: list[int] = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                vals = []
                ok = True
                for cell in row:
                    cell = cell.strip()
                    if cell in ("", "NA", "NaN", "nan"):
                        ok = False
                        break
                    try:
                        vals.append(float(cell))
                    except ValueError:
                        ok = False
                        break
                if not ok or len(vals) != len(header):
                    bad.append(lineno)
                else:
                    rows.append(vals)
            if bad:
                shown = ", ".join(map(str, bad[:20]))
                more = "" if len(bad) <= 20 else f" (+{len(bad) - 20} more)"
                raise MissingValues(f"rows with missing/non-numeric values: {shown}{more}")
        return cls(tuple(h.strip() for h in header), np.asarray(rows, dtype=float))


# -- least squares -------------------------------------------------------------


@dataclass(frozen=True)
class OLSFit:
    names: tuple
    intercept: float
    intercept_s: float
    coeffs: np.ndarray
    s_coeffs: np.ndarray
    z: np.ndarray
    residuals: np.ndarray
    r2: float
    df: int

    def z_of(self, name: str) -> float:
        return float(self.z[self.names.index(name)])

    def coeff_of(self, name: str) -> float:
        return float(self.coeffs[self.names.index(name)])


def least_squares(x: np.ndarray, y: np.ndarray):
    """OLS through a QR decomposition.

    Returns (coeffs, s_coeffs, residuals, r2) for the supplied design
    matrix exactly as given (no intercept is added here); r2 uses the
    centered total sum of squares.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if x.ndim != 2:
        raise FittingError("design matrix must be 2-d")
    n, p = x.shape
    if n <= p:
        raise TooFewRows(f"{n} rows cannot support {p} coefficients")
    q, r = np.linalg.qr(x)
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-10 * max(diag.max(), 1.0):
        raise RankDeficient("design matrix is rank deficient")
    coeffs = np.linalg.solve(r, q.T @ y)
    residuals = y - x @ coeffs
    rss = float(residuals @ residuals)
    sigma2 = rss / (n - p)
    r_inv = np.linalg.solve(r, np.eye(p))
    s_coeffs = np.sqrt(sigma2 * (r_inv * r_inv).sum(axis=1))
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 0.0
    return coeffs, s_coeffs, residuals, r2


def fit_terms(ds: Dataset, response: str, terms) -> OLSFit:
    """Regression of a response on a term list, intercept always included."""
    terms = list(terms)
    cols = [np.ones(ds.n)] + [t.column(ds) for t in terms]
    x = np.column_stack(cols)
    y = ds.column(response)
    coeffs, s_coeffs, residuals, r2 = least_squares(x, y)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(s_coeffs[1:] > 0, coeffs[1:] / s_coeffs[1:], 0.0)
    return OLSFit(
        names=tuple(t.name for t in terms),
        intercept=float(coeffs[0]),
        intercept_s=float(s_coeffs[0]),
        coeffs=coeffs[1:],
        s_coeffs=s_coeffs[1:],
        z=z,
        residuals=residuals,
        r2=r2,
        df=ds.n - len(terms) - 1,
    )


# -- configuration -------------------------------------------------------------


@dataclass(frozen=True)
class FitConfig:
    response_blocks: tuple
    context: tuple
    threshold: float = 2.58  # 0.995 Gaussian quantile for keeping a regressor
    edge_threshold: float = 1.96  # 0.975 quantile for dashed/full edge tests
    candidate_terms: dict = field(default_factory=dict)
    screening: bool = False

    def __post_init__(self):
        if self.threshold <= 0 or self.edge_threshold <= 0:
            raise FittingError("thresholds must be positive")
        object.__setattr__(
            self, "response_blocks", tuple(tuple(b) for b in self.response_blocks)
        )
        object.__setattr__(self, "context", tuple(self.context))
        normalized = {}
        for resp, items in dict(self.candidate_terms).items():
            normalized[resp] = tuple(
                t if isinstance(t, Term) else parse_term(t) for t in items
            )
        object.__setattr__(self, "candidate_terms", normalized)

    @property
    def responses(self) -> tuple:
        return tuple(n for blk in self.response_blocks for n in blk)

    def past_of(self, response: str) -> tuple:
        for j, blk in enumerate(self.response_blocks):
            if response in blk:
                later = self.response_blocks[j + 1 :]
                return tuple(n for b in later for n in b) + self.context
        if response in self.context:
            return tuple(n for n in self.context if n != response)
        raise FittingError(f"{response!r} is not in any block")


def load_config(path: str) -> FitConfig:
    """Read a TOML config with keys blocks, context, threshold,
    edge_threshold, candidate_terms, screening."""
    try:
        import tomllib  # py311+
    except ModuleNotFoundError:  # pragma: no cover
        import tomli as tomllib
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    return FitConfig(
        response_blocks=raw["blocks"],
        context=raw.get("context", []),
        threshold=raw.get("threshold", 2.58),
        edge_threshold=raw.get("edge_threshold", 1.96),
        candidate_terms=raw.get("candidate_terms", {}),
        screening=raw.get("screening", False),
    )


# -- backward elimination -------------------------------------------------------


@dataclass(frozen=True)
class RegressionTable:
    """Per-response record mirroring the starting/selected/excluded layout."""

    response: str
    start_terms: tuple
    start_fit: OLSFit
    selected_terms: tuple
    selected_fit: OLSFit
    excluded_z: dict
    deletion_trace: tuple
    threshold: float

    @property
    def r2_full(self) -> float:
        return self.start_fit.r2

    @property
    def r2_sel(self) -> float:
        return self.selected_fit.r2


def screen_nonlinear(ds: Dataset, response: str, past, cfg: FitConfig) -> list:
    """Pre-test every square and pairwise interaction of the past, one at a
    time against the linear model; keep those clearing the threshold."""
    base = [linear(v) for v in past]
    candidates = [quadratic(v) for v in past]
    for i, a in enumerate(past):
        for b in past[i + 1 :]:
            candidates.append(interaction(a, b))
    kept = []
    for cand in candidates:
        try:
            fit = fit_terms(ds, response, base + [cand])
        except (RankDeficient, TooFewRows):
            continue
        if abs(fit.z_of(cand.name)) >= cfg.threshold:
            kept.append(cand)
    return kept


def _starting_terms(ds: Dataset, response: str, cfg: FitConfig) -> list:
    past = cfg.past_of(response)
    terms = [linear(v) for v in past]
    declared = [t for t in cfg.candidate_terms.get(response, ()) if t.kind is not TermKind.LINEAR]
    terms += declared
    if cfg.screening:
        seen = {t.name for t in terms}
        for cand in screen_nonlinear(ds, response, past, cfg):
            if cand.name not in seen:
                terms.append(cand)
                seen.add(cand.name)
    return terms


def _with_mains(term: Term, current_names) -> list:
    """The term plus any hierarchy-required mains not already present."""
    extra = [m for m in term.implied_mains if m.name not in current_names]
    return extra + [term]


def _excluded_z(ds, response, selected, excluded) -> dict:
    """z'_obs: the studentized value each excluded term would get when added
    alone (with hierarchy-required mains) to the selected set."""
    out = {}
    names = {t.name for t in selected}
    for t in excluded:
        trial = list(selected) + _with_mains(t, names)
        fit = fit_terms(ds, response, trial)
        out[t.name] = fit.z_of(t.name)
    return out


def backward_eliminate(ds: Dataset, response: str, cfg: FitConfig, start_terms=None) -> RegressionTable:
    """Delete the weakest deletable term, one at a time, until the threshold
    is reached, then re-admit any excluded term whose single-addition
    studentized value still clears the threshold.

    A main effect is not deletable while a square or interaction built on
    it remains (its printed z is informational only).  Ties on |z| delete
    the term latest in column order.
    """
    start = list(start_terms) if start_terms is not None else _starting_terms(ds, response, cfg)
    start_fit = fit_terms(ds, response, start)

    current = list(start)
    trace = []
    while True:
        fit = fit_terms(ds, response, current) if trace else start_fit
        protected = {m.name for t in current for m in t.implied_mains}
        best = None  # (abs_z, position, term)
        for pos, t in enumerate(current):
            if t.name in protected:
                continue
            a = abs(fit.z_of(t.name))
            if best is None or a < best[0] or (a == best[0] and pos > best[1]):
                best = (a, pos, t)
        if best is None or best[0] >= cfg.threshold:
            break
        current.remove(best[2])
        trace.append(best[2].name)

    # re-inclusion: an excluded variable with a too-large single-addition
    # contribution re-enters as an additional regressor
    def excluded_terms():
        names = {t.name for t in current}
        return [t for t in start if t.name not in names]

    while True:
        zprime = _excluded_z(ds, response, current, excluded_terms())
        over = {name: z for name, z in zprime.items() if abs(z) >= cfg.threshold}
        if not over:
            break
        name = max(over, key=lambda nm: abs(over[nm]))
        term = next(t for t in excluded_terms() if t.name == name)
        for t in _with_mains(term, {t.name for t in current}):
            current.append(t)
        current = [t for t in start if t in current]

    current = [t for t in start if t in current]
    selected_fit = fit_terms(ds, response, current)
    return RegressionTable(
        response=response,
        start_terms=tuple(start),
        start_fit=start_fit,
        selected_terms=tuple(current),
        selected_fit=selected_fit,
        excluded_z=zprime,
        deletion_trace=tuple(trace),
        threshold=cfg.threshold,
    )


# -- edge tests ----------------------------------------------------------------


def dashed_edge_test(ds: Dataset, r1: str, r2: str, combined_terms, threshold: float = 1.96):
    """Regress r1 on r2 plus the combined selected regressors of the pair;
    returns (z of r2, edge present)."""
    terms = [linear(r2)] + [t for t in combined_terms if t.name != r2]
    fit = fit_terms(ds, r1, terms)
    z = fit.z_of(r2)
    return z, abs(z) >= threshold


def full_edge_test(ds: Dataset, cfg: FitConfig):
    """Regress each context variable on all remaining ones (plus its
    declared nonlinear terms); a pair gets a full line when its dependence
    clears the threshold in either direction, through the linear term or
    any nonlinear term built on the partner.

    Returns {pair: (z_ab, z_ba, present)} with z values from the linear
    terms of the two directional regressions.
    """
    ctx = cfg.context
    fits = {}
    for x in ctx:
        others = [v for v in ctx if v != x]
        terms = [linear(v) for v in others]
        terms += [
            t
            for t in cfg.candidate_terms.get(x, ())
            if t.kind is not TermKind.LINEAR and all(b != x for b in t.bases)
        ]
        fits[x] = fit_terms(ds, x, terms)

    def hit(x: str, partner: str) -> bool:
        fit = fits[x]
        for name, z in zip(fit.names, fit.z):
            t = parse_term(name)
            if partner in t.bases and abs(z) >= cfg.edge_threshold:
                return True
        return False

    out = {}
    for i, a in enumerate(ctx):
        for b in ctx[i + 1 :]:
            z_ab = fits[a].z_of(b)
            z_ba = fits[b].z_of(a)
            out[frozenset((a, b))] = (z_ab, z_ba, hit(a, b) or hit(b, a))
    return out


# -- whole-sequence fitting ------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    tables: tuple  # response tables in block order, then context tables
    dashed: dict  # pair -> (z12, z21, present)
    full: dict  # pair -> (z_ab, z_ba, present)
    graph: RegressionGraph

    def table(self, response: str) -> RegressionTable:
        for t in self.tables:
            if t.response == response:
                return t
        raise KeyError(response)


def build_fitted_graph(tables, dashed, full, cfg: FitConfig) -> RegressionGraph:
    """Arrows from each selected regressor's base variable(s), dashed and
    full edges as tested; squares point their base at the response rather
    than adding a node."""
    edges = []
    seen = set()
    responses = set(cfg.responses)
    for t in tables:
        if t.response not in responses:
            continue
        for term in t.selected_terms:
            for base in term.bases:
                key = (base, t.response)
                if key not in seen:
                    seen.add(key)
                    edges.append((base, t.response, "arrow"))
    for pair, (_z1, _z2, present) in dashed.items():
        if present:
            a, b = sorted(pair)
            edges.append((a, b, "dashed"))
    for pair, (_za, _zb, present) in full.items():
        if present:
            a, b = sorted(pair)
            edges.append((a, b, "full"))
    return RegressionGraph(cfg.response_blocks, cfg.context, edges)


def fit_sequence(ds: Dataset, cfg: FitConfig) -> FitResult:
    """The full model-selection pipeline: per-response elimination, context
    regressions, dashed and full edge tests, and graph assembly."""
    tables = [backward_eliminate(ds, r, cfg) for r in cfg.responses]
    tables += [backward_eliminate(ds, v, cfg) for v in cfg.context]
    by_name = {t.response: t for t in tables}

    dashed = {}
    for blk in cfg.response_blocks:
        for i, r1 in enumerate(blk):
            for r2 in blk[i + 1 :]:
                combined, names = [], set()
                for r in (r1, r2):
                    for t in by_name[r].selected_terms:
                        if t.name not in names:
                            names.add(t.name)
                            combined.append(t)
                z12, _ = dashed_edge_test(ds, r1, r2, combined, cfg.edge_threshold)
                z21, _ = dashed_edge_test(ds, r2, r1, combined, cfg.edge_threshold)
                present = max(abs(z12), abs(z21)) >= cfg.edge_threshold
                dashed[frozenset((r1, r2))] = (z12, z21, present)

    full = full_edge_test(ds, cfg) if len(cfg.context) >= 2 else {}
    graph = build_fitted_graph(tables, dashed, full, cfg)
    return FitResult(tuple(tables), dashed, full, graph)


# -- Wilkinson notation -----------------------------------------------------------


def wilkinson(table: RegressionTable) -> str:
    """Compact model formula: square terms imply their mains, so the main
    effects are folded into the nonlinear term at their column position;
    an intercept-only model prints as "1"."""
    selected = list(table.selected_terms)
    if not selected:
        return "1"
    implied = {m.name for t in selected for m in t.implied_mains}
    printed = set()
    parts = []
    for t in selected:
        if t.kind is TermKind.LINEAR and t.name in implied:
            for q in selected:
                if q.kind is not TermKind.LINEAR and t.bases[0] in q.bases and q.name not in printed:
                    parts.append(q.name)
                    printed.add(q.name)
            continue
        if t.name not in printed:
            parts.append(t.name)
            printed.add(t.name)
    return "+".join(parts) if parts else "1"


# -- synthetic study generator ------------------------------------------------------


_N_STUDY = 347
_CALIB_SEED = 414243
_CALIB_N = 500_000

# Selected-model coefficients, constants, and R^2 targets of the child
# development study; the generator is parameterized from these so the
# fitting pipeline has a reproducible stand-in for the unpublished data.
_BASE_VARS = ("E", "H")
_EQUATIONS = (
    ("Yr", -0.21, (("E", 0.55), ("E^2", 0.16)), 0.56),
    ("Xr", 0.22, (("E", 0.12), ("H", 0.48)), 0.35),
    ("X4", -0.47, (("Yr", 0.28), ("Xr", 0.50), ("Xr^2", 0.23)), 0.36),
    ("Y4", -0.29, (("Yr", 0.36), ("Xr", 0.18), ("Xr^2", 0.14)), 0.25),
    ("X8", 0.26, (("X4", 0.33), ("X4^2", 0.05), ("Xr", 0.19)), 0.36),
    ("Y8", 0.03, (("Y4", 0.78), ("X4", 0.07), ("X4^2", 0.10), ("E", 0.12), ("H", 0.12)), 0.67),
)
# within-block residual dependences reported as studentized values, with
# the controls counted in the corresponding pair regression
_RESIDUAL_Z = (
    (("Y4", "X4"), 7.0, 3),
    (("Y8", "X8"), 2.4, 6),
)
_COLUMN_ORDER = ("E", "H", "Yr", "Xr", "X4", "Y4", "X8", "Y8")
_JOINT_PAIRS = (("X4", "Y4"), ("X8", "Y8"))


def _z_to_partial_r(z: float, n: int, n_controls: int) -> float:
    df = n - 2 - n_controls
    return z / math.sqrt(df + z * z)


def _centered_term(cols, term: Term, means, variances) -> np.ndarray:
    base = term.bases[0]
    centered = cols[base] - means[base]
    if term.kind is TermKind.LINEAR:
        return centered
    if term.kind is TermKind.QUADRATIC:
        return centered * centered - variances[base]
    other = cols[term.bases[1]] - means[term.bases[1]]
    return centered * other


def _generate(rng, n, sigmas, rhos, means, variances):
    cols = {v: rng.standard_normal(n) for v in _BASE_VARS}
    eq = {name: (const, terms) for name, const, terms, _ in _EQUATIONS}
    joint = {a: b for a, b in _JOINT_PAIRS}

    done = set(_BASE_VARS)

    def predictor(name):
        const, terms = eq[name]
        total = np.full(n, const, dtype=float)
        for tname, beta in terms:
            total += beta * _centered_term(cols, parse_term(tname), means, variances)
        return total

    for name, _, _, _ in _EQUATIONS:
        if name in done:
            continue
        if name in joint:
            other = joint[name]
            pair = sorted((name, other), key=_COLUMN_ORDER.index)
            s = np.array([sigmas[pair[0]], sigmas[pair[1]]])
            rho = rhos[frozenset(pair)]
            cov = np.array([[s[0] ** 2, rho * s[0] * s[1]], [rho * s[0] * s[1], s[1] ** 2]])
            eps = rng.standard_normal((n, 2)) @ np.linalg.cholesky(cov).T
            cols[pair[0]] = predictor(pair[0]) + eps[:, 0]
            cols[pair[1]] = predictor(pair[1]) + eps[:, 1]
            done.update(pair)
        else:
            cols[name] = predictor(name) + sigmas[name] * rng.standard_normal(n)
            done.add(name)
    return cols


@functools.lru_cache(maxsize=1)
def _calibration():
    """Residual scales solved numerically so each response's population R^2
    matches its target, plus the population moments used for centering.
    All derived constants are computed here, never hard-coded.

    The calibration draw mirrors the generator block by block, including
    the joint residual draws of the response pairs: downstream predictor
    variances depend on the within-block residual correlation, so solving
    the scales on independent draws would bias the later R^2 targets.
    """
    rng = np.random.default_rng(_CALIB_SEED)
    n = _CALIB_N
    means = {v: 0.0 for v in _BASE_VARS}
    means.update({name: const for name, const, _, _ in _EQUATIONS})
    variances = {v: 1.0 for v in _BASE_VARS}
    r2_of = {name: r2 for name, _, _, r2 in _EQUATIONS}
    eq = {name: (const, terms) for name, const, terms, _ in _EQUATIONS}

    cols = {v: rng.standard_normal(n) for v in _BASE_VARS}
    sigmas = {}
    rhos = {}
    for pair, z, n_controls in _RESIDUAL_Z:
        rhos[frozenset(pair)] = _z_to_partial_r(z, _N_STUDY, n_controls)

    def predictor(name):
        const, terms = eq[name]
        total = np.full(n, const, dtype=float)
        for tname, beta in terms:
            total += beta * _centered_term(cols, parse_term(tname), means, variances)
        return total

    def solve_sigma(name, pred):
        r2 = r2_of[name]
        sigmas[name] = math.sqrt(float(pred.var()) * (1.0 - r2) / r2)

    joint = {a: b for a, b in _JOINT_PAIRS}
    done = set(_BASE_VARS)
    for name, _, _, _ in _EQUATIONS:
        if name in done:
            continue
        if name in joint:
            pair = sorted((name, joint[name]), key=_COLUMN_ORDER.index)
            preds = [predictor(p) for p in pair]
            for p, pred in zip(pair, preds):
                solve_sigma(p, pred)
            s = np.array([sigmas[pair[0]], sigmas[pair[1]]])
            rho = rhos[frozenset(pair)]
            cov = np.array([[s[0] ** 2, rho * s[0] * s[1]], [rho * s[0] * s[1], s[1] ** 2]])
            eps = rng.standard_normal((n, 2)) @ np.linalg.cholesky(cov).T
            for j, p in enumerate(pair):
                cols[p] = preds[j] + eps[:, j]
                variances[p] = float(cols[p].var())
            done.update(pair)
        else:
            pred = predictor(name)
            solve_sigma(name, pred)
            cols[name] = pred + sigmas[name] * rng.standard_normal(n)
            variances[name] = float(cols[name].var())
            done.add(name)
    return sigmas, rhos, means, variances


def simulate_mannheim(seed: int, n: int = _N_STUDY) -> Dataset:
    """Synthetic sample from the parameterized study generator.

    Columns arrive in generation order (context base first, outcomes
    last); residual scales match the per-response R^2 targets and the
    within-block residual correlations are solved from the reported
    studentized values at the study's sample size.  Deterministic given
    the seed.
    """
    if n < 50:
        raise FittingError("need n >= 50")
    sigmas, rhos, means, variances = _calibration()
    rng = np.random.default_rng(seed)
    cols = _generate(rng, n, sigmas, rhos, means, variances)
    data = np.column_stack([cols[v] for v in _COLUMN_ORDER])
    return Dataset(_COLUMN_ORDER, data)


def mannheim_config() -> FitConfig:
    """Block layout and candidate squares matching the study analysis."""
    return FitConfig(
        response_blocks=(("Y8", "X8"), ("Y4", "X4")),
        context=("Yr", "Xr", "E", "H"),
        threshold=2.58,
        edge_threshold=1.96,
        candidate_terms={
            "Y8": ("X4^2",),
            "X8": ("X4^2",),
            "Y4": ("Xr^2",),
            "X4": ("Xr^2",),
            "Yr": ("E^2",),
            "Xr": ("E^2",),
        },
    )
