"""Soft-margin RBF support-vector classifier trained by sequential minimal
optimization.

The solver minimizes the standard dual

    0.5 * a' Q a - e' a,   Q_st = v_s v_t K(x_s, x_t),
    0 <= a_t <= C,         sum_t v_t a_t = 0,

by repeatedly picking the maximal-violating pair (first-order working-set
selection) and solving the two-variable subproblem in closed form.  The run
stops when the duality-gap surrogate max_up(-vG) - min_low(-vG) drops to
``tol``.  Everything is plain numpy; the kernel matrix is precomputed when the
training set fits under ``kernel_cache_limit`` rows and served from an LRU row
cache otherwise.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .receiver import FeatureScaler, FeatureVector, fit_scaler

log = logging.getLogger(__name__)

_MODEL_FORMAT = "cbwcs-svm-model v1"
_SV_EPS = 1e-12  # alpha above this counts as a support vector
_FREE_EPS = 1e-9  # alpha below C - this counts as an unbounded SV


@dataclass(frozen=True)
class SvmHyper:
    """RBF hyperparameters: box constraint c and kernel width gamma."""

    c: float
    gamma: float

    def __post_init__(self):
        if not (self.c > 0 and np.isfinite(self.c)):
            raise ValueError(f"c must be positive and finite, got {self.c}")
        if not (self.gamma > 0 and np.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma}")


@dataclass(frozen=True)
class TrainingSet:
    """Scaled feature matrix with labels and the frozen scaler that produced it."""

    x: np.ndarray
    labels: np.ndarray
    scaler: FeatureScaler

    def __post_init__(self):
        if self.x.ndim != 2 or len(self.x) != len(self.labels):
            raise ValueError("feature matrix and labels disagree in length")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")

    @property
    def m(self) -> int:
        return len(self.labels)

    @classmethod
    def from_features(
        cls, feats: list[FeatureVector], scaler: FeatureScaler | None = None
    ) -> "TrainingSet":
        if any(fv.label is None for fv in feats):
            raise ValueError("all feature vectors must be labeled")
        scaler = scaler or fit_scaler(feats)
        x = scaler.transform(np.stack([fv.values for fv in feats]))
        labels = np.array([fv.label for fv in feats])
        return cls(x=x, labels=labels, scaler=scaler)


def pairwise_sq_dists(x1: np.ndarray, x2: np.ndarray | None = None) -> np.ndarray:
    """Squared Euclidean distances via the dot-product expansion, clipped at 0."""
    x2 = x1 if x2 is None else x2
    d2 = (
        (x1 * x1).sum(axis=1)[:, None]
        + (x2 * x2).sum(axis=1)[None, :]
        - 2.0 * (x1 @ x2.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def rbf_kernel(x1: np.ndarray, x2: np.ndarray, gamma: float) -> np.ndarray:
    return np.exp(-gamma * pairwise_sq_dists(x1, x2))


class _KernelRows:
    """Row access to the kernel matrix, fully precomputed or LRU-cached."""

    def __init__(self, x: np.ndarray, gamma: float, cache_limit: int):
        self._x = x
        self._gamma = gamma
        m = len(x)
        self.diag = np.ones(m)  # exp(-g * 0) on the diagonal of an RBF Gram
        if m <= cache_limit:
            self._full = rbf_kernel(x, x, gamma)
            self._rows = None
        else:
            self._full = None
            self._rows: OrderedDict[int, np.ndarray] = OrderedDict()
            self._capacity = max(int(cache_limit), 2)
            self._sq = (x * x).sum(axis=1)

    def row(self, i: int) -> np.ndarray:
        if self._full is not None:
            return self._full[i]
        cached = self._rows.get(i)
        if cached is not None:
            self._rows.move_to_end(i)
            return cached
        d2 = self._sq + self._sq[i] - 2.0 * (self._x @ self._x[i])
        np.maximum(d2, 0.0, out=d2)
        r = np.exp(-self._gamma * d2)
        self._rows[i] = r
        if len(self._rows) > self._capacity:
            self._rows.popitem(last=False)
        return r


@dataclass
class SmoResult:
    alpha: np.ndarray
    grad: np.ndarray
    iterations: int
    converged: bool


def smo_solve(
    kernel_rows,
    labels: np.ndarray,
    c: float,
    tol: float = 1e-3,
    max_iter: int = 400_000,
) -> SmoResult:
    """Maximal-violating-pair SMO on the dual.  ``kernel_rows`` is either a
    dense Gram matrix or a _KernelRows cache."""
    if isinstance(kernel_rows, np.ndarray):
        gram = kernel_rows
        diag = np.diag(gram)
        row = lambda i: gram[i]
    else:
        diag = kernel_rows.diag
        row = kernel_rows.row
    v = labels
    m = len(v)
    alpha = np.zeros(m)
    grad = -np.ones(m)  # gradient of the dual objective at alpha = 0
    v_grad = v * grad
    it = 0
    converged = False
    while it < max_iter:
        up = ((v > 0) & (alpha < c)) | ((v < 0) & (alpha > 0))
        low = ((v > 0) & (alpha > 0)) | ((v < 0) & (alpha < c))
        minus_vg = -v_grad
        i = int(np.argmax(np.where(up, minus_vg, -np.inf)))
        j = int(np.argmin(np.where(low, minus_vg, np.inf)))
        gap = minus_vg[i] - minus_vg[j]
        if gap <= tol:
            converged = True
            break
        k_i = row(i)
        k_j = row(j)
        curv = diag[i] + diag[j] - 2.0 * k_i[j]
        if curv <= 1e-12:
            curv = 1e-12
        # Step d is the change in v_i * alpha_i (= -change in v_j * alpha_j),
        # clipped so both multipliers stay inside [0, c].
        d = gap / curv
        d = min(d, c - alpha[i]) if v[i] > 0 else min(d, alpha[i])
        d = min(d, alpha[j]) if v[j] > 0 else min(d, c - alpha[j])
        da_i = v[i] * d
        da_j = -v[j] * d
        alpha[i] += da_i
        alpha[j] += da_j
        grad += (da_i * v[i]) * (v * k_i) + (da_j * v[j]) * (v * k_j)
        v_grad = v * grad
        it += 1
    if not converged:
        log.warning("SMO hit the %d-iteration cap before reaching tol=%g", max_iter, tol)
    return SmoResult(alpha=alpha, grad=grad, iterations=it, converged=converged)


@dataclass(frozen=True)
class SvmModel:
    """Trained classifier: support vectors in scaled space, the frozen input
    scaler, and training diagnostics."""

    hyper: SvmHyper
    scaler: FeatureScaler
    support_vectors: np.ndarray
    coeffs: np.ndarray  # alpha_s * v_s per support vector
    bias: float
    n_train: int
    iterations: int = 0

    @property
    def n_support(self) -> int:
        return len(self.coeffs)

    def decision_values(self, windows: np.ndarray) -> np.ndarray:
        """Signed margins for raw (unscaled) feature windows, one per row."""
        u = np.atleast_2d(np.asarray(windows, dtype=float))
        k = rbf_kernel(self.support_vectors, self.scaler.transform(u), self.hyper.gamma)
        return self.coeffs @ k + self.bias

    def predict(self, windows: np.ndarray) -> np.ndarray:
        """Symbol decisions; a margin of exactly zero resolves to +1."""
        return np.where(self.decision_values(windows) >= 0.0, 1.0, -1.0)


def _bound_bias(alpha, v, grad, c) -> float:
    """Intercept when no free multiplier pins it exactly.

    The KKT conditions only bound the intercept from below by the ``up``
    set and from above by the ``low`` set of -v * grad; take the midpoint,
    or the finite bound when one side is inactive (single-class input).
    """
    v_grad = v * grad
    up = ((v > 0) & (alpha < c)) | ((v < 0) & (alpha > 0))
    low = ((v > 0) & (alpha > 0)) | ((v < 0) & (alpha < c))
    if up.any() and low.any():
        return float((np.max(-v_grad[up]) + np.min(-v_grad[low])) / 2.0)
    if up.any():
        return float(np.max(-v_grad[up]))
    return float(np.min(-v_grad[low]))


def train_svm(
    ts: TrainingSet,
    hyper: SvmHyper,
    tol: float = 1e-3,
    max_iter: int = 400_000,
    kernel_cache_limit: int = 1000,
) -> SvmModel:
    cache = _KernelRows(ts.x, hyper.gamma, kernel_cache_limit)
    res = smo_solve(
        cache if cache._full is None else cache._full,
        ts.labels,
        hyper.c,
        tol=tol,
        max_iter=max_iter,
    )
    alpha, grad = res.alpha, res.grad
    v = ts.labels
    sv = alpha > _SV_EPS
    coeffs = alpha[sv] * v[sv]
    support = ts.x[sv]
    free = sv & (alpha < hyper.c - _FREE_EPS)
    if free.any():
        if cache._full is not None:
            f0 = coeffs @ cache._full[sv][:, free]
        else:
            f0 = coeffs @ rbf_kernel(support, ts.x[free], hyper.gamma)
        bias = float(np.mean(v[free] - f0))
    else:
        bias = _bound_bias(alpha, v, grad, hyper.c)
    return SvmModel(
        hyper=hyper,
        scaler=ts.scaler,
        support_vectors=support,
        coeffs=coeffs,
        bias=bias,
        n_train=ts.m,
        iterations=res.iterations,
    )


def make_cv_folds(labels: np.ndarray, n_folds: int, rng: np.random.Generator) -> np.ndarray:
    """Stratified fold ids: within each class, shuffled indices are dealt
    round-robin so every fold sees the same label balance."""
    if n_folds < 2:
        raise ValueError(f"need at least 2 folds, got {n_folds}")
    ids = np.empty(len(labels), dtype=int)
    for lab in (-1.0, 1.0):
        idx = np.flatnonzero(labels == lab)
        rng.shuffle(idx)
        ids[idx] = np.arange(len(idx)) % n_folds
    return ids


def cross_val_accuracy(
    ts: TrainingSet,
    hyper: SvmHyper,
    fold_ids: np.ndarray,
    d2: np.ndarray | None = None,
    tol: float = 1e-3,
    max_iter: int = 400_000,
) -> float:
    """K-fold accuracy with externally fixed folds.

    Pass the precomputed pairwise squared-distance matrix ``d2`` when scoring
    many hyperparameter candidates on one training set; only the elementwise
    exp then depends on gamma.
    """
    if d2 is None:
        d2 = pairwise_sq_dists(ts.x)
    correct = 0
    for f in np.unique(fold_ids):
        val = fold_ids == f
        tr = ~val
        tr_idx = np.flatnonzero(tr)
        gram = np.exp(-hyper.gamma * d2[np.ix_(tr_idx, tr_idx)])
        res = smo_solve(gram, ts.labels[tr], hyper.c, tol=tol, max_iter=max_iter)
        alpha = res.alpha
        v_tr = ts.labels[tr]
        sv = alpha > _SV_EPS
        coeffs = alpha[sv] * v_tr[sv]
        free = sv & (alpha < hyper.c - _FREE_EPS)
        if free.any():
            f0 = coeffs @ gram[sv][:, free]
            bias = float(np.mean(v_tr[free] - f0))
        else:
            bias = _bound_bias(alpha, v_tr, res.grad, hyper.c)
        k_val = np.exp(
            -hyper.gamma * d2[np.ix_(tr_idx[sv], np.flatnonzero(val))]
        )
        dec = coeffs @ k_val + bias
        pred = np.where(dec >= 0.0, 1.0, -1.0)
        correct += int((pred == ts.labels[val]).sum())
    return correct / ts.m


def _fmt(values) -> str:
    return " ".join(format(float(x), ".17g") for x in np.atleast_1d(values))


def save_model(model: SvmModel, path: str) -> None:
    """Plain-text model file: one keyword line per field, full float precision."""
    lines = [
        _MODEL_FORMAT,
        f"c {_fmt(model.hyper.c)}",
        f"gamma {_fmt(model.hyper.gamma)}",
        f"bias {_fmt(model.bias)}",
        f"n_train {model.n_train}",
        f"iterations {model.iterations}",
        f"dim {model.support_vectors.shape[1]}",
        f"n_sv {model.n_support}",
        f"scaler_lo {_fmt(model.scaler.lo)}",
        f"scaler_hi {_fmt(model.scaler.hi)}",
        f"coeffs {_fmt(model.coeffs)}",
    ]
    lines.extend(f"sv {_fmt(row)}" for row in model.support_vectors)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse(rest: str) -> np.ndarray:
    return np.array([float(t) for t in rest.split()])


def load_model(path: str) -> SvmModel:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != _MODEL_FORMAT:
        raise ValueError(f"{path} is not a {_MODEL_FORMAT!r} file")
    fields: dict[str, str] = {}
    svs: list[np.ndarray] = []
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        if key == "sv":
            svs.append(_parse(rest))
        else:
            fields[key] = rest
    dim = int(fields["dim"])
    n_sv = int(fields["n_sv"])
    support = np.stack(svs) if svs else np.zeros((0, dim))
    if support.shape != (n_sv, dim):
        raise ValueError(f"expected {n_sv} support vectors of dim {dim} in {path}")
    return SvmModel(
        hyper=SvmHyper(c=float(fields["c"]), gamma=float(fields["gamma"])),
        scaler=FeatureScaler(
            lo=_parse(fields["scaler_lo"]), hi=_parse(fields["scaler_hi"])
        ),
        support_vectors=support,
        coeffs=_parse(fields["coeffs"]) if n_sv else np.zeros(0),
        bias=float(fields["bias"]),
        n_train=int(fields["n_train"]),
        iterations=int(fields["iterations"]),
    )
