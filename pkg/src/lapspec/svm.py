"""Soft-margin kernel SVM trained by sequential minimal optimization.

The binary solver works on a precomputed Gram matrix and performs pairwise
coordinate descent on the dual: at each step it picks the maximal
KKT-violating pair (the classic working-set rule), solves the two-variable
subproblem exactly on its feasible segment, and updates the cached gradient
in O(n). Multiclass classification is one-vs-one with majority voting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError

KKT_TOL = 1e-3
MAX_PAIR_UPDATES = 10**6
_PSD_SLACK = 1e-8


@dataclass(frozen=True)
class SvmModel:
    """Trained binary machine over a fixed training set.

    ``dual_weights`` holds the signed coefficients alpha_s * y_s for each
    support index; the decision value of an item x is
    ``sum_s dual_weights[s] * K(s, x) + bias``.
    """

    support_indices: np.ndarray
    dual_weights: np.ndarray
    bias: float
    n_train: int
    class_pair: tuple[int, int] | None = None
    gamma: float | None = None


def _check_gram(gram: np.ndarray) -> np.ndarray:
    gram = np.asarray(gram, dtype=np.float64)
    if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
        raise ValidationError(f"gram matrix must be square, got shape {gram.shape}")
    if not np.isfinite(gram).all():
        raise NumericalError("gram matrix contains non-finite entries")
    if gram.size and np.max(np.abs(gram - gram.T)) > 1e-10:
        raise ValidationError("gram matrix must be symmetric")
    if gram.size and gram.diagonal().min() < -_PSD_SLACK:
        raise NumericalError("gram matrix has a negative diagonal entry; not PSD")
    return gram


def svm_train_binary(
    gram: np.ndarray,
    labels: np.ndarray | list[int],
    c: float,
    tol: float = KKT_TOL,
    max_updates: int = MAX_PAIR_UPDATES,
) -> SvmModel:
    """Solve the soft-margin dual on a precomputed Gram matrix.

    Stops when the duality-gap proxy b_low - b_up drops below ``tol`` or
    after ``max_updates`` pair updates. Labels must be -1/+1 with both
    classes present.
    """
    gram = _check_gram(gram)
    y = np.asarray(labels, dtype=np.float64)
    if y.shape != (gram.shape[0],):
        raise ValidationError("labels must match the gram matrix size")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValidationError("labels must be -1 or +1")
    if np.all(y == y[0]):
        raise ValidationError("training requires both classes present")
    if c <= 0.0:
        raise ValidationError("C must be positive")

    n = y.size
    alpha = np.zeros(n)
    # Gradient of the dual objective is y_i * f_i with f_i = sum_j alpha_j y_j K_ij - y_i.
    f = -y.copy()
    snap = 1e-12 * max(1.0, c)

    bias = 0.0
    for _ in range(max_updates):
        pos, neg = y > 0, y < 0
        at_zero, at_c = alpha <= 0.0, alpha >= c
        i_up_mask = (pos & ~at_c) | (neg & ~at_zero)
        i_low_mask = (pos & ~at_zero) | (neg & ~at_c)
        up_candidates = np.flatnonzero(i_up_mask)
        low_candidates = np.flatnonzero(i_low_mask)
        b_up = f[up_candidates].min()
        b_low = f[low_candidates].max()
        bias = -(b_up + b_low) / 2.0
        if b_low - b_up <= tol:
            break
        i = low_candidates[np.argmax(f[low_candidates])]
        j = up_candidates[np.argmin(f[up_candidates])]

        # Feasible move: alpha_i += y_i t, alpha_j -= y_j t; the dual objective
        # restricted to t has slope f_i - f_j > 0 and curvature eta, so the
        # minimizer lies at negative t.
        eta = gram[i, i] + gram[j, j] - 2.0 * gram[i, j]
        if eta < -_PSD_SLACK:
            raise NumericalError("gram matrix is not PSD (negative pair curvature)")
        t_lo_i = -alpha[i] if y[i] > 0 else alpha[i] - c
        t_lo_j = alpha[j] - c if y[j] > 0 else -alpha[j]
        t_lo = max(t_lo_i, t_lo_j)
        if eta > 0.0:
            t = max(-(f[i] - f[j]) / eta, t_lo)
        else:
            t = t_lo  # linear segment: descend to its feasible end
        if t >= 0.0:
            break  # no feasible descent; treat as converged
        alpha[i] += y[i] * t
        alpha[j] -= y[j] * t
        f += t * (gram[:, i] - gram[:, j])
        for k in (i, j):
            if alpha[k] < snap:
                alpha[k] = 0.0
            elif alpha[k] > c - snap:
                alpha[k] = c

    support = np.flatnonzero(alpha > 0.0)
    return SvmModel(
        support_indices=support,
        dual_weights=alpha[support] * y[support],
        bias=float(bias),
        n_train=n,
    )


def svm_decision(model: SvmModel, kernel_rows: np.ndarray) -> np.ndarray:
    """Decision values for items whose kernels against the training set are
    the rows of ``kernel_rows`` (columns follow training indexing)."""
    kernel_rows = np.asarray(kernel_rows, dtype=np.float64)
    if kernel_rows.ndim != 2 or kernel_rows.shape[1] != model.n_train:
        raise ValidationError(
            f"kernel rows must have {model.n_train} columns, got shape {kernel_rows.shape}"
        )
    return kernel_rows[:, model.support_indices] @ model.dual_weights + model.bias


def svm_predict(model: SvmModel, kernel_rows: np.ndarray) -> np.ndarray:
    """Predicted -1/+1 labels; a decision value of exactly 0 goes to +1."""
    d = svm_decision(model, kernel_rows)
    return np.where(d >= 0.0, 1.0, -1.0)


@dataclass(frozen=True)
class MulticlassModel:
    """One-vs-one ensemble. With a single class it degenerates to a constant
    predictor (useful when a training fold happens to be pure)."""

    classes: tuple[int, ...]
    machines: tuple[tuple[int, int, np.ndarray, SvmModel], ...]
    n_train: int


def multiclass_train(
    gram: np.ndarray, labels: np.ndarray | list[int], c: float
) -> MulticlassModel:
    """Train C(C-1)/2 binary machines, one per unordered class pair.

    Within a pair (a, b) with a < b, class a plays +1, so prediction ties
    fall toward the smaller class id, consistent with the voting tie-break.
    """
    gram = _check_gram(gram)
    labels = np.asarray(labels)
    if labels.shape != (gram.shape[0],):
        raise ValidationError("labels must match the gram matrix size")
    classes = tuple(sorted(int(v) for v in set(labels.tolist())))
    machines = []
    for ai in range(len(classes)):
        for bi in range(ai + 1, len(classes)):
            a, b = classes[ai], classes[bi]
            subset = np.flatnonzero((labels == a) | (labels == b))
            y = np.where(labels[subset] == a, 1.0, -1.0)
            model = svm_train_binary(gram[np.ix_(subset, subset)], y, c)
            machines.append((a, b, subset, model))
    return MulticlassModel(classes=classes, machines=tuple(machines), n_train=labels.size)


def multiclass_predict(model: MulticlassModel, kernel_rows: np.ndarray) -> np.ndarray:
    """Majority vote over the pair machines; ties pick the smallest class id."""
    kernel_rows = np.asarray(kernel_rows, dtype=np.float64)
    if kernel_rows.ndim != 2 or kernel_rows.shape[1] != model.n_train:
        raise ValidationError(
            f"kernel rows must have {model.n_train} columns, got shape {kernel_rows.shape}"
        )
    n_eval = kernel_rows.shape[0]
    if len(model.classes) == 1:
        return np.full(n_eval, model.classes[0], dtype=np.intp)
    votes = np.zeros((n_eval, len(model.classes)), dtype=np.intp)
    index_of = {cls: k for k, cls in enumerate(model.classes)}
    for a, b, subset, machine in model.machines:
        pred = svm_predict(machine, kernel_rows[:, subset])
        votes[pred > 0, index_of[a]] += 1
        votes[pred < 0, index_of[b]] += 1
    # argmax returns the first maximum; classes are ascending, so vote ties
    # resolve to the smallest class id.
    winners = np.argmax(votes, axis=1)
    return np.array([model.classes[w] for w in winners], dtype=np.intp)


def multiclass_train_predict(
    gram: np.ndarray,
    labels: np.ndarray | list[int],
    c: float,
    kernel_rows: np.ndarray | None = None,
) -> np.ndarray:
    """Train one-vs-one machines and predict; defaults to predicting the
    training items themselves when ``kernel_rows`` is omitted."""
    model = multiclass_train(gram, labels, c)
    return multiclass_predict(model, gram if kernel_rows is None else kernel_rows)
