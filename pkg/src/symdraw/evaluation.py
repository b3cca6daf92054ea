"""Dataset splitting, classifier evaluation and comparison tables.

Confusion matrices follow the rows-predicted, columns-actual convention.
Binary comparisons treat "symmetric" as the positive class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

__all__ = [
    "ConfusionMatrix",
    "EvalReport",
    "SplitSpec",
    "binary_comparison_table",
    "compare_metrics_report",
    "evaluate",
    "split",
]

POSITIVE_LABEL = "symmetric"
NEGATIVE_LABEL = "non-symmetric"


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation/test split: fractions, or explicit global counts."""

    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0
    counts: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        if self.counts is None and abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")


def _largest_remainder(total: int, weights: Sequence[float]) -> list[int]:
    ideal = [total * w / sum(weights) for w in weights]
    out = [int(np.floor(v)) for v in ideal]
    rema = [v - o for v, o in zip(ideal, out)]
    for _ in range(total - sum(out)):
        i = int(np.argmax(rema))
        out[i] += 1
        rema[i] = -1.0
    return out


def split(labels: Sequence, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stratified, seed-deterministic partition into (train, val, test) indices.

    Per-class sizes use largest-remainder rounding so each class partitions
    exactly; with explicit ``spec.counts`` the global split sizes are exact.
    """
    labels = list(labels)
    classes = sorted(set(labels), key=str)
    by_class = {c: [i for i, lab in enumerate(labels) if lab == c] for c in classes}
    for c, idx in by_class.items():
        if len(idx) < 10:
            raise ValueError(f"class {c!r} has only {len(idx)} samples; need >= 10")

    rng = np.random.default_rng(spec.seed)
    parts: list[list[int]] = [[], [], []]
    if spec.counts is not None:
        total = len(labels)
        if sum(spec.counts) != total:
            raise ValueError(
                f"explicit counts {spec.counts} do not sum to {total} samples"
            )
        sizes = {c: len(by_class[c]) for c in classes}
        train_alloc = _allocate(spec.counts[0], classes, sizes)
        remaining = {c: sizes[c] - train_alloc[c] for c in classes}
        val_alloc = _allocate(spec.counts[1], classes, remaining)
        for c in classes:
            idx = list(by_class[c])
            order = rng.permutation(len(idx))
            shuffled = [idx[i] for i in order]
            a, b = train_alloc[c], train_alloc[c] + val_alloc[c]
            parts[0] += shuffled[:a]
            parts[1] += shuffled[a:b]
            parts[2] += shuffled[b:]
    else:
        for c in classes:
            idx = list(by_class[c])
            order = rng.permutation(len(idx))
            shuffled = [idx[i] for i in order]
            n_tr, n_val, _ = _largest_remainder(len(idx), spec.fractions)
            parts[0] += shuffled[:n_tr]
            parts[1] += shuffled[n_tr : n_tr + n_val]
            parts[2] += shuffled[n_tr + n_val :]
    return tuple(np.array(sorted(p), dtype=np.int64) for p in parts)  # type: ignore[return-value]


def _allocate(total: int, classes: list, capacity: Mapping) -> dict:
    weights = [capacity[c] for c in classes]
    if sum(weights) < total:
        raise ValueError(f"cannot allocate {total} samples from {sum(weights)} available")
    alloc = _largest_remainder(total, weights)
    # never over-allocate a class
    for i, c in enumerate(classes):
        if alloc[i] > capacity[c]:
            raise ValueError(f"class {c!r} too small for the requested split")
    return dict(zip(classes, alloc))


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple
    counts: np.ndarray  # rows = predicted, columns = actual

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class EvalReport:
    confusion: ConfusionMatrix
    accuracy: float
    precision: dict
    recall: dict
    f1: dict


def evaluate(pairs: Sequence[tuple], classes: Sequence | None = None) -> EvalReport:
    """Confusion matrix plus accuracy and per-class precision/recall/F1.

    ``pairs`` is a sequence of (predicted, actual) labels.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no predictions to evaluate")
    if classes is None:
        classes = sorted({x for p in pairs for x in p}, key=str)
    classes = tuple(classes)
    index = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for predicted, actual in pairs:
        if predicted not in index or actual not in index:
            raise ValueError(f"unknown label in pair ({predicted!r}, {actual!r})")
        counts[index[predicted], index[actual]] += 1

    accuracy = float(np.trace(counts)) / len(pairs)
    precision, recall, f1 = {}, {}, {}
    for c, i in index.items():
        row = counts[i, :].sum()  # everything predicted as c
        col = counts[:, i].sum()  # everything actually c
        p = float(counts[i, i]) / row if row else 0.0
        r = float(counts[i, i]) / col if col else 0.0
        precision[c] = p
        recall[c] = r
        f1[c] = 2.0 * r * p / (p + r) if p + r > 0 else 0.0
    return EvalReport(
        confusion=ConfusionMatrix(classes=classes, counts=counts),
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
    )


def binary_comparison_table(
    rows: Mapping[str, Sequence[tuple]], positive=POSITIVE_LABEL
) -> tuple[str, list[dict]]:
    """Accuracy/precision/recall/F1 per classifier from (predicted, actual) pairs.

    Returns the aligned text table and the machine-readable records.
    Percentages round to integers and measures to two decimals, matching the
    reporting convention used throughout.
    """
    records = []
    for name, pairs in rows.items():
        report = evaluate(pairs)
        records.append(
            {
                "classifier": name,
                "accuracy": report.accuracy,
                "precision": report.precision.get(positive, 0.0),
                "recall": report.recall.get(positive, 0.0),
                "f1": report.f1.get(positive, 0.0),
            }
        )
    name_w = max([len(r["classifier"]) for r in records] + [len("classifier")])
    lines = [
        f"{'classifier':<{name_w}}  accuracy  precision  recall    f1",
    ]
    for r in records:
        lines.append(
            f"{r['classifier']:<{name_w}}  "
            f"{round(r['accuracy'] * 100):>7}%  "
            f"{r['precision']:>9.2f}  "
            f"{r['recall']:>6.2f}  "
            f"{r['f1']:>4.2f}"
        )
    return "\n".join(lines), records


def compare_metrics_report(
    test_set: Sequence[tuple],
    scorers: Mapping[str, Callable],
    predictions: Mapping[str, Sequence[tuple]] | None = None,
    threshold: float = 0.5,
) -> tuple[str, list[dict]]:
    """Run score-threshold classifiers over a labeled test set and tabulate.

    ``test_set`` holds (layout, actual_label) pairs with binary labels;
    ``scorers`` maps a classifier name to a layout -> SymmetryScore callable.
    ``predictions`` may add rows (e.g. a learned model) as ready-made
    (predicted, actual) pairs.
    """
    rows: dict[str, list[tuple]] = {}
    for name, scorer in scorers.items():
        pairs = []
        for layout, actual in test_set:
            value = scorer(layout).value
            predicted = POSITIVE_LABEL if value >= threshold else NEGATIVE_LABEL
            pairs.append((predicted, actual))
        rows[name] = pairs
    if predictions:
        for name, pairs in predictions.items():
            rows[name] = list(pairs)
    return binary_comparison_table(rows)
