"""End-to-end dataset builds: generate, lay out, rasterize, manifest.

A build is a pure function of (recipe, seed): every sample derives its own
generator seed from blake2b(recipe seed, sample id, attempt), so builds can
run sample-parallel, resume after partial completion and always reproduce
byte-identical files.

On-disk layout under the output directory:

    <class>/<sample-id>.png     binary 8-bit grayscale image
    layouts/<sample-id>.json    layout record (edges, 6-decimal positions, ...)
    manifest.jsonl              header line + one record per sample
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .graphgen import (
    MAX_RETRIES,
    EdgeFeature,
    GenerationError,
    Graph,
    RetryExhaustedError,
    crossing_edges,
    gen_component_graph,
    gen_sym_graph,
)
from .layouts import (
    Layout,
    LayoutClass,
    NonSymFeature,
    SYMMETRIC_CLASSES,
    SizeClass,
    layout_nonsym_feature,
    layout_nonsym_perturb,
    layout_nonsym_random,
    layout_parallel_lines,
    layout_reflectional_mirror,
    layout_rotational,
    layout_translational,
    normalize_layout,
    rotate_layout,
)
from .metrics import (
    exact_mirror_oracle,
    exact_rotation_oracle,
    exact_translation_oracle,
    klapaukh_style_score,
    purchase_style_score,
)
from .raster import encode_png, decode_png, fit_view, rasterize

__all__ = [
    "DatasetRecipe",
    "ManifestRecord",
    "RECIPE_NAMES",
    "VerificationReport",
    "build_dataset",
    "build_sample",
    "derive_sample_seed",
    "generate_layout",
    "load_layout_record",
    "make_recipe",
    "read_manifest",
    "score_manifest",
    "verify_dataset",
]

MANIFEST_FORMAT = "symdraw-manifest/1"
WORKERS_ENV = "SYMDRAW_WORKERS"

#: Base per-class sample counts for each named recipe (scaled by --scale).
_RECIPE_MIX: dict[str, dict[LayoutClass, int]] = {
    "SPBC": {LayoutClass.SMALL_SYM: 8000, LayoutClass.SMALL_NON_SYM: 8000},
    "LNBC": {LayoutClass.REFLECTIONAL_LARGE: 5000, LayoutClass.NON_SYM_LARGE: 5000},
    "LHnonSym": {LayoutClass.HORIZONTAL_LARGE: 5000, LayoutClass.NON_SYM_LARGE: 5000},
    "LVnonSym": {LayoutClass.VERTICAL_LARGE: 5000, LayoutClass.NON_SYM_LARGE: 5000},
    "LHVSym": {LayoutClass.HORIZONTAL_LARGE: 5000, LayoutClass.VERTICAL_LARGE: 5000},
    "LHVRT": {
        LayoutClass.HORIZONTAL_LARGE: 6400,
        LayoutClass.VERTICAL_LARGE: 8000,
        LayoutClass.ROTATIONAL_LARGE: 4000,
        LayoutClass.TRANSLATIONAL_LARGE: 4000,
    },
    "LRefRotTra": {
        LayoutClass.REFLECTIONAL_LARGE: 8720,
        LayoutClass.ROTATIONAL_LARGE: 8000,
        LayoutClass.TRANSLATIONAL_LARGE: 8000,
    },
}

#: Explicit train/val/test counts where the recipe calls for one (otherwise
#: the standard stratified 80/10/10 split applies).
_RECIPE_SPLITS: dict[str, tuple[int, int, int]] = {
    "SPBC": (12000, 2000, 2000),
}

RECIPE_NAMES = tuple(sorted(_RECIPE_MIX))


@dataclass(frozen=True)
class DatasetRecipe:
    name: str
    class_counts: Mapping[str, int]
    seed: int
    image_size: int = 200
    scale: float = 1.0
    split_counts: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        if not self.class_counts:
            raise ValueError("recipe needs at least one class")
        if any(c <= 0 for c in self.class_counts.values()):
            raise ValueError("class counts must be positive")

    @property
    def total(self) -> int:
        return sum(self.class_counts.values())


def make_recipe(
    name: str, seed: int, scale: float = 1.0, image_size: int = 200
) -> DatasetRecipe:
    if name not in _RECIPE_MIX:
        raise ValueError(f"unknown recipe {name!r}; choose from {RECIPE_NAMES}")
    if scale <= 0:
        raise ValueError("scale must be positive")
    counts = {
        label.value: max(1, round(count * scale))
        for label, count in _RECIPE_MIX[name].items()
    }
    split_counts = _RECIPE_SPLITS.get(name)
    if split_counts is not None and scale != 1.0:
        total = sum(counts.values())
        tr = round(split_counts[0] / sum(_RECIPE_MIX[name].values()) * total)
        va = round(split_counts[1] / sum(_RECIPE_MIX[name].values()) * total)
        split_counts = (tr, va, total - tr - va)
    return DatasetRecipe(
        name=name,
        class_counts=counts,
        seed=seed,
        image_size=image_size,
        scale=scale,
        split_counts=split_counts,
    )


def derive_sample_seed(root_seed: int, sample_id: str, attempt: int = 0) -> int:
    digest = hashlib.blake2b(
        f"{root_seed}:{sample_id}:{attempt}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


# ---------------------------------------------------------------------------
# Per-class layout constructors
# ---------------------------------------------------------------------------

_CROSSING_FEATURES = (EdgeFeature.RANDOM_NON_CROSSING, EdgeFeature.CROSSING)


def _draw_two_component_budget(n: int, rng: np.random.Generator) -> tuple[int, int]:
    """Draw (k_connect, m_half) with 2*m_half + k in [n, floor(1.2n)]."""
    h = n // 2
    for _ in range(MAX_RETRIES):
        m_total = int(rng.integers(n, math.floor(1.2 * n) + 1))
        k = int(rng.integers(1, n // 3 + 1))
        if (m_total - k) % 2:
            continue
        m_half = (m_total - k) // 2
        if h - 1 <= m_half <= h * (h - 1) // 2:
            return k, m_half
    raise RetryExhaustedError(f"no valid (m, k) combination for n={n}")


def _even_in(lo: int, hi: int, rng: np.random.Generator) -> int:
    evens = [n for n in range(lo, hi + 1) if n % 2 == 0]
    return evens[rng.integers(len(evens))]


def _mirror_base(size: SizeClass, rng: np.random.Generator, label: LayoutClass) -> Layout:
    """Pre-rotation vertical-axis layout: parallel-lines or crossing route, 50/50."""
    lo, hi = size.value
    if rng.random() < 0.5:
        n = _even_in(lo, hi, rng)
        k, m_half = _draw_two_component_budget(n, rng)
        half = gen_component_graph(n // 2, m_half, rng)
        return layout_parallel_lines(half, k, rng, label=label)
    n = int(rng.integers(lo, hi + 1))
    m = int(rng.integers(n, math.floor(1.2 * n) + 1))
    g = gen_sym_graph(n, m, _CROSSING_FEATURES, rng)
    return layout_reflectional_mirror(g, rng, label=label)


def _reflectional_rotation(rng: np.random.Generator) -> float:
    """Equal thirds: vertical (0), horizontal (90), uniform random angle."""
    r = rng.random()
    if r < 1.0 / 3.0:
        return 0.0
    if r < 2.0 / 3.0:
        return 90.0
    return 360.0 * rng.random()


def _rotational_component_size(k: int, rng: np.random.Generator) -> int:
    lo = max(2, math.ceil(10 / k))
    hi = max(2, 20 // k)
    return int(rng.integers(lo, hi + 1))


def generate_layout(label: LayoutClass, rng: np.random.Generator) -> Layout:
    """Construct one sample of the given class (rotated and normalized)."""
    if label is LayoutClass.SMALL_SYM:
        base = _mirror_base(SizeClass.SMALL, rng, label)
        return normalize_layout(rotate_layout(base, 360.0 * rng.random()))

    if label is LayoutClass.SMALL_NON_SYM:
        r = rng.random()
        if r < 1.0 / 3.0:
            n = int(rng.integers(*_small_range()))
            m = int(rng.integers(n, math.floor(1.2 * n) + 1))
            g = gen_sym_graph(n, m, _CROSSING_FEATURES, rng)
            out = layout_nonsym_random(g, rng, label=label)
        elif r < 2.0 / 3.0:
            n = _even_in(*SizeClass.SMALL.value, rng)
            k, m_half = _draw_two_component_budget(n, rng)
            half = gen_component_graph(n // 2, m_half, rng)
            base = layout_parallel_lines(half, k, rng, label=label)
            out = layout_nonsym_feature(base, NonSymFeature.PARALLEL_LINES, rng, label=label)
        else:
            out = _crossing_decoy(SizeClass.SMALL, rng, label)
        return normalize_layout(rotate_layout(out, 360.0 * rng.random()))

    if label is LayoutClass.REFLECTIONAL_LARGE:
        base = _mirror_base(SizeClass.LARGE, rng, label)
        return normalize_layout(rotate_layout(base, _reflectional_rotation(rng)))

    if label is LayoutClass.NON_SYM_LARGE:
        base = _mirror_base(SizeClass.LARGE, rng, label)
        out = layout_nonsym_perturb(base, rng, label=label)
        return normalize_layout(rotate_layout(out, _reflectional_rotation(rng)))

    if label is LayoutClass.HORIZONTAL_LARGE:
        base = _mirror_base(SizeClass.LARGE, rng, label)
        return normalize_layout(rotate_layout(base, 90.0))

    if label is LayoutClass.VERTICAL_LARGE:
        return normalize_layout(_mirror_base(SizeClass.LARGE, rng, label))

    if label is LayoutClass.ROTATIONAL_LARGE:
        k = int(rng.integers(4, 11))
        c = _rotational_component_size(k, rng)
        m_c = int(rng.integers(c - 1, min(c * (c - 1) // 2, math.floor(1.2 * c)) + 1))
        component = gen_component_graph(c, m_c, rng)
        return normalize_layout(layout_rotational(component, k, rng, label=label))

    if label is LayoutClass.TRANSLATIONAL_LARGE:
        n = _even_in(*SizeClass.LARGE.value, rng)
        k, m_half = _draw_two_component_budget(n, rng)
        half = gen_component_graph(n // 2, m_half, rng)
        return normalize_layout(layout_translational(half, k, rng, label=label))

    raise ValueError(f"unknown layout class {label!r}")


def _small_range() -> tuple[int, int]:
    lo, hi = SizeClass.SMALL.value
    return lo, hi + 1


def _crossing_decoy(size: SizeClass, rng: np.random.Generator, label: LayoutClass) -> Layout:
    for _ in range(MAX_RETRIES):
        lo, hi = size.value
        n = int(rng.integers(lo, hi + 1))
        m = int(rng.integers(n, math.floor(1.2 * n) + 1))
        g = gen_sym_graph(n, m, _CROSSING_FEATURES, rng)
        base = layout_reflectional_mirror(g, rng, label=label)
        if not crossing_edges(g):
            continue
        try:
            return layout_nonsym_feature(base, NonSymFeature.CROSSINGS, rng, label=label)
        except ValueError:
            continue
    raise RetryExhaustedError("could not build a crossing-feature decoy")


def build_sample(label: LayoutClass, root_seed: int, sample_id: str) -> Layout:
    """Deterministically build one sample, retrying rejected draws with a
    derived per-attempt seed so results stay a pure function of the inputs."""
    last: GenerationError | None = None
    for attempt in range(16):
        seed = derive_sample_seed(root_seed, sample_id, attempt)
        rng = np.random.default_rng(seed)
        try:
            layout = generate_layout(label, rng)
        except GenerationError as exc:
            last = exc
            continue
        return replace(layout, seed=seed)
    raise RetryExhaustedError(f"sample {sample_id} failed every attempt: {last}")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def layout_record(layout: Layout, sample_id: str) -> dict:
    return {
        "sample_id": sample_id,
        "label": layout.label.value,
        "n": layout.graph.n,
        "edges": [list(e) for e in layout.graph.sorted_edges()],
        "positions": [[round(float(x), 6), round(float(y), 6)] for x, y in layout.positions],
        "rotation_deg": round(float(layout.rotation_deg), 6),
        "seed": layout.seed,
    }


def load_layout_record(record: Mapping) -> Layout:
    g = Graph.from_edges(record["n"], [tuple(e) for e in record["edges"]])
    return Layout(
        graph=g,
        positions=np.array(record["positions"], dtype=np.float64),
        label=LayoutClass(record["label"]),
        rotation_deg=float(record["rotation_deg"]),
        seed=int(record["seed"]),
    )


def _round_positions(layout: Layout) -> Layout:
    # The manifest stores 6-decimal positions; rendering from the rounded
    # coordinates keeps re-renders byte-identical to the shipped images.
    return replace(layout, positions=np.round(layout.positions, 6))


@dataclass(frozen=True)
class ManifestRecord:
    sample_id: str
    label: str
    seed: int
    n: int
    m: int
    rotation_deg: float
    image: str
    layout: str

    def to_json(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "label": self.label,
            "seed": self.seed,
            "n": self.n,
            "m": self.m,
            "rotation_deg": self.rotation_deg,
            "image": self.image,
            "layout": self.layout,
        }


def _sample_ids(recipe: DatasetRecipe) -> list[tuple[str, LayoutClass]]:
    out = []
    for label_value in sorted(recipe.class_counts):
        label = LayoutClass(label_value)
        for i in range(recipe.class_counts[label_value]):
            out.append((f"{label_value}-{i:06d}", label))
    return out


def _build_one(args: tuple) -> dict:
    out_dir, recipe_seed, image_size, sample_id, label_value = args
    out = Path(out_dir)
    label = LayoutClass(label_value)
    image_path = out / label_value / f"{sample_id}.png"
    record_path = out / "layouts" / f"{sample_id}.json"
    if image_path.exists() and record_path.exists():
        record = json.loads(record_path.read_text())
    else:
        layout = _round_positions(build_sample(label, recipe_seed, sample_id))
        record = layout_record(layout, sample_id)
        img = rasterize(layout, fit_view(layout, image_size, image_size))
        image_path.parent.mkdir(parents=True, exist_ok=True)
        record_path.parent.mkdir(parents=True, exist_ok=True)
        image_path.write_bytes(encode_png(img))
        record_path.write_text(json.dumps(record, sort_keys=True) + "\n")
    return {
        "sample_id": sample_id,
        "label": record["label"],
        "seed": record["seed"],
        "n": record["n"],
        "m": len(record["edges"]),
        "rotation_deg": record["rotation_deg"],
        "image": f"{label_value}/{sample_id}.png",
        "layout": f"layouts/{sample_id}.json",
    }


def build_dataset(
    recipe: DatasetRecipe, out_dir, workers: int | None = None, flags: Mapping | None = None
) -> Path:
    """Build every sample and write the manifest; resumable and idempotent.

    Existing sample files are kept (their records are reloaded), so deleting
    any subset of outputs and re-running restores byte-identical files.
    Returns the manifest path.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    tasks = [
        (str(out), recipe.seed, recipe.image_size, sid, label.value)
        for sid, label in _sample_ids(recipe)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_build_one, tasks, chunksize=16))
    else:
        rows = [_build_one(t) for t in tasks]
    rows.sort(key=lambda r: r["sample_id"])

    header = {
        "format": MANIFEST_FORMAT,
        "recipe": recipe.name,
        "seed": recipe.seed,
        "scale": recipe.scale,
        "image_size": recipe.image_size,
        "class_counts": dict(sorted(recipe.class_counts.items())),
        "split_counts": list(recipe.split_counts) if recipe.split_counts else None,
        "flags": dict(flags) if flags else {},
    }
    manifest = out / "manifest.jsonl"
    with manifest.open("w") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    return manifest


def read_manifest(path) -> tuple[dict, list[ManifestRecord]]:
    path = Path(path)
    with path.open() as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("format") != MANIFEST_FORMAT:
        raise ValueError(f"{path} is not a {MANIFEST_FORMAT} manifest")
    header, records = lines[0], [ManifestRecord(**row) for row in lines[1:]]
    return header, records


# ---------------------------------------------------------------------------
# Verification and scoring
# ---------------------------------------------------------------------------

#: Absolute tolerance for re-checking class oracles from 6-decimal records.
VERIFY_TOL = 1e-5

_NONSYM_TOLS = {
    LayoutClass.SMALL_NON_SYM: ("abs", 1e-6),
    LayoutClass.NON_SYM_LARGE: ("diag", 0.02),
}


@dataclass(frozen=True)
class VerificationReport:
    samples_checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def _verify_record(base: Path, rec: ManifestRecord, image_size: int) -> list[str]:
    problems: list[str] = []
    record_path = base / rec.layout
    image_path = base / rec.image
    if not record_path.exists():
        return [f"{rec.sample_id}: missing layout record"]
    if not image_path.exists():
        return [f"{rec.sample_id}: missing image"]
    layout = load_layout_record(json.loads(record_path.read_text()))
    label = layout.label

    g = layout.graph
    if label is not LayoutClass.ROTATIONAL_LARGE:
        if not g.n <= g.m <= math.floor(1.2 * g.n):
            problems.append(
                f"{rec.sample_id}: edge count {g.m} outside [{g.n}, {math.floor(1.2 * g.n)}]"
            )

    if label in SYMMETRIC_CLASSES:
        if label is LayoutClass.ROTATIONAL_LARGE:
            if exact_rotation_oracle(layout, VERIFY_TOL) is None:
                problems.append(f"{rec.sample_id}: rotation oracle failed")
        elif label is LayoutClass.TRANSLATIONAL_LARGE:
            shift = exact_translation_oracle(layout, VERIFY_TOL)
            if shift is None or abs(shift[1]) > VERIFY_TOL or shift[0] >= 0:
                problems.append(f"{rec.sample_id}: translation oracle failed")
        else:
            if exact_mirror_oracle(layout, VERIFY_TOL) is None:
                problems.append(f"{rec.sample_id}: mirror oracle failed")
    else:
        kind, tol = _NONSYM_TOLS[label]
        if kind == "diag":
            extent = layout.positions.max(axis=0) - layout.positions.min(axis=0)
            tol = tol * float(np.hypot(extent[0], extent[1]))
        if exact_mirror_oracle(layout, tol) is not None:
            problems.append(f"{rec.sample_id}: mirror oracle passed for a non-symmetric label")

    data = image_path.read_bytes()
    try:
        img = decode_png(data)
    except Exception:
        return problems + [f"{rec.sample_id}: image not decodable"]
    if img.shape != (image_size, image_size):
        problems.append(f"{rec.sample_id}: image dimensions {img.shape}")
        return problems
    if not np.isin(img, (0, 255)).all():
        problems.append(f"{rec.sample_id}: non-binary pixel values")
    ink = int((img == 0).sum())
    if ink < 9:
        problems.append(f"{rec.sample_id}: fewer than 9 ink pixels")
    expected = encode_png(rasterize(layout, fit_view(layout, image_size, image_size)))
    if expected != data:
        problems.append(f"{rec.sample_id}: image bytes differ from re-render")
    return problems


def verify_dataset(manifest_path) -> VerificationReport:
    """Re-check class oracles, edge bounds and image integrity of a build."""
    manifest_path = Path(manifest_path)
    header, records = read_manifest(manifest_path)
    base = manifest_path.parent
    violations: list[str] = []
    for rec in records:
        violations.extend(_verify_record(base, rec, header["image_size"]))
    return VerificationReport(samples_checked=len(records), violations=violations)


_SCORERS = {
    "purchase": purchase_style_score,
    "klapaukh": klapaukh_style_score,
}


def score_manifest(manifest_path, metric: str) -> Iterable[dict]:
    """Score every sample with one metric; yields one record per sample."""
    if metric not in _SCORERS:
        raise ValueError(f"unknown metric {metric!r}; choose from {sorted(_SCORERS)}")
    scorer = _SCORERS[metric]
    manifest_path = Path(manifest_path)
    _, records = read_manifest(manifest_path)
    base = manifest_path.parent
    for rec in records:
        layout = load_layout_record(json.loads((base / rec.layout).read_text()))
        score = scorer(layout)
        yield {
            "sample_id": rec.sample_id,
            "label": rec.label,
            "metric": metric,
            "value": score.value,
            "theta": score.best_axis.theta if score.best_axis else None,
            "rho": score.best_axis.rho if score.best_axis else None,
            "support": score.support,
        }
