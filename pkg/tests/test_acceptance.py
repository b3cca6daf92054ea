"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -s`` to see them).

The criteria pin every tolerance; nothing here is tunable.
"""

import math
import time

import numpy as np
import pytest

from oracles import bf_klapaukh, bf_purchase, mirror_layout, random_layout, two_point_layout
from symdraw.dataset import DatasetRecipe, build_dataset, build_sample, make_recipe
from symdraw.graphgen import (
    EdgeFeature,
    Graph,
    GenerationError,
    gen_component_graph,
    gen_sym_graph,
    is_connected,
    is_mirror_closed,
)
from symdraw.layouts import (
    Layout,
    LayoutClass,
    NonSymFeature,
    bbox_diagonal,
    displace_random_vertices,
    layout_nonsym_feature,
    layout_nonsym_perturb,
    layout_parallel_lines,
    layout_reflectional_mirror,
    layout_translational,
    rotate_layout,
)
from symdraw.metrics import (
    exact_mirror_oracle,
    exact_rotation_oracle,
    exact_translation_oracle,
    klapaukh_style_score,
    purchase_style_score,
)
from symdraw.raster import ViewTransform, rasterize

SAMPLES_PER_CLASS = 1000


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[ACCEPTANCE] {'PASS' if ok else 'FAIL'} {name}: {detail}", flush=True)
    assert ok, f"{name}: {detail}"


def retrying(builder, seed_base, count):
    """Generate ``count`` layouts, skipping to a fresh derived seed whenever a
    draw is rejected; deterministic for a fixed seed_base."""
    out = []
    attempt = 0
    while len(out) < count:
        rng = np.random.default_rng(seed_base + attempt)
        attempt += 1
        try:
            out.append(builder(rng))
        except (GenerationError, ValueError):
            continue
    return out


class TestGeneratorSoundness:
    def test_symmetric_classes_pass_exact_oracles(self):
        t0 = time.time()
        failures = []
        mirror_classes = (
            LayoutClass.SMALL_SYM,
            LayoutClass.REFLECTIONAL_LARGE,
            LayoutClass.HORIZONTAL_LARGE,
            LayoutClass.VERTICAL_LARGE,
        )
        for label in mirror_classes:
            for i in range(SAMPLES_PER_CLASS):
                l = build_sample(label, 20_001, f"{label.value}-{i:05d}")
                if exact_mirror_oracle(l, 1e-9) is None:
                    failures.append(f"{label.value}#{i}")
        for i in range(SAMPLES_PER_CLASS):
            l = build_sample(LayoutClass.ROTATIONAL_LARGE, 20_002, f"rot-{i:05d}")
            if exact_rotation_oracle(l, 1e-9) is None:
                failures.append(f"Rotational#{i}")
        for i in range(SAMPLES_PER_CLASS):
            l = build_sample(LayoutClass.TRANSLATIONAL_LARGE, 20_003, f"tra-{i:05d}")
            shift = exact_translation_oracle(l, 1e-9)
            if shift is None or abs(float(shift[1])) > 1e-9 or float(shift[0]) >= 0.0:
                failures.append(f"Translational#{i}")
        elapsed = time.time() - t0
        ok = not failures and elapsed < 120.0
        report(
            "generator-soundness",
            ok,
            f"{6 * SAMPLES_PER_CLASS} samples, {len(failures)} oracle failures, {elapsed:.1f}s",
        )


class TestNonSymmetricSoundness:
    def test_all_nonsym_variants_fail_the_oracle(self):
        failures = []

        for i in range(SAMPLES_PER_CLASS):
            l = build_sample(LayoutClass.SMALL_NON_SYM, 21_001, f"snn-{i:05d}")
            if exact_mirror_oracle(l, 1e-6) is not None:
                failures.append(f"SmallNonSym#{i}")

        for i in range(SAMPLES_PER_CLASS):
            l = build_sample(LayoutClass.NON_SYM_LARGE, 21_002, f"nsl-{i:05d}")
            tol = 0.02 * bbox_diagonal(l.positions)
            if exact_mirror_oracle(l, tol) is not None:
                failures.append(f"NonSymLarge#{i}")

        def parallel_decoy(rng):
            n = int(rng.choice([6, 8]))
            k = int(rng.integers(1, n // 3 + 1))
            half = gen_component_graph(n // 2, n // 2 - 1 + int(rng.integers(0, 2)), rng)
            base = layout_parallel_lines(half, k, rng)
            return layout_nonsym_feature(base, NonSymFeature.PARALLEL_LINES, rng)

        def crossing_decoy(rng):
            n = int(rng.integers(5, 9))
            m = int(rng.integers(n, math.floor(1.2 * n) + 1))
            g = gen_sym_graph(n, m, (EdgeFeature.RANDOM_NON_CROSSING, EdgeFeature.CROSSING), rng)
            base = layout_reflectional_mirror(g, rng)
            return layout_nonsym_feature(base, NonSymFeature.CROSSINGS, rng)

        for name, builder, base_seed in (
            ("parallel-decoy", parallel_decoy, 21_003_000),
            ("crossing-decoy", crossing_decoy, 21_004_000),
        ):
            for i, l in enumerate(retrying(builder, base_seed, SAMPLES_PER_CLASS)):
                if exact_mirror_oracle(l, 1e-6) is not None:
                    failures.append(f"{name}#{i}")

        report(
            "non-symmetric-soundness",
            not failures,
            f"{4 * SAMPLES_PER_CLASS} samples, {len(failures)} oracle passes",
        )


class TestEdgeBounds:
    def test_budget_drawn_graphs_respect_bounds(self):
        violations = 0
        checked = 0
        rng = np.random.default_rng(22_001)

        for _ in range(4000):
            n = int(rng.integers(4, 21))
            m = int(rng.integers(n, math.floor(1.2 * n) + 1))
            g = gen_sym_graph(
                n, m, (EdgeFeature.RANDOM_ANY, EdgeFeature.RANDOM_NON_CROSSING,
                       EdgeFeature.PARALLEL, EdgeFeature.CROSSING), rng
            )
            checked += 1
            if not (g.n <= g.m <= math.floor(1.2 * g.n)):
                violations += 1
            if not (is_mirror_closed(g) and is_connected(g)):
                violations += 1

        def straddle_count(graph):
            h = graph.n // 2
            return sum(1 for u, v in graph.edges if u < h <= v)

        for maker in (layout_parallel_lines, layout_translational):
            for _ in range(3000):
                n = int(rng.choice([6, 8, 10, 12, 14, 16, 18, 20]))
                h = n // 2
                while True:
                    m_total = int(rng.integers(n, math.floor(1.2 * n) + 1))
                    k = int(rng.integers(1, n // 3 + 1))
                    if (m_total - k) % 2 == 0 and h - 1 <= (m_total - k) // 2 <= h * (h - 1) // 2:
                        break
                half = gen_component_graph(h, (m_total - k) // 2, rng)
                l = maker(half, k, rng)
                checked += 1
                g = l.graph
                if not (g.n <= g.m <= math.floor(1.2 * g.n)):
                    violations += 1
                if not (1 <= straddle_count(g) <= g.n // 3 and straddle_count(g) == k):
                    violations += 1

        report(
            "edge-bounds",
            checked == 10000 and violations == 0,
            f"{checked} samples, {violations} violations",
        )


class TestRasterBitExactness:
    def test_fixture_pixels_and_rebuild_determinism(self, tmp_path):
        ok = True
        detail = []

        one_vertex = Layout(
            graph=Graph.from_edges(1, []),
            positions=np.array([[0.0, 0.0]]),
            label=LayoutClass.SMALL_SYM,
        )
        img = rasterize(one_vertex, ViewTransform(scale=1.0, offset_x=100.0, offset_y=100.0))
        want = {(y, x) for y in (99, 100, 101) for x in (99, 100, 101)}
        if set(zip(*np.nonzero(img == 0))) != want:
            ok = False
            detail.append("vertex block mismatch")

        two = Layout(
            graph=Graph.from_edges(2, [(0, 1)]),
            positions=np.array([[-1.0, 0.0], [1.0, 0.0]]),
            label=LayoutClass.SMALL_SYM,
        )
        img = rasterize(two, ViewTransform(scale=50.0, offset_x=100.0, offset_y=100.0))
        want = {(y, x) for y in (99, 100, 101) for x in (49, 50, 51)}
        want |= {(y, x) for y in (99, 100, 101) for x in (149, 150, 151)}
        want |= {(100, x) for x in range(50, 151)}
        if set(zip(*np.nonzero(img == 0))) != want:
            ok = False
            detail.append("two-vertex fixture mismatch")

        recipe = make_recipe("LHVRT", seed=424242, scale=0.002)
        m1 = build_dataset(recipe, tmp_path / "a")
        m2 = build_dataset(recipe, tmp_path / "b")
        files1 = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
        files2 = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
        if files1 != files2:
            ok = False
            detail.append("file sets differ")
        else:
            diffs = sum(
                (tmp_path / "a" / rel).read_bytes() != (tmp_path / "b" / rel).read_bytes()
                for rel in files1
            )
            if diffs:
                ok = False
                detail.append(f"{diffs} files differ between rebuilds")
        report(
            "raster-bit-exactness",
            ok,
            "; ".join(detail) if detail else f"fixtures exact, {len(files1)} rebuilt files identical",
        )


class TestMetricVsOracle:
    def test_exhaustive_small_layout_equivalence(self):
        layouts = []
        rng = np.random.default_rng(23_001)
        for seed in range(120):
            n = int(rng.integers(3, 7))
            m = int(rng.integers(1, n * (n - 1) // 2 + 1))
            layouts.append(random_layout(n, m, 50_000 + seed))
        for seed in range(60):
            n = int(rng.integers(4, 7))
            m = int(rng.integers(n, math.floor(1.2 * n) + 1))
            layouts.append(mirror_layout(n, m, 60_000 + seed))
        for seed in range(30):
            base = mirror_layout(6, 7, 70_000 + seed)
            layouts.append(
                displace_random_vertices(base, np.random.default_rng(seed), count=2)
            )
        layouts.append(two_point_layout())

        worst = 0.0
        mismatches = 0
        for l in layouts:
            dp = abs(purchase_style_score(l).value - bf_purchase(l))
            dk = abs(klapaukh_style_score(l).value - bf_klapaukh(l))
            worst = max(worst, dp, dk)
            if dp > 1e-9 or dk > 1e-9:
                mismatches += 1
        report(
            "metric-vs-oracle",
            mismatches == 0,
            f"{len(layouts)} layouts (n <= 6), {mismatches} mismatches, worst |delta| = {worst:.2e}",
        )


class TestTableTwoReproduction:
    def test_threshold_classifiers_on_fresh_balanced_set(self):
        t0 = time.time()
        pairs = {"purchase": [], "klapaukh": []}
        for i in range(SAMPLES_PER_CLASS):
            for label, actual in (
                (LayoutClass.SMALL_SYM, True),
                (LayoutClass.SMALL_NON_SYM, False),
            ):
                l = build_sample(label, 24_001, f"t2-{label.value}-{i:05d}")
                pairs["purchase"].append((purchase_style_score(l).value >= 0.5, actual))
                pairs["klapaukh"].append((klapaukh_style_score(l).value >= 0.5, actual))
        elapsed = time.time() - t0

        stats = {}
        for name, rows in pairs.items():
            tp = sum(1 for p, a in rows if p and a)
            tn = sum(1 for p, a in rows if not p and not a)
            fn = sum(1 for p, a in rows if not p and a)
            accuracy = (tp + tn) / len(rows)
            recall = tp / (tp + fn) if tp + fn else 0.0
            stats[name] = (accuracy, recall)

        ok = (
            stats["purchase"][0] >= 0.70
            and stats["klapaukh"][0] >= 0.70
            and stats["purchase"][1] >= 0.85
            and elapsed < 300.0
        )
        report(
            "table-2-loose",
            ok,
            f"purchase acc={stats['purchase'][0]:.3f} recall={stats['purchase'][1]:.3f}, "
            f"klapaukh acc={stats['klapaukh'][0]:.3f}, {elapsed:.1f}s on 2000 samples",
        )


class TestInvarianceSuite:
    def test_rotation_scale_and_monotonicity(self):
        from scipy.stats import spearmanr

        drift = 0.0
        axis_drift_deg = 0.0
        sym_layouts = [mirror_layout(int(6 + s % 3), int(7 + s % 3), 80_000 + s) for s in range(25)]
        rnd_layouts = [random_layout(6 + s % 3, 7 + s % 3, 81_000 + s) for s in range(25)]
        angles = [10.0 * a for a in range(1, 37)]
        tagged = [(l, True) for l in sym_layouts] + [(l, False) for l in rnd_layouts]
        for l, is_sym in tagged:
            p0 = purchase_style_score(l)
            k0 = klapaukh_style_score(l)
            for angle in angles:
                r = rotate_layout(l, angle)
                p1 = purchase_style_score(r)
                k1 = klapaukh_style_score(r)
                drift = max(drift, abs(p1.value - p0.value), abs(k1.value - k0.value))
                if is_sym:
                    for before, after in ((p0, p1), (k0, k1)):
                        want = (before.best_axis.theta + math.radians(angle)) % math.pi
                        got = after.best_axis.theta
                        delta = min(abs(got - want), math.pi - abs(got - want))
                        axis_drift_deg = max(axis_drift_deg, math.degrees(delta))
        rotation_ok = drift <= 0.02 and axis_drift_deg <= 2.0

        scale_err = 0.0
        from dataclasses import replace

        for l in (sym_layouts + rnd_layouts)[:20]:
            p0 = purchase_style_score(l).value
            k0 = klapaukh_style_score(l).value
            for s in (1e-3, 0.5, 42.0, 1e4):
                scaled = replace(l, positions=l.positions * s)
                scale_err = max(
                    scale_err,
                    abs(purchase_style_score(scaled).value - p0),
                    abs(klapaukh_style_score(scaled).value - k0),
                )
        scale_ok = scale_err <= 1e-9

        base = mirror_layout(10, 11, 82_000)
        magnitudes = np.linspace(0.02, 0.40, 10)
        means = []
        for mag in magnitudes:
            vals = []
            for seed in range(100):
                perturbed = displace_random_vertices(
                    base, np.random.default_rng(90_000 + seed),
                    magnitude_range=(float(mag), float(mag)),
                )
                vals.append(purchase_style_score(perturbed).value)
            means.append(float(np.mean(vals)))
        rho, pvalue = spearmanr(magnitudes, means)
        mono_ok = rho < 0 and pvalue < 0.01

        report(
            "invariance-suite",
            rotation_ok and scale_ok and mono_ok,
            f"rotation drift {drift:.2e} (axis {axis_drift_deg:.2f} deg), "
            f"scale err {scale_err:.2e}, spearman rho={rho:.3f} p={pvalue:.2e}",
        )
