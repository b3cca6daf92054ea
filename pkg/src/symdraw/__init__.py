"""symdraw: deterministic symmetric graph-drawing datasets and symmetry scores."""

from .graphgen import (
    EdgeFeature,
    GenerationError,
    GenerationInfeasibleError,
    Graph,
    MirrorPairing,
    RetryExhaustedError,
    connect_components,
    gen_component_graph,
    gen_sym_graph,
)
from .layouts import (
    Layout,
    LayoutClass,
    NonSymFeature,
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
    Axis,
    SymmetryScore,
    candidate_axes,
    classify_by_score,
    exact_mirror_oracle,
    exact_rotation_oracle,
    exact_translation_oracle,
    klapaukh_style_score,
    purchase_style_score,
    reflect_point,
)
from .raster import ViewTransform, decode_png, encode_png, fit_view, rasterize
from .evaluation import (
    ConfusionMatrix,
    EvalReport,
    SplitSpec,
    binary_comparison_table,
    compare_metrics_report,
    evaluate,
    split,
)
from .dataset import (
    DatasetRecipe,
    ManifestRecord,
    VerificationReport,
    build_dataset,
    build_sample,
    generate_layout,
    make_recipe,
    read_manifest,
    score_manifest,
    verify_dataset,
)

__version__ = "0.1.0"
