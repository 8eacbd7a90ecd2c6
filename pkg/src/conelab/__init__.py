"""Numerical laboratory for cone and polygon Fourier multipliers over lacunary
direction sets, with directional maximal operators and weighted-inequality
experiments on periodic grids."""

from .directions import (
    DirectionSet,
    equispaced,
    lacunary_polygon,
    lift3d,
    localization_segments,
    make_lacunary_order1,
    make_lacunary_orderK,
    perp,
    polygon_halfplanes,
    sector_of,
    validate_lacunary,
)
from .estimators import (
    AngularDecomposition,
    ConeMultiplier,
    DirectionalHilbert,
    FourierMultiplier,
    HalfspaceProjection,
    LittlewoodPaleyProjection,
    MaximalOperator,
    PolygonMultiplier,
)
from .lab import (
    RatioReport,
    TrialConfig,
    eval_inequality,
    invariant_suite,
    norm_lower_bound,
    rademacher_check,
    sweep_directions,
)
from .maximal import (
    MaximalSpec,
    Stage,
    lemma1_spec,
    lemma2_spec,
    max_axis,
    max_directional,
    max_set,
    remark1_spec,
    run_spec,
    theorem2_spec,
)
from .multipliers import (
    angular_decompose,
    build_phi,
    cone_symbol,
    halfspace_symbol,
    hilbert_symbol,
    lp_projection,
    lp_symbol,
    polygon_symbol,
    sector_symbol,
)
from .spectral_grid import apply_symbol, forward, inverse, reduce

__version__ = "0.1.0"
