"""Streaming sketches for union volume, planar convex bodies and 1-D discrepancy."""

from ._backend import BACKEND
from .convex import (
    ConvexStreamSketch,
    Membership,
    RankedCell,
    dudley_outer_approx,
    lp_maximize,
    membership_test,
    sketch_insert,
    sketch_query,
)
from .discrepancy import (
    BucketSketch,
    ColorPrefixSketch,
    color_disc_sorted,
    geo_disc_estimate,
    star_geo_disc_exact,
)
from .errors import *  # noqa: F401,F403
from .gadgets import (
    GadgetInstance,
    gen_colordisc_disj,
    gen_convex_index,
    gen_geodisc_disj,
    gen_klee_disj,
)
from .geometry import Color, Halfplane, HyperRect, Interval, LabeledPoint
from .klee import (
    FatKleeSketch,
    GridF0Sketch,
    SamplerSketch,
    klee_fat_estimate,
    klee_grid_f0_estimate,
    klee_sample_estimate,
)
from .polygon import ConvexPolygon, halfplane_intersection, hausdorff_distance
from .streams import (
    AdditiveSolverFactory,
    StreamKind,
    StreamSource,
    multipass_multiplicative,
    parse_stream,
)

__version__ = "0.1.0"
