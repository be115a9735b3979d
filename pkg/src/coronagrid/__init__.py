"""Multigrids, their dual rhombus tilings, and corona growth limit shapes.

Build a multigrid (Penrose pentagrid included), dualize it into an
edge-to-edge rhombus tiling, grow coronas on the shared adjacency graph,
and measure how the normalized growth shapes converge to the characteristic
polygon computed from the grid directions.
"""

from .analysis import (
    CharPolygon,
    ConvergenceRow,
    convergence_table,
    endpoints_diagnostic,
    grid_char_polygon,
    normalized_shape,
    tiling_char_polygon,
)
from .dual import Tile, TilingVertex, TilingWindow, dual_vertex, linear_dual, tile_of_crossing, tiling_window
from .geom import Polygon, convex_hull, hausdorff_distance, perp, scalar_product, scale_polygon
from .graph import CoronaSequence, Patch, corona_sequence, corona_step, graph_distance, make_patch, neighbors
from .multigrid import (
    Crossing,
    DominantLines,
    Endpoints,
    LineId,
    MultigridSpec,
    check_regular,
    count_crossings_with_grid,
    crossing_point,
    crossings_on_segment,
    dominant_lines,
    endpoints,
    make_crossing,
    nearest_crossing,
    nth_crossing,
)
from .sandpile import SandpileConfig, add_grain_and_topple, max_stable

__version__ = "0.1.0"

__all__ = [
    "CharPolygon", "ConvergenceRow", "CoronaSequence", "Crossing",
    "DominantLines", "Endpoints", "LineId", "MultigridSpec", "Patch",
    "Polygon", "SandpileConfig", "Tile", "TilingVertex", "TilingWindow",
    "add_grain_and_topple", "check_regular", "convergence_table",
    "convex_hull", "corona_sequence", "corona_step",
    "count_crossings_with_grid", "crossing_point", "crossings_on_segment",
    "dominant_lines", "dual_vertex", "endpoints", "endpoints_diagnostic",
    "graph_distance", "grid_char_polygon", "hausdorff_distance",
    "linear_dual", "make_crossing", "make_patch", "max_stable",
    "nearest_crossing", "neighbors", "normalized_shape", "nth_crossing",
    "perp", "scalar_product", "scale_polygon", "tile_of_crossing",
    "tiling_char_polygon", "tiling_window",
]
