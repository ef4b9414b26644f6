"""knotwork: draw 4-regular plane multigraphs as Celtic knots and links."""

from .graph import (
    BLUE,
    GREEN,
    DualNotBipartiteError,
    Face,
    InvalidGraphError,
    KnotworkError,
    PlaneMultigraph,
    ValidationReport,
    Violation,
    connected_components,
    dart,
    edge_of,
    trace_faces,
    twin,
    two_color_faces,
    validate_graph,
)
from .io import GraphFormatError, graph_from_dict, graph_to_dict, load_graph, save_graph
from .layout import (
    AmbiguousRotationError,
    Layout,
    SingularSystemError,
    rotation_from_coordinates,
    tutte_layout,
)
from .threads import (
    Circuit,
    CircuitPartition,
    UnderOverAssignment,
    is_threaded_euler,
    next_dart_after,
    threaded_circuit_partition,
    under_over,
)

__version__ = "0.1.0"
