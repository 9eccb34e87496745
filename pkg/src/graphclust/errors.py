"""Exception types shared across the package.

Everything raised on bad *data* (malformed files, inconsistent graphs,
partitions that do not match a graph) derives from GraphClustError so the
CLI can map it to a single exit code. Plain ValueError is reserved for bad
*parameters* (out-of-range knobs, unknown algorithm names).
"""


class GraphClustError(Exception):
    """Base class for data and contract errors."""


class GraphInputError(GraphClustError):
    """Edge list contains an invalid entry (bad id, non-positive weight)."""


class ParseError(GraphClustError):
    """A text input file is malformed; message carries the line number."""


class EmptyGraphError(GraphClustError):
    """An edge-list file contained no edges."""


class EmptyInputError(GraphClustError):
    """A clustering routine was handed an empty point set."""


class UnknownVertexError(GraphClustError):
    """A file referenced a vertex id that is not in the graph."""


class IncompletePartitionError(GraphClustError):
    """A partition file does not assign every vertex exactly once."""


class PartitionError(GraphClustError):
    """A partition object violates its contract or does not fit a graph."""


class UndefinedModularityError(GraphClustError):
    """Modularity was requested on a graph with zero total edge weight."""


class PreconditionError(GraphClustError):
    """A move-gain formula was applied outside its stated preconditions."""


class RefinementError(GraphClustError):
    """The second argument of the split distance does not refine the first."""


class MissingBaselineError(GraphClustError):
    """Speedups were requested from timings that lack a one-worker run."""
