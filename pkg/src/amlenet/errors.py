"""Exception types raised by the library."""


class AmlenetError(Exception):
    """Base class for all library errors."""


# -- network construction / validation ---------------------------------------

class DisconnectedGraph(AmlenetError):
    """The neighbor graph is not connected."""


class EmptyNeighborhood(AmlenetError):
    """Some node has no neighbors besides itself."""


class AsymmetricAdjacency(AmlenetError):
    """Adjacency (or edge lengths) disagree between the two directions."""


class NonpositiveEdge(AmlenetError):
    """An edge length is zero, negative, or not finite."""


class EmptyTargetSet(AmlenetError):
    """A target node set that must be nonempty is empty."""


class EmptySet(AmlenetError):
    """A node set passed to a set-distance computation is empty."""


# -- moduli of continuity -----------------------------------------------------

class DuplicatePoints(AmlenetError):
    """Two samples at zero distance carry different values."""


class SingleSample(AmlenetError):
    """At least two samples are required."""


class NegativeArgument(AmlenetError):
    """A modulus of continuity is only defined for nonnegative arguments."""


# -- solver --------------------------------------------------------------------

class UndefinedNeighborValue(AmlenetError):
    """A nodal update needs a finite value on every neighbor."""


class OrderMismatch(AmlenetError):
    """A sweep order must enumerate exactly the non-Dirichlet nodes."""


class InvalidTolerance(AmlenetError):
    """Solver tolerance must be a positive finite number."""


class BoundaryMismatch(AmlenetError):
    """A field does not agree with the boundary data on the Dirichlet set."""


class NoCoordinates(AmlenetError):
    """The operation needs node coordinates, but the network has none."""


# -- experiments ----------------------------------------------------------------

class NonfiniteExact(AmlenetError):
    """An exact solution evaluated to a nonfinite value on the grid."""


class ZeroGradient(AmlenetError):
    """The ball-mean expansion check requires a nonzero gradient."""
