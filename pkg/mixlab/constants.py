from __future__ import print_function, division
import os
import numpy

# All supported initial patterns.
# If user requests another pattern, an error is raised.
patterns = [
    "left_right_halves",
    "top_bottom_halves",
    "checkerboard",
    "stripes",
    "random",
    "from_file",
]

# All supported building blocks
block_kinds = ["interleave", "baker", "deep", "swirl"]

# Accuracy parameter of the geometric mixing scale, gap parameter of the characteristic
# length scale, and the un-mixedness constant used when certifying.
KAPPA = 0.5
GAMMA_BAR = 0.5
ALPHA = 0.1

# Radius ladder for geometric mixing scale and characteristic length scale:
# h * LADDER_FACTOR**k from the cell side h up to the diagonal of the square
LADDER_FACTOR = 2 ** 0.25
LADDER_TOP = numpy.sqrt(2)

# Continuous fields are mean-zero (and tiles mixed) up to this tolerance
MEAN_TOL = 1e-12

# Finite-difference stencils need this many samples across every tile
STENCIL_SAMPLES = 5

# Side of the periodic box the tracer is embedded into for the H^-1 solve, in units of
# the unit square. Larger is closer to the whole-plane norm but more expensive.
H1_PADDING = 2

# Excluded fractions of the Lusin-Lipschitz profile probe
LUSIN_FRACTIONS = (0.01, 0.02, 0.05, 0.10, 0.20)

# Default swirl amplitude: the linearized flow at the center rotates by pi/2 in unit time.
# Near the center psi ~ A (1 - pi^2 |x|^2), so the angular velocity is 2 pi^2 A.
SWIRL_AMPLITUDE = 1 / (4 * numpy.pi)

# Native resolutions (grid is 2^q x 2^q) of the building blocks
INTERLEAVE_Q = 2
BAKER_Q = 1
SWIRL_Q = 6

# RK4 steps used to build the grid-snapped swirl permutation
SWIRL_RK4_STEPS = 64

# Midpoint quadrature resolution (2^QUAD_LEVEL per side) and time nodes for block costs
QUAD_LEVEL = 9
QUAD_TIME_NODES = 16

# Semi-Lagrangian substeps per stage
SUBSTEPS = 32

# Decay fits need at least this many samples; r^2 needs at least three in the window
MIN_DECAY_SAMPLES = 4
MIN_FIT_WINDOW = 3

# An r^2 advantage below this margin does not count as a preference for one decay law
R2_MARGIN = 0.02

# Characteristic length scales of A_Q and its complement differing by more than this
# factor are flagged in the un-mixedness certificate
LS_ASYMMETRY = 2.0

# Manifest schema version accepted by the scenario runner
MANIFEST_SCHEMA = 1

# Exit codes of the command line interface
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_MANIFEST = 2
EXIT_RESOLUTION = 3
EXIT_VELOCITY = 4

# Cap on scipy FFT workers
THREADS = max(1, int(os.environ.get("MIXLAB_THREADS", "1")))
