# Fairkit defaults. Configuration is explicit: every value here can be
# overridden through function arguments or CLI flags. No environment
# variables are read, so runs are reproducible from the command line alone.

# Logging
LOG_LEVEL = "INFO"

# Randomness
DEFAULT_SEED = 0

# Data validation
SMALL_GROUP_WARNING = 10  # groups with fewer rows get a warning
WEIGHT_TOLERANCE = 1e-9  # weights (groups, mixtures, components) must sum to 1 within this

# Reductions (exponentiated gradient)
DEFAULT_EPS = 0.05
DEFAULT_BOUND = 100.0
DEFAULT_ETA0 = 2.0
DEFAULT_NU = 1e-6
DEFAULT_MAX_ITER = 50

# Base learners
LOGISTIC_L2 = 0.0
LOGISTIC_MAX_EPOCHS = 1000
LOGISTIC_TOL = 1e-6
LOGISTIC_STEP = 1.0

# Post-processing
DEFAULT_GRID_SIZE = 1000
OBJECTIVE_TIE_TOLERANCE = 1e-12

# Reports
SVG_WIDTH = 800
SVG_HEIGHT = 600
SVG_MARGIN = 80
SVG_TICKS = 5
