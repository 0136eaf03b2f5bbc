"""Shared numeric tolerances and size guards."""

# Tolerance for probability mass checks and all distribution-equality
# comparisons (prior sums, CPT rows, conditional-independence tests,
# posterior agreement).
PROB_TOL = 1e-9

# Cause searches enumerate subsets of the variable pool and are
# exponential in it; refuse tables beyond this many variables.
MAX_CAUSE_VARIABLES = 16

# Mapping variables materialize one instance per total function from
# argument configurations to target configurations; refuse spaces
# larger than this.
MAX_MAPPING_INSTANCES = 4096
