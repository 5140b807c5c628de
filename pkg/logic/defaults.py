# Numerical and file-format constants.

# Tolerances
DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-12

# Relative eigenvalue cut-off used when taking the range of a Hermitian PSD
# (Gram-type) matrix. Rounding in a product M*M leaves spurious eigenvalues of
# order (rows of M) * eps * lambda_max, well above max(n, n) * eps.
GRAM_RANK_RTOL = 1e-12

# Instance / report files
SCHEMA_VERSION = "1"
SCALAR_FIELD = "complex"

# Generator caps (n = dim H, m = quadrature nodes, d_i = dim H_omega_i)
MAX_DOMAIN_DIM = 12
MAX_POINTS = 16
MAX_BLOCK_DIM = 6

DEFAULT_DOMAIN_DIM = 4
DEFAULT_POINTS = 6
DEFAULT_MAX_BLOCK = 3

# Quadrature weights are drawn uniformly from this interval
WEIGHT_RANGE = (0.5, 2.0)

# Property suites
SANDWICH_SAMPLES = 1000
ORACLE_SAMPLES = 100_000
QUADRATIC_FORM_SAMPLES = 100
PERTURBATIONS_PER_INSTANCE = 20
OPTIMALITY_EPSILON = 1e-6
ORACLE_REL_SLACK = 1e-6
DUAL_NORM_REL_SLACK = 1e-6
NORM_MATCH_REL = 1e-8
# Gram-matrix pencils against the factor computations
PENCIL_MATCH_REL = 1e-6

# A computed eigenbasis of a PSD matrix strays from its exact range by about
# size * eps * lambda_max / lambda_min_positive; range tests allow this many times that
EIGENBASIS_LEAK_FACTOR = 10

# Principal angles whose squared cosine is within this of 1 count as shared
# directions of two ranges
INTERSECTION_SLACK = 1e-8
