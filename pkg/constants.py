
REPORT_SCHEMA_VERSION = "1.2"

ENV_PREFIX = "JACSYZ_"

# exit codes of the command line tool
EXIT_OK = 0
EXIT_INVARIANT_VIOLATION = 1
EXIT_PRECONDITION = 2
EXIT_EXPECTATION_MISMATCH = 3

DEFAULT_SEED = 0
DEFAULT_ORDER = "grevlex"
SUPPORTED_ORDERS = ["grevlex", "lex"]

# budgets
DEFAULT_BUDGET_DEGREE = 200
DEFAULT_BUDGET_PAIRS = 20000
DEFAULT_CHART_RETRIES = 32
DEFAULT_WITNESS_TRIALS = 16
DEFAULT_LOCAL_ORDER_BUDGET = 64
DEFAULT_GRAPH_SAMPLES = 50

# random integer ranges used for "generic" choices
SHEAR_COEFFICIENT_RANGE = (-3, 3)
WITNESS_COEFFICIENT_RANGE = (-9, 9)
SAMPLE_COORDINATE_RANGE = (-12, 12)

RATIONAL_FIELD_NAME = "Q"
MINPOLY_VARIABLE = "t"

# on-disk Groebner basis cache
CACHE_MAGIC = b"JSGB"
CACHE_FORMAT_VERSION = 1
CACHE_LAYOUT_DIR = "v1"
CACHE_SUFFIX = ".gb"

POLY_SUFFIX = ".poly"
EXPECT_SUFFIX = ".expect"

QUASI_HOMOGENEOUS = "quasi-homogeneous"
NON_QUASI_HOMOGENEOUS = "non-quasi-homogeneous"

CORPUS_STATUS_OK = "OK"
CORPUS_STATUS_MISMATCH = "MISMATCH"
CORPUS_STATUS_FAILED = "FAILED"

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# keys accepted in .expect sidecars and how their values are read
EXPECTATION_KEYS = {
    "d": "int",
    "n": "int",
    "m": "int",
    "exponents": "int_list",
    "e": "int_list",
    "tau": "int",
    "mu": "int",
    "deg_jf": "int",
    "residual": "int",
    "points": "int",
    "qh_points": "int",
    "non_qh_points": "int",
    "global_all_qh": "bool",
    "defect": "int",
    "zf_class": "int_list",
    "sf_class": "int_list",
    "curve_type": "str",
}
