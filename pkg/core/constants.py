"""
Constants and patterns for tworep.
Fixed values shared across services; runtime-tunable values live in core.config.
"""
import re

# Object and 1-morphism names: non-empty, no composition-key separator,
# no surrounding whitespace
NAME_PATTERN = re.compile(r"^(?!\s)[^|]{1,128}(?<!\s)$")

# "F|G" keys in the composition section of a category document
COMPOSITION_KEY_SEP = "|"

REPORT_VERSION = "1"
TOOL_NAME = "tworep"

# Defaults mirrored by core.config when the environment is silent
FILTRATION_CAP_DEFAULT = 10000
SAMPLE_COUNT_DEFAULT = 200
RANDOM_SEED_DEFAULT = 0
SEARCH_BUDGET_DEFAULT = 5_000_000
OUTPUT_FORMATS = ("json", "yaml", "human")

# Kazhdan-Lusztig expansions of type B2, written as sums of group elements
# (reduced words in s, t; "stst" is the longest element)
B2_REFERENCE_EXPANSIONS = {
    "e": ("e",),
    "s": ("e", "s"),
    "t": ("e", "t"),
    "st": ("e", "t", "s", "st"),
    "ts": ("e", "t", "s", "ts"),
    "sts": ("e", "t", "s", "ts", "st", "sts"),
    "tst": ("e", "t", "s", "ts", "st", "tst"),
    "stst": ("e", "t", "s", "ts", "st", "tst", "sts", "stst"),
}

# (θ_st + θ_ts)^2 = 2Θ and Θ^2 = 10Θ + 4(θ_st + θ_ts) modulo the top cell
B2_SQUARE_COEFFICIENT = 2
B2_THETA_SQUARE_COEFFICIENTS = (10, 4)

# Two-by-two candidates for [[θ_st + θ_ts]] as listed in the B2 computation,
# each normalized to a non-increasing diagonal
B2_SUM_CANDIDATES = (
    ((4, 4), (1, 0)),
    ((4, 2), (2, 0)),
    ((4, 1), (4, 0)),
    ((3, 7), (1, 1)),
    ((3, 1), (7, 1)),
    ((2, 8), (1, 2)),
    ((2, 4), (2, 2)),
    ((2, 2), (4, 2)),
    ((2, 1), (8, 2)),
)

# The surviving pair [[θ_s]], [[θ_t]] (and its s<->t swap)
B2_SURVIVING_PAIR = (((1, 1), (1, 1)), ((2, 0), (0, 0)))
