"""Default budgets. ``RHS_ACTIONS_BUDGET`` overrides the closure bound."""
import os

DEFAULT_CLOSURE_BOUND = 20_000
# Cayley tables are materialized for every group; this caps their size.
TABLE_BOUND = 6_000
ISO_BOUND = 2_048
H2_BOUND = 512
BAR_BOUNDS = {1: 64, 2: 64, 3: 16, 4: 8, 5: 6}
ENUMERATION_LIMIT = 4_096
THEOREM_B_BOUND = 256


def closure_bound() -> int:
    raw = os.environ.get("RHS_ACTIONS_BUDGET")
    if raw is None:
        return DEFAULT_CLOSURE_BOUND
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_CLOSURE_BOUND
    return value if value > 0 else DEFAULT_CLOSURE_BOUND
