from .profile import (
    OP_KINDS,
    OP_NAMES,
    AffineCount,
    CostProfile,
    parse_cost_expression,
    format_cost_expression,
    load_profiles,
    estimate_time,
)
from .units import UnitCostTable, parse_units, load_units, DEFAULT_UNITS_PATH
from .benchmark import measure_primitives, time_operation, MIN_TRIALS
from .report import CostReport
