from .attack_summary import (
    AttackSummary,
    AttackOutcome,
    SuccessRate,
    success_rate,
)
from .linkability import (
    LinkabilityFinding,
    identity_linkability_scan,
    identity_sources,
)
from .criteria import (
    CRITERIA,
    CRITERIA_NAMES,
    CriterionEvidence,
    CriteriaRow,
    CriteriaMatrix,
    evaluate_protocol,
    load_reference_matrix,
)
from .report import (
    Report,
    CriteriaReport,
    AttackReport,
    SessionReport,
    DeductionReport,
    REPORT_SCHEMA,
)
from .utils import PASS_MARK, FAIL_MARK
