from .base_classes import Attack, Holdings, split_concat_fixed_len
from .impersonation import MissingClientAuthAttack, NullServerAttack
from .historical_data import TagChainAttack, EntropyAttack
from .key_recovery import (
    SessionKeyAttack,
    BiometricSchemeKeyAttack,
    MaskedNonceKeyAttack,
    ServerSecretKeyAttack,
    PseudonymKeyAttack,
)
from .deanonymisation import FixedLengthSplitAttack, PlainIdentityAttack
from .audit import MetadataAudit, protected_factor_findings, key_input_findings
from .relay import ChannelReadingRelayAttack
from .registry import ATTACKS, get_attack, attacks_for, run_attack
from ..report.attack_summary import AttackOutcome, SuccessRate, success_rate
