from .adversary import (
    EAVESDROP,
    INTERCEPT_INJECT,
    FULL_MITM,
    CHANNEL_ACCESS,
    FIRST_FACTOR,
    AdversaryModel,
    n_minus_one,
)
from .channel import ChannelTap, TapEvent, observe
from .compromise import CompromisedMaterial, compromise, retrieved_rows
from .mitm import DualTranscript, link_readings, mitm_session
from .pfs import PfsExperiment, pfs_experiment, PFS_EXPERIMENT
from .harness import (
    HarnessResults,
    NMinusOneFinding,
    ReplayAttempt,
    SilentIterator,
    attack_trials,
    collect_all,
    collect_results,
    honest_trials,
    n_minus_one_findings,
    replay_attempt,
)
