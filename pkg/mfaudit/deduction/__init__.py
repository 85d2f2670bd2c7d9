from .knowledge import (
    RULES,
    ClosureLimits,
    Closure,
    DerivationTrace,
    KnowledgeBase,
    Step,
)
from .closure import close, derivable
from .brute_force import brute_force_close
from .replay import replay, replay_steps
from .kbfile import parse_kb, load_kb
