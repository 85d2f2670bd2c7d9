"""
Adversary knowledge closure.

The closure is computed level by level: in round k every rule is applied to
the knowledge held at the start of the round, and what it produces becomes
available in round k+1. XOR pairs are only formed with at least one term
derived in the previous round, since older pairs have already been tried.

"""

import warnings

from ..errors import ClosureLimitExceeded
from ..primitives.suite import DEFAULT_SUITE
from ..terms import normalize, render
from .rules import RuleSet
from .knowledge import Closure


def _saturate(kb, goal, suite, stop_at=None):
    rules = RuleSet(kb.interest(goal), suite)
    known = kb.initial_steps()
    frontier = list(known)
    depth = 0
    saturated = False
    while True:
        if stop_at is not None and stop_at in known:
            break
        if depth >= kb.limits.max_depth:
            break
        new = rules.one_step(known, frontier)
        if not new:
            saturated = True
            break
        depth += 1
        known.update(new)
        frontier = list(new)
        if len(known) > kb.limits.max_size:
            raise ClosureLimitExceeded(
                f"Closure exceeded {kb.limits.max_size} terms at depth {depth}."
            )
    return Closure(provenance=known, saturated=saturated, depth=depth)


def close(kb, suite=DEFAULT_SUITE, goal=None):
    """
    Everything the adversary can derive from a knowledge base.

    Parameters
    ----------
    kb: KnowledgeBase
    suite: CryptoSuite
    goal: Term, optional
        Its subterms are added to the subterms of interest.

    Returns
    -------
    Closure

    Raises
    ------
    ClosureLimitExceeded
        If more than kb.limits.max_size terms are derived. Reaching the depth
        limit without a fixpoint only warns.

    """
    closure = _saturate(kb, goal, suite)
    if not closure.saturated:
        warnings.warn(
            f"Closure stopped at depth {closure.depth} without reaching a fixpoint."
        )
    return closure


def derivable(kb, goal, suite=DEFAULT_SUITE, strict=False):
    """
    Derive a goal, if the adversary can.

    The search stops as soon as the goal (read through the equations) is
    known. The trace's last output is that unfolded goal.

    Parameters
    ----------
    kb: KnowledgeBase
    goal: Term
    suite: CryptoSuite
    strict: bool
        Raise instead of warning when the depth limit cuts the search short.

    Returns
    -------
    DerivationTrace or None
        None when the goal was not derived. Unless the closure reached a
        fixpoint, that only means it was not derived within the depth limit.

    Raises
    ------
    ClosureLimitExceeded
        If more than kb.limits.max_size terms are derived, or with strict
        when the depth limit is reached before the goal or a fixpoint.

    """
    goal = normalize(goal)
    target = kb.unfold(goal)
    closure = _saturate(kb, goal, suite, stop_at=target)
    trace = closure.trace(goal, target)
    if trace is None and not closure.saturated:
        message = (
            f"{render(goal)} was not derived within depth {closure.depth} and the "
            "closure had not reached a fixpoint."
        )
        if strict:
            raise ClosureLimitExceeded(message)
        warnings.warn(message)
    return trace
