"""
Naive closure, used as an oracle for the optimised one on tiny inputs.

"""

from ..primitives.suite import DEFAULT_SUITE
from .rules import RuleSet


def brute_force_close(kb, depth, suite=DEFAULT_SUITE, goal=None):
    """
    Apply every rule to every known term, and xor-combine every pair of
    known terms, for depth rounds or until nothing new appears.

    Returns
    -------
    frozenset of Term

    """
    assert len(kb.facts) <= 8 and depth <= 4, "The brute-force oracle is for tiny inputs."
    rules = RuleSet(kb.interest(goal), suite)
    known = dict(kb.initial_steps())
    for _ in range(depth):
        everything = list(known)
        new = {}
        for term in everything:
            for step in rules.analyse(term, known):
                new.setdefault(step.output, step)
        for a in everything:
            for b in everything:
                step = rules.combine(a, b)
                if step is not None:
                    new.setdefault(step.output, step)
        for term in rules.interest:
            step = rules.compose(term, known)
            if step is not None:
                new.setdefault(step.output, step)
        added = {t: s for t, s in new.items() if t not in known}
        if not added:
            break
        known.update(added)
    return frozenset(known)
