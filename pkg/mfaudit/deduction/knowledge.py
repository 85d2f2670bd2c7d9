"""
What the adversary starts from: facts, public constants and the defining
equations of the protocol, plus the data structures a closure produces.

"""

from dataclasses import dataclass
from typing import Dict, Tuple

from ..terms import Atom, Term, normalize, rebuild, render, subterms

# Rule names, in the order they are reported.
KNOWN = "known"
EQUATION_UNFOLD = "equation-unfold"
XOR_COMBINE = "xor-combine"
GROUP_SOLVE = "group-solve"
HASH_APPLY = "hash-apply"
DECRYPT = "decrypt"
ENCRYPT = "encrypt"
CONCAT_SPLIT = "concat-split"
CONCAT_JOIN = "concat-join"
ONE_WAY_APPLY = "one-way-apply"

RULES = (
    KNOWN,
    EQUATION_UNFOLD,
    XOR_COMBINE,
    GROUP_SOLVE,
    HASH_APPLY,
    DECRYPT,
    ENCRYPT,
    CONCAT_SPLIT,
    CONCAT_JOIN,
    ONE_WAY_APPLY,
)


@dataclass(frozen=True)
class ClosureLimits:
    """Bounds on a closure computation."""

    max_size: int = 20000
    max_depth: int = 12

    def __post_init__(self):
        if self.max_size <= 0 or self.max_depth <= 0:
            raise ValueError("Closure limits must be positive.")


@dataclass(frozen=True)
class Step:
    """One rule application: inputs |- output."""

    rule: str
    inputs: Tuple[Term, ...]
    output: Term

    def __post_init__(self):
        assert self.rule in RULES, f"Unknown rule {self.rule}."

    def to_dict(self):
        return {
            "rule": self.rule,
            "inputs": [render(t) for t in self.inputs],
            "output": render(self.output),
        }


@dataclass(frozen=True)
class DerivationTrace:
    """
    Ordered steps deriving a goal. Every input of a step is either the
    output of an earlier step or one of the initial facts.

    """

    goal: Term
    steps: Tuple[Step, ...]

    def __len__(self):
        return len(self.steps)

    @property
    def output(self):
        return self.steps[-1].output

    def rules(self):
        return [step.rule for step in self.steps]

    def to_dict(self):
        return {"goal": render(self.goal), "steps": [s.to_dict() for s in self.steps]}

    def __str__(self):
        lines = []
        for number, step in enumerate(self.steps, start=1):
            inputs = ", ".join(render(t) for t in step.inputs)
            lines.append(f"{number}. {step.rule}: {inputs} |- {render(step.output)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Closure:
    """
    Result of a closure computation.

    Attributes
    ----------
    provenance: dict Term -> Step
        Every derived term, in order of derivation, with the step that
        produced it first.
    saturated: bool
        Whether a fixpoint was reached within the depth limit.
    depth: int
        Number of rounds computed.

    """

    provenance: Dict[Term, Step]
    saturated: bool
    depth: int

    @property
    def terms(self):
        return frozenset(self.provenance)

    def __contains__(self, term):
        return normalize(term) in self.provenance

    def __len__(self):
        return len(self.provenance)

    def trace(self, goal, unfolded_goal):
        """The derivation of unfolded_goal, or None if it was not derived."""
        if unfolded_goal not in self.provenance:
            return None
        steps = {}

        def visit(term):
            step = self.provenance.get(term)
            if step is None or step in steps:
                return
            for t in step.inputs:
                visit(t)
            steps[step] = None

        visit(unfolded_goal)
        ordered = [s for s in steps if s.rule != KNOWN]
        if not ordered:
            ordered = [self.provenance[unfolded_goal]]
        return DerivationTrace(goal=goal, steps=tuple(ordered))


def _unique(terms):
    return tuple(dict.fromkeys(normalize(t) for t in terms))


class KnowledgeBase:
    """
    Initial adversary knowledge.

    Parameters
    ----------
    facts: iterable of Term
        Values the adversary holds (wire values, compromised secrets).
    equations: dict str -> Term
        Definitions name := term. Facts and goals mentioning a defined name
        are read through its definition. Must be acyclic.
    public: iterable of Term
        Public constants, known in every case.
    limits: ClosureLimits

    """

    def __init__(self, facts=(), equations=None, public=(), limits=None):
        self.facts = _unique(facts)
        self.public = _unique(public)
        self.equations = {
            name: normalize(rhs) for name, rhs in (equations or {}).items()
        }
        self.limits = limits if limits is not None else ClosureLimits()
        self._check_acyclic()
        self._unfolded = {}

    def _check_acyclic(self):
        state = {}

        def visit(name, path):
            if state.get(name) == "done":
                return
            if state.get(name) == "active":
                cycle = " -> ".join(path[path.index(name) :] + [name])
                raise ValueError(f"Equations are cyclic: {cycle}")
            state[name] = "active"
            for t in subterms(self.equations[name]):
                if isinstance(t, Atom) and t.name in self.equations:
                    visit(t.name, path + [name])
            state[name] = "done"

        for name in self.equations:
            visit(name, [])

    def unfold(self, term):
        """Normal form of a term with every defined atom replaced by its definition."""
        if isinstance(term, Atom):
            if term.name not in self.equations:
                return term
            if term.name not in self._unfolded:
                self._unfolded[term.name] = self.unfold(self.equations[term.name])
            return self._unfolded[term.name]
        children = term.children()
        if not children:
            return term
        return normalize(rebuild(term, (self.unfold(t) for t in children)))

    def initial_steps(self):
        """Steps introducing public constants and facts."""
        steps = {}
        for term in self.public + self.facts:
            unfolded = self.unfold(term)
            if unfolded in steps:
                continue
            if unfolded == term:
                steps[unfolded] = Step(KNOWN, (), term)
            else:
                steps[unfolded] = Step(EQUATION_UNFOLD, (term,), unfolded)
        return steps

    def interest(self, goal=None):
        """
        Subterms of interest: every subterm of the unfolded facts, goal and
        definitions. Composition rules only ever build these.

        """
        roots = [self.unfold(t) for t in self.public + self.facts]
        roots += [self.unfold(Atom(name)) for name in self.equations]
        if goal is not None:
            roots.append(self.unfold(normalize(goal)))
        found = {}
        for root in roots:
            for t in subterms(root):
                found.setdefault(t, None)
        return list(found)

    def extend(self, facts=(), public=()):
        """A knowledge base with more facts (same equations and limits)."""
        return KnowledgeBase(
            self.facts + tuple(facts),
            self.equations,
            self.public + tuple(public),
            self.limits,
        )

    def with_limits(self, limits):
        return KnowledgeBase(self.facts, self.equations, self.public, limits)

    def __repr__(self):
        return (
            f"KnowledgeBase({len(self.facts)} facts, {len(self.public)} public, "
            f"{len(self.equations)} equations)"
        )
