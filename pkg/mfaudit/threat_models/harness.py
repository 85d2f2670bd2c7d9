"""
The experiment harness: everything the evaluation needs about one protocol.

For an executable protocol the harness registers a deployment, records
honest sessions, runs every registered attack under its own premises, the
forward-secrecy experiment, a replay attempt, N-1 derivability checks and the
linkability scan. Protocols described at metadata fidelity only get the
attacks that read the description.

"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..deduction import derivable
from ..errors import AttackInapplicable, PrerequisiteUnmet, SelectorViolation
from ..protocols.deployment import register
from ..protocols.session import run_session
from ..protocols.symbolic import as_symbolic
from ..report.attack_summary import AttackOutcome
from ..report.linkability import LinkabilityFinding, identity_linkability_scan
from .adversary import EAVESDROP, INTERCEPT_INJECT, n_minus_one
from .channel import ChannelTap
from .pfs import pfs_experiment

logger = logging.getLogger(__name__)


class SilentIterator:
    """
    SilentIterator implements the interface expected of iteration trackers
    (such as tqdm), but does nothing.

    """

    def __init__(self, *args, **kwargs):
        pass

    def update(self, *args, **kwargs):
        pass

    def close(self, *args, **kwargs):
        pass


@dataclass(frozen=True)
class ReplayAttempt:
    """
    A message of an old session re-injected in a later one.

    Parameters
    ----------
    index: int
        The message replayed: the first one any role checks.
    receiver: str
    accepted: bool
        Whether the receiver let the replayed message through.
    failure: str, optional
        Why the receiver rejected it.

    """

    index: int
    receiver: str
    accepted: bool
    failure: Optional[str] = None

    def __str__(self):
        verdict = "accepted" if self.accepted else f"rejected ({self.failure})"
        return f"message {self.index} replayed to the {self.receiver}: {verdict}"


@dataclass(frozen=True)
class NMinusOneFinding:
    """Values derivable by an eavesdropper holding every factor of a role but one."""

    role: str
    withheld: str
    derivable: tuple

    def __str__(self):
        return (
            f"holding the {self.role}'s factors without {self.withheld} "
            f"yields {', '.join(self.derivable)}"
        )


@dataclass
class HarnessResults:
    """
    What the harness learnt about one protocol.

    Parameters
    ----------
    protocol: str
    model: ProtocolModel
    seed: int
    transcripts: list of Transcript
        Honest sessions of one deployment.
    outcomes: dict attack id -> AttackOutcome
    skipped: dict attack id -> str
        Attacks that could not run, with the reason.
    pfs: AttackOutcome, optional
    replay: ReplayAttempt, optional
    n_minus_one: list of NMinusOneFinding
    linkability: list of LinkabilityFinding

    """

    protocol: str
    model: object
    seed: int
    transcripts: list = field(default_factory=list)
    outcomes: Dict[str, AttackOutcome] = field(default_factory=dict)
    skipped: Dict[str, str] = field(default_factory=dict)
    pfs: Optional[AttackOutcome] = None
    replay: Optional[ReplayAttempt] = None
    n_minus_one: List[NMinusOneFinding] = field(default_factory=list)
    linkability: List[LinkabilityFinding] = field(default_factory=list)

    @property
    def executed(self):
        return bool(self.transcripts)

    def successful_attacks(self, criterion=None):
        """Outcomes of successful attacks, optionally only those counting against a criterion."""
        return [
            outcome
            for outcome in self.outcomes.values()
            if outcome.success and (criterion is None or criterion in outcome.criteria)
        ]

    def to_dict(self):
        return {
            "protocol": self.protocol,
            "seed": self.seed,
            "sessions": len(self.transcripts),
            "agreed": sum(t.agreed for t in self.transcripts),
            "attacks": {k: o.to_dict() for k, o in sorted(self.outcomes.items())},
            "skipped": dict(sorted(self.skipped.items())),
            "pfs": self.pfs.to_dict() if self.pfs else None,
            "replay": str(self.replay) if self.replay else None,
            "n_minus_one": [str(f) for f in self.n_minus_one],
            "linkability": [str(f) for f in self.linkability],
        }


def replay_attempt(deployment, old, session_index, rng):
    """
    Re-inject the first checked message of an old session into a new one.

    Returns
    -------
    ReplayAttempt or None
        None when no role checks anything.

    """
    model = deployment.model
    checked = sorted({c.after for c in model.checks})
    if not checked or len(old.messages) < checked[0]:
        return None
    message = old.message(checked[0])
    tap = ChannelTap(INTERCEPT_INJECT).inject(message.index, message)
    transcript = run_session(deployment, tap, rng, session_index=session_index)
    receiver = message.receiver
    accepted = receiver not in transcript.rejected_at
    return ReplayAttempt(message.index, receiver, accepted, transcript.failures.get(receiver))


def n_minus_one_findings(model, suite):
    """
    For every role with at least two factors and every factor it could
    withhold: is the session key, or the withheld material, derivable from
    the other factors and the wire?

    """
    findings = []
    for role in model.roles:
        factors = model.factors_of(role)
        if len(factors) < 2:
            continue
        for withheld in factors:
            adversary = n_minus_one(model, role, withheld.id, channel=EAVESDROP)
            try:
                held = set(adversary.compromised_names(model))
            except SelectorViolation as err:
                logger.debug("Skipping %s without %s: %s", role, withheld.id, err)
                continue
            kb, goal = as_symbolic(model, adversary)
            goals = [model.sk] if goal is not None else []
            goals += [name for name in withheld.holds if name not in held]
            found = tuple(
                name for name in goals if derivable(kb, model.symbols[name], suite) is not None
            )
            if found:
                findings.append(NMinusOneFinding(role, withheld.id, found))
    return findings


def _run_attacks(results, model, deployment, transcripts, rng):
    # Attacks build on the threat models: imported here.
    from ..attacks.registry import attacks_for, run_attack

    for attack in attacks_for(model):
        if deployment is None and attack.needs_deployment:
            results.skipped[attack.label] = "needs an executable description"
            continue
        target = deployment.snapshot() if deployment is not None else model
        try:
            outcome = run_attack(
                attack.label,
                target,
                transcripts[: attack.transcripts_needed],
                rng=rng,
                seed=results.seed,
            )
        except (PrerequisiteUnmet, AttackInapplicable) as err:
            results.skipped[attack.label] = str(err)
            continue
        results.outcomes[attack.label] = outcome
        logger.info("%s: %s %s.", model.id, attack.label, "succeeded" if outcome.success else "failed")


def collect_results(model, config):
    """
    Run every experiment the evaluation needs on one protocol.

    Parameters
    ----------
    model: ProtocolModel
    config: WorkbenchConfig
        Gives the suite, the seed and the number of honest sessions.

    Returns
    -------
    HarnessResults

    """
    rng = np.random.default_rng(config.seed)
    results = HarnessResults(model.id, model, config.seed)
    if not model.is_executable:
        _run_attacks(results, model, None, [], rng)
        logger.info("%s: metadata only, %d attack(s) run.", model.id, len(results.outcomes))
        return results
    deployment = register(model, rng, config.suite, seed=config.seed)
    results.transcripts = [
        run_session(deployment, ChannelTap(EAVESDROP), rng, session_index=k, seed=config.seed)
        for k in range(config.sessions)
    ]
    _run_attacks(results, model, deployment, results.transcripts, rng)
    results.pfs = pfs_experiment(deployment.snapshot(), rng=rng)
    results.replay = replay_attempt(
        deployment.snapshot(), results.transcripts[0], config.sessions, rng
    )
    results.n_minus_one = n_minus_one_findings(model, config.suite)
    results.linkability = identity_linkability_scan(results.transcripts, model)
    logger.info(
        "%s: %d/%d honest sessions agreed, forward secrecy %s.",
        model.id,
        sum(t.agreed for t in results.transcripts),
        len(results.transcripts),
        "broken" if results.pfs.success else "holds",
    )
    return results


def collect_all(models, config, iterator_tracker=None):
    """
    Run the harness on several protocols, `config.workers` at a time.

    Returns
    -------
    dict protocol id -> HarnessResults, ordered by protocol id as given.

    """
    models = list(models)
    tracker = (iterator_tracker or SilentIterator)(total=len(models))
    results = {}
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        for model, result in zip(models, pool.map(lambda m: collect_results(m, config), models)):
            results[model.id] = result
            tracker.update(1)
    tracker.close()
    return results


def honest_trials(model, config, iterator_tracker=None):
    """
    One honest session on each of `config.trials` fresh deployments, trial k
    seeded with config.seed + k.

    Returns
    -------
    list of Transcript

    """
    tracker = (iterator_tracker or SilentIterator)(total=config.trials)
    transcripts = []
    for k in range(config.trials):
        seed = config.seed + k
        rng = np.random.default_rng(seed)
        deployment = register(model, rng, config.suite, seed=seed)
        transcripts.append(run_session(deployment, rng=rng, seed=seed))
        tracker.update(1)
    tracker.close()
    return transcripts


def attack_trials(attack_id, model, config, adversary=None, strict=True, iterator_tracker=None):
    """
    Run an attack on `config.trials` fresh deployments, trial k seeded with
    config.seed + k.

    Returns
    -------
    list of AttackOutcome

    Raises
    ------
    PrerequisiteUnmet, AttackInapplicable
        As run_attack, before any trial runs.

    """
    from ..attacks.registry import get_attack, run_attack

    attack = get_attack(attack_id)
    if not attack.applies_to(model):
        raise AttackInapplicable(f"{attack.label} does not target {model.id}.")
    adversary = adversary if adversary is not None else attack.default_adversary(model)
    if strict:
        attack.check_prerequisites(model, adversary)
    tracker = (iterator_tracker or SilentIterator)(total=config.trials)
    outcomes = []
    for k in range(config.trials):
        seed = config.seed + k
        rng = np.random.default_rng(seed)
        target = register(model, rng, config.suite, seed=seed) if attack.needs_deployment else model
        outcomes.append(
            run_attack(attack_id, target, adversary=adversary, rng=rng, seed=seed, strict=False)
        )
        tracker.update(1)
    tracker.close()
    return outcomes
