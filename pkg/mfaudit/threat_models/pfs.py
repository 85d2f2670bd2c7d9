"""
The forward-secrecy experiment.

An eavesdropper records a target session. Once the session is over, every
long-term secret of both parties leaks (session ephemerals are erased when
the session ends). The experiment succeeds if the past session key can be
recomputed from the leaked material and the recorded transcript.

"""

import logging

import numpy as np

from ..deduction import derivable, replay
from ..errors import ExperimentOrderError, ReplayMismatch
from ..protocols.session import run_session
from ..protocols.symbolic import as_symbolic, concrete_values
from ..report.attack_summary import AttackOutcome
from .adversary import EAVESDROP, AdversaryModel
from .channel import ChannelTap
from .compromise import compromise

logger = logging.getLogger(__name__)

PFS_EXPERIMENT = "pfs"
PFS_CRITERIA = ("C5",)


class PfsExperiment:
    """
    One run of the forward-secrecy experiment on a deployment.

    The steps must be called in order: run_target, leak, attack.

    Parameters
    ----------
    deployment: DeploymentState
    adversary: AdversaryModel, optional
        Defaults to an eavesdropper; the long-term leak is always added.
    limits: ClosureLimits, optional
        Bounds on the derivation search.

    """

    def __init__(self, deployment, adversary=None, limits=None):
        adversary = adversary or AdversaryModel(channel=EAVESDROP, label="forward secrecy")
        self.deployment = deployment
        self.adversary = adversary.with_changes(longterm_leak=True)
        self.limits = limits
        self.transcript = None
        self.material = None

    def run_target(self, rng=None, session_index=0):
        """Record the target session."""
        self.transcript = run_session(
            self.deployment,
            channel=ChannelTap(EAVESDROP),
            rng=rng,
            session_index=session_index,
        )
        return self.transcript

    def leak(self):
        """
        Release every long-term secret.

        Raises
        ------
        ExperimentOrderError
            If the target session has not completed.

        """
        if self.transcript is None:
            raise ExperimentOrderError("The target session has not been run yet.")
        self.material = compromise(self.deployment, self.adversary)
        return self.material

    def attack(self):
        """
        Try to recompute the target session key.

        Returns
        -------
        AttackOutcome

        """
        if self.material is None:
            self.leak()
        model = self.deployment.model
        expected = {}
        if self.transcript.session_key is not None:
            expected[model.sk] = self.transcript.session_key
        kb, goal = as_symbolic(model, self.adversary, self.limits)
        trace = derivable(kb, goal, self.deployment.suite)
        recovered, findings = {}, []
        if trace is None:
            findings.append(f"{model.sk} is not derivable after the long-term leak")
        else:
            known = concrete_values(self.deployment, self.transcript, self.material)
            try:
                recovered[model.sk] = replay(trace, known, self.deployment.suite)
            except ReplayMismatch as err:
                findings.append(f"derivation does not replay: {err}")
        outcome = AttackOutcome(
            PFS_EXPERIMENT,
            model.id,
            recovered,
            expected,
            trace=trace,
            criteria=PFS_CRITERIA,
            findings=findings,
            seed=self.transcript.seed,
        )
        logger.debug("Forward secrecy of %s: %r.", model.id, outcome)
        return outcome


def pfs_experiment(deployment, adversary=None, rng=None, seed=None, limits=None):
    """
    Run the forward-secrecy experiment end to end.

    Returns
    -------
    AttackOutcome
        Successful when the past session key was recomputed.

    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    experiment = PfsExperiment(deployment, adversary, limits)
    experiment.run_target(rng)
    experiment.leak()
    return experiment.attack()
