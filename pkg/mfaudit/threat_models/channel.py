"""
Adversarial channels.

A ChannelTap records every message it sees. Depending on the adversary's
channel access it may also drop messages, replace them, or hand them to a
relay function that rewrites them on the fly.

"""

import logging
from dataclasses import dataclass
from typing import Optional

from ..protocols.session import Channel
from .adversary import EAVESDROP, FULL_MITM, INTERCEPT_INJECT

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TapEvent:
    """What the tap did with one message."""

    index: int
    action: str
    message: object

    def __str__(self):
        return f"message {self.index}: {self.action}"


class ChannelTap(Channel):
    """
    A channel under the adversary's control.

    Parameters
    ----------
    access: str
        "eavesdrop", "intercept-inject" or "full-mitm".
    relay: callable, optional
        Called with every message when access is "full-mitm"; returns the
        message to deliver, or None to drop it.

    """

    def __init__(self, access=EAVESDROP, relay=None):
        if relay is not None and access != FULL_MITM:
            raise ValueError("Relaying messages needs full-mitm access.")
        self.access = access
        self.relay = relay
        self.log = []
        self._injected = {}
        self._dropped = set()

    @property
    def seen(self):
        """Messages as the senders sent them."""
        return [event.message for event in self.log if event.action == "seen"]

    def inject(self, index, message=None, **values):
        """
        Replace message `index` by `message`, or change some of its values.

        """
        assert self.access in (INTERCEPT_INJECT, FULL_MITM), (
            f"{self.access} access cannot inject messages."
        )
        self._injected[index] = message if message is not None else values
        return self

    def drop(self, index):
        assert self.access in (INTERCEPT_INJECT, FULL_MITM), (
            f"{self.access} access cannot drop messages."
        )
        self._dropped.add(index)
        return self

    def deliver(self, message):
        self.log.append(TapEvent(message.index, "seen", message))
        delivered: Optional[object] = message
        if message.index in self._dropped:
            delivered = None
        elif message.index in self._injected:
            injected = self._injected[message.index]
            if isinstance(injected, dict):
                delivered = message.with_values(**injected)
            else:
                delivered = injected
        elif self.relay is not None:
            delivered = self.relay(message)
        if delivered is None:
            self.log.append(TapEvent(message.index, "dropped", None))
        elif delivered is not message:
            self.log.append(TapEvent(message.index, "replaced", delivered))
        logger.debug("Tap on message %d: %s.", message.index, self.log[-1].action)
        return delivered


def observe(transcript):
    """
    What a passive adversary learns from a session: plain values by name,
    opaque values under `~name`.

    """
    return transcript.observed()
