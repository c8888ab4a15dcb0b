"""Speech-act messages and per-pair FIFO channels.

A message names its sender, receiver, performative, the action the
receiver should apply, and the parameter tokens for it.  Channels are
keyed by the ordered (sender, receiver) pair; each keeps FIFO order and
a strictly increasing sequence number.  ``ChannelSet`` is a value:
``send`` and ``receive`` return new sets instead of mutating.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

REQUEST = "request"
INFORM = "inform"
ORDER = "order"
WISH = "wish"
PERFORMATIVES = (REQUEST, INFORM, ORDER, WISH)


class SelfSend(Exception):
    """Raised when an agent addresses a message to itself."""


class BadPerformative(Exception):
    """Raised for a performative outside the closed vocabulary."""


class BackpressureExceeded(Exception):
    """Raised when a bounded channel is asked to hold one message too many."""


@dataclass(frozen=True)
class Message:
    sender: str
    receiver: str
    performative: str
    action: str
    params: tuple = ()
    seq: int = 0

    def __post_init__(self):
        if self.sender == self.receiver:
            raise SelfSend("message from %r to itself" % self.sender)
        if self.performative not in PERFORMATIVES:
            raise BadPerformative("unknown performative %r" % self.performative)
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def channel(self) -> tuple[str, str]:
        return (self.sender, self.receiver)


class ChannelSet:
    """All channels of a society as one immutable value.

    ``bound`` limits the depth of every queue; the default is unbounded,
    as the model has no flow control.
    """

    def __init__(self, queues=None, counters=None, bound=None):
        self._queues = {k: tuple(v) for k, v in (queues or {}).items() if v}
        self._counters = dict(counters or {})
        self.bound = bound

    def queue(self, channel) -> tuple[Message, ...]:
        return self._queues.get(channel, ())

    def queues(self) -> dict:
        return dict(self._queues)

    def depths(self) -> dict:
        return {k: len(v) for k, v in self._queues.items()}

    @property
    def empty(self) -> bool:
        return not self._queues

    def pending(self) -> int:
        return sum(len(v) for v in self._queues.values())

    def send(self, msg: Message) -> "ChannelSet":
        """New set with the message appended, carrying the next seq."""
        key = msg.channel
        queue = self._queues.get(key, ())
        if self.bound is not None and len(queue) >= self.bound:
            raise BackpressureExceeded(
                "channel %s->%s is full at %d messages" % (key[0], key[1], self.bound))
        seq = self._counters.get(key, 0) + 1
        queues = dict(self._queues)
        queues[key] = queue + (replace(msg, seq=seq),)
        counters = dict(self._counters)
        counters[key] = seq
        return ChannelSet(queues, counters, self.bound)

    def receive(self, receiver, action, sender=None):
        """(message, new set) when a matching head exists, else (None, self).

        Only the head of a queue is eligible; a non-matching head blocks
        its channel.  With ``sender`` given only that channel is read,
        otherwise the first matching channel in key order is used.
        """
        if sender is not None:
            keys = [(sender, receiver)]
        else:
            keys = sorted(k for k in self._queues if k[1] == receiver)
        for key in keys:
            queue = self._queues.get(key, ())
            if queue and queue[0].action == action:
                queues = dict(self._queues)
                queues[key] = queue[1:]
                return queue[0], ChannelSet(queues, self._counters, self.bound)
        return None, self

    def __repr__(self):
        inner = ", ".join("%s->%s:%d" % (k[0], k[1], len(v))
                          for k, v in sorted(self._queues.items()))
        return "ChannelSet{%s}" % inner
