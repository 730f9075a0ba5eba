"""Synchronous in-memory message bus for the committee simulation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

BROADCAST = "*"


@dataclass(frozen=True)
class Message:
    round: int
    src: Any
    dst: Any
    kind: str
    payload: Any


Interceptor = Callable[[Message], Optional[Message]]


class Bus:
    """Round-based delivery.

    Messages queued with :meth:`send` are released by :meth:`deliver` in an
    order fixed by the scheduler seed. Interceptors see every message on the
    way out and may rewrite or drop it, which is how faults are injected.
    """

    def __init__(self, seed: int = 0, interceptors: Iterable[Interceptor] = ()):
        self._sched = random.Random(seed)
        self.interceptors = list(interceptors)
        self.round = 0
        self._queue: list[Message] = []
        self.log: list[Message] = []

    def send(self, src, dst, kind: str, payload) -> None:
        self._queue.append(Message(self.round, src, dst, kind, payload))

    def deliver(self, recipients: Iterable) -> dict:
        recipients = list(recipients)
        queue, self._queue = self._queue, []
        self._sched.shuffle(queue)
        inbox = {r: [] for r in recipients}
        for msg in queue:
            for f in self.interceptors:
                msg = f(msg)
                if msg is None:
                    break
            if msg is None:
                continue
            self.log.append(msg)
            targets = recipients if msg.dst == BROADCAST else [msg.dst]
            for r in targets:
                if r in inbox:
                    inbox[r].append(msg)
        self.round += 1
        return inbox


def tamper(kind: str, src, fn: Callable[[Any], Any], dst=None) -> Interceptor:
    """Interceptor applying ``fn`` to payloads of ``kind`` sent by ``src``."""

    def hook(msg: Message):
        if msg.kind == kind and msg.src == src and (dst is None or msg.dst == dst):
            return Message(msg.round, msg.src, msg.dst, msg.kind, fn(msg.payload))
        return msg

    return hook


def drop_from(src) -> Interceptor:
    return lambda msg: None if msg.src == src else msg
