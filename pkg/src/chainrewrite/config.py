from __future__ import annotations

import json
import os
import random
import secrets
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .algebra.groups import get_suite

PROFILE_ENV = "CHAINREWRITE_PROFILE"
PROFILES = ("mock", "toy", "production")


def default_profile() -> str:
    return os.environ.get(PROFILE_ENV, "mock")


@dataclass
class RunConfig:
    profile: str = "mock"
    k: int = 8
    n: int = 5
    t: int = 1
    t_max: int = 4  # commitment degree bound is 2 * t_max
    difficulty: int = 8
    seed: Optional[int] = None

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.t < 1 or 2 * self.t + 1 > self.n:
            raise ValueError("need 1 <= t and 2t+1 <= n")
        if self.t_max < self.t:
            raise ValueError("t_max must be at least t")
        if not 0 <= self.difficulty <= 255:
            raise ValueError("difficulty out of range")

    @property
    def suite(self):
        return get_suite(self.profile)

    def rng(self, salt: str = ""):
        if self.seed is None:
            return secrets.SystemRandom()
        return random.Random(f"{self.seed}:{salt}")

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls(**json.loads(Path(path).read_text()))
