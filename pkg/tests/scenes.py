"""Seeded generic configurations shared by the model tests."""

from bc1lab.config import RunConfig
from bc1lab.rng import draw, stream
from bc1lab.suites import scene_sampler


def scenes(name: str, count: int, tau=1j):
    cfg = RunConfig(tau=tau)
    values, _ = draw(stream(11, name), scene_sampler(cfg.torus), lambda s: s, count)
    return values
