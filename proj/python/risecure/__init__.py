"""Python front end for the risecure simulator core."""

import json

from . import _risecure
from ._risecure import ReconstructFailure, RisecureError, sha2_256, sha3_256

__all__ = [
    "ReconstructFailure",
    "RisecureError",
    "attack",
    "bench",
    "enroll",
    "new_system",
    "sample",
    "selftest",
    "sha2_256",
    "sha3_256",
]


def _dump(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def new_system(kind="sram", code="bch", seed=0, flip_prob=None, capacity=16, hash="sha3-256"):
    fp = -1.0 if flip_prob is None else float(flip_prob)
    return json.loads(_risecure.new_system(kind, code, seed, fp, capacity, hash))


def enroll(system, challenge, seed=0):
    return json.loads(_risecure.enroll(_dump(system), challenge, seed))


def sample(system, challenge, mode="hashed", helper=None, outer=None, seed=0):
    h = None if helper is None else _dump(helper)
    return _risecure.sample(_dump(system), challenge, mode, h, outer, seed)


def attack(train=10000, test=2000, epochs=500, lr=2.0, stages=64, seed=0):
    return json.loads(_risecure.attack(train, test, epochs, lr, stages, seed))


def bench(system, batches=(1, 2, 4, 8, 16), repeats=5):
    return json.loads(_risecure.bench(_dump(system), list(batches), repeats))


def selftest(seed=0):
    return [{"name": n, "passed": p, "detail": d} for n, p, d in _risecure.selftest(seed)]
