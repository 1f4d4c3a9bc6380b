"""Random stream derivation.

Every random draw in a run comes from a stream keyed by
``(seed, entity kind, entity id, epoch, phase)``. Streams are independent of
one another and of evaluation order, so per-habitat work can run on any number
of workers without changing results.
"""

import hashlib
import random


def stream(seed: int, kind: str, entity: int, epoch: int, phase: str) -> random.Random:
    key = f"{seed}|{kind}|{entity}|{epoch}|{phase}".encode()
    digest = hashlib.blake2b(key, digest_size=16).digest()
    return random.Random(int.from_bytes(digest, "big"))
