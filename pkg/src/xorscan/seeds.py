"""Deterministic seed derivation for reproducible experiments.

All randomness in an experiment flows from a single integer master seed.
Substreams are derived by hashing, never by sharing generator state, so
results do not depend on evaluation order and can be reproduced from the
documented rule alone:

* ``stream_seed(master, name)`` gives a named top-level stream
  (``"cube-gen"``, ``"ga"``, ``"encode-fill"``).
* ``derived_seed(seed, *tokens)`` nests a derivation below an existing
  stream (per sweep point, per GA individual, ...).
* ``fill_word(seed, index, nbits)`` yields the ``nbits`` pseudo-random
  bits consumed when item ``index`` of a stream needs a random fill.

Every function is a pure SHA-256 construction over length-prefixed byte
tokens; an independent implementation of these three functions reproduces
every random decision this package makes from the same master seed.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _digest(*parts: bytes) -> bytes:
    h = hashlib.sha256()
    for part in parts:
        h.update(len(part).to_bytes(8, "little"))
        h.update(part)
    return h.digest()


def _token_bytes(token: bytes | str | int) -> bytes:
    if isinstance(token, bytes):
        return token
    if isinstance(token, str):
        return token.encode("utf-8")
    return str(int(token)).encode("ascii")


def stream_seed(master_seed: int, name: str) -> int:
    """Seed of the named substream of ``master_seed``."""
    return int.from_bytes(_digest(_token_bytes(master_seed), _token_bytes(name))[:8], "little")


def derived_seed(seed: int, *tokens: bytes | str | int) -> int:
    """Seed derived from ``seed`` and any number of distinguishing tokens."""
    return int.from_bytes(
        _digest(_token_bytes(seed), *(_token_bytes(t) for t in tokens))[:8], "little"
    )


def fill_word(seed: int, index: int, nbits: int) -> int:
    """``nbits`` deterministic pseudo-random bits for item ``index`` of a stream.

    Packed little-endian: bit ``j`` of the result is bit ``j`` of the word.
    """
    if nbits <= 0:
        return 0
    seed &= _MASK64
    nbytes = (nbits + 7) // 8
    chunks = []
    block = 0
    while 32 * block < nbytes:
        chunks.append(
            _digest(
                b"fill",
                seed.to_bytes(8, "little"),
                int(index).to_bytes(8, "little", signed=False),
                block.to_bytes(8, "little"),
            )
        )
        block += 1
    word = int.from_bytes(b"".join(chunks)[:nbytes], "little")
    return word & ((1 << nbits) - 1)


def fill_base(rng: int | np.random.Generator) -> int:
    """Normalize a seed-or-generator argument to a 64-bit fill stream seed.

    Integers are used as-is (mod 2**64); a generator contributes 8 bytes of
    its output, so passing the same freshly seeded generator twice yields
    the same base.
    """
    if isinstance(rng, (int, np.integer)):
        return int(rng) & _MASK64
    return int.from_bytes(rng.bytes(8), "little")


def as_generator(rng: int | np.random.Generator) -> np.random.Generator:
    """Normalize a seed-or-generator argument to a numpy ``Generator``."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(int(rng))
