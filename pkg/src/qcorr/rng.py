"""Seeded randomness with named substreams.

Every randomized operation in the package draws from a `RandomSource`
substream identified by a name plus optional integer indices.  Substream
seeds are derived by hashing, so the draw sequence for a given
(seed, name, indices) triple is identical on every platform and does not
depend on how work is scheduled across threads.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


def derive_child_seed(seed: int, name: str, *indices: int) -> int:
    """Deterministic 64-bit child seed for a named substream."""
    h = hashlib.blake2b(digest_size=8)
    h.update(int(seed).to_bytes(8, "little", signed=False))
    h.update(name.encode("utf-8"))
    for ix in indices:
        h.update(b"\x00")
        h.update(int(ix).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class RandomSource:
    """A 64-bit master seed from which all substreams are derived."""

    seed: int

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")

    def child_seed(self, name: str, *indices: int) -> int:
        return derive_child_seed(self.seed, name, *indices)

    def generator(self, name: str, *indices: int) -> np.random.Generator:
        """Fresh PCG64 generator for the named substream."""
        return generator_from_seed(self.child_seed(name, *indices))


def generator_from_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def haar_unitary(d: int, gen: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary (QR of a complex Ginibre matrix).

    The QR phase ambiguity is fixed by making the diagonal of R real
    positive, which is what makes the distribution exactly Haar.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    z = (gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return q * ph[np.newaxis, :]


def haar_isometry(d_in: int, d_out: int, gen: np.random.Generator) -> np.ndarray:
    """First d_in columns of a Haar unitary on d_out dimensions."""
    if d_out < d_in:
        raise ValueError("d_out must be >= d_in")
    return haar_unitary(d_out, gen)[:, :d_in]


def haar_state_vector(dim: int, gen: np.random.Generator) -> np.ndarray:
    """Normalized vector of iid standard complex Gaussians (Haar on the sphere)."""
    v = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
    return v / np.linalg.norm(v)
