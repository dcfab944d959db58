"""Deterministic 64-bit RNG with numbered substreams.

The generator is xoshiro256** seeded through splitmix64, chosen over the
stdlib Mersenne Twister because its state and update rule are small enough
to reimplement exactly in a compiled kernel: the pure and compiled sampling
lanes must consume identical bit streams so results are reproducible across
both. ``RNG_ALGORITHM`` names the full scheme and is embedded in sampling
reports.

Substream rule: a master seed feeds one splitmix64 sequence, and stream i
takes words 4i..4i+3 of that sequence as its 256-bit xoshiro state. Streams
are therefore indexable in any order and do not overlap in seeding.

Bounded draws use threshold rejection: for n >= 2, draw 64-bit words until
one falls below ``(2**64 // n) * n`` and reduce mod n, which is exactly
uniform. ``bounded(1)`` returns 0 without consuming a word, so the word
stream position depends only on draws with n >= 2.
"""

from __future__ import annotations

from .errors import DomainError

__all__ = ["RNG_ALGORITHM", "splitmix64_next", "Xoshiro256StarStar", "derive_stream_state"]

RNG_ALGORITHM = "xoshiro256** (splitmix64-seeded, 4-word substreams)"

_MASK64 = (1 << 64) - 1


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; return (new_state, output_word)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, (z ^ (z >> 31)) & _MASK64


def derive_stream_state(seed: int, stream: int) -> tuple[int, int, int, int]:
    """256-bit xoshiro state for substream ``stream`` of ``seed``.

    Words 4*stream .. 4*stream+3 of the splitmix64 sequence started at the
    seed. An all-zero state (never observed for splitmix64 output, but the
    generator would stick there) is replaced by a fixed nonzero word.
    """
    if not 0 <= seed <= _MASK64:
        raise DomainError(f"seed must fit in 64 bits, got {seed}")
    if stream < 0:
        raise DomainError(f"stream must be nonnegative, got {stream}")
    state = seed
    words = []
    for _ in range(4 * stream + 4):
        state, word = splitmix64_next(state)
        words.append(word)
    s = tuple(words[4 * stream : 4 * stream + 4])
    if s == (0, 0, 0, 0):
        s = (0x9E3779B97F4A7C15, 0, 0, 0)
    return s


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** generator over one substream of a master seed."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int, stream: int = 0) -> None:
        self._s0, self._s1, self._s2, self._s3 = derive_stream_state(seed, stream)

    def next_word(self) -> int:
        """Next raw 64-bit output word."""
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def bounded(self, n: int) -> int:
        """Uniform integer in [0, n) by threshold rejection; n=1 is free."""
        if n <= 0:
            raise DomainError(f"n must be positive, got {n}")
        if n == 1:
            return 0
        threshold = ((1 << 64) // n) * n
        while True:
            x = self.next_word()
            if x < threshold:
                return x % n

    def state(self) -> tuple[int, int, int, int]:
        """Current 256-bit state, for lane-equivalence checks."""
        return (self._s0, self._s1, self._s2, self._s3)
