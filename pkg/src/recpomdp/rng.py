"""Counter-based uniform random streams.

Each draw applies the splitmix64 finalizer to a per-stream base plus the draw
counter, so the i-th draw of a stream is a pure function of (seed, stream_id,
i). Streams share no state: concurrent runs with distinct stream ids are
reproducible regardless of scheduling, and a stream can be re-created at any
counter position. The compiled kernels implement the identical arithmetic and
therefore produce bit-identical draw sequences.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53, exact


def _finalize(z: int) -> int:
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_base(seed: int, stream_id: int) -> int:
    """Mix (seed, stream_id) into the 64-bit base of a draw stream."""
    z = ((seed & _MASK) * 0xA0761D6478BD642F + (stream_id & _MASK) * 0xE7037ED1A0B428DB) & _MASK
    return _finalize(z ^ 0x8EBC6AF09C88C6E3)


def uniform_at(base: int, counter: int) -> float:
    """Uniform draw in [0, 1) for a given stream base and draw index."""
    z = (base + ((counter + 1) * _GAMMA)) & _MASK
    return (_finalize(z) >> 11) * _INV_2_53


class RngStream:
    """Deterministic stream of uniforms keyed by (seed, stream_id).

    Mutable only through its draw counter; every other simulation type is an
    immutable value. Use one stream per simulation run.
    """

    __slots__ = ("seed", "stream_id", "_base", "_counter")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._base = stream_base(self.seed, self.stream_id)
        self._counter = 0

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, draws={self._counter})"

    @property
    def base(self) -> int:
        return self._base

    @property
    def counter(self) -> int:
        return self._counter

    def uniform(self) -> float:
        u = uniform_at(self._base, self._counter)
        self._counter += 1
        return u

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p

    def advance(self, n: int) -> None:
        """Skip n draws (used after a kernel consumed them internally)."""
        if n < 0:
            raise ValueError("cannot rewind a stream")
        self._counter += int(n)

    def clone(self) -> "RngStream":
        dup = RngStream(self.seed, self.stream_id)
        dup._counter = self._counter
        return dup
