"""Counter-based random streams for order-independent reproducibility.

Every stochastic draw in this package flows through :class:`RngStream`, a
small value type addressed by ``(seed, window_index, epoch)``.  Streams are
cheap to derive, advance an explicit draw counter, and never share state, so
a batch processed window-by-window yields the same numbers no matter how the
windows are scheduled across threads.

The mixing function is frozen and must never change between versions, or
previously recorded runs stop being reproducible.  It is the SplitMix64
generator:

* ``finalize(z)``: ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
  z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`` (mod 2**64).
* stream key: ``k = finalize(seed + PHI)``, then
  ``k = finalize(k ^ (window_index + 0xC2B2AE3D27D4EB4F))``, then
  ``k = finalize(k ^ (epoch + 0x165667B19E3779F9))`` with
  ``PHI = 0x9E3779B97F4A7C15``.
* draw ``c`` (zero-based counter): ``finalize(key + (c + 1) * PHI)``.
* uniform in ``[0, 1)``: top 53 bits, ``(draw >> 11) * 2.0**-53``.
* standard normal ``i`` consumes uniforms ``2i`` and ``2i + 1`` of its batch
  (block layout: a batch of ``n`` normals draws ``2n`` uniforms, first all
  ``u1`` then all ``u2``) via Box-Muller,
  ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_PHI = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_FOLD_INDEX = 0xC2B2AE3D27D4EB4F
_FOLD_EPOCH = 0x165667B19E3779F9


def _finalize_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _finalize_array(z: np.ndarray) -> np.ndarray:
    # uint64 arithmetic wraps modulo 2**64, which is exactly what we want
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MIX1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def derive_key(seed: int, window_index: int, epoch: int = 0) -> int:
    """Return the 64-bit stream key for ``(seed, window_index, epoch)``.

    Useful to spawn child seeds (e.g. one seed per cross-validation cell)
    that are decorrelated from each other and from the parent.
    """
    k = _finalize_int((seed + _PHI) & _MASK)
    k = _finalize_int(k ^ ((window_index + _FOLD_INDEX) & _MASK))
    k = _finalize_int(k ^ ((epoch + _FOLD_EPOCH) & _MASK))
    return k


@dataclass
class RngStream:
    """Deterministic stream of uniform / normal draws.

    Drawing ``k`` values advances ``counter`` by the number of uniforms
    consumed, so the sequence depends only on ``(seed, window_index,
    epoch)`` and on how many values were drawn before, never on thread
    scheduling.
    """

    seed: int
    window_index: int
    epoch: int = 0
    counter: int = 0
    _key: int = field(init=False, repr=False)

    def __post_init__(self):
        self._key = derive_key(self.seed, self.window_index, self.epoch)

    def _raw(self, n: int) -> np.ndarray:
        start = self.counter + 1
        c = np.arange(start, start + n, dtype=np.uint64)
        self.counter += n
        state = np.uint64(self._key & _MASK) + c * np.uint64(_PHI)
        return _finalize_array(state)

    def uniform(self, size=None):
        """Uniform draws in ``[0, 1)``; scalar when ``size`` is None."""
        if size is None:
            return float((int(self._raw(1)[0]) >> 11) * 2.0 ** -53)
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape)) if shape else 1
        u = (self._raw(n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
        return u.reshape(shape)

    def normal(self, size=None):
        """Standard normal draws; scalar when ``size`` is None."""
        if size is None:
            return float(self.normal(1)[0])
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape)) if shape else 1
        u = self.uniform(2 * n)
        z = np.sqrt(-2.0 * np.log1p(-u[:n])) * np.cos(2.0 * np.pi * u[n:])
        return z.reshape(shape)

    def integer(self, upper: int) -> int:
        """Uniform integer in ``[0, upper)`` for shuffling."""
        return min(int(self.uniform() * upper), upper - 1)


def derive_stream(seed: int, window_index: int, epoch: int = 0) -> RngStream:
    """Stream addressed by ``(seed, window_index, epoch)``, counter at 0."""
    return RngStream(seed=seed, window_index=window_index, epoch=epoch)
