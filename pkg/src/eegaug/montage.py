"""Electrode montages: names, head-frame geometry, left/right pairing.

Head frame follows the common convention: X runs from the left to the right
ear, Y from the back of the head to the nose, Z upward.  All positions are
normalized to the unit sphere on load.

Pairing is derived from 10-20 channel names, not geometry: an odd terminal
digit marks a left-hemisphere site that pairs with the same prefix and
digit + 1 (C3 <-> C4), and a ``z`` suffix marks the midline.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import DataError, MissingPositionsError, PairingError

_NAME_RE = re.compile(r"^(?P<prefix>.*?)(?P<suffix>\d+|[zZ])$")


@dataclass(frozen=True)
class Montage:
    """Channel names plus optional unit-sphere positions.

    Parameters
    ----------
    names : tuple of str
        Channel labels, 10-20 convention.
    positions : ndarray of shape (C, 3) | None
        Unit vectors in the head frame, or None when geometry is unknown.
    """

    names: tuple
    positions: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(str(n) for n in self.names))
        if len(set(self.names)) != len(self.names):
            raise DataError("montage has duplicate channel names")
        if self.positions is not None:
            pos = np.asarray(self.positions, dtype=np.float64)
            if pos.shape != (len(self.names), 3):
                raise DataError(
                    f"positions shape {pos.shape} does not match "
                    f"{len(self.names)} channels"
                )
            norms = np.linalg.norm(pos, axis=1)
            if np.any(norms <= 0) or not np.all(np.isfinite(pos)):
                raise DataError("montage positions must be finite and nonzero")
            pos = pos / norms[:, None]
            pos.setflags(write=False)
            object.__setattr__(self, "positions", pos)

    @property
    def n_channels(self) -> int:
        return len(self.names)

    @property
    def pairs(self):
        """Left/right index pairs derived from the names."""
        return symmetric_pairs(self)

    @property
    def midline(self):
        """Indices of unpaired midline channels."""
        return _classify_names(self.names)[1]

    def require_positions(self) -> np.ndarray:
        """Positions, filled in from the built-in table when possible."""
        if self.positions is not None:
            return self.positions
        table = _builtin_table()
        try:
            pos = np.array([table[name] for name in self.names])
        except KeyError as exc:
            raise MissingPositionsError(
                f"montage has no positions and channel {exc.args[0]!r} is not "
                "in the built-in 10-20 table"
            ) from None
        return pos

    def subset(self, indices) -> "Montage":
        idx = list(indices)
        pos = None if self.positions is None else self.positions[idx]
        return Montage(tuple(self.names[i] for i in idx), pos)


def _classify_names(names):
    """Split channel names into symmetric pairs and midline indices."""
    by_key = {}
    midline = []
    orphans = []
    for i, name in enumerate(names):
        match = _NAME_RE.match(name)
        if match is None:
            orphans.append(name)
            continue
        suffix = match.group("suffix")
        if suffix in ("z", "Z"):
            midline.append(i)
        else:
            by_key[(match.group("prefix"), int(suffix))] = i
    pairs = []
    seen = set()
    for (prefix, digit), i in sorted(by_key.items(), key=lambda kv: kv[1]):
        if i in seen:
            continue
        if digit % 2 == 1:
            partner = by_key.get((prefix, digit + 1))
        else:
            partner = by_key.get((prefix, digit - 1))
        if partner is None:
            orphans.append(names[i])
            continue
        seen.add(i)
        seen.add(partner)
        if digit % 2 == 1:
            pairs.append((i, partner))
        else:
            pairs.append((partner, i))
    if orphans:
        raise PairingError(
            "channels without a left/right partner: " + ", ".join(sorted(set(orphans)))
        )
    pairs.sort(key=lambda p: min(p))
    return pairs, midline


def symmetric_pairs(montage: Montage):
    """Return (left_index, right_index) pairs for a 10-20 montage.

    Raises
    ------
    PairingError
        If any name has no partner of the opposite parity, or does not
        follow the digit/``z`` suffix convention.
    """
    return _classify_names(montage.names)[0]


def symmetry_permutation(montage: Montage) -> np.ndarray:
    """Row permutation swapping each left channel with its right partner."""
    pairs, _ = _classify_names(montage.names)
    perm = np.arange(montage.n_channels)
    for left, right in pairs:
        perm[left] = right
        perm[right] = left
    return perm


@lru_cache(maxsize=1)
def _builtin_table():
    text = resources.files("eegaug.data").joinpath("standard_1020.csv").read_text()
    table = {}
    for row in csv.DictReader(io.StringIO(text)):
        p = np.array([float(row["x"]), float(row["y"]), float(row["z"])])
        table[row["name"]] = p / np.linalg.norm(p)
    return table


def builtin_channel_names():
    """Names in the built-in table, in canonical (pair-adjacent) order."""
    return tuple(_builtin_table().keys())


def builtin_montage(n_channels: int | None = None, names=None) -> Montage:
    """Montage from the built-in 10-20 table.

    Pass either ``n_channels`` (first channels of the canonical ordering,
    which keeps left/right pairs adjacent) or an explicit list of ``names``.
    """
    table = _builtin_table()
    if names is None:
        all_names = builtin_channel_names()
        if n_channels is None:
            names = all_names
        else:
            if n_channels > len(all_names):
                raise DataError(
                    f"built-in table has {len(all_names)} electrodes, "
                    f"{n_channels} requested"
                )
            names = all_names[:n_channels]
    missing = [n for n in names if n not in table]
    if missing:
        raise DataError(f"not in built-in table: {', '.join(missing)}")
    return Montage(tuple(names), np.array([table[n] for n in names]))


def montage_from_csv(path) -> Montage:
    """Load a ``name,x,y,z`` CSV; positions are normalized to the sphere."""
    names = []
    positions = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            names.append(row["name"])
            positions.append([float(row["x"]), float(row["y"]), float(row["z"])])
    return Montage(tuple(names), np.array(positions))
