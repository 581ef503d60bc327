"""Modular arithmetic helpers and the immutable permutation type.

A :class:`Perm` is a bijection of ``Z_n`` stored as its image sequence:
entry ``x`` is ``pi(x)``.  Two interchange formats are supported, a
two-line text format::

    n=9
    0 1 8 3 2 6 4 7 5

and a JSON document ``{"n": 9, "perm": [0, 1, 8, ...]}``.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np

# Images are stored as int64; moduli above this bound would overflow the
# O(n^2) verifiers' intermediate sums.
MAX_MODULUS = 2**31 - 1


class PermError(ValueError):
    """Raised for malformed permutation data."""


def centered(x: int, n: int) -> int:
    """Representative of ``x mod n`` in the half-open interval (-n/2, n/2]."""
    r = x % n
    if 2 * r > n:
        r -= n
    return r


def centered_array(x: np.ndarray, n: int) -> np.ndarray:
    r = np.mod(x, n)
    return np.where(2 * r > n, r - n, r)


def mod_inv(x: int, n: int) -> int:
    """Inverse of ``x`` modulo ``n``.

    Raises ValueError (quoting the gcd) when ``x`` is not a unit.
    """
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    g = math.gcd(x, n)
    if g != 1:
        raise ValueError(f"{x} is not invertible modulo {n} (gcd = {g})")
    if n == 1:
        return 0
    return pow(x, -1, n)


class Perm:
    """Immutable permutation of ``Z_n``."""

    __slots__ = ("_images",)

    def __init__(self, images: Iterable[int]):
        arr = np.array(list(images) if not isinstance(images, np.ndarray) else images,
                       dtype=np.int64).ravel()
        _check_bijection(arr)
        arr.flags.writeable = False
        self._images = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "Perm":
        """Wrap an array already known to be a bijection (no O(n) check)."""
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.flags.writeable = False
        obj._images = arr
        return obj

    @classmethod
    def identity(cls, n: int) -> "Perm":
        if n < 1:
            raise PermError("modulus must be >= 1")
        return cls._trusted(np.arange(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self._images.shape[0])

    modulus = n

    @property
    def images(self) -> np.ndarray:
        """Read-only int64 image array."""
        return self._images

    def __len__(self) -> int:
        return self.n

    def __call__(self, x: int) -> int:
        return int(self._images[x % self.n])

    def __getitem__(self, x):
        return self._images[x]

    def __iter__(self):
        return iter(self.tolist())

    def tolist(self) -> list[int]:
        return self._images.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Perm):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._images, other._images))

    def __hash__(self) -> int:
        return hash(self._images.tobytes())

    def __repr__(self) -> str:
        if self.n <= 20:
            return f"Perm({tuple(self.tolist())})"
        head = " ".join(map(str, self._images[:8].tolist()))
        return f"Perm(n={self.n}: {head} ...)"

    def inverse(self) -> "Perm":
        return perm_inverse(self)

    def compose(self, other: "Perm") -> "Perm":
        """``self o other``: x -> self(other(x))."""
        if other.n != self.n:
            raise PermError(f"modulus mismatch: {self.n} vs {other.n}")
        return Perm._trusted(self._images[other._images])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._images, np.arange(self.n)))


def _check_bijection(arr: np.ndarray) -> None:
    n = arr.shape[0]
    if n < 1:
        raise PermError("empty image sequence")
    if n > MAX_MODULUS:
        raise PermError(f"modulus {n} exceeds supported bound {MAX_MODULUS}")
    bad = np.flatnonzero((arr < 0) | (arr >= n))
    if bad.size:
        i = int(bad[0])
        raise PermError(f"image {int(arr[i])} at index {i} out of range [0, {n})")
    seen = np.full(n, -1, dtype=np.int64)
    # first occurrence wins; a later index with the same image is the duplicate
    order = np.arange(n, dtype=np.int64)
    seen[arr[::-1]] = order[::-1]
    dup = np.flatnonzero(seen[arr] != order)
    if dup.size:
        i = int(dup[0])
        raise PermError(f"duplicate image {int(arr[i])} at index {i}")


def make_perm(images: Sequence[int]) -> Perm:
    """Validate an image sequence and wrap it as a :class:`Perm`."""
    return Perm(images)


def perm_inverse(p: Perm) -> Perm:
    inv = np.empty(p.n, dtype=np.int64)
    inv[p.images] = np.arange(p.n, dtype=np.int64)
    return Perm._trusted(inv)


def scale_mod(p: Perm, factor: int) -> np.ndarray:
    return (p.images * factor) % p.n


# ---------------------------------------------------------------------------
# Serialization


def to_text(p: Perm) -> str:
    return f"n={p.n}\n" + " ".join(map(str, p.tolist())) + "\n"


def from_text(text: str) -> Perm:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != 2 or not lines[0].startswith("n="):
        raise PermError("expected two lines: 'n=<modulus>' and the images")
    try:
        n = int(lines[0][2:])
        images = [int(tok) for tok in lines[1].split(" ")] if lines[1] else []
    except ValueError as exc:
        raise PermError(f"malformed permutation text: {exc}") from None
    if len(images) != n:
        raise PermError(f"header says n={n} but {len(images)} images given")
    return Perm(images)


def to_json(p: Perm) -> str:
    return json.dumps({"n": p.n, "perm": p.tolist()})


def from_json(text: str) -> Perm:
    try:
        doc = json.loads(text)
        n = int(doc["n"])
        images = [int(v) for v in doc["perm"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise PermError(f"malformed permutation JSON: {exc}") from None
    if len(images) != n:
        raise PermError(f"'n' is {n} but {len(images)} images given")
    return Perm(images)


def loads(text: str) -> Perm:
    """Parse either interchange format, sniffing on the first character."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_text(text)


def load(path) -> Perm:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return loads(fh.read())


def dump(p: Perm, path, fmt: str = "text") -> None:
    data = to_json(p) + "\n" if fmt == "json" else to_text(p)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(data)
