"""Pattern-transport maps on permutations of Z_n.

If ``p`` destroys ``s -> t`` then

* ``x -> u * p(x)`` destroys ``s -> u t``            (``scale_output``),
* ``x -> v * p(u^-1 x)`` destroys ``u s -> v t``     (``scale_both``),
* ``p^-1`` destroys ``t -> s``                      (``perm_inverse``),
* ``x -> p(x) + c`` destroys ``s -> t``             (``fix_point_translate``).

Setting ``APDESTROY_DEBUG=1`` makes every transform re-verify the images of
the ``claims`` passed to it (see ``transported``).
"""

from __future__ import annotations

import math
import os
from typing import Iterable

import numpy as np

from .core import Perm, mod_inv, perm_inverse
from .verify import Pattern, check_patterns

DEBUG = os.environ.get("APDESTROY_DEBUG", "") not in ("", "0")


class TransportError(AssertionError):
    pass


def _require_unit(x: int, n: int, name: str) -> None:
    g = math.gcd(x, n)
    if g != 1:
        raise ValueError(f"{name} = {x} is not coprime to n = {n} (gcd = {g})")


# Each transform accepts the patterns ``claims`` known to be destroyed by its
# input; in debug mode the output is checked against their images.


def scale_output(p: Perm, t: int, claims: Iterable[Pattern] = ()) -> Perm:
    n = p.n
    _require_unit(t, n, "t")
    q = Perm._trusted((p.images * (t % n)) % n)
    return checked(q, transported(claims, 1, t))


def scale_both(p: Perm, s: int, t: int, claims: Iterable[Pattern] = ()) -> Perm:
    n = p.n
    _require_unit(s, n, "s")
    _require_unit(t, n, "t")
    s_inv = mod_inv(s % n, n)
    x = np.arange(n, dtype=np.int64)
    q = Perm._trusted((p.images[(x * s_inv) % n] * (t % n)) % n)
    return checked(q, transported(claims, s, t))


def fix_point_translate(p: Perm, q: int, claims: Iterable[Pattern] = ()) -> Perm:
    """``x -> p(x) + (q - p(q))``, which fixes ``q``."""
    n = p.n
    q %= n
    shift = q - p(q)
    return checked(Perm._trusted((p.images + shift) % n), claims)


def transported(pats: Iterable[Pattern], s: int = 1, t: int = 1, invert: bool = False) -> list[Pattern]:
    """Images of ``pats`` under ``scale_both(., s, t)`` then optional inversion."""
    out = [Pattern(s * p.s, t * p.t) for p in pats]
    if invert:
        out = [Pattern(p.t, p.s) for p in out]
    return out


def checked(q: Perm, pats: Iterable[Pattern], force: bool = False) -> Perm:
    """Return ``q`` after confirming it destroys ``pats`` (when debugging or forced)."""
    pats = list(pats)
    if pats and (DEBUG or force):
        cert = check_patterns(q, pats)
        if not cert.verdict:
            raise TransportError(f"transform output fails {cert.counterexample}")
    return q


__all__ = [
    "scale_output",
    "scale_both",
    "fix_point_translate",
    "perm_inverse",
    "transported",
    "checked",
    "TransportError",
]
