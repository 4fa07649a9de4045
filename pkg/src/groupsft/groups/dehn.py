"""Dehn's algorithm for one-relator presentations with metric small cancellation C'(1/6)."""

from __future__ import annotations

from functools import lru_cache

from ..errors import PreconditionViolated, SmallCancellationViolated
from ..presentations import Presentation
from ..words import Letter, Word, _free_reduce, cyclic_reduce


def _symmetrized(r: Word) -> list[tuple[Letter, ...]]:
    out: list[tuple[Letter, ...]] = []
    for w in (r, r.inverse()):
        x = w.letters
        for i in range(len(x)):
            rot = x[i:] + x[:i]
            if rot not in out:
                out.append(rot)
    return out


def _is_proper_power(r: Word) -> bool:
    x = r.letters
    n = len(x)
    return any(n % d == 0 and x == x[:d] * (n // d) for d in range(1, n))


def find_long_piece(r: Word) -> Word | None:
    """A piece of length >= |r|/6 in the symmetrized closure of ``r``, if any."""
    rs = _symmetrized(r)
    n = len(r)
    for i, u in enumerate(rs):
        for v in rs[i + 1 :]:
            m = 0
            while m < n and u[m] == v[m]:
                m += 1
            if 6 * m >= n:
                return Word(u[:m])
    return None


@lru_cache(maxsize=64)
def _rules(r: Word) -> tuple[dict[tuple[Letter, ...], tuple[Letter, ...]], tuple[int, ...]]:
    n = len(r)
    rules: dict[tuple[Letter, ...], tuple[Letter, ...]] = {}
    for rot in _symmetrized(r):
        for m in range(n // 2 + 1, n + 1):
            rest = rot[m:]
            rules.setdefault(rot[:m], tuple(Letter(x.gen, -x.sign) for x in reversed(rest)))
    return rules, tuple(range(n, n // 2, -1))


def check_small_cancellation(p: Presentation) -> Word:
    """Return the cyclically reduced relator, or raise if C'(1/6) fails."""
    if len(p.relators) != 1:
        raise PreconditionViolated("Dehn backend supports one-relator presentations only")
    r = cyclic_reduce(p.relators[0])[0]
    if not r:
        raise PreconditionViolated("relator is trivial")
    if _is_proper_power(r):
        raise SmallCancellationViolated(r, len(r) / 6)
    piece = find_long_piece(r)
    if piece is not None:
        raise SmallCancellationViolated(piece, len(r) / 6)
    return r


def _dehn(r: Word, w: Word) -> Word:
    rules, lengths = _rules(r)
    x = w.reduced().letters
    changed = True
    while changed:
        changed = False
        for i in range(len(x)):
            for m in lengths:
                if i + m > len(x):
                    continue
                rep = rules.get(x[i : i + m])
                if rep is not None:
                    x = _free_reduce(x[:i] + rep + x[i + m :])
                    changed = True
                    break
            if changed:
                break
    return Word(x)


def dehn_reduce(p: Presentation, w: Word) -> Word:
    """Apply Dehn's algorithm; the result is empty iff ``w`` is trivial in ``p``."""
    r = check_small_cancellation(p)
    return _dehn(r, w)
