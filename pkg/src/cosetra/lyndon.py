"""Lyndon algebras of finite lines.

Atom 0 is the identity ``1'`` and atoms ``1..n`` are the points of the line.
Every atom is its own converse; for points ``p != q``::

    p;q = all points except p and q
    p;p = p + 1'

The table is associative only for ``n == 1`` and ``n >= 4``: for ``n == 3``
``(a;a);b = {b, c}`` while ``a;(a;b) = a;c = {b}``, and for ``n == 2``
``(p;p);q = q`` while ``p;(p;q) = 0``.
"""

from __future__ import annotations

from .algebra import AtomStructure, FiniteRelationAlgebra, mask


class InvalidSize(ValueError):
    pass


IDENTITY = 0


def point(i: int) -> int:
    """Atom id of the ``i``-th point (0-based)."""
    return i + 1


def lyndon_product(n: int, p: int, q: int) -> set[int]:
    if p == IDENTITY:
        return {q}
    if q == IDENTITY:
        return {p}
    if p == q:
        return {p, IDENTITY}
    return set(range(1, n + 1)) - {p, q}


def lyndon_algebra(n: int) -> FiniteRelationAlgebra:
    if n < 1:
        raise InvalidSize("a line needs at least one point")
    labels = ["1'"] + [f"p{i}" for i in range(n)]
    S = AtomStructure.from_products(
        n + 1, {IDENTITY}, list(range(n + 1)),
        lambda p, q: lyndon_product(n, p, q), labels)
    return FiniteRelationAlgebra(S)


def equivalence_elements(B: FiniteRelationAlgebra) -> list[int]:
    """``e_p = p + 1'`` for every point ``p``."""
    return [mask([p, IDENTITY]) for p in range(1, B.n)]
