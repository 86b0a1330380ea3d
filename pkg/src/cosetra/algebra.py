"""Finite atomic relation algebras given by their atom structure.

Elements are Python ints used as bit vectors over the atom ids.  The
composition of atoms is held twice: as a boolean tensor ``table[a, b, c]``
(``c`` is below ``a;b``) for the vectorized axiom scans, and as a nested
list of int masks for element arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from .groups import FiniteGroup
from .pair import GroupTriple, single_group_pair, make_triple, validate_triple
from .relations import AtomIndex, atom_converse, atom_shifted_compose, atoms_of
from .report import ConditionReport

RECORD_FORMAT = "cosetra-atoms/1"
MEASURE_CAP = 2**20


class InvalidTriple(ValueError):
    def __init__(self, report: ConditionReport):
        super().__init__(str(report))
        self.report = report


def bits(e: int) -> Iterator[int]:
    """Atom ids set in the bit vector ``e``, ascending."""
    i = 0
    while e:
        if e & 1:
            yield i
        e >>= 1
        i += 1


def mask(atoms: Iterable[int]) -> int:
    m = 0
    for a in atoms:
        m |= 1 << a
    return m


@dataclass(frozen=True, eq=False)
class AtomStructure:
    n: int
    identity_atoms: frozenset
    converse: tuple[int, ...]
    table: np.ndarray = field(repr=False)
    labels: tuple[str, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.table.shape != (self.n, self.n, self.n):
            raise ValueError("composition table must be n x n x n")
        if sorted(self.converse) != list(range(self.n)):
            raise ValueError("converse must be a permutation of the atoms")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"a{i}" for i in range(self.n)))
        self.table.setflags(write=False)

    @classmethod
    def from_products(
        cls,
        n: int,
        identity_atoms: Iterable[int],
        converse: Sequence[int],
        product: Callable[[int, int], Iterable[int]],
        labels: Sequence[str] = (),
    ) -> AtomStructure:
        table = np.zeros((n, n, n), dtype=bool)
        for a in range(n):
            for b in range(n):
                for c in product(a, b):
                    table[a, b, c] = True
        return cls(n, frozenset(identity_atoms), tuple(converse), table, tuple(labels))

    def compose(self, a: int, b: int) -> frozenset:
        return frozenset(np.flatnonzero(self.table[a, b]).tolist())

    @cached_property
    def masks(self) -> list[list[int]]:
        weights = [1 << c for c in range(self.n)]
        return [[sum(w for w, t in zip(weights, self.table[a, b]) if t) for b in range(self.n)]
                for a in range(self.n)]

    def to_record(self) -> dict[str, Any]:
        return {
            "format": RECORD_FORMAT,
            "atoms": list(self.labels),
            "identity": sorted(self.identity_atoms),
            "converse": list(self.converse),
            "compose": [[sorted(self.compose(a, b)) for b in range(self.n)] for a in range(self.n)],
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> AtomStructure:
        if rec.get("format") != RECORD_FORMAT:
            raise ValueError(f"expected format {RECORD_FORMAT!r}, got {rec.get('format')!r}")
        n = len(rec["atoms"])
        rows = rec["compose"]
        return cls.from_products(n, rec["identity"], rec["converse"],
                                 lambda a, b: rows[a][b], rec["atoms"])


class FiniteRelationAlgebra:
    """The full algebra of subsets of the atoms of an :class:`AtomStructure`.

    When built from a group triple, ``atom_indices[i]`` is the
    ``(x, y, alpha)`` index of atom ``i`` and ``triple`` is the canonical triple.
    """

    def __init__(self, structure: AtomStructure, triple: GroupTriple | None = None,
                 atom_indices: Sequence[AtomIndex] = ()):
        self.structure = structure
        self.triple = triple
        self.atom_indices = tuple(atom_indices)
        self.atom_id = {a: i for i, a in enumerate(self.atom_indices)}
        self._rows = structure.masks

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return (1 << self.n) - 1

    @property
    def identity(self) -> int:
        return mask(self.structure.identity_atoms)

    def atom(self, i: int) -> int:
        return 1 << i

    def element(self, atoms: Iterable[int]) -> int:
        return mask(atoms)

    def atoms_below(self, e: int) -> list[int]:
        return list(bits(e))

    def join(self, e: int, f: int) -> int:
        return e | f

    def meet(self, e: int, f: int) -> int:
        return e & f

    def complement(self, e: int) -> int:
        return self.one & ~e

    def converse(self, e: int) -> int:
        conv = self.structure.converse
        return mask(conv[a] for a in bits(e))

    def compose(self, e: int, f: int) -> int:
        out = 0
        fb = list(bits(f))
        for a in bits(e):
            row = self._rows[a]
            for b in fb:
                out |= row[b]
        return out

    def leq(self, e: int, f: int) -> bool:
        return e & ~f == 0

    def label(self, e: int) -> str:
        if e == 0:
            return "0"
        return "+".join(self.structure.labels[a] for a in bits(e))

    def block(self, x: int, y: int) -> int:
        """Element ``G_x x G_y`` of an algebra built from a triple."""
        return mask(i for i, a in enumerate(self.atom_indices) if (a.x, a.y) == (x, y))

    def __repr__(self) -> str:
        return f"FiniteRelationAlgebra(n={self.n})"


# -------------------------------------------------------------- builders

def build_full_algebra(T: GroupTriple) -> FiniteRelationAlgebra:
    """Atoms ``R_{xy,alpha}`` in lexicographic order, identity atoms
    ``R_{xx,e}``, converse by inverting cosets (``H_a^-1 = H_b``) and
    composition from the coset-shifted product.  The axioms are not
    guaranteed; see :func:`check_ra_axioms`."""
    C, rep = validate_triple(T)
    if not rep.ok:
        raise InvalidTriple(rep)
    P = C.pair
    atoms = atoms_of(P)
    ids = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)
    table = np.zeros((n, n, n), dtype=bool)
    by_block: dict[tuple[int, int], list[AtomIndex]] = {}
    for a in atoms:
        by_block.setdefault((a.x, a.y), []).append(a)
    for (x, y), left in by_block.items():
        for (w, z), right in by_block.items():
            if w != y:
                continue
            for a in left:
                for b in right:
                    for c in atom_shifted_compose(C, a, b):
                        table[ids[a], ids[b], ids[c]] = True
    converse = tuple(ids[atom_converse(P, a)] for a in atoms)
    identity = frozenset(ids[AtomIndex(x, x, 0)] for x in P.index_set)
    structure = AtomStructure(n, identity, converse, table, tuple(a.label() for a in atoms))
    return FiniteRelationAlgebra(structure, C, atoms)


def complex_algebra(G: FiniteGroup) -> FiniteRelationAlgebra:
    """Complex algebra of ``G``: atom ``g`` is the translation ``R[0,0,g]``."""
    return build_full_algebra(make_triple(single_group_pair(G)))


def identity_only_algebra() -> FiniteRelationAlgebra:
    table = np.ones((1, 1, 1), dtype=bool)
    return FiniteRelationAlgebra(AtomStructure(1, frozenset({0}), (0,), table, ("1'",)))


# ------------------------------------------------------------ axiom checks

def _witness(arr: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.argwhere(arr)[0])


def check_ra_axioms(A: FiniteRelationAlgebra) -> ConditionReport:
    """Atom-level relation algebra axioms.

    Checks that converse is an involution, the identity law on both sides,
    the cycle law ``c <= a;b iff b <= a^;c iff a <= c;b^``, that converse
    reverses products, and associativity of atom products.
    """
    rep = ConditionReport()
    S = A.structure
    n, M = S.n, S.table
    conv = np.array(S.converse)
    labels = S.labels

    for a in range(n):
        if conv[conv[a]] != a:
            rep.fail("involution", (a,), f"{labels[a]}^^ = {labels[conv[conv[a]]]}")

    ids = sorted(S.identity_atoms)
    eye = np.eye(n, dtype=bool)
    right = M[:, ids, :].any(axis=1) if ids else np.zeros((n, n), dtype=bool)
    left = M[ids, :, :].any(axis=0) if ids else np.zeros((n, n), dtype=bool)
    for name, got in (("identity-right", right), ("identity-left", left)):
        bad = np.flatnonzero((got != eye).any(axis=1))
        for a in bad[:5]:
            got_atoms = [labels[c] for c in np.flatnonzero(got[a])]
            rep.fail(name, (int(a),), f"{labels[a]} with 1' gives {got_atoms}")

    # cycle law, two equivalences
    second = M[conv].transpose(0, 2, 1)         # M[conv a, c, b]
    third = M[:, conv].transpose(2, 1, 0)       # M[c, conv b, a]
    for name, other in (("cycle-1", second), ("cycle-2", third)):
        diff = M != other
        if diff.any():
            a, b, c = _witness(diff)
            rep.fail(name, (a, b, c), f"atoms ({labels[a]}, {labels[b]}, {labels[c]})")

    lhs = M[:, :, conv]                         # c <= (a;b)^  iff  c^ <= a;b
    rhs = M[conv][:, conv].transpose(1, 0, 2)   # c <= b^;a^
    diff = lhs != rhs
    if diff.any():
        a, b, c = _witness(diff)
        rep.fail("converse-product", (a, b, c), f"atoms ({labels[a]}, {labels[b]}, {labels[c]})")

    witness = _associativity_witness(M)
    if witness is not None:
        a, b, c = witness
        rep.fail("associativity", (a, b, c),
                 f"({labels[a]};{labels[b]});{labels[c]} != {labels[a]};({labels[b]};{labels[c]})")
    return rep


def _associativity_witness(M: np.ndarray) -> tuple[int, int, int] | None:
    n = M.shape[0]
    Mf = M.astype(np.float32)
    X = Mf.reshape(n, n * n)                                  # [d, (c, e)]
    Y = sparse.csr_matrix(Mf.reshape(n * n, n))               # [(b, c), f]
    for a in range(n):
        left = sparse.csr_matrix(Mf[a]) @ X                   # [b, (c, e)] = (a;b);c
        right = Y @ Mf[a]                                     # [(b, c), e] = a;(b;c)
        left = np.asarray(left).reshape(n, n, n) > 0
        right = np.asarray(right).reshape(n, n, n) > 0
        diff = left != right
        if diff.any():
            b, c, _ = _witness(diff)
            return a, b, c
    return None


def is_relation_algebra(A: FiniteRelationAlgebra) -> bool:
    return check_ra_axioms(A).ok


# ---------------------------------------------------------- structure

def is_simple_ra(A: FiniteRelationAlgebra) -> bool:
    """``1;a;1 = 1`` for every atom ``a``."""
    one = A.one
    return all(A.compose(A.compose(one, A.atom(a)), one) == one for a in range(A.n))


def is_functional(A: FiniteRelationAlgebra, f: int) -> bool:
    return A.leq(A.compose(A.converse(f), f), A.identity)


def subidentity_atoms(A: FiniteRelationAlgebra) -> list[int]:
    return sorted(A.structure.identity_atoms)


@dataclass
class AtomMeasure:
    atom: int
    label: str
    measurable: bool
    measure: int | None
    restricted: bool = False

    def to_record(self) -> dict[str, Any]:
        return {"atom": self.atom, "label": self.label, "measurable": self.measurable,
                "measure": self.measure if self.measure is not None else "not computed",
                "restricted": self.restricted}


@dataclass
class MeasurabilityReport:
    atoms: list[AtomMeasure]

    @property
    def measurable(self) -> bool:
        return all(m.measurable for m in self.atoms)

    def measures(self) -> list[int | None]:
        return [m.measure for m in self.atoms]

    def to_record(self) -> dict[str, Any]:
        return {"measurable": self.measurable, "atoms": [m.to_record() for m in self.atoms]}


def functional_elements_below(A: FiniteRelationAlgebra, e: int,
                              cap: int = MEASURE_CAP) -> tuple[list[int], bool]:
    """Non-zero functional elements below ``e``.

    Functional elements form a down-set, so a depth-first search that adds
    atoms in increasing order and stops at the first non-functional set
    visits each functional element once.  If more than ``cap`` candidates
    are examined the search falls back to single atoms and the second return
    value is ``True``.
    """
    atoms = list(bits(e))
    found: list[int] = []
    visited = 0
    stack = [(0, 0)]  # (element, next atom position)
    while stack:
        cur, start = stack.pop()
        for i in range(len(atoms) - 1, start - 1, -1):
            visited += 1
            if visited > cap:
                return [A.atom(a) for a in atoms if is_functional(A, A.atom(a))], True
            cand = cur | A.atom(atoms[i])
            if is_functional(A, cand):
                found.append(cand)
                stack.append((cand, i + 1))
    return sorted(found), False


def measurability(A: FiniteRelationAlgebra, cap: int = MEASURE_CAP) -> MeasurabilityReport:
    out = []
    for x in subidentity_atoms(A):
        ex = A.atom(x)
        square = A.compose(A.compose(ex, A.one), ex)
        funcs, restricted = functional_elements_below(A, square, cap)
        covered = 0
        for f in funcs:
            covered |= f
        out.append(AtomMeasure(x, A.structure.labels[x], covered == square, len(funcs), restricted))
    return MeasurabilityReport(out)


def to_json(A: FiniteRelationAlgebra) -> str:
    return json.dumps(A.structure.to_record(), separators=(",", ":"))
