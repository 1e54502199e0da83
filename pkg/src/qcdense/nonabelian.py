"""Finite groups, their abelian quotients, and density in A x F.

Characters of a compact group A x F with F finite all arise as pairs: a
character of A together with a character of F, and the latter factors
through the abelianization F / [F, F].  Certification of a member family
E x {e} therefore splits: pairs with a nonzero A-part inherit the A-side
witness, while a pair supported on a nontrivial finite character vanishes
on every member and fails.  Perfect finite factors have no nontrivial
finite characters, so the A-side certificate carries over whole.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iter_product

from .certify import (
    Certificate,
    WitnessRecord,
    _constructive_then_brute,
    _threads_default,
)
from .circle import in_tplus
from .duality import (
    FiniteAbelianChar,
    ProductChar,
    char_sort_key,
    enumerate_chars,
    eval_char,
    trivial_char,
)
from .errors import InvariantViolation, SizeLimit, ValidationError
from .groups import ProductElem, ProductWithFinite
from .sequences import SuperSeq

DERIVED_SIZE_LIMIT = 10_000
DECOMPOSE_WORK_LIMIT = 2_000_000


class FiniteGroup:
    """A finite group as a multiplication table over indices 0..order-1."""

    __slots__ = ("name", "order", "table", "identity", "_inv", "_elem_labels")

    def __init__(self, name: str, table, labels=None):
        table = tuple(tuple(row) for row in table)
        order = len(table)
        if any(len(row) != order for row in table):
            raise ValidationError("multiplication table must be square")
        full = frozenset(range(order))
        for row in table:
            if frozenset(row) != full:
                raise ValidationError("table rows must be permutations")
        for j in range(order):
            if frozenset(row[j] for row in table) != full:
                raise ValidationError("table columns must be permutations")
        identity = None
        for e in range(order):
            if all(table[e][x] == x and table[x][e] == x for x in range(order)):
                identity = e
                break
        if identity is None:
            raise ValidationError("table has no identity element")
        inv = [None] * order
        for x in range(order):
            for y in range(order):
                if table[x][y] == identity:
                    inv[x] = y
                    break
        if any(i is None for i in inv):
            raise ValidationError("table has a non-invertible element")
        if order <= 256:
            for a in range(order):
                for b in range(order):
                    ab = table[a][b]
                    for c in range(order):
                        if table[ab][c] != table[a][table[b][c]]:
                            raise ValidationError("table is not associative")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "identity", identity)
        object.__setattr__(self, "_inv", tuple(inv))
        object.__setattr__(self, "_elem_labels", labels)

    def __setattr__(self, key, value):
        raise AttributeError("FiniteGroup is immutable")

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        # element labels are decorative only
        return self.name == other.name and self.table == other.table

    def __hash__(self):
        return hash((self.name, self.order, self.table[0]))

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self._inv[x]

    def element_order(self, x: int) -> int:
        n, acc = 1, x
        while acc != self.identity:
            acc = self.table[acc][x]
            n += 1
        return n

    def label(self, x: int) -> str:
        if self._elem_labels is not None:
            return self._elem_labels[x]
        return str(x)


def from_permutations(name: str, generators, degree: int) -> FiniteGroup:
    """Close permutation generators into a group and tabulate it."""
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise ValidationError(f"{g} is not a permutation of {degree} points")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(degree))
                if q not in index:
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    table = [
        [index[tuple(a[b[i]] for i in range(degree))] for b in elems] for a in elems
    ]
    labels = tuple(repr(p) for p in elems)
    return FiniteGroup(name, table, labels)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValidationError("cyclic order must be positive")
    return FiniteGroup(f"C{n}", [[(i + j) % n for j in range(n)] for i in range(n)])


def _quaternion_group() -> FiniteGroup:
    # elements: sign s in {+1, -1} times axis in {1, i, j, k}
    axes = ["1", "i", "j", "k"]
    mult = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, a) for a in axes for s in (1, -1)]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, a1 in elems:
        row = []
        for s2, a2 in elems:
            s3, a3 = mult[(a1, a2)]
            row.append(index[(s1 * s2 * s3, a3)])
        table.append(row)
    labels = tuple(("" if s > 0 else "-") + a for s, a in elems)
    return FiniteGroup("Q8", table, labels)


def dihedral_group(n: int) -> FiniteGroup:
    rot = tuple((i + 1) % n for i in range(n))
    flip = tuple((n - i) % n for i in range(n))
    return from_permutations(f"D{n}", [rot, flip], n)


def builtin_group(name: str) -> FiniteGroup:
    """Shipped groups: A5, S3, S4, A4, Q8, Dn and Cn families."""
    if name == "A5":
        return from_permutations("A5", [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)], 5)
    if name == "A4":
        return from_permutations("A4", [(1, 2, 0, 3), (0, 2, 3, 1)], 4)
    if name == "S4":
        return from_permutations("S4", [(1, 0, 2, 3), (1, 2, 3, 0)], 4)
    if name == "S3":
        return from_permutations("S3", [(1, 0, 2), (1, 2, 0)], 3)
    if name == "Q8":
        return _quaternion_group()
    if name.startswith("D") and name[1:].isdigit():
        n = int(name[1:])
        if n < 3:
            raise ValidationError("dihedral groups start at D3")
        return dihedral_group(n)
    if name.startswith("C") and name[1:].isdigit():
        return cyclic_group(int(name[1:]))
    raise ValidationError(f"unknown built-in group {name!r}")


def load_finite_group(data: dict) -> FiniteGroup:
    """Load from {"order": n, "table": [[..]]} or generator permutations."""
    name = data.get("name", "loaded")
    if "table" in data:
        table = data["table"]
        if data.get("order") not in (None, len(table)):
            raise ValidationError("declared order does not match the table")
        return FiniteGroup(name, table)
    if "generators" in data:
        degree = data.get("degree")
        if degree is None:
            raise ValidationError("generator format needs a degree")
        return from_permutations(name, data["generators"], degree)
    raise ValidationError("finite group data needs a table or generators")


# ---------------------------------------------------------------------------
# derived subgroup and abelianization


def _closure(F: FiniteGroup, seed) -> frozenset:
    got = set(seed)
    got.add(F.identity)
    frontier = list(got)
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(got):
                for z in (F.mul(x, y), F.mul(y, x)):
                    if z not in got:
                        got.add(z)
                        nxt.append(z)
        frontier = nxt
    return frozenset(got)


def derived_subgroup(F: FiniteGroup) -> frozenset:
    """The subgroup generated by all commutators of F."""
    if F.order > DERIVED_SIZE_LIMIT:
        raise SizeLimit(f"derived subgroup supported up to order {DERIVED_SIZE_LIMIT}")
    comms = set()
    for x in range(F.order):
        xi = F.inv(x)
        for y in range(F.order):
            comms.add(F.mul(F.mul(F.inv(y), xi), F.mul(y, x)))
    return _closure(F, comms)


def is_perfect(F: FiniteGroup) -> bool:
    return len(derived_subgroup(F)) == F.order


@dataclass(frozen=True)
class FiniteAbelianDesc:
    """An abelian quotient in invariant factors, with the projection.

    factors are ascending with each dividing the next; proj[x] gives the
    coordinates of the image of element x of the source group.
    """

    factors: tuple[int, ...]
    proj: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f
        return n


class _AbelianTable:
    """Scratch representation of a finite abelian group during decomposition."""

    def __init__(self, elems: list[int], mul, identity: int):
        self.elems = elems
        self.mul = mul
        self.identity = identity

    def order_of(self, x: int) -> int:
        n, acc = 1, x
        while acc != self.identity:
            acc = self.mul(acc, x)
            n += 1
        return n

    def cyclic(self, g: int) -> list[int]:
        out = [self.identity]
        acc = g
        while acc != self.identity:
            out.append(acc)
            acc = self.mul(acc, g)
        return out


def _subgroup_closure(A: _AbelianTable, gens: tuple[int, ...]) -> frozenset:
    got = {A.identity}
    frontier = [A.identity]
    gens = tuple(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = A.mul(x, g)
                if y not in got:
                    got.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(got)


def _find_complement(A: _AbelianTable, g: int) -> frozenset:
    """A subgroup meeting <g> trivially and filling the rest of the order.

    A maximal-order cyclic subgroup of a finite abelian group is always a
    direct summand, so the search over small generator sets terminates.
    """
    cyc = frozenset(A.cyclic(g))
    target = len(A.elems) // len(cyc)
    if target == 1:
        return frozenset([A.identity])
    candidates = [x for x in A.elems if x != A.identity]
    work = 0
    for size in range(1, 7):
        for gens in combinations(candidates, size):
            work += 1
            if work > DECOMPOSE_WORK_LIMIT:
                raise SizeLimit("abelian decomposition search exceeded its budget")
            K = _subgroup_closure(A, gens)
            if len(K) == target and len(K & cyc) == 1:
                return K
    raise InvariantViolation("no direct complement found for a maximal cyclic part")


def _decompose(A: _AbelianTable) -> tuple[tuple[int, ...], dict[int, tuple[int, ...]]]:
    """Invariant factors (descending while peeling) plus coordinates."""
    if len(A.elems) == 1:
        return (), {A.identity: ()}
    g = max(A.elems, key=lambda x: (A.order_of(x), -x))
    M = A.order_of(g)
    cyc = A.cyclic(g)
    K = _find_complement(A, g)
    sub = _AbelianTable(sorted(K), A.mul, A.identity)
    sub_factors, sub_coords = _decompose(sub)
    inv_g = cyc[M - 1]
    coords: dict[int, tuple[int, ...]] = {}
    for x in A.elems:
        # unique split x = alpha * g + k with k in K
        k = x
        for alpha in range(M):
            if k in K:
                coords[x] = (alpha,) + sub_coords[k]
                break
            k = A.mul(k, inv_g)
        else:
            raise InvariantViolation("element failed to split across the summands")
    return (M,) + sub_factors, coords


def abelianization(F: FiniteGroup) -> FiniteAbelianDesc:
    """The quotient F / [F, F] in ascending invariant factors."""
    D = derived_subgroup(F)
    coset_rep: dict[int, int] = {}
    for x in range(F.order):
        if x in coset_rep:
            continue
        members = sorted(F.mul(x, d) for d in D)
        rep = members[0]
        for y in members:
            coset_rep[y] = rep
    reps = sorted(set(coset_rep.values()))
    A = _AbelianTable(reps, lambda a, b: coset_rep[F.mul(a, b)], coset_rep[F.identity])
    factors_desc, coords = _decompose(A)
    # ascending divisibility order, coordinates permuted to match
    order_idx = list(range(len(factors_desc)))[::-1]
    factors = tuple(factors_desc[i] for i in order_idx)
    proj = tuple(
        tuple(coords[coset_rep[x]][i] for i in order_idx) for x in range(F.order)
    )
    return FiniteAbelianDesc(factors=factors, proj=proj)


def finite_abelian_chars(desc: FiniteAbelianDesc) -> list[FiniteAbelianChar]:
    """All nontrivial characters of the quotient, deterministically ordered."""
    if not desc.factors:
        return []
    out = []
    for coeffs in iter_product(*[range(n) for n in desc.factors]):
        if any(coeffs):
            out.append(FiniteAbelianChar(coeffs, desc.factors, desc.proj))
    return sorted(out, key=char_sort_key)


# ---------------------------------------------------------------------------
# certification in A x F


def certify_qc_with_finite_factor(
    seq: SuperSeq, F: FiniteGroup, bound: int, threads: int | None = None
) -> Certificate:
    """Certify E x {e} inside A x F for the abelian sequence E in A.

    Characters are pairs; the finite side is enumerated completely through
    the abelianization while the abelian side sweeps up to the bound.  Any
    pair with a trivial abelian part but nontrivial finite part annihilates
    every member, so nonperfect F fails immediately and by design.
    """
    _threads_default(threads)  # validates the env override eagerly
    A = seq.group
    G = ProductWithFinite(A, F)
    desc = abelianization(F)
    finite_nontrivial = finite_abelian_chars(desc)
    trivial_fin = FiniteAbelianChar((), (), ())
    abelian_chars = [None] + enumerate_chars(A, bound)  # None marks trivial
    records: list[WitnessRecord] = []
    failed = None
    for chi_a in abelian_chars:
        for zeta in [trivial_fin] + finite_nontrivial:
            if chi_a is None and not zeta.factors:
                continue
            pair = ProductChar((chi_a if chi_a is not None else trivial_char(A), zeta))
            if chi_a is None:
                # vanishes on every member of E x {e}
                failed = pair
                break
            rec = _constructive_then_brute(chi_a, seq)
            if rec is None:
                failed = pair
                break
            witness = ProductElem((rec.witness, F.identity))
            value = eval_char(pair, witness)
            if value != rec.value or in_tplus(value):
                raise InvariantViolation("finite-factor pair failed re-verification")
            records.append(WitnessRecord(pair, witness, value, False, rec.method))
        if failed is not None:
            break
    return Certificate(
        group=G,
        sequence_spec=(seq.generator, seq.params + (("finite_factor", F.name),)),
        bound=bound,
        mode="qc",
        status="certified" if failed is None else "failed",
        failed_character=failed,
        records=tuple(records),
        coverage="full",
    )
