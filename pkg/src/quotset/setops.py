"""Subset arithmetic over a finite group, with subsets stored as int bitmasks.

Bit ``x`` of a mask marks membership of the element with id ``x``.  The
public entry points work with :class:`ElemSet` values; the ``*_mask``
functions are the raw kernels used by the enumeration loops, where wrapping
every intermediate in a dataclass would dominate the runtime.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .groups import GroupTable
from .reports import CheckItem, CheckReport

__all__ = [
    "ElemSet",
    "RepCounts",
    "parse_set_literal",
    "product_set",
    "inverse_set",
    "quotient_set",
    "representation_counts",
    "heavy_quotient",
    "check_counting_bounds",
]


@dataclass(frozen=True, slots=True)
class ElemSet:
    """A subset of a group of order ``n``, stored as a bitmask."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"group order must be positive, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bitmask {self.bits:#x} out of range for order {self.n}")

    @classmethod
    def from_elements(cls, n: int, elements) -> "ElemSet":
        bits = 0
        for x in elements:
            if not 0 <= x < n:
                raise ValueError(f"element id {x} out of range for order {n}")
            bits |= 1 << x
        return cls(n, bits)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def elements(self) -> tuple[int, ...]:
        return tuple(self)

    def literal(self) -> str:
        return "{" + ", ".join(str(x) for x in self) + "}"

    def __contains__(self, x) -> bool:
        return 0 <= x < self.n and self.bits >> x & 1 == 1

    def __iter__(self):
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __bool__(self) -> bool:
        return self.bits != 0

    def __len__(self) -> int:
        return self.bits.bit_count()


_SET_RE = re.compile(r"\s*\{(.*)\}\s*$", re.DOTALL)


def parse_set_literal(text: str, n: int) -> ElemSet:
    """Parse ``"{0, 4, 8}"`` into an :class:`ElemSet` over a group of order ``n``."""
    m = _SET_RE.match(text)
    if not m:
        raise ValueError(f"expected a set literal like {{0, 1, 2}}, got {text!r}")
    body = m.group(1).strip()
    if not body:
        return ElemSet(n)
    bits = 0
    for token in body.split(","):
        token = token.strip()
        if not token.lstrip("-").isdigit():
            raise ValueError(f"bad element {token!r} in set literal {text!r}")
        x = int(token)
        if not 0 <= x < n:
            raise ValueError(f"element {x} out of range 0..{n - 1} in {text!r}")
        bits |= 1 << x
    return ElemSet(n, bits)


# ---------------------------------------------------------------------------
# mask kernels


def _apply(tables, mask, width, cmask):
    out = 0
    for table in tables:
        out |= table[mask & cmask]
        mask >>= width
        if not mask:
            break
    return out


def left_translate_mask(G: GroupTable, a: int, mask: int) -> int:
    t = G.action_tables()
    return _apply(t.left[a], mask, t.width, t.chunk_mask)


def right_translate_mask(G: GroupTable, g: int, mask: int) -> int:
    t = G.action_tables()
    return _apply(t.right[g], mask, t.width, t.chunk_mask)


def invert_mask(G: GroupTable, mask: int) -> int:
    t = G.action_tables()
    return _apply(t.invert, mask, t.width, t.chunk_mask)


def product_mask(G: GroupTable, amask: int, bmask: int) -> int:
    """Bitmask of all products a*b with a in A and b in B."""
    t = G.action_tables()
    left, width, cmask = t.left, t.width, t.chunk_mask
    out = 0
    bits = amask
    while bits:
        low = bits & -bits
        out |= _apply(left[low.bit_length() - 1], bmask, width, cmask)
        bits ^= low
    return out


def quotient_mask(G: GroupTable, mask: int) -> int:
    """Bitmask of all quotients inv(a)*b with a, b in the set."""
    t = G.action_tables()
    inv_left, width, cmask = t.inv_left, t.width, t.chunk_mask
    out = 0
    bits = mask
    while bits:
        low = bits & -bits
        out |= _apply(inv_left[low.bit_length() - 1], mask, width, cmask)
        bits ^= low
    return out


def rep_counts_quotient_mask(G: GroupTable, amask: int, bmask: int) -> list[int]:
    """counts[g] = number of pairs (a, b) in A x B with inv(a)*b = g.

    Equivalently the size of ``Ag`` meet ``B``, so counts[g] > 0 exactly on
    the quotient-style product of the two sets.
    """
    t = G.action_tables()
    right, width, cmask = t.right, t.width, t.chunk_mask
    return [(_apply(right[g], amask, width, cmask) & bmask).bit_count()
            for g in range(G.order)]


def rep_counts_product_mask(G: GroupTable, amask: int, bmask: int) -> list[int]:
    """counts[g] = number of pairs (a, b) in A x B with a*b = g."""
    t = G.action_tables()
    left, invert, width, cmask = t.left, t.invert, t.width, t.chunk_mask
    binv = _apply(invert, bmask, width, cmask)
    return [(_apply(left[g], binv, width, cmask) & amask).bit_count()
            for g in range(G.order)]


def subgroup_closure_mask(G: GroupTable, mask: int) -> int:
    """Bitmask of the subgroup generated by the elements of ``mask``."""
    t = G.action_tables()
    left, width, cmask = t.left, t.width, t.chunk_mask
    cur = mask | 1
    while True:
        nxt = cur
        bits = cur
        while bits:
            low = bits & -bits
            nxt |= _apply(left[low.bit_length() - 1], cur, width, cmask)
            bits ^= low
        if nxt == cur:
            return cur
        cur = nxt


def is_subgroup_mask(G: GroupTable, mask: int) -> bool:
    if not mask & 1:
        return False
    t = G.action_tables()
    left, width, cmask = t.left, t.width, t.chunk_mask
    bits = mask
    while bits:
        low = bits & -bits
        if _apply(left[low.bit_length() - 1], mask, width, cmask) != mask:
            return False
        bits ^= low
    return True


# ---------------------------------------------------------------------------
# public wrappers


def _bits(G: GroupTable, s: ElemSet, what: str) -> int:
    if s.n != G.order:
        raise ValueError(f"{what} is over order {s.n}, group has order {G.order}")
    return s.bits


def _bits_nonempty(G: GroupTable, s: ElemSet, what: str) -> int:
    bits = _bits(G, s, what)
    if not bits:
        raise ValueError(f"{what} must be nonempty")
    return bits


def product_set(G: GroupTable, A: ElemSet, B: ElemSet) -> ElemSet:
    """The product set AB = {a*b : a in A, b in B}."""
    return ElemSet(G.order, product_mask(G, _bits(G, A, "A"), _bits(G, B, "B")))


def inverse_set(G: GroupTable, A: ElemSet) -> ElemSet:
    """The set of inverses of the elements of A."""
    return ElemSet(G.order, invert_mask(G, _bits(G, A, "A")))


def quotient_set(G: GroupTable, A: ElemSet) -> ElemSet:
    """The quotient set of A: all elements inv(a)*b with a, b in A."""
    return ElemSet(G.order, quotient_mask(G, _bits_nonempty(G, A, "A")))


@dataclass(frozen=True, slots=True)
class RepCounts:
    """Representation counts of every group element over a pair of sets.

    For ``form="quotient"`` entry g counts the pairs with inv(a)*b = g; for
    ``form="product"`` it counts the pairs with a*b = g.  With A = B in
    quotient form, entry g is the size of ``A`` meet ``Ag``.
    """

    form: str
    counts: tuple[int, ...]

    def __getitem__(self, g: int) -> int:
        return self.counts[g]

    def support(self) -> ElemSet:
        return ElemSet.from_elements(
            len(self.counts), (g for g, c in enumerate(self.counts) if c))


def representation_counts(G: GroupTable, A: ElemSet, B: ElemSet | None = None,
                          form: str = "quotient") -> RepCounts:
    bmask = _bits_nonempty(G, B, "B") if B is not None else None
    amask = _bits_nonempty(G, A, "A")
    if bmask is None:
        bmask = amask
    if form == "quotient":
        counts = rep_counts_quotient_mask(G, amask, bmask)
    elif form == "product":
        counts = rep_counts_product_mask(G, amask, bmask)
    else:
        raise ValueError(f"form must be 'quotient' or 'product', got {form!r}")
    return RepCounts(form, tuple(counts))


def heavy_quotient(G: GroupTable, A: ElemSet) -> ElemSet:
    """Quotients of A represented strictly more than |Q| - |A| times.

    Q is the quotient set of A; the threshold makes the heavy part exactly
    the elements whose representation count survives the worst pigeonhole
    slack between |Q| and |A|.
    """
    amask = _bits_nonempty(G, A, "A")
    qsize = quotient_mask(G, amask).bit_count()
    threshold = qsize - amask.bit_count()
    counts = rep_counts_quotient_mask(G, amask, amask)
    return ElemSet.from_elements(
        G.order, (g for g, c in enumerate(counts) if c > threshold))


def check_counting_bounds(G: GroupTable, A: ElemSet, B: ElemSet) -> CheckReport:
    """Exhaustively verify two counting laws on the pair (A, B).

    * pigeonhole_quotient: whenever two elements of the quotient set of A
      have representation counts summing beyond |A|, their own quotient
      lands back in the quotient set of A.
    * kemperman_wehn: every g in AB satisfies
      |AB| >= |A| + |B| - (number of factorizations of g over A x B).
    """
    amask = _bits_nonempty(G, A, "A")
    bmask = _bits_nonempty(G, B, "B")
    asize = amask.bit_count()
    mul, inv = G.mul, G.inv
    items = []

    qmask = quotient_mask(G, amask)
    rc = rep_counts_quotient_mask(G, amask, amask)
    q_elems = list(ElemSet(G.order, qmask))
    witness = None
    for i, g1 in enumerate(q_elems):
        r1 = rc[g1]
        for g2 in q_elems[i:]:
            if r1 + rc[g2] > asize and not qmask >> mul[inv[g1]][g2] & 1:
                witness = (g1, g2)
                break
        if witness:
            break
    items.append(CheckItem(
        "pigeonhole_quotient", witness is None,
        "" if witness is None else
        "fails at ({}, {})".format(*(G.name_of(w) for w in witness))))

    pmask = product_mask(G, amask, bmask)
    psize = pmask.bit_count()
    need = asize + bmask.bit_count() - psize
    pc = rep_counts_product_mask(G, amask, bmask)
    bad = next((g for g in ElemSet(G.order, pmask) if pc[g] < need), None)
    items.append(CheckItem(
        "kemperman_wehn", bad is None,
        "" if bad is None else f"fails at {G.name_of(bad)}"))

    return CheckReport("counting bounds", tuple(items))
