"""Cayley-table engines for a small catalog of finite group families.

Element ids are dense integers ``0..order-1`` and id 0 is always the
identity.  ``mul[x][y]`` is the product "x then y"; for permutation groups
this is left-to-right composition of mappings.  A table never changes after
construction, so groups can be shared freely across worker processes.

Group-spec grammar (one spec per line in files, ``#`` starts a comment):

    cyclic N              additive residues mod N                   (order N)
    dihedral N            rotations r^i and reflections r^i s       (order 2N)
    symmetric K           all permutations of 1..K, K <= 5          (order K!)
    dicyclic M            <a, x | a^(2M)=1, x^2=a^M, xax^-1=a^-1>   (order 4M)
    product SPEC ; SPEC   direct product; the left factor must not itself be
                          a product (nest products to the right)
    perm degree=D gens=[(2 1 3),(2 3 1)]
                          closure of the listed generators, written as
                          one-line images of 1..D

Labeling conventions, fixed so identical specs rebuild identical tables:
cyclic ids are the residues themselves; dihedral ids 0..N-1 are r^i and ids
N..2N-1 are r^i s; symmetric-group ids are the lexicographic rank of the
image tuple (the identity ranks first); dicyclic ids 0..2M-1 are a^i and ids
2M..4M-1 are a^i x; product ids are i*|B|+j for the pair (i, j); perm-spec
ids are assigned by breadth-first closure from the identity, expanding each
element by the generators in listed order.
"""

from __future__ import annotations

import itertools
import math
import re
from typing import NamedTuple

from .reports import CheckItem, CheckReport

__all__ = [
    "DEFAULT_ORDER_CAP",
    "ALTERNATING4_SPEC",
    "GroupSpecError",
    "GroupTable",
    "build_group",
    "verify_group_axioms",
    "catalog_specs",
    "parse_spec_lines",
]

#: Constructions beyond this order (7!) are refused outright.
DEFAULT_ORDER_CAP = 5040

#: The even permutations of four points, generated by a double swap and a 3-cycle.
ALTERNATING4_SPEC = "perm degree=4 gens=[(2 1 4 3),(2 3 1 4)]"


class GroupSpecError(ValueError):
    """A group spec string that cannot be parsed or built."""

    def __init__(self, message: str, spec: str | None = None, column: int | None = None):
        detail = message
        if spec is not None:
            at = f" (column {column})" if column is not None else ""
            detail = f"{message}{at} in group spec {spec!r}"
        super().__init__(detail)
        self.spec = spec
        self.column = column


class _ActionTables(NamedTuple):
    """Chunked lookup tables applying an element action to a whole bitmask.

    A mask is split into chunks of ``width`` bits; ``left[a][c][v]`` is the
    image mask of the chunk value ``v`` under x -> a*x, so translating a mask
    costs one lookup and one OR per chunk.
    """

    width: int
    chunk_mask: int
    nchunks: int
    left: tuple        # left[a]     tables for x -> a*x
    right: tuple       # right[g]    tables for x -> x*g
    inv_left: tuple    # inv_left[a] tables for x -> inv(a)*x
    invert: tuple      # tables for x -> inv(x)


def _chunk_layout(order: int) -> tuple[int, int]:
    nchunks = (order + 11) // 12
    width = (order + nchunks - 1) // nchunks
    return nchunks, width


def _perm_tables(perm, order, nchunks, width):
    """Lookup tables that apply the permutation ``perm`` to a bitmask."""
    tables = []
    for c in range(nchunks):
        bits = min(width, order - c * width)
        size = 1 << bits
        table = [0] * size
        base = c * width
        for v in range(1, size):
            low = v & -v
            table[v] = table[v ^ low] | (1 << perm[base + low.bit_length() - 1])
        tables.append(table)
    return tuple(tables)


class GroupTable:
    """Immutable finite group given by explicit multiplication and inverse tables.

    Treat instances as read-only; the private fields only cache derived data
    (action tables, subgroup lists) and rebuilding them is always idempotent.
    """

    __slots__ = ("order", "mul", "inv", "identity", "element_names", "spec",
                 "_tables", "_normalizers", "_subgroups")

    def __init__(self, order, mul, inv, element_names, spec):
        self.order = order
        self.mul = tuple(tuple(row) for row in mul)
        self.inv = tuple(inv)
        self.identity = 0
        self.element_names = tuple(element_names)
        self.spec = spec
        self._tables = None
        self._normalizers = {}
        self._subgroups = None

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def name_of(self, x: int) -> str:
        return self.element_names[x]

    def action_tables(self) -> _ActionTables:
        tables = self._tables
        if tables is None:
            n = self.order
            nchunks, width = _chunk_layout(n)
            left = tuple(_perm_tables(self.mul[a], n, nchunks, width) for a in range(n))
            cols = [[self.mul[x][g] for x in range(n)] for g in range(n)]
            right = tuple(_perm_tables(col, n, nchunks, width) for col in cols)
            inv_left = tuple(left[self.inv[a]] for a in range(n))
            invert = _perm_tables(self.inv, n, nchunks, width)
            tables = _ActionTables(width, (1 << width) - 1, nchunks,
                                   left, right, inv_left, invert)
            self._tables = tables
        return tables

    def __repr__(self):
        return f"GroupTable({self.spec!r}, order={self.order})"


# ---------------------------------------------------------------------------
# family builders


def _cyclic_table(n: int) -> GroupTable:
    mul = [[(x + y) % n for y in range(n)] for x in range(n)]
    inv = [(-x) % n for x in range(n)]
    names = [str(x) for x in range(n)]
    return GroupTable(n, mul, inv, names, f"cyclic {n}")


def _dihedral_table(n: int) -> GroupTable:
    # id i < n is the rotation r^i, id n + i is the reflection r^i s;
    # multiplication uses s r = r^-1 s.
    order = 2 * n
    mul = [[0] * order for _ in range(order)]
    for x in range(order):
        xi, xs = (x, 0) if x < n else (x - n, 1)
        for y in range(order):
            yi, ys = (y, 0) if y < n else (y - n, 1)
            i = (xi - yi) % n if xs else (xi + yi) % n
            mul[x][y] = i + n * (xs ^ ys)
    inv = [(-x) % n if x < n else x for x in range(order)]
    names = [f"r^{i}" for i in range(n)] + [f"r^{i} s" for i in range(n)]
    return GroupTable(order, mul, inv, names, f"dihedral {n}")


def _dicyclic_table(m: int) -> GroupTable:
    # id i < 2m is a^i, id 2m + i is a^i x, with x^2 = a^m and x a = a^-1 x.
    n2 = 2 * m
    order = 4 * m
    mul = [[0] * order for _ in range(order)]
    for x in range(order):
        xi, xs = (x, 0) if x < n2 else (x - n2, 1)
        for y in range(order):
            yi, ys = (y, 0) if y < n2 else (y - n2, 1)
            if not xs and not ys:
                mul[x][y] = (xi + yi) % n2
            elif not xs:
                mul[x][y] = n2 + (xi + yi) % n2
            elif not ys:
                mul[x][y] = n2 + (xi - yi) % n2
            else:
                mul[x][y] = (xi - yi + m) % n2
    inv = [(-x) % n2 if x < n2 else n2 + (x - n2 + m) % n2 for x in range(order)]
    names = [f"a^{i}" for i in range(n2)] + [f"a^{i} x" for i in range(n2)]
    return GroupTable(order, mul, inv, names, f"dicyclic {m}")


def _cycle_name(images) -> str:
    """Cycle notation for a permutation given as 1-based one-line images."""
    k = len(images)
    seen = [False] * k
    parts = []
    for s in range(k):
        if seen[s] or images[s] == s + 1:
            seen[s] = True
            continue
        cyc = [s + 1]
        seen[s] = True
        j = images[s]
        while j != s + 1:
            cyc.append(j)
            seen[j - 1] = True
            j = images[j - 1]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def _table_from_perms(elems, degree, spec):
    index = {p: i for i, p in enumerate(elems)}
    rng = range(degree)
    mul = [[index[tuple(py[px[i] - 1] for i in rng)] for py in elems] for px in elems]
    inv = []
    for p in elems:
        ip = [0] * degree
        for i in rng:
            ip[p[i] - 1] = i + 1
        inv.append(index[tuple(ip)])
    names = [_cycle_name(p) for p in elems]
    return GroupTable(len(elems), mul, inv, names, spec)


def _symmetric_table(k: int) -> GroupTable:
    elems = list(itertools.permutations(range(1, k + 1)))
    return _table_from_perms(elems, k, f"symmetric {k}")


def _perm_closure_table(degree, gens, cap, original, base) -> GroupTable:
    ident = tuple(range(1, degree + 1))
    elems = [ident]
    index = {ident: 0}
    pos = 0
    while pos < len(elems):
        p = elems[pos]
        pos += 1
        for g in gens:
            q = tuple(g[p[i] - 1] for i in range(degree))
            if q not in index:
                if len(elems) >= cap:
                    raise GroupSpecError(
                        f"permutation closure exceeds the order cap {cap}",
                        original, base)
                index[q] = len(elems)
                elems.append(q)
    gen_text = ",".join("(" + " ".join(map(str, g)) + ")" for g in gens)
    spec = f"perm degree={degree} gens=[{gen_text}]"
    return _table_from_perms(elems, degree, spec)


def _product_table(a: GroupTable, b: GroupTable, cap, original, base) -> GroupTable:
    order = a.order * b.order
    if order > cap:
        raise GroupSpecError(f"product order {order} exceeds the order cap {cap}",
                             original, base)
    nb = b.order
    mul = [[0] * order for _ in range(order)]
    for i in range(a.order):
        arow = a.mul[i]
        for j in range(nb):
            brow = b.mul[j]
            row = mul[i * nb + j]
            for k in range(a.order):
                ak = arow[k] * nb
                for l in range(nb):
                    row[k * nb + l] = ak + brow[l]
    inv = [a.inv[x // nb] * nb + b.inv[x % nb] for x in range(order)]
    names = [f"({a.element_names[x // nb]},{b.element_names[x % nb]})"
             for x in range(order)]
    return GroupTable(order, mul, inv, names, f"product {a.spec} ; {b.spec}")


# ---------------------------------------------------------------------------
# spec parsing

_FAMILY_RE = re.compile(r"(cyclic|dihedral|symmetric|dicyclic)\s+(\S+)\s*$")
_PERM_RE = re.compile(r"perm\s+degree=(\S+?)\s+gens=\[(.*)\]\s*$")
_GEN_RE = re.compile(r"\(([^()]*)\)")
_INT_RE = re.compile(r"-?\d+$")


def build_group(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """Build the group described by ``spec``; see the module docstring for the grammar.

    The returned table's ``spec`` field is the whitespace-normalized form of
    the input, and identical spec strings always rebuild identical tables.
    """
    if not spec or not spec.strip():
        raise GroupSpecError("empty group spec", spec=spec or "", column=0)
    stripped = spec.strip()
    return _parse_spec(spec, stripped, len(spec) - len(spec.lstrip()), order_cap)


def _parse_int(token, original, column):
    if not _INT_RE.match(token):
        raise GroupSpecError(f"expected an integer, got {token!r}", original, column)
    return int(token)


def _parse_spec(original, text, base, cap) -> GroupTable:
    word = text.split(None, 1)[0]
    if word == "product":
        rest = text[len("product"):]
        sep = rest.find(";")
        if sep < 0:
            raise GroupSpecError("product spec needs ';' between its two factors",
                                 original, base)
        lhs, rhs = rest[:sep], rest[sep + 1:]
        lhs_stripped, rhs_stripped = lhs.strip(), rhs.strip()
        lhs_base = base + len("product") + (len(lhs) - len(lhs.lstrip()))
        rhs_base = base + len("product") + sep + 1 + (len(rhs) - len(rhs.lstrip()))
        if not lhs_stripped:
            raise GroupSpecError("product spec is missing its left factor", original, base)
        if lhs_stripped.split(None, 1)[0] == "product":
            raise GroupSpecError(
                "the left factor of a product cannot itself be a product; "
                "nest products to the right", original, lhs_base)
        if not rhs_stripped:
            raise GroupSpecError("product spec is missing its right factor", original, base)
        a = _parse_spec(original, lhs_stripped, lhs_base, cap)
        b = _parse_spec(original, rhs_stripped, rhs_base, cap)
        return _product_table(a, b, cap, original, base)

    if word == "perm" or word.startswith("perm"):
        m = _PERM_RE.fullmatch(text)
        if not m:
            raise GroupSpecError(
                "malformed perm spec; expected perm degree=D gens=[(..),(..)]",
                original, base)
        degree = _parse_int(m.group(1), original, base + m.start(1))
        if degree < 1:
            raise GroupSpecError(f"perm degree must be at least 1, got {degree}",
                                 original, base + m.start(1))
        gens_text = m.group(2)
        leftover = _GEN_RE.sub("", gens_text).strip(" ,\t")
        if leftover:
            raise GroupSpecError(f"malformed generator list near {leftover!r}",
                                 original, base + m.start(2))
        gens = []
        for body in _GEN_RE.findall(gens_text):
            tokens = body.split()
            images = tuple(_parse_int(t, original, base + m.start(2)) for t in tokens)
            if sorted(images) != list(range(1, degree + 1)):
                raise GroupSpecError(
                    f"generator ({body}) is not a permutation of 1..{degree}",
                    original, base + m.start(2))
            gens.append(images)
        return _perm_closure_table(degree, gens, cap, original, base)

    m = _FAMILY_RE.fullmatch(text)
    if not m:
        raise GroupSpecError(f"unknown group family {word!r}", original, base)
    family = m.group(1)
    value = _parse_int(m.group(2), original, base + m.start(2))
    if family == "cyclic":
        if value < 1:
            raise GroupSpecError("cyclic needs N >= 1", original, base + m.start(2))
        order = value
        builder = _cyclic_table
    elif family == "dihedral":
        if value < 1:
            raise GroupSpecError("dihedral needs N >= 1", original, base + m.start(2))
        order = 2 * value
        builder = _dihedral_table
    elif family == "symmetric":
        if not 1 <= value <= 5:
            raise GroupSpecError("symmetric needs 1 <= K <= 5", original, base + m.start(2))
        order = math.factorial(value)
        builder = _symmetric_table
    else:
        if value < 2:
            raise GroupSpecError("dicyclic needs M >= 2", original, base + m.start(2))
        order = 4 * value
        builder = _dicyclic_table
    if order > cap:
        raise GroupSpecError(f"order {order} exceeds the order cap {cap}",
                             original, base)
    return builder(value)


def parse_spec_lines(text: str) -> list[str]:
    """Extract group specs from text with one spec per line and ``#`` comments."""
    specs = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            specs.append(line)
    return specs


# ---------------------------------------------------------------------------
# axioms and the catalog


def verify_group_axioms(G: GroupTable) -> CheckReport:
    """Exhaustively check identity, inverses, associativity, and both Latin-square laws."""
    n, mul, inv = G.order, G.mul, G.inv
    items = []

    bad = next((x for x in range(n) if mul[0][x] != x or mul[x][0] != x), None)
    items.append(CheckItem("identity", bad is None,
                           "" if bad is None else f"fails at {G.name_of(bad)}"))

    bad = next((x for x in range(n)
                if mul[x][inv[x]] != 0 or mul[inv[x]][x] != 0), None)
    items.append(CheckItem("inverses", bad is None,
                           "" if bad is None else f"fails at {G.name_of(bad)}"))

    witness = None
    for x in range(n):
        row_x = mul[x]
        for y in range(n):
            xy = row_x[y]
            row_y = mul[y]
            row_xy = mul[xy]
            for z in range(n):
                if row_xy[z] != row_x[row_y[z]]:
                    witness = (x, y, z)
                    break
            if witness:
                break
        if witness:
            break
    items.append(CheckItem(
        "associativity", witness is None,
        "" if witness is None else
        "fails at ({}, {}, {})".format(*(G.name_of(w) for w in witness))))

    ids = list(range(n))
    bad_row = next((x for x in range(n) if sorted(mul[x]) != ids), None)
    bad_col = next((y for y in range(n)
                    if sorted(mul[x][y] for x in range(n)) != ids), None)
    items.append(CheckItem("latin_square", bad_row is None and bad_col is None,
                           "" if bad_row is None and bad_col is None else
                           f"row/column {bad_row if bad_row is not None else bad_col}"))

    return CheckReport(f"group axioms for {G.spec}", tuple(items))


def _factorize(n: int) -> dict[int, int]:
    f = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            f[d] = f.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        f[n] = f.get(n, 0) + 1
    return f


def _partitions(n: int):
    """Partitions of n as tuples with non-increasing parts, largest first."""
    def rec(remaining, maxpart):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, maxpart), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest
    yield from rec(n, n)


def _abelian_product_entries(max_order: int) -> list[tuple[int, str]]:
    """Non-cyclic abelian groups up to ``max_order`` as nested product specs."""
    entries = []
    for n in range(4, max_order + 1):
        primes = sorted(_factorize(n).items())
        per_prime = [list(_partitions(e)) for _, e in primes]
        for combo in itertools.product(*per_prime):
            if all(len(parts) == 1 for parts in combo):
                continue
            factors = sorted(p ** e
                             for (p, _), parts in zip(primes, combo)
                             for e in parts)
            spec = f"cyclic {factors[-1]}"
            for f in reversed(factors[:-1]):
                spec = f"product cyclic {f} ; {spec}"
            entries.append((n, spec))
    return entries


def catalog_specs(max_order: int) -> list[str]:
    """Deterministic list of catalog specs with order at most ``max_order``.

    The catalog covers all cyclic, dihedral, and dicyclic groups in range,
    the symmetric groups, the even permutations of four points, and every
    non-cyclic abelian group written as a product of prime-power cyclics.
    """
    entries: list[tuple[int, str]] = []
    entries.extend((n, f"cyclic {n}") for n in range(1, max_order + 1))
    entries.extend((2 * n, f"dihedral {n}") for n in range(1, max_order // 2 + 1))
    entries.extend((4 * m, f"dicyclic {m}") for m in range(2, max_order // 4 + 1))
    for k in range(3, 6):
        if math.factorial(k) <= max_order:
            entries.append((math.factorial(k), f"symmetric {k}"))
    if max_order >= 12:
        entries.append((12, ALTERNATING4_SPEC))
    entries.extend(_abelian_product_entries(max_order))
    entries.sort(key=lambda e: (e[0], e[1]))
    return [spec for _, spec in entries]
