"""Finite groups as Cayley tables.

Every group carries a full multiplication table over element indices, with
the identity at index 0.  Groups generated by permutations keep their
permutations (sorted lexicographically); structured constructions use the
left regular representation as their permutation carrier.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import config
from .errors import (
    DegreeMismatch,
    NotAnAction,
    NotNormal,
    NotPrime,
    OrderBoundExceeded,
)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _check_order(n: int, bound: int | None = None) -> None:
    bound = config.closure_bound() if bound is None else bound
    if n > bound:
        raise OrderBoundExceeded(f"group order {n} exceeds bound {bound}")
    if n > config.TABLE_BOUND:
        raise OrderBoundExceeded(
            f"group order {n} exceeds the Cayley table bound {config.TABLE_BOUND}")


def _int_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., degree-1}; ``(a * b)(x) == a(b(x))``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int | None = None) -> "Permutation":
        cycles = [tuple(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=-1) + 1
        degree = top if degree is None else degree
        if degree < top:
            raise ValueError("cycle point outside degree")
        images = list(range(degree))
        seen: set[int] = set()
        for c in cycles:
            if len(set(c)) != len(c) or seen & set(c):
                raise ValueError(f"cycles are not disjoint: {cycles}")
            seen |= set(c)
            for i, a in enumerate(c):
                images[a] = c[(i + 1) % len(c)]
        return cls(tuple(images))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise DegreeMismatch("degrees differ")
        return Permutation(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, a in enumerate(self.images):
            inv[a] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            c = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                c.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(c))
        return out


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[i, j]`` is the index of the product of elements ``i`` and ``j``.
    Index 0 is the identity.  Instances are treated as immutable; derived data
    is cached lazily.
    """

    def __init__(self, table: np.ndarray, origin: str = "", perms: Sequence[tuple[int, ...]] | None = None):
        table = np.ascontiguousarray(table, dtype=_int_dtype(len(table)))
        n = table.shape[0]
        if n < 1 or table.shape != (n, n):
            raise ValueError("multiplication table must be square and non-empty")
        if not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise ValueError("index 0 must be the identity")
        table.setflags(write=False)
        self.table = table
        self.origin = origin
        self.perms = None if perms is None else [tuple(p) for p in perms]
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, origin={self.origin!r})"

    def __len__(self) -> int:
        return self.order

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inv(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == 0)
        out = np.empty(self.order, dtype=np.int64)
        out[rows] = cols
        out.setflags(write=False)
        return out

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        k %= int(self.element_orders[a])
        x = 0
        for _ in range(k):
            x = int(self.table[x, a])
        return x

    def permutation(self, a: int) -> Permutation:
        if self.perms is not None:
            return Permutation(self.perms[a])
        return Permutation(tuple(int(x) for x in self.table[a]))

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        cur = ar.copy()
        k = 1
        while True:
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, ar]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(int(x) for x in set(self.element_orders.tolist())))

    @cached_property
    def commute(self) -> np.ndarray:
        return self.table == self.table.T

    @cached_property
    def centralizer_sizes(self) -> np.ndarray:
        return self.commute.sum(axis=1)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(self.commute.all())

    @cached_property
    def signatures(self) -> list[tuple[int, ...]]:
        """Isomorphism-invariant labels of elements, used to prune searches."""
        orders = self.element_orders
        cs = self.centralizer_sizes
        sq = self.table[np.arange(self.order), np.arange(self.order)]
        cube = self.table[sq, np.arange(self.order)]
        return [
            (int(orders[i]), int(cs[i]), int(cs[sq[i]]), int(cs[cube[i]]))
            for i in range(self.order)
        ]

    @cached_property
    def small_generators(self) -> tuple[int, ...]:
        """A short deterministic generating set, favouring rare element types."""
        if self.order == 1:
            return ()
        freq = Counter(self.signatures)
        orders = self.element_orders
        ranking = sorted(range(1, self.order),
                         key=lambda i: (freq[self.signatures[i]], -int(orders[i]), i))
        gens: list[int] = []
        span = np.zeros(self.order, dtype=bool)
        span[0] = True
        by_order = sorted(ranking, key=lambda i: (-int(orders[i]), freq[self.signatures[i]], i))
        if int(orders[by_order[0]]) == self.order:
            return (by_order[0],)
        # Try to find a 2-generated presentation first: common for catalog groups.
        for first in dict.fromkeys([ranking[0], by_order[0]]):
            cyc = closure_mask(self, [first])
            tried = 0
            for x in ranking:
                if cyc[x]:
                    continue
                if closure_mask(self, [first, x]).all():
                    return (first, x)
                tried += 1
                if tried >= 128:
                    break
        for x in by_order:
            if not span[x]:
                gens.append(x)
                span = closure_mask(self, gens)
                if span.all():
                    break
        # drop redundant generators
        i = 0
        while i < len(gens):
            trial = gens[:i] + gens[i + 1:]
            if trial and closure_mask(self, trial).all():
                gens = trial
            else:
                i += 1
        return tuple(gens)

    @cached_property
    def fingerprint(self) -> tuple:
        z = int((self.centralizer_sizes == self.order).sum())
        return (
            self.order,
            z,
            commutator_subgroup(self).order,
            tuple(sorted(Counter(self.signatures).items())),
        )

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        gens = tuple(int(g) for g in gens)
        mask = closure_mask(self, gens)
        return Subgroup(self, tuple(int(i) for i in np.flatnonzero(mask)), gens)

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), self.small_generators)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,), ())


def _powers(G: FiniteGroup, x: int) -> list[int]:
    row = G.table[:, x].tolist()
    out = [0]
    y = x
    while y:
        out.append(y)
        y = row[y]
    return out


def closure_mask(G: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    """Dimino-style closure: grow one generator at a time by whole right cosets."""
    gens = [int(g) for g in dict.fromkeys(int(g) for g in gens) if g]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    if not gens:
        return mask
    T = G.table
    mask[_powers(G, gens[0])] = True
    for i in range(1, len(gens)):
        if mask[gens[i]]:
            continue
        base = np.flatnonzero(mask)
        cur = gens[: i + 1]
        reps = [0]
        k = 0
        while k < len(reps):
            r = reps[k]
            k += 1
            for s in cur:
                x = int(T[r, s])
                if not mask[x]:
                    reps.append(x)
                    mask[T[base, x]] = True
    return mask


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]
    generators: tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    @cached_property
    def index_array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.members == self.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def is_subset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.index_array].all())

    def as_group(self, origin: str | None = None) -> FiniteGroup:
        """The subgroup as a standalone group; element i is ``members[i]``."""
        cache = self.__dict__.setdefault("_as_group", {})
        if "g" not in cache:
            idx = self.index_array
            relabel = np.full(self.parent.order, -1, dtype=np.int64)
            relabel[idx] = np.arange(len(idx))
            sub = relabel[self.parent.table[np.ix_(idx, idx)]]
            perms = None
            if self.parent.perms is not None:
                perms = [self.parent.perms[i] for i in idx]
            cache["g"] = FiniteGroup(sub, origin or f"subgroup of {self.parent.origin}", perms)
        return cache["g"]

    def is_normal(self) -> bool:
        G = self.parent
        gens = G.small_generators
        idx = self.index_array
        for g in gens:
            conj = G.table[G.table[g, idx], G.inv[g]]
            if not self.mask[conj].all():
                return False
        return True

    def is_cyclic(self) -> bool:
        return bool((self.parent.element_orders[self.index_array] == self.order).any())


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def is_homomorphism(self) -> bool:
        S, T = self.source, self.target
        if self.images[0] != 0:
            return False
        gens = S.small_generators
        for g in gens:
            lhs = self.images[S.table[:, g]]
            rhs = T.table[self.images, self.images[g]]
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def kernel(self) -> Subgroup:
        members = tuple(int(i) for i in np.flatnonzero(self.images == 0))
        return self.source.subgroup(members)

    def is_surjective(self) -> bool:
        return len(np.unique(self.images)) == self.target.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_surjective()


# ---------------------------------------------------------------- constructors


def group_from_permutations(gens: Sequence[Permutation], bound: int | None = None,
                            origin: str | None = None) -> FiniteGroup:
    bound = config.closure_bound() if bound is None else bound
    gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in gens]
    degrees = {g.degree for g in gens}
    if len(degrees) > 1:
        raise DegreeMismatch(f"generators have degrees {sorted(degrees)}")
    degree = degrees.pop() if degrees else 1
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gen_images = [g.images for g in gens]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gen_images:
                q = tuple(p[i] for i in g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > bound:
                        raise OrderBoundExceeded(f"closure exceeds {bound} elements")
        frontier = nxt
    perms = sorted(seen)
    _check_order(len(perms), bound)
    table = _perm_table(np.array(perms, dtype=np.int64).reshape(len(perms), degree))
    name = origin or "perm[" + ";".join(_cycle_str(g) for g in gens) + "]"
    return FiniteGroup(table, name, perms)


def _cycle_str(p: Permutation) -> str:
    return "".join("(" + " ".join(map(str, c)) + ")" for c in p.cycles()) or "()"


def _perm_table(P: np.ndarray) -> np.ndarray:
    n, deg = P.shape
    # a base: points whose images determine the element
    base: list[int] = []
    for pt in range(deg):
        base.append(pt)
        if len(np.unique(P[:, base], axis=0)) == n:
            break
    k = len(base)
    PB = P[:, base]
    if deg ** k < 2**62:
        weights = np.array([deg**i for i in range(k)], dtype=np.int64)
        keys = PB @ weights
        order = np.argsort(keys)
        skeys = keys[order]
        table = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            prod_keys = P[i][PB] @ weights
            table[i] = order[np.searchsorted(skeys, prod_keys)]
        return table
    lookup = {row.tobytes(): i for i, row in enumerate(PB)}
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        prod = P[i][PB]
        table[i] = [lookup[row.tobytes()] for row in prod]
    return table


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    _check_order(n)
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, f"C({n})")


def _metacyclic_table(N: int, square: int) -> np.ndarray:
    """Group of elements y^a x^b (a < N, b < 2) with x y x^-1 = y^-1, x^2 = y^square.

    Element y^a x^b has index b*N + a.
    """
    a = np.arange(N)
    A = np.concatenate([a, a])
    B = np.concatenate([np.zeros(N, dtype=np.int64), np.ones(N, dtype=np.int64)])
    s = 1 - 2 * B  # (-1)^b
    new_a = A[:, None] + s[:, None] * A[None, :]
    bsum = B[:, None] + B[None, :]
    new_a = np.where(bsum == 2, new_a + square, new_a) % N
    new_b = bsum % 2
    return new_b * N + new_a


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given ORDER (so ``dihedral_group(4)`` is the Klein four group)."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even")
    _check_order(order)
    return FiniteGroup(_metacyclic_table(order // 2, 0), f"D({order})")


def binary_dihedral_group(order: int) -> FiniteGroup:
    """Q(order): generalized quaternion / binary dihedral group, 4 | order."""
    if order < 4 or order % 4:
        raise ValueError("binary dihedral order must be a multiple of 4")
    _check_order(order)
    N = order // 2
    return FiniteGroup(_metacyclic_table(N, N // 2), f"Q({order})")


def direct_product(G: FiniteGroup, H: FiniteGroup, origin: str | None = None) -> FiniteGroup:
    """Elements (g, h) indexed g*|H| + h."""
    n = G.order * H.order
    _check_order(n)
    nH = H.order
    table = (G.table.astype(np.int64)[:, None, :, None] * nH
             + H.table.astype(np.int64)[None, :, None, :]).reshape(n, n)
    return FiniteGroup(table, origin or f"{G.origin} x {H.origin}")


def product_projections(G: FiniteGroup, H: FiniteGroup, P: FiniteGroup) -> tuple[Homomorphism, Homomorphism]:
    idx = np.arange(P.order)
    return (Homomorphism(P, G, idx // H.order), Homomorphism(P, H, idx % H.order))


def _spanning_tree(G: FiniteGroup, gens: Sequence[int]):
    """BFS tree of the right Cayley graph: returns BFS order, parent, generator index."""
    n = G.order
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    order = [0]
    levels = []
    frontier = [0]
    while frontier:
        level_x, level_p, level_k = [], [], []
        for x in frontier:
            for k, g in enumerate(gens):
                y = int(G.table[x, g])
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    via[y] = k
                    level_x.append(y)
                    level_p.append(x)
                    level_k.append(k)
        if level_x:
            levels.append((np.array(level_x), np.array(level_p), np.array(level_k)))
            order.extend(level_x)
        frontier = level_x
    return order, parent, via, levels, seen


def extend_from_generators(G: FiniteGroup, gens: Sequence[int], H: FiniteGroup,
                           images: Sequence[int], check: bool = True) -> np.ndarray | None:
    """The map G -> H sending gens to images, or None if it is not a homomorphism."""
    _, _, _, levels, seen = G._cache.setdefault(("tree", tuple(gens)), _spanning_tree(G, gens))
    if not seen.all():
        raise ValueError("elements do not generate the group")
    img = np.zeros(G.order, dtype=np.int64)
    himg = np.array(images, dtype=np.int64)
    for xs, ps, ks in levels:
        img[xs] = H.table[img[ps], himg[ks]]
    if check:
        for g, h in zip(gens, images):
            if not np.array_equal(img[G.table[:, g]], H.table[img, h]):
                return None
    return img


def unit_action(G: FiniteGroup, n: int, act: Mapping[int, int]) -> np.ndarray:
    """Extend generator -> unit-mod-n assignments to a homomorphism G -> (Z/n)^x."""
    gens = sorted(act)
    units = {g: act[g] % n for g in gens}
    for g, u in units.items():
        if math.gcd(u, n) != 1 and n > 1:
            raise NotAnAction(f"{act[g]} is not a unit mod {n}")
    _, _, _, levels, seen = _spanning_tree(G, gens)
    if not seen.all():
        raise NotAnAction("the acting elements do not generate the group")
    phi = np.ones(G.order, dtype=np.int64)
    u = np.array([units[g] for g in gens], dtype=np.int64)
    for xs, ps, ks in levels:
        phi[xs] = (phi[ps] * u[ks]) % max(n, 1)
    if n > 1:
        for g in gens:
            if not np.array_equal(phi[G.table[:, g]], (phi * units[g]) % n):
                raise NotAnAction("assignment does not respect the group relations")
    return phi % max(n, 1)


def semidirect_cyclic(n: int, G: FiniteGroup, act: Mapping[int, int], origin: str | None = None) -> FiniteGroup:
    """Z/n ⋊ G with g acting on Z/n by multiplication by ``act``'s extension.

    ``act`` maps element indices of G (a generating set) to integers coprime to n.
    Element (a, g) has index g*n + a; (a, g)(b, h) = (a + phi(g) b, gh).
    """
    if n < 1:
        raise ValueError("n must be positive")
    total = n * G.order
    _check_order(total)
    phi = unit_action(G, n, act)
    a = np.arange(n)
    table = np.empty((total, total), dtype=np.int64)
    for g in range(G.order):
        rows = slice(g * n, (g + 1) * n)
        new_a = (a[:, None, None] + phi[g] * a[None, None, :]) % n  # (n, 1, n)
        gh = G.table[g].astype(np.int64)[None, :, None] * n
        table[rows] = (gh + new_a).reshape(n, total)
    return FiniteGroup(table, origin or f"C({n}):{G.origin}")


def quotient(G: FiniteGroup, N: Subgroup, origin: str | None = None) -> tuple[FiniteGroup, Homomorphism]:
    if N.parent is not G:
        raise ValueError("subgroup belongs to a different group")
    if not N.is_normal():
        raise NotNormal("subgroup is not normal")
    idx = N.index_array
    reps_of = G.table[:, idx].min(axis=1)
    reps, labels = np.unique(reps_of, return_inverse=True)
    labels = labels.astype(np.int64)
    table = labels[G.table[np.ix_(reps, reps)]]
    Q = FiniteGroup(table, origin or f"{G.origin}/{N.order}")
    return Q, Homomorphism(G, Q, labels)


# ---------------------------------------------------------------- queries


def center(G: FiniteGroup) -> Subgroup:
    members = tuple(int(i) for i in np.flatnonzero(G.centralizer_sizes == G.order))
    return G.subgroup(members)


def _commutator_of(G: FiniteGroup, A: np.ndarray, B: np.ndarray) -> Subgroup:
    T, inv = G.table, G.inv
    X = T[np.ix_(inv[A], inv[B])]
    Y = T[np.ix_(A, B)]
    comms = np.unique(T[X, Y])
    mask = closure_mask(G, comms)
    return Subgroup(G, tuple(int(i) for i in np.flatnonzero(mask)), tuple(int(c) for c in comms[:8]))


def commutator_subgroup(G: FiniteGroup) -> Subgroup:
    if "derived" not in G._cache:
        full = np.arange(G.order)
        G._cache["derived"] = _commutator_of(G, full, full)
    return G._cache["derived"]


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    series = [G.whole()]
    while True:
        cur = series[-1]
        nxt = _commutator_of(G, cur.index_array, cur.index_array)
        if nxt.order == cur.order:
            return series
        series.append(nxt)


def normalizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    gens = np.array(S.generators or S.members, dtype=np.int64)
    T = G.table
    conj = T[T[:, gens], G.inv[:, None]]  # g s g^-1
    ok = S.mask[conj].all(axis=1)
    return G.subgroup(np.flatnonzero(ok))


def centralizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    gens = np.array(S.generators or S.members, dtype=np.int64)
    ok = G.commute[:, gens].all(axis=1)
    return G.subgroup(np.flatnonzero(ok))


def norm_cent(G: FiniteGroup, S: Subgroup) -> tuple[Subgroup, Subgroup]:
    return normalizer(G, S), centralizer(G, S)


def sylow(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown one p-element at a time inside normalizers."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    key = ("sylow", p)
    if key in G._cache:
        return G._cache[key]
    target = p_part(G.order, p)
    orders = G.element_orders
    p_elems = np.flatnonzero([p_part(int(o), p) == int(o) and o > 1 for o in orders])
    P = G.trivial()
    while P.order < target:
        N = normalizer(G, P)
        cand = p_elems[N.mask[p_elems] & ~P.mask[p_elems]]
        if cand.size == 0:
            raise RuntimeError("Sylow growth stalled")  # impossible by Sylow's theorems
        x = int(cand[0])
        P = G.subgroup(P.generators + (x,))
    G._cache[key] = P
    return P


def central_cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    Z = center(G)
    seen: dict[tuple[int, ...], Subgroup] = {}
    done: set[int] = set()
    for z in Z.members:
        if z in done:
            continue
        pw = _powers(G, z) if z else [0]
        k = len(pw)
        done.update(pw[j] for j in range(k) if math.gcd(j, k) == 1)
        S = Subgroup(G, tuple(sorted(pw)), (z,) if z else ())
        seen.setdefault(S.members, S)
    return sorted(seen.values(), key=lambda S: (S.order, S.members))


def subgroups_of_order(G: FiniteGroup, p: int) -> list[Subgroup]:
    """All cyclic subgroups of prime order p."""
    out: dict[tuple[int, ...], Subgroup] = {}
    for x in np.flatnonzero(G.element_orders == p):
        S = G.subgroup((int(x),))
        out.setdefault(S.members, S)
    return [out[k] for k in sorted(out)]


def is_cyclic(G: FiniteGroup) -> bool:
    return bool((G.element_orders == G.order).any())


# ---------------------------------------------------------------- isomorphism


def is_isomorphic(G: FiniteGroup, H: FiniteGroup, bound: int | None = None) -> tuple[bool, Homomorphism | None]:
    """Exact isomorphism test: invariant screening, then generator-image backtracking."""
    bound = config.ISO_BOUND if bound is None else bound
    if max(G.order, H.order) > bound:
        raise OrderBoundExceeded(f"isomorphism test above bound {bound}")
    if G.order != H.order:
        return False, None
    if G is H:
        return True, Homomorphism(G, H, np.arange(G.order))
    if G.fingerprint != H.fingerprint:
        return False, None
    if G.order == 1:
        return True, Homomorphism(G, H, np.zeros(1, dtype=np.int64))
    gens = list(G.small_generators)
    gsig = G.signatures
    hsig = H.signatures
    by_sig: dict = {}
    for i, s in enumerate(hsig):
        by_sig.setdefault(s, []).append(i)
    cands = [by_sig.get(gsig[g], []) for g in gens]
    T_G, T_H = G.table, H.table
    # pairwise product signatures as cheap filters
    pair_sig = {(i, j): gsig[int(T_G[gens[i], gens[j]])]
                for i in range(len(gens)) for j in range(len(gens)) if i != j}

    def rec(k: int, chosen: list[int]):
        if k == len(gens):
            img = extend_from_generators(G, gens, H, chosen)
            if img is not None and len(np.unique(img)) == H.order:
                return img
            return None
        for h in cands[k]:
            if any(hsig[int(T_H[chosen[i], h])] != pair_sig[(i, k)]
                   or hsig[int(T_H[h, chosen[i]])] != pair_sig[(k, i)] for i in range(k)):
                continue
            chosen.append(h)
            res = rec(k + 1, chosen)
            chosen.pop()
            if res is not None:
                return res
        return None

    img = rec(0, [])
    if img is None:
        return False, None
    return True, Homomorphism(G, H, img)
