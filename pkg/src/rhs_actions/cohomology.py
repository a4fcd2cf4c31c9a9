"""Cohomology of finite groups with trivial coefficients.

H^2(G, Z/m) is computed from a spanning tree of the Cayley graph: with
F -> G free on the chosen generators and R the relation subgroup (free on the
Schreier generators, one per non-tree edge),

    H^2(G, A) = Hom_F(R, A) / image of Hom(F, A).

A homomorphism R -> A is a voltage assignment on non-tree edges; F-invariance
is a linear condition.  This keeps the systems at size ~|G|·(gens-1) instead
of the |G|^2 x |G|^3 bar-complex matrices, which are only used as an oracle
(`bar_cohomology`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Sequence

import numpy as np

from . import config
from .errors import BudgetExceeded, InvalidCocycle, SubgroupMismatch
from .groups import (FiniteGroup, Homomorphism, Subgroup, _check_order, _spanning_tree, p_part,
                     prime_factors)
from .linalg import local_snf, mod_quotient


@dataclass(eq=False)
class TwoCocycle:
    """Normalized 2-cocycle G x G -> Z/m with trivial action."""

    group: FiniteGroup
    m: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64) % self.m

    @classmethod
    def zero(cls, G: FiniteGroup, m: int) -> "TwoCocycle":
        return cls(G, m, np.zeros((G.order, G.order), dtype=np.int64))

    def __call__(self, g: int, h: int) -> int:
        return int(self.values[g, h])

    def is_normalized(self) -> bool:
        return not (self.values[0].any() or self.values[:, 0].any())

    def is_cocycle(self) -> bool:
        """f(g,h) + f(gh,k) == f(h,k) + f(g,hk) on all triples."""
        G, f, m = self.group, self.values, self.m
        T = G.table
        for g in range(G.order):
            gh = T[g]                      # indexed by h
            lhs = f[g][:, None] + f[gh][:, :]   # (h, k)
            rhs = f + f[g][T][:, :]             # f(h,k) + f(g, hk)
            if np.any((lhs - rhs) % m):
                return False
        return True

    def __add__(self, other: "TwoCocycle") -> "TwoCocycle":
        return TwoCocycle(self.group, self.m, self.values + other.values)

    def scaled(self, c: int) -> "TwoCocycle":
        return TwoCocycle(self.group, self.m, self.values * c)


@dataclass(eq=False)
class CohomologyGroup:
    factors: list[int]
    representatives: list[TwoCocycle] = field(default_factory=list)
    classes: list[TwoCocycle] | None = None

    @property
    def order(self) -> int:
        return math.prod(self.factors)


@dataclass(eq=False)
class CentralExtension:
    total: FiniteGroup
    kernel: Subgroup
    projection: Homomorphism
    cocycle: TwoCocycle


# ---------------------------------------------------------------- Schreier complex


class H2Computation:
    """The voltage complex for (G, m) and its quotient module."""

    def __init__(self, G: FiniteGroup, m: int):
        if G.order > config.H2_BOUND:
            raise BudgetExceeded(f"H^2 computation limited to |G| <= {config.H2_BOUND}")
        self.G, self.m = G, m
        gens = list(G.small_generators)
        self.gens = gens
        n, d = G.order, len(gens)
        T = G.table
        order, parent, via, levels, _ = _spanning_tree(G, gens)
        self.levels = levels
        edge_id = np.full((n, d), -1, dtype=np.int64)
        nxt = T[:, gens] if d else np.zeros((n, 0), dtype=np.int64)
        is_tree = np.zeros((n, d), dtype=bool)
        for xs, ps, ks in levels:
            is_tree[ps, ks] = True
        nontree = np.argwhere(~is_tree)
        N = len(nontree)
        edge_id[nontree[:, 0], nontree[:, 1]] = np.arange(N)
        self.edge_id, self.N = edge_id, N
        self.nontree = nontree

        def onehot(ids):
            out = np.zeros((len(ids), N), dtype=np.int64)
            ok = ids >= 0
            out[np.flatnonzero(ok), ids[ok]] = 1
            return out

        # letter counts of tree words
        letters = np.zeros((n, d), dtype=np.int64)
        for xs, ps, ks in levels:
            letters[xs] = letters[ps]
            letters[xs, ks] += 1
        x, k = nontree[:, 0], nontree[:, 1]
        B = letters[x] - letters[nxt[x, k]]
        B[np.arange(N), k] += 1
        self.B = B  # N x d

        blocks = []
        for j, g in enumerate(gens):
            W = np.zeros((n, N), dtype=np.int64)
            for xs, ps, ks in levels:
                W[xs] = W[ps] + onehot(edge_id[T[g, ps], ks])
            rows = W[x] + onehot(edge_id[T[g, x], k]) - W[nxt[x, k]]
            rows[np.arange(N), np.arange(N)] -= 1
            blocks.append(rows)
        C = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, N), dtype=np.int64)
        if C.shape[0] == 0:
            C = np.zeros((1, N), dtype=np.int64)
        self.C = C
        if N == 0 or m == 1:
            self.quotient = None
        else:
            self.quotient = mod_quotient(C, B, m)

    @property
    def factors(self) -> list[int]:
        return [] if self.quotient is None else list(self.quotient.factors)

    def cocycle_from_voltages(self, u: np.ndarray) -> TwoCocycle:
        G, m = self.G, self.m
        n, d = G.order, len(self.gens)
        U = np.zeros((n, d), dtype=np.int64)
        if self.N:
            U[self.nontree[:, 0], self.nontree[:, 1]] = np.asarray(u, dtype=np.int64) % m
        F = np.zeros((n, n), dtype=np.int64)
        T = G.table
        for xs, ps, ks in self.levels:
            F[:, xs] = (F[:, ps] + U[T[:, ps], ks[None, :]]) % m
        return TwoCocycle(G, m, F)

    def voltages_from_cocycle(self, f: TwoCocycle) -> np.ndarray:
        G, m = self.G, self.m
        vals = f.values
        c = np.zeros(G.order, dtype=np.int64)
        gens = np.array(self.gens, dtype=np.int64)
        for xs, ps, ks in self.levels:
            c[xs] = (c[ps] + vals[ps, gens[ks]]) % m
        x, k = self.nontree[:, 0], self.nontree[:, 1]
        y = G.table[x, gens[k]]
        return (c[x] + vals[x, gens[k]] - c[y]) % m

    def coordinates(self, f: TwoCocycle) -> list[int]:
        if self.quotient is None:
            return []
        return self.quotient.coordinates(self.voltages_from_cocycle(f))

    def class_order(self, f: TwoCocycle) -> int:
        if self.quotient is None:
            return 1
        return self.quotient.element_order(self.voltages_from_cocycle(f))

    def generators(self) -> list[TwoCocycle]:
        if self.quotient is None:
            return []
        return [self.cocycle_from_voltages(v) for v in self.quotient.generators]

    def class_of(self, coords: Sequence[int]) -> TwoCocycle:
        u = np.zeros(self.N, dtype=np.int64)
        if self.quotient is not None:
            for c, v in zip(coords, self.quotient.generators):
                u = (u + c * v) % self.m
        return self.cocycle_from_voltages(u)


def _h2_computation(G: FiniteGroup, m: int) -> H2Computation:
    key = ("h2", m)
    if key not in G._cache:
        G._cache[key] = H2Computation(G, m)
    return G._cache[key]


def h2_trivial(G: FiniteGroup, m: int, enumerate: bool = False,
               limit: int = config.ENUMERATION_LIMIT) -> CohomologyGroup:
    """H^2(G, Z/m), trivial action, with normalized cocycle representatives."""
    if m < 1:
        raise ValueError("modulus must be positive")
    comp = _h2_computation(G, m)
    H = CohomologyGroup(comp.factors, comp.generators())
    if enumerate:
        if H.order > limit:
            raise BudgetExceeded(f"|H^2| = {H.order} exceeds enumeration limit {limit}")
        H.classes = [comp.class_of(c) for c in iproduct(*(range(d) for d in H.factors))]
    return H


def enumerate_classes(G: FiniteGroup, m: int, limit: int = config.ENUMERATION_LIMIT):
    """Yield (coordinates, cocycle) for each class, or for generators only above ``limit``."""
    comp = _h2_computation(G, m)
    factors = comp.factors
    if math.prod(factors) <= limit:
        for c in iproduct(*(range(d) for d in factors)):
            yield list(c), comp.class_of(c)
    else:
        yield [0] * len(factors), comp.class_of([0] * len(factors))
        for i in range(len(factors)):
            c = [0] * len(factors)
            c[i] = 1
            yield c, comp.class_of(c)


def class_coordinates(f: TwoCocycle) -> list[int]:
    return _h2_computation(f.group, f.m).coordinates(f)


def is_split_class(f: TwoCocycle) -> bool:
    return class_exponent(f) == 1


def class_exponent(f: TwoCocycle) -> int:
    return _h2_computation(f.group, f.m).class_order(f)


def restrict_class(f: TwoCocycle, S: Subgroup) -> TwoCocycle:
    if S.parent is not f.group:
        raise SubgroupMismatch("subgroup of a different group")
    idx = S.index_array
    return TwoCocycle(S.as_group(), f.m, f.values[np.ix_(idx, idx)])


def coboundary(G: FiniteGroup, m: int, c: np.ndarray) -> TwoCocycle:
    """(dc)(g, h) = c(h) - c(gh) + c(g)."""
    c = np.asarray(c, dtype=np.int64)
    return TwoCocycle(G, m, c[None, :] - c[G.table] + c[:, None])


# ---------------------------------------------------------------- extensions


def extension_from_cocycle(G: FiniteGroup, m: int, f: TwoCocycle, check: bool = True) -> CentralExtension:
    """Z/m x G with (a,g)(b,h) = (a+b+f(g,h), gh); element (a,g) has index g*m + a."""
    if f.group is not G or f.m != m:
        raise InvalidCocycle("cocycle does not match (G, m)")
    if check and not (f.is_normalized() and f.is_cocycle()):
        raise InvalidCocycle("not a normalized 2-cocycle")
    n = G.order
    total = n * m
    _check_order(total)
    a = np.arange(m)
    TG = G.table.astype(np.int64)
    table = (TG[:, None, :, None] * m
             + (a[None, :, None, None] + a[None, None, None, :] + f.values[:, None, :, None]) % m)
    E = FiniteGroup(table.reshape(total, total), f"ext({G.origin}, Z/{m})")
    kernel = E.subgroup([1] if m > 1 else [])
    proj = Homomorphism(E, G, np.arange(total) // m)
    return CentralExtension(E, kernel, proj, f)


def cocycle_from_extension(E: FiniteGroup, z: int, proj: Homomorphism, m: int,
                           section: Sequence[int] | None = None) -> TwoCocycle:
    """Cocycle of a central extension with kernel <z> of order m, via a set-theoretic section."""
    G = proj.target
    if section is None:
        section = [0] * G.order
        seen = set()
        for e in range(E.order):
            g = int(proj.images[e])
            if g not in seen:
                seen.add(g)
                section[g] = e
        section[0] = 0
    section = np.asarray(section, dtype=np.int64)
    log = np.full(E.order, -1, dtype=np.int64)
    x = 0
    for a in range(m):
        log[x] = a
        x = int(E.table[x, z])
    T = E.table
    prod = T[section[:, None], section[None, :]]                 # s(g)s(h)
    target = section[G.table]                                    # s(gh)
    diff = T[prod, E.inv[target]]
    vals = log[diff]
    if np.any(vals < 0):
        raise InvalidCocycle("kernel is not generated by z or section is not a section")
    return TwoCocycle(G, m, vals)


# ---------------------------------------------------------------- bar complex


def _bar_delta(G: FiniteGroup, k: int) -> np.ndarray:
    """Normalized bar coboundary C^k -> C^{k+1} (trivial action) as a dense matrix."""
    n = G.order
    if k == 0:
        return np.zeros(((n - 1), 1), dtype=np.int64)
    base = n - 1
    R = base ** (k + 1)
    cols = base**k
    tuples = np.array(list(iproduct(range(1, n), repeat=k + 1)), dtype=np.int64).reshape(R, k + 1)
    weights = np.array([base ** (k - 1 - i) for i in range(k)], dtype=np.int64)

    def col_index(t):  # t: (R, k) of nonidentity elements
        return (t - 1) @ weights

    D = np.zeros((R, cols), dtype=np.int64)
    rows = np.arange(R)
    np.add.at(D, (rows, col_index(tuples[:, 1:])), 1)
    for i in range(1, k + 1):
        merged = G.table[tuples[:, i - 1], tuples[:, i]]
        t = np.concatenate([tuples[:, : i - 1], merged[:, None], tuples[:, i + 1:]], axis=1)
        ok = merged != 0
        np.add.at(D, (rows[ok], col_index(t[ok])), (-1) ** i)
    np.add.at(D, (rows, col_index(tuples[:, :k])), (-1) ** (k + 1))
    return D


def _chain(primary: dict[int, list[int]]) -> list[int]:
    cols: list[int] = []
    for p, exps in primary.items():
        for pos, x in enumerate(sorted(exps, reverse=True)):
            while len(cols) <= pos:
                cols.append(1)
            cols[pos] *= x
    return sorted(c for c in cols if c > 1)


def bar_cohomology(G: FiniteGroup, coeff: int | str, degree: int) -> CohomologyGroup:
    """Cohomology from the normalized bar complex, degrees 0..4 (5 for tiny groups).

    ``coeff`` is "Z" or a modulus m.  Degree 0 returns the Tate group
    (Z/|G| or Z/gcd(|G|, m)).  For Z coefficients in positive degree d the
    group is the torsion of coker(delta_{d-1}), which equals H^d for a finite
    group.
    """
    n = G.order
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if degree == 0:
        g = n if coeff in ("Z", None) else math.gcd(n, int(coeff))
        return CohomologyGroup([g] if g > 1 else [])
    if n == 1:
        return CohomologyGroup([])
    top = degree - 1 if coeff in ("Z", None) else degree
    if degree > max(config.BAR_BOUNDS) or (n - 1) ** (top + 1) > 4096:
        raise BudgetExceeded(f"bar complex in degree {degree} too large for |G| = {n}")
    if coeff in ("Z", None):
        D = _bar_delta(G, degree - 1)
        primary = {}
        for p in prime_factors(n):
            e = int(round(math.log(p_part(n, p), p))) + 1
            snf = local_snf(D, p, e)
            primary[p] = [p**a for a in snf.vals if 0 < a < e]
        return CohomologyGroup(_chain(primary))
    m = int(coeff)
    if m == 1:
        return CohomologyGroup([])
    Dk = _bar_delta(G, degree)
    Dprev = _bar_delta(G, degree - 1)
    q = mod_quotient(Dk, Dprev, m)
    return CohomologyGroup(list(q.factors))


def tate_cyclic(n: int, coeff: int | str, degree: int) -> int:
    """Order of the Tate group H^d(C_n; coeff) with trivial action (always cyclic)."""
    if n < 1:
        raise ValueError("n must be positive")
    if coeff in ("Z", None):
        return n if degree % 2 == 0 else 1
    return math.gcd(n, int(coeff))
