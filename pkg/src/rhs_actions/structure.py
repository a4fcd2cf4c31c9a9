"""p-ranks, the 2-group taxonomy, periodicity and Swan periods."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotA2Group, NotPrime
from .groups import FiniteGroup, Subgroup, is_prime, norm_cent, prime_factors, sylow

TWO_GROUP_TAGS = ("cyclic", "klein_four", "dihedral", "semidihedral", "generalized_quaternion", "other")


@dataclass(frozen=True)
class TwoGroupClass:
    tag: str
    order: int

    @property
    def dihedral_like(self) -> bool:
        """Dihedral in the wide sense used by the corollary rules (Klein four included)."""
        return self.tag in ("dihedral", "klein_four")


@dataclass(frozen=True)
class PrimeData:
    sylow_class: str
    sylow_order: int
    p_rank: int
    p_period: int | None = None
    phi_order: int | None = None

    def as_dict(self) -> dict:
        return {"sylow_class": self.sylow_class, "sylow_order": self.sylow_order, "p_rank": self.p_rank,
                "p_period": self.p_period, "phi_order": self.phi_order}


@dataclass(frozen=True)
class PeriodReport:
    periodic: bool
    period: int | None
    per_prime: dict[int, PrimeData] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"periodic": self.periodic, "period": self.period,
                "per_prime": {str(p): d.as_dict() for p, d in sorted(self.per_prime.items())}}


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


def p_rank(G: FiniteGroup, p: int) -> int:
    """Largest r with (Z/p)^r <= G, by branch and bound inside a Sylow p-subgroup."""
    _require_prime(p)
    P = sylow(G, p)
    if P.order == 1:
        return 0
    S = P.as_group()
    ords = S.element_orders
    elems = np.flatnonzero(ords == p)
    if len(elems) == p - 1:
        return 1
    comm = S.commute
    T = S.table
    best = 1

    def span(members: np.ndarray, x: int) -> np.ndarray:
        # members is closed; add the powers of x times members
        out = [members]
        y = x
        for _ in range(p - 1):
            out.append(T[members, y])
            y = int(T[y, x])
        return np.unique(np.concatenate(out))

    def search(members: np.ndarray, rank: int, cands: np.ndarray) -> None:
        nonlocal best
        best = max(best, rank)
        if len(cands) == 0:
            return
        if rank + int(math.floor(math.log(len(cands) / p**rank + 1, p) + 1e-9)) <= best:
            return
        for i, x in enumerate(cands):
            new = span(members, int(x))
            rest = cands[i + 1:]
            rest = rest[comm[x, rest] & ~np.isin(rest, new)]
            search(new, rank + 1, rest)
            if best == round(math.log(S.order, p)):
                return

    search(np.array([0]), 0, elems)
    return best


def classify_2group(P: FiniteGroup) -> TwoGroupClass:
    n = P.order
    if n < 1 or n & (n - 1):
        raise NotA2Group(f"order {n} is not a power of 2")
    ords = P.element_orders
    if n == 1 or int(ords.max()) == n:
        return TwoGroupClass("cyclic", n)
    if n == 4:
        return TwoGroupClass("klein_four", n)
    half = n // 2
    T = P.table
    for x in np.flatnonzero(ords == half):
        x = int(x)
        powers = [0]
        for _ in range(half - 1):
            powers.append(int(T[powers[-1], x]))
        inside = np.zeros(n, dtype=bool)
        inside[powers] = True
        outside = np.flatnonzero(~inside)
        y = int(outside[0])
        conj = int(T[T[y, x], P.inv[y]])
        k = powers.index(conj)
        if k == half - 1:
            if np.any(ords[outside] == 2):
                return TwoGroupClass("dihedral", n)
            return TwoGroupClass("generalized_quaternion", n)
        if n >= 16 and k == half // 2 - 1:
            return TwoGroupClass("semidihedral", n)
    return TwoGroupClass("other", n)


def sylow_class(G: FiniteGroup, p: int) -> str:
    P = sylow(G, p)
    if p == 2:
        return classify_2group(P.as_group()).tag
    return "cyclic" if P.is_cyclic() else "noncyclic"


def _rank_one_everywhere(G: FiniteGroup) -> bool:
    """No pair of commuting order-p elements generating a non-cyclic group."""
    ords = G.element_orders
    comm = G.commute
    for p in prime_factors(G.order):
        xs = np.flatnonzero(ords == p)
        counts = comm[np.ix_(xs, xs)].sum(axis=1)
        if np.any(counts != p - 1):
            return False
    return True


def is_periodic(G: FiniteGroup) -> bool:
    by_rank = _rank_one_everywhere(G)
    by_sylow = all(
        sylow_class(G, p) in (("cyclic", "generalized_quaternion") if p == 2 else ("cyclic",))
        for p in prime_factors(G.order)
    )
    if by_rank != by_sylow:
        raise RuntimeError(f"periodicity routes disagree on {G!r}")
    return by_rank


def phi_order(G: FiniteGroup, P: Subgroup) -> int:
    N, C = norm_cent(G, P)
    return N.order // C.order


def period(G: FiniteGroup) -> PeriodReport:
    per_prime: dict[int, PrimeData] = {}
    periodic = True
    for p in prime_factors(G.order):
        P = sylow(G, p)
        tag = sylow_class(G, p)
        rank = p_rank(G, p)
        if rank != 1:
            periodic = False
            per_prime[p] = PrimeData(tag, P.order, rank)
            continue
        phi = phi_order(G, P)
        if p == 2:
            pp = 2 if tag == "cyclic" else 4
        else:
            pp = 2 * phi
        per_prime[p] = PrimeData(tag, P.order, rank, pp, phi)
    if not periodic:
        return PeriodReport(False, None, per_prime)
    total = 2
    for d in per_prime.values():
        total = math.lcm(total, d.p_period)
    return PeriodReport(True, total, per_prime)

