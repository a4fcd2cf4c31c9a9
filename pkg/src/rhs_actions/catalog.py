"""Period-four families: Hopf-list groups, Q(8n,k,l), O(48,k,l) and the A/B/C taxonomy."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import config
from .errors import BadParameter, OrderBoundExceeded, Unrecognized
from .groups import (FiniteGroup, Permutation, binary_dihedral_group, commutator_subgroup, cyclic_group,
                     dihedral_group, direct_product, group_from_permutations, is_isomorphic, is_prime,
                     semidirect_cyclic, sylow)
from .structure import classify_2group, is_periodic, period

SL2_MAX_PRIME = 13


@dataclass(frozen=True)
class MilnorType:
    tag: str
    parameters: dict = field(default_factory=dict)
    inner: str | None = None

    def as_dict(self) -> dict:
        return {"tag": self.tag, "inner": self.inner, "parameters": dict(self.parameters)}


def _crt(residues: list[tuple[int, int]]) -> int:
    """x with x = r mod q for each (r, q); moduli pairwise coprime."""
    x, mod = 0, 1
    for r, q in residues:
        if q == 1:
            continue
        t = ((r - x) * pow(mod, -1, q)) % q
        x, mod = x + mod * t, mod * q
    return x % mod if mod > 1 else 0


# ---------------------------------------------------------------- standard groups


@lru_cache(maxsize=None)
def _sl2(p: int) -> FiniteGroup:
    """SL_2(F_p) acting on the p^2 - 1 nonzero vectors; vector (x, y) is point x*p + y - 1."""
    vecs = [(x, y) for x in range(p) for y in range(p) if (x, y) != (0, 0)]

    def perm(a, b, c, d):
        return Permutation(tuple(((a * x + b * y) % p) * p + (c * x + d * y) % p - 1 for x, y in vecs))

    G = group_from_permutations([perm(1, 1, 0, 1), perm(0, p - 1, 1, 0)], origin=f"SL(2,{p})")
    assert G.order == p * (p * p - 1)
    return G


@lru_cache(maxsize=None)
def _binary_octahedral() -> FiniteGroup:
    """The order-48 subgroup of SL_2(7) generated by an element of order 8 and the first partner that works."""
    S = _sl2(7)
    ords = S.element_orders
    a = int(np.flatnonzero(ords == 8)[0])
    for b in np.flatnonzero(ords == 3):
        H = S.subgroup((a, int(b)))
        if H.order == 48:
            G = H.as_group("BO")
            assert int((G.element_orders == 2).sum()) == 1
            return G
    raise RuntimeError("binary octahedral subgroup not found")  # pragma: no cover


def make_standard(family: str, *params: int) -> FiniteGroup:
    """C(n), D(order), Q(order), BT, BO, BI or SL2(p)."""
    fam = family.upper()
    try:
        if fam == "C":
            (n,) = params
            if n < 1:
                raise BadParameter("C(n) needs n >= 1")
            return cyclic_group(n)
        if fam == "D":
            (n,) = params
            if n < 4 or n % 2:
                raise BadParameter("D(n) needs an even order n >= 4")
            return dihedral_group(n)
        if fam == "Q":
            (n,) = params
            if n < 4 or n % 4:
                raise BadParameter("Q(n) needs an order divisible by 4")
            return binary_dihedral_group(n)
        if fam in ("BT", "SL2_3"):
            G = _sl2(3)
            return FiniteGroup(G.table, "BT", G.perms)
        if fam == "BO":
            return _binary_octahedral()
        if fam == "BI":
            G = _sl2(5)
            return FiniteGroup(G.table, "BI", G.perms)
        if fam in ("SL2", "SL"):
            (p,) = params[-1:]
            if not is_prime(p) or p == 2 or p > SL2_MAX_PRIME:
                raise BadParameter(f"SL2(p) needs an odd prime p <= {SL2_MAX_PRIME}")
            return _sl2(p)
    except (TypeError, ValueError) as exc:
        raise BadParameter(f"bad parameters for {family}: {exc}") from None
    raise BadParameter(f"unknown family {family!r}")


def dprime_group(two_power: int, m: int) -> FiniteGroup:
    """C(m) x| C(2^k) with the generator inverting C(m)."""
    return semidirect_cyclic(m, cyclic_group(two_power), {1: -1}, origin=f"D'({two_power * m})")


# ---------------------------------------------------------------- Milnor families


def check_Q8nkl(n: int, k: int, l: int) -> None:
    if min(n, k, l) < 1:
        raise BadParameter("n, k, l must be positive")
    if not (k > l or k == l == 1):
        raise BadParameter("need k > l >= 1 (or k = l = 1)")
    if math.gcd(8 * n, k) != 1 or math.gcd(8 * n, l) != 1 or math.gcd(k, l) != 1:
        raise BadParameter("8n, k, l must be pairwise coprime")


def _verify_period_four(G: FiniteGroup, what: str) -> None:
    rep = period(G)
    if not (is_periodic(G) and rep.period == 4):
        raise RuntimeError(f"{what} failed its period-four verification")


@lru_cache(maxsize=64)
def make_Q8nkl(n: int, k: int, l: int, verify: bool = True) -> FiniteGroup:
    """Z/kl x| Q(8n); x acts as (-1 mod k, +1 mod l), xy as (+1 mod k, -1 mod l)."""
    check_Q8nkl(n, k, l)
    Q = binary_dihedral_group(8 * n)
    name = f"Q({8 * n},{k},{l})"
    if k == l == 1:
        return FiniteGroup(Q.table, name)
    x, y = 4 * n, 1
    xy = Q.mul(x, y)
    act = {x: _crt([(-1, k), (1, l)]), xy: _crt([(1, k), (-1, l)])}
    G = semidirect_cyclic(k * l, Q, act, origin=name)
    if verify:
        if G.order != 8 * n * k * l:
            raise RuntimeError("order formula failed")
        _verify_period_four(G, name)
        S = classify_2group(sylow(G, 2).as_group())
        expected = classify_2group(sylow(Q, 2).as_group())
        if S != expected:
            raise RuntimeError(f"{name}: Sylow 2-subgroup {S} differs from {expected}")
    return G


def check_O48kl(k: int, l: int) -> None:
    if min(k, l) < 1:
        raise BadParameter("k, l must be positive")
    if math.gcd(48, k) != 1 or math.gcd(48, l) != 1 or math.gcd(k, l) != 1:
        raise BadParameter("48, k, l must be pairwise coprime")


@lru_cache(maxsize=32)
def make_O48kl(k: int, l: int, verify: bool = True) -> FiniteGroup:
    """Z/kl x| BO; elements outside BT = [BO, BO] act as (-1 mod k, +1 mod l)."""
    check_O48kl(k, l)
    B = _binary_octahedral()
    name = f"O(48,{k},{l})"
    if k * l == 1:
        return FiniteGroup(B.table, name)
    BT = commutator_subgroup(B)
    u = _crt([(-1, k), (1, l)])
    act = {g: (1 if g in BT else u) for g in B.small_generators}
    G = semidirect_cyclic(k * l, B, act, origin=name)
    if verify:
        if G.order != 48 * k * l:
            raise RuntimeError("order formula failed")
        _verify_period_four(G, name)
    return G


def parametric_type(family: str, *params: int) -> str:
    """Type read off the parameters: Q(8n,k,l) is A for odd n and B for even n; O(48,k,l) is C."""
    if family == "Q8nkl":
        return "type_A" if params[0] % 2 else "type_B"
    if family == "O48kl":
        return "type_C"
    raise BadParameter(f"no parametric type for {family}")


# ---------------------------------------------------------------- recognition


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _times_cyclic(G: FiniteGroup, c: int) -> FiniteGroup:
    return G if c == 1 else direct_product(G, cyclic_group(c))


@lru_cache(maxsize=256)
def _candidate(key: tuple) -> FiniteGroup:
    fam, *args = key
    c = args[-1]
    if fam == "Q":
        base = binary_dihedral_group(args[0])
    elif fam in ("BT", "BO", "BI"):
        base = make_standard(fam)
    elif fam == "D'":
        base = dprime_group(args[0], args[1])
    elif fam == "Q8nkl":
        base = make_Q8nkl(*args[:3])
    elif fam == "O48kl":
        base = make_O48kl(args[0], 1)
    else:  # pragma: no cover
        raise KeyError(fam)
    return _times_cyclic(base, c)


def _hopf_keys(N: int) -> Iterator[tuple]:
    for c in _divisors(N):
        rest = N // c
        if rest % 4 == 0 and rest >= 8 and math.gcd(rest, c) == 1:
            yield ("Q", rest, c)
        for fam, size, bad in (("BT", 24, 6), ("BO", 48, 6), ("BI", 120, 30)):
            if rest == size and math.gcd(c, bad) == 1:
                yield (fam, c)
        two = rest & -rest
        m = rest // two
        if two >= 8 and m >= 3 and math.gcd(rest, c) == 1:
            yield ("D'", two, m, c)


def _milnor_keys(N: int) -> Iterator[tuple]:
    for c in _divisors(N):
        rest = N // c
        if rest % 8 == 0:
            for kl in _divisors(rest // 8):
                n = rest // 8 // kl
                for k in _divisors(kl):
                    l = kl // k
                    if k < 2 or k <= l or math.gcd(k, l) != 1 or math.gcd(8 * n, kl) != 1:
                        continue
                    if n % 2 and n <= k:
                        # odd n: permuting (n, k, l) gives isomorphic groups, and n = 1 is Q(8k)
                        continue
                    if math.gcd(rest, c) == 1:
                        yield ("Q8nkl", n, k, l, c)
        if rest % 48 == 0:
            k = rest // 48
            if k > 1 and math.gcd(k, 6) == 1 and math.gcd(c, 6 * k) == 1:
                yield ("O48kl", k, c)


def _match(G: FiniteGroup, key: tuple) -> bool:
    H = _candidate(key)
    if H.order != G.order or H.fingerprint != G.fingerprint:
        return False
    return is_isomorphic(G, H)[0]


def milnor_type(G: FiniteGroup) -> MilnorType:
    N = G.order
    if N > config.ISO_BOUND:
        raise OrderBoundExceeded(f"|G| = {N} above isomorphism bound")
    rep = period(G)
    if not rep.periodic or 4 % rep.period:
        return MilnorType("not_period_four", {"period": rep.period})
    if G.is_abelian:
        return MilnorType("hopf", {"family": "C", "n": N})
    for key in _hopf_keys(N):
        if _match(G, key):
            return MilnorType("hopf", _key_params(key))
    for key in _milnor_keys(N):
        if _match(G, key):
            params = _key_params(key)
            if key[0] == "O48kl":
                return MilnorType("type_C", params)
            inner = parametric_type("Q8nkl", key[1])
            if key[-1] == 1:
                return MilnorType(inner, params)
            return MilnorType("product_with_cyclic", params, inner)
    raise Unrecognized(f"period-four group of order {N} matches no constructible family")


def _key_params(key: tuple) -> dict:
    fam, *args = key
    if fam == "Q":
        return {"family": "Q", "order": args[0], "c": args[1]}
    if fam in ("BT", "BO", "BI"):
        return {"family": fam, "c": args[0]}
    if fam == "D'":
        return {"family": "D'", "two_part": args[0], "m": args[1], "c": args[2]}
    if fam == "Q8nkl":
        return {"family": "Q8nkl", "n": args[0], "k": args[1], "l": args[2], "c": args[3]}
    return {"family": "O48kl", "k": args[0], "l": args[1]}


def dihedral_times_cyclic_check(G: FiniteGroup) -> tuple[int, int] | None:
    N = G.order
    if N % 2 or N > config.ISO_BOUND:
        return None
    for m in _divisors(N):
        d = N // m
        if d < 4 or d % 2 or math.gcd(d, m) != 1:
            continue
        H = _times_cyclic(dihedral_group(d), m)
        if H.fingerprint == G.fingerprint and is_isomorphic(G, H)[0]:
            return d, m
    return None


# ---------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class CatalogEntry:
    spec: str
    order: int
    type: str
    parameters: dict

    def as_dict(self) -> dict:
        return {"spec": self.spec, "order": self.order, "type": self.type, "parameters": dict(self.parameters)}


def _with_cyclic(spec: str, c: int) -> str:
    return spec if c == 1 else f"{spec} x C({c})"


def enumerate_catalog(max_order: int, kind: str | None = None) -> list[CatalogEntry]:
    """Catalog members of order <= max_order, typed by their parameters.

    Hopf members are the named families with a coprime cyclic cofactor; Milnor
    families with degenerate parameters (k = l = 1) appear only as Hopf groups.
    """
    out: list[CatalogEntry] = []
    want = {None: None, "A": "type_A", "B": "type_B", "C": "type_C", "hopf": "hopf"}.get(kind, kind)
    for N in range(1, max_order + 1):
        if want in (None, "hopf"):
            out.append(CatalogEntry(f"C({N})", N, "hopf", {"family": "C", "n": N}))
            for key in _hopf_keys(N):
                if key[0] == "D'":
                    continue  # no group-spec syntax for these
                params = _key_params(key)
                base = f"Q({key[1]})" if key[0] == "Q" else key[0]
                out.append(CatalogEntry(_with_cyclic(base, key[-1]), N, "hopf", params))
        if want in (None, "type_A", "type_B", "type_C"):
            for key in _milnor_keys(N):
                params = _key_params(key)
                if key[0] == "O48kl":
                    t, spec = "type_C", f"O(48,{key[1]},{key[2]})"
                else:
                    _, n, k, l, c = key
                    t, spec = parametric_type("Q8nkl", n), _with_cyclic(f"Q({8 * n},{k},{l})", c)
                if want in (None, t):
                    out.append(CatalogEntry(spec, N, t, params))
    return out
