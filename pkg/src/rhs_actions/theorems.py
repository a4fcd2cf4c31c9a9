"""Verdicts on free, homologically trivial actions on rational homology 3-spheres."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import catalog, config
from .cohomology import (CentralExtension, TwoCocycle, class_exponent, enumerate_classes, extension_from_cocycle,
                         is_split_class, restrict_class)
from .errors import (BadInvariantFactors, BadPrimes, EvenD, NotAPGroup, NotCentralCyclic, OrderBoundExceeded,
                     RHSError, WrongType)
from .groups import (FiniteGroup, Subgroup, center, central_cyclic_subgroups, commutator_subgroup,
                     derived_series, is_cyclic, is_isomorphic, is_prime, prime_factors, quotient,
                     subgroups_of_order)
from .structure import classify_2group, p_rank, period, sylow_class

RULES = ("rank_bound", "p_part_not_cyclic", "syl2_not_cyclic_or_dihedral", "sylp_odd_not_cyclic",
         "syl_not_cyclic_or_quaternion", "pgroup_dichotomy")


@dataclass(frozen=True)
class ConstraintViolation:
    rule: str
    prime: int | None
    detail: str

    def as_dict(self) -> dict:
        return {"rule": self.rule, "prime": self.prime, "detail": self.detail}


@dataclass(eq=False)
class TheoremAWitness:
    m: int
    cocycle: TwoCocycle
    extension: CentralExtension
    period: int
    nonsplit_primes: list[int]
    coordinates: list[int] = field(default_factory=list)
    restrictions: dict[int, tuple[int, int]] = field(default_factory=dict)  # p -> (subgroups, non-split)

    def as_dict(self) -> dict:
        E = self.extension.total
        return {
            "m": self.m,
            "class": self.coordinates,
            "class_exponent": class_exponent(self.cocycle),
            "total_order": E.order,
            "total_involutions": int((E.element_orders == 2).sum()),
            "period": self.period,
            "nonsplit_primes": self.nonsplit_primes,
            "restrictions": {str(p): {"subgroups": s, "nonsplit": n} for p, (s, n) in sorted(self.restrictions.items())},
        }


@dataclass
class Verdict:
    tag: str
    violations: list[ConstraintViolation] = field(default_factory=list)
    certificate: dict | None = None
    evidence: dict = field(default_factory=dict)
    conditional: bool = False

    def as_dict(self) -> dict:
        return {"tag": self.tag, "violations": [v.as_dict() for v in self.violations],
                "certificate": self.certificate, "evidence": self.evidence, "conditional": self.conditional}


# ---------------------------------------------------------------- constraints


def _check_chain(h1: list[int]) -> None:
    for d in h1:
        if not isinstance(d, (int, np.integer)) or d < 2:
            raise BadInvariantFactors(f"invariant factors must be integers >= 2, got {h1}")
    for a, b in zip(h1, h1[1:]):
        if b % a:
            raise BadInvariantFactors(f"{a} does not divide {b}")


def _prime_power(n: int) -> int | None:
    ps = prime_factors(n)
    return ps[0] if len(ps) == 1 else None


def homology_constraints(G: FiniteGroup, h1: list[int]) -> list[ConstraintViolation]:
    """Every rule violated by the hypothesis 'G acts with H_1(M;Z) of type h1'."""
    h1 = list(h1)
    _check_chain(h1)
    n, h = G.order, math.prod(h1)
    out: list[ConstraintViolation] = []
    for p in prime_factors(n):
        r = p_rank(G, p)
        if r > 2:
            out.append(ConstraintViolation("rank_bound", p, f"elementary abelian {p}-rank {r} > 2"))
    for p in prime_factors(math.gcd(n, h)):
        if sum(1 for d in h1 if d % p == 0) > 1:
            out.append(ConstraintViolation("p_part_not_cyclic", p, f"{p}-part of H_1 is not cyclic"))
    two = sylow_class(G, 2) if n % 2 == 0 else "cyclic"
    if n % 2 == 0 and h % 2 == 0 and two not in ("cyclic", "dihedral", "klein_four"):
        out.append(ConstraintViolation("syl2_not_cyclic_or_dihedral", 2, f"Sylow 2-subgroup is {two}"))
    for p in prime_factors(n):
        if p > 2 and sylow_class(G, p) != "cyclic":
            out.append(ConstraintViolation("sylp_odd_not_cyclic", p, f"Sylow {p}-subgroup is not cyclic"))
    if n % 2 == 0 and h % 2 and two not in ("cyclic", "generalized_quaternion"):
        out.append(ConstraintViolation("syl_not_cyclic_or_quaternion", 2, f"Sylow 2-subgroup is {two}"))
    p = _prime_power(n)
    if p == 2 and h % 2 == 0 and two in ("dihedral", "klein_four"):
        two_part = [d & -d for d in h1 if d % 2 == 0]
        if two_part != [2]:
            out.append(ConstraintViolation("pgroup_dichotomy", 2,
                                           f"dihedral 2-group needs H_1 2-part Z/2, got {two_part}"))
    return out


def generic_h1(G: FiniteGroup) -> list[int]:
    r = math.prod(prime_factors(G.order))
    return [r] if r > 1 else []


# ---------------------------------------------------------------- Theorem A


def _restriction_data(f: TwoCocycle, p: int) -> tuple[int, int]:
    subs = subgroups_of_order(f.group, p)
    nonsplit = sum(1 for S in subs if not is_split_class(restrict_class(f, S)))
    return len(subs), nonsplit


def theorem_A_search(G: FiniteGroup, m: int, limit: int = config.ENUMERATION_LIMIT,
                     stop_after: int | None = None) -> list[TheoremAWitness]:
    """Central extensions of G by Z/m whose total group has period 2 or 4."""
    if m < 1:
        raise ValueError("m must be positive")
    out: list[TheoremAWitness] = []
    common = prime_factors(math.gcd(m, G.order))
    for coords, f in enumerate_classes(G, m, limit):
        ext = extension_from_cocycle(G, m, f, check=False)
        rep = period(ext.total)
        if not rep.periodic or rep.period not in (2, 4):
            continue
        restrictions = {p: _restriction_data(f, p) for p in common}
        nonsplit = [p for p, (s, k) in restrictions.items() if s and s == k]
        out.append(TheoremAWitness(m, f, ext, rep.period, nonsplit, coords, restrictions))
        if stop_after is not None and len(out) >= stop_after:
            break
    return out


def admissible_moduli(G: FiniteGroup, m_bound: int) -> list[int]:
    """m <= m_bound supported on primes dividing |G|, within the table budget."""
    ps = set(prime_factors(G.order))
    out = []
    for m in range(1, m_bound + 1):
        if set(prime_factors(m)) <= ps and m * G.order <= config.TABLE_BOUND:
            out.append(m)
    return out


# ---------------------------------------------------------------- Theorem B


def _type_bc_keys(order: int, bound: int):
    for N in range(order, bound + 1, order):
        if N % 16:
            continue
        for key in catalog._milnor_keys(N):
            if key[0] == "O48kl" or key[1] % 2 == 0:
                yield key


def _key_spec(key: tuple) -> str:
    if key[0] == "O48kl":
        return f"O(48,{key[1]},{key[2]})"
    _, n, k, l, c = key
    base = f"Q({8 * n},{k},{l})"
    return base if c == 1 else f"{base} x C({c})"


def theorem_B_verdict(G: FiniteGroup, order_bound: int | None = None) -> Verdict:
    """Look for G as a central cyclic quotient of a constructible type B or C group."""
    if order_bound is None:
        order_bound = max(config.THEOREM_B_BOUND, G.order)
    if G.order > config.ISO_BOUND:
        raise OrderBoundExceeded(f"|G| = {G.order} above isomorphism bound")
    order_bound = min(order_bound, config.ISO_BOUND)
    for key in _type_bc_keys(G.order, order_bound):
        Q = catalog._candidate(key)
        t = Q.order // G.order
        for H in central_cyclic_subgroups(Q):
            if H.order != t:
                continue
            quo, _ = quotient(Q, H)
            if quo.fingerprint != G.fingerprint:
                continue
            ok, iso = is_isomorphic(quo, G)
            if ok:
                cert = {"q_spec": _key_spec(key), "q_order": Q.order,
                        "q_type": "type_C" if key[0] == "O48kl" else "type_B",
                        "h_order": H.order, "h_generator": int(H.generators[0]) if H.generators else 0}
                return Verdict("cannot_act", certificate=cert,
                               evidence={"searched_bound": order_bound})
    return Verdict("no_obstruction_found", evidence={"searched_bound": order_bound})


# ---------------------------------------------------------------- other verdicts


def p_group_verdict(P: FiniteGroup) -> Verdict:
    """Actions with non-trivial p-torsion in H_1 exist iff P is cyclic or (p = 2) dihedral."""
    n = P.order
    p = _prime_power(n)
    if n > 1 and p is None:
        raise NotAPGroup(f"order {n} is not a prime power")
    scope = {"scope": "non-trivial p-torsion in H_1"}
    if n == 1 or is_cyclic(P):
        return Verdict("can_act_by_construction", evidence={**scope, "route": "cyclic"})
    if p == 2 and classify_2group(P).dihedral_like:
        return Verdict("can_act_by_construction",
                       evidence={**scope, "route": "dihedral", "required_h1_2part": [2]})
    tag = classify_2group(P).tag if p == 2 else "noncyclic"
    v = ConstraintViolation("pgroup_dichotomy", p, f"{p}-group is {tag}: neither cyclic nor dihedral")
    return Verdict("cannot_act", [v], evidence=scope)


def typeA_quotient_transfer(Q: FiniteGroup, T: Subgroup) -> Verdict:
    mt = catalog.milnor_type(Q)
    if not (mt.tag == "type_A" or (mt.tag == "product_with_cyclic" and mt.inner == "type_A")):
        raise WrongType(f"expected a type A group, got {mt.tag}")
    if T.parent is not Q or not T.is_cyclic() or not T.is_subset(center(Q)):
        raise NotCentralCyclic("T must be a central cyclic subgroup of Q")
    return Verdict("can_act_by_construction", conditional=True, evidence={
        "quotient_order": Q.order // T.order,
        "condition": "Q acts freely and homologically trivially with H_1 = Z/d, gcd(d, |Q|) = 1",
        "milnor_type": mt.as_dict(),
    })


@dataclass(frozen=True)
class NumericChecks:
    mod8_ok: bool
    square_ok: bool

    def as_dict(self) -> dict:
        return {"mod8_ok": self.mod8_ok, "square_ok": self.square_ok}


def swan_numeric_checks(d: int, a: int = 1, b: int = 1) -> NumericChecks:
    if d % 2 == 0:
        raise EvenD(f"d = {d} must be odd")
    if d < 1 or a < 1 or b < 1:
        raise BadInvariantFactors("d, a, b must be positive")
    mod = 8 * a * b
    squares = {r * r % mod for r in range(mod)}
    return NumericChecks(d % 8 in (1, 7), d % mod in squares)


def multiplicative_order(a: int, n: int) -> int:
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def s_pq_vanishes(p: int, q: int) -> str:
    if not (is_prime(p) and is_prime(q) and p > 2 and q > 2 and p > q):
        raise BadPrimes(f"need odd primes p > q, got ({p}, {q})")
    pm, qm = p % 8, q % 8
    pm3 = pm in (3, 5)
    qm3 = qm in (3, 5)
    if pm3 and qm3:
        return "vanishes"
    if pm == 1 and qm3 and multiplicative_order(2, p) % 2:
        return "vanishes"
    return "unknown"


# ---------------------------------------------------------------- aggregation


@dataclass
class ClassificationReport:
    data: dict
    errors: list[dict]
    witnesses: list[TheoremAWitness]

    def as_dict(self) -> dict:
        return dict(self.data)


def _error_record(field_name: str, exc: Exception) -> dict:
    return {"field": field_name, "type": type(exc).__name__, "message": str(exc)}


def classify(G: FiniteGroup, m_bound: int | None = None, theorem_b_bound: int | None = None,
             witnesses_per_m: int = 4) -> ClassificationReport:
    """Structure, period, Milnor type, constraints and theorem verdicts for G."""
    errors: list[dict] = []
    data: dict = {}

    def attempt(name, fn):
        try:
            return fn()
        except RHSError as exc:
            errors.append(_error_record(name, exc))
            return None

    n = G.order
    data["structure"] = {
        "order": n,
        "abelian": G.is_abelian,
        "cyclic": is_cyclic(G),
        "exponent": G.exponent,
        "center_order": center(G).order,
        "derived_series": [S.order for S in derived_series(G)],
        "abelianization_order": n // commutator_subgroup(G).order,
    }
    rep = period(G)
    data["period"] = rep.as_dict()
    mt = attempt("milnor_type", lambda: catalog.milnor_type(G))
    data["milnor_type"] = mt.as_dict() if mt else None

    trivial = homology_constraints(G, [])
    gen_h1 = generic_h1(G)
    generic = homology_constraints(G, gen_h1)
    data["constraints"] = {
        "trivial_h1": {"h1": [], "violations": [v.as_dict() for v in trivial]},
        "generic_h1": {"h1": gen_h1, "violations": [v.as_dict() for v in generic]},
    }

    # Theorem A
    m_bound = n if m_bound is None else m_bound
    moduli = admissible_moduli(G, m_bound) if n <= config.H2_BOUND else []
    witnesses: list[TheoremAWitness] = []
    by_m = []
    for m in moduli:
        found = attempt(f"theorem_A[m={m}]", lambda m=m: theorem_A_search(G, m))
        if found is None:
            continue
        witnesses.extend(found[:witnesses_per_m])
        by_m.append({"m": m, "count": len(found), "witnesses": [w.as_dict() for w in found[:witnesses_per_m]]})
    if n > config.H2_BOUND:
        errors.append({"field": "theorem_A", "type": "BudgetExceeded",
                       "message": f"|G| = {n} above the H^2 bound {config.H2_BOUND}"})
    data["theorem_A"] = {
        "m_bound": m_bound,
        "moduli": moduli,
        "by_m": by_m,
        "witness_found": any(r["count"] for r in by_m),
        "note": "necessary condition; moduli beyond the bound are not searched",
    }

    tb = attempt("theorem_B", lambda: theorem_B_verdict(G, theorem_b_bound))
    data["theorem_B"] = tb.as_dict() if tb else None

    # sufficient routes
    routes = []
    if mt is not None and mt.tag == "hopf":
        routes.append({"route": "hopf", "detail": mt.as_dict()})
    if n > 1 and _prime_power(n):
        pv = p_group_verdict(G)
        if pv.tag == "can_act_by_construction":
            routes.append({"route": "pgroup", "detail": pv.evidence})
    for w in witnesses:
        if w.extension.total.order > config.ISO_BOUND:
            continue
        try:
            t = catalog.milnor_type(w.extension.total)
        except RHSError:
            continue
        if t.tag == "hopf":
            routes.append({"route": "hopf_quotient", "detail": {"m": w.m, "class": w.coordinates,
                                                                "total": t.as_dict()}})
            break
    dc = catalog.dihedral_times_cyclic_check(G)
    if dc is not None:
        routes.append({"route": "dihedral_times_cyclic", "detail": {"dihedral_order": dc[0], "cyclic_order": dc[1]}})
    data["can_act_routes"] = routes

    # overall verdict
    unconditional = [v for v in trivial if v.rule == "rank_bound" or v.rule == "sylp_odd_not_cyclic"]
    both = {v.prime for v in trivial} & {v.prime for v in generic}
    blocking = unconditional + [v for v in trivial + generic if v.prime in both and v not in unconditional]
    if blocking:
        verdict = Verdict("cannot_act", blocking, evidence={"reason": "constraint violated under every H_1 hypothesis"})
    elif tb is not None and tb.tag == "cannot_act":
        verdict = Verdict("cannot_act", certificate=tb.certificate, evidence={"reason": "theorem_B"})
    elif routes:
        verdict = Verdict("can_act_by_construction", evidence={"routes": [r["route"] for r in routes]})
    elif data["theorem_A"]["witness_found"]:
        verdict = Verdict("necessary_conditions_met", evidence={"theorem_A": "witness found"})
    else:
        verdict = Verdict("no_obstruction_found",
                          evidence={"necessary_conditions_met": "unknown beyond bound"})
    data["verdict"] = verdict.as_dict()
    return ClassificationReport(data, errors, witnesses)
