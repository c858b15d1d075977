"""Self-check suites behind ``severi-fock check``.

Each suite is a list of named cases; a case is a zero-argument callable that
returns ``(ok, detail)``.  Cases are independent, so they can be mapped over a
thread pool; results come back in case order whatever the thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Tuple

from . import engine
from .caps import grading_defect, support_ok, vector_w, vector_w_factored
from .coeffring import Truncation
from .fock import FockVector, basis_states, inner_product
from .operators import (
    OperatorConfig,
    apply_M,
    apply_M_adjoint,
    apply_M_primed,
    apply_M_primed_adjoint,
    build_M_from_fields,
)
from .oracles import degeneration, diffop, monomial

Case = Tuple[str, Callable[[], Tuple[bool, str]]]


class CaseResult(NamedTuple):
    suite: str
    name: str
    ok: bool
    detail: str
    informational: bool = False


def _eq(got, want) -> Tuple[bool, str]:
    return got == want, f"got={got} want={want}"


# ---- calibration and classical counts ---------------------------------------

CALIBRATION = [
    ("p2 d=1 g=0", lambda cfg: engine.p2_severi(0, 1, cfg), 1),
    ("p2 d=2 g=0", lambda cfg: engine.p2_severi(0, 2, cfg), 1),
    ("p2 d=2 g=-1", lambda cfg: engine.p2_severi(-1, 2, cfg), 3),
    ("F1 (0,1) g=0", lambda cfg: engine.gw_invariant(1, 0, 0, 1, cfg), 1),
    ("F1 (1,0) g=0", lambda cfg: engine.gw_invariant(1, 0, 1, 0, cfg), 1),
    ("F1 (1,1) g=0", lambda cfg: engine.gw_invariant(1, 0, 1, 1, cfg), 1),
    ("F1 (1,1) g=-1", lambda cfg: engine.gw_invariant(1, -1, 1, 1, cfg), 1),
    ("F0 (1,0) g=0", lambda cfg: engine.gw_invariant(0, 0, 1, 0, cfg), 1),
    ("F0 (0,1) g=0", lambda cfg: engine.gw_invariant(0, 0, 0, 1, cfg), 1),
]

# connected P^2 Severi degrees (d, g) -> value, classical
P2_CONNECTED = {(3, 0): 12, (3, 1): 1, (4, 0): 620, (4, 1): 225, (4, 2): 27, (4, 3): 1,
                (5, 0): 87304}


def calibration_cases(cfg: OperatorConfig) -> List[Case]:
    def case(fn, want):
        return lambda: _eq(fn(cfg), want)

    return [(name, case(fn, want)) for name, fn, want in CALIBRATION]


def severi_cases(cfg: OperatorConfig, d_max: int = 5) -> List[Case]:
    def run():
        table = engine.connected_from_disconnected(engine.p2_table(d_max, cfg))
        got = {(r.d1, r.g): r.value for r in table}
        bad = [f"(d={d},g={g}) got={got.get((d, g))} want={v}"
               for (d, g), v in sorted(P2_CONNECTED.items())
               if d <= d_max and got.get((d, g)) != v]
        return not bad, "; ".join(bad) or f"{len(P2_CONNECTED)} values"

    def line_pairs():
        table = engine.connected_from_disconnected(engine.p2_table(3, cfg))
        got = {(r.d1, r.g): r.value for r in table}
        pair = (got[(2, -1)], got[(3, -1)])
        return pair == (0, 0), f"d=2 g=-1: {pair[0]}, d=3 g=-1: {pair[1]}"

    return [("connected p2 d<=%d" % d_max, run), ("connected p2 reducible vanish", line_pairs)]


# ---- algebra ----------------------------------------------------------------

def algebra_cases(max_size: int = 6) -> List[Case]:
    def normalized():
        bad = monomial.normalized_vs_monomial_check(max_size)
        return not bad, f"{len(bad)} mismatches"

    def commutators():
        bad = monomial.commutator_check(max_size)
        return not bad, f"{len(bad)} mismatches"

    def pairing():
        bad = 0
        for s in basis_states(4):
            for t in basis_states(4):
                lab_s = [("1", j) for j in s.mu] + [("p", j) for j in s.nu]
                lab_t = [("1", j) for j in t.mu] + [("p", j) for j in t.nu]
                raw = monomial.monomial_pairing(monomial.monomial_state(lab_s),
                                                monomial.monomial_state(lab_t))
                z = Fraction(1)
                for part in (s.mu, s.nu, t.mu, t.nu):
                    z *= Fraction(1, max(1, _z(part)))
                got = inner_product(FockVector.basis(s), FockVector.basis(t))
                want = raw * z
                if got.extract(-(len(s.mu) + len(s.nu)), 0, 0) != want or \
                        len(got) > (1 if want else 0):
                    bad += 1
        return not bad, f"{bad} mismatches"

    return [("normalized vs monomial size<=%d" % max_size, normalized),
            ("commutators size<=%d" % max_size, commutators),
            ("pairing vs monomial size<=4", pairing)]


def _z(part) -> int:
    from .partitions import zfactor
    return zfactor(part)


# ---- adjoints and fields ----------------------------------------------------

def adjoint_cases(max_size: int = 5) -> List[Case]:
    def pairing_case(k, primed):
        fwd, bwd = (apply_M_primed, apply_M_primed_adjoint) if primed else (apply_M, apply_M_adjoint)

        def run():
            cfg = OperatorConfig(k)
            states = basis_states(max_size)
            images = {s: fwd(cfg, FockVector.basis(s)) for s in states}
            back = {s: bwd(cfg, FockVector.basis(s)) for s in states}
            bad = 0
            for x in states:
                for y in states:
                    if inner_product(images[x], FockVector.basis(y)) != \
                            inner_product(FockVector.basis(x), back[y]):
                        bad += 1
            return not bad, f"{bad} mismatches over {len(states) ** 2} pairs"
        return run

    cases = []
    for k in range(4):
        cases.append((f"<Mx|y>=<x|M+y> k={k}", pairing_case(k, False)))
        cases.append((f"<M'x|y>=<x|M'+y> k={k}", pairing_case(k, True)))
    inputs = [("p2", g, d) for d in (1, 2, 3) for g in range(-2, engine.p2_arithmetic_genus(d) + 1)]
    inputs += [("gw", 1, 0, 1, 1), ("gw", 1, -1, 1, 1), ("gw", 2, 0, 2, 1), ("gw", 3, 0, 2, 1)]
    inputs += [("gw", 1, 0, 0, 1), ("gw", 1, 0, 1, 0), ("gw", 0, 0, 1, 1)]

    def forward_vs_adjoint(item):
        def run():
            (res,) = engine.adjoint_form_check([item])
            return _eq(res.adjoint, res.forward)
        return run

    for item in inputs:
        cases.append((f"forward=adjoint {item}", forward_vs_adjoint(item)))
    return cases


def field_cases(max_size: int = 6) -> List[Case]:
    def run(k, conv):
        def inner():
            cfg = OperatorConfig(k, u_convention=conv)
            fields = build_M_from_fields(cfg)
            bad = [s for s in basis_states(max_size)
                   if fields(FockVector.basis(s)) != apply_M(cfg, FockVector.basis(s))]
            return not bad, f"{len(bad)} mismatching states"
        return inner

    return [(f"fields=direct k={k} u={conv} size<={max_size}", run(k, conv))
            for conv in ("printed", "alternate") for k in range(4)]


# ---- oracles ------------------------------------------------------------------

def oracle_cases() -> List[Case]:
    cases: List[Case] = []

    def diffop_case(k):
        def run():
            r = diffop.diffop_evolution_check(k, Truncation(3, 3))
            return (not r["mismatches"],
                    f"{r['coefficients']} coefficients, {r['engine_checked']} engine values, "
                    f"{len(r['mismatches'])} mismatches")
        return run

    for k in range(3):
        cases.append((f"diffop evolution k={k} trunc=3", diffop_case(k)))

    def degeneration_case(k):
        def run():
            count = nonzero = 0
            bad = []
            for d1 in range(5):
                for d2 in range(4):
                    if (d1, d2) == (0, 0):
                        continue
                    for g in range(-8, 6):
                        n = engine.n_points(k, g, d1, d2)
                        if not 0 <= n <= degeneration.MAX_POINTS:
                            continue
                        a = degeneration.degeneration_sum(k, g, d1, d2)
                        b = engine.gw_invariant(k, g, d1, d2)
                        count += 1
                        nonzero += bool(b)
                        if a != b:
                            bad.append((g, d1, d2, a, b))
            return not bad, f"{count} cases ({nonzero} nonzero), {len(bad)} mismatches"
        return run

    for k in range(4):
        cases.append((f"degeneration sum k={k} n<=3", degeneration_case(k)))

    def degeneration_p2():
        bad = []
        for d in (1, 2):
            for g in range(-4, 2):
                if 0 <= engine.n_points_p2(g, d) <= degeneration.MAX_POINTS:
                    a, b = degeneration.degeneration_sum_p2(g, d), engine.p2_severi(g, d)
                    if a != b:
                        bad.append((d, g, a, b))
        return not bad, f"{len(bad)} mismatches"

    cases.append(("degeneration sum p2 n<=3", degeneration_p2))
    return cases


# ---- identities -------------------------------------------------------------

def _identity_range(k: int, d1_max: int, d2_max: int, n_max: int, need_ab: bool):
    for d1 in range(d1_max + 1):
        for d2 in range(d2_max + 1):
            if (d1, d2) == (0, 0) or (need_ab and d1 - 2 * d2 < 0):
                continue
            for g in range(1 - 2 * d1 - (2 - k) * d2, n_max + 2 - 2 * d1 - (2 - k) * d2):
                yield g, d1, d2


def ab_cases(d1_max: int = 5, d2_max: int = 2, n_max: int = 10) -> List[Case]:
    def run(d2):
        def inner():
            bad, count = [], 0
            for g, d1, dd2 in _identity_range(2, d1_max, d2_max, n_max, True):
                if dd2 != d2:
                    continue
                r = engine.ab_check(g, d1, d2)
                count += 1
                if not r.equal:
                    bad.append((g, d1, d2, r.lhs, r.rhs))
            return not bad, f"{count} cases, bad={bad[:3]}"
        return inner

    return [(f"AB d1<={d1_max} d2={d2} n<={n_max}", run(d2)) for d2 in range(d2_max + 1)]


def deformation_cases(d1_max: int = 5, d2_max: int = 2, n_max: int = 10) -> List[Case]:
    def run(which, shift):
        def inner():
            bad, count = [], 0
            for g, d1, d2 in _identity_range(2, d1_max, d2_max, n_max, False):
                r = engine.deformation_check(g, d1, d2, shift=shift)
                pair = r.even if which == "even" else r.odd
                count += 1
                if not pair.equal:
                    bad.append((g, d1, d2, pair.lhs, pair.rhs))
            return not bad, f"{count} cases, {len(bad)} unequal, first={bad[:2]}"
        return inner

    return [
        ("F2(d1,d2)=F0(d1-d2,d2)", run("even", -1)),
        ("F3(d1,d2)=F1(d1-d2,d2)", run("odd", -1)),
    ]


def deformation_findings(d1_max: int = 5, d2_max: int = 2, n_max: int = 10) -> List[Case]:
    """Informational: the index shift with the opposite sign."""
    def inner():
        count = unequal = 0
        for g, d1, d2 in _identity_range(2, d1_max, d2_max, n_max, False):
            if d2 == 0:
                continue
            r = engine.deformation_check(g, d1, d2, shift=+1)
            count += 1
            unequal += not r.even.equal
        return True, f"F2(d1,d2) vs F0(d1+d2,d2): {unequal}/{count} unequal"
    return [("shift +d2 comparison", inner)]


def bg_cases(k_max: int = 3, d1_max: int = 3, d2_max: int = 1) -> List[Case]:
    def run(k):
        def inner():
            literal_bad = reindexed_bad = count = 0
            for d1 in range(d1_max + 1):
                for d2 in range(d2_max + 1):
                    if (d1, d2) == (0, 0):
                        continue
                    for g in range(-2, engine.genus_bound(k, d1, d2) + 1):
                        if engine.n_points(k, g, d1, d2) < 0:
                            continue
                        r = engine.blockgoettsche_Z(k, g, d1, d2)
                        count += 1
                        literal_bad += r.literal != r.transverse
                        reindexed_bad += r.reindexed != r.transverse
            return (not reindexed_bad,
                    f"{count} cases; Q1^(2d1) unequal: {reindexed_bad}; "
                    f"Q1^d1 unequal: {literal_bad}")
        return inner

    return [(f"Block-Goettsche k={k}", run(k)) for k in range(k_max + 1)]


# ---- vanishing and support ----------------------------------------------------

def vanishing_cases() -> List[Case]:
    def negative_n():
        bad = []
        for k in range(4):
            for d1, d2 in [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1)]:
                for g in range(-6, 1):
                    if engine.n_points(k, g, d1, d2) >= 0:
                        continue
                    vals = (engine.gw_invariant(k, g, d1, d2),
                            engine.transverse_invariant(k, g, d1, d2),
                            engine.relative_invariant(k, g, d1, d2, (1,) * d1, (),
                                                      (1,) * max(d1 - k * d2, 0), ()),
                            engine.blockgoettsche_Z(k, g, d1, d2).reindexed)
                    if any(vals):
                        bad.append((k, g, d1, d2))
        for d in (1, 2, 3):
            for g in range(-8, 0):
                if engine.n_points_p2(g, d) < 0 and (engine.p2_severi(g, d) or
                                                     engine.p2_relative(g, d, (1,) * d, ())):
                    bad.append(("p2", g, d))
        # relative data whose tangency cost exceeds the point budget
        assert engine.n_points_relative(1, 0, 1, 0, (), (1,), (), (1,)) < 0
        if engine.relative_invariant(1, 0, 1, 0, (), (1,), (), (1,)):
            bad.append("relative")
        return not bad, f"{len(bad)} nonzero"

    def support(k):
        def inner():
            trunc = Truncation(6, 4)
            w = vector_w(k, trunc).vec
            ok = support_ok(w, k)
            graded = all(grading_defect(s, e_u, e_q2, k) == 0 and e_q1 == s.size
                         for s, c in w.terms.items() for (e_u, e_q1, e_q2) in c.terms)
            factored = vector_w_factored(k, trunc) == w
            return ok and graded and factored, \
                f"support={ok} grading={graded} factored={factored}"
        return inner

    def zero_tail():
        bad = []
        for k in range(4):
            for d1 in range(4):
                for d2 in range(3):
                    if (d1, d2) == (0, 0):
                        continue
                    top = engine.genus_bound(k, d1, d2)
                    for g in (top + 1, top + 2):
                        v = engine.gw_invariant(k, g, d1, d2)
                        if v:
                            bad.append((k, g, d1, d2, v))
        return not bad, f"{len(bad)} nonzero above the genus bound"

    return [("n<0 gives 0", negative_n), ("zero tail above genus bound", zero_tail)] + \
        [(f"w_{k} support and grading", support(k)) for k in range(4)]


# ---- registry -----------------------------------------------------------------

SUITES = ("algebra", "adjoint", "fields", "oracles", "ab", "deformation", "bg",
          "calibration", "vanishing")


def suite_cases(suite: str, cfg: OperatorConfig = None) -> List[Tuple[Case, bool, str]]:
    """``(case, informational, suite name)`` triples for one suite or ``all``."""
    cfg = cfg or OperatorConfig(1)
    if suite == "all":
        return [item for name in SUITES for item in _tagged(name, cfg)]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    return _tagged(suite, cfg)


def _tagged(suite: str, cfg: OperatorConfig):
    if suite == "algebra":
        cases = algebra_cases()
    elif suite == "adjoint":
        cases = adjoint_cases()
    elif suite == "fields":
        cases = field_cases()
    elif suite == "oracles":
        cases = oracle_cases()
    elif suite == "ab":
        cases = ab_cases()
    elif suite == "deformation":
        return [(c, False, suite) for c in deformation_cases()] + \
            [(c, True, suite) for c in deformation_findings()]
    elif suite == "bg":
        cases = bg_cases()
    elif suite == "calibration":
        cases = calibration_cases(cfg) + severi_cases(cfg)
    else:
        cases = vanishing_cases()
    return [(c, False, suite) for c in cases]


def run_suite(suite: str, cfg: OperatorConfig = None, threads: int = 1) -> List[CaseResult]:
    tagged = suite_cases(suite, cfg)

    def run_one(item):
        (name, fn), info, where = item
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, reported with its message
            ok, detail = False, f"error: {type(exc).__name__}: {exc}"
        return CaseResult(where, name, bool(ok), detail, info)

    if threads <= 1:
        return [run_one(item) for item in tagged]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_one, tagged))
