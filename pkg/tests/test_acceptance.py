"""Acceptance suite: one test and one report line per criterion.

Every check is exact unless a tolerance is stated in the criterion itself.
"""

import time
from fractions import Fraction

from lulu.analysis import dominance_check, phi_from_rsp, robustness_orders, rsp
from lulu.boolean_function import PBF, Antichain, pbf_of_cascade
from lulu.distribution import (
    g_terms_c2_closed,
    g_term,
    phi_C_recursive,
    phi_closed,
    phi_compose_naive,
    phi_enum,
    phi_incl_excl,
)
from lulu.event_calculus import check_identity, identity_cases
from lulu.filter_algebra import Cascade, build_basic, dilation
from lulu.polynomial import P, Polynomial
from lulu.simulate import (
    MOMENT_NOTE,
    DistributionSpec,
    ks_distance,
    moments_uniform,
    sample_apply,
    separator_checks,
    smoothing_factors,
)

import corpus
from acceptance_log import record

C2_PHI = Polynomial([0, 0, 0, 3, 3, -9, 4, 4, -10, 4, 8, -8, 2])


class Criterion:
    """Times a block of checks, records the outcome and fails the test if any check fails."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.failed: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.failed.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        secs = time.perf_counter() - self.start
        if exc is not None:
            self.failed.append(f"{exc_type.__name__}: {exc}")
        if secs > self.limit:
            self.failed.append(f"took {secs:.1f}s, limit {self.limit}s")
        record(self.number, self.title, not self.failed, secs, "; ".join(self.failed))
        assert not self.failed, self.failed
        return False


def test_criterion_01_three_stage_exact():
    with Criterion(1, "max1 min2 max3: phi = 2p^4 - p^5 by enum, incl-excl and DNF", 1.0) as c:
        target = 2 * P**4 - P**5
        f = pbf_of_cascade(corpus.three_stage())
        c.check(f.value_dnf == Antichain([[0], [1], [2], [-1, 3]]), "derived DNF")
        c.check(phi_enum(f) == target, "enumeration")
        c.check(phi_incl_excl(f) == target, "inclusion-exclusion")
        c.check(phi_enum(PBF([[0], [1], [2], [-1, 3]])) == target, "phi of the stated DNF")


def test_criterion_02_opening_2x2_exact():
    with Criterion(2, "2x2 opening: phi by 2^9 enumeration", 1.0) as c:
        f = pbf_of_cascade(corpus.opening_2x2())
        c.check(f.w == 9, "window of 9 offsets")
        expect = Polynomial.from_q_coeffs([1, 0, 0, 0, -4, 0, 4, 2, -4, 1])
        c.check(phi_enum(f) == expect, "enumeration")


def test_criterion_03_lu_ul_closed_forms():
    with Criterion(3, "LU/UL closed forms = enumeration (n<=3); duality (n<=10)", 10.0) as c:
        for n in (1, 2, 3):
            for name in ("LU", "UL"):
                f = pbf_of_cascade(build_basic(name, n))
                c.check(f.w <= 13, f"{name}{n} window")
                c.check(phi_closed(name, n) == phi_enum(f), f"{name}{n}")
        for n in range(1, 11):
            c.check(phi_closed("UL", n) == 1 - phi_closed("LU", n).reflect(), f"duality n={n}")


def test_criterion_04_c2_three_ways():
    with Criterion(4, "phi_C2 by enumeration, enumerated G-terms, closed G-terms", 30.0) as c:
        f = pbf_of_cascade(build_basic("C", 2))
        c.check(f.w == 13, "window 13")
        c.check(phi_enum(f) == C2_PHI, "enumeration")
        c.check(phi_C_recursive(2, gsource="enumerated") == C2_PHI, "recursion, enumerated G")
        c.check(phi_C_recursive(2, gsource="closed") == C2_PHI, "recursion, closed G")
        g4, g3 = g_terms_c2_closed()
        c.check(g_term(2, "even") == g4 and g_term(2, "odd") == g3, "closed G-terms")


def test_criterion_05_c3_cross_check():
    with Criterion(5, "phi_C3 recursion = enumeration (w=25); orders C1..C3", 600.0) as c:
        f = pbf_of_cascade(build_basic("C", 3))
        c.check(f.w == 25, "window 25")
        rec = phi_C_recursive(3)
        c.check(rec == phi_enum(f), "recursion vs enumeration")
        got = [robustness_orders(phi_C_recursive(n)) for n in (1, 2, 3)]
        c.check([(r.lower, r.upper) for r in got] == [(2, 2), (3, 2), (4, 3)], "orders")


def test_criterion_06_rank_selection():
    with Criterion(6, "rsp of max1 min2 max3; phi_from_rsp round trip on 50 filters", 60.0) as c:
        r = rsp(pbf_of_cascade(corpus.three_stage()))
        c.check(r == [0, 0, 0, Fraction(2, 5), Fraction(3, 5)], "max1 min2 max3 rsp")
        items = corpus.build()
        c.check(len(items) == 50 and all(f.w <= 18 for _, _, f in items), "corpus shape")
        for name, _, f in items:
            c.check(phi_from_rsp(rsp(f)) == phi_enum(f), f"round trip {name}")


def test_criterion_07_identity_suite():
    with Criterion(7, "L7 (n<=5), L8 (n<=6), L9/L10 (r<=2) identities", 120.0) as c:
        cases = identity_cases(max_l7=5, max_l8=6, max_r=2)
        for name, params in cases:
            c.check(check_identity(name, **params), f"{name} {params}")
        c.check(sum(1 for name, _ in cases if name in ("L9", "L10")) > 0, "range covered")


def test_criterion_08_closed_form_robustness():
    with Criterion(8, "robustness orders of U, L, M, LU closed forms", 1.0) as c:
        for n in range(1, 6):
            c.check(robustness_orders(phi_closed("U", n)).lower == n + 1, f"U{n} lower")
            c.check(robustness_orders(phi_closed("L", n)).upper == n + 1, f"L{n} upper")
        for n in range(1, 5):
            ro = robustness_orders(phi_closed("M", n))
            c.check((ro.lower, ro.upper) == (n + 1, n + 1), f"M{n}")
        for n in range(2, 5):
            ro = robustness_orders(phi_closed("LU", n))
            c.check((ro.lower, ro.upper) == (n + 1, 2), f"LU{n}")


def test_criterion_09_dominance():
    with Criterion(9, "phi_LU <= phi_M <= phi_UL on p = 1/100..99/100", 10.0) as c:
        for n in (1, 2, 3):
            lu, m, ul = phi_closed("LU", n), phi_closed("M", n), phi_closed("UL", n)
            c.check(dominance_check(m, lu), f"phi_LU{n} <= phi_M{n}")
            c.check(dominance_check(ul, m), f"phi_M{n} <= phi_UL{n}")


def test_criterion_10_naive_composition():
    with Criterion(10, "phi_U1 o phi_L1 != phi_U1L1", 1.0) as c:
        naive = phi_compose_naive(phi_closed("U", 1), phi_closed("L", 1))
        true = phi_enum(pbf_of_cascade(build_basic("UL", 1)))
        c.check(naive.coeffs != true.coeffs, "coefficient lists differ")


MC_FILTERS = {
    "L1": lambda: build_basic("L", 1),
    "U1": lambda: build_basic("U", 1),
    "M1": lambda: build_basic("Median", 1),
    "L1U1": lambda: build_basic("LU", 1),
    "U1L1": lambda: build_basic("UL", 1),
    "C2": lambda: build_basic("C", 2),
    "max1 min2 max3": corpus.three_stage,
}


def test_criterion_11_monte_carlo():
    with Criterion(11, "KS <= 0.01 at 10^6 uniform samples for 7 filters", 120.0) as c:
        d = DistributionSpec("uniform")
        worst = 0.0
        for i, (name, make) in enumerate(MC_FILTERS.items()):
            filt = make()
            f = filt if isinstance(filt, PBF) else pbf_of_cascade(filt)
            e = sample_apply(filt, d, 1_000_000, seed=12345 + i)
            ks = ks_distance(e, phi_enum(f), d)
            worst = max(worst, ks)
            c.check(ks <= 0.01, f"{name} KS={ks:.4f}")
        c.title += f" [max KS {worst:.4f}]"


def test_criterion_12_moments():
    with Criterion(12, "Var(M1)=1/20, ratio 5/3; std ratio of L1U1 in [1.291,1.294]", 1.0) as c:
        _, var = moments_uniform(phi_closed("M", 1))
        c.check(var == Fraction(1, 20), "variance")
        c.check(smoothing_factors(phi_closed("M", 1))["variance_ratio"] == Fraction(5, 3), "ratio")
        sf = smoothing_factors(phi_closed("LU", 1))
        c.check(1.291 <= sf["std_ratio"] <= 1.294, f"std ratio {sf['std_ratio']:.5f}")
        c.check(sf["note"] == MOMENT_NOTE and "standard deviation" in MOMENT_NOTE, "note")


def test_criterion_13_separator_axioms():
    with Criterion(13, "separator axioms on 1000 signals; bare dilation not idempotent", 60.0) as c:
        for name in ("LU", "UL"):
            rep = separator_checks(build_basic(name, 1), samples=1000, seed=13)
            for axiom, ok in rep.axioms.items():
                c.check(ok, f"{name}1 {axiom}: {rep.failures[axiom]} failures")
        bare = separator_checks(Cascade([dilation(1)]), samples=1000, seed=13)
        c.check(not bare.passed("idempotence"), "bare dilation idempotence should fail")
