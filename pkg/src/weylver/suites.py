"""Named verification suites and their reports."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Callable

from .chern_weil import (
    CartanPoint,
    ahat_ch_component,
    ahat_trace_table,
    genfun_check,
    half_x_over_sinh_series,
    p_n_cartan_graphsum,
    p_n_integral_at,
    polarize,
    rrh_check,
    rrh_tuples,
)
from .cocycle import (
    tau_closed_form_n1,
    tau_eval,
    tau_quadratic_insertion_sum,
    tau_sigma_eval,
    tau_sp_invariance_sum,
)
from .hochschild import (
    ChainTensor,
    canonical_cycle,
    hochschild_boundary,
    perm_sign,
    random_chain,
    random_element,
)
from .integrate import closed_form_I, psi_cycle_integral
from .lie import (
    GlWeylElement,
    d_lie_eval,
    flat_trace_density,
    theta_eval,
    theta_invariance_sum,
)
from .parsing import scalar_to_json
from .scalars import EpsScalar, ONE, ZERO, as_scalar
from .weyl import WeylElement, bracket, moyal

__all__ = ["SUITES", "SuiteCase", "SuiteReport", "run_suite", "emit_report", "CapError", "MAX_N", "MAX_NN"]

MAX_N = 2
MAX_NN = 3


class CapError(ValueError):
    """Parameters beyond the supported desk-scale range."""


@dataclass
class SuiteCase:
    index: int
    input: str
    expected: object
    got: object
    passed: bool


@dataclass
class SuiteReport:
    name: str
    params: dict
    cases: list[SuiteCase] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def summary(self) -> dict[str, int]:
        passed = sum(1 for c in self.cases if c.passed)
        return {"total": len(self.cases), "passed": passed, "failed": len(self.cases) - passed}

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0


def _render(x):
    if isinstance(x, (EpsScalar, Fraction, int)) and not isinstance(x, bool):
        return scalar_to_json(x)
    return str(x)


def _text_value(x) -> str:
    return str(as_scalar(x)) if isinstance(x, (EpsScalar, Fraction, int)) and not isinstance(x, bool) else str(x)


def emit_report(r: SuiteReport, format: str = "json", timing: bool = True) -> bytes:
    """Serialize a report.  Cases are sorted by index; ``wall_time_s`` is the only nondeterministic field."""
    cases = sorted(r.cases, key=lambda c: c.index)
    if format == "json":
        doc = {
            "suite": r.name,
            "params": r.params,
            "summary": r.summary,
            "cases": [
                {"index": c.index, "input": c.input, "expected": _render(c.expected), "got": _render(c.got), "pass": c.passed}
                for c in cases
            ],
        }
        if timing:
            doc["wall_time_s"] = round(r.wall_time, 3)
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    s = r.summary
    lines = [f"suite {r.name} {json.dumps(r.params, sort_keys=True)}"]
    for c in cases:
        flag = "PASS" if c.passed else "FAIL"
        line = f"  [{flag}] #{c.index} {c.input}"
        if not c.passed:
            line += f"  expected {_text_value(c.expected)}, got {_text_value(c.got)}"
        lines.append(line)
    lines.append(f"  {s['passed']}/{s['total']} passed, {s['failed']} failed" + (f" ({r.wall_time:.2f}s)" if timing else ""))
    return ("\n".join(lines) + "\n").encode("utf-8")


# helpers


def _rational(rng: random.Random, lo: int = -5, hi: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _quadratic_basis(n: int) -> list[WeylElement]:
    return [WeylElement.monomial(n, e) for e in product(range(3), repeat=2 * n) if sum(e) == 2]


def _random_quadratic(rng: random.Random, n: int) -> WeylElement:
    out = WeylElement.zero(n)
    while out.is_zero():
        for b in _quadratic_basis(n):
            if rng.random() < 0.4:
                out = out + b.scale(rng.randint(-2, 2))
    return out


def _random_gl(rng: random.Random, n: int, N: int, deg: int) -> GlWeylElement:
    while True:
        M = [[rng.randint(-1, 1) for _ in range(N)] for _ in range(N)]
        v = GlWeylElement.tensor(M, random_element(rng, n, deg, min_deg=1))
        if not v.is_zero():
            return v


def _random_cartan(rng: random.Random, m: int, N: int) -> CartanPoint:
    t = [_rational(rng) for _ in range(m)]
    s = [EpsScalar({rng.randint(0, 1): _rational(rng)}) for _ in range(N)]
    return CartanPoint(t, s)


def _case(cases: list, inp: str, expected, got) -> None:
    if isinstance(expected, (int, Fraction)) and not isinstance(expected, bool):
        expected = as_scalar(expected)
    if isinstance(got, (int, Fraction)) and not isinstance(got, bool):
        got = as_scalar(got)
    cases.append(SuiteCase(len(cases), inp, expected, got, expected == got))


# suites; each fills ``cases`` from (rng, params)


def _moyal_assoc(rng, p, cases):
    for _ in range(p["cases"]):
        n = rng.choice([1, 2]) if p["n"] >= 2 else 1
        f, g, h = (random_element(rng, n, p["deg"], n_terms=2) for _ in range(3))
        assoc = moyal(moyal(f, g), h) - moyal(f, moyal(g, h))
        leib = bracket(f, moyal(g, h)) - moyal(bracket(f, g), h) - moyal(g, bracket(f, h))
        jac = bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g))
        defects = [str(x) for x in (assoc, leib, jac) if not x.is_zero()]
        _case(cases, f"n={n}; f={f}; g={g}; h={h}", "0", "; ".join(defects) or "0")


def _hochschild_d2(rng, p, cases):
    for _ in range(p["cases"]):
        k = rng.randint(2, 4)
        c = random_chain(rng, p["n"], k, p["deg"], normalized=False)
        dd = hochschild_boundary(hochschild_boundary(c))
        _case(cases, str(c), "0", str(dd) if not dd.is_zero() else "0")


def _tau_cocycle(rng, p, cases):
    n = p["n"]
    for _ in range(p["cases"]):
        c = random_chain(rng, n, 2 * n + 1, p["deg"])
        _case(cases, f"d({c})", ZERO, tau_eval(n, hochschild_boundary(c)))


def _tau_normalization(rng, p, cases):
    n = p["n"]
    _case(cases, f"c_{2 * n}", ONE, tau_eval(n, canonical_cycle(n)))


def _tau_sp_invariance(rng, p, cases):
    n = p["n"]
    for _ in range(p["cases"]):
        A = rng.choice(_quadratic_basis(n))
        c = random_chain(rng, n, 2 * n, p["deg"])
        _case(cases, f"A={A}; {c}", ZERO, tau_sp_invariance_sum(n, A, c))


def _tau_property_iii(rng, p, cases):
    n = p["n"]
    for _ in range(p["cases"]):
        A = rng.choice(_quadratic_basis(n))
        c = random_chain(rng, n, 2 * n - 1, p["deg"])
        _case(cases, f"A={A}; {c}", ZERO, tau_quadratic_insertion_sum(n, A, c))


def _tau_permutation(rng, p, cases):
    n = p["n"]
    perms = list(permutations(range(1, 2 * n + 1)))
    for i in range(p["cases"]):
        sigma = perms[i % len(perms)] if n == 1 else rng.choice(perms)
        c = random_chain(rng, n, 2 * n, p["deg"])
        ((slots, coeff),) = c.items()
        inv = [0] * (2 * n)
        for a, s in enumerate(sigma, start=1):
            inv[s - 1] = a
        permuted = ChainTensor(n, 2 * n, [(coeff, (slots[0],) + tuple(slots[inv[l]] for l in range(2 * n)))])
        lhs = tau_eval(n, permuted)
        rhs = tau_sigma_eval(n, sigma, c) * perm_sign(sigma)
        _case(cases, f"sigma={sigma}; {c}", lhs, rhs)


def _tau_closed_form(rng, p, cases):
    one, p1, q1 = WeylElement.one(1), WeylElement.p(1, 1), WeylElement.q(1, 1)
    for chain, val in (
        (ChainTensor.elementary(one, p1, q1), Fraction(1, 2)),
        (ChainTensor.elementary(p1, q1, p1 * q1), EpsScalar.monomial(Fraction(1, 12), 1)),
    ):
        _case(cases, f"{chain} (brute force)", val, tau_eval(1, chain, method="operator", check_order=True))
        _case(cases, f"{chain} (closed form)", val, tau_closed_form_n1(chain))
    for _ in range(p["cases"]):
        c = random_chain(rng, 1, 2, p["deg"])
        _case(cases, str(c), tau_eval(1, c), tau_closed_form_n1(c))


def _theta_relative(rng, p, cases):
    n, N, deg = p["n"], p["N"], p["deg"]
    kinds = ["sp-argument", "central-argument", "sp-invariance", "gl-invariance"]
    if n == 1:
        kinds.append("d_lie")
    for i in range(p["cases"]):
        kind = kinds[i % len(kinds)]
        args = [_random_gl(rng, n, N, deg) for _ in range(2 * n)]
        f = _random_gl(rng, n, N, deg)
        if kind == "sp-argument":
            args[rng.randrange(2 * n)] = GlWeylElement.scalar(N, _random_quadratic(rng, n))
            got = theta_eval(n, N, args, f)
        elif kind == "central-argument":
            args[rng.randrange(2 * n)] = GlWeylElement.scalar(N, WeylElement.scalar(n, EpsScalar({rng.randint(-1, 1): 1})))
            got = theta_eval(n, N, args, f)
        elif kind == "sp-invariance":
            got = theta_invariance_sum(n, N, _random_quadratic(rng, n), args, f)
        elif kind == "gl-invariance":
            M = [[rng.randint(-1, 1) for _ in range(N)] for _ in range(N)]
            got = theta_invariance_sum(n, N, GlWeylElement.tensor(M, WeylElement.one(n)), args, f)
        else:
            args.append(_random_gl(rng, n, N, deg))
            got = d_lie_eval(lambda a, t: theta_eval(n, N, a, t), args, f, module="coadjoint")
        _case(cases, f"{kind}: {'; '.join(map(str, args))} -> {f}", ZERO, got)


def _theta_normalization(rng, p, cases):
    n, N = p["n"], p["N"]
    args = []
    for i in range(1, n + 1):
        args += [GlWeylElement.scalar(N, WeylElement.p(n, i)), GlWeylElement.scalar(N, WeylElement.q(n, i))]
    _case(cases, f"n={n}, N={N}", N, theta_eval(n, N, args, GlWeylElement.identity(n, N)))


def _flat_trace(rng, p, cases):
    n = p["n"]
    one = WeylElement.one(n)
    x0 = [Fraction(0)] * (2 * n)
    _case(cases, "f=1", ONE, flat_trace_density(n, one, x0))
    for _ in range(p["cases"]):
        f = WeylElement.zero(n)
        while f.is_zero():
            f = random_element(rng, n, p["deg"], n_terms=3, eps_window=(0, 0))
        x = [_rational(rng) for _ in range(2 * n)]
        _case(cases, f"f={f} at {[str(v) for v in x]}", f.evaluate(x), flat_trace_density(n, f, x))


def _cycle_integrals(rng, p, cases):
    for j in range(2, p["deg"] + 1):
        _case(cases, f"I_{j} (orbits)", closed_form_I(j), psi_cycle_integral(j))
        if j <= 6:
            _case(cases, f"I_{j} (all regions)", closed_form_I(j), psi_cycle_integral(j, method="full"))


# reference coefficients stated for tr(X^2), tr(X^4), (tr X^2)^2
STATED_AHAT = {(2,): Fraction(-1, 48), (4,): Fraction(1, 4608), (2, 2): Fraction(1, 5760)}


def _ahat_expansion(rng, p, cases):
    table = {**ahat_trace_table(2), **ahat_trace_table(4)}
    for key, stated in STATED_AHAT.items():
        name = " ".join(f"tr(X^{k})" for k in key)
        _case(cases, f"stated coefficient of {name}", stated, table.get(key, Fraction(0)))
    N = p["N"]
    P2 = ahat_ch_component(2, 1, N)
    _case(cases, "coefficient of tr(X_1^2) in (ÂCh)_2", EpsScalar.monomial(Fraction(-N, 48), 2),
          P2.table.get(((2,), (0,)), ZERO) * N)
    series = half_x_over_sinh_series(p["deg"])
    for _ in range(max(1, p["cases"])):
        t = _rational(rng)
        X = CartanPoint([t], [0] * N)
        for j in range(p["deg"] + 1):
            want = EpsScalar.monomial(series[j] * t ** j * N, j)
            _case(cases, f"(ÂCh)_{j} at t={t}", want, ahat_ch_component(j, 1, N).taylor(X.to_h()))
    r = genfun_check(p["deg"], p["n"], N)
    _case(cases, f"generating function to degree {p['deg']}", str(r.closed_series), str(r.ahat_series))


def _pn_crosscheck(rng, p, cases):
    m, N = p["n"], p["N"]
    for _ in range(p["cases"]):
        X = _random_cartan(rng, m, N)
        for n in (1, 2):
            graph = p_n_cartan_graphsum(n, X)
            integral = p_n_integral_at(n, X)
            poly = polarize(ahat_ch_component(n, m, N), *[X.to_h()] * n)
            label = f"P_{n} at t={[str(v) for v in X.t]}, s={[str(v) for v in X.s]}"
            _case(cases, label + " graph=integral", graph, integral)
            _case(cases, label + " graph=(ÂCh)", graph, poly)
        Y = _random_cartan(rng, m, N)
        _case(cases, "P_2 mixed arguments", polarize(ahat_ch_component(2, m, N), X.to_h(), Y.to_h()),
              p_n_integral_at(2, [X, Y]))


def _rrh(rng, p, cases):
    n, N = p["n"], p["N"]
    for tup in rrh_tuples(n, N):
        r = rrh_check(n, N, tup)
        label = "p1 ^ " + " ^ ".join(f"{v} ^ p{i + 2}" if i + 1 < n else v for i, v in enumerate(tup))
        _case(cases, f"{label}: ev_1 Theta = P_n(dv/dq)", r.lhs, r.rhs_polarized)
        _case(cases, f"{label}: ev_1 Theta = cube integral", r.lhs, r.rhs_integral)
        _case(cases, f"{label}: ev_1 Theta = (-1)^n chi((ÂCh)_n)", r.lhs, r.rhs_chi)


def _genfun(rng, p, cases):
    r = genfun_check(p["deg"], p["n"], p["N"])
    _case(cases, f"graph sum vs sinh product, degree {p['deg']}", str(r.closed_series), str(r.graph_series))
    _case(cases, f"(ÂCh) table vs sinh product, degree {p['deg']}", str(r.closed_series), str(r.ahat_series))


# name -> (runner, default deg, default cases, deg/cases depend on n)
SUITES: dict[str, tuple[Callable, Callable, Callable]] = {
    "moyal-assoc": (_moyal_assoc, lambda n: 4, lambda n: 100),
    "hochschild-d2": (_hochschild_d2, lambda n: 3, lambda n: 50),
    "tau-cocycle": (_tau_cocycle, lambda n: 3 if n == 1 else 2, lambda n: 50 if n == 1 else 5),
    "tau-normalization": (_tau_normalization, lambda n: 1, lambda n: 1),
    "tau-sp-invariance": (_tau_sp_invariance, lambda n: 3 if n == 1 else 2, lambda n: 30 if n == 1 else 5),
    "tau-property-iii": (_tau_property_iii, lambda n: 3 if n == 1 else 2, lambda n: 30 if n == 1 else 5),
    "tau-permutation": (_tau_permutation, lambda n: 3 if n == 1 else 2, lambda n: 20 if n == 1 else 5),
    "tau-closed-form": (_tau_closed_form, lambda n: 4, lambda n: 30),
    "theta-relative": (_theta_relative, lambda n: 3 if n == 1 else 2, lambda n: 20 if n == 1 else 4),
    "theta-normalization": (_theta_normalization, lambda n: 1, lambda n: 1),
    "flat-trace": (_flat_trace, lambda n: 5, lambda n: 20 if n == 1 else 2),
    "cycle-integrals": (_cycle_integrals, lambda n: 8, lambda n: 1),
    "ahat-expansion": (_ahat_expansion, lambda n: 4, lambda n: 3),
    "pn-crosscheck": (_pn_crosscheck, lambda n: 2, lambda n: 10),
    "rrh": (_rrh, lambda n: 1, lambda n: 1),
    "genfun": (_genfun, lambda n: 4, lambda n: 1),
}

# suites defined for n = 1 only
_N1_ONLY = {"tau-closed-form"}


def run_suite(
    name: str,
    n: int = 1,
    N: int = 1,
    deg: int | None = None,
    cases: int | None = None,
    seed: int = 0,
    override_caps: bool = False,
    inject_failure: bool = False,
) -> SuiteReport:
    """Run a named suite with exact arithmetic; every case is recorded."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if n < 1 or N < 1:
        raise ValueError("n and N must be >= 1")
    if not override_caps and (n > MAX_N or N > MAX_NN):
        raise CapError(f"n={n}, N={N} exceeds the supported range n <= {MAX_N}, N <= {MAX_NN}")
    if name in _N1_ONLY:
        n = 1
    runner, deg_default, cases_default = SUITES[name]
    params = {
        "n": n,
        "N": N,
        "deg": deg_default(n) if deg is None else deg,
        "cases": cases_default(n) if cases is None else cases,
        "seed": seed,
    }
    report = SuiteReport(name, params)
    rng = random.Random(f"{name}:{seed}")
    start = time.perf_counter()
    runner(rng, params, report.cases)
    if inject_failure:
        _case(report.cases, "injected failure (self-test)", ONE, ZERO)
    report.wall_time = time.perf_counter() - start
    return report
