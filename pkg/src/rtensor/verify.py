"""Acceptance suite shared by the test-suite and ``rtensor verify-all``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import boundary as bd
from .gaussian import check_shared_faces, exact_moment, omega_r, wick_oracle
from .graph_core import cycle_graph, enumerate_invariants, load_catalog
from .jackets import degree, scaled_degree
from .melonic import (count_melonic, covering, enumerate_trees, fuss_catalan, has_two_vertex_face,
                      is_melonic, melonic_coverings, unique_melonic_covering)
from .series import (cycle_bound_check, quartic_cov_closed, quartic_cov_coeff,
                     quartic_cov_limit, quartic_cov_partial)

EXACT = (1, 2, 3, 4, 5, 6, 7, 8, 9, 12)
STOCHASTIC = (10, 11)


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} [{flag}] {self.title} ({self.seconds:.1f}s)"

    def to_dict(self):
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "detail": self.detail}


def c1_catalan():
    t0 = time.perf_counter()
    Rs = [omega_r(cycle_graph(k))[1] for k in range(1, 7)]
    dt = time.perf_counter() - t0
    ok = Rs == [1, 2, 5, 14, 42, 132] and dt < 60
    return ok, {"R": Rs, "seconds": dt}


def c2_moments():
    cat = load_catalog()
    rows = []
    ok = True
    for name in cat.names():
        B = cat[name]
        if B.k > 3 or B.colors not in (2, 3):
            continue
        poly = exact_moment(B).poly
        for N in (2, 3):
            same = poly(N) == wick_oracle(B, N)
            ok &= same
            rows.append({"graph": name, "N": N, "poly": str(poly), "equal": same})
    expect = {"dipole": "N", "quartic1": "N + 1", "cycle6": "5N + N^-1"}
    found = {n: str(exact_moment(cat[n]).poly) for n in expect}
    ok &= found == expect
    return ok, {"checks": rows, "specific": found}


def c3_face_identity():
    ok = True
    n_cov = 0
    for k in range(1, 4):
        for B in enumerate_invariants(3, k):
            rep = exact_moment(B, check_degree=True)  # raises on any mismatch
            for sigma, _, wG in rep.per_covering:
                n_cov += 1
                ok &= scaled_degree(wG, 4).denominator == 1
                ok &= degree(covering(B, sigma)).identity_residual == 0
    return ok, {"coverings": n_cov}


def c4_melonic():
    detail = {}
    ok = True
    for C in (3, 4):
        bad, no_face, count = [], [], 0
        for k in range(1, 5):
            for g in enumerate_invariants(C, k, guard=4):
                count += 1
                w0 = degree(g).omega == 0
                if is_melonic(g) != w0:
                    bad.append(g.wiring)
                if w0 and g.k > 1 and not has_two_vertex_face(g):
                    no_face.append(g.wiring)
        detail[f"C={C}"] = {"graphs": count, "equivalence_failures": [list(map(list, w)) for w in bad],
                            "degree0_without_2face": [list(map(list, w)) for w in no_face]}
        ok &= not bad and not no_face
    uniq = []
    for k in range(1, 5):
        for B in enumerate_invariants(3, k):
            if is_melonic(B):
                found = melonic_coverings(B)
                G = unique_melonic_covering(B)
                good = len(found) == 1 and tuple(found[0]) == G.wiring[0]
                uniq.append(good)
                ok &= good
    detail["unique_covering_checked"] = len(uniq)
    detail["unique_covering_all"] = all(uniq)
    return ok, detail


def c5_census():
    counts = [count_melonic(4, n) for n in range(1, 5)]
    closed = [fuss_catalan(4, n) for n in range(1, 5)]
    listed = [len(enumerate_trees(4, n)) for n in range(1, 5)]
    ok = counts == [1, 4, 22, 140] == closed == listed
    return ok, {"count": counts, "fuss_catalan": closed, "listed": listed}


def c6_series():
    coeffs = [quartic_cov_coeff(n) for n in range(1, 5)]
    closed = [quartic_cov_closed(n) for n in range(1, 5)]
    lim = quartic_cov_limit(0.05)
    part = quartic_cov_partial(0.05, 8)
    ok = coeffs == [2, 8, 40, 224] == closed and abs(part - lim) < 1e-5 and f"{lim:.6f}" == "0.916080"
    return ok, {"coeffs": coeffs, "closed": closed, "limit": lim, "partial_sum": part,
                "difference": abs(part - lim)}


def c7_amplitude(q_every=1000, orders=100):
    cat = load_catalog()
    types = [cat["quartic1"], cat["quartic2"], cat["quartic3"]]
    total = bad = sat = 0
    probes = []
    for n, (_, g) in enumerate(bd.enumerate_open_graphs(types)):
        rep = bd.amplitude_exponent(g)
        total += 1
        bad += not rep.holds
        sat += rep.saturated
        if n % q_every == 0:
            probes.append(g)
    melonic = bd.open_graph([cat["quartic1"]], [1, -1])
    m = bd.amplitude_exponent(melonic)
    probes.append(melonic)
    mono = True
    rng = random.Random(0)
    for g in probes:
        for _ in range(orders):
            mono &= bd.reduce_to_boundary(g, rng).monotone
    ok = bad == 0 and m.exponent == m.bound == -2 and mono
    return ok, {"graphs": total, "violations": bad, "saturated": sat,
                "melonic_two_point": [m.exponent, m.bound], "q_probe_graphs": len(probes),
                "orders_per_graph": orders, "q_monotone": mono}


def c8_shared_faces():
    ok = True
    worst = {}
    for D in (3, 4):
        for k in range(1, 4):
            for B in enumerate_invariants(D, k):
                rep = check_shared_faces(B)
                ok &= rep.holds
                worst[D] = max(worst.get(D, 0), rep.max_shared)
    return ok, {"max_shared": worst, "bound": {D: D // 2 for D in (3, 4)}}


def c9_cycles():
    reps = [cycle_bound_check(k) for k in range(1, 6)]
    return all(r.holds for r in reps), {"max_excess": [r.max_lhs_minus_rhs for r in reps],
                                        "saturating": [r.saturating for r in reps]}


def c12_subleading():
    hits = []
    for k in (2, 3):
        for B in enumerate_invariants(3, k):
            o, R = omega_r(B)
            if (o, R) == (Fraction(1), 3):
                hits.append([list(r) for r in B.wiring])
    return bool(hits), {"classes_with_omega1_R3": hits}


def c10_iid(seed=42, samples=20000, N=16, threads=1):
    from .tensor_lab import estimate_iid_moment
    B = load_catalog()["quartic1"]
    t0 = time.perf_counter()
    up = estimate_iid_moment(B, "uniform-phase", N, samples, seed, threads=threads)
    ga = estimate_iid_moment(B, "complex-gaussian", N, samples, seed, threads=threads)
    dt = time.perf_counter() - t0
    lo, hi = 0.85 * (N + 1), 1.15 * (N + 1)
    m, e = up.mean.real, up.stderr
    ok_up = m + 3 * e >= lo and m - 3 * e <= hi
    ok_ga = abs(ga.mean.real - (N + 1)) <= 3 * ga.stderr
    return ok_up and ok_ga and dt < 300, {
        "uniform_phase": up.to_dict(), "complex_gaussian": ga.to_dict(),
        "ratio_uniform_phase": m / (N + 1), "seconds": dt,
        "tolerance_note": "bands are declared artifact tolerances"}


def c11_mcmc(seed=42, sweeps=200_000, burnin=20_000, N=12):
    from .tensor_lab import mcmc_quartic
    t0 = time.perf_counter()
    pert = mcmc_quartic(N, 3, 0.05, sweeps, burnin, seed=seed)
    free = mcmc_quartic(N, 3, 0.0, sweeps, burnin, seed=seed)
    dt = time.perf_counter() - t0
    target = quartic_cov_limit(0.05)
    d = pert.dipole.mean.real
    r = pert.ratio.mean.real
    ok1 = abs(d - target) <= 0.1 * target
    ok2 = 0.85 <= r <= 1.15
    ok3 = abs(free.dipole.mean.real - 1.0) <= 3 * free.dipole.stderr
    return ok1 and ok2 and ok3 and dt < 900, {
        "lambda_0.05": pert.to_dict(), "lambda_0": free.to_dict(), "limit": target,
        "seconds": dt, "tolerance_note": "bands are declared artifact tolerances"}


CRITERIA = {
    1: ("Catalan law for D=2 cycles", c1_catalan),
    2: ("exact moments equal the Wick oracle", c2_moments),
    3: ("face identity term by term", c3_face_identity),
    4: ("melonic equivalence and uniqueness", c4_melonic),
    5: ("melonic census", c5_census),
    6: ("quartic series coefficients and limit", c6_series),
    7: ("amplitude bound and Q monotonicity", c7_amplitude),
    8: ("shared-face bound", c8_shared_faces),
    9: ("permutation cycle bound", c9_cycles),
    10: ("i.i.d. universality at N=16", c10_iid),
    11: ("quartic MCMC at N=12", c11_mcmc),
    12: ("subleading example with (1, 3)", c12_subleading),
}


def run_criterion(n, **kw):
    title, fn = CRITERIA[n]
    t0 = time.perf_counter()
    ok, detail = fn(**kw)
    return Outcome(n, title, bool(ok), detail, time.perf_counter() - t0)


def verify_all(suite="exact", seed=42, threads=1):
    if suite == "exact":
        numbers = EXACT
    elif suite == "stochastic":
        numbers = STOCHASTIC
    elif suite == "full":
        numbers = tuple(sorted(EXACT + STOCHASTIC))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    out = []
    for n in numbers:
        kw = {}
        if n == 10:
            kw = {"seed": seed, "threads": threads}
        elif n == 11:
            kw = {"seed": seed}
        out.append(run_criterion(n, **kw))
    return out
