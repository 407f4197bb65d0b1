"""Command line entry point: ``rtensor <command> ...``.

Every command prints one JSON report (or CSV of its scalar fields) that
embeds the configuration it ran with.  Exit codes: 0 success, 1 a checked
property failed, 2 usage error, 3 size guard hit, 4 bad input, 5 numerical
divergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
from fractions import Fraction

import numpy as np

from . import __version__, _accel
from .graph_core import (GuardError, dipole, enumerate_invariants, faces,
                         is_connected, iso_key, load_graph, validate, component_count)

OK, FAILED, USAGE, GUARD, BAD_INPUT, DIVERGED = 0, 1, 2, 3, 4, 5


class CheckFailed(Exception):
    pass


def default_threads():
    env = os.environ.get("RTENSOR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _graph(spec, colors=None):
    try:
        g = load_graph(spec)
    except FileNotFoundError:
        raise ValueError(f"no catalog entry or file named {spec!r}")
    if colors is not None and colors != g.colors:
        if g.k == 1:
            return dipole(colors)
        raise ValueError(f"{spec} has {g.colors} colors, not {colors}")
    return g


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialise {type(x)}")


# -- commands ---------------------------------------------------------------

def cmd_validate(a):
    g_raw = None
    try:
        g_raw = load_graph(a.graph)
        problems = []
    except ValueError as exc:
        problems = str(exc).split("; ")
    if g_raw is not None:
        problems = validate(g_raw)
    res = {"valid": not problems, "problems": problems}
    if problems:
        raise CheckFailed(res)
    return res


def cmd_info(a):
    from .jackets import degree
    g = _graph(a.graph, a.colors)
    res = {"colors": g.colors, "k": g.k, "vertices": g.vertex_count, "edges": g.edge_count,
           "connected": is_connected(g), "components": component_count(g),
           "faces": {f"{i},{j}": [f.length for f in faces(g, i, j)]
                     for i in range(g.colors) for j in range(i + 1, g.colors)}}
    if g.k <= 6:
        res["iso_key"] = iso_key(g)
    if res["connected"]:
        res["degree"] = degree(g).omega
    return res


def cmd_census(a):
    from .melonic import count_melonic, fuss_catalan, is_melonic
    rows = []
    for n in range(1, a.n + 1):
        row = {"n": n, "trees": count_melonic(a.colors, n), "fuss_catalan": fuss_catalan(a.colors, n)}
        if a.iso and n <= 4:
            gs = enumerate_invariants(a.colors, n, guard=4)
            row["iso_classes"] = len(gs)
            row["melonic_iso_classes"] = sum(is_melonic(g) for g in gs)
        rows.append(row)
    if any(r["trees"] != r["fuss_catalan"] for r in rows):
        raise CheckFailed({"census": rows})
    return {"colors": a.colors, "census": rows}


def cmd_degree(a):
    from .jackets import degree
    rep = degree(_graph(a.graph, a.colors))
    if rep.identity_residual != 0:
        raise CheckFailed(rep.to_dict())
    return rep.to_dict()


def cmd_melonic(a):
    from .jackets import degree
    from .melonic import is_melonic, to_tree
    g = _graph(a.graph, a.colors)
    mel = is_melonic(g)
    res = {"melonic": mel, "omega": degree(g).omega if g.colors > 2 else 0}
    res["tree"] = to_tree(g).to_list() if mel else None
    return res


def cmd_boundary(a):
    from . import boundary as bd
    g = bd.load_open(a.graph)
    amp = bd.amplitude_exponent(g)
    res = {"boundary": bd.boundary_graph(g).to_dict(), "exponent": amp.exponent,
           "bound": amp.bound, "saturated": amp.saturated}
    if bd.is_connected_open(g):
        tr = bd.reduce_to_boundary(g, check=False)
        res["q_values"] = tr.q_values
        res["q_monotone"] = tr.monotone
        res["steps"] = [{"edge": list(s.edge), "parallel_colors": list(s.colors),
                         "components": s.components, "bubbles": s.bubbles} for s in tr.steps]
        if not tr.monotone or tr.boundary != bd.boundary_graph(g):
            raise CheckFailed(res)
    if not amp.holds:
        raise CheckFailed(res)
    return res


def cmd_moment(a):
    from .gaussian import exact_moment
    g = _graph(a.graph, a.colors)
    rep = exact_moment(g, None if a.symbolic else a.N, Fraction(a.sigma2))
    res = rep.to_dict()
    if a.per_covering:
        res["per_covering"] = [{"sigma": list(s), "zero_faces": F, "omega": w}
                               for s, F, w in rep.per_covering]
    return res


def cmd_omega_r(a):
    from .gaussian import omega_r
    omega, R = omega_r(_graph(a.graph, a.colors))
    return {"omega": str(omega), "R": R}


def cmd_explore_scaling(a):
    from .gaussian import explore_max_faces, mirror, scaling_probe
    rows = []
    for k in range(1, a.max_k + 1):
        for B in enumerate_invariants(a.colors, k):
            mf = explore_max_faces(B)
            probe = scaling_probe(B, [mirror(B)])
            rows.append({"k": k, "wiring": [list(r) for r in B.wiring],
                         "max_faces": mf.max_faces, "threshold": str(mf.threshold),
                         "margin": str(mf.margin), "negative": mf.negative,
                         "mirror_Lambda": probe.lam})
    # evidence only: a negative margin is reported, never treated as failure
    return {"colors": a.colors, "max_k": a.max_k, "invariants": rows,
            "negative_margins": sum(r["negative"] for r in rows)}


def cmd_mc_iid(a):
    from .tensor_lab import estimate_iid_moment
    g = _graph(a.graph, a.colors)
    res = estimate_iid_moment(g, a.dist, a.N, a.samples, a.seed, streams=a.streams, threads=a.threads)
    out = {"observable": a.graph, **res.to_dict()}
    if a.compare_exact:
        from .gaussian import exact_moment
        exact = float(exact_moment(g, a.N).value)
        out["exact_gaussian"] = exact
        out["z_score"] = (res.mean.real - exact) / res.stderr if res.stderr else None
    return out


def cmd_mc_quartic(a):
    from .series import quartic_cov_limit
    from .tensor_lab import mcmc_quartic
    res = mcmc_quartic(a.N, a.D, a.lam, a.sweeps, a.burnin, a.thin, a.seed, a.block)
    out = res.to_dict()
    out["large_N_limit"] = quartic_cov_limit(a.lam)
    out["tolerance_note"] = "acceptance bands are artifact choices, not predictions"
    return out


def cmd_series(a):
    from . import series as s
    out = {}
    if a.coeffs is not None:
        out["coeffs"] = [{"n": n, "enumerated": s.quartic_cov_coeff(n), "closed": s.quartic_cov_closed(n),
                          "catalan": s.catalan(n)} for n in range(a.coeffs + 1)]
        if any(r["enumerated"] != r["closed"] for r in out["coeffs"]):
            raise CheckFailed(out)
    if a.limit is not None:
        out["limit"] = {"lambda": a.limit, "value": s.quartic_cov_limit(a.limit),
                        "partial_sum_8": s.quartic_cov_partial(a.limit, 8)}
    if a.cycle_check is not None:
        rep = s.cycle_bound_check(a.cycle_check)
        out["cycle_check"] = {"k": rep.k, "max_excess": rep.max_lhs_minus_rhs,
                              "saturating": rep.saturating, "checked": rep.checked,
                              "examples": rep.examples}
        if not rep.holds:
            raise CheckFailed(out)
    if a.weingarten is not None:
        parts = [int(x) for x in a.weingarten.split(",")]
        out["weingarten"] = {"cycle_type": parts, "N": a.N,
                             "coefficient": str(s.weingarten_coefficient(parts)),
                             "leading": s.weingarten_leading(parts, a.N)}
    if not out:
        raise ValueError("series needs --coeffs, --limit, --cycle-check or --weingarten")
    return out


def cmd_verify_all(a):
    from .verify import verify_all
    outcomes = verify_all(a.suite, seed=a.seed, threads=a.threads)
    for o in outcomes:
        print(o.line(), file=sys.stderr)
    res = {"suite": a.suite, "passed": all(o.passed for o in outcomes),
           "criteria": [o.to_dict() for o in outcomes]}
    if not res["passed"]:
        raise CheckFailed(res)
    return res


# -- plumbing ---------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="rtensor", description=__doc__.splitlines()[0])
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $RTENSOR_THREADS or all cores)")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_):
        q = sub.add_parser(name, help=help_)
        q.add_argument("graph", help="catalog id or graph JSON file")
        q.add_argument("--colors", type=int, default=None)
        q.set_defaults(func=fn)
        return q

    graph_cmd("validate", cmd_validate, "check a graph file")
    graph_cmd("info", cmd_info, "faces, connectivity and iso key")
    graph_cmd("degree", cmd_degree, "jacket genera and degree")
    graph_cmd("melonic", cmd_melonic, "melonic test and tree")
    q = graph_cmd("moment", cmd_moment, "exact Gaussian moment")
    q.add_argument("--N", type=int, default=None)
    q.add_argument("--symbolic", action="store_true")
    q.add_argument("--sigma2", default="1")
    q.add_argument("--per-covering", action="store_true")
    graph_cmd("omega-r", cmd_omega_r, "convergence order and minimal covering count")

    q = sub.add_parser("census", help="melonic graph counts")
    q.add_argument("--colors", type=int, default=4)
    q.add_argument("--n", type=int, default=4)
    q.add_argument("--iso", action="store_true", help="also count iso classes (n <= 4)")
    q.set_defaults(func=cmd_census)

    q = sub.add_parser("boundary", help="boundary graph and amplitude of an open graph")
    q.add_argument("graph")
    q.set_defaults(func=cmd_boundary)

    q = sub.add_parser("explore-scaling", help="max-face margins over enumerated invariants")
    q.add_argument("--colors", type=int, default=3)
    q.add_argument("--max-k", type=int, default=3)
    q.set_defaults(func=cmd_explore_scaling)

    q = sub.add_parser("mc-iid", help="i.i.d. Monte Carlo estimate of an invariant")
    q.add_argument("--graph", required=True)
    q.add_argument("--colors", type=int, default=None)
    q.add_argument("--dist", default="complex-gaussian")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--samples", type=int, default=10000)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--streams", type=int, default=8)
    q.add_argument("--compare-exact", action="store_true")
    q.set_defaults(func=cmd_mc_iid)

    q = sub.add_parser("mc-quartic", help="Metropolis sampling of the quartic model")
    q.add_argument("--N", type=int, default=12)
    q.add_argument("--D", type=int, default=3)
    q.add_argument("--lambda", dest="lam", type=float, default=0.05)
    q.add_argument("--sweeps", type=int, default=200_000)
    q.add_argument("--burnin", type=int, default=20_000)
    q.add_argument("--thin", type=int, default=1)
    q.add_argument("--block", type=int, default=100)
    q.add_argument("--seed", type=int, required=True)
    q.set_defaults(func=cmd_mc_quartic)

    q = sub.add_parser("series", help="series coefficients and permutation checks")
    q.add_argument("--coeffs", type=int, default=None)
    q.add_argument("--limit", type=float, default=None)
    q.add_argument("--cycle-check", type=int, default=None)
    q.add_argument("--weingarten", default=None, help="cycle type, e.g. 2,1")
    q.add_argument("--N", type=float, default=1.0)
    q.set_defaults(func=cmd_series)

    q = sub.add_parser("verify-all", help="run the acceptance suite")
    q.add_argument("--suite", choices=("exact", "stochastic", "full"), default="exact")
    q.add_argument("--seed", type=int, default=42)
    q.set_defaults(func=cmd_verify_all)
    return p


def _config(a):
    return {k: v for k, v in sorted(vars(a).items()) if k not in ("func", "output", "format")}


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif not isinstance(v, list):
            yield key, v


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=_jsonable) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["field", "value"])
    for k, v in _flatten(report):
        w.writerow([k, v])
    return buf.getvalue()


def run(argv=None):
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if a.threads is None:
        a.threads = default_threads()
    status = OK
    try:
        result = a.func(a)
    except CheckFailed as exc:
        result, status = exc.args[0], FAILED
    except (GuardError, MemoryError) as exc:
        result, status = {"error": str(exc), "kind": "guard"}, GUARD
    except FloatingPointError as exc:
        result, status = {"error": str(exc), "kind": "divergence"}, DIVERGED
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        result, status = {"error": str(exc), "kind": "input"}, BAD_INPUT
    report = {"command": a.command, "config": _config(a), "status": status,
              "versions": {"rtensor": __version__, "numpy": np.__version__,
                           "python": platform.python_version()},
              "kernel_backend": _accel.BACKEND, "result": result}
    text = render(report, a.format)
    if a.output:
        with open(a.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
