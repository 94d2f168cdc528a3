"""Command-line front end.

Subcommands::

    spectop gen        write a graph from a named family to a file
    spectop spectrum   full spectrum as CSV, optional interval query
    spectop net        build an r-net (greedy-tree or expander-random)
    spectop local-net  run the local simulation and dump its transcript
    spectop verify     rad-drop | local-global | interlace | finite-param | thm
    spectop walks      tree | finite | fit | roundtrip
    spectop sweep      run a config-driven suite over a parameter grid

Exit codes: 0 all checks passed, 1 an inequality was violated (the violating
instance is serialized for replay), 2 usage or input error.

Every file output gets a sibling ``<path>.manifest.json`` recording the
sha256 of the canonical invocation config, the master seed, and library
versions, so outputs can be tied back to the exact run that made them.
Numbers are written with 17 significant digits and a ``.`` decimal point
regardless of locale; reruns with the same config and seed are
byte-identical, including under ``SPECTOP_WORKERS`` parallelism, because
every trial draws from its own ``(master seed, trial index)`` stream and
rows are aggregated in trial order.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
import scipy

from . import __version__
from .bounds import (
    BoundReport,
    HypothesisViolatedError,
    finite_param_check,
    interlacing_check,
    select_r_s,
    thm_checker,
)
from .families import FAMILIES, FamilySpec, generate
from .graphs import (
    GraphError,
    VertexSet,
    WeightedGraph,
    read_graph,
    write_graph,
)
from .localsim import LocalLabels, local_net, theory_params
from .nets import greedy_tree_net, net_removal_drop_check, random_expander_net
from .rng import rng_for, trial_seed
from .spectral import (
    DEFAULT_SOLVER_CAP,
    SpectralInterval,
    Spectrum,
    eigenvalues,
    interval_query_json,
    local_global_check,
    spectrum_to_csv,
)
from .walks import (
    DEFAULT_THETA_GRID,
    adjacency_moments,
    decay_fit,
    return_decay_roundtrip,
    return_probs_finite,
    series_to_csv,
    tree_return_probs,
)

WORKERS_ENV = "SPECTOP_WORKERS"


# ---------------------------------------------------------------------------
# formatting, manifests, trial plumbing


def fmt(v: Any) -> str:
    """Locale-independent cell formatting; floats get 17 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _versions() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "spectop": __version__,
    }


def write_manifest(out_path: str, config: dict, seed: int | None) -> None:
    manifest = {
        "config_sha256": config_hash(config),
        "seed": seed,
        "versions": _versions(),
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")


def invocation_config(args: argparse.Namespace) -> dict:
    # Worker count is runtime plumbing, not config: parallelism must not
    # change any output byte, so it must not change the config hash either.
    skip = {"func", "workers"}
    out: dict = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def write_csv(path: str | None, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def write_text(path: str | None, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def n_workers(override: int | None = None) -> int:
    if override is not None:
        return max(1, override)
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise GraphError(f"{WORKERS_ENV} must be an integer, got {env!r}") from exc
    return 1


def run_trials(fn: Callable[[int], Any], trials: int, workers: int) -> list:
    """Evaluate fn(0..trials-1); results come back in trial order regardless
    of how many workers raced."""
    if workers <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def report_violations(
    args: argparse.Namespace, violations: list[dict], out_path: str | None
) -> int:
    if not violations:
        return 0
    payload = json.dumps(violations, sort_keys=True, indent=2, default=fmt)
    if out_path is not None:
        with open(out_path + ".violations.json", "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    sys.stderr.write(payload + "\n")
    sys.stderr.write(f"FAIL: {len(violations)} violated instance(s) serialized for replay\n")
    return 1


# ---------------------------------------------------------------------------
# family / graph resolution


def _parse_dims(text: str) -> tuple[int, int]:
    for sep in ("x", ","):
        if sep in text:
            parts = text.split(sep)
            if len(parts) == 2:
                return (int(parts[0]), int(parts[1]))
    raise argparse.ArgumentTypeError(f"expected AxB or A,B, got {text!r}")


def _parse_window(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    if not hi:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return (int(lo), int(hi))


def _parse_interval(text: str) -> tuple[float, float]:
    a, _, b = text.partition(":")
    if not b:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}")
    return (float(a), float(b))


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part)


def add_graph_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--graph", help="path to a graph file (overrides family flags)")
    sp.add_argument("--family", choices=FAMILIES, help="named graph family")
    sp.add_argument("--n", type=int, help="vertex count (path, cycle, complete, random-regular)")
    sp.add_argument("--d", type=int, help="degree or dimension, family dependent")
    sp.add_argument("--depth", type=int, help="radius for tree-ball")
    sp.add_argument("--dims", type=_parse_dims, help="torus-grid side lengths, AxB")
    sp.add_argument(
        "--family-seed",
        type=int,
        default=None,
        help="pin the random-regular seed; default derives it from the run seed",
    )


def family_spec(args: argparse.Namespace, seed: int) -> FamilySpec:
    if args.family is None:
        raise GraphError("either --graph or --family is required")
    fseed = args.family_seed if args.family_seed is not None else seed
    return FamilySpec(
        family=args.family,
        n=args.n,
        d=args.d,
        depth=args.depth,
        dims=args.dims,
        seed=fseed,
    )


def family_desc(args: argparse.Namespace) -> dict:
    if args.graph:
        return {"graph": args.graph}
    desc = {"family": args.family}
    for key in ("n", "d", "depth", "dims"):
        value = getattr(args, key)
        if value is not None:
            desc[key] = list(value) if isinstance(value, tuple) else value
    return desc


def graph_provider(args: argparse.Namespace) -> Callable[[int], WeightedGraph]:
    """Map a trial seed to a graph.

    File inputs and deterministic families ignore the seed and return one
    cached instance; random-regular regenerates per seed unless the caller
    pinned --family-seed.
    """
    if args.graph:
        g = read_graph(args.graph)
        return lambda seed: g
    if args.family == "random-regular" and args.family_seed is None:
        return lambda seed: generate(family_spec(args, seed))
    g = generate(family_spec(args, 0))
    return lambda seed: g


def single_graph(args: argparse.Namespace, seed: int) -> WeightedGraph:
    if args.graph:
        return read_graph(args.graph)
    return generate(family_spec(args, seed))


# ---------------------------------------------------------------------------
# gen / spectrum / net / local-net


def cmd_gen(args: argparse.Namespace) -> int:
    spec = family_spec(args, args.seed)
    g = generate(spec)
    write_graph(g, args.out)
    write_manifest(args.out, invocation_config(args), args.seed)
    print(f"wrote {args.out}: {spec.describe()} n={g.n} m={g.m}")
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    g = single_graph(args, args.seed)
    spectrum = eigenvalues(g, cap=args.cap, compute_residual=not args.no_residual)
    spectrum_to_csv(spectrum, args.out)
    write_manifest(args.out, invocation_config(args), args.seed)
    if args.interval is not None:
        a, b = args.interval
        iv = SpectralInterval(a, b, not args.open_a, not args.open_b)
        record = interval_query_json(spectrum, iv)
        text = json.dumps(record, sort_keys=True)
        if args.query_out:
            write_text(args.query_out, text)
            write_manifest(args.query_out, invocation_config(args), args.seed)
        else:
            print(text)
    return 0


def _build_net(g: WeightedGraph, method: str, r: int, p: float | None, seed: int):
    if method == "greedy-tree":
        return greedy_tree_net(g, r)
    if method == "expander-random":
        if p is None:
            raise GraphError("expander-random needs --p")
        return random_expander_net(g, r, p, seed)
    raise GraphError(f"unknown net method {method!r}")


def cmd_net(args: argparse.Namespace) -> int:
    g = single_graph(args, args.seed)
    net = _build_net(g, args.method, args.r, args.p, args.seed)
    text = net.to_json()
    if args.out:
        write_text(args.out, text)
        write_manifest(args.out, invocation_config(args), args.seed)
    else:
        print(text)
    print(
        f"method={net.method} r={net.r} size={len(net.vertices)} "
        f"density={fmt(net.density)} verified={fmt(net.verified)}",
        file=sys.stderr,
    )
    if not net.verified:
        violation = {
            "suite": "net",
            "family": family_desc(args),
            "seed": args.seed,
            "params": {"method": args.method, "r": args.r, "p": args.p},
            "row": json.loads(text),
        }
        return report_violations(args, [violation], args.out)
    return 0


def cmd_local_net(args: argparse.Namespace) -> int:
    g = single_graph(args, args.seed)
    if args.theory_params:
        tp = theory_params(g.delta, args.r)
        if not tp.practical:
            raise GraphError(
                f"theory parameters give R={tp.R}, too large to run; "
                "pass --p and --R explicitly"
            )
        p, big_r = tp.p, tp.R
    else:
        if args.p is None or args.R is None:
            raise GraphError("local-net needs --p and --R (or --theory-params)")
        p, big_r = args.p, args.R
    labels = LocalLabels.from_seed(g.n, args.seed)
    run = local_net(g, labels, p, big_r, args.r)
    text = run.transcript_json()
    if args.out:
        write_text(args.out, text)
        write_manifest(args.out, invocation_config(args), args.seed)
    else:
        print(text)
    if not run.net.verified:
        violation = {
            "suite": "local-net",
            "family": family_desc(args),
            "seed": args.seed,
            "params": {"p": p, "R": big_r, "r": args.r},
            "row": json.loads(text),
        }
        return report_violations(args, [violation], args.out)
    return 0


# ---------------------------------------------------------------------------
# verify suites


def _violation(
    suite: str, args: argparse.Namespace, trial: int, seed: int, params: dict, row: dict
) -> dict:
    return {
        "suite": suite,
        "family": family_desc(args),
        "trial": trial,
        "seed": seed,
        "params": params,
        "row": row,
    }


def cmd_verify_rad_drop(args: argparse.Namespace) -> int:
    provider = graph_provider(args)
    methods = ["greedy-tree", "expander-random"] if args.method == "both" else [args.method]

    def one(t: int):
        st = trial_seed(args.seed, t)
        g = provider(st)
        out = []
        for method in methods:
            net = _build_net(g, method, args.r, args.p, st)
            rep = net_removal_drop_check(g, net, args.r)
            out.append((st, g.n, method, net, rep))
        return out

    results = run_trials(one, args.trials, n_workers(args.workers))
    header = ["trial", "seed", "n", "method", "r", "net_size", "lam1_g", "lam1_h", "lhs", "rhs", "ok"]
    rows, violations = [], []
    for t, group in enumerate(results):
        for st, n, method, net, rep in group:
            row = [t, st, n, method, rep.r, rep.net_size, rep.lam1_g, rep.lam1_h, rep.lhs, rep.rhs, rep.ok]
            rows.append(row)
            if not rep.ok:
                violations.append(
                    _violation(
                        "rad-drop", args, t, st,
                        {"r": args.r, "method": method, "p": args.p},
                        dict(zip(header, [fmt(c) for c in row])),
                    )
                )
    write_csv(args.out, header, rows)
    if args.out:
        write_manifest(args.out, invocation_config(args), args.seed)
    return report_violations(args, violations, args.out)


def cmd_verify_local_global(args: argparse.Namespace) -> int:
    provider = graph_provider(args)
    radii = list(range(1, args.r_max + 1)) if args.r is None else [args.r]

    def one(t: int):
        st = trial_seed(args.seed, t)
        g = provider(st)
        return [(st, g.n, local_global_check(g, r)) for r in radii]

    results = run_trials(one, args.trials, n_workers(args.workers))
    header = ["trial", "seed", "n", "r", "lhs", "rhs", "slack", "ok"]
    rows, violations = [], []
    for t, group in enumerate(results):
        for st, n, rep in group:
            row = [t, st, n, rep.r, rep.lhs, rep.rhs, rep.slack, rep.ok]
            rows.append(row)
            if not rep.ok:
                violations.append(
                    _violation(
                        "local-global", args, t, st, {"r": rep.r},
                        dict(zip(header, [fmt(c) for c in row])),
                    )
                )
    write_csv(args.out, header, rows)
    if args.out:
        write_manifest(args.out, invocation_config(args), args.seed)
    return report_violations(args, violations, args.out)


def cmd_verify_interlace(args: argparse.Namespace) -> int:
    provider = graph_provider(args)
    modes = ["delete", "zero-rows-cols"] if args.mode == "both" else [args.mode]

    def one(t: int):
        st = trial_seed(args.seed, t)
        g = provider(st)
        size = min(args.u_size, g.n - 1)
        picks = rng_for(st).choice(g.n, size=size, replace=False)
        u = VertexSet.of(picks.tolist(), g.n)
        return [(st, g.n, u, interlacing_check(g, u, mode)) for mode in modes]

    results = run_trials(one, args.trials, n_workers(args.workers))
    header = [
        "trial", "seed", "n", "mode", "u_size",
        "halfline_dev", "halfline_bound", "interval_dev", "interval_bound", "grid_size", "ok",
    ]
    rows, violations = [], []
    for t, group in enumerate(results):
        for st, n, u, rep in group:
            row = [
                t, st, n, rep.mode, rep.u_size,
                rep.halfline_dev, rep.halfline_bound,
                rep.interval_dev, rep.interval_bound, rep.grid_size, rep.ok,
            ]
            rows.append(row)
            if not rep.ok:
                violations.append(
                    _violation(
                        "interlace", args, t, st,
                        {"mode": rep.mode, "u": list(u.ids)},
                        dict(zip(header, [fmt(c) for c in row])),
                    )
                )
    write_csv(args.out, header, rows)
    if args.out:
        write_manifest(args.out, invocation_config(args), args.seed)
    return report_violations(args, violations, args.out)


def _pick_x(rule: str, x_flag: float | None, spectrum: Spectrum, w_min: float) -> float:
    if rule == "value":
        if x_flag is None:
            raise GraphError("--x-rule value needs --x")
        return x_flag
    values = spectrum.values
    if rule == "lambda2":
        if len(values) < 2:
            raise GraphError("lambda2 rule needs at least two eigenvalues")
        return max(float(values[-2]), w_min)
    if rule == "half-lambda1":
        return max(float(values[-1]) / 2.0, w_min)
    raise GraphError(f"unknown x rule {rule!r}")


def cmd_verify_finite_param(args: argparse.Namespace) -> int:
    provider = graph_provider(args)

    def one(t: int):
        st = trial_seed(args.seed, t)
        g = provider(st)
        spectrum = eigenvalues(g, cap=args.cap, compute_residual=False)
        x = _pick_x(args.x_rule, args.x, spectrum, g.w_min)
        theta = args.theta
        if args.auto_rs:
            sel = select_r_s(theta, g.delta_tilde)
            if not sel.ok:
                raise GraphError(f"schedule inadmissible: {sel.reason}")
            r, s = sel.r, sel.s
        else:
            if args.r is None or args.s is None:
                raise GraphError("finite-param needs --r and --s (or --auto-rs)")
            r, s = args.r, args.s
        net = _build_net(g, args.method, r, args.p, st)
        rep = finite_param_check(g, x, theta, r, s, net, spectrum=spectrum)
        return st, g.n, x, theta, r, s, net, rep

    results = run_trials(one, args.trials, n_workers(args.workers))
    header = [
        "trial", "seed", "n", "x", "theta", "r", "s", "net_size",
        "lhs", "rhs", "term_moment", "term_tail", "term_net", "ok",
    ]
    rows, violations = [], []
    for t, (st, n, x, theta, r, s, net, rep) in enumerate(results):
        row = [
            t, st, n, x, theta, r, s, len(net.vertices),
            rep.lhs, rep.rhs, rep.terms["moment"], rep.terms["tail"], rep.terms["net"], rep.ok,
        ]
        rows.append(row)
        if not rep.ok:
            violations.append(
                _violation(
                    "finite-param", args, t, st,
                    {"x": x, "theta": theta, "r": r, "s": s, "method": args.method},
                    dict(zip(header, [fmt(c) for c in row])),
                )
            )
    write_csv(args.out, header, rows)
    if args.out:
        write_manifest(args.out, invocation_config(args), args.seed)
    return report_violations(args, violations, args.out)


def cmd_verify_thm(args: argparse.Namespace) -> int:
    g = single_graph(args, args.seed)
    spectrum = eigenvalues(g, cap=args.cap, compute_residual=False)
    rep = thm_checker(g, args.variant, x=args.x, theta=args.theta, c=args.c, spectrum=spectrum)
    text = rep.to_json()
    if args.out:
        write_text(args.out, text)
        write_manifest(args.out, invocation_config(args), args.seed)
    else:
        print(text)
    print(
        f"variant={args.variant} lhs={fmt(rep.lhs)} rhs={fmt(rep.rhs)} "
        f"rate={fmt(rep.rate)} implied_constant={fmt(rep.implied_constant)} ok={fmt(rep.ok)}",
        file=sys.stderr,
    )
    if not rep.ok:
        violation = _violation(
            "thm", args, 0, args.seed,
            {"variant": args.variant, "x": args.x, "theta": args.theta, "c": args.c},
            json.loads(text),
        )
        return report_violations(args, [violation], args.out)
    return 0


# ---------------------------------------------------------------------------
# walks


def cmd_walks_tree(args: argparse.Namespace) -> int:
    series = tree_return_probs(args.d, args.N)
    series_to_csv(series, args.out)
    write_manifest(args.out, invocation_config(args), None)
    return 0


def cmd_walks_finite(args: argparse.Namespace) -> int:
    g = single_graph(args, args.seed)
    if args.kind == "srw":
        series = return_probs_finite(g, args.origin, args.K)
    else:
        series = adjacency_moments(g, args.origin, args.K)
    series_to_csv(series, args.out)
    write_manifest(args.out, invocation_config(args), args.seed)
    return 0


def cmd_walks_fit(args: argparse.Namespace) -> int:
    series = tree_return_probs(args.d, args.N)
    fit = decay_fit(series, args.window)
    record = {
        "d": args.d,
        "N": args.N,
        "window": list(fit.window),
        "rho_hat": fit.rho_hat,
        "rho_true": 2.0 * (args.d - 1) ** 0.5,
        "alpha_hat": fit.alpha_hat,
        "const_hat": fit.const_hat,
        "max_residual": fit.max_residual,
        "note": fit.note,
    }
    text = json.dumps(record, sort_keys=True)
    if args.out:
        write_text(args.out, text)
        write_manifest(args.out, invocation_config(args), None)
    else:
        print(text)
    return 0


def cmd_walks_roundtrip(args: argparse.Namespace) -> int:
    rep = return_decay_roundtrip(
        args.d, theta_grid=args.theta_grid, N=args.N, window=args.window
    )
    record = asdict(rep)
    record["theta_grid"] = list(rep.theta_grid)
    record["window"] = list(rep.window)
    text = json.dumps(record, sort_keys=True)
    if args.out:
        write_text(args.out, text)
        write_manifest(args.out, invocation_config(args), None)
    else:
        print(text)
    if not rep.ok:
        violation = {
            "suite": "walks-roundtrip",
            "family": {"tree-degree": args.d},
            "seed": None,
            "params": {"N": args.N, "window": list(args.window)},
            "row": json.loads(text),
        }
        return report_violations(args, [violation], args.out)
    return 0


# ---------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a suite name, the families it runs over, parameter grids,
    a master seed, output locations, and tolerance overrides."""

    suite: str
    seed: int = 0
    families: tuple[dict, ...] = ()
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    out_dir: str = "sweep-out"

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise GraphError(f"unknown config keys: {sorted(unknown)}")
        if "suite" not in obj:
            raise GraphError("config needs a 'suite' key")
        families = tuple(obj.get("families", ()))
        return cls(
            suite=obj["suite"],
            seed=int(obj.get("seed", 0)),
            families=families,
            grid=dict(obj.get("grid", {})),
            tolerances=dict(obj.get("tolerances", {})),
            out_dir=obj.get("out_dir", "sweep-out"),
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["families"] = [dict(f) for f in self.families]
        return out


def _spec_from_dict(obj: dict, seed: int) -> FamilySpec:
    dims = obj.get("dims")
    return FamilySpec(
        family=obj["family"],
        n=obj.get("n"),
        d=obj.get("d"),
        depth=obj.get("depth"),
        dims=tuple(dims) if dims is not None else None,
        seed=obj.get("seed", seed),
    )


def _sweep_provider(fam: dict, cfg_seed: int) -> Callable[[int], WeightedGraph]:
    if fam.get("family") == "random-regular" and "seed" not in fam:
        return lambda seed: generate(_spec_from_dict(fam, seed))
    g = generate(_spec_from_dict(fam, cfg_seed))
    return lambda seed: g


def _ok_with_tol(lhs: float, rhs: float, default_ok: bool, tol: float | None) -> bool:
    if tol is None:
        return default_ok
    return lhs <= rhs + tol


# The second-eig preset theta = 10 / log_{delta_tilde} n exceeds 1 on small or
# high-degree instances; the window bound is only stated for theta < 1, so the
# accompanying check runs at this cap instead when that happens.
EN_ROUTE_THETA_CAP = 0.9


def en_route_finite_param(
    g: WeightedGraph, spectrum: Spectrum, x: float, theta: float
) -> tuple[float, int, int, Any]:
    """Window-bound check at the same x the theorem instance used.

    theta is clamped into the bound's domain, (r, s) come from the schedule
    when it is admissible and fall back to (1, floor(1/theta)) otherwise, and
    the net is the greedy tree net.
    """
    theta_fp = theta if theta < 1.0 else EN_ROUTE_THETA_CAP
    sel = select_r_s(theta_fp, g.delta_tilde)
    if sel.ok:
        r, s = sel.r, sel.s
    else:
        r, s = 1, max(1, int(1.0 / theta_fp))
    net = greedy_tree_net(g, r)
    rep = finite_param_check(g, max(x, g.w_min), theta_fp, r, s, net, spectrum=spectrum)
    return theta_fp, r, s, rep


def _sweep_second_eig(
    cfg: ExperimentConfig, workers: int
) -> tuple[list[str], list[list], list[dict]]:
    header = [
        "family", "n", "seed", "delta_tilde", "x", "theta",
        "lhs", "rhs", "rate", "implied_constant", "ok",
        "fp_theta", "fp_r", "fp_s", "fp_lhs", "fp_rhs", "fp_ok",
    ]
    rows: list[list] = []
    violations: list[dict] = []
    sizes = cfg.grid.get("n", [])
    cap = int(cfg.grid.get("cap", DEFAULT_SOLVER_CAP))
    with_fp = bool(cfg.grid.get("finite_param", True))
    jobs = [(fam, n) for fam in cfg.families for n in sizes]

    def one(idx: int):
        fam, n = jobs[idx]
        st = trial_seed(cfg.seed, idx)
        spec = _spec_from_dict({**fam, "n": n}, st)
        g = generate(spec)
        spectrum = eigenvalues(g, cap=cap, compute_residual=False)
        rep = thm_checker(g, "second-eig", spectrum=spectrum)
        fp = None
        if with_fp:
            fp = en_route_finite_param(g, spectrum, rep.params["x"], rep.params["theta"])
        return spec, st, g.delta_tilde, rep, fp

    results = run_trials(one, len(jobs), workers)
    for idx, (spec, st, dt, rep, fp) in enumerate(results):
        row = [
            spec.family, spec.n, st, dt,
            rep.params["x"], rep.params["theta"],
            rep.lhs, rep.rhs, rep.rate, rep.implied_constant, rep.ok,
        ]
        if fp is None:
            row += ["", "", "", "", "", ""]
            fp_ok = True
        else:
            theta_fp, r, s, fp_rep = fp
            row += [theta_fp, r, s, fp_rep.lhs, fp_rep.rhs, fp_rep.ok]
            fp_ok = fp_rep.ok
        rows.append(row)
        if not rep.ok or not fp_ok:
            violations.append(
                {
                    "suite": "second-eig",
                    "family": {"family": spec.family, "n": spec.n, "d": spec.d, "seed": spec.seed},
                    "trial": idx,
                    "seed": st,
                    "params": {"variant": "second-eig"},
                    "row": dict(zip(header, [fmt(c) for c in row])),
                }
            )
    return header, rows, violations


def _sweep_trial_suite(
    cfg: ExperimentConfig, workers: int
) -> tuple[list[str], list[list], list[dict]]:
    suite = cfg.suite
    trials = int(cfg.grid.get("trials", 10))
    radii = [int(r) for r in cfg.grid.get("r", [1])]
    p = cfg.grid.get("p")
    method = cfg.grid.get("method", "greedy-tree")
    tol = cfg.tolerances.get(suite)
    header_by_suite = {
        "rad-drop": ["family", "trial", "seed", "n", "method", "r",
                     "net_size", "lam1_g", "lam1_h", "lhs", "rhs", "ok"],
        "local-global": ["family", "trial", "seed", "n", "r", "lhs", "rhs", "slack", "ok"],
    }
    if suite not in header_by_suite:
        raise GraphError(f"unknown sweep suite {suite!r}")
    header = header_by_suite[suite]
    rows: list[list] = []
    violations: list[dict] = []
    for fam in cfg.families:
        provider = _sweep_provider(fam, cfg.seed)
        fam_name = fam.get("family", "?")

        def one(t: int, provider=provider):
            st = trial_seed(cfg.seed, t)
            g = provider(st)
            group = []
            for r in radii:
                if suite == "rad-drop":
                    net = _build_net(g, method, r, p, st)
                    group.append((st, g.n, r, net, net_removal_drop_check(g, net, r)))
                else:
                    group.append((st, g.n, r, None, local_global_check(g, r)))
            return group

        results = run_trials(one, trials, workers)
        for t, group in enumerate(results):
            for st, n, r, net, rep in group:
                if suite == "rad-drop":
                    ok = _ok_with_tol(rep.lhs, rep.rhs, rep.ok, tol)
                    row = [fam_name, t, st, n, method, r, rep.net_size,
                           rep.lam1_g, rep.lam1_h, rep.lhs, rep.rhs, ok]
                else:
                    ok = _ok_with_tol(rep.lhs, rep.rhs, rep.ok, tol)
                    row = [fam_name, t, st, n, r, rep.lhs, rep.rhs, rep.slack, ok]
                rows.append(row)
                if not ok:
                    violations.append(
                        {
                            "suite": suite,
                            "family": dict(fam),
                            "trial": t,
                            "seed": st,
                            "params": {"r": r, "method": method, "p": p},
                            "row": dict(zip(header, [fmt(c) for c in row])),
                        }
                    )
    return header, rows, violations


def cmd_sweep(args: argparse.Namespace) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    cfg = ExperimentConfig.from_dict(raw)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    if args.suite is not None:
        overrides["suite"] = args.suite
    if overrides:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), **overrides})

    workers = n_workers(args.workers)
    if cfg.suite == "second-eig":
        header, rows, violations = _sweep_second_eig(cfg, workers)
    else:
        header, rows, violations = _sweep_trial_suite(cfg, workers)

    os.makedirs(cfg.out_dir, exist_ok=True)
    out_path = os.path.join(cfg.out_dir, f"{cfg.suite}.csv")
    write_csv(out_path, header, rows)
    write_manifest(out_path, cfg.to_dict(), cfg.seed)
    print(f"wrote {out_path}: {len(rows)} rows")
    return report_violations(args, violations, out_path)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectop",
        description="Verification harness for spectral non-concentration bounds.",
    )
    parser.add_argument("--version", action="version", version=f"spectop {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("gen", help="generate a graph from a named family")
    add_graph_args(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("spectrum", help="full spectrum as CSV")
    add_graph_args(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cap", type=int, default=DEFAULT_SOLVER_CAP)
    sp.add_argument("--no-residual", action="store_true")
    sp.add_argument("--interval", type=_parse_interval, help="count/measure query A:B")
    sp.add_argument("--open-a", action="store_true", help="open left endpoint")
    sp.add_argument("--open-b", action="store_true", help="open right endpoint")
    sp.add_argument("--query-out", help="write the interval query JSON here")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("net", help="build an r-net")
    add_graph_args(sp)
    sp.add_argument("--method", choices=["greedy-tree", "expander-random"], default="greedy-tree")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--p", type=float, help="seed density for expander-random")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_net)

    sp = sub.add_parser("local-net", help="run the label-driven local net builder")
    add_graph_args(sp)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--p", type=float, help="captain election probability")
    sp.add_argument("--R", type=int, help="Voronoi truncation radius")
    sp.add_argument(
        "--theory-params",
        action="store_true",
        help="derive p and R from the worst-case schedule for (delta, r)",
    )
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_local_net)

    ver = sub.add_parser("verify", help="inequality verification suites")
    vsub = ver.add_subparsers(dest="suite", required=True)

    sp = vsub.add_parser("rad-drop", help="net removal drops the top eigenvalue")
    add_graph_args(sp)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--method", choices=["greedy-tree", "expander-random", "both"],
                    default="greedy-tree")
    sp.add_argument("--p", type=float)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify_rad_drop)

    sp = vsub.add_parser("local-global", help="trace of A^{2r} against ball tops")
    add_graph_args(sp)
    sp.add_argument("--r", type=int, help="single radius")
    sp.add_argument("--r-max", type=int, default=3, help="radii 1..r_max when --r is absent")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify_local_global)

    sp = vsub.add_parser("interlace", help="eigenvalue count stability under vertex removal")
    add_graph_args(sp)
    sp.add_argument("--u-size", type=int, required=True)
    sp.add_argument("--mode", choices=["delete", "zero-rows-cols", "both"], default="both")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify_interlace)

    sp = vsub.add_parser("finite-param", help="finite-parameter window bound")
    add_graph_args(sp)
    sp.add_argument("--x", type=float)
    sp.add_argument("--x-rule", choices=["value", "lambda2", "half-lambda1"], default="lambda2")
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--auto-rs", action="store_true", help="pick (r, s) from the schedule")
    sp.add_argument("--method", choices=["greedy-tree", "expander-random"], default="greedy-tree")
    sp.add_argument("--p", type=float)
    sp.add_argument("--cap", type=int, default=DEFAULT_SOLVER_CAP)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify_finite_param)

    sp = vsub.add_parser("thm", help="theorem-shaped bound with measured implied constant")
    add_graph_args(sp)
    sp.add_argument("--variant", choices=["main", "expander", "second-eig"], required=True)
    sp.add_argument("--x", type=float)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--c", type=float, help="assumed expansion constant (expander variant)")
    sp.add_argument("--cap", type=int, default=DEFAULT_SOLVER_CAP)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify_thm)

    wlk = sub.add_parser("walks", help="return probability series and decay fits")
    wsub = wlk.add_subparsers(dest="mode", required=True)

    sp = wsub.add_parser("tree", help="regular-tree return probabilities p_{2n}")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_walks_tree)

    sp = wsub.add_parser("finite", help="return series on a finite graph")
    add_graph_args(sp)
    sp.add_argument("--kind", choices=["srw", "moment"], default="srw")
    sp.add_argument("--origin", type=int, default=0)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_walks_finite)

    sp = wsub.add_parser("fit", help="fit rho and the polynomial correction exponent")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--N", type=int, default=1000)
    sp.add_argument("--window", type=_parse_window, default=(100, 1000))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_walks_fit)

    sp = wsub.add_parser("roundtrip", help="mass exponent vs walk exponent consistency")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--N", type=int, default=1000)
    sp.add_argument("--window", type=_parse_window, default=(100, 1000))
    sp.add_argument("--theta-grid", type=_parse_floats, default=DEFAULT_THETA_GRID)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_walks_roundtrip)

    sp = sub.add_parser("sweep", help="config-driven suite over a parameter grid")
    sp.add_argument("--config", required=True, help="ExperimentConfig JSON")
    sp.add_argument("--seed", type=int, help="override the config seed")
    sp.add_argument("--out-dir", help="override the config output directory")
    sp.add_argument("--suite", help="override the config suite")
    sp.add_argument("--workers", type=int, help="override the worker count")
    sp.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HypothesisViolatedError as exc:
        print(f"error: hypothesis violated: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
