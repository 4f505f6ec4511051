"""Command-line interface: ``mweb {gen,solve,reduce,samba,mdlh,verify}``.

Exit codes: 0 success, 1 validation/parse error, 2 best-effort result after a
time limit, 3 capacity exceeded. Every randomized subcommand needs ``--seed``
(or the ``MWEB_SEED`` environment variable).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import io
from .core import (
    EDGE_WEIGHT,
    OBJECTIVES,
    Biclique,
    CapacityError,
    ValidationError,
    WeightedBipartiteGraph,
    biclique_weight,
)
from .mdlh import brute_force_mdlh, solve_mdlh, validate_summary
from .reduce import (
    ProductParams,
    SimpleGraph,
    clique_to_mweb,
    gamma_product,
    mweb_to_problem_p,
    random_simple_graph,
    verify_reduction,
)
from .samba import (
    REFINED,
    SIMPLE,
    SambaRefinedParams,
    find_bicluster,
    refined_weights,
    simple_weights,
)
from .solve import BRANCH_AND_BOUND, EXACT, LOCAL_SEARCH, METHODS, SolverConfig, solve

SEED_ENV = "MWEB_SEED"
EXIT_OK, EXIT_INVALID, EXIT_BEST_EFFORT, EXIT_CAPACITY = 0, 1, 2, 3
GEN_KINDS = ("random-weighted", "planted-biclique", "random-binary", "random-clique-graph")


def tool_version() -> str:
    try:
        return version("mweb")
    except PackageNotFoundError:
        return "0+unknown"


class Run:
    """Collects the manifest of one invocation."""

    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.t0 = time.perf_counter()
        self.extra = {}

    def manifest(self) -> dict:
        params = {
            k: v for k, v in sorted(vars(self.args).items())
            if k not in ("func", "no_timing", "out") and v is not None
        }
        params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()}
        m = {
            "command": self.command,
            "parameters": params,
            "seed": getattr(self.args, "seed", None),
            "tool_version": tool_version(),
            "timing": None if self.args.no_timing else round(time.perf_counter() - self.t0, 6),
        }
        m.update(self.extra)
        return m

    def emit(self, payload: dict) -> None:
        payload = dict(payload, manifest=self.manifest())
        text = io.dumps(payload)
        if getattr(self.args, "out", None):
            with open(self.args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def require_seed(args) -> int:
    if args.seed is None:
        env = os.environ.get(SEED_ENV)
        if env is None:
            raise ValidationError(f"--seed is required (or set {SEED_ENV})")
        args.seed = int(env)
    if not 0 <= args.seed < 2**64:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {args.seed}")
    return args.seed


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------- gen

def cmd_gen(args) -> int:
    seed = require_seed(args)
    run = Run(args, "gen")
    if not 0.0 <= args.density <= 1.0:
        raise ValidationError(f"density must lie in [0, 1], got {args.density}")
    rng = np.random.default_rng(seed)
    if args.kind == "random-clique-graph":
        if args.n is None or args.n < 1:
            raise ValidationError("random-clique-graph needs --n >= 1")
        sg = random_simple_graph(args.n, args.density, rng)
        return _write_obj(args, dict(sg.to_dict(), manifest=run.manifest()))
    if args.n1 < 1 or args.n2 < 1:
        raise ValidationError(f"dimensions must be >= 1, got {args.n1}x{args.n2}")
    shape = (args.n1, args.n2)
    if args.kind == "random-binary":
        m = (rng.random(shape) < args.density).astype(int)
        text = io.format_tsv(m, run.manifest())
        return _write_text(args, text)
    wset = sorted(set(_float_list(args.weights)))
    pos = [w for w in wset if w > 0]
    rest = [w for w in wset if w <= 0]
    if not pos or not rest:
        raise ValidationError("--weights needs at least one positive and one non-positive value")
    hi = rng.random(shape) < args.density
    w = np.where(hi, rng.choice(pos, size=shape), rng.choice(rest, size=shape))
    if args.kind == "planted-biclique":
        if not (1 <= args.block_rows <= args.n1 and 1 <= args.block_cols <= args.n2):
            raise ValidationError("planted block must fit inside the graph")
        u1 = sorted(rng.choice(args.n1, size=args.block_rows, replace=False).tolist())
        u2 = sorted(rng.choice(args.n2, size=args.block_cols, replace=False).tolist())
        w[np.ix_(u1, u2)] = max(pos)
        run.extra["planted"] = {"u1": u1, "u2": u2,
                                "weight": biclique_weight(WeightedBipartiteGraph(w), Biclique(u1, u2))}
    g = WeightedBipartiteGraph(w)
    return _write_obj(args, dict(g.to_dict(), manifest=run.manifest()))


def _write_obj(args, obj) -> int:
    return _write_text(args, io.dumps(obj))


def _write_text(args, text) -> int:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- solve

def cmd_solve(args) -> int:
    if args.method != LOCAL_SEARCH and args.seed is None:
        args.seed = 0
    seed = require_seed(args)
    run = Run(args, "solve")
    g = io.read_graph(args.graph)
    cfg = SolverConfig(objective=args.objective, method=args.method, seed=seed,
                       restarts=args.restarts, time_limit=args.time_limit,
                       enumeration_cap=args.cap, threads=args.threads)
    res = solve(g, cfg)
    run.emit(res.to_dict())
    if not res.optimal and args.method == BRANCH_AND_BOUND:
        return EXIT_BEST_EFFORT
    return EXIT_OK


# ---------------------------------------------------------------- reduce

def cmd_clique_to_mweb(args) -> int:
    run = Run(args, "reduce clique-to-mweb")
    sg = SimpleGraph.from_dict(io.load_json(args.graph))
    return _write_obj(args, dict(clique_to_mweb(sg).to_dict(), manifest=run.manifest()))


def cmd_product(args) -> int:
    seed = require_seed(args)
    run = Run(args, "reduce product")
    g = io.read_graph(args.graph)
    params = ProductParams(args.gamma, args.alpha, args.beta, args.copies, seed=seed)
    prod = gamma_product(g, params)
    run.extra["q"] = params.q
    return _write_obj(args, dict(prod.to_dict(), manifest=run.manifest()))


def cmd_problem_p(args) -> int:
    run = Run(args, "reduce problem-p")
    g = io.read_graph(args.graph)
    dup = mweb_to_problem_p(g, args.copies)
    return _write_obj(args, dict(dup.to_dict(), manifest=run.manifest()))


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    instance = None
    needs_seed = args.graph is None or args.kind == "product"
    if needs_seed:
        require_seed(args)
    elif args.seed is None:
        args.seed = 0
    run = Run(args, "verify")
    if args.graph is not None:
        data = io.load_json(args.graph)
        instance = SimpleGraph.from_dict(data) if args.kind == "clique" else WeightedBipartiteGraph.from_dict(data)
    kw = {}
    if args.kind == "product":
        kw["params"] = ProductParams(args.gamma, args.alpha, args.beta, args.copies, seed=args.seed)
    elif args.kind == "problem-p":
        kw["copies"] = tuple(_int_list(args.copies_list))
    report = verify_reduction(args.kind, instance, trials=args.trials, seed=args.seed, **kw)
    run.emit(report.to_dict())
    return EXIT_OK if report.passed else EXIT_INVALID


# ---------------------------------------------------------------- samba

def _samba_graph(args, m):
    if args.model == SIMPLE:
        g, params = simple_weights(m, args.base)
        return g, {"p": params.p, "w_edge": params.w_edge, "w_nonedge": params.w_nonedge}
    if args.params is None:
        raise ValidationError("--model refined needs --params")
    rp = SambaRefinedParams.from_dict(io.load_json(args.params), m.shape)
    return refined_weights(rp, m, args.base), {"p_c": rp.p_c}


def cmd_samba_score(args) -> int:
    run = Run(args, "samba score")
    m = io.read_tsv(args.matrix)
    g, info = _samba_graph(args, m)
    b = io.read_biclique(args.biclique) if args.biclique else Biclique(_int_list(args.u1), _int_list(args.u2))
    score = biclique_weight(g, b)
    run.emit(dict(b.to_dict(), score=score, model=args.model, **info))
    return EXIT_OK


def cmd_samba_find(args) -> int:
    if args.method != LOCAL_SEARCH and args.seed is None:
        args.seed = 0
    seed = require_seed(args)
    run = Run(args, "samba find")
    m = io.read_tsv(args.matrix)
    rp = None
    if args.model == REFINED:
        if args.params is None:
            raise ValidationError("--model refined needs --params")
        rp = SambaRefinedParams.from_dict(io.load_json(args.params), m.shape)
    cfg = SolverConfig(method=args.method, seed=seed, restarts=args.restarts, threads=args.threads)
    b, score = find_bicluster(m, args.model, cfg, rp, args.base)
    run.emit(dict(b.to_dict(), score=score, model=args.model))
    return EXIT_OK


# ---------------------------------------------------------------- mdlh

def cmd_mdlh_solve(args) -> int:
    run = Run(args, "mdlh solve")
    m = io.read_tsv(args.matrix)
    s = solve_mdlh(m)
    run.emit(s.to_dict())
    return EXIT_OK


def cmd_mdlh_verify(args) -> int:
    seed = require_seed(args)
    run = Run(args, "mdlh verify")
    rng = np.random.default_rng(seed)
    trials = []
    for _ in range(args.trials):
        n1 = int(rng.integers(1, args.max_dim + 1))
        n2 = int(rng.integers(1, args.max_dim + 1))
        m = (rng.random((n1, n2)) < rng.random()).astype(int)
        fast, oracle = solve_mdlh(m), brute_force_mdlh(m)
        ok = fast.length == oracle.length and validate_summary(m, fast)
        trials.append({"shape": [n1, n2], "length": fast.length,
                       "oracle_length": oracle.length, "pass": ok})
    passed = all(t["pass"] for t in trials)
    run.emit({"kind": "mdlh", "passed": passed, "trials": trials})
    return EXIT_OK if passed else EXIT_INVALID


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors (exit 1); exit 2 is reserved for best-effort results
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mweb", description=__doc__.splitlines()[0],
                                allow_abbrev=False)
    p.add_argument("--no-timing", action="store_true",
                   help="write null for the manifest timing field (byte-reproducible output)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, func, help_):
        sp = parent.add_parser(name, help=help_, allow_abbrev=False)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="output file (default: stdout)")
        return sp

    def seed_arg(sp):
        sp.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV})")

    g = add(sub, "gen", cmd_gen, "generate a seeded random instance")
    g.add_argument("--kind", choices=GEN_KINDS, required=True)
    g.add_argument("--n1", type=int, default=4)
    g.add_argument("--n2", type=int, default=4)
    g.add_argument("--n", type=int, help="vertex count for random-clique-graph")
    g.add_argument("--weights", default="-1,1",
                   help="comma-separated weight set; write --weights=-1,1 when it starts with '-'")
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--block-rows", type=int, default=2)
    g.add_argument("--block-cols", type=int, default=2)
    seed_arg(g)

    s = add(sub, "solve", cmd_solve, "maximize a biclique objective")
    s.add_argument("--in", dest="graph", required=True)
    s.add_argument("--objective", choices=OBJECTIVES, default=EDGE_WEIGHT)
    s.add_argument("--method", choices=METHODS, default=EXACT)
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--cap", type=int, default=26, help="enumeration cap for exact search")
    s.add_argument("--threads", type=int, default=1)
    seed_arg(s)

    r = sub.add_parser("reduce", help="reductions between problems")
    rsub = r.add_subparsers(dest="reduce_command", required=True)
    c = add(rsub, "clique-to-mweb", cmd_clique_to_mweb, "simple graph -> {-1,0,1} weights")
    c.add_argument("--in", dest="graph", required=True)
    pr = add(rsub, "product", cmd_product, "randomized gamma product")
    pr.add_argument("--in", dest="graph", required=True)
    pr.add_argument("--gamma", type=float, default=0.0)
    pr.add_argument("--alpha", type=float, default=-1.0)
    pr.add_argument("--beta", type=float, default=1.0)
    pr.add_argument("--copies", type=int, default=2)
    seed_arg(pr)
    pp = add(rsub, "problem-p", cmd_problem_p, "block duplication for the node-plus-edge objective")
    pp.add_argument("--in", dest="graph", required=True)
    pp.add_argument("--copies", type=int, help="default (n1+n2)^2")
    _verify_args(add(rsub, "verify", cmd_verify, "check a reduction against brute force"), seed_arg)

    _verify_args(add(sub, "verify", cmd_verify, "check a reduction against brute force"), seed_arg)

    sa = sub.add_parser("samba", help="SAMBA bicluster scoring")
    ssub = sa.add_subparsers(dest="samba_command", required=True)
    for name, func in (("score", cmd_samba_score), ("find", cmd_samba_find)):
        sp = add(ssub, name, func, f"{name} a bicluster")
        sp.add_argument("--in", dest="matrix", required=True, help="0/1 TSV matrix")
        sp.add_argument("--model", choices=(SIMPLE, REFINED), default=SIMPLE)
        sp.add_argument("--params", help="refined-model JSON {p: [...], p_c: x}")
        sp.add_argument("--base", type=float, default=2.0)
        if name == "score":
            sp.add_argument("--biclique", help="biclique JSON")
            sp.add_argument("--u1", default="", help="comma-separated rows")
            sp.add_argument("--u2", default="", help="comma-separated columns")
        else:
            sp.add_argument("--method", choices=METHODS, default=EXACT)
            sp.add_argument("--restarts", type=int, default=8)
            sp.add_argument("--threads", type=int, default=1)
            seed_arg(sp)

    md = sub.add_parser("mdlh", help="MDL summaries with holes")
    msub = md.add_subparsers(dest="mdlh_command", required=True)
    ms = add(msub, "solve", cmd_mdlh_solve, "minimum-length summary")
    ms.add_argument("--in", dest="matrix", required=True)
    mv = add(msub, "verify", cmd_mdlh_verify, "compare against the exhaustive oracle")
    mv.add_argument("--max-dim", type=int, default=6)
    mv.add_argument("--trials", type=int, default=300)
    seed_arg(mv)
    return p


def _verify_args(sp, seed_arg):
    sp.add_argument("--kind", choices=("clique", "product", "problem-p"), required=True)
    sp.add_argument("--graph", help="instance file; random instances when omitted")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--gamma", type=float, default=0.0)
    sp.add_argument("--alpha", type=float, default=-1.0)
    sp.add_argument("--beta", type=float, default=1.0)
    sp.add_argument("--copies", type=int, default=1, help="copies for --kind product")
    sp.add_argument("--copies-list", default="2,3,4", help="copies for --kind problem-p")
    seed_arg(sp)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
