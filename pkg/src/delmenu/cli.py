"""Command-line interface: evaluate, solve, generate, reduce, sweep, verify.

Exit codes: 0 success, 2 input/parse error, 3 semantic error (bad menu index,
infeasible parameters, caps), 4 a proven guarantee failed to hold (which
means an implementation bug, not an unlucky instance).
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any

from .evaluate import (
    EvalReport,
    decompose,
    derandomize_interference,
    eval_bruteforce_product,
    evaluate,
)
from .families import gen_log_family, gen_outside_family, gen_random, gen_three_approx
from .model import (
    CorrelatedInstance,
    DelegationError,
    IndependentInstance,
    Instance,
    InvalidInstanceError,
    Menu,
    candidates,
    full_menu,
    joint_support_size,
    threshold_menu,
    validate_menu,
)
from .reductions import (
    PartitionInstance,
    minimal_valid_m,
    min_vertex_cover,
    parse_graph,
    reduce_integer_partition,
    reduce_vertex_cover,
)
from .serialize import (
    ParseError,
    dump_instance,
    load_instance,
    xnum_to_obj,
)
from .solve import (
    BoundReport,
    SolveResult,
    bound_report,
    brute_force_opt,
    solve,
    threshold_menus,
)
from .xnum import XNum

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SEMANTIC = 3
EXIT_VIOLATION = 4

_XNUM_RE = re.compile(
    r"^(?P<std>[+-]?[0-9]+(?:/[0-9]+)?)?(?P<inf>[+-]?[0-9]+(?:/[0-9]+)?)i$"
)


def parse_xnum_literal(text: str) -> XNum:
    """Parse '24/7', '-3', '4-1i', '3/2+2i', '1i' into an exact number."""
    text = text.strip().replace(" ", "")
    if not text.endswith("i"):
        try:
            return XNum(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInstanceError(f"invalid number literal {text!r}") from exc
    match = _XNUM_RE.match(text)
    if not match:
        raise InvalidInstanceError(f"invalid number literal {text!r}")
    std = Fraction(match.group("std")) if match.group("std") else Fraction(0)
    return XNum(std, Fraction(match.group("inf")))


def parse_menu_spec(instance: Instance, spec: str) -> Menu:
    spec = spec.strip()
    if spec == "all":
        return full_menu(instance)
    if spec == "empty":
        return validate_menu(instance, frozenset())
    if spec.startswith("threshold:"):
        t = parse_xnum_literal(spec[len("threshold:") :])
        return validate_menu(instance, threshold_menu(instance, t))
    try:
        indices = frozenset(int(part) for part in spec.split(","))
    except ValueError as exc:
        raise InvalidInstanceError(f"invalid menu spec {spec!r}") from exc
    return validate_menu(instance, indices)


def decimal_str(x: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def _menu_list(menu: Menu) -> list[int]:
    return sorted(menu)


def _report_obj(instance: Instance, menu: Menu, report: EvalReport) -> dict[str, Any]:
    order = candidates(instance, menu)
    return {
        "menu": _menu_list(menu),
        "f": xnum_to_obj(report.f),
        "contrib": {str(i): xnum_to_obj(report.contrib[i]) for i in order},
        "freq": {str(i): str(report.freq[i]) for i in order},
        "labels": {str(i): instance.label_of(i) for i in order},
    }


def _solve_obj(instance: Instance, result: SolveResult, bounds: BoundReport) -> dict[str, Any]:
    return {
        "opt_menu": _menu_list(result.opt_menu),
        "opt_value": xnum_to_obj(result.opt_value),
        "best_threshold": (
            xnum_to_obj(result.best_threshold) if result.best_threshold is not None else "empty"
        ),
        "best_threshold_menu": _menu_list(result.best_threshold_menu),
        "best_threshold_value": xnum_to_obj(result.best_threshold_value),
        "ratio": str(result.ratio) if result.ratio is not None else None,
        "ratio_decimal": decimal_str(result.ratio) if result.ratio is not None else None,
        "bounds": {
            "rho": str(bounds.rho) if bounds.rho is not None else None,
            "p_min": str(bounds.p_min),
            "bound_3": bounds.bound_3,
            "bound_n": bounds.bound_n,
            "bound_log": bounds.bound_log,
            "vacuous": bounds.vacuous,
        },
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    menu = parse_menu_spec(instance, args.menu)
    report = evaluate(instance, menu)
    obj = _report_obj(instance, menu, report)
    if args.format == "text":
        print(f"menu: {obj['menu']}")
        print(f"f = {report.f}")
        for i in candidates(instance, menu):
            print(
                f"  {instance.label_of(i):>10}  contrib={report.contrib[i]}  freq={report.freq[i]}"
            )
    else:
        print(json.dumps(obj, indent=2))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    if args.format == "csv":
        row = _instance_row(args.instance, instance, args.cap_n)
        print(",".join(SWEEP_COLUMNS))
        print(",".join(row[c] for c in SWEEP_COLUMNS))
        return EXIT_OK
    result = solve(instance, cap_n=args.cap_n)
    bounds = bound_report(instance, result)
    print(json.dumps(_solve_obj(instance, result, bounds), indent=2))
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    if args.family == "log":
        instance = gen_log_family(args.k)
    elif args.family == "three-approx":
        instance = gen_three_approx(Fraction(args.eps))
    elif args.family == "outside":
        eps = Fraction(args.eps) if args.eps is not None else None
        instance = gen_outside_family(args.n, eps, args.alt)
    else:  # random
        instance = gen_random(
            kind=args.kind,
            n=args.n,
            support_size=args.support_size,
            seed=args.seed,
            value_range=(args.value_min, args.value_max),
            bias_range=(args.bias_min, args.bias_max),
            outside=args.outside,
        )
    dump_instance(instance, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    if args.problem == "vertex-cover":
        with open(args.input, "r", encoding="utf-8") as fh:
            graph = parse_graph(fh.read(), vertices=args.vertices)
        instance = reduce_vertex_cover(graph)
        dump_instance(instance, args.out)
        n, m = graph.vertices, len(graph.edges)
        info: dict[str, Any] = {"actions": instance.n, "profiles": len(instance.profiles)}
        if n <= args.cap_n:
            cover = min_vertex_cover(graph, cap_n=args.cap_n)
            info["min_vertex_cover"] = cover
            info["predicted_opt"] = str(Fraction(5 * m + 3 * n - cover, m + n))
        print(json.dumps(info, indent=2))
        return EXIT_OK
    with open(args.input, "r", encoding="utf-8") as fh:
        values = [int(tok) for tok in fh.read().split()]
    part = PartitionInstance(tuple(values))
    M = args.big_m if args.big_m is not None else minimal_valid_m(part)
    instance, threshold = reduce_integer_partition(part, M)
    dump_instance(instance, args.out)
    print(
        json.dumps(
            {"actions": instance.n, "M": M, "decision_threshold": str(threshold)}, indent=2
        )
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = [
    "instance_id",
    "n",
    "kind",
    "opt_std",
    "best_threshold_std",
    "ratio",
    "ratio_decimal",
    "rho",
    "rho_decimal",
    "p_min",
    "bound_3",
    "bound_n",
    "bound_log",
    "runtime_ms",
    "status",
]


def _ensemble_jobs(spec: Any) -> list[dict[str, Any]]:
    if isinstance(spec, dict) and "ensembles" in spec:
        blocks = spec["ensembles"]
    elif isinstance(spec, list):
        blocks = spec
    elif isinstance(spec, dict):
        blocks = [spec]
    else:
        raise ParseError("ensemble spec: expected an object or list")
    jobs = []
    for b, block in enumerate(blocks):
        if not isinstance(block, dict) or "generator" not in block:
            raise ParseError(f"ensemble block {b}: expected an object with 'generator'")
        gen = block["generator"]
        if gen == "random":
            count = int(block.get("count", 1))
            seed0 = int(block.get("seed0", 0))
            for j in range(count):
                jobs.append(
                    {
                        "id": f"random-{block.get('kind', 'independent')}-s{seed0 + j}",
                        "generator": "random",
                        "kind": block.get("kind", "independent"),
                        "n": int(block.get("n", 3)),
                        "support_size": int(block.get("support_size", 2)),
                        "seed": seed0 + j,
                        "outside": block.get("outside", "none"),
                        "value_range": tuple(block.get("value_range", (0, 8))),
                        "bias_range": tuple(block.get("bias_range", (-4, 4))),
                    }
                )
        elif gen == "log":
            jobs.append({"id": f"log-k{block['k']}", "generator": "log", "k": int(block["k"])})
        elif gen == "three_approx":
            jobs.append(
                {
                    "id": f"three-approx-{block.get('eps', '1/1000')}",
                    "generator": "three_approx",
                    "eps": str(block.get("eps", "1/1000")),
                }
            )
        elif gen == "outside":
            jobs.append(
                {"id": f"outside-n{block['n']}", "generator": "outside", "n": int(block["n"])}
            )
        else:
            raise ParseError(f"ensemble block {b}: unknown generator {gen!r}")
    return jobs


def _build_job_instance(job: dict[str, Any]) -> Instance:
    if job["generator"] == "random":
        return gen_random(
            kind=job["kind"],
            n=job["n"],
            support_size=job["support_size"],
            seed=job["seed"],
            value_range=tuple(job["value_range"]),
            bias_range=tuple(job["bias_range"]),
            outside=job["outside"],
        )
    if job["generator"] == "log":
        return gen_log_family(job["k"])
    if job["generator"] == "three_approx":
        return gen_three_approx(Fraction(job["eps"]))
    return gen_outside_family(job["n"])


def _instance_row(instance_id: str, instance: Instance, cap_n: int) -> dict[str, str]:
    row = {c: "" for c in SWEEP_COLUMNS}
    row["instance_id"] = instance_id
    start = time.perf_counter()
    row["n"] = str(instance.n)
    row["kind"] = "correlated" if isinstance(instance, CorrelatedInstance) else "independent"
    result = solve(instance, cap_n=cap_n)
    bounds = bound_report(instance, result)
    row["opt_std"] = str(result.opt_value.std)
    row["best_threshold_std"] = str(result.best_threshold_value.std)
    if result.ratio is not None:
        row["ratio"] = str(result.ratio)
        row["ratio_decimal"] = decimal_str(result.ratio)
    if bounds.rho is not None:
        row["rho"] = str(bounds.rho)
        row["rho_decimal"] = decimal_str(bounds.rho)
    row["p_min"] = str(bounds.p_min)
    row["bound_3"] = str(bounds.bound_3).lower()
    row["bound_n"] = str(bounds.bound_n).lower()
    row["bound_log"] = str(bounds.bound_log).lower()
    row["runtime_ms"] = str(int((time.perf_counter() - start) * 1000))
    row["status"] = "ok"
    return row


def _sweep_worker(payload: tuple[dict[str, Any], int]) -> dict[str, str]:
    job, cap_n = payload
    start = time.perf_counter()
    try:
        instance = _build_job_instance(job)
        return _instance_row(job["id"], instance, cap_n)
    except DelegationError as exc:
        row = {c: "" for c in SWEEP_COLUMNS}
        row["instance_id"] = job["id"]
        row["runtime_ms"] = str(int((time.perf_counter() - start) * 1000))
        row["status"] = f"skipped: {exc}"
        return row


def cmd_sweep(args: argparse.Namespace) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"ensemble spec: invalid JSON: {exc.msg}") from exc
    jobs = _ensemble_jobs(spec)
    payloads = [(job, args.cap_n) for job in jobs]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_worker, payloads))
    else:
        rows = [_sweep_worker(p) for p in payloads]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    violations = [
        row["instance_id"]
        for row in rows
        if row["status"] == "ok"
        and "false" in (row["bound_3"], row["bound_n"], row["bound_log"])
    ]
    print(f"wrote {args.out} ({len(rows)} rows)")
    if violations:
        print(f"BOUND VIOLATIONS: {', '.join(violations)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# Guarantee-check suite
# ---------------------------------------------------------------------------


def _sample_menus(instance: Instance, count: int, seed: int) -> list[Menu]:
    rng = random.Random(seed)
    menus = [full_menu(instance)]
    while len(menus) < count:
        menu = frozenset(i for i in range(1, instance.n + 1) if rng.random() < 0.5)
        if not menu and not instance.has_outside:
            continue
        menus.append(menu)
    return menus


def run_verify(instance: Instance, menus: int = 5, seed: int = 0, cap: int = 10**6) -> list[str]:
    """Run the guarantee-check suite; returns a list of violation descriptions."""
    violations: list[str] = []
    sampled = _sample_menus(instance, menus, seed)
    independent = isinstance(instance, IndependentInstance)

    for menu in sampled:
        report = evaluate(instance, menu)
        dec = decompose(instance, menu)
        if dec.sur + dec.bdif != report.f:
            violations.append(f"decomposition identity failed on menu {sorted(menu)}")
        if independent and joint_support_size(instance, menu) <= cap:
            brute = eval_bruteforce_product(instance, menu, cap=cap)
            if brute.f != report.f or brute.freq != report.freq:
                violations.append(f"dp/oracle mismatch on menu {sorted(menu)}")
            expected_bias = sum(
                (instance.bias_of(i) * p for i, p in brute.freq.items()), start=XNum(0)
            )
            if dec.bdif != dec.u_low - expected_bias:
                violations.append(f"bias-difference mismatch on menu {sorted(menu)}")
        sur_menu = threshold_menu(instance, dec.u_low)
        if evaluate(instance, sur_menu).f < dec.sur:
            violations.append(f"threshold-dominance failed on menu {sorted(menu)}")
        for i in candidates(instance, menu):
            t_menu = threshold_menu(instance, instance.bias_of(i))
            if not t_menu and not instance.has_outside:
                continue
            if evaluate(instance, t_menu).f < report.contrib[i]:
                violations.append(
                    f"single-action bound failed on menu {sorted(menu)}, action {i}"
                )

    if independent:
        opt_menu, _ = brute_force_opt(instance)
        for t, _menu in threshold_menus(instance):
            if t is None:
                continue
            _, certified = derandomize_interference(instance, opt_menu, t, cap=cap)
            if not certified:
                violations.append(f"derandomization certificate failed at t={t}")
    return violations


def cmd_verify(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    violations = run_verify(instance, menus=args.menus, seed=args.seed, cap=args.cap_profiles)
    checks = [
        "decomposition identity",
        "dp/oracle equivalence",
        "threshold dominance",
        "single-action bound",
        "derandomization certificates",
    ]
    if violations:
        for v in violations:
            print(f"VIOLATION: {v}")
        return EXIT_VIOLATION
    for c in checks:
        print(f"ok: {c}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delmenu",
        description="Exact evaluation and optimization of delegated-choice menus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a menu on an instance file")
    p_eval.add_argument("instance")
    p_eval.add_argument(
        "--menu",
        required=True,
        help="comma-separated indices, 'all', 'empty', or 'threshold:<t>'",
    )
    p_eval.add_argument("--format", choices=["json", "text"], default="json")
    p_eval.set_defaults(func=cmd_eval)

    p_solve = sub.add_parser("solve", help="optimal menu, best threshold, bound report")
    p_solve.add_argument("instance")
    p_solve.add_argument("--cap-n", type=int, default=20)
    p_solve.add_argument("--format", choices=["json", "csv"], default="json")
    p_solve.set_defaults(func=cmd_solve)

    p_gen = sub.add_parser("generate", help="write a family instance to a file")
    gen_sub = p_gen.add_subparsers(dest="family", required=True)
    g_log = gen_sub.add_parser("log", help="correlated log-factor family")
    g_log.add_argument("--k", type=int, required=True)
    g_three = gen_sub.add_parser("three-approx", help="five-action threshold-gap family")
    g_three.add_argument("--eps", default="1/1000")
    g_out = gen_sub.add_parser("outside", help="random-outside-option family")
    g_out.add_argument("--n", type=int, required=True)
    g_out.add_argument("--eps", default=None)
    g_out.add_argument("--alt", action="store_true", help="nonzero low realizations")
    g_rand = gen_sub.add_parser("random", help="seeded random instance")
    g_rand.add_argument("--kind", choices=["independent", "correlated"], default="independent")
    g_rand.add_argument("--n", type=int, default=3)
    g_rand.add_argument("--support-size", type=int, default=2)
    g_rand.add_argument("--seed", type=int, required=True)
    g_rand.add_argument("--outside", choices=["none", "fixed", "random"], default="none")
    g_rand.add_argument("--value-min", type=int, default=0)
    g_rand.add_argument("--value-max", type=int, default=8)
    g_rand.add_argument("--bias-min", type=int, default=-4)
    g_rand.add_argument("--bias-max", type=int, default=4)
    for g in (g_log, g_three, g_out, g_rand):
        g.add_argument("-o", "--out", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_red = sub.add_parser("reduce", help="build a hardness-reduction instance")
    red_sub = p_red.add_subparsers(dest="problem", required=True)
    r_vc = red_sub.add_parser("vertex-cover", help="from an edge-list file")
    r_vc.add_argument("input")
    r_vc.add_argument("--vertices", type=int, default=None)
    r_vc.add_argument("--cap-n", type=int, default=20)
    r_part = red_sub.add_parser("partition", help="from a whitespace-separated integer file")
    r_part.add_argument("input")
    r_part.add_argument("--M", dest="big_m", type=int, default=None)
    for r in (r_vc, r_part):
        r.add_argument("-o", "--out", required=True)
    p_red.set_defaults(func=cmd_reduce)

    p_sweep = sub.add_parser("sweep", help="run an ensemble and write a CSV report")
    p_sweep.add_argument("spec", help="JSON ensemble spec")
    p_sweep.add_argument("-o", "--out", required=True)
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--cap-n", type=int, default=20)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the guarantee-check suite on an instance")
    p_verify.add_argument("instance")
    p_verify.add_argument("--menus", type=int, default=5)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--cap-profiles", type=int, default=10**6)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DelegationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
