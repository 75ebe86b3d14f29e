"""The metaplectic command-line interface.
"""

from __future__ import annotations
from argparse import ArgumentParser, Namespace
from itertools import combinations
from pathlib import Path
from typing import Any
import json
import sys
import networkx as nx
import numpy as np
import pandas as pd
import sympy
from loguru import logger
from .braid import (
    Closure,
    LinkingMatrix,
    closure_components,
    linking_matrix,
    permutation,
    read_braid,
)
from .dense_rep import (
    Family,
    RMatrixKind,
    check_braid_relations,
    represent_braid,
    unitarity_residual,
)
from .fusion_ring import FusionRing, parse_label
from .group_sim import braid_to_element
from .heisenberg_sim import (
    evolve_tableau,
    heisenberg_images,
    init_pair_tableau,
    measure_monomial,
    parse_monomial,
)
from .ising_link import (
    CouplingMatrix,
    IsingParams,
    amplification,
    approx_bounds,
    compile_link,
    maxcut_recover,
    read_coupling,
    read_graph,
    sign_regime,
    verify_claim,
    z_exact,
    z_partition,
)
from .link_invariants import i_xe_eval, lm_state_sum, seifert_from_braid
from .utils import ScaleError, load_config, set_log_level

SUITES = ("claims", "approx", "recovery", "sign", "braid")


def _settings(args: Namespace) -> dict[str, Any]:
    """Merge the configuration file with command-line overrides and set up logging."""
    settings = load_config(args.config)
    for key in ("threads", "seed", "log_level"):
        val = getattr(args, key, None)
        if val is not None:
            settings[key.replace("_", "-")] = val
    set_log_level(settings["log-level"])
    return settings


def _emit(data: dict) -> None:
    print(json.dumps(data, indent=2, default=str))


def _round(value: float, digits: int) -> float:
    return float(f"{value:.{digits}g}")


def _complex_dict(value: complex, digits: int) -> dict[str, float]:
    return {"re": _round(value.real, digits), "im": _round(value.imag, digits)}


def fusion(args: Namespace) -> None:
    """Fusion rules and category data of SO(m)_2.

    :param args: A Namespace object containing command-line options.
    """
    _settings(args)
    ring = FusionRing(args.m)
    if args.fuse:
        a, b = (parse_label(text) for text in args.fuse)
        _emit({"result": [str(c) for c in ring.fuse(a, b)]})
    elif args.data:
        _emit(ring.category_data(parse_label(args.data)).to_dict())
    elif args.hom:
        if args.target is None:
            raise ValueError("--hom requires --target!")
        labels = [parse_label(text) for text in args.hom]
        _emit({"hom_dim": ring.hom_dim(labels, parse_label(args.target))})
    elif args.sectors is not None:
        dims = ring.sector_dims(args.sectors)
        _emit(
            {
                "n": args.sectors,
                "sectors": [
                    {"left": str(left), "right": str(right), "dim": dim}
                    for (left, right), dim in dims.items()
                ],
            }
        )
    else:
        _emit(
            {
                "m": args.m,
                "rank": ring.rank,
                "labels": [ring.category_data(a).to_dict() for a in ring.labels],
            }
        )


def braid_info(args: Namespace) -> None:
    """Components, permutation and linking matrix of a braid closure.

    :param args: A Namespace object containing command-line options.
    """
    _settings(args)
    braid = read_braid(args.braid_file)
    kind = Closure(args.closure)
    comps = closure_components(braid, kind)
    lk = linking_matrix(braid, kind)
    _emit(
        {
            "strands": braid.strands,
            "length": len(braid),
            "closure": kind.value,
            "components": comps.count,
            "labels": list(comps.labels),
            "orientation": list(comps.orientation),
            "permutation": list(permutation(braid)),
            "linking": lk.to_dict()["linking"],
        }
    )


def _read_linking(path: Path, closure: Closure) -> LinkingMatrix:
    if path.suffix == ".json":
        if not path.is_file():
            raise FileNotFoundError(f"The linking file {path} does not exist!")
        with open(path, "r", encoding="utf-8") as fin:
            return LinkingMatrix.from_dict(json.load(fin))
    return linking_matrix(read_braid(path), closure)


def invariant(args: Namespace) -> None:
    """The state sum E(L) or the Xe invariant of a link.

    :param args: A Namespace object containing command-line options.
    """
    settings = _settings(args)
    digits = settings["digits"]
    limits = settings["limits"]
    if args.kind == "lm":
        lk = _read_linking(Path(args.link_file), Closure(args.closure))
        state = lm_state_sum(
            lk,
            args.m,
            threads=settings["threads"],
            progress=settings["progress"],
            max_components=limits["max-components"],
        )
        _emit(state.to_dict(digits))
        return
    data = seifert_from_braid(read_braid(args.link_file))
    value = i_xe_eval(
        data,
        args.m,
        mode=args.mode,
        threads=settings["threads"],
        progress=settings["progress"],
        max_terms=limits["max-gauss-terms"],
    )
    _emit({"I_Xe": value.to_dict(digits), "seifert": data.to_dict()})


def simulate(args: Namespace) -> None:
    """Run a braid through one of the simulation engines.

    :param args: A Namespace object containing command-line options.
    """
    settings = _settings(args)
    digits = settings["digits"]
    braid = read_braid(args.braid_file)
    if args.engine == "dense":
        family = Family(args.kind)
        kind = RMatrixKind(family, 0 if family == Family.ISING else args.m)
        mat = represent_braid(braid, kind, max_dim=settings["limits"]["max-dense-dim"])
        _emit(
            {
                "engine": "dense",
                "kind": str(kind),
                "dim": mat.shape[0],
                "unitarity_residual": _round(unitarity_residual(mat), digits),
                "trace": _complex_dict(complex(np.trace(mat)), digits),
            }
        )
        return
    if args.engine == "group":
        element = braid_to_element(braid, args.m)
        _emit({"engine": "group", **element.to_dict()})
        return
    data = {"engine": "heisenberg", "images": heisenberg_images(braid, args.m)}
    if not sympy.isprime(args.m):
        # conjugation tracking works for every odd m, tableaus only over F_p
        logger.warning("m = {} is not prime, skipping the stabilizer tableau.", args.m)
        if args.measure:
            logger.warning("Cannot measure {} without a tableau.", args.measure)
        _emit(data)
        return
    tableau = evolve_tableau(init_pair_tableau(braid.strands, args.m), braid)
    data["tableau"] = tableau.to_dict()
    if args.measure:
        target = parse_monomial(args.measure, braid.strands, args.m)
        rng = np.random.default_rng(settings["seed"])
        data["measurement"] = measure_monomial(tableau, target, rng).to_dict()
    _emit(data)


def compile_ising(args: Namespace) -> None:
    """Compile a coupling matrix into a link and check the state-sum identity.

    :param args: A Namespace object containing command-line options.
    """
    settings = _settings(args)
    digits = settings["digits"]
    limits = settings["limits"]
    J = read_coupling(args.coupling_file)
    params = IsingParams(args.m, args.d)
    compiled = compile_link(J, params)
    Z = z_exact(J, params, threads=settings["threads"], max_spins=limits["max-spins"])
    data = {
        "params": params.to_dict(digits),
        **compiled.to_dict(),
        "Z": _round(Z.approx().real, digits),
        "Z_exact": Z.to_dict(),
    }
    if compiled.components <= limits["max-claim-components"]:
        check = verify_claim(
            J,
            params,
            threads=settings["threads"],
            progress=settings["progress"],
            max_components=limits["max-claim-components"],
        )
        data["claim"] = check.to_dict(digits)
    else:
        logger.warning(
            "Skipping the state sum for {} components (limit {}).",
            compiled.components,
            limits["max-claim-components"],
        )
    _emit(data)


def maxcut(args: Namespace) -> None:
    """Recover the max cut statistics of a graph from approximate partition functions.

    :param args: A Namespace object containing command-line options.
    """
    settings = _settings(args)
    graph = read_graph(args.graph_file)
    params = IsingParams(args.m, args.d)
    result = maxcut_recover(
        graph,
        params,
        threads=settings["threads"],
        progress=settings["progress"],
        max_vertices=settings["limits"]["max-cut-vertices"],
    )
    _emit({"params": params.to_dict(settings["digits"]), **result.to_dict(settings["digits"])})


def small_graphs(max_n: int):
    """Yield every labelled simple graph on 1..max_n vertices."""
    for n in range(1, max_n + 1):
        pairs = list(combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            graph = nx.empty_graph(n)
            graph.add_edges_from(p for k, p in enumerate(pairs) if (mask >> k) & 1)
            yield graph


def random_coupling(
    rng: np.random.Generator, n: int, values: tuple[int, ...]
) -> CouplingMatrix:
    """A random symmetric coupling matrix with entries drawn from values."""
    J = np.zeros((n, n), dtype=np.int64)
    for i, j in combinations(range(n), 2):
        J[i, j] = J[j, i] = rng.choice(values)
    return CouplingMatrix.from_array(J)


def _check_claims(trials: int, rng: np.random.Generator, settings: dict) -> list[dict]:
    rows = []
    for trial in range(trials):
        n = int(rng.integers(1, 4))
        m = int(rng.choice([3, 5]))
        d = int(rng.integers(1, m))
        J = random_coupling(rng, n, (-2, 0, 2, 4))
        params = IsingParams(m, d)
        compiled = compile_link(J, params)
        plat = linking_matrix(compiled.braid, Closure.PLAT)
        rows.append(
            {
                "suite": "claims",
                "case": f"plat linking #{trial} (N={n}, m={m}, d={d})",
                "value": float(plat != compiled.lk),
                "tolerance": 0.0,
            }
        )
        check = verify_claim(J, params, threads=settings["threads"])
        rows.append(
            {
                "suite": "claims",
                "case": f"state sum #{trial} (N={n}, m={m}, d={d}, c={compiled.components})",
                "value": check.residual,
                "tolerance": 1e-9,
            }
        )
    return rows


def _check_approx(points: list[tuple[int, int]]) -> list[dict]:
    rows = []
    for m, d in points:
        y = IsingParams(m, d).y
        worst = 0
        for graph in small_graphs(4):
            bounds = approx_bounds(graph, y, amplification(graph.number_of_nodes(), y))
            worst += not bounds.holds
        rows.append({"suite": "approx", "case": f"graphs <= 4 (m={m}, d={d})", "value": float(worst), "tolerance": 0.0})
    return rows


def _check_recovery(points: list[tuple[int, int]]) -> list[dict]:
    rows = []
    for m, d in points:
        params = IsingParams(m, d)
        failures = sum(not maxcut_recover(graph, params).ok for graph in small_graphs(4))
        rows.append({"suite": "recovery", "case": f"graphs <= 4 (m={m}, d={d})", "value": float(failures), "tolerance": 0.0})
    triangle = maxcut_recover(nx.complete_graph(3), IsingParams(3, 1))
    wrong = triangle.recovered[0].M != 2 or triangle.recovered[0].Ncuts != 6
    rows.append({"suite": "recovery", "case": "triangle (2, 6)", "value": float(wrong), "tolerance": 0.0})
    return rows


def _check_sign(trials: int, rng: np.random.Generator, settings: dict) -> list[dict]:
    params = IsingParams(3, 1)
    mismatches = 0
    for _ in range(trials):
        n = int(rng.integers(1, 11))
        J = random_coupling(rng, n, (0, 1))
        exact = sign_regime(J, params, threads=settings["threads"])
        Z = z_partition(J, params.y, threads=settings["threads"])
        if exact.sign == 0:
            mismatches += abs(Z) > 1e-12
        else:
            mismatches += int(np.sign(Z)) != exact.sign
    return [{"suite": "sign", "case": f"{trials} random 0/1 couplings (m=3, d=1)", "value": float(mismatches), "tolerance": 0.0}]


def _check_braid() -> list[dict]:
    kinds = [
        (RMatrixKind.gaussian(3), 3),
        (RMatrixKind.gaussian(5), 3),
        (RMatrixKind.gaussian(7), 3),
        (RMatrixKind.potts(3), 3),
        (RMatrixKind.potts(5), 3),
        (RMatrixKind.y1(3), 4),
        (RMatrixKind.y1(5), 4),
        (RMatrixKind.ising(), 4),
    ]
    rows = []
    for kind, n in kinds:
        report = check_braid_relations(kind, n)
        value = max(report.yang_baxter_residual, report.far_commutation_residual)
        rows.append({"suite": "braid", "case": f"{kind} on {n} strands", "value": value, "tolerance": 1e-9})
    return rows


def verify(args: Namespace) -> None:
    """Run acceptance checks and print them as a table; exit 1 on failure.

    :param args: A Namespace object containing command-line options.
    """
    settings = _settings(args)
    trials = args.trials or settings["verify"]["trials"]
    rng = np.random.default_rng(settings["seed"])
    suites = SUITES if args.suite == "all" else (args.suite,)
    points = [(3, 1), (5, 1), (5, 2)]
    rows = []
    for suite in suites:
        logger.info("Running the {} checks ...", suite)
        if suite == "claims":
            rows.extend(_check_claims(trials, rng, settings))
        elif suite == "approx":
            rows.extend(_check_approx(points))
        elif suite == "recovery":
            rows.extend(_check_recovery(points))
        elif suite == "sign":
            rows.extend(_check_sign(trials, rng, settings))
        else:
            rows.extend(_check_braid())
    frame = pd.DataFrame(rows, columns=["suite", "case", "value", "tolerance"])
    frame["passed"] = frame["value"] <= frame["tolerance"]
    logger.info("\n{}", frame.to_string())
    failed = int((~frame["passed"]).sum())
    frame["value"] = frame["value"].map(lambda x: _round(x, settings["digits"]))
    _emit({"checks": frame.to_dict(orient="records"), "failed": failed})
    if failed:
        sys.exit(1)


def parse_args(args=None, namespace=None) -> Namespace:
    """Parse command-line arguments.

    :param args: The arguments to parse.
        If None, the arguments from command-line are parsed.
    :param namespace: An inital Namespace object.
    :return: A namespace object containing parsed options.
    """
    parser = ArgumentParser(description="Metaplectic anyons: fusion, braids, link invariants and Ising reductions.")
    subparsers = parser.add_subparsers(help="Sub commands.", dest="command", required=True)
    _subparser_fusion(subparsers)
    _subparser_braid_info(subparsers)
    _subparser_invariant(subparsers)
    _subparser_simulate(subparsers)
    _subparser_compile_ising(subparsers)
    _subparser_maxcut(subparsers)
    _subparser_verify(subparsers)
    return parser.parse_args(args=args, namespace=namespace)


def _option_common(subparser) -> None:
    subparser.add_argument(
        "--config",
        dest="config",
        type=Path,
        default=None,
        help="path of a YAML file overriding the bundled defaults.",
    )
    subparser.add_argument(
        "--threads",
        dest="threads",
        type=int,
        default=None,
        help="number of worker threads for brute-force sums.",
    )
    subparser.add_argument(
        "--seed",
        dest="seed",
        type=int,
        default=None,
        help="seed of the random generator (measurements and fuzzing).",
    )
    subparser.add_argument(
        "--log-level",
        dest="log_level",
        default=None,
        help="logging level of loguru (WARNING by default).",
    )


def _option_m(subparser, default: int | None = None) -> None:
    subparser.add_argument(
        "-m",
        "--m",
        dest="m",
        type=int,
        default=default,
        required=default is None,
        help="the odd integer m of SO(m)_2.",
    )


def _subparser_fusion(subparsers):
    subparser_fusion = subparsers.add_parser("fusion", help="fusion rules and category data.")
    _option_m(subparser_fusion)
    mutex_group = subparser_fusion.add_mutually_exclusive_group()
    mutex_group.add_argument("--fuse", nargs=2, dest="fuse", metavar="LABEL", help="fuse two simple objects.")
    mutex_group.add_argument("--data", dest="data", metavar="LABEL", help="category data of a simple object.")
    mutex_group.add_argument(
        "--hom", nargs="+", dest="hom", metavar="LABEL", help="dimension of Hom(a_1 ⊗ ... ⊗ a_k, target)."
    )
    mutex_group.add_argument(
        "--sectors", dest="sectors", type=int, default=None, help="sector dimensions with n Xe anyons."
    )
    subparser_fusion.add_argument("--target", dest="target", default=None, help="the total charge for --hom.")
    _option_common(subparser_fusion)
    subparser_fusion.set_defaults(func=fusion)


def _option_closure(subparser, default: str) -> None:
    subparser.add_argument(
        "--closure",
        dest="closure",
        choices=[c.value for c in Closure],
        default=default,
        help=f"how to close the braid ({default} by default).",
    )


def _subparser_braid_info(subparsers):
    subparser_braid = subparsers.add_parser("braid-info", help="topology of a braid closure.")
    subparser_braid.add_argument("braid_file", type=Path, help="path of a braid file.")
    _option_closure(subparser_braid, "trace")
    _option_common(subparser_braid)
    subparser_braid.set_defaults(func=braid_info)


def _subparser_invariant(subparsers):
    subparser_invariant = subparsers.add_parser("invariant", help="link invariants E(L) and I_Xe.")
    subparser_invariant.add_argument(
        "link_file", type=Path, help="path of a braid file or of a linking-matrix JSON file."
    )
    subparser_invariant.add_argument(
        "--kind", dest="kind", choices=["lm", "xe"], default="lm", help="the invariant to compute."
    )
    _option_m(subparser_invariant)
    subparser_invariant.add_argument(
        "--mode", dest="mode", choices=["fast", "brute"], default="fast", help="evaluation mode of I_Xe."
    )
    _option_closure(subparser_invariant, "trace")
    _option_common(subparser_invariant)
    subparser_invariant.set_defaults(func=invariant)


def _subparser_simulate(subparsers):
    subparser_simulate = subparsers.add_parser("simulate", help="simulate a braid with one of the engines.")
    subparser_simulate.add_argument("braid_file", type=Path, help="path of a braid file.")
    subparser_simulate.add_argument(
        "--engine",
        dest="engine",
        choices=["dense", "heisenberg", "group"],
        default="dense",
        help="the simulation engine.",
    )
    subparser_simulate.add_argument(
        "--kind",
        dest="kind",
        choices=[f.value for f in Family],
        default="gaussian",
        help="the R-matrix family of the dense engine.",
    )
    subparser_simulate.add_argument(
        "--measure", dest="measure", default="", help='a monomial such as "X1 Z2^-1" to measure (heisenberg engine).'
    )
    _option_m(subparser_simulate, 3)
    _option_common(subparser_simulate)
    subparser_simulate.set_defaults(func=simulate)


def _option_point(subparser) -> None:
    _option_m(subparser, 3)
    subparser.add_argument("-d", "--d", dest="d", type=int, default=1, help="the power d in y = cos(4πd/m).")


def _subparser_compile_ising(subparsers):
    subparser_compile = subparsers.add_parser("compile-ising", help="compile Ising couplings into a link.")
    subparser_compile.add_argument("coupling_file", type=Path, help='path of a JSON file {"N": n, "J": [[...]]}.')
    _option_point(subparser_compile)
    _option_common(subparser_compile)
    subparser_compile.set_defaults(func=compile_ising)


def _subparser_maxcut(subparsers):
    subparser_maxcut = subparsers.add_parser("maxcut", help="max-cut recovery from approximate Z(J, y).")
    subparser_maxcut.add_argument("graph_file", type=Path, help="path of a graph JSON file.")
    _option_point(subparser_maxcut)
    _option_common(subparser_maxcut)
    subparser_maxcut.set_defaults(func=maxcut)


def _subparser_verify(subparsers):
    subparser_verify = subparsers.add_parser("verify", help="run acceptance checks.")
    subparser_verify.add_argument(
        "--suite", dest="suite", choices=SUITES + ("all",), default="claims", help="the checks to run."
    )
    subparser_verify.add_argument(
        "--trials", dest="trials", type=int, default=None, help="number of random instances per fuzzed suite."
    )
    _option_common(subparser_verify)
    subparser_verify.set_defaults(func=verify)


def main(args: Namespace | None = None):
    """The main function for script usage."""
    if args is None:
        args = parse_args()
    try:
        args.func(args)
    except ScaleError as err:
        logger.error("{}", err)
        sys.exit(3)
    except (ValueError, FileNotFoundError) as err:
        logger.error("{}", err)
        sys.exit(2)
    except RuntimeError as err:
        logger.error("Internal consistency check failed: {}", err)
        sys.exit(1)


if __name__ == "__main__":
    main()
