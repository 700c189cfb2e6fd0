#!/usr/bin/env python3
"""qo-inclusion — command-line front-end.

Decides L(A1) ⊆ L(A2) for automata, L(G) ⊆ L(A) for grammars and
L(A) ⊆ T(q:n) for one-counter nets, and prints the verdict, an optional
counterexample and iteration statistics as text or JSON.
"""

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass

from automata import Nfa, format_word, load_nfa, parse_word, with_alphabet
from cfg_inclusion import CFG_ORDERS, cfginc_antichain, cfginc_word
from grammars import cyk_member, load_cfg, to_cnf
from ocn import fainc_ocn, load_ocn, parse_config, trace_member
from oracle import oracle_bounded, oracle_nfa_inclusion
from regular_inclusion import (
    fainc_antichain,
    fainc_antichain_dual,
    fainc_antichain_forward,
    fainc_gfp,
    fainc_word,
)
from regular_orders import LEFT_ORDERS, RIGHT_ORDERS

logger = logging.getLogger("QoInclusion")

EXIT_INCLUDED = 0
EXIT_NOT_INCLUDED = 1
EXIT_ERROR = 2

# Word length searched by the bounded oracle for grammar and net inputs,
# where no exact reference decider exists.
ORACLE_MAX_LEN = 8

# --- Settings ---

# Optional per-user defaults; command-line flags always take precedence.
SETTINGS_FILE = os.path.expanduser("~/.qo-inclusion.json")

SETTINGS_KEYS = [
    "nfa_algo",
    "cfg_algo",
    "nfa_order",
    "cfg_order",
    "prune",
    "format",
    "max_iterations",
]

DEFAULT_SETTINGS = {
    "nfa_algo": "antichain",
    "cfg_algo": "antichain",
    "nfa_order": "state",
    "cfg_order": "ctx",
    "prune": True,
    "format": "text",
    "max_iterations": None,
}

OUTPUT_FORMATS = ("text", "json")


def _load_settings_file(path):
    """Read and parse a single settings file, returning a filtered dict."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            return {}
        return {k: v for k, v in data.items() if k in SETTINGS_KEYS}
    except (FileNotFoundError, json.JSONDecodeError, IOError, OSError):
        return {}


def _valid_setting(key, value):
    choices = {
        "nfa_algo": NFA_ALGORITHMS,
        "cfg_algo": CFG_ALGORITHMS,
        "nfa_order": LEFT_ORDERS,
        "cfg_order": CFG_ORDERS,
        "format": OUTPUT_FORMATS,
    }
    if key in choices:
        return value in choices[key]
    if key == "prune":
        return isinstance(value, bool)
    if key == "max_iterations":
        return value is None or (
            isinstance(value, int) and not isinstance(value, bool) and value > 0
        )
    return False


def load_settings(path=None):
    """Defaults overlaid with the settings file at *path* (or ``SETTINGS_FILE``).

    Values that do not fit their key are ignored with a warning.
    """
    settings = dict(DEFAULT_SETTINGS)
    for key, value in _load_settings_file(path or SETTINGS_FILE).items():
        if _valid_setting(key, value):
            settings[key] = value
        else:
            logger.warning("Ignoring invalid setting %s=%r", key, value)
    return settings


# --- Run reports ---


@dataclass
class RunReport:
    verdict: bool
    witness: tuple
    algorithm: str
    order: str
    iterations: int
    max_frontier: int
    elapsed: float

    def to_dict(self):
        data = asdict(self)
        data["witness"] = None if self.witness is None else format_word(self.witness)
        return data


def _describe(vector):
    """Compact rendering of a Kleene iterate for ``--trace``."""
    parts = []
    for component in vector:
        if isinstance(component, Nfa):
            parts.append(f"<{len(component)} states>")
            continue
        shown = []
        for element in component:
            word = element if not element or isinstance(element[0], str) else element[1]
            shown.append(format_word(word) or "ε")
        parts.append("{" + ",".join(shown) + "}")
    return "⟨" + ", ".join(parts) + "⟩"


def _observer(options):
    if not options["trace"]:
        return None
    return lambda vector: logger.info("iterate: %s", _describe(vector))


def run_algorithm(name, order, handler, left, right, options):
    """Time one decision run and wrap its verdict in a :class:`RunReport`."""
    started = time.perf_counter()
    verdict = handler(left, right, options)
    elapsed = time.perf_counter() - started
    logger.debug("%s finished in %.4fs: %s", name, elapsed, verdict.included)
    return RunReport(
        verdict=verdict.included,
        witness=verdict.witness,
        algorithm=name,
        order=order,
        iterations=verdict.stats.iterations,
        max_frontier=verdict.stats.max_frontier,
        elapsed=elapsed,
    )


# --- Algorithm handlers ---
# Each handler takes (left, right, options) and returns a Verdict.


def run_nfa_word(a1, a2, options):
    # Orders over A2 must read A1's symbols too; foreign ones lead nowhere.
    qo = LEFT_ORDERS[options["order"]](with_alphabet(a2, a1.alphabet))
    return fainc_word(
        a1, a2.member, qo, options["prune"], options["max_iterations"], _observer(options)
    )


def run_nfa_word_right(a1, a2, options):
    qo = RIGHT_ORDERS[options["order"]](with_alphabet(a2, a1.alphabet))
    return fainc_word(
        a1, a2.member, qo, options["prune"], options["max_iterations"], _observer(options)
    )


def run_nfa_antichain(a1, a2, options):
    return fainc_antichain(a1, a2, options["max_iterations"], _observer(options))


def run_nfa_antichain_dual(a1, a2, options):
    return fainc_antichain_dual(a1, a2, options["max_iterations"], _observer(options))


def run_nfa_antichain_forward(a1, a2, options):
    return fainc_antichain_forward(a1, a2, options["max_iterations"], _observer(options))


def run_nfa_gfp(a1, a2, options):
    return fainc_gfp(a1, a2, options["max_iterations"], _observer(options))


def run_cfg_word(grammar, nfa, options):
    qo = CFG_ORDERS[options["order"]](nfa)
    return cfginc_word(
        grammar, nfa.member, qo, options["prune"], options["max_iterations"], _observer(options)
    )


def run_cfg_antichain(grammar, nfa, options):
    return cfginc_antichain(grammar, nfa, options["max_iterations"], _observer(options))


def run_ocn_word(nfa, target, options):
    net, config = target
    return fainc_ocn(
        nfa, net, config, options["prune"], options["max_iterations"], _observer(options)
    )


# --- Algorithm registries ---
# Maps --algo names to handlers; word-based entries also take an --order.

NFA_ALGORITHMS = {
    "word": run_nfa_word,
    "word-r": run_nfa_word_right,
    "antichain": run_nfa_antichain,
    "antichain-dual": run_nfa_antichain_dual,
    "antichain-r": run_nfa_antichain_forward,
    "gfp": run_nfa_gfp,
}

CFG_ALGORITHMS = {
    "word": run_cfg_word,
    "antichain": run_cfg_antichain,
}

ORDERED_ALGORITHMS = ("word", "word-r")


def _plan(registry, algo, order, orders, portfolio):
    """List ``(name, order, handler)`` runs for one request."""
    if not portfolio:
        used = order if algo in ORDERED_ALGORITHMS else None
        return [(algo, used, registry[algo])]
    plan = []
    for name, handler in registry.items():
        if name in ORDERED_ALGORITHMS:
            plan.extend((name, o, handler) for o in orders)
        else:
            plan.append((name, None, handler))
    return plan


def _run_plan(plan, left, right, options):
    """Run every planned algorithm; portfolio runs go to a thread pool.

    Returns the first finished report, or raises ``_Disagreement``.
    """
    if len(plan) == 1:
        name, order, handler = plan[0]
        return run_algorithm(name, order, handler, left, right, dict(options, order=order))
    reports = []
    with ThreadPoolExecutor(max_workers=len(plan)) as pool:
        futures = [
            pool.submit(
                run_algorithm, name, order, handler, left, right, dict(options, order=order)
            )
            for name, order, handler in plan
        ]
        for future in as_completed(futures):
            reports.append(future.result())
    if len({r.verdict for r in reports}) > 1:
        raise _Disagreement(reports)
    return reports[0]


class _Disagreement(Exception):
    def __init__(self, reports):
        super().__init__("algorithms disagree on the verdict")
        self.reports = reports


# --- Output ---


def emit(report, args, fmt, oracle=None):
    if fmt == "json":
        data = report.to_dict()
        if oracle is not None:
            data["oracle"] = {
                "verdict": oracle.included,
                "witness": None if oracle.witness is None else format_word(oracle.witness),
                "conclusive": oracle.conclusive,
            }
        print(json.dumps(data))
        return
    print(f"inclusion: {str(report.verdict).lower()}")
    if args.witness and not report.verdict:
        if report.witness is None:
            print("witness: unavailable")
        else:
            print(f"witness: {format_word(report.witness) or 'ε'}")
    if args.stats:
        print(f"algorithm: {report.algorithm}")
        if report.order:
            print(f"order: {report.order}")
        print(f"iterations: {report.iterations}")
        print(f"max_frontier: {report.max_frontier}")
        print(f"elapsed: {report.elapsed:.6f}s")
    if oracle is not None:
        suffix = "" if oracle.conclusive else " (inconclusive)"
        print(f"oracle: {str(oracle.included).lower()}{suffix}")


def _decide(args, settings, kind, left, right, oracle_run):
    options = {
        "prune": settings["prune"] and not args.no_prune,
        "max_iterations": settings["max_iterations"],
        "trace": args.trace,
    }
    if kind == "ocn":
        plan = [("word-r", "ocn", run_ocn_word)]
    elif kind == "cfg":
        algo = args.algo or settings["cfg_algo"]
        order = args.order or settings["cfg_order"]
        plan = _plan(CFG_ALGORITHMS, algo, order, list(CFG_ORDERS), args.portfolio)
    else:
        algo = args.algo or settings["nfa_algo"]
        order = args.order or settings["nfa_order"]
        plan = _plan(NFA_ALGORITHMS, algo, order, list(LEFT_ORDERS), args.portfolio)

    try:
        report = _run_plan(plan, left, right, options)
    except _Disagreement as exc:
        dump = {"error": str(exc), "reports": [r.to_dict() for r in exc.reports]}
        print(json.dumps(dump, indent=2), file=sys.stderr)
        return EXIT_ERROR

    oracle = oracle_run() if args.oracle else None
    emit(report, args, args.format or settings["format"], oracle)
    if oracle is not None and oracle.included != report.verdict:
        if oracle.conclusive or report.verdict:
            logger.error("Oracle disagrees with %s", report.algorithm)
            return EXIT_ERROR
    return EXIT_INCLUDED if report.verdict else EXIT_NOT_INCLUDED


# --- Subcommands ---


def cmd_nfa(args, settings):
    a1 = load_nfa(args.left)
    a2 = load_nfa(args.right)
    return _decide(args, settings, "nfa", a1, a2, lambda: oracle_nfa_inclusion(a1, a2))


def cmd_cfg(args, settings):
    grammar = to_cnf(load_cfg(args.grammar))
    nfa = load_nfa(args.automaton)
    return _decide(
        args,
        settings,
        "cfg",
        grammar,
        nfa,
        lambda: oracle_bounded(grammar, nfa.member, ORACLE_MAX_LEN),
    )


def cmd_ocn(args, settings):
    nfa = load_nfa(args.automaton)
    net = load_ocn(args.net)
    config = parse_config(args.config)
    return _decide(
        args,
        settings,
        "ocn",
        nfa,
        (net, config),
        lambda: oracle_bounded(nfa, lambda w: trace_member(net, config, w), ORACLE_MAX_LEN),
    )


def cmd_member(args, _settings):
    path = args.file
    if path.endswith(".nfa"):
        nfa = load_nfa(path)
        result = nfa.member(parse_word(args.word, nfa.alphabet))
    elif path.endswith(".cfg"):
        grammar = to_cnf(load_cfg(path))
        result = cyk_member(grammar, parse_word(args.word, grammar.terminals))
    elif path.endswith(".ocn"):
        if not args.start:
            raise ValueError("OCN membership needs --from <state>:<nat>")
        net = load_ocn(path)
        result = trace_member(net, parse_config(args.start), parse_word(args.word, net.alphabet))
    else:
        raise ValueError(f"Cannot tell the input kind of '{path}' (use .nfa, .cfg or .ocn)")
    print(f"member: {str(result).lower()}")
    return EXIT_INCLUDED if result else EXIT_NOT_INCLUDED


COMMANDS = {
    "nfa": cmd_nfa,
    "cfg": cmd_cfg,
    "ocn": cmd_ocn,
    "member": cmd_member,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-prune", action="store_true", help="keep every word in word-based iterates")
    common.add_argument("--witness", action="store_true", help="print a counterexample word")
    common.add_argument("--stats", action="store_true", help="print iteration statistics")
    common.add_argument("--oracle", action="store_true", help="cross-check with a brute-force decider")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="output format (default: text)")
    common.add_argument("--portfolio", action="store_true", help="run all algorithms and require agreement")
    common.add_argument("--trace", action="store_true", help="log every Kleene iterate")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    common.add_argument("--settings", help=f"settings file (default: {SETTINGS_FILE})")

    parser = argparse.ArgumentParser(
        prog="qo-inclusion",
        description="Quasiorder-based language inclusion checker.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    nfa = sub.add_parser("nfa", parents=[common], help="L(A1) ⊆ L(A2)")
    nfa.add_argument("left")
    nfa.add_argument("right")
    nfa.add_argument("--algo", choices=list(NFA_ALGORITHMS), help="decision algorithm (default: antichain)")
    nfa.add_argument("--order", choices=list(LEFT_ORDERS), help="word quasiorder (default: state)")

    cfg = sub.add_parser("cfg", parents=[common], help="L(G) ⊆ L(A)")
    cfg.add_argument("grammar")
    cfg.add_argument("automaton")
    cfg.add_argument("--algo", choices=list(CFG_ALGORITHMS), help="decision algorithm (default: antichain)")
    cfg.add_argument("--order", choices=list(CFG_ORDERS), help="word quasiorder (default: ctx)")

    ocn = sub.add_parser("ocn", parents=[common], help="L(A) ⊆ T(q:n)")
    ocn.add_argument("automaton")
    ocn.add_argument("net")
    ocn.add_argument("config", help="<state>:<nat>")
    ocn.set_defaults(algo=None, order=None)

    member = sub.add_parser("member", parents=[common], help="word membership")
    member.add_argument("file", help=".nfa, .cfg or .ocn file")
    member.add_argument("word", help="word; comma-separated for multi-character symbols")
    member.add_argument("--from", dest="start", help="OCN start configuration <state>:<nat>")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        level = logging.DEBUG
    elif args.trace:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr, force=True)

    settings = load_settings(args.settings)
    try:
        return COMMANDS[args.command](args, settings)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
