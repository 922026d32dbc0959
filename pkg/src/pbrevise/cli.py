"""Command-line front end.

Exit codes: 0 success, 1 bad input (unparseable file, unknown atom,
inconsistent base, unsatisfiable observation), 2 revision undefined
(e.g. MCI drops every boundary state, or conditioning on a null event).
``verify`` exits 3 when a check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .beliefs import (
    BeliefBase,
    bstate_satisfies,
    dump_belief_base,
    dump_belief_state,
    entails,
    equivalent,
    format_fraction,
    parse_belief_base,
    parse_belief_state,
    parse_prob_formula,
)
from .boundary import (
    EmptyRevision,
    boundary_states,
    envelopes,
    induce_bb,
    revise_bb_traced,
)
from .distance import PseudoDistance, UnsatisfiableObservation, parse_distance_matrix
from .entropy import max_entropy
from .oracle import check_postulates, check_envelopes
from .props import model_indices, parse_formula, render
from .revision import ZeroProbabilityEvidence, bc_revise

REVISE_METHODS = ("boundary-gi", "boundary-mci", "maxent-gi", "bc")
EXIT_INPUT = 1
EXIT_UNDEFINED = 2


class StageError(Exception):
    def __init__(self, stage: str, message: str, code: int = EXIT_INPUT):
        super().__init__(f"{stage}: {message}")
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    input: Path
    observation: str
    method: str = "boundary-gi"
    distance: str = "hamming"
    output_format: str = "bb"
    out: Path | None = None
    trace: bool = False
    verify: bool = False
    grid: int = 20
    state: Path | None = None
    max_worlds: int = 8

    def __post_init__(self):
        if self.method not in REVISE_METHODS:
            raise ValueError(f"method must be one of {REVISE_METHODS}")
        if self.output_format not in ("bb", "json"):
            raise ValueError("format must be 'bb' or 'json'")


# --- loading --------------------------------------------------------------------


def _read(path: Path, stage: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise StageError(stage, str(e)) from None


def load_base(path: Path, stage: str = "input") -> BeliefBase:
    try:
        return parse_belief_base(_read(path, stage))
    except ValueError as e:
        raise StageError(stage, str(e)) from None


def load_distance(spec: str, B: BeliefBase) -> PseudoDistance:
    if spec == "hamming":
        return PseudoDistance.hamming(B.vocab)
    try:
        matrix = parse_distance_matrix(_read(Path(spec), "distance"))
        return PseudoDistance.from_matrix(B.vocab, matrix, name=Path(spec).name)
    except ValueError as e:
        raise StageError("distance", str(e)) from None


def load_observation(text: str, B: BeliefBase):
    try:
        alpha = parse_formula(text, B.vocab)
    except ValueError as e:
        raise StageError("observation", str(e)) from None
    if not model_indices(alpha, B.vocab):
        raise StageError("observation", f"{text!r} is unsatisfiable")
    return alpha


# --- output ---------------------------------------------------------------------


def _states_json(states) -> list[list[str]]:
    return [[format_fraction(p) for p in s.probs] for s in states]


def result_json(result: BeliefBase, states, config: RunConfig, extra: dict) -> dict:
    worlds = result.vocab.worlds()
    env = envelopes(states)
    return {
        "vocabulary": list(result.vocab.atoms),
        "method": {
            "name": config.method,
            "observation": config.observation,
            "distance": config.distance,
        },
        "worlds": [
            {"world": w.bits, "lower": format_fraction(lo), "upper": format_fraction(hi)}
            for w, (lo, hi) in zip(worlds, env)
        ],
        "constraints": [str(c) for c in result.constraints],
        **extra,
    }


def run(config: RunConfig, stdout=None) -> int:
    """Execute one revision; returns the process exit code."""
    stdout = stdout or sys.stdout
    B = load_base(config.input)
    alpha = load_observation(config.observation, B)
    d = load_distance(config.distance, B)

    try:
        if config.method == "bc":
            if config.state is None:
                raise StageError("input", "method 'bc' needs --state")
            try:
                b = parse_belief_state(_read(config.state, "state"), B.vocab)
            except ValueError as e:
                raise StageError("state", str(e)) from None
            if not bstate_satisfies(b, B):
                print("warning: the given state does not satisfy the belief base", file=sys.stderr)
            before, after = (b,), (bc_revise(b, alpha),)
            result = induce_bb(after, B.vocab)
        else:
            trace = revise_bb_traced(B, alpha, config.method, d, max_worlds=config.max_worlds)
            before, after, result = trace.before, trace.after, trace.result
    except (EmptyRevision, ZeroProbabilityEvidence) as e:
        raise StageError("revision", str(e), EXIT_UNDEFINED) from None
    except UnsatisfiableObservation as e:
        raise StageError("observation", str(e)) from None
    except ValueError as e:
        raise StageError("revision", str(e)) from None

    report = None
    if config.verify:
        if config.method == "boundary-gi":
            try:
                report = check_envelopes(B, alpha, d, config.grid)
            except ValueError as e:
                raise StageError("verify", str(e)) from None

    if config.output_format == "json":
        extra = {}
        if config.trace:
            extra["trace"] = {"before": _states_json(before), "after": _states_json(after)}
        if config.verify:
            extra["verify"] = report.to_dict() if report else {"skipped": "only boundary-gi"}
        text = json.dumps(result_json(result, after, config, extra), indent=2) + "\n"
    else:
        text = dump_belief_base(result)
        if config.trace:
            text += "# boundary states before revision\n"
            text += "".join("# " + dump_belief_state(s) for s in before)
            text += "# after revision\n"
            text += "".join("# " + dump_belief_state(s) for s in after)
        if config.verify:
            body = report.to_text() if report else "verification only supports boundary-gi"
            text += "".join(f"# {line}\n" for line in body.splitlines())

    if config.out:
        Path(config.out).write_text(text)
    else:
        stdout.write(text)
    return 0


# --- subcommands ------------------------------------------------------------------


def _cmd_revise(args) -> int:
    config = RunConfig(
        input=Path(args.file),
        observation=args.observe,
        method=args.method,
        distance=args.distance,
        output_format=args.format,
        out=Path(args.out) if args.out else None,
        trace=args.trace,
        verify=args.verify,
        grid=args.grid,
        state=Path(args.state) if args.state else None,
        max_worlds=args.max_worlds,
    )
    return run(config)


def _cmd_boundary(args) -> int:
    B = load_base(Path(args.file))
    try:
        S = boundary_states(B, max_worlds=args.max_worlds)
    except ValueError as e:
        raise StageError("boundary", str(e)) from None
    if args.format == "json":
        print(json.dumps({"vocabulary": list(B.vocab.atoms), "states": _states_json(S)}, indent=2))
    else:
        print("# worlds: " + " ".join(w.bits for w in B.vocab.worlds()))
        for s in S:
            sys.stdout.write(dump_belief_state(s))
    return 0


def _cmd_maxent(args) -> int:
    B = load_base(Path(args.file))
    r = max_entropy(B)
    if args.format == "json":
        print(json.dumps({
            "vocabulary": list(B.vocab.atoms),
            "state": [format_fraction(p) for p in r.state.probs],
            "raw": list(r.raw),
            "exact": r.exact,
            "entropy": r.entropy,
        }, indent=2))
    else:
        sys.stdout.write(dump_belief_state(r.state))
        print(f"# entropy {r.entropy:.9f} nats, {'exact' if r.exact else 'INEXACT (float optimum)'}")
    return 0


def _cmd_entails(args) -> int:
    B = load_base(Path(args.file))
    try:
        phi = parse_prob_formula(args.query, B.vocab)
    except ValueError as e:
        raise StageError("query", str(e)) from None
    print("true" if entails(B, phi) else "false")
    return 0


def _cmd_equiv(args) -> int:
    B = load_base(Path(args.first))
    B2 = load_base(Path(args.second))
    if B.vocab != B2.vocab:
        raise StageError("input", "belief bases use different vocabularies")
    print("true" if equivalent(B, B2) else "false")
    return 0


def _cmd_verify(args) -> int:
    B = load_base(Path(args.file))
    alpha = load_observation(args.observe, B)
    d = load_distance(args.distance, B)
    try:
        report = check_envelopes(B, alpha, d, args.grid, preimages=args.preimages)
    except ValueError as e:
        raise StageError("verify", str(e)) from None
    out = {"vocabulary": list(B.vocab.atoms), "observation": render(alpha), "envelopes": report.to_dict()}
    text = report.to_text()
    if args.beta:
        beta = load_observation(args.beta, B)
        pr = check_postulates(B, alpha, beta, "boundary-gi", d)
        out["postulates"] = pr.to_dict()
        text += "\npostulates (boundary-gi):\n" + "\n".join(
            f"  {i}: {'n/a' if v is None else 'PASS' if v else 'FAIL'}"
            + (" (vacuous)" if pr.vacuous[i] else "")
            for i, v in pr.results.items()
        )
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(text)
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(out, indent=2) + "\n")
    return 0 if report.passed else 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbrevise", description="Revise probabilistic belief bases.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("revise", help="revise a belief base by an observation")
    r.add_argument("file")
    r.add_argument("--observe", required=True, help="propositional observation")
    r.add_argument("--method", choices=REVISE_METHODS, default="boundary-gi")
    r.add_argument("--distance", default="hamming", help="'hamming' or a matrix file")
    r.add_argument("--format", choices=("bb", "json"), default="bb")
    r.add_argument("--out")
    r.add_argument("--trace", action="store_true", help="emit states before/after revision")
    r.add_argument("--verify", action="store_true", help="append the brute-force report")
    r.add_argument("--grid", type=int, default=20)
    r.add_argument("--state", help="belief-state file (method bc)")
    r.add_argument("--max-worlds", type=int, default=8)
    r.set_defaults(func=_cmd_revise)

    b = sub.add_parser("boundary", help="list boundary belief states")
    b.add_argument("file")
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.add_argument("--max-worlds", type=int, default=8)
    b.set_defaults(func=_cmd_boundary)

    m = sub.add_parser("maxent", help="maximum-entropy belief state")
    m.add_argument("file")
    m.add_argument("--format", choices=("text", "json"), default="text")
    m.set_defaults(func=_cmd_maxent)

    e = sub.add_parser("entails", help="does the base entail P(f) <rel> x?")
    e.add_argument("file")
    e.add_argument("query")
    e.set_defaults(func=_cmd_entails)

    q = sub.add_parser("equiv", help="are two bases equivalent?")
    q.add_argument("first")
    q.add_argument("second")
    q.set_defaults(func=_cmd_equiv)

    v = sub.add_parser("verify", help="brute-force check of boundary-GI revision")
    v.add_argument("file")
    v.add_argument("--observe", required=True)
    v.add_argument("--beta", help="second observation for the postulate harness")
    v.add_argument("--distance", default="hamming")
    v.add_argument("--grid", type=int, default=20)
    v.add_argument("--preimages", action="store_true")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--json-out")
    v.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as e:
        print(f"error in {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
