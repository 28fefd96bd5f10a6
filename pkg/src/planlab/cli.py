"""The ``planlab`` command.

Exit codes: 0 success, 1 a domain outcome (no plan, rejected plan, lost or
unfinished episode, malformed PDDL), 2 usage error, 3 internal error.
Machine output goes to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .pddl import PddlError, parse_domain, parse_problem, render_domain, render_problem
from .planner import SearchLimits, parse_plan, solve_text, validate_plan

log = logging.getLogger("planlab")

OK, OUTCOME, USAGE, INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(args, data: dict, human: str) -> None:
    print(json.dumps(data, indent=2, sort_keys=True) if args.json else human)


def _limits(args) -> SearchLimits:
    return SearchLimits(wall_clock_cap=args.timeout, max_expanded_states=args.max_states)


def _load_config(args) -> dict:
    """Settings file: ``--config`` or $PLANLAB_CONFIG. Missing is fine, unreadable is not."""
    path = args.config or os.environ.get("PLANLAB_CONFIG")
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot load config {path}: {exc}") from exc


def _log_dir(args, config: dict) -> Path:
    """--log-dir, then $PLANLAB_LOG_DIR, then [paths] log_dir, then ./runs."""
    return Path(args.log_dir or os.environ.get("PLANLAB_LOG_DIR") or config.get("paths", {}).get("log_dir") or "runs")


# -- pddl ------------------------------------------------------------------------


def cmd_parse(args) -> int:
    text = _read(args.file)
    if args.domain:
        domain = parse_domain(_read(args.domain))
        print(render_problem(parse_problem(text, domain)), end="")
    elif "(:domain " in text.replace("\t", " ").lower():
        print(render_problem(parse_problem(text)), end="")
    else:
        print(render_domain(parse_domain(text)), end="")
    return OK


def cmd_solve(args) -> int:
    """Plan on stdout, one action per line; otherwise a ``;NO-SOLUTION``-style marker line."""
    domain_text, problem_text = _read(args.domain), _read(args.problem)
    result = solve_text(domain_text, problem_text, _limits(args))
    data = {"status": result.status.value, "plan": result.plan_text(), "expanded": result.expanded,
            "detail": result.detail}
    if result.solved:
        _emit(args, data, "\n".join(result.plan_text()))
        return OK
    _emit(args, data, ";" + result.status.value.upper())
    print(f"{result.status.value}: {result.detail}", file=sys.stderr)
    return OUTCOME


def cmd_validate(args) -> int:
    domain = parse_domain(_read(args.domain))
    problem = parse_problem(_read(args.problem), domain)
    steps = parse_plan(_read(args.plan))
    report = validate_plan(domain, problem, steps)
    data = {"accepted": report.accepted, "failed_step": report.failed_step,
            "failed_literal": str(report.failed_literal) if report.failed_literal else None,
            "message": report.message}
    _emit(args, data, "valid" if report.accepted else f"invalid: {report.message}")
    return OK if report.accepted else OUTCOME


# -- env -------------------------------------------------------------------------


def _env_config(args):
    from .envs import EnvConfig

    extra = {}
    if getattr(args, "rooms", None) is not None:
        extra["num_rooms"] = args.rooms
    if getattr(args, "max_steps", None) is not None:
        extra["max_steps"] = args.max_steps
    if getattr(args, "layout", None):
        extra["layout"] = args.layout
    return EnvConfig.preset(args.kind, args.difficulty, seed=args.seed, **extra)


def cmd_env_play(args) -> int:
    from .envs import new_episode, step
    from .envs.transcript import step_record, write_jsonl

    w, obs = new_episode(_env_config(args))
    print(f"> {obs.text}", flush=True)
    records = []
    outcome = None
    for line in sys.stdin:
        action = line.strip()
        if not action:
            continue
        w, obs, outcome = step(w, action)
        print(f"< {action}\n> {obs.text}", flush=True)
        if outcome.kind == "invalid":
            print(f"[{outcome}]", file=sys.stderr)
        records.append(step_record(w.steps, action, str(outcome), obs.text))
        if outcome.terminal:
            break
    if args.transcript:
        write_jsonl(records, args.transcript)
    return OK if outcome is not None and outcome.kind == "won" else OUTCOME


def cmd_env_export(args) -> int:
    from .envs import export_pddl, new_episode

    w, _ = new_episode(_env_config(args))
    domain_text, problem_text = export_pddl(w)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "domain.pddl").write_text(domain_text, encoding="utf-8")
        (out / "problem.pddl").write_text(problem_text, encoding="utf-8")
        print(f"wrote {out / 'domain.pddl'} and {out / 'problem.pddl'}", file=sys.stderr)
    else:
        print(domain_text.rstrip() + "\n\n" + problem_text, end="")
    return OK


# -- agent -----------------------------------------------------------------------


def cmd_agent_run(args) -> int:
    from .agent import run_episode
    from .evaluation import make_policy

    config = _load_config(args)
    llm = dict(config.get("llm", {}))
    if args.model:
        llm["model"] = args.model
    if args.audit_log:
        llm["audit_log"] = args.audit_log
    cfg = _env_config(args)
    policy = make_policy(args.policy, args.seed, llm)
    ep = run_episode(cfg, args.strategy, policy, replan=args.replan, limits=_limits(args), keep_pf=args.keep_pf)
    path = Path(args.log) if args.log else (
        _log_dir(args, config) / f"agent-{cfg.kind}-{cfg.difficulty}-{args.strategy}-{args.policy.split(':')[0]}-seed{cfg.seed}.jsonl")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(ep.to_jsonl(), encoding="utf-8")
    summary = {**ep.result(), "log": str(path)}
    human = (f"{'won' if ep.won else 'failed'} in {ep.num_steps} steps "
             f"({ep.invalid_steps} invalid){'' if ep.won else ': ' + str(ep.failure_reason)}; log {path}")
    _emit(args, summary, human)
    return OK if ep.won else OUTCOME


# -- eval ------------------------------------------------------------------------


def cmd_eval_run(args) -> int:
    from .evaluation import SuiteConfig, run_batch, summary_json, summary_markdown

    config = _load_config(args)
    suite = SuiteConfig.from_toml(args.suite)
    if args.jobs:
        suite.jobs = args.jobs
    if not suite.llm and config.get("llm"):
        suite.llm = dict(config["llm"])
    out = Path(args.out) if args.out else _log_dir(args, config) / suite.name
    logs = run_batch(suite, out)
    print(f"{len(logs)} episodes in {out}", file=sys.stderr)
    print(summary_json(logs) if args.json else summary_markdown(logs), end="")
    return OK


def cmd_eval_report(args) -> int:
    from .evaluation import episodes_csv, load_logs, summary_json, summary_markdown

    logs = load_logs(args.logs)
    if not logs:
        raise UsageError(f"no finished episode logs under {args.logs}")
    fmt = "json" if args.json else args.format
    text = {"csv": episodes_csv, "md": summary_markdown, "json": summary_json}[fmt](logs)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return OK


# -- action-eval -------------------------------------------------------------------


def cmd_action_eval(args) -> int:
    from .action_eval import evaluate_texts

    gold_text = _read(args.gold)
    gold = parse_domain(gold_text)
    problems, plans = [], []
    if args.pf:
        for path in sorted(Path(args.pf).glob("*.pddl")):
            problems.append(parse_problem(path.read_text(encoding="utf-8"), gold))
            plan_file = Path(args.plans) / f"{path.stem}.plan" if args.plans else None
            plans.append(plan_file.read_text(encoding="utf-8") if plan_file and plan_file.exists() else None)
    report = evaluate_texts(_read(args.pred), gold_text, problems, plans if args.plans else None,
                            _limits(args), check_domain_name=not args.no_name_check)
    data = report.to_dict()
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    if args.json or not args.report:
        print(text, end="")
    else:
        lines = []
        if report.syntax_error:
            lines.append(f"syntax error: {report.syntax_error}")
        if report.intrinsic:
            i = report.intrinsic
            lines.append(f"action accuracy {i.action_accuracy:.3f}  parameters {i.parameters:.3f}  "
                         f"preconditions {i.preconditions:.3f}  effects {i.effects:.3f}")
        if report.extrinsic:
            e = report.extrinsic
            lines.append(f"solve rate {e.solve_rate:.3f}  exact plan {e.exact_plan_rate}")
        print("\n".join(lines))
    return OK


# -- wiring ----------------------------------------------------------------------


def _add_search(p) -> None:
    p.add_argument("--timeout", type=float, default=30.0, help="planner wall-clock cap in seconds (default 30)")
    p.add_argument("--max-states", type=int, default=1_000_000, help="planner expansion cap")


def _add_world(p, with_layout: bool = False) -> None:
    p.add_argument("--kind", choices=("coin", "cooking"), default="coin")
    p.add_argument("--difficulty", choices=("easy", "hard"), default="easy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rooms", type=int, help="override the preset room count")
    p.add_argument("--max-steps", type=int, help="override the preset step budget")
    if with_layout:
        p.add_argument("--layout", choices=("random", "trajectory"))


def build_parser() -> argparse.ArgumentParser:
    def flags(top: bool) -> argparse.ArgumentParser:
        # Subcommands repeat the global flags with suppressed defaults, so a flag
        # given before the subcommand is not reset by the subparser.
        p = argparse.ArgumentParser(add_help=False)
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        p.add_argument("--json", action="store_true", default=d(False), help="machine-readable JSON on stdout")
        p.add_argument("-v", "--verbose", action="count", default=d(0))
        p.add_argument("--config", default=d(None), help="TOML settings file ([llm], [paths]); also $PLANLAB_CONFIG")
        p.add_argument("--log-dir", default=d(None), help="where logs go (default ./runs; also $PLANLAB_LOG_DIR)")
        return p

    common = flags(top=False)
    parser = argparse.ArgumentParser(
        prog="planlab",
        description="PDDL tools, text games and a planning agent.",
        epilog="exit codes: 0 success, 1 domain outcome, 2 usage error, 3 internal error",
        parents=[flags(top=True)],
    )
    parser.add_argument("--version", action="version", version=f"planlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("parse", parents=[common], help="parse a domain or problem and print it canonically")
    p.add_argument("file")
    p.add_argument("-d", "--domain", help="domain to check a problem against")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("solve", parents=[common], help="find a shortest plan")
    p.add_argument("-d", "--domain", required=True)
    p.add_argument("-p", "--problem", required=True)
    _add_search(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", parents=[common], help="check a plan step by step")
    p.add_argument("-d", "--domain", required=True)
    p.add_argument("-p", "--problem", required=True)
    p.add_argument("--plan", required=True)
    p.set_defaults(func=cmd_validate)

    env = sub.add_parser("env", help="text games").add_subparsers(dest="env_command", metavar="ACTION")
    env.required = True
    p = env.add_parser("play", parents=[common], help="play from stdin, one action per line")
    _add_world(p, with_layout=True)
    p.add_argument("--transcript", help="write the steps as JSONL")
    p.set_defaults(func=cmd_env_play)
    p = env.add_parser("export-pddl", parents=[common], help="dump the full world as a domain and problem")
    _add_world(p, with_layout=True)
    p.add_argument("--out", help="directory for domain.pddl and problem.pddl (default: stdout)")
    p.set_defaults(func=cmd_env_export)

    agent = sub.add_parser("agent", help="the planning agent").add_subparsers(dest="agent_command", metavar="ACTION")
    agent.required = True
    p = agent.add_parser("run", parents=[common], help="play one episode")
    _add_world(p, with_layout=True)
    p.add_argument("--strategy", choices=("action-gen", "pddl-gen", "pddl-edit"), default="pddl-edit")
    p.add_argument("--policy", default="oracle", help="oracle | random | llm | replay:<audit.jsonl>")
    p.add_argument("--replan", choices=("early", "on-completion"), default="early")
    p.add_argument("--log", help="episode log path")
    p.add_argument("--keep-pf", action="store_true", help="store the full problem file at every step")
    p.add_argument("--model", help="LLM model name, overriding environment and config")
    p.add_argument("--audit-log", help="append every LLM request and response here")
    _add_search(p)
    p.set_defaults(func=cmd_agent_run)

    ev = sub.add_parser("eval", help="batch experiments").add_subparsers(dest="eval_command", metavar="ACTION")
    ev.required = True
    p = ev.add_parser("run", parents=[common], help="run a suite; finished episodes are skipped")
    p.add_argument("--suite", required=True)
    p.add_argument("--out", help="log directory (default <log-dir>/<suite name>)")
    p.add_argument("--jobs", type=int, help="episodes in flight at once")
    p.set_defaults(func=cmd_eval_run)
    p = ev.add_parser("report", parents=[common], help="summarise a log directory")
    p.add_argument("--logs", required=True)
    p.add_argument("--format", choices=("csv", "md", "json"), default="md")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval_report)

    p = sub.add_parser("action-eval", parents=[common], help="score predicted action definitions")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--pf", help="directory of problem files (*.pddl)")
    p.add_argument("--plans", help="directory of gold plans named <problem>.plan")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--no-name-check", action="store_true", help="accept problems naming another domain")
    _add_search(p)
    p.set_defaults(func=cmd_action_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return OK if exc.code in (0, None) else USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"planlab: {exc}", file=sys.stderr)
        return USAGE
    except PddlError as exc:
        print(f"planlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return OUTCOME
    except (ValueError, KeyError) as exc:
        print(f"planlab: {exc}", file=sys.stderr)
        return USAGE
    except Exception as exc:
        log.debug("internal error", exc_info=True)
        print(f"planlab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
