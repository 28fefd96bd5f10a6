"""Score predicted action definitions against gold ones.

Intrinsic scores compare schemas up to renaming of parameters and reordering
of conjuncts. Extrinsic scores run the planner on problem files with the
predicted domain and classify every failure.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Sequence

from .pddl import ActionSchema, Atom, Domain, Literal, PddlError, Problem, parse_domain
from .planner import SearchLimits, SolveStatus, parse_plan, solve, validate_plan

# -- equivalence -------------------------------------------------------------------


def _rename(lits: Iterable[Literal], m: dict[str, str]) -> frozenset[Literal]:
    return frozenset(Literal(Atom(l.atom.predicate, tuple(m.get(x, x) for x in l.atom.args)), l.positive) for l in lits)


def _signature(lits: Iterable[Literal]) -> Counter:
    """Bijection-invariant summary used to reject obvious mismatches quickly."""
    return Counter((l.atom.predicate, l.positive, len(l.atom.args)) for l in lits)


def bijections(a: ActionSchema, b: ActionSchema, typed: bool = True) -> Iterator[dict[str, str]]:
    """Every parameter bijection from ``a`` onto ``b``; with ``typed`` only those that keep types."""
    if len(a.parameters) != len(b.parameters):
        return
    if not typed:
        for perm in itertools.permutations(b.param_names):
            yield dict(zip(a.param_names, perm))
        return
    groups_a: dict[str, list[str]] = defaultdict(list)
    groups_b: dict[str, list[str]] = defaultdict(list)
    for v, t in a.parameters:
        groups_a[t].append(v)
    for v, t in b.parameters:
        groups_b[t].append(v)
    if {t: len(v) for t, v in groups_a.items()} != {t: len(v) for t, v in groups_b.items()}:
        return
    types = sorted(groups_a)
    for perms in itertools.product(*(itertools.permutations(groups_b[t]) for t in types)):
        m: dict[str, str] = {}
        for t, perm in zip(types, perms):
            m.update(zip(groups_a[t], perm))
        yield m


def _exists(a: ActionSchema, b: ActionSchema, parts: Sequence[str], typed: bool = True) -> bool:
    for part in parts:
        if _signature(getattr(a, part)) != _signature(getattr(b, part)):
            return False
    for m in bijections(a, b, typed):
        if all(_rename(getattr(a, p), m) == getattr(b, p) for p in parts):
            return True
    return False


def parameters_match(a: ActionSchema, b: ActionSchema) -> bool:
    return Counter(a.param_types) == Counter(b.param_types)


def actions_equivalent(a: ActionSchema, b: ActionSchema) -> bool:
    """Same name, and one type-respecting renaming makes both precondition and effect sets equal."""
    return a.name == b.name and parameters_match(a, b) and _exists(a, b, ("precondition", "effect"))


def canonical_form(a: ActionSchema) -> tuple:
    """Lexicographically least rendering over all type-respecting renamings to ?x0, ?x1, ...

    Two schemas are equivalent exactly when their canonical forms are equal.
    """
    by_type: dict[str, list[str]] = defaultdict(list)
    for v, t in a.parameters:
        by_type[t].append(v)
    types = sorted(by_type)
    best = None
    for perms in itertools.product(*(itertools.permutations(by_type[t]) for t in types)):
        order = [v for perm in perms for v in perm]
        m = {v: f"?x{i}" for i, v in enumerate(order)}
        form = (
            a.name,
            tuple(t for t in types for _ in by_type[t]),
            tuple(sorted(map(str, _rename(a.precondition, m)))),
            tuple(sorted(map(str, _rename(a.effect, m)))),
        )
        if best is None or form < best:
            best = form
    return best if best is not None else (a.name, (), (), ())


# -- intrinsic ---------------------------------------------------------------------


@dataclass(frozen=True)
class ActionScore:
    name: str
    predicted: bool
    equivalent: bool
    parameters: bool
    preconditions: bool
    effects: bool

    @property
    def category(self) -> str:
        return "good-action" if self.equivalent else "bad-action"


@dataclass(frozen=True)
class IntrinsicScore:
    action_accuracy: float
    parameters: float
    preconditions: float
    effects: float
    actions: tuple[ActionScore, ...]
    extra_actions: tuple[str, ...] = ()


def score_action(pred: ActionSchema | None, gold: ActionSchema) -> ActionScore:
    if pred is None:
        return ActionScore(gold.name, False, False, False, False, False)
    typed = parameters_match(pred, gold)
    return ActionScore(
        gold.name,
        True,
        actions_equivalent(pred, gold),
        typed,
        _exists(pred, gold, ("precondition",), typed),
        _exists(pred, gold, ("effect",), typed),
    )


def intrinsic_score(pred: Domain, gold: Domain) -> IntrinsicScore:
    """Actions are paired by name; a gold action with no namesake in ``pred`` scores zero everywhere.

    Marginals are judged separately, each under its own best renaming. When the
    parameter types differ, preconditions and effects may use any renaming.
    """
    scores = tuple(score_action(pred.action(g.name), g) for g in gold.actions)
    n = len(scores) or 1
    gold_names = {g.name for g in gold.actions}
    return IntrinsicScore(
        action_accuracy=sum(s.equivalent for s in scores) / n,
        parameters=sum(s.parameters for s in scores) / n,
        preconditions=sum(s.preconditions for s in scores) / n,
        effects=sum(s.effects for s in scores) / n,
        actions=scores,
        extra_actions=tuple(sorted(a.name for a in pred.actions if a.name not in gold_names)),
    )


# -- extrinsic ---------------------------------------------------------------------

CAUSES = {
    SolveStatus.NO_SOLUTION: "no-plan",
    SolveStatus.TIMEOUT: "timeout",
    SolveStatus.FORMAT_ERROR: "solver-error",
}


@dataclass(frozen=True)
class ProblemOutcome:
    problem: str
    solved: bool
    cause: str | None = None  # no-plan | timeout | solver-error
    plan: tuple[str, ...] = ()
    exact_match: bool | None = None  # None without a gold plan
    valid_under_gold: bool | None = None  # None without a gold domain
    detail: str = ""

    @property
    def category(self) -> str:
        """Plan-level label; bad/good plan is only a candidate for human review."""
        if not self.solved:
            return self.cause or "unsolved"
        if self.exact_match:
            return "exact-plan"
        if self.valid_under_gold is None:
            return "plan-review"
        return "good-plan-candidate" if self.valid_under_gold else "bad-plan-candidate"


@dataclass(frozen=True)
class ExtrinsicReport:
    outcomes: tuple[ProblemOutcome, ...]

    def _rate(self, pred) -> float:
        return sum(1 for o in self.outcomes if pred(o)) / len(self.outcomes) if self.outcomes else 0.0

    @property
    def solve_rate(self) -> float:
        return self._rate(lambda o: o.solved)

    @property
    def exact_plan_rate(self) -> float | None:
        if not any(o.exact_match is not None for o in self.outcomes):
            return None
        return self._rate(lambda o: bool(o.exact_match))

    @property
    def valid_plan_rate(self) -> float | None:
        if not any(o.valid_under_gold is not None for o in self.outcomes):
            return None
        return self._rate(lambda o: bool(o.valid_under_gold))


def _plan_key(plan: str | Sequence) -> tuple[str, ...]:
    steps = parse_plan(plan) if isinstance(plan, str) else plan
    out = []
    for s in steps:
        text = " ".join((s[0], *s[1])) if isinstance(s, tuple) else str(s).strip().strip("()")
        out.append(" ".join(text.lower().split()))
    return tuple(out)


def extrinsic_score(
    pred: Domain,
    problems: Sequence[Problem],
    gold_plans: Sequence[str | Sequence | None] | None = None,
    gold: Domain | None = None,
    limits: SearchLimits = SearchLimits(),
    check_domain_name: bool = True,
) -> ExtrinsicReport:
    """Solve every problem with the predicted domain.

    ``gold_plans`` align with ``problems`` and give exact-match; ``gold`` lets
    each predicted plan be validated against the gold domain as well.
    """
    outcomes = []
    for i, pf in enumerate(problems):
        gold_plan = gold_plans[i] if gold_plans is not None else None
        if check_domain_name and pf.domain_name != pred.name:
            outcomes.append(ProblemOutcome(pf.name, False, "solver-error",
                                           detail=f"problem is for domain {pf.domain_name!r}, not {pred.name!r}"))
            continue
        result = solve(pred, pf, limits)
        if not result.solved:
            outcomes.append(ProblemOutcome(pf.name, False, CAUSES[result.status], detail=result.detail))
            continue
        plan = tuple(str(a) for a in result.plan)
        exact = None if gold_plan is None else _plan_key(plan) == _plan_key(gold_plan)
        valid = None
        if gold is not None:
            try:
                valid = validate_plan(gold, pf, list(result.plan)).accepted
            except PddlError:
                valid = False
        outcomes.append(ProblemOutcome(pf.name, True, None, plan, exact, valid))
    return ExtrinsicReport(tuple(outcomes))


# -- report ------------------------------------------------------------------------


@dataclass
class EvaluationReport:
    syntax_error: str | None = None
    intrinsic: IntrinsicScore | None = None
    extrinsic: ExtrinsicReport | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {"syntax_error": self.syntax_error, "notes": self.notes}
        if self.intrinsic is not None:
            i = self.intrinsic
            out["intrinsic"] = {
                "action_accuracy": i.action_accuracy,
                "parameters": i.parameters,
                "preconditions": i.preconditions,
                "effects": i.effects,
                "extra_actions": list(i.extra_actions),
                "actions": [{**asdict(a), "category": a.category} for a in i.actions],
            }
        if self.extrinsic is not None:
            e = self.extrinsic
            out["extrinsic"] = {
                "solve_rate": e.solve_rate,
                "exact_plan_rate": e.exact_plan_rate,
                "valid_plan_rate": e.valid_plan_rate,
                "problems": [{**asdict(o), "plan": list(o.plan), "category": o.category} for o in e.outcomes],
            }
        return out


def evaluate_texts(
    pred_text: str,
    gold_text: str,
    problems: Sequence[Problem] = (),
    gold_plans: Sequence[str | None] | None = None,
    limits: SearchLimits = SearchLimits(),
    check_domain_name: bool = True,
) -> EvaluationReport:
    """Full scoring from domain text. A predicted domain that does not parse is a syntax error."""
    gold = parse_domain(gold_text)
    try:
        pred = parse_domain(pred_text)
    except PddlError as exc:
        report = EvaluationReport(syntax_error=str(exc))
        if problems:
            report.extrinsic = ExtrinsicReport(tuple(
                ProblemOutcome(p.name, False, "solver-error", detail="predicted domain does not parse")
                for p in problems))
        return report
    report = EvaluationReport(intrinsic=intrinsic_score(pred, gold))
    if problems:
        report.extrinsic = extrinsic_score(pred, problems, gold_plans, gold, limits, check_domain_name)
    return report
