"""Reference implementations used only to check the package against.

They are deliberately naive: grounding by plain substitution over typed
objects and plan search by enumerating every action sequence.
"""

from __future__ import annotations

import itertools

from planlab.pddl import Domain, Problem


def naive_ground(domain: Domain, problem: Problem) -> list[tuple[str, tuple, frozenset, frozenset, frozenset]]:
    """(name, args, positive pre, negative pre, adds, deletes) for every typed instantiation."""
    out = []
    for a in domain.actions:
        pools = [
            [o for o, t in problem.objects if typ == "object" or t == typ]
            for _, typ in a.parameters
        ]
        for args in itertools.product(*pools):
            m = dict(zip(a.param_names, args))

            def sub(lit):
                return (lit.atom.predicate, *(m.get(x, x) for x in lit.atom.args))

            pre_pos = frozenset(sub(l) for l in a.precondition if l.positive)
            pre_neg = frozenset(sub(l) for l in a.precondition if not l.positive)
            adds = frozenset(sub(l) for l in a.effect if l.positive)
            dels = frozenset(sub(l) for l in a.effect if not l.positive)
            out.append((a.name, args, pre_pos, pre_neg, adds, dels))
    return out


def _state(problem: Problem) -> frozenset:
    return frozenset((a.predicate, *a.args) for a in problem.init)


def _goal_met(state: frozenset, problem: Problem) -> bool:
    return all(((l.atom.predicate, *l.atom.args) in state) == l.positive for l in problem.goal)


def brute_force_min_length(domain: Domain, problem: Problem, max_depth: int = 8) -> int | None:
    """Shortest plan length found by enumerating all applicable sequences up to ``max_depth``."""
    actions = naive_ground(domain, problem)

    def reachable(state: frozenset, depth: int) -> bool:
        if _goal_met(state, problem):
            return True
        if depth == 0:
            return False
        for _, _, pp, pn, adds, dels in actions:
            if pp <= state and not (pn & state):
                if reachable((state - dels) | adds, depth - 1):
                    return True
        return False

    start = _state(problem)
    for depth in range(max_depth + 1):
        if reachable(start, depth):
            return depth
    return None


def replay(domain: Domain, problem: Problem, plan: list[tuple[str, tuple]]) -> bool:
    """True when every step is applicable in turn and the goal holds at the end."""
    table = {(n, args): (pp, pn, adds, dels) for n, args, pp, pn, adds, dels in naive_ground(domain, problem)}
    state = _state(problem)
    for name, args in plan:
        pp, pn, adds, dels = table[(name, tuple(args))]
        if not pp <= state or pn & state:
            return False
        state = (state - dels) | adds
    return _goal_met(state, problem)
