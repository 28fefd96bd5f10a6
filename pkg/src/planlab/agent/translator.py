"""Read game text into a structured world model and encode it as a problem file.

This is the deterministic stand-in for the translation an LLM performs: it
only uses what the observation history says, plus the rule that exits are
symmetric.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..envs.game import LEADS
from ..envs.truth import obj, placeholder
from ..envs.world import APPLIANCE_METHOD, DIRECTIONS, OPPOSITE, PAST, RecipeStep
from ..pddl import Atom, Literal, Problem

DOMAIN_NAMES = {"coin": "coin-collector", "cooking": "cooking-world"}
APPLIANCES = tuple(APPLIANCE_METHOD)
CUT_VERBS = ("slice", "dice", "chop")
COOK_VERBS = ("fry", "roast", "grill")


@dataclass(frozen=True)
class HistoryEntry:
    """One interaction: the action taken (None for the opening observation) and what came back."""

    action: str | None
    observation: str
    outcome: str = "ok"


@dataclass
class Knowledge:
    kind: str
    current: str | None = None
    visited: list[str] = field(default_factory=list)
    rooms: list[str] = field(default_factory=list)
    exits: dict[tuple[str, str], str | None] = field(default_factory=dict)
    door: dict[tuple[str, str], str] = field(default_factory=dict)  # none | open | closed
    containers: dict[str, str] = field(default_factory=dict)
    closed: set[str] = field(default_factory=set)
    appliances: dict[str, str] = field(default_factory=dict)
    cookbook_room: str | None = None
    items_in_room: dict[str, str] = field(default_factory=dict)
    items_inside: dict[str, str] = field(default_factory=dict)
    items: list[str] = field(default_factory=list)
    holding: set[str] = field(default_factory=set)
    recipe: tuple[RecipeStep, ...] | None = None
    processed: dict[str, dict[str, str | None]] = field(default_factory=dict)
    meal: str = "none"
    coin_room: str | None = None
    has_coin: bool = False

    def note_room(self, room: str) -> None:
        if room not in self.rooms:
            self.rooms.append(room)

    def note_item(self, item: str) -> None:
        if item not in self.items:
            self.items.append(item)

    def set_exit(self, room: str, d: str, dest: str | None, door: str | None) -> None:
        if dest is not None:
            self.note_room(dest)
            self.exits[(room, d)] = dest
        else:
            self.exits.setdefault((room, d), None)
        if door is not None:
            self.door[(room, d)] = door
            back = self.exits.get((room, d))
            if back is not None:
                self.door[(back, OPPOSITE[d])] = door

    def frontier(self) -> list[tuple[str, str]]:
        """Exits of known rooms whose destination is still unknown."""
        return [k for k, v in self.exits.items() if v is None]


_ARTICLE = re.compile(r"^(?:a|an|some) ")
_SENTENCE = re.compile(r"(?<=\.) (?=[A-Z])")


def _strip_item(phrase: str) -> str:
    name = _ARTICLE.sub("", phrase.strip())
    return name[4:] if name.startswith("raw ") else name


def _split_list(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(", ")]
    return [_strip_item(p[4:] if p.startswith("and ") else p) for p in parts if p]


def _parse_room(k: Knowledge, text: str) -> str:
    first, _, exits_line = text.partition("\n")
    sentences = _SENTENCE.split(first.strip())
    m = re.match(r"^You are in the (.+)\.$", sentences[0])
    if not m:
        raise ValueError(f"not a room description: {sentences[0]!r}")
    room = m.group(1)
    k.current = room
    k.note_room(room)
    if room not in k.visited:
        k.visited.append(room)
    for item in [i for i, r in k.items_in_room.items() if r == room]:
        del k.items_in_room[item]
    if k.coin_room == room:
        k.coin_room = None
    for s in sentences[1:]:
        if s == "On the floor you see a coin.":
            k.coin_room = room
            continue
        for lead in LEADS:
            if s.startswith(lead + " "):
                s = s[len(lead) + 1:]
                break
        _parse_furniture(k, room, s)
    for s in _SENTENCE.split(exits_line.strip()):
        if s:
            _parse_exit(k, room, s)
    return room


def _parse_furniture(k: Knowledge, room: str, s: str) -> None:
    s = _ARTICLE.sub("", s.rstrip("."))
    if m := re.match(r"^(.+) that is closed$", s):
        k.containers[m.group(1)] = room
        k.closed.add(m.group(1))
    elif m := re.match(r"^(.+) that is open and empty$", s):
        _open_container(k, room, m.group(1), [])
    elif m := re.match(r"^(.+) that contains (.+)$", s):
        _open_container(k, room, m.group(1), _split_list(m.group(2)))
    elif m := re.match(r"^(.+), that has nothing on it$", s):
        pass
    elif m := re.match(r"^(.+) that has (.+) on it$", s):
        for item in _split_list(m.group(2)):
            if item == "cookbook":
                k.cookbook_room = room
            else:
                k.note_item(item)
                k.items_in_room[item] = room
    elif s in APPLIANCES:
        k.appliances[s] = room


def _open_container(k: Knowledge, room: str, name: str, contents: list[str]) -> None:
    k.containers[name] = room
    k.closed.discard(name)
    for item in [i for i, c in k.items_inside.items() if c == name]:
        del k.items_inside[item]
    for item in contents:
        k.note_item(item)
        k.items_inside[item] = name


def _parse_exit(k: Knowledge, room: str, s: str) -> None:
    if m := re.match(r"^To the (\w+) you see the (.+)\.$", s):
        k.set_exit(room, m.group(1).lower(), m.group(2), "none")
    elif m := re.match(r"^Through an open (.+), to the (\w+) you see the (.+)\.$", s):
        k.set_exit(room, m.group(2).lower(), m.group(3), "open")
    elif m := re.match(r"^To the (\w+) you see a closed (.+)\.$", s):
        k.set_exit(room, m.group(1).lower(), None, "closed")


def _parse_recipe(k: Knowledge, text: str) -> None:
    lines = [l.strip() for l in text.splitlines()]
    ingredients = [i.strip() for i in lines[lines.index("Ingredients:") + 1].split(",")]
    directions = [d.strip() for d in lines[lines.index("Directions:") + 1].split(",")]
    cut: dict[str, str] = {}
    cook: dict[str, str] = {}
    for d in directions:
        verb, _, rest = d.partition(" the ")
        if verb in CUT_VERBS:
            cut[rest] = verb
        elif verb in COOK_VERBS:
            cook[rest] = verb
    k.recipe = tuple(RecipeStep(i, cut.get(i), cook.get(i)) for i in ingredients)
    for i in ingredients:
        k.note_item(i)
        k.processed.setdefault(i, {"cut": None, "cook": None})


def _symmetry(k: Knowledge) -> None:
    """Exit A->B going d implies exit B->A going the opposite way, sharing the door."""
    for (room, d), dest in list(k.exits.items()):
        if dest is None:
            continue
        back = (dest, OPPOSITE[d])
        if k.exits.get(back) is None:
            k.exits[back] = room
        states = {k.door.get((room, d)), k.door.get(back)} - {None}
        # Direct observations write both sides; only a side recorded before its
        # destination was known can lag behind, and then the door has been opened.
        for state in ("open", "closed", "none"):
            if state in states:
                k.door[(room, d)] = k.door[back] = state
                break


def update(k: Knowledge, entry: HistoryEntry) -> None:
    """Fold one history entry into ``k``."""
    if entry.outcome.startswith("invalid"):
        return
    text = entry.observation
    action = (entry.action or "").strip().lower()
    if text.startswith("You are in the "):
        before = k.current
        room = _parse_room(k, text)
        if action.startswith("move ") and before is not None:
            d = action.split()[1]
            k.exits[(before, d)] = room
            if k.door.get((before, d)) == "closed":
                k.door[(before, d)] = "open"
    elif m := re.match(r"^You open the (.+), revealing the (.+)\.$", text):
        d = action.rsplit(" ", 1)[-1]
        k.note_room(m.group(2))
        k.exits[(k.current, d)] = m.group(2)
        k.door[(k.current, d)] = "open"
        back = (m.group(2), OPPOSITE[d])
        k.door[back] = "open"
    elif m := re.match(r"^You close the (.+) to the (.+)\.$", text):
        d = action.rsplit(" ", 1)[-1]
        k.note_room(m.group(2))
        k.exits[(k.current, d)] = m.group(2)
        k.door[(k.current, d)] = "closed"
        k.door[(m.group(2), OPPOSITE[d])] = "closed"
    elif m := re.match(r"^You open the (.+?)\. (?:The .+ contains (.+)\.|It's empty inside\.)$", text):
        contents = _split_list(m.group(2)) if m.group(2) else []
        _open_container(k, k.current, m.group(1), contents)
    elif text.startswith("You take the coin."):
        k.has_coin = True
        k.coin_room = None
    elif m := re.match(r"^You take the (.+)\.$", text):
        item = m.group(1)
        k.note_item(item)
        k.holding.add(item)
        k.items_in_room.pop(item, None)
        k.items_inside.pop(item, None)
    elif text.startswith("Gather all following ingredients"):
        _parse_recipe(k, text)
    elif m := re.match(r"^You (slice|dice|chop) the (.+?)\.", text):
        k.processed.setdefault(m.group(2), {"cut": None, "cook": None})["cut"] = m.group(1)
    elif m := re.match(r"^You (fry|roast|grill) the (.+) with the (.+?)\.", text):
        k.processed.setdefault(m.group(2), {"cut": None, "cook": None})["cook"] = m.group(1)
    elif text.startswith("Adding the meal to your inventory."):
        k.meal = "ready"
        for s in k.recipe or ():
            k.holding.discard(s.ingredient)
    elif text.startswith("You eat the meal."):
        k.meal = "eaten"
    _symmetry(k)


def knowledge_from_history(kind: str, history: Iterable[HistoryEntry]) -> Knowledge:
    k = Knowledge(kind)
    for entry in history:
        update(k, entry)
    return k


def final_goal(kind: str) -> frozenset[Literal]:
    return frozenset({Literal(Atom("has-coin" if kind == "coin" else "meal-eaten", ()))})


def empty_problem(kind: str) -> Problem:
    return Problem(f"{kind}-episode", DOMAIN_NAMES[kind], goal=final_goal(kind))


def _room_obj(k: Knowledge, room: str, d: str) -> str:
    dest = k.exits.get((room, d))
    return obj(dest) if dest is not None else placeholder(room, d)


def to_problem(k: Knowledge) -> Problem:
    A = lambda p, *args: Atom(p, tuple(args))  # noqa: E731
    objects: dict[str, str] = {obj(r): "room" for r in k.rooms}
    objects.update({d: "direction" for d in DIRECTIONS})
    init: set[Atom] = set()
    if k.current is not None:
        init.add(A("at", obj(k.current)))
    init |= {A("visited", obj(r)) for r in k.visited}
    for (room, d), dest in k.exits.items():
        target = _room_obj(k, room, d)
        objects.setdefault(target, "room")
        init.add(A("connected", obj(room), target, d))
        if k.door.get((room, d)) == "closed":
            init.add(A("closed-door", obj(room), target))
    if k.kind == "coin":
        if k.coin_room:
            init.add(A("coin-in", obj(k.coin_room)))
        if k.has_coin:
            init.add(A("has-coin"))
        return Problem(f"{k.kind}-episode", DOMAIN_NAMES[k.kind], tuple(objects.items()), init, final_goal(k.kind))

    for c, room in k.containers.items():
        objects[obj(c)] = "container"
        init.add(A("located", obj(c), obj(room)))
        if c in k.closed:
            init.add(A("closed", obj(c)))
    for a, room in k.appliances.items():
        objects[obj(a)] = a
        init.add(A("located", obj(a), obj(room)))
    if k.cookbook_room is not None:
        objects["cookbook"] = "cookbook"
        init.add(A("located", "cookbook", obj(k.cookbook_room)))
    if "kitchen" in k.rooms:
        init.add(A("is-kitchen", "kitchen"))
    for item in k.items:
        objects[obj(item)] = "item"
    if "knife" in k.items:
        init.add(A("is-knife", "knife"))
    init |= {A("in", obj(i), obj(r)) for i, r in k.items_in_room.items()}
    init |= {A("inside", obj(i), obj(c)) for i, c in k.items_inside.items()}
    init |= {A("holding", obj(i)) for i in k.holding}
    for step in k.recipe or ():
        o = obj(step.ingredient)
        init.add(A("in-recipe", o))
        for verb in (step.cut, step.cook):
            if verb:
                init.add(A(f"recipe-{verb}", o))
        if step.cut and not k.processed.get(step.ingredient, {}).get("cut"):
            init.add(A("must-cut", o))
    for item, done in k.processed.items():
        o = obj(item)
        if done["cut"]:
            init |= {A("is-cut", o), A(PAST[done["cut"]], o)}
        if done["cook"]:
            init |= {A("is-cooked", o), A(PAST[done["cook"]], o)}
    if k.recipe is not None:
        init.add(A("recipe-read"))
    if k.meal == "ready":
        init.add(A("meal-ready"))
    elif k.meal == "eaten":
        init.add(A("meal-eaten"))
    return Problem(f"{k.kind}-episode", DOMAIN_NAMES[k.kind], tuple(objects.items()), init, final_goal(k.kind))


def problem_from_history(kind: str, history: Sequence[HistoryEntry]) -> Problem:
    return to_problem(knowledge_from_history(kind, history))
