"""Observation templates and the step function."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .config import EnvConfig
from .world import (
    APPLIANCE_METHOD,
    CUTS,
    DIRECTIONS,
    PAST,
    WorldState,
    generate,
)

LEADS = ("In one part of the room you see", "There is also", "You also see", "In another part of the room you see")


class EpisodeFinished(RuntimeError):
    """Raised when stepping an episode that already ended."""


@dataclass(frozen=True)
class Observation:
    text: str
    permitted_actions: tuple[str, ...]


@dataclass(frozen=True)
class StepOutcome:
    kind: str  # ok | invalid | won | lost
    reason: str = ""

    @property
    def terminal(self) -> bool:
        return self.kind in ("won", "lost")

    def __str__(self) -> str:
        return f"{self.kind}({self.reason})" if self.reason else self.kind


OK = StepOutcome("ok")


def join_items(phrases: list[str]) -> str:
    """``a``, ``a, and b``, ``a, b, and c``: the serial style of the game text."""
    if len(phrases) == 1:
        return phrases[0]
    return ", ".join(phrases[:-1]) + ", and " + phrases[-1]


def item_phrase(w: WorldState, item: str) -> str:
    kind = w.items[item]
    raw = "raw " if kind.cookable and item in w.processed and not w.processed[item]["cook"] else ""
    return f"{kind.article} {raw}{item}"


def _contents(w: WorldState, furniture: str) -> list[str]:
    return [i for i, loc in w.location.items() if loc[0] in ("on", "in") and loc[1] == furniture]


def _furniture_sentence(w: WorldState, f) -> str:
    if f.kind == "appliance":
        return f"{f.article} {f.name}."
    inside = [item_phrase(w, i) for i in _contents(w, f.name)]
    if f.kind == "container":
        if f.name not in w.open_containers:
            return f"{f.article} {f.name} that is closed."
        if not inside:
            return f"{f.article} {f.name} that is open and empty."
        return f"{f.article} {f.name} that contains {join_items(inside)}."
    if not inside:
        return f"{f.article} {f.name}, that has nothing on it."
    return f"{f.article} {f.name} that has {join_items(inside)} on it."


def exits_text(w: WorldState, room: str) -> str:
    parts = []
    for d, dest in w.exits_of(room):
        door = w.door_between(room, dest)
        cap = d.capitalize()
        if door is None:
            parts.append(f"To the {cap} you see the {dest}.")
        elif door.is_open:
            parts.append(f"Through an open {door.name}, to the {cap} you see the {dest}.")
        else:
            parts.append(f"To the {cap} you see a closed {door.name}.")
    return " ".join(parts)


def describe_room(w: WorldState) -> str:
    room = w.agent
    sentences = [f"You are in the {room}."]
    for i, f in enumerate(w.furniture.get(room, ())):
        sentences.append(f"{LEADS[i % len(LEADS)]} {_furniture_sentence(w, f)}")
    if w.location.get("coin") == ("floor", room):
        sentences.append("On the floor you see a coin.")
    return " ".join(sentences) + "\n" + exits_text(w, room)


def inventory_text(w: WorldState) -> str:
    held = [item_phrase(w, i) for i in sorted(w.items) if w.location.get(i) == ("held",)]
    if w.meal == "ready":
        held.append("a meal")
    if not held:
        return "You are not carrying anything."
    return "You are carrying: " + join_items(held) + "."


def recipe_text(w: WorldState) -> str:
    directions = [f"{c} the {s.ingredient}" for s in w.recipe for c in [s.cut] if c]
    directions += [f"{s.cook} the {s.ingredient}" for s in w.recipe if s.cook]
    directions.append("prepare meal")
    return (
        "Gather all following ingredients and follow the directions to prepare this tasty meal.\n"
        "Ingredients:\n"
        f"  {', '.join(s.ingredient for s in w.recipe)}\n"
        "Directions:\n"
        f"  {', '.join(directions)}"
    )


# -- action parsing ------------------------------------------------------------

_PATTERNS = [
    ("move", re.compile(r"^move (north|south|east|west)$")),
    ("open-door", re.compile(r"^open door to (north|south|east|west)$")),
    ("close-door", re.compile(r"^close door to (north|south|east|west)$")),
    ("look", re.compile(r"^look around$")),
    ("inventory", re.compile(r"^inventory$")),
    ("examine", re.compile(r"^examine cookbook$")),
    ("take-coin", re.compile(r"^take coin$")),
    ("prepare", re.compile(r"^prepare meal$")),
    ("eat", re.compile(r"^eat meal$")),
    ("cut", re.compile(r"^(slice|dice|chop) (.+)$")),
    ("cook", re.compile(r"^cook (.+) in (.+)$")),
    ("take", re.compile(r"^take (.+)$")),
    ("open", re.compile(r"^open (.+)$")),
]


def normalize_action(text: str) -> str:
    return " ".join(text.strip().lower().split())


def parse_action(text: str) -> tuple[str, tuple[str, ...]] | None:
    t = normalize_action(text)
    for name, pat in _PATTERNS:
        m = pat.match(t)
        if m:
            return name, m.groups()
    return None


# -- validity --------------------------------------------------------------------


def _visible_here(w: WorldState, item: str) -> bool:
    loc = w.location.get(item)
    if loc is None:
        return False
    if loc[0] == "floor":
        return loc[1] == w.agent
    if loc[0] == "on":
        return w.furniture_room(loc[1]) == w.agent
    if loc[0] == "in":
        return loc[1] in w.open_containers and w.furniture_room(loc[1]) == w.agent
    return False


def _appliance_here(w: WorldState, name: str) -> bool:
    f = w.furniture_named(name)
    return f is not None and f.kind == "appliance" and w.furniture_room(name) == w.agent


def check(w: WorldState, action: str) -> str | None:
    """Reason the action is invalid in ``w``, or None if the game accepts it."""
    parsed = parse_action(action)
    if parsed is None:
        return "unknown action"
    verb, args = parsed
    coin = w.config.kind == "coin"
    if verb == "move":
        dest = w.exits.get((w.agent, args[0]))
        if dest is None:
            return "no exit"
        door = w.door_between(w.agent, dest)
        if door is not None and not door.is_open:
            return "closed door"
        return None
    if verb == "open-door":
        dest = w.exits.get((w.agent, args[0]))
        door = w.door_between(w.agent, dest) if dest else None
        if door is None:
            return "no door"
        return "already open" if door.is_open else None
    if verb == "close-door":
        dest = w.exits.get((w.agent, args[0]))
        door = w.door_between(w.agent, dest) if dest else None
        if door is None:
            return "no door"
        return None if door.is_open else "already closed"
    if verb == "take-coin":
        return None if coin and _visible_here(w, "coin") else "no coin here"
    if verb in ("look", "inventory"):
        return None
    if coin:
        return "unknown action"
    if verb == "examine":
        ok = _visible_here(w, "cookbook") or w.location.get("cookbook") == ("held",)
        return None if ok else "no cookbook here"
    if verb == "prepare":
        if w.meal != "none":
            return "meal already prepared"
        if w.agent != "kitchen":
            return "not in the kitchen"
        missing = [s.ingredient for s in w.recipe if w.location[s.ingredient] != ("held",)]
        return "missing ingredients" if missing else None
    if verb == "eat":
        return None if w.meal == "ready" else "no meal"
    if verb == "cut":
        item = args[1]
        if w.location.get(item) != ("held",):
            return "not holding that"
        kind = w.items[item]
        if not kind.cuttable:
            return "cannot cut that"
        if w.location.get("knife") != ("held",):
            return "no knife"
        if w.processed[item]["cut"]:
            return "already cut"
        return None
    if verb == "cook":
        item, appliance = args
        if w.location.get(item) != ("held",):
            return "not holding that"
        if not _appliance_here(w, appliance):
            return "no such appliance here"
        if not w.items[item].cookable:
            return "cannot cook that"
        if w.processed[item]["cook"]:
            return "already cooked"
        return None
    if verb == "take":
        item = args[0]
        if item not in w.items or item in ("cookbook", "coin"):
            return "cannot take that"
        if not _visible_here(w, item):
            return "not here"
        if w.meal != "none":
            return "meal already prepared"
        return None
    if verb == "open":
        f = w.furniture_named(args[0])
        if f is None or f.kind != "container" or w.furniture_room(f.name) != w.agent:
            return "no container here"
        return "already open" if f.name in w.open_containers else None
    return "unknown action"


def candidate_actions(w: WorldState) -> list[str]:
    """Every action string the game vocabulary can form in ``w``, in a fixed order."""
    out = ["look around", "inventory"]
    if w.config.kind == "cooking":
        out.append("examine cookbook")
    for d in DIRECTIONS:
        out.append(f"move {d}")
    for d in DIRECTIONS:
        out.append(f"open door to {d}")
    for d in DIRECTIONS:
        out.append(f"close door to {d}")
    if w.config.kind == "coin":
        out.append("take coin")
        return out
    for things in w.furniture.values():
        for f in things:
            if f.kind == "container":
                out.append(f"open {f.name}")
    takeable = [i for i in w.items if i not in ("cookbook", "coin")]
    out += [f"take {i}" for i in takeable]
    food = [i for i in takeable if i != "knife"]
    out += [f"{c} {i}" for i in food for c in CUTS]
    appliances = [f.name for things in w.furniture.values() for f in things if f.kind == "appliance"]
    out += [f"cook {i} in {a}" for i in food for a in appliances]
    out += ["prepare meal", "eat meal"]
    return out


def permitted_actions(w: WorldState) -> tuple[str, ...]:
    if w.status != "running":
        return ()
    return tuple(a for a in candidate_actions(w) if check(w, a) is None)


def observe(w: WorldState, text: str) -> Observation:
    return Observation(text, permitted_actions(w))


def new_episode(cfg: EnvConfig) -> tuple[WorldState, Observation]:
    w = generate(cfg)
    return w, observe(w, describe_room(w))


# -- transitions -----------------------------------------------------------------


def _lose(w: WorldState, text: str, reason: str) -> tuple[str, StepOutcome]:
    w.status = "lost"
    return f"{text} {reason.capitalize()}. You lost!", StepOutcome("lost", reason)


def step(w: WorldState, action: str) -> tuple[WorldState, Observation, StepOutcome]:
    """Advance a copy of ``w`` by one action; ``w`` itself is never modified."""
    if w.status != "running":
        raise EpisodeFinished(f"episode already {w.status}")
    w = w.clone()
    w.steps += 1
    reason = check(w, action)
    if reason is not None:
        return w, observe(w, _invalid_text(reason)), StepOutcome("invalid", reason)
    text, outcome = _execute(w, *parse_action(action))
    return w, observe(w, text), outcome


_INVALID_TEXT = {
    "closed door": "You can't move there, the door is closed.",
    "no exit": "You can't move there.",
    "unknown action": "I don't understand that.",
}


def _invalid_text(reason: str) -> str:
    return _INVALID_TEXT.get(reason, f"You can't do that ({reason}).")


def _execute(w: WorldState, verb: str, args: tuple[str, ...]) -> tuple[str, StepOutcome]:
    if verb == "move":
        w.agent = w.exits[(w.agent, args[0])]
        w.visited.add(w.agent)
        return describe_room(w), OK
    if verb == "open-door":
        dest = w.exits[(w.agent, args[0])]
        door = w.door_between(w.agent, dest)
        door.is_open = True
        return f"You open the {door.name}, revealing the {dest}.", OK
    if verb == "close-door":
        dest = w.exits[(w.agent, args[0])]
        door = w.door_between(w.agent, dest)
        door.is_open = False
        return f"You close the {door.name} to the {dest}.", OK
    if verb == "take-coin":
        w.location["coin"] = ("held",)
        w.status = "won"
        return "You take the coin. You won!", StepOutcome("won")
    if verb == "look":
        return describe_room(w), OK
    if verb == "inventory":
        return inventory_text(w), OK
    if verb == "examine":
        w.recipe_read = True
        return recipe_text(w), OK
    if verb == "take":
        w.location[args[0]] = ("held",)
        return f"You take the {args[0]}.", OK
    if verb == "open":
        name = args[0]
        w.open_containers.add(name)
        inside = [item_phrase(w, i) for i in _contents(w, name)]
        if inside:
            return f"You open the {name}. The {name} contains {join_items(inside)}.", OK
        return f"You open the {name}. It's empty inside.", OK
    if verb == "cut":
        cut, item = args
        text = f"You {cut} the {item}."
        w.processed[item]["cut"] = cut
        want = w.recipe_step(item)
        if want is None or want.cut is None:
            return _lose(w, text, f"the recipe does not ask to {cut} the {item}")
        if want.cut != cut:
            return _lose(w, text, f"the recipe asks to {want.cut} the {item}")
        return text, OK
    if verb == "cook":
        item, appliance = args
        method = APPLIANCE_METHOD[appliance]
        text = f"You {method} the {item} with the {appliance}."
        done = w.processed[item]
        done["cook"] = method
        want = w.recipe_step(item)
        if want is None or want.cook is None:
            return _lose(w, text, f"the recipe does not ask to cook the {item}")
        if want.cook != method:
            return _lose(w, text, f"the {item} should be {PAST[want.cook]}, not {PAST[method]}")
        if want.cut and not done["cut"]:
            return _lose(w, text, f"the {item} had to be {PAST[want.cut]} before cooking")
        return text, OK
    if verb == "prepare":
        for s in w.recipe:
            done = w.processed[s.ingredient]
            if done["cut"] != s.cut or done["cook"] != s.cook:
                return _lose(w, "You prepare the meal.", f"the {s.ingredient} was not processed as the recipe asks")
        for s in w.recipe:
            w.location[s.ingredient] = ("gone",)
        w.meal = "ready"
        return "Adding the meal to your inventory.", OK
    if verb == "eat":
        w.meal = "eaten"
        w.status = "won"
        return "You eat the meal.  It is delicious.", StepOutcome("won")
    raise AssertionError(verb)  # check() admits only the verbs above
