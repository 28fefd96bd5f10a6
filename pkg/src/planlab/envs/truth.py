"""Full-information snapshot of a world and its PDDL encoding."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..pddl import Atom, Literal, Problem, render_problem
from .world import PAST, WorldState

PLACEHOLDER_PREFIX = "unk-"


def obj(name: str) -> str:
    """PDDL object name for a display name (``block of cheese`` -> ``block_of_cheese``)."""
    return name.replace(" ", "_")


def display(name: str) -> str:
    return name.replace("_", " ")


def placeholder(room: str, direction: str) -> str:
    return f"{PLACEHOLDER_PREFIX}{obj(room)}-{direction}"


def domain_text(kind: str) -> str:
    return resources.files("planlab.assets.domains").joinpath(f"{kind}.pddl").read_text()


@dataclass(frozen=True)
class GroundTruth:
    """Read-only view of everything in the world, including unvisited rooms."""

    kind: str
    rooms: tuple[str, ...]
    exits: dict
    doors: dict  # frozenset({a, b}) -> (door name, is_open)
    agent: str
    visited: frozenset
    item_rooms: dict  # item -> room it lies in, None when held or consumed
    item_location: dict
    containers: dict  # container -> (room, is_open)
    appliances: dict  # appliance -> room
    recipe: tuple
    processed: dict
    recipe_read: bool
    meal: str
    objects: tuple[tuple[str, str], ...]
    atoms: frozenset

    @property
    def coin_room(self) -> str | None:
        return self.item_rooms.get("coin")

    def resolve(self, name: str) -> str:
        """Map a frontier placeholder to the room object actually behind that exit."""
        if not name.startswith(PLACEHOLDER_PREFIX):
            return name
        body = name[len(PLACEHOLDER_PREFIX):]
        room_obj, _, direction = body.rpartition("-")
        room = display(room_obj)
        dest = self.exits.get((room, direction))
        return obj(dest) if dest else name

    def holds(self, a: Atom) -> bool:
        return Atom(a.predicate, tuple(self.resolve(x) for x in a.args)) in self.atoms

    def final_goal(self) -> frozenset[Literal]:
        if self.kind == "coin":
            return frozenset({Literal(Atom("has-coin", ()))})
        return full_meal_goal(self.recipe)


def full_meal_goal(recipe) -> frozenset[Literal]:
    """Eat the meal while holding every ingredient processed as the recipe asks."""
    goal = {Literal(Atom("meal-eaten", ()))}
    for step in recipe:
        name = obj(step.ingredient)
        goal.add(Literal(Atom("holding", (name,))))
        for verb in (step.cut, step.cook):
            if verb:
                goal.add(Literal(Atom(PAST[verb], (name,))))
    return frozenset(goal)


def _atoms(w: WorldState) -> tuple[list[tuple[str, str]], set[Atom]]:
    A = lambda p, *args: Atom(p, tuple(args))  # noqa: E731
    objects = [(obj(r), "room") for r in w.rooms]
    objects += [(d, "direction") for d in ("north", "south", "east", "west")]
    atoms: set[Atom] = {A("at", obj(w.agent))}
    atoms |= {A("visited", obj(r)) for r in w.visited}
    for (room, d), dest in w.exits.items():
        atoms.add(A("connected", obj(room), obj(dest), d))
        door = w.door_between(room, dest)
        if door is not None and not door.is_open:
            atoms.add(A("closed-door", obj(room), obj(dest)))
    if w.config.kind == "coin":
        loc = w.location["coin"]
        if loc[0] == "floor":
            atoms.add(A("coin-in", obj(loc[1])))
        elif loc[0] == "held":
            atoms.add(A("has-coin"))
        return objects, atoms

    for room, things in w.furniture.items():
        for f in things:
            if f.kind == "container":
                objects.append((obj(f.name), "container"))
                atoms.add(A("located", obj(f.name), obj(room)))
                if f.name not in w.open_containers:
                    atoms.add(A("closed", obj(f.name)))
            elif f.kind == "appliance":
                objects.append((obj(f.name), f.name))
                atoms.add(A("located", obj(f.name), obj(room)))
    atoms.add(A("is-kitchen", "kitchen"))
    for item, loc in w.location.items():
        o = obj(item)
        if item == "cookbook":
            objects.append((o, "cookbook"))
            room = w.item_room(item)
            if room:
                atoms.add(A("located", o, obj(room)))
            continue
        objects.append((o, "item"))
        if loc[0] == "held":
            atoms.add(A("holding", o))
        elif loc[0] == "on":
            atoms.add(A("in", o, obj(w.furniture_room(loc[1]))))
        elif loc[0] == "in":
            atoms.add(A("inside", o, obj(loc[1])))
    atoms.add(A("is-knife", "knife"))
    for step in w.recipe:
        o = obj(step.ingredient)
        done = w.processed[step.ingredient]
        atoms.add(A("in-recipe", o))
        for verb in (step.cut, step.cook):
            if verb:
                atoms.add(A(f"recipe-{verb}", o))
        if step.cut and not done["cut"]:
            atoms.add(A("must-cut", o))
    for item, done in w.processed.items():
        o = obj(item)
        if done["cut"]:
            atoms |= {A("is-cut", o), A(PAST[done["cut"]], o)}
        if done["cook"]:
            atoms |= {A("is-cooked", o), A(PAST[done["cook"]], o)}
    if w.recipe_read:
        atoms.add(A("recipe-read"))
    if w.meal == "ready":
        atoms.add(A("meal-ready"))
    if w.meal == "eaten":
        atoms.add(A("meal-eaten"))
    return objects, atoms


def oracle_view(w: WorldState) -> GroundTruth:
    objects, atoms = _atoms(w)
    containers = {}
    appliances = {}
    for room, things in w.furniture.items():
        for f in things:
            if f.kind == "container":
                containers[f.name] = (room, f.name in w.open_containers)
            elif f.kind == "appliance":
                appliances[f.name] = room
    return GroundTruth(
        kind=w.config.kind,
        rooms=tuple(w.rooms),
        exits=dict(w.exits),
        doors={k: (d.name, d.is_open) for k, d in w.doors.items()},
        agent=w.agent,
        visited=frozenset(w.visited),
        item_rooms={i: w.item_room(i) for i in w.items},
        item_location=dict(w.location),
        containers=containers,
        appliances=appliances,
        recipe=tuple(w.recipe),
        processed={k: dict(v) for k, v in w.processed.items()},
        recipe_read=w.recipe_read,
        meal=w.meal,
        objects=tuple(objects),
        atoms=frozenset(atoms),
    )


def gold_problem(w: WorldState) -> Problem:
    gt = oracle_view(w)
    kind = w.config.kind
    return Problem(
        name=f"{kind}-seed-{w.config.seed}",
        domain_name="coin-collector" if kind == "coin" else "cooking-world",
        objects=gt.objects,
        init=gt.atoms,
        goal=gt.final_goal(),
    )


def export_pddl(w: WorldState) -> tuple[str, str]:
    """Gold domain and problem text for the full world state."""
    return domain_text(w.config.kind), render_problem(gold_problem(w))

