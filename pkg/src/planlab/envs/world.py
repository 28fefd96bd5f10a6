"""World state and seeded world generation."""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass, field

from .config import ConfigError, EnvConfig

DIRECTIONS = ("north", "south", "east", "west")
OPPOSITE = {"north": "south", "south": "north", "east": "west", "west": "east"}
DELTA = {"north": (0, 1), "south": (0, -1), "east": (1, 0), "west": (-1, 0)}

CUTS = ("slice", "dice", "chop")
COOKS = ("fry", "roast", "grill")
APPLIANCE_METHOD = {"stove": "fry", "oven": "roast", "barbeque": "grill"}
PAST = {"slice": "sliced", "dice": "diced", "chop": "chopped", "fry": "fried", "roast": "roasted", "grill": "grilled"}

DOOR_NAMES = (
    "plain door",
    "wood door",
    "sliding patio door",
    "screen door",
    "frosted-glass door",
    "fiberglass door",
    "barn door",
    "sliding door",
    "front door",
    "commercial glass door",
)


@dataclass(frozen=True)
class Furniture:
    name: str
    kind: str  # surface | container | appliance
    article: str = "a"


def _f(code: str) -> Furniture:
    """``name:kind[:article]`` shorthand for the catalogue below."""
    parts = code.split(":")
    return Furniture(parts[0], parts[1], parts[2] if len(parts) > 2 else "a")


ROOM_FURNITURE: dict[str, tuple[Furniture, ...]] = {
    "kitchen": tuple(map(_f, (
        "stove:appliance", "oven:appliance:an", "fridge:container", "counter:surface",
        "kitchen cupboard:container", "cutlery drawer:container", "trash can:container",
        "dishwasher:container", "dining chair:surface",
    ))),
    "corridor": tuple(map(_f, (
        "key holder:surface", "shoe cabinet:container", "umbrella stand:surface",
        "hat rack:surface", "coat hanger:surface",
    ))),
    "bedroom": tuple(map(_f, (
        "dressing table:surface", "desk chair:surface", "desk:surface", "chest of drawers:container",
        "wardrobe:container", "night stand:surface", "bed:surface",
    ))),
    "backyard": tuple(map(_f, (
        "barbeque:appliance", "workbench:surface", "patio chair:surface", "patio table:surface",
        "clothes line:surface", "garden:surface",
    ))),
    "pantry": tuple(map(_f, ("folding chair:surface", "shelf:surface"))),
    "living room": tuple(map(_f, ("sofa:surface", "bookcase:surface", "end table:surface", "tv cabinet:container"))),
    "bathroom": tuple(map(_f, ("toilet:surface", "bath mat:surface", "bathroom cabinet:container", "towel rail:surface"))),
    "laundry room": tuple(map(_f, (
        "washing machine:container", "laundry basket:container", "clothes drier:container", "suspended shelf:surface",
    ))),
    "driveway": tuple(map(_f, ("toolbox:container", "recycling bin:container"))),
    "street": tuple(map(_f, ("bench:surface", "mailbox:container"))),
    "supermarket": tuple(map(_f, ("showcase:container", "checkout counter:surface"))),
    "garage": tuple(map(_f, ("tool rack:surface", "storage bin:container"))),
    "study": tuple(map(_f, ("writing desk:surface", "filing cabinet:container"))),
    "cellar": tuple(map(_f, ("wine rack:surface", "old chest:container"))),
}
ROOM_NAMES = tuple(ROOM_FURNITURE)


@dataclass(frozen=True)
class ItemKind:
    name: str
    article: str = "a"
    cuttable: bool = False
    cookable: bool = False


INGREDIENTS = (
    ItemKind("black pepper", "some"),
    ItemKind("salt", "some"),
    ItemKind("block of cheese", "a", cuttable=True),
    ItemKind("red apple", "a", cuttable=True),
    ItemKind("yellow potato", "a", cuttable=True, cookable=True),
    ItemKind("red potato", "a", cuttable=True, cookable=True),
    ItemKind("purple potato", "a", cuttable=True, cookable=True),
    ItemKind("carrot", "a", cuttable=True, cookable=True),
    ItemKind("chicken breast", "a", cuttable=True, cookable=True),
    ItemKind("red onion", "a", cuttable=True, cookable=True),
    ItemKind("yellow bell pepper", "a", cuttable=True, cookable=True),
    ItemKind("banana", "a", cuttable=True),
    ItemKind("olive oil", "some"),
    ItemKind("milk", "some"),
)
INGREDIENT_BY_NAME = {k.name: k for k in INGREDIENTS}
KNIFE = ItemKind("knife")
COOKBOOK = ItemKind("cookbook")
COIN = ItemKind("coin")


@dataclass(frozen=True)
class RecipeStep:
    ingredient: str
    cut: str | None = None
    cook: str | None = None


@dataclass
class Door:
    name: str
    is_open: bool = False


@dataclass
class WorldState:
    """Full simulator state. Static layout plus the mutable parts advanced by ``step``."""

    config: EnvConfig
    rooms: tuple[str, ...]
    positions: dict[str, tuple[int, int]]
    exits: dict[tuple[str, str], str]
    doors: dict[frozenset, Door]
    furniture: dict[str, tuple[Furniture, ...]]
    items: dict[str, ItemKind]
    # location: ("on", surface) | ("in", container) | ("floor", room) | ("held",) | ("gone",)
    location: dict[str, tuple]
    open_containers: set[str] = field(default_factory=set)
    recipe: tuple[RecipeStep, ...] = ()
    processed: dict[str, dict[str, str | None]] = field(default_factory=dict)
    agent: str = ""
    visited: set[str] = field(default_factory=set)
    recipe_read: bool = False
    meal: str = "none"  # none | ready | eaten
    steps: int = 0
    status: str = "running"  # running | won | lost

    def clone(self) -> "WorldState":
        return copy.deepcopy(self)

    # -- lookups -----------------------------------------------------------
    def furniture_room(self, name: str) -> str | None:
        for room, things in self.furniture.items():
            if any(f.name == name for f in things):
                return room
        return None

    def furniture_named(self, name: str) -> Furniture | None:
        for things in self.furniture.values():
            for f in things:
                if f.name == name:
                    return f
        return None

    def item_room(self, item: str) -> str | None:
        loc = self.location[item]
        if loc[0] == "floor":
            return loc[1]
        if loc[0] in ("on", "in"):
            return self.furniture_room(loc[1])
        return None

    def door_between(self, a: str, b: str) -> Door | None:
        return self.doors.get(frozenset((a, b)))

    def exits_of(self, room: str) -> list[tuple[str, str]]:
        return [(d, self.exits[(room, d)]) for d in DIRECTIONS if (room, d) in self.exits]

    def held(self) -> list[str]:
        return [i for i, loc in self.location.items() if loc[0] == "held"]

    def recipe_step(self, item: str) -> RecipeStep | None:
        for step in self.recipe:
            if step.ingredient == item:
                return step
        return None


def _spanning_grid(rng: random.Random, n: int, extra_p: float) -> tuple[list[tuple[int, int]], set[tuple]]:
    """Random spanning tree grown on a 4-neighbour grid, plus a few extra edges."""
    cells = [(0, 0)]
    taken = {(0, 0)}
    edges: set[tuple] = set()
    while len(cells) < n:
        base = rng.choice(cells)
        d = rng.choice(DIRECTIONS)
        dx, dy = DELTA[d]
        nxt = (base[0] + dx, base[1] + dy)
        if nxt in taken:
            continue
        taken.add(nxt)
        cells.append(nxt)
        edges.add(frozenset((base, nxt)))
    for c in cells:
        for d in ("north", "east"):
            dx, dy = DELTA[d]
            other = (c[0] + dx, c[1] + dy)
            pair = frozenset((c, other))
            if other in taken and pair not in edges and rng.random() < extra_p:
                edges.add(pair)
    return cells, edges


def _direction(a: tuple[int, int], b: tuple[int, int]) -> str:
    delta = (b[0] - a[0], b[1] - a[1])
    return next(d for d, v in DELTA.items() if v == delta)


def _wire(rng, names, cells, edges, door_p) -> tuple[dict, dict, dict]:
    positions = dict(zip(names, cells))
    by_cell = {c: r for r, c in positions.items()}
    exits: dict[tuple[str, str], str] = {}
    doors: dict[frozenset, Door] = {}
    for pair in sorted(edges, key=lambda p: sorted(p)):
        a, b = sorted(pair)
        ra, rb = by_cell[a], by_cell[b]
        d = _direction(a, b)
        exits[(ra, d)] = rb
        exits[(rb, OPPOSITE[d])] = ra
        if rng.random() < door_p:
            doors[frozenset((ra, rb))] = Door(rng.choice(DOOR_NAMES))
    return positions, exits, doors


def farthest_rooms(start: str, exits: dict[tuple[str, str], str]) -> list[str]:
    """Rooms at the largest number of moves from ``start``, sorted by name."""
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for room in frontier:
            for d in DIRECTIONS:
                dest = exits.get((room, d))
                if dest is not None and dest not in dist:
                    dist[dest] = dist[room] + 1
                    nxt.append(dest)
        frontier = nxt
    far = max(dist.values())
    return sorted(r for r, n in dist.items() if n == far and r != start)


def generate(cfg: EnvConfig) -> WorldState:
    if cfg.layout == "trajectory":
        return trajectory_world(cfg)
    if cfg.num_rooms > len(ROOM_NAMES):
        raise ConfigError(f"at most {len(ROOM_NAMES)} rooms are supported, got {cfg.num_rooms}")
    rng = random.Random(cfg.seed)
    cells, edges = _spanning_grid(rng, cfg.num_rooms, cfg.extra_edge_prob)
    if cfg.kind == "coin":
        names = rng.sample(ROOM_NAMES, cfg.num_rooms)
        positions, exits, doors = _wire(rng, names, cells, edges, cfg.door_prob)
        if cfg.coin_placement == "farthest":
            coin_room = rng.choice(farthest_rooms(names[0], exits))
        else:
            coin_room = rng.choice(names[1:])
        return WorldState(
            config=cfg,
            rooms=tuple(names),
            positions=positions,
            exits=exits,
            doors=doors,
            furniture={r: () for r in names},
            items={"coin": COIN},
            location={"coin": ("floor", coin_room)},
            agent=names[0],
            visited={names[0]},
        )
    return _cooking(cfg, rng, cells, edges)


def _cooking(cfg: EnvConfig, rng: random.Random, cells, edges) -> WorldState:
    if cfg.num_ingredients > len(INGREDIENTS):
        raise ConfigError(f"at most {len(INGREDIENTS)} ingredients are supported")
    others = [r for r in ROOM_NAMES if r != "kitchen"]
    names = ["kitchen", *rng.sample(others, cfg.num_rooms - 1)]
    if cfg.difficulty == "hard" and "backyard" not in names:
        names[-1] = "backyard"
    positions, exits, doors = _wire(rng, names, cells, edges, cfg.door_prob)
    furniture = {r: ROOM_FURNITURE[r] for r in names}

    kinds = _pick_ingredients(rng, cfg)
    recipe = _make_recipe(rng, cfg, kinds, has_barbeque="backyard" in names)

    slots = [f.name for r in names for f in furniture[r] if f.kind != "appliance"]
    if not slots:
        raise ConfigError("no room can hold ingredients")
    items: dict[str, ItemKind] = {"knife": KNIFE}
    location: dict[str, tuple] = {"knife": ("on", "counter")}
    for k in kinds:
        slot = rng.choice(slots)
        kind = furniture_kind(furniture, slot)
        items[k.name] = k
        location[k.name] = ("in" if kind == "container" else "on", slot)
    items["cookbook"] = COOKBOOK
    location["cookbook"] = ("on", "counter")
    return WorldState(
        config=cfg,
        rooms=tuple(names),
        positions=positions,
        exits=exits,
        doors=doors,
        furniture=furniture,
        items=items,
        location=location,
        recipe=recipe,
        processed={k.name: {"cut": None, "cook": None} for k in kinds},
        agent="kitchen",
        visited={"kitchen"},
    )


def furniture_kind(furniture: dict[str, tuple[Furniture, ...]], name: str) -> str:
    for things in furniture.values():
        for f in things:
            if f.name == name:
                return f.kind
    raise KeyError(name)


def _pick_ingredients(rng: random.Random, cfg: EnvConfig) -> list[ItemKind]:
    n = cfg.num_ingredients
    while True:
        kinds = rng.sample(INGREDIENTS, n)
        if not any(k.cuttable for k in kinds):
            continue
        if cfg.difficulty == "hard" and not any(k.cookable for k in kinds):
            continue
        return kinds


def _make_recipe(rng: random.Random, cfg: EnvConfig, kinds: list[ItemKind], has_barbeque: bool) -> tuple[RecipeStep, ...]:
    cuts = {k.name: rng.choice(CUTS) for k in kinds if k.cuttable}
    cook: dict[str, str] = {}
    if cfg.difficulty == "hard":
        target = rng.choice([k for k in kinds if k.cookable])
        methods = COOKS if has_barbeque else ("fry", "roast")
        cook[target.name] = rng.choice(methods)
    return tuple(RecipeStep(k.name, cuts.get(k.name), cook.get(k.name)) for k in kinds)


def trajectory_world(cfg: EnvConfig) -> WorldState:
    """Fixed five-room house reproducing the reference cooking walkthrough."""
    positions = {
        "kitchen": (0, 0),
        "corridor": (-1, 0),
        "pantry": (0, -1),
        "bedroom": (-1, 1),
        "backyard": (-2, 0),
    }
    exits = {}
    for a, b, d in (
        ("kitchen", "corridor", "west"),
        ("kitchen", "pantry", "south"),
        ("corridor", "bedroom", "north"),
        ("corridor", "backyard", "west"),
    ):
        exits[(a, d)] = b
        exits[(b, OPPOSITE[d])] = a
    doors = {
        frozenset(("kitchen", "pantry")): Door("plain door"),
        frozenset(("corridor", "bedroom")): Door("wood door"),
        frozenset(("corridor", "backyard")): Door("sliding patio door"),
    }
    furniture = {r: ROOM_FURNITURE[r] for r in positions}
    recipe = (
        RecipeStep("black pepper"),
        RecipeStep("block of cheese", cut="slice"),
        RecipeStep("salt"),
        RecipeStep("red apple", cut="dice"),
        RecipeStep("yellow potato", cut="chop", cook="grill"),
    )
    items = {"knife": KNIFE}
    location: dict[str, tuple] = {"knife": ("on", "counter")}
    for name, where in (
        ("red apple", ("on", "counter")),
        ("yellow potato", ("on", "counter")),
        ("block of cheese", ("in", "fridge")),
        ("black pepper", ("on", "shelf")),
        ("salt", ("on", "shelf")),
    ):
        items[name] = INGREDIENT_BY_NAME[name]
        location[name] = where
    items["cookbook"] = COOKBOOK
    location["cookbook"] = ("on", "counter")
    return WorldState(
        config=cfg,
        rooms=tuple(positions),
        positions=positions,
        exits=exits,
        doors=doors,
        furniture=furniture,
        items=items,
        location=location,
        recipe=recipe,
        processed={s.ingredient: {"cut": None, "cook": None} for s in recipe},
        agent="kitchen",
        visited={"kitchen"},
    )
