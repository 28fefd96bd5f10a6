"""planlab: a PDDL toolkit, BFS planner, seeded text games and an agent that
keeps a problem file up to date while it explores."""

__version__ = "0.1.0"
