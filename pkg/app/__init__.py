"""Quest Card RL - actor-critic agents and learning curricula for a cooperative card game."""

__version__ = "1.0.0"
