"""Command implementations behind the ``mkv_census`` entry script."""

from .runner import cmd_converge, cmd_fixed_points, cmd_langevin, cmd_simulate, cmd_stability

__all__ = ["cmd_converge", "cmd_fixed_points", "cmd_langevin", "cmd_simulate", "cmd_stability"]
