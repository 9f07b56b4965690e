"""Weak asymptotic solution of shock-wave formation for u_t + f(u)_x = 0.

Typical use::

    from shockform import burgers_standard, WeakAsymptoticSolution
    s = burgers_standard()
    sol = WeakAsymptoticSolution(s, eps=0.05)
    sol(x, t)
"""

from .scenario import (FluxModel, Scenario, ScenarioError, build_scenario, burgers_standard,
                       exponential_standard, load_scenario, parse_scenario)
from .mollifier import BTable, MollifierPair, default_table
from .dynamics import solve_rho
from .characteristics import CharacteristicField, CharacteristicTables
from .phases import PhaseFunctions, Trajectories
from .solution import ReferenceSolution, WeakAsymptoticSolution, sample_profile

__all__ = [
    "FluxModel", "Scenario", "ScenarioError", "build_scenario", "burgers_standard",
    "exponential_standard", "load_scenario", "parse_scenario", "BTable", "MollifierPair",
    "default_table", "solve_rho", "CharacteristicField", "CharacteristicTables",
    "PhaseFunctions", "Trajectories", "ReferenceSolution", "WeakAsymptoticSolution",
    "sample_profile",
]
__version__ = "0.1.0"
