"""
flownet - dynamical distribution networks under saturated PI control.

Simulation and analysis of flows on directed graphs: connectivity predicates,
cycle covers, closed-loop dynamics, Lyapunov checks and convergence verdicts.
"""

__version__ = "1.0.0"
