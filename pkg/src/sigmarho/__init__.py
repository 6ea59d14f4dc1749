"""Exact solvers and kernels for [sigma, rho]-domination problems."""

from .domination import (
    NumberSet,
    SigmaRhoSpec,
    brute_force,
    brute_force_weighted,
    is_sigma_rho_dominating,
    preset,
)
from .graph import Graph, Modulator, WeightedGraph, parse_graph, read_graph

__all__ = [
    "Graph",
    "Modulator",
    "NumberSet",
    "SigmaRhoSpec",
    "WeightedGraph",
    "brute_force",
    "brute_force_weighted",
    "is_sigma_rho_dominating",
    "parse_graph",
    "preset",
    "read_graph",
]
