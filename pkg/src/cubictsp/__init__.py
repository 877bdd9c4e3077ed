"""TSP tours on cubic graphs via cycle covers, Eulerian subgraph covers and
chorded 6-cycle reductions, with exact oracles for checking them."""

from .barnette import barnette_tour
from .cover import best_tour, main_bound
from .general import solve_general, solve_two_connected, subtour_lower_bound
from .graph import Graph, GraphError, Tour, parse_edge_list, read_edge_list
from .matching import decompose_third, verify_distribution
from .reducer import lift_tour, reduce_fully

__all__ = [
    "Graph", "GraphError", "Tour", "barnette_tour", "best_tour", "decompose_third", "lift_tour",
    "main_bound", "parse_edge_list", "read_edge_list", "reduce_fully", "solve_general",
    "solve_two_connected", "subtour_lower_bound", "verify_distribution",
]
