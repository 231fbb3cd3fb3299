"""Distance spectral radius of graphs with diameter at most two.

Two routes to ``rho``: power iteration on the BFS distance matrix, and the
secular equation ``Psi(rho + 1) = 1`` built from closed-form Phi-functions of
the complement's path and cycle components.  On top of them sit the
extremal construction for a given edge count and three verification engines.
"""

__version__ = "0.1.0"

from .errors import (CapExceededError, ContractError, ConvergenceError, DisconnectedGraphError,
                     DistSpecError, DomainError, ParseError, WalkOverflowError)
from .graph import (Graph, all_pairs_distances, as_graph, complement, components, cycle_graph,
                    diameter, disjoint_union, from_graph6, parse_graph, path_graph,
                    serialize_graph, to_graph6)
from .spectral import (SpectralResult, adjacency_spectral_radius, distance_spectral_radius,
                       dominant_eigenvalue)
from .phipsi import (ComplementConfig, compare_rho, phi_cycle, phi_path, phi_path_increment,
                     psi, rho_via_secular)
from .extremal import (ExtremalSpec, balanced_partition, balancing_gain, build_extremal_graph,
                       params_from_m, rebalance)
from .enumerate import (VerificationReport, edge_switch_counterexample, enumerate_configs,
                        verify_exhaustive, verify_structured)
from .walks import psi_via_neumann, verify_large_s, walk_counts, walk_dominance_check
from .estimator import DistanceSpectralRadius
