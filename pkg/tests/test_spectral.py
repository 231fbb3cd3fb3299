import math

import numpy as np
import pytest

from distspec.errors import ContractError, ConvergenceError, DisconnectedGraphError
from distspec.graph import (adjacency_matrix, all_pairs_distances, complement, complete_graph,
                            cycle_graph, disjoint_union, empty_graph, path_graph)
from distspec.phipsi import ComplementConfig
from distspec.spectral import (adjacency_spectral_radius, distance_spectral_radius,
                               dominant_eigenvalue, dominant_eigenvalue_batch)
from oracles import rho_of_complement_config, rho_p3


def test_jminusi():
    r = dominant_eigenvalue(np.ones((4, 4)) - np.eye(4))
    assert abs(r.value - 3.0) < 1e-12


def test_p3_against_char_poly():
    d = all_pairs_distances(path_graph(3)).to_array()
    r = dominant_eigenvalue(d)
    assert abs(r.value - rho_p3()) < 1e-11
    assert abs(rho_p3() - 2.732050808) < 1e-9
    assert (r.eigvec > 0).all()


def test_bipartite_adjacency():
    # C6 has -2 in its spectrum as well; the shift keeps power iteration honest
    r = dominant_eigenvalue(adjacency_matrix(cycle_graph(6), dtype=float))
    assert abs(r.value - 2.0) < 1e-11


def test_residual_certificate():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.random((8, 8))
        m = a + a.T
        r = dominant_eigenvalue(m)
        assert r.residual <= 1e-12 * np.abs(m).sum(axis=1).max()
        assert abs(r.value - np.linalg.eigvalsh(m)[-1]) < 1e-9


def test_contract_errors():
    with pytest.raises(ContractError):
        dominant_eigenvalue(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(ContractError):
        dominant_eigenvalue(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(ContractError):
        dominant_eigenvalue(np.zeros((2, 3)))
    with pytest.raises(ConvergenceError) as exc:
        dominant_eigenvalue(np.ones((5, 5)) - np.eye(5) + np.diag([0, 0.1, 0, 0, 0]), max_iter=1)
    assert exc.value.best is not None


def test_disconnected_rejected():
    with pytest.raises(DisconnectedGraphError):
        distance_spectral_radius(empty_graph(3))


@pytest.mark.parametrize("text,want", [("C3+P4+P4", 11.65444), ("P3+P8", 11.65452),
                                       ("P5+P6", 11.65442)])
def test_n11_values(text, want):
    cfg = ComplementConfig.parse(text)
    r = distance_spectral_radius(complement(cfg.to_graph()))
    assert abs(r.value - want) < 1e-4
    assert abs(r.value - rho_of_complement_config(cfg.cycles, cfg.paths)) < 1e-10


def test_adjacency_radius():
    assert abs(adjacency_spectral_radius(cycle_graph(5)).value - 2) < 1e-11
    p4 = adjacency_spectral_radius(path_graph(4)).value
    assert abs(p4 - 2 * math.cos(math.pi / 5)) < 1e-11
    assert abs(p4 - np.linalg.eigvalsh(adjacency_matrix(path_graph(4), float))[-1]) < 1e-11
    assert abs(adjacency_spectral_radius(complete_graph(4)).value - 3) < 1e-11
    u = adjacency_spectral_radius(disjoint_union(path_graph(2), cycle_graph(4)))
    assert abs(u.value - 2) < 1e-11 and u.eigvec.shape == (6,)


def test_cycles_and_paths_radius_at_most_two():
    rng = np.random.default_rng(5)
    for _ in range(50):
        cyc = list(rng.integers(3, 8, size=rng.integers(0, 3)))
        paths = list(rng.integers(1, 9, size=rng.integers(1, 4)))
        assert adjacency_spectral_radius(ComplementConfig(cyc, paths).to_graph()).value <= 2 + 1e-12


def test_batch_matches_single():
    rng = np.random.default_rng(1)
    ms = []
    for _ in range(30):
        a = rng.integers(0, 3, (6, 6)).astype(float)
        ms.append(a + a.T)
    ms.append(np.zeros((6, 6)))
    vals, res, its = dominant_eigenvalue_batch(np.array(ms))
    for m, v in zip(ms, vals):
        assert abs(v - dominant_eigenvalue(m).value) < 1e-10
    assert vals[-1] == 0.0


def test_lower_bound_rho_at_least_n():
    from distspec.enumerate import enumerate_configs
    for n in range(8, 13):
        for s in range(1, (n - 1) // 2):
            if not 2 * s < n - 2:
                continue
            for cfg in enumerate_configs(n, s):
                assert distance_spectral_radius(complement(cfg.to_graph())).value >= n
