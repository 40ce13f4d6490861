"""Graph container: invariants, boundary statistics, labels, serialization."""

import json

import pytest

from conftest import random_connected_graph, random_connected_subset
from spectre.graph import Graph, GraphError, graph_from_dict, graph_to_dict, load_graph, save_graph

# bowtie: two triangles sharing vertex 2
BOWTIE = [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]


@pytest.fixture
def bowtie():
    return Graph.from_edges(5, BOWTIE)


def test_basic_accessors(bowtie):
    assert bowtie.vertex_count == 5
    assert bowtie.edge_count == 6
    assert bowtie.degree(2) == 4
    assert list(bowtie.neighbors(2)) == [0, 1, 3, 4]
    assert bowtie.has_edge(3, 4)
    assert not bowtie.has_edge(0, 4)
    assert sorted(bowtie.edges()) == sorted(BOWTIE)


def test_degree_array_matches_degrees(bowtie):
    deg = bowtie.degree_array()
    assert deg.tolist() == [bowtie.degree(v) for v in range(5)]


@pytest.mark.parametrize(
    "adjacency, message",
    [
        ([[1], [0], []], "degree 0"),
        ([[0, 1], [0]], "loop"),
        ([[1, 1], [0, 0]], "duplicate"),
        ([[5], [0]], "out of range"),
    ],
)
def test_validate_rejects_malformed(adjacency, message):
    with pytest.raises(GraphError, match=message):
        Graph(adjacency)


def test_validate_rejects_asymmetric():
    g = Graph([[1], [0]], check=False)
    g.validate()  # symmetric pair is fine
    broken = Graph([[1], [0]], check=False)
    broken.adjacency = ((1, 2), (0, 2), (0,))
    broken.interior = (True, True, True)
    with pytest.raises(GraphError, match="not symmetric"):
        broken.validate()


def test_face_validation():
    with pytest.raises(GraphError, match="fewer than 3"):
        Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)], faces=[(0, 1)])
    with pytest.raises(GraphError, match="not an edge"):
        Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)], faces=[(0, 1, 2)])


def test_boundary_and_area(bowtie):
    members = [0, 1]
    assert bowtie.area(members) == 4
    assert bowtie.induced_edge_count(members) == 1
    boundary = bowtie.edge_boundary(members)
    assert sorted(boundary) == [(0, 2), (1, 2)]
    # handshake: area = 2 * induced edges + boundary edges
    assert bowtie.area(members) == 2 * bowtie.induced_edge_count(members) + len(boundary)


def test_handshake_random(rng):
    for _ in range(40):
        g = random_connected_graph(rng, int(rng.integers(2, 30)))
        w = random_connected_subset(rng, g)
        assert g.area(w) == 2 * g.induced_edge_count(w) + len(g.edge_boundary(w))


def test_vertex_set_and_ratio(bowtie):
    ws = bowtie.vertex_set([0, 1])
    assert ws.members == frozenset({0, 1})
    assert ws.boundary_edges == 2
    assert ws.area == 4
    assert ws.boundary_ratio() == 1 / 2
    assert len(ws) == 2


def test_complement_components(bowtie):
    # removing the cut vertex leaves two triangle remnants
    assert bowtie.complement_components([2]) == 2
    assert bowtie.complement_components([0]) == 1
    assert bowtie.complement_components([0, 1, 2, 3, 4]) == 0


def test_complement_components_merge_rim():
    # both sides touch a non-interior vertex, so they count as one unbounded piece
    g = Graph.from_edges(
        5,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
        interior=[False, True, True, True, False],
    )
    assert g.complement_components([2]) == 1


def test_is_connected_set(bowtie):
    assert bowtie.is_connected_set([0, 1, 2])
    assert not bowtie.is_connected_set([0, 3])
    assert bowtie.is_connected_set([])


def test_ball(bowtie):
    assert bowtie.ball(0, 0).members == frozenset({0})
    assert bowtie.ball(0, 1).members == frozenset({0, 1, 2})
    assert bowtie.ball(0, 2).members == frozenset(range(5))


def test_layer_accessors():
    g = Graph.from_edges(
        4,
        [(0, 1), (1, 2), (2, 3)],
        generation=[0, 1, 2, 3],
        interior=[True, True, True, False],
    )
    assert g.layer_range() == (0, 3)
    assert g.max_interior_label() == 2
    assert g.shell(1).members == frozenset({1})
    assert g.generation_ball(1).members == frozenset({0, 1})
    assert g.back_forward_degrees(2) == (1, 1)
    assert g.interior_degree_range() == (1, 2)
    assert g.interior_degree_range(excluded=[0]) == (2, 2)


def test_layer_accessors_require_labels(bowtie):
    with pytest.raises(GraphError):
        bowtie.shell(0)


def test_csr_structure(bowtie):
    indptr, indices = bowtie.csr()
    assert indptr.tolist() == [0, 2, 4, 8, 10, 12]
    assert indices[indptr[2] : indptr[3]].tolist() == [0, 1, 3, 4]


def test_dict_round_trip(rng):
    g = random_connected_graph(rng, 17)
    h = graph_from_dict(graph_to_dict(g))
    assert h.adjacency == g.adjacency
    assert h.interior == g.interior


def test_dict_round_trip_with_structure():
    g = Graph.from_edges(
        3,
        [(0, 1), (1, 2), (0, 2)],
        faces=[(0, 1, 2)],
        generation=[0, 0, 0],
        interior=[True, True, False],
    )
    h = graph_from_dict(graph_to_dict(g))
    assert h.faces == g.faces
    assert h.generation == g.generation
    assert h.interior == g.interior


@pytest.mark.parametrize(
    "data, message",
    [
        ([1, 2], "expected an object"),
        ({"n": 2, "edges": [[0, 1]], "junk": 1}, "unknown keys"),
        ({"edges": []}, "'n' must be"),
        ({"n": 2}, "'edges' must be"),
        ({"n": 2, "edges": [[0, 1, 2]]}, r"edges\[0\]"),
        ({"n": 2, "edges": [[0, 5]]}, "out of range"),
        ({"n": 2, "edges": [[1, 1]]}, "loop"),
        ({"n": 2, "edges": [[0, 1], [1, 0]]}, r"edges\[1\]: duplicate"),
        ({"n": 2, "edges": [[0, 1]], "generation": [0]}, "'generation'"),
        ({"n": 2, "edges": [[0, 1]], "interior": [1, 2]}, "'interior'"),
    ],
)
def test_dict_rejects_malformed(data, message):
    with pytest.raises(GraphError, match=message):
        graph_from_dict(data)


def test_save_load(tmp_path, bowtie):
    path = tmp_path / "g.json"
    save_graph(bowtie, path)
    text = path.read_text()
    assert text.endswith("\n")
    json.loads(text)  # one valid JSON document
    assert load_graph(path).adjacency == bowtie.adjacency


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(GraphError):
        load_graph(path)
