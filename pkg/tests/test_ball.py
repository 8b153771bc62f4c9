import random

import numpy as np
import pytest

from cayleyball import (
    BudgetExceededError,
    all_pairs_distances,
    build_ball,
    parse_group_spec,
    read_ball,
    write_ball,
)
from cayleyball.ball import resolve_letters
from oracles import all_pairs_oracle, grid_bigon_oracle, monotone_lattice_paths, one_sided_hausdorff_l1


def test_tree_ball_sizes(make_pair):
    ball, _ = make_pair("F(a,b)", 1)
    assert ball.inner_count == 5  # identity + 4 generators
    assert ball.counts_per_radius[:2] == [1, 4]
    ball2, _ = make_pair("F(a,b)", 2)
    assert ball2.inner_count == 17  # 1 + 4 + 12 reduced words
    assert ball2.r_out == 6


def test_grid_ball_size(make_pair):
    ball, _ = make_pair("Z x Z", 1)
    assert ball.inner_count == 5


def test_distances_examples(make_pair):
    ball, dist = make_pair("F(a,b)", 2)
    a, b = ball.index_of_word("a"), ball.index_of_word("b")
    assert dist.d(a, b) == 2
    assert dist.d(a, a) == 0
    grid, gd = make_pair("Z x Z", 2)
    assert gd.d(grid.index_of_word("t1.t2"), grid.index_of_word("t1^-1")) == 3


def test_padding_exactness_against_reduced_length(make_pair):
    # in the free group the true distance is the reduced length of u^-1 v
    ball, dist = make_pair("F(a,b)", 2)
    spec = ball.spec
    for u in range(ball.inner_count):
        for v in range(ball.inner_count):
            w = spec.multiply(spec.invert(ball.elements[u]), ball.elements[v])
            assert dist.d(u, v) == len(w)


def test_matrix_against_networkx(make_pair):
    ball, dist = make_pair("Z x Z", 2)
    oracle = all_pairs_oracle(ball)
    for u in range(ball.inner_count):
        for v in range(ball.inner_count):
            assert dist.d(u, v) == oracle[u][v]


def test_left_invariance(make_pair):
    ball, dist = make_pair("Z x Z", 2)
    spec = ball.spec
    rng = random.Random(42)
    checked = 0
    while checked < 500:
        g, h = rng.randrange(ball.inner_count), rng.randrange(ball.inner_count)
        shifted = spec.multiply(spec.invert(ball.elements[g]), ball.elements[h])
        idx = ball.index.get(shifted)
        if idx is None or idx >= ball.inner_count:
            continue
        assert dist.d(g, h) == dist.d(0, idx)
        checked += 1


def test_metric_axioms_sampled(make_pair):
    ball, dist = make_pair("Z2 * Z3", 2)
    n = ball.inner_count
    D = dist.inner
    assert (np.diag(D) == 0).all()
    assert (D == D.T).all()
    rng = random.Random(7)
    for _ in range(500):
        u, v, w = (rng.randrange(n) for _ in range(3))
        assert D[u, v] <= D[u, w] + D[w, v]


def test_degree_bound(make_pair):
    for text in ("F(a,b)", "Z2 * Z3", "S3"):
        ball, _ = make_pair(text, 2)
        assert all(ball.degree(u) <= len(ball.letters) for u in range(ball.n_vertices))


def test_letters_closed_under_inversion():
    spec = parse_group_spec("Z2 * Z3")
    letters = resolve_letters(spec)
    elements = {l.label: l.element for l in letters}
    assert len(letters) == 3  # t1 self-inverse, t2 and its inverse
    for letter in letters:
        assert spec.format_element(spec.invert(letter.element)) in elements


def test_duplicate_and_identity_generators():
    spec = parse_group_spec("Z x Z")
    letters = resolve_letters(spec, ["t1", "t1^-1", "t1"])
    assert len(letters) == 2
    with pytest.raises(ValueError):
        resolve_letters(spec, ["t1.t1^-1"])


def test_budget_exceeded():
    with pytest.raises(BudgetExceededError) as err:
        build_ball(parse_group_spec("F(a,b)"), 3, budget=100)
    assert err.value.budget == 100
    assert err.value.vertices_found == 100
    assert err.value.radius_reached >= 1


def test_hausdorff_basics(make_pair):
    ball, dist = make_pair("F(a,b)", 2)
    Y = [0, 1, 2]
    assert dist.hausdorff(Y, Y) == 0
    assert dist.hausdorff([0], [ball.index_of_word("a.a")]) == 2
    with pytest.raises(ValueError):
        dist.hausdorff([], Y)


@pytest.mark.parametrize("k", [2, 3])
def test_grid_extreme_bigon_hausdorff(make_pair, k):
    # the two extreme monotone geodesics (0,0) -> (k,k) are Hausdorff distance
    # k apart, pinned by brute force over all monotone lattice paths
    ball, dist = make_pair("Z x Z", k)
    via_x = [ball.index[(i, 0)] for i in range(k + 1)] + [ball.index[(k, j)] for j in range(1, k + 1)]
    via_y = [ball.index[(0, j)] for j in range(k + 1)] + [ball.index[(i, k)] for i in range(1, k + 1)]
    assert dist.hausdorff(via_x, via_y) == k

    paths = monotone_lattice_paths((0, 0), (k, k))
    oracle = max(
        max(one_sided_hausdorff_l1(a, b), one_sided_hausdorff_l1(b, a))
        for a in paths
        for b in paths
    )
    assert oracle == k
    assert grid_bigon_oracle((0, 0), (k, k)) == k


def test_export_round_trip(make_pair):
    ball, dist = make_pair("Z2 * Z3", 1)
    text = write_ball(ball)
    loaded = read_ball(text, spec=ball.spec)
    assert write_ball(loaded) == text  # bit-exact
    assert loaded.n_vertices == ball.n_vertices
    assert loaded.inner_count == ball.inner_count
    d2 = all_pairs_distances(loaded)
    assert (d2.inner == dist.inner).all()


def test_import_without_spec(make_pair):
    ball, dist = make_pair("F(a,b)", 1)
    loaded = read_ball(write_ball(ball))
    assert loaded.spec is None
    d2 = all_pairs_distances(loaded)
    assert (d2.inner == dist.inner).all()
    assert write_ball(loaded) == write_ball(ball)
    with pytest.raises(ValueError):
        loaded.index_of_word("a")


def test_custom_generating_set(make_pair):
    standard, _ = make_pair("Z x Z", 2)
    redundant, _ = make_pair("Z x Z", 2, generators=["t1", "t2", "t1.t2"])
    assert len(redundant.letters) == 6
    assert redundant.inner_count > standard.inner_count


def test_bfs_order_is_by_distance(make_pair):
    ball, _ = make_pair("Z2 * Z3", 2)
    assert (np.diff(ball.dist0) >= 0).all()
    assert ball.dist0[ball.inner_count - 1] <= ball.r_in
    if ball.inner_count < ball.n_vertices:
        assert ball.dist0[ball.inner_count] == ball.r_in + 1
