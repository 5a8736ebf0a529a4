import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cheegerlab.family import (
    bounded_below_margin,
    coarse_union,
    default_spacing,
    expander_verdict,
    load_family_spec,
    make_family,
)
from cheegerlab.io import dump_graph
from cheegerlab.graphs import cycle, path


def test_make_family_members():
    fam = make_family("cycle", [3, 6])
    assert fam.sizes == [3, 4, 5, 6]
    assert fam[1].n == 3 and fam.k_bound == 2
    with pytest.raises(IndexError):
        fam[0]


def test_make_family_errors():
    with pytest.raises(ValueError):
        make_family("nope", [1, 2])
    with pytest.raises(ValueError):
        make_family("cycle", [5, 3])
    with pytest.raises(ValueError):
        make_family("cycle", [2, 4])
    with pytest.raises(ValueError):
        make_family("random_regular", [6, 8])


def test_random_regular_family_is_seeded():
    a = make_family("random_regular", [8, 12], {"k": 4}, seed=4)
    b = make_family("random_regular", [8, 12], {"k": 4}, seed=4)
    c = make_family("random_regular", [8, 12], {"k": 4}, seed=5)
    assert [g.directed_edges for g in a.graphs] == [g.directed_edges for g in b.graphs]
    assert [g.directed_edges for g in a.graphs] != [g.directed_edges for g in c.graphs]


def test_family_spec_and_files(tmp_path):
    for n in (4, 5):
        dump_graph(cycle(n), tmp_path / f"c{n}.json")
    spec = {"generator": "from_files", "params": {"paths": [str(tmp_path / "c4.json"), str(tmp_path / "c5.json")]}}
    (tmp_path / "fam.json").write_text(json.dumps(spec))
    fam, raw = load_family_spec(tmp_path / "fam.json")
    assert fam.sizes == [4, 5] and raw["generator"] == "from_files"


@given(st.lists(st.integers(0, 30), min_size=2, max_size=12))
def test_default_spacing_grows(diams):
    gaps = default_spacing(diams)
    assert all(a < b for a, b in zip(gaps, gaps[1:]))
    for i, gap in enumerate(gaps, start=1):
        assert gap > max(diams[i - 1], diams[i]) + i


def test_union_metric():
    fam = make_family("path", [2, 4])
    U = coarse_union(fam)
    assert U.n == 9 and U.gaps == (4, 6)
    # within component 3 (path(4)) distances are hop distances
    assert U.dist[5, 8] == 3
    assert U.dist[0, 2] == 4 and U.dist[0, 5] == 10
    assert U.component_of(0) == 1 and U.component_of(4) == 2 and U.component_of(8) == 3
    assert U.separation(1, 3) == 10 and U.isolation(2) == 4.0 and U.isolation(3) == 6.0
    assert U.localizes(2, 3) and not U.localizes(2, 4)
    assert U.ball(2, 2) == frozenset({2, 3, 4})
    d = U.dist.astype(float)
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :])


def test_union_graph_is_disjoint_union():
    U = coarse_union(make_family("cycle", [3, 4]))
    assert U.graph.components == ((0, 1, 2), (3, 4, 5, 6))


def test_cycle_margins_decay():
    diag = expander_verdict(make_family("cycle", [8, 24]))
    assert diag.margins[0] == 1.0 and diag.margins[-1] == pytest.approx(1 / 3)
    assert not diag.consistent and diag.decay_exponent < -0.5
    assert not diag.heuristic and diag.sizes_increasing


def test_margulis_margins_bounded_below():
    diag = expander_verdict(make_family("margulis", [2, 6]))
    assert diag.consistent and diag.heuristic
    assert diag.verdict == "expander-consistent at horizon 5 (heuristic)"
    assert bounded_below_margin(diag.margins, 1.0)


def test_bounded_below_margin_needs_data():
    with pytest.raises(ValueError):
        bounded_below_margin([], 1.0)
    assert not bounded_below_margin([2.0, 0.5], 1.0)
