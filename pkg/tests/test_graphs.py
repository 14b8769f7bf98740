import numpy as np
import pytest

from pvisrec.corpus import (AttributeColumn, Dataset, VisualizationSpec,
                            assemble_corpus, corpus_stats,
                            generate_synthetic_corpus)
from pvisrec.errors import ValidationError
from pvisrec.graphs import (SparseMatrix, build_attribute_config, build_graphs,
                            build_user_attribute, build_user_config, graph_stats)


def _corpus(vis_specs, n_cols=4):
    ds = Dataset(0, [AttributeColumn(i, 0, f"c{i}", [0.5 * i + 0.25, 1.5, 2.5])
                     for i in range(n_cols)])
    return assemble_corpus([ds], vis_specs)


def _vis(user, attrs, mark="bar", feedback="generated"):
    channels = {"mark": mark, "x": attrs[0]}
    if len(attrs) > 1:
        channels["y"] = attrs[1]
    return VisualizationSpec(user, 0, list(attrs), channels, feedback)


# -- sparse substrate ---------------------------------------------------------

def test_sparse_duplicate_rejected():
    with pytest.raises(ValidationError, match="duplicate"):
        SparseMatrix(2, 2, np.array([0, 0]), np.array([1, 1]), np.array([1.0, 2.0]))


def test_sparse_aggregation():
    mat = SparseMatrix.from_entries(2, 3, [0, 0, 1], [1, 1, 2], [1.0, 2.0, 4.0])
    assert mat.nnz == 2
    assert mat.to_dense()[0, 1] == 3.0


def test_sparse_products_match_dense():
    rng = np.random.default_rng(0)
    dense = rng.random((6, 5)) * (rng.random((6, 5)) > 0.5)
    mat = SparseMatrix.from_dense(dense)
    other = rng.standard_normal((5, 3))
    np.testing.assert_allclose(mat.matmul_dense(other), dense @ other, atol=1e-12)
    other2 = rng.standard_normal((6, 3))
    np.testing.assert_allclose(mat.t_matmul_dense(other2), dense.T @ other2, atol=1e-12)
    left = rng.standard_normal((6, 4))
    right = rng.standard_normal((5, 4))
    assert abs(mat.cross_inner(left, right)
               - float(np.sum(dense * (left @ right.T)))) < 1e-10


def test_compressed_forms_agree():
    rng = np.random.default_rng(1)
    dense = rng.integers(0, 3, size=(7, 9)).astype(float)
    mat = SparseMatrix.from_dense(dense)
    by_row = sorted(mat.entries_by_row())
    by_col = sorted(mat.entries_by_col())
    assert by_row == by_col
    assert len(by_row) == mat.nnz


# -- graph builders ------------------------------------------------------------

def test_user_attribute_entries():
    corpus = _corpus([_vis(0, [3, 1])])
    mat = build_user_attribute(corpus)
    dense = mat.to_dense()
    assert dense[0, 3] == 1.0 and dense[0, 1] == 1.0
    assert mat.nnz == 2


def test_repeat_visualization_counts_twice():
    corpus = _corpus([_vis(0, [1, 2]), _vis(0, [1, 2])])
    a = build_user_attribute(corpus)
    assert a.to_dense()[0, 1] == 2.0
    c = build_user_config(corpus)
    assert c.nnz == 1 and c.data[0] == 2.0


def test_disjoint_users_disjoint_config_rows():
    corpus = _corpus([_vis(0, [0, 1], mark="bar"), _vis(1, [0, 1], mark="line")])
    c = build_user_config(corpus)
    dense = c.to_dense()
    assert np.all((dense[0] > 0) != (dense[1] > 0))


def test_config_mass_equals_feedback_events(small_corpus):
    c = build_user_config(small_corpus)
    assert c.total() == small_corpus.n_visualizations


def test_attr_config_worked_example():
    corpus = _corpus([_vis(0, [2, 0])])
    d = build_attribute_config(corpus)
    t = corpus.visualizations[0].config_id
    dense = d.to_dense()
    assert dense[2, t] == 1.0 and dense[0, t] == 1.0


def test_empty_corpus_graphs():
    ds = Dataset(0, [AttributeColumn(0, 0, "a", [1.5])])
    corpus = assemble_corpus([ds], [])
    graphs = build_graphs(corpus)
    assert graphs.attr_config.nnz == 0
    assert graphs.user_config.n_rows == 0


def test_attr_mass_at_least_config_mass(small_corpus):
    # every visualization has >= 1 attribute, so D carries >= C's mass per config
    c = build_user_config(small_corpus).col_sums()
    d = build_attribute_config(small_corpus).col_sums()
    assert np.all(d >= c)


def test_rebuild_from_shuffled_list_identical(small_corpus):
    rng = np.random.default_rng(0)
    shuffled = list(small_corpus.visualizations)
    rng.shuffle(shuffled)
    reordered = small_corpus.with_visualizations(shuffled)
    for build in (build_user_attribute, build_user_config, build_attribute_config):
        a, b = build(small_corpus), build(reordered)
        assert np.array_equal(a.to_dense(), b.to_dense())


def test_stats_match_corpus(small_corpus):
    graphs = build_graphs(small_corpus)
    stats = graph_stats(graphs)
    cstats = corpus_stats(small_corpus)
    assert stats["users"] == cstats["users"]
    assert stats["attributes"] == cstats["attributes"]
    assert stats["configurations"] == cstats["configurations"]
    assert stats["feedback_events"] == cstats["visualizations"]


def test_sparse_corpus_low_density():
    corpus = generate_synthetic_corpus(seed=5, n_users=200, n_datasets=150,
                                       cols_per_dataset=8, planted_rank=3,
                                       datasets_per_user=2, max_positives=2)
    a = build_user_attribute(corpus)
    assert a.density() < 0.01


def test_binarize_and_weights():
    corpus = _corpus([_vis(0, [1, 2], feedback="clicked"),
                      _vis(0, [1, 2], feedback="liked")])
    plain = build_user_attribute(corpus)
    assert plain.to_dense()[0, 1] == 2.0
    binned = build_user_attribute(corpus, binarize=True)
    assert binned.to_dense()[0, 1] == 1.0
    weighted = build_user_attribute(corpus, weights={"clicked": 0.5, "liked": 2.0})
    assert weighted.to_dense()[0, 1] == 2.5
