import itertools
import json

import numpy as np
import pytest

from pvisrec.corpus import (AttributeColumn, Corpus, Dataset, VisualizationSpec,
                            assemble_corpus, binding_of, corpus_stats,
                            enumerate_candidate_visualizations,
                            extract_visual_configuration,
                            generate_synthetic_corpus, infer_attribute_type,
                            load_corpus, save_corpus)
from pvisrec.errors import CorpusParseError, ValidationError

MINIMAL = {
    "datasets": [
        {"id": 0, "columns": [
            {"name": "price", "values": [1.0, 2.5, 3.0]},
            {"name": "size", "values": [10.5, 20.1, 5.0]},
        ]},
    ],
    "visualizations": [
        {"user": 0, "dataset": 0, "attrs": [0, 1],
         "channels": {"mark": "scatter", "x": 0, "y": 1},
         "feedback": "generated"},
    ],
}


def _write(tmp_path, doc, name="corpus.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_minimal_corpus(tmp_path):
    corpus = load_corpus(_write(tmp_path, MINIMAL))
    assert corpus.n_users == 1
    assert corpus.n_attributes == 2
    assert corpus.n_configs == 1
    vis = corpus.visualizations[0]
    assert vis.binding == (0, 1)
    assert vis.config_id == 0


def test_dangling_attribute_rejected(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["visualizations"][0]["attrs"] = [0, 7]
    doc["visualizations"][0]["channels"]["y"] = 7
    with pytest.raises(ValidationError, match="does not belong"):
        load_corpus(_write(tmp_path, doc))


def test_unknown_channel_rejected(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["visualizations"][0]["channels"]["z-axis"] = 0
    with pytest.raises(ValidationError, match="unknown channel"):
        load_corpus(_write(tmp_path, doc))


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"datasets": [')
    with pytest.raises(CorpusParseError, match="line"):
        load_corpus(path)


def test_round_trip(tmp_path, small_corpus):
    path = tmp_path / "rt.json"
    save_corpus(small_corpus, path)
    again = load_corpus(path)
    assert again == small_corpus


# -- type inference --------------------------------------------------------

def _col(values):
    return AttributeColumn(attribute_id=0, dataset_id=0, name="c", values=values)


@pytest.mark.parametrize("values,expected", [
    ([1.5, 2.0, 3.7], "quantitative"),
    (["2021-01-02", "2021-03-04"], "temporal"),
    (["red", "blue", "red"], "nominal"),
    ([1, 2, 3, 2, 1], "ordinal"),             # integers, card <= 10, min >= 0
    ([1, 2, 3, -1], "quantitative"),           # negative blocks the ordinal rule
    (list(range(25)), "quantitative"),         # cardinality too high for ordinal
    (["1610000000", "1610000001"], "temporal"),  # epoch-like strings
    (["red", 3, 4.5], "nominal"),              # mixed types
    ([None, 5.5, 6.5], "quantitative"),        # missing ignored
])
def test_infer_types(values, expected):
    assert infer_attribute_type(_col(values)) == expected


def test_infer_all_missing_errors():
    with pytest.raises(ValidationError, match="entirely missing"):
        infer_attribute_type(_col([None, None]))


# -- configuration abstraction ---------------------------------------------

def test_extract_configuration_types(tmp_path):
    corpus = load_corpus(_write(tmp_path, MINIMAL))
    cfg = corpus.config_registry[0].as_dict()
    assert cfg["mark"] == "scatter"
    assert cfg["x"] == "quantitative"
    assert cfg["y"] == "quantitative"
    assert cfg["color"] == "none"
    assert cfg["size"] == "none"


def test_same_config_across_datasets():
    ds0 = Dataset(0, [AttributeColumn(0, 0, "a", [1.25, 2.0]),
                      AttributeColumn(1, 0, "b", [3.5, 4.0])])
    ds1 = Dataset(1, [AttributeColumn(2, 1, "u", [9.25, 8.5]),
                      AttributeColumn(3, 1, "v", [7.125, 6.0])])
    vis0 = VisualizationSpec(0, 0, [0, 1], {"mark": "bar", "x": 0, "y": 1})
    vis1 = VisualizationSpec(1, 1, [2, 3], {"mark": "bar", "x": 2, "y": 3})
    corpus = assemble_corpus([ds0, ds1], [vis0, vis1])
    assert corpus.n_configs == 1
    assert vis0.config_id == vis1.config_id


def test_registry_not_larger_than_visualizations(small_corpus):
    assert small_corpus.n_configs <= small_corpus.n_visualizations


def test_abstraction_idempotent(small_corpus):
    vis = small_corpus.visualizations[0]
    cfg1 = extract_visual_configuration(vis, small_corpus)
    rebuilt = VisualizationSpec(vis.user_id, vis.dataset_id,
                                list(vis.attribute_ids), dict(vis.design_choices))
    cfg2 = extract_visual_configuration(rebuilt, small_corpus)
    assert cfg1 == cfg2


def test_configuration_is_data_independent(small_corpus):
    names = {c.name for d in small_corpus.datasets for c in d.columns}
    for cfg in small_corpus.config_registry:
        text = cfg.key()
        for field in json.loads(text).values():
            assert isinstance(field, str)
        for name in names:
            assert name not in text
        # raw data values never leak into the serialized configuration
        assert not any(ch.isdigit() for ch in text.replace("-", ""))


# -- candidate enumeration --------------------------------------------------

def _quant_dataset(n_cols, dataset_id=0, base=0):
    cols = [AttributeColumn(base + i, dataset_id, f"c{i}",
                            [float(i), float(i) + 0.5, float(i) * 2 + 0.25])
            for i in range(n_cols)]
    return Dataset(dataset_id, cols)


def _registry_from(channel_maps):
    datasets, vis = [], []
    for i, channels in enumerate(channel_maps):
        n_bound = len([ch for ch in channels if ch in ("x", "y", "color", "size")])
        ds = _quant_dataset(max(n_bound, 1), dataset_id=i, base=10 * i)
        bound = dict(channels)
        attrs = []
        for slot, ch in enumerate(c for c in ("x", "y", "color", "size") if c in channels):
            bound[ch] = ds.columns[slot].attribute_id
            attrs.append(ds.columns[slot].attribute_id)
        datasets.append(ds)
        vis.append(VisualizationSpec(0, i, attrs, bound))
    return assemble_corpus(datasets, vis)


def test_enumeration_ordered_pairs():
    corpus = _registry_from([{"mark": "point", "x": None, "y": None}])
    ds = _quant_dataset(2, dataset_id=99, base=50)
    for col in ds.columns:
        col.inferred_type = "quantitative"
    cands = list(enumerate_candidate_visualizations(ds, corpus.config_registry, 2))
    assert cands == [((50, 51), 0), ((51, 50), 0)]


def test_enumeration_empty_when_no_arity_match():
    corpus = _registry_from([{"mark": "point", "x": None, "y": None}])
    ds = _quant_dataset(3, dataset_id=99, base=50)
    for col in ds.columns:
        col.inferred_type = "quantitative"
    assert list(enumerate_candidate_visualizations(ds, corpus.config_registry, 1)) == []


def test_enumeration_monotone_in_columns():
    corpus = _registry_from([{"mark": "point", "x": None, "y": None},
                             {"mark": "bar", "x": None}])
    counts = []
    for n_cols in (2, 3, 4, 5):
        ds = _quant_dataset(n_cols, dataset_id=99, base=100)
        for col in ds.columns:
            col.inferred_type = "quantitative"
        counts.append(len(list(enumerate_candidate_visualizations(
            ds, corpus.config_registry, 3))))
    assert counts == sorted(counts)
    assert all(b > a for a, b in zip(counts, counts[1:]))


def test_enumeration_matches_bruteforce_oracle(small_corpus):
    # nested-loop oracle over every arity and permutation, datasets <= 4 cols
    ds = small_corpus.datasets[0]
    types = {c.attribute_id: c.inferred_type for c in ds.columns}
    ids = [c.attribute_id for c in ds.columns][:4]
    ds4 = Dataset(ds.dataset_id, [c for c in ds.columns if c.attribute_id in ids])
    expected = set()
    for cfg in small_corpus.config_registry:
        slots = cfg.bound_types()
        if not 1 <= len(slots) <= 3:
            continue
        for perm in itertools.permutations(ids, len(slots)):
            if all(types[a] == t for a, t in zip(perm, slots)):
                expected.add((perm, cfg.config_id))
    got = list(enumerate_candidate_visualizations(ds4, small_corpus.config_registry, 3))
    assert len(got) == len(set(got)), "duplicates in the candidate stream"
    assert set(got) == expected


# -- synthetic corpus ---------------------------------------------------------

def test_synth_deterministic():
    a = generate_synthetic_corpus(seed=3, n_users=6, n_datasets=6)
    b = generate_synthetic_corpus(seed=3, n_users=6, n_datasets=6)
    assert a == b


def test_synth_eligibility():
    corpus = generate_synthetic_corpus(seed=1, n_users=10, n_datasets=10)
    counts = {}
    for v in corpus.visualizations:
        key = (v.user_id, v.dataset_id)
        counts.setdefault(key, set()).add((v.binding, v.config_id))
    for user in range(10):
        assert any(len(items) >= 2 for (u, _), items in counts.items() if u == user)


def test_synth_stats_consistent(small_corpus):
    stats = corpus_stats(small_corpus)
    assert stats["users"] == small_corpus.n_users
    assert stats["attributes"] == small_corpus.n_attributes
    assert stats["visualizations"] == small_corpus.n_visualizations
    assert stats["configurations"] == small_corpus.n_configs
