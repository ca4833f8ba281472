import logging
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kneeroc.errors import InputError
from kneeroc.gaussian import ScoreSet
from kneeroc.ingest import (
    DatasetFile,
    GeneratorConfig,
    best_case_dataset,
    generate_dataset,
    generate_scores,
    parse_probabilities,
    parse_scores,
    quantize_simplex,
    serialize_probabilities,
    serialize_scores,
    write_probabilities,
    write_scores,
)
from kneeroc.knee import SampleProbabilities, knee_statistics


def test_parse_scores_basic(write):
    s = parse_scores(write("s.csv", "score,label\n0.9,pos\n0.1,neg\n"))
    assert s == ScoreSet((0.9,), (0.1,))


@pytest.mark.parametrize(
    "body, line",
    [
        ("0.9,pos\n0.5,maybe\n", "line 3"),
        ("0.5,maybe\n0.1,neg\n", "line 2"),
        ("abc,pos\n0.1,neg\n", "line 2"),
        ("0.9,pos\n1.5,neg\n", "line 3"),
        ("0.9,pos\n-0.1,neg\n", "line 3"),
        ("0.9,pos,extra\n", "line 2"),
    ],
)
def test_parse_scores_rejects_with_line_number(write, body, line):
    with pytest.raises(InputError, match=line):
        parse_scores(write("s.csv", "score,label\n" + body))


def test_parse_scores_one_sided(write):
    with pytest.raises(InputError, match="one-sided score file"):
        parse_scores(write("s.csv", "score,label\n0.9,pos\n0.8,pos\n"))


def test_parse_scores_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_scores(tmp_path / "nope.csv")


def test_parse_scores_bad_header(write):
    with pytest.raises(InputError, match="line 1"):
        parse_scores(write("s.csv", "value,label\n0.9,pos\n"))


def test_scores_round_trip(tmp_path):
    s = generate_scores(250, 250, seed=11)
    path = tmp_path / "s.csv"
    write_scores(s, path)
    assert parse_scores(path) == s
    assert serialize_scores(parse_scores(path)) == path.read_text()


def test_parse_probabilities_exact_row(write):
    d = parse_probabilities(write("p.csv", ",".join(f"p{i}" for i in range(10)) + "\n" + ",".join(["0.1"] * 10) + "\n"))
    assert d.class_count == 10 and d.samples[0].probs == (0.1,) * 10
    assert d.samples[0].labels is None


def test_parse_probabilities_renormalizes(write, caplog):
    row = "0.5005,0.3,0.2"
    with caplog.at_level(logging.WARNING):
        d = parse_probabilities(write("p.csv", f"p0,p1,p2\n{row}\n"))
    assert "renormalized" in caplog.text
    assert math.fsum(d.samples[0].probs) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "body, message",
    [
        ("0.25,0.15,0.1\n", "line 2"),
        ("0.5,0.5,0.0\n0.5,0.5\n", "line 3"),
        ("1.2,-0.1,-0.1\n", "outside"),
        ("0.5,x,0.5\n", "line 2"),
    ],
)
def test_parse_probabilities_rejects(write, body, message):
    with pytest.raises(InputError, match=message):
        parse_probabilities(write("p.csv", "p0,p1,p2\n" + body))


def test_parse_probabilities_labels(write):
    d = parse_probabilities(write("p.csv", "p0,p1,p2,labels\n0.5,0.25,0.25,0;2\n0.2,0.4,0.4,\n"))
    assert d.samples[0].labels == {0, 2} and d.samples[1].labels == frozenset()
    with pytest.raises(InputError, match="class label 3"):
        parse_probabilities(write("q.csv", "p0,p1,p2,labels\n0.5,0.25,0.25,3\n"))


def test_parse_probabilities_header_checks(write):
    with pytest.raises(InputError, match="line 1"):
        parse_probabilities(write("p.csv", "p0,p2,p1\n0.2,0.3,0.5\n"))
    with pytest.raises(InputError, match="line 1"):
        parse_probabilities(write("p.csv", "p0,p1\n0.5,0.5\n"))


def test_quantize_simplex_sums_exactly():
    q = quantize_simplex([1, 1, 1])
    assert sum(round(v * 1e9) for v in q) == 10**9


def test_generator_deterministic():
    cfg = GeneratorConfig(sample_count=200, seed=42)
    a, b = generate_dataset(cfg), generate_dataset(cfg)
    assert a == b
    assert serialize_probabilities(a) == serialize_probabilities(b)
    assert generate_dataset(GeneratorConfig(sample_count=200, seed=43)) != a


def test_generator_all_high():
    d = generate_dataset(GeneratorConfig(sample_count=100, high_prob_fraction=1.0, seed=3))
    assert all(max(s.probs) >= 0.35 for s in d.samples)
    assert all(len(s.labels) == 4 for s in d.samples)


def test_generator_planted_fraction_exact():
    d = generate_dataset(GeneratorConfig(sample_count=500, high_prob_fraction=0.588, seed=9))
    count = sum(1 for s in d.samples if max(s.probs) >= 0.35)
    assert count == 294
    assert knee_statistics(d.samples).high_fraction == 0.588


@settings(max_examples=25, deadline=None)
@given(
    st.integers(1, 60),
    st.integers(3, 12),
    st.data(),
    st.floats(0, 1),
    st.floats(0, 2),
    st.integers(0, 2**32 - 1),
)
def test_generator_simplex(n, k, data, frac, noise, seed):
    a = data.draw(st.integers(1, k))
    d = generate_dataset(GeneratorConfig(n, k, a, frac, noise, seed))
    assert len(d.samples) == n
    for s in d.samples:
        assert abs(math.fsum(s.probs) - 1.0) <= 1e-9
        assert all(0.0 <= p <= 1.0 for p in s.probs)
    assert sum(max(s.probs) >= 0.35 for s in d.samples) == round(n * frac)


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"sample_count": 0}, "sample_count"),
        ({"class_count": 2}, "class_count"),
        ({"active_classes": 11}, "active_classes"),
        ({"high_prob_fraction": 1.5}, "high_prob_fraction"),
        ({"noise_scale": -1}, "noise_scale"),
        ({"seed": -1}, "seed"),
    ],
)
def test_generator_config_validation(kwargs, message):
    with pytest.raises(InputError, match=message):
        GeneratorConfig(**kwargs)


def test_probabilities_round_trip(tmp_path):
    d = generate_dataset(GeneratorConfig(sample_count=120, seed=5))
    path = tmp_path / "p.csv"
    write_probabilities(d, path)
    parsed = parse_probabilities(path)
    assert parsed.samples == d.samples
    assert serialize_probabilities(parsed) == path.read_text()


def test_round_trip_without_labels(tmp_path):
    d = DatasetFile((SampleProbabilities((0.2, 0.3, 0.5)),), 3)
    path = tmp_path / "p.csv"
    write_probabilities(d, path)
    assert path.read_text() == "p0,p1,p2\n0.200000000,0.300000000,0.500000000\n"
    assert serialize_probabilities(parse_probabilities(path)) == path.read_text()


def test_best_case_dataset_shape():
    d = best_case_dataset(10, seed=1)
    for s in d.samples:
        top = sorted(s.probs)[-4:]
        assert all(p == pytest.approx(0.25, abs=1e-3) for p in top)
        assert {c for c, p in enumerate(s.probs) if p > 0.1} == s.labels
