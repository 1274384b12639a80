import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from guidednmf.errors import ConfigError, InputError, PipelineError
from guidednmf.text import (
    Corpus,
    Document,
    SeedTopic,
    Vocabulary,
    build_matrix,
    build_seed_matrix,
    build_vocabulary,
    format_seed_topics,
    load_corpus,
    parse_seed_topics,
    tokenize,
)


def corpus(*texts, labels=None):
    labels = labels or [None] * len(texts)
    return Corpus([Document(f"d{i}", t, lab) for i, (t, lab) in enumerate(zip(texts, labels))])


@pytest.mark.parametrize("text,expected", [
    ("The Space Shuttle launch!", ["space", "shuttle", "launch"]),
    ("a an the", []),
    ("NASA's 1969 moon-landing", ["nasa", "moon", "landing"]),
    ("", []),
    ("trump2016 2016 space_shuttle", ["trump2016", "space", "shuttle"]),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


class TestVocabulary:
    def test_min_df(self):
        assert build_vocabulary(corpus("cat dog", "cat bird"), 2, 1.0).terms == ("cat",)

    def test_order(self):
        assert build_vocabulary(corpus("cat dog", "cat bird"), 1, 1.0).terms == ("cat", "bird", "dog")

    def test_max_df(self):
        assert build_vocabulary(corpus("cat dog", "cat bird"), 1, 0.5).terms == ("bird", "dog")

    def test_empty_is_error(self):
        with pytest.raises(PipelineError):
            build_vocabulary(corpus("cat dog", "cat bird"), 3, 1.0)

    def test_bad_max_df(self):
        with pytest.raises(ConfigError):
            build_vocabulary(corpus("cat"), 1, 0.0)

    def test_bijection(self):
        v = Vocabulary(("a", "b", "c"))
        assert [v.index[t] for t in v.terms] == [0, 1, 2]
        with pytest.raises(PipelineError):
            Vocabulary(("a", "a"))


class TestMatrix:
    def test_single_document(self):
        c = corpus("cat cat dog")
        X = build_matrix(c, Vocabulary(("cat", "dog")))
        np.testing.assert_allclose(X[:, 0], np.array([2.0, 1.0]) / np.sqrt(5), rtol=1e-15)

    def test_document_without_terms_is_zero_column(self):
        X = build_matrix(corpus("cat dog", "bird"), Vocabulary(("cat", "dog")))
        np.testing.assert_array_equal(X[:, 1], 0.0)

    def test_unit_columns(self):
        rng = np.random.default_rng(0)
        words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]
        c = corpus(*[" ".join(rng.choice(words, size=rng.integers(0, 12))) for _ in range(5)])
        v = Vocabulary(tuple(words))
        norms = np.linalg.norm(build_matrix(c, v), axis=0)
        assert np.all((np.abs(norms - 1) <= 1e-12) | (norms == 0))

    def test_matches_sklearn(self):
        sk = pytest.importorskip("sklearn.feature_extraction.text")
        texts = [
            "space shuttle launch orbit nasa", "baseball pitch game season pitch",
            "medical doctor patients disease", "shuttle orbit moon moon lunar",
            "game team baseball field", "nasa launch rocket",
        ]
        c = corpus(*texts)
        v = build_vocabulary(c, 1, 1.0)
        X = build_matrix(c, v)
        vec = sk.TfidfVectorizer(vocabulary=list(v.terms), tokenizer=tokenize, lowercase=False,
                                 token_pattern=None, smooth_idf=True, norm="l2")
        expected = vec.fit_transform(texts).toarray().T
        np.testing.assert_allclose(X, expected, rtol=1e-12, atol=1e-15)

    def test_deterministic(self):
        c = corpus("cat dog bird", "dog bird", "fish cat cat")
        v1, v2 = build_vocabulary(c, 1, 1.0), build_vocabulary(c, 1, 1.0)
        assert v1.terms == v2.terms
        np.testing.assert_array_equal(build_matrix(c, v1), build_matrix(c, v2))


@pytest.mark.filterwarnings("ignore:.*expected to be sparse")
class TestSeeds:
    vocab = Vocabulary(("a1x", "b1x", "c1x"))

    def test_single(self):
        sm = build_seed_matrix([SeedTopic("t", (("b1x", 1.0),))], self.vocab)
        assert sm.Y[:, 0].tolist() == [0, 1, 0] and sm.topic_names == ["t"]

    def test_unknown_dropped_with_warning(self):
        with pytest.warns(UserWarning, match="zzz"):
            sm = build_seed_matrix([SeedTopic("t", (("b1x", 1.0), ("zzz", 1.0)))], self.vocab)
        assert sm.Y[:, 0].tolist() == [0, 1, 0]

    def test_weights(self):
        sm = build_seed_matrix([SeedTopic("p", (("a1x", 1.0),)), SeedTopic("q", (("c1x", 2.0),))], self.vocab)
        assert sm.Y.tolist() == [[1, 0], [0, 0], [0, 2]]

    def test_topic_without_known_words(self):
        with pytest.raises(ConfigError, match="'lost'"), pytest.warns(UserWarning):
            build_seed_matrix([SeedTopic("lost", (("zzz", 1.0),))], self.vocab)

    def test_no_topics(self):
        with pytest.raises(ConfigError):
            build_seed_matrix([], self.vocab)

    @pytest.mark.filterwarnings("default")
    def test_dense_seed_warns(self):
        with pytest.warns(UserWarning, match="sparse"):
            build_seed_matrix([SeedTopic("t", (("a1x", 1.0), ("b1x", 1.0)))], self.vocab)

    def test_invalid_topics(self):
        with pytest.raises(ConfigError):
            SeedTopic("t", (("a", 1.0), ("a", 2.0)))
        with pytest.raises(ConfigError):
            SeedTopic("t", (("a", 0.0),))

    def test_head(self):
        t = SeedTopic("t", (("a", 1.0), ("b", 1.0), ("c", 1.0)))
        assert t.head(2).terms == ["a", "b"]
        with pytest.raises(ConfigError):
            t.head(4)

    def test_sparsity_bound(self):
        vocab = Vocabulary(tuple(f"w{i:03d}" for i in range(200)))
        topics = [SeedTopic("t", tuple((f"w{i:03d}", 1.0) for i in range(0, 30, 5))),
                  SeedTopic("u", (("w007", 1.0), ("nope", 1.0)))]
        with pytest.warns(UserWarning):
            Y = build_seed_matrix(topics, vocab).Y
        for j, t in enumerate(topics):
            assert np.count_nonzero(Y[:, j]) <= len(t.entries)


class TestSeedFile:
    def test_parse(self):
        topics = parse_seed_topics("# comment\nspace: Space, nasa:2\n\nbaseball: pitch\n")
        assert [t.name for t in topics] == ["space", "baseball"]
        assert topics[0].entries == (("space", 1.0), ("nasa", 2.0))

    def test_roundtrip(self):
        topics = parse_seed_topics("space: space, nasa:2.5\nball: pitch\n")
        assert parse_seed_topics(format_seed_topics(topics)) == topics

    @pytest.mark.parametrize("text", ["no colon here", "t:", "t: a:x", "a: x\na: y", ""])
    def test_bad(self, text):
        with pytest.raises(ConfigError):
            parse_seed_topics(text)


class TestLoaders:
    def test_directory(self, tmp_path):
        for label, doc, text in [("space", "s1", "nasa orbit"), ("baseball", "b1", "pitch"), ("space", "s0", "moon")]:
            (tmp_path / label).mkdir(exist_ok=True)
            (tmp_path / label / f"{doc}.txt").write_text(text)
        c = load_corpus(str(tmp_path))
        assert [(d.doc_id, d.label) for d in c] == [("b1", "baseball"), ("s0", "space"), ("s1", "space")]

    def test_csv(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text('doc_id,text,label\n1,"hello, world",x\n2,bye,\n', encoding="utf-8")
        c = load_corpus(str(p))
        assert [(d.doc_id, d.text, d.label) for d in c] == [("1", "hello, world", "x"), ("2", "bye", None)]

    def test_csv_bad_header(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("id,body\n1,x\n")
        with pytest.raises(InputError):
            load_corpus(str(p), "csv")

    def test_missing(self, tmp_path):
        with pytest.raises(InputError):
            load_corpus(str(tmp_path / "nope"), "dir")
        with pytest.raises(InputError):
            load_corpus(str(tmp_path / "nope.csv"))

    def test_corpus_invariants(self):
        with pytest.raises(InputError):
            Corpus([])
        with pytest.raises(InputError):
            Corpus([Document("a", "x"), Document("a", "y")])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.text(alphabet="abcde fgh", max_size=40), min_size=1, max_size=8))
def test_matrix_columns_unit_or_zero(texts):
    c = corpus(*texts)
    try:
        v = build_vocabulary(c, 1, 1.0)
    except PipelineError:
        return
    X = build_matrix(c, v)
    assert X.shape == (len(v), len(texts)) and np.all(X >= 0)
    norms = np.linalg.norm(X, axis=0)
    assert np.all((np.abs(norms - 1) <= 1e-12) | (norms == 0))
