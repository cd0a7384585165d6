"""corpus_io: loaders, pair TSV round-trips, and their invariants."""

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from xlalign import (
    PAIR_TSV_HEADER,
    WordPair,
    WordPairSet,
    load_lexicon,
    load_parallel_corpus,
    load_pharaoh,
    read_pairs,
    write_pairs,
)
from xlalign.errors import (
    DuplicatePairId,
    EmptySentence,
    IndexOutOfRange,
    InvalidUtf8,
    InvariantViolation,
    LineCountMismatch,
    MalformedLine,
    MalformedLink,
)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestLoadParallelCorpus:
    def test_basic_parse(self, tmp_path):
        src = _write(tmp_path, "s", "the cat\n")
        tgt = _write(tmp_path, "t", "le chat\n")
        corpus = load_parallel_corpus(src, tgt, "en", "fr")
        assert len(corpus) == 1
        assert corpus.sentence_pairs[0] == (["the", "cat"], ["le", "chat"])
        assert (corpus.src_lang, corpus.tgt_lang) == ("en", "fr")

    def test_line_count_mismatch(self, tmp_path):
        src = _write(tmp_path, "s", "a\nb\nc\n")
        tgt = _write(tmp_path, "t", "x\ny\n")
        with pytest.raises(LineCountMismatch) as exc:
            load_parallel_corpus(src, tgt)
        assert (exc.value.n_src, exc.value.n_tgt) == (3, 2)

    def test_whitespace_run_split(self, tmp_path):
        src = _write(tmp_path, "s", "a  b\n")
        tgt = _write(tmp_path, "t", "c\td\n")
        corpus = load_parallel_corpus(src, tgt)
        assert corpus.sentence_pairs[0] == (["a", "b"], ["c", "d"])

    def test_empty_sentence_rejected(self, tmp_path):
        src = _write(tmp_path, "s", "a\n\nb\n")
        tgt = _write(tmp_path, "t", "x\ny\nz\n")
        with pytest.raises(EmptySentence) as exc:
            load_parallel_corpus(src, tgt)
        assert exc.value.line_no == 2

    def test_invalid_utf8(self, tmp_path):
        src = tmp_path / "s"
        src.write_bytes(b"ok\n\xff\xfe broken\n")
        tgt = _write(tmp_path, "t", "x\ny\n")
        with pytest.raises(InvalidUtf8) as exc:
            load_parallel_corpus(str(src), str(tgt))
        assert exc.value.line_no == 2

    def test_no_trailing_newline(self, tmp_path):
        src = _write(tmp_path, "s", "a b")
        tgt = _write(tmp_path, "t", "c d")
        assert len(load_parallel_corpus(src, tgt)) == 1

    def test_empty_files_give_empty_corpus(self, tmp_path):
        src = _write(tmp_path, "s", "")
        tgt = _write(tmp_path, "t", "")
        assert len(load_parallel_corpus(src, tgt)) == 0


class TestLoadLexicon:
    def test_accumulates_senses(self, tmp_path):
        path = _write(tmp_path, "lex", "cat chat\ncat félin\n")
        lex = load_lexicon(path)
        assert lex.translations("cat") == {"chat", "félin"}

    def test_duplicate_lines_collapse(self, tmp_path):
        path = _write(tmp_path, "lex", "cat chat\ncat chat\n")
        assert load_lexicon(path).translations("cat") == {"chat"}

    def test_malformed_line(self, tmp_path):
        path = _write(tmp_path, "lex", "cat\n")
        with pytest.raises(MalformedLine) as exc:
            load_lexicon(path)
        assert exc.value.line_no == 1

    def test_three_fields_rejected(self, tmp_path):
        path = _write(tmp_path, "lex", "a b c\n")
        with pytest.raises(MalformedLine):
            load_lexicon(path)

    def test_lowercase_flag(self, tmp_path):
        path = _write(tmp_path, "lex", "Cat chat\n")
        lex = load_lexicon(path, lowercase=True)
        assert lex.translations("cat") == {"chat"}
        assert lex.translations("Cat") == set()

    def test_order_insensitive(self, tmp_path):
        lines = ["a x", "b y", "a z", "c w"]
        p1 = _write(tmp_path, "l1", "\n".join(lines) + "\n")
        p2 = _write(tmp_path, "l2", "\n".join(reversed(lines)) + "\n")
        lex1, lex2 = load_lexicon(p1), load_lexicon(p2)
        assert lex1.entries == lex2.entries


class TestLoadPharaoh:
    @pytest.fixture
    def corpus(self, tmp_path):
        src = _write(tmp_path, "s", "a b\nc d\n")
        tgt = _write(tmp_path, "t", "x y\nz w\n")
        return load_parallel_corpus(src, tgt)

    def test_parse(self, tmp_path, corpus):
        path = _write(tmp_path, "al", "0-0 1-1\n0-1\n")
        links = load_pharaoh(path, corpus)
        assert links == [{(0, 0), (1, 1)}, {(0, 1)}]

    def test_out_of_range(self, tmp_path, corpus):
        path = _write(tmp_path, "al", "0-5\n\n")
        with pytest.raises(IndexOutOfRange) as exc:
            load_pharaoh(path, corpus)
        assert exc.value.link == (0, 5)

    def test_set_semantics(self, tmp_path, corpus):
        path = _write(tmp_path, "al", "0-0 0-0\n\n")
        assert load_pharaoh(path, corpus)[0] == {(0, 0)}

    def test_empty_line_means_no_links(self, tmp_path, corpus):
        path = _write(tmp_path, "al", "\n\n")
        assert load_pharaoh(path, corpus) == [set(), set()]

    def test_malformed_link(self, tmp_path, corpus):
        path = _write(tmp_path, "al", "0-0 1~1\n\n")
        with pytest.raises(MalformedLink) as exc:
            load_pharaoh(path, corpus)
        assert exc.value.token == "1~1"

    def test_line_count(self, tmp_path, corpus):
        path = _write(tmp_path, "al", "0-0\n")
        with pytest.raises(LineCountMismatch):
            load_pharaoh(path, corpus)

    @given(
        links=st.lists(
            st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=12
        )
    )
    @settings(
        max_examples=60,
        deadline=None,
        suppress_health_check=[HealthCheck.function_scoped_fixture],
    )
    def test_fuzz_links_always_validated(self, tmp_path, corpus, links):
        line = " ".join(f"{i}-{j}" for i, j in links)
        path = tmp_path / "fuzz"
        path.write_text(line + "\n\n", encoding="utf-8")
        try:
            parsed = load_pharaoh(str(path), corpus)
        except IndexOutOfRange:
            assert any(i >= 2 or j >= 2 for i, j in links)
            return
        for i, j in parsed[0]:
            assert 0 <= i < 2 and 0 <= j < 2


def _pairs(*rows) -> WordPairSet:
    return WordPairSet([WordPair(*row) for row in rows])


class TestPairTsv:
    def test_empty_round_trip(self, tmp_path):
        path = str(tmp_path / "p.tsv")
        write_pairs(WordPairSet([]), path)
        assert (tmp_path / "p.tsv").read_text() == PAIR_TSV_HEADER + "\n"
        assert read_pairs(path) == WordPairSet([])

    def test_rows_in_pair_id_order(self, tmp_path):
        pairs = _pairs(
            (0, 0, 0, 0, "a", "x"), (1, 0, 1, 1, "b", "y"), (2, 1, 0, 0, "c", "z")
        )
        path = str(tmp_path / "p.tsv")
        write_pairs(pairs, path)
        lines = (tmp_path / "p.tsv").read_text().splitlines()
        assert [l.split("\t")[0] for l in lines[1:]] == ["0", "1", "2"]
        assert read_pairs(path) == pairs

    def test_gap_rejected(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text(
            PAIR_TSV_HEADER + "\n0\t0\t0\t0\ta\tx\n2\t1\t0\t0\tb\ty\n",
            encoding="utf-8",
        )
        with pytest.raises(InvariantViolation):
            read_pairs(str(path))

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text(
            PAIR_TSV_HEADER + "\n0\t0\t0\t0\ta\tx\n0\t1\t0\t0\tb\ty\n",
            encoding="utf-8",
        )
        with pytest.raises(DuplicatePairId):
            read_pairs(str(path))

    def test_identical_words_rejected(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text(PAIR_TSV_HEADER + "\n0\t0\t0\t0\ttaxi\ttaxi\n", encoding="utf-8")
        with pytest.raises(InvariantViolation):
            read_pairs(str(path))

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text("id\tsent\n", encoding="utf-8")
        with pytest.raises(InvariantViolation):
            read_pairs(str(path))

    def test_many_to_one_rejected_on_write(self, tmp_path):
        pairs = _pairs((0, 0, 0, 0, "a", "x"), (1, 0, 1, 0, "b", "y"))
        with pytest.raises(InvariantViolation):
            write_pairs(pairs, str(tmp_path / "p.tsv"))


_word_chars = st.characters(
    blacklist_categories=("Zs", "Zl", "Zp", "Cc", "Cs"), max_codepoint=0x2FFF
)
_words = st.text(alphabet=_word_chars, min_size=1, max_size=6)


@st.composite
def valid_word_pair_sets(draw):
    n_sentences = draw(st.integers(0, 4))
    pairs = []
    for sent in range(n_sentences):
        k = draw(st.integers(0, 3))
        src_indices = draw(
            st.lists(st.integers(0, 9), min_size=k, max_size=k, unique=True)
        )
        tgt_indices = draw(
            st.lists(st.integers(0, 9), min_size=k, max_size=k, unique=True)
        )
        for i, j in zip(src_indices, tgt_indices):
            # distinct prefixes guarantee src_word != tgt_word
            pairs.append(
                (sent, i, j, "s" + draw(_words), "t" + draw(_words))
            )
    return WordPairSet(
        [WordPair(pid, *rest) for pid, rest in enumerate(pairs)]
    )


class TestPairTsvProperties:
    @given(valid_word_pair_sets())
    @settings(max_examples=80, deadline=None)
    def test_round_trip_identity(self, tmp_path_factory, pairs):
        path = str(tmp_path_factory.mktemp("tsv") / "p.tsv")
        write_pairs(pairs, path)
        recovered = read_pairs(path)
        assert recovered == pairs
        # and writing again is byte-identical
        path2 = str(tmp_path_factory.mktemp("tsv") / "q.tsv")
        write_pairs(recovered, path2)
        assert open(path, "rb").read() == open(path2, "rb").read()
