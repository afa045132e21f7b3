import hypothesis.strategies as st
import pytest
from hypothesis import given

from doris import textprep


class TestTokenize:
    def test_lowercases(self):
        assert textprep.tokenize("The Economy GREW") == ["the", "economy",
                                                         "grew"]

    def test_strips_punctuation(self):
        assert textprep.tokenize("war, peace; and trade!") == [
            "war", "peace", "and", "trade"]

    def test_keeps_internal_apostrophes(self):
        assert textprep.tokenize("the nation's don't o'clock") == [
            "the", "nation's", "don't", "o'clock"]

    def test_leading_trailing_apostrophes_dropped(self):
        assert textprep.tokenize("'tis said 'quoted'") == ["tis", "said",
                                                           "quoted"]

    def test_digits_are_tokens(self):
        assert textprep.tokenize("in 1907 we met") == ["in", "1907", "we",
                                                       "met"]

    def test_underscore_is_a_separator(self):
        assert textprep.tokenize("foo_bar") == ["foo", "bar"]

    def test_unicode_words(self):
        assert textprep.tokenize("Férale naïve") == ["férale", "naïve"]

    def test_empty(self):
        assert textprep.tokenize("") == []
        assert textprep.tokenize("  ...  ") == []


class TestSplitSentences:
    def test_basic_split(self):
        sents = textprep.split_sentences("d", "We met. We spoke. We left.")
        assert [s.tokens for s in sents] == [("we", "met"), ("we", "spoke"),
                                             ("we", "left")]
        assert [s.index for s in sents] == [0, 1, 2]

    def test_exclamation_and_question(self):
        sents = textprep.split_sentences("d", "Now! Why? Because.")
        assert len(sents) == 3

    def test_blank_line_is_a_boundary(self):
        sents = textprep.split_sentences("d", "one two\n\nthree four")
        assert [s.tokens for s in sents] == [("one", "two"),
                                             ("three", "four")]

    def test_spans_recover_text(self):
        body = "We met at dawn. The talks went long!\n\nThen we left."
        for sent in textprep.split_sentences("d", body):
            lo, hi = sent.char_span
            assert tuple(textprep.tokenize(body[lo:hi])) == sent.tokens

    def test_spans_ascend_without_overlap(self):
        body = "A war began. Trade stopped? Jobs vanished.\n\nPeace came."
        spans = [s.char_span for s in textprep.split_sentences("d", body)]
        for (lo, hi), (lo2, _) in zip(spans, spans[1:]):
            assert lo < hi <= lo2

    def test_tokenless_segments_dropped(self):
        sents = textprep.split_sentences("d", "We met. ... !!! We left.")
        assert [s.tokens for s in sents] == [("we", "met"), ("we", "left")]

    def test_empty_body(self):
        assert textprep.split_sentences("d", "") == []

    def test_doc_id_carried(self):
        sents = textprep.split_sentences("doc-9", "One. Two.")
        assert all(s.doc_id == "doc-9" for s in sents)

    def test_no_trailing_punctuation_needed(self):
        sents = textprep.split_sentences("d", "no final stop here")
        assert len(sents) == 1

    @given(st.text(max_size=300))
    def test_properties_hold_for_arbitrary_text(self, body):
        sents = textprep.split_sentences("d", body)
        assert [s.index for s in sents] == list(range(len(sents)))
        previous_end = 0
        for sent in sents:
            lo, hi = sent.char_span
            assert 0 <= previous_end <= lo < hi <= len(body)
            assert sent.tokens == tuple(textprep.tokenize(body[lo:hi]))
            assert sent.tokens
            previous_end = hi


class TestStopwords:
    def test_packaged_list_loads(self, stopwords):
        assert "the" in stopwords and "of" in stopwords
        assert "economy" not in stopwords

    def test_override_file(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# comment\nfoo\nBAR\n\n", "utf-8")
        words = textprep.load_stopwords(path)
        assert words == frozenset({"foo", "bar"})

    def test_stopwords_are_frozen(self, stopwords):
        with pytest.raises(AttributeError):
            stopwords.add("nope")
