import json

import pytest

from mediagraph import InputError
from mediagraph.annotate import (
    admissible_entities,
    annotate_builtin,
    import_annotations,
    read_annotation_header,
    write_annotations,
)
from mediagraph.corpus import load_corpus
from mediagraph.sentiment import load_lexicon

from conftest import ann


@pytest.fixture(scope="module")
def lexicon():
    return load_lexicon()


def corpus_of(tmp_jsonl, *bodies, title=""):
    records = [
        {"id": f"a{i}", "source": "T", "title": title, "body": body}
        for i, body in enumerate(bodies)
    ]
    return load_corpus(tmp_jsonl(records))


def entities_of(annotation):
    return {e.normalized for e in annotation.entities}


class TestBuiltinRecognizer:
    def test_two_capitalized_runs(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "Donald Trump met Hillary Clinton.")
        (annotation,) = annotate_builtin(corpus, lexicon)
        assert entities_of(annotation) == {"donald trump", "hillary clinton"}

    def test_no_capitalized_tokens(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "the cat sat.")
        (annotation,) = annotate_builtin(corpus, lexicon)
        assert entities_of(annotation) == set()

    def test_connector_bridging(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "Bank of England raised rates.")
        (annotation,) = annotate_builtin(corpus, lexicon)
        assert entities_of(annotation) == {"bank of england"}

    def test_capitalized_stopword_never_joins(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "The cat saw Paris. It was huge.")
        annotations = annotate_builtin(corpus, lexicon)
        assert entities_of(annotations[0]) == {"paris"}
        assert entities_of(annotations[1]) == set()

    def test_sentence_initial_lone_token_before_stopword_dropped(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "Suddenly the crowd cheered.")
        (annotation,) = annotate_builtin(corpus, lexicon)
        assert entities_of(annotation) == set()

    def test_sentence_initial_name_kept(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "Trump spoke first.")
        (annotation,) = annotate_builtin(corpus, lexicon)
        assert entities_of(annotation) == {"trump"}

    def test_possessive_normalizes_away(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "Nobody liked Trump's wall.")
        (annotation,) = annotate_builtin(corpus, lexicon)
        assert entities_of(annotation) == {"trump"}

    def test_spans_slice_back_to_surfaces(self, tmp_jsonl, lexicon):
        from mediagraph.corpus import article_sentences

        corpus = corpus_of(
            tmp_jsonl,
            "Senator Mara Voss praised Arlen Harbor. Halden Group objected loudly.",
            title="Voss at the Port of Arlen",
        )
        sentences = article_sentences(corpus.articles[0])
        for annotation in annotate_builtin(corpus, lexicon):
            sentence = sentences[annotation.sentence_index]
            for ent in annotation.entities:
                assert 0 <= ent.start < ent.end <= len(sentence)
                assert sentence[ent.start : ent.end] == ent.surface

    def test_title_is_sentence_zero_and_flag(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "Body text only.", title="Paris Accord")
        annotations = annotate_builtin(corpus, lexicon)
        assert annotations[0].sentence_index == 0
        assert entities_of(annotations[0]) == {"paris accord"}
        without = annotate_builtin(corpus, lexicon, include_title=False)
        assert len(without) == len(annotations) - 1

    def test_polarity_comes_from_lexicon(self, tmp_jsonl, lexicon):
        corpus = corpus_of(tmp_jsonl, "Paris praised London.")
        (annotation,) = annotate_builtin(corpus, lexicon)
        assert annotation.polarity == lexicon.entries["praised"].polarity
        assert annotation.relations == ()

    def test_deterministic_and_thread_independent(self, tmp_jsonl, lexicon):
        corpus = corpus_of(
            tmp_jsonl,
            "Alpha Corp met Beta Fund. The market cheered.",
            "Gamma Trust sued Delta Bank! Nobody was pleased.",
            "Paris. London. Berlin calling Rome.",
        )
        base = annotate_builtin(corpus, lexicon)
        assert base == annotate_builtin(corpus, lexicon)
        assert base == annotate_builtin(corpus, lexicon, threads=4)
        ids = [(a.article_id, a.sentence_index) for a in base]
        assert ids == sorted(ids)


class TestAdmissibleEntities:
    def test_direct_match_intersection(self):
        a = ann("x", 0, entities=["trump"], relations=[("trump", "the wall")])
        assert admissible_entities(a, "intersection") == {"trump"}

    def test_empty_relations_with_oie_present(self):
        a = ann("x", 0, entities=["trump"], relations=[])
        assert admissible_entities(a, "intersection", oie_available=True) == set()

    def test_no_oie_anywhere_falls_back_to_ner(self):
        a = ann("x", 0, entities=["trump"], relations=[])
        assert admissible_entities(a, "intersection", oie_available=False) == {"trump"}

    def test_token_boundary_substring(self):
        a = ann(
            "x",
            0,
            entities=["donald trump"],
            relations=[("president donald trump said", "nato")],
        )
        assert admissible_entities(a, "intersection") == {"donald trump"}

    def test_no_partial_token_match(self):
        a = ann("x", 0, entities=["art"], relations=[("the party", "voters")])
        assert admissible_entities(a, "intersection") == set()

    def test_union_includes_args(self):
        a = ann("x", 0, entities=["trump"], relations=[("trump", "the wall")])
        assert admissible_entities(a, "union") == {"trump", "the wall"}

    def test_intersection_subset_of_union(self):
        cases = [
            ann("x", 0, entities=["a b", "c"], relations=[("a b said", "c d")]),
            ann("x", 1, entities=["q"], relations=[]),
            ann("x", 2, entities=[], relations=[("u", "v")]),
        ]
        for a in cases:
            for oie in (True, False):
                inter = admissible_entities(a, "intersection", oie_available=oie)
                union = admissible_entities(a, "union", oie_available=oie)
                assert inter <= union

    def test_unknown_mode(self):
        with pytest.raises(InputError):
            admissible_entities(ann("x", 0), "both")


class TestInterchange:
    def make_corpus(self, tmp_jsonl):
        return load_corpus(
            tmp_jsonl(
                [
                    {"id": "a1", "source": "T", "title": "", "body": "One. Two."},
                    {"id": "a2", "source": "T", "title": "", "body": "Three."},
                ]
            )
        )

    def lines(self, *objs):
        return [json.dumps(o) for o in objs]

    def rec(self, art="a1", idx=0, **kw):
        base = {
            "article_id": art,
            "sentence_index": idx,
            "entities": [{"surface": "Paris", "start": 0, "end": 5, "origin": "NER"}],
            "relations": [{"arg0": "Paris", "arg1": "tourists"}],
            "polarity": 0.25,
            "subjectivity": 0.5,
        }
        base.update(kw)
        return base

    def write(self, tmp_path, records):
        path = tmp_path / "ann.jsonl"
        path.write_text("\n".join(["# header"] + self.lines(*records)) + "\n", "utf-8")
        return path

    def test_wellformed_two_records(self, tmp_jsonl, tmp_path):
        corpus = self.make_corpus(tmp_jsonl)
        path = self.write(tmp_path, [self.rec(idx=1), self.rec(idx=0)])
        anns = import_annotations(path, corpus)
        assert len(anns) == 2
        assert [(a.article_id, a.sentence_index) for a in anns] == [("a1", 0), ("a1", 1)]
        assert anns[0].entities[0].normalized == "paris"
        assert anns[0].relations[0].arg0_surface == "Paris"

    def test_polarity_out_of_range_names_line(self, tmp_jsonl, tmp_path):
        corpus = self.make_corpus(tmp_jsonl)
        path = self.write(tmp_path, [self.rec(), self.rec(idx=1, polarity=1.5)])
        with pytest.raises(InputError, match=r":3:.*polarity"):
            import_annotations(path, corpus)

    def test_unknown_article_id(self, tmp_jsonl, tmp_path):
        corpus = self.make_corpus(tmp_jsonl)
        path = self.write(tmp_path, [self.rec(art="ghost")])
        with pytest.raises(InputError, match="unknown article_id"):
            import_annotations(path, corpus)

    def test_duplicate_sentence_index(self, tmp_jsonl, tmp_path):
        corpus = self.make_corpus(tmp_jsonl)
        path = self.write(tmp_path, [self.rec(), self.rec()])
        with pytest.raises(InputError, match="duplicate sentence_index"):
            import_annotations(path, corpus)

    def test_bad_span_rejected(self, tmp_jsonl, tmp_path):
        corpus = self.make_corpus(tmp_jsonl)
        bad = self.rec(entities=[{"surface": "X", "start": 3, "end": 3, "origin": "NER"}])
        with pytest.raises(InputError, match="span"):
            import_annotations(self.write(tmp_path, [bad]), corpus)

    def test_bad_origin_rejected(self, tmp_jsonl, tmp_path):
        corpus = self.make_corpus(tmp_jsonl)
        bad = self.rec(entities=[{"surface": "X", "start": 0, "end": 1, "origin": "LLM"}])
        with pytest.raises(InputError, match="origin"):
            import_annotations(self.write(tmp_path, [bad]), corpus)

    def test_write_read_roundtrip(self, tmp_jsonl, tmp_path, ):
        corpus = self.make_corpus(tmp_jsonl)
        lexicon = load_lexicon()
        original = annotate_builtin(corpus, lexicon)
        out = tmp_path / "out.jsonl"
        write_annotations(original, out, source_label="T", header_config={"mode": "builtin"})
        assert import_annotations(out, corpus) == original
        header = read_annotation_header(out)
        assert header["source"] == "T"
