import json

import jsonschema
import pytest

from mediagraph_adapter import AdapterError
from mediagraph_adapter.adapter import AdapterConfig, run_adapter, split_sentences
from mediagraph_adapter.engines import register_sentiment
from mediagraph_adapter.schema import validate_line

STUBS = AdapterConfig(
    ner_model="stub-ner@1", oie_model="stub-oie@1", sentiment_model="stub-sentiment@1"
)


def write_articles(path, articles):
    with path.open("w", encoding="utf-8") as fh:
        for a in articles:
            fh.write(json.dumps(a) + "\n")
    return path


def one_article(body="Voss met Dale.", title=""):
    return {"id": "a1", "source": "T", "title": title, "body": body}


def data_lines(path):
    return [json.loads(l) for l in path.read_text().splitlines() if not l.startswith("#")]


class TestRunAdapter:
    def test_single_sentence_through_stubs(self, tmp_path):
        articles = write_articles(tmp_path / "a.jsonl", [one_article()])
        out = tmp_path / "out.jsonl"
        assert run_adapter(articles, STUBS, out) == 1
        lines = data_lines(out)
        assert len(lines) == 1
        validate_line(lines[0])
        assert lines[0]["article_id"] == "a1"
        assert lines[0]["sentence_index"] == 0
        assert lines[0]["entities"][0]["surface"] == "Voss"
        assert lines[0]["relations"] == [{"arg0": "Voss", "arg1": "Dale"}]

    def test_sentence_without_entities_is_valid(self, tmp_path):
        articles = write_articles(
            tmp_path / "a.jsonl", [one_article(body="nothing here at all.")]
        )
        out = tmp_path / "out.jsonl"
        config = AdapterConfig(ner_model="rule-ner@1", oie_model="none",
                               sentiment_model="wordlist-sentiment@1")
        assert run_adapter(articles, config, out) == 1
        (line,) = data_lines(out)
        validate_line(line)
        assert line["entities"] == [] and line["relations"] == []

    def test_title_becomes_sentence_zero(self, tmp_path):
        articles = write_articles(
            tmp_path / "a.jsonl", [one_article(title="Harbor Vote Tonight")]
        )
        out = tmp_path / "out.jsonl"
        run_adapter(articles, AdapterConfig(), out)
        lines = data_lines(out)
        assert lines[0]["sentence_index"] == 0
        assert lines[0]["entities"][0]["surface"].startswith("Harbor")

    def test_batch_size_never_changes_output(self, tmp_path):
        articles = write_articles(
            tmp_path / "a.jsonl",
            [
                {"id": f"a{i}", "source": "T", "title": f"Title {i}",
                 "body": "Voss praised Dale. Halden Group objected. The end came fast."}
                for i in range(7)
            ],
        )
        outputs = []
        for batch in (1, 4, 64):
            out = tmp_path / f"out{batch}.jsonl"
            run_adapter(articles, AdapterConfig(batch_size=batch), out)
            outputs.append(out.read_bytes().split(b"\n", 1)[1])  # skip header
        assert outputs[0] == outputs[1] == outputs[2]

    def test_out_of_range_engine_scores_are_clamped(self, tmp_path):
        class Wild:
            def score(self, sentence):
                return 3.7, -0.2

        register_sentiment("wild@test", Wild)
        articles = write_articles(tmp_path / "a.jsonl", [one_article()])
        out = tmp_path / "out.jsonl"
        config = AdapterConfig(ner_model="stub-ner@1", oie_model="stub-oie@1",
                               sentiment_model="wild@test")
        run_adapter(articles, config, out)
        (line,) = data_lines(out)
        assert line["polarity"] == 1.0 and line["subjectivity"] == 0.0
        validate_line(line)

    def test_unresolvable_model_fails_before_reading_input(self, tmp_path):
        config = AdapterConfig(ner_model="missing@9")
        with pytest.raises(AdapterError, match="unknown NER"):
            run_adapter(tmp_path / "does-not-exist.jsonl", config, tmp_path / "o.jsonl")

    def test_bad_article_line_numbered(self, tmp_path):
        path = tmp_path / "a.jsonl"
        path.write_text('{"id": "a1", "source": "T", "title": "t", "body": "x."}\n{"id": 5}\n')
        with pytest.raises(AdapterError, match=":2:"):
            run_adapter(path, STUBS, tmp_path / "o.jsonl")

    def test_duplicate_ids_rejected(self, tmp_path):
        path = write_articles(tmp_path / "a.jsonl", [one_article(), one_article()])
        with pytest.raises(AdapterError, match="duplicate"):
            run_adapter(path, STUBS, tmp_path / "o.jsonl")

    def test_header_records_models_and_source(self, tmp_path):
        articles = write_articles(tmp_path / "a.jsonl", [one_article()])
        out = tmp_path / "out.jsonl"
        run_adapter(articles, AdapterConfig(), out)
        header = out.read_text().splitlines()[0]
        assert header.startswith("# mediagraph-adapter")
        assert "ner=rule-ner@1" in header and "source=T" in header


class TestSchema:
    def test_rejects_extra_keys(self):
        with pytest.raises(jsonschema.ValidationError):
            validate_line({
                "article_id": "a", "sentence_index": 0, "entities": [],
                "relations": [], "polarity": 0, "subjectivity": 0, "extra": 1,
            })

    def test_rejects_out_of_range(self):
        with pytest.raises(jsonschema.ValidationError):
            validate_line({
                "article_id": "a", "sentence_index": 0, "entities": [],
                "relations": [], "polarity": 2, "subjectivity": 0,
            })


class TestSplitter:
    def test_basic_split(self):
        assert split_sentences("One here. Two there.") == ["One here.", "Two there."]

    def test_abbreviation_merge(self):
        assert split_sentences("Mr. Smith left. He ran.") == ["Mr. Smith left.", "He ran."]

    def test_config_validation(self):
        with pytest.raises(AdapterError):
            AdapterConfig(batch_size=0)
