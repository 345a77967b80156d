"""JSON schema for one annotation line; every line is validated before write."""

import jsonschema

ANNOTATION_LINE_SCHEMA = {
    "type": "object",
    "required": [
        "article_id",
        "sentence_index",
        "entities",
        "relations",
        "polarity",
        "subjectivity",
    ],
    "additionalProperties": False,
    "properties": {
        "article_id": {"type": "string", "minLength": 1},
        "sentence_index": {"type": "integer", "minimum": 0},
        "entities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["surface", "start", "end", "origin"],
                "additionalProperties": False,
                "properties": {
                    "surface": {"type": "string", "minLength": 1},
                    "start": {"type": "integer", "minimum": 0},
                    "end": {"type": "integer", "minimum": 1},
                    "origin": {"enum": ["NER", "OIE_ARG"]},
                },
            },
        },
        "relations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["arg0", "arg1"],
                "additionalProperties": False,
                "properties": {
                    "arg0": {"type": "string", "minLength": 1},
                    "arg1": {"type": "string", "minLength": 1},
                },
            },
        },
        "polarity": {"type": "number", "minimum": -1, "maximum": 1},
        "subjectivity": {"type": "number", "minimum": 0, "maximum": 1},
    },
}

_validator = jsonschema.Draft202012Validator(ANNOTATION_LINE_SCHEMA)


def validate_line(obj: dict) -> None:
    """Raise jsonschema.ValidationError if the line violates the format."""
    _validator.validate(obj)
