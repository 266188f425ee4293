"""Published JSON Schema for the export bundle."""

from __future__ import annotations

import jsonschema

RECORD_SCHEMA = {
    "type": "object",
    "required": ["id", "author", "text", "created_at", "retweet_count", "lang"],
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "author": {"type": "string"},
        "text": {"type": "string"},
        "created_at": {"type": "string"},
        "retweet_count": {"type": "integer", "minimum": 0},
        "lang": {"type": "string"},
        "in_reply_to": {"type": "string"},
        "retweet_of": {"type": "string"},
    },
}

THREAD_SCHEMA = {
    "type": "object",
    "required": ["format", "version", "source", "nodes", "reply_count", "max_depth"],
    "properties": {
        "format": {"const": "rumourkit-thread"},
        "version": {"const": 1},
        "source": RECORD_SCHEMA,
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["record", "depth", "parent"],
                "properties": {
                    "record": RECORD_SCHEMA,
                    "depth": {"type": "integer", "minimum": 1},
                    "parent": {"type": "string"},
                },
            },
        },
        "reply_count": {"type": "integer", "minimum": 0},
        "max_depth": {"type": "integer", "minimum": 0},
    },
}

EVENT_SCHEMA = {
    "type": "object",
    "required": ["type", "seq", "at"],
    "properties": {
        "type": {"enum": ["judgment", "story_created", "story_renamed"]},
        "seq": {"type": "integer", "minimum": 1},
        "at": {"type": "integer"},
        "thread_id": {"type": "string"},
        "label": {"enum": ["rumour", "nonrumour", "unsure"]},
        "story_id": {"type": ["string", "null"]},
        "annotator": {"type": "string"},
        "name": {"type": "string"},
    },
}

STORY_SCHEMA = {
    "type": "object",
    "required": ["story_id", "name", "created_at"],
    "properties": {
        "story_id": {"type": "string", "minLength": 1},
        "name": {"type": "string", "minLength": 1},
        "created_at": {"type": "integer"},
    },
}

EXPORT_BUNDLE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["magic", "schema_version", "threads", "stories", "events"],
    "properties": {
        "magic": {"const": "rumourkit-bundle"},
        "schema_version": {"const": 1},
        "threads": {"type": "array", "items": THREAD_SCHEMA},
        "stories": {"type": "array", "items": STORY_SCHEMA},
        "events": {"type": "array", "items": EVENT_SCHEMA},
    },
}


def validate_bundle(bundle: dict) -> None:
    jsonschema.validate(bundle, EXPORT_BUNDLE_SCHEMA)
