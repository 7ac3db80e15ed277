"""YAML/JSON document helpers for problem files, schemas and reports."""

import io
import json
from pathlib import Path
from typing import Any

from ruamel.yaml import YAML


class YamlHelper:
    """Load YAML or JSON documents and dump reports.

    YAML is a superset of JSON, so problem files in either format go through
    the same safe loader and come back as plain dicts and lists.
    """

    def __init__(self) -> None:
        self.yaml = YAML(typ="safe", pure=True)
        self.yaml.width = 4096  # Prevent line wrapping
        self.yaml.default_flow_style = False

    def decode(self, text: str) -> Any:
        """Decode a YAML or JSON string."""
        return self.yaml.load(text)

    def encode(self, data: Any) -> str:
        """Encode plain data as a YAML string."""
        stream = io.StringIO()
        self.yaml.dump(data, stream)
        return stream.getvalue()

    def load(self, path: str | Path) -> Any:
        """Load a YAML or JSON document from file."""
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() == ".json":
            return json.loads(text)
        return self.yaml.load(text)

    def load_schema(self, schema_path: str | Path) -> dict[str, Any]:
        """Load a YAML schema from file."""
        schema = self.load(schema_path)
        if not isinstance(schema, dict):
            raise ValueError(f"schema {schema_path} is not a mapping")
        return schema


def dump_json(data: Any, path: str | Path | None = None) -> str:
    """Serialize to JSON; Python floats are written round-trip exact."""
    text = json.dumps(data, indent=2, allow_nan=True)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


# Global instance for easy access
yaml_helper = YamlHelper()
