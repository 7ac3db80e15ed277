"""JSON-schema validation of problem files and arc files.

Schemas are written in YAML under ``protocol/schemas`` and compiled to
``Draft7Validator`` instances once per process.
"""

from pathlib import Path
from typing import Any, Optional

import structlog
from jsonschema import Draft7Validator

from core.errors import NotFound, ProblemFileError
from core.yaml_utils import yaml_helper


class SchemaValidator:
    """Validates documents against the YAML schemas of the protocol directory."""

    def __init__(self, schema_dir: Optional[Path] = None):
        self.logger = structlog.get_logger(__name__)

        if schema_dir is None:
            possible_paths = [
                # From services/invariance/schemas/validators.py up to the project root
                Path(__file__).parent.parent.parent.parent / "protocol" / "schemas",
                Path(__file__).parent.parent / "protocol" / "schemas",
            ]
            for path in possible_paths:
                if path.exists():
                    schema_dir = path
                    break
            else:
                schema_dir = Path.cwd() / "protocol" / "schemas"

        self.schema_dir = Path(schema_dir)
        self._schemas: dict[str, dict[str, Any]] = {}
        self._validators: dict[str, Draft7Validator] = {}
        self._load_schemas()

    def _load_schemas(self) -> None:
        """Load all YAML schemas from the schema directory."""
        if not self.schema_dir.exists():
            self.logger.error("Schema directory does not exist", path=str(self.schema_dir))
            return

        for schema_file in sorted(self.schema_dir.glob("*.yaml")):
            schema = yaml_helper.load_schema(schema_file)
            Draft7Validator.check_schema(schema)
            self._schemas[schema_file.stem] = schema
            self._validators[schema_file.stem] = Draft7Validator(schema)
            self.logger.debug("Loaded schema", name=schema_file.stem)

    def errors(self, obj: Any, schema_name: str) -> list[str]:
        """Every validation error of ``obj``, each prefixed with its JSON path."""
        validator = self._validators.get(schema_name)
        if validator is None:
            raise NotFound(schema_name, sorted(self._validators))
        messages = []
        for error in sorted(validator.iter_errors(obj), key=lambda e: list(map(str, e.path))):
            location = "/".join(str(p) for p in error.path) or "<root>"
            messages.append(f"{location}: {error.message}")
        return messages

    def validate_or_raise(self, obj: Any, schema_name: str, source: str = "<document>") -> Any:
        """Validate and raise ``ProblemFileError`` listing all failures."""
        messages = self.errors(obj, schema_name)
        if messages:
            raise ProblemFileError(messages, source=source)
        return obj

    def is_valid(self, obj: Any, schema_name: str) -> bool:
        """Check validity without raising."""
        return not self.errors(obj, schema_name)

    def get_schema(self, schema_name: str) -> Optional[dict[str, Any]]:
        """Get a loaded schema by name."""
        return self._schemas.get(schema_name)


# Global validator instance
validator = SchemaValidator()
