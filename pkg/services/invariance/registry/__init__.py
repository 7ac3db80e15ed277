"""Built-in examples, problem documents and name resolution."""

from pathlib import Path

from registry.entries import BUILTINS, DocumentedLaw, ExampleEntry
from registry.problem_file import entry_from_document, export_problem_file, load_problem_file
from registry.registry import Registry, get, names, registry, self_test


def resolve_target(target: str) -> ExampleEntry:
    """A registry name, or a path to a JSON/YAML problem document."""
    path = Path(target)
    if path.suffix.lower() in {".json", ".yaml", ".yml"} or path.exists():
        return load_problem_file(path)
    return get(target)


__all__ = [
    "BUILTINS",
    "DocumentedLaw",
    "ExampleEntry",
    "Registry",
    "entry_from_document",
    "export_problem_file",
    "get",
    "load_problem_file",
    "names",
    "registry",
    "resolve_target",
    "self_test",
]
