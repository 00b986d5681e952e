"""Loader for the builtin diagram registry."""

from pathlib import Path
from typing import Dict, List, Optional, Tuple

import yaml
from loguru import logger
from pydantic import BaseModel, ValidationError

from virtual_wrt.diagram.codec import VirtualLinkDiagram, parse_diagram

# Built-in diagrams directory (relative to this file)
DIAGRAMS_DIR = Path(__file__).parent.parent / "diagrams"
ENTRY_FILE = "diagram.yaml"


class DiagramEntry(BaseModel):
    name: str
    code: str = ""
    description: str = ""
    provenance: str = ""
    aliases: List[str] = []
    notes: str = ""

    def matches(self, name: str) -> bool:
        return name == self.name or name in self.aliases


class DiagramLibrary:
    """
    Registry of named example diagrams.

    Each entry is a YAML mapping with ``name``, ``code``, ``description``,
    ``provenance``, optional ``aliases`` and free-form ``notes`` on how the
    code was obtained. Entries without a name take their directory name.

    Entries are loaded from: virtual_wrt/diagrams/<entry>/diagram.yaml
    """

    def __init__(self, diagrams_dir: Optional[Path] = None):
        self.diagrams_dir = diagrams_dir or DIAGRAMS_DIR
        self._cache: Dict[str, Tuple[DiagramEntry, float]] = {}  # path -> (entry, mtime)

    def _entry_files(self) -> List[Path]:
        if not self.diagrams_dir.exists():
            logger.warning(f"Diagrams directory not found: {self.diagrams_dir}")
            return []
        return sorted(p / ENTRY_FILE for p in self.diagrams_dir.iterdir() if (p / ENTRY_FILE).exists())

    def _load_entry(self, path: Path) -> Optional[DiagramEntry]:
        mtime = path.stat().st_mtime
        key = str(path)
        if key in self._cache and self._cache[key][1] == mtime:
            return self._cache[key][0]

        logger.debug(f"Loading diagram entry: {path.parent.name}")
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
            data.setdefault("name", path.parent.name)
            entry = DiagramEntry.model_validate(data)
        except (yaml.YAMLError, ValidationError, AttributeError) as e:
            logger.error(f"Skipping invalid diagram entry {path}: {e}")
            return None
        self._cache[key] = (entry, mtime)
        return entry

    def list_entries(self) -> List[DiagramEntry]:
        """Every valid registered diagram, ordered by directory name."""
        return [e for e in (self._load_entry(p) for p in self._entry_files()) if e is not None]

    def names(self) -> List[str]:
        return [e.name for e in self.list_entries()]

    def get_entry(self, name: str) -> Optional[DiagramEntry]:
        return next((e for e in self.list_entries() if e.matches(name)), None)

    def load(self, name: str) -> VirtualLinkDiagram:
        entry = self.get_entry(name)
        if entry is None:
            logger.warning(f"Builtin diagram not found: {name}")
            raise KeyError(f"unknown builtin diagram {name!r}; known: {', '.join(self.names())}")
        return parse_diagram(entry.code, name=entry.name)


_library = DiagramLibrary()


def builtin(name: str) -> VirtualLinkDiagram:
    return _library.load(name)


def builtin_names() -> List[str]:
    return _library.names()
