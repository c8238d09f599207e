"""Content-addressed file cache for saturated presentations

Entries are keyed by the SHA-256 of the presentation document (base
collection, property, bounds, loop mode, scopes). Cells and congruence
classes are stored in their text form and parsed back on load.
"""
import hashlib
import logging
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field

from .collection import PointedCollection
from .contraction import free_operad
from .export import presentation_to_doc
from .operads import Bounds, OperadPresentation, Property
from .syntax import format_term, parse_term

logger = logging.getLogger(__name__)


class CacheEntry(BaseModel):
    cells: List[List[str]]
    classes: List[List[str]] = Field(default_factory=list)


class PresentationCache:
    """JSON cell tables under a directory"""

    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)

    def key(self, P: OperadPresentation) -> str:
        doc = presentation_to_doc(P).model_dump_json(exclude={"label", "cells"})
        return hashlib.sha256(doc.encode("utf-8")).hexdigest()

    def path(self, P: OperadPresentation) -> Path:
        return self.directory / f"{self.key(P)}.json"

    def load(self, P: OperadPresentation) -> bool:
        """Install cached cells into P; False when there is no entry"""
        path = self.path(P)
        if not path.exists():
            logger.info("cache miss for %s", P.label)
            return False
        entry = CacheEntry.model_validate_json(path.read_text(encoding="utf-8"))
        alg = P.algebra
        cells = []
        # a layer may paste across classes of the layers below
        for texts in entry.cells:
            layer = [parse_term(text, alg) for text in texts]
            cells.append(layer)
            if not P.property.strict:
                continue
            parsed = dict(zip(texts, layer))
            for t in layer:
                P.congruence.add(t)
            for group in entry.classes:
                if group[0] in parsed:
                    for text in group[1:]:
                        P.congruence.union(parsed[group[0]], parsed[text])
        P.install(cells)
        logger.info("cache hit for %s", P.label)
        return True

    def store(self, P: OperadPresentation) -> Path:
        alg = P.algebra
        entry = CacheEntry(
            cells=[[format_term(alg, t) for t in layer] for layer in P.cells],
            classes=[
                [format_term(alg, t) for t in group] for group in P.congruence.classes() if len(group) > 1
            ],
        )
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(P)
        path.write_text(entry.model_dump_json(), encoding="utf-8")
        logger.info("cached %s at %s", P.label, path)
        return path


def cached_free_operad(
    base: PointedCollection,
    property: Property,
    bounds: Optional[Bounds] = None,
    cache_dir: Optional[Path] = None,
    **kwargs,
) -> OperadPresentation:
    """free_operad, read from and written to cache_dir when one is given"""
    if cache_dir is None:
        return free_operad(base, property, bounds, **kwargs)
    cache = PresentationCache(cache_dir)
    P = OperadPresentation(base, property, bounds, **kwargs)
    if not cache.load(P):
        P.cells
        cache.store(P)
    return P
