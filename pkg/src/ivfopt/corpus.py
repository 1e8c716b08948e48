"""Built-in IVFs shipped as ``.ivf`` files inside the package."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import UnknownCorpusEntry
from .ivf import PiecewiseIvf, parse_ivf

CORPUS_PREFIX = "corpus:"


def _root():
    return resources.files(__package__).joinpath("corpus")


def corpus_names() -> list[str]:
    return sorted(p.name[: -len(".ivf")] for p in _root().iterdir() if p.name.endswith(".ivf"))


def corpus_text(name: str) -> str:
    entry = _root().joinpath(f"{name}.ivf")
    if not entry.is_file():
        raise UnknownCorpusEntry(f"unknown corpus entry {name!r}; known: {', '.join(corpus_names())}")
    return entry.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def corpus_get(name: str) -> PiecewiseIvf:
    return parse_ivf(corpus_text(name))


def load_ivf(ref: str) -> PiecewiseIvf:
    """Resolve ``corpus:<name>`` or a filesystem path."""
    if ref.startswith(CORPUS_PREFIX):
        return corpus_get(ref[len(CORPUS_PREFIX):])
    return parse_ivf(Path(ref).read_text(encoding="utf-8"))
