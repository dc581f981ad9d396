"""The algebras shipped with the package."""
from __future__ import annotations

from importlib import resources

from .algebra import parse_algebra

CORPUS = ("lattice2", "implication2", "majmin2", "baker2", "trivial")


def corpus_file(name):
    return resources.files("cdspectrum").joinpath("corpus").joinpath(f"{name}.alg")


def load_named(name):
    if name not in CORPUS:
        raise KeyError(f"no corpus algebra named {name!r}")
    return parse_algebra(corpus_file(name).read_text(encoding="utf-8"))


def load_corpus():
    return [load_named(n) for n in CORPUS]
