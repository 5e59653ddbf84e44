"""Reading and writing tensors, Latin hypercubes and hull certificates."""

from __future__ import annotations

import json
from pathlib import Path

from .latin import LatinHypercube, h_of_p, p_of_h
from .polytope import HullCertificate
from .tensor import Tensor


def parse(text: str):
    """Decode a document: JSON tensor, latin or certificate, else Latin text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(text)
        if "terms" in obj:
            return HullCertificate.from_json(obj)
        if obj.get("kind") == "latin":
            return LatinHypercube.from_json(obj)
        return Tensor.from_json(obj)
    return LatinHypercube.from_text(text)


def load(path: str | Path):
    return parse(Path(path).read_text())


def load_tensor(path: str | Path) -> Tensor:
    """A tensor; Latin hypercubes are converted to their permutation matrices."""
    obj = load(path)
    if isinstance(obj, LatinHypercube):
        return p_of_h(obj)
    if isinstance(obj, HullCertificate):
        return obj.target
    return obj


def load_latin(path: str | Path) -> LatinHypercube:
    """A Latin hypercube; a Lambda_1 tensor is converted back."""
    obj = load(path)
    if isinstance(obj, Tensor):
        return h_of_p(obj)
    if not isinstance(obj, LatinHypercube):
        raise ValueError(f"{path}: expected a Latin hypercube")
    return obj


def load_certificate(path: str | Path) -> HullCertificate:
    obj = load(path)
    if not isinstance(obj, HullCertificate):
        raise ValueError(f"{path}: expected a hull certificate")
    return obj


def dumps(obj, fmt: str = "json") -> str:
    if fmt == "text":
        if not isinstance(obj, LatinHypercube):
            raise ValueError("text output is only defined for Latin hypercubes")
        return obj.to_text()
    return json.dumps(obj.to_json(), separators=(",", ":")) + "\n"
