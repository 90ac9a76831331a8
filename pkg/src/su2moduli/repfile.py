"""Representation files: structured text listing a surface type and its
generator images.

Format (comments with '#', blank lines ignored)::

    genus 1
    boundary 1
    generator 1/2 -1/2 1/2 -1/2
    generator 0.5 0.5 0.5 -0.5
    generator ...

Components written as integers or rationals (``p/q``) are kept exact;
anything with a decimal point or exponent is a float.  When every entry of
every generator is exact, the exact-arithmetic path is available and
`exact_images` is populated.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import ExactQuaternion
from .su2 import Quaternion, SurfacePresentation, SurfaceRep
from .tolerances import DEFAULT, Tolerances


class RepFileError(ValueError):
    """Malformed representation file."""


@dataclass
class RepFile:
    presentation: SurfacePresentation
    images: list                      # float quaternion tuples
    exact_images: list | None = None  # ExactQuaternion list when all exact

    @property
    def is_exact(self) -> bool:
        return self.exact_images is not None

    def surface_rep(self, tol: Tolerances = DEFAULT) -> SurfaceRep:
        """Validated SurfaceRep (raises ValueError on relation violation)."""
        return SurfaceRep(self.presentation, list(self.images), tol=tol)


def _parse_component(tok: str):
    """(float value, exact Fraction or None)."""
    if any(c in tok for c in ".eE") and not tok.lstrip("+-").isdigit():
        try:
            return float(tok), None
        except ValueError:
            raise RepFileError(f"bad component {tok!r}") from None
    try:
        f = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise RepFileError(f"bad component {tok!r}") from None
    return float(f), f


def parse_repfile_text(text: str) -> RepFile:
    genus = boundary = None
    floats: list = []
    exacts: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0].lower()
        if key in ("genus", "boundary"):
            if len(parts) != 2 or not parts[1].lstrip("+-").isdigit():
                raise RepFileError(f"line {lineno}: {key} needs one integer")
            if key == "genus":
                genus = int(parts[1])
            else:
                boundary = int(parts[1])
        elif key == "generator":
            if len(parts) != 5:
                raise RepFileError(
                    f"line {lineno}: generator needs four components")
            comp = [_parse_component(t) for t in parts[1:]]
            floats.append(tuple(v for v, _ in comp))
            exacts.append(tuple(f for _, f in comp))
        else:
            raise RepFileError(f"line {lineno}: unknown key {key!r}")
    if genus is None or boundary is None:
        raise RepFileError("missing genus or boundary line")
    if genus == 0 and boundary == 0:
        raise RepFileError("closed sphere (g=0, n=0) is out of scope")
    try:
        pres = SurfacePresentation(genus, boundary)
    except ValueError as e:
        raise RepFileError(str(e)) from None
    if len(floats) != pres.num_generators:
        raise RepFileError(
            f"expected {pres.num_generators} generators, got {len(floats)}")
    exact_images = None
    if all(all(f is not None for f in row) for row in exacts):
        exact_images = [ExactQuaternion.of(*row) for row in exacts]
    return RepFile(pres, floats, exact_images)


def parse_repfile(path) -> RepFile:
    with open(path) as fh:
        return parse_repfile_text(fh.read())


def format_repfile(pres: SurfacePresentation, images) -> str:
    """Inverse of parse_repfile_text for float or exact rational images."""
    lines = [f"genus {pres.genus}", f"boundary {pres.boundary}"]
    for g in images:
        if isinstance(g, ExactQuaternion):
            g = g.to_float()
        lines.append("generator " + " ".join(repr(float(c)) for c in g))
    return "\n".join(lines) + "\n"
