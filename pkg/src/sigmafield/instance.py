"""Reading JSON instance documents for the command line front end.

An instance is either finite (an "omega" list plus optional generators,
measure, random variable, conditional p.m.f.s, and an explicit p.m.f.) or
countable (a "presentation" block in the restricted textual form: explicit
finite atoms plus arithmetic-progression infinite atoms). Every parse error
carries the JSON location it came from.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .core import (
    FiniteSpace,
    GeneratorFamily,
    MeasureAssignment,
    Pmf,
    SubsetMask,
    parse_rational,
)
from .countable import ArithmeticAtom, CountablePresentation, FiniteAtom
from .randomvar import FiniteRandomVariable

_FINITE_KEYS = {"omega", "generators", "measure", "random_variable", "conditional_pmfs", "pmf"}


class InstanceParseError(ValueError):
    """A malformed instance document; str() includes the JSON location."""

    def __init__(self, location: str, reason: str):
        super().__init__(f"{location}: {reason}")
        self.location = location
        self.reason = reason


@dataclass(frozen=True)
class FiniteInstance:
    space: FiniteSpace
    generators: GeneratorFamily
    measure: MeasureAssignment | None
    random_variable: FiniteRandomVariable | None
    conditional_masses: tuple[tuple[Fraction, ...], ...] | None
    pmf: Pmf | None


@dataclass(frozen=True)
class PresentationInstance:
    presentation: CountablePresentation


Instance = Union[FiniteInstance, PresentationInstance]


def _expect(value, kind, location: str, what: str):
    if not isinstance(value, kind) or isinstance(value, bool):
        raise InstanceParseError(location, f"expected {what}, got {type(value).__name__}")
    return value


def _rational(value, location: str) -> Fraction:
    text = _expect(value, str, location, "a rational string like '1/3'")
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise InstanceParseError(location, str(exc)) from None


def _label_list(value, space: FiniteSpace, location: str) -> SubsetMask:
    items = _expect(value, list, location, "a list of element labels")
    indices = []
    for k, item in enumerate(items):
        label = _expect(item, str, f"{location}[{k}]", "an element label string")
        try:
            indices.append(space.index_of(label))
        except ValueError as exc:
            raise InstanceParseError(f"{location}[{k}]", str(exc)) from None
    return SubsetMask.from_indices(space, indices)


def load_instance(path) -> Instance:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceParseError(str(path), f"cannot read instance file: {exc.strerror or exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return parse_document(data)


def parse_document(data) -> Instance:
    doc = _expect(data, dict, "$", "a JSON object")
    keys = set(doc)
    if "presentation" in keys:
        extras = keys - {"presentation"}
        if extras:
            raise InstanceParseError(
                sorted(extras)[0], "presentation instances allow no other top-level keys"
            )
        return PresentationInstance(_parse_presentation(doc["presentation"]))
    if "omega" not in keys:
        raise InstanceParseError("$", "an instance needs either 'omega' or 'presentation'")
    unknown = keys - _FINITE_KEYS
    if unknown:
        raise InstanceParseError(sorted(unknown)[0], "unknown key")
    return _parse_finite(doc)


def _parse_finite(doc) -> FiniteInstance:
    omega = _expect(doc["omega"], list, "omega", "a list of element labels")
    labels = []
    for k, item in enumerate(omega):
        labels.append(_expect(item, str, f"omega[{k}]", "an element label string"))
    try:
        space = FiniteSpace(tuple(labels))
    except ValueError as exc:
        raise InstanceParseError("omega", str(exc)) from None

    generator_masks = []
    if "generators" in doc:
        raw = _expect(doc["generators"], list, "generators", "a list of label lists")
        for k, entry in enumerate(raw):
            generator_masks.append(_label_list(entry, space, f"generators[{k}]"))
    generators = GeneratorFamily(space, tuple(generator_masks))

    measure = None
    if "measure" in doc:
        raw = _expect(doc["measure"], list, "measure", "a list of [labels, mass] pairs")
        entries = []
        for k, entry in enumerate(raw):
            pair = _expect(entry, list, f"measure[{k}]", "a [labels, mass] pair")
            if len(pair) != 2:
                raise InstanceParseError(
                    f"measure[{k}]", f"expected a [labels, mass] pair, got {len(pair)} items"
                )
            event = _label_list(pair[0], space, f"measure[{k}][0]")
            mass = _rational(pair[1], f"measure[{k}][1]")
            entries.append((event, mass))
        measure = MeasureAssignment(space, tuple(entries))

    variable = None
    if "random_variable" in doc:
        raw = _expect(doc["random_variable"], dict, "random_variable", "a label-to-value object")
        mapping = {}
        for key, value in raw.items():
            mapping[key] = _expect(value, str, f"random_variable[{key!r}]", "a value string")
            try:
                space.index_of(key)
            except ValueError as exc:
                raise InstanceParseError(f"random_variable[{key!r}]", str(exc)) from None
        try:
            variable = FiniteRandomVariable.from_mapping(space, mapping)
        except ValueError as exc:
            raise InstanceParseError("random_variable", str(exc)) from None

    conditional = None
    if "conditional_pmfs" in doc:
        raw = _expect(
            doc["conditional_pmfs"], list, "conditional_pmfs", "a list of per-atom mass lists"
        )
        rows = []
        for k, entry in enumerate(raw):
            row = _expect(entry, list, f"conditional_pmfs[{k}]", "a list of rational strings")
            rows.append(
                tuple(_rational(v, f"conditional_pmfs[{k}][{j}]") for j, v in enumerate(row))
            )
        conditional = tuple(rows)

    pmf = None
    if "pmf" in doc:
        raw = _expect(doc["pmf"], list, "pmf", "a list of rational strings, one per element")
        values = tuple(_rational(v, f"pmf[{k}]") for k, v in enumerate(raw))
        if len(values) != space.size:
            raise InstanceParseError(
                "pmf", f"expected {space.size} masses (one per element), got {len(values)}"
            )
        pmf = Pmf(space, values)

    return FiniteInstance(space, generators, measure, variable, conditional, pmf)


def _parse_presentation(data) -> CountablePresentation:
    block = _expect(data, dict, "presentation", "an object")
    unknown = set(block) - {"first_index", "atoms"}
    if unknown:
        raise InstanceParseError(f"presentation.{sorted(unknown)[0]}", "unknown key")
    first_index = 0
    if "first_index" in block:
        first_index = _expect(
            block["first_index"], int, "presentation.first_index", "an integer"
        )
        if first_index < 0:
            raise InstanceParseError("presentation.first_index", "must be nonnegative")
    if "atoms" not in block:
        raise InstanceParseError("presentation", "missing 'atoms'")
    raw_atoms = _expect(block["atoms"], list, "presentation.atoms", "a list of atom objects")
    if not raw_atoms:
        raise InstanceParseError("presentation.atoms", "at least one atom is required")

    parsed = []
    masses = []
    claimed: list[int] = []
    for k, entry in enumerate(raw_atoms):
        where = f"presentation.atoms[{k}]"
        obj = _expect(entry, dict, where, "an atom object")
        kind = _expect(obj.get("kind"), str, f"{where}.kind", "'finite' or 'arithmetic'")
        masses.append(_rational(obj.get("mass"), f"{where}.mass"))
        if kind == "finite":
            extras = set(obj) - {"kind", "indices", "mass"}
            if extras:
                raise InstanceParseError(f"{where}.{sorted(extras)[0]}", "unknown key")
            indices = _expect(obj.get("indices"), list, f"{where}.indices", "a list of integers")
            cleaned = []
            for j, n in enumerate(indices):
                n = _expect(n, int, f"{where}.indices[{j}]", "an integer")
                if n < first_index:
                    raise InstanceParseError(
                        f"{where}.indices[{j}]",
                        f"index {n} is below the universe start {first_index}",
                    )
                cleaned.append(n)
            if not cleaned:
                raise InstanceParseError(f"{where}.indices", "a finite atom needs an index")
            parsed.append(("finite", tuple(cleaned)))
            claimed.extend(cleaned)
        elif kind == "arithmetic":
            extras = set(obj) - {"kind", "residue", "modulus", "mass"}
            if extras:
                raise InstanceParseError(f"{where}.{sorted(extras)[0]}", "unknown key")
            residue = _expect(obj.get("residue"), int, f"{where}.residue", "an integer")
            modulus = _expect(obj.get("modulus"), int, f"{where}.modulus", "an integer")
            if modulus < 1:
                raise InstanceParseError(f"{where}.modulus", "must be at least 1")
            parsed.append(("arithmetic", (residue, modulus)))
        else:
            raise InstanceParseError(f"{where}.kind", f"unknown atom kind {kind!r}")

    shapes = []
    for k, (kind, payload) in enumerate(parsed):
        if kind == "finite":
            shapes.append(FiniteAtom(payload))
        else:
            residue, modulus = payload
            # progressions silently skip indices explicitly claimed by
            # finite atoms, so the two forms can coexist
            exclude = tuple(
                sorted(
                    n
                    for n in set(claimed)
                    if n >= first_index and n % modulus == residue % modulus
                )
            )
            shapes.append(
                ArithmeticAtom(
                    residue=residue, modulus=modulus, first_index=first_index, exclude=exclude
                )
            )
    try:
        return CountablePresentation(
            atoms=tuple(shapes), masses=tuple(masses), first_index=first_index
        )
    except ValueError as exc:
        raise InstanceParseError("presentation", str(exc)) from None
