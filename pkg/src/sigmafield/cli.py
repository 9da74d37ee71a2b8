"""Command line front end.

Eight subcommands over JSON instance files, two output formats, and a fixed
exit-code contract: 0 success, 1 violations found by verify/roundtrip,
2 parse or usage errors, 3 semantically impossible data (solver and
presentation rejections, with the witness on stderr), 4 guard trips.
Output is deterministic byte for byte for a given invocation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from .atoms import AtomPartition, atoms_by_refinement
from .core import GeneratorFamily, MeasureAssignment, Pmf, format_rational, pmf_validate
from .countable import (
    CountablePresentation,
    FiniteAtom,
    is_infinite_shape,
    lazy_pmf_eval,
    measure_of_presented_set,
    partial_sum,
    presentation_dof,
    require_valid_presentation,
    tail_bound,
    validate_presentation,
)
from .errors import GuardExceededError
from .extension import (
    ExtensionSpec,
    canonical_extension,
    degrees_of_freedom,
    extension_roundtrip_check,
    parametrized_extension,
    restrict_pmf,
)
from .field import DEFAULT_ATOM_BOUND, enumerate_field, solve_atom_masses, verify_measure
from .instance import FiniteInstance, InstanceParseError, PresentationInstance, load_instance
from .randomvar import induced_distribution, sigma_of

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_PARSE = 2
EXIT_DATA = 3
EXIT_GUARD = 4

fr = format_rational


class UsageError(ValueError):
    """The instance parsed, but lacks what this subcommand needs."""


@dataclass
class CommandOutput:
    exit_code: int
    document: dict
    table: list


def _finite(instance, command: str) -> FiniteInstance:
    if isinstance(instance, PresentationInstance):
        raise UsageError(f"'{command}' does not support countable presentations")
    return instance


def _atoms_for(fin: FiniteInstance) -> AtomPartition:
    # precedence: explicit generators, else the random variable's level
    # sets, else the trivial field
    if fin.generators.generators:
        return atoms_by_refinement(fin.generators)
    if fin.random_variable is not None:
        return sigma_of(fin.random_variable)
    return atoms_by_refinement(GeneratorFamily(fin.space))


def _measure_or_fail(fin: FiniteInstance, command: str) -> MeasureAssignment:
    if fin.measure is None:
        raise UsageError(f"'{command}' requires a 'measure' section in the instance")
    return fin.measure


def _labels(mask) -> list:
    return list(mask.member_labels())


def _solve(fin: FiniteInstance, atoms: AtomPartition):
    return solve_atom_masses(_measure_or_fail(fin, "this subcommand"), atoms)


def _conditional_pmfs(fin: FiniteInstance, atoms: AtomPartition) -> tuple:
    from .errors import ConditionalPmfError

    rows = fin.conditional_masses
    blocks = atoms.atoms
    if len(rows) != len(blocks):
        raise ConditionalPmfError(
            f"expected {len(blocks)} conditional p.m.f.s (one per atom, canonical "
            f"order), got {len(rows)}"
        )
    out = []
    for i, (block, row) in enumerate(zip(blocks, rows)):
        members = block.indices()
        if len(row) != len(members):
            raise ConditionalPmfError(
                f"conditional p.m.f. {i} has {len(row)} masses but atom {block} "
                f"has {len(members)} elements"
            )
        weights = [0] * fin.space.size
        for e, value in zip(members, row):
            weights[e] = value
        out.append(Pmf(fin.space, tuple(weights)))
    return tuple(out)


def cmd_atoms(instance, args) -> CommandOutput:
    if isinstance(instance, PresentationInstance):
        pres = instance.presentation
        doc_atoms = []
        table = [f"presentation atoms ({len(pres.atoms)}), universe from {pres.first_index}"]
        for i, (shape, mass) in enumerate(zip(pres.atoms, pres.masses)):
            kind = "finite" if isinstance(shape, FiniteAtom) else "infinite"
            doc_atoms.append({"kind": kind, "description": shape.description, "mass": fr(mass)})
            table.append(f"  atom {i}: {shape.description}  mass {fr(mass)}")
        document = {
            "atom_count": len(pres.atoms),
            "first_index": pres.first_index,
            "atoms": doc_atoms,
        }
        return CommandOutput(EXIT_OK, document, table)
    atoms = _atoms_for(instance)
    document = {"atom_count": len(atoms.atoms), "atoms": [_labels(a) for a in atoms.atoms]}
    table = [f"atoms ({len(atoms.atoms)})"]
    for i, block in enumerate(atoms.atoms):
        table.append(f"  atom {i}: {block}")
    return CommandOutput(EXIT_OK, document, table)


def cmd_enum_field(instance, args) -> CommandOutput:
    fin = _finite(instance, "enum-field")
    atoms = _atoms_for(fin)
    field = enumerate_field(atoms, args.guard_atoms)
    document = {"set_count": len(field.sets), "sets": [_labels(s) for s in field.sets]}
    table = [f"field ({len(field.sets)} sets)"]
    table.extend(f"  {s}" for s in field.sets)
    return CommandOutput(EXIT_OK, document, table)


def cmd_verify(instance, args) -> CommandOutput:
    if isinstance(instance, PresentationInstance):
        report = validate_presentation(instance.presentation)
        heading = "presentation verification"
    else:
        fin = instance
        atoms = _atoms_for(fin)
        assignment = fin.measure if fin.measure is not None else MeasureAssignment(fin.space)
        report = verify_measure(assignment, atoms)
        heading = "measure verification"
    document = {
        "valid": report.ok,
        "violations": [{"kind": v.kind, "message": v.message} for v in report.violations],
    }
    if report.ok:
        table = [f"{heading}: OK"]
        return CommandOutput(EXIT_OK, document, table)
    table = [f"{heading}: {len(report.violations)} violation(s)"]
    table.extend(f"  [{v.kind}] {v.message}" for v in report.violations)
    return CommandOutput(EXIT_VIOLATIONS, document, table)


def cmd_extend(instance, args) -> CommandOutput:
    if isinstance(instance, PresentationInstance):
        return _extend_presentation(instance.presentation, args)
    fin = instance
    atoms = _atoms_for(fin)
    masses = solve_atom_masses(_measure_or_fail(fin, "extend"), atoms)
    if fin.conditional_masses is not None:
        spec = ExtensionSpec(masses, _conditional_pmfs(fin, atoms))
        p = parametrized_extension(spec)
        kind = "parametrized"
    else:
        p = canonical_extension(masses)
        kind = "canonical"
    document = {
        "kind": kind,
        "atoms": [_labels(a) for a in atoms.atoms],
        "atom_masses": [fr(m) for m in masses.masses],
        "pmf": {label: fr(p.masses[i]) for i, label in enumerate(fin.space.labels)},
    }
    table = ["atom masses"]
    for i, (block, m) in enumerate(zip(atoms.atoms, masses.masses)):
        table.append(f"  atom {i}: {block}  mass {fr(m)}")
    table.append(f"extension p.m.f. ({kind})")
    for i, label in enumerate(fin.space.labels):
        table.append(f"  p({label}) = {fr(p.masses[i])}")
    return CommandOutput(EXIT_OK, document, table)


def _extend_presentation(pres: CountablePresentation, args) -> CommandOutput:
    require_valid_presentation(pres)
    n = args.prefix
    first = pres.first_index
    values = {}
    for index in range(first, first + n):
        values[pres.label_of(index)] = fr(lazy_pmf_eval(pres, index))
    doc_atoms = []
    atom_lines = []
    for i, shape in enumerate(pres.atoms):
        part = partial_sum(pres, i, n)
        entry = {
            "description": shape.description,
            "mass": fr(pres.masses[i]),
            "partial_sum": fr(part),
        }
        line = f"  atom {i}: partial sum {fr(part)}"
        if is_infinite_shape(shape):
            tail = tail_bound(pres, i, n)
            entry["tail"] = fr(tail)
            line += f", tail {fr(tail)}"
        else:
            entry["tail"] = None
        doc_atoms.append(entry)
        atom_lines.append(line)
    document = {"prefix": n, "pmf_prefix": values, "atoms": doc_atoms}
    table = [f"p.m.f. prefix (first {n} elements from index {first})"]
    table.extend(f"  p({label}) = {mass}" for label, mass in values.items())
    table.append(f"atom totals after {n} terms")
    table.extend(atom_lines)
    return CommandOutput(EXIT_OK, document, table)


def cmd_restrict(instance, args) -> CommandOutput:
    fin = _finite(instance, "restrict")
    if fin.pmf is None:
        raise UsageError("'restrict' requires a 'pmf' section in the instance")
    report = pmf_validate(fin.pmf)
    if not report.ok:
        raise ValueError(
            "the 'pmf' section is not a valid p.m.f.: " + "; ".join(report.messages())
        )
    atoms = _atoms_for(fin)
    masses = restrict_pmf(fin.pmf, atoms)
    document = {
        "atoms": [_labels(a) for a in atoms.atoms],
        "atom_masses": [fr(m) for m in masses.masses],
    }
    table = ["atom masses (restricted from the p.m.f.)"]
    for i, (block, m) in enumerate(zip(atoms.atoms, masses.masses)):
        table.append(f"  atom {i}: {block}  mass {fr(m)}")
    return CommandOutput(EXIT_OK, document, table)


def cmd_sigma(instance, args) -> CommandOutput:
    fin = _finite(instance, "sigma")
    if fin.random_variable is None:
        raise UsageError("'sigma' requires a 'random_variable' section in the instance")
    variable = fin.random_variable
    atoms = sigma_of(variable)
    if fin.pmf is not None:
        p = fin.pmf
    elif fin.measure is not None:
        p = canonical_extension(solve_atom_masses(fin.measure, atoms))
    else:
        raise UsageError("'sigma' requires a 'pmf' or 'measure' section to induce from")
    induced = induced_distribution(variable, p)
    document = {
        "atoms": [_labels(a) for a in atoms.atoms],
        "values": list(variable.codomain_labels),
        "induced": {
            value: fr(induced.masses[i]) for i, value in enumerate(variable.codomain_labels)
        },
    }
    table = [f"sigma(X) atoms ({len(atoms.atoms)})"]
    for i, block in enumerate(atoms.atoms):
        value = variable.value_label(block.least_index())
        table.append(f"  atom {i}: {block}  value {value}")
    table.append("induced distribution")
    for i, value in enumerate(variable.codomain_labels):
        table.append(f"  P(X = {value}) = {fr(induced.masses[i])}")
    return CommandOutput(EXIT_OK, document, table)


def _marker(count) -> object:
    return "countably-infinite" if count is None else count


def cmd_dof(instance, args) -> CommandOutput:
    if isinstance(instance, PresentationInstance):
        pres = instance.presentation
        require_valid_presentation(pres)
        report = presentation_dof(pres)
        doc_atoms = []
        table = ["degrees of freedom"]
        for i, (shape, mass) in enumerate(zip(pres.atoms, pres.masses)):
            if isinstance(shape, FiniteAtom):
                size, contributes = shape.size, shape.size - 1
            else:
                size, contributes = None, None
            doc_atoms.append(
                {
                    "description": shape.description,
                    "size": _marker(size),
                    "mass": fr(mass),
                    "contributes": _marker(contributes),
                }
            )
            table.append(
                f"  atom {i}: size {_marker(size)}  mass {fr(mass)}  "
                f"contributes {_marker(contributes)}"
            )
    else:
        fin = instance
        atoms = _atoms_for(fin)
        masses = solve_atom_masses(_measure_or_fail(fin, "dof"), atoms)
        report = degrees_of_freedom(atoms, masses)
        doc_atoms = []
        table = ["degrees of freedom"]
        for i, (block, mass) in enumerate(zip(atoms.atoms, masses.masses)):
            doc_atoms.append(
                {
                    "set": _labels(block),
                    "size": len(block),
                    "mass": fr(mass),
                    "contributes": len(block) - 1,
                }
            )
            table.append(
                f"  atom {i}: {block}  size {len(block)}  mass {fr(mass)}  "
                f"contributes {len(block) - 1}"
            )
    document = {
        "atoms": doc_atoms,
        "parametrization_dof": _marker(report.parametrization),
        "distinct_extension_dof": _marker(report.distinct_extensions),
    }
    table.append(f"parametrization dof: {_marker(report.parametrization)}")
    table.append(f"distinct-extension dof: {_marker(report.distinct_extensions)}")
    return CommandOutput(EXIT_OK, document, table)


def cmd_roundtrip(instance, args) -> CommandOutput:
    if isinstance(instance, PresentationInstance):
        return _roundtrip_presentation(instance.presentation, args)
    fin = instance
    if fin.generators.generators:
        family = fin.generators
    elif fin.random_variable is not None:
        blocks = sigma_of(fin.random_variable).atoms
        family = GeneratorFamily(fin.space, blocks)
    else:
        family = GeneratorFamily(fin.space)
    report = extension_roundtrip_check(
        _measure_or_fail(fin, "roundtrip"), family, args.guard_atoms
    )
    if report.ok:
        document = {"sets_checked": report.sets_checked, "agreement": True, "mismatch": None}
        table = [f"roundtrip check: {report.sets_checked} field sets re-evaluated, all agree"]
        return CommandOutput(EXIT_OK, document, table)
    event, expected, actual = report.first_mismatch
    document = {
        "sets_checked": report.sets_checked,
        "agreement": False,
        "mismatch": {"set": _labels(event), "expected": fr(expected), "actual": fr(actual)},
    }
    table = [
        f"roundtrip check: mismatch on {event}: expected {fr(expected)}, got {fr(actual)}"
    ]
    return CommandOutput(EXIT_VIOLATIONS, document, table)


def _roundtrip_presentation(pres: CountablePresentation, args) -> CommandOutput:
    require_valid_presentation(pres)
    checks = 0
    mismatch = None
    for i, shape in enumerate(pres.atoms):
        mass = pres.masses[i]
        if is_infinite_shape(shape):
            for n in range(args.prefix + 1):
                checks += 1
                got = partial_sum(pres, i, n) + tail_bound(pres, i, n)
                if got != mass:
                    mismatch = {"atom": i, "depth": n, "expected": fr(mass), "actual": fr(got)}
                    break
        else:
            checks += 1
            got = partial_sum(pres, i, shape.size)
            if got != mass:
                mismatch = {"atom": i, "depth": shape.size, "expected": fr(mass), "actual": fr(got)}
        if mismatch:
            break
    if mismatch is None:
        checks += 2
        if measure_of_presented_set(pres, range(len(pres.atoms))) != 1:
            mismatch = {"atom": None, "depth": None, "expected": "1", "actual": "union of all atoms"}
        elif measure_of_presented_set(pres, ()) != 0:
            mismatch = {"atom": None, "depth": None, "expected": "0", "actual": "empty union"}
    if mismatch is None:
        document = {"checks": checks, "agreement": True, "mismatch": None}
        table = [f"roundtrip check: {checks} partial-sum/tail identities hold exactly"]
        return CommandOutput(EXIT_OK, document, table)
    document = {"checks": checks, "agreement": False, "mismatch": mismatch}
    table = [f"roundtrip check: mismatch {mismatch}"]
    return CommandOutput(EXIT_VIOLATIONS, document, table)


_COMMANDS = (
    ("atoms", cmd_atoms, "atom partition of the instance's sigma-field"),
    ("enum-field", cmd_enum_field, "every member of the generated field"),
    ("verify", cmd_verify, "diagnose the measure assignment (or presentation)"),
    ("extend", cmd_extend, "solve atom masses and extend them to a p.m.f."),
    ("restrict", cmd_restrict, "atom masses of the instance's explicit p.m.f."),
    ("sigma", cmd_sigma, "atoms generated by the random variable, plus its distribution"),
    ("dof", cmd_dof, "degrees of freedom of the extension"),
    ("roundtrip", cmd_roundtrip, "re-measure every field set under the extension"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigmafield",
        description="Atoms of finitely generated sigma-fields and exact "
        "p.m.f. extensions of measures.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("instance", help="path to a JSON instance file")
    common.add_argument(
        "--format", choices=("table", "json"), default="table", help="output format"
    )
    common.add_argument(
        "--guard-atoms",
        type=int,
        default=DEFAULT_ATOM_BOUND,
        metavar="N",
        help="refuse to enumerate fields with more than N atoms (default %(default)s)",
    )
    common.add_argument(
        "--prefix",
        type=int,
        default=16,
        metavar="N",
        help="how many leading elements/terms to report for countable "
        "presentations (default %(default)s)",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        metavar="S",
        help="reserved; the pipeline is deterministic and ignores it",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, handler, help_text in _COMMANDS:
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.prefix < 0:
        print("error: --prefix must be nonnegative", file=sys.stderr)
        return EXIT_PARSE
    try:
        instance = load_instance(args.instance)
        output = args.handler(instance, args)
    except (InstanceParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GuardExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.format == "json":
        print(json.dumps(output.document, indent=2))
    else:
        for line in output.table:
            print(line)
    return output.exit_code
