"""Shared builders for the test suite: terse constructors and seeded random
instance generators used by the property and acceptance tests."""

from fractions import Fraction

from hypothesis import strategies as st

from sigmafield import (
    AtomPartition,
    FiniteSpace,
    GeneratorFamily,
    MeasureAssignment,
    Pmf,
    SubsetMask,
)


def space(*labels):
    return FiniteSpace(tuple(labels))


def mask(sp, *labels):
    return SubsetMask.from_labels(sp, labels)


def family(sp, *label_sets):
    return GeneratorFamily.from_labels(sp, label_sets)


def measure(sp, *pairs):
    return MeasureAssignment.from_labels(sp, pairs)


def blocks_of(partition):
    """Partition blocks as a set of frozensets of labels, for order-free compare."""
    return {frozenset(a.member_labels()) for a in partition.atoms}


# ---------------------------------------------------------------- hypothesis

@st.composite
def small_spaces(draw, max_size=6):
    n = draw(st.integers(min_value=1, max_value=max_size))
    return FiniteSpace(tuple(f"e{i}" for i in range(n)))


@st.composite
def spaces_with_families(draw, max_size=5, max_generators=3):
    sp = draw(small_spaces(max_size=max_size))
    count = draw(st.integers(min_value=0, max_value=max_generators))
    gens = tuple(
        SubsetMask(sp, draw(st.integers(min_value=0, max_value=sp.full_bits)))
        for _ in range(count)
    )
    return sp, GeneratorFamily(sp, gens)


@st.composite
def valid_pmfs(draw, sp):
    weights = draw(
        st.lists(
            st.integers(min_value=0, max_value=8),
            min_size=sp.size,
            max_size=sp.size,
        ).filter(lambda w: sum(w) > 0)
    )
    total = sum(weights)
    return Pmf(sp, tuple(Fraction(w, total) for w in weights))


# --------------------------------------------------------- seeded generators

def random_space(rng, max_size=12):
    n = rng.randint(1, max_size)
    return FiniteSpace(tuple(f"w{i}" for i in range(n)))


def random_family(rng, sp, max_generators=4):
    count = rng.randint(0, max_generators)
    gens = tuple(SubsetMask(sp, rng.randrange(sp.full_bits + 1)) for _ in range(count))
    return GeneratorFamily(sp, gens)


def random_partition(rng, sp, max_blocks=None):
    """Assign each element a random block id; normalize to an AtomPartition."""
    limit = max_blocks or sp.size
    count = rng.randint(1, min(limit, sp.size))
    bits = [0] * count
    for e in range(sp.size):
        bits[rng.randrange(count)] |= 1 << e
    return AtomPartition.from_blocks(sp, [b for b in bits if b])


def random_masses(rng, block_count, positive=False):
    """Exact rational masses summing to 1, as a tuple of Fractions."""
    low = 1 if positive else 0
    while True:
        weights = [rng.randint(low, 9) for _ in range(block_count)]
        if sum(weights) > 0:
            break
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


def union_entry(rng, atoms, hidden):
    """A random union of atoms paired with its exact mass under `hidden`."""
    sp = atoms.space
    blocks = atoms.atoms
    selector = rng.randrange(1 << len(blocks))
    bits = 0
    total = Fraction(0)
    for i in range(len(blocks)):
        if selector >> i & 1:
            bits |= blocks[i].bits
            total += hidden[i]
    return SubsetMask(sp, bits), total


def consistent_assignment(rng, atoms, hidden):
    """A measure assignment consistent with the hidden atom masses that pins
    all of them down.

    Nested prefix unions over a shuffled atom order give a triangular system
    (always determined once the total-mass row joins it); a few redundant
    random unions and a final shuffle keep the shape varied.
    """
    sp = atoms.space
    blocks = atoms.atoms
    order = list(range(len(blocks)))
    rng.shuffle(order)
    entries = []
    bits = 0
    total = Fraction(0)
    for i in order[:-1]:
        bits |= blocks[i].bits
        total += hidden[i]
        entries.append((SubsetMask(sp, bits), total))
    for _ in range(rng.randint(0, 3)):
        entries.append(union_entry(rng, atoms, hidden))
    rng.shuffle(entries)
    return MeasureAssignment(sp, tuple(entries))


def random_conditional(rng, block):
    """A random conditional p.m.f. supported exactly on `block`."""
    sp = block.space
    members = block.indices()
    while True:
        weights = [rng.randint(0, 9) for _ in members]
        if sum(weights) > 0:
            break
    total = sum(weights)
    values = [Fraction(0)] * sp.size
    for e, w in zip(members, weights):
        values[e] = Fraction(w, total)
    return Pmf(sp, tuple(values))
