"""Finite membership structures and the classes over them.

A Structure is a finite model of the language with one binary relation. A
class is any subset of its domain; "C is a set in m" means some element of m
has exactly C as its extension. Structures need not be extensional: several
elements may share an extension, and is_represented then returns the one with
the lowest index.

Extensions are handled as bitmaps (bit x set when x is a member), which is what
the exhaustive sweeps iterate over.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .guards import BudgetError, InputError, check_budget, validate_input
from .hf_store import SetHandle, SetStore

logger = logging.getLogger(__name__)

ORIGIN_EXPLICIT = 'explicit'
ORIGIN_FORMULA = 'formula'
ORIGIN_BUILDER = 'builder'


@dataclass(frozen=True)
class Structure:
    size: int
    membership: Tuple[Tuple[bool, ...], ...]
    labels: Tuple[str, ...] = ()
    extensions: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise InputError(f"structure size must be >= 0, got {self.size}")
        if len(self.membership) != self.size or any(len(row) != self.size for row in self.membership):
            raise InputError(f"membership relation is not {self.size}x{self.size}")
        if self.labels and len(self.labels) != self.size:
            raise InputError(f"{len(self.labels)} labels for {self.size} elements")
        masks = tuple(
            sum(1 << x for x in range(self.size) if self.membership[x][e])
            for e in range(self.size)
        )
        object.__setattr__(self, 'extensions', masks)

    @classmethod
    def from_bitmap(cls, size: int, bitmap: int, labels: Sequence[str] = ()) -> 'Structure':
        """Bit i*size + j of the bitmap says element i is a member of element j"""
        rows = tuple(
            tuple(bool((bitmap >> (i * size + j)) & 1) for j in range(size))
            for i in range(size)
        )
        return cls(size, rows, tuple(labels))

    @classmethod
    def from_pairs(cls, names: Sequence[str], pairs: Iterable[Tuple[str, str]]) -> 'Structure':
        index = {name: i for i, name in enumerate(names)}
        rows = [[False] * len(names) for _ in names]
        for member, parent in pairs:
            rows[index[member]][index[parent]] = True
        return cls(len(names), tuple(tuple(r) for r in rows), tuple(names))

    @property
    def bitmap(self) -> int:
        return sum(
            1 << (i * self.size + j)
            for i in range(self.size) for j in range(self.size)
            if self.membership[i][j]
        )

    @property
    def domain(self) -> range:
        return range(self.size)

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels else f"e{e}"

    def index_of(self, name: str) -> int:
        names = self.labels or tuple(f"e{i}" for i in range(self.size))
        try:
            return names.index(name)
        except ValueError:
            raise InputError(f"unknown element '{name}'")

    def member(self, x: int, e: int) -> bool:
        return self.membership[x][e]

    def dumps(self) -> str:
        lines = ['elements ' + ' '.join(self.label(e) for e in self.domain)]
        lines += [f"member {self.label(x)} {self.label(e)}"
                  for x in self.domain for e in self.domain if self.membership[x][e]]
        return '\n'.join(lines) + '\n'


@dataclass(frozen=True)
class ClassRef:
    extension: FrozenSet[int]
    origin: str = ORIGIN_EXPLICIT
    source: str = ''

    @classmethod
    def from_mask(cls, mask: int, origin: str = ORIGIN_EXPLICIT, source: str = '') -> 'ClassRef':
        return cls(frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1), origin, source)

    @property
    def mask(self) -> int:
        return sum(1 << e for e in self.extension)

    def check_within(self, m: Structure) -> None:
        if any(not 0 <= e < m.size for e in self.extension):
            raise InputError(f"class extension {sorted(self.extension)} is not a subset of the domain 0..{m.size - 1}")


def mask_members(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if (mask >> i) & 1]


def load_structure(text: str) -> Structure:
    """Parse the universe file format (`elements ...` then `member x y` lines)"""
    names: Optional[List[str]] = None
    pairs: List[Tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == 'elements':
            if names is not None:
                raise InputError("second 'elements' line", line=lineno)
            if pairs:
                raise InputError("'elements' must come before 'member' lines", line=lineno)
            names = parts[1:]
            for name in names:
                if not validate_input(name, 'element_name'):
                    raise InputError(f"invalid element name '{name}'", line=lineno)
            if len(set(names)) != len(names):
                raise InputError("duplicate element name", line=lineno)
        elif parts[0] == 'member':
            if names is None:
                raise InputError("'member' line before the 'elements' line", line=lineno)
            if len(parts) != 3:
                raise InputError(f"expected 'member x y', got '{line}'", line=lineno)
            for name in parts[1:]:
                if name not in names:
                    raise InputError(f"dangling name '{name}'", line=lineno)
            pairs.append((parts[1], parts[2]))
        else:
            raise InputError(f"cannot parse '{line}'", line=lineno)
    if names is None:
        raise InputError("missing 'elements' line")
    structure = Structure.from_pairs(names, pairs)
    logger.info(f"Loaded structure with {structure.size} elements and {len(pairs)} memberships")
    return structure


def extension_of(m: Structure, e: int) -> FrozenSet[int]:
    return frozenset(x for x in m.domain if m.membership[x][e])


def is_represented(m: Structure, C: ClassRef) -> Optional[int]:
    """Least element whose extension is exactly C, or None"""
    mask = C.mask
    for e, ext in enumerate(m.extensions):
        if ext == mask:
            return e
    return None


def enumerate_structures(n: int, up_to: int = 4, unsafe: bool = False) -> Iterator[Structure]:
    """All 2**(n*n) structures on n elements, in relation-bitmap order"""
    if n < 0:
        raise BudgetError(f"structure size must be >= 0, got {n}")
    check_budget(n, up_to, 'universe size', unsafe)
    for bitmap in range(2 ** (n * n)):
        yield Structure.from_bitmap(n, bitmap)


def extension_table(n: int) -> Iterator[Tuple[int, Tuple[int, ...], int]]:
    """(bitmap, extension masks, russell mask) for every structure on n elements.

    Same order as enumerate_structures, without building Structure objects.
    """
    for bitmap in range(2 ** (n * n)):
        exts = [0] * n
        for i in range(n):
            for j in range(n):
                if (bitmap >> (i * n + j)) & 1:
                    exts[j] |= 1 << i
        russell = sum(1 << e for e in range(n) if not (exts[e] >> e) & 1)
        yield bitmap, tuple(exts), russell


def is_extensional(m: Structure) -> bool:
    return len(set(m.extensions)) == m.size


def grounded_elements(m: Structure) -> FrozenSet[int]:
    """WF(m): elements from which no membership cycle is reachable"""
    grounded = 0
    changed = True
    while changed:
        changed = False
        for e, ext in enumerate(m.extensions):
            if not (grounded >> e) & 1 and ext & ~grounded == 0:
                grounded |= 1 << e
                changed = True
    return frozenset(mask_members(grounded))


def in_n(m: Structure, x: int, y: int, n: int) -> bool:
    """x in^n y: a membership chain x in x1 in ... in y of length n"""
    frontier = 1 << x
    for _ in range(n):
        nxt = 0
        for a in mask_members(frontier):
            nxt |= sum(1 << b for b in m.domain if m.membership[a][b])
        frontier = nxt
    return bool((frontier >> y) & 1)


def structure_from_handles(store: SetStore, handles: Sequence[SetHandle]) -> Structure:
    """The finite structure a family of store sets induces (membership restricted to the family)"""
    index: Dict[SetHandle, int] = {h: i for i, h in enumerate(handles)}
    rows = [[False] * len(handles) for _ in handles]
    for parent in handles:
        for member in store.members(parent):
            if member in index:
                rows[index[member]][index[parent]] = True
    labels = tuple(store.format(h) for h in handles)
    return Structure(len(handles), tuple(tuple(r) for r in rows), labels)
