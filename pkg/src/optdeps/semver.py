"""NPM-flavored semantic versions and range constraints.

A version is a (major, minor, patch) triple with optional dot-separated
prerelease identifiers and opaque build metadata.  Build metadata is kept for
printing but never takes part in ordering, equality, or hashing.

Ranges cover the syntax found in registry and manifest documents: exact
versions, ``*``, comparators (``>``, ``>=``, ``<``, ``<=``, ``=``), caret and
tilde shorthands, space-separated conjunction, ``||`` disjunction, x-ranges
(``1``, ``1.2``, ``1.2.x``) and hyphen ranges (``1.2.3 - 2.0.0``).  X-ranges
and hyphen ranges are desugared into comparator bounds at parse time and never
appear in the AST.

Prerelease admission rule: a version carrying a prerelease can satisfy a
constraint only if some version-bearing term of that constraint names the
identical (major, minor, patch) triple and itself carries a prerelease.  When
that gate is closed, only ``*`` subtrees count as satisfied.  ``*`` on its own
therefore matches every version, prereleases included.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

__all__ = [
    "ANY",
    "AnyVersion",
    "AtLeast",
    "AtMost",
    "Caret",
    "Conjunction",
    "Constraint",
    "Disjunction",
    "Exact",
    "ParseError",
    "Tilde",
    "Version",
    "compare_versions",
    "format_constraint",
    "parse_constraint",
    "parse_version",
    "sat",
]


class ParseError(ValueError):
    """Malformed version or range text."""


Identifier = int | str


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


@total_ordering
@dataclass(frozen=True, eq=False)
class Version:
    major: int
    minor: int
    patch: int
    prerelease: tuple[Identifier, ...] = ()
    build: str = ""

    def __post_init__(self) -> None:
        if min(self.major, self.minor, self.patch) < 0:
            raise ValueError("version components must be non-negative")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.major, self.minor, self.patch)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return compare_versions(self, other) == 0

    def __hash__(self) -> int:
        # build excluded: must agree with __eq__
        return hash((self.major, self.minor, self.patch, self.prerelease))

    def __lt__(self, other: "Version") -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return compare_versions(self, other) < 0

    def __str__(self) -> str:
        text = f"{self.major}.{self.minor}.{self.patch}"
        if self.prerelease:
            text += "-" + ".".join(str(part) for part in self.prerelease)
        if self.build:
            text += "+" + self.build
        return text


def compare_versions(a: Version, b: Version) -> int:
    """Total order over versions: -1, 0, or 1.  Build metadata is ignored.

    Triples order numerically.  On equal triples a prerelease sorts below the
    plain release.  Prerelease lists compare identifier by identifier: numeric
    identifiers compare as integers and sort below alphanumeric ones,
    alphanumeric identifiers compare lexically, and if one list is a strict
    prefix of the other the shorter one is smaller.
    """
    c = _cmp(a.triple, b.triple)
    if c != 0:
        return c
    if not a.prerelease and not b.prerelease:
        return 0
    if not a.prerelease:
        return 1
    if not b.prerelease:
        return -1
    for x, y in zip(a.prerelease, b.prerelease):
        if x == y:
            continue
        x_num = isinstance(x, int)
        y_num = isinstance(y, int)
        if x_num and y_num:
            return _cmp(x, y)
        if x_num != y_num:
            return -1 if x_num else 1
        return _cmp(x, y)
    return _cmp(len(a.prerelease), len(b.prerelease))


_NUMERIC = r"(?:0|[1-9]\d*)"
_PRE_IDENT = rf"(?:{_NUMERIC}|\d*[A-Za-z-][0-9A-Za-z-]*)"
_VERSION_RE = re.compile(
    rf"({_NUMERIC})\.({_NUMERIC})\.({_NUMERIC})"
    rf"(?:-({_PRE_IDENT}(?:\.{_PRE_IDENT})*))?"
    rf"(?:\+([0-9A-Za-z-]+(?:\.[0-9A-Za-z-]+)*))?"
)


def parse_version(text: str) -> Version:
    """Parse a full version string.  Rejects a leading "v" and partial forms."""
    m = _VERSION_RE.fullmatch(text.strip())
    if m is None:
        raise ParseError(f"malformed version: {text!r}")
    prerelease: tuple[Identifier, ...] = ()
    if m.group(4) is not None:
        prerelease = tuple(
            int(part) if part.isdigit() else part for part in m.group(4).split(".")
        )
    return Version(int(m.group(1)), int(m.group(2)), int(m.group(3)), prerelease, m.group(5) or "")


class Constraint:
    """Base class for range AST nodes.  All nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class AnyVersion(Constraint):
    def __str__(self) -> str:
        return "*"


ANY = AnyVersion()


@dataclass(frozen=True)
class Exact(Constraint):
    version: Version

    def __str__(self) -> str:
        return str(self.version)


@dataclass(frozen=True)
class AtLeast(Constraint):
    version: Version
    inclusive: bool = True

    def __str__(self) -> str:
        return (">=" if self.inclusive else ">") + str(self.version)


@dataclass(frozen=True)
class AtMost(Constraint):
    version: Version
    inclusive: bool = True

    def __str__(self) -> str:
        return ("<=" if self.inclusive else "<") + str(self.version)


@dataclass(frozen=True)
class Caret(Constraint):
    version: Version

    def __str__(self) -> str:
        return "^" + str(self.version)


@dataclass(frozen=True)
class Tilde(Constraint):
    version: Version

    def __str__(self) -> str:
        return "~" + str(self.version)


@dataclass(frozen=True)
class Conjunction(Constraint):
    left: Constraint
    right: Constraint

    def __str__(self) -> str:
        # range syntax has no parentheses, so a disjunction below a
        # conjunction cannot be printed
        if isinstance(self.left, Disjunction) or isinstance(self.right, Disjunction):
            raise ValueError("conjunction over a disjunction has no range syntax")
        return f"{self.left} {self.right}"


@dataclass(frozen=True)
class Disjunction(Constraint):
    left: Constraint
    right: Constraint

    def __str__(self) -> str:
        return f"{self.left} || {self.right}"


def format_constraint(constraint: Constraint) -> str:
    return str(constraint)


def _fold(cls, terms: list[Constraint]) -> Constraint:
    # right-nested so that parse(format(ast)) reproduces parser-shaped ASTs
    out = terms[-1]
    for term in reversed(terms[:-1]):
        out = cls(term, out)
    return out


def parse_constraint(text: str) -> Constraint:
    """Parse range text.  Whitespace-only input (and empty disjuncts) mean "*"."""
    alternatives = [_parse_conjunction(part) for part in text.split("||")]
    return _fold(Disjunction, alternatives)


def _parse_conjunction(text: str) -> Constraint:
    tokens = text.split()
    if not tokens:
        return ANY
    if "-" in tokens:
        if len(tokens) != 3 or tokens[1] != "-":
            raise ParseError(f"malformed hyphen range: {text.strip()!r}")
        return Conjunction(_hyphen_floor(tokens[0]), _hyphen_ceiling(tokens[2]))
    return _fold(Conjunction, [_parse_primitive(token) for token in tokens])


def _full_version(text: str, token: str) -> Version:
    try:
        return parse_version(text)
    except ParseError:
        raise ParseError(f"malformed version in range token {token!r}") from None


def _parse_primitive(token: str) -> Constraint:
    if token in ("*", "x", "X"):
        return ANY
    if token.startswith("^"):
        return Caret(_full_version(token[1:], token))
    if token.startswith("~"):
        return Tilde(_full_version(token[1:], token))
    if token.startswith(">="):
        return AtLeast(_full_version(token[2:], token), inclusive=True)
    if token.startswith(">"):
        return AtLeast(_full_version(token[1:], token), inclusive=False)
    if token.startswith("<="):
        return AtMost(_full_version(token[2:], token), inclusive=True)
    if token.startswith("<"):
        return AtMost(_full_version(token[1:], token), inclusive=False)
    if token.startswith("="):
        return Exact(_full_version(token[1:], token))
    if _VERSION_RE.fullmatch(token):
        return Exact(parse_version(token))
    desugared = _xrange_bounds(token)
    if desugared is not None:
        return desugared
    raise ParseError(f"unrecognized range token: {token!r}")


_XRANGE_RE = re.compile(
    rf"({_NUMERIC}|[xX*])(?:\.({_NUMERIC}|[xX*]))?(?:\.({_NUMERIC}|[xX*]))?"
)


def _parse_partial(token: str) -> tuple[int | None, int | None, int | None] | None:
    m = _XRANGE_RE.fullmatch(token)
    if m is None:
        return None

    def component(group: str | None) -> int | None:
        return None if group is None or group in ("x", "X", "*") else int(group)

    major, minor, patch = component(m.group(1)), component(m.group(2)), component(m.group(3))
    # everything after an x position is meaningless
    if major is None:
        return (None, None, None)
    if minor is None:
        return (major, None, None)
    return (major, minor, patch)


def _bounded(low: Version, high: Version) -> Constraint:
    return Conjunction(AtLeast(low, inclusive=True), AtMost(high, inclusive=False))


def _xrange_bounds(token: str) -> Constraint | None:
    partial = _parse_partial(token)
    if partial is None:
        return None
    major, minor, patch = partial
    if major is None:
        return ANY
    if minor is None:
        return _bounded(Version(major, 0, 0), Version(major + 1, 0, 0))
    if patch is None:
        return _bounded(Version(major, minor, 0), Version(major, minor + 1, 0))
    return None  # full triple: handled as an exact version before we get here


def _hyphen_floor(token: str) -> Constraint:
    if _VERSION_RE.fullmatch(token):
        return AtLeast(parse_version(token), inclusive=True)
    partial = _parse_partial(token)
    if partial is None or partial[0] is None:
        raise ParseError(f"malformed hyphen bound: {token!r}")
    major, minor, patch = partial
    return AtLeast(Version(major, minor or 0, patch or 0), inclusive=True)


def _hyphen_ceiling(token: str) -> Constraint:
    if _VERSION_RE.fullmatch(token):
        return AtMost(parse_version(token), inclusive=True)
    partial = _parse_partial(token)
    if partial is None or partial[0] is None:
        raise ParseError(f"malformed hyphen bound: {token!r}")
    major, minor, _ = partial
    if minor is None:
        return AtMost(Version(major + 1, 0, 0), inclusive=False)
    return AtMost(Version(major, minor + 1, 0), inclusive=False)


def sat(constraint: Constraint, version: Version) -> bool:
    """Decide whether ``version`` satisfies ``constraint``.  Total."""
    if version.prerelease and not _admits_prerelease(constraint, version.triple):
        return _sat_prerelease_blocked(constraint)
    return _sat(constraint, version)


def _admits_prerelease(constraint: Constraint, triple: tuple[int, int, int]) -> bool:
    if isinstance(constraint, (Conjunction, Disjunction)):
        return _admits_prerelease(constraint.left, triple) or _admits_prerelease(
            constraint.right, triple
        )
    witness = getattr(constraint, "version", None)
    return witness is not None and bool(witness.prerelease) and witness.triple == triple


def _sat_prerelease_blocked(constraint: Constraint) -> bool:
    # with the prerelease gate closed only "*" subtrees hold
    if isinstance(constraint, AnyVersion):
        return True
    if isinstance(constraint, Conjunction):
        return _sat_prerelease_blocked(constraint.left) and _sat_prerelease_blocked(
            constraint.right
        )
    if isinstance(constraint, Disjunction):
        return _sat_prerelease_blocked(constraint.left) or _sat_prerelease_blocked(
            constraint.right
        )
    return False


def _sat_caret(base: Version, version: Version) -> bool:
    if compare_versions(version, base) < 0:
        return False
    if base.major > 0:
        return version.major == base.major
    if base.minor > 0:
        return version.major == 0 and version.minor == base.minor
    return version.triple == base.triple


def _sat(constraint: Constraint, version: Version) -> bool:
    match constraint:
        case AnyVersion():
            return True
        case Exact(version=base):
            return compare_versions(version, base) == 0
        case AtLeast(version=base, inclusive=inclusive):
            c = compare_versions(version, base)
            return c > 0 or (inclusive and c == 0)
        case AtMost(version=base, inclusive=inclusive):
            c = compare_versions(version, base)
            return c < 0 or (inclusive and c == 0)
        case Caret(version=base):
            return _sat_caret(base, version)
        case Tilde(version=base):
            return (
                version.major == base.major
                and version.minor == base.minor
                and compare_versions(version, base) >= 0
            )
        case Conjunction(left=left, right=right):
            return _sat(left, version) and _sat(right, version)
        case Disjunction(left=left, right=right):
            return _sat(left, version) or _sat(right, version)
    raise TypeError(f"not a constraint: {constraint!r}")
