"""Numbered-group oracles over concrete group families.

Every group element is addressed by a natural number code.  A family in
COMPUTABLE mode exposes total ``mult``/``inv``/``eq`` on codes with a
bijective numbering (code 0 is always the identity); a family in CE mode
only promises enumerations of the multiplication table and of the
equal-codes relation, while ``mult``/``inv`` stay total and deterministic
because the built-in presentations compute canonical forms internally.

Codings are fixed so that certificates are reproducible:

* ``free:k``     length-lexicographic reduced words, generator order
                 a < a^-1 < b < b^-1 < ...
* ``zd:d``       per-coordinate zig-zag (0, 1, -1, 2, -2, ...) followed by
                 an iterated Cantor pairing of the d coordinates,
* ``cyclic:m``   residues 0..m-1,
* ``lamplighter``  Z2 wr Z, elements (lamp set, cursor) paired as
                 (bitmask over zig-zagged positions, zig-zag cursor),
* ``redundant-z``  a CE presentation of Z on generators x, y with x = y;
                 codes enumerate all words over {x, x^-1, y, y^-1}
                 length-lexicographically.
"""

from __future__ import annotations

import math
import re

from .budget import Budget, UNKNOWN

COMPUTABLE = "COMPUTABLE"
CE = "CE"


class MalformedSpecError(ValueError):
    """Raised when a group spec string does not parse."""


class PreconditionError(RuntimeError):
    """An operation was invoked outside its contract (wrong mode, bad input)."""


# ---------------------------------------------------------------------------
# integer codings


def zigzag(z: int) -> int:
    """Bijection Z -> N with 0, 1, -1, 2, -2, ... mapping to 0, 1, 2, 3, 4."""
    return 2 * z - 1 if z > 0 else -2 * z


def unzigzag(m: int) -> int:
    return (m + 1) // 2 if m % 2 else -(m // 2)


def cantor_pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(m: int) -> tuple[int, int]:
    s = (math.isqrt(8 * m + 1) - 1) // 2
    y = m - s * (s + 1) // 2
    return s - y, y


def pack_vector(coords: tuple[int, ...]) -> int:
    """Code of an integer vector: zig-zag each coordinate, fold with pairing."""
    parts = [zigzag(c) for c in coords]
    code = parts[-1]
    for p in reversed(parts[:-1]):
        code = cantor_pair(p, code)
    return code


def unpack_vector(code: int, dim: int) -> tuple[int, ...]:
    parts = []
    for _ in range(dim - 1):
        p, code = cantor_unpair(code)
        parts.append(p)
    parts.append(code)
    return tuple(unzigzag(p) for p in parts)


def subset_code(codes) -> int:
    """Goedel number of a finite subset of N (bitmask coding)."""
    mask = 0
    for c in codes:
        mask |= 1 << c
    return mask


def subset_decode(mask: int) -> tuple[int, ...]:
    out = []
    pos = 0
    while mask:
        if mask & 1:
            out.append(pos)
        mask >>= 1
        pos += 1
    return tuple(out)


def canonical_subset(codes) -> tuple[int, ...]:
    """Strictly increasing code tuple; rejects duplicates."""
    out = tuple(sorted(codes))
    for a, b in zip(out, out[1:]):
        if a == b:
            raise ValueError("duplicate code %d in finite subset" % a)
    return out


# ---------------------------------------------------------------------------
# oracles


class GroupOracle:
    """Base class for numbered-group oracles.

    Subclasses fix ``spec``, ``mode`` and the element coding.  ``canon``
    returns the canonical code of the element a code denotes; in COMPUTABLE
    mode it is the identity map except for the mod-m normalisation of
    finite cyclic groups.
    """

    spec: str
    mode: str
    identity = 0
    element_count: int | None = None  # None = infinite
    generator_names: dict[str, int] = {}

    def mult(self, x: int, y: int) -> int:
        raise NotImplementedError

    def inv(self, x: int) -> int:
        raise NotImplementedError

    def canon(self, x: int) -> int:
        return x

    def eq(self, x: int, y: int) -> bool:
        if self.mode != COMPUTABLE:
            raise PreconditionError("eq is only decidable in COMPUTABLE mode")
        return self.canon(x) == self.canon(y)

    # CE-mode surface; COMPUTABLE families leave these unimplemented.
    def multt_enum(self, m: int) -> tuple[int, int, int]:
        raise PreconditionError("multt_enum requires a CE-mode oracle")

    def eq_enum(self, m: int) -> tuple[int, int]:
        raise PreconditionError("eq_enum requires a CE-mode oracle")

    def __repr__(self):
        return "<%s %s mode=%s>" % (type(self).__name__, self.spec, self.mode)


class FreeGroupOracle(GroupOracle):
    """Free group of rank k under the length-lex reduced word coding.

    Letters are numbered 0..2k-1 with letter 2i the i-th generator and
    letter 2i+1 its inverse; the inverse of a letter is its xor with 1.
    """

    mode = COMPUTABLE

    def __init__(self, rank: int):
        if rank < 1:
            raise MalformedSpecError("free group rank must be >= 1")
        self.rank = rank
        self.spec = "free:%d" % rank
        self._alphabet = 2 * rank
        # cumulative counts of reduced words of length < L
        self._offsets = [0, 1]
        self._decode_cache: dict[int, tuple[int, ...]] = {}
        names = "abcdefghijklmnopqrstuvwxyz"
        self.generator_names = {
            names[i]: self.encode_word((2 * i,)) for i in range(min(rank, 26))
        }

    def _offset(self, length: int) -> int:
        while len(self._offsets) <= length:
            n = len(self._offsets) - 1
            self._offsets.append(
                self._offsets[-1] + self._alphabet * (self._alphabet - 1) ** (n - 1)
            )
        return self._offsets[length]

    def encode_word(self, word: tuple[int, ...]) -> int:
        if not word:
            return 0
        a = self._alphabet
        idx = word[0]
        for prev, cur in zip(word, word[1:]):
            bad = prev ^ 1
            r = cur if cur < bad else cur - 1
            idx = idx * (a - 1) + r
        return self._offset(len(word)) + idx

    def decode_word(self, code: int) -> tuple[int, ...]:
        if code == 0:
            return ()
        cached = self._decode_cache.get(code)
        if cached is not None:
            return cached
        length = 1
        while self._offset(length + 1) <= code:
            length += 1
        idx = code - self._offset(length)
        a = self._alphabet
        rs = []
        for _ in range(length - 1):
            idx, r = divmod(idx, a - 1)
            rs.append(r)
        word = [idx]
        for r in reversed(rs):
            bad = word[-1] ^ 1
            word.append(r if r < bad else r + 1)
        out = tuple(word)
        self._decode_cache[code] = out
        return out

    @staticmethod
    def reduce(letters) -> tuple[int, ...]:
        out = []
        for l in letters:
            if out and out[-1] == l ^ 1:
                out.pop()
            else:
                out.append(l)
        return tuple(out)

    def mult(self, x: int, y: int) -> int:
        return self.encode_word(self.reduce(self.decode_word(x) + self.decode_word(y)))

    def inv(self, x: int) -> int:
        return self.encode_word(tuple(l ^ 1 for l in reversed(self.decode_word(x))))

    def word_length(self, x: int) -> int:
        return len(self.decode_word(x))


class ZdOracle(GroupOracle):
    """Free abelian group Z^d with the zig-zag/Cantor coding."""

    mode = COMPUTABLE

    def __init__(self, dim: int):
        if dim < 1:
            raise MalformedSpecError("zd dimension must be >= 1")
        self.dim = dim
        self.spec = "zd:%d" % dim

    def encode_vector(self, coords) -> int:
        coords = tuple(coords)
        if len(coords) != self.dim:
            raise ValueError("expected %d coordinates" % self.dim)
        return pack_vector(coords)

    def decode_vector(self, code: int) -> tuple[int, ...]:
        return unpack_vector(code, self.dim)

    def mult(self, x: int, y: int) -> int:
        a, b = self.decode_vector(x), self.decode_vector(y)
        return pack_vector(tuple(u + v for u, v in zip(a, b)))

    def inv(self, x: int) -> int:
        return pack_vector(tuple(-u for u in self.decode_vector(x)))


class CyclicOracle(GroupOracle):
    """Z/mZ with residue codes 0..m-1.

    A finite group admits no bijective numbering of all of N, so the
    canonical code range is finite and ``canon`` reduces mod m (the mod-map
    constructivization); on canonical codes the numbering is a bijection.
    """

    mode = COMPUTABLE

    def __init__(self, modulus: int):
        if modulus < 2:
            raise MalformedSpecError("cyclic modulus must be >= 2")
        self.modulus = modulus
        self.spec = "cyclic:%d" % modulus
        self.element_count = modulus

    def canon(self, x: int) -> int:
        return x % self.modulus

    def mult(self, x: int, y: int) -> int:
        return (x + y) % self.modulus

    def inv(self, x: int) -> int:
        return (-x) % self.modulus


class LamplighterOracle(GroupOracle):
    """Z2 wr Z: elements are (finite lamp set, cursor) pairs.

    Multiplication shifts the right factor's lamps by the left cursor and
    takes the symmetric difference.  Generators: ``t`` moves the cursor,
    ``s`` toggles the lamp at position 0.
    """

    mode = COMPUTABLE

    def __init__(self):
        self.spec = "lamplighter"
        self.generator_names = {
            "s": self.encode_element(frozenset([0]), 0),
            "t": self.encode_element(frozenset(), 1),
        }

    @staticmethod
    def encode_element(lamps: frozenset, cursor: int) -> int:
        mask = 0
        for p in lamps:
            mask |= 1 << zigzag(p)
        return cantor_pair(mask, zigzag(cursor))

    @staticmethod
    def decode_element(code: int) -> tuple[frozenset, int]:
        mask, zc = cantor_unpair(code)
        lamps = frozenset(unzigzag(p) for p in subset_decode(mask))
        return lamps, unzigzag(zc)

    def mult(self, x: int, y: int) -> int:
        la, ca = self.decode_element(x)
        lb, cb = self.decode_element(y)
        shifted = frozenset(p + ca for p in lb)
        return self.encode_element(la ^ shifted, ca + cb)

    def inv(self, x: int) -> int:
        lamps, c = self.decode_element(x)
        return self.encode_element(frozenset(p - c for p in lamps), -c)


class RedundantZOracle(GroupOracle):
    """CE presentation of Z on two generators x, y subject to x = y.

    Codes enumerate all words over x, x^-1, y, y^-1 length-lexicographically
    (letters 0..3 in that order), so the numbering is far from injective:
    the value of a word is its exponent sum.  ``mult`` concatenates and
    freely reduces (in the rank-2 free group, never using x = y), which
    keeps the group laws exact on codes.

    Enumeration schedules are level-based and therefore reach all pairs and
    triples of bounded codes within a quadratic/cubic number of entries:

    * ``eq_enum`` emits, for N = 0, 1, ..., first the reflexive pair (N, N)
      and then (i, N), (N, i) for each i < N of equal value;
    * ``multt_enum`` emits all true triples with max coordinate N in
      lexicographic order.
    """

    mode = CE

    def __init__(self):
        self.spec = "redundant-z"
        self.generator_names = {"x": 1, "y": 3}
        self._values: dict[int, int] = {0: 0}
        self._eq_stream: list[tuple[int, int]] = []
        self._eq_level = 0
        self._multt_stream: list[tuple[int, int, int]] = []
        self._multt_level = 0

    # words over 4 letters; offset(L) = (4^L - 1) / 3
    @staticmethod
    def _offset(length: int) -> int:
        return ((4 ** length) - 1) // 3

    def encode_word(self, word: tuple[int, ...]) -> int:
        code = 0
        for l in word:
            code = code * 4 + l
        return self._offset(len(word)) + code

    def decode_word(self, code: int) -> tuple[int, ...]:
        length = 0
        while self._offset(length + 1) <= code:
            length += 1
        rest = code - self._offset(length)
        word = []
        for _ in range(length):
            rest, l = divmod(rest, 4)
            word.append(l)
        return tuple(reversed(word))

    def value(self, code: int) -> int:
        """Exponent sum of the word, i.e. the integer the code denotes."""
        v = self._values.get(code)
        if v is None:
            w = self.decode_word(code)
            v = sum(1 if l % 2 == 0 else -1 for l in w)
            self._values[code] = v
        return v

    def canon(self, x: int) -> int:
        v = self.value(x)
        return self.encode_word((0,) * v if v >= 0 else (1,) * (-v))

    def mult(self, x: int, y: int) -> int:
        word = FreeGroupOracle.reduce(self.decode_word(x) + self.decode_word(y))
        return self.encode_word(word)

    def inv(self, x: int) -> int:
        return self.encode_word(tuple(l ^ 1 for l in reversed(self.decode_word(x))))

    def eq_enum(self, m: int) -> tuple[int, int]:
        while len(self._eq_stream) <= m:
            n = self._eq_level
            self._eq_stream.append((n, n))
            vn = self.value(n)
            for i in range(n):
                if self.value(i) == vn:
                    self._eq_stream.append((i, n))
                    self._eq_stream.append((n, i))
            self._eq_level += 1
        return self._eq_stream[m]

    def multt_enum(self, m: int) -> tuple[int, int, int]:
        while len(self._multt_stream) <= m:
            n = self._multt_level
            for i in range(n + 1):
                vi = self.value(i)
                for j in range(n + 1):
                    vj = vi + self.value(j)
                    for k in range(n + 1):
                        if max(i, j, k) == n and self.value(k) == vj:
                            self._multt_stream.append((i, j, k))
            self._multt_level += 1
        return self._multt_stream[m]


class CEView(GroupOracle):
    """A computable oracle with injective numbering re-exposed in CE mode.

    The multiplication table {(i, j, k) : v(i)v(j) = v(k)} has exactly one k
    per pair, so the fixed dovetail enumerates Cantor pairs (i, j) and emits
    (i, j, i*j); the equal-codes relation is the diagonal.
    """

    mode = CE

    def __init__(self, base: GroupOracle):
        if base.mode != COMPUTABLE or base.element_count is not None:
            raise PreconditionError(
                "CEView wraps infinite computable families with bijective numbering"
            )
        self.base = base
        self.spec = base.spec
        self.generator_names = base.generator_names

    def mult(self, x: int, y: int) -> int:
        return self.base.mult(x, y)

    def inv(self, x: int) -> int:
        return self.base.inv(x)

    def canon(self, x: int) -> int:
        return x

    def multt_enum(self, m: int) -> tuple[int, int, int]:
        i, j = cantor_unpair(m)
        return i, j, self.base.mult(i, j)

    def multt_enum_pair(self, m: int) -> tuple[int, int]:
        """First two components of the m-th entry, without evaluating the product."""
        return cantor_unpair(m)

    def eq_enum(self, m: int) -> tuple[int, int]:
        return m, m


# ---------------------------------------------------------------------------
# spec parsing and module-level operation surface

_SPEC_RE = re.compile(r"^(free|zd|cyclic):(\d+)$")


def make_group(spec: str) -> GroupOracle:
    """Build the oracle named by the group DSL.

    Grammar: ``free:<k>=1..> | zd:<d>=1..> | cyclic:<m>=2..> | lamplighter |
    redundant-z``.
    """
    if not isinstance(spec, str):
        raise MalformedSpecError("group spec must be a string")
    s = spec.strip()
    if s == "lamplighter":
        return LamplighterOracle()
    if s == "redundant-z":
        return RedundantZOracle()
    m = _SPEC_RE.match(s)
    if not m:
        raise MalformedSpecError("unrecognised group spec %r" % spec)
    kind, num = m.group(1), int(m.group(2))
    if kind == "free":
        return FreeGroupOracle(num)
    if kind == "zd":
        return ZdOracle(num)
    return CyclicOracle(num)


def mult(g: GroupOracle, x: int, y: int) -> int:
    return g.mult(x, y)


def inv(g: GroupOracle, x: int) -> int:
    return g.inv(x)


def eq_semidecide(g: GroupOracle, x: int, y: int, b: Budget):
    """Scan the equal-codes enumeration for (x, y); EQUAL or UNKNOWN.

    Identical codes are equal outright (the enumeration starts every level
    with its reflexive pair, so this only short-circuits the scan).  Budget
    counts enumeration entries inspected.
    """
    if g.mode != CE:
        raise PreconditionError("eq_semidecide requires a CE-mode oracle")
    if x == y:
        return "EQUAL"
    for m in range(b.steps):
        pair = g.eq_enum(m)
        if pair == (x, y) or pair == (y, x):
            return "EQUAL"
    return UNKNOWN


def ball(g: GroupOracle, gens, radius: int) -> tuple[int, ...]:
    """All products of at most ``radius`` factors from gens, their inverses
    and the identity, as a sorted code tuple."""
    if g.mode != COMPUTABLE:
        raise PreconditionError("ball requires a COMPUTABLE-mode oracle")
    gens = canonical_subset(gens)
    step = set(gens) | {g.inv(x) for x in gens} | {g.identity}
    seen = {g.identity}
    frontier = {g.identity}
    for _ in range(radius):
        frontier = {g.mult(a, s) for a in step for s in frontier} - seen
        if not frontier:
            break
        seen |= frontier
    return tuple(sorted(seen))


# ---------------------------------------------------------------------------
# element literals (used by the CLI and the demos)

_WORD_TOKEN = re.compile(r"([a-zA-Z])(?:\^(-?\d+))?")


def _parse_generator_word(g: GroupOracle, text: str) -> int:
    if text in ("1", "e", ""):
        return g.identity
    pos = 0
    code = g.identity
    while pos < len(text):
        m = _WORD_TOKEN.match(text, pos)
        if not m:
            raise ValueError("cannot parse element %r for %s" % (text, g.spec))
        name, exp = m.group(1), int(m.group(2) or 1)
        if name not in g.generator_names:
            raise ValueError("unknown generator %r for %s" % (name, g.spec))
        gen = g.generator_names[name]
        factor = gen if exp >= 0 else g.inv(gen)
        for _ in range(abs(exp)):
            code = g.mult(code, factor)
        pos = m.end()
    return code


def parse_element(g: GroupOracle, text: str) -> int:
    """Parse one element literal appropriate for the family of ``g``.

    Free, lamplighter and redundant-z take generator words ("a", "ab^-1");
    zd:1 and cyclic take integers ("+1", "-3", "7"); zd:d with d >= 2 takes
    coordinate tuples ("(1,0)").
    """
    text = text.strip()
    if isinstance(g, ZdOracle):
        if g.dim == 1:
            try:
                return g.encode_vector((int(text),))
            except ValueError:
                raise ValueError("zd:1 elements are integers, got %r" % text)
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError("zd:%d elements are tuples like (1,0)" % g.dim)
        try:
            coords = tuple(int(p) for p in text[1:-1].split(","))
        except ValueError:
            raise ValueError("bad coordinates in %r" % text)
        return g.encode_vector(coords)
    if isinstance(g, CyclicOracle):
        try:
            return int(text) % g.modulus
        except ValueError:
            raise ValueError("cyclic elements are integers, got %r" % text)
    base = g.base if isinstance(g, CEView) else g
    if isinstance(g, RedundantZOracle):
        # literal words are kept unreduced: "x^2" is the word xx, code-level
        word = []
        pos = 0
        while pos < len(text):
            m = _WORD_TOKEN.match(text, pos)
            if not m or m.group(1) not in ("x", "y"):
                raise ValueError("redundant-z words use letters x, y: %r" % text)
            letter = 0 if m.group(1) == "x" else 2
            exp = int(m.group(2) or 1)
            word.extend([letter if exp >= 0 else letter ^ 1] * abs(exp))
            pos = m.end()
        return g.encode_word(tuple(word))
    return _parse_generator_word(base, text)


def split_element_list(text: str) -> list[str]:
    """Split a comma-separated element list, respecting parentheses."""
    parts = []
    depth = 0
    cur = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip() or not parts:
        parts.append(cur)
    return parts


def parse_elements(g: GroupOracle, text: str) -> tuple[int, ...]:
    """Parse a comma-separated element list into a sorted code set."""
    return canonical_subset(parse_element(g, p) for p in split_element_list(text))
