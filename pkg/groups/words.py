# groups/words.py
from dataclasses import dataclass
from string import ascii_lowercase
from typing import Iterable, Sequence

from errors import InputError

FREE = "free"
FREE_ABELIAN = "free_abelian"
FAMILIES = (FREE, FREE_ABELIAN)

# "e" queda reservada para la identidad
LETTERS = ascii_lowercase.replace("e", "")
IDENTITY = "e"


def inverse_symbol(s: str) -> str:
    return s.swapcase()


@dataclass(frozen=True)
class GroupSpec:
    """Grupo libre F_k o libre abeliano Z^d con S = {a, A, b, B, ...} (mayúscula = inverso)."""

    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"familia desconocida: {self.family!r}", "/group/family")
        if not isinstance(self.rank, int) or not 1 <= self.rank <= len(LETTERS):
            raise InputError(f"rango inválido: {self.rank!r}", "/group/rank")

    @property
    def generators(self) -> tuple[str, ...]:
        gens = []
        for c in LETTERS[: self.rank]:
            gens += [c, c.upper()]
        return tuple(gens)

    @property
    def order(self) -> int:
        """#S"""
        return 2 * self.rank

    @property
    def is_free(self) -> bool:
        return self.family == FREE

    def identity(self) -> "Word":
        return Word(self, ())

    def generator_words(self) -> tuple["Word", ...]:
        return tuple(Word(self, (s,)) for s in self.generators)

    def word(self, text: str) -> "Word":
        """Parsea 'aBb' o 'e' (identidad)."""
        text = text.strip()
        if text in ("", IDENTITY):
            return self.identity()
        return reduce(self, tuple(text))

    @classmethod
    def from_dict(cls, data: dict, pointer: str = "/group") -> "GroupSpec":
        if not isinstance(data, dict):
            raise InputError("se esperaba un objeto", pointer)
        if "family" not in data:
            raise InputError("falta 'family'", f"{pointer}/family")
        if "rank" not in data:
            raise InputError("falta 'rank'", f"{pointer}/rank")
        return cls(family=data["family"], rank=data["rank"])

    def to_dict(self) -> dict:
        return {"family": self.family, "rank": self.rank}

    def __str__(self):
        return f"F{self.rank}" if self.is_free else f"Z^{self.rank}"


@dataclass(frozen=True)
class Word:
    spec: GroupSpec
    letters: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self) -> tuple:
        order = {s: i for i, s in enumerate(self.spec.generators)}
        return (len(self.letters), tuple(order[s] for s in self.letters))

    def __str__(self):
        return "".join(self.letters) or IDENTITY

    def __repr__(self):
        return f"Word({self})"


def _check_symbols(spec: GroupSpec, letters: Sequence[str]) -> None:
    known = set(spec.generators)
    for s in letters:
        if s not in known:
            raise InputError(f"generador desconocido {s!r} para {spec}")


def exponents(word: Word) -> tuple[int, ...]:
    vec = [0] * word.spec.rank
    for s in word.letters:
        i = LETTERS.index(s.lower())
        vec[i] += 1 if s.islower() else -1
    return tuple(vec)


def from_exponents(spec: GroupSpec, vec: Sequence[int]) -> Word:
    if spec.is_free:
        raise InputError("vectores de exponentes sólo para Z^d")
    if len(vec) != spec.rank:
        raise InputError(f"se esperaban {spec.rank} exponentes, hay {len(vec)}")
    letters: list[str] = []
    for c, e in zip(LETTERS, vec):
        letters += [c if e > 0 else c.upper()] * abs(int(e))
    return Word(spec, tuple(letters))


def reduce(spec: GroupSpec, letters: Iterable[str]) -> Word:
    letters = tuple(letters)
    _check_symbols(spec, letters)
    if spec.is_free:
        stack: list[str] = []
        for s in letters:
            if stack and stack[-1] == inverse_symbol(s):
                stack.pop()
            else:
                stack.append(s)
        return Word(spec, tuple(stack))
    # Z^d: forma canónica por vector de exponentes
    return from_exponents(spec, exponents(Word(spec, letters)))


def _same_group(g: Word, h: Word) -> None:
    if g.spec != h.spec:
        raise InputError(f"palabras de grupos distintos: {g.spec} y {h.spec}")


def mul(g: Word, h: Word) -> Word:
    _same_group(g, h)
    if not g.spec.is_free:
        return from_exponents(g.spec, [x + y for x, y in zip(exponents(g), exponents(h))])
    # ambas reducidas: sólo cancela en la frontera
    a, b = g.letters, h.letters
    i = 0
    while i < min(len(a), len(b)) and a[len(a) - 1 - i] == inverse_symbol(b[i]):
        i += 1
    return Word(g.spec, a[: len(a) - i] + b[i:])


def inv(g: Word) -> Word:
    letters = tuple(inverse_symbol(s) for s in reversed(g.letters))
    if g.spec.is_free:
        return Word(g.spec, letters)
    return reduce(g.spec, letters)


def distance(g: Word, h: Word) -> int:
    """d(g, h) = |g⁻¹h|"""
    return mul(inv(g), h).length
