"""Variable frames: ordered coordinate names with exceptional flags, owning the exact polynomial ring."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from folres.exceptions import FrameMismatchError, InputError

Poly = PolyElement


@lru_cache(maxsize=256)
def _ring_for(names: tuple[str, ...]) -> PolyRing:
    return PolyRing(list(names), QQ, grevlex)


@dataclass(frozen=True)
class Frame:
    """
    Ordered chart coordinates. Exceptional variables cut the components of the SNC divisor.

    Frames with the same names share one ring, so exceptional flags never affect arithmetic.
    """

    names: tuple[str, ...]
    exceptional: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not self.names:
            raise InputError("a frame needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate variable names in frame", context={"names": ",".join(self.names)})
        stray = self.exceptional - set(self.names)
        if stray:
            raise InputError("exceptional flag on unknown variable", context={"names": ",".join(sorted(stray))})

    @classmethod
    def of(cls, names: Iterable[str], exceptional: Iterable[str] = ()) -> Frame:
        return cls(tuple(names), frozenset(exceptional))

    @property
    def ring(self) -> PolyRing:
        return _ring_for(self.names)

    @property
    def dimension(self) -> int:
        return len(self.names)

    @property
    def zero(self) -> Poly:
        return self.ring.zero

    @property
    def one(self) -> Poly:
        return self.ring.one

    @property
    def exceptional_names(self) -> tuple[str, ...]:
        """Exceptional variables in frame order."""
        return tuple(n for n in self.names if n in self.exceptional)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise FrameMismatchError(
                f"variable {name!r} is not part of the frame", context={"frame": ",".join(self.names)}
            ) from None

    def gen(self, name: str) -> Poly:
        return self.ring.gens[self.index(name)]

    def is_exceptional(self, name: str) -> bool:
        return name in self.exceptional

    def constant(self, value: object) -> Poly:
        return self.ring.ground_new(QQ.convert(value))

    def monomial(self, exponents: Iterable[int], coefficient: object = 1) -> Poly:
        exps = tuple(int(e) for e in exponents)
        if len(exps) != self.dimension:
            raise FrameMismatchError("exponent vector length differs from frame dimension")
        return self.ring.from_dict({exps: QQ.convert(coefficient)})

    def with_exceptional(self, *names: str) -> Frame:
        for name in names:
            self.index(name)
        return Frame(self.names, self.exceptional | frozenset(names))

    def without_exceptional(self, *names: str) -> Frame:
        return Frame(self.names, self.exceptional - frozenset(names))

    def drop(self, name: str) -> Frame:
        self.index(name)
        return Frame(tuple(n for n in self.names if n != name), self.exceptional - {name})

    def insert(self, name: str, position: int, *, exceptional: bool = False) -> Frame:
        if name in self.names:
            raise InputError(f"variable {name!r} already in frame")
        names = list(self.names)
        names.insert(position, name)
        flags = self.exceptional | ({name} if exceptional else set())
        return Frame(tuple(names), frozenset(flags))

    def require(self, *polys: Poly) -> None:
        """Raise FrameMismatchError unless every poly lives in this frame's ring."""
        for p in polys:
            if p.ring != self.ring:
                raise FrameMismatchError(
                    "operand belongs to a different variable frame",
                    context={"expected": ",".join(self.names), "got": ",".join(str(s) for s in p.ring.symbols)},
                )

    def describe(self) -> str:
        return " ".join(f"{n}!" if n in self.exceptional else n for n in self.names)
