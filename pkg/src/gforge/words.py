"""Freely reduced words over edge instances.

A word is a product of edge instances and their formal inverses, kept in
reduced form (no x.x^-1 or x^-1.x next to each other).  Serialization uses
dots: "a.b^-1.f[3]"; the empty word prints as "1".  Copy indices appear only
when positive, so "f" means the 0th copy of f.
"""
from __future__ import annotations

import re

from .graph import EdgeInstance

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\[(\d+)\])?(\^-1)?$")


class WordError(ValueError):
    pass


def _reduce(letters):
    out = []
    for let in letters:
        if out and out[-1][0] == let[0] and out[-1][1] == -let[1]:
            out.pop()
        else:
            out.append(let)
    return tuple(out)


class ReducedWord:
    """Element of the free group on edge instances."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters=()):
        self.letters = _reduce(tuple(letters))
        self._hash = hash(self.letters)

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_path(cls, mu):
        return cls((inst, 1) for inst in mu.instances)

    @classmethod
    def from_pair(cls, mu, nu):
        """mu . nu^-1 for paths mu, nu."""
        pos = [(inst, 1) for inst in mu.instances]
        neg = [(inst, -1) for inst in reversed(nu.instances)]
        return cls(pos + neg)

    def __mul__(self, other):
        if not isinstance(other, ReducedWord):
            return NotImplemented
        return ReducedWord(self.letters + other.letters)

    def inverse(self):
        return ReducedWord((inst, -s) for inst, s in reversed(self.letters))

    def __pow__(self, n: int):
        if n == 0:
            return ReducedWord()
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        if not isinstance(other, ReducedWord):
            return NotImplemented
        return self.letters == other.letters

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ReducedWord({str(self)!r})"

    def __str__(self):
        if not self.letters:
            return "1"
        toks = []
        for (eid, copy), sign in self.letters:
            t = eid if copy == 0 else f"{eid}[{copy}]"
            toks.append(t if sign == 1 else t + "^-1")
        return ".".join(toks)

    @property
    def is_identity(self):
        return not self.letters

    def sort_key(self):
        return (len(self.letters), tuple((e, c, s) for (e, c), s in self.letters))

    # shape helpers: a word can act on paths only when it reads as a positive
    # block followed by a negative block
    def positive_negative_split(self):
        """(pos_instances, neg_instances) if shaped alpha.beta^-1, else None.

        neg_instances come out in path order (range end first).
        """
        pos = []
        neg = []
        stage = 1
        for inst, sign in self.letters:
            if sign == 1:
                if stage == -1:
                    return None
                pos.append(inst)
            else:
                stage = -1
                neg.append(inst)
        neg.reverse()
        return pos, neg


def parse_word(text: str) -> ReducedWord:
    text = text.strip()
    if text in ("1", ""):
        return ReducedWord()
    letters = []
    for tok in text.split("."):
        m = _TOKEN.match(tok.strip())
        if not m:
            raise WordError(f"bad word token {tok!r}")
        eid, copy, inv = m.groups()
        letters.append((EdgeInstance(eid, int(copy) if copy else 0), -1 if inv else 1))
    return ReducedWord(letters)
