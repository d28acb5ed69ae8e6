"""Finite asynchronous CCS terms: AST, parser, printer and structural metrics.

Concrete syntax::

    0          the inert process
    tau.P      internal step, then P
    a.P        input on channel a, then P
    'a         output on channel a
    P | Q      parallel composition
    P + Q      choice

Precedence from loosest to tightest is ``+``, ``|``, prefix. Both binary
operators associate to the left.
"""
from __future__ import annotations

import re
import weakref
from functools import lru_cache

__all__ = [
    "Process", "Nil", "Tau", "Input", "Output", "Par", "Sum", "NIL",
    "CcsSyntaxError", "is_channel", "parse", "render", "channels",
    "prefix_measure", "size", "subterms",
]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
RESERVED = frozenset({"tau"})


def is_channel(name) -> bool:
    return (isinstance(name, str) and _IDENT.fullmatch(name) is not None
            and name not in RESERVED)


def _check_channel(name):
    if not is_channel(name):
        raise ValueError(f"invalid channel name {name!r}")


class Process:
    """Base class of the six term constructors.

    Terms are hash-consed: constructing a term structurally equal to a live
    one returns that same object, so equality is identity and hashing is
    O(1). Terms are immutable.
    """

    __slots__ = ("_hash", "__weakref__")
    _fields = ()
    _table = weakref.WeakValueDictionary()

    def __new__(cls, *args):
        if len(args) != len(cls._fields):
            raise TypeError(f"{cls.__name__} takes {len(cls._fields)} arguments, got {len(args)}")
        key = (cls, *args)
        self = Process._table.get(key)
        if self is None:
            cls._validate(*args)
            self = object.__new__(cls)
            for name, value in zip(cls._fields, args):
                object.__setattr__(self, name, value)
            object.__setattr__(self, "_hash", hash(key))
            Process._table[key] = self
        return self

    @staticmethod
    def _validate(*args):
        pass

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return type(self), tuple(getattr(self, f) for f in self._fields)

    def __repr__(self):
        args = ", ".join(repr(getattr(self, f)) for f in self._fields)
        return f"{type(self).__name__}({args})"

    def __str__(self):
        return render(self)


class Nil(Process):
    __slots__ = ()

    def __repr__(self):
        return "Nil"


class Tau(Process):
    __slots__ = ("cont",)
    _fields = __match_args__ = ("cont",)

    @staticmethod
    def _validate(cont):
        _check_process(cont)


class Input(Process):
    __slots__ = ("chan", "cont")
    _fields = __match_args__ = ("chan", "cont")

    @staticmethod
    def _validate(chan, cont):
        _check_channel(chan)
        _check_process(cont)


class Output(Process):
    __slots__ = ("chan",)
    _fields = __match_args__ = ("chan",)

    @staticmethod
    def _validate(chan):
        _check_channel(chan)


class Par(Process):
    __slots__ = ("left", "right")
    _fields = __match_args__ = ("left", "right")

    @staticmethod
    def _validate(left, right):
        _check_process(left)
        _check_process(right)


class Sum(Process):
    __slots__ = ("left", "right")
    _fields = __match_args__ = ("left", "right")

    @staticmethod
    def _validate(left, right):
        _check_process(left)
        _check_process(right)


def _check_process(p):
    if not isinstance(p, Process):
        raise TypeError(f"expected a process, got {p!r}")


NIL = Nil()


# -- parsing -----------------------------------------------------------------

class CcsSyntaxError(ValueError):
    """Raised on malformed term text; carries a 1-based position."""

    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += "; expected one of: " + ", ".join(self.expected)
        super().__init__(detail)


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<zero>0)|(?P<op>[.|+'()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            bad = pos + (len(rest) - len(stripped))
            line, col = _position(text, bad)
            raise CcsSyntaxError(f"unexpected character {stripped[0]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
        if pos >= n:
            break
    tokens.append(("eof", "", len(text)))
    return tokens


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, offset = self.peek()
        line, col = _position(self.text, offset)
        found = "end of input" if kind == "eof" else repr(value)
        raise CcsSyntaxError(f"unexpected {found}", line, col, expected)

    def expect_op(self, op):
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            return self.advance()
        self.fail({repr(op)})

    def at_op(self, op):
        kind, value, _ = self.peek()
        return kind == "op" and value == op

    def term(self):
        left = self.par()
        while self.at_op("+"):
            self.advance()
            left = Sum(left, self.par())
        return left

    def par(self):
        left = self.prefix()
        while self.at_op("|"):
            self.advance()
            left = Par(left, self.prefix())
        return left

    def prefix(self):
        kind, value, _ = self.peek()
        if kind == "zero":
            self.advance()
            return NIL
        if kind == "op" and value == "'":
            self.advance()
            kind, value, _ = self.peek()
            if kind != "ident" or value in RESERVED:
                self.fail({"channel name"})
            self.advance()
            # outputs are asynchronous; "'c.0" is accepted as sugar for "'c"
            if self.at_op("."):
                self.advance()
                if self.peek()[0] != "zero":
                    self.fail({"'0'"})
                self.advance()
            return Output(value)
        if kind == "ident":
            self.advance()
            self.expect_op(".")
            cont = self.prefix()
            return Tau(cont) if value == "tau" else Input(value, cont)
        if kind == "op" and value == "(":
            self.advance()
            inner = self.term()
            self.expect_op(")")
            return inner
        self.fail({"'0'", "\"'\"", "'('", "'tau'", "channel name"})

    def parse(self):
        result = self.term()
        if self.peek()[0] != "eof":
            self.fail({"'+'", "'|'", "end of input"})
        return result


def parse(text: str) -> Process:
    """Parse ``text`` into a :class:`Process`.

    Raises :class:`CcsSyntaxError` with line, column and the set of tokens
    that would have been accepted.
    """
    return _Parser(text).parse()


# -- printing ----------------------------------------------------------------

_SUM, _PAR, _PREFIX = 0, 1, 2


def _level(p):
    if isinstance(p, Sum):
        return _SUM
    if isinstance(p, Par):
        return _PAR
    return _PREFIX


@lru_cache(maxsize=1 << 16)
def render(p: Process) -> str:
    """Canonical, minimally parenthesised text for ``p``."""
    return _render(p, _SUM)


def _render(p, ctx):
    if isinstance(p, Nil):
        text = "0"
    elif isinstance(p, Output):
        text = "'" + p.chan
    elif isinstance(p, Tau):
        text = "tau." + _render(p.cont, _PREFIX)
    elif isinstance(p, Input):
        text = p.chan + "." + _render(p.cont, _PREFIX)
    elif isinstance(p, (Sum, Par)):
        lvl = _level(p)
        op = " + " if lvl == _SUM else " | "
        # left-associative: the right operand needs one level tighter
        text = _render(p.left, lvl) + op + _render(p.right, lvl + 1)
    else:
        raise TypeError(f"not a process: {p!r}")
    if _level(p) < ctx:
        return "(" + text + ")"
    return text


# -- structural metrics ------------------------------------------------------

def subterms(p: Process):
    """Yield every subterm of ``p`` in pre-order, ``p`` first."""
    stack = [p]
    while stack:
        q = stack.pop()
        yield q
        if isinstance(q, (Par, Sum)):
            stack.append(q.right)
            stack.append(q.left)
        elif isinstance(q, (Tau, Input)):
            stack.append(q.cont)


def channels(p: Process) -> frozenset:
    return frozenset(q.chan for q in subterms(p) if isinstance(q, (Input, Output)))


def prefix_measure(p: Process) -> tuple[int, int]:
    """``(n_active, n_out)``: number of Tau/Input and of Output constructors."""
    active = out = 0
    for q in subterms(p):
        if isinstance(q, (Tau, Input)):
            active += 1
        elif isinstance(q, Output):
            out += 1
    return active, out


def size(p: Process) -> int:
    """Total constructor count."""
    return sum(1 for _ in subterms(p))
