"""JSON reading with source positions on every node.

The standard json module reports positions only for syntax errors.
Document checking needs them for semantic complaints too ("this role is
not declared", pointing at the role's own line), so this reader keeps
line and column for each value and each object key.  Lines and columns
are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass

OBJECT = "object"
ARRAY = "array"
STRING = "string"
NUMBER = "number"
BOOL = "bool"
NULL = "null"

_ESCAPES = {'"': '"', "\\": "\\", "/": "/", "b": "\b", "f": "\f",
            "n": "\n", "r": "\r", "t": "\t"}
_WS = " \t\n\r"


class JsonSyntaxError(Exception):
    """A malformed document, with the offending position."""

    def __init__(self, message, line, col):
        super().__init__("%d:%d: %s" % (line, col, message))
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Entry:
    """One object member: the key, its position, and the value node."""

    key: str
    line: int
    col: int
    value: "JsonValue"


@dataclass(frozen=True)
class JsonValue:
    kind: str
    line: int
    col: int
    value: object = None
    elements: tuple = ()
    entries: tuple = ()

    def get(self, key) -> "JsonValue | None":
        for entry in self.entries:
            if entry.key == key:
                return entry.value
        return None

    def keys(self):
        return [entry.key for entry in self.entries]

    def plain(self):
        """The ordinary Python value, positions stripped."""
        if self.kind == OBJECT:
            return {e.key: e.value.plain() for e in self.entries}
        if self.kind == ARRAY:
            return [e.plain() for e in self.elements]
        return self.value


class _Reader:
    def __init__(self, text):
        self.text = text
        self.n = len(text)
        self.i = 0
        self.line = 1
        self.col = 1

    def error(self, message, line=None, col=None):
        raise JsonSyntaxError(message,
                              self.line if line is None else line,
                              self.col if col is None else col)

    def peek(self):
        return self.text[self.i] if self.i < self.n else ""

    def advance(self):
        ch = self.text[self.i]
        self.i += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_ws(self):
        while self.i < self.n and self.text[self.i] in _WS:
            self.advance()

    def expect(self, ch):
        if self.peek() != ch:
            got = repr(self.peek()) if self.peek() else "end of input"
            self.error("expected %r, found %s" % (ch, got))
        self.advance()

    def value(self) -> JsonValue:
        self.skip_ws()
        line, col = self.line, self.col
        ch = self.peek()
        if ch == "":
            self.error("expected a value, found end of input")
        if ch == "{":
            return self.object_value(line, col)
        if ch == "[":
            return self.array_value(line, col)
        if ch == '"':
            return JsonValue(STRING, line, col, value=self.string())
        if ch == "-" or ch.isdigit():
            return JsonValue(NUMBER, line, col, value=self.number())
        for word, kind, py in (("true", BOOL, True), ("false", BOOL, False),
                               ("null", NULL, None)):
            if self.text.startswith(word, self.i):
                for _ in word:
                    self.advance()
                return JsonValue(kind, line, col, value=py)
        self.error("expected a value, found %r" % ch)

    def object_value(self, line, col) -> JsonValue:
        self.expect("{")
        entries = []
        self.skip_ws()
        if self.peek() == "}":
            self.advance()
            return JsonValue(OBJECT, line, col, entries=())
        while True:
            self.skip_ws()
            kline, kcol = self.line, self.col
            if self.peek() != '"':
                got = repr(self.peek()) if self.peek() else "end of input"
                self.error("expected a string key, found %s" % got)
            key = self.string()
            self.skip_ws()
            self.expect(":")
            entries.append(Entry(key, kline, kcol, self.value()))
            self.skip_ws()
            if self.peek() == ",":
                self.advance()
                continue
            self.expect("}")
            return JsonValue(OBJECT, line, col, entries=tuple(entries))

    def array_value(self, line, col) -> JsonValue:
        self.expect("[")
        elements = []
        self.skip_ws()
        if self.peek() == "]":
            self.advance()
            return JsonValue(ARRAY, line, col, elements=())
        while True:
            elements.append(self.value())
            self.skip_ws()
            if self.peek() == ",":
                self.advance()
                continue
            self.expect("]")
            return JsonValue(ARRAY, line, col, elements=tuple(elements))

    def string(self) -> str:
        self.expect('"')
        out = []
        while True:
            if self.i >= self.n:
                self.error("unterminated string")
            ch = self.advance()
            if ch == '"':
                return "".join(out)
            if ch == "\n":
                self.error("unterminated string", self.line - 1, 1)
            if ch != "\\":
                out.append(ch)
                continue
            if self.i >= self.n:
                self.error("unterminated string")
            esc = self.advance()
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
            elif esc == "u":
                if self.i + 4 > self.n:
                    self.error("truncated unicode escape")
                hexes = self.text[self.i:self.i + 4]
                try:
                    code = int(hexes, 16)
                except ValueError:
                    self.error("bad unicode escape %r" % hexes)
                for _ in range(4):
                    self.advance()
                out.append(chr(code))
            else:
                self.error("bad escape %r" % esc, self.line, self.col - 2)

    def number(self):
        start = self.i
        line, col = self.line, self.col
        if self.peek() == "-":
            self.advance()
        if not self.peek().isdigit():
            self.error("malformed number", line, col)
        while self.peek().isdigit():
            self.advance()
        is_float = False
        if self.peek() == ".":
            is_float = True
            self.advance()
            if not self.peek().isdigit():
                self.error("malformed number", line, col)
            while self.peek().isdigit():
                self.advance()
        if self.peek() in ("e", "E"):
            is_float = True
            self.advance()
            if self.peek() in ("+", "-"):
                self.advance()
            if not self.peek().isdigit():
                self.error("malformed number", line, col)
            while self.peek().isdigit():
                self.advance()
        raw = self.text[start:self.i]
        return float(raw) if is_float else int(raw)


def parse(text: str) -> JsonValue:
    """The document's value tree; JsonSyntaxError on malformed input.

    An empty document is an error at 1:1, and trailing content after
    the top-level value is an error at its own position.
    """
    reader = _Reader(text)
    reader.skip_ws()
    if reader.i >= reader.n:
        raise JsonSyntaxError("empty document", 1, 1)
    node = reader.value()
    reader.skip_ws()
    if reader.i < reader.n:
        reader.error("trailing data after document")
    return node
