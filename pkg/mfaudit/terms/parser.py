"""
Parser for the textual term syntax used in protocol fixtures and
knowledge-base files.

    term    := operand (op operand)* ["mod" (INT | "p")]
    op      := "(+)" | ".+" | ".-"
    operand := [INT "*"] primary
    primary := "(" term ")" | NAME "(" term ("," term)* ")" | NAME | "0"

XOR ("(+)") and group operators (".+", ".-") cannot be mixed at one level;
brackets are needed. The function names are H, CAT, ENC, DEC, GMUL, SOH,
TAG and REP. `||` and `|` are not operators: write CAT(a, b) or H(a, b).

"""

import re

from ..errors import TermSyntaxError
from ..primitives.suite import DEFAULT_MODULUS
from .term import (
    Atom,
    ConcatSeq,
    FuzzyRep,
    GroupAdd,
    GroupMulOneWay,
    HashApp,
    ScalarOfHash,
    SymDec,
    SymEnc,
    TagApp,
    XorSum,
    Zero,
)

NAME_PATTERN = r"~?[A-Za-z_][A-Za-z0-9_']*"

_TOKEN = re.compile(
    r"(?P<xor>\(\+\))|(?P<gadd>\.\+)|(?P<gsub>\.-)"
    rf"|(?P<name>{NAME_PATTERN})|(?P<int>\d+)|(?P<punct>[(),*])"
)

# name: (minimum arity, maximum arity)
_ARITY = {
    "H": (1, None),
    "CAT": (1, None),
    "ENC": (2, 2),
    "DEC": (2, 2),
    "GMUL": (2, 2),
    "SOH": (1, 1),
    "TAG": (3, 3),
    "REP": (2, 2),
}


def _tokenize(text):
    tokens = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position == len(text):
            break
        match = _TOKEN.match(text, position)
        if match is None:
            raise TermSyntaxError(f"Unexpected character {text[position]!r}", position + 1)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), position + 1))
        position = match.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class TermParser:
    """
    Recursive-descent parser for one term.

    Parameters
    ----------
    symbols: dict name -> Atom, optional
        Declared atoms. Undeclared names are added as secret atoms of unknown
        length, unless strict is set.
    strict: bool (default False)
        Reject names that are not in symbols.
    modulus: int
        Modulus used for group operators, GMUL, SOH and TAG when the term
        does not give one.

    """

    def __init__(self, symbols=None, strict=False, modulus=DEFAULT_MODULUS):
        self.symbols = symbols if symbols is not None else {}
        self.strict = strict
        self.modulus = modulus

    def parse(self, text):
        self._tokens = _tokenize(text)
        self._position = 0
        term = self._term()
        kind, value, column = self._peek()
        if kind != "end":
            raise TermSyntaxError(f"Unexpected {value!r}", column)
        return term

    # Token stream.

    def _peek(self):
        return self._tokens[self._position]

    def _advance(self):
        token = self._tokens[self._position]
        self._position += 1
        return token

    def _expect(self, value):
        kind, found, column = self._advance()
        if found != value:
            raise TermSyntaxError(f"Expected {value!r}, found {found or 'end'!r}", column)

    # Grammar.

    def _term(self):
        first_column = self._peek()[2]
        operands = [self._operand()]
        operators = set()
        while self._peek()[0] in ("xor", "gadd", "gsub"):
            kind, _, column = self._advance()
            operators.add("xor" if kind == "xor" else "group")
            if len(operators) > 1:
                raise TermSyntaxError("Cannot mix (+) with .+/.- without brackets", column)
            coefficient, operand = self._operand()
            if kind == "gsub":
                coefficient = -coefficient
            operands.append((coefficient, operand))
        modulus = self.modulus
        kind, value, column = self._peek()
        if kind == "name" and value == "mod":
            self._advance()
            modulus = self._modulus()
            if operators != {"group"}:
                raise TermSyntaxError("'mod' only applies to .+/.- sums", column)
        if "group" in operators:
            return GroupAdd(
                tuple(
                    (c % modulus, t) for c, t in operands if not isinstance(t, Zero)
                ),
                modulus,
            )
        if any(c != 1 for c, _ in operands):
            raise TermSyntaxError("Coefficients only apply to .+/.- sums", first_column)
        if "xor" in operators:
            return XorSum(tuple(t for _, t in operands))
        return operands[0][1]

    def _modulus(self):
        kind, value, column = self._advance()
        if kind == "int":
            return int(value)
        if kind == "name" and value == "p":
            return self.modulus
        raise TermSyntaxError("Expected a modulus after 'mod'", column)

    def _operand(self):
        kind, value, column = self._peek()
        if kind == "int" and self._tokens[self._position + 1][1] == "*":
            self._advance()
            self._advance()
            return int(value), self._primary()
        return 1, self._primary()

    def _primary(self):
        kind, value, column = self._advance()
        if kind == "punct" and value == "(":
            term = self._term()
            self._expect(")")
            return term
        if kind == "int":
            if value != "0":
                raise TermSyntaxError(f"Unexpected number {value}", column)
            return Zero()
        if kind != "name":
            raise TermSyntaxError(f"Unexpected {value or 'end'!r}", column)
        if self._peek()[1] == "(":
            return self._call(value, column)
        return self._atom(value, column)

    def _atom(self, name, column):
        if name in _ARITY or name == "mod":
            raise TermSyntaxError(f"{name} is reserved", column)
        atom = self.symbols.get(name)
        if atom is None:
            if self.strict:
                raise TermSyntaxError(f"Undeclared atom {name}", column)
            atom = Atom(name)
            self.symbols[name] = atom
        return atom

    def _call(self, name, column):
        if name not in _ARITY:
            raise TermSyntaxError(f"Unknown function {name}", column)
        self._expect("(")
        args = [self._term()]
        while self._peek()[1] == ",":
            self._advance()
            args.append(self._term())
        self._expect(")")
        low, high = _ARITY[name]
        if len(args) < low or (high is not None and len(args) > high):
            raise TermSyntaxError(f"{name} takes {low} argument(s), got {len(args)}", column)
        if name == "H":
            return HashApp(tuple(args))
        if name == "CAT":
            return ConcatSeq(tuple(args))
        if name == "ENC":
            return SymEnc(*args)
        if name == "DEC":
            return SymDec(*args)
        if name == "GMUL":
            return GroupMulOneWay(*args, modulus=self.modulus)
        if name == "SOH":
            return ScalarOfHash(*args, modulus=self.modulus)
        if name == "TAG":
            return TagApp(*args, modulus=self.modulus)
        return FuzzyRep(*args)


def parse_term(text, symbols=None, strict=False, modulus=DEFAULT_MODULUS):
    """
    Parse a term from text. The result is not normalised.

    Raises
    ------
    TermSyntaxError
        With the 1-based column of the offending token.

    """
    return TermParser(symbols, strict, modulus).parse(text)
