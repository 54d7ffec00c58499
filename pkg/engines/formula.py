"""The two-sorted membership language: parser, printer, evaluator, enumerator.

Set variables are lowercase, class variables uppercase. Class variables are
evaluation parameters: they may only appear on the right of `in`/`notin` and
are never quantified.

    formula   := iff
    iff       := imp ('<->' imp)*
    imp       := or ('->' imp)?
    or        := and ('or' and)*
    and       := unary ('and' unary)*
    unary     := 'not' unary | ('forall'|'exists') setvar unary | atom | '(' formula ')'
    atom      := term ('in'|'notin'|'='|'!=') term
    classterm := '{' setvar '|' formula '}'

`notin` and `!=` are read as negated atoms. Before evaluation every formula is
desugared to {in, =, not, and, exists}.
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .guards import ContractError, FormulaSyntaxError, check_budget, validate_input
from .model import ORIGIN_FORMULA, ClassRef, Structure

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({'in', 'notin', 'not', 'and', 'or', 'forall', 'exists'})
RESERVED_SETVAR = 's'


# -- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    @property
    def is_class(self) -> bool:
        return self.name[0].isupper()


@dataclass(frozen=True)
class Member:
    left: Var
    right: Var


@dataclass(frozen=True)
class Equal:
    left: Var
    right: Var


@dataclass(frozen=True)
class Not:
    body: 'Formula'


@dataclass(frozen=True)
class And:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Or:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Implies:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Iff:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Forall:
    var: str
    body: 'Formula'


@dataclass(frozen=True)
class Exists:
    var: str
    body: 'Formula'


Formula = Union[Member, Equal, Not, And, Or, Implies, Iff, Forall, Exists]


@dataclass(frozen=True)
class ClassTerm:
    var: str
    body: Formula


BINARY_SYMBOLS = {And: 'and', Or: 'or', Implies: '->', Iff: '<->'}


def free_variables(f: Formula) -> FrozenSet[str]:
    if isinstance(f, (Member, Equal)):
        return frozenset({f.left.name, f.right.name})
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body) - {f.var}
    return free_variables(f.left) | free_variables(f.right)


def size_of(f: Formula) -> int:
    """Number of non-atom nodes"""
    if isinstance(f, (Member, Equal)):
        return 0
    if isinstance(f, (Not, Forall, Exists)):
        return 1 + size_of(f.body)
    return 1 + size_of(f.left) + size_of(f.right)


# -- printing ----------------------------------------------------------------

def to_text(f: Union[Formula, ClassTerm]) -> str:
    """Concrete syntax that parses back to the same tree"""
    if isinstance(f, ClassTerm):
        return f"{{ {f.var} | {to_text(f.body)} }}"
    if isinstance(f, Member):
        return f"{f.left.name} in {f.right.name}"
    if isinstance(f, Equal):
        return f"{f.left.name} = {f.right.name}"
    if isinstance(f, Not):
        if isinstance(f.body, Member):
            return f"{f.body.left.name} notin {f.body.right.name}"
        if isinstance(f.body, Equal):
            return f"{f.body.left.name} != {f.body.right.name}"
        return f"not {to_text(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var} {to_text(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var} {to_text(f.body)}"
    return f"({to_text(f.left)} {BINARY_SYMBOLS[type(f)]} {to_text(f.right)})"


# -- lexing and parsing ------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(r'\s*(?:(<->|->|!=|=|[{}|()])|([A-Za-z][A-Za-z0-9_]*))')


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        match = _TOKEN_RE.match(text, pos)
        if not match:
            start = len(text) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character '{text[start]}'", start)
        symbol, word = match.groups()
        start = match.start(1) if symbol else match.start(2)
        if symbol:
            tokens.append(Token('sym', symbol, start))
        elif word in KEYWORDS:
            tokens.append(Token('kw', word, start))
        elif validate_input(word, 'setvar'):
            tokens.append(Token('setvar', word, start))
        elif validate_input(word, 'classvar'):
            tokens.append(Token('classvar', word, start))
        else:
            raise FormulaSyntaxError(f"invalid identifier '{word}'", start)
        pos = match.end()
    tokens.append(Token('end', '', len(text)))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.positions: Dict[str, int] = {}

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _at(self, *texts: str) -> bool:
        return self.current.kind in ('sym', 'kw') and self.current.text in texts

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            found = self.current.text or 'end of input'
            raise FormulaSyntaxError(f"expected '{text}' but found '{found}'", self.current.pos)
        return self._advance()

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def parse(self) -> Union[Formula, ClassTerm]:
        result = self.parse_classterm() if self._at('{') else self.parse_formula()
        if self.current.kind != 'end':
            raise FormulaSyntaxError(f"unexpected '{self.current.text}'", self.current.pos)
        return result

    def parse_classterm(self) -> ClassTerm:
        self._expect('{')
        var = self._setvar()
        self._expect('|')
        body = self.parse_formula()
        self._expect('}')
        for name in sorted(free_variables(body)):
            if name != var and not name[0].isupper():
                raise FormulaSyntaxError(f"unbound variable '{name}' in class term", self.positions.get(name, 0))
        return ClassTerm(var, body)

    def parse_formula(self) -> Formula:
        left = self._parse_imp()
        while self._at('<->'):
            self._advance()
            left = Iff(left, self._parse_imp())
        return left

    def _parse_imp(self) -> Formula:
        left = self._parse_or()
        if self._at('->'):
            self._advance()
            return Implies(left, self._parse_imp())
        return left

    def _parse_or(self) -> Formula:
        left = self._parse_and()
        while self._at('or'):
            self._advance()
            left = Or(left, self._parse_and())
        return left

    def _parse_and(self) -> Formula:
        left = self._parse_unary()
        while self._at('and'):
            self._advance()
            left = And(left, self._parse_unary())
        return left

    def _parse_unary(self) -> Formula:
        if self._at('not'):
            self._advance()
            return Not(self._parse_unary())
        if self._at('forall', 'exists'):
            quantifier = self._advance().text
            if self.current.kind == 'classvar':
                raise FormulaSyntaxError(f"class variable '{self.current.text}' cannot be quantified", self.current.pos)
            var = self._setvar()
            body = self._parse_unary()
            return Forall(var, body) if quantifier == 'forall' else Exists(var, body)
        if self._at('('):
            self._advance()
            inner = self.parse_formula()
            self._expect(')')
            return inner
        return self._parse_atom()

    def _parse_atom(self) -> Formula:
        left = self._term()
        if not self._at('in', 'notin', '=', '!='):
            found = self.current.text or 'end of input'
            raise FormulaSyntaxError(f"expected 'in', 'notin', '=' or '!=' but found '{found}'", self.current.pos)
        op_token = self._advance()
        right_token = self.current
        right = self._term()
        if op_token.text in ('in', 'notin'):
            if left.is_class:
                raise FormulaSyntaxError(f"class variable '{left.name}' cannot be a member", op_token.pos)
            atom: Formula = Member(left, right)
        else:
            if left.is_class or right.is_class:
                raise FormulaSyntaxError("class variables cannot be compared with '='", right_token.pos)
            atom = Equal(left, right)
        return Not(atom) if op_token.text in ('notin', '!=') else atom

    def _term(self) -> Var:
        token = self.current
        if token.kind not in ('setvar', 'classvar'):
            raise FormulaSyntaxError(f"expected a variable but found '{token.text or 'end of input'}'", token.pos)
        self._advance()
        self.positions.setdefault(token.text, token.pos)
        return Var(token.text)

    def _setvar(self) -> str:
        token = self.current
        if token.kind != 'setvar':
            raise FormulaSyntaxError(f"expected a set variable but found '{token.text or 'end of input'}'", token.pos)
        self._advance()
        self.positions.setdefault(token.text, token.pos)
        return token.text


def parse(text: str, free: Optional[Sequence[str]] = None) -> Union[Formula, ClassTerm]:
    """Parse a formula or class term.

    When `free` is given, every free set variable of a formula must be listed
    in it; class variables are always allowed free.
    """
    parser = Parser(text)
    result = parser.parse()
    if free is not None and not isinstance(result, ClassTerm):
        for name in sorted(free_variables(result)):
            if not name[0].isupper() and name not in free:
                raise FormulaSyntaxError(f"unbound variable '{name}'", parser.positions.get(name, 0))
    return result


# -- evaluation --------------------------------------------------------------

@lru_cache(maxsize=None)
def desugar(f: Formula) -> Formula:
    """Rewrite into the core connectives {not, and, exists}"""
    if isinstance(f, (Member, Equal)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, desugar(f.body))
    if isinstance(f, Forall):
        return Not(Exists(f.var, Not(desugar(f.body))))
    left, right = desugar(f.left), desugar(f.right)
    if isinstance(f, And):
        return And(left, right)
    if isinstance(f, Or):
        return Not(And(Not(left), Not(right)))
    if isinstance(f, Implies):
        return Not(And(left, Not(right)))
    forward = Not(And(left, Not(right)))
    backward = Not(And(right, Not(left)))
    return And(forward, backward)


ClassValue = Union[int, ClassRef, FrozenSet[int]]


class Evaluator:
    """Tarskian satisfaction over a finite structure.

    One visit method per core connective; a subclass may override any of them.
    Set variables are bound to element indices, class variables to extensions.
    """

    def __init__(self, m: Structure):
        self.m = m
        self._dispatch = {
            Member: self.visit_member,
            Equal: self.visit_equal,
            Not: self.visit_not,
            And: self.visit_and,
            Exists: self.visit_exists,
        }

    def evaluate(self, f: Formula, env: Mapping[str, object]) -> bool:
        bindings: Dict[str, int] = {}
        for name, value in env.items():
            if name[0].isupper():
                bindings[name] = _class_mask(value)
            else:
                bindings[name] = int(value)
        return self.visit(desugar(f), bindings)

    def visit(self, f: Formula, env: Dict[str, int]) -> bool:
        try:
            method = self._dispatch[type(f)]
        except KeyError:
            raise ContractError(f"{type(f).__name__} is not a core connective; desugar first")
        return method(f, env)

    def lookup(self, env: Dict[str, int], name: str) -> int:
        try:
            return env[name]
        except KeyError:
            raise ContractError(f"no binding for free variable '{name}'")

    def visit_member(self, f: Member, env: Dict[str, int]) -> bool:
        x = self.lookup(env, f.left.name)
        y = self.lookup(env, f.right.name)
        if f.right.is_class:
            return bool((y >> x) & 1)
        return self.m.membership[x][y]

    def visit_equal(self, f: Equal, env: Dict[str, int]) -> bool:
        return self.lookup(env, f.left.name) == self.lookup(env, f.right.name)

    def visit_not(self, f: Not, env: Dict[str, int]) -> bool:
        return not self.visit(f.body, env)

    def visit_and(self, f: And, env: Dict[str, int]) -> bool:
        return self.visit(f.left, env) and self.visit(f.right, env)

    def visit_exists(self, f: Exists, env: Dict[str, int]) -> bool:
        return any(self.visit(f.body, {**env, f.var: e}) for e in self.m.domain)

    def extension(self, t: ClassTerm, env: Optional[Mapping[str, object]] = None) -> ClassRef:
        env = dict(env or {})
        mask = 0
        for e in self.m.domain:
            env[t.var] = e
            if self.evaluate(t.body, env):
                mask |= 1 << e
        return ClassRef.from_mask(mask, ORIGIN_FORMULA, to_text(t))


def _class_mask(value: ClassValue) -> int:
    if isinstance(value, ClassRef):
        return value.mask
    if isinstance(value, int):
        return value
    return sum(1 << e for e in value)


def evaluate(m: Structure, f: Formula, env: Optional[Mapping[str, object]] = None) -> bool:
    return Evaluator(m).evaluate(f, env or {})


def class_extension(m: Structure, t: ClassTerm, env: Optional[Mapping[str, object]] = None) -> ClassRef:
    return Evaluator(m).extension(t, env)


# -- enumeration -------------------------------------------------------------

def _bound_name(depth: int) -> str:
    return f"y{depth}"


@lru_cache(maxsize=None)
def _formulas_of_size(size: int, variables: Tuple[str, ...]) -> Tuple[Formula, ...]:
    terms = [Var(v) for v in variables]
    if size == 0:
        return tuple(Member(a, b) for a in terms for b in terms) + tuple(Equal(a, b) for a in terms for b in terms)
    out: List[Formula] = [Not(f) for f in _formulas_of_size(size - 1, variables)]
    for left_size in range(size):
        for left in _formulas_of_size(left_size, variables):
            for right in _formulas_of_size(size - 1 - left_size, variables):
                out.append(And(left, right))
    fresh = _bound_name(len(variables))
    out += [Exists(fresh, f) for f in _formulas_of_size(size - 1, variables + (fresh,))]
    return tuple(out)


def enumerate_formulas(depth: int, setvars: Sequence[str] = ('x',), cap: int = 3,
                       unsafe: bool = False) -> Iterator[Formula]:
    """Every formula over {in, =, not, and, exists} with at most `depth` non-atom nodes.

    Bound variables are y1, y2, ... by nesting depth; output is ordered by
    size, then structurally.
    """
    check_budget(depth, cap, 'formula depth', unsafe)
    variables = tuple(setvars)
    for size in range(depth + 1):
        yield from _formulas_of_size(size, variables)


def count_formulas(depth: int, setvars: Sequence[str] = ('x',)) -> List[int]:
    return [len(_formulas_of_size(size, tuple(setvars))) for size in range(depth + 1)]
