"""Parser and pretty-printer for `.arc` model files.

Grammar (ASCII; `--` is the surface form of the absence token):

    unit        := (enumDecl | componentDecl)*
    enumDecl    := "enum" ID "{" ID ("," ID)* "}"
    componentDecl := "component" ID ["<" ID ("," ID)* ">"]
                     ["(" type ID ("," type ID)* ")"] "{" element* "}"
    element     := portDecl | subDecl | connectDecl | automaton | rules | "native" ";"
    portDecl    := "port" portItem ("," portItem)* ";"
    portItem    := ("in"|"out") type ID
    subDecl     := "instance" ID ["<" type ("," type)* ">"]
                   ["(" expr ("," expr)* ")"] ID ";"
    connectDecl := "connect" portRef "->" portRef ("," portRef)* ";"
    portRef     := [ID "."] ID
    automaton   := "automaton" "{" varDecl* stateDecl+ initialDecl trans* "}"
    varDecl     := "var" type ID "=" expr ";"
    stateDecl   := "state" ID ("," ID)* ";"
    initialDecl := "initial" ID ["/" actionBlock] ";"
    trans       := ID "->" ID ["[" patList "]"] ["{" expr "}"] ["/" actionBlock] ";"
    rules       := "rules" "{" varDecl* rule* "}"
    rule        := "[" patList ["," expr] "]" "=>" actionBlock ";"
    patList     := ID "=" (literal | "*" | "--") ("," ID "=" (literal | "*" | "--"))*
    actionBlock := "{" ID "=" (expr | "--") ("," ID "=" (expr | "--"))* "}"
    type        := "Boolean" | "Integer" | "String" | ID

Expressions use the usual precedence (or < and < not < comparison < additive
< multiplicative); comparisons do not chain. Unary minus is only accepted on
integer literals. Comments are `//` to end of line and non-nesting `/* */`.

Parsing never raises: every failure becomes a positioned diagnostic (P001
lexical, P002 syntax, P003 duplicate top-level name) and the parser resumes
at the next statement boundary so one run reports many errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import model as m

KEYWORDS = {
    "component", "enum", "port", "in", "out", "instance", "connect",
    "automaton", "rules", "var", "state", "initial", "native",
    "true", "false", "and", "or", "not", "Boolean", "Integer", "String",
}

PUNCT = {
    "->": "ARROW", "=>": "DARROW", "--": "ABSENT",
    "==": "EQEQ", "!=": "NEQ", "<=": "LE", ">=": "GE",
    "{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
    "[": "LBRACK", "]": "RBRACK", "<": "LT", ">": "GT",
    ",": "COMMA", ";": "SEMI", ".": "DOT", "=": "ASSIGN",
    "+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH",
}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    file: str
    line: int
    column: int

    def render(self) -> str:
        return f"{self.file}:{self.line}:{self.column}: {self.severity}[{self.code}]: {self.message}"

    def sort_key(self):
        return (self.file, self.line, self.column, self.code)


@dataclass(frozen=True)
class SourceUnit:
    file: str
    enums: tuple[m.EnumDecl, ...]
    components: tuple[m.ComponentType, ...]


@dataclass(frozen=True)
class ParseResult:
    unit: SourceUnit | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.unit is not None


@dataclass
class Token:
    kind: str  # keyword, punct name, "ID", "INT", "STRING", "EOF"
    text: str
    value: object
    line: int
    column: int


def _is_ident_start(c: str) -> bool:
    return "a" <= c <= "z" or "A" <= c <= "Z" or c == "_"


def _is_ident_char(c: str) -> bool:
    return _is_ident_start(c) or "0" <= c <= "9"


class _Lexer:
    def __init__(self, text: str, file: str):
        self.text = text
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1
        self.diagnostics: list[Diagnostic] = []

    def error(self, message: str, line: int, col: int) -> None:
        self.diagnostics.append(Diagnostic("error", "P001", message, self.file, line, col))

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def tokens(self) -> list[Token]:
        out: list[Token] = []
        text = self.text
        while self.pos < len(text):
            c = text[self.pos]
            line, col = self.line, self.col
            if c in " \t\r\n":
                self._advance()
                continue
            if text.startswith("//", self.pos):
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            if text.startswith("/*", self.pos):
                self._advance(2)
                closed = False
                while self.pos < len(text):
                    if text.startswith("*/", self.pos):
                        self._advance(2)
                        closed = True
                        break
                    self._advance()
                if not closed:
                    self.error("unterminated block comment", line, col)
                continue
            if _is_ident_start(c):
                start = self.pos
                while self.pos < len(text) and _is_ident_char(text[self.pos]):
                    self._advance()
                word = text[start:self.pos]
                kind = word if word in KEYWORDS else "ID"
                out.append(Token(kind, word, word, line, col))
                continue
            if "0" <= c <= "9":
                start = self.pos
                while self.pos < len(text) and "0" <= text[self.pos] <= "9":
                    self._advance()
                word = text[start:self.pos]
                out.append(Token("INT", word, int(word), line, col))
                continue
            if c == '"':
                self._advance()
                buf: list[str] = []
                ok = True
                while True:
                    if self.pos >= len(text) or text[self.pos] == "\n":
                        self.error("unterminated string literal", line, col)
                        ok = False
                        break
                    ch = text[self.pos]
                    if ch == '"':
                        self._advance()
                        break
                    if ch == "\\":
                        self._advance()
                        if self.pos >= len(text):
                            self.error("unterminated string literal", line, col)
                            ok = False
                            break
                        esc = text[self.pos]
                        mapped = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}.get(esc)
                        if mapped is None:
                            self.error(f"unknown escape '\\{esc}'", self.line, self.col)
                            mapped = esc
                        buf.append(mapped)
                        self._advance()
                    else:
                        buf.append(ch)
                        self._advance()
                if ok:
                    out.append(Token("STRING", "".join(buf), "".join(buf), line, col))
                continue
            two = text[self.pos:self.pos + 2]
            if two in PUNCT:
                out.append(Token(PUNCT[two], two, two, line, col))
                self._advance(2)
                continue
            if c in PUNCT:
                out.append(Token(PUNCT[c], c, c, line, col))
                self._advance()
                continue
            self.error(f"unexpected character {c!r}", line, col)
            self._advance()
        out.append(Token("EOF", "", None, self.line, self.col))
        return out


class _SyntaxError(Exception):
    """Internal signal for recovery; never escapes parse()."""


class _Parser:
    def __init__(self, tokens: list[Token], file: str, diagnostics: list[Diagnostic]):
        self.toks = tokens
        self.i = 0
        self.file = file
        self.diagnostics = diagnostics
        self.type_params: frozenset[str] = frozenset()  # of the component being parsed

    # -- token plumbing

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def at(self, kind: str, ahead: int = 0) -> bool:
        return self.peek(ahead).kind == kind

    def take(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {what or kind!r}, found {tok.text or 'end of file'!r}", tok)
        return self.take()

    def fail(self, message: str, tok: Token | None = None) -> None:
        tok = tok or self.peek()
        self.diagnostics.append(Diagnostic("error", "P002", message, self.file, tok.line, tok.column))
        raise _SyntaxError()

    def pos(self) -> m.Pos:
        tok = self.peek()
        return m.Pos(tok.line, tok.column)

    def skip_to_statement_end(self) -> None:
        """Recovery: consume up to and including the next ';', stopping early
        at '}' or EOF so block structure survives."""
        depth = 0
        while not self.at("EOF"):
            k = self.peek().kind
            if k == "SEMI" and depth == 0:
                self.take()
                return
            if k == "LBRACE":
                depth += 1
            elif k == "RBRACE":
                if depth == 0:
                    return
                depth -= 1
            self.take()

    def skip_to_top_level(self) -> None:
        while not self.at("EOF") and not self.at("component") and not self.at("enum"):
            self.take()

    # -- grammar

    def parse_unit(self) -> SourceUnit:
        enums: list[m.EnumDecl] = []
        components: list[m.ComponentType] = []
        seen: dict[str, Token] = {}
        while not self.at("EOF"):
            tok = self.peek()
            try:
                if self.at("enum"):
                    decl = self.parse_enum()
                elif self.at("component"):
                    decl = self.parse_component()
                else:
                    self.fail(f"expected 'component' or 'enum', found {tok.text or 'end of file'!r}")
            except _SyntaxError:
                self.type_params = frozenset()
                if self.peek() is tok and not self.at("EOF"):
                    self.take()
                self.skip_to_top_level()
                continue
            if decl.name in seen:
                self.diagnostics.append(Diagnostic(
                    "error", "P003", f"duplicate top-level name '{decl.name}'",
                    self.file, decl.pos.line, decl.pos.column))
            else:
                seen[decl.name] = tok
            if isinstance(decl, m.EnumDecl):
                enums.append(decl)
            else:
                components.append(decl)
        return SourceUnit(self.file, tuple(enums), tuple(components))

    def parse_enum(self) -> m.EnumDecl:
        pos = self.pos()
        self.expect("enum")
        name = self.expect("ID", "enum name").text
        self.expect("LBRACE")
        values = [self.expect("ID", "enum value").text]
        while self.at("COMMA"):
            self.take()
            values.append(self.expect("ID", "enum value").text)
        self.expect("RBRACE")
        vpos = pos
        if len(set(values)) != len(values):
            self.diagnostics.append(Diagnostic(
                "error", "P002", f"duplicate value in enum '{name}'", self.file, vpos.line, vpos.column))
        return m.EnumDecl(name, tuple(values), pos)

    def parse_type(self) -> m.TypeExpr:
        tok = self.peek()
        if tok.kind in ("Boolean", "Integer", "String"):
            self.take()
            return m.Primitive(tok.kind)
        if tok.kind == "ID":
            self.take()
            if tok.text in self.type_params:
                return m.TypeParam(tok.text)
            return m.EnumRef(tok.text)
        self.fail(f"expected a type, found {tok.text or 'end of file'!r}")

    def parse_component(self) -> m.ComponentType:
        pos = self.pos()
        self.expect("component")
        name = self.expect("ID", "component name").text
        type_params: list[str] = []
        if self.at("LT"):
            self.take()
            type_params.append(self.expect("ID", "type parameter").text)
            while self.at("COMMA"):
                self.take()
                type_params.append(self.expect("ID", "type parameter").text)
            self.expect("GT")
        self.type_params = frozenset(type_params)
        config_params: list[tuple[m.TypeExpr, str]] = []
        if self.at("LPAREN"):
            self.take()
            while True:
                t = self.parse_type()
                pname = self.expect("ID", "config parameter name").text
                config_params.append((t, pname))
                if not self.at("COMMA"):
                    break
                self.take()
            self.expect("RPAREN")
        self.expect("LBRACE")

        ports: list[m.PortDecl] = []
        subs: list[m.SubcomponentDecl] = []
        connectors: list[m.Connector] = []
        behaviors: list[m.Behavior] = []
        errors_before = len(self.diagnostics)
        while not self.at("RBRACE") and not self.at("EOF"):
            try:
                k = self.peek().kind
                if k == "port":
                    ports.extend(self.parse_port_decl())
                elif k == "instance":
                    subs.append(self.parse_sub_decl())
                elif k == "connect":
                    connectors.extend(self.parse_connect_decl())
                elif k == "automaton":
                    behaviors.append(self.parse_automaton())
                elif k == "rules":
                    behaviors.append(self.parse_rules())
                elif k == "native":
                    npos = self.pos()
                    self.take()
                    self.expect("SEMI")
                    behaviors.append(m.Native(npos))
                else:
                    self.fail("expected a port, instance, connect, automaton, rules or native declaration")
            except _SyntaxError:
                self.skip_to_statement_end()
        self.expect("RBRACE")
        self.type_params = frozenset()
        if not subs and not behaviors and len(self.diagnostics) == errors_before:
            self.diagnostics.append(Diagnostic(
                "error", "P002",
                f"component '{name}' is empty: a composed component needs at least one "
                "subcomponent and an atomic component needs a behavior",
                self.file, pos.line, pos.column))
        return m.ComponentType(name, tuple(type_params), tuple(config_params), tuple(ports),
                               tuple(subs), tuple(connectors), tuple(behaviors), pos)

    def parse_port_decl(self) -> list[m.PortDecl]:
        self.expect("port")
        items = [self.parse_port_item()]
        while self.at("COMMA"):
            self.take()
            items.append(self.parse_port_item())
        self.expect("SEMI")
        return items

    def parse_port_item(self) -> m.PortDecl:
        pos = self.pos()
        tok = self.peek()
        if tok.kind not in ("in", "out"):
            self.fail("expected 'in' or 'out'")
        self.take()
        t = self.parse_type()
        name = self.expect("ID", "port name").text
        return m.PortDecl(name, tok.kind, t, pos)

    def parse_sub_decl(self) -> m.SubcomponentDecl:
        pos = self.pos()
        self.expect("instance")
        ref = self.expect("ID", "component name").text
        type_args: list[m.TypeExpr] = []
        if self.at("LT"):
            self.take()
            type_args.append(self.parse_type())
            while self.at("COMMA"):
                self.take()
                type_args.append(self.parse_type())
            self.expect("GT")
        config_args: list[m.Expr] = []
        if self.at("LPAREN"):
            self.take()
            config_args.append(self.parse_expr())
            while self.at("COMMA"):
                self.take()
                config_args.append(self.parse_expr())
            self.expect("RPAREN")
        name = self.expect("ID", "instance name").text
        self.expect("SEMI")
        return m.SubcomponentDecl(name, ref, tuple(type_args), tuple(config_args), pos)

    def parse_port_ref(self) -> m.PortRef:
        pos = self.pos()
        first = self.expect("ID", "port reference").text
        if self.at("DOT"):
            self.take()
            port = self.expect("ID", "port name").text
            return m.PortRef(first, port, pos)
        return m.PortRef(None, first, pos)

    def parse_connect_decl(self) -> list[m.Connector]:
        pos = self.pos()
        self.expect("connect")
        source = self.parse_port_ref()
        self.expect("ARROW")
        targets = [self.parse_port_ref()]
        while self.at("COMMA"):
            self.take()
            targets.append(self.parse_port_ref())
        self.expect("SEMI")
        return [m.Connector(source, t, pos) for t in targets]

    def parse_var_decl(self) -> m.VarDecl:
        pos = self.pos()
        self.expect("var")
        t = self.parse_type()
        name = self.expect("ID", "variable name").text
        self.expect("ASSIGN", "'='")
        init = self.parse_expr()
        self.expect("SEMI")
        return m.VarDecl(name, t, init, pos)

    def parse_automaton(self) -> m.Automaton:
        pos = self.pos()
        self.expect("automaton")
        self.expect("LBRACE")
        variables: list[m.VarDecl] = []
        while self.at("var"):
            try:
                variables.append(self.parse_var_decl())
            except _SyntaxError:
                self.skip_to_statement_end()
        states: list[str] = []
        while self.at("state"):
            self.take()
            states.append(self.expect("ID", "state name").text)
            while self.at("COMMA"):
                self.take()
                states.append(self.expect("ID", "state name").text)
            self.expect("SEMI")
        if not states:
            self.fail("automaton needs at least one 'state' declaration")
        self.expect("initial", "'initial'")
        initial_state = self.expect("ID", "state name").text
        initial_outputs: tuple[tuple[str, m.Action], ...] = ()
        if self.at("SLASH"):
            self.take()
            initial_outputs = self.parse_action_block()
        self.expect("SEMI")
        transitions: list[m.Transition] = []
        while not self.at("RBRACE") and not self.at("EOF"):
            try:
                transitions.append(self.parse_transition())
            except _SyntaxError:
                self.skip_to_statement_end()
        self.expect("RBRACE")
        return m.Automaton(tuple(variables), tuple(states), initial_state,
                           initial_outputs, tuple(transitions), pos)

    def parse_transition(self) -> m.Transition:
        pos = self.pos()
        source = self.expect("ID", "state name").text
        self.expect("ARROW", "'->'")
        target = self.expect("ID", "state name").text
        pattern: tuple[tuple[str, m.Pattern], ...] = ()
        guard: m.Expr | None = None
        if self.at("LBRACK"):
            self.take()
            pattern, _ = self.parse_pattern_list(allow_guard=False)
            self.expect("RBRACK")
        if self.at("LBRACE"):
            self.take()
            guard = self.parse_expr()
            self.expect("RBRACE")
        actions: tuple[tuple[str, m.Action], ...] = ()
        if self.at("SLASH"):
            self.take()
            actions = self.parse_action_block()
        self.expect("SEMI")
        return m.Transition(source, target, pattern, guard, actions, pos)

    def parse_rules(self) -> m.RuleTable:
        pos = self.pos()
        self.expect("rules")
        self.expect("LBRACE")
        variables: list[m.VarDecl] = []
        while self.at("var"):
            try:
                variables.append(self.parse_var_decl())
            except _SyntaxError:
                self.skip_to_statement_end()
        rules: list[m.Rule] = []
        while not self.at("RBRACE") and not self.at("EOF"):
            try:
                rules.append(self.parse_rule())
            except _SyntaxError:
                self.skip_to_statement_end()
        self.expect("RBRACE")
        return m.RuleTable(tuple(variables), tuple(rules), pos)

    def parse_rule(self) -> m.Rule:
        pos = self.pos()
        self.expect("LBRACK", "'['")
        pattern, guard = self.parse_pattern_list(allow_guard=True)
        self.expect("RBRACK")
        self.expect("DARROW", "'=>'")
        actions = self.parse_action_block()
        self.expect("SEMI")
        return m.Rule(pattern, guard, actions, pos)

    def parse_pattern_list(self, allow_guard: bool) -> tuple[tuple[tuple[str, m.Pattern], ...], m.Expr | None]:
        entries: list[tuple[str, m.Pattern]] = []
        guard: m.Expr | None = None
        first = True
        while first or self.at("COMMA"):
            if not first:
                self.take()
            first = False
            if self.at("ID") and self.at("ASSIGN", 1):
                port = self.take().text
                self.take()  # '='
                entries.append((port, self.parse_pattern()))
            elif allow_guard:
                if guard is not None:
                    self.fail("only one guard expression is allowed per rule")
                guard = self.parse_expr()
            else:
                self.fail("expected 'port = pattern'")
        return tuple(entries), guard

    def parse_pattern(self) -> m.Pattern:
        pos = self.pos()
        if self.at("STAR"):
            self.take()
            return m.Wildcard(pos)
        if self.at("ABSENT"):
            self.take()
            return m.AbsentPattern(pos)
        return m.LitPattern(self.parse_literal(), pos)

    def parse_literal(self) -> m.Expr:
        tok = self.peek()
        pos = m.Pos(tok.line, tok.column)
        if tok.kind == "INT":
            self.take()
            return m.Lit(tok.value, "Integer", pos)
        if tok.kind == "MINUS" and self.at("INT", 1):
            self.take()
            tok = self.take()
            return m.Lit(-tok.value, "Integer", pos)
        if tok.kind == "STRING":
            self.take()
            return m.Lit(tok.value, "String", pos)
        if tok.kind == "true":
            self.take()
            return m.Lit(True, "Boolean", pos)
        if tok.kind == "false":
            self.take()
            return m.Lit(False, "Boolean", pos)
        if tok.kind == "ID":
            self.take()
            return m.Name(tok.text, pos)
        self.fail(f"expected a literal, found {tok.text or 'end of file'!r}")

    def parse_action_block(self) -> tuple[tuple[str, m.Action], ...]:
        self.expect("LBRACE", "'{'")
        actions: list[tuple[str, m.Action]] = []
        while True:
            name = self.expect("ID", "port or variable name").text
            self.expect("ASSIGN", "'='")
            if self.at("ABSENT"):
                pos = self.pos()
                self.take()
                actions.append((name, m.AbsentOut(pos)))
            else:
                actions.append((name, self.parse_expr()))
            if not self.at("COMMA"):
                break
            self.take()
        self.expect("RBRACE")
        return tuple(actions)

    # -- expressions

    def parse_expr(self) -> m.Expr:
        return self.parse_or()

    def parse_or(self) -> m.Expr:
        left = self.parse_and()
        while self.at("or"):
            pos = self.pos()
            self.take()
            left = m.BoolOp("or", left, self.parse_and(), pos)
        return left

    def parse_and(self) -> m.Expr:
        left = self.parse_not()
        while self.at("and"):
            pos = self.pos()
            self.take()
            left = m.BoolOp("and", left, self.parse_not(), pos)
        return left

    def parse_not(self) -> m.Expr:
        if self.at("not"):
            pos = self.pos()
            self.take()
            return m.BoolOp("not", self.parse_not(), None, pos)
        return self.parse_cmp()

    _CMP = {"EQEQ": "==", "NEQ": "!=", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}

    def parse_cmp(self) -> m.Expr:
        left = self.parse_add()
        if self.peek().kind in self._CMP:
            pos = self.pos()
            op = self._CMP[self.take().kind]
            right = self.parse_add()
            return m.Cmp(op, left, right, pos)
        return left

    def parse_add(self) -> m.Expr:
        left = self.parse_mul()
        while self.peek().kind in ("PLUS", "MINUS"):
            pos = self.pos()
            op = "+" if self.take().kind == "PLUS" else "-"
            left = m.Arith(op, left, self.parse_mul(), pos)
        return left

    def parse_mul(self) -> m.Expr:
        left = self.parse_primary()
        while self.peek().kind in ("STAR", "SLASH"):
            pos = self.pos()
            op = "*" if self.take().kind == "STAR" else "/"
            left = m.Arith(op, left, self.parse_primary(), pos)
        return left

    def parse_primary(self) -> m.Expr:
        tok = self.peek()
        if tok.kind == "LPAREN":
            self.take()
            e = self.parse_expr()
            self.expect("RPAREN")
            return e
        if tok.kind == "MINUS":
            if self.at("INT", 1):
                return self.parse_literal()
            self.fail("unary minus is only allowed on integer literals")
        if tok.kind in ("INT", "STRING", "true", "false", "ID"):
            return self.parse_literal()
        self.fail(f"expected an expression, found {tok.text or 'end of file'!r}")


def parse(text: str, origin: str = "<input>") -> ParseResult:
    """Parse one `.arc` source text. Never raises; returns the unit (or None
    if any error diagnostic was produced) plus all diagnostics in order."""
    lexer = _Lexer(text, origin)
    tokens = lexer.tokens()
    diagnostics = list(lexer.diagnostics)
    parser = _Parser(tokens, origin, diagnostics)
    try:
        unit = parser.parse_unit()
    except _SyntaxError:  # pragma: no cover - parse_unit recovers internally
        unit = None
    if any(d.severity == "error" for d in diagnostics):
        return ParseResult(None, diagnostics)
    return ParseResult(unit, diagnostics)


# --------------------------------------------------------------------------
# Pretty printer


_PREC = {"or": 1, "and": 2, "not": 3, "cmp": 4, "add": 5, "mul": 6, "atom": 7}


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        else:
            out.append(ch)
    return "".join(out)


def format_expr(e: m.Expr, parent: int = 0) -> str:
    if isinstance(e, m.Lit):
        if e.kind == "Boolean":
            text, level = ("true" if e.value else "false"), _PREC["atom"]
        elif e.kind == "Integer":
            text, level = str(e.value), _PREC["atom"]
        else:
            text, level = f'"{_escape(e.value)}"', _PREC["atom"]
    elif isinstance(e, m.Name):
        text, level = e.ident, _PREC["atom"]
    elif isinstance(e, m.Arith):
        level = _PREC["mul"] if e.op in "*/" else _PREC["add"]
        text = f"{format_expr(e.left, level)} {e.op} {format_expr(e.right, level + 1)}"
    elif isinstance(e, m.Cmp):
        level = _PREC["cmp"]
        text = f"{format_expr(e.left, level + 1)} {e.op} {format_expr(e.right, level + 1)}"
    elif isinstance(e, m.BoolOp):
        level = _PREC[e.op]
        if e.op == "not":
            text = f"not {format_expr(e.left, level)}"
        else:
            text = f"{format_expr(e.left, level)} {e.op} {format_expr(e.right, level + 1)}"
    else:
        raise TypeError(f"not an expression: {e!r}")
    if level < parent:
        return f"({text})"
    return text


def _format_type(t: m.TypeExpr) -> str:
    return str(t)


def _format_pattern(p: m.Pattern) -> str:
    if isinstance(p, m.Wildcard):
        return "*"
    if isinstance(p, m.AbsentPattern):
        return "--"
    return format_expr(p.value)


def _format_actions(actions: tuple[tuple[str, m.Action], ...]) -> str:
    parts = []
    for name, act in actions:
        rhs = "--" if isinstance(act, m.AbsentOut) else format_expr(act)
        parts.append(f"{name} = {rhs}")
    return "{" + ", ".join(parts) + "}"


def _format_pattern_list(pattern, guard) -> str:
    parts = [f"{port} = {_format_pattern(p)}" for port, p in pattern]
    if guard is not None:
        parts.append(format_expr(guard))
    return ", ".join(parts)


def _format_behavior(b: m.Behavior, indent: str) -> list[str]:
    inner = indent + "  "
    lines: list[str] = []
    if isinstance(b, m.Native):
        return [f"{indent}native;"]
    if isinstance(b, m.Automaton):
        lines.append(f"{indent}automaton {{")
        for v in b.variables:
            lines.append(f"{inner}var {_format_type(v.type)} {v.name} = {format_expr(v.init)};")
        lines.append(f"{inner}state {', '.join(b.states)};")
        init = f"{inner}initial {b.initial_state}"
        if b.initial_outputs:
            init += f" / {_format_actions(b.initial_outputs)}"
        lines.append(init + ";")
        for t in b.transitions:
            s = f"{inner}{t.source} -> {t.target}"
            if t.pattern:
                s += f" [{_format_pattern_list(t.pattern, None)}]"
            if t.guard is not None:
                s += f" {{{format_expr(t.guard)}}}"
            if t.actions:
                s += f" / {_format_actions(t.actions)}"
            lines.append(s + ";")
        lines.append(f"{indent}}}")
        return lines
    if isinstance(b, m.RuleTable):
        lines.append(f"{indent}rules {{")
        for v in b.variables:
            lines.append(f"{inner}var {_format_type(v.type)} {v.name} = {format_expr(v.init)};")
        for r in b.rules:
            lines.append(f"{inner}[{_format_pattern_list(r.pattern, r.guard)}] => {_format_actions(r.actions)};")
        lines.append(f"{indent}}}")
        return lines
    raise TypeError(f"not a behavior: {b!r}")


def pretty(unit: SourceUnit) -> str:
    """Canonical text for a source unit; reparsing yields an equal AST."""
    blocks: list[str] = []
    for e in unit.enums:
        blocks.append(f"enum {e.name} {{ {', '.join(e.values)} }}")
    for c in unit.components:
        lines = []
        header = f"component {c.name}"
        if c.type_params:
            header += f"<{', '.join(c.type_params)}>"
        if c.config_params:
            header += "(" + ", ".join(f"{_format_type(t)} {n}" for t, n in c.config_params) + ")"
        lines.append(header + " {")
        for p in c.ports:
            lines.append(f"  port {p.direction} {_format_type(p.type)} {p.name};")
        for s in c.subcomponents:
            decl = f"  instance {s.component_ref}"
            if s.type_args:
                decl += f"<{', '.join(_format_type(t) for t in s.type_args)}>"
            if s.config_args:
                decl += "(" + ", ".join(format_expr(a) for a in s.config_args) + ")"
            lines.append(decl + f" {s.instance_name};")
        for conn in c.connectors:
            lines.append(f"  connect {conn.source} -> {conn.target};")
        for b in c.behaviors:
            lines.extend(_format_behavior(b, "  "))
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
