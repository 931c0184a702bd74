"""Restricted-Prolog adapter: parse, solve, and build the mental model.

The accepted language is deliberately small: ground programs only (no
variables), definite clauses only (no negation as failure), single-atom
queries. Grammar::

    program   := clause*
    clause    := atom "."  |  atom ":-" atom ("," atom)* "."
    atom      := ident [ "(" const ("," const)* ")" ]
    ident     := lowercase letter followed by letters/digits/underscores
    const     := ident | unsigned integer
    comment   := "%" to end of line

Rules are labeled R1, R2, ... in source order. Queries are solved against the
least model computed by forward chaining to fixpoint, so derivability is known
up front and the returned derivation tree is built without any backtracking:
each node resolves by `fact` when the atom is a program fact, otherwise by the
first rule (source order) whose body was fully derived at an earlier chaining
stage. Restricting the choice to earlier stages keeps the construction
terminating on mutually recursive programs while staying deterministic.

The mental model instantiates one Predicate entity per program atom and one
Rule entity per rule, but entity-entity relations only for what the derivation
tree actually touched, so the explanation dialogue follows the trace.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    AttributePattern,
    FREE,
    MODIFIED,
    MentalModel,
    MentalModelBuilder,
    Model,
    UNSET,
)
from .errors import (
    NegationNotAllowed,
    PrologSyntaxError,
    TreeProgramMismatch,
    VariableNotAllowed,
)


@dataclass(frozen=True)
class Rule:
    head: str
    body: tuple[str, ...]
    label: str


@dataclass(frozen=True)
class Program:
    """A parsed ground program: facts and labeled rules, in source order."""

    facts: tuple[str, ...]
    rules: tuple[Rule, ...]

    def atoms(self) -> list[str]:
        """Every distinct atom: facts first, then rule heads/bodies in source order."""
        seen: dict[str, None] = {}
        for atom in self.facts:
            seen.setdefault(atom, None)
        for rule in self.rules:
            for atom in (rule.head, *rule.body):
                seen.setdefault(atom, None)
        return list(seen)


@dataclass(frozen=True)
class TreeNode:
    """One derivation step: `via` is "fact" or a rule label."""

    atom: str
    via: str
    children: tuple["TreeNode", ...] = ()


@dataclass(frozen=True)
class DerivationTree:
    root: TreeNode

    def rule_labels(self) -> set[str]:
        labels = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.via != "fact":
                labels.add(node.via)
            stack.extend(node.children)
        return labels


class Failure:
    """Distinguished result: the query is not in the program's least model."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Failure"


FAILURE = Failure()


# -- tokenizer / parser ----------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    type: str  # IDENT INT VAR PUNCT NEG
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, column = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
            continue
        if ch in " \t\r":
            column += 1
            i += 1
            continue
        if ch == "%":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        start_col = column
        if ch == "\\" and text[i : i + 2] == "\\+":
            raise NegationNotAllowed("negation as failure is not supported", line, start_col)
        if ch == ":" and text[i : i + 2] == ":-":
            tokens.append(_Token("PUNCT", ":-", line, start_col))
            i += 2
            column += 2
            continue
        if ch in "(),.":
            tokens.append(_Token("PUNCT", ch, line, start_col))
            i += 1
            column += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, start_col))
            column += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "VAR" if (ch.isupper() or ch == "_") else "IDENT"
            tokens.append(_Token(kind, word, line, start_col))
            column += j - i
            i = j
            continue
        raise PrologSyntaxError(f"unexpected character {ch!r}", line, start_col)
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> _Token:
        token = self._peek()
        if token is None:
            last = self.tokens[-1] if self.tokens else _Token("PUNCT", "", 1, 1)
            raise PrologSyntaxError("unexpected end of input", last.line, last.column)
        self.pos += 1
        return token

    def _expect(self, text: str) -> _Token:
        token = self._next()
        if token.type != "PUNCT" or token.text != text:
            raise PrologSyntaxError(
                f"expected {text!r}, found {token.text!r}", token.line, token.column
            )
        return token

    def atom(self) -> str:
        token = self._next()
        if token.type == "VAR":
            raise VariableNotAllowed(
                f"variables are not supported ({token.text!r})", token.line, token.column
            )
        if token.type != "IDENT":
            raise PrologSyntaxError(
                f"expected an atom, found {token.text!r}", token.line, token.column
            )
        if token.text == "not":
            raise NegationNotAllowed(
                "negation as failure is not supported", token.line, token.column
            )
        functor = token.text
        nxt = self._peek()
        if nxt is None or nxt.type != "PUNCT" or nxt.text != "(":
            return functor
        self._expect("(")
        args = [self._constant()]
        while True:
            token = self._next()
            if token.type == "PUNCT" and token.text == ")":
                break
            if token.type == "PUNCT" and token.text == ",":
                args.append(self._constant())
                continue
            raise PrologSyntaxError(
                f"expected ',' or ')', found {token.text!r}", token.line, token.column
            )
        return f"{functor}({','.join(args)})"

    def _constant(self) -> str:
        token = self._next()
        if token.type == "VAR":
            raise VariableNotAllowed(
                f"variables are not supported ({token.text!r})", token.line, token.column
            )
        if token.type in ("IDENT", "INT"):
            return token.text
        raise PrologSyntaxError(
            f"expected a constant, found {token.text!r}", token.line, token.column
        )

    def clauses(self):
        while self._peek() is not None:
            head = self.atom()
            token = self._next()
            if token.type == "PUNCT" and token.text == ".":
                yield head, None
                continue
            if token.type == "PUNCT" and token.text == ":-":
                body = [self.atom()]
                while True:
                    token = self._next()
                    if token.type == "PUNCT" and token.text == ".":
                        break
                    if token.type == "PUNCT" and token.text == ",":
                        body.append(self.atom())
                        continue
                    raise PrologSyntaxError(
                        f"expected ',' or '.', found {token.text!r}",
                        token.line,
                        token.column,
                    )
                yield head, tuple(body)
                continue
            raise PrologSyntaxError(
                f"expected '.' or ':-', found {token.text!r}", token.line, token.column
            )


def parse_program(text: str) -> Program:
    """Parse program text; raises PrologSyntaxError (with line/column) on errors."""
    facts: dict[str, None] = {}
    rules: list[Rule] = []
    for head, body in _Parser(_tokenize(text)).clauses():
        if body is None:
            facts.setdefault(head, None)
        else:
            rules.append(Rule(head=head, body=body, label=f"R{len(rules) + 1}"))
    return Program(facts=tuple(facts), rules=tuple(rules))


def parse_atom(text: str) -> str:
    """Parse a single query atom into its canonical text form."""
    parser = _Parser(_tokenize(text))
    atom = parser.atom()
    if parser._peek() is not None:
        token = parser._peek()
        raise PrologSyntaxError(
            f"trailing input after atom: {token.text!r}", token.line, token.column
        )
    return atom


# -- evaluation -------------------------------------------------------------------

def least_model(program: Program) -> dict[str, int]:
    """Forward chaining to fixpoint; maps each derivable atom to the stage
    (round) at which it was first derived. Facts are stage 0."""
    stage = {atom: 0 for atom in program.facts}
    current = 0
    while True:
        current += 1
        new = {}
        for rule in program.rules:
            if rule.head in stage or rule.head in new:
                continue
            if all(b in stage for b in rule.body):
                new[rule.head] = current
        if not new:
            return stage
        stage.update(new)


def solve(program: Program, query: str) -> DerivationTree | Failure:
    """Derive `query`, returning its derivation tree, or FAILURE if it is not
    in the least model.

    Node choice is deterministic: a program fact resolves as `fact`; anything
    else resolves by the first rule (source order) whose body atoms were all
    derived at strictly earlier chaining stages, which always exists for a
    derivable atom and bounds the subtree depth by the atom's stage.
    """
    query = parse_atom(query)
    stage = least_model(program)
    if query not in stage:
        return FAILURE

    def build(atom: str) -> TreeNode:
        if atom in program.facts:
            return TreeNode(atom=atom, via="fact")
        for rule in program.rules:
            if rule.head == atom and all(stage.get(b, len(stage) + 1) < stage[atom] for b in rule.body):
                children = tuple(build(b) for b in rule.body)
                return TreeNode(atom=atom, via=rule.label, children=children)
        raise AssertionError(f"derivable atom {atom!r} has no resolving rule")

    return DerivationTree(root=build(query))


# -- mental model ---------------------------------------------------------------

HEAD_TO_PREDICATE_REASON = "This predicate is true because it is the head of this used rule"
PREDICATE_TO_BODY_REASON = "This rule was used because this predicate in the body was true"
FACT_TO_FACT_REASON = "This predicate is True because it is a fact"

USED_RULE_STORY = "A used rule makes the predicate in its head True"
TRUE_BODY_STORY = "A rule is considered used when each element in body evaluated to True"
FACT_STORY = "A predicate which is a fact in the program will always evaluate to True"


def _check_tree(program: Program, node: TreeNode) -> None:
    if node.via == "fact":
        if node.atom not in program.facts:
            raise TreeProgramMismatch(f"{node.atom!r} is not a fact of this program")
        if node.children:
            raise TreeProgramMismatch(f"fact node {node.atom!r} has children")
        return
    rule = next((r for r in program.rules if r.label == node.via), None)
    if rule is None:
        raise TreeProgramMismatch(f"tree references unknown rule {node.via!r}")
    if rule.head != node.atom:
        raise TreeProgramMismatch(
            f"node {node.atom!r} resolved by {rule.label}, whose head is {rule.head!r}"
        )
    if tuple(child.atom for child in node.children) != rule.body:
        raise TreeProgramMismatch(
            f"children of {node.atom!r} do not match the body of {rule.label}"
        )
    for child in node.children:
        _check_tree(program, child)


def build_mental_model(program: Program, tree: DerivationTree) -> MentalModel:
    """Instantiate the Predicate/Rule mental model for one derivation.

    Every program atom and rule becomes an entity (truth/used flags reflect the
    least model and the trace); relations are instantiated from the derivation
    tree only, so unused rules keep used=False and no incident edges.
    """
    _check_tree(program, tree.root)
    derivable = least_model(program)
    used_labels = tree.rule_labels()

    b = MentalModelBuilder()
    predicate = b.define_kind(
        "Predicate", {}, {"fact": "boolean", "truth": "boolean", "text": "text"}
    )
    rule_kind = b.define_kind(
        "Rule", {}, {"used": "boolean", "head": "text", "body": "text"}
    )

    predicates = {
        atom: b.instantiate_entity(
            predicate,
            atom,
            {"fact": atom in program.facts, "truth": atom in derivable, "text": atom},
        )
        for atom in program.atoms()
    }
    rule_entities = {
        rule.label: b.instantiate_entity(
            rule_kind,
            rule.label,
            {"used": rule.label in used_labels, "head": rule.head, "body": ", ".join(rule.body)},
        )
        for rule in program.rules
    }

    head_to_predicate = b.define_relation_template(
        "HeadToPredicate",
        ("Rule", ("used", "head")),
        ("Predicate", ("truth",)),
        HEAD_TO_PREDICATE_REASON,
        priority=0,
    )
    predicate_to_body = b.define_relation_template(
        "PredicateToBody",
        ("Predicate", ("truth",)),
        ("Rule", ("used",)),
        PREDICATE_TO_BODY_REASON,
        priority=0,
    )
    fact_to_fact = b.define_relation_template(
        "FactToFact",
        ("Predicate", ("fact",)),
        ("Predicate", ("truth",)),
        FACT_TO_FACT_REASON,
        priority=0,
    )

    def add_once(template, explanan, explanandum):
        if not b.has_relation(template.name, explanan.id, explanandum.id):
            b.add_relation(template, explanan, explanandum)

    def walk(node: TreeNode):
        if node.via == "fact":
            add_once(fact_to_fact, predicates[node.atom], predicates[node.atom])
            return
        rule_entity = rule_entities[node.via]
        add_once(head_to_predicate, rule_entity, predicates[node.atom])
        for child in node.children:
            add_once(predicate_to_body, predicates[child.atom], rule_entity)
        for child in node.children:
            walk(child)

    walk(tree.root)

    b.add_model(
        Model(
            name="UsedRule",
            context=(
                AttributePattern("Predicate", {"truth": UNSET}),
                AttributePattern("Rule", {"used": True, "head": FREE}),
            ),
            result=(AttributePattern("Predicate", {"truth": MODIFIED}),),
            model_of=("Predicate", "truth"),
            story=USED_RULE_STORY,
        )
    )
    b.add_model(
        Model(
            name="TrueBody",
            context=(
                AttributePattern("Predicate", {"truth": True}),
                AttributePattern("Rule", {"used": UNSET}),
            ),
            result=(AttributePattern("Rule", {"used": MODIFIED}),),
            model_of=("Rule", "used"),
            story=TRUE_BODY_STORY,
        )
    )
    b.add_model(
        Model(
            name="Fact",
            context=(AttributePattern("Predicate", {"truth": FREE, "fact": True}),),
            result=(AttributePattern("Predicate", {"truth": MODIFIED, "fact": True}),),
            model_of=("Predicate", "truth"),
            story=FACT_STORY,
        )
    )
    return b.build()
