#!/usr/bin/env python3
"""Run the canonical three-clause dialogue end to end and print the transcript.

Builds the mental model for `b. c. a :- b, c.` queried with `a`, then walks
the full why/how sequence down to exhaustion, showing what a user at the REPL
would see.
"""

import json

from mentalmodel import prolog
from mentalmodel.dialogue import ask, export_transcript, start_session

QUESTIONS = [
    "why a.truth",
    "how rel:1",
    "why R1.used",
    "how rel:2",
    "why b.truth",
    "how rel:4",
    "why c.truth",
    "how rel:5",
    "why a.truth",
]


def main():
    program = prolog.parse_program("b. c. a :- b, c.")
    tree = prolog.solve(program, "a")
    mm = prolog.build_mental_model(program, tree)
    print(f"program: b. c. a :- b, c.   query: a")
    print(f"mental model: {len(mm.entities)} entities, {len(mm.relations)} relations, "
          f"{len(mm.models)} models\n")

    session = start_session(mm, mm.entities_named("a")[0].id)
    for question in QUESTIONS:
        print(f"> {question}")
        turn = ask(session, question)
        if turn.answer_kind == "relation_tier":
            for rel, label in zip(turn.answer, turn.labels):
                print(f"  rel:{label} [{rel.template.name}] "
                      f"{rel.explanan.name} -> {rel.explanandum.name}")
                print(f"        {rel.template.reason}")
        elif turn.answer_kind == "model_list":
            for model in turn.answer:
                print(f"  model {model.name}: {model.story}")
        else:
            print(f"  ({turn.answer_kind})")
    print("\nexported transcript:")
    print(json.dumps(export_transcript(session), indent=2)[:400], "...")


if __name__ == "__main__":
    main()
