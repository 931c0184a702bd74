#!/usr/bin/env python3
"""Seeded network walkthrough: forward pass, mental model, one why/how chain.

Uses a small [6, 5, 4] network so the printed tiers stay readable; pass
--full for the [784, 30, 10] shape (the tiers get long).
"""

import argparse

from mentalmodel import nn
from mentalmodel.dialogue import ask, start_session
from mentalmodel.service import infer_root_output


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--full", action="store_true", help="use the [784,30,10] shape")
    args = parser.parse_args()

    sizes = [784, 30, 10] if args.full else [6, 5, 4]
    net = nn.generate_network(sizes, seed=args.seed)
    vector = [k / sizes[0] for k in range(sizes[0])]
    record = nn.forward(net, vector)
    mm = nn.build_mental_model(net, record)
    print(f"network {sizes}, seed {args.seed}: output value {record.output_value}")
    print(f"mental model: {len(mm.entities)} entities, {len(mm.relations)} relations, "
          f"{len(mm.models)} models\n")

    session = start_session(mm, infer_root_output(mm))
    out_pos = record.output_value
    last = len(sizes) - 1
    for question in ["why output.value", f"why n_{last}_{out_pos}.activation"]:
        print(f"> {question}")
        turn = ask(session, question)
        for rel, label in zip(turn.answer[:6], turn.labels[:6]):
            print(f"  rel:{label} [{rel.template.name}] "
                  f"{rel.explanan.name} -> {rel.explanandum.name}")
        if len(turn.answer) > 6:
            print(f"  ... {len(turn.answer) - 6} more relations in this tier")

    # how-question on the first presented relation
    print("> how rel:1")
    turn = ask(session, "how rel:1")
    for model in turn.answer:
        print(f"  model {model.name}: {model.story}")


if __name__ == "__main__":
    main()
