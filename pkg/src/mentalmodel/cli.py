"""Command-line entry point.

Subcommands:

    explain-nn       run a forward pass and open the dialogue REPL on it
    explain-prolog   solve a query and open the dialogue REPL on it
    serve            expose exported mental-model documents over HTTP
    repl             open the dialogue REPL on an exported document

Exit codes: 0 success, 2 input error (bad files, shapes, syntax, bind
failures), 3 legitimate negative outcome (query not derivable).
"""

from __future__ import annotations

import argparse
import logging
import socket
import sys
from pathlib import Path

from . import dialogue, document, nn, prolog
from .errors import MentalModelError
from .service import SessionStore, create_app, infer_root_output

DEFAULT_LAYERS = (784, 30, 10)
DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8421


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mentalmodel",
        description="Build queryable mental models of AI systems and explore them in a why/how dialogue.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_nn = sub.add_parser("explain-nn", help="explain a feed-forward network prediction")
    source = p_nn.add_mutually_exclusive_group(required=True)
    source.add_argument("--net", help="network JSON file {layer_sizes, activation, weights, biases}")
    source.add_argument("--seed", type=int, help="generate a reproducible random network instead")
    p_nn.add_argument("--layers", default=",".join(map(str, DEFAULT_LAYERS)),
                      help="comma-separated layer sizes for --seed (default %(default)s)")
    p_nn.add_argument("--activation", default="sigmoid", choices=sorted(nn.ACTIVATIONS),
                      help="activation for --seed networks")
    p_nn.add_argument("--input", required=True, help="input vector: JSON array or one CSV row")
    p_nn.add_argument("--export", help="write the mental-model document here instead of opening the REPL")
    p_nn.add_argument("--no-scope", action="store_true", help="allow questions about unpresented entities")

    p_pl = sub.add_parser("explain-prolog", help="explain a restricted-Prolog derivation")
    p_pl.add_argument("program", help="program file (facts and ground definite rules)")
    p_pl.add_argument("query", help="query atom")
    p_pl.add_argument("--export", help="write the mental-model document here instead of opening the REPL")
    p_pl.add_argument("--no-scope", action="store_true", help="allow questions about unpresented entities")

    p_serve = sub.add_parser("serve", help="serve exported mental-model documents over HTTP")
    p_serve.add_argument("documents", nargs="+", help="mental-model JSON documents")
    p_serve.add_argument("--host", default=DEFAULT_HOST)
    p_serve.add_argument("--port", type=int, default=DEFAULT_PORT)

    p_repl = sub.add_parser("repl", help="open the dialogue REPL on an exported document")
    p_repl.add_argument("--import", dest="import_path", required=True, metavar="PATH",
                        help="mental-model JSON document")
    p_repl.add_argument("--root", help="root output entity name (default: inferred)")
    p_repl.add_argument("--no-scope", action="store_true")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "explain-nn":
            return cmd_explain_nn(args)
        if args.command == "explain-prolog":
            return cmd_explain_prolog(args)
        if args.command == "serve":
            return cmd_serve(args)
        return cmd_repl(args)
    except MentalModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def cmd_explain_nn(args) -> int:
    if args.net:
        net = nn.load_network_file(args.net)
    else:
        try:
            layers = [int(part) for part in args.layers.split(",") if part.strip()]
        except ValueError:
            print(f"error: bad --layers value {args.layers!r}", file=sys.stderr)
            return 2
        net = nn.generate_network(layers, seed=args.seed, activation=args.activation)
    vector = nn.load_input_vector(args.input)
    record = nn.forward(net, vector)
    mm = nn.build_mental_model(net, record)
    if args.export:
        document.save(mm, args.export)
        print(f"wrote mental-model document to {args.export}")
        return 0
    run_repl(mm, infer_root_output(mm), scope_enabled=not args.no_scope)
    return 0


def cmd_explain_prolog(args) -> int:
    program = prolog.parse_program(Path(args.program).read_text(encoding="utf-8"))
    tree = prolog.solve(program, args.query)
    if isinstance(tree, prolog.Failure):
        print(f"query {args.query!r} is not derivable from {args.program}", file=sys.stderr)
        return 3
    mm = prolog.build_mental_model(program, tree)
    if args.export:
        document.save(mm, args.export)
        print(f"wrote mental-model document to {args.export}")
        return 0
    root = mm.entities_named(prolog.parse_atom(args.query))[0].id
    run_repl(mm, root, scope_enabled=not args.no_scope)
    return 0


def cmd_serve(args) -> int:
    store = SessionStore()
    for path in args.documents:
        mm = document.load(path)
        store.add_model(Path(path).stem, mm)
    # fail fast with exit 2 when the port is taken, rather than inside uvicorn
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.host, args.port))
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    finally:
        probe.close()

    import uvicorn

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    app = create_app(store)
    print(f"serving {sorted(store.models)} on http://{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_repl(args) -> int:
    mm = document.load(args.import_path)
    if args.root:
        named = mm.entities_named(args.root)
        if not named:
            print(f"error: no entity named {args.root!r}", file=sys.stderr)
            return 2
        root = named[0].id
    else:
        root = infer_root_output(mm)
    run_repl(mm, root, scope_enabled=not args.no_scope)
    return 0


# -- REPL ------------------------------------------------------------------------

def _format_attributes(attributes: dict) -> str:
    return ", ".join(f"{k}={v!r}" for k, v in attributes.items() if k != "name")


def _print_turn(session: dialogue.Session, turn: dialogue.TurnRecord) -> None:
    if turn.answer_kind == "presentation":
        entity = turn.answer
        print(
            f"The system's output is {entity.name!r} ({entity.kind.name}): "
            f"{_format_attributes(entity.attributes)}"
        )
    elif turn.answer_kind == "relation_tier":
        for rel, label in zip(turn.answer, turn.labels):
            print(
                f"rel:{label} [{rel.template.name}] "
                f"{rel.explanan.name} ({rel.explanan.kind.name}) -> "
                f"{rel.explanandum.name} ({rel.explanandum.kind.name})"
            )
            print(f"      reason: {rel.template.reason}")
            print(f"      explanan: {_format_attributes(rel.explanan.attributes)}")
    elif turn.answer_kind == "model_list":
        for model in turn.answer:
            print(f"model {model.name!r} (of {model.model_of[0]}.{model.model_of[1]})")
            print(f"      story: {model.story}")
    elif turn.answer_kind == "exhausted":
        print("Nothing new: every relation answering that question was already presented.")
        print("('reset' makes them presentable again.)")
    else:
        print(turn.answer)


def _print_targets(session: dialogue.Session, limit: int = 12) -> None:
    names = []
    for entity_id in sorted(session.scope):
        entity = session.mental_model.entity(entity_id)
        if entity is not None:
            names.append(entity.name)
    shown = ", ".join(names[:limit]) + (", ..." if len(names) > limit else "")
    rels = f"rel:1..rel:{len(session.labels)}" if session.labels else "none yet"
    print(f"[targets] entities: {shown} | relations: {rels}")


def run_repl(mm, root_output: int, scope_enabled: bool = True) -> None:
    session = dialogue.start_session(mm, root_output, scope_enabled=scope_enabled)
    _print_turn(session, session.transcript[0])
    print("Ask 'why <entity>.<attribute>' or 'how rel:<n>'; 'reset' clears presented")
    print("relations; 'quit' exits.")
    _print_targets(session)
    while True:
        try:
            line = input("> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            return
        if not line:
            continue
        if line in ("quit", "exit", "q"):
            return
        if line == "help":
            print("questions: why <entity>.<attribute> | how rel:<n> | reset")
            continue
        try:
            turn = dialogue.ask(session, line)
        except MentalModelError as exc:
            print(f"error: {exc}")
            continue
        _print_turn(session, turn)
        _print_targets(session)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
