"""Feed-forward network adapter: inference plus the mental-model builder.

The network is inference-only. Layer l feeds layer l+1 through a weight matrix
whose entry (i, j) connects neuron i of the lower layer to neuron j of the
upper layer, so one step is x[l+1] = g(W[l].T @ x[l] + b[l]). The classifier
answer is the position of the biggest output activation (lowest index wins
ties).

One prediction becomes a mental model with three kinds:

* Neuron(activation, layer, position), one entity per neuron;
* Parameter(value, layer, i, j), one entity per weight and per bias. Biases
  use the sentinel i = -1, which keeps a single parameter kind while making
  biases addressable explanans;
* OutputAnswer(value), a single entity holding the argmax.

Relations connect every adjacent-layer neuron pair, every parameter to the
neuron it feeds, and every output neuron to the answer. Each non-input neuron
gets its own activation-equation model; one further model tells the argmax
story. All relation priorities are 0, so a why-question returns the full
fan-in as a single tier.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .core import (
    AttributePattern,
    FREE,
    MODIFIED,
    MentalModel,
    MentalModelBuilder,
    Model,
    UNSET,
)
from .errors import InputLengthMismatch, MalformedDocument, RecordMismatch, ShapeMismatch

NEURON_TO_NEURON_REASON = (
    "This lower layer neuron's activation participated in the computation "
    "of the questioned activation"
)
PARAMETER_TO_NEURON_REASON = (
    "This parameter value participated in the computation of the questioned activation"
)
OUTPUT_TO_ANSWER_REASON = (
    "this output neuron's activation was compared to decide the network's answer"
)

ACTIVATIONS = {
    "sigmoid": lambda z: 1.0 / (1.0 + np.exp(-z)),
    "relu": lambda z: np.maximum(z, 0.0),
    "tanh": np.tanh,
}

BIAS_SENTINEL = -1


@dataclass(frozen=True)
class NetworkSpec:
    """Validated network parameters; weights[l] has shape (n_l, n_{l+1})."""

    layer_sizes: tuple[int, ...]
    activation: str
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class ActivationRecord:
    """Per-layer activation vectors for one forward pass, plus the argmax."""

    layers: tuple[tuple[float, ...], ...]
    output_value: int


def make_network(layer_sizes, activation, weights, biases) -> NetworkSpec:
    """Assemble and validate a NetworkSpec from plain sequences."""
    layer_sizes = tuple(int(n) for n in layer_sizes)
    if len(layer_sizes) < 2 or any(n < 1 for n in layer_sizes):
        raise ShapeMismatch(f"layer sizes must be >= 1 with at least two layers: {layer_sizes}")
    if activation not in ACTIVATIONS:
        raise ShapeMismatch(
            f"unknown activation {activation!r}; choose from {sorted(ACTIVATIONS)}"
        )
    if len(weights) != len(layer_sizes) - 1 or len(biases) != len(layer_sizes) - 1:
        raise ShapeMismatch(
            f"need {len(layer_sizes) - 1} weight matrices and bias vectors, "
            f"got {len(weights)} and {len(biases)}"
        )
    ws, bs = [], []
    for l, (w, bias) in enumerate(zip(weights, biases)):
        w = np.asarray(w, dtype=float)
        bias = np.asarray(bias, dtype=float)
        expected = (layer_sizes[l], layer_sizes[l + 1])
        if w.shape != expected:
            raise ShapeMismatch(f"weight matrix {l} has shape {w.shape}, expected {expected}")
        if bias.shape != (layer_sizes[l + 1],):
            raise ShapeMismatch(
                f"bias vector {l} has length {bias.shape}, expected ({layer_sizes[l + 1]},)"
            )
        ws.append(w)
        bs.append(bias)
    return NetworkSpec(
        layer_sizes=layer_sizes,
        activation=activation,
        weights=tuple(ws),
        biases=tuple(bs),
    )


def load_network(document) -> NetworkSpec:
    """Build a NetworkSpec from a parsed JSON document (or JSON text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"network document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise MalformedDocument("network document must be a JSON object")
    try:
        return make_network(
            document["layer_sizes"],
            document.get("activation", "sigmoid"),
            document["weights"],
            document["biases"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad network document: {exc}") from exc


def load_network_file(path) -> NetworkSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return load_network(fh.read())


def generate_network(layer_sizes, seed: int, activation: str = "sigmoid") -> NetworkSpec:
    """Reproducible demo network: uniform(-1, 1) weights and biases."""
    rng = np.random.default_rng(seed)
    sizes = tuple(int(n) for n in layer_sizes)
    weights = [rng.uniform(-1.0, 1.0, (sizes[l], sizes[l + 1])) for l in range(len(sizes) - 1)]
    biases = [rng.uniform(-1.0, 1.0, sizes[l + 1]) for l in range(len(sizes) - 1)]
    return make_network(sizes, activation, weights, biases)


def load_input_vector(path) -> list[float]:
    """Read an input vector: a JSON array of reals, or one CSV row."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".csv"):
        rows = list(csv.reader(text.splitlines()))
        if not rows:
            raise MalformedDocument(f"{path}: empty CSV input")
        try:
            return [float(cell) for cell in rows[0]]
        except ValueError as exc:
            raise MalformedDocument(f"{path}: non-numeric CSV cell: {exc}") from exc
    try:
        values = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(values, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
    ):
        raise MalformedDocument(f"{path}: expected a JSON array of numbers")
    return [float(v) for v in values]


def forward(net: NetworkSpec, input_vector) -> ActivationRecord:
    """Run one forward pass; returns all layer activations and the argmax."""
    x = np.asarray(input_vector, dtype=float)
    if x.shape != (net.layer_sizes[0],):
        raise InputLengthMismatch(
            f"input has length {x.shape}, network expects {net.layer_sizes[0]}"
        )
    g = ACTIVATIONS[net.activation]
    layers = [tuple(float(v) for v in x)]
    for w, bias in zip(net.weights, net.biases):
        x = g(w.T @ x + bias)
        layers.append(tuple(float(v) for v in x))
    return ActivationRecord(layers=tuple(layers), output_value=int(np.argmax(x)))


def _check_record(net: NetworkSpec, record: ActivationRecord) -> None:
    if len(record.layers) != len(net.layer_sizes) or any(
        len(layer) != size for layer, size in zip(record.layers, net.layer_sizes)
    ):
        raise RecordMismatch("activation record layers do not match the network shape")
    output = record.layers[-1]
    if record.output_value != max(range(len(output)), key=lambda i: (output[i], -i)):
        raise RecordMismatch("output_value is not the argmax of the final layer")


def build_mental_model(net: NetworkSpec, record: ActivationRecord) -> MentalModel:
    """Convert one recorded prediction into the queryable mental model."""
    _check_record(net, record)
    b = MentalModelBuilder()
    neuron = b.define_kind(
        "Neuron", {}, {"activation": "real", "layer": "integer", "position": "integer"}
    )
    parameter = b.define_kind(
        "Parameter", {}, {"value": "real", "layer": "integer", "i": "integer", "j": "integer"}
    )
    output_answer = b.define_kind("OutputAnswer", {}, {"value": "integer"})

    neurons: dict[tuple[int, int], object] = {}
    for l, activations in enumerate(record.layers):
        for p, value in enumerate(activations):
            neurons[(l, p)] = b.instantiate_entity(
                neuron, f"n_{l}_{p}", {"activation": value, "layer": l, "position": p}
            )

    weight_entities: dict[tuple[int, int, int], object] = {}
    bias_entities: dict[tuple[int, int], object] = {}
    for l, (w, bias) in enumerate(zip(net.weights, net.biases)):
        for i in range(w.shape[0]):
            for j in range(w.shape[1]):
                weight_entities[(l, i, j)] = b.instantiate_entity(
                    parameter,
                    f"w_{l}_{i}_{j}",
                    {"value": float(w[i, j]), "layer": l, "i": i, "j": j},
                )
        for j in range(bias.shape[0]):
            bias_entities[(l, j)] = b.instantiate_entity(
                parameter,
                f"b_{l}_{j}",
                {"value": float(bias[j]), "layer": l, "i": BIAS_SENTINEL, "j": j},
            )

    answer = b.instantiate_entity(output_answer, "output", {"value": record.output_value})

    neuron_to_neuron = b.define_relation_template(
        "NeuronToNeuronActivation",
        ("Neuron", ("activation",)),
        ("Neuron", ("activation",)),
        NEURON_TO_NEURON_REASON,
        priority=0,
    )
    parameter_to_neuron = b.define_relation_template(
        "ParameterToNeuronActivation",
        ("Parameter", ("value",)),
        ("Neuron", ("activation",)),
        PARAMETER_TO_NEURON_REASON,
        priority=0,
    )
    output_to_answer = b.define_relation_template(
        "OutputNeuronToOutputNetwork",
        ("Neuron", ("activation",)),
        ("OutputAnswer", ("value",)),
        OUTPUT_TO_ANSWER_REASON,
        priority=0,
    )

    n_layers = len(net.layer_sizes)
    for l in range(n_layers - 1):
        for j in range(net.layer_sizes[l + 1]):
            for i in range(net.layer_sizes[l]):
                b.add_relation(neuron_to_neuron, neurons[(l, i)], neurons[(l + 1, j)])
    for l in range(n_layers - 1):
        for j in range(net.layer_sizes[l + 1]):
            for i in range(net.layer_sizes[l]):
                b.add_relation(parameter_to_neuron, weight_entities[(l, i, j)], neurons[(l + 1, j)])
            b.add_relation(parameter_to_neuron, bias_entities[(l, j)], neurons[(l + 1, j)])
    last = n_layers - 1
    for i in range(net.layer_sizes[last]):
        b.add_relation(output_to_answer, neurons[(last, i)], answer)

    for l in range(1, n_layers):
        for j in range(net.layer_sizes[l]):
            b.add_model(
                Model(
                    name=f"Neuron activation ({l},{j})",
                    context=(
                        AttributePattern(
                            "Neuron", {"layer": l, "position": j, "activation": UNSET}
                        ),
                        AttributePattern("Neuron", {"layer": l - 1, "activation": FREE}),
                        AttributePattern("Parameter", {"layer": l - 1, "j": j, "value": FREE}),
                    ),
                    result=(
                        AttributePattern(
                            "Neuron", {"layer": l, "position": j, "activation": MODIFIED}
                        ),
                    ),
                    model_of=("Neuron", "activation"),
                    story=(
                        f"x_{j}^{l} = g(sum_i w_i,{j}^{l - 1} * x_i^{l - 1} + b_{j}^{l - 1})"
                    ),
                )
            )
    b.add_model(
        Model(
            name="Output generation",
            context=(
                AttributePattern("Neuron", {"layer": last, "activation": FREE}),
                AttributePattern("OutputAnswer", {"value": UNSET}),
            ),
            result=(AttributePattern("OutputAnswer", {"value": MODIFIED}),),
            model_of=("OutputAnswer", "value"),
            story=f"output = argmax({{x_i^{last} ∀ i}})",
        )
    )
    return b.build()
