"""Line-oriented stdin/stdout protocol for running assistants as
separate processes.

A request is exactly three lines: comma-separated ``slot=path``
bindings, a command (``best``, ``choices`` or ``apply``), and the
current constraints joined by "/" (empty line for no constraints).
Responses are blank-line terminated: label/interactions pairs for
``choices``, the expression script for ``best``, an output file path
for ``apply``.  A malformed request yields a single ``error: ...`` line
and the loop keeps serving.
"""

from __future__ import annotations

import tempfile
from pathlib import Path
from typing import IO, Mapping, Sequence

from .core import Assistant, Choice, InteractionSet, WrangleError

COMMANDS = ("best", "choices", "apply")


def _escape_binding(text: str) -> str:
    return (
        text.replace("%", "%25")
        .replace(",", "%2C")
        .replace("=", "%3D")
        .replace("\n", "%0A")
    )


def _unescape_binding(text: str) -> str:
    return (
        text.replace("%0A", "\n")
        .replace("%3D", "=")
        .replace("%2C", ",")
        .replace("%25", "%")
    )


def encode_bindings(bindings: Mapping[str, str]) -> str:
    return ",".join(
        f"{_escape_binding(k)}={_escape_binding(str(v))}" for k, v in bindings.items()
    )


def decode_bindings(line: str) -> dict[str, str]:
    bindings: dict[str, str] = {}
    if not line.strip():
        return bindings
    for pair in line.split(","):
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise WrangleError(f"malformed binding {pair!r}")
        bindings[_unescape_binding(key)] = _unescape_binding(value)
    return bindings


def encode_interactions(constraints: Sequence) -> str:
    return "/".join(c.render() for c in constraints)


def decode_interaction_texts(line: str) -> list[str]:
    if not line.strip():
        return []
    return line.split("/")


def encode_request(bindings: Mapping[str, str], command: str, constraints: Sequence) -> list[str]:
    if command not in COMMANDS:
        raise WrangleError(f"unknown command {command!r}")
    return [encode_bindings(bindings), command, encode_interactions(constraints)]


def decode_request(lines: Sequence[str]) -> tuple[dict[str, str], str, list[str]]:
    if len(lines) != 3:
        raise WrangleError("a request is exactly three lines")
    bindings = decode_bindings(lines[0])
    command = lines[1].strip()
    if command not in COMMANDS:
        raise WrangleError(f"unknown command {command!r}")
    return bindings, command, decode_interaction_texts(lines[2])


def encode_choices_response(choices: Sequence[Choice]) -> list[str]:
    lines: list[str] = []
    for choice in choices:
        if "\n" in choice.label:
            raise WrangleError("choice labels must be newline-free")
        lines.append(choice.label)
        lines.append(encode_interactions(choice.interactions.constraints))
    lines.append("")
    return lines


def decode_choices_response(lines: Sequence[str]) -> list[tuple[str, list[str]]]:
    if not lines or lines[-1] != "":
        raise WrangleError("response must end with a blank line")
    body = lines[:-1]
    if len(body) % 2:
        raise WrangleError("choices come in label/interactions pairs")
    return [
        (body[i], decode_interaction_texts(body[i + 1])) for i in range(0, len(body), 2)
    ]


def _read_request(stream: IO[str]) -> list[str] | None:
    lines = []
    for _ in range(3):
        line = stream.readline()
        if line == "":
            return None  # end of stream, possibly mid-request
        lines.append(line.rstrip("\n"))
    return lines


def run_process_loop(
    assistant: Assistant,
    in_stream: IO[str],
    out_stream: IO[str],
    out_dir: str | None = None,
) -> None:
    """Serve requests until end of input.  Assistant errors answer with
    a single error line; only I/O failures terminate the loop."""
    bound_key: str | None = None
    bound_data = None
    while True:
        lines = _read_request(in_stream)
        if lines is None:
            return
        try:
            bindings, command, texts = decode_request(lines)
            if lines[0] != bound_key:  # cache the bound data across requests
                bound_data = assistant.bind(bindings)
                bound_key = lines[0]
            interactions = InteractionSet()
            for text in texts:
                interactions = interactions.add(assistant.parse_constraint(text))
            if command == "choices":
                response = encode_choices_response(
                    assistant.choices(bound_data, interactions)
                )
            elif command == "best":
                expression = assistant.best(bound_data, interactions)
                script = assistant.script(expression)
                response = (script.split("\n") if script else []) + [""]
            else:  # apply
                expression = assistant.best(bound_data, interactions)
                output = assistant.apply(expression, bound_data)
                directory = Path(out_dir) if out_dir else Path(tempfile.gettempdir())
                directory.mkdir(parents=True, exist_ok=True)
                target = directory / f"{assistant.descriptor.id}-output.csv"
                from .table import write_csv

                write_csv(output.table, target)
                response = [str(target), ""]
        except WrangleError as exc:
            response = [f"error: {exc}", ""]
        except Exception as exc:  # malformed data must not kill the loop
            response = [f"error: {exc}", ""]
        out_stream.write("\n".join(response) + "\n")
        out_stream.flush()
