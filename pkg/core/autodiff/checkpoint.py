from enum import Enum
import logging
import os
import struct

import numpy as np

from .exceptions import CheckpointFormatError
from .mlp_params import Activation, MlpParams, OutputHead

CHECKPOINT_MAGIC = b"PAADA-CKPT"
CHECKPOINT_VERSION = 1
FLOAT_DTYPE = np.dtype("<f8")


class CheckpointFormat(Enum):
    BINARY = "binary"
    TEXT = "text"


def _encode_binary(networks: dict[str, MlpParams]) -> bytes:
    chunks = [CHECKPOINT_MAGIC, struct.pack("<II", CHECKPOINT_VERSION, len(networks))]
    for name, params in networks.items():
        encoded_name = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(encoded_name)))
        chunks.append(encoded_name)
        chunks.append(struct.pack("<BBI", params.activation.code, params.head.code, params.num_layers))
        for weight in params.weights:
            chunks.append(struct.pack("<II", *weight.shape))
        chunks.extend(np.ascontiguousarray(weight, dtype=FLOAT_DTYPE).tobytes() for weight in params.weights)
        chunks.extend(np.ascontiguousarray(bias, dtype=FLOAT_DTYPE).tobytes() for bias in params.biases)
    return b"".join(chunks)


def _decode_binary(payload: bytes, path: str) -> dict[str, MlpParams]:
    offset = len(CHECKPOINT_MAGIC)

    def read(fmt: str):
        nonlocal offset
        values = struct.unpack_from(fmt, payload, offset)
        offset += struct.calcsize(fmt)
        return values

    def read_floats(count: int) -> np.ndarray:
        nonlocal offset
        size = count * FLOAT_DTYPE.itemsize
        if offset + size > len(payload):
            raise CheckpointFormatError(path, "truncated parameter block")
        values = np.frombuffer(payload, dtype=FLOAT_DTYPE, count=count, offset=offset).astype(np.float64)
        offset += size
        return values

    try:
        version, network_count = read("<II")
        if version != CHECKPOINT_VERSION:
            raise CheckpointFormatError(path, f"unsupported format version {version}")

        networks = {}
        for _ in range(network_count):
            (name_length,) = read("<H")
            name = payload[offset : offset + name_length].decode("utf-8")
            offset += name_length
            activation_code, head_code, layer_count = read("<BBI")
            shapes = [read("<II") for _ in range(layer_count)]
            weights = [read_floats(rows * cols).reshape(rows, cols) for rows, cols in shapes]
            biases = [read_floats(rows) for rows, _ in shapes]
            networks[name] = MlpParams(
                tuple(weights),
                tuple(biases),
                Activation.from_code(activation_code),
                OutputHead.from_code(head_code),
            )
    except (struct.error, UnicodeDecodeError) as e:
        raise CheckpointFormatError(path, f"truncated or corrupt header: {e}") from e

    if offset != len(payload):
        raise CheckpointFormatError(path, f"{len(payload) - offset} trailing bytes")
    return networks


def _format_floats(array: np.ndarray) -> str:
    return " ".join(repr(float(value)) for value in array.ravel())


def _encode_text(networks: dict[str, MlpParams]) -> str:
    lines = [f"{CHECKPOINT_MAGIC.decode()} {CHECKPOINT_VERSION} text", f"networks {len(networks)}"]
    for name, params in networks.items():
        lines.append(f"network {name} {params.activation.value} {params.head.value} {params.num_layers}")
        for weight, bias in zip(params.weights, params.biases, strict=True):
            lines.append(f"layer {weight.shape[0]} {weight.shape[1]}")
            lines.append(f"weights {_format_floats(weight)}")
            lines.append(f"biases {_format_floats(bias)}")
    return "\n".join(lines) + "\n"


def _decode_text(text: str, path: str) -> dict[str, MlpParams]:
    lines = iter(text.splitlines()[1:])
    try:
        network_count = int(next(lines).split()[1])
        networks = {}
        for _ in range(network_count):
            _, name, activation, head, layer_count = next(lines).split()
            weights, biases = [], []
            for _ in range(int(layer_count)):
                _, rows, cols = next(lines).split()
                weight_values = np.array([float(value) for value in next(lines).split()[1:]])
                bias_values = np.array([float(value) for value in next(lines).split()[1:]])
                weights.append(weight_values.reshape(int(rows), int(cols)))
                biases.append(bias_values)
            networks[name] = MlpParams(
                tuple(weights),
                tuple(biases),
                Activation.from_string(activation),
                OutputHead(head),
            )
    except (StopIteration, ValueError, IndexError) as e:
        raise CheckpointFormatError(path, f"malformed text checkpoint: {e}") from e
    return networks


def save_checkpoint(
    path: str,
    networks: dict[str, MlpParams],
    checkpoint_format: CheckpointFormat = CheckpointFormat.BINARY,
) -> None:
    """
    Writes named networks (typically "policy" and "value") to ``path``.

    The binary layout is little-endian: magic, u32 version, u32 network count, then per network the name, activation
    and head codes, the layer shapes, every weight matrix row-major as f64 and finally every bias vector.
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    if checkpoint_format is CheckpointFormat.BINARY:
        with open(path, "wb") as checkpoint_file:
            checkpoint_file.write(_encode_binary(networks))
    else:
        with open(path, "w", encoding="utf-8") as checkpoint_file:
            checkpoint_file.write(_encode_text(networks))

    logging.info(f"Checkpoint with networks {list(networks)} saved to {path}")


def load_checkpoint(path: str) -> dict[str, MlpParams]:
    with open(path, "rb") as checkpoint_file:
        payload = checkpoint_file.read()

    if not payload.startswith(CHECKPOINT_MAGIC):
        raise CheckpointFormatError(path, "missing magic header")

    header_end = len(CHECKPOINT_MAGIC)
    if payload[header_end : header_end + 1] == b" ":
        text = payload.decode("utf-8")
        header = text.splitlines()[0].split()
        if len(header) != 3 or header[1] != str(CHECKPOINT_VERSION) or header[2] != "text":
            raise CheckpointFormatError(path, f"unsupported text header '{' '.join(header)}'")
        return _decode_text(text, path)

    return _decode_binary(payload, path)
