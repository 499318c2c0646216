"""
Structural schema of scenario documents.

Units are fixed: rates in bits per second, lengths in kilometres,
times in seconds.
"""
from typing import Iterable
from typing import Union

import jsonschema

from jsonschema.exceptions import best_match

from qkdnet.config import DEFAULTS
from qkdnet.config import value_type

from .exceptions import ValidationError


_NUMBER = {"type": "number"}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_NON_NEGATIVE = {"type": "number", "minimum": 0}
_ID = {"type": "string", "minLength": 1}
_QBER = {"type": "number", "minimum": 0, "maximum": 0.5}

NODE = {
    "type": "object",
    "required": ["id"],
    "properties": {"id": _ID, "kind": {"enum": ["qbb", "qan"]}},
    "additionalProperties": False,
}

LINK = {
    "type": "object",
    "required": ["id", "endpoints", "r0", "lambda_qkd", "d_max", "length"],
    "properties": {
        "id": _ID,
        "endpoints": {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2},
        "r0": _POSITIVE,
        "lambda_qkd": _POSITIVE,
        "d_max": _POSITIVE,
        "length": _NON_NEGATIVE,
        "num_quantum_channels": {"type": "integer", "minimum": 1},
        "qber": _QBER,
        "qber_threshold": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5},
        "capacity_bits": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

SERVICE = {
    "oneOf": [
        {
            "type": "object",
            "required": ["class", "lambda_k", "sigma_k"],
            "properties": {
                "class": {"const": "best_effort"},
                "lambda_k": _POSITIVE,
                "sigma_k": {"type": "number", "minimum": 1},
            },
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["class", "bits_per_period", "period"],
            "properties": {
                "class": {"const": "guaranteed"},
                "bits_per_period": {"type": "integer", "minimum": 1},
                "period": _POSITIVE,
            },
            "additionalProperties": False,
        },
    ]
}

TRAFFIC = {
    "oneOf": [
        {
            "type": "object",
            "required": ["kind", "rate"],
            "properties": {"kind": {"const": "poisson"}, "rate": _POSITIVE},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["kind", "interval"],
            "properties": {"kind": {"const": "periodic"}, "interval": _POSITIVE},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["kind", "times"],
            "properties": {
                "kind": {"const": "burst"},
                "times": {"type": "array", "items": _NON_NEGATIVE},
            },
            "additionalProperties": False,
        },
    ]
}

DEMAND = {
    "type": "object",
    "required": ["time", "source", "dest", "port", "key_block_length", "service"],
    "properties": {
        "id": _ID,
        "time": _NON_NEGATIVE,
        "source": _ID,
        "dest": _ID,
        "port": {"type": "integer", "minimum": 0, "maximum": 65535},
        "app": _ID,
        "key_block_length": {"type": "integer", "minimum": 1},
        "service": SERVICE,
        "traffic": TRAFFIC,
        "forwarding": {"enum": ["circuit", "destination"]},
        "stop": _NON_NEGATIVE,
    },
    "additionalProperties": False,
}

ATTACK = {
    "type": "object",
    "required": ["time", "link"],
    "properties": {
        "time": _NON_NEGATIVE,
        "link": _ID,
        "qber": _QBER,
        "restore": {"const": True},
        "num_quantum_channels": {"type": "integer", "minimum": 1},
    },
    "oneOf": [
        {"required": ["qber"]},
        {"required": ["restore"]},
        {"required": ["num_quantum_channels"]},
    ],
    "additionalProperties": False,
}

SCENARIO = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["duration", "topology"],
    "properties": {
        "duration": _POSITIVE,
        "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
        "topology": {
            "type": "object",
            "required": ["nodes", "links"],
            "properties": {
                "nodes": {"type": "array", "items": NODE, "minItems": 1},
                "links": {"type": "array", "items": LINK},
            },
            "additionalProperties": False,
        },
        "demands": {"type": "array", "items": DEMAND},
        "attacks": {"type": "array", "items": ATTACK},
        "config": {
            "type": "object",
            "properties": {name: {"type": value_type(name)} for name in DEFAULTS},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft7Validator(SCENARIO)


def field_path(parts):  # type: (Iterable[Union[str, int]]) -> str
    """
    Dotted path of a field, list positions in brackets.

    >>> field_path(["topology", "links", 2, "endpoints"])
    'topology.links[2].endpoints'
    """
    path = ""
    for part in parts:
        if isinstance(part, int):
            path += "[{}]".format(part)
        elif path:
            path += "." + part
        else:
            path = part

    return path


def validate_document(document):  # type: (dict) -> None
    """
    Checks the structure of a scenario document.

    Raises ValidationError naming the most relevant failing field.
    """
    error = best_match(_VALIDATOR.iter_errors(document))
    if error is None:
        return

    parts = list(error.absolute_path)
    if error.validator == "required" and isinstance(error.instance, dict):
        missing = [name for name in error.validator_value if name not in error.instance]
        if missing:
            parts.append(missing[0])

            raise ValidationError(field_path(parts), "missing required field")

    if error.validator == "additionalProperties" and isinstance(error.instance, dict):
        allowed = error.schema.get("properties", {})
        extra = sorted(name for name in error.instance if name not in allowed)
        if extra:
            parts.append(extra[0])

            raise ValidationError(field_path(parts), "unknown field")

    raise ValidationError(field_path(parts), error.message)
