"""JSON schemas and loading of run configurations."""
import json
from pathlib import Path
from typing import Any

import jsonschema

from jointnet.exceptions import ConfigError

SEED = {"type": "integer", "minimum": 0, "maximum": 2**64 - 1}
PROBABILITY = {"type": "number", "minimum": 0, "maximum": 1}
POSITIVE_INT = {"type": "integer", "minimum": 1}
NONNEGATIVE = {"type": "number", "minimum": 0}
ANCHOR = {"enum": ["first", "each"]}
STRATEGY = {"enum": ["min-feasible", "theorem5", "scaled-min"]}
WEIGHTS = {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}}
BETA = {
    "oneOf": [
        {"enum": ["complete", "path"]},
        {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "k": POSITIVE_INT,
                    "kp": POSITIVE_INT,
                    "w": NONNEGATIVE,
                },
                "required": ["k", "kp", "w"],
                "additionalProperties": False,
            },
        },
    ]
}

SOLVER_SCHEMA = {
    "type": "object",
    "properties": {
        "rho": {"type": "number", "exclusiveMinimum": 0},
        "max_iters": POSITIVE_INT,
        "tol_primal": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "tol_dual": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "epsilon_n": NONNEGATIVE,
        "smoothness_eta": NONNEGATIVE,
        "adapt_rho": {"type": "boolean"},
        "check_every": POSITIVE_INT,
        "relaxation": {
            "type": "number",
            "exclusiveMinimum": 0,
            "exclusiveMaximum": 2,
        },
        "strict": {"type": "boolean"},
        "verbose": {"type": "boolean"},
        "log_every": POSITIVE_INT,
    },
    "additionalProperties": False,
}

COMMON = {
    "seed": SEED,
    "out": {"type": "string"},
}

GENERATE_SCHEMA = {
    "type": "object",
    "properties": {
        **COMMON,
        "n_nodes": {"type": "integer", "minimum": 2},
        "k_graphs": POSITIVE_INT,
        "p": PROBABILITY,
        "rewires": {"type": "integer", "minimum": 0},
        "q": PROBABILITY,
        "weighted": {"type": "boolean"},
        "weight_range": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0},
            "minItems": 2,
            "maxItems": 2,
        },
        "covariance": {"enum": ["model", "sem", "precision"]},
        "L": POSITIVE_INT,
        "n_signals": {"type": "integer", "minimum": 0},
        "graph_format": {"enum": ["dense", "edges"]},
        "alpha": WEIGHTS,
        "beta": BETA,
    },
    "not": {"required": ["rewires", "q"]},
    "additionalProperties": False,
}

PROBLEM = {
    "manifest": {"type": "string"},
    "anchor": ANCHOR,
    "alpha": WEIGHTS,
    "beta": BETA,
}

SOLVE_SCHEMA = {
    "type": "object",
    "properties": {
        **COMMON,
        **PROBLEM,
        "mode": {"enum": ["noiseless", "robust", "separate"]},
        "covariance_source": {"enum": ["model", "sample"]},
        "epsilon": NONNEGATIVE,
        "epsilon_strategy": STRATEGY,
        "slack": {"type": "number", "minimum": 1},
        "solver": SOLVER_SCHEMA,
    },
    "required": ["manifest"],
    "additionalProperties": False,
}

CERTIFY_SCHEMA = {
    "type": "object",
    "properties": {
        **COMMON,
        **PROBLEM,
        "kind": {"enum": ["theorem1", "theorem2"]},
        "delta_grid": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0},
            "minItems": 1,
        },
        "epsilon": NONNEGATIVE,
    },
    "required": ["manifest"],
    "additionalProperties": False,
}

EXPERIMENT_COMMON = {
    **COMMON,
    "kind": {
        "enum": ["certificate", "decay", "compare", "bound", "reference"]
    },
    "trials": POSITIVE_INT,
    "L": POSITIVE_INT,
    "anchor": ANCHOR,
    "n_jobs": {"type": "integer"},
    "verbose": {"type": "boolean"},
    "solver": SOLVER_SCHEMA,
}

EXPERIMENT_SCHEMAS = {
    "certificate": {
        "N": {"type": "integer", "minimum": 2},
        "p": PROBABILITY,
        "rewires": {"type": "integer", "minimum": 0},
        "k_graphs": POSITIVE_INT,
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "beta": NONNEGATIVE,
    },
    "decay": {
        "K": POSITIVE_INT,
        "N": {"type": "integer", "minimum": 2},
        "p": PROBABILITY,
        "q": PROBABILITY,
        "n_grid": {"type": "array", "items": POSITIVE_INT, "minItems": 1},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "beta": NONNEGATIVE,
        "epsilon_strategy": STRATEGY,
        "fit_last": POSITIVE_INT,
    },
    "compare": {
        "manifest": {"type": "string"},
        "n_grid": {"type": "array", "items": POSITIVE_INT, "minItems": 1},
        "epsilon_strategy": STRATEGY,
    },
    "bound": {
        "N": {"type": "integer", "minimum": 2},
        "K": POSITIVE_INT,
        "p": PROBABILITY,
        "rewires": {"type": "integer", "minimum": 0},
        "n_signals": POSITIVE_INT,
    },
    "reference": {
        "signals": {"type": "string"},
        "K": POSITIVE_INT,
        "N": {"type": "integer", "minimum": 2},
        "p": PROBABILITY,
        "n_total": POSITIVE_INT,
        "n_grid": {"type": "array", "items": POSITIVE_INT, "minItems": 1},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "beta": NONNEGATIVE,
        "epsilon_strategy": STRATEGY,
    },
}

SCHEMAS = {
    "generate": GENERATE_SCHEMA,
    "solve": SOLVE_SCHEMA,
    "certify": CERTIFY_SCHEMA,
}


def experiment_schema(kind: str) -> dict:
    """Schema of the ``experiment`` command for one experiment kind."""
    if kind not in EXPERIMENT_SCHEMAS:
        raise ConfigError(
            kind, f"`kind` must be one of {list(EXPERIMENT_SCHEMAS)}."
        )
    required = ["kind", "manifest"] if kind == "compare" else ["kind"]
    return {
        "type": "object",
        "properties": {**EXPERIMENT_COMMON, **EXPERIMENT_SCHEMAS[kind]},
        "required": required,
        "additionalProperties": False,
    }


def validate_config(command: str, config: dict) -> dict:
    """Validate ``config`` against the schema of ``command``.

    Raises
    ------
    ConfigError
        If the command is unknown or the configuration violates its
        schema. Unknown keys are rejected.
    """
    if command == "experiment":
        schema = experiment_schema(config.get("kind", "certificate"))
    elif command in SCHEMAS:
        schema = SCHEMAS[command]
    else:
        raise ConfigError(command, f"Unknown command {command!r}.")
    try:
        jsonschema.validate(instance=config, schema=schema)
    except jsonschema.ValidationError as error:
        raise ConfigError(
            list(error.absolute_path),
            f"Invalid {command} configuration: {error.message}.",
        ) from error
    return config


def load_config(
    command: str,
    path: Path | str | None,
    overrides: dict[str, Any] | None = None,
) -> dict:
    """Read a JSON configuration, apply overrides and validate it."""
    config: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as file:
                config = json.load(file)
        except OSError as error:
            raise ConfigError(
                str(path), f"Could not read config ({error})."
            ) from error
        except json.JSONDecodeError as error:
            raise ConfigError(
                str(path), f"Config is not valid JSON ({error})."
            ) from error
        if not isinstance(config, dict):
            raise ConfigError(str(path), "Config must be a JSON object.")
    for key, value in (overrides or {}).items():
        if value is not None:
            config[key] = value
    return validate_config(command, config)
