"""Common schema helpers."""

from typing import Type, TypeVar

from pydantic import BaseModel, ValidationError

from app.exceptions import ConfigError

M = TypeVar("M", bound=BaseModel)


def validated(model_cls: Type[M], **data) -> M:
    """Build a schema, converting validation failures into ConfigError."""
    try:
        return model_cls(**data)
    except ValidationError as exc:
        raise ConfigError(
            f"Invalid {model_cls.__name__}",
            {"errors": [f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors()]},
        )
