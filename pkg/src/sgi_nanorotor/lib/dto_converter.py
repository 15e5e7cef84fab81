import json
from typing import Generic, Type, TypeVar

from pydantic import BaseModel


T = TypeVar("T", bound=BaseModel)


class DtoConverter(Generic[T]):
    def __init__(self, dto_type: Type[T]):
        self.dto_type = dto_type

    def dto_to_json_dict_with_json_case(self, dto: T) -> dict:
        """Convert DTO to a JSON-ready dict keyed by the camelCase aliases.

        Example:
            DtoConverter[InitialConditions](InitialConditions).dto_to_json_dict_with_json_case(initial)
            # {"betaDot0": 0.0, ...}
        """
        return dto.model_dump(by_alias=True, mode="json")

    def json_to_dto(self, raw: str | bytes) -> T:
        """Parse file contents into the DTO; either key casing is accepted.

        Raises:
            pydantic.ValidationError: on malformed JSON, unknown keys or bad values.
        """
        return self.dto_type.model_validate_json(raw)

    def dto_to_canonical_json(self, dto: T) -> str:
        """Compact JSON with keys sorted at every level, so equal DTOs give equal text."""
        return json.dumps(
            self.dto_to_json_dict_with_json_case(dto),
            sort_keys=True,
            separators=(",", ":"),
        )
