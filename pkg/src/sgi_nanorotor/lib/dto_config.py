from pydantic import AliasGenerator, ConfigDict
from pydantic.alias_generators import to_camel


def model_config(frozen: bool = True) -> ConfigDict:
    """Shared config for every wire model in the package.

    JSON uses camelCase, Python attributes stay snake_case and either form is
    accepted on input. Unknown keys are rejected.
    """
    return ConfigDict(
        alias_generator=AliasGenerator(
            validation_alias=to_camel,  # Input: betaDot0 -> beta_dot0
            serialization_alias=to_camel,  # Output: beta_dot0 -> betaDot0
        ),
        extra="forbid",
        populate_by_name=True,
        frozen=frozen,
    )
