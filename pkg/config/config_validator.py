import logging

from .config_manager import build_experiment_config
from .config_schema import CONFIG_SCHEMA, parse_value
from .exceptions import ConfigError, ConfigValidationError


class ConfigValidator:
    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def validate(self, config: dict[str, str]) -> None:
        unknown_fields = self._validate_known_keys(config)
        invalid_fields = self._validate_values(config)
        if not invalid_fields and not unknown_fields:
            invalid_fields = self._validate_sections(config)

        if invalid_fields or unknown_fields:
            raise ConfigValidationError(invalid_fields=invalid_fields, unknown_fields=unknown_fields)

    def _validate_known_keys(self, config: dict[str, str]) -> list[str]:
        unknown_keys = [key for key in config if key not in CONFIG_SCHEMA]
        if unknown_keys:
            self.logger.error(f"Unknown configuration keys: {unknown_keys}")
        return unknown_keys

    def _validate_values(self, config: dict[str, str]) -> list[str]:
        invalid_fields = []
        for key, raw in config.items():
            if key not in CONFIG_SCHEMA:
                continue
            try:
                parse_value(key, raw)
            except (ValueError, ConfigError) as e:
                self.logger.error(f"Invalid value for {key}: {e}")
                invalid_fields.append(key)
        return invalid_fields

    def _validate_sections(self, config: dict[str, str]) -> list[str]:
        # range checks live on the typed settings objects
        try:
            build_experiment_config(config)
        except ConfigValidationError as e:
            self.logger.error(f"Out-of-range configuration values: {e.invalid_fields}")
            return list(e.invalid_fields)
        return []
