from enum import Enum

MODE_ALIASES = {"mixreg": "mixreg-baseline"}


class AugmentationMode(Enum):
    PPO = "ppo"
    PAADA = "paada"
    PAADA_MIXUP = "paada+mixup"
    MIXREG_BASELINE = "mixreg-baseline"

    @staticmethod
    def from_string(mode_str: str):
        try:
            return AugmentationMode(MODE_ALIASES.get(mode_str, mode_str))
        except ValueError:
            available_modes = ", ".join([mode.value for mode in AugmentationMode])
            raise ValueError(
                f"Invalid augmentation mode: '{mode_str}'. Available modes are: {available_modes}",
            ) from None

    @property
    def uses_adversarial(self) -> bool:
        return self in (AugmentationMode.PAADA, AugmentationMode.PAADA_MIXUP)

    @property
    def uses_mixup(self) -> bool:
        return self in (AugmentationMode.PAADA_MIXUP, AugmentationMode.MIXREG_BASELINE)
