from enum import Enum
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field


# ---------- ENUMS ----------
class BasisConvention(str, Enum):
    UNITARY = "unitary"
    TRIANGULAR = "triangular"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            return BASIS_ALIASES.get(value.lower())
        return None


class ModelSpace(str, Enum):
    S3 = "S3"
    H3 = "H3"
    R3 = "R3"


class Chirality(str, Enum):
    SELF_DUAL = "sd"
    ANTI_SELF_DUAL = "asd"


BASIS_ALIASES = {"paper": BasisConvention.TRIANGULAR}


# ---------- BASE MODELS ----------
class ArrayModel(BaseModel):
    """Immutable model that may carry numpy arrays"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class SpinLabel(BaseModel):
    """Irreducible SU(2) representation by its doubled highest weight"""
    model_config = ConfigDict(frozen=True)

    two_s: int = Field(ge=0)

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def is_half_integral(self) -> bool:
        return self.two_s % 2 == 1

    @property
    def j(self) -> Fraction:
        """Spin index: W_j has two_s = 2j+1, V_j has two_s = 2j."""
        if self.is_half_integral:
            return Fraction(self.two_s - 1, 2)
        return Fraction(self.two_s, 2)

    def shifted(self, step: int) -> "SpinLabel":
        return SpinLabel(two_s=self.two_s + step)

    @classmethod
    def of(cls, two_s: int) -> "SpinLabel":
        return cls(two_s=two_s)

    def __str__(self) -> str:
        return f"twoS={self.two_s}"
