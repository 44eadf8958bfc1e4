import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import (BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict,
                               SettingsError, TomlConfigSettingsSource)

# --- Project Imports ---
from core.exceptions import ConfigurationException
from models.common import BasisConvention


# ---------- ENUMS ----------
class Suite(str, Enum):
    IRREPS = "irreps"
    CLIFFORD = "clifford"
    IDENTITIES = "identities"
    KILLING = "killing"
    TENSORS = "tensors"
    CONE = "cone"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


# ---------- CHECKS ----------
class IdentityCheck(BaseModel):
    """One residual measurement; passed iff residual < tolerance"""
    model_config = ConfigDict(populate_by_name=True)

    suite: str = ""
    name: str
    two_s: int | None = Field(default=None, alias="twoS")
    k: int | None = None
    l: int | None = None
    residual: float = Field(ge=0)
    tolerance: float = Field(gt=0)
    passed: bool = False
    provenance: str = Field(min_length=1)

    @model_validator(mode="after")
    def derive_passed(self):
        self.passed = self.residual < self.tolerance
        return self


class ReportSummary(BaseModel):
    total: int = 0
    passed: int = 0
    max_residual: float = 0.0

    @classmethod
    def of(cls, checks: list[IdentityCheck]) -> "ReportSummary":
        return cls(total=len(checks),
                   passed=sum(1 for c in checks if c.passed),
                   max_residual=max((c.residual for c in checks), default=0.0))


class VerificationReport(BaseModel):
    suite: str
    checks: list[IdentityCheck] = []
    summary: ReportSummary = ReportSummary()
    provenance: str
    config_echo: dict[str, Any] | None = None

    @model_validator(mode="after")
    def check_summary(self):
        if self.summary != ReportSummary.of(self.checks):
            raise ValueError("report summary does not match its checks")
        return self

    @classmethod
    def build(cls,
              suite: str,
              checks: list[IdentityCheck],
              provenance: str,
              config_echo: dict[str, Any] | None = None) -> "VerificationReport":
        stamped = [
            c if c.suite else c.model_copy(update={"suite": suite})
            for c in checks
        ]
        return cls(suite=suite,
                   checks=stamped,
                   summary=ReportSummary.of(stamped),
                   provenance=provenance,
                   config_echo=config_echo)

    @property
    def all_passed(self) -> bool:
        return self.summary.passed == self.summary.total


# ---------- CONFIG ----------
class SuiteConfig(BaseSettings):
    """
    Run configuration. Precedence: explicit keyword overrides (CLI flags),
    then SPINLAB_* environment variables, then the TOML config file.
    """
    model_config = SettingsConfigDict(env_prefix="SPINLAB_",
                                      extra="ignore",
                                      toml_file=None)

    jmax: int = Field(default=10, ge=0)
    tolerance: float = Field(default=1e-8, gt=0)
    algebra_tolerance: float = Field(default=1e-10, gt=0)
    samples: int = Field(default=100, ge=1)
    seed: int = Field(default=20250101, ge=0, le=2**64 - 1)
    basis: BasisConvention = BasisConvention.UNITARY
    suites: list[Suite] = Field(default_factory=lambda: list(Suite))

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings, env_settings,
                TomlConfigSettingsSource(settings_cls))

    @classmethod
    def load(cls, config_file: Path | None = None, **overrides) -> "SuiteConfig":
        """Build a config from an optional TOML file plus non-None overrides."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if config_file is None:
            return cls(**overrides)
        path = Path(config_file)
        if not path.is_file():
            raise ConfigurationException(f"Config file not found: {path}")
        file_config = type(cls.__name__, (cls,), {
            "model_config": {
                **cls.model_config, "toml_file": path
            }
        })
        try:
            loaded = file_config(**overrides)
        except (tomllib.TOMLDecodeError, UnicodeDecodeError, SettingsError) as e:
            raise ConfigurationException(f"Cannot parse config file {path}: {e}")
        return cls.model_construct(**loaded.model_dump())

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json")

    @property
    def max_two_s(self) -> int:
        """Largest half-integral doubled weight 2*jmax+1."""
        return 2 * self.jmax + 1


# ---------- H3 SOLUTION TABLE ----------
class H3Component(BaseModel):
    index: int
    weight: int
    coefficient: str
    coefficient_latex: str
    coefficient_real: float
    coefficient_imag: float
    variable: str
    z_power: int
    x_power: str


class H3Solution(BaseModel):
    basis_index: int
    components: list[H3Component]


class H3SolutionTable(BaseModel):
    two_s: int
    mu: str
    basis: BasisConvention
    solutions: list[H3Solution]


# ---------- MATRIX DUMPS ----------
class MatrixDump(BaseModel):
    name: str
    real: list[list[float]]
    imag: list[list[float]]


class MatrixSetDump(BaseModel):
    kind: str
    two_s: int = Field(alias="twoS")
    basis: BasisConvention
    matrices: list[MatrixDump]

    model_config = ConfigDict(populate_by_name=True)
