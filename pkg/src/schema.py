from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.tools.ErrorAndStatus import StabilityLevel, VerdictStatus


class CohVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    h0: int = 0
    h1: int = 0
    h2: int = 0
    h3: int = 0

    @classmethod
    def of(cls, values) -> "CohVector":
        values = list(values)
        return cls(h0=values[0], h1=values[1], h2=values[2], h3=values[3])

    def as_list(self) -> List[int]:
        return [self.h0, self.h1, self.h2, self.h3]

    def __getitem__(self, i: int) -> int:
        return self.as_list()[i]

    @property
    def euler(self) -> int:
        return self.h0 - self.h1 + self.h2 - self.h3


class PointVerdict(BaseModel):
    status: VerdictStatus
    points_tested: int = 0
    witness: Optional[List[List[str]]] = None


class MonadValidity(BaseModel):
    composition_zero: bool
    alpha_fiberwise_injective: PointVerdict
    beta_fiberwise_surjective: PointVerdict
    points_tested: int

    @property
    def valid(self) -> bool:
        return (self.composition_zero
                and self.alpha_fiberwise_injective.status == VerdictStatus.VERIFIED
                and self.beta_fiberwise_surjective.status == VerdictStatus.VERIFIED)


class GenerationStats(BaseModel):
    attempts: int = 0
    failures: Dict[str, int] = Field(default_factory=dict)
    deficient_blocks: List[int] = Field(default_factory=list)
    line_search_steps: int = 0

    def record(self, mode: str) -> None:
        self.failures[mode] = self.failures.get(mode, 0) + 1


class CohomologyReport(BaseModel):
    twist: List[int]
    dims: CohVector
    engine: Literal["les-bookkeeping", "cech"]
    pad_used: Optional[int] = None
    chi: int


class BeilinsonRow(BaseModel):
    label: str
    twist: List[int]
    dims: CohVector
    expected: CohVector


class BeilinsonTable(BaseModel):
    c2: List[int]
    rows: List[BeilinsonRow]

    @property
    def matches_expected(self) -> bool:
        return all(row.dims == row.expected for row in self.rows)


class ExtReport(BaseModel):
    hom: int
    ext1: int
    ext2: int
    ext3: int
    chi: int
    extra_degrees: Dict[int, int] = Field(default_factory=dict)
    pad_used: int = 0
    charge: int

    @property
    def dims(self) -> List[int]:
        return [self.hom, self.ext1, self.ext2, self.ext3]

    @property
    def matches_expected(self) -> bool:
        return self.dims == [1, 4 * self.charge - 3, 0, 0] and not self.extra_degrees


class StabilityVerdict(BaseModel):
    level: StabilityLevel
    window: int
    checked: List[List[int]]
    witness: Optional[List[int]] = None
    sections: Dict[str, int] = Field(default_factory=dict)
    note: str = "verdict covers only the listed twists; it is not a proof of stability"


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class InstantonReport(BaseModel):
    passed: bool
    checks: List[CheckResult]
    table: Optional[BeilinsonTable] = None
    stability: Optional[StabilityVerdict] = None


class UlrichReport(BaseModel):
    passed: bool
    failures: List[List[int]] = Field(default_factory=list)
    chi: Dict[int, int] = Field(default_factory=dict)
    dims: Dict[int, CohVector] = Field(default_factory=dict)


class SplittingType(BaseModel):
    model_config = ConfigDict(frozen=True)

    d1: int
    d2: int
    degenerate: bool = False

    @property
    def is_trivial(self) -> bool:
        return self.d1 == 0 and self.d2 == 0 and not self.degenerate


class HoldoutResult(BaseModel):
    zero_set_points: int = 0
    generic_points: int = 0
    consistent: int = 0
    inconsistent: List[List[str]] = Field(default_factory=list)


class JumpingDivisor(BaseModel):
    family: int
    bidegree: List[int]
    expected_bidegree: List[int]
    coefficients: List[str]
    convention: str
    holdout: Optional[HoldoutResult] = None

    @property
    def is_empty(self) -> bool:
        return self.bidegree == [0, 0]


class RunConfig(BaseModel):
    command: str
    c2: Optional[List[int]] = None
    shape: Optional[str] = None
    prime: Optional[int] = None
    rational: bool = False
    seed: int = 0
    window: int = 3
    pad: int = 2
    pad_check: bool = True
    grid: int = 0
    bound: int = 10
    family: Optional[int] = None
    jobs: int = 1
    points: int = 64
    input: Optional[str] = None
    output: Optional[str] = None
    format: Literal["json", "text"] = "json"
