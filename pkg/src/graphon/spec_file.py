"""
Graphon spec files and builtin graphon names.

A spec file is JSON:

    {
      "name": "two-blocks",
      "recipe": {"precision": 53, "infinite_depth": 30},
      "parts": [{"name": "X", "measure": "1/2", "degree": 0.25}, ...],
      "kernels": [{"pair": ["X", "Y"], "kernel": "constant", "p": 0.5}, ...]
    }

Builtin names: constant(p=..), half, checker(L=..), hypercubical(recipe=interleave, L=..).
"""
import logging
import os
import re
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from src.graphon.core import Graphon, PartitionedLayout
from src.graphon.hypercube import (
    CoordinateKernel,
    InfiniteBoxKernel,
    InfiniteCoordinateKernel,
    InfiniteProductKernel,
    InitialCoordinateKernel,
    ProductKernel,
    ProjectionOrderKernel,
    StairsKernel,
    build,
)
from src.graphon.kernels import (
    CheckerKernel,
    ConstantKernel,
    FirstLevelKernel,
    HalfKernel,
    PairKernel,
    ShiftedCheckerKernel,
    ZeroKernel,
    constant,
    diagonal_checker,
    half_graphon,
)
from src.graphon.partitioned import PartitionedGraphon
from src.recipe.interleave import Recipe
from src.state.models import PartSpec
from src.tools.file_utils import read_json_file

logger = logging.getLogger(__name__)

_CALL = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")

KernelFactory = Callable[["KernelEntry", Recipe], PairKernel]

KERNEL_VOCABULARY: Dict[str, KernelFactory] = {
    "zero": lambda e, r: ZeroKernel(),
    "constant": lambda e, r: ConstantKernel(e.p if e.p is not None else 0.0),
    "half": lambda e, r: HalfKernel(),
    "checker": lambda e, r: CheckerKernel(),
    "shifted-checker": lambda e, r: ShiftedCheckerKernel(),
    "first-level": lambda e, r: FirstLevelKernel(),
    "initial-coordinate": lambda e, r: InitialCoordinateKernel(r),
    "projection-order": lambda e, r: ProjectionOrderKernel(r),
    "coordinate": lambda e, r: CoordinateKernel(r),
    "stairs": lambda e, r: StairsKernel(),
    "product": lambda e, r: ProductKernel(r),
    "co-product": lambda e, r: ProductKernel(r, complement=True),
    "infinite-box": lambda e, r: InfiniteBoxKernel(r),
    "infinite-coordinate": lambda e, r: InfiniteCoordinateKernel(r),
    "infinite-product": lambda e, r: InfiniteProductKernel(r),
    "infinite-co-product": lambda e, r: InfiniteProductKernel(r, complement=True),
}


class RecipeEntry(BaseModel):
    precision: int = Field(53, ge=1, le=62, description="Binary digits of an input")
    infinite_depth: int = Field(30, ge=1, description="Stored prefix of r_infinity")


class KernelEntry(BaseModel):
    pair: Tuple[str, str] = Field(..., description="Ordered part pair (X, Y)")
    kernel: str = Field(..., description="Kernel vocabulary name")
    p: Optional[float] = Field(None, ge=0.0, le=1.0, description="Value of a constant kernel")

    @field_validator("kernel")
    @classmethod
    def _known(cls, value: str) -> str:
        if value not in KERNEL_VOCABULARY:
            raise ValueError(f"unknown kernel '{value}', expected one of {sorted(KERNEL_VOCABULARY)}")
        return value


class GraphonSpecFile(BaseModel):
    """Schema of a graphon spec file."""

    name: str = Field("custom", description="Graphon name used in reports")
    recipe: RecipeEntry = Field(default_factory=RecipeEntry)
    parts: List[PartSpec] = Field(..., min_length=1)
    kernels: List[KernelEntry] = Field(default_factory=list)

    def build(self) -> PartitionedGraphon:
        recipe = Recipe(self.recipe.precision, self.recipe.infinite_depth)
        layout = PartitionedLayout(self.parts)
        kernels = {tuple(entry.pair): KERNEL_VOCABULARY[entry.kernel](entry, recipe) for entry in self.kernels}
        return PartitionedGraphon(layout, kernels, name=self.name)


def _arguments(text: Optional[str]) -> Dict[str, str]:
    if not text:
        return {}
    args = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ValueError(f"expected key=value in '{item.strip()}'")
        key, value = item.split("=", 1)
        args[key.strip()] = value.strip()
    return args


def builtin(text: str, depth: int = 30) -> Graphon:
    """
    Build a graphon from a builtin name such as 'constant(p=0.3)' or 'hypercubical(L=20)'.

    Args:
        text (str): The builtin expression.
        depth (int): Default truncation depth.

    Returns:
        Graphon: The graphon.
    """
    match = _CALL.match(text)
    if not match:
        raise ValueError(f"cannot parse graphon name '{text}'")
    name, args = match.group(1), _arguments(match.group(2))
    depth = int(args.get("L", depth))
    if name == "constant":
        return constant(float(args.get("p", "0.5")))
    if name == "half":
        return half_graphon()
    if name == "checker":
        return diagonal_checker(depth)
    if name == "hypercubical":
        if args.get("recipe", "interleave") != "interleave":
            raise ValueError("only the interleave recipe is available")
        recipe = Recipe(int(args.get("P", 53)), int(args.get("prefix", 30)))
        return build(recipe, depth)
    raise ValueError(f"unknown builtin graphon '{name}'")


def load_graphon(source: str, depth: int = 30) -> Graphon:
    """A builtin name, or the path of a JSON graphon spec file."""
    if os.path.isfile(source):
        logger.info("Loading graphon spec %s", source)
        return GraphonSpecFile.model_validate(read_json_file(source)).build()
    return builtin(source, depth)
