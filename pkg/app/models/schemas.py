"""
请求与响应模型
CLI 的 JSON 输出与 HTTP 响应共用这些模型；有理数一律写成 "num/den" 字符串
"""
from datetime import datetime
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


# ---- 错误 ----

class ErrorDetail(BaseModel):
    stage: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorDetail


# ---- 几何 ----

class FaceModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    normal: Optional[List[int]] = None
    vertex_ids: List[int]
    class_: str = Field(alias="class")


class PolytopeModel(BaseModel):
    dim: int
    affine_dim: int
    axes: List[str]
    vertices: List[List[str]]
    edges: List[List[int]]
    faces: List[FaceModel]


class CheckModel(BaseModel):
    name: str
    status: str
    witness: str = ""


class TrapezoidModel(BaseModel):
    passed: bool
    m: str
    n: str
    violations: List[str]
    bisectrix_edges: List[str]


class PolygonResponse(BaseModel):
    """Newton 多边形与梯形检查"""
    f: str
    polygon: PolytopeModel
    trapezoid: Optional[TrapezoidModel] = None


class ShapeAuditModel(BaseModel):
    passed: bool
    ceiling_kind: str
    checks: List[CheckModel]


class PhiAModel(BaseModel):
    rho: str
    sigma: str
    normal: List[int]
    vertex_ids: List[int]


class PolytopeResponse(BaseModel):
    """N(P) 及其形状审计"""
    P: str
    polytope: PolytopeModel
    edge: Optional[List[List[str]]] = None
    shape: Optional[ShapeAuditModel] = None
    phi_a: Optional[PhiAModel] = None
    shape_error: Optional[ErrorDetail] = None


# ---- Puiseux ----

class PuiseuxTermModel(BaseModel):
    coeff: str
    exp: str
    radius: Optional[str] = None


class PuiseuxBranchModel(BaseModel):
    terms: List[PuiseuxTermModel]
    mult: int
    ram: int
    exact: bool
    terminated: bool


class PuiseuxResponse(BaseModel):
    f: str
    direction: str
    order: str
    deg_y: int
    branches: List[PuiseuxBranchModel]


# ---- 展开 ----

class RemainderModel(BaseModel):
    coeff: str
    yexp: int


class ExpansionResponse(BaseModel):
    lambdas: List[str]
    coeffs: List[str]
    kappa: int
    remainder: Optional[RemainderModel] = None
    status: str
    c_kappa: Optional[str] = None
    formula_ok: Optional[bool] = None
    m: str
    n: int
    floor: int


# ---- 依赖关系 ----

class TranscriptStepModel(BaseModel):
    kind: str
    generator: int
    degree: int
    monomial: Optional[str] = None


class MonicModel(BaseModel):
    ok: bool
    P: str
    p0: str
    c0: Optional[str] = None
    d: Optional[int] = None
    reason: str = ""


class DependenceResponse(BaseModel):
    P: str
    terms: List[List[Union[int, str]]]
    a0: Optional[int] = None
    b0: Optional[int] = None
    nu: Optional[int] = None
    edge: Optional[List[List[int]]] = None
    leading_form: Optional[str] = None
    edge_verdict: Optional[str] = None
    degrees: List[int]
    gcds: List[int]
    multipliers: List[int]
    transcript: List[TranscriptStepModel]
    verified: Optional[bool] = None
    monic: Optional[MonicModel] = None
    extension_degree: Optional[int] = None


# ---- 审计 ----

class BoundsModel(BaseModel):
    m: int
    n: int
    a0: int
    b0: int
    rho_upper: str
    sigma_upper: str
    degx_upper: str
    zhang_bound: int
    nm_gap_ok: bool
    sharper_than_zhang: bool


class CharPairModel(BaseModel):
    a: int
    b: int
    a0: int
    b0: int
    rho_lower: str
    rho_upper: str
    contradiction: bool
    i: int
    j: int


class VertexBoundModel(BaseModel):
    vertex: List[str]
    bound: Optional[str] = None
    error: Optional[str] = None


class AuditResponse(BaseModel):
    """完整审计报告"""
    f: str
    g: str
    passed: bool
    checks: List[CheckModel]
    shift: List[str]
    dependence: Optional[DependenceResponse] = None
    polytope: Optional[PolytopeModel] = None
    shape: Optional[ShapeAuditModel] = None
    phi_a: Optional[PhiAModel] = None
    vertex_bounds: List[VertexBoundModel] = []
    vertex_bounds_ok: Optional[bool] = None
    bounds: Optional[BoundsModel] = None
    rho_within_upper: Optional[bool] = None
    degree_estimate: Dict[str, Any] = {}
    errors: List[ErrorDetail] = []
    record_id: Optional[int] = None


class AuditRecordModel(BaseModel):
    """审计记录摘要"""
    model_config = ConfigDict(from_attributes=True)

    id: int
    name: Optional[str] = None
    f: str
    g: str
    passed: bool
    error_count: int
    created_at: datetime


class AuditRecordDetail(AuditRecordModel):
    report: Dict[str, Any]


# ---- 请求 ----

class PolyRequest(BaseModel):
    f: str


class PolytopeRequest(BaseModel):
    """只给 f 时 f 就是 P(F, G, x)；同时给 g 时先求 (f, g) 的依赖关系"""
    f: str
    g: Optional[str] = None


class PairRequest(BaseModel):
    f: str
    g: str


class PuiseuxRequest(BaseModel):
    f: str
    direction: str = "increasing"
    order: str = "8"
    digits: Optional[int] = None


class ExpandRequest(BaseModel):
    f: str
    g: str
    floor: int = -8
    complete: bool = False
    check_jacobian: bool = True


class AuditRequest(BaseModel):
    f: str
    g: str
    shift: Optional[List[str]] = None
    name: Optional[str] = None
    save: bool = True


class BoundsRequest(BaseModel):
    m: int
    n: int
    a0: int
    b0: int


class CharPairRequest(BaseModel):
    a: int
    b: int
    a0: int
    b0: int
