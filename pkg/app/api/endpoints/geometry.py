"""
Newton 多边形 / 多面体 API端点
"""
from fastapi import APIRouter

from app.api.deps import parse_or_none, run_request
from app.cli.parser import parse_poly
from app.models.schemas import PolygonResponse, PolyRequest, PolytopeRequest, PolytopeResponse
from app.services.toolkit_service import ToolkitService

# 创建路由
router = APIRouter()


@router.post("/polygon", response_model=PolygonResponse)
def polygon(request: PolyRequest):
    """f 的 Newton 多边形与梯形检查"""
    model, _ = run_request("polygon", lambda: ToolkitService().polygon(parse_poly(request.f)))
    return model


@router.post("/polytope", response_model=PolytopeResponse, response_model_by_alias=True)
def polytope(request: PolytopeRequest):
    """N(P) 及形状审计；给出 g 时先求 (f, g) 的依赖关系"""
    model, _ = run_request(
        "polytope", lambda: ToolkitService().polytope(parse_poly(request.f), parse_or_none(request.g))
    )
    return model
