"""
依赖关系 API端点
"""
from fastapi import APIRouter

from app.api.deps import run_request
from app.cli.parser import parse_poly
from app.models.schemas import DependenceResponse, PairRequest
from app.services.toolkit_service import ToolkitService

# 创建路由
router = APIRouter()


@router.post("", response_model=DependenceResponse)
def depend(request: PairRequest):
    """求 P(x, F, G) 并验证 P(x, f, g) = 0"""
    model, _ = run_request("depend", lambda: ToolkitService().depend(parse_poly(request.f), parse_poly(request.g)))
    return model
