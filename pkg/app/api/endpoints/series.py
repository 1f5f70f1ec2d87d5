"""
g 关于 f 的展开 API端点
"""
from fastapi import APIRouter

from app.api.deps import run_request
from app.cli.parser import parse_poly
from app.models.schemas import ExpandRequest, ExpansionResponse
from app.services.toolkit_service import ToolkitService

# 创建路由
router = APIRouter()


@router.post("/expand", response_model=ExpansionResponse)
def expand(request: ExpandRequest):
    model, _ = run_request(
        "expand",
        lambda: ToolkitService().expand(parse_poly(request.f), parse_poly(request.g), request.floor,
                                        request.complete, request.check_jacobian),
    )
    return model
