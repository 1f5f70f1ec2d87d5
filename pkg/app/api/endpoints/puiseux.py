"""
Newton-Puiseux API端点
"""
from fastapi import APIRouter

from app.api.deps import run_request
from app.cli.parser import parse_poly
from app.models.schemas import PuiseuxRequest, PuiseuxResponse
from app.services.toolkit_service import ToolkitService

# 创建路由
router = APIRouter()


@router.post("/branches", response_model=PuiseuxResponse)
def branches(request: PuiseuxRequest):
    """全部分支，截断到给定阶数"""
    model, _ = run_request(
        "puiseux",
        lambda: ToolkitService().puiseux(parse_poly(request.f), request.direction, request.order, request.digits),
    )
    return model
