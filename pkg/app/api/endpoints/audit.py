"""
审计 API端点
"""
import logging
from typing import List

from fastapi import APIRouter, Depends, HTTPException, status
from sqlalchemy.orm import Session

from app.api.deps import run_request
from app.cli.parser import parse_poly
from app.database import get_db
from app.models.schemas import AuditRecordDetail, AuditRecordModel, AuditRequest, AuditResponse, BoundsModel, \
    BoundsRequest, CharPairModel, CharPairRequest
from app.services.toolkit_service import ToolkitService, parse_shift

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# 创建路由
router = APIRouter()


@router.post("", response_model=AuditResponse, status_code=status.HTTP_201_CREATED)
def audit(request: AuditRequest, db: Session = Depends(get_db)):
    """完整审计；save 为真时保存为审计记录"""
    def action():
        shift = None if request.shift is None else parse_shift(",".join(request.shift))
        service = ToolkitService(db)
        return service.audit(parse_poly(request.f), parse_poly(request.g), shift, request.name, request.save)

    model, _ = run_request("audit", action)
    return model


@router.get("/records", response_model=List[AuditRecordModel])
def list_records(limit: int = 50, db: Session = Depends(get_db)):
    """最近的审计记录"""
    return ToolkitService(db).list_records(limit)


@router.get("/records/{record_id}", response_model=AuditRecordDetail)
def get_record(record_id: int, db: Session = Depends(get_db)):
    record = ToolkitService(db).get_record(record_id)
    if not record:
        raise HTTPException(status_code=404, detail="审计记录不存在")
    return AuditRecordDetail(
        id=record.id,
        name=record.name,
        f=record.f,
        g=record.g,
        passed=record.passed,
        error_count=record.error_count,
        created_at=record.created_at,
        report=record.report,
    )


@router.post("/bounds", response_model=BoundsModel)
def bounds(request: BoundsRequest):
    """Φ_a 的权重界"""
    model, _ = run_request("bounds", lambda: ToolkitService().bounds(request.m, request.n, request.a0, request.b0))
    return model


@router.post("/charpair", response_model=CharPairModel)
def charpair(request: CharPairRequest):
    """两个特征对情形：ρ 的上下界"""
    model, _ = run_request(
        "charpair", lambda: ToolkitService().charpair(request.a, request.b, request.a0, request.b0)
    )
    return model
