"""
API路由配置
"""
from fastapi import APIRouter

from app.api.endpoints import audit, dependence, geometry, puiseux, series

# 创建API路由器
api_router = APIRouter()

# 添加各个端点路由
api_router.include_router(geometry.router, prefix="/geometry", tags=["Newton 多边形与多面体"])
api_router.include_router(puiseux.router, prefix="/puiseux", tags=["Newton-Puiseux"])
api_router.include_router(series.router, prefix="/series", tags=["级数展开"])
api_router.include_router(dependence.router, prefix="/dependence", tags=["依赖关系"])
api_router.include_router(audit.router, prefix="/audit", tags=["审计"])
