"""
Newton 多面体审计服务
精确有理数计算的 Newton 多边形 / 多面体、Puiseux 分支、级数展开、依赖关系与 Jacobian 对审计
"""
import logging

import uvicorn
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app import config
from app.api.router import api_router
from app.database.init_db import init_database

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# 创建FastAPI应用
app = FastAPI(
    title="Newton 多面体审计服务",
    description="对候选 Jacobian 对做精确的 Newton 多面体与依赖关系分析",
    version="1.0.0"
)

# 添加CORS中间件
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# 添加API路由
app.include_router(api_router, prefix="/api")


# 全局异常处理
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """全局异常处理器"""
    logger.error(f"全局异常: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content={
            "error": {
                "stage": "internal",
                "message": str(exc) if config.DEBUG else "服务器内部错误",
            }
        },
    )


# 健康检查端点
@app.get("/health")
async def health_check():
    """健康检查端点"""
    return {
        "status": "healthy",
        "service": "Newton 多面体审计服务",
        "version": "1.0.0"
    }


# 初始化数据库
@app.on_event("startup")
async def startup_event():
    init_database()


if __name__ == "__main__":
    uvicorn.run("main:app", host="0.0.0.0", port=config.PORT, reload=config.DEBUG)
