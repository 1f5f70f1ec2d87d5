"""
完整审计报告
依次运行：对审计、依赖关系、首一化、首边数据、N(P) 与形状审计、Φ_a 的界与顶点下界；
各阶段的错误带阶段标记收集到 errors 中，不中断其余阶段
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from app.audit.bounds import BoundSet, bounds_from_data, vertex_rho_bound
from app.audit.pair_audit import AuditReport, audit_pair
from app.core.dependence import DependencePoly, EdgeData, MonicResult, build_dependence, extension_degree, \
    leading_edge_data, normalize_monic
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracPoly, Number, as_rational, format_rational
from app.core.newton_geometry import LatticePolytope, PhiAFace, ShapeAudit, phi_a_face, shape_audit_polytope

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


@dataclass
class VertexBound:
    vertex: Tuple[Number, ...]
    bound: Optional[Number] = None
    error: Optional[str] = None


@dataclass
class FullReport:
    audit: AuditReport
    shift: Tuple[Number, Number]
    dependence: Optional[DependencePoly] = None
    monic: Optional[MonicResult] = None
    edge: Optional[EdgeData] = None
    polytope: Optional[LatticePolytope] = None
    shape: Optional[ShapeAudit] = None
    phi_a: Optional[PhiAFace] = None
    vertex_bounds: List[VertexBound] = field(default_factory=list)
    vertex_bounds_ok: Optional[bool] = None
    bounds: Optional[BoundSet] = None
    rho_within_upper: Optional[bool] = None
    degree_estimate: dict = field(default_factory=dict)
    errors: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        shape_ok = self.shape is None or self.shape.passed
        return self.audit.passed and shape_ok and not self.errors


def _run_stage(report: FullReport, stage: str, action: Callable):
    try:
        return action()
    except ToolkitError as e:
        logger.warning(f"阶段 {stage} 失败: {e.message}")
        report.errors.append(e.with_stage(stage).to_dict())
    except Exception as e:
        logger.error(f"阶段 {stage} 出现意外错误: {e}", exc_info=True)
        report.errors.append({"stage": stage, "message": str(e)})
    return None


def full_report(f: FracPoly, g: FracPoly, shift: Optional[Tuple[Number, Number]] = None) -> FullReport:
    """
    对 (f, g) 运行全部分析

    参数:
        f, g: x, y 的多项式
        shift: 一般位置平移 (c1, c2)，依赖关系与 N(P) 对 (f − c1, g − c2) 计算

    返回:
        FullReport；对审计本身的输入错误直接抛出
    """
    c1, c2 = (as_rational(shift[0]), as_rational(shift[1])) if shift else (0, 0)
    audit = audit_pair(f, g)
    report = FullReport(audit, (c1, c2))
    shifted_f, shifted_g = f - c1, g - c2

    report.dependence = _run_stage(report, "dependence", lambda: build_dependence(shifted_f, shifted_g))
    dependence = report.dependence
    if dependence is None:
        return report

    P = dependence.P
    ny_f, ny_g = int(shifted_f.degree("y")), int(shifted_g.degree("y"))
    report.monic = _run_stage(report, "monic", lambda: normalize_monic(P))
    report.edge = _run_stage(report, "edge", lambda: leading_edge_data(P, ny_f, ny_g))
    report.polytope = dependence.polytope
    edge = report.edge.edge if report.edge and report.edge.ok else None
    report.shape = _run_stage(report, "polytope", lambda: shape_audit_polytope(report.polytope, edge))

    if edge is not None and report.polytope is not None:
        report.phi_a = phi_a_face(report.polytope, edge)
        lambda0 = Fraction(report.edge.b0, report.edge.a0)
        n_edge = report.edge.a0 * report.edge.nu
        for vertex in report.polytope.vertices:
            i, j, k = vertex
            if k <= 0:
                continue
            try:
                report.vertex_bounds.append(VertexBound(vertex, vertex_rho_bound(i, j, k, lambda0, n_edge)))
            except ToolkitError as e:
                report.vertex_bounds.append(VertexBound(vertex, error=e.message))
        if report.phi_a is not None:
            report.vertex_bounds_ok = all(
                vb.bound <= report.phi_a.rho for vb in report.vertex_bounds if vb.bound is not None
            )

    if report.edge is not None:
        profile = audit.profile
        report.bounds = _run_stage(
            report, "bounds", lambda: bounds_from_data(profile.m, profile.n, report.edge.a0, report.edge.b0)
        )
    if report.bounds is not None and report.phi_a is not None:
        report.rho_within_upper = report.phi_a.rho < report.bounds.rho_upper

    degree = extension_degree(P)
    report.degree_estimate = {
        "extension_degree": degree,
        "degx_upper": None if report.bounds is None else format_rational(report.bounds.degx_upper),
        "within_bound": None if report.bounds is None else degree < report.bounds.degx_upper,
        "jacobian_pair": audit.get("jacobian_unimodular").passed,
    }
    logger.info(f"完整报告: {len(report.errors)} 个阶段错误, 扩张次数 {degree}")
    return report
