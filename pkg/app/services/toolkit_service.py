"""
工具包服务
CLI 与 HTTP 接口共用的协调层：调用各计算模块，并把结果转换为响应模型
"""
import json
import logging
from typing import List, Optional, Sequence, Tuple

from sqlalchemy.orm import Session

from app.audit import bounds_from_data, char_pair_contradiction, full_report
from app.audit.report import FullReport
from app.core.checks import CheckResult
from app.core.dependence import DependencePoly, MonicResult, build_dependence, dependence_to_dict, \
    extension_degree, normalize_monic, verify_dependence
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracPoly, as_rational, format_rational
from app.core.newton_geometry import LatticePolytope, PhiAFace, ShapeAudit, TrapezoidVerdict, derive_edge_e, \
    newton_polygon, newton_polytope, phi_a_face, polytope_to_dict, shape_audit_polytope, trapezoid_membership
from app.core.puiseux import all_branches, branch_to_dict
from app.core.series_expansion import BUDGET_EXHAUSTED, expand_g_complete, expand_g_in_f, expansion_to_dict
from app.models.models import AuditRecord
from app.models.schemas import AuditResponse, BoundsModel, CharPairModel, CheckModel, DependenceResponse, \
    ErrorDetail, ExpansionResponse, MonicModel, PhiAModel, PolygonResponse, PolytopeModel, PolytopeResponse, \
    PuiseuxResponse, ShapeAuditModel, TrapezoidModel, VertexBoundModel

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def _point(p: Sequence) -> str:
    return "(" + ",".join(format_rational(c) for c in p) + ")"


def _checks(checks: List[CheckResult]) -> List[CheckModel]:
    return [CheckModel(**c.to_dict()) for c in checks]


def _polytope_model(poly: LatticePolytope) -> PolytopeModel:
    return PolytopeModel(**polytope_to_dict(poly))


def _shape_model(shape: ShapeAudit) -> ShapeAuditModel:
    return ShapeAuditModel(passed=shape.passed, ceiling_kind=shape.ceiling_kind, checks=_checks(shape.checks))


def _phi_a_model(phi: PhiAFace) -> PhiAModel:
    return PhiAModel(rho=format_rational(phi.rho), sigma=format_rational(phi.sigma),
                     normal=list(phi.face.normal), vertex_ids=list(phi.face.vertex_ids))


def _trapezoid_model(verdict: TrapezoidVerdict) -> TrapezoidModel:
    return TrapezoidModel(
        passed=verdict.passed,
        m=format_rational(verdict.m),
        n=format_rational(verdict.n),
        violations=verdict.violations,
        bisectrix_edges=[f"{_point(u)}-{_point(v)}" for u, v in verdict.bisectrix_edges],
    )


def _monic_model(monic: MonicResult) -> MonicModel:
    return MonicModel(ok=monic.ok, P=str(monic.P), p0=str(monic.p0),
                      c0=None if monic.c0 is None else format_rational(as_rational(monic.c0)),
                      d=monic.d, reason=monic.reason)


def _dependence_model(dep: DependencePoly, monic: Optional[MonicResult] = None,
                      verified: Optional[bool] = None) -> DependenceResponse:
    model = DependenceResponse(**dependence_to_dict(dep))
    model.verified = verified
    model.monic = None if monic is None else _monic_model(monic)
    model.extension_degree = extension_degree(dep)
    return model


def parse_shift(text: Optional[str]) -> Optional[Tuple]:
    """解析 "c1,c2" 形式的平移"""
    if not text:
        return None
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise ToolkitError(f"shift must be 'c1,c2', got {text!r}", stage="cli")
    try:
        return as_rational(parts[0]), as_rational(parts[1])
    except ToolkitError:
        raise ToolkitError(f"shift must be rational, got {text!r}", stage="cli")


class ToolkitService:
    """各命令的统一入口，返回 (响应模型, 判定是否通过)"""

    def __init__(self, db: Optional[Session] = None):
        self.db = db

    # ---- 几何 ----

    def polygon(self, f: FracPoly) -> Tuple[PolygonResponse, bool]:
        polygon = newton_polygon(f)
        trapezoid = None
        if set(f.variables()) <= {"x", "y"}:
            trapezoid = _trapezoid_model(trapezoid_membership(f))
        return PolygonResponse(f=str(f), polygon=_polytope_model(polygon), trapezoid=trapezoid), True

    def polytope(self, f: FracPoly, g: Optional[FracPoly] = None) -> Tuple[PolytopeResponse, bool]:
        """
        N(P) 与形状审计

        参数:
            f: 不给 g 时即为 P(F, G, x)
            g: 给出时先计算 (f, g) 的依赖关系 P
        """
        edge = None
        if g is not None:
            dependence = build_dependence(f, g)
            P, poly, edge = dependence.P, dependence.polytope, dependence.edge
        else:
            P, poly = f, newton_polytope(f)
        response = PolytopeResponse(P=str(P), polytope=_polytope_model(poly))
        if poly.dim != 3 or not poly.is_full_dimensional:
            response.shape_error = ErrorDetail(stage="polytope", message="degenerate polytope: shape audit "
                                                                          "needs a 3-dimensional N(P)")
            return response, False
        edge = edge or derive_edge_e(poly)
        shape = shape_audit_polytope(poly, edge)
        response.shape = _shape_model(shape)
        if edge is not None:
            response.edge = [[format_rational(c) for c in p] for p in edge]
            phi = phi_a_face(poly, edge)
            response.phi_a = None if phi is None else _phi_a_model(phi)
        return response, shape.passed

    # ---- Puiseux ----

    def puiseux(self, f: FracPoly, direction: str = "increasing", order="8",
                digits: Optional[int] = None) -> Tuple[PuiseuxResponse, bool]:
        branches = all_branches(f, direction, as_rational(order), digits=digits)
        response = PuiseuxResponse(
            f=str(f),
            direction=branches[0].direction if branches else direction,
            order=format_rational(as_rational(order)),
            deg_y=int(f.degree("y")),
            branches=[branch_to_dict(b) for b in branches],
        )
        return response, True

    # ---- 展开 ----

    def expand(self, f: FracPoly, g: FracPoly, floor: int = -8, complete: bool = False,
               check_jacobian: bool = True) -> Tuple[ExpansionResponse, bool]:
        if complete:
            result = expand_g_complete(f, g, floor)
        else:
            result = expand_g_in_f(f, g, floor, check_jacobian=check_jacobian)
        data = expansion_to_dict(result)
        response = ExpansionResponse(**data, m=format_rational(result.m), n=result.n, floor=result.floor)
        return response, result.status != BUDGET_EXHAUSTED

    # ---- 依赖关系 ----

    def depend(self, f: FracPoly, g: FracPoly) -> Tuple[DependenceResponse, bool]:
        dependence = build_dependence(f, g)
        monic = normalize_monic(dependence)
        verified = verify_dependence(dependence, f, g)
        response = _dependence_model(dependence, monic, verified)
        ok = verified and monic.ok and not dependence.edge_verdict
        return response, ok

    # ---- 审计 ----

    def bounds(self, m: int, n: int, a0: int, b0: int) -> Tuple[BoundsModel, bool]:
        return BoundsModel(**bounds_from_data(m, n, a0, b0).to_dict()), True

    def charpair(self, a: int, b: int, a0: int, b0: int) -> Tuple[CharPairModel, bool]:
        verdict = char_pair_contradiction(a, b, a0, b0)
        return CharPairModel(**verdict.to_dict()), verdict.contradiction

    def audit(self, f: FracPoly, g: FracPoly, shift: Optional[Tuple] = None, name: Optional[str] = None,
              save: bool = False) -> Tuple[AuditResponse, bool]:
        report = full_report(f, g, shift)
        response = self.report_model(f, g, report)
        if save and self.db is not None:
            response.record_id = self.save_record(name, response)
        return response, report.passed

    @staticmethod
    def report_model(f: FracPoly, g: FracPoly, report: FullReport) -> AuditResponse:
        """FullReport 转为响应模型"""
        response = AuditResponse(
            f=str(f),
            g=str(g),
            passed=report.passed,
            checks=_checks(report.audit.checks),
            shift=[format_rational(c) for c in report.shift],
            vertex_bounds=[
                VertexBoundModel(vertex=[format_rational(c) for c in vb.vertex],
                                 bound=None if vb.bound is None else format_rational(vb.bound),
                                 error=vb.error)
                for vb in report.vertex_bounds
            ],
            vertex_bounds_ok=report.vertex_bounds_ok,
            rho_within_upper=report.rho_within_upper,
            degree_estimate=report.degree_estimate,
            errors=[ErrorDetail(**e) for e in report.errors],
        )
        if report.dependence is not None:
            response.dependence = _dependence_model(report.dependence, report.monic)
        if report.polytope is not None:
            response.polytope = _polytope_model(report.polytope)
        if report.shape is not None:
            response.shape = _shape_model(report.shape)
        if report.phi_a is not None:
            response.phi_a = _phi_a_model(report.phi_a)
        if report.bounds is not None:
            response.bounds = BoundsModel(**report.bounds.to_dict())
        return response

    def save_record(self, name: Optional[str], response: AuditResponse) -> Optional[int]:
        """保存审计记录，失败时回滚并返回 None"""
        try:
            record = AuditRecord(
                name=name,
                f=response.f,
                g=response.g,
                passed=response.passed,
                error_count=len(response.errors),
                report_json=json.dumps(response.model_dump(by_alias=True), ensure_ascii=False),
            )
            self.db.add(record)
            self.db.commit()
            self.db.refresh(record)
            logger.info(f"保存审计记录 {record.id}: f = {response.f}, g = {response.g}")
            return record.id
        except Exception as e:
            self.db.rollback()
            logger.error(f"保存审计记录失败: {e}")
            return None

    def list_records(self, limit: int = 50) -> List[AuditRecord]:
        return self.db.query(AuditRecord).order_by(AuditRecord.id.desc()).limit(limit).all()

    def get_record(self, record_id: int) -> Optional[AuditRecord]:
        return self.db.query(AuditRecord).filter(AuditRecord.id == record_id).first()
