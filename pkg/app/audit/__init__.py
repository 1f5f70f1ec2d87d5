"""
反例约束审计
"""
from app.audit.bounds import BoundSet, CharPairVerdict, bounds_from_data, char_pair_contradiction, vertex_rho_bound
from app.audit.pair_audit import AuditReport, PairProfile, audit_pair
from app.audit.report import FullReport, full_report

__all__ = [
    "AuditReport",
    "BoundSet",
    "CharPairVerdict",
    "FullReport",
    "PairProfile",
    "audit_pair",
    "bounds_from_data",
    "char_pair_contradiction",
    "full_report",
    "vertex_rho_bound",
]
