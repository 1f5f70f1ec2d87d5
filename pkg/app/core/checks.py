"""
审计检查结果
"""
from dataclasses import dataclass

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class CheckResult:
    """单项检查：名称、状态（pass / fail / not-applicable）与见证信息"""
    name: str
    status: str
    witness: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness}


def check(name: str, ok: bool, witness: str = "") -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, witness)
