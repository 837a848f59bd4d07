"""Check results and reports shared by the verification suites and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one identity checked on one instance."""

    check: str  # machine name of the law
    law: str  # human statement of the law
    instance: str  # which object it was checked on
    ok: bool
    details: str = ""  # counterexample payload on failure

    def to_doc(self) -> dict:
        return {
            "check": self.check,
            "law": self.law,
            "instance": self.instance,
            "ok": self.ok,
            "details": self.details,
        }


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)

    def add(self, check: str, law: str, instance: str, ok: bool, details: str = "") -> None:
        self.results.append(CheckResult(check, law, instance, bool(ok), details))

    def extend(self, other: "Report") -> None:
        self.results.extend(other.results)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.ok]

    def to_doc(self) -> dict:
        return {
            "ok": self.ok,
            "total": len(self.results),
            "failed": len(self.failures()),
            "results": [r.to_doc() for r in self.results],
        }

    def render_text(self, verbose: bool = False) -> str:
        lines = []
        for r in self.results:
            if not r.ok or verbose:
                status = "ok" if r.ok else "FAIL"
                line = f"[{status}] {r.check} on {r.instance}"
                if r.details and not r.ok:
                    line += f"\n       {r.law}\n       {r.details}"
                lines.append(line)
        lines.append(
            f"{len(self.results)} checks, {len(self.failures())} failures"
        )
        return "\n".join(lines)
