"""Check results and report assembly shared by all verification suites."""
from __future__ import annotations

import json
import time

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


class CheckResult:
    __slots__ = ("id", "status", "detail", "residual", "certificate",
                 "elapsed_ms", "cert_obj")

    def __init__(self, id: str, status: str, detail: str = "",
                 residual: str = None, certificate: str = None,
                 elapsed_ms: float = 0.0, cert_obj=None):
        self.id = id
        self.status = status
        self.detail = detail
        self.residual = residual
        self.certificate = certificate
        self.elapsed_ms = elapsed_ms
        # optional (Certificate, Presentation) pair for later dumping;
        # never serialized into reports
        self.cert_obj = cert_obj

    def to_dict(self, with_timing: bool = True) -> dict:
        d = {"id": self.id, "status": self.status}
        if self.detail:
            d["detail"] = self.detail
        if self.residual is not None:
            d["residual"] = self.residual
        if self.certificate is not None:
            d["certificate"] = self.certificate
        if with_timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d

    def __repr__(self):
        return f"CheckResult({self.id}: {self.status})"


class Report:
    """Ordered collection of CheckResults, stable by check id."""

    def __init__(self, results=None):
        self.results = list(results or [])

    def add(self, result: CheckResult):
        self.results.append(result)
        return result

    def check(self, id: str, passed: bool, detail: str = "",
              residual=None) -> CheckResult:
        status = PASS if passed else FAIL
        return self.add(CheckResult(
            id, status, detail,
            residual=None if passed or residual is None else str(residual)))

    def extend(self, other: "Report"):
        self.results.extend(other.results)
        return self

    @property
    def ok(self) -> bool:
        return all(r.status == PASS for r in self.results)

    @property
    def has_fail(self) -> bool:
        return any(r.status == FAIL for r in self.results)

    @property
    def has_inconclusive(self) -> bool:
        return any(r.status == INCONCLUSIVE for r in self.results)

    def by_id(self, id: str) -> CheckResult:
        for r in self.results:
            if r.id == id:
                return r
        raise KeyError(id)

    def to_json(self, config: dict = None, with_timing: bool = True) -> str:
        return json.dumps(
            {"config": config or {},
             "results": [r.to_dict(with_timing) for r in
                         sorted(self.results, key=lambda r: r.id)]},
            indent=2)

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)


class timer:
    """Context manager stamping elapsed_ms onto a CheckResult afterwards."""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1000.0
        return False
