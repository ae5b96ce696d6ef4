"""Verification suites: seeded scenario builders and the suite runner."""

from flownet.verify.suites import CaseResult, SuiteResult, SuiteRunner, conservation_error, lyapunov_monotone

__all__ = ["CaseResult", "SuiteResult", "SuiteRunner", "conservation_error", "lyapunov_monotone"]
