"""Exception types shared across the package.

Every domain failure derives from DomainError and carries a stable
machine-readable ``code`` so the service layer and CLI can map errors to
responses and exit codes without string matching.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all expected failures."""

    code = "domain_error"

    def payload(self) -> dict:
        """JSON-friendly description of the failure."""
        return {"error": self.code, "message": str(self)}


class ConfigError(DomainError):
    """Configuration violates a structural, strictness, or mode constraint."""

    code = "config_invalid"

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(f"{v.constraint}: {v.message}" for v in self.violations))

    def payload(self) -> dict:
        return {
            "error": self.code,
            "violations": [{"constraint": v.constraint, "message": v.message} for v in self.violations],
        }


class NotOutsideW0(DomainError):
    code = "not_outside_w0"


class ZeroNotInA(DomainError):
    code = "zero_not_in_a"


class ElementNotInA(DomainError):
    code = "element_not_in_a"


class NotEligible(DomainError):
    """Split requested at an exponent find_splittable would not return."""

    code = "not_eligible"


class RuleBMembershipViolation(DomainError):
    """A rule (b) target exponent falls outside W0; the config is not strict."""

    code = "rule_b_membership"


class TooFewTerms(DomainError):
    """Fewer than h terms after splitting; n is below the guarantee threshold."""

    code = "too_few_terms"

    def __init__(self, s: int, h: int):
        self.s = s
        self.h = h
        super().__init__(f"split produced s={s} terms, need at least h={h}")


class BelowGuarantee(DomainError):
    """n <= m_2, outside the range the avoid-4 construction covers."""

    code = "below_guarantee"

    def __init__(self, n_bits: int, m2: int):
        self.n_bits = n_bits
        self.m2 = m2
        super().__init__(f"n ({n_bits} bits) is not above m_2 = {m2}")


class NoMergeSlot(DomainError):
    code = "no_merge_slot"


class PaperFormulaDivergence(DomainError):
    """The source construction's branch formula yields an invalid certificate.

    Carries enough detail to show which exponent lands in which class.
    """

    code = "paper_formula_divergence"

    def __init__(self, message: str, *, branch: str, detail: dict | None = None):
        self.branch = branch
        self.detail = dict(detail or {})
        super().__init__(message)

    def payload(self) -> dict:
        return {"error": self.code, "branch": self.branch, "message": str(self), "detail": self.detail}


class WindowTooLarge(DomainError):
    code = "window_too_large"


class ParameterMismatch(DomainError):
    """Parameters fall in the regime where the basis is provably non-minimal."""

    code = "parameter_mismatch"


class CertificateFormatError(DomainError):
    code = "certificate_format"


class UnsupportedVersion(DomainError):
    code = "unsupported_version"


class DecimalSizeError(DomainError):
    code = "decimal_size"


class InvariantViolation(DomainError):
    """An internal invariant failed; indicates a bug, not bad input."""

    code = "invariant_violation"
