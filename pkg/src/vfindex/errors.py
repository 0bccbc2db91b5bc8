"""Exception taxonomy shared by all vfindex modules.

Every error carries a short machine-readable code and an optional payload
dict so the CLI can emit structured error objects (exit code 2).
"""


class VfError(Exception):
    code = "error"

    def __init__(self, message, **payload):
        super().__init__(message)
        self.payload = payload

    def as_dict(self):
        d = {"error": self.code, "message": str(self)}
        if self.payload:
            d["detail"] = {
                k: v if isinstance(v, (str, int, float, bool, type(None)))
                else repr(v)
                for k, v in self.payload.items()}
        return d


# --- expression layer ------------------------------------------------------

class ExprSyntaxError(VfError):
    code = "syntax_error"

    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})", offset=offset)
        self.offset = offset


class UnknownVariable(VfError):
    code = "unknown_variable"


class ArityMismatch(VfError):
    code = "arity_mismatch"


class DomainError(VfError):
    code = "domain_error"


# --- geometry / manifold layer ---------------------------------------------

class DegenerateBoundary(VfError):
    code = "degenerate_boundary"


class NoConvergence(VfError):
    code = "no_convergence"


class ChartTooSmall(VfError):
    code = "chart_too_small"


# --- degree engine ----------------------------------------------------------

class VanishingOnSphere(VfError):
    code = "vanishing_on_sphere"


class ResolutionExhausted(VfError):
    code = "resolution_exhausted"


class NoRegularValue(VfError):
    code = "no_regular_value"


class DegreeUnstable(VfError):
    code = "degree_unstable"


# --- zero isolation ----------------------------------------------------------

class SuspectedNonIsolatedZero(VfError):
    code = "suspected_non_isolated_zero"


class ZeroOnBoundary(VfError):
    code = "zero_on_boundary"


class NotTame(VfError):
    """Tangential component fails to have isolated transverse zeros.

    ``uniform_sign`` is set to "Inward"/"Outward" when the tangential part
    vanishes identically on the boundary but the transverse part keeps one
    sign everywhere (the radial-type special case), else None.
    """

    code = "not_tame"

    def __init__(self, message, uniform_sign=None, **payload):
        super().__init__(message, **payload)
        self.uniform_sign = uniform_sign


class CannotTame(VfError):
    code = "cannot_tame"


# --- oracles & scenes --------------------------------------------------------

class Unstable(VfError):
    code = "unstable"


class UnknownShape(VfError):
    code = "unknown_shape"


class SceneParseError(VfError):
    code = "scene_parse_error"


class SchemaError(VfError):
    code = "schema_error"

    def __init__(self, message, key=None):
        super().__init__(message, key=key)
        self.key = key
